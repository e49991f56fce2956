use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AfError, ArgumentationFramework, Attack};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tgf,
    Apx,
    Json,
    Dot,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tgf" => Ok(Format::Tgf),
            "apx" => Ok(Format::Apx),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// Optional per-argument degrees and per-attack intensities to render
/// alongside a framework.
#[derive(Debug, Clone, Default)]
pub struct Annotations {
    pub degrees: Option<BTreeMap<String, f64>>,
    pub intensities: Option<BTreeMap<Attack, f64>>,
}

/// Trivial Graph Format: node lines, a `#` line, then `src dst` lines.
pub fn parse_tgf(text: &str) -> Result<ArgumentationFramework, AfError> {
    let mut arguments = Vec::new();
    let mut attacks = Vec::new();
    let mut in_edges = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "#" {
            if in_edges {
                return Err(AfError::Syntax {
                    line: lineno + 1,
                    message: "second `#` separator".into(),
                });
            }
            in_edges = true;
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if in_edges {
            if tokens.len() != 2 {
                return Err(AfError::Syntax {
                    line: lineno + 1,
                    message: format!("expected `src dst`, found `{line}`"),
                });
            }
            attacks.push((tokens[0].to_string(), tokens[1].to_string()));
        } else {
            // Anything after the identifier is a TGF node label.
            arguments.push(tokens[0].to_string());
        }
    }
    if !in_edges {
        return Err(AfError::MissingSeparator);
    }
    ArgumentationFramework::new(arguments, attacks)
}

/// ASPARTIX-style `arg(a).` / `att(a,b).` statements; `%` starts a comment.
pub fn parse_apx(text: &str) -> Result<ArgumentationFramework, AfError> {
    let mut arguments = Vec::new();
    let mut attacks = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('%').next().unwrap_or("");
        let syntax = |message: String| AfError::Syntax {
            line: lineno + 1,
            message,
        };
        let mut rest = line.trim_start();
        while !rest.is_empty() {
            let (kind, after) = if let Some(r) = rest.strip_prefix("arg") {
                ("arg", r)
            } else if let Some(r) = rest.strip_prefix("att") {
                ("att", r)
            } else {
                return Err(syntax(format!("unexpected input `{rest}`")));
            };
            let after = after
                .trim_start()
                .strip_prefix('(')
                .ok_or_else(|| syntax(format!("expected `(` after `{kind}`")))?;
            let close = after
                .find(')')
                .ok_or_else(|| syntax("missing `)`".into()))?;
            let inner = &after[..close];
            let tail = after[close + 1..]
                .trim_start()
                .strip_prefix('.')
                .ok_or_else(|| syntax("missing terminating `.`".into()))?;
            let fields: Vec<&str> = inner.split(',').map(str::trim).collect();
            match (kind, fields.as_slice()) {
                ("arg", [id]) if !id.is_empty() => arguments.push(id.to_string()),
                ("att", [s, t]) if !s.is_empty() && !t.is_empty() => {
                    attacks.push((s.to_string(), t.to_string()))
                }
                _ => return Err(syntax(format!("malformed `{kind}({inner})`"))),
            }
            rest = tail.trim_start();
        }
    }
    ArgumentationFramework::new(arguments, attacks)
}

#[derive(Serialize, Deserialize)]
struct JsonAf {
    arguments: Vec<String>,
    attacks: Vec<(String, String)>,
}

#[derive(Serialize)]
struct JsonIntensity<'a> {
    source: &'a str,
    target: &'a str,
    s: f64,
}

#[derive(Serialize)]
struct JsonAnnotatedAf<'a> {
    arguments: Vec<&'a str>,
    attacks: Vec<(&'a str, &'a str)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degrees: Option<&'a BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    intensities: Option<Vec<JsonIntensity<'a>>>,
}

impl Serialize for ArgumentationFramework {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        JsonAf {
            arguments: self.arguments().iter().cloned().collect(),
            attacks: self
                .attacks()
                .iter()
                .map(|a| (a.source.clone(), a.target.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ArgumentationFramework {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = JsonAf::deserialize(deserializer)?;
        ArgumentationFramework::new(raw.arguments, raw.attacks).map_err(serde::de::Error::custom)
    }
}

/// `{"arguments":[...],"attacks":[["src","dst"],...]}`
pub fn parse_json(text: &str) -> Result<ArgumentationFramework, AfError> {
    let parsed: JsonAf = serde_json::from_str(text).map_err(|e| AfError::Syntax {
        line: e.line(),
        message: e.to_string(),
    })?;
    ArgumentationFramework::new(parsed.arguments, parsed.attacks)
}

/// Three-decimal rendering used by text views; never prints `-0.000`.
pub(crate) fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn check_annotations(af: &ArgumentationFramework, ann: &Annotations) -> Result<(), AfError> {
    if let Some(d) = &ann.degrees {
        if !d.keys().eq(af.arguments().iter()) {
            return Err(AfError::InconsistentAnnotation(
                "degrees must cover exactly the framework's arguments".into(),
            ));
        }
    }
    if let Some(s) = &ann.intensities {
        if !s.keys().eq(af.attacks().iter()) {
            return Err(AfError::InconsistentAnnotation(
                "intensities must cover exactly the framework's attacks".into(),
            ));
        }
    }
    Ok(())
}

/// Deterministic text rendering. TGF and APX ignore annotations.
pub fn serialize(
    af: &ArgumentationFramework,
    format: Format,
    annotations: Option<&Annotations>,
) -> Result<String, AfError> {
    let empty = Annotations::default();
    let ann = annotations.unwrap_or(&empty);
    check_annotations(af, ann)?;
    let mut out = String::new();
    match format {
        Format::Tgf => {
            for a in af.arguments() {
                writeln!(out, "{a}").unwrap();
            }
            out.push_str("#\n");
            for att in af.attacks() {
                writeln!(out, "{} {}", att.source, att.target).unwrap();
            }
        }
        Format::Apx => {
            for a in af.arguments() {
                writeln!(out, "arg({a}).").unwrap();
            }
            for att in af.attacks() {
                writeln!(out, "att({},{}).", att.source, att.target).unwrap();
            }
        }
        Format::Json => {
            let doc = JsonAnnotatedAf {
                arguments: af.arguments().iter().map(String::as_str).collect(),
                attacks: af
                    .attacks()
                    .iter()
                    .map(|a| (a.source.as_str(), a.target.as_str()))
                    .collect(),
                degrees: ann.degrees.as_ref(),
                intensities: ann.intensities.as_ref().map(|m| {
                    m.iter()
                        .map(|(a, s)| JsonIntensity {
                            source: &a.source,
                            target: &a.target,
                            s: *s,
                        })
                        .collect()
                }),
            };
            out = serde_json::to_string(&doc).expect("framework JSON is always serializable");
            out.push('\n');
        }
        Format::Dot => {
            out.push_str("digraph af {\n");
            for a in af.arguments() {
                match ann.degrees.as_ref().map(|d| d[a]) {
                    Some(deg) => writeln!(out, "  \"{a}\" [label=\"{a}\\n{}\"];", fmt3(deg)).unwrap(),
                    None => writeln!(out, "  \"{a}\";").unwrap(),
                }
            }
            for att in af.attacks() {
                match ann.intensities.as_ref().map(|m| m[att]) {
                    Some(s) => writeln!(
                        out,
                        "  \"{}\" -> \"{}\" [label=\"{}\"];",
                        att.source,
                        att.target,
                        fmt3(s)
                    )
                    .unwrap(),
                    None => writeln!(out, "  \"{}\" -> \"{}\";", att.source, att.target).unwrap(),
                }
            }
            out.push_str("}\n");
        }
    }
    Ok(out)
}
