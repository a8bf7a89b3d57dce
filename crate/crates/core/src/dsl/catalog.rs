//! Catalog files: blank-line separated stanzas of `key: value` lines.
//!
//! ```text
//! # comment
//! name: Eq1
//! params: n m p q
//! paper: Eq(1)
//! identity: <lhs> == <rhs>
//! ```
//!
//! Optional `expands: <source> <rank>=<value>` and `relabel: a=b c=d ...`
//! keys mark an entry as a rank-instantiated copy of another entry.

use std::collections::HashSet;

use super::{DslError, Expansion, Identity};

pub const BUILTIN_CATALOG_TEXT: &str = include_str!("../../catalog/identities.cat");

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    entries: Vec<Identity>,
}

/// The catalog shipped with the crate.
pub fn builtin_catalog() -> Catalog {
    Catalog::parse(BUILTIN_CATALOG_TEXT).expect("built-in catalog must parse")
}

#[derive(Default)]
struct Stanza {
    start: usize,
    name: Option<String>,
    params: Option<Vec<String>>,
    paper: Option<String>,
    identity: Option<(String, usize, usize)>,
    expands: Option<(String, usize)>,
    relabel: Option<(String, usize)>,
}

fn catalog_err(line: usize, message: impl Into<String>) -> DslError {
    DslError::Catalog {
        line,
        message: message.into(),
    }
}

fn parse_assignments(text: &str, line: usize) -> Result<Vec<(String, String)>, DslError> {
    text.split_whitespace()
        .map(|pair| {
            pair.split_once('=')
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .ok_or_else(|| catalog_err(line, format!("expected `name=value`, found `{pair}`")))
        })
        .collect()
}

impl Stanza {
    fn finish(self) -> Result<Identity, DslError> {
        let missing = |key: &str| catalog_err(self.start, format!("stanza is missing `{key}:`"));
        let name = self.name.clone().ok_or_else(|| missing("name"))?;
        let params = self.params.clone().ok_or_else(|| missing("params"))?;
        let paper = self.paper.clone().ok_or_else(|| missing("paper"))?;
        let (text, line, col) = self.identity.clone().ok_or_else(|| missing("identity"))?;
        let mut id = Identity::parse_at(name, params, paper, &text, line, col)?;

        match (self.expands, self.relabel) {
            (None, None) => {}
            (Some((exp, line)), relabel) => {
                let mut words = exp.split_whitespace();
                let source = words
                    .next()
                    .ok_or_else(|| catalog_err(line, "`expands:` needs a source name"))?
                    .to_string();
                let rank_text = words
                    .next()
                    .ok_or_else(|| catalog_err(line, "`expands:` needs `<rank>=<value>`"))?;
                let rank = parse_assignments(rank_text, line)?
                    .into_iter()
                    .next()
                    .and_then(|(_, v)| v.parse::<i64>().ok())
                    .ok_or_else(|| catalog_err(line, format!("bad rank assignment `{rank_text}`")))?;
                let relabel = match relabel {
                    Some((text, line)) => parse_assignments(&text, line)?,
                    None => id.params.iter().map(|p| (p.clone(), p.clone())).collect(),
                };
                id.expands = Some(Expansion { source, rank, relabel });
            }
            (None, Some((_, line))) => {
                return Err(catalog_err(line, "`relabel:` without `expands:`"));
            }
        }
        Ok(id)
    }
}

impl Catalog {
    pub fn new(entries: Vec<Identity>) -> Result<Catalog, DslError> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.name.clone()) {
                return Err(catalog_err(0, format!("duplicate identity name `{}`", e.name)));
            }
        }
        Ok(Catalog { entries })
    }

    pub fn parse(text: &str) -> Result<Catalog, DslError> {
        let mut entries: Vec<(Identity, usize)> = Vec::new();
        let mut current: Option<Stanza> = None;
        let flush = |st: Option<Stanza>, entries: &mut Vec<(Identity, usize)>| -> Result<(), DslError> {
            if let Some(st) = st {
                let start = st.start;
                entries.push((st.finish()?, start));
            }
            Ok(())
        };

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.starts_with('#') {
                continue;
            }
            if trimmed.is_empty() {
                flush(current.take(), &mut entries)?;
                continue;
            }
            let (key, value) = raw
                .split_once(':')
                .ok_or_else(|| catalog_err(line, format!("expected `key: value`, found `{trimmed}`")))?;
            let value_col = key.len() + 2 + (value.len() - value.trim_start().len());
            let value = value.trim();
            let st = current.get_or_insert_with(|| Stanza {
                start: line,
                ..Stanza::default()
            });
            let dup = |set: bool| {
                if set {
                    Err(catalog_err(line, format!("`{}:` given twice", key.trim())))
                } else {
                    Ok(())
                }
            };
            match key.trim() {
                "name" => {
                    dup(st.name.is_some())?;
                    st.name = Some(value.to_string());
                }
                "params" => {
                    dup(st.params.is_some())?;
                    st.params = Some(
                        value
                            .split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|s| !s.is_empty())
                            .map(str::to_string)
                            .collect(),
                    );
                }
                "paper" => {
                    dup(st.paper.is_some())?;
                    st.paper = Some(value.to_string());
                }
                "identity" => {
                    dup(st.identity.is_some())?;
                    st.identity = Some((value.to_string(), line, value_col));
                }
                "expands" => {
                    dup(st.expands.is_some())?;
                    st.expands = Some((value.to_string(), line));
                }
                "relabel" => {
                    dup(st.relabel.is_some())?;
                    st.relabel = Some((value.to_string(), line));
                }
                other => return Err(catalog_err(line, format!("unknown key `{other}`"))),
            }
        }
        flush(current.take(), &mut entries)?;

        let mut seen = HashSet::new();
        for (e, line) in &entries {
            if !seen.insert(e.name.clone()) {
                return Err(catalog_err(*line, format!("duplicate identity name `{}`", e.name)));
            }
        }
        for (e, line) in &entries {
            if let Some(exp) = &e.expands {
                validate_expansion(e, exp, entries.iter().map(|(e, _)| e), *line)?;
            }
        }
        Ok(Catalog {
            entries: entries.into_iter().map(|(e, _)| e).collect(),
        })
    }

    pub fn entries(&self) -> &[Identity] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Identity> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Entries whose name or paper tag equals `selector`.
    pub fn select(&self, selector: &str) -> Vec<&Identity> {
        self.entries
            .iter()
            .filter(|e| e.name == selector || e.paper_tag == selector)
            .collect()
    }

    /// Canonical catalog text; parses back to an equal catalog.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("name: {}\n", e.name));
            out.push_str(&format!("params: {}\n", e.params.join(" ")));
            out.push_str(&format!("paper: {}\n", e.paper_tag));
            if let Some(exp) = &e.expands {
                let rank = self
                    .get(&exp.source)
                    .and_then(|s| s.rank_param())
                    .unwrap_or("n");
                out.push_str(&format!("expands: {} {}={}\n", exp.source, rank, exp.rank));
                let pairs: Vec<String> = exp.relabel.iter().map(|(a, b)| format!("{a}={b}")).collect();
                out.push_str(&format!("relabel: {}\n", pairs.join(" ")));
            }
            out.push_str(&format!("identity: {}\n", e.text()));
        }
        out
    }
}

fn validate_expansion<'a>(
    entry: &Identity,
    exp: &Expansion,
    mut all: impl Iterator<Item = &'a Identity>,
    line: usize,
) -> Result<(), DslError> {
    let source = all
        .find(|e| e.name == exp.source)
        .ok_or_else(|| catalog_err(line, format!("`{}` expands unknown identity `{}`", entry.name, exp.source)))?;
    if source.rank_param().is_none() {
        return Err(catalog_err(line, format!("`{}` has no rank parameter to instantiate", source.name)));
    }
    let mut locals: Vec<&str> = exp.relabel.iter().map(|(l, _)| l.as_str()).collect();
    let mut targets: Vec<&str> = exp.relabel.iter().map(|(_, s)| s.as_str()).collect();
    let mut want_locals: Vec<&str> = entry.params.iter().map(String::as_str).collect();
    let mut want_targets = source.shape_params();
    locals.sort_unstable();
    targets.sort_unstable();
    want_locals.sort_unstable();
    want_targets.sort_unstable();
    if locals != want_locals || targets != want_targets {
        return Err(catalog_err(
            line,
            format!(
                "relabel of `{}` must map its parameters {:?} onto the non-rank parameters {:?} of `{}`",
                entry.name, want_locals, want_targets, source.name
            ),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_all_entries() {
        let cat = builtin_catalog();
        assert_eq!(cat.len(), 29);
        assert_eq!(cat.get("Eq1").unwrap().paper_tag, "Eq(1)");
        assert_eq!(cat.select("Eq(11)").len(), 1);
    }

    #[test]
    fn builtin_lines_are_canonical() {
        // every identity line in the shipped file is a fixpoint of parse∘print
        let cat = builtin_catalog();
        for line in BUILTIN_CATALOG_TEXT.lines() {
            if let Some(text) = line.strip_prefix("identity: ") {
                assert!(
                    cat.entries().iter().any(|e| e.text() == text),
                    "not canonical: {text}"
                );
            }
        }
    }

    #[test]
    fn expanded_entry_lookup() {
        let cat = builtin_catalog();
        let e = cat.get("S3.n2.L-forward").unwrap();
        assert_eq!(
            e.text(),
            "L(m+p)^2*G(n) - 2*L(m)*L(m+p)*G(n+p) + L(m)^2*G(n+2p) == 5*F(p)^2*(G(n-2m+1) - G(n-2m-1))"
        );
        let exp = e.expands.as_ref().unwrap();
        assert_eq!(exp.source, "Eq2");
        assert_eq!(exp.rank, 2);
    }

    #[test]
    fn to_text_round_trips() {
        let cat = builtin_catalog();
        let again = Catalog::parse(&cat.to_text()).unwrap();
        assert_eq!(cat, again);
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = "name: A\nparams: p\npaper: x\nidentity: G(p) == G(p)\n\nname: A\nparams: p\npaper: y\nidentity: F(p) == F(p)\n";
        let err = Catalog::parse(text).unwrap_err();
        assert_eq!(err, DslError::Catalog { line: 6, message: "duplicate identity name `A`".into() });
    }

    #[test]
    fn error_positions_are_file_relative() {
        let text = "# header\n\nname: A\nparams: p\npaper: x\nidentity: G(p) == G(q)\n";
        let err = Catalog::parse(text).unwrap_err();
        assert_eq!(err, DslError::Unbound { symbol: "q".into(), line: 6, col: 21 });
    }

    #[test]
    fn missing_and_unknown_keys() {
        assert!(matches!(
            Catalog::parse("name: A\nparams: p\nidentity: G(p) == G(p)\n"),
            Err(DslError::Catalog { line: 1, .. })
        ));
        assert!(matches!(
            Catalog::parse("name: A\nflavour: x\n"),
            Err(DslError::Catalog { line: 2, .. })
        ));
    }

    #[test]
    fn bad_relabel_rejected() {
        let text = "name: S\nparams: n m p q\npaper: s\nidentity: sum(k,0,n, G(p+q*k)*F(m)) == sum(k,0,n, G(p+q*k)*F(m))\n\n\
                    name: T\nparams: a\npaper: t\nexpands: S n=1\nrelabel: a=p\nidentity: G(a) == G(a)\n";
        assert!(matches!(Catalog::parse(text), Err(DslError::Catalog { line: 6, .. })));
    }
}
