//! The shipped list of claim identifiers and the equations they audit.

use std::collections::BTreeMap;
use std::sync::OnceLock;

const RAW: &str = include_str!("../data/claims.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Classical or derived identity; a failure is a hard error.
    Identity,
    /// Audited claim; its status is only reported.
    Claim,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub paper_eq: String,
    pub kind: Kind,
}

pub fn manifest() -> &'static BTreeMap<String, Entry> {
    static CELL: OnceLock<BTreeMap<String, Entry>> = OnceLock::new();
    CELL.get_or_init(|| parse(RAW))
}

fn parse(raw: &str) -> BTreeMap<String, Entry> {
    raw.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            assert_eq!(cols.len(), 3, "malformed manifest line {line:?}");
            let kind = match cols[2] {
                "identity" => Kind::Identity,
                "claim" => Kind::Claim,
                other => panic!("unknown claim kind {other:?}"),
            };
            (cols[0].to_string(), Entry { paper_eq: cols[1].to_string(), kind })
        })
        .collect()
}

pub fn lookup(claim_id: &str) -> Option<&'static Entry> {
    manifest().get(claim_id)
}

/// Claim identifiers of kind [`Kind::Claim`].
pub fn claim_ids() -> Vec<&'static str> {
    manifest().iter().filter(|(_, e)| e.kind == Kind::Claim).map(|(k, _)| k.as_str()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_rows() {
        let m = manifest();
        assert_eq!(m.len(), RAW.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count());
        assert_eq!(lookup("rhfe.race").unwrap().kind, Kind::Identity);
        assert_eq!(lookup("rhfe.functional_equation").unwrap().kind, Kind::Claim);
        assert!(lookup("nope").is_none());
    }
}
