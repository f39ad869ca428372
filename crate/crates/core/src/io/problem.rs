use std::collections::HashSet;
use std::fmt::Write as _;

use super::lexer::{lex, Spanned, Tok};
use super::ParseError;
use crate::model::{Assignment, BayesianNetwork, MapProblem};

/// Parses a `.prob` file: one `map NAME+` line and one
/// `evidence (NAME=STATE)*` line, in either order.
pub fn parse_problem(text: &str, net: &BayesianNetwork) -> Result<MapProblem, ParseError> {
    let toks = lex(text)?;
    let mut lines: Vec<&[Spanned]> = Vec::new();
    let mut start = 0;
    for i in 1..=toks.len() {
        if i == toks.len() || toks[i].line != toks[start].line {
            lines.push(&toks[start..i]);
            start = i;
        }
    }

    let mut map_line: Option<(&Spanned, Vec<usize>)> = None;
    let mut evidence: Option<Assignment> = None;
    for line in lines {
        let head = &line[0];
        match &head.tok {
            Tok::Word(kw) if kw == "map" => {
                if map_line.is_some() {
                    return Err(ParseError::at(head, "duplicate `map` line"));
                }
                let mut vars = Vec::new();
                let mut seen = HashSet::new();
                for t in &line[1..] {
                    let Tok::Word(name) = &t.tok else {
                        return Err(ParseError::at(
                            t,
                            format!("expected variable name, found {}", t.tok.describe()),
                        ));
                    };
                    let v = net
                        .find(name)
                        .ok_or_else(|| ParseError::at(t, format!("unknown variable `{name}`")))?;
                    if !seen.insert(v) {
                        return Err(ParseError::at(t, format!("variable `{name}` listed twice")));
                    }
                    vars.push(v);
                }
                if vars.is_empty() {
                    return Err(ParseError::at(head, "at least one MAP variable required"));
                }
                map_line = Some((head, vars));
            }
            Tok::Word(kw) if kw == "evidence" => {
                if evidence.is_some() {
                    return Err(ParseError::at(head, "duplicate `evidence` line"));
                }
                let mut e = Assignment::new();
                let mut rest = &line[1..];
                while !rest.is_empty() {
                    let [n, eq, s, tail @ ..] = rest else {
                        return Err(ParseError::at(&rest[0], "expected `NAME=STATE`"));
                    };
                    let (Tok::Word(name), Tok::Eq, Tok::Word(state)) = (&n.tok, &eq.tok, &s.tok) else {
                        return Err(ParseError::at(n, "expected `NAME=STATE`"));
                    };
                    let v = net
                        .find(name)
                        .ok_or_else(|| ParseError::at(n, format!("unknown variable `{name}`")))?;
                    let st = net
                        .variable(v)
                        .state_index(state)
                        .ok_or_else(|| ParseError::at(s, format!("unknown state `{state}` of `{name}`")))?;
                    if e.contains(v) {
                        return Err(ParseError::at(n, format!("evidence on `{name}` given twice")));
                    }
                    e.set(v, st);
                    rest = tail;
                }
                evidence = Some(e);
            }
            other => {
                return Err(ParseError::at(
                    head,
                    format!("expected `map` or `evidence`, found {}", other.describe()),
                ));
            }
        }
    }

    let eof = ParseError::new(text.lines().count().max(1), 1, "");
    let (map_at, map_vars) = map_line.ok_or(ParseError {
        message: "missing `map` line".into(),
        ..eof.clone()
    })?;
    let evidence = evidence.ok_or(ParseError {
        message: "missing `evidence` line".into(),
        ..eof
    })?;
    MapProblem::new(net, map_vars, evidence).map_err(|e| ParseError::at(map_at, e.to_string()))
}

pub fn serialize_problem(problem: &MapProblem, net: &BayesianNetwork) -> String {
    let mut out = String::from("map");
    for &v in problem.map_vars() {
        let _ = write!(out, " {}", net.variable(v).name);
    }
    out.push_str("\nevidence");
    for (v, s) in problem.evidence().iter() {
        let var = net.variable(v);
        let _ = write!(out, " {}={}", var.name, var.states[s]);
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::sprinkler;

    #[test]
    fn sprinkler_problem() {
        let net = sprinkler();
        let p = parse_problem("map Sprinkler Rain\nevidence WetGrass=t\n", &net).unwrap();
        assert_eq!(p.map_vars(), &[1, 0]);
        assert_eq!(p.evidence(), &Assignment::from_pairs([(2, 0)]));
        // order-insensitive, spaces around `=`
        let q = parse_problem("# q\nevidence WetGrass = t\nmap Sprinkler Rain", &net).unwrap();
        assert_eq!(p, q);
        assert_eq!(parse_problem(&serialize_problem(&p, &net), &net).unwrap(), p);
    }

    #[test]
    fn overlap_is_rejected() {
        let net = sprinkler();
        let err = parse_problem("map Sprinkler\nevidence Sprinkler=t\n", &net).unwrap_err();
        assert!(err.message.contains("both a MAP variable and evidence"), "{err}");
    }

    #[test]
    fn empty_map_line() {
        let net = sprinkler();
        let err = parse_problem("map\nevidence\n", &net).unwrap_err();
        assert_eq!(err.message, "at least one MAP variable required");
        assert_eq!((err.line, err.column), (1, 1));
    }

    #[test]
    fn unknown_names_and_missing_lines() {
        let net = sprinkler();
        assert!(parse_problem("map Fog\nevidence\n", &net)
            .unwrap_err()
            .message
            .contains("unknown variable"));
        let err = parse_problem("map Rain\nevidence WetGrass=maybe\n", &net).unwrap_err();
        assert!(err.message.contains("unknown state"));
        assert_eq!((err.line, err.column), (2, 19));
        assert!(parse_problem("map Rain\n", &net)
            .unwrap_err()
            .message
            .contains("missing `evidence`"));
        assert!(parse_problem("evidence\n", &net)
            .unwrap_err()
            .message
            .contains("missing `map`"));
        assert!(parse_problem("map Rain\nevidence WetGrass\n", &net).is_err());
    }
}
