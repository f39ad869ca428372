use std::collections::HashMap;
use std::fmt::Write as _;

use super::lexer::{lex, Cursor, Spanned, Tok};
use super::ParseError;
use crate::model::{BayesianNetwork, Cpt, ModelError, Variable, ROW_SUM_TOLERANCE};

struct PendingCpt<'a> {
    at: &'a Spanned,
    cpt: Cpt,
}

/// Parses a `.bnet` network description.
///
/// ```text
/// network NAME
/// var NAME { STATE, STATE, ... }
/// cpt CHILD | PARENT ... { ROW ; ROW ; ... }
/// ```
///
/// Rows enumerate parent configurations with the last parent fastest.
pub fn parse_network(text: &str) -> Result<BayesianNetwork, ParseError> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks, text);

    if !cur.at_keyword("network") {
        return Err(cur.error_here("expected `network` header"));
    }
    cur.next();
    let (name, _) = cur.ident("network name")?;

    let mut variables: Vec<Variable> = Vec::new();
    let mut var_at: Vec<&Spanned> = Vec::new();
    let mut by_name: HashMap<&str, usize> = HashMap::new();
    let mut cpts: Vec<PendingCpt> = Vec::new();
    let mut cpt_of: HashMap<usize, usize> = HashMap::new();

    while let Some(t) = cur.peek() {
        let Tok::Word(kw) = &t.tok else {
            return Err(ParseError::at(
                t,
                format!("expected `var` or `cpt`, found {}", t.tok.describe()),
            ));
        };
        match kw.as_str() {
            "var" => {
                if !cpts.is_empty() {
                    return Err(ParseError::at(
                        t,
                        "`var` declarations must precede all `cpt` blocks",
                    ));
                }
                cur.next();
                let (vname, vat) = cur.ident("variable name")?;
                if by_name.contains_key(vname) {
                    return Err(ParseError::at(
                        vat,
                        format!("duplicate declaration of variable `{vname}`"),
                    ));
                }
                cur.expect(Tok::LBrace, "`{`")?;
                let mut states: Vec<String> = Vec::new();
                loop {
                    let (s, sat) = cur.ident("state name")?;
                    if states.iter().any(|x| x == s) {
                        return Err(ParseError::at(sat, format!("duplicate state `{s}` in `{vname}`")));
                    }
                    states.push(s.to_string());
                    if cur.eat(&Tok::Comma) {
                        continue;
                    }
                    cur.expect(Tok::RBrace, "`,` or `}`")?;
                    break;
                }
                by_name.insert(vname, variables.len());
                var_at.push(vat);
                variables.push(Variable {
                    id: variables.len(),
                    name: vname.to_string(),
                    states,
                });
            }
            "cpt" => {
                let at = t;
                cur.next();
                let (cname, cat) = cur.ident("variable name")?;
                let child = *by_name
                    .get(cname)
                    .ok_or_else(|| ParseError::at(cat, format!("unknown variable `{cname}`")))?;
                if cpt_of.contains_key(&child) {
                    return Err(ParseError::at(cat, format!("duplicate cpt for `{cname}`")));
                }
                let mut parents = Vec::new();
                if cur.eat(&Tok::Pipe) {
                    while !matches!(cur.peek(), Some(Spanned { tok: Tok::LBrace, .. }) | None) {
                        let (pname, pat) = cur.ident("parent name")?;
                        let p = *by_name
                            .get(pname)
                            .ok_or_else(|| ParseError::at(pat, format!("unknown variable `{pname}`")))?;
                        if parents.contains(&p) {
                            return Err(ParseError::at(pat, format!("duplicate parent `{pname}`")));
                        }
                        parents.push(p);
                    }
                    if parents.is_empty() {
                        return Err(cur.error_here("expected at least one parent after `|`"));
                    }
                }
                let card = variables[child].states.len();
                let rows = parents
                    .iter()
                    .try_fold(1usize, |acc, &p| acc.checked_mul(variables[p].states.len()))
                    .filter(|r| r.checked_mul(card).is_some_and(|n| n <= 1 << 26))
                    .ok_or_else(|| ParseError::at(cat, format!("cpt of `{cname}` is too large")))?;
                let table = parse_rows(&mut cur, cname, rows, card)?;
                cpt_of.insert(child, cpts.len());
                cpts.push(PendingCpt {
                    at,
                    cpt: Cpt::new(child, parents, table),
                });
            }
            other => {
                return Err(ParseError::at(
                    t,
                    format!("expected `var` or `cpt`, found `{other}`"),
                ));
            }
        }
    }

    for (id, v) in variables.iter().enumerate() {
        if !cpt_of.contains_key(&id) {
            return Err(ParseError::at(
                var_at[id],
                format!("variable `{}` has no cpt", v.name),
            ));
        }
    }

    let positions: Vec<(usize, usize)> = {
        let mut p = vec![(1, 1); variables.len()];
        for pc in &cpts {
            p[pc.cpt.child] = (pc.at.line, pc.at.column);
        }
        p
    };
    let name_to_id: HashMap<String, usize> = variables.iter().map(|v| (v.name.clone(), v.id)).collect();
    BayesianNetwork::new(name, variables, cpts.into_iter().map(|p| p.cpt).collect()).map_err(|e| {
        let (line, column) = match &e {
            ModelError::Cycle(n) => name_to_id.get(n).map(|&i| positions[i]).unwrap_or((1, 1)),
            _ => (1, 1),
        };
        ParseError::new(line, column, e.to_string())
    })
}

fn parse_rows(cur: &mut Cursor<'_>, child: &str, rows: usize, card: usize) -> Result<Vec<f64>, ParseError> {
    let open = cur.expect(Tok::LBrace, "`{`")?;
    let mut table = Vec::with_capacity(rows * card);
    let mut row_count = 0usize;
    loop {
        let row_start = cur.peek().cloned();
        let mut row = Vec::with_capacity(card);
        while let Some(Spanned {
            tok: Tok::Word(_), ..
        }) = cur.peek()
        {
            let (w, wat) = cur.word("probability")?;
            let value: f64 = w
                .parse()
                .map_err(|_| ParseError::at(wat, format!("invalid number `{w}`")))?;
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(ParseError::at(wat, format!("probability `{w}` outside [0, 1]")));
            }
            row.push(value);
        }
        let pos = row_start.as_ref();
        let err_at = |msg: String| match pos {
            Some(t) => ParseError::at(t, msg),
            None => cur.error_here(msg),
        };
        if row.len() != card {
            return Err(err_at(format!(
                "cpt of `{child}` row {} has {} entries, expected {card}",
                row_count + 1,
                row.len()
            )));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(err_at(format!(
                "cpt of `{child}` row {} sums to {sum}",
                row_count + 1
            )));
        }
        table.extend(row);
        row_count += 1;
        if row_count > rows {
            return Err(err_at(format!("cpt of `{child}` has more than {rows} rows")));
        }
        if cur.eat(&Tok::Semi) {
            continue;
        }
        break;
    }
    if row_count != rows {
        return Err(ParseError::at(
            open,
            format!("cpt of `{child}` has {row_count} rows, expected {rows}"),
        ));
    }
    cur.expect(Tok::RBrace, "`;` or `}`")?;
    Ok(table)
}

/// Canonical `.bnet` text. Numbers use the shortest decimal that parses
/// back to the same `f64`.
pub fn serialize_network(net: &BayesianNetwork) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network {}\n", net.name());
    for v in net.variables() {
        let _ = writeln!(out, "var {} {{ {} }}", v.name, v.states.join(", "));
    }
    out.push('\n');
    for cpt in net.cpts() {
        let child = &net.variable(cpt.child).name;
        let card = net.cardinality(cpt.child);
        let rows: Vec<String> = cpt
            .table
            .chunks(card)
            .map(|r| r.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" "))
            .collect();
        if cpt.parents.is_empty() {
            let _ = writeln!(out, "cpt {child} {{ {} }}", rows.join("; "));
        } else {
            let parents: Vec<&str> = cpt
                .parents
                .iter()
                .map(|&p| net.variable(p).name.as_str())
                .collect();
            let _ = writeln!(out, "cpt {child} | {} {{", parents.join(" "));
            let last = rows.len() - 1;
            for (i, r) in rows.iter().enumerate() {
                let sep = if i == last { "" } else { ";" };
                let _ = writeln!(out, "  {r}{sep}");
            }
            out.push_str("}\n");
        }
    }
    out
}
