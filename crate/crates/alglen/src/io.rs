//! Plain-text algebra files.
//!
//! ```text
//! # comment
//! field rational          # or: field gf <p>
//! dim 5
//! unital none             # or: unital <i>, or: unital vec <c_1> ... <c_n>
//! labels a b ab ba aa     # optional
//! mul 1 2 3 1             # b_1 b_2 gains 1 * b_3
//! ```
//!
//! `field` and `dim` come first; the remaining directives may appear in any
//! order, each header directive at most once.

use std::collections::HashSet;

use crate::algebra::{Algebra, Element, UnityStatus};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseAt { line, msg: msg.into() }
}

fn parse_index(tok: &str, dim: usize, line: usize) -> Result<usize> {
    let i: usize = tok.parse().map_err(|_| err(line, format!("bad index '{tok}'")))?;
    if i == 0 || i > dim {
        return Err(err(line, format!("index {i} out of range 1..={dim}")));
    }
    Ok(i)
}

fn parse_scalar(tok: &str, field: FieldSpec, line: usize) -> Result<Scalar> {
    Scalar::parse(tok, field).map_err(|e| err(line, e.to_string()))
}

pub fn parse_algebra(text: &str) -> Result<Algebra> {
    let mut field: Option<FieldSpec> = None;
    let mut alg: Option<Algebra> = None;
    let mut seen_unital = false;
    let mut seen_labels = false;
    let mut unity_line = 0;
    let mut triples = HashSet::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, args)) = toks.split_first() else { continue };
        match head {
            "field" => {
                if field.is_some() {
                    return Err(err(line, "field given twice"));
                }
                field = Some(match args {
                    ["rational"] => FieldSpec::Rational,
                    ["gf", p] => {
                        let p: u64 = p.parse().map_err(|_| err(line, format!("bad modulus '{p}'")))?;
                        FieldSpec::prime(p).map_err(|e| err(line, e.to_string()))?
                    }
                    _ => return Err(err(line, "expected 'field rational' or 'field gf <p>'")),
                });
            }
            "dim" => {
                let f = field.ok_or_else(|| err(line, "'dim' before 'field'"))?;
                if alg.is_some() {
                    return Err(err(line, "dim given twice"));
                }
                let [d] = args else { return Err(err(line, "expected 'dim <n>'")) };
                let d: usize = d.parse().map_err(|_| err(line, format!("bad dimension '{d}'")))?;
                alg = Some(Algebra::new(f, d).map_err(|e| err(line, e.to_string()))?);
            }
            "unital" | "labels" | "mul" => {
                let a = alg.as_mut().ok_or_else(|| err(line, format!("'{head}' before 'dim'")))?;
                let (f, dim) = (a.field(), a.dim());
                match head {
                    "unital" => {
                        if seen_unital {
                            return Err(err(line, "unital given twice"));
                        }
                        seen_unital = true;
                        unity_line = line;
                        let u = match args {
                            ["none"] => None,
                            [i] => Some(Element::basis(f, dim, parse_index(i, dim, line)?)?),
                            ["vec", cs @ ..] => {
                                if cs.len() != dim {
                                    return Err(err(line, format!("expected {dim} coordinates, got {}", cs.len())));
                                }
                                let coords = cs.iter().map(|c| parse_scalar(c, f, line)).collect::<Result<_>>()?;
                                Some(Element::from_coords(coords))
                            }
                            _ => return Err(err(line, "expected 'unital <i>', 'unital none' or 'unital vec ...'")),
                        };
                        a.set_unity(u)?;
                    }
                    "labels" => {
                        if seen_labels {
                            return Err(err(line, "labels given twice"));
                        }
                        seen_labels = true;
                        if args.len() != dim {
                            return Err(err(line, format!("expected {dim} labels, got {}", args.len())));
                        }
                        a.set_labels(Some(args.iter().map(|s| s.to_string()).collect()))?;
                    }
                    _ => {
                        let [i, j, k, c] = args else { return Err(err(line, "expected 'mul <i> <j> <k> <scalar>'")) };
                        let (i, j, k) = (parse_index(i, dim, line)?, parse_index(j, dim, line)?, parse_index(k, dim, line)?);
                        if !triples.insert((i, j, k)) {
                            return Err(err(line, format!("duplicate product ({i}, {j}, {k})")));
                        }
                        let c = parse_scalar(c, f, line)?;
                        a.add_product(i, j, k, c)?;
                    }
                }
            }
            other => return Err(err(line, format!("unknown directive '{other}'"))),
        }
    }
    let alg = alg.ok_or_else(|| Error::Parse("missing 'field' or 'dim'".into()))?;
    if let UnityStatus::Fails(i) = alg.verify_unity() {
        return Err(err(unity_line, format!("declared unity fails on basis vector {i}")));
    }
    Ok(alg)
}

pub fn print_algebra(alg: &Algebra) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", alg.field()));
    out.push_str(&format!("dim {}\n", alg.dim()));
    match alg.unity() {
        None => out.push_str("unital none\n"),
        Some(u) => {
            let support: Vec<usize> = u.support().collect();
            if support.len() == 1 && u.coords()[support[0]].is_one() {
                out.push_str(&format!("unital {}\n", support[0] + 1));
            } else {
                let cs: Vec<String> = u.coords().iter().map(|c| c.to_string()).collect();
                out.push_str(&format!("unital vec {}\n", cs.join(" ")));
            }
        }
    }
    if let Some(l) = alg.labels() {
        out.push_str(&format!("labels {}\n", l.join(" ")));
    }
    for (i, j, k, c) in alg.structure_constants() {
        out.push_str(&format!("mul {i} {j} {k} {c}\n"));
    }
    out
}

/// One coordinate vector per line; `#` starts a comment.
pub fn parse_vectors(text: &str, field: FieldSpec, dim: usize) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != dim {
            return Err(err(line, format!("expected {dim} coordinates, got {}", toks.len())));
        }
        let coords = toks.iter().map(|t| parse_scalar(t, field, line)).collect::<Result<_>>()?;
        out.push(Element::from_coords(coords));
    }
    Ok(out)
}
