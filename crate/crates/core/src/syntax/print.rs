//! Pretty-printing in the concrete syntax accepted by [`super::parse`].

use std::fmt;

use super::{Formula, FALSE_ATOM, TRUE_ATOM};

const OR: u8 = 1;
const AND: u8 = 2;
const TEMPORAL: u8 = 3;
const UNARY: u8 = 4;

fn is_prefix(f: &Formula) -> bool {
    matches!(f, Formula::Exists(..) | Formula::Forall(..) | Formula::Bind(..))
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Until(a, _) if **a == Formula::atom(TRUE_ATOM) => UNARY,
        Formula::Release(a, _) if **a == Formula::atom(FALSE_ATOM) => UNARY,
        Formula::Until(..) | Formula::Release(..) => TEMPORAL,
        _ => UNARY,
    }
}

/// Writes `f` so that it parses back at precedence `min`.
fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let needs_parens = is_prefix(f) || level(f) < min;
    if needs_parens {
        out.write_str("(")?;
        write_bare(f, out)?;
        out.write_str(")")
    } else {
        write_bare(f, out)
    }
}

fn write_bare(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Atom(p) => out.write_str(p),
        Formula::NegAtom(p) => write!(out, "!{p}"),
        Formula::Or(a, b) => {
            write_at(a, OR, out)?;
            out.write_str(" | ")?;
            write_at(b, AND, out)
        }
        Formula::And(a, b) => {
            write_at(a, AND, out)?;
            out.write_str(" & ")?;
            write_at(b, TEMPORAL, out)
        }
        Formula::Until(a, b) if **a == Formula::atom(TRUE_ATOM) => {
            out.write_str("F ")?;
            write_at(b, UNARY, out)
        }
        Formula::Release(a, b) if **a == Formula::atom(FALSE_ATOM) => {
            out.write_str("G ")?;
            write_at(b, UNARY, out)
        }
        Formula::Until(a, b) | Formula::Release(a, b) => {
            write_at(a, UNARY, out)?;
            out.write_str(if matches!(f, Formula::Until(..)) {
                " U "
            } else {
                " R "
            })?;
            write_at(b, TEMPORAL, out)
        }
        Formula::Next(a) => {
            out.write_str("X ")?;
            write_at(a, UNARY, out)
        }
        // prefix forms extend to the right, so their body is printed bare
        Formula::Exists(x, b) => {
            write!(out, "E {x} ")?;
            write_bare(b, out)
        }
        Formula::Forall(x, b) => {
            write!(out, "A {x} ")?;
            write_bare(b, out)
        }
        Formula::Bind(a, x, b) => {
            write!(out, "({a},{x}) ")?;
            write_bare(b, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bare(self, f)
    }
}
