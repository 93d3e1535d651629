//! Text rendering of linear combinations `sum_i p_i * atom_i` with polynomial
//! coefficients, shared by derivations, enveloping-algebra elements and tensors.

use std::fmt::Write;

use num_traits::{One, Signed};

use crate::polyring::{Poly, RingCtx};

/// Renders `sum p * atom`; an empty atom denotes the ring part. The output is
/// re-parseable by the session grammar.
pub fn format_combination<'a, I>(ring: &RingCtx, parts: I) -> String
where
    I: IntoIterator<Item = (String, &'a Poly)>,
{
    let mut out = String::new();
    for (atom, p) in parts {
        if p.is_zero() {
            continue;
        }
        let terms = p.sorted_terms(ring.order());
        if atom.is_empty() || terms.len() == 1 {
            for (m, c) in terms {
                push_sign(&mut out, c.is_negative());
                let abs = c.abs();
                let mut factors = Vec::new();
                if !abs.is_one() || (m.is_one() && atom.is_empty()) {
                    factors.push(abs.to_string());
                }
                if !m.is_one() {
                    let mut s = String::new();
                    crate::polyring::write_monomial(&mut s, m, ring.vars()).expect("string write");
                    factors.push(s);
                }
                if !atom.is_empty() {
                    factors.push(atom.clone());
                }
                out.push_str(&factors.join("*"));
            }
        } else {
            push_sign(&mut out, false);
            write!(out, "({})*{}", ring.display(p), atom).expect("string write");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn push_sign(out: &mut String, negative: bool) {
    match (out.is_empty(), negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}
