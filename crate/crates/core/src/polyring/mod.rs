//! Exact multivariate polynomials over the rationals and canonical normal
//! forms in principal quotient rings `Q[x_1..x_n]/<f>`.

mod monomial;
mod poly;
mod ring;

pub use monomial::{monomials_up_to, Monomial, MonomialOrder, OrderKind};
pub use poly::{Poly, PolyDisplay};
pub(crate) use poly::write_monomial;
pub use ring::RingCtx;

/// Exact rational number; always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Serializes as `"num/den"`, including integers (`"3/1"`).
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"n"`, `"-n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if d == 0.into() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// `k!` as an exact rational.
pub fn factorial(k: usize) -> Rational {
    let mut acc = num_bigint::BigInt::from(1);
    for i in 2..=k {
        acc *= i;
    }
    Rational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(rational_to_string(&rational(6, -4)), "-3/2");
        assert_eq!(rational_to_string(&integer(3)), "3/1");
        assert_eq!(parse_rational(" -3/2"), Some(rational(-3, 2)));
        assert_eq!(parse_rational("4/2"), Some(integer(2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn factorials_are_exact() {
        assert_eq!(factorial(0), integer(1));
        assert_eq!(factorial(4), integer(24));
        assert_eq!(factorial(25).numer().to_string(), "15511210043330985984000000");
    }
}
