use std::fmt;

use super::monomial::{monomials_up_to, Monomial, MonomialOrder, OrderKind};
use super::poly::Poly;
use super::Rational;
use crate::Error;

/// Ambient variables, an optional principal modulus and a term order.
///
/// Represents `Q[x_1..x_n]` or `Q[x_1..x_n]/<f>`. Since a single polynomial is
/// a Groebner basis of the ideal it generates, division by `f` yields
/// canonical representatives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingCtx {
    vars: Vec<String>,
    modulus: Option<Poly>,
    order: MonomialOrder,
    lead: Option<(Monomial, Rational)>,
}

impl RingCtx {
    pub fn new(vars: Vec<String>, modulus: Option<Poly>, order: MonomialOrder) -> Result<Self, Error> {
        let n = vars.len();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate or empty variable name `{v}`")));
            }
        }
        if order.nvars() != n {
            return Err(Error::VariableMismatch { expected: n, found: order.nvars() });
        }
        let lead = match &modulus {
            None => None,
            Some(f) => {
                if f.nvars() != n {
                    return Err(Error::VariableMismatch { expected: n, found: f.nvars() });
                }
                if f.is_constant() {
                    return Err(Error::InvalidRing("modulus must be nonzero and nonconstant".into()));
                }
                let (m, c) = f.leading_term(&order).expect("nonconstant");
                Some((m.clone(), c.clone()))
            }
        };
        Ok(RingCtx { vars, modulus, order, lead })
    }

    /// `Q[vars]` under grevlex with the declared variable order.
    pub fn polynomial(vars: &[&str]) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let order = MonomialOrder::new(OrderKind::Grevlex, vars.len());
        RingCtx::new(vars, None, order).expect("valid polynomial ring")
    }

    /// `Q[vars]/<modulus>` under grevlex.
    pub fn quotient(vars: &[&str], modulus: Poly) -> Result<Self, Error> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let order = MonomialOrder::new(OrderKind::Grevlex, vars.len());
        RingCtx::new(vars, Some(modulus), order)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<Self, Error> {
        RingCtx::new(self.vars.clone(), self.modulus.clone(), order)
    }

    /// The same variables and order with no modulus.
    pub fn ambient(&self) -> Self {
        RingCtx::new(self.vars.clone(), None, self.order.clone()).expect("ambient of a valid ring")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn modulus(&self) -> Option<&Poly> {
        self.modulus.as_ref()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.nvars())
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.nvars())
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), i)
    }

    pub fn constant(&self, c: Rational) -> Poly {
        Poly::constant(self.nvars(), c)
    }

    pub fn check(&self, p: &Poly) -> Result<(), Error> {
        if p.nvars() != self.nvars() {
            return Err(Error::VariableMismatch { expected: self.nvars(), found: p.nvars() });
        }
        Ok(())
    }

    /// Multivariate division by the modulus: returns `(quotient, remainder)`
    /// with `p = quotient * modulus + remainder` and no remainder monomial
    /// divisible by the leading monomial of the modulus.
    pub fn divide(&self, p: &Poly) -> Result<(Poly, Poly), Error> {
        self.check(p)?;
        let (f, (lm, lc)) = match (&self.modulus, &self.lead) {
            (Some(f), Some(l)) => (f, l),
            _ => return Ok((self.zero(), p.clone())),
        };
        let mut quotient = self.zero();
        let mut remainder = self.zero();
        let mut rest = p.clone();
        while let Some((m, c)) = rest.leading_term(&self.order) {
            let (m, c) = (m.clone(), c.clone());
            match m.div(lm) {
                Some(shift) => {
                    let factor = &c / lc;
                    rest.add_assign_ref(&f.mul_term(&shift, &-factor.clone()));
                    quotient.add_term(shift, factor);
                }
                None => {
                    rest.add_term(m.clone(), -c.clone());
                    remainder.add_term(m, c);
                }
            }
        }
        Ok((quotient, remainder))
    }

    /// Canonical representative of `p` in the quotient ring.
    pub fn reduce(&self, p: &Poly) -> Result<Poly, Error> {
        self.check(p)?;
        match &self.lead {
            None => Ok(p.clone()),
            Some((lm, _)) => {
                if p.terms().all(|(m, _)| !lm.divides(m)) {
                    Ok(p.clone())
                } else {
                    Ok(self.divide(p)?.1)
                }
            }
        }
    }

    pub fn ideal_member(&self, p: &Poly) -> Result<bool, Error> {
        if self.modulus.is_none() {
            return Err(Error::NoModulus);
        }
        Ok(self.reduce(p)?.is_zero())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly, Error> {
        self.check(a)?;
        self.check(b)?;
        self.reduce(&(a * b))
    }

    /// Monomials of degree at most `max_degree` not divisible by the leading
    /// monomial of the modulus; a basis of the degree-truncated quotient.
    pub fn standard_monomials(&self, max_degree: u32) -> Vec<Monomial> {
        let all = monomials_up_to(self.nvars(), max_degree);
        match &self.lead {
            None => all,
            Some((lm, _)) => all.into_iter().filter(|m| !lm.divides(m)).collect(),
        }
    }

    pub fn is_reduced(&self, p: &Poly) -> bool {
        match &self.lead {
            None => true,
            Some((lm, _)) => p.terms().all(|(m, _)| !lm.divides(m)),
        }
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> super::poly::PolyDisplay<'a> {
        p.display(&self.vars, &self.order)
    }

    pub fn fmt_poly(&self, p: &Poly) -> String {
        self.display(p).to_string()
    }
}

impl fmt::Display for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.vars.join(","))?;
        if let Some(m) = &self.modulus {
            write!(f, "/({})", self.display(m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy_ring() -> RingCtx {
        RingCtx::quotient(&["x", "y"], Poly::from_terms(2, &[(1, 1, &[1, 1])])).unwrap()
    }

    fn cone_ring() -> RingCtx {
        let f = Poly::from_terms(3, &[(1, 1, &[2, 0, 0]), (4, 1, &[0, 1, 1])]);
        RingCtx::quotient(&["x", "y", "z"], f).unwrap()
    }

    #[test]
    fn modulus_reduces_to_zero() {
        let r = xy_ring();
        assert!(r.reduce(r.modulus().unwrap()).unwrap().is_zero());
        let c = cone_ring();
        assert!(c.reduce(c.modulus().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn hand_division() {
        // x^2 y + x^2 + y  ->  x^2 + y
        let r = xy_ring();
        let p = Poly::from_terms(2, &[(1, 1, &[2, 1]), (1, 1, &[2, 0]), (1, 1, &[0, 1])]);
        let expected = Poly::from_terms(2, &[(1, 1, &[2, 0]), (1, 1, &[0, 1])]);
        assert_eq!(r.reduce(&p).unwrap(), expected);
        let (quot, rem) = r.divide(&p).unwrap();
        assert_eq!(quot, Poly::var(2, 0));
        assert_eq!(rem, expected);
    }

    #[test]
    fn membership() {
        let r = xy_ring();
        assert!(r.ideal_member(&Poly::from_terms(2, &[(1, 1, &[2, 1])])).unwrap());
        assert!(!r.ideal_member(&Poly::var(2, 1)).unwrap());
        assert!(r.ideal_member(&Poly::zero(2)).unwrap());
        assert!(matches!(RingCtx::polynomial(&["x"]).ideal_member(&Poly::zero(1)), Err(Error::NoModulus)));
    }

    #[test]
    fn mismatched_variables_rejected() {
        let r = xy_ring();
        assert!(matches!(r.reduce(&Poly::var(3, 0)), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn no_modulus_is_identity() {
        let r = RingCtx::polynomial(&["x", "y"]);
        let p = Poly::from_terms(2, &[(1, 1, &[2, 1]), (3, 1, &[0, 0])]);
        assert_eq!(r.reduce(&p).unwrap(), p);
    }

    #[test]
    fn constant_modulus_rejected() {
        assert!(RingCtx::quotient(&["x"], Poly::from_int(1, 3)).is_err());
        assert!(RingCtx::quotient(&["x"], Poly::zero(1)).is_err());
    }

    #[test]
    fn standard_monomials_of_normal_crossing() {
        // 1, and x^n, y^n for n = 1..=12
        assert_eq!(xy_ring().standard_monomials(12).len(), 25);
    }

    fn small_poly(nvars: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-5i64..=5, 1i64..=3, prop::collection::vec(0u32..=3, nvars)), 0..5).prop_map(
            move |ts| {
                let mut p = Poly::zero(nvars);
                for (n, d, e) in ts {
                    p.add_term(Monomial::new(e), Rational::new(n.into(), d.into()));
                }
                p
            },
        )
    }

    fn orders() -> impl Strategy<Value = OrderKind> {
        prop_oneof![Just(OrderKind::Grevlex), Just(OrderKind::Grlex), Just(OrderKind::Lex)]
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_homomorphism(p in small_poly(3), q in small_poly(3), kind in orders()) {
            let r = cone_ring().with_order(MonomialOrder::new(kind, 3)).unwrap();
            let rp = r.reduce(&p).unwrap();
            let rq = r.reduce(&q).unwrap();
            prop_assert_eq!(r.reduce(&(&p + &q)).unwrap(), &rp + &rq);
            prop_assert_eq!(r.reduce(&(&p * &q)).unwrap(), r.reduce(&(&rp * &rq)).unwrap());
            prop_assert_eq!(r.reduce(&rp).unwrap(), rp.clone());
            prop_assert!(r.is_reduced(&rp));
        }

        #[test]
        fn division_reconstructs_dividend(p in small_poly(3), kind in orders()) {
            let r = cone_ring().with_order(MonomialOrder::new(kind, 3)).unwrap();
            let (quot, rem) = r.divide(&p).unwrap();
            prop_assert_eq!(&(&quot * r.modulus().unwrap()) + &rem, p.clone());
            // zero remainder exactly for multiples of the modulus
            let multiple = &p * r.modulus().unwrap();
            prop_assert!(r.reduce(&multiple).unwrap().is_zero());
            prop_assert_eq!(r.reduce(&p).unwrap().is_zero(), rem.is_zero());
        }

        #[test]
        fn partials_commute_and_obey_leibniz(p in small_poly(3), q in small_poly(3), i in 0usize..3, j in 0usize..3) {
            let pij = p.partial(i).unwrap().partial(j).unwrap();
            let pji = p.partial(j).unwrap().partial(i).unwrap();
            prop_assert_eq!(pij, pji);
            let lhs = (&p * &q).partial(i).unwrap();
            let rhs = &(&p.partial(i).unwrap() * &q) + &(&p * &q.partial(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
