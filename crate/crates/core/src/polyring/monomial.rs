use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial `x_1^{e_1} ... x_n^{e_n}`.
///
/// The derived `Ord` is plain lexicographic order on the exponent vector; it is
/// only used for deterministic storage. Term orders live in [`MonomialOrder`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All monomials in `nvars` variables of total degree at most `max_degree`,
/// by increasing degree and, within a degree, in descending lex order.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut current = vec![0u32; nvars];
        fill_degree(nvars, 0, d, &mut current, &mut out);
    }
    out
}

fn fill_degree(nvars: usize, pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if nvars == 0 {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if pos == nvars - 1 {
        current[pos] = remaining;
        out.push(Monomial(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill_degree(nvars, pos + 1, remaining - e, current, out);
    }
    current[pos] = 0;
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OrderKind {
    Grevlex,
    Grlex,
    Lex,
}

impl OrderKind {
    pub fn name(self) -> &'static str {
        match self {
            OrderKind::Grevlex => "grevlex",
            OrderKind::Grlex => "grlex",
            OrderKind::Lex => "lex",
        }
    }
}

impl std::str::FromStr for OrderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grevlex" => Ok(OrderKind::Grevlex),
            "grlex" => Ok(OrderKind::Grlex),
            "lex" => Ok(OrderKind::Lex),
            other => Err(format!("unknown monomial order `{other}`")),
        }
    }
}

/// A term order together with a variable priority permutation.
///
/// `priority[0]` is the most significant variable. With the identity
/// permutation the declared variable order is `x_0 > x_1 > ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder { kind, priority: (0..nvars).collect() }
    }

    /// Returns `None` if `priority` is not a permutation of `0..priority.len()`.
    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; priority.len()];
        for &p in &priority {
            if p >= seen.len() || seen[p] {
                return None;
            }
            seen[p] = true;
        }
        Some(MonomialOrder { kind, priority })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        let lex = || {
            for &i in &self.priority {
                match ea[i].cmp(&eb[i]) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::Grlex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for &i in self.priority.iter().rev() {
                    match ea[i].cmp(&eb[i]) {
                        Ordering::Equal => continue,
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }
}
