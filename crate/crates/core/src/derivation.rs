//! Derivations of `Q[x]` and `Q[x]/<f>`, logarithmic derivations, and
//! Lie-Rinehart presentations given by generating derivations and a bracket
//! table.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::display::format_combination;
use crate::linalg::Matrix;
use crate::polyring::{monomials_up_to, Monomial, OrderKind, MonomialOrder, Poly, Rational, RingCtx};
use crate::report::{Check, CheckReport, Status};
use crate::Error;

/// A vector field `sum_i c_i d/dx_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Derivation {
    coeffs: Vec<Poly>,
}

impl Derivation {
    pub fn new(coeffs: Vec<Poly>) -> Self {
        let n = coeffs.len();
        assert!(coeffs.iter().all(|c| c.nvars() == n), "derivation coefficient arity");
        Derivation { coeffs }
    }

    pub fn zero(nvars: usize) -> Self {
        Derivation { coeffs: vec![Poly::zero(nvars); nvars] }
    }

    /// `d/dx_index`
    pub fn partial(nvars: usize, index: usize) -> Self {
        let mut d = Self::zero(nvars);
        d.coeffs[index] = Poly::one(nvars);
        d
    }

    /// `sum_i x_i d/dx_i`
    pub fn euler(nvars: usize) -> Self {
        Derivation { coeffs: (0..nvars).map(|i| Poly::var(nvars, i)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    fn check(&self, ring: &RingCtx) -> Result<(), Error> {
        if self.nvars() != ring.nvars() {
            return Err(Error::VariableMismatch { expected: ring.nvars(), found: self.nvars() });
        }
        Ok(())
    }

    /// `D(p) = sum_i c_i * dp/dx_i`, reduced modulo the modulus.
    pub fn apply(&self, ring: &RingCtx, p: &Poly) -> Result<Poly, Error> {
        self.check(ring)?;
        ring.check(p)?;
        let mut out = Poly::zero(ring.nvars());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dp = p.partial(i)?;
            if !dp.is_zero() {
                out.add_assign_ref(&(c * &dp));
            }
        }
        ring.reduce(&out)
    }

    /// Commutator `[self, other]`, coefficient `i` being
    /// `self(other_i) - other(self_i)`.
    pub fn bracket(&self, other: &Derivation, ring: &RingCtx) -> Result<Derivation, Error> {
        self.check(ring)?;
        other.check(ring)?;
        let coeffs = (0..ring.nvars())
            .map(|i| Ok(&self.apply(ring, &other.coeffs[i])? - &other.apply(ring, &self.coeffs[i])?))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(Derivation { coeffs })
    }

    pub fn reduced(&self, ring: &RingCtx) -> Result<Derivation, Error> {
        self.check(ring)?;
        Ok(Derivation { coeffs: self.coeffs.iter().map(|c| ring.reduce(c)).collect::<Result<_, _>>()? })
    }

    /// `f * self`, coefficients reduced.
    pub fn mul_poly(&self, ring: &RingCtx, f: &Poly) -> Result<Derivation, Error> {
        self.check(ring)?;
        Ok(Derivation { coeffs: self.coeffs.iter().map(|c| ring.mul(f, c)).collect::<Result<_, _>>()? })
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.nvars(), other.nvars());
        Derivation { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.nvars(), other.nvars());
        Derivation { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Derivation {
        Derivation { coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect() }
    }

    /// Equality as derivations of `ring`: coefficientwise after reduction.
    pub fn equals_in(&self, other: &Derivation, ring: &RingCtx) -> Result<bool, Error> {
        Ok(self.sub(other).reduced(ring)?.is_zero())
    }

    /// Renders as `2*y*dy - 2*z*dz`.
    pub fn display(&self, ring: &RingCtx) -> String {
        format_combination(ring, self.coeffs.iter().enumerate().map(|(i, c)| (format!("d{}", ring.vars()[i]), c)))
    }
}

/// `D(<f>) ⊆ <f>`, i.e. `D(f)` reduces to zero modulo `f`.
pub fn is_logarithmic(d: &Derivation, ring: &RingCtx) -> Result<bool, Error> {
    let f = ring.modulus().ok_or(Error::NoModulus)?;
    let df = d.apply(&ring.ambient(), f)?;
    ring.ideal_member(&df)
}

/// Monomials of degree at most `d`, largest first under graded lex order.
fn graded_lex_columns(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut ms = monomials_up_to(nvars, d);
    let order = MonomialOrder::new(OrderKind::Grlex, nvars);
    ms.sort_by(|a, b| order.cmp(b, a));
    ms
}

/// A `Q`-basis of the logarithmic derivations whose coefficients have degree
/// at most `degree_bound`.
///
/// The unknowns are the coefficients `c_{i,m}` of `x^m d/dx_i`; the map
/// `c -> remainder of sum_i c_i * df/dx_i modulo f` is linear, and its
/// nullspace is returned in reduced row-echelon order with graded-lex columns.
pub fn solve_log_derivations(ring: &RingCtx, degree_bound: u32) -> Result<Vec<Derivation>, Error> {
    let f = ring.modulus().ok_or(Error::NoModulus)?;
    let n = ring.nvars();
    let grads = (0..n).map(|i| f.partial(i)).collect::<Result<Vec<_>, _>>()?;
    let mut columns = Vec::new();
    for m in graded_lex_columns(n, degree_bound) {
        for i in 0..n {
            columns.push((i, m.clone()));
        }
    }
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut images = Vec::with_capacity(columns.len());
    for (i, m) in &columns {
        let image = ring.reduce(&grads[*i].mul_term(m, &Rational::from_integer(1.into())))?;
        for (mono, _) in image.terms() {
            let next = row_index.len();
            row_index.entry(mono.clone()).or_insert(next);
        }
        images.push(image);
    }
    let mut matrix = Matrix::zeros(row_index.len(), columns.len());
    for (j, image) in images.iter().enumerate() {
        for (mono, c) in image.terms() {
            matrix.set(row_index[mono], j, c.clone());
        }
    }
    let basis = matrix
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut coeffs = vec![Poly::zero(n); n];
            for ((i, m), c) in columns.iter().zip(v) {
                coeffs[*i].add_term(m.clone(), c);
            }
            Derivation::new(coeffs)
        })
        .collect();
    Ok(basis)
}

/// The derivation of `quotient = ambient/<f>` induced by a logarithmic
/// derivation of `ambient`.
pub fn restrict_to_quotient(d: &Derivation, ambient: &RingCtx, quotient: &RingCtx) -> Result<Derivation, Error> {
    if ambient.vars() != quotient.vars() {
        return Err(Error::VariableMismatch { expected: ambient.nvars(), found: quotient.nvars() });
    }
    d.check(ambient)?;
    if !is_logarithmic(d, quotient)? {
        return Err(Error::NotLogarithmic(d.display(ambient)));
    }
    d.reduced(quotient)
}

/// Rank (over the field of fractions) of the coefficient matrix of `gens`,
/// estimated from below by evaluation at deterministic sample points.
fn sampled_generic_rank(ring: &RingCtx, gens: &[Derivation]) -> usize {
    let n = ring.nvars();
    let mut best = 0;
    for s in 0..8i64 {
        let point: Vec<Rational> = (0..n as i64)
            .map(|i| Rational::from_integer(((s * 7919 + i * 104_729 + 13) % 97 - 48).into()))
            .collect();
        let rows = gens
            .iter()
            .map(|g| g.coeffs().iter().map(|c| c.eval(&point).expect("arity checked")).collect())
            .collect();
        best = best.max(Matrix::from_rows_with_cols(rows, n).rank());
        if best == gens.len() {
            break;
        }
    }
    best
}

/// A relation `sum_i g_i * D_i = 0` among the generators of a presentation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Syzygy {
    pub coefficients: Vec<Poly>,
}

impl Syzygy {
    pub fn new(coefficients: Vec<Poly>) -> Self {
        Syzygy { coefficients }
    }
}

/// A `(Q, R)`-Lie-Rinehart algebra presented by generating derivations
/// `D_1..D_m` of `R` and structure constants `[D_i, D_j] = sum_k gamma_ij^k D_k`.
/// The anchor is the action of each generator on `R`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LRPresentation {
    ring: RingCtx,
    names: Vec<String>,
    generators: Vec<Derivation>,
    table: Vec<Vec<Vec<Poly>>>,
}

impl LRPresentation {
    /// `table[i][j][k] = gamma_ij^k`. Only shapes are validated here; see
    /// [`LRPresentation::check_lr_axioms`].
    pub fn new(
        ring: RingCtx,
        names: Vec<String>,
        generators: Vec<Derivation>,
        table: Vec<Vec<Vec<Poly>>>,
    ) -> Result<Self, Error> {
        let m = generators.len();
        if names.len() != m {
            return Err(Error::LengthMismatch { expected: m, found: names.len() });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let generators = generators.iter().map(|g| g.reduced(&ring)).collect::<Result<Vec<_>, _>>()?;
        if table.len() != m || table.iter().any(|row| row.len() != m || row.iter().any(|v| v.len() != m)) {
            return Err(Error::LengthMismatch { expected: m, found: table.len() });
        }
        let table = table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.iter().map(|c| ring.reduce(c)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LRPresentation { ring, names, generators, table })
    }

    /// Builds the table from brackets `[D_i, D_j] = sum_k c_k D_k` for `i < j`;
    /// unlisted pairs bracket to zero and the table is made antisymmetric.
    pub fn from_brackets(
        ring: RingCtx,
        names: Vec<String>,
        generators: Vec<Derivation>,
        brackets: &[(usize, usize, Vec<Poly>)],
    ) -> Result<Self, Error> {
        let m = generators.len();
        let n = ring.nvars();
        let mut table = vec![vec![vec![Poly::zero(n); m]; m]; m];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= m || j >= m {
                return Err(Error::IndexOutOfRange { index: i.max(j), len: m });
            }
            if coeffs.len() != m {
                return Err(Error::LengthMismatch { expected: m, found: coeffs.len() });
            }
            table[i][j] = coeffs.clone();
            table[j][i] = coeffs.iter().map(|c| -c).collect();
        }
        Self::new(ring, names, generators, table)
    }

    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Derivation] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `gamma_ij^k` for all `k`.
    pub fn gamma(&self, i: usize, j: usize) -> &[Poly] {
        &self.table[i][j]
    }

    pub fn table(&self) -> &[Vec<Vec<Poly>>] {
        &self.table
    }

    /// `sum_k coeffs_k * D_k` as a derivation of the base ring.
    pub fn combination(&self, coeffs: &[Poly]) -> Result<Derivation, Error> {
        if coeffs.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: coeffs.len() });
        }
        let mut acc = Derivation::zero(self.ring.nvars());
        for (g, c) in self.generators.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&g.mul_poly(&self.ring, c)?);
            }
        }
        acc.reduced(&self.ring)
    }

    /// The derivation the table assigns to `[D_i, D_j]`.
    pub fn table_bracket(&self, i: usize, j: usize) -> Result<Derivation, Error> {
        self.combination(&self.table[i][j])
    }

    /// Whether the generators form a basis of a free module: the base ring
    /// carries no modulus and the generators are independent over its field
    /// of fractions. Quotient presentations are conservatively treated as
    /// non-free.
    pub fn is_free(&self) -> bool {
        self.ring.modulus().is_none() && sampled_generic_rank(&self.ring, &self.generators) == self.len()
    }

    pub fn verify_syzygy(&self, s: &Syzygy) -> Result<bool, Error> {
        Ok(self.combination(&s.coefficients)?.is_zero())
    }

    /// Dimension of the fiber `L ⊗ k(p)`: the number of generators minus the
    /// rank of the syzygy matrix evaluated at `point`.
    pub fn fiber_rank(&self, syzygies: &[Syzygy], point: &[Rational]) -> Result<usize, Error> {
        let n = self.ring.nvars();
        if point.len() != n {
            return Err(Error::VariableMismatch { expected: n, found: point.len() });
        }
        if let Some(f) = self.ring.modulus() {
            if !f.eval(point)?.is_zero() {
                return Err(Error::PointNotOnVariety);
            }
        }
        let mut rows = Vec::new();
        for s in syzygies {
            if !self.verify_syzygy(s)? {
                return Err(Error::UnverifiedSyzygy);
            }
            rows.push(s.coefficients.iter().map(|c| c.eval(point)).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(self.len() - Matrix::from_rows_with_cols(rows, self.len()).rank())
    }

    /// Checks antisymmetry, logarithmicity of the generators, consistency of
    /// the table with the commutators, the Jacobi identity and the Leibniz rule
    /// `[D_i, r D_j] = r [D_i, D_j] + D_i(r) D_j` on all monomials `r` of degree
    /// at most 3.
    pub fn check_lr_axioms(&self) -> CheckReport {
        let mut report = CheckReport::default();
        match self.run_checks(&mut report) {
            Ok(()) => {}
            Err(e) => report.push(Check::fail("evaluation", e.to_string())),
        }
        report
    }

    fn run_checks(&self, report: &mut CheckReport) -> Result<(), Error> {
        let ring = &self.ring;
        let m = self.len();
        let name = |i: usize| self.names[i].as_str();

        let mut witness = None;
        'outer: for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if !(&self.table[i][j][k] + &self.table[j][i][k]).is_zero() {
                        witness = Some(format!("gamma[{},{}] != -gamma[{},{}]", name(i), name(j), name(j), name(i)));
                        break 'outer;
                    }
                }
            }
        }
        report.push(check_from("antisymmetry", witness));

        if ring.modulus().is_some() {
            let mut witness = None;
            for (i, g) in self.generators.iter().enumerate() {
                if !is_logarithmic(g, ring)? {
                    witness = Some(format!("{} does not preserve the ideal", name(i)));
                    break;
                }
            }
            report.push(check_from("logarithmic generators", witness));
        }

        let mut witness = None;
        'cons: for i in 0..m {
            for j in (i + 1)..m {
                let commutator = self.generators[i].bracket(&self.generators[j], ring)?;
                if !commutator.equals_in(&self.table_bracket(i, j)?, ring)? {
                    witness = Some(format!(
                        "[{},{}] = {} but the table gives {}",
                        name(i),
                        name(j),
                        commutator.display(ring),
                        self.table_bracket(i, j)?.display(ring)
                    ));
                    break 'cons;
                }
            }
        }
        report.push(check_from("bracket consistency", witness));

        let mut witness = None;
        let mut modulo_relations = false;
        'jac: for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    let v = self.jacobiator(i, j, k)?;
                    if v.iter().all(Poly::is_zero) {
                        continue;
                    }
                    if self.combination(&v)?.is_zero() {
                        modulo_relations = true;
                    } else {
                        witness = Some(format!("Jacobi fails on ({}, {}, {})", name(i), name(j), name(k)));
                        break 'jac;
                    }
                }
            }
        }
        let mut jacobi = check_from("jacobi", witness);
        if modulo_relations && jacobi.status == Status::Pass {
            jacobi = jacobi.with_note("holds as derivations, not term-by-term in the table");
        }
        report.push(jacobi);

        let mut witness = None;
        let samples = ring.standard_monomials(3);
        'leib: for i in 0..m {
            for j in 0..m {
                for r in &samples {
                    let r = Poly::term(r.clone(), Rational::from_integer(1.into()));
                    let lhs = self.generators[i].bracket(&self.generators[j].mul_poly(ring, &r)?, ring)?;
                    let rhs = self
                        .table_bracket(i, j)?
                        .mul_poly(ring, &r)?
                        .add(&self.generators[j].mul_poly(ring, &self.generators[i].apply(ring, &r)?)?);
                    if !lhs.equals_in(&rhs, ring)? {
                        witness =
                            Some(format!("[{}, r*{}] with r = {}", name(i), name(j), ring.display(&r)));
                        break 'leib;
                    }
                }
            }
        }
        report.push(check_from("leibniz", witness));
        Ok(())
    }

    /// Coefficients of `[D_i,[D_j,D_k]] + [D_j,[D_k,D_i]] + [D_k,[D_i,D_j]]`
    /// computed from the table and the anchor.
    fn jacobiator(&self, i: usize, j: usize, k: usize) -> Result<Vec<Poly>, Error> {
        let m = self.len();
        let ring = &self.ring;
        let mut acc = vec![Poly::zero(ring.nvars()); m];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            // [D_a, sum_l g_l D_l] = sum_l D_a(g_l) D_l + g_l [D_a, D_l]
            for l in 0..m {
                let g = &self.table[b][c][l];
                if g.is_zero() {
                    continue;
                }
                acc[l].add_assign_ref(&self.generators[a].apply(ring, g)?);
                for (t, gamma) in self.table[a][l].iter().enumerate() {
                    if !gamma.is_zero() {
                        acc[t].add_assign_ref(&(g * gamma));
                    }
                }
            }
        }
        acc.iter().map(|p| ring.reduce(p)).collect()
    }

    /// The presentation restricted to `quotient`, generator by generator.
    pub fn restrict_to_quotient(&self, quotient: RingCtx) -> Result<LRPresentation, Error> {
        let generators = self
            .generators
            .iter()
            .map(|g| restrict_to_quotient(g, &self.ring, &quotient))
            .collect::<Result<Vec<_>, _>>()?;
        LRPresentation::new(quotient, self.names.clone(), generators, self.table.clone())
    }
}

fn check_from(name: &str, witness: Option<String>) -> Check {
    match witness {
        None => Check::pass(name),
        Some(w) => Check::fail(name, w),
    }
}

/// Result of solving for logarithmic derivations, compared against the
/// generators of a presentation.
#[derive(Clone, Debug)]
pub struct LogDerivationReport {
    pub basis: Vec<Derivation>,
    /// Dimension of the part of the solution space that no element of the
    /// `R`-span of the presentation generators can reach, when decidable.
    pub outside_directions: Option<usize>,
    /// Basis elements lying outside that span.
    pub witnesses: Vec<Derivation>,
    pub notes: Vec<String>,
}

/// Solves for logarithmic derivations of `ring` and measures how much of the
/// solution space the generators in `pres` miss.
///
/// When every generator annihilates the modulus `f`, so does every element of
/// their `R`-span, so the solutions split into annihilators of `f` and a
/// complement of dimension `rank { D(f) : D in basis }` that lies outside.
pub fn log_derivation_report(ring: &RingCtx, degree_bound: u32, pres: &LRPresentation) -> Result<LogDerivationReport, Error> {
    let basis = solve_log_derivations(ring, degree_bound)?;
    let f = ring.modulus().ok_or(Error::NoModulus)?;
    let ambient = ring.ambient();
    let mut notes = Vec::new();
    let annihilating = pres
        .generators()
        .iter()
        .map(|g| g.apply(&ambient, f).map(|v| v.is_zero()))
        .collect::<Result<Vec<_>, _>>()?;
    if !annihilating.iter().all(|&a| a) {
        // No invariant separates the span here, so compare within the window
        // of monomial multiples of the generators.
        let mut candidates = Vec::new();
        for g in pres.generators() {
            for m in monomials_up_to(ring.nvars(), degree_bound) {
                candidates.push(g.mul_poly(ring, &Poly::term(m, Rational::from_integer(1.into())))?);
            }
        }
        let base = rational_rank(&candidates.iter().collect::<Vec<_>>());
        let reaches = |extra: &[&Derivation]| {
            let all: Vec<&Derivation> = candidates.iter().chain(extra.iter().copied()).collect();
            rational_rank(&all) - base
        };
        let outside = reaches(&basis.iter().collect::<Vec<_>>());
        let witnesses: Vec<Derivation> = basis.iter().filter(|d| reaches(&[d]) > 0).cloned().collect();
        notes.push(format!(
            "generators do not all annihilate f; compared against their multiples by monomials of degree at most {degree_bound}"
        ));
        if outside > 0 {
            notes.push(format!("{outside} direction(s) of the solution space are not reached within that window"));
        }
        return Ok(LogDerivationReport { basis, outside_directions: Some(outside), witnesses, notes });
    }
    let images = basis.iter().map(|d| d.apply(&ambient, f)).collect::<Result<Vec<_>, _>>()?;
    let mut keys: BTreeMap<Monomial, usize> = BTreeMap::new();
    for img in &images {
        for (m, _) in img.terms() {
            let next = keys.len();
            keys.entry(m.clone()).or_insert(next);
        }
    }
    let mut mat = Matrix::zeros(images.len(), keys.len());
    for (r, img) in images.iter().enumerate() {
        for (m, c) in img.terms() {
            mat.set(r, keys[m], c.clone());
        }
    }
    let outside = mat.rank();
    let witnesses: Vec<Derivation> =
        basis.iter().zip(&images).filter(|(_, img)| !img.is_zero()).map(|(d, _)| d.clone()).collect();
    if outside > 0 {
        notes.push(format!(
            "{outside} direction(s) of the solution space lie outside the span of the generators, which all annihilate f"
        ));
        let euler = Derivation::euler(ring.nvars());
        let image = euler.apply(&ambient, f)?;
        let mut extended = basis.clone();
        extended.push(euler.clone());
        if !image.is_zero() && same_rational_span(&basis, &extended) {
            notes.push(format!(
                "the Euler field {} is logarithmic (it maps f to {}) but lies outside the span of the generators",
                euler.display(&ambient),
                ambient.display(&image)
            ));
        }
    }
    Ok(LogDerivationReport { basis, outside_directions: Some(outside), witnesses, notes })
}

/// Rank over `Q` of the coefficient vectors.
fn rational_rank(ds: &[&Derivation]) -> usize {
    let mut keys: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for d in ds {
        for (i, c) in d.coeffs().iter().enumerate() {
            for (m, _) in c.terms() {
                let next = keys.len();
                keys.entry((i, m.clone())).or_insert(next);
            }
        }
    }
    let mut mat = Matrix::zeros(ds.len(), keys.len());
    for (r, d) in ds.iter().enumerate() {
        for (i, c) in d.coeffs().iter().enumerate() {
            for (m, v) in c.terms() {
                mat.set(r, keys[&(i, m.clone())], v.clone());
            }
        }
    }
    mat.rank()
}

/// Whether `span(a) = span(b)` over `Q`, comparing ranks of coefficient vectors.
pub fn same_rational_span(a: &[Derivation], b: &[Derivation]) -> bool {
    let ra: Vec<&Derivation> = a.iter().collect();
    let rb: Vec<&Derivation> = b.iter().collect();
    let both: Vec<&Derivation> = a.iter().chain(b).collect();
    let (x, y, z) = (rational_rank(&ra), rational_rank(&rb), rational_rank(&both));
    x == y && y == z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{integer, rational};
    use crate::standard;
    use proptest::prelude::*;

    fn p3(terms: &[(i64, &[u32])]) -> Poly {
        let mut p = Poly::zero(3);
        for (c, e) in terms {
            p.add_term(Monomial::new(e.to_vec()), integer(*c));
        }
        p
    }

    #[test]
    fn hamiltonian_fields_annihilate_the_cone() {
        let cone = standard::nilpotent_cone_log();
        let f = standard::cone_equation();
        for g in cone.generators() {
            assert!(g.apply(cone.ring(), &f).unwrap().is_zero());
        }
    }

    #[test]
    fn euler_scales_monomials() {
        let r = RingCtx::polynomial(&["x"]);
        let d = Derivation::new(vec![Poly::var(1, 0)]);
        let x3 = Poly::var(1, 0).pow(3);
        assert_eq!(d.apply(&r, &x3).unwrap(), x3.scale(&integer(3)));
        assert!(d.apply(&r, &Poly::one(1)).unwrap().is_zero());
    }

    #[test]
    fn cone_brackets_follow_the_poisson_table() {
        let cone = standard::nilpotent_cone_log();
        let r = cone.ring();
        let g = cone.generators();
        assert_eq!(g[0].bracket(&g[1], r).unwrap(), g[1].scale(&integer(2)));
        assert_eq!(g[0].bracket(&g[2], r).unwrap(), g[2].scale(&integer(-2)));
        assert_eq!(g[1].bracket(&g[2], r).unwrap(), g[0]);
    }

    #[test]
    fn normal_crossing_fields_commute() {
        let nc = standard::normal_crossing_log();
        let g = nc.generators();
        assert!(g[0].bracket(&g[1], nc.ring()).unwrap().is_zero());
    }

    #[test]
    fn logarithmic_membership() {
        let q = standard::normal_crossing_ring();
        assert!(is_logarithmic(&Derivation::new(vec![Poly::var(2, 0), Poly::zero(2)]), &q).unwrap());
        assert!(!is_logarithmic(&Derivation::partial(2, 0), &q).unwrap());
        assert!(is_logarithmic(&Derivation::zero(2), &q).unwrap());
        assert!(matches!(is_logarithmic(&Derivation::zero(2), &RingCtx::polynomial(&["x", "y"])), Err(Error::NoModulus)));
    }

    #[test]
    fn normal_crossing_solver_degree_one() {
        let basis = solve_log_derivations(&standard::normal_crossing_ring(), 1).unwrap();
        assert_eq!(basis.len(), 2);
        let expected = standard::normal_crossing_log().generators().to_vec();
        assert!(same_rational_span(&basis, &expected));
    }

    #[test]
    fn cone_solver_degree_one_has_euler() {
        let ring = standard::cone_ring();
        let basis = solve_log_derivations(&ring, 1).unwrap();
        assert_eq!(basis.len(), 4);
        let mut with_euler = standard::nilpotent_cone_log().generators().to_vec();
        with_euler.push(Derivation::euler(3));
        assert!(same_rational_span(&basis, &with_euler));
        let report = log_derivation_report(&ring, 1, &standard::nilpotent_cone_log()).unwrap();
        assert_eq!(report.outside_directions, Some(1));
        assert!(!report.witnesses.is_empty());
        assert!(report.notes.iter().any(|n| n.contains("Euler field")));
        let normal = log_derivation_report(&standard::normal_crossing_ring(), 1, &standard::normal_crossing_log()).unwrap();
        assert_eq!(normal.outside_directions, Some(0));
        assert!(normal.witnesses.is_empty());
    }

    #[test]
    fn solver_contains_modulus_multiples() {
        let ring = standard::normal_crossing_ring();
        let basis = solve_log_derivations(&ring, 2).unwrap();
        let f = ring.modulus().unwrap().clone();
        for i in 0..2 {
            let fd = Derivation::partial(2, i).mul_poly(&ring.ambient(), &f).unwrap();
            let mut extended = basis.clone();
            extended.push(fd);
            assert!(same_rational_span(&basis, &extended));
        }
    }

    #[test]
    fn solver_span_is_order_independent() {
        let ring = standard::cone_ring();
        let lex = ring.with_order(MonomialOrder::new(OrderKind::Lex, 3)).unwrap();
        let grlex = ring.with_order(MonomialOrder::new(OrderKind::Grlex, 3)).unwrap();
        let a = solve_log_derivations(&ring, 2).unwrap();
        assert!(same_rational_span(&a, &solve_log_derivations(&lex, 2).unwrap()));
        assert!(same_rational_span(&a, &solve_log_derivations(&grlex, 2).unwrap()));
    }

    #[test]
    fn solver_output_is_logarithmic_and_closed_under_brackets() {
        let ring = standard::cone_ring();
        let ambient = ring.ambient();
        let basis = solve_log_derivations(&ring, 1).unwrap();
        for a in &basis {
            assert!(is_logarithmic(a, &ring).unwrap());
            for b in &basis {
                assert!(is_logarithmic(&a.bracket(b, &ambient).unwrap(), &ring).unwrap());
            }
        }
    }

    #[test]
    fn syzygies() {
        let cone = standard::nilpotent_cone_log();
        let s = Syzygy::new(vec![p3(&[(1, &[1, 0, 0])]), p3(&[(2, &[0, 0, 1])]), p3(&[(2, &[0, 1, 0])])]);
        assert!(cone.verify_syzygy(&s).unwrap());
        assert!(cone.verify_syzygy(&Syzygy::new(vec![Poly::zero(3); 3])).unwrap());
        let nc = standard::normal_crossing_log();
        assert!(!nc.verify_syzygy(&Syzygy::new(vec![Poly::one(2), Poly::from_int(2, -1)])).unwrap());
        assert!(matches!(nc.verify_syzygy(&Syzygy::new(vec![Poly::one(2)])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn restriction_to_quotients() {
        let amb = RingCtx::polynomial(&["x", "y"]);
        let q = standard::normal_crossing_ring();
        let a = Derivation::new(vec![Poly::var(2, 0), Poly::zero(2)]);
        assert_eq!(restrict_to_quotient(&a, &amb, &q).unwrap(), a);
        let f = q.modulus().unwrap().clone();
        let fdx = Derivation::partial(2, 0).mul_poly(&amb, &f).unwrap();
        assert!(restrict_to_quotient(&fdx, &amb, &q).unwrap().is_zero());
        assert!(matches!(restrict_to_quotient(&Derivation::partial(2, 0), &amb, &q), Err(Error::NotLogarithmic(_))));

        let cone = standard::nilpotent_cone_log();
        let restricted = cone.restrict_to_quotient(standard::cone_ring()).unwrap();
        assert!(restricted.check_lr_axioms().all_passed());
    }

    #[test]
    fn fiber_ranks() {
        let cone = standard::nilpotent_cone_log();
        let syz = standard::cone_syzygies();
        assert_eq!(cone.fiber_rank(&syz, &[integer(0), integer(0), integer(0)]).unwrap(), 3);
        assert_eq!(cone.fiber_rank(&syz, &[integer(0), integer(1), integer(0)]).unwrap(), 2);
        assert_eq!(cone.fiber_rank(&[], &[integer(0), integer(1), integer(0)]).unwrap(), 3);
        let tangent = standard::normal_crossing_tangent();
        let syz = standard::normal_crossing_syzygies();
        assert_eq!(tangent.fiber_rank(&syz, &[integer(0), integer(0)]).unwrap(), 2);
        assert_eq!(tangent.fiber_rank(&syz, &[integer(1), integer(0)]).unwrap(), 1);
        assert_eq!(tangent.fiber_rank(&syz, &[integer(0), rational(-5, 2)]).unwrap(), 1);
        assert!(matches!(tangent.fiber_rank(&syz, &[integer(1), integer(1)]), Err(Error::PointNotOnVariety)));
        let bogus = Syzygy::new(vec![Poly::one(2), Poly::zero(2)]);
        assert!(matches!(tangent.fiber_rank(&[bogus], &[integer(0), integer(0)]), Err(Error::UnverifiedSyzygy)));
    }

    #[test]
    fn axioms_pass_for_standard_presentations() {
        for pres in [
            standard::nilpotent_cone_log(),
            standard::nilpotent_cone_tangent(),
            standard::normal_crossing_log(),
            standard::normal_crossing_tangent(),
            standard::weyl_a1(),
        ] {
            let report = pres.check_lr_axioms();
            assert!(report.all_passed(), "{report}");
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let cone = standard::nilpotent_cone_log();
        let mut table = cone.table().to_vec();
        table[0][1][0] = &table[0][1][0] + &Poly::one(3);
        table[1][0][0] = &table[1][0][0] - &Poly::one(3);
        let bad = LRPresentation::new(cone.ring().clone(), cone.names().to_vec(), cone.generators().to_vec(), table)
            .unwrap();
        let report = bad.check_lr_axioms();
        let c = report.get("bracket consistency").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert!(c.witness.as_ref().unwrap().contains("[Dx,Dy]"));
        assert_eq!(report.get("antisymmetry").unwrap().status, Status::Pass);
    }

    #[test]
    fn freeness() {
        assert!(standard::weyl_a1().is_free());
        assert!(standard::normal_crossing_log().is_free());
        assert!(!standard::nilpotent_cone_log().is_free());
        assert!(!standard::normal_crossing_tangent().is_free());
    }

    fn small_poly(nvars: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-3i64..=3, prop::collection::vec(0u32..=2, nvars)), 0..4).prop_map(move |ts| {
            let mut p = Poly::zero(nvars);
            for (c, e) in ts {
                p.add_term(Monomial::new(e), integer(c));
            }
            p
        })
    }

    fn small_derivation() -> impl Strategy<Value = Derivation> {
        prop::collection::vec(small_poly(3), 3).prop_map(Derivation::new)
    }

    proptest! {
        #[test]
        fn leibniz_rule(d in small_derivation(), p in small_poly(3), q in small_poly(3)) {
            for ring in [RingCtx::polynomial(&["x", "y", "z"]), standard::cone_ring()] {
                let lhs = d.apply(&ring, &(&p * &q)).unwrap();
                let rhs = ring.reduce(&(&(&d.apply(&ring, &p).unwrap() * &q) + &(&p * &d.apply(&ring, &q).unwrap()))).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn commutator_jacobi_and_anchor(a in small_derivation(), b in small_derivation(), c in small_derivation(), p in small_poly(3)) {
            let ring = RingCtx::polynomial(&["x", "y", "z"]);
            let j = a.bracket(&b.bracket(&c, &ring).unwrap(), &ring).unwrap()
                .add(&b.bracket(&c.bracket(&a, &ring).unwrap(), &ring).unwrap())
                .add(&c.bracket(&a.bracket(&b, &ring).unwrap(), &ring).unwrap());
            prop_assert!(j.is_zero());
            let ab = a.bracket(&b, &ring).unwrap();
            let lhs = ab.apply(&ring, &p).unwrap();
            let rhs = &a.apply(&ring, &b.apply(&ring, &p).unwrap()).unwrap() - &b.apply(&ring, &a.apply(&ring, &p).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(ab, b.bracket(&a, &ring).unwrap().scale(&integer(-1)));
        }
    }

    #[test]
    fn display_format() {
        let cone = standard::nilpotent_cone_log();
        assert_eq!(cone.generators()[0].display(cone.ring()), "2*y*dy - 2*z*dz");
        assert_eq!(cone.generators()[1].display(cone.ring()), "-2*y*dx + x*dz");
        let d = Derivation::new(vec![p3(&[(1, &[1, 0, 0]), (1, &[0, 1, 0])]), Poly::zero(3), Poly::zero(3)]);
        assert_eq!(d.display(cone.ring()), "(x + y)*dx");
    }
}
