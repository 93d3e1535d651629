//! Loading session files and evaluating their commands.
//!
//! A session declares one ring, then generators, brackets and syzygies, then
//! named elements and commands. Expressions are evaluated in one of four
//! domains depending on where they occur: polynomials, linear combinations
//! (of `d<var>` atoms or of generators), enveloping-algebra elements, and
//! symmetric tensors.

use std::cell::{OnceCell, RefCell};
use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use rinehart_core::bialgebra::{self, JetElement, Primitivity};
use rinehart_core::derivation::{self, Derivation, LRPresentation, Syzygy};
use rinehart_core::display::format_combination;
use rinehart_core::enveloping::{STensor, UAlgebra, UElement, Word, DEFAULT_TRUNCATION};
use rinehart_core::polyring::{MonomialOrder, OrderKind, Poly, Rational, RingCtx};
use rinehart_core::report::Status;
use serde_json::json;

use crate::ast::{Expr, Pos, RingDecl, Stmt};
use crate::error::{CliError, Result};
use crate::json;
use crate::parser;
use crate::report::Item;

const MAX_EXPONENT: u32 = 256;
const DEFAULT_LEVEL_BOUND: usize = 8;

/// Flags shared by every command.
#[derive(Clone, Debug)]
pub struct Options {
    pub truncation: u32,
    pub order: Option<OrderKind>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { truncation: DEFAULT_TRUNCATION, order: None, seed: 0 }
    }
}

fn user<T>(message: impl Into<String>) -> Result<T> {
    Err(CliError::user(message))
}

/// Builds `Q[vars]/(modulus)` with the declared order, unless `order` overrides it.
pub fn build_ring(decl: &RingDecl, order: Option<OrderKind>) -> Result<RingCtx> {
    let kind = match (order, &decl.order) {
        (Some(k), _) => k,
        (None, Some(name)) => name.parse::<OrderKind>().map_err(CliError::user)?,
        (None, None) => OrderKind::Grevlex,
    };
    let n = decl.vars.len();
    let ambient = RingCtx::new(decl.vars.clone(), None, MonomialOrder::new(kind, n))?;
    let modulus = match &decl.modulus {
        Some(e) => {
            check_names(e, &|s| ambient.var_index(s).is_some())?;
            Some(eval(&PolyDomain { ring: &ambient }, e)?)
        }
        None => None,
    };
    Ok(RingCtx::new(decl.vars.clone(), modulus, MonomialOrder::new(kind, n))?)
}

/// Collects identifiers in order of appearance.
fn idents<'a>(e: &'a Expr, out: &mut Vec<&'a str>) {
    match e {
        Expr::Num(_) => {}
        Expr::Ident(s) => out.push(s),
        Expr::Neg(a) | Expr::Pow(a, _) => idents(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Commutator(a, b) => {
            idents(a, out);
            idents(b, out);
        }
    }
}

fn check_names(e: &Expr, known: &dyn Fn(&str) -> bool) -> Result<()> {
    let mut names = Vec::new();
    idents(e, &mut names);
    match names.into_iter().find(|n| !known(n)) {
        Some(n) => user(format!("unknown identifier `{n}`")),
        None => Ok(()),
    }
}

/// Arithmetic needed to evaluate an expression tree.
trait Domain {
    type V;
    fn num(&self, q: &Rational) -> Result<Self::V>;
    fn ident(&self, name: &str) -> Result<Self::V>;
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn neg(&self, a: Self::V) -> Result<Self::V>;
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn commutator(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
}

fn eval<D: Domain>(d: &D, e: &Expr) -> Result<D::V>
where
    D::V: Clone,
{
    match e {
        Expr::Num(q) => d.num(q),
        Expr::Ident(s) => d.ident(s),
        Expr::Neg(a) => d.neg(eval(d, a)?),
        Expr::Add(a, b) => d.add(eval(d, a)?, eval(d, b)?),
        Expr::Sub(a, b) => {
            let b = d.neg(eval(d, b)?)?;
            d.add(eval(d, a)?, b)
        }
        Expr::Mul(a, b) => d.mul(eval(d, a)?, eval(d, b)?),
        Expr::Commutator(a, b) => d.commutator(eval(d, a)?, eval(d, b)?),
        Expr::Pow(a, k) => {
            if *k > MAX_EXPONENT {
                return user(format!("exponent {k} exceeds the limit {MAX_EXPONENT}"));
            }
            let base = eval(d, a)?;
            let mut acc = d.num(&Rational::one())?;
            for _ in 0..*k {
                acc = d.mul(acc, base.clone())?;
            }
            Ok(acc)
        }
    }
}

struct PolyDomain<'a> {
    ring: &'a RingCtx,
}

impl Domain for PolyDomain<'_> {
    type V = Poly;

    fn num(&self, q: &Rational) -> Result<Poly> {
        Ok(self.ring.constant(q.clone()))
    }

    fn ident(&self, name: &str) -> Result<Poly> {
        match self.ring.var_index(name) {
            Some(i) => Ok(self.ring.reduce(&self.ring.var(i))?),
            None => user(format!("`{name}` is not a variable of the ring")),
        }
    }

    fn add(&self, a: Poly, b: Poly) -> Result<Poly> {
        Ok(&a + &b)
    }

    fn neg(&self, a: Poly) -> Result<Poly> {
        Ok(-&a)
    }

    fn mul(&self, a: Poly, b: Poly) -> Result<Poly> {
        Ok(self.ring.mul(&a, &b)?)
    }

    fn commutator(&self, _: Poly, _: Poly) -> Result<Poly> {
        Ok(self.ring.zero())
    }
}

/// `scalar + sum_i coeffs[i] * atom_i`.
#[derive(Clone, Debug)]
struct Lin {
    scalar: Poly,
    coeffs: Vec<Poly>,
}

impl Lin {
    fn is_scalar(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }
}

/// Linear combinations over the ring. With `derivations` set the atoms are
/// the partials `d<var>` and commutators are brackets of vector fields.
struct LinDomain<'a> {
    ring: &'a RingCtx,
    atoms: Vec<String>,
    derivations: bool,
}

impl LinDomain<'_> {
    fn scalar(&self, p: Poly) -> Lin {
        Lin { scalar: p, coeffs: vec![self.ring.zero(); self.atoms.len()] }
    }

    fn field(&self, v: &Lin) -> Derivation {
        Derivation::new(v.coeffs.clone())
    }
}

impl Domain for LinDomain<'_> {
    type V = Lin;

    fn num(&self, q: &Rational) -> Result<Lin> {
        Ok(self.scalar(self.ring.constant(q.clone())))
    }

    fn ident(&self, name: &str) -> Result<Lin> {
        if let Some(k) = self.atoms.iter().position(|a| a == name) {
            let mut v = self.scalar(self.ring.zero());
            v.coeffs[k] = self.ring.one();
            return Ok(v);
        }
        Ok(self.scalar(PolyDomain { ring: self.ring }.ident(name)?))
    }

    fn add(&self, a: Lin, b: Lin) -> Result<Lin> {
        Ok(Lin { scalar: &a.scalar + &b.scalar, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() })
    }

    fn neg(&self, a: Lin) -> Result<Lin> {
        Ok(Lin { scalar: -&a.scalar, coeffs: a.coeffs.iter().map(|c| -c).collect() })
    }

    fn mul(&self, a: Lin, b: Lin) -> Result<Lin> {
        let (s, v) = match (a.is_scalar(), b.is_scalar()) {
            (true, _) => (a.scalar, b),
            (false, true) => (b.scalar, a),
            (false, false) => return user("product of two non-scalar terms is not linear"),
        };
        let m = |p: &Poly| self.ring.mul(&s, p);
        Ok(Lin { scalar: m(&v.scalar)?, coeffs: v.coeffs.iter().map(m).collect::<std::result::Result<_, _>>()? })
    }

    /// `[f + D, g + E] = D(g) - E(f) + [D, E]`.
    fn commutator(&self, a: Lin, b: Lin) -> Result<Lin> {
        if !self.derivations {
            return user("brackets cannot be nested inside a generator combination");
        }
        let (d, e) = (self.field(&a), self.field(&b));
        let scalar = &d.apply(self.ring, &b.scalar)? - &e.apply(self.ring, &a.scalar)?;
        let bracket = d.bracket(&e, self.ring)?;
        Ok(Lin { scalar, coeffs: bracket.coeffs().to_vec() })
    }
}

struct ElemDomain<'a> {
    session: &'a Session,
    alg: &'a UAlgebra,
}

impl Domain for ElemDomain<'_> {
    type V = UElement;

    fn num(&self, q: &Rational) -> Result<UElement> {
        Ok(self.alg.from_poly(&self.alg.ring().constant(q.clone()))?)
    }

    fn ident(&self, name: &str) -> Result<UElement> {
        let ring = self.alg.ring();
        if let Some(i) = ring.var_index(name) {
            return Ok(self.alg.from_poly(&ring.var(i))?);
        }
        if let Some(i) = self.alg.presentation().generator_index(name) {
            return Ok(self.alg.generator(i)?);
        }
        self.session.element(name)
    }

    fn add(&self, a: UElement, b: UElement) -> Result<UElement> {
        Ok(a.add(&b))
    }

    fn neg(&self, a: UElement) -> Result<UElement> {
        Ok(a.scale(&-Rational::one()))
    }

    fn mul(&self, a: UElement, b: UElement) -> Result<UElement> {
        Ok(self.alg.multiply(&a, &b)?)
    }

    fn commutator(&self, a: UElement, b: UElement) -> Result<UElement> {
        Ok(self.alg.commutator(&a, &b)?)
    }
}

/// The symmetric algebra `S_R L`, where generators commute.
struct SymDomain<'a> {
    session: &'a Session,
}

impl Domain for SymDomain<'_> {
    type V = STensor;

    fn num(&self, q: &Rational) -> Result<STensor> {
        let ring = &self.session.ring;
        Ok(STensor::from_terms(ring, [(ring.constant(q.clone()), Vec::new())])?)
    }

    fn ident(&self, name: &str) -> Result<STensor> {
        let ring = &self.session.ring;
        if let Some(i) = ring.var_index(name) {
            return Ok(STensor::from_terms(ring, [(ring.var(i), Vec::new())])?);
        }
        if let Some(i) = self.session.pres.generator_index(name) {
            return Ok(STensor::from_terms(ring, [(ring.one(), vec![i])])?);
        }
        match self.session.elements.iter().find(|(n, _)| n == name) {
            Some((_, e)) => eval(self, e),
            None => user(format!("unknown identifier `{name}`")),
        }
    }

    fn add(&self, a: STensor, b: STensor) -> Result<STensor> {
        Ok(a.add(&b))
    }

    fn neg(&self, a: STensor) -> Result<STensor> {
        Ok(a.scale(&-Rational::one()))
    }

    fn mul(&self, a: STensor, b: STensor) -> Result<STensor> {
        Ok(a.mul(&b, &self.session.ring)?)
    }

    fn commutator(&self, _: STensor, _: STensor) -> Result<STensor> {
        user("commutators are not defined in the symmetric algebra")
    }
}

/// A loaded session: the presentation it declares, its named elements and
/// the commands queued in the file.
pub struct Session {
    ring: RingCtx,
    pres: LRPresentation,
    syzygies: Vec<Syzygy>,
    elements: Vec<(String, Expr)>,
    commands: Vec<(Pos, String, Vec<Expr>)>,
    alg: OnceCell<std::result::Result<UAlgebra, rinehart_core::Error>>,
    cache: RefCell<BTreeMap<String, UElement>>,
}

impl Session {
    pub fn from_source(src: &str, order: Option<OrderKind>) -> Result<Session> {
        let file = parser::parse(src)?;
        let mut ring: Option<RingCtx> = None;
        let mut gens: Vec<(String, Derivation)> = Vec::new();
        let mut brackets: Vec<(usize, usize, Expr, Pos)> = Vec::new();
        let mut syz: Vec<(Expr, Pos)> = Vec::new();
        let mut elements: Vec<(String, Expr)> = Vec::new();
        let mut commands = Vec::new();
        let mut sealed = false;

        for (stmt, &pos) in file.stmts.iter().zip(&file.positions) {
            let at = |e: CliError| e.at(pos);
            if let Stmt::Ring(decl) = stmt {
                if ring.is_some() {
                    return Err(at(CliError::user("a session declares exactly one ring")));
                }
                ring = Some(build_ring(decl, order).map_err(at)?);
                continue;
            }
            let Some(r) = &ring else {
                return Err(at(CliError::user("the ring must be declared before anything else")));
            };
            let is_var = |s: &str| r.var_index(s).is_some();
            let is_partial = |s: &str| s.strip_prefix('d').is_some_and(|v| r.var_index(v).is_some());
            let gen_index = |gens: &[(String, Derivation)], s: &str| gens.iter().position(|(n, _)| n == s);
            let taken = |gens: &[(String, Derivation)], elements: &[(String, Expr)], s: &str| {
                is_var(s) || is_partial(s) || gen_index(gens, s).is_some() || elements.iter().any(|(n, _)| n == s)
            };
            if sealed && matches!(stmt, Stmt::Der { .. } | Stmt::Bracket { .. } | Stmt::Syz { .. }) {
                return Err(at(CliError::user(
                    "generators, brackets and syzygies must be declared before elements and commands",
                )));
            }
            match stmt {
                Stmt::Ring(_) => unreachable!("handled above"),
                Stmt::Der { name, expr } => {
                    if taken(&gens, &elements, name) {
                        return Err(at(rinehart_core::Error::DuplicateName(name.clone()).into()));
                    }
                    check_names(expr, &|s| is_var(s) || is_partial(s)).map_err(at)?;
                    let dom = LinDomain { ring: r, atoms: r.vars().iter().map(|v| format!("d{v}")).collect(), derivations: true };
                    let v = eval(&dom, expr).map_err(at)?;
                    if !r.reduce(&v.scalar).map_err(|e| at(e.into()))?.is_zero() {
                        return Err(at(CliError::user(format!("derivation `{name}` has a nonzero function part"))));
                    }
                    gens.push((name.clone(), Derivation::new(v.coeffs)));
                }
                Stmt::Bracket { left, right, expr } => {
                    let (Some(i), Some(j)) = (gen_index(&gens, left), gen_index(&gens, right)) else {
                        let missing = if gen_index(&gens, left).is_none() { left } else { right };
                        return Err(at(CliError::user(format!("unknown generator `{missing}`"))));
                    };
                    if i == j {
                        return Err(at(CliError::user(format!("bracket [{left}, {left}] is zero by antisymmetry"))));
                    }
                    if brackets.iter().any(|(a, b, _, _)| (*a, *b) == (i, j) || (*a, *b) == (j, i)) {
                        return Err(at(CliError::user(format!("bracket [{left}, {right}] is declared twice"))));
                    }
                    check_names(expr, &|s| is_var(s) || gen_index(&gens, s).is_some()).map_err(at)?;
                    brackets.push((i, j, expr.clone(), pos));
                }
                Stmt::Syz { expr } => {
                    check_names(expr, &|s| is_var(s) || gen_index(&gens, s).is_some()).map_err(at)?;
                    syz.push((expr.clone(), pos));
                }
                Stmt::El { name, expr } => {
                    if taken(&gens, &elements, name) {
                        return Err(at(rinehart_core::Error::DuplicateName(name.clone()).into()));
                    }
                    check_names(expr, &|s| taken(&gens, &elements, s) && !is_partial(s)).map_err(at)?;
                    elements.push((name.clone(), expr.clone()));
                    sealed = true;
                }
                Stmt::Command { name, args } => {
                    for a in args {
                        check_names(a, &|s| taken(&gens, &elements, s) && !is_partial(s)).map_err(at)?;
                    }
                    commands.push((pos, name.clone(), args.clone()));
                    sealed = true;
                }
            }
        }

        let Some(ring) = ring else {
            return user("the session declares no ring");
        };
        let names: Vec<String> = gens.iter().map(|(n, _)| n.clone()).collect();
        let combos = LinDomain { ring: &ring, atoms: names.clone(), derivations: false };
        let combination = |e: &Expr, pos: Pos, what: &str| -> Result<Vec<Poly>> {
            let v = eval(&combos, e).map_err(|err| err.at(pos))?;
            if !ring.reduce(&v.scalar).map_err(|err| CliError::from(err).at(pos))?.is_zero() {
                return Err(CliError::user(format!("{what} must be a combination of generators")).at(pos));
            }
            Ok(v.coeffs)
        };
        let mut table = Vec::new();
        for (i, j, e, pos) in &brackets {
            table.push((*i, *j, combination(e, *pos, "a bracket")?));
        }
        let syzygies =
            syz.iter().map(|(e, pos)| combination(e, *pos, "a syzygy").map(Syzygy::new)).collect::<Result<Vec<_>>>()?;
        let generators = gens.into_iter().map(|(_, d)| d).collect();
        let pres = LRPresentation::from_brackets(ring.clone(), names, generators, &table)?;
        Ok(Session { ring, pres, syzygies, elements, commands, alg: OnceCell::new(), cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn from_file(path: &std::path::Path, order: Option<OrderKind>) -> Result<Session> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::user(format!("cannot read session `{}`: {e}", path.display())))?;
        Session::from_source(&src, order)
    }

    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    pub fn presentation(&self) -> &LRPresentation {
        &self.pres
    }

    pub fn syzygies(&self) -> &[Syzygy] {
        &self.syzygies
    }

    pub fn commands(&self) -> &[(Pos, String, Vec<Expr>)] {
        &self.commands
    }

    /// The enveloping algebra, built on first use. Fails when the
    /// presentation does not satisfy the Lie-Rinehart axioms.
    pub fn algebra(&self) -> Result<&UAlgebra> {
        match self.alg.get_or_init(|| UAlgebra::new(self.pres.clone())) {
            Ok(a) => Ok(a),
            Err(e) => Err(e.clone().into()),
        }
    }

    fn element(&self, name: &str) -> Result<UElement> {
        if let Some(u) = self.cache.borrow().get(name) {
            return Ok(u.clone());
        }
        let Some((_, e)) = self.elements.iter().find(|(n, _)| n == name) else {
            return user(format!("unknown identifier `{name}`"));
        };
        let u = self.eval_element(e)?;
        self.cache.borrow_mut().insert(name.to_string(), u.clone());
        Ok(u)
    }

    fn known(&self, s: &str) -> bool {
        self.ring.var_index(s).is_some()
            || self.pres.generator_index(s).is_some()
            || self.elements.iter().any(|(n, _)| n == s)
    }

    /// Evaluates an expression in the enveloping algebra.
    pub fn eval_element(&self, e: &Expr) -> Result<UElement> {
        check_names(e, &|s| self.known(s))?;
        let alg = self.algebra()?;
        eval(&ElemDomain { session: self, alg }, e)
    }

    pub fn eval_symmetric(&self, e: &Expr) -> Result<STensor> {
        check_names(e, &|s| self.known(s))?;
        eval(&SymDomain { session: self }, e)
    }

    pub fn eval_poly(&self, e: &Expr) -> Result<Poly> {
        check_names(e, &|s| self.ring.var_index(s).is_some())?;
        eval(&PolyDomain { ring: &self.ring }, e)
    }

    fn eval_rational(&self, e: &Expr) -> Result<Rational> {
        let p = self.eval_poly(e)?;
        if !p.is_constant() {
            return user(format!("`{e}` is not a number"));
        }
        Ok(p.constant_term())
    }

    fn eval_count(&self, e: &Expr) -> Result<usize> {
        let q = self.eval_rational(e)?;
        if !q.is_integer() || q < Rational::zero() {
            return user(format!("`{e}` is not a nonnegative integer"));
        }
        match q.to_integer().to_usize() {
            Some(n) if n <= 64 => Ok(n),
            _ => user(format!("`{e}` is too large")),
        }
    }

    /// Runs every command queued in the file, in order.
    pub fn run_all(&self, opts: &Options) -> Result<Vec<Item>> {
        let mut items = Vec::new();
        for (pos, name, args) in &self.commands {
            let echo = Stmt::Command { name: name.clone(), args: args.clone() }.to_string();
            let echo = echo.trim_end_matches(';');
            for mut item in self.execute(name, args, opts).map_err(|e| e.at(*pos))? {
                if item.kind == crate::report::Kind::Value {
                    item.command = echo.to_string();
                }
                items.push(item);
            }
        }
        Ok(items)
    }

    pub fn execute(&self, name: &str, args: &[Expr], opts: &Options) -> Result<Vec<Item>> {
        let arity = |lo: usize, hi: usize| -> Result<()> {
            if args.len() < lo || args.len() > hi {
                let want = if lo == hi { format!("{lo}") } else if hi == usize::MAX { format!("at least {lo}") } else { format!("{lo} to {hi}") };
                return user(format!("`{name}` takes {want} argument(s), got {}", args.len()));
            }
            Ok(())
        };
        let trunc = opts.truncation;
        let item = match name {
            "nf" => {
                arity(1, 1)?;
                let alg = self.algebra()?;
                let u = self.eval_element(&args[0])?;
                Item::value("nf", alg.display(&u), json::element(alg, &u))
            }
            "mult" => {
                arity(2, usize::MAX)?;
                let alg = self.algebra()?;
                let factors = args.iter().map(|a| self.eval_element(a)).collect::<Result<Vec<_>>>()?;
                let u = alg.multiply_all(&factors.iter().collect::<Vec<_>>())?;
                Item::value("mult", alg.display(&u), json::element(alg, &u))
            }
            "symbol" => {
                arity(2, 2)?;
                let alg = self.algebra()?;
                let u = self.eval_element(&args[0])?;
                let t = alg.symbol(&u, self.eval_count(&args[1])?)?;
                Item::value("symbol", t.display(&self.ring, alg.names()), json::symmetric(alg, &t))
            }
            "symmetrize" => {
                arity(1, 1)?;
                let alg = self.algebra()?;
                let u = alg.symmetrize(&self.eval_symmetric(&args[0])?)?;
                Item::value("symmetrize", alg.display(&u), json::element(alg, &u))
            }
            "counit" => {
                arity(1, 1)?;
                let c = self.algebra()?.counit(&self.eval_element(&args[0])?);
                Item::value("counit", self.ring.fmt_poly(&c), json::poly(&self.ring, &c))
            }
            "coproduct" => {
                arity(1, 1)?;
                let alg = self.algebra()?;
                let t = bialgebra::coproduct(&self.eval_element(&args[0])?);
                Item::value("coproduct", t.display(alg), json::tensor(alg, &t))
            }
            "primitive" => {
                arity(1, 1)?;
                return self.primitive(&args[0], trunc).map(|i| vec![i]);
            }
            "level" => {
                arity(1, 2)?;
                let alg = self.algebra()?;
                let u = self.eval_element(&args[0])?;
                let bound = match args.get(1) {
                    Some(e) => self.eval_count(e)?,
                    None => DEFAULT_LEVEL_BOUND.max(u.filtration_degree()),
                };
                let level = bialgebra::primitive_filtration_level(alg, &u, bound)?;
                let text = level.map_or(format!("> {bound}"), |n| n.to_string());
                Item::value("level", text, json!({ "level": level, "bound": bound, "filtration_degree": u.filtration_degree() }))
            }
            "eval" => {
                arity(2, 2)?;
                let alg = self.algebra()?;
                let u = self.eval_element(&args[0])?;
                let p = self.eval_poly(&args[1])?;
                let v = alg.evaluate_operator(&u, &p, trunc)?;
                Item::value("eval", self.ring.fmt_poly(&v), json::poly(&self.ring, &v))
            }
            "logder" => {
                arity(1, 2)?;
                let ring = match args.len() {
                    2 => {
                        let f = self.eval_poly(&args[0])?;
                        RingCtx::new(self.ring.vars().to_vec(), Some(f), self.ring.order().clone())?
                    }
                    _ => self.ring.clone(),
                };
                let degree = self.eval_count(&args[args.len() - 1])? as u32;
                return logder_check(&ring, degree, &self.pres).map(|i| vec![i]);
            }
            "verify" => {
                arity(0, 0)?;
                return self.verify();
            }
            "fiber" => {
                arity(self.ring.nvars(), self.ring.nvars())?;
                let point = args.iter().map(|a| self.eval_rational(a)).collect::<Result<Vec<_>>>()?;
                let rank = self.pres.fiber_rank(&self.syzygies, &point)?;
                let shown: Vec<String> = point.iter().map(ToString::to_string).collect();
                Item::value(
                    "fiber",
                    rank.to_string(),
                    json!({ "point": point.iter().map(json::rational).collect::<Vec<_>>(), "rank": rank }),
                )
                .with_note(format!("fiber rank at ({})", shown.join(", ")))
            }
            other => return user(format!("unknown command `{other}`")),
        };
        Ok(vec![item])
    }

    fn primitive(&self, arg: &Expr, trunc: u32) -> Result<Item> {
        let alg = self.algebra()?;
        let u = self.eval_element(arg)?;
        let residue = bialgebra::reduced_coproduct(&u);
        let data = |p: &str| json!({ "primitive": p, "residue": json::tensor(alg, &residue) });
        if !alg.counit(&u).is_zero() {
            return Ok(Item::value("primitive", "no", data("no")).with_note("the counit is nonzero"));
        }
        let answer = bialgebra::is_primitive(alg, &u, trunc)?;
        let mut item = Item::value("primitive", answer.as_str(), data(answer.as_str()));
        match answer {
            Primitivity::Yes => {}
            Primitivity::No => item = item.with_witness(format!("reduced coproduct {}", residue.display(alg))),
            Primitivity::Undecided => {
                item.status = Status::Undecided.as_str().into();
                item = item.with_note(format!(
                    "reduced coproduct {} is nonzero on words but vanishes as a bi-operator up to degree {trunc}",
                    residue.display(alg)
                ));
            }
        }
        Ok(item)
    }

    fn verify(&self) -> Result<Vec<Item>> {
        let mut items = Item::from_checks("lr", &self.pres.check_lr_axioms());
        for (k, s) in self.syzygies.iter().enumerate() {
            let parts: Vec<(String, &Poly)> = self.pres.names().iter().cloned().zip(&s.coefficients).collect();
            let text = format_combination(&self.ring, parts);
            let ok = self.pres.verify_syzygy(s)?;
            items.push(Item::check(format!("syzygy {}", k + 1), Status::from_bool(ok), text, serde_json::Value::Null));
        }
        Ok(items)
    }

    /// Jets of order `n`: products of pairs of dual-basis jets.
    pub fn jets(&self, n: usize) -> Result<Vec<Item>> {
        let alg = self.algebra()?;
        let words = bialgebra::sorted_words(alg.ngens(), n);
        let mut items = Vec::new();
        for a in &words {
            for b in &words {
                if a.len() + b.len() > n || a > b {
                    continue;
                }
                let da = JetElement::delta(&self.ring, n, a.clone())?;
                let db = JetElement::delta(&self.ring, n, b.clone())?;
                let prod = bialgebra::jet_multiply(alg, &da, &db)?;
                let label = |w: &Word| if w.is_empty() { "1".to_string() } else { w.render(alg.names()) };
                let text = format!("δ({}) · δ({}) = {}", label(a), label(b), json::jet_text(alg, &prod));
                let data = json!({ "left": json::word(alg, a), "right": json::word(alg, b), "product": json::jet(alg, &prod) });
                items.push(Item::value("jets", text, data));
            }
        }
        Ok(items)
    }
}

fn basis_item(command: &str, ring: &RingCtx, basis: &[Derivation]) -> Item {
    let ambient = ring.ambient();
    let shown: Vec<String> = basis.iter().map(|d| d.display(&ambient)).collect();
    let text = format!("dimension {}: {}", basis.len(), shown.join(", "));
    let data = json!({
        "dimension": basis.len(),
        "basis": basis.iter().map(|d| json::derivation(&ambient, d)).collect::<Vec<_>>(),
    });
    Item::value(command, text, data)
}

/// Basis of the logarithmic derivations of `ring` up to `degree`.
pub fn logder_solve(ring: &RingCtx, degree: u32) -> Result<Item> {
    let basis = derivation::solve_log_derivations(ring, degree)?;
    Ok(basis_item("logder solve", ring, &basis))
}

/// Solves and compares the solutions with the generators of `pres`.
pub fn logder_check(ring: &RingCtx, degree: u32, pres: &LRPresentation) -> Result<Item> {
    if pres.ring().nvars() != ring.nvars() {
        return Err(rinehart_core::Error::VariableMismatch { expected: ring.nvars(), found: pres.ring().nvars() }.into());
    }
    let report = derivation::log_derivation_report(ring, degree, pres)?;
    let mut item = basis_item("logder", ring, &report.basis);
    let ambient = ring.ambient();
    if let serde_json::Value::Object(map) = &mut item.data {
        map.insert("outside_directions".into(), json!(report.outside_directions));
        map.insert(
            "outside".into(),
            json!(report.witnesses.iter().map(|d| json::derivation(&ambient, d)).collect::<Vec<_>>()),
        );
    }
    item.witnesses.extend(report.witnesses.iter().map(|d| d.display(&ambient)));
    item.notes.extend(report.notes);
    Ok(item)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NC: &str = "ring R = Q[x,y];\nder a = x*dx; der b = y*dy; bracket [a,b] = 0;\nel u = a*b + 2*a;\nnf u;";

    fn run(src: &str) -> Vec<String> {
        let s = Session::from_source(src, None).unwrap();
        s.run_all(&Options::default()).unwrap().into_iter().map(|i| i.text).collect()
    }

    fn load_err(src: &str) -> CliError {
        match Session::from_source(src, None) {
            Ok(_) => panic!("expected an error"),
            Err(e) => e,
        }
    }

    #[test]
    fn normal_crossing_session() {
        let s = Session::from_source(NC, None).unwrap();
        assert_eq!(s.presentation().names(), ["a", "b"]);
        assert!(s.presentation().is_free());
        assert_eq!(run(NC), ["a*b + 2*a"]);
    }

    #[test]
    fn weyl_commands() {
        let src = "ring R = Q[x]; der D = dx;\nnf D*x; nf D*D*x; counit D*x; coproduct D^2; primitive D^2; primitive x*D;\n\
                   level D^3; eval D^2, x^3; symbol D*x, 1; symmetrize x*D; mult D, x, D;";
        assert_eq!(
            run(src),
            [
                "x*D + 1",
                "x*D^2 + 2*D",
                "1",
                "D^2 ⊗ 1 + D ⊗ 2*D + 1 ⊗ D^2",
                "no",
                "yes",
                "3",
                "6*x",
                "x*D",
                "x*D",
                "x*D^2 + D"
            ]
        );
    }

    #[test]
    fn cone_session_declares_the_hamiltonian_fields() {
        let src = "ring R = Q[x,y,z] / (x^2 + 4*y*z);\n\
                   der Dx = 2*y*dy - 2*z*dz; der Dy = -2*y*dx + x*dz; der Dz = 2*z*dx - x*dy;\n\
                   bracket [Dx,Dy] = 2*Dy; bracket [Dx,Dz] = -2*Dz; bracket [Dy,Dz] = Dx;\n\
                   syz x*Dx + 2*z*Dy + 2*y*Dz;\nverify; fiber 0,0,0; fiber 0,1,0;";
        let s = Session::from_source(src, None).unwrap();
        assert_eq!(s.presentation(), &rinehart_core::standard::nilpotent_cone_tangent());
        let items = s.run_all(&Options::default()).unwrap();
        assert!(items.iter().all(|i| i.status == "pass"));
        let n = items.len();
        assert_eq!(items[n - 2].text, "3");
        assert_eq!(items[n - 1].text, "2");
    }

    #[test]
    fn derivation_brackets_in_declarations() {
        let s = Session::from_source("ring R = Q[x,y]; der a = [x*dx, y*dy] + [dx, x^2]*dy;", None).unwrap();
        assert_eq!(s.presentation().generators()[0], Derivation::new(vec![Poly::zero(2), Poly::from_terms(2, &[(2, 1, &[1, 0])])]));
    }

    #[test]
    fn session_errors() {
        let e = load_err("ring R = Q[x];\nder D = dx;\nder D = x*dx;");
        assert_eq!(e.pos(), Some(Pos { line: 3, col: 1 }));
        assert!(e.message().contains("duplicate"));
        let e = load_err("ring R = Q[x];\nder D = dy;");
        assert!(e.to_string().starts_with("line 2, column 1: unknown identifier `dy`"));
        assert!(load_err("der D = dx;").message().contains("ring"));
        assert!(load_err("ring R = Q[x]; der D = dx; el u = D; der E = dx;").message().contains("before"));
        assert!(load_err("ring R = Q[x]; der D = dx; el u = v; el v = D;").message().contains("unknown identifier `v`"));
        assert!(load_err("ring R = Q[x]; der D = dx*dx;").message().contains("linear"));
        assert!(load_err("ring R = Q[x]; der D = x + dx;").message().contains("function part"));
        assert!(load_err("ring R = Q[x,y]; der a = dx; der b = dy; bracket [a,b] = 0; bracket [b,a] = a;")
            .message()
            .contains("twice"));
        assert!(load_err("ring R = Q[x]; der D = dx; el x = D;").message().contains("duplicate"));
        assert!(load_err("ring R = Q[x] / (1);").message().contains("nonconstant"));
    }

    #[test]
    fn command_errors() {
        let s = Session::from_source("ring R = Q[x]; der D = dx;", None).unwrap();
        let opts = Options::default();
        let d = parser::parse_expr("D^3").unwrap();
        let n = parser::parse_expr("1").unwrap();
        let err = s.execute("symbol", &[d.clone(), n], &opts).unwrap_err();
        assert!(matches!(err, CliError::Math { error: rinehart_core::Error::DegreeExceeds { .. }, .. }));
        assert!(s.execute("nf", &[], &opts).is_err());
        let big = parser::parse_expr("x^300").unwrap();
        assert!(s.execute("nf", &[big], &opts).unwrap_err().message().contains("limit"));
        let tight = Options { truncation: 2, ..Options::default() };
        assert!(s.execute("eval", &[d, parser::parse_expr("x^3").unwrap()], &tight).is_err());
    }

    #[test]
    fn unverified_presentations_still_load() {
        let src = "ring R = Q[x,y]; der a = dx; der b = x*dy;\nverify;";
        let s = Session::from_source(src, None).unwrap();
        let items = s.run_all(&Options::default()).unwrap();
        assert!(items.iter().any(|i| i.status == "fail"));
        assert!(s.algebra().is_err());
    }

    #[test]
    fn quotient_primitivity_is_undecided() {
        let src = "ring R = Q[x,y] / (x*y); der a = x*dx; der b = y*dy;\nprimitive a*b; primitive a^2; eval a*b, x^2 + y^2 + 1;";
        assert_eq!(run(src), ["undecided", "no", "0"]);
    }

    #[test]
    fn order_override() {
        let src = "ring R = Q[x,y] / (x - y^2) order lex; der a = 2*y*dx + dy;\nnf y^2*a;";
        let lex = run(src);
        let s = Session::from_source(src, Some(OrderKind::Grevlex)).unwrap();
        let grevlex: Vec<String> = s.run_all(&Options::default()).unwrap().into_iter().map(|i| i.text).collect();
        assert_eq!(lex, ["y^2*a"]);
        assert_eq!(grevlex, ["x*a"]);
    }

    #[test]
    fn logder_commands() {
        let s = Session::from_source("ring R = Q[x,y,z]; der Dx = 2*y*dy - 2*z*dz; der Dy = -2*y*dx + x*dz; der Dz = 2*z*dx - x*dy;", None)
            .unwrap();
        let args = [parser::parse_expr("x^2 + 4*y*z").unwrap(), parser::parse_expr("1").unwrap()];
        let item = s.execute("logder", &args, &Options::default()).unwrap().remove(0);
        assert_eq!(item.data["dimension"], 4);
        assert_eq!(item.data["outside_directions"], 1);
        assert!(!item.notes.is_empty());
    }
}
