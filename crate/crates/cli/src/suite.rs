//! The built-in verification suite: twelve numbered criteria over the
//! standard presentations, each reduced to exact identities or seeded
//! randomized checks.

use std::collections::BTreeMap;

use rinehart_core::bialgebra::{self, JetElement, Primitivity};
use rinehart_core::derivation::{self, Derivation, Syzygy};
use rinehart_core::enveloping::{UAlgebra, UElement, Word, DEFAULT_TRUNCATION};
use rinehart_core::linalg::Matrix;
use rinehart_core::polyring::{integer, Poly, Rational, RingCtx};
use rinehart_core::report::Status;
use rinehart_core::sample::Sampler;
use rinehart_core::sheafkit::{self, FinitePoset, PresheafFS, PresheafMorphism};
use rinehart_core::standard;
use serde_json::{json, Value};

use crate::report::Item;

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct Criterion {
    pub number: usize,
    pub title: &'static str,
    pub status: Status,
    pub summary: String,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
    pub data: Value,
}

impl Criterion {
    pub fn item(&self) -> Item {
        let mut item = Item::check(format!("criterion {}: {}", self.number, self.title), self.status, &self.summary, self.data.clone());
        item.witnesses = self.witnesses.clone();
        item.notes = self.notes.clone();
        item
    }
}

/// Counts failures of a family of checks and keeps the first witnesses.
#[derive(Default)]
struct Tally {
    failures: BTreeMap<&'static str, (usize, String)>,
    labels: Vec<&'static str>,
}

impl Tally {
    fn record(&mut self, label: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        if !self.labels.contains(&label) {
            self.labels.push(label);
        }
        if !ok {
            let entry = self.failures.entry(label).or_insert_with(|| (0, witness()));
            entry.0 += 1;
        }
    }

    fn status(&self) -> Status {
        Status::from_bool(self.failures.is_empty())
    }

    fn witnesses(&self) -> Vec<String> {
        self.failures.iter().map(|(l, (n, w))| format!("{l}: {n} failure(s), first: {w}")).collect()
    }
}

fn err_witness(e: rinehart_core::Error) -> String {
    format!("error: {e}")
}

fn finish(number: usize, title: &'static str, status: Status, summary: String, witnesses: Vec<String>) -> Criterion {
    Criterion { number, title, status, summary, witnesses, notes: Vec::new(), data: Value::Null }
}

fn from_tally(number: usize, title: &'static str, t: &Tally, summary: String) -> Criterion {
    finish(number, title, t.status(), summary, t.witnesses())
}

fn c1() -> Criterion {
    let ambient = RingCtx::polynomial(&["x", "y", "z"]);
    let f = standard::cone_equation();
    let gens = standard::cone_generators();
    let pres = standard::nilpotent_cone_tangent();
    let mut t = Tally::default();
    for (d, name) in gens.iter().zip(["Dx", "Dy", "Dz"]) {
        let v = d.apply(&ambient, &f);
        t.record("annihilates x^2 + 4yz", matches!(&v, Ok(p) if p.is_zero()), || format!("{name}(f) = {v:?}"));
    }
    let syz = Syzygy::new(vec![Poly::var(3, 0), Poly::from_int(3, 2) * Poly::var(3, 2), Poly::from_int(3, 2) * Poly::var(3, 1)]);
    t.record("syzygy (x, 2z, 2y)", pres.verify_syzygy(&syz) == Ok(true), || "x Dx + 2z Dy + 2y Dz is nonzero".into());
    let c = |v: [i64; 3]| v.map(|k| Poly::from_int(3, k)).to_vec();
    let expected = [(0, 1, c([0, 2, 0])), (0, 2, c([0, 0, -2])), (1, 2, c([1, 0, 0]))];
    for (i, j, coeffs) in expected {
        let label = || format!("[{}, {}]", pres.names()[i], pres.names()[j]);
        t.record("bracket table", pres.gamma(i, j) == coeffs.as_slice(), label);
        let anti: Vec<Poly> = coeffs.iter().map(|p| -p).collect();
        t.record("antisymmetry", pres.gamma(j, i) == anti.as_slice(), label);
        let lhs = gens[i].bracket(&gens[j], &ambient);
        let rhs = coeffs.iter().zip(&gens).fold(Derivation::zero(3), |acc, (k, g)| acc.add(&g.mul_poly(&ambient, k).unwrap()));
        t.record("commutators", lhs.as_ref() == Ok(&rhs), label);
    }
    from_tally(1, "nilpotent-cone identities", &t, "D_i(x^2 + 4yz) = 0, syzygy (x, 2z, 2y), Poisson bracket table".into())
}

fn c2() -> Criterion {
    let ring = standard::normal_crossing_ring();
    let expected = standard::normal_crossing_log().generators().to_vec();
    match derivation::solve_log_derivations(&ring, 1) {
        Ok(basis) => {
            let ok = basis.len() == 2 && derivation::same_rational_span(&basis, &expected);
            let shown: Vec<String> = basis.iter().map(|d| d.display(&ring.ambient())).collect();
            finish(2, "normal-crossing log solver", Status::from_bool(ok), format!("dimension {}: {}", basis.len(), shown.join(", ")), vec![])
        }
        Err(e) => finish(2, "normal-crossing log solver", Status::Fail, String::new(), vec![err_witness(e)]),
    }
}

/// `d` lies in the `Q`-span of `basis`.
fn in_span(basis: &[Derivation], d: &Derivation) -> bool {
    let mut extended = basis.to_vec();
    extended.push(d.clone());
    derivation::same_rational_span(basis, &extended)
}

fn c3() -> Criterion {
    let title = "nilpotent-cone log solver";
    let report = match derivation::log_derivation_report(&standard::cone_ring(), 1, &standard::nilpotent_cone_log()) {
        Ok(r) => r,
        Err(e) => return finish(3, title, Status::Fail, String::new(), vec![err_witness(e)]),
    };
    let mut t = Tally::default();
    t.record("dimension 4", report.basis.len() == 4, || format!("dimension {}", report.basis.len()));
    for (g, name) in standard::cone_generators().iter().zip(["Dx", "Dy", "Dz"]) {
        t.record("contains the Hamiltonian fields", in_span(&report.basis, g), || name.to_string());
    }
    let euler = Derivation::euler(3);
    t.record("Euler field is logarithmic", in_span(&report.basis, &euler), || "Euler field".into());
    t.record("one direction outside the span", report.outside_directions == Some(1), || format!("{:?}", report.outside_directions));
    t.record("discrepancy note", !report.notes.is_empty(), || "no note".into());
    let mut c = from_tally(3, title, &t, format!(
            "dimension {}, outside directions {}",
            report.basis.len(),
            report.outside_directions.map_or("unknown".to_string(), |n| n.to_string())
        ));
    c.notes = report.notes;
    c
}

fn c4() -> Criterion {
    let q = |v: &[i64]| v.iter().map(|&k| integer(k)).collect::<Vec<Rational>>();
    let cases = [
        ("cone at origin", standard::nilpotent_cone_tangent(), standard::cone_syzygies(), q(&[0, 0, 0]), 3),
        ("cone at (0,1,0)", standard::nilpotent_cone_tangent(), standard::cone_syzygies(), q(&[0, 1, 0]), 2),
        ("normal crossing at origin", standard::normal_crossing_tangent(), standard::normal_crossing_syzygies(), q(&[0, 0]), 2),
        ("normal crossing at (1,0)", standard::normal_crossing_tangent(), standard::normal_crossing_syzygies(), q(&[1, 0]), 1),
        ("normal crossing at (0,1)", standard::normal_crossing_tangent(), standard::normal_crossing_syzygies(), q(&[0, 1]), 1),
    ];
    let mut t = Tally::default();
    let mut shown = Vec::new();
    for (label, pres, syz, point, want) in cases {
        let got = pres.fiber_rank(&syz, &point);
        shown.push(format!("{label} {}", got.as_ref().map_or("error".to_string(), |r| r.to_string())));
        t.record("fiber rank", got == Ok(want), || format!("{label}: expected {want}, got {got:?}"));
    }
    from_tally(4, "fiber ranks", &t, shown.join(", "))
}

fn free_algebras() -> Vec<(&'static str, UAlgebra)> {
    vec![
        ("A1", UAlgebra::new(standard::weyl_a1()).expect("verified")),
        ("normal crossing", UAlgebra::new(standard::normal_crossing_log()).expect("verified")),
    ]
}

fn c5(seed: u64) -> Criterion {
    let mut t = Tally::default();
    for (label, alg) in free_algebras() {
        let mut s = Sampler::new(seed ^ 0x5);
        for _ in 0..200 {
            let k = s.below(5);
            let mut run = || -> Result<bool, rinehart_core::Error> {
                let tensor = s.stensor(alg.ring(), alg.ngens(), k, 3, 3)?;
                Ok(alg.symbol(&alg.symmetrize(&tensor)?, k)? == tensor)
            };
            let r = run();
            t.record("round trip", r == Ok(true), || format!("{label}: {r:?}"));
        }
        for _ in 0..200 {
            let mut run = || -> Result<(bool, String), rinehart_core::Error> {
                let u = s.uelement(&alg, 2, 2, 3)?;
                let v = s.uelement(&alg, 2, 2, 3)?;
                let w = s.uelement(&alg, 2, 2, 3)?;
                let left = alg.multiply(&alg.multiply(&u, &v)?, &w)?;
                let right = alg.multiply(&u, &alg.multiply(&v, &w)?)?;
                Ok((left == right, format!("{}; {}; {}", alg.display(&u), alg.display(&v), alg.display(&w))))
            };
            let r = run();
            t.record("associativity", matches!(r, Ok((true, _))), || format!("{label}: {r:?}"));
        }
    }
    from_tally(5, "PBW round trip and confluence", &t, "200 round trips and 200 triple products per algebra".into())
}

fn all_algebras() -> Vec<(&'static str, UAlgebra)> {
    let mut v = free_algebras();
    v.push(("cone", UAlgebra::new(standard::nilpotent_cone_log()).expect("verified")));
    v.push(("normal crossing quotient", UAlgebra::new(standard::normal_crossing_tangent()).expect("verified")));
    v
}

fn c6(seed: u64) -> Criterion {
    let algebras = all_algebras();
    let mut s = Sampler::new(seed ^ 0x6);
    let mut t = Tally::default();
    for k in 0..200 {
        let (label, alg) = &algebras[k % algebras.len()];
        let mut run = || -> Result<(bool, String), rinehart_core::Error> {
            let u = s.uelement(alg, 2, 1, 3)?;
            let v = s.uelement(alg, 2, 1, 3)?;
            let p = s.reduced_poly(alg.ring(), 3, 3)?;
            let direct = alg.evaluate_operator(&alg.multiply(&u, &v)?, &p, DEFAULT_TRUNCATION)?;
            let nested = alg.evaluate_operator(&u, &alg.evaluate_operator(&v, &p, DEFAULT_TRUNCATION)?, DEFAULT_TRUNCATION)?;
            Ok((direct == nested, format!("{label}: u = {}, v = {}, p = {}", alg.display(&u), alg.display(&v), alg.ring().fmt_poly(&p))))
        };
        let r = run();
        t.record("multiplicativity", matches!(r, Ok((true, _))), || format!("{r:?}"));
    }
    let cone = UAlgebra::new(standard::nilpotent_cone_log()).expect("verified");
    let syz = &standard::cone_syzygies()[0];
    let element = (0..3).fold(UElement::zero(), |acc, i| acc.add(&cone.monomial(&syz.coefficients[i], Word::letter(i)).unwrap()));
    t.record("syzygy element is nonzero in U", !element.is_zero(), || cone.display(&element));
    for _ in 0..50 {
        let p = s.reduced_poly(cone.ring(), 4, 4).unwrap();
        let v = cone.evaluate_operator(&element, &p, DEFAULT_TRUNCATION);
        t.record("syzygy element is the zero operator", matches!(&v, Ok(q) if q.is_zero()), || cone.ring().fmt_poly(&p));
    }
    from_tally(6, "operator-oracle soundness", &t, format!("200 operator triples, 50 inputs for {}", cone.display(&element)))
}

fn c7(seed: u64) -> Criterion {
    let title = "bialgebra axioms";
    let alg = UAlgebra::new(standard::weyl_a1()).expect("verified");
    match bialgebra::counit_axioms_check(&alg, 200, 3, seed ^ 0x7) {
        Ok(report) => {
            let witnesses = report.checks.iter().filter_map(|c| c.witness.as_ref().map(|w| format!("{}: {w}", c.name))).collect();
            let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
            finish(7, title, report.overall(), format!("200 samples: {}", names.join(", ")), witnesses)
        }
        Err(e) => finish(7, title, Status::Fail, String::new(), vec![err_witness(e)]),
    }
}

fn c8(seed: u64) -> Criterion {
    let alg = UAlgebra::new(standard::weyl_a1()).expect("verified");
    let mut s = Sampler::new(seed ^ 0x8);
    let mut t = Tally::default();
    for _ in 0..100 {
        let u = s.uelement_counit_zero(&alg, 3, 2, 3).unwrap();
        let level = bialgebra::primitive_filtration_level(&alg, &u, 6);
        t.record("level equals degree", level == Ok(Some(u.filtration_degree())), || format!("{}: {level:?}", alg.display(&u)));
    }
    from_tally(8, "filtration coincidence", &t, "100 counit-zero elements of degree at most 3".into())
}

fn c9() -> Criterion {
    let mut t = Tally::default();
    let mut shown = Vec::new();
    for ((label, alg), (d, want)) in free_algebras().into_iter().zip([(2, 3), (1, 6)]) {
        match bialgebra::solve_primitives(&alg, d, 2) {
            Ok(basis) => {
                shown.push(format!("{label} dimension {}", basis.len()));
                t.record("dimension", basis.len() == want, || format!("{label}: {} instead of {want}", basis.len()));
                let lengths_ok = basis.iter().all(|u| u.terms().all(|(w, _)| w.len() == 1));
                t.record("word length 1", lengths_ok, || label.to_string());
            }
            Err(e) => t.record("solve", false, || format!("{label}: {e}")),
        }
    }
    from_tally(9, "primitive elements", &t, shown.join(", "))
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

fn c10() -> Criterion {
    const ORDER: usize = 3;
    let alg = UAlgebra::new(standard::weyl_a1()).expect("verified");
    let ring = alg.ring().clone();
    let power = |i: usize| Word::new(vec![0; i]);
    let mut t = Tally::default();
    for i in 0..=ORDER {
        for j in 0..=ORDER - i {
            let a = JetElement::delta(&ring, ORDER, power(i)).unwrap();
            let b = JetElement::delta(&ring, ORDER, power(j)).unwrap();
            let prod = bialgebra::jet_multiply(&alg, &a, &b).unwrap();
            let expected = JetElement::new(ORDER, [(power(i + j), Poly::from_int(1, binomial(i + j, i)))]).unwrap();
            t.record("multinomial pairing", prod == expected, || format!("δ(D^{i}) · δ(D^{j})"));
            let top = alg.monomial(&ring.one(), power(i + j)).unwrap();
            let paired = bialgebra::jet_pair(&alg, &prod, &top).unwrap();
            t.record("pairing with coproducts", paired == Poly::from_int(1, binomial(i + j, i)), || format!("({i}, {j})"));
        }
        let eps = JetElement::epsilon(&ring, ORDER);
        let d = JetElement::delta(&ring, ORDER, power(i)).unwrap();
        t.record("epsilon is neutral", bialgebra::jet_multiply(&alg, &eps, &d).as_ref() == Ok(&d), || format!("δ(D^{i})"));
    }
    from_tally(10, "jet duality", &t, "order 3: δ(D^i) · δ(D^j) = C(i+j, i) δ(D^(i+j)), (δ(D) · δ(D))(D^2) = 2".into())
}

/// `F(∅) = Q` on a single point, glued by nothing.
pub fn empty_open_presheaf() -> PresheafFS {
    let poset = FinitePoset::antichain(1);
    let dims = BTreeMap::from([(0, 1), (1, 1)]);
    let res = BTreeMap::from([((1, 0), Matrix::identity(1))]);
    PresheafFS::new(poset, &dims, &res).expect("valid presheaf")
}

fn stalks_preserved(f: &PresheafFS) -> bool {
    let s = sheafkit::sheafify(f);
    (0..f.poset().len()).all(|x| s.unit.stalk_map(x).is_invertible())
}

fn c11(seed: u64) -> Criterion {
    let mut s = Sampler::new(seed ^ 0xb);
    let mut t = Tally::default();
    for (shape, poset) in sheafkit::fixture_shapes() {
        let cover: Vec<u64> = (0..poset.len()).map(|x| poset.up_set(x)).collect();
        for _ in 0..100 {
            let psi = sheafkit::random_lemma1_fixture(&poset, &mut s);
            let r = sheafkit::check_lemma_stalkwise_to_sheaf(&psi);
            t.record("stalkwise to sheafified isomorphism", r.all_passed(), || format!("{shape}: {r}"));
            let f = &psi.source;
            let sh = sheafkit::sheafify(f);
            t.record("sheafification is a sheaf", sheafkit::is_sheaf(&sh.sheaf), || shape.to_string());
            t.record("idempotence", sheafkit::is_isomorphism(&sheafkit::sheafify(&sh.sheaf).unit), || shape.to_string());
            t.record("stalk preservation", stalks_preserved(f), || shape.to_string());

            let phi: PresheafMorphism = sheafkit::random_lemma2_fixture(&poset, &mut s);
            let r = sheafkit::check_lemma_local_to_stalkwise(&phi, &cover);
            t.record("local to stalkwise isomorphism", r.all_passed(), || format!("{shape}: {r}"));
            t.record("stalk preservation", stalks_preserved(&phi.target), || shape.to_string());
        }
    }
    let f = empty_open_presheaf();
    let repaired = sheafkit::sheafify(&f).sheaf;
    t.record("F(∅) = Q is not a sheaf", !sheafkit::is_sheaf(&f), || "accepted".into());
    t.record("F(∅) = Q is repaired", repaired.dim(0) == 0 && sheafkit::is_sheaf(&repaired), || format!("dim F#(∅) = {}", repaired.dim(0)));
    from_tally(11, "sheaf lemmas", &t, "100 fixtures per shape and lemma on chain, antichain and vee".into())
}

/// The tensor `b ⊗ a` over `Q[x,y]/<xy>` and its operator counterpart.
pub fn c12() -> Criterion {
    let title = "unresolved claim y∂_y ⊗_R x∂_x = 0";
    let alg = UAlgebra::new(standard::normal_crossing_tangent()).expect("verified");
    let (a, b) = (alg.generator(0).unwrap(), alg.generator(1).unwrap());
    let run = || -> Result<(Primitivity, Primitivity, bool, bool), rinehart_core::Error> {
        let ba = bialgebra::tensor_canonicalize(&alg, &[(b.clone(), a.clone())])?;
        let ab = bialgebra::tensor_canonicalize(&alg, &[(a.clone(), b.clone())])?;
        let nonzero_words = !ba.is_zero() && !ab.is_zero();
        let s1 = bialgebra::tensor_zero_status(&alg, &ba, DEFAULT_TRUNCATION)?;
        let s2 = bialgebra::tensor_zero_status(&alg, &ab, DEFAULT_TRUNCATION)?;
        let product = alg.multiply(&a, &b)?;
        Ok((s1, s2, nonzero_words, alg.is_zero_operator(&product, DEFAULT_TRUNCATION)?))
    };
    match run() {
        Ok((s1, s2, words, operator_zero)) => {
            let undecided = s1 == Primitivity::Undecided && s2 == Primitivity::Undecided && words && operator_zero;
            let mut c = finish(
                12,
                title,
                if undecided { Status::Undecided } else { Status::Fail },
                format!("b ⊗ a: {s1}, a ⊗ b: {s2}"),
                Vec::new(),
            );
            c.notes.push(format!(
                "x∂_x∘y∂_y is {}the zero operator on R (checked on basis elements up to degree {DEFAULT_TRUNCATION})",
                if operator_zero { "" } else { "not " }
            ));
            c.notes.push("the tensor is nonzero on PBW words; the relations implemented here cannot decide it".into());
            c.data = json!({ "b_tensor_a": s1.as_str(), "a_tensor_b": s2.as_str(), "nonzero_on_words": words, "operator_zero": operator_zero });
            c
        }
        Err(e) => finish(12, title, Status::Fail, String::new(), vec![err_witness(e)]),
    }
}

/// Runs the criteria concurrently; the result is in criterion order.
pub fn run(seed: u64) -> Vec<Criterion> {
    let jobs: Vec<Box<dyn Fn() -> Criterion + Send + Sync>> = vec![
        Box::new(c1),
        Box::new(c2),
        Box::new(c3),
        Box::new(c4),
        Box::new(move || c5(seed)),
        Box::new(move || c6(seed)),
        Box::new(move || c7(seed)),
        Box::new(move || c8(seed)),
        Box::new(c9),
        Box::new(c10),
        Box::new(move || c11(seed)),
        Box::new(c12),
    ];
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs.iter().map(|job| scope.spawn(move || job())).collect();
        handles
            .into_iter()
            .enumerate()
            .map(|(i, h)| {
                h.join().unwrap_or_else(|_| Criterion {
                    number: i + 1,
                    title: "internal error",
                    status: Status::Fail,
                    summary: "the check panicked".into(),
                    witnesses: Vec::new(),
                    notes: Vec::new(),
                    data: Value::Null,
                })
            })
            .collect()
    })
}
