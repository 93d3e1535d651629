//! Presheaves of finite-dimensional `Q`-vector spaces on finite Alexandrov
//! spaces, and their sheafification.
//!
//! A finite poset carries the topology whose opens are the up-closed subsets;
//! `U_x = {y : x <= y}` is the smallest open around `x`, so the stalk at `x`
//! is `F(U_x)`. Opens are bitmasks over the points. `F^#(U)` is the space of
//! families `(s_x)_{x in U}` with `s_x in F(U_x)` and `res(U_x, U_y) s_x = s_y`
//! whenever `x <= y`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg::Matrix;
use crate::polyring::Rational;
use crate::report::{Check, CheckReport, Status};
use crate::sample::Sampler;
use crate::Error;

pub type Open = u64;

const MAX_POINTS: usize = 20;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    opens: Vec<Open>,
}

impl FinitePoset {
    /// `leq[i][j]` means point `i` is below point `j`.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, Error> {
        let n = names.len();
        if n > MAX_POINTS {
            return Err(Error::InvalidPoset(format!("at most {MAX_POINTS} points are supported")));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::DuplicateName(a.clone()));
            }
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidPoset("order matrix has the wrong shape".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::InvalidPoset(format!("not reflexive at {}", names[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!("{} and {} violate antisymmetry", names[i], names[j])));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive: {} <= {} <= {}",
                            names[i], names[j], names[k]
                        )));
                    }
                }
            }
        }
        let mut poset = FinitePoset { names, leq, opens: Vec::new() };
        let mut opens: Vec<Open> = (0..1u64 << n).filter(|&m| poset.is_up_closed(m)).collect();
        opens.sort_by_key(|&m| (m.count_ones(), m));
        poset.opens = opens;
        Ok(poset)
    }

    /// The reflexive-transitive closure of `pairs` (each `(a, b)` meaning
    /// `a <= b`).
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, Error> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { index: a.max(b), len: n });
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        FinitePoset::new(names, leq)
    }

    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::from_pairs(default_names(n), &pairs).expect("chain")
    }

    pub fn antichain(n: usize) -> Self {
        FinitePoset::from_pairs(default_names(n), &[]).expect("antichain")
    }

    /// `p0 <= p1` and `p0 <= p2`.
    pub fn vee() -> Self {
        FinitePoset::from_pairs(default_names(3), &[(0, 1), (0, 2)]).expect("vee")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, Error> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn full(&self) -> Open {
        if self.names.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.names.len())
        }
    }

    pub fn is_up_closed(&self, m: Open) -> bool {
        (0..self.len()).all(|i| m >> i & 1 == 0 || (0..self.len()).all(|j| !self.leq[i][j] || m >> j & 1 == 1))
    }

    /// All opens, ordered by size and then bitmask.
    pub fn opens(&self) -> &[Open] {
        &self.opens
    }

    pub fn open_index(&self, u: Open) -> Option<usize> {
        self.opens.iter().position(|&o| o == u)
    }

    /// The minimal open neighbourhood of `x`.
    pub fn up_set(&self, x: usize) -> Open {
        (0..self.len()).filter(|&j| self.leq[x][j]).fold(0, |m, j| m | 1 << j)
    }

    pub fn points(&self, u: Open) -> Vec<usize> {
        (0..self.len()).filter(|i| u >> i & 1 == 1).collect()
    }

    pub fn open_from_names(&self, names: &[&str]) -> Result<Open, Error> {
        let mut m = 0;
        for n in names {
            m |= 1 << self.index_of(n)?;
        }
        if !self.is_up_closed(m) {
            return Err(Error::InvalidPresheaf(format!("{{{}}} is not open", names.join(","))));
        }
        Ok(m)
    }

    pub fn open_names(&self, u: Open) -> Vec<String> {
        self.points(u).into_iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn describe(&self, u: Open) -> String {
        format!("{{{}}}", self.open_names(u).join(","))
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn subset(v: Open, u: Open) -> bool {
    v & !u == 0
}

/// A functorial assignment of spaces `F(U)` and restrictions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PresheafFS {
    poset: FinitePoset,
    dims: Vec<usize>,
    /// `(u, v)` open indices with `V ⊆ U`, matrix `dim V x dim U`.
    res: BTreeMap<(usize, usize), Matrix>,
}

impl PresheafFS {
    /// Missing dimensions are 0; missing restrictions are the identity on
    /// `res(U, U)`, the zero map into a zero space, or a composite through an
    /// intermediate open. The result must be functorial.
    pub fn new(poset: FinitePoset, dims: &BTreeMap<Open, usize>, restrictions: &BTreeMap<(Open, Open), Matrix>) -> Result<Self, Error> {
        let opens = poset.opens().to_vec();
        let idx = |u: Open| poset.open_index(u).ok_or_else(|| Error::InvalidPresheaf(format!("{} is not open", poset.describe(u))));
        let mut dim_vec = vec![0; opens.len()];
        for (&u, &d) in dims {
            dim_vec[idx(u)?] = d;
        }
        let mut res = BTreeMap::new();
        for (&(u, v), m) in restrictions {
            let (iu, iv) = (idx(u)?, idx(v)?);
            if !subset(v, u) {
                return Err(Error::InvalidPresheaf(format!("{} is not contained in {}", poset.describe(v), poset.describe(u))));
            }
            if m.rows() != dim_vec[iv] || m.cols() != dim_vec[iu] {
                return Err(Error::InvalidPresheaf(format!(
                    "restriction {} -> {} should be {}x{}",
                    poset.describe(u),
                    poset.describe(v),
                    dim_vec[iv],
                    dim_vec[iu]
                )));
            }
            res.insert((iu, iv), m.clone());
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (iu, &u) in opens.iter().enumerate() {
            for (iv, &v) in opens.iter().enumerate() {
                if subset(v, u) {
                    pairs.push((iu, iv));
                }
            }
        }
        pairs.sort_by_key(|&(iu, iv)| opens[iu].count_ones() - opens[iv].count_ones());
        for (iu, iv) in pairs {
            if res.contains_key(&(iu, iv)) {
                continue;
            }
            let m = if iu == iv {
                Matrix::identity(dim_vec[iu])
            } else if dim_vec[iu] == 0 || dim_vec[iv] == 0 {
                Matrix::zeros(dim_vec[iv], dim_vec[iu])
            } else {
                let (u, v) = (opens[iu], opens[iv]);
                let via = opens.iter().enumerate().find_map(|(iw, &w)| {
                    (w != u && w != v && subset(v, w) && subset(w, u))
                        .then(|| Some((res.get(&(iu, iw))?, res.get(&(iw, iv))?)))
                        .flatten()
                });
                match via {
                    Some((a, b)) => b * a,
                    None => {
                        return Err(Error::InvalidPresheaf(format!(
                            "missing restriction {} -> {}",
                            poset.describe(u),
                            poset.describe(v)
                        )))
                    }
                }
            };
            res.insert((iu, iv), m);
        }
        let f = PresheafFS { poset, dims: dim_vec, res };
        f.validate()?;
        Ok(f)
    }

    fn from_parts(poset: FinitePoset, dims: Vec<usize>, res: BTreeMap<(usize, usize), Matrix>) -> Self {
        PresheafFS { poset, dims, res }
    }

    /// Identity on every `U = U` and functoriality for every chain.
    pub fn validate(&self) -> Result<(), Error> {
        let opens = self.poset.opens();
        for i in 0..opens.len() {
            if self.res[&(i, i)] != Matrix::identity(self.dims[i]) {
                return Err(Error::InvalidPresheaf(format!("res on {} is not the identity", self.poset.describe(opens[i]))));
            }
        }
        for (iu, &u) in opens.iter().enumerate() {
            for (iv, &v) in opens.iter().enumerate() {
                if !subset(v, u) {
                    continue;
                }
                for (iw, &w) in opens.iter().enumerate() {
                    if subset(w, v) && &self.res[&(iv, iw)] * &self.res[&(iu, iv)] != self.res[&(iu, iw)] {
                        return Err(Error::InvalidPresheaf(format!(
                            "functoriality fails for {} ⊇ {} ⊇ {}",
                            self.poset.describe(u),
                            self.poset.describe(v),
                            self.poset.describe(w)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant presheaf `Q^d`, including on the empty open.
    pub fn constant(poset: &FinitePoset, d: usize) -> Self {
        let dims = poset.opens().iter().map(|&u| (u, d)).collect();
        let mut res = BTreeMap::new();
        for &u in poset.opens() {
            for &v in poset.opens() {
                if subset(v, u) {
                    res.insert((u, v), Matrix::identity(d));
                }
            }
        }
        PresheafFS::new(poset.clone(), &dims, &res).expect("constant presheaf")
    }

    /// `J_S`: `Q` on opens containing `s`, zero elsewhere.
    pub fn indicator(poset: &FinitePoset, s: Open) -> Self {
        let opens = poset.opens();
        let dims: Vec<usize> = opens.iter().map(|&u| usize::from(subset(s, u))).collect();
        let mut res = BTreeMap::new();
        for (iu, &u) in opens.iter().enumerate() {
            for (iv, &v) in opens.iter().enumerate() {
                if subset(v, u) {
                    let m = if dims[iu] == 1 && dims[iv] == 1 { Matrix::identity(1) } else { Matrix::zeros(dims[iv], dims[iu]) };
                    res.insert((iu, iv), m);
                }
            }
        }
        PresheafFS::from_parts(poset.clone(), dims, res)
    }

    pub fn direct_sum(&self, other: &PresheafFS) -> PresheafFS {
        assert_eq!(self.poset, other.poset);
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let res = self.res.iter().map(|(k, m)| (*k, Matrix::block_diag(&[m.clone(), other.res[k].clone()]))).collect();
        PresheafFS::from_parts(self.poset.clone(), dims, res)
    }

    /// Transports the structure along invertible `g_U`: `res'(U,V) = g_V res g_U^-1`.
    pub fn conjugate(&self, g: &[Matrix]) -> PresheafFS {
        let inv: Vec<Matrix> = g.iter().map(|m| m.inverse().expect("invertible")).collect();
        let res = self.res.iter().map(|(&(iu, iv), m)| ((iu, iv), &(&g[iv] * m) * &inv[iu])).collect();
        PresheafFS::from_parts(self.poset.clone(), self.dims.clone(), res)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    fn idx(&self, u: Open) -> usize {
        self.poset.open_index(u).expect("open set")
    }

    pub fn dim(&self, u: Open) -> usize {
        self.dims[self.idx(u)]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn restriction(&self, u: Open, v: Open) -> &Matrix {
        &self.res[&(self.idx(u), self.idx(v))]
    }

    fn res_idx(&self, iu: usize, iv: usize) -> &Matrix {
        &self.res[&(iu, iv)]
    }
}

/// `F_x = F(U_x)` with the germ maps `F(U) -> F_x` for opens containing `x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stalk {
    pub point: usize,
    pub open: Open,
    pub dim: usize,
    pub germs: Vec<(Open, Matrix)>,
}

pub fn stalk(f: &PresheafFS, x: &str) -> Result<Stalk, Error> {
    let p = f.poset.index_of(x)?;
    Ok(stalk_at(f, p))
}

fn stalk_at(f: &PresheafFS, p: usize) -> Stalk {
    let ux = f.poset.up_set(p);
    let germs = f.poset.opens().iter().filter(|&&u| u >> p & 1 == 1).map(|&u| (u, f.restriction(u, ux).clone())).collect();
    Stalk { point: p, open: ux, dim: f.dim(ux), germs }
}

/// `F^#` together with the coordinates used to build it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sheafification {
    pub sheaf: PresheafFS,
    /// Columns span `F^#(U)` inside `prod_{x in U} F(U_x)`, per open index.
    pub bases: Vec<Matrix>,
    /// The canonical map `F -> F^#`.
    pub unit: PresheafMorphism,
}

/// Offsets of each point's block in `prod_{x in U} F(U_x)`.
fn family_layout(f: &PresheafFS, u: Open) -> (Vec<(usize, usize)>, usize) {
    let mut offsets = Vec::new();
    let mut total = 0;
    for x in f.poset.points(u) {
        offsets.push((x, total));
        total += f.dim(f.poset.up_set(x));
    }
    (offsets, total)
}

fn place(target: &mut Matrix, row: usize, col: usize, block: &Matrix, sign: bool) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = block.get(i, j).clone();
            target.set(row + i, col + j, if sign { v } else { -v });
        }
    }
}

fn compatibility_matrix(f: &PresheafFS, u: Open) -> Matrix {
    let (layout, total) = family_layout(f, u);
    let poset = &f.poset;
    let mut blocks = Vec::new();
    for &(x, ox) in &layout {
        for &(y, oy) in &layout {
            if x != y && poset.leq(x, y) {
                blocks.push((x, ox, y, oy));
            }
        }
    }
    let nrows: usize = blocks.iter().map(|&(_, _, y, _)| f.dim(poset.up_set(y))).sum();
    let mut m = Matrix::zeros(nrows, total);
    let mut r = 0;
    for (x, ox, y, oy) in blocks {
        let (ux, uy) = (poset.up_set(x), poset.up_set(y));
        place(&mut m, r, ox, f.restriction(ux, uy), true);
        place(&mut m, r, oy, &Matrix::identity(f.dim(uy)), false);
        r += f.dim(uy);
    }
    m
}

/// Stacks the restrictions `F(U) -> F(U_x)` for `x in U`.
fn germ_matrix(f: &PresheafFS, u: Open) -> Matrix {
    let (layout, total) = family_layout(f, u);
    let mut m = Matrix::zeros(total, f.dim(u));
    for (x, ox) in layout {
        place(&mut m, ox, 0, f.restriction(u, f.poset.up_set(x)), true);
    }
    m
}

/// Rows of the families on `U` belonging to the points of `V ⊆ U`.
fn family_projection(f: &PresheafFS, u: Open, v: Open) -> Matrix {
    let (lu, tu) = family_layout(f, u);
    let (lv, tv) = family_layout(f, v);
    let mut m = Matrix::zeros(tv, tu);
    for (x, ov) in lv {
        let ou = lu.iter().find(|(y, _)| *y == x).expect("point of V lies in U").1;
        for k in 0..f.dim(f.poset.up_set(x)) {
            m.set(ov + k, ou + k, Rational::one());
        }
    }
    m
}

fn coordinates(basis: &Matrix, vectors: &Matrix) -> Matrix {
    basis.solve(vectors).expect("vectors lie in the span of the basis")
}

pub fn sheafify(f: &PresheafFS) -> Sheafification {
    let poset = f.poset.clone();
    let opens = poset.opens().to_vec();
    let bases: Vec<Matrix> = opens.iter().map(|&u| compatibility_matrix(f, u).kernel_matrix()).collect();
    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let mut res = BTreeMap::new();
    for (iu, &u) in opens.iter().enumerate() {
        for (iv, &v) in opens.iter().enumerate() {
            if subset(v, u) {
                let projected = &family_projection(f, u, v) * &bases[iu];
                res.insert((iu, iv), coordinates(&bases[iv], &projected));
            }
        }
    }
    let sheaf = PresheafFS::from_parts(poset, dims, res);
    let maps = opens.iter().enumerate().map(|(iu, &u)| coordinates(&bases[iu], &germ_matrix(f, u))).collect();
    let unit = PresheafMorphism { source: f.clone(), target: sheaf.clone(), maps };
    Sheafification { sheaf, bases, unit }
}

/// Whether `F(U)` maps isomorphically onto the equalizer of
/// `prod F(U_x) ⇉ prod F(U_x ∩ U_y)` for every open `U`.
pub fn is_sheaf(f: &PresheafFS) -> bool {
    sheaf_witness(f).is_none()
}

/// The first open where the equalizer condition fails.
pub fn sheaf_witness(f: &PresheafFS) -> Option<Open> {
    let poset = &f.poset;
    for &u in poset.opens() {
        let (layout, total) = family_layout(f, u);
        let mut blocks = Vec::new();
        for (a, &(x, ox)) in layout.iter().enumerate() {
            for &(y, oy) in &layout[a + 1..] {
                blocks.push((x, ox, y, oy, poset.up_set(x) & poset.up_set(y)));
            }
        }
        let nrows: usize = blocks.iter().map(|b| f.dim(b.4)).sum();
        let mut eq = Matrix::zeros(nrows, total);
        let mut r = 0;
        for (x, ox, y, oy, w) in blocks {
            place(&mut eq, r, ox, f.restriction(poset.up_set(x), w), true);
            place(&mut eq, r, oy, f.restriction(poset.up_set(y), w), false);
            r += f.dim(w);
        }
        let equalizer_dim = total - eq.rank();
        let germs = germ_matrix(f, u);
        let d = f.dim(u);
        if germs.rank() != d || d != equalizer_dim {
            return Some(u);
        }
    }
    None
}

/// A natural transformation given by one matrix per open.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PresheafMorphism {
    pub source: PresheafFS,
    pub target: PresheafFS,
    /// Per open index, `dim target(U) x dim source(U)`.
    pub maps: Vec<Matrix>,
}

impl PresheafMorphism {
    pub fn new(source: PresheafFS, target: PresheafFS, maps: &BTreeMap<Open, Matrix>) -> Result<Self, Error> {
        if source.poset != target.poset {
            return Err(Error::InvalidPresheaf("source and target live on different posets".into()));
        }
        let opens = source.poset.opens().to_vec();
        let mut out = Vec::new();
        for (i, &u) in opens.iter().enumerate() {
            let shape = (target.dims[i], source.dims[i]);
            let m = match maps.get(&u) {
                Some(m) => m.clone(),
                None if shape.0 == 0 || shape.1 == 0 => Matrix::zeros(shape.0, shape.1),
                None => return Err(Error::InvalidPresheaf(format!("missing morphism component on {}", source.poset.describe(u)))),
            };
            if (m.rows(), m.cols()) != shape {
                return Err(Error::InvalidPresheaf(format!(
                    "morphism on {} should be {}x{}",
                    source.poset.describe(u),
                    shape.0,
                    shape.1
                )));
            }
            out.push(m);
        }
        let psi = PresheafMorphism { source, target, maps: out };
        if let Some(bad) = psi.naturality_witness() {
            return Err(Error::InvalidPresheaf(format!("morphism is not natural on {bad}")));
        }
        Ok(psi)
    }

    pub fn identity(f: &PresheafFS) -> Self {
        let maps = f.dims.iter().map(|&d| Matrix::identity(d)).collect();
        PresheafMorphism { source: f.clone(), target: f.clone(), maps }
    }

    /// `F -> gF` realized by the matrices `g_U`.
    pub fn conjugation(f: &PresheafFS, g: &[Matrix]) -> Self {
        PresheafMorphism { source: f.clone(), target: f.conjugate(g), maps: g.to_vec() }
    }

    pub fn compose(&self, first: &PresheafMorphism) -> PresheafMorphism {
        let maps = self.maps.iter().zip(&first.maps).map(|(a, b)| a * b).collect();
        PresheafMorphism { source: first.source.clone(), target: self.target.clone(), maps }
    }

    pub fn map(&self, u: Open) -> &Matrix {
        &self.maps[self.source.idx(u)]
    }

    fn naturality_witness(&self) -> Option<String> {
        let opens = self.source.poset.opens();
        for (iu, &u) in opens.iter().enumerate() {
            for (iv, &v) in opens.iter().enumerate() {
                if subset(v, u) && &self.target.res_idx(iu, iv).clone() * &self.maps[iu] != &self.maps[iv] * self.source.res_idx(iu, iv) {
                    let p = &self.source.poset;
                    return Some(format!("{} ⊇ {}", p.describe(u), p.describe(v)));
                }
            }
        }
        None
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_witness().is_none()
    }

    pub fn stalk_map(&self, x: usize) -> &Matrix {
        self.map(self.source.poset.up_set(x))
    }

    /// `ψ^#: F_1^# -> F_2^#`, acting blockwise on germ families.
    pub fn sheafified(&self) -> (Sheafification, Sheafification, PresheafMorphism) {
        let s1 = sheafify(&self.source);
        let s2 = sheafify(&self.target);
        let poset = &self.source.poset;
        let mut maps = Vec::new();
        for (iu, &u) in poset.opens().iter().enumerate() {
            let blocks: Vec<Matrix> = poset.points(u).into_iter().map(|x| self.stalk_map(x).clone()).collect();
            let families = &(&Matrix::block_diag(&blocks) * &s1.bases[iu]);
            maps.push(coordinates(&s2.bases[iu], families));
        }
        let psi = PresheafMorphism { source: s1.sheaf.clone(), target: s2.sheaf.clone(), maps };
        (s1, s2, psi)
    }
}

/// Stalkwise isomorphism implies `ψ^#` is an isomorphism.
pub fn check_lemma_stalkwise_to_sheaf(psi: &PresheafMorphism) -> CheckReport {
    let mut report = CheckReport::default();
    let poset = &psi.source.poset;
    let bad_point = (0..poset.len()).find(|&x| !psi.stalk_map(x).is_invertible());
    if let Some(x) = bad_point {
        report.push(
            Check::with_status("stalkwise isomorphism", Status::HypothesisViolated)
                .with_witness(format!("stalk map at {} is not invertible", poset.names()[x])),
        );
        return report;
    }
    report.push(Check::pass("stalkwise isomorphism"));
    let (_, _, sharp) = psi.sheafified();
    match sharp.maps.iter().position(|m| !m.is_invertible()) {
        Some(i) => report.push(Check::fail("sheafified isomorphism", poset.describe(poset.opens()[i]))),
        None => report.push(Check::pass("sheafified isomorphism")),
    }
    report
}

/// A morphism that is an isomorphism on every open inside some member of
/// `cover` is a stalkwise isomorphism.
pub fn check_lemma_local_to_stalkwise(psi: &PresheafMorphism, cover: &[Open]) -> CheckReport {
    let mut report = CheckReport::default();
    let poset = &psi.source.poset;
    let union = cover.iter().fold(0, |a, &b| a | b);
    let not_open = cover.iter().find(|&&c| poset.open_index(c).is_none());
    let local_failure = poset
        .opens()
        .iter()
        .enumerate()
        .find(|&(i, &v)| cover.iter().any(|&c| subset(v, c)) && !psi.maps[i].is_invertible());
    let violation = if let Some(&c) = not_open {
        Some(format!("cover member {} is not open", poset.describe(c)))
    } else if union != poset.full() {
        Some("cover does not exhaust the space".to_string())
    } else {
        local_failure.map(|(_, &v)| format!("not invertible on {}", poset.describe(v)))
    };
    if let Some(w) = violation {
        report.push(Check::with_status("local isomorphism", Status::HypothesisViolated).with_witness(w));
        return report;
    }
    report.push(Check::pass("local isomorphism"));
    match (0..poset.len()).find(|&x| !psi.stalk_map(x).is_invertible()) {
        Some(x) => report.push(Check::fail("stalkwise isomorphism", poset.names()[x].clone())),
        None => report.push(Check::pass("stalkwise isomorphism")),
    }
    report
}

/// Solves for `θ: F^# -> G` with `θ ∘ η = φ`. `Ok(Some(θ))` if the
/// factorization exists and is unique; `Ok(None)` if it does not exist or is
/// not unique. `G` must be a sheaf.
pub fn factor_through_sheafification(phi: &PresheafMorphism) -> Result<Option<PresheafMorphism>, Error> {
    if !is_sheaf(&phi.target) {
        return Err(Error::InvalidPresheaf("target of the factorization must be a sheaf".into()));
    }
    let s = sheafify(&phi.source);
    let g = &phi.target;
    let opens = g.poset.opens().to_vec();
    let sharp_dims = s.sheaf.dims.clone();
    // unknowns: entries of θ_U (dim G(U) x dim F^#(U)), row-major per open
    let mut offset = Vec::new();
    let mut n = 0;
    for i in 0..opens.len() {
        offset.push(n);
        n += g.dims[i] * sharp_dims[i];
    }
    let var = |i: usize, r: usize, c: usize| offset[i] + r * sharp_dims[i] + c;
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut rhs = Vec::new();
    // θ_U η_U = φ_U
    for i in 0..opens.len() {
        let eta = &s.unit.maps[i];
        for r in 0..g.dims[i] {
            for c in 0..phi.source.dims[i] {
                let row = (0..sharp_dims[i]).map(|k| (var(i, r, k), eta.get(k, c).clone())).collect();
                rows.push(row);
                rhs.push(phi.maps[i].get(r, c).clone());
            }
        }
    }
    // res_G θ_U = θ_V res_#
    for (iu, &u) in opens.iter().enumerate() {
        for (iv, &v) in opens.iter().enumerate() {
            if iu == iv || !subset(v, u) {
                continue;
            }
            let rg = g.res_idx(iu, iv);
            let rs = s.sheaf.res_idx(iu, iv);
            for r in 0..g.dims[iv] {
                for c in 0..sharp_dims[iu] {
                    let mut row = Vec::new();
                    for k in 0..g.dims[iu] {
                        row.push((var(iu, k, c), rg.get(r, k).clone()));
                    }
                    for k in 0..sharp_dims[iv] {
                        row.push((var(iv, r, k), -rs.get(k, c).clone()));
                    }
                    rows.push(row);
                    rhs.push(Rational::zero());
                }
            }
        }
    }
    let mut a = Matrix::zeros(rows.len(), n);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row {
            let cur = a.get(i, *j) + v;
            a.set(i, *j, cur);
        }
    }
    let b = Matrix::from_columns(&[rhs], rows.len());
    if a.rank() != n {
        return Ok(None);
    }
    let Some(x) = a.solve(&b) else { return Ok(None) };
    let maps = (0..opens.len())
        .map(|i| {
            let data = (0..g.dims[i])
                .map(|r| (0..sharp_dims[i]).map(|c| x.get(var(i, r, c), 0).clone()).collect())
                .collect();
            Matrix::from_rows_with_cols(data, sharp_dims[i])
        })
        .collect();
    Ok(Some(PresheafMorphism { source: s.sheaf, target: g.clone(), maps }))
}

/// Sums of indicator presheaves `J_S` over random subsets, transported by
/// random invertible matrices on every open.
pub fn random_presheaf(poset: &FinitePoset, sampler: &mut Sampler) -> PresheafFS {
    let n = poset.len();
    let summands = 1 + sampler.below(3);
    let mut f = PresheafFS::indicator(poset, sampler.below(1 << n) as Open);
    for _ in 1..summands {
        f = f.direct_sum(&PresheafFS::indicator(poset, sampler.below(1 << n) as Open));
    }
    let g = random_automorphisms(&f, sampler);
    f.conjugate(&g)
}

pub fn random_automorphisms(f: &PresheafFS, sampler: &mut Sampler) -> Vec<Matrix> {
    f.dims.iter().map(|&d| sampler.invertible_matrix(d)).collect()
}

/// `h ∘ η ∘ g^-1: gF -> hF^#`, a stalkwise isomorphism that is typically not
/// invertible on every open.
pub fn random_lemma1_fixture(poset: &FinitePoset, sampler: &mut Sampler) -> PresheafMorphism {
    let f = random_presheaf(poset, sampler);
    let s = sheafify(&f);
    let g = random_automorphisms(&f, sampler);
    let h = random_automorphisms(&s.sheaf, sampler);
    let into = PresheafMorphism::conjugation(&s.sheaf, &h).compose(&s.unit);
    let back = PresheafMorphism::conjugation(&f, &g);
    let inv = PresheafMorphism {
        source: back.target.clone(),
        target: f.clone(),
        maps: g.iter().map(|m| m.inverse().expect("invertible")).collect(),
    };
    into.compose(&inv)
}

/// A random presheaf isomorphism `F -> gF`.
pub fn random_lemma2_fixture(poset: &FinitePoset, sampler: &mut Sampler) -> PresheafMorphism {
    let f = random_presheaf(poset, sampler);
    let g = random_automorphisms(&f, sampler);
    PresheafMorphism::conjugation(&f, &g)
}

/// The poset shapes used by the randomized suites.
pub fn fixture_shapes() -> Vec<(&'static str, FinitePoset)> {
    vec![("chain", FinitePoset::chain(3)), ("antichain", FinitePoset::antichain(3)), ("vee", FinitePoset::vee())]
}

/// Whether every component is invertible.
pub fn is_isomorphism(psi: &PresheafMorphism) -> bool {
    psi.maps.iter().all(Matrix::is_invertible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::integer;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn q(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| integer(v)).collect()).collect())
    }

    #[test]
    fn poset_axioms() {
        let cyc = FinitePoset::from_pairs(names(&["a", "b"]), &[(0, 1), (1, 0)]);
        assert!(matches!(cyc, Err(Error::InvalidPoset(_))));
        let bad = FinitePoset::new(names(&["a"]), vec![vec![false]]);
        assert!(matches!(bad, Err(Error::InvalidPoset(_))));
        let chain = FinitePoset::chain(2);
        assert_eq!(chain.opens(), &[0b00, 0b10, 0b11]);
        assert_eq!(chain.up_set(0), 0b11);
        assert_eq!(chain.up_set(1), 0b10);
        assert_eq!(FinitePoset::antichain(3).opens().len(), 8);
        assert_eq!(FinitePoset::vee().opens().len(), 5);
    }

    #[test]
    fn stalks() {
        let chain = FinitePoset::chain(2);
        let dims = BTreeMap::from([(0b11, 2), (0b10, 1)]);
        let res = BTreeMap::from([((0b11, 0b10), q(&[&[1, 0]]))]);
        let f = PresheafFS::new(chain, &dims, &res).unwrap();
        assert_eq!(stalk(&f, "p0").unwrap().dim, 2);
        assert_eq!(stalk(&f, "p1").unwrap().dim, 1);
        assert!(matches!(stalk(&f, "zz"), Err(Error::UnknownPoint(_))));
        let point = FinitePoset::chain(1);
        let g = PresheafFS::constant(&point, 3);
        assert_eq!(stalk(&g, "p0").unwrap().dim, 3);
        for (_, p) in fixture_shapes() {
            let c = PresheafFS::constant(&p, 2);
            for x in p.names() {
                assert_eq!(stalk(&c, x).unwrap().dim, 2);
            }
        }
    }

    #[test]
    fn functoriality_is_enforced() {
        let chain = FinitePoset::chain(3);
        let dims: BTreeMap<Open, usize> = chain.opens().iter().map(|&u| (u, usize::from(u != 0))).collect();
        let res = BTreeMap::from([
            ((0b111, 0b110), q(&[&[2]])),
            ((0b110, 0b100), q(&[&[3]])),
            ((0b111, 0b100), q(&[&[5]])),
        ]);
        assert!(matches!(PresheafFS::new(chain.clone(), &dims, &res), Err(Error::InvalidPresheaf(_))));
        let res = BTreeMap::from([((0b111, 0b110), q(&[&[2]])), ((0b110, 0b100), q(&[&[3]]))]);
        let f = PresheafFS::new(chain, &dims, &res).unwrap();
        assert_eq!(f.restriction(0b111, 0b100), &q(&[&[6]]));
    }

    #[test]
    fn empty_open_is_repaired() {
        let point = FinitePoset::chain(1);
        let f = PresheafFS::constant(&point, 1);
        assert_eq!(f.dim(0), 1);
        assert!(!is_sheaf(&f));
        let s = sheafify(&f);
        assert_eq!(s.sheaf.dim(0), 0);
        assert!(is_sheaf(&s.sheaf));
    }

    #[test]
    fn gluing_creates_sections() {
        let two = FinitePoset::antichain(2);
        let dims = BTreeMap::from([(0b11, 1), (0b01, 1), (0b10, 1)]);
        let res = BTreeMap::from([((0b11, 0b01), q(&[&[1]])), ((0b11, 0b10), q(&[&[1]]))]);
        let f = PresheafFS::new(two, &dims, &res).unwrap();
        let s = sheafify(&f);
        assert_eq!(s.sheaf.dim(0b11), 2);
        assert!(is_sheaf(&s.sheaf));
        assert!(!is_sheaf(&f));
    }

    #[test]
    fn sheaves_are_fixed() {
        let chain = FinitePoset::chain(3);
        let dims: BTreeMap<Open, usize> = chain.opens().iter().map(|&u| (u, if u == 0 { 0 } else { 2 })).collect();
        let ids: BTreeMap<(Open, Open), Matrix> = chain
            .opens()
            .iter()
            .flat_map(|&u| chain.opens().iter().filter(move |&&v| v != 0 && subset(v, u)).map(move |&v| ((u, v), Matrix::identity(2))))
            .collect();
        let c = PresheafFS::new(chain, &dims, &ids).unwrap();
        assert!(is_sheaf(&c));
        assert!(is_isomorphism(&sheafify(&c).unit));
    }

    #[test]
    fn lemma_examples() {
        let vee = FinitePoset::vee();
        let f = PresheafFS::constant(&vee, 1);
        let id = PresheafMorphism::identity(&f);
        assert!(check_lemma_stalkwise_to_sheaf(&id).all_passed());
        assert!(check_lemma_local_to_stalkwise(&id, &[vee.full()]).all_passed());

        // η: F -> F^# for the gluing example is a stalkwise iso but not an iso
        let two = FinitePoset::antichain(2);
        let dims = BTreeMap::from([(0b11, 1), (0b01, 1), (0b10, 1)]);
        let res = BTreeMap::from([((0b11, 0b01), q(&[&[1]])), ((0b11, 0b10), q(&[&[1]]))]);
        let g = PresheafFS::new(two.clone(), &dims, &res).unwrap();
        let eta = sheafify(&g).unit;
        assert!(!is_isomorphism(&eta));
        assert!(check_lemma_stalkwise_to_sheaf(&eta).all_passed());
        // η is an isomorphism on {p0} and {p1}: a local isomorphism
        assert!(check_lemma_local_to_stalkwise(&eta, &[0b01, 0b10]).all_passed());

        let zero = PresheafMorphism { source: g.clone(), target: g.clone(), maps: g.dims().iter().map(|&d| Matrix::zeros(d, d)).collect() };
        let r = check_lemma_stalkwise_to_sheaf(&zero);
        assert_eq!(r.checks[0].status, Status::HypothesisViolated);
        let r = check_lemma_local_to_stalkwise(&zero, &[0b01, 0b10]);
        assert_eq!(r.checks[0].status, Status::HypothesisViolated);
    }

    #[test]
    fn randomized_lemmas() {
        let mut s = Sampler::new(42);
        for (_, p) in fixture_shapes() {
            for _ in 0..10 {
                let psi = random_lemma1_fixture(&p, &mut s);
                assert!(psi.is_natural());
                assert!(check_lemma_stalkwise_to_sheaf(&psi).all_passed());
                let phi = random_lemma2_fixture(&p, &mut s);
                assert!(phi.is_natural());
                assert!(check_lemma_local_to_stalkwise(&phi, &[p.full()]).all_passed());
                let f = &phi.source;
                let sh = sheafify(f);
                assert!(is_sheaf(&sh.sheaf));
                assert!(is_isomorphism(&sheafify(&sh.sheaf).unit));
                for x in 0..p.len() {
                    assert_eq!(sh.sheaf.dim(p.up_set(x)), f.dim(p.up_set(x)));
                    assert!(sh.unit.stalk_map(x).is_invertible());
                }
            }
        }
    }

    #[test]
    fn universal_property() {
        let mut s = Sampler::new(9);
        for (_, p) in fixture_shapes() {
            for _ in 0..5 {
                let f = random_presheaf(&p, &mut s);
                let sh = sheafify(&f);
                let g = random_automorphisms(&sh.sheaf, &mut s);
                let phi = PresheafMorphism::conjugation(&sh.sheaf, &g).compose(&sh.unit);
                let theta = factor_through_sheafification(&phi).unwrap().expect("unique factorization");
                assert_eq!(theta.compose(&sh.unit).maps, phi.maps);
                assert!(theta.is_natural());
            }
        }
    }
}
