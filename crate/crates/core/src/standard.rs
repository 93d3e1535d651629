//! The concrete rings and presentations used throughout: the Weyl algebra
//! `A_1`, the normal crossing divisor `xy = 0` and the nilpotent cone
//! `x^2 + 4yz = 0`.

use crate::derivation::{Derivation, LRPresentation, Syzygy};
use crate::polyring::{Poly, RingCtx};

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

/// `x^2 + 4yz`
pub fn cone_equation() -> Poly {
    Poly::from_terms(3, &[(1, 1, &[2, 0, 0]), (4, 1, &[0, 1, 1])])
}

/// `Q[x,y,z]/<x^2 + 4yz>`
pub fn cone_ring() -> RingCtx {
    RingCtx::quotient(&["x", "y", "z"], cone_equation()).expect("valid ring")
}

/// `Q[x,y]/<xy>`
pub fn normal_crossing_ring() -> RingCtx {
    RingCtx::quotient(&["x", "y"], Poly::from_terms(2, &[(1, 1, &[1, 1])])).expect("valid ring")
}

/// Weyl algebra `A_1`: the single generator `D = d/dx` over `Q[x]`.
pub fn weyl_a1() -> LRPresentation {
    let ring = RingCtx::polynomial(&["x"]);
    LRPresentation::from_brackets(ring, names(&["D"]), vec![Derivation::partial(1, 0)], &[]).expect("valid")
}

/// Hamiltonian fields of the Poisson structure `{x,y} = 2y, {x,z} = -2z,
/// {y,z} = x` on `Q[x,y,z]`:
/// `Dx = 2y dy - 2z dz`, `Dy = -2y dx + x dz`, `Dz = 2z dx - x dy`.
pub fn cone_generators() -> Vec<Derivation> {
    let p = |t: &[(i64, i64, &[u32])]| Poly::from_terms(3, t);
    vec![
        Derivation::new(vec![Poly::zero(3), p(&[(2, 1, &[0, 1, 0])]), p(&[(-2, 1, &[0, 0, 1])])]),
        Derivation::new(vec![p(&[(-2, 1, &[0, 1, 0])]), Poly::zero(3), p(&[(1, 1, &[1, 0, 0])])]),
        Derivation::new(vec![p(&[(2, 1, &[0, 0, 1])]), p(&[(-1, 1, &[1, 0, 0])]), Poly::zero(3)]),
    ]
}

fn cone_brackets() -> Vec<(usize, usize, Vec<Poly>)> {
    let c = |v: [i64; 3]| v.iter().map(|&k| Poly::from_int(3, k)).collect::<Vec<_>>();
    vec![(0, 1, c([0, 2, 0])), (0, 2, c([0, 0, -2])), (1, 2, c([1, 0, 0]))]
}

/// Logarithmic derivations of the nilpotent cone over the ambient ring
/// `Q[x,y,z]`, generated by the Hamiltonian fields. Not free.
pub fn nilpotent_cone_log() -> LRPresentation {
    LRPresentation::from_brackets(RingCtx::polynomial(&["x", "y", "z"]), names(&["Dx", "Dy", "Dz"]), cone_generators(), &cone_brackets())
        .expect("valid")
}

/// Tangent derivations of the cone `Q[x,y,z]/<x^2+4yz>`, spanned by the
/// restricted Hamiltonian fields.
pub fn nilpotent_cone_tangent() -> LRPresentation {
    LRPresentation::from_brackets(cone_ring(), names(&["Dx", "Dy", "Dz"]), cone_generators(), &cone_brackets())
        .expect("valid")
}

/// `x Dx + 2z Dy + 2y Dz = 0`
pub fn cone_syzygies() -> Vec<Syzygy> {
    vec![Syzygy::new(vec![
        Poly::var(3, 0),
        Poly::from_terms(3, &[(2, 1, &[0, 0, 1])]),
        Poly::from_terms(3, &[(2, 1, &[0, 1, 0])]),
    ])]
}

fn normal_crossing_generators() -> Vec<Derivation> {
    vec![Derivation::new(vec![Poly::var(2, 0), Poly::zero(2)]), Derivation::new(vec![Poly::zero(2), Poly::var(2, 1)])]
}

/// `a = x dx`, `b = y dy` over `Q[x,y]`: the free module of logarithmic
/// derivations of the normal crossing divisor.
pub fn normal_crossing_log() -> LRPresentation {
    LRPresentation::from_brackets(RingCtx::polynomial(&["x", "y"]), names(&["a", "b"]), normal_crossing_generators(), &[])
        .expect("valid")
}

/// `a = x dx`, `b = y dy` as derivations of `Q[x,y]/<xy>`. Not free: `y a = 0 = x b`.
pub fn normal_crossing_tangent() -> LRPresentation {
    LRPresentation::from_brackets(normal_crossing_ring(), names(&["a", "b"]), normal_crossing_generators(), &[])
        .expect("valid")
}

/// `y a = 0` and `x b = 0` in the quotient.
pub fn normal_crossing_syzygies() -> Vec<Syzygy> {
    vec![Syzygy::new(vec![Poly::var(2, 1), Poly::zero(2)]), Syzygy::new(vec![Poly::zero(2), Poly::var(2, 0)])]
}
