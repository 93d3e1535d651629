//! Seeded pseudo-random inputs for property checks. Everything is driven by
//! a ChaCha8 stream so a seed reproduces the same samples on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enveloping::{STensor, UAlgebra, UElement, Word};
use crate::linalg::Matrix;
use crate::polyring::{monomials_up_to, rational, Poly, Rational, RingCtx};
use crate::Error;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Numerator in `-3..=3`, denominator 1 or 2.
    pub fn small_rational(&mut self) -> Rational {
        rational(self.rng.gen_range(-3..=3), self.rng.gen_range(1..=2))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let q = self.small_rational();
            if q != Rational::from_integer(0.into()) {
                return q;
            }
        }
    }

    /// Up to `max_terms` random monomials of degree at most `max_degree`.
    pub fn poly(&mut self, nvars: usize, max_degree: u32, max_terms: usize) -> Poly {
        let monos = monomials_up_to(nvars, max_degree);
        let mut p = Poly::zero(nvars);
        for _ in 0..self.rng.gen_range(1..=max_terms.max(1)) {
            let m = monos[self.below(monos.len())].clone();
            p.add_term(m, self.small_rational());
        }
        p
    }

    pub fn reduced_poly(&mut self, ring: &RingCtx, max_degree: u32, max_terms: usize) -> Result<Poly, Error> {
        let p = self.poly(ring.nvars(), max_degree, max_terms);
        ring.reduce(&p)
    }

    /// A word of length `len`; sorted if requested.
    pub fn word(&mut self, ngens: usize, len: usize, sorted: bool) -> Word {
        let mut letters: Vec<usize> = (0..len).map(|_| self.below(ngens)).collect();
        if sorted {
            letters.sort_unstable();
        }
        Word::new(letters)
    }

    /// Raw `(coefficient, word)` pairs with unsorted words up to `max_len`.
    pub fn raw_terms(&mut self, alg: &UAlgebra, max_len: usize, coeff_degree: u32, max_terms: usize) -> Vec<(Poly, Word)> {
        let n = alg.ring().nvars();
        (0..self.rng.gen_range(1..=max_terms.max(1)))
            .map(|_| {
                let len = self.rng.gen_range(0..=max_len);
                let c = self.poly(n, coeff_degree, 2);
                (c, self.word(alg.ngens(), len, false))
            })
            .collect()
    }

    pub fn uelement(&mut self, alg: &UAlgebra, max_len: usize, coeff_degree: u32, max_terms: usize) -> Result<UElement, Error> {
        let raw = self.raw_terms(alg, max_len, coeff_degree, max_terms);
        alg.normal_form(&raw)
    }

    /// A random element with zero counit.
    pub fn uelement_counit_zero(&mut self, alg: &UAlgebra, max_len: usize, coeff_degree: u32, max_terms: usize) -> Result<UElement, Error> {
        let u = self.uelement(alg, max_len, coeff_degree, max_terms)?;
        let c = alg.counit(&u);
        Ok(u.sub(&alg.from_poly(&c)?))
    }

    /// A homogeneous symmetric tensor of degree `k`.
    pub fn stensor(&mut self, ring: &RingCtx, ngens: usize, k: usize, coeff_degree: u32, max_terms: usize) -> Result<STensor, Error> {
        let terms: Vec<(Poly, Vec<usize>)> = (0..self.rng.gen_range(1..=max_terms.max(1)))
            .map(|_| {
                let c = self.poly(ring.nvars(), coeff_degree, 2);
                (c, self.word(ngens, k, true).letters().to_vec())
            })
            .collect();
        STensor::from_terms(ring, terms)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let data = (0..rows)
            .map(|_| (0..cols).map(|_| Rational::from_integer(self.rng.gen_range(-2..=2).into())).collect())
            .collect();
        Matrix::from_rows_with_cols(data, cols)
    }

    /// A random invertible `n x n` matrix with small integer entries.
    pub fn invertible_matrix(&mut self, n: usize) -> Matrix {
        loop {
            let m = self.matrix(n, n);
            if m.is_invertible() {
                return m;
            }
        }
    }
}
