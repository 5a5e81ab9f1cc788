//! Seeded random modules, morphisms and complexes.

use rand::Rng;

use crate::cplx::Complex;
use crate::exactla::Mat;
use crate::modcat::{cokernel, CatParams, Hom, HomSpace, Module};

/// A random partition with parts `≤ m` and total `≤ maxdim`.
pub fn random_partition<R: Rng + ?Sized>(params: CatParams, maxdim: usize, rng: &mut R) -> Vec<usize> {
    let total = rng.gen_range(0..=maxdim);
    let mut parts = Vec::new();
    let mut left = total;
    while left > 0 {
        let p = rng.gen_range(1..=left.min(params.m()));
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

pub fn random_invertible<R: Rng + ?Sized>(params: CatParams, n: usize, rng: &mut R) -> Mat {
    let f = params.field();
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..f.p())).collect();
        let m = Mat::from_vec(f, n, n, data).expect("sizes agree");
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// A module of random Jordan type in a random basis.
pub fn random_module<R: Rng + ?Sized>(params: CatParams, maxdim: usize, rng: &mut R) -> Module {
    let parts = random_partition(params, maxdim, rng);
    let base = Module::from_jordan(params, &parts);
    let n = base.dim();
    let p = random_invertible(params, n, rng);
    let pinv = p.inverse().expect("invertible");
    Module::new(params, p.mul(base.action()).mul(&pinv)).expect("conjugate of a nilpotent action")
}

/// A uniformly random element of `Hom_R(a, b)`.
pub fn random_hom<R: Rng + ?Sized>(a: &Module, b: &Module, rng: &mut R) -> Hom {
    let hs = HomSpace::new(a, b);
    let p = a.field().p();
    let coeffs: Vec<u64> = (0..hs.dim()).map(|_| rng.gen_range(0..p)).collect();
    hs.combine(&coeffs)
}

/// A random complex on degrees `lo..lo+len` with entries of dimension
/// `≤ maxdim`.
///
/// Each `d^n = g_n ∘ f_n` factors through a random middle module, and
/// `f_(n+1)` factors through the cokernel of `g_n`, so `d² = 0` by design.
pub fn random_complex<R: Rng + ?Sized>(params: CatParams, lo: i64, len: usize, maxdim: usize, rng: &mut R) -> Complex {
    if len == 0 {
        return Complex::zero(params);
    }
    let modules: Vec<Module> = (0..len).map(|_| random_module(params, maxdim, rng)).collect();
    let mut homs = Vec::with_capacity(len - 1);
    let mut prev_g: Option<Hom> = None;
    for k in 0..len - 1 {
        let mid = random_module(params, maxdim, rng);
        let f = match &prev_g {
            None => random_hom(&modules[k], &mid, rng),
            Some(g) => {
                let (c, proj) = cokernel(g);
                random_hom(&c, &mid, rng).compose(&proj)
            }
        };
        let g = random_hom(&mid, &modules[k + 1], rng);
        homs.push(g.compose(&f));
        prev_g = Some(g);
    }
    if homs.is_empty() {
        return Complex::single(modules[0].clone(), lo);
    }
    Complex::from_homs(lo, &homs).expect("random differentials square to zero")
}

/// A two-term exact complex `M --φ--> M'` with `φ` a random isomorphism.
pub fn random_two_term_exact<R: Rng + ?Sized>(params: CatParams, lo: i64, maxdim: usize, rng: &mut R) -> Complex {
    let m = random_module(params, maxdim, rng);
    let p = random_invertible(params, m.dim(), rng);
    let pinv = p.inverse().expect("invertible");
    let target = Module::new(params, p.mul(m.action()).mul(&pinv)).expect("conjugate action");
    let phi = Hom::new(m, target, p).expect("conjugation is linear");
    Complex::from_homs(lo, &[phi]).expect("one differential")
}
