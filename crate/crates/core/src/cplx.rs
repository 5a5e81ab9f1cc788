//! Bounded cochain complexes of modules, chain maps and homotopies.
//!
//! Every complex carries an explicit finite window `[lo, hi]`; entries
//! outside it are zero. Differentials raise degree: `d^n : X^n → X^(n+1)`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, rank, solve, Mat};
use crate::modcat::{biproduct, cokernel, image, kernel, CatParams, Hom, HomSpace, Module};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    params: CatParams,
    lo: i64,
    modules: Vec<Module>,
    diffs: Vec<Mat>,
    zero: Module,
}

impl Complex {
    /// Builds `X^lo → X^(lo+1) → ...` from its modules and the `len - 1`
    /// differentials between them, checking shapes, `R`-linearity and `d² = 0`.
    pub fn new(params: CatParams, lo: i64, modules: Vec<Module>, diffs: Vec<Mat>) -> Result<Self> {
        if diffs.len() + 1 != modules.len() && !(modules.is_empty() && diffs.is_empty()) {
            return Err(Error::InvalidComplex {
                degree: lo,
                reason: format!(
                    "{} modules need {} differentials, got {}",
                    modules.len(),
                    modules.len().saturating_sub(1),
                    diffs.len()
                ),
            });
        }
        for (k, m) in modules.iter().enumerate() {
            if m.params() != params {
                return Err(Error::InvalidComplex {
                    degree: lo + k as i64,
                    reason: "module over different parameters".into(),
                });
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            let n = lo + k as i64;
            let (src, dst) = (&modules[k], &modules[k + 1]);
            if d.shape() != (dst.dim(), src.dim()) {
                return Err(Error::InvalidComplex {
                    degree: n,
                    reason: format!(
                        "differential is {}x{}, expected {}x{}",
                        d.rows(),
                        d.cols(),
                        dst.dim(),
                        src.dim()
                    ),
                });
            }
            if d.mul(src.action()) != dst.action().mul(d) {
                return Err(Error::InvalidComplex {
                    degree: n,
                    reason: "differential is not R-linear".into(),
                });
            }
            if k > 0 && !d.mul(&diffs[k - 1]).is_zero() {
                return Err(Error::InvalidComplex {
                    degree: n - 1,
                    reason: format!("d^{} ∘ d^{} is nonzero", n, n - 1),
                });
            }
        }
        Ok(Self::new_unchecked(params, lo, modules, diffs))
    }

    pub(crate) fn new_unchecked(params: CatParams, lo: i64, modules: Vec<Module>, diffs: Vec<Mat>) -> Self {
        debug_assert!(diffs.len() + 1 == modules.len() || modules.is_empty());
        Self {
            params,
            lo,
            modules,
            diffs,
            zero: Module::zero(params),
        }
    }

    pub fn zero(params: CatParams) -> Self {
        Self::new_unchecked(params, 0, Vec::new(), Vec::new())
    }

    /// `M` concentrated in the given degree.
    pub fn single(m: Module, degree: i64) -> Self {
        let params = m.params();
        Self::new_unchecked(params, degree, vec![m], Vec::new())
    }

    /// A complex whose consecutive differentials are the given homs, the first
    /// leaving degree `lo`.
    pub fn from_homs(lo: i64, homs: &[Hom]) -> Result<Self> {
        let first = homs.first().ok_or_else(|| Error::InvalidComplex {
            degree: lo,
            reason: "no differentials given".into(),
        })?;
        let params = first.src().params();
        let mut modules = vec![first.src().clone()];
        for (k, h) in homs.iter().enumerate() {
            if h.src() != &modules[k] {
                return Err(Error::InvalidComplex {
                    degree: lo + k as i64,
                    reason: "differential source does not match previous target".into(),
                });
            }
            modules.push(h.dst().clone());
        }
        let diffs = homs.iter().map(|h| h.mat().clone()).collect();
        Self::new(params, lo, modules, diffs)
    }

    #[inline]
    pub fn params(&self) -> CatParams {
        self.params
    }

    #[inline]
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top of the window; `lo - 1` for an empty window.
    #[inline]
    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn degrees(&self) -> RangeInclusive<i64> {
        self.lo()..=self.hi()
    }

    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(Module::is_zero)
    }

    pub fn module(&self, n: i64) -> &Module {
        if n < self.lo || n > self.hi() {
            &self.zero
        } else {
            &self.modules[(n - self.lo) as usize]
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.module(n).dim()
    }

    /// Matrix of `d^n`, zero outside the window.
    pub fn diff_mat(&self, n: i64) -> Mat {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            Mat::zeros(self.params.field(), self.dim(n + 1), self.dim(n))
        }
    }

    pub fn diff(&self, n: i64) -> Hom {
        Hom::new_raw(self.module(n).clone(), self.module(n + 1).clone(), self.diff_mat(n))
    }

    /// Re-checks every invariant; `new` already enforces them, verifiers call
    /// this on data that may have been assembled by hand.
    pub fn validate(&self) -> Result<()> {
        Complex::new(self.params, self.lo, self.modules.clone(), self.diffs.clone()).map(|_| ())
    }

    /// Drops zero modules at both ends of the window.
    pub fn trimmed(&self) -> Complex {
        let first = self.modules.iter().position(|m| !m.is_zero());
        let Some(first) = first else {
            return Complex::zero(self.params);
        };
        let last = self.modules.iter().rposition(|m| !m.is_zero()).unwrap();
        Complex::new_unchecked(
            self.params,
            self.lo + first as i64,
            self.modules[first..=last].to_vec(),
            self.diffs[first..last].to_vec(),
        )
    }

    /// Same entries and differentials, ignoring zero padding of the window.
    pub fn same_as(&self, other: &Complex) -> bool {
        self.trimmed() == other.trimmed()
    }

    pub fn identity(&self) -> ChainMap {
        let comps = self
            .degrees()
            .map(|n| (n, Mat::identity(self.params.field(), self.dim(n))))
            .collect();
        ChainMap::new_unchecked(self.clone(), self.clone(), comps)
    }

    pub fn zero_map_to(&self, dst: &Complex) -> ChainMap {
        ChainMap::new_unchecked(self.clone(), dst.clone(), BTreeMap::new())
    }

    /// Builds a complex over an explicit window from per-degree data, where
    /// `entry(n)` gives the module and `diff(n)` the differential leaving it.
    pub(crate) fn from_fn(
        params: CatParams,
        lo: i64,
        hi: i64,
        mut entry: impl FnMut(i64) -> Module,
        mut diff: impl FnMut(i64) -> Mat,
    ) -> Complex {
        if hi < lo {
            return Complex::zero(params);
        }
        let modules: Vec<Module> = (lo..=hi).map(&mut entry).collect();
        let diffs: Vec<Mat> = (lo..hi).map(&mut diff).collect();
        Complex::new_unchecked(params, lo, modules, diffs)
    }
}

#[allow(clippy::reversed_empty_ranges)]
fn union_window(a: &Complex, b: &Complex) -> RangeInclusive<i64> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => 0..=-1,
        (true, false) => b.degrees(),
        (false, true) => a.degrees(),
        (false, false) => a.lo().min(b.lo())..=a.hi().max(b.hi()),
    }
}

/// A morphism of complexes; missing components are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    src: Complex,
    dst: Complex,
    comps: BTreeMap<i64, Mat>,
}

impl ChainMap {
    pub fn new(src: Complex, dst: Complex, comps: BTreeMap<i64, Mat>) -> Result<Self> {
        let map = Self::new_unchecked(src, dst, comps);
        map.check()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(src: Complex, dst: Complex, comps: BTreeMap<i64, Mat>) -> Self {
        let comps = comps
            .into_iter()
            .filter(|(n, m)| src.dim(*n) > 0 && dst.dim(*n) > 0 && m.shape() == (dst.dim(*n), src.dim(*n)))
            .collect();
        Self { src, dst, comps }
    }

    /// Shapes, `R`-linearity and commutation with the differentials.
    pub fn check(&self) -> Result<()> {
        let f = self.src.params().field();
        for n in union_window(&self.src, &self.dst) {
            let c = self.comp(n);
            if c.shape() != (self.dst.dim(n), self.src.dim(n)) {
                return Err(Error::InvalidChainMap {
                    degree: n,
                    reason: "component has the wrong shape".into(),
                });
            }
            if c.mul(self.src.module(n).action()) != self.dst.module(n).action().mul(&c) {
                return Err(Error::InvalidChainMap {
                    degree: n,
                    reason: "component is not R-linear".into(),
                });
            }
            let lhs = self.dst.diff_mat(n).mul(&c);
            let rhs = self.comp(n + 1).mul(&self.src.diff_mat(n));
            if lhs != rhs {
                return Err(Error::InvalidChainMap {
                    degree: n,
                    reason: "does not commute with the differentials".into(),
                });
            }
            let _ = f;
        }
        Ok(())
    }

    pub fn src(&self) -> &Complex {
        &self.src
    }

    pub fn dst(&self) -> &Complex {
        &self.dst
    }

    pub fn comp(&self, n: i64) -> Mat {
        self.comps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.src.params().field(), self.dst.dim(n), self.src.dim(n)))
    }

    pub fn comp_hom(&self, n: i64) -> Hom {
        Hom::new_raw(self.src.module(n).clone(), self.dst.module(n).clone(), self.comp(n))
    }

    pub fn window(&self) -> RangeInclusive<i64> {
        union_window(&self.src, &self.dst)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        let comps = other.window().map(|n| (n, self.comp(n).mul(&other.comp(n)))).collect();
        ChainMap::new_unchecked(other.src.clone(), self.dst.clone(), comps)
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        let comps = self.window().map(|n| (n, self.comp(n).sub(&other.comp(n)))).collect();
        ChainMap::new_unchecked(self.src.clone(), self.dst.clone(), comps)
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let comps = self.window().map(|n| (n, self.comp(n).add(&other.comp(n)))).collect();
        ChainMap::new_unchecked(self.src.clone(), self.dst.clone(), comps)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(Mat::is_zero)
    }

    /// Degreewise isomorphism.
    pub fn is_iso(&self) -> bool {
        self.window().all(|n| {
            let c = self.comp(n);
            c.rows() == c.cols() && rank(&c) == c.rows()
        })
    }
}

/// A witness `f - g = d s + s d`, with `s^n : X^n → Y^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub f: ChainMap,
    pub g: ChainMap,
    pub s: BTreeMap<i64, Mat>,
}

impl Homotopy {
    pub fn component(&self, n: i64) -> Mat {
        let (x, y) = (self.f.src(), self.f.dst());
        self.s
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(x.params().field(), y.dim(n - 1), x.dim(n)))
    }

    /// Checks the homotopy identity and `R`-linearity of every component.
    pub fn verify(&self) -> bool {
        let (x, y) = (self.f.src(), self.f.dst());
        for (n, s) in &self.s {
            if s.shape() != (y.dim(n - 1), x.dim(*n)) {
                return false;
            }
            if s.mul(x.module(*n).action()) != y.module(n - 1).action().mul(s) {
                return false;
            }
        }
        self.f.window().chain(self.g.window()).all(|n| {
            let lhs = self.f.comp(n).sub(&self.g.comp(n));
            let rhs = y
                .diff_mat(n - 1)
                .mul(&self.component(n))
                .add(&self.component(n + 1).mul(&x.diff_mat(n)));
            lhs == rhs
        })
    }
}

/// Cocycles, boundaries and cohomology in one degree.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i64,
    pub z: Module,
    pub z_incl: Hom,
    pub b: Module,
    pub b_incl: Hom,
    /// Corestriction of `d^(n-1)` onto `B^n`.
    pub b_proj: Hom,
    pub b_to_z: Hom,
    pub h: Module,
    pub h_proj: Hom,
}

impl Cohomology {
    /// A linear (not necessarily `R`-linear) section of `Z → H`, on the
    /// complement basis used to realise `H`.
    pub fn h_section(&self) -> Mat {
        crate::exactla::split_epi_section(self.h_proj.mat()).expect("projection is onto")
    }
}

pub fn cohomology(x: &Complex, n: i64) -> Cohomology {
    let (z, z_incl) = kernel(&x.diff(n));
    let (b, b_incl, b_proj) = image(&x.diff(n - 1));
    let to_z = solve(z_incl.mat(), b_incl.mat())
        .expect("shapes agree")
        .expect("boundaries are cocycles");
    let b_to_z = Hom::new_raw(b.clone(), z.clone(), to_z);
    let (h, h_proj) = cokernel(&b_to_z);
    Cohomology {
        degree: n,
        z,
        z_incl,
        b,
        b_incl,
        b_proj,
        b_to_z,
        h,
        h_proj,
    }
}

/// `dim H^n = dim X^n - rank d^n - rank d^(n-1)`, for every degree of the window.
pub fn cohomology_dims(x: &Complex) -> BTreeMap<i64, usize> {
    let ranks: BTreeMap<i64, usize> = (x.lo() - 1..=x.hi()).map(|n| (n, rank(&x.diff_mat(n)))).collect();
    x.degrees()
        .map(|n| (n, x.dim(n) - ranks[&n] - ranks[&(n - 1)]))
        .collect()
}

pub fn cohomology_dim(x: &Complex, n: i64) -> usize {
    x.dim(n) - rank(&x.diff_mat(n)) - rank(&x.diff_mat(n - 1))
}

pub fn is_acyclic(x: &Complex) -> bool {
    cohomology_dims(x).values().all(|&d| d == 0)
}

/// `X[k]`: entries `X^(n+k)` and differential `(-1)^k d^(n+k)`.
pub fn shift(x: &Complex, k: i64) -> Complex {
    let sign = x.params().field().sign(k);
    Complex::new_unchecked(
        x.params(),
        x.lo() - k,
        x.modules.clone(),
        x.diffs.iter().map(|d| d.scale(sign)).collect(),
    )
}

/// The truncation `0 → B^t(X) → X^t → X^(t+1) → ...`, with `B^t` placed in
/// degree `t - 1`, together with the comparison map `X → X^{≥t}`.
///
/// The comparison is the identity in degrees `≥ t` and the corestriction of
/// `d^(t-1)` in degree `t - 1`; it induces isomorphisms on `H^j` for `j ≥ t`.
pub fn truncate_geq(x: &Complex, t: i64) -> (Complex, ChainMap) {
    let params = x.params();
    let f = params.field();
    if x.is_zero() || t <= x.lo() {
        return (x.clone(), x.identity());
    }
    if t > x.hi() {
        let z = Complex::zero(params);
        return (z.clone(), x.zero_map_to(&z));
    }
    let (b, b_incl, b_proj) = image(&x.diff(t - 1));
    let lo = t - 1;
    let trunc = Complex::from_fn(
        params,
        lo,
        x.hi(),
        |n| if n == lo { b.clone() } else { x.module(n).clone() },
        |n| if n == lo { b_incl.mat().clone() } else { x.diff_mat(n) },
    );
    let mut comps = BTreeMap::new();
    comps.insert(lo, b_proj.mat().clone());
    for n in t..=x.hi() {
        comps.insert(n, Mat::identity(f, x.dim(n)));
    }
    let cmp = ChainMap::new_unchecked(x.clone(), trunc.clone(), comps);
    (trunc, cmp)
}

/// The cone of `f: X → Y` with its triangle maps `Y → C(f) → X[1]`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Complex,
    pub incl: ChainMap,
    pub proj: ChainMap,
}

/// `C(f)^n = X^(n+1) ⊕ Y^n` with differential `[[-d_X, 0], [f, d_Y]]`.
pub fn mapping_cone(f: &ChainMap) -> Cone {
    let (x, y) = (f.src(), f.dst());
    let params = x.params();
    let fld = params.field();
    let (lo, hi) = match (x.is_zero(), y.is_zero()) {
        (true, true) => (0, -1),
        (true, false) => (y.lo(), y.hi()),
        (false, true) => (x.lo() - 1, x.hi() - 1),
        (false, false) => ((x.lo() - 1).min(y.lo()), (x.hi() - 1).max(y.hi())),
    };
    let entry = |n: i64| biproduct(params, &[x.module(n + 1).clone(), y.module(n).clone()]).sum;
    let diff = |n: i64| {
        let (a0, b0) = (x.dim(n + 1), y.dim(n));
        let (a1, b1) = (x.dim(n + 2), y.dim(n + 1));
        let mut d = Mat::zeros(fld, a1 + b1, a0 + b0);
        d.set_block(0, 0, &x.diff_mat(n + 1).neg());
        d.set_block(a1, 0, &f.comp(n + 1));
        d.set_block(a1, a0, &y.diff_mat(n));
        d
    };
    let complex = Complex::from_fn(params, lo, hi, entry, diff);
    let x1 = shift(x, 1);
    let mut inc = BTreeMap::new();
    let mut pr = BTreeMap::new();
    for n in lo..=hi {
        let (a, b) = (x.dim(n + 1), y.dim(n));
        let mut i = Mat::zeros(fld, a + b, b);
        i.set_block(a, 0, &Mat::identity(fld, b));
        inc.insert(n, i);
        let mut p = Mat::zeros(fld, a, a + b);
        p.set_block(0, 0, &Mat::identity(fld, a));
        pr.insert(n, p);
    }
    Cone {
        incl: ChainMap::new_unchecked(y.clone(), complex.clone(), inc),
        proj: ChainMap::new_unchecked(complex.clone(), x1, pr),
        complex,
    }
}

/// Searches for a homotopy `f ≃ g` by solving the global linear system over
/// all degrees, with each `s^n` parametrised by a basis of
/// `Hom_R(X^n, Y^(n-1))`. The canonical solution is returned.
pub fn find_homotopy(f: &ChainMap, g: &ChainMap) -> Option<Homotopy> {
    let diff = f.sub(g);
    let s = solve_null_homotopies(std::slice::from_ref(&diff)).pop().flatten()?;
    Some(Homotopy {
        f: f.clone(),
        g: g.clone(),
        s,
    })
}

/// Null-homotopies for several maps with the same source and target, sharing
/// one elimination. Each entry is `None` when that map is not null-homotopic.
pub fn find_null_homotopies(maps: &[ChainMap]) -> Vec<Option<Homotopy>> {
    let sols = solve_null_homotopies(maps);
    maps.iter()
        .zip(sols)
        .map(|(f, s)| {
            s.map(|s| Homotopy {
                f: f.clone(),
                g: f.src().zero_map_to(f.dst()),
                s,
            })
        })
        .collect()
}

fn solve_null_homotopies(maps: &[ChainMap]) -> Vec<Option<BTreeMap<i64, Mat>>> {
    let Some(first) = maps.first() else {
        return Vec::new();
    };
    let (x, y) = (first.src(), first.dst());
    let fld = x.params().field();
    let window: Vec<i64> = first.window().collect();

    // unknown blocks: s^n for n with X^n and Y^(n-1) nonzero
    let mut blocks: Vec<(i64, HomSpace, usize)> = Vec::new();
    let mut ncols = 0;
    for &n in &window {
        if x.dim(n) > 0 && y.dim(n - 1) > 0 {
            let hs = HomSpace::new(x.module(n), y.module(n - 1));
            let d = hs.dim();
            blocks.push((n, hs, ncols));
            ncols += d;
        }
    }
    // equation blocks: degree n, size dim Y^n * dim X^n
    let mut row_off = BTreeMap::new();
    let mut nrows = 0;
    for &n in &window {
        row_off.insert(n, nrows);
        nrows += y.dim(n) * x.dim(n);
    }
    let mut sys = Mat::zeros(fld, nrows, ncols);
    for (n, hs, off) in &blocks {
        for (k, phi) in hs.basis().iter().enumerate() {
            // contributes d_Y^(n-1) φ to equation n and φ d_X^(n-1) to equation n-1
            let a = y.diff_mat(n - 1).mul(phi);
            if let Some(&r0) = row_off.get(n) {
                for (i, v) in a.vec().into_iter().enumerate() {
                    sys[(r0 + i, off + k)] = v;
                }
            }
            let b = phi.mul(&x.diff_mat(n - 1));
            if let Some(&r0) = row_off.get(&(n - 1)) {
                for (i, v) in b.vec().into_iter().enumerate() {
                    sys[(r0 + i, off + k)] = fld.add(sys[(r0 + i, off + k)], v);
                }
            }
        }
    }
    let mut rhs = Mat::zeros(fld, nrows, maps.len());
    for (c, map) in maps.iter().enumerate() {
        for &n in &window {
            let r0 = row_off[&n];
            for (i, v) in map.comp(n).vec().into_iter().enumerate() {
                rhs[(r0 + i, c)] = v;
            }
        }
    }
    // Solve column by column so that an unsolvable map does not poison the rest.
    let mut out = Vec::with_capacity(maps.len());
    let (reduced, pivots) = Mat::hstack(fld, nrows, &[&sys, &rhs]).rref();
    for c in 0..maps.len() {
        let rk = pivots.iter().filter(|&&p| p < ncols).count();
        let col = ncols + c;
        let consistent = (rk..nrows).all(|r| reduced[(r, col)] == 0);
        if !consistent {
            out.push(None);
            continue;
        }
        let mut coeffs = vec![0u64; ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            if pc < ncols {
                coeffs[pc] = reduced[(r, col)];
            }
        }
        let mut s = BTreeMap::new();
        for (n, hs, off) in &blocks {
            let h = hs.combine(&coeffs[*off..off + hs.dim()]);
            s.insert(*n, h.into_mat());
        }
        out.push(Some(s));
    }
    out
}

/// A contraction of `X`, i.e. a homotopy `id ≃ 0`, if one exists.
pub fn contraction(x: &Complex) -> Option<Homotopy> {
    find_homotopy(&x.identity(), &x.zero_map_to(x))
}

pub fn is_contractible(x: &Complex) -> bool {
    contraction(x).is_some()
}

/// Matrix of `H^n(f)` with respect to the complement bases of both cohomologies.
pub fn induced_on_cohomology(f: &ChainMap, n: i64) -> Mat {
    let hx = cohomology(f.src(), n);
    let hy = cohomology(f.dst(), n);
    let lifted = f.comp(n).mul(hx.z_incl.mat()).mul(&hx.h_section());
    let in_zy = solve(hy.z_incl.mat(), &lifted)
        .expect("shapes agree")
        .expect("chain maps send cocycles to cocycles");
    hy.h_proj.mat().mul(&in_zy)
}

pub fn is_quasi_iso_at(f: &ChainMap, n: i64) -> bool {
    let h = induced_on_cohomology(f, n);
    h.rows() == h.cols() && rank(&h) == h.rows()
}

pub fn is_quasi_iso(f: &ChainMap) -> bool {
    f.window().all(|n| is_quasi_iso_at(f, n))
}

/// Quasi-isomorphism restricted to the given degrees.
pub fn is_quasi_iso_in(f: &ChainMap, degrees: RangeInclusive<i64>) -> bool {
    degrees.into_iter().all(|n| is_quasi_iso_at(f, n))
}

/// Degreewise kernel of a chain map, with its inclusion.
pub fn kernel_complex(f: &ChainMap) -> (Complex, ChainMap) {
    let x = f.src();
    let params = x.params();
    if x.is_zero() {
        let z = Complex::zero(params);
        return (z.clone(), z.zero_map_to(x));
    }
    let parts: Vec<(Module, Hom)> = x.degrees().map(|n| kernel(&f.comp_hom(n))).collect();
    let at = |n: i64| &parts[(n - x.lo()) as usize];
    let k = Complex::from_fn(
        params,
        x.lo(),
        x.hi(),
        |n| at(n).0.clone(),
        |n| {
            let image = x.diff_mat(n).mul(at(n).1.mat());
            solve(at(n + 1).1.mat(), &image)
                .expect("shapes agree")
                .expect("kernels form a subcomplex")
        },
    );
    let comps = x.degrees().map(|n| (n, at(n).1.mat().clone())).collect();
    let incl = ChainMap::new_unchecked(k.clone(), x.clone(), comps);
    (k, incl)
}

/// A finite product of complexes with its projections and injections.
#[derive(Clone, Debug)]
pub struct Product {
    pub complex: Complex,
    pub injections: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
}

pub fn product_of_complexes(params: CatParams, xs: &[Complex]) -> Product {
    let nonzero: Vec<&Complex> = xs.iter().filter(|x| !x.is_zero()).collect();
    if nonzero.is_empty() {
        let z = Complex::zero(params);
        return Product {
            complex: z.clone(),
            injections: xs.iter().map(|x| x.zero_map_to(&z)).collect(),
            projections: xs.iter().map(|x| z.zero_map_to(x)).collect(),
        };
    }
    let lo = nonzero.iter().map(|x| x.lo()).min().unwrap();
    let hi = nonzero.iter().map(|x| x.hi()).max().unwrap();
    let fld = params.field();
    let complex = Complex::from_fn(
        params,
        lo,
        hi,
        |n| biproduct(params, &xs.iter().map(|x| x.module(n).clone()).collect::<Vec<_>>()).sum,
        |n| {
            let ds: Vec<Mat> = xs.iter().map(|x| x.diff_mat(n)).collect();
            let refs: Vec<&Mat> = ds.iter().collect();
            Mat::block_diag(fld, &refs)
        },
    );
    let mut injections = Vec::with_capacity(xs.len());
    let mut projections = Vec::with_capacity(xs.len());
    let mut offsets: BTreeMap<i64, usize> = (lo..=hi).map(|n| (n, 0)).collect();
    for x in xs {
        let mut inc = BTreeMap::new();
        let mut pr = BTreeMap::new();
        for n in lo..=hi {
            let off = offsets[&n];
            let mut i = Mat::zeros(fld, complex.dim(n), x.dim(n));
            i.set_block(off, 0, &Mat::identity(fld, x.dim(n)));
            pr.insert(n, i.transpose());
            inc.insert(n, i);
            *offsets.get_mut(&n).unwrap() += x.dim(n);
        }
        injections.push(ChainMap::new_unchecked(x.clone(), complex.clone(), inc));
        projections.push(ChainMap::new_unchecked(complex.clone(), x.clone(), pr));
    }
    Product {
        complex,
        injections,
        projections,
    }
}

/// A basis of the space of chain maps `X → Y`.
pub fn chain_map_basis(x: &Complex, y: &Complex) -> Vec<ChainMap> {
    let fld = x.params().field();
    let window: Vec<i64> = union_window(x, y).collect();
    let mut blocks: Vec<(i64, HomSpace, usize)> = Vec::new();
    let mut ncols = 0;
    for &n in &window {
        if x.dim(n) > 0 && y.dim(n) > 0 {
            let hs = HomSpace::new(x.module(n), y.module(n));
            let d = hs.dim();
            blocks.push((n, hs, ncols));
            ncols += d;
        }
    }
    // d_Y^n f^n - f^(n+1) d_X^n = 0, one block per n
    let mut row_off = BTreeMap::new();
    let mut nrows = 0;
    for &n in &window {
        row_off.insert(n, nrows);
        nrows += y.dim(n + 1) * x.dim(n);
    }
    let mut sys = Mat::zeros(fld, nrows, ncols);
    for (n, hs, off) in &blocks {
        for (k, phi) in hs.basis().iter().enumerate() {
            let a = y.diff_mat(*n).mul(phi);
            if let Some(&r0) = row_off.get(n) {
                for (i, v) in a.vec().into_iter().enumerate() {
                    sys[(r0 + i, off + k)] = v;
                }
            }
            let b = phi.mul(&x.diff_mat(n - 1));
            if let Some(&r0) = row_off.get(&(n - 1)) {
                for (i, v) in b.vec().into_iter().enumerate() {
                    sys[(r0 + i, off + k)] = fld.sub(sys[(r0 + i, off + k)], v);
                }
            }
        }
    }
    let ker = kernel_basis(&sys);
    (0..ker.cols())
        .map(|c| {
            let coeffs = ker.col(c);
            let comps = blocks
                .iter()
                .map(|(n, hs, off)| (*n, hs.combine(&coeffs[*off..off + hs.dim()]).into_mat()))
                .collect();
            ChainMap::new_unchecked(x.clone(), y.clone(), comps)
        })
        .collect()
}

/// A uniformly random element of the span of `basis`.
pub fn random_combination<R: Rng + ?Sized>(x: &Complex, y: &Complex, basis: &[ChainMap], rng: &mut R) -> ChainMap {
    let fld = x.params().field();
    let mut acc = x.zero_map_to(y);
    for b in basis {
        let c = rng.gen_range(0..fld.p());
        if c != 0 {
            let comps = b.window().map(|n| (n, b.comp(n).scale(c))).collect();
            acc = acc.add(&ChainMap::new_unchecked(x.clone(), y.clone(), comps));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::Module;

    fn params(p: u64, m: usize) -> CatParams {
        CatParams::from_ints(p, m).unwrap()
    }

    /// `R --x--> R` starting in degree `lo`.
    fn r_x_r(p: CatParams, lo: i64) -> Complex {
        let r = Module::regular(p);
        let x = Hom::new(r.clone(), r.clone(), r.action().clone()).unwrap();
        Complex::from_homs(lo, &[x]).unwrap()
    }

    #[test]
    fn construction_rejects_nonzero_square() {
        let p = params(3, 2);
        let r = Module::regular(p);
        let id = Mat::identity(p.field(), 2);
        let err = Complex::new(p, 4, vec![r.clone(), r.clone(), r.clone()], vec![id.clone(), id]).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidComplex {
                degree: 4,
                reason: "d^5 ∘ d^4 is nonzero".into()
            }
        );
    }

    #[test]
    fn cohomology_examples() {
        let p = params(3, 2);
        let z = Complex::zero(p);
        let c = cohomology(&z, 0);
        assert!(c.z.is_zero() && c.b.is_zero() && c.h.is_zero());
        let m = Module::from_jordan(p, &[2, 1]);
        let single = Complex::single(m.clone(), 0);
        assert_eq!(cohomology(&single, 0).h.dim(), 3);
        assert_eq!(cohomology(&single, 1).h.dim(), 0);
        let x = r_x_r(p, 0);
        assert_eq!(cohomology(&x, 0).h.dim(), 1);
        assert_eq!(cohomology(&x, 1).h.dim(), 1);
        assert_eq!(cohomology_dims(&x).values().copied().collect::<Vec<_>>(), vec![1, 1]);
        let c1 = cohomology(&x, 1);
        assert!(c1.h.action().is_zero());
        assert_eq!(c1.b_incl.mat(), &Mat::column(p.field(), &[0, 1]));
    }

    #[test]
    fn shift_examples() {
        let p = params(5, 2);
        let x = r_x_r(p, 0);
        assert_eq!(shift(&x, 0), x);
        assert_eq!(shift(&shift(&x, 1), 1), shift(&x, 2));
        let s2 = shift(&x, 2);
        assert_eq!(s2.lo(), -2);
        assert_eq!(s2.diff_mat(-2), x.diff_mat(0));
        let s1 = shift(&x, 1);
        assert_eq!(s1.lo(), -1);
        assert_eq!(s1.diff_mat(-1), x.diff_mat(0).neg());
    }

    #[test]
    fn truncation_examples() {
        let p = params(3, 2);
        let x = r_x_r(p, -1);
        let (t, cmp) = truncate_geq(&x, -1);
        assert_eq!(t, x);
        assert!(cmp.check().is_ok());
        assert!(truncate_geq(&Complex::zero(p), 3).0.is_zero());
        let (t, cmp) = truncate_geq(&x, 0);
        assert_eq!(t.lo(), -1);
        assert_eq!(t.dim(-1), 1);
        assert_eq!(t.dim(0), 2);
        assert_eq!(cohomology_dim(&t, 0), 1);
        assert_eq!(cohomology_dim(&t, -1), 0);
        assert!(cmp.check().is_ok());
        assert!(is_quasi_iso_at(&cmp, 0));
        assert!(truncate_geq(&x, 1).0.is_zero());
    }

    #[test]
    fn cone_examples() {
        let p = params(3, 2);
        let x = r_x_r(p, 0);
        let cone = mapping_cone(&x.identity());
        cone.complex.validate().unwrap();
        assert!(is_contractible(&cone.complex));
        let z = Complex::zero(p);
        let c0 = mapping_cone(&x.zero_map_to(&z));
        assert!(c0.complex.same_as(&shift(&x, 1)));
        // truncation comparison of a complex whose low degree is acyclic
        let r = Module::regular(p);
        let k = Module::simple(p);
        let socle = Hom::new(k.clone(), r.clone(), Mat::column(p.field(), &[0, 1])).unwrap();
        let xr = Hom::new(r.clone(), r.clone(), r.action().clone()).unwrap();
        let res = Complex::from_homs(0, &[socle.clone(), xr.clone()]).unwrap();
        let (_, cmp) = truncate_geq(&res, 1);
        assert!(is_quasi_iso(&cmp));
        let cone = mapping_cone(&cmp);
        assert!(cone.incl.check().is_ok() && cone.proj.check().is_ok());
        assert!(is_acyclic(&cone.complex));
    }

    #[test]
    fn homotopy_examples() {
        let p = params(3, 2);
        let x = r_x_r(p, 0);
        let h = find_homotopy(&x.identity(), &x.identity()).unwrap();
        assert!(h.s.values().all(Mat::is_zero));
        assert!(h.verify());
        assert!(find_homotopy(&x.identity(), &x.zero_map_to(&x)).is_none());
    }

    #[test]
    fn homotopy_found_for_ds_plus_sd() {
        let p = params(5, 2);
        let r = Module::regular(p);
        let id = r.identity();
        // R --1--> R, contractible
        let x = Complex::from_homs(0, &[id]).unwrap();
        let s1 = Mat::from_rows(p.field(), &[[2, 0], [3, 2]]);
        let mut s = BTreeMap::new();
        s.insert(1, s1);
        let g = x.identity();
        let comps = (0..=1)
            .map(|n| {
                let ds = x.diff_mat(n - 1).mul(&s.get(&n).cloned().unwrap_or(Mat::zeros(
                    p.field(),
                    x.dim(n - 1),
                    x.dim(n),
                )));
                let sd = s
                    .get(&(n + 1))
                    .cloned()
                    .unwrap_or(Mat::zeros(p.field(), x.dim(n), x.dim(n + 1)))
                    .mul(&x.diff_mat(n));
                (n, g.comp(n).add(&ds).add(&sd))
            })
            .collect();
        let f = ChainMap::new(x.clone(), x.clone(), comps).unwrap();
        let h = find_homotopy(&f, &g).unwrap();
        assert!(h.verify());
    }

    #[test]
    fn quasi_iso_examples() {
        let p = params(3, 2);
        let x = r_x_r(p, 0);
        assert!(is_quasi_iso(&x.identity()));
        assert!(!is_quasi_iso(&x.zero_map_to(&x)));
        // k in degree 0 → (R → R → R), the resolution truncated at depth 2,
        // is a quasi-isomorphism in degrees 0 and 1.
        let k = Module::simple(p);
        let res = crate::modcat::min_injective_resolution(&k, 2);
        let target = Complex::from_homs(0, &res.diffs).unwrap();
        let src = Complex::single(k, 0);
        let mut comps = BTreeMap::new();
        comps.insert(0, res.augmentation.mat().clone());
        let aug = ChainMap::new(src, target, comps).unwrap();
        assert!(is_quasi_iso_in(&aug, 0..=1));
        assert!(!is_quasi_iso_at(&aug, 2));
    }

    #[test]
    fn product_examples() {
        let p = params(3, 2);
        assert!(product_of_complexes(p, &[]).complex.is_zero());
        let x = r_x_r(p, 0);
        assert_eq!(product_of_complexes(p, std::slice::from_ref(&x)).complex, x);
        let pr = product_of_complexes(p, &[x.clone(), x.clone()]);
        for n in x.degrees() {
            assert_eq!(pr.complex.dim(n), 2 * x.dim(n));
        }
        for m in pr.injections.iter().chain(&pr.projections) {
            m.check().unwrap();
        }
    }

    #[test]
    fn chain_maps_of_r_x_r() {
        let p = params(3, 2);
        let x = r_x_r(p, 0);
        let basis = chain_map_basis(&x, &x);
        for b in &basis {
            b.check().unwrap();
        }
        // f^0 = a + b x, f^1 must equal f^0 on the image of x: dims 2 + 2 - 1
        assert_eq!(basis.len(), 3);
    }
}
