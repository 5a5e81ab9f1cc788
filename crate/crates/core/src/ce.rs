//! Cartan–Eilenberg injective resolutions, double complexes and
//! cototalization.
//!
//! A resolution of `X` is built column by column. For each degree `i` the
//! minimal resolutions of `B^i` and `H^i` are glued by the horseshoe
//! construction into one of `Z^i`, and that one together with the resolution
//! of `B^(i+1)` into one of `X^i`. The horizontal differential is the composite
//! `E^(i,j) ↠ B^(i+1,j) ↪ Z^(i+1,j) ↪ E^(i+1,j)`.

use std::collections::BTreeMap;

use crate::cplx::{cohomology, is_quasi_iso_in, ChainMap, Cohomology, Complex};
use crate::error::{Error, Result};
use crate::exactla::{column_space, kernel_basis, rank, split_epi_section, Mat};
use crate::modcat::{
    biproduct, cokernel, extend_along_mono, is_injective, min_injective_resolution, CatParams, Hom, InjResolution,
    Module,
};
use crate::report::Report;

/// A first-quadrant style grid with columns `col_lo..col_lo+cols` and rows
/// `0..rows`, with commuting squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleComplex {
    params: CatParams,
    col_lo: i64,
    rows: usize,
    entries: Vec<Vec<Module>>,
    dh: Vec<Vec<Mat>>,
    dv: Vec<Vec<Mat>>,
    zero: Module,
}

impl DoubleComplex {
    /// `entries[c][j]` sits at `(col_lo + c, j)`; `dh[c][j]` leaves it to the
    /// right (absent for the last column) and `dv[c][j]` upwards (absent for
    /// the last row).
    pub fn new(
        params: CatParams,
        col_lo: i64,
        rows: usize,
        entries: Vec<Vec<Module>>,
        dh: Vec<Vec<Mat>>,
        dv: Vec<Vec<Mat>>,
    ) -> Result<Self> {
        let d = Self::new_unchecked(params, col_lo, rows, entries, dh, dv);
        d.check()?;
        Ok(d)
    }

    pub(crate) fn new_unchecked(
        params: CatParams,
        col_lo: i64,
        rows: usize,
        entries: Vec<Vec<Module>>,
        dh: Vec<Vec<Mat>>,
        dv: Vec<Vec<Mat>>,
    ) -> Self {
        Self {
            params,
            col_lo,
            rows,
            entries,
            dh,
            dv,
            zero: Module::zero(params),
        }
    }

    pub fn zero(params: CatParams) -> Self {
        Self::new_unchecked(params, 0, 0, Vec::new(), Vec::new(), Vec::new())
    }

    pub fn params(&self) -> CatParams {
        self.params
    }

    pub fn col_lo(&self) -> i64 {
        self.col_lo
    }

    pub fn col_hi(&self) -> i64 {
        self.col_lo + self.entries.len() as i64 - 1
    }

    pub fn num_cols(&self) -> usize {
        self.entries.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    fn col_index(&self, i: i64) -> Option<usize> {
        (i >= self.col_lo && i <= self.col_hi()).then(|| (i - self.col_lo) as usize)
    }

    pub fn entry(&self, i: i64, j: usize) -> &Module {
        match self.col_index(i) {
            Some(c) if j < self.rows => &self.entries[c][j],
            _ => &self.zero,
        }
    }

    pub fn dh(&self, i: i64, j: usize) -> Mat {
        match self.col_index(i) {
            Some(c) if j < self.rows && i < self.col_hi() => self.dh[c][j].clone(),
            _ => Mat::zeros(self.params.field(), self.entry(i + 1, j).dim(), self.entry(i, j).dim()),
        }
    }

    pub fn dv(&self, i: i64, j: usize) -> Mat {
        match self.col_index(i) {
            Some(c) if j + 1 < self.rows => self.dv[c][j].clone(),
            _ => Mat::zeros(self.params.field(), self.entry(i, j + 1).dim(), self.entry(i, j).dim()),
        }
    }

    /// Overwrites one horizontal differential without any validation.
    pub fn set_dh(&mut self, i: i64, j: usize, m: Mat) {
        let c = self.col_index(i).expect("column in window");
        self.dh[c][j] = m;
    }

    /// Overwrites one vertical differential without any validation.
    pub fn set_dv(&mut self, i: i64, j: usize, m: Mat) {
        let c = self.col_index(i).expect("column in window");
        self.dv[c][j] = m;
    }

    /// Shapes, linearity, `d_h² = 0`, `d_v² = 0` and `d_v d_h = d_h d_v`.
    pub fn check(&self) -> Result<()> {
        let err = |i: i64, j: usize, reason: String| Error::InvalidDoubleComplex { i, j, reason };
        if self.entries.iter().any(|c| c.len() != self.rows) {
            return Err(err(self.col_lo, 0, "ragged columns".into()));
        }
        if self.dh.len() + 1 != self.entries.len().max(1) || self.dv.len() != self.entries.len() {
            return Err(err(self.col_lo, 0, "wrong number of differential columns".into()));
        }
        for i in self.col_lo..=self.col_hi() {
            for j in 0..self.rows {
                let e = self.entry(i, j);
                if e.params() != self.params {
                    return Err(err(i, j, "entry over different parameters".into()));
                }
                let (h, v) = (self.dh(i, j), self.dv(i, j));
                let (right, up) = (self.entry(i + 1, j), self.entry(i, j + 1));
                if h.shape() != (right.dim(), e.dim()) || v.shape() != (up.dim(), e.dim()) {
                    return Err(err(i, j, "differential has the wrong shape".into()));
                }
                if h.mul(e.action()) != right.action().mul(&h) || v.mul(e.action()) != up.action().mul(&v) {
                    return Err(err(i, j, "differential is not R-linear".into()));
                }
                if !self.dh(i + 1, j).mul(&h).is_zero() {
                    return Err(err(i, j, "d_h ∘ d_h is nonzero".into()));
                }
                if !self.dv(i, j + 1).mul(&v).is_zero() {
                    return Err(err(i, j, "d_v ∘ d_v is nonzero".into()));
                }
                if self.dv(i + 1, j).mul(&h) != self.dh(i, j + 1).mul(&v) {
                    return Err(err(i, j, "square does not commute".into()));
                }
            }
        }
        Ok(())
    }

    /// Column `i` as a complex starting in degree 0.
    pub fn column(&self, i: i64) -> Complex {
        if self.col_index(i).is_none() || self.rows == 0 {
            return Complex::zero(self.params);
        }
        Complex::from_fn(
            self.params,
            0,
            self.rows as i64 - 1,
            |j| self.entry(i, j as usize).clone(),
            |j| self.dv(i, j as usize),
        )
    }

    /// Row `j` as a complex starting in degree `col_lo`.
    pub fn row(&self, j: usize) -> Complex {
        if self.entries.is_empty() || j >= self.rows {
            return Complex::zero(self.params);
        }
        Complex::from_fn(
            self.params,
            self.col_lo,
            self.col_hi(),
            |i| self.entry(i, j).clone(),
            |i| self.dh(i, j),
        )
    }

    /// `(i, j, offset)` of the summands of `Cot^n`, in increasing `i`.
    pub fn cot_layout(&self, n: i64) -> Vec<(i64, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for i in self.col_lo..=self.col_hi() {
            let j = n - i;
            if j >= 0 && (j as usize) < self.rows {
                out.push((i, j as usize, off));
                off += self.entry(i, j as usize).dim();
            }
        }
        out
    }

    /// Window of total degrees `[col_lo, col_hi + rows - 1]`, empty if the
    /// grid is.
    pub fn total_degrees(&self) -> (i64, i64) {
        if self.entries.is_empty() || self.rows == 0 {
            (0, -1)
        } else {
            (self.col_lo, self.col_hi() + self.rows as i64 - 1)
        }
    }
}

/// `Cot(D)^n = ⊕_{i+j=n} D^(i,j)`, with components `d_h` into `(i+1, j)`
/// and `(-1)^i d_v` into `(i, j+1)`.
pub fn cototalize(d: &DoubleComplex) -> Result<Complex> {
    let params = d.params();
    let fld = params.field();
    let (lo, hi) = d.total_degrees();
    if hi < lo {
        return Ok(Complex::zero(params));
    }
    let modules: Vec<Module> = (lo..=hi)
        .map(|n| {
            let parts: Vec<Module> = d.cot_layout(n).iter().map(|&(i, j, _)| d.entry(i, j).clone()).collect();
            biproduct(params, &parts).sum
        })
        .collect();
    let mut diffs = Vec::new();
    for n in lo..hi {
        let src = d.cot_layout(n);
        let dst = d.cot_layout(n + 1);
        let rows = modules[(n + 1 - lo) as usize].dim();
        let cols = modules[(n - lo) as usize].dim();
        let mut m = Mat::zeros(fld, rows, cols);
        let offset_of = |i: i64, j: usize| dst.iter().find(|&&(a, b, _)| a == i && b == j).map(|t| t.2);
        for &(i, j, c0) in &src {
            if let Some(r0) = offset_of(i + 1, j) {
                m.set_block(r0, c0, &d.dh(i, j));
            }
            if let Some(r0) = offset_of(i, j + 1) {
                m.set_block(r0, c0, &d.dv(i, j).scale(fld.sign(i)));
            }
        }
        diffs.push(m);
    }
    Complex::new(params, lo, modules, diffs)
}

/// Block-diagonal chain map `Cot(src) → Cot(dst)` from per-entry maps;
/// `block(i, j)` returns `None` for a zero component.
pub fn cot_block_map(
    src: &DoubleComplex,
    src_cot: &Complex,
    dst: &DoubleComplex,
    dst_cot: &Complex,
    mut block: impl FnMut(i64, usize) -> Option<Mat>,
) -> ChainMap {
    let fld = src.params().field();
    let mut comps = BTreeMap::new();
    for n in src_cot.degrees() {
        let mut m = Mat::zeros(fld, dst_cot.dim(n), src_cot.dim(n));
        let dl = dst.cot_layout(n);
        for (i, j, c0) in src.cot_layout(n) {
            if let Some(&(_, _, r0)) = dl.iter().find(|&&(a, b, _)| a == i && b == j) {
                if let Some(b) = block(i, j) {
                    m.set_block(r0, c0, &b);
                }
            }
        }
        comps.insert(n, m);
    }
    ChainMap::new_unchecked(src_cot.clone(), dst_cot.clone(), comps)
}

/// A split short exact sequence `0 → A' → A → A'' → 0` with its splitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub incl: Hom,
    pub proj: Hom,
    pub retraction: Hom,
    pub section: Hom,
}

impl Splitting {
    /// The four split-exactness identities, plus `R`-linearity of every map.
    pub fn check(&self) -> std::result::Result<(), String> {
        let (i, p, r, s) = (&self.incl, &self.proj, &self.retraction, &self.section);
        for (name, h) in [("inclusion", i), ("projection", p), ("retraction", r), ("section", s)] {
            if !h.is_linear() {
                return Err(format!("{name} is not R-linear"));
            }
        }
        if i.dst() != p.src() || r.src() != i.dst() || s.dst() != i.dst() || r.dst() != i.src() || s.src() != p.dst() {
            return Err("maps do not share the middle object".into());
        }
        if !r.compose(i).mat().is_identity() {
            return Err("retraction ∘ inclusion ≠ 1".into());
        }
        if !p.compose(s).mat().is_identity() {
            return Err("projection ∘ section ≠ 1".into());
        }
        if !p.compose(i).is_zero() {
            return Err("projection ∘ inclusion ≠ 0".into());
        }
        if !i.compose(r).add(&s.compose(p)).mat().is_identity() {
            return Err("inclusion ∘ retraction + section ∘ projection ≠ 1".into());
        }
        Ok(())
    }
}

/// Output of the horseshoe construction: a resolution of the middle term
/// whose `j`-th module is `R'^j ⊕ R''^j`, and the splittings.
#[derive(Clone, Debug)]
pub struct Horseshoe {
    pub res: InjResolution,
    pub splittings: Vec<Splitting>,
}

/// Resolves the middle of `0 → A' --i--> A --q--> A'' → 0` from resolutions
/// of the ends. Fillers come from [`extend_along_mono`].
pub fn horseshoe(i: &Hom, q: &Hom, left: &InjResolution, right: &InjResolution) -> Result<Horseshoe> {
    if left.depth() != right.depth() {
        return Err(Error::DimensionMismatch("resolutions of different depth".into()));
    }
    if i.src() != &left.object || q.dst() != &right.object || i.dst() != q.src() {
        return Err(Error::DimensionMismatch(
            "sequence does not match the resolutions".into(),
        ));
    }
    let params = i.src().params();
    let depth = left.depth();
    let mid = i.dst().clone();

    let mut modules = Vec::with_capacity(depth + 1);
    let mut splittings = Vec::with_capacity(depth + 1);
    let mut diffs = Vec::with_capacity(depth);
    let mut augmentation = None;

    let (mut ci, mut cq) = (i.clone(), q.clone());
    let (mut eps_l, mut eps_r) = (left.augmentation.clone(), right.augmentation.clone());
    let mut prev_proj: Option<Hom> = None;
    for j in 0..=depth {
        let bp = biproduct(params, &[left.modules[j].clone(), right.modules[j].clone()]);
        let (in1, in2) = (&bp.injections[0], &bp.injections[1]);
        let (p1, p2) = (&bp.projections[0], &bp.projections[1]);
        let lambda = extend_along_mono(&ci, &eps_l)?;
        let eps = in1.compose(&lambda).add(&in2.compose(&eps_r.compose(&cq)));
        match &prev_proj {
            None => augmentation = Some(eps.clone()),
            Some(pp) => diffs.push(eps.compose(pp)),
        }
        splittings.push(Splitting {
            incl: in1.clone(),
            proj: p2.clone(),
            retraction: p1.clone(),
            section: in2.clone(),
        });
        modules.push(bp.sum.clone());
        if j == depth {
            break;
        }
        let (_, proj) = cokernel(&eps);
        let (_, proj_l) = cokernel(&eps_l);
        let (_, proj_r) = cokernel(&eps_r);
        let sec = |h: &Hom| split_epi_section(h.mat()).expect("cokernel projections are onto");
        let (sec_l, sec_r, sec_m) = (sec(&proj_l), sec(&proj_r), sec(&proj));
        let next_l = Hom::new_unchecked(
            proj_l.dst().clone(),
            left.modules[j + 1].clone(),
            left.diffs[j].mat().mul(&sec_l),
        );
        let next_r = Hom::new_unchecked(
            proj_r.dst().clone(),
            right.modules[j + 1].clone(),
            right.diffs[j].mat().mul(&sec_r),
        );
        let next_i = Hom::new_unchecked(
            proj_l.dst().clone(),
            proj.dst().clone(),
            proj.mat().mul(in1.mat()).mul(&sec_l),
        );
        let next_q = Hom::new_unchecked(
            proj.dst().clone(),
            proj_r.dst().clone(),
            proj_r.mat().mul(p2.mat()).mul(&sec_m),
        );
        ci = next_i;
        cq = next_q;
        eps_l = next_l;
        eps_r = next_r;
        prev_proj = Some(proj);
    }
    Ok(Horseshoe {
        res: InjResolution {
            object: mid,
            modules,
            augmentation: augmentation.expect("depth 0 step always runs"),
            diffs,
        },
        splittings,
    })
}

/// One column of a Cartan–Eilenberg resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CEColumn {
    pub degree: i64,
    pub h_res: InjResolution,
    pub b_res: InjResolution,
    pub z_res: InjResolution,
    pub e_res: InjResolution,
    /// `0 → B^(i,j) → Z^(i,j) → H^(i,j) → 0`.
    pub bzh: Vec<Splitting>,
    /// `0 → Z^(i,j) → E^(i,j) → B^(i+1,j) → 0`.
    pub zeb: Vec<Splitting>,
    /// `B^i ↪ Z^i`, `Z^i ↠ H^i` and `Z^i ↪ X^i`, `X^i ↠ B^(i+1)` at the base.
    pub base_bz: Hom,
    pub base_zh: Hom,
    pub base_zx: Hom,
    pub base_xb: Hom,
}

/// A Cartan–Eilenberg injective resolution of `base`, cut at row `jmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CEData {
    pub base: Complex,
    pub jmax: usize,
    pub columns: Vec<CEColumn>,
    pub bicomplex: DoubleComplex,
}

fn build_column(
    degree: i64,
    xi: &Module,
    coh: &Cohomology,
    b_res: InjResolution,
    next_b_res: &InjResolution,
    base_xb: Hom,
    jmax: usize,
) -> Result<CEColumn> {
    let h_res = min_injective_resolution(&coh.h, jmax);
    let z = horseshoe(&coh.b_to_z, &coh.h_proj, &b_res, &h_res)?;
    let e = horseshoe(&coh.z_incl, &base_xb, &z.res, next_b_res)?;
    debug_assert_eq!(&e.res.object, xi);
    Ok(CEColumn {
        degree,
        h_res,
        b_res,
        z_res: z.res,
        e_res: e.res,
        bzh: z.splittings,
        zeb: e.splittings,
        base_bz: coh.b_to_z.clone(),
        base_zh: coh.h_proj.clone(),
        base_zx: coh.z_incl.clone(),
        base_xb,
    })
}

fn assemble(params: CatParams, col_lo: i64, jmax: usize, columns: &[CEColumn]) -> DoubleComplex {
    if columns.is_empty() {
        return DoubleComplex::zero(params);
    }
    let rows = jmax + 1;
    let entries = columns.iter().map(|c| c.e_res.modules.clone()).collect();
    let dv = columns
        .iter()
        .map(|c| c.e_res.diffs.iter().map(|d| d.mat().clone()).collect())
        .collect();
    let dh = columns
        .windows(2)
        .map(|w| {
            (0..rows)
                .map(|j| {
                    w[1].zeb[j]
                        .incl
                        .mat()
                        .mul(w[1].bzh[j].incl.mat())
                        .mul(w[0].zeb[j].proj.mat())
                })
                .collect()
        })
        .collect();
    DoubleComplex::new_unchecked(params, col_lo, rows, entries, dh, dv)
}

/// Builds the resolution with minimal resolutions of every `H^i` and `B^i`.
pub fn build_ce(x: &Complex, jmax: usize) -> Result<CEData> {
    let params = x.params();
    if x.is_zero() {
        return Ok(CEData {
            base: x.clone(),
            jmax,
            columns: Vec::new(),
            bicomplex: DoubleComplex::zero(params),
        });
    }
    let (lo, hi) = (x.lo(), x.hi());
    let cohs: Vec<Cohomology> = (lo..=hi + 1).map(|n| cohomology(x, n)).collect();
    let b_res: Vec<InjResolution> = cohs.iter().map(|c| min_injective_resolution(&c.b, jmax)).collect();
    let mut columns = Vec::with_capacity(cohs.len() - 1);
    for (k, i) in (lo..=hi).enumerate() {
        columns.push(build_column(
            i,
            x.module(i),
            &cohs[k],
            b_res[k].clone(),
            &b_res[k + 1],
            cohs[k + 1].b_proj.clone(),
            jmax,
        )?);
    }
    let bicomplex = assemble(params, lo, jmax, &columns);
    Ok(CEData {
        base: x.clone(),
        jmax,
        columns,
        bicomplex,
    })
}

impl CEData {
    pub fn params(&self) -> CatParams {
        self.base.params()
    }

    pub fn column(&self, i: i64) -> Option<&CEColumn> {
        let first = self.columns.first()?.degree;
        self.columns.get(usize::try_from(i - first).ok()?)
    }

    pub fn cot(&self) -> Complex {
        cototalize(&self.bicomplex).expect("CE grids commute")
    }

    /// Largest degree in which `H(Cot(E))` agrees with the untruncated
    /// resolution.
    pub fn valid_top(&self) -> i64 {
        self.bicomplex.col_lo() + self.jmax as i64 - 1
    }
}

/// The resolution of `X^{≥t}`: columns `≥ t` are kept, column `t - 1`
/// becomes the resolution of `B^t`.
pub fn truncated_ce(ce: &CEData, t: i64) -> CEData {
    let params = ce.params();
    if ce.columns.is_empty() || t <= ce.base.lo() {
        return ce.clone();
    }
    let (trunc, _) = crate::cplx::truncate_geq(&ce.base, t);
    if trunc.is_zero() {
        return CEData {
            base: trunc,
            jmax: ce.jmax,
            columns: Vec::new(),
            bicomplex: DoubleComplex::zero(params),
        };
    }
    let kept: Vec<CEColumn> = ce.columns.iter().filter(|c| c.degree >= t).cloned().collect();
    let bt = &kept[0].b_res;
    let b = bt.object.clone();
    let zero = Module::zero(params);
    let zres = InjResolution::zero(params, ce.jmax);
    let zz = Hom::zero(&zero, &zero);
    let coh = Cohomology {
        degree: t - 1,
        z: zero.clone(),
        z_incl: Hom::zero(&zero, &b),
        b: zero.clone(),
        b_incl: Hom::zero(&zero, &b),
        b_proj: Hom::zero(trunc.module(t - 2), &zero),
        b_to_z: zz.clone(),
        h: zero.clone(),
        h_proj: zz,
    };
    let first =
        build_column(t - 1, &b, &coh, zres, bt, b.identity(), ce.jmax).expect("horseshoe over a trivial sequence");
    let mut columns = vec![first];
    columns.extend(kept);
    let bicomplex = assemble(params, t - 1, ce.jmax, &columns);
    CEData {
        base: trunc,
        jmax: ce.jmax,
        columns,
        bicomplex,
    }
}

/// `X → Cot(E)`: the augmentation `X^n → E^(n,0)` into the `j = 0` summand.
pub fn augmentation(ce: &CEData) -> ChainMap {
    let cot = ce.cot();
    let fld = ce.params().field();
    let mut comps = BTreeMap::new();
    for c in &ce.columns {
        let n = c.degree;
        let layout = ce.bicomplex.cot_layout(n);
        let &(_, _, off) = layout
            .iter()
            .find(|&&(i, j, _)| i == n && j == 0)
            .expect("(n, 0) is in Cot^n");
        let mut m = Mat::zeros(fld, cot.dim(n), ce.base.dim(n));
        m.set_block(off, 0, c.e_res.augmentation.mat());
        comps.insert(n, m);
    }
    ChainMap::new_unchecked(ce.base.clone(), cot, comps)
}

/// `A^(i,0) = X^i`, `A^(i,j+1) = E^(i,j)`, with the augmentations as the
/// first vertical maps.
pub fn augmented_bicomplex(ce: &CEData) -> DoubleComplex {
    let params = ce.params();
    let d = &ce.bicomplex;
    if ce.columns.is_empty() {
        return DoubleComplex::zero(params);
    }
    let rows = ce.jmax + 2;
    let (lo, hi) = (d.col_lo(), d.col_hi());
    let entries = (lo..=hi)
        .map(|i| {
            let mut col = vec![ce.base.module(i).clone()];
            col.extend((0..=ce.jmax).map(|j| d.entry(i, j).clone()));
            col
        })
        .collect();
    let dh = (lo..hi)
        .map(|i| {
            let mut row = vec![ce.base.diff_mat(i)];
            row.extend((0..=ce.jmax).map(|j| d.dh(i, j)));
            row
        })
        .collect();
    let dv = ce
        .columns
        .iter()
        .map(|c| {
            let mut col = vec![c.e_res.augmentation.mat().clone()];
            col.extend((0..ce.jmax).map(|j| d.dv(c.degree, j)));
            col
        })
        .collect();
    DoubleComplex::new_unchecked(params, lo, rows, entries, dh, dv)
}

fn first_err<T>(items: impl IntoIterator<Item = std::result::Result<T, String>>) -> std::result::Result<usize, String> {
    let mut n = 0;
    for r in items {
        r?;
        n += 1;
    }
    Ok(n)
}

fn resolution_ok(name: &str, i: i64, r: &InjResolution, jmax: usize) -> std::result::Result<(), String> {
    if r.depth() != jmax {
        return Err(format!("{name} column {i}: depth {} ≠ {jmax}", r.depth()));
    }
    if !r.modules.iter().all(is_injective) {
        return Err(format!("{name} column {i}: non-injective entry"));
    }
    if !r.augmentation.is_linear() || !r.diffs.iter().all(Hom::is_linear) {
        return Err(format!("{name} column {i}: non-linear map"));
    }
    if !r.is_exact() {
        return Err(format!("{name} column {i}: augmented column is not exact"));
    }
    Ok(())
}

/// Checks that a splitting family is made of chain maps between the
/// resolutions, compatible with the augmentations over `base_in`, `base_out`.
#[allow(clippy::too_many_arguments)]
fn family_ok(
    name: &str,
    i: i64,
    sp: &[Splitting],
    left: &InjResolution,
    mid: &InjResolution,
    right: &InjResolution,
    base_in: &Hom,
    base_out: &Hom,
) -> std::result::Result<(), String> {
    if sp.len() != mid.modules.len() {
        return Err(format!("{name} column {i}: wrong number of splittings"));
    }
    for (j, s) in sp.iter().enumerate() {
        s.check().map_err(|e| format!("{name} ({i},{j}): {e}"))?;
        if s.incl.src() != &left.modules[j] || s.incl.dst() != &mid.modules[j] || s.proj.dst() != &right.modules[j] {
            return Err(format!(
                "{name} ({i},{j}): splitting objects differ from the resolutions"
            ));
        }
        if j + 1 < sp.len() {
            let inc_ok = mid.diffs[j].compose(&s.incl) == sp[j + 1].incl.compose(&left.diffs[j]);
            let pr_ok = right.diffs[j].compose(&s.proj) == sp[j + 1].proj.compose(&mid.diffs[j]);
            if !inc_ok || !pr_ok {
                return Err(format!(
                    "{name} ({i},{j}): splitting maps do not commute with the columns"
                ));
            }
        }
    }
    if mid.augmentation.compose(base_in) != sp[0].incl.compose(&left.augmentation) {
        return Err(format!("{name} column {i}: inclusion does not lift the base map"));
    }
    if right.augmentation.compose(base_out) != sp[0].proj.compose(&mid.augmentation) {
        return Err(format!("{name} column {i}: projection does not lift the base map"));
    }
    if !base_out.compose(base_in).is_zero() || !base_in.is_mono() || !base_out.is_epi() {
        return Err(format!("{name} column {i}: base sequence is not short exact"));
    }
    Ok(())
}

/// Row identities at `(i, j)`: `Z`, `B` and `H` of row `j` agree with the
/// resolution entries through explicit comparison maps.
fn row_identity_ok(ce: &CEData, i: i64, j: usize) -> std::result::Result<(), String> {
    let d = &ce.bicomplex;
    let col = ce.column(i).ok_or("missing column")?;
    let dh_out = d.dh(i, j);
    let dh_in = d.dh(i - 1, j);
    let zeb = &col.zeb[j];
    let bzh = &col.bzh[j];
    let z_dim = zeb.incl.src().dim();
    // Z: Z^(i,j) ↪ E^(i,j) has image ker d_h
    let z_emb = zeb.incl.mat();
    if rank(z_emb) != z_dim || !dh_out.mul(z_emb).is_zero() || z_dim != dh_out.cols() - rank(&dh_out) {
        return Err(format!("({i},{j}): Z^(i,j) is not ker d_h"));
    }
    // B: B^(i,j) ↪ Z^(i,j) ↪ E^(i,j) has image im d_h
    let b_emb = z_emb.mul(bzh.incl.mat());
    let b_dim = bzh.incl.src().dim();
    let rb = rank(&dh_in);
    let fld = ce.params().field();
    let joint = rank(&Mat::hstack(fld, b_emb.rows(), &[&b_emb, &column_space(&dh_in)]));
    if rank(&b_emb) != b_dim || rb != b_dim || joint != b_dim {
        return Err(format!("({i},{j}): B^(i,j) is not im d_h"));
    }
    // H: ker d_h → E → Z → H is onto, kills im d_h, and has the right kernel
    let k = kernel_basis(&dh_out);
    let to_h = bzh.proj.mat().mul(zeb.retraction.mat());
    let phi = to_h.mul(&k);
    let h_dim = bzh.proj.dst().dim();
    if rank(&phi) != h_dim || !to_h.mul(&dh_in).is_zero() || k.cols() - rb != h_dim {
        return Err(format!(
            "({i},{j}): comparison to H^(i,j) is not an isomorphism on cohomology"
        ));
    }
    Ok(())
}

/// Re-checks every invariant of a resolution and reports each family.
pub fn verify_ce(ce: &CEData) -> Report {
    let mut r = Report::new();
    let jmax = ce.jmax;
    let d = &ce.bicomplex;

    r.record(
        "column exactness",
        first_err(ce.columns.iter().map(|c| {
            let i = c.degree;
            resolution_ok("H", i, &c.h_res, jmax)?;
            resolution_ok("B", i, &c.b_res, jmax)?;
            resolution_ok("Z", i, &c.z_res, jmax)?;
            resolution_ok("E", i, &c.e_res, jmax)?;
            if &c.e_res.object != ce.base.module(i) {
                return Err(format!("E column {i} does not resolve X^{i}"));
            }
            for j in 0..=jmax {
                if d.entry(i, j) != &c.e_res.modules[j] || (j < jmax && d.dv(i, j) != *c.e_res.diffs[j].mat()) {
                    return Err(format!("grid column {i} differs from the E resolution at row {j}"));
                }
            }
            Ok(())
        }))
        .map(|n| format!("{n} columns, 4 resolutions each")),
    );

    r.record(
        "square commutation",
        d.check()
            .map(|_| format!("{} columns x {} rows", d.num_cols(), d.rows()))
            .map_err(|e| e.to_string()),
    );

    r.record(
        "split exactness B-Z-H",
        first_err(ce.columns.iter().map(|c| {
            family_ok(
                "B-Z-H", c.degree, &c.bzh, &c.b_res, &c.z_res, &c.h_res, &c.base_bz, &c.base_zh,
            )
        }))
        .map(|n| format!("{n} columns")),
    );

    let zero_res = InjResolution::zero(ce.params(), jmax);
    r.record(
        "split exactness Z-E-B",
        first_err(ce.columns.iter().enumerate().map(|(k, c)| {
            let next = ce.columns.get(k + 1).map(|n| &n.b_res).unwrap_or(&zero_res);
            family_ok(
                "Z-E-B", c.degree, &c.zeb, &c.z_res, &c.e_res, next, &c.base_zx, &c.base_xb,
            )?;
            if c.base_xb.dst() != &next.object {
                return Err(format!(
                    "Z-E-B column {}: B^(i+1) differs from the next column",
                    c.degree
                ));
            }
            Ok(())
        }))
        .map(|n| format!("{n} columns")),
    );

    r.record(
        "horizontal differential composite",
        first_err(ce.columns.windows(2).flat_map(|w| {
            (0..=jmax).map(move |j| {
                let expect = w[1].zeb[j]
                    .incl
                    .mat()
                    .mul(w[1].bzh[j].incl.mat())
                    .mul(w[0].zeb[j].proj.mat());
                if d.dh(w[0].degree, j) == expect {
                    Ok(())
                } else {
                    Err(format!("d_h at ({},{j}) is not E ↠ B ↪ Z ↪ E", w[0].degree))
                }
            })
        }))
        .map(|n| format!("{n} squares")),
    );

    r.record(
        "row identities",
        first_err(
            ce.columns
                .iter()
                .flat_map(|c| (0..=jmax).map(move |j| row_identity_ok(ce, c.degree, j))),
        )
        .map(|n| format!("{n} positions, Z/B/H each")),
    );
    r
}

/// Checks the augmented grid and the quasi-isomorphism `X → Cot(E)`.
pub fn verify_ce_plus(ce: &CEData) -> Report {
    let mut r = Report::new();
    let a = augmented_bicomplex(ce);
    r.record(
        "augmented grid commutes",
        a.check().map(|_| "ok".to_string()).map_err(|e| e.to_string()),
    );
    // exactness of 0 → X^i → E^(i,0) → ... below the cut row
    r.record(
        "augmented columns exact",
        first_err(ce.columns.iter().map(|c| {
            let col = a.column(c.degree);
            let dims = crate::cplx::cohomology_dims(&col);
            match dims.iter().find(|&(&j, &h)| j <= ce.jmax as i64 && h != 0) {
                Some((j, h)) => Err(format!("column {}: cohomology {h} at row {j}", c.degree)),
                None => Ok(()),
            }
        }))
        .map(|n| format!("{n} columns")),
    );
    let top = ce.bicomplex.col_lo() + ce.jmax as i64;
    r.record("Cot(A) acyclic in valid window", {
        match cototalize(&a) {
            Err(e) => Err(e.to_string()),
            Ok(c) => {
                let dims = crate::cplx::cohomology_dims(&c);
                match dims.iter().find(|&(&n, &h)| n <= top && h != 0) {
                    Some((n, h)) => Err(format!("H^{n} has dimension {h}")),
                    None => Ok(format!("degrees ≤ {top}")),
                }
            }
        }
    });
    let aug = augmentation(ce);
    r.record(
        "augmentation is a chain map",
        aug.check().map(|_| "ok".to_string()).map_err(|e| e.to_string()),
    );
    let (lo, hi) = (ce.base.lo(), ce.base.hi());
    r.record(
        "augmentation quasi-isomorphism",
        if ce.base.is_zero() || is_quasi_iso_in(&aug, lo..=hi) {
            Ok(format!("degrees {lo}..={hi}"))
        } else {
            Err("induced map on cohomology is not bijective".into())
        },
    );
    r
}
