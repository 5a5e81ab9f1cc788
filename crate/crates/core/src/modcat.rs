//! Finite-dimensional modules over `R = F_p[x]/(x^m)`.
//!
//! A module is a vector space together with the nilpotent matrix by which
//! `x` acts; a morphism is a matrix intertwining the two actions. `R` is
//! self-injective, so the injective modules are exactly the free ones and
//! `Q = R` is an injective cogenerator. Injective hulls and hom spaces are
//! computed from a Jordan basis of the source.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{column_space, complement_indices, kernel_basis, rank, solve, Mat, PrimeField};

/// Fixes the category: the base field and the nilpotency index `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatParams {
    field: PrimeField,
    m: usize,
}

impl CatParams {
    pub fn new(field: PrimeField, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidNilpotency);
        }
        Ok(Self { field, m })
    }

    /// Shorthand for `CatParams::new(PrimeField::new(p)?, m)`.
    pub fn from_ints(p: u64, m: usize) -> Result<Self> {
        Self::new(PrimeField::new(p)?, m)
    }

    #[inline]
    pub fn field(self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn m(self) -> usize {
        self.m
    }

    /// The same field with `m = 1`: plain vector spaces.
    pub fn vector_spaces(self) -> Self {
        Self {
            field: self.field,
            m: 1,
        }
    }
}

/// A module over `F_p[x]/(x^m)`, stored as the action matrix of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Module {
    params: CatParams,
    action: Mat,
}

impl Module {
    pub fn new(params: CatParams, action: Mat) -> Result<Self> {
        if action.rows() != action.cols() {
            return Err(Error::InvalidModule(format!(
                "action must be square, got {}x{}",
                action.rows(),
                action.cols()
            )));
        }
        if action.field() != params.field {
            return Err(Error::InvalidModule("action over the wrong field".into()));
        }
        if !action.pow(params.m).is_zero() {
            return Err(Error::InvalidModule(format!("action^{} is nonzero", params.m)));
        }
        Ok(Self { params, action })
    }

    pub(crate) fn new_unchecked(params: CatParams, action: Mat) -> Self {
        debug_assert!(action.pow(params.m).is_zero());
        Self { params, action }
    }

    pub fn zero(params: CatParams) -> Self {
        Self::new_unchecked(params, Mat::zeros(params.field, 0, 0))
    }

    /// The cyclic module `R/(x^len)`, one Jordan block of size `len <= m`,
    /// on the basis `e, xe, ..., x^(len-1) e`.
    pub fn cyclic(params: CatParams, len: usize) -> Self {
        assert!(len <= params.m, "block of size {len} exceeds m = {}", params.m);
        let mut a = Mat::zeros(params.field, len, len);
        for i in 1..len {
            a[(i, i - 1)] = 1;
        }
        Self::new_unchecked(params, a)
    }

    /// The regular module `Q = R`, the injective cogenerator.
    pub fn regular(params: CatParams) -> Self {
        Self::cyclic(params, params.m)
    }

    /// The simple module `k = R/(x)`.
    pub fn simple(params: CatParams) -> Self {
        Self::cyclic(params, 1)
    }

    /// The free module `Q^b`, blocks laid out consecutively.
    pub fn free(params: CatParams, b: usize) -> Self {
        Self::from_jordan(params, &vec![params.m; b])
    }

    /// Direct sum of cyclic modules with the given block sizes.
    pub fn from_jordan(params: CatParams, parts: &[usize]) -> Self {
        let blocks: Vec<Module> = parts.iter().map(|&l| Self::cyclic(params, l)).collect();
        let mats: Vec<&Mat> = blocks.iter().map(|b| &b.action).collect();
        Self::new_unchecked(params, Mat::block_diag(params.field, &mats))
    }

    #[inline]
    pub fn params(&self) -> CatParams {
        self.params
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.params.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.action.rows()
    }

    #[inline]
    pub fn action(&self) -> &Mat {
        &self.action
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn identity(&self) -> Hom {
        Hom::new_unchecked(self.clone(), self.clone(), Mat::identity(self.field(), self.dim()))
    }
}

/// An `R`-linear map, stored as a `dst.dim x src.dim` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hom {
    src: Module,
    dst: Module,
    mat: Mat,
}

impl Hom {
    pub fn new(src: Module, dst: Module, mat: Mat) -> Result<Self> {
        if mat.shape() != (dst.dim(), src.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                mat.rows(),
                mat.cols(),
                dst.dim(),
                src.dim()
            )));
        }
        if mat.mul(src.action()) != dst.action().mul(&mat) {
            return Err(Error::NotLinear("matrix does not commute with x".into()));
        }
        Ok(Self { src, dst, mat })
    }

    pub(crate) fn new_unchecked(src: Module, dst: Module, mat: Mat) -> Self {
        debug_assert_eq!(mat.shape(), (dst.dim(), src.dim()));
        debug_assert!(mat.mul(src.action()) == dst.action().mul(&mat));
        Self { src, dst, mat }
    }

    /// Builds a hom without the linearity check; for verifiers and tests that
    /// need to represent deliberately broken data.
    pub fn new_raw(src: Module, dst: Module, mat: Mat) -> Self {
        assert_eq!(mat.shape(), (dst.dim(), src.dim()));
        Self { src, dst, mat }
    }

    pub fn zero(src: &Module, dst: &Module) -> Self {
        Self {
            mat: Mat::zeros(src.field(), dst.dim(), src.dim()),
            src: src.clone(),
            dst: dst.clone(),
        }
    }

    #[inline]
    pub fn src(&self) -> &Module {
        &self.src
    }

    #[inline]
    pub fn dst(&self) -> &Module {
        &self.dst
    }

    #[inline]
    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    pub fn is_linear(&self) -> bool {
        self.mat.shape() == (self.dst.dim(), self.src.dim())
            && self.mat.mul(self.src.action()) == self.dst.action().mul(&self.mat)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Hom) -> Hom {
        assert_eq!(other.dst.dim(), self.src.dim(), "composing incompatible homs");
        Hom {
            src: other.src.clone(),
            dst: self.dst.clone(),
            mat: self.mat.mul(&other.mat),
        }
    }

    pub fn add(&self, other: &Hom) -> Hom {
        Hom {
            src: self.src.clone(),
            dst: self.dst.clone(),
            mat: self.mat.add(&other.mat),
        }
    }

    pub fn sub(&self, other: &Hom) -> Hom {
        Hom {
            src: self.src.clone(),
            dst: self.dst.clone(),
            mat: self.mat.sub(&other.mat),
        }
    }

    pub fn neg(&self) -> Hom {
        self.scale(self.src.field().p() - 1)
    }

    pub fn scale(&self, s: u64) -> Hom {
        Hom {
            src: self.src.clone(),
            dst: self.dst.clone(),
            mat: self.mat.scale(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn is_mono(&self) -> bool {
        rank(&self.mat) == self.src.dim()
    }

    pub fn is_epi(&self) -> bool {
        rank(&self.mat) == self.dst.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.src.dim() == self.dst.dim() && self.is_mono()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<Hom> {
        let inv = self.mat.inverse()?;
        Some(Hom {
            src: self.dst.clone(),
            dst: self.src.clone(),
            mat: inv,
        })
    }

    /// Block-diagonal sum `⊕ f_k : ⊕ src_k → ⊕ dst_k`.
    pub fn direct_sum(params: CatParams, homs: &[&Hom]) -> Hom {
        let srcs: Vec<Module> = homs.iter().map(|h| h.src.clone()).collect();
        let dsts: Vec<Module> = homs.iter().map(|h| h.dst.clone()).collect();
        let mats: Vec<&Mat> = homs.iter().map(|h| &h.mat).collect();
        Hom {
            src: biproduct(params, &srcs).sum,
            dst: biproduct(params, &dsts).sum,
            mat: Mat::block_diag(params.field, &mats),
        }
    }
}

/// Partition of block sizes of the action, non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JordanType(pub Vec<usize>);

impl JordanType {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn num_blocks(&self) -> usize {
        self.0.len()
    }
}

/// A Jordan basis: `change` has as columns the chains `g, xg, ..., x^(l-1) g`
/// for each generator `g`, largest blocks first.
#[derive(Clone, Debug)]
pub struct JordanBasis {
    pub blocks: Vec<usize>,
    pub change: Mat,
    pub change_inv: Mat,
}

impl JordanBasis {
    /// Offset of each block's first column in `change`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &b in &self.blocks {
            off.push(acc);
            acc += b;
        }
        off
    }
}

pub fn jordan_basis(m: &Module) -> JordanBasis {
    let f = m.field();
    let d = m.dim();
    let a = m.action();
    let top = m.params().m;
    let powers: Vec<Mat> = (0..=top + 1).map(|k| a.pow(k)).collect();
    let kernels: Vec<Mat> = powers.iter().map(kernel_basis).collect();

    let mut blocks = Vec::new();
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(d);
    for k in (1..=top).rev() {
        let a_next = a.mul(&kernels[k + 1]);
        let avoid = Mat::hstack(f, d, &[&kernels[k - 1], &a_next]);
        let cand = Mat::hstack(f, d, &[&avoid, &kernels[k]]);
        for c in cand.pivot_cols() {
            if c < avoid.cols() {
                continue;
            }
            let mut v = kernels[k].col(c - avoid.cols());
            blocks.push(k);
            for _ in 0..k {
                columns.push(v.clone());
                v = a.mul(&Mat::column(f, &v)).col(0);
            }
        }
    }
    let mut change = Mat::zeros(f, d, d);
    for (c, v) in columns.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            change[(r, c)] = x;
        }
    }
    let change_inv = change.inverse().expect("Jordan chains form a basis");
    JordanBasis {
        blocks,
        change,
        change_inv,
    }
}

/// Basis of `Hom_R(src, dst)`.
///
/// For each Jordan generator `g` of `src` of block size `l`, the images of
/// `g` range over `ker(x^l)` in `dst`; the basis walks generators in Jordan
/// order and kernel vectors in kernel-basis order.
#[derive(Clone, Debug)]
pub struct HomSpace {
    src: Module,
    dst: Module,
    basis: Vec<Mat>,
}

impl HomSpace {
    pub fn new(src: &Module, dst: &Module) -> Self {
        let f = src.field();
        let jb = jordan_basis(src);
        let mut basis = Vec::new();
        let mut kernel_cache: Vec<Option<Mat>> = vec![None; src.params().m + 1];
        for (&len, off) in jb.blocks.iter().zip(jb.offsets()) {
            let ker = kernel_cache[len]
                .get_or_insert_with(|| kernel_basis(&dst.action().pow(len)))
                .clone();
            for c in 0..ker.cols() {
                let mut v = Mat::column(f, &ker.col(c));
                let mut on_jordan = Mat::zeros(f, dst.dim(), src.dim());
                for t in 0..len {
                    on_jordan.set_block(0, off + t, &v);
                    v = dst.action().mul(&v);
                }
                basis.push(on_jordan.mul(&jb.change_inv));
            }
        }
        Self {
            src: src.clone(),
            dst: dst.clone(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn src(&self) -> &Module {
        &self.src
    }

    pub fn dst(&self) -> &Module {
        &self.dst
    }

    /// The hom `Σ c_k φ_k`.
    pub fn combine(&self, coeffs: &[u64]) -> Hom {
        assert_eq!(coeffs.len(), self.basis.len());
        let f = self.src.field();
        let mut mat = Mat::zeros(f, self.dst.dim(), self.src.dim());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                mat = mat.add(&b.scale(*c));
            }
        }
        Hom::new_unchecked(self.src.clone(), self.dst.clone(), mat)
    }

    /// Coordinates of a hom in this basis, `None` if it is not `R`-linear.
    pub fn coordinates(&self, h: &Mat) -> Option<Vec<u64>> {
        let f = self.src.field();
        let cols: Vec<Mat> = self.basis.iter().map(|b| Mat::column(f, &b.vec())).collect();
        let refs: Vec<&Mat> = cols.iter().collect();
        let sys = Mat::hstack(f, self.src.dim() * self.dst.dim(), &refs);
        solve(&sys, &Mat::column(f, &h.vec())).ok().flatten().map(|x| x.col(0))
    }
}

/// Kernel of `f` with its inclusion.
pub fn kernel(f: &Hom) -> (Module, Hom) {
    let k = kernel_basis(&f.mat);
    let action = solve(&k, &f.src.action().mul(&k))
        .expect("shapes agree")
        .expect("kernels are x-stable");
    debug_assert_eq!(action.shape(), (k.cols(), k.cols()));
    let km = Module::new_unchecked(f.src.params(), action);
    let incl = Hom::new_unchecked(km.clone(), f.src.clone(), k);
    (km, incl)
}

/// Image factorisation `f = incl ∘ proj`.
pub fn image(f: &Hom) -> (Module, Hom, Hom) {
    let basis = column_space(&f.mat);
    let action = solve(&basis, &f.dst.action().mul(&basis))
        .expect("shapes agree")
        .expect("images are x-stable");
    let im = Module::new_unchecked(f.src.params(), action);
    let proj = solve(&basis, &f.mat)
        .expect("shapes agree")
        .expect("f lands in its image");
    let incl = Hom::new_unchecked(im.clone(), f.dst.clone(), basis);
    let proj = Hom::new_unchecked(f.src.clone(), im.clone(), proj);
    (im, incl, proj)
}

/// Cokernel of `f` realised on the standard basis vectors of `dst` that
/// complete a basis of the image, chosen greedily by index.
pub fn cokernel(f: &Hom) -> (Module, Hom) {
    let fld = f.src.field();
    let d = f.dst.dim();
    let im = column_space(&f.mat);
    let comp = complement_indices(&im);
    let ecomp = Mat::identity(fld, d).select_cols(&comp);
    let t = Mat::hstack(fld, d, &[&im, &ecomp]);
    let tinv = t.inverse().expect("image plus complement is a basis");
    let rows: Vec<usize> = (im.cols()..d).collect();
    let proj = tinv.select_rows(&rows);
    let action = proj.mul(f.dst.action()).mul(&ecomp);
    let c = Module::new_unchecked(f.dst.params(), action);
    let proj = Hom::new_unchecked(f.dst.clone(), c.clone(), proj);
    (c, proj)
}

/// A finite biproduct with its structure maps.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub sum: Module,
    pub injections: Vec<Hom>,
    pub projections: Vec<Hom>,
}

pub fn biproduct(params: CatParams, ms: &[Module]) -> Biproduct {
    let f = params.field;
    let actions: Vec<&Mat> = ms.iter().map(|m| m.action()).collect();
    let sum = Module::new_unchecked(params, Mat::block_diag(f, &actions));
    let total = sum.dim();
    let mut injections = Vec::with_capacity(ms.len());
    let mut projections = Vec::with_capacity(ms.len());
    let mut off = 0;
    for m in ms {
        let mut inj = Mat::zeros(f, total, m.dim());
        inj.set_block(off, 0, &Mat::identity(f, m.dim()));
        projections.push(Hom::new_unchecked(sum.clone(), m.clone(), inj.transpose()));
        injections.push(Hom::new_unchecked(m.clone(), sum.clone(), inj));
        off += m.dim();
    }
    Biproduct {
        sum,
        injections,
        projections,
    }
}

pub fn jordan_type(m: &Module) -> JordanType {
    let a = m.action();
    let top = m.params().m;
    let ranks: Vec<usize> = (0..=top + 1).map(|k| rank(&a.pow(k))).collect();
    // blocks of size >= j: ranks[j-1] - ranks[j]
    let ge = |j: usize| ranks[j - 1] - ranks[j];
    let mut parts = Vec::new();
    for size in (1..=top).rev() {
        let exact = ge(size) - ge(size + 1);
        parts.extend(std::iter::repeat_n(size, exact));
    }
    JordanType(parts)
}

pub fn is_injective(m: &Module) -> bool {
    m.dim() == m.params().m * (m.dim() - rank(m.action()))
}

/// Injective hull `M ↪ Q^b`, one copy of `Q` per Jordan block.
///
/// A block `g, xg, ..., x^(l-1) g` is sent to `x^(m-l) e, ..., x^(m-1) e` in
/// its copy of `Q`, so the socle of `M` lands on the socle of `Q^b`.
pub fn injective_hull(m: &Module) -> (Module, Hom) {
    let params = m.params();
    let f = m.field();
    let top = params.m;
    let jb = jordan_basis(m);
    let b = jb.blocks.len();
    let e = Module::free(params, b);
    let mut on_jordan = Mat::zeros(f, b * top, m.dim());
    for (i, (&len, off)) in jb.blocks.iter().zip(jb.offsets()).enumerate() {
        for t in 0..len {
            on_jordan[(i * top + top - len + t, off + t)] = 1;
        }
    }
    let iota = on_jordan.mul(&jb.change_inv);
    (e.clone(), Hom::new_unchecked(m.clone(), e, iota))
}

/// Extends `f: A' → I` along a mono `i: A' → A` to `g: A → I` with
/// `g ∘ i = f`, taking the canonical solution in hom-basis coordinates.
pub fn extend_along_mono(i: &Hom, f: &Hom) -> Result<Hom> {
    if i.src.dim() != f.src.dim() {
        return Err(Error::DimensionMismatch("mono and map have different sources".into()));
    }
    let fld = i.src.field();
    let space = HomSpace::new(&i.dst, &f.dst);
    let rows = f.dst.dim() * i.src.dim();
    let cols: Vec<Mat> = space
        .basis()
        .iter()
        .map(|b| Mat::column(fld, &b.mul(&i.mat).vec()))
        .collect();
    let refs: Vec<&Mat> = cols.iter().collect();
    let sys = Mat::hstack(fld, rows, &refs);
    let rhs = Mat::column(fld, &f.mat.vec());
    match solve(&sys, &rhs)? {
        Some(x) => Ok(space.combine(&x.col(0))),
        None => Err(Error::NoExtension(format!(
            "target Jordan type {:?}, mono: {}",
            jordan_type(&f.dst).0,
            i.is_mono()
        ))),
    }
}

/// A truncated injective resolution `0 → M → I^0 → ... → I^depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjResolution {
    pub object: Module,
    pub modules: Vec<Module>,
    pub augmentation: Hom,
    pub diffs: Vec<Hom>,
}

impl InjResolution {
    pub fn depth(&self) -> usize {
        self.modules.len() - 1
    }

    /// The resolution of the zero module.
    pub fn zero(params: CatParams, depth: usize) -> Self {
        let z = Module::zero(params);
        Self {
            object: z.clone(),
            modules: vec![z.clone(); depth + 1],
            augmentation: Hom::zero(&z, &z),
            diffs: vec![Hom::zero(&z, &z); depth],
        }
    }

    /// `(I^j, incoming map)` pairs; the first incoming map is the augmentation.
    pub fn steps(&self) -> Vec<(Module, Hom)> {
        let mut out = vec![(self.modules[0].clone(), self.augmentation.clone())];
        for (m, d) in self.modules[1..].iter().zip(&self.diffs) {
            out.push((m.clone(), d.clone()));
        }
        out
    }

    /// Exactness of the augmented sequence at `M` and at every `I^j`, `j < depth`.
    pub fn is_exact(&self) -> bool {
        if !self.augmentation.is_mono() {
            return false;
        }
        let mut incoming_rank = rank(self.augmentation.mat());
        for j in 0..self.depth() {
            let out = &self.diffs[j];
            let prev = if j == 0 { &self.augmentation } else { &self.diffs[j - 1] };
            if !out.compose(prev).is_zero() {
                return false;
            }
            let r = rank(out.mat());
            if self.modules[j].dim() - r != incoming_rank {
                return false;
            }
            incoming_rank = r;
        }
        true
    }
}

/// Minimal injective resolution by iterated hulls of cokernels.
pub fn min_injective_resolution(m: &Module, depth: usize) -> InjResolution {
    let (e0, aug) = injective_hull(m);
    let mut modules = vec![e0];
    let mut diffs = Vec::with_capacity(depth);
    let mut incoming = aug.clone();
    for _ in 0..depth {
        let (c, proj) = cokernel(&incoming);
        let (e, iota) = injective_hull(&c);
        let d = iota.compose(&proj);
        modules.push(e);
        diffs.push(d.clone());
        incoming = d;
    }
    InjResolution {
        object: m.clone(),
        modules,
        augmentation: aug,
        diffs,
    }
}

/// Explicit isomorphism of an injective module onto `Q^b`.
pub fn free_decomposition(m: &Module) -> Result<(usize, Hom)> {
    if !is_injective(m) {
        return Err(Error::NotInjectiveModule(jordan_type(m).0));
    }
    let (e, iota) = injective_hull(m);
    Ok((e.dim() / m.params().m, iota))
}
