//! Inverse towers of complexes, their limits, and the truncation tower of a
//! Cartan–Eilenberg resolution.

use std::collections::BTreeMap;

use crate::ce::{augmentation, cot_block_map, truncated_ce, CEData};
use crate::cplx::{
    cohomology_dims, is_quasi_iso_in, kernel_complex, product_of_complexes, truncate_geq, ChainMap, Complex, Homotopy,
};
use crate::error::{Error, Result};
use crate::exactla::{rank, Mat};
use crate::modcat::biproduct;
use crate::report::Report;

/// `X_0 ← X_1 ← ... ← X_N`; `links[n] : X_(n+1) → X_n` and `sections[n]`
/// its degreewise right inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub stages: Vec<Complex>,
    pub links: Vec<ChainMap>,
    pub sections: Vec<BTreeMap<i64, Mat>>,
    /// Whether the last stage already is the limit of the infinite tower
    /// this one truncates.
    pub saturated: bool,
}

impl Tower {
    /// Checks that links connect consecutive stages and are chain maps. The
    /// tower counts as saturated when its last link is a degreewise
    /// isomorphism or it has a single stage.
    pub fn new(stages: Vec<Complex>, links: Vec<ChainMap>, sections: Vec<BTreeMap<i64, Mat>>) -> Result<Self> {
        if stages.is_empty() || links.len() + 1 != stages.len() || sections.len() != links.len() {
            return Err(Error::DimensionMismatch(
                "a tower needs N + 1 stages and N links".into(),
            ));
        }
        for (n, l) in links.iter().enumerate() {
            if l.src() != &stages[n + 1] || l.dst() != &stages[n] {
                return Err(Error::DimensionMismatch(format!(
                    "link {n} does not connect stages {} and {n}",
                    n + 1
                )));
            }
            l.check()?;
        }
        let saturated = links.last().is_none_or(ChainMap::is_iso);
        Ok(Self {
            stages,
            links,
            sections,
            saturated,
        })
    }

    /// `X ← X ← ... ← X` with identity links.
    pub fn constant(x: &Complex, n: usize) -> Self {
        let id = x.identity();
        let sec: BTreeMap<i64, Mat> = x.degrees().map(|d| (d, id.comp(d))).collect();
        Self {
            stages: vec![x.clone(); n + 1],
            links: vec![id; n],
            sections: vec![sec; n],
            saturated: true,
        }
    }

    pub fn depth(&self) -> usize {
        self.links.len()
    }

    pub fn section(&self, n: usize, d: i64) -> Mat {
        self.sections[n].get(&d).cloned().unwrap_or_else(|| {
            let (src, dst) = (&self.stages[n], &self.stages[n + 1]);
            Mat::zeros(src.params().field(), dst.dim(d), src.dim(d))
        })
    }
}

/// Per link and degree: `link ∘ section = 1`, sections `R`-linear, links
/// chain maps.
pub fn verify_split_links(t: &Tower) -> Report {
    let mut r = Report::new();
    for (n, l) in t.links.iter().enumerate() {
        let outcome = (|| {
            l.check().map_err(|e| e.to_string())?;
            for d in l.window() {
                let s = t.section(n, d);
                let (src, dst) = (t.stages[n].module(d), t.stages[n + 1].module(d));
                if s.shape() != (dst.dim(), src.dim()) {
                    return Err(format!("degree {d}: section has the wrong shape"));
                }
                if s.mul(src.action()) != dst.action().mul(&s) {
                    return Err(format!("degree {d}: section is not R-linear"));
                }
                if !l.comp(d).mul(&s).is_identity() {
                    return Err(format!("degree {d}: link ∘ section ≠ 1"));
                }
            }
            Ok(format!("{} degrees", l.window().count()))
        })();
        r.record(format!("link {n} split"), outcome);
    }
    r
}

/// The limit triangle data `lim → ∏_(0..N) X_n → ∏_(0..N-1) X_n`.
///
/// The middle map is `x ↦ (x_n - link_n(x_(n+1)))_n`; its kernel is the
/// limit, and `shift_section` is the explicit right inverse
/// `x_N = 0, x_n = y_n + link_n(x_(n+1))`.
#[derive(Clone, Debug)]
pub struct HolimPresentation {
    pub tower: Tower,
    pub product: Complex,
    pub codomain: Complex,
    pub one_minus_shift: ChainMap,
    pub shift_section: BTreeMap<i64, Mat>,
    pub limit: Complex,
    pub limit_incl: ChainMap,
    pub limit_cone: Vec<ChainMap>,
}

pub fn holim_presentation(t: &Tower) -> Result<HolimPresentation> {
    let params = t.stages[0].params();
    let fld = params.field();
    let big = product_of_complexes(params, &t.stages);
    let small = product_of_complexes(params, &t.stages[..t.depth()]);
    let (p, c) = (&big.complex, &small.complex);
    let mut comps = BTreeMap::new();
    let mut secs = BTreeMap::new();
    for d in p.degrees() {
        let dims: Vec<usize> = t.stages.iter().map(|x| x.dim(d)).collect();
        let offs: Vec<usize> = dims
            .iter()
            .scan(0, |acc, &k| {
                let o = *acc;
                *acc += k;
                Some(o)
            })
            .collect();
        let mut m = Mat::zeros(fld, c.dim(d), p.dim(d));
        let mut s = Mat::zeros(fld, p.dim(d), c.dim(d));
        for n in 0..t.depth() {
            m.set_block(offs[n], offs[n], &Mat::identity(fld, dims[n]));
            m.set_block(offs[n], offs[n + 1], &t.links[n].comp(d).neg());
        }
        // x_n = y_n + link_n(x_(n+1)), unwound from the top: the block from
        // y_k into x_n is link_n ∘ ... ∘ link_(k-1) for k ≥ n.
        for n in (0..t.depth()).rev() {
            let mut acc = Mat::identity(fld, dims[n]);
            for k in n..t.depth() {
                s.set_block(offs[n], offs[k], &acc);
                if k + 1 < t.depth() {
                    acc = acc.mul(&t.links[k].comp(d));
                }
            }
        }
        comps.insert(d, m);
        secs.insert(d, s);
    }
    let oms = ChainMap::new_unchecked(p.clone(), c.clone(), comps);
    for d in p.degrees() {
        if rank(&oms.comp(d)) != c.dim(d) {
            return Err(Error::ShiftNotSurjective(d));
        }
    }
    let (limit, limit_incl) = kernel_complex(&oms);
    let limit_cone = big.projections.iter().map(|pr| pr.compose(&limit_incl)).collect();
    Ok(HolimPresentation {
        tower: t.clone(),
        product: p.clone(),
        codomain: c.clone(),
        one_minus_shift: oms,
        shift_section: secs,
        limit,
        limit_incl,
        limit_cone,
    })
}

impl HolimPresentation {
    /// Degreewise exactness of `0 → lim → ∏ → ∏ → 0` by ranks, plus the
    /// explicit section of `1 - shift`.
    pub fn verify(&self) -> Report {
        let mut r = Report::new();
        let (p, c) = (&self.product, &self.codomain);
        r.record(
            "one minus shift is a chain map",
            self.one_minus_shift
                .check()
                .map(|_| "ok".into())
                .map_err(|e| e.to_string()),
        );
        r.record(
            "limit sequence exact",
            (|| {
                for d in p.degrees() {
                    let rk = rank(&self.one_minus_shift.comp(d));
                    if p.dim(d) != self.limit.dim(d) + rk || rk != c.dim(d) {
                        return Err(format!(
                            "degree {d}: dim ∏ = {}, dim lim = {}, rank = {rk}",
                            p.dim(d),
                            self.limit.dim(d)
                        ));
                    }
                    let inc = self.limit_incl.comp(d);
                    if rank(&inc) != self.limit.dim(d) || !self.one_minus_shift.comp(d).mul(&inc).is_zero() {
                        return Err(format!("degree {d}: limit is not the kernel"));
                    }
                }
                Ok(format!("{} degrees", p.degrees().count()))
            })(),
        );
        r.record(
            "one minus shift split",
            (|| {
                for d in p.degrees() {
                    let s = self
                        .shift_section
                        .get(&d)
                        .ok_or(format!("degree {d}: missing section"))?;
                    if !self.one_minus_shift.comp(d).mul(s).is_identity() {
                        return Err(format!("degree {d}: (1 - shift) ∘ section ≠ 1"));
                    }
                }
                Ok("explicit telescoping section".into())
            })(),
        );
        r
    }
}

/// The limit of a saturated tower, as the kernel of `1 - shift`.
pub fn inverse_limit(t: &Tower) -> Result<Complex> {
    if !t.saturated {
        return Err(Error::NonStabilizingTower);
    }
    Ok(holim_presentation(t)?.limit)
}

/// `Cot(E^{≥0}) ← Cot(E^{≥-1}) ← ... ← Cot(E^{≥-N})` with the data needed to
/// analyse it.
#[derive(Clone, Debug)]
pub struct TruncationTower {
    pub ce: CEData,
    pub stage_ces: Vec<CEData>,
    pub tower: Tower,
}

/// Depth at which the truncation tower of `x` reaches `Cot(E)`, plus one.
pub fn default_depth(x: &Complex) -> usize {
    if x.is_zero() {
        1
    } else {
        (-x.lo()).max(0) as usize + 1
    }
}

pub fn truncation_tower(ce: &CEData, depth: usize) -> TruncationTower {
    let stage_ces: Vec<CEData> = (0..=depth).map(|n| truncated_ce(ce, -(n as i64))).collect();
    let stages: Vec<Complex> = stage_ces.iter().map(CEData::cot).collect();
    let lo = ce.base.lo();
    let mut links = Vec::with_capacity(depth);
    let mut sections = Vec::with_capacity(depth);
    for n in 0..depth {
        let t = -(n as i64);
        let (up, down) = (&stage_ces[n + 1], &stage_ces[n]);
        let proj_or_id = |i: i64, j: usize, forward: bool| -> Option<Mat> {
            let fld = ce.params().field();
            if ce.columns.is_empty() {
                return None;
            }
            if t <= lo || i >= t {
                let d = down.bicomplex.entry(i, j).dim();
                Some(Mat::identity(fld, d))
            } else if i == t - 1 {
                let s = &ce.column(i)?.zeb[j];
                Some(if forward {
                    s.proj.mat().clone()
                } else {
                    s.section.mat().clone()
                })
            } else {
                None
            }
        };
        let link = cot_block_map(&up.bicomplex, &stages[n + 1], &down.bicomplex, &stages[n], |i, j| {
            proj_or_id(i, j, true)
        });
        let sec = cot_block_map(&down.bicomplex, &stages[n], &up.bicomplex, &stages[n + 1], |i, j| {
            proj_or_id(i, j, false)
        });
        sections.push(stages[n].degrees().map(|d| (d, sec.comp(d))).collect());
        links.push(link);
    }
    let mut tower = Tower::new(stages, links, sections).expect("truncation links are chain maps");
    // an iso link can sit above a zero column; only reaching lo guarantees the limit
    tower.saturated = ce.columns.is_empty() || depth as i64 >= -lo;
    TruncationTower {
        ce: ce.clone(),
        stage_ces,
        tower,
    }
}

/// The kernel of link `n` of a truncation tower, in the explicit form
/// `B^(t,0) → Z^(t,0) ⊕ B^(t,1) → Z^(t,1) ⊕ B^(t,2) → ...` with `t = -n-1`,
/// and a homotopy equivalence to the complex `H^(t,0) → H^(t,1) → ...` whose
/// differential is that of the resolution of `H^t`, up to sign.
#[derive(Clone, Debug)]
pub struct StageKernel {
    pub link: usize,
    pub column: i64,
    pub kernel: Complex,
    pub inclusion: ChainMap,
    pub h_complex: Complex,
    pub to_h: ChainMap,
    pub from_h: ChainMap,
    /// `1_K ≃ from_h ∘ to_h`.
    pub homotopy: Homotopy,
    /// `to_h ∘ from_h = 1` exactly; kept as a homotopy with zero components.
    pub back: Homotopy,
    /// Whether the differential of `h_complex` vanishes in the window.
    pub vanishing_differentials: bool,
    pub analysis: Report,
}

pub fn stage_kernel(tt: &TruncationTower, n: usize) -> StageKernel {
    let ce = &tt.ce;
    let params = ce.params();
    let fld = params.field();
    let jmax = ce.jmax;
    let tp = -(n as i64) - 1;
    let up = &tt.tower.stages[n + 1];
    let up_grid = &tt.stage_ces[n + 1].bicomplex;
    let link = &tt.tower.links[n];

    let trivial = tp < ce.base.lo() || ce.column(tp).is_none();
    let col = if trivial { None } else { ce.column(tp) };
    let zero_mod = crate::modcat::Module::zero(params);
    let bmod = |j: i64| match col {
        Some(c) if j >= 0 && j as usize <= jmax => c.b_res.modules[j as usize].clone(),
        _ => zero_mod.clone(),
    };
    let zmod = |j: i64| match col {
        Some(c) if j >= 0 && j as usize <= jmax => c.z_res.modules[j as usize].clone(),
        _ => zero_mod.clone(),
    };
    let hmod = |j: i64| match col {
        Some(c) if j >= 0 && j as usize <= jmax => c.bzh[j as usize].proj.dst().clone(),
        _ => zero_mod.clone(),
    };
    let s = fld.sign(tp);
    let (klo, khi) = if col.is_some() {
        (tp - 1, tp + jmax as i64)
    } else {
        (0, -1)
    };

    // d_Z^j, and the pieces of it read through the B-Z-H splittings
    let dz = |j: i64| -> Mat {
        match col {
            Some(c) if j >= 0 && (j as usize) < jmax => c.z_res.diffs[j as usize].mat().clone(),
            _ => Mat::zeros(fld, zmod(j + 1).dim(), zmod(j).dim()),
        }
    };
    let db = |j: i64| -> Mat {
        match col {
            Some(c) if j >= 0 && (j as usize) < jmax => c.b_res.diffs[j as usize].mat().clone(),
            _ => Mat::zeros(fld, bmod(j + 1).dim(), bmod(j).dim()),
        }
    };
    let split = |j: i64| col.filter(|_| j >= 0 && j as usize <= jmax).map(|c| &c.bzh[j as usize]);
    let b_to_z = |j: i64| {
        split(j).map_or_else(
            || Mat::zeros(fld, zmod(j).dim(), bmod(j).dim()),
            |sp| sp.incl.mat().clone(),
        )
    };
    let z_to_h = |j: i64| {
        split(j).map_or_else(
            || Mat::zeros(fld, hmod(j).dim(), zmod(j).dim()),
            |sp| sp.proj.mat().clone(),
        )
    };
    let z_to_b = |j: i64| {
        split(j).map_or_else(
            || Mat::zeros(fld, bmod(j).dim(), zmod(j).dim()),
            |sp| sp.retraction.mat().clone(),
        )
    };
    let h_to_z = |j: i64| {
        split(j).map_or_else(
            || Mat::zeros(fld, zmod(j).dim(), hmod(j).dim()),
            |sp| sp.section.mat().clone(),
        )
    };
    let d_h = |j: i64| z_to_h(j + 1).mul(&dz(j)).mul(&h_to_z(j));
    let mu = |j: i64| z_to_b(j + 1).mul(&dz(j)).mul(&h_to_z(j));

    // K^(tp+j) = B^(j+1) ⊕ Z^j
    let kmod = |d: i64| {
        let j = d - tp;
        biproduct(params, &[bmod(j + 1), zmod(j)]).sum
    };
    let kdiff = |d: i64| {
        let j = d - tp;
        let (b0, z0) = (bmod(j + 1).dim(), zmod(j).dim());
        let (b1, z1) = (bmod(j + 2).dim(), zmod(j + 1).dim());
        let mut m = Mat::zeros(fld, b1 + z1, b0 + z0);
        m.set_block(0, 0, &db(j + 1).scale(fld.neg(s)));
        m.set_block(b1, 0, &b_to_z(j + 1));
        m.set_block(b1, b0, &dz(j).scale(s));
        m
    };
    let kernel = Complex::from_fn(params, klo, khi, kmod, kdiff);
    let hc = Complex::from_fn(
        params,
        if col.is_some() { tp } else { 0 },
        khi,
        |d| hmod(d - tp),
        |d| d_h(d - tp).scale(s),
    );

    // inclusion into stage n+1
    let mut inc = BTreeMap::new();
    for d in kernel.degrees() {
        let j = d - tp;
        let mut m = Mat::zeros(fld, up.dim(d), kernel.dim(d));
        let layout = up_grid.cot_layout(d);
        let b0 = bmod(j + 1).dim();
        for &(i, row, off) in &layout {
            if i == tp - 1 && b0 > 0 {
                m.set_block(off, 0, &Mat::identity(fld, b0));
            }
            if i == tp && zmod(j).dim() > 0 {
                let c = col.expect("nonzero Z implies a column");
                m.set_block(off, b0, c.zeb[row].incl.mat());
            }
        }
        inc.insert(d, m);
    }
    let inclusion = ChainMap::new_unchecked(kernel.clone(), up.clone(), inc);

    let mut pi = BTreeMap::new();
    let mut iota = BTreeMap::new();
    let mut sigma = BTreeMap::new();
    for d in kernel.degrees() {
        let j = d - tp;
        let (b0, z0, h0) = (bmod(j + 1).dim(), zmod(j).dim(), hmod(j).dim());
        let mut p = Mat::zeros(fld, h0, b0 + z0);
        p.set_block(0, b0, &z_to_h(j));
        pi.insert(d, p);
        let mut io = Mat::zeros(fld, b0 + z0, h0);
        io.set_block(0, 0, &mu(j).scale(fld.neg(s)));
        io.set_block(b0, 0, &h_to_z(j));
        iota.insert(d, io);
        let (b_1, z_1) = (bmod(j).dim(), zmod(j - 1).dim());
        let mut sg = Mat::zeros(fld, b_1 + z_1, b0 + z0);
        sg.set_block(0, b0, &z_to_b(j));
        sigma.insert(d, sg);
    }
    let to_h = ChainMap::new_unchecked(kernel.clone(), hc.clone(), pi);
    let from_h = ChainMap::new_unchecked(hc.clone(), kernel.clone(), iota);
    let homotopy = Homotopy {
        f: kernel.identity(),
        g: from_h.compose(&to_h),
        s: sigma,
    };
    let back = Homotopy {
        f: to_h.compose(&from_h),
        g: hc.identity(),
        s: BTreeMap::new(),
    };
    let vanishing_differentials = hc.degrees().all(|d| hc.diff_mat(d).is_zero());

    let mut analysis = Report::new();
    analysis.record(
        "kernel is the displayed complex",
        (|| {
            kernel.validate().map_err(|e| e.to_string())?;
            inclusion.check().map_err(|e| format!("inclusion: {e}"))?;
            let window = up.degrees().chain(kernel.degrees());
            for d in window {
                let ic = inclusion.comp(d);
                if rank(&ic) != kernel.dim(d) {
                    return Err(format!("degree {d}: inclusion is not injective"));
                }
                if !link.comp(d).mul(&ic).is_zero() {
                    return Err(format!("degree {d}: image not inside the kernel of the link"));
                }
                if kernel.dim(d) != up.dim(d) - rank(&link.comp(d)) {
                    return Err(format!("degree {d}: image smaller than the kernel of the link"));
                }
            }
            Ok(format!(
                "entries B^({tp},0), Z^({tp},j) ⊕ B^({tp},j+1) in degrees {klo}..={khi}"
            ))
        })(),
    );
    analysis.record(
        "homotopy equivalence to H-complex",
        (|| {
            hc.validate().map_err(|e| format!("H-complex: {e}"))?;
            to_h.check().map_err(|e| format!("projection: {e}"))?;
            from_h.check().map_err(|e| format!("inclusion: {e}"))?;
            if !homotopy.verify() {
                return Err("1 - ιπ ≠ Dσ + σD".into());
            }
            if !back.verify() {
                return Err("πι ≠ 1".into());
            }
            Ok(format!("H-differentials vanish: {vanishing_differentials}"))
        })(),
    );
    StageKernel {
        link: n,
        column: tp,
        kernel,
        inclusion,
        h_complex: hc,
        to_h,
        from_h,
        homotopy,
        back,
        vanishing_differentials,
        analysis,
    }
}

impl StageKernel {
    /// Compares the cohomology of the kernel with that of the complex with
    /// entries `H^(t,j)` and zero differentials, degree by degree.
    pub fn matches_vanishing_model(&self) -> std::result::Result<(), String> {
        let dims = cohomology_dims(&self.kernel);
        for (&d, &k) in &dims {
            let h = self.h_complex.dim(d);
            if k != h {
                return Err(format!(
                    "column {}: H^{d} of the kernel has dimension {k}, the vanishing model has {h}",
                    self.column
                ));
            }
        }
        Ok(())
    }
}

/// Verifies `X ≅ holim X^{≥-n} ≅ holim Cot(E^{≥-n}) ≅ Cot(E)` at desk scale.
pub fn verify_left_complete(x: &Complex, ce: &CEData, depth: usize) -> Report {
    let mut r = Report::new();
    let hi = x.hi();
    let tt = truncation_tower(ce, depth);

    // the tower of truncations of X itself
    let truncs: Vec<Complex> = (0..=depth).map(|n| truncate_geq(x, -(n as i64)).0).collect();
    let mut xlinks = Vec::with_capacity(depth);
    let mut xsecs = Vec::with_capacity(depth);
    let mut consistent = Ok(());
    for n in 0..depth {
        let (t, cmp) = truncate_geq(&truncs[n + 1], -(n as i64));
        if !t.same_as(&truncs[n]) && consistent.is_ok() {
            consistent = Err(format!("re-truncating stage {} does not give stage {n}", n + 1));
        }
        let cmp = ChainMap::new_unchecked(
            truncs[n + 1].clone(),
            truncs[n].clone(),
            cmp.window().map(|d| (d, cmp.comp(d))).collect(),
        );
        xlinks.push(cmp);
        xsecs.push(BTreeMap::new());
    }
    r.record(
        "truncations are compatible",
        consistent.map(|_| format!("{} stages", depth + 1)),
    );

    r.record(
        "stage resolutions are quasi-isomorphisms",
        (|| {
            for (n, sce) in tt.stage_ces.iter().enumerate() {
                if sce.base.is_zero() {
                    continue;
                }
                let aug = augmentation(sce);
                aug.check().map_err(|e| format!("stage {n}: {e}"))?;
                if !is_quasi_iso_in(&aug, sce.base.lo()..=sce.base.hi()) {
                    return Err(format!(
                        "stage {n}: X^(≥-{n}) → Cot(E^(≥-{n})) is not a quasi-isomorphism"
                    ));
                }
                if sce.base != truncs[n] && !sce.base.same_as(&truncs[n]) {
                    return Err(format!("stage {n}: resolved complex is not X^(≥-{n})"));
                }
            }
            Ok(format!("{} stages", tt.stage_ces.len()))
        })(),
    );

    r.record(
        "augmentations commute with links",
        (|| {
            for (n, xl) in xlinks.iter().enumerate() {
                let a_up = augmentation(&tt.stage_ces[n + 1]);
                let a_down = augmentation(&tt.stage_ces[n]);
                let lhs = tt.tower.links[n].compose(&a_up);
                let rhs = a_down.compose(xl);
                for d in lhs.window().chain(rhs.window()) {
                    if lhs.comp(d) != rhs.comp(d) {
                        return Err(format!("link {n}, degree {d}"));
                    }
                }
            }
            Ok(format!("{depth} squares"))
        })(),
    );

    let xtower = Tower::new(truncs.clone(), xlinks, xsecs);
    r.record(
        "X is the limit of its truncations",
        match xtower.map_err(|e| e.to_string()).and_then(|t| {
            if !t.saturated {
                return Err("truncation tower of X does not stabilise".to_string());
            }
            Ok(t)
        }) {
            Err(e) => Err(e),
            Ok(t) => holim_presentation(&t).map_err(|e| e.to_string()).and_then(|h| {
                let cone = h.limit_cone.last().expect("at least one stage");
                if cone.is_iso() && truncs[depth].same_as(x) {
                    Ok("limit → X^(≥-N) = X is a degreewise isomorphism".into())
                } else {
                    Err("limit does not reconstruct X".into())
                }
            }),
        },
    );

    r.record(
        "limit of resolutions is Cot(E)",
        match inverse_limit(&tt.tower) {
            Err(e) => Err(e.to_string()),
            Ok(_) => holim_presentation(&tt.tower).map_err(|e| e.to_string()).and_then(|h| {
                let cone = h.limit_cone.last().expect("at least one stage");
                let cot = ce.cot();
                if cone.is_iso() && tt.tower.stages[depth] == cot {
                    Ok("limit → Cot(E^(≥-N)) = Cot(E) is a degreewise isomorphism".into())
                } else {
                    Err("limit differs from Cot(E)".into())
                }
            }),
        },
    );

    let aug = augmentation(ce);
    r.record(
        "X → Cot(E) quasi-isomorphism",
        if x.is_zero() || is_quasi_iso_in(&aug, x.lo()..=hi) {
            Ok(format!("degrees ≤ {hi}"))
        } else {
            Err("augmentation is not a quasi-isomorphism".into())
        },
    );
    r
}
