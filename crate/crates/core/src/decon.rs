//! Cofiltration certificates by shifted copies of `Q`, hom-vanishing tests
//! and hyper-Ext.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ce::CEData;
use crate::cplx::{
    chain_map_basis, cohomology_dim, cohomology_dims, find_null_homotopies, kernel_complex, random_combination,
    ChainMap, Complex,
};
use crate::error::{Error, Result};
use crate::exactla::{rank, solve, Mat};
use crate::modcat::{free_decomposition, is_injective, jordan_type, Hom, HomSpace, Module};
use crate::report::Report;
use crate::towers::{holim_presentation, verify_split_links, Tower};

/// `C^degree ≅ Q^multiplicity`, i.e. a piece `Q^b[s]` with `s = -degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPiece {
    pub degree: i64,
    pub shift: i64,
    pub multiplicity: usize,
    pub iso: Hom,
}

/// A finite cofiltration of a bounded complex of injectives whose base and
/// successive kernels are products of shifted copies of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofiltrationCertificate {
    pub target: Complex,
    /// `None` for the zero complex.
    pub tower: Option<Tower>,
    /// Stage 0, a single injective in the lowest degree.
    pub base_piece: Option<KernelPiece>,
    /// `kernel_pieces[n]` is the kernel of the link from stage `n + 1`.
    pub kernel_pieces: Vec<KernelPiece>,
    pub prd_levels: Vec<usize>,
}

fn piece(c: &Complex, degree: i64) -> Result<KernelPiece> {
    let (b, iso) = free_decomposition(c.module(degree))?;
    Ok(KernelPiece {
        degree,
        shift: -degree,
        multiplicity: b,
        iso,
    })
}

/// Brutal quotient truncation `σ_{≤top}`: degrees `lo..=top` of `c`.
fn brutal_quotient(c: &Complex, top: i64) -> Complex {
    Complex::from_fn(c.params(), c.lo(), top, |d| c.module(d).clone(), |d| c.diff_mat(d))
}

/// Peels `C` one degree at a time from the top: stage `n` keeps the lowest
/// `n + 1` degrees.
pub fn certify_cofiltered(c: &Complex) -> Result<CofiltrationCertificate> {
    for d in c.degrees() {
        if !is_injective(c.module(d)) {
            return Err(Error::NotInjectiveModule(jordan_type(c.module(d)).0));
        }
    }
    let t = c.trimmed();
    if t.is_zero() {
        return Ok(CofiltrationCertificate {
            target: c.clone(),
            tower: None,
            base_piece: None,
            kernel_pieces: Vec::new(),
            prd_levels: Vec::new(),
        });
    }
    let fld = t.params().field();
    let (lo, hi) = (t.lo(), t.hi());
    let stages: Vec<Complex> = (lo..=hi).map(|top| brutal_quotient(&t, top)).collect();
    let mut links = Vec::new();
    let mut sections = Vec::new();
    for n in 0..stages.len() - 1 {
        let (up, down) = (&stages[n + 1], &stages[n]);
        let comps: BTreeMap<i64, Mat> = down.degrees().map(|d| (d, Mat::identity(fld, down.dim(d)))).collect();
        links.push(ChainMap::new_unchecked(up.clone(), down.clone(), comps.clone()));
        sections.push(comps);
    }
    let mut tower = Tower::new(stages, links, sections)?;
    tower.saturated = true;
    let base_piece = piece(&t, lo)?;
    let kernel_pieces = (lo + 1..=hi).map(|d| piece(&t, d)).collect::<Result<Vec<_>>>()?;
    let mut nonzero = 0usize;
    let prd_levels = (lo..=hi)
        .map(|d| {
            if !t.module(d).is_zero() {
                nonzero += 1;
            }
            nonzero.saturating_sub(1)
        })
        .collect();
    Ok(CofiltrationCertificate {
        target: c.clone(),
        tower: Some(tower),
        base_piece: Some(base_piece),
        kernel_pieces,
        prd_levels,
    })
}

/// `ψ : K → Q^b` is an isomorphism onto the standard free module, with an
/// inverse checked by both composites.
fn check_piece_iso(psi: &Mat, src: &Module, b: usize) -> std::result::Result<(), String> {
    let q = Module::free(src.params(), b);
    if psi.shape() != (q.dim(), src.dim()) {
        return Err(format!(
            "iso has shape {:?}, expected {:?}",
            psi.shape(),
            (q.dim(), src.dim())
        ));
    }
    if psi.mul(src.action()) != q.action().mul(psi) {
        return Err("iso is not R-linear".into());
    }
    let inv = psi.inverse().ok_or("iso is not invertible")?;
    if inv.mul(q.action()) != src.action().mul(&inv) {
        return Err("inverse is not R-linear".into());
    }
    if !psi.mul(&inv).is_identity() || !inv.mul(psi).is_identity() {
        return Err("composites with the inverse are not identities".into());
    }
    Ok(())
}

/// Re-checks a certificate without trusting how it was built.
pub fn verify_certificate(cert: &CofiltrationCertificate) -> Report {
    let mut r = Report::new();
    let c = &cert.target;
    r.record(
        "entries injective",
        match c.degrees().find(|&d| !is_injective(c.module(d))) {
            Some(d) => Err(format!("degree {d} is not free")),
            None => Ok(format!("{} degrees", c.degrees().count())),
        },
    );
    let Some(tower) = &cert.tower else {
        r.record(
            "empty certificate",
            if c.is_zero() && cert.kernel_pieces.is_empty() && cert.base_piece.is_none() {
                Ok("target is zero".into())
            } else {
                Err("no stages for a nonzero target".into())
            },
        );
        return r;
    };

    r.record(
        "stage 0 in Prod S",
        (|| {
            let s0 = &tower.stages[0];
            let bp = cert.base_piece.as_ref().ok_or("missing base piece")?;
            let support: Vec<i64> = s0.degrees().filter(|&d| s0.dim(d) > 0).collect();
            if support.len() > 1 || support.iter().any(|&d| d != bp.degree) {
                return Err(format!("stage 0 is supported in degrees {support:?}"));
            }
            if bp.shift != -bp.degree {
                return Err("shift does not match the degree".into());
            }
            check_piece_iso(bp.iso.mat(), s0.module(bp.degree), bp.multiplicity)?;
            Ok(format!("Q^{}[{}]", bp.multiplicity, bp.shift))
        })(),
    );

    let split = verify_split_links(tower);
    r.record(
        "links split",
        if split.all_passed() {
            Ok(format!("{} links", tower.depth()))
        } else {
            Err(split
                .failures()
                .map(|f| format!("{}: {}", f.name, f.detail))
                .collect::<Vec<_>>()
                .join("; "))
        },
    );

    r.record(
        "kernel pieces",
        (|| {
            if cert.kernel_pieces.len() != tower.depth() {
                return Err(format!(
                    "{} pieces for {} links",
                    cert.kernel_pieces.len(),
                    tower.depth()
                ));
            }
            for (n, (link, p)) in tower.links.iter().zip(&cert.kernel_pieces).enumerate() {
                let (k, incl) = kernel_complex(link);
                let up = &tower.stages[n + 1];
                for d in up.degrees() {
                    let expected = if d == p.degree { up.dim(d) } else { 0 };
                    if k.dim(d) != expected {
                        return Err(format!("link {n}: kernel has dimension {} in degree {d}", k.dim(d)));
                    }
                    if up.dim(d) != k.dim(d) + rank(&link.comp(d)) {
                        return Err(format!("link {n}: degree {d} is not short exact"));
                    }
                }
                if p.shift != -p.degree {
                    return Err(format!("link {n}: shift does not match the degree"));
                }
                if p.iso.src() != up.module(p.degree) {
                    return Err(format!("link {n}: iso has the wrong source"));
                }
                let psi = p.iso.mat().mul(&incl.comp(p.degree));
                check_piece_iso(&psi, k.module(p.degree), p.multiplicity).map_err(|e| format!("link {n}: {e}"))?;
            }
            let summary: Vec<String> = cert
                .kernel_pieces
                .iter()
                .map(|p| format!("Q^{}[{}]", p.multiplicity, p.shift))
                .collect();
            Ok(summary.join(", "))
        })(),
    );

    r.record(
        "limit reconstruction",
        (|| {
            let last = tower.stages.last().expect("nonempty");
            if !last.same_as(c) {
                return Err("last stage differs from the target".into());
            }
            let h = holim_presentation(tower).map_err(|e| e.to_string())?;
            if !h.limit_cone.last().expect("nonempty").is_iso() {
                return Err("limit does not map isomorphically onto the last stage".into());
            }
            Ok("limit ≅ target".into())
        })(),
    );

    r.record(
        "prd levels",
        (|| {
            if cert.prd_levels.len() != tower.stages.len() {
                return Err("one level per stage expected".into());
            }
            let mut nonzero = 0usize;
            for (n, (s, &lvl)) in tower.stages.iter().zip(&cert.prd_levels).enumerate() {
                nonzero = s.degrees().filter(|&d| s.dim(d) > 0).count();
                if lvl != nonzero.saturating_sub(1) || lvl > n {
                    return Err(format!("stage {n}: level {lvl}"));
                }
            }
            Ok(format!("top level {}", nonzero.saturating_sub(1)))
        })(),
    );
    r
}

/// Samples chain maps `N → I` and checks each is null-homotopic with a
/// verified witness.
pub fn hom_vanishing_test(n: &Complex, i: &Complex, samples: usize, seed: u64) -> Result<Report> {
    let dims = cohomology_dims(n);
    if let Some((&degree, &dim)) = dims.iter().find(|&(_, &h)| h != 0) {
        return Err(Error::NotAcyclic { degree, dim });
    }
    if let Some(d) = i.degrees().find(|&d| !is_injective(i.module(d))) {
        return Err(Error::NotInjectiveModule(jordan_type(i.module(d)).0));
    }
    let mut r = Report::new();
    let basis = chain_map_basis(n, i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maps: Vec<ChainMap> = (0..samples)
        .map(|_| random_combination(n, i, &basis, &mut rng))
        .collect();
    r.record(
        "sampled maps are chain maps",
        maps.iter()
            .try_for_each(|f| f.check().map_err(|e| e.to_string()))
            .map(|_| format!("{} samples from a {}-dimensional space", maps.len(), basis.len())),
    );
    let witnesses = find_null_homotopies(&maps);
    let verified = witnesses
        .iter()
        .filter(|w| w.as_ref().is_some_and(|h| h.verify()))
        .count();
    let nonzero = maps.iter().filter(|f| !f.is_zero()).count();
    r.record(
        "sampled maps null-homotopic",
        if verified == maps.len() {
            Ok(format!(
                "{verified}/{} witnesses verified ({nonzero} nonzero maps)",
                maps.len()
            ))
        } else {
            Err(format!(
                "only {verified}/{} maps have a verified null-homotopy",
                maps.len()
            ))
        },
    );
    Ok(r)
}

/// Hyper-Ext of `M` into `X`, computed from `Hom_R(M, Cot(E))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtReport {
    pub source: Module,
    pub target_window: (i64, i64),
    pub depth: usize,
    /// `(n, dim Ext^n)` for every reported degree.
    pub dims: Vec<(i64, usize)>,
    /// The complex of hom spaces, as vector spaces (`m = 1`).
    pub hom_complex: Complex,
}

/// Smallest `jmax` for which `derived_hom` at `depth` is valid on `x`.
pub fn required_jmax(x: &Complex, depth: usize) -> usize {
    if x.is_zero() {
        return 0;
    }
    let span = (x.hi() - x.lo()) as usize;
    let reach = (depth as i64 - x.lo() + 1).max(0) as usize;
    (depth + span + 3).max(reach)
}

/// Matrix of post-composition `φ ↦ d ∘ φ` between hom-space bases.
fn post_compose_matrix(from: &HomSpace, to: &HomSpace, d: &Mat) -> Mat {
    let fld = d.field();
    let rows = to.src().dim() * to.dst().dim();
    let cols: Vec<Mat> = to.basis().iter().map(|b| Mat::column(fld, &b.vec())).collect();
    let refs: Vec<&Mat> = cols.iter().collect();
    let basis = Mat::hstack(fld, rows, &refs);
    let imgs: Vec<Mat> = from.basis().iter().map(|b| Mat::column(fld, &d.mul(b).vec())).collect();
    let irefs: Vec<&Mat> = imgs.iter().collect();
    let rhs = Mat::hstack(fld, rows, &irefs);
    solve(&basis, &rhs)
        .expect("shapes agree")
        .expect("post-composition stays in the hom space")
}

pub fn derived_hom(m: &Module, x: &Complex, ce: &CEData, depth: usize) -> Result<ExtReport> {
    let params = x.params();
    let vs = params.vector_spaces();
    let need = required_jmax(x, depth);
    if ce.jmax < need {
        return Err(Error::DepthExceedsWindow {
            depth: depth as i64,
            required_jmax: need,
        });
    }
    let cot = ce.cot();
    let spaces: BTreeMap<i64, HomSpace> = cot.degrees().map(|n| (n, HomSpace::new(m, cot.module(n)))).collect();
    let hom_complex = Complex::from_fn(
        vs,
        cot.lo(),
        cot.hi(),
        |n| Module::free(vs, spaces[&n].dim()),
        |n| post_compose_matrix(&spaces[&n], &spaces[&(n + 1)], &cot.diff_mat(n)),
    );
    let start = if x.is_zero() { 0 } else { x.lo().min(0) };
    let dims = (start..=depth as i64)
        .map(|n| (n, cohomology_dim(&hom_complex, n)))
        .collect();
    Ok(ExtReport {
        source: m.clone(),
        target_window: (x.lo(), x.hi()),
        depth,
        dims,
        hom_complex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ce::build_ce;
    use crate::cplx::{mapping_cone, shift};
    use crate::gen::random_complex;
    use crate::modcat::{CatParams, Hom};

    fn params(p: u64, m: usize) -> CatParams {
        CatParams::from_ints(p, m).unwrap()
    }

    fn r_x_r(p: CatParams, lo: i64) -> Complex {
        let r = Module::regular(p);
        let x = Hom::new(r.clone(), r.clone(), r.action().clone()).unwrap();
        Complex::from_homs(lo, &[x]).unwrap()
    }

    #[test]
    fn certificate_of_single_q() {
        let p = params(3, 2);
        let c = Complex::single(Module::regular(p), 0);
        let cert = certify_cofiltered(&c).unwrap();
        assert_eq!(cert.tower.as_ref().unwrap().stages.len(), 1);
        assert_eq!(cert.prd_levels, vec![0]);
        assert_eq!(cert.base_piece.as_ref().unwrap().multiplicity, 1);
        assert!(verify_certificate(&cert).all_passed());
    }

    #[test]
    fn certificate_of_zero() {
        let p = params(3, 2);
        let cert = certify_cofiltered(&Complex::zero(p)).unwrap();
        assert!(cert.tower.is_none() && cert.kernel_pieces.is_empty());
        assert!(verify_certificate(&cert).all_passed());
    }

    #[test]
    fn non_injective_target_rejected() {
        let p = params(3, 2);
        let c = Complex::single(Module::simple(p), 0);
        assert_eq!(certify_cofiltered(&c), Err(Error::NotInjectiveModule(vec![1])));
    }

    #[test]
    fn certificate_of_cot_of_r_x_r() {
        let p = params(3, 2);
        let ce = build_ce(&r_x_r(p, 0), 3).unwrap();
        let cot = ce.cot();
        let cert = certify_cofiltered(&cot).unwrap();
        let rep = verify_certificate(&cert);
        assert!(rep.all_passed(), "{rep:?}");
        // multiplicities read from the grid: Σ_(i+j=d) dim E^(i,j) / m
        for pc in &cert.kernel_pieces {
            let from_grid: usize = ce
                .bicomplex
                .cot_layout(pc.degree)
                .iter()
                .map(|&(i, j, _)| ce.bicomplex.entry(i, j).dim())
                .sum();
            assert_eq!(pc.multiplicity * 2, from_grid);
        }
        let levels = &cert.prd_levels;
        assert_eq!(levels[0], 0);
        assert!(levels.windows(2).all(|w| w[1] <= w[0] + 1));
    }

    #[test]
    fn corrupted_certificates_fail() {
        let p = params(3, 2);
        let ce = build_ce(&r_x_r(p, 0), 3).unwrap();
        let cert = certify_cofiltered(&ce.cot()).unwrap();
        let mut bad = cert.clone();
        let k = &mut bad.kernel_pieces[0];
        k.iso = Hom::zero(k.iso.src(), k.iso.dst());
        assert!(!verify_certificate(&bad).get("kernel pieces").unwrap().passed);
        let mut bad = cert.clone();
        bad.tower.as_mut().unwrap().stages.reverse();
        assert!(!verify_certificate(&bad).get("limit reconstruction").unwrap().passed);
    }

    #[test]
    fn vanishing_on_cone_of_identity() {
        let p = params(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let y = random_complex(p, 0, 2, 2, &mut rng);
        let n = mapping_cone(&y.identity()).complex;
        let ce = build_ce(&r_x_r(p, 0), 3).unwrap();
        let rep = hom_vanishing_test(&n, &ce.cot(), 5, 1).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        let rep = hom_vanishing_test(&Complex::zero(p), &ce.cot(), 5, 1).unwrap();
        assert!(rep.all_passed());
    }

    #[test]
    fn vanishing_on_identity_of_r() {
        let p = params(3, 2);
        let r = Module::regular(p);
        let n = shift(&Complex::from_homs(0, &[r.identity()]).unwrap(), -1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_complex(p, 0, 2, 3, &mut rng);
        let ce = build_ce(&x, 5).unwrap();
        let rep = hom_vanishing_test(&n, &ce.cot(), 6, 2).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn vanishing_rejects_non_acyclic_source() {
        let p = params(3, 2);
        let ce = build_ce(&r_x_r(p, 0), 3).unwrap();
        let err = hom_vanishing_test(&r_x_r(p, 0), &ce.cot(), 1, 0).unwrap_err();
        assert_eq!(err, Error::NotAcyclic { degree: 0, dim: 1 });
    }

    #[test]
    fn ext_of_simple_module() {
        let p = params(3, 2);
        let k = Module::simple(p);
        let x = Complex::single(k.clone(), 0);
        let ce = build_ce(&x, required_jmax(&x, 5)).unwrap();
        let ext = derived_hom(&k, &x, &ce, 5).unwrap();
        assert_eq!(ext.dims, (0..=5).map(|n| (n, 1)).collect::<Vec<_>>());
        let wider = build_ce(&x, required_jmax(&x, 5) + 2).unwrap();
        assert_eq!(derived_hom(&k, &x, &wider, 5).unwrap().dims, ext.dims);
    }

    #[test]
    fn ext_from_free_module_is_hom() {
        let p = params(5, 3);
        let y = Module::from_jordan(p, &[3, 1, 1]);
        let x = Complex::single(y.clone(), 0);
        let ce = build_ce(&x, required_jmax(&x, 3)).unwrap();
        let ext = derived_hom(&Module::regular(p), &x, &ce, 3).unwrap();
        assert_eq!(ext.dims, vec![(0, 5), (1, 0), (2, 0), (3, 0)]);
    }

    #[test]
    fn ext_into_zero_and_window_errors() {
        let p = params(3, 2);
        let z = Complex::zero(p);
        let ce = build_ce(&z, 0).unwrap();
        let ext = derived_hom(&Module::simple(p), &z, &ce, 2).unwrap();
        assert!(ext.dims.iter().all(|&(_, d)| d == 0));
        let x = Complex::single(Module::simple(p), 0);
        let ce = build_ce(&x, 4).unwrap();
        assert_eq!(
            derived_hom(&Module::simple(p), &x, &ce, 5),
            Err(Error::DepthExceedsWindow {
                depth: 5,
                required_jmax: 8
            })
        );
    }
}
