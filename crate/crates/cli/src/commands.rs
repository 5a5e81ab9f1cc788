//! The four subcommands, as functions from input bytes and options to a
//! report.

use std::time::Instant;

use cecot_core::ce::{build_ce, verify_ce, verify_ce_plus, CEData};
use cecot_core::cplx::{cohomology_dims, mapping_cone};
use cecot_core::decon::{
    certify_cofiltered, derived_hom, hom_vanishing_test, required_jmax, verify_certificate, KernelPiece,
};
use cecot_core::gen::{random_complex, random_two_term_exact};
use cecot_core::modcat::{CatParams, Module};
use cecot_core::towers::{
    default_depth, holim_presentation, stage_kernel, truncation_tower, verify_left_complete, verify_split_links,
};
use cecot_core::{Complex, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::format::{ComplexSpec, InstanceFile, Metadata, ReportFile, Timing, REPORT_FORMAT};

/// Exit status for a finished report: 0 if every check passed, 1 otherwise.
pub fn exit_code(r: &ReportFile) -> i32 {
    if r.passed {
        0
    } else {
        1
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let h = Sha256::digest(bytes);
    let hex: String = h.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// `jmax` used when none is given: the window `hi - lo` plus 3.
pub fn default_jmax(x: &Complex) -> usize {
    if x.is_zero() {
        3
    } else {
        (x.hi() - x.lo()) as usize + 3
    }
}

fn load(input: &[u8]) -> Result<(InstanceFile, Complex), CliError> {
    let text = std::str::from_utf8(input).map_err(|e| CliError::Parse(format!("input is not UTF-8: {e}")))?;
    let inst = InstanceFile::parse(text)?;
    let x = inst.to_complex()?;
    Ok((inst, x))
}

struct Clock {
    enabled: bool,
    entries: Vec<Timing>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock {
            enabled,
            entries: Vec::new(),
        }
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.entries.push(Timing {
                stage: stage.into(),
                ms: start.elapsed().as_millis() as u64,
            });
        }
        out
    }

    fn finish(self) -> Option<Vec<Timing>> {
        self.enabled.then_some(self.entries)
    }
}

fn finish(command: &str, input: &[u8], parameters: Value, report: Report, clock: Clock, payload: Value) -> ReportFile {
    ReportFile {
        format: REPORT_FORMAT.into(),
        command: command.into(),
        input_digest: digest(input),
        parameters,
        passed: report.all_passed(),
        checks: report.checks,
        timings: clock.finish(),
        payload: Some(payload),
    }
}

fn dims_table(x: &Complex) -> Value {
    if x.is_zero() {
        return json!([]);
    }
    x.degrees().map(|n| json!([n, x.dim(n)])).collect()
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub jmax: Option<usize>,
    pub tower_depth: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jmax: None,
            tower_depth: None,
            seed: 0,
            samples: 5,
            timings: false,
        }
    }
}

/// Runs the full verification pipeline on an instance.
pub fn cmd_verify(input: &[u8], opts: &VerifyOptions) -> Result<ReportFile, CliError> {
    let (_, x) = load(input)?;
    let params = x.params();
    let jmax = opts.jmax.unwrap_or_else(|| default_jmax(&x));
    let depth = opts.tower_depth.unwrap_or_else(|| default_depth(&x));
    let mut clock = Clock::new(opts.timings);
    let mut r = Report::new();

    let ce = clock.time("build_ce", || build_ce(&x, jmax))?;
    clock.time("verify_ce", || r.absorb("ce: ", verify_ce(&ce)));
    clock.time("verify_ce_plus", || r.absorb("ce+: ", verify_ce_plus(&ce)));

    let tt = clock.time("truncation_tower", || truncation_tower(&ce, depth));
    clock.time("verify_split_links", || {
        r.absorb("tower: ", verify_split_links(&tt.tower))
    });
    clock.time("holim_presentation", || match holim_presentation(&tt.tower) {
        Ok(h) => r.absorb("holim: ", h.verify()),
        Err(e) => r.push("holim: presentation", false, e.to_string()),
    });

    let mut kernels = Vec::new();
    clock.time("stage_kernel", || {
        for n in 0..tt.tower.depth() {
            let sk = stage_kernel(&tt, n);
            let model = sk.matches_vanishing_model();
            kernels.push(json!({
                "link": n,
                "column": sk.column,
                "vanishing_differentials": sk.vanishing_differentials,
                "matches_vanishing_model": model.is_ok(),
                "detail": model.err().unwrap_or_default(),
            }));
            r.absorb(&format!("stage kernel {n}: "), sk.analysis);
        }
    });

    clock.time("verify_left_complete", || {
        r.absorb("left-complete: ", verify_left_complete(&x, &ce, depth))
    });

    let cot = ce.cot();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let two_lo = if cot.is_zero() {
        0
    } else {
        rng.gen_range(cot.lo()..=cot.hi())
    };
    let sources = [
        ("cone of identity", mapping_cone(&x.identity()).complex),
        ("two-term exact", random_two_term_exact(params, two_lo, 4, &mut rng)),
    ];
    clock.time("hom_vanishing_test", || {
        for (label, n) in &sources {
            match hom_vanishing_test(n, &cot, opts.samples, opts.seed) {
                Ok(rep) => r.absorb(&format!("hom-vanishing ({label}): "), rep),
                Err(e) => r.push(format!("hom-vanishing ({label})"), false, e.to_string()),
            }
        }
    });

    let parameters = json!({
        "jmax": jmax,
        "tower_depth": depth,
        "seed": opts.seed,
        "samples": opts.samples,
    });
    let payload = json!({
        "cohomology": cohomology_dims(&x).into_iter().map(|(n, d)| json!([n, d])).collect::<Vec<_>>(),
        "cot_dims": dims_table(&cot),
        "valid_top": if x.is_zero() { Value::Null } else { json!(ce.valid_top()) },
        "tower_saturated": tt.tower.saturated,
        "stage_kernels": kernels,
    });
    Ok(finish("verify", input, parameters, r, clock, payload))
}

#[derive(Clone, Debug, Default)]
pub struct CertifyOptions {
    pub jmax: Option<usize>,
    pub timings: bool,
}

fn piece_json(p: &KernelPiece) -> Value {
    json!({
        "degree": p.degree,
        "shift": p.shift,
        "multiplicity": p.multiplicity,
        "iso": p.iso.mat().to_rows(),
    })
}

/// Builds `Cot(E)` and emits a verified cofiltration certificate for it.
pub fn cmd_certify(input: &[u8], opts: &CertifyOptions) -> Result<ReportFile, CliError> {
    let (_, x) = load(input)?;
    let jmax = opts.jmax.unwrap_or_else(|| default_jmax(&x));
    let mut clock = Clock::new(opts.timings);
    let ce: CEData = clock.time("build_ce", || build_ce(&x, jmax))?;
    let cot = ce.cot().trimmed();
    let cert = clock.time("certify_cofiltered", || certify_cofiltered(&cot))?;
    let report = clock.time("verify_certificate", || verify_certificate(&cert));

    let stages: Vec<Value> = cert
        .tower
        .as_ref()
        .map(|t| {
            t.stages
                .iter()
                .map(|s| json!({ "lo": s.lo(), "dims": dims_table(s) }))
                .collect()
        })
        .unwrap_or_default();
    let payload = json!({
        "target": serde_json::to_value(ComplexSpec::from_complex(&cot)).expect("serializes"),
        "stages": stages,
        "base_piece": cert.base_piece.as_ref().map(piece_json),
        "kernel_pieces": cert.kernel_pieces.iter().map(piece_json).collect::<Vec<_>>(),
        "prd_levels": cert.prd_levels,
    });
    Ok(finish(
        "certify",
        input,
        json!({ "jmax": jmax }),
        report,
        clock,
        payload,
    ))
}

/// Parses `Q`, `k` or a partition such as `2,1` into a module.
pub fn parse_module_spec(params: CatParams, spec: &str) -> Result<Module, CliError> {
    let s = spec.trim();
    match s {
        "Q" | "R" => return Ok(Module::regular(params)),
        "k" => return Ok(Module::simple(params)),
        "0" => return Ok(Module::zero(params)),
        _ => {}
    }
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Argument(format!("module spec {spec:?} is not Q, k or a partition like 2,1")))?;
    if let Some(&bad) = parts.iter().find(|&&b| b == 0 || b > params.m()) {
        return Err(CliError::Argument(format!(
            "Jordan block of size {bad} is not in 1..={}",
            params.m()
        )));
    }
    Ok(Module::from_jordan(params, &parts))
}

#[derive(Clone, Debug)]
pub struct ExtOptions {
    pub module: String,
    pub depth: usize,
    pub jmax: Option<usize>,
    pub timings: bool,
}

/// Hyper-Ext dimensions of a module into the instance complex.
pub fn cmd_ext(input: &[u8], opts: &ExtOptions) -> Result<ReportFile, CliError> {
    let (_, x) = load(input)?;
    let m = parse_module_spec(x.params(), &opts.module)?;
    let jmax = opts.jmax.unwrap_or_else(|| required_jmax(&x, opts.depth));
    let mut clock = Clock::new(opts.timings);
    let ce = clock.time("build_ce", || build_ce(&x, jmax))?;
    let ext = clock.time("derived_hom", || derived_hom(&m, &x, &ce, opts.depth))?;
    let mut r = Report::new();
    r.record(
        "hom complex valid",
        ext.hom_complex
            .validate()
            .map(|_| "d² = 0".to_string())
            .map_err(|e| e.to_string()),
    );
    r.record(
        "window covers depth",
        Ok(format!("jmax {jmax} ≥ required {}", required_jmax(&x, opts.depth))),
    );
    let payload = json!({
        "module": cecot_core::modcat::jordan_type(&m).0,
        "target_window": if x.is_zero() { Value::Null } else { json!([x.lo(), x.hi()]) },
        "ext": ext.dims.iter().map(|&(n, d)| json!({ "degree": n, "dim": d })).collect::<Vec<_>>(),
    });
    let parameters = json!({ "module": opts.module, "depth": opts.depth, "jmax": jmax });
    Ok(finish("ext", input, parameters, r, clock, payload))
}

#[derive(Clone, Debug)]
pub struct RandomOptions {
    pub p: u64,
    pub m: usize,
    pub lo: i64,
    /// `hi - lo`; window 0 is a single module.
    pub window: usize,
    pub maxdim: usize,
    pub seed: u64,
}

/// A seeded random instance.
pub fn cmd_random(opts: &RandomOptions) -> Result<InstanceFile, CliError> {
    let params = CatParams::from_ints(opts.p, opts.m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let x = random_complex(params, opts.lo, opts.window + 1, opts.maxdim, &mut rng);
    let meta = Metadata {
        label: Some(format!(
            "random p={} m={} lo={} window={} maxdim={}",
            opts.p, opts.m, opts.lo, opts.window, opts.maxdim
        )),
        seed: Some(opts.seed),
    };
    Ok(InstanceFile::from_complex(&x, Some(meta)))
}
