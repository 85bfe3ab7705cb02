//! Degreewise certificates for central stability, d-step central stability,
//! presentation degree, and the reducing-idempotent isomorphism.

use censtab_linalg::IsoVerdict;
use serde::Serialize;

use crate::category::Degree;
use crate::error::{Error, Result};
use crate::kan::{canonical_map, comparison_map, kan_value_colimit, kan_value_tensor, restriction_map};
use crate::presentation::ModulePresentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeVerdict {
    pub n: Degree,
    #[serde(flatten)]
    pub verdict: IsoVerdict,
    /// Whether the tensor construction agreed with the colimit (when requested).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tensor_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Central,
    DStep,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub check: CheckKind,
    pub category: String,
    pub ring: String,
    #[serde(rename = "N")]
    pub big_n: Degree,
    pub d: usize,
    /// First degree of the truncation window.
    pub window_start: Degree,
    pub n_max: Degree,
    pub degrees: Vec<DegreeVerdict>,
    /// False when a resource cap stopped the run; `degrees` then lists the covered part.
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped_by: Option<String>,
    pub all_iso: bool,
}

impl StabilityReport {
    pub fn first_failure(&self) -> Option<&DegreeVerdict> {
        self.degrees.iter().find(|v| !v.verdict.is_iso())
    }

    pub fn passed(&self) -> bool {
        self.complete && self.all_iso
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Also build the tensor value and test the comparison map tensor → colimit.
    pub cross_check: bool,
}

/// Verdict for the canonical map `(Lan_{lo,hi} Res V)_n → V_n`.
pub fn degree_verdict(p: &ModulePresentation, lo: Degree, hi: Degree, n: Degree, opts: CheckOptions) -> Result<DegreeVerdict> {
    let (colimit, _) = kan_value_colimit(p, lo, hi, n)?;
    let verdict = canonical_map(p, &colimit)?.is_isomorphism()?;
    let tensor_agrees = if opts.cross_check {
        let tensor = kan_value_tensor(p, lo, hi, n)?;
        Some(comparison_map(&tensor, &colimit)?.is_isomorphism()?.is_iso())
    } else {
        None
    };
    Ok(DegreeVerdict { n, verdict, tensor_agrees })
}

fn run_window(
    p: &ModulePresentation,
    check: CheckKind,
    d: usize,
    lo: Degree,
    hi: Degree,
    degrees: impl Iterator<Item = Degree>,
    n_max: Degree,
    opts: CheckOptions,
) -> Result<StabilityReport> {
    let mut out = Vec::new();
    let mut stopped_by = None;
    for n in degrees {
        match degree_verdict(p, lo, hi, n, opts) {
            Ok(v) => out.push(v),
            Err(e) if e.is_resource_limit() => {
                stopped_by = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let all_iso = out.iter().all(|v| v.verdict.is_iso() && v.tensor_agrees != Some(false));
    Ok(StabilityReport {
        check,
        category: p.category.id(),
        ring: p.ring.to_string(),
        big_n: hi,
        d,
        window_start: lo,
        n_max,
        degrees: out,
        complete: stopped_by.is_none(),
        stopped_by,
        all_iso,
    })
}

fn require_clean(p: &ModulePresentation) -> Result<()> {
    let diag = p.validate();
    if !diag.is_clean() {
        return Err(Error::InvalidPresentation(diag.problems.join("; ")));
    }
    Ok(())
}

/// Tests `Ae ⊗_{eAe} eV ≅ V` with `e = e_{0,N}` in degrees `0..=n_max`.
pub fn check_central_stability(p: &ModulePresentation, big_n: Degree, n_max: Degree, opts: CheckOptions) -> Result<StabilityReport> {
    require_clean(p)?;
    run_window(p, CheckKind::Central, 1, 0, big_n, 0..=n_max, n_max, opts)
}

/// Tests the window `e = e_{N-(d-1),N}` in degrees `N-(d-1)..=n_max`.
pub fn check_d_step(p: &ModulePresentation, d: usize, big_n: Degree, n_max: Degree, opts: CheckOptions) -> Result<StabilityReport> {
    require_clean(p)?;
    if d == 0 || big_n + 1 < d {
        return Err(Error::Precondition(format!("d-step check needs d ≥ 1 and N ≥ d - 1, got d = {d}, N = {big_n}")));
    }
    let lo = big_n + 1 - d;
    run_window(p, CheckKind::DStep, d, lo, big_n, lo..=n_max, n_max, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrdAttempt {
    #[serde(rename = "N")]
    pub big_n: Degree,
    pub all_iso: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<DegreeVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrdReport {
    pub category: String,
    pub ring: String,
    #[serde(rename = "N_max")]
    pub big_n_max: Degree,
    pub n_max: Degree,
    /// Least passing `N` within the tested window.
    pub prd: Option<Degree>,
    pub attempts: Vec<PrdAttempt>,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped_by: Option<String>,
}

/// Least `N ≤ N_max` for which central stability holds in degrees `≤ n_max`;
/// every smaller `N` comes with a failing degree.
pub fn empirical_prd(p: &ModulePresentation, big_n_max: Degree, n_max: Degree) -> Result<PrdReport> {
    require_clean(p)?;
    let mut attempts = Vec::new();
    let mut prd = None;
    let mut stopped_by = None;
    for big_n in 0..=big_n_max {
        let r = check_central_stability(p, big_n, n_max, CheckOptions::default())?;
        if !r.complete {
            stopped_by = r.stopped_by.clone();
            break;
        }
        attempts.push(PrdAttempt { big_n, all_iso: r.all_iso, failure: r.first_failure().cloned() });
        if r.all_iso {
            prd = Some(big_n);
            break;
        }
    }
    Ok(PrdReport {
        category: p.category.id(),
        ring: p.ring.to_string(),
        big_n_max,
        n_max,
        prd,
        attempts,
        complete: stopped_by.is_none(),
        stopped_by,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    pub category: String,
    pub ring: String,
    pub m: Degree,
    #[serde(rename = "N")]
    pub big_n: Degree,
    pub n: Degree,
    pub d: usize,
    #[serde(flatten)]
    pub verdict: IsoVerdict,
}

/// Tests `e_n A f ⊗_{fAf} fV → e_n A e ⊗_{eAe} eV` for `e = e_{m,N}`, `f = e_{m+1,N}`.
pub fn check_reducing_idempotent(p: &ModulePresentation, m: Degree, big_n: Degree, n: Degree, d: usize) -> Result<IdempotentReport> {
    require_clean(p)?;
    if !(n > big_n && big_n >= m + d) {
        return Err(Error::Precondition(format!(
            "reducing-idempotent check needs n > N ≥ m + d, got m = {m}, N = {big_n}, n = {n}, d = {d}"
        )));
    }
    let big = kan_value_tensor(p, m, big_n, n)?;
    let small = kan_value_tensor(p, m + 1, big_n, n)?;
    let verdict = restriction_map(&small, &big)?.is_isomorphism()?;
    Ok(IdempotentReport { category: p.category.id(), ring: p.ring.to_string(), m, big_n, n, d, verdict })
}
