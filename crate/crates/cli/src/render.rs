use std::fmt::Write;

use censtab_core::relations::RelationsReport;
use censtab_core::stability::{CheckKind, IdempotentReport, PrdReport, StabilityReport};
use censtab_linalg::{Int, IsoVerdict};
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

pub enum Report {
    HomStat(Value),
    Stability(StabilityReport),
    Prd(PrdReport),
    Relations(RelationsReport),
    Idempotent(IdempotentReport),
    Snf(Value),
}

impl Report {
    pub fn to_json(&self, command: &str) -> Value {
        let body = match self {
            Report::HomStat(v) | Report::Snf(v) => v.clone(),
            Report::Stability(r) => json!(r),
            Report::Prd(r) => json!(r),
            Report::Relations(r) => json!(r),
            Report::Idempotent(r) => json!(r),
        };
        let mut doc = json!({"schema": SCHEMA, "command": command});
        if let (Value::Object(doc), Value::Object(body)) = (&mut doc, body) {
            doc.extend(body);
        }
        doc
    }

    pub fn to_human(&self) -> String {
        match self {
            Report::HomStat(v) => hom_stat(v),
            Report::Stability(r) => stability(r),
            Report::Prd(r) => prd(r),
            Report::Relations(r) => relations(r),
            Report::Idempotent(r) => idempotent(r),
            Report::Snf(v) => snf(v),
        }
    }
}

fn verdict_cells(v: &IsoVerdict) -> (String, String, String) {
    match v {
        IsoVerdict::Iso => ("iso".into(), "0".into(), "0".into()),
        IsoVerdict::NotIso { kernel, cokernel } => ("NOT ISO".into(), group(kernel), group(cokernel)),
    }
}

/// `ℤ^2 ⊕ ℤ/2`-style rendering of invariant factors.
fn group(factors: &[Int]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    let free = factors.iter().filter(|x| x.is_zero()).count();
    let mut parts = Vec::new();
    if free > 0 {
        parts.push(if free == 1 { "free".to_string() } else { format!("free^{free}") });
    }
    parts.extend(factors.iter().filter(|x| !x.is_zero()).map(|x| format!("/{x}")));
    parts.join(" + ")
}

fn result_line(out: &mut String, passed: bool, complete: bool, stopped_by: Option<&String>) {
    if let Some(why) = stopped_by {
        let _ = writeln!(out, "stopped early: {why}");
    }
    let word = if !complete { "INCOMPLETE" } else if passed { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "result: {word}");
}

fn hom_stat(v: &Value) -> String {
    let mut out = format!("hom-set sizes for {}\n", v["category"].as_str().unwrap_or("?"));
    let _ = writeln!(out, "{:>3} {:>3} {:>10}", "m", "n", "|hom|");
    for row in v["hom_sizes"].as_array().into_iter().flatten() {
        let num = |k: &str| row[k].as_u64().unwrap_or(0);
        let _ = writeln!(out, "{:>3} {:>3} {:>10}", num("m"), num("n"), num("size"));
    }
    if let Some(why) = v["stopped_by"].as_str() {
        let _ = writeln!(out, "stopped early: {why}");
    }
    out
}

fn stability(r: &StabilityReport) -> String {
    let mut out = String::new();
    let what = match r.check {
        CheckKind::Central => "central stability".to_string(),
        CheckKind::DStep => format!("{}-step central stability", r.d),
    };
    let _ = writeln!(
        out,
        "{what} of a {} module over {}: window [{}, {}], degrees {}..={}",
        r.category, r.ring, r.window_start, r.big_n, r.window_start.min(r.n_max), r.n_max
    );
    let cross = r.degrees.iter().any(|v| v.tensor_agrees.is_some());
    let _ = write!(out, "{:>3}  {:<8} {:<16} {:<16}", "n", "verdict", "kernel", "cokernel");
    if cross {
        let _ = write!(out, " tensor");
    }
    out.push('\n');
    for v in &r.degrees {
        let (verdict, k, c) = verdict_cells(&v.verdict);
        let _ = write!(out, "{:>3}  {verdict:<8} {k:<16} {c:<16}", v.n);
        if let Some(t) = v.tensor_agrees {
            let _ = write!(out, " {}", if t { "agrees" } else { "DIFFERS" });
        }
        out.push('\n');
    }
    result_line(&mut out, r.all_iso, r.complete, r.stopped_by.as_ref());
    out
}

fn prd(r: &PrdReport) -> String {
    let mut out = format!("empirical presentation degree of a {} module over {} (N ≤ {}, n ≤ {})\n", r.category, r.ring, r.big_n_max, r.n_max);
    for a in &r.attempts {
        match &a.failure {
            None => {
                let _ = writeln!(out, "  N = {}: iso in all degrees", a.big_n);
            }
            Some(f) => {
                let (_, k, c) = verdict_cells(&f.verdict);
                let _ = writeln!(out, "  N = {}: not iso in degree {} (kernel {k}, cokernel {c})", a.big_n, f.n);
            }
        }
    }
    match r.prd {
        Some(p) => {
            let _ = writeln!(out, "prd = {p}");
        }
        None => {
            let _ = writeln!(out, "prd > {}", r.big_n_max);
        }
    }
    result_line(&mut out, r.prd.is_some(), r.complete, r.stopped_by.as_ref());
    out
}

fn relations(r: &RelationsReport) -> String {
    let mut out = format!("relations of {} in degree ≤ {}, n ≤ {}\n", r.category, r.d, r.n_max);
    if !r.generation.is_empty() {
        let _ = writeln!(
            out,
            "{:>3} {:>3} {:<5} {:<5} {:>8} {:>6} {:>6}  verdict",
            "m", "n", "ring", "onto", "rank Ã", "Ĩ gens", "rhs"
        );
        for v in &r.generation {
            let mut verdict = (if v.passed { "pass" } else { "FAIL" }).to_string();
            if let Some(sat) = v.saturated_equal {
                let _ = write!(verdict, " (saturated: {})", if sat { "equal" } else { "differ" });
            }
            let _ = writeln!(
                out,
                "{:>3} {:>3} {:<5} {:<5} {:>8} {:>6} {:>6}  {verdict}",
                v.m,
                v.n,
                v.ring,
                if v.surjective { "yes" } else { "NO" },
                v.a_tilde_rank,
                v.lhs_generators,
                v.rhs_generators
            );
        }
        for (m, n) in &r.ring_discrepancies {
            let _ = writeln!(out, "rings disagree at ({m},{n})");
        }
    }
    if let Some(ci) = &r.condition_i {
        let _ = writeln!(out, "condition (i): {} over {} triples", if ci.passed { "pass" } else { "FAIL" }, ci.triples_checked);
        for f in &ci.failures {
            let _ = writeln!(out, "  ({},{},{}): {} is not a composite", f.m, f.l, f.n, f.unhit.name);
        }
    }
    for v in &r.condition_ii {
        let _ = write!(out, "condition (ii) at ({},{}): ", v.m, v.n);
        match &v.witness {
            None => {
                let _ = writeln!(out, "pass over {} quadruples", v.quadruples_checked);
            }
            Some(w) => {
                let _ = writeln!(
                    out,
                    "FAIL, α₁ = {}, α₂ = {}, β₁ = {}, β₂ = {} admit no γ, δ₁, δ₂",
                    w.alpha1.name, w.alpha2.name, w.beta1.name, w.beta2.name
                );
            }
        }
    }
    result_line(&mut out, r.passed, r.complete, r.stopped_by.as_ref());
    out
}

fn idempotent(r: &IdempotentReport) -> String {
    let (verdict, k, c) = verdict_cells(&r.verdict);
    let mut out = format!(
        "reducing idempotent for a {} module over {}: m = {}, N = {}, n = {}, d = {}\n",
        r.category, r.ring, r.m, r.big_n, r.n, r.d
    );
    let _ = writeln!(out, "restriction map: {verdict} (kernel {k}, cokernel {c})");
    result_line(&mut out, r.verdict.is_iso(), true, None);
    out
}

fn snf(v: &Value) -> String {
    let diag: Vec<String> = v["diagonal"].as_array().into_iter().flatten().map(|x| x.to_string().trim_matches('"').to_string()).collect();
    let mut out = format!("ring {}, {}×{}, rank {}\n", v["ring"].as_str().map(str::to_string).unwrap_or_else(|| v["ring"].to_string()), v["rows"], v["cols"], v["rank"]);
    let _ = writeln!(out, "D = diag({})", diag.join(","));
    if v.get("u").is_some() {
        let _ = writeln!(out, "U = {}", v["u"]);
        let _ = writeln!(out, "V = {}", v["v"]);
    }
    out
}
