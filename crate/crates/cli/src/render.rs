use kropina_core::kropina::Warning;
use kropina_core::report::{Check, Report};
use kropina_core::{FlagCurvatureResult, Vector};
use serde_json::{json, Value};

pub fn check_json(c: &Check) -> Value {
    json!({
        "name": c.name,
        "status": c.status.as_str(),
        "residual": c.residual,
        "threshold": c.threshold,
        "detail": c.detail,
    })
}

pub fn report_json(r: &Report) -> Value {
    Value::Array(r.checks.iter().map(check_json).collect())
}

pub fn warning_str(w: Warning) -> &'static str {
    match w {
        Warning::NegativeBeta => "negative <Y,X>: outside the Finsler cone",
        Warning::NotBiInvariant => "bi-invariant formula used on a metric that is not bi-invariant",
    }
}

fn coords(v: &Vector) -> String {
    let parts: Vec<String> = v.as_slice().iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn result_json(r: &FlagCurvatureResult) -> Value {
    json!({
        "y": r.flag.y.as_slice(),
        "u": r.flag.u.as_slice(),
        "beta_y": r.beta_y,
        "beta_u": r.beta_u,
        "r_dot_x": r.r_dot_x,
        "r_dot_u": r.r_dot_u,
        "r_dot_y": r.r_dot_y,
        "k_direct": r.k_direct,
        "k_direct_fd": r.k_direct_fd,
        "k_theorem_consistent": r.k_theorem_consistent,
        "k_theorem_printed": r.k_theorem_printed,
        "residual_consistent_vs_direct": r.residual_consistent_vs_direct,
        "residual_printed_vs_direct": r.residual_printed_vs_direct,
        "chain_residual": r.chain_residual,
        "warnings": r.warnings.iter().map(|w| warning_str(*w)).collect::<Vec<_>>(),
    })
}

pub fn result_text(r: &FlagCurvatureResult) -> String {
    let mut rows: Vec<(&str, String)> = vec![
        ("Y (orthonormalized)", coords(&r.flag.y)),
        ("U (orthonormalized)", coords(&r.flag.u)),
        ("<Y,X>", format!("{:.12}", r.beta_y)),
        ("<U,X>", format!("{:.12}", r.beta_u)),
        ("k_direct", format!("{:.12}", r.k_direct)),
        ("k_direct_fd", format!("{:.12}", r.k_direct_fd)),
        ("k_theorem_consistent", format!("{:.12}", r.k_theorem_consistent)),
        ("k_theorem_printed", format!("{:.12}", r.k_theorem_printed)),
        (
            "residual consistent-direct",
            format!("{:.3e}", r.residual_consistent_vs_direct),
        ),
        (
            "residual printed-direct",
            format!("{:.3e}", r.residual_printed_vs_direct),
        ),
    ];
    if let Some(c) = r.chain_residual {
        rows.push(("chain residual", format!("{c:.3e}")));
    }
    for w in &r.warnings {
        rows.push(("warning", warning_str(*w).to_string()));
    }
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<28} {v}\n"));
    }
    out
}
