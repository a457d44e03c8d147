//! Human-readable reports: dimension tables in the familiar layout, the
//! stopping verdict, bases and roots.

use realvar_core::pp::{Outcome, SolveResult, StopKind};
use realvar_core::Mode;

fn fmt_root(coords: &[(f64, f64)]) -> String {
    let parts: Vec<String> = coords
        .iter()
        .map(|&(re, im)| {
            if im.abs() > 1e-9 {
                format!("{:.6}{:+.6}i", re, im)
            } else {
                format!("{:.6}", re)
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

/// Render the per-order dimension tables plus the outcome.
pub fn render(result: &SolveResult) -> String {
    let mut out = String::new();
    let max_s = result
        .iterations
        .iter()
        .map(|it| it.t + 1)
        .max()
        .unwrap_or(0);

    let label_g = |t: usize| format!("dim pi_s(G_{}^\u{22a5})", t);
    let label_gp = |t: usize| format!("dim pi_s((G_{}+)^\u{22a5})", t);
    let width = result
        .iterations
        .iter()
        .map(|it| label_gp(it.t).chars().count())
        .max()
        .unwrap_or(10)
        .max(8);

    out.push_str(&format!("{:>w$} |", "s =", w = width));
    for s in 0..=max_s {
        out.push_str(&format!(" {:>4}", s));
    }
    out.push('\n');
    out.push_str(&format!("{}-+-{}\n", "-".repeat(width), "-".repeat(5 * (max_s + 1))));

    for it in &result.iterations {
        let mut line = format!("{:>w$} |", label_g(it.t), w = width);
        for s in 0..=max_s {
            match it.table.dims_g.get(s) {
                Some(v) => line.push_str(&format!(" {:>4}", v)),
                None => line.push_str(&format!(" {:>4}", "\u{2014}")),
            }
        }
        out.push_str(&line);
        out.push('\n');
        let mut line = format!("{:>w$} |", label_gp(it.t), w = width);
        for s in 0..=max_s {
            match it.table.dims_gplus.get(s) {
                Some(v) => line.push_str(&format!(" {:>4}", v)),
                None => line.push_str(&format!(" {:>4}", "\u{2014}")),
            }
        }
        out.push_str(&line);
        out.push('\n');
        if !it.table.consistent {
            out.push_str("    (numerically inconsistent row: kernel noise at this order)\n");
        }
        if let Some(g) = &it.generic {
            out.push_str(&format!(
                "    rank M_s(L*): {:?}   (face reductions {}, interior-point iterations {})\n",
                g.rank_profile, g.face_reductions, g.ip_iterations
            ));
        }
        if let Some(fail) = &it.extraction_failure {
            out.push_str(&format!("    extraction deferred: {}\n", fail));
        }
    }
    out.push('\n');

    match &result.outcome {
        Outcome::EmptyVariety { t, s } => {
            out.push_str(&format!(
                "empty real variety certified at order t = {} (dim pi_{} = 0)\n",
                t, s
            ));
        }
        Outcome::Exhausted { t_max } => {
            out.push_str(&format!(
                "no stopping order found up to t_max = {}; raise --t-max to continue\n",
                t_max
            ));
        }
        Outcome::Solved(ext) => {
            let kind = match ext.kind {
                StopKind::DimConditions => "dimension conditions",
                StopKind::StrongDimConditions => "dimension conditions (strong pair)",
                StopKind::RankCondition => "moment-matrix rank condition",
                _ => "conditions",
            };
            out.push_str(&format!(
                "stop: {} at order (t, s) = ({}, {}){}\n",
                kind,
                ext.t,
                ext.s,
                if ext.s_below_d {
                    "  [s < D: roots verified against the generators]"
                } else {
                    ""
                }
            ));
            if let Some((t, s)) = result.dims_first {
                out.push_str(&format!("dimension conditions first hold at ({}, {})\n", t, s));
            }
            if let Some((t, s)) = result.rank_first {
                out.push_str(&format!("rank condition first holds at ({}, {})\n", t, s));
            }
            out.push_str(&format!(
                "quotient basis B ({}): {}\n",
                ext.basis.len(),
                ext.basis
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            out.push_str(&format!(
                "border basis F0 ({} rewriting rules):\n",
                ext.border.elements.len()
            ));
            for f in ext.border.polynomials() {
                out.push_str(&format!("    {}\n", f));
            }
            out.push_str(&format!(
                "commutativity error c(X) = {:.3e}\n",
                ext.multiplication.commutativity_error
            ));
            let title = match result.mode {
                Mode::Real => "real roots",
                Mode::Complex => "roots",
            };
            out.push_str(&format!("{} ({}):\n", title, ext.roots.len()));
            for r in &ext.roots {
                out.push_str(&format!(
                    "    {}   eps(v) = {:.3e}{}\n",
                    fmt_root(&r.coordinates),
                    r.residual,
                    if r.cluster_size > 1 {
                        format!("   (cluster of {})", r.cluster_size)
                    } else {
                        String::new()
                    }
                ));
            }
            if !ext.rejected.is_empty() {
                out.push_str(&format!("rejected candidates ({}):\n", ext.rejected.len()));
                for r in &ext.rejected {
                    out.push_str(&format!(
                        "    {}   eps(v) = {:.3e}\n",
                        fmt_root(&r.coordinates),
                        r.residual
                    ));
                }
            }
            if result.mode == Mode::Real {
                out.push_str(&format!(
                    "real radical certified: {} (|B| = {} vs {} verified real roots)\n",
                    ext.radical_certified,
                    ext.basis.len(),
                    ext.roots.len()
                ));
            }
        }
    }
    out
}
