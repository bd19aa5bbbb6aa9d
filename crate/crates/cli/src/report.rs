//! Key-value stats report, one `key = value` pair per line. Lines starting
//! with `#` are comments. The only line that varies between identical runs
//! besides timings is `timestamp_unix`.

use std::collections::BTreeMap;
use std::fmt::Write;

use symprune::csym::BisectionPolicy;
use symprune::Problem;

use crate::run::{Comparison, SolveRequest, SolveRun};

pub fn bisection_label(b: BisectionPolicy) -> String {
    match b {
        BisectionPolicy::Midpoint => "midpoint".into(),
        BisectionPolicy::Fixed(x) => format!("{x:?}"),
    }
}

pub fn stats_report(
    problem_name: &str,
    p: &Problem,
    req: &SolveRequest,
    run: &SolveRun,
    cmp: Option<&Comparison>,
    timestamp_unix: Option<u64>,
) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(s, "{k} = {v}");
    };
    if let Some(t) = timestamp_unix {
        kv("timestamp_unix", &t);
    }
    kv("problem", &problem_name);
    kv("mode", &run.mode.as_str());
    kv("variables", &p.n_vars());
    kv("constraints", &p.constraints().len());
    kv("epsilon", &req.config.epsilon);
    kv("max_boxes", &req.config.max_boxes);
    kv("bisection", &bisection_label(req.bisection));
    kv("parallel", &req.parallel.max(1));
    kv("processed_boxes", &run.stats.boxes_processed);
    kv("rejected_boxes", &run.stats.boxes_rejected);
    kv("bisections", &run.stats.bisections);
    kv("solution_boxes", &run.solutions.len());
    kv("time_s", &format!("{:.6}", run.elapsed.as_secs_f64()));
    kv(
        "solver_time_s",
        &format!("{:.6}", run.stats.wall_time.as_secs_f64()),
    );
    kv("budget_exceeded", &run.budget_exceeded);
    kv("clusters", &run.clusters.count);
    kv("cluster_gap", &run.clusters.gap);
    if let Some(r) = run.clusters.max_refined_residual {
        kv("max_refined_residual", &format!("{r:e}"));
    }
    if let Some(c) = &run.csym {
        kv("cycle_length", &c.cycle_len);
        kv("x_star", &c.x_star);
        kv("representatives", &c.representatives);
        kv("subboxes", &c.subboxes);
        kv(
            "representative_fraction",
            &format!("{}/{}", c.representatives, c.subboxes),
        );
        kv(
            "representative_fraction_value",
            &(c.representatives as f64 / c.subboxes as f64),
        );
        kv("ifdp", &c.ifdp);
        kv("expansion_factor", &c.expansion_factor);
        for (i, r) in c.per_representative.iter().enumerate() {
            let key = |f: &str| format!("rep.{i}.{f}");
            kv(&key("code"), &r.code);
            kv(&key("bits"), &r.code.to_binary());
            kv(&key("period"), &r.period);
            kv(&key("processed_boxes"), &r.stats.boxes_processed);
            kv(&key("solutions"), &r.ccs_solutions);
            kv(&key("expanded"), &r.expanded_solutions);
            kv(
                &key("time_s"),
                &format!("{:.6}", r.stats.wall_time.as_secs_f64()),
            );
        }
    }
    if let Some(c) = cmp {
        kv("plain_processed_boxes", &c.plain.stats.boxes_processed);
        kv("plain_solution_boxes", &c.plain.solutions.len());
        kv("plain_clusters", &c.plain.clusters.count);
        kv(
            "plain_time_s",
            &format!("{:.6}", c.plain.elapsed.as_secs_f64()),
        );
        kv("gain", &format!("{:.3}", c.time_gain));
        kv("gain_boxes", &format!("{:.3}", c.box_gain));
        kv("cover_tolerance", &c.tolerance);
        kv("cover_equivalent", &c.cover_equivalent);
    }
    if let Some(n) = &run.note {
        kv("note", n);
    }
    s
}

/// Reads a report back into a map; later keys win.
pub fn parse_report(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}
