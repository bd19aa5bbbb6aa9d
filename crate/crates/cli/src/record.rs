//! JSON run record. Endpoints are stored as text (shortest round-trip
//! decimal or hex float), so reloading is lossless.

use std::path::Path;

use serde::{Deserialize, Serialize};
use symprune::{Interval, IntervalBox, Provenance, SolveStats};

use crate::error::CliError;
use crate::hexfloat::{format_hex, parse_hex};
use crate::report::bisection_label;
use crate::run::{Mode, SolveRequest, SolveRun};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub epsilon: f64,
    pub max_boxes: u64,
    pub contraction_rounds: usize,
    pub min_shrink: f64,
    pub equality_slack: f64,
    pub bisection: String,
    pub parallel: usize,
    pub cluster_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub boxes_processed: u64,
    pub boxes_rejected: u64,
    pub solution_boxes: u64,
    pub bisections: u64,
    pub wall_time_s: f64,
}

impl From<&SolveStats> for StatsRecord {
    fn from(s: &SolveStats) -> Self {
        StatsRecord {
            boxes_processed: s.boxes_processed,
            boxes_rejected: s.boxes_rejected,
            solution_boxes: s.solution_boxes,
            bisections: s.bisections,
            wall_time_s: s.wall_time.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentativeRecord {
    pub code: String,
    pub bits: String,
    pub period: usize,
    pub stats: StatsRecord,
    pub solutions: usize,
    pub expanded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsymRecord {
    pub cycle_length: usize,
    pub x_star: f64,
    pub representatives: usize,
    /// Decimal text; `2^k` can exceed JSON-safe integers.
    pub subboxes: String,
    pub ifdp: f64,
    pub expansion_factor: f64,
    pub per_representative: Vec<RepresentativeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub lo: Vec<String>,
    pub hi: Vec<String>,
    pub representative: Option<usize>,
    pub shift: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub mode: String,
    pub problem: String,
    pub config: ConfigEcho,
    pub stats: StatsRecord,
    pub elapsed_s: f64,
    pub budget_exceeded: bool,
    pub clusters: usize,
    pub csym: Option<CsymRecord>,
    pub hex_floats: bool,
    pub boxes: Vec<BoxRecord>,
}

fn text(x: f64, hex: bool) -> String {
    if hex {
        format_hex(x)
    } else {
        format!("{x:?}")
    }
}

fn number(s: &str) -> Result<f64, CliError> {
    let v = if s.contains("0x") {
        parse_hex(s).ok()
    } else {
        s.parse().ok()
    };
    v.ok_or_else(|| CliError::Usage(format!("bad endpoint {s:?} in run record")))
}

impl RunRecord {
    pub fn new(problem: &str, req: &SolveRequest, run: &SolveRun, hex: bool) -> Self {
        let cfg = &req.config;
        let csym = run.csym.as_ref().map(|c| CsymRecord {
            cycle_length: c.cycle_len,
            x_star: c.x_star,
            representatives: c.representatives,
            subboxes: c.subboxes.to_string(),
            ifdp: c.ifdp,
            expansion_factor: c.expansion_factor,
            per_representative: c
                .per_representative
                .iter()
                .map(|r| RepresentativeRecord {
                    code: r.code.to_string(),
                    bits: r.code.to_binary().to_string(),
                    period: r.period,
                    stats: (&r.stats).into(),
                    solutions: r.ccs_solutions,
                    expanded: r.expanded_solutions,
                })
                .collect(),
        });
        let with_prov = run.mode == Mode::Csym;
        let boxes = run
            .solutions
            .boxes
            .iter()
            .map(|b| BoxRecord {
                lo: b.bounds.dims().iter().map(|d| text(d.lo(), hex)).collect(),
                hi: b.bounds.dims().iter().map(|d| text(d.hi(), hex)).collect(),
                representative: with_prov.then_some(b.provenance.representative),
                shift: with_prov.then_some(b.provenance.shift),
            })
            .collect();
        RunRecord {
            mode: run.mode.as_str().into(),
            problem: problem.into(),
            config: ConfigEcho {
                epsilon: cfg.epsilon,
                max_boxes: cfg.max_boxes,
                contraction_rounds: cfg.contraction_rounds,
                min_shrink: cfg.min_shrink,
                equality_slack: cfg.equality_slack,
                bisection: bisection_label(req.bisection),
                parallel: req.parallel.max(1),
                cluster_gap: req.cluster_gap(),
            },
            stats: (&run.stats).into(),
            elapsed_s: run.elapsed.as_secs_f64(),
            budget_exceeded: run.budget_exceeded,
            clusters: run.clusters.count,
            csym,
            hex_floats: hex,
            boxes,
        }
    }

    /// Boxes with their provenance, decoded from the endpoint text.
    pub fn solution_boxes(&self) -> Result<Vec<(IntervalBox, Option<Provenance>)>, CliError> {
        self.boxes
            .iter()
            .map(|b| {
                let dims =
                    b.lo.iter()
                        .zip(&b.hi)
                        .map(|(lo, hi)| {
                            Interval::new(number(lo)?, number(hi)?)
                                .map_err(|e| CliError::Usage(e.to_string()))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                let prov = match (b.representative, b.shift) {
                    (Some(representative), Some(shift)) => Some(Provenance {
                        representative,
                        shift,
                    }),
                    _ => None,
                };
                Ok((IntervalBox::new(dims), prov))
            })
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n").map_err(|e| CliError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
