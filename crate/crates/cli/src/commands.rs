//! Subcommand implementations. Each returns the text to print and the exit
//! status, so the binary stays a thin dispatcher and tests can call these
//! directly.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use posetlab::flag::{flag_f_vector, flag_h_vector, ranks_of};
use posetlab::json::{
    assignment_to_json, flag_vector_value, labeling_to_json, outcome_value, polynomial_value,
    poset_to_string,
};
use posetlab::labeling::{
    assignment_to_labeling, chain_weight, descent_distribution, is_r_labeling, is_rising,
    is_triple_assignment, labeling_to_assignment,
};
use posetlab::{
    ab_index_from_flag_h, boolean_lattice, butterfly, chain, glued_butterflies, to_cd_index,
    GradedPoset, PosetError, SearchError, SearchLimits, SearchMode, SearchStatus, TripleAssignment,
};
use serde_json::{json, Value};

/// Process exit statuses shared by all subcommands.
pub mod exit {
    /// Success; for `search`, a triple assignment was found.
    pub const OK: i32 = 0;
    /// `search`: exhaustive search proved there is none. `verify-paper`: a row failed.
    pub const NONE: i32 = 1;
    /// Inconclusive (budget exhausted) or an input/usage error.
    pub const INCONCLUSIVE: i32 = 2;
    /// `index --basis cd`: the ab-index has no cd-index.
    pub const NOT_EXPRESSIBLE: i32 = 3;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Butterfly,
    Glued,
    Boolean,
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Ab,
    Cd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    First,
    Count,
    All,
}

impl From<Mode> for SearchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::First => SearchMode::First,
            Mode::Count => SearchMode::CountAll,
            Mode::All => SearchMode::EnumerateAll,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Text for stdout plus the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            code: exit::OK,
        }
    }
}

pub fn generate(family: Family, n: usize) -> Result<GradedPoset, PosetError> {
    match family {
        Family::Butterfly => butterfly(n),
        Family::Glued => glued_butterflies(n),
        Family::Boolean if n <= 16 => Ok(boolean_lattice(n)),
        Family::Boolean => Err(PosetError::InvalidRank(n)),
        Family::Chain => Ok(chain(n)),
    }
}

pub fn cmd_gen(family: Family, n: usize) -> Result<Output> {
    let poset = generate(family, n)?;
    Ok(Output::ok(poset_to_string(&poset)))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn subset_label(mask: u32) -> String {
    let ranks: Vec<String> = ranks_of(mask).iter().map(ToString::to_string).collect();
    format!("{{{}}}", ranks.join(","))
}

pub fn cmd_flag(poset: &GradedPoset, format: Format) -> Result<Output> {
    let f = flag_f_vector(poset);
    let h = flag_h_vector(&f);
    let text = match format {
        Format::Json => pretty(&json!({
            "rank": poset.rank(),
            "f": flag_vector_value(&f),
            "h": flag_vector_value(&h),
        })),
        Format::Table => {
            let mut s = format!("{:<20} {:>12} {:>12}\n", "S", "f_S", "h_S");
            for ((mask, fv), (_, hv)) in f.iter().zip(h.iter()) {
                writeln!(s, "{:<20} {:>12} {:>12}", subset_label(mask), fv, hv).unwrap();
            }
            s
        }
    };
    Ok(Output::ok(text))
}

pub fn cmd_index(poset: &GradedPoset, basis: Basis, format: Format) -> Result<Output> {
    let ab = ab_index_from_flag_h(&flag_h_vector(&flag_f_vector(poset)));
    match basis {
        Basis::Ab => Ok(Output::ok(match format {
            Format::Json => pretty(&json!({"basis": "ab", "polynomial": polynomial_value(&ab)})),
            Format::Table => format!("{ab}\n"),
        })),
        Basis::Cd => match to_cd_index(&ab) {
            Ok(cd) => Ok(Output::ok(match format {
                Format::Json => {
                    pretty(&json!({"basis": "cd", "polynomial": polynomial_value(&cd)}))
                }
                Format::Table => format!("{cd}\n"),
            })),
            Err(err) => {
                let text = match format {
                    Format::Json => pretty(&json!({
                        "basis": "cd",
                        "error": "not_expressible",
                        "message": err.to_string(),
                        "ab": polynomial_value(&ab),
                    })),
                    Format::Table => format!("not expressible in c, d: {ab}\n"),
                };
                Ok(Output {
                    text,
                    code: exit::NOT_EXPRESSIBLE,
                })
            }
        },
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchArgs {
    pub limits: SearchLimits,
    pub with_stats: bool,
    pub assignment_out: Option<std::path::PathBuf>,
    pub labeling_out: Option<std::path::PathBuf>,
}

/// Runs the search; a found witness is re-verified, converted to an
/// R-labeling and written out when requested.
pub fn cmd_search(poset: &GradedPoset, mode: Mode, args: &SearchArgs) -> Result<Output> {
    let search_mode = SearchMode::from(mode);
    let outcome = match posetlab::search_triple_assignment(poset, search_mode, args.limits) {
        Ok(o) => o,
        Err(SearchError::LimitExceeded(stats)) => {
            let text = pretty(&json!({
                "status": "inconclusive",
                "mode": posetlab::json::mode_name(search_mode),
                "stats": {"nodes": stats.nodes, "propagations": stats.propagations},
            }));
            return Ok(Output {
                text,
                code: exit::INCONCLUSIVE,
            });
        }
    };
    let mut value = outcome_value(poset, search_mode, &outcome, args.with_stats);
    if !args.with_stats {
        value.as_object_mut().unwrap().remove("stats");
    }
    if let Some(tau) = &outcome.witness {
        anyhow::ensure!(
            is_triple_assignment(poset, tau).is_ok(),
            "internal error: search witness fails verification"
        );
        let labeling = assignment_to_labeling(poset, tau);
        anyhow::ensure!(
            is_r_labeling(poset, &labeling).is_ok(),
            "internal error: converted labeling is not an R-labeling"
        );
        let labeling_json = labeling_to_json(poset, &labeling);
        value["labeling"] = json!({
            "labels": labeling_json.labels,
            "relation": labeling_json.relation,
        });
        if let Some(path) = &args.assignment_out {
            write_json(path, &serde_json::to_value(assignment_to_json(poset, tau))?)?;
        }
        if let Some(path) = &args.labeling_out {
            write_json(path, &serde_json::to_value(&labeling_json)?)?;
        }
    }
    let code = match outcome.status {
        SearchStatus::Found => exit::OK,
        SearchStatus::ProvenNone => exit::NONE,
    };
    Ok(Output {
        text: pretty(&value),
        code,
    })
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, pretty(v)).with_context(|| format!("writing {}", path.display()))
}

/// Lists maximal chains; with an assignment, also each chain's weight and
/// whether it is rising, plus the descent-set distribution.
pub fn cmd_chains(
    poset: &GradedPoset,
    tau: Option<&TripleAssignment>,
    format: Format,
) -> Result<Output> {
    let chains = poset.maximal_chains();
    let names =
        |c: &[usize]| -> Vec<String> { c.iter().map(|&e| poset.id(e).to_string()).collect() };
    let text = match format {
        Format::Json => {
            let rows: Vec<Value> = chains
                .iter()
                .map(|c| match tau {
                    Some(t) => json!({
                        "chain": names(c),
                        "weight": chain_weight(poset, t, c).render::<posetlab::poly::Ab>(),
                        "rising": is_rising(poset, c, t),
                    }),
                    None => json!({"chain": names(c)}),
                })
                .collect();
            let mut v = json!({"count": chains.len(), "chains": rows});
            if let Some(t) = tau {
                v["descents"] = flag_vector_value(&descent_distribution(poset, t));
            }
            pretty(&v)
        }
        Format::Table => {
            let mut s = String::new();
            for c in &chains {
                let line = names(c).join(" < ");
                match tau {
                    Some(t) => {
                        let w = chain_weight(poset, t, c).render::<posetlab::poly::Ab>();
                        let mark = if is_rising(poset, c, t) {
                            "  rising"
                        } else {
                            ""
                        };
                        writeln!(s, "{line}  [{w}]{mark}").unwrap();
                    }
                    None => writeln!(s, "{line}").unwrap(),
                }
            }
            writeln!(s, "{} maximal chains", chains.len()).unwrap();
            s
        }
    };
    Ok(Output::ok(text))
}

/// Verifies an assignment or labeling file against the unique-rising-chain
/// condition.
pub fn cmd_check(assignment: Option<&Path>, labeling: Option<&Path>) -> Result<Output> {
    let (poset, tau, kind) = match (assignment, labeling) {
        (Some(path), None) => {
            let (poset, tau) = posetlab::json::read_assignment(path)?;
            (poset, tau, "triple_assignment")
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let json: posetlab::json::LabelingJson = serde_json::from_str(&text)?;
            let poset = json.poset.load(path.parent())?;
            let labeling = posetlab::json::labeling_from_json(&poset, &json)?;
            anyhow::ensure!(
                labeling.labels.len() == poset.covers().len(),
                "labeling must label every cover"
            );
            let tau = labeling_to_assignment(&poset, &labeling);
            (poset, tau, "r_labeling")
        }
        _ => anyhow::bail!("pass exactly one of --assignment or --labeling"),
    };
    let v = match is_triple_assignment(&poset, &tau) {
        Ok(()) => json!({"kind": kind, "valid": true}),
        Err(violation) => json!({
            "kind": kind,
            "valid": false,
            "violation": {
                "x": poset.id(violation.x),
                "y": poset.id(violation.y),
                "rising_chains": violation.status.label(),
            },
        }),
    };
    let code = if v["valid"] == true {
        exit::OK
    } else {
        exit::NONE
    };
    Ok(Output {
        text: pretty(&v),
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_sizes() {
        assert_eq!(generate(Family::Butterfly, 3).unwrap().len(), 6);
        assert_eq!(generate(Family::Glued, 5).unwrap().len(), 18);
        assert_eq!(generate(Family::Boolean, 3).unwrap().len(), 8);
        assert!(generate(Family::Butterfly, 0).is_err());
        assert!(generate(Family::Glued, 1).is_err());
    }

    #[test]
    fn flag_json_for_t4() {
        let out = cmd_flag(&butterfly(4).unwrap(), Format::Json).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        let h = v["h"].as_object().unwrap();
        assert_eq!(h.len(), 8);
        assert!(h.values().all(|x| x == 1));
    }

    #[test]
    fn flag_json_for_p4_follows_parity() {
        let out = cmd_flag(&glued_butterflies(4).unwrap(), Format::Json).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        for (k, x) in v["h"].as_object().unwrap() {
            let mask: u32 = k.parse().unwrap();
            let expected = if mask.count_ones().is_multiple_of(2) {
                1
            } else {
                3
            };
            assert_eq!(x, expected, "mask {mask}");
        }
    }

    #[test]
    fn index_exit_codes() {
        let t6 = butterfly(6).unwrap();
        let out = cmd_index(&t6, Basis::Cd, Format::Table).unwrap();
        assert_eq!(out, Output::ok("ccccc\n".into()));
        let out = cmd_index(&chain(3), Basis::Cd, Format::Json).unwrap();
        assert_eq!(out.code, exit::NOT_EXPRESSIBLE);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["error"], "not_expressible");
    }

    #[test]
    fn search_exit_codes() {
        let args = SearchArgs::default();
        assert_eq!(
            cmd_search(&glued_butterflies(3).unwrap(), Mode::First, &args)
                .unwrap()
                .code,
            exit::OK
        );
        assert_eq!(
            cmd_search(&glued_butterflies(4).unwrap(), Mode::First, &args)
                .unwrap()
                .code,
            exit::NONE
        );
        let tiny = SearchArgs {
            limits: SearchLimits {
                max_nodes: Some(2),
                timeout: None,
                jobs: 1,
            },
            ..SearchArgs::default()
        };
        let out = cmd_search(&glued_butterflies(5).unwrap(), Mode::First, &tiny).unwrap();
        assert_eq!(out.code, exit::INCONCLUSIVE);
        assert!(out.text.contains("inconclusive"));
    }

    #[test]
    fn chains_listing() {
        let out = cmd_chains(&butterfly(3).unwrap(), None, Format::Json).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["count"], 4);
        assert_eq!(v["chains"][0]["chain"], json!(["bot", "x1", "x2", "top"]));
    }
}
