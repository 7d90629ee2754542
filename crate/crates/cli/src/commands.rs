use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use fnpriv::characterize::{decide, verify_witness, Decision};
use fnpriv::eavesdrop::{self, parse_instance};
use fnpriv::info::{self, Joint};
use fnpriv::model::rational;
use fnpriv::model::{
    parse_distribution, parse_triple, FunctionTriple, JointDistribution, ValueTable,
};
use fnpriv::noninteractive::{self, Channel};
use fnpriv::privacy::{self, round_sig};
use fnpriv::protocol::{parse_protocol, Party, ProtocolTree};
use fnpriv::{sim, Limits};

use crate::Command;

pub struct Outcome {
    pub report: Value,
    pub affirmative: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn triple(path: &Path) -> Result<FunctionTriple> {
    parse_triple(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn dist(path: &Path) -> Result<JointDistribution> {
    parse_distribution(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn protocol(path: &Path) -> Result<ProtocolTree> {
    parse_protocol(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn json_file(path: &Path) -> Result<Value> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// A bare table, or an object carrying it under `"g"`.
fn g_table(path: &Path, rows: usize, cols: usize) -> Result<ValueTable> {
    let v = json_file(path)?;
    let table = v.get("g").unwrap_or(&v);
    ValueTable::from_json(table, rows, cols, "/g").with_context(|| format!("in {}", path.display()))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn run(command: &Command) -> Result<Outcome> {
    let limits = Limits::default();
    match command {
        Command::Analyze {
            triple: t,
            emit_protocol,
            dot,
        } => {
            let t = triple(t)?;
            t.check_limits(&limits)?;
            let decision = decide(&t);
            let mut report = decision.to_json();
            match &decision {
                Decision::Computable(tree) => {
                    if let Some(p) = emit_protocol {
                        write(p, &serde_json::to_string_pretty(&tree.to_json())?)?;
                    }
                    if let Some(d) = dot {
                        write(d, &tree.to_dot(Some((t.x_alphabet(), t.y_alphabet()))))?;
                    }
                }
                Decision::NotComputable(w) => {
                    report["witness_verified"] =
                        json!(verify_witness(&t, &w.rect) && w.certify(&t));
                }
            }
            Ok(Outcome {
                affirmative: matches!(decision, Decision::Computable(_)),
                report,
            })
        }
        Command::Verify {
            triple: t,
            protocol: p,
        } => {
            let t = triple(t)?;
            let tree = protocol(p)?;
            tree.check_covers(t.x_len(), t.y_len())?;
            let correct = privacy::check_correct(&tree, &t)?;
            let alice = privacy::check_transcript_privacy(&tree, &t, Party::Alice)?;
            let bob = privacy::check_transcript_privacy(&tree, &t, Party::Bob)?;
            let ok = correct.is_perfect() && alice.is_ok() && bob.is_ok();
            Ok(Outcome {
                report: json!({
                    "verdict": if ok { "secure" } else { "insecure" },
                    "correctness": correct.to_json(),
                    "privacy": [to_value(&alice), to_value(&bob)],
                }),
                affirmative: ok,
            })
        }
        Command::Claim1 {
            triple: t,
            protocol: p,
            dist: d,
            sampling,
        } => {
            let t = triple(t)?;
            let tree = protocol(p)?;
            let d = dist(d)?;
            tree.check_covers(t.x_len(), t.y_len())?;
            let audit = privacy::claim1_audit(&tree, &t, &d)?;
            let suite = privacy::claim1_suite(&tree, &t, sampling.samples, sampling.seed)?;
            let ok = audit.both_zero() && suite.all_zero;
            Ok(Outcome {
                report: json!({
                    "verdict": if ok { "private" } else { "leaks" },
                    "audit": to_value(&audit),
                    "suite": to_value(&suite),
                }),
                affirmative: ok,
            })
        }
        Command::Perfect {
            triple: t,
            dist: d,
            channel,
            search,
        } => {
            let t = triple(t)?;
            let d = dist(d)?;
            if *search {
                let s = noninteractive::search_deterministic_u(&d, &t, &limits)?;
                Ok(Outcome {
                    affirmative: s.witness.is_some(),
                    report: to_value(&s),
                })
            } else {
                let path = channel
                    .as_deref()
                    .expect("clap requires --channel without --search");
                let ch = Channel::from_json(&json_file(path)?)
                    .with_context(|| format!("in {}", path.display()))?;
                let r = noninteractive::check_perfect(&ch, &d, &t)?;
                let one_shot = noninteractive::one_shot(&ch, &d, &t)?;
                Ok(Outcome {
                    affirmative: r.passes(),
                    report: json!({ "report": to_value(&r), "passes": r.passes(), "one_shot": to_value(&one_shot) }),
                })
            }
        }
        Command::Leakage {
            protocol: p,
            instance,
            n,
        } => {
            let tree = protocol(p)?;
            let inst = parse_instance(&read(instance)?)
                .with_context(|| format!("in {}", instance.display()))?;
            let r = eavesdrop::leakage(&tree, &inst, *n, &limits)?;
            Ok(Outcome {
                affirmative: r.exact_zero && r.error_prob == rational::zero(),
                report: to_value(&r),
            })
        }
        Command::Frontier {
            instance,
            m1,
            m2,
            csv,
        } => {
            let inst = parse_instance(&read(instance)?)
                .with_context(|| format!("in {}", instance.display()))?;
            let r = eavesdrop::brute_force_noninteractive(&inst, *m1, *m2, &limits)?;
            if let Some(path) = csv {
                write(path, &r.to_csv())?;
            }
            let mut report = to_value(&r);
            for (p, v) in r
                .frontier
                .iter()
                .zip(report["frontier"].as_array_mut().expect("array"))
            {
                v["encoder"] = json!(p.encoder_description());
            }
            Ok(Outcome {
                report,
                affirmative: true,
            })
        }
        Command::Omniscience {
            dist: d,
            g_table: g,
        } => {
            let d = dist(d)?;
            let g = g_table(g, d.x_len(), d.y_len())?;
            let r = eavesdrop::omniscience_feasible(&d, &g)?;
            Ok(Outcome {
                affirmative: r.feasible,
                report: to_value(&r),
            })
        }
        Command::Simulate {
            protocol: p,
            dist: d,
            trials,
            seed,
            csv,
            g_table: g,
        } => {
            let tree = protocol(p)?;
            let d = dist(d)?;
            let stats = sim::run_trials(&tree, &d, *trials, *seed)?;
            if let Some(path) = csv {
                write(path, &stats.to_csv())?;
            }
            let mut report = stats.to_json();
            report["tv_distance"] = json!(round_sig(sim::tv_distance(&stats, &tree, &d)?));
            if let Some(g) = g {
                let g = g_table(g, d.x_len(), d.y_len())?;
                report["empirical_leakage_bits"] =
                    json!(round_sig(sim::empirical_leakage(&stats, &g)));
            }
            Ok(Outcome {
                report,
                affirmative: true,
            })
        }
        Command::Info { triple: t, dist: d } => {
            let t = triple(t)?;
            let d = dist(d)?;
            if (d.x_len(), d.y_len()) != (t.x_len(), t.y_len()) {
                anyhow::bail!(
                    "distribution is {}x{} but the triple is {}x{}",
                    d.x_len(),
                    d.y_len(),
                    t.x_len(),
                    t.y_len()
                );
            }
            let mut joint = Joint::new(&["X", "Y", "F", "G", "H"]);
            for (x, y, p) in d.support() {
                joint.add(
                    vec![
                        x as u32,
                        y as u32,
                        t.f().get(x, y),
                        t.g().get(x, y),
                        t.h().get(x, y),
                    ],
                    p.clone(),
                );
            }
            let h = |i: usize| round_sig(info::joint_entropy(&joint, &[i]));
            Ok(Outcome {
                report: json!({
                    "h_f": h(2),
                    "h_g": h(3),
                    "h_h": h(4),
                    "i_xy": round_sig(info::mutual_information(&joint, &[0], &[1])),
                    "xy_independent": info::exact_cond_independent(&joint, &[0], &[1], &[]),
                }),
                affirmative: true,
            })
        }
    }
}
