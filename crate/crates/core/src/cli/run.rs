use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::doc::{Command, ExpectOp, Expectation, InputDocument, Task};
use crate::bimodule::{frobenius_check, AdjointPair, Bimodule, Dual, FrobeniusCertificate, Side};
use crate::error::FrobError;
use crate::exactla::Matrix;
use crate::frobanalysis::{
    classify, composition_law, constant_rank_partition, dualize_morphism, equivalence_test, glue,
    random_morphism, rank_report, restrict, support_map, Direction, GlueTask, InjectiveImage,
    Verdict, Witness,
};
use crate::module::{is_projective, IsoSearch};
use crate::spectrum::{EnvelopeClosure, LocalizingSubcat};

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub seed: u64,
    pub include_zero_subcategory: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationResult {
    pub key: String,
    pub op: String,
    pub expected: Value,
    pub actual: Value,
    pub ok: bool,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub task: String,
    pub args: Vec<String>,
    /// Source line of the task, absent for tasks synthesized from the command.
    pub line: Option<usize>,
    pub result: Value,
    pub expectations: Vec<ExpectationResult>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub field: Option<u32>,
    pub seed: u64,
    pub include_zero_subcategory: bool,
    pub sections: Vec<Section>,
    pub expectations_met: bool,
    /// Some analysis ended with an exhausted isomorphism search.
    pub internal_unknown: bool,
}

impl Report {
    /// 0 ok, 1 expectation mismatch, 3 internal `Unknown`.
    pub fn exit_code(&self) -> i32 {
        if self.internal_unknown {
            3
        } else if !self.expectations_met {
            1
        } else {
            0
        }
    }
}

enum Cert {
    Frobenius(Box<FrobeniusCertificate>),
    Pair(Box<AdjointPair>, FrobError),
    Neither(FrobError),
}

struct Ctx<'a> {
    doc: &'a InputDocument,
    opts: RunOptions,
    cfg: IsoSearch,
    certs: BTreeMap<String, Cert>,
}

type Out = Result<Value, FrobError>;

fn pts(v: &[usize]) -> Value {
    json!(v.iter().map(|x| x + 1).collect::<Vec<_>>())
}

fn opt_pt(x: Option<usize>) -> Value {
    x.map_or(Value::Null, |x| json!(x + 1))
}

fn mat(m: &Matrix) -> Value {
    serde_json::to_value(m).expect("matrices serialize")
}

fn error_value(e: &FrobError) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}})
}

fn witness(w: &Witness) -> Value {
    match w {
        Witness::Simple(i) => json!({"simple": i + 1}),
        Witness::Factor { simple, factor } => json!({"simple": simple + 1, "factor": factor + 1}),
        Witness::KilledSet(k) => json!({"killed_set": pts(k)}),
        Witness::Central(c) => json!({"central": c}),
        Witness::Corner { surviving, element } => {
            json!({"corner": pts(surviving), "element": element})
        }
    }
}

fn verdict(v: &Verdict) -> Value {
    json!({"holds": v.holds, "witness": v.witness.as_ref().map_or(Value::Null, witness)})
}

fn opt_verdict(v: &Option<Verdict>) -> Value {
    v.as_ref().map_or(Value::Null, verdict)
}

fn closure(c: &EnvelopeClosure) -> Value {
    json!({
        "closed": c.closed,
        "witness": c.witness.map_or(Value::Null, |(j, x)| json!({"envelope": j + 1, "factor": x + 1})),
    })
}

fn images(v: &[InjectiveImage]) -> Value {
    json!(v
        .iter()
        .map(|i| json!({
            "point": i.point + 1,
            "dim": i.dim,
            "multiplicities": i.multiplicities,
            "verified": i.verified,
        }))
        .collect::<Vec<_>>())
}

impl Ctx<'_> {
    fn bimodule(&self, name: &str) -> &Bimodule {
        &self.doc.bimodule(name).expect("references are resolved at parse time").bimodule
    }

    fn killed(&self, name: &str) -> Vec<usize> {
        self.doc.subspace(name).expect("resolved at parse time").killed.clone()
    }

    fn cert(&mut self, name: &str) -> &Cert {
        if !self.certs.contains_key(name) {
            let m = self.bimodule(name).clone();
            let c = match frobenius_check(&m, &self.cfg) {
                Ok(c) => Cert::Frobenius(Box::new(c)),
                Err(e) => match AdjointPair::new(&m) {
                    Ok(p) => Cert::Pair(Box::new(p), e),
                    Err(e2) => Cert::Neither(e2),
                },
            };
            self.certs.insert(name.to_string(), c);
        }
        &self.certs[name]
    }

    fn pair(&mut self, name: &str) -> Result<&AdjointPair, FrobError> {
        match self.cert(name) {
            Cert::Frobenius(c) => Ok(&c.pair),
            Cert::Pair(p, _) => Ok(p),
            Cert::Neither(e) => Err(e.clone()),
        }
    }

    fn certificate(&mut self, name: &str) -> Result<&FrobeniusCertificate, FrobError> {
        match self.cert(name) {
            Cert::Frobenius(c) => Ok(c),
            Cert::Pair(_, e) | Cert::Neither(e) => Err(e.clone()),
        }
    }

    fn run_task(&mut self, command: Command, args: &[String]) -> Out {
        match command {
            Command::Check => self.check(&args[0]),
            Command::Ranks => self.ranks(&args[0]),
            Command::Classify => self.classify(&args[0]),
            Command::Restrict => self.restrict(&args[0], &args[1]),
            Command::Partition => self.partition(&args[0]),
            Command::Glue => self.glue(args),
            Command::Duality => self.duality(args),
            Command::ReportAll => unreachable!("not a task"),
        }
    }

    fn check(&mut self, name: &str) -> Out {
        let nb = self.doc.bimodule(name).expect("resolved");
        let m = &nb.bimodule;
        let mut out = json!({
            "bimodule": name,
            "over": [nb.left, nb.right],
            "dim": m.dim(),
            "points": [m.left_algebra().num_points(), m.right_algebra().num_points()],
            "left_projective": is_projective(&m.left_module())?.is_some(),
            "right_projective": is_projective(&m.right_module())?.is_some(),
        });
        for (key, side) in [("left_dual_dim", Side::Left), ("right_dual_dim", Side::Right)] {
            out[key] = Dual::new(m, side).map_or(Value::Null, |d| json!(d.dim()));
        }
        match self.certificate(name) {
            Ok(c) => {
                let z = &c.adjunction.zigzags;
                out["frobenius"] = json!(true);
                out["theta"] = mat(&c.theta);
                out["zigzags"] = json!({
                    "unit_counit_on_m": z.unit_counit_on_m,
                    "unit_counit_on_dual": z.unit_counit_on_dual,
                    "theta_xi_on_m": z.theta_xi_on_m,
                    "theta_xi_on_dual": z.theta_xi_on_dual,
                    "all": z.all(),
                });
            }
            Err(e) => {
                out["frobenius"] = json!(false);
                out["failure"] = error_value(&e)["error"].clone();
            }
        }
        Ok(out)
    }

    fn ranks(&mut self, name: &str) -> Out {
        let pair = self.pair(name)?;
        let r = rank_report(pair)?;
        let eq = equivalence_test(pair)?;
        let sm = support_map(pair);
        let k = &r.kernels;
        Ok(json!({
            "supp_f": pts(&r.supp_f),
            "supp_g": pts(&r.supp_g),
            "rrk": r.rrk,
            "lrk": r.lrk,
            "rho": r.rho,
            "lambda": r.lambda,
            "f": r.f.iter().map(|x| opt_pt(*x)).collect::<Vec<_>>(),
            "f_well_defined": r.f_well_defined,
            "n_y": r.n_y,
            "f_images": images(&r.f_images),
            "g_images": images(&r.g_images),
            "fg_images": images(&r.fg_images),
            "additivity": r.additivity.as_ref().map(|v| v.iter().map(|(l, r)| json!({"lhs": l, "rhs": r})).collect::<Vec<_>>()),
            "additivity_holds": r.additivity_holds(),
            "reciprocity_failures": r.reciprocity_failures.iter().map(|(x, y)| json!([x + 1, y + 1])).collect::<Vec<_>>(),
            "reciprocity_holds": r.reciprocity_holds(),
            "decompositions_verified": r.decompositions_verified(),
            "kernels": {"f": pts(&k.f), "g": pts(&k.g), "gf": pts(&k.gf), "fg": pts(&k.fg)},
            "equivalence": {
                "equivalent": eq.equivalent,
                "faithful_f": eq.faithful_f,
                "faithful_g": eq.faithful_g,
                "rho_one": eq.rho_one,
                "lambda_one": eq.lambda_one,
                "unit_invertible": eq.unit_invertible,
                "counit_invertible": eq.counit_invertible,
            },
            "support_map": match sm {
                Ok(s) => json!({
                    "map": s.map.iter().map(|(x, y, m)| json!([x + 1, y + 1, m])).collect::<Vec<_>>(),
                    "supp_g": pts(&s.supp_g),
                    "surjective": s.surjective,
                    "injective": s.injective,
                    "continuous": s.continuous,
                    "homeomorphism": s.homeomorphism,
                    "left_localizing": s.left_localizing,
                    "cross_check": s.cross_check,
                }),
                Err(e) => error_value(&e),
            },
        }))
    }

    fn classify(&mut self, name: &str) -> Out {
        let z = self.opts.include_zero_subcategory;
        let c = classify(self.pair(name)?, z)?;
        Ok(json!({
            "faithful_f": verdict(&c.faithful_f),
            "faithful_g": verdict(&c.faithful_g),
            "right_localizing": verdict(&c.right_localizing),
            "left_localizing": verdict(&c.left_localizing),
            "brute_force_agrees": c.brute_force_agrees(),
            "include_zero_subcategory": c.include_zero_subcategory,
            "localizing": opt_verdict(&c.localizing),
            "localizing_with_zero": opt_verdict(&c.localizing_with_zero),
            "localizing_without_zero": opt_verdict(&c.localizing_without_zero),
            "centralizing": opt_verdict(&c.centralizing),
            "locally_centralizing": opt_verdict(&c.locally_centralizing),
            "dual_centralizing": opt_verdict(&c.dual_centralizing),
        }))
    }

    fn restrict(&mut self, name: &str, sub: &str) -> Out {
        let killed = self.killed(sub);
        let cfg = self.cfg;
        let pair = self.pair(name)?;
        let t = LocalizingSubcat::new(pair.right_algebra().clone(), &killed)?;
        let r = restrict(pair, &t, &cfg)?;
        Ok(json!({
            "killed_b": pts(&r.killed_b),
            "killed_a": pts(&r.killed_a),
            "surviving_b": pts(&r.surviving_b),
            "surviving_a": pts(&r.surviving_a),
            "hypothesis": r.hypothesis,
            "restricted_dim": r.restricted_dim,
            "frobenius": r.frobenius,
            "failure": r.failure,
            "pushforward_exact_a": r.pushforward_exact_a,
            "pushforward_exact_b": r.pushforward_exact_b,
            "projection_formulas": r.projection_formulas,
        }))
    }

    fn partition(&mut self, name: &str) -> Out {
        let cfg = self.cfg;
        let p = constant_rank_partition(self.pair(name)?, &cfg)?;
        let blocks: Vec<Value> = p
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "lambda": b.lambda,
                    "killed_b": pts(&b.killed_b),
                    "killed_a": pts(&b.killed_a),
                    "surviving_b": pts(&b.surviving_b),
                    "surviving_a": pts(&b.surviving_a),
                    "restricted_dim": b.restricted_dim,
                    "frobenius": b.frobenius,
                    "constant_rank": b.constant_rank,
                    "envelope_closed_b": closure(&b.envelope_closed_b),
                    "envelope_closed_a": closure(&b.envelope_closed_a),
                })
            })
            .collect();
        Ok(json!({
            "lambdas": p.lambdas,
            "blocks": blocks,
            "disjoint": p.disjoint,
            "cover": p.cover,
            "decomposition": p.decomposition,
        }))
    }

    fn glue(&mut self, args: &[String]) -> Out {
        let (task, global) = if args.len() == 3 {
            let m = self.bimodule(&args[0]);
            let cover = [self.killed(&args[1]), self.killed(&args[2])];
            (GlueTask::from_global(m, cover)?, Some(m.clone()))
        } else {
            let sv = [&args[2], &args[3]].map(|n| self.doc.subspace(n).expect("resolved"));
            let su = [&args[4], &args[5]].map(|n| self.doc.subspace(n).expect("resolved"));
            let alg = |n: &str| self.doc.algebra(n).expect("resolved").clone();
            (
                GlueTask {
                    left: alg(&sv[0].algebra),
                    right: alg(&su[0].algebra),
                    cover_a: sv.map(|s| s.killed.clone()),
                    cover_b: su.map(|s| s.killed.clone()),
                    local: [self.bimodule(&args[0]).clone(), self.bimodule(&args[1]).clone()],
                },
                None,
            )
        };
        let g = glue(&task, &self.cfg)?;
        let mut out = json!({
            "cover_a": task.cover_a.iter().map(|k| pts(k)).collect::<Vec<_>>(),
            "cover_b": task.cover_b.iter().map(|k| pts(k)).collect::<Vec<_>>(),
            "glued_dim": g.bimodule.dim(),
            "frobenius": true,
            "zigzags": g.certificate.adjunction.zigzags.all(),
            "restrictions_agree": g.restrictions_agree,
            "right_localizing": g.right_localizing,
        });
        if let Some(m) = global {
            out["iso_to_original"] = json!(g.bimodule.iso_test(&m, &self.cfg)?.is_iso());
        }
        Ok(out)
    }

    fn duality(&mut self, args: &[String]) -> Out {
        let names: Vec<&String> = args.iter().filter(|a| a.parse::<u64>().is_err()).collect();
        let draws = args.iter().find_map(|a| a.parse::<u64>().ok()).unwrap_or(5);
        let (m, n) = (names[0].as_str(), names.last().expect("one name").as_str());
        let c1 = self.certificate(m)?.clone();
        let c2 = self.certificate(n)?.clone();
        let hom_dim = c1.bimodule.hom_space(&c2.bimodule)?.len();
        let mut out = json!({"draws": draws, "hom_dim": hom_dim});
        for dir in [Direction::Star, Direction::Dagger] {
            let (mut natural, mut inverse_law, mut recovers, mut composition) = (true, true, true, true);
            for i in 0..draws {
                let u = random_morphism(&c1.bimodule, &c2.bimodule, self.opts.seed.wrapping_add(i))?;
                let v = random_morphism(
                    &c2.bimodule,
                    &c2.bimodule,
                    self.opts.seed.wrapping_add(draws + i),
                )?;
                let r = dualize_morphism(&c1, &c2, &u, dir)?;
                natural &= r.natural;
                inverse_law &= r.inverse_law;
                recovers &= r.encoded == u;
                composition &= composition_law([&c1, &c2, &c2], &u, &v, dir)?;
                if out.get("sample").is_none() && !u.is_zero() {
                    out["sample"] = json!({"u": mat(&u), "dual_hom": mat(&r.dual_hom)});
                }
            }
            let key = match dir {
                Direction::Star => "star",
                Direction::Dagger => "dagger",
            };
            out[key] = json!({
                "natural": natural,
                "inverse_law": inverse_law,
                "composition_law": composition,
            });
            // tau* is tensoring with u itself; tau^dagger depends on the chosen thetas
            if dir == Direction::Star {
                out[key]["recovers"] = json!(recovers);
            }
        }
        Ok(out)
    }
}

/// Looks up a dotted path; numeric segments index arrays from 1.
pub fn lookup<'v>(v: &'v Value, key: &str) -> Option<&'v Value> {
    key.split('.').try_fold(v, |cur, seg| match cur {
        Value::Object(m) => m.get(seg),
        Value::Array(a) => seg
            .parse::<usize>()
            .ok()
            .and_then(|i| i.checked_sub(1))
            .and_then(|i| a.get(i)),
        _ => None,
    })
}

fn evaluate(result: &Value, e: &Expectation) -> ExpectationResult {
    let actual = lookup(result, &e.key).cloned().unwrap_or(Value::Null);
    let ok = match e.op {
        ExpectOp::Equals => actual == e.value,
        ExpectOp::Contains => match (&actual, &e.value) {
            (Value::String(a), Value::String(x)) => a.contains(x.as_str()),
            _ => false,
        },
    };
    ExpectationResult {
        key: e.key.clone(),
        op: match e.op {
            ExpectOp::Equals => "=".into(),
            ExpectOp::Contains => "~".into(),
        },
        expected: e.value.clone(),
        actual,
        ok,
        line: e.line,
    }
}

/// Tasks the command selects. Commands taking one bimodule fall back to every bimodule.
fn selected(doc: &InputDocument, command: Command) -> Vec<(Task, bool)> {
    let tasks: Vec<(Task, bool)> = doc
        .tasks
        .iter()
        .filter(|t| command == Command::ReportAll || t.command == command)
        .map(|t| (t.clone(), true))
        .collect();
    if !tasks.is_empty() {
        return tasks;
    }
    let fallback = match command {
        Command::ReportAll => vec![Command::Check, Command::Ranks, Command::Classify],
        Command::Restrict | Command::Glue => vec![],
        c => vec![c],
    };
    doc.bimodules
        .iter()
        .flat_map(|b| {
            fallback.iter().map(|&c| {
                (
                    Task {
                        command: c,
                        args: vec![b.name.clone()],
                        expectations: vec![],
                        line: 0,
                    },
                    false,
                )
            })
        })
        .collect()
}

pub fn run(doc: &InputDocument, command: Command, opts: RunOptions) -> Report {
    let mut ctx = Ctx {
        doc,
        opts,
        cfg: IsoSearch {
            seed: opts.seed,
            ..IsoSearch::default()
        },
        certs: BTreeMap::new(),
    };
    let mut sections = Vec::new();
    let mut unknown = false;
    for (task, declared) in selected(doc, command) {
        let t0 = Instant::now();
        let result = ctx.run_task(task.command, &task.args).unwrap_or_else(|e| {
            unknown |= e == FrobError::Unknown;
            error_value(&e)
        });
        let expectations = task.expectations.iter().map(|e| evaluate(&result, e)).collect();
        sections.push(Section {
            task: task.command.as_str().into(),
            args: task.args,
            line: declared.then_some(task.line),
            result,
            expectations,
            elapsed: t0.elapsed(),
        });
    }
    let expectations_met = sections
        .iter()
        .all(|s: &Section| s.expectations.iter().all(|e| e.ok));
    Report {
        command: command.as_str().into(),
        field: doc.field.map(|f| f.p()),
        seed: opts.seed,
        include_zero_subcategory: opts.include_zero_subcategory,
        sections,
        expectations_met,
        internal_unknown: unknown,
    }
}
