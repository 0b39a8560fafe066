//! Brute-force verification of the G-sequential theorems on small universes.
//!
//! Every check is run for every (universe, method) pair. A check draws
//! instances (sets, families of sets, tabulated maps) that satisfy its
//! premises and looks for one violating its conclusion. When the whole
//! instance space fits in the trial budget it is enumerated instead.
//! Each (check, universe, method) owns a ChaCha stream seeded from a hash of
//! the four inputs, so reports do not depend on scheduling.

mod checks;
mod context;
mod rational;

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Serialize, Serializer};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::continuity::TabulatedFunction;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::group::GroupModel;
use crate::lattice::{set_to_mask, Mask};
use crate::methods::{is_regular_on, MethodDescriptor};
use crate::topology::PointSet;

use checks::{finite_checks, Check, Gate, Slot};
use context::Ctx;
pub use context::MAX_FUNCTION_SPACE;
use rational::{draw_set, rational_checks, RationalCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Expectation {
    #[serde(rename = "EXPECT-HOLDS")]
    Holds,
    #[serde(rename = "EXPECT-FALSIFIABLE")]
    Falsifiable,
    #[serde(rename = "OBSERVE")]
    Observe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Verified,
    CounterexampleFound,
    Skipped,
}

/// The instance that violated a check: sets first, then maps, in slot order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<PointSet>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<TabulatedFunction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub universe: GroupModel,
    #[serde(serialize_with = "display")]
    pub method: MethodDescriptor,
    pub expectation: Expectation,
    pub status: Status,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified_up_to_period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn display<T: fmt::Display, S: Serializer>(value: &T, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// Whether this record alone fails the suite.
    pub fn is_failure(&self) -> bool {
        self.expectation == Expectation::Holds && self.status == Status::CounterexampleFound
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub universes: Vec<GroupModel>,
    pub methods: Vec<MethodDescriptor>,
    pub trials: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            universes: default_universes(),
            methods: default_methods(),
            trials: 100,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

pub fn default_universes() -> Vec<GroupModel> {
    (2..=4).map(|n| GroupModel::cyclic(n).expect("n >= 2")).collect()
}

/// `lim` and every integer kernel of width one or two with entries in [-2, 2].
pub fn default_methods() -> Vec<MethodDescriptor> {
    let mut methods = vec![MethodDescriptor::Lim];
    methods.extend((-2..=2).map(|a| MethodDescriptor::int_kernel(&[a])));
    for a in -2..=2 {
        methods.extend((-2..=2).map(|b| MethodDescriptor::int_kernel(&[a, b])));
    }
    methods
}

/// Every check name, in report order.
pub fn check_names() -> Vec<&'static str> {
    finite_checks().iter().map(|c| c.name).collect()
}

fn stream(seed: u64, check: &str, universe: GroupModel, method: &MethodDescriptor) -> ChaCha20Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    for part in [check.to_string(), universe.to_string(), method.to_string()] {
        hasher.update(part.as_bytes());
        hasher.update([0]);
    }
    ChaCha20Rng::from_seed(hasher.finalize().into())
}

fn expectation(gate: Gate, regular: bool) -> Expectation {
    match gate {
        Gate::Always => Expectation::Holds,
        Gate::Regular if regular => Expectation::Holds,
        Gate::Regular | Gate::Observe => Expectation::Observe,
        Gate::Falsifiable => Expectation::Falsifiable,
    }
}

struct Pending<'a> {
    check: &'a str,
    universe: GroupModel,
    method: &'a MethodDescriptor,
    expectation: Expectation,
}

impl Pending<'_> {
    fn finish(self, status: Status, trials: usize, witness: Option<Witness>) -> Report {
        Report {
            check: self.check.to_string(),
            universe: self.universe,
            method: self.method.clone(),
            expectation: self.expectation,
            status,
            trials,
            witness,
            verified_up_to_period: None,
            reason: None,
        }
    }

    fn skip(self, reason: impl Into<String>) -> Report {
        let mut report = self.finish(Status::Skipped, 0, None);
        report.reason = Some(reason.into());
        report
    }
}

/// One instance: a value per slot (a mask, a family of masks or a map index).
#[derive(Clone)]
enum Pick {
    Set(Mask),
    Family(Vec<Mask>),
    Func(usize),
}

fn split(ctx: &Ctx, picks: &[Pick]) -> (Vec<Mask>, Vec<TabulatedFunction>) {
    let mut sets = Vec::new();
    let mut funcs = Vec::new();
    for pick in picks {
        match pick {
            Pick::Set(m) => sets.push(*m),
            Pick::Family(ms) => sets.extend(ms),
            Pick::Func(i) => funcs.push(ctx.table().all[*i].clone()),
        }
    }
    (sets, funcs)
}

fn domain(ctx: &Ctx, slot: Slot) -> Vec<usize> {
    match slot {
        Slot::Set(kind) | Slot::Family(kind) => {
            ctx.space.all_subsets().filter(|&a| kind.admits(ctx, a)).map(|a| a as usize).collect()
        }
        Slot::Func(pool) => (0..ctx.table().all.len()).filter(|&i| pool.admits(ctx, i)).collect(),
    }
}

fn pick(slot: Slot, value: usize) -> Pick {
    match slot {
        Slot::Set(_) => Pick::Set(value as Mask),
        Slot::Family(_) => Pick::Family(vec![value as Mask]),
        Slot::Func(_) => Pick::Func(value),
    }
}

fn run_finite(ctx: &Ctx, check: &Check, trials: usize, seed: u64) -> Report {
    let pending = Pending {
        check: check.name,
        universe: ctx.model(),
        method: ctx.method(),
        expectation: expectation(check.gate, ctx.regular),
    };
    let needs_table = check.uses_continuity || check.slots.iter().any(|s| matches!(s, Slot::Func(_)));
    if needs_table && ctx.functions.is_none() {
        return pending.skip(format!("map enumeration needs a universe of at most {MAX_FUNCTION_SPACE} points"));
    }
    let period = if check.uses_continuity { Some(ctx.table().bound) } else { None };
    let domains: Vec<Vec<usize>> = check.slots.iter().map(|&s| domain(ctx, s)).collect();
    if domains.iter().any(Vec::is_empty) {
        let mut report = pending.finish(Status::Verified, 0, None);
        report.reason = Some("vacuous: no instance satisfies the premises".into());
        report.verified_up_to_period = period;
        return report;
    }

    let mut tried = 0;
    let mut found = None;
    let mut test = |picks: &[Pick]| {
        tried += 1;
        let (sets, funcs) = split(ctx, picks);
        if (check.violated)(ctx, &sets, &funcs) {
            found = Some(Witness { sets: sets.iter().map(|&m| ctx.space.to_set(m)).collect(), functions: funcs });
            true
        } else {
            false
        }
    };

    let has_family = check.slots.iter().any(|s| matches!(s, Slot::Family(_)));
    let total = domains.iter().try_fold(1usize, |acc, d| acc.checked_mul(d.len()));
    match total {
        Some(total) if !has_family && total <= trials => {
            let mut digits = vec![0usize; domains.len()];
            for _ in 0..total {
                let picks: Vec<Pick> =
                    check.slots.iter().zip(&domains).zip(&digits).map(|((&s, d), &i)| pick(s, d[i])).collect();
                if test(&picks) {
                    break;
                }
                for (digit, d) in digits.iter_mut().zip(&domains).rev() {
                    *digit += 1;
                    if *digit < d.len() {
                        break;
                    }
                    *digit = 0;
                }
            }
        }
        _ => {
            let mut rng = stream(seed, check.name, ctx.model(), ctx.method());
            let full = ctx.space.full() as usize;
            let mut instances: Vec<Vec<Pick>> = [0, full]
                .into_iter()
                .filter(|v| check.slots.iter().zip(&domains).all(|(s, d)| matches!(s, Slot::Func(_)) || d.contains(v)))
                .map(|v| {
                    check
                        .slots
                        .iter()
                        .zip(&domains)
                        .map(|(&s, d)| if matches!(s, Slot::Func(_)) { pick(s, d[0]) } else { pick(s, v) })
                        .collect()
                })
                .collect();
            for _ in 0..trials {
                let picks = check
                    .slots
                    .iter()
                    .zip(&domains)
                    .map(|(&s, d)| match s {
                        Slot::Family(_) => {
                            let len = rng.gen_range(1..=4);
                            Pick::Family((0..len).map(|_| d[rng.gen_range(0..d.len())] as Mask).collect())
                        }
                        _ => pick(s, d[rng.gen_range(0..d.len())]),
                    })
                    .collect();
                instances.push(picks);
            }
            for picks in &instances {
                if test(picks) {
                    break;
                }
            }
        }
    }

    let status = if found.is_some() { Status::CounterexampleFound } else { Status::Verified };
    let mut report = pending.finish(status, tried, found);
    report.verified_up_to_period = period;
    report
}

fn run_rational(method: &MethodDescriptor, check: &RationalCheck, trials: usize, seed: u64) -> Report {
    let universe = GroupModel::RationalLine;
    let pending = Pending {
        check: check.name,
        universe,
        method,
        expectation: expectation(check.gate, crate::methods::is_regular(method)),
    };
    if method.kernel_bank().is_none() {
        return pending.skip("closures under cesaro on the rational line are only approximated");
    }
    let mut rng = stream(seed, check.name, universe, method);
    let mut instances = (check.pinned)();
    for _ in 0..trials {
        let len = rng.gen_range(check.arity.0..=check.arity.1);
        instances.push((0..len).map(|_| draw_set(&mut rng)).collect());
    }
    let mut tried = 0;
    for sets in instances {
        tried += 1;
        match (check.violated)(method, &sets) {
            Ok(false) => {}
            Ok(true) => {
                let witness = Witness { sets, functions: Vec::new() };
                return pending.finish(Status::CounterexampleFound, tried, Some(witness));
            }
            Err(e) => return pending.skip(e.to_string()),
        }
    }
    pending.finish(Status::Verified, tried, None)
}

/// Runs every check for every (universe, method) pair, in that order.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<Report>> {
    if config.trials == 0 {
        return Err(Error::OutOfRange("trials must be at least 1".into()));
    }
    let finite = finite_checks();
    let on_line = rational_checks();
    let pairs: Vec<(GroupModel, &MethodDescriptor)> =
        config.universes.iter().flat_map(|&u| config.methods.iter().map(move |m| (u, m))).collect();
    let contexts: Vec<Option<std::result::Result<Ctx, Error>>> =
        exec::map_collect(config.execution, &pairs, |&(u, m)| u.is_finite().then(|| Ctx::new(m, u)));
    let jobs: Vec<(usize, usize)> = (0..pairs.len()).flat_map(|p| (0..finite.len()).map(move |c| (p, c))).collect();
    let reports = exec::map_collect(config.execution, &jobs, |&(p, c)| {
        let (universe, method) = pairs[p];
        let check = &finite[c];
        match &contexts[p] {
            Some(Ok(ctx)) => run_finite(ctx, check, config.trials, config.seed),
            Some(Err(e)) => {
                let regular = is_regular_on(method, universe).unwrap_or(false);
                Pending { check: check.name, universe, method, expectation: expectation(check.gate, regular) }
                    .skip(e.to_string())
            }
            None => match on_line.iter().find(|r| r.name == check.name) {
                Some(rc) => run_rational(method, rc, config.trials, config.seed),
                None => {
                    let regular = crate::methods::is_regular(method);
                    Pending { check: check.name, universe, method, expectation: expectation(check.gate, regular) }
                        .skip("requires finite universe")
                }
            },
        }
    });
    Ok(reports)
}

/// Line-delimited JSON, one record per line.
pub fn to_ndjson(reports: &[Report]) -> String {
    reports.iter().map(|r| r.to_json() + "\n").collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub records: usize,
    pub verified: usize,
    pub counterexamples: usize,
    pub skipped: usize,
    /// EXPECT-HOLDS records that found a counterexample.
    pub failures: Vec<String>,
    /// EXPECT-FALSIFIABLE checks that were never refuted.
    pub unfalsified: Vec<String>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.unfalsified.is_empty()
    }
}

pub fn summarize(reports: &[Report]) -> Summary {
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let failures = reports
        .iter()
        .filter(|r| r.is_failure())
        .map(|r| format!("{} on {} with {}", r.check, r.universe, r.method))
        .collect();
    let falsifiable: BTreeSet<&str> =
        reports.iter().filter(|r| r.expectation == Expectation::Falsifiable).map(|r| r.check.as_str()).collect();
    let unfalsified = falsifiable
        .into_iter()
        .filter(|name| !reports.iter().any(|r| r.check == *name && r.status == Status::CounterexampleFound))
        .map(String::from)
        .collect();
    Summary {
        records: reports.len(),
        verified: count(Status::Verified),
        counterexamples: count(Status::CounterexampleFound),
        skipped: count(Status::Skipped),
        failures,
        unfalsified,
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} records: {} verified, {} counterexamples, {} skipped",
            self.records, self.verified, self.counterexamples, self.skipped
        )?;
        for failure in &self.failures {
            writeln!(f, "FAIL expected to hold: {failure}")?;
        }
        for name in &self.unfalsified {
            writeln!(f, "FAIL never falsified: {name}")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Re-runs the check named in `report` on its witness. `Ok(true)` means the
/// violation is reproduced.
pub fn replay(report: &Report) -> Result<bool> {
    let witness =
        report.witness.as_ref().ok_or_else(|| Error::InvalidScheme(format!("{} carries no witness", report.check)))?;
    replay_witness(&report.check, report.universe, &report.method, witness)
}

fn replay_witness(check: &str, universe: GroupModel, method: &MethodDescriptor, witness: &Witness) -> Result<bool> {
    if !universe.is_finite() {
        let rc = rational_checks()
            .into_iter()
            .find(|r| r.name == check)
            .ok_or_else(|| Error::Parse(format!("no rational-line check named {check}")))?;
        return (rc.violated)(method, &witness.sets);
    }
    let fc = finite_checks()
        .into_iter()
        .find(|c| c.name == check)
        .ok_or_else(|| Error::Parse(format!("no check named {check}")))?;
    let ctx = Ctx::new(method, universe)?;
    let sets: Vec<Mask> = witness.sets.iter().map(set_to_mask).collect();
    Ok((fc.violated)(&ctx, &sets, &witness.functions))
}

/// Replays one NDJSON record as produced by [`to_ndjson`].
pub fn replay_line(line: &str) -> Result<bool> {
    let value: Value = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
    let field = |name: &str| {
        value
            .get(name)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("record has no string field {name:?}")))
    };
    let check = field("check")?;
    let universe: GroupModel = field("universe")?.parse()?;
    let method: MethodDescriptor = field("method")?.parse()?;
    let witness = value.get("witness").ok_or_else(|| Error::Parse("record has no witness".into()))?;
    let strings =
        |name: &str| -> Vec<Value> { witness.get(name).and_then(Value::as_array).cloned().unwrap_or_default() };
    let sets = strings("sets")
        .iter()
        .map(|set| {
            let items = set.as_array().ok_or_else(|| Error::Parse("a witness set must be an array".into()))?;
            let elements = items
                .iter()
                .map(|e| universe.parse_element(e.as_str().unwrap_or_default()))
                .collect::<Result<Vec<_>>>()?;
            PointSet::new(universe, elements)
        })
        .collect::<Result<Vec<_>>>()?;
    let functions = strings("functions")
        .iter()
        .map(|f| TabulatedFunction::parse(universe, f.as_str().unwrap_or_default()))
        .collect::<Result<Vec<_>>>()?;
    replay_witness(check, universe, &method, &Witness { sets, functions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> GroupModel {
        GroupModel::cyclic(n).unwrap()
    }

    fn small(methods: &[&str], universes: Vec<GroupModel>) -> SuiteConfig {
        SuiteConfig {
            universes,
            methods: methods.iter().map(|m| m.parse().unwrap()).collect(),
            trials: 50,
            seed: 7,
            execution: Execution::Sequential,
        }
    }

    #[test]
    fn default_method_list() {
        let methods = default_methods();
        assert_eq!(methods.len(), 31);
        assert_eq!(methods.iter().map(|m| m.to_string()).collect::<BTreeSet<_>>().len(), 31);
    }

    #[test]
    fn lim_on_z3_has_no_counterexamples_except_observations() {
        let reports = run_suite(&small(&["lim"], vec![z(3)])).unwrap();
        for r in &reports {
            assert_ne!(r.status, Status::Skipped, "{}", r.check);
            if r.expectation == Expectation::Holds {
                assert_eq!(r.status, Status::Verified, "{}", r.check);
            }
        }
        // everything is clopen under lim on a discrete universe
        let union = reports.iter().find(|r| r.check == "union-of-closed").unwrap();
        assert_eq!(union.status, Status::Verified);
    }

    #[test]
    fn falsifiable_checks_are_refuted_by_kernel_two_minus_one() {
        let reports = run_suite(&small(&["kernel:2,-1", "kernel:2"], vec![z(3)])).unwrap();
        let summary = summarize(&reports);
        assert!(summary.unfalsified.is_empty(), "{summary}");
        for r in reports.iter().filter(|r| r.status == Status::CounterexampleFound) {
            assert!(replay(r).unwrap(), "{}", r.check);
            assert!(replay_line(&r.to_json()).unwrap(), "{}", r.check);
        }
    }

    #[test]
    fn open_map_sum_claim_fails_on_z3() {
        let reports = run_suite(&small(&["kernel:2,-1"], vec![z(3)])).unwrap();
        let iv = reports.iter().find(|r| r.check == "composition-and-sum/iv").unwrap();
        assert_eq!(iv.expectation, Expectation::Holds);
        assert_eq!(iv.status, Status::CounterexampleFound);
        let w = iv.witness.as_ref().unwrap();
        let sum = w.functions[0].plus(&w.functions[1]);
        let space = crate::lattice::FiniteSpace::new(&iv.method, z(3), Execution::Sequential).unwrap();
        assert!(!crate::continuity::is_open_map(&space, &sum));
    }

    #[test]
    fn rational_line_runs_the_pinned_example() {
        let reports = run_suite(&small(&["kernel:1/2,1/2"], vec![GroupModel::RationalLine])).unwrap();
        let union = reports.iter().find(|r| r.check == "union-of-closed").unwrap();
        assert_eq!(union.status, Status::CounterexampleFound);
        assert_eq!(union.trials, 1);
        let sets: Vec<String> = union.witness.as_ref().unwrap().sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(sets, ["{0}", "{1}"]);
        let skipped = reports.iter().find(|r| r.check == "unions-open").unwrap();
        assert_eq!(skipped.reason.as_deref(), Some("requires finite universe"));
        assert!(replay_line(&union.to_json()).unwrap());
    }

    #[test]
    fn unsupported_pairs_are_skipped_with_reasons() {
        let reports = run_suite(&small(&["cesaro"], vec![z(2)])).unwrap();
        assert!(reports.iter().all(|r| r.status == Status::Skipped && r.reason.is_some()));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let mut config = small(&["kernel:2,-1", "kernel:1,1", "lim"], vec![z(2), z(3)]);
        let seq = to_ndjson(&run_suite(&config).unwrap());
        config.execution = Execution::Parallel;
        assert_eq!(seq, to_ndjson(&run_suite(&config).unwrap()));
    }

    #[test]
    fn zero_trials_rejected() {
        let mut config = small(&["lim"], vec![z(2)]);
        config.trials = 0;
        assert!(run_suite(&config).is_err());
    }
}
