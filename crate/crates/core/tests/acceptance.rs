//! Acceptance suite: one line per criterion, exact equality throughout.
//!
//! Runs without the libtest harness so the criterion lines always reach
//! stdout. The process fails if any criterion other than the known
//! forms-derivation mismatch (criterion 7) fails, or if that one changes.

use std::process::Command;
use std::sync::Arc;

use superplane_core::algebra::{
    defining_relations, verify_classical_limit, verify_rewriting, ConsistencyCoefficients, Family, Letter, Relations,
    Rule, Word,
};
use superplane_core::calculus::{derive_two_form_relations, verify_leibniz, verify_nilpotency};
use superplane_core::coeffs::{Bindings, Param, ParamRational};
use superplane_core::forms::{derive_cross_relations, derive_form_form_relations, verify_omega};
use superplane_core::hopf::{verify_axioms, AntipodeConvention};
use superplane_core::report::{CheckRecord, Status};
use superplane_core::rmatrix::{renaming, solve_consistency, solve_records, verify_braid};

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: Vec<String>, ok: impl Into<String>) -> Outcome {
        if failures.is_empty() {
            Outcome { pass: true, detail: ok.into() }
        } else {
            Outcome { pass: false, detail: failures.join("; ") }
        }
    }
}

fn p(x: Param) -> ParamRational {
    ParamRational::param(x)
}

fn at_s_qr() -> Bindings {
    Bindings::from([(Param::S, &p(Param::Q) * &p(Param::R))])
}

fn failures(records: &[CheckRecord]) -> Vec<String> {
    records.iter().filter(|r| r.status == Status::Fail).map(|r| r.to_string()).collect()
}

fn criterion_1() -> Outcome {
    let mut bad = failures(&solve_records());
    let families = solve_consistency();
    if families.len() != 2 {
        bad.push(format!("{} families", families.len()));
    }
    for family in Family::ALL {
        let expected = ConsistencyCoefficients::for_family(family);
        let hit = families.iter().filter_map(|s| s.rename(&renaming(family))).find(|c| *c == expected);
        match hit {
            None => bad.push(format!("no family renames to Family {family}")),
            Some(c) => {
                for (name, v) in c.consistency_residuals() {
                    if !v.is_zero() {
                        bad.push(format!("Family {family}: {name} = {v}"));
                    }
                }
            }
        }
    }
    Outcome::new(bad, "two families, both renamed families solve the system")
}

fn rule_set(rules: &[Rule]) -> Vec<((Letter, Letter), Vec<(ParamRational, Word)>)> {
    let mut out: Vec<_> = rules
        .iter()
        .map(|r| {
            let mut rhs: Vec<_> = r.rhs.iter().filter(|(c, _)| !c.is_zero()).cloned().collect();
            rhs.sort_by(|a, b| a.1.cmp(&b.1));
            (r.lhs, rhs)
        })
        .collect();
    out.sort_by_key(|(lhs, _)| *lhs);
    out
}

fn criterion_2() -> Outcome {
    use Letter::*;
    let pq = &p(Param::P) * &p(Param::Q);
    let r_inv = p(Param::R).inv().unwrap();
    let mut bad = Vec::new();
    for (family, k) in [(Family::I, pq), (Family::II, r_inv)] {
        let expected = vec![
            ((Dx, DTheta), vec![(k, Word(vec![DTheta, Dx]))]),
            ((Dx, Dx), vec![]),
        ];
        match derive_two_form_relations(family, &Bindings::new()) {
            Ok(derived) => {
                let got = rule_set(&derived);
                if got != expected {
                    let shown: Vec<String> = derived.iter().map(|r| r.display().to_string()).collect();
                    bad.push(format!("Family {family}: derived {}", shown.join(", ")));
                }
            }
            Err(e) => bad.push(format!("Family {family}: {e}")),
        }
    }
    Outcome::new(bad, "(dx)^2 = 0 and dx dth = pq dth dx (I), dx dth = r^-1 dth dx (II)")
}

fn gamma(family: Family, bindings: &Bindings) -> Arc<Relations> {
    Relations::differential(family, bindings).expect("relations build")
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    for family in Family::ALL {
        let rels = gamma(family, &Bindings::new());
        let records = [
            verify_nilpotency(&rels, 200, SEED).unwrap(),
            verify_leibniz(&rels, 200, SEED).unwrap(),
        ];
        bad.extend(failures(&records).into_iter().map(|f| format!("Family {family}: {f}")));
    }
    Outcome::new(bad, "d^2 = 0 and graded Leibniz on 200 elements per family, word length <= 8")
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for family in Family::ALL {
        let rels = gamma(family, &Bindings::new());
        let labels: Vec<&str> = defining_relations(&rels).iter().map(|(eq, _, _)| *eq).collect();
        let (first, second) = match family {
            Family::I => ("11a", "12a"),
            Family::II => ("11b", "12b"),
        };
        for want in ["1", first, second] {
            if !labels.contains(&want) {
                bad.push(format!("Family {family}: no relation labelled {want}"));
            }
        }
        let records = verify_rewriting(&rels, 500, SEED).unwrap();
        bad.extend(failures(&records).into_iter().map(|f| format!("Family {family}: {f}")));
    }
    Outcome::new(bad, "all relations normalise to 0; strategies agree on 500 words of length <= 12 per family")
}

fn hopf_records(family: Family) -> Vec<CheckRecord> {
    let bindings = match family {
        Family::I => Bindings::new(),
        Family::II => at_s_qr(),
    };
    verify_axioms(family, &bindings, 200, SEED, AntipodeConvention::Graded).unwrap()
}

/// `N` in a record name ending in "on N elements".
fn element_count(name: &str) -> Option<usize> {
    name.strip_suffix(" elements")?.rsplit(' ').next()?.parse().ok()
}

fn criterion_5(records: &[(Family, Vec<CheckRecord>)]) -> Outcome {
    let mut bad = Vec::new();
    for (family, recs) in records {
        let mine: Vec<CheckRecord> = recs.iter().filter(|r| r.name.starts_with("superplane:")).cloned().collect();
        for eq in ["15", "16", "17", "18"] {
            if !mine.iter().any(|r| r.paper_eq == eq) {
                bad.push(format!("Family {family}: no superplane check for ({eq})"));
            }
        }
        if !mine.iter().all(|r| element_count(&r.name).is_some_and(|n| n >= 200)) {
            bad.push(format!("Family {family}: superplane checks ran on fewer elements than expected"));
        }
        bad.extend(failures(&mine).into_iter().map(|f| format!("Family {family}: {f}")));
    }
    Outcome::new(bad, "coassociativity, counit, antipode and S^2 = id on generators and 200 random elements")
}

fn criterion_6(records: &[(Family, Vec<CheckRecord>)]) -> Outcome {
    let mut bad = Vec::new();
    for (family, recs) in records {
        let mine: Vec<CheckRecord> = recs.iter().filter(|r| !r.name.starts_with("superplane:")).cloned().collect();
        for eq in ["24", "26"] {
            if !mine.iter().any(|r| r.paper_eq == eq && r.status == Status::Pass) {
                bad.push(format!("Family {family}: no passing phi check for ({eq})"));
            }
        }
        if !mine.iter().any(|r| r.name.starts_with("coproduct preserves")) {
            bad.push(format!("Family {family}: no relation-invariance checks"));
        }
        if !mine.iter().any(|r| r.name.contains("antipode laws (graded convention)")) {
            bad.push(format!("Family {family}: antipode convention not recorded"));
        }
        bad.extend(failures(&mine).into_iter().map(|f| format!("Family {family}: {f}")));
    }
    Outcome::new(bad, "phi identities, relation invariance and Hopf laws pass (graded antipode; Family II at s = q*r)")
}

/// The derivation against the printed relations, plus the Ω checks.
fn criterion_7() -> (Outcome, Vec<String>) {
    let mut mismatched = Vec::new();
    let mut bad = Vec::new();
    for family in Family::ALL {
        let derived = derive_cross_relations(family, &Bindings::new())
            .and_then(|mut d| {
                d.extend(derive_form_form_relations(family, &Bindings::new())?);
                Ok(d)
            })
            .unwrap();
        for d in derived {
            if !d.matches() {
                mismatched.push(format!("{} {:?}", d.paper_eq, d.lhs));
                bad.push(format!(
                    "({}) printed {} but derived {}",
                    d.paper_eq,
                    d.printed_rule().display(),
                    d.derived_rule().display()
                ));
            }
        }
    }
    for (family, bindings) in [(Family::I, Bindings::new()), (Family::II, at_s_qr())] {
        let records = verify_omega(family, &bindings, 200, SEED, AntipodeConvention::Graded).unwrap();
        for want in ["Delta(x w) = ", "Delta(w^2) = 0"] {
            if !records.iter().any(|r| r.name.starts_with(want) && r.status == Status::Pass) {
                bad.push(format!("Family {family}: {want} missing or failing"));
            }
        }
        bad.extend(failures(&records).into_iter().map(|f| format!("Family {family}: {f}")));
    }
    (
        Outcome::new(bad, "(38), (39) reproduced; forms Hopf axioms and compatibilities pass"),
        mismatched,
    )
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let braid = |family, bindings: &Bindings| verify_braid(family, bindings).unwrap();
    let identity_records = |recs: &[CheckRecord]| -> Vec<CheckRecord> {
        recs.iter().filter(|r| r.paper_eq == "9" && r.status != Status::Info).cloned().collect()
    };

    let one = braid(Family::I, &Bindings::new());
    let ids = identity_records(&one);
    if ids.len() != 2 {
        bad.push(format!("Family I: {} identity checks", ids.len()));
    }
    bad.extend(failures(&ids).into_iter().map(|f| format!("Family I: {f}")));
    if !one.iter().any(|r| r.status == Status::Info && r.name.contains("printed Ch")) {
        bad.push("Family I: printed-matrix finding not reported".into());
    }
    if !one.iter().any(|r| r.status == Status::Info && r.name.contains("ungraded permutation")) {
        bad.push("Family I: leg-embedding finding not reported".into());
    }

    let generic = braid(Family::II, &Bindings::new());
    let ids = identity_records(&generic);
    if ids.len() != 2 || ids.iter().any(|r| r.status != Status::Fail) {
        bad.push("Family II: generic s does not leave a residual".into());
    }
    let vanishing = generic
        .iter()
        .filter(|r| r.name.ends_with("residual at s = q*r") && r.witness.as_deref() == Some("vanishes"))
        .count();
    if vanishing != 2 {
        bad.push(format!("Family II: residual vanishes at s = q*r for {vanishing} of 2 identities"));
    }

    let special = braid(Family::II, &at_s_qr());
    let ids = identity_records(&special);
    if ids.len() != 2 {
        bad.push(format!("Family II at s = q*r: {} identity checks", ids.len()));
    }
    bad.extend(failures(&ids).into_iter().map(|f| format!("Family II at s = q*r: {f}")));
    Outcome::new(bad, "Ch_I braids for generic p, q; Ch_II residual nonzero for generic s, zero at s = q*r")
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    for family in Family::ALL {
        let coherence: Vec<CheckRecord> = verify_braid(family, &Bindings::new())
            .unwrap()
            .into_iter()
            .filter(|r| r.paper_eq == "7")
            .collect();
        if coherence.len() != 4 {
            bad.push(format!("Family {family}: {} rules compared", coherence.len()));
        }
        bad.extend(failures(&coherence).into_iter().map(|f| format!("Family {family}: {f}")));
    }
    Outcome::new(bad, "rules generated from C equal the rewrite rules for both families")
}

fn criterion_10() -> Outcome {
    let records = verify_classical_limit(100, SEED).unwrap();
    Outcome::new(failures(&records), "q = p = 1 gives the free supercommutative algebra on 100 elements")
}

fn criterion_11() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_superplane"))
            .args(["verify", "all", "--family", "I", "--fuel", "100", "--seed", "42", "--json"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let mut bad = Vec::new();
    for (i, out) in [&a, &b].into_iter().enumerate() {
        if out.status.code() != Some(0) {
            bad.push(format!("run {} exited with {:?}", i + 1, out.status.code()));
        }
    }
    if a.stdout != b.stdout {
        bad.push("reports differ".into());
    }
    if serde_json::from_slice::<serde_json::Value>(&a.stdout).is_err() {
        bad.push("report is not JSON".into());
    }
    Outcome::new(bad, format!("two runs byte-identical ({} bytes), exit code 0", a.stdout.len()))
}

fn main() {
    let hopf: Vec<(Family, Vec<CheckRecord>)> = Family::ALL.into_iter().map(|f| (f, hopf_records(f))).collect();
    let (seventh, mismatched) = criterion_7();
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&hopf),
        criterion_6(&hopf),
        seventh,
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
    ];

    let mut unexpected = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        let n = i + 1;
        println!("criterion {n}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if n != 7 && !o.pass {
            unexpected.push(n);
        }
    }

    // The reference θw relation (Family I) and wu coefficient (Family II)
    // disagree with the derivation; any other failure here is a regression.
    let known = ["38a (Theta, W)", "39b (W, U)"];
    let seventh = &outcomes[6];
    let only_known = mismatched.len() == known.len()
        && known.iter().all(|k| mismatched.iter().any(|m| m == k))
        && seventh.detail.split("; ").count() == known.len();
    if seventh.pass || !only_known {
        unexpected.push(7);
    }
    println!("criterion 7 known mismatches: {}", mismatched.join(", "));

    if unexpected.is_empty() {
        println!("acceptance: all criteria as expected (criterion 7 fails on the two printed relations)");
    } else {
        println!("acceptance: unexpected result for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
