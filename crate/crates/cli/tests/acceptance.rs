//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use icowalk::prelude::*;
use icowalk::suite::{
    check_corollary1, check_corollary2, check_lemma1, check_lemma2, check_lemma3, check_oracle,
    check_theorem1, check_theorem2, check_theorem3, CheckReport, THEOREM3_SWEEP,
};
use icowalk::PROBABILITY_TOL;

const SEED: u64 = 1;
const BIN: &str = env!("CARGO_BIN_EXE_icowalk");

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn from_reports(reports: &[CheckReport], elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.check.as_str())
        .collect();
    let worst = reports
        .iter()
        .map(|r| format!("{}={:.1e}/{:.0e}", r.check, r.max_deviation, r.tolerance))
        .collect::<Vec<_>>();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let mut detail = format!("{} in {elapsed:.2?}", worst.join(" "));
    if !failed.is_empty() {
        detail = format!("failed: {}; {detail}", failed.join(","));
    }
    if !in_time {
        detail = format!("over time limit {:?}; {detail}", limit.unwrap());
    }
    outcome(failed.is_empty() && in_time, detail)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn hadamard_pair_end_to_end() -> Outcome {
    let start = Instant::now();
    let p0 = ProcessSpec::uniform("p0", CoinParams::hadamard(), 2).unwrap();
    let p1 = ProcessSpec::uniform("p1", CoinParams::new(0.0, 0.0, 0.0), 2).unwrap();
    let init = make_initial_state(2, &balanced_order(2), 0, Chirality::Forward, 4).unwrap();
    let out = apply_2switch(init, &p0, &p1).unwrap();

    let mut ok = true;
    let mut worst = 0.0_f64;
    for m in 0..2 {
        let left = project_coin(&project_order(&out, m).unwrap(), Chirality::Backward);
        let d = distribution(&left, true).unwrap();
        for x in d.window().sites() {
            let target = if [-4, -2, 0, 2].contains(&x) {
                0.25
            } else {
                0.0
            };
            worst = worst.max((d.prob(x) - target).abs());
        }
    }
    ok &= worst < 1e-10;
    let weight = |m, phi| project_coin(&project_order(&out, m).unwrap(), phi).weight();
    let w_r0 = weight(0, Chirality::Forward);
    let w_l0 = weight(0, Chirality::Backward);
    let w_l1 = weight(1, Chirality::Backward);
    let w_r1 = weight(1, Chirality::Forward);
    ok &= (w_r0 - 0.5).abs() < 1e-12 && (w_l0 - 0.25).abs() < 1e-12 && (w_l1 - 0.25).abs() < 1e-12;
    ok &= w_r1 < 1e-24;
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_millis(100);
    outcome(
        ok,
        format!(
            "uniform dev {worst:.1e}; weights {w_r0:.3} {w_l0:.3} {w_l1:.3} {w_r1:.1e}; {elapsed:.2?}"
        ),
    )
}

fn theorem3_sweep() -> Outcome {
    let (reports, elapsed) = timed(|| {
        THEOREM3_SWEEP
            .iter()
            .flat_map(|&(n, s)| check_theorem3(n, s).unwrap())
            .collect::<Vec<_>>()
    });
    let mut o = from_reports(&reports, elapsed, Some(Duration::from_secs(5)));
    if o.passed {
        o.detail = format!("{} checks in {elapsed:.2?}", reports.len());
    }
    o
}

fn figure1(dir: &Path) -> Outcome {
    let start = Instant::now();
    let status = Command::new(BIN)
        .args(["figure1", "--steps", "16,32,64,100,200,300", "--out"])
        .arg(dir)
        .output()
        .expect("run figure1");
    let elapsed = start.elapsed();
    if !status.status.success() {
        return outcome(false, format!("exit {:?}", status.status.code()));
    }
    let rows = |name: &str| -> Vec<(i64, f64)> {
        fs::read_to_string(dir.join(name))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let (x, p) = l.split_once(',').unwrap();
                (x.parse().unwrap(), p.parse().unwrap())
            })
            .collect()
    };
    let files = fs::read_dir(dir).unwrap().count();
    let bound = 100.0 / 2f64.sqrt() + 10.0;
    let outside: f64 = rows("hadamard_100.csv")
        .iter()
        .filter(|(x, _)| (*x as f64).abs() > bound)
        .map(|r| r.1)
        .sum();
    let mut ico_dev = 0.0_f64;
    let mut ico_rows_ok = true;
    for t in [16, 32, 64, 100, 200, 300] {
        let r = rows(&format!("ico_{t}.csv"));
        ico_rows_ok &= r.len() == t;
        for (_, p) in r {
            ico_dev = ico_dev.max((p - 1.0 / t as f64).abs());
        }
    }
    let ok = elapsed < Duration::from_secs(30)
        && files == 18
        && outside < 0.05
        && ico_rows_ok
        && ico_dev < PROBABILITY_TOL;
    outcome(
        ok,
        format!(
            "{files} files in {elapsed:.2?}; hadamard T=100 outside mass {outside:.2e}; ico row dev {ico_dev:.1e}"
        ),
    )
}

fn determinism(dir: &Path) -> Outcome {
    let run = |name: &str| {
        let path = dir.join(name);
        let status = Command::new(BIN)
            .args(["verify", "--suite", "all", "--seed", "1", "--out"])
            .arg(&path)
            .output()
            .expect("run verify");
        (status.status.code(), fs::read(&path).unwrap_or_default())
    };
    let (c1, a) = run("a.json");
    let (c2, b) = run("b.json");
    outcome(
        !a.is_empty() && a == b && c1 == Some(0) && c2 == Some(0),
        format!(
            "{} bytes, identical={}, exits {c1:?} {c2:?}",
            a.len(),
            a == b
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let scratch = tempfile::tempdir().expect("temp dir");
    let fig_dir = scratch.path().join("figure1");

    let criteria: Vec<Criterion> = vec![
        (
            "1 two-process canonical switch",
            Box::new(hadamard_pair_end_to_end),
        ),
        ("2 uniform protocol sweep", Box::new(theorem3_sweep)),
        (
            "3 F1 symmetry (100 trials)",
            Box::new(|| {
                let (r, t) = timed(|| check_theorem1(SEED, 100, 5).unwrap());
                from_reports(&[r], t, Some(Duration::from_secs(10)))
            }),
        ),
        (
            "4 operator identities (50+50 trials)",
            Box::new(|| {
                let (r, t) = timed(|| {
                    vec![
                        check_lemma1(SEED, 50).unwrap(),
                        check_corollary2(SEED, 50).unwrap(),
                    ]
                });
                from_reports(&r, t, None)
            }),
        ),
        (
            "5 empty same-coin branch (50 trials)",
            Box::new(|| {
                let (r, t) = timed(|| check_corollary1(SEED, 50).unwrap());
                from_reports(&[r], t, None)
            }),
        ),
        (
            "6 branch equivalence and decomposition (50 trials)",
            Box::new(|| {
                let (r, t) = timed(|| {
                    let mut v = vec![check_lemma2(SEED, 50).unwrap()];
                    v.extend(check_theorem2(SEED, 50, 5).unwrap());
                    v
                });
                from_reports(&r, t, None)
            }),
        ),
        (
            "7 ordering translation (50 trials)",
            Box::new(|| {
                let (r, t) = timed(|| check_lemma3(SEED, 50).unwrap());
                from_reports(&[r], t, None)
            }),
        ),
        (
            "8 expansion oracle (50 trials)",
            Box::new(|| {
                let (r, t) = timed(|| check_oracle(SEED, 50, 10).unwrap());
                from_reports(&r, t, None)
            }),
        ),
        ("9 comparison data set", Box::new(move || figure1(&fig_dir))),
        (
            "10 deterministic verify reports",
            Box::new(|| determinism(scratch.path())),
        ),
    ];

    let mut all = true;
    for (name, check) in &criteria {
        let o = check();
        all &= o.passed;
        println!(
            "{} criterion {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
