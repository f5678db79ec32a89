//! One PASS/FAIL line per acceptance criterion.

use std::time::{Duration, Instant};

use pavforge_core::suites::{run_suite, Status, SuiteOptions};

struct Criterion {
    id: usize,
    suite: &'static str,
    budget: Option<Duration>,
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, suite: "axioms-all", budget: Some(Duration::from_secs(30)) },
    Criterion { id: 2, suite: "degree-sum", budget: Some(Duration::from_secs(10)) },
    Criterion { id: 3, suite: "newton-limsup", budget: None },
    Criterion { id: 4, suite: "galois-orbits", budget: None },
    Criterion { id: 5, suite: "pnorm", budget: None },
    Criterion { id: 6, suite: "separation", budget: None },
    Criterion { id: 7, suite: "flow-laws", budget: None },
    Criterion { id: 8, suite: "disc-density", budget: Some(Duration::from_secs(20)) },
    Criterion { id: 9, suite: "reduction-diagram", budget: None },
];

#[test]
fn acceptance() {
    let opts = SuiteOptions { tol: 1e-9 };
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let rep = run_suite(c.suite, &opts);
        let elapsed = start.elapsed();
        let in_time = c.budget.map_or(true, |b| elapsed <= b);
        let (ok, note) = match &rep {
            Ok(r) => {
                let first = r.witnesses.first().map(|w| w.to_string()).unwrap_or_default();
                let first: String = first.chars().take(300).collect();
                (r.status == Status::Pass, format!("{} checks, status {}, {} witnesses {}", r.checks, r.status.name(), r.witnesses.len(), first))
            }
            Err(e) => (false, format!("error: {}", e)),
        };
        let pass = ok && in_time;
        let budget = c.budget.map_or(String::new(), |b| format!(" (budget {:.0}s)", b.as_secs_f64()));
        println!(
            "criterion {} [{}]: {} in {:.2}s{}; {}",
            c.id,
            c.suite,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget,
            note
        );
        if !pass {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {:?}", failed);
}
