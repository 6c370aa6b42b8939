//! Acceptance run: one PASS/FAIL line per criterion. Tolerances are pinned
//! below; every comparison is exact.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use ellipt::checks::{self, CheckResult};
use ellipt::cli::{run_assoc, AssocCli};
use ellipt::{json, report};
use ellipt_core::algebra::{IntersectionForm, TruncatedAlgebra};
use ellipt_core::associator::{AssociatorContext, AssociatorSeries};
use ellipt_core::diagrams;
use ellipt_core::elliptic::{build_e_phi, EllipticContext};
use ellipt_core::lie::{self, lyndon_words, Alphabet, LieSeries};
use ellipt_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SOLVE_BUDGET: Duration = Duration::from_secs(60);
const ELLIPTIC_BUDGET: Duration = Duration::from_secs(600);
const PAIRS_PER_DEGREE: usize = 100;
const SEED: u64 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn summary(cs: &[CheckResult]) -> String {
    cs.iter().map(|c| format!("{} {:?}", c.name, c.nonzero)).collect::<Vec<_>>().join("; ")
}

fn solved_phi(dir: &Path) -> (AssociatorSeries, Duration) {
    let out = dir.join("phi.json");
    let args = ["assoc", "solve", "--max-degree", "4", "--even", "--out", out.to_str().unwrap()];
    let t = Instant::now();
    run_assoc(AssocCli::try_parse_from(args).unwrap()).expect("solve");
    let elapsed = t.elapsed();
    (AssociatorSeries::new(json::read_lie(&out).expect("read phi")).expect("phi"), elapsed)
}

fn associator(phi: &AssociatorSeries, elapsed: Duration) -> Outcome {
    let ctx = AssociatorContext::new(4).unwrap();
    let res = ctx.residuals(phi, 4).unwrap();
    let zero = res.iter().all(|r| r.is_zero());
    let coeff = phi.log_phi().coeff(&[0, 1]);
    let pass = zero && coeff == Rational::new(1, 24) && elapsed < SOLVE_BUDGET;
    outcome(
        pass,
        format!("residuals zero through 4: {zero}, [A,B] coefficient {coeff}, solve {elapsed:.2?} (budget {SOLVE_BUDGET:?})"),
    )
}

fn flip_degree_two(phi: &AssociatorSeries) -> AssociatorSeries {
    let s = LieSeries::from_lyndon_terms(
        &Alphabet::ab(),
        phi.truncation(),
        phi.log_phi().iter().map(|(d, w, c)| (w.clone(), if d == 2 { -c } else { c.clone() })),
    )
    .unwrap();
    AssociatorSeries::new(s).unwrap()
}

fn elliptic(phi: &AssociatorSeries) -> Outcome {
    let t = Instant::now();
    let ctx = EllipticContext::new(4, IntersectionForm::CENTRAL).unwrap();
    let good = ctx.residual_counts(&build_e_phi(phi, 4).unwrap(), 4).unwrap();
    let elapsed = t.elapsed();
    let bad = ctx.residual_counts(&build_e_phi(&flip_degree_two(phi), 4).unwrap(), 4).unwrap();
    let zero = good.iter().all(|c| c.iter().all(|&x| x == 0));
    let flipped_nonzero = bad.iter().any(|c| c.iter().take(5).any(|&x| x > 0));
    outcome(
        zero && flipped_nonzero && elapsed < ELLIPTIC_BUDGET,
        format!("solved phi {good:?} in {elapsed:.2?} (budget {ELLIPTIC_BUDGET:?}); flipped phi {bad:?}"),
    )
}

fn u_map() -> Outcome {
    let cs = vec![
        checks::u_map_relations(2, 4).unwrap(),
        checks::u_map_relations(3, 4).unwrap(),
        checks::u_map_multiplicative(2, 4, PAIRS_PER_DEGREE, SEED).unwrap(),
        checks::u_map_multiplicative(3, 4, PAIRS_PER_DEGREE, SEED).unwrap(),
    ];
    let failing: Vec<&str> = cs.iter().filter_map(|c| c.detail.as_deref().filter(|_| !c.pass)).collect();
    outcome(cs.iter().all(|c| c.pass), format!("{} | {}", summary(&cs), failing.join(" | ")))
}

fn restricted_iso() -> (Outcome, Outcome) {
    let n2 = checks::restricted_iso(2, 4).unwrap();
    let n3 = checks::restricted_iso(3, 3).unwrap();
    let main = outcome(n2.pass && n3.pass, format!("{}; {}", n2.detail.clone().unwrap(), n3.detail.clone().unwrap()));
    let d5 = diagrams::restricted_iso_report(2, 5).unwrap().pop().unwrap();
    let stretch = outcome(
        d5.injective && d5.surjective && d5.source_dim == 32 && d5.target_dim == 32,
        format!("n=2 d=5: {}->{} rank {}", d5.source_dim, d5.target_dim, d5.image_rank),
    );
    (main, stretch)
}

fn normalizers() -> Outcome {
    let cs = checks::normalizers(4, 4, 3).unwrap();
    outcome(cs.iter().all(|c| c.pass), summary(&cs))
}

fn chain_expansion() -> Outcome {
    let c = checks::chain_expansion(4).unwrap();
    outcome(c.pass, format!("nonzero per degree {:?}", c.nonzero))
}

fn source_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            source_files(&p, out);
        } else if p.extension().is_some_and(|x| x == "rs") {
            out.push(p);
        }
    }
}

fn random_lie(rng: &mut ChaCha8Rng, n: usize) -> LieSeries {
    let words = lyndon_words(2, 3);
    let terms: Vec<_> = (0..rng.gen_range(1..=4))
        .map(|_| {
            (words[rng.gen_range(0..words.len())].clone(), Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
        })
        .collect();
    LieSeries::from_lyndon_terms(&Alphabet::ab(), n, terms).unwrap()
}

fn exactness() -> Outcome {
    let crates = Path::new(env!("CARGO_MANIFEST_DIR")).parent().unwrap();
    let mut files = Vec::new();
    source_files(crates, &mut files);
    let float = ["f32", "f64"];
    let with_floats: Vec<String> = files
        .iter()
        .filter(|p| !p.ends_with("acceptance.rs"))
        .filter(|p| {
            let text = std::fs::read_to_string(p).unwrap();
            text.split(|c: char| !c.is_alphanumeric() && c != '_').any(|tok| float.contains(&tok))
        })
        .map(|p| p.display().to_string())
        .collect();

    let n = 6;
    let free = TruncatedAlgebra::free(&Alphabet::ab(), n);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut round_trip_failures = 0;
    for _ in 0..20 {
        let (a, b) = (random_lie(&mut rng, n), random_lie(&mut rng, n));
        let (ea, eb) = (free.from_lie(&a).unwrap(), free.from_lie(&b).unwrap());
        let z = lie::bch(&a, &b, n).unwrap();
        let prod = free.mul(&free.exp(&ea).unwrap(), &free.exp(&eb).unwrap());
        let ok = free.exp(&free.from_lie(&z).unwrap()).unwrap() == prod
            && free.to_lie(&free.log(&prod).unwrap()).unwrap() == z
            && free.log(&free.exp(&ea).unwrap()).unwrap() == ea;
        round_trip_failures += usize::from(!ok);
    }

    // B_0..B_12 with B_1 = -1/2
    let oracle = [
        (1, 1),
        (-1, 2),
        (1, 6),
        (0, 1),
        (-1, 30),
        (0, 1),
        (1, 42),
        (0, 1),
        (-1, 30),
        (0, 1),
        (5, 66),
        (0, 1),
        (-691, 2730),
    ];
    let table = lie::bernoulli_table(12);
    let bern_ok = table.len() == oracle.len() && table.iter().zip(oracle).all(|(b, (p, q))| *b == Rational::new(p, q));

    outcome(
        with_floats.is_empty() && round_trip_failures == 0 && bern_ok,
        format!(
            "float types in {:?}; bch/exp/log failures {round_trip_failures}/20 at degree {n}; Bernoulli B_0..B_12 match: {bern_ok}",
            with_floats
        ),
    )
}

fn report_determinism(dir: &Path) -> Outcome {
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"checks": ["associator", "elliptic", "u_map", "restricted_iso", "chain_expansion", "normalizers"]}"#,
    )
    .unwrap();
    // the same steps as `report run`, without its console summary
    let run = |name: &str| {
        let out = dir.join(name);
        let rep = report::run_all(&report::Config::load(&cfg).unwrap(), false).unwrap();
        json::write_json(&out, &rep).unwrap();
        (rep.pass, std::fs::read(&out).unwrap())
    };
    let (c1, r1) = run("r1.json");
    let (c2, r2) = run("r2.json");
    outcome(
        !r1.is_empty() && r1 == r2 && c1 == c2,
        format!("{} bytes, identical: {}, overall pass {c1} {c2}", r1.len(), r1 == r2),
    )
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().unwrap();
    let (phi, solve_time) = solved_phi(dir.path());
    let (iso, stretch) = restricted_iso();
    let results = [
        ("1 associator solve", associator(&phi, solve_time)),
        ("2 elliptic identities", elliptic(&phi)),
        ("3 u-map relations and multiplicativity", u_map()),
        ("4 restricted isomorphism", iso),
        ("4 stretch (n=2, d=5)", stretch),
        ("5 normalizers", normalizers()),
        ("6 chain expansion", chain_expansion()),
        ("7 exact arithmetic", exactness()),
        ("8 report determinism", report_determinism(dir.path())),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("criterion {name:<40} {}  {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !name.contains("stretch") {
            failed += usize::from(!o.pass);
        }
    }
    println!("required criteria failing: {failed}");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
