//! Individual verification checks. Each returns one or more
//! [`CheckResult`]s with per-degree nonzero counts.

use std::time::Instant;

use ellipt_core::algebra::{AlgebraElement, IntersectionForm, TruncatedAlgebra};
use ellipt_core::associator::{AssociatorContext, AssociatorSeries};
use ellipt_core::diagrams::{
    self, element_add, element_of, DiagramClass, DiagramElement, SliceTower, SpaceSlice, SpaceSpec,
};
use ellipt_core::elliptic::{build_e_phi, EllipticContext};
use ellipt_core::{Rational, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    /// Inclusive degree range.
    pub degrees: [usize; 2],
    pub pass: bool,
    /// Failures (nonzero residual coordinates or failing instances) per
    /// degree of the range.
    pub nonzero: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckResult {
    fn from_counts(name: &str, anchor: &str, lo: usize, nonzero: Vec<usize>) -> Self {
        CheckResult {
            name: name.to_string(),
            anchor: anchor.to_string(),
            degrees: [lo, lo + nonzero.len().saturating_sub(1)],
            pass: nonzero.iter().all(|&c| c == 0),
            nonzero,
            detail: None,
            wall_ms: None,
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn total_nonzero(&self) -> usize {
        self.nonzero.iter().sum()
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u64)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_millis() as u64))
}

fn counts_from(e: &AlgebraElement, lo: usize, hi: usize) -> Vec<usize> {
    let c = e.nonzero_counts();
    (lo..=hi).map(|d| c.get(d).copied().unwrap_or(0)).collect()
}

/// Pentagon, both hexagons, and the value of the `[A, B]` coefficient.
pub fn associator(phi: &AssociatorSeries, n: usize) -> Result<Vec<CheckResult>> {
    let ctx = AssociatorContext::new(n)?;
    let (res, ms) = timed(|| ctx.residuals(phi, n))?;
    let names = [
        ("associator.pentagon", "pentagon"),
        ("associator.hexagon_plus", "hexagon (+)"),
        ("associator.hexagon_minus", "hexagon (-)"),
    ];
    let mut out: Vec<CheckResult> = names
        .iter()
        .zip(&res)
        .map(|(&(name, anchor), r)| {
            let mut c = CheckResult::from_counts(name, anchor, 1, counts_from(r, 1, n));
            c.wall_ms = Some(ms);
            c
        })
        .collect();
    let coeff = phi.log_phi().coeff(&[0, 1]);
    let want = Rational::new(1, 24);
    let mut c = CheckResult::from_counts(
        "associator.degree_two_coefficient",
        "coefficient of [A,B] in log phi",
        2,
        vec![usize::from(coeff != want)],
    );
    c = c.with_detail(format!("{} (expected {})", coeff.to_fraction_string(), want.to_fraction_string()));
    out.push(c);
    Ok(out)
}

/// The four elliptic identities for `e(φ)` through degree `n`.
pub fn elliptic(phi: &AssociatorSeries, n: usize) -> Result<Vec<CheckResult>> {
    let pair = build_e_phi(phi, n)?;
    let ctx = EllipticContext::new(n, IntersectionForm::CENTRAL)?;
    let mut out = Vec::new();
    for k in 1..=4 {
        let (r, ms) = timed(|| ctx.residual(k, &pair, n))?;
        let space = if k == 1 { "U t_{1,2}" } else { "U t_{1,3}" };
        let mut c = CheckResult::from_counts(
            &format!("elliptic.identity{k}"),
            &format!("elliptic identity {k} in {space}"),
            1,
            counts_from(&r, 1, n),
        );
        c.wall_ms = Some(ms);
        out.push(c);
    }
    Ok(out)
}

/// Every defining relation `r` of `t_{1,n}`, and `g r`, `r g` for each
/// generator `g`, mapped by `u_n` into the full diagram slice.
pub fn u_map_relations(n: usize, max_degree: usize) -> Result<CheckResult> {
    let alg = TruncatedAlgebra::t1n_with_form(n, max_degree, IntersectionForm::CENTRAL)?;
    let free = TruncatedAlgebra::free(alg.alphabet(), max_degree);
    let tower = SliceTower::build(DiagramClass::Full, n, max_degree)?;
    let mut counts = vec![0; max_degree + 1];
    let mut failing = std::collections::BTreeSet::new();
    for r in &alg.presentation().relations {
        let raw = free.from_terms(r.iter().map(|(w, c)| (w.clone(), c.clone())));
        let mut instances = vec![raw.clone()];
        for g in 0..alg.alphabet().len() as u8 {
            let gw = free.word(&[g]);
            instances.push(free.mul(&gw, &raw));
            instances.push(free.mul(&raw, &gw));
        }
        for inst in instances {
            if inst.is_zero() {
                continue;
            }
            let d = inst.valuation().expect("nonzero");
            let img = diagrams::u_map(&free, &inst, n)?;
            if !tower.is_zero(&img)? {
                counts[d] += 1;
                failing.insert(free.display(&raw));
            }
        }
    }
    let c = CheckResult::from_counts(
        &format!("u_map.relations.n{n}"),
        "u_n kills the defining relations",
        1,
        counts[1..].to_vec(),
    );
    Ok(if failing.is_empty() {
        c
    } else {
        let list: Vec<String> = failing.into_iter().collect();
        c.with_detail(format!("nonzero images: {}", list.join("; ")))
    })
}

fn random_element(alg: &TruncatedAlgebra, d: usize, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let basis = alg.basis(d);
    let k = rng.gen_range(1..=3usize.min(basis.len()));
    let terms: Vec<(Vec<u8>, Rational)> = (0..k)
        .map(|_| {
            let w = basis[rng.gen_range(0..basis.len())].clone();
            let c = rng.gen_range(1..=5i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            (w, Rational::from_int(c))
        })
        .collect();
    alg.from_terms(terms)
}

/// `u(a b) = u(a) u(b)` in the full slice on random reduced pairs of each
/// total degree.
pub fn u_map_multiplicative(n: usize, max_degree: usize, pairs: usize, seed: u64) -> Result<CheckResult> {
    let alg = TruncatedAlgebra::t1n_with_form(n, max_degree, IntersectionForm::CENTRAL)?;
    let tower = SliceTower::build(DiagramClass::Full, n, max_degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Vec::new();
    for d in 1..=max_degree {
        let mut bad = 0;
        for _ in 0..pairs {
            let i = rng.gen_range(0..=d);
            let a = random_element(&alg, i, &mut rng);
            let b = random_element(&alg, d - i, &mut rng);
            let lhs = diagrams::u_map(&alg, &alg.mul(&a, &b), n)?;
            let rhs = diagrams::compose(&diagrams::u_map(&alg, &a, n)?, &diagrams::u_map(&alg, &b, n)?)?;
            if !tower.slice(d).is_zero(&element_add(&lhs, &rhs, &-Rational::one()))? {
                bad += 1;
            }
        }
        counts.push(bad);
    }
    Ok(CheckResult::from_counts(&format!("u_map.multiplicative.n{n}"), "u_n is multiplicative", 1, counts)
        .with_detail(format!("{pairs} random pairs per degree, seed {seed}")))
}

/// Rank comparison of the restricted map `RU t_{1,n} -> SR/H_n`.
pub fn restricted_iso(n: usize, max_degree: usize) -> Result<CheckResult> {
    let rows = diagrams::restricted_iso_report(n, max_degree)?;
    let mut counts = Vec::new();
    let mut dims = Vec::new();
    for r in &rows {
        let square = n != 2 || (r.source_dim == 1 << r.degree && r.target_dim == 1 << r.degree);
        counts.push(usize::from(!(r.injective && r.surjective && square)));
        dims.push(format!("d{}: {}->{} rank {}", r.degree, r.source_dim, r.target_dim, r.image_rank));
    }
    Ok(CheckResult::from_counts(
        &format!("restricted_iso.n{n}"),
        &format!("restricted u-map is an isomorphism onto SR/H_{n}"),
        1,
        counts,
    )
    .with_detail(dims.join(", ")))
}

/// `mod_h(u_2(x̃_1))` against the Bernoulli-weighted comb diagrams.
pub fn chain_expansion(max_degree: usize) -> Result<CheckResult> {
    let rows = diagrams::chain_expansion_check(max_degree, false)?;
    Ok(CheckResult::from_counts(
        "chain_expansion",
        "u_2 of x~_1 as Bernoulli-weighted chain diagrams mod H_2",
        1,
        rows.into_iter().map(|(_, c)| c).collect(),
    ))
}

type Normalizer = fn(&DiagramElement) -> Result<DiagramElement>;

fn normalizer_counts(
    class: DiagramClass,
    oracle: DiagramClass,
    target: impl Fn(&diagrams::Diagram) -> bool,
    n: usize,
    d: usize,
    f: Normalizer,
) -> Result<usize> {
    let slice = SpaceSlice::build(SpaceSpec::new(oracle, n, d))?;
    let mut bad = 0;
    for dd in diagrams::enumerate(&SpaceSpec::new(class, n, d))? {
        let e = element_of(&dd);
        let img = f(&e)?;
        let same = slice.is_zero(&element_add(&img, &e, &-Rational::one()))?;
        if !same || !img.keys().all(&target) || f(&img)? != img {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Coordinate preservation, target class and idempotence of the four
/// normalizers on every enumerated diagram.
pub fn normalizers(max_n2: usize, max_n3: usize, max_alpha: usize) -> Result<Vec<CheckResult>> {
    use diagrams::Label;
    let x_first = |d: &diagrams::Diagram| !d.labels().windows(2).any(|w| w[0] == Label::Y && w[1] == Label::X);
    let mut out = Vec::new();
    let max = max_n2.max(max_n3);
    let per_n = |n: usize, d: usize| (n == 2 && d <= max_n2) || (n == 3 && d <= max_n3);
    let mut phi = vec![0; max];
    let mut gamma = vec![0; max];
    let mut beta = vec![0; max];
    for d in 1..=max {
        for n in [2, 3] {
            if !per_n(n, d) {
                continue;
            }
            let sr = SpaceSpec::new(DiagramClass::SR, n, d);
            let osr = SpaceSpec::new(DiagramClass::OSR, n, d);
            phi[d - 1] +=
                normalizer_counts(DiagramClass::Full, DiagramClass::Full, x_first, n, d, diagrams::phi_normalize)?;
            gamma[d - 1] += normalizer_counts(
                DiagramClass::R,
                DiagramClass::R,
                |x| sr.contains(x),
                n,
                d,
                diagrams::gamma_normalize,
            )?;
            beta[d - 1] += normalizer_counts(
                DiagramClass::SR,
                DiagramClass::SRmodH,
                |x| osr.contains(x),
                n,
                d,
                diagrams::beta_normalize,
            )?;
        }
    }
    let alpha = (1..=max_alpha)
        .map(|d| {
            let fosr = SpaceSpec::new(DiagramClass::FOSR, 3, d);
            normalizer_counts(
                DiagramClass::OSR,
                DiagramClass::SRmodH,
                |x| fosr.contains(x),
                3,
                d,
                diagrams::alpha_normalize,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let range = format!("n=2 through degree {max_n2}, n=3 through degree {max_n3}");
    out.push(
        CheckResult::from_counts("normalizer.phi", "phi normalizer (x labels below y labels)", 1, phi)
            .with_detail(range.clone()),
    );
    out.push(
        CheckResult::from_counts("normalizer.gamma", "gamma normalizer R -> SR", 1, gamma).with_detail(range.clone()),
    );
    out.push(
        CheckResult::from_counts("normalizer.beta", "beta normalizer SR -> OSR mod H", 1, beta).with_detail(range),
    );
    out.push(CheckResult::from_counts("normalizer.alpha", "alpha normalizer OSR -> FOSR mod H_3", 1, alpha));
    Ok(out)
}
