//! Rational Drinfeld associators solved degree by degree.
//!
//! Conventions: with `φ_ijk = φ(t_ij, t_jk)` in `U t_4` / `U t_3`,
//!
//! ```text
//! pentagon:  φ(t12, t23+t24) φ(t13+t23, t34) = φ(t23, t34) φ(t12+t13, t24+t34) φ(t12, t23)
//! hexagon±:  exp(±(t13+t23)/2) = φ(t13, t12) exp(±t13/2) φ(t13, t23)^-1 exp(±t23/2) φ(t12, t23)
//! ```

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraElement, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::lie::{lyndon_basis, Alphabet, LieSeries, Word};
use crate::linalg::{solve_affine, SparseVec};
use crate::rational::Rational;

/// `φ = exp(log_phi)` on the alphabet `{A, B}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatorSeries {
    log_phi: LieSeries,
    exp: AlgebraElement,
}

impl AssociatorSeries {
    /// Rejects alphabets other than `{A, B}` and degree-1 terms.
    pub fn new(log_phi: LieSeries) -> Result<Self> {
        if log_phi.alphabet() != &Alphabet::ab() {
            return Err(Error::invalid("associator must live on the alphabet {A, B}"));
        }
        if log_phi.truncation() >= 1 && !log_phi.degree_part(1).is_empty() {
            return Err(Error::invalid("associator has a degree-1 term"));
        }
        let free = TruncatedAlgebra::free(&Alphabet::ab(), log_phi.truncation());
        let exp = free.exp(&free.from_lie(&log_phi)?)?;
        Ok(AssociatorSeries { log_phi, exp })
    }

    /// `φ = 1`.
    pub fn trivial(truncation: usize) -> Self {
        AssociatorSeries::new(LieSeries::zero(&Alphabet::ab(), truncation)).expect("zero series")
    }

    pub fn log_phi(&self) -> &LieSeries {
        &self.log_phi
    }

    /// `φ` as an element of the free algebra on `{A, B}`.
    pub fn exp(&self) -> &AlgebraElement {
        &self.exp
    }

    pub fn truncation(&self) -> usize {
        self.log_phi.truncation()
    }

    pub fn truncate(&self, n: usize) -> Self {
        AssociatorSeries::new(self.log_phi.truncate(n)).expect("truncation keeps validity")
    }

    /// `φ(a, b)` in `target`.
    pub fn eval(&self, target: &TruncatedAlgebra, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        target.substitute(&self.exp, &[a.clone(), b.clone()])
    }

    /// `φ(a, b)^-1 = exp(-log φ)(a, b)`.
    pub fn eval_inverse(
        &self,
        target: &TruncatedAlgebra,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement> {
        let free = TruncatedAlgebra::free(&Alphabet::ab(), self.truncation());
        let inv = free.inverse(&self.exp)?;
        target.substitute(&inv, &[a.clone(), b.clone()])
    }
}

/// Algebras `U t_3` and `U t_4` shared by residual evaluations.
#[derive(Clone, Debug)]
pub struct AssociatorContext {
    dk3: TruncatedAlgebra,
    dk4: TruncatedAlgebra,
}

impl AssociatorContext {
    pub fn new(truncation: usize) -> Result<Self> {
        Ok(AssociatorContext { dk3: TruncatedAlgebra::dk(3, truncation)?, dk4: TruncatedAlgebra::dk(4, truncation)? })
    }

    pub fn truncation(&self) -> usize {
        self.dk3.truncation()
    }

    pub fn dk3(&self) -> &TruncatedAlgebra {
        &self.dk3
    }

    pub fn dk4(&self) -> &TruncatedAlgebra {
        &self.dk4
    }

    /// LHS - RHS of the pentagon in `U t_4`, truncated at `n`.
    pub fn pentagon_residual(&self, phi: &AssociatorSeries, n: usize) -> Result<AlgebraElement> {
        let u = &self.dk4;
        let phi = phi.truncate(n.min(phi.truncation()));
        let t = |name: &str| u.generator(name);
        let (t12, t13, t23, t24, t34) = (t("t12")?, t("t13")?, t("t23")?, t("t24")?, t("t34")?);
        let lhs = u.mul(&phi.eval(u, &t12, &t23.add(&t24))?, &phi.eval(u, &t13.add(&t23), &t34)?);
        let rhs = u.mul_all([
            &phi.eval(u, &t23, &t34)?,
            &phi.eval(u, &t12.add(&t13), &t24.add(&t34))?,
            &phi.eval(u, &t12, &t23)?,
        ]);
        Ok(lhs.sub(&rhs))
    }

    /// LHS - RHS of the hexagon with R-matrix `exp(sign * t / 2)` in `U t_3`.
    pub fn hexagon_residual(&self, phi: &AssociatorSeries, sign: i64, n: usize) -> Result<AlgebraElement> {
        let u = &self.dk3;
        let phi = phi.truncate(n.min(phi.truncation()));
        let half = Rational::new(sign.signum(), 2);
        let (t12, t13, t23) = (u.generator("t12")?, u.generator("t13")?, u.generator("t23")?);
        let lhs = u.exp(&t13.add(&t23).scale(&half).truncate(phi.truncation()))?;
        let rhs = u.mul_all([
            &phi.eval(u, &t13, &t12)?,
            &u.exp(&t13.scale(&half))?,
            &phi.eval_inverse(u, &t13, &t23)?,
            &u.exp(&t23.scale(&half))?,
            &phi.eval(u, &t12, &t23)?,
        ]);
        Ok(lhs.sub(&rhs.truncate(phi.truncation())))
    }

    /// Pentagon, hexagon+ and hexagon- residuals, in that order.
    pub fn residuals(&self, phi: &AssociatorSeries, n: usize) -> Result<[AlgebraElement; 3]> {
        Ok([self.pentagon_residual(phi, n)?, self.hexagon_residual(phi, 1, n)?, self.hexagon_residual(phi, -1, n)?])
    }
}

/// Order in which the Lyndon coordinates of a degree are offered as pivots;
/// coordinates left free are pinned to zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GaugeRule {
    #[default]
    Lexicographic,
    ReverseLexicographic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SolverConfig {
    pub max_degree: usize,
    /// Impose `φ(-A, -B) = φ(A, B)`, i.e. no odd-degree terms.
    pub even: bool,
    pub gauge: GaugeRule,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_degree: 4, even: true, gauge: GaugeRule::Lexicographic }
    }
}

fn degree_coordinates(res: &[AlgebraElement; 3], d: usize) -> SparseVec<(usize, Word)> {
    let mut out = SparseVec::new();
    for (k, r) in res.iter().enumerate() {
        if d <= r.truncation() {
            for (w, c) in r.degree_part(d) {
                out.insert((k, w.clone()), c.clone());
            }
        }
    }
    out
}

/// Solves pentagon and both hexagons degree by degree. The degree-`d` part
/// of every residual is affine in the degree-`d` coordinates of `log φ`, so
/// each degree is one exact linear solve.
pub fn solve(config: &SolverConfig) -> Result<AssociatorSeries> {
    if config.max_degree < 2 {
        return Err(Error::invalid("max_degree must be at least 2"));
    }
    let ctx = AssociatorContext::new(config.max_degree)?;
    solve_with(&ctx, config)
}

pub fn solve_with(ctx: &AssociatorContext, config: &SolverConfig) -> Result<AssociatorSeries> {
    let n = config.max_degree;
    if ctx.truncation() < n {
        return Err(Error::invalid("context truncation below max_degree"));
    }
    let ab = Alphabet::ab();
    let mut log_phi = LieSeries::zero(&ab, n);
    for d in 2..=n {
        let mut basis: Vec<Word> = lyndon_basis(&ab, d)?.into_iter().map(|l| l.word).collect();
        if config.even && d % 2 == 1 {
            basis.clear();
        }
        if config.gauge == GaugeRule::ReverseLexicographic {
            basis.reverse();
        }
        let with = |extra: Option<&Word>| -> Result<AssociatorSeries> {
            let mut terms: Vec<(Word, Rational)> =
                log_phi.truncate(d).iter().map(|(_, w, c)| (w.clone(), c.clone())).collect();
            if let Some(w) = extra {
                terms.push((w.clone(), Rational::one()));
            }
            AssociatorSeries::new(LieSeries::from_lyndon_terms(&ab, d, terms)?)
        };
        let base = degree_coordinates(&ctx.residuals(&with(None)?, d)?, d);
        let mut columns: Vec<SparseVec<(usize, Word)>> = Vec::new();
        for w in &basis {
            let r = degree_coordinates(&ctx.residuals(&with(Some(w))?, d)?, d);
            let mut col = r;
            crate::linalg::axpy(&mut col, &-Rational::one(), &base);
            columns.push(col);
        }
        let mut rows: alloc::collections::BTreeMap<(usize, Word), (SparseVec<usize>, Rational)> = Default::default();
        for (key, c) in &base {
            rows.entry(key.clone()).or_insert_with(|| (SparseVec::new(), Rational::zero())).1 = c.clone();
        }
        for (j, col) in columns.iter().enumerate() {
            for (key, c) in col {
                rows.entry(key.clone()).or_insert_with(|| (SparseVec::new(), Rational::zero())).0.insert(j, c.clone());
            }
        }
        let eqs: Vec<(SparseVec<usize>, Rational)> = rows.into_values().collect();
        let x = solve_affine(basis.len(), &eqs)
            .ok_or_else(|| Error::internal(alloc::format!("associator equations inconsistent at degree {d}")))?;
        let update: Vec<(Word, Rational)> = basis.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect();
        let step = LieSeries::from_lyndon_terms(&ab, n, update)?;
        log_phi = log_phi.add(&step)?;
    }
    AssociatorSeries::new(log_phi)
}

/// Nonzero residual coordinates per degree, summed over the three equations.
pub fn residual_counts(ctx: &AssociatorContext, phi: &AssociatorSeries, n: usize) -> Result<Vec<usize>> {
    let res = ctx.residuals(phi, n)?;
    let mut counts = vec![0; n + 1];
    for r in &res {
        for (d, c) in r.nonzero_counts().into_iter().enumerate() {
            if d <= n {
                counts[d] += c;
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_phi_fails_hexagon_at_degree_two() {
        let ctx = AssociatorContext::new(2).unwrap();
        let one = AssociatorSeries::trivial(2);
        assert!(ctx.pentagon_residual(&one, 1).unwrap().is_zero());
        assert!(ctx.pentagon_residual(&one, 2).unwrap().is_zero());
        assert!(!ctx.hexagon_residual(&one, 1, 2).unwrap().degree_part(2).is_empty());
    }

    #[test]
    fn degree_two_coefficient_is_one_over_24() {
        let phi = solve(&SolverConfig { max_degree: 2, ..Default::default() }).unwrap();
        assert_eq!(phi.log_phi().coeff(&[0, 1]), Rational::new(1, 24));
        // by hand: with log φ = c[A,B] the degree-2 hexagon residual is
        // (3c - 1/8)[t13, t23], using [t13, t12] = [t12, t23] = -[t13, t23]
        let ctx = AssociatorContext::new(2).unwrap();
        let u = ctx.dk3();
        let k = u.commutator(&u.generator("t13").unwrap(), &u.generator("t23").unwrap());
        let one = AssociatorSeries::trivial(2);
        assert_eq!(ctx.hexagon_residual(&one, 1, 2).unwrap(), k.scale(&Rational::new(-1, 8)));
        let flipped = AssociatorSeries::new(phi.log_phi().neg()).unwrap();
        assert_eq!(ctx.hexagon_residual(&flipped, 1, 2).unwrap(), k.scale(&Rational::new(-1, 4)));
    }

    #[test]
    fn even_solution_through_degree_four() {
        let ctx = AssociatorContext::new(4).unwrap();
        let phi = solve_with(&ctx, &SolverConfig::default()).unwrap();
        assert!(phi.log_phi().degree_part(3).is_empty());
        assert_eq!(residual_counts(&ctx, &phi, 4).unwrap(), vec![0; 5]);
    }

    #[test]
    fn other_gauges_also_solve() {
        let ctx = AssociatorContext::new(4).unwrap();
        for gauge in [GaugeRule::Lexicographic, GaugeRule::ReverseLexicographic] {
            let phi = solve_with(&ctx, &SolverConfig { max_degree: 4, even: false, gauge }).unwrap();
            assert_eq!(residual_counts(&ctx, &phi, 4).unwrap(), vec![0; 5]);
        }
    }

    #[test]
    fn rejects_degree_one_terms() {
        let a = LieSeries::generator(&Alphabet::ab(), "A", 3).unwrap();
        assert!(AssociatorSeries::new(a).is_err());
    }
}
