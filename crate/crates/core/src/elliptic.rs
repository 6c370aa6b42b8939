//! The elliptic associator `e(φ) = (X_φ, Y_φ)` and its four defining
//! identities in `U t_{1,2}` and `U t_{1,3}`.
//!
//! ```text
//! T   = [B, A]
//! Ã   = (ad B)/(e^{ad B} - 1)(A) = Σ (B_n/n!) (ad B)^n (A)
//! X_φ = φ(Ã, T) exp(Ã) φ(Ã, T)^-1
//! Y_φ = exp(T/2) φ(-Ã-T, T) exp(B) φ(Ã, T)^-1
//! ```

use alloc::vec::Vec;

use crate::algebra::{AlgebraElement, IntersectionForm, TruncatedAlgebra};
use crate::associator::AssociatorSeries;
use crate::error::{Error, Result};
use crate::lie::{ad_series, bernoulli_over_factorial, bracket, Alphabet, LieSeries};
use crate::rational::Rational;

/// `T = [B, A]`.
pub fn t_of(truncation: usize) -> LieSeries {
    let ab = Alphabet::ab();
    let a = LieSeries::generator(&ab, "A", truncation).expect("A");
    let b = LieSeries::generator(&ab, "B", truncation).expect("B");
    bracket(&b, &a, truncation).expect("same alphabet")
}

/// `Ã = Σ (B_n/n!) (ad B)^n (A)` truncated at `n`.
pub fn a_tilde(n: usize) -> LieSeries {
    let ab = Alphabet::ab();
    let a = LieSeries::generator(&ab, "A", n).expect("A");
    let b = LieSeries::generator(&ab, "B", n).expect("B");
    ad_series(&b, &a, &bernoulli_over_factorial(n), n).expect("same alphabet")
}

/// `X` and `Y` as group-like elements of the free algebra on `{A, B}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticPair {
    pub x: AlgebraElement,
    pub y: AlgebraElement,
    pub phi: AssociatorSeries,
    pub truncation: usize,
}

pub fn build_e_phi(phi: &AssociatorSeries, n: usize) -> Result<EllipticPair> {
    if phi.truncation() < n {
        return Err(Error::invalid("associator truncation below requested degree"));
    }
    let phi = phi.truncate(n);
    let free = TruncatedAlgebra::free(&Alphabet::ab(), n);
    let at = free.from_lie(&a_tilde(n))?;
    let t = free.from_lie(&t_of(n))?;
    let b = free.generator("B")?;
    let phi_at = phi.eval(&free, &at, &t)?;
    let phi_at_inv = free.inverse(&phi_at)?;
    let x = free.mul_all([&phi_at, &free.exp(&at)?, &phi_at_inv]);
    let minus = at.add(&t).neg();
    let y = free.mul_all([
        &free.exp(&t.scale(&Rational::new(1, 2)))?,
        &phi.eval(&free, &minus, &t)?,
        &free.exp(&b)?,
        &phi_at_inv,
    ]);
    Ok(EllipticPair { x, y, phi, truncation: n })
}

/// `U t_{1,2}` and `U t_{1,3}` at a common truncation.
#[derive(Clone, Debug)]
pub struct EllipticContext {
    u2: TruncatedAlgebra,
    u3: TruncatedAlgebra,
    form: IntersectionForm,
}

impl EllipticContext {
    pub fn new(truncation: usize, form: IntersectionForm) -> Result<Self> {
        Ok(EllipticContext {
            u2: TruncatedAlgebra::t1n_with_form(2, truncation, form)?,
            u3: TruncatedAlgebra::t1n_with_form(3, truncation, form)?,
            form,
        })
    }

    pub fn truncation(&self) -> usize {
        self.u2.truncation()
    }

    pub fn form(&self) -> IntersectionForm {
        self.form
    }

    pub fn u2(&self) -> &TruncatedAlgebra {
        &self.u2
    }

    pub fn u3(&self) -> &TruncatedAlgebra {
        &self.u3
    }

    /// `Y X Y^-1 X^-1 - exp(t12)` at `(A, B) = (x1, y1)` in `U t_{1,2}`.
    pub fn residual_identity1(&self, pair: &EllipticPair, n: usize) -> Result<AlgebraElement> {
        let u = &self.u2;
        let n = n.min(pair.truncation);
        let ims = [u.generator("x1")?, u.generator("y1")?];
        let x = u.substitute(&pair.x.truncate(n), &ims)?;
        let y = u.substitute(&pair.y.truncate(n), &ims)?;
        let lhs = u.mul_all([&y, &x, &u.inverse(&y)?, &u.inverse(&x)?]);
        let rhs = u.exp(&u.generator("t12")?.truncate(n))?;
        Ok(lhs.sub(&rhs))
    }

    /// `φ(t12, t23)^-1 g(x1, y1) φ(t12, t23)` and
    /// `φ(t12, t13)^-1 g(x2, y2) φ(t12, t13)` in `U t_{1,3}`.
    fn conjugated(&self, g: &AlgebraElement, phi: &AssociatorSeries) -> Result<[AlgebraElement; 2]> {
        let u = &self.u3;
        let gen = |s: &str| u.generator(s);
        let (t12, t13, t23) = (gen("t12")?, gen("t13")?, gen("t23")?);
        let g1 = u.substitute(g, &[gen("x1")?, gen("y1")?])?;
        let g2 = u.substitute(g, &[gen("x2")?, gen("y2")?])?;
        let a = u.mul_all([&phi.eval_inverse(u, &t12, &t23)?, &g1, &phi.eval(u, &t12, &t23)?]);
        let b = u.mul_all([&phi.eval_inverse(u, &t12, &t13)?, &g2, &phi.eval(u, &t12, &t13)?]);
        Ok([a, b])
    }

    fn half_t12(&self, sign: i64, n: usize) -> Result<AlgebraElement> {
        let t12 = self.u3.generator("t12")?.truncate(n);
        self.u3.exp(&t12.scale(&Rational::new(sign, 2)))
    }

    /// Identities 2 (`g = X`, sign +) and 3 (`g = Y`, sign -):
    /// `g(x1+x2, y1+y2) - [g]_1 exp(±t12/2) [g]_2 exp(±t12/2)`.
    fn residual_cabling(&self, g: &AlgebraElement, pair: &EllipticPair, sign: i64, n: usize) -> Result<AlgebraElement> {
        let u = &self.u3;
        let n = n.min(pair.truncation);
        let g = g.truncate(n);
        let phi = pair.phi.truncate(n);
        let gen = |s: &str| u.generator(s);
        let sx = gen("x1")?.add(&gen("x2")?);
        let sy = gen("y1")?.add(&gen("y2")?);
        let lhs = u.substitute(&g, &[sx, sy])?;
        let [c1, c2] = self.conjugated(&g, &phi)?;
        let e = self.half_t12(sign, n)?;
        let rhs = u.mul_all([&c1, &e, &c2, &e]);
        Ok(lhs.sub(&rhs))
    }

    pub fn residual_identity2(&self, pair: &EllipticPair, n: usize) -> Result<AlgebraElement> {
        self.residual_cabling(&pair.x, pair, 1, n)
    }

    pub fn residual_identity3(&self, pair: &EllipticPair, n: usize) -> Result<AlgebraElement> {
        self.residual_cabling(&pair.y, pair, -1, n)
    }

    /// `[Y]_1 e+ [X]_2 e+ - e+ [X]_2 e- [Y]_1` with `e± = exp(±t12/2)`.
    pub fn residual_identity4(&self, pair: &EllipticPair, n: usize) -> Result<AlgebraElement> {
        let u = &self.u3;
        let n = n.min(pair.truncation);
        let phi = pair.phi.truncate(n);
        let [y1, _] = self.conjugated(&pair.y.truncate(n), &phi)?;
        let [_, x2] = self.conjugated(&pair.x.truncate(n), &phi)?;
        let ep = self.half_t12(1, n)?;
        let em = self.half_t12(-1, n)?;
        let lhs = u.mul_all([&y1, &ep, &x2, &ep]);
        let rhs = u.mul_all([&ep, &x2, &em, &y1]);
        Ok(lhs.sub(&rhs))
    }

    /// Residual of identity `k` (1 to 4).
    pub fn residual(&self, k: usize, pair: &EllipticPair, n: usize) -> Result<AlgebraElement> {
        match k {
            1 => self.residual_identity1(pair, n),
            2 => self.residual_identity2(pair, n),
            3 => self.residual_identity3(pair, n),
            4 => self.residual_identity4(pair, n),
            _ => Err(Error::invalid("identity must be 1, 2, 3 or 4")),
        }
    }

    /// Nonzero residual coordinates per degree for identities 1 to 4.
    pub fn residual_counts(&self, pair: &EllipticPair, n: usize) -> Result<Vec<Vec<usize>>> {
        (1..=4).map(|k| Ok(self.residual(k, pair, n)?.nonzero_counts())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::associator::{solve, SolverConfig};

    #[test]
    fn t_and_a_tilde() {
        let t = t_of(3);
        assert_eq!(t.coeff(&[0, 1]), Rational::from_int(-1));
        assert_eq!(t.iter().count(), 1);
        let at = a_tilde(4);
        assert_eq!(at.coeff(&[0]), Rational::one());
        assert_eq!(at.coeff(&[0, 1]), Rational::new(1, 2));
        assert_eq!(at.coeff(&[0, 1, 1]), Rational::new(1, 12));
        assert!(at.degree_part(4).is_empty());
        let u = TruncatedAlgebra::t1n(2, 3).unwrap();
        let free = TruncatedAlgebra::free(&Alphabet::ab(), 3);
        let tt = free.from_lie(&t).unwrap();
        let x1 = u.generator("x1").unwrap();
        assert_eq!(u.substitute(&tt, &[x1.clone(), u.generator("y1").unwrap()]).unwrap(), u.generator("t12").unwrap());
        assert!(u.substitute(&tt, &[x1.clone(), x1]).unwrap().is_zero());
    }

    #[test]
    fn e_phi_leading_terms() {
        let one = AssociatorSeries::trivial(3);
        let pair = build_e_phi(&one, 3).unwrap();
        let free = TruncatedAlgebra::free(&Alphabet::ab(), 3);
        assert_eq!(pair.x, free.exp(&free.from_lie(&a_tilde(3)).unwrap()).unwrap());
        let lx = free.to_lie(&free.log(&pair.x).unwrap()).unwrap();
        let ly = free.to_lie(&free.log(&pair.y).unwrap()).unwrap();
        assert_eq!(lx.degree_part(1).len(), 1);
        assert_eq!(lx.coeff(&[0]), Rational::one());
        assert_eq!(ly.coeff(&[1]), Rational::one());
        assert_eq!(ly.degree_part(1).len(), 1);
    }

    #[test]
    fn log_x_and_log_y_are_primitive_for_solved_phi() {
        let phi = solve(&SolverConfig::default()).unwrap();
        let pair = build_e_phi(&phi, 4).unwrap();
        let free = TruncatedAlgebra::free(&Alphabet::ab(), 4);
        assert!(free.to_lie(&free.log(&pair.x).unwrap()).is_ok());
        assert!(free.to_lie(&free.log(&pair.y).unwrap()).is_ok());
        let not_lie = free.mul(&free.generator("A").unwrap(), &free.generator("B").unwrap());
        assert!(free.to_lie(&not_lie).is_err());
    }

    #[test]
    fn identities_hold_through_degree_three() {
        let phi = solve(&SolverConfig { max_degree: 3, ..Default::default() }).unwrap();
        let pair = build_e_phi(&phi, 3).unwrap();
        let ctx = EllipticContext::new(3, IntersectionForm::CENTRAL).unwrap();
        for k in 1..=4 {
            assert!(ctx.residual(k, &pair, 3).unwrap().is_zero(), "identity {k}");
        }
        // below degree 4 the residuals do not see φ at all
        let trivial = build_e_phi(&AssociatorSeries::trivial(3), 3).unwrap();
        for k in 1..=4 {
            assert!(ctx.residual(k, &trivial, 3).unwrap().is_zero());
        }
    }

    #[test]
    fn trivial_and_flipped_phi_fail_at_degree_four() {
        let phi = solve(&SolverConfig::default()).unwrap();
        let flipped = AssociatorSeries::new(
            LieSeries::from_lyndon_terms(
                &Alphabet::ab(),
                4,
                phi.log_phi().iter().map(|(d, w, c)| (w.clone(), if d == 2 { -c } else { c.clone() })),
            )
            .unwrap(),
        )
        .unwrap();
        let ctx = EllipticContext::new(4, IntersectionForm::CENTRAL).unwrap();
        for bad in [AssociatorSeries::trivial(4), flipped] {
            let pair = build_e_phi(&bad, 4).unwrap();
            for k in 1..=4 {
                let counts = ctx.residual(k, &pair, 4).unwrap().nonzero_counts();
                assert_eq!(&counts[..4], &[0, 0, 0, 0]);
                assert!(counts[4] > 0, "identity {k}");
            }
        }
    }

    #[test]
    fn standard_form_breaks_cabling_identities() {
        let phi = solve(&SolverConfig { max_degree: 2, ..Default::default() }).unwrap();
        let pair = build_e_phi(&phi, 2).unwrap();
        let ctx = EllipticContext::new(2, IntersectionForm::STANDARD).unwrap();
        assert!(ctx.residual_identity1(&pair, 2).unwrap().is_zero());
        for k in 2..=4 {
            assert!(!ctx.residual(k, &pair, 2).unwrap().degree_part(2).is_empty());
        }
    }
}
