//! Bigraded dimension series of free graded-commutative algebras and the
//! quotient by a free slope-zero generator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Parity of a generator, deciding polynomial versus exterior behavior:
/// even generators contribute all powers, odd generators square to zero.
/// The default convention ties parity to the homological degree, but a
/// generator may declare its parity explicitly (a bracket class can be
/// exterior in an even degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(d: u32) -> Parity {
        if d.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A bigraded generator: a name, a grading (weight) g >= 1, a homological
/// degree d, and its parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub name: String,
    pub grading: u32,
    pub degree: u32,
    pub parity: Parity,
}

impl GenSpec {
    pub fn new(name: &str, grading: u32, degree: u32) -> Self {
        GenSpec {
            name: name.to_string(),
            grading,
            degree,
            parity: Parity::of_degree(degree),
        }
    }

    pub fn with_parity(name: &str, grading: u32, degree: u32, parity: Parity) -> Self {
        GenSpec {
            name: name.to_string(),
            grading,
            degree,
            parity,
        }
    }
}

/// Exact rational dimensions on the window (g, d) with g <= max_g and
/// d <= max_d. Entries outside the window are unstated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedSeries {
    max_g: u32,
    max_d: u32,
    data: Vec<BigRational>,
}

impl BigradedSeries {
    pub fn zeros(max_g: u32, max_d: u32) -> Self {
        let len = (max_g as usize + 1) * (max_d as usize + 1);
        BigradedSeries {
            max_g,
            max_d,
            data: vec![BigRational::zero(); len],
        }
    }

    pub fn max_g(&self) -> u32 {
        self.max_g
    }

    pub fn max_d(&self) -> u32 {
        self.max_d
    }

    fn idx(&self, g: u32, d: u32) -> usize {
        g as usize * (self.max_d as usize + 1) + d as usize
    }

    pub fn get(&self, g: u32, d: u32) -> &BigRational {
        &self.data[self.idx(g, d)]
    }

    pub fn set(&mut self, g: u32, d: u32, v: BigRational) {
        let i = self.idx(g, d);
        self.data[i] = v;
    }

    pub fn set_int(&mut self, g: u32, d: u32, v: u64) {
        self.set(g, d, BigRational::from_integer(BigInt::from(v)));
    }

    /// The nonzero bidegrees with their values, in (g, d) order.
    pub fn support(&self) -> Vec<(u32, u32, BigRational)> {
        let mut out = Vec::new();
        for g in 0..=self.max_g {
            for d in 0..=self.max_d {
                let v = self.get(g, d);
                if !v.is_zero() {
                    out.push((g, d, v.clone()));
                }
            }
        }
        out
    }

    /// Alternating sum over degrees at fixed grading.
    pub fn euler_characteristic(&self, g: u32) -> BigRational {
        let mut acc = BigRational::zero();
        for d in 0..=self.max_d {
            if d % 2 == 0 {
                acc += self.get(g, d);
            } else {
                acc -= self.get(g, d);
            }
        }
        acc
    }
}

/// Dimensions of the free graded-commutative algebra on the generators:
/// polynomial on even parity, exterior on odd parity. Requires every
/// grading to be >= 1 so each bidegree is finite dimensional.
pub fn free_gca_series(gens: &[GenSpec], max_g: u32, max_d: u32) -> Result<BigradedSeries> {
    for gen in gens {
        if gen.grading == 0 {
            return Err(Error::InvalidInput(format!(
                "generator {} has grading 0; free series need grading >= 1",
                gen.name
            )));
        }
    }
    let mut series = BigradedSeries::zeros(max_g, max_d);
    series.set_int(0, 0, 1);
    for gen in gens {
        let mut next = BigradedSeries::zeros(max_g, max_d);
        for g in 0..=max_g {
            for d in 0..=max_d {
                let base = series.get(g, d);
                if base.is_zero() {
                    continue;
                }
                let mut power = 0u32;
                loop {
                    let gg = g as u64 + power as u64 * gen.grading as u64;
                    let dd = d as u64 + power as u64 * gen.degree as u64;
                    if gg > max_g as u64 || dd > max_d as u64 {
                        break;
                    }
                    let cur = next.get(gg as u32, dd as u32) + base;
                    next.set(gg as u32, dd as u32, cur);
                    power += 1;
                    if gen.parity == Parity::Odd && power > 1 {
                        break;
                    }
                    if gen.degree == 0 && gen.grading == 0 {
                        break;
                    }
                }
            }
        }
        series = next;
    }
    Ok(series)
}

/// Quotient by a polynomial generator in bidegree (1, 0) acting freely:
/// new(g, d) = old(g, d) - old(g-1, d). A negative entry means the series
/// was not free over that generator and is reported as an error.
pub fn quotient_by_slope_zero_generator(
    series: &BigradedSeries,
    generator: &GenSpec,
) -> Result<BigradedSeries> {
    if generator.grading != 1 || generator.degree != 0 || generator.parity != Parity::Even {
        return Err(Error::InvalidInput(format!(
            "generator {} is not a polynomial generator in bidegree (1, 0)",
            generator.name
        )));
    }
    let mut out = BigradedSeries::zeros(series.max_g, series.max_d);
    for g in 0..=series.max_g {
        for d in 0..=series.max_d {
            let v = if g == 0 {
                series.get(g, d).clone()
            } else {
                series.get(g, d) - series.get(g - 1, d)
            };
            if v.is_negative() {
                return Err(Error::NegativeDimension {
                    g,
                    d,
                    value: v.to_string(),
                });
            }
            out.set(g, d, v);
        }
    }
    Ok(out)
}

/// True iff the series vanishes strictly below the line d = slope * g +
/// intercept, within its window; otherwise the first violation in (g, d)
/// order is returned.
pub fn vanishing_line_check(
    series: &BigradedSeries,
    slope: &BigRational,
    intercept: &BigRational,
) -> (bool, Option<(u32, u32)>) {
    for g in 0..=series.max_g {
        for d in 0..=series.max_d {
            if series.get(g, d).is_zero() {
                continue;
            }
            let bound = slope * BigRational::from_integer(BigInt::from(g)) + intercept;
            if BigRational::from_integer(BigInt::from(d)) < bound {
                return (false, Some((g, d)));
            }
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn one() -> BigRational {
        BigRational::one()
    }

    #[test]
    fn polynomial_generator_series() {
        let gens = [GenSpec::new("s0", 1, 0)];
        let s = free_gca_series(&gens, 4, 2).unwrap();
        for g in 0..=4 {
            assert_eq!(*s.get(g, 0), one(), "g = {g}");
            assert!(s.get(g, 1).is_zero());
            assert!(s.get(g, 2).is_zero());
        }
    }

    #[test]
    fn exterior_generator_series() {
        // One exterior generator at (2, 2): dimensions 1 at (0,0) and (2,2).
        let gens = [GenSpec::with_parity("tau", 2, 2, Parity::Odd)];
        let s = free_gca_series(&gens, 4, 4).unwrap();
        assert_eq!(s.support(), vec![(0, 0, one()), (2, 2, one())]);
    }

    #[test]
    fn bracket_class_series() {
        // s0 polynomial at (1,0) plus an exterior bracket class at (2,2):
        // dim(g, 0) = 1 for all g, dim(g, 2) = 1 for g >= 2, else 0.
        let gens = [
            GenSpec::new("s0", 1, 0),
            GenSpec::with_parity("tau", 2, 2, Parity::Odd),
        ];
        let s = free_gca_series(&gens, 6, 4).unwrap();
        for g in 0..=6u32 {
            assert_eq!(*s.get(g, 0), one());
            if g >= 2 {
                assert_eq!(*s.get(g, 2), one());
            } else {
                assert!(s.get(g, 2).is_zero());
            }
            assert!(s.get(g, 1).is_zero());
            assert!(s.get(g, 3).is_zero());
            assert!(s.get(g, 4).is_zero());
        }
    }

    #[test]
    fn quotient_examples() {
        let s0 = GenSpec::new("s0", 1, 0);
        // Lambda(s0) / s0 is 1 at (0,0) only.
        let s = free_gca_series(std::slice::from_ref(&s0), 5, 2).unwrap();
        let q = quotient_by_slope_zero_generator(&s, &s0).unwrap();
        assert_eq!(q.support(), vec![(0, 0, one())]);

        // Lambda(s0, [s0,s0]) / s0 is 1 at (0,0) and (2,2) only.
        let gens = [
            s0.clone(),
            GenSpec::with_parity("tau", 2, 2, Parity::Odd),
        ];
        let s = free_gca_series(&gens, 8, 4).unwrap();
        let q = quotient_by_slope_zero_generator(&s, &s0).unwrap();
        assert_eq!(q.support(), vec![(0, 0, one()), (2, 2, one())]);

        // Two polynomial generators: the sigma-1 powers survive.
        let gens = [s0.clone(), GenSpec::new("s1", 1, 0)];
        let s = free_gca_series(&gens, 6, 2).unwrap();
        let q = quotient_by_slope_zero_generator(&s, &s0).unwrap();
        for g in 0..=6 {
            assert_eq!(*q.get(g, 0), one());
        }
    }

    #[test]
    fn quotient_detects_non_free_series() {
        // An artificial series that drops: 1 at (0,0) and nothing at (1,0)
        // cannot be free over a (1,0) generator.
        let mut s = BigradedSeries::zeros(2, 0);
        s.set_int(0, 0, 1);
        s.set_int(2, 0, 1);
        let s0 = GenSpec::new("s0", 1, 0);
        assert!(matches!(
            quotient_by_slope_zero_generator(&s, &s0),
            Err(Error::NegativeDimension { g: 1, d: 0, .. })
        ));
    }

    #[test]
    fn quotient_telescopes_back() {
        // Summing the quotient along the generator direction recovers the
        // original series.
        let gens = [
            GenSpec::new("s0", 1, 0),
            GenSpec::new("s1", 1, 0),
            GenSpec::with_parity("rho", 2, 1, Parity::Odd),
        ];
        let s = free_gca_series(&gens, 6, 3).unwrap();
        let q = quotient_by_slope_zero_generator(&s, &gens[0]).unwrap();
        for g in 0..=6u32 {
            for d in 0..=3u32 {
                let mut acc = BigRational::zero();
                for gg in 0..=g {
                    acc += q.get(gg, d);
                }
                assert_eq!(acc, *s.get(g, d), "({g},{d})");
            }
        }
    }

    #[test]
    fn vanishing_line_examples() {
        let gens = [
            GenSpec::new("s0", 1, 0),
            GenSpec::with_parity("tau", 2, 2, Parity::Odd),
        ];
        let s = free_gca_series(&gens, 8, 4).unwrap();
        let q = quotient_by_slope_zero_generator(&s, &gens[0]).unwrap();
        let slope = BigRational::one();
        let minus_one = -BigRational::one();
        // Support {(0,0), (2,2)} sits on the d = g line.
        assert!(vanishing_line_check(&q, &slope, &minus_one).0);

        // Lambda(s0): (1, 0) violates d < g.
        let s = free_gca_series(&[gens[0].clone()], 8, 2).unwrap();
        let (ok, witness) = vanishing_line_check(&s, &slope, &BigRational::zero());
        assert!(!ok);
        assert_eq!(witness, Some((1, 0)));

        // The zero series passes any line.
        let zero = BigradedSeries::zeros(4, 4);
        assert!(vanishing_line_check(&zero, &slope, &BigRational::zero()).0);
    }
}
