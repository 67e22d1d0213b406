//! Grading monoids for stability bookkeeping: the natural numbers, and the
//! monoid {0} together with pairs (genus > 0, arf in Z/2), where every
//! genus-0 pair collapses to the single zero element. Addition is
//! componentwise with the Arf residue added mod 2.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GradedIndex {
    genus: u64,
    arf: Option<u8>,
}

impl GradedIndex {
    /// N-graded flavor (no Arf component).
    pub fn plain(genus: u64) -> Self {
        GradedIndex { genus, arf: None }
    }

    /// Arf-graded flavor; (0, anything) is the monoid zero.
    pub fn with_arf(genus: u64, arf: u8) -> Self {
        if genus == 0 {
            GradedIndex {
                genus: 0,
                arf: Some(0),
            }
        } else {
            GradedIndex {
                genus,
                arf: Some(arf % 2),
            }
        }
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn arf(&self) -> Option<u8> {
        self.arf
    }

    pub fn is_zero(&self) -> bool {
        self.genus == 0
    }

    pub fn add(&self, other: &GradedIndex) -> Result<GradedIndex> {
        match (self.arf, other.arf) {
            (None, None) => Ok(GradedIndex::plain(self.genus + other.genus)),
            (Some(a), Some(b)) => Ok(GradedIndex::with_arf(self.genus + other.genus, a ^ b)),
            _ => Err(Error::FlavorMismatch),
        }
    }
}

impl std::fmt::Display for GradedIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.arf {
            None => write!(f, "{}", self.genus),
            Some(a) => {
                if self.genus == 0 {
                    write!(f, "0")
                } else {
                    write!(f, "({}, {})", self.genus, a)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn componentwise_addition() {
        let a = GradedIndex::with_arf(1, 0);
        let b = GradedIndex::with_arf(1, 1);
        assert_eq!(a.add(&b).unwrap(), GradedIndex::with_arf(2, 1));
        // The relation that makes s1^2 - s0^2 gradable: both squares land
        // in (2, 0).
        assert_eq!(b.add(&b).unwrap(), GradedIndex::with_arf(2, 0));
    }

    #[test]
    fn zero_is_the_identity() {
        let zero = GradedIndex::with_arf(0, 1);
        assert!(zero.is_zero());
        assert_eq!(zero.arf(), Some(0));
        let x = GradedIndex::with_arf(3, 1);
        assert_eq!(zero.add(&x).unwrap(), x);
        assert_eq!(x.add(&zero).unwrap(), x);
    }

    #[test]
    fn flavors_do_not_mix() {
        let n = GradedIndex::plain(2);
        let h = GradedIndex::with_arf(2, 0);
        assert!(matches!(n.add(&h), Err(Error::FlavorMismatch)));
    }

    #[test]
    fn monoid_laws_small_range() {
        for g1 in 0..=10u64 {
            for a1 in 0..2u8 {
                for g2 in 0..=10u64 {
                    for a2 in 0..2u8 {
                        let x = GradedIndex::with_arf(g1, a1);
                        let y = GradedIndex::with_arf(g2, a2);
                        assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
                        for g3 in 0..=5u64 {
                            let z = GradedIndex::with_arf(g3, 1);
                            assert_eq!(
                                x.add(&y).unwrap().add(&z).unwrap(),
                                x.add(&y.add(&z).unwrap()).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }
}
