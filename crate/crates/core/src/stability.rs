//! Homological-stability ranges for the diffeomorphism groups of
//! D^{2n} # (S^n x S^n)^{#g}, encoded as executable predicates.
//!
//! Each verdict carries its clause label and the inequalities it
//! evaluated, so generated tables are self-documenting. All slope
//! comparisons are exact: d < ((3n-6)/(3n-5)) g is evaluated as
//! d (3n-5) < (3n-6) g in integers, never in floating point.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Z,
    ZHalf,
    Q,
    F2,
}

impl Coefficients {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Coefficients::Z),
            "Z_half" | "Z1/2" | "z_half" => Ok(Coefficients::ZHalf),
            "Q" | "q" => Ok(Coefficients::Q),
            "F2" | "f2" => Ok(Coefficients::F2),
            other => Err(Error::Parse(format!("unknown coefficients {other:?}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Coefficients::Z => "Z",
            Coefficients::ZHalf => "Z[1/2]",
            Coefficients::Q => "Q",
            Coefficients::F2 => "F2",
        }
    }
}

/// A stabilization-map query: the map from genus g-1 to genus g in
/// homological degree d, with the given coefficients, for dimension
/// parameter n (odd, at least 3).
#[derive(Clone, Copy, Debug)]
pub struct StabilityQuery {
    pub n: u64,
    pub coeffs: Coefficients,
    pub g: u64,
    pub d: u64,
}

impl StabilityQuery {
    pub fn new(n: u64, coeffs: Coefficients, g: u64, d: u64) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::OutOfRange(format!(
                "dimension parameter n must be odd and >= 3, got {n}"
            )));
        }
        if g < 1 {
            return Err(Error::OutOfRange("genus must be >= 1".into()));
        }
        Ok(StabilityQuery { n, coeffs, g, d })
    }
}

/// The verdict for one query, with the clause that fired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeVerdict {
    pub surjective: bool,
    pub isomorphism: bool,
    pub case_label: &'static str,
    pub citation: String,
}

fn exceptional(n: u64) -> bool {
    n == 3 || n == 7
}

/// The range statement: five clauses split on whether n is 3 or 7 and on
/// the coefficients.
pub fn theorem_a(q: &StabilityQuery) -> Result<RangeVerdict> {
    let StabilityQuery { n, coeffs, g, d } = *q;
    match (exceptional(n), coeffs) {
        (true, Coefficients::Z) => {
            let surjective = 3 * d < 2 * g;
            let isomorphism = 2 * g >= 4 && 3 * d <= 2 * g - 4;
            Ok(RangeVerdict {
                surjective,
                isomorphism,
                case_label: "A(i)",
                citation: "A(i): n in {3,7}, Z coefficients; surjective for 3d <= 2g - 1, \
                           isomorphism for 3d <= 2g - 4"
                    .into(),
            })
        }
        (false, Coefficients::Z) => {
            let surjective = g >= 2 && 2 * d <= g - 2;
            let isomorphism = g >= 4 && 2 * d <= g - 4;
            Ok(RangeVerdict {
                surjective,
                isomorphism,
                case_label: "A(ii)",
                citation: "A(ii): n odd, n not in {3,7}, Z coefficients; surjective for \
                           2d <= g - 2, isomorphism for 2d <= g - 4"
                    .into(),
            })
        }
        (false, Coefficients::ZHalf) => {
            let surjective = 2 * g >= 4 && 3 * d <= 2 * g - 4;
            let isomorphism = 2 * g >= 7 && 3 * d <= 2 * g - 7;
            Ok(RangeVerdict {
                surjective,
                isomorphism,
                case_label: "A(iii)",
                citation: "A(iii): n odd, n not in {3,7}, Z[1/2] coefficients; surjective for \
                           3d <= 2g - 4, isomorphism for 3d <= 2g - 7"
                    .into(),
            })
        }
        (true, Coefficients::Q) => {
            // d < ((3n-6)/(3n-5)) g, exactly.
            let num = 3 * n - 6;
            let den = 3 * n - 5;
            let surjective = d * den < num * g;
            let isomorphism = (d + 1) * den < num * g;
            Ok(RangeVerdict {
                surjective,
                isomorphism,
                case_label: "A(iv)",
                citation: format!(
                    "A(iv): n in {{3,7}}, Q coefficients; surjective for d < ({num}/{den}) g, \
                     isomorphism for d < ({num}/{den}) g - 1"
                ),
            })
        }
        (false, Coefficients::Q) => {
            let num = 3 * n - 6;
            let den = 3 * n - 5;
            let surjective = g >= 1 && d * den < num * (g - 1);
            let isomorphism = g >= 1 && (d + 1) * den < num * (g - 1);
            Ok(RangeVerdict {
                surjective,
                isomorphism,
                case_label: "A(v)",
                citation: format!(
                    "A(v): n odd, n not in {{3,7}}, Q coefficients; surjective for \
                     d < ({num}/{den})(g - 1), isomorphism for d < ({num}/{den})(g - 1) - 1"
                ),
            })
        }
        (_, Coefficients::F2) => Err(Error::UnsupportedCoefficients(
            "no F2 clause; use the dichotomy predicates instead".into(),
        )),
        (true, Coefficients::ZHalf) => Err(Error::UnsupportedCoefficients(
            "no Z[1/2] clause for n in {3,7}; the Z clause A(i) already applies".into(),
        )),
    }
}

/// The two branches of the quantized-stability dichotomy for odd n >= 5,
/// n != 7: either the relative homology in bidegrees (4k, 2k) never
/// vanishes, or stability holds with slope 2/3 up to constants.
#[derive(Clone, Debug)]
pub struct DichotomyDescriptor {
    pub n: u64,
    pub branch_i: String,
    pub branch_ii: String,
}

impl DichotomyDescriptor {
    /// Branch (i): the flagged bidegree for each k >= 1.
    pub fn branch_i_bidegree(&self, k: u64) -> (u64, u64) {
        (4 * k, 2 * k)
    }

    /// Branch (ii): the slope-2/3 range pair.
    pub fn branch_ii_verdict(&self, g: u64, d: u64) -> (bool, bool) {
        let surjective = 2 * g >= 6 && 3 * d <= 2 * g - 6;
        let isomorphism = 2 * g >= 9 && 3 * d <= 2 * g - 9;
        (surjective, isomorphism)
    }
}

pub fn theorem_b_dichotomy(n: u64) -> Result<DichotomyDescriptor> {
    if n < 5 || n.is_multiple_of(2) || n == 7 {
        return Err(Error::OutOfRange(format!(
            "the dichotomy needs odd n >= 5 with n != 7, got {n}"
        )));
    }
    Ok(DichotomyDescriptor {
        n,
        branch_i: "B(i): the relative homology groups in bidegrees (g, d) = (4k, 2k) are \
                   nonzero for all k >= 1"
            .into(),
        branch_ii: "B(ii): surjective for 3d <= 2g - 6, isomorphism for 3d <= 2g - 9".into(),
    })
}

/// One row of a stability table.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub g: u64,
    pub d: u64,
    pub surjective: bool,
    pub isomorphism: bool,
    pub case_label: &'static str,
}

/// The verdict grid for 1 <= g <= max_g, 0 <= d <= max_d.
pub fn stability_table(
    n: u64,
    coeffs: Coefficients,
    max_g: u64,
    max_d: u64,
) -> Result<(Vec<TableEntry>, String)> {
    let mut rows = Vec::new();
    let mut citation = String::new();
    for g in 1..=max_g {
        for d in 0..=max_d {
            let v = theorem_a(&StabilityQuery::new(n, coeffs, g, d)?)?;
            if citation.is_empty() {
                citation = v.citation.clone();
            }
            rows.push(TableEntry {
                g,
                d,
                surjective: v.surjective,
                isomorphism: v.isomorphism,
                case_label: v.case_label,
            });
        }
    }
    Ok((rows, citation))
}
