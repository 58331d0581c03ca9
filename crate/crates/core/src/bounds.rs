//! Closed-form length, rate and distance bounds, in exact arithmetic.

use std::fmt;

use num_rational::Ratio;

use crate::combinatorics::MeshPlan;
use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

fn check_rt(k: usize, r: usize) -> Result<()> {
    if r == 0 || r >= k {
        return Err(Error::Unsupported(format!("need 0 < r < k, got k={k} r={r}")));
    }
    Ok(())
}

/// Smallest admissible length of a code with dimension `k`, locality `r`
/// that repairs any `t` erasures sequentially:
///
/// * `t = 1`: `k + ceil(k/r)`, the integer form of the rate bound `r/(r+1)`;
/// * `t = 2`: `k + ceil(2k/r)`;
/// * `t = 3`: `k + ceil((2k + ceil(k/r)) / r)`.
pub fn length_bound(k: usize, r: usize, t: usize) -> Result<usize> {
    check_rt(k, r)?;
    match t {
        1 => Ok(k + k.div_ceil(r)),
        2 => Ok(k + (2 * k).div_ceil(r)),
        3 => Ok(k + (2 * k + k.div_ceil(r)).div_ceil(r)),
        _ => Err(Error::Unsupported(format!(
            "length bounds are known only for t in 1..=3, got t={t}"
        ))),
    }
}

/// Limit of `k/n` under [`length_bound`] as `k` grows: `r/(r+1)`, `r/(r+2)`
/// and `r²/(r+1)²`.
pub fn rate_bound(r: usize, t: usize) -> Result<Rational> {
    let r = r as i128;
    match t {
        1 => Ok(Rational::new(r, r + 1)),
        2 => Ok(Rational::new(r, r + 2)),
        3 => Ok(Rational::new(r * r, (r + 1) * (r + 1))),
        _ => Err(Error::Unsupported(format!(
            "rate bounds are known only for t in 1..=3, got t={t}"
        ))),
    }
}

/// Whether a code meeting the length bound is known to exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Achievable {
    /// A construction in this crate meets the bound.
    ByConstruction,
    Unknown,
    /// No construction is attempted for this `t`.
    NotApplicable,
}

impl fmt::Display for Achievable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Achievable::ByConstruction => "yes-by-construction",
            Achievable::Unknown => "unknown",
            Achievable::NotApplicable => "not-applicable",
        })
    }
}

pub fn achievable(k: usize, r: usize, t: usize) -> Achievable {
    match t {
        2 if r > 0 && k / r >= r => Achievable::ByConstruction,
        3 if MeshPlan::new(k, r).is_ok_and(|p| p.supported().is_ok()) => Achievable::ByConstruction,
        2 | 3 => Achievable::Unknown,
        _ => Achievable::NotApplicable,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Integer(i128),
    Rational(Rational),
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Integer(v) => write!(f, "{v}"),
            BoundValue::Rational(q) => write!(f, "{q}"),
        }
    }
}

/// One named comparison bound; `value` is `None` when the bound does not
/// apply to the given `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub name: &'static str,
    pub description: &'static str,
    pub value: Option<BoundValue>,
}

/// Largest `t` accepted by [`reference_bounds`]; keeps the products exact in
/// 128-bit arithmetic.
pub const MAX_REFERENCE_T: usize = 12;

/// Rate and distance bounds from the wider literature, evaluated at
/// `(n, k, r, t)`:
///
/// * `rate`: the actual rate `k/n`;
/// * `rate-all-symbol`: `r/(r+t)`;
/// * `distance-all-symbol`: `n - k + 1 - t(ceil(k/r) - 1)`;
/// * `rate-availability`: `1 / prod_{j=1..t} (1 + 1/(jr))`;
/// * `distance-availability`: `n - sum_{i=0..t} floor((k-1)/r^i)`;
/// * `rate-sequential-two` (`t = 2` only): `r/(r+2)`;
/// * `length-availability-three` (`t = 3` only): `(r+1)(2r+1)(3r+1) k / (6r³)`.
pub fn reference_bounds(n: usize, k: usize, r: usize, t: usize) -> Result<Vec<ReferenceRow>> {
    if n == 0 || k == 0 || r == 0 || t == 0 {
        return Err(Error::Invalid(format!(
            "parameters must be positive, got n={n} k={k} r={r} t={t}"
        )));
    }
    if t > MAX_REFERENCE_T {
        return Err(Error::Capacity {
            what: "erasure tolerance for reference bounds",
            actual: t,
            limit: MAX_REFERENCE_T,
        });
    }
    let (n, k, r, t) = (n as i128, k as i128, r as i128, t as i128);
    let availability = (1..=t).fold(Rational::from_integer(1), |acc, j| {
        acc * Rational::new(j * r, j * r + 1)
    });
    let mut floor_sum = 0;
    let mut power = 1i128;
    for _ in 0..=t {
        floor_sum += (k - 1) / power;
        power = power.saturating_mul(r);
    }
    Ok(vec![
        ReferenceRow {
            name: "rate",
            description: "k/n",
            value: Some(BoundValue::Rational(Rational::new(k, n))),
        },
        ReferenceRow {
            name: "rate-all-symbol",
            description: "k/n <= r/(r+t)",
            value: Some(BoundValue::Rational(Rational::new(r, r + t))),
        },
        ReferenceRow {
            name: "distance-all-symbol",
            description: "d <= n-k+1-t(ceil(k/r)-1)",
            value: Some(BoundValue::Integer(n - k + 1 - t * ((k + r - 1) / r - 1))),
        },
        ReferenceRow {
            name: "rate-availability",
            description: "k/n <= 1/prod_j(1+1/(jr))",
            value: Some(BoundValue::Rational(availability)),
        },
        ReferenceRow {
            name: "distance-availability",
            description: "d <= n-sum_i floor((k-1)/r^i)",
            value: Some(BoundValue::Integer(n - floor_sum)),
        },
        ReferenceRow {
            name: "rate-sequential-two",
            description: "k/n <= r/(r+2)",
            value: (t == 2).then(|| BoundValue::Rational(Rational::new(r, r + 2))),
        },
        ReferenceRow {
            name: "length-availability-three",
            description: "n >= (r+1)(2r+1)(3r+1)k/(6r^3)",
            value: (t == 3).then(|| BoundValue::Rational(availability_length_t3(k, r))),
        },
    ])
}

fn availability_length_t3(k: i128, r: i128) -> Rational {
    Rational::new(k * (r + 1) * (2 * r + 1) * (3 * r + 1), 6 * r * r * r)
}

/// Everything known about the parameters `(k, r, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub k: usize,
    pub r: usize,
    pub t: usize,
    pub length_bound: usize,
    pub rate_bound: Rational,
    /// Reference bounds evaluated at `n = length_bound`.
    pub reference: Vec<ReferenceRow>,
    pub achievable: Achievable,
}

pub fn bound_report(k: usize, r: usize, t: usize) -> Result<BoundReport> {
    let length_bound = length_bound(k, r, t)?;
    Ok(BoundReport {
        k,
        r,
        t,
        length_bound,
        rate_bound: rate_bound(r, t)?,
        reference: reference_bounds(length_bound, k, r, t)?,
        achievable: achievable(k, r, t),
    })
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={} r={} t={}", self.k, self.r, self.t)?;
        write!(f, "length_bound={}", self.length_bound)?;
        if self.t == 1 {
            write!(f, " (integer form of the rate bound)")?;
        }
        writeln!(f)?;
        writeln!(f, "rate_bound={}", self.rate_bound)?;
        writeln!(f, "achievable={}", self.achievable)?;
        for row in &self.reference {
            match &row.value {
                Some(v) => writeln!(f, "{}\t{}\t{}", row.name, v, row.description)?,
                None => writeln!(f, "{}\tNA\t{}", row.name, row.description)?,
            }
        }
        Ok(())
    }
}

/// The three-erasure length bound next to the ceiling of the availability
/// length bound. `None` fields mark `k <= r`, where neither applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub k: usize,
    pub bound_t3: Option<usize>,
    pub availability_ceil: Option<usize>,
    /// Exact availability bound, for plotting.
    pub availability: Option<Rational>,
}

impl ComparisonRow {
    pub fn diff(&self) -> Option<i64> {
        Some(self.bound_t3? as i64 - self.availability_ceil? as i64)
    }
}

/// One row per `k` in `k_lo..=k_hi`.
pub fn compare_t3(k_lo: usize, k_hi: usize, r: usize) -> Result<Vec<ComparisonRow>> {
    if r < 2 {
        return Err(Error::Unsupported(format!("comparison needs r >= 2, got r={r}")));
    }
    Ok((k_lo..=k_hi)
        .map(|k| {
            if k <= r {
                return ComparisonRow {
                    k,
                    bound_t3: None,
                    availability_ceil: None,
                    availability: None,
                };
            }
            let exact = availability_length_t3(k as i128, r as i128);
            ComparisonRow {
                k,
                bound_t3: Some(length_bound(k, r, 3).expect("k > r")),
                availability_ceil: Some(exact.ceil().to_integer() as usize),
                availability: Some(exact),
            }
        })
        .collect())
}

/// Header plus one tab-separated row per `k`; `NA` marks rows where the
/// bounds do not apply.
pub fn comparison_tsv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("k\tbound_t3\tavailability_bound_ceil\tdiff\n");
    for row in rows {
        match (row.bound_t3, row.availability_ceil, row.diff()) {
            (Some(b), Some(a), Some(d)) => out.push_str(&format!("{}\t{b}\t{a}\t{d}\n", row.k)),
            _ => out.push_str(&format!("{}\tNA\tNA\tNA\n", row.k)),
        }
    }
    out
}

/// Plot series: a `# name` line, then `k<TAB>value` pairs, per curve. The
/// availability bound is printed in decimal.
pub fn comparison_series(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("# bound_t3\n");
    for row in rows {
        if let Some(b) = row.bound_t3 {
            out.push_str(&format!("{}\t{b}\n", row.k));
        }
    }
    out.push_str("\n# availability_bound\n");
    for row in rows {
        if let Some(q) = row.availability {
            let value = *q.numer() as f64 / *q.denom() as f64;
            out.push_str(&format!("{}\t{value:.4}\n", row.k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_examples() {
        assert_eq!(length_bound(12, 3, 2).unwrap(), 20);
        assert_eq!(length_bound(12, 3, 3).unwrap(), 22);
        assert_eq!(length_bound(16, 3, 3).unwrap(), 29);
        assert_eq!(length_bound(12, 3, 1).unwrap(), 16);
        assert!(length_bound(12, 3, 4).is_err());
        assert!(length_bound(3, 3, 2).is_err());
    }

    #[test]
    fn reference_examples() {
        let rows = reference_bounds(20, 12, 3, 2).unwrap();
        let get = |name: &str| rows.iter().find(|r| r.name == name).unwrap().value;
        assert_eq!(get("rate-all-symbol"), Some(BoundValue::Rational(Rational::new(3, 5))));
        assert_eq!(get("rate"), get("rate-all-symbol"));
        assert_eq!(get("length-availability-three"), None);

        let rows = reference_bounds(5, 1, 1, 3).unwrap();
        let d = rows.iter().find(|r| r.name == "distance-availability").unwrap().value;
        assert_eq!(d, Some(BoundValue::Integer(5)));

        let rows = reference_bounds(22, 12, 3, 3).unwrap();
        let l = rows
            .iter()
            .find(|r| r.name == "length-availability-three")
            .unwrap()
            .value;
        assert_eq!(l, Some(BoundValue::Rational(Rational::new(560, 27))));
    }

    #[test]
    fn comparison_examples() {
        let rows = compare_t3(2, 12, 3).unwrap();
        assert_eq!(rows[0].diff(), None);
        let last = rows.last().unwrap();
        assert_eq!((last.bound_t3, last.availability_ceil), (Some(22), Some(21)));
        let rows = compare_t3(2, 2, 2).unwrap();
        assert!(comparison_tsv(&rows).ends_with("2\tNA\tNA\tNA\n"));
    }

    #[test]
    fn achievability() {
        assert_eq!(achievable(12, 3, 2), Achievable::ByConstruction);
        assert_eq!(achievable(6, 3, 2), Achievable::Unknown);
        assert_eq!(achievable(16, 3, 3), Achievable::ByConstruction);
        assert_eq!(achievable(4, 3, 3), Achievable::Unknown);
        assert_eq!(achievable(12, 3, 1), Achievable::NotApplicable);
    }
}
