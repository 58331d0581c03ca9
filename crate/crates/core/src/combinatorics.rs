//! Set systems behind the constructions: Gale–Ryser realization, subset
//! substitution, the two-erasure cover and red/blue line meshes.
//!
//! Points and subset indices are 0-based throughout; the text formats in
//! [`crate::formats`] translate to 1-based labels.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;
use crate::report::{braces, ValidationReport, Witness};

/// An ordered list of subsets of `0..ground`. Order is significant: member
/// `i` is the `i`-th subset produced by a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    ground: usize,
    members: Vec<Vec<usize>>,
}

impl SubsetFamily {
    /// Members are stored sorted; repeated elements inside a member and
    /// elements outside the ground set are rejected.
    pub fn new(ground: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(members.len());
        for (i, mut m) in members.into_iter().enumerate() {
            m.sort_unstable();
            if let Some(&e) = m.iter().find(|&&e| e >= ground) {
                return Err(Error::Coordinate { coord: e, len: ground });
            }
            if m.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Invalid(format!("member {i} repeats an element")));
            }
            sorted.push(m);
        }
        Ok(SubsetFamily {
            ground,
            members: sorted,
        })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &[usize] {
        &self.members[i]
    }
}

/// Why a pair of margins cannot be realized by a binary matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaleRyserViolation {
    TotalsDiffer {
        row_total: usize,
        col_total: usize,
    },
    /// The `prefix` largest row sums add up to more than the columns can
    /// absorb, `sum_j min(col_j, prefix)`.
    Dominance {
        prefix: usize,
        row_sum: usize,
        capacity: usize,
    },
}

impl fmt::Display for GaleRyserViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaleRyserViolation::TotalsDiffer { row_total, col_total } => {
                write!(f, "row total {row_total} differs from column total {col_total}")
            }
            GaleRyserViolation::Dominance {
                prefix,
                row_sum,
                capacity,
            } => write!(
                f,
                "largest {prefix} row sums total {row_sum} but columns admit only {capacity}"
            ),
        }
    }
}

/// Checks the Gale–Ryser conditions for the margins.
pub fn gale_ryser_check(row_sums: &[usize], col_sums: &[usize]) -> std::result::Result<(), GaleRyserViolation> {
    let row_total: usize = row_sums.iter().sum();
    let col_total: usize = col_sums.iter().sum();
    if row_total != col_total {
        return Err(GaleRyserViolation::TotalsDiffer { row_total, col_total });
    }
    let mut rows = row_sums.to_vec();
    rows.sort_unstable_by(|a, b| b.cmp(a));
    let mut row_sum = 0;
    for (p, r) in rows.iter().enumerate() {
        let prefix = p + 1;
        row_sum += r;
        let capacity: usize = col_sums.iter().map(|&c| c.min(prefix)).sum();
        if row_sum > capacity {
            return Err(GaleRyserViolation::Dominance {
                prefix,
                row_sum,
                capacity,
            });
        }
    }
    Ok(())
}

/// True iff some binary matrix has exactly these row and column sums.
pub fn gale_ryser_feasible(row_sums: &[usize], col_sums: &[usize]) -> bool {
    gale_ryser_check(row_sums, col_sums).is_ok()
}

/// Builds a `K × N` binary matrix with the given margins.
///
/// Rows are filled in the given order; each row takes the columns with the
/// largest remaining demand, lowest column index first on ties.
pub fn realize_binary_matrix(row_sums: &[usize], col_sums: &[usize]) -> Result<BinaryMatrix> {
    gale_ryser_check(row_sums, col_sums).map_err(Error::Infeasible)?;
    let mut demand = col_sums.to_vec();
    let mut m = BinaryMatrix::zeros(row_sums.len(), col_sums.len());
    let mut order: Vec<usize> = (0..col_sums.len()).collect();
    for (i, &need) in row_sums.iter().enumerate() {
        order.sort_by(|&a, &b| demand[b].cmp(&demand[a]).then(a.cmp(&b)));
        for &j in &order[..need] {
            debug_assert!(demand[j] > 0, "greedy realization ran dry");
            demand[j] -= 1;
            m.set(i, j, true);
        }
    }
    debug_assert!(demand.iter().all(|&d| d == 0));
    Ok(m)
}

/// Replaces the ones in column `j` of `m` by the elements of `parts[j]`
/// (ascending, top row first) and reads off the rows as subsets.
///
/// The result is pairwise disjoint, covers the union of the parts, has row
/// `i` of size `row_sum(i)` and meets each part at most once.
pub fn substitute_subsets(m: &BinaryMatrix, parts: &SubsetFamily) -> Result<SubsetFamily> {
    if m.cols() != parts.len() {
        return Err(Error::Dimension(format!(
            "matrix has {} columns but there are {} parts",
            m.cols(),
            parts.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for (j, part) in parts.members().iter().enumerate() {
        if m.col_sum(j) != part.len() {
            return Err(Error::Invalid(format!(
                "column {j} sums to {} but part {j} has {} elements",
                m.col_sum(j),
                part.len()
            )));
        }
        for &e in part {
            if !seen.insert(e) {
                return Err(Error::Invalid(format!("parts are not disjoint: {e} repeats")));
            }
        }
    }
    let mut rows = vec![Vec::new(); m.rows()];
    for (j, part) in parts.members().iter().enumerate() {
        let mut next = part.iter();
        for (i, row) in rows.iter_mut().enumerate() {
            if m.get(i, j) {
                row.push(*next.next().expect("column sum checked"));
            }
        }
    }
    SubsetFamily::new(parts.ground(), rows)
}

/// Splits `total` into `parts` near-equal positive integers, larger first.
pub(crate) fn split_near_equal(total: usize, parts: usize) -> Vec<usize> {
    if parts == 0 {
        return Vec::new();
    }
    let (base, extra) = (total / parts, total % parts);
    (0..parts).map(|i| base + usize::from(i < extra)).collect()
}

/// Splits `total` into `ceil(total / cap)` parts: `cap, cap, ..., remainder`.
pub(crate) fn split_max_first(total: usize, cap: usize) -> Vec<usize> {
    let parts = total.div_ceil(cap);
    (0..parts)
        .map(|i| if i + 1 < parts { cap } else { total - cap * (parts - 1) })
        .collect()
}

/// Subsets `A_1..A_eta` of `0..k`, `eta = ceil(2k/r)`, with every element in
/// exactly two subsets, subsets of size at most `r` and pairwise
/// intersections of size at most one. Requires `floor(k/r) >= r`.
pub fn build_cover_t2(k: usize, r: usize) -> Result<SubsetFamily> {
    if r == 0 || k == 0 {
        return Err(Error::Unsupported(format!("need k, r > 0, got k={k} r={r}")));
    }
    if k / r < r {
        return Err(Error::Unsupported(format!(
            "floor(k/r) >= r fails: floor({k}/{r}) = {} < {r}",
            k / r
        )));
    }
    let m = k.div_ceil(r);
    let lambda = k % r;
    // Column-major array: a[i][j] = j*r + i.
    let column = |j: usize, height: usize| (0..height).map(move |i| j * r + i);
    let (red, shared): (Vec<Vec<usize>>, Vec<usize>) = if lambda == 0 {
        ((0..m).map(|j| column(j, r).collect()).collect(), Vec::new())
    } else {
        let alpha = m - 1 - (r - lambda);
        let shared: Vec<usize> = (alpha..m - 1).map(|j| j * r).collect();
        let mut red: Vec<Vec<usize>> = (0..m - 1).map(|j| column(j, r).collect()).collect();
        let mut last: Vec<usize> = column(m - 1, lambda).collect();
        last.extend(&shared);
        red.push(last);
        (red, shared)
    };
    let parts: Vec<Vec<usize>> = red
        .iter()
        .map(|a| a.iter().copied().filter(|e| !shared.contains(e)).collect())
        .collect();
    let remaining: usize = parts.iter().map(Vec::len).sum();
    let row_sums = split_max_first(remaining, r);
    let col_sums: Vec<usize> = parts.iter().map(Vec::len).collect();
    let matrix = realize_binary_matrix(&row_sums, &col_sums)?;
    let blue = substitute_subsets(&matrix, &SubsetFamily::new(k, parts)?)?;
    let mut members = red;
    members.extend(blue.members().iter().cloned());
    debug_assert_eq!(members.len(), (2 * k).div_ceil(r));
    SubsetFamily::new(k, members)
}

/// Checks the three cover conditions: (i) `|A_i| <= r`, (ii) `|A_i ∩ A_j| <= 1`,
/// (iii) every element of `0..k` lies in exactly two members.
pub fn validate_cover_t2(fam: &SubsetFamily, k: usize, r: usize) -> ValidationReport {
    let mut report = ValidationReport::new();
    let sizes = fam
        .members()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.len() > r)
        .map(|(i, a)| Witness::new(vec![i], format!("subset has {} elements", a.len())))
        .collect();
    report.push("i", "every subset has at most r elements", sizes);

    let mut overlaps = Vec::new();
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            let common = intersection(fam.member(i), fam.member(j));
            if common.len() > 1 {
                overlaps.push(Witness::new(vec![i, j], format!("share points {}", braces(&common))));
            }
        }
    }
    report.push("ii", "any two subsets share at most one element", overlaps);

    let mut counts = vec![0usize; k];
    let mut coverage = Vec::new();
    for (i, a) in fam.members().iter().enumerate() {
        for &e in a {
            match counts.get_mut(e) {
                Some(c) => *c += 1,
                None => coverage.push(Witness::new(
                    vec![e],
                    format!("outside the ground set, in subset {}", i + 1),
                )),
            }
        }
    }
    for (e, &c) in counts.iter().enumerate() {
        if c != 2 {
            coverage.push(Witness::new(vec![e], format!("covered {c} times")));
        }
    }
    report.push("iii", "every element lies in exactly two subsets", coverage);
    report
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

/// Which mesh procedure applies to `(k, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshBranch {
    Divisible,
    Nondivisible,
}

/// Derived counts for a mesh on `(k, r)`. The signed fields can be negative
/// for parameters outside the supported range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeshPlan {
    pub k: usize,
    pub r: usize,
    pub m: usize,
    pub ell: usize,
    pub lambda: usize,
    pub alpha: i64,
    pub beta: i64,
    pub h: i64,
    pub branch: MeshBranch,
}

impl MeshPlan {
    /// Requires `0 < r < k`.
    pub fn new(k: usize, r: usize) -> Result<Self> {
        if r == 0 || r >= k {
            return Err(Error::Unsupported(format!("need 0 < r < k, got k={k} r={r}")));
        }
        let m = k.div_ceil(r);
        let ell = (2 * k + m).div_ceil(r) - m;
        let lambda = k % r;
        let (ri, li, mi) = (r as i64, lambda as i64, m as i64);
        let (alpha, beta, h) = if lambda == 0 {
            (0, 0, 0)
        } else {
            let alpha = mi - 1 - (ri - li);
            let beta = alpha * (ri + 1) - (li + 1) * (ri - 1) - ri * li;
            let h = ell as i64 - (li + 1) - ri;
            (alpha, beta, h)
        };
        let branch = if lambda == 0 {
            MeshBranch::Divisible
        } else {
            MeshBranch::Nondivisible
        };
        Ok(MeshPlan {
            k,
            r,
            m,
            ell,
            lambda,
            alpha,
            beta,
            h,
            branch,
        })
    }

    pub fn n(&self) -> usize {
        self.k + self.m + self.ell
    }

    /// Errors unless one of the two mesh procedures applies.
    pub fn supported(&self) -> Result<()> {
        let MeshPlan {
            k, r, m, ell, lambda, ..
        } = *self;
        match self.branch {
            MeshBranch::Divisible if m >= r => Ok(()),
            MeshBranch::Divisible => Err(Error::Unsupported(format!(
                "r | k but m = ceil({k}/{r}) = {m} < r = {r}"
            ))),
            MeshBranch::Nondivisible => {
                if ell < r + lambda + 1 {
                    Err(Error::Unsupported(format!(
                        "k mod r = {lambda} > 0 and l = {ell} < r + lambda + 1 = {}",
                        r + lambda + 1
                    )))
                } else if m < 2 * r - lambda + 1 {
                    Err(Error::Unsupported(format!(
                        "k mod r = {lambda} > 0 and m = {m} < 2r - lambda + 1 = {}",
                        2 * r - lambda + 1
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Red lines `RL_1..RL_m` and blue lines `BL_1..BL_l` over points `0..n`,
/// `n = k + m + l`. Points `k..k+m` are the red parity points and
/// `k+m..n` the blue tail points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mesh {
    pub k: usize,
    pub r: usize,
    pub m: usize,
    pub ell: usize,
    pub red: Vec<Vec<usize>>,
    pub blue: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn n(&self) -> usize {
        self.k + self.m + self.ell
    }

    /// Red lines followed by blue lines.
    pub fn lines(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.red.iter().chain(&self.blue)
    }

    /// `RL3` / `BL2` style label for line index `i` of [`Mesh::lines`].
    pub fn line_name(&self, i: usize) -> String {
        if i < self.red.len() {
            format!("RL{}", i + 1)
        } else {
            format!("BL{}", i - self.red.len() + 1)
        }
    }
}

/// Builds a mesh for `(k, r)` when `r | k` and `m >= r`, or when
/// `lambda = k mod r > 0`, `l >= r + lambda + 1` and `m >= 2r - lambda + 1`.
pub fn build_mesh(k: usize, r: usize) -> Result<Mesh> {
    let plan = MeshPlan::new(k, r)?;
    plan.supported()?;
    let mesh = match plan.branch {
        MeshBranch::Divisible => build_mesh_divisible(&plan)?,
        MeshBranch::Nondivisible => build_mesh_nondivisible(&plan)?,
    };
    let mut mesh = mesh;
    for line in mesh.red.iter_mut().chain(mesh.blue.iter_mut()) {
        line.sort_unstable();
    }
    Ok(mesh)
}

fn build_mesh_divisible(plan: &MeshPlan) -> Result<Mesh> {
    let MeshPlan { k, r, m, ell, .. } = *plan;
    let red: Vec<Vec<usize>> = (0..m)
        .map(|j| (0..r).map(|i| j * r + i).chain([k + j]).collect())
        .collect();
    debug_assert_eq!(ell, (k + m).div_ceil(r));
    let row_sums = split_near_equal(k + m, ell);
    let matrix = realize_binary_matrix(&row_sums, &vec![r + 1; m])?;
    let parts = substitute_subsets(&matrix, &SubsetFamily::new(k + m, red.clone())?)?;
    let blue = parts
        .members()
        .iter()
        .enumerate()
        .map(|(i, b)| b.iter().copied().chain([k + m + i]).collect())
        .collect();
    Ok(Mesh {
        k,
        r,
        m,
        ell,
        red,
        blue,
    })
}

fn build_mesh_nondivisible(plan: &MeshPlan) -> Result<Mesh> {
    let MeshPlan {
        k, r, m, ell, lambda, ..
    } = *plan;
    let (alpha, h) = (plan.alpha as usize, plan.h as usize);

    // (r+1) x m array; the first r rows of full columns hold information
    // points column-major, the last row the red parity points. The partial
    // last column holds lambda information points and parity point k+m-1.
    let cell = |i: usize, j: usize| -> usize {
        if j + 1 < m {
            if i < r {
                j * r + i
            } else {
                k + j
            }
        } else if i < lambda {
            j * r + i
        } else {
            debug_assert_eq!(i, lambda);
            k + m - 1
        }
    };
    // Row segments over the columns alpha..m-1.
    let segment = |i: usize| -> Vec<usize> { (alpha..m - 1).map(|j| cell(i, j)).collect() };

    let mut red: Vec<Vec<usize>> = (0..m - 1).map(|j| (0..=r).map(|i| cell(i, j)).collect()).collect();
    red.push((0..=lambda).map(|i| cell(i, m - 1)).chain(segment(0)).collect());

    // beta can be negative (with h = 0), e.g. (k, r) = (38, 5). The fixed
    // sizes below then overshoot alpha(r+1) by -beta, so the largest of them
    // are shortened by one each; blue lines only need at most r+1 points.
    let mut row_sums = split_near_equal(plan.beta.max(0) as usize, h);
    row_sums.extend(std::iter::repeat_n(r - 1, lambda + 1));
    row_sums.extend(std::iter::repeat_n(lambda, r));
    for _ in 0..(-plan.beta).max(0) {
        let i = (h..ell).max_by_key(|&i| (row_sums[i], std::cmp::Reverse(i))).unwrap();
        row_sums[i] -= 1;
    }
    debug_assert_eq!(row_sums.len(), ell);
    debug_assert_eq!(row_sums.iter().sum::<usize>(), alpha * (r + 1));

    let matrix = realize_binary_matrix(&row_sums, &vec![r + 1; alpha])?;
    let parts = SubsetFamily::new(k + m, red[..alpha].to_vec())?;
    let b = substitute_subsets(&matrix, &parts)?;

    let blue = (0..ell)
        .map(|i| {
            let mut line = b.member(i).to_vec();
            if i >= h && i < h + lambda + 1 {
                line.push(cell(i - h, m - 1));
            } else if i > h + lambda {
                line.extend(segment(i - h - lambda));
            }
            line.push(k + m + i);
            line
        })
        .collect();
    Ok(Mesh {
        k,
        r,
        m,
        ell,
        red,
        blue,
    })
}

/// Checks the five mesh conditions on `mesh`:
///
/// * (i) `|RL_i| = r+1` and the only red parity point on `RL_i` is `k+i`;
/// * (ii) `|BL_j| <= r+1` and the only tail point on `BL_j` is `k+m+j`;
/// * (iii) every point of `0..k+m` is on exactly two lines, one of them red;
/// * (iv) two lines share at most one point;
/// * (v) two lines meeting the same red line are disjoint.
pub fn validate_mesh(mesh: &Mesh) -> ValidationReport {
    let (k, r, m, n) = (mesh.k, mesh.r, mesh.m, mesh.n());
    let mut report = ValidationReport::new();

    let mut bad = Vec::new();
    if mesh.red.len() != m {
        bad.push(Witness::new(
            vec![],
            format!("{} red lines, expected {m}", mesh.red.len()),
        ));
    }
    for (i, line) in mesh.red.iter().enumerate() {
        let parity: Vec<usize> = line.iter().copied().filter(|&p| p >= k).collect();
        if line.len() != r + 1 {
            bad.push(Witness::new(
                line.clone(),
                format!("RL{} has {} points", i + 1, line.len()),
            ));
        }
        if parity != [k + i] {
            bad.push(Witness::new(parity, format!("RL{} has the wrong parity points", i + 1)));
        }
    }
    report.push("i", "red lines have r+1 points and one red parity point each", bad);

    let mut bad = Vec::new();
    if mesh.blue.len() != mesh.ell {
        bad.push(Witness::new(
            vec![],
            format!("{} blue lines, expected {}", mesh.blue.len(), mesh.ell),
        ));
    }
    for (j, line) in mesh.blue.iter().enumerate() {
        let tails: Vec<usize> = line.iter().copied().filter(|&p| p >= k + m).collect();
        if line.len() > r + 1 {
            bad.push(Witness::new(
                line.clone(),
                format!("BL{} has {} points", j + 1, line.len()),
            ));
        }
        if tails != [k + m + j] {
            bad.push(Witness::new(tails, format!("BL{} has the wrong tail points", j + 1)));
        }
        if let Some(&p) = line.iter().find(|&&p| p >= n) {
            bad.push(Witness::new(vec![p], format!("BL{} leaves the point set", j + 1)));
        }
    }
    report.push("ii", "blue lines have at most r+1 points and one tail point each", bad);

    let lines: Vec<&Vec<usize>> = mesh.lines().collect();
    let mut bad = Vec::new();
    for p in 0..k + m {
        let on: Vec<usize> = (0..lines.len()).filter(|&l| lines[l].contains(&p)).collect();
        let red = on.iter().filter(|&&l| l < mesh.red.len()).count();
        if on.len() != 2 || red == 0 {
            let names: Vec<String> = on.iter().map(|&l| mesh.line_name(l)).collect();
            bad.push(Witness::new(
                vec![p],
                format!("on {} lines ({red} red): [{}]", on.len(), names.join(" ")),
            ));
        }
    }
    report.push(
        "iii",
        "every point of [k+m] is on exactly two lines, at least one red",
        bad,
    );

    let mut bad = Vec::new();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let common = intersection(lines[a], lines[b]);
            if common.len() > 1 {
                bad.push(Witness::new(
                    common,
                    format!("shared by {} and {}", mesh.line_name(a), mesh.line_name(b)),
                ));
            }
        }
    }
    report.push("iv", "two lines share at most one point", bad);

    let mut bad = Vec::new();
    for (ri, red) in mesh.red.iter().enumerate() {
        let meeting: Vec<usize> = (0..lines.len())
            .filter(|&l| l != ri && !intersection(lines[l], red).is_empty())
            .collect();
        for (x, &a) in meeting.iter().enumerate() {
            for &b in &meeting[x + 1..] {
                let common = intersection(lines[a], lines[b]);
                if !common.is_empty() {
                    bad.push(Witness::new(
                        common,
                        format!(
                            "{} and {} both meet {} but intersect",
                            mesh.line_name(a),
                            mesh.line_name(b),
                            mesh.line_name(ri)
                        ),
                    ));
                }
            }
        }
    }
    report.push("v", "lines meeting a common red line are disjoint", bad);
    report
}
