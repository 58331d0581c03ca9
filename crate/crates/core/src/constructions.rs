//! Binary codes from set systems: the two-erasure code over a cover and
//! the three-erasure code over a red/blue mesh.

use crate::combinatorics::{build_cover_t2, build_mesh, Mesh, SubsetFamily};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVec, CodeParams, LinearCode};
use crate::report::{braces, ValidationReport, Witness};

/// Parity definitions for a systematic code. Parity `i` is coordinate
/// `k + i` and its support may only use coordinates `< k + i`, so parities
/// can build on earlier parities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityMap {
    k: usize,
    parities: Vec<Vec<usize>>,
}

impl ParityMap {
    pub fn new(k: usize, parities: Vec<Vec<usize>>) -> Result<Self> {
        for (i, support) in parities.iter().enumerate() {
            if let Some(&j) = support.iter().find(|&&j| j >= k + i) {
                return Err(Error::Invalid(format!(
                    "parity at coordinate {} refers forward to coordinate {}",
                    k + i + 1,
                    j + 1
                )));
            }
        }
        Ok(ParityMap { k, parities })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parities(&self) -> &[Vec<usize>] {
        &self.parities
    }
}

/// Systematic `[k + p, k]` code: identity block, then each parity column is
/// the XOR of the columns in its support.
pub fn code_from_parities(pm: &ParityMap) -> Result<LinearCode> {
    let k = pm.k;
    let mut columns: Vec<BitVec> = (0..k).map(|i| BitVec::with_ones(k, &[i])).collect::<Result<_>>()?;
    for support in &pm.parities {
        let mut col = BitVec::zeros(k);
        for &j in support {
            col.xor_assign(&columns[j]);
        }
        columns.push(col);
    }
    LinearCode::new(BinaryMatrix::from_columns(k, &columns)?, None)
}

/// The set system a construction was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Cover(SubsetFamily),
    Mesh(Mesh),
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub code: LinearCode,
    pub certificate: Certificate,
}

/// `[k + ceil(2k/r), k]` code tolerating two erasures: parity `k+i` is the
/// XOR of cover subset `A_i`. Requires `floor(k/r) >= r`.
pub fn construct_t2(k: usize, r: usize) -> Result<Construction> {
    let cover = build_cover_t2(k, r)?;
    let pm = ParityMap::new(k, cover.members().to_vec())?;
    let code = code_from_parities(&pm)?.with_params(Some(CodeParams { r, t: 2 }))?;
    Ok(Construction {
        code,
        certificate: Certificate::Cover(cover),
    })
}

/// `[k + m + l, k]` code tolerating three erasures: red parity `k+i` closes
/// red line `RL_i`, then blue parity `k+m+j` closes blue line `BL_j`.
pub fn construct_t3(k: usize, r: usize) -> Result<Construction> {
    let mesh = build_mesh(k, r)?;
    let red = mesh
        .red
        .iter()
        .enumerate()
        .map(|(i, line)| line.iter().copied().filter(|&p| p != k + i).collect());
    let blue = mesh
        .blue
        .iter()
        .enumerate()
        .map(|(j, line)| line.iter().copied().filter(|&p| p != k + mesh.m + j).collect());
    let pm = ParityMap::new(k, red.chain(blue).collect())?;
    let code = code_from_parities(&pm)?.with_params(Some(CodeParams { r, t: 3 }))?;
    Ok(Construction {
        code,
        certificate: Certificate::Mesh(mesh),
    })
}

fn repairs(code: &LinearCode, i: usize, set: &[usize]) -> bool {
    let mut acc = code.column(i).clone();
    for &j in set {
        acc.xor_assign(code.column(j));
    }
    acc.is_zero()
}

fn without(line: &[usize], p: usize) -> Vec<usize> {
    line.iter().copied().filter(|&q| q != p).collect()
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// Checks the two-erasure sufficient condition against a code built from
/// `cover`: (a) every information coordinate has two disjoint repair sets of
/// size at most `r`; (b) every parity has a repair set inside `0..k`.
pub fn check_cover_certificate(code: &LinearCode, cover: &SubsetFamily, r: usize) -> ValidationReport {
    let k = code.k();
    let mut report = ValidationReport::new();
    let mut bad = Vec::new();
    for i in 0..k {
        let owners: Vec<usize> = (0..cover.len()).filter(|&a| cover.member(a).contains(&i)).collect();
        if owners.len() != 2 {
            bad.push(Witness::new(vec![i], format!("in {} cover subsets", owners.len())));
            continue;
        }
        let sets: Vec<Vec<usize>> = owners
            .iter()
            .map(|&a| {
                let mut s = without(cover.member(a), i);
                s.push(k + a);
                s
            })
            .collect();
        for s in &sets {
            if s.len() > r || s.iter().any(|&j| j >= code.n()) || !repairs(code, i, s) {
                bad.push(Witness::new(vec![i], format!("{} is not a repair set", braces(s))));
            }
        }
        if !disjoint(&sets[0], &sets[1]) {
            bad.push(Witness::new(vec![i], "repair sets overlap"));
        }
    }
    report.push("a", "information coordinates have two disjoint repair sets", bad);

    let mut bad = Vec::new();
    for (a, subset) in cover.members().iter().enumerate() {
        let p = k + a;
        if p >= code.n() || subset.len() > r || !repairs(code, p, subset) {
            bad.push(Witness::new(vec![p], format!("{} does not repair it", braces(subset))));
        }
    }
    report.push("b", "parities have a repair set among the information coordinates", bad);
    report
}

/// Checks the three-erasure sufficient condition against a code built from
/// `mesh`: (a) every `i < k+m` has repair sets `R1`, `R2`, disjoint, such
/// that each `j` in `R1` has a repair set avoiding `R2 ∪ {i}`; (b) every
/// tail coordinate has a repair set inside `0..k+m`.
pub fn check_mesh_certificate(code: &LinearCode, mesh: &Mesh, r: usize) -> ValidationReport {
    let core = mesh.k + mesh.m;
    let lines: Vec<&Vec<usize>> = mesh.lines().collect();
    let valid = |i: usize, s: &[usize]| s.len() <= r && s.iter().all(|&j| j < code.n()) && repairs(code, i, s);
    let mut report = ValidationReport::new();

    let mut bad = Vec::new();
    for i in 0..core {
        let on: Vec<usize> = (0..lines.len()).filter(|&l| lines[l].contains(&i)).collect();
        if on.len() != 2 {
            bad.push(Witness::new(vec![i], format!("on {} lines", on.len())));
            continue;
        }
        let works = |first: usize, second: usize| -> bool {
            let r1 = without(lines[first], i);
            let r2 = without(lines[second], i);
            if !valid(i, &r1) || !valid(i, &r2) || !disjoint(&r1, &r2) {
                return false;
            }
            let mut avoid = r2.clone();
            avoid.push(i);
            r1.iter().all(|&j| {
                (0..lines.len()).any(|l| {
                    l != first && lines[l].contains(&j) && {
                        let rj = without(lines[l], j);
                        disjoint(&rj, &avoid) && valid(j, &rj)
                    }
                })
            })
        };
        if !works(on[0], on[1]) && !works(on[1], on[0]) {
            bad.push(Witness::new(
                vec![i],
                format!(
                    "no witness pair from {} and {}",
                    mesh.line_name(on[0]),
                    mesh.line_name(on[1])
                ),
            ));
        }
    }
    report.push("a", "points of [k+m] have nested disjoint repair sets", bad);

    let mut bad = Vec::new();
    for (j, line) in mesh.blue.iter().enumerate() {
        let p = core + j;
        let set = without(line, p);
        if set.iter().any(|&q| q >= core) || !valid(p, &set) {
            bad.push(Witness::new(vec![p], format!("{} does not repair it", braces(&set))));
        }
    }
    report.push("b", "tail coordinates have a repair set inside [k+m]", bad);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_parity_map() {
        let code = code_from_parities(&ParityMap::new(2, vec![vec![0, 1]]).unwrap()).unwrap();
        assert_eq!(code.generator(), &BinaryMatrix::from_strs(3, &["101", "011"]).unwrap());
    }

    #[test]
    fn parities_expand_through_earlier_parities() {
        let code = code_from_parities(&ParityMap::new(1, vec![vec![0], vec![0, 1]]).unwrap()).unwrap();
        assert_eq!(code.generator(), &BinaryMatrix::from_strs(3, &["110"]).unwrap());
    }

    #[test]
    fn parity_map_rejects_forward_reference() {
        assert!(ParityMap::new(2, vec![vec![2]]).is_err());
        assert!(ParityMap::new(2, vec![vec![0], vec![2]]).is_ok());
    }

    #[test]
    fn empty_parity_map_is_not_a_code() {
        assert!(code_from_parities(&ParityMap::new(2, vec![]).unwrap()).is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(construct_t2(12, 3).unwrap().code.n(), 20);
        assert_eq!(construct_t3(12, 3).unwrap().code.n(), 22);
        assert_eq!(construct_t3(16, 3).unwrap().code.n(), 29);
        assert_eq!(construct_t3(9, 3).unwrap().code.n(), 16);
        assert!(matches!(construct_t2(6, 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn certificates_check_out() {
        let c = construct_t2(12, 3).unwrap();
        let Certificate::Cover(cover) = &c.certificate else {
            panic!()
        };
        assert!(check_cover_certificate(&c.code, cover, 3).passed());

        for (k, r) in [(12, 3), (16, 3), (7, 2)] {
            let c = construct_t3(k, r).unwrap();
            let Certificate::Mesh(mesh) = &c.certificate else {
                panic!()
            };
            let rep = check_mesh_certificate(&c.code, mesh, r);
            assert!(rep.passed(), "({k},{r})\n{rep}");
        }
    }

    #[test]
    fn cover_certificate_rejects_wrong_code() {
        let c = construct_t2(9, 3).unwrap();
        let Certificate::Cover(cover) = &c.certificate else {
            panic!()
        };
        let mut perm: Vec<usize> = (0..15).collect();
        perm.swap(0, 9);
        let other = c.code.permute(&perm).unwrap();
        assert!(!check_cover_certificate(&other, cover, 3).passed());
    }
}
