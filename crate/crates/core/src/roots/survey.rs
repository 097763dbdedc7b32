//! Inner symmetric spaces `N_ξ = G/K` reached from canonical elements.
//!
//! For canonical `ξ` the fixed subalgebra `k^ℂ` is the sum of the even
//! eigenspaces of `ad ξ`, so its roots are `{α : α(ξ) even}`. The survey
//! identifies `K` by the simple components and centre dimension of that
//! subsystem.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::system::{height_of, CanonicalElement, RootError, RootSystem, RootType};

/// Isomorphism type of a compact connected reductive `K`, up to local
/// isomorphism: sorted simple-component names plus the centre dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KType {
    pub components: Vec<String>,
    pub center: usize,
}

impl KType {
    /// Normalizes low-rank coincidences (`B1 = C1 = A1`, `C2 = B2`,
    /// `D3 = A3`, `D2 = A1×A1`, `D1 = T1`) and drops empty factors.
    pub fn new(components: impl IntoIterator<Item = (RootType, usize)>, center: usize) -> Self {
        let mut names = Vec::new();
        let mut center = center;
        for (kind, rank) in components {
            match (kind, rank) {
                (_, 0) => {}
                (RootType::B | RootType::C, 1) => names.push(String::from("A1")),
                (RootType::C, 2) => names.push(String::from("B2")),
                (RootType::D, 1) => center += 1,
                (RootType::D, 2) => {
                    names.push(String::from("A1"));
                    names.push(String::from("A1"));
                }
                (RootType::D, 3) => names.push(String::from("A3")),
                _ => names.push(format!("{kind}{rank}")),
            }
        }
        names.sort();
        KType { components: names, center }
    }
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() && self.center == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for c in &self.components {
            if !first {
                f.write_str("×")?;
            }
            first = false;
            f.write_str(c)?;
        }
        if self.center > 0 {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "T{}", self.center)?;
        }
        Ok(())
    }
}

/// One canonical element and the symmetric space it fibres over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyEntry {
    pub xi: CanonicalElement,
    pub k_type: KType,
    pub height: u32,
}

/// Classifies one connected Dynkin diagram from its Cartan matrix.
fn classify_component(a: &[Vec<i64>]) -> Option<(RootType, usize)> {
    let k = a.len();
    if k == 1 {
        return Some((RootType::A, 1));
    }
    let off = |i: usize, j: usize| a[i][j];
    if (0..k).any(|i| (0..k).any(|j| off(i, j) == -3)) {
        return (k == 2).then_some((RootType::G, 2));
    }
    let neighbours: Vec<Vec<usize>> =
        (0..k).map(|i| (0..k).filter(|&j| j != i && off(i, j) != 0).collect()).collect();
    let edges: usize = neighbours.iter().map(|v| v.len()).sum::<usize>() / 2;
    if edges != k - 1 {
        return None;
    }
    let simply_laced = (0..k).all(|i| (0..k).all(|j| i == j || off(i, j) >= -1));
    if simply_laced {
        let branch: Vec<usize> = (0..k).filter(|&i| neighbours[i].len() >= 3).collect();
        if branch.is_empty() {
            return Some((RootType::A, k));
        }
        if branch.len() > 1 || neighbours[branch[0]].len() > 3 {
            return None;
        }
        let b = branch[0];
        let mut arms: Vec<usize> = neighbours[b]
            .iter()
            .map(|&start| {
                let (mut prev, mut cur, mut len) = (b, start, 1);
                loop {
                    let next: Vec<usize> = neighbours[cur].iter().copied().filter(|&x| x != prev).collect();
                    match next.as_slice() {
                        [] => break len,
                        [nx] => {
                            prev = cur;
                            cur = *nx;
                            len += 1;
                        }
                        _ => break usize::MAX,
                    }
                }
            })
            .collect();
        arms.sort();
        return match arms.as_slice() {
            [1, 1, x] => Some((RootType::D, x + 3)),
            [1, 2, 2] => Some((RootType::E, 6)),
            [1, 2, 3] => Some((RootType::E, 7)),
            [1, 2, 4] => Some((RootType::E, 8)),
            _ => None,
        };
    }
    // Doubly laced: a path with one double bond.
    if neighbours.iter().any(|v| v.len() > 2) {
        return None;
    }
    if k == 2 {
        return Some((RootType::B, 2));
    }
    let end = (0..k).find(|&i| neighbours[i].len() == 1)?;
    let mut order = vec![end];
    while order.len() < k {
        let cur = *order.last().unwrap();
        let next = neighbours[cur].iter().copied().find(|x| !order.contains(x))?;
        order.push(next);
    }
    let double: Vec<usize> = (0..k - 1).filter(|&p| off(order[p], order[p + 1]) == -2 || off(order[p + 1], order[p]) == -2).collect();
    if double.len() != 1 {
        return None;
    }
    let p = double[0];
    if k == 4 && p == 1 {
        return Some((RootType::F, 4));
    }
    if p != 0 && p != k - 2 {
        return None;
    }
    // A_ij = −2 marks α_j as the short root of the double bond.
    let (i, j) = (order[p], order[p + 1]);
    let short_side_is_j = off(i, j) == -2;
    let short_count = if short_side_is_j { k - 1 - p } else { p + 1 };
    Some(if short_count == 1 { (RootType::B, k) } else { (RootType::C, k) })
}

/// Simple roots, components and type of the subsystem `{α : α(ξ) even}`.
pub fn even_subsystem_type(rs: &RootSystem, xi: &CanonicalElement) -> Result<KType, RootError> {
    let pos: Vec<&Vec<i64>> = rs.positive_roots().iter().filter(|a| xi.value(a) % 2 == 0).collect();
    let set: alloc::collections::BTreeSet<&Vec<i64>> = pos.iter().copied().collect();
    // Indecomposable positive roots of the subsystem are its simple roots.
    let simple: Vec<&Vec<i64>> = pos
        .iter()
        .copied()
        .filter(|a| {
            !pos.iter().any(|b| {
                let diff: Vec<i64> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                diff.iter().all(|&d| d >= 0) && diff.iter().any(|&d| d > 0) && set.contains(&diff)
            })
        })
        .collect();
    let m = simple.len();
    let cartan: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| 2 * rs.inner(simple[i], simple[j]) / rs.inner(simple[j], simple[j])).collect())
        .collect();
    // Connected components of the Dynkin diagram.
    let mut comp = vec![usize::MAX; m];
    let mut components = Vec::new();
    for s in 0..m {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut stack = vec![s];
        let mut members = Vec::new();
        comp[s] = id;
        while let Some(x) = stack.pop() {
            members.push(x);
            for y in 0..m {
                if comp[y] == usize::MAX && cartan[x][y] != 0 {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        members.sort();
        let sub: Vec<Vec<i64>> = members.iter().map(|&i| members.iter().map(|&j| cartan[i][j]).collect()).collect();
        let kind = classify_component(&sub).ok_or_else(|| RootError::UnrecognizedSubsystem(sub.clone()))?;
        components.push(kind);
    }
    Ok(KType::new(components, rs.rank() - m))
}

/// One entry per subset of simple roots (including the empty one), in
/// binary-counter order of the subsets.
pub fn symmetric_space_survey(rs: &RootSystem) -> Result<Vec<SurveyEntry>, RootError> {
    let l = rs.rank();
    (0u32..1 << l)
        .map(|mask| {
            let xi = CanonicalElement::new((0..l).map(|i| (mask >> i) & 1).collect());
            let k_type = even_subsystem_type(rs, &xi)?;
            let height = height_of(rs, &xi)?;
            Ok(SurveyEntry { xi, k_type, height })
        })
        .collect()
}

/// `r(N)`: the largest height among survey entries with the given `K`.
pub fn max_height_for(survey: &[SurveyEntry], k: &KType) -> Option<u32> {
    survey.iter().filter(|e| &e.k_type == k && !e.xi.is_zero()).map(|e| e.height).max()
}

/// Maximum heights grouped by `K`-type (the zero element excluded).
pub fn heights_by_type(survey: &[SurveyEntry]) -> BTreeMap<KType, u32> {
    let mut out: BTreeMap<KType, u32> = BTreeMap::new();
    for e in survey.iter().filter(|e| !e.xi.is_zero()) {
        let slot = out.entry(e.k_type.clone()).or_insert(0);
        *slot = (*slot).max(e.height);
    }
    out
}

/// A row of the classical table of inner symmetric spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSpace {
    pub name: String,
    pub k_type: KType,
    /// The closed-form value of `r(N)`.
    pub expected: u32,
}

fn so_type(m: usize) -> (RootType, usize) {
    if m % 2 == 0 {
        (RootType::D, m / 2)
    } else {
        (RootType::B, (m - 1) / 2)
    }
}

/// Classical inner symmetric spaces of `G` with their closed-form `r(N)`.
pub fn classical_spaces(kind: RootType, rank: usize) -> Vec<ClassicalSpace> {
    let mut out = Vec::new();
    match kind {
        RootType::A => {
            let n = rank + 1;
            for m in 1..=n / 2 {
                let expected = if 2 * m < n { 2 * m } else { 2 * m - 1 };
                out.push(ClassicalSpace {
                    name: format!("SU{n}/S(U{m}xU{})", n - m),
                    k_type: KType::new([(RootType::A, m - 1), (RootType::A, n - m - 1)], 1),
                    expected: expected as u32,
                });
            }
        }
        RootType::B => {
            let n = rank;
            for m in 1..=n {
                let expected = if m < n { 2 * m } else { 2 * m - 1 };
                out.push(ClassicalSpace {
                    name: format!("SO{}/SO{m}xSO{}", 2 * n + 1, 2 * n + 1 - m),
                    k_type: KType::new([so_type(m), so_type(2 * n + 1 - m)], 0),
                    expected: expected as u32,
                });
            }
        }
        RootType::C => {
            let n = rank;
            for m in 1..=n / 2 {
                let expected = if 2 * m < n { 4 * m } else { 4 * m - 2 };
                out.push(ClassicalSpace {
                    name: format!("Sp{n}/Sp{m}xSp{}", n - m),
                    k_type: KType::new([(RootType::C, m), (RootType::C, n - m)], 0),
                    expected: expected as u32,
                });
            }
            out.push(ClassicalSpace {
                name: format!("Sp{n}/U{n}"),
                k_type: KType::new([(RootType::A, n - 1)], 1),
                expected: (2 * n - 1) as u32,
            });
        }
        RootType::D => {
            let n = rank;
            for m in 1..=n / 2 {
                let expected = if 2 * m <= n - 2 {
                    4 * m
                } else if 2 * m == n - 1 {
                    4 * m - 1
                } else {
                    4 * m - 3
                };
                out.push(ClassicalSpace {
                    name: format!("SO{}/SO{}xSO{}", 2 * n, 2 * m, 2 * n - 2 * m),
                    k_type: KType::new([(RootType::D, m), (RootType::D, n - m)], 0),
                    expected: expected as u32,
                });
            }
            if n >= 3 {
                out.push(ClassicalSpace {
                    name: format!("SO{}/U{n}", 2 * n),
                    k_type: KType::new([(RootType::A, n - 1)], 1),
                    expected: (2 * n - 4) as u32,
                });
            }
        }
        _ => {}
    }
    out
}
