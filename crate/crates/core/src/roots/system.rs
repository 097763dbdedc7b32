use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// The Cartan–Killing type letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            RootType::A => "A",
            RootType::B => "B",
            RootType::C => "C",
            RootType::D => "D",
            RootType::E => "E",
            RootType::F => "F",
            RootType::G => "G",
        };
        f.write_str(c)
    }
}

impl FromStr for RootType {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, RootError> {
        match s.trim() {
            "A" | "a" => Ok(RootType::A),
            "B" | "b" => Ok(RootType::B),
            "C" | "c" => Ok(RootType::C),
            "D" | "d" => Ok(RootType::D),
            "E" | "e" => Ok(RootType::E),
            "F" | "f" => Ok(RootType::F),
            "G" | "g" => Ok(RootType::G),
            _ => Err(RootError::InvalidType { kind: None, rank: 0 }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("no simple root system of type {kind:?} and rank {rank}")]
    InvalidType { kind: Option<RootType>, rank: usize },
    #[error("could not classify a root subsystem with Cartan matrix {0:?}")]
    UnrecognizedSubsystem(Vec<Vec<i64>>),
    #[error("expected {expected} marks, got {got}")]
    MarkCount { expected: usize, got: usize },
}

/// A reduced irreducible root system with Bourbaki numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    kind: RootType,
    rank: usize,
    /// `(α_i, α_j)`, normalized so the shortest roots have square length 2.
    inner: Vec<Vec<i64>>,
    /// `A_ij = 2(α_i, α_j)/(α_j, α_j)`.
    cartan: Vec<Vec<i64>>,
    /// Coefficient vectors, sorted by height then lexicographically.
    positive_roots: Vec<Vec<i64>>,
    highest_root: Vec<i64>,
}

fn inner_products(kind: RootType, l: usize) -> Option<Vec<Vec<i64>>> {
    let valid = match kind {
        RootType::A => l >= 1,
        RootType::B | RootType::C => l >= 2,
        RootType::D => l >= 3,
        RootType::E => (6..=8).contains(&l),
        RootType::F => l == 4,
        RootType::G => l == 2,
    };
    if !valid {
        return None;
    }
    let mut b = vec![vec![0i64; l]; l];
    let link = |b: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        b[i][j] = v;
        b[j][i] = v;
    };
    match kind {
        RootType::A => {
            for i in 0..l {
                b[i][i] = 2;
            }
            for i in 0..l.saturating_sub(1) {
                link(&mut b, i, i + 1, -1);
            }
        }
        RootType::B => {
            for i in 0..l {
                b[i][i] = if i + 1 == l { 2 } else { 4 };
            }
            for i in 0..l - 1 {
                link(&mut b, i, i + 1, -2);
            }
        }
        RootType::C => {
            for i in 0..l {
                b[i][i] = if i + 1 == l { 4 } else { 2 };
            }
            for i in 0..l - 1 {
                link(&mut b, i, i + 1, if i + 2 == l { -2 } else { -1 });
            }
        }
        RootType::D => {
            for i in 0..l {
                b[i][i] = 2;
            }
            for i in 0..l - 2 {
                link(&mut b, i, i + 1, -1);
            }
            link(&mut b, l - 3, l - 1, -1);
        }
        RootType::E => {
            for i in 0..l {
                b[i][i] = 2;
            }
            // 1-3-4-5-6(-7-8), with 2 attached to 4.
            link(&mut b, 0, 2, -1);
            link(&mut b, 1, 3, -1);
            for i in 2..l - 1 {
                link(&mut b, i, i + 1, -1);
            }
        }
        RootType::F => {
            b[0][0] = 4;
            b[1][1] = 4;
            b[2][2] = 2;
            b[3][3] = 2;
            link(&mut b, 0, 1, -2);
            link(&mut b, 1, 2, -2);
            link(&mut b, 2, 3, -1);
        }
        RootType::G => {
            b[0][0] = 2;
            b[1][1] = 6;
            link(&mut b, 0, 1, -3);
        }
    }
    Some(b)
}

impl RootSystem {
    /// Builds the root system, enumerating positive roots by closure from
    /// the simple roots under root strings.
    pub fn new(kind: RootType, rank: usize) -> Result<Self, RootError> {
        let inner = inner_products(kind, rank).ok_or(RootError::InvalidType { kind: Some(kind), rank })?;
        let l = rank;
        let cartan: Vec<Vec<i64>> =
            (0..l).map(|i| (0..l).map(|j| 2 * inner[i][j] / inner[j][j]).collect()).collect();

        let mut known: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut layer: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                let mut e = vec![0; l];
                e[i] = 1;
                e
            })
            .collect();
        let mut all = Vec::new();
        while !layer.is_empty() {
            known.extend(layer.iter().cloned());
            all.extend(layer.iter().cloned());
            let mut next: BTreeSet<Vec<i64>> = BTreeSet::new();
            for beta in &layer {
                for i in 0..l {
                    // Length p of the downward α_i-string through β.
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if known.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..l).map(|j| beta[j] * cartan[j][i]).sum();
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        next.insert(up);
                    }
                }
            }
            layer = next.into_iter().collect();
        }
        all.sort_by(|a, b| (a.iter().sum::<i64>(), a).cmp(&(b.iter().sum::<i64>(), b)));
        let highest_root = all.last().cloned().unwrap_or_default();
        Ok(RootSystem { kind, rank, inner, cartan, positive_roots: all, highest_root })
    }

    pub fn kind(&self) -> RootType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn inner_products(&self) -> &[Vec<i64>] {
        &self.inner
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    /// `(β, γ)` for roots given by coefficient vectors.
    pub fn inner(&self, beta: &[i64], gamma: &[i64]) -> i64 {
        let l = self.rank;
        let mut s = 0;
        for i in 0..l {
            if beta[i] == 0 {
                continue;
            }
            for j in 0..l {
                s += beta[i] * gamma[j] * self.inner[i][j];
            }
        }
        s
    }

    /// `dim g^ℂ = l + 2·#Δ⁺`.
    pub fn dimension(&self) -> usize {
        self.rank + 2 * self.positive_roots.len()
    }

    /// Short name such as `E8`.
    pub fn name(&self) -> alloc::string::String {
        alloc::format!("{}{}", self.kind, self.rank)
    }
}

/// `ξ = Σ marks_i ξ_i` in the basis dual to the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalElement {
    pub marks: Vec<u32>,
}

impl CanonicalElement {
    pub fn new(marks: Vec<u32>) -> Self {
        CanonicalElement { marks }
    }

    pub fn zero(rank: usize) -> Self {
        CanonicalElement { marks: vec![0; rank] }
    }

    pub fn all_ones(rank: usize) -> Self {
        CanonicalElement { marks: vec![1; rank] }
    }

    /// All marks in `{0, 1}`.
    pub fn is_canonical(&self) -> bool {
        self.marks.iter().all(|&m| m <= 1)
    }

    pub fn is_zero(&self) -> bool {
        self.marks.iter().all(|&m| m == 0)
    }

    /// For `U_n`: a non-increasing exponent vector `(k_1, …, k_n)` gives
    /// marks `k_j − k_{j+1}` on the `A_{n−1}` simple roots.
    pub fn from_exponents(exponents: &[i32]) -> Option<Self> {
        let marks = exponents
            .windows(2)
            .map(|w| u32::try_from(w[0] - w[1]).ok())
            .collect::<Option<Vec<_>>>()?;
        Some(CanonicalElement { marks })
    }

    /// Inverse of [`CanonicalElement::from_exponents`] with `k_n = 0`.
    pub fn to_exponents(&self) -> Vec<i32> {
        let mut out = vec![0i32; self.marks.len() + 1];
        for j in (0..self.marks.len()).rev() {
            out[j] = out[j + 1] + self.marks[j] as i32;
        }
        out
    }

    /// `α(ξ)` for a root with coefficient vector `alpha`.
    pub fn value(&self, alpha: &[i64]) -> i64 {
        alpha.iter().zip(&self.marks).map(|(&m, &k)| m * k as i64).sum()
    }
}

fn check_marks(rs: &RootSystem, xi: &CanonicalElement) -> Result<(), RootError> {
    if xi.marks.len() != rs.rank {
        Err(RootError::MarkCount { expected: rs.rank, got: xi.marks.len() })
    } else {
        Ok(())
    }
}

/// `r(ξ) = max_{α>0} α(ξ)`; zero for `ξ = 0`.
pub fn height_of(rs: &RootSystem, xi: &CanonicalElement) -> Result<u32, RootError> {
    check_marks(rs, xi)?;
    Ok(xi.value(&rs.highest_root).max(0) as u32)
}

/// Sum of the highest-root coefficients.
pub fn group_max_uniton(rs: &RootSystem) -> u32 {
    rs.highest_root.iter().sum::<i64>() as u32
}

/// `i ↦ dim g_i` for the eigenspace decomposition of `ad ξ`, all `i`
/// with nonzero dimension (negative `i` included).
pub fn grading(rs: &RootSystem, xi: &CanonicalElement) -> Result<BTreeMap<i64, usize>, RootError> {
    check_marks(rs, xi)?;
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    *dims.entry(0).or_default() += rs.rank;
    for alpha in &rs.positive_roots {
        let v = xi.value(alpha);
        *dims.entry(v).or_default() += 1;
        *dims.entry(-v).or_default() += 1;
    }
    Ok(dims)
}

/// `Σ_{α>0, α(ξ)≠0} (α(ξ) − 1)`.
pub fn morse_index(rs: &RootSystem, xi: &CanonicalElement) -> Result<u64, RootError> {
    check_marks(rs, xi)?;
    Ok(rs
        .positive_roots
        .iter()
        .map(|a| xi.value(a))
        .filter(|&v| v != 0)
        .map(|v| (v - 1) as u64)
        .sum())
}

/// `Σ_{0≤i<r} Σ_{j>i} dim g_j`.
pub fn big_cell_fiber_dim(rs: &RootSystem, xi: &CanonicalElement) -> Result<u64, RootError> {
    check_marks(rs, xi)?;
    let r = height_of(rs, xi)? as i64;
    let mut total = 0u64;
    for alpha in &rs.positive_roots {
        let v = xi.value(alpha);
        // g_v contributes once for every i in [0, min(v, r)).
        total += v.clamp(0, r) as u64;
    }
    Ok(total)
}

/// `Σ_{i=1}^{r} dim g_i`.
pub fn free_function_count(rs: &RootSystem, xi: &CanonicalElement) -> Result<u64, RootError> {
    check_marks(rs, xi)?;
    Ok(rs.positive_roots.iter().filter(|a| xi.value(a) > 0).count() as u64)
}

/// Marks clipped to `{0, 1}`.
pub fn canonical_reduce(xi: &CanonicalElement) -> CanonicalElement {
    CanonicalElement { marks: xi.marks.iter().map(|&m| m.min(1)).collect() }
}

/// Marks reduced mod 2.
pub fn odd_canonical_reduce(xi: &CanonicalElement) -> CanonicalElement {
    CanonicalElement { marks: xi.marks.iter().map(|&m| m % 2).collect() }
}
