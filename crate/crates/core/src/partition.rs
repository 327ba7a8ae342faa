//! Partitions, multiplicity vectors and the closed-form scalar formulas that
//! depend only on multiplicities.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::ParseError;

/// A weakly increasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self, ParseError> {
        if parts.is_empty() {
            return Err(ParseError::Empty);
        }
        for (i, &p) in parts.iter().enumerate() {
            if p == 0 {
                return Err(ParseError::NonPositive { token: p.to_string() });
            }
            if i > 0 && parts[i - 1] > p {
                return Err(ParseError::Decreasing { token: p.to_string(), previous: parts[i - 1] });
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Run-length encoding of equal parts; the values themselves are discarded.
    pub fn normalize(&self) -> MultiplicityVector {
        let mut mults = Vec::new();
        let mut prev = None;
        for &p in &self.parts {
            if prev == Some(p) {
                *mults.last_mut().unwrap() += 1;
            } else {
                mults.push(1);
                prev = Some(p);
            }
        }
        MultiplicityVector { mults }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", strs.join(","))
    }
}

/// Parses `part ("," part)*` where `part = int | int "^" int`.
pub fn parse_partition(text: &str) -> Result<Partition, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parts = Vec::new();
    for raw in text.split(',') {
        let token = raw.trim();
        let (value, count) = match token.split_once('^') {
            Some((v, c)) => (parse_positive(v.trim(), token)?, parse_positive(c.trim(), token)?),
            None => (parse_positive(token, token)?, 1),
        };
        if let Some(&last) = parts.last() {
            if last > value {
                return Err(ParseError::Decreasing { token: token.to_string(), previous: last });
            }
        }
        parts.extend(std::iter::repeat_n(value, count as usize));
    }
    Partition::new(parts)
}

fn parse_positive(s: &str, token: &str) -> Result<u64, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::Malformed { token: token.to_string() });
    }
    let v: u64 = s.parse().map_err(|_| ParseError::Malformed { token: token.to_string() })?;
    if v == 0 {
        return Err(ParseError::NonPositive { token: token.to_string() });
    }
    Ok(v)
}

impl FromStr for Partition {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_partition(s)
    }
}

/// The run lengths `(a_1, ..., a_m)` of a partition's distinct values.
///
/// Everything combinatorial about the polytope depends on this vector only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiplicityVector {
    mults: Vec<usize>,
}

impl MultiplicityVector {
    pub fn new(mults: Vec<usize>) -> Result<Self, ParseError> {
        if mults.is_empty() {
            return Err(ParseError::Empty);
        }
        if let Some(&z) = mults.iter().find(|&&a| a == 0) {
            return Err(ParseError::NonPositive { token: z.to_string() });
        }
        Ok(Self { mults })
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    /// `a_i` with 1-based `i`.
    pub fn a(&self, i: usize) -> usize {
        self.mults[i - 1]
    }

    /// Number of distinct values.
    pub fn m(&self) -> usize {
        self.mults.len()
    }

    /// Length of the partition.
    pub fn n(&self) -> usize {
        self.mults.iter().sum()
    }

    /// Prefix sum `s_j = a_1 + ... + a_j`, with `s_0 = 0`.
    pub fn s(&self, j: usize) -> usize {
        self.mults[..j].iter().sum()
    }

    pub fn prefix_sums(&self) -> Vec<usize> {
        (0..=self.m()).map(|j| self.s(j)).collect()
    }

    /// The representative partition `(1^{a_1}, ..., m^{a_m})`.
    pub fn canonical_partition(&self) -> Partition {
        let parts = self
            .mults
            .iter()
            .enumerate()
            .flat_map(|(k, &a)| std::iter::repeat_n(k as u64 + 1, a))
            .collect();
        Partition { parts }
    }

    pub fn reverse(&self) -> Self {
        let mut mults = self.mults.clone();
        mults.reverse();
        Self { mults }
    }

    pub fn is_reverse_symmetric(&self) -> bool {
        self.mults.iter().eq(self.mults.iter().rev())
    }

    /// `C(n,2) - sum C(a_i,2)`.
    pub fn dimension(&self) -> usize {
        let n = self.n();
        n * (n.saturating_sub(1)) / 2 - self.mults.iter().map(|&a| a * (a - 1) / 2).sum::<usize>()
    }

    /// `2m - 2 - [a_1 = 1] - [a_m = 1]` for `m >= 2`, and 0 for a point.
    ///
    /// For `mv = (1,1)` this gives 0 although the polytope is a segment; see
    /// [`KNOWN_DIAMETER_EXCEPTIONS`].
    pub fn diameter_formula(&self) -> usize {
        let m = self.m();
        if m < 2 {
            return 0;
        }
        let d1 = usize::from(self.mults[0] == 1);
        let dm = usize::from(self.mults[m - 1] == 1);
        2 * m - 2 - d1 - dm
    }

    /// Closed-form order of the combinatorial automorphism group.
    pub fn aut_order_formula(&self) -> BigUint {
        let m = self.m();
        let a = &self.mults;
        match m {
            1 => BigUint::from(1u32),
            2 if a[0] == 1 || a[1] == 1 => factorial(self.dimension() + 1),
            2 if a[0] == 2 && a[1] == 2 => BigUint::from(16u32),
            2 => BigUint::from(16u32) << usize::from(a[0] == a[1]),
            _ => {
                let mut order = BigUint::from(1u32);
                if a[0] == 1 {
                    order *= factorial(a[1]);
                }
                if a[m - 1] == 1 {
                    order *= factorial(a[m - 2]);
                }
                let r1 = self.corner_indices().len();
                let r2 = usize::from(self.is_reverse_symmetric());
                order << (r1 + 1 + r2)
            }
        }
    }

    /// The `k` (1-based, `1 <= k <= m-1`) with `a_k >= 2` and `a_{k+1} >= 2`.
    pub fn corner_indices(&self) -> Vec<usize> {
        (1..self.m()).filter(|&k| self.a(k) >= 2 && self.a(k + 1) >= 2).collect()
    }

    /// Compact `1^a,2^b,...`-style label, e.g. `(2,1,2)`.
    pub fn label(&self) -> String {
        let strs: Vec<String> = self.mults.iter().map(|a| a.to_string()).collect();
        format!("({})", strs.join(","))
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Multiplicity vectors whose closed-form diameter disagrees with the
/// skeleton: `(1,1)` is a segment, so its BFS diameter is 1 while the
/// formula yields 0.
pub const KNOWN_DIAMETER_EXCEPTIONS: &[&[usize]] = &[&[1, 1]];

pub fn is_known_diameter_exception(mv: &MultiplicityVector) -> bool {
    KNOWN_DIAMETER_EXCEPTIONS.iter().any(|e| *e == mv.mults())
}

/// All compositions of `n` (multiplicity vectors with `sum a_i = n`), in
/// lexicographic order.
pub fn compositions(n: usize) -> Vec<MultiplicityVector> {
    fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiplicityVector>) {
        if rest == 0 {
            out.push(MultiplicityVector { mults: cur.clone() });
            return;
        }
        for a in 1..=rest {
            cur.push(a);
            rec(rest - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}

/// All multiplicity vectors with `1 <= n <= max_n`, ordered by `n` then lexicographically.
pub fn all_up_to(max_n: usize) -> Vec<MultiplicityVector> {
    (1..=max_n).flat_map(compositions).collect()
}

pub(crate) fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}
