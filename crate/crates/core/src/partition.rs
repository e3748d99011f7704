//! Set partitions of `{1, ..., r}` and the signed Hoffman expansion of the
//! symmetric sum into products of single zeta factors:
//!
//! ```text
//! Z(s) = sum_{partitions P_1..P_l} (-1)^{r-l} prod_j (|P_j| - 1)! * prod_j zeta(c_j s),
//! c_j = sum_{i in P_j} a_i
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank handled (Bell(10) = 115975 partitions).
pub const MAX_RANK: usize = 10;

/// Block sums closer than this are treated as equal when merging terms.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Weight vector `a_1 >= ... >= a_r > 0` together with the constants
/// `A = sum a_j`, `B` (number of weight-preserving permutations) and
/// `M = 1 / (1^{a_1} 2^{a_2} ... r^{a_r})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    values: Vec<f64>,
    total: f64,
    b: u64,
    m: f64,
}

impl Weights {
    /// Validates and sorts the weights into non-increasing order. Use
    /// [`Weights::was_sorted`] beforehand to detect reordering.
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidWeights(format!(
                "need at least two weights, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and positive, got {bad}"
            )));
        }
        let mut values = values.to_vec();
        values.sort_by(|a, b| b.total_cmp(a));
        let total = values.iter().sum();
        let b = b_constant_of(&values);
        let m = m_constant_of(&values);
        Ok(Weights { values, total, b, m })
    }

    /// Whether `values` is already in non-increasing order.
    pub fn was_sorted(values: &[f64]) -> bool {
        values.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// `A = a_1 + ... + a_r`.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Smallest weight `a_r`.
    pub fn smallest(&self) -> f64 {
        *self.values.last().expect("at least two weights")
    }
}

/// `B`: product of factorials of the multiplicities of equal weights.
pub fn b_constant(w: &Weights) -> u64 {
    w.b
}

/// `M = 1 / (1^{a_1} ... r^{a_r})`, computed in log space.
pub fn m_constant(w: &Weights) -> f64 {
    w.m
}

fn b_constant_of(sorted: &[f64]) -> u64 {
    let mut b = 1u64;
    let mut run = 1u64;
    for pair in sorted.windows(2) {
        if (pair[0] - pair[1]).abs() <= MERGE_TOLERANCE * pair[0].max(1.0) {
            run += 1;
            b *= run;
        } else {
            run = 1;
        }
    }
    b
}

fn m_constant_of(sorted: &[f64]) -> f64 {
    let log_inv: f64 = sorted.iter().enumerate().map(|(j, a)| a * ((j + 1) as f64).ln()).sum();
    (-log_inv).exp()
}

/// A partition of `{1, ..., r}` into blocks, each block sorted and blocks
/// ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// All set partitions of `{1, ..., r}` in canonical form, generated from
/// restricted growth strings.
pub fn enumerate_partitions(r: usize) -> Result<Vec<SetPartition>> {
    if r > MAX_RANK {
        return Err(Error::RankTooLarge { r, max: MAX_RANK });
    }
    if r < 2 {
        return Err(Error::InvalidWeights(format!("rank must be at least 2, got {r}")));
    }
    let mut out = Vec::new();
    // rgs[i] = block of element i+1; rgs[i] <= 1 + max(rgs[..i])
    let mut rgs = vec![0usize; r];
    let mut max_prefix = vec![0usize; r];
    loop {
        let blocks_n = max_prefix[r - 1] + 1;
        let mut blocks = vec![Vec::new(); blocks_n];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        out.push(SetPartition { blocks });

        // next restricted growth string
        let mut i = r - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            if rgs[i] <= max_prefix[i - 1] {
                rgs[i] += 1;
                max_prefix[i] = max_prefix[i - 1].max(rgs[i]);
                for j in i + 1..r {
                    rgs[j] = 0;
                    max_prefix[j] = max_prefix[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// One signed product `coefficient * prod_k zeta(c_k s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoffmanTerm {
    pub coefficient: i64,
    /// Non-increasing block sums `c_k`.
    pub block_sums: Vec<f64>,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Coefficient `(-1)^{r-l} prod (|P_k| - 1)!` of a partition.
pub fn partition_coefficient(p: &SetPartition, r: usize) -> i64 {
    let sign = if (r - p.len()).is_multiple_of(2) { 1 } else { -1 };
    sign * p.blocks.iter().map(|b| factorial(b.len() - 1)).product::<i64>()
}

/// The Hoffman expansion with terms of equal block-sum multisets merged.
///
/// Terms are ordered by number of factors (descending), then by block sums
/// (lexicographically descending).
pub fn hoffman_expand(w: &Weights) -> Result<Vec<HoffmanTerm>> {
    let r = w.rank();
    let parts = enumerate_partitions(r)?;
    let mut terms: Vec<HoffmanTerm> = Vec::new();
    for p in &parts {
        let coefficient = partition_coefficient(p, r);
        let mut block_sums: Vec<f64> = p
            .blocks
            .iter()
            .map(|b| b.iter().map(|&j| w.values[j - 1]).sum())
            .collect();
        block_sums.sort_by(|a, b| b.total_cmp(a));
        match terms.iter_mut().find(|t| same_sums(&t.block_sums, &block_sums)) {
            Some(t) => t.coefficient += coefficient,
            None => terms.push(HoffmanTerm {
                coefficient,
                block_sums,
            }),
        }
    }
    terms.retain(|t| t.coefficient != 0);
    terms.sort_by(|x, y| {
        y.block_sums.len().cmp(&x.block_sums.len()).then_with(|| {
            for (a, b) in x.block_sums.iter().zip(&y.block_sums) {
                match b.total_cmp(a) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    Ok(terms)
}

fn same_sums(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= MERGE_TOLERANCE * x.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Bell numbers by B_{n+1} = sum_k C(n, k) B_k.
    fn bell(n: usize) -> usize {
        let mut b = vec![1usize];
        for m in 0..n {
            let mut next = 0;
            let mut binom = 1usize;
            for (k, bk) in b.iter().enumerate() {
                next += binom * bk;
                binom = binom * (m - k) / (k + 1);
            }
            b.push(next);
        }
        b[n]
    }

    #[test]
    fn bell_counts() {
        assert_eq!(bell(5), 52);
        assert_eq!(bell(10), 115_975);
        for r in 2..=8 {
            let parts = enumerate_partitions(r).unwrap();
            assert_eq!(parts.len(), bell(r), "r = {r}");
            let uniq: std::collections::HashSet<_> = parts.iter().cloned().collect();
            assert_eq!(uniq.len(), parts.len());
        }
    }

    #[test]
    fn small_rank_listing() {
        let p = enumerate_partitions(2).unwrap();
        assert_eq!(p[0].blocks, vec![vec![1, 2]]);
        assert_eq!(p[1].blocks, vec![vec![1], vec![2]]);
        assert_eq!(enumerate_partitions(3).unwrap().len(), 5);
    }

    #[test]
    fn rank_limits() {
        assert!(matches!(
            enumerate_partitions(11),
            Err(Error::RankTooLarge { r: 11, .. })
        ));
        assert_eq!(enumerate_partitions(10).unwrap().len(), 115_975);
        assert!(enumerate_partitions(1).is_err());
    }

    #[test]
    fn partitions_are_canonical() {
        for p in enumerate_partitions(6).unwrap() {
            let mut all: Vec<usize> = p.blocks.iter().flatten().copied().collect();
            all.sort();
            assert_eq!(all, (1..=6).collect::<Vec<_>>());
            for b in &p.blocks {
                assert!(!b.is_empty());
                assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
            assert!(p.blocks.windows(2).all(|w| w[0][0] < w[1][0]));
        }
    }

    #[test]
    fn expansion_one_one() {
        let t = hoffman_expand(&Weights::new(&[1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(
            t,
            vec![
                HoffmanTerm {
                    coefficient: 1,
                    block_sums: vec![1.0, 1.0]
                },
                HoffmanTerm {
                    coefficient: -1,
                    block_sums: vec![2.0]
                },
            ]
        );
    }

    #[test]
    fn expansion_one_one_one() {
        let t = hoffman_expand(&Weights::new(&[1.0, 1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(
            t,
            vec![
                HoffmanTerm {
                    coefficient: 1,
                    block_sums: vec![1.0, 1.0, 1.0]
                },
                HoffmanTerm {
                    coefficient: -3,
                    block_sums: vec![2.0, 1.0]
                },
                HoffmanTerm {
                    coefficient: 2,
                    block_sums: vec![3.0]
                },
            ]
        );
    }

    #[test]
    fn expansion_two_one() {
        let t = hoffman_expand(&Weights::new(&[1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(
            t,
            vec![
                HoffmanTerm {
                    coefficient: 1,
                    block_sums: vec![2.0, 1.0]
                },
                HoffmanTerm {
                    coefficient: -1,
                    block_sums: vec![3.0]
                },
            ]
        );
    }

    #[test]
    fn constants() {
        let w = |v: &[f64]| Weights::new(v).unwrap();
        assert_eq!(b_constant(&w(&[1.0, 1.0])), 2);
        assert_eq!(b_constant(&w(&[2.0, 1.0])), 1);
        assert_eq!(b_constant(&w(&[3.0, 1.0, 1.0, 1.0])), 6);
        assert!((m_constant(&w(&[1.0, 1.0])) - 0.5).abs() < 1e-15);
        assert!((m_constant(&w(&[2.0, 1.0])) - 0.5).abs() < 1e-15);
        assert!((m_constant(&w(&[1.0, 1.0, 1.0])) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(w(&[1.0, 2.0]).values(), &[2.0, 1.0]);
        assert!(!Weights::was_sorted(&[1.0, 2.0]));
    }

    #[test]
    fn invalid_weights() {
        assert!(Weights::new(&[1.0]).is_err());
        assert!(Weights::new(&[1.0, 0.0]).is_err());
        assert!(Weights::new(&[1.0, f64::NAN]).is_err());
        assert!(Weights::new(&[1.0, -2.0]).is_err());
    }

    proptest! {
        #[test]
        fn expansion_invariants(raw in prop::collection::vec(0.1f64..4.0, 2..=6)) {
            let w = Weights::new(&raw).unwrap();
            let r = w.rank();
            let terms = hoffman_expand(&w).unwrap();
            for t in &terms {
                let total: f64 = t.block_sums.iter().sum();
                prop_assert!((total - w.total()).abs() <= 1e-12 * w.total());
                for c in &t.block_sums {
                    prop_assert!(*c >= w.smallest() - 1e-12);
                }
            }
            // Unmerged coefficients satisfy sum over partitions with l blocks of
            // |coef| = Stirling numbers of the first kind, whose total is r!.
            let abs_total: i64 = terms.iter().map(|t| t.coefficient.abs()).sum();
            prop_assert_eq!(abs_total, factorial(r));
            // B ranges over [1, r!]
            prop_assert!(w.b() >= 1 && w.b() as i64 <= factorial(r));
            prop_assert!(w.m() > 0.0 && w.m() <= 1.0);
        }

        #[test]
        fn b_extremes(a in 0.1f64..5.0, r in 2usize..=7) {
            let equal = Weights::new(&vec![a; r]).unwrap();
            prop_assert_eq!(equal.b() as i64, factorial(r));
            let distinct: Vec<f64> = (0..r).map(|k| a + k as f64).collect();
            prop_assert_eq!(Weights::new(&distinct).unwrap().b(), 1);
        }
    }
}
