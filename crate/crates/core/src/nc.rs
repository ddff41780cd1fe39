//! Brute-force non-crossing partition oracle.
//!
//! Moments and free cumulants are related by
//! `m_n = sum_{π ∈ NC(n)} prod_{V ∈ π} k_{|V|}`. This module evaluates that
//! sum by explicit enumeration, independently of the series machinery in
//! [`crate::transform`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::measure::{mu_lambda_moments, moments_of, MeasureSpec};
use crate::moments::MomentSequence;
use crate::scalar::Scalar;
use crate::transform::{rect_c_transform, RatioParam};

/// Largest `n` accepted by the enumeration (`|NC(12)| = 208012`).
pub const MAX_NC: usize = 12;

/// A non-crossing partition of `{1, ..., n}`; blocks are sorted and listed by
/// smallest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NcPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Sorted block sizes.
    pub fn block_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    /// Direct check: blocks cover `1..=n` and no `a < b < c < d` has `a, c`
    /// in one block and `b, d` in another.
    pub fn is_non_crossing(&self) -> bool {
        let mut owner = vec![usize::MAX; self.n + 1];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                if x == 0 || x > self.n || owner[x] != usize::MAX {
                    return false;
                }
                owner[x] = i;
            }
        }
        if owner[1..].contains(&usize::MAX) {
            return false;
        }
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                for c in b + 1..=self.n {
                    for d in c + 1..=self.n {
                        if owner[a] == owner[c] && owner[b] == owner[d] && owner[a] != owner[b] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_NC {
        return Err(Error::TooLarge { n, max: MAX_NC });
    }
    Ok(())
}

/// All non-crossing partitions of `{1, ..., n}`.
///
/// The block containing the first element, `{b_1 < ... < b_k}`, splits the
/// rest into the gaps between consecutive `b_i` and the tail after `b_k`;
/// each is partitioned independently.
pub fn enumerate_nc(n: usize) -> Result<Vec<NcPartition>> {
    check_size(n)?;
    if n == 0 {
        return Ok(vec![NcPartition { n: 0, blocks: vec![] }]);
    }
    Ok(partitions_of(1, n)
        .into_iter()
        .map(|mut blocks| {
            blocks.sort_by_key(|b| b[0]);
            NcPartition { n, blocks }
        })
        .collect())
}

/// Non-crossing partitions of the interval `lo..=hi` (empty when `lo > hi`).
fn partitions_of(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo > hi {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    // choose the rest of the first block as a subset of lo+1..=hi
    let rest: Vec<usize> = (lo + 1..=hi).collect();
    for mask in 0u32..(1 << rest.len()) {
        let mut block = vec![lo];
        block.extend(
            rest.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &x)| x),
        );
        let mut gaps: Vec<(usize, usize)> = block.windows(2).map(|w| (w[0] + 1, w[1] - 1)).collect();
        gaps.push((block[block.len() - 1] + 1, hi));
        let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for (a, b) in gaps {
            let parts = partitions_of(a, b);
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    parts.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.extend(p.iter().cloned());
                        v
                    })
                })
                .collect();
        }
        out.extend(acc);
    }
    out
}

type BlockTypeCounts = BTreeMap<Vec<usize>, u64>;

/// `NC(n)` tallied by block type; each `n` is enumerated once per process.
fn block_type_counts(n: usize) -> Result<&'static BlockTypeCounts> {
    static CACHE: [OnceLock<BlockTypeCounts>; MAX_NC + 1] = [const { OnceLock::new() }; MAX_NC + 1];
    check_size(n)?;
    Ok(CACHE[n].get_or_init(|| {
        let mut counts = BTreeMap::new();
        for p in enumerate_nc(n).expect("size checked") {
            *counts.entry(p.block_type()).or_insert(0) += 1;
        }
        counts
    }))
}

/// `m_n = sum_{π ∈ NC(n)} prod_{V ∈ π} k_{|V|}` for `n = 1..=k.len()`.
pub fn moments_from_cumulants_nc<S: Scalar>(k: &[S]) -> Result<MomentSequence<S>> {
    check_size(k.len())?;
    let moments = (1..=k.len())
        .map(|n| {
            let counts = block_type_counts(n)?;
            Ok(counts.iter().fold(S::zero(), |acc, (ty, &count)| {
                acc + S::from_i64(count as i64) * product(k, ty)
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentSequence::new(moments))
}

/// Inverts [`moments_from_cumulants_nc`] by forward substitution: the only
/// partition of `NC(n)` involving `k_n` is the one-block partition.
pub fn cumulants_from_moments_nc<S: Scalar>(m: &MomentSequence<S>) -> Result<Vec<S>> {
    check_size(m.order())?;
    let mut k: Vec<S> = Vec::with_capacity(m.order());
    for n in 1..=m.order() {
        let counts = block_type_counts(n)?;
        let rest = counts
            .iter()
            .filter(|(ty, _)| ty.len() > 1)
            .fold(S::zero(), |acc, (ty, &count)| {
                acc + S::from_i64(count as i64) * product(&k, ty)
            });
        k.push(m.get(n) - rest);
    }
    Ok(k)
}

fn product<S: Scalar>(k: &[S], block_sizes: &[usize]) -> S {
    block_sizes
        .iter()
        .fold(S::one(), |acc, &s| acc * k[s - 1].clone())
}

/// Outcome of [`verify_cumulant_identity`].
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantIdentityReport<S> {
    /// Free cumulants of `μ` from the partition sum.
    pub free_cumulants: Vec<S>,
    /// Rectangular cumulants `c_2, c_4, ...` of `√(μ ⊠ μ_λ)` from the series route.
    pub rectangular_cumulants: Vec<S>,
    pub series_route_matches: bool,
    /// Extra combinatorial chain, only run at `λ = 1`.
    pub square_chain: Option<SquareChainReport>,
}

/// The `λ = 1` chain: `m_n(μ) = k_n(μ ⊠ μ_1)`, then the even cumulants
/// solving `k_n(μ ⊠ μ_1) = sum_{NC(n)} prod e_{2|V|}` equal `k_n(μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareChainReport {
    pub moments_equal_product_cumulants: bool,
    pub even_cumulants_match: bool,
    /// Free cumulants of the symmetric law computed directly from its moments
    /// up to order `2N`; `None` when `2N` exceeds the enumeration cap.
    pub symmetric_law_cumulants_match: Option<bool>,
}

impl<S> CumulantIdentityReport<S> {
    pub fn holds(&self) -> bool {
        self.series_route_matches
            && self.square_chain.is_none_or(|c| {
                c.moments_equal_product_cumulants
                    && c.even_cumulants_match
                    && c.symmetric_law_cumulants_match.unwrap_or(true)
            })
    }
}

/// Checks `k_n(μ) = c_{2n}(√(μ ⊠ μ_λ))` for `n <= N` with the free cumulants
/// taken from the partition sum and the rectangular ones from the series
/// route. At `λ = 1` it also runs the purely combinatorial chain.
pub fn verify_cumulant_identity<S: Scalar>(
    mu: &MeasureSpec,
    lambda: &RatioParam,
    order: usize,
    tol: f64,
) -> Result<CumulantIdentityReport<S>> {
    check_size(order)?;
    let m: MomentSequence<S> = moments_of(mu, order)?;
    let k = cumulants_from_moments_nc(&m)?;
    let product = crate::convolution::boxtimes(&m, &mu_lambda_moments(&lambda.value::<S>(), order)?)?;
    let c = rect_c_transform(&product, lambda)?;
    let rectangular: Vec<S> = c.coeffs()[1..].to_vec();
    let series_route_matches = seq_eq(&k, &rectangular, tol);

    let square_chain = if lambda.rational() == &<crate::scalar::Rational as Scalar>::one() {
        let product_cumulants = cumulants_from_moments_nc(&product)?;
        let moments_equal_product_cumulants = seq_eq(m.as_slice(), &product_cumulants, tol);
        let even = cumulants_from_moments_nc(&MomentSequence::new(product_cumulants))?;
        let even_cumulants_match = seq_eq(&even, &k, tol);
        let symmetric_law_cumulants_match = if 2 * order <= MAX_NC {
            let sym = MomentSequence::new(
                (1..=2 * order)
                    .map(|n| if n % 2 == 0 { product.get(n / 2) } else { S::zero() })
                    .collect(),
            );
            let ks = cumulants_from_moments_nc(&sym)?;
            let odd_vanish = ks.iter().step_by(2).all(|x| x.is_negligible(tol));
            let evens: Vec<S> = ks.iter().skip(1).step_by(2).cloned().collect();
            Some(odd_vanish && seq_eq(&evens, &k, tol))
        } else {
            None
        };
        Some(SquareChainReport {
            moments_equal_product_cumulants,
            even_cumulants_match,
            symmetric_law_cumulants_match,
        })
    } else {
        None
    };

    Ok(CumulantIdentityReport {
        free_cumulants: k,
        rectangular_cumulants: rectangular,
        series_route_matches,
        square_chain,
    })
}

fn seq_eq<S: Scalar>(a: &[S], b: &[S], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio as q, Rational, DEFAULT_TOLERANCE};

    const CATALAN: [usize; 13] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012];

    #[test]
    fn counts_are_catalan() {
        for n in 0..=9 {
            let parts = enumerate_nc(n).unwrap();
            assert_eq!(parts.len(), CATALAN[n], "n = {n}");
            assert!(parts.iter().all(NcPartition::is_non_crossing));
        }
        assert!(matches!(enumerate_nc(13), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn crossing_partition_detected() {
        let p = NcPartition {
            n: 4,
            blocks: vec![vec![1, 3], vec![2, 4]],
        };
        assert!(!p.is_non_crossing());
    }

    #[test]
    fn moments_from_constant_cumulants() {
        let m = moments_from_cumulants_nc(&vec![q(1, 1); 4]).unwrap();
        assert_eq!(m.into_vec(), [1, 2, 5, 14].map(|x| q(x, 1)));

        let a = q(3, 2);
        let m = moments_from_cumulants_nc(&[a.clone(), q(0, 1), q(0, 1), q(0, 1)]).unwrap();
        assert_eq!(m, MomentSequence::dirac(&a, 4));

        let t = q(13, 10);
        let m = moments_from_cumulants_nc(&vec![t.clone(); 3]).unwrap();
        let t2 = &t * &t;
        assert_eq!(
            m.into_vec(),
            vec![t.clone(), &t + &t2, &t + &t2 * q(3, 1) + &t2 * &t]
        );
    }

    #[test]
    fn cumulants_examples() {
        let catalan = MomentSequence::new([1, 2, 5, 14].map(|x| q(x, 1)).to_vec());
        assert_eq!(cumulants_from_moments_nc(&catalan).unwrap(), vec![q(1, 1); 4]);

        let bern = MomentSequence::new(vec![q(1, 2); 4]);
        assert_eq!(
            cumulants_from_moments_nc(&bern).unwrap(),
            vec![q(1, 2), q(1, 4), q(0, 1), q(-1, 16)]
        );

        let a = q(-2, 1);
        let k = cumulants_from_moments_nc(&MomentSequence::dirac(&a, 5)).unwrap();
        assert_eq!(k, vec![a, q(0, 1), q(0, 1), q(0, 1), q(0, 1)]);
    }

    fn holds(mu: &str, lambda: &str, order: usize) -> CumulantIdentityReport<Rational> {
        verify_cumulant_identity(
            &MeasureSpec::parse(mu).unwrap(),
            &RatioParam::parse(lambda).unwrap(),
            order,
            DEFAULT_TOLERANCE,
        )
        .unwrap()
    }

    #[test]
    fn cumulant_identity_examples() {
        let r = holds("atomic:1=1", "1", 6);
        assert!(r.holds());
        let chain = r.square_chain.unwrap();
        assert!(chain.moments_equal_product_cumulants);
        assert_eq!(chain.symmetric_law_cumulants_match, Some(true));

        assert!(holds("mp:2", "1/2", 6).holds());
        let r = holds("atomic:1=1/2,4=1/2", "0", 6);
        assert!(r.holds());
        assert!(r.square_chain.is_none());
    }
}
