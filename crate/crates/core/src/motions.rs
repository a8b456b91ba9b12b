//! Trivial infinitesimal flexes and fullness of placements.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{columns_to_matrix, numerical_rank};
use crate::space::Space;
use crate::tolerance::ToleranceConfig;

/// The trivial flexes of a placement, one stacked vector per motion generator.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivialMotionBasis {
    /// Each vector has length `|V| * dim X`, vertex blocks in order.
    pub vectors: Vec<Vec<f64>>,
    /// Rank of `vectors`.
    pub dim: usize,
    /// `l(X)`; the placement is full iff `dim == motion_dim`.
    pub motion_dim: usize,
}

pub fn trivial_flex_basis(
    space: &Space,
    placement: &[Vec<f64>],
    tol: &ToleranceConfig,
) -> Result<TrivialMotionBasis> {
    if placement.is_empty() {
        return Err(Error::EmptyPlacement);
    }
    let motion_dim = space.motion_dim()?;
    let per_vertex = placement
        .iter()
        .map(|p| space.motion_generators_at(p))
        .collect::<Result<Vec<_>>>()?;
    let vectors: Vec<Vec<f64>> = (0..motion_dim)
        .map(|g| {
            per_vertex
                .iter()
                .flat_map(|gens| gens[g].iter().copied())
                .collect()
        })
        .collect();
    let rows = placement.len() * space.dim();
    let dim = numerical_rank(&columns_to_matrix(rows, &vectors), tol.rank_rel_tol).rank;
    Ok(TrivialMotionBasis {
        vectors,
        dim,
        motion_dim,
    })
}

/// The restriction of the infinitesimal rigid motions to the placement is injective.
pub fn is_full(space: &Space, placement: &[Vec<f64>], tol: &ToleranceConfig) -> Result<bool> {
    let b = trivial_flex_basis(space, placement, tol)?;
    Ok(b.dim == b.motion_dim)
}

/// Result of a complete-fullness test.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteFullness {
    pub completely_full: bool,
    /// False when subsets were sampled rather than enumerated.
    pub exhaustive: bool,
    pub subsets_checked: usize,
    /// First subset found not to be full.
    pub failing_subset: Option<Vec<usize>>,
}

/// Subset-enumeration budget before switching to sampling.
pub const EXHAUSTIVE_SUBSET_CAP: u128 = 1_000_000;
pub const SAMPLED_SUBSETS: usize = 10_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The whole placement and every subset of at least `2 dim X` points is full.
///
/// Fullness is monotone in the point set, so only subsets of size exactly
/// `2 dim X` are tested. Beyond [`EXHAUSTIVE_SUBSET_CAP`] subsets,
/// [`SAMPLED_SUBSETS`] seeded random subsets are checked instead.
pub fn is_completely_full(
    space: &Space,
    placement: &[Vec<f64>],
    tol: &ToleranceConfig,
    seed: u64,
) -> Result<CompleteFullness> {
    let n = placement.len();
    let size = 2 * space.dim();
    let check = |subset: &[usize]| -> Result<bool> {
        let pts: Vec<Vec<f64>> = subset.iter().map(|&i| placement[i].clone()).collect();
        is_full(space, &pts, tol)
    };
    if !is_full(space, placement, tol)? {
        return Ok(CompleteFullness {
            completely_full: false,
            exhaustive: true,
            subsets_checked: 1,
            failing_subset: Some((0..n).collect()),
        });
    }
    if n <= size {
        return Ok(CompleteFullness {
            completely_full: true,
            exhaustive: true,
            subsets_checked: 1,
            failing_subset: None,
        });
    }
    let mut checked = 1;
    if binomial(n, size) <= EXHAUSTIVE_SUBSET_CAP {
        let mut c: Vec<usize> = (0..size).collect();
        loop {
            checked += 1;
            if !check(&c)? {
                return Ok(CompleteFullness {
                    completely_full: false,
                    exhaustive: true,
                    subsets_checked: checked,
                    failing_subset: Some(c),
                });
            }
            if !next_combination(&mut c, n) {
                break;
            }
        }
        Ok(CompleteFullness {
            completely_full: true,
            exhaustive: true,
            subsets_checked: checked,
            failing_subset: None,
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_SUBSETS {
            let mut c = sample(&mut rng, n, size).into_vec();
            c.sort_unstable();
            checked += 1;
            if !check(&c)? {
                return Ok(CompleteFullness {
                    completely_full: false,
                    exhaustive: false,
                    subsets_checked: checked,
                    failing_subset: Some(c),
                });
            }
        }
        Ok(CompleteFullness {
            completely_full: true,
            exhaustive: false,
            subsets_checked: checked,
            failing_subset: None,
        })
    }
}
