//! 0-1 knapsack, multiple knapsack, and multi-dimensional knapsack solvers.
//!
//! Each problem has a fast greedy mode and an exact mode. Exact MKP and
//! MDKP use depth-first branch and bound and refuse inputs with more than
//! [`EXACT_ITEM_LIMIT`] items instead of running for an unbounded time. The
//! 0-1 knapsack is always solved exactly by dynamic programming.

mod kp;
mod mdkp;
mod mkp;

use std::cmp::Ordering;

use thiserror::Error;

pub use kp::{solve_kp_dp, KpSolution};
pub use mdkp::{solve_mdkp, MdkpInstance, MdkpItem, MdkpSolution};
pub use mkp::{solve_mkp, MkpInstance, MkpSolution};

/// Largest item count accepted by exact MKP (with two or more knapsacks) and
/// exact MDKP.
pub const EXACT_ITEM_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolveMode {
    #[default]
    Greedy,
    Exact,
}

impl std::str::FromStr for SolveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(SolveMode::Greedy),
            "exact" => Ok(SolveMode::Exact),
            other => Err(format!("unknown solve mode `{other}` (greedy|exact)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnapsackError {
    #[error("exact mode handles at most {limit} items, got {items}")]
    TooLarge { items: usize, limit: usize },
    #[error("item {item} has {found} size components, capacity vector has {expected}")]
    DimensionMismatch { item: usize, expected: usize, found: usize },
}

/// An item with a scalar size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KpItem {
    pub id: usize,
    pub size: u64,
    pub profit: u64,
}

/// Profit/size descending; zero-size items first; ties by smaller size,
/// then lower id.
pub(crate) fn by_density(a: &KpItem, b: &KpItem) -> Ordering {
    let dens = match (a.size, b.size) {
        (0, 0) => Ordering::Equal,
        (0, _) => Ordering::Less,
        (_, 0) => Ordering::Greater,
        (sa, sb) => {
            let lhs = b.profit as u128 * sa as u128;
            let rhs = a.profit as u128 * sb as u128;
            lhs.cmp(&rhs)
        }
    };
    dens.then(a.size.cmp(&b.size)).then(a.id.cmp(&b.id))
}

/// Fractional-greedy upper bound for items already sorted by density.
pub(crate) fn fractional_bound(items: impl Iterator<Item = KpItem>, capacity: u64) -> u64 {
    let mut left = capacity;
    let mut bound = 0u64;
    for it in items {
        if it.size <= left {
            left -= it.size;
            bound += it.profit;
        } else {
            // ceil so the bound never undercuts the true optimum
            let part = (it.profit as u128 * left as u128).div_ceil(it.size as u128);
            bound += part as u64;
            break;
        }
    }
    bound
}
