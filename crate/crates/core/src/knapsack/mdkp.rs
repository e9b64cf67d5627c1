use std::cmp::Ordering;

use super::{KnapsackError, SolveMode, EXACT_ITEM_LIMIT};

/// An item with one size component per capacity dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdkpItem {
    pub id: usize,
    pub profit: u64,
    pub sizes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MdkpInstance {
    pub capacities: Vec<u64>,
    pub items: Vec<MdkpItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MdkpSolution {
    /// Indices into the item list, ascending.
    pub selected: Vec<usize>,
    pub profit: u64,
}

pub fn solve_mdkp(inst: &MdkpInstance, mode: SolveMode) -> Result<MdkpSolution, KnapsackError> {
    let d = inst.capacities.len();
    for (item, it) in inst.items.iter().enumerate() {
        if it.sizes.len() != d {
            return Err(KnapsackError::DimensionMismatch { item, expected: d, found: it.sizes.len() });
        }
    }
    match mode {
        SolveMode::Greedy => Ok(greedy(inst)),
        SolveMode::Exact => exact(inst),
    }
}

fn fits(sizes: &[u64], residual: &[u64]) -> bool {
    sizes.iter().zip(residual).all(|(s, r)| s <= r)
}

/// Profit per unit of capacity consumed, with each dimension normalised by
/// its capacity. Used for ordering only.
fn efficiency(it: &MdkpItem, capacities: &[u64]) -> f64 {
    let mut load = 0.0;
    for (&s, &b) in it.sizes.iter().zip(capacities) {
        if s > 0 {
            load += if b == 0 { f64::INFINITY } else { s as f64 / b as f64 };
        }
    }
    if load == 0.0 {
        f64::INFINITY
    } else {
        it.profit as f64 / load
    }
}

fn efficiency_order(inst: &MdkpInstance) -> Vec<usize> {
    let eff: Vec<f64> = inst.items.iter().map(|it| efficiency(it, &inst.capacities)).collect();
    let mut order: Vec<usize> = (0..inst.items.len()).collect();
    order.sort_by(|&a, &b| eff[b].partial_cmp(&eff[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    order
}

fn greedy(inst: &MdkpInstance) -> MdkpSolution {
    let mut residual = inst.capacities.clone();
    let mut selected = Vec::new();
    let mut profit = 0;
    for j in efficiency_order(inst) {
        let it = &inst.items[j];
        if fits(&it.sizes, &residual) {
            for (r, s) in residual.iter_mut().zip(&it.sizes) {
                *r -= s;
            }
            selected.push(j);
            profit += it.profit;
        }
    }
    selected.sort_unstable();
    MdkpSolution { selected, profit }
}

struct Search<'a> {
    inst: &'a MdkpInstance,
    order: Vec<usize>,
    residual: Vec<u64>,
    current: Vec<usize>,
    best_profit: u64,
    best: Vec<usize>,
}

impl Search<'_> {
    /// Sum of remaining items that still fit on their own.
    fn bound(&self, k: usize) -> u64 {
        self.order[k..]
            .iter()
            .map(|&j| &self.inst.items[j])
            .filter(|it| fits(&it.sizes, &self.residual))
            .map(|it| it.profit)
            .sum()
    }

    fn run(&mut self, k: usize, profit: u64) {
        if profit > self.best_profit {
            self.best_profit = profit;
            self.best = self.current.clone();
        }
        if k == self.order.len() || profit + self.bound(k) <= self.best_profit {
            return;
        }
        let j = self.order[k];
        let it = &self.inst.items[j];
        if fits(&it.sizes, &self.residual) {
            for (r, s) in self.residual.iter_mut().zip(&it.sizes) {
                *r -= s;
            }
            self.current.push(j);
            self.run(k + 1, profit + it.profit);
            self.current.pop();
            for (r, s) in self.residual.iter_mut().zip(&it.sizes) {
                *r += s;
            }
        }
        self.run(k + 1, profit);
    }
}

fn exact(inst: &MdkpInstance) -> Result<MdkpSolution, KnapsackError> {
    let n = inst.items.len();
    if n > EXACT_ITEM_LIMIT {
        return Err(KnapsackError::TooLarge { items: n, limit: EXACT_ITEM_LIMIT });
    }
    let seed = greedy(inst);
    let mut search = Search {
        inst,
        order: efficiency_order(inst),
        residual: inst.capacities.clone(),
        current: Vec::new(),
        best_profit: seed.profit,
        best: seed.selected,
    };
    search.run(0, 0);
    let mut selected = search.best;
    selected.sort_unstable();
    Ok(MdkpSolution { selected, profit: search.best_profit })
}
