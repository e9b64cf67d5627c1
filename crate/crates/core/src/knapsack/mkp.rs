use super::{by_density, fractional_bound, solve_kp_dp, KnapsackError, KpItem, SolveMode, EXACT_ITEM_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MkpInstance {
    pub capacities: Vec<u64>,
    pub items: Vec<KpItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MkpSolution {
    /// Knapsack index per item, `None` when the item is left out.
    pub assignment: Vec<Option<usize>>,
    pub profit: u64,
}

impl MkpSolution {
    /// Items packed into knapsack `k`, in input order.
    pub fn packed_into(&self, k: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&j| self.assignment[j] == Some(k)).collect()
    }
}

pub fn solve_mkp(inst: &MkpInstance, mode: SolveMode) -> Result<MkpSolution, KnapsackError> {
    match mode {
        SolveMode::Greedy => Ok(greedy(inst)),
        SolveMode::Exact if inst.capacities.len() == 1 => {
            let kp = solve_kp_dp(inst.capacities[0], &inst.items);
            let mut assignment = vec![None; inst.items.len()];
            for j in kp.selected {
                assignment[j] = Some(0);
            }
            Ok(MkpSolution { assignment, profit: kp.profit })
        }
        SolveMode::Exact => exact(inst),
    }
}

/// Density order, each item into the knapsack with the most residual room
/// (ties to the lower index) if it fits there.
fn greedy(inst: &MkpInstance) -> MkpSolution {
    let mut order: Vec<usize> = (0..inst.items.len()).collect();
    order.sort_by(|&a, &b| by_density(&inst.items[a], &inst.items[b]));
    let mut residual = inst.capacities.clone();
    let mut assignment = vec![None; inst.items.len()];
    let mut profit = 0;
    for j in order {
        let it = inst.items[j];
        let mut bins: Vec<usize> = (0..residual.len()).collect();
        bins.sort_by(|&a, &b| residual[b].cmp(&residual[a]).then(a.cmp(&b)));
        if let Some(&k) = bins.iter().find(|&&k| residual[k] >= it.size) {
            residual[k] -= it.size;
            assignment[j] = Some(k);
            profit += it.profit;
        }
    }
    MkpSolution { assignment, profit }
}

struct Search<'a> {
    items: Vec<(usize, KpItem)>,
    residual: Vec<u64>,
    current: Vec<Option<usize>>,
    best: Option<(u64, Vec<Option<usize>>)>,
    inst: &'a MkpInstance,
}

impl Search<'_> {
    fn run(&mut self, k: usize, profit: u64) {
        let best_profit = self.best.as_ref().map(|b| b.0);
        if k == self.items.len() {
            if best_profit.is_none_or(|b| profit > b) {
                self.best = Some((profit, self.current.clone()));
            }
            return;
        }
        let room: u64 = self.residual.iter().sum();
        let bound = profit + fractional_bound(self.items[k..].iter().map(|p| p.1), room);
        if best_profit.is_some_and(|b| bound <= b) {
            return;
        }
        let (j, it) = self.items[k];
        for bin in 0..self.residual.len() {
            let r = self.residual[bin];
            // bins with equal residual room are interchangeable from here on
            if r < it.size || self.residual[..bin].contains(&r) {
                continue;
            }
            self.residual[bin] -= it.size;
            self.current[j] = Some(bin);
            self.run(k + 1, profit + it.profit);
            self.current[j] = None;
            self.residual[bin] += it.size;
        }
        self.run(k + 1, profit);
    }
}

fn exact(inst: &MkpInstance) -> Result<MkpSolution, KnapsackError> {
    let n = inst.items.len();
    if n > EXACT_ITEM_LIMIT {
        return Err(KnapsackError::TooLarge { items: n, limit: EXACT_ITEM_LIMIT });
    }
    let largest = inst.capacities.iter().copied().max().unwrap_or(0);
    let mut items: Vec<(usize, KpItem)> = inst
        .items
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, it)| !inst.capacities.is_empty() && it.size <= largest)
        .collect();
    items.sort_by(|a, b| by_density(&a.1, &b.1));
    let seed = greedy(inst);
    let mut search = Search {
        items,
        residual: inst.capacities.clone(),
        current: vec![None; n],
        best: Some((seed.profit, seed.assignment)),
        inst,
    };
    search.run(0, 0);
    let (profit, assignment) = search.best.take().expect("seeded with greedy");
    debug_assert!(feasible(search.inst, &assignment));
    Ok(MkpSolution { assignment, profit })
}

fn feasible(inst: &MkpInstance, assignment: &[Option<usize>]) -> bool {
    let mut load = vec![0u64; inst.capacities.len()];
    for (j, a) in assignment.iter().enumerate() {
        if let Some(k) = *a {
            load[k] += inst.items[j].size;
        }
    }
    load.iter().zip(&inst.capacities).all(|(l, c)| l <= c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(caps: &[u64], spec: &[(u64, u64)]) -> MkpInstance {
        MkpInstance {
            capacities: caps.to_vec(),
            items: spec.iter().enumerate().map(|(id, &(size, profit))| KpItem { id, size, profit }).collect(),
        }
    }

    #[test]
    fn single_knapsack_matches_kp() {
        let i = inst(&[7], &[(1, 1), (3, 4), (4, 5), (5, 7)]);
        let sol = solve_mkp(&i, SolveMode::Exact).unwrap();
        assert_eq!(sol.profit, solve_kp_dp(7, &i.items).profit);
        assert_eq!(sol.packed_into(0), vec![1, 2]);
    }

    #[test]
    fn oversized_items_are_left_out() {
        let i = inst(&[3, 2], &[(4, 10), (5, 1)]);
        for mode in [SolveMode::Greedy, SolveMode::Exact] {
            let sol = solve_mkp(&i, mode).unwrap();
            assert_eq!(sol.profit, 0);
            assert!(sol.assignment.iter().all(Option::is_none));
        }
    }

    #[test]
    fn exact_beats_greedy_when_greedy_fragments() {
        // greedy puts the dense 2 into the 5-bin, then the 4 no longer fits
        let i = inst(&[5, 3], &[(2, 3), (4, 4), (3, 3)]);
        let g = solve_mkp(&i, SolveMode::Greedy).unwrap();
        let e = solve_mkp(&i, SolveMode::Exact).unwrap();
        assert!(g.profit <= e.profit);
        assert_eq!(e.profit, 7);
        assert!(feasible(&i, &e.assignment));
    }

    #[test]
    fn refuses_large_exact_instances() {
        let i = inst(&[5, 5], &vec![(1, 1); EXACT_ITEM_LIMIT + 1]);
        assert_eq!(
            solve_mkp(&i, SolveMode::Exact),
            Err(KnapsackError::TooLarge { items: EXACT_ITEM_LIMIT + 1, limit: EXACT_ITEM_LIMIT })
        );
        assert!(solve_mkp(&i, SolveMode::Greedy).is_ok());
    }

    #[test]
    fn no_knapsacks() {
        let i = inst(&[], &[(1, 1)]);
        assert_eq!(solve_mkp(&i, SolveMode::Exact).unwrap().profit, 0);
        assert_eq!(solve_mkp(&i, SolveMode::Greedy).unwrap().profit, 0);
    }
}
