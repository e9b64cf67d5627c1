use super::KpItem;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KpSolution {
    /// Indices into the input slice, ascending.
    pub selected: Vec<usize>,
    pub profit: u64,
}

/// Exact 0-1 knapsack by dynamic programming over capacities.
///
/// Runs in `O(n * min(capacity, total size))` time and bits of memory, which
/// is polynomial when the capacity is a path length.
pub fn solve_kp_dp(capacity: u64, items: &[KpItem]) -> KpSolution {
    let total: u64 = items.iter().map(|i| i.size).sum();
    let cap = capacity.min(total) as usize;
    let width = cap + 1;
    let mut best = vec![0u64; width];
    let mut take = vec![false; items.len() * width];
    for (j, it) in items.iter().enumerate() {
        let size = it.size as usize;
        if size > cap {
            continue;
        }
        for c in (size..=cap).rev() {
            let with = best[c - size] + it.profit;
            if with > best[c] {
                best[c] = with;
                take[j * width + c] = true;
            }
        }
    }
    let mut selected = Vec::new();
    let mut c = cap;
    for j in (0..items.len()).rev() {
        if take[j * width + c] {
            selected.push(j);
            c -= items[j].size as usize;
        }
    }
    selected.reverse();
    KpSolution { selected, profit: best[cap] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(spec: &[(u64, u64)]) -> Vec<KpItem> {
        spec.iter().enumerate().map(|(id, &(size, profit))| KpItem { id, size, profit }).collect()
    }

    #[test]
    fn zero_capacity_selects_nothing() {
        let sol = solve_kp_dp(0, &items(&[(1, 5), (2, 7)]));
        assert_eq!(sol, KpSolution { selected: vec![], profit: 0 });
    }

    #[test]
    fn single_fitting_item() {
        let sol = solve_kp_dp(4, &items(&[(3, 2)]));
        assert_eq!(sol, KpSolution { selected: vec![0], profit: 2 });
    }

    #[test]
    fn classic_instance() {
        // sizes 1,3,4,5 profits 1,4,5,7 capacity 7 -> {3,4} profit 9
        let sol = solve_kp_dp(7, &items(&[(1, 1), (3, 4), (4, 5), (5, 7)]));
        assert_eq!(sol.profit, 9);
        assert_eq!(sol.selected, vec![1, 2]);
    }

    #[test]
    fn zero_size_items_are_free() {
        let sol = solve_kp_dp(0, &items(&[(0, 3), (1, 9)]));
        assert_eq!(sol.selected, vec![0]);
        assert_eq!(sol.profit, 3);
    }
}
