//! Bounded knapsack where value equals weight: pick template multiplicities
//! that fill as much of the bed length as possible.
//!
//! Reachable pattern lengths are tracked as a dense bitset over `0..=cap`;
//! bounded multiplicities are expanded by binary splitting.

/// A template offered to the knapsack: length and how many copies fit the
/// remaining demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Column {
    pub length: i64,
    pub capacity: i64,
    pub figure: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackSolution {
    /// Copies taken, parallel to the input columns.
    pub taken: Vec<i64>,
    pub used_length: i64,
}

#[derive(Clone, Debug)]
struct Reach {
    words: Vec<u64>,
    bits: usize,
}

impl Reach {
    fn origin(cap: usize) -> Self {
        let bits = cap + 1;
        let mut words = vec![0; bits.div_ceil(64)];
        words[0] = 1;
        Self { words, bits }
    }

    #[inline]
    fn contains(&self, at: usize) -> bool {
        at < self.bits && self.words[at / 64] >> (at % 64) & 1 == 1
    }

    /// `self |= self << shift`, truncated to the table size.
    fn or_shifted(&mut self, shift: usize) {
        if shift >= self.bits {
            return;
        }
        let (ws, bs) = (shift / 64, shift % 64);
        for w in (ws..self.words.len()).rev() {
            let mut moved = self.words[w - ws] << bs;
            if bs > 0 && w > ws {
                moved |= self.words[w - ws - 1] >> (64 - bs);
            }
            self.words[w] |= moved;
        }
        let tail = self.bits % 64;
        if tail != 0 {
            *self.words.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
    }

    fn add_item(&mut self, length: i64, copies: i64) {
        let mut left = copies;
        let mut chunk = 1;
        while left > 0 {
            let take = chunk.min(left);
            self.or_shifted((take * length) as usize);
            left -= take;
            chunk *= 2;
        }
    }

    fn max(&self) -> usize {
        for (w, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                return w * 64 + 63 - word.leading_zeros() as usize;
            }
        }
        0
    }
}

/// Copies of a column that could ever fit under `cap`.
#[inline]
fn usable(col: &Column, cap: i64) -> i64 {
    col.capacity.clamp(0, cap / col.length)
}

/// Longest reachable pattern length, without a witness.
///
/// Used in the construction hot path, where only improving lays need their
/// multiplicities reconstructed.
pub fn max_fill(cap: i64, columns: &[Column]) -> i64 {
    if cap <= 0 {
        return 0;
    }
    let total: i64 = columns.iter().map(|c| usable(c, cap) * c.length).sum();
    if total <= cap {
        return total;
    }
    let mut reach = Reach::origin(cap as usize);
    for col in columns {
        let copies = usable(col, cap);
        if copies > 0 {
            reach.add_item(col.length, copies);
            if reach.contains(cap as usize) {
                return cap;
            }
        }
    }
    reach.max() as i64
}

/// Exact optimum of the bounded knapsack with a deterministic witness.
///
/// Among optimal witnesses, columns are visited by ascending figure index
/// and each gets the largest count that keeps the optimum reachable.
pub fn solve_bounded_knapsack(cap: i64, columns: &[Column]) -> KnapsackSolution {
    let mut taken = vec![0; columns.len()];
    if cap <= 0 || columns.is_empty() {
        return KnapsackSolution { taken, used_length: 0 };
    }

    let mut order: Vec<usize> = (0..columns.len()).collect();
    order.sort_by_key(|&n| columns[n].figure);

    // suffix[p] holds lengths reachable with columns order[p..].
    let mut suffix = Vec::with_capacity(order.len() + 1);
    suffix.push(Reach::origin(cap as usize));
    for &n in order.iter().rev() {
        let mut next = suffix.last().unwrap().clone();
        next.add_item(columns[n].length, usable(&columns[n], cap));
        suffix.push(next);
    }
    suffix.reverse();

    let used_length = suffix[0].max() as i64;
    let mut left = used_length;
    for (p, &n) in order.iter().enumerate() {
        let col = &columns[n];
        let most = usable(col, cap).min(left / col.length);
        let t = (0..=most)
            .rev()
            .find(|t| suffix[p + 1].contains((left - t * col.length) as usize))
            .expect("optimum stays reachable along the suffix chain");
        taken[n] = t;
        left -= t * col.length;
    }
    debug_assert_eq!(left, 0);
    KnapsackSolution { taken, used_length }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cols(spec: &[(i64, i64)]) -> Vec<Column> {
        spec.iter()
            .enumerate()
            .map(|(figure, &(length, capacity))| Column { length, capacity, figure })
            .collect()
    }

    /// Exhaustive enumeration of every count vector within the capacities.
    fn brute_force(cap: i64, columns: &[Column]) -> i64 {
        fn go(cap: i64, columns: &[Column], acc: i64) -> i64 {
            let Some((head, rest)) = columns.split_first() else {
                return acc;
            };
            (0..=head.capacity)
                .map(|t| acc + t * head.length)
                .filter(|&used| used <= cap)
                .map(|used| go(cap, rest, used))
                .max()
                .unwrap_or(acc)
        }
        go(cap, columns, 0)
    }

    #[test]
    fn small_mixed_fill() {
        let columns = cols(&[(3, 2), (4, 1)]);
        assert_eq!(brute_force(10, &columns), 10);
        let sol = solve_bounded_knapsack(10, &columns);
        assert_eq!(sol, KnapsackSolution { taken: vec![2, 1], used_length: 10 });
    }

    #[test]
    fn single_column_full_bed() {
        let columns = cols(&[(60, 20)]);
        assert_eq!(brute_force(720, &columns), 720);
        let sol = solve_bounded_knapsack(720, &columns);
        assert_eq!(sol.taken, vec![12]);
        assert_eq!(sol.used_length, 720);
    }

    #[test]
    fn empty_and_zero_capacity() {
        let sol = solve_bounded_knapsack(10, &[]);
        assert!(sol.taken.is_empty());
        assert_eq!(sol.used_length, 0);

        let sol = solve_bounded_knapsack(10, &cols(&[(3, 0), (4, 0)]));
        assert_eq!(sol, KnapsackSolution { taken: vec![0, 0], used_length: 0 });
        assert_eq!(max_fill(10, &cols(&[(3, 0)])), 0);
    }

    #[test]
    fn tie_break_prefers_low_figures() {
        // 6 = 2*3 or 3+3 via the second column; first column takes all it can.
        let sol = solve_bounded_knapsack(6, &cols(&[(3, 2), (3, 2)]));
        assert_eq!(sol.taken, vec![2, 0]);
        // Order follows figure index, not slice position.
        let columns = vec![
            Column { length: 3, capacity: 2, figure: 1 },
            Column { length: 3, capacity: 2, figure: 0 },
        ];
        assert_eq!(solve_bounded_knapsack(6, &columns).taken, vec![0, 2]);
    }

    #[test]
    fn bitset_crosses_word_boundaries() {
        let columns = cols(&[(61, 3), (67, 4), (130, 2)]);
        for cap in [63, 64, 65, 127, 128, 129, 500, 720] {
            assert_eq!(max_fill(cap, &columns), brute_force(cap, &columns), "cap {cap}");
            assert_eq!(
                solve_bounded_knapsack(cap, &columns).used_length,
                brute_force(cap, &columns)
            );
        }
    }

    fn small_instance() -> impl Strategy<Value = (i64, Vec<Column>)> {
        (1i64..=50, prop::collection::vec((1i64..=50, 0i64..=5), 0..=6))
            .prop_map(|(cap, spec)| (cap, cols(&spec)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn matches_enumeration((cap, columns) in small_instance()) {
            let sol = solve_bounded_knapsack(cap, &columns);
            prop_assert_eq!(sol.used_length, brute_force(cap, &columns));
            prop_assert_eq!(max_fill(cap, &columns), sol.used_length);
        }

        #[test]
        fn witness_is_feasible((cap, columns) in small_instance()) {
            let sol = solve_bounded_knapsack(cap, &columns);
            let mut used = 0;
            for (col, &t) in columns.iter().zip(&sol.taken) {
                prop_assert!(0 <= t && t <= col.capacity);
                used += t * col.length;
            }
            prop_assert_eq!(used, sol.used_length);
            prop_assert!(used <= cap);
        }

        #[test]
        fn monotone_in_cap_and_capacity((cap, columns) in small_instance(), bump in 0usize..6) {
            let base = solve_bounded_knapsack(cap, &columns).used_length;
            prop_assert!(solve_bounded_knapsack(cap + 1, &columns).used_length >= base);
            if let Some(n) = (!columns.is_empty()).then(|| bump % columns.len()) {
                let mut more = columns.clone();
                more[n].capacity += 1;
                prop_assert!(solve_bounded_knapsack(cap, &more).used_length >= base);
            }
        }
    }
}
