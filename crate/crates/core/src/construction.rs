//! Greedy lay construction.
//!
//! A lay is built by choosing a height profile (layers per fabric type),
//! turning the remaining demand into bounded columns for that profile and
//! filling the bed length with a knapsack. [`create_lays`] repeats this until
//! the demand is used up, steering each new lay toward the running mean
//! volume and height of the lays made so far.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::knapsack::{max_fill, solve_bounded_knapsack, Column};
use crate::model::{Demand, Lay};

/// Admissible layer counts per fabric type, each list sorted descending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightCandidates {
    pub per_fabric: Vec<Vec<i64>>,
}

impl HeightCandidates {
    pub fn contains(&self, fabric: usize, height: i64) -> bool {
        self.per_fabric[fabric].binary_search_by(|c| height.cmp(c)).is_ok()
    }

    pub fn fabrics(&self) -> usize {
        self.per_fabric.len()
    }
}

/// Mean lay volume kept as an exact ratio `total / lays`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeanVolume {
    total: i64,
    lays: i64,
}

impl MeanVolume {
    pub fn exact(volume: i64) -> Self {
        Self { total: volume, lays: 1 }
    }

    pub fn mean(total: i64, lays: i64) -> Self {
        assert!(lays > 0);
        Self { total, lays }
    }

    /// `volume >= self`
    #[inline]
    pub fn reached_by(&self, volume: i64) -> bool {
        volume as i128 * self.lays as i128 >= self.total as i128
    }

    pub fn as_f64(&self) -> f64 {
        self.total as f64 / self.lays as f64
    }
}

impl PartialOrd for MeanVolume {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let lhs = self.total as i128 * other.lays as i128;
        let rhs = other.total as i128 * self.lays as i128;
        Some(lhs.cmp(&rhs))
    }
}

/// Volume and height the next lay should aim for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstructionTargets {
    pub ref_v: MeanVolume,
    pub ref_h: i64,
}

impl ConstructionTargets {
    /// A full bed.
    pub fn initial(bed_length: i64, bed_height: i64) -> Self {
        Self {
            ref_v: MeanVolume::exact(bed_length * bed_height),
            ref_h: bed_height,
        }
    }

    /// Mean volume and mean height (rounded half up, clamped to
    /// `[1, bed_height]`) of `lays`.
    pub fn from_lays(lays: &[Lay], lengths: &[i64], bed_height: i64) -> Self {
        assert!(!lays.is_empty());
        let n = lays.len() as i64;
        let (volume, height) = lays.iter().fold((0, 0), |(v, h), lay| {
            let height = lay.total_height();
            (v + lay.pattern_length(lengths) * height, h + height)
        });
        let ref_h = ((2 * height + n) / (2 * n)).clamp(1, bed_height);
        Self {
            ref_v: MeanVolume::mean(volume, n),
            ref_h,
        }
    }
}

/// Layer counts worth trying for each fabric type, given what is left.
///
/// `ref_h` is admitted when some SKU of that fabric still needs at least
/// `ref_h` garments. A smaller height `ph` is admitted when it divides some
/// nonzero remaining count exactly and the resulting number of templates
/// fits on the bed. Zero is always admitted.
pub fn create_possible_heights(
    demand: &Demand,
    lengths: &[i64],
    bed_length: i64,
    ref_h: i64,
) -> HeightCandidates {
    let per_fabric = (0..demand.fabrics())
        .map(|j| {
            // `ph` qualifies through figure `i` exactly when `s_ij = ph * q`
            // for some template count `q` with `q * l_i <= bed_length`.
            let mut admitted = vec![false; ref_h.max(0) as usize];
            let mut reaches_ref = false;
            for (i, &l) in lengths.iter().enumerate() {
                let s = demand.get(i, j);
                if s == 0 {
                    continue;
                }
                reaches_ref |= s >= ref_h;
                for q in 1..=(bed_length / l).min(s) {
                    if s % q == 0 && s / q < ref_h {
                        admitted[(s / q) as usize] = true;
                    }
                }
            }
            let mut set = Vec::new();
            if reaches_ref {
                set.push(ref_h);
            }
            set.extend((1..ref_h).rev().filter(|&ph| admitted[ph as usize]));
            set.push(0);
            set
        })
        .collect();
    HeightCandidates { per_fabric }
}

/// One column per garment figure: how many templates the profile allows
/// without overproducing any SKU of that figure.
pub fn create_columns(demand: &Demand, lengths: &[i64], profile: &[i64]) -> Result<Vec<Column>> {
    if !profile.iter().any(|&h| h > 0) {
        return Err(Error::EmptyProfile);
    }
    Ok((0..demand.figures())
        .map(|i| Column {
            length: lengths[i],
            capacity: column_capacity(demand.row(i), profile),
            figure: i,
        })
        .collect())
}

#[inline]
fn column_capacity(row: &[i64], profile: &[i64]) -> i64 {
    row.iter()
        .zip(profile)
        .filter(|(_, &h)| h != 0)
        .map(|(&s, &h)| s / h)
        .min()
        .unwrap_or(0)
}

/// Every profile drawing each entry from its candidate set and summing to
/// `target_h`, fabric by fabric with larger heights first.
pub fn enumerate_height_profiles(cands: &HeightCandidates, target_h: i64) -> Profiles<'_> {
    Profiles::new(cands, target_h)
}

/// Iterator behind [`enumerate_height_profiles`].
#[derive(Debug)]
pub struct Profiles<'a> {
    cands: &'a [Vec<i64>],
    /// `completable[j][r]`: fabrics `j..` can add up to exactly `r`.
    completable: Vec<Vec<bool>>,
    pos: Vec<usize>,
    rest: Vec<i64>,
    profile: Vec<i64>,
    started: bool,
    done: bool,
}

impl<'a> Profiles<'a> {
    fn new(cands: &'a HeightCandidates, target_h: i64) -> Self {
        let cands = &cands.per_fabric[..];
        let f = cands.len();
        let width = target_h.max(0) as usize + 1;
        let mut completable = vec![vec![false; width]; f + 1];
        completable[f][0] = true;
        for j in (0..f).rev() {
            for r in 0..width {
                completable[j][r] = cands[j]
                    .iter()
                    .any(|&h| h >= 0 && (h as usize) <= r && completable[j + 1][r - h as usize]);
            }
        }
        let done = f == 0 || target_h < 0 || !completable[0][target_h as usize];
        let mut rest = vec![0; f + 1];
        rest[0] = target_h;
        Self {
            cands,
            completable,
            pos: vec![0; f],
            rest,
            profile: vec![0; f],
            started: false,
            done,
        }
    }

    fn seek(&mut self, j: usize, from: usize) -> bool {
        let rest = self.rest[j];
        for p in from..self.cands[j].len() {
            let h = self.cands[j][p];
            if h <= rest && self.completable[j + 1][(rest - h) as usize] {
                self.pos[j] = p;
                self.profile[j] = h;
                self.rest[j + 1] = rest - h;
                return true;
            }
        }
        false
    }

    fn descend(&mut self, from: usize) {
        for j in from..self.cands.len() {
            let found = self.seek(j, 0);
            debug_assert!(found);
        }
    }
}

impl Iterator for Profiles<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend(0);
            return Some(self.profile.clone());
        }
        let mut j = self.cands.len();
        while j > 0 {
            j -= 1;
            if self.seek(j, self.pos[j] + 1) {
                self.descend(j + 1);
                return Some(self.profile.clone());
            }
        }
        self.done = true;
        None
    }
}

/// Best single lay for the remaining demand.
///
/// Profiles are tried at the target height, then one layer lower at a
/// time, keeping only strict volume improvements. The search stops once the
/// best lay reaches `ref_v`, once no lay at the current height could beat
/// it, or when the height reaches zero. `Ok(None)` means no profile yielded
/// a lay with positive volume.
pub fn create_lay(
    demand: &Demand,
    lengths: &[i64],
    targets: &ConstructionTargets,
    bed_length: i64,
) -> Result<Option<Lay>> {
    if demand.is_zero() {
        return Err(Error::NothingToCut);
    }
    let cands = create_possible_heights(demand, lengths, bed_length, targets.ref_h);
    let mut search = LaySearch::new(demand, lengths, &cands, targets.ref_v, bed_length);
    let mut height = targets.ref_h;
    while !targets.ref_v.reached_by(search.best_volume)
        && height * bed_length > search.best_volume
        && height > 0
    {
        search.run(height);
        height -= 1;
    }
    Ok(search.best)
}

/// Depth-first walk over the profiles of one height, in the same order as
/// [`Profiles`], skipping subtrees whose column capacities cannot beat the
/// current best volume. Skipped profiles could never have been accepted, so
/// the result is the same as trying every profile.
struct LaySearch<'a> {
    cands: &'a [Vec<i64>],
    /// `quotients[j][p][i]`: copies of figure `i` allowed by candidate `p`
    /// of fabric `j`, clipped to what fits on the bed.
    quotients: Vec<Vec<Vec<i64>>>,
    ref_v: MeanVolume,
    bed_length: i64,
    /// Per-depth column capacities; `caps[0]` only carries the bed clip.
    caps: Vec<Vec<i64>>,
    profile: Vec<i64>,
    completable: Vec<Vec<bool>>,
    columns: Vec<Column>,
    best: Option<Lay>,
    best_volume: i64,
    height: i64,
}

impl<'a> LaySearch<'a> {
    fn new(
        demand: &'a Demand,
        lengths: &'a [i64],
        cands: &'a HeightCandidates,
        ref_v: MeanVolume,
        bed_length: i64,
    ) -> Self {
        let f = cands.fabrics();
        let g = demand.figures();
        let fits: Vec<i64> = lengths.iter().map(|&l| bed_length / l).collect();
        let quotients = cands
            .per_fabric
            .iter()
            .enumerate()
            .map(|(j, set)| {
                set.iter()
                    .map(|&h| match h {
                        0 => Vec::new(),
                        h => (0..g).map(|i| (demand.get(i, j) / h).min(fits[i])).collect(),
                    })
                    .collect()
            })
            .collect();
        let columns = (0..g)
            .map(|i| Column { length: lengths[i], capacity: 0, figure: i })
            .collect();
        Self {
            cands: &cands.per_fabric,
            quotients,
            ref_v,
            bed_length,
            caps: vec![fits; f + 1],
            profile: vec![0; f],
            completable: Vec::new(),
            columns,
            best: None,
            best_volume: 0,
            height: 0,
        }
    }

    fn run(&mut self, height: i64) {
        self.height = height;
        let f = self.cands.len();
        let width = height as usize + 1;
        self.completable = vec![vec![false; width]; f + 1];
        self.completable[f][0] = true;
        for j in (0..f).rev() {
            for r in 0..width {
                self.completable[j][r] = self.cands[j]
                    .iter()
                    .any(|&h| (h as usize) <= r && self.completable[j + 1][r - h as usize]);
            }
        }
        if self.completable[0][width - 1] {
            self.visit(0, height, None);
        }
    }

    fn done(&self) -> bool {
        self.ref_v.reached_by(self.best_volume)
    }

    /// `bound` is an upper bound on the pattern length of any profile below
    /// this node, or `None` while every fabric so far has height zero.
    /// Returns false when the whole search should stop.
    fn visit(&mut self, j: usize, rest: i64, bound: Option<i64>) -> bool {
        if j == self.cands.len() {
            return self.evaluate();
        }
        for p in 0..self.cands[j].len() {
            let h = self.cands[j][p];
            if h > rest || !self.completable[j + 1][(rest - h) as usize] {
                continue;
            }
            let (lo, hi) = self.caps.split_at_mut(j + 1);
            let (parent, child) = (&lo[j], &mut hi[0]);
            let child_bound = if h == 0 {
                child.copy_from_slice(parent);
                bound
            } else {
                let mut total = 0;
                for (((c, &pc), &q), col) in child
                    .iter_mut()
                    .zip(parent.iter())
                    .zip(&self.quotients[j][p])
                    .zip(&self.columns)
                {
                    *c = pc.min(q);
                    total += *c * col.length;
                }
                Some(total.min(self.bed_length))
            };
            if child_bound.is_some_and(|b| b * self.height <= self.best_volume) {
                continue;
            }
            self.profile[j] = h;
            if !self.visit(j + 1, rest - h, child_bound) {
                return false;
            }
        }
        true
    }

    fn evaluate(&mut self) -> bool {
        let f = self.cands.len();
        for (col, &c) in self.columns.iter_mut().zip(&self.caps[f]) {
            col.capacity = c;
        }
        let used = max_fill(self.bed_length, &self.columns);
        if used * self.height > self.best_volume {
            let sol = solve_bounded_knapsack(self.bed_length, &self.columns);
            debug_assert_eq!(sol.used_length, used);
            self.best = Some(Lay::new(self.profile.clone(), sol.taken));
            self.best_volume = used * self.height;
            if self.done() {
                return false;
            }
        }
        true
    }
}

/// Builds lays one after another until `demand` is fully produced.
///
/// If a lay search comes back empty it is retried once with full-bed
/// targets; a second empty result is reported as [`Error::Stall`].
pub fn create_lays(
    demand: &Demand,
    lengths: &[i64],
    bed_length: i64,
    bed_height: i64,
) -> Result<Vec<Lay>> {
    let mut remaining = demand.clone();
    let mut lays = Vec::new();
    let initial = ConstructionTargets::initial(bed_length, bed_height);
    let mut targets = initial;
    while !remaining.is_zero() {
        let lay = match create_lay(&remaining, lengths, &targets, bed_length)? {
            Some(lay) => lay,
            None => create_lay(&remaining, lengths, &initial, bed_length)?
                .ok_or_else(|| stall(&remaining))?,
        };
        remaining.apply_lay(&lay, -1);
        debug_assert!(remaining.cells().iter().all(|&s| s >= 0));
        lays.push(lay);
        targets = ConstructionTargets::from_lays(&lays, lengths, bed_height);
    }
    Ok(lays)
}

fn stall(remaining: &Demand) -> Error {
    let stuck = (0..remaining.figures())
        .flat_map(|i| (0..remaining.fabrics()).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let s = remaining.get(i, j);
            (s != 0).then_some((i, j, s))
        })
        .collect();
    Error::Stall { stuck }
}
