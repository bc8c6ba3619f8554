//! Instances, lays and cutting plans, plus the feasibility checks and
//! volume metrics every other module relies on.
//!
//! All quantities are exact integers. Lengths are abstract units along the
//! cutting bed, heights are layer counts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cutting requirement: bed limits, template lengths and the SKU demand.
///
/// `demand[i][j]` is the number of garments of figure `i` to be cut from
/// fabric type `j`. Fields are kept as raw signed integers so that a
/// malformed file can be described by [`validate_instance`] instead of
/// failing at parse time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    #[serde(rename = "l_ub")]
    pub bed_length: i64,
    #[serde(rename = "h_ub")]
    pub bed_height: i64,
    pub lengths: Vec<i64>,
    pub demand: Vec<Vec<i64>>,
}

impl Instance {
    /// Number of garment figures (rows of the demand matrix).
    pub fn figures(&self) -> usize {
        self.lengths.len()
    }

    /// Number of fabric types, taken from the first demand row.
    pub fn fabrics(&self) -> usize {
        self.demand.first().map_or(0, Vec::len)
    }

    /// Capacity of one lay, `bed_length * bed_height`.
    pub fn bed_volume(&self) -> i64 {
        self.bed_length * self.bed_height
    }

    pub fn demand_matrix(&self) -> Result<Demand> {
        Demand::from_rows(&self.demand)
    }
}

/// One spread-and-cut: layers per fabric type and templates per figure.
///
/// A lay produces `counts[i] * heights[j]` garments of SKU `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lay {
    pub heights: Vec<i64>,
    pub counts: Vec<i64>,
}

impl Lay {
    pub fn new(heights: Vec<i64>, counts: Vec<i64>) -> Self {
        Self { heights, counts }
    }

    pub fn total_height(&self) -> i64 {
        self.heights.iter().sum()
    }

    /// Length of the cutting pattern, `sum_i lengths[i] * counts[i]`.
    pub fn pattern_length(&self, lengths: &[i64]) -> i64 {
        lengths.iter().zip(&self.counts).map(|(l, q)| l * q).sum()
    }

    fn check_dims(&self, inst: &Instance) -> Result<()> {
        if self.counts.len() != inst.figures() || self.heights.len() != inst.fabrics() {
            return Err(Error::DimensionMismatch(format!(
                "lay is {}x{}, instance is {}x{}",
                self.counts.len(),
                self.heights.len(),
                inst.figures(),
                inst.fabrics()
            )));
        }
        Ok(())
    }
}

/// An ordered set of lays claimed to meet an instance's demand exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuttingPlan {
    /// Name of the instance the plan was built for.
    pub instance: String,
    pub lays: Vec<Lay>,
    /// Number of lays.
    pub k: usize,
    /// Unweighted mean of the per-lay utilization rates, in `[0, 1]`.
    pub mean_ur: f64,
}

impl CuttingPlan {
    pub fn new(inst: &Instance, lays: Vec<Lay>) -> Result<Self> {
        let mean_ur = if lays.is_empty() {
            0.0
        } else {
            let mut total = 0.0;
            for lay in &lays {
                total += utilization_rate(lay, inst)?;
            }
            total / lays.len() as f64
        };
        Ok(Self {
            instance: inst.name.clone(),
            k: lays.len(),
            lays,
            mean_ur,
        })
    }
}

/// Dense `figures x fabrics` matrix of remaining SKU counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Demand {
    figures: usize,
    fabrics: usize,
    cells: Vec<i64>,
}

impl Demand {
    pub fn zeros(figures: usize, fabrics: usize) -> Self {
        Self {
            figures,
            fabrics,
            cells: vec![0; figures * fabrics],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let fabrics = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != fabrics) {
            return Err(Error::DimensionMismatch(format!(
                "demand row {i} has {} entries, expected {fabrics}",
                row.len()
            )));
        }
        Ok(Self {
            figures: rows.len(),
            fabrics,
            cells: rows.concat(),
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        if self.fabrics == 0 {
            return vec![Vec::new(); self.figures];
        }
        self.cells.chunks(self.fabrics).map(<[i64]>::to_vec).collect()
    }

    pub fn figures(&self) -> usize {
        self.figures
    }

    pub fn fabrics(&self) -> usize {
        self.fabrics
    }

    #[inline]
    pub fn get(&self, figure: usize, fabric: usize) -> i64 {
        self.cells[figure * self.fabrics + fabric]
    }

    #[inline]
    pub fn row(&self, figure: usize) -> &[i64] {
        &self.cells[figure * self.fabrics..(figure + 1) * self.fabrics]
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|&s| s == 0)
    }

    pub fn cells(&self) -> &[i64] {
        &self.cells
    }

    /// Adds `sign * counts[i] * heights[j]` to every cell.
    pub fn apply_lay(&mut self, lay: &Lay, sign: i64) {
        debug_assert_eq!(lay.counts.len(), self.figures);
        debug_assert_eq!(lay.heights.len(), self.fabrics);
        for (i, &q) in lay.counts.iter().enumerate() {
            if q == 0 {
                continue;
            }
            let row = &mut self.cells[i * self.fabrics..(i + 1) * self.fabrics];
            for (cell, &h) in row.iter_mut().zip(&lay.heights) {
                *cell += sign * q * h;
            }
        }
    }
}

/// What a [`Violation`] is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    /// Produced count differs from demand.
    Exactness,
    /// Pattern or template longer than the bed.
    Length,
    /// Layer total above the bed height.
    Height,
    /// Malformed dimensions, negative or degenerate entries.
    Shape,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exactness => "exactness",
            Self::Length => "length",
            Self::Height => "height",
            Self::Shape => "shape",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub what: String,
    pub location: Vec<usize>,
    pub observed: i64,
    pub required: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} at {:?}: observed {}, required {}",
            self.kind, self.what, self.location, self.observed, self.required
        )
    }
}

/// Outcome of a validation pass; valid iff there are no violations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(
        &mut self,
        kind: ViolationKind,
        what: &str,
        location: Vec<usize>,
        observed: i64,
        required: i64,
    ) {
        self.violations.push(Violation {
            kind,
            what: what.to_owned(),
            location,
            observed,
            required,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the structural preconditions of an instance.
pub fn validate_instance(inst: &Instance) -> ValidationReport {
    use ViolationKind::*;
    let mut report = ValidationReport::default();

    if inst.bed_length < 1 {
        report.push(Shape, "bed length not positive", vec![], inst.bed_length, 1);
    }
    if inst.bed_height < 1 {
        report.push(Shape, "bed height not positive", vec![], inst.bed_height, 1);
    }
    let g = inst.lengths.len();
    if g == 0 {
        report.push(Shape, "no garment figures", vec![], 0, 1);
    }
    if inst.demand.len() != g {
        report.push(Shape, "demand row count", vec![], inst.demand.len() as i64, g as i64);
    }
    let f = inst.fabrics();
    if f == 0 {
        report.push(Shape, "no fabric types", vec![], 0, 1);
    }
    for (i, row) in inst.demand.iter().enumerate() {
        if row.len() != f {
            report.push(Shape, "demand row width", vec![i], row.len() as i64, f as i64);
        }
        for (j, &s) in row.iter().enumerate() {
            if s < 0 {
                report.push(Shape, "negative demand", vec![i, j], s, 0);
            }
        }
    }
    for (i, &l) in inst.lengths.iter().enumerate() {
        if l < 1 {
            report.push(Shape, "template length not positive", vec![i], l, 1);
            continue;
        }
        let wanted = inst.demand.get(i).is_some_and(|row| row.iter().any(|&s| s != 0));
        if wanted && l > inst.bed_length {
            report.push(Length, "template longer than bed", vec![i], l, inst.bed_length);
        }
    }
    report
}

/// Volume of a lay: pattern length times total layer count.
pub fn lay_volume(lay: &Lay, inst: &Instance) -> Result<i64> {
    lay.check_dims(inst)?;
    Ok(lay.pattern_length(&inst.lengths) * lay.total_height())
}

/// Lay volume as a fraction of the bed capacity.
pub fn utilization_rate(lay: &Lay, inst: &Instance) -> Result<f64> {
    Ok(lay_volume(lay, inst)? as f64 / inst.bed_volume() as f64)
}

/// Checks a plan against the demand (exact production) and the bed limits.
pub fn validate_plan(plan: &CuttingPlan, inst: &Instance) -> ValidationReport {
    use ViolationKind::*;
    let mut report = ValidationReport::default();
    let (g, f) = (inst.figures(), inst.fabrics());

    if plan.k != plan.lays.len() {
        report.push(Shape, "lay count field", vec![], plan.k as i64, plan.lays.len() as i64);
    }

    let mut produced = Demand::zeros(g, f);
    let mut dims_ok = true;
    for (k, lay) in plan.lays.iter().enumerate() {
        if lay.counts.len() != g {
            report.push(Shape, "counts width", vec![k], lay.counts.len() as i64, g as i64);
            dims_ok = false;
        }
        if lay.heights.len() != f {
            report.push(Shape, "heights width", vec![k], lay.heights.len() as i64, f as i64);
            dims_ok = false;
        }
        let mut signs_ok = true;
        for (i, &q) in lay.counts.iter().enumerate() {
            if q < 0 {
                report.push(Shape, "negative count", vec![k, i], q, 0);
                signs_ok = false;
            }
        }
        for (j, &h) in lay.heights.iter().enumerate() {
            if h < 0 {
                report.push(Shape, "negative height", vec![k, j], h, 0);
                signs_ok = false;
            }
        }
        if !signs_ok {
            dims_ok = false;
            continue;
        }
        let height = lay.total_height();
        if height == 0 {
            report.push(Shape, "lay without layers", vec![k], 0, 1);
        }
        let used: i64 = lay.counts.iter().sum();
        if used == 0 {
            report.push(Shape, "lay without templates", vec![k], 0, 1);
        }
        if height > inst.bed_height {
            report.push(Height, "layer total above bed height", vec![k], height, inst.bed_height);
        }
        if lay.counts.len() == g {
            let length = lay.pattern_length(&inst.lengths);
            if length > inst.bed_length {
                report.push(Length, "pattern longer than bed", vec![k], length, inst.bed_length);
            }
            if lay.heights.len() == f {
                produced.apply_lay(lay, 1);
            }
        }
    }

    if dims_ok && inst.demand.len() == g && inst.demand.iter().all(|r| r.len() == f) {
        for (i, row) in inst.demand.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                let made = produced.get(i, j);
                if made != s {
                    report.push(Exactness, "produced count", vec![i, j], made, s);
                }
            }
        }
    }
    report
}

/// `ceil(total demand volume / bed volume)`; no feasible plan has fewer lays.
pub fn volume_lower_bound(inst: &Instance) -> i64 {
    let total: i64 = inst
        .lengths
        .iter()
        .zip(&inst.demand)
        .map(|(l, row)| l * row.iter().sum::<i64>())
        .sum();
    let bed = inst.bed_volume();
    (total + bed - 1) / bed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(demand: i64, length: i64, bed_length: i64, bed_height: i64) -> Instance {
        Instance {
            name: "single".into(),
            bed_length,
            bed_height,
            lengths: vec![length],
            demand: vec![vec![demand]],
        }
    }

    fn full_bed(lengths: Vec<i64>, demand: Vec<Vec<i64>>) -> Instance {
        Instance {
            name: "t".into(),
            bed_length: 720,
            bed_height: 160,
            lengths,
            demand,
        }
    }

    #[test]
    fn full_scale_instance_is_valid() {
        let inst = crate::generator::generate_case(
            &crate::generator::GROUPS[0],
            &mut crate::generator::SplitMix64::new(1),
        );
        assert_eq!(inst.figures(), 30);
        assert_eq!(inst.fabrics(), 5);
        assert!(validate_instance(&inst).is_valid());
    }

    #[test]
    fn template_longer_than_bed() {
        let inst = full_bed(vec![721, 60], vec![vec![1, 0], vec![0, 0]]);
        let report = validate_instance(&inst);
        assert!(report.has(ViolationKind::Length));
        assert_eq!(report.violations[0].location, vec![0]);

        // Unwanted figures may be longer than the bed.
        let inst = full_bed(vec![721, 60], vec![vec![0, 0], vec![1, 0]]);
        assert!(validate_instance(&inst).is_valid());
    }

    #[test]
    fn negative_demand_is_shape() {
        let mut demand = vec![vec![1, 1]; 3];
        demand[2][1] = -1;
        let report = validate_instance(&full_bed(vec![60; 3], demand));
        assert!(!report.is_valid());
        assert!(report.has(ViolationKind::Shape));
        assert_eq!(report.violations[0].location, vec![2, 1]);
    }

    #[test]
    fn ragged_demand_is_shape() {
        let report = validate_instance(&full_bed(vec![60, 60], vec![vec![1, 1], vec![1]]));
        assert!(report.has(ViolationKind::Shape));
        let report = validate_instance(&full_bed(vec![60, 60], vec![vec![1, 1]]));
        assert!(report.has(ViolationKind::Shape));
    }

    #[test]
    fn volumes_and_rates() {
        // 700 units of pattern, 150 layers.
        let inst = full_bed(vec![100, 200], vec![vec![1, 1, 1], vec![1, 1, 1]]);
        let lay = Lay::new(vec![50, 50, 50], vec![3, 2]);
        assert_eq!(lay_volume(&lay, &inst).unwrap(), 105_000);

        let zero = Lay::new(vec![50, 50, 50], vec![0, 0]);
        assert_eq!(lay_volume(&zero, &inst).unwrap(), 0);
        assert_eq!(utilization_rate(&zero, &inst).unwrap(), 0.0);

        let inst = full_bed(vec![60], vec![vec![1]]);
        let full = Lay::new(vec![160], vec![12]);
        assert_eq!(lay_volume(&full, &inst).unwrap(), 115_200);
        assert_eq!(utilization_rate(&full, &inst).unwrap(), 1.0);

        let half = Lay::new(vec![80], vec![12]);
        assert_eq!(lay_volume(&half, &inst).unwrap(), 57_600);
        assert_eq!(utilization_rate(&half, &inst).unwrap(), 0.5);
    }

    #[test]
    fn volume_rejects_mismatched_lay() {
        let inst = full_bed(vec![60], vec![vec![1]]);
        let lay = Lay::new(vec![1, 1], vec![1]);
        assert!(matches!(lay_volume(&lay, &inst), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn plan_exactness() {
        let inst = single(4, 100, 720, 160);
        let plan = CuttingPlan::new(&inst, vec![Lay::new(vec![4], vec![1])]).unwrap();
        assert!(validate_plan(&plan, &inst).is_valid());

        let plan = CuttingPlan::new(&inst, vec![Lay::new(vec![5], vec![1])]).unwrap();
        let report = validate_plan(&plan, &inst);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.kind, ViolationKind::Exactness);
        assert_eq!((v.observed, v.required), (5, 4));
    }

    #[test]
    fn plan_length_and_height() {
        // 730 units of pattern on a 720 bed.
        let inst = full_bed(vec![365], vec![vec![2]]);
        let plan = CuttingPlan::new(&inst, vec![Lay::new(vec![1], vec![2])]).unwrap();
        let report = validate_plan(&plan, &inst);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::Length);
        assert_eq!(report.violations[0].observed, 730);

        let inst = full_bed(vec![60], vec![vec![161]]);
        let plan = CuttingPlan::new(&inst, vec![Lay::new(vec![161], vec![1])]).unwrap();
        let report = validate_plan(&plan, &inst);
        assert!(report.has(ViolationKind::Height));
        assert!(!report.has(ViolationKind::Exactness));
    }

    #[test]
    fn degenerate_lays_are_shape_violations() {
        let inst = single(4, 100, 720, 160);
        let lays = vec![Lay::new(vec![4], vec![1]), Lay::new(vec![0], vec![3])];
        let report = validate_plan(&CuttingPlan::new(&inst, lays).unwrap(), &inst);
        assert!(report.has(ViolationKind::Shape));
        assert!(!report.has(ViolationKind::Exactness));

        let lays = vec![Lay::new(vec![4], vec![1]), Lay::new(vec![3], vec![0])];
        let report = validate_plan(&CuttingPlan::new(&inst, lays).unwrap(), &inst);
        assert!(report.has(ViolationKind::Shape));
    }

    #[test]
    fn miscounted_k() {
        let inst = single(4, 100, 720, 160);
        let mut plan = CuttingPlan::new(&inst, vec![Lay::new(vec![4], vec![1])]).unwrap();
        plan.k = 2;
        assert!(validate_plan(&plan, &inst).has(ViolationKind::Shape));
    }

    #[test]
    fn lower_bound() {
        // 2 * 115200 of demand volume on a 720x160 bed.
        assert_eq!(volume_lower_bound(&full_bed(vec![720], vec![vec![320]])), 2);
        assert_eq!(volume_lower_bound(&full_bed(vec![720], vec![vec![0]])), 0);
        // 115201 = 115200 + 1
        let inst = full_bed(vec![720, 1], vec![vec![160], vec![1]]);
        assert_eq!(volume_lower_bound(&inst), 2);
    }

    #[test]
    fn mean_ur_of_empty_plan() {
        let inst = single(0, 100, 720, 160);
        let plan = CuttingPlan::new(&inst, vec![]).unwrap();
        assert_eq!((plan.k, plan.mean_ur), (0, 0.0));
        assert!(validate_plan(&plan, &inst).is_valid());
    }

    #[test]
    fn plan_json_field_names() {
        let inst = single(4, 100, 720, 160);
        let plan = CuttingPlan::new(&inst, vec![Lay::new(vec![4], vec![1])]).unwrap();
        let value = serde_json::to_value(&plan).unwrap();
        let keys: Vec<_> = value.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["instance", "k", "lays", "mean_ur"]);
        let inst_value = serde_json::to_value(&inst).unwrap();
        for key in ["name", "l_ub", "h_ub", "lengths", "demand"] {
            assert!(inst_value.get(key).is_some(), "{key}");
        }
    }
}
