//! Reproducible benchmark instances: ten groups of 30 garment figures by 5
//! fabric types on a 720 x 160 bed, demand drawn uniformly per group.
//!
//! Randomness comes from splitmix64 with rejection sampling, so the same
//! seed gives the same instances on every platform.

use crate::error::{Error, Result};
use crate::model::Instance;

pub const BED_LENGTH: i64 = 720;
pub const BED_HEIGHT: i64 = 160;
pub const DEFAULT_SEED: u64 = 1_000_000;

/// Template lengths of the 30 garment figures (5 styles x 6 sizes).
pub const FIGURE_LENGTHS: [i64; 30] = [
    60, 63, 66, 69, 73, 76, 69, 72, 75, 78, 82, 86, 80, 83, 86, 90, 94, 98, 90, 94, 98, 102, 106,
    110, 99, 103, 107, 111, 115, 120,
];

pub const FABRIC_TYPES: usize = 5;

/// Inclusive demand bounds for one instance group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub name: &'static str,
    pub lb: i64,
    pub ub: i64,
}

pub const GROUPS: [GroupSpec; 10] = [
    GroupSpec { name: "G1", lb: 300, ub: 400 },
    GroupSpec { name: "G2", lb: 300, ub: 600 },
    GroupSpec { name: "G3", lb: 400, ub: 500 },
    GroupSpec { name: "G4", lb: 300, ub: 800 },
    GroupSpec { name: "G5", lb: 400, ub: 700 },
    GroupSpec { name: "G6", lb: 500, ub: 600 },
    GroupSpec { name: "G7", lb: 300, ub: 1000 },
    GroupSpec { name: "G8", lb: 400, ub: 900 },
    GroupSpec { name: "G9", lb: 500, ub: 800 },
    GroupSpec { name: "G10", lb: 600, ub: 700 },
];

/// Looks a group up by name, case-insensitively.
pub fn group(name: &str) -> Result<GroupSpec> {
    GROUPS
        .iter()
        .find(|g| g.name.eq_ignore_ascii_case(name))
        .copied()
        .ok_or_else(|| Error::UnknownGroup(name.to_owned()))
}

/// Parses `all` or a comma-separated list of group names.
pub fn parse_groups(list: &str) -> Result<Vec<GroupSpec>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(GROUPS.to_vec());
    }
    list.split(',').map(|name| group(name.trim())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    pub state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Unbiased draw from `lo..=hi`; outputs at or above the largest
    /// multiple of the range size are rejected.
    pub fn uniform_int(&mut self, lo: i64, hi: i64) -> Result<i64> {
        if lo > hi {
            return Err(Error::EmptyRange { lo, hi });
        }
        let span = (hi as i128 - lo as i128 + 1) as u128;
        let limit = (1u128 << 64) / span * span;
        loop {
            let v = self.next_u64() as u128;
            if v < limit {
                return Ok((lo as i128 + (v % span) as i128) as i64);
            }
        }
    }
}

/// Seed for group `index` when groups are generated independently.
pub fn group_seed(master: u64, index: usize) -> u64 {
    SplitMix64::new(master.wrapping_add(index as u64)).next_u64()
}

/// One instance of `spec`, drawing demand figure by figure, fabric by fabric.
pub fn generate_case(spec: &GroupSpec, rng: &mut SplitMix64) -> Instance {
    let demand = FIGURE_LENGTHS
        .iter()
        .map(|_| {
            (0..FABRIC_TYPES)
                .map(|_| rng.uniform_int(spec.lb, spec.ub).expect("group bounds are ordered"))
                .collect()
        })
        .collect();
    Instance {
        name: spec.name.to_owned(),
        bed_length: BED_LENGTH,
        bed_height: BED_HEIGHT,
        lengths: FIGURE_LENGTHS.to_vec(),
        demand,
    }
}

/// `<group>_case<nn>`, with `case` counted from 1.
pub fn case_name(group: &str, case: usize) -> String {
    format!("{group}_case{case:02}")
}

fn chain(spec: &GroupSpec, cases: usize, rng: &mut SplitMix64) -> Vec<Instance> {
    (1..=cases)
        .map(|n| Instance { name: case_name(spec.name, n), ..generate_case(spec, rng) })
        .collect()
}

pub fn generate_group(spec: &GroupSpec, cases: usize, seed: u64) -> Result<Vec<Instance>> {
    if cases == 0 {
        return Err(Error::NoCases);
    }
    Ok(chain(spec, cases, &mut SplitMix64::new(seed)))
}

/// Several groups from a single stream, in the order given.
pub fn generate_suite(
    specs: &[GroupSpec],
    cases: usize,
    seed: u64,
) -> Result<Vec<(GroupSpec, Vec<Instance>)>> {
    if cases == 0 {
        return Err(Error::NoCases);
    }
    let mut rng = SplitMix64::new(seed);
    Ok(specs.iter().map(|spec| (*spec, chain(spec, cases, &mut rng))).collect())
}

/// Small random instance for property checks: at most 10 figures, 3
/// fabric types, demand up to 50 and a bed of at most 120 x 20.
pub fn desk_case(rng: &mut SplitMix64, name: String) -> Instance {
    let mut draw = |lo: i64, hi: i64| rng.uniform_int(lo, hi).expect("ordered bounds");
    let figures = draw(1, 10) as usize;
    let fabrics = draw(1, 3) as usize;
    let bed_length = draw(20, 120);
    let bed_height = draw(1, 20);
    let lengths = (0..figures).map(|_| draw(1, bed_length)).collect();
    let demand = (0..figures)
        .map(|_| (0..fabrics).map(|_| draw(0, 50)).collect())
        .collect();
    Instance { name, bed_length, bed_height, lengths, demand }
}
