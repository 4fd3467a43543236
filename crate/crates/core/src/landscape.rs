//! Utility landscapes over the binary problem space.
//!
//! A landscape is defined by a small set of representative ideas with known
//! utilities; every other idea gets an inverse-square Hamming-distance weighted
//! average of the representatives. Three layers are built per run:
//!
//! * the **true** table, hidden from agents and used only for scoring;
//! * the **master** table, the group's shared understanding, obtained by
//!   perturbing the representatives with a bias `beta`;
//! * one **individual** table per agent, the master table plus bounded
//!   uniform noise of half-width `xi`.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};

use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::draw_index;
use crate::error::{check_probability, invalid, Result};

/// Largest supported problem-space dimensionality (tables hold `2^M` values).
pub const MAX_BITS: u32 = 20;

/// One point of the `2^M` problem space.
///
/// The integer index reads the bit string as a binary number, most
/// significant bit first, so `"1010"` is index 10.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Idea {
    index: u32,
    len: u32,
}

impl Idea {
    pub fn new(index: u32, len: u32) -> Result<Self> {
        check_bits(len)?;
        if index >= space_size(len) as u32 {
            return invalid(format!("idea index {index} does not fit in {len} bits"));
        }
        Ok(Idea { index, len })
    }

    pub(crate) fn from_index_unchecked(index: u32, len: u32) -> Self {
        debug_assert!(index < (1 << len));
        Idea { index, len }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let len = bits.len() as u32;
        check_bits(len)?;
        let index = bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        Ok(Idea { index, len })
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => invalid(format!("unexpected character {other:?} in bit string")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: u32) -> Self {
        Idea { index: rng.gen_range(0..(1u32 << len)), len }
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit values, most significant first.
    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).rev().map(|i| (self.index >> i) & 1 == 1).collect()
    }

    /// Flips the bits set in `mask`.
    pub fn flip(&self, mask: u32) -> Self {
        Idea { index: (self.index ^ mask) & low_mask(self.len), len: self.len }
    }
}

impl fmt::Display for Idea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub(crate) fn check_bits(len: u32) -> Result<()> {
    if (1..=MAX_BITS).contains(&len) {
        Ok(())
    } else {
        invalid(format!("bit length must be in 1..={MAX_BITS}, got {len}"))
    }
}

pub fn space_size(bits: u32) -> usize {
    1usize << bits
}

fn low_mask(len: u32) -> u32 {
    ((1u64 << len) - 1) as u32
}

pub fn hamming(a: Idea, b: Idea) -> Result<u32> {
    if a.len != b.len {
        return invalid(format!("cannot compare ideas of {} and {} bits", a.len, b.len));
    }
    Ok((a.index ^ b.index).count_ones())
}

/// Mask with each of the low `len` bits set independently with probability `q`.
pub(crate) fn random_flip_mask<R: Rng + ?Sized>(rng: &mut R, len: u32, q: f64) -> u32 {
    let mut mask = 0;
    for bit in 0..len {
        if rng.gen_bool(q) {
            mask |= 1 << bit;
        }
    }
    mask
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentativeSet {
    bits: u32,
    entries: Vec<(Idea, f64)>,
}

impl RepresentativeSet {
    /// Builds a set from explicit entries; ideas must be distinct, share one
    /// length, and carry utilities in `[0, 1]`.
    pub fn new(entries: Vec<(Idea, f64)>) -> Result<Self> {
        let Some(&(first, _)) = entries.first() else {
            return invalid("representative set must not be empty");
        };
        let bits = first.len();
        let mut seen = HashSet::with_capacity(entries.len());
        for &(idea, u) in &entries {
            if idea.len() != bits {
                return invalid("representative ideas must all have the same length");
            }
            if !seen.insert(idea.index()) {
                return invalid(format!("duplicate representative idea {idea}"));
            }
            if !(0.0..=1.0).contains(&u) {
                return invalid(format!("representative utility {u} outside [0, 1]"));
            }
        }
        Ok(RepresentativeSet { bits, entries })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn entries(&self) -> &[(Idea, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Draws `n` distinct random ideas; one gets utility 1, another 0, the rest
/// independent values in the open interval (0, 1).
pub fn generate_representatives<R: Rng + ?Sized>(rng: &mut R, bits: u32, n: usize) -> Result<RepresentativeSet> {
    check_bits(bits)?;
    if n < 2 {
        return invalid(format!("need at least 2 representative ideas, got {n}"));
    }
    if n > space_size(bits) {
        return invalid(format!("{n} distinct representatives do not fit in a {bits}-bit space"));
    }
    let mut seen = HashSet::with_capacity(n);
    let mut ideas = Vec::with_capacity(n);
    while ideas.len() < n {
        let idea = Idea::random(rng, bits);
        if seen.insert(idea.index()) {
            ideas.push(idea);
        }
    }
    let best = draw_index(rng, n);
    let mut worst = draw_index(rng, n - 1);
    if worst >= best {
        worst += 1;
    }
    let entries = ideas
        .into_iter()
        .enumerate()
        .map(|(i, idea)| {
            let u = if i == best {
                1.0
            } else if i == worst {
                0.0
            } else {
                rng.sample(Open01)
            };
            (idea, u)
        })
        .collect();
    Ok(RepresentativeSet { bits, entries })
}

/// Inverse-square Hamming-distance interpolation. Representatives return
/// their stored utility exactly.
pub fn interpolate(set: &RepresentativeSet, v: Idea) -> Result<f64> {
    if v.len() != set.bits {
        return invalid(format!("idea has {} bits, landscape has {}", v.len(), set.bits));
    }
    Ok(interpolate_index(set, v.index()))
}

fn interpolate_index(set: &RepresentativeSet, index: u32) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for &(rep, u) in &set.entries {
        let d = (rep.index() ^ index).count_ones();
        if d == 0 {
            return u;
        }
        let w = 1.0 / f64::from(d * d);
        num += u * w;
        den += w;
    }
    num / den
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    True,
    Master,
    Individual,
}

/// Utility of every idea in the problem space, indexed by idea index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtilityTable {
    kind: TableKind,
    bits: u32,
    values: Vec<f64>,
}

impl UtilityTable {
    pub fn from_values(kind: TableKind, values: Vec<f64>) -> Result<Self> {
        let bits = values.len().trailing_zeros();
        if !values.len().is_power_of_two() || check_bits(bits).is_err() {
            return invalid(format!("table length {} is not 2^M for M in 1..={MAX_BITS}", values.len()));
        }
        if let Some(bad) = values.iter().find(|u| !(0.0..=1.0).contains(*u)) {
            return invalid(format!("utility {bad} outside [0, 1]"));
        }
        Ok(UtilityTable { kind, bits, values })
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idea: Idea) -> f64 {
        self.values[idea.index() as usize]
    }

    pub(crate) fn at(&self, index: u32) -> f64 {
        self.values[index as usize]
    }
}

pub fn build_table(set: &RepresentativeSet, kind: TableKind) -> UtilityTable {
    let values = (0..space_size(set.bits) as u32).map(|i| interpolate_index(set, i)).collect();
    UtilityTable { kind, bits: set.bits, values }
}

/// Perturbs a representative set into the group's biased understanding.
///
/// Each bit flips with probability `0.25 * beta` and each utility moves by a
/// uniform draw from `[-beta, beta]`; utilities are then min-max rescaled to
/// `[0, 1]` (all 0.5 if they collapse to one value). An entry whose flipped
/// idea lands on an earlier entry redraws its flips.
pub fn apply_bias<R: Rng + ?Sized>(set: &RepresentativeSet, beta: f64, rng: &mut R) -> Result<RepresentativeSet> {
    check_probability("bias", beta)?;
    if beta == 0.0 {
        return Ok(set.clone());
    }
    let q = 0.25 * beta;
    let mut taken = HashSet::with_capacity(set.len());
    let mut ideas = Vec::with_capacity(set.len());
    for &(idea, _) in &set.entries {
        let moved = loop {
            let candidate = idea.flip(random_flip_mask(rng, set.bits, q));
            if taken.insert(candidate.index()) {
                break candidate;
            }
        };
        ideas.push(moved);
    }
    let raw: Vec<f64> = set.entries.iter().map(|&(_, u)| u + rng.gen_range(-beta..=beta)).collect();
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let entries = ideas
        .into_iter()
        .zip(raw)
        .map(|(idea, u)| {
            let scaled = if hi > lo { ((u - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.5 };
            (idea, scaled)
        })
        .collect();
    Ok(RepresentativeSet { bits: set.bits, entries })
}

/// Individual perception: each value drawn uniformly from
/// `[max(u - xi, 0), min(u + xi, 1)]` around the master value `u`.
pub fn derive_individual<R: Rng + ?Sized>(master: &UtilityTable, xi: f64, rng: &mut R) -> Result<UtilityTable> {
    check_probability("noise", xi)?;
    let values = master
        .values
        .iter()
        .map(|&u| {
            let lo = (u - xi).max(0.0);
            let hi = (u + xi).min(1.0);
            if hi > lo {
                rng.gen_range(lo..=hi)
            } else {
                lo
            }
        })
        .collect();
    Ok(UtilityTable { kind: TableKind::Individual, bits: master.bits, values })
}

/// The true, master and per-agent utility tables of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandscapeBundle {
    pub true_table: UtilityTable,
    pub master_table: UtilityTable,
    pub bias: f64,
    pub noise: f64,
    pub individual_tables: Vec<UtilityTable>,
}

impl LandscapeBundle {
    /// Draws representatives, biases them, and derives `agents` individual
    /// tables, consuming the generator in that order.
    pub fn generate<R: Rng + ?Sized>(
        rng: &mut R,
        bits: u32,
        representatives: usize,
        bias: f64,
        noise: f64,
        agents: usize,
    ) -> Result<Self> {
        check_probability("bias", bias)?;
        check_probability("noise", noise)?;
        let truth = generate_representatives(rng, bits, representatives)?;
        let true_table = build_table(&truth, TableKind::True);
        let master_table = if bias == 0.0 {
            UtilityTable { kind: TableKind::Master, ..true_table.clone() }
        } else {
            build_table(&apply_bias(&truth, bias, rng)?, TableKind::Master)
        };
        let individual_tables =
            (0..agents).map(|_| derive_individual(&master_table, noise, rng)).collect::<Result<Vec<_>>>()?;
        Ok(LandscapeBundle { true_table, master_table, bias, noise, individual_tables })
    }

    /// Writes `idea_index,true_utility,master_utility,individual_0_utility`
    /// rows for every idea. Requires at least one individual table.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let first = self
            .individual_tables
            .first()
            .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "landscape has no individual tables"))?;
        writeln!(out, "idea_index,true_utility,master_utility,individual_0_utility")?;
        for (i, ((t, m), ind)) in
            self.true_table.values.iter().zip(&self.master_table.values).zip(&first.values).enumerate()
        {
            writeln!(out, "{i},{t},{m},{ind}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    use crate::SimRng;

    fn idea(s: &str) -> Idea {
        Idea::parse(s).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(idea("0000000000"), idea("1111111111")).unwrap(), 10);
        assert_eq!(hamming(idea("0110"), idea("0110")).unwrap(), 0);
        assert_eq!(hamming(idea("1010"), idea("1001")).unwrap(), 2);
        assert!(hamming(idea("101"), idea("1010")).is_err());
    }

    #[test]
    fn idea_index_is_msb_first() {
        assert_eq!(idea("1010").index(), 10);
        assert_eq!(idea("1010").to_string(), "1010");
        assert!(Idea::new(16, 4).is_err());
        assert!(Idea::new(0, 0).is_err());
    }

    #[test]
    fn representatives_full_enumeration() {
        let mut rng = SimRng::seed_from_u64(3);
        let set = generate_representatives(&mut rng, 2, 4).unwrap();
        let mut idx: Vec<u32> = set.entries().iter().map(|(i, _)| i.index()).collect();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2, 3]);
    }

    #[test]
    fn representatives_have_extremes() {
        let mut rng = SimRng::seed_from_u64(11);
        let set = generate_representatives(&mut rng, 10, 10).unwrap();
        assert_eq!(set.len(), 10);
        let us: Vec<f64> = set.entries().iter().map(|e| e.1).collect();
        assert_eq!(us.iter().filter(|&&u| u == 1.0).count(), 1);
        assert_eq!(us.iter().filter(|&&u| u == 0.0).count(), 1);
        assert!(us.iter().all(|u| (0.0..=1.0).contains(u)));
    }

    #[test]
    fn representatives_reject_bad_sizes() {
        let mut rng = SimRng::seed_from_u64(0);
        assert!(generate_representatives(&mut rng, 2, 5).is_err());
        assert!(generate_representatives(&mut rng, 10, 1).is_err());
    }

    #[test]
    fn representatives_are_seed_deterministic() {
        let a = generate_representatives(&mut SimRng::seed_from_u64(5), 10, 10).unwrap();
        let b = generate_representatives(&mut SimRng::seed_from_u64(5), 10, 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn interpolation_examples() {
        let set = RepresentativeSet::new(vec![(idea("00"), 1.0), (idea("11"), 0.0)]).unwrap();
        assert_eq!(interpolate(&set, idea("01")).unwrap(), 0.5);
        assert_eq!(interpolate(&set, idea("00")).unwrap(), 1.0);

        let set = RepresentativeSet::new(vec![(idea("00"), 1.0), (idea("10"), 0.4)]).unwrap();
        assert!((interpolate(&set, idea("01")).unwrap() - 0.88).abs() < 1e-12);
    }

    #[test]
    fn small_table_by_hand() {
        let set = RepresentativeSet::new(vec![(idea("00"), 1.0), (idea("11"), 0.0)]).unwrap();
        let table = build_table(&set, TableKind::True);
        assert_eq!(table.values(), &[1.0, 0.5, 0.5, 0.0]);
        assert_eq!(table.kind(), TableKind::True);
    }

    #[test]
    fn true_table_spans_unit_interval() {
        let mut rng = SimRng::seed_from_u64(2);
        let set = generate_representatives(&mut rng, 10, 10).unwrap();
        let table = build_table(&set, TableKind::True);
        assert_eq!(table.values().len(), 1024);
        let max = table.values().iter().copied().fold(f64::MIN, f64::max);
        let min = table.values().iter().copied().fold(f64::MAX, f64::min);
        assert_eq!((min, max), (0.0, 1.0));
        for &(rep, u) in set.entries() {
            assert_eq!(table.get(rep), u);
        }
    }

    #[test]
    fn zero_bias_is_identity() {
        let mut rng = SimRng::seed_from_u64(8);
        let set = generate_representatives(&mut rng, 10, 10).unwrap();
        assert_eq!(apply_bias(&set, 0.0, &mut rng).unwrap(), set);
        assert!(apply_bias(&set, 1.5, &mut rng).is_err());
        assert!(apply_bias(&set, -0.1, &mut rng).is_err());
    }

    #[test]
    fn biased_set_stays_valid() {
        let mut rng = SimRng::seed_from_u64(9);
        for _ in 0..200 {
            let set = generate_representatives(&mut rng, 4, 10).unwrap();
            let biased = apply_bias(&set, 1.0, &mut rng).unwrap();
            // distinctness and range are re-checked by the validating constructor
            RepresentativeSet::new(biased.entries().to_vec()).unwrap();
            let us: Vec<f64> = biased.entries().iter().map(|e| e.1).collect();
            assert!(us.contains(&0.0) && us.contains(&1.0));
        }
    }

    #[test]
    fn bias_flip_rate_matches_quarter_beta() {
        let mut rng = SimRng::seed_from_u64(10);
        let set = generate_representatives(&mut rng, 10, 10).unwrap();
        let mut flipped = 0u64;
        let mut total = 0u64;
        // 10^5 bit trials
        for _ in 0..1000 {
            let biased = apply_bias(&set, 0.4, &mut rng).unwrap();
            for (a, b) in set.entries().iter().zip(biased.entries()) {
                flipped += u64::from(hamming(a.0, b.0).unwrap());
                total += 10;
            }
        }
        let rate = flipped as f64 / total as f64;
        assert!((rate - 0.10).abs() < 0.01, "flip rate {rate}");
    }

    #[test]
    fn individual_noise_examples() {
        let master = UtilityTable::from_values(TableKind::Master, vec![0.9, 0.1, 0.5, 0.0]).unwrap();
        let mut rng = SimRng::seed_from_u64(4);
        let same = derive_individual(&master, 0.0, &mut rng).unwrap();
        assert_eq!(same.values(), master.values());
        assert_eq!(same.kind(), TableKind::Individual);
        for _ in 0..1000 {
            let t = derive_individual(&master, 0.2, &mut rng).unwrap();
            assert!((0.7..=1.0).contains(&t.values()[0]));
            let full = derive_individual(&master, 1.0, &mut rng).unwrap();
            assert!(full.values().iter().all(|u| (0.0..=1.0).contains(u)));
        }
        assert!(derive_individual(&master, 1.01, &mut rng).is_err());
    }

    #[test]
    fn bundle_with_zero_bias_copies_truth() {
        let mut rng = SimRng::seed_from_u64(12);
        let b = LandscapeBundle::generate(&mut rng, 10, 10, 0.0, 0.2, 3).unwrap();
        assert_eq!(b.true_table.values(), b.master_table.values());
        assert_eq!(b.master_table.kind(), TableKind::Master);
        assert_eq!(b.individual_tables.len(), 3);
    }

    #[test]
    fn landscape_csv_layout() {
        let mut rng = SimRng::seed_from_u64(1);
        let b = LandscapeBundle::generate(&mut rng, 3, 4, 0.3, 0.0, 1).unwrap();
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "idea_index,true_utility,master_utility,individual_0_utility");
        assert_eq!(lines.len(), 9);
        for (i, line) in lines[1..].iter().enumerate() {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[0], i.to_string());
            assert_eq!(cols[2], cols[3]);
        }
    }
}
