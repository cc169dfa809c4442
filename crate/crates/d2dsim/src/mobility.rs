//! Region-migration statistics and the per-user next-region index.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ids::{RegionId, UserId};
use crate::propagation::PreferenceRow;
use crate::trace::{migration_pairs, AssociationEvent};

/// How raw migration counts are normalized into the migration index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NormalizationMode {
    /// Divide by the total inflow of the destination region (the literal
    /// formula in the source material).
    PaperColumn,
    /// Divide by the total outflow of the source region (row-stochastic).
    Row,
}

impl NormalizationMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper_column" => Ok(NormalizationMode::PaperColumn),
            "row" => Ok(NormalizationMode::Row),
            other => Err(Error::Config(format!(
                "unknown migration normalization mode `{other}`"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NormalizationMode::PaperColumn => "paper_column",
            NormalizationMode::Row => "row",
        }
    }
}

/// Migration counts between region pairs in the previous slot, plus their
/// normalized form. Self pairs are included.
#[derive(Clone, Debug)]
pub struct MigrationMatrix {
    pub mode: NormalizationMode,
    counts: HashMap<(RegionId, RegionId), u64>,
    normalized: HashMap<(RegionId, RegionId), f64>,
    /// Destinations reachable from each source, sorted.
    outgoing: HashMap<RegionId, Vec<RegionId>>,
}

impl MigrationMatrix {
    pub fn count(&self, from: RegionId, to: RegionId) -> u64 {
        self.counts.get(&(from, to)).copied().unwrap_or(0)
    }

    pub fn normalized(&self, from: RegionId, to: RegionId) -> f64 {
        self.normalized.get(&(from, to)).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn destinations_from(&self, from: RegionId) -> &[RegionId] {
        self.outgoing.get(&from).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter_normalized(&self) -> impl Iterator<Item = (RegionId, RegionId, f64)> + '_ {
        self.normalized.iter().map(|(&(r, s), &x)| (r, s, x))
    }
}

/// Builds the migration index from observed `(from, to)` region pairs.
pub fn migration_index(pairs: &[(RegionId, RegionId)], mode: NormalizationMode) -> MigrationMatrix {
    let mut counts: HashMap<(RegionId, RegionId), u64> = HashMap::new();
    let mut col_sums: HashMap<RegionId, u64> = HashMap::new();
    let mut row_sums: HashMap<RegionId, u64> = HashMap::new();
    for &(from, to) in pairs {
        *counts.entry((from, to)).or_insert(0) += 1;
        *col_sums.entry(to).or_insert(0) += 1;
        *row_sums.entry(from).or_insert(0) += 1;
    }
    let mut normalized = HashMap::with_capacity(counts.len());
    let mut outgoing: HashMap<RegionId, Vec<RegionId>> = HashMap::new();
    for (&(from, to), &n) in &counts {
        let denom = match mode {
            NormalizationMode::PaperColumn => col_sums[&to],
            NormalizationMode::Row => row_sums[&from],
        };
        normalized.insert((from, to), n as f64 / denom as f64);
        outgoing.entry(from).or_default().push(to);
    }
    for dests in outgoing.values_mut() {
        dests.sort_unstable();
    }
    MigrationMatrix {
        mode,
        counts,
        normalized,
        outgoing,
    }
}

/// Migration pairs whose arrival falls inside slot `slot`.
pub fn migration_pairs_in_slot(
    events: &[AssociationEvent],
    slot: u64,
    slot_length_s: u64,
) -> Vec<(RegionId, RegionId)> {
    migration_pairs(events)
        .into_iter()
        .filter(|&(_, _, _, arrival)| arrival / slot_length_s == slot)
        .map(|(_, from, to, _)| (from, to))
        .collect()
}

/// Where user `u` will likely be next slot: migration statistics out of the
/// user's last region, reweighted by personal preference. Falls back to the
/// preference row when the migration support is empty, then to a uniform
/// distribution over the regions the user visited in the previous slot.
pub fn mobility_index(
    migration: &MigrationMatrix,
    preference: &PreferenceRow,
    last_region: Option<RegionId>,
    visited_last_slot: &[RegionId],
) -> PreferenceRow {
    if let Some(r0) = last_region {
        let mut row: PreferenceRow = preference
            .iter()
            .map(|(&r, &p)| (r, migration.normalized(r0, r) * p))
            .filter(|&(_, w)| w > 0.0)
            .collect();
        let total: f64 = row.values().sum();
        if total > 0.0 {
            for w in row.values_mut() {
                *w /= total;
            }
            return row;
        }
    }
    if !preference.is_empty() {
        return preference.clone();
    }
    if !visited_last_slot.is_empty() {
        let mut row = PreferenceRow::new();
        for &r in visited_last_slot {
            row.insert(r, 0.0);
        }
        let w = 1.0 / row.len() as f64;
        for v in row.values_mut() {
            *v = w;
        }
        return row;
    }
    PreferenceRow::new()
}

/// Per-user mobility rows and last-seen regions for one slot.
#[derive(Clone, Debug, Default)]
pub struct MobilityTable {
    rows: Vec<PreferenceRow>,
    last_region: Vec<Option<RegionId>>,
}

impl MobilityTable {
    pub fn new(n_users: usize) -> Self {
        MobilityTable {
            rows: vec![PreferenceRow::new(); n_users],
            last_region: vec![None; n_users],
        }
    }

    pub fn set_row(&mut self, u: UserId, row: PreferenceRow, last: Option<RegionId>) {
        self.rows[u.index()] = row;
        self.last_region[u.index()] = last;
    }

    pub fn row(&self, u: UserId) -> &PreferenceRow {
        static EMPTY: PreferenceRow = PreferenceRow::new();
        self.rows.get(u.index()).unwrap_or(&EMPTY)
    }

    pub fn get(&self, u: UserId, r: RegionId) -> f64 {
        self.row(u).get(&r).copied().unwrap_or(0.0)
    }

    pub fn last_region(&self, u: UserId) -> Option<RegionId> {
        self.last_region.get(u.index()).copied().flatten()
    }

    pub fn n_users(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(u32, f64)]) -> PreferenceRow {
        entries.iter().map(|&(r, p)| (RegionId(r), p)).collect()
    }

    #[test]
    fn single_user_path_counts_one_pair() {
        let pairs = vec![(RegionId(0), RegionId(1))];
        let m = migration_index(&pairs, NormalizationMode::PaperColumn);
        assert_eq!(m.count(RegionId(0), RegionId(1)), 1);
        assert_eq!(m.count(RegionId(1), RegionId(0)), 0);
        assert_eq!(m.normalized(RegionId(0), RegionId(1)), 1.0);
    }

    #[test]
    fn paper_column_normalizes_by_destination_inflow() {
        let pairs = vec![
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(1)),
            (RegionId(2), RegionId(1)),
        ];
        let m = migration_index(&pairs, NormalizationMode::PaperColumn);
        assert!((m.normalized(RegionId(0), RegionId(1)) - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.normalized(RegionId(2), RegionId(1)) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn row_mode_normalizes_by_source_outflow() {
        let pairs = vec![
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(1)),
            (RegionId(2), RegionId(1)),
        ];
        let m = migration_index(&pairs, NormalizationMode::Row);
        assert_eq!(m.normalized(RegionId(0), RegionId(1)), 1.0);
        assert_eq!(m.normalized(RegionId(2), RegionId(1)), 1.0);
    }

    #[test]
    fn self_pairs_are_counted() {
        let pairs = vec![(RegionId(3), RegionId(3))];
        let m = migration_index(&pairs, NormalizationMode::Row);
        assert_eq!(m.count(RegionId(3), RegionId(3)), 1);
        assert_eq!(m.normalized(RegionId(3), RegionId(3)), 1.0);
    }

    #[test]
    fn unknown_mode_is_an_error() {
        assert!(NormalizationMode::parse("paper_column").is_ok());
        assert!(NormalizationMode::parse("row").is_ok());
        assert!(NormalizationMode::parse("diag").is_err());
    }

    #[test]
    fn uniform_migration_row_yields_preference() {
        let pairs = vec![
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(2)),
        ];
        let m = migration_index(&pairs, NormalizationMode::Row);
        let pref = row(&[(1, 0.3), (2, 0.7)]);
        let q = mobility_index(&m, &pref, Some(RegionId(0)), &[]);
        assert!((q[&RegionId(1)] - 0.3).abs() < 1e-9);
        assert!((q[&RegionId(2)] - 0.7).abs() < 1e-9);
    }

    #[test]
    fn uniform_preference_yields_migration_weights() {
        // Ebar row (0.8, 0.2) via row mode: 4 transitions to r1, 1 to r2
        let pairs = vec![
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(2)),
        ];
        let m = migration_index(&pairs, NormalizationMode::Row);
        let pref = row(&[(1, 0.5), (2, 0.5)]);
        let q = mobility_index(&m, &pref, Some(RegionId(0)), &[]);
        assert!((q[&RegionId(1)] - 0.8).abs() < 1e-9);
        assert!((q[&RegionId(2)] - 0.2).abs() < 1e-9);
    }

    #[test]
    fn symmetric_inputs_stay_symmetric() {
        let pairs = vec![(RegionId(0), RegionId(1)), (RegionId(0), RegionId(2))];
        let m = migration_index(&pairs, NormalizationMode::Row);
        let pref = row(&[(1, 0.5), (2, 0.5)]);
        let q = mobility_index(&m, &pref, Some(RegionId(0)), &[]);
        assert!((q[&RegionId(1)] - 0.5).abs() < 1e-9);
        assert!((q[&RegionId(2)] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn empty_support_falls_back_to_preference() {
        let m = migration_index(&[], NormalizationMode::PaperColumn);
        let pref = row(&[(0, 0.25), (1, 0.75)]);
        let q = mobility_index(&m, &pref, Some(RegionId(5)), &[]);
        assert_eq!(q, pref);
        // unknown last region behaves the same
        let q2 = mobility_index(&m, &pref, None, &[]);
        assert_eq!(q2, pref);
    }

    #[test]
    fn empty_preference_falls_back_to_visited() {
        let m = migration_index(&[], NormalizationMode::PaperColumn);
        let q = mobility_index(&m, &PreferenceRow::new(), None, &[RegionId(1), RegionId(4)]);
        assert!((q[&RegionId(1)] - 0.5).abs() < 1e-12);
        assert!((q[&RegionId(4)] - 0.5).abs() < 1e-12);
        let empty = mobility_index(&m, &PreferenceRow::new(), None, &[]);
        assert!(empty.is_empty());
    }

    #[test]
    fn zero_products_stay_zero() {
        let pairs = vec![(RegionId(0), RegionId(1))];
        let m = migration_index(&pairs, NormalizationMode::Row);
        let pref = row(&[(1, 0.5), (2, 0.5)]);
        let q = mobility_index(&m, &pref, Some(RegionId(0)), &[]);
        // r2 has no migration support: dropped from the row entirely
        assert_eq!(q.get(&RegionId(2)), None);
        assert_eq!(q[&RegionId(1)], 1.0);
    }

    #[test]
    fn scale_invariance() {
        let pairs = vec![
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(2)),
        ];
        let m = migration_index(&pairs, NormalizationMode::Row);
        let pref = row(&[(1, 0.2), (2, 0.4)]);
        let scaled = row(&[(1, 0.2 * 7.0), (2, 0.4 * 7.0)]);
        let q1 = mobility_index(&m, &pref, Some(RegionId(0)), &[]);
        let q2 = mobility_index(&m, &scaled, Some(RegionId(0)), &[]);
        for (r, v) in &q1 {
            assert!((v - q2[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_sum_to_one_when_support_nonempty() {
        let pairs = vec![
            (RegionId(0), RegionId(1)),
            (RegionId(0), RegionId(2)),
            (RegionId(3), RegionId(2)),
        ];
        for mode in [NormalizationMode::PaperColumn, NormalizationMode::Row] {
            let m = migration_index(&pairs, mode);
            let pref = row(&[(1, 0.1), (2, 0.6), (3, 0.3)]);
            let q = mobility_index(&m, &pref, Some(RegionId(0)), &[]);
            let sum: f64 = q.values().sum();
            assert!((sum - 1.0).abs() < 1e-9, "mode {mode:?} sum {sum}");
        }
    }
}
