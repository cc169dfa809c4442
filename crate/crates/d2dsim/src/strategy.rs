//! Replication policies: candidate construction and gain-weighted selection
//! for the proposed strategy, the movement- and popularity-based baselines,
//! the global objective, and an exact optimizer for tiny instances.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ids::{ContentId, RegionId, UserId};
use crate::propagation::PreferenceRow;

/// Per-user resource limits: cache slots and demand uploads per slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeerParams {
    pub cache_capacity: usize,
    pub upload_capacity: u32,
}

impl Default for PeerParams {
    fn default() -> Self {
        PeerParams {
            cache_capacity: 20,
            upload_capacity: 5,
        }
    }
}

/// Which replication policy drives a run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StrategyKind {
    Proposed,
    Movement,
    Popularity,
}

impl StrategyKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "proposed" => Ok(StrategyKind::Proposed),
            "movement" => Ok(StrategyKind::Movement),
            "popularity" => Ok(StrategyKind::Popularity),
            other => Err(Error::Config(format!("unknown strategy `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Proposed => "proposed",
            StrategyKind::Movement => "movement",
            StrategyKind::Popularity => "popularity",
        }
    }

    pub fn all() -> [StrategyKind; 3] {
        [
            StrategyKind::Proposed,
            StrategyKind::Movement,
            StrategyKind::Popularity,
        ]
    }
}

/// Contents worth replicating for `u`: predicted demand somewhere the user
/// may go.
pub fn candidate_set(
    q_row: &PreferenceRow,
    demand: &HashMap<ContentId, BTreeMap<RegionId, f64>>,
) -> BTreeSet<ContentId> {
    let mut out = BTreeSet::new();
    for (&c, a_row) in demand {
        let hit = a_row
            .iter()
            .any(|(r, &a)| a > 0.0 && q_row.get(r).copied().unwrap_or(0.0) > 0.0);
        if hit {
            out.insert(c);
        }
    }
    out
}

/// Expected demand matched if `u` carries a content with regional demand
/// `a_row`.
pub fn replica_gain(q_row: &PreferenceRow, a_row: &BTreeMap<RegionId, f64>) -> f64 {
    q_row
        .iter()
        .map(|(r, &q)| q * a_row.get(r).copied().unwrap_or(0.0))
        .sum()
}

/// Weighted sampling without replacement via exponential sort keys: the
/// resulting distribution equals drawing items one by one with probability
/// proportional to weight and renormalizing after each draw. Items are
/// consumed in the given order, one rng draw each, so the outcome is
/// deterministic under a seeded rng and invariant to scaling all weights.
pub fn weighted_sample_without_replacement<I, T>(items: I, k: usize, rng: &mut impl Rng) -> Vec<T>
where
    I: IntoIterator<Item = (T, f64)>,
{
    if k == 0 {
        return Vec::new();
    }
    // keep the k largest keys ln(u)/w; a simple vec beats a heap at cache
    // sizes in the tens
    let mut best: Vec<(f64, T)> = Vec::with_capacity(k + 1);
    for (item, w) in items {
        debug_assert!(w >= 0.0, "negative sampling weight");
        if w <= 0.0 {
            continue;
        }
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let key = u.ln() / w;
        if best.len() < k {
            best.push((key, item));
            if best.len() == k {
                best.sort_by(|a, b| b.0.total_cmp(&a.0));
            }
        } else if key > best[k - 1].0 {
            let pos = best.partition_point(|e| e.0 > key);
            best.insert(pos, (key, item));
            best.pop();
        }
    }
    if best.len() < k {
        best.sort_by(|a, b| b.0.total_cmp(&a.0));
    }
    best.into_iter().map(|(_, item)| item).collect()
}

/// Chooses the contents user `u` replicates this slot from the union of its
/// previous cache and current candidates, each entry carrying its gain.
/// Positive-gain items are drawn gain-proportionally without replacement;
/// zero-gain items (previously cached content whose demand vanished) are
/// only used to fill leftover capacity, uniformly.
pub fn select_replicas(
    items: &BTreeMap<ContentId, f64>,
    capacity: usize,
    rng: &mut impl Rng,
) -> BTreeSet<ContentId> {
    let positives = items.iter().filter(|(_, &g)| g > 0.0).map(|(&c, &g)| (c, g));
    let mut selected: BTreeSet<ContentId> =
        weighted_sample_without_replacement(positives, capacity, rng)
            .into_iter()
            .collect();
    if selected.len() < capacity {
        let mut zeros: Vec<ContentId> = items
            .iter()
            .filter(|(_, &g)| g <= 0.0)
            .map(|(&c, _)| c)
            .collect();
        zeros.shuffle(rng);
        for c in zeros.into_iter().take(capacity - selected.len()) {
            selected.insert(c);
        }
    }
    selected
}

/// One draw proportional to weight; all-zero weights degrade to a uniform
/// choice. Returns `None` on empty input.
pub fn weighted_pick<T: Copy>(items: &[(T, f64)], rng: &mut impl Rng) -> Option<T> {
    if items.is_empty() {
        return None;
    }
    let total: f64 = items.iter().map(|&(_, w)| w.max(0.0)).sum();
    if total <= 0.0 {
        return Some(items[rng.gen_range(0..items.len())].0);
    }
    let mut x = rng.gen_range(0.0..total);
    for &(item, w) in items {
        let w = w.max(0.0);
        if x < w {
            return Some(item);
        }
        x -= w;
    }
    Some(items[items.len() - 1].0)
}

/// Contact bookkeeping for the movement-based baseline: how many distinct
/// users each user has shared a region with.
#[derive(Clone, Debug, Default)]
pub struct ContactIndex {
    contacts: Vec<BTreeSet<UserId>>,
}

impl ContactIndex {
    pub fn new(n_users: usize) -> Self {
        ContactIndex {
            contacts: vec![BTreeSet::new(); n_users],
        }
    }

    /// All members were co-located for one slot.
    pub fn record_colocation(&mut self, members: &[UserId]) {
        for &a in members {
            for &b in members {
                if a != b {
                    self.contacts[a.index()].insert(b);
                }
            }
        }
    }

    pub fn count(&self, u: UserId) -> usize {
        self.contacts.get(u.index()).map(BTreeSet::len).unwrap_or(0)
    }
}

/// Movement-based carrier choice: a user with more distinct past contacts is
/// proportionally more likely to carry the content.
pub fn movement_based_pick_carrier(
    contact_index: &ContactIndex,
    eligible: &[UserId],
    rng: &mut impl Rng,
) -> Option<UserId> {
    let weights: Vec<(UserId, f64)> = eligible
        .iter()
        .map(|&u| (u, contact_index.count(u) as f64))
        .collect();
    weighted_pick(&weights, rng)
}

/// Popularity-based offer: the holder picks one cached item proportionally
/// to the requests it has observed for it.
pub fn popularity_based_offer(
    cached: &[(ContentId, u64)],
    rng: &mut impl Rng,
) -> Option<ContentId> {
    let weights: Vec<(ContentId, f64)> = cached.iter().map(|&(c, n)| (c, n as f64)).collect();
    weighted_pick(&weights, rng)
}

/// Popularity-based accept rule for a full cache: the incoming item must beat
/// the least requested cached item, which gets evicted.
pub enum OfferDecision {
    Accept { evict: Option<ContentId> },
    Reject,
}

pub fn popularity_based_accept(
    receiver_cache: &[(ContentId, u64)],
    incoming: ContentId,
    incoming_count: u64,
    capacity: usize,
) -> OfferDecision {
    if receiver_cache.iter().any(|&(c, _)| c == incoming) {
        return OfferDecision::Reject;
    }
    if receiver_cache.len() < capacity {
        return OfferDecision::Accept { evict: None };
    }
    let min = receiver_cache.iter().min_by_key(|&&(c, n)| (n, c));
    match min {
        Some(&(c, n)) if incoming_count > n => OfferDecision::Accept { evict: Some(c) },
        _ => OfferDecision::Reject,
    }
}

/// Frozen per-slot instance for objective evaluation and the exact optimizer.
/// Tables are dense: small instances only.
#[derive(Clone, Debug)]
pub struct InstanceSnapshot {
    pub n_users: usize,
    pub n_contents: usize,
    pub n_regions: usize,
    /// `mobility[u][r]`
    pub mobility: Vec<Vec<f64>>,
    /// `demand[c][r]`
    pub demand: Vec<Vec<f64>>,
    pub cache_capacity: Vec<usize>,
    pub upload_capacity: Vec<f64>,
}

impl InstanceSnapshot {
    /// Expected matched demand if `u` carries `c`, before the altruism factor.
    pub fn gain(&self, u: usize, c: usize) -> f64 {
        (0..self.n_regions)
            .map(|r| self.mobility[u][r] * self.demand[c][r])
            .sum()
    }
}

/// Which user carries which content in one slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplicationAssignment {
    /// `carries[u][c]`
    pub carries: Vec<Vec<bool>>,
}

impl ReplicationAssignment {
    pub fn empty(n_users: usize, n_contents: usize) -> Self {
        ReplicationAssignment {
            carries: vec![vec![false; n_contents]; n_users],
        }
    }

    pub fn cached_count(&self, u: usize) -> usize {
        self.carries[u].iter().filter(|&&b| b).count()
    }
}

/// Objective value and constraint violations of an assignment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObjectiveReport {
    pub objective: f64,
    /// Users whose cache capacity is exceeded.
    pub cap_violations: Vec<UserId>,
    /// `(content, region)` cells where placed upload capacity exceeds the
    /// popularity estimate.
    pub popularity_violations: Vec<(ContentId, RegionId)>,
}

const POPULARITY_SLACK: f64 = 1e-9;

/// Total replication gain of `assignment` plus its capacity and popularity
/// constraint violations.
pub fn evaluate_objective(
    assignment: &ReplicationAssignment,
    snapshot: &InstanceSnapshot,
) -> ObjectiveReport {
    let mut report = ObjectiveReport::default();
    for u in 0..snapshot.n_users {
        let mut count = 0;
        for c in 0..snapshot.n_contents {
            if assignment.carries[u][c] {
                count += 1;
                report.objective += snapshot.upload_capacity[u] * snapshot.gain(u, c);
            }
        }
        if count > snapshot.cache_capacity[u] {
            report.cap_violations.push(UserId(u as u32));
        }
    }
    for c in 0..snapshot.n_contents {
        for r in 0..snapshot.n_regions {
            let placed: f64 = (0..snapshot.n_users)
                .filter(|&u| assignment.carries[u][c])
                .map(|u| snapshot.mobility[u][r] * snapshot.upload_capacity[u])
                .sum();
            if placed > snapshot.demand[c][r] + POPULARITY_SLACK {
                report
                    .popularity_violations
                    .push((ContentId(c as u32), RegionId(r as u32)));
            }
        }
    }
    report
}

/// Hard limit on `n_users * n_contents` for the exact optimizer.
pub const EXACT_OPTIMIZER_LIMIT: usize = 24;

/// Exhaustive 0/1 search maximizing the replication gain subject to both
/// constraints, with capacity/popularity pruning and a positive-gain suffix
/// bound. Ties resolve to the lexicographically smallest assignment in
/// user-major variable order.
pub fn exact_optimize(snapshot: &InstanceSnapshot) -> Result<(ReplicationAssignment, f64)> {
    let vars = snapshot.n_users * snapshot.n_contents;
    if vars > EXACT_OPTIMIZER_LIMIT {
        return Err(Error::InstanceTooLarge {
            vars,
            limit: EXACT_OPTIMIZER_LIMIT,
        });
    }
    let nu = snapshot.n_users;
    let nc = snapshot.n_contents;
    let nr = snapshot.n_regions;

    // per-variable weighted gain, variable k = u * nc + c
    let var_gain: Vec<f64> = (0..vars)
        .map(|k| snapshot.upload_capacity[k / nc] * snapshot.gain(k / nc, k % nc))
        .collect();
    // admissible bound: sum of positive gains from k onward
    let mut suffix_bound = vec![0.0; vars + 1];
    for k in (0..vars).rev() {
        suffix_bound[k] = suffix_bound[k + 1] + var_gain[k].max(0.0);
    }

    struct Search<'a> {
        snap: &'a InstanceSnapshot,
        nc: usize,
        nr: usize,
        var_gain: &'a [f64],
        suffix_bound: &'a [f64],
        chosen: Vec<bool>,
        user_count: Vec<usize>,
        load: Vec<f64>, // load[c * nr + r]
        best_obj: f64,
        best: Option<Vec<bool>>,
    }

    impl Search<'_> {
        fn dfs(&mut self, k: usize, objective: f64) {
            if objective + self.suffix_bound[k] <= self.best_obj && self.best.is_some() {
                return;
            }
            if k == self.chosen.len() {
                if self.best.is_none() || objective > self.best_obj {
                    self.best_obj = objective;
                    self.best = Some(self.chosen.clone());
                }
                return;
            }
            let (u, c) = (k / self.nc, k % self.nc);

            // zero branch first: first optimum found is lexicographically
            // smallest
            self.dfs(k + 1, objective);

            if self.user_count[u] >= self.snap.cache_capacity[u] {
                return;
            }
            let beta = self.snap.upload_capacity[u];
            let feasible = (0..self.nr).all(|r| {
                self.load[c * self.nr + r] + self.snap.mobility[u][r] * beta
                    <= self.snap.demand[c][r] + POPULARITY_SLACK
            });
            if !feasible {
                return;
            }
            self.chosen[k] = true;
            self.user_count[u] += 1;
            for r in 0..self.nr {
                self.load[c * self.nr + r] += self.snap.mobility[u][r] * beta;
            }
            self.dfs(k + 1, objective + self.var_gain[k]);
            self.chosen[k] = false;
            self.user_count[u] -= 1;
            for r in 0..self.nr {
                self.load[c * self.nr + r] -= self.snap.mobility[u][r] * beta;
            }
        }
    }

    let mut search = Search {
        snap: snapshot,
        nc,
        nr,
        var_gain: &var_gain,
        suffix_bound: &suffix_bound,
        chosen: vec![false; vars],
        user_count: vec![0; nu],
        load: vec![0.0; nc * nr],
        best_obj: f64::NEG_INFINITY,
        best: None,
    };
    search.dfs(0, 0.0);

    let flat = search.best.expect("all-zero assignment is always feasible");
    let mut assignment = ReplicationAssignment::empty(nu, nc);
    for (k, &bit) in flat.iter().enumerate() {
        assignment.carries[k / nc][k % nc] = bit;
    }
    Ok((assignment, search.best_obj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q_row(entries: &[(u32, f64)]) -> PreferenceRow {
        entries.iter().map(|&(r, p)| (RegionId(r), p)).collect()
    }

    fn demand_table(
        rows: &[(u32, &[(u32, f64)])],
    ) -> HashMap<ContentId, BTreeMap<RegionId, f64>> {
        rows.iter()
            .map(|&(c, cells)| {
                (
                    ContentId(c),
                    cells.iter().map(|&(r, a)| (RegionId(r), a)).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn candidate_set_empty_mobility() {
        let demand = demand_table(&[(0, &[(0, 1.0)])]);
        assert!(candidate_set(&PreferenceRow::new(), &demand).is_empty());
    }

    #[test]
    fn candidate_set_single_overlap() {
        let demand = demand_table(&[(0, &[(1, 2.0)])]);
        let q = q_row(&[(1, 1.0)]);
        let set = candidate_set(&q, &demand);
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![ContentId(0)]);
    }

    #[test]
    fn candidate_set_matches_brute_force() {
        let demand = demand_table(&[
            (0, &[(0, 1.0), (1, 0.0)]),
            (1, &[(0, 0.0), (1, 3.0)]),
            (2, &[(0, 0.0), (1, 0.0)]),
        ]);
        let q = q_row(&[(0, 0.0), (1, 0.6)]);
        let got = candidate_set(&q, &demand);

        let mut expect = BTreeSet::new();
        for (&c, a_row) in &demand {
            for r in [RegionId(0), RegionId(1)] {
                let a = a_row.get(&r).copied().unwrap_or(0.0);
                let qv = q.get(&r).copied().unwrap_or(0.0);
                if a > 0.0 && qv > 0.0 {
                    expect.insert(c);
                }
            }
        }
        assert_eq!(got, expect);
        assert_eq!(got.into_iter().collect::<Vec<_>>(), vec![ContentId(1)]);
    }

    #[test]
    fn replica_gain_zero_demand_column() {
        let q = q_row(&[(0, 1.0)]);
        let a = BTreeMap::new();
        assert_eq!(replica_gain(&q, &a), 0.0);
    }

    #[test]
    fn replica_gain_arithmetic() {
        let q = q_row(&[(0, 1.0), (1, 0.0)]);
        let a: BTreeMap<RegionId, f64> =
            [(RegionId(0), 3.0), (RegionId(1), 7.0)].into_iter().collect();
        assert_eq!(replica_gain(&q, &a), 3.0);

        let q2 = q_row(&[(0, 0.5), (1, 0.5)]);
        let a2: BTreeMap<RegionId, f64> =
            [(RegionId(0), 2.0), (RegionId(1), 4.0)].into_iter().collect();
        assert_eq!(replica_gain(&q2, &a2), 3.0);
    }

    #[test]
    fn select_all_positive_when_space() {
        let items: BTreeMap<ContentId, f64> = [
            (ContentId(0), 2.0),
            (ContentId(1), 0.0),
            (ContentId(2), 1.0),
        ]
        .into_iter()
        .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sel = select_replicas(&items, 5, &mut rng);
        assert!(sel.contains(&ContentId(0)));
        assert!(sel.contains(&ContentId(2)));
        // leftover capacity filled with the zero-gain item
        assert!(sel.contains(&ContentId(1)));
    }

    #[test]
    fn zero_gain_never_displaces_positive() {
        let items: BTreeMap<ContentId, f64> =
            [(ContentId(0), 1.0), (ContentId(1), 0.0)].into_iter().collect();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sel = select_replicas(&items, 1, &mut rng);
            assert_eq!(sel.into_iter().collect::<Vec<_>>(), vec![ContentId(0)]);
        }
    }

    #[test]
    fn selection_respects_capacity() {
        let items: BTreeMap<ContentId, f64> =
            (0..10).map(|c| (ContentId(c), 1.0 + c as f64)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(select_replicas(&items, 4, &mut rng).len(), 4);
        assert_eq!(select_replicas(&items, 0, &mut rng).len(), 0);
    }

    #[test]
    fn single_draw_matches_gain_proportions() {
        let items: BTreeMap<ContentId, f64> =
            [(ContentId(0), 3.0), (ContentId(1), 1.0)].into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = 100_000;
        let mut first = 0usize;
        for _ in 0..trials {
            let sel = select_replicas(&items, 1, &mut rng);
            if sel.contains(&ContentId(0)) {
                first += 1;
            }
        }
        let freq = first as f64 / trials as f64;
        assert!(
            (freq - 0.75).abs() < 0.01,
            "pick frequency {freq} should be within 1% of 0.75"
        );
    }

    #[test]
    fn selection_scale_invariant_per_seed() {
        let items: BTreeMap<ContentId, f64> = (0..30)
            .map(|c| (ContentId(c), 0.1 + (c % 7) as f64))
            .collect();
        let scaled: BTreeMap<ContentId, f64> =
            items.iter().map(|(&c, &g)| (c, g * 1234.5)).collect();
        for seed in 0..20 {
            let mut r1 = ChaCha8Rng::seed_from_u64(seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(
                select_replicas(&items, 8, &mut r1),
                select_replicas(&scaled, 8, &mut r2)
            );
        }
    }

    #[test]
    fn without_replacement_no_duplicates() {
        let items: Vec<(u32, f64)> = (0..6).map(|i| (i, 1.0 + i as f64)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let sample = weighted_sample_without_replacement(items.iter().copied(), 4, &mut rng);
            let set: BTreeSet<u32> = sample.iter().copied().collect();
            assert_eq!(set.len(), 4);
        }
    }

    #[test]
    fn movement_single_candidate_always_chosen() {
        let mut idx = ContactIndex::new(3);
        idx.record_colocation(&[UserId(0), UserId(1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let got = movement_based_pick_carrier(&idx, &[UserId(2)], &mut rng);
        assert_eq!(got, Some(UserId(2)));
    }

    #[test]
    fn movement_pick_follows_contact_index() {
        let mut idx = ContactIndex::new(11);
        // user 0 contacts 9 distinct users, user 1 contacts 1
        for v in 2..11 {
            idx.record_colocation(&[UserId(0), UserId(v)]);
        }
        idx.record_colocation(&[UserId(1), UserId(2)]);
        assert_eq!(idx.count(UserId(0)), 9);
        assert_eq!(idx.count(UserId(1)), 1);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 100_000;
        let mut first = 0usize;
        for _ in 0..trials {
            if movement_based_pick_carrier(&idx, &[UserId(0), UserId(1)], &mut rng)
                == Some(UserId(0))
            {
                first += 1;
            }
        }
        let freq = first as f64 / trials as f64;
        assert!((freq - 0.9).abs() < 0.01, "carrier frequency {freq}");
    }

    #[test]
    fn movement_all_zero_contacts_uniform() {
        let idx = ContactIndex::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trials = 100_000;
        let mut first = 0usize;
        for _ in 0..trials {
            if movement_based_pick_carrier(&idx, &[UserId(0), UserId(1)], &mut rng)
                == Some(UserId(0))
            {
                first += 1;
            }
        }
        let freq = first as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.01, "fallback frequency {freq}");
    }

    #[test]
    fn popularity_empty_cache_no_offer() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(popularity_based_offer(&[], &mut rng), None);
    }

    #[test]
    fn popularity_offer_follows_request_counts() {
        let cache = [(ContentId(0), 8u64), (ContentId(1), 2u64)];
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let trials = 100_000;
        let mut first = 0usize;
        for _ in 0..trials {
            if popularity_based_offer(&cache, &mut rng) == Some(ContentId(0)) {
                first += 1;
            }
        }
        let freq = first as f64 / trials as f64;
        assert!((freq - 0.8).abs() < 0.01, "offer frequency {freq}");
    }

    #[test]
    fn popularity_reject_below_minimum_when_full() {
        let cache = [(ContentId(0), 5u64), (ContentId(1), 3u64)];
        match popularity_based_accept(&cache, ContentId(2), 2, 2) {
            OfferDecision::Reject => {}
            _ => panic!("incoming below minimum must be rejected"),
        }
        match popularity_based_accept(&cache, ContentId(2), 4, 2) {
            OfferDecision::Accept { evict: Some(c) } => assert_eq!(c, ContentId(1)),
            _ => panic!("incoming above minimum evicts the minimum"),
        }
        match popularity_based_accept(&cache, ContentId(2), 9, 3) {
            OfferDecision::Accept { evict: None } => {}
            _ => panic!("free slot accepts without eviction"),
        }
        match popularity_based_accept(&cache, ContentId(0), 9, 2) {
            OfferDecision::Reject => {}
            _ => panic!("duplicate offer rejected"),
        }
    }

    fn snapshot_1u_2c() -> InstanceSnapshot {
        InstanceSnapshot {
            n_users: 1,
            n_contents: 2,
            n_regions: 2,
            mobility: vec![vec![1.0, 0.0]],
            demand: vec![vec![5.0, 1.0], vec![3.0, 1.0]],
            cache_capacity: vec![1],
            upload_capacity: vec![1.0],
        }
    }

    #[test]
    fn objective_all_zero_assignment() {
        let snap = snapshot_1u_2c();
        let report = evaluate_objective(&ReplicationAssignment::empty(1, 2), &snap);
        assert_eq!(report.objective, 0.0);
        assert!(report.cap_violations.is_empty());
        assert!(report.popularity_violations.is_empty());
    }

    #[test]
    fn objective_single_cell_arithmetic() {
        let snap = InstanceSnapshot {
            n_users: 1,
            n_contents: 1,
            n_regions: 2,
            mobility: vec![vec![1.0, 0.0]],
            demand: vec![vec![3.0, 0.0]],
            cache_capacity: vec![1],
            upload_capacity: vec![2.0],
        };
        let mut k = ReplicationAssignment::empty(1, 1);
        k.carries[0][0] = true;
        let report = evaluate_objective(&k, &snap);
        assert_eq!(report.objective, 6.0);
        assert!(report.cap_violations.is_empty());
    }

    #[test]
    fn objective_reports_capacity_violation() {
        let snap = snapshot_1u_2c();
        let mut k = ReplicationAssignment::empty(1, 2);
        k.carries[0][0] = true;
        k.carries[0][1] = true; // capacity is 1
        let report = evaluate_objective(&k, &snap);
        assert_eq!(report.cap_violations, vec![UserId(0)]);
    }

    #[test]
    fn exact_optimizer_zero_capacity() {
        let mut snap = snapshot_1u_2c();
        snap.cache_capacity = vec![0];
        let (k, obj) = exact_optimize(&snap).unwrap();
        assert_eq!(obj, 0.0);
        assert_eq!(k, ReplicationAssignment::empty(1, 2));
    }

    #[test]
    fn exact_optimizer_picks_larger_gain() {
        let snap = snapshot_1u_2c();
        let (k, obj) = exact_optimize(&snap).unwrap();
        assert!(k.carries[0][0]);
        assert!(!k.carries[0][1]);
        assert_eq!(obj, 5.0);
    }

    #[test]
    fn exact_optimizer_rejects_large_instances() {
        let snap = InstanceSnapshot {
            n_users: 5,
            n_contents: 5,
            n_regions: 1,
            mobility: vec![vec![1.0]; 5],
            demand: vec![vec![1.0]; 5],
            cache_capacity: vec![1; 5],
            upload_capacity: vec![1.0; 5],
        };
        assert!(matches!(
            exact_optimize(&snap),
            Err(Error::InstanceTooLarge { vars: 25, .. })
        ));
    }

    /// Independent oracle: enumerate all bitmasks with no pruning.
    fn brute_force(snapshot: &InstanceSnapshot) -> f64 {
        let vars = snapshot.n_users * snapshot.n_contents;
        let nc = snapshot.n_contents;
        let mut best = f64::NEG_INFINITY;
        for mask in 0..(1u32 << vars) {
            let mut assignment =
                ReplicationAssignment::empty(snapshot.n_users, snapshot.n_contents);
            for k in 0..vars {
                if mask >> k & 1 == 1 {
                    assignment.carries[k / nc][k % nc] = true;
                }
            }
            let report = evaluate_objective(&assignment, snapshot);
            if report.cap_violations.is_empty()
                && report.popularity_violations.is_empty()
                && report.objective > best
            {
                best = report.objective;
            }
        }
        best
    }

    #[test]
    fn exact_optimizer_matches_independent_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..60 {
            let n_users = rng.gen_range(1..=3);
            let n_contents = rng.gen_range(1..=3);
            let n_regions = rng.gen_range(1..=3);
            let snap = InstanceSnapshot {
                n_users,
                n_contents,
                n_regions,
                mobility: (0..n_users)
                    .map(|_| (0..n_regions).map(|_| rng.gen_range(0.0..1.0)).collect())
                    .collect(),
                demand: (0..n_contents)
                    .map(|_| {
                        (0..n_regions)
                            .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..4.0) })
                            .collect()
                    })
                    .collect(),
                cache_capacity: (0..n_users).map(|_| rng.gen_range(0..=n_contents)).collect(),
                upload_capacity: (0..n_users).map(|_| rng.gen_range(0.5..2.0)).collect(),
            };
            let (k, obj) = exact_optimize(&snap).unwrap();
            let brute_obj = brute_force(&snap);
            assert!(
                (obj - brute_obj).abs() < 1e-9,
                "optimizer {obj} vs brute force {brute_obj}"
            );
            let report = evaluate_objective(&k, &snap);
            assert!((report.objective - obj).abs() < 1e-9);
            assert!(report.cap_violations.is_empty());
            assert!(report.popularity_violations.is_empty());
        }
    }
}
