//! Social-side model tables: influence between users, regional preference,
//! inherent content popularity, the regional social popularity index, and
//! the per-content social weight alpha.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::ids::{ContentId, RegionId, UserId};
use crate::trace::{AssociationEvent, ShareEvent, SocialGraph};

/// A user's normalized preference over regions. Empty when the user has no
/// history in the window; consumers treat that as uniformly zero.
pub type PreferenceRow = BTreeMap<RegionId, f64>;

/// Influence of user `u` over each friend, for one slot.
#[derive(Clone, Debug, Default)]
pub struct InfluenceTable {
    rows: HashMap<UserId, BTreeMap<UserId, f64>>,
}

impl InfluenceTable {
    pub fn set(&mut self, u: UserId, v: UserId, value: f64) {
        self.rows.entry(u).or_default().insert(v, value);
    }

    /// Zero off-edge and for pairs with no sharing history.
    pub fn get(&self, u: UserId, v: UserId) -> f64 {
        self.rows
            .get(&u)
            .and_then(|r| r.get(&v))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (UserId, UserId, f64)> + '_ {
        self.rows
            .iter()
            .flat_map(|(&u, row)| row.iter().map(move |(&v, &x)| (u, v, x)))
    }
}

/// Per-user preference rows for one slot.
#[derive(Clone, Debug, Default)]
pub struct PreferenceTable {
    rows: Vec<PreferenceRow>,
}

impl PreferenceTable {
    pub fn new(n_users: usize) -> Self {
        PreferenceTable {
            rows: vec![PreferenceRow::new(); n_users],
        }
    }

    pub fn set_row(&mut self, u: UserId, row: PreferenceRow) {
        if u.index() >= self.rows.len() {
            self.rows.resize(u.index() + 1, PreferenceRow::new());
        }
        self.rows[u.index()] = row;
    }

    pub fn row(&self, u: UserId) -> &PreferenceRow {
        static EMPTY: PreferenceRow = PreferenceRow::new();
        self.rows.get(u.index()).unwrap_or(&EMPTY)
    }

    pub fn get(&self, u: UserId, r: RegionId) -> f64 {
        self.row(u).get(&r).copied().unwrap_or(0.0)
    }

    pub fn n_users(&self) -> usize {
        self.rows.len()
    }
}

/// Regional social popularity `A`, its inherent component `p`, and the
/// per-content social weight, for one slot.
#[derive(Clone, Debug, Default)]
pub struct PopularityTable {
    pub demand: HashMap<ContentId, BTreeMap<RegionId, f64>>,
    pub inherent: HashMap<ContentId, BTreeMap<RegionId, f64>>,
    pub alpha: HashMap<ContentId, f64>,
}

impl PopularityTable {
    pub fn get(&self, c: ContentId, r: RegionId) -> f64 {
        self.demand
            .get(&c)
            .and_then(|row| row.get(&r))
            .copied()
            .unwrap_or(0.0)
    }
}

/// Influence index: accepted shares over produced shares inside the window.
/// The two slices are per-slot counts covering the same window. An empty
/// sharing history yields zero influence.
pub fn influence_index(h_window: &[f64], g_window: &[f64]) -> Result<f64> {
    if h_window.iter().chain(g_window).any(|&x| x < 0.0) {
        return Err(Error::Validation(
            "negative history counter in influence window".into(),
        ));
    }
    let num: f64 = h_window.iter().sum();
    let den: f64 = g_window.iter().sum();
    if den == 0.0 {
        Ok(0.0)
    } else {
        Ok(num / den)
    }
}

/// Preference row from per-region stay durations (already restricted to the
/// estimation window). Normalizes to sum 1; all-zero input gives an empty row.
pub fn preference_from_durations(durations: &BTreeMap<RegionId, f64>) -> PreferenceRow {
    let total: f64 = durations.values().sum();
    if total <= 0.0 {
        return PreferenceRow::new();
    }
    durations
        .iter()
        .filter(|(_, &d)| d > 0.0)
        .map(|(&r, &d)| (r, d / total))
        .collect()
}

/// Preference row for `u` from raw association events, counting stay time
/// clipped to the window `[w_start, w_end)`.
pub fn regional_preference(
    events: &[AssociationEvent],
    u: UserId,
    w_start: u64,
    w_end: u64,
) -> PreferenceRow {
    let mut durations: BTreeMap<RegionId, f64> = BTreeMap::new();
    for ev in events.iter().filter(|e| e.user == u) {
        let start = ev.time.max(w_start);
        let end = ev.end().min(w_end);
        if end > start {
            *durations.entry(ev.region).or_insert(0.0) += (end - start) as f64;
        }
    }
    preference_from_durations(&durations)
}

/// Exponentially weighted moving average of per-slot request counts, oldest
/// first. Unseen content (empty history) has zero inherent popularity.
pub fn inherent_popularity(per_slot_requests: &[u64], smoothing: f64) -> f64 {
    let mut p = 0.0;
    for &count in per_slot_requests {
        p = smoothing * count as f64 + (1.0 - smoothing) * p;
    }
    p
}

pub const EWMA_SMOOTHING: f64 = 0.5;

/// Regional social popularity index for content `c` in one region:
/// inherent popularity plus the influence spilled into the region by the
/// friends of every sharer. A friend reachable through several sharers
/// contributes once per sharer.
pub fn social_popularity(
    inherent: f64,
    alpha: f64,
    sharers: &[UserId],
    graph: &SocialGraph,
    influence: &InfluenceTable,
    preference: &PreferenceTable,
    region: RegionId,
) -> f64 {
    let mut social = 0.0;
    for &u in sharers {
        for &(v, _) in graph.friends(u) {
            social += influence.get(u, v) * preference.get(v, region);
        }
    }
    inherent + alpha * social
}

/// Fraction of viewers of `c` that were influenced: at view time at least one
/// friend had already shared the content. Viewers are the resharers observed
/// in the trace; zero when nobody viewed the content.
pub fn learn_alpha(events: &[ShareEvent], graph: &SocialGraph, c: ContentId) -> f64 {
    let mut cascade: Vec<&ShareEvent> = events.iter().filter(|e| e.content == c).collect();
    cascade.sort_by_key(|e| (e.time, e.sharer));

    let mut shared_before: HashSet<UserId> = HashSet::new();
    let mut viewers = 0usize;
    let mut influenced = 0usize;
    let mut i = 0;
    while i < cascade.len() {
        // group events at the same instant: "already a resharer" is strict
        let t = cascade[i].time;
        let mut j = i;
        while j < cascade.len() && cascade[j].time == t {
            j += 1;
        }
        for ev in &cascade[i..j] {
            if ev.is_reshare() {
                viewers += 1;
                let hit = graph
                    .friends(ev.sharer)
                    .iter()
                    .any(|(f, _)| shared_before.contains(f));
                if hit {
                    influenced += 1;
                }
            }
        }
        for ev in &cascade[i..j] {
            shared_before.insert(ev.sharer);
        }
        i = j;
    }
    if viewers == 0 {
        0.0
    } else {
        influenced as f64 / viewers as f64
    }
}
