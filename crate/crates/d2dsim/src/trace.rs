//! Trace model: share events, region associations, the social graph, and the
//! mapping of social-trace users onto mobility-trace users.
//!
//! Both trace kinds are line-oriented text with comma-separated fields:
//!
//! ```text
//! # social trace
//! E,<u>,<v>,<reshare_prob>
//! S,<time_s>,<user>,<content>,<parent|->,<root|->
//! # mobility trace
//! R,<region>,<x_m>,<y_m>
//! A,<time_s>,<user>,<region>,<duration_s>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ids::{ContentId, RegionId, UserId};

/// A post (no parent) or a reshare (parent set) in the social trace.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ShareEvent {
    pub time: u64,
    pub sharer: UserId,
    pub content: ContentId,
    pub parent: Option<UserId>,
    pub root: Option<UserId>,
}

impl ShareEvent {
    pub fn is_reshare(&self) -> bool {
        self.parent.is_some()
    }
}

/// One Wi-Fi association: `user` stays in `region` for `duration` seconds
/// starting at `time`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AssociationEvent {
    pub time: u64,
    pub user: UserId,
    pub region: RegionId,
    pub duration: u64,
}

impl AssociationEvent {
    pub fn end(&self) -> u64 {
        self.time + self.duration
    }
}

/// Undirected friendship graph with a per-edge reshare probability.
#[derive(Clone, Debug, Default)]
pub struct SocialGraph {
    /// Per-user sorted neighbor list with the edge reshare probability.
    adjacency: Vec<Vec<(UserId, f64)>>,
}

impl SocialGraph {
    pub fn new(n_users: usize) -> Self {
        SocialGraph {
            adjacency: vec![Vec::new(); n_users],
        }
    }

    pub fn n_users(&self) -> usize {
        self.adjacency.len()
    }

    /// Inserts the undirected edge `{u, v}`. Re-inserting with a different
    /// probability is a validation error; identical re-inserts are ignored.
    pub fn add_edge(&mut self, u: UserId, v: UserId, prob: f64) -> Result<()> {
        if u == v {
            return Err(Error::Validation(format!("self edge on user {u}")));
        }
        if !(0.0..=1.0).contains(&prob) {
            return Err(Error::Validation(format!(
                "reshare probability {prob} for edge ({u},{v}) outside [0,1]"
            )));
        }
        let n = self.adjacency.len().max(u.index() + 1).max(v.index() + 1);
        self.adjacency.resize(n, Vec::new());
        if let Some(existing) = self.reshare_prob(u, v) {
            if existing != prob {
                return Err(Error::Validation(format!(
                    "edge ({u},{v}) declared twice with probabilities {existing} and {prob}"
                )));
            }
            return Ok(());
        }
        let iu = self.adjacency[u.index()]
            .binary_search_by_key(&v, |e| e.0)
            .unwrap_err();
        self.adjacency[u.index()].insert(iu, (v, prob));
        let iv = self.adjacency[v.index()]
            .binary_search_by_key(&u, |e| e.0)
            .unwrap_err();
        self.adjacency[v.index()].insert(iv, (u, prob));
        Ok(())
    }

    pub fn friends(&self, u: UserId) -> &[(UserId, f64)] {
        self.adjacency
            .get(u.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn are_friends(&self, u: UserId, v: UserId) -> bool {
        self.reshare_prob(u, v).is_some()
    }

    pub fn reshare_prob(&self, u: UserId, v: UserId) -> Option<f64> {
        self.adjacency.get(u.index()).and_then(|adj| {
            adj.binary_search_by_key(&v, |e| e.0)
                .ok()
                .map(|i| adj[i].1)
        })
    }

    /// Edges with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (UserId, UserId, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, adj)| {
            let u = UserId(u as u32);
            adj.iter()
                .filter(move |(v, _)| u < *v)
                .map(move |&(v, p)| (u, v, p))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adjacency.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.adjacency.len() as f64
    }

    pub fn grow_to(&mut self, n_users: usize) {
        if n_users > self.adjacency.len() {
            self.adjacency.resize(n_users, Vec::new());
        }
    }
}

/// Counters for tolerated oddities seen while parsing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraceWarnings {
    /// Reshares whose parent is not a declared friend of the sharer.
    /// Propagation can be observed independently of the declared graph,
    /// so these are accepted but counted.
    pub non_friend_parents: usize,
}

/// Parsed social trace: share events plus the declared friendship graph.
#[derive(Clone, Debug, Default)]
pub struct SocialTrace {
    pub events: Vec<ShareEvent>,
    pub graph: SocialGraph,
    pub warnings: TraceWarnings,
}

impl SocialTrace {
    pub fn n_users(&self) -> usize {
        self.graph.n_users()
    }

    /// Posts + reshares per user.
    pub fn share_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_users()];
        for ev in &self.events {
            counts[ev.sharer.index()] += 1;
        }
        counts
    }

    pub fn n_contents(&self) -> usize {
        self.events
            .iter()
            .map(|e| e.content.index() + 1)
            .max()
            .unwrap_or(0)
    }
}

/// Region coordinates in meters; regions referenced only by association
/// events have no known position.
#[derive(Clone, Debug, Default)]
pub struct RegionTable {
    coords: Vec<Option<(f64, f64)>>,
}

impl RegionTable {
    pub fn n_regions(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, r: RegionId) -> Option<(f64, f64)> {
        self.coords.get(r.index()).copied().flatten()
    }

    pub fn set_coords(&mut self, r: RegionId, x: f64, y: f64) -> Result<()> {
        self.grow_to(r.index() + 1);
        if self.coords[r.index()].is_some() {
            return Err(Error::Validation(format!("region {r} declared twice")));
        }
        self.coords[r.index()] = Some((x, y));
        Ok(())
    }

    pub fn grow_to(&mut self, n: usize) {
        if n > self.coords.len() {
            self.coords.resize(n, None);
        }
    }

    pub fn distance(&self, a: RegionId, b: RegionId) -> Option<f64> {
        let (ax, ay) = self.coords(a)?;
        let (bx, by) = self.coords(b)?;
        Some(((ax - bx).powi(2) + (ay - by).powi(2)).sqrt())
    }
}

/// Parsed mobility trace: per-user association events plus region positions.
#[derive(Clone, Debug, Default)]
pub struct MobilityTrace {
    pub events: Vec<AssociationEvent>,
    pub regions: RegionTable,
}

impl MobilityTrace {
    pub fn n_users(&self) -> usize {
        self.events
            .iter()
            .map(|e| e.user.index() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Association count per user (the mobility intensity).
    pub fn association_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_users()];
        for ev in &self.events {
            counts[ev.user.index()] += 1;
        }
        counts
    }

    /// Most-visited region per user, ties broken toward the smaller id.
    pub fn home_regions(&self) -> Vec<Option<RegionId>> {
        let n = self.n_users();
        let mut visits: Vec<BTreeMap<RegionId, usize>> = vec![BTreeMap::new(); n];
        for ev in &self.events {
            *visits[ev.user.index()].entry(ev.region).or_insert(0) += 1;
        }
        visits
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .max_by_key(|&(r, c)| (c, std::cmp::Reverse(r)))
                    .map(|(r, _)| r)
            })
            .collect()
    }
}

fn split_fields<'a>(line: &'a str, tag: &str, expected: usize, path: &str, lineno: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        return Err(Error::parse(
            path,
            lineno,
            format!("{tag} record needs {expected} fields, got {}", fields.len()),
        ));
    }
    Ok(fields)
}

fn parse_u32(field: &str, what: &str, path: &str, lineno: usize) -> Result<u32> {
    field
        .trim()
        .parse::<u32>()
        .map_err(|_| Error::parse(path, lineno, format!("bad {what} `{field}`")))
}

fn parse_u64(field: &str, what: &str, path: &str, lineno: usize) -> Result<u64> {
    field
        .trim()
        .parse::<u64>()
        .map_err(|_| Error::parse(path, lineno, format!("bad {what} `{field}`")))
}

fn parse_f64(field: &str, what: &str, path: &str, lineno: usize) -> Result<f64> {
    let v = field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(path, lineno, format!("bad {what} `{field}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(path, lineno, format!("non-finite {what} `{field}`")));
    }
    Ok(v)
}

fn parse_opt_user(field: &str, what: &str, path: &str, lineno: usize) -> Result<Option<UserId>> {
    let t = field.trim();
    if t == "-" {
        Ok(None)
    } else {
        parse_u32(t, what, path, lineno).map(|v| Some(UserId(v)))
    }
}

/// Parses a social trace from a string. `path` is used only in error messages.
pub fn parse_social_trace_str(input: &str, path: &str) -> Result<SocialTrace> {
    let mut events = Vec::new();
    let mut graph = SocialGraph::default();
    let mut users: BTreeSet<UserId> = BTreeSet::new();

    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split(',').next() {
            Some("S") => {
                let f = split_fields(line, "S", 6, path, lineno)?;
                let time = parse_u64(f[1], "time", path, lineno)?;
                let sharer = UserId(parse_u32(f[2], "user", path, lineno)?);
                let content = ContentId(parse_u32(f[3], "content", path, lineno)?);
                let parent = parse_opt_user(f[4], "parent", path, lineno)?;
                let root = parse_opt_user(f[5], "root", path, lineno)?;
                if parent.is_none() && root.is_some() {
                    return Err(Error::parse(path, lineno, "original post carries a root user"));
                }
                users.insert(sharer);
                events.push(ShareEvent {
                    time,
                    sharer,
                    content,
                    parent,
                    root,
                });
            }
            Some("E") => {
                let f = split_fields(line, "E", 4, path, lineno)?;
                let u = UserId(parse_u32(f[1], "user", path, lineno)?);
                let v = UserId(parse_u32(f[2], "user", path, lineno)?);
                let p = parse_f64(f[3], "reshare probability", path, lineno)?;
                users.insert(u);
                users.insert(v);
                graph.add_edge(u, v, p)?;
            }
            Some(tag) => {
                return Err(Error::parse(path, lineno, format!("unknown record tag `{tag}`")));
            }
            None => unreachable!(),
        }
    }

    let n_users = users.iter().next_back().map(|u| u.index() + 1).unwrap_or(0);
    graph.grow_to(n_users);

    // Parent/root ids must belong to the trace's user universe; a parent that
    // is merely not a declared friend is tolerated and counted.
    let mut warnings = TraceWarnings::default();
    for ev in &events {
        for referenced in [ev.parent, ev.root].into_iter().flatten() {
            if !users.contains(&referenced) {
                return Err(Error::Validation(format!(
                    "share of content {} references unknown user {referenced}",
                    ev.content
                )));
            }
        }
        if let Some(parent) = ev.parent {
            if !graph.are_friends(ev.sharer, parent) {
                warnings.non_friend_parents += 1;
            }
        }
    }

    events.sort_by_key(|e| (e.time, e.sharer, e.content));
    Ok(SocialTrace {
        events,
        graph,
        warnings,
    })
}

pub fn parse_social_trace(path: impl AsRef<Path>) -> Result<SocialTrace> {
    let path = path.as_ref();
    let input = fs::read_to_string(path)?;
    parse_social_trace_str(&input, &path.display().to_string())
}

/// Parses a mobility trace from a string. `path` is used only in error messages.
pub fn parse_mobility_trace_str(input: &str, path: &str) -> Result<MobilityTrace> {
    let mut events = Vec::new();
    let mut regions = RegionTable::default();

    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split(',').next() {
            Some("A") => {
                let f = split_fields(line, "A", 5, path, lineno)?;
                let time = parse_u64(f[1], "time", path, lineno)?;
                let user = UserId(parse_u32(f[2], "user", path, lineno)?);
                let region = RegionId(parse_u32(f[3], "region", path, lineno)?);
                let duration = parse_u64(f[4], "duration", path, lineno)?;
                if duration == 0 {
                    return Err(Error::parse(path, lineno, "association with zero duration"));
                }
                regions.grow_to(region.index() + 1);
                events.push(AssociationEvent {
                    time,
                    user,
                    region,
                    duration,
                });
            }
            Some("R") => {
                let f = split_fields(line, "R", 4, path, lineno)?;
                let region = RegionId(parse_u32(f[1], "region", path, lineno)?);
                let x = parse_f64(f[2], "x coordinate", path, lineno)?;
                let y = parse_f64(f[3], "y coordinate", path, lineno)?;
                regions.set_coords(region, x, y)?;
            }
            Some(tag) => {
                return Err(Error::parse(path, lineno, format!("unknown record tag `{tag}`")));
            }
            None => unreachable!(),
        }
    }

    events.sort_by_key(|e| (e.time, e.user, e.region));
    validate_associations(&events)?;
    Ok(MobilityTrace { events, regions })
}

pub fn parse_mobility_trace(path: impl AsRef<Path>) -> Result<MobilityTrace> {
    let path = path.as_ref();
    let input = fs::read_to_string(path)?;
    parse_mobility_trace_str(&input, &path.display().to_string())
}

/// A user's associations must not overlap in time.
pub fn validate_associations(sorted: &[AssociationEvent]) -> Result<()> {
    let mut last_end: HashMap<UserId, u64> = HashMap::new();
    for ev in sorted {
        if let Some(&end) = last_end.get(&ev.user) {
            if ev.time < end {
                return Err(Error::Validation(format!(
                    "user {} has overlapping associations: one ends at {end}s, next starts at {}s",
                    ev.user, ev.time
                )));
            }
        }
        last_end.insert(ev.user, ev.end());
    }
    Ok(())
}

/// Canonical text form: `E` lines sorted by endpoints, then `S` lines sorted
/// by time. `parse(write(t))` reproduces `t` exactly.
pub fn write_social_trace(trace: &SocialTrace) -> String {
    let mut out = String::new();
    for (u, v, p) in trace.graph.edges() {
        writeln!(out, "E,{u},{v},{p}").unwrap();
    }
    let mut events = trace.events.clone();
    events.sort_by_key(|e| (e.time, e.sharer, e.content));
    for ev in events {
        let parent = ev.parent.map_or("-".to_string(), |u| u.to_string());
        let root = ev.root.map_or("-".to_string(), |u| u.to_string());
        writeln!(
            out,
            "S,{},{},{},{parent},{root}",
            ev.time, ev.sharer, ev.content
        )
        .unwrap();
    }
    out
}

/// Canonical text form: `R` lines sorted by region, then `A` lines sorted by
/// time.
pub fn write_mobility_trace(trace: &MobilityTrace) -> String {
    let mut out = String::new();
    for r in 0..trace.regions.n_regions() {
        if let Some((x, y)) = trace.regions.coords(RegionId(r as u32)) {
            writeln!(out, "R,{r},{x},{y}").unwrap();
        }
    }
    let mut events = trace.events.clone();
    events.sort_by_key(|e| (e.time, e.user, e.region));
    for ev in events {
        writeln!(out, "A,{},{},{},{}", ev.time, ev.user, ev.region, ev.duration).unwrap();
    }
    out
}

/// Consecutive association region pairs `(from, to)` per user, each tagged
/// with the start time of the second association. Self pairs are included:
/// re-associating inside one region still counts as a migration.
pub fn migration_pairs(events: &[AssociationEvent]) -> Vec<(UserId, RegionId, RegionId, u64)> {
    let mut per_user: BTreeMap<UserId, Vec<&AssociationEvent>> = BTreeMap::new();
    for ev in events {
        per_user.entry(ev.user).or_default().push(ev);
    }
    let mut pairs = Vec::new();
    for (user, mut evs) in per_user {
        evs.sort_by_key(|e| e.time);
        for w in evs.windows(2) {
            pairs.push((user, w[0].region, w[1].region, w[1].time));
        }
    }
    pairs
}

/// Users present in each region at instant `t`.
pub fn occupancy_at(events: &[AssociationEvent], t: u64) -> BTreeMap<RegionId, usize> {
    let mut occ = BTreeMap::new();
    for ev in events {
        if ev.time <= t && t < ev.end() {
            *occ.entry(ev.region).or_insert(0) += 1;
        }
    }
    occ
}

/// How social-trace users are matched to mobility-trace users.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MappingScheme {
    /// Uniform random bijection.
    Independent,
    /// Social users ranked by activity, mapped onto mobility users grouped by
    /// home region with a seeded random group order.
    SocialRank,
    /// Social activity rank matched to mobility intensity rank.
    SocialMobilityRank,
}

impl MappingScheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(MappingScheme::Independent),
            "social_rank" => Ok(MappingScheme::SocialRank),
            "social_mobility_rank" => Ok(MappingScheme::SocialMobilityRank),
            other => Err(Error::Config(format!("unknown mapping scheme `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MappingScheme::Independent => "independent",
            MappingScheme::SocialRank => "social_rank",
            MappingScheme::SocialMobilityRank => "social_mobility_rank",
        }
    }
}

/// Bijection from (a truncated set of) social users onto mobility users.
#[derive(Clone, Debug)]
pub struct UserMapping {
    pub scheme: MappingScheme,
    /// Indexed by social user; `None` for social users dropped by truncation.
    map: Vec<Option<UserId>>,
}

impl UserMapping {
    pub fn get(&self, social: UserId) -> Option<UserId> {
        self.map.get(social.index()).copied().flatten()
    }

    pub fn mapped_count(&self) -> usize {
        self.map.iter().flatten().count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (UserId, UserId)> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(s, m)| m.map(|m| (UserId(s as u32), m)))
    }

    /// Rewrites a social trace into the mobility user-id space. Events of
    /// unmapped sharers are dropped; a reshare whose parent was dropped
    /// degrades to an original post.
    pub fn apply(&self, trace: &SocialTrace, n_mobility_users: usize) -> SocialTrace {
        let remap = |u: Option<UserId>| u.and_then(|u| self.get(u));
        let mut events: Vec<ShareEvent> = trace
            .events
            .iter()
            .filter_map(|ev| {
                let sharer = self.get(ev.sharer)?;
                let parent = remap(ev.parent);
                let root = if parent.is_some() { remap(ev.root) } else { None };
                Some(ShareEvent {
                    time: ev.time,
                    sharer,
                    content: ev.content,
                    parent,
                    root,
                })
            })
            .collect();
        events.sort_by_key(|e| (e.time, e.sharer, e.content));

        let mut graph = SocialGraph::new(n_mobility_users);
        for (u, v, p) in trace.graph.edges() {
            if let (Some(mu), Some(mv)) = (self.get(u), self.get(v)) {
                graph.add_edge(mu, mv, p).expect("remapped edge is valid");
            }
        }
        SocialTrace {
            events,
            graph,
            warnings: trace.warnings,
        }
    }
}

/// Builds the social-to-mobility user bijection. When the populations differ
/// the larger side is first truncated uniformly at random under `seed`.
pub fn map_users(
    social: &SocialTrace,
    mobility: &MobilityTrace,
    scheme: MappingScheme,
    seed: u64,
) -> Result<UserMapping> {
    let n_social = social.n_users();
    let n_mobility = mobility.n_users();
    let n = n_social.min(n_mobility);
    if n == 0 {
        return Ok(UserMapping {
            scheme,
            map: vec![None; n_social],
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let pick = |rng: &mut ChaCha8Rng, total: usize| -> Vec<UserId> {
        let mut ids: Vec<UserId> = (0..total as u32).map(UserId).collect();
        ids.shuffle(rng);
        ids.truncate(n);
        ids.sort_unstable();
        ids
    };
    let social_ids = pick(&mut rng, n_social);
    let mobility_ids = pick(&mut rng, n_mobility);

    let social_intensity = social.share_counts();
    let by_social_rank = |ids: &[UserId]| -> Vec<UserId> {
        let mut v = ids.to_vec();
        v.sort_by_key(|u| (std::cmp::Reverse(social_intensity[u.index()]), *u));
        v
    };

    let ordered_pairs: Vec<(UserId, UserId)> = match scheme {
        MappingScheme::Independent => {
            let mut shuffled = mobility_ids.clone();
            shuffled.shuffle(&mut rng);
            social_ids.iter().copied().zip(shuffled).collect()
        }
        MappingScheme::SocialRank => {
            let homes = mobility.home_regions();
            let counts = mobility.association_counts();
            let mut groups: BTreeMap<Option<RegionId>, Vec<UserId>> = BTreeMap::new();
            for &m in &mobility_ids {
                groups.entry(homes[m.index()]).or_default().push(m);
            }
            let mut group_list: Vec<Vec<UserId>> = groups
                .into_values()
                .map(|mut g| {
                    g.sort_by_key(|u| (std::cmp::Reverse(counts[u.index()]), *u));
                    g
                })
                .collect();
            group_list.shuffle(&mut rng);
            let ranked_mobility: Vec<UserId> = group_list.into_iter().flatten().collect();
            by_social_rank(&social_ids)
                .into_iter()
                .zip(ranked_mobility)
                .collect()
        }
        MappingScheme::SocialMobilityRank => {
            let counts = mobility.association_counts();
            let mut ranked_mobility = mobility_ids.clone();
            ranked_mobility.sort_by_key(|u| (std::cmp::Reverse(counts[u.index()]), *u));
            by_social_rank(&social_ids)
                .into_iter()
                .zip(ranked_mobility)
                .collect()
        }
    };

    let mut map = vec![None; n_social];
    for (s, m) in ordered_pairs {
        map[s.index()] = Some(m);
    }
    Ok(UserMapping { scheme, map })
}
