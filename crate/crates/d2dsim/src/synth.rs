//! Synthetic trace generation. Produces social and mobility traces whose
//! marginals match the measured shapes: zipf-like region popularity,
//! power-law edge reshare probabilities, Poisson posting, exponential
//! reshare latency, short associations, and strong same-region revisits.

use std::collections::{BinaryHeap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ids::{ContentId, RegionId, UserId};
use crate::strategy::weighted_sample_without_replacement;
use crate::trace::{
    AssociationEvent, MobilityTrace, RegionTable, ShareEvent, SocialGraph, SocialTrace,
};

/// Indoor or outdoor region layout.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scenario {
    /// 40 regions of 100x100 m.
    Indoor,
    /// A square grid of cells covering a 5x5 km urban area.
    Outdoor,
}

impl Scenario {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "indoor" => Ok(Scenario::Indoor),
            "outdoor" => Ok(Scenario::Outdoor),
            other => Err(Error::Config(format!("unknown scenario `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Indoor => "indoor",
            Scenario::Outdoor => "outdoor",
        }
    }
}

pub const INDOOR_REGIONS: usize = 40;
pub const INDOOR_PITCH_M: f64 = 100.0;
pub const OUTDOOR_AREA_M: f64 = 5000.0;
pub const DEFAULT_OUTDOOR_GRID_DIM: usize = 10;
pub const MEAN_ASSOCIATION_S: f64 = 240.0;

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub n_users: usize,
    pub n_regions: usize,
    pub scenario: Scenario,
    /// Outdoor grid is `dim x dim` cells; ignored indoors.
    pub outdoor_grid_dim: usize,
    pub avg_degree: f64,
    /// Per-user posting rate, drawn uniformly from this range (posts/slot).
    pub lambda_p_range: (f64, f64),
    pub reshare_mean_latency_s: f64,
    pub zipf_exponent_regions: f64,
    pub powerlaw_exponent_edges: f64,
    pub powerlaw_exponent_migration: f64,
    pub crowdedness_range: (f64, f64),
    /// Target mean users per region; defaults to the range midpoint.
    pub crowd_target: Option<f64>,
    /// Favored region count per user, inclusive bounds.
    pub favored_regions: (usize, usize),
    pub horizon_slots: u64,
    pub slot_length_s: u64,
    /// When set, friendship edges prefer users whose home locations are
    /// within roughly this many meters (exponential kernel).
    pub friend_distance_sigma_m: Option<f64>,
    pub seed: u64,
}

impl SynthConfig {
    pub fn indoor(n_users: usize, horizon_slots: u64, seed: u64) -> Self {
        SynthConfig {
            n_users,
            n_regions: INDOOR_REGIONS,
            scenario: Scenario::Indoor,
            outdoor_grid_dim: DEFAULT_OUTDOOR_GRID_DIM,
            avg_degree: 40.0,
            lambda_p_range: (0.001, 0.02),
            reshare_mean_latency_s: 36_000.0,
            zipf_exponent_regions: 1.0,
            powerlaw_exponent_edges: 2.0,
            powerlaw_exponent_migration: 2.0,
            crowdedness_range: (0.0, 15.0),
            crowd_target: None,
            favored_regions: (3, 8),
            horizon_slots,
            slot_length_s: 300,
            friend_distance_sigma_m: None,
            seed,
        }
    }

    pub fn outdoor(n_users: usize, horizon_slots: u64, seed: u64) -> Self {
        let dim = DEFAULT_OUTDOOR_GRID_DIM;
        SynthConfig {
            n_regions: dim * dim,
            scenario: Scenario::Outdoor,
            crowdedness_range: (0.0, 5.0),
            ..SynthConfig::indoor(n_users, horizon_slots, seed)
        }
    }

    pub fn horizon_s(&self) -> u64 {
        self.horizon_slots * self.slot_length_s
    }

    pub fn crowd_target(&self) -> f64 {
        self.crowd_target
            .unwrap_or((self.crowdedness_range.0 + self.crowdedness_range.1) / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_regions < 2 {
            return Err(Error::Config("need at least 2 regions".into()));
        }
        if self.scenario == Scenario::Outdoor
            && self.n_regions != self.outdoor_grid_dim * self.outdoor_grid_dim
        {
            return Err(Error::Config(format!(
                "outdoor scenario needs n_regions = grid_dim^2 = {}",
                self.outdoor_grid_dim * self.outdoor_grid_dim
            )));
        }
        if self.n_users < 2 {
            return Err(Error::Config("need at least 2 users".into()));
        }
        if self.avg_degree >= self.n_users as f64 {
            return Err(Error::Config(format!(
                "average degree {} must be below the user count {}",
                self.avg_degree, self.n_users
            )));
        }
        if self.lambda_p_range.0 > self.lambda_p_range.1 || self.lambda_p_range.0 < 0.0 {
            return Err(Error::Config("empty posting-rate range".into()));
        }
        if self.crowdedness_range.0 > self.crowdedness_range.1 {
            return Err(Error::Config("empty crowdedness range".into()));
        }
        for (name, v) in [
            ("zipf_exponent_regions", self.zipf_exponent_regions),
            ("powerlaw_exponent_edges", self.powerlaw_exponent_edges),
            ("powerlaw_exponent_migration", self.powerlaw_exponent_migration),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be nonnegative")));
            }
        }
        if self.slot_length_s == 0 {
            return Err(Error::Config("slot length must be positive".into()));
        }
        if self.horizon_slots == 0 {
            return Err(Error::Config("horizon must be at least one slot".into()));
        }
        if self.favored_regions.0 == 0 || self.favored_regions.0 > self.favored_regions.1 {
            return Err(Error::Config("empty favored-region range".into()));
        }
        let target = self.crowd_target();
        if !(self.crowdedness_range.0..=self.crowdedness_range.1).contains(&target) {
            return Err(Error::Config(format!(
                "crowdedness target {target} outside configured range"
            )));
        }
        Ok(())
    }

    /// Fraction of time each user must spend associated to hit the
    /// crowdedness target. Errors when the population cannot supply it.
    pub fn duty_cycle(&self) -> Result<f64> {
        let target = self.crowd_target();
        let duty = target * self.n_regions as f64 / self.n_users as f64;
        if duty > 0.95 {
            return Err(Error::Config(format!(
                "crowdedness target {target} needs {} user-slots per region but only {} users \
                 exist ({} regions)",
                target * self.n_regions as f64,
                self.n_users,
                self.n_regions
            )));
        }
        Ok(duty)
    }
}

/// Inverse-CDF sample from a density proportional to `x^-a` on `[lo, hi]`.
fn powerlaw_sample(rng: &mut impl Rng, a: f64, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.gen();
    if (a - 1.0).abs() < 1e-9 {
        lo * (hi / lo).powf(u)
    } else {
        let e = 1.0 - a;
        (lo.powf(e) + u * (hi.powf(e) - lo.powf(e))).powf(1.0 / e)
    }
}

fn exp_sample(rng: &mut impl Rng, mean: f64) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    -mean * u.ln()
}

/// Knuth's product method; posting rates here are far below one per slot.
fn poisson_sample(rng: &mut impl Rng, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let limit = (-lambda).exp();
    let mut k = 0u64;
    let mut p = 1.0;
    loop {
        p *= rng.gen::<f64>();
        if p <= limit {
            return k;
        }
        k += 1;
    }
}

/// `1/(rank+1)^s` weights over `n` items.
fn zipf_weights(n: usize, s: f64) -> Vec<f64> {
    (0..n).map(|i| 1.0 / ((i + 1) as f64).powf(s)).collect()
}

/// Region center coordinates for the scenario's grid layout.
pub fn region_layout(cfg: &SynthConfig) -> Vec<(f64, f64)> {
    let (cols, pitch) = match cfg.scenario {
        Scenario::Indoor => ((cfg.n_regions as f64).sqrt().ceil() as usize, INDOOR_PITCH_M),
        Scenario::Outdoor => (
            cfg.outdoor_grid_dim,
            OUTDOOR_AREA_M / cfg.outdoor_grid_dim as f64,
        ),
    };
    (0..cfg.n_regions)
        .map(|r| ((r % cols) as f64 * pitch, (r / cols) as f64 * pitch))
        .collect()
}

/// Friendship graph with the configured mean degree; edge endpoints are
/// drawn with mildly skewed user weights so degrees are heterogeneous, and
/// reshare probabilities follow a bounded power law.
pub fn gen_social_graph(cfg: &SynthConfig) -> Result<SocialGraph> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xA11CE));
    gen_graph_inner(cfg, &mut rng, None)
}

/// Same as [`gen_social_graph`] but biases edges toward geographically close
/// home locations with an `exp(-d/sigma)` kernel.
pub fn gen_geo_social_graph(
    cfg: &SynthConfig,
    homes: &[(f64, f64)],
    sigma_m: f64,
) -> Result<SocialGraph> {
    cfg.validate()?;
    if homes.len() != cfg.n_users {
        return Err(Error::Config("home location per user required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xA11CE));
    gen_graph_inner(cfg, &mut rng, Some((homes, sigma_m)))
}

fn gen_graph_inner(
    cfg: &SynthConfig,
    rng: &mut ChaCha8Rng,
    geo: Option<(&[(f64, f64)], f64)>,
) -> Result<SocialGraph> {
    let n = cfg.n_users;
    let target_edges = ((n as f64 * cfg.avg_degree / 2.0).round() as usize)
        .min(n * (n - 1) / 2)
        .max(1);

    // mildly skewed endpoint weights, decoupled from user id
    let mut activity: Vec<f64> = (0..n).map(|i| 1.0 / ((i + 1) as f64).sqrt()).collect();
    for i in (1..n).rev() {
        activity.swap(i, rng.gen_range(0..=i));
    }
    let cumulative: Vec<f64> = activity
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().unwrap();

    let draw_endpoint = |rng: &mut ChaCha8Rng| -> usize {
        let x = rng.gen_range(0.0..total);
        cumulative.partition_point(|&c| c <= x).min(n - 1)
    };

    let mut graph = SocialGraph::new(n);
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut attempts = 0usize;
    let max_attempts = target_edges * 200;
    while seen.len() < target_edges {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Config(format!(
                "could not place {target_edges} edges over {n} users; average degree too high \
                 for the locality kernel"
            )));
        }
        let u = draw_endpoint(rng);
        let v = match geo {
            None => draw_endpoint(rng),
            Some((homes, sigma)) => {
                // endpoint weighted by activity and distance kernel
                let (ux, uy) = homes[u];
                let weights: Vec<f64> = (0..n)
                    .map(|w| {
                        if w == u {
                            0.0
                        } else {
                            let (wx, wy) = homes[w];
                            let d = ((ux - wx).powi(2) + (uy - wy).powi(2)).sqrt();
                            activity[w] * (-d / sigma).exp()
                        }
                    })
                    .collect();
                let wtotal: f64 = weights.iter().sum();
                if wtotal <= 0.0 {
                    continue;
                }
                let mut x = rng.gen_range(0.0..wtotal);
                let mut pick = n - 1;
                for (i, &w) in weights.iter().enumerate() {
                    if x < w {
                        pick = i;
                        break;
                    }
                    x -= w;
                }
                pick
            }
        };
        if u == v {
            continue;
        }
        let key = (u.min(v) as u32, u.max(v) as u32);
        if !seen.insert(key) {
            continue;
        }
        let prob = powerlaw_sample(rng, cfg.powerlaw_exponent_edges, 1e-3, 1.0);
        graph.add_edge(UserId(key.0), UserId(key.1), prob)?;
    }
    Ok(graph)
}

#[derive(PartialEq)]
struct PendingReshare {
    time: u64,
    sharer: UserId,
    content: ContentId,
    parent: UserId,
    root: UserId,
}

impl Eq for PendingReshare {}

impl Ord for PendingReshare {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // BinaryHeap is a max-heap; reverse for earliest-first
        (other.time, other.sharer, other.content).cmp(&(self.time, self.sharer, self.content))
    }
}

impl PartialOrd for PendingReshare {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Poisson posting per user plus cascade expansion along friendship edges:
/// each friend of a sharer independently reshares once with the edge
/// probability after an exponential latency.
pub fn gen_propagation(cfg: &SynthConfig, graph: &SocialGraph) -> Result<Vec<ShareEvent>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x50C1A1));
    let lambdas: Vec<f64> = (0..cfg.n_users)
        .map(|_| rng.gen_range(cfg.lambda_p_range.0..=cfg.lambda_p_range.1))
        .collect();

    // posts first, content ids in chronological order
    let mut posts: Vec<(u64, UserId)> = Vec::new();
    for (u, &lambda) in lambdas.iter().enumerate() {
        for slot in 0..cfg.horizon_slots {
            let count = poisson_sample(&mut rng, lambda);
            for _ in 0..count {
                let offset = rng.gen_range(0..cfg.slot_length_s);
                posts.push((slot * cfg.slot_length_s + offset, UserId(u as u32)));
            }
        }
    }
    posts.sort_by_key(|&(t, u)| (t, u));
    Ok(expand_cascades(cfg, graph, &posts, &mut rng))
}

/// Replays the given posts and grows each cascade: every friend of a sharer
/// independently reshares at most once, with the edge probability, after an
/// exponential latency. Reshares past the horizon are dropped.
pub fn expand_cascades(
    cfg: &SynthConfig,
    graph: &SocialGraph,
    posts: &[(u64, UserId)],
    rng: &mut ChaCha8Rng,
) -> Vec<ShareEvent> {
    let horizon = cfg.horizon_s();
    let mut events: Vec<ShareEvent> = Vec::with_capacity(posts.len() * 2);
    let mut heap: BinaryHeap<PendingReshare> = BinaryHeap::new();
    let mut shared: Vec<HashSet<UserId>> = Vec::with_capacity(posts.len());

    let fanout =
        |ev: &ShareEvent, rng: &mut ChaCha8Rng, heap: &mut BinaryHeap<PendingReshare>| {
            let root = ev.root.unwrap_or(ev.sharer);
            for &(v, p) in graph.friends(ev.sharer) {
                if rng.gen_bool(p) {
                    let latency = exp_sample(rng, cfg.reshare_mean_latency_s).round() as u64;
                    let t = ev.time.saturating_add(latency.max(1));
                    if t < horizon {
                        heap.push(PendingReshare {
                            time: t,
                            sharer: v,
                            content: ev.content,
                            parent: ev.sharer,
                            root,
                        });
                    }
                }
            }
        };

    for (idx, &(time, sharer)) in posts.iter().enumerate() {
        let content = ContentId(idx as u32);
        // flush reshares scheduled before this post
        while heap.peek().map_or(false, |p| {
            (p.time, p.sharer, p.content) < (time, sharer, content)
        }) {
            let p = heap.pop().unwrap();
            if !shared[p.content.index()].insert(p.sharer) {
                continue;
            }
            let ev = ShareEvent {
                time: p.time,
                sharer: p.sharer,
                content: p.content,
                parent: Some(p.parent),
                root: Some(p.root),
            };
            fanout(&ev, rng, &mut heap);
            events.push(ev);
        }
        let ev = ShareEvent {
            time,
            sharer,
            content,
            parent: None,
            root: None,
        };
        shared.push(HashSet::from([sharer]));
        fanout(&ev, rng, &mut heap);
        events.push(ev);
    }
    while let Some(p) = heap.pop() {
        if !shared[p.content.index()].insert(p.sharer) {
            continue;
        }
        let ev = ShareEvent {
            time: p.time,
            sharer: p.sharer,
            content: p.content,
            parent: Some(p.parent),
            root: Some(p.root),
        };
        fanout(&ev, rng, &mut heap);
        events.push(ev);
    }

    events.sort_by_key(|e| (e.time, e.sharer, e.content));
    events
}

struct WalkParams {
    favored: Vec<RegionId>,
    favored_weights: Vec<f64>,
    stay_boost: f64,
}

/// Preference-biased region walks. Region base popularity is zipf, each user
/// revisits a small favored set, association durations are exponential and
/// truncated at slot boundaries, and idle gaps are calibrated so the mean
/// instantaneous occupancy per region hits the crowdedness target.
pub fn gen_mobility(cfg: &SynthConfig) -> Result<MobilityTrace> {
    cfg.validate()?;
    let duty = cfg.duty_cycle()?;
    if duty <= 0.0 {
        return Err(Error::Config("crowdedness target must be positive".into()));
    }

    // first pass with a rough gap estimate, then recalibrate once from the
    // realized duty cycle
    let mut gap_mean = MEAN_ASSOCIATION_S * (1.0 - duty) / duty;
    let mut trace = gen_mobility_pass(cfg, gap_mean)?;
    let assoc_total: f64 = trace.events.iter().map(|e| e.duration as f64).sum();
    let assoc_count = trace.events.len().max(1);
    let mean_assoc = assoc_total / assoc_count as f64;
    let realized_duty = assoc_total / (cfg.n_users as f64 * cfg.horizon_s() as f64);
    if realized_duty > 0.0 && (realized_duty / duty - 1.0).abs() > 0.02 {
        gap_mean = (mean_assoc * (1.0 - duty) / duty).max(1.0);
        trace = gen_mobility_pass(cfg, gap_mean)?;
    }
    Ok(trace)
}

fn gen_mobility_pass(cfg: &SynthConfig, gap_mean: f64) -> Result<MobilityTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xB0B));
    let horizon = cfg.horizon_s();
    let slot = cfg.slot_length_s;

    // zipf base popularity, shuffled so rank is independent of grid position
    let base = zipf_weights(cfg.n_regions, cfg.zipf_exponent_regions);
    let mut rank_of: Vec<usize> = (0..cfg.n_regions).collect();
    for i in (1..cfg.n_regions).rev() {
        rank_of.swap(i, rng.gen_range(0..=i));
    }
    let region_weight: Vec<f64> = (0..cfg.n_regions).map(|r| base[rank_of[r]]).collect();

    let mut walks: Vec<WalkParams> = Vec::with_capacity(cfg.n_users);
    for _ in 0..cfg.n_users {
        let k = rng
            .gen_range(cfg.favored_regions.0..=cfg.favored_regions.1)
            .min(cfg.n_regions);
        let favored: Vec<RegionId> = weighted_sample_without_replacement(
            (0..cfg.n_regions).map(|r| (RegionId(r as u32), region_weight[r])),
            k,
            &mut rng,
        );
        // within the favored set, earlier picks are preferred more
        let favored_weights = zipf_weights(favored.len(), 1.0);
        let stay_boost = powerlaw_sample(&mut rng, cfg.powerlaw_exponent_migration, 1.0, 20.0);
        walks.push(WalkParams {
            favored,
            favored_weights,
            stay_boost,
        });
    }

    let mut events: Vec<AssociationEvent> = Vec::new();
    for (u, params) in walks.iter().enumerate() {
        let user = UserId(u as u32);
        let mut t = exp_sample(&mut rng, gap_mean).round() as u64;
        let mut current: Option<RegionId> = None;
        while t < horizon {
            let region = {
                let weights: Vec<(RegionId, f64)> = params
                    .favored
                    .iter()
                    .zip(&params.favored_weights)
                    .map(|(&r, &w)| {
                        let boost = if Some(r) == current { params.stay_boost } else { 1.0 };
                        (r, w * boost)
                    })
                    .collect();
                crate::strategy::weighted_pick(&weights, &mut rng).expect("favored set nonempty")
            };
            current = Some(region);
            let slot_end = (t / slot + 1) * slot;
            let sampled = exp_sample(&mut rng, MEAN_ASSOCIATION_S).round().max(1.0) as u64;
            let duration = sampled.min(slot_end - t).min(horizon - t).max(1);
            events.push(AssociationEvent {
                time: t,
                user,
                region,
                duration,
            });
            t += duration;
            t += exp_sample(&mut rng, gap_mean).round().max(1.0) as u64;
        }
    }

    events.sort_by_key(|e| (e.time, e.user, e.region));
    let mut regions = RegionTable::default();
    for (r, (x, y)) in region_layout(cfg).into_iter().enumerate() {
        regions.set_coords(RegionId(r as u32), x, y)?;
    }
    Ok(MobilityTrace { events, regions })
}

/// Generates a matched pair of traces. The social graph is built first; when
/// `friend_distance_sigma_m` is set, the mobility trace is generated first so
/// edges can prefer geographically close home locations.
pub fn generate(cfg: &SynthConfig) -> Result<(SocialTrace, MobilityTrace)> {
    cfg.validate()?;
    let mobility = gen_mobility(cfg)?;
    let graph = match cfg.friend_distance_sigma_m {
        None => gen_social_graph(cfg)?,
        Some(sigma) => {
            let homes = home_coords(cfg, &mobility);
            gen_geo_social_graph(cfg, &homes, sigma)?
        }
    };
    let events = gen_propagation(cfg, &graph)?;
    let social = SocialTrace {
        events,
        graph,
        warnings: Default::default(),
    };
    Ok((social, mobility))
}

/// Home coordinates per user: the most-visited region's position; users with
/// no associations sit at the area center.
pub fn home_coords(cfg: &SynthConfig, mobility: &MobilityTrace) -> Vec<(f64, f64)> {
    let homes = mobility.home_regions();
    let layout = region_layout(cfg);
    let center = layout
        .iter()
        .fold((0.0, 0.0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    let center = (
        center.0 / layout.len() as f64,
        center.1 / layout.len() as f64,
    );
    (0..cfg.n_users)
        .map(|u| {
            homes
                .get(u)
                .copied()
                .flatten()
                .map(|r| layout[r.index()])
                .unwrap_or(center)
        })
        .collect()
}

/// Mean distance between the home locations of friends.
pub fn mean_friend_distance(graph: &SocialGraph, homes: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for (u, v, _) in graph.edges() {
        let (ux, uy) = homes[u.index()];
        let (vx, vy) = homes[v.index()];
        total += ((ux - vx).powi(2) + (uy - vy).powi(2)).sqrt();
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        total / count as f64
    }
}

/// Fraction of users with two visits to the same region within `window_s`.
pub fn revisit_user_fraction(mobility: &MobilityTrace, window_s: u64) -> f64 {
    let n = mobility.n_users();
    if n == 0 {
        return 0.0;
    }
    let mut last_visit: std::collections::HashMap<(UserId, RegionId), u64> = Default::default();
    let mut revisiting: HashSet<UserId> = HashSet::new();
    for ev in &mobility.events {
        if let Some(&prev) = last_visit.get(&(ev.user, ev.region)) {
            if ev.time.saturating_sub(prev) <= window_s {
                revisiting.insert(ev.user);
            }
        }
        last_visit.insert((ev.user, ev.region), ev.time);
    }
    revisiting.len() as f64 / n as f64
}

/// Mean instantaneous users per region over the whole horizon.
pub fn mean_occupancy(cfg: &SynthConfig, mobility: &MobilityTrace) -> f64 {
    let total: f64 = mobility.events.iter().map(|e| e.duration as f64).sum();
    total / (cfg.horizon_s() as f64 * cfg.n_regions as f64)
}
