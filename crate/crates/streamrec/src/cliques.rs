//! Sampling of maximal balanced bipartite cliques from a link stream, and
//! the per-node features derived from the sampled set.
//!
//! `(U', I', [b,e))` is a clique when every pair of `U' × I'` is linked
//! throughout `[b,e)`; it is maximal when no single node addition and no
//! interval extension preserves cliqueness. Exhaustive enumeration is
//! intractable at scale, so cliques are found by randomized expansion:
//! each trial seeds a 1x1 clique on a random sub-window of a random link
//! and grows it (add a user, add an item, or widen the window as far as
//! all current pairs allow) in random order until no expansion applies.
//! The result of a trial is always maximal; the balance threshold then
//! filters out star-shaped cliques, which say little about taste groups.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stream::{Interval, LinkStream, Node};

/// A bipartite clique over a time window. Node ids are kept sorted, so the
/// derived equality and ordering give a canonical form for deduplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clique {
    pub users: Vec<u32>,
    pub items: Vec<u32>,
    pub interval: Interval,
}

impl Clique {
    /// min(|U'|, |I'|) / max(|U'|, |I'|); 1 means equally sized sides.
    pub fn balancedness(&self) -> f64 {
        let u = self.users.len() as f64;
        let i = self.items.len() as f64;
        u.min(i) / u.max(i)
    }

    pub fn contains(&self, node: Node) -> bool {
        match node {
            Node::User(id) => self.users.binary_search(&id).is_ok(),
            Node::Item(id) => self.items.binary_search(&id).is_ok(),
        }
    }
}

/// True iff every pair of `users x items` is linked throughout `window`.
pub fn is_clique(stream: &LinkStream, users: &[u32], items: &[u32], window: Interval) -> bool {
    users.iter().all(|&u| {
        items
            .iter()
            .all(|&i| stream.covering_interval(u, i, window).is_some())
    })
}

/// True iff `clique` admits no single-node addition and no one-second
/// interval extension on either side. The probe step matches the data's
/// native time granularity.
pub fn is_maximal(stream: &LinkStream, clique: &Clique) -> Result<bool> {
    if clique.users.is_empty() || clique.items.is_empty() {
        return Err(Error::Domain("clique must have non-empty node sets".into()));
    }
    if !is_clique(stream, &clique.users, &clique.items, clique.interval) {
        return Err(Error::Domain(format!(
            "({:?}, {:?}, {}) is not a clique of the stream",
            clique.users, clique.items, clique.interval
        )));
    }
    let iv = clique.interval;
    let left = Interval {
        begin: iv.begin - 1,
        end: iv.end,
    };
    if is_clique(stream, &clique.users, &clique.items, left) {
        return Ok(false);
    }
    let right = Interval {
        begin: iv.begin,
        end: iv.end + 1,
    };
    if is_clique(stream, &clique.users, &clique.items, right) {
        return Ok(false);
    }
    // candidate users must be linked to every clique item, so partners of
    // any one item form a sufficient candidate pool (and likewise for items)
    for user in stream.partners(Node::Item(clique.items[0])) {
        if clique.users.binary_search(&user).is_ok() {
            continue;
        }
        if clique
            .items
            .iter()
            .all(|&i| stream.covering_interval(user, i, iv).is_some())
        {
            return Ok(false);
        }
    }
    for item in stream.partners(Node::User(clique.users[0])) {
        if clique.items.binary_search(&item).is_ok() {
            continue;
        }
        if clique
            .users
            .iter()
            .all(|&u| stream.covering_interval(u, item, iv).is_some())
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One growing clique during a sampling trial.
struct Trial<'a> {
    stream: &'a LinkStream,
    users: Vec<u32>,
    items: Vec<u32>,
    window: Interval,
    /// Users addable over the current window (kept in sync on every move).
    cand_users: Vec<u32>,
    /// Items addable over the current window.
    cand_items: Vec<u32>,
}

impl<'a> Trial<'a> {
    fn seed(stream: &'a LinkStream, user: u32, item: u32, window: Interval) -> Trial<'a> {
        let cand_users = stream
            .partners(Node::Item(item))
            .into_iter()
            .filter(|&u| u != user && stream.covering_interval(u, item, window).is_some())
            .collect();
        let cand_items = stream
            .partners(Node::User(user))
            .into_iter()
            .filter(|&i| i != item && stream.covering_interval(user, i, window).is_some())
            .collect();
        Trial {
            stream,
            users: vec![user],
            items: vec![item],
            window,
            cand_users,
            cand_items,
        }
    }

    /// Largest window containing the current one that all pairs cover.
    fn widen_extent(&self) -> Interval {
        let mut extent = Interval {
            begin: i64::MIN,
            end: i64::MAX,
        };
        for &u in &self.users {
            for &i in &self.items {
                let cover = self
                    .stream
                    .covering_interval(u, i, self.window)
                    .expect("trial state is always a clique");
                extent.begin = extent.begin.max(cover.begin);
                extent.end = extent.end.min(cover.end);
            }
        }
        extent
    }

    fn covers_all_items(&self, user: u32, window: Interval) -> bool {
        self.items
            .iter()
            .all(|&i| self.stream.covering_interval(user, i, window).is_some())
    }

    fn covers_all_users(&self, item: u32, window: Interval) -> bool {
        self.users
            .iter()
            .all(|&u| self.stream.covering_interval(u, item, window).is_some())
    }

    fn add_user(&mut self, rng: &mut impl Rng) {
        let pick = rng.gen_range(0..self.cand_users.len());
        let user = self.cand_users.swap_remove(pick);
        self.users.push(user);
        let stream = self.stream;
        let window = self.window;
        self.cand_items
            .retain(|&i| stream.covering_interval(user, i, window).is_some());
    }

    fn add_item(&mut self, rng: &mut impl Rng) {
        let pick = rng.gen_range(0..self.cand_items.len());
        let item = self.cand_items.swap_remove(pick);
        self.items.push(item);
        let stream = self.stream;
        let window = self.window;
        self.cand_users
            .retain(|&u| stream.covering_interval(u, item, window).is_some());
    }

    fn widen(&mut self, extent: Interval) {
        self.window = extent;
        let users: Vec<u32> = std::mem::take(&mut self.cand_users);
        self.cand_users = users
            .into_iter()
            .filter(|&u| self.covers_all_items(u, extent))
            .collect();
        let items: Vec<u32> = std::mem::take(&mut self.cand_items);
        self.cand_items = items
            .into_iter()
            .filter(|&i| self.covers_all_users(i, extent))
            .collect();
    }

    /// Expand until no node addition applies and the window is at full
    /// extent. Every stop state is a maximal clique.
    fn run(mut self, rng: &mut impl Rng, prefer_balanced: bool) -> Clique {
        loop {
            let extent = self.widen_extent();
            let can_widen = extent != self.window;
            let can_add_user = !self.cand_users.is_empty();
            let can_add_item = !self.cand_items.is_empty();
            if !can_widen && !can_add_user && !can_add_item {
                break;
            }

            // moves: 0 = add user, 1 = add item, 2 = widen
            let mut moves: Vec<u8> = Vec::with_capacity(3);
            if can_add_user {
                moves.push(0);
            }
            if can_add_item {
                moves.push(1);
            }
            if can_widen {
                moves.push(2);
            }
            let mv = if prefer_balanced && can_add_user && self.users.len() < self.items.len() {
                0
            } else if prefer_balanced && can_add_item && self.items.len() < self.users.len() {
                1
            } else {
                *moves.choose(rng).unwrap()
            };
            match mv {
                0 => self.add_user(rng),
                1 => self.add_item(rng),
                _ => self.widen(extent),
            }
        }
        let mut users = self.users;
        let mut items = self.items;
        users.sort_unstable();
        items.sort_unstable();
        Clique {
            users,
            items,
            interval: self.window,
        }
    }
}

/// Cut the stream's time axis at every stored link endpoint; seeding windows
/// are drawn from these atoms so sub-interval cliques stay reachable.
fn global_endpoints(stream: &LinkStream) -> Vec<i64> {
    let mut cuts: Vec<i64> = Vec::with_capacity(stream.num_links() * 2);
    for link in stream.links() {
        cuts.push(link.interval.begin);
        cuts.push(link.interval.end);
    }
    cuts.sort_unstable();
    cuts.dedup();
    cuts
}

/// Sample maximal bipartite cliques by randomized expansion.
///
/// Every returned clique is a maximal clique of the stream with
/// balancedness at least `balance_threshold`; the result is deduplicated,
/// canonically ordered, and deterministic given the seed. Fewer than
/// `n_samples` distinct cliques may be returned.
pub fn sample_balanced_max_cliques(
    stream: &LinkStream,
    n_samples: usize,
    balance_threshold: f64,
    seed: u64,
) -> Result<Vec<Clique>> {
    if n_samples == 0 {
        return Err(Error::Config("clique sample count must be positive".into()));
    }
    if !(0.0..=1.0).contains(&balance_threshold) {
        return Err(Error::Config(format!(
            "balance threshold must lie in [0, 1], got {balance_threshold}"
        )));
    }
    if stream.num_links() == 0 {
        return Ok(Vec::new());
    }
    let cuts = global_endpoints(stream);
    let prefer_balanced = balance_threshold > 0.0;

    let mut cliques: Vec<Clique> = (0..n_samples as u64)
        .into_par_iter()
        .map(|trial| {
            // decorrelate per-trial streams from one another and the seed
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let link = stream.links()[rng.gen_range(0..stream.num_links())];
            // atoms of the seed link: consecutive global cuts inside it
            let lo = cuts.partition_point(|&c| c < link.interval.begin);
            let hi = cuts.partition_point(|&c| c <= link.interval.end);
            let atoms = hi - lo - 1;
            let pick = rng.gen_range(0..atoms);
            let window = Interval {
                begin: cuts[lo + pick],
                end: cuts[lo + pick + 1],
            };
            Trial::seed(stream, link.user, link.item, window).run(&mut rng, prefer_balanced)
        })
        .collect();

    cliques.sort_unstable();
    cliques.dedup();
    cliques.retain(|c| c.balancedness() >= balance_threshold);
    Ok(cliques)
}

/// Per-node description of the sampled clique set, all in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CliqueFeatureSet {
    /// Mean balancedness of the cliques containing the node.
    pub balancedness: f64,
    /// Mean clique duration, normalized by the span length.
    pub avg_norm_duration: f64,
    /// Fraction of all sampled cliques containing the node.
    pub clique_fraction: f64,
}

/// Clique features of one node; all zeros when the node appears in no
/// sampled clique (or the set is empty). `span_length` must be positive.
pub fn clique_node_features(cliques: &[Clique], node: Node, span_length: i64) -> CliqueFeatureSet {
    debug_assert!(span_length > 0);
    let mut count = 0usize;
    let mut balance_sum = 0.0;
    let mut duration_sum = 0.0;
    for clique in cliques {
        if clique.contains(node) {
            count += 1;
            balance_sum += clique.balancedness();
            duration_sum += clique.interval.length() as f64 / span_length as f64;
        }
    }
    if count == 0 || cliques.is_empty() {
        return CliqueFeatureSet::default();
    }
    CliqueFeatureSet {
        balancedness: balance_sum / count as f64,
        avg_norm_duration: duration_sum / count as f64,
        clique_fraction: count as f64 / cliques.len() as f64,
    }
}

/// Clique features for every node of a sampled set, computed in one pass.
#[derive(Debug, Clone, Default)]
pub struct CliqueFeatureTable {
    per_node: std::collections::HashMap<Node, CliqueFeatureSet>,
}

impl CliqueFeatureTable {
    pub fn build(cliques: &[Clique], span_length: i64) -> CliqueFeatureTable {
        debug_assert!(span_length > 0);
        let mut sums: std::collections::HashMap<Node, (usize, f64, f64)> =
            std::collections::HashMap::new();
        for clique in cliques {
            let balance = clique.balancedness();
            let duration = clique.interval.length() as f64 / span_length as f64;
            let nodes = clique
                .users
                .iter()
                .map(|&u| Node::User(u))
                .chain(clique.items.iter().map(|&i| Node::Item(i)));
            for node in nodes {
                let entry = sums.entry(node).or_default();
                entry.0 += 1;
                entry.1 += balance;
                entry.2 += duration;
            }
        }
        let total = cliques.len();
        let per_node = sums
            .into_iter()
            .map(|(node, (count, balance_sum, duration_sum))| {
                let features = CliqueFeatureSet {
                    balancedness: balance_sum / count as f64,
                    avg_norm_duration: duration_sum / count as f64,
                    clique_fraction: count as f64 / total as f64,
                };
                (node, features)
            })
            .collect();
        CliqueFeatureTable { per_node }
    }

    /// Zeros for nodes outside every sampled clique.
    pub fn get(&self, node: Node) -> CliqueFeatureSet {
        self.per_node.get(&node).copied().unwrap_or_default()
    }
}

/// Serialize cliques as `b e | u1,u2,... | i1,i2,...`, one per line.
pub fn write_cliques<W: std::io::Write>(cliques: &[Clique], mut w: W) -> std::io::Result<()> {
    for c in cliques {
        let users: Vec<String> = c.users.iter().map(u32::to_string).collect();
        let items: Vec<String> = c.items.iter().map(u32::to_string).collect();
        writeln!(
            w,
            "{} {} | {} | {}",
            c.interval.begin,
            c.interval.end,
            users.join(","),
            items.join(",")
        )?;
    }
    Ok(())
}

/// Re-verify soundness of a sampled set: every clique must pass both
/// [`is_clique`] and [`is_maximal`].
pub fn verify_sampled(stream: &LinkStream, cliques: &[Clique]) -> Result<()> {
    let unique: HashSet<&Clique> = cliques.iter().collect();
    if unique.len() != cliques.len() {
        return Err(Error::Domain("sampled clique set holds duplicates".into()));
    }
    for clique in cliques {
        if !is_maximal(stream, clique)? {
            return Err(Error::Domain(format!(
                "sampled clique ({:?}, {:?}, {}) is not maximal",
                clique.users, clique.items, clique.interval
            )));
        }
    }
    Ok(())
}
