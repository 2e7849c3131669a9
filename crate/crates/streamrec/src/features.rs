//! Per-node and per-edge stream features: degree statistics, assortativity
//! and inter-contact statistics.

use crate::error::{Error, Result};
use crate::stream::{BipartiteGraph, Interval, LinkStream, Node};

/// Degree description of one node.
///
/// `min_stream_degree` and `std_stream_degree` are always computed but only
/// exported when explicitly requested; they carried little signal and are
/// off by default.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DegreeFeatures {
    /// Number of distinct neighbours in the induced graph.
    pub graph_degree: usize,
    /// Time-averaged instantaneous degree: summed link lengths over |T|.
    pub mean_stream_degree: f64,
    /// Exact maximum of the instantaneous degree over the span.
    pub max_stream_degree: usize,
    /// Exact minimum of the instantaneous degree over the span.
    pub min_stream_degree: usize,
    /// Population standard deviation of the instantaneous degree over the
    /// span, time-weighted.
    pub std_stream_degree: f64,
}

/// Sweep all interval endpoints of one node, maintaining a running counter.
///
/// Returns (max over closed point containment, time-weighted sum of the
/// degree, time-weighted sum of its square, min over the span). The max
/// counts links as active at both endpoints; the integrals are insensitive
/// to endpoint convention. O(L log L) in the node's link count, no
/// discretization.
fn degree_sweep(intervals: &[Interval], span: Interval) -> (usize, i64, i64, usize) {
    if intervals.is_empty() {
        return (0, 0, 0, 0);
    }
    // (time, is_end): starts sort before ends at equal time, so a link
    // opening exactly where another closes sees both active.
    let mut endpoints: Vec<(i64, bool)> = Vec::with_capacity(intervals.len() * 2);
    for iv in intervals {
        endpoints.push((iv.begin, false));
        endpoints.push((iv.end, true));
    }
    endpoints.sort_unstable();

    let mut running: i64 = 0;
    let mut max_closed: i64 = 0;
    let mut sum: i64 = 0;
    let mut sum_sq: i64 = 0;
    let mut min_seen: i64 = i64::MAX;
    let mut prev_t = span.begin;
    let mut idx = 0;
    while idx < endpoints.len() {
        let t = endpoints[idx].0;
        if t > prev_t {
            let dt = t - prev_t;
            sum += running * dt;
            sum_sq += running * running * dt;
            min_seen = min_seen.min(running);
            prev_t = t;
        }
        // apply all starts at t first, tracking the closed-point maximum
        while idx < endpoints.len() && endpoints[idx].0 == t && !endpoints[idx].1 {
            running += 1;
            idx += 1;
        }
        max_closed = max_closed.max(running);
        while idx < endpoints.len() && endpoints[idx].0 == t && endpoints[idx].1 {
            running -= 1;
            idx += 1;
        }
    }
    if span.end > prev_t {
        min_seen = min_seen.min(0);
        // trailing silent segment contributes zeros to sum and sum_sq
    }
    (max_closed as usize, sum, sum_sq, min_seen as usize)
}

/// Degree features of one node; absent nodes yield all zeros.
pub fn degree_features(stream: &LinkStream, graph: &BipartiteGraph, node: Node) -> DegreeFeatures {
    let intervals: Vec<Interval> = stream.node_intervals(node).collect();
    let span = stream.span();
    let (max, sum, sum_sq, min) = degree_sweep(&intervals, span);
    let span_len = span.length() as f64;
    let mean = sum as f64 / span_len;
    let variance = (sum_sq as f64 / span_len - mean * mean).max(0.0);
    DegreeFeatures {
        graph_degree: graph.degree(node),
        mean_stream_degree: mean,
        max_stream_degree: max,
        min_stream_degree: min,
        std_stream_degree: variance.sqrt(),
    }
}

/// Degree-ratio assortativity of one edge: min(d(u), d(i)) / max(d(u), d(i))
/// over static graph degrees. Low values flag blockbuster-like items.
pub fn edge_assortativity(graph: &BipartiteGraph, user: u32, item: u32) -> Result<f64> {
    if !graph.has_edge(user, item) {
        return Err(Error::Domain(format!(
            "({user}, {item}) is not an edge of the induced graph"
        )));
    }
    let du = graph.degree(Node::User(user)) as f64;
    let di = graph.degree(Node::Item(item)) as f64;
    Ok(du.min(di) / du.max(di))
}

/// Degree-ratio of a (user, item) pair regardless of edge presence; the
/// sentinel for pairs with an isolated endpoint is 0. Matrix assembly uses
/// this relaxed form so test-fold pairs unseen in training stay defined.
pub fn degree_ratio_or_zero(graph: &BipartiteGraph, user: u32, item: u32) -> f64 {
    let du = graph.degree(Node::User(user)) as f64;
    let di = graph.degree(Node::Item(item)) as f64;
    if du == 0.0 || di == 0.0 {
        0.0
    } else {
        du.min(di) / du.max(di)
    }
}

/// Inter-contact statistics of one node, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterContactStats {
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub std: f64,
}

/// Statistics over consecutive differences of a node's sorted event times.
///
/// Nodes with fewer than two events get the full span length as a neutral
/// "never recurs" sentinel in all four fields.
pub fn inter_contact_stats(times: &[i64], span_length: i64) -> InterContactStats {
    debug_assert!(times.windows(2).all(|w| w[0] <= w[1]));
    if times.len() < 2 {
        let sentinel = span_length as f64;
        return InterContactStats {
            max: sentinel,
            min: sentinel,
            mean: sentinel,
            std: sentinel,
        };
    }
    let n = (times.len() - 1) as f64;
    let mut min = i64::MAX;
    let mut max = i64::MIN;
    let mut sum: i64 = 0;
    for w in times.windows(2) {
        let gap = w[1] - w[0];
        min = min.min(gap);
        max = max.max(gap);
        sum += gap;
    }
    let mean = sum as f64 / n;
    let var = times
        .windows(2)
        .map(|w| {
            let d = (w[1] - w[0]) as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    InterContactStats {
        max: max as f64,
        min: min as f64,
        mean,
        std: var.sqrt(),
    }
}
