//! Bipartite link streams with maximal-interval links.
//!
//! A rating log is modelled as a stream `L = (T, U, I, E_L)`: a time span,
//! a set of users, a set of items, and for every (user, item) pair a set of
//! disjoint maximal time intervals over which the pair is linked.
//!
//! Raw interactions are instantaneous timestamps, so [`LinkStream::build`]
//! expands each event at time `t` into a presence window `[t, t+delta)` and
//! merges overlapping or touching windows of the same pair into maximal
//! intervals. `delta` is configurable; the pipeline default is 86400 s (one
//! day), i.e. rating-session granularity. All stream features depend on this
//! expansion, so it is worth stating loudly: an "interval" below is always
//! an expanded presence window, never a raw timestamp.
//!
//! Interval conventions:
//! * lengths and merging use the half-open reading: `|[b,e)| = e - b`, and
//!   `[2,5)` + `[5,8)` merge into `[2,8)` (presence is continuous across the
//!   shared endpoint);
//! * point queries (`instantaneous_degree`) treat a link as active at both
//!   of its endpoints, matching the continuous-time model where the pair is
//!   linked at all instants of the closed interval.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Rating value: a multiple of 0.5 in [0.5, 5.0].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rating(f64);

impl Rating {
    pub fn new(value: f64) -> Result<Rating> {
        let doubled = value * 2.0;
        if doubled.fract() == 0.0 && (1.0..=10.0).contains(&doubled) {
            Ok(Rating(value))
        } else {
            Err(Error::Domain(format!(
                "rating {value} is not a multiple of 0.5 in [0.5, 5.0]"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The two interaction types found in the rating log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    Rating(Rating),
    Tag,
}

/// One timestamped user-item interaction; the raw input atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    /// Seconds since epoch.
    pub time: i64,
    pub user: u32,
    pub item: u32,
    pub kind: EventKind,
}

impl Event {
    pub fn rating(time: i64, user: u32, item: u32, rating: f64) -> Result<Event> {
        Ok(Event {
            time,
            user,
            item,
            kind: EventKind::Rating(Rating::new(rating)?),
        })
    }

    pub fn tag(time: i64, user: u32, item: u32) -> Event {
        Event {
            time,
            user,
            item,
            kind: EventKind::Tag,
        }
    }

    /// The rating value, present iff this is a rating event.
    pub fn rating_value(&self) -> Option<f64> {
        match self.kind {
            EventKind::Rating(r) => Some(r.value()),
            EventKind::Tag => None,
        }
    }
}

/// A time interval with integer-second endpoints, `begin < end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub begin: i64,
    pub end: i64,
}

impl Interval {
    pub fn new(begin: i64, end: i64) -> Result<Interval> {
        if begin < end {
            Ok(Interval { begin, end })
        } else {
            Err(Error::Domain(format!(
                "interval [{begin}, {end}) is empty or reversed"
            )))
        }
    }

    pub fn length(&self) -> i64 {
        self.end - self.begin
    }

    /// Point containment for degree queries: both endpoints count.
    pub fn contains_point(&self, t: f64) -> bool {
        self.begin as f64 <= t && t <= self.end as f64
    }

    /// Half-open containment: does this interval cover all of `other`?
    pub fn covers(&self, other: Interval) -> bool {
        self.begin <= other.begin && other.end <= self.end
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {})", self.begin, self.end)
    }
}

/// One side of the bipartite node set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    User(u32),
    Item(u32),
}

impl std::fmt::Display for Node {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Node::User(id) => write!(f, "user {id}"),
            Node::Item(id) => write!(f, "item {id}"),
        }
    }
}

/// A maximal-interval link between a user and an item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub user: u32,
    pub item: u32,
    pub interval: Interval,
}

/// A bipartite link stream: time span plus maximal-interval links.
///
/// Immutable after construction; all queries are read-only and safe to run
/// from any number of threads.
#[derive(Debug, Clone)]
pub struct LinkStream {
    span: Interval,
    delta: Option<i64>,
    /// Sorted by (user, item, begin); intervals of the same pair are
    /// pairwise disjoint and non-adjacent.
    links: Vec<Link>,
    /// Contiguous index range into `links` per user.
    user_ranges: HashMap<u32, (u32, u32)>,
    /// Link indices per item, ascending (hence sorted by user id).
    item_links: HashMap<u32, Vec<u32>>,
}

impl LinkStream {
    /// Expand instantaneous events into `[t, t+delta)` presences (clipped at
    /// the span end) and merge them into maximal links.
    pub fn build(events: &[Event], delta: i64, span: Interval) -> Result<LinkStream> {
        if delta <= 0 {
            return Err(Error::Config(format!(
                "event-expansion delta must be positive, got {delta}"
            )));
        }
        let mut raw = Vec::with_capacity(events.len());
        for ev in events {
            if ev.time < span.begin || ev.time >= span.end {
                return Err(Error::Domain(format!(
                    "event at t={} (user {}, item {}) lies outside span {}",
                    ev.time, ev.user, ev.item, span
                )));
            }
            let end = (ev.time + delta).min(span.end);
            raw.push((ev.user, ev.item, ev.time, end));
        }
        let mut stream = Self::from_raw_links(span, raw)?;
        stream.delta = Some(delta);
        Ok(stream)
    }

    /// Build directly from interval links, merging any overlapping or
    /// touching intervals of the same pair.
    pub fn from_links<I>(span: Interval, raw: I) -> Result<LinkStream>
    where
        I: IntoIterator<Item = (u32, u32, i64, i64)>,
    {
        Self::from_raw_links(span, raw.into_iter().collect())
    }

    fn from_raw_links(span: Interval, mut raw: Vec<(u32, u32, i64, i64)>) -> Result<LinkStream> {
        for &(user, item, begin, end) in &raw {
            if begin >= end {
                return Err(Error::Domain(format!(
                    "link (user {user}, item {item}) has empty interval [{begin}, {end})"
                )));
            }
            if begin < span.begin || end > span.end {
                return Err(Error::Domain(format!(
                    "link (user {user}, item {item}, [{begin}, {end})) lies outside span {span}"
                )));
            }
        }
        raw.sort_unstable();
        let mut links: Vec<Link> = Vec::with_capacity(raw.len());
        for (user, item, begin, end) in raw {
            if let Some(last) = links.last_mut() {
                if last.user == user && last.item == item && begin <= last.interval.end {
                    last.interval.end = last.interval.end.max(end);
                    continue;
                }
            }
            links.push(Link {
                user,
                item,
                interval: Interval { begin, end },
            });
        }

        let mut user_ranges: HashMap<u32, (u32, u32)> = HashMap::new();
        let mut item_links: HashMap<u32, Vec<u32>> = HashMap::new();
        for (idx, link) in links.iter().enumerate() {
            let idx = idx as u32;
            user_ranges
                .entry(link.user)
                .and_modify(|(_, e)| *e = idx + 1)
                .or_insert((idx, idx + 1));
            item_links.entry(link.item).or_default().push(idx);
        }

        Ok(LinkStream {
            span,
            delta: None,
            links,
            user_ranges,
            item_links,
        })
    }

    pub fn span(&self) -> Interval {
        self.span
    }

    /// The event-expansion duration, when the stream was built from events.
    pub fn delta(&self) -> Option<i64> {
        self.delta
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn num_users(&self) -> usize {
        self.user_ranges.len()
    }

    pub fn num_items(&self) -> usize {
        self.item_links.len()
    }

    pub fn users(&self) -> impl Iterator<Item = u32> + '_ {
        self.user_ranges.keys().copied()
    }

    pub fn items(&self) -> impl Iterator<Item = u32> + '_ {
        self.item_links.keys().copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.users()
            .map(Node::User)
            .chain(self.items().map(Node::Item))
    }

    /// The stored maximal intervals of one pair, sorted by begin.
    pub fn pair_links(&self, user: u32, item: u32) -> &[Link] {
        let Some(&(lo, hi)) = self.user_ranges.get(&user) else {
            return &[];
        };
        let slice = &self.links[lo as usize..hi as usize];
        let start = slice.partition_point(|l| l.item < item);
        let end = slice.partition_point(|l| l.item <= item);
        &slice[start..end]
    }

    /// The unique stored interval of `(user, item)` covering `window`
    /// entirely, if any. Stored intervals are disjoint and non-adjacent, so
    /// continuous coverage of a window means single-interval containment.
    pub fn covering_interval(&self, user: u32, item: u32, window: Interval) -> Option<Interval> {
        let links = self.pair_links(user, item);
        // last interval with begin <= window.begin
        let pos = links.partition_point(|l| l.interval.begin <= window.begin);
        if pos == 0 {
            return None;
        }
        let candidate = links[pos - 1].interval;
        candidate.covers(window).then_some(candidate)
    }

    /// All link intervals of one node, in unspecified order.
    pub fn node_intervals(&self, node: Node) -> impl Iterator<Item = Interval> + '_ {
        let (range, indices) = match node {
            Node::User(id) => (self.user_ranges.get(&id).copied(), None),
            Node::Item(id) => (None, self.item_links.get(&id)),
        };
        let from_range = range
            .into_iter()
            .flat_map(move |(lo, hi)| self.links[lo as usize..hi as usize].iter())
            .map(|l| l.interval);
        let from_indices = indices
            .into_iter()
            .flatten()
            .map(move |&i| self.links[i as usize].interval);
        from_range.chain(from_indices)
    }

    /// Distinct partner ids of one node, ascending.
    pub fn partners(&self, node: Node) -> Vec<u32> {
        let mut out: Vec<u32> = match node {
            Node::User(id) => self
                .node_links(Node::User(id))
                .map(|l| l.item)
                .collect(),
            Node::Item(id) => self
                .node_links(Node::Item(id))
                .map(|l| l.user)
                .collect(),
        };
        out.dedup();
        out
    }

    fn node_links(&self, node: Node) -> Box<dyn Iterator<Item = &Link> + '_> {
        match node {
            Node::User(id) => match self.user_ranges.get(&id) {
                Some(&(lo, hi)) => Box::new(self.links[lo as usize..hi as usize].iter()),
                None => Box::new(std::iter::empty()),
            },
            Node::Item(id) => match self.item_links.get(&id) {
                Some(indices) => Box::new(indices.iter().map(|&i| &self.links[i as usize])),
                None => Box::new(std::iter::empty()),
            },
        }
    }

    /// Number of distinct partners linked to `node` at instant `t`.
    ///
    /// Unknown nodes yield 0 so that fold-specific streams degrade
    /// gracefully; a query outside the span is a domain error.
    pub fn instantaneous_degree(&self, node: Node, t: f64) -> Result<usize> {
        if !self.span.contains_point(t) {
            return Err(Error::Domain(format!(
                "t={t} lies outside span {}",
                self.span
            )));
        }
        // Intervals of the same pair never share a point, so each containing
        // interval is a distinct partner.
        Ok(self
            .node_intervals(node)
            .filter(|iv| iv.contains_point(t))
            .count())
    }

    /// Sum of the node's link interval lengths (exact integer arithmetic).
    pub fn total_presence(&self, node: Node) -> i64 {
        self.node_intervals(node).map(|iv| iv.length()).sum()
    }

    /// Write the sorted `user item begin end` text form, one link per line,
    /// preceded by a `# span begin end` comment.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# span {} {}", self.span.begin, self.span.end)?;
        for link in &self.links {
            writeln!(
                w,
                "{} {} {} {}",
                link.user, link.item, link.interval.begin, link.interval.end
            )?;
        }
        Ok(())
    }

    /// Parse the text form written by [`write_text`](Self::write_text).
    ///
    /// Lines starting with `#` are comments; a `# span b e` comment fixes
    /// the span, otherwise it is inferred from the links.
    pub fn read_text<R: BufRead>(r: R) -> Result<LinkStream> {
        let mut span: Option<Interval> = None;
        let mut raw: Vec<(u32, u32, i64, i64)> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let lineno = lineno as u64 + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                if parts.next() == Some("span") {
                    let begin = parse_field::<i64>(parts.next(), lineno, "span begin")?;
                    let end = parse_field::<i64>(parts.next(), lineno, "span end")?;
                    span = Some(Interval::new(begin, end)?);
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let user = parse_field::<u32>(parts.next(), lineno, "user")?;
            let item = parse_field::<u32>(parts.next(), lineno, "item")?;
            let begin = parse_field::<i64>(parts.next(), lineno, "begin")?;
            let end = parse_field::<i64>(parts.next(), lineno, "end")?;
            if parts.next().is_some() {
                return Err(Error::parse(lineno, "expected `user item begin end`"));
            }
            raw.push((user, item, begin, end));
        }
        let span = match span {
            Some(s) => s,
            None => {
                let begin = raw.iter().map(|r| r.2).min().ok_or_else(|| {
                    Error::Domain("stream text holds no links and no span".into())
                })?;
                let end = raw.iter().map(|r| r.3).max().unwrap();
                Interval::new(begin, end)?
            }
        };
        Self::from_raw_links(span, raw)
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: u64, name: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::parse(line, format!("missing {name}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed {name}")))
}

/// The static bipartite graph induced by a stream: edge (u, i) present iff
/// the stream has at least one link for the pair.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    /// Sorted item ids per user.
    user_adj: HashMap<u32, Vec<u32>>,
    /// Sorted user ids per item.
    item_adj: HashMap<u32, Vec<u32>>,
    num_edges: usize,
}

impl BipartiteGraph {
    pub fn degree(&self, node: Node) -> usize {
        self.neighbors(node).len()
    }

    pub fn neighbors(&self, node: Node) -> &[u32] {
        let adj = match node {
            Node::User(id) => self.user_adj.get(&id),
            Node::Item(id) => self.item_adj.get(&id),
        };
        adj.map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_edge(&self, user: u32, item: u32) -> bool {
        self.neighbors(Node::User(user)).binary_search(&item).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_users(&self) -> usize {
        self.user_adj.len()
    }

    pub fn num_items(&self) -> usize {
        self.item_adj.len()
    }

    pub fn users(&self) -> impl Iterator<Item = u32> + '_ {
        self.user_adj.keys().copied()
    }

    pub fn items(&self) -> impl Iterator<Item = u32> + '_ {
        self.item_adj.keys().copied()
    }
}

/// Build the induced graph of a stream.
pub fn induced_graph(stream: &LinkStream) -> BipartiteGraph {
    let mut user_adj: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut item_adj: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut num_edges = 0;
    let mut prev: Option<(u32, u32)> = None;
    for link in stream.links() {
        let pair = (link.user, link.item);
        if prev == Some(pair) {
            continue;
        }
        prev = Some(pair);
        num_edges += 1;
        user_adj.entry(link.user).or_default().push(link.item);
        item_adj.entry(link.item).or_default().push(link.user);
    }
    for items in user_adj.values_mut() {
        items.sort_unstable();
        items.dedup();
    }
    for users in item_adj.values_mut() {
        // already ascending: links are sorted by user first
        users.dedup();
    }
    BipartiteGraph {
        user_adj,
        item_adj,
        num_edges,
    }
}

/// Per-node ordered event times, taken from the raw (unexpanded) events.
///
/// Duplicates are retained: two simultaneous events of one node contribute
/// two entries.
#[derive(Debug, Clone, Default)]
pub struct PresenceIndex {
    user_times: HashMap<u32, Vec<i64>>,
    item_times: HashMap<u32, Vec<i64>>,
}

impl PresenceIndex {
    pub fn from_events<'a, I>(events: I) -> PresenceIndex
    where
        I: IntoIterator<Item = &'a Event>,
    {
        let mut index = PresenceIndex::default();
        for ev in events {
            index.user_times.entry(ev.user).or_default().push(ev.time);
            index.item_times.entry(ev.item).or_default().push(ev.time);
        }
        for times in index.user_times.values_mut() {
            times.sort_unstable();
        }
        for times in index.item_times.values_mut() {
            times.sort_unstable();
        }
        index
    }

    /// Sorted event times of one node; empty for unknown nodes.
    pub fn times(&self, node: Node) -> &[i64] {
        let times = match node {
            Node::User(id) => self.user_times.get(&id),
            Node::Item(id) => self.item_times.get(&id),
        };
        times.map(Vec::as_slice).unwrap_or(&[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The worked micro-stream: span [0,10), users {1:u, 2:v},
    /// items {1:x, 2:y}, links ux=[2,7)+[9,10), uy=[1,2), vx=[3,8), vy=[4,5).
    fn micro_stream() -> LinkStream {
        LinkStream::from_links(
            Interval::new(0, 10).unwrap(),
            vec![
                (1, 1, 2, 7),
                (1, 1, 9, 10),
                (1, 2, 1, 2),
                (2, 1, 3, 8),
                (2, 2, 4, 5),
            ],
        )
        .unwrap()
    }

    fn ev(t: i64, u: u32, i: u32) -> Event {
        Event::rating(t, u, i, 3.0).unwrap()
    }

    #[test]
    fn build_merges_overlapping_presences() {
        let span = Interval::new(0, 10).unwrap();
        let s = LinkStream::build(&[ev(2, 1, 1), ev(4, 1, 1)], 3, span).unwrap();
        assert_eq!(s.num_links(), 1);
        assert_eq!(s.links()[0].interval, Interval { begin: 2, end: 7 });
    }

    #[test]
    fn build_keeps_disjoint_presences_separate() {
        let span = Interval::new(0, 10).unwrap();
        let s = LinkStream::build(&[ev(2, 1, 1), ev(9, 1, 1)], 1, span).unwrap();
        let intervals: Vec<_> = s.links().iter().map(|l| l.interval).collect();
        assert_eq!(
            intervals,
            vec![Interval { begin: 2, end: 3 }, Interval { begin: 9, end: 10 }]
        );
    }

    #[test]
    fn build_merges_adjacent_presences() {
        let span = Interval::new(0, 20).unwrap();
        let s = LinkStream::build(&[ev(2, 1, 1), ev(5, 1, 1)], 3, span).unwrap();
        assert_eq!(s.num_links(), 1);
        assert_eq!(s.links()[0].interval, Interval { begin: 2, end: 8 });
    }

    #[test]
    fn build_clips_at_span_end() {
        let span = Interval::new(0, 10).unwrap();
        let s = LinkStream::build(&[ev(9, 1, 1)], 5, span).unwrap();
        assert_eq!(s.links()[0].interval, Interval { begin: 9, end: 10 });
    }

    #[test]
    fn build_rejects_event_outside_span() {
        let span = Interval::new(0, 10).unwrap();
        let err = LinkStream::build(&[ev(12, 7, 3)], 1, span).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("t=12") && msg.contains("user 7") && msg.contains("item 3"));
    }

    #[test]
    fn build_rejects_nonpositive_delta() {
        let span = Interval::new(0, 10).unwrap();
        assert!(matches!(
            LinkStream::build(&[ev(2, 1, 1)], 0, span),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn micro_stream_shape() {
        let s = micro_stream();
        assert_eq!(s.num_links(), 5);
        assert_eq!(s.num_users(), 2);
        assert_eq!(s.num_items(), 2);
    }

    #[test]
    fn induced_graph_of_micro_stream() {
        let g = induced_graph(&micro_stream());
        assert_eq!(g.num_edges(), 4);
        for (u, i) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!(g.has_edge(u, i));
        }
    }

    #[test]
    fn induced_graph_of_empty_stream() {
        let s = LinkStream::from_links(Interval::new(0, 10).unwrap(), vec![]).unwrap();
        let g = induced_graph(&s);
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn induced_graph_deduplicates_pairs() {
        let s = LinkStream::from_links(
            Interval::new(0, 10).unwrap(),
            vec![(1, 1, 2, 7), (1, 1, 9, 10)],
        )
        .unwrap();
        let g = induced_graph(&s);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.degree(Node::User(1)), 1);
    }

    #[test]
    fn instantaneous_degree_on_micro_stream() {
        let s = micro_stream();
        // u at t=2: ux active on [2,7], uy active on [1,2]
        assert_eq!(s.instantaneous_degree(Node::User(1), 2.0).unwrap(), 2);
        // y at t=3: no interval contains 3
        assert_eq!(s.instantaneous_degree(Node::Item(2), 3.0).unwrap(), 0);
        // x at t=5: ux and vx both active
        assert_eq!(s.instantaneous_degree(Node::Item(1), 5.0).unwrap(), 2);
    }

    #[test]
    fn instantaneous_degree_outside_span_is_domain_error() {
        let s = micro_stream();
        assert!(s.instantaneous_degree(Node::User(1), 11.0).is_err());
        assert!(s.instantaneous_degree(Node::User(1), -0.5).is_err());
    }

    #[test]
    fn unknown_node_has_zero_degree() {
        let s = micro_stream();
        assert_eq!(s.instantaneous_degree(Node::User(99), 5.0).unwrap(), 0);
        assert_eq!(s.total_presence(Node::Item(99)), 0);
    }

    #[test]
    fn presence_times_are_sorted_with_duplicates() {
        let events = vec![ev(7, 1, 1), ev(1, 1, 2), ev(3, 1, 1)];
        let idx = PresenceIndex::from_events(&events);
        assert_eq!(idx.times(Node::User(1)), &[1, 3, 7]);

        let single = vec![ev(4, 2, 1)];
        let idx = PresenceIndex::from_events(&single);
        assert_eq!(idx.times(Node::User(2)), &[4]);

        let simultaneous = vec![ev(5, 3, 1), ev(5, 3, 2)];
        let idx = PresenceIndex::from_events(&simultaneous);
        assert_eq!(idx.times(Node::User(3)), &[5, 5]);
        assert_eq!(idx.times(Node::User(42)), &[] as &[i64]);
    }

    #[test]
    fn covering_interval_lookup() {
        let s = micro_stream();
        assert_eq!(
            s.covering_interval(1, 1, Interval { begin: 3, end: 6 }),
            Some(Interval { begin: 2, end: 7 })
        );
        assert_eq!(s.covering_interval(1, 1, Interval { begin: 3, end: 8 }), None);
        // window straddling the gap between the two ux links
        assert_eq!(s.covering_interval(1, 1, Interval { begin: 6, end: 9 }), None);
        assert_eq!(s.covering_interval(9, 9, Interval { begin: 3, end: 6 }), None);
    }

    #[test]
    fn text_round_trip() {
        let s = micro_stream();
        let mut buf = Vec::new();
        s.write_text(&mut buf).unwrap();
        let parsed = LinkStream::read_text(buf.as_slice()).unwrap();
        assert_eq!(parsed.span(), s.span());
        assert_eq!(parsed.links(), s.links());
    }

    #[test]
    fn text_parse_errors_carry_line_numbers() {
        let err = LinkStream::read_text("1 1 2 7\n1 x 9 10\n".as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 2"));
    }

    #[test]
    fn order_independence_smoke() {
        let span = Interval::new(0, 100).unwrap();
        let events = vec![ev(5, 1, 1), ev(2, 1, 1), ev(30, 2, 1), ev(7, 1, 2)];
        let mut reversed = events.clone();
        reversed.reverse();
        let a = LinkStream::build(&events, 10, span).unwrap();
        let b = LinkStream::build(&reversed, 10, span).unwrap();
        assert_eq!(a.links(), b.links());
    }
}
