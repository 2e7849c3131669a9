//! Content-based features: genre one-hots, release-decade one-hots, and
//! per-entity rating statistics.
//!
//! All statistics are computed from the training fold only; entities absent
//! from the training fold get a cold-start sentinel (global training mean,
//! zero spread, zero normalized count) so downstream regression inputs stay
//! finite without inventing signal.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::stream::{Event, EventKind};

/// Canonical genre vocabulary, alphabetical. One-hot columns are emitted in
/// this order, followed by the no-genre indicator.
///
/// "IMAX" appears in the raw catalog as a screening-format tag rather than a
/// genre; it is dropped at parse time to keep the vocabulary at 18.
pub const GENRES: [&str; 18] = [
    "Action",
    "Adventure",
    "Animation",
    "Children",
    "Comedy",
    "Crime",
    "Documentary",
    "Drama",
    "Fantasy",
    "Film-Noir",
    "Horror",
    "Musical",
    "Mystery",
    "Romance",
    "Sci-Fi",
    "Thriller",
    "War",
    "Western",
];

/// Width of the genre one-hot block: 18 genres + 1 no-genre indicator.
pub const GENRE_ONEHOT_WIDTH: usize = GENRES.len() + 1;

/// Decades spanned by the decade one-hot block: 1880s through 2010s.
pub const DECADE_FIRST: i32 = 188;
pub const DECADE_COUNT: usize = 14;

/// A set of canonical genres, stored as a bitmask over [`GENRES`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct GenreSet(u32);

impl GenreSet {
    pub fn empty() -> GenreSet {
        GenreSet(0)
    }

    /// Look up one label; unknown labels are a validation error.
    pub fn index_of(label: &str) -> Result<usize> {
        GENRES
            .iter()
            .position(|g| *g == label)
            .ok_or_else(|| Error::Domain(format!("unknown genre label {label:?}")))
    }

    pub fn from_labels<'a, I>(labels: I) -> Result<GenreSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut mask = 0u32;
        for label in labels {
            mask |= 1 << Self::index_of(label)?;
        }
        Ok(GenreSet(mask))
    }

    pub fn insert(&mut self, index: usize) {
        debug_assert!(index < GENRES.len());
        self.0 |= 1 << index;
    }

    pub fn contains(&self, label: &str) -> bool {
        Self::index_of(label).is_ok_and(|i| self.0 & (1 << i) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }
}

/// Genre one-hot: bit per canonical genre plus a trailing no-genre flag.
pub fn genre_onehot(genres: GenreSet) -> [u8; GENRE_ONEHOT_WIDTH] {
    let mut out = [0u8; GENRE_ONEHOT_WIDTH];
    for i in 0..GENRES.len() {
        out[i] = ((genres.0 >> i) & 1) as u8;
    }
    out[GENRES.len()] = genres.is_empty() as u8;
    out
}

/// Decade one-hot over 14 bins (1880s..2010s). Years outside the span clamp
/// to the nearest bin; an absent year leaves all bins zero.
pub fn decade_onehot(release_year: Option<i32>) -> [u8; DECADE_COUNT] {
    let mut out = [0u8; DECADE_COUNT];
    if let Some(year) = release_year {
        let decade = year.div_euclid(10);
        let bin = decade.clamp(DECADE_FIRST, DECADE_FIRST + DECADE_COUNT as i32 - 1);
        out[(bin - DECADE_FIRST) as usize] = 1;
    }
    out
}

/// Rating statistics of one user or one movie over the training fold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntityRatingStats {
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    /// Rating count divided by the maximum count over all entities of the
    /// same side.
    pub count_normalized: f64,
}

impl EntityRatingStats {
    /// Cold-start sentinel for an entity with no training ratings.
    pub fn sentinel(global_mean: f64) -> EntityRatingStats {
        EntityRatingStats {
            mean: global_mean,
            median: global_mean,
            std_dev: 0.0,
            min: global_mean,
            max: global_mean,
            count_normalized: 0.0,
        }
    }
}

/// Mean, median (lower-middle for even counts), population standard
/// deviation, min and max of one entity's ratings. `values` must be sorted.
fn stats_of_sorted(values: &[f64]) -> (f64, f64, f64, f64, f64) {
    debug_assert!(!values.is_empty());
    debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let median = values[(values.len() - 1) / 2];
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, median, var.sqrt(), values[0], values[values.len() - 1])
}

/// Statistics for one entity given its training-fold ratings and the maximum
/// rating count over entities of the same side.
pub fn entity_rating_stats(ratings: &[f64], max_count: usize, global_mean: f64) -> EntityRatingStats {
    if ratings.is_empty() {
        return EntityRatingStats::sentinel(global_mean);
    }
    let mut sorted = ratings.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (mean, median, std_dev, min, max) = stats_of_sorted(&sorted);
    EntityRatingStats {
        mean,
        median,
        std_dev,
        min,
        max,
        count_normalized: ratings.len() as f64 / max_count.max(1) as f64,
    }
}

/// Training-fold rating statistics for every user and movie, with cold-start
/// sentinels for entities outside the fold.
#[derive(Debug, Clone)]
pub struct RatingStatsTable {
    user_stats: HashMap<u32, EntityRatingStats>,
    item_stats: HashMap<u32, EntityRatingStats>,
    global_mean: f64,
}

impl RatingStatsTable {
    /// Build from the training-fold rating events. Tag events carry no
    /// rating and are ignored.
    pub fn from_training(events: &[Event]) -> RatingStatsTable {
        let mut user_values: HashMap<u32, Vec<f64>> = HashMap::new();
        let mut item_values: HashMap<u32, Vec<f64>> = HashMap::new();
        let mut sum = 0.0;
        let mut count = 0u64;
        for ev in events {
            if let EventKind::Rating(r) = ev.kind {
                let value = r.value();
                user_values.entry(ev.user).or_default().push(value);
                item_values.entry(ev.item).or_default().push(value);
                sum += value;
                count += 1;
            }
        }
        let global_mean = if count > 0 { sum / count as f64 } else { 0.0 };

        let build_side = |values: HashMap<u32, Vec<f64>>| {
            let max_count = values.values().map(Vec::len).max().unwrap_or(0);
            values
                .into_iter()
                .map(|(id, mut vs)| {
                    vs.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let (mean, median, std_dev, min, max) = stats_of_sorted(&vs);
                    let stats = EntityRatingStats {
                        mean,
                        median,
                        std_dev,
                        min,
                        max,
                        count_normalized: vs.len() as f64 / max_count as f64,
                    };
                    (id, stats)
                })
                .collect::<HashMap<_, _>>()
        };

        RatingStatsTable {
            user_stats: build_side(user_values),
            item_stats: build_side(item_values),
            global_mean,
        }
    }

    pub fn global_mean(&self) -> f64 {
        self.global_mean
    }

    pub fn user(&self, id: u32) -> EntityRatingStats {
        self.user_stats
            .get(&id)
            .copied()
            .unwrap_or_else(|| EntityRatingStats::sentinel(self.global_mean))
    }

    pub fn item(&self, id: u32) -> EntityRatingStats {
        self.item_stats
            .get(&id)
            .copied()
            .unwrap_or_else(|| EntityRatingStats::sentinel(self.global_mean))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn onehot_of_two_genres() {
        let set = GenreSet::from_labels(["Action", "Comedy"]).unwrap();
        let hot = genre_onehot(set);
        assert_eq!(hot.iter().map(|&b| b as u32).sum::<u32>(), 2);
        assert_eq!(hot[0], 1); // Action
        assert_eq!(hot[4], 1); // Comedy
        assert_eq!(hot[GENRES.len()], 0);
    }

    #[test]
    fn onehot_of_empty_set_flags_no_genre() {
        let hot = genre_onehot(GenreSet::empty());
        assert_eq!(hot.iter().map(|&b| b as u32).sum::<u32>(), 1);
        assert_eq!(hot[GENRES.len()], 1);
    }

    #[test]
    fn onehot_of_all_genres() {
        let set = GenreSet::from_labels(GENRES).unwrap();
        let hot = genre_onehot(set);
        assert_eq!(hot[..GENRES.len()], [1u8; 18]);
        assert_eq!(hot[GENRES.len()], 0);
    }

    #[test]
    fn unknown_genre_label_is_rejected() {
        assert!(GenreSet::from_labels(["Kung-Fu"]).is_err());
    }

    #[test]
    fn decade_bins() {
        let hot = decade_onehot(Some(1995));
        assert_eq!(hot[(199 - DECADE_FIRST) as usize], 1);
        assert_eq!(hot.iter().map(|&b| b as u32).sum::<u32>(), 1);

        assert_eq!(decade_onehot(None), [0u8; DECADE_COUNT]);

        // 2015 falls in the final (2010s) bin
        let hot = decade_onehot(Some(2015));
        assert_eq!(hot[DECADE_COUNT - 1], 1);

        // clamping
        assert_eq!(decade_onehot(Some(1700))[0], 1);
        assert_eq!(decade_onehot(Some(2150))[DECADE_COUNT - 1], 1);
    }

    #[test]
    fn stats_of_three_ratings() {
        let stats = entity_rating_stats(&[3.0, 4.0, 5.0], 10, 0.0);
        assert_eq!(stats.mean, 4.0);
        assert_eq!(stats.median, 4.0);
        assert!((stats.std_dev - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(stats.min, 3.0);
        assert_eq!(stats.max, 5.0);
        assert_eq!(stats.count_normalized, 0.3);
    }

    #[test]
    fn stats_of_single_rating() {
        let stats = entity_rating_stats(&[2.5], 1, 0.0);
        assert_eq!(
            (stats.mean, stats.median, stats.min, stats.max, stats.std_dev),
            (2.5, 2.5, 2.5, 2.5, 0.0)
        );
    }

    #[test]
    fn median_uses_lower_middle_for_even_counts() {
        let stats = entity_rating_stats(&[1.0, 2.0, 3.0, 4.0], 4, 0.0);
        assert_eq!(stats.median, 2.0);
    }

    #[test]
    fn cold_start_sentinel() {
        let events = vec![
            Event::rating(1, 1, 1, 4.0).unwrap(),
            Event::rating(2, 1, 2, 2.0).unwrap(),
        ];
        let table = RatingStatsTable::from_training(&events);
        assert_eq!(table.global_mean(), 3.0);
        let missing = table.user(99);
        assert_eq!(missing.mean, 3.0);
        assert_eq!(missing.median, 3.0);
        assert_eq!(missing.min, 3.0);
        assert_eq!(missing.max, 3.0);
        assert_eq!(missing.std_dev, 0.0);
        assert_eq!(missing.count_normalized, 0.0);
    }

    #[test]
    fn count_normalized_is_per_side() {
        let events = vec![
            Event::rating(1, 1, 1, 4.0).unwrap(),
            Event::rating(2, 1, 2, 2.0).unwrap(),
            Event::rating(3, 2, 1, 5.0).unwrap(),
        ];
        let table = RatingStatsTable::from_training(&events);
        // user 1 has 2 of max 2 ratings, user 2 has 1 of 2
        assert_eq!(table.user(1).count_normalized, 1.0);
        assert_eq!(table.user(2).count_normalized, 0.5);
        // item 1 has 2 of max 2, item 2 has 1 of 2
        assert_eq!(table.item(1).count_normalized, 1.0);
        assert_eq!(table.item(2).count_normalized, 0.5);
    }

    #[test]
    fn tags_do_not_feed_stats() {
        let events = vec![
            Event::rating(1, 1, 1, 4.0).unwrap(),
            Event::tag(2, 1, 1),
            Event::tag(3, 2, 2),
        ];
        let table = RatingStatsTable::from_training(&events);
        assert_eq!(table.user(1).count_normalized, 1.0);
        assert_eq!(table.user(2).count_normalized, 0.0);
        assert_eq!(table.global_mean(), 4.0);
    }
}
