//! MovieLens-format CSV ingestion and cross-validation folds.
//!
//! Reads `ratings.csv`, `movies.csv` and `tags.csv` (UTF-8, RFC-4180
//! quoting). Tag text is discarded at parse time; tags only contribute
//! (time, user, item) connections.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::content::GenreSet;
use crate::error::{Error, Result};
use crate::stream::{Event, EventKind};

/// One row of the movie catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct MovieRecord {
    pub item: u32,
    /// Title kept verbatim, including any trailing "(YYYY)".
    pub title: String,
    /// Parsed from the trailing parenthesized 4-digit group, when present
    /// and within [1850, 2100].
    pub release_year: Option<i32>,
    pub genres: GenreSet,
}

fn csv_reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(source)
}

fn check_header(reader: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(
            1,
            format!(
                "expected header {:?}, found {:?}",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    Ok(())
}

fn record_line(record: &csv::ByteRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_num<T: std::str::FromStr>(field: Option<&[u8]>, line: u64, name: &str) -> Result<T> {
    let bytes = field.ok_or_else(|| Error::parse(line, format!("missing {name} field")))?;
    std::str::from_utf8(bytes)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| {
            Error::parse(
                line,
                format!("malformed {name} field {:?}", String::from_utf8_lossy(bytes)),
            )
        })
}

/// Parse `ratings.csv` (`userId,movieId,rating,timestamp`) into rating
/// events, in file order.
pub fn parse_ratings<R: Read>(source: R) -> Result<Vec<Event>> {
    let mut reader = csv_reader(source);
    check_header(&mut reader, &["userId", "movieId", "rating", "timestamp"])?;
    let mut events = Vec::new();
    let mut record = csv::ByteRecord::new();
    loop {
        match reader.read_byte_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                return Err(Error::parse(
                    e.position().map(|p| p.line()).unwrap_or(0),
                    e.to_string(),
                ))
            }
        }
        let line = record_line(&record);
        if record.len() != 4 {
            return Err(Error::parse(line, format!("expected 4 fields, found {}", record.len())));
        }
        let user: u32 = parse_num(record.get(0), line, "userId")?;
        let item: u32 = parse_num(record.get(1), line, "movieId")?;
        let rating: f64 = parse_num(record.get(2), line, "rating")?;
        let time: i64 = parse_num(record.get(3), line, "timestamp")?;
        let event = Event::rating(time, user, item, rating)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        events.push(event);
    }
    Ok(events)
}

/// Parse `tags.csv` (`userId,movieId,tag,timestamp`) into tag events. The
/// tag text is discarded; duplicates are retained.
pub fn parse_tags<R: Read>(source: R) -> Result<Vec<Event>> {
    let mut reader = csv_reader(source);
    check_header(&mut reader, &["userId", "movieId", "tag", "timestamp"])?;
    let mut events = Vec::new();
    let mut record = csv::ByteRecord::new();
    loop {
        match reader.read_byte_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                return Err(Error::parse(
                    e.position().map(|p| p.line()).unwrap_or(0),
                    e.to_string(),
                ))
            }
        }
        let line = record_line(&record);
        if record.len() != 4 {
            return Err(Error::parse(line, format!("expected 4 fields, found {}", record.len())));
        }
        let user: u32 = parse_num(record.get(0), line, "userId")?;
        let item: u32 = parse_num(record.get(1), line, "movieId")?;
        let time: i64 = parse_num(record.get(3), line, "timestamp")?;
        events.push(Event::tag(time, user, item));
    }
    Ok(events)
}

/// Extract the release year from a trailing "(YYYY)" group in the title.
fn release_year_of(title: &str) -> Option<i32> {
    let trimmed = title.trim_end();
    let rest = trimmed.strip_suffix(')')?;
    let open = rest.rfind('(')?;
    let digits = &rest[open + 1..];
    if digits.len() != 4 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let year: i32 = digits.parse().ok()?;
    (1850..=2100).contains(&year).then_some(year)
}

/// Parse one pipe-separated genre field into a [`GenreSet`].
///
/// "(no genres listed)" maps to the empty set and "IMAX" (a screening
/// format, not a genre) is dropped; any other unknown label is an error.
fn parse_genres(field: &str, line: u64) -> Result<GenreSet> {
    if field == "(no genres listed)" || field.is_empty() {
        return Ok(GenreSet::empty());
    }
    let mut set = GenreSet::empty();
    for label in field.split('|') {
        if label == "IMAX" {
            continue;
        }
        let idx = GenreSet::index_of(label).map_err(|e| Error::parse(line, e.to_string()))?;
        set.insert(idx);
    }
    Ok(set)
}

/// Parse `movies.csv` (`movieId,title,genres`); titles may be quoted and
/// contain commas.
pub fn parse_movies<R: Read>(source: R) -> Result<Vec<MovieRecord>> {
    let mut reader = csv_reader(source);
    check_header(&mut reader, &["movieId", "title", "genres"])?;
    let mut movies = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| Error::parse(e.position().map(|p| p.line()).unwrap_or(0), e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            return Err(Error::parse(line, format!("expected 3 fields, found {}", record.len())));
        }
        let item: u32 = record
            .get(0)
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(line, format!("malformed movieId {:?}", record.get(0).unwrap())))?;
        let title = record.get(1).unwrap().to_owned();
        let release_year = release_year_of(&title);
        let genres = parse_genres(record.get(2).unwrap(), line)?;
        movies.push(MovieRecord {
            item,
            title,
            release_year,
            genres,
        });
    }
    Ok(movies)
}

/// Write rating events back out in `ratings.csv` format.
pub fn write_ratings_csv<W: Write>(events: &[Event], mut w: W) -> Result<()> {
    let fmt_err = |e: std::io::Error| Error::io("<ratings csv>", e);
    writeln!(w, "userId,movieId,rating,timestamp").map_err(fmt_err)?;
    for ev in events {
        let rating = ev
            .rating_value()
            .ok_or_else(|| Error::Domain("tag events do not belong in ratings.csv".into()))?;
        writeln!(w, "{},{},{},{}", ev.user, ev.item, rating, ev.time).map_err(fmt_err)?;
    }
    Ok(())
}

/// Assignment of rating events to cross-validation folds.
///
/// Tag events are never assigned: they carry no prediction target and stay
/// on the training side of every fold.
#[derive(Debug, Clone)]
pub struct FoldAssignment {
    fold_count: usize,
    /// Fold id per rating event, index-aligned with the input slice.
    assignment: Vec<u32>,
}

impl FoldAssignment {
    pub fn fold_count(&self) -> usize {
        self.fold_count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn fold_of(&self, event_index: usize) -> u32 {
        self.assignment[event_index]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Size of each fold.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.fold_count];
        for &f in &self.assignment {
            counts[f as usize] += 1;
        }
        counts
    }
}

/// Uniform random assignment of rating events to `k` folds, balanced within
/// one event, deterministic given the seed.
pub fn kfold_split(events: &[Event], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::Config(format!("fold count must be at least 2, got {k}")));
    }
    if k > events.len() {
        return Err(Error::Config(format!(
            "fold count {k} exceeds the {} rating events",
            events.len()
        )));
    }
    if events.iter().any(|e| matches!(e.kind, EventKind::Tag)) {
        return Err(Error::Config(
            "tag events are never fold-assigned; split rating events only".into(),
        ));
    }
    let n = events.len();
    let base = n / k;
    let remainder = n % k;
    let mut labels = Vec::with_capacity(n);
    for fold in 0..k {
        let size = base + usize::from(fold < remainder);
        labels.extend(std::iter::repeat(fold as u32).take(size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    labels.shuffle(&mut rng);
    Ok(FoldAssignment {
        fold_count: k,
        assignment: labels,
    })
}

/// Ingest summary for one data directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestReport {
    pub rating_events: usize,
    pub distinct_users: usize,
    pub distinct_rated_items: usize,
    pub catalog_movies: usize,
    pub tag_events: usize,
}

/// The three MovieLens files of one data directory, parsed.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub ratings: Vec<Event>,
    pub tags: Vec<Event>,
    pub movies: Vec<MovieRecord>,
}

impl Dataset {
    /// Load `ratings.csv`, `movies.csv` and, when present, `tags.csv` from
    /// a directory.
    pub fn load(dir: &Path) -> Result<Dataset> {
        let open = |name: &str| {
            let path = dir.join(name);
            std::fs::File::open(&path)
                .map(std::io::BufReader::new)
                .map_err(|e| Error::io(path.display().to_string(), e))
        };
        let ratings = parse_ratings(open("ratings.csv")?)?;
        let movies = parse_movies(open("movies.csv")?)?;
        let tags_path = dir.join("tags.csv");
        let tags = if tags_path.exists() {
            parse_tags(open("tags.csv")?)?
        } else {
            Vec::new()
        };
        Ok(Dataset {
            ratings,
            tags,
            movies,
        })
    }

    pub fn report(&self) -> IngestReport {
        let mut users = HashSet::new();
        let mut items = HashSet::new();
        for ev in &self.ratings {
            users.insert(ev.user);
            items.insert(ev.item);
        }
        IngestReport {
            rating_events: self.ratings.len(),
            distinct_users: users.len(),
            distinct_rated_items: items.len(),
            catalog_movies: self.movies.len(),
            tag_events: self.tags.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_rating_row() {
        let csv = "userId,movieId,rating,timestamp\n1,122,3.5,1112486027\n";
        let events = parse_ratings(csv.as_bytes()).unwrap();
        assert_eq!(events.len(), 1);
        let ev = events[0];
        assert_eq!((ev.time, ev.user, ev.item), (1112486027, 1, 122));
        assert_eq!(ev.rating_value(), Some(3.5));
    }

    #[test]
    fn rejects_out_of_scale_rating() {
        let csv = "userId,movieId,rating,timestamp\n1,122,6.0,1112486027\n";
        let err = parse_ratings(csv.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn rejects_malformed_row_with_line_number() {
        let csv = "userId,movieId,rating,timestamp\n1,122,3.5,1112486027\nx,2,3.0,4\n";
        let err = parse_ratings(csv.as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 3"));
    }

    #[test]
    fn rejects_wrong_header() {
        let csv = "user,movie,rating,ts\n1,122,3.5,1112486027\n";
        assert!(parse_ratings(csv.as_bytes()).is_err());
    }

    #[test]
    fn parses_quoted_title_with_comma() {
        let csv = "movieId,title,genres\n11,\"American President, The (1995)\",Comedy|Drama|Romance\n";
        let movies = parse_movies(csv.as_bytes()).unwrap();
        assert_eq!(movies.len(), 1);
        let m = &movies[0];
        assert_eq!(m.title, "American President, The (1995)");
        assert_eq!(m.release_year, Some(1995));
        assert!(m.genres.contains("Comedy") && m.genres.contains("Drama") && m.genres.contains("Romance"));
        assert_eq!(m.genres.len(), 3);
    }

    #[test]
    fn no_genres_listed_maps_to_empty_set() {
        let csv = "movieId,title,genres\n1,Untitled,(no genres listed)\n";
        let movies = parse_movies(csv.as_bytes()).unwrap();
        assert!(movies[0].genres.is_empty());
        assert_eq!(movies[0].release_year, None);
    }

    #[test]
    fn imax_is_dropped_unknown_labels_error() {
        let csv = "movieId,title,genres\n109487,Interstellar (2014),Sci-Fi|IMAX\n";
        let movies = parse_movies(csv.as_bytes()).unwrap();
        assert!(movies[0].genres.contains("Sci-Fi"));
        assert_eq!(movies[0].genres.len(), 1);

        let bad = "movieId,title,genres\n1,Whatever (2000),Telenovela\n";
        assert!(parse_movies(bad.as_bytes()).is_err());
    }

    #[test]
    fn release_year_extraction() {
        assert_eq!(release_year_of("Toy Story (1995)"), Some(1995));
        assert_eq!(release_year_of("Toy Story (1995) "), Some(1995));
        assert_eq!(release_year_of("Movie (whatever) (2001)"), Some(2001));
        assert_eq!(release_year_of("No Year Here"), None);
        assert_eq!(release_year_of("Bad (199)"), None);
        assert_eq!(release_year_of("Future (3000)"), None);
    }

    #[test]
    fn parses_a_tag_row() {
        let csv = "userId,movieId,tag,timestamp\n18,4141,Mark Waters,1240597180\n";
        let events = parse_tags(csv.as_bytes()).unwrap();
        assert_eq!(events.len(), 1);
        let ev = events[0];
        assert_eq!((ev.time, ev.user, ev.item), (1240597180, 18, 4141));
        assert_eq!(ev.rating_value(), None);
    }

    #[test]
    fn empty_tag_file_and_duplicate_tags() {
        let empty = "userId,movieId,tag,timestamp\n";
        assert!(parse_tags(empty.as_bytes()).unwrap().is_empty());

        let dup = "userId,movieId,tag,timestamp\n1,2,a,10\n1,2,b,10\n";
        assert_eq!(parse_tags(dup.as_bytes()).unwrap().len(), 2);
    }

    #[test]
    fn ratings_round_trip() {
        let csv = "userId,movieId,rating,timestamp\n1,122,3.5,1112486027\n7,9,5,99\n";
        let events = parse_ratings(csv.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_ratings_csv(&events, &mut buf).unwrap();
        let reparsed = parse_ratings(buf.as_slice()).unwrap();
        assert_eq!(events, reparsed);
    }

    fn rating_events(n: usize) -> Vec<Event> {
        (0..n)
            .map(|i| Event::rating(i as i64, i as u32 % 7, i as u32 % 5, 3.0).unwrap())
            .collect()
    }

    #[test]
    fn kfold_balanced_sizes() {
        let events = rating_events(10);
        let folds = kfold_split(&events, 5, 1).unwrap();
        assert_eq!(folds.counts(), vec![2, 2, 2, 2, 2]);

        let events = rating_events(11);
        let folds = kfold_split(&events, 5, 1).unwrap();
        let counts = folds.counts();
        assert_eq!(counts.iter().sum::<usize>(), 11);
        assert!(counts.iter().all(|&c| c == 2 || c == 3));
    }

    #[test]
    fn kfold_is_deterministic() {
        let events = rating_events(50);
        let a = kfold_split(&events, 5, 42).unwrap();
        let b = kfold_split(&events, 5, 42).unwrap();
        assert_eq!(a.assignment(), b.assignment());
        let c = kfold_split(&events, 5, 43).unwrap();
        assert_ne!(a.assignment(), c.assignment());
    }

    #[test]
    fn kfold_rejects_bad_configs() {
        let events = rating_events(3);
        assert!(kfold_split(&events, 1, 0).is_err());
        assert!(kfold_split(&events, 4, 0).is_err());
        let mut with_tag = rating_events(5);
        with_tag.push(Event::tag(1, 1, 1));
        assert!(kfold_split(&with_tag, 2, 0).is_err());
    }
}
