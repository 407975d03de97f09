//! Signing scores: per-articulator timelines of form blocks, and the small
//! algebra (`block`, `seq`, `sync`, `hold`) rule bodies are written in.
//!
//! Every score is kept normalized: if it has any block, the earliest block
//! starts at 0. Within a track blocks are sorted and never overlap; two
//! blocks competing for the same articulator is an error, not a merge.
//!
//! A score with no blocks is *silent*. Silence still has a duration (from
//! `hold`), but it does not anchor the origin: a leading silence is trimmed
//! by `seq`, and a silent operand of `sync` contributes nothing.

mod eval;
mod export;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::decimal::Decimal;

pub use eval::{evaluate, EvalError};
pub use export::export_score;

/// Body articulators a score can address, in export order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Track {
    Rhand,
    Lhand,
    Mouth,
    Eyes,
    Brows,
    Gaze,
    Head,
    Torso,
}

impl Track {
    pub const ALL: [Track; 8] = [
        Track::Rhand,
        Track::Lhand,
        Track::Mouth,
        Track::Eyes,
        Track::Brows,
        Track::Gaze,
        Track::Head,
        Track::Torso,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Track::Rhand => "rhand",
            Track::Lhand => "lhand",
            Track::Mouth => "mouth",
            Track::Eyes => "eyes",
            Track::Brows => "brows",
            Track::Gaze => "gaze",
            Track::Head => "head",
            Track::Torso => "torso",
        }
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown track `{0}`")]
pub struct UnknownTrack(pub String);

impl FromStr for Track {
    type Err = UnknownTrack;
    fn from_str(s: &str) -> Result<Track, UnknownTrack> {
        Track::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTrack(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimedBlock {
    pub start: Decimal,
    pub end: Decimal,
    pub label: String,
}

impl TimedBlock {
    fn shifted(&self, by: Decimal) -> TimedBlock {
        TimedBlock {
            start: self.start + by,
            end: self.end + by,
            label: self.label.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoreError {
    #[error("block duration must be positive, got {0}")]
    NonPositiveDuration(Decimal),
    #[error("hold duration must not be negative, got {0}")]
    NegativeDuration(Decimal),
    #[error("a block needs at least one track")]
    EmptyTrackSet,
    #[error("two blocks overlap on track {track} at {time}")]
    TrackCollision { track: Track, time: Decimal },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SigningScore {
    duration: Decimal,
    /// Only non-empty tracks are stored, so equality is structural.
    tracks: BTreeMap<Track, Vec<TimedBlock>>,
}

impl SigningScore {
    /// The zero-length silent score: the identity of `seq` and `sync`.
    pub fn empty() -> SigningScore {
        SigningScore::default()
    }

    /// One block `[0, duration]` labelled `label` on each listed track.
    pub fn block(tracks: &[Track], label: &str, duration: Decimal) -> Result<SigningScore, ScoreError> {
        if !duration.is_positive() {
            return Err(ScoreError::NonPositiveDuration(duration));
        }
        if tracks.is_empty() {
            return Err(ScoreError::EmptyTrackSet);
        }
        let block = TimedBlock {
            start: Decimal::ZERO,
            end: duration,
            label: label.to_string(),
        };
        Ok(SigningScore {
            duration,
            tracks: tracks.iter().map(|&t| (t, vec![block.clone()])).collect(),
        })
    }

    /// Silence of the given length.
    pub fn hold(duration: Decimal) -> Result<SigningScore, ScoreError> {
        if duration.is_sign_negative() {
            return Err(ScoreError::NegativeDuration(duration));
        }
        Ok(SigningScore {
            duration,
            tracks: BTreeMap::new(),
        })
    }

    pub fn duration(&self) -> Decimal {
        self.duration
    }

    pub fn is_silent(&self) -> bool {
        self.tracks.is_empty()
    }

    pub fn track(&self, track: Track) -> &[TimedBlock] {
        self.tracks.get(&track).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Non-empty tracks in enumeration order.
    pub fn tracks(&self) -> impl Iterator<Item = (Track, &[TimedBlock])> {
        self.tracks.iter().map(|(t, b)| (*t, b.as_slice()))
    }

    pub fn block_count(&self) -> usize {
        self.tracks.values().map(Vec::len).sum()
    }

    fn shifted_blocks(&self, by: Decimal) -> BTreeMap<Track, Vec<TimedBlock>> {
        self.tracks
            .iter()
            .map(|(t, bs)| (*t, bs.iter().map(|b| b.shifted(by)).collect()))
            .collect()
    }

    /// `self` then `next`: `next` is shifted by `self.duration()`.
    pub fn seq(&self, next: &SigningScore) -> SigningScore {
        if self.is_silent() && !next.is_silent() {
            // leading silence cannot anchor the origin
            return next.clone();
        }
        let mut tracks = self.tracks.clone();
        for (t, blocks) in next.shifted_blocks(self.duration) {
            // next's blocks start at or after self.duration, where self's end
            tracks.entry(t).or_default().extend(blocks);
        }
        SigningScore {
            duration: self.duration + next.duration,
            tracks,
        }
    }

    /// Overlays `overlay` with its origin at `offset` relative to the origin
    /// of `self`, then renormalizes so the result starts at 0.
    pub fn sync(&self, overlay: &SigningScore, offset: Decimal) -> Result<SigningScore, ScoreError> {
        if overlay.is_silent() {
            return Ok(self.clone());
        }
        if self.is_silent() {
            return Ok(overlay.clone());
        }
        let start = Decimal::ZERO.min(offset);
        let end = self.duration.max(offset + overlay.duration);
        let base = self.shifted_blocks(-start);
        let over = overlay.shifted_blocks(offset - start);
        let mut tracks = base;
        for (t, blocks) in over {
            let merged = match tracks.remove(&t) {
                None => blocks,
                Some(existing) => merge_track(t, existing, blocks)?,
            };
            tracks.insert(t, merged);
        }
        Ok(SigningScore {
            duration: end - start,
            tracks,
        })
    }

    /// Checks every structural invariant; used by tests and debug assertions.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut min_start: Option<Decimal> = None;
        for (t, blocks) in &self.tracks {
            if blocks.is_empty() {
                return Err(format!("empty track entry {t}"));
            }
            for b in blocks {
                if b.end <= b.start {
                    return Err(format!("{t}: block [{}, {}] is empty", b.start, b.end));
                }
                if b.start.is_sign_negative() || b.end > self.duration {
                    return Err(format!(
                        "{t}: block [{}, {}] outside [0, {}]",
                        b.start, b.end, self.duration
                    ));
                }
                min_start = Some(min_start.map_or(b.start, |m| m.min(b.start)));
            }
            for w in blocks.windows(2) {
                if w[1].start < w[0].end {
                    return Err(format!("{t}: blocks overlap at {}", w[1].start));
                }
            }
        }
        match min_start {
            Some(m) if !m.is_zero() => Err(format!("origin not normalized: earliest start {m}")),
            _ => Ok(()),
        }
    }
}

fn merge_track(track: Track, a: Vec<TimedBlock>, b: Vec<TimedBlock>) -> Result<Vec<TimedBlock>, ScoreError> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        let next = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) if x.start <= y.start => ia.next(),
            (Some(_), Some(_)) => ib.next(),
            (Some(_), None) => ia.next(),
            (None, Some(_)) => ib.next(),
            (None, None) => break,
        }
        .expect("peeked");
        if let Some(prev) = merged.last() {
            let prev: &TimedBlock = prev;
            if next.start < prev.end {
                return Err(ScoreError::TrackCollision {
                    track,
                    time: next.start,
                });
            }
        }
        merged.push(next);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    fn hands(label: &str, dur: &str) -> SigningScore {
        SigningScore::block(&[Track::Rhand, Track::Lhand], label, d(dur)).unwrap()
    }

    fn span(s: &SigningScore, t: Track) -> Vec<(String, String)> {
        s.track(t)
            .iter()
            .map(|b| (b.start.to_string(), b.end.to_string()))
            .collect()
    }

    #[test]
    fn block_examples() {
        let dog = hands("lsf:dog", "1.0");
        assert_eq!(dog.duration(), d("1"));
        assert_eq!(dog.track(Track::Rhand), dog.track(Track::Lhand));
        assert_eq!(dog.block_count(), 2);

        let blink = SigningScore::block(&[Track::Eyes], "el:cl", d("0.2")).unwrap();
        assert_eq!(blink.duration(), d("0.2"));

        assert_eq!(
            SigningScore::block(&[Track::Mouth], "x", d("0")),
            Err(ScoreError::NonPositiveDuration(d("0")))
        );
        assert_eq!(SigningScore::block(&[], "x", d("1")), Err(ScoreError::EmptyTrackSet));
    }

    #[test]
    fn seq_examples() {
        let dog = hands("lsf:dog", "1.0");
        let nice = hands("lsf:nice-kind", "1.0");
        assert_eq!(SigningScore::empty().seq(&dog), dog);
        assert_eq!(dog.seq(&SigningScore::empty()), dog);

        let s = dog.seq(&nice);
        assert_eq!(s.duration(), d("2"));
        assert_eq!(
            span(&s, Track::Rhand),
            [("0".into(), "1".into()), ("1".into(), "2".into())]
        );
        s.check_invariants().unwrap();
    }

    #[test]
    fn sync_examples() {
        let dog = hands("lsf:dog", "1.0");
        let nice = hands("lsf:nice-kind", "1.0");
        assert_eq!(dog.sync(&SigningScore::empty(), d("5.0")).unwrap(), dog);

        let pout = SigningScore::block(&[Track::Mouth], "lip-pout", d("1.3")).unwrap();
        let s = nice.sync(&pout, d("-0.15")).unwrap();
        assert_eq!(s.duration(), d("1.3"));
        assert_eq!(span(&s, Track::Mouth), [("0".into(), "1.3".into())]);
        assert_eq!(span(&s, Track::Rhand), [("0.15".into(), "1.15".into())]);
        assert_eq!(span(&s, Track::Lhand), [("0.15".into(), "1.15".into())]);
        s.check_invariants().unwrap();

        assert_eq!(
            dog.sync(&dog, d("0.5")),
            Err(ScoreError::TrackCollision {
                track: Track::Rhand,
                time: d("0.5")
            })
        );
    }

    #[test]
    fn touching_blocks_do_not_collide() {
        let dog = hands("lsf:dog", "1.0");
        let s = dog.sync(&dog, d("1.0")).unwrap();
        assert_eq!(s.duration(), d("2"));
        assert_eq!(s.block_count(), 4);
    }

    #[test]
    fn silence_handling() {
        let dog = hands("lsf:dog", "1.0");
        let pause = SigningScore::hold(d("0.5")).unwrap();
        assert_eq!(pause.seq(&dog), dog);
        let tail = dog.seq(&pause);
        assert_eq!(tail.duration(), d("1.5"));
        tail.check_invariants().unwrap();
        assert_eq!(pause.sync(&dog, d("3")).unwrap(), dog);
        assert!(SigningScore::hold(d("-1")).is_err());
        assert!(SigningScore::hold(d("0")).unwrap().is_silent());
    }

    #[test]
    fn track_names_round_trip() {
        for t in Track::ALL {
            assert_eq!(t.as_str().parse::<Track>().unwrap(), t);
        }
        assert!("wing".parse::<Track>().is_err());
    }
}
