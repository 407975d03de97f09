use std::fmt::Write as _;

use super::SigningScore;

/// Line-oriented score text: a `duration <d>` header, then one
/// `<track> <start> <end> <label>` line per block, tracks in enumeration
/// order and blocks by start time. Numbers use the shortest exact form.
pub fn export_score(score: &SigningScore) -> String {
    let mut out = format!("duration {}\n", score.duration());
    for (track, blocks) in score.tracks() {
        for b in blocks {
            let _ = writeln!(out, "{track} {} {} {}", b.start, b.end, b.label);
        }
    }
    out
}
