//! Repair of broken tracks by spatio-temporal proximity, and length filtering.
//!
//! Both merge rules make a single pass over the tracks in ascending birth
//! order; rule (a) runs before rule (b), the length filter last.

use crate::error::{Error, Result};
use crate::tracking::Track;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PostprocessParams {
    /// Temporal search window, in time steps.
    pub eps_t: usize,
    /// Spatial search radius, in world units.
    pub eps_s: f64,
    /// Minimum track length, in time steps.
    pub eps_l: usize,
}

impl PostprocessParams {
    pub fn validate(&self) -> Result<()> {
        if !self.eps_s.is_finite() || self.eps_s < 0.0 {
            return Err(Error::Config(format!(
                "eps_s must be a finite value >= 0, got {}",
                self.eps_s
            )));
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.eps_t == 0 && self.eps_s == 0.0 && self.eps_l == 0
    }
}

fn birth_order(tracks: &[Track]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..tracks.len()).collect();
    order.sort_by_key(|&k| (tracks[k].birth(), tracks[k].id));
    order
}

/// Rule (a): a track starting at `t` is appended to the track whose end lies in
/// `[t - eps_t, t - 1]` within `eps_s` of its start point; the closest end time
/// wins, then the smaller distance, then the smaller id.
pub fn merge_end_to_start(tracks: Vec<Track>, eps_t: usize, eps_s: f64) -> Vec<Track> {
    if eps_t == 0 {
        return tracks;
    }
    let order = birth_order(&tracks);
    let mut slots: Vec<Option<Track>> = tracks.into_iter().map(Some).collect();
    for &k in &order {
        let Some(t1) = slots[k].as_ref() else { continue };
        let t = t1.birth();
        let start = *t1.first();
        let best = slots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .filter_map(|(j, s)| s.as_ref().map(|s| (j, s)))
            .filter(|(_, s)| {
                let te = s.death();
                te < t && te + eps_t >= t && s.last().distance(&start) <= eps_s
            })
            .min_by(|(_, x), (_, y)| {
                y.death()
                    .cmp(&x.death())
                    .then(x.last().distance(&start).total_cmp(&y.last().distance(&start)))
                    .then(x.id.cmp(&y.id))
            })
            .map(|(j, _)| j);
        if let Some(j) = best {
            let tail = slots[k].take().expect("present");
            slots[j].as_mut().expect("present").points.extend(tail.points);
        }
    }
    slots.into_iter().flatten().collect()
}

/// Rule (b): a track ending at `t` is connected to a longer-living track that
/// started in `[t - eps_t, t]` within `eps_s` of the end point; the latter's
/// nodes up to `t` are discarded. Closest start time wins, then distance, then id.
/// Zero windows disable the rule, as for rule (a).
pub fn merge_overlapping(tracks: Vec<Track>, eps_t: usize, eps_s: f64) -> Vec<Track> {
    if eps_t == 0 && eps_s == 0.0 {
        return tracks;
    }
    let order = birth_order(&tracks);
    let mut slots: Vec<Option<Track>> = tracks.into_iter().map(Some).collect();
    for &k in &order {
        let Some(t1) = slots[k].as_ref() else { continue };
        let t = t1.death();
        let end = *t1.last();
        let best = slots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .filter_map(|(j, s)| s.as_ref().map(|s| (j, s)))
            .filter(|(_, s)| {
                let tb = s.birth();
                s.death() > t && tb <= t && tb + eps_t >= t && s.first().distance(&end) <= eps_s
            })
            .min_by(|(_, x), (_, y)| {
                y.birth()
                    .cmp(&x.birth())
                    .then(x.first().distance(&end).total_cmp(&y.first().distance(&end)))
                    .then(x.id.cmp(&y.id))
            })
            .map(|(j, _)| j);
        if let Some(j) = best {
            let donor = slots[j].take().expect("present");
            let rest = donor.points.into_iter().filter(|p| p.t > t);
            slots[k].as_mut().expect("present").points.extend(rest);
        }
    }
    slots.into_iter().flatten().collect()
}

pub fn filter_short(tracks: Vec<Track>, eps_l: usize) -> Vec<Track> {
    tracks.into_iter().filter(|t| t.length() >= eps_l).collect()
}

/// Rules (a), (b), the length filter, then ids renumbered by `(birth, old id)`.
pub fn postprocess(tracks: Vec<Track>, params: &PostprocessParams) -> Vec<Track> {
    let tracks = merge_end_to_start(tracks, params.eps_t, params.eps_s);
    let tracks = merge_overlapping(tracks, params.eps_t, params.eps_s);
    let mut tracks = filter_short(tracks, params.eps_l);
    tracks.sort_by_key(|t| (t.birth(), t.id));
    for (k, t) in tracks.iter_mut().enumerate() {
        t.id = k;
    }
    tracks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracking::TrackPoint;

    fn track(id: usize, times: std::ops::RangeInclusive<usize>, x: f64) -> Track {
        Track {
            id,
            points: times
                .map(|t| TrackPoint {
                    t,
                    component: 0,
                    x,
                    y: 0.0,
                    degree: 1,
                    cells: 4,
                })
                .collect(),
        }
    }

    fn times(t: &Track) -> Vec<usize> {
        t.points.iter().map(|p| p.t).collect()
    }

    #[test]
    fn no_candidate_leaves_tracks_alone() {
        let tracks = vec![track(0, 0..=4, 0.0), track(1, 6..=9, 10.0)];
        assert_eq!(merge_end_to_start(tracks.clone(), 3, 1.0), tracks);
        assert_eq!(merge_end_to_start(tracks.clone(), 0, 100.0), tracks);
    }

    #[test]
    fn zero_windows_never_merge() {
        let tracks = vec![track(0, 0..=4, 0.0), track(1, 4..=9, 0.0), track(2, 5..=9, 0.0)];
        let out = postprocess(tracks.clone(), &PostprocessParams::default());
        assert_eq!(out, tracks);
    }

    #[test]
    fn end_to_start_prefers_closest_end_time() {
        // t1 starts at 10; t2 ends at 9, t3 ends at 7, both nearby
        let tracks = vec![track(0, 0..=7, 0.5), track(1, 2..=9, 1.0), track(2, 10..=20, 0.0)];
        let out = merge_end_to_start(tracks, 3, 2.0);
        assert_eq!(out.len(), 2);
        assert_eq!(times(&out[0]), (0..=7).collect::<Vec<_>>());
        assert_eq!(out[1].id, 1);
        assert_eq!(times(&out[1]), (2..=20).collect::<Vec<_>>());
    }

    #[test]
    fn end_to_start_ignores_far_candidates() {
        let tracks = vec![track(0, 0..=9, 5.0), track(1, 10..=20, 0.0)];
        assert_eq!(merge_end_to_start(tracks.clone(), 3, 2.0), tracks);
    }

    #[test]
    fn overlapping_discards_the_prefix() {
        // t1 ends at 20; t2 started at 18 nearby and lives on to 70
        let tracks = vec![track(0, 0..=20, 0.0), track(1, 18..=70, 1.0)];
        let out = merge_overlapping(tracks, 3, 2.0);
        assert_eq!(out.len(), 1);
        assert_eq!(times(&out[0]), (0..=70).collect::<Vec<_>>());
        assert!(out[0].points[21..].iter().all(|p| p.x == 1.0));
    }

    #[test]
    fn overlapping_requires_a_later_death() {
        let tracks = vec![track(0, 0..=20, 0.0), track(1, 18..=19, 0.0)];
        assert_eq!(merge_overlapping(tracks.clone(), 3, 2.0), tracks);
    }

    #[test]
    fn overlapping_picks_the_closest_start() {
        let tracks = vec![track(0, 0..=20, 0.0), track(1, 17..=40, 0.5), track(2, 19..=40, 1.5)];
        let out = merge_overlapping(tracks, 3, 2.0);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].points.last().unwrap().x, 1.5);
        assert_eq!(out[1].id, 1);
    }

    #[test]
    fn filter_lengths() {
        let tracks = vec![track(0, 0..=3, 0.0), track(1, 0..=49, 0.0), track(2, 0..=300, 0.0)];
        let kept = filter_short(tracks.clone(), 50);
        assert_eq!(kept.iter().map(Track::length).collect::<Vec<_>>(), vec![300]);
        assert_eq!(filter_short(tracks.clone(), 0), tracks);
    }
}
