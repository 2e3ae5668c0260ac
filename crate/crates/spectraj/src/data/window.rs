//! Frame-rate resampling, sliding-window sample extraction, and dataset splits.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

use super::{AgentTrack, DatasetSplit, TrajectorySample};

/// How train and test scenes are chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitProtocol {
    /// Hold out one scene for testing, train on the rest.
    LeaveOneOut { test_scene: String },
    /// Read an explicit split manifest (sections `train:` / `test:`, one
    /// scene id per line).
    FixedSplit { manifest: std::path::PathBuf },
}

/// Keep every `(source_fps / target_fps)`-th annotation of a track, by time
/// index, and re-index time from zero. The ratio must be an integer.
pub fn resample_track(track: &AgentTrack, source_fps: f64, target_fps: f64) -> Result<AgentTrack> {
    if source_fps <= 0.0 || target_fps <= 0.0 {
        return Err(Error::Config(format!(
            "frame rates must be positive, got {source_fps} -> {target_fps}"
        )));
    }
    let ratio = source_fps / target_fps;
    let stride = ratio.round();
    if (ratio - stride).abs() > 1e-9 || stride < 1.0 {
        return Err(Error::Config(format!(
            "source fps {source_fps} is not an integer multiple of target fps {target_fps}"
        )));
    }
    let stride = stride as u64;
    let steps = track
        .steps
        .iter()
        .filter(|(t, _)| t % stride == 0)
        .map(|&(t, p)| (t / stride, p))
        .collect();
    Ok(AgentTrack {
        agent_id: track.agent_id,
        scene_id: track.scene_id.clone(),
        steps,
    })
}

/// Slide windows of length `t_h + t_f` over each track and collect samples.
///
/// A window is emitted only where the track's time indices are contiguous
/// across the whole window. Neighbors are co-present agents of the same scene
/// with complete coverage of the observation sub-window; agents with partial
/// presence are dropped. Every sample is translated so the agent's last
/// observed point sits at the origin, with the offset kept in `anchor`.
pub fn window_samples(
    tracks: &[AgentTrack],
    t_h: usize,
    t_f: usize,
    stride: usize,
) -> Result<Vec<TrajectorySample>> {
    if t_h < 1 || t_f < 1 || stride < 1 {
        return Err(Error::Config(format!(
            "invalid window parameters t_h={t_h}, t_f={t_f}, stride={stride}"
        )));
    }
    let window = t_h + t_f;

    // (scene, time_index) -> positions per agent, for neighbor lookup.
    let mut presence: BTreeMap<(&str, u64), Vec<(u64, [f64; 2])>> = BTreeMap::new();
    for track in tracks {
        for &(t, p) in &track.steps {
            presence
                .entry((track.scene_id.as_str(), t))
                .or_default()
                .push((track.agent_id, p));
        }
    }

    let mut samples = Vec::new();
    for track in tracks {
        if track.len() < window {
            continue;
        }
        let mut start = 0usize;
        while start + window <= track.len() {
            let slice = &track.steps[start..start + window];
            let t0 = slice[0].0;
            let contiguous = slice
                .iter()
                .enumerate()
                .all(|(j, &(t, _))| t == t0 + j as u64);
            if !contiguous {
                start += stride;
                continue;
            }
            let anchor = slice[t_h - 1].1;
            let mut observation = Array2::zeros((t_h, 2));
            for (j, &(_, p)) in slice[..t_h].iter().enumerate() {
                observation[[j, 0]] = p[0] - anchor[0];
                observation[[j, 1]] = p[1] - anchor[1];
            }
            let mut future = Array2::zeros((t_f, 2));
            for (j, &(_, p)) in slice[t_h..].iter().enumerate() {
                future[[j, 0]] = p[0] - anchor[0];
                future[[j, 1]] = p[1] - anchor[1];
            }

            // Neighbors: complete presence over the observation sub-window.
            let mut neighbor_ids: Option<Vec<u64>> = None;
            for j in 0..t_h {
                let here: Vec<u64> = presence
                    .get(&(track.scene_id.as_str(), t0 + j as u64))
                    .map(|v| v.iter().map(|&(id, _)| id).collect())
                    .unwrap_or_default();
                neighbor_ids = Some(match neighbor_ids {
                    None => here,
                    Some(prev) => prev.into_iter().filter(|id| here.contains(id)).collect(),
                });
            }
            let mut neighbor_observations = Vec::new();
            for id in neighbor_ids.unwrap_or_default() {
                if id == track.agent_id {
                    continue;
                }
                let mut obs = Array2::zeros((t_h, 2));
                for j in 0..t_h {
                    let row = &presence[&(track.scene_id.as_str(), t0 + j as u64)];
                    let &(_, p) = row.iter().find(|&&(aid, _)| aid == id).unwrap();
                    obs[[j, 0]] = p[0] - anchor[0];
                    obs[[j, 1]] = p[1] - anchor[1];
                }
                neighbor_observations.push(obs);
            }

            samples.push(TrajectorySample {
                observation,
                future,
                neighbor_observations,
                scene_id: track.scene_id.clone(),
                anchor,
            });
            start += stride;
        }
    }
    Ok(samples)
}

/// Build a train/test scene split under the given protocol.
pub fn make_split(scenes: &[String], protocol: SplitProtocol) -> Result<DatasetSplit> {
    match &protocol {
        SplitProtocol::LeaveOneOut { test_scene } => {
            if !scenes.iter().any(|s| s == test_scene) {
                return Err(Error::Config(format!(
                    "unknown test scene '{test_scene}' (configured scenes: {scenes:?})"
                )));
            }
            let train_scenes: Vec<String> =
                scenes.iter().filter(|s| *s != test_scene).cloned().collect();
            Ok(DatasetSplit {
                train_scenes,
                test_scenes: vec![test_scene.clone()],
                protocol,
            })
        }
        SplitProtocol::FixedSplit { manifest } => {
            let file = std::fs::File::open(manifest).map_err(|e| {
                Error::Config(format!("cannot read split manifest {manifest:?}: {e}"))
            })?;
            let (train_scenes, test_scenes) = parse_manifest(std::io::BufReader::new(file))?;
            for s in train_scenes.iter().chain(test_scenes.iter()) {
                if !scenes.iter().any(|x| x == s) {
                    return Err(Error::Config(format!("manifest names unknown scene '{s}'")));
                }
            }
            for s in &train_scenes {
                if test_scenes.contains(s) {
                    return Err(Error::Config(format!(
                        "scene '{s}' appears in both train and test sections"
                    )));
                }
            }
            for s in scenes {
                if !train_scenes.contains(s) && !test_scenes.contains(s) {
                    return Err(Error::Config(format!(
                        "scene '{s}' missing from the split manifest"
                    )));
                }
            }
            Ok(DatasetSplit {
                train_scenes,
                test_scenes,
                protocol,
            })
        }
    }
}

fn parse_manifest<R: BufRead>(reader: R) -> Result<(Vec<String>, Vec<String>)> {
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut section: Option<bool> = None; // true = train
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match trimmed {
            "train:" => section = Some(true),
            "test:" => section = Some(false),
            scene => match section {
                Some(true) => train.push(scene.to_string()),
                Some(false) => test.push(scene.to_string()),
                None => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("scene '{scene}' before any train:/test: section"),
                    })
                }
            },
        }
    }
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_track(scene: &str, agent: u64, n: usize, start_t: u64) -> AgentTrack {
        AgentTrack {
            agent_id: agent,
            scene_id: scene.to_string(),
            steps: (0..n)
                .map(|i| (start_t + i as u64, [i as f64, 2.0 * i as f64]))
                .collect(),
        }
    }

    #[test]
    fn resample_stride_ten() {
        let track = line_track("s", 1, 100, 0);
        let out = resample_track(&track, 25.0, 2.5).unwrap();
        assert_eq!(out.len(), 10);
        assert_eq!(out.steps[1], (1, [10.0, 20.0]));
    }

    #[test]
    fn resample_identity_when_rates_match() {
        let track = line_track("s", 1, 7, 0);
        let out = resample_track(&track, 2.5, 2.5).unwrap();
        assert_eq!(out, track);
    }

    #[test]
    fn resample_thirty_to_two_point_five_is_stride_twelve() {
        let track = line_track("s", 1, 37, 0);
        let out = resample_track(&track, 30.0, 2.5).unwrap();
        assert_eq!(out.len(), 4); // indices 0, 12, 24, 36
        assert_eq!(out.steps[3].0, 3);
    }

    #[test]
    fn resample_rejects_non_integer_stride() {
        let track = line_track("s", 1, 10, 0);
        assert!(matches!(
            resample_track(&track, 10.0, 4.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn window_counts() {
        let samples = window_samples(&[line_track("s", 1, 25, 0)], 8, 12, 1).unwrap();
        assert_eq!(samples.len(), 6);
        let none = window_samples(&[line_track("s", 1, 19, 0)], 8, 12, 1).unwrap();
        assert!(none.is_empty());
        let one = window_samples(&[line_track("s", 1, 20, 0)], 8, 12, 1).unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn window_single_sample_future_is_last_rows() {
        let track = line_track("s", 1, 20, 5);
        let samples = window_samples(&[track.clone()], 8, 12, 1).unwrap();
        let s = &samples[0];
        assert_eq!(s.anchor, track.steps[7].1);
        for j in 0..12 {
            let raw = track.steps[8 + j].1;
            assert_eq!(s.future[[j, 0]], raw[0] - s.anchor[0]);
            assert_eq!(s.future[[j, 1]], raw[1] - s.anchor[1]);
        }
        // Anchored: last observed point is the origin.
        assert_eq!(s.observation[[7, 0]], 0.0);
        assert_eq!(s.observation[[7, 1]], 0.0);
    }

    #[test]
    fn window_skips_gaps() {
        let mut track = line_track("s", 1, 45, 0);
        track.steps.remove(10); // hole at t=10
        let samples = window_samples(&[track], 8, 12, 1).unwrap();
        // 44 steps remain; windows straddling the hole are rejected, leaving
        // only starts at positions 10..=24.
        assert!(samples.iter().all(|s| s.observation.nrows() == 8));
        assert_eq!(samples.len(), 15);
    }

    #[test]
    fn window_stride_reduces_count() {
        let samples = window_samples(&[line_track("s", 1, 60, 0)], 8, 12, 20).unwrap();
        // floor((60 - 20) / 20) + 1 = 3
        assert_eq!(samples.len(), 3);
    }

    #[test]
    fn neighbors_require_full_observation_presence() {
        let target = line_track("s", 1, 20, 0);
        let full = line_track("s", 2, 20, 0);
        let partial = line_track("s", 3, 5, 4); // covers only part of obs window
        let other_scene = line_track("other", 4, 20, 0);
        let samples = window_samples(&[target, full, partial, other_scene], 8, 12, 1).unwrap();
        let s = samples.iter().find(|s| s.scene_id == "s").unwrap();
        assert_eq!(s.neighbor_observations.len(), 1);
        // Neighbor positions are anchored by the sample's anchor.
        assert_eq!(s.neighbor_observations[0].nrows(), 8);
    }

    #[test]
    fn leave_one_out_split() {
        let scenes: Vec<String> = ["eth", "hotel", "univ", "zara1", "zara2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let split = make_split(
            &scenes,
            SplitProtocol::LeaveOneOut {
                test_scene: "eth".into(),
            },
        )
        .unwrap();
        assert_eq!(split.train_scenes, vec!["hotel", "univ", "zara1", "zara2"]);
        assert_eq!(split.test_scenes, vec!["eth"]);

        let z = make_split(
            &scenes,
            SplitProtocol::LeaveOneOut {
                test_scene: "zara1".into(),
            },
        )
        .unwrap();
        assert_eq!(z.train_scenes.len(), 4);
        assert!(!z.train_scenes.contains(&"zara1".to_string()));

        assert!(matches!(
            make_split(
                &scenes,
                SplitProtocol::LeaveOneOut {
                    test_scene: "nonexistent".into()
                }
            ),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn fixed_split_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("split.txt");
        std::fs::write(&path, "train:\na\nb\ntest:\nc\n").unwrap();
        let scenes: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let split = make_split(&scenes, SplitProtocol::FixedSplit { manifest: path }).unwrap();
        assert_eq!(split.train_scenes, vec!["a", "b"]);
        assert_eq!(split.test_scenes, vec!["c"]);
    }

    #[test]
    fn fixed_split_rejects_overlap_and_missing() {
        let dir = tempfile::tempdir().unwrap();
        let overlap = dir.path().join("overlap.txt");
        std::fs::write(&overlap, "train:\na\ntest:\na\n").unwrap();
        let scenes: Vec<String> = ["a"].iter().map(|s| s.to_string()).collect();
        assert!(make_split(&scenes, SplitProtocol::FixedSplit { manifest: overlap }).is_err());

        let missing = dir.path().join("missing.txt");
        std::fs::write(&missing, "train:\na\ntest:\n").unwrap();
        let scenes: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        assert!(make_split(&scenes, SplitProtocol::FixedSplit { manifest: missing }).is_err());
    }

    #[test]
    fn windowing_is_deterministic() {
        let tracks = vec![line_track("s", 1, 30, 0), line_track("s", 2, 30, 0)];
        let a = window_samples(&tracks, 8, 12, 1).unwrap();
        let b = window_samples(&tracks, 8, 12, 1).unwrap();
        assert_eq!(a, b);
    }
}
