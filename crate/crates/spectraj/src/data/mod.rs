//! Dataset ingestion: annotation parsing, frame-rate resampling, windowing
//! into observation/future samples, and train/test splits.

mod parse;
mod window;

pub use parse::{parse_ethucy, parse_sdd};
pub use window::{make_split, resample_track, window_samples, SplitProtocol};

use ndarray::Array2;

/// One raw annotation row. Positions are meters for ETH-UCY-format files and
/// pixels for SDD-format files.
#[derive(Debug, Clone, PartialEq)]
pub struct RawAnnotation {
    pub frame_id: u64,
    pub agent_id: u64,
    pub position: [f64; 2],
    /// SDD class label; empty for ETH-UCY rows.
    pub agent_label: String,
}

/// One agent's ordered positions on a shared integer time grid. Time indices
/// are comparable across agents of the same scene, so co-presence can be
/// checked by index equality.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentTrack {
    pub agent_id: u64,
    pub scene_id: String,
    pub steps: Vec<(u64, [f64; 2])>,
}

impl AgentTrack {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// One windowed prediction sample. Coordinates are anchor-relative: the
/// agent's last observed point is translated to the origin and the offset is
/// kept in `anchor` so predictions can be mapped back to world coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    /// t_h x 2 observed trajectory.
    pub observation: Array2<f64>,
    /// t_f x 2 ground-truth future.
    pub future: Array2<f64>,
    /// Observations of agents fully present over this sample's observation
    /// window, anchor-relative, each t_h x 2.
    pub neighbor_observations: Vec<Array2<f64>>,
    pub scene_id: String,
    pub anchor: [f64; 2],
}

impl TrajectorySample {
    /// Stable content hash used to derive per-sample RNG streams, so that
    /// stochastic evaluation does not depend on sample ordering.
    pub fn content_hash(&self) -> u64 {
        // FNV-1a over the exact bit patterns plus the scene id.
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for &v in self.observation.iter().chain(self.future.iter()) {
            eat(&v.to_bits().to_le_bytes());
        }
        eat(&self.anchor[0].to_bits().to_le_bytes());
        eat(&self.anchor[1].to_bits().to_le_bytes());
        eat(self.scene_id.as_bytes());
        h
    }
}

/// Scene-level train/test partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train_scenes: Vec<String>,
    pub test_scenes: Vec<String>,
    pub protocol: SplitProtocol,
}

impl DatasetSplit {
    pub fn is_train_scene(&self, scene: &str) -> bool {
        self.train_scenes.iter().any(|s| s == scene)
    }

    pub fn is_test_scene(&self, scene: &str) -> bool {
        self.test_scenes.iter().any(|s| s == scene)
    }
}
