//! Text annotation parsers for the two supported dataset formats.

use std::collections::BTreeMap;
use std::io::BufRead;

use crate::error::{Error, Result};

use super::{AgentTrack, RawAnnotation};

/// Parse ETH-UCY-format annotations: whitespace-separated rows of
/// `(frame, agent_id, x, y)`, one annotation per line. Frames are mapped to
/// consecutive time indices by their rank among the file's distinct frames,
/// which keeps indices aligned across agents.
pub fn parse_ethucy<R: BufRead>(reader: R, scene_id: &str) -> Result<Vec<AgentTrack>> {
    let mut rows = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(lineno + 1, format!("expected 4 fields, got {}", fields.len())));
        }
        let frame_id = parse_frame(fields[0], lineno + 1)?;
        let agent_id = parse_frame(fields[1], lineno + 1)?;
        let x = parse_coord(fields[2], lineno + 1)?;
        let y = parse_coord(fields[3], lineno + 1)?;
        rows.push(RawAnnotation {
            frame_id,
            agent_id,
            position: [x, y],
            agent_label: String::new(),
        });
    }
    tracks_from_rows(rows, scene_id)
}

/// Parse SDD-format annotations: rows of
/// `(track_id, xmin, ymin, xmax, ymax, frame, lost, occluded, generated, label)`.
/// The position is the bounding-box center in pixels; rows flagged `lost=1`
/// are dropped.
pub fn parse_sdd<R: BufRead>(reader: R, scene_id: &str) -> Result<Vec<AgentTrack>> {
    let mut rows = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 10 {
            return Err(parse_err(lineno + 1, format!("expected 10 fields, got {}", fields.len())));
        }
        let agent_id = parse_frame(fields[0], lineno + 1)?;
        let xmin = parse_coord(fields[1], lineno + 1)?;
        let ymin = parse_coord(fields[2], lineno + 1)?;
        let xmax = parse_coord(fields[3], lineno + 1)?;
        let ymax = parse_coord(fields[4], lineno + 1)?;
        let frame_id = parse_frame(fields[5], lineno + 1)?;
        let lost = parse_frame(fields[6], lineno + 1)?;
        if lost == 1 {
            continue;
        }
        rows.push(RawAnnotation {
            frame_id,
            agent_id,
            position: [(xmin + xmax) / 2.0, (ymin + ymax) / 2.0],
            agent_label: fields[9].trim_matches('"').to_string(),
        });
    }
    tracks_from_rows(rows, scene_id)
}

fn parse_err(line: usize, msg: String) -> Error {
    Error::Parse { line, msg }
}

fn parse_frame(field: &str, line: usize) -> Result<u64> {
    field
        .parse::<u64>()
        .map_err(|_| parse_err(line, format!("invalid integer '{field}'")))
}

fn parse_coord(field: &str, line: usize) -> Result<f64> {
    let v = field
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("invalid coordinate '{field}'")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite coordinate '{field}'")));
    }
    Ok(v)
}

/// Group rows by agent, sort by frame, and remap frames to their rank among
/// the file's distinct frames.
fn tracks_from_rows(rows: Vec<RawAnnotation>, scene_id: &str) -> Result<Vec<AgentTrack>> {
    let mut frame_rank = BTreeMap::new();
    for row in &rows {
        frame_rank.insert(row.frame_id, 0u64);
    }
    for (rank, slot) in frame_rank.values_mut().enumerate() {
        *slot = rank as u64;
    }

    let mut by_agent: BTreeMap<u64, Vec<(u64, [f64; 2])>> = BTreeMap::new();
    for row in rows {
        by_agent
            .entry(row.agent_id)
            .or_default()
            .push((frame_rank[&row.frame_id], row.position));
    }

    let mut tracks = Vec::with_capacity(by_agent.len());
    for (agent_id, mut steps) in by_agent {
        steps.sort_by_key(|&(t, _)| t);
        for w in steps.windows(2) {
            if w[1].0 == w[0].0 {
                return Err(Error::Data(format!(
                    "agent {agent_id} in scene {scene_id} annotated twice at the same frame"
                )));
            }
        }
        tracks.push(AgentTrack {
            agent_id,
            scene_id: scene_id.to_string(),
            steps,
        });
    }
    Ok(tracks)
}
