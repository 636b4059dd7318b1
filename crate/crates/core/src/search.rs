//! Randomized motif search: sample small symmetric generating sets with
//! mixed coordinate scales, build their drums, and score them by width.
//!
//! Sampling is deterministic per (seed, index), so any record can be
//! replayed in isolation.  Full width enumeration is the cost center; a
//! motif is only fully evaluated after its incidence pattern passes the
//! two-cycle screen, which already decides whether the width can exceed the
//! dimension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::family::build_from_motif;
use crate::rat::{Rat, RVec};

/// Scale class of one coordinate slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    Big,
    Small,
    Zero,
}

/// Configuration of a search run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Vanishing patterns for the first four coordinates; each sampled
    /// point draws one pattern uniformly.
    pub patterns: Vec<[Slot; 4]>,
    /// Inclusive integer range for `Big` slots.
    pub big_range: (i64, i64),
    /// Inclusive integer range for `Small` slots.
    pub small_range: (i64, i64),
    /// Inclusive range for the number of motif points.
    pub motif_size: (usize, usize),
    pub seed: u64,
    /// Number of motifs to sample.
    pub budget: usize,
    /// Upper bound on the vertex count for full width enumeration; larger
    /// drums are recorded but not fully evaluated.
    pub max_vertices_for_width: usize,
}

#[derive(Debug, thiserror::Error)]
#[error("invalid search configuration: {0}")]
pub struct ConfigError(String);

impl SearchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.patterns.is_empty() {
            return Err(ConfigError("no vanishing patterns".into()));
        }
        if self.big_range.0 > self.big_range.1 || self.small_range.0 > self.small_range.1 {
            return Err(ConfigError("empty coordinate range".into()));
        }
        if self.motif_size.0 > self.motif_size.1 || self.motif_size.0 == 0 {
            return Err(ConfigError("empty motif size range".into()));
        }
        Ok(())
    }
}

/// A configuration mimicking the coordinate scales of the known width-6
/// motif: a large leading block in the 70–100 range against small entries
/// of size 1–3.
pub fn default_config(seed: u64, budget: usize) -> SearchConfig {
    use Slot::{Big, Small, Zero};
    SearchConfig {
        patterns: vec![
            [Zero, Zero, Small, Small],
            [Big, Zero, Small, Zero],
            [Big, Zero, Zero, Zero],
            [Big, Big, Zero, Zero],
        ],
        big_range: (70, 100),
        small_range: (1, 3),
        motif_size: (3, 5),
        seed,
        budget,
        max_vertices_for_width: 120,
    }
}

/// Draws the motif with the given index.  The stream is keyed by
/// (seed, index), so the same pair always yields the same motif.
pub fn sample_motif(cfg: &SearchConfig, index: usize) -> Vec<RVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let size = rng.gen_range(cfg.motif_size.0..=cfg.motif_size.1);
    let mut motif = Vec::with_capacity(size);
    for _ in 0..size {
        let pattern = cfg.patterns[rng.gen_range(0..cfg.patterns.len())];
        let mut point: RVec = pattern
            .iter()
            .map(|slot| match slot {
                Slot::Big => Rat::from_int(rng.gen_range(cfg.big_range.0..=cfg.big_range.1)),
                Slot::Small => {
                    Rat::from_int(rng.gen_range(cfg.small_range.0..=cfg.small_range.1))
                }
                Slot::Zero => Rat::zero(),
            })
            .collect();
        point.push(Rat::one());
        motif.push(point);
    }
    motif
}

/// Outcome of evaluating one motif.  Every motif yields exactly one
/// outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// The drum could not be built or screened (degenerate hull, empty
    /// skin, ties in the facet-vertex map, …).
    Rejected { reason: String },
    /// The incidence pattern has an oriented two-cycle, so the width is at
    /// most the dimension.
    TwoCycle,
    /// Passed the two-cycle screen but exceeds the width-enumeration
    /// budget.
    TooLarge { vertices: usize },
    /// Fully evaluated width.
    Width { vertices: usize, width: usize },
}

/// One line of the search log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchRecord {
    pub index: usize,
    pub motif: Vec<RVec>,
    pub outcome: Outcome,
    /// Wall time of the evaluation; excluded from serialization so that
    /// record streams are byte-identical across runs.
    #[serde(skip)]
    pub wall: std::time::Duration,
}

/// Builds and scores one motif.  All failures are recorded outcomes, never
/// errors.
pub fn evaluate_motif(motif: &[RVec], max_vertices_for_width: usize) -> Outcome {
    let drum = match build_from_motif(motif) {
        Ok(drum) => drum,
        Err(e) => {
            return Outcome::Rejected {
                reason: e.to_string(),
            }
        }
    };
    match drum.has_oriented_two_cycle() {
        Ok(true) => return Outcome::TwoCycle,
        Ok(false) => {}
        Err(e) => {
            return Outcome::Rejected {
                reason: e.to_string(),
            }
        }
    }
    let vertices = drum.polytope().num_vertices();
    if vertices > max_vertices_for_width {
        return Outcome::TooLarge { vertices };
    }
    match drum.width() {
        Ok(width) => Outcome::Width { vertices, width },
        Err(e) => Outcome::Rejected {
            reason: e.to_string(),
        },
    }
}

/// Runs the whole sampling budget, invoking the sink once per record in
/// index order.
pub fn run_search(
    cfg: &SearchConfig,
    mut sink: impl FnMut(&SearchRecord),
) -> Result<Vec<SearchRecord>, ConfigError> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.budget);
    for index in 0..cfg.budget {
        let motif = sample_motif(cfg, index);
        let start = std::time::Instant::now();
        let outcome = evaluate_motif(&motif, cfg.max_vertices_for_width);
        let record = SearchRecord {
            index,
            motif,
            outcome,
            wall: start.elapsed(),
        };
        sink(&record);
        records.push(record);
    }
    Ok(records)
}
