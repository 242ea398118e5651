//! Exhaustive exact solver, the ground-truth oracle for small instances.
//!
//! Enumerates every relation assignment (four per pair) crossed with
//! every rotation mask, realizes each one, and keeps the feasible minimum
//! of the objective. Contradictory assignments fail realization and are
//! skipped. The search cost is `4^(n(n-1)/2) * 2^n`, so the chiplet count
//! is capped by `exact_max_n`.

use crate::error::{Error, Result};
use crate::floorplan::anneal::{evaluate, Candidate, SolverConfig};
use crate::floorplan::{objective_perf, objective_primary, PairRel, RelativeOrder};
use crate::model::{validate, FloorplanInstance, SolveReport};
use crate::traffic::FrequencyMatrix;

/// Globally optimal floorplan over the relative-order space, minimizing
/// the primary objective, or the performance-aware one when a frequency
/// matrix is supplied. Ties break exactly like the annealer's.
pub fn solve_exact(
    instance: &FloorplanInstance,
    cfg: &SolverConfig,
    freq: Option<&FrequencyMatrix>,
) -> Result<SolveReport> {
    let started = std::time::Instant::now();
    instance.validate()?;
    cfg.validate()?;
    let n = instance.chiplets.len();
    if n > cfg.exact_max_n {
        return Err(Error::ExactTooLarge { n, max: cfg.exact_max_n });
    }
    if let Some(f) = freq {
        if f.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
        }
    }

    let pairs = n * (n - 1) / 2;
    let mut best: Option<Candidate> = None;
    let mut iterations = 0u64;

    let mut rel_digits = vec![0u8; pairs];
    loop {
        let mut order = RelativeOrder::new(n);
        for (idx, &digit) in rel_digits.iter().enumerate() {
            order.set_relation_by_pair_index(idx, PairRel::ALL[digit as usize]);
        }
        for rot_mask in 0..(1u64 << n) {
            for k in 0..n {
                order.set_rotated(k, rot_mask >> k & 1 == 1);
            }
            iterations += 1;
            let cand = match evaluate(instance, freq, &order, cfg) {
                Ok(c) => c,
                Err(Error::CyclicOrder) => break, // rotations cannot uncycle it
                Err(e) => return Err(e),
            };
            if cand.feasible && best.as_ref().map_or(true, |b| cand.better_than(b)) {
                best = Some(cand);
            }
        }
        // Odometer over base-4 relation digits.
        let mut pos = 0;
        loop {
            if pos == pairs {
                let cand = best.ok_or_else(|| Error::InvalidInstance(
                    "no feasible placement exists in the relative-order space".into(),
                ))?;
                let (_, breakdown) = match freq {
                    Some(f) => objective_perf(instance, &cand.placement, f)?,
                    None => objective_primary(instance, &cand.placement)?,
                };
                let violations = validate(instance, &cand.placement)?;
                return Ok(SolveReport {
                    placement: cand.placement,
                    objective_breakdown: breakdown,
                    violations,
                    seed: cfg.seed,
                    iterations,
                    wall_time: started.elapsed().as_secs_f64(),
                });
            }
            if rel_digits[pos] < 3 {
                rel_digits[pos] += 1;
                break;
            }
            rel_digits[pos] = 0;
            pos += 1;
        }
    }
}
