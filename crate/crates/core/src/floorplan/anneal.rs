//! Simulated-annealing floorplan solver and the two-stage flow.
//!
//! The annealer walks the relative-order space (relation flips, rotations,
//! label swaps), realizes every candidate by compaction, and scores it
//! with the weighted objective plus penalty terms for out-of-bounds,
//! warpage, and bump-clearance violations. Only feasible placements are
//! ever returned; penalties merely shape the search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floorplan::{infeasibility, objective_perf, objective_primary, realize, PairRel, RelativeOrder};
use crate::model::{validate, FloorplanInstance, Placement, SolveReport};
use crate::traffic::{simulate, FrequencyMatrix, Workload};

/// ChaCha stream bases; restart `r` of a stage uses `base + r`, keeping
/// every restart and stage on an independent stream of one user seed.
pub const STREAM_SA_PRIMARY: u64 = 16;
pub const STREAM_SA_PERF: u64 = 4096;
/// Stream for the shared initial order of the primary stage.
pub const STREAM_SA_INIT: u64 = 8;

/// Relative probabilities of the three move kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoveWeights {
    pub relation_flip: f64,
    pub rotate: f64,
    pub pair_swap: f64,
}

impl Default for MoveWeights {
    fn default() -> Self {
        MoveWeights { relation_flip: 0.5, rotate: 0.2, pair_swap: 0.3 }
    }
}

/// Annealer configuration. `initial_temperature <= 0` self-calibrates
/// from a short probe walk; `iterations_per_temperature == 0` scales with
/// the chiplet count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    pub initial_temperature: f64,
    pub cooling_rate: f64,
    pub iterations_per_temperature: usize,
    pub restarts: usize,
    pub move_weights: MoveWeights,
    pub penalty_out_of_bounds: f64,
    pub penalty_warpage: f64,
    pub penalty_bump: f64,
    pub exact_max_n: usize,
    pub parallel_restarts: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            initial_temperature: 0.0,
            cooling_rate: 0.95,
            iterations_per_temperature: 0,
            restarts: 2,
            move_weights: MoveWeights::default(),
            penalty_out_of_bounds: 1e5,
            penalty_warpage: 1e10,
            penalty_bump: 1e5,
            exact_max_n: 3,
            parallel_restarts: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cooling_rate > 0.0 && self.cooling_rate < 1.0) {
            return Err(Error::InvalidParam(format!(
                "cooling rate {} must be in (0, 1)",
                self.cooling_rate
            )));
        }
        let w = &self.move_weights;
        if [w.relation_flip, w.rotate, w.pair_swap].iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidParam("move probabilities must be nonnegative".into()));
        }
        let total = w.relation_flip + w.rotate + w.pair_swap;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParam(format!(
                "move probabilities must sum to 1, got {total}"
            )));
        }
        if [self.penalty_out_of_bounds, self.penalty_warpage, self.penalty_bump]
            .iter()
            .any(|p| !(*p > 0.0))
        {
            return Err(Error::InvalidParam("penalty multipliers must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParam("at least one restart is required".into()));
        }
        Ok(())
    }

    fn effective_iterations(&self, n: usize) -> usize {
        if self.iterations_per_temperature == 0 {
            24 * n.max(2)
        } else {
            self.iterations_per_temperature
        }
    }
}

/// Feasible placement plus its order, used to seed the second stage.
#[derive(Debug, Clone)]
pub struct WarmStart {
    pub placement: Placement,
    pub order: RelativeOrder,
}

/// One scored point of the search space.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub order: RelativeOrder,
    pub placement: Placement,
    pub objective: f64,
    pub hpwl: f64,
    pub package_area: f64,
    pub energy: f64,
    pub feasible: bool,
}

impl Candidate {
    /// Deterministic tie-breaking: objective, then HPWL, then package
    /// area, then the x of chiplet 0.
    pub(crate) fn better_than(&self, other: &Candidate) -> bool {
        let key_a = (self.objective, self.hpwl, self.package_area, self.placement.items[0].x);
        let key_b = (other.objective, other.hpwl, other.package_area, other.placement.items[0].x);
        key_a < key_b
    }
}

pub(crate) fn evaluate(
    instance: &FloorplanInstance,
    freq: Option<&FrequencyMatrix>,
    order: &RelativeOrder,
    cfg: &SolverConfig,
) -> Result<Candidate> {
    let placement = realize(order, &instance.chiplets)?;
    evaluate_placement(instance, freq, order.clone(), placement, cfg)
}

fn evaluate_placement(
    instance: &FloorplanInstance,
    freq: Option<&FrequencyMatrix>,
    order: RelativeOrder,
    placement: Placement,
    cfg: &SolverConfig,
) -> Result<Candidate> {
    let w = &instance.weights;
    let hpwl = crate::model::hpwl(&instance.chiplets, &placement, &instance.nets)?;
    let package_area = crate::model::package_area(&instance.chiplets, &placement)?;
    let cost = crate::costrel::cost_2_5d(&instance.chiplets, &placement, &instance.costs)?;
    let com = match freq {
        Some(f) => crate::traffic::com_cost(f, &instance.chiplets, &placement)?,
        None => 0.0,
    };
    // Warpage evaluated with the span clamped to the substrate so that
    // out-of-domain candidates still get a finite, rankable energy.
    let mat = &instance.materials;
    let bbox = placement.bounding_box(&instance.chiplets)?;
    let wpg = |half: f64, l: f64| {
        crate::costrel::warpage(half.min(l), l, mat, crate::costrel::WarpageMode::Quadratic)
            .expect("clamped span is in domain")
    };
    let wpg_x = wpg(bbox.w / 2.0, mat.half_len_x);
    let wpg_y = wpg(bbox.h / 2.0, mat.half_len_y);

    let objective = w.beta1 * hpwl
        + w.beta2 * package_area
        + w.beta3 * (wpg_x + wpg_y)
        + w.beta4 * cost
        + w.gamma1 * com;
    let measures = infeasibility(instance, &placement);
    let energy = objective
        + cfg.penalty_out_of_bounds * measures.out_of_bounds
        + cfg.penalty_warpage * measures.warpage_excess
        + cfg.penalty_bump * measures.bump_deficit;
    Ok(Candidate {
        order,
        placement,
        objective,
        hpwl,
        package_area,
        energy,
        feasible: measures.feasible(),
    })
}

enum Move {
    RelationFlip { pair: usize, rel: PairRel },
    Rotate { k: usize },
    PairSwap { a: usize, b: usize },
}

fn propose_move(order: &RelativeOrder, weights: &MoveWeights, rng: &mut ChaCha20Rng) -> Move {
    let n = order.chiplet_count();
    let pairs = order.pair_count();
    let total = weights.relation_flip + weights.rotate + weights.pair_swap;
    loop {
        let u = rng.gen_range(0.0..total);
        if u < weights.relation_flip && pairs > 0 {
            let pair = rng.gen_range(0..pairs);
            let current = order.relation_by_pair_index(pair);
            let mut rel = PairRel::ALL[rng.gen_range(0..4)];
            while rel == current {
                rel = PairRel::ALL[rng.gen_range(0..4)];
            }
            return Move::RelationFlip { pair, rel };
        } else if u < weights.relation_flip + weights.rotate {
            return Move::Rotate { k: rng.gen_range(0..n) };
        } else if n >= 2 {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            return Move::PairSwap { a, b };
        }
        // n == 1 with pair-heavy weights: fall through and redraw.
    }
}

fn apply_move(order: &RelativeOrder, mv: &Move) -> RelativeOrder {
    let mut next = order.clone();
    match *mv {
        Move::RelationFlip { pair, rel } => next.set_relation_by_pair_index(pair, rel),
        Move::Rotate { k } => next.toggle_rotation(k),
        Move::PairSwap { a, b } => next.swap_labels(a, b),
    }
    next
}

struct RestartOutcome {
    best_feasible: Option<Candidate>,
    best_any: Candidate,
    iterations: u64,
}

/// One deterministic annealing run. Relation flips that create a cyclic
/// constraint graph are rejected like any other failed proposal.
fn run_restart(
    instance: &FloorplanInstance,
    freq: Option<&FrequencyMatrix>,
    initial: &Candidate,
    cfg: &SolverConfig,
    stream: u64,
    start_from_initial: bool,
) -> RestartOutcome {
    let n = instance.chiplets.len();
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);

    // Restarts after the first start from a fresh random order.
    let mut current = if start_from_initial {
        initial.clone()
    } else {
        let order = RelativeOrder::random(n, &mut rng);
        evaluate(instance, freq, &order, cfg).expect("sequence-pair orders always realize")
    };
    let mut best_feasible = current.feasible.then(|| current.clone());
    if let Some(init_best) = initial.feasible.then_some(initial) {
        if best_feasible.as_ref().map_or(true, |b| init_best.better_than(b)) {
            best_feasible = Some(init_best.clone());
        }
    }
    let mut best_any = current.clone();
    let mut iterations = 0u64;

    // Probe walk to calibrate the temperature scale when unset.
    let t0 = if cfg.initial_temperature > 0.0 {
        cfg.initial_temperature
    } else {
        let mut sum = 0.0;
        let mut count = 0;
        for _ in 0..32 {
            let mv = propose_move(&current.order, &cfg.move_weights, &mut rng);
            if let Ok(cand) = evaluate(instance, freq, &apply_move(&current.order, &mv), cfg) {
                sum += (cand.energy - current.energy).abs();
                count += 1;
            }
        }
        let mean = if count > 0 { sum / count as f64 } else { 1.0 };
        (3.0 * mean).max(1e-9)
    };

    let iters = cfg.effective_iterations(n);
    let mut t = t0;
    while t > t0 * 1e-4 {
        for _ in 0..iters {
            iterations += 1;
            let mv = propose_move(&current.order, &cfg.move_weights, &mut rng);
            let cand = match evaluate(instance, freq, &apply_move(&current.order, &mv), cfg) {
                Ok(c) => c,
                Err(_) => continue, // contradictory relation set
            };
            if cand.feasible && best_feasible.as_ref().map_or(true, |b| cand.better_than(b)) {
                best_feasible = Some(cand.clone());
            }
            if cand.energy < best_any.energy {
                best_any = cand.clone();
            }
            let delta = cand.energy - current.energy;
            if delta <= 0.0 || rng.gen::<f64>() < (-delta / t).exp() {
                current = cand;
            }
        }
        t *= cfg.cooling_rate;
    }

    RestartOutcome { best_feasible, best_any, iterations }
}

fn run_restarts(
    instance: &FloorplanInstance,
    freq: Option<&FrequencyMatrix>,
    initial: &Candidate,
    cfg: &SolverConfig,
    stream_base: u64,
) -> (Option<Candidate>, Candidate, u64) {
    let restarts: Vec<u64> = (0..cfg.restarts as u64).collect();
    let outcomes: Vec<RestartOutcome> = if cfg.parallel_restarts {
        restarts
            .par_iter()
            .map(|&r| run_restart(instance, freq, initial, cfg, stream_base + r, r == 0))
            .collect()
    } else {
        restarts
            .iter()
            .map(|&r| run_restart(instance, freq, initial, cfg, stream_base + r, r == 0))
            .collect()
    };

    // Serial reduction in restart order keeps parallel and serial
    // execution byte-identical.
    let mut best: Option<Candidate> = None;
    let mut best_any: Option<Candidate> = None;
    let mut iterations = 0;
    for o in outcomes {
        iterations += o.iterations;
        if let Some(c) = o.best_feasible {
            if best.as_ref().map_or(true, |b| c.better_than(b)) {
                best = Some(c);
            }
        }
        if best_any.as_ref().map_or(true, |b| o.best_any.energy < b.energy) {
            best_any = Some(o.best_any);
        }
    }
    (best, best_any.expect("at least one restart"), iterations)
}

fn finish_report(
    instance: &FloorplanInstance,
    candidate: &Candidate,
    freq: Option<&FrequencyMatrix>,
    seed: u64,
    iterations: u64,
    started: std::time::Instant,
) -> Result<SolveReport> {
    let (_, breakdown) = match freq {
        Some(f) => objective_perf(instance, &candidate.placement, f)?,
        None => objective_primary(instance, &candidate.placement)?,
    };
    let violations = validate(instance, &candidate.placement)?;
    debug_assert!(violations.is_empty(), "solver returned an infeasible placement");
    Ok(SolveReport {
        placement: candidate.placement.clone(),
        objective_breakdown: breakdown,
        violations,
        seed,
        iterations,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

fn infeasible_report(
    instance: &FloorplanInstance,
    candidate: &Candidate,
    seed: u64,
    iterations: u64,
    started: std::time::Instant,
) -> SolveReport {
    let violations = validate(instance, &candidate.placement).unwrap_or_default();
    SolveReport {
        placement: candidate.placement.clone(),
        objective_breakdown: crate::model::ObjectiveBreakdown {
            hpwl: candidate.hpwl,
            package_area: candidate.package_area,
            total: candidate.objective,
            ..Default::default()
        },
        violations,
        seed,
        iterations,
        wall_time: started.elapsed().as_secs_f64(),
    }
}

pub(crate) fn solve_primary_inner(
    instance: &FloorplanInstance,
    cfg: &SolverConfig,
) -> Result<(SolveReport, RelativeOrder)> {
    let started = std::time::Instant::now();
    instance.validate()?;
    cfg.validate()?;
    let n = instance.chiplets.len();

    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    rng.set_stream(STREAM_SA_INIT);
    let initial_order = RelativeOrder::random(n, &mut rng);
    let initial = evaluate(instance, None, &initial_order, cfg)?;

    let (best, best_any, iterations) = run_restarts(instance, None, &initial, cfg, STREAM_SA_PRIMARY);
    match best {
        Some(c) => {
            let report = finish_report(instance, &c, None, cfg.seed, iterations, started)?;
            Ok((report, c.order))
        }
        None => Err(Error::NoFeasibleSolution {
            best: Box::new(infeasible_report(instance, &best_any, cfg.seed, iterations, started)),
        }),
    }
}

/// Anneals the primary objective from a random start and returns the best
/// feasible solution found.
pub fn solve_primary(instance: &FloorplanInstance, cfg: &SolverConfig) -> Result<SolveReport> {
    solve_primary_inner(instance, cfg).map(|(report, _)| report)
}

/// Refines a feasible warm start against the performance-aware objective.
/// The result never scores worse than the warm start itself.
pub fn solve_perf(
    instance: &FloorplanInstance,
    freq: &FrequencyMatrix,
    warm: &WarmStart,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    let started = std::time::Instant::now();
    instance.validate()?;
    cfg.validate()?;
    if freq.dim() != instance.chiplets.len() {
        return Err(Error::DimensionMismatch { expected: instance.chiplets.len(), found: freq.dim() });
    }
    let warm_violations = validate(instance, &warm.placement)?;
    if !warm_violations.is_empty() {
        return Err(Error::InfeasibleWarmStart { violations: warm_violations.len() });
    }

    // The warm placement itself is the initial incumbent, which makes the
    // non-degradation guarantee independent of annealing randomness.
    let initial = evaluate_placement(
        instance,
        Some(freq),
        warm.order.clone(),
        warm.placement.clone(),
        cfg,
    )?;
    let (best, best_any, iterations) =
        run_restarts(instance, Some(freq), &initial, cfg, STREAM_SA_PERF);
    match best {
        Some(c) => finish_report(instance, &c, Some(freq), cfg.seed, iterations, started),
        None => Err(Error::NoFeasibleSolution {
            best: Box::new(infeasible_report(instance, &best_any, cfg.seed, iterations, started)),
        }),
    }
}

/// Full two-stage run: primary floorplan, traffic simulation on it, then
/// the performance-aware refinement warm-started from stage one. Returns
/// both reports and the frequency matrix.
pub fn two_stage_flow(
    instance: &FloorplanInstance,
    workload: &Workload,
    cfg: &SolverConfig,
) -> Result<(SolveReport, SolveReport, FrequencyMatrix)> {
    let (primary, order) = solve_primary_inner(instance, cfg)?;
    let (freq, _cycles) = simulate(
        &instance.chiplets,
        &primary.placement,
        &instance.nets,
        workload,
        &instance.latency_table,
        instance.base_cycles,
    )?;
    let warm = WarmStart { placement: primary.placement.clone(), order };
    let perf = solve_perf(instance, &freq, &warm, cfg)?;
    Ok((primary, perf, freq))
}
