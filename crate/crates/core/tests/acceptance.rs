//! Acceptance suite.
//!
//! Each test covers one acceptance criterion at its stated tolerance and
//! prints a `PASS` line (visible with `--nocapture`). Reference oracles
//! live at the top of this file and stay independent of the library
//! implementation paths they check.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use chipfp_core::costrel::{
    cost_per_yielded_area, die_yield, warpage, CostMode, CostParams, MaterialParams, WarpageMode,
};
use chipfp_core::fixtures;
use chipfp_core::floorplan::{
    objective_perf, solve_exact, solve_primary, two_stage_flow, SolverConfig,
};
use chipfp_core::model::{validate, ChipletDef, FloorplanInstance, Net, ObjectiveWeights, Violation};
use chipfp_core::partition::{par_chiplet, HierNode, PoolEntry};
use chipfp_core::report::ReportDocument;
use chipfp_core::schema::{to_json_pretty, SolutionDocument};
use chipfp_core::traffic::Workload;

// ---------------------------------------------------------------------------
// Reference oracle: straight-line transcription of the recursive
// partition walk, written before the library implementation and kept
// independent of it. Children larger than `a_max` recurse (a leaf that
// large fails), children smaller than `a_min` combine into a residual
// that flushes when it reaches `a_min` and once more at the end of the
// level, and in-range children are emitted as-is.
// ---------------------------------------------------------------------------

struct RefResidual {
    area: f64,
    provenance: Vec<String>,
}

fn ref_leaves(node: &HierNode, out: &mut Vec<String>) {
    if node.children.is_empty() {
        out.push(node.name.clone());
    } else {
        for c in &node.children {
            ref_leaves(c, out);
        }
    }
}

fn reference_partition(
    node: &HierNode,
    a_min: f64,
    a_max: f64,
    out: &mut Vec<(String, f64, bool, Vec<String>)>,
) -> Result<(), String> {
    let mut residual: Option<RefResidual> = None;
    let mut flushes = 0usize;
    for child in &node.children {
        if child.area > a_max {
            if child.children.is_empty() {
                return Err(format!("oversized leaf {}", child.name));
            }
            reference_partition(child, a_min, a_max, out)?;
        } else if child.area < a_min {
            let mut acc = residual.take().unwrap_or(RefResidual { area: 0.0, provenance: vec![] });
            acc.area += child.area;
            ref_leaves(child, &mut acc.provenance);
            if acc.area >= a_min {
                out.push((format!("{}_res{flushes}", node.name), acc.area, false, acc.provenance));
                flushes += 1;
            } else {
                residual = Some(acc);
            }
        } else {
            let mut prov = Vec::new();
            ref_leaves(child, &mut prov);
            out.push((child.name.clone(), child.area, false, prov));
        }
    }
    if let Some(acc) = residual {
        out.push((format!("{}_res{flushes}", node.name), acc.area, true, acc.provenance));
    }
    Ok(())
}

fn pool_as_tuples(pool: &[PoolEntry]) -> Vec<(String, f64, bool, Vec<String>)> {
    pool.iter()
        .map(|p| (p.name.clone(), p.area, p.residual, p.provenance.clone()))
        .collect()
}

// ---------------------------------------------------------------------------
// Criterion 1: cost-model fidelity.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_1_cost_model_fidelity() {
    let started = Instant::now();
    let params = CostParams::default();

    // 40-digit arbitrary-precision evaluation of (1 + 0.09/10)^(-10).
    let expect = 0.914_299_195_505_074_985_96_f64;
    let got = die_yield(1.0, &params).unwrap();
    assert!(
        ((got - expect) / expect).abs() < 1e-9,
        "die_yield(1 cm^2) = {got}, expected {expect}"
    );

    let mut prev_yield = f64::INFINITY;
    let mut prev_cost = f64::NEG_INFINITY;
    for step in 0..=100 {
        let s = 4.0 * step as f64 / 100.0;
        let y = die_yield(s, &params).unwrap();
        let c = cost_per_yielded_area(s, &params, CostMode::Exact).unwrap();
        if step > 0 {
            assert!(y < prev_yield, "yield not strictly decreasing at s = {s}");
            assert!(c > prev_cost, "cost not strictly increasing at s = {s}");
        }
        prev_yield = y;
        prev_cost = c;
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "criterion 1 took {elapsed:?}");
    println!("acceptance 1 (cost-model fidelity): PASS in {elapsed:?}");
}

// ---------------------------------------------------------------------------
// Criterion 2: annealer vs exact oracle on random 3-chiplet instances.
// ---------------------------------------------------------------------------

fn random_three_chiplet_instance(seed: u64) -> FloorplanInstance {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(900);
    let chiplets: Vec<ChipletDef> = (0..3)
        .map(|id| ChipletDef {
            id,
            name: format!("c{id}"),
            width_o: rng.gen_range(300.0..900.0),
            height_o: rng.gen_range(300.0..900.0),
            function: "block".into(),
        })
        .collect();
    let nets = vec![
        Net { id: 0, endpoints: vec![0, 1], weight: rng.gen_range(0.5..2.0) },
        Net { id: 1, endpoints: vec![1, 2], weight: rng.gen_range(0.5..2.0) },
        Net { id: 2, endpoints: vec![0, 2], weight: rng.gen_range(0.5..2.0) },
    ];
    let mut inst = fixtures::c8_instance();
    inst.chiplets = chiplets;
    inst.nets = nets;
    inst.board = chipfp_core::model::Board { width: 4000.0, height: 4000.0 };
    inst.bumps = chipfp_core::model::BumpField::empty();
    // Warpage disabled: unweighted objective and an unreachable threshold.
    inst.materials.warpage_threshold = 1e9;
    inst.weights = ObjectiveWeights { beta1: 1.0, beta2: 10.0, beta3: 0.0, beta4: 1.0, gamma1: 0.0 };
    inst
}

#[test]
fn acceptance_2_oracle_equivalence() {
    for seed in 0..20u64 {
        let started = Instant::now();
        let inst = random_three_chiplet_instance(seed);
        let cfg = SolverConfig { seed, ..Default::default() };
        let exact = solve_exact(&inst, &cfg, None).unwrap();
        let sa = solve_primary(&inst, &cfg).unwrap();
        let opt = exact.objective_breakdown.total;
        let got = sa.objective_breakdown.total;
        assert!(
            got <= opt * 1.02 + 1e-9,
            "seed {seed}: annealer {got} vs exact {opt} exceeds 2%"
        );
        assert!(got >= opt - 1e-6 * opt, "seed {seed}: annealer beat the exact optimum");
        let elapsed = started.elapsed();
        assert!(elapsed.as_secs_f64() < 5.0, "seed {seed} took {elapsed:?}");
    }
    println!("acceptance 2 (oracle equivalence, 20 instances within 2%): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 3: every returned solution is feasible.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_3_solver_feasibility() {
    let c8 = fixtures::c8_instance();
    let c16 = fixtures::c16_instance();
    let mut runs = 0;
    for (instance, label) in [(&c8, "c8"), (&c16, "c16")] {
        for seed in 0..100u64 {
            let started = Instant::now();
            let cfg = SolverConfig {
                seed,
                restarts: 1,
                iterations_per_temperature: 150,
                ..Default::default()
            };
            let report = solve_primary(instance, &cfg).unwrap();
            assert!(
                report.violations.is_empty(),
                "{label} seed {seed}: solver reported violations"
            );
            let recheck = validate(instance, &report.placement).unwrap();
            assert!(recheck.is_empty(), "{label} seed {seed}: {recheck:?}");
            let elapsed = started.elapsed().as_secs_f64();
            assert!(elapsed < 60.0, "{label} seed {seed} took {elapsed}s");
            runs += 1;
        }
    }
    assert_eq!(runs, 200);
    println!("acceptance 3 (feasibility, 200 runs): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 4: two-stage direction.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_4_two_stage_direction() {
    let cases = [
        (fixtures::c8_instance(), fixtures::skewed_workload_c8(), "c8"),
        (fixtures::c16_instance(), fixtures::skewed_workload_c16(), "c16"),
    ];
    for (inst, workload, label) in &cases {
        let mut reductions = Vec::new();
        for seed in 0..10u64 {
            let cfg = SolverConfig { seed, ..Default::default() };
            let (primary, perf, freq) = two_stage_flow(inst, workload, &cfg).unwrap();

            // Retention: stage-2 objective never exceeds stage-1's under
            // the shared frequency matrix.
            let (stage1_eq18, _) = objective_perf(inst, &primary.placement, &freq).unwrap();
            let stage2_eq18 = perf.objective_breakdown.total;
            assert!(
                stage2_eq18 <= stage1_eq18 + 1e-9,
                "{label} seed {seed}: perf objective {stage2_eq18} exceeds warm start {stage1_eq18}"
            );

            let com1 =
                chipfp_core::traffic::com_cost(&freq, &inst.chiplets, &primary.placement).unwrap();
            let com2 =
                chipfp_core::traffic::com_cost(&freq, &inst.chiplets, &perf.placement).unwrap();
            reductions.push((com1 - com2) / com1);
        }
        let mean = reductions.iter().sum::<f64>() / reductions.len() as f64;
        assert!(
            mean >= 0.10,
            "{label}: mean communication-cost reduction {:.2}% below 10%",
            mean * 100.0
        );
        println!("acceptance 4 ({label}: mean ComCost reduction {:.1}%): PASS", mean * 100.0);
    }
}

// ---------------------------------------------------------------------------
// Criterion 5: bump-constraint ablation on the hotspot fixture.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_5_bump_ablation() {
    let constrained = fixtures::hotspot_instance();
    let cfg = SolverConfig { exact_max_n: 4, ..Default::default() };

    let with_bumps = solve_exact(&constrained, &cfg, None).unwrap();
    assert!(with_bumps.violations.is_empty(), "constrained run must be clean");

    let mut relaxed = constrained.clone();
    relaxed.bumps.hotspots.clear();
    let without_bumps = solve_exact(&relaxed, &cfg, None).unwrap();

    // Validated against the true instance, the relaxed optimum must sit
    // on the hotspot margin.
    let violations = validate(&constrained, &without_bumps.placement).unwrap();
    let clearance = violations
        .iter()
        .filter(|v| matches!(v, Violation::BumpClearance { .. }))
        .count();
    assert!(clearance >= 1, "relaxed optimum shows no clearance violation");

    // Relaxation cannot worsen the (pure wirelength) optimum.
    let hpwl_relaxed = without_bumps.objective_breakdown.hpwl;
    let hpwl_constrained = with_bumps.objective_breakdown.hpwl;
    assert!(
        hpwl_relaxed <= hpwl_constrained + 1e-9,
        "relaxed HPWL {hpwl_relaxed} exceeds constrained {hpwl_constrained}"
    );
    println!(
        "acceptance 5 (ablation: {clearance} clearance violations unconstrained, HPWL {hpwl_relaxed:.0} <= {hpwl_constrained:.0}): PASS"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: warpage model properties.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_6_warpage_properties() {
    // Zero at the package center, exactly.
    let m = MaterialParams::default();
    assert_eq!(warpage(0.0, m.half_len_x, &m, WarpageMode::Exact).unwrap(), 0.0);
    assert_eq!(warpage(0.0, m.half_len_x, &m, WarpageMode::Quadratic).unwrap(), 0.0);

    let mut rng = ChaCha20Rng::seed_from_u64(4242);
    // Series bound for cosh(z) - 1 - z^2/2 with z <= 1: the tail sum is
    // at most z^4 * (cosh(1) - 1.5).
    let tail = 1.0f64.cosh() - 1.5;
    for draw in 0..1000 {
        let l = rng.gen_range(500.0..10_000.0);
        let m = MaterialParams {
            t: rng.gen_range(1.0..500.0),
            delta_alpha: rng.gen_range(1e-7..1e-4),
            delta_t: rng.gen_range(1.0..500.0),
            lambda: rng.gen_range(0.1..10.0),
            flex_d: rng.gen_range(1e4..1e9),
            decay_k: rng.gen_range(0.05..1.0) / l,
            half_len_x: l,
            half_len_y: l,
            warpage_threshold: 1.0,
        };

        // Monotone nondecreasing in x on [0, l] for positive coefficients.
        let a = rng.gen_range(0.0..1.0) * l;
        let b = rng.gen_range(0.0..1.0) * l;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let w_lo = warpage(lo, l, &m, WarpageMode::Quadratic).unwrap();
        let w_hi = warpage(hi, l, &m, WarpageMode::Quadratic).unwrap();
        assert!(w_hi >= w_lo - 1e-18, "draw {draw}: not monotone");

        // Exact and quadratic agree within the series remainder bound
        // (k*l <= 1 by construction of decay_k).
        let x = rng.gen_range(0.0..1.0) * l;
        let exact = warpage(x, l, &m, WarpageMode::Exact).unwrap();
        let quad = warpage(x, l, &m, WarpageMode::Quadratic).unwrap();
        let k = m.decay_k;
        let bound = m.coefficient() * tail * (k * x).powi(4) / (k * k * (k * l).cosh());
        assert!(
            (exact - quad).abs() <= bound * (1.0 + 1e-12) + 1e-18,
            "draw {draw}: |{exact} - {quad}| exceeds bound {bound}"
        );
    }
    println!("acceptance 6 (warpage properties, 1000 draws): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 7: partition correctness against the reference walk.
// ---------------------------------------------------------------------------

fn random_tree(rng: &mut ChaCha20Rng, depth: usize, next_id: &mut usize) -> HierNode {
    let id = *next_id;
    *next_id += 1;
    if depth == 0 || rng.gen_bool(0.3) {
        HierNode {
            name: format!("leaf{id}"),
            area: rng.gen_range(1.0..1000.0),
            function: "block".into(),
            children: vec![],
        }
    } else {
        let children = (0..rng.gen_range(2..5))
            .map(|_| random_tree(rng, depth - 1, next_id))
            .collect::<Vec<_>>();
        let area = children.iter().map(|c| c.area).sum();
        HierNode { name: format!("node{id}"), area, function: "block".into(), children }
    }
}

fn max_leaf_area(node: &HierNode) -> f64 {
    if node.children.is_empty() {
        node.area
    } else {
        node.children.iter().map(max_leaf_area).fold(0.0, f64::max)
    }
}

#[test]
fn acceptance_7_partition_correctness() {
    // Bundled fixture vs the reference walk.
    let tree = fixtures::soc_tree_14();
    let cfg = chipfp_core::partition::PartitionConfig { rr: 1.1, c_min: 3, c_max: 10 };
    let (a_min, a_max) = chipfp_core::partition::area_bounds(tree.leaf_area(), &cfg).unwrap();
    let pool = par_chiplet(&tree, a_min, a_max).unwrap();
    let mut expected = Vec::new();
    reference_partition(&tree, a_min, a_max, &mut expected).unwrap();
    assert_eq!(pool_as_tuples(&pool), expected, "fixture pool diverges from the reference walk");

    // Area conservation and reference agreement on 50 random trees.
    let mut rng = ChaCha20Rng::seed_from_u64(777);
    for case in 0..50 {
        let mut next_id = 0;
        let mut tree = random_tree(&mut rng, 3, &mut next_id);
        if tree.children.is_empty() {
            // Ensure at least one internal level.
            let leaf = tree.clone();
            tree = HierNode {
                name: "root".into(),
                area: leaf.area,
                function: "block".into(),
                children: vec![leaf],
            };
        }
        let a_max = max_leaf_area(&tree) * 1.2;
        let a_min = a_max / 3.0;
        let pool = par_chiplet(&tree, a_min, a_max).unwrap();

        let total: f64 = pool.iter().map(|p| p.area).sum();
        let leaves = tree.leaf_area();
        assert!(
            (total - leaves).abs() <= 1e-6 * leaves,
            "case {case}: pool area {total} vs leaves {leaves}"
        );

        let mut expected = Vec::new();
        reference_partition(&tree, a_min, a_max, &mut expected).unwrap();
        assert_eq!(pool_as_tuples(&pool), expected, "case {case} diverges from reference");
    }
    println!("acceptance 7 (partition correctness, fixture + 50 random trees): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 8: determinism of the full flow.
// ---------------------------------------------------------------------------

fn flow_documents(instance: &FloorplanInstance, workload: &Workload, cfg: &SolverConfig) -> String {
    let (primary, perf, freq) = two_stage_flow(instance, workload, cfg).unwrap();
    let report = ReportDocument::build(instance, &primary, &perf, &freq, workload, cfg.seed).unwrap();
    let mut blob = String::new();
    blob.push_str(&to_json_pretty(&SolutionDocument::from_report(instance, &primary)).unwrap());
    blob.push_str(&to_json_pretty(&SolutionDocument::from_report(instance, &perf)).unwrap());
    blob.push_str(&to_json_pretty(&chipfp_core::schema::FrequencyDocument::from_matrix(&freq)).unwrap());
    blob.push_str(&to_json_pretty(&report).unwrap());
    blob
}

#[test]
fn acceptance_8_flow_determinism() {
    let inst = fixtures::c8_instance();
    let workload = fixtures::skewed_workload_c8();
    let cfg = SolverConfig { seed: 7, ..Default::default() };

    let first = flow_documents(&inst, &workload, &cfg);
    let second = flow_documents(&inst, &workload, &cfg);
    assert_eq!(first, second, "two runs with one seed differ");

    let parallel_cfg = SolverConfig { parallel_restarts: true, ..cfg };
    let parallel = flow_documents(&inst, &workload, &parallel_cfg);
    assert_eq!(first, parallel, "parallel restarts diverge from serial");
    println!("acceptance 8 (flow determinism, serial == parallel): PASS");
}
