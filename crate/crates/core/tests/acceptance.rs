//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::{Duration, Instant};

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use proxflow::generate::*;
use proxflow::maxflow::{max_flow, CutSide, FlowOptions};
use proxflow::netrep::{represent, represent_negative_terms, represent_order3, represent_truncation, Capacity, FlowNetwork};
use proxflow::oracle::*;
use proxflow::paraflow::{self, ParametricProblem};
use proxflow::prox::{prox, DualSetup, Exponent, ProxProblem, Regime};
use proxflow::setfn::{bits_to_set, CubicTerms, SetFunction};
use proxflow::solver::{fista, LeastSquaresTask};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn random_network(r: &mut ChaCha8Rng) -> FlowNetwork {
    let inner = r.gen_range(1..=12);
    let integral = r.gen_bool(0.5);
    let mut net = FlowNetwork::new(0);
    for _ in 0..inner {
        net.add_aux();
    }
    let n = inner + 2;
    let density = r.gen_range(0.2..0.6);
    for u in 0..n {
        for v in 0..n {
            if u == v || v == 0 || u == 1 || !r.gen_bool(density) {
                continue;
            }
            let c = if integral { r.gen_range(0..=10) as f64 } else { r.gen_range(0.0..=10.0) };
            net.add_arc(u, v, Capacity::Finite(c)).unwrap();
        }
    }
    net
}

fn c1_maxflow() -> Outcome {
    let start = Instant::now();
    let mut r = rng(101);
    let budget = OracleBudget::default();
    let mut worst = 0.0f64;
    for k in 0..200 {
        let net = random_network(&mut r);
        let opts = FlowOptions { global_relabel: k % 2 == 0 };
        let flow = max_flow(&net, &|_| 0.0, &opts).map_err(|e| e.to_string())?;
        let fam = brute_mincut(&net, &|_| 0.0, &budget).map_err(|e| e.to_string())?;
        let err = (flow.value() - fam.value).abs();
        worst = worst.max(err);
        check(err <= 1e-9, || format!("network {k}: flow {} vs cut {}", flow.value(), fam.value))?;
        let lo = flow.cut_mask(CutSide::Minimal).map_err(|e| e.to_string())?;
        let hi = flow.cut_mask(CutSide::Maximal).map_err(|e| e.to_string())?;
        check(fam.contains(&lo) && fam.contains(&hi), || format!("network {k}: a returned cut is not minimum"))?;
        check(lo == fam.minimal, || format!("network {k}: minimal cut is not inclusion-minimal"))?;
        check(hi == fam.maximal, || format!("network {k}: maximal cut is not inclusion-maximal"))?;
    }
    let el = start.elapsed();
    check(el < Duration::from_secs(30), || format!("took {el:?}"))?;
    Ok(format!("200 networks, max |flow - cut| = {worst:.1e}, {:.2}s", el.as_secs_f64()))
}

/// Sparse submodular cubic: two triples, the pairs they force, two extra pairs.
fn sparse_cubic(r: &mut ChaCha8Rng, d: usize, negative_only: bool) -> CubicTerms {
    let mut t = CubicTerms::new();
    for i in 0..d {
        t = t.linear(i, r.gen_range(-1.0..=1.0));
    }
    let mut pairs = std::collections::BTreeMap::new();
    if d >= 3 {
        for _ in 0..2 {
            let mut idx: Vec<usize> = rand::seq::index::sample(r, d, 3).into_vec();
            idx.sort_unstable();
            let c: f64 = if negative_only { -r.gen_range(0.1..=1.0) } else { r.gen_range(-1.0..=1.0) };
            t = t.triple(idx[0], idx[1], idx[2], c);
            if c > 0.0 {
                for (a, b) in [(idx[0], idx[1]), (idx[0], idx[2]), (idx[1], idx[2])] {
                    *pairs.entry((a, b)).or_insert(0.0) += c;
                }
            }
        }
    }
    if d >= 2 {
        for _ in 0..2 {
            let mut idx: Vec<usize> = rand::seq::index::sample(r, d, 2).into_vec();
            idx.sort_unstable();
            pairs.entry((idx[0], idx[1])).or_insert(0.0);
        }
    }
    for ((a, b), pos) in pairs {
        t = t.pair(a, b, -pos - r.gen_range(0.1..=1.0));
    }
    t
}

fn c2_representation() -> Outcome {
    let mut r = rng(202);
    for k in 0..100 {
        let d = r.gen_range(1..=8);
        let w: Vec<f64> = (0..d).map(|_| r.gen_range(0.0..=2.0)).collect();
        let y = r.gen_range(0.0..=w.iter().sum::<f64>() + 0.5);
        let f = SetFunction::truncation(w.clone(), y).unwrap();
        let net = represent_truncation(&w, y).map_err(|e| e.to_string())?;
        check(verify_representation(&net, &f).map_err(|e| e.to_string())?, || format!("truncation {k}"))?;

        let f = SetFunction::cubic(d, sparse_cubic(&mut r, d, false)).unwrap();
        let net = represent_order3(&f.mobius().unwrap()).map_err(|e| e.to_string())?;
        check(verify_representation(&net, &f).map_err(|e| e.to_string())?, || format!("order-3 {k}"))?;

        let f = SetFunction::cubic(d, sparse_cubic(&mut r, d, true)).unwrap();
        let net = represent_negative_terms(&f.mobius().unwrap()).map_err(|e| e.to_string())?;
        check(verify_representation(&net, &f).map_err(|e| e.to_string())?, || format!("negative terms {k}"))?;
    }
    // Mutations: raise the cap arc of a binding truncation, and shift an order-3 constant.
    let f = SetFunction::truncation(vec![1.0, 1.0, 1.0], 1.5).unwrap();
    let net = represent_truncation(&[1.0, 1.0, 1.0], 1.5).unwrap();
    let mut bad = FlowNetwork::new(3);
    bad.add_aux();
    for a in net.arcs() {
        let cap = match a.cap {
            Capacity::Finite(c) if a.head == FlowNetwork::SINK => Capacity::Finite(c + 1.0),
            c => c,
        };
        bad.add_arc(a.tail, a.head, cap).unwrap();
    }
    check(!verify_representation(&bad, &f).unwrap(), || "mutated truncation accepted".into())?;
    let f = SetFunction::cubic(3, CubicTerms::new().linear(0, 1.0).pair(0, 1, -0.5)).unwrap();
    let mut net = represent_order3(&f.mobius().unwrap()).unwrap();
    net.set_offset(net.offset() + 0.5);
    check(!verify_representation(&net, &f).unwrap(), || "mutated order-3 accepted".into())?;
    Ok("300 constructions verified, 2 mutations rejected".into())
}

fn random_function(r: &mut ChaCha8Rng, d: usize, kind: usize) -> (SetFunction, Option<bool>) {
    match kind {
        0 => {
            let c = r.gen_range(1..=4);
            (SetFunction::group_cover(d, random_groups(r, d, c, (1, d), (0.1, 2.0))).unwrap(), Some(true))
        }
        1 => (SetFunction::graph_cut(d, random_edges(r, d, 0.4, (0.1, 2.0))).unwrap(), Some(true)),
        2 => {
            let c = r.gen_range(1..=4);
            (SetFunction::hypergraph_cut(d, random_hyperedges(r, d, c, (2, d.max(2)), (0.1, 2.0))).unwrap(), Some(true))
        }
        3 => {
            let w = (0..d).map(|_| r.gen_range(0.0..=2.0)).collect();
            (SetFunction::truncation(w, r.gen_range(0.0..=3.0)).unwrap(), Some(true))
        }
        _ => {
            // Arbitrary cubic: submodular exactly when no pair can have a positive second difference.
            let mut t = CubicTerms::new();
            for i in 0..d {
                t = t.linear(i, r.gen_range(-1.0..=1.0));
                for j in i + 1..d {
                    if r.gen_bool(0.3) {
                        t = t.pair(i, j, r.gen_range(-2.0..=0.3));
                    }
                    for k in j + 1..d {
                        if r.gen_bool(0.05) {
                            t = t.triple(i, j, k, r.gen_range(-0.5..=0.5));
                        }
                    }
                }
            }
            let expected = t.max_second_difference() <= 0.0;
            (SetFunction::cubic(d, t).unwrap(), Some(expected))
        }
    }
}

fn c3_mobius() -> Outcome {
    let mut r = rng(303);
    let (mut sub, mut non) = (0, 0);
    for k in 0..500 {
        let d = r.gen_range(1..=10);
        let (f, expected) = random_function(&mut r, d, k % 5);
        let table = f.mobius().map_err(|e| e.to_string())?;
        for bits in 0..1u64 << d {
            let mask: Vec<bool> = (0..d).map(|i| bits >> i & 1 == 1).collect();
            let (a, b) = (table.eval_mask(&mask), f.eval_bits(bits));
            check((a - b).abs() <= 1e-9, || format!("function {k}: Möbius sum {a} vs F {b} at {:?}", bits_to_set(bits, d)))?;
        }
        let got = f.is_submodular().map_err(|e| e.to_string())?;
        if let Some(e) = expected {
            check(got == e, || format!("function {k}: submodularity {got}, expected {e}"))?;
        }
        if got {
            sub += 1;
        } else {
            non += 1;
        }
    }
    Ok(format!("500 functions ({sub} submodular, {non} not)"))
}

fn random_penalty(r: &mut ChaCha8Rng, d: usize, kind: usize) -> SetFunction {
    match kind {
        0 => {
            let c = r.gen_range(1..=4);
            SetFunction::group_cover(d, random_groups(r, d, c, (1, d), (0.1, 2.0))).unwrap()
        }
        1 => SetFunction::graph_cut(d, random_edges(r, d, 0.4, (0.1, 2.0))).unwrap(),
        2 => {
            let c = r.gen_range(1..=4);
            SetFunction::hypergraph_cut(d, random_hyperedges(r, d, c, (2, d.max(2)), (0.1, 2.0))).unwrap()
        }
        _ => SetFunction::cubic(d, random_submodular_cubic(r, d, 0.3)).unwrap(),
    }
}

fn c4_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(404);
    let mut worst = 0.0f64;
    let mut calls = 0;
    for k in 0..200 {
        let d = r.gen_range(1..=10);
        let f = random_penalty(&mut r, d, k % 4);
        let z = uniform_z(&mut r, d, 3.0);
        for p in [Exponent::Finite(2.0), Exponent::Infinity] {
            for lambda in [0.1, 1.0, 10.0] {
                let pb = ProxProblem::new(z.clone(), lambda, p, f.clone()).unwrap();
                let mine = prox(&pb).map_err(|e| format!("instance {k}: {e}"))?;
                let o = decomposition_prox(&pb, &OracleBudget::default()).map_err(|e| e.to_string())?;
                let err = max_abs_diff(&mine.w, &o.w);
                worst = worst.max(err);
                calls += 1;
                check(err <= 1e-6, || format!("instance {k}, p {p:?}, λ {lambda}: ‖Δw‖∞ = {err:.3e}"))?;
            }
        }
    }
    let el = start.elapsed();
    check(el < Duration::from_secs(120), || format!("took {el:?}"))?;
    Ok(format!("{calls} prox calls, max ‖Δw‖∞ = {worst:.1e}, {:.2}s", el.as_secs_f64()))
}

fn c5_soft_threshold() -> Outcome {
    let mut r = rng(505);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let d = 1000;
        let z = uniform_z(&mut r, d, 3.0);
        let lambda = r.gen_range(0.05..=2.0);
        let pb = ProxProblem::new(z.clone(), lambda, Exponent::Infinity, SetFunction::singletons(d, 1.0).unwrap()).unwrap();
        let w = prox(&pb).map_err(|e| e.to_string())?.w;
        let soft: Vec<f64> = z.iter().map(|&v| v.signum() * (v.abs() - lambda).max(0.0)).collect();
        worst = worst.max(max_abs_diff(&w, &soft));
    }
    check(worst <= 1e-10, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("5 instances, d = 1000, max deviation {worst:.1e}"))
}

fn c6_fused() -> Outcome {
    let mut r = rng(606);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let d = 500;
        let weights: Vec<f64> = (0..d - 1).map(|_| r.gen_range(0.2..=1.5)).collect();
        let lambda = r.gen_range(0.05..=1.0);
        let z = uniform_z(&mut r, d, 2.0);
        let pb = ProxProblem::new(z.clone(), lambda, Exponent::Infinity, SetFunction::chain(d, &weights).unwrap()).unwrap();
        let w = prox(&pb).map_err(|e| e.to_string())?.w;
        let reference = fused_1d_oracle(&z, lambda, &weights).map_err(|e| e.to_string())?;
        worst = worst.max(max_abs_diff(&w, &reference));
    }
    check(worst <= 1e-6, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("20 chains, d = 500, max deviation {worst:.1e}"))
}

fn c7_chain() -> Outcome {
    let mut r = rng(707);
    let budget = OracleBudget::default();
    let mut levels = 0;
    for k in 0..200 {
        let d = r.gen_range(1..=10);
        let f = random_penalty(&mut r, d, k % 4);
        let p = if k % 3 == 0 { Exponent::Finite(2.0) } else { Exponent::Infinity };
        let pb = ProxProblem::new(uniform_z(&mut r, d, 3.0), r.gen_range(0.1..=3.0), p, f).unwrap();
        let setup = DualSetup::new(&pb).map_err(|e| e.to_string())?;
        let para = ParametricProblem::new(represent(&setup.shifted).unwrap(), setup.curves.clone()).unwrap();
        let sol = paraflow::solve(&para, &FlowOptions::default()).map_err(|e| e.to_string())?;
        let chain = &sol.chain;
        for w in chain.sets.windows(2) {
            check(w[0].len() < w[1].len() && w[0].iter().all(|i| w[1].contains(i)), || format!("instance {k}: not strictly nested"))?;
        }
        check(chain.breakpoints.windows(2).all(|b| b[0] < b[1]), || format!("instance {k}: breakpoints not increasing"))?;
        let first = chain.sets.len() - chain.breakpoints.len();
        check(first == 1, || format!("instance {k}: {} sets for {} breakpoints", chain.sets.len(), chain.breakpoints.len()))?;
        let mask = |s: &[usize]| s.iter().fold(0u64, |m, &i| m | 1 << i);
        for (j, &alpha) in chain.breakpoints.iter().enumerate() {
            let phi: Vec<f64> = setup.curves.iter().map(|c| c.value(alpha)).collect();
            let g = |m: u64| setup.shifted.eval_bits(m) - (0..d).filter(|&i| m >> i & 1 == 1).map(|i| phi[i]).sum::<f64>();
            let best = brute_sfm(d, &g, &budget).map_err(|e| e.to_string())?;
            for set in [&chain.sets[j], &chain.sets[j + 1]] {
                let v = g(mask(set));
                check(v <= best.value + 1e-8 * best.value.abs().max(1.0), || {
                    format!("instance {k}: chain set {set:?} has F_α = {v}, minimum {} at α = {alpha}", best.value)
                })?;
            }
        }
        let tau = paraflow::recover_tau(chain, &setup.shifted, &setup.curves).map_err(|e| e.to_string())?;
        for set in &chain.sets {
            let (t, fv) = (set.iter().map(|&i| tau[i]).sum::<f64>(), setup.shifted.eval(set).unwrap());
            check((t - fv).abs() <= 1e-8, || format!("instance {k}: τ(A) = {t} but F(A) = {fv}"))?;
        }
        levels += chain.breakpoints.len();
    }
    Ok(format!("200 chains, {levels} breakpoints checked against exhaustive minimization"))
}

fn c8_work() -> Outcome {
    let mut worst = 0.0f64;
    for (name, kind) in [("group", 0), ("fused", 1)] {
        let mut r = rng(808 + kind);
        for k in 0..20 {
            let d = 1000;
            let z = uniform_z(&mut r, d, 1.0);
            let f = if kind == 0 {
                SetFunction::group_cover(d, bench_groups(&mut r, d)).unwrap()
            } else {
                SetFunction::chain(d, &vec![1.0; d - 1]).unwrap()
            };
            let pb = ProxProblem::new(z, 1.0, Exponent::Infinity, f).unwrap();
            let setup = DualSetup::new(&pb).unwrap();
            let para = ParametricProblem::new(represent(&setup.shifted).unwrap(), setup.curves.clone()).unwrap();
            let sol = paraflow::solve(&para, &FlowOptions::default()).map_err(|e| e.to_string())?;
            let cold = para.cold_flow(0.0, &FlowOptions::default()).map_err(|e| e.to_string())?;
            let ratio = sol.counters.work() as f64 / cold.counters().work().max(1) as f64;
            worst = worst.max(ratio);
            check(ratio <= 10.0, || format!("{name} instance {k}: work ratio {ratio:.2}"))?;
        }
    }
    Ok(format!("40 instances, d = 1000, worst work ratio {worst:.2}"))
}

fn c9_axioms() -> Outcome {
    let mut r = rng(909);
    let mut norm_checked = 0;
    for k in 0..60 {
        let d = r.gen_range(2..=50);
        let f = match k % 3 {
            0 => {
                let c = r.gen_range(1..=d.min(10));
                SetFunction::group_cover(d, random_groups(&mut r, d, c, (1, d.min(8)), (0.1, 2.0))).unwrap()
            }
            1 => SetFunction::graph_cut(d, sparse_graph(&mut r, d, 0.5)).unwrap(),
            _ => {
                let c = r.gen_range(1..=d.min(10));
                SetFunction::hypergraph_cut(d, random_hyperedges(&mut r, d, c, (2, d.min(6)), (0.1, 2.0))).unwrap()
            }
        };
        let p = if k % 2 == 0 { Exponent::Infinity } else { Exponent::Finite(2.0) };
        let lambda = r.gen_range(0.1..=2.0);
        let z1 = uniform_z(&mut r, d, 2.0);
        let z2 = uniform_z(&mut r, d, 2.0);
        let run = |z: &[f64], l: f64| prox(&ProxProblem::new(z.to_vec(), l, p, f.clone()).unwrap()).map_err(|e| e.to_string());
        let s1 = run(&z1, lambda)?;
        let w2 = run(&z2, lambda)?.w;
        let dw = s1.w.iter().zip(&w2).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let dz = z1.iter().zip(&z2).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        check(dw <= dz + 1e-8, || format!("instance {k}: ‖Δw‖ = {dw} > ‖Δz‖ = {dz}"))?;
        if s1.report.regime == Regime::Norm {
            norm_checked += 1;
            for (w, z) in s1.w.iter().zip(&z1) {
                check(w.abs() <= z.abs() + 1e-8 && w * z >= -1e-8, || format!("instance {k}: w = {w} for z = {z}"))?;
            }
        }
        let c = r.gen_range(0.2..=5.0);
        let scaled: Vec<f64> = z1.iter().map(|v| c * v).collect();
        let ws = run(&scaled, c * lambda)?.w;
        let expect: Vec<f64> = s1.w.iter().map(|v| c * v).collect();
        let err = max_abs_diff(&ws, &expect);
        check(err <= 1e-8, || format!("instance {k}: homogeneity error {err:.3e}"))?;
    }
    Ok(format!("60 instances (nonexpansive, homogeneous; sign and shrinkage on {norm_checked} norm-regime ones)"))
}

fn c10_fista() -> Outcome {
    let mut r = rng(1010);
    let mut worst_res = 0.0f64;
    for k in 0..6 {
        let (n, d) = (40, 20);
        let x = Array2::from_shape_fn((n, d), |_| r.gen_range(-1.0..=1.0));
        let truth: Vec<f64> = (0..d).map(|i| if i < d / 2 { 1.0 } else { 0.0 }).collect();
        let y = x.dot(&Array1::from(truth)) + Array1::from(uniform_z(&mut r, n, 0.1));
        let penalty = if k % 2 == 0 {
            SetFunction::group_cover(d, random_groups(&mut r, d, 5, (2, 6), (0.5, 1.5))).unwrap()
        } else {
            SetFunction::chain(d, &vec![1.0; d - 1]).unwrap()
        };
        let task = LeastSquaresTask {
            x,
            y,
            lambda: r.gen_range(0.5..=3.0),
            p: Exponent::Infinity,
            penalty,
            max_iters: 20000,
            tolerance: 1e-15,
        };
        let res = fista(&task).map_err(|e| e.to_string())?;
        for (j, w) in res.objective.windows(2).enumerate() {
            check(w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0), || format!("task {k}: objective rose at step {j}: {} -> {}", w[0], w[1]))?;
        }
        worst_res = worst_res.max(res.residual);
        check(res.residual <= 1e-5, || format!("task {k}: fixed-point residual {:.3e}", res.residual))?;
    }
    let d = 15;
    let y = uniform_z(&mut r, d, 2.0);
    let penalty = SetFunction::hypergraph_cut(d, random_hyperedges(&mut r, d, 4, (2, 5), (0.5, 1.5))).unwrap();
    let task = LeastSquaresTask {
        x: Array2::eye(d),
        y: Array1::from(y.clone()),
        lambda: 0.8,
        p: Exponent::Infinity,
        penalty: penalty.clone(),
        max_iters: 20000,
        tolerance: 1e-15,
    };
    let res = fista(&task).map_err(|e| e.to_string())?;
    let direct = prox(&ProxProblem::new(y, 0.8, Exponent::Infinity, penalty).unwrap()).unwrap().w;
    let err = max_abs_diff(&res.w, &direct);
    check(err <= 1e-8, || format!("identity design deviates from prox by {err:.3e}"))?;
    Ok(format!("6 monotone traces, max residual {worst_res:.1e}; identity design within {err:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("max-flow vs exhaustive min-cut", c1_maxflow),
        ("representation identity", c2_representation),
        ("Möbius round trip and submodularity", c3_mobius),
        ("prox vs decomposition oracle", c4_oracle),
        ("singleton groups give soft-thresholding", c5_soft_threshold),
        ("chain cut matches 1-D fused oracle", c6_fused),
        ("cut chain structure", c7_chain),
        ("warm-start work bound", c8_work),
        ("prox axioms", c9_axioms),
        ("FISTA", c10_fista),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
