//! Seeded random instances shared by the benchmarks, examples and tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::setfn::{CubicTerms, Edge, Group, Hyperedge};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `d` values uniform in `[-scale, scale]`.
pub fn uniform_z(rng: &mut impl Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-scale..=scale)).collect()
}

/// `count` groups with sizes in `sizes` (capped at `d`) and weights in `weights`.
pub fn random_groups(
    rng: &mut impl Rng,
    d: usize,
    count: usize,
    sizes: (usize, usize),
    weights: (f64, f64),
) -> Vec<Group> {
    let all: Vec<usize> = (0..d).collect();
    (0..count)
        .map(|_| {
            let k = rng.gen_range(sizes.0..=sizes.1).clamp(1, d.max(1));
            let mut members: Vec<usize> = all.choose_multiple(rng, k).copied().collect();
            members.sort_unstable();
            Group::new(uniform_in(rng, weights), members)
        })
        .collect()
}

/// Groups for the scaling benchmark: `d/20` to `d/10` groups of 30 to 100 elements, weight 1.
pub fn bench_groups(rng: &mut impl Rng, d: usize) -> Vec<Group> {
    let lo = (d / 20).max(1);
    let hi = (d / 10).max(lo);
    let count = rng.gen_range(lo..=hi);
    random_groups(rng, d, count, (30, 100), (1.0, 1.0))
}

fn uniform_in(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

/// Each of the `d(d-1)/2` pairs becomes an edge with probability `p`.
pub fn random_edges(rng: &mut impl Rng, d: usize, p: f64, weights: (f64, f64)) -> Vec<Edge> {
    let mut edges = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            if rng.gen_bool(p) {
                edges.push(Edge::new(i, j, uniform_in(rng, weights)));
            }
        }
    }
    edges
}

/// A spanning path in random order plus about `extra · d` random edges, weights in `(0, 1]`.
pub fn sparse_graph(rng: &mut impl Rng, d: usize, extra: f64) -> Vec<Edge> {
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let mut edges: Vec<Edge> = order.windows(2).map(|w| Edge::new(w[0], w[1], 1.0 - rng.gen::<f64>())).collect();
    if d >= 2 {
        for _ in 0..(extra * d as f64) as usize {
            let i = rng.gen_range(0..d);
            let j = rng.gen_range(0..d);
            if i != j {
                edges.push(Edge::new(i, j, 1.0 - rng.gen::<f64>()));
            }
        }
    }
    edges
}

/// `count` hyperedges with sizes in `sizes`, weights in `weights`.
pub fn random_hyperedges(
    rng: &mut impl Rng,
    d: usize,
    count: usize,
    sizes: (usize, usize),
    weights: (f64, f64),
) -> Vec<Hyperedge> {
    random_groups(rng, d, count, sizes, weights).into_iter().map(|g| Hyperedge::new(g.weight, g.members)).collect()
}

/// Random submodular function of order three: every pair coefficient is pushed
/// below minus the positive triples containing it.
pub fn random_submodular_cubic(rng: &mut impl Rng, d: usize, density: f64) -> CubicTerms {
    let mut t = CubicTerms::new();
    for i in 0..d {
        t = t.linear(i, rng.gen_range(-1.0..=1.0));
    }
    let mut positive = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                if rng.gen_bool(density) {
                    let c: f64 = rng.gen_range(-1.0..=1.0);
                    t = t.triple(i, j, k, c);
                    if c > 0.0 {
                        for (a, b) in [(i, j), (i, k), (j, k)] {
                            positive[a][b] += c;
                        }
                    }
                }
            }
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            if positive[i][j] > 0.0 || rng.gen_bool(density) {
                t = t.pair(i, j, -positive[i][j] - rng.gen::<f64>());
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfn::SetFunction;

    #[test]
    fn cubic_generator_is_submodular() {
        let mut r = rng(3);
        for _ in 0..20 {
            let t = random_submodular_cubic(&mut r, 7, 0.3);
            assert!(t.max_second_difference() <= 0.0);
            assert!(SetFunction::cubic(7, t).unwrap().is_submodular().unwrap());
        }
    }

    #[test]
    fn bench_groups_respect_sizes() {
        let gs = bench_groups(&mut rng(1), 1000);
        assert!((50..=100).contains(&gs.len()));
        assert!(gs.iter().all(|g| (30..=100).contains(&g.members.len())));
    }
}
