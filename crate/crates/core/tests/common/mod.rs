#![allow(dead_code)]

use posetmc::embedding::CompatibilityFunction;
use posetmc::generators::{random_poset, SimpleGraph};
use posetmc::{width_and_chain_partition, Poset};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn width(p: &Poset) -> usize {
    width_and_chain_partition(p).map(|(w, _)| w).unwrap_or(0)
}

/// Random poset on `1..=max_n` elements with width at most `max_width`
/// (resampled until it fits).
pub fn host(rng: &mut ChaCha8Rng, max_n: usize, max_width: usize) -> Poset {
    loop {
        let n = rng.gen_range(1..=max_n);
        let p = random_poset(n, rng.gen_range(0.05..0.7), rng.gen());
        if width(&p) <= max_width {
            return p;
        }
    }
}

pub fn pattern(rng: &mut ChaCha8Rng, max_n: usize) -> Poset {
    let n = rng.gen_range(1..=max_n);
    random_poset(n, rng.gen_range(0.0..=1.0), rng.gen())
}

pub fn compat(rng: &mut ChaCha8Rng, k: usize, w: usize) -> CompatibilityFunction {
    CompatibilityFunction((0..k).map(|_| rng.gen_range(0..w)).collect())
}

/// Random sentence text over `1..=max_vars` variables with `1..=max_atoms`
/// atoms, random connectives and scattered negations.
pub fn sentence_text(rng: &mut ChaCha8Rng, max_vars: usize, max_atoms: usize) -> String {
    let names = ["x", "y", "z", "u", "v"];
    let q = rng.gen_range(1..=max_vars);
    let atoms = rng.gen_range(1..=max_atoms);
    let prefix: String = names[..q].iter().map(|v| format!("E {v}. ")).collect();
    format!("{prefix}{}", matrix_text(rng, &names[..q], atoms))
}

fn matrix_text(rng: &mut ChaCha8Rng, vars: &[&str], atoms: usize) -> String {
    let body = if atoms == 1 {
        let a = vars.choose(rng).unwrap();
        let b = vars.choose(rng).unwrap();
        let op = if rng.gen_bool(0.7) { "<=" } else { "=" };
        format!("{a} {op} {b}")
    } else {
        let left = rng.gen_range(1..atoms);
        let op = if rng.gen_bool(0.5) { "&" } else { "|" };
        format!(
            "({}) {op} ({})",
            matrix_text(rng, vars, left),
            matrix_text(rng, vars, atoms - left)
        )
    };
    if rng.gen_bool(0.35) {
        format!("!({body})")
    } else {
        body
    }
}

pub fn has_independent_set(g: &SimpleGraph, k: usize) -> bool {
    let n = g.vertex_count();
    (0u32..1 << n).any(|mask| {
        mask.count_ones() as usize == k
            && (0..n).all(|u| {
                (u + 1..n).all(|v| mask >> u & 1 == 0 || mask >> v & 1 == 0 || !g.has_edge(u, v))
            })
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}
