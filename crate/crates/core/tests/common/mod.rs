//! Fixtures shared by the integration suites.

use bakerlab::branches::{chain_contraction, BranchChain, ChoiceRule, Disk, SingularData};
use bakerlab::EntireMapSpec;
use num_complex::Complex64;
use rand::Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Seeded family of chains: random disks in [-3, 3] x [-8, 8], one to four
/// steps, half following the previous endpoint and half a random anchor.
pub fn chain_family(map: &EntireMapSpec, sd: &SingularData, seed: u64) -> Vec<BranchChain> {
    let mut rng = bakerlab::rng::substream(seed, 0);
    let mut out = Vec::new();
    for _ in 0..200 {
        let center = c(rng.gen_range(-3.0..3.0), rng.gen_range(-8.0..8.0));
        let r = rng.gen_range(0.05..0.5);
        let n = rng.gen_range(1..5);
        let rule = if rng.gen_bool(0.5) {
            ChoiceRule::NearestPrevious
        } else {
            ChoiceRule::NearestTo(c(rng.gen_range(-3.0..3.0), rng.gen_range(-8.0..8.0)))
        };
        if let Ok(ch) = chain_contraction(map, sd, Disk::new(center, r), n, rule) {
            out.push(ch);
        }
    }
    out
}

