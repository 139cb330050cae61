//! Shared helpers for the integration tests.

use gdhb_core::linalg::{LinearMap, Mat};
use gdhb_core::scalar::{rat, Rat};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))
}

pub fn nonzero_small_rational(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let r = small_rational(rng);
        if !num::Zero::is_zero(&r) {
            return r;
        }
    }
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> LinearMap<Rat> {
    loop {
        let m = Mat::from_fn(n, n, |_, _| {
            rat(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3))
        });
        let lm = LinearMap::new(m);
        if lm.is_invertible() {
            return lm;
        }
    }
}

/// Pairwise distinct small rationals.
pub fn distinct_rationals(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::new();
    while out.len() < count {
        let r = small_rational(rng);
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}
