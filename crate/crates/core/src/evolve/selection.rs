//! Exponentially weighted selection of parents and victims.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::num::Real;
use crate::Fitness;

/// Weighting exponent κ: parents are drawn with weight `exp(-κ f)`,
/// victims with weight `exp(κ f)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig<T = Fitness> {
    pub kappa: T,
}

impl<T: Real> Default for SelectionConfig<T> {
    fn default() -> Self {
        SelectionConfig { kappa: T::lit(8.0) }
    }
}

impl<T: Real> SelectionConfig<T> {
    pub fn is_valid(&self) -> bool {
        self.kappa > T::zero() && self.kappa.is_finite()
    }

    pub fn parent_weight(&self, fitness: T) -> T {
        (-self.kappa * fitness).exp()
    }

    pub fn victim_weight(&self, fitness: T) -> T {
        (self.kappa * fitness).exp()
    }
}

/// Index drawn with probability proportional to `weights[i]`, skipping
/// `exclude`.
fn draw<T: Real, R: Rng + ?Sized>(weights: &[T], exclude: Option<usize>, rng: &mut R) -> usize {
    let live = |i: usize| Some(i) != exclude;
    let total = weights
        .iter()
        .enumerate()
        .filter(|(i, _)| live(*i))
        .fold(T::zero(), |acc, (_, &w)| acc + w);
    let mut u = T::lit(rng.random::<f64>()) * total;
    let mut last = None;
    for (i, &w) in weights.iter().enumerate() {
        if !live(i) {
            continue;
        }
        if u < w {
            return i;
        }
        u = u - w;
        last = Some(i);
    }
    last.expect("at least one selectable member")
}

/// Parent index; fitter (lower) members are likelier.
pub fn select_parent<T: Real, R: Rng + ?Sized>(fitness: &[T], cfg: &SelectionConfig<T>, rng: &mut R) -> usize {
    let w: Vec<T> = fitness.iter().map(|&f| cfg.parent_weight(f)).collect();
    draw(&w, None, rng)
}

/// Two distinct parent indices, the second drawn from the rest.
pub fn select_parent_pair<T: Real, R: Rng + ?Sized>(
    fitness: &[T],
    cfg: &SelectionConfig<T>,
    rng: &mut R,
) -> (usize, usize) {
    assert!(fitness.len() >= 2, "need two members");
    let w: Vec<T> = fitness.iter().map(|&f| cfg.parent_weight(f)).collect();
    let first = draw(&w, None, rng);
    (first, draw(&w, Some(first), rng))
}

/// Victim index; less fit members are likelier.
pub fn select_victim<T: Real, R: Rng + ?Sized>(fitness: &[T], cfg: &SelectionConfig<T>, rng: &mut R) -> usize {
    let w: Vec<T> = fitness.iter().map(|&f| cfg.victim_weight(f)).collect();
    draw(&w, None, rng)
}
