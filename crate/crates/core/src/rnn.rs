//! A two-unit Elman network trained by gradient descent, with gradients
//! taken through the sequence derivative and cross-checked against
//! unroll-then-differentiate at every step.
//!
//! The weights are not baked into the circuit. They enter as extra inputs on
//! every tick, so the derivative along a weight is the directional derivative
//! along a tangent that is constant in time.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::base::BaseTag;
use crate::caus::{self, StatefulSeq};
use crate::dsl;
use crate::error::{Error, Result};
use crate::obj::Point;
use crate::oracle::{to_f64, Differentiator, Route};

/// Recurrent weights (4), input weights (2), hidden biases (2), readout
/// weights (2) and readout bias (1).
pub const PARAMS: usize = 11;

/// The cell: state `h ∈ R²`, input `(θ, x) ∈ R¹¹ × R`,
/// `h' = tanh(W h + u x + b)`, output `v · h' + c`.
pub const ELMAN: &str = r#"; two-unit Elman cell, weights fed in as inputs
(dtr [0 0] R2
  (comp
    (poly 13 "x0" "x1" "x10*x0 + x11*x1 + x12")
    (comp
      (prod (prim tanh R2) (id R11))
      (poly 14
        "x2*x0 + x3*x1 + x6*x13 + x8"
        "x4*x0 + x5*x1 + x7*x13 + x9"
        "x2" "x3" "x4" "x5" "x6" "x7" "x8" "x9" "x10" "x11" "x12"))))
"#;

pub fn elman() -> Result<StatefulSeq> {
    dsl::load(ELMAN, BaseTag::Smooth).map_err(|e| Error::Invalid(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    /// Output the previous input.
    CopyDelay,
    /// Output the running parity of 0/1 inputs, as ±1/2.
    Parity,
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Task> {
        match s {
            "copy-delay" => Ok(Task::CopyDelay),
            "parity" => Ok(Task::Parity),
            _ => Err(Error::Invalid(format!("unknown task `{}`", s))),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::CopyDelay => "copy-delay",
            Task::Parity => "parity",
        })
    }
}

impl Task {
    /// Inputs and targets; ticks without a target get weight zero.
    fn example(self, rng: &mut ChaCha8Rng, len: usize) -> (Vec<f64>, Vec<Option<f64>>) {
        match self {
            Task::CopyDelay => {
                let xs: Vec<f64> = (0..len)
                    .map(|_| if rng.gen_bool(0.5) { 0.5 } else { -0.5 })
                    .collect();
                let ts = (0..len).map(|k| k.checked_sub(1).map(|j| xs[j])).collect();
                (xs, ts)
            }
            Task::Parity => {
                let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.5)).collect();
                let mut acc = false;
                let ts = bits
                    .iter()
                    .map(|&b| {
                        acc ^= b;
                        Some(if acc { 0.5 } else { -0.5 })
                    })
                    .collect();
                (
                    bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
                    ts,
                )
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainConfig {
    pub task: Task,
    pub steps: usize,
    pub lr: f64,
    pub seed: u64,
    /// Ticks per training sequence.
    pub len: usize,
    /// Sequences per batch; the batch is fixed for the whole run.
    pub batch: usize,
}

impl TrainConfig {
    pub fn new(task: Task) -> TrainConfig {
        TrainConfig {
            task,
            steps: 200,
            lr: 0.5,
            seed: 1,
            len: 6,
            batch: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Step {
    pub step: usize,
    pub loss: f64,
    /// Largest difference between a derivative through the sequence
    /// derivative and the same derivative through the flattened unrolling.
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Training {
    pub initial: Vec<f64>,
    pub params: Vec<f64>,
    pub log: Vec<Step>,
    /// Set when the loss stopped being finite; training stops there.
    pub diverged: bool,
}

impl Training {
    pub fn first_loss(&self) -> f64 {
        self.log.first().map_or(f64::NAN, |s| s.loss)
    }

    pub fn last_loss(&self) -> f64 {
        self.log.last().map_or(f64::NAN, |s| s.loss)
    }

    pub fn max_deviation(&self) -> f64 {
        self.log.iter().map(|s| s.deviation).fold(0.0, f64::max)
    }
}

pub struct Trainer {
    cell: StatefulSeq,
    diff: Differentiator,
    data: Vec<(Vec<f64>, Vec<Option<f64>>)>,
}

impl Trainer {
    pub fn new(cfg: &TrainConfig) -> Result<Trainer> {
        let cell = elman()?;
        let diff = Differentiator::new(&cell)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let data = (0..cfg.batch)
            .map(|_| cfg.task.example(&mut rng, cfg.len))
            .collect();
        Ok(Trainer { cell, diff, data })
    }

    fn inputs(theta: &[f64], xs: &[f64]) -> Vec<Point> {
        xs.iter()
            .map(|&x| Point::Real(theta.iter().copied().chain([x]).collect()))
            .collect()
    }

    fn scale(&self) -> f64 {
        let count: usize = self
            .data
            .iter()
            .map(|(_, ts)| ts.iter().flatten().count())
            .sum();
        1.0 / count.max(1) as f64
    }

    fn residuals(&self, theta: &[f64], xs: &[f64], ts: &[Option<f64>]) -> Result<Vec<f64>> {
        let ys = caus::run(&self.cell, &Trainer::inputs(theta, xs))?;
        ys.iter()
            .zip(ts)
            .map(|(y, t)| Ok(t.map_or(0.0, |t| to_f64(y).map_or(f64::NAN, |v| v[0] - t))))
            .collect()
    }

    /// Mean squared error over all targeted ticks.
    pub fn loss(&self, theta: &[f64]) -> Result<f64> {
        let mut loss = 0.0;
        for (xs, ts) in &self.data {
            loss += self
                .residuals(theta, xs, ts)?
                .iter()
                .map(|r| r * r)
                .sum::<f64>();
        }
        Ok(loss * self.scale())
    }

    /// Mean squared error over all targeted ticks, its gradient along every
    /// weight, and the largest disagreement between the two routes.
    pub fn loss_and_gradient(&self, theta: &[f64]) -> Result<(f64, Vec<f64>, f64)> {
        let scale = self.scale();
        let mut loss = 0.0;
        let mut grad = vec![0.0; PARAMS];
        let mut deviation: f64 = 0.0;
        for (xs, ts) in &self.data {
            let inputs = Trainer::inputs(theta, xs);
            let residual = self.residuals(theta, xs, ts)?;
            loss += scale * residual.iter().map(|r| r * r).sum::<f64>();
            for (j, g) in grad.iter_mut().enumerate() {
                let tangents: Vec<Point> = xs
                    .iter()
                    .map(|_| {
                        Point::Real(
                            (0..=PARAMS)
                                .map(|i| if i == j { 1.0 } else { 0.0 })
                                .collect(),
                        )
                    })
                    .collect();
                let fast = self.diff.directional(&inputs, &tangents, Route::SeqD)?;
                let slow = self.diff.directional(&inputs, &tangents, Route::Bptt)?;
                for ((a, b), r) in fast.iter().zip(&slow).zip(&residual) {
                    let (a, b) = (to_f64(a)?[0], to_f64(b)?[0]);
                    deviation = deviation.max((a - b).abs());
                    *g += 2.0 * scale * r * a;
                }
            }
        }
        Ok((loss, grad, deviation))
    }
}

/// Runs gradient descent, calling `on_step` after every step.
pub fn train(cfg: &TrainConfig, mut on_step: impl FnMut(&Step)) -> Result<Training> {
    let trainer = Trainer::new(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let initial: Vec<f64> = (0..PARAMS).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let mut theta = initial.clone();
    let mut log = Vec::with_capacity(cfg.steps);
    let mut diverged = false;
    for step in 0..cfg.steps {
        let (loss, grad, deviation) = trainer.loss_and_gradient(&theta)?;
        let entry = Step {
            step,
            loss,
            deviation,
        };
        on_step(&entry);
        log.push(entry);
        if !loss.is_finite() {
            diverged = true;
            break;
        }
        for (t, g) in theta.iter_mut().zip(&grad) {
            *t -= cfg.lr * g;
        }
    }
    Ok(Training {
        initial,
        params: theta,
        log,
        diverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rate_keeps_weights() {
        let cfg = TrainConfig {
            steps: 3,
            lr: 0.0,
            batch: 2,
            ..TrainConfig::new(Task::CopyDelay)
        };
        let t = train(&cfg, |_| {}).unwrap();
        assert_eq!(t.initial, t.params);
        assert!(t.log.windows(2).all(|w| w[0].loss == w[1].loss));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let cfg = TrainConfig {
            batch: 2,
            len: 4,
            ..TrainConfig::new(Task::Parity)
        };
        let trainer = Trainer::new(&cfg).unwrap();
        let theta: Vec<f64> = (0..PARAMS).map(|i| 0.1 * i as f64 - 0.4).collect();
        let (_, grad, dev) = trainer.loss_and_gradient(&theta).unwrap();
        assert!(dev < 1e-10);
        let h = 1e-6;
        for j in 0..PARAMS {
            let mut up = theta.clone();
            let mut down = theta.clone();
            up[j] += h;
            down[j] -= h;
            let fd = (trainer.loss(&up).unwrap() - trainer.loss(&down).unwrap()) / (2.0 * h);
            assert!(
                (fd - grad[j]).abs() < 1e-6 * (1.0 + fd.abs()),
                "weight {}: {} vs {}",
                j,
                grad[j],
                fd
            );
        }
    }

    #[test]
    fn cell_has_the_advertised_shape() {
        let s = elman().unwrap();
        assert_eq!(s.dom_at(0).unwrap().len(), PARAMS + 1);
        assert_eq!(s.cod_at(0).unwrap().len(), 1);
    }
}
