//! Monolithic 3-layer sigmoid MLP trained by back-propagation.
//!
//! Two costs are supported over targets that may contain masked (`None`)
//! positions, which contribute nothing:
//!
//! * standard: `E = (1/N) Σ_i e_i` with `e_i = Σ_j (y_ij − d_ij)²`,
//! * weighted: `Ē = (1/N) Σ_i ω_i e_i` with `ω_i = e_i`, i.e. every sample's
//!   squared error is scaled by its own total codeword error.
//!
//! The weighted gradient treats `ω_i` as a constant for the presentation that
//! produced it, so it equals exactly half of `∂Ē/∂w`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Domain};

pub type Target = Option<f64>;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    input_dim: usize,
    hidden_dim: usize,
    output_dim: usize,
    /// `(input_dim + 1) × hidden_dim`, row-major, last row is the bias.
    hidden_weights: Vec<f64>,
    /// `(hidden_dim + 1) × output_dim`, row-major, last row is the bias.
    output_weights: Vec<f64>,
}

/// Gradient with the same layout as the network's weight arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
}

impl Gradient {
    fn zeros(net: &Mlp) -> Self {
        Self {
            hidden: vec![0.0; net.hidden_weights.len()],
            output: vec![0.0; net.output_weights.len()],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.hidden.iter().chain(&self.output)
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

struct Activations {
    hidden: Vec<f64>,
    output: Vec<f64>,
}

impl Mlp {
    /// Uniform `[-r, r]` initialisation. `init_scale = None` uses
    /// `r = 1/sqrt(fan_in)` per layer.
    pub fn init(
        input_dim: usize,
        hidden_dim: usize,
        output_dim: usize,
        seed: u64,
        init_scale: Option<f64>,
    ) -> Result<Self> {
        check_dims(input_dim, hidden_dim, output_dim)?;
        if let Some(r) = init_scale {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::InvalidConfig(format!("init scale {r} must be finite and ≥ 0")));
            }
        }
        let mut rng = rng::stream(seed, Domain::NetworkInit, 0);
        let mut draw = |len: usize, fan_in: usize| -> Vec<f64> {
            let r = init_scale.unwrap_or_else(|| default_init_scale(fan_in));
            (0..len)
                .map(|_| if r == 0.0 { 0.0 } else { rng.random_range(-r..=r) })
                .collect()
        };
        let hidden_weights = draw((input_dim + 1) * hidden_dim, input_dim);
        let output_weights = draw((hidden_dim + 1) * output_dim, hidden_dim);
        Ok(Self {
            input_dim,
            hidden_dim,
            output_dim,
            hidden_weights,
            output_weights,
        })
    }

    pub fn from_weights(
        input_dim: usize,
        hidden_dim: usize,
        output_dim: usize,
        hidden_weights: Vec<f64>,
        output_weights: Vec<f64>,
    ) -> Result<Self> {
        check_dims(input_dim, hidden_dim, output_dim)?;
        if hidden_weights.len() != (input_dim + 1) * hidden_dim
            || output_weights.len() != (hidden_dim + 1) * output_dim
        {
            return Err(Error::InvalidDimension(format!(
                "weight arrays of length {} and {} do not fit a {input_dim}-{hidden_dim}-{output_dim} network",
                hidden_weights.len(),
                output_weights.len()
            )));
        }
        if hidden_weights.iter().chain(&output_weights).any(|w| !w.is_finite()) {
            return Err(Error::InvalidDimension("network weights must be finite".into()));
        }
        Ok(Self {
            input_dim,
            hidden_dim,
            output_dim,
            hidden_weights,
            output_weights,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn hidden_weights(&self) -> &[f64] {
        &self.hidden_weights
    }

    pub fn output_weights(&self) -> &[f64] {
        &self.output_weights
    }

    pub fn parameter_count(&self) -> usize {
        self.hidden_weights.len() + self.output_weights.len()
    }

    /// Mutable view of parameter `index` in `hidden ++ output` order.
    pub fn parameter_mut(&mut self, index: usize) -> &mut f64 {
        let split = self.hidden_weights.len();
        if index < split {
            &mut self.hidden_weights[index]
        } else {
            &mut self.output_weights[index - split]
        }
    }

    fn check_input(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.input_dim {
            return Err(Error::InvalidDimension(format!(
                "network expects {} inputs, got {}",
                self.input_dim,
                u.len()
            )));
        }
        Ok(())
    }

    fn check_target(&self, d: &[Target]) -> Result<()> {
        if d.len() != self.output_dim {
            return Err(Error::InvalidDimension(format!(
                "network has {} outputs, target has {}",
                self.output_dim,
                d.len()
            )));
        }
        Ok(())
    }

    fn activations(&self, u: &[f64]) -> Activations {
        let h = self.hidden_dim;
        let mut hidden = self.hidden_weights[self.input_dim * h..].to_vec();
        for (r, x) in u.iter().enumerate() {
            for (acc, w) in hidden.iter_mut().zip(&self.hidden_weights[r * h..(r + 1) * h]) {
                *acc += x * w;
            }
        }
        hidden.iter_mut().for_each(|a| *a = sigmoid(*a));

        let b = self.output_dim;
        let mut output = self.output_weights[h * b..].to_vec();
        for (k, x) in hidden.iter().enumerate() {
            for (acc, w) in output.iter_mut().zip(&self.output_weights[k * b..(k + 1) * b]) {
                *acc += x * w;
            }
        }
        output.iter_mut().for_each(|a| *a = sigmoid(*a));
        Activations { hidden, output }
    }

    /// Output vector `ȳ`, every entry in `(0, 1)`.
    pub fn forward(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_input(u)?;
        Ok(self.activations(u).output)
    }

    /// Adds `coefficient · ∂e_i/∂w` for one sample to `grad`, where `e_i` is the
    /// sample's squared codeword error.
    fn accumulate(&self, u: &[f64], d: &[Target], coefficient: f64, act: &Activations, grad: &mut Gradient) {
        let (h, b) = (self.hidden_dim, self.output_dim);
        let delta_out: Vec<f64> = act
            .output
            .iter()
            .zip(d)
            .map(|(y, t)| match t {
                Some(t) => coefficient * 2.0 * (y - t) * y * (1.0 - y),
                None => 0.0,
            })
            .collect();
        for (k, hk) in act.hidden.iter().chain(std::iter::once(&1.0)).enumerate() {
            for (g, delta) in grad.output[k * b..(k + 1) * b].iter_mut().zip(&delta_out) {
                *g += hk * delta;
            }
        }
        let delta_hidden: Vec<f64> = (0..h)
            .map(|k| {
                let back: f64 = self.output_weights[k * b..(k + 1) * b]
                    .iter()
                    .zip(&delta_out)
                    .map(|(w, dl)| w * dl)
                    .sum();
                back * act.hidden[k] * (1.0 - act.hidden[k])
            })
            .collect();
        for (r, x) in u.iter().chain(std::iter::once(&1.0)).enumerate() {
            for (g, delta) in grad.hidden[r * h..(r + 1) * h].iter_mut().zip(&delta_hidden) {
                *g += x * delta;
            }
        }
    }

    fn apply(&mut self, grad: &Gradient, step: f64) {
        for (w, g) in self.hidden_weights.iter_mut().zip(&grad.hidden) {
            *w -= step * g;
        }
        for (w, g) in self.output_weights.iter_mut().zip(&grad.output) {
            *w -= step * g;
        }
    }
}

fn check_dims(input_dim: usize, hidden_dim: usize, output_dim: usize) -> Result<()> {
    if input_dim == 0 || hidden_dim == 0 || output_dim == 0 {
        return Err(Error::InvalidDimension(format!(
            "network dimensions must be positive, got {input_dim}-{hidden_dim}-{output_dim}"
        )));
    }
    Ok(())
}

/// `1 / sqrt(fan_in)`.
pub fn default_init_scale(fan_in: usize) -> f64 {
    1.0 / (fan_in as f64).sqrt()
}

fn squared_error(y: &[f64], d: &[Target]) -> f64 {
    y.iter()
        .zip(d)
        .filter_map(|(y, t)| t.map(|t| (y - t).powi(2)))
        .sum()
}

/// `ω_i = Σ_j (y_ij − d_ij)²` over non-masked outputs.
pub fn sample_weight(net: &Mlp, u: &[f64], d: &[Target]) -> Result<f64> {
    net.check_target(d)?;
    Ok(squared_error(&net.forward(u)?, d))
}

fn check_dataset<U: AsRef<[f64]>, D: AsRef<[Target]>>(net: &Mlp, inputs: &[U], targets: &[D]) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput("dataset has no samples".into()));
    }
    if inputs.len() != targets.len() {
        return Err(Error::InvalidDimension(format!(
            "{} inputs but {} targets",
            inputs.len(),
            targets.len()
        )));
    }
    for (u, d) in inputs.iter().zip(targets) {
        net.check_input(u.as_ref())?;
        net.check_target(d.as_ref())?;
    }
    Ok(())
}

/// Both costs in one pass: `(E, Ē)`.
pub fn costs<U: AsRef<[f64]>, D: AsRef<[Target]>>(
    net: &Mlp,
    inputs: &[U],
    targets: &[D],
) -> Result<(f64, f64)> {
    check_dataset(net, inputs, targets)?;
    let (mut standard, mut weighted) = (0.0, 0.0);
    for (u, d) in inputs.iter().zip(targets) {
        let e = squared_error(&net.activations(u.as_ref()).output, d.as_ref());
        standard += e;
        weighted += e * e;
    }
    let n = inputs.len() as f64;
    Ok((standard / n, weighted / n))
}

/// `E = (1/N) Σ_i Σ_j (y_ij − d_ij)²`.
pub fn cost_standard<U: AsRef<[f64]>, D: AsRef<[Target]>>(net: &Mlp, inputs: &[U], targets: &[D]) -> Result<f64> {
    costs(net, inputs, targets).map(|c| c.0)
}

/// `Ē = (1/N) Σ_i ω_i e_i = (1/N) Σ_i e_i²`.
pub fn cost_weighted<U: AsRef<[f64]>, D: AsRef<[Target]>>(net: &Mlp, inputs: &[U], targets: &[D]) -> Result<f64> {
    costs(net, inputs, targets).map(|c| c.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostVariant {
    Standard,
    Weighted,
}

/// Back-propagated gradient over a batch.
///
/// `Standard` is the exact gradient of `E`. `Weighted` scales each sample's
/// output delta by `ω_i` from the same forward pass, which is `½ ∂Ē/∂w`.
pub fn gradient<U: AsRef<[f64]>, D: AsRef<[Target]>>(
    net: &Mlp,
    inputs: &[U],
    targets: &[D],
    variant: CostVariant,
) -> Result<Gradient> {
    check_dataset(net, inputs, targets)?;
    Ok(batch_gradient(net, inputs, targets, variant))
}

fn batch_gradient<U: AsRef<[f64]>, D: AsRef<[Target]>>(
    net: &Mlp,
    inputs: &[U],
    targets: &[D],
    variant: CostVariant,
) -> Gradient {
    let mut grad = Gradient::zeros(net);
    let scale = 1.0 / inputs.len() as f64;
    for (u, d) in inputs.iter().zip(targets) {
        let (u, d) = (u.as_ref(), d.as_ref());
        let act = net.activations(u);
        let coefficient = match variant {
            CostVariant::Standard => scale,
            CostVariant::Weighted => scale * squared_error(&act.output, d),
        };
        net.accumulate(u, d, coefficient, &act, &mut grad);
    }
    grad
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateMode {
    PerSample,
    FullBatch,
}

/// Step size `η_k` for epoch `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearningRate {
    Fixed(f64),
    /// `initial · decay^k`
    Decay { initial: f64, decay: f64 },
}

impl LearningRate {
    pub fn at(&self, epoch: usize) -> f64 {
        match *self {
            LearningRate::Fixed(rate) => rate,
            LearningRate::Decay { initial, decay } => initial * decay.powi(epoch as i32),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            LearningRate::Fixed(rate) => rate.is_finite() && rate > 0.0,
            LearningRate::Decay { initial, decay } => {
                initial.is_finite() && initial > 0.0 && decay.is_finite() && decay > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("learning rate {self:?} must be positive")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub cost: CostVariant,
    pub epochs: usize,
    pub learning_rate: LearningRate,
    pub seed: u64,
    pub update_mode: UpdateMode,
    /// Hidden units used when a harness run builds a fresh network.
    pub hidden_dim: usize,
    /// Uniform initialisation half-width; `None` means `1/sqrt(fan_in)`.
    pub init_scale: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            cost: CostVariant::Weighted,
            epochs: 300,
            learning_rate: LearningRate::Fixed(0.03),
            seed: 0,
            update_mode: UpdateMode::PerSample,
            hidden_dim: 64,
            init_scale: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.hidden_dim == 0 {
            return Err(Error::InvalidConfig("hidden_dim must be at least 1".into()));
        }
        self.learning_rate.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub epoch: usize,
    pub learning_rate: f64,
    /// `E` on the training set after the epoch.
    pub standard_cost: f64,
    /// `Ē` on the training set after the epoch.
    pub weighted_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainTrace {
    pub rows: Vec<TraceRow>,
}

impl TrainTrace {
    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,learning_rate,standard_cost,weighted_cost\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                r.epoch, r.learning_rate, r.standard_cost, r.weighted_cost
            ));
        }
        out
    }
}

/// Plain gradient descent, `w ← w − η_k g`.
///
/// Per-sample mode visits the samples in a freshly shuffled order each epoch
/// and updates after every presentation; full-batch mode makes one update per
/// epoch. The trace records `E` and `Ē` on the whole training set after each
/// epoch, and any non-finite value aborts training.
pub fn train<U: AsRef<[f64]>, D: AsRef<[Target]>>(
    net: &Mlp,
    inputs: &[U],
    targets: &[D],
    config: &TrainConfig,
) -> Result<(Mlp, TrainTrace)> {
    config.validate()?;
    check_dataset(net, inputs, targets)?;
    let mut net = net.clone();
    let mut trace = TrainTrace::default();
    let mut order: Vec<usize> = (0..inputs.len()).collect();

    for epoch in 0..config.epochs {
        let rate = config.learning_rate.at(epoch);
        match config.update_mode {
            UpdateMode::FullBatch => {
                let grad = batch_gradient(&net, inputs, targets, config.cost);
                net.apply(&grad, rate);
            }
            UpdateMode::PerSample => {
                let mut rng = rng::stream(config.seed, Domain::Shuffle, epoch as u64);
                rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
                for &i in &order {
                    let grad = batch_gradient(&net, &inputs[i..=i], &targets[i..=i], config.cost);
                    net.apply(&grad, rate);
                }
            }
        }
        let (standard_cost, weighted_cost) = costs(&net, inputs, targets)?;
        if !(standard_cost.is_finite() && weighted_cost.is_finite())
            || net.hidden_weights.iter().chain(&net.output_weights).any(|w| !w.is_finite())
        {
            return Err(Error::TrainingDiverged {
                epoch,
                last_finite_epoch: trace.last().map(|r| r.epoch),
            });
        }
        trace.rows.push(TraceRow {
            epoch,
            learning_rate: rate,
            standard_cost,
            weighted_cost,
        });
    }
    Ok((net, trace))
}
