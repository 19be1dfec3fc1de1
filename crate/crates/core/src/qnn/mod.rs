//! Variational quantum classifier: encode, run a trainable layered circuit,
//! measure, and map the expectation to [0, 1].
//!
//! The output map is (⟨Ô⟩ + 1)/2. With the optional classical head the
//! per-qubit ⟨Z_i⟩ vector feeds one dense ReLU layer and a scalar read-out
//! h, and the output is (tanh h + 1)/2 so it still lands in [0, 1].

mod circuit;
mod init;
mod optim;

pub use circuit::AnsatzSpec;
pub use init::{xavier_bound, xavier_init, InitScheme, UNIFORM_SMALL_BOUND};
pub use optim::{
    optimizer_step, NelderMead, OptimizerKind, OptimizerState, ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON,
    RMSPROP_DECAY, RMSPROP_EPSILON,
};

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{feature_map_state, FeatureMapSpec, FeatureVector};
use crate::error::{Error, Result};
use crate::quantum::{NoiseKind, Observable, QuantumState};
use crate::rng::{stage_rng, Stage};
use crate::scalar::Real;
use circuit::{evolve_and_measure, shift_jacobian};

/// Variance below which a batch of outputs counts as constant.
pub const DEAD_VARIANCE: f64 = 1e-12;
/// Loss deltas below this are flat.
pub const PLATEAU_DELTA: f64 = 1e-9;
/// Number of trailing epochs inspected for a plateau.
pub const PLATEAU_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Relu,
}

/// One hidden dense layer between the circuit read-out and the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalHead {
    pub hidden_units: usize,
    #[serde(default)]
    pub activation: Activation,
}

impl ClassicalHead {
    pub fn new(hidden_units: usize) -> Self {
        Self {
            hidden_units,
            activation: Activation::Relu,
        }
    }

    /// W1 (h×n, row-major), b1 (h), w2 (h), b2 (1).
    pub fn param_count(&self, inputs: usize) -> usize {
        self.hidden_units * inputs + 2 * self.hidden_units + 1
    }
}

fn default_learning_rate<T: Real>() -> T {
    T::lit(0.01)
}

fn default_epochs() -> usize {
    50
}

fn default_optimizer() -> OptimizerKind {
    OptimizerKind::Adam
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct QnnConfig<T> {
    pub ansatz: AnsatzSpec,
    /// Defaults to Z on qubit 0.
    #[serde(default)]
    pub observable: Option<Observable>,
    pub encoding: FeatureMapSpec,
    #[serde(default = "default_optimizer")]
    pub optimizer: OptimizerKind,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: T,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default)]
    pub init: InitScheme,
    #[serde(default)]
    pub noise: Vec<NoiseKind<T>>,
    #[serde(default)]
    pub classical_head: Option<ClassicalHead>,
    #[serde(default)]
    pub seed: u64,
}

impl<T: Real> QnnConfig<T> {
    /// Adam, η = 0.01, 50 epochs, Xavier init, no noise, no head, seed 0.
    pub fn new(ansatz: AnsatzSpec, encoding: FeatureMapSpec) -> Self {
        Self {
            ansatz,
            observable: None,
            encoding,
            optimizer: OptimizerKind::Adam,
            learning_rate: default_learning_rate(),
            epochs: default_epochs(),
            init: InitScheme::Xavier,
            noise: Vec::new(),
            classical_head: None,
            seed: 0,
        }
    }

    pub fn observable(&self) -> Result<Observable> {
        match &self.observable {
            Some(o) => Ok(o.clone()),
            None => Observable::z(self.ansatz.num_qubits, 0),
        }
    }

    pub fn circuit_param_count(&self) -> usize {
        self.ansatz.param_count()
    }

    pub fn head_param_count(&self) -> usize {
        self.classical_head
            .map_or(0, |h| h.param_count(self.ansatz.num_qubits))
    }

    pub fn param_count(&self) -> usize {
        self.circuit_param_count() + self.head_param_count()
    }

    /// Every problem with the configuration, empty when it is usable.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.ansatz.validate() {
            out.push(e.to_string());
        }
        if let Err(e) = self.encoding.validate() {
            out.push(e.to_string());
        }
        if self.encoding.num_qubits != self.ansatz.num_qubits {
            out.push(format!(
                "encoding uses {} qubits but the ansatz has {}",
                self.encoding.num_qubits, self.ansatz.num_qubits
            ));
        }
        if let Some(o) = &self.observable {
            if o.num_qubits() != self.ansatz.num_qubits {
                out.push(format!(
                    "observable {o} acts on {} qubits but the ansatz has {}",
                    o.num_qubits(),
                    self.ansatz.num_qubits
                ));
            }
        }
        if !(self.learning_rate > T::zero()) || !self.learning_rate.is_finite() {
            out.push(format!("learning_rate must be a positive number, got {}", self.learning_rate));
        }
        if self.epochs == 0 {
            out.push("epochs must be ≥ 1".into());
        }
        for n in &self.noise {
            if let Err(e) = n.validate() {
                out.push(e.to_string());
            }
        }
        if let Some(h) = self.classical_head {
            if h.hidden_units == 0 {
                out.push("classical_head.hidden_units must be ≥ 1".into());
            }
        }
        if self.optimizer == OptimizerKind::Simplex && self.param_count() == 0 {
            out.push("simplex optimizer needs at least one trainable parameter".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems))
        }
    }

    fn read_outs(&self) -> Result<Vec<Observable>> {
        if self.classical_head.is_some() {
            (0..self.ansatz.num_qubits)
                .map(|q| Observable::z(self.ansatz.num_qubits, q))
                .collect()
        } else {
            Ok(vec![self.observable()?])
        }
    }

    fn check_params(&self, params: &[T]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::InvalidParameters(format!(
                "expected {} parameters ({} circuit + {} head), got {}",
                self.param_count(),
                self.circuit_param_count(),
                self.head_param_count(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Numerical("non-finite parameter".into()));
        }
        Ok(())
    }
}

/// Seeded initial parameters: circuit angles, then head weights (biases start at 0).
pub fn init_parameters<T: Real>(config: &QnnConfig<T>) -> Result<Vec<T>> {
    let mut rng = stage_rng(config.seed, Stage::QnnInit);
    let n = config.ansatz.num_qubits;
    let mut draw = |fan_in: usize, fan_out: usize, count: usize| -> Result<Vec<T>> {
        match config.init {
            InitScheme::Xavier => init::xavier_sample(fan_in, fan_out, count, &mut rng),
            InitScheme::UniformSmall => Ok(init::uniform_sample(UNIFORM_SMALL_BOUND, count, &mut rng)),
        }
    };
    let mut params = draw(n, n, config.circuit_param_count())?;
    if let Some(head) = config.classical_head {
        let h = head.hidden_units;
        params.extend(draw(n, h, h * n)?);
        params.extend(std::iter::repeat_n(T::zero(), h));
        params.extend(draw(h, 1, h)?);
        params.push(T::zero());
    }
    Ok(params)
}

struct HeadPass<T> {
    pre: Vec<T>,
    hidden: Vec<T>,
    out: T,
}

fn head_forward<T: Real>(z: &[T], weights: &[T], hidden_units: usize) -> HeadPass<T> {
    let n = z.len();
    let (w1, rest) = weights.split_at(hidden_units * n);
    let (b1, rest) = rest.split_at(hidden_units);
    let (w2, b2) = rest.split_at(hidden_units);
    let pre: Vec<T> = (0..hidden_units)
        .map(|u| {
            w1[u * n..(u + 1) * n]
                .iter()
                .zip(z)
                .fold(b1[u], |acc, (w, x)| acc + *w * *x)
        })
        .collect();
    let hidden: Vec<T> = pre.iter().map(|p| p.max(T::zero())).collect();
    let out = hidden.iter().zip(w2).fold(b2[0], |acc, (a, w)| acc + *a * *w);
    HeadPass { pre, hidden, out }
}

fn squash<T: Real>(v: T) -> T {
    (v.tanh() + T::one()) * T::lit(0.5)
}

fn affine<T: Real>(e: T) -> T {
    (e + T::one()) * T::lit(0.5)
}

/// Everything needed to evaluate one configuration over many samples.
struct Evaluator<'a, T> {
    config: &'a QnnConfig<T>,
    read_outs: Vec<Observable>,
}

impl<'a, T: Real> Evaluator<'a, T> {
    fn new(config: &'a QnnConfig<T>) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            read_outs: config.read_outs()?,
            config,
        })
    }

    fn encode(&self, x: &FeatureVector<T>) -> Result<QuantumState<T>> {
        feature_map_state(x, &self.config.encoding)
    }

    fn split<'p>(&self, params: &'p [T]) -> (&'p [T], &'p [T]) {
        params.split_at(self.config.circuit_param_count())
    }

    fn output(&self, encoded: &QuantumState<T>, params: &[T]) -> Result<T> {
        let (circ, head) = self.split(params);
        let e = evolve_and_measure(encoded, &self.config.ansatz, circ, &self.config.noise, &self.read_outs)?;
        Ok(match self.config.classical_head {
            None => affine(e[0]),
            Some(h) => squash(head_forward(&e, head, h.hidden_units).out),
        })
    }

    /// Output and its gradient with respect to every parameter.
    fn output_and_gradient(&self, encoded: &QuantumState<T>, params: &[T]) -> Result<(T, Vec<T>)> {
        let (circ, head) = self.split(params);
        let cfg = self.config;
        let e = evolve_and_measure(encoded, &cfg.ansatz, circ, &cfg.noise, &self.read_outs)?;
        let jac = shift_jacobian(encoded, &cfg.ansatz, circ, &cfg.noise, &self.read_outs)?;
        let half = T::lit(0.5);
        let Some(h) = cfg.classical_head else {
            let grad = jac.iter().map(|row| half * row[0]).collect();
            return Ok((affine(e[0]), grad));
        };

        let units = h.hidden_units;
        let n = e.len();
        let pass = head_forward(&e, head, units);
        let t = pass.out.tanh();
        let d_out = half * (T::one() - t * t);
        let w1 = &head[..units * n];
        let w2 = &head[units * n + units..units * n + 2 * units];
        // back-propagated signal at each hidden pre-activation
        let delta: Vec<T> = (0..units)
            .map(|u| if pass.pre[u] > T::zero() { d_out * w2[u] } else { T::zero() })
            .collect();
        let d_z: Vec<T> = (0..n)
            .map(|q| (0..units).map(|u| delta[u] * w1[u * n + q]).sum())
            .collect();

        let mut grad: Vec<T> = jac
            .iter()
            .map(|row| row.iter().zip(&d_z).map(|(j, d)| *j * *d).sum())
            .collect();
        for d in &delta {
            grad.extend(e.iter().map(|v| *d * *v));
        }
        grad.extend(delta.iter().copied());
        grad.extend(pass.hidden.iter().map(|a| d_out * *a));
        grad.push(d_out);
        Ok((squash(pass.out), grad))
    }
}

/// Model output in [0, 1] for one input.
pub fn qnn_forward<T: Real>(x: &FeatureVector<T>, params: &[T], config: &QnnConfig<T>) -> Result<T> {
    let ev = Evaluator::new(config)?;
    config.check_params(params)?;
    ev.output(&ev.encode(x)?, params)
}

/// Raw ⟨Ô⟩ for the configured observable, before any head or output map.
pub fn raw_expectation<T: Real>(x: &FeatureVector<T>, params: &[T], config: &QnnConfig<T>) -> Result<T> {
    config.validate()?;
    config.check_params(params)?;
    let circ = &params[..config.circuit_param_count()];
    let encoded = feature_map_state(x, &config.encoding)?;
    let obs = [config.observable()?];
    Ok(evolve_and_measure(&encoded, &config.ansatz, circ, &config.noise, &obs)?[0])
}

/// ∂⟨Ô⟩/∂θ_index by the ±π/2 shift rule.
pub fn parameter_shift_gradient<T: Real>(
    x: &FeatureVector<T>,
    params: &[T],
    config: &QnnConfig<T>,
    index: usize,
) -> Result<T> {
    config.validate()?;
    config.check_params(params)?;
    let nc = config.circuit_param_count();
    if index >= nc {
        return Err(Error::InvalidInput(format!(
            "parameter index {index} is not a circuit parameter (there are {nc})"
        )));
    }
    let encoded = feature_map_state(x, &config.encoding)?;
    let obs = [config.observable()?];
    let mut theta = params[..nc].to_vec();
    let original = theta[index];
    theta[index] = original + T::FRAC_PI_2();
    let plus = evolve_and_measure(&encoded, &config.ansatz, &theta, &config.noise, &obs)?[0];
    theta[index] = original - T::FRAC_PI_2();
    let minus = evolve_and_measure(&encoded, &config.ansatz, &theta, &config.noise, &obs)?[0];
    Ok((plus - minus) * T::lit(0.5))
}

/// (1/n) Σ (f_i − y_i)².
pub fn mse_loss<T: Real>(outputs: &[T], targets: &[T]) -> Result<T> {
    if outputs.is_empty() {
        return Err(Error::InvalidInput("loss over an empty batch".into()));
    }
    if outputs.len() != targets.len() {
        return Err(Error::InvalidInput(format!(
            "{} outputs but {} targets",
            outputs.len(),
            targets.len()
        )));
    }
    let sum: T = outputs.iter().zip(targets).map(|(f, y)| (*f - *y) * (*f - *y)).sum();
    Ok(sum / T::from_usize_lossy(outputs.len()))
}

/// Fraction of outputs on the right side of 0.5 (output ≥ 0.5 predicts 1).
pub fn output_accuracy<T: Real>(outputs: &[T], targets: &[T]) -> T {
    if outputs.is_empty() {
        return T::zero();
    }
    let half = T::lit(0.5);
    let hits = outputs
        .iter()
        .zip(targets)
        .filter(|(f, y)| (**f >= half) == (**y >= half))
        .count();
    T::from_usize_lossy(hits) / T::from_usize_lossy(outputs.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeuronVerdict {
    Healthy,
    Dead,
}

/// Dead if the population variance of the batch outputs is below 1e-12.
pub fn dead_neuron_check<T: Real>(outputs: &[T]) -> Result<NeuronVerdict> {
    if outputs.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "dead-neuron check needs a batch of at least 2 outputs, got {}",
            outputs.len()
        )));
    }
    let n = outputs.len() as f64;
    let mean = outputs.iter().map(|v| v.as_f64()).sum::<f64>() / n;
    let var = outputs.iter().map(|v| (v.as_f64() - mean).powi(2)).sum::<f64>() / n;
    Ok(if var < DEAD_VARIANCE {
        NeuronVerdict::Dead
    } else {
        NeuronVerdict::Healthy
    })
}

/// True when the last `PLATEAU_WINDOW` epochs changed the loss by less than 1e-9 each.
pub fn loss_plateau<T: Real>(losses: &[T]) -> bool {
    if losses.len() < PLATEAU_WINDOW {
        return false;
    }
    losses[losses.len() - PLATEAU_WINDOW..]
        .windows(2)
        .all(|w| (w[1] - w[0]).abs().as_f64() < PLATEAU_DELTA)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    DeadNeuron,
    Plateau,
    SingleClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticEvent {
    pub epoch: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

/// A trained classifier with its configuration and per-epoch history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct QnnModel<T> {
    pub config: QnnConfig<T>,
    pub parameters: Vec<T>,
    pub history: Vec<EpochRecord>,
    pub diagnostics: Vec<DiagnosticEvent>,
}

impl<T: Real> QnnModel<T> {
    pub fn epochs_completed(&self) -> usize {
        self.history.len()
    }

    pub fn final_loss(&self) -> Option<f64> {
        self.history.last().map(|r| r.loss)
    }

    pub fn has_diagnostic(&self, kind: DiagnosticKind) -> bool {
        self.diagnostics.iter().any(|d| d.kind == kind)
    }

    pub fn predict_output(&self, x: &FeatureVector<T>) -> Result<T> {
        qnn_forward(x, &self.parameters, &self.config)
    }

    pub fn predict_outputs(&self, xs: &[FeatureVector<T>]) -> Result<Vec<T>> {
        let ev = Evaluator::new(&self.config)?;
        self.config.check_params(&self.parameters)?;
        xs.par_iter()
            .map(|x| ev.output(&ev.encode(x)?, &self.parameters))
            .collect()
    }

    /// Writes `epoch,loss,accuracy` rows.
    pub fn write_history_csv<W: Write>(&self, out: W) -> Result<()> {
        write_history_csv(&self.history, out)
    }

    pub fn save_history_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        self.write_history_csv(file)
    }
}

pub fn write_history_csv<W: Write>(history: &[EpochRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in history {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("history", e))?;
    Ok(())
}

fn check_dataset<T: Real>(xs: &[FeatureVector<T>], targets: &[T]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("cannot train on an empty dataset".into()));
    }
    if xs.len() != targets.len() {
        return Err(Error::InvalidInput(format!(
            "{} samples but {} targets",
            xs.len(),
            targets.len()
        )));
    }
    if let Some(bad) = targets.iter().find(|y| **y != T::zero() && **y != T::one()) {
        return Err(Error::InvalidInput(format!("targets must be 0 or 1, found {bad}")));
    }
    Ok(())
}

/// Loss, outputs, and full gradient for one batch.
pub fn loss_and_gradient<T: Real>(
    xs: &[FeatureVector<T>],
    targets: &[T],
    params: &[T],
    config: &QnnConfig<T>,
) -> Result<(T, Vec<T>, Vec<T>)> {
    check_dataset(xs, targets)?;
    let ev = Evaluator::new(config)?;
    config.check_params(params)?;
    let encoded = xs.par_iter().map(|x| ev.encode(x)).collect::<Result<Vec<_>>>()?;
    batch_loss_and_gradient(&ev, &encoded, targets, params)
}

fn batch_loss_and_gradient<T: Real>(
    ev: &Evaluator<'_, T>,
    encoded: &[QuantumState<T>],
    targets: &[T],
    params: &[T],
) -> Result<(T, Vec<T>, Vec<T>)> {
    let per_sample = encoded
        .par_iter()
        .map(|s| ev.output_and_gradient(s, params))
        .collect::<Result<Vec<_>>>()?;
    // reduce in sample order so results do not depend on thread scheduling
    let scale = T::lit(2.0) / T::from_usize_lossy(encoded.len());
    let mut grad = vec![T::zero(); params.len()];
    let mut outputs = Vec::with_capacity(encoded.len());
    for ((f, g), y) in per_sample.into_iter().zip(targets) {
        let r = (f - *y) * scale;
        for (acc, gi) in grad.iter_mut().zip(&g) {
            *acc = *acc + r * *gi;
        }
        outputs.push(f);
    }
    let loss = mse_loss(&outputs, targets)?;
    Ok((loss, outputs, grad))
}

fn batch_outputs<T: Real>(ev: &Evaluator<'_, T>, encoded: &[QuantumState<T>], params: &[T]) -> Result<Vec<T>> {
    encoded.par_iter().map(|s| ev.output(s, params)).collect()
}

struct Monitor {
    events: Vec<DiagnosticEvent>,
    losses: Vec<f64>,
    dead: bool,
    flat: bool,
}

impl Monitor {
    fn observe<T: Real>(&mut self, epoch: usize, loss: T, outputs: &[T]) -> Result<()> {
        self.losses.push(loss.as_f64());
        if outputs.len() >= 2 {
            let dead = dead_neuron_check(outputs)? == NeuronVerdict::Dead;
            if dead && !self.dead {
                let message = format!("outputs constant across the batch (value {:.6})", outputs[0].as_f64());
                log::warn!("epoch {epoch}: dead neuron, {message}");
                self.events.push(DiagnosticEvent {
                    epoch,
                    kind: DiagnosticKind::DeadNeuron,
                    message,
                });
            }
            self.dead = dead;
        }
        let flat = loss_plateau(&self.losses);
        if flat && !self.flat {
            let message = format!("loss flat at {:.6} for {PLATEAU_WINDOW} epochs", loss.as_f64());
            log::warn!("epoch {epoch}: plateau, {message}");
            self.events.push(DiagnosticEvent {
                epoch,
                kind: DiagnosticKind::Plateau,
                message,
            });
        }
        self.flat = flat;
        Ok(())
    }
}

/// Full-batch training. Deterministic for a fixed `config.seed`.
///
/// Each history entry holds the loss and accuracy of the parameters at the
/// start of that epoch, before the update.
pub fn train_qnn<T: Real>(xs: &[FeatureVector<T>], targets: &[T], config: &QnnConfig<T>) -> Result<QnnModel<T>> {
    check_dataset(xs, targets)?;
    let ev = Evaluator::new(config)?;
    let encoded = xs.par_iter().map(|x| ev.encode(x)).collect::<Result<Vec<_>>>()?;
    let mut params = init_parameters(config)?;
    let mut history = Vec::with_capacity(config.epochs);
    let mut monitor = Monitor {
        events: Vec::new(),
        losses: Vec::new(),
        dead: false,
        flat: false,
    };
    if targets.iter().all(|y| *y == targets[0]) {
        let message = format!("every target is {}", targets[0]);
        log::warn!("training on a single class: {message}");
        monitor.events.push(DiagnosticEvent {
            epoch: 0,
            kind: DiagnosticKind::SingleClass,
            message,
        });
    }

    let mut record = |epoch: usize, loss: T, outputs: &[T], monitor: &mut Monitor| -> Result<()> {
        if !loss.is_finite() {
            return Err(Error::Numerical(format!("loss became {loss} at epoch {epoch}")));
        }
        history.push(EpochRecord {
            epoch,
            loss: loss.as_f64(),
            accuracy: output_accuracy(outputs, targets).as_f64(),
        });
        monitor.observe(epoch, loss, outputs)
    };

    if config.optimizer.uses_gradients() {
        let mut state = OptimizerState::new(config.optimizer, params.len())?;
        for epoch in 0..config.epochs {
            let (loss, outputs, grad) = batch_loss_and_gradient(&ev, &encoded, targets, &params)?;
            record(epoch, loss, &outputs, &mut monitor)?;
            params = optimizer_step(&params, &grad, &mut state, config.learning_rate)?;
        }
    } else {
        let objective = |p: &[T]| -> Result<T> { mse_loss(&batch_outputs(&ev, &encoded, p)?, targets) };
        let mut nm = NelderMead::new(&params, config.learning_rate, objective)?;
        for epoch in 0..config.epochs {
            let (best, loss) = nm.best();
            let outputs = batch_outputs(&ev, &encoded, best)?;
            record(epoch, loss, &outputs, &mut monitor)?;
            nm.iterate(objective)?;
        }
        params = nm.best().0.to_vec();
    }

    Ok(QnnModel {
        config: config.clone(),
        parameters: params,
        history,
        diagnostics: monitor.events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::RotationKind;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn fv(v: &[f64]) -> FeatureVector<f64> {
        FeatureVector::new(v.to_vec()).unwrap()
    }

    fn single_ry(layers: usize) -> QnnConfig<f64> {
        let ansatz = AnsatzSpec::new(1, layers)
            .with_rotations(vec![RotationKind::Y])
            .with_entangler(false);
        QnnConfig::new(ansatz, FeatureMapSpec::angle(1))
    }

    #[test]
    fn zero_layers_reads_ground_state() {
        let cfg = single_ry(0);
        assert_eq!(qnn_forward(&fv(&[0.0]), &[], &cfg).unwrap(), 1.0);
    }

    #[test]
    fn single_rotation_expectation() {
        let cfg = single_ry(1);
        let e = raw_expectation(&fv(&[0.0]), &[1.0], &cfg).unwrap();
        assert!((e - 1f64.cos()).abs() < 1e-14);
        assert!((e - 0.5403).abs() < 1e-4);
        let out = qnn_forward(&fv(&[0.0]), &[1.0], &cfg).unwrap();
        assert!((out - (1.0 + 1f64.cos()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn full_depolarizing_kills_signal() {
        let mut cfg = single_ry(1);
        cfg.noise = vec![NoiseKind::Depolarizing { p: 1.0 }];
        for theta in [0.0, 0.4, 2.0, PI] {
            let e = raw_expectation(&fv(&[0.3]), &[theta], &cfg).unwrap();
            assert!(e.abs() < 1e-14);
        }
    }

    #[test]
    fn shift_rule_examples() {
        let cfg = single_ry(1);
        let x = fv(&[0.0]);
        assert_eq!(parameter_shift_gradient(&x, &[0.0], &cfg, 0).unwrap(), 0.0);
        let g = parameter_shift_gradient(&x, &[FRAC_PI_2], &cfg, 0).unwrap();
        assert!((g + 1.0).abs() < 1e-14);
        assert!(matches!(
            parameter_shift_gradient(&x, &[0.0], &cfg, 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn parameter_length_is_checked() {
        let cfg = single_ry(2);
        assert!(matches!(
            qnn_forward(&fv(&[0.0]), &[1.0], &cfg),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn loss_examples() {
        assert_eq!(mse_loss(&[0.0, 1.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(mse_loss(&[0.5, 0.5], &[0.0, 1.0]).unwrap(), 0.25);
        assert!(mse_loss::<f64>(&[], &[]).is_err());
        assert!(mse_loss(&[0.5], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn diagnostics() {
        assert_eq!(dead_neuron_check(&[0.5, 0.5, 0.5]).unwrap(), NeuronVerdict::Dead);
        assert_eq!(dead_neuron_check(&[0.4, 0.6]).unwrap(), NeuronVerdict::Healthy);
        assert!(dead_neuron_check(&[0.5]).is_err());
        assert!(loss_plateau(&[0.4996; 50]));
        let falling: Vec<f64> = (0..50).map(|i| 1.0 / (i + 1) as f64).collect();
        assert!(!loss_plateau(&falling));
        assert!(!loss_plateau(&[0.4996; 5]));
    }

    #[test]
    fn config_validation_collects_problems() {
        let mut cfg = single_ry(1);
        cfg.learning_rate = 0.0;
        cfg.epochs = 0;
        cfg.noise = vec![NoiseKind::AmplitudeDamping { gamma: 1.5 }];
        match cfg.validate() {
            Err(Error::Config(p)) => assert_eq!(p.len(), 3, "{p:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn param_counts() {
        let mut cfg = QnnConfig::<f64>::new(AnsatzSpec::new(3, 2), FeatureMapSpec::angle(3));
        assert_eq!(cfg.param_count(), 12);
        cfg.classical_head = Some(ClassicalHead::new(4));
        assert_eq!(cfg.head_param_count(), 4 * 3 + 4 + 4 + 1);
        assert_eq!(init_parameters(&cfg).unwrap().len(), 12 + 21);
    }

    fn finite_difference(
        xs: &[FeatureVector<f64>],
        ys: &[f64],
        params: &[f64],
        cfg: &QnnConfig<f64>,
        k: usize,
    ) -> f64 {
        let h = 1e-6;
        let mut p = params.to_vec();
        p[k] += h;
        let up = loss_and_gradient(xs, ys, &p, cfg).unwrap().0;
        p[k] -= 2.0 * h;
        let down = loss_and_gradient(xs, ys, &p, cfg).unwrap().0;
        (up - down) / (2.0 * h)
    }

    #[test]
    fn loss_gradient_matches_finite_differences_with_head_and_noise() {
        let mut cfg = QnnConfig::<f64>::new(AnsatzSpec::new(2, 2), FeatureMapSpec::angle(2));
        cfg.classical_head = Some(ClassicalHead::new(3));
        cfg.noise = vec![
            NoiseKind::Depolarizing { p: 0.05 },
            NoiseKind::AmplitudeDamping { gamma: 0.02 },
        ];
        cfg.seed = 7;
        let mut params = init_parameters(&cfg).unwrap();
        // keep hidden units active so the ReLU kink stays away from the probe
        let nc = cfg.circuit_param_count();
        for b in &mut params[nc + 6..nc + 9] {
            *b = 0.3;
        }
        let xs = vec![fv(&[0.1, 0.7]), fv(&[1.2, 0.4]), fv(&[0.9, 1.5])];
        let ys = vec![0.0, 1.0, 1.0];
        let (_, _, grad) = loss_and_gradient(&xs, &ys, &params, &cfg).unwrap();
        for (k, g) in grad.iter().enumerate() {
            let fd = finite_difference(&xs, &ys, &params, &cfg, k);
            assert!((g - fd).abs() < 1e-6, "param {k}: {g} vs {fd}");
        }
    }

    #[test]
    fn training_history_and_errors() {
        let mut cfg = single_ry(1);
        cfg.epochs = 1;
        let xs = vec![fv(&[0.0]), fv(&[FRAC_PI_2])];
        let model = train_qnn(&xs, &[0.0, 1.0], &cfg).unwrap();
        assert_eq!(model.epochs_completed(), 1);
        assert!(train_qnn(&[], &[], &cfg).is_err());
        assert!(train_qnn(&xs, &[0.0, 2.0], &cfg).is_err());
        cfg.epochs = 0;
        assert!(matches!(train_qnn(&xs, &[0.0, 1.0], &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn single_class_trains_with_warning() {
        let mut cfg = single_ry(1);
        cfg.epochs = 3;
        let xs = vec![fv(&[0.0]), fv(&[0.5])];
        let model = train_qnn(&xs, &[1.0, 1.0], &cfg).unwrap();
        assert!(model.has_diagnostic(DiagnosticKind::SingleClass));
    }

    #[test]
    fn history_csv_shape() {
        let mut cfg = single_ry(1);
        cfg.epochs = 2;
        let xs = vec![fv(&[0.0]), fv(&[FRAC_PI_2])];
        let model = train_qnn(&xs, &[0.0, 1.0], &cfg).unwrap();
        let mut buf = Vec::new();
        model.write_history_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("epoch,loss,accuracy"));
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn config_json_defaults() {
        let cfg: QnnConfig<f64> = serde_json::from_str(
            r#"{"ansatz":{"num_qubits":2,"layers":1},
                "encoding":{"scheme":"angle","num_qubits":2},
                "noise":[{"kind":"depolarizing","p":0.05}],
                "classical_head":{"hidden_units":4}}"#,
        )
        .unwrap();
        assert_eq!(cfg.ansatz.rotation_pattern, vec![RotationKind::Y, RotationKind::Z]);
        assert!(cfg.ansatz.entangler);
        assert_eq!(cfg.optimizer, OptimizerKind::Adam);
        assert_eq!(cfg.classical_head.unwrap().activation, Activation::Relu);
        assert_eq!(cfg.observable().unwrap().to_string(), "ZI");
        let back: QnnConfig<f64> = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
