//! Parameter updates: gradient descent, RMSProp, Adam, and a Nelder–Mead
//! simplex search for the derivative-free slot.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;
pub const RMSPROP_DECAY: f64 = 0.9;
pub const RMSPROP_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Adam,
    Gd,
    Rmsprop,
    /// Derivative-free Nelder–Mead simplex, standing in for COBYLA.
    Simplex,
}

impl OptimizerKind {
    pub fn uses_gradients(self) -> bool {
        !matches!(self, OptimizerKind::Simplex)
    }
}

/// Running state of a gradient-based optimizer.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerState<T> {
    Gd,
    Adam { m: Vec<T>, v: Vec<T>, t: i32 },
    Rmsprop { v: Vec<T> },
}

impl<T: Real> OptimizerState<T> {
    /// Zero-initialized state for `len` parameters.
    pub fn new(kind: OptimizerKind, len: usize) -> Result<Self> {
        match kind {
            OptimizerKind::Gd => Ok(OptimizerState::Gd),
            OptimizerKind::Adam => Ok(OptimizerState::Adam {
                m: vec![T::zero(); len],
                v: vec![T::zero(); len],
                t: 0,
            }),
            OptimizerKind::Rmsprop => Ok(OptimizerState::Rmsprop {
                v: vec![T::zero(); len],
            }),
            OptimizerKind::Simplex => Err(Error::InvalidInput(
                "the simplex optimizer is derivative-free and has no gradient step; use NelderMead".into(),
            )),
        }
    }
}

/// One gradient step, returning the updated parameters.
pub fn optimizer_step<T: Real>(
    params: &[T],
    grads: &[T],
    state: &mut OptimizerState<T>,
    learning_rate: T,
) -> Result<Vec<T>> {
    if params.len() != grads.len() {
        return Err(Error::InvalidInput(format!(
            "{} parameters but {} gradient entries",
            params.len(),
            grads.len()
        )));
    }
    let mut out = params.to_vec();
    match state {
        OptimizerState::Gd => {
            for (p, g) in out.iter_mut().zip(grads) {
                *p = *p - learning_rate * *g;
            }
        }
        OptimizerState::Adam { m, v, t } => {
            check_state_len(m.len(), params.len())?;
            *t += 1;
            let (b1, b2) = (T::lit(ADAM_BETA1), T::lit(ADAM_BETA2));
            let c1 = T::one() - b1.powi(*t);
            let c2 = T::one() - b2.powi(*t);
            let eps = T::lit(ADAM_EPSILON);
            for i in 0..out.len() {
                let g = grads[i];
                m[i] = b1 * m[i] + (T::one() - b1) * g;
                v[i] = b2 * v[i] + (T::one() - b2) * g * g;
                let m_hat = m[i] / c1;
                let v_hat = v[i] / c2;
                out[i] = out[i] - learning_rate * m_hat / (v_hat.sqrt() + eps);
            }
        }
        OptimizerState::Rmsprop { v } => {
            check_state_len(v.len(), params.len())?;
            let decay = T::lit(RMSPROP_DECAY);
            let eps = T::lit(RMSPROP_EPSILON);
            for i in 0..out.len() {
                let g = grads[i];
                v[i] = decay * v[i] + (T::one() - decay) * g * g;
                out[i] = out[i] - learning_rate * g / (v[i] + eps).sqrt();
            }
        }
    }
    Ok(out)
}

fn check_state_len(state: usize, params: usize) -> Result<()> {
    if state != params {
        return Err(Error::InvalidInput(format!(
            "optimizer state sized for {state} parameters, got {params}"
        )));
    }
    Ok(())
}

/// Nelder–Mead simplex search with the standard coefficients
/// (reflection 1, expansion 2, contraction ½, shrink ½).
#[derive(Debug, Clone)]
pub struct NelderMead<T> {
    vertices: Vec<Vec<T>>,
    values: Vec<T>,
    evaluations: usize,
}

impl<T: Real> NelderMead<T> {
    /// Initial simplex: `x0` plus `x0 + step·e_i` for every coordinate.
    pub fn new(x0: &[T], step: T, mut f: impl FnMut(&[T]) -> Result<T>) -> Result<Self> {
        if x0.is_empty() {
            return Err(Error::InvalidInput("simplex search needs at least one parameter".into()));
        }
        if !(step > T::zero()) {
            return Err(Error::InvalidInput("simplex step must be > 0".into()));
        }
        let mut vertices = vec![x0.to_vec()];
        for i in 0..x0.len() {
            let mut v = x0.to_vec();
            v[i] = v[i] + step;
            vertices.push(v);
        }
        let values = vertices.iter().map(|v| f(v)).collect::<Result<Vec<T>>>()?;
        let mut nm = Self {
            evaluations: values.len(),
            vertices,
            values,
        };
        nm.order();
        Ok(nm)
    }

    fn order(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| {
            self.values[a]
                .partial_cmp(&self.values[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        self.vertices = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        self.values = idx.iter().map(|&i| self.values[i]).collect();
    }

    pub fn best(&self) -> (&[T], T) {
        (&self.vertices[0], self.values[0])
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Spread of function values across the simplex.
    pub fn value_spread(&self) -> T {
        self.values[self.values.len() - 1] - self.values[0]
    }

    /// One reflect / expand / contract / shrink iteration.
    pub fn iterate(&mut self, mut f: impl FnMut(&[T]) -> Result<T>) -> Result<()> {
        let n = self.vertices.len() - 1;
        let dim = self.vertices[0].len();
        let worst = n;
        let mut centroid = vec![T::zero(); dim];
        for v in &self.vertices[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c = *c + *x;
            }
        }
        let inv = T::one() / T::from_usize_lossy(n);
        for c in centroid.iter_mut() {
            *c = *c * inv;
        }
        let along = |t: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&self.vertices[worst])
                .map(|(c, w)| *c + t * (*c - *w))
                .collect()
        };

        let reflected = along(T::one());
        let fr = f(&reflected)?;
        self.evaluations += 1;
        if fr < self.values[0] {
            let expanded = along(T::lit(2.0));
            let fe = f(&expanded)?;
            self.evaluations += 1;
            if fe < fr {
                self.replace_worst(expanded, fe);
            } else {
                self.replace_worst(reflected, fr);
            }
        } else if fr < self.values[n - 1] {
            self.replace_worst(reflected, fr);
        } else {
            let (point, fc) = if fr < self.values[worst] {
                let outside = along(T::lit(0.5));
                let fc = f(&outside)?;
                (outside, fc)
            } else {
                let inside = along(T::lit(-0.5));
                let fc = f(&inside)?;
                (inside, fc)
            };
            self.evaluations += 1;
            if fc < fr.min(self.values[worst]) {
                self.replace_worst(point, fc);
            } else {
                let best = self.vertices[0].clone();
                for k in 1..=n {
                    let shrunk: Vec<T> = best
                        .iter()
                        .zip(&self.vertices[k])
                        .map(|(b, x)| *b + T::lit(0.5) * (*x - *b))
                        .collect();
                    self.values[k] = f(&shrunk)?;
                    self.vertices[k] = shrunk;
                    self.evaluations += 1;
                }
            }
        }
        self.order();
        Ok(())
    }

    fn replace_worst(&mut self, point: Vec<T>, value: T) {
        let last = self.vertices.len() - 1;
        self.vertices[last] = point;
        self.values[last] = value;
    }

    /// Runs until the value spread drops below `ftol` or `max_iter` iterations pass.
    pub fn minimize(
        x0: &[T],
        step: T,
        max_iter: usize,
        ftol: T,
        mut f: impl FnMut(&[T]) -> Result<T>,
    ) -> Result<(Vec<T>, T)> {
        let mut nm = Self::new(x0, step, &mut f)?;
        for _ in 0..max_iter {
            if nm.value_spread() <= ftol {
                break;
            }
            nm.iterate(&mut f)?;
        }
        let (x, fx) = nm.best();
        Ok((x.to_vec(), fx))
    }
}
