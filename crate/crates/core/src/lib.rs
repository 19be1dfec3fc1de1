//! Quantum-kernel support vector classification and variational quantum
//! classifiers for small tabular binary-classification problems.
//!
//! The numerical modules are generic over [`Real`] (`f32` or `f64`); the
//! `*F64` / `*F32` aliases below fix the scalar for everyday use. Data
//! ingestion, metrics reporting and the experiment runner work in `f64`.

// `!(x >= 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod encoding;
pub mod error;
pub mod experiment;
pub mod kernels;
pub mod linalg;
pub mod metrics;
pub mod qnn;
pub mod quantum;
pub mod rng;
pub mod scalar;
pub mod svc;

pub use error::{Error, ErrorClass, Result};
pub use scalar::Real;

pub type QuantumStateF64 = quantum::QuantumState<f64>;
pub type QuantumStateF32 = quantum::QuantumState<f32>;
pub type DensityMatrixF64 = quantum::DensityMatrix<f64>;
pub type DensityMatrixF32 = quantum::DensityMatrix<f32>;
pub type GateF64 = quantum::Gate<f64>;
pub type NoiseChannelF64 = quantum::NoiseChannel<f64>;
pub type FeatureVectorF64 = encoding::FeatureVector<f64>;
pub type FeatureVectorF32 = encoding::FeatureVector<f32>;
pub type KernelSpecF64 = kernels::KernelSpec<f64>;
pub type KernelSpecF32 = kernels::KernelSpec<f32>;
pub type KernelMatrixF64 = kernels::KernelMatrix<f64>;
pub type SvmTrainConfigF64 = svc::SvmTrainConfig<f64>;
pub type SvmModelF64 = svc::SvmModel<f64>;
pub type SvmModelF32 = svc::SvmModel<f32>;
pub type QnnConfigF64 = qnn::QnnConfig<f64>;
pub type QnnModelF64 = qnn::QnnModel<f64>;
