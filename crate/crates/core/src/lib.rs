//! Despeckling toolkit for SAR-style grayscale imagery.
//!
//! The crate covers the whole experimental loop:
//!
//! - [`image`]: the [`GrayImage`] value type, PGM and DSPK raw I/O, pixel statistics.
//! - [`wavelet`]: orthonormal Haar (Daubechies-1) analysis and synthesis.
//! - [`speckle`]: unit-mean speckle synthesis and the multiplicative to additive conversion.
//! - [`shrink`]: threshold operators, threshold selectors, linear-Gaussian MAP shrink and
//!   the Kalman gain-recursion shrink applied to detail subbands.
//! - [`filters`]: spatial median and Lee reference filters.
//! - [`metrics`]: NMV/NV/NSD, MSD, blocked ENL, deflection ratio, Sobel edges and Pratt's FOM.
//! - [`pipeline`], [`phantom`], [`bench`], [`report`]: end-to-end despeckling, the synthetic
//!   test scene, the comparison sweep and its CSV/Markdown emitters.
//!
//! With the default `parallel` feature, per-pixel and per-method work runs on rayon. Every
//! reduction is performed sequentially in row-major order, so results are bit-identical
//! regardless of thread count or whether the feature is enabled.

pub mod bench;
pub mod error;
pub mod filters;
pub mod image;
pub mod metrics;
mod par;
pub mod phantom;
pub mod pipeline;
pub mod report;
pub mod shrink;
pub mod speckle;
pub mod wavelet;

pub use error::{Error, Result};
pub use image::{GrayImage, PixelStats};
