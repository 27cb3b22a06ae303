//! Numerical toolkit for zero-order mixed-smoothness spaces on the torus
//! `𝕋^m`: Lorentz norms `‖·‖_{p,τ}`, dyadic block decompositions, mixed
//! moduli of smoothness, Jackson-kernel angle approximation and the
//! sequence norms built from them, plus a harness that checks the known
//! equivalences numerically over generated corpora.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the verification
//! harness runs in `f64`. Functions are trigonometric polynomials held as
//! dense coefficient boxes, so every "infinite" sum is finite except the
//! log-modulus seminorm, whose truncation tail is certified.
//!
//! ```
//! use mixsmooth::{LorentzParams, PolyNorm, TrigPoly64};
//!
//! let f = TrigPoly64::cos1(1);
//! let norm = PolyNorm::new(&[1024], LorentzParams::new(2.0, 2.0).unwrap()).unwrap();
//! assert!((norm.norm(&f).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
//! ```

pub mod approx;
pub mod error;
pub mod grid;
pub mod index;
pub mod lorentz;
pub mod params;
pub mod poly;
pub mod scalar;
pub mod seqnorms;
pub mod smoothness;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use lorentz::{lorentz_norm, GridSample, PolyNorm};
pub use params::{BlockIndex, LorentzParams, SmoothParams};
pub use poly::TrigPoly;
pub use scalar::Real;

pub type TrigPoly64 = TrigPoly<f64>;
pub type TrigPoly32 = TrigPoly<f32>;
pub type LorentzParams64 = LorentzParams<f64>;
pub type LorentzParams32 = LorentzParams<f32>;
pub type SmoothParams64 = SmoothParams<f64>;
pub type SmoothParams32 = SmoothParams<f32>;
pub type PolyNorm64 = PolyNorm<f64>;
pub type PolyNorm32 = PolyNorm<f32>;
