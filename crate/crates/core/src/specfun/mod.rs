//! Special functions (Airy, modified Bessel, Hankel) for real and complex
//! arguments, and the explicit 2x2 local model matrices used in the
//! contour-jump verification suite.

pub mod matrix2;
pub mod airy;
pub mod bessel;
pub mod models;

pub use airy::{ai_pair, ai_pair_real, airy_ai, airy_ai_prime, airy_ai_prime_real, airy_ai_real};
pub use bessel::{
    bessel_i0, bessel_i0_complex, bessel_i0_scaled, bessel_i1, bessel_i1_complex, bessel_k0,
    bessel_k0_complex, bessel_k1, bessel_k1_complex, hankel_h0_1, hankel_h0_2, hankel_h1_1,
    hankel_h1_2,
};
pub use matrix2::{branch, Matrix2};
pub use models::{bessel_q, model_pa, model_pa_boundary, model_pb, twist_m, QRegion};
