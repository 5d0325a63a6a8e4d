//! Foundational numerics: Gaussian quadrature with composite and half-line
//! rules, dense symmetric eigensolves, pivoted linear solves, an embedded
//! Runge-Kutta integrator and damped Newton iteration.
//!
//! Everything here is pure and reentrant; values are immutable once built.

pub mod mat;
pub mod eig;
pub mod solve;
pub mod quad;
pub mod ode;
pub mod newton;

pub use eig::{sym_eigs, tridiag_eigen, tridiag_eigenvalues, SymmetricSpectrum};
pub use mat::Mat;
pub use newton::{newton_solve, newton_solve_jac};
pub use ode::integrate_ivp;
pub use quad::{composite_rule, gauss_legendre, halfline_rule, Direction, Domain, QuadratureRule};
pub use solve::{lu_det, lu_factor, solve_linear, Lu};

/// Small deterministic generator for test inputs (SplitMix64 core).
/// Lives here so every module's tests can draw reproducible samples.
#[doc(hidden)]
pub mod test_rng {
    pub struct TestRng(u64);

    impl TestRng {
        pub fn new(seed: u64) -> Self {
            TestRng(seed)
        }

        pub fn next_u64(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }

        pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
            let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            lo + (hi - lo) * u
        }
    }
}
