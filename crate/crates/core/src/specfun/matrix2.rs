use num_complex::Complex64;

/// 2x2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2 {
    pub e11: Complex64,
    pub e12: Complex64,
    pub e21: Complex64,
    pub e22: Complex64,
}

impl Matrix2 {
    pub fn new(e11: Complex64, e12: Complex64, e21: Complex64, e22: Complex64) -> Self {
        Matrix2 { e11, e12, e21, e22 }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Matrix2::new(one, zero, zero, one)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Matrix2::new(a, zero, zero, d)
    }

    /// `exp(c * sigma_3) = diag(e^c, e^{-c})`.
    pub fn exp_sigma3(c: Complex64) -> Self {
        Matrix2::diag(c.exp(), (-c).exp())
    }

    pub fn from_real(e11: f64, e12: f64, e21: f64, e22: f64) -> Self {
        Matrix2::new(
            Complex64::new(e11, 0.0),
            Complex64::new(e12, 0.0),
            Complex64::new(e21, 0.0),
            Complex64::new(e22, 0.0),
        )
    }

    pub fn det(&self) -> Complex64 {
        self.e11 * self.e22 - self.e12 * self.e21
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.e11 * o.e11 + self.e12 * o.e21,
            self.e11 * o.e12 + self.e12 * o.e22,
            self.e21 * o.e11 + self.e22 * o.e21,
            self.e21 * o.e12 + self.e22 * o.e22,
        )
    }

    pub fn inv(&self) -> Matrix2 {
        let d = self.det();
        Matrix2::new(self.e22 / d, -self.e12 / d, -self.e21 / d, self.e11 / d)
    }

    pub fn sub(&self, o: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.e11 - o.e11,
            self.e12 - o.e12,
            self.e21 - o.e21,
            self.e22 - o.e22,
        )
    }

    pub fn scale(&self, c: Complex64) -> Matrix2 {
        Matrix2::new(c * self.e11, c * self.e12, c * self.e21, c * self.e22)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.e11
            .norm()
            .max(self.e12.norm())
            .max(self.e21.norm())
            .max(self.e22.norm())
    }
}

/// Principal branch helpers with the cut along the negative real axis.
///
/// `sqrt` keeps a positive real part in the right half-plane and
/// `(sqrt z)^2 = z` off the cut; `pow_3_2` is defined as `z * sqrt(z)` so
/// that `(sqrt z)^3 = pow_3_2(z)` holds identically.
pub mod branch {
    use num_complex::Complex64;

    pub fn sqrt(z: Complex64) -> Complex64 {
        z.sqrt()
    }

    pub fn pow_3_2(z: Complex64) -> Complex64 {
        z * z.sqrt()
    }

    pub fn quarter_root(z: Complex64) -> Complex64 {
        z.sqrt().sqrt()
    }

    pub fn log(z: Complex64) -> Complex64 {
        z.ln()
    }
}
