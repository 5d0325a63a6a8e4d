//! Monte Carlo validation: eigenvalue draws of the 2x^2-potential unitary
//! ensemble through its symmetric tridiagonal model, scaled order
//! statistics, and empirical-law comparisons.
//!
//! A draw builds the tridiagonal matrix with N(0, 1/(4n)) diagonal and
//! chi_{2(n-i)} / (2 sqrt(2n)) off-diagonal entries, whose eigenvalue
//! density is prod |x_l - x_k|^2 e^{-2n sum x^2}; the scale is fixed by the
//! exact second-moment identity E[(1/n) sum lambda^2] = 1/4 rather than
//! taken on faith. Randomness is counter-based: every draw derives its own
//! substream from (seed, draw index), so parallel or out-of-order sampling
//! is deterministic.

use crate::numcore::tridiag_eigenvalues;
use crate::{Error, Result};

/// One spectrum draw: eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct SpectrumSample {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub seed: u64,
}

/// SplitMix64 stream; cheap, splittable, passes the usual batteries.
pub struct Stream(u64);

impl Stream {
    /// Substream for a (seed, index) pair.
    pub fn for_draw(seed: u64, index: u64) -> Stream {
        // decorrelate the lanes before handing the state to splitmix
        let mixed = splitmix(seed ^ splitmix(index.wrapping_add(0x9e3779b97f4a7c15)));
        Stream(mixed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        splitmix(self.0)
    }

    pub fn uniform(&mut self) -> f64 {
        // (0, 1): never exactly zero so logs are safe
        (((self.next_u64() >> 11) as f64) + 0.5) / (1u64 << 53) as f64
    }

    /// Standard normal by Box-Muller (both values used).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u = self.uniform();
        let v = self.uniform();
        let r = (-2.0 * u.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * v;
        (r * t.cos(), r * t.sin())
    }

    pub fn normal(&mut self) -> f64 {
        self.normal_pair().0
    }

    /// Gamma(shape >= 1) by the Marsaglia-Tsang squeeze.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape >= 1.0);
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let v = (1.0 + c * x).powi(3);
            if v <= 0.0 {
                continue;
            }
            let u = self.uniform();
            if u < 1.0 - 0.0331 * x.powi(4) {
                return d * v;
            }
            if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    /// chi_k-distributed value, k >= 2.
    pub fn chi(&mut self, k: usize) -> f64 {
        (2.0 * self.gamma(k as f64 / 2.0)).sqrt()
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Draw the spectrum of one n x n ensemble matrix (draw index 0).
pub fn sample_spectrum(n: usize, seed: u64) -> Result<SpectrumSample> {
    sample_spectrum_indexed(n, seed, 0)
}

/// Draw with an explicit substream index.
pub fn sample_spectrum_indexed(n: usize, seed: u64, index: u64) -> Result<SpectrumSample> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut rng = Stream::for_draw(seed, index);
    let scale = 1.0 / (2.0 * (n as f64).sqrt());
    let diag: Vec<f64> = (0..n).map(|_| rng.normal() * scale).collect();
    let off: Vec<f64> = (1..n)
        .map(|i| rng.chi(2 * (n - i)) * scale / 2f64.sqrt())
        .collect();
    let eigenvalues = tridiag_eigenvalues(&diag, &off)?;
    Ok(SpectrumSample { n, eigenvalues, seed })
}

/// The edge-scaled m-th largest eigenvalue, c_V n^{2/3} (lambda_m - 1).
pub fn scale_statistic(sample: &SpectrumSample, m: usize, c_v: f64) -> Result<f64> {
    if m == 0 || m > sample.eigenvalues.len() {
        return Err(Error::InvalidArgument("order statistic index out of range".into()));
    }
    let lambda = sample.eigenvalues[m - 1];
    Ok(c_v * (sample.n as f64).powf(2.0 / 3.0) * (lambda - 1.0))
}

/// Empirical law of a batch of real statistics.
#[derive(Clone, Debug)]
pub struct EmpiricalLaw {
    sorted: Vec<f64>,
}

impl EmpiricalLaw {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        EmpiricalLaw { sorted: values }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.sorted.partition_point(|&v| v <= x);
        k as f64 / self.sorted.len() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Sup-norm distance to a reference CDF over the sample points, with the
    /// empirical CDF taken right-continuous (so a law against itself gives 0).
    pub fn ks_distance(&self, theory: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        let mut worst = 0.0f64;
        for (i, &x) in self.sorted.iter().enumerate() {
            worst = worst.max((theory(x) - (i + 1) as f64 / n).abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_sorted() {
        let a = sample_spectrum(50, 42).unwrap();
        let b = sample_spectrum(50, 42).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert!(a.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let c = sample_spectrum(50, 43).unwrap();
        assert_ne!(a.eigenvalues, c.eigenvalues);
    }

    #[test]
    fn n_one_is_gaussian_with_variance_quarter() {
        // density proportional to e^{-2x^2}: variance 1/4
        let draws = 100_000;
        let mut sum2 = 0.0;
        for i in 0..draws {
            let s = sample_spectrum_indexed(1, 7, i).unwrap();
            sum2 += s.eigenvalues[0] * s.eigenvalues[0];
        }
        let var = sum2 / draws as f64;
        assert!((0.24..=0.26).contains(&var), "sample variance {var}");
    }

    #[test]
    fn second_moment_matches_semicircle() {
        // E[(1/n) sum lambda^2] = int x^2 (2/pi) sqrt(1-x^2) dx = 1/4 exactly
        let n = 400;
        let draws = 200;
        let mut acc = 0.0;
        for i in 0..draws {
            let s = sample_spectrum_indexed(n, 11, i).unwrap();
            acc += s.eigenvalues.iter().map(|l| l * l).sum::<f64>() / n as f64;
        }
        let mean = acc / draws as f64;
        assert!((0.24..=0.26).contains(&mean), "mean normalized trace {mean}");
    }

    #[test]
    fn scale_statistic_basics() {
        let s = SpectrumSample { n: 64, eigenvalues: vec![1.0, 0.5], seed: 0 };
        assert_eq!(scale_statistic(&s, 1, 2.0).unwrap(), 0.0);
        // linear in lambda_m
        let s2 = SpectrumSample { n: 64, eigenvalues: vec![1.1, 0.5], seed: 0 };
        let s3 = SpectrumSample { n: 64, eigenvalues: vec![1.2, 0.5], seed: 0 };
        let d1 = scale_statistic(&s2, 1, 2.0).unwrap();
        let d2 = scale_statistic(&s3, 1, 2.0).unwrap();
        assert!((d2 - 2.0 * d1).abs() < 1e-12);
        assert!(scale_statistic(&s, 3, 2.0).is_err());
    }

    #[test]
    fn ks_distance_edges() {
        let emp = EmpiricalLaw::new(vec![0.1, 0.4, 0.7]);
        // against itself (as a right-continuous step CDF) the distance is 0
        let same = emp.ks_distance(|x| emp.cdf(x));
        assert!(same <= f64::EPSILON);
        // disjoint supports: distance 1
        let far = emp.ks_distance(|x| if x < 10.0 { 0.0 } else { 1.0 });
        assert!((far - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ks_uniform_bound() {
        let n = 10_000;
        let mut rng = Stream::for_draw(99, 0);
        let vals: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let emp = EmpiricalLaw::new(vals);
        let ks = emp.ks_distance(|x| x.clamp(0.0, 1.0));
        assert!(ks <= 0.02, "KS against uniform = {ks}");
    }

    #[test]
    fn bulk_histogram_matches_semicircle() {
        let n = 400;
        let draws = 200;
        let bins = 50;
        let mut counts = vec![0usize; bins];
        let mut total = 0usize;
        for i in 0..draws {
            let s = sample_spectrum_indexed(n, 5, i).unwrap();
            for &l in &s.eigenvalues {
                let t = (l + 1.0) / 2.0 * bins as f64;
                if (0.0..bins as f64).contains(&t) {
                    counts[t as usize] += 1;
                }
                total += 1;
            }
        }
        let width = 2.0 / bins as f64;
        let mut worst = 0.0f64;
        for (b, &c) in counts.iter().enumerate() {
            let center = -1.0 + (b as f64 + 0.5) * width;
            let density = c as f64 / (total as f64 * width);
            let want = 2.0 / std::f64::consts::PI * (1.0 - center * center).max(0.0).sqrt();
            worst = worst.max((density - want).abs());
        }
        assert!(worst <= 0.02, "sup bin deviation {worst}");
    }
}
