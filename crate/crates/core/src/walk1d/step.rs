use serde::{Deserialize, Serialize};

use crate::noise::unit_f64;
use crate::{Error, Result};

/// Law of one lattice step `ξ` (integer valued).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepDistribution {
    /// `P(0) = 1/2`, `P(±1) = 1/4`.
    Lazy,
    /// `P(±1) = p/2`, `P(0) = 1 - p`.
    TwoPoint { p: f64 },
    /// Arbitrary finite law on the integers.
    Table { values: Vec<i64>, probs: Vec<f64> },
}

impl Default for StepDistribution {
    fn default() -> Self {
        Self::Lazy
    }
}

impl StepDistribution {
    pub fn table(&self) -> (Vec<i64>, Vec<f64>) {
        match self {
            Self::Lazy => (vec![-1, 0, 1], vec![0.25, 0.5, 0.25]),
            Self::TwoPoint { p } => (vec![-1, 0, 1], vec![p / 2.0, 1.0 - p, p / 2.0]),
            Self::Table { values, probs } => (values.clone(), probs.clone()),
        }
    }

    /// Checks the law is a probability, centred and aperiodic, and returns
    /// the sampler.
    pub fn sampler(&self) -> Result<StepSampler> {
        let (values, probs) = self.table();
        if values.is_empty() || values.len() != probs.len() {
            return Err(Error::InvalidStep("values and probs must be nonempty and of equal length".into()));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidStep("probabilities must lie in [0, 1]".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidStep(format!("probabilities sum to {total}")));
        }
        let mean: f64 = values.iter().zip(&probs).map(|(&v, &p)| v as f64 * p).sum();
        if mean.abs() > 1e-12 {
            return Err(Error::InvalidStep(format!("mean {mean} is not 0")));
        }
        let support: Vec<i64> = values.iter().zip(&probs).filter(|(_, &p)| p > 0.0).map(|(&v, _)| v).collect();
        let period = support.iter().fold(0i64, |g, &v| gcd(g, v - support[0]));
        if period != 1 {
            return Err(Error::InvalidStep(format!("step law is periodic (support shifts have gcd {period})")));
        }
        let variance: f64 = values.iter().zip(&probs).map(|(&v, &p)| (v * v) as f64 * p).sum();
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cum.push(acc);
        }
        Ok(StepSampler { values, probs, cum, variance })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Validated step law.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSampler {
    values: Vec<i64>,
    probs: Vec<f64>,
    cum: Vec<f64>,
    variance: f64,
}

impl StepSampler {
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn max_jump(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// Step driven by a uniform word.
    #[inline]
    pub fn step(&self, word: u64) -> i64 {
        let u = unit_f64(word);
        for (k, &c) in self.cum.iter().enumerate() {
            if u < c {
                return self.values[k];
            }
        }
        *self.values.last().expect("nonempty")
    }
}

/// Parameters of a rescaled walk on `σ⁻¹η ℤ × η² ℤ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSpec {
    pub eta: f64,
    pub sigma2: f64,
    #[serde(default)]
    pub step: StepDistribution,
    pub horizon: f64,
    /// Closed interval outside of which particles are killed.
    #[serde(default)]
    pub kill: Option<[f64; 2]>,
}

impl WalkSpec {
    /// Spec with `sigma2` taken from the step law.
    pub fn new(eta: f64, step: StepDistribution, horizon: f64) -> Result<Self> {
        let sigma2 = step.sampler()?.variance();
        let spec = Self { eta, sigma2, step, horizon, kill: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_kill(mut self, lo: f64, hi: f64) -> Self {
        self.kill = Some([lo, hi]);
        self
    }

    pub fn validate(&self) -> Result<StepSampler> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::param("eta", "must lie in (0, 1]"));
        }
        if !(self.sigma2 > 0.0) {
            return Err(Error::param("sigma2", "must be positive"));
        }
        let sampler = self.step.sampler()?;
        if (sampler.variance() - self.sigma2).abs() > 1e-9 * self.sigma2.max(1.0) {
            return Err(Error::param(
                "sigma2",
                format!("{} does not match the step variance {}", self.sigma2, sampler.variance()),
            ));
        }
        if !self.horizon.is_finite() {
            return Err(Error::param("horizon", "must be finite"));
        }
        if let Some([lo, hi]) = self.kill {
            if !(lo < hi) {
                return Err(Error::param("kill", "interval must satisfy lo < hi"));
            }
        }
        Ok(sampler)
    }

    /// Space step `σ⁻¹η`.
    pub fn space_step(&self) -> f64 {
        self.eta / self.sigma2.sqrt()
    }

    /// Time step `η²`.
    pub fn time_step(&self) -> f64 {
        self.eta * self.eta
    }

    /// Lattice site of a position, if it is one.
    pub fn site(&self, x: f64) -> Option<i64> {
        on_grid(x, self.space_step())
    }

    /// Time index of a lattice time, if it is one.
    pub fn time_index(&self, t: f64) -> Option<i64> {
        on_grid(t, self.time_step())
    }

    /// Smallest time index whose time is `>= t`.
    pub fn ceil_index(&self, t: f64) -> i64 {
        (t / self.time_step() - 1e-9).ceil() as i64
    }

    /// Largest time index whose time is `<= t`.
    pub fn floor_index(&self, t: f64) -> i64 {
        (t / self.time_step() + 1e-9).floor() as i64
    }

    /// Sites `lo..=hi` of the kill interval.
    pub fn kill_sites(&self) -> Option<(i64, i64)> {
        self.kill.map(|[a, b]| {
            let h = self.space_step();
            ((a / h - 1e-9).ceil() as i64, (b / h + 1e-9).floor() as i64)
        })
    }
}

fn on_grid(x: f64, h: f64) -> Option<i64> {
    let r = x / h;
    let k = r.round();
    ((r - k).abs() <= 1e-6).then_some(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseField;

    #[test]
    fn plain_coin_flip_is_rejected_as_periodic() {
        let s = StepDistribution::TwoPoint { p: 1.0 };
        assert!(matches!(s.sampler(), Err(Error::InvalidStep(_))));
        let t = StepDistribution::Table { values: vec![-1, 1], probs: vec![0.5, 0.5] };
        assert!(t.sampler().is_err());
        let three = StepDistribution::Table { values: vec![-2, 1], probs: vec![1.0 / 3.0, 2.0 / 3.0] };
        assert!(three.sampler().is_err());
        let ok = StepDistribution::Table { values: vec![-1, 0, 2], probs: vec![0.4, 0.4, 0.2] };
        assert!((ok.sampler().unwrap().variance() - 1.2).abs() < 1e-12);
    }

    #[test]
    fn uncentred_law_is_rejected() {
        let t = StepDistribution::Table { values: vec![0, 1], probs: vec![0.5, 0.5] };
        assert!(t.sampler().is_err());
    }

    #[test]
    fn lazy_law_frequencies() {
        let s = StepDistribution::Lazy.sampler().unwrap();
        assert_eq!(s.variance(), 0.5);
        let f = NoiseField::new(5, 0);
        let n = 100_000;
        let mut c = [0usize; 3];
        for k in 0..n {
            c[(s.step(f.word(0, k)) + 1) as usize] += 1;
        }
        for (i, p) in [0.25, 0.5, 0.25].iter().enumerate() {
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((c[i] as f64 / n as f64 - p).abs() < 4.0 * se);
        }
    }

    #[test]
    fn spec_checks_sigma2_and_lattice() {
        let mut spec = WalkSpec::new(0.5, StepDistribution::Lazy, 1.0).unwrap();
        assert!((spec.space_step() - 0.5 / 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(spec.time_index(0.75), Some(3));
        assert_eq!(spec.time_index(0.3), None);
        assert_eq!(spec.ceil_index(0.3), 2);
        assert_eq!(spec.floor_index(0.3), 1);
        spec.sigma2 = 1.0;
        assert!(spec.validate().is_err());
    }
}
