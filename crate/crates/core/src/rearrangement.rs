//! Step functions on (0,1] and their decreasing rearrangements.
//!
//! Every function in the crate lives on the unit interval with Lebesgue
//! measure. A function is stored as a list of panels `(x_{i-1}, x_i]` with a
//! constant nonnegative value on each; the value at 0 is never queried.

use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total weight of a sample set.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A nonnegative step function on (0,1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadSteps("at least one panel is required".into()));
        }
        if breaks.len() != values.len() + 1 {
            return Err(Error::BadSteps(format!(
                "{} breaks for {} values",
                breaks.len(),
                values.len()
            )));
        }
        if breaks.iter().chain(values.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput("step breaks/values".into()));
        }
        if breaks[0] != 0.0 || breaks[breaks.len() - 1] != 1.0 {
            return Err(Error::BadSteps("breaks must start at 0 and end at 1".into()));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadSteps("breaks must be strictly increasing".into()));
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(Error::BadSteps("values must be nonnegative".into()));
        }
        Ok(Self { breaks, values })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![c])
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of panels.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Interior breakpoints `x_1 .. x_{n-1}`.
    pub fn interior_breaks(&self) -> &[f64] {
        &self.breaks[1..self.breaks.len() - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    /// Index of the panel `(x_{i-1}, x_i]` containing `t`; `t <= 0` maps to
    /// the first panel.
    pub fn panel_index(&self, t: f64) -> usize {
        // first i with breaks[i+1] >= t
        let inner = &self.breaks[1..];
        inner.partition_point(|&x| x < t).min(self.values.len() - 1)
    }

    /// Value of the panel containing `t`.
    pub fn evaluate_at(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::BadPoint(t));
        }
        Ok(self.values[self.panel_index(t)])
    }

    /// Value just to the right of `x`, i.e. the essential supremum on `(x, 1]`
    /// for nonincreasing data. Zero for `x >= 1`.
    pub fn value_right_of(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return 0.0;
        }
        let idx = self.breaks[1..].partition_point(|&b| b <= x);
        self.values[idx.min(self.values.len() - 1)]
    }

    /// Exact `∫_a^b f^p(s) ds`.
    pub fn power_integral(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a > b {
            return Err(Error::BadInterval { a, b });
        }
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::BadExponent(format!("power p = {p} must be positive")));
        }
        let mut acc = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            let lo = self.breaks[i].max(a);
            let hi = self.breaks[i + 1].min(b);
            if hi > lo && v > 0.0 {
                acc += v.powf(p) * (hi - lo);
            }
        }
        Ok(acc)
    }

    /// `λ f` for `λ >= 0`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| v * lambda.abs()).collect(),
        }
    }

    /// Decreasing rearrangement by sorting panels by value.
    pub fn rearranged(&self) -> StepRearrangement {
        if self.is_nonincreasing() {
            return StepRearrangement(self.clone());
        }
        let samples: Vec<(f64, f64)> = self
            .values
            .iter()
            .zip(self.breaks.windows(2))
            .map(|(&v, w)| (v, w[1] - w[0]))
            .collect();
        layout_sorted(&samples)
    }

    /// Merge adjacent panels with equal values.
    pub fn compacted(&self) -> Self {
        let mut breaks = vec![0.0];
        let mut values: Vec<f64> = Vec::with_capacity(self.values.len());
        for (i, &v) in self.values.iter().enumerate() {
            if values.last() == Some(&v) {
                *breaks.last_mut().unwrap() = self.breaks[i + 1];
            } else {
                values.push(v);
                breaks.push(self.breaks[i + 1]);
            }
        }
        Self { breaks, values }
    }
}

/// A nonincreasing nonnegative step function on (0,1]: the discrete stand-in
/// for a decreasing rearrangement `f_*`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRearrangement(StepFunction);

impl Deref for StepRearrangement {
    type Target = StepFunction;

    fn deref(&self) -> &StepFunction {
        &self.0
    }
}

impl StepRearrangement {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let f = StepFunction::new(breaks, values)?;
        if !f.is_nonincreasing() {
            return Err(Error::NotMonotone);
        }
        Ok(Self(f))
    }

    pub fn zero() -> Self {
        Self(StepFunction::constant(0.0).expect("valid"))
    }

    pub fn constant(c: f64) -> Result<Self> {
        Ok(Self(StepFunction::constant(c)?))
    }

    /// `χ_(0,a)` for `0 < a <= 1`.
    pub fn indicator(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::BadModel(format!("indicator length {a} outside (0,1]")));
        }
        if a == 1.0 {
            Self::constant(1.0)
        } else {
            Self::new(vec![0.0, a, 1.0], vec![1.0, 0.0])
        }
    }

    pub fn as_step(&self) -> &StepFunction {
        &self.0
    }

    pub fn into_step(self) -> StepFunction {
        self.0
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self(self.0.scaled(lambda))
    }

    /// `ess sup f_* = v_1`.
    pub fn sup(&self) -> f64 {
        self.values()[0]
    }

    /// Measure of the support `{f_* > 0}`.
    pub fn support_length(&self) -> f64 {
        let k = self.values().partition_point(|&v| v > 0.0);
        self.breaks()[k]
    }

    /// `f_* χ_(0,x]`, which is already nonincreasing.
    pub fn head(&self, x: f64) -> Self {
        if x >= 1.0 {
            return self.clone();
        }
        if x <= 0.0 {
            return Self::zero();
        }
        let idx = self.panel_index(x);
        let mut breaks: Vec<f64> = self.breaks()[..=idx].to_vec();
        let mut values: Vec<f64> = self.values()[..=idx].to_vec();
        breaks.push(x);
        if x < 1.0 {
            breaks.push(1.0);
            values.push(0.0);
        }
        Self(StepFunction { breaks, values }.compacted())
    }

    /// Decreasing rearrangement of `f_* χ_(x,1]`: the tail shifted to the origin.
    pub fn tail(&self, x: f64) -> Self {
        if x <= 0.0 {
            return self.clone();
        }
        if x >= 1.0 {
            return Self::zero();
        }
        let start = self.breaks()[1..].partition_point(|&b| b <= x);
        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        for i in start..self.len() {
            let hi = self.breaks()[i + 1] - x;
            if hi > *breaks.last().unwrap() {
                breaks.push(hi);
                values.push(self.values()[i]);
            }
        }
        let last = *breaks.last().unwrap();
        if last < 1.0 {
            breaks.push(1.0);
            values.push(0.0);
        } else {
            *breaks.last_mut().unwrap() = 1.0;
        }
        Self(StepFunction { breaks, values }.compacted())
    }

    /// `(f_* - c)_+`.
    pub fn excess_over(&self, c: f64) -> Self {
        let values = self.values().iter().map(|&v| (v - c).max(0.0)).collect();
        Self(StepFunction { breaks: self.breaks().to_vec(), values }.compacted())
    }

    /// `min(f_*, c)`.
    pub fn capped_at(&self, c: f64) -> Self {
        let values = self.values().iter().map(|&v| v.min(c)).collect();
        Self(StepFunction { breaks: self.breaks().to_vec(), values }.compacted())
    }

    /// `∫_0^1 f_* g_*` for two rearrangements.
    pub fn pairing(&self, other: &StepRearrangement) -> f64 {
        let (a, b) = (self.as_step(), other.as_step());
        let (mut i, mut j) = (0usize, 0usize);
        let mut lo = 0.0;
        let mut acc = 0.0;
        while i < a.len() && j < b.len() {
            let hi = a.breaks()[i + 1].min(b.breaks()[j + 1]);
            acc += a.values()[i] * b.values()[j] * (hi - lo);
            lo = hi;
            if a.breaks()[i + 1] <= hi {
                i += 1;
            }
            if b.breaks()[j + 1] <= hi {
                j += 1;
            }
        }
        acc
    }
}

/// Exact prefix and suffix tables for `∫ f^p` over a step function.
///
/// `head(t) = ∫_0^t f^p` and `tail(t) = ∫_t^1 f^p` are both O(log n) and are
/// accumulated from their own end so that neither suffers cancellation.
#[derive(Debug, Clone)]
pub struct PowerPrefix<'a> {
    f: &'a StepFunction,
    pow_values: Vec<f64>,
    prefix: Vec<f64>,
    suffix: Vec<f64>,
}

impl<'a> PowerPrefix<'a> {
    pub fn new(f: &'a StepFunction, p: f64) -> Self {
        let pow_values: Vec<f64> = f
            .values()
            .iter()
            .map(|&v| if v == 0.0 { 0.0 } else { v.powf(p) })
            .collect();
        let n = pow_values.len();
        let widths: Vec<f64> = f.breaks().windows(2).map(|w| w[1] - w[0]).collect();
        let mut prefix = vec![0.0; n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] + pow_values[i] * widths[i];
        }
        let mut suffix = vec![0.0; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] + pow_values[i] * widths[i];
        }
        Self { f, pow_values, prefix, suffix }
    }

    pub fn function(&self) -> &StepFunction {
        self.f
    }

    pub fn total(&self) -> f64 {
        self.prefix[self.pow_values.len()]
    }

    /// `∫_0^t f^p`.
    pub fn head(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return self.total();
        }
        let i = self.f.panel_index(t);
        self.prefix[i] + self.pow_values[i] * (t - self.f.breaks()[i])
    }

    /// `∫_t^1 f^p`.
    pub fn tail(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.suffix[0];
        }
        if t >= 1.0 {
            return 0.0;
        }
        let i = self.f.panel_index(t);
        self.suffix[i + 1] + self.pow_values[i] * (self.f.breaks()[i + 1] - t)
    }

    /// `∫_a^b f^p` for `a <= b`.
    pub fn between(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        if a <= 0.0 {
            return self.head(b);
        }
        if b >= 1.0 {
            return self.tail(a);
        }
        // pick the better-conditioned route
        if b <= 0.5 {
            (self.head(b) - self.head(a)).max(0.0)
        } else {
            (self.tail(a) - self.tail(b)).max(0.0)
        }
    }

    /// `f^p` on panel `i`.
    pub fn pow_value(&self, i: usize) -> f64 {
        self.pow_values[i]
    }

    /// `∫_0^{x_i} f^p`.
    pub fn prefix_at_break(&self, i: usize) -> f64 {
        self.prefix[i]
    }

    /// `∫_{x_i}^1 f^p`.
    pub fn suffix_at_break(&self, i: usize) -> f64 {
        self.suffix[i]
    }
}

fn check_samples(samples: &[(f64, f64)]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::BadWeights { sum: 0.0 });
    }
    for &(v, w) in samples {
        if !v.is_finite() || !w.is_finite() {
            return Err(Error::NonFiniteInput(format!("sample ({v}, {w})")));
        }
        if v < 0.0 {
            return Err(Error::BadModel(format!("negative sample value {v}")));
        }
        if w <= 0.0 {
            let sum = samples.iter().map(|s| s.1).sum();
            return Err(Error::BadWeights { sum });
        }
    }
    let sum: f64 = samples.iter().map(|s| s.1).sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::BadWeights { sum });
    }
    Ok(())
}

/// Lays out weighted values in nonincreasing order with breaks at cumulative
/// weights. Panels whose cumulative break does not advance are dropped.
fn layout_sorted(samples: &[(f64, f64)]) -> StepRearrangement {
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| samples[j].0.total_cmp(&samples[i].0).then(i.cmp(&j)));
    let mut breaks = vec![0.0];
    let mut values = Vec::with_capacity(samples.len());
    let mut cum = 0.0;
    for &k in &order {
        cum += samples[k].1;
        let x = cum.min(1.0);
        if x > *breaks.last().unwrap() {
            breaks.push(x);
            values.push(samples[k].0);
        }
    }
    if values.is_empty() {
        return StepRearrangement::zero();
    }
    *breaks.last_mut().unwrap() = 1.0;
    StepRearrangement(StepFunction { breaks, values })
}

/// Decreasing rearrangement of a weighted sample set `(value, weight)`,
/// weights summing to one.
pub fn rearrange_from_samples(samples: &[(f64, f64)]) -> Result<StepRearrangement> {
    check_samples(samples)?;
    Ok(layout_sorted(samples))
}

/// Parametric test functions used by the harness and the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionModel {
    /// `t^{-gamma} (1 - Log t)^{-delta}`.
    PowerLog { gamma: f64, delta: f64 },
    /// `χ_(0,a)`.
    Char { a: f64 },
    ExplicitSteps { breaks: Vec<f64>, values: Vec<f64> },
    /// Weighted values `(value, weight)`.
    Samples(Vec<(f64, f64)>),
}

impl FunctionModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FunctionModel::PowerLog { gamma, delta } => {
                if !gamma.is_finite() || !delta.is_finite() {
                    return Err(Error::BadModel("non-finite power-log exponents".into()));
                }
                if !(0.0..1.0).contains(&gamma) {
                    return Err(Error::BadModel(format!("gamma = {gamma} must lie in [0, 1)")));
                }
                Ok(())
            }
            FunctionModel::Char { a } => {
                if a > 0.0 && a <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::BadModel(format!("indicator length {a} outside (0,1]")))
                }
            }
            FunctionModel::ExplicitSteps { .. } | FunctionModel::Samples(_) => Ok(()),
        }
    }

    /// Pointwise value of a power-log model, evaluated through `u = 1 - Log t`.
    fn power_log_at_u(gamma: f64, delta: f64, u: f64) -> f64 {
        (gamma * (u - 1.0) - delta * u.ln()).exp()
    }
}

/// Breaks `0 < e^{1-u_max} < ... < 1` of a uniform grid in `u = 1 - Log t`,
/// returned in increasing order of `t` together with the leading zero.
pub fn log_grid_breaks(u_max: f64, panels: usize) -> Vec<f64> {
    let h = (u_max - 1.0) / panels as f64;
    let mut breaks = Vec::with_capacity(panels + 2);
    breaks.push(0.0);
    for j in (0..=panels).rev() {
        let u = 1.0 + h * j as f64;
        breaks.push((1.0 - u).exp());
    }
    *breaks.last_mut().unwrap() = 1.0;
    breaks
}

/// Discretizes a model on the logarithmic grid `t_j = e^{1-u_j}`.
///
/// Each panel carries the model value at its geometric midpoint; the panel
/// `(0, e^{1-u_max}]` uses the point half a grid step further out. The result
/// is the decreasing rearrangement of these steps.
pub fn discretize_model(model: &FunctionModel, u_max: f64, panels: usize) -> Result<StepRearrangement> {
    if !(u_max > 1.0) || !u_max.is_finite() {
        return Err(Error::BadModel(format!("u_max = {u_max} must exceed 1")));
    }
    if panels < 2 {
        return Err(Error::BadModel(format!("panels = {panels} must be at least 2")));
    }
    model.validate()?;
    let h = (u_max - 1.0) / panels as f64;
    match model {
        FunctionModel::PowerLog { gamma, delta } => {
            let breaks = log_grid_breaks(u_max, panels);
            // panel k (0-based from the origin) spans u in [u_max - k h, u_max - (k-1) h]
            let values: Vec<f64> = (0..=panels)
                .map(|k| {
                    let u_mid = u_max + 0.5 * h - k as f64 * h;
                    FunctionModel::power_log_at_u(*gamma, *delta, u_mid)
                })
                .collect();
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::BadModel("model overflows on the grid".into()));
            }
            Ok(StepFunction::new(breaks, values)?.rearranged())
        }
        FunctionModel::Char { a } => {
            let mut breaks = log_grid_breaks(u_max, panels);
            let pos = breaks.partition_point(|&x| x < *a);
            if breaks[pos] != *a {
                breaks.insert(pos, *a);
            }
            let values = breaks[1..].iter().map(|&x| if x <= *a { 1.0 } else { 0.0 }).collect();
            StepRearrangement::new(breaks, values)
        }
        FunctionModel::ExplicitSteps { breaks, values } => {
            Ok(StepFunction::new(breaks.clone(), values.clone())?.rearranged())
        }
        FunctionModel::Samples(samples) => rearrange_from_samples(samples),
    }
}

/// JSON description of a function, as accepted on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Constant { c: f64 },
    PowerLog { gamma: f64, delta: f64 },
    Char { a: f64 },
    Steps { breaks: Vec<f64>, values: Vec<f64> },
    Samples { path: String },
}

impl FunctionSpec {
    /// Resolves the spec into a model; sample paths are relative to `base`.
    pub fn to_model(&self, base: Option<&Path>) -> Result<FunctionModel> {
        Ok(match self {
            FunctionSpec::Constant { c } => FunctionModel::ExplicitSteps { breaks: vec![0.0, 1.0], values: vec![*c] },
            FunctionSpec::PowerLog { gamma, delta } => FunctionModel::PowerLog { gamma: *gamma, delta: *delta },
            FunctionSpec::Char { a } => FunctionModel::Char { a: *a },
            FunctionSpec::Steps { breaks, values } => FunctionModel::ExplicitSteps {
                breaks: breaks.clone(),
                values: values.clone(),
            },
            FunctionSpec::Samples { path } => {
                let p = match base {
                    Some(b) => b.join(path),
                    None => Path::new(path).to_path_buf(),
                };
                FunctionModel::Samples(read_samples_csv(&p)?)
            }
        })
    }
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    value: f64,
    weight: f64,
}

/// Reads a `value,weight` CSV file.
pub fn read_samples_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for row in rdr.deserialize::<SampleRow>() {
        let row = row.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        out.push((row.value, row.weight));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn sorts_three_equal_weight_samples() {
        let third = 1.0 / 3.0;
        let f = rearrange_from_samples(&[(3.0, third), (1.0, third), (2.0, third)]).unwrap();
        assert_eq!(f.values(), &[3.0, 2.0, 1.0]);
        assert!(close(f.breaks()[1], third, 1e-15));
        assert!(close(f.breaks()[2], 2.0 * third, 1e-15));
        assert_eq!(f.breaks()[3], 1.0);
    }

    #[test]
    fn single_sample_is_constant() {
        let f = rearrange_from_samples(&[(2.5, 1.0)]).unwrap();
        assert_eq!(f.values(), &[2.5]);
        assert_eq!(f.breaks(), &[0.0, 1.0]);
    }

    #[test]
    fn indicator_from_samples_has_half_mass() {
        let f = rearrange_from_samples(&[(1.0, 0.25), (1.0, 0.25), (0.0, 0.5)]).unwrap();
        assert_eq!(f.values(), &[1.0, 1.0, 0.0]);
        assert!(close(f.power_integral(1.0, 0.0, 1.0).unwrap(), 0.5, 1e-15));
    }

    #[test]
    fn sample_errors() {
        assert!(matches!(
            rearrange_from_samples(&[(f64::NAN, 1.0)]),
            Err(Error::NonFiniteInput(_))
        ));
        assert!(matches!(
            rearrange_from_samples(&[(1.0, 0.5), (1.0, 0.4)]),
            Err(Error::BadWeights { .. })
        ));
        assert!(matches!(
            rearrange_from_samples(&[(1.0, f64::INFINITY)]),
            Err(Error::NonFiniteInput(_))
        ));
    }

    #[test]
    fn power_integral_examples() {
        let chi = StepRearrangement::indicator(0.25).unwrap();
        assert_eq!(chi.power_integral(2.0, 0.0, 1.0).unwrap(), 0.25);
        let one = StepFunction::constant(1.0).unwrap();
        assert!(close(one.power_integral(7.0, 0.2, 0.5).unwrap(), 0.3, 1e-15));
        let halves = StepFunction::new(vec![0.0, 0.5, 1.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(halves.power_integral(2.0, 0.0, 1.0).unwrap(), 2.5);
        assert!(matches!(one.power_integral(1.0, 0.6, 0.5), Err(Error::BadInterval { .. })));
        assert!(matches!(one.power_integral(1.0, -0.1, 0.5), Err(Error::BadInterval { .. })));
    }

    #[test]
    fn evaluate_uses_half_open_panels() {
        let chi = StepRearrangement::indicator(0.25).unwrap();
        assert_eq!(chi.evaluate_at(0.2).unwrap(), 1.0);
        assert_eq!(chi.evaluate_at(0.25).unwrap(), 1.0);
        assert_eq!(chi.evaluate_at(0.3).unwrap(), 0.0);
        assert_eq!(chi.evaluate_at(1.0).unwrap(), 0.0);
        assert!(matches!(chi.evaluate_at(0.0), Err(Error::BadPoint(_))));
        assert!(matches!(chi.evaluate_at(1.5), Err(Error::BadPoint(_))));
    }

    #[test]
    fn step_validation() {
        assert!(StepFunction::new(vec![0.0, 1.0], vec![]).is_err());
        assert!(StepFunction::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(StepFunction::new(vec![0.1, 1.0], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![-1.0]).is_err());
        assert!(matches!(
            StepRearrangement::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0]),
            Err(Error::NotMonotone)
        ));
    }

    #[test]
    fn discretize_char_inserts_break() {
        let f = discretize_model(&FunctionModel::Char { a: 0.25 }, 35.0, 600).unwrap();
        assert!(f.breaks().contains(&0.25));
        assert!(close(f.power_integral(1.0, 0.0, 1.0).unwrap(), 0.25, 1e-15));
        assert_eq!(f.evaluate_at(0.25).unwrap(), 1.0);
        assert_eq!(f.evaluate_at(0.2500001).unwrap(), 0.0);
    }

    #[test]
    fn discretize_constant_power_log() {
        let f = discretize_model(&FunctionModel::PowerLog { gamma: 0.0, delta: 0.0 }, 35.0, 600).unwrap();
        assert!(f.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn discretize_power_integral_matches_closed_form() {
        let f = discretize_model(&FunctionModel::PowerLog { gamma: 0.25, delta: 0.0 }, 35.0, 600).unwrap();
        let integral = f.power_integral(1.0, 0.0, 1.0).unwrap();
        assert!((integral - 4.0 / 3.0).abs() <= 1e-3 * 4.0 / 3.0, "{integral}");
        assert!(f.is_nonincreasing());
    }

    #[test]
    fn discretize_rejects_bad_models() {
        assert!(discretize_model(&FunctionModel::PowerLog { gamma: 1.0, delta: 0.0 }, 35.0, 600).is_err());
        assert!(discretize_model(&FunctionModel::Char { a: 0.0 }, 35.0, 600).is_err());
        assert!(discretize_model(&FunctionModel::Char { a: 0.5 }, 1.0, 600).is_err());
        assert!(discretize_model(&FunctionModel::Char { a: 0.5 }, 35.0, 1).is_err());
    }

    #[test]
    fn increasing_model_is_rearranged() {
        // (1 - Log t)^{-1} increases in t; its rearrangement is a sort of the panels.
        let f = discretize_model(&FunctionModel::PowerLog { gamma: 0.0, delta: 1.0 }, 35.0, 100).unwrap();
        assert!(f.is_nonincreasing());
        // top panel sampled at u = 1 + h/2 with h = 0.34
        assert!(close(f.sup(), 1.0 / 1.17, 1e-12));
    }

    #[test]
    fn head_and_tail_split_mass() {
        let f = StepRearrangement::new(vec![0.0, 0.2, 0.7, 1.0], vec![3.0, 2.0, 1.0]).unwrap();
        for &x in &[0.1, 0.2, 0.5, 0.9] {
            let h = f.head(x).power_integral(2.0, 0.0, 1.0).unwrap();
            let t = f.tail(x).power_integral(2.0, 0.0, 1.0).unwrap();
            let total = f.power_integral(2.0, 0.0, 1.0).unwrap();
            assert!(close(h + t, total, 1e-14));
            assert!(close(h, f.power_integral(2.0, 0.0, x).unwrap(), 1e-14));
        }
        let t = f.tail(0.5);
        assert_eq!(t.values(), &[2.0, 1.0, 0.0]);
        assert!(close(t.breaks()[1], 0.2, 1e-14));
    }

    #[test]
    fn prefix_tables_match_direct_integrals() {
        let f = StepFunction::new(vec![0.0, 0.1, 0.4, 1.0], vec![5.0, 2.0, 0.5]).unwrap();
        let pp = PowerPrefix::new(&f, 1.5);
        for &t in &[0.0, 0.05, 0.1, 0.3, 0.4, 0.77, 1.0] {
            assert!(close(pp.head(t), f.power_integral(1.5, 0.0, t).unwrap(), 1e-14));
            assert!(close(pp.tail(t), f.power_integral(1.5, t, 1.0).unwrap(), 1e-14));
        }
        assert!(close(pp.between(0.05, 0.77), f.power_integral(1.5, 0.05, 0.77).unwrap(), 1e-14));
    }

    #[test]
    fn pairing_of_indicators() {
        let a = StepRearrangement::indicator(0.25).unwrap();
        let b = StepRearrangement::indicator(0.5).unwrap();
        assert!(close(a.pairing(&b), 0.25, 1e-15));
    }

    #[test]
    fn function_spec_json() {
        let spec: FunctionSpec = serde_json::from_str(r#"{"kind":"char","a":0.25}"#).unwrap();
        assert_eq!(spec, FunctionSpec::Char { a: 0.25 });
        let spec: FunctionSpec = serde_json::from_str(r#"{"kind":"power_log","gamma":0.5,"delta":1}"#).unwrap();
        assert_eq!(spec.to_model(None).unwrap(), FunctionModel::PowerLog { gamma: 0.5, delta: 1.0 });
    }
}
