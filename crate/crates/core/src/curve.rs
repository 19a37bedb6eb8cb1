use serde::Serialize;

use crate::error::{Error, Result};

/// Status of a boundary node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeFlag {
    Solved,
    /// The root lies beyond the search cap; the node is stored as absent.
    Capped,
    /// The root collided with a bracket edge; the edge value is stored.
    Edge,
    /// The value is fixed by a limit (absent plateau, or zero at the horizon).
    Limit,
}

/// A free boundary in (t, λ) coordinates on an ascending time grid.
///
/// Absent values (the boundary sits at +∞) are stored as `f64::INFINITY`.
/// Between two positive values the curve is linear in ln λ; an interval touching
/// a zero value is linear in λ; an interval touching an absent value is absent.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub flags: Vec<NodeFlag>,
}

const TIME_SLACK: f64 = 1e-9;
/// Times this close to a node (relative) evaluate to the node value.
const NODE_SNAP: f64 = 1e-13;

impl BoundaryCurve {
    pub fn new(times: Vec<f64>, values: Vec<f64>, flags: Vec<NodeFlag>) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() || times.len() != flags.len() {
            return Err(Error::Input("boundary curve needs matching times/values/flags, length >= 2".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Input("boundary curve times must be strictly ascending".into()));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::Input("boundary curve values must be non-negative or +inf".into()));
        }
        Ok(BoundaryCurve { times, values, flags })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn covers(&self, a: f64, b: f64) -> bool {
        self.start() <= a + TIME_SLACK && self.end() >= b - TIME_SLACK
    }

    /// Index i with times[i] <= t < times[i+1], clamped to the last interval.
    fn interval(&self, t: f64) -> usize {
        let k = self.times.partition_point(|&s| s <= t);
        k.saturating_sub(1).min(self.times.len() - 2)
    }

    /// Value at t; `f64::INFINITY` when absent.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        if !(t >= self.start() - TIME_SLACK && t <= self.end() + TIME_SLACK) {
            return Err(Error::Input(format!(
                "time {t} outside boundary curve range [{}, {}]",
                self.start(),
                self.end()
            )));
        }
        Ok(self.eval_in_range(t))
    }

    pub(crate) fn eval_in_range(&self, t: f64) -> f64 {
        let t = t.clamp(self.start(), self.end());
        let i = self.interval(t);
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let (a, b) = (self.values[i], self.values[i + 1]);
        let snap = NODE_SNAP * t.abs().max(1.0);
        if (t - t0).abs() <= snap {
            return a;
        }
        if (t - t1).abs() <= snap {
            return b;
        }
        if a.is_infinite() || b.is_infinite() {
            return f64::INFINITY;
        }
        let w = (t - t0) / (t1 - t0);
        if a > 0.0 && b > 0.0 {
            (a.ln() + w * (b.ln() - a.ln())).exp()
        } else {
            a + w * (b - a)
        }
    }

    pub fn is_present(&self, t: f64) -> Result<bool> {
        Ok(self.value_at(t)?.is_finite())
    }

    /// The curve with every value replaced by `f(value)`, e.g. to build log-curves.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.values.iter().map(|&v| f(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> BoundaryCurve {
        BoundaryCurve::new(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![1.0, 4.0, f64::INFINITY, f64::INFINITY],
            vec![NodeFlag::Solved, NodeFlag::Solved, NodeFlag::Limit, NodeFlag::Limit],
        )
        .unwrap()
    }

    #[test]
    fn log_linear_between_present_values() {
        let c = curve();
        assert!((c.value_at(0.5).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(c.value_at(1.0).unwrap(), 4.0);
    }

    #[test]
    fn absent_propagates() {
        let c = curve();
        assert!(c.value_at(1.5).unwrap().is_infinite());
        assert!(!c.is_present(2.5).unwrap());
    }

    #[test]
    fn zero_endpoint_is_linear() {
        let c = BoundaryCurve::new(vec![0.0, 1.0], vec![0.5, 0.0], vec![NodeFlag::Solved, NodeFlag::Limit]).unwrap();
        assert!((c.value_at(0.5).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_is_error() {
        assert!(curve().value_at(3.5).is_err());
        assert!(curve().value_at(-0.1).is_err());
    }

    #[test]
    fn rejects_unsorted() {
        assert!(BoundaryCurve::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![NodeFlag::Solved; 2]).is_err());
    }
}
