//! `a:b:step` grids.

use crate::{LabError, LabResult};

pub const MAX_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub spec: String,
    pub points: Vec<f64>,
}

impl Grid {
    /// Inclusive grid `a, a + step, ..., b`. Points are rounded to 12
    /// decimals so that `0.1`-style steps land on exact decimal values.
    pub fn parse(spec: &str) -> LabResult<Self> {
        let bad = |why: &str| LabError::Args(format!("grid '{spec}': {why}"));
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected a:b:step"));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("'{s}' is not a number")));
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(a.is_finite() && b.is_finite() && step.is_finite()) {
            return Err(bad("values must be finite"));
        }
        if step <= 0.0 {
            return Err(bad("step must be positive"));
        }
        if b < a {
            return Err(bad("end lies before start"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        if count > MAX_POINTS {
            return Err(bad(&format!("more than {MAX_POINTS} points")));
        }
        let points = (0..count).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect();
        Ok(Grid { spec: spec.to_string(), points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_decimal_grid() {
        let g = Grid::parse("0.5:1:0.1").unwrap();
        assert_eq!(g.points, vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0]);
        assert_eq!(Grid::parse("0.25:0.25:0.01").unwrap().points, vec![0.25]);
        assert_eq!(Grid::parse("0:1:0.02").unwrap().points.len(), 51);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["0:1", "a:1:0.1", "0:1:0", "1:0:0.1", "0:1:-1", "0:1e9:1e-9"] {
            assert!(Grid::parse(s).is_err(), "{s}");
        }
    }
}
