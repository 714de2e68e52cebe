use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Measured against predicted values over a parameter grid.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DeformationReport {
    pub params: Vec<String>,
    pub measured: Vec<Complex64>,
    pub predicted: Vec<Complex64>,
    pub max_abs_residual: f64,
}

impl DeformationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, param: impl Into<String>, measured: Complex64, predicted: Complex64) {
        self.params.push(param.into());
        self.measured.push(measured);
        self.predicted.push(predicted);
        self.max_abs_residual = self.max_abs_residual.max((measured - predicted).norm());
    }

    pub fn push_real(&mut self, param: impl Into<String>, measured: f64, predicted: f64) {
        self.push(param, Complex64::new(measured, 0.0), Complex64::new(predicted, 0.0));
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn residuals(&self) -> impl Iterator<Item = f64> + '_ {
        self.measured.iter().zip(&self.predicted).map(|(m, p)| (m - p).norm())
    }

    /// Columns `param, measured_re, measured_im, predicted_re, predicted_im, abs_residual`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["param", "measured_re", "measured_im", "predicted_re", "predicted_im", "abs_residual"])
            .map_err(csv_err)?;
        for ((p, m), q) in self.params.iter().zip(&self.measured).zip(&self.predicted) {
            w.write_record([
                p.clone(),
                format!("{:e}", m.re),
                format!("{:e}", m.im),
                format!("{:e}", q.re),
                format!("{:e}", q.im),
                format!("{:e}", (m - q).norm()),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = DeformationReport::new();
        r.push_real("t=0", 1.0, 1.0);
        r.push("t=1", Complex64::new(0.5, 0.1), Complex64::new(0.5, 0.0));
        assert!((r.max_abs_residual - 0.1).abs() < 1e-15);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "param,measured_re,measured_im,predicted_re,predicted_im,abs_residual");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("t=0,1e0,0e0,1e0,0e0,0e0"));
    }
}
