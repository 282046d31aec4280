//! Tabulated monotone functions with linear or log-linear interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// How a [`MonotoneTable`] interpolates between its knots.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    #[default]
    Linear,
    /// Linear in `(ln x, ln y)`; suited to tables spanning many decades.
    LogLinear,
}

#[derive(Deserialize)]
struct RawTable {
    abscissae: Vec<f64>,
    values: Vec<f64>,
    #[serde(default)]
    interpolation: Interpolation,
}

/// Knots `(x_i, y_i)` with strictly increasing `x` and non-decreasing
/// positive `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct MonotoneTable {
    abscissae: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
}

impl TryFrom<RawTable> for MonotoneTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        MonotoneTable::with_interpolation(raw.abscissae, raw.values, raw.interpolation)
    }
}

impl MonotoneTable {
    pub fn new(abscissae: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::with_interpolation(abscissae, values, Interpolation::Linear)
    }

    pub fn with_interpolation(
        abscissae: Vec<f64>,
        values: Vec<f64>,
        interpolation: Interpolation,
    ) -> Result<Self> {
        if abscissae.len() != values.len() {
            return Err(domain(format!(
                "table has {} abscissae but {} values",
                abscissae.len(),
                values.len()
            )));
        }
        if abscissae.len() < 2 {
            return Err(domain("table needs at least two knots"));
        }
        if abscissae.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(domain("table contains non-finite entries"));
        }
        if abscissae.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("table abscissae must be strictly increasing"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(domain("table values must be non-decreasing"));
        }
        if values[0] <= 0.0 {
            return Err(domain("table values must be positive"));
        }
        if interpolation == Interpolation::LogLinear && abscissae[0] <= 0.0 {
            return Err(domain("log-linear interpolation needs positive abscissae"));
        }
        Ok(Self {
            abscissae,
            values,
            interpolation,
        })
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn start(&self) -> f64 {
        self.abscissae[0]
    }

    pub fn end(&self) -> f64 {
        *self.abscissae.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= self.start() && x <= self.end()) {
            return Err(domain(format!(
                "{x} outside table range [{}, {}]",
                self.start(),
                self.end()
            )));
        }
        let i = self.abscissae.partition_point(|&a| a <= x);
        if i >= self.abscissae.len() {
            return Ok(*self.values.last().unwrap());
        }
        let (x0, x1) = (self.abscissae[i - 1], self.abscissae[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        if x == x0 {
            return Ok(y0);
        }
        Ok(match self.interpolation {
            Interpolation::Linear => (y0 + (y1 - y0) * (x - x0) / (x1 - x0)).clamp(y0, y1),
            Interpolation::LogLinear => {
                let t = (x / x0).ln() / (x1 / x0).ln();
                (y0 * ((y1 / y0).ln() * t).exp()).clamp(y0, y1)
            }
        })
    }

    /// `sup{x : table(x) <= y}` computed segment-wise, so plateaus resolve
    /// to their right endpoint.
    pub fn right_inverse(&self, y: f64) -> Result<f64> {
        if !(y >= self.values[0]) {
            return Err(Error::Range(format!(
                "{y} below the table minimum {}",
                self.values[0]
            )));
        }
        let last = *self.values.last().unwrap();
        if y > last {
            return Err(Error::Range(format!(
                "{y} exceeds the table maximum {last}"
            )));
        }
        let i = self.values.partition_point(|&v| v <= y) - 1;
        if i + 1 == self.values.len() {
            return Ok(self.end());
        }
        let (x0, x1) = (self.abscissae[i], self.abscissae[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let r = match self.interpolation {
            Interpolation::Linear => x0 + (y - y0) / (y1 - y0) * (x1 - x0),
            Interpolation::LogLinear => {
                let t = (y / y0).ln() / (y1 / y0).ln();
                x0 * ((x1 / x0).ln() * t).exp()
            }
        };
        Ok(r.clamp(x0, x1))
    }

    /// Parse a two-column `abscissa,value` CSV; a non-numeric first row is
    /// treated as a header.
    pub fn from_csv_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let (xs, ys) = crate::io::read_two_columns(reader)?;
        Self::new(xs, ys)
    }
}
