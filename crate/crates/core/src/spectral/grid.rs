use crate::error::Error;
use crate::Result;

/// Uniform grid on `[a, b]` including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, n_points: usize) -> Result<Grid> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::invalid(format!("degenerate interval [{a}, {b}]")));
        }
        if n_points < 3 {
            return Err(Error::invalid(format!("a grid needs at least 3 points, got {n_points}")));
        }
        Ok(Grid { a, b, n_points })
    }

    /// Grid whose spacing is `h` rounded to divide `b − a` evenly.
    pub fn with_spacing(a: f64, b: f64, h: f64) -> Result<Grid> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid(format!("grid spacing must be positive, got {h}")));
        }
        let cells = ((b - a) / h).round();
        if !(cells >= 2.0) {
            return Err(Error::invalid(format!("interval [{a}, {b}] too short for spacing {h}")));
        }
        Grid::new(a, b, cells as usize + 1)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / (self.n_points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.b
        } else {
            self.a + i as f64 * self.spacing()
        }
    }

    /// Nodes strictly inside the interval (the Dirichlet unknowns).
    pub fn interior(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.n_points - 1).map(move |i| self.node(i))
    }

    pub fn interior_len(&self) -> usize {
        self.n_points - 2
    }
}
