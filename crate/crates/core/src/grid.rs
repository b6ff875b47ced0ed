//! Dense time × country grids.
//!
//! Everything the models touch is laid out as a `(day, country)` rectangle;
//! this is the one shared container for reproduction numbers, multipliers,
//! latent infections, expected counts, observations and masks.

use serde::{Deserialize, Serialize};

/// Row-major `(n_days, n_countries)` rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    n_days: usize,
    n_countries: usize,
    data: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn fill(n_days: usize, n_countries: usize, value: T) -> Self {
        Self {
            n_days,
            n_countries,
            data: vec![value; n_days * n_countries],
        }
    }

    pub fn from_fn(n_days: usize, n_countries: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n_days * n_countries);
        for t in 0..n_days {
            for c in 0..n_countries {
                data.push(f(t, c));
            }
        }
        Self {
            n_days,
            n_countries,
            data,
        }
    }

    /// Builds from row-major data; length must equal `n_days * n_countries`.
    pub fn from_vec(n_days: usize, n_countries: usize, data: Vec<T>) -> crate::Result<Self> {
        if data.len() != n_days * n_countries {
            return Err(crate::Error::Shape(format!(
                "grid data length {} != {} days x {} countries",
                data.len(),
                n_days,
                n_countries
            )));
        }
        Ok(Self {
            n_days,
            n_countries,
            data,
        })
    }
}

impl<T> Grid<T> {
    #[inline]
    pub fn n_days(&self) -> usize {
        self.n_days
    }

    #[inline]
    pub fn n_countries(&self) -> usize {
        self.n_countries
    }

    #[inline]
    pub fn get(&self, day: usize, country: usize) -> &T {
        debug_assert!(day < self.n_days && country < self.n_countries);
        &self.data[day * self.n_countries + country]
    }

    #[inline]
    pub fn set(&mut self, day: usize, country: usize, value: T) {
        debug_assert!(day < self.n_days && country < self.n_countries);
        self.data[day * self.n_countries + country] = value;
    }

    #[inline]
    pub fn get_mut(&mut self, day: usize, country: usize) -> &mut T {
        &mut self.data[day * self.n_countries + country]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// One country's column in day order.
    pub fn column(&self, country: usize) -> impl Iterator<Item = &T> + '_ {
        (0..self.n_days).map(move |t| self.get(t, country))
    }

    pub fn iter_indexed(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / self.n_countries, k % self.n_countries, v))
    }

    pub fn same_shape<U>(&self, other: &Grid<U>) -> bool {
        self.n_days == other.n_days && self.n_countries == other.n_countries
    }
}

impl Grid<f64> {
    pub fn zeros(n_days: usize, n_countries: usize) -> Self {
        Self::fill(n_days, n_countries, 0.0)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n_days: self.n_days,
            n_countries: self.n_countries,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let g = Grid::from_fn(3, 2, |t, c| (t * 10 + c) as f64);
        assert_eq!(*g.get(0, 0), 0.0);
        assert_eq!(*g.get(0, 1), 1.0);
        assert_eq!(*g.get(2, 1), 21.0);
        assert_eq!(g.as_slice(), &[0.0, 1.0, 10.0, 11.0, 20.0, 21.0]);
    }

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(Grid::from_vec(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn column_iterates_in_day_order() {
        let g = Grid::from_fn(3, 2, |t, c| (t * 10 + c) as f64);
        let col: Vec<f64> = g.column(1).copied().collect();
        assert_eq!(col, vec![1.0, 11.0, 21.0]);
    }
}
