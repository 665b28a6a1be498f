//! Banded LU factorization with partial pivoting confined to the band.
//!
//! Storage follows the usual LAPACK `gbtrf` layout idea: row `i` keeps the
//! columns `i - kl ..= i + ku + kl`, the extra `kl` super-diagonals holding
//! fill-in created by row interchanges.

use std::ops::{Div, Mul, Sub};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandedMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; n * (2 * kl + ku + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width() + (j + self.kl - i)
    }

    /// Whether `(i, j)` lies inside the declared band.
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// Panics outside the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    /// Largest `|i - j|` over stored nonzeros.
    pub fn measured_bandwidth(&self) -> usize {
        let mut bw = 0;
        for i in 0..self.n {
            for j in i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n) {
                if self.get(i, j) != 0.0 {
                    bw = bw.max(i.abs_diff(j));
                }
            }
        }
        bw
    }

    /// `y = A x`.
    pub fn matvec<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::Add<Output = T> + Mul<f64, Output = T>,
    {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku + 1).min(self.n);
                (lo..hi).fold(T::default(), |acc, j| acc + x[j] * self.get(i, j))
            })
            .collect()
    }

    /// `I * a + self * b`, same band.
    pub fn shifted(&self, a: f64, b: f64) -> BandedMatrix {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= b);
        for i in 0..self.n {
            out.add(i, i, a);
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Row-major, space-separated dense dump for debugging.
    pub fn to_dense_text(&self) -> String {
        let mut s = String::new();
        for row in self.to_dense() {
            let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Factorizes in place; `Error::SingularMode` reports the failing pivot
    /// with `mode = usize::MAX` (callers re-tag it).
    pub fn factor(mut self) -> Result<BandedLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl + 1).min(n);
            let mut p = k;
            let mut best = self.data[self.slot(k, k)].abs();
            for i in k + 1..last_row {
                let v = self.data[self.slot(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularMode {
                    mode: usize::MAX,
                    pivot: k,
                });
            }
            piv[k] = p;
            let last_col = (k + kl + ku + 1).min(n);
            if p != k {
                for j in k..last_col {
                    let (a, b) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            for i in k + 1..last_row {
                let s = self.slot(i, k);
                let l = self.data[s] / pivot;
                self.data[s] = l;
                if l != 0.0 {
                    for j in k + 1..last_col {
                        let kj = self.data[self.slot(k, j)];
                        let ij = self.slot(i, j);
                        self.data[ij] -= l * kj;
                    }
                }
            }
        }
        Ok(BandedLu { lu: self, piv })
    }
}

#[derive(Clone, Debug)]
pub struct BandedLu {
    lu: BandedMatrix,
    piv: Vec<usize>,
}

impl BandedLu {
    pub fn n(&self) -> usize {
        self.lu.n
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place<T>(&self, b: &mut [T])
    where
        T: Copy + Sub<Output = T> + Mul<f64, Output = T> + Div<f64, Output = T>,
    {
        let lu = &self.lu;
        let n = lu.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for i in k + 1..(k + lu.kl + 1).min(n) {
                let l = lu.data[lu.slot(i, k)];
                if l != 0.0 {
                    b[i] = b[i] - bk * l;
                }
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for j in k + 1..(k + lu.kl + lu.ku + 1).min(n) {
                acc = acc - b[j] * lu.data[lu.slot(k, j)];
            }
            b[k] = acc / lu.data[lu.slot(k, k)];
        }
    }
}
