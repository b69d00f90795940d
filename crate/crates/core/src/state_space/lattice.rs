//! Lattice descriptors and the site-id encoding of lattice points.
//!
//! A lattice point `(x_0, .., x_{d-1})` is stored as the integer
//! `x_0 + x_1 * M + .. + x_{d-1} * M^{d-1}` with `M = 2^16` and every
//! coordinate in `[-2^15, 2^15)` (balanced mixed radix). For `d = 1` the site id
//! is the coordinate itself.

use serde::{Deserialize, Serialize};

use super::SiteId;
use crate::error::{Error, Result};

pub const COORD_RADIX: i64 = 1 << 16;
pub const MAX_DIM: usize = 3;

pub fn encode_point(coords: &[i64]) -> SiteId {
    coords
        .iter()
        .rev()
        .fold(0i64, |acc, &x| acc * COORD_RADIX + x)
}

pub fn decode_point(id: SiteId, dim: usize) -> Vec<i64> {
    let mut rest = id;
    let mut coords = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut digit = rest.rem_euclid(COORD_RADIX);
        if digit >= COORD_RADIX / 2 {
            digit -= COORD_RADIX;
        }
        coords.push(digit);
        rest = (rest - digit) / COORD_RADIX;
    }
    coords
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeShape {
    /// Sites `{-r..r}^d`, no wrap-around.
    Window { radius: i64 },
    /// Sites `{0..n_i-1}` per axis, periodic.
    Torus { sizes: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub dim: usize,
    pub shape: LatticeShape,
}

impl Lattice {
    pub fn window(dim: usize, radius: i64) -> Result<Self> {
        check_dim(dim)?;
        if radius < 0 {
            return Err(Error::InvalidInput(format!("negative radius {radius}")));
        }
        Ok(Lattice {
            dim,
            shape: LatticeShape::Window { radius },
        })
    }

    pub fn torus(sizes: Vec<i64>) -> Result<Self> {
        check_dim(sizes.len())?;
        if let Some(&bad) = sizes.iter().find(|&&n| n < 3) {
            return Err(Error::SizeTooSmall(bad));
        }
        Ok(Lattice {
            dim: sizes.len(),
            shape: LatticeShape::Torus { sizes },
        })
    }

    pub fn coords(&self, site: SiteId) -> Vec<i64> {
        decode_point(site, self.dim)
    }

    pub fn site(&self, coords: &[i64]) -> SiteId {
        encode_point(coords)
    }

    pub fn contains(&self, coords: &[i64]) -> bool {
        match &self.shape {
            LatticeShape::Window { radius } => coords.iter().all(|x| x.abs() <= *radius),
            LatticeShape::Torus { sizes } => {
                coords.iter().zip(sizes).all(|(x, n)| (0..*n).contains(x))
            }
        }
    }

    /// All lattice points, in ascending site-id order.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let ranges: Vec<(i64, i64)> = match &self.shape {
            LatticeShape::Window { radius } => vec![(-radius, *radius); self.dim],
            LatticeShape::Torus { sizes } => sizes.iter().map(|n| (0, n - 1)).collect(),
        };
        let mut points = vec![Vec::new()];
        for &(lo, hi) in &ranges {
            points = points
                .into_iter()
                .flat_map(|p| {
                    (lo..=hi).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let mut ids: Vec<_> = points.into_iter().map(|p| (encode_point(&p), p)).collect();
        ids.sort();
        ids.into_iter().map(|(_, p)| p).collect()
    }

    /// Translates a point, wrapping on tori. `None` when the image leaves a window.
    pub fn translate(&self, coords: &[i64], shift: &[i64]) -> Option<Vec<i64>> {
        let moved: Vec<i64> = match &self.shape {
            LatticeShape::Window { .. } => coords.iter().zip(shift).map(|(x, s)| x + s).collect(),
            LatticeShape::Torus { sizes } => coords
                .iter()
                .zip(shift)
                .zip(sizes)
                .map(|((x, s), n)| (x + s).rem_euclid(*n))
                .collect(),
        };
        self.contains(&moved).then_some(moved)
    }

    /// Unit steps `±e_i` from a point that stay on the lattice.
    pub fn neighbors(&self, coords: &[i64]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for axis in 0..self.dim {
            for step in [-1i64, 1] {
                let mut shift = vec![0; self.dim];
                shift[axis] = step;
                if let Some(q) = self.translate(coords, &shift) {
                    out.push(q);
                }
            }
        }
        out
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "lattice dimension must be in 1..={MAX_DIM}, got {dim}"
        )));
    }
    Ok(())
}
