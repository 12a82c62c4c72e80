//! Dense image grids, per-pixel probability maps, and binary region masks.
//!
//! [`ImageGrid`] is the universal pixel carrier: targets, conditions, noisy
//! diffusion states, and predictions are all grids of `f64` stored row-major
//! by `(row, col, channel)`. Pixel data is `[0, 1]` at module boundaries;
//! the diffusion core works on `[-1, 1]` via [`ImageGrid::to_signed`] /
//! [`ImageGrid::to_unit`]. Intermediate noisy states are unbounded.
//!
//! All operations are pure: inputs are never mutated.

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Grid dimensions `(height, width, channels)`, all positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridDims {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
}

impl GridDims {
    pub fn new(height: usize, width: usize, channels: usize) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::InvalidShape(format!(
                "dimensions must be positive, got {height}x{width}x{channels}"
            )));
        }
        Ok(Self { height, width, channels })
    }

    pub fn len(&self) -> usize {
        self.height * self.width * self.channels
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// H×W×C grid of real values, row-major by `(row, col, channel)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageGrid {
    dims: GridDims,
    data: Vec<f64>,
}

impl ImageGrid {
    /// Grid filled with `value`.
    pub fn filled(dims: GridDims, value: f64) -> Self {
        Self { dims, data: vec![value; dims.len()] }
    }

    pub fn zeros(dims: GridDims) -> Self {
        Self::filled(dims, 0.0)
    }

    /// Takes ownership of `data`; rejects length mismatches and non-finite
    /// entries.
    pub fn from_vec(dims: GridDims, data: Vec<f64>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(Error::InvalidShape(format!(
                "data length {} != {}x{}x{} = {}",
                data.len(),
                dims.height,
                dims.width,
                dims.channels,
                dims.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!("non-finite entry {v}")));
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn height(&self) -> usize {
        self.dims.height
    }

    pub fn width(&self) -> usize {
        self.dims.width
    }

    pub fn channels(&self) -> usize {
        self.dims.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    fn offset(&self, row: usize, col: usize, ch: usize) -> usize {
        (row * self.dims.width + col) * self.dims.channels + ch
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, ch: usize) -> f64 {
        self.data[self.offset(row, col, ch)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, ch: usize, value: f64) {
        let i = self.offset(row, col, ch);
        self.data[i] = value;
    }

    fn check_same_dims(&self, other: &ImageGrid) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::InvalidShape(format!(
                "shape mismatch: {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    /// Element-wise product. `other` must either match shapes exactly or be a
    /// single-channel grid of the same height/width, broadcast across
    /// channels.
    pub fn hadamard(&self, other: &ImageGrid) -> Result<ImageGrid> {
        if self.dims == other.dims {
            let data = self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect();
            return Ok(ImageGrid { dims: self.dims, data });
        }
        if other.dims.channels == 1
            && other.dims.height == self.dims.height
            && other.dims.width == self.dims.width
        {
            let mut data = Vec::with_capacity(self.data.len());
            for (i, v) in self.data.iter().enumerate() {
                data.push(v * other.data[i / self.dims.channels]);
            }
            return Ok(ImageGrid { dims: self.dims, data });
        }
        Err(Error::InvalidShape(format!(
            "hadamard shape mismatch: {:?} vs {:?}",
            self.dims, other.dims
        )))
    }

    /// Element-wise product with a probability map, broadcast across
    /// channels.
    pub fn mul_map(&self, map: &OODMap) -> Result<ImageGrid> {
        self.hadamard(&map.to_grid())
    }

    /// `alpha * self + beta * other`, shapes equal.
    pub fn lincomb(&self, alpha: f64, other: &ImageGrid, beta: f64) -> Result<ImageGrid> {
        self.check_same_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(ImageGrid { dims: self.dims, data })
    }

    pub fn add(&self, other: &ImageGrid) -> Result<ImageGrid> {
        self.lincomb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &ImageGrid) -> Result<ImageGrid> {
        self.lincomb(1.0, other, -1.0)
    }

    pub fn scale(&self, factor: f64) -> ImageGrid {
        ImageGrid {
            dims: self.dims,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> ImageGrid {
        ImageGrid {
            dims: self.dims,
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }

    /// Clamp every entry into `[0, 1]`; entries already inside are unchanged.
    /// Rejects NaN input.
    pub fn clamp01(&self) -> Result<ImageGrid> {
        if self.data.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidValue("NaN entry in clamp01".into()));
        }
        Ok(self.map(|v| v.clamp(0.0, 1.0)))
    }

    /// `[0,1]` pixel data -> `[-1,1]` diffusion-core domain.
    pub fn to_signed(&self) -> ImageGrid {
        self.map(|v| 2.0 * v - 1.0)
    }

    /// `[-1,1]` diffusion-core domain -> `[0,1]` pixel data (affine only, no
    /// clamping).
    pub fn to_unit(&self) -> ImageGrid {
        self.map(|v| 0.5 * (v + 1.0))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Exact bit-level equality, for regression tests.
    pub fn bit_eq(&self, other: &ImageGrid) -> bool {
        self.dims == other.dims
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Grid of i.i.d. standard-normal entries drawn deterministically from `rng`.
pub fn gaussian_noise(rng: &mut Rng, dims: GridDims) -> ImageGrid {
    let data = (0..dims.len()).map(|_| rng.standard_normal()).collect();
    ImageGrid { dims, data }
}

/// Per-pixel probability in `[0, 1]` that the pixel is out-of-distribution.
/// Dimensions match the condition image it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct OODMap {
    height: usize,
    width: usize,
    prob: Vec<f64>,
}

impl OODMap {
    pub fn from_vec(height: usize, width: usize, prob: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidShape(format!(
                "map dimensions must be positive, got {height}x{width}"
            )));
        }
        if prob.len() != height * width {
            return Err(Error::InvalidShape(format!(
                "probability length {} != {height}x{width}",
                prob.len()
            )));
        }
        if let Some(p) = prob.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidValue(format!("probability {p} outside [0,1]")));
        }
        Ok(Self { height, width, prob })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self { height, width, prob: vec![0.0; height * width] }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn prob(&self) -> &[f64] {
        &self.prob
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.prob[row * self.width + col]
    }

    /// The map as a single-channel grid, for broadcast arithmetic.
    pub fn to_grid(&self) -> ImageGrid {
        ImageGrid {
            dims: GridDims { height: self.height, width: self.width, channels: 1 },
            data: self.prob.clone(),
        }
    }

    /// `1 - p` per pixel.
    pub fn complement(&self) -> OODMap {
        OODMap {
            height: self.height,
            width: self.width,
            prob: self.prob.iter().map(|p| 1.0 - p).collect(),
        }
    }

    /// Indicator map `p >= tau`.
    pub fn threshold(&self, tau: f64) -> OODMap {
        OODMap {
            height: self.height,
            width: self.width,
            prob: self.prob.iter().map(|p| f64::from(u8::from(*p >= tau))).collect(),
        }
    }

    /// Fraction of pixels with `p >= tau`.
    pub fn fraction_at_least(&self, tau: f64) -> f64 {
        let n = self.prob.iter().filter(|p| **p >= tau).count();
        n as f64 / self.prob.len() as f64
    }

    /// Binary region labels from `p >= tau`; provenance marked as estimated.
    pub fn to_region_mask(&self, tau: f64) -> RegionMask {
        RegionMask {
            height: self.height,
            width: self.width,
            ood: self.prob.iter().map(|p| *p >= tau).collect(),
            from_ground_truth: false,
        }
    }
}

/// Binary per-pixel region labels (OOD = true, IND = false) plus a flag
/// recording whether the labels come from ground truth or an estimator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionMask {
    pub height: usize,
    pub width: usize,
    pub ood: Vec<bool>,
    pub from_ground_truth: bool,
}

impl RegionMask {
    pub fn empty(height: usize, width: usize, from_ground_truth: bool) -> Self {
        Self { height, width, ood: vec![false; height * width], from_ground_truth }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.ood[row * self.width + col]
    }

    pub fn count_ood(&self) -> usize {
        self.ood.iter().filter(|b| **b).count()
    }

    pub fn area_fraction(&self) -> f64 {
        self.count_ood() as f64 / self.ood.len() as f64
    }

    /// The mask as a `{0,1}` probability map.
    pub fn to_map(&self) -> OODMap {
        OODMap {
            height: self.height,
            width: self.width,
            prob: self.ood.iter().map(|b| f64::from(u8::from(*b))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(h: usize, w: usize, c: usize) -> GridDims {
        GridDims::new(h, w, c).unwrap()
    }

    #[test]
    fn gaussian_noise_is_deterministic() {
        let d = dims(2, 2, 1);
        let a = gaussian_noise(&mut Rng::new(5), d);
        let b = gaussian_noise(&mut Rng::new(5), d);
        assert!(a.bit_eq(&b));
    }

    #[test]
    fn gaussian_noise_rejects_zero_dims() {
        assert!(matches!(GridDims::new(0, 2, 1), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn gaussian_noise_moments_match_standard_normal() {
        // Monte-Carlo check against N(0,1): |mean| < 0.01, |var - 1| < 0.01
        // at one million draws.
        let d = dims(1000, 1000, 1);
        let g = gaussian_noise(&mut Rng::new(123), d);
        let n = g.data().len() as f64;
        let mean = g.data().iter().sum::<f64>() / n;
        let var = g.data().iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn distinct_seeds_give_distinct_streams() {
        let d = dims(10, 10, 10);
        let a = gaussian_noise(&mut Rng::new(1), d);
        let b = gaussian_noise(&mut Rng::new(2), d);
        assert!(a.data().iter().zip(b.data()).any(|(x, y)| x != y));
    }

    #[test]
    fn hadamard_identity_and_annihilator() {
        let d = dims(3, 2, 1);
        let a = ImageGrid::from_vec(d, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let ones = ImageGrid::filled(d, 1.0);
        let zeros = ImageGrid::zeros(d);
        assert_eq!(a.hadamard(&ones).unwrap(), a);
        assert_eq!(a.hadamard(&zeros).unwrap(), zeros);
    }

    #[test]
    fn hadamard_broadcasts_single_channel_over_rgb() {
        let d = dims(1, 2, 3);
        let a = ImageGrid::from_vec(d, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let m = OODMap::from_vec(1, 2, vec![0.5, 0.0]).unwrap();
        let out = a.mul_map(&m).unwrap();
        assert_eq!(out.data(), &[0.5, 1.0, 1.5, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn hadamard_rejects_shape_mismatch() {
        let a = ImageGrid::zeros(dims(2, 2, 1));
        let b = ImageGrid::zeros(dims(2, 3, 1));
        assert!(matches!(a.hadamard(&b), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn clamp01_clamps_and_preserves() {
        let d = dims(1, 3, 1);
        let a = ImageGrid::from_vec(d, vec![1.3, -0.2, 0.5]).unwrap();
        let c = a.clamp01().unwrap();
        assert_eq!(c.data(), &[1.0, 0.0, 0.5]);
    }

    #[test]
    fn signed_unit_roundtrip() {
        let d = dims(1, 3, 1);
        let a = ImageGrid::from_vec(d, vec![0.0, 0.5, 1.0]).unwrap();
        let s = a.to_signed();
        assert_eq!(s.data(), &[-1.0, 0.0, 1.0]);
        assert_eq!(s.to_unit().data(), a.data());
    }

    #[test]
    fn ood_map_rejects_out_of_range() {
        assert!(OODMap::from_vec(1, 2, vec![0.5, 1.5]).is_err());
    }
}
