//! Raster patch grid: split a 3×H×W array into equal patches and merge them back.
//!
//! When the patch size does not divide the image, the canvas is extended to the
//! next multiple by edge replication; merge crops the extension away again.

use ndarray::{s, Array3, ArrayView3};
use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::hologram::{PhaseHologram, CHANNELS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchGrid {
    pub patch_h: usize,
    pub patch_w: usize,
    pub height: usize,
    pub width: usize,
    pub rows: usize,
    pub cols: usize,
}

impl PatchGrid {
    pub fn new(patch_h: usize, patch_w: usize, height: usize, width: usize) -> Result<Self> {
        if patch_h == 0 || patch_w == 0 {
            return Err(HoloError::InvalidGrid("patch dimensions must be positive".into()));
        }
        if patch_h > height || patch_w > width {
            return Err(HoloError::InvalidGrid(format!(
                "patch {patch_h}×{patch_w} larger than image {height}×{width}"
            )));
        }
        Ok(Self {
            patch_h,
            patch_w,
            height,
            width,
            rows: height.div_ceil(patch_h),
            cols: width.div_ceil(patch_w),
        })
    }

    pub fn square(patch: usize, height: usize, width: usize) -> Result<Self> {
        Self::new(patch, patch, height, width)
    }

    pub fn for_hologram(patch: usize, holo: &PhaseHologram) -> Result<Self> {
        Self::square(patch, holo.height(), holo.width())
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn padded_height(&self) -> usize {
        self.rows * self.patch_h
    }

    pub fn padded_width(&self) -> usize {
        self.cols * self.patch_w
    }

    pub fn is_padded(&self) -> bool {
        self.padded_height() != self.height || self.padded_width() != self.width
    }

    /// Raster index to (row, col).
    pub fn position(&self, index: usize) -> (usize, usize) {
        (index / self.cols, index % self.cols)
    }

    /// Number of real (non-padded) rows and columns in the patch at `index`.
    pub fn valid_extent(&self, index: usize) -> (usize, usize) {
        let (r, c) = self.position(index);
        (
            self.patch_h.min(self.height - r * self.patch_h),
            self.patch_w.min(self.width - c * self.patch_w),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Patch {
    pub index: usize,
    pub row: usize,
    pub col: usize,
    /// 3×patch_h×patch_w values, padded by edge replication where needed.
    pub values: Array3<f64>,
    pub valid_h: usize,
    pub valid_w: usize,
}

impl Patch {
    pub fn is_padded(&self) -> bool {
        let (_, h, w) = self.values.dim();
        self.valid_h != h || self.valid_w != w
    }

    /// `true` for pixels that came from the image rather than the pad.
    pub fn is_original(&self, y: usize, x: usize) -> bool {
        y < self.valid_h && x < self.valid_w
    }
}

/// Splits a 3×H×W array into raster-ordered patches.
pub fn split_array(data: ArrayView3<'_, f64>, grid: &PatchGrid) -> Result<Vec<Patch>> {
    let (c, h, w) = data.dim();
    if c != CHANNELS || h != grid.height || w != grid.width {
        return Err(HoloError::InvalidGrid(format!(
            "grid built for {}×{}, data is {c}×{h}×{w}",
            grid.height, grid.width
        )));
    }
    let mut patches = Vec::with_capacity(grid.len());
    for index in 0..grid.len() {
        let (row, col) = grid.position(index);
        let (y0, x0) = (row * grid.patch_h, col * grid.patch_w);
        let values = Array3::from_shape_fn((CHANNELS, grid.patch_h, grid.patch_w), |(ch, y, x)| {
            data[[ch, (y0 + y).min(h - 1), (x0 + x).min(w - 1)]]
        });
        let (valid_h, valid_w) = grid.valid_extent(index);
        patches.push(Patch {
            index,
            row,
            col,
            values,
            valid_h,
            valid_w,
        });
    }
    Ok(patches)
}

/// Splits the hologram's phases (radians).
pub fn split_patches(holo: &PhaseHologram, grid: &PatchGrid) -> Result<Vec<Patch>> {
    split_array(holo.phases().view(), grid)
}

/// Inverse of [`split_array`] on the unpadded region. Patches are taken in the
/// order given and placed at successive raster positions.
pub fn merge_patches(patches: &[Array3<f64>], grid: &PatchGrid) -> Result<Array3<f64>> {
    if patches.len() != grid.len() {
        return Err(HoloError::Structural(format!(
            "expected {} patches, got {}",
            grid.len(),
            patches.len()
        )));
    }
    let mut out = Array3::zeros((CHANNELS, grid.height, grid.width));
    for (index, patch) in patches.iter().enumerate() {
        if patch.dim() != (CHANNELS, grid.patch_h, grid.patch_w) {
            return Err(HoloError::Structural(format!(
                "patch {index} has shape {:?}, expected {:?}",
                patch.dim(),
                (CHANNELS, grid.patch_h, grid.patch_w)
            )));
        }
        let (row, col) = grid.position(index);
        let (vh, vw) = grid.valid_extent(index);
        let (y0, x0) = (row * grid.patch_h, col * grid.patch_w);
        out.slice_mut(s![.., y0..y0 + vh, x0..x0 + vw])
            .assign(&patch.slice(s![.., ..vh, ..vw]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hologram::OpticalConfig;
    use proptest::prelude::*;

    fn numbered(h: usize, w: usize) -> Array3<f64> {
        Array3::from_shape_fn((3, h, w), |(c, y, x)| (c * h * w + y * w + x) as f64)
    }

    #[test]
    fn grid_512_by_64_is_8x8() {
        let grid = PatchGrid::square(64, 512, 512).unwrap();
        assert_eq!((grid.rows, grid.cols, grid.len()), (8, 8, 64));
        assert!(!grid.is_padded());
        let patches = split_array(numbered(512, 512).view(), &grid).unwrap();
        assert_eq!(patches.len(), 64);
        assert!(patches.iter().all(|p| !p.is_padded()));
        assert_eq!((patches[9].row, patches[9].col), (1, 1));
    }

    #[test]
    fn single_patch_is_identity() {
        let data = numbered(64, 64);
        let grid = PatchGrid::square(64, 64, 64).unwrap();
        let patches = split_array(data.view(), &grid).unwrap();
        assert_eq!(patches.len(), 1);
        assert_eq!(patches[0].values, data);
        let merged = merge_patches(&[patches[0].values.clone()], &grid).unwrap();
        assert_eq!(merged, data);
    }

    #[test]
    fn padded_96_grid_covers_every_pixel_once() {
        let (h, w) = (512, 512);
        let grid = PatchGrid::square(96, h, w).unwrap();
        assert_eq!((grid.rows, grid.cols), (6, 6));
        assert_eq!((grid.padded_height(), grid.padded_width()), (576, 576));
        let data = numbered(h, w);
        let patches = split_array(data.view(), &grid).unwrap();

        // brute force: count how often each original pixel is emitted as an unpadded sample
        let mut hits = vec![0u32; h * w];
        let mut padded = 0usize;
        for p in &patches {
            for y in 0..96 {
                for x in 0..96 {
                    if p.is_original(y, x) {
                        let (gy, gx) = (p.row * 96 + y, p.col * 96 + x);
                        assert_eq!(p.values[[0, y, x]], data[[0, gy, gx]]);
                        hits[gy * w + gx] += 1;
                    } else {
                        padded += 1;
                    }
                }
            }
        }
        assert!(hits.iter().all(|&n| n == 1));
        assert_eq!(padded, 576 * 576 - 512 * 512);
        // last row/col of patches carry 32 real + 64 padded lines
        let last = &patches[35];
        assert_eq!((last.valid_h, last.valid_w), (32, 32));
        assert!(last.is_padded());
        assert_eq!(patches.iter().filter(|p| p.is_padded()).count(), 11);
        // replication: padded samples copy the nearest edge pixel
        assert_eq!(last.values[[2, 95, 95]], data[[2, 511, 511]]);
        assert_eq!(last.values[[1, 10, 70]], data[[1, 5 * 96 + 10, 511]]);
    }

    #[test]
    fn patch_larger_than_image_is_rejected() {
        assert!(matches!(PatchGrid::square(128, 64, 64), Err(HoloError::InvalidGrid(_))));
        assert!(matches!(PatchGrid::square(0, 64, 64), Err(HoloError::InvalidGrid(_))));
    }

    #[test]
    fn split_rejects_mismatched_grid() {
        let grid = PatchGrid::square(32, 64, 64).unwrap();
        assert!(split_array(numbered(64, 96).view(), &grid).is_err());
    }

    #[test]
    fn merge_rejects_wrong_count_or_shape() {
        let grid = PatchGrid::square(32, 64, 64).unwrap();
        let patches: Vec<_> = split_array(numbered(64, 64).view(), &grid)
            .unwrap()
            .into_iter()
            .map(|p| p.values)
            .collect();
        assert!(matches!(merge_patches(&patches[..3], &grid), Err(HoloError::Structural(_))));
        let mut bad = patches.clone();
        bad[2] = Array3::zeros((3, 16, 32));
        assert!(matches!(merge_patches(&bad, &grid), Err(HoloError::Structural(_))));
    }

    #[test]
    fn shuffled_patches_do_not_roundtrip() {
        let data = numbered(64, 64);
        let grid = PatchGrid::square(32, 64, 64).unwrap();
        let mut patches: Vec<_> = split_array(data.view(), &grid)
            .unwrap()
            .into_iter()
            .map(|p| p.values)
            .collect();
        assert_eq!(merge_patches(&patches, &grid).unwrap(), data);
        patches.swap(0, 3);
        assert_ne!(merge_patches(&patches, &grid).unwrap(), data);
    }

    #[test]
    fn hologram_split_merge_is_bit_exact() {
        let phases = Array3::from_shape_fn((3, 160, 224), |(c, y, x)| ((c + 3 * y + 5 * x) as f64 * 0.37).sin() + 1.5);
        let holo = PhaseHologram::new(phases, OpticalConfig::default()).unwrap();
        for size in [32, 64, 96, 128, 160] {
            let grid = PatchGrid::for_hologram(size, &holo).unwrap();
            let parts: Vec<_> = split_patches(&holo, &grid).unwrap().into_iter().map(|p| p.values).collect();
            assert_eq!(&merge_patches(&parts, &grid).unwrap(), holo.phases(), "patch {size}");
        }
    }

    proptest! {
        #[test]
        fn split_merge_roundtrip(h in 1usize..70, w in 1usize..70, ph in 1usize..24, pw in 1usize..24) {
            prop_assume!(ph <= h && pw <= w);
            let data = Array3::from_shape_fn((3, h, w), |(c, y, x)| ((c * 7919 + y * 131 + x) as f64).sqrt());
            let grid = PatchGrid::new(ph, pw, h, w).unwrap();
            let parts: Vec<_> = split_array(data.view(), &grid).unwrap().into_iter().map(|p| p.values).collect();
            prop_assert!(grid.len() * ph * pw >= h * w);
            prop_assert_eq!(grid.len() * ph * pw == h * w, !grid.is_padded());
            prop_assert_eq!(merge_patches(&parts, &grid).unwrap(), data);
        }
    }
}
