//! n-dimensional FFT over a [`GridSpec`] layout, one axis at a time.
//!
//! Forward transforms are unnormalized; inverse transforms divide by the
//! total point count so that `inverse(forward(x)) == x`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::{Field, GridSpec};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

const TILE: usize = 16;

fn gather(
    chunk: &[Complex64],
    n: usize,
    stride: usize,
    start: usize,
    width: usize,
    buf: &mut [Complex64],
) {
    for i in 0..n {
        let row = &chunk[i * stride + start..i * stride + start + width];
        for (b, v) in row.iter().enumerate() {
            buf[b * n + i] = *v;
        }
    }
}

fn scatter(
    chunk: &mut [Complex64],
    n: usize,
    stride: usize,
    start: usize,
    width: usize,
    buf: &[Complex64],
) {
    for i in 0..n {
        let row = &mut chunk[i * stride + start..i * stride + start + width];
        for (b, v) in row.iter_mut().enumerate() {
            *v = buf[b * n + i];
        }
    }
}

fn transform_axis(spec: &GridSpec, data: &mut [Complex64], axis: usize, inverse: bool) {
    let n = spec.sizes()[axis];
    let stride = spec.stride(axis);
    let fft = plan(n, inverse);
    if stride == 1 {
        data.par_chunks_mut(n.max(1024 / n * n)).for_each_init(
            || vec![Complex64::default(); fft.get_inplace_scratch_len()],
            |scratch, chunk| fft.process_with_scratch(chunk, scratch),
        );
        return;
    }
    // Each block of `n * stride` values holds `stride` interleaved lines,
    // moved through a contiguous buffer a tile of lines at a time.
    let block = n * stride;
    data.par_chunks_mut(block).for_each(|chunk| {
        let mut buf = vec![Complex64::default(); n * TILE];
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        let mut start = 0;
        while start < stride {
            let width = TILE.min(stride - start);
            let tile = &mut buf[..n * width];
            gather(chunk, n, stride, start, width, tile);
            fft.process_with_scratch(tile, &mut scratch);
            scatter(chunk, n, stride, start, width, tile);
            start += width;
        }
    });
}

fn transform_axis_0_wide(spec: &GridSpec, data: &mut [Complex64], inverse: bool) {
    // Axis 0 has a single block; tiles are transformed in parallel into
    // separate buffers, then scattered back.
    let n = spec.sizes()[0];
    let stride = spec.stride(0);
    if rayon::current_num_threads() == 1 {
        transform_axis(spec, data, 0, inverse);
        return;
    }
    let fft = plan(n, inverse);
    let src: &[Complex64] = data;
    let tiles: Vec<(usize, usize, Vec<Complex64>)> = (0..stride.div_ceil(TILE))
        .into_par_iter()
        .map_init(
            || vec![Complex64::default(); fft.get_inplace_scratch_len()],
            |scratch, t| {
                let start = t * TILE;
                let width = TILE.min(stride - start);
                let mut buf = vec![Complex64::default(); n * width];
                gather(src, n, stride, start, width, &mut buf);
                fft.process_with_scratch(&mut buf, scratch);
                (start, width, buf)
            },
        )
        .collect();
    for (start, width, buf) in tiles {
        scatter(data, n, stride, start, width, &buf);
    }
}

fn transform(spec: &GridSpec, data: &mut [Complex64], inverse: bool) {
    assert_eq!(data.len(), spec.len());
    for axis in 0..spec.dim() {
        if axis == 0 && spec.dim() > 1 && spec.stride(0) >= 64 {
            transform_axis_0_wide(spec, data, inverse);
        } else {
            transform_axis(spec, data, axis, inverse);
        }
    }
    if inverse {
        let scale = 1.0 / spec.len() as f64;
        data.par_iter_mut().for_each(|v| *v *= scale);
    }
}

pub fn forward_in_place(spec: &GridSpec, data: &mut [Complex64]) {
    transform(spec, data, false);
}

pub fn inverse_in_place(spec: &GridSpec, data: &mut [Complex64]) {
    transform(spec, data, true);
}

/// Unnormalized DFT coefficients of `f`, laid out like the grid.
pub fn forward(f: &Field) -> Vec<Complex64> {
    let mut data = f.values().to_vec();
    forward_in_place(f.spec(), &mut data);
    data
}

pub fn inverse(spec: &GridSpec, mut coeffs: Vec<Complex64>) -> Field {
    inverse_in_place(spec, &mut coeffs);
    Field::from_parts_unchecked(spec.clone(), coeffs)
}

/// Transform along a single axis only.
pub fn forward_axis(spec: &GridSpec, data: &mut [Complex64], axis: usize) {
    transform_axis(spec, data, axis, false);
}

pub fn inverse_axis(spec: &GridSpec, data: &mut [Complex64], axis: usize) {
    transform_axis(spec, data, axis, true);
    let scale = 1.0 / spec.sizes()[axis] as f64;
    data.iter_mut().for_each(|v| *v *= scale);
}
