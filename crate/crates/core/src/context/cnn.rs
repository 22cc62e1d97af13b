//! Chua-Yang cellular neural network dynamics on a raster grid.
//!
//! Each cell holds a state `x` that evolves by
//! `dx/dt = -x + A * y + B * u + z`, where `y = 0.5(|x+1| - |x-1|)` is the
//! saturated output, `A` and `B` are 3x3 feedback/control templates
//! convolved over the neighborhood (mirror boundaries), `u` is the input
//! raster, and `z` a bias. Integration is forward Euler with synchronous
//! updates, so results are independent of thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::mirror_index;
use crate::raster::Raster;

/// Cellular network parameters: 3x3 feedback (on outputs) and control
/// (on inputs) templates, bias, and the integration settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CnnTemplate {
    pub feedback: [[f64; 3]; 3],
    pub control: [[f64; 3]; 3],
    pub bias: f64,
    /// Forward-Euler step.
    pub step: f64,
    pub max_iters: usize,
    /// Convergence threshold on the max absolute state change per step.
    pub tol: f64,
}

impl CnnTemplate {
    pub const DEFAULT_STEP: f64 = 0.1;
    pub const DEFAULT_TOL: f64 = 1e-5;
    pub const DEFAULT_MAX_ITERS: usize = 500;

    pub fn new(feedback: [[f64; 3]; 3], control: [[f64; 3]; 3], bias: f64) -> Self {
        CnnTemplate {
            feedback,
            control,
            bias,
            step: Self::DEFAULT_STEP,
            max_iters: Self::DEFAULT_MAX_ITERS,
            tol: Self::DEFAULT_TOL,
        }
    }

    /// Classic edge-extraction template: self-feedback 2, center-surround
    /// control, bias -1. Binary (+/-1) inputs converge to +1 exactly on
    /// object pixels that touch the background.
    pub fn edge_detector() -> Self {
        CnnTemplate::new(
            [[0.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.0]],
            [[-1.0, -1.0, -1.0], [-1.0, 8.0, -1.0], [-1.0, -1.0, -1.0]],
            -1.0,
        )
    }

    /// Default selection template: diffusion-free bistable self-feedback
    /// driven by the cell's own input. States saturate toward
    /// `sign(input)`, which turns a signed contrast field into a sharp
    /// smooth-vs-detail decision per pixel.
    pub fn contrast_selector() -> Self {
        CnnTemplate::new(
            [[0.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.0]],
            [[0.0, 0.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 0.0]],
            0.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self
            .feedback
            .iter()
            .chain(self.control.iter())
            .flatten()
            .all(|v| v.is_finite())
            && self.bias.is_finite();
        if !finite {
            return Err(Error::arg("CNN template coefficients must be finite"));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::arg(format!("CNN step {} must be > 0", self.step)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::arg(format!("CNN tolerance {} must be > 0", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::arg("CNN max_iters must be at least 1"));
        }
        Ok(())
    }
}

/// Result of integrating the network to convergence (or the iteration cap).
#[derive(Debug, Clone)]
pub struct CnnRun {
    /// Final cell states.
    pub state: Raster,
    /// Saturated outputs, always in [-1, 1].
    pub outputs: Raster,
    /// Euler steps taken.
    pub iterations: usize,
}

/// Saturating output nonlinearity.
#[inline]
pub fn saturate(x: f64) -> f64 {
    0.5 * ((x + 1.0).abs() - (x - 1.0).abs())
}

/// 3x3 template convolution at (row, col) with mirror boundaries.
#[inline]
fn stencil(data: &[f64], w: usize, h: usize, row: usize, col: usize, t: &[[f64; 3]; 3]) -> f64 {
    let mut acc = 0.0;
    for (dr, trow) in t.iter().enumerate() {
        let rr = mirror_index(row as isize + dr as isize - 1, h);
        let base = rr * w;
        for (dc, &tv) in trow.iter().enumerate() {
            if tv != 0.0 {
                let cc = mirror_index(col as isize + dc as isize - 1, w);
                acc += tv * data[base + cc];
            }
        }
    }
    acc
}

/// Integrates the network from `state0` under input `input` until the
/// max state change drops below `t.tol` or `t.max_iters` steps elapse.
pub fn cnn_run(t: &CnnTemplate, input: &Raster, state0: &Raster) -> Result<CnnRun> {
    t.validate()?;
    if !input.same_dims(state0) {
        return Err(Error::dims(format!(
            "input {}x{} vs state {}x{}",
            input.width(),
            input.height(),
            state0.width(),
            state0.height()
        )));
    }
    let (w, h) = input.dims();

    // The control term and bias never change; fold them once.
    let forcing: Vec<f64> = (0..w * h)
        .into_par_iter()
        .map(|i| stencil(input.data(), w, h, i / w, i % w, &t.control) + t.bias)
        .collect();

    let mut state: Vec<f64> = state0.data().to_vec();
    let mut next = vec![0.0; w * h];
    let mut outputs: Vec<f64> = state.iter().map(|&x| saturate(x)).collect();
    let mut iterations = 0;

    loop {
        iterations += 1;
        let h_step = t.step;
        let delta = next
            .par_chunks_mut(w)
            .enumerate()
            .map(|(row, out_row)| {
                let mut row_max: f64 = 0.0;
                for (col, slot) in out_row.iter_mut().enumerate() {
                    let i = row * w + col;
                    let feedback = stencil(&outputs, w, h, row, col, &t.feedback);
                    let dx = h_step * (-state[i] + feedback + forcing[i]);
                    *slot = state[i] + dx;
                    row_max = row_max.max(dx.abs());
                }
                row_max
            })
            .reduce(|| 0.0, f64::max);

        std::mem::swap(&mut state, &mut next);
        outputs
            .par_iter_mut()
            .zip(state.par_iter())
            .for_each(|(y, &x)| *y = saturate(x));

        if delta < t.tol || iterations >= t.max_iters {
            break;
        }
    }

    Ok(CnnRun {
        state: Raster::new(w, h, state)?,
        outputs: Raster::new(w, h, outputs)?,
        iterations,
    })
}
