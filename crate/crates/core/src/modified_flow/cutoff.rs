//! Smooth cut-off `Ĩ`: equal to 1 on [-1, 1], 0 outside (-2, 2), built from the
//! bump `η̃(x) = e^{-1/(x-1)} e^{-1/(2-x)}` on (1, 2).

use std::sync::OnceLock;

use crate::quadrature::gauss20;

use super::erf::{erf, erf_prime};

const PANELS: usize = 256;

/// `η̃(x)`, zero outside (1, 2).
pub fn bump(x: f64) -> f64 {
    if x <= 1.0 || x >= 2.0 {
        0.0
    } else {
        (-1.0 / (x - 1.0) - 1.0 / (2.0 - x)).exp()
    }
}

/// `η̃'(x)`.
pub fn bump_prime(x: f64) -> f64 {
    if x <= 1.0 || x >= 2.0 {
        0.0
    } else {
        bump(x) * (1.0 / ((x - 1.0) * (x - 1.0)) - 1.0 / ((2.0 - x) * (2.0 - x)))
    }
}

struct TailTable {
    normalizer: f64,
    /// `tail[j] = ∫_{1 + j/PANELS}^2 η̃`.
    tail: Vec<f64>,
}

fn table() -> &'static TailTable {
    static TABLE: OnceLock<TailTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let width = 1.0 / PANELS as f64;
        let mut tail = vec![0.0; PANELS + 1];
        for j in (0..PANELS).rev() {
            let a = 1.0 + j as f64 * width;
            tail[j] = tail[j + 1] + gauss20(bump, a, a + width);
        }
        TailTable {
            normalizer: tail[0],
            tail,
        }
    })
}

/// `∫₁² η̃(t) dt`.
pub fn normalizer() -> f64 {
    table().normalizer
}

/// `Ĩ(x) = ∫_{|x|}^2 η̃ / ∫_1^2 η̃`.
pub fn cutoff(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 1.0 {
        return 1.0;
    }
    if ax >= 2.0 {
        return 0.0;
    }
    let t = table();
    let pos = (ax - 1.0) * PANELS as f64;
    let j = (pos.floor() as usize).min(PANELS - 1);
    let right = 1.0 + (j + 1) as f64 / PANELS as f64;
    (t.tail[j + 1] + gauss20(bump, ax, right)) / t.normalizer
}

/// `Ĩ'(x) = -sign(x) η̃(|x|) / N`.
pub fn cutoff_prime(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 1.0 || ax >= 2.0 {
        return 0.0;
    }
    -x.signum() * bump(ax) / normalizer()
}

/// `Ĩ''(x) = -η̃'(|x|) / N`.
pub fn cutoff_second(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 1.0 || ax >= 2.0 {
        return 0.0;
    }
    -bump_prime(ax) / normalizer()
}

/// Sup-norm constants of the cut-off construction, from a dense sample of
/// [0, 2] (all four functions are even or odd).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffConstants {
    /// `sup |(x² Ĩ)'|`
    pub m: f64,
    /// `sup |(erf · Ĩ)'|`
    pub m0: f64,
    /// `sup |Ĩ'|`
    pub m1: f64,
    /// `sup |Ĩ''|`
    pub m2: f64,
    pub normalizer: f64,
}

pub fn constants() -> CutoffConstants {
    static CONSTS: OnceLock<CutoffConstants> = OnceLock::new();
    *CONSTS.get_or_init(|| {
        let samples = 40_000;
        let mut c = CutoffConstants {
            m: 0.0,
            m0: 0.0,
            m1: 0.0,
            m2: 0.0,
            normalizer: normalizer(),
        };
        for i in 0..=samples {
            let x = 2.0 * i as f64 / samples as f64;
            let (i0, i1, i2) = (cutoff(x), cutoff_prime(x), cutoff_second(x));
            c.m = c.m.max((2.0 * x * i0 + x * x * i1).abs());
            c.m0 = c.m0.max((erf_prime(x) * i0 + erf(x) * i1).abs());
            c.m1 = c.m1.max(i1.abs());
            c.m2 = c.m2.max(i2.abs());
        }
        c
    })
}
