//! Adaptive Gauss-Kronrod quadrature on finite intervals, for complex-valued
//! integrands. Globally adaptive: the panel with the largest error estimate
//! is bisected until the summed estimate meets the tolerance or the panel
//! budget runs out. Panels are accumulated in a fixed left-to-right order so
//! results are reproducible bit-for-bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

// 15-point Kronrod nodes on [-1, 1] (positive half) with Kronrod and
// embedded 7-point Gauss weights, QUADPACK values.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Kronrod pass over [a, b]: returns (integral, error estimate).
fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = (kronrod - gauss).norm() * half.abs();
    (value, err)
}

struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    err: f64,
}

#[derive(Clone, Copy)]
struct HeapEntry {
    err: f64,
    idx: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.idx == other.idx
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Larger error first; ties broken by insertion order for determinism.
        self.err
            .total_cmp(&other.err)
            .then(other.idx.cmp(&self.idx))
    }
}

pub(crate) struct QuadOutcome {
    pub value: Complex64,
    pub abs_error: f64,
    /// False when the panel budget ran out before the tolerance was met;
    /// `abs_error` is still a valid bound.
    pub converged: bool,
}

/// Integrate `f` over the span covered by `breaks` (ascending breakpoints,
/// at least two). `abs_tol`/`rel_tol` bound the summed error estimate.
pub(crate) fn adaptive_complex<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
    context: &'static str,
) -> Result<QuadOutcome> {
    assert!(breaks.len() >= 2);
    let mut panels: Vec<Option<Panel>> = Vec::with_capacity(breaks.len() + 16);
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_sum = 0.0;
    let push = |panels: &mut Vec<Option<Panel>>,
                    heap: &mut BinaryHeap<HeapEntry>,
                    lo: f64,
                    hi: f64,
                    value: Complex64,
                    err: f64| {
        let idx = panels.len();
        panels.push(Some(Panel { lo, hi, value, err }));
        heap.push(HeapEntry { err, idx });
    };
    for w in breaks.windows(2) {
        let (v, e) = gk15(f, w[0], w[1]);
        if !v.is_finite() {
            return Err(Error::Numeric {
                context,
                reason: format!("non-finite integrand on [{}, {}]", w[0], w[1]),
            });
        }
        total += v;
        err_sum += e;
        push(&mut panels, &mut heap, w[0], w[1], v, e);
    }
    let mut live = breaks.len() - 1;
    while live < max_panels && err_sum > abs_tol.max(rel_tol * total.norm()) {
        let Some(top) = heap.pop() else { break };
        let Some(panel) = panels[top.idx].take() else {
            continue;
        };
        let mid = 0.5 * (panel.lo + panel.hi);
        if mid <= panel.lo || mid >= panel.hi {
            // Interval at floating-point resolution; keep as is.
            panels[top.idx] = Some(panel);
            break;
        }
        let (v1, e1) = gk15(f, panel.lo, mid);
        let (v2, e2) = gk15(f, mid, panel.hi);
        if !v1.is_finite() || !v2.is_finite() {
            return Err(Error::Numeric {
                context,
                reason: format!("non-finite integrand near {mid}"),
            });
        }
        total += v1 + v2 - panel.value;
        err_sum += e1 + e2 - panel.err;
        push(&mut panels, &mut heap, panel.lo, mid, v1, e1);
        push(&mut panels, &mut heap, mid, panel.hi, v2, e2);
        live += 1;
    }
    // Deterministic final summation: panels ordered by left edge.
    let mut ordered: Vec<&Panel> = panels.iter().flatten().collect();
    ordered.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_error = 0.0;
    for p in &ordered {
        value += p.value;
        abs_error += p.err;
    }
    let converged = abs_error <= abs_tol.max(rel_tol * value.norm());
    Ok(QuadOutcome {
        value,
        abs_error,
        converged,
    })
}

/// Real-valued convenience wrapper.
pub(crate) fn adaptive_real<F: FnMut(f64) -> f64>(
    f: &mut F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
    context: &'static str,
) -> Result<(f64, f64, bool)> {
    let out = adaptive_complex(
        &mut |x| Complex64::new(f(x), 0.0),
        breaks,
        abs_tol,
        rel_tol,
        max_panels,
        context,
    )?;
    Ok((out.value.re, out.abs_error, out.converged))
}
