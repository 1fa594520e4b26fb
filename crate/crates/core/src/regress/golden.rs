//! Golden-section search for the maximum of a unimodal function on a bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_8; // (sqrt(5) - 1) / 2

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenMax {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// False when `max_iter` ran out before the bracket shrank below `tol`.
    pub converged: bool,
}

pub fn maximize<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> GoldenMax
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while b - a > tol && iterations < max_iter {
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (x, fx) = if fc >= fd { (c, fc) } else { (d, fd) };
    GoldenMax {
        x,
        fx,
        iterations,
        converged: b - a <= tol,
    }
}
