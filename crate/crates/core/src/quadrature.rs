//! Adaptive and composite Simpson rules.

/// Absolute tolerance used by the generic adaptive rule.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 40;

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Self {
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        Panel {
            a,
            m,
            b,
            fa,
            fm,
            fb,
            whole: (b - a) * (fa + 4.0 * fm + fb) / 6.0,
        }
    }

    fn split<F: Fn(f64) -> f64>(&self, f: &F) -> (Panel, Panel) {
        let lm = 0.5 * (self.a + self.m);
        let rm = 0.5 * (self.m + self.b);
        let (flm, frm) = (f(lm), f(rm));
        let left = Panel {
            a: self.a,
            m: lm,
            b: self.m,
            fa: self.fa,
            fm: flm,
            fb: self.fm,
            whole: (self.m - self.a) * (self.fa + 4.0 * flm + self.fm) / 6.0,
        };
        let right = Panel {
            a: self.m,
            m: rm,
            b: self.b,
            fa: self.fm,
            fm: frm,
            fb: self.fb,
            whole: (self.b - self.m) * (self.fm + 4.0 * frm + self.fb) / 6.0,
        };
        (left, right)
    }
}

enum Criterion {
    Absolute(f64),
    Relative(f64),
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: Panel, crit: &Criterion, depth: u32) -> f64 {
    let (l, r) = p.split(f);
    let both = l.whole + r.whole;
    let err = both - p.whole;
    let done = match *crit {
        Criterion::Absolute(tol) => err.abs() <= 15.0 * tol,
        Criterion::Relative(tol) => err.abs() <= 15.0 * tol * both.abs(),
    };
    if depth == 0 || done || !both.is_finite() {
        return both + err / 15.0;
    }
    let sub = match *crit {
        Criterion::Absolute(tol) => Criterion::Absolute(0.5 * tol),
        Criterion::Relative(tol) => Criterion::Relative(tol),
    };
    refine(f, l, &sub, depth - 1) + refine(f, r, &sub, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with an absolute
/// tolerance. Orientation is respected: swapping the bounds flips the sign.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let p = Panel::new(&f, a, b);
    refine(&f, p, &Criterion::Absolute(abs_tol), MAX_DEPTH)
}

/// Adaptive Simpson with a relative error target, for integrands with a
/// large dynamic range such as `exp(±2B)`.
pub fn adaptive_simpson_rel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let p = Panel::new(&f, a, b);
    refine(&f, p, &Criterion::Relative(rel_tol), MAX_DEPTH)
}

/// Integrates piecewise over the integer lattice inside `[a, b]`.
///
/// The fields in this crate are smooth on every open unit interval but only
/// piecewise smooth across integers, so splitting there keeps the adaptive
/// rule from chasing kinks.
pub fn integrate_unit_pieces<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -integrate_unit_pieces(f, b, a, rel_tol);
    }
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (lo.floor() + 1.0).min(b);
        total += adaptive_simpson_rel(f, lo, hi, rel_tol);
        lo = hi;
    }
    total
}

/// Same piecewise scheme with an absolute tolerance per unit piece.
pub fn integrate_unit_pieces_abs<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -integrate_unit_pieces_abs(f, b, a, abs_tol);
    }
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (lo.floor() + 1.0).min(b);
        total += adaptive_simpson(f, lo, hi, abs_tol);
        lo = hi;
    }
    total
}

/// Composite Simpson on `n` (even, rounded up) subintervals of `[a, b]`.
pub fn composite_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let x = a + i as f64 * h;
        if i % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 3.0, 1e-12);
        assert!((v - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
        let c = composite_simpson(|x| x * x, 0.0, 1.0, 2);
        assert!((c - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let f = |x: f64| x.sin();
        let a = adaptive_simpson(f, 0.0, 2.0, 1e-10);
        let b = adaptive_simpson(f, 2.0, 0.0, 1e-10);
        assert!((a + b).abs() < 1e-14);
    }

    #[test]
    fn sin4_over_unit_interval() {
        let v = adaptive_simpson(|x| (PI * x).sin().powi(4), 0.0, 1.0, 1e-12);
        assert!((v - 0.375).abs() < 1e-11);
    }

    #[test]
    fn relative_rule_handles_tiny_integrands() {
        let v = adaptive_simpson_rel(|x| (-2.0 * x).exp(), 20.0, 21.0, 1e-10);
        let exact = 0.5 * ((-40.0f64).exp() - (-42.0f64).exp());
        assert!(((v - exact) / exact).abs() < 1e-9);
    }

    #[test]
    fn unit_pieces_match_single_rule() {
        let f = |x: f64| x.cos();
        let a = integrate_unit_pieces(&f, -2.5, 3.25, 1e-12);
        assert!((a - (3.25f64.sin() - (-2.5f64).sin())).abs() < 1e-10);
        let r = integrate_unit_pieces_abs(&f, 3.25, -2.5, 1e-12);
        assert!((a + r).abs() < 1e-10);
    }
}
