//! Root isolation for smooth functions of the wall parameter.
//!
//! Both billiard maps reduce to "find every zero of a smooth function of the
//! wall parameter": the focal equation of a parabola for the Kepler arc, and
//! the line equation for a straight chord. Intervals are discarded with a
//! second-order Taylor bound built from a global bound on `|f''|`, so a root
//! is only missed if two roots sit closer than `min_width` (a tangency).

/// A bracket `[lo, hi]` containing a sign change (or an exact zero when
/// `lo == hi`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
}

impl Bracket {
    /// Whether `x` lies inside the bracket at least `margin` from both ends.
    pub fn holds(&self, x: f64, margin: f64) -> bool {
        let (a, b) = if self.lo < self.hi { (self.lo, self.hi) } else { (self.hi, self.lo) };
        x - a > margin && b - x > margin
    }
}

/// Output of [`isolate`]: sign-change brackets in increasing parameter order
/// and the locations of suspected grazing touches.
#[derive(Clone, Debug, Default)]
pub struct RootScan {
    pub brackets: Vec<Bracket>,
    pub touches: Vec<f64>,
}

/// Controls for [`isolate`].
#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub initial_intervals: usize,
    /// Intervals narrower than this are not subdivided further.
    pub min_width: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { initial_intervals: 16, min_width: 1e-10 }
    }
}

fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Isolates every simple zero of `f` on `[a, b]`.
///
/// `f` returns the value and first derivative; `second_bound` must bound
/// `|f''|` on the whole interval.
pub fn isolate<F>(f: F, a: f64, b: f64, second_bound: f64, opts: ScanOptions) -> RootScan
where
    F: Fn(f64) -> (f64, f64),
{
    let n = opts.initial_intervals.max(1);
    let width = (b - a) / n as f64;
    let mut scan = RootScan::default();
    let mut left = (a, f(a));
    if left.1 .0 == 0.0 {
        scan.brackets.push(Bracket { lo: a, hi: a, f_lo: 0.0 });
    }
    for i in 1..=n {
        let x = if i == n { b } else { a + i as f64 * width };
        let right = (x, f(x));
        subdivide(&f, left, right, second_bound, opts.min_width, &mut scan);
        if right.1 .0 == 0.0 && i < n {
            scan.brackets.push(Bracket { lo: x, hi: x, f_lo: 0.0 });
        }
        left = right;
    }
    scan
}

type Node = (f64, (f64, f64));

fn subdivide<F>(f: &F, left: Node, right: Node, m2: f64, min_width: f64, scan: &mut RootScan)
where
    F: Fn(f64) -> (f64, f64),
{
    let (xa, (fa, da)) = left;
    let (xb, (fb, db)) = right;
    let h = 0.5 * (xb - xa);
    // signs just inside the interval
    let sa = if fa != 0.0 { sign(fa) } else { sign(da) };
    let sb = if fb != 0.0 { sign(fb) } else { -sign(db) };
    let slack = 0.5 * m2 * h * h;
    let monotone = da.abs() > m2 * h && db.abs() > m2 * h && sign(da) == sign(db);

    if sa == sb {
        let left_clear = sa * fa + sa * da * h - slack > 0.0;
        let right_clear = sb * fb - sb * db * h - slack > 0.0;
        if monotone || (left_clear && right_clear) {
            return;
        }
    } else if monotone {
        scan.brackets.push(Bracket { lo: xa, hi: xb, f_lo: fa });
        return;
    }

    if xb - xa < min_width {
        if sa != sb {
            scan.brackets.push(Bracket { lo: xa, hi: xb, f_lo: fa });
        } else {
            scan.touches.push(0.5 * (xa + xb));
        }
        return;
    }

    let xm = 0.5 * (xa + xb);
    let mid = (xm, f(xm));
    subdivide(f, left, mid, m2, min_width, scan);
    if mid.1 .0 == 0.0 {
        scan.brackets.push(Bracket { lo: xm, hi: xm, f_lo: 0.0 });
    }
    subdivide(f, mid, right, m2, min_width, scan);
}

/// Refines a bracket with safeguarded Newton steps until a step or the
/// bracket is below `tol`; a bracket that shrinks to `tol` gets one final
/// Newton polish clamped to it.
pub fn refine<F>(f: F, bracket: Bracket, tol: f64) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    if lo == hi {
        return lo;
    }
    let s_lo = sign(bracket.f_lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if sign(fx) == s_lo {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo).abs() <= tol {
            break;
        }
        let newton = x - fx / dx;
        let inside = if lo < hi { newton > lo && newton < hi } else { newton > hi && newton < lo };
        if inside && dx != 0.0 && (newton - x).abs() <= tol {
            return newton;
        }
        x = if inside && dx != 0.0 { newton } else { 0.5 * (lo + hi) };
    }
    let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let mid = 0.5 * (lo + hi);
    let (fm, dm) = f(mid);
    if dm != 0.0 {
        (mid - fm / dm).clamp(a, b)
    } else {
        mid
    }
}
