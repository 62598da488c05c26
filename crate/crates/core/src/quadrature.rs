//! Adaptive Gauss–Kronrod quadrature and cumulative arc-length tables.

/// Kronrod nodes (non-negative half) for the 15-point rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the embedded 7-point rule (odd Kronrod nodes).
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` to the requested relative tolerance by
/// recursive bisection of 15-point Gauss–Kronrod panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (val, err) = gk15(f, a, b);
        if err <= tol.max(f64::EPSILON * val.abs()) || depth >= 40 {
            return val;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth + 1) + recurse(f, m, b, 0.5 * tol, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    let (rough, _) = gk15(&f, a, b);
    recurse(&f, a, b, rel_tol * rough.abs().max(f64::MIN_POSITIVE), 0)
}

/// Cumulative arc length of a periodic curve on a uniform panel grid, used
/// for `s(t)` lookups and their inverse.
#[derive(Clone, Debug)]
pub struct ArcLengthTable {
    period: f64,
    /// `cumulative[i]` is the length over `[0, i·h]`; the last entry is the total.
    cumulative: Vec<f64>,
}

const ARC_PANELS: usize = 256;
const ARC_REL_TOL: f64 = 1e-13;

impl ArcLengthTable {
    pub fn new<F: Fn(f64) -> f64>(speed: F, period: f64) -> Self {
        let h = period / ARC_PANELS as f64;
        let mut cumulative = Vec::with_capacity(ARC_PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..ARC_PANELS {
            let a = i as f64 * h;
            acc += integrate(&speed, a, a + h, ARC_REL_TOL);
            cumulative.push(acc);
        }
        Self { period, cumulative }
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    fn panel_width(&self) -> f64 {
        self.period / ARC_PANELS as f64
    }

    /// Length along the curve from parameter 0 to `t` (reduced modulo the period).
    pub fn length_to<F: Fn(f64) -> f64>(&self, speed: F, t: f64) -> f64 {
        let t = t.rem_euclid(self.period);
        let h = self.panel_width();
        let i = ((t / h) as usize).min(ARC_PANELS - 1);
        let a = i as f64 * h;
        self.cumulative[i] + integrate(&speed, a, t, ARC_REL_TOL)
    }

    /// Arc-length fraction `s(t) ∈ [0, 1)`.
    pub fn fraction<F: Fn(f64) -> f64>(&self, speed: F, t: f64) -> f64 {
        let s = self.length_to(speed, t) / self.total();
        if s >= 1.0 {
            0.0
        } else {
            s
        }
    }

    /// Parameter `t` with `fraction(t) = s`, by safeguarded Newton iteration.
    pub fn param_at_fraction<F: Fn(f64) -> f64>(&self, speed: F, s: f64) -> f64 {
        let target = s.rem_euclid(1.0) * self.total();
        let h = self.panel_width();
        let i = match self.cumulative.binary_search_by(|c| c.partial_cmp(&target).unwrap()) {
            Ok(i) => return (i as f64 * h).rem_euclid(self.period),
            Err(i) => i - 1,
        };
        let start = i as f64 * h;
        let (mut lo, mut hi) = (start, start + h);
        let base = self.cumulative[i];
        let mut t = lo + (target - base) / (self.cumulative[i + 1] - base) * h;
        for _ in 0..60 {
            let g = base + integrate(&speed, start, t, ARC_REL_TOL) - target;
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = g / speed(t);
            let mut next = t - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 1e-16 * self.period.max(1.0) {
                t = next;
                break;
            }
            t = next;
        }
        t.rem_euclid(self.period)
    }
}
