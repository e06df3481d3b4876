//! Small numerical helpers: compensated summation, log-space binomials and
//! adaptive Gauss–Kronrod quadrature.

use statrs::function::gamma::ln_gamma;

/// Neumaier's compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// ln n!.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// ln C(n, k).
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

// 15-point Kronrod nodes on [0, 1] (symmetric), with the embedded 7-point Gauss rule.
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
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive G7–K15 quadrature of f over [a, b]; either bound may be infinite.
/// Intervals are bisected until the summed error estimate is below `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    integrate_dyn(&f, a, b, abs_tol)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(f, a, b, abs_tol),
        // x = a + t/(1−t), t ∈ [0, 1)
        (true, false) => adaptive(
            &|t: f64| {
                if t >= 1.0 {
                    return 0.0;
                }
                let u = 1.0 - t;
                f(a + t / u) / (u * u)
            },
            0.0,
            1.0,
            abs_tol,
        ),
        (false, true) => integrate_dyn(&|x| f(-x), -b, f64::INFINITY, abs_tol),
        (false, false) => {
            integrate_dyn(f, 0.0, f64::INFINITY, abs_tol / 2.0)
                + integrate_dyn(&|x| f(-x), 0.0, f64::INFINITY, abs_tol / 2.0)
        }
    }
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    let mut intervals = vec![(a, b, kronrod15(f, a, b))];
    for _ in 0..2000 {
        let err: f64 = intervals.iter().map(|(_, _, (_, e))| e).sum();
        if err <= abs_tol {
            break;
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| (x.1).2 .1.total_cmp(&(y.1).2 .1))
            .expect("nonempty");
        let (lo, hi, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        intervals.push((lo, mid, kronrod15(f, lo, mid)));
        intervals.push((mid, hi, kronrod15(f, mid, hi)));
    }
    intervals
        .iter()
        .map(|(_, _, (v, _))| *v)
        .collect::<CompensatedSum>()
        .value()
}
