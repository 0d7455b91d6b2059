//! Independent oracles shared by the integration tests. Nothing here calls
//! into the closed forms under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed Gauss–Legendre rule mapped to `[a, b]`.
pub struct FixedRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl FixedRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    /// Mapped nodes and weights on `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

const GK_XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const G_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * GK_WK[7];
    let mut gauss = fc * G_WG[3];
    for j in 0..7 {
        let x = h * GK_XK[j];
        let s = f(c - x) + f(c + x);
        kron += GK_WK[j] * s;
        if j % 2 == 1 {
            gauss += G_WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature to absolute tolerance `tol`.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 || (b - a) < 1e-14 {
            return v;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth - 1) + recurse(f, m, b, 0.5 * tol, depth - 1)
    }
    recurse(f, a, b, tol, 40)
}

/// Adaptive Gauss–Kronrod to relative tolerance `rel`, measured against
/// the magnitude of the integral itself.
pub fn adaptive_relative(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || err <= 1e-15 * v.abs() || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth - 1) + recurse(f, m, b, 0.5 * tol, depth - 1)
    }
    let coarse = recurse(f, a, b, 1e-3 * gk15(f, a, b).0.abs(), 20);
    recurse(f, a, b, rel * coarse.abs(), 50)
}

/// `ln Γ(n)` for positive integers, by summing logs.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Beta density with integer parameters, normalizer from factorials.
pub struct BetaPdf {
    a: f64,
    b: f64,
    ln_norm: f64,
}

impl BetaPdf {
    pub fn new(alpha: u64, beta: u64) -> Self {
        let ln_norm = ln_factorial(alpha + beta - 1) - ln_factorial(alpha - 1) - ln_factorial(beta - 1);
        Self {
            a: alpha as f64 - 1.0,
            b: beta as f64 - 1.0,
            ln_norm,
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        let la = if self.a == 0.0 { 0.0 } else { self.a * x.ln() };
        let lb = if self.b == 0.0 { 0.0 } else { self.b * (1.0 - x).ln() };
        (self.ln_norm + la + lb).exp()
    }
}

/// `Pr(φ_B > γ φ_A)` by nested adaptive quadrature:
/// `∫ f_A(x) ∫_{min(γx,1)}^1 f_B(y) dy dx`.
pub fn pr_scaled_adaptive(a: (u64, u64), b: (u64, u64), gamma: f64, tol: f64) -> f64 {
    let fa = BetaPdf::new(a.0, a.1);
    let fb = BetaPdf::new(b.0, b.1);
    let upper = (1.0 / gamma).min(1.0);
    let outer = |x: f64| {
        let lo = (gamma * x).min(1.0);
        fa.at(x) * adaptive(&|y| fb.at(y), lo, 1.0, tol * 1e-2)
    };
    adaptive(&outer, 0.0, upper, tol)
}

/// Exact-rational `₂F₁(-m, b; c; z)` by term-by-term summation.
pub fn hyp2f1_exact(m: u64, b: &BigRational, c: &BigRational, z: &BigRational) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for n in 0..m {
        let nn = BigRational::from_integer(BigInt::from(n));
        let mm = BigRational::from_integer(BigInt::from(m));
        // ratio of consecutive terms: (n - m)(b + n) z / ((c + n)(n + 1))
        term = term * (&nn - &mm) * (b + &nn) * z
            / ((c + &nn) * (&nn + BigRational::one()));
        sum += &term;
    }
    sum
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("finite rational")
}

/// Dyadic rational `k / 2^bits` closest to `x`; makes a float argument exact.
pub fn dyadic(x: f64, bits: u32) -> (f64, BigRational) {
    let scale = (1u64 << bits) as f64;
    let k = (x * scale).round() as i64;
    (
        k as f64 / scale,
        BigRational::new(BigInt::from(k), BigInt::from(1u64 << bits)),
    )
}

/// Exact binomial coefficient.
pub fn binomial_exact(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Fraction of `walks` gambler's-ruin walks that reach `+d_star` before
/// `n_max` total steps, with up-step probability `p`.
pub fn simulate_walks(n_max: u64, d_star: u64, p: f64, walks: u64, seed: u64) -> f64 {
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let mut wins = 0u64;
    for _ in 0..walks {
        let mut d: i64 = 0;
        for _ in 0..n_max {
            d += if rng.random::<f64>() < p { 1 } else { -1 };
            if d >= d_star as i64 {
                wins += 1;
                break;
            }
        }
    }
    wins as f64 / walks as f64
}
