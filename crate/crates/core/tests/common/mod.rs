//! Test-side oracles, written independently of the library code they check.
#![allow(dead_code)]

use num_complex::Complex64;

// ---------------------------------------------------------------------------
// double-double arithmetic

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(r.hi, r.lo + t.lo)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, err + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from(-q2)));
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }

    pub fn sqrt(self) -> Dd {
        let x = Dd::from(1.0 / self.hi.sqrt());
        let y = self.mul(x);
        // one Newton step on y: y + (a - y²) x / 2
        let corr = self.add(y.mul(y).mul(Dd::from(-1.0))).mul(x).mul(Dd::from(0.5));
        y.add(corr)
    }

    pub fn powi(self, e: u32) -> Dd {
        (0..e).fold(Dd::from(1.0), |acc, _| acc.mul(self))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `e` by its Taylor series in double-double.
pub fn dd_e() -> Dd {
    let mut sum = Dd::from(1.0);
    let mut term = Dd::from(1.0);
    for j in 1..40 {
        term = term.div(Dd::from(j as f64));
        sum = sum.add(term);
    }
    sum
}

pub const DD_PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.2246467991473532e-16,
};

/// Direct (non-logarithmic) double-double evaluation of
/// `τ^{2m} (nNe²)^m / (√(2π) m^{2m+1/2})`, `m = N − n + 1`.
pub fn tail_bound_oracle(n: u32, big_n: u32, tau: f64) -> f64 {
    let m = big_n - n + 1;
    let e = dd_e();
    let tau = Dd::from(tau);
    let num = tau.powi(2 * m).mul(Dd::from((n * big_n) as f64).mul(e).mul(e).powi(m));
    let mm = Dd::from(m as f64);
    let den = Dd::from(2.0).mul(DD_PI).sqrt().mul(mm.powi(2 * m)).mul(mm.sqrt());
    num.div(den).to_f64()
}

// ---------------------------------------------------------------------------
// scalar polynomials, coefficients lowest degree first

pub type Poly = Vec<Complex64>;

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default())
        .collect()
}

pub fn poly_eval(p: &Poly, x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, f64)>) {
        let n = used.len();
        if prefix.len() == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inversions % 2 == 0 { 1.0 } else { -1.0 }));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `det(I xᵏ + Σ_{j<k} C_j xʲ)` by Leibniz expansion over polynomial entries.
/// `coeffs[j]` is `C_j` as row-major `n × n`.
pub fn det_matrix_polynomial(coeffs: &[Vec<Complex64>], n: usize) -> Poly {
    let k = coeffs.len();
    let entry = |r: usize, c: usize| -> Poly {
        let mut p: Poly = coeffs.iter().map(|cj| cj[r * n + c]).collect();
        p.push(if r == c {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
        p
    };
    let mut det: Poly = vec![Complex64::new(0.0, 0.0); n * k + 1];
    for (perm, sign) in permutations(n) {
        let mut term: Poly = vec![Complex64::new(sign, 0.0)];
        for (r, &c) in perm.iter().enumerate() {
            term = poly_mul(&term, &entry(r, c));
        }
        det = poly_add(&det, &term);
    }
    det
}

/// All roots by Aberth–Ehrlich iteration, then Newton polishing.
pub fn poly_roots(p: &Poly) -> Vec<Complex64> {
    let mut p = p.clone();
    while p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    let deg = p.len() - 1;
    let lead = p[deg];
    let monic: Poly = p.iter().map(|c| c / lead).collect();
    let dp: Poly = (1..=deg).map(|i| monic[i] * i as f64).collect();
    // Fujiwara-style radius for the initial circle
    let radius = (0..deg)
        .map(|i| monic[i].norm().powf(1.0 / (deg - i) as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| {
            Complex64::from_polar(
                radius.max(1.0),
                2.0 * std::f64::consts::PI * (j as f64 + 0.25) / deg as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let ratio = poly_eval(&monic, z[i]) / poly_eval(&dp, z[i]);
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            z[i] -= step;
            max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = poly_eval(&dp, *r);
            if d.norm() > 0.0 {
                *r -= poly_eval(&monic, *r) / d;
            }
        }
    }
    z
}

// ---------------------------------------------------------------------------
// assignment

/// Minimum-cost perfect matching (Hungarian algorithm, potentials form).
/// Returns `assign[i] = j`.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    assign
}

/// Largest distance after optimally pairing two equal-size point sets.
pub fn paired_max_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let assign = hungarian(&cost);
    assign.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// statistics

/// Brute-force `sup |F_emp − F|` over the sample points and points just
/// below them, for a CDF with known left limits.
pub fn ks_bruteforce(samples: &[f64], cdf: impl Fn(f64) -> f64, cdf_left: impl Fn(f64) -> f64) -> f64 {
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for &x in samples {
        let at = samples.iter().filter(|&&s| s <= x).count() as f64 / n;
        let below = samples.iter().filter(|&&s| s < x).count() as f64 / n;
        d = d.max((at - cdf(x)).abs()).max((below - cdf_left(x)).abs());
    }
    d
}

#[test]
fn oracle_self_checks() {
    // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
    let p: Poly = [6.0, -7.0, 0.0, 1.0].iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let mut roots: Vec<f64> = poly_roots(&p).iter().map(|z| z.re).collect();
    roots.sort_by(f64::total_cmp);
    for (r, e) in roots.iter().zip([-3.0, 1.0, 2.0]) {
        assert!((r - e).abs() < 1e-12);
    }
    assert_eq!(
        hungarian(&[vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]]),
        vec![1, 0, 2]
    );
    assert!((dd_e().to_f64() - std::f64::consts::E).abs() < 1e-16);
}
