//! Clebsch-Gordan coefficients and 6-j symbols (Condon-Shortley phases).
//!
//! Both are evaluated with Racah's single-sum formulas. Every factorial is
//! kept as a vector of prime exponents; the terms of the alternating sum are
//! divided by their common prime content so that the sum itself is taken
//! over exact integers. Floating point only enters in the final product with
//! the (square-rooted) prefactor.

use super::halfint::{triangle, HalfInt};
use crate::{Error, Result};

/// `⟨j1 m1; j2 m2 | j m⟩`.
///
/// Returns zero when `m1 + m2 != m`, when the triangle rule fails or when
/// `|m| > j`; an error when any input projection is invalid for its spin.
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Result<f64> {
    for (spin, proj, name) in [(j1, m1, "m1"), (j2, m2, "m2")] {
        if !proj.is_projection_of(spin) {
            return Err(Error::domain(format!("{name}={proj} is not a projection of j={spin}")));
        }
    }
    if j.twice() < 0 {
        return Err(Error::domain(format!("negative total spin j={j}")));
    }
    if !m.is_projection_of(j) || m1 + m2 != m || !triangle(j1, j2, j) {
        // an out-of-range or wrong-parity M simply does not couple
        return Ok(0.0);
    }
    Ok(cg_unchecked(j1, m1, j2, m2, j, m))
}

/// Clebsch-Gordan coefficient for arguments already known to be valid.
pub(crate) fn cg_unchecked(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    if m1 + m2 != m || !triangle(j1, j2, j) || !m.is_projection_of(j) {
        return 0.0;
    }
    let (j1, m1, j2, m2, j, m) = (j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice());
    let prefactor = Prefactor {
        integers: vec![half(2 * j + 2)],
        num: vec![
            half(j + j1 - j2),
            half(j - j1 + j2),
            half(j1 + j2 - j),
            half(j + m),
            half(j - m),
            half(j1 - m1),
            half(j1 + m1),
            half(j2 - m2),
            half(j2 + m2),
        ],
        den: vec![half(j1 + j2 + j + 2)],
    };
    let k_min = [0, j2 - j - m1, j1 - j + m2].into_iter().max().unwrap();
    let k_max = [j1 + j2 - j, j1 - m1, j2 + m2].into_iter().min().unwrap();
    let mut terms = Vec::new();
    let mut k = k_min;
    while k <= k_max {
        terms.push(Term {
            negative: (k / 2) % 2 == 1,
            num: vec![],
            den: vec![
                half(k),
                half(j1 + j2 - j - k),
                half(j1 - m1 - k),
                half(j2 + m2 - k),
                half(j - j2 + m1 + k),
                half(j - j1 - m2 + k),
            ],
        });
        k += 2;
    }
    racah_sum(&prefactor, &terms)
}

/// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}`; zero when any triad is invalid.
pub fn wigner6j(j1: HalfInt, j2: HalfInt, j3: HalfInt, j4: HalfInt, j5: HalfInt, j6: HalfInt) -> f64 {
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if !triads.iter().all(|&(a, b, c)| triangle(a, b, c)) {
        return 0.0;
    }
    let mut prefactor = Prefactor { integers: vec![], num: vec![], den: vec![] };
    for &(a, b, c) in &triads {
        let (a, b, c) = (a.twice(), b.twice(), c.twice());
        prefactor.num.extend([half(a + b - c), half(a - b + c), half(b + c - a)]);
        prefactor.den.push(half(a + b + c + 2));
    }
    let (j1, j2, j3, j4, j5, j6) = (j1.twice(), j2.twice(), j3.twice(), j4.twice(), j5.twice(), j6.twice());
    let lower = [j1 + j2 + j3, j1 + j5 + j6, j4 + j2 + j6, j4 + j5 + j3];
    let upper = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4];
    let t_min = lower.into_iter().max().unwrap();
    let t_max = upper.into_iter().min().unwrap();
    let mut terms = Vec::new();
    let mut t = t_min;
    while t <= t_max {
        let mut den: Vec<u32> = lower.iter().map(|&a| half(t - a)).collect();
        den.extend(upper.iter().map(|&b| half(b - t)));
        terms.push(Term { negative: (t / 2) % 2 == 1, num: vec![half(t + 2)], den });
        t += 2;
    }
    racah_sum(&prefactor, &terms)
}

/// Converts a doubled, even, non-negative quantity into its integer half.
fn half(twice: i32) -> u32 {
    debug_assert!(twice >= 0 && twice % 2 == 0, "bad factorial argument {twice}/2");
    (twice / 2) as u32
}

/// `sqrt(∏ integers · ∏ num! / ∏ den!)`
struct Prefactor {
    integers: Vec<u32>,
    num: Vec<u32>,
    den: Vec<u32>,
}

/// `±∏ num! / ∏ den!`
struct Term {
    negative: bool,
    num: Vec<u32>,
    den: Vec<u32>,
}

fn racah_sum(prefactor: &Prefactor, terms: &[Term]) -> f64 {
    if terms.is_empty() {
        return 0.0;
    }
    let max_arg = prefactor
        .integers
        .iter()
        .chain(&prefactor.num)
        .chain(&prefactor.den)
        .chain(terms.iter().flat_map(|t| t.num.iter().chain(&t.den)))
        .copied()
        .max()
        .unwrap_or(1)
        .max(2);
    let primes = primes_up_to(max_arg);

    let mut pref = vec![0i32; primes.len()];
    for &n in &prefactor.integers {
        add_integer(&mut pref, &primes, n, 1);
    }
    for &n in &prefactor.num {
        add_factorial(&mut pref, &primes, n, 1);
    }
    for &n in &prefactor.den {
        add_factorial(&mut pref, &primes, n, -1);
    }

    let exps: Vec<Vec<i32>> = terms
        .iter()
        .map(|t| {
            let mut e = vec![0i32; primes.len()];
            for &n in &t.num {
                add_factorial(&mut e, &primes, n, 1);
            }
            for &n in &t.den {
                add_factorial(&mut e, &primes, n, -1);
            }
            e
        })
        .collect();
    let common: Vec<i32> = (0..primes.len()).map(|p| exps.iter().map(|e| e[p]).min().unwrap()).collect();

    // total scale: common^1 · pref^(1/2), expressed in doubled exponents
    let doubled: Vec<i32> = common.iter().zip(&pref).map(|(c, p)| 2 * c + p).collect();
    let scale = prime_product(&primes, &doubled, true);

    match exact_integer_sum(&primes, &exps, &common, terms) {
        Some(sum) => sum as f64 * scale,
        None => {
            let sum: f64 = exps
                .iter()
                .zip(terms)
                .map(|(e, t)| {
                    let reduced: Vec<i32> = e.iter().zip(&common).map(|(a, c)| 2 * (a - c)).collect();
                    let v = prime_product(&primes, &reduced, true);
                    if t.negative {
                        -v
                    } else {
                        v
                    }
                })
                .sum();
            sum * scale
        }
    }
}

/// Sum of the terms divided by their common prime content, in i128.
/// `None` on overflow.
fn exact_integer_sum(primes: &[u32], exps: &[Vec<i32>], common: &[i32], terms: &[Term]) -> Option<i128> {
    let mut total: i128 = 0;
    for (e, t) in exps.iter().zip(terms) {
        let mut v: i128 = 1;
        for ((&p, &a), &c) in primes.iter().zip(e).zip(common) {
            for _ in 0..(a - c) {
                v = v.checked_mul(i128::from(p))?;
            }
        }
        total = if t.negative { total.checked_sub(v)? } else { total.checked_add(v)? };
    }
    Some(total)
}

/// `∏ p^(e/2)` when `halved`, otherwise `∏ p^e`. Multiplication order keeps
/// the running product near one so that large factorials neither overflow
/// nor underflow.
fn prime_product(primes: &[u32], exps: &[i32], halved: bool) -> f64 {
    let factor = |p: u32, e: i32| -> f64 {
        let p = f64::from(p);
        if halved {
            let whole = p.powi(e.div_euclid(2));
            if e.rem_euclid(2) == 1 {
                whole * p.sqrt()
            } else {
                whole
            }
        } else {
            p.powi(e)
        }
    };
    let mut big: Vec<f64> = Vec::new();
    let mut small: Vec<f64> = Vec::new();
    for (&p, &e) in primes.iter().zip(exps) {
        match e.cmp(&0) {
            std::cmp::Ordering::Greater => big.push(factor(p, e)),
            std::cmp::Ordering::Less => small.push(factor(p, e)),
            std::cmp::Ordering::Equal => {}
        }
    }
    let mut acc = 1.0;
    while !big.is_empty() || !small.is_empty() {
        let next = if acc >= 1.0 { small.pop().or_else(|| big.pop()) } else { big.pop().or_else(|| small.pop()) };
        acc *= next.unwrap();
    }
    acc
}

fn primes_up_to(n: u32) -> Vec<u32> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut primes = Vec::new();
    for k in 2..=n {
        if sieve[k] {
            primes.push(k as u32);
            let mut q = k * k;
            while q <= n {
                sieve[q] = false;
                q += k;
            }
        }
    }
    primes
}

/// Legendre's formula: exponent of each prime in `n!`.
fn add_factorial(exps: &mut [i32], primes: &[u32], n: u32, sign: i32) {
    for (e, &p) in exps.iter_mut().zip(primes) {
        if p > n {
            break;
        }
        let mut q = n / p;
        while q > 0 {
            *e += sign * q as i32;
            q /= p;
        }
    }
}

fn add_integer(exps: &mut [i32], primes: &[u32], mut n: u32, sign: i32) {
    for (e, &p) in exps.iter_mut().zip(primes) {
        while n > 0 && n.is_multiple_of(p) {
            *e += sign;
            n /= p;
        }
        if n == 1 {
            break;
        }
    }
    debug_assert!(n <= 1, "prime table too short");
}
