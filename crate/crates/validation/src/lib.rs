//! Independent reference values for checking polariscope.
//!
//! Coupling coefficients from the textbook Racah sums over plain `f64`
//! factorials. Every angular momentum argument is given doubled, so `3`
//! means 3/2.

fn fact(n: i32) -> f64 {
    assert!(n >= 0, "negative factorial argument {n}");
    (1..=n).map(f64::from).product()
}

fn delta(a: i32, b: i32, c: i32) -> f64 {
    (fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((-a + b + c) / 2) / fact((a + b + c) / 2 + 1)).sqrt()
}

fn triad_ok(a: i32, b: i32, c: i32) -> bool {
    (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// `{a b c; d e f}` with every argument doubled.
pub fn sixj(a: i32, b: i32, c: i32, d: i32, e: i32, f: i32) -> f64 {
    if !(triad_ok(a, b, c) && triad_ok(a, e, f) && triad_ok(d, b, f) && triad_ok(d, e, c)) {
        return 0.0;
    }
    let lo = [a + b + c, a + e + f, d + b + f, d + e + c].into_iter().max().unwrap() / 2;
    let hi = [a + b + d + e, b + c + e + f, c + a + f + d].into_iter().min().unwrap() / 2;
    let mut sum = 0.0;
    for t in lo..=hi {
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * fact(t + 1)
            / (fact(t - (a + b + c) / 2)
                * fact(t - (a + e + f) / 2)
                * fact(t - (d + b + f) / 2)
                * fact(t - (d + e + c) / 2)
                * fact((a + b + d + e) / 2 - t)
                * fact((b + c + e + f) / 2 - t)
                * fact((c + a + f + d) / 2 - t));
    }
    delta(a, b, c) * delta(a, e, f) * delta(d, b, f) * delta(d, e, c) * sum
}

/// `⟨j1 m1; j2 m2 | j m⟩` with every argument doubled.
pub fn cg(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
    if m1 + m2 != m || !triad_ok(j1, j2, j) || m.abs() > j || m1.abs() > j1 || m2.abs() > j2 {
        return 0.0;
    }
    let h = |x: i32| x / 2;
    let pre = (f64::from(j + 1) * fact(h(j + j1 - j2)) * fact(h(j - j1 + j2)) * fact(h(j1 + j2 - j))
        / fact(h(j1 + j2 + j) + 1))
    .sqrt()
        * (fact(h(j + m)) * fact(h(j - m)) * fact(h(j1 - m1)) * fact(h(j1 + m1)) * fact(h(j2 - m2)) * fact(h(j2 + m2)))
            .sqrt();
    let mut sum = 0.0;
    for k in 0..=h(j1 + j2 - j) {
        let args = [h(j1 + j2 - j) - k, h(j1 - m1) - k, h(j2 + m2) - k, h(j - j2 + m1) + k, h(j - j1 - m2) + k];
        if args.iter().any(|&x| x < 0) {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / (fact(k) * args.iter().map(|&x| fact(x)).product::<f64>());
    }
    pre * sum
}
