use crate::error::{Error, Result};

/// Quantile by linear interpolation between order statistics at position
/// `q·(N−1)` of the sorted sample.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// `(q1, median, q3)` with [`quantile`].
pub fn quartiles(values: &[f64]) -> Result<(f64, f64, f64)> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok((quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pearson {
    pub r: f64,
    /// Two-sided p-value of the t-test for zero correlation.
    pub p: f64,
    pub dof: usize,
}

/// Sample correlation coefficient with a two-sided p-value from Student's t
/// with `N − 2` degrees of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Pearson> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            actual: n,
        });
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantSeries);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let dof = n - 2;
    Ok(Pearson {
        r,
        p: t_test_p(r, dof),
        dof,
    })
}

fn t_test_p(r: f64, dof: usize) -> f64 {
    let one_minus = 1.0 - r * r;
    if one_minus <= 0.0 {
        return 0.0;
    }
    let d = dof as f64;
    let t2 = r * r * d / one_minus;
    // P(|T| ≥ t) = I_{d/(d+t²)}(d/2, 1/2)
    regularized_incomplete_beta(d / 2.0, 0.5, d / (d + t2))
}

/// Natural log of the gamma function (Lanczos, g = 7, nine terms).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `I_x(a, b)` by Lentz's continued fraction, using the symmetry
/// `I_x(a, b) = 1 − I_{1−x}(b, a)` where it converges faster.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, 1.0 - x) / b
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartile_examples() {
        assert_eq!(quartiles(&[1.0, 2.0, 3.0]).unwrap(), (1.5, 2.0, 2.5));
        assert_eq!(quartiles(&[5.0]).unwrap(), (5.0, 5.0, 5.0));
        assert_eq!(quartiles(&[0.3; 7]).unwrap(), (0.3, 0.3, 0.3));
        assert_eq!(quartiles(&[4.0, 1.0, 3.0, 2.0]).unwrap(), (1.75, 2.5, 3.25));
        assert!(quartiles(&[]).is_err());
    }

    #[test]
    fn pearson_extremes() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let p = pearson(&x, &y).unwrap();
        assert!((p.r - 1.0).abs() < 1e-15);
        assert_eq!(p.p, 0.0);
        assert_eq!(p.dof, 8);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap().r + 1.0).abs() < 1e-15);
        assert!(matches!(
            pearson(&x, &[1.0; 10]),
            Err(Error::ConstantSeries)
        ));
        assert!(matches!(
            pearson(&x, &y[..3]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            pearson(&x[..2], &y[..2]),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn gamma_values() {
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn beta_closed_forms() {
        // I_x(1, 1) = x and I_x(a, 1) = x^a.
        for &x in &[0.1, 0.5, 0.93] {
            assert!((regularized_incomplete_beta(1.0, 1.0, x) - x).abs() < 1e-13);
            assert!((regularized_incomplete_beta(3.0, 1.0, x) - x.powi(3)).abs() < 1e-13);
        }
        // One degree of freedom: P(|T| > 1) = 1/2.
        assert!((t_test_p(1.0 / 2f64.sqrt(), 1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn matches_statrs_t_distribution() {
        use statrs::distribution::{ContinuousCDF, StudentsT};
        for dof in [1usize, 2, 5, 30, 400, 23018] {
            let dist = StudentsT::new(0.0, 1.0, dof as f64).unwrap();
            for &r in &[0.001, 0.05, 0.2, 0.5, 0.9, -0.3] {
                let d = dof as f64;
                let t = r * (d / (1.0 - r * r)).sqrt();
                let want = 2.0 * dist.sf(t.abs());
                let got = t_test_p(r, dof);
                assert!(
                    (got - want).abs() < 1e-8,
                    "dof {dof} r {r}: {got} vs {want}"
                );
            }
        }
    }
}
