//! Wigner small-d functions d^ℓ_{mm'}(β) = ⟨ℓ m| e^{−iβJ_y} |ℓ m'⟩.

use nalgebra::DMatrix;

fn ln_factorial(k: i64) -> f64 {
    (1..=k).map(|v| (v as f64).ln()).sum()
}

/// Explicit sum formula; used to seed the recursion.
fn wigner_d_sum(l: i64, m: i64, mp: i64, beta: f64) -> f64 {
    let (s_half, c_half) = (0.5 * beta).sin_cos();
    let pre = 0.5
        * (ln_factorial(l + m) + ln_factorial(l - m) + ln_factorial(l + mp) + ln_factorial(l - mp));
    let s_min = 0.max(mp - m);
    let s_max = (l + mp).min(l - m);
    let mut total = 0.0;
    for s in s_min..=s_max {
        let denom = ln_factorial(l + mp - s) + ln_factorial(s) + ln_factorial(m - mp + s) + ln_factorial(l - m - s);
        let sign = if (m - mp + s) % 2 == 0 { 1.0 } else { -1.0 };
        let cos_pow = (2 * l + mp - m - 2 * s) as i32;
        let sin_pow = (m - mp + 2 * s) as i32;
        total += sign * (pre - denom).exp() * c_half.powi(cos_pow) * s_half.powi(sin_pow);
    }
    total
}

/// d^ℓ_{mm'}(β) for every ℓ ≤ `l_max`, by the three-term recursion in ℓ.
/// Entry `[ℓ][(m + ℓ, m' + ℓ)]`.
pub fn wigner_d_table(l_max: usize, beta: f64) -> Vec<DMatrix<f64>> {
    let lm = l_max as i64;
    let mut table: Vec<DMatrix<f64>> = (0..=l_max).map(|l| DMatrix::zeros(2 * l + 1, 2 * l + 1)).collect();
    let cb = beta.cos();
    for m in -lm..=lm {
        for mp in -lm..=lm {
            let j0 = m.abs().max(mp.abs());
            let mut prev = 0.0;
            let mut cur = wigner_d_sum(j0, m, mp, beta);
            table[j0 as usize][((m + j0) as usize, (mp + j0) as usize)] = cur;
            let mut start = j0;
            if j0 == 0 && lm >= 1 {
                prev = cur;
                cur = wigner_d_sum(1, m, mp, beta);
                table[1][((m + 1) as usize, (mp + 1) as usize)] = cur;
                start = 1;
            }
            for j in start..lm {
                let jf = j as f64;
                let (mf, mpf) = (m as f64, mp as f64);
                let up = (((jf + 1.0).powi(2) - mf * mf) * ((jf + 1.0).powi(2) - mpf * mpf)).sqrt();
                let down = ((jf * jf - mf * mf) * (jf * jf - mpf * mpf)).sqrt();
                let next = ((2.0 * jf + 1.0) * (jf * (jf + 1.0) * cb - mf * mpf) * cur - (jf + 1.0) * down * prev)
                    / (jf * up);
                prev = cur;
                cur = next;
                let jn = j + 1;
                table[jn as usize][((m + jn) as usize, (mp + jn) as usize)] = cur;
            }
        }
    }
    table
}

/// d^ℓ(β) as a (2ℓ+1)×(2ℓ+1) matrix indexed by (m + ℓ, m' + ℓ).
pub fn wigner_d(l: usize, beta: f64) -> DMatrix<f64> {
    wigner_d_table(l, beta).pop().expect("table has ℓ + 1 entries")
}
