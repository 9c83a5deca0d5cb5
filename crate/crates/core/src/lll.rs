//! Exact integral LLL reduction (all Gram-Schmidt data kept as integers).

use rug::ops::DivRounding;
use rug::Integer;

use crate::error::{Error, Result};

/// LLL-reduces the rows of `basis` in place with Lovasz constant
/// `delta_num / delta_den`. Rows must be linearly independent.
pub fn lll_reduce(basis: &mut [Vec<Integer>], delta_num: u32, delta_den: u32) -> Result<()> {
    let n = basis.len();
    if n <= 1 {
        return Ok(());
    }
    let dot = |x: &[Integer], y: &[Integer]| -> Integer { x.iter().zip(y).map(|(a, b)| Integer::from(a * b)).sum() };

    // d[i] is the Gram determinant of the first i rows; lambda[k][j] = d[j+1] mu_kj
    let mut d = vec![Integer::new(); n + 1];
    let mut lambda = vec![vec![Integer::new(); n]; n];
    d[0] = Integer::from(1);
    d[1] = dot(&basis[0], &basis[0]);
    if d[1].is_zero() {
        return Err(Error::Precondition("LLL input has a zero row".into()));
    }
    let mut k = 1usize;
    let mut k_max = 0usize;

    while k < n {
        if k > k_max {
            k_max = k;
            for j in 0..=k {
                let mut u = dot(&basis[k], &basis[j]);
                for i in 0..j {
                    u = (Integer::from(&d[i + 1] * &u) - Integer::from(&lambda[k][i] * &lambda[j][i])) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Precondition("LLL input rows are dependent".into()));
                    }
                    d[k + 1] = u;
                }
            }
        }
        size_reduce(basis, &mut lambda, &d, k, k - 1);
        let lhs = Integer::from(&d[k + 1] * &d[k - 1]) * delta_den;
        let rhs = Integer::from(d[k].square_ref()) * delta_num
            - Integer::from(lambda[k][k - 1].square_ref()) * delta_den;
        if lhs < rhs {
            swap_rows(basis, &mut lambda, &mut d, k, k_max);
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                size_reduce(basis, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(())
}

fn size_reduce(basis: &mut [Vec<Integer>], lambda: &mut [Vec<Integer>], d: &[Integer], k: usize, l: usize) {
    let twice = Integer::from(&lambda[k][l] * 2u32);
    if twice.clone().abs() <= d[l + 1] {
        return;
    }
    // q = round(lambda / d)
    let q = (twice + &d[l + 1]).div_floor(&Integer::from(&d[l + 1] * 2u32));
    let (head, tail) = basis.split_at_mut(k);
    for (x, y) in tail[0].iter_mut().zip(&head[l]) {
        *x -= Integer::from(&q * y);
    }
    lambda[k][l] -= Integer::from(&q * &d[l + 1]);
    for i in 0..l {
        let delta = Integer::from(&q * &lambda[l][i]);
        lambda[k][i] -= delta;
    }
}

fn swap_rows(basis: &mut [Vec<Integer>], lambda: &mut [Vec<Integer>], d: &mut [Integer], k: usize, k_max: usize) {
    basis.swap(k, k - 1);
    for j in 0..k - 1 {
        let tmp = lambda[k][j].clone();
        lambda[k][j] = std::mem::replace(&mut lambda[k - 1][j], tmp);
    }
    let lam = lambda[k][k - 1].clone();
    let b = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(lam.square_ref())) / &d[k];
    for i in k + 1..=k_max {
        let t = lambda[i][k].clone();
        lambda[i][k] = (Integer::from(&d[k + 1] * &lambda[i][k - 1]) - Integer::from(&lam * &t)) / &d[k];
        lambda[i][k - 1] = (Integer::from(&b * &t) + Integer::from(&lam * &lambda[i][k])) / &d[k + 1];
    }
    d[k] = b;
}
