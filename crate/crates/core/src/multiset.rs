//! Tolerance-aware comparison of small complex multisets.

use num_complex::Complex64;

fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0)
}

/// True when `a` and `b` agree as multisets, matching elements up to a
/// relative tolerance. Exhaustive backtracking; intended for sizes up to ~10.
pub fn multiset_eq(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    assign(a, b, tol, &mut used)
}

fn assign(a: &[Complex64], b: &[Complex64], tol: f64, used: &mut [bool]) -> bool {
    let Some((&x, rest)) = a.split_first() else {
        return true;
    };
    for j in 0..b.len() {
        if !used[j] && close(x, b[j], tol) {
            used[j] = true;
            if assign(rest, b, tol, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Canonical order: decreasing modulus, then increasing argument in `[0, 2π)`.
pub fn canonical_sort(values: &mut [Complex64]) {
    values.sort_by(|x, y| {
        y.norm()
            .partial_cmp(&x.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                arg_0_2pi(*x)
                    .partial_cmp(&arg_0_2pi(*y))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
}

/// Argument normalised to `[0, 2π)`.
pub fn arg_0_2pi(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backtracks_past_greedy_choice() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-10, 0.0)];
        let b = [Complex64::new(1.0 + 1e-10, 0.0), Complex64::new(1.0 - 5e-11, 0.0)];
        assert!(multiset_eq(&a, &b, 1e-9));
        assert!(!multiset_eq(&a, &b[..1], 1e-9));
        let c = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        assert!(!multiset_eq(&a, &c, 1e-9));
    }
}
