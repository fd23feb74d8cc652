//! Cox–de Boor evaluation of B-spline basis functions and their derivatives.

/// Values and derivatives of the `p + 1` B-splines of degree `p` that are
/// nonzero on the knot span `[knots[span], knots[span + 1])`.
///
/// On return `ders[k * (p + 1) + j]` is the `k`-th derivative of
/// `B_{span - p + j}` at `x`, for `k = 0..=nd`. Derivatives above `p` are zero.
/// The knot vector must extend at least `p` entries beyond the span on each
/// side and the span must have positive length.
pub fn basis_derivatives(knots: &[f64], span: usize, p: usize, x: f64, nd: usize, ders: &mut [f64]) {
    let w = p + 1;
    debug_assert!(ders.len() >= (nd + 1) * w);
    debug_assert!(span >= p && span + p < knots.len());
    debug_assert!(knots[span + 1] > knots[span]);

    // ndu stores basis values in its upper triangle and knot differences in
    // the lower triangle.
    let mut ndu = vec![0.0; w * w];
    let mut left = vec![0.0; w];
    let mut right = vec![0.0; w];
    ndu[0] = 1.0;
    for j in 1..=p {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j * w + r] = right[r + 1] + left[j - r];
            let temp = ndu[r * w + j - 1] / ndu[j * w + r];
            ndu[r * w + j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j * w + j] = saved;
    }

    for v in ders.iter_mut().take((nd + 1) * w) {
        *v = 0.0;
    }
    for j in 0..=p {
        ders[j] = ndu[j * w + p];
    }
    let nk = nd.min(p);
    let mut a = vec![0.0; 2 * w];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0] = 1.0;
        for k in 1..=nk {
            let mut d = 0.0;
            let rk = r as isize - k as isize;
            let pk = p - k;
            if r >= k {
                let rk = rk as usize;
                a[s2 * w] = a[s1 * w] / ndu[(pk + 1) * w + rk];
                d = a[s2 * w] * ndu[rk * w + pk];
            }
            let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2 * w + j] = (a[s1 * w + j] - a[s1 * w + j - 1]) / ndu[(pk + 1) * w + idx];
                d += a[s2 * w + j] * ndu[idx * w + pk];
            }
            if r <= pk {
                a[s2 * w + k] = -a[s1 * w + k - 1] / ndu[(pk + 1) * w + r];
                d += a[s2 * w + k] * ndu[r * w + pk];
            }
            ders[k * w + r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut factor = p as f64;
    for k in 1..=nk {
        for j in 0..=p {
            ders[k * w + j] *= factor;
        }
        factor *= (p - k) as f64;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_functions() {
        let knots = [0.0, 0.0, 1.0, 2.0, 2.0];
        let mut d = [0.0; 4];
        basis_derivatives(&knots, 1, 1, 0.25, 1, &mut d);
        assert!((d[0] - 0.75).abs() < 1e-15);
        assert!((d[1] - 0.25).abs() < 1e-15);
        assert!((d[2] + 1.0).abs() < 1e-15);
        assert!((d[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bernstein_on_single_clamped_element() {
        // Clamped cubic on [0,1] is the Bernstein basis.
        let knots = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        let x: f64 = 0.3;
        let mut d = [0.0; 12];
        basis_derivatives(&knots, 3, 3, x, 2, &mut d);
        let y = 1.0 - x;
        let expect = [y * y * y, 3.0 * x * y * y, 3.0 * x * x * y, x * x * x];
        let dexpect = [
            -3.0 * y * y,
            3.0 * y * y - 6.0 * x * y,
            6.0 * x * y - 3.0 * x * x,
            3.0 * x * x,
        ];
        let ddexpect = [6.0 * y, -12.0 * y + 6.0 * x, 6.0 * y - 12.0 * x, 6.0 * x];
        for j in 0..4 {
            assert!((d[j] - expect[j]).abs() < 1e-14);
            assert!((d[4 + j] - dexpect[j]).abs() < 1e-13);
            assert!((d[8 + j] - ddexpect[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_above_degree_vanish() {
        let knots = [0.0, 0.0, 1.0, 2.0, 2.0];
        let mut d = [1.0; 6];
        basis_derivatives(&knots, 1, 1, 0.5, 2, &mut d);
        assert_eq!(&d[4..6], &[0.0, 0.0]);
    }
}
