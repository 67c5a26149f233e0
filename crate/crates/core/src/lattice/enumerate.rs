//! Exact enumeration of integer points on a shifted quadric: all z ∈ ℤⁿ with
//! (z + μ)ᵀ G (z + μ) = t for positive definite rational G.
//!
//! Fincke–Pohst-style depth-first search with exact rational interval bounds;
//! floating point only seeds the interval endpoints, which are then corrected
//! by exact comparisons. The innermost level solves its quadratic directly.

use crate::arith::isqrt;
use crate::error::{Error, Result};
use crate::{Int, Rat};
use num_traits::{Signed, ToPrimitive, Zero};

/// Q(x) = Σᵢ dᵢ (xᵢ + Σ_{j>i} r[i][j]·xⱼ)² with dᵢ > 0.
struct Ldl {
    d: Vec<Rat>,
    r: Vec<Vec<Rat>>,
}

fn ldl(g: &[Vec<Rat>]) -> Result<Ldl> {
    let n = g.len();
    let mut q: Vec<Vec<Rat>> = g.to_vec();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return Err(Error::GramNotPositiveDefinite);
        }
        for j in i + 1..n {
            let raw = q[i][j];
            q[j][i] = raw;
            q[i][j] = raw / q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = q[k][i] * q[i][l];
                q[k][l] -= t;
            }
        }
    }
    let d = (0..n).map(|i| q[i][i]).collect();
    let r = (0..n)
        .map(|i| (0..n).map(|j| if j > i { q[i][j] } else { Rat::zero() }).collect())
        .collect();
    Ok(Ldl { d, r })
}

/// √x for rational x ≥ 0, when exact.
fn rational_sqrt(x: Rat) -> Result<Option<Rat>> {
    if x.is_negative() {
        return Ok(None);
    }
    let (n, d) = (x.numer().abs(), *x.denom());
    let sn = isqrt(n)?;
    let sd = isqrt(d)?;
    if sn * sn == n && sd * sd == d {
        Ok(Some(Rat::new(sn, sd)))
    } else {
        Ok(None)
    }
}

/// The (possibly empty) window of integers z with d·(z + w)² ≤ rem.
///
/// The satisfying integers form a contiguous interval around −w; a float seed
/// guesses each endpoint and exact comparisons correct it.
fn integer_window(d: Rat, w: Rat, rem: Rat) -> Option<(Int, Int)> {
    if rem.is_negative() {
        return None;
    }
    let ok = |z: Int| {
        let y = Rat::from_integer(z) + w;
        d * y * y <= rem
    };
    // Integers flanking the interval center −w.
    let c_lo = (-w).floor().to_integer();
    let c_hi = c_lo + 1;
    if !ok(c_lo) && !ok(c_hi) {
        return None;
    }
    let seed = (rem / d).to_f64().unwrap_or(0.0).max(0.0).sqrt();
    let wf = w.to_f64().unwrap_or(0.0);

    // Upper endpoint: start at max(guess, c_hi); climbing or descending from
    // there terminates because the window is nonempty and bounded.
    let mut hi = ((seed - wf).floor() as Int).max(c_hi);
    if ok(hi) {
        while ok(hi + 1) {
            hi += 1;
        }
    } else {
        while !ok(hi) {
            hi -= 1;
        }
    }
    let mut lo = ((-seed - wf).ceil() as Int).min(c_lo);
    if ok(lo) {
        while ok(lo - 1) {
            lo -= 1;
        }
    } else {
        while !ok(lo) {
            lo += 1;
        }
    }
    Some((lo, hi))
}

/// All z ∈ ℤⁿ with (z + μ)ᵀ G (z + μ) = t, sorted lexicographically.
pub(crate) fn enumerate_quadric(g: &[Vec<Rat>], mu: &[Rat], t: Rat) -> Result<Vec<Vec<Int>>> {
    let n = g.len();
    if n == 0 {
        return Ok(if t.is_zero() { vec![vec![]] } else { vec![] });
    }
    if t.is_negative() {
        return Ok(vec![]);
    }
    let ldl = ldl(g)?;
    let mut out = Vec::new();
    let mut z = vec![0 as Int; n];
    let mut y = vec![Rat::zero(); n]; // y_j = z_j + μ_j for assigned levels

    fn descend(
        level: usize,
        rem: Rat,
        ldl: &Ldl,
        mu: &[Rat],
        z: &mut Vec<Int>,
        y: &mut Vec<Rat>,
        out: &mut Vec<Vec<Int>>,
    ) -> Result<()> {
        let n = ldl.d.len();
        // Center contribution from the already-assigned outer levels.
        let mut c = Rat::zero();
        for j in level + 1..n {
            c += ldl.r[level][j] * y[j];
        }
        let w = mu[level] + c;
        if level == 0 {
            // Solve d₀·(z + w)² = rem exactly.
            let rhs = rem / ldl.d[0];
            if let Some(root) = rational_sqrt(rhs)? {
                let mut push = |val: Rat, z: &mut Vec<Int>, out: &mut Vec<Vec<Int>>| {
                    let cand = val - w;
                    if cand.is_integer() {
                        z[0] = cand.to_integer();
                        out.push(z.clone());
                    }
                };
                push(root, z, out);
                if !root.is_zero() {
                    push(-root, z, out);
                }
            }
            return Ok(());
        }
        if let Some((lo, hi)) = integer_window(ldl.d[level], w, rem) {
            for zi in lo..=hi {
                z[level] = zi;
                y[level] = Rat::from_integer(zi) + mu[level];
                let term = ldl.d[level] * (y[level] + c) * (y[level] + c);
                descend(level - 1, rem - term, ldl, mu, z, y, out)?;
            }
        }
        Ok(())
    }

    descend(n - 1, t, &ldl, mu, &mut z, &mut y, &mut out)?;
    out.sort();
    Ok(out)
}

/// Exact solve of G·x = b over the rationals (G square nonsingular).
pub(crate) fn solve_rational(g: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    let n = g.len();
    let mut a: Vec<Vec<Rat>> = g.iter().cloned().collect();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::Internal("singular system in solve_rational"))?;
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = a[col][col];
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col] / p;
                for c in col..n {
                    let t = f * a[col][c];
                    a[r][c] -= t;
                }
                let t = f * rhs[col];
                rhs[r] -= t;
            }
        }
    }
    Ok((0..n).map(|i| rhs[i] / a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: Int) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn identity_norm_counts() {
        // Sum of two squares equal to 5: eight points.
        let g = vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]];
        let mu = vec![Rat::zero(), Rat::zero()];
        let pts = enumerate_quadric(&g, &mu, rat(5)).unwrap();
        assert_eq!(pts.len(), 8);
        // Norm 3 misses.
        assert!(enumerate_quadric(&g, &mu, rat(3)).unwrap().is_empty());
        // Norm 0 is only the origin.
        assert_eq!(enumerate_quadric(&g, &mu, rat(0)).unwrap(), vec![vec![0, 0]]);
    }

    #[test]
    fn shifted_center() {
        // (z + 1/2)² = 1/4 ⟺ z ∈ {0, -1}.
        let g = vec![vec![rat(1)]];
        let mu = vec![Rat::new(1, 2)];
        let pts = enumerate_quadric(&g, &mu, Rat::new(1, 4)).unwrap();
        assert_eq!(pts, vec![vec![-1], vec![0]]);
    }

    #[test]
    fn matches_box_scan_on_random_gram() {
        let mut state: u64 = 7;
        let mut next = move |m: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % m
        };
        for _ in 0..40 {
            let n = 2 + (next(3) as usize);
            // Diagonal dominance with margin 1: λ_min ≥ 1, so |zᵢ|² ≤ t.
            let mut g = vec![vec![Rat::zero(); n]; n];
            for i in 0..n {
                for j in 0..i {
                    let v = Rat::new(next(5) as Int - 2, 2);
                    g[i][j] = v;
                    g[j][i] = v;
                }
            }
            for i in 0..n {
                g[i][i] = rat(4 + next(5) as Int);
            }
            let mu = vec![Rat::zero(); n];
            for t in [1, 4, 9, 12] {
                let got = enumerate_quadric(&g, &mu, rat(t)).unwrap();
                // Oracle: scan the box |zᵢ| ≤ √t + 1.
                let mut want = Vec::new();
                let bound = crate::arith::isqrt(t).unwrap() + 1;
                let mut idx = vec![-bound; n];
                'outer: loop {
                    let q: Rat = (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| g[i][j] * rat(idx[i]) * rat(idx[j]))
                                .fold(Rat::zero(), |a, b| a + b)
                        })
                        .fold(Rat::zero(), |a, b| a + b);
                    if q == rat(t) {
                        want.push(idx.clone());
                    }
                    let mut k = 0;
                    loop {
                        idx[k] += 1;
                        if idx[k] <= bound {
                            break;
                        }
                        idx[k] = -bound;
                        k += 1;
                        if k == n {
                            break 'outer;
                        }
                    }
                }
                want.sort();
                assert_eq!(got, want, "g={g:?} t={t}");
            }
        }
    }

    #[test]
    fn solve_rational_roundtrip() {
        let g = vec![
            vec![rat(2), Rat::new(1, 2)],
            vec![Rat::new(1, 2), rat(3)],
        ];
        let b = vec![rat(1), rat(4)];
        let x = solve_rational(&g, &b).unwrap();
        for i in 0..2 {
            let lhs: Rat = (0..2).map(|j| g[i][j] * x[j]).fold(Rat::zero(), |a, v| a + v);
            assert_eq!(lhs, b[i]);
        }
    }
}
