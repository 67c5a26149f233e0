//! Vector enumeration and representation tests: does one lattice embed in
//! another? All searches are complete over exact bounds, so a `None` answer is
//! a proof of non-representation at this scale.

use super::enumerate::{enumerate_quadric, solve_rational};
use super::{saturate, Embedding, Lattice};
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::mat::{solve_linear, IMat};
use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::Zero;

/// The complete list of v with Q(v) = m, sorted lexicographically.
pub fn vectors_with_norm(l: &Lattice, m: Int) -> Result<Vec<Vec<Int>>> {
    if m < 0 {
        return Err(Error::InvalidArgument(format!("norm must be ≥ 0, got {m}")));
    }
    let n = l.rank();
    let g: Vec<Vec<Rat>> =
        (0..n).map(|i| (0..n).map(|j| l.gram_entry(i, j)).collect()).collect();
    let mu = vec![Rat::zero(); n];
    enumerate_quadric(&g, &mu, Rat::from_integer(m))
}

/// Candidates for the next embedding column: all x with Q(x) = norm and
/// 2B(prev_j, x) = pairing_j for each previous column, in lexicographic order.
fn column_candidates(
    ambient: &Lattice,
    prev: &[Vec<Int>],
    pairings: &[Int],
    norm: Int,
) -> Result<Vec<Vec<Int>>> {
    let n = ambient.rank();
    if prev.is_empty() {
        return vectors_with_norm(ambient, norm);
    }
    // Linear system: (E·prev_j)ᵀ · x = pairing_j.
    let mut rows = Vec::with_capacity(prev.len());
    for v in prev {
        rows.push(ambient.twice_gram().mul_vec(v)?);
    }
    let a = IMat::from_rows(&rows)?;
    let Some((particular, kernel)) = solve_linear(&a, pairings)? else {
        return Ok(Vec::new());
    };
    let k = kernel.cols;
    let q0 = ambient.q(&particular)?;
    if k == 0 {
        return Ok(if q0 == norm { vec![particular] } else { Vec::new() });
    }
    // Q(v₀ + K·z) = norm  ⟺  (z + μ)ᵀ G_K (z + μ) = norm − Q(v₀) + μᵀ G_K μ,
    // with G_K = Kᵀ G K and μ = G_K⁻¹ · Kᵀ G v₀.
    let g_k: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| Rat::new(ambient.b2(&kernel.col(i), &kernel.col(j)).unwrap(), 2))
                .collect()
        })
        .collect();
    let rhs: Vec<Rat> =
        (0..k).map(|i| Rat::new(ambient.b2(&kernel.col(i), &particular).unwrap(), 2)).collect();
    let mu = solve_rational(&g_k, &rhs)?;
    let mut t = Rat::from_integer(norm - q0);
    for i in 0..k {
        for j in 0..k {
            t += mu[i] * g_k[i][j] * mu[j];
        }
    }
    let mut out = Vec::new();
    for z in enumerate_quadric(&g_k, &mu, t)? {
        let mut w = particular.clone();
        for (j, zj) in z.iter().enumerate() {
            let col = kernel.col(j);
            for i in 0..n {
                w[i] += zj * col[i];
            }
        }
        debug_assert_eq!(ambient.q(&w)?, norm);
        out.push(w);
    }
    out.sort();
    Ok(out)
}

/// Depth-first greedy search for the lexicographically least embedding.
fn embed_search(ambient: &Lattice, target: &Lattice, cols: &mut Vec<Vec<Int>>) -> Result<bool> {
    let k = cols.len();
    if k == target.rank() {
        return Ok(true);
    }
    let norm = target.twice_gram()[(k, k)] / 2;
    let pairings: Vec<Int> = (0..k).map(|j| target.twice_gram()[(j, k)]).collect();
    for cand in column_candidates(ambient, cols, &pairings, norm)? {
        cols.push(cand);
        if embed_search(ambient, target, cols)? {
            return Ok(true);
        }
        cols.pop();
    }
    Ok(false)
}

/// Representation test: an integer matrix T with Tᵀ·M_L·T = M_target, or
/// `None` when no such matrix exists (the search is complete).
///
/// The returned witness is deterministic: columns are chosen greedily, each
/// lexicographically least given the previous ones. Rank-2 targets are
/// reduced first and the witness is transported back through the reduction.
pub fn represents_lattice(ambient: &Lattice, target: &Lattice) -> Result<Option<Embedding>> {
    if target.rank() > ambient.rank() {
        return Err(Error::InvalidArgument(
            "target rank exceeds ambient rank".into(),
        ));
    }
    // Scale obstruction: an integral-scale lattice only has integral pairings.
    let ambient_integral = ambient.twice_gram().data.iter().all(|x| x.is_even());
    if ambient_integral && target.twice_gram().data.iter().any(|x| x.is_odd()) {
        return Ok(None);
    }
    // Reduce binary targets: smaller leading diagonal, far fewer candidates.
    if target.rank() == 2 {
        let f = target.binary_form()?;
        let (reduced, u) = f.reduce();
        if reduced != f {
            let reduced_target = Lattice::from_form(&reduced)?;
            let Some(w) = represents_lattice_direct(ambient, &reduced_target)? else {
                return Ok(None);
            };
            // M_red = Uᵀ M_t U, so T = W·U⁻¹ embeds the original target.
            let [[p, q], [r, s]] = u.0;
            let u_inv = IMat::new(2, 2, vec![s, -q, -r, p])?;
            let t = w.matrix.mul(&u_inv)?;
            let emb = Embedding { matrix: t };
            emb.verify(ambient, target)?;
            return Ok(Some(emb));
        }
    }
    represents_lattice_direct(ambient, target)
}

fn represents_lattice_direct(ambient: &Lattice, target: &Lattice) -> Result<Option<Embedding>> {
    let mut cols: Vec<Vec<Int>> = Vec::new();
    if !embed_search(ambient, target, &mut cols)? {
        return Ok(None);
    }
    let n = ambient.rank();
    let m = target.rank();
    let mut t = IMat::zeros(n, m);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            t[(i, j)] = col[i];
        }
    }
    let emb = Embedding { matrix: t };
    emb.verify(ambient, target)?;
    Ok(Some(emb))
}

/// Same rank and discriminant plus a representation is an isometry: the
/// determinant identity forces det T = ±1.
pub fn is_isometric(a: &Lattice, b: &Lattice) -> Result<bool> {
    if a.rank() != b.rank() || a.det_twice_gram() != b.det_twice_gram() {
        return Ok(false);
    }
    Ok(represents_lattice(a, b)?.is_some())
}

/// Outcome of the bounded search for a primitive binary sublattice with norm
/// ideal inside pℤ.
#[derive(Debug, Clone)]
pub enum NormPSearch {
    Found {
        /// Basis of the primitive (saturated) sublattice, columns in the
        /// ambient basis.
        basis: IMat,
        sublattice: Lattice,
        /// Saturation index of the generating pair inside the witness.
        pair_index: Int,
    },
    /// The bound was exhausted: a semi-decision, not a "no".
    Undecided { searched_norm_bound: Int },
}

/// Search vector pairs v, w with p | Q(v), p | Q(w), p | 2B(v, w) among
/// vectors of norm ≤ bound, saturate the pair, and report the first primitive
/// binary sublattice whose norm ideal stays inside pℤ.
///
/// Default bound: 4·p·(largest diagonal Gram entry).
pub fn has_norm_p_binary_sublattice(
    l: &Lattice,
    p: Int,
    bound: Option<Int>,
) -> Result<NormPSearch> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let bound = bound.unwrap_or_else(|| 4 * p * l.max_diagonal());
    // All vectors with p | Q(v), Q(v) ≤ bound, in (norm, lex) order.
    let mut vecs = Vec::new();
    let mut m = p;
    while m <= bound {
        vecs.extend(vectors_with_norm(l, m)?);
        m += p;
    }
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            if l.b2(&vecs[i], &vecs[j])? % p != 0 {
                continue;
            }
            let mut gens = IMat::zeros(l.rank(), 2);
            for r in 0..l.rank() {
                gens[(r, 0)] = vecs[i][r];
                gens[(r, 1)] = vecs[j][r];
            }
            let Ok(sat) = saturate(l, &gens) else {
                continue; // dependent pair
            };
            if sat.lattice.norm_ideal() % p == 0 {
                return Ok(NormPSearch::Found {
                    basis: sat.basis,
                    sublattice: sat.lattice,
                    pair_index: sat.index,
                });
            }
        }
    }
    Ok(NormPSearch::Undecided { searched_norm_bound: bound })
}
