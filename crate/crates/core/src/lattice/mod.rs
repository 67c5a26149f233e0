//! Positive definite ℤ-lattices of rank 1–4: exact Gram data with
//! half-integral off-diagonals, index-p sublattices, scaling, saturation,
//! vector enumeration, and representation (embedding) tests.
//!
//! The Gram matrix is stored doubled (`2·G`), which keeps every internal
//! computation in integers: Q(v) = vᵀ(2G)v / 2 and 2·B(v, w) = vᵀ(2G)w.

mod embed;
mod enumerate;

pub use embed::{has_norm_p_binary_sublattice, is_isometric, represents_lattice, vectors_with_norm, NormPSearch};

use crate::arith::{checked, is_prime, kronecker};
use crate::binform::Form;
use crate::error::{Error, Result};
use crate::mat::{smith, IMat};
use crate::{Int, Rat};
use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Entry magnitude cap for the doubled Gram matrix.
pub const MAX_ENTRY: Int = 1 << 26;

/// Free ℤ-module of rank 1–4 with a positive definite bilinear form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    rank: usize,
    /// Doubled Gram matrix 2·G: symmetric, even diagonal, positive definite.
    e: IMat,
    det_e: Int,
}

impl Lattice {
    /// Build from the doubled Gram matrix.
    pub fn from_twice_gram(e: IMat) -> Result<Lattice> {
        let rank = e.rows;
        if rank == 0 || rank > 4 || e.cols != rank {
            return Err(Error::RankUnsupported(rank));
        }
        if e.data.iter().any(|x| x.abs() > MAX_ENTRY) {
            return Err(Error::Overflow("gram entries exceed supported magnitude"));
        }
        if !e.is_symmetric() {
            return Err(Error::InvalidArgument("gram matrix must be symmetric".into()));
        }
        for i in 0..rank {
            if e[(i, i)].is_odd() {
                return Err(Error::NonIntegralScale);
            }
        }
        if rank >= 3 {
            // Integral scale is the standing assumption above rank 2.
            if e.data.iter().any(|x| x.is_odd()) {
                return Err(Error::NonIntegralScale);
            }
        }
        // Positive definiteness via leading principal minors of 2G.
        for k in 1..=rank {
            let mut minor = IMat::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    minor[(i, j)] = e[(i, j)];
                }
            }
            if minor.det()? <= 0 {
                return Err(Error::GramNotPositiveDefinite);
            }
        }
        let det_e = e.det()?;
        let l = Lattice { rank, e, det_e };
        if rank == 2 {
            let d = l.binary_discriminant()?;
            debug_assert!(d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1);
        }
        Ok(l)
    }

    /// Build from rational Gram entries (row-major); denominators must divide 2.
    pub fn from_rational_gram(rank: usize, entries: &[Rat]) -> Result<Lattice> {
        if entries.len() != rank * rank {
            return Err(Error::InvalidArgument(format!(
                "expected {rank}×{rank} gram entries, got {}",
                entries.len()
            )));
        }
        let two = Rat::from_integer(2);
        let mut data = Vec::with_capacity(entries.len());
        for r in entries {
            let doubled = *r * two;
            if !doubled.is_integer() {
                return Err(Error::NonIntegralScale);
            }
            data.push(doubled.to_integer());
        }
        Lattice::from_twice_gram(IMat::new(rank, rank, data)?)
    }

    pub fn from_integer_gram(rank: usize, entries: &[Int]) -> Result<Lattice> {
        let doubled: Vec<Int> = entries.iter().map(|&x| 2 * x).collect();
        Lattice::from_twice_gram(IMat::new(rank, rank, doubled)?)
    }

    pub fn diagonal(entries: &[Int]) -> Result<Lattice> {
        let n = entries.len();
        let mut e = IMat::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            e[(i, i)] = 2 * v;
        }
        Lattice::from_twice_gram(e)
    }

    /// The binary lattice of a form: Gram (a, b/2; b/2, c).
    pub fn from_form(f: &Form) -> Result<Lattice> {
        Lattice::from_twice_gram(IMat::new(2, 2, vec![2 * f.a, f.b, f.b, 2 * f.c])?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn twice_gram(&self) -> &IMat {
        &self.e
    }

    pub fn gram_entry(&self, i: usize, j: usize) -> Rat {
        Rat::new(self.e[(i, j)], 2)
    }

    /// Q(v) = B(v, v); always an integer.
    pub fn q(&self, v: &[Int]) -> Result<Int> {
        let ev = self.e.mul_vec(v)?;
        let mut acc: Int = 0;
        for (a, b) in v.iter().zip(&ev) {
            acc = checked(a.checked_mul(*b).and_then(|t| acc.checked_add(t)), "lattice q")?;
        }
        debug_assert!(acc.is_even());
        Ok(acc / 2)
    }

    /// 2·B(v, w); always an integer (B itself may be half-integral).
    pub fn b2(&self, v: &[Int], w: &[Int]) -> Result<Int> {
        let ew = self.e.mul_vec(w)?;
        let mut acc: Int = 0;
        for (a, b) in v.iter().zip(&ew) {
            acc = checked(a.checked_mul(*b).and_then(|t| acc.checked_add(t)), "lattice b2")?;
        }
        Ok(acc)
    }

    /// Discriminant dL = det(G) as an exact rational.
    pub fn disc(&self) -> Rat {
        Rat::new(self.det_e, 1 << self.rank)
    }

    /// Discriminant as an integer, when it is one.
    pub fn disc_int(&self) -> Option<Int> {
        let d = self.disc();
        d.is_integer().then(|| d.to_integer())
    }

    pub fn det_twice_gram(&self) -> Int {
        self.det_e
    }

    /// D_ℓ = −4·dℓ for binary lattices; an integer ≡ 0, 1 (mod 4) always.
    pub fn binary_discriminant(&self) -> Result<Int> {
        if self.rank != 2 {
            return Err(Error::RankUnsupported(self.rank));
        }
        Ok(-self.det_e)
    }

    /// Generator s of the norm ideal 𝔫L = sℤ: the gcd of the Q(eᵢ) and the
    /// doubled off-diagonal entries (Q(eᵢ+eⱼ) − Q(eᵢ) − Q(eⱼ)).
    pub fn norm_ideal(&self) -> Int {
        let mut g: Int = 0;
        for i in 0..self.rank {
            g = g.gcd(&(self.e[(i, i)] / 2));
            for j in 0..i {
                g = g.gcd(&self.e[(i, j)]);
            }
        }
        g
    }

    pub fn max_diagonal(&self) -> Int {
        (0..self.rank).map(|i| self.e[(i, i)] / 2).max().unwrap()
    }

    /// Entry-wise scaling by an exact rational; the result must again satisfy
    /// the lattice invariants.
    pub fn scale(&self, factor: Rat) -> Result<Lattice> {
        let mut data = Vec::with_capacity(self.e.data.len());
        for &x in &self.e.data {
            let v = Rat::from_integer(x) * factor;
            if !v.is_integer() {
                return Err(Error::NonIntegralScale);
            }
            data.push(v.to_integer());
        }
        Lattice::from_twice_gram(IMat::new(self.rank, self.rank, data)?)
    }

    /// The quadratic form of a binary lattice: (a, b, c) with Gram (a, b/2; b/2, c).
    pub fn binary_form(&self) -> Result<Form> {
        if self.rank != 2 {
            return Err(Error::RankUnsupported(self.rank));
        }
        Form::new(self.e[(0, 0)] / 2, self.e[(0, 1)], self.e[(1, 1)] / 2)
    }

    /// Gram of the sublattice spanned by the columns of `basis`.
    pub fn sublattice(&self, basis: &IMat) -> Result<Lattice> {
        if basis.rows != self.rank {
            return Err(Error::InvalidArgument("basis rows must match ambient rank".into()));
        }
        let e_sub = basis.transpose().mul(&self.e)?.mul(basis)?;
        Lattice::from_twice_gram(e_sub)
    }

    /// All p + 1 sublattices of index p of a binary lattice, each with its
    /// basis-change matrix (columns in the ambient basis, |det| = p).
    /// Order: ℤpx + ℤy first, then ℤ(x+uy) + ℤpy for u = 0, …, p−1.
    pub fn index_p_sublattices(&self, p: Int) -> Result<Vec<(Lattice, IMat)>> {
        if self.rank != 2 {
            return Err(Error::RankUnsupported(self.rank));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut out = Vec::with_capacity(p as usize + 1);
        let u0 = IMat::new(2, 2, vec![p, 0, 0, 1])?;
        out.push((self.sublattice(&u0)?, u0));
        for u in 0..p {
            let m = IMat::new(2, 2, vec![1, 0, u, p])?;
            out.push((self.sublattice(&m)?, m));
        }
        Ok(out)
    }

    /// The two index-p sublattices whose norm ideal lands in p·𝔫L, for p split
    /// with respect to the normalized discriminant D_ℓ/s².
    ///
    /// For odd p coprime to the normalized discriminant these are located as
    /// the isotropic lines of the scaled form mod p; for p = 2 (and any
    /// remaining case) all p + 1 sublattices are filtered by their norm ideal.
    /// A non-split p is rejected with the observed count (0 inert, 1 ramified).
    pub fn norm_p_sublattices(&self, p: Int) -> Result<Vec<(Lattice, IMat)>> {
        if self.rank != 2 {
            return Err(Error::RankUnsupported(self.rank));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let s = self.norm_ideal();
        let d_ell = self.binary_discriminant()?;
        if d_ell % (s * s) != 0 {
            return Err(Error::Internal("norm ideal square does not divide the discriminant"));
        }
        let d = d_ell / (s * s);
        let sp = s * p;

        let all = self.index_p_sublattices(p)?;
        let picked: Vec<(Lattice, IMat)> = if p != 2 && d % p != 0 {
            // Isotropic lines of the normalized form f/s modulo p: the line
            // (0:1) belongs to ℤpx + ℤy, the line (1:u) to ℤ(x+uy) + ℤpy.
            let f = self.binary_form()?;
            let (an, bn, cn) = (f.a / s, f.b / s, f.c / s);
            let mut sel = Vec::new();
            if cn.rem_euclid(p) == 0 {
                sel.push(0usize);
            }
            for u in 0..p {
                if (an + bn * u + cn * u * u).rem_euclid(p) == 0 {
                    sel.push(1 + u as usize);
                }
            }
            sel.into_iter().map(|i| all[i].clone()).collect()
        } else {
            all.into_iter()
                .filter(|(sub, _)| sub.norm_ideal() % sp == 0)
                .collect()
        };

        for (sub, _) in &picked {
            debug_assert_eq!(sub.norm_ideal() % sp, 0);
        }
        if picked.len() != 2 {
            return Err(Error::NotSplit { d, p, found: picked.len() });
        }
        debug_assert_eq!(kronecker(d, p)?, 1);
        Ok(picked)
    }
}

/// Integer embedding witness: columns are the images of the target basis, so
/// Tᵀ·(2G_ambient)·T = 2G_target exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub matrix: IMat,
}

impl Embedding {
    pub fn verify(&self, ambient: &Lattice, target: &Lattice) -> Result<()> {
        let t = &self.matrix;
        if t.rows != ambient.rank() || t.cols != target.rank() {
            return Err(Error::Internal("embedding dimensions do not match"));
        }
        let lhs = t.transpose().mul(ambient.twice_gram())?.mul(t)?;
        if &lhs == target.twice_gram() {
            Ok(())
        } else {
            Err(Error::Internal("embedding fails TᵀMT = target"))
        }
    }
}

/// Saturation of a sublattice: the smallest sublattice of the ambient lattice
/// containing it with torsion-free quotient.
#[derive(Debug, Clone)]
pub struct Saturation {
    pub lattice: Lattice,
    /// Basis of the saturated sublattice, columns in the ambient basis.
    pub basis: IMat,
    /// Index of the given sublattice inside its saturation.
    pub index: Int,
}

/// Saturate the span of the columns of `gens` inside `ambient`: intersect the
/// rational span with the lattice, via Smith normal form.
pub fn saturate(ambient: &Lattice, gens: &IMat) -> Result<Saturation> {
    if gens.rows != ambient.rank() {
        return Err(Error::InvalidArgument("generator rows must match ambient rank".into()));
    }
    let m = gens.cols;
    let s = smith(gens)?;
    if s.d.len() != m {
        return Err(Error::RankDeficient);
    }
    // gens = U⁻¹·D·V⁻¹, so the rational span meets the lattice in the span of
    // the first m columns of U⁻¹, and the index is the product of divisors.
    let basis = s.u_inv.columns(0..m);
    let mut index: Int = 1;
    for &d in &s.d {
        index = checked(index.checked_mul(d), "saturation index")?;
    }
    Ok(Saturation { lattice: ambient.sublattice(&basis)?, basis, index })
}

// --- serialization: Gram matrices as row-major lists of exact rationals ---

pub(crate) fn rat_to_string(r: Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: Int = num.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d: Int = den.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(n, d))
    } else {
        let n: Int = s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
        Ok(Rat::from_integer(n))
    }
}

/// Wire form of a Gram matrix: rank and row-major exact rational entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramJson {
    pub rank: usize,
    pub gram: Vec<String>,
}

impl GramJson {
    pub fn of(l: &Lattice) -> GramJson {
        let n = l.rank();
        let gram = (0..n * n).map(|k| rat_to_string(l.gram_entry(k / n, k % n))).collect();
        GramJson { rank: n, gram }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        let entries: Result<Vec<Rat>> = self.gram.iter().map(|s| rat_from_str(s)).collect();
        Lattice::from_rational_gram(self.rank, &entries?)
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GramJson::of(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Lattice, D::Error> {
        let g = GramJson::deserialize(deserializer)?;
        g.to_lattice().map_err(|e| D::Error::custom(e.to_string()))
    }
}
