//! Positive definite binary quadratic forms: reduction with transform,
//! Dirichlet composition, and the form class group with its ambiguous classes
//! and genus partition.
//!
//! A form (a, b, c) stands for ax² + bxy + cy² with discriminant D = b² − 4ac.
//! Class membership uses the classical conventions: primitive means
//! gcd(a, b, c) = 1, and the canonical representative of a class is the unique
//! reduced form (|b| ≤ a ≤ c, with b ≥ 0 when |b| = a or a = c).

use crate::arith::{checked, gcd3, isqrt, kronecker, extended_gcd};
use crate::error::{Error, Result};
use crate::Int;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Coefficient magnitude cap; keeps every downstream product inside `Int`.
pub const MAX_COEFF: Int = 1 << 25;

/// Binary quadratic form ax² + bxy + cy², positive definite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Form {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

/// 2×2 integer matrix acting on forms by proper equivalence (determinant +1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2(pub [[Int; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn det(&self) -> Int {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &other.0;
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

impl Form {
    /// Validates positive definiteness (a > 0, D < 0) and the magnitude cap.
    pub fn new(a: Int, b: Int, c: Int) -> Result<Form> {
        if a.abs() > MAX_COEFF || b.abs() > MAX_COEFF || c.abs() > MAX_COEFF {
            return Err(Error::Overflow("form coefficients exceed supported magnitude"));
        }
        let f = Form { a, b, c };
        if a <= 0 || f.discriminant() >= 0 {
            return Err(Error::NotPositiveDefinite(a, b, c));
        }
        Ok(f)
    }

    pub fn discriminant(&self) -> Int {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> Int {
        gcd3(self.a, self.b, self.c).abs()
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn eval(&self, x: Int, y: Int) -> Result<Int> {
        let ax2 = checked(self.a.checked_mul(x).and_then(|t| t.checked_mul(x)), "form eval")?;
        let bxy = checked(self.b.checked_mul(x).and_then(|t| t.checked_mul(y)), "form eval")?;
        let cy2 = checked(self.c.checked_mul(y).and_then(|t| t.checked_mul(y)), "form eval")?;
        checked(ax2.checked_add(bxy).and_then(|t| t.checked_add(cy2)), "form eval")
    }

    /// Reduced: |b| ≤ a ≤ c, and b ≥ 0 whenever |b| = a or a = c.
    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (self.b.abs() < self.a && self.a < self.c))
    }

    /// Apply a determinant-+1 transform: returns g with g(v) = f(U·v).
    pub fn transformed(&self, u: &Mat2) -> Result<Form> {
        let [[p, q], [r, s]] = u.0;
        let a = self.eval(p, r)?;
        let c = self.eval(q, s)?;
        // b' = 2a·pq + b(ps + qr) + 2c·rs
        let b = checked(
            (2 * self.a).checked_mul(p * q).and_then(|t1| {
                self.b
                    .checked_mul(p * s + q * r)
                    .and_then(|t2| (2 * self.c).checked_mul(r * s).and_then(|t3| t1.checked_add(t2).and_then(|t| t.checked_add(t3))))
            }),
            "form transform",
        )?;
        Ok(Form { a, b, c })
    }

    /// Gaussian reduction. Returns the reduced form g and U ∈ SL₂(ℤ) with
    /// g(v) = f(U·v), i.e. M_g = Uᵀ M_f U.
    pub fn reduce(&self) -> (Form, Mat2) {
        let mut f = *self;
        let mut u = Mat2::IDENTITY;
        loop {
            // Normalize: shift b into (-a, a] via (x, y) -> (x + k·y, y).
            if f.b > f.a || f.b <= -f.a {
                let k = Integer::div_floor(&(f.a - f.b), &(2 * f.a));
                let shift = Mat2([[1, k], [0, 1]]);
                f = f.transformed(&shift).expect("reduction stays in range");
                u = u.mul(&shift);
            }
            if f.a > f.c {
                // Swap outer coefficients via (x, y) -> (-y, x).
                let swap = Mat2([[0, -1], [1, 0]]);
                f = f.transformed(&swap).expect("reduction stays in range");
                u = u.mul(&swap);
                continue;
            }
            break;
        }
        if f.b < 0 && f.a == f.c {
            let fix = Mat2([[0, -1], [1, 0]]);
            f = f.transformed(&fix).expect("reduction stays in range");
            u = u.mul(&fix);
        }
        debug_assert!(f.is_reduced(), "not reduced: {f:?}");
        debug_assert_eq!(u.det(), 1);
        debug_assert_eq!(f.discriminant(), self.discriminant());
        (f, u)
    }
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Require D < 0 and D ≡ 0, 1 (mod 4).
pub fn validate_discriminant(d: Int) -> Result<()> {
    if d >= 0 || !(d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1) {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(())
}

/// Proper-equivalence class of a primitive positive definite form, keyed by
/// its unique reduced representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormClass {
    repr: Form,
}

impl FormClass {
    pub fn of(f: &Form) -> Result<FormClass> {
        if !f.is_primitive() {
            return Err(Error::NotPrimitive(f.a, f.b, f.c));
        }
        Ok(FormClass { repr: f.reduce().0 })
    }

    /// The identity class: (1, 0, −D/4) or (1, 1, (1−D)/4) by parity of D.
    pub fn principal(d: Int) -> Result<FormClass> {
        validate_discriminant(d)?;
        let f = if d.rem_euclid(4) == 0 {
            Form::new(1, 0, -d / 4)?
        } else {
            Form::new(1, 1, (1 - d) / 4)?
        };
        FormClass::of(&f)
    }

    pub fn repr(&self) -> Form {
        self.repr
    }

    pub fn discriminant(&self) -> Int {
        self.repr.discriminant()
    }

    /// Class of (a, −b, c); the group inverse.
    pub fn inverse(&self) -> FormClass {
        let f = Form { a: self.repr.a, b: -self.repr.b, c: self.repr.c };
        FormClass { repr: f.reduce().0 }
    }

    /// Gauss composition via Dirichlet's formula with gcd preprocessing.
    pub fn compose(&self, other: &FormClass) -> Result<FormClass> {
        let d = self.discriminant();
        if d != other.discriminant() {
            return Err(Error::DiscriminantMismatch(d, other.discriminant()));
        }
        let f = dirichlet_compose(&self.repr, &other.repr, d)?;
        Ok(FormClass { repr: f.reduce().0 })
    }

    pub fn is_principal(&self) -> bool {
        self.repr.a == 1
    }

    pub fn is_ambiguous(&self) -> bool {
        // C² = E ⟺ C = C⁻¹, and reduced representatives are unique.
        *self == self.inverse()
    }
}

impl std::fmt::Display for FormClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.repr)
    }
}

/// Dirichlet composition of primitive forms of the same discriminant.
///
/// With β = (b₁+b₂)/2, e = gcd(a₁, a₂, β) and u·a₁ + v·a₂ + w·β = e, the
/// composite is (A, B, C) where A = a₁a₂/e²,
/// B ≡ (u·a₁·b₂ + v·a₂·b₁ + w·(b₁b₂ + D)/2)/e (mod 2A) and C = (B² − D)/(4A).
fn dirichlet_compose(f1: &Form, f2: &Form, d: Int) -> Result<Form> {
    let beta = (f1.b + f2.b) / 2;
    let (g, x, y) = extended_gcd(f1.a, f2.a);
    let (e, s, w) = extended_gcd(g, beta);
    let (u, v) = (s * x, s * y);
    debug_assert_eq!(u * f1.a + v * f2.a + w * beta, e);

    let a = checked((f1.a / e).checked_mul(f2.a / e), "composition")?;
    let t1 = checked(u.checked_mul(f1.a).and_then(|t| t.checked_mul(f2.b)), "composition")?;
    let t2 = checked(v.checked_mul(f2.a).and_then(|t| t.checked_mul(f1.b)), "composition")?;
    let bb = checked(f1.b.checked_mul(f2.b), "composition")?;
    let t3 = checked(w.checked_mul((bb + d) / 2), "composition")?;
    let num = checked(t1.checked_add(t2).and_then(|t| t.checked_add(t3)), "composition")?;
    if num % e != 0 {
        return Err(Error::Internal("composition congruence not divisible by e"));
    }
    let b = (num / e).mod_floor(&(2 * a));
    let b2d = checked(b.checked_mul(b).and_then(|t| t.checked_sub(d)), "composition")?;
    if b2d % (4 * a) != 0 {
        return Err(Error::Internal("composition middle coefficient fails B² ≡ D (mod 4A)"));
    }
    let c = b2d / (4 * a);
    Ok(Form { a, b, c })
}

/// Every reduced primitive form of discriminant d, sorted by (a, b, c).
pub fn reduced_primitive_forms(d: Int) -> Result<Vec<Form>> {
    validate_discriminant(d)?;
    let mut forms = Vec::new();
    let a_max = isqrt(-d / 3)?;
    for a in 1..=a_max {
        let parity = d.rem_euclid(2);
        let mut b = -a + 1;
        if b.rem_euclid(2) != parity {
            b += 1;
        }
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let f = Form { a, b, c };
                let boundary_ok = b >= 0 || (b.abs() < a && a < c);
                if c >= a && boundary_ok && f.is_primitive() {
                    forms.push(f);
                }
            }
            b += 2;
        }
    }
    forms.sort();
    Ok(forms)
}

/// The form class group 𝔖_D: reduced primitive forms of discriminant D under
/// composition, with the derived structure queries precomputed.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    d: Int,
    classes: Vec<FormClass>,
    identity: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    order: Vec<u32>,
    ambiguous: Vec<usize>,
    genus_id: Vec<usize>,
    genera: Vec<Vec<usize>>,
}

impl ClassGroup {
    pub fn for_discriminant(d: Int) -> Result<ClassGroup> {
        let forms = reduced_primitive_forms(d)?;
        let classes: Vec<FormClass> = forms.iter().map(|f| FormClass { repr: *f }).collect();
        let h = classes.len();
        if h == 0 {
            return Err(Error::Internal("empty class group"));
        }
        let index_of = |f: &FormClass| -> Result<usize> {
            classes
                .binary_search(f)
                .map_err(|_| Error::Internal("composite not in reduced form list"))
        };
        let identity = index_of(&FormClass::principal(d)?)?;

        let mut table = vec![0usize; h * h];
        for i in 0..h {
            for j in 0..=i {
                let k = index_of(&classes[i].compose(&classes[j])?)?;
                table[i * h + j] = k;
                table[j * h + i] = k;
            }
        }
        let mut inverse = vec![0usize; h];
        for i in 0..h {
            inverse[i] = index_of(&classes[i].inverse())?;
        }
        let mut order = vec![0u32; h];
        for i in 0..h {
            let mut k = 1u32;
            let mut acc = i;
            while acc != identity {
                acc = table[acc * h + i];
                k += 1;
            }
            order[i] = k;
        }
        let ambiguous: Vec<usize> = (0..h).filter(|&i| order[i] <= 2).collect();

        // Genera are the cosets of the subgroup of squares.
        let mut squares: Vec<usize> = (0..h).map(|i| table[i * h + i]).collect();
        squares.sort_unstable();
        squares.dedup();
        let mut genus_id = vec![usize::MAX; h];
        let mut genera: Vec<Vec<usize>> = Vec::new();
        for i in 0..h {
            if genus_id[i] != usize::MAX {
                continue;
            }
            let gid = genera.len();
            let mut coset: Vec<usize> = squares.iter().map(|&s| table[i * h + s]).collect();
            coset.sort_unstable();
            coset.dedup();
            for &m in &coset {
                genus_id[m] = gid;
            }
            genera.push(coset);
        }
        // Canonical order: principal genus first, then by least member.
        let mut perm: Vec<usize> = (0..genera.len()).collect();
        perm.sort_by_key(|&g| (genera[g] != genera[genus_id[identity]], genera[g][0]));
        let mut new_genera = Vec::with_capacity(genera.len());
        let mut new_id = vec![0usize; h];
        for (new_gid, &old_gid) in perm.iter().enumerate() {
            for &m in &genera[old_gid] {
                new_id[m] = new_gid;
            }
            new_genera.push(genera[old_gid].clone());
        }

        Ok(ClassGroup {
            d,
            classes,
            identity,
            table,
            inverse,
            order,
            ambiguous,
            genus_id: new_id,
            genera: new_genera,
        })
    }

    pub fn discriminant(&self) -> Int {
        self.d
    }

    /// The class number h(D).
    pub fn h(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[FormClass] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &FormClass {
        &self.classes[i]
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, class: &FormClass) -> Result<usize> {
        if class.discriminant() != self.d {
            return Err(Error::DiscriminantMismatch(class.discriminant(), self.d));
        }
        self.classes
            .binary_search(class)
            .map_err(|_| Error::Internal("class not found in its own group"))
    }

    pub fn compose_indices(&self, i: usize, j: usize) -> usize {
        self.table[i * self.h() + j]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// i^k in the group.
    pub fn power(&self, i: usize, k: u32) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.compose_indices(acc, i);
        }
        acc
    }

    pub fn order_of(&self, i: usize) -> u32 {
        self.order[i]
    }

    /// Indices of the 2-torsion classes (C² = E), identity included.
    pub fn ambiguous_indices(&self) -> &[usize] {
        &self.ambiguous
    }

    pub fn ambiguous_classes(&self) -> Vec<FormClass> {
        self.ambiguous.iter().map(|&i| self.classes[i]).collect()
    }

    /// Genus id of a class index; genus 0 is the principal genus.
    pub fn genus_of_index(&self, i: usize) -> usize {
        self.genus_id[i]
    }

    pub fn genus_of(&self, class: &FormClass) -> Result<usize> {
        Ok(self.genus_id[self.index_of(class)?])
    }

    /// Class indices of each genus, principal genus first.
    pub fn genera(&self) -> &[Vec<usize>] {
        &self.genera
    }

    pub fn has_order_4_element(&self) -> bool {
        self.order.iter().any(|&o| o == 4)
    }

    /// Kronecker symbol (D | n).
    pub fn chi(&self, n: Int) -> Result<i8> {
        kronecker(self.d, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(a: Int, b: Int, c: Int) -> Form {
        Form::new(a, b, c).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(form(1, 0, 1).discriminant(), -4);
        assert_eq!(form(1, 1, 6).discriminant(), -23);
        assert_eq!(form(2, 1, 5).discriminant(), -39);
    }

    #[test]
    fn construction_rejects_indefinite() {
        assert!(Form::new(1, 3, 1).is_err());
        assert!(Form::new(-1, 0, -1).is_err());
        assert!(Form::new(0, 0, 1).is_err());
    }

    #[test]
    fn reduction_examples() {
        let (r, u) = form(1, 0, 1).reduce();
        assert_eq!(r, form(1, 0, 1));
        assert_eq!(u, Mat2::IDENTITY);

        // D = -4 has a single reduced form, so this must land on (1, 0, 1).
        let (r, u) = form(10, 34, 29).reduce();
        assert_eq!(r, form(1, 0, 1));
        assert_eq!(u.det(), 1);
        assert_eq!(form(10, 34, 29).transformed(&u).unwrap(), r);

        let (r, _) = form(3, 3, 4).reduce();
        assert_eq!(r, form(3, 3, 4));
    }

    #[test]
    fn reduction_is_idempotent_and_transform_checks() {
        for (a, b, c) in [(10, 34, 29), (7, -5, 13), (5, 4, 5), (12, 11, 9), (2, 1, 3)] {
            let f = form(a, b, c);
            let (r, u) = f.reduce();
            assert!(r.is_reduced());
            assert_eq!(f.transformed(&u).unwrap(), r, "transform witnesses the reduction");
            let (r2, u2) = r.reduce();
            assert_eq!(r2, r);
            assert_eq!(u2, Mat2::IDENTITY);
        }
    }

    #[test]
    fn reduced_forms_frozen_lists() {
        // Exhaustive enumeration is the oracle for these frozen lists.
        assert_eq!(reduced_primitive_forms(-3).unwrap(), vec![form(1, 1, 1)]);
        assert_eq!(reduced_primitive_forms(-4).unwrap(), vec![form(1, 0, 1)]);
        assert_eq!(
            reduced_primitive_forms(-20).unwrap(),
            vec![form(1, 0, 5), form(2, 2, 3)]
        );
        assert_eq!(
            reduced_primitive_forms(-23).unwrap(),
            vec![form(1, 1, 6), form(2, -1, 3), form(2, 1, 3)]
        );
        assert_eq!(
            reduced_primitive_forms(-39).unwrap(),
            vec![form(1, 1, 10), form(2, -1, 5), form(2, 1, 5), form(3, 3, 4)]
        );
    }

    #[test]
    fn class_numbers_match_known_values() {
        // Classical table of h(D) for small discriminants.
        let known: &[(Int, usize)] = &[
            (-3, 1), (-4, 1), (-7, 1), (-8, 1), (-11, 1), (-12, 1), (-15, 2), (-16, 1),
            (-19, 1), (-20, 2), (-23, 3), (-24, 2), (-27, 1), (-28, 1), (-31, 3), (-32, 2),
            (-35, 2), (-36, 2), (-39, 4), (-40, 2), (-43, 1), (-44, 3), (-47, 5), (-48, 2),
            (-52, 2), (-56, 4), (-67, 1), (-71, 7), (-84, 4), (-95, 8), (-163, 1),
        ];
        for &(d, h) in known {
            assert_eq!(ClassGroup::for_discriminant(d).unwrap().h(), h, "D={d}");
        }
    }

    #[test]
    fn composition_examples() {
        let g23 = ClassGroup::for_discriminant(-23).unwrap();
        let e = FormClass::principal(-23).unwrap();
        assert_eq!(e.compose(&e).unwrap(), e);
        let c = FormClass::of(&form(2, 1, 3)).unwrap();
        assert_eq!(c.compose(&c).unwrap(), FormClass::of(&form(2, -1, 3)).unwrap());
        assert_eq!(c.inverse(), FormClass::of(&form(2, -1, 3)).unwrap());
        assert_eq!(g23.h(), 3);

        let g39 = ClassGroup::for_discriminant(-39).unwrap();
        let idx = g39.index_of(&FormClass::of(&form(2, 1, 5)).unwrap()).unwrap();
        assert_eq!(g39.order_of(idx), 4);
        assert!(g39.has_order_4_element());
        assert!(!ClassGroup::for_discriminant(-3).unwrap().has_order_4_element());
        assert!(!ClassGroup::for_discriminant(-23).unwrap().has_order_4_element());
    }

    #[test]
    fn inverse_examples() {
        let e = FormClass::principal(-23).unwrap();
        assert_eq!(e.inverse(), e);
        let g = ClassGroup::for_discriminant(-20).unwrap();
        for c in g.classes() {
            assert!(c.is_ambiguous());
            assert_eq!(c.inverse(), *c);
        }
    }

    #[test]
    fn ambiguous_and_genera() {
        let g3 = ClassGroup::for_discriminant(-3).unwrap();
        assert_eq!(g3.ambiguous_classes(), vec![FormClass::principal(-3).unwrap()]);

        let g39 = ClassGroup::for_discriminant(-39).unwrap();
        assert_eq!(g39.ambiguous_indices().len(), 2);
        assert_eq!(g39.genera().len(), 2);
        // gen(E) = squares of the cyclic order-4 group: {E, C²}.
        let e = g39.identity_index();
        let principal = &g39.genera()[0];
        assert!(principal.contains(&e));
        assert_eq!(principal.len(), 2);

        let g20 = ClassGroup::for_discriminant(-20).unwrap();
        assert_eq!(g20.ambiguous_indices().len(), 2);
        assert_eq!(g20.h(), 2);
    }

    #[test]
    fn genus_is_constant_on_cosets() {
        for d in [-39, -56, -84, -95] {
            let g = ClassGroup::for_discriminant(d).unwrap();
            for i in 0..g.h() {
                for &amb in g.ambiguous_indices() {
                    for s in 0..g.h() {
                        let sq = g.compose_indices(s, s);
                        let moved = g.compose_indices(amb, g.compose_indices(i, sq));
                        let base = g.compose_indices(amb, i);
                        assert_eq!(g.genus_of_index(moved), g.genus_of_index(base));
                    }
                }
            }
        }
    }

    #[test]
    fn group_axioms_up_to_400() {
        let mut d: Int = -3;
        while d >= -400 {
            if d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1 {
                let g = ClassGroup::for_discriminant(d).unwrap();
                let h = g.h();
                let e = g.identity_index();
                for i in 0..h {
                    assert_eq!(g.compose_indices(i, e), i, "identity, D={d}");
                    assert_eq!(g.compose_indices(i, g.inverse_index(i)), e, "inverse, D={d}");
                    for j in 0..h {
                        assert_eq!(
                            g.compose_indices(i, j),
                            g.compose_indices(j, i),
                            "commutativity, D={d}"
                        );
                        for k in 0..h {
                            let ij_k = g.compose_indices(g.compose_indices(i, j), k);
                            let i_jk = g.compose_indices(i, g.compose_indices(j, k));
                            assert_eq!(ij_k, i_jk, "associativity, D={d}");
                        }
                    }
                }
                // |genera| = |ambiguous classes|.
                assert_eq!(g.genera().len(), g.ambiguous_indices().len(), "D={d}");
            }
            d -= 1;
        }
    }

    #[test]
    fn order_4_iff_some_genus_lacks_ambiguous() {
        let mut d: Int = -3;
        while d >= -500 {
            if d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1 {
                let g = ClassGroup::for_discriminant(d).unwrap();
                let all_genera_have_ambiguous = g
                    .genera()
                    .iter()
                    .all(|coset| coset.iter().any(|i| g.ambiguous_indices().contains(i)));
                assert_eq!(
                    !g.has_order_4_element(),
                    all_genera_have_ambiguous,
                    "D={d}"
                );
            }
            d -= 1;
        }
    }
}
