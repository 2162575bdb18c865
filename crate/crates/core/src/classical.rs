//! The Hermitian unital of order q inside PG(2, q²), and the explicit matrix
//! groups acting on it.
//!
//! The form is `h(x, y) = x₀ȳ₂ − x₁ȳ₁ + x₂ȳ₀`. Matrices act on row vectors,
//! `x ↦ x·M`, followed by renormalization.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::automorphisms::PointPermutation;
use crate::field::{Elem, FieldError, FieldTables};
use crate::unital::Unital;

/// A point of PG(2, q²), normalized so the first nonzero coordinate is one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint([Elem; 3]);

impl ProjPoint {
    /// Normalizes a nonzero vector; `None` for the zero vector.
    pub fn new(field: &FieldTables, coords: [Elem; 3]) -> Option<ProjPoint> {
        let lead = coords.iter().copied().find(|c| !c.is_zero())?;
        let inv = field.inv(lead)?;
        Some(ProjPoint(coords.map(|c| field.mul(c, inv))))
    }

    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// `x₀·conj(y₂) − x₁·conj(y₁) + x₂·conj(y₀)`
pub fn hermitian_form(field: &FieldTables, x: [Elem; 3], y: [Elem; 3]) -> Elem {
    let t0 = field.mul(x[0], field.conj(y[2]));
    let t1 = field.mul(x[1], field.conj(y[1]));
    let t2 = field.mul(x[2], field.conj(y[0]));
    field.add(field.sub(t0, t1), t2)
}

/// All points of PG(2, q²) in lexicographic order of normalized coordinates.
pub fn projective_points(field: &FieldTables) -> Vec<ProjPoint> {
    let els: Vec<Elem> = field.elements().collect();
    let mut out = Vec::with_capacity(els.len().pow(2) + els.len() + 1);
    out.push(ProjPoint([Elem::ZERO, Elem::ZERO, Elem::ONE]));
    for &c in &els {
        out.push(ProjPoint([Elem::ZERO, Elem::ONE, c]));
    }
    for &b in &els {
        for &c in &els {
            out.push(ProjPoint([Elem::ONE, b, c]));
        }
    }
    out
}

/// The isotropic points `h(p, p) = 0`, in lexicographic order.
pub fn isotropic_points(field: &FieldTables) -> Vec<ProjPoint> {
    projective_points(field)
        .into_iter()
        .filter(|p| hermitian_form(field, p.0, p.0).is_zero())
        .collect()
}

/// A 3×3 matrix over GF(q²).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Matrix3(pub [[Elem; 3]; 3]);

impl Matrix3 {
    pub fn identity() -> Matrix3 {
        let (o, z) = (Elem::ONE, Elem::ZERO);
        Matrix3([[o, z, z], [z, o, z], [z, z, o]])
    }

    /// `[[1, x, z], [0, 1, x̄], [0, 0, 1]]`
    pub fn xi(field: &FieldTables, x: Elem, z: Elem) -> Matrix3 {
        let (o, n) = (Elem::ONE, Elem::ZERO);
        Matrix3([[o, x, z], [n, o, field.conj(x)], [n, n, o]])
    }

    /// The coordinate reversal `(x₀, x₁, x₂) ↦ (x₂, x₁, x₀)`.
    pub fn reversal() -> Matrix3 {
        let (o, z) = (Elem::ONE, Elem::ZERO);
        Matrix3([[z, z, o], [z, o, z], [o, z, z]])
    }

    /// Row vector times matrix.
    pub fn apply(&self, field: &FieldTables, v: [Elem; 3]) -> [Elem; 3] {
        let mut out = [Elem::ZERO; 3];
        for (j, slot) in out.iter_mut().enumerate() {
            for (i, &vi) in v.iter().enumerate() {
                *slot = field.add(*slot, field.mul(vi, self.0[i][j]));
            }
        }
        out
    }

    pub fn apply_point(&self, field: &FieldTables, p: ProjPoint) -> Option<ProjPoint> {
        ProjPoint::new(field, self.apply(field, p.0))
    }

    pub fn mul(&self, field: &FieldTables, rhs: &Matrix3) -> Matrix3 {
        let mut out = [[Elem::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            *row = rhs.apply(field, self.0[i]);
        }
        Matrix3(out)
    }

    pub fn determinant(&self, field: &FieldTables) -> Elem {
        let m = &self.0;
        let minor = |a: usize, b: usize| {
            field.sub(field.mul(m[1][a], m[2][b]), field.mul(m[1][b], m[2][a]))
        };
        let t0 = field.mul(m[0][0], minor(1, 2));
        let t1 = field.mul(m[0][1], minor(0, 2));
        let t2 = field.mul(m[0][2], minor(0, 1));
        field.add(field.sub(t0, t1), t2)
    }
}

/// The stabilizer subgroup Ξ of `E(0,0,1)`: all `Matrix3::xi(x, z)` with
/// `z + z̄ = x x̄`. Has `q³` elements.
pub fn xi_subgroup(field: &FieldTables) -> Vec<Matrix3> {
    let mut out = Vec::new();
    for x in field.elements() {
        let n = field.norm(x);
        for z in field.elements() {
            if field.trace(z) == n {
                out.push(Matrix3::xi(field, x, z));
            }
        }
    }
    out
}

/// The translations with center `E(0,0,1)`: `[[1, 0, z], [0, 1, 0], [0, 0, 1]]`
/// with `z + z̄ = 0`. Has `q` elements.
pub fn translation_matrices(field: &FieldTables) -> Vec<Matrix3> {
    field
        .elements()
        .filter(|&z| field.trace(z).is_zero())
        .map(|z| Matrix3::xi(field, Elem::ZERO, z))
        .collect()
}

/// The classical unital together with its coordinatization.
#[derive(Clone, Debug)]
pub struct HermitianUnital {
    field: FieldTables,
    points: Vec<ProjPoint>,
    index: HashMap<ProjPoint, usize>,
    unital: Unital,
}

impl HermitianUnital {
    pub fn new(q: usize) -> Result<HermitianUnital, FieldError> {
        Ok(HermitianUnital::from_field(FieldTables::new(q)?))
    }

    pub fn from_field(field: FieldTables) -> HermitianUnital {
        let points = isotropic_points(&field);
        let index: HashMap<ProjPoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let v = points.len();
        let mut covered = vec![false; v * v];
        let mut blocks = Vec::new();
        for i in 0..v {
            for j in i + 1..v {
                if covered[i * v + j] {
                    continue;
                }
                // the line through p_i and p_j: p_i together with p_j + λ p_i
                let (a, b) = (points[i].0, points[j].0);
                let mut block = vec![i];
                for lambda in field.elements() {
                    let c = [0, 1, 2].map(|k| field.add(b[k], field.mul(lambda, a[k])));
                    let p = ProjPoint::new(&field, c).expect("distinct points span a line");
                    if let Some(&id) = index.get(&p) {
                        block.push(id);
                    }
                }
                block.sort_unstable();
                for (s, &x) in block.iter().enumerate() {
                    for &y in &block[s + 1..] {
                        covered[x * v + y] = true;
                    }
                }
                blocks.push(block);
            }
        }
        let q = field.q();
        let unital = Unital::from_blocks(q, blocks).expect("secant lines of the Hermitian curve form a unital");
        HermitianUnital { field, points, index, unital }
    }

    pub fn field(&self) -> &FieldTables {
        &self.field
    }

    pub fn unital(&self) -> &Unital {
        &self.unital
    }

    pub fn into_unital(self) -> Unital {
        self.unital
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn index_of(&self, p: &ProjPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of the distinguished point `E(0,0,1)`; always 0 in lexicographic order.
    pub fn distinguished_point(&self) -> usize {
        self.index[&ProjPoint([Elem::ZERO, Elem::ZERO, Elem::ONE])]
    }

    /// The permutation of isotropic points induced by `m`; `None` if `m` is
    /// singular or does not preserve the isotropic set.
    pub fn permutation_of(&self, m: &Matrix3) -> Option<PointPermutation> {
        let image = self
            .points
            .iter()
            .map(|&p| m.apply_point(&self.field, p).and_then(|img| self.index_of(&img)))
            .collect::<Option<Vec<usize>>>()?;
        PointPermutation::from_images(image)
    }

    /// Orbit of a point under the group generated by `generators`.
    pub fn point_orbit(&self, generators: &[PointPermutation], start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.points.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let img = g.apply(p);
                if !std::mem::replace(&mut seen[img], true) {
                    queue.push_back(img);
                }
            }
        }
        (0..seen.len()).filter(|&p| seen[p]).collect()
    }

    /// Generators for the doubly transitive check: Ξ plus the coordinate reversal.
    pub fn transitivity_generators(&self) -> Vec<PointPermutation> {
        xi_subgroup(&self.field)
            .iter()
            .chain(std::iter::once(&Matrix3::reversal()))
            .map(|m| self.permutation_of(m).expect("generator preserves the Hermitian curve"))
            .collect()
    }

    /// Whether the group generated by `generators` is transitive on ordered
    /// pairs of distinct points. Orbits of a finite group coincide with
    /// forward closures under its generators.
    pub fn is_two_transitive(&self, generators: &[PointPermutation]) -> bool {
        let v = self.points.len();
        if v < 2 {
            return true;
        }
        let mut seen = HashSet::from([(0usize, 1usize)]);
        let mut queue = VecDeque::from([(0usize, 1usize)]);
        while let Some((a, b)) = queue.pop_front() {
            for g in generators {
                let img = (g.apply(a), g.apply(b));
                if seen.insert(img) {
                    queue.push_back(img);
                }
            }
        }
        seen.len() == v * (v - 1)
    }
}

/// The classical unital of order `q`.
pub fn classical_unital(q: usize) -> Result<Unital, FieldError> {
    Ok(HermitianUnital::new(q)?.into_unital())
}

/// Double transitivity of ⟨Ξ, reversal⟩ on the isotropic points.
pub fn check_two_transitive(q: usize) -> Result<bool, FieldError> {
    let h = HermitianUnital::new(q)?;
    let gens = h.transitivity_generators();
    Ok(h.is_two_transitive(&gens))
}
