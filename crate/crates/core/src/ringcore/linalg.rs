//! Sparse exact linear algebra. Columns are ordered by index; pivots are the
//! smallest nonzero column, so with a degree-ascending monomial basis a pivot is
//! the lowest-degree monomial of its row.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::field::{FieldSpec, Scalar};
use super::monomial::MonomialBasis;
use crate::error::{Error, Result};

/// Sorted `(column, nonzero value)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Accumulates `acc += c * v`.
fn axpy(field: &FieldSpec, acc: &mut BTreeMap<usize, Scalar>, c: &Scalar, v: &SparseVec) {
    for (j, x) in v {
        let t = field.mul(c, x);
        match acc.get_mut(j) {
            Some(y) => {
                *y = field.add(y, &t);
                if y.is_zero() {
                    acc.remove(j);
                }
            }
            None => {
                if !t.is_zero() {
                    acc.insert(*j, t);
                }
            }
        }
    }
}

fn sorted_from(map: BTreeMap<usize, Scalar>) -> SparseVec {
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn sparse_add_scaled(field: &FieldSpec, a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut acc: BTreeMap<usize, Scalar> = a.iter().cloned().collect();
    axpy(field, &mut acc, c, b);
    sorted_from(acc)
}

pub fn sparse_get(v: &SparseVec, col: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &v[k].1)
}

/// Reduced row echelon form of a growing span.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: FieldSpec,
    ncols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(field: FieldSpec, ncols: usize) -> Self {
        Echelon { field, ncols, rows: BTreeMap::new() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Rows in ascending pivot order; each has leading coefficient 1.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows.get(&pivot)
    }

    fn check(&self, v: &SparseVec) -> Result<()> {
        if let Some((c, _)) = v.last() {
            if *c >= self.ncols {
                return Err(Error::VectorLength { expected: self.ncols, found: c + 1 });
            }
        }
        Ok(())
    }

    /// Remainder of `v` modulo the span: zero on every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = v.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
        for (c, a) in v {
            if let Some(row) = self.rows.get(c) {
                if a.is_zero() {
                    continue;
                }
                let neg = self.field.neg(a);
                axpy(&self.field, &mut acc, &neg, row);
            }
        }
        sorted_from(acc)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns the new pivot if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> Result<Option<usize>> {
        self.check(v)?;
        let w = self.reduce(v);
        let Some((p, lead)) = w.first().cloned() else {
            return Ok(None);
        };
        let inv = self.field.inv(&lead)?;
        let w: SparseVec = w.into_iter().map(|(c, x)| (c, self.field.mul(&x, &inv))).collect();
        let field = self.field;
        for row in self.rows.values_mut() {
            if let Some(a) = sparse_get(row, p).cloned() {
                *row = sparse_add_scaled(&field, row, &field.neg(&a), &w);
            }
        }
        self.rows.insert(p, w);
        Ok(Some(p))
    }

    pub fn extend<'a, I: IntoIterator<Item = &'a SparseVec>>(&mut self, vs: I) -> Result<()> {
        for v in vs {
            self.insert(v)?;
        }
        Ok(())
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a SparseVec>>(field: FieldSpec, ncols: usize, vs: I) -> Result<Self> {
        let mut e = Echelon::new(field, ncols);
        e.extend(vs)?;
        Ok(e)
    }

    pub fn contains_span(&self, other: &Echelon) -> bool {
        other.rows().all(|r| self.contains(r))
    }

    /// Span equality (RREF is canonical).
    pub fn same_span(&self, other: &Echelon) -> bool {
        self.ncols == other.ncols && self.rows == other.rows
    }

    /// Restricts the span to columns `< ncols` (projection, re-echelonized).
    pub fn project_prefix(&self, ncols: usize) -> Echelon {
        let mut e = Echelon::new(self.field, ncols);
        for r in self.rows.values() {
            let v: SparseVec = r.iter().filter(|(c, _)| *c < ncols).cloned().collect();
            e.insert(&v).expect("prefix columns in range");
        }
        e
    }

    /// Embeds into a space with more columns (the old columns as a prefix).
    pub fn widen(&self, ncols: usize) -> Echelon {
        assert!(ncols >= self.ncols);
        Echelon { field: self.field, ncols, rows: self.rows.clone() }
    }

    /// Canonical key: the RREF rows.
    pub fn key(&self) -> Vec<SparseVec> {
        self.rows.values().cloned().collect()
    }
}

/// Kernel of the linear map that sends the `j`-th unit vector to `images[j]`.
/// The returned basis is in reduced echelon form, in ascending leading column.
pub fn kernel(field: FieldSpec, images: &[SparseVec]) -> Result<Vec<SparseVec>> {
    let ncols = images.len();
    // Transpose into the rows of the matrix, reversing the column order so that
    // pivots land on high original indices and free columns lead kernel vectors.
    let mut by_target: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (j, img) in images.iter().enumerate() {
        for (t, x) in img {
            if !x.is_zero() {
                by_target.entry(*t).or_default().push((ncols - 1 - j, x.clone()));
            }
        }
    }
    let mut ech = Echelon::new(field, ncols);
    for mut row in by_target.into_values() {
        row.sort_by_key(|(c, _)| *c);
        ech.insert(&row)?;
    }
    let mut vecs: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
    for f in 0..ncols {
        if !ech.is_pivot(ncols - 1 - f) {
            vecs.insert(f, BTreeMap::from([(f, Scalar::one())]));
        }
    }
    for (&p, row) in &ech.rows {
        let orig_p = ncols - 1 - p;
        for (c, a) in row.iter().skip(1) {
            let orig_c = ncols - 1 - c;
            if let Some(v) = vecs.get_mut(&orig_c) {
                v.insert(orig_p, field.neg(a));
            }
        }
    }
    Ok(vecs.into_values().map(sorted_from).collect())
}

/// Solves `A x = b` given as rows `(a, b)`. Returns a particular solution (dense)
/// and a null-space basis, or `None` when inconsistent.
pub fn solve_affine(
    field: FieldSpec,
    nunknowns: usize,
    equations: &[(SparseVec, Scalar)],
) -> Result<Option<(Vec<Scalar>, Vec<SparseVec>)>> {
    let mut ech = Echelon::new(field, nunknowns + 1);
    for (a, b) in equations {
        let mut row = a.clone();
        if !b.is_zero() {
            row.push((nunknowns, b.clone()));
        }
        ech.insert(&row)?;
    }
    if ech.is_pivot(nunknowns) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); nunknowns];
    let mut null: BTreeMap<usize, BTreeMap<usize, Scalar>> = (0..nunknowns)
        .filter(|c| !ech.is_pivot(*c))
        .map(|c| (c, BTreeMap::from([(c, Scalar::one())])))
        .collect();
    for (&p, row) in &ech.rows {
        for (c, a) in row.iter().skip(1) {
            if *c == nunknowns {
                x[p] = a.clone();
            } else if let Some(v) = null.get_mut(c) {
                v.insert(p, field.neg(a));
            }
        }
    }
    Ok(Some((x, null.into_values().map(sorted_from).collect())))
}

/// Echelon basis of one graded block, in local (within-degree) coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSlice {
    pub degree: u32,
    pub basis: Vec<SparseVec>,
    pub dimension: usize,
}

/// Graded pieces of the span of `vectors`: for each degree `d < basis.level()`,
/// the degree-`d` parts of span elements whose lowest degree is `d`.
pub fn echelon_span(field: FieldSpec, basis: &MonomialBasis, vectors: &[SparseVec]) -> Result<Vec<DegreeSlice>> {
    let ech = Echelon::from_vectors(field, basis.len(), vectors)?;
    Ok(graded_slices(&ech, basis))
}

pub fn graded_slices(ech: &Echelon, basis: &MonomialBasis) -> Vec<DegreeSlice> {
    let mut by_deg: HashMap<u32, Vec<SparseVec>> = HashMap::new();
    for row in ech.rows() {
        let d = basis.degree_of(row[0].0);
        let range = basis.degree_range(d);
        let local: SparseVec = row.iter().filter(|(c, _)| range.contains(c)).map(|(c, x)| (c - range.start, x.clone())).collect();
        by_deg.entry(d).or_default().push(local);
    }
    (0..basis.level())
        .map(|d| {
            let basis = by_deg.remove(&d).unwrap_or_default();
            DegreeSlice { degree: d, dimension: basis.len(), basis }
        })
        .collect()
}
