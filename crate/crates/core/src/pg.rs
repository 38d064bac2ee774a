//! Subspaces of PG(n, q) held as canonical RREF bases.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Scales `v` so its first nonzero coordinate is 1. Returns `false` for the zero vector.
pub fn normalize(f: &Field, v: &mut [Elem]) -> bool {
    let Some(&lead) = v.iter().find(|&&c| c != 0) else {
        return false;
    };
    if lead != 1 {
        let s = f.inv(lead).expect("nonzero");
        v.iter_mut().for_each(|c| *c = f.mul(*c, s));
    }
    true
}

/// In-place reduced row echelon form; zero rows are dropped. Returns pivot columns.
pub fn rref(f: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..width {
        let Some(found) = (top..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(top, found);
        let s = f.inv(rows[top][col]).expect("nonzero pivot");
        rows[top].iter_mut().for_each(|c| *c = f.mul(*c, s));
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let factor = row[col];
            if i != top && factor != 0 {
                let m = f.neg(factor);
                for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = f.add(*x, f.mul(m, y));
                }
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots
}

/// Basis of `{x : r . x = 0 for every row r}` in `width` coordinates.
pub fn null_space(f: &Field, rows: &[Vec<Elem>], width: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free = (0..width).filter(|c| !pivots.contains(c));
    free.map(|fc| {
        let mut v = vec![0; width];
        v[fc] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[fc]);
        }
        v
    })
    .collect()
}

/// Inverse of a square matrix, if invertible.
pub fn invert(f: &Field, m: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Elem::from(i == j)));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row vector times matrix.
pub fn vec_mat(f: &Field, v: &[Elem], m: &[Vec<Elem>]) -> Vec<Elem> {
    let width = m.first().map_or(0, Vec::len);
    let mut out = vec![0; width];
    for (&c, row) in v.iter().zip(m) {
        if c != 0 {
            for (o, &x) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
    }
    out
}

/// All normalized nonzero vectors of length `d` (the points of PG(d-1, q)), unsorted.
pub fn projective_vectors(f: &Field, d: usize) -> Vec<Vec<Elem>> {
    let q = f.q();
    let mut out = Vec::new();
    for lead in 0..d {
        let tail = d - lead - 1;
        for mut code in 0..q.pow(tail as u32) {
            let mut v = vec![0; d];
            v[lead] = 1;
            for c in v[lead + 1..].iter_mut().rev() {
                *c = (code % q) as Elem;
                code /= q;
            }
            out.push(v);
        }
    }
    out
}

/// A point of PG(n, q): coordinates normalized so the first nonzero entry is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Elem>);

impl Point {
    pub fn new(f: &Field, coords: &[Elem]) -> Result<Self> {
        if let Some(&bad) = coords.iter().find(|&&c| !f.is_valid(c as u32)) {
            return Err(Error::InvalidElement(bad as u32));
        }
        let mut v = coords.to_vec();
        if !normalize(f, &mut v) {
            return Err(Error::BadInput("the zero vector is not a point".into()));
        }
        Ok(Point(v))
    }

    pub(crate) fn from_normalized(v: Vec<Elem>) -> Self {
        Point(v)
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    /// Projective dimension of the ambient space.
    pub fn ambient(&self) -> usize {
        self.0.len() - 1
    }

    /// Integer code with `x_0` most significant; orders points lexicographically.
    pub fn code(&self, q: usize) -> u64 {
        self.0.iter().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }
}

/// A projective subspace of PG(n, q) in reduced row echelon form.
///
/// Two subspaces are equal iff their basis matrices are identical. The empty
/// subspace (projective dimension -1) has no rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<Elem>>,
}

impl Subspace {
    /// Canonical subspace spanned by `rows`, each of width `n + 1`.
    pub fn from_rows(f: &Field, n: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        for r in rows {
            if r.len() != n + 1 {
                return Err(Error::WidthMismatch { expected: n + 1, found: r.len() });
            }
            if let Some(&bad) = r.iter().find(|&&c| !f.is_valid(c as u32)) {
                return Err(Error::InvalidElement(bad as u32));
            }
        }
        let mut rows = rows.to_vec();
        rref(f, &mut rows);
        Ok(Subspace { n, rows })
    }

    pub fn empty(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let rows = (0..=n).map(|i| (0..=n).map(|j| Elem::from(i == j)).collect()).collect();
        Subspace { n, rows }
    }

    pub fn from_point(p: &Point) -> Self {
        Subspace { n: p.ambient(), rows: vec![p.0.clone()] }
    }

    /// The coordinate hyperplane `x_i = 0`.
    pub fn coordinate_hyperplane(n: usize, i: usize) -> Self {
        let rows = (0..=n).filter(|&j| j != i).map(|j| (0..=n).map(|c| Elem::from(c == j)).collect()).collect();
        Subspace { n, rows }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Vector-space dimension.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension (-1 for the empty subspace).
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|&c| c != 0).unwrap()).collect()
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(self.n, other.n))
        }
    }

    pub fn span(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        rref(f, &mut rows);
        Ok(Subspace { n: self.n, rows })
    }

    pub fn span_point(&self, f: &Field, p: &Point) -> Result<Subspace> {
        self.span(f, &Subspace::from_point(p))
    }

    /// Dual subspace under the standard dot product.
    pub fn annihilator(&self, f: &Field) -> Subspace {
        let mut rows = null_space(f, &self.rows, self.n + 1);
        rref(f, &mut rows);
        Subspace { n: self.n, rows }
    }

    pub fn meet(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let dual = self.annihilator(f).span(f, &other.annihilator(f))?;
        Ok(dual.annihilator(f))
    }

    /// Whether the vector lies in the row space. Assumes the width matches.
    pub fn contains_vec(&self, f: &Field, v: &[Elem]) -> bool {
        self.coords_of(f, v).is_some()
    }

    pub fn contains(&self, f: &Field, p: &Point) -> Result<bool> {
        if p.ambient() != self.n {
            return Err(Error::AmbientMismatch(self.n, p.ambient()));
        }
        Ok(self.contains_vec(f, p.coords()))
    }

    /// Coordinates of `v` in this basis, when `v` lies in the subspace.
    pub fn coords_of(&self, f: &Field, v: &[Elem]) -> Option<Vec<Elem>> {
        let mut r = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let pc = row.iter().position(|&c| c != 0).unwrap();
            let c = r[pc];
            coords.push(c);
            if c != 0 {
                let m = f.neg(c);
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(m, y));
                }
            }
        }
        r.iter().all(|&c| c == 0).then_some(coords)
    }

    pub fn is_subspace_of(&self, f: &Field, other: &Subspace) -> bool {
        self.n == other.n && self.rows.iter().all(|r| other.contains_vec(f, r))
    }

    /// Number of points, `(q^rank - 1)/(q - 1)`.
    pub fn point_count(&self, q: usize) -> u64 {
        ((q as u64).pow(self.rank() as u32) - 1) / (q as u64 - 1)
    }

    /// All points, sorted lexicographically by coordinates.
    pub fn points(&self, f: &Field) -> Vec<Point> {
        let mut pts: Vec<Point> = projective_vectors(f, self.rank())
            .into_iter()
            .map(|c| {
                // leading coefficient 1 on an RREF basis gives an already normalized vector
                Point(vec_mat(f, &c, &self.rows))
            })
            .collect();
        pts.sort_unstable();
        pts
    }

    /// All hyperplanes of this subspace, in canonical order.
    pub fn hyperplanes(&self, f: &Field) -> Vec<Subspace> {
        let d = self.rank();
        let mut out: Vec<Subspace> = projective_vectors(f, d)
            .into_iter()
            .map(|functional| {
                let kernel = null_space(f, &[functional], d);
                let rows: Vec<Vec<Elem>> = kernel.iter().map(|c| vec_mat(f, c, &self.rows)).collect();
                let mut rows = rows;
                rref(f, &mut rows);
                Subspace { n: self.n, rows }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Re-express a subspace of `PG(m, q)` (`m + 1 = self.rank()`) in ambient coordinates
    /// through this basis: row `y` maps to `y . basis`.
    pub fn lift(&self, f: &Field, inner: &Subspace) -> Result<Subspace> {
        if inner.n + 1 != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: inner.n + 1 });
        }
        let rows: Vec<Vec<Elem>> = inner.rows.iter().map(|r| vec_mat(f, r, &self.rows)).collect();
        Subspace::from_rows(f, self.n, &rows)
    }

    /// Inverse of [`Subspace::lift`]: coordinates of `outer` (which must lie in `self`)
    /// relative to this basis.
    pub fn restrict(&self, f: &Field, outer: &Subspace) -> Result<Subspace> {
        self.same_ambient(outer)?;
        let rows = outer
            .rows
            .iter()
            .map(|r| self.coords_of(f, r).ok_or_else(|| Error::BadInput("subspace not contained".into())))
            .collect::<Result<Vec<_>>>()?;
        Subspace::from_rows(f, self.rank() - 1, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let f = gf(2);
        let s = Subspace::from_rows(&f, 1, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(s.rows(), &[vec![1, 0], vec![0, 1]]);
        let f5 = gf(5);
        let s = Subspace::from_rows(&f5, 2, &[vec![2, 4, 0]]).unwrap();
        assert_eq!(s.rows(), &[vec![1, 2, 0]]);
        let e = Subspace::from_rows(&f, 3, &[]).unwrap();
        assert_eq!(e.dim(), -1);
        assert_eq!(Subspace::from_rows(&f, 2, &[vec![1, 0]]), Err(Error::WidthMismatch { expected: 3, found: 2 }));
    }

    #[test]
    fn span_and_meet_examples() {
        let f = gf(2);
        let p = Subspace::from_rows(&f, 2, &[vec![1, 0, 1]]).unwrap();
        assert_eq!(p.span(&f, &p).unwrap(), p);
        let p2 = Subspace::from_rows(&f, 2, &[vec![0, 1, 1]]).unwrap();
        assert_eq!(p.span(&f, &p2).unwrap().dim(), 1);
        let l1 = Subspace::from_rows(&f, 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let l2 = Subspace::from_rows(&f, 3, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(l1.span(&f, &l2).unwrap(), Subspace::full(3));
        assert!(l1.meet(&f, &l2).unwrap().is_empty());
        assert_eq!(l1.meet(&f, &l1).unwrap(), l1);
        let h1 = Subspace::coordinate_hyperplane(3, 0);
        let h2 = Subspace::coordinate_hyperplane(3, 2);
        assert_eq!(h1.meet(&f, &h2).unwrap().dim(), 1);
        assert!(matches!(l1.span(&f, &Subspace::full(4)), Err(Error::AmbientMismatch(3, 4))));
    }

    #[test]
    fn contains_examples() {
        let f = gf(2);
        let h = Subspace::coordinate_hyperplane(2, 0);
        assert!(!h.contains(&f, &Point::new(&f, &[1, 0, 0]).unwrap()).unwrap());
        let l = Subspace::from_rows(&f, 2, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert!(l.contains(&f, &Point::new(&f, &[1, 1, 0]).unwrap()).unwrap());
        for r in l.rows() {
            assert!(l.contains_vec(&f, r));
        }
    }

    #[test]
    fn point_enumeration() {
        let f = gf(2);
        let p = Point::new(&f, &[0, 1, 1]).unwrap();
        assert_eq!(Subspace::from_point(&p).points(&f), vec![p]);
        assert_eq!(Subspace::full(3).points(&f).len(), 15);
        assert_eq!(Subspace::full(6).points(&f).len(), 127);
        // brute force over all nonzero vectors of GF(3)^4
        let f3 = gf(3);
        let mut brute: Vec<Point> = (1..81u32)
            .map(|mut c| {
                let v: Vec<Elem> = (0..4)
                    .map(|_| {
                        let d = (c % 3) as Elem;
                        c /= 3;
                        d
                    })
                    .collect();
                Point::new(&f3, &v).unwrap()
            })
            .collect();
        brute.sort();
        brute.dedup();
        assert_eq!(Subspace::full(3).points(&f3), brute);
    }

    #[test]
    fn hyperplanes_of_a_plane() {
        let f = gf(3);
        let plane = Subspace::from_rows(&f, 3, &[vec![1, 0, 0, 1], vec![0, 1, 0, 0], vec![0, 0, 1, 2]]).unwrap();
        let hs = plane.hyperplanes(&f);
        assert_eq!(hs.len(), 13);
        assert!(hs.iter().all(|h| h.dim() == 1 && h.is_subspace_of(&f, &plane)));
    }

    #[test]
    fn lift_restrict_inverse() {
        let f = gf(4);
        let base =
            Subspace::from_rows(&f, 4, &[vec![1, 2, 0, 3, 1], vec![0, 0, 1, 1, 2], vec![0, 1, 0, 0, 3]]).unwrap();
        let inner = Subspace::from_rows(&f, 2, &[vec![1, 3, 2]]).unwrap();
        let lifted = base.lift(&f, &inner).unwrap();
        assert!(lifted.is_subspace_of(&f, &base));
        assert_eq!(base.restrict(&f, &lifted).unwrap(), inner);
    }

    #[test]
    fn inverse_matrix() {
        let f = gf(5);
        let m = vec![vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 2]];
        let inv = invert(&f, &m).unwrap();
        for (i, row) in m.iter().enumerate() {
            let prod = vec_mat(&f, row, &inv);
            assert_eq!(prod, (0..3).map(|j| Elem::from(i == j)).collect::<Vec<_>>());
        }
        assert!(invert(&f, &[vec![1, 2], vec![2, 4]]).is_none());
    }

    fn arb_subspace() -> impl Strategy<Value = (u64, usize, Vec<Vec<u8>>, Vec<Vec<u8>>)> {
        (prop::sample::select(vec![2u64, 3, 4]), 1usize..=5).prop_flat_map(|(q, n)| {
            let row = prop::collection::vec(0..q as u8, n + 1);
            let rows = prop::collection::vec(row, 0..=n + 1);
            (Just(q), Just(n), rows.clone(), rows)
        })
    }

    proptest! {
        #[test]
        fn dimension_formula((q, n, a, b) in arb_subspace()) {
            let f = gf(q);
            let a = Subspace::from_rows(&f, n, &a).unwrap();
            let b = Subspace::from_rows(&f, n, &b).unwrap();
            let s = a.span(&f, &b).unwrap();
            let m = a.meet(&f, &b).unwrap();
            prop_assert_eq!(s.dim() + m.dim(), a.dim() + b.dim());
            prop_assert!(m.is_subspace_of(&f, &a) && m.is_subspace_of(&f, &b));
            prop_assert_eq!(a.points(&f).len() as u64, a.point_count(q as usize));
        }

        #[test]
        fn canonical_under_basis_change((q, n, a, _b) in arb_subspace(), seed in any::<u64>()) {
            let f = gf(q);
            let s = Subspace::from_rows(&f, n, &a).unwrap();
            let d = s.rank();
            // a deterministic invertible upper-unitriangular change of basis
            let mut mixed = s.rows().to_vec();
            let mut x = seed;
            for i in 0..d {
                for j in i + 1..d {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let c = ((x >> 33) % q) as u8;
                    let add: Vec<u8> = mixed[j].iter().map(|&v| f.mul(c, v)).collect();
                    for (t, v) in mixed[i].iter_mut().zip(add) { *t = f.add(*t, v); }
                }
            }
            mixed.reverse();
            prop_assert_eq!(Subspace::from_rows(&f, n, &mixed).unwrap(), s);
        }
    }
}
