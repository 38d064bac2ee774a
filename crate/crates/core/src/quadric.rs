//! Quadratic forms on PG(r, q).
//!
//! A form is stored as an upper-triangular Gram matrix `G`, so that
//! `Q(x) = sum_{i <= j} G[i][j] x_i x_j`. The polar form is `b(x, y) = x (G + G^T) y^T`.
//! Sections are classified by comparing singular-point counts against the
//! closed-form counts for each rank, which works uniformly in every characteristic.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::pg::{null_space, projective_vectors, rref, vec_mat, Point, Subspace};

/// Type of a non-degenerate quadric, with `e = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuadricKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

impl QuadricKind {
    pub fn e(self) -> u8 {
        match self {
            QuadricKind::Hyperbolic => 0,
            QuadricKind::Parabolic => 1,
            QuadricKind::Elliptic => 2,
        }
    }

    pub fn from_e(e: u8) -> Option<Self> {
        match e {
            0 => Some(QuadricKind::Hyperbolic),
            1 => Some(QuadricKind::Parabolic),
            2 => Some(QuadricKind::Elliptic),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuadricKind::Hyperbolic => "hyperbolic",
            QuadricKind::Parabolic => "parabolic",
            QuadricKind::Elliptic => "elliptic",
        }
    }

    /// Checks the parity of `r` against the type and that `r >= e + 1`.
    pub fn check_dim(self, r: usize) -> Result<()> {
        let e = self.e();
        if (r + e as usize).is_multiple_of(2) {
            return Err(Error::ParityMismatch { r, e });
        }
        if r < e as usize + 1 {
            return Err(Error::DimensionTooSmall { r, e });
        }
        Ok(())
    }
}

impl fmt::Display for QuadricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuadricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperbolic" => Ok(QuadricKind::Hyperbolic),
            "parabolic" => Ok(QuadricKind::Parabolic),
            "elliptic" => Ok(QuadricKind::Elliptic),
            other => Err(Error::BadInput(format!("unknown quadric kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    /// The form vanishes identically on the section.
    ZeroForm,
}

impl SectionKind {
    pub fn name(self) -> &'static str {
        match self {
            SectionKind::Hyperbolic => "hyperbolic",
            SectionKind::Parabolic => "parabolic",
            SectionKind::Elliptic => "elliptic",
            SectionKind::ZeroForm => "zero-form",
        }
    }

    pub fn quadric_kind(self) -> Option<QuadricKind> {
        match self {
            SectionKind::Hyperbolic => Some(QuadricKind::Hyperbolic),
            SectionKind::Parabolic => Some(QuadricKind::Parabolic),
            SectionKind::Elliptic => Some(QuadricKind::Elliptic),
            SectionKind::ZeroForm => None,
        }
    }
}

/// Classification of a form restricted to a subspace: a cone with vertex the
/// radical over a non-degenerate base of `reduced_rank` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionClass {
    pub radical_dim: isize,
    pub reduced_rank: usize,
    pub kind: SectionKind,
}

impl SectionClass {
    pub fn is_nondegenerate(&self) -> bool {
        self.radical_dim < 0
    }

    /// `Some(kind)` exactly when the section is a non-degenerate quadric.
    pub fn nondegenerate_kind(&self) -> Option<QuadricKind> {
        if self.is_nondegenerate() {
            self.kind.quadric_kind()
        } else {
            None
        }
    }
}

impl fmt::Display for SectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} of rank {}, radical dim {}", self.kind.name(), self.reduced_rank, self.radical_dim)
    }
}

/// Number of points of a non-degenerate quadric in `rank` variables.
pub fn nondegenerate_point_count(rank: usize, kind: SectionKind, q: u64) -> Option<u64> {
    match (kind, rank) {
        (SectionKind::ZeroForm, 0) => Some(0),
        (SectionKind::Parabolic, n) if n % 2 == 1 => Some((q.pow(n as u32 - 1) - 1) / (q - 1)),
        (SectionKind::Hyperbolic, n) if n % 2 == 0 && n > 0 => {
            let m = n as u32 / 2;
            Some((q.pow(m - 1) + 1) * (q.pow(m) - 1) / (q - 1))
        }
        (SectionKind::Elliptic, n) if n % 2 == 0 && n > 0 => {
            let m = n as u32 / 2;
            Some((q.pow(m - 1) - 1) * (q.pow(m) + 1) / (q - 1))
        }
        _ => None,
    }
}

/// Number of generators of the non-degenerate quadric `Q_{r,e}`.
pub fn generator_count(r: usize, kind: QuadricKind, q: u64) -> u64 {
    // Q+(2n-1): prod_{i=0}^{n-1} (q^i+1); Q(2n): prod_{i=1}^{n}; Q-(2n+1): prod_{i=2}^{n+1}
    let (lo, hi) = match kind {
        QuadricKind::Hyperbolic => (0, r.div_ceil(2) - 1),
        QuadricKind::Parabolic => (1, r / 2),
        QuadricKind::Elliptic => (2, r.div_ceil(2)),
    };
    (lo..=hi).map(|i| q.pow(i as u32) + 1).product()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: Field,
    dim: usize,
    gram: Vec<Vec<Elem>>,
    /// `G + G^T`
    polar: Vec<Vec<Elem>>,
    kind: Option<QuadricKind>,
}

impl QuadraticForm {
    /// A form on PG(r, q) with `r + 1 = gram.len()`. A declared kind is checked
    /// against the classification of the full space.
    pub fn new(field: &Field, gram: Vec<Vec<Elem>>, kind: Option<QuadricKind>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::BadInput("empty Gram matrix".into()));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::WidthMismatch { expected: n, found: row.len() });
            }
            if let Some(&bad) = row.iter().find(|&&c| !field.is_valid(c as u32)) {
                return Err(Error::InvalidElement(bad as u32));
            }
            if row[..i].iter().any(|&c| c != 0) {
                return Err(Error::BadInput("Gram matrix is not upper triangular".into()));
            }
        }
        let polar = (0..n).map(|i| (0..n).map(|j| field.add(gram[i][j], gram[j][i])).collect()).collect();
        let form = QuadraticForm { field: field.clone(), dim: n - 1, gram, polar, kind: None };
        match kind {
            None => Ok(form),
            Some(k) => form.with_kind(k),
        }
    }

    /// Declares the type after checking it against the classification.
    pub fn with_kind(mut self, kind: QuadricKind) -> Result<Self> {
        kind.check_dim(self.dim)?;
        let class = self.classify_section(&Subspace::full(self.dim));
        if class.nondegenerate_kind() != Some(kind) {
            return Err(Error::TypeMismatch { declared: kind.e(), actual: class.to_string() });
        }
        self.kind = Some(kind);
        Ok(self)
    }

    /// Standard form of `Q_{r,e}`: `x0x1 + x2x3 + ...` (hyperbolic),
    /// `x0^2 + x1x2 + ...` (parabolic), or the hyperbolic pairs followed by an
    /// irreducible binary form `x^2 + c xy + d y^2` on the last two coordinates (elliptic).
    pub fn standard(r: usize, kind: QuadricKind, field: &Field) -> Result<Self> {
        kind.check_dim(r)?;
        let mut g = vec![vec![0; r + 1]; r + 1];
        let first_pair = match kind {
            QuadricKind::Parabolic => {
                g[0][0] = 1;
                1
            }
            _ => 0,
        };
        let last_pair = match kind {
            QuadricKind::Elliptic => r - 1,
            _ => r + 1,
        };
        for i in (first_pair..last_pair).step_by(2) {
            g[i][i + 1] = 1;
        }
        if kind == QuadricKind::Elliptic {
            let (c, d) = irreducible_binary(field);
            g[r - 1][r - 1] = 1;
            g[r - 1][r] = c;
            g[r][r] = d;
        }
        QuadraticForm::new(field, g, Some(kind))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Projective dimension `r` of the ambient space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &[Vec<Elem>] {
        &self.gram
    }

    pub fn kind(&self) -> Option<QuadricKind> {
        self.kind
    }

    /// Projective dimension of the generators, `(r - e - 1)/2`, for a typed form.
    pub fn generator_dim(&self) -> Option<usize> {
        self.kind.map(|k| (self.dim - k.e() as usize - 1) / 2)
    }

    fn check_len(&self, x: &[Elem]) -> Result<()> {
        if x.len() == self.dim + 1 {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim + 1, found: x.len() })
        }
    }

    pub fn eval(&self, x: &[Elem]) -> Result<Elem> {
        self.check_len(x)?;
        Ok(self.value(x))
    }

    /// `Q(x)` without the length check.
    pub fn value(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let inner = row[i..].iter().zip(&x[i..]).fold(0, |a, (&g, &y)| f.add(a, f.mul(g, y)));
            acc = f.add(acc, f.mul(x[i], inner));
        }
        acc
    }

    pub fn polar(&self, x: &[Elem], y: &[Elem]) -> Result<Elem> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bilinear(x, y))
    }

    /// `b(x, y)` without the length check.
    pub fn bilinear(&self, x: &[Elem], y: &[Elem]) -> Elem {
        self.field.dot(&vec_mat(&self.field, x, &self.polar), y)
    }

    /// The linear functionals `b(s, .)` for the basis rows of `s`.
    fn polar_rows(&self, s: &Subspace) -> Vec<Vec<Elem>> {
        s.rows().iter().map(|r| vec_mat(&self.field, r, &self.polar)).collect()
    }

    pub fn perp(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: s.ambient() });
        }
        let rows = null_space(&self.field, &self.polar_rows(s), self.dim + 1);
        Subspace::from_rows(&self.field, self.dim, &rows)
    }

    /// Radical of the polar form.
    pub fn polar_radical(&self) -> Subspace {
        self.perp(&Subspace::full(self.dim)).expect("same ambient")
    }

    /// The nucleus: the radical of the polar form when it is a single non-singular point.
    pub fn nucleus(&self) -> Option<Point> {
        let rad = self.polar_radical();
        if rad.rank() != 1 || self.value(&rad.rows()[0]) == 0 {
            return None;
        }
        Point::new(&self.field, &rad.rows()[0]).ok()
    }

    pub fn is_singular(&self, p: &Point) -> bool {
        self.value(p.coords()) == 0
    }

    /// All singular points of PG(r, q), lexicographically ordered.
    pub fn singular_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = projective_vectors(&self.field, self.dim + 1)
            .into_iter()
            .filter(|v| self.value(v) == 0)
            .map(Point::from_normalized)
            .collect();
        pts.sort_unstable();
        pts
    }

    pub fn is_totally_singular(&self, s: &Subspace) -> Result<bool> {
        if s.ambient() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: s.ambient() });
        }
        let rows = s.rows();
        Ok(rows
            .iter()
            .enumerate()
            .all(|(i, x)| self.value(x) == 0 && rows[i + 1..].iter().all(|y| self.bilinear(x, y) == 0)))
    }

    /// All generators, each a totally singular subspace of projective dimension
    /// `(r - e - 1)/2`, found by level-wise extension with canonical dedup.
    pub fn generators(&self) -> Result<Vec<Subspace>> {
        let target = self.generator_dim().ok_or(Error::DegenerateForm)?;
        let f = &self.field;
        let singular = self.singular_points();
        let mut level: Vec<Subspace> = singular.iter().map(Subspace::from_point).collect();
        for _ in 0..target {
            let mut next = HashSet::new();
            for s in &level {
                let functionals = self.polar_rows(s);
                for p in &singular {
                    if functionals.iter().all(|l| f.dot(l, p.coords()) == 0) && !s.contains_vec(f, p.coords()) {
                        next.insert(s.span_point(f, p)?);
                    }
                }
            }
            level = next.into_iter().collect();
            level.sort_unstable();
        }
        Ok(level)
    }

    /// The form restricted to `s`, in the coordinates of its canonical basis.
    pub fn restrict(&self, s: &Subspace) -> Result<QuadraticForm> {
        if s.is_empty() {
            return Err(Error::BadInput("cannot restrict to the empty subspace".into()));
        }
        self.restrict_to_basis(s.rows())
    }

    /// The form in the coordinates given by an explicit basis (row vectors).
    pub fn restrict_to_basis(&self, basis: &[Vec<Elem>]) -> Result<QuadraticForm> {
        if basis.is_empty() {
            return Err(Error::BadInput("cannot restrict to the empty subspace".into()));
        }
        for b in basis {
            self.check_len(b)?;
        }
        QuadraticForm::new(&self.field, self.restricted_gram(basis), None)
    }

    fn restricted_gram(&self, basis: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        let d = basis.len();
        let mut g = vec![vec![0; d]; d];
        for i in 0..d {
            g[i][i] = self.value(&basis[i]);
            for j in i + 1..d {
                g[i][j] = self.bilinear(&basis[i], &basis[j]);
            }
        }
        g
    }

    /// Classifies `Q` restricted to `s` as a cone over a non-degenerate quadric.
    pub fn classify_section(&self, s: &Subspace) -> SectionClass {
        let f = &self.field;
        let d = s.rank();
        if d == 0 {
            return SectionClass { radical_dim: -1, reduced_rank: 0, kind: SectionKind::ZeroForm };
        }
        let g = self.restricted_gram(s.rows());
        let local = QuadraticForm::new(f, g, None).expect("valid restricted Gram matrix");
        let radical = local.singular_radical();
        let rho = radical.len();

        // complement of the radical inside the coefficient space
        let mut basis = radical.clone();
        let mut complement = Vec::new();
        for i in 0..d {
            let unit: Vec<Elem> = (0..d).map(|j| Elem::from(i == j)).collect();
            let mut trial = basis.clone();
            trial.push(unit.clone());
            if rref(f, &mut trial).len() > basis.len() {
                basis.push(unit.clone());
                complement.push(unit);
            }
        }
        let reduced_rank = complement.len();
        let q = f.q() as u64;
        let kind = if reduced_rank == 0 {
            SectionKind::ZeroForm
        } else {
            let base_gram = local.restricted_gram(&complement);
            let base = QuadraticForm::new(f, base_gram, None).expect("valid Gram matrix");
            let count = projective_vectors(f, reduced_rank).iter().filter(|v| base.value(v) == 0).count() as u64;
            [SectionKind::Hyperbolic, SectionKind::Parabolic, SectionKind::Elliptic]
                .into_iter()
                .find(|&k| nondegenerate_point_count(reduced_rank, k, q) == Some(count))
                .unwrap_or_else(|| panic!("no quadric of rank {reduced_rank} over GF({q}) has {count} points"))
        };
        SectionClass { radical_dim: rho as isize - 1, reduced_rank, kind }
    }

    /// Basis (coefficient vectors) of the singular vectors in the polar radical.
    fn singular_radical(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let mut rad = null_space(f, &self.polar, self.dim + 1);
        if rad.is_empty() || f.p() != 2 {
            // odd characteristic: Q(x) = b(x, x)/2 vanishes on the polar radical
            rref(f, &mut rad);
            return rad;
        }
        // In characteristic 2, Q(sum c_i v_i) = (sum c_i sqrt(Q(v_i)))^2 on the radical,
        // so the singular part is the kernel of a linear functional.
        let half = f.q() as u64 / 2;
        let functional: Vec<Elem> = rad.iter().map(|v| f.pow(self.value(v), half)).collect();
        let kernel = null_space(f, &[functional], rad.len());
        let mut out: Vec<Vec<Elem>> = kernel.iter().map(|c| vec_mat(f, c, &rad)).collect();
        rref(f, &mut out);
        out
    }
}

/// Lexicographically first `(c, d)` with `x^2 + c x + d` irreducible.
fn irreducible_binary(f: &Field) -> (Elem, Elem) {
    for c in f.elements() {
        for d in f.elements() {
            let has_root = f.elements().any(|t| f.add(f.add(f.mul(t, t), f.mul(c, t)), d) == 0);
            if !has_root {
                return (c, d);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}
