//! Reference implementations used as test oracles. They share no code with the
//! library beyond the field's modulus and element-code convention.
#![allow(dead_code)]

/// Naive GF(p^k): elements are base-p digit strings, multiplication is
/// schoolbook polynomial multiplication followed by reduction.
pub struct RefField {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    modulus: Vec<u32>,
}

impl RefField {
    pub fn new(p: u32, k: u32, modulus: &[u32]) -> Self {
        RefField { p, k, q: p.pow(k), modulus: modulus.to_vec() }
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        (0..self.k).map(|i| (a / self.p.pow(i)) % self.p).collect()
    }

    fn code(&self, d: &[u32]) -> u32 {
        d.iter().enumerate().map(|(i, &c)| c * self.p.pow(i as u32)).sum()
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.code(&x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.code(&self.digits(a).iter().map(|&c| (self.p - c) % self.p).collect::<Vec<_>>())
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut prod = vec![0u32; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        // reduce by the monic modulus of degree k
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c != 0 {
                for (i, &m) in self.modulus.iter().enumerate() {
                    let idx = d - k + i;
                    prod[idx] = (prod[idx] + self.p * self.p - c * m % self.p) % self.p;
                }
            }
        }
        self.code(&prod[..k])
    }

    pub fn inv(&self, a: u32) -> u32 {
        (1..self.q).find(|&b| self.mul(a, b) == 1).expect("nonzero element")
    }

    pub fn pow(&self, a: u32, e: u32) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn dot(&self, x: &[u32], y: &[u32]) -> u32 {
        x.iter().zip(y).fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    /// Every vector of length `n`, including zero.
    pub fn all_vectors(&self, n: usize) -> Vec<Vec<u32>> {
        let total = (self.q as usize).pow(n as u32);
        (0..total)
            .map(|mut c| {
                (0..n)
                    .map(|_| {
                        let d = (c % self.q as usize) as u32;
                        c /= self.q as usize;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    /// Rank by plain Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<u32>> = rows.to_vec();
        let width = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..width {
            let Some(pivot) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
            m.swap(rank, pivot);
            let inv = self.inv(m[rank][col]);
            let prow: Vec<u32> = m[rank].iter().map(|&x| self.mul(x, inv)).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && row[col] != 0 {
                    let c = self.neg(row[col]);
                    for (x, &y) in row.iter_mut().zip(&prow) {
                        *x = self.add(*x, self.mul(c, y));
                    }
                }
            }
            m[rank] = prow;
            rank += 1;
        }
        rank
    }

    /// `Q(x) = sum_{i <= j} g_ij x_i x_j`.
    pub fn eval(&self, gram: &[Vec<u8>], x: &[u32]) -> u32 {
        let mut acc = 0;
        for i in 0..x.len() {
            for j in i..x.len() {
                acc = self.add(acc, self.mul(gram[i][j] as u32, self.mul(x[i], x[j])));
            }
        }
        acc
    }

    /// Vectors of the span of `rows` (with zero).
    pub fn span_vectors(&self, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let n = rows.first().map_or(0, Vec::len);
        self.all_vectors(rows.len())
            .into_iter()
            .map(|c| {
                let mut v = vec![0; n];
                for (ci, r) in c.iter().zip(rows) {
                    for (x, &y) in v.iter_mut().zip(r) {
                        *x = self.add(*x, self.mul(*ci, y));
                    }
                }
                v
            })
            .collect()
    }

    /// Scales a nonzero vector so its first nonzero entry is 1.
    pub fn normalized(&self, v: &[u32]) -> Vec<u32> {
        let lead = *v.iter().find(|&&c| c != 0).expect("nonzero");
        let inv = self.inv(lead);
        v.iter().map(|&c| self.mul(c, inv)).collect()
    }

    /// Projective points of the span, as normalized vectors.
    pub fn span_points(&self, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut pts: Vec<Vec<u32>> = self
            .span_vectors(rows)
            .into_iter()
            .filter(|v| v.iter().any(|&c| c != 0))
            .map(|v| self.normalized(&v))
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn in_span(&self, rows: &[Vec<u32>], v: &[u32]) -> bool {
        let mut ext = rows.to_vec();
        ext.push(v.to_vec());
        self.rank(&ext) == self.rank(rows)
    }
}

pub fn ref_field(f: &qsl_core::Field) -> RefField {
    RefField::new(f.p(), f.k(), f.modulus())
}

pub fn rows_u32(rows: &[Vec<u8>]) -> Vec<Vec<u32>> {
    rows.iter().map(|r| r.iter().map(|&c| c as u32).collect()).collect()
}

/// Normalized singular points of the form, by brute force over all vectors.
pub fn singular_points(rf: &RefField, gram: &[Vec<u8>]) -> Vec<Vec<u32>> {
    let n = gram.len();
    let mut pts: Vec<Vec<u32>> = rf
        .all_vectors(n)
        .into_iter()
        .filter(|v| v.iter().any(|&c| c != 0) && rf.eval(gram, v) == 0)
        .map(|v| rf.normalized(&v))
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Closed-form point count of a non-degenerate quadric in PG(r, q).
pub fn quadric_size(r: u32, e: u32, q: u64) -> u64 {
    let n = r + 1;
    match e {
        1 => (q.pow(n - 1) - 1) / (q - 1),
        0 => (q.pow(n / 2 - 1) + 1) * (q.pow(n / 2) - 1) / (q - 1),
        _ => (q.pow(n / 2 - 1) - 1) * (q.pow(n / 2) + 1) / (q - 1),
    }
}

/// Checks that the given generators' point sets partition the singular points.
pub fn partitions_quadric(rf: &RefField, gram: &[Vec<u8>], members: &[Vec<Vec<u32>>]) -> bool {
    let mut union: Vec<Vec<u32>> = members.iter().flat_map(|m| rf.span_points(m)).collect();
    let total = union.len();
    union.sort();
    union.dedup();
    total == union.len() && union == singular_points(rf, gram)
}

/// Checks that every point outside the hyperplane `h` lies in exactly one member.
pub fn partitions_affine_space(rf: &RefField, h: &[Vec<u32>], members: &[Vec<Vec<u32>>]) -> bool {
    let n = h[0].len();
    let affine: Vec<Vec<u32>> = rf
        .all_vectors(n)
        .into_iter()
        .filter(|v| v.iter().any(|&c| c != 0))
        .map(|v| rf.normalized(&v))
        .filter(|v| !rf.in_span(h, v))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    affine.iter().all(|v| members.iter().filter(|m| rf.in_span(m, v)).count() == 1)
}

/// Projective subspaces of PG(n, q) of the given rank that are not inside the
/// hyperplane `x_n = 0`, together with the indices (into `affine`) of their points
/// off that hyperplane. `affine` lists the normalized vectors with last coordinate 1.
pub struct AffineBlocks {
    pub affine: Vec<Vec<u8>>,
    pub blocks: Vec<qsl_core::Subspace>,
    pub block_points: Vec<Vec<usize>>,
}

pub fn affine_blocks(f: &qsl_core::Field, n: usize, rank: usize) -> AffineBlocks {
    use qsl_core::pg::projective_vectors;
    use qsl_core::{Point, Subspace};
    let affine: Vec<Vec<u8>> = projective_vectors(f, n + 1).into_iter().filter(|v| v[n] != 0).collect();
    let index = |v: &[u8]| affine.iter().position(|p| p == v).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    let mut stack: Vec<Subspace> = affine.iter().map(|p| Subspace::from_point(&Point::new(f, p).unwrap())).collect();
    while let Some(s) = stack.pop() {
        if s.rank() == rank {
            seen.insert(s);
            continue;
        }
        for p in &affine {
            if !s.contains_vec(f, p) {
                let next = s.span_point(f, &Point::new(f, p).unwrap()).unwrap();
                if !seen.contains(&next) {
                    stack.push(next);
                }
            }
        }
    }
    let blocks: Vec<Subspace> = seen.into_iter().collect();
    let block_points = blocks
        .iter()
        .map(|s| s.points(f).iter().filter(|p| p.coords()[n] != 0).map(|p| index(p.coords())).collect())
        .collect();
    AffineBlocks { affine, blocks, block_points }
}
