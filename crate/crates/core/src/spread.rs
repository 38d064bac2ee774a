//! Spreads of quadrics: sets of pairwise disjoint generators covering every singular point.

use std::collections::HashMap;

use crate::cover::{self, CoverInstance, Mode, SolveOptions};
use crate::error::{Error, Result};
use crate::pg::Subspace;
use crate::quadric::{QuadraticForm, QuadricKind};

/// `q^{(r+e-1)/2} + 1`.
pub fn spread_size(r: usize, kind: QuadricKind, q: u64) -> Result<u64> {
    kind.check_dim(r)?;
    Ok(q.pow(((r + kind.e() as usize - 1) / 2) as u32) + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spread {
    quadric: QuadraticForm,
    members: Vec<Subspace>,
}

impl Spread {
    /// Wraps members without checking them; see [`verify_spread`].
    pub fn new(quadric: QuadraticForm, members: Vec<Subspace>) -> Result<Self> {
        if let Some(m) = members.iter().find(|m| m.ambient() != quadric.dim()) {
            return Err(Error::AmbientMismatch(quadric.dim(), m.ambient()));
        }
        Ok(Spread { quadric, members })
    }

    pub fn quadric(&self) -> &QuadraticForm {
        &self.quadric
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    /// Index of the member containing the given coordinates, if any.
    pub fn member_containing(&self, v: &[crate::gf::Elem]) -> Option<usize> {
        let f = self.quadric.field();
        self.members.iter().position(|m| m.contains_vec(f, v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadReport {
    /// (a) every member is a totally singular subspace of generator dimension
    pub generators: bool,
    /// (b) members are pairwise disjoint
    pub disjoint: bool,
    /// (c) the member count is `q^{(r+e-1)/2} + 1`
    pub cardinality: bool,
    /// (d) the members' points are exactly the singular points
    pub covers: bool,
    pub expected_size: Option<u64>,
    pub messages: Vec<String>,
}

impl SpreadReport {
    pub fn passed(&self) -> bool {
        self.generators && self.disjoint && self.cardinality && self.covers
    }
}

pub fn verify_spread(s: &Spread) -> SpreadReport {
    let form = &s.quadric;
    let f = form.field();
    let q = f.q() as u64;
    let mut messages = Vec::new();

    let gen_dim = form.generator_dim();
    if gen_dim.is_none() {
        messages.push("quadric has no declared type".to_string());
    }
    let mut generators = gen_dim.is_some();
    for (i, m) in s.members.iter().enumerate() {
        let ts = form.is_totally_singular(m).unwrap_or(false);
        if !ts || Some(m.dim()) != gen_dim.map(|d| d as isize) {
            generators = false;
            messages.push(format!("member {i} is not a generator"));
        }
    }

    let mut disjoint = true;
    for i in 0..s.members.len() {
        for j in i + 1..s.members.len() {
            if !s.members[i].meet(f, &s.members[j]).map(|m| m.is_empty()).unwrap_or(false) {
                disjoint = false;
                messages.push(format!("members {i} and {j} meet"));
            }
        }
    }

    let expected_size = form.kind().and_then(|k| spread_size(form.dim(), k, q).ok());
    let cardinality = expected_size == Some(s.members.len() as u64);
    if !cardinality {
        messages.push(format!("{} members, expected {:?}", s.members.len(), expected_size));
    }

    let mut union: Vec<_> = s.members.iter().flat_map(|m| m.points(f)).collect();
    union.sort_unstable();
    union.dedup();
    let covers = union == form.singular_points();
    if !covers {
        messages.push("members do not cover exactly the singular points".to_string());
    }

    SpreadReport { generators, disjoint, cardinality, covers, expected_size, messages }
}

/// Exact-cover search over the generators of a typed quadric.
pub fn find_spreads(form: &QuadraticForm, mode: Mode, opts: SolveOptions) -> Result<SpreadSearch> {
    let inst = spread_instance(form)?;
    let result = cover::solve(&inst.instance, mode, opts);
    let spreads = result
        .solutions
        .iter()
        .map(|sol| {
            let mut members: Vec<Subspace> = sol.0.iter().map(|&i| inst.generators[i].clone()).collect();
            members.sort_unstable();
            Spread::new(form.clone(), members)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpreadSearch { spreads, count: result.count })
}

#[derive(Debug, Clone)]
pub struct SpreadSearch {
    pub spreads: Vec<Spread>,
    pub count: u64,
}

/// Cover instance over singular-point indices together with the generator list.
pub struct SpreadInstance {
    pub instance: CoverInstance,
    pub generators: Vec<Subspace>,
}

pub fn spread_instance(form: &QuadraticForm) -> Result<SpreadInstance> {
    let f = form.field();
    let q = f.q();
    let index: HashMap<u64, usize> = form.singular_points().iter().enumerate().map(|(i, p)| (p.code(q), i)).collect();
    let generators = form.generators()?;
    let candidates = generators.iter().map(|g| g.points(f).iter().map(|p| index[&p.code(q)]).collect()).collect();
    Ok(SpreadInstance { instance: CoverInstance::new(index.len(), candidates)?, generators })
}
