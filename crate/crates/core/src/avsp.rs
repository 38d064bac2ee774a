//! Affine vector space partitions (avsps) of PG(r+1, q).
//!
//! An avsp is a hyperplane `H` together with members, none inside `H`, such that
//! every point off `H` lies in exactly one member. The optional context carries a
//! quadric living in `H` and a fixed generator `pi` of it. The context quadric is
//! written in the coordinates of the canonical basis of `H`: the point with
//! coordinates `y` is `y . H.rows()`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::pg::Subspace;
use crate::quadric::{QuadraticForm, QuadricKind, SectionKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvspContext {
    /// Non-degenerate quadric in the coordinates of `H`.
    pub quadric: QuadraticForm,
    /// Fixed generator, in ambient coordinates.
    pub pi: Subspace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Avsp {
    field: Field,
    ambient: usize,
    h: Subspace,
    members: Vec<Subspace>,
    context: Option<AvspContext>,
}

impl Avsp {
    pub fn new(
        field: &Field,
        ambient: usize,
        h: Subspace,
        members: Vec<Subspace>,
        context: Option<AvspContext>,
    ) -> Result<Self> {
        for s in std::iter::once(&h).chain(&members) {
            if s.ambient() != ambient {
                return Err(Error::AmbientMismatch(ambient, s.ambient()));
            }
        }
        if let Some(ctx) = &context {
            if ctx.pi.ambient() != ambient {
                return Err(Error::AmbientMismatch(ambient, ctx.pi.ambient()));
            }
            if ctx.quadric.field() != field {
                return Err(Error::BadInput("context quadric is over a different field".into()));
            }
            if ctx.quadric.dim() + 1 != h.rank() {
                return Err(Error::DimensionMismatch { expected: h.rank(), found: ctx.quadric.dim() + 1 });
            }
        }
        Ok(Avsp { field: field.clone(), ambient, h, members, context })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Projective dimension `r + 1` of the ambient space.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn hyperplane(&self) -> &Subspace {
        &self.h
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn context(&self) -> Option<&AvspContext> {
        self.context.as_ref()
    }

    pub fn with_context(mut self, context: Option<AvspContext>) -> Result<Self> {
        let Avsp { field, ambient, h, members, .. } = self;
        self = Avsp::new(&field, ambient, h, members, context)?;
        Ok(self)
    }

    /// Map from affine point code to the indices of the members containing it.
    fn coverage(&self) -> HashMap<u64, Vec<usize>> {
        let q = self.field.q();
        let mut cov: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, m) in self.members.iter().enumerate() {
            for p in m.points(&self.field) {
                if !self.h.contains_vec(&self.field, p.coords()) {
                    cov.entry(p.code(q)).or_default().push(i);
                }
            }
        }
        cov
    }

    /// Generators of the context-style quadric `quadric` (in `H` coordinates), lifted to
    /// the ambient space, that are disjoint from every `S_i` meet `H`.
    pub fn candidate_pis(&self, quadric: &QuadraticForm) -> Result<Vec<Subspace>> {
        let f = &self.field;
        let sections = self.members.iter().map(|m| m.meet(f, &self.h)).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for g in quadric.generators()? {
            let lifted = self.h.lift(f, &g)?;
            if sections.iter().all(|s| s.meet(f, &lifted).map(|m| m.is_empty()).unwrap_or(false)) {
                out.push(lifted);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvspReport {
    pub hyperplane: bool,
    /// (a) no member is contained in `H`
    pub none_in_h: bool,
    /// (b) every affine point is covered exactly once
    pub exact_cover: bool,
    pub uncovered: usize,
    pub overcovered: usize,
    pub messages: Vec<String>,
}

impl AvspReport {
    pub fn passed(&self) -> bool {
        self.hyperplane && self.none_in_h && self.exact_cover
    }
}

pub fn verify_avsp(a: &Avsp) -> AvspReport {
    let f = &a.field;
    let q = f.q();
    let mut messages = Vec::new();
    let hyperplane = a.h.rank() == a.ambient;
    if !hyperplane {
        messages.push(format!("H has projective dimension {}, expected {}", a.h.dim(), a.ambient - 1));
    }
    let mut none_in_h = true;
    for (i, m) in a.members.iter().enumerate() {
        if m.is_subspace_of(f, &a.h) {
            none_in_h = false;
            messages.push(format!("member {i} is contained in H"));
        }
    }
    let cov = a.coverage();
    let overcovered = cov.values().filter(|v| v.len() > 1).count();
    let affine_total = (q as u64).pow(a.ambient as u32);
    let uncovered = (affine_total - cov.len() as u64) as usize;
    if overcovered > 0 {
        messages.push(format!("{overcovered} affine points lie in more than one member"));
    }
    if uncovered > 0 {
        messages.push(format!("{uncovered} affine points are not covered"));
    }
    let exact_cover = hyperplane && uncovered == 0 && overcovered == 0;
    AvspReport { hyperplane, none_in_h, exact_cover, uncovered, overcovered, messages }
}

fn require_valid(a: &Avsp) -> Result<HashMap<u64, Vec<usize>>> {
    let report = verify_avsp(a);
    if report.passed() {
        Ok(a.coverage())
    } else {
        Err(Error::InvalidAvsp(report.messages.join("; ")))
    }
}

/// Multiset of member ranks (projective dimension + 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvspType(pub BTreeMap<usize, usize>);

impl AvspType {
    /// Sum over members of the number of affine points they carry.
    pub fn affine_points(&self, q: u64) -> u64 {
        // a member of rank d not in H meets H in rank d - 1
        self.0.iter().map(|(&d, &m)| m as u64 * q.pow(d as u32 - 1)).sum()
    }
}

impl fmt::Display for AvspType {
    /// Renders as `4^8` or `3^2 1^4`, largest rank first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().rev().map(|(d, m)| format!("{d}^{m}")).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn avsp_type(a: &Avsp) -> Result<AvspType> {
    require_valid(a)?;
    let mut t = BTreeMap::new();
    for m in &a.members {
        *t.entry(m.rank()).or_insert(0) += 1;
    }
    Ok(AvspType(t))
}

/// Tight: no point lies on every member.
pub fn is_tight(a: &Avsp) -> Result<bool> {
    require_valid(a)?;
    let f = &a.field;
    let mut common = Subspace::full(a.ambient);
    for m in &a.members {
        common = common.meet(f, m)?;
        if common.is_empty() {
            return Ok(true);
        }
    }
    Ok(common.is_empty())
}

/// A proper subspace `U` whose contained members form an avsp of `U`, if one exists.
///
/// Any such `U` holds at least two members, and contains the closure of any pair
/// of them: the span of the current set, extended by the member covering each
/// affine point of that span, until stable. Checking every pair is therefore exhaustive.
pub fn reducibility_witness(a: &Avsp) -> Result<Option<Subspace>> {
    let cov = require_valid(a)?;
    let f = &a.field;
    let q = f.q();
    let full_rank = a.ambient + 1;
    for i in 0..a.members.len() {
        for j in i + 1..a.members.len() {
            let mut set: BTreeSet<usize> = [i, j].into();
            let mut span = a.members[i].span(f, &a.members[j])?;
            loop {
                if span.rank() == full_rank {
                    break;
                }
                let before = set.len();
                for p in span.points(f) {
                    if !a.h.contains_vec(f, p.coords()) {
                        set.insert(cov[&p.code(q)][0]);
                    }
                }
                if set.len() == before {
                    return Ok(Some(span));
                }
                for &k in &set {
                    span = span.span(f, &a.members[k])?;
                }
            }
        }
    }
    Ok(None)
}

/// Why an avsp failed to classify, by the first condition that broke.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassFailure {
    /// The context quadric is degenerate or `H` is not a hyperplane.
    BadQuadric,
    ContextNotGenerator,
    MemberCount {
        found: usize,
        expected: u64,
    },
    MemberDimension {
        member: usize,
        found: isize,
        expected: usize,
    },
    SectionNotGenerator {
        member: usize,
    },
    RepeatedGenerator {
        first: usize,
        second: usize,
    },
    MeetsFixedGenerator {
        member: usize,
    },
    MeetTooLarge {
        first: usize,
        second: usize,
    },
    SpanNotHyperbolic {
        first: usize,
        second: usize,
    },
}

impl fmt::Display for ClassFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ClassFailure::*;
        match self {
            BadQuadric => write!(f, "context quadric is not a non-degenerate quadric of H"),
            ContextNotGenerator => write!(f, "fixed subspace pi is not a generator of the quadric"),
            MemberCount { found, expected } => write!(f, "{found} members, expected {expected}"),
            MemberDimension { member, found, expected } => {
                write!(f, "member {member} has dimension {found}, expected {expected}")
            }
            SectionNotGenerator { member } => write!(f, "member {member} does not meet H in a generator"),
            RepeatedGenerator { first, second } => {
                write!(f, "members {first} and {second} meet H in the same generator")
            }
            MeetsFixedGenerator { member } => write!(f, "member {member} meets H in a generator meeting pi"),
            MeetTooLarge { first, second } => write!(f, "members {first} and {second} share more than a point"),
            SpanNotHyperbolic { first, second } => {
                write!(f, "span of members {first} and {second} does not meet the quadric in a hyperbolic quadric")
            }
        }
    }
}

impl ClassFailure {
    pub fn code(&self) -> &'static str {
        use ClassFailure::*;
        match self {
            BadQuadric => "bad-quadric",
            ContextNotGenerator => "pi-not-generator",
            MemberCount { .. } => "member-count",
            MemberDimension { .. } => "member-dimension",
            SectionNotGenerator { .. } => "section-not-generator",
            RepeatedGenerator { .. } => "repeated-generator",
            MeetsFixedGenerator { .. } => "condition-1",
            MeetTooLarge { .. } => "condition-2",
            SpanNotHyperbolic { .. } => "condition-3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: Option<QuadricKind>,
    pub failure: Option<ClassFailure>,
    /// `S_i` meet `H`, in ambient coordinates, when computed.
    pub sections: Vec<Subspace>,
    /// Number of pairs whose sections share exactly one point.
    pub meeting_pairs: usize,
}

impl Classification {
    fn fail(failure: ClassFailure, sections: Vec<Subspace>) -> Self {
        Classification { class: None, failure: Some(failure), sections, meeting_pairs: 0 }
    }
}

/// Decides whether the avsp is hyperbolic, parabolic or elliptic with respect to
/// its context `(Q_{r,e}, pi)`. The partition property itself is not rechecked;
/// see [`verify_avsp`].
pub fn classify_avsp(a: &Avsp) -> Result<Classification> {
    let ctx = a.context.as_ref().ok_or(Error::MissingContext)?;
    let f = &a.field;
    let q = f.q() as u64;
    let form = &ctx.quadric;
    let r = a.ambient - 1;
    let full_class = form.classify_section(&Subspace::full(form.dim()));
    let Some(kind) = full_class.nondegenerate_kind() else {
        return Ok(Classification::fail(ClassFailure::BadQuadric, vec![]));
    };
    if form.kind().is_some_and(|k| k != kind) || form.dim() != r {
        return Ok(Classification::fail(ClassFailure::BadQuadric, vec![]));
    }
    let e = kind.e() as usize;
    let gen_dim = (r - e - 1) / 2;
    let is_generator = |amb: &Subspace| -> Result<bool> {
        if !amb.is_subspace_of(f, &a.h) {
            return Ok(false);
        }
        let local = a.h.restrict(f, amb)?;
        Ok(local.dim() == gen_dim as isize && form.is_totally_singular(&local)?)
    };
    if !is_generator(&ctx.pi)? {
        return Ok(Classification::fail(ClassFailure::ContextNotGenerator, vec![]));
    }

    let expected = q.pow((r + e).div_ceil(2) as u32);
    if a.members.len() as u64 != expected {
        return Ok(Classification::fail(ClassFailure::MemberCount { found: a.members.len(), expected }, vec![]));
    }
    let member_dim = (r - e).div_ceil(2);
    for (i, m) in a.members.iter().enumerate() {
        if m.dim() != member_dim as isize {
            return Ok(Classification::fail(
                ClassFailure::MemberDimension { member: i, found: m.dim(), expected: member_dim },
                vec![],
            ));
        }
    }

    let sections = a.members.iter().map(|m| m.meet(f, &a.h)).collect::<Result<Vec<_>>>()?;
    for (i, s) in sections.iter().enumerate() {
        if !is_generator(s)? {
            return Ok(Classification::fail(ClassFailure::SectionNotGenerator { member: i }, sections));
        }
    }
    let mut seen: HashMap<&Subspace, usize> = HashMap::new();
    for (i, s) in sections.iter().enumerate() {
        if let Some(&first) = seen.get(s) {
            return Ok(Classification::fail(ClassFailure::RepeatedGenerator { first, second: i }, sections));
        }
        seen.insert(s, i);
    }

    for (i, s) in sections.iter().enumerate() {
        if !s.meet(f, &ctx.pi)?.is_empty() {
            return Ok(Classification::fail(ClassFailure::MeetsFixedGenerator { member: i }, sections));
        }
    }

    let mut meeting = Vec::new();
    for i in 0..a.members.len() {
        for j in i + 1..a.members.len() {
            let members_meet = a.members[i].meet(f, &a.members[j])?;
            let sections_meet = sections[i].meet(f, &sections[j])?;
            if members_meet.dim() > 0 || sections_meet.dim() > 0 {
                return Ok(Classification::fail(ClassFailure::MeetTooLarge { first: i, second: j }, sections));
            }
            if sections_meet.dim() == 0 {
                meeting.push((i, j));
            }
        }
    }

    for &(i, j) in &meeting {
        let span = a.members[i].span(f, &a.members[j])?.meet(f, &a.h)?;
        let class = form.classify_section(&a.h.restrict(f, &span)?);
        let ok = class.is_nondegenerate() && class.kind == SectionKind::Hyperbolic && class.reduced_rank == r - e + 1;
        if !ok {
            return Ok(Classification::fail(ClassFailure::SpanNotHyperbolic { first: i, second: j }, sections));
        }
    }

    Ok(Classification { class: Some(kind), failure: None, sections, meeting_pairs: meeting.len() })
}
