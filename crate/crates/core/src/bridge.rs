//! Conversions between spreads of `Q_{r+2,e}` and avsps of PG(r+1, q), plus the
//! structural checks that accompany them.
//!
//! Spread to avsp: fix a point `P` on a distinguished member and a hyperplane `U`
//! missing `P`. Then `H = U ∩ P^⊥` and each other member `Σ_i` gives
//! `S_i = <P, Σ_i> ∩ U`.
//!
//! Avsp to spread: embed PG(r+1, q) as `x_{r+2} = 0` in PG(r+2, q) with `H` mapped to
//! `x_{r+1} = x_{r+2} = 0`, extend the form by `x_{r+1} x_{r+2}`, pick a singular
//! `P` in `H^⊥` off `U`, and take for each member the totally singular hyperplane of
//! `<P, S_i>` that avoids `P`.

use crate::avsp::{classify_avsp, verify_avsp, Avsp, AvspContext};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::pg::{invert, vec_mat, Point, Subspace};
use crate::quadric::{QuadraticForm, QuadricKind, SectionKind};
use crate::spread::{verify_spread, Spread};

/// Choices made by a conversion, recorded so that round trips can be audited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub direction: &'static str,
    pub sigma_last_index: usize,
    /// `P`, in the coordinates of the spread's ambient space.
    pub point: Point,
    /// `U`, in the coordinates of the spread's ambient space.
    pub u: Subspace,
    /// Row `k` is the spread-side image of the `k`-th avsp-side unit vector
    /// (for avsp to spread: the avsp-side image of the `k`-th local unit vector
    /// before embedding).
    pub coordinate_map: Vec<Vec<Elem>>,
    /// Number of admissible choices for `P` (avsp to spread only).
    pub point_candidates: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ConstructionInput<'a> {
    pub spread: &'a Spread,
    pub sigma_last: usize,
    pub point: Point,
    pub u: Subspace,
}

impl<'a> ConstructionInput<'a> {
    /// Defaults: the last member (unless given), its smallest point, and the first
    /// coordinate hyperplane not through that point.
    pub fn with_defaults(spread: &'a Spread, sigma_last: Option<usize>) -> Result<Self> {
        let f = spread.quadric().field();
        let n = spread.members().len();
        if n == 0 {
            return Err(Error::BadInput("empty spread".into()));
        }
        let sigma_last = sigma_last.unwrap_or(n - 1);
        let member = spread
            .members()
            .get(sigma_last)
            .ok_or_else(|| Error::BadInput(format!("no member with index {sigma_last}")))?;
        let point = member
            .points(f)
            .into_iter()
            .next()
            .ok_or_else(|| Error::BadInput("distinguished member is empty".into()))?;
        let u = default_hyperplane_avoiding(&point);
        Ok(ConstructionInput { spread, sigma_last, point, u })
    }
}

/// The coordinate hyperplane `x_i = 0` for the first `i` with `P_i != 0`.
pub fn default_hyperplane_avoiding(p: &Point) -> Subspace {
    let i = p.coords().iter().position(|&c| c != 0).expect("points are nonzero");
    Subspace::coordinate_hyperplane(p.ambient(), i)
}

fn basis_images(f: &Field, local: &Subspace, frame: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    local.rows().iter().map(|r| vec_mat(f, r, frame)).collect()
}

/// Builds the avsp of `U` from a spread (hyperbolic, parabolic or elliptic alike).
pub fn spread_to_avsp(input: &ConstructionInput) -> Result<(Avsp, Provenance)> {
    let spread = input.spread;
    let form = spread.quadric();
    let f = form.field();
    let big = form.dim();
    let kind = form.kind().ok_or_else(|| Error::BadInput("spread quadric has no type".into()))?;
    let report = verify_spread(spread);
    if !report.passed() {
        return Err(Error::BadInput(format!("not a spread: {}", report.messages.join("; "))));
    }
    if big < 2 {
        return Err(Error::BadInput("spread quadric too small".into()));
    }
    let sigma_last = spread
        .members()
        .get(input.sigma_last)
        .ok_or_else(|| Error::BadInput(format!("no member with index {}", input.sigma_last)))?;
    let p = &input.point;
    if p.ambient() != big || !sigma_last.contains_vec(f, p.coords()) {
        return Err(Error::BadInput("P does not lie on the distinguished member".into()));
    }
    let u = &input.u;
    if u.ambient() != big || u.rank() != big {
        return Err(Error::BadInput("U is not a hyperplane".into()));
    }
    if u.contains_vec(f, p.coords()) {
        return Err(Error::BadInput("U contains P".into()));
    }

    let p_sub = Subspace::from_point(p);
    let h_big = u.meet(f, &form.perp(&p_sub)?)?;
    let h = u.restrict(f, &h_big)?;
    let r = big - 2;
    if h.dim() != r as isize {
        return Err(Error::InternalAssertion(format!("H has dimension {}, expected {r}", h.dim())));
    }
    let h_frame = basis_images(f, &h, u.rows());
    let section = form
        .restrict_to_basis(&h_frame)?
        .with_kind(kind)
        .map_err(|e| Error::InternalAssertion(format!("section of the quadric by H has the wrong type: {e}")))?;

    let mut members = Vec::with_capacity(spread.members().len() - 1);
    for (i, sigma) in spread.members().iter().enumerate() {
        if i == input.sigma_last {
            continue;
        }
        let s_big = sigma.span_point(f, p)?.meet(f, u)?;
        let s = u.restrict(f, &s_big)?;
        if s.is_subspace_of(f, &h) {
            return Err(Error::InternalAssertion(format!("member {i} maps into H")));
        }
        members.push(s);
    }
    let pi = u.restrict(f, &sigma_last.span_point(f, p)?.meet(f, &h_big)?)?;
    let context = AvspContext { quadric: section, pi };
    let avsp = Avsp::new(f, r + 1, h, members, Some(context))?;
    let provenance = Provenance {
        direction: "spread-to-avsp",
        sigma_last_index: input.sigma_last,
        point: p.clone(),
        u: u.clone(),
        coordinate_map: u.rows().to_vec(),
        point_candidates: None,
    };
    Ok((avsp, provenance))
}

/// Rebuilds a spread of `Q_{r+2,e}` from a classified avsp.
pub fn avsp_to_spread(a: &Avsp) -> Result<(Spread, Provenance)> {
    let partition = verify_avsp(a);
    if !partition.passed() {
        return Err(Error::NotClassified(format!("not an avsp: {}", partition.messages.join("; "))));
    }
    let classification = classify_avsp(a)?;
    let Some(kind) = classification.class else {
        let why = classification.failure.map(|c| c.to_string()).unwrap_or_default();
        return Err(Error::NotClassified(why));
    };
    let ctx = a.context().ok_or(Error::MissingContext)?;
    let f = a.field();
    let r = a.ambient() - 1;
    let big = r + 2;

    // local frame: the basis of H, then the first unit vector off H
    let h = a.hyperplane();
    let mut frame = h.rows().to_vec();
    let off = (0..=r + 1)
        .map(|j| (0..=r + 1).map(|c| Elem::from(c == j)).collect::<Vec<Elem>>())
        .find(|v| !h.contains_vec(f, v))
        .ok_or_else(|| Error::InternalAssertion("H is the whole space".into()))?;
    frame.push(off);
    let inverse = invert(f, &frame).ok_or_else(|| Error::InternalAssertion("singular frame".into()))?;
    let embed = |s: &Subspace| -> Result<Subspace> {
        let rows: Vec<Vec<Elem>> = s
            .rows()
            .iter()
            .map(|row| {
                let mut y = vec_mat(f, row, &inverse);
                y.push(0);
                y
            })
            .collect();
        Subspace::from_rows(f, big, &rows)
    };

    let mut gram = vec![vec![0; big + 1]; big + 1];
    for (i, row) in ctx.quadric.gram().iter().enumerate() {
        gram[i][..=r].copy_from_slice(row);
    }
    gram[r + 1][r + 2] = 1;
    let extended = QuadraticForm::new(f, gram, Some(kind))?;

    let h_big = Subspace::from_rows(
        f,
        big,
        &(0..=r).map(|j| (0..=big).map(|c| Elem::from(c == j)).collect()).collect::<Vec<_>>(),
    )?;
    let u_big = Subspace::coordinate_hyperplane(big, big);
    let candidates: Vec<Point> = extended
        .perp(&h_big)?
        .points(f)
        .into_iter()
        .filter(|x| extended.is_singular(x) && !u_big.contains_vec(f, x.coords()))
        .collect();
    let p = candidates
        .first()
        .cloned()
        .ok_or_else(|| Error::ExtensionFailure("no singular point of H^perp off U".into()))?;

    let mut members = Vec::with_capacity(a.members().len() + 1);
    for (i, s) in a.members().iter().enumerate() {
        let span = embed(s)?.span_point(f, &p)?;
        let singular: Vec<Subspace> =
            span.hyperplanes(f).into_iter().filter(|x| extended.is_totally_singular(x).unwrap_or(false)).collect();
        let through_p = singular.iter().filter(|x| x.contains_vec(f, p.coords())).count();
        if singular.len() != 2 || through_p != 1 {
            return Err(Error::ExtensionFailure(format!(
                "<P, S_{i}> contains {} totally singular hyperplanes ({through_p} through P)",
                singular.len()
            )));
        }
        let further = singular.into_iter().find(|x| !x.contains_vec(f, p.coords())).unwrap();
        members.push(further);
    }
    members.push(embed(&ctx.pi)?.span_point(f, &p)?);
    let spread = Spread::new(extended, members)?;
    let report = verify_spread(&spread);
    if !report.passed() {
        return Err(Error::InternalAssertion(format!(
            "reconstructed set is not a spread: {}",
            report.messages.join("; ")
        )));
    }
    let provenance = Provenance {
        direction: "avsp-to-spread",
        sigma_last_index: spread.members().len() - 1,
        point: p,
        u: u_big,
        coordinate_map: frame,
        point_candidates: Some(candidates.len()),
    };
    Ok((spread, provenance))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaAuxReport {
    pub sigma_last_index: usize,
    /// Pairs `Π_i, Π_j` meet in at most one point (checked for e = 1, 2).
    pub at_most_one: Option<bool>,
    /// Pairs meet in exactly one point (checked for e = 0, r = 1 mod 4).
    pub exactly_one: Option<bool>,
    /// Every quadric point of `H` off the distinguished member lies in exactly `q` of the `Π_i`.
    pub q_coverage: bool,
    pub pairs: usize,
    pub points_checked: usize,
    pub violations: Vec<String>,
}

impl LemmaAuxReport {
    pub fn passed(&self) -> bool {
        self.at_most_one.unwrap_or(true) && self.exactly_one.unwrap_or(true) && self.q_coverage
    }
}

/// Checks the intersection pattern of `Π_i = <P, Σ_i> ∩ H` for an `r`-space `H ⊂ P^⊥`
/// not through `P`.
pub fn check_lemma_aux(spread: &Spread, p: &Point, h: &Subspace) -> Result<LemmaAuxReport> {
    let form = spread.quadric();
    let f = form.field();
    let big = form.dim();
    let kind = form.kind().ok_or_else(|| Error::BadInput("spread quadric has no type".into()))?;
    if p.ambient() != big || h.ambient() != big {
        return Err(Error::BadInput("P or H lives in the wrong space".into()));
    }
    if big < 2 || h.rank() != big - 1 {
        return Err(Error::BadInput(format!("H must have dimension {}", big as isize - 2)));
    }
    if !form.is_singular(p) {
        return Err(Error::BadInput("P is not on the quadric".into()));
    }
    let last =
        spread.member_containing(p.coords()).ok_or_else(|| Error::BadInput("P lies on no spread member".into()))?;
    if h.contains_vec(f, p.coords()) {
        return Err(Error::BadInput("P lies in H".into()));
    }
    if !h.is_subspace_of(f, &form.perp(&Subspace::from_point(p))?) {
        return Err(Error::BadInput("H is not contained in P^perp".into()));
    }
    let r = big - 2;
    let q = f.q();
    let pis = spread
        .members()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != last)
        .map(|(_, s)| s.span_point(f, p)?.meet(f, h))
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let mut max_meet = -1;
    let mut min_meet = isize::MAX;
    let mut pairs = 0;
    for i in 0..pis.len() {
        for j in i + 1..pis.len() {
            let d = pis[i].meet(f, &pis[j])?.dim();
            max_meet = max_meet.max(d);
            min_meet = min_meet.min(d);
            pairs += 1;
            if d > 0 {
                violations.push(format!("Π_{i} and Π_{j} share a {d}-space"));
            }
        }
    }
    let at_most_one = (kind != QuadricKind::Hyperbolic).then_some(max_meet <= 0);
    let exactly_one =
        (kind == QuadricKind::Hyperbolic && r % 4 == 1).then_some(pairs == 0 || (max_meet == 0 && min_meet == 0));
    if exactly_one == Some(false) && min_meet < 0 {
        violations.push("some pair Π_i, Π_j is disjoint".into());
    }

    let sigma_last = &spread.members()[last];
    let mut q_coverage = true;
    let mut points_checked = 0;
    for x in h.points(f) {
        if !form.is_singular(&x) || sigma_last.contains_vec(f, x.coords()) {
            continue;
        }
        points_checked += 1;
        let through = pis.iter().filter(|pi| pi.contains_vec(f, x.coords())).count();
        if through != q {
            q_coverage = false;
            violations.push(format!("point {:?} lies in {through} of the Π_i", x.coords()));
        }
    }
    Ok(LemmaAuxReport {
        sigma_last_index: last,
        at_most_one,
        exactly_one,
        q_coverage,
        pairs,
        points_checked,
        violations,
    })
}

/// Default `H` for [`check_lemma_aux`]: `U ∩ P^⊥` with the default `U`.
pub fn default_lemma_hyperplane(spread: &Spread, p: &Point) -> Result<Subspace> {
    let form = spread.quadric();
    let u = default_hyperplane_avoiding(p);
    u.meet(form.field(), &form.perp(&Subspace::from_point(p))?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionBoundReport {
    pub section: SectionKind,
    pub contained: usize,
    pub bound: usize,
    pub within_bound: bool,
    /// For a parabolic spread and a hyperbolic section: exactly two members inside.
    pub exactly_two: Option<bool>,
}

impl SectionBoundReport {
    pub fn passed(&self) -> bool {
        self.within_bound && self.exactly_two.unwrap_or(true)
    }
}

/// Counts the spread members inside a non-degenerate hyperplane section.
pub fn check_section_bound(spread: &Spread, hyperplane: &Subspace) -> Result<SectionBoundReport> {
    let form = spread.quadric();
    let f = form.field();
    let kind = form.kind().ok_or_else(|| Error::BadInput("spread quadric has no type".into()))?;
    if kind == QuadricKind::Hyperbolic {
        return Err(Error::BadInput("section bound applies to parabolic and elliptic quadrics".into()));
    }
    if hyperplane.ambient() != form.dim() || hyperplane.rank() != form.dim() {
        return Err(Error::BadInput("not a hyperplane of the spread's space".into()));
    }
    let class = form.classify_section(hyperplane);
    if !class.is_nondegenerate() {
        return Err(Error::DegenerateSection);
    }
    let contained = spread.members().iter().filter(|m| m.is_subspace_of(f, hyperplane)).count();
    let bound = f.q() + 1;
    let exactly_two =
        (kind == QuadricKind::Parabolic && class.kind == SectionKind::Hyperbolic).then_some(contained == 2);
    Ok(SectionBoundReport { section: class.kind, contained, bound, within_bound: contained <= bound, exactly_two })
}

/// Runs [`check_section_bound`] over every non-degenerate hyperplane section.
pub fn check_all_section_bounds(spread: &Spread) -> Result<Vec<(Subspace, SectionBoundReport)>> {
    let form = spread.quadric();
    let mut out = Vec::new();
    for hp in Subspace::full(form.dim()).hyperplanes(form.field()) {
        match check_section_bound(spread, &hp) {
            Ok(rep) => out.push((hp, rep)),
            Err(Error::DegenerateSection) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
