//! Pedals: the `q + 1` feet of a point `P ∉ U`, i.e. the points of contact of
//! the tangent lines through `P`.
//!
//! Two routes compute them. [`feet_of`] scans the tangents through an
//! arbitrary point. In the canonical frame `P_λ = [0, λε, 1]` (λ ∈ {1, w}),
//! [`canonical_feet`] uses the closed form `Q_x = [x, T(αx²) − λε, 1]` over
//! the parameter set
//! `T_λ = {x : 2λε + αx² − ᾱx̄² + (β − β̄)N(x) = 0}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Fq, Fq2};
use crate::plane::{Line, Plane, Point};
use crate::unital::{UnitalModel, UnitalParams};

/// Canonical-frame data of a pedal of `P_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFrame {
    pub lambda: Fq,
    /// `(x, index of Q_x)` for every `x ∈ T_λ`, ascending in `x`.
    pub params: Vec<(Fq2, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PedalSet {
    pub base: u32,
    /// Feet as point indices, ascending.
    pub feet: Vec<u32>,
    pub frame: Option<CanonicalFrame>,
}

impl PedalSet {
    pub fn contains(&self, idx: u32) -> bool {
        self.feet.binary_search(&idx).is_ok()
    }

    pub fn is_collinear(&self, plane: &Plane) -> bool {
        is_collinear(plane, &self.feet)
    }
}

/// True if all the points lie on one line (vacuous for fewer than three).
pub fn is_collinear(plane: &Plane, pts: &[u32]) -> bool {
    if pts.len() < 3 {
        return true;
    }
    let a = plane.point_at(pts[0]);
    let b = plane.point_at(pts[1]);
    pts[2..]
        .iter()
        .all(|&c| plane.collinear(&a, &b, &plane.point_at(c)))
}

/// No three of the points are collinear (exhaustive triple scan).
pub fn is_arc(plane: &Plane, pts: &[u32]) -> bool {
    let p: Vec<Point> = pts.iter().map(|&i| plane.point_at(i)).collect();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            for k in j + 1..p.len() {
                if plane.collinear(&p[i], &p[j], &p[k]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn feet_of(u: &UnitalModel, p: &Point) -> Result<PedalSet> {
    let plane = u.plane();
    let base = plane.point_index(p);
    if u.contains(base) {
        return Err(Error::Domain(format!(
            "{} lies on the unital and has no pedal",
            plane.format_point(p)
        )));
    }
    let mut feet: Vec<u32> = u.tangents_through(base).into_iter().map(|t| t.1).collect();
    feet.sort_unstable();
    let q = u.field().q() as usize;
    if feet.len() != q + 1 {
        return Err(Error::Structural {
            line: format!("tangents through {}", plane.format_point(p)),
            count: feet.len(),
        });
    }
    Ok(PedalSet {
        base,
        feet,
        frame: None,
    })
}

/// `P_λ = [0, λε, 1]`.
pub fn p_lambda(plane: &Plane, lambda: Fq) -> Point {
    let f = plane.field();
    plane
        .point([Fq2::ZERO, f.scale(f.epsilon(), lambda), Fq2::ONE])
        .expect("non-zero")
}

fn check_lambda(field: &FieldCtx, lambda: Fq) -> Result<()> {
    if lambda == Fq::ONE || lambda == field.w() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "λ = {lambda} is not an orbit representative (expected 1 or w = {})",
            field.w()
        )))
    }
}

fn obm_params(u: &UnitalModel) -> Result<&UnitalParams> {
    u.params()
        .ok_or_else(|| Error::Domain("the canonical frame needs an OBM unital".into()))
}

fn two_lambda_eps(f: &FieldCtx, lambda: Fq) -> Fq2 {
    f.scale(f.epsilon(), f.fq_add(lambda, lambda))
}

/// `2λε + αx² − ᾱx̄² + (β − β̄)N(x)`.
pub fn membership_value(f: &FieldCtx, params: &UnitalParams, lambda: Fq, x: Fq2) -> Fq2 {
    let (a, b) = (params.alpha, params.beta);
    let xbar = f.conj(x);
    let s = f.sub(f.mul(a, f.square(x)), f.mul(f.conj(a), f.square(xbar)));
    let s = f.add(s, f.scale(f.sub(b, f.conj(b)), f.norm(x)));
    f.add(two_lambda_eps(f, lambda), s)
}

/// `2λε + [x x̄] M [x x̄]ᵗ` with `M = [[α, ½(β−β̄)], [½(β−β̄), −ᾱ]]`.
pub fn membership_value_matrix(f: &FieldCtx, params: &UnitalParams, lambda: Fq, x: Fq2) -> Fq2 {
    let half = f.embed(f.fq_inv(f.fq_int(2)).expect("p odd"));
    let off = f.mul(half, f.sub(params.beta, f.conj(params.beta)));
    let m = [[params.alpha, off], [off, f.neg(f.conj(params.alpha))]];
    let v = [x, f.conj(x)];
    let mv = [
        f.add(f.mul(m[0][0], v[0]), f.mul(m[0][1], v[1])),
        f.add(f.mul(m[1][0], v[0]), f.mul(m[1][1], v[1])),
    ];
    let quad = f.add(f.mul(v[0], mv[0]), f.mul(v[1], mv[1]));
    f.add(two_lambda_eps(f, lambda), quad)
}

/// `2λε + 2ε·Im(αx²) + (β − β̄)N(x)`.
pub fn membership_value_im_norm(f: &FieldCtx, params: &UnitalParams, lambda: Fq, x: Fq2) -> Fq2 {
    let im = f.im(f.mul(params.alpha, f.square(x)));
    let two_eps_im = f.scale(f.epsilon(), f.fq_add(im, im));
    let n = f.scale(f.sub(params.beta, f.conj(params.beta)), f.norm(x));
    f.add(f.add(two_lambda_eps(f, lambda), two_eps_im), n)
}

/// `T(αx²)`, the class label of `x ∈ T_λ`.
pub fn alpha_trace(f: &FieldCtx, params: &UnitalParams, x: Fq2) -> Fq {
    f.trace(f.mul(params.alpha, f.square(x)))
}

/// `T_λ`, ascending.
pub fn t_lambda_set(u: &UnitalModel, lambda: Fq) -> Result<Vec<Fq2>> {
    let f = u.field();
    check_lambda(f, lambda)?;
    let params = obm_params(u)?;
    let set: Vec<Fq2> = f
        .elements()
        .filter(|&x| membership_value(f, params, lambda, x).is_zero())
        .collect();
    if set.len() != f.q() as usize + 1 {
        return Err(Error::Inconsistent(format!(
            "|T_λ| = {}, expected q + 1 = {}",
            set.len(),
            f.q() + 1
        )));
    }
    Ok(set)
}

/// `Q_x = [x, T(αx²) − λε, 1]`.
pub fn foot_point(plane: &Plane, params: &UnitalParams, lambda: Fq, x: Fq2) -> Point {
    let f = plane.field();
    let y = f.sub(
        f.embed(alpha_trace(f, params, x)),
        f.scale(f.epsilon(), lambda),
    );
    plane.affine(x, y)
}

/// `[x, 2αx² + (β − β̄)N(x) + λε, 1]`, equal to `Q_x` on `T_λ`.
pub fn foot_point_expanded(plane: &Plane, params: &UnitalParams, lambda: Fq, x: Fq2) -> Point {
    let f = plane.field();
    let two = f.embed(f.fq_int(2));
    let y = f.add(
        f.add(
            f.mul(two, f.mul(params.alpha, f.square(x))),
            f.scale(f.sub(params.beta, f.conj(params.beta)), f.norm(x)),
        ),
        f.scale(f.epsilon(), lambda),
    );
    plane.affine(x, y)
}

/// `r = λε + αx² − β̄N(x)`, which lies in GF(q) exactly when `x ∈ T_λ`.
pub fn foot_r(f: &FieldCtx, params: &UnitalParams, lambda: Fq, x: Fq2) -> Fq2 {
    f.sub(
        f.add(
            f.scale(f.epsilon(), lambda),
            f.mul(params.alpha, f.square(x)),
        ),
        f.scale(f.conj(params.beta), f.norm(x)),
    )
}

/// The pedal of `P_λ` through the closed form, cross-checked against the
/// expanded form and unital membership.
pub fn canonical_feet(u: &UnitalModel, lambda: Fq) -> Result<PedalSet> {
    let plane = u.plane();
    let f = u.field();
    let params = obm_params(u)?;
    let t = t_lambda_set(u, lambda)?;
    let mut params_idx = Vec::with_capacity(t.len());
    for &x in &t {
        let qx = foot_point(plane, params, lambda, x);
        if qx != foot_point_expanded(plane, params, lambda, x) {
            return Err(Error::Inconsistent(format!(
                "the two closed forms of Q_x disagree at x = {}",
                f.format(x)
            )));
        }
        let idx = plane.point_index(&qx);
        if !u.contains(idx) {
            return Err(Error::Inconsistent(format!(
                "Q_x ∉ U for x = {}",
                f.format(x)
            )));
        }
        params_idx.push((x, idx));
    }
    let mut feet: Vec<u32> = params_idx.iter().map(|p| p.1).collect();
    feet.sort_unstable();
    feet.dedup();
    if feet.len() != t.len() {
        return Err(Error::Inconsistent(
            "x ↦ Q_x is not injective on T_λ".into(),
        ));
    }
    Ok(PedalSet {
        base: plane.point_index(&p_lambda(plane, lambda)),
        feet,
        frame: Some(CanonicalFrame {
            lambda,
            params: params_idx,
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub line: u32,
    /// Members of the examined set on the line, ascending.
    pub points: Vec<u32>,
}

/// Histogram of `|l ∩ S|` over every line of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionCensus {
    pub histogram: BTreeMap<usize, usize>,
    /// Lines meeting the set in at least the witness threshold, ascending.
    pub witnesses: Vec<Witness>,
    pub lines_examined: usize,
}

impl IntersectionCensus {
    pub fn count(&self, size: usize) -> usize {
        self.histogram.get(&size).copied().unwrap_or(0)
    }

    pub fn max_size(&self) -> usize {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.histogram.keys().copied().collect()
    }
}

/// Census of a point set over all lines; lines with at least `witness_min`
/// members are kept as witnesses.
pub fn intersection_census(plane: &Plane, set: &[u32], witness_min: usize) -> IntersectionCensus {
    let n = plane.size();
    let mut count = vec![0u32; n];
    for &p in set {
        for &l in plane.lines_through(p) {
            count[l as usize] += 1;
        }
    }
    let mut histogram = BTreeMap::new();
    let mut witnesses = Vec::new();
    for (l, &c) in count.iter().enumerate() {
        *histogram.entry(c as usize).or_insert(0) += 1;
        if c as usize >= witness_min {
            let on = plane.points_on(l as u32);
            let mut points: Vec<u32> = set
                .iter()
                .copied()
                .filter(|p| on.binary_search(p).is_ok())
                .collect();
            points.sort_unstable();
            witnesses.push(Witness {
                line: l as u32,
                points,
            });
        }
    }
    IntersectionCensus {
        histogram,
        witnesses,
        lines_examined: n,
    }
}

fn require_affine_non_classical(u: &UnitalModel, pedal: &PedalSet) -> Result<()> {
    if !u.is_non_classical_obm() {
        return Err(Error::Domain(
            "the line census needs a non-classical OBM unital (α ≠ 0)".into(),
        ));
    }
    let plane = u.plane();
    let base = plane.point_at(pedal.base);
    if plane.on_line_at_infinity(&base) {
        return Err(Error::Domain(format!(
            "{} lies on ℓ_∞; its pedal is collinear",
            plane.format_point(&base)
        )));
    }
    Ok(())
}

/// Census of `|l ∩ τ_P|` over all lines; the support must lie in {0,1,2,4}.
pub fn line_pedal_census(u: &UnitalModel, pedal: &PedalSet) -> Result<IntersectionCensus> {
    require_affine_non_classical(u, pedal)?;
    let census = intersection_census(u.plane(), &pedal.feet, 2);
    if let Some(bad) = census
        .support()
        .into_iter()
        .find(|s| ![0, 1, 2, 4].contains(s))
    {
        return Err(Error::TheoremViolation(format!(
            "a line meets the pedal of {} in {bad} points",
            u.plane().format_point(&u.plane().point_at(pedal.base))
        )));
    }
    Ok(census)
}

/// A class of `T_λ` under equal `T(αx²)`, with its line `l_{x,−x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceClass {
    pub trace: Fq,
    pub members: Vec<Fq2>,
    pub line: Line,
}

/// `l_{x,−x} = [0, −1, T(αx²) − λε]^t`, which passes through `[1,0,0]`.
pub fn chord_line(plane: &Plane, lambda: Fq, trace: Fq) -> Line {
    let f = plane.field();
    let c = f.sub(f.embed(trace), f.scale(f.epsilon(), lambda));
    plane
        .line([Fq2::ZERO, f.neg(Fq2::ONE), c])
        .expect("non-zero")
}

pub fn trace_class_partition(u: &UnitalModel, lambda: Fq) -> Result<Vec<TraceClass>> {
    let f = u.field();
    let params = obm_params(u)?;
    let mut classes: BTreeMap<Fq, Vec<Fq2>> = BTreeMap::new();
    for x in t_lambda_set(u, lambda)? {
        classes
            .entry(alpha_trace(f, params, x))
            .or_default()
            .push(x);
    }
    Ok(classes
        .into_iter()
        .map(|(trace, members)| TraceClass {
            trace,
            members,
            line: chord_line(u.plane(), lambda, trace),
        })
        .collect())
}

/// `xx·z₁² + yy·z₂² + xy·z₁z₂ + constant` over GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryQuadratic {
    pub xx: Fq,
    pub yy: Fq,
    pub xy: Fq,
    pub constant: Fq,
}

impl BinaryQuadratic {
    pub fn eval(&self, f: &FieldCtx, z1: Fq, z2: Fq) -> Fq {
        let t = f.fq_add(
            f.fq_mul(self.xx, f.fq_mul(z1, z1)),
            f.fq_mul(self.yy, f.fq_mul(z2, z2)),
        );
        let t = f.fq_add(t, f.fq_mul(self.xy, f.fq_mul(z1, z2)));
        f.fq_add(t, self.constant)
    }
}

/// The pair of conics over GF(q) whose common zeros `(z₁, z₂)` are the
/// `z = z₁ + εz₂ ∈ T_λ` with `T(αz²)` equal to a given trace `c`:
///
/// - `α₁z₁² + α₁w·z₂² + 2α₂w·z₁z₂ − c/2 = 0` (equal trace),
/// - `(α₂+β₂)z₁² + w(α₂−β₂)z₂² + 2α₁z₁z₂ + λ = 0` (membership in `T_λ`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceSystem {
    pub trace_eq: BinaryQuadratic,
    pub membership_eq: BinaryQuadratic,
}

impl TraceSystem {
    pub fn new(f: &FieldCtx, params: &UnitalParams, lambda: Fq, trace: Fq) -> Self {
        let (a1, a2) = (f.re(params.alpha), f.im(params.alpha));
        let b2 = f.im(params.beta);
        let w = f.w();
        let two = f.fq_int(2);
        let half = f.fq_inv(two).expect("p odd");
        TraceSystem {
            trace_eq: BinaryQuadratic {
                xx: a1,
                yy: f.fq_mul(a1, w),
                xy: f.fq_mul(two, f.fq_mul(a2, w)),
                constant: f.fq_neg(f.fq_mul(half, trace)),
            },
            membership_eq: BinaryQuadratic {
                xx: f.fq_add(a2, b2),
                yy: f.fq_mul(w, f.fq_sub(a2, b2)),
                xy: f.fq_mul(two, a1),
                constant: lambda,
            },
        }
    }

    /// All common zeros over GF(q) × GF(q), as elements `z₁ + εz₂`, ascending.
    pub fn solve(&self, f: &FieldCtx) -> Vec<Fq2> {
        let mut out: Vec<Fq2> = Vec::new();
        for z1 in f.fq_elements() {
            for z2 in f.fq_elements() {
                if self.trace_eq.eval(f, z1, z2).is_zero()
                    && self.membership_eq.eval(f, z1, z2).is_zero()
                {
                    out.push(f.from_parts(z1, z2));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// `{z ∈ T_λ : T(αz²) = T(αx²)}`, solved by a direct scan of GF(q²) and by the
/// coordinate system over GF(q); the two must agree.
pub fn solve_trace_system(u: &UnitalModel, lambda: Fq, x: Fq2) -> Result<Vec<Fq2>> {
    let f = u.field();
    check_lambda(f, lambda)?;
    let params = obm_params(u)?;
    if !membership_value(f, params, lambda, x).is_zero() {
        return Err(Error::Domain(format!("{} ∉ T_λ", f.format(x))));
    }
    let target = alpha_trace(f, params, x);
    let direct: Vec<Fq2> = f
        .elements()
        .filter(|&z| {
            alpha_trace(f, params, z) == target && membership_value(f, params, lambda, z).is_zero()
        })
        .collect();
    let system = TraceSystem::new(f, params, lambda, target).solve(f);
    if direct != system {
        return Err(Error::Inconsistent(format!(
            "trace system at x = {}: direct scan finds {} solutions, coordinate system {}",
            f.format(x),
            direct.len(),
            system.len()
        )));
    }
    if direct.len() > 4 {
        return Err(Error::TheoremViolation(format!(
            "{} feet share the trace of x = {}",
            direct.len(),
            f.format(x)
        )));
    }
    Ok(direct)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcPartition {
    pub first: Vec<u32>,
    pub second: Vec<u32>,
    /// The whole pedal is already an arc, so `second` could be emptied.
    pub whole_is_arc: bool,
}

/// Splits a pedal (base off `ℓ_∞`, `α ≠ 0`) into two arcs. Every line meeting
/// the pedal in four points contributes two points to each part; all other
/// feet go to the first part. In the canonical frame the four points are
/// split into `{x, −x}` pairs and the pair holding the smaller encoding goes
/// first; otherwise the two lowest point indices go first.
pub fn two_arc_partition(u: &UnitalModel, pedal: &PedalSet) -> Result<ArcPartition> {
    require_affine_non_classical(u, pedal)?;
    let plane = u.plane();
    let f = u.field();
    let mut second: Vec<u32> = Vec::new();
    match &pedal.frame {
        Some(frame) => {
            let params = obm_params(u)?;
            let mut classes: BTreeMap<Fq, Vec<(Fq2, u32)>> = BTreeMap::new();
            for &(x, idx) in &frame.params {
                classes
                    .entry(alpha_trace(f, params, x))
                    .or_default()
                    .push((x, idx));
            }
            for members in classes.values() {
                match members.len() {
                    2 => {}
                    4 => {
                        let lead = members[0].0;
                        let neg = f.neg(lead);
                        second.extend(
                            members
                                .iter()
                                .filter(|m| m.0 != lead && m.0 != neg)
                                .map(|m| m.1),
                        );
                    }
                    k => {
                        return Err(Error::TheoremViolation(format!(
                            "a trace class of T_λ has {k} elements"
                        )))
                    }
                }
            }
        }
        None => {
            let census = intersection_census(plane, &pedal.feet, 3);
            let mut seen: Vec<u32> = Vec::new();
            for w in &census.witnesses {
                if w.points.len() != 4 {
                    return Err(Error::TheoremViolation(format!(
                        "a line meets the pedal in {} points",
                        w.points.len()
                    )));
                }
                if w.points.iter().any(|p| seen.contains(p)) {
                    return Err(Error::TheoremViolation(
                        "two four-point lines share a foot".into(),
                    ));
                }
                seen.extend(&w.points);
                second.extend(&w.points[2..]);
            }
        }
    }
    second.sort_unstable();
    let first: Vec<u32> = pedal
        .feet
        .iter()
        .copied()
        .filter(|p| second.binary_search(p).is_err())
        .collect();
    if !is_arc(plane, &first) || !is_arc(plane, &second) {
        return Err(Error::TheoremViolation(format!(
            "the pedal of {} does not split into two arcs",
            plane.format_point(&plane.point_at(pedal.base))
        )));
    }
    Ok(ArcPartition {
        whole_is_arc: second.is_empty() || is_arc(plane, &pedal.feet),
        first,
        second,
    })
}

/// An external point whose pedal meets a given line only in `foot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingletonPedal {
    pub base: u32,
    pub foot: u32,
}

/// For a secant `l`, picks for each of its `q + 1` unital points `A` (in
/// index order) the first external point on the tangent at `A` whose pedal
/// meets `l` only in `A`.
pub fn secant_partition_into_pedal_singletons(
    u: &UnitalModel,
    line: &Line,
) -> Result<Vec<SingletonPedal>> {
    let plane = u.plane();
    let l = plane.line_index(line);
    let q = u.field().q() as usize;
    if u.line_count(l) != q + 1 {
        return Err(Error::Domain(format!(
            "{} is not a secant line",
            plane.format_line(line)
        )));
    }
    let on_line = plane.points_on(l);
    let mut out = Vec::with_capacity(q + 1);
    for &a in on_line.iter().filter(|&&p| u.contains(p)) {
        let tangent = plane
            .lines_through(a)
            .iter()
            .copied()
            .find(|&t| u.line_count(t) == 1)
            .ok_or_else(|| Error::Inconsistent("unital point without tangent".into()))?;
        let mut chosen = None;
        for &candidate in plane.points_on(tangent) {
            if candidate == a {
                continue;
            }
            let pedal = feet_of(u, &plane.point_at(candidate))?;
            let mut hits = pedal
                .feet
                .iter()
                .filter(|f| on_line.binary_search(f).is_ok());
            if hits.next() == Some(&a) && hits.next().is_none() {
                chosen = Some(candidate);
                break;
            }
        }
        let base = chosen.ok_or_else(|| {
            Error::TheoremViolation(format!(
                "no pedal meets {} only in {}",
                plane.format_line(line),
                plane.format_point(&plane.point_at(a))
            ))
        })?;
        out.push(SingletonPedal { base, foot: a });
    }
    Ok(out)
}
