//! Orthogonal-Buekenhout-Metz unitals
//! `U_{α,β} = {[x, αx² + βN(x) + r, 1] : x ∈ GF(q²), r ∈ GF(q)} ∪ {P_∞}`
//! and the classical Hermitian unital `N(x) + N(y) + N(z) = 0`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Fq, Fq2};
use crate::plane::{Line, Plane, Point};

const NONE: u32 = u32::MAX;

/// Validated `(α, β)` for an OBM unital.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitalParams {
    pub alpha: Fq2,
    pub beta: Fq2,
    /// `4N(α) + (β̄ − β)²`, a non-square of GF(q).
    pub discriminant: Fq,
}

impl UnitalParams {
    /// `α = 0`: the unital is classical.
    pub fn is_classical(&self) -> bool {
        self.alpha.is_zero()
    }

    /// `β = β̄`: the unital is a union of conics.
    pub fn is_beta_real(&self, field: &FieldCtx) -> bool {
        field.conj(self.beta) == self.beta
    }
}

/// `4N(α) + (β̄ − β)²`. The second term is `4w·β₂²` and always lies in GF(q).
pub fn discriminant(field: &FieldCtx, alpha: Fq2, beta: Fq2) -> Result<Fq> {
    let d = field.sub(field.conj(beta), beta);
    let d2 = field
        .as_fq(field.square(d))
        .ok_or_else(|| Error::Inconsistent("(β̄ − β)² is not in GF(q)".into()))?;
    let four = field.fq_int(4);
    Ok(field.fq_add(field.fq_mul(four, field.norm(alpha)), d2))
}

pub fn validate_params(field: &FieldCtx, alpha: Fq2, beta: Fq2) -> Result<UnitalParams> {
    let discriminant = discriminant(field, alpha, beta)?;
    if field.is_square(discriminant) {
        return Err(Error::InvalidUnital {
            discriminant: discriminant.code(),
        });
    }
    Ok(UnitalParams {
        alpha,
        beta,
        discriminant,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitalKind {
    Obm(UnitalParams),
    Hermitian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineKind {
    /// The single point of contact.
    Tangent(u32),
    Secant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineClass {
    pub kind: LineKind,
    pub count: usize,
}

/// Per-line intersection sizes, plus one member point on each line (the
/// point of contact for tangents).
struct LineStats {
    count: Vec<u16>,
    touch: Vec<u32>,
}

pub struct UnitalModel {
    plane: Arc<Plane>,
    kind: UnitalKind,
    points: Vec<u32>,
    slot: Vec<u32>,
    generators: Vec<Option<(Fq2, Fq)>>,
    stats: OnceLock<LineStats>,
}

impl std::fmt::Debug for UnitalModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnitalModel")
            .field("kind", &self.kind)
            .field("len", &self.points.len())
            .finish()
    }
}

/// The affine point generated by `(x, r)`.
pub fn obm_point(plane: &Plane, params: &UnitalParams, x: Fq2, r: Fq) -> Point {
    let f = plane.field();
    let y = f.add(
        f.add(
            f.mul(params.alpha, f.square(x)),
            f.scale(params.beta, f.norm(x)),
        ),
        f.embed(r),
    );
    plane.affine(x, y)
}

impl UnitalModel {
    pub fn obm(plane: Arc<Plane>, params: UnitalParams) -> Result<Self> {
        let f = plane.field_arc().clone();
        let mut entries: Vec<(u32, Option<(Fq2, Fq)>)> =
            Vec::with_capacity((f.q() * f.order()) as usize + 1);
        for x in f.elements() {
            for r in f.fq_elements() {
                let p = obm_point(&plane, &params, x, r);
                entries.push((plane.point_index(&p), Some((x, r))));
            }
        }
        entries.push((plane.point_index(&plane.p_infinity()), None));
        Self::from_entries(plane, UnitalKind::Obm(params), entries)
    }

    pub fn hermitian(plane: Arc<Plane>) -> Result<Self> {
        let f = plane.field_arc().clone();
        let entries = plane
            .points()
            .filter(|p| {
                let [x, y, z] = p.coords();
                let s = f.fq_add(f.fq_add(f.norm(x), f.norm(y)), f.norm(z));
                s.is_zero()
            })
            .map(|p| (plane.point_index(&p), None))
            .collect();
        Self::from_entries(plane, UnitalKind::Hermitian, entries)
    }

    fn from_entries(
        plane: Arc<Plane>,
        kind: UnitalKind,
        mut entries: Vec<(u32, Option<(Fq2, Fq)>)>,
    ) -> Result<Self> {
        entries.sort_unstable_by_key(|e| e.0);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Inconsistent(
                "two generator pairs produce the same point".into(),
            ));
        }
        let mut slot = vec![NONE; plane.size()];
        for (i, e) in entries.iter().enumerate() {
            slot[e.0 as usize] = i as u32;
        }
        let (points, generators) = entries.into_iter().unzip();
        Ok(UnitalModel {
            plane,
            kind,
            points,
            slot,
            generators,
            stats: OnceLock::new(),
        })
    }

    pub fn plane(&self) -> &Arc<Plane> {
        &self.plane
    }

    pub fn field(&self) -> &FieldCtx {
        self.plane.field()
    }

    pub fn kind(&self) -> &UnitalKind {
        &self.kind
    }

    pub fn params(&self) -> Option<&UnitalParams> {
        match &self.kind {
            UnitalKind::Obm(p) => Some(p),
            UnitalKind::Hermitian => None,
        }
    }

    /// True for OBM unitals with `α ≠ 0`.
    pub fn is_non_classical_obm(&self) -> bool {
        self.params().is_some_and(|p| !p.is_classical())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Member point indices, ascending.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn contains(&self, idx: u32) -> bool {
        self.slot[idx as usize] != NONE
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.contains(self.plane.point_index(p))
    }

    /// The generating pair `(x, r)` of an affine OBM point.
    pub fn generator(&self, idx: u32) -> Option<(Fq2, Fq)> {
        match self.slot[idx as usize] {
            NONE => None,
            s => self.generators[s as usize],
        }
    }

    fn stats(&self) -> &LineStats {
        self.stats.get_or_init(|| {
            let n = self.plane.size();
            let mut count = vec![0u16; n];
            let mut touch = vec![NONE; n];
            for &p in &self.points {
                for &l in self.plane.lines_through(p) {
                    count[l as usize] += 1;
                    touch[l as usize] = p;
                }
            }
            LineStats { count, touch }
        })
    }

    /// `|l ∩ U|` for a line index.
    pub fn line_count(&self, line: u32) -> usize {
        self.stats().count[line as usize] as usize
    }

    fn classify_index(&self, line: u32) -> Result<LineClass> {
        let q = self.field().q() as usize;
        let s = self.stats();
        let count = s.count[line as usize] as usize;
        let kind = if count == 1 {
            LineKind::Tangent(s.touch[line as usize])
        } else if count == q + 1 {
            LineKind::Secant
        } else {
            return Err(Error::Structural {
                line: self.plane.format_line(&self.plane.line_at(line)),
                count,
            });
        };
        Ok(LineClass { kind, count })
    }

    pub fn classify_line(&self, l: &Line) -> Result<LineClass> {
        self.classify_index(self.plane.line_index(l))
    }

    /// Checks `|l ∩ U| ∈ {1, q+1}` for every line; returns the tangent count.
    pub fn verify_unital_axiom(&self) -> Result<usize> {
        let mut tangents = 0;
        for l in 0..self.plane.size() as u32 {
            if let LineKind::Tangent(_) = self.classify_index(l)?.kind {
                tangents += 1;
            }
        }
        Ok(tangents)
    }

    /// Closed-form tangent: `ℓ_∞` at `P_∞`, and
    /// `[−2αx + (β̄−β)x̄, 1, αx² − β̄N(x) − r]^t` at the point generated by
    /// `(x, r)`. For the Hermitian unital, the polar `[x̄, ȳ, z̄]^t`.
    pub fn tangent_line_at(&self, p: &Point) -> Result<Line> {
        let idx = self.plane.point_index(p);
        if !self.contains(idx) {
            return Err(Error::Domain(format!(
                "{} is not a point of the unital",
                self.plane.format_point(p)
            )));
        }
        let f = self.field();
        match &self.kind {
            UnitalKind::Hermitian => self.plane.line(p.coords().map(|c| f.conj(c))),
            UnitalKind::Obm(params) => match self.generator(idx) {
                None => Ok(self.plane.line_at_infinity()),
                Some((x, r)) => {
                    let (alpha, beta) = (params.alpha, params.beta);
                    let two = f.embed(f.fq_int(2));
                    let first = f.add(
                        f.neg(f.mul(two, f.mul(alpha, x))),
                        f.mul(f.sub(f.conj(beta), beta), f.conj(x)),
                    );
                    let third = f.sub(
                        f.sub(f.mul(alpha, f.square(x)), f.scale(f.conj(beta), f.norm(x))),
                        f.embed(r),
                    );
                    self.plane.line([first, Fq2::ONE, third])
                }
            },
        }
    }

    /// Brute-force tangent: the unique line through `p` whose incidence count
    /// with the unital is 1.
    pub fn tangent_line_oracle(&self, p: &Point) -> Result<Line> {
        let idx = self.plane.point_index(p);
        if !self.contains(idx) {
            return Err(Error::Domain(format!(
                "{} is not a point of the unital",
                self.plane.format_point(p)
            )));
        }
        let mut tangents = self.tangents_through(idx).into_iter();
        match (tangents.next(), tangents.next()) {
            (Some((l, _)), None) => Ok(self.plane.line_at(l)),
            (None, _) => Err(Error::Inconsistent(
                "no tangent line through a unital point".into(),
            )),
            (Some(_), Some((l, _))) => Err(Error::Structural {
                line: self.plane.format_line(&self.plane.line_at(l)),
                count: 1,
            }),
        }
    }

    /// `(tangents, secants)` among the lines through `p`.
    pub fn tangent_count_through(&self, p: &Point) -> Result<(usize, usize)> {
        let idx = self.plane.point_index(p);
        let mut tangents = 0;
        let mut secants = 0;
        for &l in self.plane.lines_through(idx) {
            match self.classify_index(l)?.kind {
                LineKind::Tangent(_) => tangents += 1,
                LineKind::Secant => secants += 1,
            }
        }
        Ok((tangents, secants))
    }

    /// Tangent lines through `p`, each with its point of contact.
    pub fn tangents_through(&self, p: u32) -> Vec<(u32, u32)> {
        let s = self.stats();
        self.plane
            .lines_through(p)
            .iter()
            .filter(|&&l| s.count[l as usize] == 1)
            .map(|&l| (l, s.touch[l as usize]))
            .collect()
    }

    pub fn verify_minimal_blocking_set(&self) -> BlockingReport {
        blocking_report(&self.plane, &self.points)
    }
}

/// Outcome of the blocking-set checks on a point set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockingReport {
    /// Every line meets the set.
    pub blocking: bool,
    /// Every point lies on a line meeting the set only there.
    pub minimal: bool,
    pub size: usize,
    /// `|S| = q³ + 1`, the upper bound for minimal blocking sets.
    pub attains_bound: bool,
}

impl BlockingReport {
    pub fn passed(&self) -> bool {
        self.blocking && self.minimal && self.attains_bound
    }
}

/// Blocking-set checks for an arbitrary set of point indices.
pub fn blocking_report(plane: &Plane, set: &[u32]) -> BlockingReport {
    let n = plane.size();
    let mut member = vec![false; n];
    for &p in set {
        member[p as usize] = true;
    }
    let mut count = vec![0u32; n];
    for &p in set {
        for &l in plane.lines_through(p) {
            count[l as usize] += 1;
        }
    }
    let blocking = count.iter().all(|&c| c >= 1);
    let minimal = set.iter().all(|&p| {
        plane
            .lines_through(p)
            .iter()
            .any(|&l| count[l as usize] == 1)
    });
    let q = plane.field().q() as usize;
    let size = set.iter().filter(|&&p| member[p as usize]).count();
    BlockingReport {
        blocking,
        minimal,
        size,
        attains_bound: size == q * q * q + 1,
    }
}
