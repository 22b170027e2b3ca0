//! Elations `E_t: (x, y, z) ↦ (x, y + tz, z)`, `t ∈ GF(q)`, with centre `P_∞`
//! and axis `ℓ_∞`, and the orbits of pedals under them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Fq, Fq2};
use crate::pedal::{feet_of, intersection_census, p_lambda, IntersectionCensus, PedalSet};
use crate::plane::{Line, Plane, Point};
use crate::unital::UnitalModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elation {
    pub t: Fq,
}

impl Elation {
    pub fn new(t: Fq) -> Self {
        Elation { t }
    }

    pub fn identity() -> Self {
        Elation { t: Fq::ZERO }
    }

    pub fn is_identity(&self) -> bool {
        self.t.is_zero()
    }

    /// `E_t ∘ E_s = E_{t+s}`.
    pub fn compose(&self, plane: &Plane, other: &Elation) -> Elation {
        Elation {
            t: plane.field().fq_add(self.t, other.t),
        }
    }

    pub fn inverse(&self, plane: &Plane) -> Elation {
        Elation {
            t: plane.field().fq_neg(self.t),
        }
    }

    pub fn apply(&self, plane: &Plane, p: &Point) -> Point {
        let f = plane.field();
        let [x, y, z] = p.coords();
        plane
            .point([x, f.add(y, f.scale(z, self.t)), z])
            .expect("collineation")
    }

    pub fn apply_index(&self, plane: &Plane, idx: u32) -> u32 {
        plane.point_index(&self.apply(plane, &plane.point_at(idx)))
    }

    /// Image of a line: `[a, b, c]ᵗ ↦ [a, b, c − tb]ᵗ`.
    pub fn apply_line(&self, plane: &Plane, l: &Line) -> Line {
        let f = plane.field();
        let [a, b, c] = l.coords();
        plane
            .line([a, b, f.sub(c, f.scale(b, self.t))])
            .expect("collineation")
    }
}

/// All `q` elations, ordered by `t`.
pub fn elation_group(plane: &Plane) -> Vec<Elation> {
    plane.field().fq_elements().map(Elation::new).collect()
}

/// `E_t(U) = U` as a point set.
pub fn preserves_unital(u: &UnitalModel, e: &Elation) -> bool {
    let plane = u.plane();
    u.points()
        .iter()
        .all(|&p| u.contains(e.apply_index(plane, p)))
}

/// The orbit of a pedal under the elation group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSet {
    pub base: u32,
    pub lambda: Option<Fq>,
    /// `(t, pedal of E_t(P))`, ascending in `t`.
    pub pedals: Vec<(Fq, PedalSet)>,
    /// All orbit points, ascending.
    pub union: Vec<u32>,
}

impl OrbitSet {
    pub fn contains(&self, idx: u32) -> bool {
        self.union.binary_search(&idx).is_ok()
    }
}

fn orbit_from(u: &UnitalModel, p: &Point, lambda: Option<Fq>) -> Result<OrbitSet> {
    let plane = u.plane();
    if plane.on_line_at_infinity(p) {
        return Err(Error::Domain(format!(
            "{} lies on ℓ_∞, which the elations fix pointwise",
            plane.format_point(p)
        )));
    }
    let base = feet_of(u, p)?;
    let mut pedals = Vec::new();
    let mut union = Vec::new();
    for e in elation_group(plane) {
        let image = e.apply(plane, p);
        let pedal = feet_of(u, &image)?;
        let mut mapped: Vec<u32> = base.feet.iter().map(|&a| e.apply_index(plane, a)).collect();
        mapped.sort_unstable();
        if mapped != pedal.feet {
            return Err(Error::TheoremViolation(format!(
                "E_t does not carry the pedal of {} onto the pedal of its image (t = {})",
                plane.format_point(p),
                e.t
            )));
        }
        union.extend_from_slice(&pedal.feet);
        pedals.push((e.t, pedal));
    }
    union.sort_unstable();
    let total = union.len();
    union.dedup();
    if union.len() != total {
        return Err(Error::TheoremViolation(format!(
            "pedals in the orbit of {} overlap",
            plane.format_point(p)
        )));
    }
    Ok(OrbitSet {
        base: plane.point_index(p),
        lambda,
        pedals,
        union,
    })
}

pub fn orbit_of_pedal(u: &UnitalModel, p: &Point) -> Result<OrbitSet> {
    orbit_from(u, p, None)
}

pub fn orbit_of_canonical_pedal(u: &UnitalModel, lambda: Fq) -> Result<OrbitSet> {
    let p = p_lambda(u.plane(), lambda);
    orbit_from(u, &p, Some(lambda))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionLine {
    /// `γ = s − λε`.
    pub s: Fq,
    pub line: Line,
    /// Orbit points on the line, ascending.
    pub points: Vec<u32>,
}

/// `l_γ = [0, −1, γ]ᵗ`.
pub fn gamma_line(plane: &Plane, gamma: Fq2) -> Line {
    let f = plane.field();
    plane
        .line([Fq2::ZERO, f.neg(Fq2::ONE), gamma])
        .expect("non-zero")
}

/// The `q` lines `l_γ`, `γ = s − λε`, through `[1,0,0]` that partition the
/// orbit of the pedal of `P_λ`; each carries `q + 1` orbit points and all its
/// unital points lie in the orbit.
pub fn partition_lines_for_orbit(
    u: &UnitalModel,
    lambda: Fq,
) -> Result<(OrbitSet, Vec<PartitionLine>)> {
    let plane = u.plane();
    let f = u.field();
    let q = f.q() as usize;
    let orbit = orbit_of_canonical_pedal(u, lambda)?;
    let mut lines = Vec::with_capacity(q);
    let mut covered = 0;
    for s in f.fq_elements() {
        let gamma = f.sub(f.embed(s), f.scale(f.epsilon(), lambda));
        let line = gamma_line(plane, gamma);
        let on = plane.points_on(plane.line_index(&line));
        let points: Vec<u32> = on.iter().copied().filter(|&p| orbit.contains(p)).collect();
        if points.len() != q + 1 {
            return Err(Error::TheoremViolation(format!(
                "{} meets the orbit in {} points",
                plane.format_line(&line),
                points.len()
            )));
        }
        if on.iter().any(|&p| u.contains(p) && !orbit.contains(p)) {
            return Err(Error::TheoremViolation(format!(
                "{} has unital points outside the orbit",
                plane.format_line(&line)
            )));
        }
        covered += points.len();
        lines.push(PartitionLine { s, line, points });
    }
    if covered != orbit.union.len() {
        return Err(Error::TheoremViolation(format!(
            "partition lines cover {covered} of {} orbit points",
            orbit.union.len()
        )));
    }
    Ok((orbit, lines))
}

/// Histogram of `|l ∩ orbit|` over all lines, witnesses for sizes ≥ 3.
pub fn orbit_line_census(u: &UnitalModel, lambda: Fq) -> Result<(OrbitSet, IntersectionCensus)> {
    let orbit = orbit_of_canonical_pedal(u, lambda)?;
    let census = intersection_census(u.plane(), &orbit.union, 3);
    Ok((orbit, census))
}

/// The incidence structure on the orbit points whose blocks are the lines
/// meeting the orbit in at least two points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStats {
    pub points: usize,
    pub blocks: usize,
    /// Number of blocks through a point ↦ number of points.
    pub point_degrees: BTreeMap<usize, usize>,
    /// Block size ↦ number of blocks.
    pub block_sizes: BTreeMap<usize, usize>,
    /// Constant point degree and constant block size.
    pub tactical: bool,
}

pub fn incidence_stats(plane: &Plane, orbit: &OrbitSet) -> IncidenceStats {
    let census = intersection_census(plane, &orbit.union, 2);
    let mut degree: BTreeMap<u32, usize> = orbit.union.iter().map(|&p| (p, 0)).collect();
    let mut block_sizes = BTreeMap::new();
    for w in &census.witnesses {
        *block_sizes.entry(w.points.len()).or_insert(0) += 1;
        for p in &w.points {
            *degree.get_mut(p).expect("orbit point") += 1;
        }
    }
    let mut point_degrees = BTreeMap::new();
    for d in degree.values() {
        *point_degrees.entry(*d).or_insert(0) += 1;
    }
    IncidenceStats {
        points: orbit.union.len(),
        blocks: census.witnesses.len(),
        tactical: point_degrees.len() <= 1 && block_sizes.len() <= 1,
        point_degrees,
        block_sizes,
    }
}
