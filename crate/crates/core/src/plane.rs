//! The Desarguesian plane PG(2,q²) in normalized homogeneous coordinates.
//!
//! Points and lines are triples whose leftmost non-zero coordinate is 1.
//! Each has a dense index: `[1,y,z] ↦ y·q² + z`, `[0,1,z] ↦ q⁴ + z`,
//! `[0,0,1] ↦ q⁴ + q²` (field elements by their encoding). Enumeration and
//! every report follow index order.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Fq2};

/// Largest `q` for which the plane (with its incidence tables) is built.
pub const MAX_PLANE_ORDER: u32 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point([Fq2; 3]);

/// A line `[x,y,z]^t`, the set of points `[a,b,c]` with `ax + by + cz = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Line([Fq2; 3]);

impl Point {
    pub fn coords(&self) -> [Fq2; 3] {
        self.0
    }

    /// The line with the same coordinates.
    pub fn dual(self) -> Line {
        Line(self.0)
    }
}

impl Line {
    pub fn coords(&self) -> [Fq2; 3] {
        self.0
    }

    /// The point with the same coordinates.
    pub fn dual(self) -> Point {
        Point(self.0)
    }
}

pub struct Plane {
    field: Arc<FieldCtx>,
    size: usize,
    line_len: usize,
    points_on: Vec<u32>,
    lines_through: Vec<u32>,
}

impl std::fmt::Debug for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Plane")
            .field("q", &self.field.q())
            .field("size", &self.size)
            .finish()
    }
}

impl Plane {
    pub fn new(field: Arc<FieldCtx>) -> Result<Self> {
        let q = field.q();
        if q > MAX_PLANE_ORDER {
            return Err(Error::Parameter(format!(
                "plane order q² = {} exceeds the supported maximum {}",
                q * q,
                MAX_PLANE_ORDER * MAX_PLANE_ORDER
            )));
        }
        let qq = field.order() as usize;
        let size = qq * qq + qq + 1;
        let line_len = qq + 1;
        let mut plane = Plane {
            field,
            size,
            line_len,
            points_on: Vec::with_capacity(size * line_len),
            lines_through: vec![0; size * line_len],
        };
        let mut fill = vec![0usize; size];
        for l in 0..size as u32 {
            let on = plane.solve_points_on(&plane.line_at(l));
            debug_assert_eq!(on.len(), line_len);
            for &p in &on {
                let slot = p as usize * line_len + fill[p as usize];
                plane.lines_through[slot] = l;
                fill[p as usize] += 1;
            }
            plane.points_on.extend_from_slice(&on);
        }
        Ok(plane)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    /// Number of points (= number of lines), `q⁴ + q² + 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Points per line (= lines per point), `q² + 1`.
    pub fn line_len(&self) -> usize {
        self.line_len
    }

    pub fn point(&self, coords: [Fq2; 3]) -> Result<Point> {
        self.normalize(coords)
            .map(Point)
            .ok_or_else(|| Error::Degenerate("the zero vector is not a point".into()))
    }

    pub fn line(&self, coords: [Fq2; 3]) -> Result<Line> {
        self.normalize(coords)
            .map(Line)
            .ok_or_else(|| Error::Degenerate("the zero vector is not a line".into()))
    }

    /// Affine point `[x, y, 1]`.
    pub fn affine(&self, x: Fq2, y: Fq2) -> Point {
        Point(self.normalize([x, y, Fq2::ONE]).expect("z = 1"))
    }

    /// `P_∞ = [0,1,0]`.
    pub fn p_infinity(&self) -> Point {
        Point([Fq2::ZERO, Fq2::ONE, Fq2::ZERO])
    }

    /// `ℓ_∞ = [0,0,1]^t`.
    pub fn line_at_infinity(&self) -> Line {
        Line([Fq2::ZERO, Fq2::ZERO, Fq2::ONE])
    }

    pub fn on_line_at_infinity(&self, p: &Point) -> bool {
        p.0[2].is_zero()
    }

    fn normalize(&self, v: [Fq2; 3]) -> Option<[Fq2; 3]> {
        let f = &self.field;
        let lead = v.iter().copied().find(|c| !c.is_zero())?;
        if lead == Fq2::ONE {
            return Some(v);
        }
        let inv = f.inv(lead).expect("lead is non-zero");
        Some(v.map(|c| f.mul(c, inv)))
    }

    fn index_of(&self, v: &[Fq2; 3]) -> u32 {
        let qq = self.field.order();
        if v[0] == Fq2::ONE {
            v[1].code() * qq + v[2].code()
        } else if v[1] == Fq2::ONE {
            qq * qq + v[2].code()
        } else {
            qq * qq + qq
        }
    }

    fn coords_of(&self, idx: u32) -> [Fq2; 3] {
        let f = &self.field;
        let qq = f.order();
        let el = |c: u32| f.fq2(c).expect("index in range");
        if idx < qq * qq {
            [Fq2::ONE, el(idx / qq), el(idx % qq)]
        } else if idx < qq * qq + qq {
            [Fq2::ZERO, Fq2::ONE, el(idx - qq * qq)]
        } else {
            assert!(idx as usize == self.size - 1, "index {idx} out of range");
            [Fq2::ZERO, Fq2::ZERO, Fq2::ONE]
        }
    }

    pub fn point_index(&self, p: &Point) -> u32 {
        self.index_of(&p.0)
    }

    pub fn line_index(&self, l: &Line) -> u32 {
        self.index_of(&l.0)
    }

    pub fn point_at(&self, idx: u32) -> Point {
        Point(self.coords_of(idx))
    }

    pub fn line_at(&self, idx: u32) -> Line {
        Line(self.coords_of(idx))
    }

    /// All points in index order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size as u32).map(|i| self.point_at(i))
    }

    /// All lines in index order.
    pub fn lines(&self) -> impl Iterator<Item = Line> + '_ {
        (0..self.size as u32).map(|i| self.line_at(i))
    }

    fn dot(&self, a: &[Fq2; 3], b: &[Fq2; 3]) -> Fq2 {
        let f = &self.field;
        let s = f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1]));
        f.add(s, f.mul(a[2], b[2]))
    }

    fn cross(&self, a: &[Fq2; 3], b: &[Fq2; 3]) -> [Fq2; 3] {
        let f = &self.field;
        let m = |i: usize, j: usize| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
        [m(1, 2), m(2, 0), m(0, 1)]
    }

    pub fn incident(&self, p: &Point, l: &Line) -> bool {
        self.dot(&p.0, &l.0).is_zero()
    }

    pub fn join(&self, a: &Point, b: &Point) -> Result<Line> {
        if a == b {
            return Err(Error::Degenerate("join of a point with itself".into()));
        }
        self.line(self.cross(&a.0, &b.0))
    }

    pub fn meet(&self, l: &Line, m: &Line) -> Result<Point> {
        if l == m {
            return Err(Error::Degenerate("meet of a line with itself".into()));
        }
        self.point(self.cross(&l.0, &m.0))
    }

    /// Determinant test: true iff the three points lie on a common line.
    pub fn collinear(&self, a: &Point, b: &Point, c: &Point) -> bool {
        self.dot(&a.0, &self.cross(&b.0, &c.0)).is_zero()
    }

    /// Indices of the points on a line, ascending.
    pub fn points_on(&self, line: u32) -> &[u32] {
        let s = line as usize * self.line_len;
        &self.points_on[s..s + self.line_len]
    }

    /// Indices of the lines through a point, ascending.
    pub fn lines_through(&self, point: u32) -> &[u32] {
        let s = point as usize * self.line_len;
        &self.lines_through[s..s + self.line_len]
    }

    fn solve_points_on(&self, l: &Line) -> Vec<u32> {
        let f = &self.field;
        let [a, b, c] = l.0;
        let mut out = Vec::with_capacity(self.line_len);
        // [1, y, z]: a + b·y + c·z = 0
        if !c.is_zero() {
            let neg_inv_c = f.neg(f.inv(c).expect("non-zero"));
            for y in f.elements() {
                let z = f.mul(f.add(a, f.mul(b, y)), neg_inv_c);
                out.push(self.index_of(&[Fq2::ONE, y, z]));
            }
        } else if !b.is_zero() {
            let y = f.neg(f.div(a, b).expect("non-zero"));
            for z in f.elements() {
                out.push(self.index_of(&[Fq2::ONE, y, z]));
            }
        }
        // [0, 1, z]: b + c·z = 0
        if !c.is_zero() {
            let z = f.neg(f.div(b, c).expect("non-zero"));
            out.push(self.index_of(&[Fq2::ZERO, Fq2::ONE, z]));
        } else if b.is_zero() {
            for z in f.elements() {
                out.push(self.index_of(&[Fq2::ZERO, Fq2::ONE, z]));
            }
        }
        if c.is_zero() {
            out.push(self.index_of(&[Fq2::ZERO, Fq2::ZERO, Fq2::ONE]));
        }
        out.sort_unstable();
        out
    }

    fn format_coords(&self, v: &[Fq2; 3]) -> String {
        let f = &self.field;
        format!("[{},{},{}]", f.format(v[0]), f.format(v[1]), f.format(v[2]))
    }

    /// `[X,Y,Z]`.
    pub fn format_point(&self, p: &Point) -> String {
        self.format_coords(&p.0)
    }

    /// `[X,Y,Z]` (reports add the `^t` marker themselves when wanted).
    pub fn format_line(&self, l: &Line) -> String {
        self.format_coords(&l.0)
    }

    fn parse_coords(&self, text: &str) -> Result<[Fq2; 3]> {
        let t = text.trim();
        let t = t.strip_suffix("^t").unwrap_or(t);
        let t = t.strip_prefix('[').unwrap_or(t);
        let t = t.strip_suffix(']').unwrap_or(t);
        let parts: Vec<&str> = t.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("`{text}` is not a coordinate triple")));
        }
        let f = &self.field;
        Ok([f.parse(parts[0])?, f.parse(parts[1])?, f.parse(parts[2])?])
    }

    /// Parses `X,Y,Z` or `[X,Y,Z]` and normalizes.
    pub fn parse_point(&self, text: &str) -> Result<Point> {
        self.point(self.parse_coords(text)?)
    }

    pub fn parse_line(&self, text: &str) -> Result<Line> {
        self.line(self.parse_coords(text)?)
    }
}
