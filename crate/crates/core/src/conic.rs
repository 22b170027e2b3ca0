//! Conics `a·x² + b·y² + c·z² + d·xy + e·xz + f·yz = 0` and arc-in-conic fits.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Fq2};
use crate::pedal::is_collinear;
use crate::plane::{Plane, Point};

/// Coefficients in the order `xx, yy, zz, xy, xz, yz`, scaled so the first
/// non-zero one is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Conic([Fq2; 6]);

fn monomials(f: &FieldCtx, p: &Point) -> [Fq2; 6] {
    let [x, y, z] = p.coords();
    [
        f.mul(x, x),
        f.mul(y, y),
        f.mul(z, z),
        f.mul(x, y),
        f.mul(x, z),
        f.mul(y, z),
    ]
}

impl Conic {
    pub fn new(f: &FieldCtx, coeffs: [Fq2; 6]) -> Result<Self> {
        let lead = coeffs
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::Parameter("all conic coefficients are zero".into()))?;
        let inv = f.inv(lead)?;
        Ok(Conic(coeffs.map(|c| f.mul(c, inv))))
    }

    pub fn coeffs(&self) -> [Fq2; 6] {
        self.0
    }

    pub fn eval(&self, f: &FieldCtx, p: &Point) -> Fq2 {
        monomials(f, p)
            .iter()
            .zip(self.0.iter())
            .fold(Fq2::ZERO, |acc, (&m, &c)| f.add(acc, f.mul(m, c)))
    }

    pub fn contains(&self, f: &FieldCtx, p: &Point) -> bool {
        self.eval(f, p).is_zero()
    }

    /// Determinant of the doubled symmetric matrix; zero iff the conic splits
    /// into lines (odd characteristic).
    pub fn discriminant(&self, f: &FieldCtx) -> Fq2 {
        let [a, b, c, d, e, g] = self.0;
        let two = f.embed(f.fq_int(2));
        let m = [
            [f.mul(two, a), d, e],
            [d, f.mul(two, b), g],
            [e, g, f.mul(two, c)],
        ];
        let minor = |i: usize, j: usize, k: usize, l: usize| {
            f.sub(f.mul(m[1][i], m[2][j]), f.mul(m[1][k], m[2][l]))
        };
        let t0 = f.mul(m[0][0], minor(1, 2, 2, 1));
        let t1 = f.mul(m[0][1], minor(0, 2, 2, 0));
        let t2 = f.mul(m[0][2], minor(0, 1, 1, 0));
        f.add(f.sub(t0, t1), t2)
    }

    pub fn is_reducible(&self, f: &FieldCtx) -> bool {
        self.discriminant(f).is_zero()
    }
}

/// Null space of a matrix over GF(q²), one basis vector per free column.
fn null_space(f: &FieldCtx, mut rows: Vec<[Fq2; 6]>) -> Vec<[Fq2; 6]> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..6 {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][col]).expect("non-zero pivot");
        rows[r] = rows[r].map(|v| f.mul(v, inv));
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let k = rows[i][col];
                let pivot = rows[r];
                for (v, &pv) in rows[i].iter_mut().zip(pivot.iter()) {
                    *v = f.sub(*v, f.mul(k, pv));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..6)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = [Fq2::ZERO; 6];
            v[free] = Fq2::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[i][free]);
            }
            v
        })
        .collect()
}

/// The conic through five distinct points, no four of them collinear.
pub fn conic_through(plane: &Plane, pts: &[Point; 5]) -> Result<Conic> {
    let f = plane.field();
    for i in 0..5 {
        for j in i + 1..5 {
            if pts[i] == pts[j] {
                return Err(Error::Degenerate("repeated point in conic fit".into()));
            }
        }
    }
    let idx: Vec<u32> = pts.iter().map(|p| plane.point_index(p)).collect();
    for skip in 0..5 {
        let four: Vec<u32> = (0..5).filter(|&i| i != skip).map(|i| idx[i]).collect();
        if is_collinear(plane, &four) {
            return Err(Error::Degenerate(
                "four of the five points are collinear".into(),
            ));
        }
    }
    let rows = pts.iter().map(|p| monomials(f, p)).collect();
    let basis = null_space(f, rows);
    match basis.len() {
        1 => Conic::new(f, basis[0]),
        nullity => Err(Error::DegenerateConic { nullity }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConicFit {
    /// Every point lies on the conic; `None` when fewer than five points
    /// leave the conic undetermined.
    Contained { conic: Option<Conic> },
    /// The fitted conic misses at least one point.
    NotContained { conic: Conic, outside: usize },
    /// No window of five consecutive points determined a conic.
    Degenerate,
}

impl ConicFit {
    pub fn is_contained(&self) -> bool {
        matches!(self, ConicFit::Contained { .. })
    }
}

/// Fits a conic to five consecutive points of the arc (in index order,
/// sliding the window past degenerate choices) and tests the rest.
pub fn arc_in_conic(plane: &Plane, arc: &[u32]) -> ConicFit {
    let f = plane.field();
    let mut sorted = arc.to_vec();
    sorted.sort_unstable();
    if sorted.len() < 5 {
        return ConicFit::Contained { conic: None };
    }
    for win in sorted.windows(5) {
        let five = [0, 1, 2, 3, 4].map(|i| plane.point_at(win[i]));
        let Ok(conic) = conic_through(plane, &five) else {
            continue;
        };
        let outside = sorted
            .iter()
            .filter(|&&p| !conic.contains(f, &plane.point_at(p)))
            .count();
        return if outside == 0 {
            ConicFit::Contained { conic: Some(conic) }
        } else {
            ConicFit::NotContained { conic, outside }
        };
    }
    ConicFit::Degenerate
}
