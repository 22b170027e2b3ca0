//! Exact arithmetic in the tower GF(p) ⊂ GF(q) ⊂ GF(q²).
//!
//! GF(q) = GF(p)[t]/(f) for the lexicographically smallest monic irreducible
//! `f` of degree `n`, and GF(q²) = {a + εb : a, b ∈ GF(q)} with ε² = w for the
//! smallest non-square `w` of GF(q).
//!
//! Encodings:
//! - a GF(q) element is the integer `Σ cᵢ pⁱ` of its little-endian
//!   coefficient digits, so the prime field sits at `0..p`;
//! - a GF(q²) element `a + εb` is the integer `a + q·b`, so GF(q) embeds as the
//!   codes `0..q`.
//!
//! Two backends compute the same functions: [`Backend::Polynomial`] works on
//! coefficient digits directly, [`Backend::Tables`] uses Cayley tables for
//! addition and log/exp tables for multiplication, all generated from the
//! polynomial routines.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported `q = pⁿ`.
pub const MAX_ORDER: u32 = 31;

const MAX_DIGITS: usize = 8;

/// An element of GF(q), stored as its canonical integer encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(u32);

/// An element `re + ε·im` of GF(q²), stored as `re + q·im`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq2(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Fq2 {
    pub const ZERO: Fq2 = Fq2(0);
    pub const ONE: Fq2 = Fq2(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Which arithmetic route a [`FieldCtx`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Tables,
    Polynomial,
}

struct Tables {
    fq_add: Vec<u16>,
    fq_mul: Vec<u16>,
    fq_neg: Vec<u16>,
    add: Vec<u16>,
    neg: Vec<u16>,
    // exp has length 2(q²-1) so that log a + log b never needs reduction.
    exp: Vec<u16>,
    log: Vec<u32>,
}

/// The field tower for a fixed `(p, n)`. Immutable once built.
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    irreducible: Vec<u32>,
    w: Fq,
    backend: Backend,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("irreducible", &self.irreducible)
            .field("w", &self.w)
            .field("backend", &self.backend)
            .finish()
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl FieldCtx {
    /// Builds the tower with the default non-square and the table backend.
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::with_options(p, n, None, Backend::default())
    }

    /// Builds the tower, optionally overriding `w` (given by its GF(q)
    /// encoding; it must be a non-square).
    pub fn with_options(p: u32, n: u32, w: Option<u32>, backend: Backend) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("p = {p} is not prime")));
        }
        if p == 2 {
            return Err(Error::Parameter("characteristic 2 is not supported".into()));
        }
        if n < 1 {
            return Err(Error::Parameter("n must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::Parameter(format!(
                "q = {p}^{n} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        let q = q as u32;
        let irreducible = smallest_irreducible(p, n as usize);
        let mut ctx = FieldCtx {
            p,
            n,
            q,
            irreducible,
            w: Fq::ZERO,
            backend: Backend::Polynomial,
            tables: None,
        };
        ctx.w = match w {
            None => ctx
                .fq_elements()
                .find(|&a| !ctx.is_square(a))
                .expect("odd q has non-squares"),
            Some(code) => {
                if code >= q {
                    return Err(Error::Parameter(format!(
                        "w = {code} is not an element of GF({q})"
                    )));
                }
                if ctx.is_square(Fq(code)) {
                    return Err(Error::Parameter(format!(
                        "w = {code} is a square in GF({q})"
                    )));
                }
                Fq(code)
            }
        };
        if backend == Backend::Tables {
            ctx.tables = Some(ctx.build_tables());
            ctx.backend = Backend::Tables;
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q²`, the size of the quadratic extension.
    pub fn order(&self) -> u32 {
        self.q * self.q
    }

    /// Non-leading coefficients `c₀..c_{n-1}` of the monic defining polynomial.
    pub fn irreducible(&self) -> &[u32] {
        &self.irreducible
    }

    pub fn w(&self) -> Fq {
        self.w
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn epsilon(&self) -> Fq2 {
        Fq2(self.q)
    }

    pub fn fq(&self, code: u32) -> Result<Fq> {
        if code < self.q {
            Ok(Fq(code))
        } else {
            Err(Error::Parse(format!(
                "{code} is not an element of GF({})",
                self.q
            )))
        }
    }

    pub fn fq2(&self, code: u32) -> Result<Fq2> {
        if code < self.order() {
            Ok(Fq2(code))
        } else {
            Err(Error::Parse(format!(
                "{code} is not an element of GF({}²)",
                self.q
            )))
        }
    }

    /// The image of the integer `k` in the prime field.
    pub fn fq_int(&self, k: i64) -> Fq {
        Fq(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn fq_elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq2> {
        (0..self.order()).map(Fq2)
    }

    /// Little-endian base-p coefficient digits of a GF(q) element.
    pub fn fq_coeffs(&self, a: Fq) -> Vec<u32> {
        let d = self.digits(a.0);
        d[..self.n as usize].to_vec()
    }

    // ---- GF(q) ----

    pub fn fq_add(&self, a: Fq, b: Fq) -> Fq {
        match &self.tables {
            Some(t) => Fq(t.fq_add[(a.0 * self.q + b.0) as usize] as u32),
            None => Fq(self.poly_add(a.0, b.0)),
        }
    }

    pub fn fq_neg(&self, a: Fq) -> Fq {
        match &self.tables {
            Some(t) => Fq(t.fq_neg[a.0 as usize] as u32),
            None => Fq(self.poly_neg(a.0)),
        }
    }

    pub fn fq_sub(&self, a: Fq, b: Fq) -> Fq {
        self.fq_add(a, self.fq_neg(b))
    }

    pub fn fq_mul(&self, a: Fq, b: Fq) -> Fq {
        match &self.tables {
            Some(t) => Fq(t.fq_mul[(a.0 * self.q + b.0) as usize] as u32),
            None => Fq(self.poly_mul(a.0, b.0)),
        }
    }

    pub fn fq_pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fq_mul(acc, base);
            }
            base = self.fq_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn fq_inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.fq_pow(a, self.q as u64 - 2))
    }

    pub fn fq_div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.fq_mul(a, self.fq_inv(b)?))
    }

    /// Quadratic character test: `a = 0` or `a^((q-1)/2) = 1`.
    pub fn is_square(&self, a: Fq) -> bool {
        a.is_zero() || self.fq_pow(a, (self.q as u64 - 1) / 2) == Fq::ONE
    }

    // ---- GF(q²) ----

    pub fn from_parts(&self, re: Fq, im: Fq) -> Fq2 {
        Fq2(re.0 + self.q * im.0)
    }

    pub fn embed(&self, a: Fq) -> Fq2 {
        Fq2(a.0)
    }

    pub fn re(&self, x: Fq2) -> Fq {
        Fq(x.0 % self.q)
    }

    pub fn im(&self, x: Fq2) -> Fq {
        Fq(x.0 / self.q)
    }

    /// `x` as a GF(q) element, if its ε-part vanishes.
    pub fn as_fq(&self, x: Fq2) -> Option<Fq> {
        (x.0 < self.q).then_some(Fq(x.0))
    }

    pub fn add(&self, x: Fq2, y: Fq2) -> Fq2 {
        match &self.tables {
            Some(t) => Fq2(t.add[(x.0 * self.order() + y.0) as usize] as u32),
            None => self.from_parts(
                self.fq_add(self.re(x), self.re(y)),
                self.fq_add(self.im(x), self.im(y)),
            ),
        }
    }

    pub fn neg(&self, x: Fq2) -> Fq2 {
        match &self.tables {
            Some(t) => Fq2(t.neg[x.0 as usize] as u32),
            None => self.from_parts(self.fq_neg(self.re(x)), self.fq_neg(self.im(x))),
        }
    }

    pub fn sub(&self, x: Fq2, y: Fq2) -> Fq2 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fq2, y: Fq2) -> Fq2 {
        match &self.tables {
            Some(t) => {
                if x.is_zero() || y.is_zero() {
                    Fq2::ZERO
                } else {
                    Fq2(t.exp[(t.log[x.0 as usize] + t.log[y.0 as usize]) as usize] as u32)
                }
            }
            None => self.poly_mul2(x, y),
        }
    }

    /// `x·c` for `c ∈ GF(q)`.
    pub fn scale(&self, x: Fq2, c: Fq) -> Fq2 {
        self.mul(x, self.embed(c))
    }

    pub fn square(&self, x: Fq2) -> Fq2 {
        self.mul(x, x)
    }

    pub fn pow(&self, x: Fq2, e: u64) -> Fq2 {
        if let Some(t) = &self.tables {
            if x.is_zero() {
                return if e == 0 { Fq2::ONE } else { Fq2::ZERO };
            }
            let m = (self.order() - 1) as u64;
            let k = (t.log[x.0 as usize] as u64 * (e % m)) % m;
            return Fq2(t.exp[k as usize] as u32);
        }
        let mut base = x;
        let mut acc = Fq2::ONE;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Fq2) -> Result<Fq2> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.tables {
            Some(t) => {
                let m = self.order() - 1;
                Ok(Fq2(t.exp[((m - t.log[x.0 as usize]) % m) as usize] as u32))
            }
            None => {
                // x⁻¹ = x̄ / N(x)
                let n_inv = self.fq_inv(self.norm(x))?;
                Ok(self.scale(self.conj(x), n_inv))
            }
        }
    }

    pub fn div(&self, x: Fq2, y: Fq2) -> Result<Fq2> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Frobenius `x ↦ x^q`, i.e. `a + εb ↦ a − εb`.
    pub fn conj(&self, x: Fq2) -> Fq2 {
        self.from_parts(self.re(x), self.fq_neg(self.im(x)))
    }

    /// `T(x) = x + x̄ = 2a`.
    pub fn trace(&self, x: Fq2) -> Fq {
        self.fq_add(self.re(x), self.re(x))
    }

    /// `N(x) = x·x̄ = a² − w·b²`.
    pub fn norm(&self, x: Fq2) -> Fq {
        let (a, b) = (self.re(x), self.im(x));
        self.fq_sub(self.fq_mul(a, a), self.fq_mul(self.w, self.fq_mul(b, b)))
    }

    // ---- text form ----

    /// `A` when the ε-part is zero, otherwise `A+e*B`.
    pub fn format(&self, x: Fq2) -> String {
        let (a, b) = (self.re(x), self.im(x));
        if b.is_zero() {
            format!("{a}")
        } else {
            format!("{a}+e*{b}")
        }
    }

    /// Parses `A`, `e`, `e*B`, `B*e`, `A+e`, `A+e*B`. Any GF(q) slot may be
    /// the symbol `w` for the chosen non-square.
    pub fn parse(&self, text: &str) -> Result<Fq2> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let (re_part, eps_part) = match s.split_once('+') {
            Some((a, b)) => (Some(a), Some(b)),
            None if s.contains('e') => (None, Some(s.as_str())),
            None => (Some(s.as_str()), None),
        };
        let re = match re_part {
            Some(a) => self.parse_fq(a)?,
            None => Fq::ZERO,
        };
        let im = match eps_part {
            None => Fq::ZERO,
            Some("e") => Fq::ONE,
            Some(t) => {
                let coeff = t
                    .strip_prefix("e*")
                    .or_else(|| t.strip_suffix("*e"))
                    .ok_or_else(|| Error::Parse(format!("malformed ε-part `{t}` in `{text}`")))?;
                self.parse_fq(coeff)?
            }
        };
        Ok(self.from_parts(re, im))
    }

    /// Parses a GF(q) element: a decimal code or `w`.
    pub fn parse_fq(&self, text: &str) -> Result<Fq> {
        let t = text.trim();
        if t == "w" {
            return Ok(self.w);
        }
        let code: u32 = t
            .parse()
            .map_err(|_| Error::Parse(format!("`{t}` is not a GF({}) element", self.q)))?;
        self.fq(code)
    }

    // ---- polynomial backend ----

    fn digits(&self, mut code: u32) -> [u32; MAX_DIGITS] {
        let mut d = [0u32; MAX_DIGITS];
        for slot in d.iter_mut().take(self.n as usize) {
            *slot = code % self.p;
            code /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d[..self.n as usize]
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + c)
    }

    fn poly_add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut s = [0u32; MAX_DIGITS];
        for i in 0..self.n as usize {
            s[i] = (da[i] + db[i]) % self.p;
        }
        self.undigits(&s)
    }

    fn poly_neg(&self, a: u32) -> u32 {
        let da = self.digits(a);
        let mut s = [0u32; MAX_DIGITS];
        for i in 0..self.n as usize {
            s[i] = (self.p - da[i]) % self.p;
        }
        self.undigits(&s)
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let n = self.n as usize;
        let p = self.p;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u32; 2 * MAX_DIGITS];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        // tⁿ ≡ −Σ cᵢ tⁱ
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &fi) in self.irreducible.iter().enumerate() {
                prod[k - n + i] = (prod[k - n + i] + (p - c) * fi) % p;
            }
        }
        self.undigits(&prod)
    }

    fn poly_mul2(&self, x: Fq2, y: Fq2) -> Fq2 {
        let (a, b) = (self.re(x), self.im(x));
        let (c, d) = (self.re(y), self.im(y));
        let re = self.fq_add(self.fq_mul(a, c), self.fq_mul(self.w, self.fq_mul(b, d)));
        let im = self.fq_add(self.fq_mul(a, d), self.fq_mul(b, c));
        self.from_parts(re, im)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let qq = q * q;
        let mut fq_add = vec![0u16; q * q];
        let mut fq_mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                fq_add[a * q + b] = self.poly_add(a as u32, b as u32) as u16;
                fq_mul[a * q + b] = self.poly_mul(a as u32, b as u32) as u16;
            }
        }
        let fq_neg: Vec<u16> = (0..q).map(|a| self.poly_neg(a as u32) as u16).collect();
        let mut add = vec![0u16; qq * qq];
        for x in 0..qq {
            for y in 0..qq {
                let (a, b) = (x % q, x / q);
                let (c, d) = (y % q, y / q);
                let re = fq_add[a * q + c] as usize;
                let im = fq_add[b * q + d] as usize;
                add[x * qq + y] = (re + q * im) as u16;
            }
        }
        let neg = (0..qq)
            .map(|x| {
                let (a, b) = (x % q, x / q);
                fq_neg[a] + q as u16 * fq_neg[b]
            })
            .collect();

        let m = qq - 1;
        let generator = (2..qq as u32)
            .map(Fq2)
            .find(|&g| self.poly_order(g) == m as u64)
            .unwrap_or(Fq2(1));
        let mut exp = vec![0u16; 2 * m];
        let mut log = vec![0u32; qq];
        let mut cur = Fq2::ONE;
        for k in 0..m {
            exp[k] = cur.0 as u16;
            exp[k + m] = cur.0 as u16;
            log[cur.0 as usize] = k as u32;
            cur = self.poly_mul2(cur, generator);
        }
        Tables {
            fq_add,
            fq_mul,
            fq_neg,
            add,
            neg,
            exp,
            log,
        }
    }

    fn poly_order(&self, g: Fq2) -> u64 {
        let mut cur = g;
        let mut k = 1;
        while cur != Fq2::ONE {
            cur = self.poly_mul2(cur, g);
            k += 1;
            if k > self.order() as u64 {
                return 0;
            }
        }
        k
    }
}

/// Smallest monic irreducible of degree `n` over GF(p), comparing the
/// non-leading coefficients as the integer `Σ cᵢ pⁱ`.
fn smallest_irreducible(p: u32, n: usize) -> Vec<u32> {
    let total = (p as u64).pow(n as u32);
    (0..total)
        .map(|code| to_digits(code, p, n))
        .find(|coeffs| is_irreducible(coeffs, p))
        .expect("irreducible polynomials exist in every degree")
}

fn to_digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(len);
    for _ in 0..len {
        d.push((code % p as u64) as u32);
        code /= p as u64;
    }
    d
}

/// Trial division by every monic polynomial of degree `1..=n/2`.
pub(crate) fn is_irreducible(coeffs: &[u32], p: u32) -> bool {
    let n = coeffs.len();
    let mut f: Vec<u32> = coeffs.to_vec();
    f.push(1);
    for d in 1..=n / 2 {
        for code in 0..(p as u64).pow(d as u32) {
            let mut g = to_digits(code, p, d);
            g.push(1);
            if poly_rem(&f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    for k in (dg..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for i in 0..=dg {
            r[k - dg + i] = (r[k - dg + i] + (p - c) * g[i]) % p;
        }
    }
    r.truncate(dg);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(ctx: &FieldCtx) -> Vec<Fq> {
        let mut s: Vec<Fq> = ctx.fq_elements().map(|a| ctx.fq_mul(a, a)).collect();
        s.sort();
        s.dedup();
        s
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldCtx::new(2, 1), Err(Error::Parameter(_))));
        assert!(matches!(FieldCtx::new(9, 1), Err(Error::Parameter(_))));
        assert!(matches!(FieldCtx::new(3, 0), Err(Error::Parameter(_))));
        assert!(matches!(FieldCtx::new(37, 1), Err(Error::Parameter(_))));
        assert!(FieldCtx::new(13, 1).is_ok());
    }

    #[test]
    fn minimum_non_square_matches_square_table() {
        for (p, n, w) in [(3, 1, 2), (5, 1, 2), (7, 1, 3), (11, 1, 2), (13, 1, 2)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            assert_eq!(ctx.w().code(), w, "p={p}");
            let sq = squares(&ctx);
            let expected = ctx.fq_elements().find(|a| !sq.contains(a)).unwrap();
            assert_eq!(ctx.w(), expected);
        }
    }

    #[test]
    fn gf9_tower_is_deterministic() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        // t² + 1 is the first monic irreducible quadratic over GF(3)
        assert_eq!(ctx.irreducible(), &[1, 0]);
        let sq = squares(&ctx);
        let expected = ctx.fq_elements().find(|a| !sq.contains(a)).unwrap();
        assert_eq!(ctx.w(), expected);
        assert_eq!(ctx.w().code(), 4);
    }

    #[test]
    fn small_arithmetic_examples() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        assert_eq!(ctx.fq_add(Fq(2), Fq(2)), Fq(1));
        let e = ctx.epsilon();
        assert_eq!(ctx.mul(e, e), ctx.embed(ctx.w()));
        let one_plus_e = ctx.add(Fq2::ONE, e);
        let one_minus_e = ctx.sub(Fq2::ONE, e);
        assert_eq!(ctx.mul(one_plus_e, one_minus_e), ctx.embed(Fq(2)));
        assert_eq!(ctx.norm(one_plus_e), Fq(2));
        assert_eq!(ctx.trace(e), Fq::ZERO);
        assert_eq!(ctx.norm(e), ctx.fq_neg(ctx.w()));
        assert_eq!(ctx.conj(e), ctx.neg(e));
        assert_eq!(ctx.pow(e, 3), ctx.neg(e));
        assert_eq!(ctx.inv(Fq2::ZERO), Err(Error::DivisionByZero));
        assert_eq!(ctx.fq_inv(Fq::ZERO), Err(Error::DivisionByZero));
        assert!(ctx.is_square(Fq(0)));
        assert!(ctx.is_square(Fq(1)));
        assert!(!ctx.is_square(Fq(2)));
    }

    #[test]
    fn backends_agree_exhaustively() {
        for (p, n) in [(3, 1), (5, 1), (3, 2), (7, 1), (3, 3), (13, 1)] {
            let t = FieldCtx::new(p, n).unwrap();
            let poly = FieldCtx::with_options(p, n, None, Backend::Polynomial).unwrap();
            assert_eq!(t.w(), poly.w());
            for x in t.elements() {
                assert_eq!(t.neg(x), poly.neg(x));
                assert_eq!(t.conj(x), poly.conj(x));
                assert_eq!(t.inv(x), poly.inv(x));
                assert_eq!(t.pow(x, 7), poly.pow(x, 7));
                for y in t.elements() {
                    assert_eq!(t.add(x, y), poly.add(x, y));
                    assert_eq!(t.mul(x, y), poly.mul(x, y), "p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn frobenius_is_conjugation() {
        for (p, n) in [(3, 1), (5, 1), (3, 2), (7, 1), (11, 1), (13, 1), (5, 2)] {
            for backend in [Backend::Tables, Backend::Polynomial] {
                let ctx = FieldCtx::with_options(p, n, None, backend).unwrap();
                for x in ctx.elements() {
                    assert_eq!(ctx.pow(x, ctx.q() as u64), ctx.conj(x));
                    assert_eq!(ctx.conj(ctx.conj(x)), x);
                    assert_eq!(ctx.conj(x) == x, ctx.as_fq(x).is_some());
                    assert_eq!(ctx.embed(ctx.trace(x)), ctx.add(x, ctx.conj(x)));
                    assert_eq!(ctx.embed(ctx.norm(x)), ctx.mul(x, ctx.conj(x)));
                }
            }
        }
    }

    #[test]
    fn square_count_and_character() {
        for (p, n) in [(3, 1), (5, 1), (3, 2), (7, 1), (3, 3), (5, 2), (31, 1)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let sq = squares(&ctx);
            assert_eq!(sq.len() as u32 - 1, (ctx.q() - 1) / 2);
            for a in ctx.fq_elements() {
                assert_eq!(ctx.is_square(a), sq.contains(&a));
            }
        }
    }

    #[test]
    fn irreducible_is_verified() {
        // t² + 1 splits over GF(5) (2² = −1)
        assert!(!is_irreducible(&[1, 0], 5));
        assert!(is_irreducible(&[2, 0], 5));
        let ctx = FieldCtx::new(3, 3).unwrap();
        assert!(is_irreducible(ctx.irreducible(), 3));
        // every non-zero element is invertible
        for a in ctx.fq_elements().skip(1) {
            assert_eq!(ctx.fq_mul(a, ctx.fq_inv(a).unwrap()), Fq::ONE);
        }
    }

    #[test]
    fn w_override() {
        let ctx = FieldCtx::with_options(7, 1, Some(5), Backend::Tables).unwrap();
        assert_eq!(ctx.w(), Fq(5));
        assert!(FieldCtx::with_options(7, 1, Some(2), Backend::Tables).is_err());
    }

    #[test]
    fn text_syntax() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let x = ctx.parse("3+e*4").unwrap();
        assert_eq!((ctx.re(x), ctx.im(x)), (Fq(3), Fq(4)));
        assert_eq!(ctx.format(x), "3+e*4");
        assert_eq!(ctx.parse("e").unwrap(), ctx.epsilon());
        assert_eq!(ctx.parse("e*2").unwrap(), ctx.scale(ctx.epsilon(), Fq(2)));
        assert_eq!(ctx.parse("w*e").unwrap(), ctx.scale(ctx.epsilon(), ctx.w()));
        assert_eq!(ctx.parse("4").unwrap(), ctx.embed(Fq(4)));
        assert_eq!(ctx.format(ctx.embed(Fq(4))), "4");
        assert!(ctx.parse("5").is_err());
        assert!(ctx.parse("1+x").is_err());
        assert!(ctx.parse("").is_err());
    }
}
