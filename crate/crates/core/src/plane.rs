//! The Singer model of PG(2,q).
//!
//! Points are the cosets `F_q^x zeta^k` of `F_{q^3}^x / F_q^x`, addressed by
//! `k mod N` with `N = q^2 + q + 1`. The line `lambda_0(x)` is the translate
//! `x + D` of the set `D` of trace-zero cosets, which is a perfect difference
//! set. All constructions below reduce to integer arithmetic mod `N`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldContext, GfError, PrimePower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("plane axiom violated: {0}")]
    PlaneAxiomViolation(String),
    #[error("multiplication by omega needs q = 1 mod 3 (q = {0})")]
    NotApplicable(u32),
}

/// A point of the plane as a Singer logarithm in `0..N`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Point(pub u32);

impl Point {
    pub fn log(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A collineation of the Singer model of the form `x -> scale * x + shift
/// (mod N)`, where `scale` is a power of `q` (a Frobenius power) and `shift`
/// is a Singer translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Collineation {
    pub scale: u32,
    pub shift: u32,
}

impl Collineation {
    pub fn identity() -> Self {
        Collineation { scale: 1, shift: 0 }
    }

    pub fn apply(&self, n: u32, x: Point) -> Point {
        let v = (self.scale as u64 * x.0 as u64 + self.shift as u64) % n as u64;
        Point(v as u32)
    }

    pub fn compose(&self, n: u32, inner: &Collineation) -> Collineation {
        // self(inner(x)) = s1 (s2 x + t2) + t1
        let n = n as u64;
        Collineation {
            scale: ((self.scale as u64 * inner.scale as u64) % n) as u32,
            shift: ((self.scale as u64 * inner.shift as u64 + self.shift as u64) % n) as u32,
        }
    }

    /// Smallest `k >= 1` with `self^k = id` (at most `3N`).
    pub fn order(&self, n: u32) -> u32 {
        let id = Collineation::identity();
        let mut cur = *self;
        let mut k = 1;
        while cur != id {
            cur = self.compose(n, &cur);
            k += 1;
        }
        k
    }
}

/// The trace-zero cosets, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceZeroSet {
    ds: Vec<u32>,
}

impl TraceZeroSet {
    pub fn as_slice(&self) -> &[u32] {
        &self.ds
    }

    pub fn len(&self) -> usize {
        self.ds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ds.is_empty()
    }

    pub fn contains(&self, d: u32) -> bool {
        self.ds.binary_search(&d).is_ok()
    }
}

#[derive(Debug, Clone)]
pub struct PlaneContext {
    pp: PrimePower,
    n: u32,
    field: FieldContext,
    tz: TraceZeroSet,
    in_tz: Vec<bool>,
}

impl PlaneContext {
    pub fn new(pp: PrimePower) -> Result<Self, PlaneError> {
        let field = FieldContext::new(pp)?;
        let n = pp.plane_order();
        let ds: Vec<u32> = (0..n)
            .filter(|&d| field.trace(field.exp(d as u64)).is_zero())
            .collect();
        let mut in_tz = vec![false; n as usize];
        for &d in &ds {
            in_tz[d as usize] = true;
        }
        let plane = PlaneContext {
            pp,
            n,
            field,
            tz: TraceZeroSet { ds },
            in_tz,
        };
        plane.verify()?;
        Ok(plane)
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn q(&self) -> u32 {
        self.pp.q()
    }

    /// Number of points (and of lines), `q^2 + q + 1`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn trace_zero(&self) -> &TraceZeroSet {
        &self.tz
    }

    pub fn points(&self) -> impl Iterator<Item = Point> {
        (0..self.n).map(Point)
    }

    /// `y` lies on `lambda_0(x)`.
    pub fn incident(&self, y: Point, x: Point) -> bool {
        self.in_tz[((y.0 + self.n - x.0) % self.n) as usize]
    }

    /// Points of `lambda_0(x)`, sorted.
    pub fn line(&self, x: Point) -> Vec<Point> {
        let mut l: Vec<Point> = self
            .tz
            .ds
            .iter()
            .map(|&d| Point((x.0 + d) % self.n))
            .collect();
        l.sort_unstable();
        l
    }

    pub fn singer_shift(&self, x: Point, k: i64) -> Point {
        Point((x.0 as i64 + k).rem_euclid(self.n as i64) as u32)
    }

    pub fn frobenius_collineation(&self, x: Point) -> Point {
        self.frobenius().apply(self.n, x)
    }

    pub fn mult_by_omega(&self, x: Point) -> Result<Point, PlaneError> {
        Ok(self.omega()?.apply(self.n, x))
    }

    /// `x -> x^q`.
    pub fn frobenius(&self) -> Collineation {
        Collineation {
            scale: self.q() % self.n,
            shift: 0,
        }
    }

    /// `x -> x^{q^2}`.
    pub fn frobenius_sq(&self) -> Collineation {
        Collineation {
            scale: ((self.q() as u64 * self.q() as u64) % self.n as u64) as u32,
            shift: 0,
        }
    }

    /// `x -> omega x` with `omega` of order 3 in the Singer group.
    pub fn omega(&self) -> Result<Collineation, PlaneError> {
        if !self.n.is_multiple_of(3) {
            return Err(PlaneError::NotApplicable(self.q()));
        }
        Ok(Collineation {
            scale: 1,
            shift: self.n / 3,
        })
    }

    /// Whether `c` is one of the maps `x -> q^i x + k` of this plane.
    pub fn is_collineation(&self, c: &Collineation) -> bool {
        let fr = self.frobenius().scale;
        c.shift < self.n && [1 % self.n, fr, self.frobenius_sq().scale].contains(&c.scale)
    }

    /// Checks the difference-set property and the projective plane axioms
    /// for the translates of the trace-zero set.
    pub fn verify(&self) -> Result<(), PlaneError> {
        let q = self.q();
        let n = self.n as usize;
        let bad = |m: String| Err(PlaneError::PlaneAxiomViolation(m));
        if self.tz.len() != q as usize + 1 {
            return bad(format!("{} trace-zero cosets, expected {}", self.tz.len(), q + 1));
        }
        let mut hits = vec![0u32; n];
        for &a in &self.tz.ds {
            for &b in &self.tz.ds {
                if a != b {
                    hits[((a + self.n - b) % self.n) as usize] += 1;
                }
            }
        }
        if let Some(r) = (1..n).find(|&r| hits[r] != 1) {
            return bad(format!("difference {r} occurs {} times", hits[r]));
        }
        let lines: Vec<Vec<Point>> = self.points().map(|x| self.line(x)).collect();
        check_projective_plane(q, &lines).map_err(PlaneError::PlaneAxiomViolation)?;
        for y in self.points() {
            let off = self.points().filter(|&x| !self.incident(y, x)).count();
            if off != (q * q) as usize {
                return bad(format!("point {y} lies off {off} lines, expected {}", q * q));
            }
        }
        Ok(())
    }
}

/// Exhaustive check that `lines` (one per point, each sorted) are the lines
/// of a projective plane of order `q`: `N` distinct lines of `q + 1` points,
/// any two points on exactly one line, any two lines meeting in exactly one
/// point, and a quadrangle.
pub fn check_projective_plane(q: u32, lines: &[Vec<Point>]) -> Result<(), String> {
    let n = (q * q + q + 1) as usize;
    if lines.len() != n {
        return Err(format!("{} lines, expected {n}", lines.len()));
    }
    for (i, l) in lines.iter().enumerate() {
        if l.len() != q as usize + 1 {
            return Err(format!("line {i} has {} points, expected {}", l.len(), q + 1));
        }
        if l.iter().any(|p| p.0 as usize >= n) || l.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("line {i} is not a sorted set of points"));
        }
    }
    let mut sorted: Vec<&Vec<Point>> = lines.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err("two points are assigned the same line".into());
    }

    let mut pair = vec![0u8; n * n];
    for l in lines {
        for (a, &x) in l.iter().enumerate() {
            for &y in &l[a + 1..] {
                let c = &mut pair[x.0 as usize * n + y.0 as usize];
                *c = c.saturating_add(1);
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let c = pair[x * n + y];
            if c != 1 {
                return Err(format!("points {x} and {y} lie on {c} common lines"));
            }
        }
    }

    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, l) in lines.iter().enumerate() {
        for p in l {
            through[p.0 as usize].push(i);
        }
    }
    pair.iter_mut().for_each(|c| *c = 0);
    for ls in &through {
        for (a, &i) in ls.iter().enumerate() {
            for &j in &ls[a + 1..] {
                let c = &mut pair[i.min(j) * n + i.max(j)];
                *c = c.saturating_add(1);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = pair[i * n + j];
            if c != 1 {
                return Err(format!("lines {i} and {j} meet in {c} points"));
            }
        }
    }

    // a quadrangle: two points off a line through neither
    let first = &lines[0];
    let (a, b) = (first[0], first[1]);
    let line_of = |x: Point, y: Point| {
        lines
            .iter()
            .find(|l| l.binary_search(&x).is_ok() && l.binary_search(&y).is_ok())
    };
    let off_first: Vec<Point> = (0..n as u32)
        .map(Point)
        .filter(|p| first.binary_search(p).is_err())
        .collect();
    let c = off_first[0];
    let lines_abc = [line_of(a, c), line_of(b, c)];
    let found = off_first[1..].iter().any(|d| {
        lines_abc
            .iter()
            .all(|l| l.is_some_and(|l| l.binary_search(d).is_err()))
    });
    if !found {
        return Err("no four points with no three collinear".into());
    }
    Ok(())
}
