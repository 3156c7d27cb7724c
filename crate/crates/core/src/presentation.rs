//! Triangle presentations: generation, twisting, validation, file I/O and the
//! search for sub-families in which every point occurs exactly three times.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plane::{check_projective_plane, Collineation, PlaneContext, Point};

/// Default node cap for the exact-cover fallback of [`find_m_subset`].
pub const DEFAULT_BACKTRACK_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inconsistent header: {0}")]
    InconsistentHeader(String),
    #[error("twisting map does not have order dividing 3")]
    PhiNotOrder3,
    #[error("twisting map does not preserve the lines of the plane")]
    PhiNotCollineation,
    #[error("twisting map does not fix the presentation: {0} is sent outside it")]
    PhiDoesNotFixT(Triple),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub x: Point,
    pub y: Point,
    pub z: Point,
}

impl Triple {
    pub fn new(x: u32, y: u32, z: u32) -> Self {
        Triple {
            x: Point(x),
            y: Point(y),
            z: Point(z),
        }
    }

    /// `(x, y, z) -> (y, z, x)`.
    pub fn rotate(self) -> Self {
        Triple {
            x: self.y,
            y: self.z,
            z: self.x,
        }
    }

    pub fn points(self) -> [Point; 3] {
        [self.x, self.y, self.z]
    }

    pub fn map(self, f: impl Fn(Point) -> Point) -> Self {
        Triple {
            x: f(self.x),
            y: f(self.y),
            z: f(self.z),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Point-line correspondence: `lines[x]` is the sorted point set of `lambda(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lambda {
    lines: Vec<Vec<Point>>,
}

impl Lambda {
    pub fn new(lines: Vec<Vec<Point>>) -> Self {
        let lines = lines
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l
            })
            .collect();
        Lambda { lines }
    }

    pub fn line(&self, x: Point) -> &[Point] {
        &self.lines[x.0 as usize]
    }

    pub fn lines(&self) -> &[Vec<Point>] {
        &self.lines
    }

    pub fn contains(&self, x: Point, y: Point) -> bool {
        self.line(x).binary_search(&y).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    T0,
    T0Dual,
    Twisted { phi: Collineation, base: Box<Origin> },
    UserFile,
}

impl Origin {
    /// True for presentations built by this crate (as opposed to read from a file).
    pub fn is_generated(&self) -> bool {
        !matches!(self, Origin::UserFile)
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::T0 => write!(f, "t0"),
            Origin::T0Dual => write!(f, "t0dual"),
            Origin::Twisted { phi, base } => {
                write!(f, "twisted(x->{}x+{}, {})", phi.scale, phi.shift, base)
            }
            Origin::UserFile => write!(f, "user-file"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrianglePresentation {
    q: u32,
    n: u32,
    lambda: Lambda,
    triples: BTreeSet<Triple>,
    origin: Origin,
}

/// Equality of content: plane size, correspondence and triples. The origin
/// tag is provenance only.
impl PartialEq for TrianglePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
            && self.n == other.n
            && self.lambda == other.lambda
            && self.triples == other.triples
    }
}

impl Eq for TrianglePresentation {}

impl TrianglePresentation {
    /// Assembles a presentation from raw parts. Nothing is checked beyond
    /// sizes and point ranges; run [`validate`] before relying on the axioms.
    pub fn from_parts(
        q: u32,
        lambda: Lambda,
        triples: impl IntoIterator<Item = Triple>,
        origin: Origin,
    ) -> Result<Self, PresentationError> {
        let n = q * q + q + 1;
        if lambda.lines.len() != n as usize {
            return Err(PresentationError::InconsistentHeader(format!(
                "{} lines for {} points",
                lambda.lines.len(),
                n
            )));
        }
        if let Some((x, l)) = lambda
            .lines
            .iter()
            .enumerate()
            .find(|(_, l)| l.len() != q as usize + 1)
        {
            return Err(PresentationError::InconsistentHeader(format!(
                "lambda({x}) has {} points, expected {}",
                l.len(),
                q + 1
            )));
        }
        if lambda.lines.iter().flatten().any(|p| p.0 >= n) {
            return Err(PresentationError::InconsistentHeader(
                "lambda mentions a point outside 0..n".into(),
            ));
        }
        let triples: BTreeSet<Triple> = triples.into_iter().collect();
        if let Some(t) = triples.iter().find(|t| t.points().iter().any(|p| p.0 >= n)) {
            return Err(PresentationError::InconsistentHeader(format!(
                "triple {t} mentions a point outside 0..{n}"
            )));
        }
        Ok(TrianglePresentation {
            q,
            n,
            lambda,
            triples,
            origin,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lambda(&self) -> &Lambda {
        &self.lambda
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.contains(t)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> {
        (0..self.n).map(Point)
    }

    /// Returns a copy with a different triple set, for mutation experiments.
    pub fn with_triples(&self, triples: impl IntoIterator<Item = Triple>) -> Self {
        TrianglePresentation {
            triples: triples.into_iter().collect(),
            origin: Origin::UserFile,
            ..self.clone()
        }
    }

    /// Relabels every point by `x -> x + k`.
    pub fn singer_relabel(&self, k: u32) -> Self {
        let n = self.n;
        let s = |p: Point| Point((p.0 + k) % n);
        let mut lines = vec![Vec::new(); n as usize];
        for x in self.points() {
            lines[s(x).0 as usize] = self.lambda.line(x).iter().map(|&y| s(y)).collect();
        }
        TrianglePresentation {
            q: self.q,
            n,
            lambda: Lambda::new(lines),
            triples: self.triples.iter().map(|t| t.map(s)).collect(),
            origin: self.origin.clone(),
        }
    }
}

fn tits_type(plane: &PlaneContext, mult: u64, origin: Origin) -> TrianglePresentation {
    let n = plane.n();
    let mut triples = BTreeSet::new();
    for i in 0..n as u64 {
        for &d in plane.trace_zero().as_slice() {
            let d = d as u64;
            triples.insert(Triple::new(
                i as u32,
                ((i + d) % n as u64) as u32,
                ((i + mult * d) % n as u64) as u32,
            ));
        }
    }
    let lambda = Lambda::new(plane.points().map(|x| plane.line(x)).collect());
    TrianglePresentation {
        q: plane.q(),
        n,
        lambda,
        triples,
        origin,
    }
}

/// `{(x, x xi, x xi^{q+1}) : Tr(xi) = 0}` in Singer logarithms.
pub fn gen_t0(plane: &PlaneContext) -> TrianglePresentation {
    tits_type(plane, plane.q() as u64 + 1, Origin::T0)
}

/// `{(x, x xi, x xi^{q^2+1}) : Tr(xi) = 0}` in Singer logarithms.
pub fn gen_t0_dual(plane: &PlaneContext) -> TrianglePresentation {
    let q = plane.q() as u64;
    tits_type(plane, q * q + 1, Origin::T0Dual)
}

/// `T^phi = {(x, phi(y), phi^2(z))}`, compatible with `phi o lambda`.
pub fn twist(
    t: &TrianglePresentation,
    phi: Collineation,
) -> Result<TrianglePresentation, PresentationError> {
    let n = t.n;
    let phi2 = phi.compose(n, &phi);
    if phi.compose(n, &phi2) != Collineation::identity() {
        return Err(PresentationError::PhiNotOrder3);
    }
    let image_lines: BTreeSet<Vec<Point>> = t
        .lambda
        .lines
        .iter()
        .map(|l| {
            let mut m: Vec<Point> = l.iter().map(|&y| phi.apply(n, y)).collect();
            m.sort_unstable();
            m
        })
        .collect();
    let lines: BTreeSet<Vec<Point>> = t.lambda.lines.iter().cloned().collect();
    if image_lines != lines {
        return Err(PresentationError::PhiNotCollineation);
    }
    if let Some(bad) = t
        .triples
        .iter()
        .find(|tr| !t.triples.contains(&tr.map(|p| phi.apply(n, p))))
    {
        return Err(PresentationError::PhiDoesNotFixT(*bad));
    }
    let lambda = Lambda::new(
        t.lambda
            .lines
            .iter()
            .map(|l| l.iter().map(|&y| phi.apply(n, y)).collect())
            .collect(),
    );
    let triples = t
        .triples
        .iter()
        .map(|tr| Triple {
            x: tr.x,
            y: phi.apply(n, tr.y),
            z: phi2.apply(n, tr.z),
        })
        .collect();
    Ok(TrianglePresentation {
        q: t.q,
        n,
        lambda,
        triples,
        origin: Origin::Twisted {
            phi,
            base: Box::new(t.origin.clone()),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Pair(Point, Point),
    Triple(Triple),
    Message(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair(x, y) => write!(f, "pair ({x}, {y})"),
            Witness::Triple(t) => write!(f, "triple {t}"),
            Witness::Message(m) => f.write_str(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck {
            passed: true,
            witness: None,
        }
    }

    fn fail(w: Witness) -> Self {
        AxiomCheck {
            passed: false,
            witness: Some(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `lambda` is a bijection onto the lines of a projective plane of order q.
    pub lambda: AxiomCheck,
    /// `(x, y, z) in T for some z` iff `y in lambda(x)`.
    pub axiom_i: AxiomCheck,
    /// Closed under `(x, y, z) -> (y, z, x)`.
    pub axiom_ii: AxiomCheck,
    /// At most one `z` per `(x, y)`.
    pub axiom_iii: AxiomCheck,
    pub size: usize,
    pub expected_size: usize,
}

impl ValidationReport {
    pub fn size_ok(&self) -> bool {
        self.size == self.expected_size
    }

    pub fn is_valid(&self) -> bool {
        self.lambda.passed
            && self.axiom_i.passed
            && self.axiom_ii.passed
            && self.axiom_iii.passed
            && self.size_ok()
    }

    /// First failure, for error messages.
    pub fn first_failure(&self) -> Option<String> {
        let named = [
            ("lambda", &self.lambda),
            ("axiom (i)", &self.axiom_i),
            ("axiom (ii)", &self.axiom_ii),
            ("axiom (iii)", &self.axiom_iii),
        ];
        for (name, c) in named {
            if !c.passed {
                let w = c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
                return Some(format!("{name} fails: {w}"));
            }
        }
        (!self.size_ok()).then(|| format!("{} triples, expected {}", self.size, self.expected_size))
    }
}

pub fn validate(t: &TrianglePresentation) -> ValidationReport {
    let lambda = match check_projective_plane(t.q, &t.lambda.lines) {
        Ok(()) => AxiomCheck::pass(),
        Err(m) => AxiomCheck::fail(Witness::Message(m)),
    };

    let mut completions: BTreeMap<(Point, Point), Vec<Point>> = BTreeMap::new();
    for tr in &t.triples {
        completions.entry((tr.x, tr.y)).or_default().push(tr.z);
    }

    let mut axiom_i = AxiomCheck::pass();
    if let Some(tr) = t.triples.iter().find(|tr| !t.lambda.contains(tr.x, tr.y)) {
        axiom_i = AxiomCheck::fail(Witness::Triple(*tr));
    } else {
        'outer: for x in t.points() {
            for &y in t.lambda.line(x) {
                if !completions.contains_key(&(x, y)) {
                    axiom_i = AxiomCheck::fail(Witness::Pair(x, y));
                    break 'outer;
                }
            }
        }
    }

    let axiom_ii = match t.triples.iter().find(|tr| !t.triples.contains(&tr.rotate())) {
        Some(tr) => AxiomCheck::fail(Witness::Triple(*tr)),
        None => AxiomCheck::pass(),
    };

    let axiom_iii = match completions.iter().find(|(_, zs)| zs.len() > 1) {
        Some((&(x, y), _)) => AxiomCheck::fail(Witness::Pair(x, y)),
        None => AxiomCheck::pass(),
    };

    ValidationReport {
        lambda,
        axiom_i,
        axiom_ii,
        axiom_iii,
        size: t.triples.len(),
        expected_size: ((t.q + 1) * t.n) as usize,
    }
}

/// Invariance under `x -> x + 1`.
pub fn is_s_invariant(t: &TrianglePresentation) -> bool {
    let n = t.n;
    t.triples
        .iter()
        .all(|tr| t.triples.contains(&tr.map(|p| Point((p.0 + 1) % n))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MStrategy {
    /// Singer orbit of one triple.
    SingerOrbit,
    /// Singer orbit in the untwisted presentation, pushed through the twist.
    TwistedOrbit,
    /// Exact-cover search.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MSubsetSearch {
    Found { m: Vec<Triple>, strategy: MStrategy },
    /// The search space was exhausted: no such subset exists.
    Absent,
    /// The node budget ran out before the search finished.
    BudgetExhausted,
}

impl MSubsetSearch {
    pub fn subset(&self) -> Option<&[Triple]> {
        match self {
            MSubsetSearch::Found { m, .. } => Some(m),
            _ => None,
        }
    }
}

/// Whether every point occurs exactly three times across the slots of `m`.
pub fn covers_thrice(n: u32, m: &[Triple]) -> bool {
    let mut count = vec![0u32; n as usize];
    for t in m {
        for p in t.points() {
            count[p.0 as usize] += 1;
        }
    }
    count.iter().all(|&c| c == 3)
}

/// Whether each coordinate projection of `m` onto the points is a bijection.
pub fn projections_bijective(n: u32, m: &[Triple]) -> bool {
    if m.len() != n as usize {
        return false;
    }
    let proj = |f: fn(&Triple) -> Point| {
        let s: HashSet<Point> = m.iter().map(f).collect();
        s.len() == n as usize
    };
    proj(|t| t.x) && proj(|t| t.y) && proj(|t| t.z)
}

fn singer_orbit(n: u32, t: Triple) -> Vec<Triple> {
    (0..n).map(|k| t.map(|p| Point((p.0 + k) % n))).collect()
}

/// Finds `M` inside `T` in which every point occurs exactly three times.
pub fn find_m_subset(t: &TrianglePresentation, budget: u64) -> MSubsetSearch {
    let n = t.n;
    if let Some(&first) = t.triples.iter().next() {
        if is_s_invariant(t) {
            return MSubsetSearch::Found {
                m: singer_orbit(n, first),
                strategy: MStrategy::SingerOrbit,
            };
        }
    }
    if let Origin::Twisted { phi, .. } = &t.origin {
        let phi2 = phi.compose(n, phi);
        // phi^3 = id, so the inverse twist uses (phi^2, phi)
        let base = t.with_triples(t.triples.iter().map(|tr| Triple {
            x: tr.x,
            y: phi2.apply(n, tr.y),
            z: phi.apply(n, tr.z),
        }));
        if let Some(&first) = base.triples.iter().next() {
            if is_s_invariant(&base) {
                let m: Vec<Triple> = singer_orbit(n, first)
                    .into_iter()
                    .map(|tr| Triple {
                        x: tr.x,
                        y: phi.apply(n, tr.y),
                        z: phi2.apply(n, tr.z),
                    })
                    .collect();
                if m.iter().all(|tr| t.contains(tr)) {
                    return MSubsetSearch::Found {
                        m,
                        strategy: MStrategy::TwistedOrbit,
                    };
                }
            }
        }
    }
    exact_cover(t, budget)
}

struct Cover {
    triples: Vec<Triple>,
    by_point: Vec<Vec<usize>>,
    need: Vec<u32>,
    state: Vec<u8>, // 0 free, 1 chosen, 2 excluded
    nodes: u64,
    budget: u64,
}

impl Cover {
    fn fits(&self, i: usize) -> bool {
        let mut demand = [(0u32, 0u32); 3];
        let mut k = 0;
        for p in self.triples[i].points() {
            match demand[..k].iter_mut().find(|d| d.0 == p.0) {
                Some(d) => d.1 += 1,
                None => {
                    demand[k] = (p.0, 1);
                    k += 1;
                }
            }
        }
        demand[..k].iter().all(|&(p, c)| self.need[p as usize] >= c)
    }

    fn apply(&mut self, i: usize, sign: i32) {
        for p in self.triples[i].points() {
            let v = &mut self.need[p.0 as usize];
            *v = (*v as i32 - sign) as u32;
        }
    }

    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn search(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let mut pick: Option<(usize, usize)> = None;
        for p in 0..self.need.len() {
            if self.need[p] == 0 {
                continue;
            }
            let avail: Vec<usize> = self.by_point[p]
                .iter()
                .copied()
                .filter(|&i| self.state[i] == 0 && self.fits(i))
                .collect();
            let supply: u32 = avail
                .iter()
                .map(|&i| self.triples[i].points().iter().filter(|q| q.0 as usize == p).count() as u32)
                .sum();
            if supply < self.need[p] {
                return Some(false);
            }
            if pick.is_none_or(|(_, best)| avail.len() < best) {
                pick = Some((avail[0], avail.len()));
            }
        }
        let Some((i, _)) = pick else {
            return Some(true);
        };
        self.state[i] = 1;
        self.apply(i, 1);
        let r = self.search();
        if r != Some(false) {
            return r;
        }
        self.apply(i, -1);
        self.state[i] = 2;
        let r = self.search();
        if r != Some(false) {
            return r;
        }
        self.state[i] = 0;
        Some(false)
    }
}

fn exact_cover(t: &TrianglePresentation, budget: u64) -> MSubsetSearch {
    let triples: Vec<Triple> = t.triples.iter().copied().collect();
    let mut by_point = vec![Vec::new(); t.n as usize];
    for (i, tr) in triples.iter().enumerate() {
        let mut seen = [u32::MAX; 3];
        for (k, p) in tr.points().iter().enumerate() {
            if !seen.contains(&p.0) {
                by_point[p.0 as usize].push(i);
            }
            seen[k] = p.0;
        }
    }
    let mut c = Cover {
        state: vec![0; triples.len()],
        triples,
        by_point,
        need: vec![3; t.n as usize],
        nodes: 0,
        budget,
    };
    match c.search() {
        Some(true) => MSubsetSearch::Found {
            m: c
                .triples
                .iter()
                .zip(&c.state)
                .filter(|(_, &s)| s == 1)
                .map(|(t, _)| *t)
                .collect(),
            strategy: MStrategy::Search,
        },
        Some(false) => MSubsetSearch::Absent,
        None => MSubsetSearch::BudgetExhausted,
    }
}

impl fmt::Display for TrianglePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# origin: {}", self.origin)?;
        writeln!(f, "a2tp q={} n={}", self.q, self.n)?;
        for x in self.points() {
            write!(f, "lambda {x}:")?;
            for y in self.lambda.line(x) {
                write!(f, " {y}")?;
            }
            writeln!(f)?;
        }
        for t in &self.triples {
            writeln!(f, "t {} {} {}", t.x, t.y, t.z)?;
        }
        Ok(())
    }
}

impl FromStr for TrianglePresentation {
    type Err = PresentationError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parse_err = |line: usize, msg: String| PresentationError::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing header".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("a2tp") {
            return Err(parse_err(hline, "header must start with `a2tp`".into()));
        }
        let mut q = None;
        let mut n = None;
        for f in fields {
            let (key, val) = f
                .split_once('=')
                .ok_or_else(|| parse_err(hline, format!("bad header field `{f}`")))?;
            let val: u32 = val
                .parse()
                .map_err(|_| parse_err(hline, format!("bad number in `{f}`")))?;
            match key {
                "q" => q = Some(val),
                "n" => n = Some(val),
                _ => return Err(parse_err(hline, format!("unknown header field `{key}`"))),
            }
        }
        let q = q.ok_or_else(|| parse_err(hline, "header lacks q=".into()))?;
        let n = n.ok_or_else(|| parse_err(hline, "header lacks n=".into()))?;
        if !(2..=1 << 15).contains(&q) {
            return Err(PresentationError::InconsistentHeader(format!("q = {q} out of range")));
        }
        if n != q * q + q + 1 {
            return Err(PresentationError::InconsistentHeader(format!(
                "n = {n} but q^2 + q + 1 = {}",
                q * q + q + 1
            )));
        }

        let point = |line: usize, s: &str| -> Result<Point, PresentationError> {
            let v: u32 = s
                .parse()
                .map_err(|_| parse_err(line, format!("bad point `{s}`")))?;
            if v >= n {
                return Err(parse_err(line, format!("point {v} out of range 0..{n}")));
            }
            Ok(Point(v))
        };

        let mut lam = Vec::with_capacity(n as usize);
        let mut triples = Vec::new();
        for (ln, l) in lines {
            if let Some(rest) = l.strip_prefix("lambda") {
                if !triples.is_empty() {
                    return Err(parse_err(ln, "lambda line after triples".into()));
                }
                let (x, ys) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err(ln, "expected `lambda <x>: ...`".into()))?;
                let x = point(ln, x.trim())?;
                if x.0 as usize != lam.len() {
                    return Err(parse_err(ln, format!("lambda lines must be in order; got {x}")));
                }
                let ys = ys
                    .split_whitespace()
                    .map(|s| point(ln, s))
                    .collect::<Result<Vec<_>, _>>()?;
                if ys.len() != q as usize + 1 {
                    return Err(PresentationError::InconsistentHeader(format!(
                        "line {ln}: lambda({x}) has {} points, expected {}",
                        ys.len(),
                        q + 1
                    )));
                }
                lam.push(ys);
            } else if let Some(rest) = l.strip_prefix("t ") {
                let ps = rest
                    .split_whitespace()
                    .map(|s| point(ln, s))
                    .collect::<Result<Vec<_>, _>>()?;
                let [x, y, z] = ps[..] else {
                    return Err(parse_err(ln, "a triple needs three points".into()));
                };
                triples.push(Triple { x, y, z });
            } else {
                return Err(parse_err(ln, format!("unrecognized line `{l}`")));
            }
        }
        if lam.len() != n as usize {
            return Err(PresentationError::InconsistentHeader(format!(
                "{} lambda lines, expected {n}",
                lam.len()
            )));
        }
        TrianglePresentation::from_parts(q, Lambda::new(lam), triples, Origin::UserFile)
    }
}

pub fn read_presentation(path: impl AsRef<Path>) -> Result<TrianglePresentation, PresentationError> {
    fs::read_to_string(path)?.parse()
}

pub fn write_presentation(
    t: &TrianglePresentation,
    path: impl AsRef<Path>,
) -> Result<(), PresentationError> {
    fs::write(path, t.to_string())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::PrimePower;

    fn plane(q: u64) -> PlaneContext {
        PlaneContext::new(PrimePower::new(q).unwrap()).unwrap()
    }

    #[test]
    fn t0_sizes() {
        let t = gen_t0(&plane(2));
        assert_eq!(t.triples().len(), 21);
        let t3 = gen_t0(&plane(3));
        assert_eq!(t3.triples().len(), 52);
        let incident_pairs = t3
            .points()
            .map(|x| t3.lambda().line(x).len())
            .sum::<usize>();
        assert_eq!(incident_pairs, 52);
        assert_eq!(gen_t0_dual(&plane(3)).triples().len(), 52);
    }

    #[test]
    fn t0_q4_contains_order_three_triple() {
        assert!(gen_t0(&plane(4)).contains(&Triple::new(0, 7, 14)));
    }

    #[test]
    fn char3_has_degenerate_triples() {
        let t = gen_t0(&plane(3));
        assert!(t.triples().iter().any(|tr| tr.x == tr.y && tr.y == tr.z));
        assert!(validate(&t).is_valid());
    }

    #[test]
    fn dual_is_inverse_reversal() {
        for q in [2, 3, 4, 5] {
            let pl = plane(q);
            let (t0, t1) = (gen_t0(&pl), gen_t0_dual(&pl));
            let n = pl.n();
            let neg = |p: Point| Point((n - p.0) % n);
            for tr in t0.triples() {
                let r = Triple {
                    x: neg(tr.z),
                    y: neg(tr.y),
                    z: neg(tr.x),
                };
                assert!(t1.contains(&r));
            }
            assert!(validate(&t1).is_valid());
        }
        let pl = plane(2);
        assert_ne!(gen_t0(&pl).triples(), gen_t0_dual(&pl).triples());
    }

    #[test]
    fn generated_presentations_validate() {
        for q in [2, 3, 4, 5, 7, 8] {
            let pl = plane(q);
            for t in [gen_t0(&pl), gen_t0_dual(&pl)] {
                let r = validate(&t);
                assert!(r.is_valid(), "q={q}: {:?}", r.first_failure());
                assert!(is_s_invariant(&t));
                for tr in t.triples() {
                    assert!(t.contains(&tr.rotate()));
                }
            }
        }
    }

    #[test]
    fn deletion_and_conflict_are_caught() {
        let t = gen_t0(&plane(2));
        let victim = *t.triples().iter().nth(5).unwrap();
        let r = validate(&t.with_triples(t.triples().iter().copied().filter(|&x| x != victim)));
        assert!(!r.axiom_i.passed);
        assert_eq!(r.axiom_i.witness, Some(Witness::Pair(victim.x, victim.y)));
        assert!(!r.axiom_ii.passed);
        assert!(!r.size_ok());

        let z2 = Point((victim.z.0 + 1) % 7);
        let extra = Triple { z: z2, ..victim };
        let r = validate(&t.with_triples(t.triples().iter().copied().chain([extra])));
        assert!(!r.axiom_iii.passed);
        assert_eq!(r.axiom_iii.witness, Some(Witness::Pair(victim.x, victim.y)));
    }

    #[test]
    fn twist_by_identity_is_noop() {
        let t = gen_t0(&plane(3));
        assert_eq!(twist(&t, Collineation::identity()).unwrap(), t);
    }

    #[test]
    fn frobenius_twist_q2() {
        let pl = plane(2);
        let t = gen_t0(&pl);
        let tw = twist(&t, pl.frobenius()).unwrap();
        assert!(validate(&tw).is_valid());
        assert!(!is_s_invariant(&tw));
        for x in pl.points() {
            let mut expect: Vec<Point> =
                pl.line(x).iter().map(|&y| pl.frobenius_collineation(y)).collect();
            expect.sort();
            assert_eq!(tw.lambda().line(x), expect.as_slice());
        }
        match find_m_subset(&tw, 1000) {
            MSubsetSearch::Found { m, strategy } => {
                assert_eq!(strategy, MStrategy::TwistedOrbit);
                assert!(covers_thrice(7, &m));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triple_twist_returns_original() {
        let pl = plane(4);
        let t = gen_t0(&pl);
        let phi = pl.omega().unwrap();
        let once = twist(&t, phi).unwrap();
        assert!(validate(&once).is_valid());
        // T^phi is fixed by phi again, so the twist can be iterated
        let thrice = twist(&twist(&once, phi).unwrap(), phi).unwrap();
        assert_eq!(thrice, t);
    }

    #[test]
    fn twist_rejections() {
        let pl = plane(2);
        let t = gen_t0(&pl);
        let order7 = Collineation { scale: 1, shift: 1 };
        assert!(matches!(twist(&t, order7), Err(PresentationError::PhiNotOrder3)));
        let not_col = Collineation { scale: 3, shift: 0 };
        assert!(matches!(twist(&t, not_col), Err(PresentationError::PhiNotOrder3) | Err(PresentationError::PhiNotCollineation)));
        let broken = t.with_triples(t.triples().iter().copied().skip(1));
        assert!(matches!(
            twist(&broken, pl.frobenius()),
            Err(PresentationError::PhiDoesNotFixT(_))
        ));
    }

    #[test]
    fn m_subset_orbit() {
        let t = gen_t0(&plane(2));
        let r = find_m_subset(&t, 10);
        let m = r.subset().unwrap();
        assert_eq!(m.len(), 7);
        assert!(covers_thrice(7, m));
        let t3 = gen_t0(&plane(3));
        let m3 = find_m_subset(&t3, 10);
        assert!(projections_bijective(13, m3.subset().unwrap()));
    }

    #[test]
    fn m_subset_search_fallback() {
        let pl = plane(2);
        let tw = twist(&gen_t0(&pl), pl.frobenius()).unwrap();
        let user = tw.with_triples(tw.triples().iter().copied());
        match find_m_subset(&user, 1_000_000) {
            MSubsetSearch::Found { m, strategy } => {
                assert_eq!(strategy, MStrategy::Search);
                assert!(covers_thrice(7, &m));
                assert!(m.iter().all(|x| user.contains(x)));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(find_m_subset(&user, 1), MSubsetSearch::BudgetExhausted);
        let empty = user.with_triples([]);
        assert_eq!(find_m_subset(&empty, 100), MSubsetSearch::Absent);
    }

    #[test]
    fn file_round_trip() {
        let t = gen_t0(&plane(2));
        let text = t.to_string();
        assert!(text.contains("a2tp q=2 n=7"));
        let back: TrianglePresentation = text.parse().unwrap();
        assert_eq!(back, t);
        assert_eq!(back.origin(), &Origin::UserFile);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.a2tp");
        write_presentation(&t, &path).unwrap();
        assert_eq!(read_presentation(&path).unwrap(), t);
    }

    #[test]
    fn file_errors() {
        let t = gen_t0(&plane(2));
        let text = t.to_string();
        let short = text.replacen("lambda 3: ", "lambda 3: 9999 ", 1);
        assert!(matches!(short.parse::<TrianglePresentation>(), Err(PresentationError::Parse { .. })));

        let first_lambda = text.lines().find(|l| l.starts_with("lambda 0:")).unwrap();
        let cut = first_lambda.rsplit_once(' ').unwrap().0;
        let bad = text.replace(first_lambda, cut);
        assert!(matches!(
            bad.parse::<TrianglePresentation>(),
            Err(PresentationError::InconsistentHeader(_))
        ));

        let wrong_n = text.replace("n=7", "n=8");
        assert!(matches!(
            wrong_n.parse::<TrianglePresentation>(),
            Err(PresentationError::InconsistentHeader(_))
        ));

        let garbage = text.replacen("t ", "t x ", 1);
        match garbage.parse::<TrianglePresentation>() {
            Err(PresentationError::Parse { line, .. }) => assert!(line > 9),
            other => panic!("{other:?}"),
        }

        let first_t = text.lines().find(|l| l.starts_with("t ")).unwrap();
        let dup = format!("{text}{first_t}\n# trailing comment\n");
        assert_eq!(dup.parse::<TrianglePresentation>().unwrap(), t);
    }
}
