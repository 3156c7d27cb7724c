//! The abelian group `A_T` of a triangle presentation.
//!
//! `A_T` is generated by the points and one extra symbol `eps` (always the
//! last column) subject to
//!
//! * `sum_{y not in lambda(x)} y = x` for every point `x`,
//! * `x + y + z = eps` for every triple,
//! * `sum_x x = eps`.
//!
//! The first family may be replaced by `x + sum_{y in lambda(x)} y = eps`;
//! both presentations are built and compared.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf::PrimePower;
use crate::presentation::{
    covers_thrice, find_m_subset, validate, MSubsetSearch, TrianglePresentation,
    DEFAULT_BACKTRACK_BUDGET,
};
use crate::zlinalg::{
    invariant_factors_of_cyclic, FpAbelianGroup, GroupElement, IntMatrix, Order, SnfResult,
};

#[derive(Debug, Error)]
pub enum CoinvError {
    #[error("presentation is not valid: {0}")]
    InvalidPresentation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationScheme {
    /// Complement sums, triple relations, total sum.
    Acb,
    /// Triple relations, total sum, `x + x_hat = eps`.
    Bcd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    Acb,
    Bcd,
    Both,
}

impl SchemeChoice {
    fn schemes(self) -> &'static [RelationScheme] {
        match self {
            SchemeChoice::Acb => &[RelationScheme::Acb],
            SchemeChoice::Bcd => &[RelationScheme::Bcd],
            SchemeChoice::Both => &[RelationScheme::Acb, RelationScheme::Bcd],
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub scheme: SchemeChoice,
    pub backtrack_budget: u64,
    /// Largest `q` for which the transform-based order is computed alongside
    /// the quotient ratio.
    pub cross_check_max_q: u32,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            scheme: SchemeChoice::Both,
            backtrack_budget: DEFAULT_BACKTRACK_BUDGET,
            cross_check_max_q: 8,
        }
    }
}

/// Relation matrix of `A_T`: columns `0..N` are the points, column `N` is `eps`.
pub fn relation_matrix(t: &TrianglePresentation, scheme: RelationScheme) -> IntMatrix {
    let n = t.n() as usize;
    let eps = n;
    let mut m = IntMatrix::new(n + 1);
    if scheme == RelationScheme::Acb {
        for x in t.points() {
            let line = t.lambda().line(x);
            let off = t
                .points()
                .filter(|y| line.binary_search(y).is_err())
                .map(|y| (y.0 as usize, 1i64));
            m.push_row(off.chain([(x.0 as usize, -1)]));
        }
    }
    for tr in t.triples() {
        m.push_row(
            tr.points()
                .into_iter()
                .map(|p| (p.0 as usize, 1i64))
                .chain([(eps, -1)]),
        );
    }
    m.push_row((0..n).map(|j| (j, 1i64)).chain([(eps, -1)]));
    if scheme == RelationScheme::Bcd {
        for x in t.points() {
            let line = t.lambda().line(x).iter().map(|y| (y.0 as usize, 1i64));
            m.push_row(line.chain([(x.0 as usize, 1), (eps, -1)]));
        }
    }
    m
}

/// Abelianization of `<P | xyz = 1>`: `Z^N` modulo `x + y + z` per triple.
pub fn gamma_ab_matrix(t: &TrianglePresentation) -> IntMatrix {
    let mut m = IntMatrix::new(t.n() as usize);
    for tr in t.triples() {
        m.push_row(tr.points().into_iter().map(|p| (p.0 as usize, 1i64)));
    }
    m
}

/// `(q - 1) / gcd(q - 1, 3)`.
pub fn epsilon_lower_bound(q: u32) -> u64 {
    let q1 = q as u64 - 1;
    q1 / q1.gcd(&3)
}

/// Checks that `f(x) = q + 1`, `f(eps) = 3(q + 1)` kills every row of the
/// complement-sum presentation modulo `q^2 - 1`.
pub fn lower_bound_homomorphism_holds(t: &TrianglePresentation) -> bool {
    let q = t.q() as i64;
    let modulus = BigInt::from(q * q - 1);
    let n = t.n() as usize;
    let f = |j: usize| BigInt::from(if j == n { 3 * (q + 1) } else { q + 1 });
    relation_matrix(t, RelationScheme::Acb).rows().iter().all(|row| {
        let s: BigInt = row.iter().map(|(j, c)| c * f(*j)).sum();
        s.mod_floor(&modulus).is_zero()
    })
}

/// Order of `eps`, serialized as a JSON number (or a decimal string if it
/// does not fit 64 bits), and as `"infinite"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonOrder(pub Order);

impl Serialize for EpsilonOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Order::Finite(k) => match k.to_u64() {
                Some(v) => s.serialize_u64(v),
                None => s.serialize_str(&k.to_string()),
            },
            Order::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for EpsilonOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(EpsilonOrder(Order::Finite(v.into()))),
            Raw::Str(s) if s == "infinite" => Ok(EpsilonOrder(Order::Infinite)),
            Raw::Str(s) => s
                .parse::<BigInt>()
                .map(|k| EpsilonOrder(Order::Finite(k)))
                .map_err(serde::de::Error::custom),
        }
    }
}

mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    /// `ord(eps)` divides `q^2 - 1`.
    pub lemma_q2: bool,
    /// `ord(eps) >= (q-1)/gcd(q-1,3)` and the homomorphism `f` kills all relations.
    pub lower_bound: bool,
    pub m_subset_found: bool,
    /// `ord(eps)` divides `q - 1`; only decided when an M-subset was found.
    pub q_minus_1_kills_epsilon: Option<bool>,
    /// Both relation schemes give the same groups and order; absent when
    /// only one scheme ran.
    pub scheme_agreement: Option<bool>,
    /// `|A_T / <eps>|` divides `|Gamma_ab|`.
    pub gamma_ab_divisibility: bool,
    /// Quotient-ratio and transform orders agree; absent when not cross-checked.
    pub order_methods_agree: Option<bool>,
}

impl Checks {
    /// Every theorem-backed check that was decided passed.
    pub fn all_passed(&self) -> bool {
        self.lemma_q2
            && self.lower_bound
            && self.q_minus_1_kills_epsilon != Some(false)
            && self.scheme_agreement != Some(false)
            && self.gamma_ab_divisibility
            && self.order_methods_agree != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub q: u32,
    pub n: u32,
    pub origin: String,
    /// Invariant factors of `A_T` other than 1.
    #[serde(with = "decimal_vec")]
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
    /// Invariant factors of `A_T / <eps>` other than 1.
    #[serde(with = "decimal_vec")]
    pub quotient_invariant_factors: Vec<BigInt>,
    pub quotient_free_rank: usize,
    pub epsilon_order: EpsilonOrder,
    pub checks: Checks,
    pub m_subset_size: Option<usize>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    /// `(q - 1) / gcd(q - 1, 3)` equals the order of `eps`.
    pub fn conjecture_holds(&self) -> bool {
        self.epsilon_order.0 == Order::Finite(epsilon_lower_bound(self.q).into())
    }

    /// `Z3 + Z3`-style rendering; `0` for the trivial group.
    pub fn group_string(&self) -> String {
        format_group(&self.invariant_factors, self.free_rank)
    }
}

pub fn format_group(factors: &[BigInt], free_rank: usize) -> String {
    let mut parts: Vec<String> = factors.iter().map(|d| format!("Z{d}")).collect();
    parts.extend((0..free_rank).map(|_| "Z".to_string()));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q={} n={} origin={}", self.q, self.n, self.origin)?;
        writeln!(f, "A_T ≅ {}, ord(eps)={}", self.group_string(), self.epsilon_order.0)?;
        writeln!(
            f,
            "A_T/<eps> ≅ {}",
            format_group(&self.quotient_invariant_factors, self.quotient_free_rank)
        )?;
        let c = &self.checks;
        let opt = |b: Option<bool>| match b {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "n/a",
        };
        let req = |b: bool| if b { "pass" } else { "FAIL" };
        writeln!(f, "  lemma_q2                 {}", req(c.lemma_q2))?;
        writeln!(f, "  lower_bound              {}", req(c.lower_bound))?;
        writeln!(
            f,
            "  m_subset_found           {}",
            match self.m_subset_size {
                Some(k) => format!("yes (|M|={k})"),
                None => "no".into(),
            }
        )?;
        writeln!(f, "  q_minus_1_kills_epsilon  {}", opt(c.q_minus_1_kills_epsilon))?;
        writeln!(f, "  scheme_agreement         {}", opt(c.scheme_agreement))?;
        writeln!(f, "  gamma_ab_divisibility    {}", req(c.gamma_ab_divisibility))?;
        writeln!(f, "  order_methods_agree      {}", opt(c.order_methods_agree))?;
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        Ok(())
    }
}

struct SchemeResult {
    invariants: SnfResult,
    quotient: SnfResult,
    order: Order,
    methods_agree: Option<bool>,
}

fn analyze_scheme(t: &TrianglePresentation, scheme: RelationScheme, cfg: &AnalysisConfig) -> SchemeResult {
    let group = FpAbelianGroup::new(relation_matrix(t, scheme));
    let n = t.n() as usize;
    let eps = GroupElement::unit(n + 1, n);
    let invariants = group.invariants().clone();
    let quotient = group.quotient_invariants(&eps);
    let by_quotient = match (invariants.order(), quotient.order()) {
        (Some(a), Some(b)) => Some(Order::Finite(a / b)),
        _ => None,
    };
    let (order, methods_agree) = match by_quotient {
        Some(o) if t.q() <= cfg.cross_check_max_q => {
            let other = group.order_by_transform(&eps);
            let agree = other == o;
            (o, Some(agree))
        }
        Some(o) => (o, None),
        None => (group.order_by_transform(&eps), None),
    };
    SchemeResult {
        invariants,
        quotient,
        order,
        methods_agree,
    }
}

/// `ord(eps)` divides `q^2 - 1`.
pub fn check_lemma_q2(report: &AnalysisReport) -> bool {
    let q = report.q as u64;
    match &report.epsilon_order.0 {
        Order::Finite(k) => BigInt::from(q * q - 1).is_multiple_of(k),
        Order::Infinite => false,
    }
}

/// Lower bound on `ord(eps)` plus the row-annihilation check behind it.
pub fn check_lower_bound(t: &TrianglePresentation, order: &Order) -> bool {
    let bound_ok = match order {
        Order::Finite(k) => *k >= BigInt::from(epsilon_lower_bound(t.q())),
        Order::Infinite => true,
    };
    bound_ok && lower_bound_homomorphism_holds(t)
}

/// Outcome of the M-subset check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MSubsetCheck {
    pub found: bool,
    pub size: Option<usize>,
    /// `ord(eps) | q - 1`, decided only when a valid M was found.
    pub kills: Option<bool>,
    pub budget_exhausted: bool,
}

pub fn check_m_subset(t: &TrianglePresentation, order: &Order, budget: u64) -> MSubsetCheck {
    let search = find_m_subset(t, budget);
    let budget_exhausted = search == MSubsetSearch::BudgetExhausted;
    match search.subset() {
        Some(m) if covers_thrice(t.n(), m) && m.iter().all(|tr| t.contains(tr)) => {
            let kills = match order {
                Order::Finite(k) => BigInt::from(t.q() - 1).is_multiple_of(k),
                Order::Infinite => false,
            };
            MSubsetCheck {
                found: true,
                size: Some(m.len()),
                kills: Some(kills),
                budget_exhausted,
            }
        }
        _ => MSubsetCheck {
            found: false,
            size: None,
            kills: None,
            budget_exhausted,
        },
    }
}

/// `|A_T / <eps>|` divides `|Gamma_ab|`. Returns the verdict and whether it
/// passed only because `Gamma_ab` is infinite.
pub fn check_gamma_ab(t: &TrianglePresentation, quotient: &SnfResult) -> (bool, bool) {
    let gamma = FpAbelianGroup::new(gamma_ab_matrix(t));
    match (gamma.invariants().order(), quotient.order()) {
        (Some(g), Some(a)) => (g.is_multiple_of(&a), false),
        (Some(_), None) => (false, false),
        (None, _) => (true, true),
    }
}

pub fn analyze(t: &TrianglePresentation, cfg: &AnalysisConfig) -> Result<AnalysisReport, CoinvError> {
    let v = validate(t);
    if !v.is_valid() {
        return Err(CoinvError::InvalidPresentation(
            v.first_failure().unwrap_or_default(),
        ));
    }
    let results: Vec<(RelationScheme, SchemeResult)> = cfg
        .scheme
        .schemes()
        .iter()
        .map(|&s| (s, analyze_scheme(t, s, cfg)))
        .collect();
    let primary = &results[0].1;
    let scheme_agreement = (results.len() > 1).then(|| {
        results.windows(2).all(|w| {
            let (a, b) = (&w[0].1, &w[1].1);
            a.invariants == b.invariants && a.quotient == b.quotient && a.order == b.order
        })
    });
    let order_methods_agree = results
        .iter()
        .filter_map(|r| r.1.methods_agree)
        .reduce(|a, b| a && b);

    let mut warnings = Vec::new();
    if !primary.invariants.is_finite() {
        warnings.push(format!(
            "A_T is infinite (free rank {})",
            primary.invariants.free_rank
        ));
    }
    let m = check_m_subset(t, &primary.order, cfg.backtrack_budget);
    if m.budget_exhausted {
        warnings.push(format!(
            "M-subset search stopped after {} nodes",
            cfg.backtrack_budget
        ));
    }
    let (gamma_ok, vacuous) = check_gamma_ab(t, &primary.quotient);
    if vacuous {
        warnings.push("Gamma_ab is infinite; divisibility check is vacuous".into());
    }

    let mut report = AnalysisReport {
        q: t.q(),
        n: t.n(),
        origin: t.origin().to_string(),
        invariant_factors: primary.invariants.nontrivial_factors(),
        free_rank: primary.invariants.free_rank,
        quotient_invariant_factors: primary.quotient.nontrivial_factors(),
        quotient_free_rank: primary.quotient.free_rank,
        epsilon_order: EpsilonOrder(primary.order.clone()),
        checks: Checks {
            lemma_q2: false,
            lower_bound: check_lower_bound(t, &primary.order),
            m_subset_found: m.found,
            q_minus_1_kills_epsilon: m.kills,
            scheme_agreement,
            gamma_ab_divisibility: gamma_ok,
            order_methods_agree,
        },
        m_subset_size: m.size,
        warnings,
    };
    report.checks.lemma_q2 = check_lemma_q2(&report);
    Ok(report)
}

/// The two Tits-type families tabulated for `2 <= q <= 32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TitsVariant {
    T0,
    T0Dual,
}

/// Cyclic decomposition predicted for `A_T`: `Z_{q-1} (+ Z_3 if q = 1 mod 3)`
/// for `T0`, with `(Z_p)^{3r}` in front for the dual family.
pub fn predicted_cyclic_orders(pp: PrimePower, variant: TitsVariant) -> Vec<u64> {
    let q = pp.q() as u64;
    let mut out = Vec::new();
    if variant == TitsVariant::T0Dual {
        out.extend(std::iter::repeat_n(pp.p() as u64, 3 * pp.r() as usize));
    }
    out.push(q - 1);
    if q % 3 == 1 {
        out.push(3);
    }
    out
}

/// Predicted invariant factors, ones omitted.
pub fn predicted_invariant_factors(pp: PrimePower, variant: TitsVariant) -> Vec<BigInt> {
    invariant_factors_of_cyclic(&predicted_cyclic_orders(pp, variant))
        .into_iter()
        .map(BigInt::from)
        .collect()
}

/// Human-readable form of the predicted group, e.g. `(Z3)^6+Z8`.
pub fn predicted_formula(pp: PrimePower, variant: TitsVariant) -> String {
    let mut parts = Vec::new();
    if variant == TitsVariant::T0Dual {
        parts.push(format!("(Z{})^{}", pp.p(), 3 * pp.r()));
    }
    parts.push(format!("Z{}", pp.q() - 1));
    if pp.q() % 3 == 1 {
        parts.push("Z3".into());
    }
    parts.join("+")
}

/// Whether the computed structure matches the tabulated prediction.
pub fn matches_prediction(report: &AnalysisReport, pp: PrimePower, variant: TitsVariant) -> bool {
    report.free_rank == 0
        && report.invariant_factors == predicted_invariant_factors(pp, variant)
        && report.epsilon_order.0 == Order::Finite(epsilon_lower_bound(pp.q()).into())
}
