//! Experiment runners, body generators and report emission.
//!
//! Every check in a report is either *asserted* (a proved inequality or an
//! identity; a failure is a bug) or *observed* (a conjectural bound whose
//! margin is recorded but never turned into a failure).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::capacities::{cza_upper, ehz_bracket, ehz_l2_sum_bracket, ehz_lower_cj, BracketOptions, CapacityBracket};
use crate::characteristics::{clarke_minimize, ClarkeConfig};
use crate::convex::oracle::Oracle;
use crate::convex::volume::{monte_carlo_volume, volume, VolumeMethod, DEFAULT_SAMPLES};
use crate::convex::{lp_sum, lp_sum_volume, ConvexBody};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Field, Rational, Scalar};
use crate::symplectic::certificate::{certificate_with_directions, containment_factor};
use crate::symplectic::maps::random_symplectic_exact;
use crate::symplectic::polar::symplectic_polar_polytope;
use crate::symplectic::{
    self_polar_from_k, self_polarity_certificate, squeeze_to_self_polar, symplectic_polar, symplectic_reduction,
    symplectic_sum, SymplecticSpace,
};

/// Residual below which a body counts as certified self-polar.
pub const SELF_POLAR_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// reports

/// Which result a check exercises. Fixed list; every assertion carries one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceTag {
    /// Volume of an ℓ_p-sum in terms of the volumes of its parts.
    LpSumVolume,
    /// Volume of an ℓ₁-power of a polar body.
    TensorPowerVolume,
    /// Blaschke–Santaló: `vol X <= π^n / n!` for self-polar `X`.
    SantaloCeiling,
    /// `vol X >= 3` for planar symmetric `X` with `X^ω ⊆ X`.
    PlanarVolumeBound,
    /// Conjectured `vol X >= 2^n / n!` for self-polar `X` (observed only).
    PolarVolumeConjecture,
    /// Conjectured `vol X >= (2 + 1/n)^n / n!` (observed only).
    StrongPolarVolumeConjecture,
    /// `c_EHZ(X) >= (2 + 1/n) c_J(X)`, hence `>= 2 + 1/n` when `X^ω ⊆ X`.
    CapacityLowerBound,
    /// `c_EHZ(X) c_EHZ(X^ω) <= π²`, hence `c_EHZ(X) <= π` when self-polar.
    CapacityUpperBound,
    /// `c_EHZ(X) <= π max |ω|` over pairs in `X`.
    PiOmegaBound,
    /// Consistency of lower and upper capacity bounds.
    BracketOrdering,
    /// `c_ZA(X) >= 3` when `X^ω ⊆ X`.
    CylindricalLowerBound,
    /// A self-polar body over the hexagon has `c_ZA = 3`.
    CylindricalSharpness,
    /// `c_EHZ(X ⊕₂ Y) = min{c_EHZ(X), c_EHZ(Y)}`.
    L2SumMinRule,
    /// Linear symplectic reduction keeps self-polarity.
    ReductionSelfPolar,
    /// Volume of `Q^N ⊕₂ C^N` and its comparison with `2^N / N!`.
    CubeCrossVolume,
    /// Known values used to calibrate solvers and estimators.
    Calibration,
}

impl SourceTag {
    pub fn tag(self) -> &'static str {
        match self {
            SourceTag::LpSumVolume => "lp_sum_volume",
            SourceTag::TensorPowerVolume => "tensor_power_volume",
            SourceTag::SantaloCeiling => "santalo_ceiling",
            SourceTag::PlanarVolumeBound => "planar_volume_bound",
            SourceTag::PolarVolumeConjecture => "polar_volume_conjecture",
            SourceTag::StrongPolarVolumeConjecture => "strong_polar_volume_conjecture",
            SourceTag::CapacityLowerBound => "capacity_lower_bound",
            SourceTag::CapacityUpperBound => "capacity_upper_bound",
            SourceTag::PiOmegaBound => "pi_omega_bound",
            SourceTag::BracketOrdering => "bracket_ordering",
            SourceTag::CylindricalLowerBound => "cylindrical_lower_bound",
            SourceTag::CylindricalSharpness => "cylindrical_sharpness",
            SourceTag::L2SumMinRule => "l2_sum_min_rule",
            SourceTag::ReductionSelfPolar => "reduction_self_polar",
            SourceTag::CubeCrossVolume => "cube_cross_volume",
            SourceTag::Calibration => "calibration",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Asserted,
    Observed,
}

/// `observed <relation> expected` up to `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub kind: CheckKind,
    pub relation: Relation,
    pub observed: Scalar,
    pub expected: Scalar,
    /// Absolute slack; zero with exact operands means an exact comparison.
    pub tolerance: f64,
    pub pass: bool,
    /// `observed - expected`.
    pub margin: f64,
    pub source: SourceTag,
}

impl Assertion {
    pub fn new(
        name: impl Into<String>,
        kind: CheckKind,
        observed: Scalar,
        relation: Relation,
        expected: Scalar,
        tolerance: f64,
        source: SourceTag,
    ) -> Self {
        let pass = match (observed.as_exact(), expected.as_exact(), tolerance == 0.0) {
            (Some(o), Some(e), true) => match relation {
                Relation::Eq => o == e,
                Relation::Le => o <= e,
                Relation::Ge => o >= e,
            },
            _ => {
                let (o, e) = (observed.to_f64(), expected.to_f64());
                match relation {
                    Relation::Eq => (o - e).abs() <= tolerance,
                    Relation::Le => o <= e + tolerance,
                    Relation::Ge => o >= e - tolerance,
                }
            }
        };
        let margin = observed.to_f64() - expected.to_f64();
        Self { name: name.into(), kind, relation, observed, expected, tolerance, pass, margin, source }
    }

    pub fn asserted(
        name: impl Into<String>,
        observed: Scalar,
        relation: Relation,
        expected: Scalar,
        tolerance: f64,
        source: SourceTag,
    ) -> Self {
        Self::new(name, CheckKind::Asserted, observed, relation, expected, tolerance, source)
    }

    pub fn observed(
        name: impl Into<String>,
        observed: Scalar,
        relation: Relation,
        expected: Scalar,
        source: SourceTag,
    ) -> Self {
        Self::new(name, CheckKind::Observed, observed, relation, expected, 0.0, source)
    }

    /// Asserted check that failed before a value could be computed.
    fn failed(name: impl Into<String>, detail: &Error, source: SourceTag) -> Self {
        Self {
            name: format!("{} ({detail})", name.into()),
            kind: CheckKind::Asserted,
            relation: Relation::Eq,
            observed: Scalar::Float(f64::NAN),
            expected: Scalar::zero(),
            tolerance: 0.0,
            pass: false,
            margin: f64::NAN,
            source,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub inputs: Vec<String>,
    pub values: BTreeMap<String, Scalar>,
    pub assertions: Vec<Assertion>,
    pub seed: u64,
    /// Wall-clock seconds; filled in by the caller on request so that
    /// reports stay byte-identical by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    name: &'a str,
    kind: CheckKind,
    relation: &'a str,
    observed: String,
    expected: String,
    tolerance: f64,
    margin: f64,
    pass: bool,
    source: &'a str,
}

impl ExperimentReport {
    fn new(experiment: &str, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            inputs: Vec::new(),
            values: BTreeMap::new(),
            assertions: Vec::new(),
            seed,
            runtime_seconds: None,
        }
    }

    fn value(&mut self, name: impl Into<String>, v: Scalar) {
        self.values.insert(name.into(), v);
    }

    fn absorb(&mut self, part: Partial) {
        self.inputs.extend(part.inputs);
        self.values.extend(part.values);
        self.assertions.extend(part.assertions);
    }

    /// `true` iff every asserted check passed.
    pub fn passed(&self) -> bool {
        self.assertions.iter().filter(|a| a.kind == CheckKind::Asserted).all(|a| a.pass)
    }

    pub fn failures(&self) -> Vec<&Assertion> {
        self.assertions.iter().filter(|a| a.kind == CheckKind::Asserted && !a.pass).collect()
    }

    pub fn count(&self, kind: CheckKind) -> (usize, usize) {
        let of_kind: Vec<_> = self.assertions.iter().filter(|a| a.kind == kind).collect();
        (of_kind.iter().filter(|a| a.pass).count(), of_kind.len())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One row per assertion.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for a in &self.assertions {
            w.serialize(CsvRow {
                experiment: &self.experiment,
                name: &a.name,
                kind: a.kind,
                relation: a.relation.symbol(),
                observed: a.observed.to_string(),
                expected: a.expected.to_string(),
                tolerance: a.tolerance,
                margin: a.margin,
                pass: a.pass,
                source: a.source.tag(),
            })
            .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Output of one trial, merged into the report in trial order.
#[derive(Default)]
struct Partial {
    inputs: Vec<String>,
    values: BTreeMap<String, Scalar>,
    assertions: Vec<Assertion>,
}

impl Partial {
    fn value(&mut self, name: impl Into<String>, v: Scalar) {
        self.values.insert(name.into(), v);
    }

    fn check(&mut self, a: Assertion) {
        self.assertions.push(a);
    }
}

/// Independent per-trial seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

// ---------------------------------------------------------------------------
// generators

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    RandomSymmetricPolytope,
    LpSum,
    SelfPolarFromK,
    SqueezeOutput,
    Hexagon,
    Ball,
    Cube,
    Crosspolytope,
    HexagonCylinder,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 9] = [
        GeneratorKind::RandomSymmetricPolytope,
        GeneratorKind::LpSum,
        GeneratorKind::SelfPolarFromK,
        GeneratorKind::SqueezeOutput,
        GeneratorKind::Hexagon,
        GeneratorKind::Ball,
        GeneratorKind::Cube,
        GeneratorKind::Crosspolytope,
        GeneratorKind::HexagonCylinder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::RandomSymmetricPolytope => "random-symmetric-polytope",
            GeneratorKind::LpSum => "lp-sum",
            GeneratorKind::SelfPolarFromK => "self-polar-from-k",
            GeneratorKind::SqueezeOutput => "squeeze-output",
            GeneratorKind::Hexagon => "hexagon",
            GeneratorKind::Ball => "ball",
            GeneratorKind::Cube => "cube",
            GeneratorKind::Crosspolytope => "crosspolytope",
            GeneratorKind::HexagonCylinder => "hexagon-cylinder",
        }
    }

    /// Bodies of this kind are symplectically self-polar by construction.
    pub fn self_polar(self) -> bool {
        matches!(
            self,
            GeneratorKind::SelfPolarFromK
                | GeneratorKind::SqueezeOutput
                | GeneratorKind::Hexagon
                | GeneratorKind::HexagonCylinder
        )
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown generator kind {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub dim: usize,
    /// Vertex count for random polytopes (rounded up to even); `None` picks
    /// `2·dim + 2`.
    #[serde(default)]
    pub vertices: Option<usize>,
    pub seed: u64,
    /// Exponent for `lp-sum` (default 1).
    #[serde(default)]
    pub p: Option<f64>,
    /// `ε` for `hexagon-cylinder` as `"p/q"` (default `1/10`).
    #[serde(default)]
    pub epsilon: Option<String>,
    /// Radius for `ball` (default 1).
    #[serde(default)]
    pub radius: Option<f64>,
    /// Follow with a random exact linear symplectic map (exact polytopes
    /// only); self-polarity is preserved.
    #[serde(default)]
    pub symplectic_image: bool,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, dim: usize, seed: u64) -> Self {
        Self { kind, dim, vertices: None, seed, p: None, epsilon: None, radius: None, symplectic_image: false }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn describe(&self) -> String {
        let mut s = format!("{} dim={} seed={}", self.kind.name(), self.dim, self.seed);
        if let Some(v) = self.vertices {
            s.push_str(&format!(" vertices={v}"));
        }
        if let Some(p) = self.p {
            s.push_str(&format!(" p={p}"));
        }
        if let Some(e) = &self.epsilon {
            s.push_str(&format!(" epsilon={e}"));
        }
        if let Some(r) = self.radius {
            s.push_str(&format!(" radius={r}"));
        }
        if self.symplectic_image {
            s.push_str(" symplectic-image");
        }
        s
    }
}

fn int_points(points: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    points.iter().map(|p| p.iter().map(|&v| Rational::from_i64(v)).collect()).collect()
}

/// `conv{±(0,1), ±(1,0), ±(1,1)}`.
pub fn hexagon() -> ConvexBody {
    ConvexBody::from_int_points(2, &[vec![0, 1], vec![0, -1], vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]])
        .expect("hexagon")
}

/// `[-1, 1]^dim`.
pub fn cube(dim: usize) -> Result<ConvexBody> {
    let pts: Vec<Vec<i64>> =
        (0..1usize << dim).map(|k| (0..dim).map(|i| if k >> i & 1 == 1 { 1 } else { -1 }).collect()).collect();
    ConvexBody::from_int_points(dim, &pts)
}

/// `conv{±e_i}`.
pub fn crosspolytope(dim: usize) -> Result<ConvexBody> {
    let mut pts = Vec::new();
    for i in 0..dim {
        for s in [1, -1] {
            let mut e = vec![0; dim];
            e[i] = s;
            pts.push(e);
        }
    }
    ConvexBody::from_int_points(dim, &pts)
}

/// Random centrally symmetric polytope: `vertices / 2` pairs `±v` with
/// integer entries in `[-3, 3]`, redrawn until full-dimensional.
pub fn random_symmetric_polytope(dim: usize, vertices: usize, seed: u64) -> Result<ConvexBody> {
    let pairs = vertices.div_ceil(2).max(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let mut pts = Vec::with_capacity(2 * pairs);
        while pts.len() < 2 * pairs {
            let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            pts.push(v.iter().map(|x| -x).collect());
            pts.push(v);
        }
        match ConvexBody::exact_hull(dim, &int_points(&pts)) {
            Ok(b) => return Ok(b),
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate(format!("no full-dimensional sample in dimension {dim} after 100 draws")))
}

/// `Q = conv(P ∪ ε C^{2n})` with `P` the hexagon in the `(q_1, p_1)` plane
/// and `C^{2n}` the crosspolytope, and its symplectic polar
/// `Q^ω = (P × R^{2n-2}) ∩ ε^{-1} Q^{2n}`.
pub fn hexagon_cylinder_parts(dim: usize, epsilon: &Rational) -> Result<(ConvexBody, ConvexBody)> {
    let space = SymplecticSpace::new(dim)?;
    let n = space.n();
    if n < 2 {
        return Err(Error::Precondition("the hexagon cylinder needs dimension at least 4".into()));
    }
    if *epsilon <= Rational::from_i64(0) || *epsilon >= Rational::from_i64(1) {
        return Err(Error::Precondition("epsilon must lie in (0, 1)".into()));
    }
    let zero = Rational::from_i64(0);
    let mut pts = Vec::new();
    for (a, b) in [(0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1)] {
        let mut x = vec![zero.clone(); dim];
        x[0] = Rational::from_i64(a);
        x[n] = Rational::from_i64(b);
        pts.push(x);
    }
    for i in 0..dim {
        for s in [1, -1] {
            let mut x = vec![zero.clone(); dim];
            x[i] = epsilon * Rational::from_i64(s);
            pts.push(x);
        }
    }
    let q = ConvexBody::exact_hull(dim, &pts)?;
    let qw = symplectic_polar(&q)?;
    Ok((q, qw))
}

/// A self-polar `X` with `Q ⊆ X ⊆ Q^ω`, by squeezing `Q^ω` (exact).
pub fn hexagon_cylinder(dim: usize, epsilon: &Rational) -> Result<ConvexBody> {
    let (_, qw) = hexagon_cylinder_parts(dim, epsilon)?;
    let out = squeeze_to_self_polar(&qw, 0.0, 500)?;
    if !out.converged {
        return Err(Error::Capability(format!("squeeze did not converge in {} cuts", out.iterations)));
    }
    Ok(out.body)
}

/// Smallest `s ∈ 2^-3 N` with `(sY)^ω ⊆ sY`, i.e. `s² >= min{t : Y^ω ⊆ tY}`.
fn containment_scale(y: &ConvexBody) -> Result<Rational> {
    let e = y.as_exact().ok_or_else(|| Error::Capability("needs an exact polytope".into()))?;
    let t = containment_factor(&symplectic_polar_polytope(e)?, e);
    let mut k = ((t.to_f64().sqrt() * 8.0).floor() as i64).max(1);
    loop {
        let s = Rational::new(k.into(), 8.into());
        if &s * &s >= t {
            return Ok(s);
        }
        k += 1;
    }
}

fn dyadic_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-8i32..=8) as f64 / 8.0).collect();
        if v.iter().any(|&x| x != 0.0) {
            return v;
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<ConvexBody> {
    let d = spec.dim;
    if d == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    let vertices = spec.vertices.unwrap_or(2 * d + 2);
    let even = || SymplecticSpace::new(d).map(|s| s.n());
    let body = match spec.kind {
        GeneratorKind::Hexagon => {
            if d != 2 {
                return Err(Error::Config("the hexagon lives in dimension 2".into()));
            }
            hexagon()
        }
        GeneratorKind::Ball => ConvexBody::ball(d, spec.radius.unwrap_or(1.0)),
        GeneratorKind::Cube => cube(d)?,
        GeneratorKind::Crosspolytope => crosspolytope(d)?,
        GeneratorKind::HexagonCylinder => {
            let eps = match &spec.epsilon {
                Some(s) => crate::scalar::parse_rational(s)?,
                None => Rational::new(1.into(), 10.into()),
            };
            hexagon_cylinder(d, &eps)?
        }
        GeneratorKind::RandomSymmetricPolytope => random_symmetric_polytope(d, vertices, spec.seed)?,
        GeneratorKind::LpSum => {
            if d < 2 {
                return Err(Error::Config("an ℓ_p-sum needs dimension at least 2".into()));
            }
            let (n, m) = (d.div_ceil(2), d / 2);
            let k = random_symmetric_polytope(n, 2 * n + 2, spec.seed)?;
            let l = random_symmetric_polytope(m, 2 * m + 2, spec.seed ^ 0x1)?;
            lp_sum(&k, &l, spec.p.unwrap_or(1.0))?
        }
        GeneratorKind::SelfPolarFromK => {
            let n = even()?;
            let k = random_symmetric_polytope(n, vertices.min(2 * n + 4), spec.seed)?;
            self_polar_from_k(&k)?
        }
        GeneratorKind::SqueezeOutput => {
            even()?;
            let y = random_symmetric_polytope(d, vertices, spec.seed)?;
            let y = y.scaled_exact(&containment_scale(&y)?)?;
            let out = squeeze_to_self_polar(&y, 0.0, 500)?;
            if !out.converged {
                return Err(Error::Capability(format!("squeeze did not converge in {} cuts", out.iterations)));
            }
            out.body
        }
    };
    if spec.symplectic_image {
        let n = even()?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5ea1);
        let rows = random_symplectic_exact(n, &mut rng);
        return body.linear_image_exact(&rows);
    }
    Ok(body)
}

// ---------------------------------------------------------------------------
// volumes

/// A volume with its Monte Carlo standard error (zero when closed form).
#[derive(Clone, Debug)]
pub struct VolumeValue {
    pub value: Scalar,
    pub std_error: f64,
    pub method: &'static str,
}

/// Volume by the cheapest available route: polytope volume, closed forms for
/// balls, ℓ_p-sums and linear images, Monte Carlo otherwise.
pub fn body_volume(x: &ConvexBody, seed: u64) -> Result<VolumeValue> {
    match x {
        ConvexBody::Polytope(_) => {
            let v = volume(x, VolumeMethod::Auto, DEFAULT_SAMPLES, seed)?;
            let method = if v.samples > 0 { "monte_carlo" } else { "polytope" };
            Ok(VolumeValue { value: v.value, std_error: v.std_error, method })
        }
        ConvexBody::Oracle(Oracle::Ball { dim, radius }) => {
            let d = *dim as f64;
            let v = PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0) * radius.powf(d);
            Ok(VolumeValue { value: Scalar::Float(v), std_error: 0.0, method: "closed_form" })
        }
        ConvexBody::Oracle(Oracle::LpSum(s)) => {
            let (a, b) = (body_volume(&s.left, seed)?, body_volume(&s.right, seed ^ 0x1)?);
            if a.std_error == 0.0 && b.std_error == 0.0 {
                let v = lp_sum_volume(&a.value, &b.value, s.left.dim(), s.right.dim(), s.p)?;
                return Ok(VolumeValue { value: v, std_error: 0.0, method: "closed_form" });
            }
            monte_carlo(x, seed)
        }
        ConvexBody::Oracle(Oracle::Linear(l)) => {
            let inner = body_volume(&l.body, seed)?;
            let det = l.map.determinant().abs();
            Ok(VolumeValue {
                value: Scalar::Float(inner.value.to_f64() * det),
                std_error: inner.std_error * det,
                method: inner.method,
            })
        }
        ConvexBody::Oracle(_) => monte_carlo(x, seed),
    }
}

fn monte_carlo(x: &ConvexBody, seed: u64) -> Result<VolumeValue> {
    let v = monte_carlo_volume(x, DEFAULT_SAMPLES, seed, 0)?;
    Ok(VolumeValue { value: v.value, std_error: v.std_error, method: "monte_carlo" })
}

fn float(x: f64) -> Scalar {
    Scalar::Float(x)
}

/// `c^n / n!` as an exact rational for rational `c`.
fn power_over_factorial(c: &Rational, n: usize) -> Rational {
    let mut acc = Rational::from_i64(1);
    for _ in 0..n {
        acc *= c;
    }
    acc / factorial(n as u64)
}

fn pi_power_over_factorial(n: usize) -> f64 {
    PI.powi(n as i32) / crate::linalg::factorial_f64(n)
}

// ---------------------------------------------------------------------------
// ℓ_p-sum volumes

/// Samples for the Monte Carlo side of the ℓ₂ check.
pub const LP_MONTE_CARLO_SAMPLES: u64 = 1_000_000;

/// Exact `p = 1` identity on random pairs (total dimension 2 or 3) and a
/// Monte Carlo check of `Q² ⊕₂ C²` against the closed form.
pub fn verify_lp_volume(trials: usize, seed: u64) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("lp-volume", seed);
    let interval = ConvexBody::from_int_points(1, &[vec![-1], vec![1]])?;
    let diamond = lp_sum(&interval, &interval, 1.0)?;
    let v = volume(&diamond, VolumeMethod::Exact, 0, 0)?.value;
    report.inputs.push("[-1,1] (+)_1 [-1,1]".into());
    report.assertions.push(Assertion::asserted(
        "interval_l1_square",
        v,
        Relation::Eq,
        Scalar::from_int(2),
        0.0,
        SourceTag::LpSumVolume,
    ));

    let parts: Vec<Result<Partial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let (n, m) = [(1, 1), (1, 2), (2, 1)][rng.gen_range(0..3)];
            let k = random_symmetric_polytope(n, 2 * n + 2, s ^ 0xa)?;
            let l = random_symmetric_polytope(m, 2 * m + 2, s ^ 0xb)?;
            let sum = lp_sum(&k, &l, 1.0)?;
            let direct = volume(&sum, VolumeMethod::Exact, 0, 0)?.value;
            let vk = volume(&k, VolumeMethod::Exact, 0, 0)?.value;
            let vl = volume(&l, VolumeMethod::Exact, 0, 0)?.value;
            let formula = lp_sum_volume(&vk, &vl, n, m, 1.0)?;
            let mut p = Partial::default();
            p.inputs.push(format!("trial {t}: random symmetric K in R^{n}, L in R^{m}, p = 1"));
            p.value(format!("trial{t}.volume"), direct.clone());
            p.check(Assertion::asserted(
                format!("trial{t}.l1_identity"),
                direct,
                Relation::Eq,
                formula,
                0.0,
                SourceTag::LpSumVolume,
            ));
            Ok(p)
        })
        .collect();
    for p in parts {
        report.absorb(p?);
    }

    let q2 = cube(2)?;
    let c2 = crosspolytope(2)?;
    let body = lp_sum(&q2, &c2, 2.0)?;
    let mc = monte_carlo_volume(&body, LP_MONTE_CARLO_SAMPLES, seed ^ 0x12, 0)?;
    let closed = lp_sum_volume(&Scalar::from_int(4), &Scalar::from_int(2), 2, 2, 2.0)?;
    report.inputs.push(format!("Q^2 (+)_2 C^2, {LP_MONTE_CARLO_SAMPLES} samples"));
    report.value("q2_l2_c2.monte_carlo", mc.value.clone());
    report.value("q2_l2_c2.std_error", float(mc.std_error));
    report.value("q2_l2_c2.closed_form", closed.clone());
    report.assertions.push(Assertion::asserted(
        "q2_l2_c2.monte_carlo_within_3_sigma",
        mc.value,
        Relation::Eq,
        closed,
        3.0 * mc.std_error,
        SourceTag::LpSumVolume,
    ));
    Ok(report)
}

// ---------------------------------------------------------------------------
// tensor powers

/// Largest `n·m` for which the exact ℓ₁-power is built.
pub const TENSOR_DIM_CAP: usize = 6;

/// For symmetric `K ⊂ R^n`: the `m`-fold ℓ₁-sum of `K°` against
/// `(n!)^m / (nm)! · (vol K°)^m`, the `m`-fold product against
/// `(vol K)^m`, and the polar of the product against the ℓ₁-power.
pub fn verify_tensor_power_identity(k: &ConvexBody, m: usize) -> Result<ExperimentReport> {
    let n = k.dim();
    let mut report = ExperimentReport::new("tensor-power", 0);
    if m == 0 {
        return Err(Error::Config("m must be positive".into()));
    }
    if n * m > TENSOR_DIM_CAP {
        return Err(Error::Capability(format!("n·m = {} exceeds the exact cap {TENSOR_DIM_CAP}", n * m)));
    }
    if !k.is_exact() {
        return Err(Error::Capability("tensor powers are built for exact polytopes".into()));
    }
    if !k.is_symmetric() {
        return Err(Error::Asymmetric("K must be centrally symmetric".into()));
    }
    report.inputs.push(format!("K in R^{n} with {} vertices, m = {m}", k.as_exact().map_or(0, |e| e.vertices().len())));
    let kp = k.polar_dual()?;
    let mut l1 = kp.clone();
    let mut prod = k.clone();
    for _ in 1..m {
        l1 = lp_sum(&l1, &kp, 1.0)?;
        prod = lp_sum(&prod, k, f64::INFINITY)?;
    }
    let vol_kp = volume(&kp, VolumeMethod::Exact, 0, 0)?.value;
    let vol_k = volume(k, VolumeMethod::Exact, 0, 0)?.value;
    let vol_l1 = volume(&l1, VolumeMethod::Exact, 0, 0)?.value;
    let vol_prod = volume(&prod, VolumeMethod::Exact, 0, 0)?.value;
    let mut pow_kp = Scalar::from_int(1);
    let mut pow_k = Scalar::from_int(1);
    for _ in 0..m {
        pow_kp = pow_kp.mul(&vol_kp);
        pow_k = pow_k.mul(&vol_k);
    }
    let coeff = Scalar::Exact(factorial(n as u64).pow(m as i32) / factorial((n * m) as u64));
    let closed = coeff.mul(&pow_kp);
    report.value("vol_k", vol_k);
    report.value("vol_k_polar", vol_kp);
    report.value("vol_l1_power", vol_l1.clone());
    report.value("vol_product", vol_prod.clone());
    report.value("closed_form", closed.clone());
    report.assertions.push(Assertion::asserted(
        "l1_power_volume",
        vol_l1,
        Relation::Eq,
        closed,
        0.0,
        SourceTag::TensorPowerVolume,
    ));
    report.assertions.push(Assertion::asserted(
        "product_volume",
        vol_prod,
        Relation::Eq,
        pow_k,
        0.0,
        SourceTag::TensorPowerVolume,
    ));
    // second route: polar of the product is the ℓ₁-power
    let same = match (prod.polar_dual()?.as_exact(), l1.as_exact()) {
        (Some(a), Some(b)) => a.same_vertices(b),
        _ => false,
    };
    report.assertions.push(Assertion::asserted(
        "polar_of_product_is_l1_power",
        Scalar::from_int(same as i64),
        Relation::Eq,
        Scalar::from_int(1),
        0.0,
        SourceTag::TensorPowerVolume,
    ));
    Ok(report)
}

// ---------------------------------------------------------------------------
// self-polar volumes

fn volume_checks(p: &mut Partial, label: &str, x: &ConvexBody, seed: u64) -> Result<()> {
    let n = x.dim() / 2;
    let vol = body_volume(x, seed)?;
    let slack = 3.0 * vol.std_error + 1e-12 * vol.value.to_f64().abs();
    let exact_slack = if vol.value.is_exact() { 0.0 } else { slack };
    p.value(format!("{label}.volume"), vol.value.clone());
    if vol.std_error > 0.0 {
        p.value(format!("{label}.volume_std_error"), float(vol.std_error));
    }
    p.check(Assertion::asserted(
        format!("{label}.santalo_ceiling"),
        vol.value.clone(),
        Relation::Le,
        float(pi_power_over_factorial(n)),
        slack,
        SourceTag::SantaloCeiling,
    ));
    if n == 1 {
        p.check(Assertion::asserted(
            format!("{label}.planar_bound"),
            vol.value.clone(),
            Relation::Ge,
            Scalar::from_int(3),
            exact_slack,
            SourceTag::PlanarVolumeBound,
        ));
    }
    p.check(Assertion::observed(
        format!("{label}.two_pow_n_over_n_factorial"),
        vol.value.clone(),
        Relation::Ge,
        Scalar::Exact(power_over_factorial(&Rational::from_i64(2), n)),
        SourceTag::PolarVolumeConjecture,
    ));
    let c = Rational::from_i64(2) + Rational::new(1.into(), (n as i64).into());
    p.check(Assertion::observed(
        format!("{label}.strong_bound"),
        vol.value,
        Relation::Ge,
        Scalar::Exact(power_over_factorial(&c, n)),
        SourceTag::StrongPolarVolumeConjecture,
    ));
    Ok(())
}

fn certify(p: &mut Partial, label: &str, x: &ConvexBody) -> Result<bool> {
    let cert = self_polarity_certificate(x, SELF_POLAR_TOL)?;
    p.value(format!("{label}.self_polarity_residual"), cert.residual.clone());
    Ok(cert.is_self_polar(SELF_POLAR_TOL))
}

/// Volumes of self-polar bodies against `2^n/n!`, `(2+1/n)^n/n!` and
/// `π^n/n!`. Only the Santaló ceiling and the planar bound are asserted.
pub fn verify_self_polar_volume(spec: &GeneratorSpec, trials: usize) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("self-polar", spec.seed);
    let mut golden: Vec<(String, ConvexBody)> = vec![
        ("hexagon".into(), hexagon()),
        ("q2_l2_c2".into(), self_polar_from_k(&cube(2)?)?),
    ];
    for n in 1..=3 {
        golden.push((format!("ball{}", 2 * n), ConvexBody::ball(2 * n, 1.0)));
    }
    for (label, x) in &golden {
        let mut p = Partial::default();
        p.inputs.push(label.clone());
        volume_checks(&mut p, label, x, spec.seed)?;
        report.absorb(p);
    }
    let parts: Vec<Result<Partial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = spec.with_seed(trial_seed(spec.seed, t));
            let x = generate(&s)?;
            let label = format!("trial{t}");
            let mut p = Partial::default();
            p.inputs.push(format!("{label}: {}", s.describe()));
            if !certify(&mut p, &label, &x)? {
                p.check(Assertion::asserted(
                    format!("{label}.generated_self_polar"),
                    p.values[&format!("{label}.self_polarity_residual")].clone(),
                    Relation::Le,
                    float(SELF_POLAR_TOL),
                    0.0,
                    SourceTag::Calibration,
                ));
                return Ok(p);
            }
            volume_checks(&mut p, &label, &x, s.seed)?;
            Ok(p)
        })
        .collect();
    for p in parts {
        report.absorb(p?);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// capacities

#[derive(Clone, Debug, Serialize)]
pub struct CapacityClaimsOptions {
    pub chains: usize,
    pub cj_restarts: usize,
    pub cza_restarts: usize,
    /// Hexagon, hexagon cylinder and the ℓ₂-sum of two disks.
    pub golden: bool,
    /// Clarke solve on the 4D ℓ₂-sum of two disks (slow).
    pub clarke: bool,
    pub seed: u64,
}

impl Default for CapacityClaimsOptions {
    fn default() -> Self {
        Self {
            chains: crate::capacities::DEFAULT_CHAINS,
            cj_restarts: crate::symplectic::cj::DEFAULT_RESTARTS,
            cza_restarts: crate::capacities::DEFAULT_CZA_RESTARTS,
            golden: true,
            clarke: true,
            seed: 0,
        }
    }
}

fn bracket_values(p: &mut Partial, label: &str, b: &CapacityBracket) {
    p.value(format!("{label}.lower"), b.lower.clone());
    p.value(format!("{label}.upper"), b.upper.clone());
    for bound in b.lower_bounds.iter().chain(&b.upper_bounds) {
        p.value(format!("{label}.{}", bound.provenance.tag()), bound.value.clone());
    }
}

/// Checks on one body. `self_polar_hint` marks bodies that are self-polar
/// by construction; exact polytopes are classified by their certificate.
fn capacity_trial(
    p: &mut Partial,
    label: &str,
    x: &ConvexBody,
    self_polar_hint: bool,
    opts: &CapacityClaimsOptions,
    seed: u64,
) -> Result<()> {
    let n = x.dim() / 2;
    let bopts = BracketOptions { chains: opts.chains, cj_restarts: opts.cj_restarts, seed, ..Default::default() };
    let bracket = match ehz_bracket(x, &bopts) {
        Ok(b) => b,
        Err(e @ Error::BracketInversion { .. }) => {
            p.check(Assertion::failed(format!("{label}.bracket_ordering"), &e, SourceTag::BracketOrdering));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    bracket_values(p, label, &bracket);
    p.check(Assertion::asserted(
        format!("{label}.bracket_ordering"),
        bracket.lower.clone(),
        Relation::Le,
        bracket.upper.clone(),
        if bracket.lower.is_exact() && bracket.upper.is_exact() { 0.0 } else { 1e-9 * (1.0 + bracket.upper.to_f64()) },
        SourceTag::BracketOrdering,
    ));

    // polar containment decides which bounds apply
    let cert = certificate_with_directions(x, SELF_POLAR_TOL, 2_000, seed ^ 0xce)?;
    p.value(format!("{label}.self_polarity_residual"), cert.residual.clone());
    let self_polar = cert.is_self_polar(SELF_POLAR_TOL) && (self_polar_hint || cert.exact);
    let polar_inside = self_polar || (cert.exact && cert.polar_in_body);
    p.value(format!("{label}.self_polar"), Scalar::from_int(self_polar as i64));

    if polar_inside {
        let floor = Scalar::Exact(Rational::from_i64(2) + Rational::new(1.into(), (n as i64).into()));
        p.check(Assertion::asserted(
            format!("{label}.lower_at_least_2_plus_1_over_n"),
            bracket.lower.clone(),
            Relation::Ge,
            floor,
            1e-6,
            SourceTag::CapacityLowerBound,
        ));
        let pi_upper = bracket
            .upper_bounds
            .iter()
            .find(|b| b.provenance == crate::capacities::Provenance::PiOmegaUpper)
            .expect("pi-omega bound is always computed");
        p.check(Assertion::asserted(
            format!("{label}.pi_upper_at_least_lower"),
            pi_upper.value.clone(),
            Relation::Ge,
            bracket.lower.clone(),
            1e-9,
            SourceTag::PiOmegaBound,
        ));
        let cza = cza_upper(x, opts.cza_restarts, seed ^ 0x2a)?;
        p.value(format!("{label}.cza_upper"), cza.value.clone());
        p.check(Assertion::asserted(
            format!("{label}.cza_at_least_3"),
            cza.value.clone(),
            Relation::Ge,
            Scalar::from_int(3),
            1e-6,
            SourceTag::CylindricalLowerBound,
        ));
        p.check(Assertion::asserted(
            format!("{label}.cza_at_least_lower"),
            cza.value,
            Relation::Ge,
            bracket.lower.clone(),
            1e-6,
            SourceTag::BracketOrdering,
        ));
    }
    if self_polar {
        p.check(Assertion::asserted(
            format!("{label}.lower_at_most_pi"),
            bracket.lower.clone(),
            Relation::Le,
            float(PI),
            1e-9,
            SourceTag::CapacityUpperBound,
        ));
    } else if x.is_exact() {
        // c(X) c(X^ω) <= π² bounds the product of the lower bounds
        let polar = symplectic_polar(x)?;
        let product = ehz_lower_cj(x)?.mul(&ehz_lower_cj(&polar)?);
        p.value(format!("{label}.lower_product_with_polar"), product.clone());
        p.check(Assertion::asserted(
            format!("{label}.lower_product_at_most_pi_squared"),
            product,
            Relation::Le,
            float(PI * PI),
            1e-9,
            SourceTag::CapacityUpperBound,
        ));
    }
    if let Some(r) = &bracket.reduction {
        p.check(Assertion::asserted(
            format!("{label}.reduced_area_product"),
            float(r.max_area_product),
            Relation::Le,
            float(PI * PI),
            1e-9,
            SourceTag::SantaloCeiling,
        ));
    }
    Ok(())
}

fn golden_capacities(report: &mut ExperimentReport, opts: &CapacityClaimsOptions) -> Result<()> {
    let seed = opts.seed;
    // hexagon
    let h = hexagon();
    let mut p = Partial::default();
    p.inputs.push("hexagon".into());
    let b = ehz_bracket(&h, &BracketOptions { seed, ..Default::default() })?;
    bracket_values(&mut p, "hexagon", &b);
    for (name, v) in [("lower", &b.lower), ("upper", &b.upper)] {
        p.check(Assertion::asserted(
            format!("hexagon.bracket_{name}"),
            v.clone(),
            Relation::Eq,
            Scalar::from_int(3),
            0.0,
            SourceTag::Calibration,
        ));
    }
    let cza = cza_upper(&h, opts.cza_restarts, seed)?;
    p.value("hexagon.cza_upper", cza.value.clone());
    p.check(Assertion::asserted(
        "hexagon.cza_at_least_3",
        cza.value.clone(),
        Relation::Ge,
        Scalar::from_int(3),
        1e-6,
        SourceTag::CylindricalLowerBound,
    ));
    p.check(Assertion::observed("hexagon.cza_at_most_pi", cza.value, Relation::Le, float(PI), SourceTag::Calibration));
    report.absorb(p);

    // hexagon cylinder
    let eps = Rational::new(1.into(), 10.into());
    let x = hexagon_cylinder(4, &eps)?;
    let mut p = Partial::default();
    p.inputs.push("hexagon-cylinder dim=4 epsilon=1/10".into());
    let cert = self_polarity_certificate(&x, 0.0)?;
    p.check(Assertion::asserted(
        "hexagon_cylinder.self_polarity_residual",
        cert.residual,
        Relation::Eq,
        Scalar::from_int(0),
        0.0,
        SourceTag::CylindricalSharpness,
    ));
    let cza = cza_upper(&x, opts.cza_restarts, seed)?;
    p.value("hexagon_cylinder.cza_upper", cza.value.clone());
    p.check(Assertion::asserted(
        "hexagon_cylinder.cza_at_least_3",
        cza.value.clone(),
        Relation::Ge,
        Scalar::from_int(3),
        1e-6,
        SourceTag::CylindricalLowerBound,
    ));
    p.check(Assertion::asserted(
        "hexagon_cylinder.cza_at_most_3_05",
        cza.value,
        Relation::Le,
        Scalar::ratio(305, 100),
        0.0,
        SourceTag::CylindricalSharpness,
    ));
    report.absorb(p);

    // disk(1) ⊕₂ disk(2)
    let (d1, d2) = (ConvexBody::ball(2, 1.0), ConvexBody::ball(2, 2.0));
    let mut p = Partial::default();
    p.inputs.push("disk(1) (+)_2 disk(2), symplectic".into());
    let b1 = ehz_bracket(&d1, &BracketOptions { seed, ..Default::default() })?;
    let b2 = ehz_bracket(&d2, &BracketOptions { seed, ..Default::default() })?;
    let rule = ehz_l2_sum_bracket(&b1, &b2)?;
    bracket_values(&mut p, "disk_sum", &rule);
    for (name, v) in [("lower", &rule.lower), ("upper", &rule.upper)] {
        p.check(Assertion::asserted(
            format!("disk_sum.min_rule_{name}"),
            v.clone(),
            Relation::Eq,
            float(PI),
            1e-12,
            SourceTag::L2SumMinRule,
        ));
    }
    if opts.clarke {
        let sum = symplectic_sum(&d1, &d2, 2.0)?;
        let cfg = ClarkeConfig { seed, ..Default::default() };
        let est = clarke_minimize(&sum, &cfg)?;
        p.value("disk_sum.clarke_estimate", est.capacity_estimate.clone());
        p.value("disk_sum.clarke_residual", est.characteristic_residual.clone());
        p.check(Assertion::asserted(
            "disk_sum.clarke_within_5_percent",
            est.capacity_estimate,
            Relation::Eq,
            float(PI),
            0.05 * PI,
            SourceTag::L2SumMinRule,
        ));
    }
    report.absorb(p);
    Ok(())
}

/// Brackets, `c_ZA` estimates and the inequalities that apply to each
/// generated body, plus golden checks on known bodies.
pub fn verify_capacity_claims(
    spec: &GeneratorSpec,
    trials: usize,
    opts: &CapacityClaimsOptions,
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("capacities", spec.seed);
    if opts.golden {
        golden_capacities(&mut report, opts)?;
    }
    let parts: Vec<Result<Partial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = spec.with_seed(trial_seed(spec.seed, t));
            let x = generate(&s)?;
            let label = format!("trial{t}");
            let mut p = Partial::default();
            p.inputs.push(format!("{label}: {}", s.describe()));
            capacity_trial(&mut p, &label, &x, s.kind.self_polar(), opts, s.seed)?;
            Ok(p)
        })
        .collect();
    for p in parts {
        report.absorb(p?);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// reductions

/// `vol(Q^N ⊕₂ C^N) = ((N/2)!)² 4^N / (N!)²` through the gamma function.
fn cube_cross_volume_gamma(n: usize) -> f64 {
    let half = gamma(n as f64 / 2.0 + 1.0);
    let nf = crate::linalg::factorial_f64(n);
    half * half * 4f64.powi(n as i32) / (nf * nf)
}

fn binomial(n: u64, k: u64) -> Rational {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Reductions of certified self-polar bodies stay self-polar, and the
/// `Q^N ⊕₂ C^N` volumes for `N <= 6` exceed `2^N / N!`.
pub fn verify_reduction_claims(spec: &GeneratorSpec, trials: usize) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("reductions", spec.seed);
    for big_n in 1..=6usize {
        let label = format!("cube_cross_{big_n}");
        let two_n = Rational::from_i64(1i64 << big_n);
        let formula = lp_sum_volume(
            &Scalar::Exact(two_n.clone()),
            &Scalar::Exact(two_n.clone() / factorial(big_n as u64)),
            big_n,
            big_n,
            2.0,
        )?;
        let via_gamma = cube_cross_volume_gamma(big_n);
        report.inputs.push(format!("Q^{big_n} (+)_2 C^{big_n}"));
        report.value(format!("{label}.volume"), formula.clone());
        report.assertions.push(Assertion::asserted(
            format!("{label}.closed_form_routes_agree"),
            formula.clone(),
            Relation::Eq,
            float(via_gamma),
            1e-12 * via_gamma,
            SourceTag::CubeCrossVolume,
        ));
        report.assertions.push(Assertion::asserted(
            format!("{label}.at_least_2_pow_n_over_n_factorial"),
            formula.clone(),
            Relation::Ge,
            Scalar::Exact(power_over_factorial(&Rational::from_i64(2), big_n)),
            if formula.is_exact() { 0.0 } else { 1e-12 },
            SourceTag::CubeCrossVolume,
        ));
        let k = big_n as u64 / 2;
        report.assertions.push(Assertion::asserted(
            format!("{label}.central_binomial_at_most_2_pow_n"),
            Scalar::Exact(binomial(big_n as u64, k)),
            Relation::Le,
            Scalar::Exact(two_n),
            0.0,
            SourceTag::CubeCrossVolume,
        ));
        let c = Rational::from_i64(2) + Rational::new(1.into(), (big_n as i64).into());
        report.assertions.push(Assertion::observed(
            format!("{label}.versus_strong_bound"),
            formula,
            Relation::Ge,
            Scalar::Exact(power_over_factorial(&c, big_n)),
            SourceTag::StrongPolarVolumeConjecture,
        ));
    }
    let parts: Vec<Result<Partial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = spec.with_seed(trial_seed(spec.seed, t));
            let x = generate(&s)?;
            let label = format!("trial{t}");
            let mut p = Partial::default();
            p.inputs.push(format!("{label}: {}", s.describe()));
            reduction_trial(&mut p, &label, &x, s.seed)?;
            Ok(p)
        })
        .collect();
    for p in parts {
        report.absorb(p?);
    }
    Ok(report)
}

/// Directions for sampled certificates of reduced oracles.
const REDUCTION_CERT_DIRECTIONS: usize = 2_000;

fn residual(x: &ConvexBody, seed: u64) -> Result<Scalar> {
    Ok(certificate_with_directions(x, SELF_POLAR_TOL, REDUCTION_CERT_DIRECTIONS, seed)?.residual)
}

fn reduction_trial(p: &mut Partial, label: &str, x: &ConvexBody, seed: u64) -> Result<()> {
    let input = residual(x, seed ^ 0x1)?;
    p.value(format!("{label}.input_residual"), input.clone());
    p.check(Assertion::asserted(
        format!("{label}.input_certified"),
        input.clone(),
        Relation::Le,
        float(SELF_POLAR_TOL),
        0.0,
        SourceTag::ReductionSelfPolar,
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2ed);
    let v = dyadic_vector(x.dim(), &mut rng);
    let reduced = symplectic_reduction(x, &v)?;
    let out = residual(&reduced, seed ^ 0x2)?;
    p.value(format!("{label}.reduced_residual"), out.clone());
    p.value(format!("{label}.reduced_dim"), Scalar::from_int(reduced.dim() as i64));
    let limit = input.mul(&Scalar::from_int(10)).add(&float(1e-8));
    p.check(Assertion::asserted(
        format!("{label}.reduced_residual_bounded"),
        out,
        Relation::Le,
        if input.is_exact() && reduced.is_exact() { input.mul(&Scalar::from_int(10)) } else { limit },
        0.0,
        SourceTag::ReductionSelfPolar,
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_bodies() {
        let h = generate(&GeneratorSpec::new(GeneratorKind::Hexagon, 2, 0)).unwrap();
        assert_eq!(h.as_exact().unwrap().vertices().len(), 6);
        assert_eq!(volume(&cube(3).unwrap(), VolumeMethod::Exact, 0, 0).unwrap().value, Scalar::from_int(8));
        assert_eq!(volume(&crosspolytope(3).unwrap(), VolumeMethod::Exact, 0, 0).unwrap().value, Scalar::ratio(4, 3));
        assert!(generate(&GeneratorSpec::new(GeneratorKind::Hexagon, 4, 0)).is_err());
    }

    #[test]
    fn random_polytopes_are_deterministic_and_symmetric() {
        let spec = GeneratorSpec { vertices: Some(8), ..GeneratorSpec::new(GeneratorKind::RandomSymmetricPolytope, 2, 7) };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert!(a.is_symmetric());
        assert!(a.as_exact().unwrap().same_vertices(b.as_exact().unwrap()));
    }

    #[test]
    fn hexagon_cylinder_sandwich() {
        let eps = Rational::new(1.into(), 10.into());
        let (q, qw) = hexagon_cylinder_parts(4, &eps).unwrap();
        let x = hexagon_cylinder(4, &eps).unwrap();
        let (q, qw, xe) = (q.as_exact().unwrap(), qw.as_exact().unwrap(), x.as_exact().unwrap());
        assert!(q.vertices().iter().all(|v| xe.contains(v)));
        assert!(xe.vertices().iter().all(|v| qw.contains(v)));
        let cert = self_polarity_certificate(&x, 0.0).unwrap();
        assert_eq!(cert.residual, Scalar::from_int(0));
    }

    #[test]
    fn assertion_relations() {
        let a = Assertion::asserted("x", Scalar::ratio(1, 3), Relation::Le, Scalar::ratio(1, 3), 0.0, SourceTag::Calibration);
        assert!(a.pass);
        let b = Assertion::asserted("x", float(1.0 + 1e-7), Relation::Eq, float(1.0), 1e-8, SourceTag::Calibration);
        assert!(!b.pass);
        let c = Assertion::observed("x", float(0.5), Relation::Ge, float(1.0), SourceTag::PolarVolumeConjecture);
        let report = ExperimentReport { assertions: vec![a, c], ..ExperimentReport::new("t", 0) };
        assert!(report.passed());
        assert_eq!(report.count(CheckKind::Observed), (0, 1));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in GeneratorKind::ALL {
            assert_eq!(k.name().parse::<GeneratorKind>().unwrap(), k);
        }
        assert!("nonsense".parse::<GeneratorKind>().is_err());
    }

    #[test]
    fn tensor_power_examples() {
        let interval = ConvexBody::from_int_points(1, &[vec![-1], vec![1]]).unwrap();
        let r = verify_tensor_power_identity(&interval, 3).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.values["closed_form"], Scalar::ratio(4, 3));
        assert!(matches!(verify_tensor_power_identity(&cube(3).unwrap(), 3), Err(Error::Capability(_))));
    }
}
