//! Measurement scenarios and behaviors.
//!
//! A [`Scenario`] fixes a finite list of analyzer directions for each side of a
//! bipartite experiment; a [`Behavior`] is the full conditional probability table
//! `P(A, B | i, j)` over binary outcomes for every setting pair. Behaviors are the
//! operational fingerprint of a theory: everything downstream (locality checks,
//! polytope membership, CHSH values) consumes them.
//!
//! All types are immutable after construction and all operations are pure, so values
//! can be shared freely across threads.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json_util;

/// Norm below which a vector cannot be meaningfully normalized.
const ZERO_NORM_GUARD: f64 = 1e-12;

/// Minimum angular separation (radians) between two settings on the same side.
/// Duplicate directions would make local-polytope vertex enumeration degenerate.
const DISTINCT_ANGLE: f64 = 1e-9;

/// An analyzer setting: a unit vector in 3D space.
///
/// The constructor normalizes, so the unit-length invariant holds to better than
/// 1e-9 for any accepted input. The measurable physics depends only on angles
/// between directions, but keeping full 3D vectors makes scenario files
/// self-describing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    x: f64,
    y: f64,
    z: f64,
}

impl MeasurementDirection {
    /// Normalizes `(x, y, z)` to unit length.
    ///
    /// Rejects vectors whose norm is at or below 1e-12 (the direction is
    /// numerically meaningless) and non-finite inputs.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm <= ZERO_NORM_GUARD {
            return Err(Error::ZeroVector { norm });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub(crate) fn to_json_value(self) -> Value {
        json!([self.x, self.y, self.z])
    }
}

/// Angle between two directions in radians, in `[0, π]`.
///
/// The dot product is clamped to `[-1, 1]` before `acos`, so rounding can never
/// produce NaN for nominally parallel or antiparallel inputs. Exactly symmetric
/// in its arguments.
pub fn angle_between(a: &MeasurementDirection, b: &MeasurementDirection) -> f64 {
    a.dot(b).clamp(-1.0, 1.0).acos()
}

/// One of the two possible measurement outcomes, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    /// Table index: `Plus` is 0, `Minus` is 1 (the layout used by behavior tables
    /// and the JSON schema).
    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_index(idx: usize) -> Option<Self> {
        match idx {
            0 => Some(Outcome::Plus),
            1 => Some(Outcome::Minus),
            _ => None,
        }
    }

    /// The outcome as a signed value, `+1.0` or `-1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    /// Integer form for reports: `+1` or `-1`.
    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Plus => write!(f, "+1"),
            Outcome::Minus => write!(f, "-1"),
        }
    }
}

/// A measurement scenario: the ordered analyzer settings available on each side.
///
/// Both lists must be non-empty, and settings within a list must be pairwise
/// distinct (angular separation above 1e-9 rad). Antipodal directions count as
/// distinct settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    settings_a: Vec<MeasurementDirection>,
    settings_b: Vec<MeasurementDirection>,
}

impl Scenario {
    pub fn new(
        settings_a: Vec<MeasurementDirection>,
        settings_b: Vec<MeasurementDirection>,
    ) -> Result<Self> {
        check_side('a', &settings_a)?;
        check_side('b', &settings_b)?;
        Ok(Self {
            settings_a,
            settings_b,
        })
    }

    /// Number of settings on side A.
    pub fn na(&self) -> usize {
        self.settings_a.len()
    }

    /// Number of settings on side B.
    pub fn nb(&self) -> usize {
        self.settings_b.len()
    }

    pub fn setting_a(&self, i: usize) -> &MeasurementDirection {
        &self.settings_a[i]
    }

    pub fn setting_b(&self, j: usize) -> &MeasurementDirection {
        &self.settings_b[j]
    }

    pub fn settings_a(&self) -> &[MeasurementDirection] {
        &self.settings_a
    }

    pub fn settings_b(&self) -> &[MeasurementDirection] {
        &self.settings_b
    }

    /// Parses a scenario from a JSON document of the form
    /// `{"settings_a": [[x,y,z], ...], "settings_b": [[x,y,z], ...]}`.
    ///
    /// Unknown fields are ignored, so a behavior document parses as its scenario.
    /// Errors cite the path of the offending element.
    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json_value(&json_util::parse_document(text)?)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = json_util::as_object(v, "<document>")?;
        let settings_a = parse_directions(json_util::field(obj, "", "settings_a")?, "settings_a")?;
        let settings_b = parse_directions(json_util::field(obj, "", "settings_b")?, "settings_b")?;
        Self::new(settings_a, settings_b)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "settings_a": self.settings_a.iter().map(|d| d.to_json_value()).collect::<Vec<_>>(),
            "settings_b": self.settings_b.iter().map(|d| d.to_json_value()).collect::<Vec<_>>(),
        })
    }
}

fn check_side(side: char, settings: &[MeasurementDirection]) -> Result<()> {
    if settings.is_empty() {
        return Err(Error::EmptySettings { side });
    }
    for (i, d1) in settings.iter().enumerate() {
        for (j, d2) in settings.iter().enumerate().skip(i + 1) {
            let separation = angle_between(d1, d2);
            if separation <= DISTINCT_ANGLE {
                return Err(Error::DuplicateDirection {
                    side,
                    first: i,
                    second: j,
                    separation,
                });
            }
        }
    }
    Ok(())
}

fn parse_directions(v: &Value, path: &str) -> Result<Vec<MeasurementDirection>> {
    let arr = json_util::as_array(v, path)?;
    let mut out = Vec::with_capacity(arr.len());
    for (idx, item) in arr.iter().enumerate() {
        let ipath = format!("{path}[{idx}]");
        let triple = json_util::as_array(item, &ipath)?;
        if triple.len() != 3 {
            return Err(Error::parse(
                &ipath,
                format!("expected 3 components, got {}", triple.len()),
            ));
        }
        let x = json_util::as_f64(&triple[0], &format!("{ipath}[0]"))?;
        let y = json_util::as_f64(&triple[1], &format!("{ipath}[1]"))?;
        let z = json_util::as_f64(&triple[2], &format!("{ipath}[2]"))?;
        let dir = MeasurementDirection::new(x, y, z)
            .map_err(|e| Error::parse(&ipath, e.to_string()))?;
        out.push(dir);
    }
    Ok(out)
}

/// Result of checking a behavior's probability-table invariants.
///
/// `ok` holds exactly when the largest negative entry and the largest
/// per-cell normalization error are both within tolerance. Violations are
/// reported, never thrown: a bad table is a result, not a failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub ok: bool,
    pub max_negativity: f64,
    pub max_normalization_error: f64,
    /// Entries `(i, j, a, b)` that are negative beyond tolerance, plus one
    /// representative entry for each setting pair whose four probabilities do
    /// not sum to 1.
    pub offending_cells: Vec<(usize, usize, Outcome, Outcome)>,
}

/// A full conditional probability table `P(A, B | i, j)` over a scenario.
///
/// Stored row-major as `[i][j][a][b]` with outcome index 0 meaning `+1` and
/// 1 meaning `-1`. Construction checks only the shape; probability-validity
/// questions go through [`Behavior::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<f64>,
}

impl Behavior {
    /// Wraps a flat `[i][j][a][b]`-ordered table over `scenario`.
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        let expected = scenario.na() * scenario.nb() * 4;
        if table.len() != expected {
            return Err(Error::shape(
                "behavior table",
                format!("{expected} entries (na*nb*4)"),
                format!("{} entries", table.len()),
            ));
        }
        Ok(Self { scenario, table })
    }

    /// Builds a behavior by evaluating `f(i, j)` for every setting pair; `f`
    /// returns the four cell probabilities in `(pp, pm, mp, mm)` order.
    pub fn from_cells(scenario: Scenario, mut f: impl FnMut(usize, usize) -> [f64; 4]) -> Self {
        let (na, nb) = (scenario.na(), scenario.nb());
        let mut table = Vec::with_capacity(na * nb * 4);
        for i in 0..na {
            for j in 0..nb {
                table.extend_from_slice(&f(i, j));
            }
        }
        Self { scenario, table }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.scenario.nb() + j) * 4
    }

    /// `P(A = a, B = b | i, j)`.
    pub fn prob(&self, i: usize, j: usize, a: Outcome, b: Outcome) -> f64 {
        self.table[self.offset(i, j) + a.index() * 2 + b.index()]
    }

    /// The four probabilities of a setting pair in `(pp, pm, mp, mm)` order.
    pub fn cell(&self, i: usize, j: usize) -> [f64; 4] {
        let o = self.offset(i, j);
        [
            self.table[o],
            self.table[o + 1],
            self.table[o + 2],
            self.table[o + 3],
        ]
    }

    /// `P(A = a | i, j)`, marginalized over B's outcome.
    pub fn marginal_a(&self, i: usize, j: usize, a: Outcome) -> f64 {
        self.prob(i, j, a, Outcome::Plus) + self.prob(i, j, a, Outcome::Minus)
    }

    /// `P(B = b | i, j)`, marginalized over A's outcome.
    pub fn marginal_b(&self, i: usize, j: usize, b: Outcome) -> f64 {
        self.prob(i, j, Outcome::Plus, b) + self.prob(i, j, Outcome::Minus, b)
    }

    /// Signed correlation `E(i, j) = P(++) - P(+-) - P(-+) + P(--)`.
    pub fn correlation_at(&self, i: usize, j: usize) -> f64 {
        let [pp, pm, mp, mm] = self.cell(i, j);
        pp - pm - mp + mm
    }

    /// Checks non-negativity and per-cell normalization against `tol`.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut max_negativity: f64 = 0.0;
        let mut max_normalization_error: f64 = 0.0;
        let mut offending_cells = Vec::new();
        for i in 0..self.scenario.na() {
            for j in 0..self.scenario.nb() {
                let mut sum = 0.0;
                for a in Outcome::BOTH {
                    for b in Outcome::BOTH {
                        let p = self.prob(i, j, a, b);
                        sum += p;
                        if p < 0.0 {
                            max_negativity = max_negativity.max(-p);
                            if -p > tol {
                                offending_cells.push((i, j, a, b));
                            }
                        }
                    }
                }
                let err = (sum - 1.0).abs();
                if err > max_normalization_error {
                    max_normalization_error = err;
                }
                if err > tol {
                    offending_cells.push((i, j, Outcome::Plus, Outcome::Plus));
                }
            }
        }
        ValidationReport {
            ok: max_negativity <= tol && max_normalization_error <= tol,
            max_negativity,
            max_normalization_error,
            offending_cells,
        }
    }

    /// Maximum dependence of each side's marginals on the distant setting.
    ///
    /// Returns `(max_deviation_a, max_deviation_b)` where the first component is
    /// the largest `|P(A=a | i, j) - P(A=a | i, j')|` over settings and outcomes,
    /// and the second is the symmetric quantity for side B. Both are zero (up to
    /// rounding) for any behavior that admits a local model.
    pub fn no_signalling_check(&self) -> (f64, f64) {
        let (na, nb) = (self.scenario.na(), self.scenario.nb());
        let mut dev_a: f64 = 0.0;
        for i in 0..na {
            for a in Outcome::BOTH {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for j in 0..nb {
                    let m = self.marginal_a(i, j, a);
                    lo = lo.min(m);
                    hi = hi.max(m);
                }
                dev_a = dev_a.max(hi - lo);
            }
        }
        let mut dev_b: f64 = 0.0;
        for j in 0..nb {
            for b in Outcome::BOTH {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 0..na {
                    let m = self.marginal_b(i, j, b);
                    lo = lo.min(m);
                    hi = hi.max(m);
                }
                dev_b = dev_b.max(hi - lo);
            }
        }
        (dev_a, dev_b)
    }

    /// Parses a behavior from a JSON document of the form
    /// `{"settings_a": ..., "settings_b": ..., "table": [i][j][a][b]}` and
    /// validates it at `tol`. Errors cite the offending path.
    pub fn from_json_str(text: &str, tol: f64) -> Result<Self> {
        let v = json_util::parse_document(text)?;
        let scenario = Scenario::from_json_value(&v)?;
        let obj = json_util::as_object(&v, "<document>")?;
        let table_v = json_util::field(obj, "", "table")?;
        let behavior = parse_table(table_v, scenario)?;

        let report = behavior.validate(tol);
        if !report.ok {
            let (i, j, a, b) = report.offending_cells[0];
            return Err(Error::parse(
                format!("table[{i}][{j}][{}][{}]", a.index(), b.index()),
                format!(
                    "invalid probability table (max negativity {:.3e}, max normalization error {:.3e}, tolerance {:.3e})",
                    report.max_negativity, report.max_normalization_error, tol
                ),
            ));
        }
        Ok(behavior)
    }

    pub fn to_json_value(&self) -> Value {
        let (na, nb) = (self.scenario.na(), self.scenario.nb());
        let table: Vec<Value> = (0..na)
            .map(|i| {
                let row: Vec<Value> = (0..nb)
                    .map(|j| {
                        let [pp, pm, mp, mm] = self.cell(i, j);
                        json!([[pp, pm], [mp, mm]])
                    })
                    .collect();
                Value::Array(row)
            })
            .collect();
        let mut v = self.scenario.to_json_value();
        v.as_object_mut()
            .expect("scenario serializes to an object")
            .insert("table".to_string(), Value::Array(table));
        v
    }
}

fn parse_table(v: &Value, scenario: Scenario) -> Result<Behavior> {
    let (na, nb) = (scenario.na(), scenario.nb());
    let rows = json_util::as_array(v, "table")?;
    if rows.len() != na {
        return Err(Error::parse(
            "table",
            format!("expected {na} rows (one per A setting), got {}", rows.len()),
        ));
    }
    let mut table = Vec::with_capacity(na * nb * 4);
    for (i, row_v) in rows.iter().enumerate() {
        let rpath = format!("table[{i}]");
        let row = json_util::as_array(row_v, &rpath)?;
        if row.len() != nb {
            return Err(Error::parse(
                &rpath,
                format!("expected {nb} cells (one per B setting), got {}", row.len()),
            ));
        }
        for (j, cell_v) in row.iter().enumerate() {
            let cpath = format!("table[{i}][{j}]");
            let cell = json_util::as_array(cell_v, &cpath)?;
            if cell.len() != 2 {
                return Err(Error::parse(
                    &cpath,
                    format!("expected 2 outcome rows, got {}", cell.len()),
                ));
            }
            for (a, outcome_row_v) in cell.iter().enumerate() {
                let opath = format!("table[{i}][{j}][{a}]");
                let outcome_row = json_util::as_array(outcome_row_v, &opath)?;
                if outcome_row.len() != 2 {
                    return Err(Error::parse(
                        &opath,
                        format!("expected 2 entries, got {}", outcome_row.len()),
                    ));
                }
                for (b, p_v) in outcome_row.iter().enumerate() {
                    table.push(json_util::as_f64(p_v, &format!("{opath}[{b}]"))?);
                }
            }
        }
    }
    Behavior::new(scenario, table)
}
