//! Bell-locality conditions for hidden-state models, and the derivation engine.
//!
//! A hidden state λ is a complete specification of the particle pair before
//! measurement. A model is a finite mixture of such states; each state carries
//! either a joint conditional table `P(A,B | i, j, λ)` (general) or a pair of
//! local response tables `P(A | i, λ)`, `P(B | j, λ)` (local, product form by
//! construction).
//!
//! Three conditions are checked, all **per hidden state, never on the mixture**
//! — mixing local states produces correlations without any nonlocality, so
//! evaluating the mixture would be a category error:
//!
//! - **Parameter Independence (PI)**: a side's outcome distribution, given λ,
//!   does not depend on the distant *setting*.
//! - **Outcome Independence (OI)**: a side's outcome distribution, given λ and
//!   both settings, does not depend on the distant *outcome*.
//! - **Factorization (Bell locality)**: `P(A,B | i,j,λ) = P(A | i,j,λ) ·
//!   P(B | i,j,λ)` cell by cell. PI and OI together entail it.
//!
//! Deviations are max-norm: a single violated cell is enough to break the
//! logical chain, so averaging would only hide violations.
//!
//! [`epr_bell_derivation`] mechanizes the incompatibility argument: assume the
//! quantum state itself is the complete hidden state (completeness, premise C),
//! impose factorization (premise B), and substitute the uniform single-side
//! marginals (premise A2). Every joint probability is then forced to 1/4, which
//! contradicts the singlet joint predictions (premise A1) at every relative
//! angle other than π/2. At such angles, at least one of the four premises has
//! to go.
//!
//! Mixtures here have finite support. That is enough for the polytope analysis
//! in [`crate::lhv`], but a model over a continuum of hidden states can only be
//! approximated.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json_util;
use crate::quantum::{singlet_behavior, singlet_marginal, Side};
use crate::scenario::{Behavior, Outcome, Scenario};

/// Whether a model's states carry joint tables or local response tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    General,
    Local,
}

impl ModelKind {
    fn name(self) -> &'static str {
        match self {
            ModelKind::General => "general",
            ModelKind::Local => "local",
        }
    }
}

/// Joint conditional table `P(A, B | i, j)` carried by a general hidden state.
/// Same `[i][j][a][b]` layout as a behavior table.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    na: usize,
    nb: usize,
    probs: Vec<f64>,
}

impl JointTable {
    pub fn from_cells(na: usize, nb: usize, mut f: impl FnMut(usize, usize) -> [f64; 4]) -> Self {
        let mut probs = Vec::with_capacity(na * nb * 4);
        for i in 0..na {
            for j in 0..nb {
                probs.extend_from_slice(&f(i, j));
            }
        }
        Self { na, nb, probs }
    }

    pub fn prob(&self, i: usize, j: usize, a: Outcome, b: Outcome) -> f64 {
        self.probs[(i * self.nb + j) * 4 + a.index() * 2 + b.index()]
    }
}

/// Local response tables: `resp_a[i] = [P(A=+ | i), P(A=- | i)]` and likewise
/// for `resp_b`. The joint distribution of a local state is always the product
/// of the two.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTables {
    pub resp_a: Vec<[f64; 2]>,
    pub resp_b: Vec<[f64; 2]>,
}

/// A single hidden state.
#[derive(Debug, Clone, PartialEq)]
pub enum HiddenState {
    General(JointTable),
    Local(ResponseTables),
}

impl HiddenState {
    pub fn kind(&self) -> ModelKind {
        match self {
            HiddenState::General(_) => ModelKind::General,
            HiddenState::Local(_) => ModelKind::Local,
        }
    }

    /// `(na, nb)` the state's tables are defined over.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            HiddenState::General(t) => (t.na, t.nb),
            HiddenState::Local(r) => (r.resp_a.len(), r.resp_b.len()),
        }
    }

    /// `P(A = a, B = b | i, j)` under this state. For local states this is the
    /// product of the response probabilities.
    pub fn prob(&self, i: usize, j: usize, a: Outcome, b: Outcome) -> f64 {
        match self {
            HiddenState::General(t) => t.prob(i, j, a, b),
            HiddenState::Local(r) => r.resp_a[i][a.index()] * r.resp_b[j][b.index()],
        }
    }

    fn marginal_a(&self, i: usize, j: usize, a: Outcome) -> f64 {
        self.prob(i, j, a, Outcome::Plus) + self.prob(i, j, a, Outcome::Minus)
    }

    fn marginal_b(&self, i: usize, j: usize, b: Outcome) -> f64 {
        self.prob(i, j, Outcome::Plus, b) + self.prob(i, j, Outcome::Minus, b)
    }
}

/// A weighted hidden state in a mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub state: HiddenState,
}

/// A finite mixture of hidden states.
///
/// Weights are in `[0, 1]` and sum to 1; every component matches the declared
/// kind and shares the same table dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaModel {
    kind: ModelKind,
    components: Vec<Component>,
}

impl LambdaModel {
    /// Validates and wraps a mixture. `tol` bounds the weight-sum and
    /// row-normalization errors (1e-12 for analytic constructions, the user
    /// tolerance for ingested files).
    pub fn new(kind: ModelKind, components: Vec<Component>, tol: f64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidModel(
                "model must have at least one component".into(),
            ));
        }
        let dims = components[0].state.dims();
        let mut weight_sum = 0.0;
        for (k, c) in components.iter().enumerate() {
            if c.state.kind() != kind {
                return Err(Error::InvalidModel(format!(
                    "component {k} is {}, but the model kind is {}",
                    c.state.kind().name(),
                    kind.name()
                )));
            }
            if !(0.0..=1.0).contains(&c.weight) {
                return Err(Error::InvalidModel(format!(
                    "component {k} weight {} is outside [0, 1]",
                    c.weight
                )));
            }
            if c.state.dims() != dims {
                return Err(Error::InvalidModel(format!(
                    "component {k} has table dimensions {:?}, but component 0 has {:?}",
                    c.state.dims(),
                    dims
                )));
            }
            validate_state(k, &c.state, tol)?;
            weight_sum += c.weight;
        }
        if (weight_sum - 1.0).abs() > tol {
            return Err(Error::InvalidModel(format!(
                "component weights sum to {weight_sum}, must be 1 within tolerance {tol:e}"
            )));
        }
        Ok(Self { kind, components })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// `(na, nb)` of the component tables.
    pub fn dims(&self) -> (usize, usize) {
        self.components[0].state.dims()
    }

    /// Checks that the component tables cover exactly the scenario's settings.
    pub fn check_shape(&self, scenario: &Scenario) -> Result<()> {
        let (na, nb) = self.dims();
        if (na, nb) != (scenario.na(), scenario.nb()) {
            return Err(Error::shape(
                "model component tables",
                format!("{} x {} settings", scenario.na(), scenario.nb()),
                format!("{na} x {nb}"),
            ));
        }
        Ok(())
    }

    /// The single-component model in which the hidden state is nothing but the
    /// quantum state: its joint table is the singlet table over `scenario`.
    pub fn orthodox_singlet(scenario: &Scenario) -> Self {
        let b = singlet_behavior(scenario);
        let table = JointTable::from_cells(scenario.na(), scenario.nb(), |i, j| b.cell(i, j));
        Self {
            kind: ModelKind::General,
            components: vec![Component {
                weight: 1.0,
                state: HiddenState::General(table),
            }],
        }
    }

    /// Parses a model from JSON:
    ///
    /// ```json
    /// {"kind": "general", "components": [{"weight": 1.0, "joint": [[[[…]]]]}]}
    /// {"kind": "local",   "components": [{"weight": 0.5, "resp_a": [[1.0, 0.0]], "resp_b": [[0.0, 1.0]]}]}
    /// ```
    ///
    /// `joint` is indexed `[i][j][a][b]` like a behavior table; `resp_a[i]` and
    /// `resp_b[j]` are `[P(+), P(-)]` rows. Errors cite the offending path.
    pub fn from_json_str(text: &str, tol: f64) -> Result<Self> {
        let v = json_util::parse_document(text)?;
        let obj = json_util::as_object(&v, "<document>")?;

        let kind_v = json_util::field(obj, "", "kind")?;
        let kind = match kind_v.as_str() {
            Some("general") => ModelKind::General,
            Some("local") => ModelKind::Local,
            _ => {
                return Err(Error::parse("kind", "expected \"general\" or \"local\""));
            }
        };

        let comps_v = json_util::as_array(json_util::field(obj, "", "components")?, "components")?;
        let mut components = Vec::with_capacity(comps_v.len());
        for (k, comp_v) in comps_v.iter().enumerate() {
            let cpath = format!("components[{k}]");
            let comp = json_util::as_object(comp_v, &cpath)?;
            let weight = json_util::as_f64(
                json_util::field(comp, &cpath, "weight")?,
                &format!("{cpath}.weight"),
            )?;
            let state = match kind {
                ModelKind::General => {
                    let jpath = format!("{cpath}.joint");
                    let joint = json_util::field(comp, &cpath, "joint")?;
                    HiddenState::General(parse_joint(joint, &jpath)?)
                }
                ModelKind::Local => {
                    let resp_a = parse_response(
                        json_util::field(comp, &cpath, "resp_a")?,
                        &format!("{cpath}.resp_a"),
                    )?;
                    let resp_b = parse_response(
                        json_util::field(comp, &cpath, "resp_b")?,
                        &format!("{cpath}.resp_b"),
                    )?;
                    HiddenState::Local(ResponseTables { resp_a, resp_b })
                }
            };
            components.push(Component { weight, state });
        }
        Self::new(kind, components, tol)
    }
}

fn validate_state(component: usize, state: &HiddenState, tol: f64) -> Result<()> {
    let bad_row = |what: String, sum: f64| {
        Error::InvalidModel(format!(
            "component {component} {what} sums to {sum}, must be 1 within tolerance {tol:e}"
        ))
    };
    match state {
        HiddenState::General(t) => {
            for (idx, &p) in t.probs.iter().enumerate() {
                if p < 0.0 {
                    return Err(Error::InvalidModel(format!(
                        "component {component} joint entry {idx} is negative ({p})"
                    )));
                }
            }
            for i in 0..t.na {
                for j in 0..t.nb {
                    let sum: f64 = Outcome::BOTH
                        .iter()
                        .flat_map(|&a| Outcome::BOTH.iter().map(move |&b| t.prob(i, j, a, b)))
                        .sum();
                    if (sum - 1.0).abs() > tol {
                        return Err(bad_row(format!("joint cell ({i}, {j})"), sum));
                    }
                }
            }
        }
        HiddenState::Local(r) => {
            for (name, rows) in [("resp_a", &r.resp_a), ("resp_b", &r.resp_b)] {
                if rows.is_empty() {
                    return Err(Error::InvalidModel(format!(
                        "component {component} {name} must be non-empty"
                    )));
                }
                for (i, row) in rows.iter().enumerate() {
                    if row[0] < 0.0 || row[1] < 0.0 {
                        return Err(Error::InvalidModel(format!(
                            "component {component} {name}[{i}] has a negative entry"
                        )));
                    }
                    let sum = row[0] + row[1];
                    if (sum - 1.0).abs() > tol {
                        return Err(bad_row(format!("{name}[{i}]"), sum));
                    }
                }
            }
        }
    }
    Ok(())
}

fn parse_joint(v: &Value, path: &str) -> Result<JointTable> {
    let rows = json_util::as_array(v, path)?;
    if rows.is_empty() {
        return Err(Error::parse(path, "joint table must be non-empty"));
    }
    let na = rows.len();
    let mut nb = None;
    let mut probs = Vec::new();
    for (i, row_v) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = json_util::as_array(row_v, &rpath)?;
        match nb {
            None => {
                if row.is_empty() {
                    return Err(Error::parse(&rpath, "joint table rows must be non-empty"));
                }
                nb = Some(row.len());
            }
            Some(nb) if row.len() != nb => {
                return Err(Error::parse(
                    &rpath,
                    format!("expected {nb} cells like row 0, got {}", row.len()),
                ));
            }
            _ => {}
        }
        for (j, cell_v) in row.iter().enumerate() {
            let cpath = format!("{rpath}[{j}]");
            let cell = json_util::as_array(cell_v, &cpath)?;
            if cell.len() != 2 {
                return Err(Error::parse(
                    &cpath,
                    format!("expected 2 outcome rows, got {}", cell.len()),
                ));
            }
            for (a, or_v) in cell.iter().enumerate() {
                let opath = format!("{cpath}[{a}]");
                let outcome_row = json_util::as_array(or_v, &opath)?;
                if outcome_row.len() != 2 {
                    return Err(Error::parse(
                        &opath,
                        format!("expected 2 entries, got {}", outcome_row.len()),
                    ));
                }
                for (b, p_v) in outcome_row.iter().enumerate() {
                    probs.push(json_util::as_f64(p_v, &format!("{opath}[{b}]"))?);
                }
            }
        }
    }
    Ok(JointTable {
        na,
        nb: nb.expect("non-empty table"),
        probs,
    })
}

fn parse_response(v: &Value, path: &str) -> Result<Vec<[f64; 2]>> {
    let rows = json_util::as_array(v, path)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row_v) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = json_util::as_array(row_v, &rpath)?;
        if row.len() != 2 {
            return Err(Error::parse(
                &rpath,
                format!("expected [P(+), P(-)], got {} entries", row.len()),
            ));
        }
        out.push([
            json_util::as_f64(&row[0], &format!("{rpath}[0]"))?,
            json_util::as_f64(&row[1], &format!("{rpath}[1]"))?,
        ]);
    }
    Ok(out)
}

/// Where the largest factorization deviation occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub component: usize,
    pub i: usize,
    pub j: usize,
    pub a: Outcome,
    pub b: Outcome,
}

/// Quantified deviations from PI, OI, and factorization, maximized over
/// components and cells.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    pub pi_deviation: f64,
    pub oi_deviation: f64,
    pub factorization_deviation: f64,
    pub worst_witness: Witness,
}

impl LocalityReport {
    /// Bell locality holds exactly when all three deviations are within `tol`.
    pub fn bell_locality_holds(&self, tol: f64) -> bool {
        self.pi_deviation <= tol && self.oi_deviation <= tol && self.factorization_deviation <= tol
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "pi_deviation": self.pi_deviation,
            "oi_deviation": self.oi_deviation,
            "factorization_deviation": self.factorization_deviation,
            "worst_witness": {
                "component": self.worst_witness.component,
                "i": self.worst_witness.i,
                "j": self.worst_witness.j,
                "a": self.worst_witness.a.value(),
                "b": self.worst_witness.b.value(),
            },
        })
    }

    pub fn render_text(&self, tol: f64) -> String {
        let w = &self.worst_witness;
        format!(
            "locality check (per hidden state, max over components and cells)\n\
             \x20 PI deviation:            {:.6e}\n\
             \x20 OI deviation:            {:.6e}\n\
             \x20 factorization deviation: {:.6e}  (worst at component {}, i={}, j={}, A={}, B={})\n\
             \x20 Bell locality holds at tol {:e}: {}",
            self.pi_deviation,
            self.oi_deviation,
            self.factorization_deviation,
            w.component,
            w.i,
            w.j,
            w.a,
            w.b,
            tol,
            self.bell_locality_holds(tol),
        )
    }
}

/// Parameter Independence deviation: the largest change of one side's outcome
/// distribution under a change of the *distant setting*, per component.
///
/// # Panics
///
/// Panics if the model's tables do not match the scenario's setting counts.
pub fn pi_check(model: &LambdaModel, scenario: &Scenario) -> f64 {
    model
        .check_shape(scenario)
        .expect("model tables must match the scenario");
    let (na, nb) = (scenario.na(), scenario.nb());
    let mut dev: f64 = 0.0;
    for c in model.components() {
        // A's distribution must not depend on j...
        for i in 0..na {
            for a in Outcome::BOTH {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for j in 0..nb {
                    let m = c.state.marginal_a(i, j, a);
                    lo = lo.min(m);
                    hi = hi.max(m);
                }
                dev = dev.max(hi - lo);
            }
        }
        // ...nor B's on i.
        for j in 0..nb {
            for b in Outcome::BOTH {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for i in 0..na {
                    let m = c.state.marginal_b(i, j, b);
                    lo = lo.min(m);
                    hi = hi.max(m);
                }
                dev = dev.max(hi - lo);
            }
        }
    }
    dev
}

/// Outcome Independence deviation: the largest change of one side's outcome
/// distribution under conditioning on the *distant outcome*, per component.
///
/// Conditionals are only evaluated where the conditioning event has probability
/// above `tol`; below that they are undefined and skipped, never treated as 0
/// or 1.
///
/// # Panics
///
/// Panics if the model's tables do not match the scenario's setting counts.
pub fn oi_check(model: &LambdaModel, scenario: &Scenario, tol: f64) -> f64 {
    model
        .check_shape(scenario)
        .expect("model tables must match the scenario");
    let (na, nb) = (scenario.na(), scenario.nb());
    let mut dev: f64 = 0.0;
    for c in model.components() {
        for i in 0..na {
            for j in 0..nb {
                for a in Outcome::BOTH {
                    for b in Outcome::BOTH {
                        let joint = c.state.prob(i, j, a, b);
                        let pa = c.state.marginal_a(i, j, a);
                        let pb = c.state.marginal_b(i, j, b);
                        if pb > tol {
                            dev = dev.max((joint / pb - pa).abs());
                        }
                        if pa > tol {
                            dev = dev.max((joint / pa - pb).abs());
                        }
                    }
                }
            }
        }
    }
    dev
}

/// Full factorization check: `|P(A,B | i,j,λ) - P(A | i,j,λ) · P(B | i,j,λ)|`
/// maximized over components and cells, bundled with the PI and OI deviations.
///
/// Bell locality holds exactly when all three deviations are within `tol`;
/// factorization is evaluated per component — the mixture itself is never
/// tested.
///
/// # Panics
///
/// Panics if the model's tables do not match the scenario's setting counts.
pub fn factorization_check(model: &LambdaModel, scenario: &Scenario, tol: f64) -> LocalityReport {
    model
        .check_shape(scenario)
        .expect("model tables must match the scenario");
    let (na, nb) = (scenario.na(), scenario.nb());
    let mut dev: f64 = 0.0;
    let mut worst = Witness {
        component: 0,
        i: 0,
        j: 0,
        a: Outcome::Plus,
        b: Outcome::Plus,
    };
    for (k, c) in model.components().iter().enumerate() {
        for i in 0..na {
            for j in 0..nb {
                for a in Outcome::BOTH {
                    for b in Outcome::BOTH {
                        let joint = c.state.prob(i, j, a, b);
                        let product = c.state.marginal_a(i, j, a) * c.state.marginal_b(i, j, b);
                        let d = (joint - product).abs();
                        if d > dev {
                            dev = d;
                            worst = Witness {
                                component: k,
                                i,
                                j,
                                a,
                                b,
                            };
                        }
                    }
                }
            }
        }
    }
    LocalityReport {
        pi_deviation: pi_check(model, scenario),
        oi_deviation: oi_check(model, scenario, tol),
        factorization_deviation: dev,
        worst_witness: worst,
    }
}

/// Outcome of mechanically combining the four premises on a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationReport {
    /// The table forced by factorization + completeness + uniform marginals:
    /// every cell is 1/4.
    pub factorized_table: Behavior,
    /// The singlet predictions over the same scenario.
    pub qm_table: Behavior,
    pub max_cell_deviation: f64,
    pub worst_cell: (usize, usize, Outcome, Outcome),
    pub inconsistent: bool,
    pub verdict: String,
}

/// Combines factorization (premise B) with completeness (premise C: the hidden
/// state is the quantum state alone) and the uniform marginals (premise A2),
/// then compares the forced all-1/4 table against the singlet joint predictions
/// (premise A1).
///
/// The tables disagree at every setting pair whose relative angle differs from
/// π/2; `inconsistent` is true when the largest cell deviation exceeds `tol`,
/// and the verdict names the four premises, at least one of which must then be
/// false.
pub fn epr_bell_derivation(scenario: &Scenario, tol: f64) -> DerivationReport {
    // B + C turn every joint probability into a product of single-side
    // marginals conditioned on the quantum state; A2 fixes each factor at 1/2.
    let factorized_table = Behavior::from_cells(scenario.clone(), |_, _| {
        let pa_plus = singlet_marginal(Side::A, Outcome::Plus);
        let pa_minus = singlet_marginal(Side::A, Outcome::Minus);
        let pb_plus = singlet_marginal(Side::B, Outcome::Plus);
        let pb_minus = singlet_marginal(Side::B, Outcome::Minus);
        [
            pa_plus * pb_plus,
            pa_plus * pb_minus,
            pa_minus * pb_plus,
            pa_minus * pb_minus,
        ]
    });
    let qm_table = singlet_behavior(scenario);

    let mut max_cell_deviation: f64 = 0.0;
    let mut worst_cell = (0, 0, Outcome::Plus, Outcome::Plus);
    for i in 0..scenario.na() {
        for j in 0..scenario.nb() {
            for a in Outcome::BOTH {
                for b in Outcome::BOTH {
                    let d = (qm_table.prob(i, j, a, b) - factorized_table.prob(i, j, a, b)).abs();
                    if d > max_cell_deviation {
                        max_cell_deviation = d;
                        worst_cell = (i, j, a, b);
                    }
                }
            }
        }
    }

    let inconsistent = max_cell_deviation > tol;
    let (wi, wj, wa, wb) = worst_cell;
    let verdict = if inconsistent {
        format!(
            "inconsistent: factorization (B) plus completeness (C) force every joint \
             probability to 0.25, but the singlet joint predictions (A1) differ by \
             {max_cell_deviation:.6e} at setting pair (i={wi}, j={wj}), outcomes \
             (A={wa}, B={wb}). At least one of the premises must be false: A1 (singlet \
             joint probabilities), A2 (uniform single-side marginals), B (per-state \
             factorization), or C (completeness: the hidden state is the quantum state \
             alone)."
        )
    } else {
        format!(
            "consistent: the factorized table built from A2 (uniform single-side \
             marginals), B (per-state factorization), and C (completeness) matches the \
             singlet joint predictions (A1) within {tol:e} at every setting pair of \
             this scenario."
        )
    };

    DerivationReport {
        factorized_table,
        qm_table,
        max_cell_deviation,
        worst_cell,
        inconsistent,
        verdict,
    }
}

impl DerivationReport {
    pub fn to_json_value(&self) -> Value {
        let (i, j, a, b) = self.worst_cell;
        json!({
            "factorized_table": self.factorized_table.to_json_value(),
            "qm_table": self.qm_table.to_json_value(),
            "max_cell_deviation": self.max_cell_deviation,
            "worst_cell": {"i": i, "j": j, "a": a.value(), "b": b.value()},
            "inconsistent": self.inconsistent,
            "verdict": self.verdict,
        })
    }

    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let s = self.qm_table.scenario();
        let _ = writeln!(
            out,
            "derivation over {} x {} settings (factorized cells are all 0.25):",
            s.na(),
            s.nb()
        );
        for i in 0..s.na() {
            for j in 0..s.nb() {
                let [pp, pm, mp, mm] = self.qm_table.cell(i, j);
                let theta = crate::scenario::angle_between(s.setting_a(i), s.setting_b(j));
                let _ = writeln!(
                    out,
                    "  (i={i}, j={j}) theta={theta:.6} rad  singlet: P(++)={pp:.6} \
                     P(+-)={pm:.6} P(-+)={mp:.6} P(--)={mm:.6}"
                );
            }
        }
        let (wi, wj, wa, wb) = self.worst_cell;
        let _ = writeln!(
            out,
            "max cell deviation: {:.12e} at (i={wi}, j={wj}, A={wa}, B={wb})",
            self.max_cell_deviation
        );
        let _ = writeln!(out, "inconsistent: {}", self.inconsistent);
        let _ = write!(out, "verdict: {}", self.verdict);
        out
    }
}
