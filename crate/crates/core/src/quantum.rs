//! Analytic singlet-state predictions.
//!
//! Two spin-1/2 particles in the singlet state, measured along directions `a` and
//! `b` with relative angle `θ`, produce joint outcomes with probabilities
//!
//! ```text
//! P(+,+) = P(-,-) = (1/2) sin²(θ/2)
//! P(+,-) = P(-,+) = (1/2) cos²(θ/2)
//! ```
//!
//! while every single-side marginal is exactly 1/2 regardless of either setting.
//! The signed correlation is `E = P(++) - P(+-) - P(-+) + P(--) = -cos θ`: perfect
//! anti-correlation at `θ = 0`, no correlation at `θ = π/2`, perfect correlation at
//! `θ = π`.
//!
//! The singlet state appears here only through these statistics; there is no
//! Hilbert-space machinery, because the statistics are the only load-bearing
//! content for every check in this crate.

use std::io::{self, Write};

use crate::rng::SplitMix64;
use crate::scenario::{angle_between, Behavior, MeasurementDirection, Outcome, Scenario};

/// Which side of the experiment a marginal refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Joint outcome probabilities for one setting pair.
///
/// Singlet symmetry makes the diagonal entries equal (`p_pp = p_mm`) and the
/// off-diagonal entries equal (`p_pm = p_mp`); the four always sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOutcomeProbabilities {
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
}

impl JointOutcomeProbabilities {
    pub fn sum(&self) -> f64 {
        self.p_pp + self.p_pm + self.p_mp + self.p_mm
    }

    /// Signed correlation `E = p_pp - p_pm - p_mp + p_mm`.
    pub fn correlation(&self) -> f64 {
        self.p_pp - self.p_pm - self.p_mp + self.p_mm
    }

    /// `P(A = a)` for this setting pair.
    pub fn marginal_a(&self, a: Outcome) -> f64 {
        match a {
            Outcome::Plus => self.p_pp + self.p_pm,
            Outcome::Minus => self.p_mp + self.p_mm,
        }
    }

    /// `P(B = b)` for this setting pair.
    pub fn marginal_b(&self, b: Outcome) -> f64 {
        match b {
            Outcome::Plus => self.p_pp + self.p_mp,
            Outcome::Minus => self.p_pm + self.p_mm,
        }
    }

    /// Cell in table order `(pp, pm, mp, mm)`.
    pub fn as_cell(&self) -> [f64; 4] {
        [self.p_pp, self.p_pm, self.p_mp, self.p_mm]
    }
}

/// Singlet joint probabilities as a function of the relative angle.
pub fn singlet_joint_from_angle(theta: f64) -> JointOutcomeProbabilities {
    let half = theta / 2.0;
    let same = 0.5 * half.sin().powi(2);
    let diff = 0.5 * half.cos().powi(2);
    JointOutcomeProbabilities {
        p_pp: same,
        p_pm: diff,
        p_mp: diff,
        p_mm: same,
    }
}

/// Singlet joint probabilities for measurements along `a` and `b`.
///
/// The angle is recomputed from the vectors on every call; it is cheap and can
/// never go stale.
pub fn singlet_joint(
    a: &MeasurementDirection,
    b: &MeasurementDirection,
) -> JointOutcomeProbabilities {
    singlet_joint_from_angle(angle_between(a, b))
}

/// Single-side outcome probability in the singlet state: exactly 1/2 for every
/// side, every outcome, and every analyzer direction.
pub fn singlet_marginal(_side: Side, _outcome: Outcome) -> f64 {
    0.5
}

/// Tabulates the singlet joint probabilities over every setting pair of a
/// scenario. The result passes [`Behavior::validate`] at 1e-12.
pub fn singlet_behavior(scenario: &Scenario) -> Behavior {
    Behavior::from_cells(scenario.clone(), |i, j| {
        singlet_joint(scenario.setting_a(i), scenario.setting_b(j)).as_cell()
    })
}

/// Signed singlet correlation `E(a, b) = -cos θ`, computed as the signed sum of
/// the joint probabilities.
pub fn correlation(a: &MeasurementDirection, b: &MeasurementDirection) -> f64 {
    singlet_joint(a, b).correlation()
}

/// Outcome-pair counts from a seeded sampling run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleCounts {
    pub n: u64,
    pub pp: u64,
    pub pm: u64,
    pub mp: u64,
    pub mm: u64,
    pub seed: u64,
}

impl SampleCounts {
    pub fn total(&self) -> u64 {
        self.pp + self.pm + self.mp + self.mm
    }
}

/// Draws `n` independent outcome pairs from the singlet distribution at setting
/// pair `(i, j)` of `scenario`.
///
/// Sampling is inverse-CDF over the four cells in `(pp, pm, mp, mm)` order with
/// strict `<` comparisons against a [`SplitMix64`] uniform variate, so a cell
/// with probability exactly zero is never drawn and identical `(inputs, seed)`
/// always give identical counts.
///
/// # Panics
///
/// Panics if `i` or `j` is out of range for the scenario.
pub fn sample_pairs(scenario: &Scenario, i: usize, j: usize, n: u64, seed: u64) -> SampleCounts {
    assert!(i < scenario.na(), "setting index i={i} out of range");
    assert!(j < scenario.nb(), "setting index j={j} out of range");
    let p = singlet_joint(scenario.setting_a(i), scenario.setting_b(j));
    let c1 = p.p_pp;
    let c2 = c1 + p.p_pm;
    let c3 = c2 + p.p_mp;

    let mut rng = SplitMix64::new(seed);
    let mut counts = [0u64; 4];
    for _ in 0..n {
        let u = rng.next_f64();
        let k = if u < c1 {
            0
        } else if u < c2 {
            1
        } else if u < c3 {
            2
        } else {
            3
        };
        counts[k] += 1;
    }
    SampleCounts {
        n,
        pp: counts[0],
        pm: counts[1],
        mp: counts[2],
        mm: counts[3],
        seed,
    }
}

/// Formats a float with 17 significant digits (exact f64 round trip).
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the singlet sweep CSV: header `theta_rad,p_pp,p_pm,p_mp,p_mm,E`, one
/// row per grid point, with `steps` points from `start` to `stop` inclusive
/// (`steps == 1` emits a single row at `start`). Values carry 17 significant
/// digits so repeated runs are byte-identical.
pub fn write_sweep_csv<W: Write>(mut out: W, start: f64, stop: f64, steps: usize) -> io::Result<()> {
    assert!(steps >= 1, "sweep needs at least one grid point");
    writeln!(out, "theta_rad,p_pp,p_pm,p_mp,p_mm,E")?;
    for t in 0..steps {
        let theta = if steps == 1 {
            start
        } else {
            start + (stop - start) * t as f64 / (steps - 1) as f64
        };
        let p = singlet_joint_from_angle(theta);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_g17(theta),
            fmt_g17(p.p_pp),
            fmt_g17(p.p_pm),
            fmt_g17(p.p_mp),
            fmt_g17(p.p_mm),
            fmt_g17(p.correlation()),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn dir(x: f64, y: f64, z: f64) -> MeasurementDirection {
        MeasurementDirection::new(x, y, z).unwrap()
    }

    #[test]
    fn joint_probabilities_at_reference_angles() {
        let p = singlet_joint_from_angle(0.0);
        assert_eq!(p.as_cell(), [0.0, 0.5, 0.5, 0.0]);

        let p = singlet_joint_from_angle(PI);
        assert!((p.p_pp - 0.5).abs() < 1e-12);
        assert!(p.p_pm.abs() < 1e-12);
        assert!(p.p_mp.abs() < 1e-12);
        assert!((p.p_mm - 0.5).abs() < 1e-12);

        // sin²(π/4) = cos²(π/4) = 1/2, so all four cells are 1/4.
        let p = singlet_joint_from_angle(FRAC_PI_2);
        for q in p.as_cell() {
            assert!((q - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_from_directions_matches_angle_form() {
        let z = dir(0.0, 0.0, 1.0);
        let x = dir(1.0, 0.0, 0.0);
        let p = singlet_joint(&z, &x);
        let q = singlet_joint_from_angle(FRAC_PI_2);
        assert_eq!(p, q);
    }

    #[test]
    fn marginals_are_exactly_one_half() {
        for side in [Side::A, Side::B] {
            for out in Outcome::BOTH {
                assert_eq!(singlet_marginal(side, out), 0.5);
            }
        }
        // Row sums of the joint table agree for every angle.
        for t in 0..=100 {
            let p = singlet_joint_from_angle(PI * t as f64 / 100.0);
            assert!((p.marginal_a(Outcome::Plus) - 0.5).abs() < 1e-12);
            assert!((p.marginal_b(Outcome::Minus) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_at_reference_angles() {
        let z = dir(0.0, 0.0, 1.0);
        let mz = dir(0.0, 0.0, -1.0);
        let x = dir(1.0, 0.0, 0.0);
        assert!((correlation(&z, &z) + 1.0).abs() < 1e-12);
        assert!(correlation(&z, &x).abs() < 1e-12);
        assert!((correlation(&z, &mz) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_two_routes_agree() {
        for t in 0..=1000 {
            let theta = PI * t as f64 / 1000.0;
            let from_table = singlet_joint_from_angle(theta).correlation();
            assert!((from_table + theta.cos()).abs() < 1e-12, "theta={theta}");
        }
    }

    #[test]
    fn singlet_behavior_is_valid_and_non_signalling() {
        let s = Scenario::new(
            vec![dir(0.0, 0.0, 1.0), dir(1.0, 0.0, 0.0)],
            vec![dir(1.0, 0.0, 1.0), dir(1.0, 0.0, -1.0)],
        )
        .unwrap();
        let b = singlet_behavior(&s);
        assert!(b.validate(1e-12).ok);
        let (da, db) = b.no_signalling_check();
        assert!(da < 1e-12 && db < 1e-12);
    }

    #[test]
    fn sampler_is_deterministic_and_exact_at_zero_probability() {
        let z = dir(0.0, 0.0, 1.0);
        let s = Scenario::new(vec![z], vec![z]).unwrap();

        let empty = sample_pairs(&s, 0, 0, 0, 7);
        assert_eq!((empty.pp, empty.pm, empty.mp, empty.mm), (0, 0, 0, 0));

        // θ=0: the (+,+) and (-,-) cells have probability exactly zero.
        let counts = sample_pairs(&s, 0, 0, 100_000, 42);
        assert_eq!(counts.pp, 0);
        assert_eq!(counts.mm, 0);
        assert_eq!(counts.total(), 100_000);

        let again = sample_pairs(&s, 0, 0, 100_000, 42);
        assert_eq!(counts, again);
        let other_seed = sample_pairs(&s, 0, 0, 100_000, 43);
        assert_ne!(counts, other_seed);
    }

    #[test]
    fn sweep_csv_shape_and_endpoints() {
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, 0.0, PI, 3).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "theta_rad,p_pp,p_pm,p_mp,p_mm,E");
        // E at θ ∈ {0, π/2, π} is {-1, 0, 1}.
        let e_of = |line: &str| line.rsplit(',').next().unwrap().parse::<f64>().unwrap();
        assert!((e_of(lines[1]) + 1.0).abs() < 1e-12);
        assert!(e_of(lines[2]).abs() < 1e-12);
        assert!((e_of(lines[3]) - 1.0).abs() < 1e-12);

        let mut single = Vec::new();
        write_sweep_csv(&mut single, 0.7, 2.0, 1).unwrap();
        assert_eq!(String::from_utf8(single).unwrap().lines().count(), 2);
    }
}
