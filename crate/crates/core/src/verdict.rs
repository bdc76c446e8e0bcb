//! Parameter-regime analysis and the end-to-end decision: combine the
//! necessity of the deleted product criterion (a nonvanishing obstruction
//! class forbids an almost r-embedding for all parameters) with its
//! sufficiency in the r-metastable range, and report the outcome with a
//! machine-checkable certificate.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::delprod::DeletedProduct;
use crate::error::{Error, Result};
use crate::genmaps::{assemble_cocycle, sample_map_generic};
use crate::obstruction::{
    build_equivariant_system, decide_system, verify_nonvanishing, verify_witness, ClassDecision,
};

/// The r-metastable range: r d >= (r+1) m + 3.
pub fn check_metastable(m: i64, d: i64, r: i64) -> bool {
    r * d >= (r + 1) * m + 3
}

/// Parameter regimes, determined by (m, d, r) alone.
///
/// When (r-1)d > rm a map in general position has no r-fold points at all
/// and an equivariant map exists for dimension reasons; the regime is
/// labelled by the stronger conclusion available: `TrivialMapExists` inside
/// the metastable range (where sufficiency applies), `NoRFoldGeneric`
/// outside it (where the generic map itself is the witness). At
/// rm = d(r-1) the primary obstruction decides completely (`Critical`);
/// beyond, its vanishing is necessary but not sufficient
/// (`HigherObstruction`).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Regime {
    NoRFoldGeneric,
    TrivialMapExists,
    Critical,
    HigherObstruction,
}

pub fn regime(m: i64, d: i64, r: i64) -> Regime {
    if (r - 1) * d > r * m {
        if check_metastable(m, d, r) {
            Regime::TrivialMapExists
        } else {
            Regime::NoRFoldGeneric
        }
    } else if r * m == d * (r - 1) {
        Regime::Critical
    } else {
        Regime::HigherObstruction
    }
}

/// Record of the raw inequality checks backing the regime.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct RangeChecks {
    pub metastable: bool,
    pub no_rfold_generic: bool,
    pub trivial_map_exists: bool,
    pub critical: bool,
}

impl RangeChecks {
    pub fn new(m: i64, d: i64, r: i64) -> Self {
        Self {
            metastable: check_metastable(m, d, r),
            no_rfold_generic: (r - 1) * d > r * m,
            trivial_map_exists: r * m <= d * (r - 1) - 1,
            critical: r * m == d * (r - 1),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Outcome {
    AlmostREmbeddable,
    NotAlmostREmbeddable,
    Undecided,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct WitnessEntry {
    pub orbit: String,
    pub value: String,
}

/// The certificate attached to a verdict.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertificateReport {
    /// A regime argument settles the instance without computation.
    Regime { reason: String },
    /// An equivariant cochain on subcritical orbits with coboundary equal
    /// to the intersection cocycle.
    CoboundaryWitness { entries: Vec<WitnessEntry> },
    /// A row combination proving the integer system unsolvable.
    Nonvanishing {
        row: usize,
        divisor: String,
        value: String,
        combination: Vec<String>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ObstructionReport {
    pub critical_orbits: usize,
    pub subcritical_orbits: usize,
    pub cocycle_support: usize,
    pub vanishes: bool,
    /// Whether an equivariant map from the deleted product to the sphere
    /// exists: known false on nonvanishing, known true on vanishing in the
    /// critical regime, unknown otherwise.
    pub equivariant_map_exists: Option<bool>,
    pub certificate: CertificateReport,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct InputSummary {
    pub path: Option<String>,
    pub vertices: usize,
    pub simplices: usize,
}

/// A machine-readable decision report; reproducible given (input, seed,
/// version) apart from the timing block.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub input: InputSummary,
    pub r: usize,
    pub d: usize,
    pub m: i64,
    pub seed: u64,
    pub regime: Regime,
    pub checks: RangeChecks,
    pub obstruction: Option<ObstructionReport>,
    pub verdict: Outcome,
    pub reason: String,
    pub timings_ms: BTreeMap<String, u128>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Clears the timing block, making reports byte-reproducible.
    pub fn strip_timings(&mut self) {
        self.timings_ms.clear();
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("verdict: {:?}\n", self.verdict));
        out.push_str(&format!("regime: {:?}\n", self.regime));
        out.push_str(&format!("reason: {}\n", self.reason));
        out.push_str(&format!(
            "input: {} ({} vertices, {} simplices, dim {})\n",
            self.input.path.as_deref().unwrap_or("-"),
            self.input.vertices,
            self.input.simplices,
            self.m
        ));
        out.push_str(&format!("r={} d={} seed={}\n", self.r, self.d, self.seed));
        out.push_str(&format!(
            "checks: metastable={} no_rfold_generic={} trivial_map_exists={} critical={}\n",
            self.checks.metastable,
            self.checks.no_rfold_generic,
            self.checks.trivial_map_exists,
            self.checks.critical
        ));
        if let Some(ob) = &self.obstruction {
            out.push_str(&format!(
                "obstruction: critical_orbits={} subcritical_orbits={} cocycle_support={} vanishes={}\n",
                ob.critical_orbits, ob.subcritical_orbits, ob.cocycle_support, ob.vanishes
            ));
            match &ob.certificate {
                CertificateReport::Regime { reason } => {
                    out.push_str(&format!("certificate: regime ({reason})\n"));
                }
                CertificateReport::CoboundaryWitness { entries } => {
                    out.push_str("certificate: coboundary witness\n");
                    for e in entries {
                        out.push_str(&format!("{}\t{}\n", e.orbit, e.value));
                    }
                }
                CertificateReport::Nonvanishing {
                    row,
                    divisor,
                    value,
                    ..
                } => {
                    out.push_str(&format!(
                        "certificate: nonvanishing at SNF row {row}, divisor {divisor}, value {value}\n"
                    ));
                }
            }
        }
        for (k, v) in &self.timings_ms {
            out.push_str(&format!("time[{k}]: {v} ms\n"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    pub r: usize,
    pub d: usize,
    pub seed: u64,
    pub source: Option<String>,
}

/// Decides almost r-embeddability of `k` into R^d.
///
/// Decision tree: a regime with no generic r-fold points answers yes
/// outright; otherwise the intersection cocycle of a sampled generic map is
/// computed and its equivariant class decided. Nonvanishing answers no for
/// all parameters; vanishing answers yes only in the critical regime inside
/// the metastable range, and is reported as undecided otherwise.
pub fn decide(k: &SimplicialComplex, opts: &DecideOptions) -> Result<Report> {
    if opts.r < 2 {
        return Err(Error::Parameter(format!("r must be >= 2, got {}", opts.r)));
    }
    if opts.d < 1 {
        return Err(Error::Parameter("d must be >= 1".into()));
    }
    if k.is_empty() {
        return Err(Error::Parameter("cannot decide the empty complex".into()));
    }
    let start = Instant::now();
    let (r, d) = (opts.r, opts.d);
    let m = k.dim();
    let checks = RangeChecks::new(m, d as i64, r as i64);
    let reg = regime(m, d as i64, r as i64);
    let input = InputSummary {
        path: opts.source.clone(),
        vertices: k.vertices().len(),
        simplices: k.len(),
    };
    let mut timings = BTreeMap::new();

    let report = |verdict: Outcome,
                  reason: String,
                  obstruction: Option<ObstructionReport>,
                  timings: BTreeMap<String, u128>| Report {
        schema: 1,
        input: input.clone(),
        r,
        d,
        m,
        seed: opts.seed,
        regime: reg,
        checks,
        obstruction,
        verdict,
        reason,
        timings_ms: timings,
    };

    match reg {
        Regime::NoRFoldGeneric => {
            timings.insert("total".into(), start.elapsed().as_millis());
            Ok(report(
                Outcome::AlmostREmbeddable,
                "(r-1)d > rm: a map in general position has no r-fold points, so it is itself \
                 an almost r-embedding"
                    .into(),
                None,
                timings,
            ))
        }
        Regime::TrivialMapExists => {
            timings.insert("total".into(), start.elapsed().as_millis());
            Ok(report(
                Outcome::AlmostREmbeddable,
                "rm <= d(r-1)-1: an equivariant map to the sphere exists for dimension \
                 reasons, and the deleted product criterion is sufficient in the metastable \
                 range"
                    .into(),
                None,
                timings,
            ))
        }
        Regime::Critical | Regime::HigherObstruction => {
            let critical = d * (r - 1);
            let t = Instant::now();
            let x = DeletedProduct::build_range(k, r, critical.saturating_sub(1), critical + 1)?;
            timings.insert("build".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let f = sample_map_generic(k, &x, d, opts.seed)?;
            timings.insert("sample".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let cocycle = assemble_cocycle(&f, &x)?;
            timings.insert("cocycle".into(), t.elapsed().as_millis());

            let t = Instant::now();
            let system = build_equivariant_system(&x, &cocycle)?;
            let decision = decide_system(&x, &cocycle, &system);
            timings.insert("solve".into(), t.elapsed().as_millis());

            let summary_base = (
                system.critical_reps.len(),
                system.subcritical_reps.len(),
                cocycle.support_size(),
            );

            let out = match decision {
                ClassDecision::DoesNotVanish(cert) => {
                    if !verify_nonvanishing(&system, &cert) {
                        return Err(Error::Genericity(
                            "internal: nonvanishing certificate failed verification".into(),
                        ));
                    }
                    let ob = ObstructionReport {
                        critical_orbits: summary_base.0,
                        subcritical_orbits: summary_base.1,
                        cocycle_support: summary_base.2,
                        vanishes: false,
                        equivariant_map_exists: Some(false),
                        certificate: CertificateReport::Nonvanishing {
                            row: cert.row,
                            divisor: cert.divisor.to_string(),
                            value: cert.value.to_string(),
                            combination: cert.combination.iter().map(|v| v.to_string()).collect(),
                        },
                    };
                    timings.insert("total".into(), start.elapsed().as_millis());
                    report(
                        Outcome::NotAlmostREmbeddable,
                        "the obstruction class of the intersection cocycle does not vanish; \
                         by necessity of the deleted product criterion no almost r-embedding \
                         exists (valid for all parameters)"
                            .into(),
                        Some(ob),
                        timings,
                    )
                }
                ClassDecision::Vanishes(witness) => {
                    if !verify_witness(&x, &cocycle, &witness) {
                        return Err(Error::Genericity(
                            "internal: coboundary witness failed verification".into(),
                        ));
                    }
                    let entries = witness
                        .assignment
                        .iter()
                        .map(|(orbit, v)| WitnessEntry {
                            orbit: orbit.to_string(),
                            value: v.to_string(),
                        })
                        .collect();
                    let (verdict, reason, eq_exists) = match (reg, checks.metastable) {
                        (Regime::Critical, true) => (
                            Outcome::AlmostREmbeddable,
                            "the obstruction class vanishes, the primary obstruction is \
                             complete at rm = d(r-1), and the metastable range makes the \
                             equivariant map sufficient"
                                .to_string(),
                            Some(true),
                        ),
                        (Regime::Critical, false) => (
                            Outcome::Undecided,
                            "the obstruction class vanishes and an equivariant map exists \
                             (rm = d(r-1)), but outside the metastable range sufficiency is \
                             unavailable"
                                .to_string(),
                            Some(true),
                        ),
                        _ => (
                            Outcome::Undecided,
                            "the primary obstruction vanishes, but rm > d(r-1): higher \
                             obstructions would be required to decide existence of an \
                             equivariant map"
                                .to_string(),
                            None,
                        ),
                    };
                    let ob = ObstructionReport {
                        critical_orbits: summary_base.0,
                        subcritical_orbits: summary_base.1,
                        cocycle_support: summary_base.2,
                        vanishes: true,
                        equivariant_map_exists: eq_exists,
                        certificate: CertificateReport::CoboundaryWitness { entries },
                    };
                    timings.insert("total".into(), start.elapsed().as_millis());
                    report(verdict, reason, Some(ob), timings)
                }
            };
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{complete_bipartite, full_simplex, simplex_skeleton, Simplex};

    #[test]
    fn metastable_examples() {
        assert!(check_metastable(1, 3, 2)); // 6 >= 6
        assert!(!check_metastable(1, 2, 2)); // 4 < 6
        assert!(check_metastable(2, 5, 3)); // 15 >= 11
    }

    #[test]
    fn regime_examples() {
        assert_eq!(regime(1, 3, 2), Regime::TrivialMapExists);
        assert_eq!(regime(1, 2, 2), Regime::Critical);
        assert_eq!(regime(4, 1, 3), Regime::HigherObstruction);
        // Outside the metastable range but with no generic r-fold points:
        // a graph with three pairwise disjoint edges into the plane, r = 3.
        assert_eq!(regime(1, 2, 3), Regime::NoRFoldGeneric);
    }

    #[test]
    fn regime_matches_direct_inequality_evaluation() {
        for m in 0..=20i64 {
            for d in 1..=20i64 {
                for r in 2..=6i64 {
                    let reg = regime(m, d, r);
                    let no_rfold = (r - 1) * d > r * m;
                    let meta = r * d >= (r + 1) * m + 3;
                    let expected = if no_rfold && meta {
                        Regime::TrivialMapExists
                    } else if no_rfold {
                        Regime::NoRFoldGeneric
                    } else if r * m == d * (r - 1) {
                        Regime::Critical
                    } else {
                        Regime::HigherObstruction
                    };
                    assert_eq!(reg, expected, "m={m} d={d} r={r}");
                }
            }
        }
    }

    fn opts(r: usize, d: usize, seed: u64) -> DecideOptions {
        DecideOptions {
            r,
            d,
            seed,
            source: None,
        }
    }

    #[test]
    fn k5_in_the_plane_is_not_almost_embeddable() {
        let k5 = simplex_skeleton(4, 1);
        let report = decide(&k5, &opts(2, 2, 1)).unwrap();
        assert_eq!(report.verdict, Outcome::NotAlmostREmbeddable);
        assert_eq!(report.regime, Regime::Critical);
        let ob = report.obstruction.unwrap();
        assert!(!ob.vanishes);
        assert_eq!(ob.equivariant_map_exists, Some(false));
        assert!(matches!(
            ob.certificate,
            CertificateReport::Nonvanishing { .. }
        ));
    }

    #[test]
    fn k5_in_three_space_is_almost_embeddable() {
        let k5 = simplex_skeleton(4, 1);
        let report = decide(&k5, &opts(2, 3, 1)).unwrap();
        assert_eq!(report.verdict, Outcome::AlmostREmbeddable);
        assert_eq!(report.regime, Regime::TrivialMapExists);
        assert!(report.checks.metastable);
        assert!(report.obstruction.is_none());
    }

    #[test]
    fn tverberg_sigma4_r3_on_the_line() {
        let k = full_simplex(4);
        let report = decide(&k, &opts(3, 1, 1)).unwrap();
        assert_eq!(report.verdict, Outcome::NotAlmostREmbeddable);
    }

    #[test]
    fn radon_sigma3_in_the_plane() {
        let k = full_simplex(3);
        let report = decide(&k, &opts(2, 2, 1)).unwrap();
        assert_eq!(report.verdict, Outcome::NotAlmostREmbeddable);
    }

    #[test]
    fn complexes_containing_a_hard_instance_stay_hard() {
        // Restriction to a subcomplex maps coboundaries to coboundaries, so
        // nonvanishing propagates upward: K_6 contains K_5, and sigma^4
        // contains the Radon instance sigma^3.
        let k6 = simplex_skeleton(5, 1);
        assert_eq!(
            decide(&k6, &opts(2, 2, 1)).unwrap().verdict,
            Outcome::NotAlmostREmbeddable
        );
        let s4 = full_simplex(4);
        assert_eq!(
            decide(&s4, &opts(2, 2, 1)).unwrap().verdict,
            Outcome::NotAlmostREmbeddable
        );
    }

    #[test]
    fn k33_in_the_plane_is_not_almost_embeddable() {
        let k33 = complete_bipartite(3, 3);
        let report = decide(&k33, &opts(2, 2, 1)).unwrap();
        assert_eq!(report.verdict, Outcome::NotAlmostREmbeddable);
    }

    #[test]
    fn planar_graph_in_the_plane_is_undecided_outside_metastable() {
        // K_4 is planar; the obstruction vanishes but d=2, m=1 lies outside
        // the metastable range, so sufficiency is unavailable.
        let k4 = simplex_skeleton(3, 1);
        let report = decide(&k4, &opts(2, 2, 1)).unwrap();
        assert_eq!(report.verdict, Outcome::Undecided);
        let ob = report.obstruction.unwrap();
        assert!(ob.vanishes);
        assert_eq!(ob.equivariant_map_exists, Some(true));
    }

    #[test]
    fn two_disjoint_tetrahedra_in_r6_embed_via_witness() {
        // Critical regime with the metastable range satisfied: rm = 6 =
        // d(r-1) and 12 >= 12. The class vanishes and the verdict is yes by
        // the sufficiency direction, carrying a verified witness.
        let k =
            SimplicialComplex::closure(&[Simplex::of(&[0, 1, 2, 3]), Simplex::of(&[4, 5, 6, 7])]);
        let report = decide(&k, &opts(2, 6, 1)).unwrap();
        assert_eq!(report.regime, Regime::Critical);
        assert!(report.checks.metastable);
        assert_eq!(report.verdict, Outcome::AlmostREmbeddable);
        let ob = report.obstruction.unwrap();
        assert!(ob.vanishes);
        assert!(matches!(
            ob.certificate,
            CertificateReport::CoboundaryWitness { .. }
        ));
    }

    #[test]
    fn equal_seeds_give_identical_reports() {
        let k5 = simplex_skeleton(4, 1);
        let mut a = decide(&k5, &opts(2, 2, 9)).unwrap();
        let mut b = decide(&k5, &opts(2, 2, 9)).unwrap();
        a.strip_timings();
        b.strip_timings();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn seed_invariance_of_the_verdict() {
        let k5 = simplex_skeleton(4, 1);
        let first = decide(&k5, &opts(2, 2, 1)).unwrap().verdict;
        for seed in 2..6 {
            assert_eq!(decide(&k5, &opts(2, 2, seed)).unwrap().verdict, first);
        }
    }

    #[test]
    fn higher_obstruction_with_no_cells_stays_undecided() {
        // A single edge with r = 3: no three pairwise disjoint simplices
        // exist, so the primary obstruction vanishes trivially; rm > d(r-1)
        // keeps the verdict honest rather than promoting it to yes.
        let edge = SimplicialComplex::closure(&[Simplex::of(&[0, 1])]);
        let report = decide(&edge, &opts(3, 1, 1)).unwrap();
        assert_eq!(report.regime, Regime::HigherObstruction);
        assert_eq!(report.verdict, Outcome::Undecided);
        assert!(report.obstruction.unwrap().vanishes);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let k5 = simplex_skeleton(4, 1);
        assert!(decide(&k5, &opts(1, 2, 1)).is_err());
        assert!(decide(&k5, &opts(2, 0, 1)).is_err());
        assert!(decide(&SimplicialComplex::empty(), &opts(2, 2, 1)).is_err());
    }

    #[test]
    fn json_report_has_the_required_keys() {
        let k5 = simplex_skeleton(4, 1);
        let report = decide(&k5, &opts(2, 2, 1)).unwrap();
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in [
            "schema",
            "input",
            "r",
            "d",
            "m",
            "seed",
            "regime",
            "checks",
            "obstruction",
            "verdict",
            "reason",
            "timings_ms",
        ] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(json["schema"], 1);
        for key in [
            "metastable",
            "no_rfold_generic",
            "trivial_map_exists",
            "critical",
        ] {
            assert!(json["checks"].get(key).is_some());
        }
        for key in [
            "critical_orbits",
            "subcritical_orbits",
            "cocycle_support",
            "vanishes",
            "certificate",
        ] {
            assert!(json["obstruction"].get(key).is_some());
        }
    }
}
