//! Multiplicity accounting and executable verification of the
//! multiplicity-bound theorem over exhaustively enumerated desk-scale
//! instance spaces.
//!
//! "Multiplicity" always means the coefficient of a basis element in the
//! canonicalized semisimplified formal sum. The claims under test:
//!
//! - every Jacquet-module multiplicity of an admissible induced class is at
//!   most 2 ([`check_theorem_main`]);
//! - a multiplicity of 2 can only occur when the GL factor of the witness is
//!   self-dual (same sweep);
//! - cutting unlinked, mutually non-containing segments leaves the pieces
//!   unlinked ([`check_lemma_heredity`]);
//! - the individual generation events of the coaction are pairwise distinct
//!   with irreducible GL factors ([`check_distinctness`]) — duality can and
//!   does break this for self-dual labels, which is exactly the mechanism
//!   producing multiplicity 2, so those coincidences are reported as data
//!   rather than errors.
//!
//! Violations are returned as values, never just asserted, so a harness can
//! always extract a minimized witness.

use crate::error::{Error, Result};
use crate::hopf::{jacquet_sp, mu_star, mu_star_events};
use crate::model::{GLClass, Segment, SpClass, Universe};
use crate::segments::{contains, dual_glclass, is_irreducible_gl, is_linked, offending_pair};
use crate::sum::LeviSum;

/// True iff a class equals its own contragredient.
pub fn is_self_dual(x: &GLClass, universe: &Universe) -> bool {
    dual_glclass(x, universe) == *x
}

fn segment_text(s: Segment, universe: &Universe) -> String {
    format!("Z[{},{}]@{}", s.a(), s.b(), universe.label_name(s.label()))
}

/// Reject inputs outside the admissible class, naming the offending pair.
pub fn require_admissible(x: &SpClass, universe: &Universe) -> Result<()> {
    match offending_pair(&x.gl_part) {
        None => Ok(()),
        Some((d1, d2, reason)) => Err(Error::NotInAdmissibleClass {
            first: segment_text(d1, universe),
            second: segment_text(d2, universe),
            reason,
        }),
    }
}

/// The multiplicity table of one Jacquet module, with duality coincidences
/// already merged by canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub input: SpClass,
    pub levi_rank: u32,
    pub table: LeviSum,
    pub max_multiplicity: u64,
    /// Basis elements achieving the maximum (empty only for the zero table).
    pub witnesses: Vec<(GLClass, SpClass)>,
    /// Terms whose GL factor (either side) fails the irreducibility test.
    pub irreducibility_flags: Vec<(GLClass, SpClass)>,
}

pub fn multiplicity_table(
    x: &SpClass,
    levi: u32,
    universe: &Universe,
) -> Result<MultiplicityReport> {
    require_admissible(x, universe)?;
    let table = jacquet_sp(x, levi, universe)?;
    let max_multiplicity = table.max_multiplicity();
    let witnesses = table
        .iter()
        .filter(|&(_, m)| m == max_multiplicity && max_multiplicity > 0)
        .map(|(b, _)| b.clone())
        .collect();
    let irreducibility_flags = table
        .iter()
        .filter(|((left, right), _)| !is_irreducible_gl(left) || !is_irreducible_gl(&right.gl_part))
        .map(|(b, _)| b.clone())
        .collect();
    Ok(MultiplicityReport {
        input: x.clone(),
        levi_rank: levi,
        table,
        max_multiplicity,
        witnesses,
        irreducibility_flags,
    })
}

/// Bounds of an exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepBounds {
    pub exp_min: i32,
    pub exp_max: i32,
    pub max_segments: usize,
    /// Cap on the GL rank of enumerated classes, to keep sweeps fast.
    pub max_gl_rank: u32,
}

impl Default for SweepBounds {
    fn default() -> Self {
        Self {
            exp_min: -2,
            exp_max: 2,
            max_segments: 3,
            max_gl_rank: 6,
        }
    }
}

/// Every admissible GL class within bounds: at most `max_segments` pairwise
/// unlinked, mutually non-containing segments over the declared labels, with
/// exponents in `[exp_min, exp_max]` and total rank at most `max_gl_rank`.
/// The unit class is included.
///
/// Segments are placed on explicitly declared lines only. Auto-created `~`
/// partners still enter every computation through the contragredient, but
/// they carry input segments only when the user declares the pair by name —
/// which is also how coincidences beyond the self-dual mechanism can be
/// explored deliberately.
pub fn enumerate_admissible_gl_classes(universe: &Universe, bounds: &SweepBounds) -> Vec<GLClass> {
    let mut segments = Vec::new();
    for label in universe.declared_gl_ids() {
        for a in bounds.exp_min..=bounds.exp_max {
            for b in a..=bounds.exp_max {
                let s = Segment::new(label, a, b).expect("a <= b");
                if s.gl_rank(universe) <= bounds.max_gl_rank {
                    segments.push(s);
                }
            }
        }
    }
    segments.sort_unstable();

    let mut out = vec![GLClass::unit()];
    let mut chosen: Vec<Segment> = Vec::new();
    fn extend(
        segments: &[Segment],
        from: usize,
        chosen: &mut Vec<Segment>,
        rank_left: u32,
        depth_left: usize,
        universe: &Universe,
        out: &mut Vec<GLClass>,
    ) {
        if depth_left == 0 {
            return;
        }
        for (offset, &s) in segments[from..].iter().enumerate() {
            let rank = s.gl_rank(universe);
            if rank > rank_left {
                continue;
            }
            let compatible = chosen
                .iter()
                .all(|&c| !is_linked(c, s) && !contains(c, s) && !contains(s, c));
            if !compatible {
                continue;
            }
            chosen.push(s);
            out.push(GLClass::new(chosen.clone()));
            extend(
                segments,
                from + offset + 1,
                chosen,
                rank_left - rank,
                depth_left - 1,
                universe,
                out,
            );
            chosen.pop();
        }
    }
    extend(
        &segments,
        0,
        &mut chosen,
        bounds.max_gl_rank,
        bounds.max_segments,
        universe,
        &mut out,
    );
    out
}

/// A term of some Jacquet module breaking the claimed multiplicity bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremViolation {
    pub input: SpClass,
    pub levi_rank: u32,
    pub term: (GLClass, SpClass),
    pub multiplicity: u64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Multiplicity above 2.
    MultiplicityAboveTwo,
    /// Multiplicity exactly 2 with a non-self-dual GL factor.
    MultiplicityTwoNotSelfDual,
}

/// Outcome of an exhaustive multiplicity sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    /// Admissible induced classes visited.
    pub instances: u64,
    /// Jacquet-module tables inspected (one per instance and Levi rank).
    pub tables: u64,
    pub max_multiplicity_seen: u64,
    /// Number of (instance, term) pairs realizing multiplicity 2.
    pub multiplicity_two_count: u64,
    /// First multiplicity-2 witness in enumeration order.
    pub sample_multiplicity_two: Option<(SpClass, u32, (GLClass, SpClass))>,
    /// Terms whose GL factor failed the irreducibility test (reported, not
    /// a theorem violation).
    pub flagged_terms: u64,
    pub violations: Vec<TheoremViolation>,
}

impl SweepReport {
    fn merge(&mut self, other: SweepReport) {
        self.instances += other.instances;
        self.tables += other.tables;
        self.max_multiplicity_seen = self.max_multiplicity_seen.max(other.max_multiplicity_seen);
        self.multiplicity_two_count += other.multiplicity_two_count;
        if self.sample_multiplicity_two.is_none() {
            self.sample_multiplicity_two = other.sample_multiplicity_two;
        }
        self.flagged_terms += other.flagged_terms;
        self.violations.extend(other.violations);
    }
}

fn sweep_instance(x: &SpClass, universe: &Universe, report: &mut SweepReport) {
    report.instances += 1;
    report.tables += u64::from(x.sp_rank(universe)) + 1;
    // a basis element determines its Levi rank, so one coaction covers all
    // tables of this instance
    let mu = mu_star(x, universe);
    for (term, mult) in mu.iter() {
        let levi_rank = term.0.gl_rank(universe);
        report.max_multiplicity_seen = report.max_multiplicity_seen.max(mult);
        if !is_irreducible_gl(&term.0) || !is_irreducible_gl(&term.1.gl_part) {
            report.flagged_terms += 1;
        }
        if mult > 2 {
            report.violations.push(TheoremViolation {
                input: x.clone(),
                levi_rank,
                term: term.clone(),
                multiplicity: mult,
                kind: ViolationKind::MultiplicityAboveTwo,
            });
        } else if mult == 2 {
            report.multiplicity_two_count += 1;
            if report.sample_multiplicity_two.is_none() {
                report.sample_multiplicity_two = Some((x.clone(), levi_rank, term.clone()));
            }
            if !is_self_dual(&term.0, universe) {
                report.violations.push(TheoremViolation {
                    input: x.clone(),
                    levi_rank,
                    term: term.clone(),
                    multiplicity: mult,
                    kind: ViolationKind::MultiplicityTwoNotSelfDual,
                });
            }
        }
    }
}

/// Exhaustively check the multiplicity bound over every admissible induced
/// class within bounds, for every Sp label of the universe and every Levi
/// rank. `jobs` > 1 fans the instance list out over threads; reports are
/// merged in enumeration order, so the result is deterministic.
pub fn check_theorem_main(universe: &Universe, bounds: &SweepBounds, jobs: usize) -> SweepReport {
    let gl_classes = enumerate_admissible_gl_classes(universe, bounds);
    let instances: Vec<SpClass> = gl_classes
        .iter()
        .flat_map(|g| {
            universe
                .sp_ids()
                .map(|sp| SpClass::new(g.clone(), sp))
                .collect::<Vec<_>>()
        })
        .collect();

    let jobs = jobs.max(1).min(instances.len().max(1));
    if jobs == 1 {
        let mut report = SweepReport::default();
        for x in &instances {
            sweep_instance(x, universe, &mut report);
        }
        return report;
    }

    let chunk_size = instances.len().div_ceil(jobs);
    let mut partials: Vec<SweepReport> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = instances
            .chunks(chunk_size)
            .map(|chunk| {
                scope.spawn(move || {
                    let mut report = SweepReport::default();
                    for x in chunk {
                        sweep_instance(x, universe, &mut report);
                    }
                    report
                })
            })
            .collect();
        for handle in handles {
            partials.push(handle.join().expect("sweep worker panicked"));
        }
    });
    let mut report = SweepReport::default();
    for partial in partials {
        report.merge(partial);
    }
    report
}

/// A cut of a non-linked, non-containing pair whose pieces came out linked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeredityViolation {
    pub d1: (i32, i32),
    pub d2: (i32, i32),
    pub cut1: i32,
    pub cut2: i32,
    /// `"head"` for the pieces `[a, c]`, `"tail"` for the pieces `[c, b]`.
    pub side: &'static str,
}

/// Exhaustively verify heredity of non-linkedness for all segment pairs on
/// one cuspidal line with exponents in `[exp_min, exp_max]` and all cut
/// points. Pairs on distinct lines are never linked, so one line is
/// exhaustive. Expected empty.
pub fn check_lemma_heredity(exp_min: i32, exp_max: i32) -> Vec<HeredityViolation> {
    let mut universe = Universe::new();
    let (rho, _) = universe.declare_gl("rho", 1).expect("fresh universe");
    let seg = |a, b| Segment::new(rho, a, b).expect("a <= b");

    let mut violations = Vec::new();
    for a1 in exp_min..=exp_max {
        for b1 in a1..=exp_max {
            for a2 in exp_min..=exp_max {
                for b2 in a2..=exp_max {
                    let d1 = seg(a1, b1);
                    let d2 = seg(a2, b2);
                    if is_linked(d1, d2) || contains(d1, d2) || contains(d2, d1) {
                        continue;
                    }
                    for c1 in a1..=b1 {
                        for c2 in a2..=b2 {
                            if is_linked(seg(a1, c1), seg(a2, c2)) {
                                violations.push(HeredityViolation {
                                    d1: (a1, b1),
                                    d2: (a2, b2),
                                    cut1: c1,
                                    cut2: c2,
                                    side: "head",
                                });
                            }
                            if is_linked(seg(c1, b1), seg(c2, b2)) {
                                violations.push(HeredityViolation {
                                    d1: (a1, b1),
                                    d2: (a2, b2),
                                    cut1: c1,
                                    cut2: c2,
                                    side: "tail",
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    violations
}

/// Why the generation events of a coaction were not all distinct and
/// irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistinctnessFailure {
    /// Two generation events produced the same basis element.
    RepeatedTerm {
        levi_rank: u32,
        term: (GLClass, SpClass),
        occurrences: u64,
        /// Whether the coincidence is explained by a self-dual GL factor
        /// (the mechanism behind multiplicity 2).
        self_dual_left: bool,
    },
    /// An event produced a GL factor with a linked segment pair.
    ReducibleFactor {
        levi_rank: u32,
        term: (GLClass, SpClass),
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinctnessReport {
    pub input: SpClass,
    pub ok: bool,
    /// First failure in canonical order, if any.
    pub failure: Option<DistinctnessFailure>,
    /// All repeated terms whose GL factor is self-dual (expected mechanism).
    pub duality_coincidences: u64,
    /// Repeated terms with a non-self-dual GL factor (unexplained; genuine
    /// counterexamples to the distinctness claim).
    pub unexplained_repeats: u64,
}

/// Check that the raw generation events of `mu*` — before merging into the
/// formal sum — are pairwise distinct and have irreducible GL factors, for
/// every Levi rank at once.
pub fn check_distinctness(x: &SpClass, universe: &Universe) -> Result<DistinctnessReport> {
    require_admissible(x, universe)?;
    let events = mu_star_events(x, universe);
    let counts: LeviSum = events.into_iter().map(|t| (t, 1)).collect();

    let mut failure = None;
    let mut duality_coincidences = 0;
    let mut unexplained_repeats = 0;
    for (term, mult) in counts.iter() {
        let levi_rank = term.0.gl_rank(universe);
        if mult > 1 {
            let self_dual_left = is_self_dual(&term.0, universe);
            if self_dual_left {
                duality_coincidences += 1;
            } else {
                unexplained_repeats += 1;
            }
            if failure.is_none() {
                failure = Some(DistinctnessFailure::RepeatedTerm {
                    levi_rank,
                    term: term.clone(),
                    occurrences: mult,
                    self_dual_left,
                });
            }
        }
        if failure.is_none() && (!is_irreducible_gl(&term.0) || !is_irreducible_gl(&term.1.gl_part))
        {
            failure = Some(DistinctnessFailure::ReducibleFactor {
                levi_rank,
                term: term.clone(),
            });
        }
    }
    Ok(DistinctnessReport {
        input: x.clone(),
        ok: failure.is_none(),
        failure,
        duality_coincidences,
        unexplained_repeats,
    })
}
