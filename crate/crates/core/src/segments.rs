//! Predicates and constructions on segments.
//!
//! Two segments can only interact when they live on the same cuspidal line
//! (same label); segments over different labels are never linked, never
//! contain one another and never precede one another. On one line, with
//! exponent sets `{a1..b1}` and `{a2..b2}`:
//!
//! - `contains`: set containment of the exponent intervals;
//! - `is_linked`: mutual non-containment and the union is again an interval;
//! - `precedes`: `a1 < a2`, `b1 < b2` and `a2 <= b1 + 1`, i.e. stacking the
//!   two twist sequences yields a segment strictly longer than both.
//!
//! The contragredient negates and swaps the twist endpoints and dualizes the
//! label, so it is an involution preserving length, linkedness, containment
//! and rank.

use crate::model::{GLClass, Segment, SpClass, Universe};

/// True iff both segments are built on the same cuspidal label.
pub fn same_line(d1: Segment, d2: Segment) -> bool {
    d1.label() == d2.label()
}

/// True iff `d1` contains `d2` as a set of twisted cuspidals (not strict:
/// every segment contains itself).
pub fn contains(d1: Segment, d2: Segment) -> bool {
    same_line(d1, d2) && d1.a() <= d2.a() && d2.b() <= d1.b()
}

/// True iff the segments are linked: same line, neither contains the other,
/// and the union of their exponent sets is again an interval. Symmetric.
pub fn is_linked(d1: Segment, d2: Segment) -> bool {
    same_line(d1, d2)
        && !contains(d1, d2)
        && !contains(d2, d1)
        && d1.a().max(d2.a()) <= d1.b().min(d2.b()) + 1
}

/// True iff `d1` precedes `d2`: from the concatenated twist sequence of the
/// two segments one can extract a segment strictly longer than both.
pub fn precedes(d1: Segment, d2: Segment) -> bool {
    same_line(d1, d2) && d1.a() < d2.a() && d1.b() < d2.b() && d2.a() <= d1.b() + 1
}

/// Contragredient segment: `[-b, -a]` on the dual label.
pub fn dual_segment(d: Segment, universe: &Universe) -> Segment {
    Segment::new(universe.dual(d.label()), -d.b(), -d.a()).expect("negated endpoints stay ordered")
}

/// Contragredient class: dualize every segment, then re-canonicalize.
pub fn dual_glclass(x: &GLClass, universe: &Universe) -> GLClass {
    GLClass::new(
        x.segments()
            .iter()
            .map(|&d| dual_segment(d, universe))
            .collect(),
    )
}

/// Irreducibility of `Z(D_1) x ... x Z(D_r)`: no pair of segments is linked.
pub fn is_irreducible_gl(x: &GLClass) -> bool {
    let segs = x.segments();
    for (i, &d1) in segs.iter().enumerate() {
        for &d2 in &segs[i + 1..] {
            if is_linked(d1, d2) {
                return false;
            }
        }
    }
    true
}

/// Membership in the admissible input class: all segment pairs unlinked and
/// mutually non-containing (so in particular no repeated segment).
pub fn in_class_m_irr(x: &SpClass) -> bool {
    offending_pair(&x.gl_part).is_none()
}

/// First pair of segments violating the class condition, with the reason
/// (`"linked"` or `"contained"`), if any.
pub fn offending_pair(x: &GLClass) -> Option<(Segment, Segment, &'static str)> {
    let segs = x.segments();
    for (i, &d1) in segs.iter().enumerate() {
        for &d2 in &segs[i + 1..] {
            if is_linked(d1, d2) {
                return Some((d1, d2, "linked"));
            }
            if contains(d1, d2) || contains(d2, d1) {
                return Some((d1, d2, "contained"));
            }
        }
    }
    None
}
