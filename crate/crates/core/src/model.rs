//! Domain types of the segment calculus.
//!
//! The atoms are formal supercuspidal labels: `LabelId` names an irreducible
//! supercuspidal representation rho of some GL_m (m = the label's rank), and
//! `SpLabelId` names an irreducible supercuspidal representation sigma of a
//! symplectic group Sp_2k (k = the label's rank, k = 0 meaning the trivial
//! representation of the trivial group). Labels are purely formal: equality
//! is by identity, never by any analytic property, and every GL label has a
//! contragredient partner recorded in the [`Universe`] registry.
//!
//! On top of the labels sit:
//! - [`Segment`]: `[nu^a rho, nu^b rho]` with integer twists a <= b;
//! - [`GLClass`]: a canonical multiset of segments, the basis element
//!   `Z(D_1) x ... x Z(D_r)` of the Grothendieck ring of the general linear
//!   groups (the empty multiset is the unit 1);
//! - [`SpClass`]: a GL class together with an Sp label, the basis element
//!   `Z(D_1) x ... x Z(D_r) |x sigma`.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here can be shared freely between threads.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Identifier of a GL supercuspidal label inside a [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub(crate) u32);

/// Identifier of an Sp supercuspidal label inside a [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpLabelId(pub(crate) u32);

#[derive(Debug, Clone)]
struct GlLabel {
    name: String,
    rank: u32,
    dual: LabelId,
    /// False for the auto-created `~name` partners.
    declared: bool,
}

#[derive(Debug, Clone)]
struct SpLabel {
    name: String,
    rank: u32,
}

/// Registry of supercuspidal labels with their duality structure.
///
/// Duality must be declared at construction time: a GL label declared with
/// [`Universe::declare_gl`] gets a distinct auto-created partner named
/// `~<name>`, so the generic (non-self-dual) case is the default. Use
/// [`Universe::declare_gl_self_dual`] for a label fixed by the contragredient
/// and [`Universe::declare_gl_pair`] to name both members of a dual pair.
#[derive(Debug, Clone, Default)]
pub struct Universe {
    gl: Vec<GlLabel>,
    sp: Vec<SpLabel>,
    names: HashMap<String, NameEntry>,
}

#[derive(Debug, Clone, Copy)]
enum NameEntry {
    Gl(LabelId),
    Sp(SpLabelId),
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_name(&self, name: &str) -> Result<()> {
        if name.is_empty()
            || name.starts_with('~')
            || name == "x"
            || name == "Z"
            || name.chars().next().is_some_and(|c| c.is_ascii_digit())
            || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(Error::ReservedName { name: name.into() });
        }
        if self.names.contains_key(name) {
            return Err(Error::DuplicateLabel { name: name.into() });
        }
        Ok(())
    }

    fn push_gl(&mut self, name: String, rank: u32, dual: LabelId, declared: bool) -> LabelId {
        let id = LabelId(self.gl.len() as u32);
        self.names.insert(name.clone(), NameEntry::Gl(id));
        self.gl.push(GlLabel {
            name,
            rank,
            dual,
            declared,
        });
        id
    }

    /// Declare a generic GL label of the given rank.
    ///
    /// A distinct contragredient partner named `~<name>` is created
    /// automatically; both labels are returned as (label, partner).
    pub fn declare_gl(&mut self, name: &str, rank: u32) -> Result<(LabelId, LabelId)> {
        self.check_name(name)?;
        if rank == 0 {
            return Err(Error::InvalidGlRank { name: name.into() });
        }
        let id = LabelId(self.gl.len() as u32);
        let partner = LabelId(self.gl.len() as u32 + 1);
        self.push_gl(name.to_owned(), rank, partner, true);
        let partner_name = format!("~{name}");
        self.names
            .insert(partner_name.clone(), NameEntry::Gl(partner));
        self.gl.push(GlLabel {
            name: partner_name,
            rank,
            dual: id,
            declared: false,
        });
        Ok((id, partner))
    }

    /// Declare a self-dual GL label of the given rank.
    pub fn declare_gl_self_dual(&mut self, name: &str, rank: u32) -> Result<LabelId> {
        self.check_name(name)?;
        if rank == 0 {
            return Err(Error::InvalidGlRank { name: name.into() });
        }
        let id = LabelId(self.gl.len() as u32);
        Ok(self.push_gl(name.to_owned(), rank, id, true))
    }

    /// Declare two GL labels of the same rank that are each other's duals.
    pub fn declare_gl_pair(
        &mut self,
        name: &str,
        partner: &str,
        rank: u32,
    ) -> Result<(LabelId, LabelId)> {
        self.check_name(name)?;
        if partner == name {
            return Err(Error::DuplicateLabel { name: name.into() });
        }
        self.check_name(partner)?;
        if rank == 0 {
            return Err(Error::InvalidGlRank { name: name.into() });
        }
        let id = LabelId(self.gl.len() as u32);
        let partner_id = LabelId(self.gl.len() as u32 + 1);
        self.push_gl(name.to_owned(), rank, partner_id, true);
        self.names
            .insert(partner.to_owned(), NameEntry::Gl(partner_id));
        self.gl.push(GlLabel {
            name: partner.to_owned(),
            rank,
            dual: id,
            declared: true,
        });
        Ok((id, partner_id))
    }

    /// Declare an Sp label of the given rank (rank 0 is the trivial
    /// representation of the trivial group).
    pub fn declare_sp(&mut self, name: &str, rank: u32) -> Result<SpLabelId> {
        self.check_name(name)?;
        let id = SpLabelId(self.sp.len() as u32);
        self.names.insert(name.to_owned(), NameEntry::Sp(id));
        self.sp.push(SpLabel {
            name: name.to_owned(),
            rank,
        });
        Ok(id)
    }

    /// Contragredient of a GL label; an involution by construction.
    pub fn dual(&self, label: LabelId) -> LabelId {
        self.gl[label.0 as usize].dual
    }

    /// The m of GL_m on which the label's representation lives.
    pub fn label_rank(&self, label: LabelId) -> u32 {
        self.gl[label.0 as usize].rank
    }

    pub fn label_name(&self, label: LabelId) -> &str {
        &self.gl[label.0 as usize].name
    }

    pub fn is_self_dual_label(&self, label: LabelId) -> bool {
        self.dual(label) == label
    }

    /// The k of Sp_2k on which the label's representation lives.
    pub fn sp_rank_of(&self, label: SpLabelId) -> u32 {
        self.sp[label.0 as usize].rank
    }

    pub fn sp_name(&self, label: SpLabelId) -> &str {
        &self.sp[label.0 as usize].name
    }

    /// Resolve a GL label by name. `~<name>` resolves to the dual of `<name>`.
    pub fn lookup_gl(&self, name: &str) -> Option<LabelId> {
        match self.names.get(name) {
            Some(NameEntry::Gl(id)) => Some(*id),
            Some(NameEntry::Sp(_)) => None,
            None => {
                let base = name.strip_prefix('~')?;
                match self.names.get(base) {
                    Some(NameEntry::Gl(id)) => Some(self.dual(*id)),
                    _ => None,
                }
            }
        }
    }

    pub fn lookup_sp(&self, name: &str) -> Option<SpLabelId> {
        match self.names.get(name) {
            Some(NameEntry::Sp(id)) => Some(*id),
            _ => None,
        }
    }

    pub fn gl_ids(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.gl.len() as u32).map(LabelId)
    }

    /// Explicitly declared GL labels, excluding auto-created `~` partners.
    /// Instance enumerations build segments over these lines; both members
    /// of an explicitly declared dual pair are included.
    pub fn declared_gl_ids(&self) -> impl Iterator<Item = LabelId> + '_ {
        self.gl
            .iter()
            .enumerate()
            .filter(|(_, l)| l.declared)
            .map(|(i, _)| LabelId(i as u32))
    }

    pub fn sp_ids(&self) -> impl Iterator<Item = SpLabelId> + '_ {
        (0..self.sp.len() as u32).map(SpLabelId)
    }
}

/// A Zelevinsky segment `[nu^a rho, nu^b rho]` over a cuspidal label.
///
/// The twist exponents are integers with `a <= b`; the segment stands for
/// the set `{nu^a rho, ..., nu^b rho}` and indexes the irreducible
/// representation `Z([nu^a rho, nu^b rho])` of GL_{rank * length}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    label: LabelId,
    a: i32,
    b: i32,
}

impl Segment {
    pub fn new(label: LabelId, a: i32, b: i32) -> Result<Self> {
        if a > b {
            return Err(Error::InvalidSegment { a, b });
        }
        Ok(Self { label, a, b })
    }

    pub fn label(&self) -> LabelId {
        self.label
    }

    pub fn a(&self) -> i32 {
        self.a
    }

    pub fn b(&self) -> i32 {
        self.b
    }

    /// Number of cuspidal twists in the segment, `b - a + 1 >= 1`.
    pub fn length(&self) -> u32 {
        (self.b - self.a + 1) as u32
    }

    /// Rank of the GL group carrying `Z` of this segment.
    pub fn gl_rank(&self, universe: &Universe) -> u32 {
        universe.label_rank(self.label) * self.length()
    }
}

/// Canonical multiset of segments: the basis element `Z(D_1) x ... x Z(D_r)`
/// of the Grothendieck ring of the general linear groups.
///
/// Products of `Z` of pairwise unlinked segments do not depend on the factor
/// order, so the multiset (stored sorted by `(label, a, b)`) is a normal
/// form. The empty multiset is the unit 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GLClass {
    segments: Vec<Segment>,
}

impl GLClass {
    /// The unit 1, i.e. the trivial representation of GL_0.
    pub fn unit() -> Self {
        Self::default()
    }

    /// Canonicalize a list of segments into a class: sort with multiplicity.
    ///
    /// Idempotent and invariant under permutations of the input.
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort_unstable();
        Self { segments }
    }

    pub fn from_segment(segment: Segment) -> Self {
        Self {
            segments: vec![segment],
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_unit(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total GL rank, the sum over segments of `rank(label) * length`.
    pub fn gl_rank(&self, universe: &Universe) -> u32 {
        self.segments.iter().map(|s| s.gl_rank(universe)).sum()
    }

    /// Product in the Grothendieck ring: multiset union, re-canonicalized.
    pub fn times(&self, other: &GLClass) -> GLClass {
        let mut segments = Vec::with_capacity(self.segments.len() + other.segments.len());
        segments.extend_from_slice(&self.segments);
        segments.extend_from_slice(&other.segments);
        GLClass::new(segments)
    }
}

impl fmt::Display for GLClass {
    /// Name-free debug form; use the render module for named output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .segments
            .iter()
            .map(|s| format!("Z[{},{}]@#{}", s.a, s.b, s.label.0))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Basis element `pi |x sigma` of the Grothendieck group of the symplectic
/// groups: a GL class parabolically inducing against an Sp label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpClass {
    pub gl_part: GLClass,
    pub sp_label: SpLabelId,
}

impl SpClass {
    pub fn new(gl_part: GLClass, sp_label: SpLabelId) -> Self {
        Self { gl_part, sp_label }
    }

    /// The n of Sp_2n carrying the induced representation.
    pub fn sp_rank(&self, universe: &Universe) -> u32 {
        self.gl_part.gl_rank(universe) + universe.sp_rank_of(self.sp_label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Universe, LabelId, LabelId, LabelId) {
        let mut u = Universe::new();
        let (rho1, _) = u.declare_gl("rho1", 1).unwrap();
        let (rho2, _) = u.declare_gl("rho2", 2).unwrap();
        let sd = u.declare_gl_self_dual("tau", 1).unwrap();
        (u, rho1, rho2, sd)
    }

    #[test]
    fn duality_is_a_rank_preserving_involution() {
        let (u, rho1, rho2, sd) = setup();
        for id in u.gl_ids() {
            assert_eq!(u.dual(u.dual(id)), id);
            assert_eq!(u.label_rank(u.dual(id)), u.label_rank(id));
        }
        assert_ne!(u.dual(rho1), rho1);
        assert_ne!(u.dual(rho2), rho2);
        assert_eq!(u.dual(sd), sd);
    }

    #[test]
    fn name_lookup_resolves_tilde() {
        let (u, rho1, _, sd) = setup();
        assert_eq!(u.lookup_gl("rho1"), Some(rho1));
        assert_eq!(u.lookup_gl("~rho1"), Some(u.dual(rho1)));
        // the stored partner name `~rho1` resolves, so `~~rho1` is its dual
        assert_eq!(u.lookup_gl("~~rho1"), Some(rho1));
        assert_eq!(u.lookup_gl("~tau"), Some(sd));
        assert_eq!(u.lookup_gl("nope"), None);
    }

    #[test]
    fn declared_pair_is_mutual() {
        let mut u = Universe::new();
        let (a, b) = u.declare_gl_pair("rho", "rhobar", 1).unwrap();
        assert_eq!(u.dual(a), b);
        assert_eq!(u.dual(b), a);
        assert_eq!(u.lookup_gl("~rho"), Some(b));
        assert_eq!(u.lookup_gl("~rhobar"), Some(a));
    }

    #[test]
    fn bad_declarations_are_rejected() {
        let mut u = Universe::new();
        u.declare_gl("rho", 1).unwrap();
        assert!(matches!(
            u.declare_gl("rho", 1),
            Err(Error::DuplicateLabel { .. })
        ));
        assert!(matches!(
            u.declare_gl("zero", 0),
            Err(Error::InvalidGlRank { .. })
        ));
        assert!(matches!(
            u.declare_gl("~bad", 1),
            Err(Error::ReservedName { .. })
        ));
        assert!(matches!(
            u.declare_sp("x", 1),
            Err(Error::ReservedName { .. })
        ));
        // auto-created partner name collides
        assert!(u.declare_sp("~rho", 0).is_err());
    }

    #[test]
    fn segment_invariants() {
        let (u, rho1, rho2, _) = setup();
        let s = Segment::new(rho1, -1, 2).unwrap();
        assert_eq!(s.length(), 4);
        assert_eq!(s.gl_rank(&u), 4);
        let t = Segment::new(rho2, 0, 2).unwrap();
        assert_eq!(t.gl_rank(&u), 6); // rank 2 x length 3
        assert!(matches!(
            Segment::new(rho1, 2, 1),
            Err(Error::InvalidSegment { .. })
        ));
    }

    #[test]
    fn canonicalize_sorts_and_keeps_multiplicity() {
        let (_, rho1, rho2, _) = setup();
        let s1 = Segment::new(rho1, 0, 1).unwrap();
        let s2 = Segment::new(rho2, 1, 2).unwrap();
        let x = GLClass::new(vec![s2, s1]);
        let y = GLClass::new(vec![s1, s2]);
        assert_eq!(x, y);
        assert_eq!(x.segments(), &[s1, s2]);

        let s = Segment::new(rho1, 0, 0).unwrap();
        let doubled = GLClass::new(vec![s, s]);
        assert_eq!(doubled.segments().len(), 2);
        assert_eq!(doubled.segments(), &[s, s]);
    }

    #[test]
    fn unit_has_rank_zero() {
        let (u, _, _, _) = setup();
        assert_eq!(GLClass::unit().gl_rank(&u), 0);
        assert!(GLClass::unit().is_unit());
    }

    #[test]
    fn sp_rank_adds_gl_and_sp_parts() {
        let (mut u, rho1, _, _) = setup();
        let sigma = u.declare_sp("sigma", 1).unwrap();
        let s1 = Segment::new(rho1, 0, 0).unwrap();
        let s2 = Segment::new(u.dual(rho1), 0, 0).unwrap();
        let x = SpClass::new(GLClass::new(vec![s1, s2]), sigma);
        // two rank-1 factors against a rank-1 sigma
        assert_eq!(x.sp_rank(&u), 3);
    }

    #[test]
    fn class_product_is_multiset_union() {
        let (_, rho1, rho2, _) = setup();
        let s1 = Segment::new(rho1, 0, 1).unwrap();
        let s2 = Segment::new(rho2, 0, 0).unwrap();
        let x = GLClass::from_segment(s1);
        let y = GLClass::from_segment(s2);
        assert_eq!(x.times(&y), y.times(&x));
        assert_eq!(x.times(&GLClass::unit()), x);
        assert_eq!(x.times(&x).segments(), &[s1, s1]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn raw_segments() -> impl Strategy<Value = (Vec<(usize, i32, i32)>, Vec<(usize, i32, i32)>)>
        {
            proptest::collection::vec((0..3usize, -4..=4i32, 0..=3i32), 0..=5)
                .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))
        }

        proptest! {
            #[test]
            fn canonicalization_is_permutation_invariant_and_idempotent(
                (original, shuffled) in raw_segments()
            ) {
                let (_, rho1, rho2, sd) = setup();
                let labels = [rho1, rho2, sd];
                let build = |raw: &[(usize, i32, i32)]| {
                    GLClass::new(
                        raw.iter()
                            .map(|&(i, a, len)| Segment::new(labels[i], a, a + len).unwrap())
                            .collect(),
                    )
                };
                let class = build(&original);
                prop_assert_eq!(&class, &build(&shuffled));
                // idempotent: re-canonicalizing the canonical form is a no-op
                prop_assert_eq!(&GLClass::new(class.segments().to_vec()), &class);
            }
        }
    }
}
