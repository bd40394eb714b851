//! Deterministic pretty-printing.
//!
//! The text form mirrors the input grammar: `(x)` for the tensor product,
//! `|x` for parabolic induction, `~` for the contragredient, `Z[a,b]@name`
//! for segments (with `name` alone short for `Z[0,0]@name`), `1` for the
//! unit and `0` for the empty sum. Terms of a sum are sorted by
//! (left-factor rank, rendered form), so output is diff-stable; multiplicity
//! above 1 renders as `k*term`. Rendering a basis element is inverse to
//! parsing it.

use crate::model::{GLClass, Segment, SpClass, Universe};
use crate::sum::FormalSum;

pub fn segment_text(s: Segment, universe: &Universe) -> String {
    let name = universe.label_name(s.label());
    if s.a() == 0 && s.b() == 0 {
        name.to_owned()
    } else {
        format!("Z[{},{}]@{}", s.a(), s.b(), name)
    }
}

/// A basis element that can be rendered and sorted into display order.
pub trait TextTerm {
    fn text(&self, universe: &Universe) -> String;
    /// Rank of the leading tensor factor (the display sort key).
    fn grade(&self, universe: &Universe) -> u32;
}

impl TextTerm for GLClass {
    fn text(&self, universe: &Universe) -> String {
        if self.is_unit() {
            return "1".to_owned();
        }
        self.segments()
            .iter()
            .map(|&s| segment_text(s, universe))
            .collect::<Vec<_>>()
            .join(" x ")
    }

    fn grade(&self, universe: &Universe) -> u32 {
        self.gl_rank(universe)
    }
}

impl TextTerm for SpClass {
    fn text(&self, universe: &Universe) -> String {
        let sp = universe.sp_name(self.sp_label);
        if self.gl_part.is_unit() {
            sp.to_owned()
        } else {
            format!("{} |x {}", self.gl_part.text(universe), sp)
        }
    }

    fn grade(&self, universe: &Universe) -> u32 {
        self.sp_rank(universe)
    }
}

impl TextTerm for (GLClass, GLClass) {
    fn text(&self, universe: &Universe) -> String {
        format!("{} (x) {}", self.0.text(universe), self.1.text(universe))
    }

    fn grade(&self, universe: &Universe) -> u32 {
        self.0.gl_rank(universe)
    }
}

impl TextTerm for (GLClass, SpClass) {
    fn text(&self, universe: &Universe) -> String {
        let right = self.1.text(universe);
        if self.1.gl_part.is_unit() {
            format!("{} (x) {}", self.0.text(universe), right)
        } else {
            format!("{} (x) ({})", self.0.text(universe), right)
        }
    }

    fn grade(&self, universe: &Universe) -> u32 {
        self.0.gl_rank(universe)
    }
}

impl TextTerm for (GLClass, GLClass, GLClass) {
    fn text(&self, universe: &Universe) -> String {
        format!(
            "{} (x) {} (x) {}",
            self.0.text(universe),
            self.1.text(universe),
            self.2.text(universe)
        )
    }

    fn grade(&self, universe: &Universe) -> u32 {
        self.0.gl_rank(universe)
    }
}

/// Render a formal sum as ` + `-joined terms in display order, `0` if empty.
pub fn render_sum<B: TextTerm + Ord>(sum: &FormalSum<B>, universe: &Universe) -> String {
    if sum.is_zero() {
        return "0".to_owned();
    }
    let mut terms: Vec<(u32, String, u64)> = sum
        .iter()
        .map(|(b, m)| (b.grade(universe), b.text(universe), m))
        .collect();
    terms.sort();
    terms
        .into_iter()
        .map(
            |(_, text, m)| {
                if m == 1 {
                    text
                } else {
                    format!("{m}*{text}")
                }
            },
        )
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, Expr, SessionDeclarations};
    use crate::hopf::{jacquet_sp, m_star};
    use crate::model::SpClass;
    use crate::sum::LeviSum;

    fn universe() -> Universe {
        SessionDeclarations::parse_inline("rho:GL(1); rho2:GL(1); tau:GL(1) self-dual; sigma:Sp(1)")
            .unwrap()
            .build_universe()
            .unwrap()
    }

    fn sp_input(u: &Universe, text: &str) -> SpClass {
        match parse_expression(text, u).unwrap() {
            Expr::Sp(x) => x,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn renders_basis_elements() {
        let u = universe();
        assert_eq!(GLClass::unit().text(&u), "1");
        match parse_expression("rho2 x Z[0,1]@rho", &u).unwrap() {
            // canonical order puts rho's segment first (declaration order)
            Expr::Gl(x) => assert_eq!(x.text(&u), "Z[0,1]@rho x rho2"),
            other => panic!("{other:?}"),
        }
        let x = sp_input(&u, "rho |x sigma");
        assert_eq!(x.text(&u), "rho |x sigma");
        assert_eq!(sp_input(&u, "sigma").text(&u), "sigma");
    }

    #[test]
    fn renders_the_g2_jacquet_module() {
        let u = universe();
        let x = sp_input(&u, "rho |x sigma");
        let r1 = jacquet_sp(&x, 1, &u).unwrap();
        assert_eq!(render_sum(&r1, &u), "rho (x) sigma + ~rho (x) sigma");
        let r2 = jacquet_sp(&x, 2, &u).unwrap();
        assert_eq!(render_sum(&r2, &u), "0");
    }

    #[test]
    fn multiplicities_render_with_a_factor() {
        let u = universe();
        let x = sp_input(&u, "tau |x sigma");
        let r1 = jacquet_sp(&x, 1, &u).unwrap();
        assert_eq!(render_sum(&r1, &u), "2*tau (x) sigma");
    }

    #[test]
    fn sum_ordering_is_by_grade_then_text() {
        let u = universe();
        match parse_expression("rho x rho2", &u).unwrap() {
            Expr::Gl(x) => {
                let rendered = render_sum(&m_star(&x, &u), &u);
                assert_eq!(
                    rendered,
                    "1 (x) rho x rho2 + \
                     rho (x) rho2 + rho2 (x) rho + ~rho (x) rho2 + ~rho2 (x) rho + \
                     rho x rho2 (x) 1 + rho x ~rho2 (x) 1 + ~rho x rho2 (x) 1 + ~rho x ~rho2 (x) 1"
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nested_sp_terms_are_parenthesized() {
        let u = universe();
        let x = sp_input(&u, "rho x rho2 |x sigma");
        let r1 = jacquet_sp(&x, 1, &u).unwrap();
        let rendered = render_sum(&r1, &u);
        assert_eq!(
            rendered,
            "rho (x) (rho2 |x sigma) + rho2 (x) (rho |x sigma) + \
             ~rho (x) (rho2 |x sigma) + ~rho2 (x) (rho |x sigma)"
        );
    }

    #[test]
    fn empty_sum_renders_as_zero() {
        let u = universe();
        assert_eq!(render_sum(&LeviSum::zero(), &u), "0");
    }
}
