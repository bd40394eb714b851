//! Expression grammar and session label declarations.
//!
//! Expressions follow a small whitespace-insensitive grammar:
//!
//! ```text
//! rep     := glrep ( "|x" spname )?  |  spname
//! glrep   := "1" | factor ( "x" factor )*
//! factor  := "Z[" int "," int "]@" glname | glname
//! glname  := "~"? name                (bare name means Z[0,0]@name)
//! ```
//!
//! `~name` resolves to the contragredient of `name`, and a bare identifier
//! naming an Sp label stands for the induced class `1 |x name`. Integers may
//! be negative. Parsing canonicalizes, so re-rendering a parsed basis
//! element is a fixed point.
//!
//! Declarations are line-oriented (`#` starts a comment):
//!
//! ```text
//! rho   : GL(1)                # generic, auto-creates the partner ~rho
//! tau   : GL(2) self-dual
//! eta   : GL(1) dual etabar    # explicit pair, both lines required
//! etabar: GL(1) dual eta
//! sigma : Sp(1)
//! ```
//!
//! The same items separated by `;` form an inline declaration string.

use crate::error::{Error, Result};
use crate::model::{GLClass, Segment, SpClass, Universe};

/// Duality of a declared GL label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Duality {
    /// Distinct partner auto-created as `~<name>`.
    Generic,
    SelfDual,
    /// Explicitly named partner; the partner must declare this label back.
    Partner(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlDecl {
    pub name: String,
    pub rank: u32,
    pub duality: Duality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpDecl {
    pub name: String,
    pub rank: u32,
}

/// The label declarations of one session, as written by the user.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SessionDeclarations {
    pub gl: Vec<GlDecl>,
    pub sp: Vec<SpDecl>,
}

impl SessionDeclarations {
    /// Parse a line-oriented declaration file.
    pub fn parse_file_text(text: &str) -> Result<Self> {
        Self::parse_items(text.lines())
    }

    /// Parse a `;`-separated inline declaration string.
    pub fn parse_inline(spec: &str) -> Result<Self> {
        Self::parse_items(spec.split(';'))
    }

    fn parse_items<'a>(items: impl Iterator<Item = &'a str>) -> Result<Self> {
        let mut decls = Self::default();
        for raw in items {
            let item = raw.split('#').next().unwrap_or("").trim();
            if item.is_empty() {
                continue;
            }
            decls.parse_item(item)?;
        }
        Ok(decls)
    }

    fn parse_item(&mut self, item: &str) -> Result<()> {
        let bad = |msg: &str| Error::Declaration {
            line: item.to_owned(),
            msg: msg.to_owned(),
        };
        let (name, rest) = item.split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let name = name.trim().to_owned();
        let rest = rest.trim();
        let open = rest.find('(').ok_or_else(|| bad("missing `(rank)`"))?;
        let close = rest.find(')').ok_or_else(|| bad("missing `)`"))?;
        if close < open {
            return Err(bad("mismatched parentheses"));
        }
        let kind = rest[..open].trim();
        let rank: u32 = rest[open + 1..close]
            .trim()
            .parse()
            .map_err(|_| bad("rank is not a nonnegative integer"))?;
        let tail = rest[close + 1..].trim();
        match kind.to_ascii_lowercase().as_str() {
            "gl" => {
                let duality = if tail.is_empty() {
                    Duality::Generic
                } else if tail.eq_ignore_ascii_case("self-dual") {
                    Duality::SelfDual
                } else if let Some(partner) = tail
                    .strip_prefix("dual")
                    .filter(|p| p.starts_with(char::is_whitespace))
                {
                    Duality::Partner(partner.trim().to_owned())
                } else {
                    return Err(bad("expected nothing, `self-dual`, or `dual <name>`"));
                };
                self.gl.push(GlDecl {
                    name,
                    rank,
                    duality,
                });
            }
            "sp" => {
                if !tail.is_empty() {
                    return Err(bad("Sp declarations take no duality"));
                }
                self.sp.push(SpDecl { name, rank });
            }
            _ => return Err(bad("expected `GL(rank)` or `Sp(rank)`")),
        }
        Ok(())
    }

    /// Validate the declarations and build the label universe.
    pub fn build_universe(&self) -> Result<Universe> {
        let mut universe = Universe::new();
        let mut declared_pairs: Vec<(String, String)> = Vec::new();
        for decl in &self.gl {
            match &decl.duality {
                Duality::Generic => {
                    universe.declare_gl(&decl.name, decl.rank)?;
                }
                Duality::SelfDual => {
                    universe.declare_gl_self_dual(&decl.name, decl.rank)?;
                }
                Duality::Partner(partner) => {
                    let back = self.gl.iter().find(|d| &d.name == partner);
                    let consistent = back.is_some_and(|d| {
                        d.rank == decl.rank && d.duality == Duality::Partner(decl.name.clone())
                    });
                    if !consistent {
                        return Err(Error::InconsistentDuality {
                            name: decl.name.clone(),
                            partner: partner.clone(),
                        });
                    }
                    if declared_pairs
                        .iter()
                        .any(|(a, b)| a == partner && b == &decl.name)
                    {
                        continue; // second half of an already-declared pair
                    }
                    universe.declare_gl_pair(&decl.name, partner, decl.rank)?;
                    declared_pairs.push((decl.name.clone(), partner.clone()));
                }
            }
        }
        for decl in &self.sp {
            universe.declare_sp(&decl.name, decl.rank)?;
        }
        Ok(universe)
    }

    /// Default declarations inferred from an expression: every name is a
    /// rank-1 generic GL label, except the name after `|x`, which is Sp(1).
    /// A lone identifier is Sp(1) when `lone_ident_is_sp` is set (useful for
    /// coaction commands) and GL(1) otherwise.
    pub fn implicit_for(text: &str, lone_ident_is_sp: bool) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut decls = Self::default();
        let mut seen = std::collections::HashSet::new();

        if lone_ident_is_sp && tokens.len() == 2 {
            if let Tok::Ident(name) = &tokens[0].tok {
                decls.sp.push(SpDecl {
                    name: name.clone(),
                    rank: 1,
                });
                return Ok(decls);
            }
        }

        let mut after_rtimes = false;
        for t in &tokens {
            match &t.tok {
                Tok::Rtimes => after_rtimes = true,
                Tok::Ident(name) if name != "Z" && name != "x" => {
                    if !seen.insert(name.clone()) {
                        continue;
                    }
                    if after_rtimes {
                        decls.sp.push(SpDecl {
                            name: name.clone(),
                            rank: 1,
                        });
                    } else {
                        decls.gl.push(GlDecl {
                            name: name.clone(),
                            rank: 1,
                            duality: Duality::Generic,
                        });
                    }
                }
                _ => {}
            }
        }
        Ok(decls)
    }
}

/// A parsed expression: either a GL class or an induced Sp class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gl(GLClass),
    Sp(SpClass),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LBrack,
    RBrack,
    Comma,
    At,
    Tilde,
    Rtimes,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = i;
        match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            '[' => {
                tokens.push(Token {
                    tok: Tok::LBrack,
                    pos,
                });
                i += 1;
            }
            ']' => {
                tokens.push(Token {
                    tok: Tok::RBrack,
                    pos,
                });
                i += 1;
            }
            ',' => {
                tokens.push(Token {
                    tok: Tok::Comma,
                    pos,
                });
                i += 1;
            }
            '@' => {
                tokens.push(Token { tok: Tok::At, pos });
                i += 1;
            }
            '~' => {
                tokens.push(Token {
                    tok: Tok::Tilde,
                    pos,
                });
                i += 1;
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'x') {
                    tokens.push(Token {
                        tok: Tok::Rtimes,
                        pos,
                    });
                    i += 2;
                } else {
                    return Err(Error::Parse {
                        pos,
                        msg: "expected `|x`".into(),
                    });
                }
            }
            '-' | '0'..='9' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let slice = &text[start..i];
                let value: i64 = slice.parse().map_err(|_| Error::Parse {
                    pos,
                    msg: format!("bad integer `{slice}`"),
                })?;
                tokens.push(Token {
                    tok: Tok::Int(value),
                    pos,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(text[start..i].to_owned()),
                    pos,
                });
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        pos: bytes.len(),
    });
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    universe: &'a Universe,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> usize {
        self.tokens[self.pos].pos
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.next();
                Ok(v)
            }
            _ => self.fail("expected an integer"),
        }
    }

    fn gl_label(&mut self) -> Result<crate::model::LabelId> {
        let dualize = if *self.peek() == Tok::Tilde {
            self.next();
            true
        } else {
            false
        };
        let pos = self.here();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.next();
                let id = self
                    .universe
                    .lookup_gl(&name)
                    .ok_or(Error::UnknownLabel { name })?;
                let _ = pos;
                Ok(if dualize { self.universe.dual(id) } else { id })
            }
            _ => self.fail("expected a label name"),
        }
    }

    fn factor(&mut self) -> Result<Segment> {
        if let Tok::Ident(name) = self.peek() {
            if name == "Z" && self.tokens[self.pos + 1].tok == Tok::LBrack {
                self.next(); // Z
                self.next(); // [
                let a = self.int()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.int()?;
                self.expect(Tok::RBrack, "`]`")?;
                self.expect(Tok::At, "`@`")?;
                let label = self.gl_label()?;
                return Segment::new(label, a as i32, b as i32);
            }
        }
        let label = self.gl_label()?;
        Segment::new(label, 0, 0)
    }

    fn is_times(&self) -> bool {
        matches!(self.peek(), Tok::Ident(n) if n == "x")
    }

    fn rep(&mut self) -> Result<Expr> {
        let gl = if *self.peek() == Tok::Int(1) {
            self.next();
            GLClass::unit()
        } else {
            let mut segments = vec![self.factor()?];
            while self.is_times() {
                self.next();
                segments.push(self.factor()?);
            }
            GLClass::new(segments)
        };
        if *self.peek() == Tok::Rtimes {
            self.next();
            match self.peek().clone() {
                Tok::Ident(name) => {
                    self.next();
                    let sp = self
                        .universe
                        .lookup_sp(&name)
                        .ok_or(Error::UnknownLabel { name })?;
                    Ok(Expr::Sp(SpClass::new(gl, sp)))
                }
                _ => self.fail("expected an Sp label name after `|x`"),
            }
        } else {
            Ok(Expr::Gl(gl))
        }
    }
}

/// Parse an expression against a validated universe.
pub fn parse_expression(text: &str, universe: &Universe) -> Result<Expr> {
    let tokens = tokenize(text)?;

    // a lone identifier naming an Sp label is the class `1 |x name`
    if tokens.len() == 2 {
        if let Tok::Ident(name) = &tokens[0].tok {
            if let Some(sp) = universe.lookup_sp(name) {
                return Ok(Expr::Sp(SpClass::new(GLClass::unit(), sp)));
            }
        }
    }

    let mut parser = Parser {
        tokens,
        pos: 0,
        universe,
    };
    let expr = parser.rep()?;
    if *parser.peek() != Tok::Eof {
        return parser.fail("trailing input");
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe() -> Universe {
        SessionDeclarations::parse_inline(
            "rho:GL(1); rho1:GL(1); rho2:GL(1); tau:GL(2) self-dual; sigma:Sp(1)",
        )
        .unwrap()
        .build_universe()
        .unwrap()
    }

    #[test]
    fn parses_induced_class_with_rank() {
        let u = universe();
        match parse_expression("Z[0,1]@rho |x sigma", &u).unwrap() {
            Expr::Sp(x) => assert_eq!(x.sp_rank(&u), 3),
            other => panic!("expected Sp class, got {other:?}"),
        }
    }

    #[test]
    fn parses_product_of_points() {
        let u = universe();
        let rho1 = u.lookup_gl("rho1").unwrap();
        let rho2 = u.lookup_gl("rho2").unwrap();
        match parse_expression("rho1 x rho2 |x sigma", &u).unwrap() {
            Expr::Sp(x) => {
                assert_eq!(x.gl_part.segments().len(), 2);
                assert_eq!(x.gl_part.segments()[0].label(), rho1);
                assert_eq!(x.gl_part.segments()[1].label(), rho2);
                assert_eq!(x.sp_rank(&u), 3);
            }
            other => panic!("expected Sp class, got {other:?}"),
        }
    }

    #[test]
    fn rejects_reversed_endpoints() {
        let u = universe();
        assert!(matches!(
            parse_expression("Z[2,1]@rho", &u),
            Err(Error::InvalidSegment { a: 2, b: 1 })
        ));
    }

    #[test]
    fn whitespace_is_irrelevant() {
        let u = universe();
        let a = parse_expression("Z[ -1 , 1 ]@rho|xsigma", &u).unwrap();
        let b = parse_expression("Z[-1,1]@rho |x sigma", &u).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tilde_resolves_duals() {
        let u = universe();
        let rho = u.lookup_gl("rho").unwrap();
        match parse_expression("~rho", &u).unwrap() {
            Expr::Gl(x) => assert_eq!(x.segments()[0].label(), u.dual(rho)),
            other => panic!("{other:?}"),
        }
        // tau is self-dual, so ~tau is tau itself
        let tau = u.lookup_gl("tau").unwrap();
        match parse_expression("Z[0,1]@~tau", &u).unwrap() {
            Expr::Gl(x) => assert_eq!(x.segments()[0].label(), tau),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unit_and_bare_sp_names() {
        let u = universe();
        assert_eq!(
            parse_expression("1", &u).unwrap(),
            Expr::Gl(GLClass::unit())
        );
        let sigma = u.lookup_sp("sigma").unwrap();
        let bare = SpClass::new(GLClass::unit(), sigma);
        assert_eq!(
            parse_expression("sigma", &u).unwrap(),
            Expr::Sp(bare.clone())
        );
        assert_eq!(parse_expression("1 |x sigma", &u).unwrap(), Expr::Sp(bare));
    }

    #[test]
    fn unknown_labels_are_reported() {
        let u = universe();
        assert!(matches!(
            parse_expression("ghost", &u),
            Err(Error::UnknownLabel { .. })
        ));
        assert!(matches!(
            parse_expression("rho |x ghost", &u),
            Err(Error::UnknownLabel { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let u = universe();
        match parse_expression("rho x ?", &u) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        match parse_expression("Z[0 1]@rho", &u) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parsing_canonicalizes() {
        let u = universe();
        let a = parse_expression("rho2 x rho1", &u).unwrap();
        let b = parse_expression("rho1 x rho2", &u).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn declaration_file_round_trip() {
        let text = "\
# a comment
rho : GL(1)
tau : GL(2) self-dual
eta : GL(1) dual etabar
etabar : GL(1) dual eta

sigma : Sp(1)
triv : Sp(0)
";
        let decls = SessionDeclarations::parse_file_text(text).unwrap();
        assert_eq!(decls.gl.len(), 4);
        assert_eq!(decls.sp.len(), 2);
        let u = decls.build_universe().unwrap();
        let eta = u.lookup_gl("eta").unwrap();
        let etabar = u.lookup_gl("etabar").unwrap();
        assert_eq!(u.dual(eta), etabar);
        assert_eq!(u.sp_rank_of(u.lookup_sp("triv").unwrap()), 0);
        assert!(u.is_self_dual_label(u.lookup_gl("tau").unwrap()));
    }

    #[test]
    fn inconsistent_pairs_are_rejected() {
        let decls =
            SessionDeclarations::parse_inline("eta:GL(1) dual etabar; etabar:GL(2) dual eta")
                .unwrap();
        assert!(matches!(
            decls.build_universe(),
            Err(Error::InconsistentDuality { .. })
        ));
        let decls = SessionDeclarations::parse_inline("eta:GL(1) dual ghost").unwrap();
        assert!(matches!(
            decls.build_universe(),
            Err(Error::InconsistentDuality { .. })
        ));
    }

    #[test]
    fn malformed_declarations_are_rejected() {
        assert!(SessionDeclarations::parse_inline("rho GL(1)").is_err());
        assert!(SessionDeclarations::parse_inline("rho:GL(x)").is_err());
        assert!(SessionDeclarations::parse_inline("rho:XX(1)").is_err());
        assert!(SessionDeclarations::parse_inline("sigma:Sp(1) self-dual").is_err());
    }

    #[test]
    fn implicit_declarations_cover_expression_names() {
        let decls =
            SessionDeclarations::implicit_for("rho1 x Z[0,1]@rho2 |x sigma", false).unwrap();
        let gl_names: Vec<&str> = decls.gl.iter().map(|d| d.name.as_str()).collect();
        assert_eq!(gl_names, vec!["rho1", "rho2"]);
        assert_eq!(decls.sp.len(), 1);
        assert_eq!(decls.sp[0].name, "sigma");

        let lone_sp = SessionDeclarations::implicit_for("sigma", true).unwrap();
        assert!(lone_sp.gl.is_empty());
        assert_eq!(lone_sp.sp[0].name, "sigma");
        let lone_gl = SessionDeclarations::implicit_for("rho", false).unwrap();
        assert_eq!(lone_gl.gl[0].name, "rho");
        assert!(lone_gl.sp.is_empty());
    }
}
