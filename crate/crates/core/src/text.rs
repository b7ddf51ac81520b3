//! The line-oriented `.alg` presentation format.
//!
//! ```text
//! algebra quantum plane
//! params q
//! gens x1 poly, x2 poly
//! commute x1 x2 : q
//! ```
//!
//! Other statements: `tail A B : POLY`, `qskew I : UNIT`,
//! `weight I G : UNIT`, with `I` a 1-based polynomial generator index.
//! `#` starts a comment. Scalars must be signed parameter monomials.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::params::{Laurent, ParamRing};
use crate::presentation::{GenKind, Presentation, PresentationBuilder};
use crate::ring::CoeffRing;

/// A diagnostic with 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line: usize, src: &str, col0: usize) -> PResult<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Int(s.parse().unwrap()), col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if "+-*/^:,()".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(ParseError { line, col, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [Token],
    pos: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, toks: &'a [Token], end_col: usize) -> Self {
        Cursor { line, toks, pos: 0, end_col }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { line: self.line, col: self.col(), message: message.into() })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, usize)> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, col))
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    /// `^ [-] INT`, defaulting to 1.
    fn exponent(&mut self) -> PResult<i64> {
        if !self.eat_sym('^') {
            return Ok(1);
        }
        let neg = self.eat_sym('-');
        let col = self.col();
        let n = self.int()?;
        let n: i64 = n.try_into().map_err(|_| ParseError {
            line: self.line,
            col,
            message: "exponent out of range".into(),
        })?;
        Ok(if neg { -n } else { n })
    }
}

/// Symbols a polynomial expression may mention.
struct Scope<'a> {
    ring: &'a ParamRing,
    gens: &'a [(String, GenKind)],
}

/// One term: coefficient in `C` and a word in the generators.
type Term = (Laurent, Vec<(usize, i64)>);

fn parse_term(cur: &mut Cursor, scope: &Scope) -> PResult<Term> {
    let nv = scope.ring.nvars();
    let mut coef = Laurent::one(nv);
    let mut word = Vec::new();
    loop {
        match cur.peek() {
            Some(Tok::Int(_)) => {
                let n = cur.int()?;
                let d = if cur.eat_sym('/') {
                    let col = cur.col();
                    let d = cur.int()?;
                    if d.is_zero() {
                        return Err(ParseError { line: cur.line, col, message: "division by zero".into() });
                    }
                    d
                } else {
                    BigInt::one()
                };
                coef = coef.scale(&BigRational::new(n, d));
            }
            Some(Tok::Ident(_)) => {
                let (name, col) = cur.ident("a name")?;
                let e = cur.exponent()?;
                if let Some(k) = scope.ring.index_of(&name) {
                    coef = coef.mul(&Laurent::var(nv, k, e));
                } else if let Some(g) = scope.gens.iter().position(|(n, _)| *n == name) {
                    if e < 0 && scope.gens[g].1 == GenKind::Poly {
                        return Err(ParseError {
                            line: cur.line,
                            col,
                            message: format!("negative power of polynomial generator `{name}`"),
                        });
                    }
                    if e != 0 {
                        word.push((g, e));
                    }
                } else {
                    return Err(ParseError { line: cur.line, col, message: format!("unknown name `{name}`") });
                }
            }
            Some(Tok::Sym('(')) => {
                cur.pos += 1;
                let inner = parse_sum(cur, scope)?;
                cur.expect_sym(')')?;
                let mut acc_terms: Vec<Term> = Vec::new();
                for (c, w) in inner {
                    let mut ww = word.clone();
                    ww.extend(w);
                    acc_terms.push((coef.mul(&c), ww));
                }
                // a parenthesised sum may only be followed by more factors
                // when it is scalar, so fold it into the coefficient here
                if acc_terms.iter().all(|(_, w)| w.len() == word.len()) {
                    let mut s = Laurent::zero(nv);
                    for (c, _) in &acc_terms {
                        s = s.add(c);
                    }
                    coef = s;
                } else {
                    return cur.err("parenthesised generator sums are not supported");
                }
            }
            _ => return cur.err("expected a number, parameter or generator"),
        }
        if !cur.eat_sym('*') {
            return Ok((coef, word));
        }
    }
}

fn parse_sum(cur: &mut Cursor, scope: &Scope) -> PResult<Vec<Term>> {
    let mut terms = Vec::new();
    let mut neg = cur.eat_sym('-');
    if !neg {
        cur.eat_sym('+');
    }
    loop {
        let (c, w) = parse_term(cur, scope)?;
        terms.push((if neg { c.neg() } else { c }, w));
        if cur.eat_sym('+') {
            neg = false;
        } else if cur.eat_sym('-') {
            neg = true;
        } else {
            return Ok(terms);
        }
    }
}

fn parse_unit(cur: &mut Cursor, ring: &ParamRing) -> PResult<Laurent> {
    let col = cur.col();
    let scope = Scope { ring, gens: &[] };
    let terms = parse_sum(cur, &scope)?;
    let mut acc = Laurent::zero(ring.nvars());
    for (c, _) in terms {
        acc = acc.add(&c);
    }
    if acc.as_unit_monomial().is_none() {
        return Err(ParseError {
            line: cur.line,
            col,
            message: format!(
                "`{}` is not a signed parameter monomial; commutation scalars and weights must be ±1 times a product of parameter powers",
                acc.display_with(ring.names())
            ),
        });
    }
    Ok(acc)
}

/// Parses a scalar expression in the parameters of `ring`.
pub fn parse_scalar(ring: &ParamRing, src: &str) -> PResult<Laurent> {
    let toks = lex(1, src, 1)?;
    let mut cur = Cursor::new(1, &toks, src.chars().count() + 1);
    let scope = Scope { ring, gens: &[] };
    let terms = parse_sum(&mut cur, &scope)?;
    cur.finish()?;
    Ok(terms.into_iter().fold(Laurent::zero(ring.nvars()), |a, (c, _)| a.add(&c)))
}

/// Parses an element of `p` written as a sum of terms, e.g. `x + 1/2*q*y^2`.
pub fn parse_element(
    p: &Presentation<ParamRing>,
    src: &str,
) -> PResult<crate::normalform::NfElement<ParamRing>> {
    let toks = lex(1, src, 1)?;
    let mut cur = Cursor::new(1, &toks, src.chars().count() + 1);
    let gens: Vec<(String, GenKind)> =
        p.generators().iter().map(|g| (g.name.clone(), g.kind)).collect();
    let scope = Scope { ring: p.ring(), gens: &gens };
    let terms = parse_sum(&mut cur, &scope)?;
    cur.finish()?;
    let mut acc = crate::normalform::NfElement::zero(p);
    for (c, w) in terms {
        let t = p.word(&w).map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })?;
        acc = acc.add(p, &t.scale(p, &c)).expect("same presentation");
    }
    Ok(acc)
}

struct Stmt {
    line: usize,
    keyword: String,
    toks: Vec<Token>,
    end_col: usize,
}

fn lift(line: usize, col: usize, e: Error) -> ParseError {
    ParseError { line, col, message: e.to_string() }
}

/// Parses a presentation file.
pub fn parse_presentation(text: &str) -> PResult<Presentation<ParamRing>> {
    let mut name: Option<String> = None;
    let mut stmts = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        let rest = body.trim_start();
        let kw_len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let keyword = &rest[..kw_len];
        let kw_col = body[..lead].chars().count() + 1;
        let after = &rest[kw_len..];
        let after_col = kw_col + keyword.chars().count();
        if name.is_none() {
            if keyword != "algebra" {
                return Err(ParseError { line, col: kw_col, message: "file must start with `algebra NAME`".into() });
            }
            let n = after.trim();
            if n.is_empty() {
                return Err(ParseError { line, col: after_col, message: "missing algebra name".into() });
            }
            name = Some(n.to_string());
            continue;
        }
        match keyword {
            "params" | "gens" | "commute" | "tail" | "qskew" | "weight" => {}
            "algebra" => {
                return Err(ParseError { line, col: kw_col, message: "duplicate `algebra` header".into() })
            }
            _ => {
                return Err(ParseError { line, col: kw_col, message: format!("unknown statement `{keyword}`") })
            }
        }
        let toks = lex(line, after, after_col)?;
        stmts.push(Stmt {
            line,
            keyword: keyword.to_string(),
            toks,
            end_col: kw_col + rest.trim_end().chars().count(),
        });
    }
    let name = name.ok_or(ParseError { line: 1, col: 1, message: "empty file: expected `algebra NAME`".into() })?;

    // parameters first, so every later expression can be resolved
    let mut params: Vec<String> = Vec::new();
    let mut seen_params = false;
    for s in stmts.iter().filter(|s| s.keyword == "params") {
        let mut cur = Cursor::new(s.line, &s.toks, s.end_col);
        if seen_params {
            return cur.err("duplicate `params` statement");
        }
        seen_params = true;
        loop {
            let (p, col) = cur.ident("a parameter name")?;
            if params.contains(&p) {
                return Err(ParseError { line: s.line, col, message: format!("duplicate parameter `{p}`") });
            }
            params.push(p);
            if !cur.eat_sym(',') {
                break;
            }
        }
        cur.finish()?;
    }
    let ring = ParamRing::new(params);
    let mut b = PresentationBuilder::new(name, ring.clone());
    let mut gens: Vec<(String, GenKind)> = Vec::new();
    for s in stmts.iter().filter(|s| s.keyword == "gens") {
        let mut cur = Cursor::new(s.line, &s.toks, s.end_col);
        loop {
            let (g, col) = cur.ident("a generator name")?;
            if ring.index_of(&g).is_some() {
                return Err(ParseError { line: s.line, col, message: format!("`{g}` is already a parameter") });
            }
            let (kind, kcol) = cur.ident("`poly` or `laurent`")?;
            let kind = match kind.as_str() {
                "poly" => GenKind::Poly,
                "laurent" => GenKind::Laurent,
                other => {
                    return Err(ParseError {
                        line: s.line,
                        col: kcol,
                        message: format!("expected `poly` or `laurent`, found `{other}`"),
                    })
                }
            };
            b.generator(g.clone(), kind).map_err(|e| lift(s.line, col, e))?;
            gens.push((g, kind));
            if !cur.eat_sym(',') {
                break;
            }
        }
        cur.finish()?;
    }
    let scope = Scope { ring: &ring, gens: &gens };
    let gen_ref = |cur: &mut Cursor| -> PResult<usize> {
        let (g, col) = cur.ident("a generator name")?;
        gens.iter()
            .position(|(n, _)| *n == g)
            .ok_or(ParseError { line: cur.line, col, message: format!("unknown generator `{g}`") })
    };
    // `INDEX` (1-based) or a polynomial generator name
    let poly_ref = |cur: &mut Cursor| -> PResult<usize> {
        let col = cur.col();
        let i = match cur.peek() {
            Some(Tok::Int(_)) => {
                let n = cur.int()?;
                let n: usize = n.try_into().unwrap_or(0);
                if n == 0 {
                    return Err(ParseError { line: cur.line, col, message: "indices start at 1".into() });
                }
                n - 1
            }
            _ => gen_ref(cur)?,
        };
        if i >= gens.len() || gens[i].1 != GenKind::Poly {
            return Err(ParseError { line: cur.line, col, message: "expected a polynomial generator index".into() });
        }
        Ok(i)
    };
    for s in &stmts {
        let mut cur = Cursor::new(s.line, &s.toks, s.end_col);
        let col0 = cur.col();
        match s.keyword.as_str() {
            "params" | "gens" => continue,
            "commute" => {
                let a = gen_ref(&mut cur)?;
                let bb = gen_ref(&mut cur)?;
                cur.expect_sym(':')?;
                let u = parse_unit(&mut cur, &ring)?;
                cur.finish()?;
                b.commute(a, bb, u).map_err(|e| lift(s.line, col0, e))?;
            }
            "tail" => {
                let a = gen_ref(&mut cur)?;
                let bb = gen_ref(&mut cur)?;
                cur.expect_sym(':')?;
                let terms = parse_sum(&mut cur, &scope)?;
                cur.finish()?;
                b.tail(a, bb, terms).map_err(|e| lift(s.line, col0, e))?;
            }
            "qskew" => {
                let i = poly_ref(&mut cur)?;
                cur.expect_sym(':')?;
                let u = parse_unit(&mut cur, &ring)?;
                cur.finish()?;
                b.qskew(i, u).map_err(|e| lift(s.line, col0, e))?;
            }
            "weight" => {
                let h = poly_ref(&mut cur)?;
                let g = gen_ref(&mut cur)?;
                cur.expect_sym(':')?;
                let u = parse_unit(&mut cur, &ring)?;
                cur.finish()?;
                b.weight(h, g, u).map_err(|e| lift(s.line, col0, e))?;
            }
            _ => unreachable!(),
        }
    }
    let last = stmts.last().map_or(1, |s| s.line);
    b.build().map_err(|e| lift(last, 1, e))
}

fn scalar_string(ring: &ParamRing, c: &Laurent) -> String {
    c.display_with(ring.names())
}

/// Canonical text of a presentation; [`parse_presentation`] inverts it.
pub fn print_presentation(p: &Presentation<ParamRing>) -> String {
    let ring = p.ring();
    let mut out = format!("algebra {}\n", p.name());
    if ring.nvars() > 0 {
        out.push_str(&format!("params {}\n", ring.names().join(", ")));
    }
    if p.ngens() > 0 {
        let gens: Vec<String> = p
            .generators()
            .iter()
            .map(|g| {
                let k = match g.kind {
                    GenKind::Poly => "poly",
                    GenKind::Laurent => "laurent",
                };
                format!("{} {}", g.name, k)
            })
            .collect();
        out.push_str(&format!("gens {}\n", gens.join(", ")));
    }
    for a in 0..p.ngens() {
        for b in a + 1..p.ngens() {
            if !ring.is_one(p.commutation(a, b)) {
                out.push_str(&format!(
                    "commute {} {} : {}\n",
                    p.gen_name(a),
                    p.gen_name(b),
                    scalar_string(ring, p.commutation(a, b))
                ));
            }
        }
    }
    for (&(a, b), tail) in p.tails() {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (m, c) in tail.iter().rev() {
            let gens: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(g, &e)| if e == 1 { p.gen_name(g).to_string() } else { format!("{}^{}", p.gen_name(g), e) })
                .collect();
            for (pe, r) in c.terms().iter().rev() {
                let mut factors = Vec::new();
                let pm = crate::params::monomial_string(ring.names(), pe);
                if !r.abs().is_one() || (pm.is_empty() && gens.is_empty()) {
                    factors.push(r.abs().to_string());
                }
                if !pm.is_empty() {
                    factors.push(pm);
                }
                factors.extend(gens.iter().cloned());
                parts.push((r.is_negative(), factors.join("*")));
            }
        }
        let mut s = String::new();
        for (k, (neg, t)) in parts.iter().enumerate() {
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(t);
        }
        out.push_str(&format!("tail {} {} : {}\n", p.gen_name(a), p.gen_name(b), s));
    }
    for i in 0..p.npoly() {
        let has_tail = p.tails().keys().any(|&(a, _)| a == i);
        if has_tail || !ring.is_one(p.qskew(i)) {
            out.push_str(&format!("qskew {} : {}\n", i + 1, scalar_string(ring, p.qskew(i))));
        }
    }
    for h in 0..p.npoly() {
        for g in 0..p.ngens() {
            if *p.weight(h, g) != p.default_weight(h, g) {
                out.push_str(&format!(
                    "weight {} {} : {}\n",
                    h + 1,
                    p.gen_name(g),
                    scalar_string(ring, p.weight(h, g))
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{builtin_presentation, Family};

    #[test]
    fn plane_from_text() {
        let p = parse_presentation("algebra P\nparams q\ngens x poly, y poly\ncommute x y : q\n").unwrap();
        let b = builtin_presentation(&Family::QuantumPlane).unwrap();
        assert_eq!(p.commutation(0, 1), b.commutation(0, 1));
        assert_eq!(p.weight(0, 1), b.weight(0, 1));
        assert!(!p.has_tails());
    }

    #[test]
    fn tail_before_order_is_positioned() {
        let e = parse_presentation("algebra P\nparams q\ngens x poly, y poly\ncommute x y : q\ntail x y : x\n")
            .unwrap_err();
        assert_eq!(e.line, 5);
        assert_eq!(e.col, 6);
        assert!(e.message.contains("not later"), "{e}");
    }

    #[test]
    fn negative_unit_accepted() {
        let p = parse_presentation("algebra P\nparams q\ngens x poly, y poly\ncommute x y : -q\n").unwrap();
        assert_eq!(p.commutation(0, 1), &p.ring().unit(-1, vec![1]));
    }

    #[test]
    fn non_monomial_unit_rejected() {
        let e = parse_presentation("algebra P\nparams q\ngens x poly, y poly\ncommute x y : q + 1\n")
            .unwrap_err();
        assert_eq!((e.line, e.col), (4, 15));
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("params q\n", 1, 1),
            ("algebra A\ngens x poly\ncommute x z : 1\n", 3, 11),
            ("algebra A\ngens x poly, y poly\ncommute x y : 1\ncommute x y : 1\n", 4, 9),
            ("algebra A\ngens x blob\n", 2, 8),
            ("algebra A\nparams q\ngens x poly, y poly\ncommute x y : q $\n", 4, 17),
            ("algebra A\nfrob\n", 2, 1),
        ];
        for (src, line, col) in cases {
            let e = parse_presentation(src).unwrap_err();
            assert_eq!((e.line, e.col), (line, col), "{src:?}: {e}");
        }
    }

    #[test]
    fn scalars() {
        let r = ParamRing::new(["q"]);
        let f = parse_scalar(&r, "q^2 - 5*q + 6").unwrap();
        assert_eq!(f.display_with(r.names()), "q^2 - 5*q + 6");
        let g = parse_scalar(&r, "-1/2*q^-1 + (q + 1)*q").unwrap();
        assert_eq!(g.display_with(r.names()), "q^2 + q - 1/2*q^-1");
        assert!(parse_scalar(&r, "q +").is_err());
    }

    #[test]
    fn round_trip_builtins() {
        for fam in [
            Family::QuantumPlane,
            Family::QuantumAffine(3),
            Family::QuantumTorus(2),
            Family::QuantumWeyl(2),
            Family::QuantumMatrices(2),
            Family::parse("rank2(q^2 - 5*q + 6)").unwrap(),
        ] {
            let p = builtin_presentation(&fam).unwrap();
            let text = print_presentation(&p);
            let back = parse_presentation(&text).unwrap_or_else(|e| panic!("{fam}: {e}\n{text}"));
            assert_eq!(back, p, "{fam}\n{text}");
            assert_eq!(print_presentation(&back), text);
        }
    }
}
