//! Presentations `k<x_1..x_n | r_1, ..., r_m>` and their text format.
//!
//! ```text
//! field Q; gens x:1 y:2; rel x*y - y*x - x^3
//! ```
//!
//! Statements end with `;` or a newline, `#` starts a comment. Polynomials use `*` (or
//! juxtaposition) for concatenation, `^` for repetition and integer (or `a/b`) coefficients;
//! `rel p = q` stands for `rel p - q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::NcPolynomial;
use crate::scalar::Field;
use crate::word::{MonomialOrder, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub index: usize,
    pub name: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    field: Field,
    generators: Vec<Generator>,
    relations: Vec<NcPolynomial>,
}

impl AlgebraPresentation {
    /// Validates generators and relations; relations are kept as given.
    pub fn new(field: Field, generators: Vec<Generator>, relations: Vec<NcPolynomial>) -> Result<Self> {
        let weights: Vec<u32> = generators.iter().map(|g| g.weight).collect();
        if weights.contains(&0) || weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::BadWeights);
        }
        for (i, g) in generators.iter().enumerate() {
            if g.index != i {
                return Err(Error::Parameter("generator indices must be 0..n".into()));
            }
        }
        let mut normalized = Vec::with_capacity(relations.len());
        for (i, r) in relations.iter().enumerate() {
            if r.field() != field {
                return Err(Error::Parameter("relation over a different field".into()));
            }
            if r.is_zero() {
                return Err(Error::ZeroRelation(i));
            }
            if r.generator_span() > generators.len() {
                return Err(Error::Parameter(format!("relation {i} uses an undeclared generator")));
            }
            let d = r.homogeneous_degree(&weights).ok_or(Error::Inhomogeneous(i))?;
            let min_len = r.terms().map(|(w, _)| w.len()).min().unwrap_or(0);
            if d < 2 || min_len < 2 {
                return Err(Error::LowDegreeRelation { index: i, degree: d });
            }
            normalized.push(r.clone());
        }
        if let Some(i) = first_dependent(&normalized) {
            return Err(Error::DependentRelations(i));
        }
        Ok(AlgebraPresentation {
            field,
            generators,
            relations: normalized,
        })
    }

    /// Generators named `x1..xn` (or `x, y, z, t` style names when `names` is given).
    pub fn with_weights(field: Field, names: &[&str], weights: &[u32], relations: Vec<NcPolynomial>) -> Result<Self> {
        let gens = names
            .iter()
            .zip(weights)
            .enumerate()
            .map(|(i, (n, w))| Generator {
                index: i,
                name: n.to_string(),
                weight: *w,
            })
            .collect();
        Self::new(field, gens, relations)
    }

    /// Degree-one generators `x1..xn`.
    pub fn standard(field: Field, n: usize, relations: Vec<NcPolynomial>) -> Result<Self> {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        Self::with_weights(field, &refs, &vec![1; n], relations)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[NcPolynomial] {
        &self.relations
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.weight).collect()
    }

    pub fn default_order(&self) -> MonomialOrder {
        MonomialOrder::default_for(&self.weights())
    }

    pub fn relation_degrees(&self) -> Vec<u32> {
        let w = self.weights();
        self.relations
            .iter()
            .map(|r| r.homogeneous_degree(&w).unwrap_or(0))
            .collect()
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relation_degrees().into_iter().max().unwrap_or(0)
    }

    pub fn is_degree_one_generated(&self) -> bool {
        self.generators.iter().all(|g| g.weight == 1)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// Same generators, different relations.
    pub fn with_relations(&self, relations: Vec<NcPolynomial>) -> Result<Self> {
        Self::new(self.field, self.generators.clone(), relations)
    }

    /// Parses a polynomial over this presentation's generators.
    pub fn parse_poly(&self, text: &str) -> Result<NcPolynomial> {
        let names = self.names();
        let mut toks = tokenize(text)?;
        while toks.last().is_some_and(|t| t.text == ";") {
            toks.pop();
        }
        let mut p = PolyParser {
            toks: &toks,
            pos: 0,
            names: &names,
            field: self.field,
        };
        let poly = p.expr()?;
        if p.pos != toks.len() {
            let t = &toks[p.pos];
            return Err(Error::Parse {
                line: t.line,
                col: t.col,
                msg: format!("unexpected `{}`", t.text),
            });
        }
        Ok(poly)
    }

    /// Renders a polynomial with terms sorted descending under the default order.
    pub fn poly_to_string(&self, p: &NcPolynomial) -> String {
        render_poly(p, &self.names(), &self.default_order())
    }

    /// Canonical text form; `parse(render(P)) == P`.
    pub fn render(&self) -> String {
        let order = self.default_order();
        let names = self.names();
        let mut s = format!("field {};\ngens", self.field);
        for g in &self.generators {
            s.push_str(&format!(" {}:{}", g.name, g.weight));
        }
        s.push_str(";\n");
        for r in &self.relations {
            s.push_str("rel ");
            s.push_str(&render_poly(r, &names, &order));
            s.push_str(";\n");
        }
        s
    }
}

fn first_dependent(rels: &[NcPolynomial]) -> Option<usize> {
    // echelon keyed by largest word in natural order
    let mut pivots: BTreeMap<Word, NcPolynomial> = BTreeMap::new();
    for (i, r) in rels.iter().enumerate() {
        let mut v = r.clone();
        loop {
            let Some((w, c)) = v.terms().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
                return Some(i);
            };
            match pivots.get(&w) {
                Some(p) => v = v.sub(&p.scale(&c)),
                None => {
                    pivots.insert(w, v.scale(&c.inv()));
                    break;
                }
            }
        }
    }
    None
}

fn render_poly(p: &NcPolynomial, names: &[String], order: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms = p.sorted_terms(order);
    let coeffs: Vec<BigRational> = terms.iter().map(|(_, c)| c.to_rational()).collect();
    let mut out = String::new();
    for (i, ((w, _), c)) in terms.iter().zip(&coeffs).enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let word = render_word(w, names);
        if w.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&word);
        } else {
            out.push_str(&format!("{a}*{word}"));
        }
    }
    out
}

pub fn render_word(w: &Word, names: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let l = w.letters();
    let mut i = 0;
    while i < l.len() {
        let mut j = i;
        while j < l.len() && l[j] == l[i] {
            j += 1;
        }
        let name = &names[l[i] as usize];
        if j - i == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{}^{}", name, j - i));
        }
        i = j;
    }
    parts.join("*")
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut toks = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            if c.is_ascii_alphabetic() || c == '_' {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
            } else if c.is_ascii_digit() {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            } else if ";:*^+-=()/".contains(c) {
                i += 1;
            } else {
                return Err(Error::Parse {
                    line: li + 1,
                    col,
                    msg: format!("unexpected character `{c}`"),
                });
            }
            toks.push(Token {
                text: chars[start..i].iter().collect(),
                line: li + 1,
                col,
            });
        }
        toks.push(Token {
            text: ";".into(),
            line: li + 1,
            col: chars.len() + 1,
        });
    }
    Ok(toks)
}

struct PolyParser<'a> {
    toks: &'a [Token],
    pos: usize,
    names: &'a [String],
    field: Field,
}

impl<'a> PolyParser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = match self.peek().or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (0, 0),
        };
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<NcPolynomial> {
        let mut acc = NcPolynomial::zero(self.field);
        let mut first = true;
        loop {
            let sign = match self.peek().map(|t| t.text.as_str()) {
                Some("+") => {
                    self.pos += 1;
                    1
                }
                Some("-") => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NcPolynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().map(|t| t.text.as_str()) {
                Some("*") => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(s) if s == "(" || s.chars().next().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NcPolynomial> {
        let tok = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        let base = if tok.text == "(" {
            self.pos += 1;
            let e = self.expr()?;
            match self.peek() {
                Some(t) if t.text == ")" => self.pos += 1,
                _ => return Err(self.err("expected `)`")),
            }
            e
        } else if tok.text.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            let num: BigInt = tok.text.parse().map_err(|_| self.err("bad integer"))?;
            let mut q = BigRational::from_integer(num);
            if self.peek().is_some_and(|t| t.text == "/") {
                self.pos += 1;
                let d = self.peek().ok_or_else(|| self.err("expected denominator"))?;
                let den: BigInt = d.text.parse().map_err(|_| self.err("bad denominator"))?;
                if den.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                self.pos += 1;
                q /= BigRational::from_integer(den);
            }
            NcPolynomial::monomial(self.field.from_rational(&q)?, Word::empty())
        } else if tok.text.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            let idx = self
                .names
                .iter()
                .position(|n| *n == tok.text)
                .ok_or_else(|| Error::UnknownGenerator(tok.text.clone()))?;
            self.pos += 1;
            NcPolynomial::generator(self.field, idx)
        } else {
            return Err(self.err(format!("unexpected `{}`", tok.text)));
        };
        if self.peek().is_some_and(|t| t.text == "^") {
            self.pos += 1;
            let e = self.peek().ok_or_else(|| self.err("expected exponent"))?;
            let k: u32 = e.text.parse().map_err(|_| self.err("bad exponent"))?;
            self.pos += 1;
            let mut r = NcPolynomial::one(self.field);
            for _ in 0..k {
                r = r.mul(&base);
            }
            return Ok(r);
        }
        Ok(base)
    }
}

/// Parses the presentation format; `field_override` replaces the declared field.
pub fn parse_presentation_with_field(text: &str, field_override: Option<Field>) -> Result<AlgebraPresentation> {
    let toks = tokenize(text)?;
    let mut field: Option<Field> = None;
    let mut gens: Option<Vec<Generator>> = None;
    let mut rel_spans: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let start = i;
        while i < toks.len() && toks[i].text != ";" {
            i += 1;
        }
        let stmt = &toks[start..i];
        i += 1;
        let Some(head) = stmt.first() else { continue };
        let perr = |t: &Token, msg: String| Error::Parse {
            line: t.line,
            col: t.col,
            msg,
        };
        match head.text.as_str() {
            "field" => {
                let t = stmt.get(1).ok_or_else(|| perr(head, "missing field".into()))?;
                if stmt.len() > 2 {
                    return Err(perr(&stmt[2], "unexpected token after field".into()));
                }
                field = Some(if t.text == "Q" {
                    Field::Rational
                } else if let Some(p) = t.text.strip_prefix('F') {
                    let p: u32 = p.parse().map_err(|_| perr(t, format!("bad field `{}`", t.text)))?;
                    Field::prime(p)?
                } else {
                    return Err(perr(t, format!("bad field `{}`", t.text)));
                });
            }
            "gens" => {
                let mut list = Vec::new();
                let mut j = 1;
                while j < stmt.len() {
                    let name = &stmt[j];
                    if !name.text.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
                        return Err(perr(name, format!("expected generator name, found `{}`", name.text)));
                    }
                    let mut weight = 1u32;
                    j += 1;
                    if j < stmt.len() && stmt[j].text == ":" {
                        let w = stmt.get(j + 1).ok_or_else(|| perr(&stmt[j], "missing weight".into()))?;
                        weight = w.text.parse().map_err(|_| perr(w, format!("bad weight `{}`", w.text)))?;
                        j += 2;
                    }
                    if list.iter().any(|g: &Generator| g.name == name.text) {
                        return Err(perr(name, format!("duplicate generator `{}`", name.text)));
                    }
                    list.push(Generator {
                        index: list.len(),
                        name: name.text.clone(),
                        weight,
                    });
                }
                gens = Some(list);
            }
            "rel" => rel_spans.push((start + 1, i - 1)),
            other => return Err(perr(head, format!("unknown statement `{other}`"))),
        }
    }
    let field = field_override.or(field).ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing `field` statement".into(),
    })?;
    let gens = gens.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "missing `gens` statement".into(),
    })?;
    let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    let mut rels = Vec::new();
    for (a, b) in rel_spans {
        let slice = &toks[a..b];
        let eq = slice.iter().position(|t| t.text == "=");
        let parse_side = |s: &[Token]| -> Result<NcPolynomial> {
            let mut p = PolyParser {
                toks: s,
                pos: 0,
                names: &names,
                field,
            };
            let poly = p.expr()?;
            if p.pos != s.len() {
                let t = &s[p.pos];
                return Err(Error::Parse {
                    line: t.line,
                    col: t.col,
                    msg: format!("unexpected `{}`", t.text),
                });
            }
            Ok(poly)
        };
        let poly = match eq {
            Some(k) => parse_side(&slice[..k])?.sub(&parse_side(&slice[k + 1..])?),
            None => parse_side(slice)?,
        };
        rels.push(poly);
    }
    AlgebraPresentation::new(field, gens, rels)
}

pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation> {
    parse_presentation_with_field(text, None)
}

/// Convenience used by fixtures and tests: `c * word` from a list of names.
pub fn scalar_word(field: Field, c: i64, letters: &[usize]) -> NcPolynomial {
    NcPolynomial::monomial(field.from_i64(c), Word::from_letters(letters))
}
