use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::algebra::{Coeff, GradedPoly, Grading, MultiIndex, Parity, VariableId};
use crate::brst::{NiGenerator, NoetherIdentityData};
use crate::models::{FieldDecl, ParamKind, ParamTensor, Role, RosterError, TheoryModel};
use crate::symmetry::Derivation;

use super::ast::{Expr, IndexArg};
use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind};

type PResult<T> = Result<T, ParseError>;

/// Parses and elaborates a theory document.
pub fn parse(src: &str) -> PResult<TheoryModel> {
    let mut p = Parser {
        src,
        toks: tokenize(src)?,
        pos: 0,
        name: None,
        model: None,
        ranges: BTreeMap::new(),
        defines: HashMap::new(),
        memo: HashMap::new(),
        tower: BTreeMap::new(),
    };
    while p.peek() != &Tok::Eof {
        p.statement()?;
    }
    let offset = p.offset();
    let mut model = p.model.take().ok_or_else(|| {
        ParseError::new(
            ParseErrorKind::Syntax {
                expected: vec!["`dim`".into()],
                found: "end of input".into(),
            },
            src,
            offset,
        )
    })?;
    model.tower = p
        .tower
        .into_iter()
        .map(|(stage, gens)| NoetherIdentityData::new(stage, gens))
        .collect();
    Ok(model)
}

#[derive(Clone, Copy, Debug)]
enum Range {
    Fixed(usize),
    Base,
}

struct Define {
    params: Vec<String>,
    body: Expr,
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    name: Option<String>,
    model: Option<TheoryModel>,
    ranges: BTreeMap<String, Range>,
    defines: HashMap<String, Define>,
    memo: HashMap<(String, Vec<usize>), GradedPoly>,
    tower: BTreeMap<usize, Vec<NiGenerator>>,
}

type Env = BTreeMap<String, usize>;

impl<'a> Parser<'a> {
    // ---- token plumbing

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind, offset: usize) -> ParseError {
        ParseError::new(kind, self.src, offset)
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(
            ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.peek().describe(),
            },
            self.offset(),
        )
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
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
            Err(self.unexpected(&[&format!("`{c}`")]))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    fn ident(&mut self) -> PResult<(String, usize)> {
        let off = self.offset();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok((s, off))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn int(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(n as usize)
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn rational(&mut self) -> PResult<Coeff> {
        let neg = self.eat_sym('-');
        let num = self.int()? as i64;
        let den = if self.eat_sym('/') { self.int()? as i64 } else { 1 };
        if den == 0 {
            return Err(self.error(
                ParseErrorKind::Evaluation {
                    detail: "division by zero".into(),
                },
                self.offset(),
            ));
        }
        let v = Coeff::new(num.into(), den.into());
        Ok(if neg { -v } else { v })
    }

    fn parity(&mut self) -> PResult<Parity> {
        if self.eat_keyword("even") {
            Ok(Parity::Even)
        } else if self.eat_keyword("odd") {
            Ok(Parity::Odd)
        } else {
            Err(self.unexpected(&["`even`", "`odd`"]))
        }
    }

    fn model(&mut self, offset: usize) -> PResult<&mut TheoryModel> {
        if self.model.is_none() {
            return Err(self.error(
                ParseErrorKind::Syntax {
                    expected: vec!["`dim`".into()],
                    found: self.toks[self.pos.saturating_sub(1)].tok.describe(),
                },
                offset,
            ));
        }
        Ok(self.model.as_mut().expect("checked"))
    }

    fn dim(&self) -> usize {
        self.model.as_ref().map_or(0, |m| m.dim)
    }

    // ---- statements

    fn statement(&mut self) -> PResult<()> {
        let (kw, off) = self.ident()?;
        match kw.as_str() {
            "theory" => {
                let name = match self.peek().clone() {
                    Tok::Str(s) => {
                        self.pos += 1;
                        s
                    }
                    _ => return Err(self.unexpected(&["model name string"])),
                };
                if let Some(m) = self.model.as_mut() {
                    m.name = name.clone();
                }
                self.name = Some(name);
            }
            "dim" => {
                let n = self.int()?;
                if self.model.is_some() {
                    return Err(self.error(
                        ParseErrorKind::Syntax {
                            expected: vec!["a single `dim` declaration".into()],
                            found: "`dim`".into(),
                        },
                        off,
                    ));
                }
                let name = self.name.clone().unwrap_or_else(|| "theory".into());
                self.model = Some(TheoryModel::new(&name, n));
            }
            "max_jet_order" => {
                let n = self.int()?;
                self.model(off)?.max_jet_order = Some(n);
            }
            "display" => {
                self.expect_keyword("physics")?;
                self.model(off)?.physics_display = true;
            }
            "index" => self.index_decl()?,
            "param" => self.param_decl(off)?,
            "field" => self.field_decl(off, Role::Field)?,
            "ghost" => self.field_decl(off, Role::Ghost)?,
            "antifield" => self.antifield_decl(off)?,
            "define" => self.define()?,
            "lagrangian" => {
                self.model(off)?;
                self.expect_sym('=')?;
                let (e, eoff) = self.expr_with_offset()?;
                let l = self.eval_closed(&e, eoff)?;
                check_terms(&l, |g| g == Grading::even()).map_err(|found| {
                    self.grading_error(format!("the Lagrangian must be even and ghost-free, found a term of grading {found:?}"), eoff)
                })?;
                self.model.as_mut().expect("checked").lagrangian = l;
            }
            "extended" => {
                self.model(off)?;
                self.expect_sym('=')?;
                let (e, eoff) = self.expr_with_offset()?;
                let l = self.eval_closed(&e, eoff)?;
                check_terms(&l, |g| g.parity == Parity::Even && g.ghost_number() == 0).map_err(|found| {
                    self.grading_error(format!("the extended Lagrangian must be even of ghost number 0, found {found:?}"), eoff)
                })?;
                self.model.as_mut().expect("checked").extended = Some(l);
            }
            "ni" => self.ni_decl(off)?,
            "gauge" => {
                let d = self.derivation_block(off, Parity::Odd, true)?;
                self.model(off)?.gauge = Some(d);
            }
            "brst" => {
                let d = self.derivation_block(off, Parity::Odd, true)?;
                self.model(off)?.brst = Some(d);
            }
            "derivation" => {
                let (name, _) = self.ident()?;
                let parity = self.parity()?;
                let d = self.derivation_block(off, parity, false)?;
                self.model(off)?.derivations.insert(name, d);
            }
            _ => {
                return Err(self.error(
                    ParseErrorKind::Syntax {
                        expected: vec!["a statement keyword".into()],
                        found: format!("`{kw}`"),
                    },
                    off,
                ))
            }
        }
        self.expect_sym(';')
    }

    fn grading_error(&self, detail: String, offset: usize) -> ParseError {
        self.error(ParseErrorKind::GradingInconsistency { detail }, offset)
    }

    fn index_decl(&mut self) -> PResult<()> {
        let mut names = vec![self.ident()?.0];
        while self.eat_sym(',') {
            names.push(self.ident()?.0);
        }
        self.expect_sym(':')?;
        let range = if self.eat_keyword("base") {
            Range::Base
        } else {
            Range::Fixed(self.int()?)
        };
        for n in names {
            self.ranges.insert(n, range);
        }
        Ok(())
    }

    fn shape(&mut self) -> PResult<Vec<usize>> {
        let mut shape = Vec::new();
        if self.eat_sym('[') && !self.eat_sym(']') {
            loop {
                shape.push(self.shape_entry()?);
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        Ok(shape)
    }

    fn shape_entry(&mut self) -> PResult<usize> {
        if self.eat_keyword("base") {
            Ok(self.dim())
        } else {
            self.int()
        }
    }

    fn param_decl(&mut self, off: usize) -> PResult<()> {
        self.model(off)?;
        let (name, noff) = self.ident()?;
        self.check_fresh(&name, noff)?;
        let shape = self.shape()?;
        let kind = if self.eat_keyword("structure") {
            ParamKind::Structure
        } else if self.eat_keyword("metric") {
            ParamKind::Metric
        } else if self.eat_keyword("levi") {
            ParamKind::LeviCivita
        } else {
            ParamKind::General
        };
        self.expect_sym('=')?;
        let voff = self.offset();
        let mut t = ParamTensor::new(&name, shape.clone(), kind);
        if self.eat_keyword("levi") {
            self.expect_sym('(')?;
            let n = self.int()?;
            self.expect_sym(')')?;
            t = ParamTensor::levi_civita(&name, n, kind);
        } else if self.eat_keyword("delta") {
            self.expect_sym('(')?;
            let n = self.int()?;
            self.expect_sym(')')?;
            t = ParamTensor::identity(&name, n, kind);
        } else if self.eat_keyword("diag") {
            self.expect_sym('(')?;
            let mut diag = vec![self.rational()?];
            while self.eat_sym(',') {
                diag.push(self.rational()?);
            }
            self.expect_sym(')')?;
            t = ParamTensor::new(&name, vec![diag.len(); 2], kind);
            for (i, v) in diag.into_iter().enumerate() {
                t.set(vec![i, i], v);
            }
        } else {
            self.expect_sym('{')?;
            while !self.eat_sym('}') {
                let eoff = self.offset();
                self.expect_sym('[')?;
                let mut idx = Vec::new();
                if !self.eat_sym(']') {
                    loop {
                        idx.push(self.int()?);
                        if self.eat_sym(']') {
                            break;
                        }
                        self.expect_sym(',')?;
                    }
                }
                if idx.len() != shape.len() {
                    return Err(self.error(
                        ParseErrorKind::IndexArityMismatch {
                            name: name.clone(),
                            expected: shape.len(),
                            found: idx.len(),
                        },
                        eoff,
                    ));
                }
                self.check_bounds(&name, &idx, &shape, eoff)?;
                self.expect_sym(':')?;
                let v = self.rational()?;
                t.set(idx, v);
                if !self.eat_sym(',') {
                    self.expect_sym('}')?;
                    break;
                }
            }
        }
        if t.shape != shape {
            return Err(self.error(
                ParseErrorKind::IndexArityMismatch {
                    name: name.clone(),
                    expected: shape.len(),
                    found: t.shape.len(),
                },
                voff,
            ));
        }
        self.model(off)?.params.push(t);
        Ok(())
    }

    fn check_fresh(&self, name: &str, offset: usize) -> PResult<()> {
        let taken = self.defines.contains_key(name)
            || self.model.as_ref().is_some_and(|m| {
                m.param(name).is_some() || m.roster.get(name).is_some()
            });
        if taken || name == "d" || name == "x" {
            return Err(self.error(
                ParseErrorKind::Syntax {
                    expected: vec!["a fresh name".into()],
                    found: format!("`{name}`"),
                },
                offset,
            ));
        }
        Ok(())
    }

    fn check_bounds(&self, name: &str, idx: &[usize], shape: &[usize], offset: usize) -> PResult<()> {
        for (&i, &n) in idx.iter().zip(shape) {
            if i >= n {
                return Err(self.error(
                    ParseErrorKind::IndexOutOfRange {
                        name: name.to_string(),
                        value: i,
                        bound: n,
                    },
                    offset,
                ));
            }
        }
        Ok(())
    }

    fn roster_error(&self, e: RosterError, offset: usize) -> ParseError {
        let kind = match e {
            RosterError::Duplicate(n) => ParseErrorKind::Syntax {
                expected: vec!["a fresh name".into()],
                found: format!("`{n}`"),
            },
            RosterError::UnknownPartner(n) => ParseErrorKind::UnknownIdentifier { name: n },
            RosterError::BadPartner(n) => ParseErrorKind::GradingInconsistency {
                detail: format!("`{n}` already is an antifield"),
            },
            RosterError::ParityMismatch(n) => ParseErrorKind::GradingInconsistency {
                detail: format!("antifield `{n}` must have the opposite parity of its partner"),
            },
            RosterError::NotSquare(n) => ParseErrorKind::GradingInconsistency {
                detail: format!("symmetric family `{n}` needs equal index ranges"),
            },
        };
        self.error(kind, offset)
    }

    fn field_decl(&mut self, off: usize, role: Role) -> PResult<()> {
        self.model(off)?;
        let (name, noff) = self.ident()?;
        self.check_fresh(&name, noff)?;
        let shape = self.shape()?;
        let parity = self.parity()?;
        let mut decl = FieldDecl::new(&name, role, shape, parity);
        loop {
            if self.eat_keyword("symmetric") {
                decl = decl.symmetric();
            } else if self.eat_keyword("stage") {
                let k = self.int()?;
                if role != Role::Ghost {
                    return Err(self.grading_error("only ghosts carry a stage".into(), noff));
                }
                decl = decl.stage(k as u32);
            } else {
                break;
            }
        }
        let model = self.model.as_mut().expect("checked");
        if let Err(e) = model.roster.declare(decl) {
            return Err(self.roster_error(e, noff));
        }
        Ok(())
    }

    fn antifield_decl(&mut self, off: usize) -> PResult<()> {
        self.model(off)?;
        let (name, noff) = self.ident()?;
        self.check_fresh(&name, noff)?;
        self.expect_keyword("of")?;
        let (partner, poff) = self.ident()?;
        let p = self
            .model
            .as_ref()
            .and_then(|m| m.roster.get(&partner))
            .ok_or_else(|| self.error(ParseErrorKind::UnknownIdentifier { name: partner.clone() }, poff))?;
        let natural = p.parity.flip();
        let parity = if matches!(self.peek(), Tok::Ident(s) if s == "even" || s == "odd") {
            self.parity()?
        } else {
            natural
        };
        let mut decl = FieldDecl::new(&name, Role::Antifield, Vec::new(), parity);
        decl.partner = Some(partner);
        let model = self.model.as_mut().expect("checked");
        if let Err(e) = model.roster.declare(decl) {
            return Err(self.roster_error(e, noff));
        }
        Ok(())
    }

    fn define(&mut self) -> PResult<()> {
        let (name, noff) = self.ident()?;
        self.check_fresh(&name, noff)?;
        let mut params = Vec::new();
        if self.eat_sym('[') && !self.eat_sym(']') {
            loop {
                let (p, poff) = self.ident()?;
                self.range_of(&p, poff)?;
                params.push(p);
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        self.expect_sym('=')?;
        let body = self.expr()?;
        self.defines.insert(name, Define { params, body });
        Ok(())
    }

    /// `ghost[pattern] = expr`, expanded over the pattern's index names.
    fn ni_decl(&mut self, off: usize) -> PResult<()> {
        self.model(off)?;
        let (ghost, goff) = self.ident()?;
        let (decl, pattern) = self.pattern(&ghost, goff)?;
        if decl.role != Role::Ghost {
            return Err(self.grading_error(format!("`{ghost}` is not a ghost"), goff));
        }
        self.expect_sym('=')?;
        let (e, eoff) = self.expr_with_offset()?;
        let stage = decl.stage as usize;
        let expected = Grading::new(decl.parity, 0, 0);
        for idx in self.expand_pattern(&decl, &pattern, goff)? {
            let env: Env = bind(&pattern, &idx);
            let delta = self.eval(&e, &mut env.clone())?;
            check_terms(&delta, |g| {
                g.parity == expected.parity && g.ghost_number() == -(stage as i64 + 1)
            })
            .map_err(|found| {
                self.grading_error(
                    format!("identity for `{ghost}` must have parity {} and ghost number {}, found {found:?}", decl.parity, -(stage as i64 + 1)),
                    eoff,
                )
            })?;
            let model = self.model.as_ref().expect("checked");
            let g = model
                .ni_generator(&decl.variable(&idx), &delta)
                .map_err(|e| self.grading_error(e.to_string(), goff))?;
            let gens = self.tower.entry(stage).or_default();
            gens.retain(|h| h.ghost != g.ghost);
            gens.push(g);
        }
        Ok(())
    }

    /// `name[i, 0, j]` on the left of a declaration.
    fn pattern(&mut self, name: &str, offset: usize) -> PResult<(FieldDecl, Vec<IndexArg>)> {
        let decl = self
            .model
            .as_ref()
            .and_then(|m| m.roster.get(name))
            .cloned()
            .ok_or_else(|| self.error(ParseErrorKind::UnknownIdentifier { name: name.to_string() }, offset))?;
        let mut args = Vec::new();
        if self.eat_sym('[') && !self.eat_sym(']') {
            loop {
                args.push(self.index_arg()?);
                if self.eat_sym(']') {
                    break;
                }
                if self.peek() == &Tok::Sym(';') {
                    return Err(self.unexpected(&["`]`"]));
                }
                self.expect_sym(',')?;
            }
        }
        if args.len() != decl.shape.len() {
            return Err(self.error(
                ParseErrorKind::IndexArityMismatch {
                    name: name.to_string(),
                    expected: decl.shape.len(),
                    found: args.len(),
                },
                offset,
            ));
        }
        Ok((decl, args))
    }

    /// Every canonical index tuple matched by a pattern.
    fn expand_pattern(&self, decl: &FieldDecl, pattern: &[IndexArg], offset: usize) -> PResult<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for idx in decl.components() {
            let mut env = Env::new();
            let mut ok = true;
            for (a, &i) in pattern.iter().zip(&idx) {
                match a {
                    IndexArg::Lit(v) => ok &= *v == i,
                    IndexArg::Name(n) => {
                        let bound = self.range_of(n, offset)?;
                        ok &= i < bound;
                        if let Some(prev) = env.insert(n.clone(), i) {
                            ok &= prev == i;
                        }
                    }
                }
            }
            if ok {
                out.push(idx);
            }
        }
        for a in pattern {
            if let IndexArg::Lit(v) = a {
                let max = decl.shape.iter().copied().max().unwrap_or(0);
                if *v >= max {
                    return Err(self.error(
                        ParseErrorKind::IndexOutOfRange {
                            name: decl.name.clone(),
                            value: *v,
                            bound: max,
                        },
                        offset,
                    ));
                }
            }
        }
        Ok(out)
    }

    fn derivation_block(&mut self, off: usize, parity: Parity, ascent: bool) -> PResult<Derivation> {
        self.model(off)?;
        let mut d = Derivation::new(parity);
        if self.eat_keyword("extends") {
            let (base, boff) = self.ident()?;
            let m = self.model.as_ref().expect("checked");
            let found = match base.as_str() {
                "gauge" => m.gauge.clone(),
                "brst" => m.brst.clone(),
                other => m.derivations.get(other).cloned(),
            };
            let found = found.ok_or_else(|| self.error(ParseErrorKind::UnknownIdentifier { name: base.clone() }, boff))?;
            if found.parity() != parity {
                return Err(self.grading_error(format!("`{base}` has parity {}", found.parity()), boff));
            }
            d = found;
        }
        self.expect_sym('{')?;
        while !self.eat_sym('}') {
            let (name, noff) = self.ident()?;
            let (decl, pattern) = self.pattern(&name, noff)?;
            if self.peek() != &Tok::Arrow {
                return Err(self.unexpected(&["`->`"]));
            }
            self.bump();
            let (e, eoff) = self.expr_with_offset()?;
            for idx in self.expand_pattern(&decl, &pattern, noff)? {
                let v = decl.variable(&idx);
                let comp = self.eval(&e, &mut bind(&pattern, &idx))?;
                let want = v.grading();
                check_terms(&comp, |g| {
                    g.parity == want.parity + parity
                        && (!ascent || g.ghost_number() == want.ghost_number() + 1)
                })
                .map_err(|found| {
                    self.grading_error(
                        format!("component for `{name}` has grading {found:?}, incompatible with a {parity} derivation"),
                        eoff,
                    )
                })?;
                d.set(v, comp);
            }
            self.expect_sym(';')?;
        }
        Ok(d)
    }

    // ---- expressions (Pratt)

    fn expr_with_offset(&mut self) -> PResult<(Expr, usize)> {
        let off = self.offset();
        Ok((self.expr()?, off))
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.expr_bp(0)
    }

    fn expr_bp(&mut self, min_bp: u8) -> PResult<Expr> {
        let mut lhs = if self.eat_sym('-') {
            Expr::Neg(Box::new(self.expr_bp(25)?))
        } else if self.eat_sym('+') {
            self.expr_bp(25)?
        } else {
            self.atom()?
        };
        loop {
            let (l_bp, r_bp) = match self.peek() {
                Tok::Sym('+') | Tok::Sym('-') => (10, 11),
                Tok::Sym('*') | Tok::Sym('/') => (20, 21),
                Tok::Sym('^') => (31, 30),
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            let op = self.bump();
            if op.tok == Tok::Sym('^') {
                let n = self.int()?;
                lhs = Expr::Pow(Box::new(lhs), n as u32);
                continue;
            }
            let rhs = self.expr_bp(r_bp)?;
            lhs = match op.tok {
                Tok::Sym('+') => push_sum(lhs, rhs),
                Tok::Sym('-') => push_sum(lhs, Expr::Neg(Box::new(rhs))),
                Tok::Sym('*') => match lhs {
                    Expr::Product(mut fs) => {
                        fs.push(rhs);
                        Expr::Product(fs)
                    }
                    other => Expr::Product(vec![other, rhs]),
                },
                Tok::Sym('/') => Expr::Div(Box::new(lhs), Box::new(rhs), op.offset),
                _ => unreachable!("operator table"),
            };
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let off = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Num(Coeff::from_integer((n as i64).into())))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                let (idx, jet) = self.subscripts()?;
                if name == "d" && !self.defines.contains_key("d") {
                    if !jet.is_empty() {
                        return Err(self.unexpected(&["`]`"]));
                    }
                    self.expect_sym('(')?;
                    let body = self.expr()?;
                    self.expect_sym(')')?;
                    return Ok(Expr::Deriv {
                        idx,
                        body: Box::new(body),
                        offset: off,
                    });
                }
                Ok(Expr::Sym {
                    name,
                    idx,
                    jet,
                    offset: off,
                })
            }
            _ => Err(self.unexpected(&["number", "identifier", "`(`", "`-`"])),
        }
    }

    fn subscripts(&mut self) -> PResult<(Vec<IndexArg>, Vec<IndexArg>)> {
        let mut idx = Vec::new();
        let mut jet = Vec::new();
        if !self.eat_sym('[') {
            return Ok((idx, jet));
        }
        let mut in_jet = false;
        if self.eat_sym(']') {
            return Ok((idx, jet));
        }
        loop {
            if self.eat_sym(';') {
                if in_jet {
                    return Err(self.unexpected(&["index"]));
                }
                in_jet = true;
                continue;
            }
            let a = self.index_arg()?;
            if in_jet {
                jet.push(a);
            } else {
                idx.push(a);
            }
            if self.eat_sym(']') {
                break;
            }
            if self.peek() == &Tok::Sym(';') {
                continue;
            }
            self.expect_sym(',')?;
        }
        Ok((idx, jet))
    }

    fn index_arg(&mut self) -> PResult<IndexArg> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(IndexArg::Lit(n as usize))
            }
            Tok::Ident(s) => {
                let off = self.offset();
                self.pos += 1;
                self.range_of(&s, off)?;
                Ok(IndexArg::Name(s))
            }
            _ => Err(self.unexpected(&["index"])),
        }
    }

    fn range_of(&self, name: &str, offset: usize) -> PResult<usize> {
        match self.ranges.get(name) {
            Some(Range::Fixed(n)) => Ok(*n),
            Some(Range::Base) => Ok(self.dim()),
            None => Err(self.error(ParseErrorKind::UnknownIdentifier { name: name.to_string() }, offset)),
        }
    }

    // ---- elaboration

    fn eval_closed(&mut self, e: &Expr, offset: usize) -> PResult<GradedPoly> {
        let free = free_names(e);
        if let Some(n) = free.iter().next() {
            return Err(self.error(ParseErrorKind::UnboundIndex { name: n.clone() }, offset));
        }
        self.eval(e, &mut Env::new())
    }

    fn eval(&mut self, e: &Expr, env: &mut Env) -> PResult<GradedPoly> {
        match e {
            Expr::Num(c) => Ok(GradedPoly::constant(c.clone())),
            Expr::Neg(a) => Ok(-self.eval(a, env)?),
            Expr::Pow(a, n) => Ok(self.eval(a, env)?.pow(*n)),
            Expr::Div(a, b, off) => {
                let den = self.eval(b, env)?;
                let c = den
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| {
                        self.error(
                            ParseErrorKind::Evaluation {
                                detail: "divisor must be a nonzero constant".into(),
                            },
                            *off,
                        )
                    })?;
                Ok(self.eval(a, env)?.scale(&(Coeff::one() / c)))
            }
            Expr::Sum(terms) => {
                let mut acc = GradedPoly::zero();
                for t in terms {
                    acc += self.eval(t, env)?;
                }
                Ok(acc)
            }
            Expr::Sym { offset, .. } => {
                let names = contracted(&[e.own_names()], env);
                let mut acc = GradedPoly::zero();
                self.enumerate(&names, env, *offset, &mut |p, env| {
                    acc += p.sym_at(e, env)?;
                    Ok(())
                })?;
                Ok(acc)
            }
            Expr::Deriv { idx, body, offset } => {
                let body_free: Vec<String> = free_names(body).into_iter().collect();
                let names = contracted(
                    &[e.own_names(), body_free.iter().map(String::as_str).collect()],
                    env,
                );
                let mut acc = GradedPoly::zero();
                self.enumerate(&names, env, *offset, &mut |p, env| {
                    let multi = p.resolve_jet(idx, env, *offset)?;
                    let inner = p.eval(body, env)?;
                    let js = p.jet_space();
                    acc += js
                        .iterated_total(&inner, &multi)
                        .map_err(|err| p.error(ParseErrorKind::Evaluation { detail: err.to_string() }, *offset))?;
                    Ok(())
                })?;
                Ok(acc)
            }
            Expr::Product(factors) => {
                let frees: Vec<BTreeSet<String>> = factors.iter().map(free_names).collect();
                let lists: Vec<Vec<&str>> = frees
                    .iter()
                    .map(|s| s.iter().map(String::as_str).collect())
                    .collect();
                let names: BTreeSet<String> = contracted(&lists, env).into_iter().collect();
                let mut total = GradedPoly::zero();
                let offset = first_offset(e);
                self.product(factors, &frees, &names, 0, GradedPoly::one(), env, offset, &mut total)?;
                Ok(total)
            }
        }
    }

    /// Backtracking over the contracted names, binding each as soon as the
    /// first factor needing it is reached.
    #[allow(clippy::too_many_arguments)]
    fn product(
        &mut self,
        factors: &[Expr],
        frees: &[BTreeSet<String>],
        names: &BTreeSet<String>,
        k: usize,
        acc: GradedPoly,
        env: &mut Env,
        offset: usize,
        total: &mut GradedPoly,
    ) -> PResult<()> {
        if k == factors.len() {
            *total += acc;
            return Ok(());
        }
        let fresh: Vec<String> = frees[k]
            .iter()
            .filter(|n| names.contains(*n) && !env.contains_key(*n))
            .cloned()
            .collect();
        let mut results = Vec::new();
        self.enumerate(&fresh, env, offset, &mut |p, env| {
            let v = p.eval(&factors[k], env)?;
            if !v.is_zero() {
                results.push((fresh.iter().map(|n| env[n]).collect::<Vec<_>>(), v));
            }
            Ok(())
        })?;
        for (values, v) in results {
            for (n, &x) in fresh.iter().zip(&values) {
                env.insert(n.clone(), x);
            }
            let next = &acc * &v;
            if !next.is_zero() {
                self.product(factors, frees, names, k + 1, next, env, offset, total)?;
            }
            for n in &fresh {
                env.remove(n);
            }
        }
        Ok(())
    }

    fn enumerate(
        &mut self,
        names: &[String],
        env: &mut Env,
        offset: usize,
        f: &mut dyn FnMut(&mut Self, &mut Env) -> PResult<()>,
    ) -> PResult<()> {
        let Some((first, rest)) = names.split_first() else {
            return f(self, env);
        };
        let n = self.range_of(first, offset)?;
        for v in 0..n {
            env.insert(first.clone(), v);
            self.enumerate(rest, env, offset, f)?;
        }
        env.remove(first);
        Ok(())
    }

    fn jet_space(&self) -> crate::calculus::JetSpace {
        self.model.as_ref().expect("model exists").jet_space()
    }

    fn resolve(&self, args: &[IndexArg], env: &Env, offset: usize) -> PResult<Vec<usize>> {
        args.iter()
            .map(|a| match a {
                IndexArg::Lit(v) => Ok(*v),
                IndexArg::Name(n) => env
                    .get(n)
                    .copied()
                    .ok_or_else(|| self.error(ParseErrorKind::UnboundIndex { name: n.clone() }, offset)),
            })
            .collect()
    }

    fn resolve_jet(&self, args: &[IndexArg], env: &Env, offset: usize) -> PResult<MultiIndex> {
        let vals = self.resolve(args, env, offset)?;
        let dim = self.dim();
        self.check_bounds("jet", &vals, &vec![dim; vals.len()], offset)?;
        Ok(MultiIndex::from_indices(vals))
    }

    fn sym_at(&mut self, e: &Expr, env: &Env) -> PResult<GradedPoly> {
        let Expr::Sym { name, idx, jet, offset } = e else {
            unreachable!("called on symbols")
        };
        let offset = *offset;
        let values = self.resolve(idx, env, offset)?;
        let multi = self.resolve_jet(jet, env, offset)?;
        let arity = |expected: usize| {
            if values.len() == expected {
                Ok(())
            } else {
                Err(self.error(
                    ParseErrorKind::IndexArityMismatch {
                        name: name.clone(),
                        expected,
                        found: values.len(),
                    },
                    offset,
                ))
            }
        };
        let model = self.model.as_ref().ok_or_else(|| {
            self.error(
                ParseErrorKind::Syntax {
                    expected: vec!["`dim`".into()],
                    found: format!("`{name}`"),
                },
                offset,
            )
        })?;
        let base = if self.defines.contains_key(name) {
            let n = self.defines[name].params.len();
            arity(n)?;
            let key = (name.clone(), values.clone());
            if let Some(v) = self.memo.get(&key) {
                v.clone()
            } else {
                let def = &self.defines[name];
                let body = def.body.clone();
                let mut inner: Env = def.params.iter().cloned().zip(values.iter().copied()).collect();
                let v = self.eval(&body, &mut inner)?;
                self.memo.insert(key, v.clone());
                v
            }
        } else if let Some(t) = model.param(name) {
            arity(t.shape.len())?;
            self.check_bounds(name, &values, &t.shape, offset)?;
            GradedPoly::constant(t.get(&values))
        } else if let Some(decl) = model.roster.get(name) {
            arity(decl.shape.len())?;
            self.check_bounds(name, &values, &decl.shape, offset)?;
            let m = multi.clone();
            return Ok(decl.component(&values).map_vars(|v| v.with_jet(m.clone())));
        } else if name == "x" {
            arity(1)?;
            self.check_bounds(name, &values, &[model.dim], offset)?;
            GradedPoly::var(VariableId::coordinate(values[0]))
        } else {
            return Err(self.error(ParseErrorKind::UnknownIdentifier { name: name.clone() }, offset));
        };
        if multi.is_empty() {
            Ok(base)
        } else {
            self.jet_space()
                .iterated_total(&base, &multi)
                .map_err(|err| self.error(ParseErrorKind::Evaluation { detail: err.to_string() }, offset))
        }
    }
}

fn push_sum(lhs: Expr, rhs: Expr) -> Expr {
    match lhs {
        Expr::Sum(mut ts) => {
            ts.push(rhs);
            Expr::Sum(ts)
        }
        other => Expr::Sum(vec![other, rhs]),
    }
}

fn first_offset(e: &Expr) -> usize {
    match e {
        Expr::Sym { offset, .. } | Expr::Deriv { offset, .. } | Expr::Div(_, _, offset) => *offset,
        Expr::Neg(a) | Expr::Pow(a, _) => first_offset(a),
        Expr::Sum(ts) | Expr::Product(ts) => ts.first().map_or(0, first_offset),
        Expr::Num(_) => 0,
    }
}

/// Names occurring at least twice across the lists and not already bound.
fn contracted(lists: &[Vec<&str>], env: &Env) -> Vec<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in lists {
        for n in l {
            *counts.entry(n).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .filter(|(n, c)| *c >= 2 && !env.contains_key(*n))
        .map(|(n, _)| n.to_string())
        .collect()
}

/// Index names left free by Einstein summation.
fn free_names(e: &Expr) -> BTreeSet<String> {
    let once = |lists: Vec<Vec<String>>| {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for l in lists {
            for n in l {
                *counts.entry(n).or_default() += 1;
            }
        }
        counts
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(n, _)| n)
            .collect()
    };
    match e {
        Expr::Num(_) => BTreeSet::new(),
        Expr::Sym { .. } => once(vec![e.own_names().into_iter().map(String::from).collect()]),
        Expr::Neg(a) | Expr::Pow(a, _) | Expr::Div(a, _, _) => free_names(a),
        Expr::Sum(ts) => ts.iter().flat_map(free_names).collect(),
        Expr::Product(fs) => once(fs.iter().map(|f| free_names(f).into_iter().collect()).collect()),
        Expr::Deriv { body, .. } => once(vec![
            e.own_names().into_iter().map(String::from).collect(),
            free_names(body).into_iter().collect(),
        ]),
    }
}

fn bind(pattern: &[IndexArg], idx: &[usize]) -> Env {
    pattern
        .iter()
        .zip(idx)
        .filter_map(|(a, &i)| match a {
            IndexArg::Name(n) => Some((n.clone(), i)),
            IndexArg::Lit(_) => None,
        })
        .collect()
}

/// `Err(grading)` for the first term whose grading fails `ok`.
fn check_terms(p: &GradedPoly, ok: impl Fn(Grading) -> bool) -> Result<(), Grading> {
    for (m, _) in p.terms() {
        let g = m.grading();
        if !ok(g) {
            return Err(g);
        }
    }
    Ok(())
}
