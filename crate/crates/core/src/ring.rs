//! Exact arithmetic over R = F_p[x_1..x_n]: prime-field scalars, monomials
//! under lex/grevlex orders, sparse polynomials in canonical form, free-module
//! vectors and dense matrices of polynomials.
//!
//! Every value is interpreted against a [`RingCtx`] fixing the prime p, the
//! variable names and the term order. Values are immutable after construction
//! and safe to share across threads.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Monomial order on the variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic (the default).
    Grevlex,
    /// Pure lexicographic.
    Lex,
}

/// How the monomial order is extended to free modules R^alpha.
/// Positions with lower index always take precedence on ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Compare positions first, then monomials (the default).
    PositionOverTerm,
    /// Compare monomials first, then positions.
    TermOverPosition,
}

/// Full order specification recorded in a ring context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderSpec {
    pub monomial: MonomialOrder,
    pub module: ModuleOrder,
}

impl Default for OrderSpec {
    fn default() -> Self {
        OrderSpec {
            monomial: MonomialOrder::Grevlex,
            module: ModuleOrder::PositionOverTerm,
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
        }
    }
}

/// An element of the prime field F_p, stored reduced into [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { value: 0 };
    pub const ONE: FieldElement = FieldElement { value: 1 };

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The ambient data every value is interpreted against: the prime p, the
/// ordered variable names and the term order.
#[derive(Debug, PartialEq, Eq)]
pub struct RingCtx {
    p: u32,
    vars: Vec<String>,
    order: OrderSpec,
}

impl RingCtx {
    /// Builds a ring context. `p` must be a prime with 2 <= p < 2^16 and the
    /// variable names must be distinct identifiers.
    pub fn new(p: u32, vars: &[&str], order: OrderSpec) -> Result<Arc<RingCtx>> {
        if p < 2 || u64::from(p) >= (1 << 16) || !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        let mut seen: Vec<&str> = Vec::new();
        for v in vars {
            if !valid_var_name(v) {
                return Err(Error::InvalidVariableName((*v).to_string()));
            }
            if seen.contains(v) {
                return Err(Error::DuplicateVariable((*v).to_string()));
            }
            seen.push(v);
        }
        Ok(Arc::new(RingCtx {
            p,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn order(&self) -> OrderSpec {
        self.order
    }

    /// A context over the same field with one extra variable appended and the
    /// same order tags. Used internally for elimination tricks.
    pub fn extended(&self, extra: &str) -> Result<Arc<RingCtx>> {
        let mut vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        vars.push(extra);
        RingCtx::new(self.p, &vars, self.order)
    }

    /// A context identical to this one except for the order tags.
    pub fn with_order(&self, order: OrderSpec) -> Arc<RingCtx> {
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        RingCtx::new(self.p, &vars, order).expect("already-validated context")
    }

    // ----- prime field arithmetic, 64-bit intermediates -----

    pub fn felt(&self, n: i64) -> FieldElement {
        let p = i64::from(self.p);
        let mut v = n % p;
        if v < 0 {
            v += p;
        }
        FieldElement { value: v as u32 }
    }

    pub fn f_add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = u64::from(a.value) + u64::from(b.value);
        let p = u64::from(self.p);
        FieldElement {
            value: (if s >= p { s - p } else { s }) as u32,
        }
    }

    pub fn f_neg(&self, a: FieldElement) -> FieldElement {
        if a.value == 0 {
            a
        } else {
            FieldElement {
                value: self.p - a.value,
            }
        }
    }

    pub fn f_sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.f_add(a, self.f_neg(b))
    }

    pub fn f_mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let m = u64::from(a.value) * u64::from(b.value);
        FieldElement {
            value: (m % u64::from(self.p)) as u32,
        }
    }

    pub fn f_pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.f_mul(acc, base);
            }
            base = self.f_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element, by Fermat.
    pub fn f_inv(&self, a: FieldElement) -> FieldElement {
        assert!(!a.is_zero(), "inverse of zero");
        self.f_pow(a, u64::from(self.p) - 2)
    }

    // ----- monomial comparison -----

    /// Total multiplicative order on monomials of this context.
    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.exps.len(), b.exps.len());
        match self.order.monomial {
            MonomialOrder::Lex => {
                for (x, y) in a.exps.iter().zip(b.exps.iter()) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Grevlex => match a.degree.cmp(&b.degree) {
                Ordering::Equal => {
                    // On equal degree the monomial whose last differing
                    // exponent is smaller is the larger one.
                    for i in (0..a.exps.len()).rev() {
                        match a.exps[i].cmp(&b.exps[i]) {
                            Ordering::Equal => continue,
                            Ordering::Less => return Ordering::Greater,
                            Ordering::Greater => return Ordering::Less,
                        }
                    }
                    Ordering::Equal
                }
                ord => ord,
            },
        }
    }

    /// Order on module terms (position, monomial) following the ctx module
    /// extension tag. Lower positions always win ties.
    pub fn cmp_module_term(
        &self,
        pos_a: usize,
        mono_a: &Monomial,
        pos_b: usize,
        mono_b: &Monomial,
    ) -> Ordering {
        match self.order.module {
            ModuleOrder::PositionOverTerm => match pos_a.cmp(&pos_b) {
                Ordering::Equal => self.cmp_mono(mono_a, mono_b),
                // lower index first: smaller position is the greater term
                Ordering::Less => Ordering::Greater,
                Ordering::Greater => Ordering::Less,
            },
            ModuleOrder::TermOverPosition => match self.cmp_mono(mono_a, mono_b) {
                Ordering::Equal => match pos_a.cmp(&pos_b) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Less => Ordering::Greater,
                    Ordering::Greater => Ordering::Less,
                },
                ord => ord,
            },
        }
    }
}

fn same_ctx(a: &Arc<RingCtx>, b: &Arc<RingCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_same_ctx(a: &Arc<RingCtx>, b: &Arc<RingCtx>) -> Result<()> {
    if same_ctx(a, b) {
        Ok(())
    } else {
        Err(Error::CtxMismatch)
    }
}

/// A power product of the ring variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u64,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        let degree = exps.iter().map(|&e| u64::from(e)).sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
            .collect();
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial::new(
            other
                .exps
                .iter()
                .zip(self.exps.iter())
                .map(|(&b, &a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }
}

/// Total order on (position, monomial) pairs; `monomial_compare` operation.
pub fn monomial_compare(a: &Monomial, b: &Monomial, ctx: &RingCtx) -> Result<Ordering> {
    if a.exps.len() != ctx.nvars() || b.exps.len() != ctx.nvars() {
        return Err(Error::CtxMismatch);
    }
    Ok(ctx.cmp_mono(a, b))
}

/// One nonzero term of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: FieldElement,
    pub mono: Monomial,
}

/// A sparse polynomial in canonical form: nonzero terms, strictly descending
/// in the ctx order. The empty term list is the canonical zero.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ctx: Arc<RingCtx>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ctx: &Arc<RingCtx>) -> Polynomial {
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<RingCtx>, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(ctx);
        }
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: vec![Term {
                coeff: c,
                mono: Monomial::one(ctx.nvars()),
            }],
        }
    }

    pub fn one(ctx: &Arc<RingCtx>) -> Polynomial {
        Polynomial::constant(ctx, FieldElement::ONE)
    }

    pub fn var(ctx: &Arc<RingCtx>, i: usize) -> Polynomial {
        assert!(i < ctx.nvars(), "variable index out of range");
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: vec![Term {
                coeff: FieldElement::ONE,
                mono: Monomial::var(ctx.nvars(), i),
            }],
        }
    }

    pub fn monomial(ctx: &Arc<RingCtx>, c: FieldElement, mono: Monomial) -> Polynomial {
        assert_eq!(mono.exps.len(), ctx.nvars());
        if c.is_zero() {
            return Polynomial::zero(ctx);
        }
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: vec![Term { coeff: c, mono }],
        }
    }

    /// Normalizes an arbitrary term list: combines repeats, drops zeros and
    /// sorts strictly descending.
    pub fn from_terms(ctx: &Arc<RingCtx>, raw: Vec<(FieldElement, Monomial)>) -> Polynomial {
        let mut acc: HashMap<Vec<u32>, FieldElement> = HashMap::with_capacity(raw.len());
        for (c, m) in raw {
            debug_assert_eq!(m.exps.len(), ctx.nvars());
            let entry = acc.entry(m.exps).or_insert(FieldElement::ZERO);
            *entry = ctx.f_add(*entry, c);
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Term {
                coeff,
                mono: Monomial::new(exps),
            })
            .collect();
        terms.sort_by(|a, b| ctx.cmp_mono(&b.mono, &a.mono));
        Polynomial {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|t| t.mono.is_one())
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn add_assign(&mut self, other: &Polynomial) {
        debug_assert!(same_ctx(&self.ctx, &other.ctx));
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.terms = other.terms.clone();
            return;
        }
        // merge of two strictly descending term lists
        let ctx = Arc::clone(&self.ctx);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match ctx.cmp_mono(&self.terms[i].mono, &other.terms[j].mono) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ctx.f_add(self.terms[i].coeff, other.terms[j].coeff);
                    if !c.is_zero() {
                        out.push(Term {
                            coeff: c,
                            mono: self.terms[i].mono.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        self.terms = out;
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> Polynomial {
        let ctx = &self.ctx;
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: ctx.f_neg(t.coeff),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    /// Multiplication by a single term; preserves canonical order.
    pub fn mul_term(&self, c: FieldElement, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        let ctx = &self.ctx;
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: ctx.f_mul(t.coeff, c),
                    mono: t.mono.mul(m),
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        self.mul_term(c, &Monomial::one(self.ctx.nvars()))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert!(same_ctx(&self.ctx, &other.ctx));
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        let ctx = &self.ctx;
        let mut acc: HashMap<Vec<u32>, FieldElement> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let m = a.mono.mul(&b.mono);
                let c = ctx.f_mul(a.coeff, b.coeff);
                let entry = acc.entry(m.exps).or_insert(FieldElement::ZERO);
                *entry = ctx.f_add(*entry, c);
            }
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Term {
                coeff,
                mono: Monomial::new(exps),
            })
            .collect();
        terms.sort_by(|a, b| ctx.cmp_mono(&b.mono, &a.mono));
        Polynomial {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        let ctx = &self.ctx;
        let raw: Vec<(FieldElement, Monomial)> = self
            .terms
            .iter()
            .filter(|t| t.mono.exps[i] > 0)
            .map(|t| {
                let e = t.mono.exps[i];
                let c = ctx.f_mul(t.coeff, ctx.felt(i64::from(e)));
                let mut exps = t.mono.exps.clone();
                exps[i] -= 1;
                (c, Monomial::new(exps))
            })
            .collect();
        Polynomial::from_terms(ctx, raw)
    }

    /// Re-interprets the polynomial in a context with additional trailing
    /// variables (same prime, same leading variables).
    pub fn lift_to(&self, ext: &Arc<RingCtx>) -> Polynomial {
        assert!(ext.nvars() >= self.ctx.nvars());
        assert_eq!(ext.p(), self.ctx.p());
        let pad = ext.nvars() - self.ctx.nvars();
        let raw = self
            .terms
            .iter()
            .map(|t| {
                let mut exps = t.mono.exps.clone();
                exps.extend(std::iter::repeat_n(0, pad));
                (t.coeff, Monomial::new(exps))
            })
            .collect();
        Polynomial::from_terms(ext, raw)
    }

    /// Re-sorts terms into another context with the same prime and variables
    /// but (possibly) a different order.
    pub fn reorder_to(&self, other: &Arc<RingCtx>) -> Polynomial {
        assert_eq!(other.nvars(), self.ctx.nvars());
        assert_eq!(other.p(), self.ctx.p());
        let raw = self
            .terms
            .iter()
            .map(|t| (t.coeff, t.mono.clone()))
            .collect();
        Polynomial::from_terms(other, raw)
    }
}

/// Canonical checked sum; `poly_add` operation.
pub fn poly_add(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    check_same_ctx(&f.ctx, &g.ctx)?;
    Ok(f.add(g))
}

/// Canonical checked product; `poly_mul` operation.
pub fn poly_mul(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    check_same_ctx(&f.ctx, &g.ctx)?;
    Ok(f.mul(g))
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ctx(&self.ctx, &rhs.ctx), "ring context mismatch");
        Polynomial::add(self, rhs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ctx(&self.ctx, &rhs.ctx), "ring context mismatch");
        Polynomial::sub(self, rhs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ctx(&self.ctx, &rhs.ctx), "ring context mismatch");
        Polynomial::mul(self, rhs)
    }
}

/// An element of the free module R^alpha.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleVector {
    ctx: Arc<RingCtx>,
    components: Vec<Polynomial>,
}

impl ModuleVector {
    pub fn zero(ctx: &Arc<RingCtx>, rank: usize) -> ModuleVector {
        ModuleVector {
            ctx: Arc::clone(ctx),
            components: (0..rank).map(|_| Polynomial::zero(ctx)).collect(),
        }
    }

    pub fn from_components(ctx: &Arc<RingCtx>, components: Vec<Polynomial>) -> ModuleVector {
        debug_assert!(components.iter().all(|c| same_ctx(c.ctx(), ctx)));
        ModuleVector {
            ctx: Arc::clone(ctx),
            components,
        }
    }

    /// The standard basis vector e_i scaled by `f`.
    pub fn unit(ctx: &Arc<RingCtx>, rank: usize, i: usize, f: Polynomial) -> ModuleVector {
        let mut v = ModuleVector::zero(ctx, rank);
        v.components[i] = f;
        v
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn num_terms(&self) -> usize {
        self.components.iter().map(|c| c.num_terms()).sum()
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        debug_assert_eq!(self.rank(), other.rank());
        ModuleVector {
            ctx: Arc::clone(&self.ctx),
            components: self
                .components
                .iter()
                .zip(other.components.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        debug_assert_eq!(self.rank(), other.rank());
        ModuleVector {
            ctx: Arc::clone(&self.ctx),
            components: self
                .components
                .iter()
                .zip(other.components.iter())
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul_term(&self, c: FieldElement, m: &Monomial) -> ModuleVector {
        ModuleVector {
            ctx: Arc::clone(&self.ctx),
            components: self.components.iter().map(|f| f.mul_term(c, m)).collect(),
        }
    }

    pub fn scale_poly(&self, f: &Polynomial) -> ModuleVector {
        ModuleVector {
            ctx: Arc::clone(&self.ctx),
            components: self.components.iter().map(|g| g.mul(f)).collect(),
        }
    }

    /// Greatest (position, monomial, coefficient) under the given module
    /// order, or None for the zero vector.
    pub fn leading(&self, ctx: &RingCtx, module: ModuleOrder) -> Option<(usize, &Term)> {
        let mut best: Option<(usize, &Term)> = None;
        for (pos, f) in self.components.iter().enumerate() {
            if let Some(t) = f.leading_term() {
                best = match best {
                    None => Some((pos, t)),
                    Some((bp, bt)) => {
                        let ord = match module {
                            ModuleOrder::PositionOverTerm => match pos.cmp(&bp) {
                                Ordering::Equal => ctx.cmp_mono(&t.mono, &bt.mono),
                                Ordering::Less => Ordering::Greater,
                                Ordering::Greater => Ordering::Less,
                            },
                            ModuleOrder::TermOverPosition => {
                                match ctx.cmp_mono(&t.mono, &bt.mono) {
                                    Ordering::Equal => match pos.cmp(&bp) {
                                        Ordering::Less => Ordering::Greater,
                                        _ => Ordering::Less,
                                    },
                                    ord => ord,
                                }
                            }
                        };
                        if ord == Ordering::Greater {
                            Some((pos, t))
                        } else {
                            Some((bp, bt))
                        }
                    }
                };
            }
        }
        best
    }
}

/// A dense alpha x beta matrix of sparse polynomials, stored row-major.
/// Column `j` read as a [`ModuleVector`] of rank alpha.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ctx: Arc<RingCtx>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(ctx: &Arc<RingCtx>, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            ctx: Arc::clone(ctx),
            rows,
            cols,
            entries: (0..rows * cols).map(|_| Polynomial::zero(ctx)).collect(),
        }
    }

    pub fn identity(ctx: &Arc<RingCtx>, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(ctx, n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = Polynomial::one(ctx);
        }
        m
    }

    pub fn from_columns(
        ctx: &Arc<RingCtx>,
        rows: usize,
        columns: &[ModuleVector],
    ) -> PolyMatrix {
        let mut m = PolyMatrix::zero(ctx, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.rank(), rows);
            for i in 0..rows {
                *m.entry_mut(i, j) = col.component(i).clone();
            }
        }
        m
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut Polynomial {
        &mut self.entries[r * self.cols + c]
    }

    pub fn column(&self, j: usize) -> ModuleVector {
        ModuleVector {
            ctx: Arc::clone(&self.ctx),
            components: (0..self.rows).map(|i| self.entry(i, j).clone()).collect(),
        }
    }

    pub fn columns(&self) -> Vec<ModuleVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zero(&self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *m.entry_mut(c, r) = self.entry(r, c).clone();
            }
        }
        m
    }

    pub fn matmul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut m = PolyMatrix::zero(&self.ctx, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Polynomial::zero(&self.ctx);
                for k in 0..self.cols {
                    acc.add_assign(&self.entry(r, k).mul(other.entry(k, c)));
                }
                *m.entry_mut(r, c) = acc;
            }
        }
        m
    }

    pub fn mul_vector(&self, v: &ModuleVector) -> ModuleVector {
        assert_eq!(self.cols, v.rank(), "matrix/vector shape mismatch");
        let components = (0..self.rows)
            .map(|r| {
                let mut acc = Polynomial::zero(&self.ctx);
                for k in 0..self.cols {
                    acc.add_assign(&self.entry(r, k).mul(v.component(k)));
                }
                acc
            })
            .collect();
        ModuleVector {
            ctx: Arc::clone(&self.ctx),
            components,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Column-wise difference, for comparing two maps of the same shape.
    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.entries.iter_mut().zip(other.entries.iter()) {
            *a = a.sub(b);
        }
        m
    }
}

// ----- text grammar: parsing and canonical printing -----

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str, line: usize) -> Scanner<'a> {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
            line,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.src.len()
                && ((self.src[self.pos] as char).is_ascii_alphanumeric()
                    || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
        }
        if self.pos == start {
            return Err(self.err("expected a variable name"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }
}

/// Parses a polynomial in the text grammar: terms joined by `+`/`-`, each a
/// `*`-separated product of integers and `var[^int]` factors. Integers reduce
/// mod p; whitespace is ignored.
pub fn parse_polynomial(ctx: &Arc<RingCtx>, input: &str) -> Result<Polynomial> {
    parse_polynomial_at(ctx, input, 1)
}

/// As [`parse_polynomial`], reporting errors against the given line number.
pub fn parse_polynomial_at(
    ctx: &Arc<RingCtx>,
    input: &str,
    line: usize,
) -> Result<Polynomial> {
    let mut sc = Scanner::new(input, line);
    let mut raw: Vec<(FieldElement, Monomial)> = Vec::new();
    let mut negate = false;
    match sc.peek() {
        None => return Err(sc.err("empty polynomial")),
        Some(b'-') => {
            sc.bump();
            negate = true;
        }
        Some(b'+') => {
            sc.bump();
        }
        _ => {}
    }
    loop {
        let (c, m) = parse_term(ctx, &mut sc)?;
        raw.push((if negate { ctx.f_neg(c) } else { c }, m));
        match sc.peek() {
            None => break,
            Some(b'+') => {
                sc.bump();
                negate = false;
            }
            Some(b'-') => {
                sc.bump();
                negate = true;
            }
            Some(c) => return Err(sc.err(format!("unexpected character `{}`", c as char))),
        }
    }
    Ok(Polynomial::from_terms(ctx, raw))
}

fn parse_term(ctx: &Arc<RingCtx>, sc: &mut Scanner<'_>) -> Result<(FieldElement, Monomial)> {
    let mut coeff = FieldElement::ONE;
    let mut exps = vec![0u32; ctx.nvars()];
    let mut first = true;
    loop {
        match sc.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = sc.integer()?;
                coeff = ctx.f_mul(coeff, ctx.felt((n % u64::from(ctx.p())) as i64));
            }
            Some(c) if (c as char).is_ascii_alphabetic() => {
                let name = sc.ident()?;
                let idx = match ctx.var_index(&name) {
                    Some(i) => i,
                    None => return Err(sc.err(format!("unknown variable `{name}`"))),
                };
                let e = if sc.peek() == Some(b'^') {
                    sc.bump();
                    let e = sc.integer()?;
                    u32::try_from(e).map_err(|_| sc.err("exponent out of range"))?
                } else {
                    1
                };
                exps[idx] = exps[idx]
                    .checked_add(e)
                    .ok_or_else(|| sc.err("exponent out of range"))?;
            }
            _ if first => return Err(sc.err("expected a term")),
            _ => return Err(sc.err("expected an integer or a variable")),
        }
        first = false;
        if sc.peek() == Some(b'*') {
            sc.bump();
        } else {
            break;
        }
    }
    Ok((coeff, Monomial::new(exps)))
}

fn write_mono(f: &mut fmt::Formatter<'_>, ctx: &RingCtx, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", ctx.vars()[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    /// Canonical form: terms descending in the ctx order, unit coefficients
    /// suppressed, coefficients printed in [1, p).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if t.mono.is_one() {
                write!(f, "{}", t.coeff.value())?;
            } else {
                if t.coeff.value() != 1 {
                    write!(f, "{}*", t.coeff.value())?;
                }
                write_mono(f, &self.ctx, &t.mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
