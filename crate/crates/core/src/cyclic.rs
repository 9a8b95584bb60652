//! Cyclic chains of the algebra of trigonometric polynomials and the maps
//! from them into the de Rham families.
//!
//! Chains are stored in the monomial basis: a word is a list of Fourier modes
//! `e_{m_0} ⊗ … ⊗ e_{m_L−1}`. Products of monomials are monomials, so the
//! boundary maps never leave the basis and all identities are checked on
//! exact coefficients.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{hp_representative, Form, HPClass, PeriodicFamily, Truncation};
use crate::fourier::{mode_add, Mode, TrigPoly};
use crate::scalar::{Scalar, C64};

pub type Word = Vec<Mode>;

const UNIT: Mode = [0; 3];

fn sign<S: Scalar>(odd: bool) -> S {
    if odd { -S::one() } else { S::one() }
}

fn accumulate<S: Scalar>(terms: &mut BTreeMap<Word, S>, w: Word, c: S) {
    if c.is_zero() {
        return;
    }
    let sum = match terms.remove(&w) {
        Some(old) => old + c,
        None => c,
    };
    if !sum.is_zero() {
        terms.insert(w, sum);
    }
}

/// All monomial words of `letters[0] ⊗ … ⊗ letters[L−1]` with their coefficients.
fn expand<S: Scalar>(letters: &[TrigPoly<S>]) -> Vec<(Word, S)> {
    let mut out: Vec<(Word, S)> = vec![(Vec::new(), S::one())];
    for p in letters {
        let mut next = Vec::with_capacity(out.len() * p.len());
        for (w, c) in &out {
            for (n, a) in p.terms() {
                let mut w2 = w.clone();
                w2.push(*n);
                next.push((w2, c.clone() * a.clone()));
            }
        }
        out = next;
    }
    out
}

/// Hochschild boundary of a single word.
fn hochschild_b<S: Scalar>(w: &[Mode]) -> Vec<(Word, S)> {
    let len = w.len();
    if len < 2 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(len);
    for i in 0..len - 1 {
        let mut v = w[..i].to_vec();
        v.push(mode_add(&w[i], &w[i + 1]));
        v.extend_from_slice(&w[i + 2..]);
        out.push((v, sign(i % 2 == 1)));
    }
    let mut v = vec![mode_add(&w[len - 1], &w[0])];
    v.extend_from_slice(&w[1..len - 1]);
    out.push((v, sign((len - 1) % 2 == 1)));
    out
}

/// Cyclic operator `t(a_0 ⊗ … ⊗ a_m) = (−1)^m a_m ⊗ a_0 ⊗ … ⊗ a_{m−1}`.
fn cyclic_t<S: Scalar>(w: &[Mode], c: S) -> (Word, S) {
    let m = w.len() - 1;
    let mut v = Vec::with_capacity(w.len());
    v.push(w[m]);
    v.extend_from_slice(&w[..m]);
    (v, c * sign::<S>(m % 2 == 1))
}

/// Connes operator `B = (1 − t) s N`.
fn connes_b<S: Scalar>(w: &[Mode]) -> Vec<(Word, S)> {
    let mut out = Vec::with_capacity(2 * w.len());
    let (mut cur, mut c) = (w.to_vec(), S::one());
    for _ in 0..w.len() {
        let mut s = Vec::with_capacity(w.len() + 1);
        s.push(UNIT);
        s.extend_from_slice(&cur);
        let (ts, tc) = cyclic_t(&s, c.clone());
        out.push((s, c.clone()));
        out.push((ts, -tc));
        let (next, nc) = cyclic_t(&cur, c);
        cur = next;
        c = nc;
    }
    out
}

/// `(1/(L−1)!) e_{m_0} de_{m_1} ∧ … ∧ de_{m_{L−1}}`.
fn word_form<S: Scalar>(dim: usize, w: &[Mode]) -> Form<S> {
    let mono = |m: &Mode| TrigPoly::from_terms(dim, [(*m, S::one())]);
    let mut form = Form::function(mono(&w[0]));
    let mut fact: i64 = 1;
    for (i, m) in w.iter().enumerate().skip(1) {
        if m.iter().all(|x| *x == 0) {
            return Form::zero(dim, w.len() - 1);
        }
        form = form.wedge(&Form::function(mono(m)).exterior_d()).expect("same dimension");
        fact *= i as i64;
    }
    form.scale(&S::rational(1, fact))
}

/// Element of the Connes complex `C^λ_n`: words of length `n+1` modulo the
/// signed cyclic action, each stored in its canonical rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaChain<S: Scalar = C64> {
    dim: usize,
    n: usize,
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> LambdaChain<S> {
    pub fn new(dim: usize, n: usize) -> Self {
        assert!((1..=3).contains(&dim), "torus dimension {dim} out of range");
        Self { dim, n, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · [f_0 ⊗ … ⊗ f_n]`.
    pub fn add_word(&mut self, letters: &[TrigPoly<S>], coeff: S) -> Result<()> {
        if letters.len() != self.n + 1 {
            return Err(Error::BadWord { len: letters.len(), n: self.n });
        }
        if let Some(p) = letters.iter().find(|p| p.dim() != self.dim) {
            return Err(Error::DimMismatch(self.dim, p.dim()));
        }
        for (w, c) in expand(letters) {
            self.add_monomial(w, c * coeff.clone());
        }
        Ok(())
    }

    /// Adds `coeff · [e_{w_0} ⊗ … ⊗ e_{w_n}]` after rotating to canonical form.
    pub fn add_monomial(&mut self, w: Word, coeff: S) {
        debug_assert_eq!(w.len(), self.n + 1);
        if let Some((canon, c)) = canonical_rotation(w, coeff, self.n) {
            accumulate(&mut self.terms, canon, c);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.n != other.n {
            return Err(Error::Precondition("chains of different dimension or degree".into()));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::new(self.dim, self.n);
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn to_complex(&self) -> LambdaChain<C64> {
        let mut out = LambdaChain::new(self.dim, self.n);
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.clone(), c.to_complex());
        }
        out
    }

    /// Sum of the absolute values of the coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex().norm()).sum()
    }
}

impl LambdaChain<C64> {
    /// `[f_0 ⊗ … ⊗ f_n]` with random circle polynomials of degree ≤ `degree`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, degree: i64, terms: usize, amplitude: f64) -> Self {
        let letters: Vec<TrigPoly> = (0..=n).map(|_| TrigPoly::random(rng, 1, degree, terms, amplitude)).collect();
        let mut c = Self::new(1, n);
        c.add_word(&letters, C64::new(1.0, 0.0)).expect("word length n + 1");
        c
    }
}

/// Lexicographically smallest rotation of `w` with the sign `(−1)^{n·r}`
/// picked up on the way, or `None` when two rotations with opposite signs
/// land on the same word (the class is then 2-torsion, hence zero).
fn canonical_rotation<S: Scalar>(w: Word, coeff: S, n: usize) -> Option<(Word, S)> {
    let len = w.len();
    let mut best: Option<(Word, bool)> = None;
    let mut vanishes = false;
    for r in 0..len {
        // rot^r moves the last r letters to the front
        let mut v = Vec::with_capacity(len);
        v.extend_from_slice(&w[len - r..]);
        v.extend_from_slice(&w[..len - r]);
        let odd = (n * r) % 2 == 1;
        match &best {
            None => best = Some((v, odd)),
            Some((b, bodd)) => {
                if v < *b {
                    best = Some((v, odd));
                    vanishes = false;
                } else if v == *b && odd != *bodd {
                    vanishes = true;
                }
            }
        }
    }
    let (word, odd) = best?;
    if vanishes {
        return None;
    }
    Some((word, coeff * sign::<S>(odd)))
}

/// The boundary `b: C^λ_n → C^λ_{n−1}`.
pub fn boundary_b<S: Scalar>(c: &LambdaChain<S>) -> LambdaChain<S> {
    if c.n == 0 {
        return LambdaChain::new(c.dim, 0);
    }
    let mut out = LambdaChain::new(c.dim, c.n - 1);
    for (w, coeff) in &c.terms {
        for (v, s) in hochschild_b::<S>(w) {
            out.add_monomial(v, s * coeff.clone());
        }
    }
    out
}

/// Which cyclic complex a chain belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    /// `CC_n = ⊕_k A^{⊗ n+1−2k}`: word lengths `n+1, n−1, …`.
    Cyclic,
    /// The negative cyclic complex: word lengths `n+1, n+3, …`.
    NegativeCyclic,
}

/// A chain of degree `n` in the cyclic or negative cyclic bicomplex.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicChain<S: Scalar = C64> {
    dim: usize,
    n: usize,
    kind: ChainKind,
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> CyclicChain<S> {
    pub fn new(dim: usize, n: usize) -> Self {
        Self::with_kind(dim, n, ChainKind::Cyclic)
    }

    pub fn negative(dim: usize, n: usize) -> Self {
        Self::with_kind(dim, n, ChainKind::NegativeCyclic)
    }

    pub fn with_kind(dim: usize, n: usize, kind: ChainKind) -> Self {
        assert!((1..=3).contains(&dim), "torus dimension {dim} out of range");
        Self { dim, n, kind, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether a word of length `len` fits degree `n`.
    pub fn admits(&self, len: usize) -> bool {
        if len == 0 || (len + self.n + 1) % 2 != 0 {
            return false;
        }
        match self.kind {
            ChainKind::Cyclic => len <= self.n + 1,
            ChainKind::NegativeCyclic => len >= self.n + 1,
        }
    }

    /// Summand index `k` of a word of length `len`.
    pub fn component(&self, len: usize) -> usize {
        (len - 1 - self.n % 2) / 2
    }

    pub fn add_word(&mut self, letters: &[TrigPoly<S>], coeff: S) -> Result<()> {
        if !self.admits(letters.len()) {
            return Err(Error::BadWord { len: letters.len(), n: self.n });
        }
        if let Some(p) = letters.iter().find(|p| p.dim() != self.dim) {
            return Err(Error::DimMismatch(self.dim, p.dim()));
        }
        for (w, c) in expand(letters) {
            accumulate(&mut self.terms, w, c * coeff.clone());
        }
        Ok(())
    }

    pub fn add_monomial(&mut self, w: Word, coeff: S) -> Result<()> {
        if !self.admits(w.len()) {
            return Err(Error::BadWord { len: w.len(), n: self.n });
        }
        accumulate(&mut self.terms, w, coeff);
        Ok(())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::with_kind(self.dim, self.n, self.kind);
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.n != other.n || self.kind != other.kind {
            return Err(Error::Precondition("chains live in different complexes".into()));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }
}

/// Total differential `b + B: CC_n → CC_{n−1}` of the cyclic bicomplex.
///
/// `B` raises the word length by one; on the top summand it would leave
/// `CC_{n−1}` and does not occur.
pub fn total_differential<S: Scalar>(c: &CyclicChain<S>) -> Result<CyclicChain<S>> {
    if c.kind != ChainKind::Cyclic {
        return Err(Error::Precondition("the total differential is implemented on CC only".into()));
    }
    if c.n == 0 {
        return Ok(CyclicChain::new(c.dim, 0));
    }
    let mut out = CyclicChain::new(c.dim, c.n - 1);
    for (w, coeff) in &c.terms {
        for (v, s) in hochschild_b::<S>(w) {
            accumulate(&mut out.terms, v, s * coeff.clone());
        }
        if w.len() + 1 <= c.n {
            for (v, s) in connes_b::<S>(w) {
                accumulate(&mut out.terms, v, s * coeff.clone());
            }
        }
    }
    Ok(out)
}

/// Keeps the top summand (word length `n+1`) and passes to coinvariants.
pub fn lambda_project<S: Scalar>(c: &CyclicChain<S>) -> LambdaChain<S> {
    let mut out = LambdaChain::new(c.dim, c.n);
    for (w, coeff) in &c.terms {
        if w.len() == c.n + 1 {
            out.add_monomial(w.clone(), coeff.clone());
        }
    }
    out
}

/// A word of length `L` in degree `n` maps to `(1/(L−1)!) f_0 df_1 ∧ …` in
/// the family entry `p = (n + L − 1)/2`.
fn words_to_family<S: Scalar>(c: &CyclicChain<S>, truncation: Truncation) -> Result<PeriodicFamily<S>> {
    let mut fam = PeriodicFamily::new(c.dim, truncation);
    for (w, coeff) in &c.terms {
        let p = ((c.n + w.len() - 1) / 2) as i64;
        fam.insert(p, word_form::<S>(c.dim, w).scale(coeff))?;
    }
    Ok(fam)
}

/// The map into the truncated complexes `(σ^{≤p}Ω)[2p]`.
pub fn pi_dd<S: Scalar>(c: &CyclicChain<S>) -> Result<PeriodicFamily<S>> {
    if c.kind != ChainKind::Cyclic {
        return Err(Error::Precondition("pi_dd expects a cyclic chain".into()));
    }
    words_to_family(c, Truncation::AtmostP)
}

/// The map into the truncated complexes `(σ^{≥p}Ω)[2p]`. Accepts negative
/// cyclic chains and cyclic chains concentrated in the top summand.
pub fn pi_minus<S: Scalar>(c: &CyclicChain<S>) -> Result<PeriodicFamily<S>> {
    if let Some(w) = c.terms.keys().find(|w| w.len() < c.n + 1) {
        return Err(Error::BadWord { len: w.len(), n: c.n });
    }
    words_to_family(c, Truncation::AtleastP)
}

/// Class of a cycle in `HP^{−1}`: apply `π`, lift to the untruncated
/// complex by the harmonic representative, then shift by `d − 1`.
pub fn pi_d_iso<S: Scalar>(c: &CyclicChain<S>, d: usize) -> Result<HPClass<S>> {
    if c.dim != d {
        return Err(Error::DimMismatch(c.dim, d));
    }
    if !boundary_b(&lambda_project(c)).is_zero() {
        return Err(Error::NotACycle);
    }
    let fam = pi_dd(c)?.with_truncation(Truncation::None)?;
    hp_representative(&fam)?.shift(d as i64 - 1)
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    k: usize,
    word: Vec<TrigPoly<C64>>,
    coeff: crate::cz::ComplexWire,
}

#[derive(Serialize, Deserialize)]
struct ChainWire {
    n: usize,
    #[serde(default = "cyclic_kind", skip_serializing_if = "is_cyclic")]
    kind: ChainKind,
    terms: Vec<TermWire>,
}

fn cyclic_kind() -> ChainKind {
    ChainKind::Cyclic
}

fn is_cyclic(k: &ChainKind) -> bool {
    *k == ChainKind::Cyclic
}

impl Serialize for CyclicChain<C64> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let one = C64::new(1.0, 0.0);
        ChainWire {
            n: self.n,
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermWire {
                    k: self.component(w.len()),
                    word: w.iter().map(|m| TrigPoly::monomial(self.dim, &m[..self.dim], one)).collect(),
                    coeff: (*c).into(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclicChain<C64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = ChainWire::deserialize(d)?;
        let dim = w.terms.iter().flat_map(|t| t.word.first()).map(|p| p.dim()).next().unwrap_or(1);
        let mut c = CyclicChain::with_kind(dim, w.n, w.kind);
        for t in w.terms {
            if !c.admits(t.word.len()) || c.component(t.word.len()) != t.k {
                return Err(D::Error::custom(format!(
                    "term with k = {} and word length {} does not fit degree {}",
                    t.k,
                    t.word.len(),
                    w.n
                )));
            }
            c.add_word(&t.word, t.coeff.into()).map_err(D::Error::custom)?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::integrate_family;
    use crate::scalar::RationalTau;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type R = RationalTau;

    fn e(n: i64) -> TrigPoly<R> {
        TrigPoly::e1(n)
    }

    fn one() -> TrigPoly<R> {
        TrigPoly::one(1)
    }

    fn lam(letters: &[TrigPoly<R>]) -> LambdaChain<R> {
        let mut c = LambdaChain::new(letters[0].dim(), letters.len() - 1);
        c.add_word(letters, R::one()).unwrap();
        c
    }

    fn cyc(n: usize, words: &[&[TrigPoly<R>]]) -> CyclicChain<R> {
        let mut c = CyclicChain::new(words[0][0].dim(), n);
        for w in words {
            c.add_word(w, R::one()).unwrap();
        }
        c
    }

    #[test]
    fn canonical_rotation_signs() {
        // in degree 1, [a⊗b] = −[b⊗a]
        let ab = lam(&[e(2), e(-1)]);
        let ba = lam(&[e(-1), e(2)]);
        assert_eq!(ab, ba.scale(&-R::one()));
        // [a⊗a] vanishes in odd degree
        assert!(lam(&[e(1), e(1)]).is_zero());
        // in degree 2 rotations carry no sign
        assert_eq!(lam(&[e(1), e(2), e(3)]), lam(&[e(3), e(1), e(2)]));
    }

    #[test]
    fn boundary_examples() {
        let f0 = &e(1) + &e(-2);
        let f1 = &e(3) + &one();
        assert!(boundary_b(&lam(&[f0.clone(), f1.clone()])).is_zero());
        let f2 = e(-1);
        let got = boundary_b(&lam(&[f0.clone(), f1.clone(), f2.clone()]));
        let mut want = LambdaChain::new(1, 1);
        want.add_word(&[&f0 * &f1, f2.clone()], R::one()).unwrap();
        want.add_word(&[f0.clone(), &f1 * &f2], -R::one()).unwrap();
        want.add_word(&[&f2 * &f0, f1.clone()], R::one()).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn lambda_project_examples() {
        let c = cyc(1, &[&[e(1), e(-1)]]);
        assert_eq!(lambda_project(&c), lam(&[e(1), e(-1)]));
        let c = cyc(3, &[&[e(2), e(-2)], &[e(1), e(2), e(-1), e(-2)]]);
        assert_eq!(lambda_project(&c), lam(&[e(1), e(2), e(-1), e(-2)]));
        assert!(lambda_project(&CyclicChain::<R>::new(1, 3)).is_zero());
    }

    #[test]
    fn word_layout_is_validated() {
        let mut c = CyclicChain::<R>::new(1, 3);
        assert_eq!(c.add_word(&[e(1), e(2), e(3)], R::one()), Err(Error::BadWord { len: 3, n: 3 }));
        assert!(c.add_word(&[e(1), e(2)], R::one()).is_ok());
        assert_eq!(c.add_word(&vec![e(1); 6], R::one()), Err(Error::BadWord { len: 6, n: 3 }));
        let mut neg = CyclicChain::<R>::negative(1, 1);
        assert!(neg.add_word(&vec![e(1); 4], R::one()).is_ok());
        assert!(neg.add_word(&[e(1)], R::one()).is_err());
    }

    #[test]
    fn pi_minus_examples() {
        let f0 = &e(1) + &e(-2);
        let f1 = &e(3) + &e(1);
        let fam = pi_minus(&cyc(1, &[&[f0.clone(), f1.clone()]])).unwrap();
        assert_eq!(fam.truncation(), Truncation::AtleastP);
        let want = Form::function(f0.clone()).wedge(&Form::function(f1).exterior_d()).unwrap();
        assert_eq!(fam.form(1, 1), want);
        let fam = pi_minus(&cyc(0, &[&[f0.clone()]])).unwrap();
        assert_eq!(fam.form(0, 0), Form::function(f0.clone()));
        assert!(pi_minus(&cyc(1, &[&[f0, one()]])).unwrap().is_zero());
        // lower summands of CC do not map into the ≥ p truncation
        assert!(pi_minus(&cyc(3, &[&[e(1), e(2)]])).is_err());
    }

    #[test]
    fn pi_dd_examples() {
        let f0 = &e(1) + &e(-2);
        let f1 = &e(3) + &e(1);
        let fam = pi_dd(&cyc(1, &[&[f0.clone(), f1.clone()]])).unwrap();
        let want = Form::function(f0.clone()).wedge(&Form::function(f1).exterior_d()).unwrap();
        assert_eq!(fam.form(1, 1), want);
        assert_eq!(fam.truncation(), Truncation::AtmostP);
        assert!(pi_dd(&cyc(1, &[&[f0, one()]])).unwrap().is_zero());

        let m = |a: i64, b: i64| TrigPoly::<R>::monomial(2, &[a, b], R::one());
        let c = cyc(3, &[&[m(1, 0), m(0, 1)], &[m(1, 1), m(-1, 0), m(0, -1), m(1, 2)]]);
        let fam = pi_dd(&c).unwrap();
        let ps: Vec<i64> = fam.entries().map(|(p, _)| p).collect();
        assert_eq!(ps, vec![2]);
        let low = Form::function(m(1, 0)).wedge(&Form::function(m(0, 1)).exterior_d()).unwrap();
        assert_eq!(fam.form(2, 1), low);
        let mut high = Form::function(m(1, 1));
        for f in [m(-1, 0), m(0, -1), m(1, 2)] {
            high = high.wedge(&Form::function(f).exterior_d()).unwrap();
        }
        // a 3-form on T² vanishes, so only the p = 2 entry is nonzero here
        assert!(high.is_zero());
        assert_eq!(fam.form(3, 3), high.scale(&R::rational(1, 6)));
    }

    #[test]
    fn pi_dd_factorial_on_three_torus() {
        let m = |a: i64, b: i64, c: i64| TrigPoly::<R>::monomial(3, &[a, b, c], R::one());
        let c = cyc(3, &[&[m(0, 0, 0), m(1, 0, 0), m(0, 1, 0), m(0, 0, 1)]]);
        let fam = pi_dd(&c).unwrap();
        let tau = R::two_pi_i();
        let want = TrigPoly::monomial(3, &[1, 1, 1], tau.clone() * tau.clone() * tau * R::rational(1, 6));
        assert_eq!(fam.form(3, 3), Form::basis(want, &[0, 1, 2]).unwrap());
    }

    #[test]
    fn pi_d_iso_examples() {
        let c = cyc(1, &[&[e(-1), e(1)]]);
        let class = pi_d_iso(&c, 1).unwrap();
        let want = PeriodicFamily::single(Truncation::None, 1, Form::dt(1, 0).unwrap().scale(&R::two_pi_i())).unwrap();
        assert_eq!(class.rep(), &want);
        let exact = cyc(1, &[&[one(), &e(2) + &e(-3)]]);
        assert!(pi_d_iso(&exact, 1).unwrap().rep().is_zero());
        let scaled = pi_d_iso(&c.scale(&R::gaussian(3, -2)), 1).unwrap();
        assert_eq!(scaled.rep(), &want.scale(&R::gaussian(3, -2)));
        assert_eq!(integrate_family(class.rep()), R::two_pi_i());
        let not_cycle = cyc(2, &[&[e(1), e(1), e(1)]]);
        assert_eq!(pi_d_iso(&not_cycle.clone(), 2).unwrap_err(), Error::DimMismatch(1, 2));
    }

    #[test]
    fn non_cycles_are_rejected() {
        let m = |a: i64, b: i64| TrigPoly::<R>::monomial(2, &[a, b], R::one());
        let c = cyc(2, &[&[m(1, 0), m(0, 1), m(1, 1)]]);
        assert_eq!(pi_d_iso(&c, 2).unwrap_err(), Error::NotACycle);
    }

    #[test]
    fn json_round_trip() {
        let mut c = CyclicChain::<C64>::new(1, 3);
        c.add_word(&[TrigPoly::e1(1), TrigPoly::e1(-1)], C64::new(0.5, 0.0)).unwrap();
        c.add_word(&[TrigPoly::e1(1), TrigPoly::e1(2), TrigPoly::e1(0), TrigPoly::e1(-3)], C64::new(0.0, 1.0))
            .unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"k\":1") && s.contains("\"k\":0"));
        assert_eq!(serde_json::from_str::<CyclicChain>(&s).unwrap(), c);
        let bad = r#"{"n":3,"terms":[{"k":1,"word":[{"dim":1,"coeffs":[]}],"coeff":{"re":1,"im":0}}]}"#;
        assert!(serde_json::from_str::<CyclicChain>(bad).is_err());
    }

    fn exact_letters(dim: usize, len: usize) -> impl Strategy<Value = Vec<TrigPoly<R>>> {
        proptest::collection::vec(0u64..100_000, len).prop_map(move |seeds| {
            seeds
                .into_iter()
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(s);
                    let terms = rand::Rng::gen_range(&mut rng, 1..=3);
                    TrigPoly::random_exact(&mut rng, dim, 2, terms, 2)
                })
                .collect()
        })
    }

    fn cyclic_chain(dim: usize, n: usize) -> impl Strategy<Value = CyclicChain<R>> {
        let lens: Vec<usize> = (1..=n + 1).filter(|l| (l + n + 1) % 2 == 0).collect();
        let strategies: Vec<_> = lens.into_iter().map(|l| exact_letters(dim, l)).collect();
        strategies.prop_map(move |words| {
            let mut c = CyclicChain::new(dim, n);
            for w in words {
                c.add_word(&w, R::one()).unwrap();
            }
            c
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn b_squared_vanishes(n in 2usize..=4, letters in exact_letters(1, 5)) {
            let c = lam(&letters[..n + 1]);
            prop_assert!(boundary_b(&boundary_b(&c)).is_zero());
        }

        #[test]
        fn b_squared_vanishes_on_torus(letters in exact_letters(2, 4)) {
            prop_assert!(boundary_b(&boundary_b(&lam(&letters))).is_zero());
        }

        #[test]
        fn total_differential_squares_to_zero(c in (1usize..=4).prop_flat_map(|n| cyclic_chain(1, n))) {
            let dd = total_differential(&total_differential(&c).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
        }

        #[test]
        fn pi_is_a_chain_map(c in (1usize..=3).prop_flat_map(|n| cyclic_chain(3, n))) {
            let lhs = pi_dd(&total_differential(&c).unwrap()).unwrap();
            let rhs = pi_dd(&c).unwrap().differential();
            prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
        }

        #[test]
        fn pi_is_a_chain_map_on_circle(c in (1usize..=3).prop_flat_map(|n| cyclic_chain(1, n))) {
            let lhs = pi_dd(&total_differential(&c).unwrap()).unwrap();
            let rhs = pi_dd(&c).unwrap().differential();
            prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
        }

        #[test]
        fn lambda_project_is_idempotent(c in (1usize..=4).prop_flat_map(|n| cyclic_chain(2, n))) {
            let once = lambda_project(&c);
            let mut top = CyclicChain::new(c.dim(), c.degree());
            for (w, k) in once.terms() {
                top.add_monomial(w.clone(), k.clone()).unwrap();
            }
            prop_assert_eq!(lambda_project(&top), once);
        }

        #[test]
        fn truncations_hold(c in (1usize..=4).prop_flat_map(|n| cyclic_chain(2, n))) {
            let fam = pi_dd(&c).unwrap();
            for (p, w) in fam.entries() {
                prop_assert!(w.degree() as i64 <= p);
            }
            let top = {
                let mut t = CyclicChain::new(c.dim(), c.degree());
                for (w, k) in c.terms().filter(|(w, _)| w.len() == c.degree() + 1) {
                    t.add_monomial(w.clone(), k.clone()).unwrap();
                }
                t
            };
            for (p, w) in pi_minus(&top).unwrap().entries() {
                prop_assert!(w.degree() as i64 >= p);
            }
        }
    }
}
