//! Polycyclic presentations with infinite-order generators, collection to
//! normal form, and mechanical homomorphism/isomorphism checks.
//!
//! A presentation has generators `x_0 .. x_{m-1}` and, for every `i < j`,
//! conjugation rules `x_i x_j x_i^-1` and `x_i^-1 x_j x_i`, each a normal form
//! supported on indices `> i`. The subgroups `G_i = <x_i, .., x_{m-1}>` form
//! a normal series with infinite cyclic factors, so every element is uniquely
//! `x_0^e0 .. x_{m-1}^e{m-1}` once the rules are consistent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::error::{Error, Result};
use crate::words::{Presentation, Word};

/// Exponent vector `(e_0, .., e_{m-1})` denoting `x_0^e0 .. x_{m-1}^e{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalForm(pub Vec<i64>);

impl NormalForm {
    pub fn identity(m: usize) -> Self {
        NormalForm(vec![0; m])
    }

    pub fn gen(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i] = 1;
        NormalForm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn to_word(&self) -> Word {
        Word::from_syllables(self.0.iter().enumerate().map(|(i, &e)| (i, e)))
    }

    /// Total letter count of the normal-form word.
    pub fn length(&self) -> u64 {
        self.0.iter().map(|e| e.unsigned_abs()).sum()
    }
}

/// Why a rule set fails to define a group: the first letter triple whose two
/// bracketings collect differently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapWitness {
    /// `(generator, ±1)` letters `a, b, c`.
    pub triple: [(usize, i64); 3],
    pub left: NormalForm,
    pub right: NormalForm,
}

impl fmt::Display for OverlapWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.triple;
        write!(
            f,
            "(x{}^{} x{}^{}) x{}^{} = {:?} but x{}^{} (x{}^{} x{}^{}) = {:?}",
            a.0, a.1, b.0, b.1, c.0, c.1, self.left.0, a.0, a.1, b.0, b.1, c.0, c.1, self.right.0
        )
    }
}

/// One user-supplied conjugation rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcRule {
    pub i: usize,
    pub j: usize,
    /// `false`: `x_i x_j x_i^-1 = image`; `true`: `x_i^-1 x_j x_i = image`.
    pub inverse: bool,
    pub image: Word,
}

#[derive(Clone, PartialEq, Eq)]
pub struct PcPresentation {
    names: Vec<String>,
    /// `fwd[i][j]` = nf of `x_i x_j x_i^-1` for `j > i`.
    fwd: Vec<Vec<NormalForm>>,
    /// `inv[i][j]` = nf of `x_i^-1 x_j x_i` for `j > i`.
    inv: Vec<Vec<NormalForm>>,
}

impl fmt::Debug for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PcPresentation({})", self.format_rules())
    }
}

impl PcPresentation {
    /// Builds the presentation and runs [`consistency_check`]; missing rules
    /// mean the two generators commute.
    pub fn new(names: Vec<String>, rules: Vec<PcRule>) -> Result<Self> {
        let p = Self::new_unchecked(names, rules)?;
        match consistency_check(&p) {
            Ok(()) => Ok(p),
            Err(w) => Err(Error::Inconsistent(w.to_string())),
        }
    }

    /// Builds the rule tables without checking consistency. Missing inverse
    /// rules are derived when the forward image has the triangular shape
    /// `x_j^±1 * (word in x_{j+1}..)`; otherwise the inverse image defaults to
    /// `x_j` and [`consistency_check`] will report the failure.
    pub fn new_unchecked(names: Vec<String>, rules: Vec<PcRule>) -> Result<Self> {
        let m = names.len();
        let ident = NormalForm::identity(m);
        let mut p = PcPresentation { fwd: vec![vec![ident.clone(); m]; m], inv: vec![vec![ident; m]; m], names };
        for r in &rules {
            if r.i >= m || r.j >= m {
                return Err(Error::GeneratorOutOfRange { index: r.i.max(r.j), count: m });
            }
            if r.i >= r.j {
                return Err(Error::Malformed(format!("rule for ({}, {}) must have i < j", r.i, r.j)));
            }
            if let Some((g, _)) = r.image.syllables().iter().find(|&&(g, _)| g <= r.i) {
                return Err(Error::Malformed(format!(
                    "image of rule ({}, {}) uses generator {} which is not below x{} in the series",
                    r.i, r.j, g, r.i
                )));
            }
        }
        for i in (0..m).rev() {
            for j in i + 1..m {
                let fwd_rule = rules.iter().find(|r| r.i == i && r.j == j && !r.inverse);
                p.fwd[i][j] = match fwd_rule {
                    Some(r) => p.collect(&r.image)?,
                    None => NormalForm::gen(m, j),
                };
            }
            for j in (i + 1..m).rev() {
                let inv_rule = rules.iter().find(|r| r.i == i && r.j == j && r.inverse);
                p.inv[i][j] = match inv_rule {
                    Some(r) => p.collect(&r.image)?,
                    None => p.derive_inverse(i, j),
                };
            }
        }
        Ok(p)
    }

    /// Builds from the textual rule format, e.g.
    /// `g n g^-1 = n^-1 ; h n h^-1 = n ; g h g^-1 = n^k h^-1`, with `vars`
    /// substituted for symbolic exponents.
    pub fn parse(names: &[&str], rules: &str, vars: &[(&str, i64)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::new();
        for part in rules.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
            let (lhs, rhs) = part.split_once('=').ok_or_else(|| Error::Parse(format!("rule without '=': {part:?}")))?;
            let lhs = Word::parse(&substitute_vars(lhs, vars)?, &names)?;
            let rhs = Word::parse(&substitute_vars(rhs, vars)?, &names)?;
            let (i, j, inverse) = match lhs.syllables() {
                [(a, 1), (b, 1), (c, -1)] if a == c => (*a, *b, false),
                [(a, -1), (b, 1), (c, 1)] if a == c => (*a, *b, true),
                _ => return Err(Error::Parse(format!("left side must be 'x y x^-1' or 'x^-1 y x': {part:?}"))),
            };
            out.push(PcRule { i, j, inverse, image: rhs });
        }
        Self::new(names, out)
    }

    fn derive_inverse(&self, i: usize, j: usize) -> NormalForm {
        let m = self.len();
        let image = &self.fwd[i][j];
        let eps = image.0[j];
        let triangular = image.0[..j].iter().all(|&e| e == 0) && eps.abs() == 1;
        if !triangular {
            return NormalForm::gen(m, j);
        }
        // conj(x_j) = x_j^eps * w with w in G_{j+1}; the inverse images of
        // x_{j+1}.. are already known, so conj^-1(w) is computable.
        let mut w = image.clone();
        w.0[j] = 0;
        let mut pre = NormalForm::identity(m);
        for l in j + 1..m {
            if w.0[l] != 0 {
                pre = self.multiply(&pre, &self.power(&self.inv[i][l], w.0[l]));
            }
        }
        let y = self.multiply(&NormalForm::gen(m, j), &self.invert(&pre));
        if eps == 1 {
            y
        } else {
            self.invert(&y)
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Same group with relabelled generators.
    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.names.len(), "one name per generator");
        self.names = names;
        self
    }

    pub fn identity(&self) -> NormalForm {
        NormalForm::identity(self.len())
    }

    pub fn generator(&self, i: usize) -> NormalForm {
        NormalForm::gen(self.len(), i)
    }

    /// `x_i x_j x_i^-1` for `i < j`.
    pub fn conjugate_rule(&self, i: usize, j: usize) -> &NormalForm {
        &self.fwd[i][j]
    }

    /// `x_i^-1 x_j x_i` for `i < j`.
    pub fn inverse_conjugate_rule(&self, i: usize, j: usize) -> &NormalForm {
        &self.inv[i][j]
    }

    /// Collects a word to its normal form.
    pub fn collect(&self, w: &Word) -> Result<NormalForm> {
        let m = self.len();
        let mut u = vec![0; m];
        for &(g, e) in w.syllables() {
            if g >= m {
                return Err(Error::GeneratorOutOfRange { index: g, count: m });
            }
            self.mul_gen(&mut u, g, e);
        }
        Ok(NormalForm(u))
    }

    /// `u := u * x_i^s`, collecting from the left: the tail of `u` above `i`
    /// is conjugated past `x_i^s`.
    fn mul_gen(&self, u: &mut [i64], i: usize, s: i64) {
        if s == 0 {
            return;
        }
        if u[i + 1..].iter().any(|&e| e != 0) {
            let mut tail = NormalForm::identity(self.len());
            tail.0[i + 1..].copy_from_slice(&u[i + 1..]);
            let sign = -s.signum();
            for _ in 0..s.unsigned_abs() {
                tail = self.conjugate_once(i, sign, &tail);
            }
            u[i + 1..].copy_from_slice(&tail.0[i + 1..]);
        }
        u[i] += s;
    }

    /// `x_i^sign t x_i^-sign` for `t` in `G_{i+1}`.
    fn conjugate_once(&self, i: usize, sign: i64, t: &NormalForm) -> NormalForm {
        let table = if sign > 0 { &self.fwd[i] } else { &self.inv[i] };
        let mut out = self.identity();
        for j in i + 1..self.len() {
            if t.0[j] != 0 {
                out = self.multiply(&out, &self.power(&table[j], t.0[j]));
            }
        }
        out
    }

    pub fn multiply(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let mut u = a.0.clone();
        for (j, &e) in b.0.iter().enumerate() {
            self.mul_gen(&mut u, j, e);
        }
        NormalForm(u)
    }

    pub fn invert(&self, a: &NormalForm) -> NormalForm {
        let mut u = vec![0; self.len()];
        for j in (0..self.len()).rev() {
            self.mul_gen(&mut u, j, -a.0[j]);
        }
        NormalForm(u)
    }

    pub fn power(&self, a: &NormalForm, e: i64) -> NormalForm {
        let mut base = if e < 0 { self.invert(a) } else { a.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    pub fn conjugate(&self, x: &NormalForm, y: &NormalForm) -> NormalForm {
        self.multiply(&self.multiply(x, y), &self.invert(x))
    }

    /// `[a, b] = a b a^-1 b^-1`
    pub fn commutator(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        self.multiply(&ab, &self.invert(&ba))
    }

    /// The defining relators `x_i x_j x_i^-1 (image)^-1`, `i < j`, in `(i, j)` order.
    pub fn relators(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let lhs = Word::gen(j).conjugate_by(&Word::gen(i));
                out.push(lhs.mul(&self.fwd[i][j].to_word().inverse()));
            }
        }
        out
    }

    pub fn to_presentation(&self) -> Presentation {
        Presentation::new(self.names.clone(), self.relators()).expect("indices in range")
    }

    pub fn format_nf(&self, a: &NormalForm) -> String {
        a.to_word().display(&self.names).to_string()
    }

    /// The forward rules in the textual format, commuting pairs included.
    pub fn format_rules(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                parts.push(format!(
                    "{} {} {}^-1 = {}",
                    self.names[i],
                    self.names[j],
                    self.names[i],
                    self.format_nf(&self.fwd[i][j])
                ));
            }
        }
        parts.join(" ; ")
    }

    /// The subgroup `<x_0 .. x_{k-1}>` image in the quotient by `G_k`: the
    /// presentation on the first `k` generators with images truncated.
    /// Only meaningful when `G_k` is normal, which holds for every `k` here.
    pub fn quotient_top(&self, k: usize) -> Result<PcPresentation> {
        let names = self.names[..k].to_vec();
        let mut rules = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let image = NormalForm(self.fwd[i][j].0[..k].to_vec()).to_word();
                rules.push(PcRule { i, j, inverse: false, image });
            }
        }
        PcPresentation::new(names, rules)
    }
}

fn substitute_vars(text: &str, vars: &[(&str, i64)]) -> Result<String> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        match tok.split_once('^') {
            Some((n, e)) => {
                let (neg, name) = match e.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, e.trim_start_matches('+')),
                };
                if name.chars().all(|c| c.is_ascii_digit()) {
                    out.push(tok.to_string());
                } else {
                    let v = vars
                        .iter()
                        .find(|(k, _)| *k == name)
                        .map(|&(_, v)| v)
                        .ok_or_else(|| Error::Parse(format!("unbound exponent {name:?}")))?;
                    let v = if neg { -v } else { v };
                    out.push(format!("{n}^{v}"));
                }
            }
            None => out.push(tok.to_string()),
        }
    }
    Ok(out.join(" "))
}

/// Associativity of collection on every triple of letters `x_i^{±1}`.
/// Covers the overlaps `x_k (x_j x_i)` as well as the checks that forward and
/// inverse conjugation rules are mutually inverse.
pub fn consistency_check(p: &PcPresentation) -> std::result::Result<(), OverlapWitness> {
    let m = p.len();
    let letters: Vec<(usize, i64)> = (0..m).flat_map(|g| [(g, 1), (g, -1)]).collect();
    let nf = |(g, s): (usize, i64)| {
        let mut v = NormalForm::identity(m);
        v.0[g] = s;
        v
    };
    for &a in &letters {
        for &b in &letters {
            let ab = p.multiply(&nf(a), &nf(b));
            for &c in &letters {
                let left = p.multiply(&ab, &nf(c));
                let right = p.multiply(&nf(a), &p.multiply(&nf(b), &nf(c)));
                if left != right {
                    return Err(OverlapWitness { triple: [a, b, c], left, right });
                }
            }
        }
    }
    Ok(())
}

/// Checks that `x_i ↦ images[i]` sends every relator of `src` to the identity of `dst`.
pub fn verify_homomorphism(src: &Presentation, dst: &PcPresentation, images: &[Word]) -> Result<Check> {
    if images.len() != src.generator_count() {
        return Err(Error::Malformed(format!("{} images for {} generators", images.len(), src.generator_count())));
    }
    for img in images {
        if let Some(g) = img.max_generator() {
            if g >= dst.len() {
                return Err(Error::GeneratorOutOfRange { index: g, count: dst.len() });
            }
        }
    }
    for r in src.relators() {
        let value = dst.collect(&r.substitute(images)?)?;
        if !value.is_identity() {
            return Ok(Check::fail(format!("relator {} maps to {}", r.display(src.names()), dst.format_nf(&value))));
        }
    }
    Ok(Check::pass())
}

/// Checks that `fwd: a -> b` and `bwd: b -> a` are mutually inverse homomorphisms.
pub fn verify_isomorphism(a: &PcPresentation, b: &PcPresentation, fwd: &[Word], bwd: &[Word]) -> Result<Check> {
    let to_b = verify_homomorphism(&a.to_presentation(), b, fwd)?;
    if !to_b.passed {
        return Ok(Check::fail(format!("forward map: {}", to_b.witness.unwrap_or_default())));
    }
    let to_a = verify_homomorphism(&b.to_presentation(), a, bwd)?;
    if !to_a.passed {
        return Ok(Check::fail(format!("backward map: {}", to_a.witness.unwrap_or_default())));
    }
    for (i, img) in fwd.iter().enumerate() {
        let back = a.collect(&img.substitute(bwd)?)?;
        if back != a.generator(i) {
            return Ok(Check::fail(format!("bwd(fwd({})) = {}", a.names()[i], a.format_nf(&back))));
        }
    }
    for (i, img) in bwd.iter().enumerate() {
        let back = b.collect(&img.substitute(fwd)?)?;
        if back != b.generator(i) {
            return Ok(Check::fail(format!("fwd(bwd({})) = {}", b.names()[i], b.format_nf(&back))));
        }
    }
    Ok(Check::pass())
}

/// A pair of generator substitutions `fwd: A -> B` and `bwd: B -> A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    pub fwd: Vec<Word>,
    pub bwd: Vec<Word>,
}

impl GroupMap {
    pub fn identity(m: usize) -> Self {
        let gens: Vec<Word> = (0..m).map(Word::gen).collect();
        GroupMap { fwd: gens.clone(), bwd: gens }
    }

    pub fn parse(fwd: &str, bwd: &str, a: &[String], b: &[String]) -> Result<Self> {
        Ok(GroupMap { fwd: parse_images(fwd, b)?, bwd: parse_images(bwd, a)? })
    }

    /// `A -> B -> C` from `self: A -> B` and `next: B -> C`.
    pub fn then(&self, next: &GroupMap) -> Result<GroupMap> {
        let fwd = self.fwd.iter().map(|w| w.substitute(&next.fwd)).collect::<Result<_>>()?;
        let bwd = next.bwd.iter().map(|w| w.substitute(&self.bwd)).collect::<Result<_>>()?;
        Ok(GroupMap { fwd, bwd })
    }

    pub fn reversed(&self) -> GroupMap {
        GroupMap { fwd: self.bwd.clone(), bwd: self.fwd.clone() }
    }

    pub fn verify(&self, a: &PcPresentation, b: &PcPresentation) -> Result<Check> {
        verify_isomorphism(a, b, &self.fwd, &self.bwd)
    }

    pub fn format(&self, a: &[String], b: &[String]) -> (Vec<String>, Vec<String>) {
        let show = |ws: &[Word], src: &[String], dst: &[String]| {
            ws.iter().zip(src).map(|(w, n)| format!("{n} -> {}", w.display(dst))).collect()
        };
        (show(&self.fwd, a, b), show(&self.bwd, b, a))
    }
}

/// How the commutator subgroup meets the fiber `<n>` (the last generator).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberIndex {
    /// `[π, π] ∩ <n> = 1`
    Trivial,
    /// `[π, π] ∩ <n> = <n^2>`
    IndexTwo,
}

pub fn commutator_fiber_index(p: &PcPresentation) -> FiberIndex {
    let m = p.len();
    let n_inv = {
        let mut v = NormalForm::identity(m);
        v.0[m - 1] = -1;
        v
    };
    if (0..m - 1).any(|i| p.conjugate_rule(i, m - 1) == &n_inv) {
        FiberIndex::IndexTwo
    } else {
        FiberIndex::Trivial
    }
}

/// Parses a generator-image list such as `g h^-1, n, h` against `names`.
pub fn parse_images(text: &str, names: &[String]) -> Result<Vec<Word>> {
    text.split(',').map(|s| Word::parse(s, names)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein_ext(phi_g: i64, phi_h: i64, k: i64) -> PcPresentation {
        let rules = format!("g n g^-1 = n^{phi_g} ; h n h^-1 = n^{phi_h} ; g h g^-1 = n^k h^-1");
        PcPresentation::parse(&["g", "h", "n"], &rules, &[("k", k)]).unwrap()
    }

    fn nf(v: &[i64]) -> NormalForm {
        NormalForm(v.to_vec())
    }

    #[test]
    fn collect_examples() {
        let p3 = klein_ext(-1, 1, 1);
        let hg = Word::parse("h g", p3.names()).unwrap();
        assert_eq!(p3.collect(&hg).unwrap(), nf(&[1, -1, -1]));
        assert_eq!(p3.collect(&Word::identity()).unwrap(), nf(&[0, 0, 0]));
        let p1 = klein_ext(1, 1, 0);
        let w = Word::parse("g h g^-1", p1.names()).unwrap();
        assert_eq!(p1.collect(&w).unwrap(), nf(&[0, -1, 0]));
        assert!(p1.collect(&Word::gen(5)).is_err());
    }

    #[test]
    fn multiply_examples() {
        let p3 = klein_ext(-1, 1, 4);
        let g = p3.generator(0);
        let n = p3.generator(2);
        assert_eq!(p3.conjugate(&g, &n), nf(&[0, 0, -1]));
        let a = nf(&[2, -3, 5]);
        assert_eq!(p3.multiply(&p3.identity(), &a), a);
        assert!(p3.multiply(&a, &p3.invert(&a)).is_identity());
    }

    #[test]
    fn consistency_examples() {
        let p = PcPresentation::new_unchecked(
            vec!["g".into(), "h".into(), "n".into()],
            vec![
                PcRule { i: 0, j: 2, inverse: false, image: Word::gen_pow(2, -1) },
                PcRule { i: 1, j: 2, inverse: false, image: Word::gen_pow(2, 2) },
                PcRule { i: 0, j: 1, inverse: false, image: Word::from_syllables([(1, -1), (2, 1)]) },
            ],
        )
        .unwrap();
        let w = consistency_check(&p).unwrap_err();
        assert_ne!(w.left, w.right);
        let single = PcPresentation::new(vec!["x".into()], vec![]).unwrap();
        assert!(consistency_check(&single).is_ok());
        assert!(consistency_check(&klein_ext(1, -1, 5)).is_ok());
    }

    #[test]
    fn rule_images_must_lie_below() {
        let err = PcPresentation::parse(&["g", "h"], "g h g^-1 = g", &[]);
        assert!(matches!(err, Err(Error::Malformed(_))));
        let err = PcPresentation::parse(&["g", "h"], "g h = h", &[]);
        assert!(matches!(err, Err(Error::Parse(_))));
    }

    #[test]
    fn fiber_index() {
        assert_eq!(commutator_fiber_index(&klein_ext(1, 1, 1)), FiberIndex::Trivial);
        assert_eq!(commutator_fiber_index(&klein_ext(1, -1, 0)), FiberIndex::IndexTwo);
    }

    #[test]
    fn inverse_rules_derived() {
        let p = klein_ext(-1, 1, 3);
        // g^-1 h g = h^-1 n^{k phi(g)} = h^-1 n^-3
        assert_eq!(p.inverse_conjugate_rule(0, 1), &nf(&[0, -1, -3]));
        assert_eq!(p.inverse_conjugate_rule(0, 2), &nf(&[0, 0, -1]));
    }
}
