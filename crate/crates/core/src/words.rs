//! Free-group words, finite presentations, sign twists and Fox calculus.

use std::fmt;

use crate::algebra::{cokernel_of_rows, Matrix};
use crate::error::{Error, Result};
use crate::Int;

/// A freely reduced word, stored as syllables `(generator, exponent)` with
/// nonzero exponents and no two adjacent syllables on the same generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_syllables(syllables: impl IntoIterator<Item = (usize, i64)>) -> Self {
        free_reduce(Word(syllables.into_iter().collect()))
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![(g, 1)])
    }

    pub fn gen_pow(g: usize, e: i64) -> Self {
        Self::from_syllables([(g, e)])
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of letters `x^{±1}`.
    pub fn len(&self) -> usize {
        self.0.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letters one at a time as `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.0.iter().flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&(g, _)| g).max()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        free_reduce(Word(v))
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `x y x^{-1}`
    pub fn conjugate_by(&self, x: &Word) -> Word {
        x.mul(self).mul(&x.inverse())
    }

    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0; ngens];
        for &(g, e) in &self.0 {
            v[g] += e;
        }
        v
    }

    /// Replaces every generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let mut out = Word::identity();
        for &(g, e) in &self.0 {
            let img = images.get(g).ok_or(Error::GeneratorOutOfRange { index: g, count: images.len() })?;
            out = out.mul(&img.pow(e));
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Parses `g h^2 g^-1 n^-3`; the empty string or `1` is the identity.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::identity());
        }
        let mut syl = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim_start_matches('+');
                    let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let g = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
            syl.push((g, exp));
        }
        Ok(Word::from_syllables(syl))
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.word.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = self.names.get(g).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Maximal free reduction. Never lengthens the word.
pub fn free_reduce(w: Word) -> Word {
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(w.0.len());
    for (g, e) in w.0 {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == g => {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    Word(out)
}

/// A finite presentation. Generator names are labels only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= names.len() {
                    return Err(Error::GeneratorOutOfRange { index: g, count: names.len() });
                }
            }
        }
        Ok(Presentation { names, relators })
    }

    /// One relator per line (or `;`-separated). An optional first line
    /// `gens: a b c` fixes generator order; otherwise generators are taken in
    /// order of first appearance.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut lines: Vec<&str> = Vec::new();
        for line in text.lines().flat_map(|l| l.split(';')) {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                names = rest.split_whitespace().map(str::to_string).collect();
            } else {
                lines.push(line);
            }
        }
        for line in &lines {
            for tok in line.split_whitespace() {
                let name = tok.split('^').next().unwrap_or(tok);
                if !names.iter().any(|n| n == name) {
                    names.push(name.to_string());
                }
            }
        }
        let relators = lines.iter().map(|l| Word::parse(l, &names)).collect::<Result<Vec<_>>>()?;
        Self::new(names, relators)
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// `{ g, h | g h g^-1 h }`
    pub fn klein() -> Self {
        Self::parse("gens: g h\ng h g^-1 h").expect("static presentation")
    }

    /// `{ a, b | a b a^-1 b^-1 }`
    pub fn torus() -> Self {
        Self::parse("gens: a b\na b a^-1 b^-1").expect("static presentation")
    }

    pub fn free_abelian(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let mut rel = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                rel.push(Word::from_syllables([(i, 1), (j, 1), (i, -1), (j, -1)]));
            }
        }
        Self::new(names, rel).expect("valid generators")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.names.join(" "))?;
        for r in &self.relators {
            writeln!(f, "{}", r.display(&self.names))?;
        }
        Ok(())
    }
}

/// A homomorphism to `{±1}` given by its values on generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistMap {
    signs: Vec<i8>,
}

impl TwistMap {
    /// Validates that every relator evaluates to `+1`.
    pub fn new(p: &Presentation, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != p.generator_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} signs for {} generators",
                signs.len(),
                p.generator_count()
            )));
        }
        Self::check_signs(&signs)?;
        let phi = TwistMap { signs };
        for r in p.relators() {
            if phi.sign_of(r) != 1 {
                return Err(Error::InvalidTwist { relator: r.display(p.names()).to_string() });
            }
        }
        Ok(phi)
    }

    /// Sign assignment without relator validation; callers validate against
    /// whatever group structure they hold.
    pub fn from_signs(signs: Vec<i8>) -> Result<Self> {
        Self::check_signs(&signs)?;
        Ok(TwistMap { signs })
    }

    fn check_signs(signs: &[i8]) -> Result<()> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parse("signs must be +1 or -1".into()));
        }
        Ok(())
    }

    pub fn trivial(n: usize) -> Self {
        TwistMap { signs: vec![1; n] }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    pub fn sign(&self, g: usize) -> i64 {
        i64::from(self.signs[g])
    }

    pub fn sign_of(&self, w: &Word) -> i64 {
        w.syllables().iter().map(|&(g, e)| if self.signs[g] == -1 && e % 2 != 0 { -1 } else { 1 }).product()
    }

    /// Parses `g=-1,h=+1` or `{g:-1,h:+1}`; unnamed generators default to `+1`.
    pub fn parse_signs(text: &str, names: &[String]) -> Result<Vec<i8>> {
        let body = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut signs = vec![1i8; names.len()];
        for part in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, val) =
                part.split_once(['=', ':']).ok_or_else(|| Error::Parse(format!("expected name=sign, got {part:?}")))?;
            let g = names
                .iter()
                .position(|n| n == name.trim())
                .ok_or_else(|| Error::Parse(format!("unknown generator {:?}", name.trim())))?;
            signs[g] = match val.trim() {
                "+1" | "1" | "+" => 1,
                "-1" | "-" => -1,
                other => return Err(Error::Parse(format!("bad sign {other:?}"))),
            };
        }
        Ok(signs)
    }

    pub fn format(&self, names: &[String]) -> String {
        let parts: Vec<String> =
            names.iter().zip(&self.signs).map(|(n, &s)| format!("{n}:{}", if s > 0 { "+1" } else { "-1" })).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// The Fox derivative `∂r/∂x_gen` pushed through the ring map `g ↦ φ(g)`.
pub fn fox_augmented(r: &Word, gen: usize, phi: &TwistMap) -> Result<i64> {
    if gen >= phi.len() {
        return Err(Error::GeneratorOutOfRange { index: gen, count: phi.len() });
    }
    if let Some(g) = r.max_generator() {
        if g >= phi.len() {
            return Err(Error::GeneratorOutOfRange { index: g, count: phi.len() });
        }
    }
    let mut prefix_sign = 1i64;
    let mut total = 0i64;
    for (g, s) in r.letters() {
        let sg = phi.sign(g);
        if s > 0 {
            if g == gen {
                total += prefix_sign;
            }
            prefix_sign *= sg;
        } else {
            prefix_sign *= sg;
            if g == gen {
                total -= prefix_sign;
            }
        }
    }
    Ok(total)
}

/// Relator exponent-sum matrix (rows = relators).
pub fn relation_matrix(p: &Presentation) -> Matrix<Int> {
    let n = p.generator_count();
    let rows: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_sums(n)).collect();
    if rows.is_empty() {
        return Matrix::zeros(0, n);
    }
    Matrix::from_rows(&rows).expect("rectangular by construction")
}

/// Free rank and torsion invariants (> 1) of `H_1`.
pub fn abelianization(p: &Presentation) -> (usize, Vec<Int>) {
    let c = cokernel_of_rows(&relation_matrix(p));
    (c.free_rank, c.torsion)
}
