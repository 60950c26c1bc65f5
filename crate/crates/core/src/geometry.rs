//! Exact models of flat euclidean motions and of Heisenberg-affine motions
//! `E(N) = N ⋊ (U(1) ⋊ <τ>)`, with relation checks and fixed-point search.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{solve_affine, Gauss, Matrix};
use crate::check::Check;
use crate::cohomology::box_elements;
use crate::error::{Error, Result};
use crate::polycyclic::{NormalForm, PcPresentation};
use crate::scalar::Scalar;
use crate::words::Word;
use crate::Rat;

pub use crate::catalogue::catalogue_representation;

/// A group element that can be composed and inverted exactly.
pub trait Motion: Clone + PartialEq + fmt::Debug {
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn is_identity(&self) -> bool;
}

/// `x ↦ A x + b` with `A` a signed permutation matrix.
#[derive(Clone, PartialEq)]
pub struct FlatAffine<S> {
    linear: Matrix<i64>,
    translation: Vec<S>,
}

impl<S: Scalar> FlatAffine<S> {
    pub fn new(linear: Matrix<i64>, translation: Vec<S>) -> Result<Self> {
        let n = translation.len();
        if linear.rows() != n || linear.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} linear part with translation of length {n}",
                linear.rows(),
                linear.cols()
            )));
        }
        let signed_perm = (0..n).all(|i| {
            let row = linear.row(i);
            row.iter().all(|&x| x.abs() <= 1) && row.iter().filter(|&&x| x != 0).count() == 1
        }) && (0..n).all(|j| (0..n).filter(|&i| linear[(i, j)] != 0).count() == 1);
        if !signed_perm {
            return Err(Error::Malformed(format!("linear part is not a signed permutation: {linear:?}")));
        }
        Ok(FlatAffine { linear, translation })
    }

    pub fn translation_only(b: Vec<S>) -> Self {
        let n = b.len();
        FlatAffine { linear: Matrix::identity(n), translation: b }
    }

    pub fn diagonal(signs: &[i64], b: Vec<S>) -> Result<Self> {
        let n = signs.len();
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { signs[i] } else { 0 }).collect()).collect();
        Self::new(Matrix::from_rows(&rows)?, b)
    }

    pub fn linear(&self) -> &Matrix<i64> {
        &self.linear
    }

    pub fn translation(&self) -> &[S] {
        &self.translation
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    fn apply_linear(&self, v: &[S]) -> Vec<S> {
        (0..self.dim())
            .map(|i| (0..self.dim()).fold(S::zero(), |acc, j| acc + S::from_int(self.linear[(i, j)]) * v[j].clone()))
            .collect()
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        self.apply_linear(v).into_iter().zip(&self.translation).map(|(a, b)| a + b.clone()).collect()
    }

    /// One solution of `A x + b = x`, if any.
    pub fn fixed_point(&self) -> Option<Vec<S>> {
        let n = self.dim();
        let rows: Vec<Vec<S>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let delta = if i == j { 1 } else { 0 };
                        S::from_int(self.linear[(i, j)] - delta)
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<S> = self.translation.iter().map(|b| -b.clone()).collect();
        solve_affine(&rows, &rhs)
    }
}

impl<S: Scalar> Motion for FlatAffine<S> {
    fn compose(&self, other: &Self) -> Self {
        let linear = self.linear.mul(&other.linear).expect("same dimension");
        FlatAffine { linear, translation: self.apply(&other.translation) }
    }

    fn inverse(&self) -> Self {
        let linear = self.linear.transpose();
        let inv = FlatAffine { linear, translation: vec![S::zero(); self.dim()] };
        let t = inv.apply_linear(&self.translation).into_iter().map(|x| -x).collect();
        FlatAffine { translation: t, ..inv }
    }

    fn is_identity(&self) -> bool {
        self.linear == Matrix::identity(self.dim()) && self.translation.iter().all(S::is_zero)
    }
}

impl<S: Scalar + fmt::Display> fmt::Debug for FlatAffine<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.translation.iter().map(ToString::to_string).collect();
        let a: Vec<String> = (0..self.dim())
            .map(|i| {
                let row: Vec<String> = self.linear.row(i).iter().map(i64::to_string).collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        write!(f, "(({}), [{}])", b.join(", "), a.join(","))
    }
}

/// Element `(x, z)` of `N = R × C` with `(x,z)(y,w) = (x + y − Im(z̄w), z + w)`.
#[derive(Clone, PartialEq)]
pub struct Heis<S> {
    pub x: S,
    pub z: Gauss<S>,
}

impl<S: Scalar> Heis<S> {
    pub fn new(x: S, z: Gauss<S>) -> Self {
        Heis { x, z }
    }

    pub fn identity() -> Self {
        Heis { x: S::zero(), z: Gauss::zero() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let im = (self.z.conj() * o.z.clone()).im;
        Heis { x: self.x.clone() + o.x.clone() - im, z: self.z.clone() + o.z.clone() }
    }

    pub fn inverse(&self) -> Self {
        Heis { x: -self.x.clone(), z: -self.z.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }
}

impl<S: Scalar + fmt::Display> fmt::Debug for Heis<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.z)
    }
}

/// `(x, z) ↦ (x, u z)` or, with `conj`, `(x, z) ↦ (−x, u z̄)`, for `|u| = 1`.
#[derive(Clone, PartialEq)]
pub struct HeisAut<S> {
    rot: Gauss<S>,
    conj: bool,
}

impl<S: Scalar> HeisAut<S> {
    pub fn new(rot: Gauss<S>, conj: bool) -> Result<Self> {
        if rot.norm_sqr() != S::one() {
            return Err(Error::NonUnitRotation(format!("|u|^2 = {:?}", rot.norm_sqr())));
        }
        Ok(HeisAut { rot, conj })
    }

    pub fn identity() -> Self {
        HeisAut { rot: Gauss::one(), conj: false }
    }

    /// `τ(x, z) = (−x, z̄)`
    pub fn tau() -> Self {
        HeisAut { rot: Gauss::one(), conj: true }
    }

    pub fn rotation(&self) -> &Gauss<S> {
        &self.rot
    }

    pub fn is_conjugating(&self) -> bool {
        self.conj
    }

    pub fn apply(&self, h: &Heis<S>) -> Heis<S> {
        if self.conj {
            Heis { x: -h.x.clone(), z: self.rot.clone() * h.z.conj() }
        } else {
            Heis { x: h.x.clone(), z: self.rot.clone() * h.z.clone() }
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        let r = if self.conj { other.rot.conj() } else { other.rot.clone() };
        HeisAut { rot: self.rot.clone() * r, conj: self.conj != other.conj }
    }

    pub fn inverse(&self) -> Self {
        let rot = if self.conj { self.rot.clone() } else { self.rot.conj() };
        HeisAut { rot, conj: self.conj }
    }

    pub fn is_identity(&self) -> bool {
        !self.conj && self.rot == Gauss::one()
    }
}

/// `ξ ↦ g · A(ξ)`
#[derive(Clone, PartialEq)]
pub struct HeisAffine<S> {
    pub g: Heis<S>,
    pub aut: HeisAut<S>,
}

impl<S: Scalar> HeisAffine<S> {
    pub fn new(g: Heis<S>, aut: HeisAut<S>) -> Self {
        HeisAffine { g, aut }
    }

    pub fn translation(g: Heis<S>) -> Self {
        HeisAffine { g, aut: HeisAut::identity() }
    }

    pub fn apply(&self, p: &Heis<S>) -> Heis<S> {
        self.g.mul(&self.aut.apply(p))
    }

    /// One solution `ξ` of `g · A(ξ) = ξ`, if any. With `A(x, z) = (σx, u z^c)`
    /// the equations are linear in `(x, Re z, Im z)`:
    /// `z − u z^c = g_z` and `(1 − σ) x + Im(ḡ_z u z^c) = g_x`.
    pub fn fixed_point(&self) -> Option<Heis<S>> {
        let lin = |z: Gauss<S>| if self.aut.conj { self.aut.rot.clone() * z.conj() } else { self.aut.rot.clone() * z };
        let basis = [Gauss::one(), Gauss::i()];
        let sigma = if self.aut.conj { -S::one() } else { S::one() };
        let gz_bar = self.g.z.conj();
        let mut rows = vec![vec![S::one() - sigma]];
        let im_terms: Vec<S> = basis.iter().map(|e| (gz_bar.clone() * lin(e.clone())).im).collect();
        rows[0].extend(im_terms);
        let z_cols: Vec<Gauss<S>> = basis.iter().map(|e| e.clone() - lin(e.clone())).collect();
        rows.push(vec![S::zero(), z_cols[0].re.clone(), z_cols[1].re.clone()]);
        rows.push(vec![S::zero(), z_cols[0].im.clone(), z_cols[1].im.clone()]);
        let rhs = vec![self.g.x.clone(), self.g.z.re.clone(), self.g.z.im.clone()];
        let sol = solve_affine(&rows, &rhs)?;
        Some(Heis { x: sol[0].clone(), z: Gauss::new(sol[1].clone(), sol[2].clone()) })
    }
}

impl<S: Scalar> Motion for HeisAffine<S> {
    fn compose(&self, other: &Self) -> Self {
        HeisAffine { g: self.g.mul(&self.aut.apply(&other.g)), aut: self.aut.compose(&other.aut) }
    }

    fn inverse(&self) -> Self {
        let inv = self.aut.inverse();
        HeisAffine { g: inv.apply(&self.g.inverse()), aut: inv }
    }

    fn is_identity(&self) -> bool {
        self.g.is_identity() && self.aut.is_identity()
    }
}

impl<S: Scalar + fmt::Display> fmt::Debug for HeisAffine<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let aut = match (self.aut.rot == Gauss::one(), self.aut.conj) {
            (true, false) => "I".to_string(),
            (true, true) => "tau".to_string(),
            (false, false) => format!("rot({})", self.aut.rot),
            (false, true) => format!("rot({})tau", self.aut.rot),
        };
        write!(f, "({:?}, {aut})", self.g)
    }
}

/// One motion per generator.
#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    Flat(Vec<FlatAffine<Rat>>),
    Heisenberg(Vec<HeisAffine<Rat>>),
}

/// The value of a word under a representation.
#[derive(Clone, Debug, PartialEq)]
pub enum MotionValue {
    Flat(FlatAffine<Rat>),
    Heisenberg(HeisAffine<Rat>),
}

impl MotionValue {
    pub fn is_identity(&self) -> bool {
        match self {
            MotionValue::Flat(m) => m.is_identity(),
            MotionValue::Heisenberg(m) => m.is_identity(),
        }
    }

    pub fn has_fixed_point(&self) -> Option<String> {
        match self {
            MotionValue::Flat(m) => m.fixed_point().map(|p| {
                let v: Vec<String> = p.iter().map(ToString::to_string).collect();
                format!("({})", v.join(", "))
            }),
            MotionValue::Heisenberg(m) => m.fixed_point().map(|p| format!("{p:?}")),
        }
    }
}

fn eval_motion<M: Motion>(gens: &[M], id: M, w: &Word) -> Result<M> {
    let mut acc = id;
    for (g, s) in w.letters() {
        let x = gens.get(g).ok_or(Error::GeneratorOutOfRange { index: g, count: gens.len() })?;
        acc = if s > 0 { acc.compose(x) } else { acc.compose(&x.inverse()) };
    }
    Ok(acc)
}

impl Representation {
    pub fn len(&self) -> usize {
        match self {
            Representation::Flat(v) => v.len(),
            Representation::Heisenberg(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, Representation::Flat(_))
    }

    pub fn eval(&self, w: &Word) -> Result<MotionValue> {
        match self {
            Representation::Flat(gens) => {
                let n = gens.first().map_or(0, FlatAffine::dim);
                let id = FlatAffine::translation_only(vec![Rat::from_integer(0.into()); n]);
                eval_motion(gens, id, w).map(MotionValue::Flat)
            }
            Representation::Heisenberg(gens) => {
                let id = HeisAffine::translation(Heis::identity());
                eval_motion(gens, id, w).map(MotionValue::Heisenberg)
            }
        }
    }

    pub fn eval_nf(&self, a: &NormalForm) -> Result<MotionValue> {
        self.eval(&a.to_word())
    }

    /// Linear parts of the generators (flat case).
    pub fn linear_parts(&self) -> Option<Vec<Matrix<i64>>> {
        match self {
            Representation::Flat(gens) => Some(gens.iter().map(|g| g.linear().clone()).collect()),
            Representation::Heisenberg(_) => None,
        }
    }
}

/// Checks every conjugation rule of `p` as an exact identity of motions.
pub fn verify_relations_in_rep(p: &PcPresentation, rep: &Representation) -> Result<Check> {
    if rep.len() != p.len() {
        return Err(Error::DimensionMismatch(format!("{} generator images for {} generators", rep.len(), p.len())));
    }
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let lhs = rep.eval(&Word::gen(j).conjugate_by(&Word::gen(i)))?;
            let rhs = rep.eval_nf(p.conjugate_rule(i, j))?;
            if lhs != rhs {
                let n = p.names();
                return Ok(Check::fail(format!(
                    "{} {} {}^-1 = {lhs:?} but {} = {rhs:?}",
                    n[i],
                    n[j],
                    n[i],
                    p.format_nf(p.conjugate_rule(i, j))
                )));
            }
        }
    }
    Ok(Check::pass())
}

/// Outcome of a bounded fixed-point search. This certifies only the words
/// enumerated, not freeness of the whole action.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FreenessReport {
    pub max_word_len: u64,
    pub words_checked: usize,
    /// `(normal form, fixed point)` pairs.
    pub fixed: Vec<(Vec<i64>, String)>,
    pub bounded_certificate: bool,
}

impl FreenessReport {
    pub fn is_free(&self) -> bool {
        self.fixed.is_empty()
    }
}

/// Solves the fixed-point equation of every nonidentity normal form of
/// length at most `max_word_len`.
pub fn freeness_sample(p: &PcPresentation, rep: &Representation, max_word_len: u64) -> Result<FreenessReport> {
    let mut fixed = Vec::new();
    let mut checked = 0;
    for a in box_elements(p.len(), max_word_len as i64) {
        if a.is_identity() || a.length() > max_word_len {
            continue;
        }
        checked += 1;
        if let Some(pt) = rep.eval_nf(&a)?.has_fixed_point() {
            fixed.push((a.0.clone(), pt));
        }
    }
    Ok(FreenessReport { max_word_len, words_checked: checked, fixed, bounded_certificate: true })
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Generators `a = (0, k)`, `b = (0, k i)`, `c = (2k, 0)` of `Δ(k)`.
pub fn delta_generators(k: i64) -> [Heis<Rat>; 3] {
    [
        Heis::new(rat(0), Gauss::new(rat(k), rat(0))),
        Heis::new(rat(0), Gauss::new(rat(0), rat(k))),
        Heis::new(rat(2 * k), Gauss::zero()),
    ]
}

/// Generators `α = ((0, k/2), τ)`, `β = ((0, k i), I)`, `n = ((k, 0), I)` of `Γ(k)`.
pub fn gamma_generators(k: i64) -> [HeisAffine<Rat>; 3] {
    [
        HeisAffine::new(Heis::new(rat(0), Gauss::new(Rat::new(k.into(), 2.into()), rat(0))), HeisAut::tau()),
        HeisAffine::translation(Heis::new(rat(0), Gauss::new(rat(0), rat(k)))),
        HeisAffine::translation(Heis::new(rat(k), Gauss::zero())),
    ]
}

/// Fiber exponent of `[a, b]` in `Δ(k)`, i.e. `[a, b] = c^e`.
pub fn euler_number(k: i64) -> Result<i64> {
    let [a, b, c] = delta_generators(k);
    let comm = a.mul(&b).mul(&a.inverse()).mul(&b.inverse());
    if !comm.z.is_zero() {
        return Err(Error::Inconsistent(format!("[a, b] = {comm:?} is not central")));
    }
    if c.x.is_zero() {
        return if comm.x.is_zero() { Ok(0) } else { Err(Error::Inconsistent("c is trivial".into())) };
    }
    let e = comm.x / c.x;
    if !e.is_integer() {
        return Err(Error::Inconsistent(format!("[a, b] is not a power of c: exponent {e}")));
    }
    e.to_integer().try_into().map_err(|_| Error::Unsupported("exponent overflow".into()))
}

/// Checks that `Γ(k)/<n>` acts on `C = R^2` as a Klein bottle group: `β̂`
/// and `α̂²` translate by the lattice `kZ ⊕ kZ i`, `α̂` normalizes that
/// lattice, and its linear part is a reflection fixing the `α̂²` direction
/// and reversing the `β̂` direction. Pass `alpha` to test another α.
pub fn klein_quotient_check(k: i64, alpha: Option<&HeisAffine<Rat>>) -> Result<Check> {
    if k == 0 {
        return Err(Error::Unsupported("Γ(0) has no Heisenberg model".into()));
    }
    let [a0, beta, _] = gamma_generators(k);
    let alpha = alpha.cloned().unwrap_or(a0);
    // projected action z ↦ g_z + u z^c
    let lin = |z: Gauss<Rat>| {
        if alpha.aut.conj {
            alpha.aut.rot.clone() * z.conj()
        } else {
            alpha.aut.rot.clone() * z
        }
    };
    let t1 = Gauss::new(rat(k), rat(0));
    let t2 = Gauss::new(rat(0), rat(k));
    if beta.g.z != t2 || !beta.aut.is_identity() {
        return Ok(Check::fail("β does not project to the translation k i"));
    }
    let sq = alpha.compose(&alpha);
    if !sq.aut.is_identity() || sq.g.z != t1 {
        return Ok(Check::fail(format!("α² = {sq:?} does not project to the translation k")));
    }
    if lin(t1.clone()) != t1 {
        return Ok(Check::fail("linear part of α moves the α² direction"));
    }
    if lin(t2.clone()) != -t2 {
        return Ok(Check::fail("linear part of α does not reverse the β direction"));
    }
    Ok(Check::pass())
}
