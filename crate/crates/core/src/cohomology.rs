//! Twisted second cohomology of the 2-dimensional bases, cocycles read off
//! extension groups, and the lattice-restriction tests that decide type.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{smith_normal_form, Matrix};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::polycyclic::{NormalForm, PcPresentation, PcRule};
use crate::towers::{build_extension, seifert_multiply};
use crate::words::{fox_augmented, Presentation, TwistMap, Word};
use crate::Int;

/// `H^2_φ(Q, Z)` as `Z^free_rank ⊕ ⊕ Z/torsion_i`, with the class of the
/// extension whose relator lifts to `n^1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub free_rank: usize,
    #[serde(with = "crate::int_serde::vec")]
    pub torsion: Vec<Int>,
    #[serde(with = "crate::int_serde")]
    pub generator_image: Int,
}

impl CohomologyResult {
    /// `Z`, `Z_2`, `0`, ...
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z_{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.insert(0, "Z".into()),
            r => parts.insert(0, format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Order of a cohomology class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassOrder {
    Finite(#[serde(with = "crate::int_serde")] Int),
    Infinite,
}

impl ClassOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, ClassOrder::Finite(_))
    }

    pub fn is_zero_class(&self) -> bool {
        matches!(self, ClassOrder::Finite(d) if d.is_one())
    }
}

fn validate_twist(p: &Presentation, phi: &TwistMap) -> Result<()> {
    if phi.len() != p.generator_count() {
        return Err(Error::DimensionMismatch(format!("{} signs for {} generators", phi.len(), p.generator_count())));
    }
    for r in p.relators() {
        if phi.sign_of(r) != 1 {
            return Err(Error::InvalidTwist { relator: r.display(p.names()).to_string() });
        }
    }
    Ok(())
}

/// The row `(∂r/∂x_1, .., ∂r/∂x_n)` of φ-augmented Fox derivatives.
pub fn fox_row(p: &Presentation, phi: &TwistMap) -> Result<Vec<i64>> {
    if p.relators().len() != 1 {
        return Err(Error::RelatorCount(p.relators().len()));
    }
    validate_twist(p, phi)?;
    let r = &p.relators()[0];
    (0..p.generator_count()).map(|g| fox_augmented(r, g, phi)).collect()
}

/// `H^2_φ` of a one-relator aspherical group: the cokernel of the Fox row
/// `Z^n -> Z`.
pub fn h2_one_relator(p: &Presentation, phi: &TwistMap) -> Result<CohomologyResult> {
    let row = fox_row(p, phi)?;
    let snf = smith_normal_form(&Matrix::<Int>::from_rows(&[row])?);
    let d = snf.d[0].clone();
    let u = snf.u[(0, 0)].clone();
    let (free_rank, torsion, generator_image) = if d.is_zero() {
        (1, vec![], u.abs())
    } else if d.is_one() {
        (0, vec![], Int::zero())
    } else {
        (0, vec![d.clone()], u.mod_floor(&d))
    };
    Ok(CohomologyResult { free_rank, torsion, generator_image })
}

/// Order of `k·[f_1]` in `H^2_φ`.
pub fn class_order(base: &Presentation, phi: &TwistMap, k: &Int) -> Result<ClassOrder> {
    let h2 = h2_one_relator(base, phi)?;
    if h2.free_rank > 0 {
        return Ok(if k.is_zero() { ClassOrder::Finite(Int::one()) } else { ClassOrder::Infinite });
    }
    let d = h2.torsion.first().cloned().unwrap_or_else(Int::one);
    Ok(ClassOrder::Finite(&d / d.gcd(k)))
}

/// The pc presentation `x_0 x_1 x_0^-1 = x_1^{-s}` of a base presented by the
/// single relator `x_0 x_1 x_0^-1 x_1^s`.
pub fn surface_pc(p: &Presentation) -> Result<PcPresentation> {
    let shape = match p.relators() {
        [r] if p.generator_count() == 2 => match r.syllables() {
            [(0, 1), (1, 1), (0, -1), (1, s)] if s.abs() == 1 => Some(*s),
            _ => None,
        },
        _ => None,
    };
    let s = shape.ok_or_else(|| Error::Unsupported("base must be presented as x y x^-1 y^±1".into()))?;
    PcPresentation::new(p.names().to_vec(), vec![PcRule { i: 0, j: 1, inverse: false, image: Word::gen_pow(1, -s) }])
}

/// `f(α, β)` for every pair of base normal forms with exponents in
/// `[-window, window]`, read off an extension through the section that puts
/// fiber exponent 0 on each base normal form.
#[derive(Clone, Debug)]
pub struct CocycleTable {
    pub base: PcPresentation,
    pub phi: TwistMap,
    pub window: i64,
    values: HashMap<(NormalForm, NormalForm), i64>,
}

impl CocycleTable {
    pub fn in_window(&self, a: &NormalForm) -> bool {
        a.0.iter().all(|e| e.abs() <= self.window)
    }

    pub fn get(&self, a: &NormalForm, b: &NormalForm) -> Result<i64> {
        self.values
            .get(&(a.clone(), b.clone()))
            .copied()
            .ok_or_else(|| Error::WindowExceeded(format!("f({}, {})", self.base.format_nf(a), self.base.format_nf(b))))
    }

    /// Base elements covered by the table, in lexicographic order.
    pub fn elements(&self) -> Vec<NormalForm> {
        box_elements(self.base.len(), self.window)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First triple violating `φ(α)f(β,γ) − f(αβ,γ) + f(α,βγ) − f(α,β) = 0`
    /// among those whose every pair lies in the table.
    pub fn cocycle_violation(&self) -> Option<[NormalForm; 3]> {
        let elems = self.elements();
        for a in &elems {
            let pa = self.phi_of(a);
            for b in &elems {
                let ab = self.base.multiply(a, b);
                for c in &elems {
                    let bc = self.base.multiply(b, c);
                    let vals = (self.get(b, c), self.get(&ab, c), self.get(a, &bc), self.get(a, b));
                    if let (Ok(f_bc), Ok(f_ab_c), Ok(f_a_bc), Ok(f_ab)) = vals {
                        if pa * f_bc - f_ab_c + f_a_bc - f_ab != 0 {
                            return Some([a.clone(), b.clone(), c.clone()]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn phi_of(&self, a: &NormalForm) -> i64 {
        self.phi.sign_of(&a.to_word())
    }
}

/// All exponent vectors of length `m` with entries in `[-w, w]`, lexicographic.
pub fn box_elements(m: usize, w: i64) -> Vec<NormalForm> {
    let mut out = vec![NormalForm(Vec::with_capacity(m))];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-w..=w).map(move |e| {
                    let mut v = v.0.clone();
                    v.push(e);
                    NormalForm(v)
                })
            })
            .collect();
    }
    out
}

/// The action `φ` of an extension on its fiber (last generator), read from
/// the rules `x_i n x_i^-1 = n^{±1}`.
pub fn fiber_action(ext: &PcPresentation) -> Result<TwistMap> {
    let m = ext.len();
    if m < 2 {
        return Err(Error::Malformed("extension needs a base and a fiber generator".into()));
    }
    let mut signs = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let img = ext.conjugate_rule(i, m - 1);
        let e = img.0[m - 1];
        if img.0[..m - 1].iter().any(|&x| x != 0) || e.abs() != 1 {
            return Err(Error::Malformed(format!(
                "{} does not normalize the fiber: {} n {}^-1 = {}",
                ext.names()[i],
                ext.names()[i],
                ext.names()[i],
                ext.format_nf(img)
            )));
        }
        signs.push(e as i8);
    }
    TwistMap::from_signs(signs)
}

/// Lifts a base normal form to the extension with fiber exponent 0.
pub fn section(a: &NormalForm) -> NormalForm {
    let mut v = a.0.clone();
    v.push(0);
    NormalForm(v)
}

/// Splits an extension element into `(fiber coordinate, base element)` with
/// `x = n^fiber · s(base)`.
pub fn to_seifert(ext: &PcPresentation, phi: &TwistMap, x: &NormalForm) -> (i64, NormalForm) {
    let m = ext.len();
    let base = NormalForm(x.0[..m - 1].to_vec());
    // s(base) n^e = n^{φ(base) e} s(base)
    let fiber = phi.sign_of(&base.to_word()) * x.0[m - 1];
    (fiber, base)
}

pub fn cocycle_from_extension(ext: &PcPresentation, window: i64) -> Result<CocycleTable> {
    if window < 1 {
        return Err(Error::Malformed(format!("window must be positive, got {window}")));
    }
    let phi = fiber_action(ext)?;
    let base = ext.quotient_top(ext.len() - 1)?;
    let elems = box_elements(base.len(), window);
    let mut values = HashMap::with_capacity(elems.len() * elems.len());
    for a in &elems {
        let sa = section(a);
        for b in &elems {
            let prod = ext.multiply(&sa, &section(b));
            let ab = base.multiply(a, b);
            let diff = ext.multiply(&prod, &ext.invert(&section(&ab)));
            let (f, rest) = to_seifert(ext, &phi, &diff);
            debug_assert!(rest.is_identity());
            values.insert((a.clone(), b.clone()), f);
        }
    }
    Ok(CocycleTable { base, phi, window, values })
}

/// `(n, α)^-1 = (-φ(α)(n + f(α, α^-1)), α^-1)`
pub fn seifert_inverse(f: &CocycleTable, x: &(i64, NormalForm)) -> Result<(i64, NormalForm)> {
    let inv = f.base.invert(&x.1);
    let fa = f.get(&x.1, &inv)?;
    Ok((-f.phi_of(&x.1) * (x.0 + fa), inv))
}

/// Fiber exponent of the relator evaluated on section lifts through the
/// Seifert law.
pub fn relator_pairing(f: &CocycleTable, relator: &Word) -> Result<i64> {
    let m = f.base.len();
    let mut acc = (0i64, f.base.identity());
    for (g, s) in relator.letters() {
        if g >= m {
            return Err(Error::GeneratorOutOfRange { index: g, count: m });
        }
        let mut x = (0, NormalForm::gen(m, g));
        if s < 0 {
            x = seifert_inverse(f, &x)?;
        }
        acc = seifert_multiply(f, &acc, &x)?;
    }
    if !acc.1.is_identity() {
        return Err(Error::Malformed(format!("{} is not a relator of the base", relator.display(f.base.names()))));
    }
    Ok(acc.0)
}

/// A pair of squared base generators that commute in the base but whose
/// lifts do not commute in `ext`, with the lifted commutator.
pub fn restriction_commutator(ext: &PcPresentation) -> Option<(usize, usize, NormalForm)> {
    let m = ext.len();
    if m < 2 {
        return None;
    }
    let squares: Vec<NormalForm> = (0..m - 1).map(|i| ext.power(&ext.generator(i), 2)).collect();
    for i in 0..m - 1 {
        for j in i + 1..m - 1 {
            let c = ext.commutator(&squares[i], &squares[j]);
            if c.0[..m - 1].iter().any(|&e| e != 0) {
                // the squares do not commute in the base, so they are not lattice generators
                continue;
            }
            if !c.is_identity() {
                return Some((i, j, c));
            }
        }
    }
    None
}

/// Whether the extension class restricts nontrivially to the translation
/// lattice of the base.
pub fn restriction_nonzero(ext: &PcPresentation) -> bool {
    restriction_commutator(ext).is_some()
}

/// Checks `τ∘i^* = ×2` at class level for the extension of `base` by `k·[f_1]`:
/// when `[f_k]` restricts to zero on `ker φ`, `2k·[f_1]` must vanish.
pub fn transfer_identity_check(base: &Presentation, phi: &TwistMap, k: i64) -> Result<Check> {
    validate_twist(base, phi)?;
    if phi.is_trivial() {
        return Err(Error::TrivialTwist);
    }
    let pc = surface_pc(base)?;
    let ext = build_extension(&pc, phi, &[k])?;
    let e = restricted_pairing(&ext, phi)?;
    let (sub, ok_sub) = e;
    let restriction = class_order(&sub, &TwistMap::trivial(2), &Int::from(ok_sub))?;
    if !restriction.is_zero_class() {
        return Ok(Check::pass());
    }
    let doubled = class_order(base, phi, &Int::from(2 * k))?;
    if doubled.is_zero_class() {
        Ok(Check::pass())
    } else {
        Ok(Check::fail(format!("restriction of [f_{k}] vanishes but 2k[f_1] has order {doubled:?}")))
    }
}

/// The index-2 subgroup `ker φ` of a 2-generator base, as a one-relator
/// presentation, together with the fiber exponent of its relator lifted
/// into `ext`.
fn restricted_pairing(ext: &PcPresentation, phi: &TwistMap) -> Result<(Presentation, i64)> {
    let m = ext.len();
    let q = (0..m - 1).rev().find(|&i| phi.sign(i) == -1).ok_or(Error::TrivialTwist)?;
    let gen = |i: usize| ext.generator(i);
    let lifts: Vec<NormalForm> = (0..m - 1)
        .map(|i| {
            if i == q {
                ext.power(&gen(q), 2)
            } else if phi.sign(i) == 1 {
                gen(i)
            } else {
                ext.multiply(&gen(i), &gen(q))
            }
        })
        .collect();
    let (y0, y1) = (&lifts[0], &lifts[1]);
    let c = ext.conjugate(y0, y1);
    let base_part = |x: &NormalForm| NormalForm(x.0[..m - 1].to_vec());
    for s in [1i64, -1] {
        let y1s = ext.power(y1, s);
        if base_part(&c) == base_part(&y1s) {
            let rest = ext.multiply(&c, &ext.invert(&y1s));
            let names = vec!["y0".to_string(), "y1".to_string()];
            let rel = Word::from_syllables([(0, 1), (1, 1), (0, -1), (1, -s)]);
            let sub = Presentation::new(names, vec![rel])?;
            return Ok((sub, rest.0[m - 1]));
        }
    }
    Err(Error::Unsupported("kernel of φ is not a surface group in the expected form".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towers::{klein_pc, torus_pc};

    fn klein_phi(g: i8, h: i8) -> TwistMap {
        TwistMap::new(&Presentation::klein(), vec![g, h]).unwrap()
    }

    fn torus_phi(a: i8, b: i8) -> TwistMap {
        TwistMap::new(&Presentation::torus(), vec![a, b]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn h2_examples() {
        let k = Presentation::klein();
        let tor = |phi| h2_one_relator(&k, &phi).unwrap();
        let r = tor(klein_phi(-1, 1));
        assert_eq!((r.free_rank, r.torsion.clone()), (1, vec![]));
        let r = tor(klein_phi(1, 1));
        assert_eq!((r.free_rank, r.torsion.clone(), r.generator_image), (0, ints(&[2]), Int::one()));
        let r = h2_one_relator(&Presentation::torus(), &torus_phi(1, 1)).unwrap();
        assert_eq!((r.free_rank, r.describe()), (1, "Z".to_string()));
        for (a, b) in [(1, -1), (-1, -1)] {
            assert_eq!(h2_one_relator(&Presentation::torus(), &torus_phi(a, b)).unwrap().describe(), "Z_2");
        }
    }

    #[test]
    fn h2_rejects_bad_input() {
        let two = Presentation::free_abelian(3);
        assert_eq!(h2_one_relator(&two, &TwistMap::trivial(3)), Err(Error::RelatorCount(3)));
        let bad = TwistMap::from_signs(vec![1, -1]).unwrap();
        assert!(matches!(
            h2_one_relator(&Presentation::torus(), &TwistMap::from_signs(vec![1]).unwrap()),
            Err(Error::DimensionMismatch(_))
        ));
        // the torus relator has even exponent sums, so every sign pattern is valid
        assert!(h2_one_relator(&Presentation::torus(), &bad).is_ok());
    }

    #[test]
    fn class_order_examples() {
        let k = Presentation::klein();
        let t = Presentation::torus();
        assert_eq!(class_order(&k, &klein_phi(1, -1), &Int::from(2)).unwrap(), ClassOrder::Finite(Int::one()));
        assert_eq!(class_order(&k, &klein_phi(1, -1), &Int::from(3)).unwrap(), ClassOrder::Finite(Int::from(2)));
        assert_eq!(class_order(&k, &klein_phi(-1, 1), &Int::zero()).unwrap(), ClassOrder::Finite(Int::one()));
        assert_eq!(class_order(&t, &torus_phi(1, 1), &Int::from(4)).unwrap(), ClassOrder::Infinite);
    }

    #[test]
    fn cocycles_and_pairing() {
        let ext = build_extension(&klein_pc(), &klein_phi(1, 1), &[0]).unwrap();
        let f = cocycle_from_extension(&ext, 3).unwrap();
        assert_eq!(f.len(), 49 * 49);
        let mut vals: Vec<i64> = f.values.values().copied().collect();
        vals.dedup();
        assert_eq!(vals, vec![0]);

        let ext = build_extension(&klein_pc(), &klein_phi(1, -1), &[1]).unwrap();
        let f = cocycle_from_extension(&ext, 3).unwrap();
        assert!(f.cocycle_violation().is_none());
        assert_eq!(relator_pairing(&f, &Presentation::klein().relators()[0]).unwrap(), 1);

        let ext = build_extension(&torus_pc(), &torus_phi(1, 1), &[-3]).unwrap();
        let f = cocycle_from_extension(&ext, 3).unwrap();
        assert_eq!(relator_pairing(&f, &Presentation::torus().relators()[0]).unwrap(), -3);

        let ext = build_extension(&torus_pc(), &torus_phi(1, 1), &[2]).unwrap();
        let f = cocycle_from_extension(&ext, 2).unwrap();
        let (a, b) = (NormalForm(vec![1, 0]), NormalForm(vec![0, 1]));
        assert_eq!(f.get(&a, &b).unwrap() - f.get(&b, &a).unwrap(), 2);
        assert!(matches!(f.get(&NormalForm(vec![3, 0]), &b), Err(Error::WindowExceeded(_))));
    }

    #[test]
    fn restriction_examples() {
        let gamma2 = build_extension(&klein_pc(), &klein_phi(-1, 1), &[2]).unwrap();
        assert!(restriction_nonzero(&gamma2));
        let b2 = build_extension(&klein_pc(), &klein_phi(1, 1), &[1]).unwrap();
        assert!(!restriction_nonzero(&b2));
        let delta3 = build_extension(&torus_pc(), &torus_phi(1, 1), &[-3]).unwrap();
        assert!(restriction_nonzero(&delta3));
        for k in -3..=3 {
            let b4 = build_extension(&klein_pc(), &klein_phi(1, -1), &[k]).unwrap();
            assert!(!restriction_nonzero(&b4), "case 2, k = {k}");
        }
    }

    #[test]
    fn transfer_examples() {
        let k = Presentation::klein();
        assert!(transfer_identity_check(&k, &klein_phi(1, -1), 1).unwrap().passed);
        assert!(transfer_identity_check(&k, &klein_phi(-1, 1), 1).unwrap().passed);
        assert!(transfer_identity_check(&k, &klein_phi(-1, -1), 0).unwrap().passed);
        assert_eq!(transfer_identity_check(&k, &klein_phi(1, 1), 1), Err(Error::TrivialTwist));
    }

    #[test]
    fn restricted_pairings() {
        let ext = build_extension(&klein_pc(), &klein_phi(1, -1), &[1]).unwrap();
        let (sub, e) = restricted_pairing(&ext, &klein_phi(1, -1)).unwrap();
        assert_eq!((sub.relators()[0].syllables().last().copied(), e), (Some((1, 1)), 0));
        for k in [1, 2, -3] {
            let ext = build_extension(&klein_pc(), &klein_phi(-1, 1), &[k]).unwrap();
            let (sub, e) = restricted_pairing(&ext, &klein_phi(-1, 1)).unwrap();
            assert_eq!(sub.relators()[0].syllables().last().copied(), Some((1, -1)));
            assert_eq!(e.abs(), 2 * k.abs());
        }
    }
}
