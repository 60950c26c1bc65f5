//! Holonomy, Betti numbers, center and torus rank, homological injectivity
//! of the central torus, and the Halperin–Carlsson bounds.

use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{rank, smith_normal_form, solve_fixed_lattice, Matrix};
use crate::catalogue::Label;
use crate::cohomology::box_elements;
use crate::error::{Error, Result};
use crate::geometry::{MotionValue, Representation};
use crate::polycyclic::{NormalForm, PcPresentation};
use crate::words::{abelianization, relation_matrix};
use crate::{Int, Rat};

/// Guard on holonomy closure size; signed 3x3 permutations number 48.
pub const HOLONOMY_GUARD: usize = 1024;

/// Box half-width used when enumerating central elements.
pub const CENTER_WINDOW: i64 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Holonomy {
    pub order: usize,
    pub elementary_two: bool,
    /// Linear parts of the generators, row-major.
    pub generators: Vec<Vec<Vec<i64>>>,
    pub orientable: bool,
}

fn to_rows(m: &Matrix<i64>) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Linear parts of the generators. Heisenberg motions act linearly on
/// `(x, Re z, Im z)`; only Gaussian-integer rotations are supported.
pub fn linear_parts(rep: &Representation) -> Result<Vec<Matrix<i64>>> {
    match rep {
        Representation::Flat(gens) => Ok(gens.iter().map(|g| g.linear().clone()).collect()),
        Representation::Heisenberg(gens) => gens
            .iter()
            .map(|g| {
                let u = g.aut.rotation();
                let as_int = |q: &Rat| q.is_integer().then(|| q.to_integer().to_i64()).flatten();
                let (Some(a), Some(b)) = (as_int(&u.re), as_int(&u.im)) else {
                    return Err(Error::Unsupported(format!("rotation {u} is not a Gaussian integer")));
                };
                let c = if g.aut.is_conjugating() { -1 } else { 1 };
                // (x, z) ↦ (c x, u z^c): columns are images of x, 1, i
                Matrix::from_rows(&[vec![c, 0, 0], vec![0, a, -b * c], vec![0, b, a * c]])
            })
            .collect(),
    }
}

/// Closure of the generators' linear parts under multiplication.
pub fn holonomy(rep: &Representation) -> Result<Holonomy> {
    let gens = linear_parts(rep)?;
    let n = gens.first().map_or(0, Matrix::rows);
    let mut elems: Vec<Matrix<i64>> = vec![Matrix::identity(n)];
    let mut frontier = elems.clone();
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x.mul(g)?;
            if !elems.contains(&y) {
                if elems.len() >= HOLONOMY_GUARD {
                    return Err(Error::HolonomyGuard(HOLONOMY_GUARD));
                }
                elems.push(y.clone());
                frontier.push(y);
            }
        }
    }
    let id = Matrix::identity(n);
    let elementary_two = elems.iter().all(|m| m.mul(m).map(|s| s == id).unwrap_or(false));
    let orientable = gens.iter().all(|g| g.determinant().map(|d| d == 1).unwrap_or(false));
    Ok(Holonomy { order: elems.len(), elementary_two, generators: gens.iter().map(to_rows).collect(), orientable })
}

/// `(b_0, b_1, b_2, b_3)` of a closed aspherical 3-manifold from `H_1` and
/// orientability, using `χ = 0`.
pub fn betti_numbers(p: &PcPresentation, rep: &Representation) -> Result<[usize; 4]> {
    if p.len() != 3 {
        return Err(Error::Unsupported(format!("Betti numbers need Hirsch length 3, got {}", p.len())));
    }
    let (b1, _) = abelianization(&p.to_presentation());
    let b3 = usize::from(holonomy(rep)?.orientable);
    Ok([1, b1, b1 + b3 - 1, b3])
}

/// Central normal forms with exponents in `[-window, window]`.
pub fn central_elements(p: &PcPresentation, window: i64) -> Vec<NormalForm> {
    box_elements(p.len(), window)
        .into_iter()
        .filter(|a| !a.is_identity())
        .filter(|a| (0..p.len()).all(|i| p.commutator(a, &p.generator(i)).is_identity()))
        .collect()
}

/// Rank of the center, measured as the dimension spanned by the central
/// elements' translation parts in the model.
pub fn center_rank(p: &PcPresentation, rep: &Representation) -> Result<usize> {
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for a in central_elements(p, CENTER_WINDOW) {
        match rep.eval_nf(&a)? {
            MotionValue::Flat(m) => {
                if *m.linear() != Matrix::identity(m.dim()) {
                    return Err(Error::Inconsistent(format!("central element {a:?} is not a translation")));
                }
                rows.push(m.translation().to_vec());
            }
            MotionValue::Heisenberg(m) => rows.push(vec![m.g.x.clone(), m.g.z.re.clone(), m.g.z.im.clone()]),
        }
    }
    Ok(rank(&rows))
}

/// Rank of a maximal torus acting: the holonomy-fixed lattice for flat
/// models, the center rank for Heisenberg models.
pub fn torus_rank(p: &PcPresentation, rep: &Representation) -> Result<usize> {
    match rep {
        Representation::Flat(_) => {
            let mats: Vec<Matrix<Int>> =
                linear_parts(rep)?.iter().map(|m| Matrix::from_rows(&to_rows(m))).collect::<Result<_>>()?;
            solve_fixed_lattice(&mats)
        }
        Representation::Heisenberg(_) => center_rank(p, rep),
    }
}

/// Image of the central lattice in the free part of `H_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injectivity {
    pub torus_rank: usize,
    pub image_rank: usize,
    /// Index of the image in its saturation; 1 means a direct summand as is.
    #[serde(with = "crate::int_serde")]
    pub saturation_index: Int,
    pub passed: bool,
}

/// The central lattice maps to `H_1 / torsion` with full rank `k`; the
/// image is then saturated to a direct summand and the index reported.
pub fn homological_injectivity_check(p: &PcPresentation, k: usize) -> Result<Injectivity> {
    let n = p.len();
    let snf = smith_normal_form(&relation_matrix(&p.to_presentation()));
    let nonzero = snf.rank();
    let project = |a: &NormalForm| -> Vec<Int> {
        (nonzero..n).map(|j| (0..n).fold(Int::zero(), |acc, i| acc + Int::from(a.0[i]) * &snf.v[(i, j)])).collect()
    };
    let rows: Vec<Vec<Int>> = central_elements(p, CENTER_WINDOW).iter().map(project).collect();
    let (image_rank, saturation_index) = if rows.is_empty() || n == nonzero {
        (0, Int::one())
    } else {
        let m = Matrix::new(rows.len(), n - nonzero, rows.concat())?;
        let s = smith_normal_form(&m);
        let idx = s.d.iter().filter(|d| !d.is_zero()).fold(Int::one(), |acc, d| acc * d.abs());
        (s.rank(), idx)
    };
    Ok(Injectivity { torus_rank: k, image_rank, saturation_index, passed: image_rank == k })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalperinCarlsson {
    pub s: usize,
    pub binomials: Vec<u64>,
    /// `b_j - C(s, j)`
    pub margins: Vec<i64>,
    pub betti_sum: u64,
    pub two_pow_s: u64,
    pub passed: bool,
}

/// `C(s, j) <= b_j` for all `j` and `2^s <= Σ b_j`.
pub fn halperin_carlsson_check(betti: &[usize], s: usize) -> HalperinCarlsson {
    let binomials: Vec<u64> = (0..betti.len()).map(|j| if j <= s { binomial(s as u64, j as u64) } else { 0 }).collect();
    let margins: Vec<i64> = betti.iter().zip(&binomials).map(|(&b, &c)| b as i64 - c as i64).collect();
    let betti_sum: u64 = betti.iter().map(|&b| b as u64).sum();
    let two_pow_s = 1u64 << s;
    let passed = margins.iter().all(|&m| m >= 0) && two_pow_s <= betti_sum && s < betti.len();
    HalperinCarlsson { s, binomials, margins, betti_sum, two_pow_s, passed }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub label: String,
    pub finite_type: bool,
    pub h1_rank: usize,
    #[serde(with = "crate::int_serde::vec")]
    pub h1_torsion: Vec<Int>,
    pub holonomy_order: usize,
    pub holonomy_is_elementary_2: bool,
    pub orientable: bool,
    pub betti: [usize; 4],
    pub center_rank: usize,
    pub torus_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub injectivity: Option<Injectivity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halperin_carlsson: Option<HalperinCarlsson>,
    pub hc_pass: bool,
}

pub fn invariant_report(label: &Label) -> Result<InvariantReport> {
    let p = label.pc()?;
    let rep = label.representation()?;
    let (h1_rank, h1_torsion) = abelianization(&p.to_presentation());
    let hol = holonomy(&rep)?;
    let betti = betti_numbers(&p, &rep)?;
    let center_rank = center_rank(&p, &rep)?;
    let torus_rank = torus_rank(&p, &rep)?;
    let finite_type = label.is_finite_type();
    let (injectivity, hc) = if finite_type {
        (Some(homological_injectivity_check(&p, torus_rank)?), Some(halperin_carlsson_check(&betti, torus_rank)))
    } else {
        (None, None)
    };
    Ok(InvariantReport {
        label: label.to_string(),
        finite_type,
        h1_rank,
        h1_torsion,
        holonomy_order: hol.order,
        holonomy_is_elementary_2: hol.elementary_two,
        orientable: hol.orientable,
        betti,
        center_rank,
        torus_rank,
        injectivity,
        hc_pass: hc.as_ref().is_some_and(|h| h.passed),
        halperin_carlsson: hc,
    })
}
