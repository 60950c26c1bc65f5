//! Circle extensions `1 -> Z -> π_i -> π_{i-1} -> 1`, the Seifert group law,
//! and multi-stage tower specifications.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalogue::{pi2_to_pi4, pi6_to_pi7, shift_map, torus_based_witness, Label};
use crate::check::Check;
use crate::cohomology::{class_order, restriction_nonzero, CocycleTable};
use crate::error::{Error, Result};
use crate::polycyclic::GroupMap;
use crate::polycyclic::{NormalForm, PcPresentation, PcRule};
use crate::words::{Presentation, TwistMap, Word};
use crate::Int;

/// `Z = <t>`
pub fn circle_pc() -> PcPresentation {
    PcPresentation::new(vec!["t".into()], vec![]).expect("static presentation")
}

/// Klein bottle group, `g h g^-1 = h^-1`.
pub fn klein_pc() -> PcPresentation {
    PcPresentation::parse(&["g", "h"], "g h g^-1 = h^-1", &[]).expect("static presentation")
}

/// `Z^2 = <a, b>`
pub fn torus_pc() -> PcPresentation {
    PcPresentation::new(vec!["a".into(), "b".into()], vec![]).expect("static presentation")
}

/// The seven twist cases over the two 2-dimensional bases: cases 1-4 are
/// `(φ(g), φ(h))` over the Klein bottle, cases 5-7 are `(φ(a), φ(b))` over the torus.
pub const CASES: [(u8, bool, [i8; 2]); 7] = [
    (1, true, [1, 1]),
    (2, true, [1, -1]),
    (3, true, [-1, 1]),
    (4, true, [-1, -1]),
    (5, false, [1, 1]),
    (6, false, [1, -1]),
    (7, false, [-1, -1]),
];

/// Base presentation, base pc presentation and twist for a case number.
pub fn case_data(case: u8) -> Result<(Presentation, PcPresentation, TwistMap)> {
    let &(_, klein, signs) = CASES
        .iter()
        .find(|c| c.0 == case)
        .ok_or_else(|| Error::Unsupported(format!("twist case {case} (expected 1-7)")))?;
    let (p, pc) = if klein { (Presentation::klein(), klein_pc()) } else { (Presentation::torus(), torus_pc()) };
    let phi = TwistMap::new(&p, signs.to_vec())?;
    Ok((p, pc, phi))
}

/// Case number of a twist over the Klein bottle (`klein = true`) or torus.
/// `φ(a) = -1, φ(b) = 1` over the torus is case 6 with the generators swapped,
/// which has no case number of its own.
pub fn case_of(klein: bool, phi: &TwistMap) -> Option<u8> {
    let s = phi.signs();
    CASES.iter().find(|c| c.1 == klein && c.2 == s).map(|c| c.0)
}

/// The extension group `_iπ(k)` of twist case `i`: generators `(g, h, n)`
/// over the Klein bottle, `(a, b, m)` over the torus.
pub fn ipi(case: u8, k: i64) -> Result<PcPresentation> {
    let (_, pc, phi) = case_data(case)?;
    let fiber = if case <= 4 { "n" } else { "m" };
    build_extension_named(&pc, &phi, &[k], fiber)
}

/// Appends a fiber generator `n` acting by `x n x^-1 = n^{φ(x)}`; the base
/// rule for the `r`-th pair `i < j` becomes `x_i x_j x_i^-1 = n^{lifts[r]} w_ij`.
pub fn build_extension(base: &PcPresentation, phi: &TwistMap, lifts: &[i64]) -> Result<PcPresentation> {
    let fiber = ["n", "m", "z"]
        .into_iter()
        .map(str::to_string)
        .chain((base.len() + 1..).map(|d| format!("x{d}")))
        .find(|c| !base.names().contains(c))
        .expect("unbounded candidate list");
    build_extension_named(base, phi, lifts, &fiber)
}

pub fn build_extension_named(
    base: &PcPresentation,
    phi: &TwistMap,
    lifts: &[i64],
    fiber: &str,
) -> Result<PcPresentation> {
    let m = base.len();
    if phi.len() != m {
        return Err(Error::DimensionMismatch(format!("{} signs for {m} generators", phi.len())));
    }
    let pairs = m * m.saturating_sub(1) / 2;
    if lifts.len() != pairs {
        return Err(Error::DimensionMismatch(format!("{} lifts for {pairs} relations of the base", lifts.len())));
    }
    let base_pres = base.to_presentation();
    TwistMap::new(&base_pres, phi.signs().to_vec())?;

    let mut names = base.names().to_vec();
    names.push(fiber.to_string());
    let mut rules = Vec::new();
    let mut r = 0;
    for i in 0..m {
        rules.push(PcRule { i, j: m, inverse: false, image: Word::gen_pow(m, phi.sign(i)) });
        for j in i + 1..m {
            let w = base.conjugate_rule(i, j);
            // n^k w = w n^{k φ(w)}
            let fiber_exp = lifts[r] * phi.sign_of(&w.to_word());
            let image = w.to_word().mul(&Word::gen_pow(m, fiber_exp));
            rules.push(PcRule { i, j, inverse: false, image });
            r += 1;
        }
    }
    PcPresentation::new(names, rules)
}

/// `(n, α)(m, β) = (n + φ(α) m + f(α, β), αβ)`
pub fn seifert_multiply(f: &CocycleTable, a: &(i64, NormalForm), b: &(i64, NormalForm)) -> Result<(i64, NormalForm)> {
    let fab = f.get(&a.1, &b.1)?;
    Ok((a.0 + f.phi_of(&a.1) * b.0 + fab, f.base.multiply(&a.1, &b.1)))
}

/// One stage of a tower after the point: a circle extension of the
/// previous stage's group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    /// Action on the new fiber, one sign per generator of the previous stage.
    pub phi: Vec<i8>,
    /// Fiber exponent per pc relation of the previous stage, in `(i, j)` order.
    pub lifts: Vec<i64>,
}

/// A tower `point <- S^1 <- M_2 <- ...`; `stages[0]` builds `S^1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub stages: Vec<Stage>,
}

/// Version tag for [`TowerSpec`] JSON documents.
pub const TOWER_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TowerJson {
    schema_version: u32,
    stages: Vec<Stage>,
}

impl TowerSpec {
    /// Tower of dimension 3 over `K` (`klein = true`) or `T^2`.
    pub fn depth3(klein: bool, phi: [i8; 2], k: i64) -> Self {
        TowerSpec {
            stages: vec![
                Stage { phi: vec![], lifts: vec![] },
                Stage { phi: vec![if klein { -1 } else { 1 }], lifts: vec![] },
                Stage { phi: phi.to_vec(), lifts: vec![k] },
            ],
        }
    }

    pub fn from_case(case: u8, k: i64) -> Result<Self> {
        let &(_, klein, signs) =
            CASES.iter().find(|c| c.0 == case).ok_or_else(|| Error::Unsupported(format!("twist case {case}")))?;
        Ok(Self::depth3(klein, signs, k))
    }

    /// Dimension of the top manifold.
    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// Pc presentations of `π_1(M_1), .., π_1(M_depth)`, validated stage by stage.
    pub fn groups(&self) -> Result<Vec<PcPresentation>> {
        let mut out: Vec<PcPresentation> = Vec::new();
        let mut current = PcPresentation::new(vec![], vec![])?;
        for (d, stage) in self.stages.iter().enumerate() {
            let phi = TwistMap::from_signs(stage.phi.clone())?;
            let fiber = format!("x{}", d + 1);
            current = build_extension_named(&current, &phi, &stage.lifts, &fiber)?;
            out.push(current.clone());
        }
        Ok(rename_low_stages(out))
    }

    /// Parses the line format
    ///
    /// ```text
    /// stage1: point
    /// stage2: S1
    /// stage3: base=K phi={g:-1,h:+1} k=3
    /// ```
    ///
    /// Each `stageN:` line after `S1` is either `T2`, `K`, or
    /// `phi={..} [k=..|lifts=..]` relative to the previous stage's generator
    /// names; `base=K|T2` inserts the 2-dimensional stage first.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = TowerSpec { stages: vec![] };
        let mut last_index = 0usize;
        let mut seen_point = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if line.starts_with("base=") {
                if spec.stages.is_empty() {
                    spec.stages.push(Stage { phi: vec![], lifts: vec![] });
                }
                spec.parse_extension(line).map_err(|e| err(e.to_string()))?;
                last_index = spec.stages.len() + 1;
                continue;
            }
            let (head, body) =
                line.split_once(':').ok_or_else(|| err(format!("expected 'stageN: ...', got {line:?}")))?;
            let index: usize = head
                .trim()
                .strip_prefix("stage")
                .and_then(|n| n.trim().parse().ok())
                .ok_or_else(|| err(format!("bad stage label {head:?}")))?;
            if index <= last_index {
                return Err(err(format!("stage {index} out of order")));
            }
            last_index = index;
            let body = body.trim();
            match body {
                "point" if !seen_point && spec.stages.is_empty() => seen_point = true,
                "S1" | "circle" if spec.stages.is_empty() => spec.stages.push(Stage { phi: vec![], lifts: vec![] }),
                _ if spec.stages.is_empty() => return Err(err(format!("expected 'point' or 'S1', got {body:?}"))),
                _ => spec.parse_extension(body).map_err(|e| err(e.to_string()))?,
            }
        }
        if spec.stages.is_empty() {
            return Err(Error::Parse("tower has no circle stages".into()));
        }
        Ok(spec)
    }

    fn parse_extension(&mut self, body: &str) -> Result<()> {
        let mut phi_text = None;
        let mut lifts: Option<Vec<i64>> = None;
        for tok in body.split_whitespace() {
            let (key, val) = match tok.split_once('=') {
                Some(kv) => kv,
                None => ("base", tok),
            };
            match key {
                "base" => match val {
                    "K" if self.stages.len() == 1 => self.stages.push(Stage { phi: vec![-1], lifts: vec![] }),
                    "T2" if self.stages.len() == 1 => self.stages.push(Stage { phi: vec![1], lifts: vec![] }),
                    _ => return Err(Error::Parse(format!("base {val:?} not valid here"))),
                },
                "phi" => phi_text = Some(val.to_string()),
                "k" => lifts = Some(vec![parse_int(val)?]),
                "lifts" => lifts = Some(val.split(',').map(parse_int).collect::<Result<_>>()?),
                _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
            }
        }
        let Some(phi_text) = phi_text else {
            if lifts.is_some() {
                return Err(Error::Parse("lifts given without phi".into()));
            }
            return Ok(());
        };
        let groups = self.groups()?;
        let prev = groups.last().expect("at least the circle stage");
        let phi = TwistMap::parse_signs(&phi_text, prev.names())?;
        let pairs = prev.len() * (prev.len() - 1) / 2;
        let lifts = lifts.unwrap_or_else(|| vec![0; pairs]);
        self.stages.push(Stage { phi, lifts });
        Ok(())
    }

    /// Canonical line format: one explicit line per stage.
    pub fn format(&self) -> String {
        let mut out = String::from("stage1: point\nstage2: S1\n");
        let groups = self.groups().ok();
        for (d, stage) in self.stages.iter().enumerate().skip(1) {
            let line = match (d, stage.phi.as_slice()) {
                (1, [1]) => "T2".to_string(),
                (1, [-1]) => "K".to_string(),
                _ => {
                    let names: Vec<String> = match &groups {
                        Some(g) => g[d - 1].names().to_vec(),
                        None => (0..stage.phi.len()).map(|i| format!("x{}", i + 1)).collect(),
                    };
                    let phi = TwistMap::from_signs(stage.phi.clone()).map(|p| p.format(&names)).unwrap_or_default();
                    match stage.lifts.as_slice() {
                        [] => format!("phi={phi}"),
                        [k] => format!("phi={phi} k={k}"),
                        ls => {
                            format!("phi={phi} lifts={}", ls.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                        }
                    }
                }
            };
            out.push_str(&format!("stage{}: {line}\n", d + 2));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = TowerJson { schema_version: TOWER_SCHEMA_VERSION, stages: self.stages.clone() };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TowerJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema_version != TOWER_SCHEMA_VERSION {
            return Err(Error::Unsupported(format!("schema_version {}", doc.schema_version)));
        }
        Ok(TowerSpec { stages: doc.stages })
    }

    /// Accepts either format.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::parse(text)
        }
    }
}

impl fmt::Display for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim().trim_start_matches('+').parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

/// Conventional names: `(a, b, m)` above the torus, `(g, h, n)` above the
/// Klein bottle, `x4, x5, ..` beyond.
fn rename_low_stages(groups: Vec<PcPresentation>) -> Vec<PcPresentation> {
    let klein = groups.get(1).map(|g| g.conjugate_rule(0, 1).0 != vec![0, 1]);
    let names: Vec<String> = match klein {
        None => vec!["t".into()],
        Some(true) => ["g", "h", "n"].map(String::from).to_vec(),
        Some(false) => ["a", "b", "m"].map(String::from).to_vec(),
    };
    groups
        .into_iter()
        .map(|g| {
            let new: Vec<String> =
                (0..g.len()).map(|i| names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))).collect();
            g.with_names(new)
        })
        .collect()
}

/// `B3` for even `k`, `B4` for odd `k` (twist cases 2 and 4).
pub fn parity_label(case: u8, k: i64) -> Result<Label> {
    match case {
        2 | 4 => Ok(if k.rem_euclid(2) == 0 { Label::B3 } else { Label::B4 }),
        _ => Err(Error::Unsupported(format!("parity labels apply to cases 2 and 4, not {case}"))),
    }
}

/// Catalogue group isomorphic to `_case π(k)`.
pub fn catalogue_label(case: u8, k: i64) -> Result<Label> {
    let even = k.rem_euclid(2) == 0;
    match case {
        1 | 6 | 7 => Ok(if even { Label::B1 } else { Label::B2 }),
        2 | 4 => parity_label(case, k),
        3 => Ok(if k == 0 { Label::G2 } else { Label::Gamma(k) }),
        5 => Ok(if k == 0 { Label::T3 } else { Label::Delta(-k) }),
        _ => Err(Error::Unsupported(format!("twist case {case}"))),
    }
}

/// Generator maps `label -> _case π(k)` assembled from the catalogue witness,
/// a lift shift, and the case 4/7 substitutions. Not yet verified.
pub fn catalogue_witness(case: u8, k: i64) -> Result<(Label, GroupMap)> {
    let label = catalogue_label(case, k)?;
    let (via_case, tail) = match case {
        4 => (2, Some(pi2_to_pi4())),
        7 => (6, Some(pi6_to_pi7())),
        c => (c, None),
    };
    let (head, k0) = if via_case == 6 {
        (torus_based_witness(label)?, k.rem_euclid(2))
    } else {
        (label.witness()?, label.realization().1)
    };
    let mut map = head;
    if k0 != k {
        let shift = shift_map(via_case, k0, k)?
            .ok_or_else(|| Error::Inconsistent(format!("no lift shift from {k0} to {k} in case {via_case}")))?;
        map = map.then(&shift)?;
    }
    if let Some(t) = tail {
        map = map.then(&t)?;
    }
    Ok((label, map))
}

/// A verified isomorphism from a catalogue group to the tower's group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub catalogue: String,
    /// `catalogue generator -> word in the tower group`
    pub fwd: Vec<String>,
    /// `tower generator -> word in the catalogue group`
    pub bwd: Vec<String>,
    pub check: Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerType {
    Finite,
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub depth: usize,
    /// Catalogue label, `S1`, `T2`, `K`, or `unclassified`.
    pub label: String,
    #[serde(rename = "type")]
    pub tower_type: TowerType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

pub fn classify_tower(spec: &TowerSpec) -> Result<ClassificationVerdict> {
    let groups = spec.groups()?;
    let depth = groups.len();
    let verdict = |label: &str, finite: bool| ClassificationVerdict {
        depth,
        label: label.to_string(),
        tower_type: if finite { TowerType::Finite } else { TowerType::Infinite },
        case: None,
        k: None,
        witness: None,
    };
    match depth {
        0 => Err(Error::Parse("empty tower".into())),
        1 => Ok(verdict("S1", true)),
        2 => Ok(verdict(if spec.stages[1].phi == [1] { "T2" } else { "K" }, true)),
        3 => classify_depth3(spec, &groups[2]),
        _ => {
            let infinite = groups[2..].iter().any(restriction_nonzero);
            Ok(verdict("unclassified", !infinite))
        }
    }
}

fn classify_depth3(spec: &TowerSpec, group: &PcPresentation) -> Result<ClassificationVerdict> {
    let klein = spec.stages[1].phi == [-1];
    let stage = &spec.stages[2];
    let phi = TwistMap::from_signs(stage.phi.clone())?;
    let k = stage.lifts[0];
    let (base, _) = if klein { (Presentation::klein(), klein_pc()) } else { (Presentation::torus(), torus_pc()) };
    let order = class_order(&base, &phi, &Int::from(k))?;
    // φ = (-1, +1) over the torus is case 6 with a and b exchanged, and the
    // exchange reverses the commutator: the group is _6π(-k).
    let (case, case_k, to_tower) = match case_of(klein, &phi) {
        Some(c) => (c, k, GroupMap::identity(3)),
        None => {
            let swap = vec![Word::gen(1), Word::gen(0), Word::gen(2)];
            (6, -k, GroupMap { fwd: swap.clone(), bwd: swap })
        }
    };
    let (label, map) = catalogue_witness(case, case_k)?;
    let map = map.then(&to_tower)?;
    let cat_pc = label.pc()?;
    let check = map.verify(&cat_pc, group)?;
    let (fwd, bwd) = map.format(cat_pc.names(), group.names());
    if !check.passed {
        return Err(Error::Inconsistent(format!("witness for {label} failed: {check}")));
    }
    Ok(ClassificationVerdict {
        depth: 3,
        label: label.to_string(),
        tower_type: if order.is_finite() { TowerType::Finite } else { TowerType::Infinite },
        case: Some(case),
        k: Some(case_k),
        witness: Some(Witness { catalogue: label.to_string(), fwd, bwd, check }),
    })
}
