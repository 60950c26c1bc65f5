//! The flat and nil 3-manifold groups reached by depth-3 towers, with their
//! exact models and verified identifications with the extension groups.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{delta_generators, gamma_generators, FlatAffine, HeisAffine, Representation};
use crate::polycyclic::{GroupMap, PcPresentation};
use crate::towers::{case_data, ipi};
use crate::words::Word;
use crate::Rat;

const CATALOGUE_TEXT: &str = include_str!("../data/catalogue.txt");

/// A catalogue group. `Gamma(k)` and `Delta(k)` are the Heisenberg families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    T3,
    G2,
    B1,
    B2,
    B3,
    B4,
    Gamma(i64),
    Delta(i64),
}

impl Label {
    /// The fixed-label entries.
    pub const FLAT: [Label; 6] = [Label::T3, Label::G2, Label::B1, Label::B2, Label::B3, Label::B4];

    fn family(&self) -> (&'static str, Option<i64>) {
        match *self {
            Label::T3 => ("T3", None),
            Label::G2 => ("G2", None),
            Label::B1 => ("B1", None),
            Label::B2 => ("B2", None),
            Label::B3 => ("B3", None),
            Label::B4 => ("B4", None),
            Label::Gamma(k) => ("Gamma", Some(k)),
            Label::Delta(k) => ("Delta", Some(k)),
        }
    }

    /// Flat labels are of finite type; `Gamma(k)`, `Delta(k)` are of infinite
    /// type for `k != 0` and coincide with `G2`, `T3` at `k = 0`.
    pub fn is_finite_type(&self) -> bool {
        !matches!(self, Label::Gamma(k) | Label::Delta(k) if *k != 0)
    }

    fn entry(&self) -> &'static Entry {
        let (name, _) = self.family();
        catalogue().entries.iter().find(|e| e.name == name).expect("every label has an entry")
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.entry().gens.clone()
    }

    pub fn pc(&self) -> Result<PcPresentation> {
        let e = self.entry();
        let names: Vec<&str> = e.gens.iter().map(String::as_str).collect();
        let vars: Vec<(&str, i64)> = self.family().1.map(|k| ("k", k)).into_iter().collect();
        PcPresentation::parse(&names, &e.rules, &vars)
    }

    /// `(case, k)` such that this group is isomorphic to `_case π(k)`.
    pub fn realization(&self) -> (u8, i64) {
        let e = self.entry();
        let k = match e.k {
            LiftExpr::Const(c) => c,
            LiftExpr::Param(s) => s * self.family().1.expect("parametrized label"),
        };
        (e.case, k)
    }

    /// Generator maps between this group and its extension group.
    pub fn witness(&self) -> Result<GroupMap> {
        let e = self.entry();
        let (case, k) = self.realization();
        let target = ipi(case, k)?;
        GroupMap::parse(&e.to, &e.from, &e.gens, target.names())
    }

    pub fn representation(&self) -> Result<Representation> {
        match (&self.entry().model, *self) {
            (Model::Flat(gens), _) => Ok(Representation::Flat(gens.clone())),
            (Model::Gamma, Label::Gamma(0)) => Label::G2.representation(),
            (Model::Delta, Label::Delta(0)) => Label::T3.representation(),
            (Model::Gamma, Label::Gamma(k)) => Ok(Representation::Heisenberg(gamma_generators(k).to_vec())),
            (Model::Delta, Label::Delta(k)) => {
                Ok(Representation::Heisenberg(delta_generators(k).into_iter().map(HeisAffine::translation).collect()))
            }
            _ => unreachable!("models match their families"),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            (name, None) => f.write_str(name),
            (name, Some(k)) => write!(f, "{name}({k})"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let fixed = match s {
            "T3" | "G1" => Some(Label::T3),
            "G2" => Some(Label::G2),
            "B1" => Some(Label::B1),
            "B2" => Some(Label::B2),
            "B3" => Some(Label::B3),
            "B4" => Some(Label::B4),
            _ => None,
        };
        if let Some(l) = fixed {
            return Ok(l);
        }
        let parse_param = |prefix: &str| -> Option<i64> {
            s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
        };
        if let Some(k) = parse_param("Gamma") {
            return Ok(Label::Gamma(k));
        }
        if let Some(k) = parse_param("Delta") {
            return Ok(Label::Delta(k));
        }
        Err(Error::UnknownLabel(s.to_string()))
    }
}

/// Exact generator models for a label (`Gamma(0)`, `Delta(0)` use the flat
/// models of `G2`, `T3`).
pub fn catalogue_representation(label: &Label) -> Result<Representation> {
    label.representation()
}

#[derive(Clone, Debug, PartialEq)]
enum LiftExpr {
    Const(i64),
    /// `sign * k`
    Param(i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Model {
    Flat(Vec<FlatAffine<Rat>>),
    Gamma,
    Delta,
}

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    name: String,
    param: Option<String>,
    gens: Vec<String>,
    rules: String,
    case: u8,
    k: LiftExpr,
    to: String,
    from: String,
    model: Model,
}

/// Parsed catalogue data file.
#[derive(Clone, Debug, PartialEq)]
pub struct Catalogue {
    entries: Vec<Entry>,
}

pub fn catalogue() -> &'static Catalogue {
    static CAT: OnceLock<Catalogue> = OnceLock::new();
    CAT.get_or_init(|| Catalogue::parse(CATALOGUE_TEXT).expect("bundled catalogue parses"))
}

impl Catalogue {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut cur: Option<EntryBuilder> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Parse(format!("catalogue line {}: {m}", lineno + 1));
            if let Some(head) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if let Some(b) = cur.take() {
                    entries.push(b.finish().map_err(|e| err(e.to_string()))?);
                }
                let mut parts = head.split_whitespace();
                let name = parts.next().ok_or_else(|| err("empty header".into()))?.to_string();
                cur = Some(EntryBuilder { name, param: parts.next().map(String::from), ..Default::default() });
                continue;
            }
            let b = cur.as_mut().ok_or_else(|| err("field before the first [header]".into()))?;
            let (key, val) = line.split_once(':').ok_or_else(|| err(format!("expected key: value, got {line:?}")))?;
            let val = val.trim();
            match key.trim() {
                "gens" => b.gens = val.split_whitespace().map(String::from).collect(),
                "rules" => b.rules = val.to_string(),
                "realizes" => b.realizes = Some(val.to_string()),
                "to" => b.to = Some(val.to_string()),
                "from" => b.from = Some(val.to_string()),
                "model" => b.model = Some(val.to_string()),
                k if k.starts_with("flat ") => {
                    let gen = k["flat ".len()..].trim().to_string();
                    let motion = parse_flat(val).map_err(|e| err(e.to_string()))?;
                    b.flat.push((gen, motion));
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        if let Some(b) = cur {
            entries.push(b.finish()?);
        }
        Ok(Catalogue { entries })
    }

    /// Canonical text form (comments dropped).
    pub fn format(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match &e.param {
                Some(p) => out.push_str(&format!("[{} {p}]\n", e.name)),
                None => out.push_str(&format!("[{}]\n", e.name)),
            }
            out.push_str(&format!("gens: {}\n", e.gens.join(" ")));
            out.push_str(format!("rules: {}", e.rules).trim_end());
            out.push('\n');
            let k = match (&e.k, &e.param) {
                (LiftExpr::Const(c), _) => c.to_string(),
                (LiftExpr::Param(1), Some(p)) => p.clone(),
                (LiftExpr::Param(_), Some(p)) => format!("-{p}"),
                (LiftExpr::Param(_), None) => unreachable!("parametrized entries have a parameter"),
            };
            out.push_str(&format!("realizes: {} {k}\n", e.case));
            out.push_str(&format!("to: {}\nfrom: {}\n", e.to, e.from));
            match &e.model {
                Model::Flat(gens) => {
                    for (name, m) in e.gens.iter().zip(gens) {
                        out.push_str(&format!("flat {name}: {}\n", format_flat(m)));
                    }
                }
                Model::Gamma => out.push_str("model: gamma\n"),
                Model::Delta => out.push_str("model: delta\n"),
            }
            out.push('\n');
        }
        out
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }
}

#[derive(Default)]
struct EntryBuilder {
    name: String,
    param: Option<String>,
    gens: Vec<String>,
    rules: String,
    realizes: Option<String>,
    to: Option<String>,
    from: Option<String>,
    model: Option<String>,
    flat: Vec<(String, FlatAffine<Rat>)>,
}

impl EntryBuilder {
    fn finish(self) -> Result<Entry> {
        let missing = |f: &str| Error::Parse(format!("entry {} lacks {f}", self.name));
        let realizes = self.realizes.clone().ok_or_else(|| missing("realizes"))?;
        let (case, k) = realizes.split_once(' ').ok_or_else(|| missing("a lift in realizes"))?;
        let case: u8 = case.parse().map_err(|_| missing("a numeric case"))?;
        let k = k.trim();
        let k = match (&self.param, k.parse::<i64>()) {
            (_, Ok(c)) => LiftExpr::Const(c),
            (Some(p), Err(_)) if k == p => LiftExpr::Param(1),
            (Some(p), Err(_)) if k.strip_prefix('-') == Some(p) => LiftExpr::Param(-1),
            _ => return Err(Error::Parse(format!("bad lift {k:?} in entry {}", self.name))),
        };
        let model = match self.model.as_deref() {
            Some("gamma") => Model::Gamma,
            Some("delta") => Model::Delta,
            Some(other) => return Err(Error::Parse(format!("unknown model {other:?}"))),
            None => {
                let mut gens = Vec::new();
                for g in &self.gens {
                    let m = self
                        .flat
                        .iter()
                        .find(|(n, _)| n == g)
                        .ok_or_else(|| missing(&format!("a flat model for {g}")))?;
                    gens.push(m.1.clone());
                }
                Model::Flat(gens)
            }
        };
        Ok(Entry {
            to: self.to.clone().ok_or_else(|| missing("to"))?,
            from: self.from.clone().ok_or_else(|| missing("from"))?,
            name: self.name,
            param: self.param,
            gens: self.gens,
            rules: self.rules,
            case,
            k,
            model,
        })
    }
}

/// `(1/2, 0, -1) diag(1, -1, 1)`
fn parse_flat(text: &str) -> Result<FlatAffine<Rat>> {
    let bad = || Error::Parse(format!("expected '(b1, .., bn) diag(s1, .., sn)', got {text:?}"));
    let text = text.trim();
    let close = text.find(')').ok_or_else(bad)?;
    let trans = text.strip_prefix('(').ok_or_else(bad)?[..close - 1].to_string();
    let rest = text[close + 1..].trim();
    let diag = rest.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let b = trans.split(',').map(|s| Rat::from_str(s.trim()).map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
    let signs = diag.split(',').map(|s| s.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
    FlatAffine::diagonal(&signs, b)
}

fn format_flat(m: &FlatAffine<Rat>) -> String {
    let b: Vec<String> = m.translation().iter().map(ToString::to_string).collect();
    let d: Vec<String> = (0..m.dim()).map(|i| m.linear()[(i, i)].to_string()).collect();
    format!("({}) diag({})", b.join(", "), d.join(", "))
}

/// `_case π(from) -> _case π(to)` by `x ↦ n^{c_x} x` on base generators,
/// with `c` solving the linear condition that moves the relator lift from
/// `to` back to `from`. `None` when `from` and `to` lie in different classes.
pub fn shift_map(case: u8, from: i64, to: i64) -> Result<Option<GroupMap>> {
    let (base, _, _) = case_data(case)?;
    let target = ipi(case, to)?;
    let relator = &base.relators()[0];
    let fiber = 2usize;
    let lift_exponent = |c: [i64; 2]| -> Result<i64> {
        let images: Vec<Word> = (0..2)
            .map(|i| Word::gen_pow(fiber, c[i]).mul(&Word::gen(i)))
            .chain(std::iter::once(Word::gen(fiber)))
            .collect();
        let v = target.collect(&relator.substitute(&images)?)?;
        if v.0[..fiber].iter().any(|&e| e != 0) {
            return Err(Error::Inconsistent("relator lift left the fiber".into()));
        }
        Ok(v.0[fiber])
    };
    let e0 = lift_exponent([0, 0])?;
    let f = [lift_exponent([1, 0])? - e0, lift_exponent([0, 1])? - e0];
    let want = from - e0;
    let eg = f[0].extended_gcd(&f[1]);
    let c = if eg.gcd == 0 {
        if want != 0 {
            return Ok(None);
        }
        [0, 0]
    } else {
        if want % eg.gcd != 0 {
            return Ok(None);
        }
        let q = want / eg.gcd;
        [eg.x * q, eg.y * q]
    };
    let shifted = |sign: i64| -> Vec<Word> {
        (0..2)
            .map(|i| Word::gen_pow(fiber, sign * c[i]).mul(&Word::gen(i)))
            .chain(std::iter::once(Word::gen(fiber)))
            .collect()
    };
    Ok(Some(GroupMap { fwd: shifted(1), bwd: shifted(-1) }))
}

/// `_2π(k) -> _4π(k)`: `g ↦ g h`.
pub fn pi2_to_pi4() -> GroupMap {
    let names = ["g", "h", "n"].map(String::from);
    GroupMap::parse("g h, h, n", "g h^-1, h, n", &names, &names).expect("static map")
}

/// `_6π(k) -> _7π(k)`: `a ↦ a b`.
pub fn pi6_to_pi7() -> GroupMap {
    let names = ["a", "b", "m"].map(String::from);
    GroupMap::parse("a b, b, m", "a b^-1, b, m", &names, &names).expect("static map")
}

/// `B1 -> _6π(0)` and `B2 -> _6π(1)`.
pub fn torus_based_witness(label: Label) -> Result<GroupMap> {
    let target = ["a", "b", "m"].map(String::from);
    match label {
        Label::B1 => GroupMap::parse("b, m, a", "t3, eps, t2", &label.generator_names(), &target),
        Label::B2 => GroupMap::parse("b, a, a^2 m^-1", "t3, eps, t3^2 u^-1", &label.generator_names(), &target),
        other => Err(Error::Unsupported(format!("{other} is not realized over the torus with a twist"))),
    }
}
