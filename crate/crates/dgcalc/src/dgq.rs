//! The `.dgq` and `.ainf` file formats.
//!
//! A `.dgq` file is a JSON document describing a DG quiver: vertices, graded
//! arrows, arrow differentials and relations as rational path combinations,
//! plus optional Picard-lattice data and an optional formal parameter `t`
//! appearing polynomially in coefficients. Files round-trip byte-identically
//! through load→save: the writer emits a fixed key order, sorted maps,
//! two-space indentation, LF line endings, and a trailing newline.
//!
//! Path lists are written in composition order: the rightmost arrow acts
//! first, so `["del1", "eps2"]` is the composite δ₁∘ε₂.
//!
//! A `.ainf` file stores a minimal A∞ structure: graded hom dimensions and
//! the operation tables `m_n` as rational matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ainfty::{AiError, AInfinityStructure};
use crate::cochain::GradedVS;
use crate::dgcore::{DGQuiver, DgError, PathSum};
use crate::surfaces::{DivisorClass, PicardLattice, SurfError};
use crate::{QMatrix, Rat};

#[derive(Debug, Error)]
pub enum DgqError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("unsupported parameter list {0:?}; only [\"t\"] is recognized")]
    BadParameters(String),
    #[error("coefficient {0:?} uses the parameter t, but the file declares no parameters")]
    UndeclaredParameter(String),
    #[error("file declares parameters; specialize it (deform --t) first")]
    HasParameters,
    #[error("lattice: {0}")]
    LatticeShape(String),
    #[error(transparent)]
    Surf(#[from] SurfError),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Ai(#[from] AiError),
}

// ---------------------------------------------------------------------------
// polynomial coefficients

/// A polynomial in the formal parameter `t` with rational coefficients,
/// stored by ascending power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<Rat>);

fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str) -> Result<Rat, DgqError> {
    s.parse::<Rat>()
        .map_err(|_| DgqError::BadCoefficient(s.to_string()))
}

impl Poly {
    pub fn constant(r: Rat) -> Self {
        Poly(vec![r]).normalized()
    }

    pub fn t() -> Self {
        Poly(vec![Rat::zero(), Rat::one()])
    }

    fn normalized(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Poly(self.0.iter().map(|c| c * r).collect()).normalized()
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut out = Rat::zero();
        for c in self.0.iter().rev() {
            out = out * t + c;
        }
        out
    }

    /// Canonical text form: terms by ascending power, e.g. `-1/2`, `t`,
    /// `-t`, `3*t`, `1 + 2*t^2`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (p, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mut term = String::new();
            if p == 0 {
                term.push_str(&rat_to_string(&mag));
            } else {
                if !mag.is_one() {
                    let _ = write!(term, "{}*", rat_to_string(&mag));
                }
                term.push('t');
                if p > 1 {
                    let _ = write!(term, "^{p}");
                }
            }
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
                out.push_str(&term);
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        out
    }

    pub fn parse(s: &str) -> Result<Self, DgqError> {
        let bad = || DgqError::BadCoefficient(s.to_string());
        let text = s.trim();
        if text.is_empty() {
            return Err(bad());
        }
        // split into signed terms at top level
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut neg = false;
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let ch = bytes[i] as char;
            if (ch == '+' || ch == '-') && i > start {
                // sign separators are surrounded by spaces in canonical form,
                // but accept tight notation too; a leading '-' binds to the
                // first term
                terms.push((neg, text[start..i].trim()));
                neg = ch == '-';
                start = i + 1;
            } else if ch == '-' && i == start {
                neg = true;
                start = i + 1;
            }
            i += 1;
        }
        terms.push((neg, text[start..].trim()));
        let mut out = Poly(Vec::new());
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(bad());
            }
            let (coeff_text, power) = match term.find('t') {
                None => (term, 0usize),
                Some(pos) => {
                    let head = term[..pos].trim().trim_end_matches('*').trim();
                    let tail = &term[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|p| p.parse::<usize>().ok())
                            .ok_or_else(bad)?
                    };
                    (if head.is_empty() { "1" } else { head }, power)
                }
            };
            let mut c = parse_rat(coeff_text)?;
            if neg {
                c = -c;
            }
            if out.0.len() <= power {
                out.0.resize(power + 1, Rat::zero());
            }
            out.0[power] += c;
        }
        Ok(out.normalized())
    }
}

// ---------------------------------------------------------------------------
// JSON document shape

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub name: String,
    pub src: String,
    pub tgt: String,
    pub degree: i64,
}

/// One summand of a path combination: `coeff` is a rational (or polynomial
/// in `t`) in text form, `path` lists arrow names with the rightmost acting
/// first.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub generators: Vec<String>,
    pub intersection: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
    /// divisor class of each vertex, aligned with `vertices`
    pub divisors: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DgqFile {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub differential: BTreeMap<String, Vec<TermJson>>,
    pub relations: Vec<Vec<TermJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lattice: Option<LatticeJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parameters: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub comment: Option<String>,
}

fn json_err(e: &serde_json::Error) -> DgqError {
    DgqError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    }
}

impl DgqFile {
    pub fn parse(text: &str) -> Result<Self, DgqError> {
        let f: DgqFile = serde_json::from_str(text).map_err(|e| json_err(&e))?;
        f.validate()?;
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self, DgqError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical byte representation: fixed key order, two-space indent,
    /// LF endings, trailing newline.
    pub fn canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<(), DgqError> {
        Ok(std::fs::write(path, self.canonical())?)
    }

    pub fn has_parameters(&self) -> bool {
        self.parameters.as_ref().is_some_and(|p| !p.is_empty())
    }

    fn validate(&self) -> Result<(), DgqError> {
        for (i, n) in self.vertices.iter().enumerate() {
            if self.vertices[..i].contains(n) {
                return Err(DgqError::DuplicateName(n.clone()));
            }
        }
        if let Some(p) = &self.parameters {
            if p != &["t".to_string()] {
                return Err(DgqError::BadParameters(format!("{p:?}")));
            }
        }
        let mut arrow_names = Vec::new();
        for a in &self.arrows {
            if arrow_names.contains(&&a.name) {
                return Err(DgqError::DuplicateName(a.name.clone()));
            }
            arrow_names.push(&a.name);
            for v in [&a.src, &a.tgt] {
                if !self.vertices.contains(v) {
                    return Err(DgqError::UnknownVertex(v.clone()));
                }
            }
        }
        let check_terms = |terms: &[TermJson]| -> Result<(), DgqError> {
            for t in terms {
                let p = Poly::parse(&t.coeff)?;
                if !p.is_constant() && !self.has_parameters() {
                    return Err(DgqError::UndeclaredParameter(t.coeff.clone()));
                }
                for a in &t.path {
                    if !arrow_names.iter().any(|n| *n == a) {
                        return Err(DgqError::UnknownArrow(a.clone()));
                    }
                }
            }
            Ok(())
        };
        for (a, terms) in &self.differential {
            if !arrow_names.iter().any(|n| *n == a) {
                return Err(DgqError::UnknownArrow(a.clone()));
            }
            check_terms(terms)?;
        }
        for r in &self.relations {
            check_terms(r)?;
        }
        if let Some(l) = &self.lattice {
            let rank = l.generators.len();
            if l.intersection.len() != rank || l.intersection.iter().any(|r| r.len() != rank) {
                return Err(DgqError::LatticeShape(format!(
                    "intersection matrix is not {rank}×{rank}"
                )));
            }
            if l.canonical.len() != rank {
                return Err(DgqError::LatticeShape(format!(
                    "canonical class has {} coordinates, expected {rank}",
                    l.canonical.len()
                )));
            }
            if l.divisors.len() != self.vertices.len()
                || l.divisors.iter().any(|d| d.len() != rank)
            {
                return Err(DgqError::LatticeShape(
                    "divisors must give one rank-length class per vertex".to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Substitutes `t`, drops vanishing terms and the parameter
    /// declaration. Specializing a parameter-free file is the identity.
    pub fn specialize(&self, t: &Rat) -> Result<DgqFile, DgqError> {
        let spec_terms = |terms: &[TermJson]| -> Result<Vec<TermJson>, DgqError> {
            let mut out = Vec::new();
            for term in terms {
                let v = Poly::parse(&term.coeff)?.eval(t);
                if !v.is_zero() {
                    out.push(TermJson {
                        coeff: rat_to_string(&v),
                        path: term.path.clone(),
                    });
                }
            }
            Ok(out)
        };
        let mut differential = BTreeMap::new();
        for (a, terms) in &self.differential {
            let terms = spec_terms(terms)?;
            if !terms.is_empty() {
                differential.insert(a.clone(), terms);
            }
        }
        let mut relations = Vec::new();
        for r in &self.relations {
            let terms = spec_terms(r)?;
            if !terms.is_empty() {
                relations.push(terms);
            }
        }
        Ok(DgqFile {
            vertices: self.vertices.clone(),
            arrows: self.arrows.clone(),
            differential,
            relations,
            lattice: self.lattice.clone(),
            parameters: None,
            comment: self.comment.clone(),
        })
    }

    /// Realizes the file as a [`DGQuiver`]. The order flag is inferred:
    /// a quiver is marked ordered when every arrow points strictly forward
    /// in the vertex list.
    pub fn to_quiver(&self) -> Result<DGQuiver, DgqError> {
        if self.has_parameters() {
            return Err(DgqError::HasParameters);
        }
        let vidx = |n: &str| {
            self.vertices
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| DgqError::UnknownVertex(n.to_string()))
        };
        let ordered = self
            .arrows
            .iter()
            .all(|a| vidx(&a.src).unwrap_or(0) < vidx(&a.tgt).unwrap_or(0));
        let mut q = DGQuiver::new(self.vertices.clone(), ordered);
        for a in &self.arrows {
            q.add_arrow(&a.name, vidx(&a.src)?, vidx(&a.tgt)?, a.degree);
        }
        let aidx: BTreeMap<&str, usize> = self
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.name.as_str(), i))
            .collect();
        let to_sum = |terms: &[TermJson]| -> Result<PathSum, DgqError> {
            let mut out = PathSum::default();
            for t in terms {
                let p = Poly::parse(&t.coeff)?;
                let c = p
                    .0
                    .first()
                    .cloned()
                    .ok_or_else(|| DgqError::BadCoefficient(t.coeff.clone()))?;
                // written order → application order
                let mut path: Vec<usize> = t
                    .path
                    .iter()
                    .map(|n| {
                        aidx.get(n.as_str())
                            .copied()
                            .ok_or_else(|| DgqError::UnknownArrow(n.clone()))
                    })
                    .collect::<Result<_, _>>()?;
                path.reverse();
                out.terms.push((c, path));
            }
            Ok(out)
        };
        for (a, terms) in &self.differential {
            let s = to_sum(terms)?;
            q.set_differential(a, s)?;
        }
        for r in &self.relations {
            q.add_relation(to_sum(r)?);
        }
        Ok(q)
    }

    pub fn from_quiver(
        q: &DGQuiver,
        lattice: Option<LatticeJson>,
        comment: Option<String>,
    ) -> DgqFile {
        let to_terms = |s: &PathSum| -> Vec<TermJson> {
            s.terms
                .iter()
                .map(|(c, path)| TermJson {
                    coeff: rat_to_string(c),
                    path: path.iter().rev().map(|&a| q.arrows[a].name.clone()).collect(),
                })
                .collect()
        };
        DgqFile {
            vertices: q.vertices.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    name: a.name.clone(),
                    src: q.vertices[a.src].clone(),
                    tgt: q.vertices[a.tgt].clone(),
                    degree: a.degree,
                })
                .collect(),
            differential: q
                .differential
                .iter()
                .map(|(&a, s)| (q.arrows[a].name.clone(), to_terms(s)))
                .collect(),
            relations: q.relations.iter().map(to_terms).collect(),
            lattice,
            parameters: None,
            comment,
        }
    }

    /// Lattice data as surface-module types, if present.
    pub fn picard(&self) -> Result<Option<(PicardLattice, Vec<DivisorClass>)>, DgqError> {
        let Some(l) = &self.lattice else {
            return Ok(None);
        };
        let lat = PicardLattice::new(
            l.generators.clone(),
            l.intersection.clone(),
            DivisorClass(l.canonical.clone()),
        )?;
        let divs = l.divisors.iter().map(|d| DivisorClass(d.clone())).collect();
        Ok(Some((lat, divs)))
    }
}

// ---------------------------------------------------------------------------
// .ainf files

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HomJson {
    pub src: String,
    pub tgt: String,
    /// `[degree, dimension]` pairs, ascending
    pub dims: Vec<(i64, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OpJson {
    /// object chain A₀ → … → A_n of `m_n`
    pub chain: Vec<String>,
    /// input degrees of α₁ … α_n
    pub degrees: Vec<i64>,
    /// row-major rational entries; columns run over the input basis tuples
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AinfFile {
    pub objects: Vec<String>,
    pub ordered: bool,
    pub hom: Vec<HomJson>,
    pub unit: Vec<Option<usize>>,
    pub ops: Vec<OpJson>,
}

impl AinfFile {
    pub fn parse(text: &str) -> Result<Self, DgqError> {
        let f: AinfFile = serde_json::from_str(text).map_err(|e| json_err(&e))?;
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self, DgqError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_structure(a: &AInfinityStructure) -> AinfFile {
        let n = a.objects.len();
        let mut hom = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let dims: Vec<(i64, usize)> = a.hom[i][j]
                    .degrees()
                    .map(|d| (d, a.hom[i][j].dim(d)))
                    .collect();
                if !dims.is_empty() {
                    hom.push(HomJson {
                        src: a.objects[i].clone(),
                        tgt: a.objects[j].clone(),
                        dims,
                    });
                }
            }
        }
        let ops = a
            .ops
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|((chain, degs), m)| OpJson {
                chain: chain.iter().map(|&i| a.objects[i].clone()).collect(),
                degrees: degs.clone(),
                matrix: (0..m.rows())
                    .map(|r| (0..m.cols()).map(|c| rat_to_string(m.get(r, c))).collect())
                    .collect(),
            })
            .collect();
        AinfFile {
            objects: a.objects.clone(),
            ordered: a.ordered,
            hom,
            unit: a.unit.clone(),
            ops,
        }
    }

    pub fn to_structure(&self) -> Result<AInfinityStructure, DgqError> {
        let n = self.objects.len();
        let oidx = |name: &str| {
            self.objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| DgqError::UnknownVertex(name.to_string()))
        };
        let mut hom: Vec<Vec<GradedVS>> =
            (0..n).map(|_| (0..n).map(|_| GradedVS::new()).collect()).collect();
        for h in &self.hom {
            hom[oidx(&h.src)?][oidx(&h.tgt)?] = GradedVS::from_dims(&h.dims);
        }
        let mut a = AInfinityStructure::new(self.objects.clone(), hom, self.ordered);
        a.unit = self.unit.clone();
        for op in &self.ops {
            let chain: Vec<usize> = op
                .chain
                .iter()
                .map(|o| oidx(o))
                .collect::<Result<_, _>>()?;
            let rows: Result<Vec<Vec<Rat>>, DgqError> = op
                .matrix
                .iter()
                .map(|r| r.iter().map(|e| parse_rat(e)).collect())
                .collect();
            let m = QMatrix::from_rows(rows?);
            a.set_op(chain, op.degrees.clone(), m)?;
        }
        Ok(a)
    }
}

// ---------------------------------------------------------------------------
// builtin fixtures

fn x_lattice_json() -> LatticeJson {
    LatticeJson {
        generators: vec!["E1".into(), "E2".into(), "H".into()],
        intersection: vec![vec![-2, 1, 0], vec![1, -1, 0], vec![0, 0, 1]],
        canonical: vec![1, 2, -3],
        divisors: vec![
            vec![0, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![0, 0, 1],
            vec![0, 0, 2],
        ],
    }
}

fn y_lattice_json() -> LatticeJson {
    LatticeJson {
        generators: vec!["F1".into(), "F2".into(), "H".into()],
        intersection: vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]],
        canonical: vec![1, 1, -3],
        divisors: vec![
            vec![0, 0, 0],
            vec![0, 1, 0],
            vec![1, 0, 0],
            vec![0, 0, 1],
            vec![0, 0, 2],
        ],
    }
}

/// Δ(t): the X quiver structure with ∂β = t·β̄ and the t-deformed relation.
pub fn delta_family_file() -> DgqFile {
    let base = crate::presets::delta_quiver(crate::rat(0));
    let mut f = DgqFile::from_quiver(&base, Some(x_lattice_json()), None);
    f.parameters = Some(vec!["t".to_string()]);
    f.differential.insert(
        "beta".to_string(),
        vec![TermJson {
            coeff: Poly::t().to_text(),
            path: vec!["betabar".to_string()],
        }],
    );
    // δ₁ε₂ + δ₃γ₂β = δ₂ε₁ + t·δ₃ε₂
    let deformed = f
        .relations
        .iter_mut()
        .find(|r| r.iter().any(|t| t.path == ["del1", "eps2"]))
        .expect("deformable relation present");
    deformed.push(TermJson {
        coeff: Poly::t().scale(&crate::rat(-1)).to_text(),
        path: vec!["del3".to_string(), "eps2".to_string()],
    });
    f
}

/// All shipped fixtures as `(file name, contents)`.
pub fn builtin_fixtures() -> Vec<(&'static str, DgqFile)> {
    let delta = delta_family_file();
    let x_surface = delta.specialize(&crate::rat(0)).unwrap();
    let x_first = DgqFile::from_quiver(
        &crate::presets::x_first_quiver(),
        Some(x_lattice_json()),
        None,
    );
    let v = DgqFile::from_quiver(
        &crate::presets::v_quiver(),
        None,
        Some(
            "the printed commutator relation δ₁ι₂ − ι₂δ₁ is dimensionally \
             inconsistent; this fixture encodes δ₁ι₂ − δ₂ι₁"
                .to_string(),
        ),
    );
    let y = DgqFile::from_quiver(&crate::presets::y_quiver(), Some(y_lattice_json()), None);
    vec![
        ("delta_family.dgq", delta),
        ("x_surface.dgq", x_surface),
        ("x_first_quiver.dgq", x_first),
        ("v_collection.dgq", v),
        ("y_surface.dgq", y),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{delta_quiver, v_quiver, x_first_quiver, x_quiver, y_quiver};
    use crate::surfaces::{chi, euler_pairing};
    use crate::dgcore::path_algebra;
    use crate::{rat, ratio};

    #[test]
    fn poly_text_round_trip() {
        let cases = [
            (Poly(vec![]), "0"),
            (Poly::constant(rat(3)), "3"),
            (Poly::constant(ratio(-1, 2)), "-1/2"),
            (Poly::t(), "t"),
            (Poly::t().scale(&rat(-1)), "-t"),
            (Poly::t().scale(&ratio(1, 2)), "1/2*t"),
            (Poly(vec![rat(1), rat(0), rat(2)]), "1 + 2*t^2"),
            (Poly(vec![rat(0), rat(-1), rat(1)]), "-t + t^2"),
        ];
        for (p, text) in cases {
            assert_eq!(p.to_text(), text);
            assert_eq!(Poly::parse(text).unwrap(), p);
        }
        assert_eq!(Poly::parse("2t").unwrap(), Poly(vec![rat(0), rat(2)]));
        assert!(Poly::parse("").is_err());
        assert!(Poly::parse("t^x").is_err());
        assert!(Poly::parse("1//2").is_err());
        assert_eq!(
            Poly(vec![rat(1), rat(2)]).eval(&ratio(1, 2)),
            rat(2)
        );
    }

    #[test]
    fn quiver_round_trip_through_files() {
        for q in [x_quiver(), x_first_quiver(), v_quiver(), y_quiver()] {
            let f = DgqFile::from_quiver(&q, None, None);
            let text = f.canonical();
            let back = DgqFile::parse(&text).unwrap();
            assert_eq!(back.canonical(), text);
            assert_eq!(back.to_quiver().unwrap(), q);
        }
    }

    #[test]
    fn order_flag_is_inferred_from_arrow_directions() {
        assert!(DgqFile::from_quiver(&x_quiver(), None, None)
            .to_quiver()
            .unwrap()
            .ordered);
        assert!(!DgqFile::from_quiver(&v_quiver(), None, None)
            .to_quiver()
            .unwrap()
            .ordered);
    }

    #[test]
    fn delta_family_specializes_to_the_presets() {
        let fam = delta_family_file();
        for t in [rat(0), rat(1), rat(2), rat(-1), ratio(1, 2)] {
            let spec = fam.specialize(&t).unwrap();
            assert!(!spec.has_parameters());
            assert_eq!(spec.to_quiver().unwrap(), delta_quiver(t));
        }
        // specializing twice is idempotent, and a family refuses to realize
        let spec = fam.specialize(&rat(5)).unwrap();
        assert_eq!(spec.specialize(&rat(7)).unwrap(), spec);
        assert!(matches!(fam.to_quiver(), Err(DgqError::HasParameters)));
    }

    #[test]
    fn malformed_inputs_are_rejected_with_positions() {
        match DgqFile::parse("{\n  \"vertices\": [,]\n}") {
            Err(DgqError::Json { line: 2, column, .. }) => assert!(column > 0),
            other => panic!("expected a positioned parse error, got {other:?}"),
        }
        let mut f = DgqFile::from_quiver(&x_quiver(), None, None);
        f.relations.push(vec![TermJson {
            coeff: "1".into(),
            path: vec!["nope".into()],
        }]);
        assert!(matches!(
            DgqFile::parse(&f.canonical()),
            Err(DgqError::UnknownArrow(a)) if a == "nope"
        ));
        let mut g = DgqFile::from_quiver(&x_quiver(), None, None);
        g.differential.insert(
            "beta".into(),
            vec![TermJson {
                coeff: "t".into(),
                path: vec!["betabar".into()],
            }],
        );
        assert!(matches!(
            DgqFile::parse(&g.canonical()),
            Err(DgqError::UndeclaredParameter(_))
        ));
        let mut h = DgqFile::from_quiver(&x_quiver(), Some(x_lattice_json()), None);
        h.lattice.as_mut().unwrap().divisors.pop();
        assert!(matches!(
            DgqFile::parse(&h.canonical()),
            Err(DgqError::LatticeShape(_))
        ));
    }

    #[test]
    fn fixture_lattices_certify_their_hom_tables() {
        for (name, f) in builtin_fixtures() {
            let Some((lat, divs)) = f.picard().unwrap() else {
                continue;
            };
            let q = if f.has_parameters() {
                f.specialize(&rat(0)).unwrap().to_quiver().unwrap()
            } else {
                f.to_quiver().unwrap()
            };
            let cat = path_algebra(&q, 6).unwrap();
            for i in 0..divs.len() {
                for j in 0..divs.len() {
                    assert_eq!(
                        chi(&lat, &(&divs[j] - &divs[i])).unwrap(),
                        euler_pairing(&cat, i, j),
                        "{name}: pair ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn fixtures_on_disk_are_canonical() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        let bless = std::env::var_os("DGCALC_BLESS").is_some();
        for (name, f) in builtin_fixtures() {
            let path = dir.join(name);
            if bless {
                f.save(&path).unwrap();
            }
            let disk = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("{name}: {e}; regenerate with DGCALC_BLESS=1"));
            assert_eq!(disk, f.canonical(), "{name} is out of date");
            // the loader accepts every fixture
            let loaded = DgqFile::load(&path).unwrap();
            assert_eq!(loaded, f);
        }
    }

    #[test]
    fn ainf_round_trip_preserves_massey_data() {
        use crate::transfer::{massey3, minimal_model, MinimalModel};
        let cat = path_algebra(&x_quiver(), 6).unwrap();
        let mm = minimal_model(&cat, 3).unwrap();
        let f = AinfFile::from_structure(&mm.structure);
        let text = f.canonical();
        let back = AinfFile::parse(&text).unwrap();
        assert_eq!(back.canonical(), text);
        let a = back.to_structure().unwrap();
        assert_eq!(a.ops, mm.structure.ops);
        assert!(a.check_stasheff(3).is_empty());
        // the reloaded structure computes the same triple products
        let mm2 = MinimalModel {
            base: &cat,
            structure: a,
            splittings: mm.splittings.clone(),
        };
        let chain = [0usize, 1, 2, 3];
        let degs = [0i64, 1, 0];
        let one = vec![rat(1)];
        for g in [vec![rat(1), rat(0)], vec![rat(0), rat(1)]] {
            let c1 = massey3(&mm, &chain, &degs, &g, &one, &one).unwrap();
            let c2 = massey3(&mm2, &chain, &degs, &g, &one, &one).unwrap();
            assert_eq!(c1.value, c2.value);
            assert_eq!(c1.indeterminacy, c2.indeterminacy);
        }
    }
}
