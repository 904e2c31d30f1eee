//! One-sided twisted complexes over a DG category: twisted hom complexes,
//! shift, cone, convolution, tensor with a complex of vector spaces.
//!
//! Morphisms between shifted objects are stored as their underlying
//! morphisms: a degree-l element of hom(C[r], D[s]) is kept as the underlying
//! element of hom(C,D) of degree l + s − r. The shift bookkeeping then lives
//! entirely in two sign rules,
//!
//! * composition: underlying(g∘f) = (−1)^{|v|·(r−s)} v∘u for g: [s]→[t] over
//!   v and f: [r]→[s] over u,
//! * differential: underlying(∂f) = (−1)^{r−s} ∂u for f: [r]→[s] over u,
//!
//! and everything else (shift, cone, Tot) is stated relative to them. The
//! rules are validated mechanically: `check_mc` and ∂²=0 on twisted homs are
//! asserted for every construction in the test suite, on fixtures and on
//! randomized inputs.
//!
//! Everything is generic over an environment [`HomEnv`] so that twisted
//! complexes over twisted complexes (needed for convolution) reuse the same
//! code path.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cochain::GradedVS;
use crate::dgcore::DGCategory;
use crate::exactla::{Matrix, SpanBuilder};
use crate::{QComplex, Rat};

#[derive(Debug, Error)]
pub enum PretrError {
    #[error("unknown object index {0}")]
    UnknownObject(usize),
    #[error("morphism is not closed (required for {context})")]
    NotClosed { context: &'static str },
    #[error("morphism has degree {got}, expected {want}")]
    WrongDegree { got: i64, want: i64 },
    #[error("Maurer–Cartan equation fails at entries {0:?}")]
    McFails(Vec<(usize, usize)>),
}

/// Access to the hom complexes, composition and units of a DG category-like
/// structure. Implemented by [`DGCategory`] and by [`TwistedEnv`] (whose
/// objects are twisted complexes), which is what makes `Tot` and iterated
/// constructions uniform.
pub trait HomEnv {
    fn n_objects(&self) -> usize;
    fn object_name(&self, i: usize) -> String;
    fn hom_complex(&self, i: usize, j: usize) -> QComplex;
    fn compose_vec(
        &self,
        i: usize,
        j: usize,
        k: usize,
        p: i64,
        g: &[Rat],
        q: i64,
        f: &[Rat],
    ) -> Vec<Rat>;
    fn unit_vec(&self, i: usize) -> Vec<Rat>;
}

impl HomEnv for DGCategory {
    fn n_objects(&self) -> usize {
        self.objects.len()
    }

    fn object_name(&self, i: usize) -> String {
        self.objects[i].clone()
    }

    fn hom_complex(&self, i: usize, j: usize) -> QComplex {
        self.hom(i, j).clone()
    }

    fn compose_vec(
        &self,
        i: usize,
        j: usize,
        k: usize,
        p: i64,
        g: &[Rat],
        q: i64,
        f: &[Rat],
    ) -> Vec<Rat> {
        DGCategory::compose_vec(self, i, j, k, p, g, q, f)
    }

    fn unit_vec(&self, i: usize) -> Vec<Rat> {
        DGCategory::unit_vec(self, i)
    }
}

fn sign(e: i64) -> Rat {
    if e.rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

fn scaled(v: &[Rat], s: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x.clone() * s.clone()).collect()
}

fn add_into(acc: &mut Vec<Rat>, v: &[Rat]) {
    if acc.is_empty() {
        *acc = v.to_vec();
    } else {
        for (a, b) in acc.iter_mut().zip(v) {
            *a = a.clone() + b.clone();
        }
    }
}

/// One-sided twisted complex `(⊕ C_i[r_i], q)` over an environment.
///
/// Twist entries are stored by underlying morphism: `q[(i,j)]` is a
/// coordinate vector in `hom(C_i, C_j)` of degree `1 + r_j − r_i`, present
/// only for `i < j` (one-sidedness is enforced by construction).
#[derive(Debug)]
pub struct TwistedComplex<'e, E: HomEnv> {
    pub env: &'e E,
    pub terms: Vec<(usize, i64)>,
    pub q: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl<'e, E: HomEnv> Clone for TwistedComplex<'e, E> {
    fn clone(&self) -> Self {
        TwistedComplex {
            env: self.env,
            terms: self.terms.clone(),
            q: self.q.clone(),
        }
    }
}

/// Morphism between two twisted complexes, stored entrywise by underlying
/// morphism: for a degree-`deg` element, `entries[(i,j)]` is a coordinate
/// vector in `hom(C_i, D_j)` of degree `deg + s_j − r_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwElt {
    pub deg: i64,
    pub entries: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl TwElt {
    pub fn zero(deg: i64) -> Self {
        TwElt {
            deg,
            entries: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.iter().all(|x| x.is_zero()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        TwElt {
            deg: self.deg,
            entries: self
                .entries
                .iter()
                .map(|(&k, v)| (k, scaled(v, s)))
                .collect(),
        }
    }

    pub fn add(&self, other: &TwElt) -> Self {
        assert_eq!(self.deg, other.deg);
        let mut out = self.clone();
        for (&k, v) in &other.entries {
            let e = out.entries.entry(k).or_insert_with(|| vec![Rat::zero(); v.len()]);
            add_into(e, v);
        }
        out
    }
}

impl<'e, E: HomEnv> TwistedComplex<'e, E> {
    /// One-term complex `(obj, 0)` with zero twist.
    pub fn embed(env: &'e E, obj: usize) -> Result<Self, PretrError> {
        if obj >= env.n_objects() {
            return Err(PretrError::UnknownObject(obj));
        }
        Ok(TwistedComplex {
            env,
            terms: vec![(obj, 0)],
            q: BTreeMap::new(),
        })
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Underlying degree of a degree-`deg` morphism from term `i` of `self`
    /// to term `j` of `other`.
    fn under_deg(&self, i: usize, other: &Self, j: usize, deg: i64) -> i64 {
        deg + other.terms[j].1 - self.terms[i].1
    }

    fn q_entry(&self, i: usize, j: usize) -> Option<&Vec<Rat>> {
        self.q.get(&(i, j))
    }

    /// Shift: adds `n` to every term shift. In the underlying-morphism
    /// storage the twist data is unchanged (the sign in the textbook formula
    /// is absorbed by the identification of shifted hom spaces).
    pub fn shift_tw(&self, n: i64) -> Self {
        TwistedComplex {
            env: self.env,
            terms: self.terms.iter().map(|&(o, r)| (o, r + n)).collect(),
            q: self.q.clone(),
        }
    }

    /// Entrywise Maurer–Cartan residues: `∂q + q²` per entry `(i,j)`.
    pub fn mc_residue(&self) -> BTreeMap<(usize, usize), Vec<Rat>> {
        let mut out = BTreeMap::new();
        for i in 0..self.n_terms() {
            for j in i + 1..self.n_terms() {
                let (oi, ri) = self.terms[i];
                let (oj, rj) = self.terms[j];
                let ud = self.under_deg(i, self, j, 1);
                let hom = self.env.hom_complex(oi, oj);
                let mut acc = vec![Rat::zero(); hom.dim(ud + 1)];
                if let Some(u) = self.q_entry(i, j) {
                    // ∂ rule: (−1)^{r_i − r_j} ∂u
                    let du = hom.diff(ud).mul_vec(u).unwrap();
                    add_into(&mut acc, &scaled(&du, &sign(ri - rj)));
                }
                for k in i + 1..j {
                    let (Some(u1), Some(u2)) = (self.q_entry(i, k), self.q_entry(k, j)) else {
                        continue;
                    };
                    let (ok, rk) = self.terms[k];
                    // composition rule: (−1)^{|v|(r_i − r_k)} v∘u
                    let s = sign((1 + rj - rk) * (ri - rk));
                    let comp = self.env.compose_vec(
                        oi,
                        ok,
                        oj,
                        1 + rj - rk,
                        u2,
                        1 + rk - ri,
                        u1,
                    );
                    add_into(&mut acc, &scaled(&comp, &s));
                }
                if !acc.iter().all(|x| x.is_zero()) {
                    out.insert((i, j), acc);
                }
            }
        }
        out
    }

    pub fn check_mc(&self) -> Result<(), PretrError> {
        let res = self.mc_residue();
        if res.is_empty() {
            Ok(())
        } else {
            Err(PretrError::McFails(res.keys().copied().collect()))
        }
    }

    /// Identity morphism as a [`TwElt`].
    pub fn identity(&self) -> TwElt {
        let mut e = TwElt::zero(0);
        for (i, &(o, _)) in self.terms.iter().enumerate() {
            e.entries.insert((i, i), self.env.unit_vec(o));
        }
        e
    }
}

/// `g ∘ f` for `f: a → b`, `g: b → c`.
pub fn compose_tw<E: HomEnv>(
    a: &TwistedComplex<E>,
    b: &TwistedComplex<E>,
    c: &TwistedComplex<E>,
    g: &TwElt,
    f: &TwElt,
) -> TwElt {
    let mut out = TwElt::zero(g.deg + f.deg);
    for (&(i, j), u) in &f.entries {
        let (oi, ri) = a.terms[i];
        let (oj, rj) = b.terms[j];
        for (&(j2, k), v) in &g.entries {
            if j2 != j {
                continue;
            }
            let (ok, rk) = c.terms[k];
            let vdeg = g.deg + rk - rj;
            let udeg = f.deg + rj - ri;
            let s = sign(vdeg * (ri - rj));
            let comp = a.env.compose_vec(oi, oj, ok, vdeg, v, udeg, u);
            if comp.iter().all(|x| x.is_zero()) {
                continue;
            }
            let entry = out
                .entries
                .entry((i, k))
                .or_insert_with(|| vec![Rat::zero(); comp.len()]);
            add_into(entry, &scaled(&comp, &s));
        }
    }
    out.entries.retain(|_, v| !v.iter().all(|x| x.is_zero()));
    out
}

/// Twisted-hom differential `∂(f) = (∂f_{i,j}) + q′f − (−1)^{deg f} fq`
/// for `f: a → b`.
pub fn diff_tw<E: HomEnv>(a: &TwistedComplex<E>, b: &TwistedComplex<E>, f: &TwElt) -> TwElt {
    let mut out = TwElt::zero(f.deg + 1);
    let mut add = |key: (usize, usize), v: Vec<Rat>| {
        if v.iter().all(|x| x.is_zero()) {
            return;
        }
        let entry = out
            .entries
            .entry(key)
            .or_insert_with(|| vec![Rat::zero(); v.len()]);
        add_into(entry, &v);
    };
    for (&(i, j), u) in &f.entries {
        let (oi, ri) = a.terms[i];
        let (oj, rj) = b.terms[j];
        let udeg = f.deg + rj - ri;
        // entrywise differential with the shift sign
        let hom = a.env.hom_complex(oi, oj);
        let du = hom.diff(udeg).mul_vec(u).unwrap();
        add((i, j), scaled(&du, &sign(ri - rj)));
        // q′ f: postcompose with the target twist
        for k in j + 1..b.n_terms() {
            if let Some(p) = b.q_entry(j, k) {
                let (ok, rk) = b.terms[k];
                let s = sign((1 + rk - rj) * (ri - rj));
                let comp = a
                    .env
                    .compose_vec(oi, oj, ok, 1 + rk - rj, p, udeg, u);
                add((i, k), scaled(&comp, &s));
            }
        }
        // −(−1)^{deg f} f q: precompose with the source twist
        for i0 in 0..i {
            if let Some(qv) = a.q_entry(i0, i) {
                let (oi0, ri0) = a.terms[i0];
                let s = sign(udeg * (ri0 - ri)) * -sign(f.deg);
                let comp = a
                    .env
                    .compose_vec(oi0, oi, oj, udeg, u, 1 + ri - ri0, qv);
                add((i0, j), scaled(&comp, &s));
            }
        }
    }
    out.entries.retain(|v, e| {
        let _ = v;
        !e.iter().all(|x| x.is_zero())
    });
    out
}

/// Basis layout of a twisted-hom complex: per total degree, the list of
/// matrix blocks with their flat offsets.
#[derive(Debug, Clone)]
pub struct TwHom {
    pub complex: QComplex,
    /// degree → list of (term i, term j, underlying degree, offset, dim)
    blocks: BTreeMap<i64, Vec<(usize, usize, i64, usize, usize)>>,
}

impl TwHom {
    pub fn dim(&self, deg: i64) -> usize {
        self.complex.dim(deg)
    }

    pub fn flatten(&self, e: &TwElt) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim(e.deg)];
        let blocks = self.blocks.get(&e.deg).map_or(&[][..], |b| b.as_slice());
        for (&(i, j), u) in &e.entries {
            let &(_, _, _, off, dim) = blocks
                .iter()
                .find(|&&(bi, bj, _, _, _)| bi == i && bj == j)
                .expect("entry outside hom layout");
            assert_eq!(u.len(), dim);
            for (a, x) in u.iter().enumerate() {
                v[off + a] = x.clone();
            }
        }
        v
    }

    pub fn unflatten(&self, deg: i64, v: &[Rat]) -> TwElt {
        let mut e = TwElt::zero(deg);
        for &(i, j, _, off, dim) in self.blocks.get(&deg).map_or(&[][..], |b| b.as_slice()) {
            let u = v[off..off + dim].to_vec();
            if !u.iter().all(|x| x.is_zero()) {
                e.entries.insert((i, j), u);
            }
        }
        e
    }
}

/// The morphism complex between two twisted complexes over the same
/// environment.
pub fn twisted_hom<E: HomEnv>(a: &TwistedComplex<E>, b: &TwistedComplex<E>) -> TwHom {
    // collect per-degree blocks
    let mut homs: Vec<Vec<QComplex>> = Vec::new();
    for &(oi, _) in &a.terms {
        homs.push(b.terms.iter().map(|&(oj, _)| a.env.hom_complex(oi, oj)).collect());
    }
    let mut degs: Vec<i64> = Vec::new();
    for (i, &(_, ri)) in a.terms.iter().enumerate() {
        for (j, &(_, rj)) in b.terms.iter().enumerate() {
            for ud in homs[i][j].space.degrees() {
                let l = ud - rj + ri;
                if !degs.contains(&l) {
                    degs.push(l);
                }
            }
        }
    }
    degs.sort();
    let mut blocks = BTreeMap::new();
    let mut space = GradedVS::new();
    for &l in &degs {
        let mut list = Vec::new();
        let mut off = 0;
        let mut labels = Vec::new();
        for (i, &(_, ri)) in a.terms.iter().enumerate() {
            for (j, &(_, rj)) in b.terms.iter().enumerate() {
                let ud = l + rj - ri;
                let dim = homs[i][j].dim(ud);
                if dim > 0 {
                    list.push((i, j, ud, off, dim));
                    for lab in homs[i][j].space.labels(ud) {
                        labels.push(format!("({i}→{j}){lab}"));
                    }
                    off += dim;
                }
            }
        }
        if off > 0 {
            blocks.insert(l, list);
            space.set_degree(l, labels);
        }
    }
    let mut layout = TwHom {
        complex: QComplex::new(space),
        blocks,
    };
    // differential: apply diff_tw to each basis element and flatten
    let degrees: Vec<i64> = layout.complex.space.degrees().collect();
    for &l in &degrees {
        let n = layout.dim(l);
        let tgt = layout.dim(l + 1);
        let mut m = Matrix::zero(tgt, n);
        for col in 0..n {
            let mut v = vec![Rat::zero(); n];
            v[col] = Rat::one();
            let e = layout.unflatten(l, &v);
            let de = diff_tw(a, b, &e);
            for (r, x) in layout.flatten(&de).into_iter().enumerate() {
                m.set(r, col, x);
            }
        }
        let mut c = layout.complex.clone();
        c.set_diff(l, m).expect("layout shapes agree");
        layout.complex = c;
    }
    layout
}

/// The cone of a closed degree-0 morphism `f: a → b`: terms of `a` shifted by
/// one followed by the terms of `b`; the connecting block carries the
/// morphism entries scaled by `(−1)^{s_j}` (shift of the target term), which
/// is what the underlying-morphism storage needs for Maurer–Cartan to hold.
pub fn cone<'e, E: HomEnv>(
    a: &TwistedComplex<'e, E>,
    b: &TwistedComplex<'e, E>,
    f: &TwElt,
) -> Result<TwistedComplex<'e, E>, PretrError> {
    if f.deg != 0 {
        return Err(PretrError::WrongDegree {
            got: f.deg,
            want: 0,
        });
    }
    if !diff_tw(a, b, f).is_zero() {
        return Err(PretrError::NotClosed { context: "cone" });
    }
    let n = a.n_terms();
    let mut terms: Vec<(usize, i64)> = a.terms.iter().map(|&(o, r)| (o, r + 1)).collect();
    terms.extend(b.terms.iter().copied());
    let mut q = BTreeMap::new();
    for (&(i, j), v) in &a.q {
        q.insert((i, j), v.clone());
    }
    for (&(i, j), v) in &b.q {
        q.insert((n + i, n + j), v.clone());
    }
    for (&(i, j), v) in &f.entries {
        let s = sign(b.terms[j].1);
        q.insert((i, n + j), scaled(v, &s));
    }
    Ok(TwistedComplex {
        env: a.env,
        terms,
        q,
    })
}

/// The four canonical structure maps of `cone(f: a→b)`:
/// `(i: b → cone, p: cone → b, j: a[1] → cone, s: cone → a[1])`,
/// satisfying `pi = 1`, `sj = 1`, `si = 0`, `pj = 0`, `ip + js = 1`.
pub fn cone_maps<E: HomEnv>(
    a: &TwistedComplex<E>,
    b: &TwistedComplex<E>,
) -> (TwElt, TwElt, TwElt, TwElt) {
    let n = a.n_terms();
    let mut inc = TwElt::zero(0);
    let mut proj = TwElt::zero(0);
    for (j, &(o, _)) in b.terms.iter().enumerate() {
        inc.entries.insert((j, n + j), a.env.unit_vec(o));
        proj.entries.insert((n + j, j), a.env.unit_vec(o));
    }
    let mut jmap = TwElt::zero(0);
    let mut smap = TwElt::zero(0);
    for (i, &(o, _)) in a.terms.iter().enumerate() {
        jmap.entries.insert((i, i), a.env.unit_vec(o));
        smap.entries.insert((i, i), a.env.unit_vec(o));
    }
    (inc, proj, jmap, smap)
}

/// Environment whose objects are twisted complexes over a base environment.
pub struct TwistedEnv<'e, E: HomEnv> {
    pub objects: Vec<TwistedComplex<'e, E>>,
    layouts: std::cell::RefCell<BTreeMap<(usize, usize), TwHom>>,
}

impl<'e, E: HomEnv> TwistedEnv<'e, E> {
    pub fn new(objects: Vec<TwistedComplex<'e, E>>) -> Self {
        TwistedEnv {
            objects,
            layouts: std::cell::RefCell::new(BTreeMap::new()),
        }
    }

    fn layout(&self, i: usize, j: usize) -> TwHom {
        self.layouts
            .borrow_mut()
            .entry((i, j))
            .or_insert_with(|| twisted_hom(&self.objects[i], &self.objects[j]))
            .clone()
    }
}

impl<'e, E: HomEnv> HomEnv for TwistedEnv<'e, E> {
    fn n_objects(&self) -> usize {
        self.objects.len()
    }

    fn object_name(&self, i: usize) -> String {
        let parts: Vec<String> = self.objects[i]
            .terms
            .iter()
            .map(|&(o, r)| format!("{}[{r}]", self.objects[i].env.object_name(o)))
            .collect();
        format!("({})", parts.join("⊕"))
    }

    fn hom_complex(&self, i: usize, j: usize) -> QComplex {
        self.layout(i, j).complex
    }

    fn compose_vec(
        &self,
        i: usize,
        j: usize,
        k: usize,
        p: i64,
        g: &[Rat],
        q: i64,
        f: &[Rat],
    ) -> Vec<Rat> {
        let (lij, ljk, lik) = (self.layout(i, j), self.layout(j, k), self.layout(i, k));
        let ge = ljk.unflatten(p, g);
        let fe = lij.unflatten(q, f);
        let comp = compose_tw(
            &self.objects[i],
            &self.objects[j],
            &self.objects[k],
            &ge,
            &fe,
        );
        lik.flatten(&comp)
    }

    fn unit_vec(&self, i: usize) -> Vec<Rat> {
        let l = self.layout(i, i);
        l.flatten(&self.objects[i].identity())
    }
}

/// Convolution: flattens a twisted complex over [`TwistedEnv`] to a twisted
/// complex over the base. The entry from inner term `j` of outer term `i`
/// (inner shift ρ, outer shift r_i) to inner term `k` of outer term `i′`
/// (inner shift σ) is scaled by `(−1)^{r_i(ρ−σ)}`; terms are ordered
/// lexicographically (outer, inner), which preserves one-sidedness.
pub fn tot<'e, E: HomEnv>(
    outer: &TwistedComplex<'_, TwistedEnv<'e, E>>,
) -> Result<TwistedComplex<'e, E>, PretrError> {
    let env = outer.env;
    let base = env
        .objects
        .first()
        .map(|o| o.env)
        .expect("tot of an empty outer complex needs a base");
    let mut terms = Vec::new();
    let mut offsets = Vec::new();
    for &(oi, ri) in &outer.terms {
        offsets.push(terms.len());
        for &(obj, rho) in &env.objects[oi].terms {
            terms.push((obj, rho + ri));
        }
    }
    let mut q: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
    // inner twists
    for (i, &(oi, ri)) in outer.terms.iter().enumerate() {
        let inner = &env.objects[oi];
        for (&(j, k), v) in &inner.q {
            let s = sign(ri * (inner.terms[j].1 - inner.terms[k].1));
            q.insert((offsets[i] + j, offsets[i] + k), scaled(v, &s));
        }
    }
    // outer twists
    for (&(i, i2), flat) in &outer.q {
        let (oi, ri) = outer.terms[i];
        let (oi2, ri2) = outer.terms[i2];
        let layout = env.layout(oi, oi2);
        let e = layout.unflatten(1 + ri2 - ri, flat);
        for (&(j, k), v) in &e.entries {
            let rho = env.objects[oi].terms[j].1;
            let sigma = env.objects[oi2].terms[k].1;
            let s = sign(ri * (rho - sigma));
            let key = (offsets[i] + j, offsets[i2] + k);
            let entry = q.entry(key).or_insert_with(|| vec![Rat::zero(); v.len()]);
            add_into(entry, &scaled(v, &s));
        }
    }
    q.retain(|_, v| !v.iter().all(|x| x.is_zero()));
    let out = TwistedComplex {
        env: base,
        terms,
        q,
    };
    out.check_mc()?;
    Ok(out)
}

/// Tensor with a finite complex of vector spaces:
/// `C ⊗ V = (⊕_{i | Vⁱ≠0} C[−i]^{⊕ dim Vⁱ}, q)` with layer-connecting twists
/// induced by the differential of `V`.
pub fn tensor_with_complex<'e, E: HomEnv>(
    c: &TwistedComplex<'e, E>,
    v: &QComplex,
) -> Result<TwistedComplex<'e, E>, PretrError> {
    let env = TwistedEnv::new(vec![c.clone()]);
    // outer terms: one copy of c[−d] per basis vector of V^d, d ascending
    let mut outer_terms = Vec::new();
    let mut index: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for d in v.space.degrees() {
        for a in 0..v.dim(d) {
            index.insert((d, a), outer_terms.len());
            outer_terms.push((0usize, -d));
        }
    }
    let mut q = BTreeMap::new();
    let unit = env.unit_vec(0);
    for d in v.space.degrees() {
        let dm = v.diff(d);
        for a in 0..v.dim(d) {
            for b in 0..v.dim(d + 1) {
                let coef = dm.get(b, a);
                if coef.is_zero() {
                    continue;
                }
                let (i, j) = (index[&(d, a)], index[&(d + 1, b)]);
                q.insert((i, j), scaled(&unit, coef));
            }
        }
    }
    let outer = TwistedComplex {
        env: &env,
        terms: outer_terms,
        q,
    };
    tot(&outer)
}

/// Gaussian elimination on a twisted complex: repeatedly cancels a pair of
/// terms connected by a twist entry that is an invertible multiple of the
/// unit (same object, shifts differing by one), correcting the remaining
/// twist by `q_{ij} − q_{i0 j} e⁻¹ q_{i j0}`. The result is homotopy
/// equivalent to the input. A candidate pair is skipped when its correction
/// would break one-sidedness; Maurer–Cartan is re-verified after every step.
pub fn reduce<'e, E: HomEnv>(
    c: &TwistedComplex<'e, E>,
) -> Result<TwistedComplex<'e, E>, PretrError> {
    let mut cur = c.clone();
    'outer: loop {
        let keys: Vec<(usize, usize)> = cur.q.keys().copied().collect();
        for (i0, j0) in keys {
            let (oi, ri) = cur.terms[i0];
            let (oj, rj) = cur.terms[j0];
            if oi != oj || 1 + rj - ri != 0 {
                continue;
            }
            let e = &cur.q[&(i0, j0)];
            let unit = cur.env.unit_vec(oi);
            // e must be a nonzero multiple of the unit
            let Some(pos) = unit.iter().position(|x| !x.is_zero()) else {
                continue;
            };
            let scalar = e[pos].clone() / unit[pos].clone();
            if scalar.is_zero()
                || e.iter()
                    .zip(&unit)
                    .any(|(a, b)| a.clone() != scalar.clone() * b.clone())
            {
                continue;
            }
            // correction = q_{i0 →} ∘ e⁻¹ ∘ q_{→ j0}
            let mut into = TwElt::zero(1);
            let mut out_of = TwElt::zero(1);
            for (&(i, j), v) in &cur.q {
                if j == j0 && i != i0 {
                    into.entries.insert((i, j), v.clone());
                }
                if i == i0 && j != j0 {
                    out_of.entries.insert((i, j), v.clone());
                }
            }
            let mut einv = TwElt::zero(-1);
            einv.entries
                .insert((j0, i0), scaled(&unit, &(Rat::one() / scalar)));
            let half = compose_tw(&cur, &cur, &cur, &einv, &into);
            let corr = compose_tw(&cur, &cur, &cur, &out_of, &half);
            if corr
                .entries
                .iter()
                .any(|(&(i, j), v)| i >= j && !v.iter().all(|x| x.is_zero()))
            {
                continue; // would break one-sidedness
            }
            let mut q: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
            for (&(i, j), v) in &cur.q {
                if i == i0 || i == j0 || j == i0 || j == j0 {
                    continue;
                }
                q.insert((i, j), v.clone());
            }
            for (&(i, j), v) in &corr.entries {
                let entry = q.entry((i, j)).or_insert_with(|| vec![Rat::zero(); v.len()]);
                add_into(entry, &scaled(v, &-Rat::one()));
            }
            q.retain(|_, v| !v.iter().all(|x| x.is_zero()));
            let mut terms = Vec::new();
            let mut newidx = BTreeMap::new();
            for (i, &t) in cur.terms.iter().enumerate() {
                if i != i0 && i != j0 {
                    newidx.insert(i, terms.len());
                    terms.push(t);
                }
            }
            cur = TwistedComplex {
                env: cur.env,
                terms,
                q: q
                    .into_iter()
                    .map(|((i, j), v)| ((newidx[&i], newidx[&j]), v))
                    .collect(),
            };
            cur.check_mc()?;
            continue 'outer;
        }
        break;
    }
    Ok(cur)
}

/// Builds a concrete [`DGCategory`] presenting the chosen objects of an
/// environment, with hom bases arranged so that each identity morphism is the
/// leading degree-0 basis vector of its endomorphism space.
pub fn materialize<E: HomEnv>(env: &E, names: Option<Vec<String>>) -> DGCategory {
    let n = env.n_objects();
    let names =
        names.unwrap_or_else(|| (0..n).map(|i| env.object_name(i)).collect());
    // change of basis per (i,j,deg): identity except diagonal degree 0,
    // where the unit comes first
    let mut basis: BTreeMap<(usize, usize, i64), Matrix<Rat>> = BTreeMap::new();
    let homs: Vec<Vec<QComplex>> =
        (0..n).map(|i| (0..n).map(|j| env.hom_complex(i, j)).collect()).collect();
    for i in 0..n {
        let dim = homs[i][i].dim(0);
        let u = env.unit_vec(i);
        let mut span = SpanBuilder::new(dim);
        let mut cols = vec![u.clone()];
        span.push(&u);
        for a in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[a] = Rat::one();
            if span.push(&e) {
                cols.push(e);
            }
        }
        basis.insert((i, i, 0), Matrix::from_columns(dim, &cols));
    }
    let express = |i: usize, j: usize, d: i64, v: &[Rat]| -> Vec<Rat> {
        match basis.get(&(i, j, d)) {
            Some(b) => b.solve(v).unwrap().expect("basis change is invertible"),
            None => v.to_vec(),
        }
    };
    let to_old = |i: usize, j: usize, d: i64, col: usize, dim: usize| -> Vec<Rat> {
        match basis.get(&(i, j, d)) {
            Some(b) => b.column(col),
            None => {
                let mut e = vec![Rat::zero(); dim];
                e[col] = Rat::one();
                e
            }
        }
    };
    let mut cat = DGCategory::new(names, false);
    for i in 0..n {
        for j in 0..n {
            let mut space = GradedVS::new();
            for d in homs[i][j].space.degrees() {
                space.set_degree(
                    d,
                    (0..homs[i][j].dim(d)).map(|a| format!("m{d}_{a}")).collect(),
                );
            }
            let mut c = QComplex::new(space);
            for d in homs[i][j].space.degrees() {
                let dim = homs[i][j].dim(d);
                let tgt = homs[i][j].dim(d + 1);
                let mut m = Matrix::zero(tgt, dim);
                for col in 0..dim {
                    let old = to_old(i, j, d, col, dim);
                    let img = homs[i][j].diff(d).mul_vec(&old).unwrap();
                    for (r, x) in express(i, j, d + 1, &img).into_iter().enumerate() {
                        m.set(r, col, x);
                    }
                }
                c.set_diff(d, m).unwrap();
            }
            cat.set_hom(i, j, c);
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let pdegs: Vec<i64> = homs[j][k].space.degrees().collect();
                let qdegs: Vec<i64> = homs[i][j].space.degrees().collect();
                for &p in &pdegs {
                    for &qd in &qdegs {
                        let (dp, dq) = (homs[j][k].dim(p), homs[i][j].dim(qd));
                        let tgt = homs[i][k].dim(p + qd);
                        if dp == 0 || dq == 0 || tgt == 0 {
                            continue;
                        }
                        let mut m = Matrix::zero(tgt, dp * dq);
                        for b in 0..dp {
                            let g = to_old(j, k, p, b, dp);
                            for a in 0..dq {
                                let f = to_old(i, j, qd, a, dq);
                                let comp = env.compose_vec(i, j, k, p, &g, qd, &f);
                                for (r, x) in
                                    express(i, k, p + qd, &comp).into_iter().enumerate()
                                {
                                    m.set(r, b * dq + a, x);
                                }
                            }
                        }
                        cat.set_compose(i, j, k, p, qd, m);
                    }
                }
            }
        }
    }
    for i in 0..n {
        cat.set_unit_index(i, 0);
    }
    cat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcore::path_algebra;
    use crate::presets::x_quiver;
    use crate::{rat, Rat};
    use crate::cochain::GradedVS;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn xcat() -> DGCategory {
        path_algebra(&x_quiver(), 6).unwrap()
    }

    /// Random twisted complex built as an iterated cone of random closed
    /// degree-0 morphisms between embeds — valid by construction.
    fn random_twisted<'e>(
        rng: &mut ChaCha8Rng,
        cat: &'e DGCategory,
        steps: usize,
    ) -> TwistedComplex<'e, DGCategory> {
        let n = cat.objects.len();
        let mut cur = TwistedComplex::embed(cat, rng.gen_range(0..n)).unwrap();
        for _ in 0..steps {
            let obj = rng.gen_range(0..n);
            let other = TwistedComplex::embed(cat, obj).unwrap();
            // random closed degree-0 morphism cur → other or other → cur
            let (src, tgt) = if rng.gen_bool(0.5) {
                (cur.clone(), other.clone())
            } else {
                (other.clone(), cur.clone())
            };
            let layout = twisted_hom(&src, &tgt);
            let dim = layout.dim(0);
            let kernel = layout.complex.diff(0).kernel_basis();
            if dim == 0 || kernel.is_empty() {
                continue;
            }
            let mut v = vec![Rat::zero(); dim];
            for k in &kernel {
                let c = rat(rng.gen_range(-2..=2));
                for (a, x) in k.iter().enumerate() {
                    v[a] = v[a].clone() + c.clone() * x.clone();
                }
            }
            let f = layout.unflatten(0, &v);
            cur = cone(&src, &tgt, &f).unwrap();
        }
        cur
    }

    #[test]
    fn embed_recovers_hom_complex() {
        let cat = xcat();
        let a = TwistedComplex::embed(&cat, 1).unwrap();
        let b = TwistedComplex::embed(&cat, 2).unwrap();
        a.check_mc().unwrap();
        let h = twisted_hom(&a, &b);
        assert_eq!(h.complex.cohomology_dims(), cat.hom(1, 2).cohomology_dims());
        assert_eq!(h.dim(0), cat.hom_dim(1, 2, 0));
        assert_eq!(h.complex.diff(0), cat.hom(1, 2).diff(0));
    }

    #[test]
    fn random_twisted_complexes_pass_mc_and_d_squared() {
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..12 {
            let a = random_twisted(&mut rng, &cat, 3);
            a.check_mc().unwrap();
            let b = random_twisted(&mut rng, &cat, 3);
            let h = twisted_hom(&a, &b);
            h.complex.check_complex().unwrap();
        }
    }

    #[test]
    fn perturbed_twist_fails_mc_with_named_entry() {
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // find a complex with a nonzero twist to perturb
        loop {
            let mut a = random_twisted(&mut rng, &cat, 3);
            let Some((&key, _)) = a.q.iter().next() else {
                continue;
            };
            let entry = a.q.get_mut(&key).unwrap();
            // replace by something closed-but-wrong: scale by 3 breaks q²
            // terms, or inject into an empty slot if scaling stays consistent
            for x in entry.iter_mut() {
                *x = x.clone() * rat(3);
            }
            match a.check_mc() {
                Err(PretrError::McFails(entries)) => {
                    assert!(!entries.is_empty());
                    break;
                }
                Ok(()) => continue, // the scaled twist happened to stay MC
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn shift_behaves() {
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_twisted(&mut rng, &cat, 4);
        let s0 = a.shift_tw(0);
        assert_eq!(s0.terms, a.terms);
        assert_eq!(s0.q, a.q);
        let s2 = a.shift_tw(1).shift_tw(1);
        assert_eq!(s2.q, a.q);
        assert!(s2.terms.iter().zip(&a.terms).all(|(x, y)| x.1 == y.1 + 2));
        a.shift_tw(1).check_mc().unwrap();
        // twisted_hom cohomology shifts by one degree
        let b = random_twisted(&mut rng, &cat, 3);
        let h = twisted_hom(&a, &b).complex.cohomology_dims();
        let hs = twisted_hom(&a.shift_tw(1), &b).complex.cohomology_dims();
        for (k, d) in &h {
            assert_eq!(hs.get(&(k + 1)).unwrap_or(&0), d);
        }
    }

    #[test]
    fn cone_of_zero_and_identity() {
        let cat = xcat();
        let a = TwistedComplex::embed(&cat, 0).unwrap();
        let b = TwistedComplex::embed(&cat, 3).unwrap();
        // cone(0) = a[1] ⊕ b with zero twist
        let z = cone(&a, &b, &TwElt::zero(0)).unwrap();
        assert_eq!(z.terms, vec![(0, 1), (3, 0)]);
        assert!(z.q.is_empty());
        // cone(id) is contractible: hom to and from anything is acyclic
        let id_cone = cone(&a, &a.clone(), &a.identity()).unwrap();
        id_cone.check_mc().unwrap();
        for obj in 0..cat.objects.len() {
            let e = TwistedComplex::embed(&cat, obj).unwrap();
            assert!(twisted_hom(&id_cone, &e).complex.cohomology_dims().is_empty());
            assert!(twisted_hom(&e, &id_cone).complex.cohomology_dims().is_empty());
        }
    }

    #[test]
    fn cone_axioms_hold() {
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..6 {
            let a = random_twisted(&mut rng, &cat, 2);
            let b = random_twisted(&mut rng, &cat, 2);
            let layout = twisted_hom(&a, &b);
            let kernel = layout.complex.diff(0).kernel_basis();
            let f = match kernel.first() {
                Some(k) => layout.unflatten(0, k),
                None => TwElt::zero(0),
            };
            let c = cone(&a, &b, &f).unwrap();
            c.check_mc().unwrap();
            let a1 = a.shift_tw(1);
            let (inc, proj, jm, sm) = cone_maps(&a, &b);
            // pi = 1, sj = 1, si = 0, pj = 0, ip + js = 1
            assert_eq!(compose_tw(&b, &c, &b, &proj, &inc), b.identity());
            assert_eq!(compose_tw(&a1, &c, &a1, &sm, &jm), a1.identity());
            assert!(compose_tw(&b, &c, &a1, &sm, &inc).is_zero());
            assert!(compose_tw(&a1, &c, &b, &proj, &jm).is_zero());
            let ip = compose_tw(&c, &b, &c, &inc, &proj);
            let js = compose_tw(&c, &a1, &c, &jm, &sm);
            assert_eq!(ip.add(&js), c.identity());
        }
    }

    #[test]
    fn cone_homotopic_morphisms_same_cohomology() {
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_twisted(&mut rng, &cat, 2);
        let b = random_twisted(&mut rng, &cat, 2);
        let layout = twisted_hom(&a, &b);
        let kernel = layout.complex.diff(0).kernel_basis();
        if kernel.is_empty() || layout.dim(-1) == 0 {
            return;
        }
        let f = layout.unflatten(0, &kernel[0]);
        let mut g = vec![Rat::zero(); layout.dim(-1)];
        g[0] = rat(1);
        let dg = diff_tw(&a, &b, &layout.unflatten(-1, &g));
        let f2 = f.add(&dg);
        let c1 = cone(&a, &b, &f).unwrap();
        let c2 = cone(&a, &b, &f2).unwrap();
        for obj in 0..cat.objects.len() {
            let e = TwistedComplex::embed(&cat, obj).unwrap();
            assert_eq!(
                twisted_hom(&c1, &e).complex.cohomology_dims(),
                twisted_hom(&c2, &e).complex.cohomology_dims()
            );
        }
    }

    #[test]
    fn tot_flattens_nested_cones() {
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let a = random_twisted(&mut rng, &cat, 2);
            // one-level nesting of embed: tot(embed(env, a)) = a
            let env = TwistedEnv::new(vec![a.clone()]);
            let outer = TwistedComplex::embed(&env, 0).unwrap();
            let flat = tot(&outer).unwrap();
            assert_eq!(flat.terms, a.terms);
            assert_eq!(flat.q, a.q);
            // cone at the twisted level, then tot, stays MC and matches
            // cohomology of the base-level cone
            let b = random_twisted(&mut rng, &cat, 2);
            let envs = TwistedEnv::new(vec![a.clone(), b.clone()]);
            let layout = envs.layout(0, 1);
            let kernel = layout.complex.diff(0).kernel_basis();
            if kernel.is_empty() {
                continue;
            }
            let oa = TwistedComplex::embed(&envs, 0).unwrap();
            let ob = TwistedComplex::embed(&envs, 1).unwrap();
            let of = TwElt {
                deg: 0,
                entries: [((0, 0), kernel[0].clone())].into_iter().collect(),
            };
            let oc = cone(&oa, &ob, &of).unwrap();
            let flat = tot(&oc).unwrap();
            flat.check_mc().unwrap();
            let direct = cone(&a, &b, &layout.unflatten(0, &kernel[0])).unwrap();
            for obj in 0..cat.objects.len() {
                let e = TwistedComplex::embed(&cat, obj).unwrap();
                assert_eq!(
                    twisted_hom(&flat, &e).complex.cohomology_dims(),
                    twisted_hom(&direct, &e).complex.cohomology_dims()
                );
            }
        }
    }

    #[test]
    fn tensor_with_complex_cases() {
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let c = random_twisted(&mut rng, &cat, 3);
        // unit complex: identity
        let unit = QComplex::new(GradedVS::from_dims(&[(0, 1)]));
        let t = tensor_with_complex(&c, &unit).unwrap();
        assert_eq!(t.terms, c.terms);
        assert_eq!(t.q, c.q);
        // two-dimensional degree 0: direct sum
        let two = QComplex::new(GradedVS::from_dims(&[(0, 2)]));
        let t2 = tensor_with_complex(&c, &two).unwrap();
        assert_eq!(t2.n_terms(), 2 * c.n_terms());
        t2.check_mc().unwrap();
        // contractible factor gives a contractible result
        let mut acyc = QComplex::new(GradedVS::from_dims(&[(0, 1), (1, 1)]));
        acyc.set_diff(0, Matrix::identity(1)).unwrap();
        let t3 = tensor_with_complex(&c, &acyc).unwrap();
        t3.check_mc().unwrap();
        for obj in 0..cat.objects.len() {
            let e = TwistedComplex::embed(&cat, obj).unwrap();
            assert!(twisted_hom(&t3, &e).complex.cohomology_dims().is_empty());
            assert!(twisted_hom(&e, &t3).complex.cohomology_dims().is_empty());
        }
    }

    #[test]
    fn reduce_cancels_contractible_and_preserves_hom() {
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut acyc = QComplex::new(GradedVS::from_dims(&[(0, 1), (1, 1)]));
        acyc.set_diff(0, Matrix::identity(1)).unwrap();
        for _ in 0..6 {
            let c = random_twisted(&mut rng, &cat, 3);
            // cone of the identity reduces to nothing
            let idcone = cone(&c, &c, &c.identity()).unwrap();
            assert_eq!(reduce(&idcone).unwrap().n_terms(), 0);
            // a contractible tensor factor cancels completely, exercising
            // the correction terms through the twist of c
            let t = tensor_with_complex(&c, &acyc).unwrap();
            assert_eq!(reduce(&t).unwrap().n_terms(), 0);
            // on a complex with no unit entries reduce is the identity, and
            // it never changes twisted-hom cohomology against a probe
            let r = reduce(&c).unwrap();
            let probe = TwistedComplex::embed(&cat, 3).unwrap();
            assert_eq!(
                twisted_hom(&r, &probe).complex.cohomology_dims(),
                twisted_hom(&c, &probe).complex.cohomology_dims()
            );
        }
    }

    #[test]
    fn materialized_twisted_category_passes_dg_axioms() {
        // this is the arbiter of the whole sign calculus: build a concrete
        // DG category out of twisted complexes and run the full axiom check
        let cat = xcat();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let objs: Vec<_> = (0..3).map(|_| random_twisted(&mut rng, &cat, 3)).collect();
        let env = TwistedEnv::new(objs);
        let mat = materialize(&env, None);
        let report = mat.check_dg_axioms();
        assert!(report.is_empty(), "{report:?}");
    }
}
