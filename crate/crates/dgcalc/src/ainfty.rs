//! A∞ categories as explicit operation tables.
//!
//! An operation `m_n` acts on composable chains `(α_n, …, α_1)` with
//! `α_k: A_{k−1} → A_k`; it has degree `2−n`. The Stasheff identities
//!
//! `Σ_{r+s+t=n} (−1)^{r+st} m_{r+1+t}(id^{⊗r} ⊗ m_s ⊗ id^{⊗t}) = 0`
//!
//! are checked on every basis chain, with the Koszul sign
//! `(−1)^{(2−s)·(|α_n|+…+|α_{n−r+1}|)}` from moving `m_s` past the first `r`
//! arguments.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cochain::GradedVS;
use crate::dgcore::DGCategory;
use crate::exactla::Matrix;
use crate::{QMatrix, Rat};

#[derive(Debug, Error)]
pub enum AiError {
    #[error("operation table shape mismatch for chain {chain:?}, degrees {degs:?}")]
    BadShape { chain: Vec<usize>, degs: Vec<i64> },
    #[error("object {0} is not augmentable: endomorphisms are not reduced to the unit line")]
    NotAugmentable(usize),
    #[error("object {0} has no strict unit")]
    NoUnit(usize),
}

/// An A∞ category with operations stored as dense tables per
/// (object chain, argument degrees).
#[derive(Debug, Clone)]
pub struct AInfinityStructure {
    pub objects: Vec<String>,
    pub hom: Vec<Vec<GradedVS>>,
    /// degree-0 basis index of the unit in `hom[i][i]`, if present
    pub unit: Vec<Option<usize>>,
    pub ordered: bool,
    /// `(chain A_0..A_n, degrees of α_1..α_n)` → matrix whose columns run
    /// over basis chains (α_1 index fastest) and whose rows index
    /// `hom(A_0, A_n)` in degree `Σdeg + 2 − n`
    pub ops: BTreeMap<(Vec<usize>, Vec<i64>), QMatrix>,
}

/// The splitting `A = span(units) ⊕ Ā` of a reduced structure: every
/// endomorphism space is exactly the unit line in degree 0.
#[derive(Debug, Clone)]
pub struct Augmentation {
    /// per pair `(i,j)` and degree: dimension of the reduced part
    pub reduced_dims: BTreeMap<(usize, usize, i64), usize>,
}

impl AInfinityStructure {
    pub fn new(objects: Vec<String>, hom: Vec<Vec<GradedVS>>, ordered: bool) -> Self {
        let n = objects.len();
        AInfinityStructure {
            objects,
            hom,
            unit: vec![None; n],
            ordered,
            ops: BTreeMap::new(),
        }
    }

    pub fn dim(&self, i: usize, j: usize, k: i64) -> usize {
        self.hom[i][j].dim(k)
    }

    pub fn out_degree(degs: &[i64]) -> i64 {
        degs.iter().sum::<i64>() + 2 - degs.len() as i64
    }

    pub fn set_op(
        &mut self,
        chain: Vec<usize>,
        degs: Vec<i64>,
        m: QMatrix,
    ) -> Result<(), AiError> {
        let n = degs.len();
        assert_eq!(chain.len(), n + 1);
        let cols: usize = (0..n)
            .map(|k| self.dim(chain[k], chain[k + 1], degs[k]))
            .product();
        let rows = self.dim(chain[0], chain[n], Self::out_degree(&degs));
        if m.rows() != rows || m.cols() != cols {
            return Err(AiError::BadShape { chain, degs });
        }
        if m.is_zero() {
            self.ops.remove(&(chain, degs));
        } else {
            self.ops.insert((chain, degs), m);
        }
        Ok(())
    }

    pub fn op_matrix(&self, chain: &[usize], degs: &[i64]) -> QMatrix {
        let n = degs.len();
        if let Some(m) = self.ops.get(&(chain.to_vec(), degs.to_vec())) {
            return m.clone();
        }
        let cols: usize = (0..n)
            .map(|k| self.dim(chain[k], chain[k + 1], degs[k]))
            .product();
        Matrix::zero(self.dim(chain[0], chain[n], Self::out_degree(degs)), cols)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().map(|(_, d)| d.len()).max().unwrap_or(0)
    }

    pub fn arity_present(&self, n: usize) -> bool {
        self.ops.keys().any(|(_, d)| d.len() == n)
    }

    /// Evaluates `m_n` on coordinate vectors (`args[k]` is α_{k+1}).
    pub fn apply(&self, chain: &[usize], degs: &[i64], args: &[&[Rat]]) -> Vec<Rat> {
        let n = degs.len();
        let rows = self.dim(chain[0], chain[n], Self::out_degree(degs));
        let mut out = vec![Rat::zero(); rows];
        let Some(m) = self.ops.get(&(chain.to_vec(), degs.to_vec())) else {
            return out;
        };
        // iterate nonzero coordinate combinations
        let mut idx = vec![0usize; n];
        let dims: Vec<usize> = (0..n)
            .map(|k| self.dim(chain[k], chain[k + 1], degs[k]))
            .collect();
        if dims.iter().any(|&d| d == 0) {
            return out;
        }
        loop {
            let mut coef = Rat::one();
            let mut zero = false;
            for k in 0..n {
                let c = &args[k][idx[k]];
                if c.is_zero() {
                    zero = true;
                    break;
                }
                coef = coef * c.clone();
            }
            if !zero {
                let mut col = 0usize;
                for k in (0..n).rev() {
                    col = col * dims[k] + idx[k];
                }
                for r in 0..rows {
                    let c = m.get(r, col);
                    if !c.is_zero() {
                        out[r] = out[r].clone() + c.clone() * coef.clone();
                    }
                }
            }
            // increment mixed-radix counter
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// All object chains of length `n` with every consecutive hom nonzero.
    pub fn chains(&self, n: usize) -> Vec<Vec<usize>> {
        let nobj = self.objects.len();
        let mut out: Vec<Vec<usize>> = (0..nobj).map(|i| vec![i]).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for c in out {
                let last = *c.last().unwrap();
                for j in 0..nobj {
                    if self.hom[last][j].total_dim() > 0 {
                        let mut c2 = c.clone();
                        c2.push(j);
                        next.push(c2);
                    }
                }
            }
            out = next;
        }
        out
    }

    fn degree_tuples(&self, chain: &[usize]) -> Vec<Vec<i64>> {
        let n = chain.len() - 1;
        let mut out: Vec<Vec<i64>> = vec![vec![]];
        for k in 0..n {
            let degs: Vec<i64> = self.hom[chain[k]][chain[k + 1]].degrees().collect();
            let mut next = Vec::new();
            for t in &out {
                for &d in &degs {
                    let mut t2 = t.clone();
                    t2.push(d);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }

    fn basis_vec(dim: usize, idx: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); dim];
        v[idx] = Rat::one();
        v
    }

    /// Evaluates every Stasheff identity on every basis chain up to the
    /// requested arity. Returns human-readable failures; empty means pass.
    pub fn check_stasheff(&self, up_to: usize) -> Vec<String> {
        let mut report = Vec::new();
        for n in 1..=up_to {
            for chain in self.chains(n) {
                for degs in self.degree_tuples(&chain) {
                    let dims: Vec<usize> = (0..n)
                        .map(|k| self.dim(chain[k], chain[k + 1], degs[k]))
                        .collect();
                    if dims.iter().any(|&d| d == 0) {
                        continue;
                    }
                    let out_dim =
                        self.dim(chain[0], chain[n], Self::out_degree(&degs) + 1);
                    // iterate basis chains
                    let mut idx = vec![0usize; n];
                    'basis: loop {
                        let mut residue = vec![Rat::zero(); out_dim];
                        for s in 1..=n {
                            for t in 0..=(n - s) {
                                let r = n - s - t;
                                // inner m_s on positions t+1..t+s
                                let inner_chain = &chain[t..t + s + 1];
                                let inner_degs = &degs[t..t + s];
                                let inner_args: Vec<Vec<Rat>> = (t..t + s)
                                    .map(|k| Self::basis_vec(dims[k], idx[k]))
                                    .collect();
                                let inner_refs: Vec<&[Rat]> =
                                    inner_args.iter().map(|v| v.as_slice()).collect();
                                let w = self.apply(inner_chain, inner_degs, &inner_refs);
                                if w.iter().all(|x| x.is_zero()) {
                                    continue;
                                }
                                // outer m_{r+1+t} on (α_n..α_{t+s+1}, w, α_t..α_1)
                                let mut outer_chain = chain[..t + 1].to_vec();
                                outer_chain.extend_from_slice(&chain[t + s..]);
                                let wdeg = Self::out_degree(inner_degs);
                                let mut outer_degs = degs[..t].to_vec();
                                outer_degs.push(wdeg);
                                outer_degs.extend_from_slice(&degs[t + s..]);
                                let mut outer_args: Vec<Vec<Rat>> = (0..t)
                                    .map(|k| Self::basis_vec(dims[k], idx[k]))
                                    .collect();
                                outer_args.push(w);
                                for k in t + s..n {
                                    outer_args.push(Self::basis_vec(dims[k], idx[k]));
                                }
                                let outer_refs: Vec<&[Rat]> =
                                    outer_args.iter().map(|v| v.as_slice()).collect();
                                let v = self.apply(&outer_chain, &outer_degs, &outer_refs);
                                // sign: (−1)^{r+st} and Koszul past the top r
                                let top: i64 = degs[n - r..].iter().sum();
                                let e = (r as i64 + (s * t) as i64 + s as i64 * top)
                                    .rem_euclid(2);
                                for (a, x) in v.iter().enumerate() {
                                    let x = if e == 1 { -x.clone() } else { x.clone() };
                                    residue[a] = residue[a].clone() + x;
                                }
                            }
                        }
                        if !residue.iter().all(|x| x.is_zero()) {
                            report.push(format!(
                                "Stasheff n={n} fails on chain {chain:?}, degrees {degs:?}, basis {idx:?}"
                            ));
                        }
                        // next basis chain
                        let mut k = 0;
                        loop {
                            if k == n {
                                break 'basis;
                            }
                            idx[k] += 1;
                            if idx[k] < dims[k] {
                                break;
                            }
                            idx[k] = 0;
                            k += 1;
                        }
                    }
                }
            }
        }
        report
    }

    /// Strict unitality: `m₂(1,f) = f = m₂(f,1)`, `m₁(1) = 0`, and every
    /// `m_n` (n ≠ 2) vanishes when any argument is a unit.
    pub fn check_strict_unit(&self) -> Vec<String> {
        let mut report = Vec::new();
        for (i, u) in self.unit.iter().enumerate() {
            let Some(u) = *u else {
                report.push(format!("object {i} has no unit"));
                continue;
            };
            let uvec = Self::basis_vec(self.dim(i, i, 0), u);
            let du = self.apply(&[i, i], &[0], &[&uvec]);
            if !du.iter().all(|x| x.is_zero()) {
                report.push(format!("m₁(1_{i}) ≠ 0"));
            }
            for j in 0..self.objects.len() {
                for d in self.hom[i][j].degrees().collect::<Vec<_>>() {
                    for b in 0..self.dim(i, j, d) {
                        let f = Self::basis_vec(self.dim(i, j, d), b);
                        let left = self.apply(&[i, i, j], &[0, d], &[&uvec, &f]);
                        if left != f {
                            report.push(format!("m₂(f, 1_{i}) ≠ f for f in hom({i},{j})^{d}"));
                        }
                        if let Some(uj) = self.unit[j] {
                            let ujvec = Self::basis_vec(self.dim(j, j, 0), uj);
                            let right = self.apply(&[i, j, j], &[d, 0], &[&f, &ujvec]);
                            if right != f {
                                report
                                    .push(format!("m₂(1_{j}, f) ≠ f for f in hom({i},{j})^{d}"));
                            }
                        }
                    }
                }
            }
        }
        // higher (and lower) operations must kill units
        for ((chain, degs), m) in &self.ops {
            let n = degs.len();
            if n == 2 {
                continue;
            }
            let dims: Vec<usize> = (0..n)
                .map(|k| self.dim(chain[k], chain[k + 1], degs[k]))
                .collect();
            for k in 0..n {
                if chain[k] != chain[k + 1] || degs[k] != 0 {
                    continue;
                }
                let Some(u) = self.unit[chain[k]] else { continue };
                // check every column whose k-th factor is the unit
                for col in 0..m.cols() {
                    let mut rest = col;
                    let mut factor = 0usize;
                    for (kk, &d) in dims.iter().enumerate() {
                        let b = rest % d;
                        rest /= d;
                        if kk == k {
                            factor = b;
                        }
                    }
                    if factor != u {
                        continue;
                    }
                    if (0..m.rows()).any(|r| !m.get(r, col).is_zero()) {
                        report.push(format!(
                            "m_{n} does not vanish on a unit argument (chain {chain:?}, degrees {degs:?})"
                        ));
                        break;
                    }
                }
            }
        }
        report
    }

    /// The augmentation splitting, requiring reduced endomorphisms.
    pub fn augment(&self) -> Result<Augmentation, AiError> {
        let n = self.objects.len();
        let mut reduced = BTreeMap::new();
        for i in 0..n {
            if self.unit[i].is_none() {
                return Err(AiError::NoUnit(i));
            }
            for d in self.hom[i][i].degrees().collect::<Vec<_>>() {
                let dim = self.dim(i, i, d);
                if (d != 0 && dim > 0) || (d == 0 && dim != 1) {
                    return Err(AiError::NotAugmentable(i));
                }
            }
            for j in 0..n {
                for d in self.hom[i][j].degrees().collect::<Vec<_>>() {
                    let dim = self.dim(i, j, d);
                    let red = if i == j && d == 0 { dim - 1 } else { dim };
                    if red > 0 {
                        reduced.insert((i, j, d), red);
                    }
                }
            }
        }
        Ok(Augmentation {
            reduced_dims: reduced,
        })
    }

    /// Views a DG category as an A∞ category: `m₁ = ∂`, `m₂ = composition`,
    /// `m_{n≥3} = 0`.
    pub fn from_dg(c: &DGCategory) -> Self {
        let n = c.objects.len();
        let hom: Vec<Vec<GradedVS>> = (0..n)
            .map(|i| (0..n).map(|j| c.hom(i, j).space.clone()).collect())
            .collect();
        let mut a = AInfinityStructure::new(c.objects.clone(), hom, c.ordered);
        for i in 0..n {
            a.unit[i] = Some(c.unit_index(i));
        }
        for i in 0..n {
            for j in 0..n {
                for d in c.hom(i, j).space.degrees().collect::<Vec<_>>() {
                    let m = c.hom(i, j).diff(d);
                    if !m.is_zero() {
                        a.set_op(vec![i, j], vec![d], m).unwrap();
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let pdegs: Vec<i64> = c.hom(j, k).space.degrees().collect();
                    let qdegs: Vec<i64> = c.hom(i, j).space.degrees().collect();
                    for &p in &pdegs {
                        for &q in &qdegs {
                            let m = c.compose_matrix(i, j, k, p, q);
                            if m.is_zero() {
                                continue;
                            }
                            // compose columns are (g index)·dim_f + (f index);
                            // op columns want f fastest — same layout
                            a.set_op(vec![i, j, k], vec![q, p], m).unwrap();
                        }
                    }
                }
            }
        }
        a
    }
}
