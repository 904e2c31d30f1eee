//! Built-in example quivers: the surface-collection fixtures shipped with the
//! CLI are generated from these builders, and the test suite uses them
//! directly.
//!
//! The geometry behind them: X is the blow-up of P² in a length-2 subscheme
//! supported at a point, with exceptional collection
//! ⟨O, O(E₂), O(E₁+E₂), O(H), O(2H)⟩; Y is the blow-up of P² in two distinct
//! points; Δ(t) interpolates between the two DG quivers.

use num_traits::Zero;

use crate::dgcore::DGQuiver;
use crate::surfaces::{DivisorClass, PicardLattice};
use crate::{rat, Rat};

const X_OBJECTS: [&str; 5] = ["O", "O(E2)", "O(E1+E2)", "O(H)", "O(2H)"];

/// The DG quiver of ⟨O, O(E₂), O(E₁+E₂), O(H), O(2H)⟩ on X: β̄ in degree 1,
/// ∂ε_i = γ_i β̄, with the ∂-closed relation set (the t = 0 member of the
/// Δ(t) family).
pub fn x_quiver() -> DGQuiver {
    delta_quiver(rat(0))
}

/// The same collection presented without the ε arrows: relations kill γ_i β̄
/// directly instead of trivializing them by a differential.
pub fn x_first_quiver() -> DGQuiver {
    let mut q = DGQuiver::new(X_OBJECTS.iter().map(|s| s.to_string()).collect(), true);
    q.add_arrow("alpha", 0, 1, 0);
    q.add_arrow("eta", 0, 3, 0);
    q.add_arrow("beta", 1, 2, 0);
    q.add_arrow("betabar", 1, 2, 1);
    q.add_arrow("gam1", 2, 3, 0);
    q.add_arrow("gam2", 2, 3, 0);
    q.add_arrow("del1", 3, 4, 0);
    q.add_arrow("del2", 3, 4, 0);
    q.add_arrow("del3", 3, 4, 0);
    for (lhs, rhs) in [
        (&["del1", "gam2"][..], &["del2", "gam1"][..]),
        (&["del1", "eta"][..], &["del3", "gam1", "beta", "alpha"][..]),
        (&["del2", "eta"][..], &["del3", "gam2", "beta", "alpha"][..]),
    ] {
        let r = q.path_sum(&[(1, lhs), (-1, rhs)]).unwrap();
        q.add_relation(r);
    }
    for p in [
        &["betabar", "alpha"][..],
        &["gam1", "betabar"][..],
        &["gam2", "betabar"][..],
    ] {
        let r = q.path_sum(&[(1, p)]).unwrap();
        q.add_relation(r);
    }
    q
}

/// The quiver of ⟨O, V, O(E₁+E₂), O(H), O(2H)⟩ where V is the nontrivial
/// extension of O(E₂) by O(E₁+E₂). Not exceptional: φ₁ points backward.
pub fn v_quiver() -> DGQuiver {
    let objects = ["O", "V", "O(E1+E2)", "O(H)", "O(2H)"];
    let mut q = DGQuiver::new(objects.iter().map(|s| s.to_string()).collect(), false);
    q.add_arrow("zeta", 0, 1, 0);
    q.add_arrow("betaphi2", 1, 2, 0);
    q.add_arrow("phi1", 2, 1, 0);
    q.add_arrow("iota1", 1, 3, 0);
    q.add_arrow("iota2", 1, 3, 0);
    q.add_arrow("del1", 3, 4, 0);
    q.add_arrow("del2", 3, 4, 0);
    q.add_arrow("del3", 3, 4, 0);
    let r = q.path_sum(&[(1, &["iota2", "zeta"])]).unwrap();
    q.add_relation(r);
    let r = q.path_sum(&[(1, &["betaphi2", "phi1"])]).unwrap();
    q.add_relation(r);
    let r = q
        .path_sum(&[
            (1, &["del1", "iota1", "zeta"]),
            (-1, &["del3", "iota1", "phi1", "betaphi2", "zeta"]),
        ])
        .unwrap();
    q.add_relation(r);
    let r = q
        .path_sum(&[
            (1, &["del1", "iota2"]),
            (1, &["del3", "iota2", "phi1", "betaphi2"]),
            (-1, &["del2", "iota1"]),
        ])
        .unwrap();
    q.add_relation(r);
    q
}

/// The ordinary quiver of ⟨O, O(F₂), O(F₁), O(H), O(2H)⟩ on Y.
pub fn y_quiver() -> DGQuiver {
    let objects = ["O", "O(F2)", "O(F1)", "O(H)", "O(2H)"];
    let mut q = DGQuiver::new(objects.iter().map(|s| s.to_string()).collect(), true);
    q.add_arrow("alpha", 0, 1, 0);
    q.add_arrow("eta", 0, 2, 0);
    q.add_arrow("eps1", 1, 3, 0);
    q.add_arrow("eps2", 1, 3, 0);
    q.add_arrow("gam1", 2, 3, 0);
    q.add_arrow("gam2", 2, 3, 0);
    q.add_arrow("del1", 3, 4, 0);
    q.add_arrow("del2", 3, 4, 0);
    q.add_arrow("del3", 3, 4, 0);
    for (lhs, rhs) in [
        (&["del1", "gam2"][..], &["del2", "gam1"][..]),
        (&["del3", "eps2"][..], &["del2", "eps1"][..]),
        (&["eps2", "alpha"][..], &["gam2", "eta"][..]),
        (&["del3", "gam1", "eta"][..], &["del1", "eps1", "alpha"][..]),
    ] {
        let r = q.path_sum(&[(1, lhs), (-1, rhs)]).unwrap();
        q.add_relation(r);
    }
    q
}

/// The deformation family Δ(t): ∂β = t β̄, ∂ε_i = γ_i β̄. At t = 0 this is
/// the X quiver; for t ≠ 0 its cohomology is concentrated in degree 0 and
/// collapses to the Y quiver algebra.
pub fn delta_quiver(t: Rat) -> DGQuiver {
    let mut q = DGQuiver::new(X_OBJECTS.iter().map(|s| s.to_string()).collect(), true);
    q.add_arrow("alpha", 0, 1, 0);
    q.add_arrow("beta", 1, 2, 0);
    q.add_arrow("betabar", 1, 2, 1);
    q.add_arrow("eps1", 1, 3, 0);
    q.add_arrow("eps2", 1, 3, 0);
    q.add_arrow("gam1", 2, 3, 0);
    q.add_arrow("gam2", 2, 3, 0);
    q.add_arrow("del1", 3, 4, 0);
    q.add_arrow("del2", 3, 4, 0);
    q.add_arrow("del3", 3, 4, 0);
    if !t.is_zero() {
        let mut d = q.path_sum(&[(1, &["betabar"])]).unwrap();
        d.terms[0].0 = t.clone();
        q.set_differential("beta", d).unwrap();
    }
    let d = q.path_sum(&[(1, &["gam1", "betabar"])]).unwrap();
    q.set_differential("eps1", d).unwrap();
    let d = q.path_sum(&[(1, &["gam2", "betabar"])]).unwrap();
    q.set_differential("eps2", d).unwrap();
    let r = q.path_sum(&[(1, &["eps2", "alpha"])]).unwrap();
    q.add_relation(r);
    let r = q.path_sum(&[(1, &["betabar", "alpha"])]).unwrap();
    q.add_relation(r);
    let r = q
        .path_sum(&[
            (1, &["del1", "eps1", "alpha"]),
            (-1, &["del3", "gam1", "beta", "alpha"]),
        ])
        .unwrap();
    q.add_relation(r);
    let r = q
        .path_sum(&[(1, &["del1", "gam2"]), (-1, &["del2", "gam1"])])
        .unwrap();
    q.add_relation(r);
    let mut r = q
        .path_sum(&[
            (1, &["del1", "eps2"]),
            (1, &["del3", "gam2", "beta"]),
            (-1, &["del2", "eps1"]),
            (-1, &["del3", "eps2"]),
        ])
        .unwrap();
    r.terms[3].0 = -t;
    if r.terms[3].0.is_zero() {
        r.terms.pop();
    }
    q.add_relation(r);
    q
}

/// The Picard lattice of X in the basis (E₁, E₂, H): E₁ is the strict
/// transform of the first exceptional curve, E₂ the second exceptional
/// curve, H the pullback of a line. K = −3H + E₁ + 2E₂.
pub fn x_lattice() -> PicardLattice {
    PicardLattice::new(
        vec!["E1".into(), "E2".into(), "H".into()],
        vec![vec![-2, 1, 0], vec![1, -1, 0], vec![0, 0, 1]],
        DivisorClass(vec![1, 2, -3]),
    )
    .unwrap()
}

/// Divisor classes of the X collection ⟨O, O(E₂), O(E₁+E₂), O(H), O(2H)⟩ in
/// the basis of [`x_lattice`].
pub fn x_divisors() -> Vec<DivisorClass> {
    [[0, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [0, 0, 2]]
        .iter()
        .map(|c| DivisorClass(c.to_vec()))
        .collect()
}
