//! Ready-made specs for the algebras used throughout the crate.

use super::spec::{AlgebraSpec, FieldExpr, FieldId};
use crate::scalar::{int, rat, Poly, Rat};

/// `c_{p,1} = 1 - 6(p-1)^2/p`.
pub fn central_charge_p1(p: i64) -> Rat {
    int(1) - rat(6 * (p - 1) * (p - 1), p)
}

/// Channel constants of the c = -2 triplet `[W^a, W^b]` in a Cartesian basis.
///
/// `a = b`: central term `d_w`, `C^T = c_t`, `C^Lambda = c_lambda`.
/// `a != b`: `C^{W^c} = I eps_abc k_w` and `C^{V^c} = I eps_abc k_v`, where
/// `V^c = N(T, W^c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TripletConstants {
    pub d_w: Poly,
    pub c_t: Poly,
    pub c_lambda: Poly,
    pub k_w: Poly,
    pub k_v: Poly,
}

impl TripletConstants {
    /// Every constant is a free symbol: `dW`, `cT`, `cL`, `kW`, `kV`.
    pub fn symbolic() -> Self {
        TripletConstants {
            d_w: Poly::var("dW"),
            c_t: Poly::var("cT"),
            c_lambda: Poly::var("cL"),
            k_w: Poly::var("kW"),
            k_v: Poly::var("kV"),
        }
    }

    pub fn symbols() -> [&'static str; 5] {
        ["dW", "cT", "cL", "kW", "kV"]
    }
}

/// Sign of the Levi-Civita symbol on `{0, 1, 2}`.
pub fn epsilon(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// The triplet algebra at c = -2: `T`, `W1`, `W2`, `W3` (weight 3) and the
/// composites `Lambda = N(T, T)` and `V1..V3 = N(T, W^c)`. Both orders of
/// every generator pair are declared explicitly.
pub fn triplet_p2(k: &TripletConstants) -> AlgebraSpec {
    let c = Poly::from_int(-2);
    let mut spec = AlgebraSpec::new(c.clone());
    let t = spec.add_generator("T", 2).expect("fresh name");
    let w: Vec<FieldId> = (1..=3)
        .map(|a| spec.add_generator(&format!("W{a}"), 3).expect("fresh name"))
        .collect();
    let lambda = spec.add_composite("Lambda", FieldExpr::qp_nop(t, t, 0)).expect("valid composite");
    let v: Vec<FieldId> = (0..3)
        .map(|a| spec.add_composite(&format!("V{}", a + 1), FieldExpr::qp_nop(t, w[a], 0)).expect("valid composite"))
        .collect();
    spec.set_d(t, t, c.scale(&rat(1, 2)));
    spec.add_constant(t, t, t, Poly::from_int(2)).expect("valid channel");
    for a in 0..3 {
        spec.add_constant(t, w[a], w[a], Poly::from_int(3)).expect("valid channel");
        spec.add_constant(w[a], t, w[a], Poly::from_int(3)).expect("valid channel");
        spec.set_d(w[a], w[a], k.d_w.clone());
        spec.add_constant(w[a], w[a], t, k.c_t.clone()).expect("valid channel");
        spec.add_constant(w[a], w[a], lambda, k.c_lambda.clone()).expect("valid channel");
        for b in 0..3 {
            if a == b {
                continue;
            }
            let cc = 3 - a - b;
            let e = Poly::i().scale(&int(epsilon(a, b, cc)));
            spec.add_constant(w[a], w[b], w[cc], &e * &k.k_w).expect("valid channel");
            spec.add_constant(w[a], w[b], v[cc], &e * &k.k_v).expect("valid channel");
        }
    }
    spec
}

/// Symbolic constants of the single-W algebra used by the derivation.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleWConstants {
    /// `C_WW^{N(T^(delta-1))}`.
    pub c_top: Poly,
    /// `C_WW^T`.
    pub c_t: Poly,
    /// `d_WW`.
    pub d_w: Poly,
}

impl SingleWConstants {
    pub fn symbolic() -> Self {
        SingleWConstants {
            c_top: Poly::var("C"),
            c_t: Poly::var("cT"),
            d_w: Poly::var("dW"),
        }
    }
}

/// `T` and one primary `W` of odd weight `delta >= 3` at `c_{p,1}`, with
/// composites `N2 = N(T, T)` and `Nk = N(T, N(k-1))` up to `k = delta - 1`.
///
/// Only the channels needed to reach words of length `delta - 1` are
/// declared: `[W, W]` carries the central term, `T` and `N(delta-1)`, and
/// `[T, Nk]` carries the `Nk` channel alone. Channels of odd `h(ijk)` in
/// `[W, W]` vanish identically.
pub fn single_w(delta: i64, k: &SingleWConstants) -> AlgebraSpec {
    assert!(delta >= 3 && delta % 2 == 1, "delta must be odd and at least 3");
    let p = (delta + 1) / 2;
    let c = Poly::constant(central_charge_p1(p));
    let mut spec = AlgebraSpec::virasoro(c);
    let t = spec.lookup("T").expect("declared");
    let w = spec.add_generator("W", delta).expect("fresh name");
    spec.add_constant(t, w, w, Poly::from_int(delta)).expect("valid channel");
    let mut prev = t;
    for j in 2..delta {
        let nk = spec.add_composite(&format!("N{j}"), FieldExpr::qp_nop(t, prev, 0)).expect("valid composite");
        spec.add_constant(nk, t, nk, Poly::from_int(2 * j)).expect("valid channel");
        prev = nk;
    }
    spec.set_d(w, w, k.d_w.clone());
    spec.add_constant(w, w, t, k.c_t.clone()).expect("valid channel");
    spec.add_constant(w, w, prev, k.c_top.clone()).expect("valid channel");
    spec
}
