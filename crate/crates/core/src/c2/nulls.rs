use crate::algebra::presets::epsilon;
use crate::algebra::{Engine, State};
use crate::error::AlgebraError;
use crate::scalar::{rat, Poly};

/// Coefficients of the level-6 singular vectors
///
/// `N^ab = W^a_-3 W^b_-3 Ω - δ_ab (l2_cubed L_-2^3 + l3_squared L_-3^2 + l4_l2 L_-4 L_-2 - l6 L_-6) Ω
///        + I ε_abc (w4_l2 W^c_-4 L_-2 + w6 W^c_-6) Ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct NullCoefficients {
    pub l2_cubed: Poly,
    pub l3_squared: Poly,
    pub l4_l2: Poly,
    pub l6: Poly,
    pub w4_l2: Poly,
    pub w6: Poly,
}

impl Default for NullCoefficients {
    /// The known values at c = -2.
    fn default() -> Self {
        NullCoefficients {
            l2_cubed: Poly::constant(rat(8, 9)),
            l3_squared: Poly::constant(rat(19, 36)),
            l4_l2: Poly::constant(rat(14, 9)),
            l6: Poly::constant(rat(16, 9)),
            w4_l2: Poly::from_int(-2),
            w6: Poly::constant(rat(5, 4)),
        }
    }
}

impl NullCoefficients {
    pub const NAMES: [&'static str; 6] = ["l2_cubed", "l3_squared", "l4_l2", "l6", "w4_l2", "w6"];

    pub fn get(&self, name: &str) -> Option<&Poly> {
        Some(match name {
            "l2_cubed" => &self.l2_cubed,
            "l3_squared" => &self.l3_squared,
            "l4_l2" => &self.l4_l2,
            "l6" => &self.l6,
            "w4_l2" => &self.w4_l2,
            "w6" => &self.w6,
            _ => return None,
        })
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Poly> {
        Some(match name {
            "l2_cubed" => &mut self.l2_cubed,
            "l3_squared" => &mut self.l3_squared,
            "l4_l2" => &mut self.l4_l2,
            "l6" => &mut self.l6,
            "w4_l2" => &mut self.w4_l2,
            "w6" => &mut self.w6,
            _ => return None,
        })
    }

    /// Every coefficient a free symbol named after its slot.
    pub fn symbolic() -> Self {
        let mut k = Self::default();
        for name in Self::NAMES {
            *k.get_mut(name).expect("known name") = Poly::var(name);
        }
        k
    }
}

/// A declared null vector `N^ab` (Cartesian indices 1..=3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullVector {
    pub id: String,
    pub a: usize,
    pub b: usize,
}

impl NullVector {
    pub fn new(a: usize, b: usize) -> Self {
        NullVector { id: format!("N{a}{b}"), a, b }
    }
}

/// Builds `N^ab` in the vacuum module of a spec with generators `T`, `W1`, `W2`, `W3`.
pub fn null_vector(engine: &Engine, k: &NullCoefficients, a: usize, b: usize) -> Result<State, AlgebraError> {
    if !(1..=3).contains(&a) || !(1..=3).contains(&b) {
        return Err(AlgebraError::Spec { location: "nulls".into(), msg: format!("index pair ({a}, {b}) out of range") });
    }
    let w = |c: usize, idx: i64| engine.mode(&format!("W{c}"), idx);
    let l = |idx: i64| engine.mode("T", idx);
    let mut out = engine.normal_order(&[w(a, -3)?, w(b, -3)?])?;
    if a == b {
        let vir = [
            (vec![l(-2)?, l(-2)?, l(-2)?], k.l2_cubed.clone()),
            (vec![l(-3)?, l(-3)?], k.l3_squared.clone()),
            (vec![l(-4)?, l(-2)?], k.l4_l2.clone()),
            (vec![l(-6)?], -k.l6.clone()),
        ];
        for (word, c) in vir {
            out.add_scaled(&engine.normal_order(&word)?, &-c);
        }
    } else {
        let c = 6 - a - b;
        let e = Poly::i().scale(&rat(epsilon(a - 1, b - 1, c - 1), 1));
        out.add_scaled(&engine.normal_order(&[w(c, -4)?, l(-2)?])?, &(&e * &k.w4_l2));
        out.add_scaled(&engine.normal_order(&[w(c, -6)?])?, &(&e * &k.w6));
    }
    Ok(out)
}
