use num_traits::Zero;

use crate::error::AlgebraError;
use crate::scalar::{binom_int, Rat};

/// `a^r_ijk = binom(2h_k + r - 1, r)^-1 binom(h_i + h_k - h_j + r - 1, r)`.
pub fn a_coeff(hi: i64, hj: i64, hk: i64, r: u32) -> Rat {
    binom_int(hi + hk - hj + r as i64 - 1, r) / binom_int(2 * hk + r as i64 - 1, r)
}

/// `p_{h_i,h_j,h_k}(m, n) = sum_{r+s=h(ijk)-1} a^r binom(m+n-h_k, r) binom(h_i-n-1, s)`.
pub fn p_poly(hi: i64, hj: i64, hk: i64, m: i64, n: i64) -> Result<Rat, AlgebraError> {
    let h = hi + hj - hk;
    if h < 1 {
        return Err(AlgebraError::ChannelWeight(h));
    }
    let top = (h - 1) as u32;
    let mut acc = Rat::zero();
    for r in 0..=top {
        let s = top - r;
        acc += a_coeff(hi, hj, hk, r) * binom_int(m + n - hk, r) * binom_int(hi - n - 1, s);
    }
    Ok(acc)
}

/// Coefficient of `(phi_k)_{m+n}` per unit `C_ij^k` in `[(phi_i)_m, (phi_j)_n]`.
///
/// The weights enter with `h_i` and `h_j` exchanged relative to [`p_poly`];
/// with that ordering `[L_m, W_n] = ((h-1)m - n) W_{m+n}` for a primary `W`.
pub fn channel_coefficient(hi: i64, hj: i64, hk: i64, m: i64, n: i64) -> Result<Rat, AlgebraError> {
    p_poly(hj, hi, hk, m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn anchors() {
        for delta in [3, 5, 7, 9] {
            assert_eq!(p_poly(delta, delta, 2 * delta - 2, 2 - delta, -delta).unwrap(), int(1));
        }
        assert_eq!(p_poly(3, 3, 4, -3, -4).unwrap(), rat(1, 2));
        assert_eq!(a_coeff(7, 3, 2, 0), int(1));
    }

    #[test]
    fn rejects_low_channel() {
        assert_eq!(p_poly(2, 2, 4, 0, 0), Err(AlgebraError::ChannelWeight(0)));
    }

    #[test]
    fn virasoro_channel() {
        for m in -5..=5 {
            for n in -5..=5 {
                assert_eq!(channel_coefficient(2, 2, 2, m, n).unwrap() * int(2), int(m - n));
            }
        }
    }

    #[test]
    fn primary_channel() {
        for h in 1..=9 {
            for m in -4..=4 {
                for n in -6..=6 {
                    let got = channel_coefficient(2, h, h, m, n).unwrap() * int(h);
                    assert_eq!(got, int((h - 1) * m - n), "h={h} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn exchange_symmetry() {
        for (hi, hj, hk) in [(3, 3, 4), (3, 3, 2), (3, 3, 1), (2, 3, 3), (3, 5, 4), (4, 2, 3)] {
            let h = hi + hj - hk;
            for m in -5..=5 {
                for n in -5..=5 {
                    let a = channel_coefficient(hi, hj, hk, m, n).unwrap();
                    let b = channel_coefficient(hj, hi, hk, n, m).unwrap();
                    let sign = if (h - 1) % 2 == 0 { int(1) } else { int(-1) };
                    assert_eq!(b, sign * a);
                }
            }
        }
    }
}
