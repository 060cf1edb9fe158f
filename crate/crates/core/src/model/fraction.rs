use num_rational::Ratio;

/// Exact rational used for the fairness bounds.
pub type Fraction = Ratio<i64>;

const MAX_DENOMINATOR: i64 = 1_000_000;
const MATCH_TOLERANCE: f64 = 1e-15;

/// Recovers the simplest fraction matching `x`, so `0.3` becomes `3/10` rather than
/// the binary expansion of the float. Falls back to the last convergent with a
/// denominator below one million.
pub fn fraction_from_f64(x: f64) -> Option<Fraction> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let target = x.abs();
    let (mut h_prev, mut h) = (1i64, target.floor() as i64);
    let (mut k_prev, mut k) = (0i64, 1i64);
    let mut rest = target - target.floor();
    for _ in 0..64 {
        if (target - h as f64 / k as f64).abs() <= MATCH_TOLERANCE || rest <= f64::EPSILON {
            break;
        }
        let inv = 1.0 / rest;
        let a = inv.floor();
        rest = inv - a;
        let a = a as i64;
        let h_next = a.checked_mul(h).and_then(|v| v.checked_add(h_prev))?;
        let k_next = a.checked_mul(k).and_then(|v| v.checked_add(k_prev))?;
        if k_next > MAX_DENOMINATOR {
            break;
        }
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    let value = Fraction::new(h, k);
    Some(if negative { -value } else { value })
}

/// Parses `"p/q"`, or a decimal literal.
pub fn parse_fraction(text: &str) -> Option<Fraction> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Fraction::new(num, den));
    }
    fraction_from_f64(text.parse().ok()?)
}

pub fn fraction_to_f64(f: &Fraction) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}

/// `count / size` compared against `bound` without floating point: returns the sign of
/// `count * den - num * size`.
pub(crate) fn compare_share(count: usize, size: usize, bound: &Fraction) -> std::cmp::Ordering {
    let lhs = count as i128 * *bound.denom() as i128;
    let rhs = *bound.numer() as i128 * size as i128;
    lhs.cmp(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_become_small_fractions() {
        assert_eq!(fraction_from_f64(0.3), Some(Fraction::new(3, 10)));
        assert_eq!(fraction_from_f64(0.5), Some(Fraction::new(1, 2)));
        assert_eq!(fraction_from_f64(1.0), Some(Fraction::new(1, 1)));
        assert_eq!(fraction_from_f64(0.0), Some(Fraction::new(0, 1)));
        assert_eq!(fraction_from_f64(3.0 / 7.0), Some(Fraction::new(3, 7)));
        assert_eq!(fraction_from_f64(0.333333), Some(Fraction::new(333333, 1000000)));
    }

    #[test]
    fn parses_text_forms() {
        assert_eq!(parse_fraction("2/6"), Some(Fraction::new(1, 3)));
        assert_eq!(parse_fraction(" 0.25 "), Some(Fraction::new(1, 4)));
        assert_eq!(parse_fraction("1/0"), None);
        assert_eq!(parse_fraction("abc"), None);
    }

    #[test]
    fn share_comparison_is_exact() {
        let third = Fraction::new(1, 3);
        assert_eq!(compare_share(1, 3, &third), std::cmp::Ordering::Equal);
        assert_eq!(compare_share(2, 6, &third), std::cmp::Ordering::Equal);
        assert_eq!(compare_share(3, 10, &third), std::cmp::Ordering::Less);
    }
}
