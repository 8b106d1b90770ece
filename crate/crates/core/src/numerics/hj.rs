use num_integer::Integer;

use super::NumericsError;

/// Hirzebruch-Jung ("minus") continued fraction of `p/q`:
/// `p/q = a1 - 1/(a2 - 1/(... - 1/an))` with every `ai >= 2`.
pub fn hj_expand(p: u64, q: u64) -> Result<Vec<u64>, NumericsError> {
    if q == 0 || q >= p {
        return Err(NumericsError::InvalidInput(format!("need 0 < q < p, got p={p}, q={q}")));
    }
    if p.gcd(&q) != 1 {
        return Err(NumericsError::InvalidInput(format!("gcd({p}, {q}) != 1")));
    }
    let (mut p, mut q) = (p, q);
    let mut chain = Vec::new();
    while q > 0 {
        let a = p.div_ceil(q);
        chain.push(a);
        (p, q) = (q, a * q - p);
    }
    Ok(chain)
}

/// Inverse of [`hj_expand`]: the coprime pair `(p, q)` with `p/q` equal to the chain.
pub fn hj_value(chain: &[u64]) -> Result<(u64, u64), NumericsError> {
    let Some((&last, rest)) = chain.split_last() else {
        return Err(NumericsError::InvalidInput("empty chain".into()));
    };
    if let Some(bad) = chain.iter().find(|&&a| a < 2) {
        return Err(NumericsError::InvalidInput(format!("chain entry {bad} < 2")));
    }
    // fold from the tail: value = num/den, a - den/num = (a*num - den)/num
    let (mut num, mut den) = (last, 1u64);
    for &a in rest.iter().rev() {
        let next = a
            .checked_mul(num)
            .and_then(|x| x.checked_sub(den))
            .ok_or(NumericsError::Overflow("hj_value"))?;
        (num, den) = (next, num);
    }
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_examples() {
        assert_eq!(hj_expand(7, 3).unwrap(), vec![3, 2, 2]);
        assert_eq!(hj_expand(22, 9).unwrap(), vec![3, 2, 5]);
        assert_eq!(hj_expand(11, 1).unwrap(), vec![11]);
        assert_eq!(hj_expand(5, 4).unwrap(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn value_examples() {
        assert_eq!(hj_value(&[3, 2, 2]).unwrap(), (7, 3));
        assert_eq!(hj_value(&[2]).unwrap(), (2, 1));
        assert_eq!(hj_value(&[3, 2, 10]).unwrap(), (47, 19));
    }

    #[test]
    fn family_chain_is_three_two_k() {
        for k in 2..=30u64 {
            assert_eq!(hj_expand(5 * k - 3, 2 * k - 1).unwrap(), vec![3, 2, k]);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(hj_expand(6, 4).is_err());
        assert!(hj_expand(3, 5).is_err());
        assert!(hj_expand(4, 0).is_err());
        assert!(hj_value(&[]).is_err());
        assert!(hj_value(&[3, 1]).is_err());
    }
}
