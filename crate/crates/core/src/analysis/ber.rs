use crate::error::{Error, Result};

/// Number of positions where the two bit streams differ.
pub fn bit_errors(tx: &[u8], rx: &[u8]) -> Result<u64> {
    if tx.len() != rx.len() {
        return Err(Error::invalid(format!("bit streams differ in length: {} vs {}", tx.len(), rx.len())));
    }
    Ok(tx.iter().zip(rx).filter(|(a, b)| (*a & 1) != (*b & 1)).count() as u64)
}

/// Hamming distance over length.
pub fn ber(tx: &[u8], rx: &[u8]) -> Result<f64> {
    let errors = bit_errors(tx, rx)?;
    if tx.is_empty() {
        return Err(Error::invalid("bit error rate of an empty stream is undefined"));
    }
    Ok(errors as f64 / tx.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_rates() {
        let a: Vec<u8> = (0..1000).map(|i| (i * 7 % 3 == 0) as u8).collect();
        assert_eq!(ber(&a, &a).unwrap(), 0.0);
        let flipped: Vec<u8> = a.iter().map(|b| 1 - b).collect();
        assert_eq!(ber(&a, &flipped).unwrap(), 1.0);
        let mut three = a.clone();
        for i in [3, 500, 999] {
            three[i] ^= 1;
        }
        assert_eq!(ber(&a, &three).unwrap(), 0.003);
        assert!(ber(&a, &a[1..]).is_err());
        assert!(ber(&[], &[]).is_err());
    }
}
