use super::CongruenceError;

/// The Jacobi symbol `(a/n)` for odd `n >= 1`, by binary reciprocity.
pub fn jacobi_symbol(a: i64, n: u64) -> Result<i8, CongruenceError> {
    if n.is_multiple_of(2) {
        return Err(CongruenceError::EvenModulus(n));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        // (2/n) = -1 iff n = 3, 5 (mod 8)
        if twos % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        // reciprocity flips iff both are 3 (mod 4)
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}
