use num_traits::One;

use super::rational::Rational;

/// `(a; q)_j = (1 - a)(1 - aq)...(1 - aq^{j-1})`, with `(a; q)_0 = 1`.
pub fn qpochhammer(a: &Rational, q: &Rational, j: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..j {
        acc *= Rational::one() - &term;
        term *= q;
    }
    acc
}
