use std::cmp::Ordering;
use std::fmt;

/// A monomial `X1^e1 * ... * Xn^en`, stored as its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        Monomial { exponents, degree }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exponents: vec![0; n], degree: 0 }
    }

    /// The indeterminate `X_{var+1}` (zero-based `var`).
    pub fn var(n: usize, var: usize) -> Self {
        let mut exponents = vec![0; n];
        exponents[var] = 1;
        Monomial { exponents, degree: 1 }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exponents.iter().all(|&e| e <= 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n(), other.n());
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Monomial { exponents, degree: self.degree + other.degree }
    }

    /// Graded lexicographic comparison with `X1 > X2 > ... > Xn`.
    pub fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exponents.cmp(&other.exponents))
    }

    /// All monomials of total degree exactly `d` in `n` indeterminates,
    /// listed in descending lexicographic order (`X1^d` first).
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; n];
        fill_degree(&mut current, 0, d, &mut out);
        out
    }

    /// Renders with `X` for the single indeterminate when `n == 1`,
    /// `X1 .. Xn` otherwise; `1` for the constant monomial.
    pub fn render(&self) -> String {
        if self.degree == 0 {
            return "1".to_string();
        }
        let single = self.n() == 1;
        let mut factors = Vec::new();
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = if single { "X".to_string() } else { format!("X{}", i + 1) };
            if e == 1 {
                factors.push(name);
            } else {
                factors.push(format!("{name}^{e}"));
            }
        }
        factors.join("*")
    }
}

fn fill_degree(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    let n = current.len();
    if pos + 1 == n {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill_degree(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_is_cached_sum() {
        let m = Monomial::new(vec![2, 0, 3]);
        assert_eq!(m.degree(), 5);
        assert_eq!(m.n(), 3);
    }

    #[test]
    fn degree_listing_is_lex_descending() {
        let d2: Vec<_> = Monomial::all_of_degree(2, 2).iter().map(|m| m.render()).collect();
        assert_eq!(d2, vec!["X1^2", "X1*X2", "X2^2"]);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
    }

    #[test]
    fn grlex_orders_by_degree_first() {
        let x1 = Monomial::var(2, 0);
        let x2 = Monomial::var(2, 1);
        let x2sq = x2.mul(&x2);
        assert_eq!(x1.cmp_grlex(&x2), Ordering::Greater);
        assert_eq!(x2sq.cmp_grlex(&x1), Ordering::Greater);
        assert_eq!(Monomial::one(2).cmp_grlex(&x2), Ordering::Less);
    }

    #[test]
    fn render_single_variable() {
        assert_eq!(Monomial::new(vec![3]).render(), "X^3");
        assert_eq!(Monomial::new(vec![1]).render(), "X");
        assert_eq!(Monomial::one(1).render(), "1");
    }
}
