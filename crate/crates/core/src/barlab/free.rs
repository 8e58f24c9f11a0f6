//! Monomial arithmetic for the free graded-commutative algebras S, Λ and Γ.

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use super::Coeff;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FreeKind {
    Symmetric,
    Exterior,
    DividedPower,
}

impl FreeKind {
    pub fn symbol(self) -> &'static str {
        match self {
            FreeKind::Symmetric => "S",
            FreeKind::Exterior => "Λ",
            FreeKind::DividedPower => "Γ",
        }
    }
}

/// Exponent vectors of total exponent `w` for `rank` generators, lexicographic.
pub fn monomials(kind: FreeKind, rank: usize, w: usize) -> Vec<Vec<usize>> {
    let cap = if kind == FreeKind::Exterior { 1 } else { w };
    let mut out = Vec::new();
    let mut cur = vec![0; rank];
    fn rec(i: usize, left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in (0..=left.min(cap)).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cap, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, w, cap, &mut cur, &mut out);
    out
}

fn sign(odd: bool) -> Coeff {
    if odd {
        -1
    } else {
        1
    }
}

fn binom(n: usize, k: usize) -> Coeff {
    binomial(n as Coeff, k as Coeff)
}

/// Product of two monomials; `None` means the product is zero.
pub fn mono_product(kind: FreeKind, gen_degree: usize, a: &[usize], b: &[usize]) -> Option<(Vec<usize>, Coeff)> {
    let sum: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    match kind {
        FreeKind::Symmetric => Some((sum, 1)),
        FreeKind::Exterior => {
            if sum.iter().any(|e| *e > 1) {
                return None;
            }
            // x_A x_B: move each generator of B past the generators of A above it
            let mut swaps = 0;
            for (j, bj) in b.iter().enumerate() {
                if *bj == 1 {
                    swaps += a[j + 1..].iter().filter(|x| **x == 1).count();
                }
            }
            Some((sum, sign(swaps * gen_degree * gen_degree % 2 == 1)))
        }
        FreeKind::DividedPower => {
            let c: Coeff = a.iter().zip(b).map(|(x, y)| binom(x + y, *x)).product();
            Some((sum, c))
        }
    }
}

/// Coproduct of a monomial as `(left, right, coefficient)` terms.
pub fn mono_coproduct(kind: FreeKind, gen_degree: usize, e: &[usize]) -> Vec<(Vec<usize>, Vec<usize>, Coeff)> {
    let mut out = Vec::new();
    let mut a = vec![0; e.len()];
    loop {
        let b: Vec<usize> = e.iter().zip(&a).map(|(x, y)| x - y).collect();
        let c = match kind {
            FreeKind::Symmetric => e.iter().zip(&a).map(|(x, y)| binom(*x, *y)).product(),
            FreeKind::DividedPower => 1,
            FreeKind::Exterior => {
                // x_S = ± x_A x_B; the sign is that of the product x_A · x_B
                mono_product(kind, gen_degree, &a, &b).map(|(_, s)| s).unwrap_or(0)
            }
        };
        out.push((a.clone(), b, c));
        // next a ≤ e in mixed radix
        let mut i = 0;
        loop {
            if i == e.len() {
                return out;
            }
            if a[i] < e[i] {
                a[i] += 1;
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

pub fn mono_label(kind: FreeKind, e: &[usize]) -> String {
    if e.iter().all(|x| *x == 0) {
        return "1".into();
    }
    let mut s = String::new();
    for (j, a) in e.iter().enumerate() {
        match (kind, *a) {
            (_, 0) => {}
            (FreeKind::DividedPower, a) => s.push_str(&format!("γ{a}(x{})", j + 1)),
            (_, 1) => s.push_str(&format!("x{}", j + 1)),
            (_, a) => s.push_str(&format!("x{}^{a}", j + 1)),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_signs() {
        let (m, s) = mono_product(FreeKind::Exterior, 1, &[0, 1], &[1, 0]).unwrap();
        assert_eq!(m, vec![1, 1]);
        assert_eq!(s, -1);
        assert!(mono_product(FreeKind::Exterior, 1, &[1, 0], &[1, 0]).is_none());
    }

    #[test]
    fn divided_power_product() {
        let (m, c) = mono_product(FreeKind::DividedPower, 2, &[2], &[1]).unwrap();
        assert_eq!(m, vec![3]);
        assert_eq!(c, 3);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(FreeKind::Exterior, 3, 2).len(), 3);
        assert_eq!(monomials(FreeKind::Symmetric, 2, 3).len(), 4);
        assert_eq!(mono_coproduct(FreeKind::Symmetric, 2, &[2, 1]).len(), 6);
    }
}
