//! Addition and multiplication tables of the finite fields of order at most 9.
//!
//! Element `i` encodes the polynomial whose coefficients are the base-`p`
//! digits of `i`, least significant first, reduced modulo a fixed irreducible.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    pub order: usize,
    pub characteristic: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

/// Monic irreducible polynomial for each non-prime order, low coefficient first.
fn modulus(order: usize) -> Option<(usize, &'static [usize])> {
    match order {
        4 => Some((2, &[1, 1, 1])),
        8 => Some((2, &[1, 1, 0, 1])),
        9 => Some((3, &[1, 0, 1])),
        _ => None,
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn digits(mut x: usize, p: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FiniteField {
    pub fn new(order: usize) -> Result<Self> {
        if is_prime(order) {
            let p = order;
            let add = (0..p).map(|a| (0..p).map(|b| (a + b) % p).collect()).collect();
            let mul = (0..p).map(|a| (0..p).map(|b| (a * b) % p).collect()).collect();
            return Ok(FiniteField { order, characteristic: p, add, mul });
        }
        let (p, m) = modulus(order)
            .ok_or_else(|| Error::InvalidArgument(format!("no field of order {order} available")))?;
        let deg = m.len() - 1;
        let add = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| {
                        let (da, db) = (digits(a, p, deg), digits(b, p, deg));
                        let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                        undigits(&s, p)
                    })
                    .collect()
            })
            .collect();
        let mul = (0..order)
            .map(|a| (0..order).map(|b| poly_mul(a, b, p, m)).collect())
            .collect();
        Ok(FiniteField { order, characteristic: p, add, mul })
    }

    pub fn one(&self) -> usize {
        1
    }
}

fn poly_mul(a: usize, b: usize, p: usize, m: &[usize]) -> usize {
    let deg = m.len() - 1;
    let (da, db) = (digits(a, p, deg), digits(b, p, deg));
    let mut prod = vec![0usize; 2 * deg];
    for (i, x) in da.iter().enumerate() {
        for (j, y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (deg..prod.len()).rev() {
        let c = prod[top];
        if c != 0 {
            // subtract c * x^(top-deg) * m
            for (k, &mk) in m.iter().enumerate() {
                let idx = top - deg + k;
                prod[idx] = (prod[idx] + p * p - (c * mk) % p) % p;
            }
        }
    }
    undigits(&prod[..deg], p)
}
