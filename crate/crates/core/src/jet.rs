//! Truncated multivariate Taylor series in four independent formal variables
//! `(α1, α2, α1*, α2*)`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::C64;

/// Graded monomial table shared by all jets of one order.
#[derive(Debug)]
struct Table {
    order: usize,
    exps: Vec<[u8; 4]>,
    /// Dense lookup `(k1,k2,k3,k4) -> index` over the `(order+1)^4` box; `usize::MAX` when the degree exceeds `order`.
    lookup: Vec<usize>,
}

impl Table {
    fn new(order: usize) -> Self {
        let s = order + 1;
        let mut exps = Vec::new();
        let mut lookup = vec![usize::MAX; s * s * s * s];
        for deg in 0..=order {
            for a in 0..=deg {
                for b in 0..=deg - a {
                    for c in 0..=deg - a - b {
                        let d = deg - a - b - c;
                        lookup[((a * s + b) * s + c) * s + d] = exps.len();
                        exps.push([a as u8, b as u8, c as u8, d as u8]);
                    }
                }
            }
        }
        Self { order, exps, lookup }
    }

    fn index(&self, k: [usize; 4]) -> Option<usize> {
        if k.iter().sum::<usize>() > self.order {
            return None;
        }
        let s = self.order + 1;
        Some(self.lookup[((k[0] * s + k[1]) * s + k[2]) * s + k[3]])
    }
}

/// Jet of total degree `<= order`; products truncate.
#[derive(Debug, Clone)]
pub struct Jet4 {
    table: Arc<Table>,
    coeffs: Vec<C64>,
}

impl Jet4 {
    pub fn zero(order: usize) -> Self {
        let table = Arc::new(Table::new(order));
        let n = table.exps.len();
        Self { table, coeffs: vec![C64::from(0.0); n] }
    }

    fn zero_like(&self) -> Self {
        Self { table: self.table.clone(), coeffs: vec![C64::from(0.0); self.coeffs.len()] }
    }

    pub fn constant(order: usize, c: C64) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = c;
        j
    }

    /// The formal variable `k` (0: α1, 1: α2, 2: α1*, 3: α2*).
    pub fn var(order: usize, k: usize) -> Self {
        let mut j = Self::zero(order);
        if order > 0 {
            let mut e = [0; 4];
            e[k] = 1;
            let i = j.table.index(e).unwrap();
            j.coeffs[i] = C64::from(1.0);
        }
        j
    }

    /// Another variable sharing this jet's monomial table.
    pub fn var_like(&self, k: usize) -> Self {
        let mut j = self.zero_like();
        let mut e = [0; 4];
        e[k] = 1;
        if let Some(i) = j.table.index(e) {
            j.coeffs[i] = C64::from(1.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.table.order
    }

    /// Coefficient of `α1^k0 α2^k1 α1*^k2 α2*^k3`; zero beyond the order.
    pub fn coeff(&self, k: [usize; 4]) -> C64 {
        self.table.index(k).map_or(C64::from(0.0), |i| self.coeffs[i])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { table: self.table.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    fn same_table(&self, other: &Self) {
        assert_eq!(self.table.order, other.table.order, "jet orders differ");
    }

    /// `exp(self)`. The non-constant part is nilpotent under truncation, so
    /// the series terminates after `order` terms and is exact.
    pub fn exp(&self) -> Self {
        let c0 = self.coeffs[0];
        let mut g = self.clone();
        g.coeffs[0] = C64::from(0.0);
        let mut sum = self.zero_like();
        sum.coeffs[0] = C64::from(1.0);
        let mut term = sum.clone();
        for k in 1..=self.order() {
            term = (&term * &g).scale(C64::from(1.0 / k as f64));
            sum = &sum + &term;
        }
        sum.scale(c0.exp())
    }
}

impl Add for &Jet4 {
    type Output = Jet4;
    fn add(self, rhs: &Jet4) -> Jet4 {
        self.same_table(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Jet4 { table: self.table.clone(), coeffs }
    }
}

impl Sub for &Jet4 {
    type Output = Jet4;
    fn sub(self, rhs: &Jet4) -> Jet4 {
        self.same_table(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Jet4 { table: self.table.clone(), coeffs }
    }
}

impl Neg for &Jet4 {
    type Output = Jet4;
    fn neg(self) -> Jet4 {
        self.scale(C64::from(-1.0))
    }
}

impl Mul for &Jet4 {
    type Output = Jet4;
    fn mul(self, rhs: &Jet4) -> Jet4 {
        self.same_table(rhs);
        let t = &self.table;
        let mut out = self.zero_like();
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == C64::from(0.0) {
                continue;
            }
            let ei = t.exps[i];
            let di: usize = ei.iter().map(|&x| x as usize).sum();
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b == C64::from(0.0) {
                    continue;
                }
                let ej = t.exps[j];
                let dj: usize = ej.iter().map(|&x| x as usize).sum();
                // Monomials are stored by degree, so the rest are too high.
                if di + dj > t.order {
                    break;
                }
                let k = [
                    (ei[0] + ej[0]) as usize,
                    (ei[1] + ej[1]) as usize,
                    (ei[2] + ej[2]) as usize,
                    (ei[3] + ej[3]) as usize,
                ];
                let idx = t.index(k).unwrap();
                out.coeffs[idx] += a * b;
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Jet4 {
            type Output = Jet4;
            fn $f(self, rhs: Jet4) -> Jet4 {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
