//! Exact arbitrary-precision values: Stirling numbers of the second kind,
//! poly-Bernoulli numbers `B(n,k)` and the relatives `C(n,k)` and
//! `D(n,k) = ML(n,k)`.
//!
//! Everything is driven by a [`StirlingTable`] built once by the triangle
//! recurrence. The table is immutable afterwards and can be shared freely
//! between threads.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::count::Count;
use crate::error::{Error, Result};

/// Stirling numbers of the second kind `S(n, m)` for `0 <= m <= n <= max_n`,
/// with factorials and binomial coefficients up to the same bound.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    max_n: usize,
    stirling: Vec<Vec<BigUint>>,
    factorial: Vec<BigUint>,
    binomial: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Self {
        let mut stirling: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        stirling.push(vec![BigUint::one()]);
        for n in 1..=max_n {
            let prev = &stirling[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::zero());
            for m in 1..=n {
                let mut cell = if m < n { &prev[m] * m } else { BigUint::zero() };
                cell += &prev[m - 1];
                row.push(cell);
            }
            stirling.push(row);
        }

        let mut factorial = Vec::with_capacity(max_n + 1);
        factorial.push(BigUint::one());
        for m in 1..=max_n {
            let next = &factorial[m - 1] * m;
            factorial.push(next);
        }

        let mut binomial: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        binomial.push(vec![BigUint::one()]);
        for n in 1..=max_n {
            let prev = &binomial[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            for j in 1..n {
                row.push(&prev[j - 1] + &prev[j]);
            }
            row.push(BigUint::one());
            binomial.push(row);
        }

        StirlingTable {
            max_n,
            stirling,
            factorial,
            binomial,
        }
    }

    /// Smallest table that can evaluate every sequence at `(n, k)`.
    pub fn for_indices(n: usize, k: usize) -> Self {
        Self::new(n.max(k) + 1)
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::guard("table index", n, self.max_n));
        }
        Ok(())
    }

    fn s2(&self, n: usize, m: usize) -> &BigUint {
        &self.stirling[n][m]
    }

    /// Raw table cell; `None` outside `0 <= m <= n <= max_n`.
    pub fn entry(&self, n: usize, m: usize) -> Option<&BigUint> {
        self.stirling.get(n).and_then(|row| row.get(m))
    }

    pub fn stirling2(&self, n: usize, m: usize) -> Result<Count> {
        self.check(n)?;
        Ok(Count::new(self.entry(n, m).cloned().unwrap_or_default()))
    }

    pub fn factorial(&self, m: usize) -> Result<Count> {
        self.check(m)?;
        Ok(Count::new(self.factorial[m].clone()))
    }

    pub fn binomial(&self, n: usize, j: usize) -> Result<Count> {
        self.check(n)?;
        Ok(Count::new(
            self.binomial[n].get(j).cloned().unwrap_or_default(),
        ))
    }

    fn b_raw(&self, n: usize, k: usize) -> BigUint {
        (0..=n.min(k))
            .map(|m| {
                let f = &self.factorial[m];
                f * f * self.s2(n + 1, m + 1) * self.s2(k + 1, m + 1)
            })
            .sum()
    }

    /// `B(n,k) = sum_m (m!)^2 S(n+1, m+1) S(k+1, m+1)`.
    pub fn poly_bernoulli(&self, n: usize, k: usize) -> Result<Count> {
        self.check(n.max(k) + 1)?;
        Ok(Count::new(self.b_raw(n, k)))
    }

    /// `ML(n,k) = D(n,k) = sum_m (m!)^2 S(n, m) S(k, m)`.
    pub fn ml_degree(&self, n: usize, k: usize) -> Result<Count> {
        self.check(n.max(k))?;
        let sum = (0..=n.min(k))
            .map(|m| {
                let f = &self.factorial[m];
                f * f * self.s2(n, m) * self.s2(k, m)
            })
            .sum();
        Ok(Count::new(sum))
    }

    /// Double inclusion-exclusion over zero rows and zero columns of `B`.
    pub fn ml_degree_inclusion_exclusion(&self, n: usize, k: usize) -> Result<Count> {
        self.check(n.max(k) + 1)?;
        let mut acc = BigInt::zero();
        for m in 0..=n {
            for l in 0..=k {
                let term = &self.binomial[n][m] * &self.binomial[k][l] * self.b_raw(n - m, k - l);
                add_signed(&mut acc, (m + l) % 2 == 1, term);
            }
        }
        nonnegative(acc, "ml_degree_inclusion_exclusion", n, k)
    }

    /// `C(n,k)`: lonesum `n x k` matrices with no all-zero column.
    pub fn c_relative(&self, n: usize, k: usize) -> Result<Count> {
        self.check(n.max(k) + 1)?;
        let mut acc = BigInt::zero();
        for j in 0..=k {
            let term = &self.binomial[k][j] * self.b_raw(n, k - j);
            add_signed(&mut acc, j % 2 == 1, term);
        }
        nonnegative(acc, "c_relative", n, k)
    }
}

fn add_signed(acc: &mut BigInt, negative: bool, term: BigUint) {
    let sign = if negative { Sign::Minus } else { Sign::Plus };
    *acc += BigInt::from_biguint(sign, term);
}

fn nonnegative(acc: BigInt, what: &'static str, n: usize, k: usize) -> Result<Count> {
    if acc.is_negative() {
        return Err(Error::NegativeSum { what, n, k });
    }
    Ok(Count::new(acc.into_parts().1))
}

/// `S(n, m)` through a freshly sized table.
pub fn stirling2(n: usize, m: usize) -> Count {
    StirlingTable::new(n)
        .stirling2(n, m)
        .expect("table sized for n")
}

pub fn poly_bernoulli(n: usize, k: usize) -> Count {
    StirlingTable::for_indices(n, k)
        .poly_bernoulli(n, k)
        .expect("table sized for (n, k)")
}

pub fn ml_degree(n: usize, k: usize) -> Count {
    StirlingTable::for_indices(n, k)
        .ml_degree(n, k)
        .expect("table sized for (n, k)")
}

pub fn c_relative(n: usize, k: usize) -> Result<Count> {
    StirlingTable::for_indices(n, k).c_relative(n, k)
}

/// `S(n, m)` from `m! S(n, m) = sum_j (-1)^j C(m, j) (m - j)^n`, sharing no
/// code with the recurrence so the two can check each other.
pub fn stirling2_explicit(n: usize, m: usize) -> Result<Count> {
    let mut acc = BigInt::zero();
    let mut binom = BigInt::one();
    let exp = u32::try_from(n).map_err(|_| Error::guard("stirling2_explicit n", n, u32::MAX))?;
    for j in 0..=m {
        let base = BigInt::from(m - j);
        let term = &binom * num_traits::pow::Pow::pow(&base, exp);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        binom = binom * (m - j) / (j + 1);
    }
    if acc.is_negative() {
        return Err(Error::NegativeSum {
            what: "stirling2_explicit",
            n,
            k: m,
        });
    }
    let m_fact: BigInt = (1..=m).map(BigInt::from).product();
    Ok(Count::new((acc / m_fact).into_parts().1))
}
