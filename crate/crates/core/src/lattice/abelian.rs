use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{cokernel, IntMatrix, LatticeError};

/// Finitely generated abelian group ℤ/d₁ ⊕ … ⊕ ℤ/d_k in invariant-factor form.
///
/// Factors satisfy dᵢ | dᵢ₊₁, every nonzero factor is at least 2, and 0 stands
/// for a free summand ℤ (so zeros sit at the end). Equality of values is
/// isomorphism of groups.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FinAbGroup {
    factors: Vec<BigUint>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    #[serde(with = "crate::serde_util::biguint_seq")]
    invariant_factors: Vec<BigUint>,
}

impl TryFrom<RawGroup> for FinAbGroup {
    type Error = LatticeError;

    fn try_from(raw: RawGroup) -> Result<Self, Self::Error> {
        FinAbGroup::from_factors(raw.invariant_factors)
    }
}

impl From<FinAbGroup> for RawGroup {
    fn from(g: FinAbGroup) -> Self {
        RawGroup { invariant_factors: g.factors }
    }
}

/// Divisibility with the convention that everything divides 0.
fn divides(a: &BigUint, b: &BigUint) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        b.is_multiple_of(a)
    }
}

impl FinAbGroup {
    /// Validating constructor: `factors` must already be a divisibility chain
    /// with no entry equal to 1.
    pub fn from_factors<I, T>(factors: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigUint>,
    {
        let factors: Vec<BigUint> = factors.into_iter().map(Into::into).collect();
        if let Some(bad) = factors.iter().find(|d| d.is_one()) {
            return Err(LatticeError::BadFactor(bad.to_string()));
        }
        for w in factors.windows(2) {
            if !divides(&w[0], &w[1]) {
                return Err(LatticeError::BadFactor(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(FinAbGroup { factors })
    }

    /// ⊕ ℤ/nᵢ for arbitrary orders nᵢ (1 is dropped, 0 means ℤ), normalized.
    pub fn from_cyclic_orders<I, T>(orders: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigUint>,
    {
        let orders: Vec<BigUint> = orders.into_iter().map(Into::into).collect();
        let n = orders.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, d) in orders.into_iter().enumerate() {
            m[(i, i)] = BigInt::from(d);
        }
        cokernel(&m)
    }

    /// Builds from a diagonal that is already a chain, dropping units.
    pub(crate) fn from_sorted_chain(factors: Vec<BigUint>) -> Self {
        let factors: Vec<BigUint> = factors.into_iter().filter(|d| !d.is_one()).collect();
        debug_assert!(factors.windows(2).all(|w| divides(&w[0], &w[1])));
        FinAbGroup { factors }
    }

    pub fn trivial() -> Self {
        FinAbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { factors: vec![BigUint::zero(); rank] }
    }

    pub fn cyclic<T: Into<BigUint>>(n: T) -> Self {
        FinAbGroup::from_cyclic_orders([n.into()])
    }

    /// (ℤ/n)^k.
    pub fn power<T: Into<BigUint>>(n: T, k: usize) -> Self {
        let n = n.into();
        FinAbGroup::from_cyclic_orders(std::iter::repeat(n).take(k))
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank() == 0
    }

    /// Free rank (number of ℤ summands).
    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    /// Group order, or `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        Some(self.factors.iter().product())
    }

    /// Smallest e with e·x = 0 for all x, or `None` when infinite.
    pub fn exponent(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        Some(self.factors.last().cloned().unwrap_or_else(BigUint::one))
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        FinAbGroup::from_cyclic_orders(self.factors.iter().chain(&other.factors).cloned())
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.factors.len() {
            let d = &self.factors[i];
            let run = self.factors[i..].iter().take_while(|x| *x == d).count();
            if !first {
                write!(f, " x ")?;
            }
            first = false;
            let base = if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") };
            match (run, d.is_zero()) {
                (1, _) => write!(f, "{base}")?,
                (_, true) => write!(f, "Z^{run}")?,
                (_, false) => write!(f, "({base})^{run}")?,
            }
            i += run;
        }
        Ok(())
    }
}
