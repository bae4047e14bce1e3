use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::FinAbGroup;

/// A finite group given by its multiplication table on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl CayleyTable {
    /// Validates closure, identity and inverses. Associativity is the caller's
    /// responsibility (it is checked in debug builds for small tables).
    pub fn new(table: Vec<Vec<usize>>) -> Option<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return None;
        }
        let identity = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))?;
        if !(0..n).all(|x| (0..n).any(|y| table[x][y] == identity)) {
            return None;
        }
        let t = CayleyTable { table, identity };
        debug_assert!(n > 32 || t.is_associative());
        Some(t)
    }

    /// Builds the table of a finite set closed under `mul`.
    pub fn from_elements<T: PartialEq>(elements: &[T], mul: impl Fn(&T, &T) -> T) -> Option<Self> {
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let p = mul(a, b);
                table[i][j] = elements.iter().position(|x| *x == p)?;
            }
        }
        CayleyTable::new(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
        })
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }
}

/// Isomorphism-class summary of a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteGroupId {
    pub order: u64,
    /// Present exactly when the group is abelian.
    pub abelian_invariants: Option<FinAbGroup>,
    /// element order → number of elements of that order
    #[serde(with = "crate::serde_util::u64_pairs")]
    pub order_multiset: BTreeMap<u64, u64>,
    pub name: Option<String>,
}

/// Nonabelian groups of small order that the order statistics pin down.
const NONABELIAN_NAMES: &[(&str, &[(u64, u64)])] = &[
    ("S3", &[(1, 1), (2, 3), (3, 2)]),
    ("D4", &[(1, 1), (2, 5), (4, 2)]),
    ("Q8", &[(1, 1), (2, 1), (4, 6)]),
    ("D5", &[(1, 1), (2, 5), (5, 4)]),
    ("A4", &[(1, 1), (2, 3), (3, 8)]),
    ("D6", &[(1, 1), (2, 7), (3, 2), (6, 2)]),
    ("Dic3", &[(1, 1), (2, 1), (3, 2), (4, 6), (6, 2)]),
    ("D7", &[(1, 1), (2, 7), (7, 6)]),
];

/// Primes dividing `n`, ascending.
fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors of a finite abelian group read off its order statistics:
/// with c_k = #{x : p^k x = 0} = p^{Σ min(λᵢ, k)}, the number of parts λᵢ ≥ k
/// of the p-primary partition is log_p(c_k / c_{k−1}).
fn abelian_invariants(order: u64, multiset: &BTreeMap<u64, u64>) -> FinAbGroup {
    let mut cyclic = Vec::new();
    for p in prime_divisors(order) {
        let mut parts_at_least = Vec::new();
        let mut prev = 1u64;
        let mut pk = p;
        loop {
            let c: u64 = multiset.iter().filter(|(o, _)| pk % **o == 0).map(|(_, n)| n).sum();
            if c == prev {
                break;
            }
            let mut ratio = c / prev;
            let mut parts = 0;
            while ratio > 1 {
                ratio /= p;
                parts += 1;
            }
            parts_at_least.push(parts);
            prev = c;
            pk *= p;
        }
        // parts_at_least[k-1] = #{i : λᵢ ≥ k}
        let max_parts = parts_at_least.first().copied().unwrap_or(0);
        for i in 0..max_parts {
            let lambda = parts_at_least.iter().filter(|&&c| c > i).count() as u32;
            cyclic.push(p.pow(lambda));
        }
    }
    FinAbGroup::from_cyclic_orders(cyclic)
}

fn abelian_name(g: &FinAbGroup) -> String {
    if g.is_trivial() {
        return "trivial".to_string();
    }
    let parts: Vec<String> = g.invariant_factors().iter().map(|d| format!("C{d}")).collect();
    parts.join("x")
}

impl FiniteGroupId {
    pub fn identify(table: &CayleyTable) -> FiniteGroupId {
        let order = table.order() as u64;
        let mut order_multiset = BTreeMap::new();
        for x in 0..table.order() {
            *order_multiset.entry(table.element_order(x) as u64).or_insert(0) += 1;
        }
        if table.is_abelian() {
            let inv = abelian_invariants(order, &order_multiset);
            let name = Some(abelian_name(&inv));
            return FiniteGroupId { order, abelian_invariants: Some(inv), order_multiset, name };
        }
        let name = NONABELIAN_NAMES
            .iter()
            .find(|(_, stats)| {
                stats.len() == order_multiset.len()
                    && stats.iter().all(|(o, c)| order_multiset.get(o) == Some(c))
            })
            .map(|(n, _)| n.to_string());
        FiniteGroupId { order, abelian_invariants: None, order_multiset, name }
    }

    pub fn trivial() -> FiniteGroupId {
        FiniteGroupId {
            order: 1,
            abelian_invariants: Some(FinAbGroup::trivial()),
            order_multiset: BTreeMap::from([(1, 1)]),
            name: Some("trivial".into()),
        }
    }

    /// Identification of an abelian group given by invariant factors.
    /// Returns `None` for infinite groups or orders beyond `u64`.
    pub fn from_abelian(g: &FinAbGroup) -> Option<FiniteGroupId> {
        use num_traits::ToPrimitive;
        let factors: Vec<u64> =
            g.invariant_factors().iter().map(|d| d.to_u64()).collect::<Option<_>>()?;
        if factors.contains(&0) {
            return None;
        }
        let order: u64 = factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))?;
        if order > 1 << 16 {
            return None;
        }
        // enumerate ⊕ ℤ/dᵢ and count element orders
        let mut order_multiset = BTreeMap::new();
        let mut digits = vec![0u64; factors.len()];
        loop {
            let el = digits
                .iter()
                .zip(&factors)
                .map(|(&x, &d)| d / num_integer::gcd(x, d))
                .fold(1, num_integer::lcm);
            *order_multiset.entry(el).or_insert(0) += 1;
            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < factors[k] {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
        Some(FiniteGroupId {
            order,
            abelian_invariants: Some(g.clone()),
            order_multiset,
            name: Some(abelian_name(g)),
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian_invariants.is_some()
    }
}

impl fmt::Display for FiniteGroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}"),
            None => {
                let stats: Vec<String> =
                    self.order_multiset.iter().map(|(o, c)| format!("{o}:{c}")).collect();
                write!(f, "group of order {} with element orders {{{}}}", self.order, stats.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Permutation groups generated by the given permutations of 0..n.
    fn perm_group(gens: &[Vec<usize>]) -> CayleyTable {
        let n = gens[0].len();
        let id: Vec<usize> = (0..n).collect();
        let mut elems = vec![id];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<usize> = (0..n).map(|k| g[elems[i][k]]).collect();
                if !elems.contains(&p) {
                    elems.push(p);
                }
            }
            i += 1;
        }
        CayleyTable::from_elements(&elems, |a, b| (0..n).map(|k| a[b[k]]).collect()).unwrap()
    }

    fn quaternions() -> CayleyTable {
        // ±1, ±i, ±j, ±k encoded as (sign, unit) with unit 0..4
        let mut elems = Vec::new();
        for s in [1i8, -1] {
            for u in 0..4u8 {
                elems.push((s, u));
            }
        }
        let mul = |a: &(i8, u8), b: &(i8, u8)| {
            // unit products: 1=0, i=1, j=2, k=3
            const T: [[(i8, u8); 4]; 4] = [
                [(1, 0), (1, 1), (1, 2), (1, 3)],
                [(1, 1), (-1, 0), (1, 3), (-1, 2)],
                [(1, 2), (-1, 3), (-1, 0), (1, 1)],
                [(1, 3), (1, 2), (-1, 1), (-1, 0)],
            ];
            let (s, u) = T[a.1 as usize][b.1 as usize];
            (a.0 * b.0 * s, u)
        };
        CayleyTable::from_elements(&elems, mul).unwrap()
    }

    #[test]
    fn small_named_groups() {
        let s3 = perm_group(&[vec![1, 0, 2], vec![1, 2, 0]]);
        assert_eq!(FiniteGroupId::identify(&s3).name.as_deref(), Some("S3"));
        let d4 = perm_group(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]);
        let id = FiniteGroupId::identify(&d4);
        assert_eq!(id.name.as_deref(), Some("D4"));
        assert_eq!(id.order_multiset.get(&4), Some(&2));
        let q8 = FiniteGroupId::identify(&quaternions());
        assert_eq!(q8.name.as_deref(), Some("Q8"));
        assert_eq!(q8.order_multiset.get(&4), Some(&6));
        let a4 = perm_group(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]);
        let id = FiniteGroupId::identify(&a4);
        assert_eq!(id.name.as_deref(), Some("A4"));
        assert_eq!(id.order_multiset, BTreeMap::from([(1, 1), (2, 3), (3, 8)]));
    }

    #[test]
    fn abelian_identification() {
        let v4 = perm_group(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]);
        let id = FiniteGroupId::identify(&v4);
        assert_eq!(id.name.as_deref(), Some("C2xC2"));
        assert_eq!(id.abelian_invariants, Some(FinAbGroup::power(2u32, 2)));
        let c4 = perm_group(&[vec![1, 2, 3, 0]]);
        assert_eq!(FiniteGroupId::identify(&c4).name.as_deref(), Some("C4"));
        let c6 = perm_group(&[vec![1, 2, 0, 3, 4], vec![0, 1, 2, 4, 3]]);
        assert_eq!(FiniteGroupId::identify(&c6).name.as_deref(), Some("C6"));
        let triv = CayleyTable::new(vec![vec![0]]).unwrap();
        assert_eq!(FiniteGroupId::identify(&triv), FiniteGroupId::trivial());
    }

    #[test]
    fn from_abelian_matches_identify() {
        let g = FinAbGroup::from_cyclic_orders([2u32, 4]);
        let id = FiniteGroupId::from_abelian(&g).unwrap();
        assert_eq!(id.order, 8);
        assert_eq!(id.order_multiset, BTreeMap::from([(1, 1), (2, 3), (4, 4)]));
        assert_eq!(abelian_invariants(8, &id.order_multiset), g);
        assert!(FiniteGroupId::from_abelian(&FinAbGroup::free(1)).is_none());
    }

    #[test]
    fn unnamed_fallback() {
        // order-16 nonabelian: D8 is not in the name table
        let d8 = perm_group(&[
            vec![1, 2, 3, 4, 5, 6, 7, 0],
            vec![7, 6, 5, 4, 3, 2, 1, 0],
        ]);
        let id = FiniteGroupId::identify(&d8);
        assert_eq!(id.order, 16);
        assert!(id.name.is_none());
        assert!(id.to_string().starts_with("group of order 16"));
    }
}
