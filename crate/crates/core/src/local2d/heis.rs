//! The matrix group `Heis(3, Z)` of unipotent upper-triangular integer matrices.

use serde::{Deserialize, Serialize};

/// The matrix `[[1, n, c], [0, 1, p], [0, 0, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalHeisElement {
    pub n: i64,
    pub p: i64,
    pub c: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeisOp {
    Multiply(LocalHeisElement, LocalHeisElement),
    Commutator(LocalHeisElement, LocalHeisElement),
    /// The automorphism induced by `t -> u^k t`, `u -> u`.
    CoordChange(i64, LocalHeisElement),
}

impl LocalHeisElement {
    pub const IDENTITY: LocalHeisElement = LocalHeisElement { n: 0, p: 0, c: 0 };

    pub fn new(n: i64, p: i64, c: i64) -> Self {
        LocalHeisElement { n, p, c }
    }

    /// `(n, p, c)(m, q, a) = (n + m, p + q, c + a + nq)`.
    pub fn mul(self, o: Self) -> Self {
        LocalHeisElement { n: self.n + o.n, p: self.p + o.p, c: self.c + o.c + self.n * o.p }
    }

    pub fn inv(self) -> Self {
        LocalHeisElement { n: -self.n, p: -self.p, c: -self.c + self.n * self.p }
    }

    /// `g h g^{-1} h^{-1}`, always central.
    pub fn commutator(self, o: Self) -> Self {
        self.mul(o).mul(self.inv()).mul(o.inv())
    }

    /// `k(n, p, c) = (n, p + kn, c + k n(n-1)/2)`.
    pub fn coord_change(self, k: i64) -> Self {
        LocalHeisElement {
            n: self.n,
            p: self.p + k * self.n,
            c: self.c + k * self.n * (self.n - 1) / 2,
        }
    }
}

/// Central value `nq - mp` of the commutator of `(n, p)` and `(m, q)`.
pub fn commutator_value(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - b.0 * a.1
}

pub fn local_heis(op: HeisOp) -> LocalHeisElement {
    match op {
        HeisOp::Multiply(a, b) => a.mul(b),
        HeisOp::Commutator(a, b) => a.commutator(b),
        HeisOp::CoordChange(k, a) => a.coord_change(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: i64, p: i64, c: i64) -> LocalHeisElement {
        LocalHeisElement::new(n, p, c)
    }

    #[test]
    fn group_law_examples() {
        assert_eq!(local_heis(HeisOp::Multiply(e(1, 0, 0), e(0, 1, 0))), e(1, 1, 1));
        assert_eq!(local_heis(HeisOp::Multiply(e(0, 1, 0), e(1, 0, 0))), e(1, 1, 0));
        assert_eq!(local_heis(HeisOp::Commutator(e(1, 0, 0), e(0, 1, 0))), e(0, 0, 1));
    }

    #[test]
    fn coordinate_change_example() {
        assert_eq!(local_heis(HeisOp::CoordChange(1, e(2, 0, 0))), e(2, 2, 1));
    }

    fn arb() -> impl Strategy<Value = LocalHeisElement> {
        (-20i64..20, -20i64..20, -50i64..50).prop_map(|(n, p, c)| e(n, p, c))
    }

    proptest! {
        #[test]
        fn coord_change_is_a_homomorphism(a in arb(), b in arb(), k in -2i64..=2) {
            prop_assert_eq!(a.mul(b).coord_change(k), a.coord_change(k).mul(b.coord_change(k)));
        }

        #[test]
        fn commutator_is_central(a in arb(), b in arb(), g in arb()) {
            let z = a.commutator(b);
            prop_assert_eq!(z.n, 0);
            prop_assert_eq!(z.p, 0);
            prop_assert_eq!(z.c, commutator_value((a.n, a.p), (b.n, b.p)));
            prop_assert_eq!(z.mul(g), g.mul(z));
        }

        #[test]
        fn associativity(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
            prop_assert_eq!(a.mul(a.inv()), LocalHeisElement::IDENTITY);
        }
    }
}
