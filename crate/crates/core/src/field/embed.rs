//! Subfield embeddings, traces and norms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{Elem, FiniteFieldElement, GaloisField};
use crate::error::{Error, Result};

/// A fixed embedding `small -> big` of finite fields of the same characteristic.
///
/// The image of the power-basis generator of `small` is the smallest root (as a
/// packed integer) of the defining polynomial of `small` inside `big`, so the
/// choice is reproducible.
#[derive(Clone, Debug)]
pub struct Embedding {
    small: GaloisField,
    big: GaloisField,
    map: Vec<Elem>,
    back: HashMap<Elem, Elem>,
}

impl Embedding {
    pub fn new(small: &GaloisField, big: &GaloisField) -> Result<Self> {
        if small.characteristic() != big.characteristic() || big.degree() % small.degree() != 0
        {
            return Err(Error::FieldMismatch(small.to_string(), big.to_string()));
        }
        if small == big {
            let map: Vec<Elem> = small.elements().collect();
            let back = map.iter().map(|&a| (a, a)).collect();
            return Ok(Embedding { small: small.clone(), big: big.clone(), map, back });
        }
        let modulus = small.modulus();
        let root = if small.degree() == 1 {
            Elem::ZERO
        } else {
            big.elements()
                .find(|&r| {
                    let mut acc = Elem::ZERO;
                    for &c in modulus.iter().rev() {
                        acc = big.add(big.mul(acc, r), Elem(c));
                    }
                    acc.is_zero()
                })
                .ok_or_else(|| Error::FieldMismatch(small.to_string(), big.to_string()))?
        };
        let mut map = Vec::with_capacity(small.order() as usize);
        let mut back = HashMap::with_capacity(small.order() as usize);
        for a in small.elements() {
            let img = if small.degree() == 1 {
                a
            } else {
                let mut acc = Elem::ZERO;
                for &c in small.coefficients(a).iter().rev() {
                    acc = big.add(big.mul(acc, root), Elem(c));
                }
                acc
            };
            map.push(img);
            back.insert(img, a);
        }
        Ok(Embedding { small: small.clone(), big: big.clone(), map, back })
    }

    /// Shared embedding, built once per pair of fields.
    pub fn cached(small: &GaloisField, big: &GaloisField) -> Result<Arc<Self>> {
        type Key = (u32, Vec<u32>, Vec<u32>);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Embedding>>>> = OnceLock::new();
        let key = (small.characteristic(), small.modulus().to_vec(), big.modulus().to_vec());
        let cache = CACHE.get_or_init(Default::default);
        if let Some(e) = cache.lock().expect("embedding cache").get(&key) {
            return Ok(e.clone());
        }
        let e = Arc::new(Self::new(small, big)?);
        cache.lock().expect("embedding cache").insert(key, e.clone());
        Ok(e)
    }

    pub fn small(&self) -> &GaloisField {
        &self.small
    }

    pub fn big(&self) -> &GaloisField {
        &self.big
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a.0 as usize]
    }

    /// Inverse image of `b`, if `b` lies in the embedded subfield.
    pub fn preimage(&self, b: Elem) -> Option<Elem> {
        self.back.get(&b).copied()
    }

    /// Relative degree `[big : small]`.
    pub fn relative_degree(&self) -> u32 {
        self.big.degree() / self.small.degree()
    }

    /// `Tr_{big/small}(a) = sum_{i<n} a^{q^i}`, returned as an element of `small`.
    pub fn trace(&self, a: Elem) -> Elem {
        let q = self.small.order() as i64;
        let mut acc = Elem::ZERO;
        let mut x = a;
        for _ in 0..self.relative_degree() {
            acc = self.big.add(acc, x);
            x = self.big.pow(x, q).expect("nonnegative exponent");
        }
        self.preimage(acc).expect("trace lies in the subfield")
    }

    /// `N_{big/small}(a) = prod_{i<n} a^{q^i}`, returned as an element of `small`.
    pub fn norm(&self, a: Elem) -> Elem {
        let q = self.small.order() as i64;
        let mut acc = Elem::ONE;
        let mut x = a;
        for _ in 0..self.relative_degree() {
            acc = self.big.mul(acc, x);
            x = self.big.pow(x, q).expect("nonnegative exponent");
        }
        self.preimage(acc).expect("norm lies in the subfield")
    }
}

/// Trace of an element of an extension down to `base`.
pub fn trace_to_base(a: &FiniteFieldElement, base: &GaloisField) -> Result<FiniteFieldElement> {
    let emb = Embedding::new(base, a.field())?;
    FiniteFieldElement::new(base, emb.trace(a.elem()))
}

/// Norm of an element of an extension down to `base`.
pub fn norm_to_base(a: &FiniteFieldElement, base: &GaloisField) -> Result<FiniteFieldElement> {
    let emb = Embedding::new(base, a.field())?;
    FiniteFieldElement::new(base, emb.norm(a.elem()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_of_one_is_degree() {
        let f5 = GaloisField::prime(5).unwrap();
        let f25 = GaloisField::new(5, 2).unwrap();
        let one = FiniteFieldElement::from_int(&f25, 1);
        assert_eq!(trace_to_base(&one, &f5).unwrap().elem(), Elem(2));
    }

    #[test]
    fn trace_of_golden_root_is_one() {
        let f5 = GaloisField::prime(5).unwrap();
        let f25 = GaloisField::new(5, 2).unwrap();
        // x^2 - x - 1 = (x - 3)^2 over F_5: the conjugate roots coincide and sum to 1
        let roots: Vec<Elem> = f25
            .elements()
            .filter(|&a| {
                let v = f25.sub(f25.sub(f25.mul(a, a), a), Elem::ONE);
                v.is_zero()
            })
            .collect();
        assert_eq!(roots, vec![Elem(3)]);
        let emb = Embedding::new(&f5, &f25).unwrap();
        for r in roots {
            assert_eq!(emb.trace(r), Elem(1));
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = GaloisField::new(2, 2).unwrap();
        let big = GaloisField::new(2, 4).unwrap();
        let emb = Embedding::new(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.apply(small.add(a, b)), big.add(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(small.mul(a, b)), big.mul(emb.apply(a), emb.apply(b)));
            }
        }
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        for (p, d, m) in [(2u32, 1u32, 3u32), (3, 1, 2), (5, 1, 3), (2, 2, 4), (5, 1, 2), (3, 1, 4)] {
            let small = GaloisField::new(p, d).unwrap();
            let big = GaloisField::new(p, m).unwrap();
            let emb = Embedding::new(&small, &big).unwrap();
            let mut hit = vec![false; small.order() as usize];
            for a in big.elements() {
                let ta = emb.trace(a);
                hit[ta.0 as usize] = true;
                for c in small.elements() {
                    let lhs = emb.trace(big.mul(emb.apply(c), a));
                    assert_eq!(lhs, small.mul(c, ta));
                }
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let f3 = GaloisField::prime(3).unwrap();
        let f27 = GaloisField::new(3, 3).unwrap();
        let emb = Embedding::new(&f3, &f27).unwrap();
        for a in f27.elements().step_by(3) {
            for b in f27.elements().step_by(5) {
                assert_eq!(emb.norm(f27.mul(a, b)), f3.mul(emb.norm(a), emb.norm(b)));
            }
        }
    }
}
