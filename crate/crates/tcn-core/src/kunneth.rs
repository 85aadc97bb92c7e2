//! Tensor powers of a presentation and the factor inclusions.
//!
//! The `n`-fold tensor power of a presented ring is presented by `n` tagged
//! copies of the generators (rendered `name<i>`) and `n` tagged copies of the
//! relations; cross-factor commutation is not a relation, it is the ambient
//! graded commutativity. This presents the cohomology of the `n`-th
//! Cartesian power exactly when every graded piece of the base ring is a
//! finitely generated free module, which is what the Künneth-safety flag
//! asserts; the constructor refuses presentations without it.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, Ambient, Element, Generator, Monomial, Presentation};

#[derive(Debug, Error)]
pub enum KunnethError {
    #[error("tensor power requires n >= 1, got {0}")]
    BadPower(u32),
    #[error("factor index {i} out of range 1..={n}")]
    FactorOutOfRange { i: u32, n: u32 },
    #[error("presentation is not marked Künneth-safe")]
    NotKunnethSafe,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A base presentation together with its `n`-fold tensor power.
#[derive(Clone, Debug)]
pub struct TensorPower {
    base: Presentation,
    n: u32,
    power: Presentation,
}

impl TensorPower {
    /// Builds the tagged-copy presentation. `n = 1` yields the base
    /// presentation unchanged.
    pub fn new(base: &Presentation, n: u32) -> Result<Self, KunnethError> {
        if n < 1 {
            return Err(KunnethError::BadPower(n));
        }
        if !base.kunneth_safe() {
            return Err(KunnethError::NotKunnethSafe);
        }
        if n == 1 {
            return Ok(TensorPower { base: base.clone(), n, power: base.clone() });
        }
        let base_gens = base.generators();
        let mut generators = Vec::with_capacity(base_gens.len() * n as usize);
        for i in 1..=n {
            for g in base_gens {
                generators.push(Generator::new(format!("{}<{}>", g.name, i), g.degree));
            }
        }
        let ambient = Ambient::new(
            base.coefficients(),
            generators,
            base.top_degree() * n,
        )?;
        let mut power = TensorPower {
            base: base.clone(),
            n,
            power: Presentation::new(Arc::clone(&ambient), Vec::new(), base.kunneth_safe())?,
        };
        let mut relations = Vec::new();
        for i in 1..=n {
            for r in base.relations() {
                relations.push(power.inject(r, i)?);
            }
        }
        power.power = Presentation::new(ambient, relations, base.kunneth_safe())?;
        Ok(power)
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn presentation(&self) -> &Presentation {
        &self.power
    }

    /// Image of a base element under the `i`-th factor inclusion.
    pub fn inject(&self, x: &Element, i: u32) -> Result<Element, KunnethError> {
        if i < 1 || i > self.n {
            return Err(KunnethError::FactorOutOfRange { i, n: self.n });
        }
        if !(Arc::ptr_eq(self.base.ambient(), x.ambient())
            || self.base.ambient() == x.ambient())
        {
            return Err(KunnethError::Algebra(AlgebraError::AmbientMismatch));
        }
        if self.n == 1 {
            return Ok(x.clone());
        }
        let g = self.base.generators().len();
        let offset = (i as usize - 1) * g;
        let total = g * self.n as usize;
        let terms = x
            .terms()
            .iter()
            .map(|(c, m)| {
                let mut exps = vec![0u32; total];
                exps[offset..offset + g].copy_from_slice(m.exponents());
                (c.clone(), Monomial::from_exponents(exps))
            })
            .collect();
        Ok(Element::from_terms(self.power.ambient(), terms))
    }
}

/// One-shot form: just the power presentation.
pub fn tensor_power(base: &Presentation, n: u32) -> Result<Presentation, KunnethError> {
    Ok(TensorPower::new(base, n)?.power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Coefficients, Generator};
    use crate::quotient::Quotient;

    fn sphere(m: u32) -> Presentation {
        let amb = Ambient::new(
            Coefficients::Integers,
            vec![Generator::new("a", m)],
            m,
        )
        .unwrap();
        let a = Element::generator(&amb, 0).unwrap();
        let sq = a.mul_uncapped(&a).unwrap();
        Presentation::new(amb, vec![sq], true).unwrap()
    }

    fn rp2() -> Presentation {
        let amb = Ambient::new(
            Coefficients::mod_prime(2).unwrap(),
            vec![Generator::new("g", 1)],
            2,
        )
        .unwrap();
        let g = Element::generator(&amb, 0).unwrap();
        let cube = g.mul_uncapped(&g).unwrap().mul_uncapped(&g).unwrap();
        Presentation::new(amb, vec![cube], true).unwrap()
    }

    #[test]
    fn sphere_cube_presentation_shape() {
        let tp = TensorPower::new(&sphere(2), 3).unwrap();
        let p = tp.presentation();
        let names: Vec<&str> = p.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["a<1>", "a<2>", "a<3>"]);
        assert_eq!(p.top_degree(), 6);
        assert_eq!(p.relations().len(), 3);
        for (i, r) in p.relations().iter().enumerate() {
            assert_eq!(r.terms().len(), 1);
            let mut expected = vec![0u32; 3];
            expected[i] = 2;
            assert_eq!(r.terms()[0].1.exponents(), &expected[..]);
        }
    }

    #[test]
    fn power_one_is_the_base() {
        let base = sphere(3);
        let tp = TensorPower::new(&base, 1).unwrap();
        assert_eq!(*tp.presentation(), base);
        let a = Element::generator(base.ambient(), 0).unwrap();
        assert_eq!(tp.inject(&a, 1).unwrap(), a);
    }

    #[test]
    fn rp2_square_presentation() {
        let tp = TensorPower::new(&rp2(), 2).unwrap();
        let p = tp.presentation();
        let names: Vec<&str> = p.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["g<1>", "g<2>"]);
        assert_eq!(p.top_degree(), 4);
        assert_eq!(p.relations().len(), 2);
    }

    #[test]
    fn inject_places_the_class_in_the_right_factor() {
        let base = sphere(4);
        let tp = TensorPower::new(&base, 3).unwrap();
        let a = Element::generator(base.ambient(), 0).unwrap();
        let img = tp.inject(&a, 2).unwrap();
        assert_eq!(img.terms().len(), 1);
        assert_eq!(img.terms()[0].1.exponents(), &[0, 1, 0]);
    }

    #[test]
    fn inject_is_a_ring_map() {
        let base = rp2();
        let tp = TensorPower::new(&base, 2).unwrap();
        let g = Element::generator(base.ambient(), 0).unwrap();
        let g2 = g.mul(&g).unwrap();
        let sum = g.add(&g2).unwrap();
        for i in 1..=2 {
            let lhs = tp.inject(&g2, i).unwrap();
            let rhs = tp.inject(&g, i).unwrap().mul(&tp.inject(&g, i).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = tp.inject(&sum, i).unwrap();
            let rhs = tp.inject(&g, i).unwrap().add(&tp.inject(&g2, i).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cross_factor_koszul_signs() {
        // Odd classes from distinct factors anticommute.
        let base = sphere(1);
        let tp = TensorPower::new(&base, 2).unwrap();
        let a = Element::generator(base.ambient(), 0).unwrap();
        let a1 = tp.inject(&a, 1).unwrap();
        let a2 = tp.inject(&a, 2).unwrap();
        let fwd = a1.mul(&a2).unwrap();
        let bwd = a2.mul(&a1).unwrap();
        assert_eq!(fwd, bwd.neg());
        assert!(!fwd.is_zero());
    }

    #[test]
    fn product_of_factor_classes_is_nonzero_in_the_quotient() {
        let base = sphere(2);
        let tp = TensorPower::new(&base, 2).unwrap();
        let a = Element::generator(base.ambient(), 0).unwrap();
        let prod = tp
            .inject(&a, 1)
            .unwrap()
            .mul(&tp.inject(&a, 2).unwrap())
            .unwrap();
        let q = Quotient::new(tp.presentation().clone());
        assert!(!q.is_zero(&prod).unwrap());
        // But a square within one factor dies.
        let sq = tp
            .inject(&a, 1)
            .unwrap()
            .mul(&tp.inject(&a, 1).unwrap())
            .unwrap();
        assert!(q.is_zero(&sq).unwrap());
    }

    #[test]
    fn unsafe_presentations_are_refused() {
        let amb = Ambient::new(
            Coefficients::Integers,
            vec![Generator::new("x", 2)],
            4,
        )
        .unwrap();
        let p = Presentation::new(amb, vec![], false).unwrap();
        assert!(matches!(
            TensorPower::new(&p, 2),
            Err(KunnethError::NotKunnethSafe)
        ));
    }

    #[test]
    fn power_zero_is_rejected() {
        assert!(matches!(
            TensorPower::new(&sphere(1), 0),
            Err(KunnethError::BadPower(0))
        ));
    }

    #[test]
    fn tagged_names_parse_back() {
        let tp = TensorPower::new(&sphere(2), 2).unwrap();
        let p = tp.presentation();
        let e = crate::algebra::parse_element("a<1>*a<2>", p).unwrap();
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms()[0].1.exponents(), &[1, 1]);
    }
}
