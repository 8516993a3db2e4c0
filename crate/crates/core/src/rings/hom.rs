//! Ring homomorphisms between explicit finite rings.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::ring::{Elt, FiniteRing};

#[derive(Clone, Debug)]
pub struct RingHom {
    pub source: Arc<FiniteRing>,
    pub target: Arc<FiniteRing>,
    pub map: Vec<Elt>,
}

impl RingHom {
    pub fn apply(&self, a: Elt) -> Elt {
        self.map[a as usize]
    }

    /// Checks that 0, 1, `+` and `*` are preserved on all pairs.
    pub fn verify(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.apply(0) != 0 || self.apply(1) != 1 {
            return Err(Error::Structural("map does not preserve 0 and 1".into()));
        }
        for a in s.elements() {
            for b in s.elements() {
                if self.apply(s.add(a, b)) != t.add(self.apply(a), self.apply(b))
                    || self.apply(s.mul(a, b)) != t.mul(self.apply(a), self.apply(b))
                {
                    return Err(Error::Structural(format!(
                        "map is not a ring homomorphism at ({}, {})",
                        s.name(a),
                        s.name(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether `u` is a unit exactly when its image is.
    pub fn reflects_units(&self) -> bool {
        self.source
            .elements()
            .all(|a| self.source.is_unit(a) == self.target.is_unit(self.apply(a)))
    }
}

/// The augmentation `R[x]/(x^m) -> R` sending the nilpotent generator to 0.
pub fn augmentation(ring: &Arc<FiniteRing>) -> Result<RingHom> {
    let nil = ring
        .nilpotent()
        .ok_or_else(|| Error::Unsupported(format!("{} has no nilpotent presentation", ring.spec)))?;
    let hom = RingHom {
        source: ring.clone(),
        target: nil.base.clone(),
        map: nil.augmentation.clone(),
    };
    hom.verify()?;
    Ok(hom)
}

/// The inclusion of the base ring into `R[x]/(x^m)`.
pub fn section(ring: &Arc<FiniteRing>) -> Result<RingHom> {
    let nil = ring
        .nilpotent()
        .ok_or_else(|| Error::Unsupported(format!("{} has no nilpotent presentation", ring.spec)))?;
    let hom = RingHom {
        source: nil.base.clone(),
        target: ring.clone(),
        map: nil.section.clone(),
    };
    hom.verify()?;
    Ok(hom)
}
