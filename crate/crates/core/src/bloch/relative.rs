//! Relative groups `ker(F(R[ε]) → F(R))` along the augmentation.

use std::str::FromStr;
use std::sync::Arc;

use crate::abgrp::matrix::row_from_dense;
use crate::abgrp::{exterior_square, kernel, AbHom, AbPresentation, Bilinear, WellDefined};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::rings::{augmentation, FiniteRing, RingHom};

use super::milnor::{milnor_k, MilnorK};
use super::prebloch::{canonical_unit, pre_bloch, sym_square, unit_vec};

/// Functors with a relative version.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativeFunctor {
    PreBloch,
    SymSquare,
    MilnorK2,
    ExteriorSqUnits,
}

impl RelativeFunctor {
    pub const ALL: [RelativeFunctor; 4] = [
        RelativeFunctor::PreBloch,
        RelativeFunctor::SymSquare,
        RelativeFunctor::MilnorK2,
        RelativeFunctor::ExteriorSqUnits,
    ];

    pub fn id(self) -> &'static str {
        match self {
            RelativeFunctor::PreBloch => "pre_bloch",
            RelativeFunctor::SymSquare => "sym_square",
            RelativeFunctor::MilnorK2 => "milnor_k2",
            RelativeFunctor::ExteriorSqUnits => "exterior_sq_units",
        }
    }
}

impl FromStr for RelativeFunctor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::Unsupported(format!("no relative version of functor '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct RelativeGroup {
    pub functor: RelativeFunctor,
    /// `F(R[ε]) → F(R)`.
    pub induced: AbHom,
    pub group: Arc<AbPresentation>,
    pub inclusion: AbHom,
}

/// Map between squares of unit groups induced by a ring map, on the
/// canonical pair generators of the source.
fn square_map(hom: &RingHom, src: &Bilinear, dst: &Bilinear) -> AbHom {
    let (s, t) = (&hom.source, &hom.target);
    let k = s.unit_group().presentation().rank_canonical();
    let imgs: Vec<Vec<Int>> = (0..k).map(|i| unit_vec(t, hom.apply(canonical_unit(s, i)))).collect();
    let images = (0..k * k)
        .map(|g| row_from_dense(&dst.pair(&imgs[g / k], &imgs[g % k])))
        .collect();
    AbHom::new(src.group.clone(), dst.group.clone(), images)
}

fn k2_map(hom: &RingHom, src: &MilnorK, dst: &MilnorK) -> AbHom {
    let images = (0..src.symbols.count())
        .map(|t| {
            let syms: Vec<_> = src.symbols.symbols(t).iter().map(|&a| hom.apply(a)).collect();
            vec![(dst.symbols.index(&syms) as u32, Int::ONE)]
        })
        .collect();
    AbHom::new(src.symbolic.clone(), dst.symbolic.clone(), images)
}

/// Map `F(source) → F(target)` induced by a ring homomorphism.
pub fn induced_map(functor: RelativeFunctor, hom: &RingHom) -> Result<AbHom> {
    let (s, t) = (&hom.source, &hom.target);
    let f = match functor {
        RelativeFunctor::PreBloch => {
            let (ps, pt) = (pre_bloch(s), pre_bloch(t));
            let images = ps
                .admissible
                .iter()
                .map(|&a| {
                    let b = hom.apply(a);
                    let g = pt.gen_of(b).ok_or_else(|| {
                        Error::Structural(format!(
                            "image {} of admissible {} is not admissible",
                            t.name(b),
                            s.name(a)
                        ))
                    })?;
                    Ok(vec![(g as u32, Int::ONE)])
                })
                .collect::<Result<Vec<_>>>()?;
            AbHom::new(ps.group.clone(), pt.group.clone(), images)
        }
        RelativeFunctor::SymSquare => square_map(hom, &sym_square(s).pairing, &sym_square(t).pairing),
        RelativeFunctor::ExteriorSqUnits => square_map(
            hom,
            &exterior_square(s.unit_group().presentation()),
            &exterior_square(t.unit_group().presentation()),
        ),
        RelativeFunctor::MilnorK2 => k2_map(hom, &milnor_k(s, 2)?, &milnor_k(t, 2)?),
    };
    match f.check_well_defined() {
        WellDefined::Yes => Ok(f),
        WellDefined::No(i) => Err(Error::Structural(format!(
            "induced map on {} is not well defined at relation {i}",
            functor.id()
        ))),
    }
}

pub fn relative_group(functor: RelativeFunctor, ring: &Arc<FiniteRing>) -> Result<RelativeGroup> {
    let aug = augmentation(ring)?;
    let induced = induced_map(functor, &aug)?;
    let (group, inclusion) = kernel(&induced);
    if !inclusion.compose(&induced).is_zero_map() {
        return Err(Error::Structural(format!(
            "relative {} does not map to zero in the base",
            functor.id()
        )));
    }
    Ok(RelativeGroup {
        functor,
        induced,
        group,
        inclusion,
    })
}
