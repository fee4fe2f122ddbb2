//! Bounded complexes of free modules and homotopy classes of maps.
//!
//! A [`FreeComplex`] is a bounded complex of sums of free modules `F_d`.
//! Spheres `S^{±λ_d}`, the rotation spheres of arbitrary weight and the
//! linear models `L(b)` are built directly; box products, duals and
//! restrictions to subgroups are computed on the block level.
//!
//! Homology at a level `Θ_e` is read off the Smith normal form of the
//! level matrices. Homotopy classes `[K, Σ^m L]` are computed by the
//! oracle [`hom_group`], which takes homology of the complex of maps in
//! the category of free modules. The specialised calculus of maps between
//! linear models ([`ChainMapData`], [`phi_image`]) lives alongside.

mod chainmap;
mod complex;
mod hom;
pub mod snf;

pub use chainmap::{
    chain_map_from_data, homology_action, homology_action_oracle, is_null_homotopic,
    is_null_homotopic_oracle, phi_image, phi_moduli, ChainMapData,
};
pub use complex::{general_sphere_data, group_from_matrices, FreeComplex};
pub use hom::{
    hom_group, hom_group_at, hom_levelwise, is_quasi_isomorphism, mapping_cone, ChainMap,
    HomComplex,
};

use alloc::vec::Vec;
use core::fmt;

use crate::mackey::AbelianGroup;

/// How a group was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// A closed formula.
    ClosedForm,
    /// The image of the null-homotopy map on normity data.
    PhiImage,
    /// Homology of a complex of maps.
    Oracle,
}

impl Method {
    /// Stable lowercase name.
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::PhiImage => "phi-image",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A representative of a homotopy class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomGenerator {
    /// Normity data for a map of linear models.
    Data(ChainMapData),
    /// An explicit chain map.
    Map(ChainMap),
}

/// A group of homotopy classes with representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyGroupResult {
    /// The group.
    pub group: AbelianGroup,
    /// Representatives spanning the group.
    pub generators: Vec<HomGenerator>,
    /// How the group was computed.
    pub method: Method,
}
