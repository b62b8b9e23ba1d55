//! Polarized K3 lattice data in degree 22 (genus 12).

use serde::Serialize;
use thiserror::Error;

use crate::lattice::GramLattice;

pub const DEGREE: i64 = 22;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum K3Error {
    #[error("degree {0} must be even and nonnegative")]
    OddDegree(i64),
    #[error("volume {0} must be even and positive")]
    BadVolume(i64),
    #[error("genus {0} must be at least 2")]
    BadGenus(i64),
    #[error("cover degree {0} must be positive")]
    BadCoverDegree(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogTag {
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    BnExcluding,
    Nodal,
}

impl CatalogTag {
    pub fn label(self) -> &'static str {
        match self {
            CatalogTag::TypeI => "type-I",
            CatalogTag::TypeII => "type-II",
            CatalogTag::TypeIII => "type-III",
            CatalogTag::TypeIV => "type-IV",
            CatalogTag::BnExcluding => "BN-excluding",
            CatalogTag::Nodal => "nodal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NLDivisorRecord {
    pub degree: i64,
    pub h: i64,
    pub m: i64,
    pub name: String,
    pub gram: GramLattice,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub record: NLDivisorRecord,
    pub tag: CatalogTag,
}

/// `(h, m)` of the Types I–IV lattices.
pub const TYPES: [(CatalogTag, i64, i64); 4] = [
    (CatalogTag::TypeI, 11, 4),
    (CatalogTag::TypeII, 9, 2),
    (CatalogTag::TypeIII, 6, 0),
    (CatalogTag::TypeIV, 5, 0),
];

/// The eleven `(h, m)` whose divisors exclude Brill–Noether general sections.
pub const BN_EXCLUDING: [(i64, i64); 11] = [
    (1, 0),
    (2, 0),
    (3, 0),
    (4, 0),
    (5, 0),
    (6, 0),
    (7, 2),
    (8, 2),
    (9, 2),
    (10, 4),
    (11, 4),
];

pub const NODAL: (i64, i64) = (0, -2);

/// `[[d, h], [h, m]]`.
pub fn nl_gram(d: i64, h: i64, m: i64) -> GramLattice {
    GramLattice::new(vec![vec![d, h], vec![h, m]]).expect("symmetric by construction")
}

pub fn is_bn_excluding(h: i64, m: i64) -> bool {
    BN_EXCLUDING.contains(&(h, m))
}

pub fn type_of(h: i64, m: i64) -> Option<CatalogTag> {
    TYPES.iter().find(|&&(_, th, tm)| (th, tm) == (h, m)).map(|&(t, _, _)| t)
}

fn record(h: i64, m: i64, name: String) -> NLDivisorRecord {
    NLDivisorRecord {
        degree: DEGREE,
        h,
        m,
        name,
        gram: nl_gram(DEGREE, h, m),
    }
}

/// Types I–IV, the eleven BN-excluding divisors and the nodal divisor.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = TYPES
        .iter()
        .map(|&(tag, h, m)| CatalogEntry {
            record: record(h, m, format!("Lambda_{}", &tag.label()[5..])),
            tag,
        })
        .collect();
    out.extend(BN_EXCLUDING.iter().map(|&(h, m)| CatalogEntry {
        record: record(h, m, format!("D^22_{h},{m}")),
        tag: CatalogTag::BnExcluding,
    }));
    out.push(CatalogEntry {
        record: record(NODAL.0, NODAL.1, format!("D^22_{},{}", NODAL.0, NODAL.1)),
        tag: CatalogTag::Nodal,
    });
    out
}

/// `h⁰ = degree/2 + 2` for a nef and big line bundle on a K3 surface.
pub fn k3_section_count(degree: i64) -> Result<i64, K3Error> {
    if degree < 0 || degree % 2 != 0 {
        return Err(K3Error::OddDegree(degree));
    }
    Ok(degree / 2 + 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenusVolume {
    GenusToVolume,
    VolumeToGenus,
}

/// `g = v/2 + 1`, in either direction.
pub fn genus_volume(value: i64, direction: GenusVolume) -> Result<i64, K3Error> {
    match direction {
        GenusVolume::VolumeToGenus => {
            if value <= 0 || value % 2 != 0 {
                return Err(K3Error::BadVolume(value));
            }
            Ok(value / 2 + 1)
        }
        GenusVolume::GenusToVolume => {
            if value < 2 {
                return Err(K3Error::BadGenus(value));
            }
            Ok(2 * value - 2)
        }
    }
}

/// Anticanonical volume `22·m²` of a degree-`m` cyclic cover.
pub fn cyclic_cover_volume(m: i64) -> Result<i64, K3Error> {
    if m < 1 {
        return Err(K3Error::BadCoverDegree(m));
    }
    Ok(DEGREE * m * m)
}
