use serde::{Deserialize, Serialize};

use super::{AnyMatroid, GeneralMatroid, RepresentedMatroid};
use crate::gf::Vector;
use crate::subsets;
use crate::{Error, Result};

/// On-disk matroid: vectors over a prime field, or an explicit independence family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum MatroidFile {
    Represented { field: usize, dim: usize, vectors: Vec<Vector> },
    General { ground: usize, independent: Vec<Vec<usize>> },
}

impl MatroidFile {
    pub fn parse(text: &str) -> Result<MatroidFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn into_matroid(self) -> Result<AnyMatroid> {
        match self {
            MatroidFile::Represented { field, dim, vectors } => {
                if field > 255 {
                    return Err(Error::Domain(format!("field order {field} is not supported")));
                }
                Ok(AnyMatroid::Represented(RepresentedMatroid::new(field, dim, vectors)?))
            }
            MatroidFile::General { ground, independent } => {
                crate::error::budget("matroid ground set", ground, super::MAX_SUBSET_GROUND)?;
                let mut fam = Vec::with_capacity(independent.len());
                for set in independent {
                    if let Some(&e) = set.iter().find(|&&e| e >= ground) {
                        return Err(Error::Domain(format!("element {e} is outside the ground set")));
                    }
                    fam.push(subsets::from_elems(set));
                }
                Ok(AnyMatroid::General(GeneralMatroid::new(ground, fam)?))
            }
        }
    }

    pub fn from_matroid(m: &AnyMatroid) -> MatroidFile {
        match m {
            AnyMatroid::Represented(r) => {
                MatroidFile::Represented { field: r.order(), dim: r.dim(), vectors: r.vectors().to_vec() }
            }
            AnyMatroid::General(g) => MatroidFile::from_general(g),
        }
    }

    pub fn from_general(g: &GeneralMatroid) -> MatroidFile {
        use super::Matroid;
        MatroidFile::General { ground: g.len(), independent: g.family().into_iter().map(subsets::elems).collect() }
    }
}

impl AnyMatroid {
    pub fn from_json(text: &str) -> Result<AnyMatroid> {
        MatroidFile::parse(text)?.into_matroid()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatroidFile::from_matroid(self)).expect("matroid files serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;

    #[test]
    fn round_trips() {
        let r = AnyMatroid::from_json(r#"{"field":2,"dim":2,"vectors":[[1,0],[0,1],[1,1]]}"#).unwrap();
        assert_eq!(r.rank(0b111), 2);
        assert_eq!(AnyMatroid::from_json(&r.to_json()).unwrap(), r);
        let g = AnyMatroid::from_json(r#"{"ground":2,"independent":[[],[0],[1]]}"#).unwrap();
        assert_eq!(g.to_json(), r#"{"ground":2,"independent":[[],[0],[1]]}"#);
    }

    #[test]
    fn rejects() {
        for bad in [
            r#"{"field":4,"dim":1,"vectors":[[1]]}"#,
            r#"{"field":2,"dim":1,"vectors":[]}"#,
            r#"{"ground":2,"independent":[[0,1]]}"#,
            r#"{"ground":2,"independent":[[],[5]]}"#,
            r#"{"ground":2}"#,
            r#"{"field":2,"dim":1,"vectors":[[1]],"extra":1}"#,
            "[]",
        ] {
            assert!(AnyMatroid::from_json(bad).is_err(), "{bad}");
        }
    }
}
