//! Interchange format: complex entries are `[re, im]` pairs and matrices are
//! row-major nested arrays.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{ComplexMatrix, C64};

pub(crate) type Rows = Vec<Vec<[f64; 2]>>;

pub(crate) fn to_rows(m: &ComplexMatrix) -> Rows {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub(crate) fn from_rows(rows: &Rows) -> Result<ComplexMatrix, String> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err("matrix must be non-empty".into());
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err("ragged matrix rows".into());
    }
    let entries: Vec<C64> = rows
        .iter()
        .flat_map(|r| r.iter().map(|&[re, im]| C64::new(re, im)))
        .collect();
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err("matrix has non-finite entries".into());
    }
    Ok(ComplexMatrix::from_row_slice(nrows, ncols, &entries))
}

pub(crate) mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
        let rows = Rows::deserialize(d)?;
        from_rows(&rows).map_err(D::Error::custom)
    }
}

pub(crate) mod matrix_list {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[ComplexMatrix], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ComplexMatrix>, D::Error> {
        let lists = Vec::<Rows>::deserialize(d)?;
        lists
            .iter()
            .map(|rows| from_rows(rows).map_err(D::Error::custom))
            .collect()
    }
}
