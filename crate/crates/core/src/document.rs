//! The function document: `{ "k": .., "n": .., "table": [..] }`, table in index order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FiniteFunction;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDocument {
    pub k: usize,
    pub n: usize,
    /// Wider than the stored type so that out-of-range values are reported, not truncated.
    pub table: Vec<u64>,
}

impl TryFrom<FunctionDocument> for FiniteFunction {
    type Error = Error;

    fn try_from(doc: FunctionDocument) -> Result<Self> {
        let table = doc
            .table
            .iter()
            .map(|&v| {
                u8::try_from(v)
                    .ok()
                    .filter(|&v| (v as usize) < doc.k)
                    .ok_or_else(|| Error::Domain(format!("table value {v} is not below k={}", doc.k)))
            })
            .collect::<Result<Vec<u8>>>()?;
        FiniteFunction::new(doc.k, doc.n, table)
    }
}

impl From<FiniteFunction> for FunctionDocument {
    fn from(f: FiniteFunction) -> Self {
        Self::from(&f)
    }
}

impl From<&FiniteFunction> for FunctionDocument {
    fn from(f: &FiniteFunction) -> Self {
        Self { k: f.k(), n: f.arity(), table: f.table().iter().map(|&v| v as u64).collect() }
    }
}
