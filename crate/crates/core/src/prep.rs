//! Choice between the two state-preparation methods.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::config::{OnConfig, StateSpec};
use crate::error::{Error, Result};
use crate::{givens, ssp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrepMethod {
    /// Externally controlled Givens rotations from a reference configuration.
    Gr,
    /// Sparse state preparation by pairwise merging.
    Ssp,
}

impl PrepMethod {
    pub const ALL: [PrepMethod; 2] = [PrepMethod::Gr, PrepMethod::Ssp];

    pub fn name(self) -> &'static str {
        match self {
            PrepMethod::Gr => "gr",
            PrepMethod::Ssp => "ssp",
        }
    }

    /// Circuit preparing `spec` from `|0…0>`. GR treats the first entry as the reference.
    pub fn synthesize(self, spec: &StateSpec) -> Result<Circuit> {
        match self {
            PrepMethod::Gr => givens::synthesize_gr(spec),
            PrepMethod::Ssp => ssp::synthesize_ssp(spec),
        }
    }

    /// Circuit over `configs` with one symbolic angle per rotation, named `{prefix}{k}`.
    pub fn symbolic(self, configs: &[OnConfig], prefix: &str) -> Result<Circuit> {
        match self {
            PrepMethod::Gr => givens::synthesize_gr_symbolic(configs, prefix),
            PrepMethod::Ssp => ssp::synthesize_ssp_symbolic(configs, prefix),
        }
    }
}

impl fmt::Display for PrepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PrepMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gr" => Ok(PrepMethod::Gr),
            "ssp" => Ok(PrepMethod::Ssp),
            _ => Err(Error::InvalidState(format!(
                "unknown preparation method {s:?}"
            ))),
        }
    }
}
