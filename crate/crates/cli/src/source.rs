//! Where operators come from: a built-in algebra or an algebra file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use jetinv_core::jetspace::{SpaceSpec, MAX_INDEPENDENTS};
use jetinv_core::liealg::{build_classical_generating_set, family_members, VectorField, EIKONAL_FAMILIES};

use crate::algebra::parse_algebra;
use crate::CliError;

/// Default truncation of the built-in eikonal family.
pub const DEFAULT_TRUNCATION: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// `eikonal:N`: the truncated eikonal family with `N` space variables.
    Eikonal(usize),
    /// `classical:N`: rotations, dilation, `P^0_u` and translations.
    Classical(usize),
    File(PathBuf),
}

impl FromStr for Source {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let builtin = |rest: &str, make: fn(usize) -> Source| -> Result<Source, CliError> {
            match rest.parse::<usize>() {
                Ok(n) if (1..MAX_INDEPENDENTS).contains(&n) => Ok(make(n)),
                _ => Err(CliError::Usage(format!(
                    "`{s}`: expected a number of space variables between 1 and {}",
                    MAX_INDEPENDENTS - 1
                ))),
            }
        };
        if let Some(rest) = s.strip_prefix("eikonal:") {
            builtin(rest, Source::Eikonal)
        } else if let Some(rest) = s.strip_prefix("classical:") {
            builtin(rest, Source::Classical)
        } else {
            Ok(Source::File(PathBuf::from(s)))
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Eikonal(n) => write!(f, "eikonal:{n}"),
            Source::Classical(n) => write!(f, "classical:{n}"),
            Source::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Operators of a source, each tagged with its truncation parameter.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub space: SpaceSpec,
    pub members: Vec<(i64, VectorField)>,
}

impl Loaded {
    pub fn operators(&self) -> Vec<VectorField> {
        self.members.iter().map(|(_, f)| f.clone()).collect()
    }
}

impl Source {
    /// Truncation used when none is given: 3 for the eikonal family, the
    /// declared ranges for files, irrelevant for the classical set.
    pub fn default_truncation(&self) -> Option<i64> {
        matches!(self, Source::Eikonal(_)).then_some(DEFAULT_TRUNCATION)
    }

    pub fn load(&self, truncation: Option<i64>) -> Result<Loaded, CliError> {
        match self {
            Source::Eikonal(n) => {
                let k = truncation.unwrap_or(DEFAULT_TRUNCATION);
                let k = u32::try_from(k).map_err(|_| CliError::Usage("truncation must be nonnegative".into()))?;
                let space = SpaceSpec::lorentz(*n);
                let members = family_members(&EIKONAL_FAMILIES, k, &space)
                    .into_iter()
                    .map(|(k, f)| (i64::from(k), f))
                    .collect();
                Ok(Loaded { space, members })
            }
            Source::Classical(n) => Ok(Loaded {
                space: SpaceSpec::lorentz(*n),
                members: build_classical_generating_set(*n).into_iter().map(|f| (0, f)).collect(),
            }),
            Source::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
                let file = parse_algebra(&text).map_err(|e| CliError::Algebra { path: path.display().to_string(), source: e })?;
                let members = file
                    .members(truncation)
                    .map_err(|e| CliError::Algebra { path: path.display().to_string(), source: e })?;
                Ok(Loaded { space: file.space().clone(), members })
            }
        }
    }
}
