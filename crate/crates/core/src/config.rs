//! JSON system configuration. Parsing is strict: unknown keys are
//! rejected, because a silently ignored typo would invalidate a
//! verification claim.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::dynsys::{diagonal_basis, full_matrix_basis, DynSystem};
use crate::error::{CoreError, Result};
use crate::group::FiniteAbelianGroup;
use crate::linalg::{c, identity, Mat};

/// Matrix as nested rows of `[re, im]` pairs.
pub type MatrixData = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub group: GroupConfig,
    pub dim: usize,
    pub action: ActionConfig,
    pub algebra: AlgebraConfig,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Named fixture elements usable from the command line.
    #[serde(default)]
    pub elements: BTreeMap<String, MatrixData>,
}

fn default_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub factors: Vec<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionConfig {
    pub kind: String,
    #[serde(default)]
    pub data: serde_json::Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub kind: String,
    #[serde(default)]
    pub basis: Vec<MatrixData>,
}

pub fn parse_config(text: &str) -> Result<SystemConfig> {
    serde_json::from_str(text).map_err(|e| CoreError::Config(format!("invalid config: {e}")))
}

pub fn mat_from_data(data: &MatrixData) -> Result<Mat> {
    let rows = data.len();
    if rows == 0 {
        return Err(CoreError::Config("matrix has no rows".into()));
    }
    let cols = data[0].len();
    if cols == 0 || data.iter().any(|r| r.len() != cols) {
        return Err(CoreError::Config("matrix rows have inconsistent lengths".into()));
    }
    Ok(Mat::from_fn(rows, cols, |i, j| c(data[i][j][0], data[i][j][1])))
}

pub fn mat_to_data(m: &Mat) -> MatrixData {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Build the validated system plus the named fixture elements.
pub fn build_system(cfg: &SystemConfig) -> Result<(DynSystem, BTreeMap<String, Mat>)> {
    let group = FiniteAbelianGroup::new(cfg.group.factors.clone())
        .map_err(|e| CoreError::Config(e.to_string()))?;
    let d = cfg.dim;
    if d == 0 {
        return Err(CoreError::Config("dim must be >= 1".into()));
    }

    let algebra: Vec<Mat> = match cfg.algebra.kind.as_str() {
        "full" => full_matrix_basis(d),
        "diagonal" => diagonal_basis(d),
        "explicit" => {
            if cfg.algebra.basis.is_empty() {
                return Err(CoreError::Config("explicit algebra needs a basis".into()));
            }
            cfg.algebra.basis.iter().map(mat_from_data).collect::<Result<_>>()?
        }
        other => {
            return Err(CoreError::Config(format!(
                "unknown algebra kind {other:?}; expected full | diagonal | explicit"
            )))
        }
    };

    let sys = match cfg.action.kind.as_str() {
        "trivial" => DynSystem::trivial(group, d, &algebra, cfg.tol),
        "cyclic-shift" => {
            if d != group.order() {
                return Err(CoreError::Config(format!(
                    "cyclic-shift needs dim = |G| (got dim {d}, |G| {})",
                    group.order()
                )));
            }
            DynSystem::cyclic_shift(group, &algebra, cfg.tol)
        }
        "diagonal-characters" => {
            let rows: Vec<Vec<i64>> = serde_json::from_value(cfg.action.data.clone())
                .map_err(|e| CoreError::Config(format!("diagonal-characters data: {e}")))?;
            if rows.len() != d {
                return Err(CoreError::Config(format!(
                    "diagonal-characters needs one character per dimension ({d})"
                )));
            }
            let chars = rows
                .iter()
                .map(|r| group.make(r))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| CoreError::Config(e.to_string()))?;
            DynSystem::diagonal_characters(group, &chars, &algebra, cfg.tol)
        }
        "explicit" => {
            let mats: Vec<MatrixData> = serde_json::from_value(cfg.action.data.clone())
                .map_err(|e| CoreError::Config(format!("explicit action data: {e}")))?;
            let unitaries = mats.iter().map(mat_from_data).collect::<Result<Vec<_>>>()?;
            DynSystem::new(group, unitaries, &algebra, cfg.tol)
        }
        other => {
            return Err(CoreError::Config(format!(
                "unknown action kind {other:?}; expected trivial | cyclic-shift | diagonal-characters | explicit"
            )))
        }
    }
    .map_err(|e| CoreError::Config(format!("system validation failed: {e}")))?;

    let mut elements = BTreeMap::new();
    for (name, data) in &cfg.elements {
        let m = mat_from_data(data)?;
        if m.nrows() != d || m.ncols() != d {
            return Err(CoreError::Config(format!(
                "element {name:?} must be {d}x{d}"
            )));
        }
        elements.insert(name.clone(), m);
    }
    // Always provide the identity under a reserved name.
    elements.entry("identity".to_string()).or_insert_with(|| identity(d));

    Ok((sys, elements))
}
