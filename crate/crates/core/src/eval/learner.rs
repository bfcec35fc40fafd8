//! What to train on each split: base method, parameter policy and optional
//! sampling ensemble.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::DtiDataset;
use crate::ensemble::{train_ensemble, EnsembleConfig, SamplingKind};
use crate::error::Result;
use crate::eval::tune::ParamGrid;
use crate::model::{KnnParams, Predictor};
use crate::wknn::WkNNModel;
use crate::wknnir::WkNNIRModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Wknn,
    Wknnir,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Wknn => "WkNN",
            Method::Wknnir => "WkNNIR",
        })
    }
}

impl Method {
    pub fn fit(self, ds: DtiDataset, params: KnnParams) -> Result<Box<dyn Predictor>> {
        Ok(match self {
            Method::Wknn => Box::new(WkNNModel::fit(ds, params)?),
            Method::Wknnir => Box::new(WkNNIRModel::fit(ds, params)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamChoice {
    Fixed(KnnParams),
    /// Grid search by inner CV on each training split. `inner_folds` falls
    /// back to the per-setting default.
    Tuned {
        grid: ParamGrid,
        inner_folds: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerSpec {
    pub method: Method,
    pub params: ParamChoice,
    /// Parameters of an ensemble are those selected for the base method.
    pub ensemble: Option<EnsembleConfig>,
}

impl LearnerSpec {
    pub fn fixed(method: Method, params: KnnParams) -> Self {
        Self {
            method,
            params: ParamChoice::Fixed(params),
            ensemble: None,
        }
    }

    pub fn tuned(method: Method) -> Self {
        Self {
            method,
            params: ParamChoice::Tuned {
                grid: ParamGrid::default(),
                inner_folds: None,
            },
            ensemble: None,
        }
    }

    pub fn with_ensemble(mut self, config: EnsembleConfig) -> Self {
        self.ensemble = Some(config);
        self
    }

    /// e.g. `WkNNIR`, `ELS-WkNN`.
    pub fn name(&self) -> String {
        match &self.ensemble {
            None => self.method.to_string(),
            Some(cfg) => {
                let prefix = match cfg.strategy.kind {
                    SamplingKind::Uniform => "ERS",
                    SamplingKind::Global => "EGS",
                    SamplingKind::Local => "ELS",
                };
                format!("{prefix}-{}", self.method)
            }
        }
    }

    pub fn fit_with(&self, ds: DtiDataset, params: KnnParams) -> Result<Box<dyn Predictor>> {
        params.validate()?;
        let method = self.method;
        match &self.ensemble {
            None => method.fit(ds, params),
            Some(cfg) => Ok(match method {
                Method::Wknn => {
                    Box::new(train_ensemble(ds, |sub| WkNNModel::fit(sub, params), cfg)?)
                }
                Method::Wknnir => Box::new(train_ensemble(
                    ds,
                    |sub| WkNNIRModel::fit(sub, params),
                    cfg,
                )?),
            }),
        }
    }
}
