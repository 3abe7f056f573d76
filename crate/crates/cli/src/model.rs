//! Hidden-variable model files.
//!
//! A model file is a JSON object with `d`, `type` and a payload:
//!
//! ```json
//! {"d": 2, "type": "deterministic", "assignment": [0, 1, 1, 0]}
//! {"d": 2, "type": "joint4", "p": [/* d^4 entries, (j,k,l,m) lexicographic */]}
//! {"d": 2, "type": "product", "a1": [..], "a2": [..], "b1": [..], "b2": [..]}
//! {"d": 2, "type": "box", "tables": {"A1B1": [..], "A1B2": [..], "A2B1": [..], "A2B2": [..]}}
//! {"d": 2, "type": "mixture", "components": [{"weight": 0.5, "type": "joint4", "p": [..]}, ..]}
//! ```
//!
//! Box tables are row-major `d × d` with the A outcome as the row. Mixture
//! components use the deterministic, joint4 and product payloads.

use std::path::Path;

use cglmp_core::hvt::{
    DeterministicAssignment, HiddenVariableMixture, HvtComponent, JointDistribution4, OneObservableBox,
    ProductModelLHVT,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxTables {
    #[serde(rename = "A1B1")]
    pub a1b1: Vec<f64>,
    #[serde(rename = "A1B2")]
    pub a1b2: Vec<f64>,
    #[serde(rename = "A2B1")]
    pub a2b1: Vec<f64>,
    #[serde(rename = "A2B2")]
    pub a2b2: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelSpec {
    Deterministic {
        assignment: [usize; 4],
    },
    Joint4 {
        p: Vec<f64>,
    },
    Product {
        a1: Vec<f64>,
        a2: Vec<f64>,
        b1: Vec<f64>,
        b2: Vec<f64>,
    },
    Box {
        tables: BoxTables,
    },
    Mixture {
        components: Vec<WeightedSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSpec {
    pub weight: f64,
    #[serde(flatten)]
    pub model: ModelSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub d: usize,
    #[serde(flatten)]
    pub model: ModelSpec,
}

impl ModelSpec {
    pub fn type_name(&self) -> &'static str {
        match self {
            ModelSpec::Deterministic { .. } => "deterministic",
            ModelSpec::Joint4 { .. } => "joint4",
            ModelSpec::Product { .. } => "product",
            ModelSpec::Box { .. } => "box",
            ModelSpec::Mixture { .. } => "mixture",
        }
    }
}

/// A validated model.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Hvt(HiddenVariableMixture),
    Box(OneObservableBox),
}

fn component(d: usize, spec: &ModelSpec) -> Result<HvtComponent, CliError> {
    Ok(match spec {
        ModelSpec::Deterministic {
            assignment: [j, k, l, m],
        } => HvtComponent::Deterministic(DeterministicAssignment::new(d, *j, *k, *l, *m)?),
        ModelSpec::Joint4 { p } => HvtComponent::Joint(JointDistribution4::new(d, p.clone())?),
        ModelSpec::Product { a1, a2, b1, b2 } => HvtComponent::Product(ProductModelLHVT::new(
            d,
            a1.clone(),
            a2.clone(),
            b1.clone(),
            b2.clone(),
        )?),
        other => {
            return Err(CliError::Usage(format!(
                "a {} model cannot be a mixture component",
                other.type_name()
            )))
        }
    })
}

impl ModelFile {
    pub fn build(&self) -> Result<Model, CliError> {
        let d = self.d;
        Ok(match &self.model {
            ModelSpec::Box { tables } => Model::Box(OneObservableBox::new(
                d,
                [
                    tables.a1b1.clone(),
                    tables.a1b2.clone(),
                    tables.a2b1.clone(),
                    tables.a2b2.clone(),
                ],
            )?),
            ModelSpec::Mixture { components } => {
                let parts = components
                    .iter()
                    .map(|c| Ok((c.weight, component(d, &c.model)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                Model::Hvt(HiddenVariableMixture::new(d, parts)?)
            }
            single => Model::Hvt(HiddenVariableMixture::single(d, component(d, single)?)?),
        })
    }
}

pub fn parse_model(text: &str) -> Result<(ModelFile, Model), CliError> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid model file: {e}")))?;
    let model = file.build()?;
    Ok((file, model))
}

pub fn load_model(path: &Path) -> Result<(ModelFile, Model), CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cglmp_core::Error;

    #[test]
    fn loads_each_type() {
        let cases = [
            r#"{"d": 2, "type": "deterministic", "assignment": [0, 1, 1, 0]}"#,
            r#"{"d": 2, "type": "product", "a1": [0.5, 0.5], "a2": [1, 0], "b1": [0.25, 0.75], "b2": [0, 1]}"#,
            r#"{"d": 2, "type": "box", "tables": {"A1B1": [0.5,0,0,0.5], "A1B2": [0.5,0,0,0.5], "A2B1": [0.5,0,0,0.5], "A2B2": [0,0.5,0.5,0]}}"#,
            r#"{"d": 2, "type": "mixture", "components": [
                {"weight": 0.25, "type": "deterministic", "assignment": [0, 0, 0, 0]},
                {"weight": 0.75, "type": "product", "a1": [1, 0], "a2": [1, 0], "b1": [1, 0], "b2": [0, 1]}]}"#,
        ];
        for text in cases {
            parse_model(text).unwrap();
        }
        let uniform = format!(
            r#"{{"d": 2, "type": "joint4", "p": [{}]}}"#,
            vec!["0.0625"; 16].join(",")
        );
        assert!(matches!(parse_model(&uniform).unwrap().1, Model::Hvt(_)));
    }

    #[test]
    fn enforces_invariants() {
        let bad_sum = r#"{"d": 2, "type": "product", "a1": [0.5, 0.6], "a2": [1, 0], "b1": [1, 0], "b2": [0, 1]}"#;
        assert!(matches!(
            parse_model(bad_sum),
            Err(CliError::Core(Error::InvalidDistribution(_)))
        ));
        let range = r#"{"d": 2, "type": "deterministic", "assignment": [0, 2, 1, 0]}"#;
        assert!(matches!(
            parse_model(range),
            Err(CliError::Core(Error::OutcomeOutOfRange { outcome: 2, d: 2 }))
        ));
        let nested =
            r#"{"d": 2, "type": "mixture", "components": [{"weight": 1, "type": "mixture", "components": []}]}"#;
        assert!(matches!(parse_model(nested), Err(CliError::Usage(_))));
        assert!(matches!(
            parse_model(r#"{"d": 2, "type": "mystery"}"#),
            Err(CliError::Usage(_))
        ));
    }
}
