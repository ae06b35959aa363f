use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::corpus::SectionInstance;

/// How training data is grouped into models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Setup {
    /// One group per domain, all languages pooled.
    #[serde(rename = "multi-lingual")]
    MultiLingual,
    /// One group per language, all domains pooled.
    #[serde(rename = "multi-domain")]
    MultiDomain,
    /// A single group.
    #[serde(rename = "multi-lingual-multi-domain")]
    MultiLingualMultiDomain,
}

impl Setup {
    pub const ALL: [Setup; 3] = [
        Setup::MultiLingual,
        Setup::MultiDomain,
        Setup::MultiLingualMultiDomain,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Setup::MultiLingual => "multi-lingual",
            Setup::MultiDomain => "multi-domain",
            Setup::MultiLingualMultiDomain => "multi-lingual-multi-domain",
        }
    }

    pub fn group_key(self, instance: &SectionInstance) -> String {
        match self {
            Setup::MultiLingual => instance.domain.label().to_string(),
            Setup::MultiDomain => instance.language.code().to_string(),
            Setup::MultiLingualMultiDomain => "all".to_string(),
        }
    }
}

impl fmt::Display for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Setup {
    type Err = PipelineError;

    /// Accepts the full labels and the short forms `ml`, `md`, `mlmd`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ml" | "multi-lingual" => Ok(Setup::MultiLingual),
            "md" | "multi-domain" => Ok(Setup::MultiDomain),
            "mlmd" | "multi-lingual-multi-domain" => Ok(Setup::MultiLingualMultiDomain),
            other => Err(PipelineError::UnknownSetup(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetupPartition {
    pub setup: Setup,
    pub groups: BTreeMap<String, Vec<SectionInstance>>,
}

impl SetupPartition {
    pub fn group_sizes(&self) -> BTreeMap<String, usize> {
        self.groups.iter().map(|(k, v)| (k.clone(), v.len())).collect()
    }
}

/// Group instances by the setup's key. Order within a group follows the
/// input.
pub fn partition(corpus: &[SectionInstance], setup: Setup) -> SetupPartition {
    let mut groups: BTreeMap<String, Vec<SectionInstance>> = BTreeMap::new();
    for inst in corpus {
        groups.entry(setup.group_key(inst)).or_default().push(inst.clone());
    }
    SetupPartition { setup, groups }
}
