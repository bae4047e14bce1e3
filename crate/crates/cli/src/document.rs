//! Input descriptor files and the machine-readable report document.

use serde::{Deserialize, Serialize};
use surfaut_core::blowup::{ChainPoint, Stabilizer, WeightedChart};
use surfaut_core::classifier::{ClassificationReport, SurfaceDescriptor};
use surfaut_core::elliptic::{FiniteGroupId, NormalizerReport, TauClass, TorsionPoint};
use surfaut_core::lattice::FinAbGroup;
use surfaut_core::orbifold::{FibreIdentification, OrbifoldSignature, SwapVerdict};

pub const SCHEMA: &str = "surfaut-report/1";
pub const FORMAT_VERSIONS: &[&str] = &["1"];
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorFile {
    pub format_version: String,
    pub surface: SurfaceDescriptor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema: String,
    pub tool_version: String,
    pub result: CommandOutput,
}

impl ReportDocument {
    pub fn new(result: CommandOutput) -> Self {
        ReportDocument { schema: SCHEMA.to_string(), tool_version: TOOL_VERSION.to_string(), result }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "output", rename_all = "kebab-case")]
pub enum CommandOutput {
    Classify(ClassifyOutput),
    ClassifyBatch(Vec<BatchItem>),
    Orbifold(OrbifoldOutput),
    Bdf(BdfOutput),
    BlowupChain(ChainOutput),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyOutput {
    pub source: String,
    pub descriptor: DescriptorFile,
    pub report: ClassificationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchItem {
    pub source: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<ClassifyOutput>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbifoldOutput {
    pub signature: OrbifoldSignature,
    pub abelianization: FinAbGroup,
    pub abelianization_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap: Option<SwapOutput>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwapOutput {
    pub i: usize,
    pub j: usize,
    pub base_genus: u64,
    pub verdict: SwapVerdict,
    pub classes_identified: bool,
    /// SNF witness or infeasibility certificate; verbose only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identification: Option<FibreIdentification>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BdfOutput {
    #[serde(rename = "type")]
    pub type_index: u8,
    pub curve: TauClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<TorsionPoint>,
    pub quotient: FiniteGroupId,
    pub quotient_text: String,
    pub order: u64,
    pub maximum_attained: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalizer: Option<NormalizerReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainOutput {
    pub n: u64,
    pub point: ChainPoint,
    pub final_weights: WeightedChart,
    pub stabilizer: Stabilizer,
    pub conclusion: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightedChart>>,
}
