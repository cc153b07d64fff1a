//! Capture manifest: everything needed to reproduce a run byte for byte.

use serde::{Deserialize, Serialize};

use crate::coupling::ChannelConfig;
use crate::sensor::SensorConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackManifest {
    pub source: String,
    pub symbol_rate: f64,
    pub carrier_hz: f64,
    pub channel: ChannelConfig,
    pub offset_samples: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureManifest {
    pub seed: u64,
    pub n_frames: usize,
    pub sensor: SensorConfig,
    #[serde(default)]
    pub attack: Option<AttackManifest>,
    pub frames: Vec<String>,
    pub raws: Vec<String>,
}
