//! Deterministic end-to-end simulator for electromagnetic signal injection
//! against interline-transfer CCD image sensors.
//!
//! The crate models the full chain: scene exposure and charge generation,
//! serialized CCD readout through a single measurement unit, amplification
//! and quantization, Bayer demosaicing, the attacker's AM signal pipeline,
//! the free-space RF channel with a resonant coupling profile, image-quality
//! metrics (SSIM family), an EAN-13 barcode victim application, and an
//! exposure-probing detection countermeasure.
//!
//! Everything is pure given `(inputs, config, seed)`: identical invocations
//! produce bit-identical frames, CSV files, and reports.

pub mod attack;
pub mod barcode;
pub mod correlate;
pub mod coupling;
pub mod error;
pub mod experiments;
pub mod io;
pub mod metrics;
pub mod profiles;
pub mod rng;
pub mod sensor;

pub use error::{Error, Result};
pub use sensor::{
    capture_sequence, demosaic, expose, readout, AttackScenario, CaptureSequence, CfaPattern,
    ChargeFrame, OffsetPolicy, RawFrame, RgbFrame, Scene, SensorArchitecture, SensorConfig,
};
