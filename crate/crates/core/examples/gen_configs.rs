//! Regenerates the JSON documents under configs/ from the built-in
//! profiles and default plans. Run from the repository root:
//!
//!     cargo run --example gen_configs

use std::path::Path;

use ccdsim::experiments::{
    default_barcode_plan, default_detector_plan, default_distance_plan, default_frequency_plan,
    default_power_plan, SceneSpec,
};
use ccdsim::io::save_json;
use ccdsim::profiles;

fn main() {
    let dir = Path::new("configs");
    std::fs::create_dir_all(dir).unwrap();

    save_json(&dir.join("dfm_desk.json"), &profiles::dfm_desk()).unwrap();
    save_json(&dir.join("cctv_analog.json"), &profiles::cctv_analog()).unwrap();
    save_json(&dir.join("cmos_desk.json"), &profiles::cmos_desk()).unwrap();
    save_json(&dir.join("channel_bench.json"), &profiles::bench_channel()).unwrap();
    save_json(&dir.join("channel_barcode.json"), &profiles::barcode_channel()).unwrap();
    save_json(&dir.join("plan_frequency.json"), &default_frequency_plan()).unwrap();
    save_json(&dir.join("plan_power.json"), &default_power_plan()).unwrap();
    save_json(&dir.join("plan_distance.json"), &default_distance_plan()).unwrap();
    save_json(&dir.join("plan_barcode.json"), &default_barcode_plan()).unwrap();
    save_json(
        &dir.join("plan_defend_dark.json"),
        &default_detector_plan(SceneSpec::Dark, false),
    )
    .unwrap();
    println!("wrote configs/");
}
