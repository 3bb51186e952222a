//! Prints the reference room's received power per RIS setting.

use risray_core::{probe_reports, PropagationParams, Scene};

fn main() {
    let scene = Scene::reference();
    let report = probe_reports(&scene, &PropagationParams::default()).expect("reference scene");
    println!("angle_deg {}", report.receiver_ids.join(" "));
    for (angle, row) in scene.ris.angle_set_deg.iter().zip(&report.rows) {
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.2}")).collect();
        println!("{angle:>9} {}", cells.join(" "));
    }
}
