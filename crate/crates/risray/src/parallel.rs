//! Multi-threaded versions of the map and probe computations. Results are
//! bit-identical to the serial functions in `risray_core`.

use rayon::prelude::*;
use risray_core::propagation::{CellEvaluator, MapGrid};
use risray_core::simulation::receiver_powers;
use risray_core::{
    Bounds, PowerMap, ProbeReport, PropagationParams, Result, Scene, Transmitter, Wall,
};

pub fn power_map(
    tx: &Transmitter,
    walls: &[Wall],
    bounds: &Bounds,
    resolution: f64,
    params: &PropagationParams,
) -> Result<PowerMap> {
    let grid = MapGrid::new(bounds, resolution)?;
    let eval = CellEvaluator::new(tx, walls, params);
    let values = (0..grid.len())
        .into_par_iter()
        .map(|k| eval.value_at(grid.cell_center(k)))
        .collect();
    Ok(PowerMap::from_values(grid, values))
}

pub fn probe_reports(scene: &Scene, params: &PropagationParams) -> Result<ProbeReport> {
    scene.ensure_valid()?;
    let rows = (0..scene.ris.setting_count())
        .into_par_iter()
        .map(|s| receiver_powers(scene, &scene.walls_for_setting(s)?, params))
        .collect::<Result<Vec<_>>>()?;
    ProbeReport::new(scene.receivers.iter().map(|r| r.id.clone()).collect(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_serial() {
        let scene = Scene::reference();
        let params = PropagationParams::default();
        let walls = scene.walls_for_setting(2).unwrap();
        let serial =
            risray_core::power_map(&scene.tx, &walls, &scene.bounds, 0.5, &params).unwrap();
        let par = power_map(&scene.tx, &walls, &scene.bounds, 0.5, &params).unwrap();
        assert_eq!(serial, par);
        assert_eq!(
            risray_core::probe_reports(&scene, &params).unwrap(),
            probe_reports(&scene, &params).unwrap()
        );
    }
}
