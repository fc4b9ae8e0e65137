//! Field profiles written one CSV per time.

use ckdv::families::AnalyticPair;
use ckdv::lattice::Window;
use ckdv::output::snapshot_name;

use crate::run::Run;
use crate::CliError;

/// Writes `x,u,v[,w,y]` for every time and returns the file names.
pub fn write_profiles(
    run: &mut Run,
    pair: &AnalyticPair,
    x: &Window,
    times: &[f64],
    potentials: bool,
) -> Result<Vec<String>, CliError> {
    let xs: Vec<f64> = x.points().collect();
    let mut names = Vec::new();
    for &t in times {
        let mut cols: [Vec<f64>; 4] = Default::default();
        for &xi in &xs {
            let j = pair.eval(xi, t, 0, 0)?;
            for (c, v) in cols
                .iter_mut()
                .zip([j.u.value(), j.v.value(), j.w.value(), j.y.value()])
            {
                c.push(v);
            }
        }
        let [u, v, w, y] = &cols;
        let mut columns: Vec<(&str, &[f64])> = vec![("x", &xs), ("u", u), ("v", v)];
        if potentials {
            columns.extend([("w", &w[..]), ("y", &y[..])]);
        }
        let name = snapshot_name(&run.run_id, t);
        run.csv(name.clone(), &columns)?;
        names.push(name);
    }
    Ok(names)
}
