//! Trajectory CSV emission.
//!
//! The first line is a `#` comment carrying the schema version; the header
//! row follows. Times are `t·ω₁`, energies are in units of `ω₁`, and missing
//! samples are empty fields.

use std::io::{self, Write};

use thermoduet::thermo::Quantities;
use thermoduet::{Approach, ThermoTrajectory};

use crate::config::{OutputGroup, ScenarioConfig};

pub const SCHEMA_LINE: &str = "# thermoduet trajectory csv v1";

type Series<'a> = Box<dyn Fn(usize) -> Option<f64> + 'a>;

struct Column<'a> {
    name: String,
    value: Series<'a>,
}

fn quantity_columns<'a>(
    prefix: &str,
    q: &'a Quantities,
    suffix: &str,
    scale: f64,
    groups: &[OutputGroup],
) -> Vec<Column<'a>> {
    let mut out = Vec::new();
    let series: [(OutputGroup, &str, &'a [Option<f64>]); 3] =
        [(OutputGroup::Energies, "dU", &q.du), (OutputGroup::Heats, "dQ", &q.dq), (OutputGroup::Works, "dW", &q.dw)];
    for (group, name, s) in series {
        if groups.contains(&group) {
            out.push(Column {
                name: format!("{prefix}{name}_{suffix}"),
                value: Box::new(move |j| s[j].map(|v| v / scale)),
            });
        }
    }
    out
}

fn columns<'a>(traj: &'a ThermoTrajectory, balances: &'a [Quantities; 4], cfg: &ScenarioConfig) -> Vec<Column<'a>> {
    let scale = cfg.params.omega1;
    let groups: Vec<OutputGroup> = cfg.outputs.iter().copied().collect();
    let times = traj.grid().times();
    let mut cols = vec![Column { name: "t_omega1".into(), value: Box::new(move |j| Some(times[j] * scale)) }];
    for &x in &cfg.roles {
        for a in Approach::ALL {
            cols.extend(quantity_columns(
                "",
                traj.quantities(x, a),
                &format!("{}_{}", x.label(), a.label()),
                scale,
                &groups,
            ));
        }
    }
    if groups.contains(&OutputGroup::Energies) {
        let ui = traj.interaction_variation();
        cols.push(Column { name: "dU_I".into(), value: Box::new(move |j| Some(ui[j] / scale)) });
    }
    if groups.contains(&OutputGroup::Balances) {
        let all = [OutputGroup::Energies, OutputGroup::Heats, OutputGroup::Works];
        for a in Approach::ALL {
            cols.extend(quantity_columns("bal_", &balances[a.index()], a.label(), scale, &all));
        }
    }
    if groups.contains(&OutputGroup::EffectiveHamiltonianTrace) {
        for &x in &cfg.roles {
            let tr = traj.trace_k(x);
            cols.push(Column {
                name: format!("trK_{}", x.label()),
                value: Box::new(move |j| tr[j].map(|v| v / scale)),
            });
        }
    }
    cols
}

/// Header names for a configuration, in emission order.
pub fn header(traj: &ThermoTrajectory, cfg: &ScenarioConfig) -> Vec<String> {
    let b = traj.balances();
    columns(traj, &b, cfg).into_iter().map(|c| c.name).collect()
}

pub fn write_csv<W: Write>(traj: &ThermoTrajectory, cfg: &ScenarioConfig, mut w: W) -> io::Result<()> {
    let balances = traj.balances();
    let cols = columns(traj, &balances, cfg);
    writeln!(w, "{SCHEMA_LINE}")?;
    let names: Vec<&str> = cols.iter().map(|c| c.name.as_str()).collect();
    writeln!(w, "{}", names.join(","))?;
    let mut row = String::new();
    for j in 0..traj.len() {
        row.clear();
        for (k, c) in cols.iter().enumerate() {
            if k > 0 {
                row.push(',');
            }
            if let Some(v) = (c.value)(j) {
                row.push_str(&format!("{:.12e}", v + 0.0));
            }
        }
        writeln!(w, "{row}")?;
    }
    w.flush()
}
