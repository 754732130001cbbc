//! Scalar summaries of a trajectory for sweep tables.

use thermoduet::{Approach, Subsystem, ThermoTrajectory};

/// Late-to-early variance ratio below which a series counts as a plateau.
pub const PLATEAU_THRESHOLD: f64 = 0.05;
/// Fraction of the window used for the early and late variances.
pub const PLATEAU_FRACTION: f64 = 0.2;
/// Balances below this fraction of the exchange scale count as zero.
pub const ZERO_BALANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Du,
    Dq,
    Dw,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::Du, Quantity::Dq, Quantity::Dw];

    pub fn label(self) -> &'static str {
        match self {
            Quantity::Du => "dU",
            Quantity::Dq => "dQ",
            Quantity::Dw => "dW",
        }
    }
}

fn pick(q: &thermoduet::thermo::Quantities, which: Quantity) -> &[Option<f64>] {
    match which {
        Quantity::Du => &q.du,
        Quantity::Dq => &q.dq,
        Quantity::Dw => &q.dw,
    }
}

fn max_abs(v: &[Option<f64>]) -> f64 {
    v.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// `max_t |balance| / max_{t,x} |quantity_x|` for one approach and quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceRatio {
    pub approach: Approach,
    pub quantity: Quantity,
    /// `None` when neither subsystem exchanges this quantity.
    pub ratio: Option<f64>,
}

impl BalanceRatio {
    /// True for balances that vanish identically or have nothing to compare against.
    pub fn is_zero(&self) -> bool {
        self.ratio.map_or(true, |r| r <= ZERO_BALANCE)
    }

    pub fn column(&self) -> String {
        format!("ratio_{}_{}", self.quantity.label(), self.approach.label())
    }
}

pub fn balance_ratios(traj: &ThermoTrajectory) -> Vec<BalanceRatio> {
    let balances = traj.balances();
    let mut out = Vec::with_capacity(12);
    for a in Approach::ALL {
        for q in Quantity::ALL {
            let bal = max_abs(pick(&balances[a.index()], q));
            let scale = Subsystem::BOTH.iter().map(|&x| max_abs(pick(traj.quantities(x, a), q))).fold(0.0, f64::max);
            let ratio = if scale > 0.0 { Some(bal / scale) } else { None };
            out.push(BalanceRatio { approach: a, quantity: q, ratio });
        }
    }
    out
}

/// Variance of the last [`PLATEAU_FRACTION`] of a series over that of the first.
pub fn plateau_ratio(series: &[f64]) -> Option<f64> {
    let k = ((series.len() as f64) * PLATEAU_FRACTION).floor() as usize;
    if k < 2 {
        return None;
    }
    let var = |s: &[f64]| {
        let m = s.iter().sum::<f64>() / s.len() as f64;
        s.iter().map(|v| (v - m).powi(2)).sum::<f64>() / s.len() as f64
    };
    let early = var(&series[..k]);
    let late = var(&series[series.len() - k..]);
    if early == 0.0 {
        None
    } else {
        Some(late / early)
    }
}

/// Plateau ratio of the bare energy change of subsystem `x`.
pub fn energy_plateau(traj: &ThermoTrajectory, x: Subsystem) -> Option<f64> {
    let e = traj.energies();
    let s: Vec<f64> = e.iter().map(|v| v.e[x.index()] - e[0].e[x.index()]).collect();
    plateau_ratio(&s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_detects_settling() {
        let settling: Vec<f64> = (0..100).map(|j| (-(j as f64) / 5.0).exp() * (j as f64).sin()).collect();
        assert!(plateau_ratio(&settling).unwrap() < PLATEAU_THRESHOLD);
        let steady: Vec<f64> = (0..100).map(|j| (j as f64 * 0.7).sin()).collect();
        assert!(plateau_ratio(&steady).unwrap() > PLATEAU_THRESHOLD);
        assert_eq!(plateau_ratio(&[1.0; 4]), None);
    }
}
