//! Side-by-side comparison of the Pfaffian path with the spin-basis oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ed::{ed_measure, ed_single_site, ed_two_site_rdm, EdSystem, SiteOp, SpinOperator};
use crate::error::Result;
use crate::model::Quench;
use crate::odd::{string_operator, CrossParityKernel};
use crate::rdm::concurrence;
use crate::series::snapshot;

/// Largest absolute deviation per observable over a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub n_sites: usize,
    pub g: f64,
    pub time_points: usize,
    pub max_deviation: BTreeMap<String, f64>,
}

impl OracleComparison {
    /// `(observable, deviation)` of the worst entry.
    pub fn worst(&self) -> (&str, f64) {
        self.max_deviation
            .iter()
            .fold(("", 0.0), |best, (k, &v)| if v > best.1 || v.is_nan() { (k.as_str(), v) } else { best })
    }
}

/// Every observable of the Pfaffian path against ED: magnetizations,
/// purity, `<X_j>` for all `j`, all RDM entries, the four correlators and the
/// concurrence.
pub fn compare_with_oracle(n_sites: usize, g: f64, times: &[f64]) -> Result<OracleComparison> {
    let ed = EdSystem::new(n_sites, g)?;
    let quench = Quench::new(n_sites, g)?;
    let mut max_deviation = BTreeMap::new();
    let mut record = |name: String, a: f64, b: f64| {
        let d = (a - b).abs();
        let slot = max_deviation.entry(name).or_insert(0.0f64);
        *slot = if d.is_nan() { f64::NAN } else { slot.max(d) };
    };
    for &t in times {
        let snap = snapshot(&quench, t)?;
        let rec = snap.record();
        let psi = ed.evolve(t)?;
        let bloch = ed_single_site(&psi, 1)?;
        record("sx".into(), rec.sx, bloch.bloch[0]);
        record("sy".into(), rec.sy, bloch.bloch[1]);
        record("sz".into(), rec.sz, bloch.bloch[2]);
        record("purity".into(), rec.purity, bloch.purity());

        let kernel = CrossParityKernel::new(&quench.state_at(t));
        for j in 1..=n_sites {
            let x = string_operator(&kernel.amplitude(j)?);
            record(format!("X_{j:02}"), x, ed_measure(&psi, &SpinOperator::string_x(j))?.re);
        }

        let rdm = ed_two_site_rdm(&psi)?;
        for r in 0..4 {
            for s in 0..4 {
                let (a, b) = (snap.two_site.entry(r, s), rdm.entry(r, s));
                record(format!("rho{}{}", r + 1, s + 1), 0.0, (a - b).norm());
            }
        }
        let pair = |a, b| ed_measure(&psi, &SpinOperator::pair((1, a), (2, b))).map(|z| z.re);
        record("czz".into(), rec.czz, pair(SiteOp::Z, SiteOp::Z)?);
        record("cxx".into(), rec.cxx, pair(SiteOp::X, SiteOp::X)?);
        record("cxy".into(), rec.cxy, pair(SiteOp::X, SiteOp::Y)?);
        record("cxz".into(), rec.cxz, pair(SiteOp::X, SiteOp::Z)?);
        record("concurrence".into(), rec.concurrence, concurrence(&rdm)?);
    }
    Ok(OracleComparison {
        n_sites,
        g,
        time_points: times.len(),
        max_deviation,
    })
}
