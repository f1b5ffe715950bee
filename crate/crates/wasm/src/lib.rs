//! Browser bindings: closed-form final distributions, the bound constants and
//! a small spectral run comparing both sides at one `(h, D)`.

use qcthreshold::closedform::{constants, FinalPdf, Side};
use qcthreshold::evolver::{evolve, EvolverConfig};
use qcthreshold::field::{FieldKind, PhaseSpaceField};
use qcthreshold::grid::{plan_grid, GridConfig};
use qcthreshold::momentum::{l1_distance, ObservableSpec};
use qcthreshold::params::SemiclassicalParams;
use qcthreshold::schedule::Schedule;
use wasm_bindgen::prelude::*;

const MEMORY_BUDGET: usize = 512 << 20;

fn js_err(e: qcthreshold::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn side(name: &str) -> Result<Side, JsError> {
    match name {
        "quantum" => Ok(Side::Quantum),
        "classical" => Ok(Side::Classical),
        _ => Err(JsError::new("side must be \"quantum\" or \"classical\"")),
    }
}

/// Closed-form final momentum density at standard durations, sampled at
/// `p0 + j dp` for `j < n`.
#[wasm_bindgen(js_name = finalPdf)]
pub fn final_pdf(which: &str, tau2: f64, p0: f64, dp: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let pdf = FinalPdf::standard(side(which)?, tau2).map_err(js_err)?;
    Ok(pdf.sample(p0, dp, n).map_err(js_err)?.values)
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Constants {
    pub tau2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c_qu: f64,
    pub c_cl: f64,
    pub c_bar: f64,
    pub c0: f64,
    pub c_total: f64,
}

#[wasm_bindgen(js_name = boundConstants)]
pub fn bound_constants(tau2: f64) -> Result<Constants, JsError> {
    let k = constants(tau2).map_err(js_err)?;
    Ok(Constants {
        tau2: k.tau2,
        c1: k.c1,
        c2: k.c2,
        c3: k.c3,
        c4: k.c4,
        c5: k.c5,
        c_qu: k.c_qu,
        c_cl: k.c_cl,
        c_bar: k.c_bar,
        c0: k.c0,
        c_total: k.c_total,
    })
}

/// Final momentum marginals of one spectral run per side.
#[wasm_bindgen]
pub struct Comparison {
    p0: f64,
    dp: f64,
    quantum: Vec<f64>,
    classical: Vec<f64>,
    discrepancy: f64,
    l1: f64,
}

#[wasm_bindgen]
impl Comparison {
    #[wasm_bindgen(getter)]
    pub fn p0(&self) -> f64 {
        self.p0
    }

    #[wasm_bindgen(getter)]
    pub fn dp(&self) -> f64 {
        self.dp
    }

    #[wasm_bindgen(getter)]
    pub fn quantum(&self) -> Vec<f64> {
        self.quantum.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn classical(&self) -> Vec<f64> {
        self.classical.clone()
    }

    /// `|<exp(-p^2)>_quantum - <exp(-p^2)>_classical|`
    #[wasm_bindgen(getter)]
    pub fn discrepancy(&self) -> f64 {
        self.discrepancy
    }

    #[wasm_bindgen(getter)]
    pub fn l1(&self) -> f64 {
        self.l1
    }
}

/// Evolves both sides at `D = d_scaled h^{4/3}` through the standard schedule.
#[wasm_bindgen]
pub fn compare(h: f64, d_scaled: f64, substeps: usize) -> Result<Comparison, JsError> {
    let d = d_scaled * h.powf(4.0 / 3.0);
    let s = Schedule::standard(h).map_err(js_err)?;
    let p = SemiclassicalParams::from_h(h, d).map_err(js_err)?;
    let grid = plan_grid(&GridConfig::default(), &s, &p, MEMORY_BUDGET).map_err(js_err)?;
    let cfg = EvolverConfig::default().with_substeps(substeps);
    let mut marginals = Vec::with_capacity(2);
    for kind in [FieldKind::QuantumWigner, FieldKind::Classical] {
        let f0 = PhaseSpaceField::initial_coherent(&p, &grid, kind).map_err(js_err)?;
        let out = evolve(&f0, &s, &p, &cfg).map_err(js_err)?;
        marginals.push(out.final_field.momentum_marginal());
    }
    let (q, c) = (&marginals[0], &marginals[1]);
    let g0 = ObservableSpec::g0();
    Ok(Comparison {
        p0: q.p0,
        dp: q.dp,
        discrepancy: (q.expect(g0) - c.expect(g0)).abs(),
        l1: l1_distance(q, c).map_err(js_err)?,
        quantum: q.values.clone(),
        classical: c.values.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_and_constants() {
        let q = final_pdf("quantum", 1.0, 0.0, 1.0, 2).unwrap();
        assert!(q[0] > 0.0 && q[1] > 0.0);
        assert!((bound_constants(1.0).unwrap().c0 - 0.06412).abs() < 1e-4);
    }

    #[test]
    fn compare_closed_system() {
        let c = compare(0.2, 0.0, 200).unwrap();
        assert!((c.discrepancy() - 0.06412).abs() < 2e-3);
        assert_eq!(c.quantum().len(), c.classical().len());
    }
}
