//! Python bindings. Rationals cross the boundary as "p/q" strings.

use std::collections::HashMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gcikit::config::RunConfig;
use gcikit::exact::rat::{fmt_rat, parse_rat};
use gcikit::fourpoint::PWParams;
use gcikit::{partialwave, thermal, verify, GciError};

fn py_err(e: GciError) -> PyErr {
    match e {
        GciError::Usage(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn params_from(map: Option<HashMap<String, String>>) -> PyResult<PWParams> {
    let mut p = PWParams::zero();
    for (k, v) in map.unwrap_or_default() {
        let r = parse_rat(&v).map_err(py_err)?;
        match k.as_str() {
            "a0" => p.a0 = r,
            "a1" => p.a1 = r,
            "a2" => p.a2 = r,
            "b" => p.b = r,
            "c" => p.c = r,
            "B" => p.big_b = r,
            _ => return Err(PyValueError::new_err(format!("unknown parameter '{k}'"))),
        }
    }
    p.validate().map_err(py_err)?;
    Ok(p)
}

/// Structure constants as (kappa, l, "p/q") triples.
#[pyfunction]
#[pyo3(signature = (params=None, max_twist=3, max_spin=4))]
fn decompose(
    params: Option<HashMap<String, String>>,
    max_twist: usize,
    max_spin: usize,
) -> PyResult<Vec<(usize, usize, String)>> {
    let p = params_from(params)?;
    let sc = partialwave::decompose(&p, max_twist, max_spin).map_err(py_err)?;
    Ok(sc
        .entries
        .iter()
        .map(|((k, l), b)| (*k, *l, fmt_rat(b)))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (kappa, l, params=None))]
fn closed_form_b(
    kappa: usize,
    l: usize,
    params: Option<HashMap<String, String>>,
) -> PyResult<String> {
    let p = params_from(params)?;
    partialwave::closed_form_b(kappa, l, &p)
        .map(|b| fmt_rat(&b))
        .map_err(py_err)
}

/// Verdict string ("admissible", "trivial" or "rejected").
#[pyfunction]
#[pyo3(signature = (params=None, l_scan=50))]
fn positivity(params: Option<HashMap<String, String>>, l_scan: usize) -> PyResult<String> {
    let p = params_from(params)?;
    let r = partialwave::positivity_check(&p, l_scan, 3, 4).map_err(py_err)?;
    Ok(format!("{:?}", r.verdict).to_lowercase())
}

/// (eigenvalue, order of vanishing) for ν.
#[pyfunction]
fn eigen(nu: u32) -> PyResult<(String, u32)> {
    let r = gcikit::fourpoint::eigen_check(nu).map_err(py_err)?;
    Ok((fmt_rat(&r.lambda), r.sigma))
}

/// Energy mean value coefficients as ("exponent", "p/q") pairs, exponents in units of q.
#[pyfunction]
#[pyo3(signature = (model, order=10))]
fn energy_series(model: &str, order: usize) -> PyResult<Vec<(String, String)>> {
    let series = if model == "weyl" {
        thermal::energy_mean_weyl(order, &thermal::weyl_vacuum_energy())
    } else {
        let dim: u64 = model
            .strip_prefix("scalar")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| PyValueError::new_err(format!("unknown model '{model}'")))?;
        thermal::energy_mean_scalar(dim, order, None)
            .map_err(py_err)?
            .series
    };
    Ok(series
        .terms()
        .map(|(k, c)| {
            let e = if k % 2 == 0 {
                format!("{}/1", k / 2)
            } else {
                format!("{k}/2")
            };
            (e, fmt_rat(c))
        })
        .collect())
}

/// G₂ₖ(τ) as a (re, im) pair.
#[pyfunction]
#[pyo3(signature = (k, tau_re, tau_im, terms=200))]
fn eisenstein(k: usize, tau_re: f64, tau_im: f64, terms: usize) -> PyResult<(f64, f64)> {
    let (v, _) =
        thermal::eisenstein_numeric(k, Complex64::new(tau_re, tau_im), terms).map_err(py_err)?;
    Ok((v.re, v.im))
}

/// Runs one acceptance check; returns (passed, summary line).
#[pyfunction]
#[pyo3(signature = (id, seed=None))]
fn run_check(id: u32, seed: Option<u64>) -> PyResult<(bool, String)> {
    let mut cfg = RunConfig::default();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let c = verify::run_check(id, &cfg).map_err(py_err)?;
    Ok((c.passed, c.line()))
}

/// Free-field oracle; returns (passed, {n: "c_n"}).
#[pyfunction]
#[pyo3(signature = (n=None, count=None, corrupt_sign=false))]
fn oracle(
    n: Option<usize>,
    count: Option<usize>,
    corrupt_sign: bool,
) -> PyResult<(bool, HashMap<usize, String>)> {
    let r = verify::run_oracle(
        &RunConfig::default(),
        &verify::OracleOptions {
            n,
            count,
            corrupt_sign,
        },
    )
    .map_err(py_err)?;
    Ok((r.passed, r.fitted_cn.into_iter().collect()))
}

#[pymodule]
fn pygcikit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_b, m)?)?;
    m.add_function(wrap_pyfunction!(positivity, m)?)?;
    m.add_function(wrap_pyfunction!(eigen, m)?)?;
    m.add_function(wrap_pyfunction!(energy_series, m)?)?;
    m.add_function(wrap_pyfunction!(eisenstein, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    Ok(())
}
