use anyhow::{bail, Result};
use serde_json::{json, Value};

use kgl_core::arith::{Local, RatFun};
use kgl_core::atlas::{chart_locate, stratum, verify_diagonalization};
use kgl_core::geniso::{from_matrix, from_matrix_with_smith, section_exponents, GenIso};
use kgl_core::matrix::MatK;
use kgl_core::report::Report;
use kgl_core::selftest::{run, Counts};
use kgl_core::strata::{decompose_stratum, grass_point, validate_decomposition};

use crate::json::{grid, read_input, texts, DecompositionJson, GenIsoJson, MatrixInput, PointInput};

pub struct Outcome {
    pub json: Value,
    /// False means the input was well formed but failed a check.
    pub ok: bool,
}

fn matrix_input(text: &str) -> Result<(MatrixInput, MatK)> {
    match read_input(text)?.point {
        PointInput::Matrix(m) => {
            let x = m.matrix()?;
            Ok((m, x))
        }
        PointInput::GenIso(_) => bail!("expected the matrix schema {{\"n\", \"entries\"}}"),
    }
}

fn one_based(p: &[usize]) -> Vec<usize> {
    p.iter().map(|k| k + 1).collect()
}

fn orders<S: Local>(v: &[S]) -> Vec<Option<i64>> {
    v.iter().map(|s| s.order().finite()).collect()
}

fn report_json(rep: &Report) -> Value {
    json!({ "pass": rep.passed(), "checks": rep.checks })
}

pub fn analyze(text: &str) -> Result<Outcome> {
    let (_, x) = matrix_input(text)?;
    let n = x.rows();
    let (phi, sm) = from_matrix_with_smith(&x)?;
    let (a, b) = section_exponents(&sm.m);
    let loc = chart_locate(&phi)?;
    let st = stratum(&phi);
    let grass = grass_point(&phi)?;

    let mut rep = Report::new();
    rep.absorb("geniso", phi.validate());
    rep.check("generic_map", phi.generic_map().as_ref() == Some(&x));
    rep.absorb(
        "diagonalization",
        verify_diagonalization(&phi, &loc.address.alpha, &loc.address.beta, &loc.diagonalization),
    );
    rep.check("chart_generators_integral", loc.coords.t_ratios.iter().all(|t| t.is_integral()));
    rep.check("stratum_disjointness", st.disjointness_holds(n));
    rep.check("pluecker_rank", grass.fibre.rank() == n);

    let c = &loc.coords;
    let out = json!({
        "input": MatrixInput::echo(&x),
        "smith": { "m": sm.m, "a": a, "b": b },
        "sections": { "mu_val": orders(&phi.mus()), "lambda_val": orders(&phi.lambdas()) },
        "admissible": { "alpha": one_based(&loc.address.alpha), "beta": one_based(&loc.address.beta) },
        "chart": {
            "alpha": one_based(&loc.address.alpha),
            "beta": one_based(&loc.address.beta),
            "l": loc.address.l,
            "t_ratios": texts(&c.t_ratios),
            "y": grid(&c.y),
            "z": grid(&c.z),
            "t_over_t0": c.t_over_t0.as_deref().map(texts::<RatFun>),
        },
        "stratum": st,
        "pluecker": { "coords": texts(&grass.coords), "fibre": grid(&grass.fibre) },
        "validation": report_json(&rep),
    });
    Ok(Outcome { json: out, ok: rep.passed() })
}

pub fn construct(text: &str) -> Result<Outcome> {
    let (_, x) = matrix_input(text)?;
    let phi = from_matrix(&x)?;
    Ok(Outcome { json: serde_json::to_value(GenIsoJson::from_geniso(&phi))?, ok: true })
}

pub fn validate(text: &str) -> Result<Outcome> {
    let phi = match read_input(text)?.point {
        PointInput::GenIso(g) => g.to_geniso()?,
        PointInput::Matrix(_) => bail!("expected the GenIso schema {{\"n\", \"gs\", \"hs\", \"iso\"}}"),
    };
    let rep = phi.validate();
    Ok(Outcome { json: report_json(&rep), ok: rep.passed() })
}

pub fn decompose(text: &str) -> Result<Outcome> {
    let parsed = read_input(text)?;
    let phi: GenIso<RatFun> = match &parsed.point {
        PointInput::Matrix(m) => from_matrix(&m.matrix()?)?,
        PointInput::GenIso(g) => g.to_geniso()?,
    };
    let bar = phi.closed_fibre()?;
    let st = stratum(&bar);
    let (i_set, j_set) = match &parsed.stratum {
        Some(d) => (d.i.clone(), d.j.clone()),
        None => (st.i.clone(), st.j.clone()),
    };
    let dec = decompose_stratum(&bar, &i_set, &j_set)?;
    let rep = validate_decomposition(&dec)?;
    let out = json!({
        "decomposition": DecompositionJson::new(&dec),
        "validation": report_json(&rep),
    });
    Ok(Outcome { json: out, ok: rep.passed() })
}

/// Timings go to standard error so standard output stays deterministic.
pub fn selftest(seed: u64, count: Option<usize>) -> Outcome {
    let counts = count.map(Counts::capped).unwrap_or_default();
    let results = run(seed, &counts);
    for r in &results {
        eprintln!("{} [{} ms]", r.line(), r.millis);
    }
    let pass = results.iter().all(|r| r.pass);
    Outcome { json: json!({ "seed": seed, "pass": pass, "criteria": results }), ok: pass }
}
