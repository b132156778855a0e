use bce_core::analysis::{
    dimension_bracket, fourier_certificate, full_dimension_test, mercat_check, strictness_applicable,
    CProvenance, SingularityCertificate, PUBLISHED_C,
};
use bce_core::numberfield::DEFAULT_MAHLER_WIDTH;
use bce_core::smoothedentropy::{c_constant, phi, PhiSearch};
use bce_core::walk::growth_sequences;
use bce_core::{AlgebraicContext, CConstantCertificate, IntPolynomial, RootClass};
use serde_json::{json, Map, Value};

use crate::output::{approx, document, enclosure, exact_float, exact_int, flag, float, growth_csv, growth_json};
use crate::{CSource, CliError, CommandKind, Format, RunConfig};

type Result<T> = std::result::Result<T, CliError>;

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

fn lower_bound(x: f64) -> Value {
    json!({ "value": float(x), "bound": "lower" })
}

/// Runs one configured command and returns the text to emit.
pub fn execute(cfg: &RunConfig) -> Result<String> {
    let body = match cfg.subcommand {
        CommandKind::Mahler => mahler(cfg)?,
        CommandKind::Walk => return walk(cfg),
        CommandKind::Phi => phi_cmd(cfg)?,
        CommandKind::Cconst => cconst(cfg)?,
        CommandKind::Report => return report(cfg),
        CommandKind::Fourier => fourier(cfg)?,
        CommandKind::Mercat => return mercat(cfg),
    };
    Ok(render(cfg, body))
}

fn render(cfg: &RunConfig, body: Map<String, Value>) -> String {
    let name = match cfg.subcommand {
        CommandKind::Mahler => "mahler",
        CommandKind::Walk => "walk",
        CommandKind::Phi => "phi",
        CommandKind::Cconst => "cconst",
        CommandKind::Report => "report",
        CommandKind::Fourier => "fourier",
        CommandKind::Mercat => "mercat",
    };
    let mut text = serde_json::to_string_pretty(&document(name, body)).expect("json values serialize");
    text.push('\n');
    text
}

fn poly(cfg: &RunConfig) -> &IntPolynomial {
    cfg.poly.as_ref().expect("subcommand takes --poly")
}

fn context(cfg: &RunConfig) -> Result<AlgebraicContext> {
    Ok(AlgebraicContext::with_tolerances(
        poly(cfg).clone(),
        cfg.root_radius,
        DEFAULT_MAHLER_WIDTH,
    )?)
}

fn class_name(c: RootClass) -> &'static str {
    match c {
        RootClass::Inside => "inside",
        RootClass::OnCircle => "on_circle",
        RootClass::Outside => "outside",
    }
}

fn mahler_section(ctx: &AlgebraicContext) -> Value {
    let roots: Vec<Value> = ctx
        .roots()
        .iter()
        .zip(ctx.classes())
        .map(|(r, &c)| {
            json!({
                "re": float(r.center.re),
                "im": float(r.center.im),
                "radius": float(r.radius),
                "class": class_name(c),
            })
        })
        .collect();
    let flags = ctx.flags();
    json!({
        "polynomial": ctx.poly().to_string(),
        "coeffs": ctx.poly().coeffs().iter().map(|c| c.to_string().parse::<i64>().map_or_else(|_| json!(c.to_string()), |v| json!(v))).collect::<Vec<_>>(),
        "degree": exact_int(ctx.degree()),
        "mahler": enclosure(ctx.mahler()),
        "roots": roots,
        "inside": exact_int(ctx.count(RootClass::Inside)),
        "k_on_circle": exact_int(ctx.k_on_circle()),
        "outside": exact_int(ctx.count(RootClass::Outside)),
        "is_unit": flag(flags.is_unit),
        "is_pisot": flag(flags.is_pisot),
        "is_salem": flag(flags.is_salem),
        "reducible": flag(ctx.reducible()),
    })
}

fn mahler(cfg: &RunConfig) -> Result<Map<String, Value>> {
    let ctx = context(cfg)?;
    Ok(object(mahler_section(&ctx)))
}

fn walk(cfg: &RunConfig) -> Result<String> {
    let report = growth_sequences(poly(cfg), &cfg.nu, cfg.steps, cfg.budget)?;
    if cfg.format == Format::Csv {
        return growth_csv(&report).map_err(|e| CliError::Usage(e.to_string()));
    }
    let body = object(json!({
        "polynomial": poly(cfg).to_string(),
        "nu": cfg.nu.to_string(),
        "steps": exact_int(cfg.steps),
        "growth": growth_json(&report),
    }));
    Ok(render(cfg, body))
}

fn phi_cmd(cfg: &RunConfig) -> Result<Map<String, Value>> {
    let cert = phi(&cfg.nu, cfg.a, &PhiSearch::with_tol(cfg.quad_tol))?;
    Ok(object(json!({
        "nu": cfg.nu.to_string(),
        "a": exact_float(cert.a),
        "value": lower_bound(cert.value),
        "witness_t": exact_float(cert.witness_t),
        "upper_hint": approx(cert.upper_hint, 2.0 * cert.quad_tol),
        "quad_tol": exact_float(cert.quad_tol),
    })))
}

fn cconst_section(cert: &CConstantCertificate) -> Value {
    let cells: Vec<Value> = cert
        .cells
        .iter()
        .map(|c| {
            json!({
                "a_lo": exact_float(c.a_lo),
                "a_hi": exact_float(c.a_hi),
                "phi_lo": lower_bound(c.phi_lo),
                "witness_t": exact_float(c.witness_t),
                "bound": lower_bound(c.bound),
            })
        })
        .collect();
    json!({
        "cells": cells,
        "cell_count": exact_int(cert.cells.len()),
        "c_lower": lower_bound(cert.c_lower),
        "quad_tol": exact_float(cert.quad_tol),
        "at_least_published": flag(cert.c_lower >= PUBLISHED_C),
    })
}

fn cconst(cfg: &RunConfig) -> Result<Map<String, Value>> {
    let cert = c_constant(&cfg.nu, cfg.cells, &PhiSearch::with_tol(cfg.quad_tol))?;
    let mut body = object(cconst_section(&cert));
    body.insert("nu".into(), json!(cfg.nu.to_string()));
    Ok(body)
}

fn fourier_section(cert: &SingularityCertificate) -> Value {
    json!({
        "n_requested": exact_int(cert.n_requested),
        "n": exact_int(cert.n),
        "truncated_product": lower_bound(cert.truncated_product),
        "tail_lower_bound": lower_bound(cert.tail_lower_bound),
        "certified_c": lower_bound(cert.certified_c),
        "factor_near_zero": cert.factor_near_zero,
        "u_sequence": { "values": cert.u_sequence.iter().map(|&x| float(x)).collect::<Vec<_>>(), "tol": float(cert.sequence_error) },
        "v_sequence": { "values": cert.v_sequence.iter().map(|&x| float(x)).collect::<Vec<_>>(), "tol": float(cert.sequence_error) },
        "power_sum_residual": approx(cert.power_sum_residual, cert.power_sum_residual),
    })
}

fn fourier(cfg: &RunConfig) -> Result<Map<String, Value>> {
    let ctx = context(cfg)?;
    let cert = fourier_certificate(&ctx, cfg.fourier_n)?;
    let mut body = object(fourier_section(&cert));
    body.insert("polynomial".into(), json!(ctx.poly().to_string()));
    Ok(body)
}

fn mercat_section(ctx: &AlgebraicContext, steps: usize, budget: usize) -> Result<Value> {
    let m = mercat_check(ctx, steps, budget)?;
    Ok(json!({
        "n": exact_int(m.n),
        "supp_size": exact_int(m.supp_size),
        "mahler_pow": enclosure(m.mahler_pow),
        "log2_mahler": enclosure(m.log2_mahler),
        "verdict": flag(m.verdict),
        "verdict_label": if m.verdict { "rho_strictly_below_logM" } else { "undecided" },
        "rho_upper_at_n": approx(m.rho_upper_at_n, 2.0 * f64::EPSILON),
    }))
}

fn mercat(cfg: &RunConfig) -> Result<String> {
    let ctx = context(cfg)?;
    if cfg.format == Format::Csv {
        let report = growth_sequences(ctx.poly(), &bce_core::StepDistribution::fair_coin(), cfg.steps, cfg.budget)?;
        return growth_csv(&report).map_err(|e| CliError::Usage(e.to_string()));
    }
    let mut body = object(mercat_section(&ctx, cfg.steps, cfg.budget)?);
    body.insert("polynomial".into(), json!(ctx.poly().to_string()));
    Ok(render(cfg, body))
}

/// Records a section, turning validation errors (the quantity does not
/// apply to this polynomial) into an `unavailable` note. Computational
/// errors abort the report.
fn section(result: std::result::Result<Value, CliError>) -> Result<Value> {
    match result {
        Ok(v) => Ok(v),
        Err(e) if e.exit_code() == crate::EXIT_VALIDATION => Ok(json!({ "unavailable": e.to_string() })),
        Err(e) => Err(e),
    }
}

fn report(cfg: &RunConfig) -> Result<String> {
    let ctx = context(cfg)?;
    let growth = growth_sequences(ctx.poly(), &cfg.nu, cfg.steps, cfg.budget)?;
    if cfg.format == Format::Csv {
        return growth_csv(&growth).map_err(|e| CliError::Usage(e.to_string()));
    }
    let (c_used, provenance, c_section) = match cfg.c_source {
        CSource::Published => (PUBLISHED_C, CProvenance::Published, Value::Null),
        CSource::Certified => {
            let cert = c_constant(&cfg.nu, cfg.cells, &PhiSearch::with_tol(cfg.quad_tol))?;
            (cert.c_lower, CProvenance::Certified, cconst_section(&cert))
        }
    };
    let bracket = section(
        dimension_bracket(&ctx, &cfg.nu, cfg.steps, c_used, provenance, cfg.budget)
            .map(|b| {
                json!({
                    "lambda": approx(b.lambda_value, 2.0 * f64::EPSILON * b.lambda_value),
                    "log_inv_lambda": approx(b.log_inv_lambda, 4.0 * f64::EPSILON),
                    "h_lower": lower_bound(b.h_lower),
                    "h_upper": approx(b.h_upper, crate::output::entropy_tol(b.h_upper * b.n_max as f64) / b.n_max as f64),
                    "dim_lower": lower_bound(b.dim_lower),
                    "dim_upper": json!({ "value": float(b.dim_upper), "bound": "upper" }),
                    "n_max": exact_int(b.n_max),
                    "free_through_n_max": flag(b.free_through_n_max),
                })
            })
            .map_err(CliError::from),
    )?;
    let full_dim = section(full_dimension_test(&ctx).map(flag).map_err(CliError::from))?;
    let fourier = if cfg.nu.is_fair_coin() {
        section(
            fourier_certificate(&ctx, cfg.fourier_n)
                .map(|c| fourier_section(&c))
                .map_err(CliError::from),
        )?
    } else {
        json!({ "unavailable": bce_core::Error::NotFairCoin.to_string() })
    };
    let mercat = section(mercat_section(&ctx, cfg.steps, cfg.budget))?;
    let provenance_name = match provenance {
        CProvenance::Published => "published",
        CProvenance::Certified => "certified",
    };
    let body = object(json!({
        "nu": cfg.nu.to_string(),
        "steps": exact_int(cfg.steps),
        "field": mahler_section(&ctx),
        "growth": growth_json(&growth),
        "c_used": { "value": float(c_used), "provenance": provenance_name, "certificate": c_section },
        "dimension_bracket": bracket,
        "full_dimension_test": full_dim,
        "strictness_applicable": flag(strictness_applicable(&ctx)),
        "fourier": fourier,
        "mercat": mercat,
    }));
    Ok(render(cfg, body))
}
