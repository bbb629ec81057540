use std::f64::consts::PI;
use std::str::FromStr;

use serde_json::{json, Value};

use quasianalytic::bang_space::{bang_norm, xf_vector, BangVector, BangVectorJson};
use quasianalytic::gontcharoff::{
    generalized_taylor, gontcharoff_poly, rational_string, sandwich_check, NodeList, NodeListJson,
};
use quasianalytic::quasianalysis::{majorant_properties_check, monotonicity_certificate, CertificateJson, MajorantProfile};
use quasianalytic::sequences::{
    canonical_sequence, carleman_inequality_check, classify as classify_sequence, convex_regularize, CanonicalName,
    ClassifierPolicy, RegularizedJson, Verdict, WeightSequence, WeightSequenceJson,
};
use quasianalytic::smooth_functions::{make_oracle, sup_norms, uniform_grid, DerivativeOracle, OracleParams, OracleSpec};

use crate::output::{emit_report, emit_trace, read_file, Cell, CliError, CliResult};
use crate::{
    BangNormArgs, CarlemanArgs, CertifyArgs, ClassifyArgs, ExpandArgs, GontcharoffArgs, OracleArgs, ProfileArgs,
    RegularizeArgs, SeqSource,
};

/// Exit status for an undecided classification.
const INCONCLUSIVE: u8 = 2;

fn load_sequence(source: &SeqSource, n: usize) -> CliResult<WeightSequence> {
    if let Some(name) = &source.seq {
        return Ok(canonical_sequence(CanonicalName::from_str(name)?, n)?);
    }
    let text = match (&source.json, &source.input) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) => read_file(path)?,
        (None, None) => unreachable!("clap enforces one source"),
    };
    let json: WeightSequenceJson = serde_json::from_str(&text)?;
    Ok(WeightSequence::try_from(json)?)
}

fn parse_real(s: &str) -> CliResult<f64> {
    let s = s.trim();
    let bad = || CliError::new("parse", format!("cannot read {s:?} as a real number"));
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let value = if body == "pi" {
        PI
    } else if let Some(k) = body.strip_suffix("pi") {
        k.trim_end_matches('*').parse::<f64>().map_err(|_| bad())? * PI
    } else if let Some(d) = body.strip_prefix("pi/") {
        PI / d.parse::<f64>().map_err(|_| bad())?
    } else {
        body.parse::<f64>().map_err(|_| bad())?
    };
    Ok(if negative { -value } else { value })
}

fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_real).collect()
}

fn parse_interval(s: &str) -> CliResult<(f64, f64)> {
    match parse_list(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::new("parse", format!("interval {s:?} must be \"a,b\""))),
    }
}

fn build_oracle(function: Option<&str>, oracle: Option<&str>, interval: &str, params: Option<&str>) -> CliResult<DerivativeOracle> {
    if let Some(inline) = oracle {
        let spec: OracleSpec = serde_json::from_str(inline)?;
        return Ok(spec.build()?);
    }
    let name = function.expect("clap enforces one source");
    let params: OracleParams = match params {
        Some(p) => serde_json::from_str(p)?,
        None => OracleParams::default(),
    };
    Ok(make_oracle(name, &params, parse_interval(interval)?)?)
}

fn load_oracle(args: &OracleArgs) -> CliResult<DerivativeOracle> {
    build_oracle(
        args.source.function.as_deref(),
        args.source.oracle.as_deref(),
        &args.interval,
        args.params.as_deref(),
    )
}

fn oracle_settings(f: &DerivativeOracle) -> Value {
    serde_json::to_value(f.spec()).unwrap_or(Value::Null)
}

pub fn regularize(args: RegularizeArgs) -> CliResult<u8> {
    let m = load_sequence(&args.source, args.n)?;
    let reg = convex_regularize(&m);
    let settings = json!({
        "command": "regularize",
        "label": m.label(),
        "N": m.last_index(),
    });
    let summary = format!("regularized N = {}, principal indices {:?}", m.last_index(), reg.principal());
    emit_report(settings, &RegularizedJson::from(&reg), args.output.as_deref(), &summary)?;
    Ok(0)
}

pub fn classify(args: ClassifyArgs) -> CliResult<u8> {
    let m = load_sequence(&args.source, args.n)?;
    let policy = ClassifierPolicy {
        horizon: args.horizon,
        windows: args.windows,
        eps_div: args.eps_div,
        min_window_ratio: args.min_window_ratio,
        eps_conv: args.eps_conv,
        liminf_tol: args.liminf_tol,
    };
    let v = classify_sequence(&m, &policy);
    if let Some(path) = &args.trace {
        let rows: Vec<Vec<Cell>> = v
            .rows()
            .map(|(k, s1, s2, s3)| vec![Cell::Int(k), Cell::Real(s1), Cell::Real(s2), Cell::Real(s3)])
            .collect();
        emit_trace(path, "m,S1,S2,S3", &rows)?;
    }
    let [t1, t2, t3] = &v.criterion_traces;
    let last = |t: &quasianalytic::sequences::CriterionTrace| t.partial_sums.last().copied();
    let result = json!({
        "verdict": v.verdict,
        "horizon": v.horizon,
        "trivialLiminfFlag": v.trivial_liminf_flag,
        "tailEstimate": v.tail_estimate,
        "finalSums": { "S1": last(t1), "S2": last(t2), "S3": last(t3) },
        "windowIncrements": {
            "S1": t1.window_increments,
            "S2": t2.window_increments,
            "S3": t3.window_increments,
        },
    });
    let settings = json!({
        "command": "classify",
        "label": m.label(),
        "N": m.last_index(),
        "policy": policy,
    });
    let summary = format!("{:?} (effective horizon {})", v.verdict, v.horizon);
    emit_report(settings, &result, args.output.as_deref(), &summary)?;
    Ok(if v.verdict == Verdict::Inconclusive { INCONCLUSIVE } else { 0 })
}

pub fn bang_norm_command(args: BangNormArgs) -> CliResult<u8> {
    if let Some(inline) = &args.source.vector {
        let x = BangVector::try_from(serde_json::from_str::<BangVectorJson>(inline)?)?;
        let cert = bang_norm(&x);
        let settings = json!({ "command": "bang-norm", "length": x.len(), "indexSetSize": x.index_set().len() });
        let mut result = serde_json::to_value(cert)?;
        result["contactCap"] = json!(x.contact_cap());
        let summary = format!("norm {:?} at k = {}", cert.value, cert.achieving_index);
        emit_report(settings, &result, args.output.as_deref(), &summary)?;
        return Ok(0);
    }
    let f = build_oracle(
        args.source.function.as_deref(),
        args.source.oracle.as_deref(),
        &args.interval,
        args.params.as_deref(),
    )?;
    let weights = canonical_sequence(CanonicalName::from_str(&args.weights)?, args.order_cap.max(1))?;
    let mc = convex_regularize(&weights);
    let (a, b) = f.interval();
    let grid = uniform_grid(a, b, args.grid);
    let mut rows = Vec::with_capacity(grid.len());
    let mut points = Vec::with_capacity(grid.len());
    for &t in &grid {
        let cert = bang_norm(&xf_vector(&f, t, &mc, args.order_cap)?);
        rows.push(vec![Cell::Real(t), Cell::Real(cert.value), Cell::Int(cert.achieving_index)]);
        points.push(json!({ "t": t, "value": cert.value, "achievingIndex": cert.achieving_index, "truncated": cert.truncated }));
    }
    if let Some(path) = &args.trace {
        emit_trace(path, "t,norm,achieving_index", &rows)?;
    }
    let settings = json!({
        "command": "bang-norm",
        "function": oracle_settings(&f),
        "weights": args.weights,
        "orderCap": args.order_cap,
        "grid": args.grid,
    });
    let summary = format!("trajectory of {} over {} points", f.name(), grid.len());
    emit_report(settings, &json!({ "trajectory": points }), args.output.as_deref(), &summary)?;
    Ok(0)
}

pub fn gontcharoff(args: GontcharoffArgs) -> CliResult<u8> {
    let nodes = match (&args.source.nodes, &args.source.json) {
        (Some(list), _) => NodeList::parse(list)?,
        (None, Some(inline)) => NodeList::try_from(serde_json::from_str::<NodeListJson>(inline)?)?,
        (None, None) => unreachable!("clap enforces one source"),
    };
    let q = gontcharoff_poly(&nodes);
    let mut result = serde_json::to_value(q.to_json())?;
    let mut summary = format!("degree {} coefficients {:?}", q.degree(), q.coefficient_strings());

    if args.check_boundary || args.boundary_csv.is_some() {
        let mut entries = Vec::new();
        let mut rows = Vec::new();
        for d in 1..=nodes.len() {
            for r in gontcharoff_poly(&nodes.slice(0, d)).boundary_residuals() {
                entries.push(json!({ "degree": d, "m": r.m, "residual": rational_string(&r.residual) }));
                rows.push(vec![Cell::Int(d), Cell::Int(r.m), Cell::Text(r.residual.to_string())]);
            }
        }
        let all_zero = rows.iter().all(|r| matches!(&r[2], Cell::Text(s) if s == "0"));
        if let Some(path) = &args.boundary_csv {
            emit_trace(path, "degree,m,residual", &rows)?;
        }
        result["boundary"] = json!({ "allZero": all_zero, "residuals": entries });
        summary.push_str(&format!("; boundary residuals all zero: {all_zero}"));
    }
    if let Some(x) = args.sandwich_at {
        let s = sandwich_check(&q, x, args.next_node)?;
        result["sandwich"] = json!({ "x": x, "lower": s.lower, "value": s.value, "upper": s.upper, "holds": s.holds });
        summary.push_str(&format!("; sandwich at {x} holds: {}", s.holds));
    }
    let settings = json!({ "command": "gontcharoff", "nodeCount": nodes.len(), "monotone": nodes.is_monotone() });
    emit_report(settings, &result, args.output.as_deref(), &summary)?;
    Ok(0)
}

pub fn expand(args: ExpandArgs) -> CliResult<u8> {
    let f = load_oracle(&args.oracle)?;
    let nodes = NodeList::parse(&args.nodes)?;
    let e = generalized_taylor(&f, &nodes, args.order, args.x)?;
    let result = json!({
        "value": e.value,
        "terms": e.terms,
        "remainder": e.remainder,
        "bracket": [e.bracket.0, e.bracket.1],
        "remainderInBracket": e.remainder_in_bracket(1e-12),
        "exactRemainder": e.exact_remainder.as_ref().map(rational_string),
    });
    let settings = json!({
        "command": "expand",
        "function": oracle_settings(&f),
        "nodes": nodes.to_f64(),
        "order": args.order,
        "x": args.x,
    });
    let summary = format!("f({}) = {:?}, remainder {:?} in [{:?}, {:?}]", args.x, e.value, e.remainder, e.bracket.0, e.bracket.1);
    emit_report(settings, &result, args.output.as_deref(), &summary)?;
    Ok(0)
}

pub fn profile(args: ProfileArgs) -> CliResult<u8> {
    let f = load_oracle(&args.oracle)?;
    let weights = canonical_sequence(CanonicalName::from_str(&args.weights)?, args.order.max(1))?;
    let profile = MajorantProfile::sample_uniform(&f, &weights, args.order, args.grid)?;
    if let Some(path) = &args.trace {
        let rows: Vec<Vec<Cell>> = profile.rows().map(|(t, n, b)| vec![Cell::Real(t), Cell::Int(n), Cell::Real(b)]).collect();
        emit_trace(path, "t,n,B", &rows)?;
    }
    if let Some(path) = &args.sup_norms {
        let rows: Vec<Vec<Cell>> = sup_norms(&f, args.order, args.grid)?
            .iter()
            .map(|s| vec![Cell::Int(s.order), Cell::Real(s.estimate())])
            .collect();
        emit_trace(path, "n,Mn", &rows)?;
    }
    let report = majorant_properties_check(&profile)?;
    let first: Vec<Value> = report
        .violations
        .iter()
        .take(10)
        .map(|v| json!({ "property": v.property, "n": v.n, "t": v.t, "lhs": v.lhs, "rhs": v.rhs }))
        .collect();
    let result = json!({
        "checkedPoints": report.checked_points,
        "violationCount": report.violations.len(),
        "holds": report.holds(),
        "violations": first,
    });
    let settings = json!({
        "command": "profile",
        "function": oracle_settings(&f),
        "weights": args.weights,
        "J": args.order,
        "grid": args.grid,
    });
    let summary = format!("{} points checked, {} violations", report.checked_points, report.violations.len());
    emit_report(settings, &result, args.output.as_deref(), &summary)?;
    Ok(0)
}

pub fn certify(args: CertifyArgs) -> CliResult<u8> {
    let f = load_oracle(&args.oracle)?;
    let (a, b) = f.interval();
    let cert = monotonicity_certificate(&f, args.max_order, &uniform_grid(a, b, args.grid))?;
    let json = CertificateJson::from(&cert);
    let settings = json!({
        "command": "certify",
        "function": oracle_settings(&f),
        "maxOrder": args.max_order,
        "grid": args.grid,
    });
    let summary = format!("{}", json.verdict);
    emit_report(settings, &json, args.output.as_deref(), &summary)?;
    Ok(0)
}

pub fn carleman_check(args: CarlemanArgs) -> CliResult<u8> {
    let terms = match (&args.source.values, &args.source.input) {
        (Some(list), _) => parse_list(list)?,
        (None, Some(path)) => serde_json::from_str::<Vec<f64>>(&read_file(path)?)?,
        (None, None) => unreachable!("clap enforces one source"),
    };
    let check = carleman_inequality_check(&terms)?;
    let result = json!({ "lhs": check.lhs, "rhs": check.rhs, "holds": check.holds });
    let settings = json!({ "command": "carleman-check", "length": terms.len() });
    let summary = format!("{:?} <= {:?}: {}", check.lhs, check.rhs, check.holds);
    emit_report(settings, &result, args.output.as_deref(), &summary)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_with_pi() {
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert_eq!(parse_real("x").unwrap_err().kind, "parse");
        assert_eq!(parse_interval("0,pi").unwrap(), (0.0, PI));
        assert!(parse_interval("0").is_err());
    }
}
