use serde_json::{json, Value};

use mucut_core::cones::{
    cut_cone, cut_plan, gl_equivalent, lens_cone, normal_form, normal_form_oriented, sl_equivalent, verify_plan, ConeN,
    HalfspaceZ,
};
use mucut_core::cut::{extends_smoothly, pullback_jet, pushforward_symbol, Jet};
use mucut_core::operator::{
    commutant_factorize, commutator_entries, ladder_product, projected_spectrum, residue_contour, residue_log_fit,
    verify_pk_identity, weyl_compare, weyl_default_grid, FitRange,
};
use mucut_core::report::SCHEMA;
use mucut_core::{CanonicalOperator, LatticeVector2, LaurentSymbol, Parity, SymbolVariant};

use crate::input::{parse, parse_cone};
use crate::output::Output;
use crate::{selftest, Command, Failure, OperatorArgs};

/// Largest window for the dense eigen solver (banded operators of width > 1).
const MAX_DENSE_WINDOW: usize = 4096;
/// Largest window for tridiagonal and diagonal operators.
const MAX_BANDED_WINDOW: usize = 1 << 20;
const MAX_RESIDUE_WINDOW: usize = 1 << 24;
const MAX_WEYL_POINTS: usize = 1 << 16;

fn malformed(msg: impl Into<String>) -> Failure {
    Failure::Malformed(msg.into())
}

fn domain(kind: &str, message: impl Into<String>) -> Failure {
    Failure::Domain { kind: kind.to_string(), message: message.into() }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut out = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

fn operator(args: &OperatorArgs) -> Result<(CanonicalOperator, Parity), Failure> {
    Ok((parse(&args.operator, "operator")?, args.parity.into()))
}

fn check_window(n: usize, max: usize) -> Result<(), Failure> {
    if n < 4 {
        return Err(malformed(format!("window N = {n}; N ≥ 4 is required")));
    }
    if n > max {
        return Err(malformed(format!("window N = {n} exceeds the limit {max}")));
    }
    Ok(())
}

pub(crate) fn execute(cmd: &Command, seed: u64) -> Result<Output, Failure> {
    match cmd {
        Command::CommutantCheck(args) => {
            let (a, parity) = operator(args)?;
            let entries = commutator_entries(&a, parity);
            Ok(Output::records(
                envelope(
                    "commutant-check",
                    json!({
                        "parity": parity,
                        "commutes": entries.is_empty(),
                        "violations": entries.entries,
                        "unbounded_shifts": entries.unbounded_shifts,
                    }),
                ),
                "violations",
                &["row", "col", "value"],
            ))
        }
        Command::Factorize(args) => {
            let (a, parity) = operator(args)?;
            let factors = commutant_factorize(&a, parity).map_err(Failure::domain)?;
            let rows: Vec<Value> = factors
                .iter()
                .map(|(&k, r)| json!({ "k": k, "ladder": ladder_product(k, parity), "cofactor": r }))
                .collect();
            Ok(Output::flat(envelope("factorize", json!({ "parity": parity, "factors": rows }))))
        }
        Command::IdentityPk { k_max } => {
            let rows: Vec<Value> = (1..=*k_max).map(|k| json!({ "k": k, "holds": verify_pk_identity(k) })).collect();
            let holds = rows.iter().all(|r| r["holds"] == true);
            Ok(Output::records(
                envelope("identity-pk", json!({ "holds": holds, "rows": rows })),
                "rows",
                &["k", "holds"],
            ))
        }
        Command::Spectrum { op, n } => {
            let (a, parity) = operator(op)?;
            let max = if a.bandwidth() > 1 { MAX_DENSE_WINDOW } else { MAX_BANDED_WINDOW };
            check_window(*n, max)?;
            let s = projected_spectrum(&a, *n, parity).map_err(Failure::domain)?;
            Ok(Output::columns(
                envelope(
                    "spectrum",
                    json!({ "parity": parity, "window": n, "eigenvalues": s.eigenvalues, "reliable": s.reliable }),
                ),
                &[("eigenvalue", "eigenvalues"), ("reliable", "reliable")],
            ))
        }
        Command::Weyl { operator, n, lambda_max, points, tolerance } => {
            let a: CanonicalOperator = parse(operator, "operator")?;
            let max = if a.bandwidth() > 1 { MAX_DENSE_WINDOW } else { MAX_BANDED_WINDOW };
            check_window(*n, max)?;
            if *points == 0 || *points > MAX_WEYL_POINTS {
                return Err(malformed(format!("--points must lie in 1..={MAX_WEYL_POINTS}")));
            }
            if !(tolerance.is_finite() && *tolerance > 0.0) {
                return Err(malformed("--tolerance must be positive and finite"));
            }
            let grid = match lambda_max {
                Some(l) if !(l.is_finite() && *l > 0.0) => {
                    return Err(malformed("--lambda-max must be positive and finite"));
                }
                Some(l) => (1..=*points).map(|i| l * i as f64 / *points as f64).collect(),
                None => weyl_default_grid(&a, *n, *points).map_err(Failure::domain)?,
            };
            let mut report = weyl_compare(&a, *n, &grid).map_err(Failure::domain)?;
            report.params.insert("tolerance".into(), json!(tolerance));
            report.params.insert("within_tolerance".into(), json!(report.max_residual <= *tolerance));
            Ok(Output::report(&report))
        }
        Command::Residue { symbol, inverse_of, diagonal, n, fit_lo, fit_hi } => {
            residue(symbol.as_deref(), inverse_of.as_deref(), diagonal.as_deref(), *n, *fit_lo, *fit_hi)
        }
        Command::JetExtend { jet } => {
            let j: Jet = parse(jet, "jet")?;
            let odd = j.first_odd().map(|(k, l)| json!({ "k": k, "l": l }));
            Ok(Output::flat(envelope("jet-extend", json!({ "extends": extends_smoothly(&j), "odd_term": odd }))))
        }
        Command::Pullback { jet, variant } => {
            let j: Jet = parse(jet, "jet")?;
            let v: SymbolVariant = (*variant).into();
            let sigma = pullback_jet(&j, v).map_err(Failure::domain)?;
            Ok(Output::flat(envelope("pullback", json!({ "variant": v, "symbol": sigma }))))
        }
        Command::Pushforward { symbol, variant } => {
            let sigma: LaurentSymbol = parse(symbol, "symbol")?;
            let v: SymbolVariant = (*variant).into();
            let j = pushforward_symbol(&sigma, v).map_err(Failure::domain)?;
            Ok(Output::flat(envelope("pushforward", json!({ "variant": v, "jet": j }))))
        }
        Command::ConeLens { p, q } => {
            let c = lens_cone(*p, *q).map_err(Failure::domain)?;
            Ok(Output::flat(envelope("cone-lens", json!({ "cone": c, "normal_form": normal_form(&c) }))))
        }
        Command::ConeCut { cone, normal } => {
            let c = parse_cone(cone)?;
            let lambda: LatticeVector2 = parse(normal, "normal")?;
            let h = HalfspaceZ::new(lambda).map_err(|e| malformed(format!("invalid normal: {e}")))?;
            let cut = cut_cone(&c, &h).map_err(Failure::domain)?;
            Ok(Output::flat(envelope("cone-cut", json!({ "cone": cut, "changed": cut != c }))))
        }
        Command::ConeEquiv { first, second, oriented } => {
            let (a, b) = (parse_cone(first)?, parse_cone(second)?);
            let (equivalent, nfa, nfb) = if *oriented {
                (sl_equivalent(&a, &b), normal_form_oriented(&a), normal_form_oriented(&b))
            } else {
                (gl_equivalent(&a, &b), normal_form(&a), normal_form(&b))
            };
            Ok(Output::flat(envelope(
                "cone-equiv",
                json!({
                    "group": if *oriented { "SL" } else { "GL" },
                    "equivalent": equivalent,
                    "normal_forms": [nfa, nfb],
                    "normal_form": if equivalent { to_json(&nfa) } else { Value::Null },
                }),
            )))
        }
        Command::ConePlan { cone } => {
            let c = parse_cone(cone)?;
            let plan = cut_plan(&c);
            let normals: Vec<LatticeVector2> = plan.iter().map(HalfspaceZ::normal).collect();
            Ok(Output::flat(envelope(
                "cone-plan",
                json!({
                    "cone": c,
                    "plan": normals,
                    "verified": verify_plan(&c, &plan),
                    "cone_n": ConeN::from_cone2(&c),
                }),
            )))
        }
        Command::Selftest { inject_fault, vanishing_range } => {
            let opts = selftest::Options { seed, fault: *inject_fault, range: (*vanishing_range).into() };
            let rows = selftest::run(&opts);
            let passed = rows.iter().all(|r| r.passed);
            let json = envelope(
                "selftest",
                json!({
                    "seed": seed,
                    "fault": inject_fault,
                    "vanishing_range": opts.range,
                    "passed": passed,
                    "rows": rows,
                }),
            );
            let out = Output::records(json, "rows", &["name", "passed", "cases", "detail"]);
            Ok(if passed { out } else { out.failed() })
        }
    }
}

fn residue(
    symbol: Option<&str>,
    inverse_of: Option<&str>,
    diagonal: Option<&str>,
    n: usize,
    fit_lo: usize,
    fit_hi: Option<usize>,
) -> Result<Output, Failure> {
    if let Some(s) = symbol {
        let sigma: LaurentSymbol = parse(s, "symbol")?;
        let r = residue_contour(&sigma).map_err(Failure::domain)?;
        let v = r.value();
        return Ok(Output::flat(envelope(
            "residue",
            json!({ "mode": "contour", "coefficient": r.coefficient, "residue": { "re": v.re, "im": v.im } }),
        )));
    }
    let diag: Vec<f64> = match (inverse_of, diagonal) {
        (Some(op), _) => {
            if !(4..=MAX_RESIDUE_WINDOW).contains(&n) {
                return Err(malformed(format!("window N = {n} must lie in 4..={MAX_RESIDUE_WINDOW}")));
            }
            let a: CanonicalOperator = parse(op, "operator")?;
            let q0 = match (a.is_zero(), a.terms().next()) {
                (false, Some((0, q))) if a.terms().count() == 1 => q.clone(),
                _ => return Err(domain("NotDiagonal", "--inverse-of needs a diagonal operator q₀(D)")),
            };
            (1..=n as i64)
                .map(|k| {
                    let v = q0.eval_int(k);
                    if v.is_zero() {
                        Err(domain("Singular", format!("q₀({k}) = 0")))
                    } else if !v.is_real() {
                        Err(domain("NotReal", format!("q₀({k}) = {v} is not real")))
                    } else {
                        Ok(1.0 / v.to_complex64().re)
                    }
                })
                .collect::<Result<_, _>>()?
        }
        (None, Some(d)) => {
            let values: Vec<f64> = parse(d, "diagonal")?;
            if values.iter().any(|x| !x.is_finite()) {
                return Err(malformed("diagonal entries must be finite"));
            }
            values
        }
        (None, None) => return Err(malformed("one of --symbol, --inverse-of or --diagonal is required")),
    };
    let hi = fit_hi.unwrap_or(diag.len());
    if fit_lo < 1 || hi < fit_lo || hi > diag.len() {
        return Err(malformed(format!("fit range [{fit_lo}, {hi}] must lie in [1, {}]", diag.len())));
    }
    let report = residue_log_fit(&diag, FitRange { lo: fit_lo, hi }).map_err(Failure::domain)?;
    Ok(Output::report(&report))
}
