use std::path::Path;

use serde_json::{json, Value};

use kstab_core::exact::rational::parse_rational;
use kstab_core::intersect::format_class;
use kstab_core::k3cat;
use kstab_core::kstab::{beta, divisor_s_invariant, model_flag};
use kstab_core::lattice::{integer_search_quadratic, is_saturated, Comparison, SearchBox, DEFAULT_ENUM_BOUND};
use kstab_core::model_file::{self, ModelFile, ModelFileError, PRESET_NAMES};
use kstab_core::toric::{self, fmt_point, LatticePolytope};
use kstab_core::zariski::zariski_decompose;
use kstab_core::{AffineClass, GramLattice, Polynomial, SurfaceModel, ThreefoldModel};

use crate::report::{approx, r, rvec, strings, Report};
use crate::verify;
use crate::{Cli, CliError, Command, LatticeCommand, ModelsCommand, NlCommand, ToricCommand, EXIT_MISMATCH, EXIT_OK};

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(cli: &Cli, echo: &str) -> Result<(Report, i32)> {
    let rep = Report::new(echo);
    let report = match &cli.command {
        Command::Sinv { model, divisor, a } => sinv(rep, model, divisor, a.as_deref(), cli.approx)?,
        Command::FlagSinv { model, surface, curve } => flag_sinv(rep, model, surface, curve, cli.approx)?,
        Command::Zariski { model, class } => zariski(rep, model, class, cli.approx)?,
        Command::Lattice { command } => lattice(rep, command)?,
        Command::Nl {
            command: NlCommand::Classify { h, m, degree },
        } => nl_classify(rep, *degree, *h, *m)?,
        Command::Toric {
            command: ToricCommand::Check { vertices },
        } => toric_check(rep, vertices, cli.approx)?,
        Command::Models { command } => models(rep, command)?,
        Command::VerifyPaper { quintic_model } => {
            let quintic = match quintic_model {
                Some(path) => threefold(load_model(path)?)?,
                None => kstab_core::intersect::bl_p3_quintic(),
            };
            let rows = verify::golden_rows(&quintic);
            let failed = rows.iter().filter(|row| row.status == verify::Status::Fail).count();
            let report = verify::report(rep, &rows);
            return Ok((report, if failed == 0 { EXIT_OK } else { EXIT_MISMATCH }));
        }
    };
    Ok((report, EXIT_OK))
}

/// Preset name or model file path. Files may not reuse a preset name.
pub fn load_model(spec: &str) -> Result<ModelFile> {
    match model_file::preset(spec) {
        Ok(m) => return Ok(m),
        Err(ModelFileError::UnknownPreset(_)) => {}
        Err(e) => return Err(e.into()),
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(CliError::Usage(format!(
            "{spec:?} is neither a preset ({}) nor a readable file",
            PRESET_NAMES.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {spec:?}: {e}")))?;
    let m = model_file::parse(&text)?;
    if model_file::preset(m.name()).is_ok() || m.name().starts_with("sing_line") {
        return Err(CliError::compute(
            "model-file",
            format!("model name {:?} shadows a preset; rename it", m.name()),
        ));
    }
    Ok(m)
}

fn threefold(m: ModelFile) -> Result<ThreefoldModel> {
    match m {
        ModelFile::Threefold(t) => Ok(t),
        ModelFile::Surface(s) => Err(CliError::Usage(format!("{} is a surface model; expected a threefold", s.name))),
    }
}

fn surface(m: ModelFile) -> Result<SurfaceModel> {
    match m {
        ModelFile::Surface(s) => Ok(s),
        ModelFile::Threefold(t) => Err(CliError::Usage(format!("{} is a threefold model; expected a surface", t.name))),
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn affine_json(a: &AffineClass, basis: &[String], var: &str) -> Value {
    let polys = a.polys(var);
    Value::Object(basis.iter().zip(polys).map(|(b, p)| (b.clone(), Value::String(p.to_string()))).collect())
}

fn poly_class_json(ps: &[Polynomial], basis: &[String]) -> Value {
    Value::Object(basis.iter().zip(ps).map(|(b, p)| (b.clone(), Value::String(p.to_string()))).collect())
}

fn sinv(mut rep: Report, model: &str, divisor: &str, a: Option<&str>, with_approx: bool) -> Result<Report> {
    let m = threefold(load_model(model)?)?;
    let d = m
        .divisor(divisor)
        .ok_or_else(|| CliError::compute("kstab", format!("model {} has no test divisor {divisor:?}", m.name)))?;
    let a = match a {
        Some(s) => parse_rational(s).map_err(usage)?,
        None => d.log_discrepancy.clone(),
    };
    let (vol, s) = divisor_s_invariant(&m, divisor)?;
    let verdict = beta(divisor, &a, &s);
    let chambers: Vec<Value> = vol
        .function
        .pieces()
        .iter()
        .zip(&vol.chambers)
        .map(|(p, c)| {
            json!({
                "interval": [r(&p.lo), r(&p.hi)],
                "piece": p.poly.to_string(),
                "positive": affine_json(&c.positive, &m.basis, "t"),
            })
        })
        .collect();
    rep = rep
        .field("model", m.name.as_str())
        .field("divisor", divisor)
        .field("A", r(&a))
        .field("volume", r(&m.anticanonical_volume()))
        .field("S", r(&s))
        .field("beta", r(&verdict.beta))
        .field("chambers", chambers)
        .field("certificate", vol.certificate.as_str())
        .field("verdict", verdict.classification.label());
    if with_approx {
        rep.set("approx", json!({ "S": approx(&s), "beta": approx(&verdict.beta) }));
    }
    Ok(rep.field(
        "references",
        strings(&["beta = A - S", "S = (1/V) * integral of vol(-K - tE) dt over [0, tau]"]),
    ))
}

fn flag_sinv(mut rep: Report, model: &str, surface_name: &str, curve: &str, with_approx: bool) -> Result<Report> {
    let m = threefold(load_model(model)?)?;
    let s = model_file::preset_surface(surface_name)
        .ok_or_else(|| usage(format!("unknown surface {surface_name:?}; expected dp4 or quadric")))?;
    let z = s.parse_class(curve).map_err(usage)?;
    let flag = model_flag(&m, &s, &z)?;
    let chambers: Vec<Value> = flag
        .cells
        .chambers
        .iter()
        .map(|ch| {
            let cells: Vec<Value> = ch
                .cells
                .iter()
                .map(|c| {
                    json!({
                        "s_range": [c.lower.to_string(), c.upper.to_string()],
                        "support": strings(&c.support),
                        "positive": poly_class_json(&c.positive, &s.basis),
                        "volume": c.volume.to_string(),
                    })
                })
                .collect();
            json!({ "interval": [r(&ch.lo), r(&ch.hi)], "cells": cells })
        })
        .collect();
    rep = rep
        .field("model", m.name.as_str())
        .field("surface", s.name.as_str())
        .field("curve", flag.curve.as_str())
        .field("value", r(&flag.value))
        .field("correction", r(&flag.correction))
        .field("convention", flag.convention)
        .field("chambers", chambers);
    if with_approx {
        rep.set("approx", json!({ "value": approx(&flag.value) }));
    }
    Ok(rep.field(
        "references",
        strings(&["refined S over a flag (surface, curve)", "Zariski chambers of A(t) - sZ"]),
    ))
}

fn zariski(mut rep: Report, model: &str, class: &str, with_approx: bool) -> Result<Report> {
    let s = surface(load_model(model)?)?;
    let d = s.parse_class(class).map_err(usage)?;
    let z = zariski_decompose(&s, &d)?;
    let pairings: Vec<Value> = s
        .negative_curves
        .iter()
        .map(|c| json!({ "curve": c.label, "P.C": r(&s.pair(&z.positive, &c.vector)) }))
        .collect();
    let negative: Vec<Value> = z.negative.iter().map(|(l, c)| json!({ "curve": l, "coefficient": r(c) })).collect();
    rep = rep
        .field("model", s.name.as_str())
        .field("class", format_class(&d, &s.basis))
        .field("P", format_class(&z.positive, &s.basis))
        .field("N", negative)
        .field("vol", r(&z.volume))
        .field("support", strings(&z.support()))
        .field(
            "support_gram",
            Value::Array(z.support_gram.iter().map(|row| rvec(row)).collect()),
        )
        .field("pairings", pairings)
        .field(
            "certificate",
            "support Gram negative definite; P.C = 0 on the support and P.C >= 0 on every declared curve",
        );
    if with_approx {
        rep.set("approx", json!({ "vol": approx(&z.volume) }));
    }
    Ok(rep.field("references", strings(&["Zariski decomposition D = P + N"])))
}

fn enum_bound() -> Result<usize> {
    match std::env::var("KSTAB_ENUM_BOUND") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("KSTAB_ENUM_BOUND must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_ENUM_BOUND),
    }
}

fn gram_json(g: &GramLattice) -> Value {
    json!(g.gram())
}

fn lattice_header(rep: Report, g: &GramLattice) -> Report {
    let (p, n, z) = g.signature();
    rep.field("gram", gram_json(g))
        .field("det", g.determinant().to_string())
        .field("signature", json!([p, n, z]))
        .field("even", g.is_even())
}

fn parse_gram(s: &str) -> Result<GramLattice> {
    GramLattice::parse(s).map_err(usage)
}

fn lattice(rep: Report, cmd: &LatticeCommand) -> Result<Report> {
    let references = strings(&["discriminant form A_L = L*/L with q(x) = x.x mod 2"]);
    match cmd {
        LatticeCommand::Disc { gram } => {
            let g = parse_gram(gram)?;
            let disc = g.discriminant_group()?;
            let generators: Vec<Value> = disc
                .generators
                .iter()
                .zip(&disc.factors)
                .map(|(x, d)| {
                    let q = disc.quadratic(x).map(|q| r(&q.0)).unwrap_or(Value::Null);
                    json!({ "order": d.to_string(), "vector": rvec(x), "q": q })
                })
                .collect();
            Ok(lattice_header(rep, &g)
                .field("factors", strings(&disc.factors.iter().map(|d| d.to_string()).collect::<Vec<_>>()))
                .field("order", disc.order().to_string())
                .field("generators", generators)
                .field("references", references))
        }
        LatticeCommand::Overlattices { gram } => {
            let g = parse_gram(gram)?;
            let overs = g.even_overlattices(enum_bound()?)?;
            let list: Vec<Value> = overs
                .iter()
                .map(|o| {
                    json!({
                        "subgroup_order": o.subgroup_order,
                        "gram": gram_json(&o.lattice),
                        "det": o.lattice.determinant().to_string(),
                    })
                })
                .collect();
            Ok(lattice_header(rep, &g)
                .field("count", overs.len())
                .field("overlattices", list)
                .field("references", strings(&["even overlattices <-> isotropic subgroups of A_L"])))
        }
        LatticeCommand::Primitive { gram } => {
            let g = parse_gram(gram)?;
            let bound = enum_bound()?;
            let iso: Vec<Value> = g
                .isotropic_elements(bound)?
                .iter()
                .filter(|x| x.iter().any(|c| *c != num_zero()))
                .map(|x| rvec(x))
                .collect();
            Ok(lattice_header(rep, &g)
                .field("forced", iso.is_empty())
                .field("isotropic_nonzero", iso)
                .field("references", strings(&["primitive embedding forced iff A_L has no nonzero isotropic element"])))
        }
        LatticeCommand::Saturate { gram, basis } => {
            let g = parse_gram(gram)?;
            let rows: std::result::Result<Vec<Vec<i64>>, _> = basis
                .split(';')
                .map(|row| row.split_whitespace().map(str::parse::<i64>).collect())
                .collect();
            let rows = rows.map_err(|e| usage(format!("bad basis {basis:?}: {e}")))?;
            let sat = is_saturated(&g, &rows)?;
            Ok(lattice_header(rep, &g)
                .field("basis", json!(rows))
                .field("saturated", sat)
                .field("references", strings(&["saturated iff all Smith invariants of the basis are 1"])))
        }
        LatticeCommand::Search {
            form,
            cmp,
            region,
            vars,
        } => {
            let cmp: Comparison = cmp.parse().map_err(usage)?;
            let region = SearchBox::parse(region).map_err(usage)?;
            let poly = match vars {
                Some(v) => {
                    let names: Vec<&str> = v.split(',').map(str::trim).collect();
                    Polynomial::parse_in(form, names[0], names.get(1).copied().unwrap_or(""))
                }
                None => Polynomial::parse(form),
            }
            .map_err(usage)?;
            let (outer, inner) = poly.names();
            let nvars = [outer, inner].iter().filter(|n| !n.is_empty()).count();
            if nvars > region.ranges.len() {
                return Err(usage(format!(
                    "form has more variables than the box has ranges ({})",
                    region.ranges.len()
                )));
            }
            let sols = integer_search_quadratic(&poly, cmp, &region);
            let ranges: Vec<String> = region.ranges.iter().map(|(a, b)| format!("{a}..{b}")).collect();
            Ok(rep
                .field("form", poly.to_string())
                .field("comparison", format!("{} 0", cmp.symbol()))
                .field("box", strings(&ranges))
                .field("count", sols.len())
                .field("solutions", json!(sols))
                .field("scope", "verified within box"))
        }
    }
}

fn num_zero() -> kstab_core::Rational {
    kstab_core::exact::rational::zero()
}

fn nl_classify(rep: Report, degree: i64, h: i64, m: i64) -> Result<Report> {
    let g = k3cat::nl_gram(degree, h, m);
    let at22 = degree == k3cat::DEGREE;
    let ty = if at22 { k3cat::type_of(h, m) } else { None };
    let bn = at22 && k3cat::is_bn_excluding(h, m);
    let mut tags: Vec<&str> = Vec::new();
    if let Some(t) = ty {
        tags.push(t.label());
    }
    if bn {
        tags.push(k3cat::CatalogTag::BnExcluding.label());
    }
    if at22 && (h, m) == k3cat::NODAL {
        tags.push(k3cat::CatalogTag::Nodal.label());
    }
    Ok(lattice_header(rep, &g)
        .field("degree", degree)
        .field("h", h)
        .field("m", m)
        .field("hyperbolic", g.is_hyperbolic())
        .field("bn_excluding", bn)
        .field("type", ty.map(|t| t.label()))
        .field("tags", strings(&tags))
        .field("references", strings(&["NL divisor lattice [[d, h], [h, m]]"])))
}

fn toric_check(mut rep: Report, file: &str, with_approx: bool) -> Result<Report> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("cannot read {file:?}: {e}")))?;
    let p = LatticePolytope::parse(&text)?;
    let volume = p.volume();
    rep = rep
        .field("vertices", strings(&p.vertices().iter().map(fmt_point).collect::<Vec<_>>()))
        .field("volume", r(&volume));
    if !p.contains_origin_strictly() {
        return Ok(rep
            .field("reflexive", false)
            .field("dual_volume", Value::Null)
            .field("degree", Value::Null)
            .field("barycenter", Value::Null)
            .field("kps", Value::Null)
            .field("note", "origin is not an interior point"));
    }
    let dual = toric::polar_dual(&p)?;
    let reflexive = toric::is_reflexive(&p)?;
    let dual_volume = dual.volume();
    let degree = &dual_volume * kstab_core::exact::rational::int(6);
    let barycenter = dual.barycenter();
    let kps = if reflexive {
        Value::Bool(toric::toric_kps_check(&p)?.polystable)
    } else {
        Value::Null
    };
    rep = rep
        .field("reflexive", reflexive)
        .field("dual_volume", r(&dual_volume))
        .field("degree", r(&degree))
        .field("barycenter", rvec(&barycenter))
        .field("kps", kps);
    if with_approx {
        rep.set("approx", json!({ "volume": approx(&volume), "dual_volume": approx(&dual_volume) }));
    }
    Ok(rep.field(
        "references",
        strings(&["(-K)^3 = 3! vol(dual polytope)", "K-polystable iff barycenter of the dual is 0"]),
    ))
}

fn models(rep: Report, cmd: &ModelsCommand) -> Result<Report> {
    match cmd {
        ModelsCommand::List => Ok(rep.field("models", strings(&PRESET_NAMES))),
        ModelsCommand::Show { name } => {
            let m = load_model(name)?;
            Ok(rep
                .field("name", m.name())
                .field("kind", m.kind())
                .field("text", model_file::serialize(&m)))
        }
    }
}
