use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use unital_lab_core::conic::{arc_in_conic, ConicFit};
use unital_lab_core::elation::{
    elation_group, incidence_stats, orbit_line_census, orbit_of_canonical_pedal, orbit_of_pedal,
    partition_lines_for_orbit, preserves_unital, Elation, OrbitSet,
};
use unital_lab_core::pedal::{
    canonical_feet, feet_of, intersection_census, line_pedal_census, membership_value,
    membership_value_im_norm, membership_value_matrix, p_lambda,
    secant_partition_into_pedal_singletons, solve_trace_system, t_lambda_set,
    trace_class_partition, two_arc_partition, IntersectionCensus, PedalSet,
};
use unital_lab_core::unital::{discriminant, validate_params};
use unital_lab_core::{Error, FieldCtx, Fq, Fq2, Plane, Point, UnitalModel};

use crate::config::{Command, Problem, RunConfig, Target};
use crate::report::{merge, ScanReport, Summary, STATUS_FAIL, STATUS_PASS, STATUS_SKIPPED};
use crate::CliError;

/// Secants examined per tuple by the secant-partition scan once q ≥ 7.
pub const SECANT_SAMPLE: usize = 200;
/// Points examined per tuple by the tangent-count check once q ≥ 7.
pub const TANGENT_SAMPLE: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Unit {
    Hermitian,
    Tuple(Fq2, Fq2),
}

/// One report record under construction.
struct Rec {
    map: Map<String, Value>,
    checks: Map<String, Value>,
}

impl Rec {
    fn new(map: Map<String, Value>) -> Self {
        Rec {
            map,
            checks: Map::new(),
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.map.insert(key.to_string(), value);
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), Value::Bool(ok));
    }

    fn finish(mut self, outcome: Result<(), Error>) -> Value {
        let status = match outcome {
            Ok(()) if self.checks.values().all(|v| v == &Value::Bool(true)) => STATUS_PASS,
            Ok(()) => STATUS_FAIL,
            Err(Error::Domain(reason)) => {
                self.set("reason", Value::String(reason));
                STATUS_SKIPPED
            }
            Err(e) => {
                self.set("error", Value::String(e.to_string()));
                STATUS_FAIL
            }
        };
        if !self.checks.is_empty() {
            self.map.insert("checks".into(), Value::Object(self.checks));
        }
        self.map
            .insert("status".into(), Value::String(status.into()));
        Value::Object(self.map)
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    plane: &'a Plane,
    f: &'a FieldCtx,
}

impl Ctx<'_> {
    fn q(&self) -> usize {
        self.f.q() as usize
    }

    fn el(&self, x: Fq2) -> Value {
        Value::String(self.f.format(x))
    }

    fn pt(&self, idx: u32) -> Value {
        Value::String(self.plane.format_point(&self.plane.point_at(idx)))
    }

    fn pts(&self, idx: &[u32]) -> Value {
        Value::Array(idx.iter().map(|&i| self.pt(i)).collect())
    }

    fn line(&self, idx: u32) -> Value {
        Value::String(self.plane.format_line(&self.plane.line_at(idx)))
    }

    fn lambda_label(&self, lambda: Fq) -> Value {
        Value::String(if lambda == Fq::ONE {
            "1".into()
        } else {
            "w".into()
        })
    }
}

pub fn run(cfg: &RunConfig) -> Result<ScanReport, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let ctx = Ctx {
        cfg,
        plane: &cfg.plane,
        f: &cfg.field,
    };
    let units = work_units(cfg);
    let nested: Vec<Vec<Value>> =
        pool.install(|| units.par_iter().map(|u| process(&ctx, *u)).collect());
    let mut report = ScanReport {
        tool: "unital-lab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cfg.command.name().into(),
        problem: cfg.problem.map(|p| p.name().into()),
        p: cfg.field.p(),
        n: cfg.field.n(),
        q: cfg.field.q(),
        w: cfg.field.w().code(),
        records: nested.into_iter().flatten().collect(),
        summary: Summary::default(),
    };
    report.summarize();
    Ok(report)
}

fn work_units(cfg: &RunConfig) -> Vec<Unit> {
    let mut units = Vec::new();
    let alpha_zero_included = cfg.alpha.is_none_or(|a| a.is_zero());
    if cfg.command == Command::Verify && alpha_zero_included {
        units.push(Unit::Hermitian);
    }
    let sweep_alpha = cfg.alpha.is_none();
    units.extend(
        cfg.tuples()
            .into_iter()
            .filter(|(a, _)| !(cfg.command == Command::Scan && sweep_alpha && a.is_zero()))
            .map(|(a, b)| Unit::Tuple(a, b)),
    );
    units
}

fn process(ctx: &Ctx, unit: Unit) -> Vec<Value> {
    let (u, base) = match build(ctx, unit) {
        Ok(ok) => ok,
        Err(record) => return vec![record],
    };
    match ctx.cfg.command {
        Command::Verify => vec![verify(ctx, &u, base)],
        Command::Pedal => per_target(ctx, base, |rec, t| pedal(ctx, &u, rec, t)),
        Command::Census => per_target(ctx, base, |rec, t| census(ctx, &u, rec, t)),
        Command::Orbit => per_target(ctx, base, |rec, t| orbit(ctx, &u, rec, t)),
        Command::Scan => scan(ctx, &u, base),
    }
}

/// Builds the model, or the finished record explaining why it was skipped.
fn build(ctx: &Ctx, unit: Unit) -> Result<(UnitalModel, Map<String, Value>), Value> {
    let mut map = Map::new();
    let plane = ctx.cfg.plane.clone();
    match unit {
        Unit::Hermitian => {
            map.insert("kind".into(), json!("hermitian"));
            map.insert("alpha".into(), Value::Null);
            map.insert("beta".into(), Value::Null);
            UnitalModel::hermitian(plane)
                .map(|u| (u, map.clone()))
                .map_err(|e| Rec::new(map).finish(Err(e)))
        }
        Unit::Tuple(a, b) => {
            map.insert("kind".into(), json!("obm"));
            map.insert("alpha".into(), ctx.el(a));
            map.insert("beta".into(), ctx.el(b));
            match discriminant(ctx.f, a, b) {
                Ok(d) => {
                    map.insert("discriminant".into(), json!(d.code()));
                }
                Err(e) => return Err(Rec::new(map).finish(Err(e))),
            }
            map.insert("beta_real".into(), json!(ctx.f.as_fq(b).is_some()));
            if ctx.cfg.command == Command::Scan && a.is_zero() {
                let mut rec = Rec::new(map);
                rec.set("reason", json!("classical (α = 0)"));
                return Err(rec.finish_skipped());
            }
            match validate_params(ctx.f, a, b) {
                Ok(params) => UnitalModel::obm(plane, params)
                    .map(|u| (u, map.clone()))
                    .map_err(|e| Rec::new(map).finish(Err(e))),
                Err(Error::InvalidUnital { .. }) => {
                    let mut rec = Rec::new(map);
                    rec.set("reason", json!("invalid (discriminant square)"));
                    Err(rec.finish_skipped())
                }
                Err(e) => Err(Rec::new(map).finish(Err(e))),
            }
        }
    }
}

impl Rec {
    fn finish_skipped(mut self) -> Value {
        self.map.insert("status".into(), json!(STATUS_SKIPPED));
        Value::Object(self.map)
    }
}

fn sample(len: usize, k: usize) -> Vec<usize> {
    if len <= k {
        (0..len).collect()
    } else {
        (0..k).map(|i| i * len / k).collect()
    }
}

fn verify(ctx: &Ctx, u: &UnitalModel, base: Map<String, Value>) -> Value {
    let mut rec = Rec::new(base);
    let outcome = (|| {
        let q = ctx.q();
        let plane = ctx.plane;
        rec.set("points", json!(u.len()));
        rec.check("point_count", u.len() == q * q * q + 1);
        rec.check("plane_count", plane.size() == q.pow(4) + q * q + 1);
        let tangents = u.verify_unital_axiom()?;
        rec.set("tangent_lines", json!(tangents));
        rec.check("unital_axiom", tangents == u.len());
        let blocking = u.verify_minimal_blocking_set();
        rec.check("minimal_blocking_set", blocking.passed());
        let mut agree = 0;
        for &p in u.points() {
            let pt = plane.point_at(p);
            if u.tangent_line_at(&pt)? == u.tangent_line_oracle(&pt)? {
                agree += 1;
            }
        }
        rec.set("tangent_formula_agreement", json!(agree));
        rec.check("tangent_formula", agree == u.len());
        let indices = if q <= 5 {
            (0..plane.size()).collect()
        } else {
            sample(plane.size(), TANGENT_SAMPLE)
        };
        let mut counts_ok = true;
        for &i in &indices {
            let (t, s) = u.tangent_count_through(&plane.point_at(i as u32))?;
            let expected = if u.contains(i as u32) {
                (1, q * q)
            } else {
                (q + 1, q * q - q)
            };
            counts_ok &= (t, s) == expected;
        }
        rec.set("tangent_count_points", json!(indices.len()));
        rec.check("tangent_counts", counts_ok);
        Ok(())
    })();
    rec.finish(outcome)
}

fn per_target(
    ctx: &Ctx,
    base: Map<String, Value>,
    mut body: impl FnMut(&mut Rec, &Target) -> Result<(), Error>,
) -> Vec<Value> {
    ctx.cfg
        .targets
        .iter()
        .map(|t| {
            let mut rec = Rec::new(base.clone());
            match t {
                Target::Lambda(l) => {
                    rec.set("lambda", ctx.lambda_label(*l));
                    rec.set(
                        "base_point",
                        Value::String(ctx.plane.format_point(&p_lambda(ctx.plane, *l))),
                    );
                }
                Target::Point(p) => {
                    rec.set("lambda", Value::Null);
                    rec.set("base_point", Value::String(ctx.plane.format_point(p)));
                }
            }
            let outcome = body(&mut rec, t);
            rec.finish(outcome)
        })
        .collect()
}

fn target_point(ctx: &Ctx, t: &Target) -> Point {
    match t {
        Target::Lambda(l) => p_lambda(ctx.plane, *l),
        Target::Point(p) => *p,
    }
}

fn census_json(ctx: &Ctx, census: &IntersectionCensus) -> Value {
    let histogram: Map<String, Value> = census
        .histogram
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let witnesses: Vec<Value> = census
        .witnesses
        .iter()
        .map(|w| json!({"line": ctx.line(w.line), "points": ctx.pts(&w.points)}))
        .collect();
    json!({
        "lines": census.lines_examined,
        "histogram": histogram,
        "witnesses": witnesses,
    })
}

fn fit_json(fit: &ConicFit) -> Value {
    match fit {
        ConicFit::Contained { .. } => json!(true),
        ConicFit::NotContained { .. } => json!(false),
        ConicFit::Degenerate => json!("degenerate"),
    }
}

/// Feet of the target, with the canonical frame attached when available.
fn target_pedal(ctx: &Ctx, u: &UnitalModel, rec: &mut Rec, t: &Target) -> Result<PedalSet, Error> {
    let pt = target_point(ctx, t);
    let pedal = feet_of(u, &pt)?;
    rec.set("feet", ctx.pts(&pedal.feet));
    rec.check("feet_count", pedal.feet.len() == ctx.q() + 1);
    if let (Target::Lambda(l), Some(_)) = (t, u.params()) {
        let canon = canonical_feet(u, *l)?;
        rec.check("closed_form", canon.feet == pedal.feet);
        return Ok(canon);
    }
    Ok(pedal)
}

fn arcs_json(ctx: &Ctx, u: &UnitalModel, pedal: &PedalSet) -> Result<Value, Error> {
    let part = two_arc_partition(u, pedal)?;
    let mut fits = vec![
        fit_json(&arc_in_conic(ctx.plane, &part.first)),
        fit_json(&arc_in_conic(ctx.plane, &part.second)),
    ];
    let whole = if part.whole_is_arc {
        fit_json(&arc_in_conic(ctx.plane, &pedal.feet))
    } else {
        Value::Null
    };
    fits.push(whole);
    Ok(json!({
        "parts": [part.first.len(), part.second.len()],
        "first": ctx.pts(&part.first),
        "second": ctx.pts(&part.second),
        "arc_checks": true,
        "whole_is_arc": part.whole_is_arc,
        "conic_fit": fits,
    }))
}

fn pedal(ctx: &Ctx, u: &UnitalModel, rec: &mut Rec, t: &Target) -> Result<(), Error> {
    let plane = ctx.plane;
    let f = ctx.f;
    let pt = target_point(ctx, t);
    let pedal = target_pedal(ctx, u, rec, t)?;
    let collinear = pedal.is_collinear(plane);
    let at_infinity = plane.on_line_at_infinity(&pt);
    rec.set("collinear", json!(collinear));
    rec.set("on_line_at_infinity", json!(at_infinity));
    let non_classical = u.is_non_classical_obm();
    rec.check(
        "collinearity",
        if non_classical {
            collinear == at_infinity
        } else {
            collinear
        },
    );
    if let (Target::Lambda(l), Some(params)) = (t, u.params()) {
        let l = *l;
        let t_set = t_lambda_set(u, l)?;
        rec.set(
            "t_lambda",
            Value::Array(t_set.iter().map(|&x| ctx.el(x)).collect()),
        );
        let forms_agree = f.elements().all(|x| {
            let v = membership_value(f, params, l, x);
            v == membership_value_matrix(f, params, l, x)
                && v == membership_value_im_norm(f, params, l, x)
        });
        rec.check("membership_forms", forms_agree);
    }
    if let (Target::Lambda(l), true) = (t, non_classical) {
        let l = *l;
        let classes = trace_class_partition(u, l)?;
        let mut systems_ok = true;
        for class in &classes {
            for &x in &class.members {
                let sol = solve_trace_system(u, l, x)?;
                systems_ok &= sol == class.members && (sol.len() == 2 || sol.len() == 4);
            }
        }
        rec.check("trace_system", systems_ok);
        rec.set(
            "trace_classes",
            Value::Array(
                classes
                    .iter()
                    .map(|c| {
                        json!({
                            "trace": c.trace.code(),
                            "members": c.members.iter().map(|&x| ctx.el(x)).collect::<Vec<_>>(),
                            "line": plane.format_line(&c.line),
                        })
                    })
                    .collect(),
            ),
        );
    }
    if non_classical && !at_infinity {
        let census = line_pedal_census(u, &pedal)?;
        rec.set("census", census_json(ctx, &census));
        rec.set("arcs", arcs_json(ctx, u, &pedal)?);
    }
    Ok(())
}

fn census(ctx: &Ctx, u: &UnitalModel, rec: &mut Rec, t: &Target) -> Result<(), Error> {
    let pedal = target_pedal(ctx, u, rec, t)?;
    let census = line_pedal_census(u, &pedal)?;
    rec.check(
        "histogram_total",
        census.histogram.values().sum::<usize>() == census.lines_examined,
    );
    rec.set("census", census_json(ctx, &census));
    Ok(())
}

fn orbit_checks(ctx: &Ctx, u: &UnitalModel, rec: &mut Rec, orbit: &OrbitSet) {
    let plane = ctx.plane;
    let q = ctx.q();
    rec.check("orbit_size", orbit.union.len() == q * (q + 1));
    let group = elation_group(plane);
    rec.check(
        "unital_invariance",
        group.iter().all(|e| preserves_unital(u, e)),
    );
    let probe: Vec<Point> = [orbit.base, orbit.union[0], 0, plane.size() as u32 - 1]
        .iter()
        .map(|&i| plane.point_at(i))
        .collect();
    let laws = group.iter().all(|a| {
        a.compose(plane, &a.inverse(plane)).is_identity()
            && group.iter().all(|b| {
                let ab = a.compose(plane, b);
                probe
                    .iter()
                    .all(|p| ab.apply(plane, p) == a.apply(plane, &b.apply(plane, p)))
            })
    });
    rec.check("group_laws", laws);
    let (_, base) = &orbit.pedals[0];
    let base_census = intersection_census(plane, &base.feet, 2);
    let p_inf = plane.p_infinity();
    let mut stabilizer_trivial = true;
    let mut through_centre = true;
    let mut cardinalities = true;
    for (t, image) in &orbit.pedals[1..] {
        let e = Elation::new(*t);
        stabilizer_trivial &= image.feet != base.feet;
        for &a in &base.feet {
            let pa = plane.point_at(a);
            through_centre &= plane
                .join(&pa, &e.apply(plane, &pa))
                .is_ok_and(|l| plane.incident(&p_inf, &l));
        }
        for w in &base_census.witnesses {
            let l = e.apply_line(plane, &plane.line_at(w.line));
            let on = plane.points_on(plane.line_index(&l));
            let c = image
                .feet
                .iter()
                .filter(|x| on.binary_search(x).is_ok())
                .count();
            cardinalities &= c == w.points.len();
        }
    }
    rec.check("pedal_images", true);
    rec.check("stabilizer_trivial", stabilizer_trivial);
    rec.check("joins_through_centre", through_centre);
    rec.check("intersection_sizes_preserved", cardinalities);
    rec.set(
        "pedals",
        Value::Array(
            orbit
                .pedals
                .iter()
                .map(|(t, p)| json!({"t": t.code(), "base_point": ctx.pt(p.base), "feet": ctx.pts(&p.feet)}))
                .collect(),
        ),
    );
    rec.set("union_size", json!(orbit.union.len()));
}

fn histogram_json(census: &IntersectionCensus) -> Value {
    Value::Object(
        census
            .histogram
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect(),
    )
}

fn orbit(ctx: &Ctx, u: &UnitalModel, rec: &mut Rec, t: &Target) -> Result<(), Error> {
    match t {
        Target::Lambda(l) if u.params().is_some() => {
            let (orbit, lines) = partition_lines_for_orbit(u, *l)?;
            orbit_checks(ctx, u, rec, &orbit);
            rec.check("partition_lines", lines.len() == ctx.q());
            rec.set(
                "partition_lines",
                Value::Array(
                    lines
                        .iter()
                        .map(|pl| {
                            json!({
                                "s": pl.s.code(),
                                "line": ctx.plane.format_line(&pl.line),
                                "orbit_points": pl.points.len(),
                            })
                        })
                        .collect(),
                ),
            );
            let (_, census) = orbit_line_census(u, *l)?;
            rec.set("census_histogram", histogram_json(&census));
        }
        _ => {
            let orbit = orbit_of_pedal(u, &target_point(ctx, t))?;
            orbit_checks(ctx, u, rec, &orbit);
            let census = intersection_census(ctx.plane, &orbit.union, usize::MAX);
            rec.set("census_histogram", histogram_json(&census));
        }
    }
    Ok(())
}

fn scan(ctx: &Ctx, u: &UnitalModel, base: Map<String, Value>) -> Vec<Value> {
    match ctx.cfg.problem.expect("validated") {
        Problem::FourLines => {
            let mut rec = Rec::new(base);
            let outcome = four_lines(ctx, u, &mut rec);
            vec![rec.finish(outcome)]
        }
        Problem::SecantPartition => {
            let mut rec = Rec::new(base);
            let outcome = secant_scan(ctx, u, &mut rec);
            vec![rec.finish(outcome)]
        }
        Problem::Conics => per_target(ctx, base, |rec, t| {
            let pedal = target_pedal(ctx, u, rec, t)?;
            rec.set("arcs", arcs_json(ctx, u, &pedal)?);
            Ok(())
        }),
        Problem::OrbitCensus => per_target(ctx, base, |rec, t| {
            let lambda = require_lambda(t)?;
            let (_, lines) = partition_lines_for_orbit(u, lambda)?;
            rec.check("partition_lines", lines.len() == ctx.q());
            let (_, census) = orbit_line_census(u, lambda)?;
            rec.check("partition_line_sizes", census.count(ctx.q() + 1) >= ctx.q());
            rec.set("census", census_json(ctx, &census));
            Ok(())
        }),
        Problem::IncidenceStructure => per_target(ctx, base, |rec, t| {
            let orbit = orbit_of_canonical_pedal(u, require_lambda(t)?)?;
            let stats = incidence_stats(ctx.plane, &orbit);
            let map = |m: &BTreeMap<usize, usize>| {
                Value::Object(m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
            };
            let mut obj = Map::new();
            merge(
                &mut obj,
                json!({
                    "points": stats.points,
                    "blocks": stats.blocks,
                    "point_degrees": map(&stats.point_degrees),
                    "block_sizes": map(&stats.block_sizes),
                    "tactical": stats.tactical,
                }),
            );
            rec.set("incidence", Value::Object(obj));
            Ok(())
        }),
    }
}

fn require_lambda(t: &Target) -> Result<Fq, Error> {
    match t {
        Target::Lambda(l) => Ok(*l),
        Target::Point(_) => Err(Error::Domain(
            "this problem works in the canonical frame; use --lambda".into(),
        )),
    }
}

fn four_lines(ctx: &Ctx, u: &UnitalModel, rec: &mut Rec) -> Result<(), Error> {
    let plane = ctx.plane;
    let points: Vec<Point> = if ctx.q() <= 5 {
        rec.set("scope", json!("all-external"));
        (0..plane.size() as u32)
            .filter(|&i| !u.contains(i))
            .map(|i| plane.point_at(i))
            .filter(|p| !plane.on_line_at_infinity(p))
            .collect()
    } else {
        rec.set("scope", json!("canonical"));
        ctx.cfg
            .targets
            .iter()
            .map(|t| target_point(ctx, t))
            .collect()
    };
    let mut with_four = 0;
    let mut total_four = 0;
    for p in &points {
        if u.contains_point(p) || plane.on_line_at_infinity(p) {
            continue;
        }
        let census = line_pedal_census(u, &feet_of(u, p)?)?;
        let c = census.count(4);
        total_four += c;
        with_four += usize::from(c > 0);
    }
    let beta_real = u.params().is_some_and(|p| p.is_beta_real(ctx.f));
    rec.set("points_examined", json!(points.len()));
    rec.set("points_with_four_lines", json!(with_four));
    rec.set("four_lines", json!(total_four));
    rec.check("real_beta_has_no_four_lines", !beta_real || total_four == 0);
    Ok(())
}

fn secant_scan(ctx: &Ctx, u: &UnitalModel, rec: &mut Rec) -> Result<(), Error> {
    let plane = ctx.plane;
    let q = ctx.q();
    let secants: Vec<u32> = (0..plane.size() as u32)
        .filter(|&l| u.line_count(l) == q + 1)
        .collect();
    let chosen: Vec<u32> = if q <= 5 {
        secants.clone()
    } else {
        sample(secants.len(), SECANT_SAMPLE)
            .into_iter()
            .map(|i| secants[i])
            .collect()
    };
    let mut witnesses = Vec::new();
    let mut ok = 0;
    for &l in &chosen {
        let parts = secant_partition_into_pedal_singletons(u, &plane.line_at(l))?;
        let mut feet: Vec<u32> = parts.iter().map(|s| s.foot).collect();
        feet.sort_unstable();
        feet.dedup();
        let mut bases: Vec<u32> = parts.iter().map(|s| s.base).collect();
        bases.sort_unstable();
        bases.dedup();
        if feet.len() == q + 1 && bases.len() == q + 1 {
            ok += 1;
        }
        if ctx.cfg.single_tuple() {
            witnesses.push(json!({
                "line": ctx.line(l),
                "pedals": parts
                    .iter()
                    .map(|s| json!({"base_point": ctx.pt(s.base), "foot": ctx.pt(s.foot)}))
                    .collect::<Vec<_>>(),
            }));
        }
    }
    rec.set("secants", json!(secants.len()));
    rec.set("secants_examined", json!(chosen.len()));
    rec.set("partitions_found", json!(ok));
    if ctx.cfg.single_tuple() {
        rec.set("witnesses", Value::Array(witnesses));
    }
    rec.check("all_secants_partitioned", ok == chosen.len());
    Ok(())
}
