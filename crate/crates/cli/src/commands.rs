use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use billiard_caustics::axis::{
    fixed_point_analysis, iterate_axis_cusps, mobius_f, mobius_g, Axis, MobiusClass, MobiusMap,
};
use billiard_caustics::cusp::{analyze, analyze_external, Cusp, MATCH_TOL};
use billiard_caustics::family::{infinity_crossings, Caustic, MIN_SAMPLES};
use billiard_caustics::geometry::angle_distance_mod_pi;
use billiard_caustics::refraction::{refraction_caustic, refraction_samples, RefractionSetup};
use billiard_caustics::{CausticError, ConicTable, EnvelopePoint, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{
    AxisArgs, CausticArgs, Cli, Command, ComplexityArgs, NumericArgs, RefractionArgs, Suite,
    TableArgs, VerifyArgs,
};
use crate::output::{self, caustic_rows, csv_header, CuspJson, PredictionJson, RunConfig, F};
use crate::svg::{default_viewport, Plot};

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Validation(String),
    Degenerate(String),
    Claim(String),
    Compute(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Degenerate(_) => 3,
            Failure::Claim(_) | Failure::Compute(_) | Failure::Io(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Validation(_) => "validation",
            Failure::Degenerate(_) => "degenerate",
            Failure::Claim(_) => "claim",
            Failure::Compute(_) => "compute",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m)
            | Failure::Degenerate(m)
            | Failure::Claim(m)
            | Failure::Compute(m)
            | Failure::Io(m) => m,
        }
    }
}

/// `error kind=<kind> message="<text>"` on one line.
impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error kind={} message={:?}", self.kind(), self.message())
    }
}

impl From<CausticError> for Failure {
    fn from(e: CausticError) -> Self {
        let text = e.to_string();
        match e {
            CausticError::InvalidTable { .. }
            | CausticError::InvalidParameter(_)
            | CausticError::DegeneratePencil
            | CausticError::OutsidePoint
            | CausticError::InsidePoint => Failure::Validation(text),
            CausticError::DegenerateSource | CausticError::FocusPoint => Failure::Degenerate(text),
            _ => Failure::Compute(text),
        }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Caustic(a) => cmd_caustic(a),
        Command::Verify { suite } => cmd_verify(suite),
        Command::Complexity(a) => cmd_complexity(a),
        Command::Axis(a) => cmd_axis(a),
    }
}

fn invalid(text: impl Into<String>) -> Failure {
    Failure::Validation(text.into())
}

fn table(args: TableArgs, default_a: f64, default_b: f64) -> Result<ConicTable, Failure> {
    let a = args.a.unwrap_or(default_a);
    let b = args
        .b
        .unwrap_or(if args.a.is_some() { a } else { default_b });
    Ok(ConicTable::new(a, b)?)
}

fn numeric(n: &NumericArgs) -> Outcome {
    if n.samples < MIN_SAMPLES {
        return Err(invalid(format!("--samples must be at least {MIN_SAMPLES}")));
    }
    if !(n.tol.is_finite() && n.tol > 0.0) {
        return Err(invalid("--tol must be positive"));
    }
    Ok(())
}

fn required_source(source: Option<(f64, f64)>) -> Result<Point, Failure> {
    source
        .map(|(x, y)| Point::new(x, y))
        .ok_or_else(|| invalid("missing --source x,y"))
}

fn positive_n(n: u32) -> Outcome {
    if n == 0 {
        Err(invalid(
            "n must be at least 1: the pencil itself has no caustic",
        ))
    } else {
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn base_config(command: &str, t: &ConicTable, numeric: &NumericArgs) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.a = Some(F(t.a()));
    c.b = Some(F(t.b()));
    c.samples = Some(numeric.samples);
    c.tol = Some(F(numeric.tol));
    c.match_tol = Some(F(MATCH_TOL * t.a()));
    c
}

/// Caustics, cusps and predictions of one run, per orientation family.
struct Computed {
    caustics: Vec<(Option<&'static str>, Caustic)>,
    cusps: Vec<(Option<&'static str>, Vec<Cusp>)>,
    predictions: Vec<PredictionJson>,
}

fn compute(t: &ConicTable, o: Point, n: u32, numeric: &NumericArgs) -> Result<Computed, Failure> {
    let match_tol = MATCH_TOL * t.a();
    if t.is_focal(o) {
        return Err(CausticError::DegenerateSource.into());
    }
    if t.contains(o) {
        let a = analyze(t, o, n, numeric.samples, match_tol, numeric.tol)?;
        let predictions = a
            .predicted
            .iter()
            .zip(&a.matches)
            .map(|(p, m)| PredictionJson::new(p, m.is_some(), None))
            .collect();
        return Ok(Computed {
            caustics: vec![(None, a.caustic)],
            cusps: vec![(None, a.cusps)],
            predictions,
        });
    }
    let a = analyze_external(t, o, n, numeric.samples, match_tol, numeric.tol)?;
    let names = [Some("forward"), Some("backward")];
    let predictions = (0..2)
        .filter_map(|k| {
            a.predicted[k].map(|p| PredictionJson::new(&p, a.matches[k].is_some(), names[k]))
        })
        .collect();
    let [c0, c1] = a.caustics;
    let [k0, k1] = a.cusps;
    Ok(Computed {
        caustics: vec![(names[0], c0), (names[1], c1)],
        cusps: vec![(names[0], k0), (names[1], k1)],
        predictions,
    })
}

#[derive(Serialize)]
struct CuspReport<'a> {
    config: &'a RunConfig,
    cusps: Vec<CuspJson>,
    predicted: Vec<PredictionJson>,
}

pub fn cmd_caustic(args: &CausticArgs) -> Outcome {
    let t = table(args.table, 1.0, 1.0)?;
    let o = required_source(args.source)?;
    positive_n(args.n)?;
    numeric(&args.numeric)?;
    let mut config = base_config("caustic", &t, &args.numeric);
    config.source = Some([F(o.x), F(o.y)]);
    config.n = Some(args.n);
    config.viewport = args.viewport.map(|v| v.map(F));
    config.degrees = args.degrees;

    let run = compute(&t, o, args.n, &args.numeric)?;

    let mut csv = csv_header(&config);
    for (name, c) in &run.caustics {
        if let Some(name) = name {
            csv.push_str(&format!("# family {name}\n"));
        }
        caustic_rows(&mut csv, c, args.degrees);
    }
    write_file(&args.csv, &csv)?;

    let report = CuspReport {
        config: &config,
        cusps: run
            .cusps
            .iter()
            .flat_map(|(name, cs)| cs.iter().map(|c| CuspJson::new(c, *name, args.degrees)))
            .collect(),
        predicted: run.predictions,
    };
    write_file(&args.json, &output::to_json(&report))?;

    if let Some(path) = &args.svg {
        let locations: Vec<EnvelopePoint> = run
            .cusps
            .iter()
            .flat_map(|(_, cs)| cs.iter().map(|c| c.location))
            .collect();
        let viewport = args
            .viewport
            .unwrap_or_else(|| default_viewport(&t, Some(o), &locations));
        let plot = Plot {
            config_json: config.to_json(),
            table: t,
            source: Some(o),
            caustics: run.caustics.iter().map(|(_, c)| c).collect(),
            cusps: locations,
            viewport,
        };
        write_file(path, &plot.render())?;
    }
    Ok(())
}

/// A value in a verification record.
#[derive(Debug, Serialize)]
#[serde(untagged)]
enum V {
    Num(F),
    Count(usize),
    Text(String),
    Points(Vec<[Option<F>; 2]>),
    Missing(Option<()>),
}

fn point_value(p: EnvelopePoint) -> [Option<F>; 2] {
    match p.finite() {
        Some(q) => [Some(F(q.x)), Some(F(q.y))],
        None => [None, None],
    }
}

#[derive(Debug, Serialize)]
struct Claim {
    claim: String,
    pass: bool,
    values: BTreeMap<&'static str, V>,
}

impl Claim {
    fn new(claim: impl Into<String>) -> Self {
        Claim {
            claim: claim.into(),
            pass: false,
            values: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &'static str, value: V) -> Self {
        self.values.insert(key, value);
        self
    }

    fn failed(claim: impl Into<String>, error: Failure) -> Self {
        Claim::new(claim).with("error", V::Text(error.to_string()))
    }
}

#[derive(Serialize)]
struct Verdict<'a> {
    config: &'a RunConfig,
    suite: &'static str,
    pass: bool,
    claims: Vec<Claim>,
}

fn finish(
    config: &RunConfig,
    suite: &'static str,
    claims: Vec<Claim>,
    path: Option<&Path>,
) -> Outcome {
    let pass = !claims.is_empty() && claims.iter().all(|c| c.pass);
    let failed = claims.iter().filter(|c| !c.pass).count();
    let verdict = Verdict {
        config,
        suite,
        pass,
        claims,
    };
    emit(path, &output::to_json(&verdict))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Claim(format!("{suite}: {failed} claim(s) failed")))
    }
}

pub fn cmd_verify(suite: &Suite) -> Outcome {
    match suite {
        Suite::Circle(a) => verify_circle(a),
        Suite::Ellipse(a) => verify_ellipse(a),
        Suite::Axis(a) => verify_axis(a),
        Suite::Refraction(a) => verify_refraction(a),
        Suite::External(a) => verify_external(a),
    }
}

fn verify_config(
    suite: &str,
    t: &ConicTable,
    args: &VerifyArgs,
    n_max: u32,
) -> Result<RunConfig, Failure> {
    numeric(&args.numeric)?;
    positive_n(n_max)?;
    let mut c = base_config(&format!("verify {suite}"), t, &args.numeric);
    c.n = Some(n_max);
    c.source = args.source.map(|(x, y)| [F(x), F(y)]);
    c.x0 = args.x0.map(F);
    c.seed = args.seed;
    Ok(c)
}

/// Whether a cusp lies on the line through the center and `o`.
fn on_center_line(c: &Cusp, o: Point, tol: f64) -> bool {
    let (ux, uy) = (o.x / o.norm(), o.y / o.norm());
    match c.location {
        EnvelopePoint::Finite(q) => (ux * q.y - uy * q.x).abs() < tol,
        EnvelopePoint::AtInfinity { direction } => {
            angle_distance_mod_pi(direction, uy.atan2(ux)) < 1e-6
        }
    }
}

fn verify_circle(args: &VerifyArgs) -> Outcome {
    let t = table(args.table, 1.0, 1.0)?;
    if !t.is_circle() {
        return Err(invalid("the circle suite needs a = b"));
    }
    let o = required_source(args.source)?;
    let n_max = args.n_max.unwrap_or(8);
    let config = verify_config("circle", &t, args, n_max)?;
    let d = o.norm();
    let mut claims = Vec::new();
    for n in 1..=n_max {
        let name =
            format!("n={n}: four ordinary cusps, two on the center line, two on the source circle");
        let a = match analyze(
            &t,
            o,
            n,
            args.numeric.samples,
            MATCH_TOL * t.a(),
            args.numeric.tol,
        ) {
            Ok(a) => a,
            Err(e) => {
                claims.push(Claim::failed(name, e.into()));
                continue;
            }
        };
        let ordinary = a.cusps.iter().filter(|c| c.order.is_ordinary()).count();
        let line = a
            .cusps
            .iter()
            .filter(|c| on_center_line(c, o, 1e-6 * t.a()))
            .count();
        let circle = a
            .cusps
            .iter()
            .filter(|c| !on_center_line(c, o, 1e-6 * t.a()))
            .filter_map(|c| c.location.finite())
            .filter(|q| (q.norm() - d).abs() < 1e-5 * t.a())
            .count();
        let matched = a.matches.iter().filter(|m| m.is_some()).count();
        let mut claim = Claim::new(name)
            .with("detected", V::Count(a.cusps.len()))
            .with("ordinary", V::Count(ordinary))
            .with("on_center_line", V::Count(line))
            .with("on_source_circle", V::Count(circle))
            .with("predicted_matched", V::Count(matched))
            .with(
                "cusps",
                V::Points(a.cusps.iter().map(|c| point_value(c.location)).collect()),
            );
        claim.pass =
            a.cusps.len() == 4 && ordinary == 4 && line == 2 && circle == 2 && matched == 4;
        claims.push(claim);
    }
    finish(&config, "circle", claims, args.json.as_deref())
}

/// `count` interior sources at least `1e-2 a` away from the foci, uniform in
/// the table shrunk by 10%.
fn random_sources(t: &ConicTable, seed: u64, count: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let q = Point::new(
            rng.gen_range(-0.9..0.9) * t.a(),
            rng.gen_range(-0.9..0.9) * t.b(),
        );
        let ok = (q.x / t.a()).powi(2) + (q.y / t.b()).powi(2) < 0.81
            && t.foci().iter().all(|f| f.distance(q) > 1e-2 * t.a());
        if ok {
            out.push(q);
        }
    }
    out
}

fn verify_ellipse(args: &VerifyArgs) -> Outcome {
    let t = table(args.table, 2.0, 1.0)?;
    let n_max = args.n_max.unwrap_or(5);
    let config = verify_config("ellipse", &t, args, n_max)?;
    let mut sources = Vec::new();
    if let Some((x, y)) = args.source {
        sources.push(Point::new(x, y));
    }
    if let Some(seed) = args.seed {
        sources.extend(random_sources(&t, seed, 3));
    }
    if sources.is_empty() {
        return Err(invalid("missing --source x,y (or --seed)"));
    }
    let mut claims = Vec::new();
    for o in sources {
        for n in 1..=n_max {
            let name = format!(
                "source=({},{}) n={n}: four predicted cusps detected",
                o.x, o.y
            );
            match analyze(
                &t,
                o,
                n,
                args.numeric.samples,
                MATCH_TOL * t.a(),
                args.numeric.tol,
            ) {
                Ok(a) => {
                    let matched = a.matches.iter().filter(|m| m.is_some()).count();
                    let worst = a
                        .matches
                        .iter()
                        .flatten()
                        .map(|m| m.distance)
                        .fold(0.0, f64::max);
                    let mut claim = Claim::new(name)
                        .with("detected", V::Count(a.cusps.len()))
                        .with(
                            "ordinary",
                            V::Count(a.cusps.iter().filter(|c| c.order.is_ordinary()).count()),
                        )
                        .with("predicted_matched", V::Count(matched))
                        .with("max_match_distance", V::Num(F(worst)));
                    claim.pass = matched == 4;
                    claims.push(claim);
                }
                Err(e) => claims.push(Claim::failed(name, e.into())),
            }
        }
    }
    finish(&config, "ellipse", claims, args.json.as_deref())
}

fn verify_axis(args: &VerifyArgs) -> Outcome {
    let t = table(args.table, 2.0, 1.0)?;
    let n_max = args.n_max.unwrap_or(6);
    let config = verify_config("axis", &t, args, n_max)?;
    let (coord, axis) = match (args.x0, args.source) {
        (Some(x0), _) => (x0, Axis::Major),
        (None, Some((x, 0.0))) => (x, Axis::Major),
        (None, Some((0.0, y))) => (y, Axis::Minor),
        (None, Some(_)) => return Err(invalid("the axis suite needs a source on an axis")),
        (None, None) => return Err(invalid("missing --x0")),
    };
    let o = match axis {
        Axis::Major => Point::new(coord, 0.0),
        Axis::Minor => Point::new(0.0, coord),
    };
    let tol = MATCH_TOL * t.a();
    let mut claims = Vec::new();
    for n in 1..=n_max {
        let name = format!("n={n}: mirror-equation iterates match detected on-axis cusps");
        let predicted = match iterate_axis_cusps(&t, coord, n, axis) {
            Ok(p) => p,
            Err(e) => {
                let f = Failure::from(e);
                if matches!(f, Failure::Validation(_) | Failure::Degenerate(_)) {
                    return Err(f);
                }
                claims.push(Claim::failed(name, f));
                continue;
            }
        };
        let detected = match analyze(&t, o, n, args.numeric.samples, tol, args.numeric.tol) {
            Ok(a) => a.cusps,
            Err(e) => {
                claims.push(Claim::failed(name, e.into()));
                continue;
            }
        };
        let gap = |p: EnvelopePoint| {
            detected
                .iter()
                .map(|c| c.location.distance(p))
                .fold(f64::INFINITY, f64::min)
        };
        let gaps = [gap(predicted.0), gap(predicted.1)];
        let mut claim = Claim::new(name)
            .with(
                "predicted",
                V::Points(vec![point_value(predicted.0), point_value(predicted.1)]),
            )
            .with("forward_distance", V::Num(F(gaps[0])))
            .with("backward_distance", V::Num(F(gaps[1])));
        claim.pass = gaps.iter().all(|g| *g <= tol);
        claims.push(claim);
    }
    let (map, name) = match axis {
        Axis::Major => (mobius_f(&t), "f"),
        Axis::Minor => (mobius_g(&t), "g"),
    };
    let fp = fixed_point_analysis(&map);
    claims.push(
        Claim {
            pass: true,
            ..Claim::new(format!("{name}: fixed-point structure"))
        }
        .with("class", V::Text(class_name(fp.class).into()))
        .with(
            "rotation_angle",
            fp.rotation_angle.map_or(V::Missing(None), |r| V::Num(F(r))),
        ),
    );
    finish(&config, "axis", claims, args.json.as_deref())
}

fn verify_refraction(args: &RefractionArgs) -> Outcome {
    numeric(&args.numeric)?;
    let setup = RefractionSetup::new(args.mu, args.a)?;
    let mut config = RunConfig::new("verify refraction");
    config.a = Some(F(args.a));
    config.mu = Some(F(args.mu));
    config.samples = Some(args.numeric.samples);
    config.tol = Some(F(args.numeric.tol));
    let mut claims = Vec::new();

    let worst = refraction_samples(&setup, args.numeric.samples)
        .iter()
        .map(|r| r.snell_residual(args.mu))
        .fold(0.0, f64::max);
    let mut snell =
        Claim::new("refracted rays obey sin i = mu sin r").with("max_residual", V::Num(F(worst)));
    snell.pass = worst < 1e-12;
    claims.push(snell);

    let name = "off-axis cusps lie on the circle of radius R/mu";
    match refraction_caustic(&setup, args.numeric.samples) {
        Ok(rc) => {
            let radii = rc.off_axis_radii();
            let expected = args.a / args.mu;
            let mut claim = Claim::new(name)
                .with("expected_radius", V::Num(F(expected)))
                .with("off_axis_cusps", V::Count(radii.len()))
                .with(
                    "radii",
                    V::Points(radii.iter().map(|r| [Some(F(*r)), None]).collect()),
                );
            claim.pass = radii.len() == 2
                && radii
                    .iter()
                    .all(|r| (r - expected).abs() < MATCH_TOL * args.a);
            claims.push(claim);
        }
        Err(e) => claims.push(Claim::failed(name, e.into())),
    }
    finish(&config, "refraction", claims, args.json.as_deref())
}

fn verify_external(args: &VerifyArgs) -> Outcome {
    let t = table(args.table, 1.0, 1.0)?;
    let o = required_source(args.source)?;
    let n_max = args.n_max.unwrap_or(2);
    let config = verify_config("external", &t, args, n_max)?;
    if t.contains(o) || t.implicit(o) == 0.0 {
        return Err(invalid(
            "the external suite needs a source outside the table",
        ));
    }
    let tol = MATCH_TOL * t.a();
    let mut claims = Vec::new();
    for n in 1..=n_max {
        let name = format!(
            "n={n}: the cusp of each family predicted on the confocal hyperbola is detected"
        );
        match analyze_external(&t, o, n, args.numeric.samples, tol, args.numeric.tol) {
            Ok(a) => {
                let present = a.predicted.iter().filter(|p| p.is_some()).count();
                let matched = a.matches.iter().filter(|m| m.is_some()).count();
                let mut claim = Claim::new(name)
                    .with("forward_cusps", V::Count(a.cusps[0].len()))
                    .with("backward_cusps", V::Count(a.cusps[1].len()))
                    .with("predicted", V::Count(present))
                    .with("predicted_matched", V::Count(matched))
                    .with(
                        "predictions",
                        V::Points(
                            a.predicted
                                .iter()
                                .flatten()
                                .map(|p| point_value(p.point))
                                .collect(),
                        ),
                    );
                claim.pass = present > 0 && matched == present;
                claims.push(claim);
            }
            Err(e) => claims.push(Claim::failed(name, e.into())),
        }
    }
    finish(&config, "external", claims, args.json.as_deref())
}

pub fn cmd_complexity(args: &ComplexityArgs) -> Outcome {
    let t = table(args.table, 1.0, 1.0)?;
    let o = required_source(args.source)?;
    numeric(&args.numeric)?;
    let ns: Vec<u32> = match (args.n.is_empty(), args.n_max) {
        (false, _) => args.n.clone(),
        (true, Some(m)) => {
            positive_n(m)?;
            (1..=m).collect()
        }
        (true, None) => return Err(invalid("missing --n or --n-max")),
    };
    for &n in &ns {
        positive_n(n)?;
    }
    let mut config = base_config("complexity", &t, &args.numeric);
    config.source = Some([F(o.x), F(o.y)]);
    config.n_values = ns.clone();

    let mut out = format!(
        "# config {}\nn,infinity_crossings,cusps,ordinary,predicted_matched\n",
        config.to_json()
    );
    for n in ns {
        let run = compute(&t, o, n, &args.numeric)?;
        let crossings: Result<usize, _> = run
            .caustics
            .iter()
            .map(|(_, c)| infinity_crossings(c))
            .sum();
        let cusps: Vec<&Cusp> = run.cusps.iter().flat_map(|(_, c)| c).collect();
        let ordinary = cusps.iter().filter(|c| c.order.is_ordinary()).count();
        let matched = run.predictions.iter().filter(|p| p.matched).count();
        let crossings = crossings.map_or_else(|_| "unresolved".to_string(), |k| k.to_string());
        out.push_str(&format!(
            "{n},{crossings},{},{ordinary},{matched}\n",
            cusps.len()
        ));
    }
    emit(args.csv.as_deref(), &out)
}

fn class_name(c: MobiusClass) -> &'static str {
    match c {
        MobiusClass::Hyperbolic => "hyperbolic",
        MobiusClass::Parabolic => "parabolic",
        MobiusClass::Elliptic => "elliptic",
    }
}

#[derive(Serialize)]
struct FixedPointJson {
    /// `[re, im]`, `null` at infinity.
    location: Option<[F; 2]>,
    multiplier: [F; 2],
    stable: Option<bool>,
}

#[derive(Serialize)]
struct IterateJson {
    n: u32,
    forward: [Option<F>; 2],
    backward: [Option<F>; 2],
    forward_at_infinity: bool,
    backward_at_infinity: bool,
}

#[derive(Serialize)]
struct AxisReport<'a> {
    config: &'a RunConfig,
    map: &'static str,
    matrix: [F; 4],
    class: &'static str,
    fixed_points: Vec<FixedPointJson>,
    rotation_angle: Option<F>,
    period: Option<u32>,
    iterates: Vec<IterateJson>,
}

pub fn cmd_axis(args: &AxisArgs) -> Outcome {
    let t = table(args.table, 1.0, 1.0)?;
    let (coord, axis) = match (args.x0, args.y0) {
        (Some(x), None) => (x, Axis::Major),
        (None, Some(y)) => (y, Axis::Minor),
        _ => return Err(invalid("give exactly one of --x0 or --y0")),
    };
    positive_n(args.n_max)?;
    let mut config = RunConfig::new("axis");
    config.a = Some(F(t.a()));
    config.b = Some(F(t.b()));
    config.x0 = args.x0.map(F);
    config.y0 = args.y0.map(F);
    config.n = Some(args.n_max);
    config.degrees = args.degrees;

    let (map, name): (MobiusMap, _) = match axis {
        Axis::Major => (mobius_f(&t), "f"),
        Axis::Minor => (mobius_g(&t), "g"),
    };
    let fp = fixed_point_analysis(&map);
    let mut iterates = Vec::new();
    for n in 1..=args.n_max {
        let (fwd, back) = iterate_axis_cusps(&t, coord, n, axis)?;
        iterates.push(IterateJson {
            n,
            forward: point_value(fwd),
            backward: point_value(back),
            forward_at_infinity: fwd.is_at_infinity(),
            backward_at_infinity: back.is_at_infinity(),
        });
    }
    let report = AxisReport {
        config: &config,
        map: name,
        matrix: [F(map.m11), F(map.m12), F(map.m21), F(map.m22)],
        class: class_name(fp.class),
        fixed_points: fp
            .fixed_points
            .iter()
            .map(|p| FixedPointJson {
                location: p.location.map(|z| [F(z.re), F(z.im)]),
                multiplier: [F(p.multiplier.re), F(p.multiplier.im)],
                stable: p.stable(),
            })
            .collect(),
        rotation_angle: fp.rotation_angle.map(|r| F(output::angle(r, args.degrees))),
        period: fp.period,
        iterates,
    };
    emit(args.json.as_deref(), &output::to_json(&report))
}
