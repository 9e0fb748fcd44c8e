//! The verification suites. Each claim produces one [`ClaimReport`].

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use ifscheck_core::dendrite::{
    build_arc, build_dendrite, dendrite_ifs, in_sector, leg_count, straighten_dendrite, DendriteMap,
};
use ifscheck_core::geometry::{
    directed_hausdorff, hausdorff_distance, hausdorff_points, HausdorffMethod, Point2, PointCloud,
};
use ifscheck_core::ifs::{
    certify_composition_diameter, check_weak_contraction, estimate_lipschitz, hutchinson,
    max_word_diameter, IfsSystem, MapSpec, Mode, PlaneMap,
};
use ifscheck_core::registry::standard_table;
use ifscheck_core::scattered::{
    cb_derivative, classify_topological_fractal, embed_in_unit_interval, height, CnfOrdinal,
    OrdinalSpace,
};
use ifscheck_core::shark_teeth::{
    build_free_arc_system, shark_teeth_instance, FreeArcSpace, SideMap, TentMap,
};
use ifscheck_core::snake::{self, build_snake, radial_profile, sanders_report, SnakeMap};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A negative result that sampling cannot establish; the report carries
    /// supporting numbers and never counts as a failure.
    EvidenceOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub schema_version: u32,
    pub claim_id: String,
    pub status: Status,
    pub worst_witness: Value,
    pub tolerance: f64,
    pub budget: BTreeMap<String, u64>,
    pub runtime_ms: u64,
}

struct Outcome {
    status: Status,
    witness: Value,
    tolerance: f64,
    budget: BTreeMap<String, u64>,
}

impl Outcome {
    fn verdict(ok: bool, witness: Value, tolerance: f64) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            witness,
            tolerance,
            budget: BTreeMap::new(),
        }
    }

    fn evidence(witness: Value) -> Self {
        Outcome {
            status: Status::EvidenceOnly,
            witness,
            tolerance: 0.0,
            budget: BTreeMap::new(),
        }
    }

    fn budget(mut self, key: &str, n: impl TryInto<u64>) -> Self {
        self.budget
            .insert(key.into(), n.try_into().unwrap_or(u64::MAX));
        self
    }
}

type ClaimResult = ifscheck_core::Result<Outcome>;

fn run(id: &str, f: impl FnOnce() -> ClaimResult) -> ClaimReport {
    let t = Instant::now();
    let outcome =
        f().unwrap_or_else(|e| Outcome::verdict(false, json!({ "error": e.to_string() }), 0.0));
    ClaimReport {
        schema_version: SCHEMA_VERSION,
        claim_id: id.into(),
        status: outcome.status,
        worst_witness: outcome.witness,
        tolerance: outcome.tolerance,
        budget: outcome.budget,
        runtime_ms: t.elapsed().as_millis() as u64,
    }
}

fn pt(p: Point2) -> Value {
    json!([p.x, p.y])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Snake,
    Sharkteeth,
    Dendrite,
    Scattered,
    All,
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Vec<ClaimReport> {
    match suite {
        Suite::Snake => snake_suite(cfg),
        Suite::Sharkteeth => shark_teeth_suite(cfg),
        Suite::Dendrite => dendrite_suite(cfg),
        Suite::Scattered => scattered_suite(cfg),
        Suite::All => [
            Suite::Snake,
            Suite::Sharkteeth,
            Suite::Dendrite,
            Suite::Scattered,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, cfg))
        .collect(),
    }
}

const PROFILE_GRID: usize = 10_000;

fn snake_suite(cfg: &RunConfig) -> Vec<ClaimReport> {
    let sc = &cfg.snake;
    let seed = cfg.seed();
    let mut out = Vec::new();

    out.push(run("snake.f-below-identity", || {
        let mut worst = (f64::INFINITY, 0.0, 0.0);
        for k in 1..=PROFILE_GRID {
            let r = k as f64 / PROFILE_GRID as f64;
            let v = radial_profile(r)?;
            if r - v < worst.0 {
                worst = (r - v, r, v);
            }
        }
        Ok(Outcome::verdict(
            worst.0 > 0.0,
            json!({ "r": worst.1, "f_r": worst.2, "gap": worst.0 }),
            0.0,
        )
        .budget("grid_points", PROFILE_GRID))
    }));

    out.push(run("snake.profile-monotone", || {
        let mut prev = radial_profile(0.0)?;
        let mut worst = (f64::INFINITY, 0.0);
        for k in 1..=PROFILE_GRID {
            let r = k as f64 / PROFILE_GRID as f64;
            let v = radial_profile(r)?;
            if v - prev < worst.0 {
                worst = (v - prev, r);
            }
            prev = v;
        }
        Ok(Outcome::verdict(
            worst.0 > 0.0,
            json!({ "r": worst.1, "increment": worst.0 }),
            0.0,
        )
        .budget("grid_points", PROFILE_GRID))
    }));

    out.push(run("snake.weak-contraction", || {
        let mut worst = json!(null);
        let (mut sup, mut violations, mut runs) = (f64::MIN, 0usize, 0usize);
        for &n in &sc.contraction_depths {
            let space = build_snake(n, sc.angular_step, sc.radial_step)?;
            for s in seed..seed + 3 {
                let rep = check_weak_contraction(&SnakeMap, &space.cloud, sc.pairs, s)?;
                runs += 1;
                violations += rep.violation_count;
                if rep.sup_ratio > sup {
                    sup = rep.sup_ratio;
                    let pair = rep.violations.first().copied().unwrap_or(rep.argmax_pair);
                    worst = json!({ "depth": n, "seed": s, "sup_ratio": sup, "pair": [pt(pair.0), pt(pair.1)] });
                }
            }
        }
        worst["violations"] = json!(violations);
        Ok(Outcome::verdict(violations == 0, worst, 0.0)
            .budget("pairs_per_run", sc.pairs)
            .budget("runs", runs)
            .budget("seed", seed))
    }));

    out.push(run("snake.shift-law", || {
        let top = sc.depth.clamp(3, 22);
        let space = build_snake(top, sc.angular_step, sc.radial_step)?;
        let tol = cfg.tolerance.unwrap_or(2.0 * space.cloud.resolution());
        let mut worst = (0.0f64, 0usize);
        for n in 1..=top - 2 {
            let src = space.component(n)?;
            let dst = space.component(n + 2)?;
            let img: Vec<Point2> = src
                .points()
                .iter()
                .map(|&p| SnakeMap.apply(p))
                .collect::<Result<_, _>>()?;
            let d = hausdorff_points(&img, dst.points(), HausdorffMethod::Grid)?;
            if d > worst.0 {
                worst = (d, n);
            }
        }
        Ok(Outcome::verdict(
            worst.0 <= tol,
            json!({ "n": worst.1, "distance": worst.0 }),
            tol,
        )
        .budget("components", top - 2))
    }));

    out.push(run("snake.invariance", || {
        let n = sc.depth;
        let space = build_snake(n, sc.angular_step, sc.radial_step)?;
        let m = match sc.cover_maps {
            Some(m) => m,
            None => snake::find_cover_count(&space, sc.pairs / 5, seed)?,
        };
        let mut specs = vec![MapSpec::named("snake_f", &[])];
        specs.extend(snake::cover_specs(m));
        let sys = IfsSystem::new(specs, Mode::Weak, &standard_table())?;
        let img = hutchinson(&sys, &space.cloud)?;
        let d = hausdorff_distance(&space.cloud, &img, HausdorffMethod::Grid)?;
        let tol = 2.0 / n as f64 + cfg.tolerance.unwrap_or(2.0 * space.cloud.resolution());
        Ok(Outcome::verdict(
            d <= tol,
            json!({ "depth": n, "cover_maps": m, "distance": d }),
            tol,
        )
        .budget("points", space.cloud.len())
        .budget("maps", m + 1))
    }));

    out.push(run("snake.sanders-lengths", || {
        let rep = sanders_report(sc.sanders_depth, 1e-3, None)?;
        let tol = cfg.tolerance.unwrap_or(1e-3);
        let ok = rep.max_arc_error <= tol && rep.max_segment_error <= tol.min(1e-6);
        Ok(Outcome::verdict(
            ok,
            json!({ "max_arc_error": rep.max_arc_error, "max_segment_error": rep.max_segment_error }),
            tol,
        )
        .budget("components", sc.sanders_depth))
    }));

    out.push(run("snake.not-ifs-attractor", || {
        let bound = 24.0;
        let rep = sanders_report(sc.sanders_depth, 1e-3, Some(bound))?;
        Ok(Outcome::evidence(json!({
            "cumulative_length": rep.finite_part_lengths.last(),
            "length_bound": bound,
            "divergence_witness": rep.divergence_witness,
            "tail_lower_bound_from_1": rep.tail_lower_bounds.first(),
        }))
        .budget("components", sc.sanders_depth))
    }));
    out
}

fn unit_grid() -> ifscheck_core::Result<(Vec<Point2>, PointCloud)> {
    let grid: Vec<Point2> = (0..=PROFILE_GRID)
        .map(|k| Point2::new(k as f64 / PROFILE_GRID as f64, 0.0))
        .collect();
    let cloud = PointCloud::new(grid.clone(), 1.0 / PROFILE_GRID as f64)?;
    Ok((grid, cloud))
}

fn shark_teeth_suite(cfg: &RunConfig) -> Vec<ClaimReport> {
    let st = &cfg.sharkteeth;
    let seed = cfg.seed();
    let mut out = Vec::new();

    out.push(run("sharkteeth.tent-lipschitz", || {
        let (_, cloud) = unit_grid()?;
        let tol = cfg.tolerance.unwrap_or(1e-6);
        let mut worst = (0.0f64, 0usize, 0.0);
        for i in 0..3 {
            let rep = estimate_lipschitz(&TentMap { i }, &cloud, st.pairs, seed + i as u64)?;
            let err = (rep.sup_ratio - 2.0 / 3.0).abs();
            if err >= worst.0 {
                worst = (err, i, rep.sup_ratio);
            }
        }
        Ok(Outcome::verdict(
            worst.0 <= tol,
            json!({ "map": worst.1, "sup_ratio": worst.2, "error": worst.0 }),
            tol,
        )
        .budget("pairs_per_map", st.pairs)
        .budget("seed", seed))
    }));

    out.push(run("sharkteeth.tent-cover", || {
        let (grid, _) = unit_grid()?;
        let tol = cfg.tolerance.unwrap_or(1e-3);
        let mut images = Vec::with_capacity(3 * grid.len());
        for i in 0..3 {
            for &p in &grid {
                images.push(TentMap { i }.apply(p)?);
            }
        }
        let d = directed_hausdorff(&grid, &images, HausdorffMethod::Grid)?;
        Ok(
            Outcome::verdict(d <= tol, json!({ "uncovered_distance": d }), tol)
                .budget("grid_points", grid.len()),
        )
    }));

    let system = shark_teeth_instance(st.rows, st.samples_per_row)
        .and_then(|d| FreeArcSpace::new(&d, st.resolution))
        .and_then(build_free_arc_system);
    let system = match system {
        Ok(s) => s,
        Err(e) => {
            out.push(run("sharkteeth.free-arc", || Err(e)));
            return out;
        }
    };
    let x = &system.space.cloud;
    let res = x.resolution();

    out.push(run("sharkteeth.free-arc", || {
        Ok(Outcome::verdict(
            true,
            json!({ "points": x.len(), "resolution": res }),
            res,
        ))
    }));

    let m = st.word_length;
    out.push(run("prop1.diam-2-3-m", || {
        let slack = cfg.tolerance.unwrap_or(2.0 * res);
        let bound = (2.0f64 / 3.0).powi(m as i32) + slack;
        let c = certify_composition_diameter(&system.system, x, m, bound)?;
        Ok(Outcome::verdict(
            c.passes(),
            json!({ "word_length": m, "max_diameter": c.max_diameter, "argmax_word": c.argmax_word }),
            bound,
        )
        .budget("words", c.words_total)
        .budget("images_computed", c.images_computed))
    }));

    out.push(run("prop1.inner-side-maps-collapse", || {
        let tol = cfg.tolerance.unwrap_or(2.0 * res);
        let is_side = |k: usize| system.is_side_map(k);
        let best = max_word_diameter(&system.system, x, m, &|w: &[usize]| w.iter().skip(1).any(|&k| is_side(k)))?;
        Ok(Outcome::verdict(
            best.max_diameter <= tol,
            json!({ "word_length": m, "max_diameter": best.max_diameter, "argmax_word": best.argmax_word }),
            tol,
        )
        .budget("images_computed", best.images_computed))
    }));

    out.push(run("sharkteeth.not-weak-ifs-attractor", || {
        let mut ratios = Vec::new();
        for j in system.space.side_indices() {
            let g = SideMap { space: system.space.clone(), j };
            let rep = estimate_lipschitz(&g, x, st.pairs, seed + 10 + j as u64)?;
            ratios.push(json!({ "map": g.name(), "sup_ratio": rep.sup_ratio, "violations": rep.violation_count }));
        }
        Ok(Outcome::evidence(json!({ "side_map_ratios": ratios })).budget("pairs_per_map", st.pairs))
    }));
    out
}

fn dendrite_suite(cfg: &RunConfig) -> Vec<ClaimReport> {
    let dc = &cfg.dendrite;
    let seed = cfg.seed();
    let mut out = Vec::new();

    out.push(run("dendrite.arc-lengths", || {
        let tol = cfg.tolerance.unwrap_or(1e-6);
        let mut worst = (0.0f64, 0u32);
        for n in 1..=dc.depth {
            let err = (build_arc(n)?.length() - 2f64.powi(n as i32)).abs();
            if err >= worst.0 {
                worst = (err, n);
            }
        }
        Ok(Outcome::verdict(
            worst.0 <= tol,
            json!({ "n": worst.1, "length_error": worst.0 }),
            tol,
        )
        .budget("arcs", dc.depth))
    }));

    out.push(run("dendrite.sector-containment", || {
        let samples = dc.samples_per_arc.unwrap_or(2 * leg_count(dc.depth) + 1);
        let d = build_dendrite(dc.depth, samples)?;
        let mut bad = Vec::new();
        for (i, s) in d.samples.iter().enumerate() {
            let n = i as u32 + 1;
            bad.extend(
                s.iter()
                    .filter(|&&p| !in_sector(n, p))
                    .map(|&p| json!({ "n": n, "point": pt(p) })),
            );
        }
        let count = bad.len();
        let first = bad.into_iter().next().unwrap_or(Value::Null);
        Ok(
            Outcome::verdict(count == 0, json!({ "outside": count, "first": first }), 0.0)
                .budget("samples_per_arc", samples),
        )
    }));

    out.push(run("dendrite.simple-arcs", || {
        let top = dc.depth.min(6);
        let mut hits = 0;
        let mut first = Value::Null;
        for n in 1..=top {
            let x = build_arc(n)?.self_intersections();
            if first.is_null() && !x.is_empty() {
                first = json!({ "n": n, "segments": x[0] });
            }
            hits += x.len();
        }
        Ok(Outcome::verdict(
            hits == 0,
            json!({ "intersections": hits, "first": first }),
            0.0,
        )
        .budget("arcs", top))
    }));

    let straight = straighten_dendrite(dc.straight_depth, dc.straight_samples);

    out.push(run("dendrite.straight-lipschitz", || {
        let d = straight.as_ref().map_err(clone_err)?;
        let mut ok = true;
        let mut ratios = Vec::new();
        for (k, (map, bound)) in [
            (DendriteMap::H, 0.51),
            (DendriteMap::G1, 0.501),
            (DendriteMap::G2, 0.501),
        ]
        .into_iter()
        .enumerate()
        {
            let rep = estimate_lipschitz(&map, &d.cloud, dc.pairs, seed + k as u64)?;
            ok &= rep.sup_ratio <= bound;
            ratios.push(json!({ "map": map.name(), "sup_ratio": rep.sup_ratio, "bound": bound }));
        }
        Ok(Outcome::verdict(ok, json!(ratios), 0.01)
            .budget("pairs_per_map", dc.pairs)
            .budget("seed", seed))
    }));

    out.push(run("dendrite.straight-invariance", || {
        let d = straight.as_ref().map_err(clone_err)?;
        let img = hutchinson(&dendrite_ifs()?, &d.cloud)?;
        let dist = hausdorff_distance(&d.cloud, &img, HausdorffMethod::Grid)?;
        let tol = 2f64.powi(-(dc.straight_depth as i32))
            + cfg.tolerance.unwrap_or(2.0 * d.cloud.resolution());
        Ok(Outcome::verdict(
            dist <= tol,
            json!({ "depth": dc.straight_depth, "distance": dist }),
            tol,
        )
        .budget("points", d.cloud.len()))
    }));

    out.push(run("dendrite.unbounded-arc-length", || {
        let lengths: Vec<f64> = (1..=dc.depth)
            .map(|n| build_arc(n).map(|a| a.length()))
            .collect::<Result<_, _>>()?;
        Ok(Outcome::evidence(json!({ "arc_lengths": lengths })).budget("arcs", dc.depth))
    }));
    out
}

fn clone_err(e: &ifscheck_core::Error) -> ifscheck_core::Error {
    ifscheck_core::Error::InvalidArgument(e.to_string())
}

fn scattered_suite(cfg: &RunConfig) -> Vec<ClaimReport> {
    let sc = &cfg.scattered;
    let mut out = Vec::new();

    out.push(run("scattered.successor-heights", || {
        let mut worst = Value::Null;
        for n in 0..=sc.max_exponent {
            let beta = CnfOrdinal::omega_pow(n);
            let mut x = OrdinalSpace::new(beta.clone());
            let mut steps = 0u32;
            while !x.is_discrete() {
                x = cb_derivative(&x);
                steps += 1;
            }
            let h = height(&beta);
            if steps != n || h != CnfOrdinal::natural(n as u64) {
                worst = json!({ "beta": beta, "height": h, "derivatives": steps });
                break;
            }
        }
        Ok(Outcome::verdict(worst.is_null(), worst, 0.0).budget("max_exponent", sc.max_exponent))
    }));

    out.push(run("scattered.limit-height", || {
        let h = height(&CnfOrdinal::OmegaOmega);
        Ok(Outcome::verdict(
            h.is_limit(),
            json!({ "beta": CnfOrdinal::OmegaOmega, "height": h }),
            0.0,
        ))
    }));

    out.push(run("scattered.k-not-topological-fractal", || {
        let class = classify_topological_fractal(&CnfOrdinal::OmegaOmega);
        Ok(Outcome::evidence(json!({
            "beta": CnfOrdinal::OmegaOmega,
            "height": height(&CnfOrdinal::OmegaOmega),
            "classification": class,
        })))
    }));

    out.push(run("scattered.embedding-order", || {
        let cloud = embed_in_unit_interval(&CnfOrdinal::OmegaOmega, sc.embed_depth)?;
        let labels = cloud.labels().unwrap_or(&[]);
        let mut rows: Vec<(f64, CnfOrdinal)> = Vec::with_capacity(cloud.len());
        for (p, l) in cloud.points().iter().zip(labels) {
            rows.push((p.x, l.parse()?));
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let bad = rows.windows(2).find(|w| !(w[0].1 > w[1].1));
        let witness = match bad {
            Some(w) => json!({ "left": [w[0].0, w[0].1], "right": [w[1].0, w[1].1] }),
            None => json!({ "points": rows.len() }),
        };
        Ok(Outcome::verdict(bad.is_none(), witness, 0.0).budget("depth", sc.embed_depth))
    }));
    out
}
