//! Subcommand implementations. Every command parses the input file, drives
//! the engine crate, and serializes a deterministic [`Report`].

use crate::input::{parse_input, ConfigInput, QuiverInput, WorkbenchInput};
use crate::report::Report;
use secfan::ainfty::{
    auto_transfer, transfer_mn, validate_transfer, AInftyAlgebra, CohClass, TransferData,
};
use secfan::config::PointConfiguration;
use secfan::mori::{
    candidate_runs, find_nef_fano_start, rank_k0, run_spine_tree, straight_line_run,
    validate_mori_tree, MoriError, MoriRun,
};
use secfan::paths::{
    match_path_to_run, monotone_paths, path_stable_complexes, radar_screen, MonotonePath,
};
use secfan::quiver::{validate_dg, DGQuiverAlgebra, Path, QuiverError};
use secfan::secondary::SecondaryFan;
use secfan::sod::{exceptional_collection, k0_check, run_sod};
use secfan::{circuit, Int, Rat};
use std::collections::BTreeSet;

/// Maximum rewriting steps when building quiver algebra bases.
const MAX_QUIVER_STEPS: usize = 100_000;

#[derive(Clone, Debug)]
pub enum CmdError {
    /// Bad input or flags (exit code 2).
    Validation(String),
    /// The engine could not complete the computation (exit code 3).
    Engine(String),
    /// A verification check failed (exit code 4).
    Mismatch(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Validation(m) => write!(f, "validation error: {m}"),
            CmdError::Engine(m) => write!(f, "engine error: {m}"),
            CmdError::Mismatch(m) => write!(f, "verification mismatch: {m}"),
        }
    }
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Validation(_) => 2,
            CmdError::Engine(_) => 3,
            CmdError::Mismatch(_) => 4,
        }
    }
}

/// Flag values shared by the subcommands.
#[derive(Clone, Debug, Default)]
pub struct Opts {
    /// Per-wall twist choices (a single value broadcasts).
    pub d: Vec<i64>,
    /// Highest arity of transferred products.
    pub nmax: usize,
    /// Apply the documented deterministic perturbation on non-generic runs.
    pub perturb: bool,
    pub start: Option<usize>,
    pub target: Option<usize>,
    pub path: Option<usize>,
}

fn validation(m: impl Into<String>) -> CmdError {
    CmdError::Validation(m.into())
}

fn engine(m: impl std::fmt::Display) -> CmdError {
    CmdError::Engine(m.to_string())
}

fn need_config(input: &WorkbenchInput) -> Result<&ConfigInput, CmdError> {
    match input {
        WorkbenchInput::Configuration(c) => Ok(c),
        WorkbenchInput::Quiver(_) => {
            Err(validation("this command needs a configuration or fan input"))
        }
    }
}

fn need_quiver(input: &WorkbenchInput) -> Result<&QuiverInput, CmdError> {
    match input {
        WorkbenchInput::Quiver(q) => Ok(q),
        WorkbenchInput::Configuration(_) => {
            Err(validation("this command needs a quiver-fixture input"))
        }
    }
}

fn configuration(c: &ConfigInput) -> Result<PointConfiguration, CmdError> {
    PointConfiguration::new(c.coordinates(), Some(c.origin()))
        .map_err(|e| validation(e.to_string()))
}

fn fan_of(c: &ConfigInput) -> Result<SecondaryFan, CmdError> {
    let config = configuration(c)?;
    SecondaryFan::build(&config).map_err(engine)
}

fn list<T: std::fmt::Display>(v: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = v.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

fn chamber_required(fan: &SecondaryFan, id: Option<usize>, flag: &str) -> Result<usize, CmdError> {
    let id = id.ok_or_else(|| validation(format!("--{flag} <chamber id> is required")))?;
    if id >= fan.chambers.len() {
        return Err(validation(format!("chamber {id} out of range (0..{})", fan.chambers.len())));
    }
    Ok(id)
}

/// Deterministic rational nudges used when `--perturb` is requested.
fn perturbations(rank: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for denom in [997i64, 9973] {
        let mut v = Vec::with_capacity(rank);
        let mut d = Int::from(denom);
        for _ in 0..rank {
            v.push(Rat::new(Int::from(1), d.clone()));
            d *= Int::from(denom);
        }
        out.push(v);
    }
    out
}

fn aimed_run(
    fan: &SecondaryFan,
    start: usize,
    target: usize,
    perturb: bool,
) -> Result<MoriRun, CmdError> {
    let a = fan.chambers[start].interior.clone();
    let aim = fan.chambers[target].interior.clone();
    let dir: Vec<Rat> = aim.iter().zip(&a).map(|(x, y)| x - y).collect();
    match straight_line_run(fan, &a, &dir) {
        Ok(run) => Ok(run),
        Err(MoriError::NonGenericPath) if perturb => {
            for nudge in perturbations(fan.rank) {
                let dir2: Vec<Rat> =
                    dir.iter().zip(&nudge).map(|(x, e)| x + e).collect();
                if let Ok(run) = straight_line_run(fan, &a, &dir2) {
                    return Ok(run);
                }
            }
            Err(engine("segment stays non-generic under all documented perturbations"))
        }
        Err(MoriError::NonGenericPath) => Err(engine(
            "segment meets a cone of codimension at least 2 (rerun with --perturb)",
        )),
        Err(e) => Err(engine(e)),
    }
}

fn report_run(r: &mut Report, prefix: &str, run: &MoriRun) {
    r.kv(&format!("{prefix}.chambers"), list(&run.chambers));
    r.kv(&format!("{prefix}.valid"), run.valid);
    match run.exit {
        Some(c) => r.kv(&format!("{prefix}.exit"), c),
        None => r.kv(&format!("{prefix}.exit"), "none"),
    }
    for (k, w) in run.walls.iter().enumerate() {
        let p = format!("{prefix}.wall.{k}");
        r.kv(&format!("{p}.id"), w.data.wall_id);
        r.kv(&format!("{p}.t"), &w.t);
        r.kv(&format!("{p}.from"), w.data.from);
        r.kv(&format!("{p}.to"), w.data.to);
        r.kv(&format!("{p}.lambda"), list(&w.data.lambda));
        r.kv(&format!("{p}.weights"), list(&w.data.weights));
        r.kv(&format!("{p}.mu"), &w.data.mu);
        r.kv(&format!("{p}.rank"), &w.data.w_rank_k0);
        r.kv(&format!("{p}.zero-points"), list(&w.data.zero_points));
    }
}

fn d_choices(opts: &Opts, nwalls: usize) -> Result<Vec<i64>, CmdError> {
    match opts.d.len() {
        0 => Ok(vec![0; nwalls]),
        1 => Ok(vec![opts.d[0]; nwalls]),
        n if n == nwalls => Ok(opts.d.clone()),
        n => Err(validation(format!("--d needs 1 or {nwalls} values, got {n}"))),
    }
}

/// The unique chamber maximizing the origin coordinate of the volume
/// vector (the run-side start of the worked example).
fn chi_max_chamber(fan: &SecondaryFan) -> Result<usize, CmdError> {
    let max = fan
        .chambers
        .iter()
        .map(|c| &c.phi[fan.origin])
        .max()
        .ok_or_else(|| engine("empty fan"))?
        .clone();
    let hits: Vec<usize> = fan
        .chambers
        .iter()
        .filter(|c| c.phi[fan.origin] == max)
        .map(|c| c.id)
        .collect();
    if hits.len() != 1 {
        return Err(engine(format!("{} chambers maximize chi", hits.len())));
    }
    Ok(hits[0])
}

// ---------------------------------------------------------------------------
// configuration-side commands
// ---------------------------------------------------------------------------

fn cmd_circuits(r: &mut Report, c: &ConfigInput) -> Result<(), CmdError> {
    let config = configuration(c)?;
    let circs = circuit::circuits(&config).map_err(engine)?;
    r.kv("circuits", circs.len());
    for (k, circ) in circs.iter().enumerate() {
        r.kv(&format!("circuit.{k}.support"), list(&circ.support));
        r.kv(&format!("circuit.{k}.relation"), list(&circ.relation));
        let (p, m, z) = circ.signature(&config);
        r.kv(&format!("circuit.{k}.signature"), format!("({p} {m} {z})"));
    }
    Ok(())
}

fn cmd_triangulations(r: &mut Report, c: &ConfigInput) -> Result<(), CmdError> {
    let config = configuration(c)?;
    let ts = secfan::triang::regular_triangulations(&config).map_err(engine)?;
    r.kv("triangulations", ts.len());
    for (k, t) in ts.iter().enumerate() {
        let cells: Vec<String> = t
            .simplices
            .iter()
            .map(|s| {
                s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            })
            .collect();
        r.kv(&format!("triangulation.{k}.simplices"), format!("[{}]", cells.join(" ")));
    }
    Ok(())
}

fn cmd_secondary(r: &mut Report, c: &ConfigInput) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    r.kv("rank", fan.rank);
    r.kv("chambers", fan.chambers.len());
    r.kv("fan-type", fan.chambers.iter().filter(|ch| ch.fan_type.is_some()).count());
    r.kv("walls", fan.walls.len());
    for ch in &fan.chambers {
        let p = format!("chamber.{}", ch.id);
        r.kv(&format!("{p}.chi"), &ch.phi[fan.origin]);
        r.kv(&format!("{p}.phi"), list(&ch.phi));
        match &ch.fan_type {
            Some(f) => {
                r.kv(&format!("{p}.fan-type"), true);
                r.kv(&format!("{p}.cones"), f.cones.len());
                r.kv(&format!("{p}.multiplicities"), list(&f.multiplicities));
            }
            None => r.kv(&format!("{p}.fan-type"), false),
        }
    }
    Ok(())
}

fn cmd_walls(r: &mut Report, c: &ConfigInput) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    r.kv("walls", fan.walls.len());
    for w in &fan.walls {
        let p = format!("wall.{}", w.id);
        r.kv(&format!("{p}.chambers"), format!("[{} {}]", w.chambers.0, w.chambers.1));
        r.kv(&format!("{p}.support"), list(&w.circuit.support));
        r.kv(&format!("{p}.normal"), list(&w.normal));
        // oriented data, leaving the lower-numbered chamber; walls outside
        // the region carry no fixed-locus data
        match secfan::mori::wall_data(&fan, w.id, w.chambers.0) {
            Ok(data) => {
                r.kv(&format!("{p}.weights"), list(&data.weights));
                r.kv(&format!("{p}.mu"), &data.mu);
                r.kv(&format!("{p}.rank"), &data.w_rank_k0);
            }
            Err(MoriError::NotFanType) => r.kv(&format!("{p}.rank"), "none"),
            Err(e) => return Err(engine(e)),
        }
    }
    Ok(())
}

fn cmd_run(r: &mut Report, c: &ConfigInput, opts: &Opts) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    let start = chamber_required(&fan, opts.start, "start")?;
    let target = chamber_required(&fan, opts.target, "target")?;
    let run = aimed_run(&fan, start, target, opts.perturb)?;
    report_run(r, "run", &run);
    Ok(())
}

fn cmd_nef_fano(r: &mut Report, c: &ConfigInput, opts: &Opts) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    let target = chamber_required(&fan, opts.target, "target")?;
    if fan.chambers[target].fan_type.is_none() {
        return Err(validation(format!("chamber {target} is not fan-type")));
    }
    let (start, run) = find_nef_fano_start(&fan, target);
    r.kv("start", start);
    r.kv("start.rank-k0", rank_k0(&fan, start).map_err(engine)?);
    report_run(r, "run", &run);
    Ok(())
}

fn cmd_sod(r: &mut Report, c: &ConfigInput, opts: &Opts) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    let start = chamber_required(&fan, opts.start, "start")?;
    if fan.chambers[start].fan_type.is_none() {
        return Err(validation(format!("chamber {start} is not fan-type")));
    }
    let names = c.ray_names();
    let runs = candidate_runs(&fan, start);
    r.kv("start", start);
    r.kv("start.rank-k0", rank_k0(&fan, start).map_err(engine)?);
    r.kv("runs", runs.len());
    for (k, run) in runs.iter().enumerate() {
        let p = format!("run.{k}");
        r.kv(&format!("{p}.chambers"), list(&run.chambers));
        r.kv(&format!("{p}.walls"), list(run.walls.iter().map(|w| w.data.wall_id)));
        r.kv(&format!("{p}.mu"), list(run.walls.iter().map(|w| w.data.mu.clone())));
        let ds = d_choices(opts, run.walls.len())?;
        let sod = run_sod(&fan, run, &ds, Some(&names)).map_err(engine)?;
        r.kv(&format!("{p}.components"), sod.components.len());
        let labels: Vec<&str> = sod.components.iter().map(|x| x.label.as_str()).collect();
        r.kv(&format!("{p}.labels"), format!("<{}>", labels.join(", ")));
        r.kv(&format!("{p}.k0-conserved"), k0_check(&fan, run, &sod));
    }
    Ok(())
}

fn cmd_collection(r: &mut Report, c: &ConfigInput, opts: &Opts) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    let start = chamber_required(&fan, opts.start, "start")?;
    if fan.chambers[start].fan_type.is_none() {
        return Err(validation(format!("chamber {start} is not fan-type")));
    }
    let names = c.ray_names();
    let d = opts.d.first().copied().unwrap_or(0);
    let runs = candidate_runs(&fan, start);
    r.kv("start", start);
    r.kv("runs", runs.len());
    for (k, run) in runs.iter().enumerate() {
        let p = format!("run.{k}");
        r.kv(&format!("{p}.walls"), list(run.walls.iter().map(|w| w.data.wall_id)));
        let tree = run_spine_tree(&fan, run);
        let (ok, witness) = validate_mori_tree(&tree, &fan);
        r.kv(&format!("{p}.tree-valid"), ok);
        if let Some(w) = witness {
            r.kv(&format!("{p}.tree-witness"), w);
        }
        let coll = exceptional_collection(&tree, &fan, d, Some(&names)).map_err(engine)?;
        r.kv(&format!("{p}.collection"), coll.len());
        let labels: Vec<&str> = coll.iter().map(|x| x.label.as_str()).collect();
        r.kv(&format!("{p}.labels"), format!("<{}>", labels.join(", ")));
    }
    Ok(())
}

fn cmd_paths(r: &mut Report, c: &ConfigInput) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    let paths = monotone_paths(&fan).map_err(engine)?;
    r.kv("paths", paths.len());
    for (k, p) in paths.iter().enumerate() {
        let pre = format!("path.{k}");
        r.kv(&format!("{pre}.vertices"), list(&p.vertices));
        r.kv(&format!("{pre}.edges"), list(&p.edges));
        r.kv(&format!("{pre}.multiplicities"), list(&p.multiplicities));
    }
    for ch in &fan.chambers {
        if ch.fan_type.is_none() {
            continue;
        }
        let n = paths.iter().filter(|p| p.vertices.contains(&ch.id)).count();
        r.kv(&format!("through.{}", ch.id), n);
    }
    Ok(())
}

fn path_required<'a>(
    paths: &'a [MonotonePath],
    opts: &Opts,
) -> Result<(usize, &'a MonotonePath), CmdError> {
    let k = opts.path.ok_or_else(|| validation("--path <index> is required"))?;
    paths
        .get(k)
        .map(|p| (k, p))
        .ok_or_else(|| validation(format!("path {k} out of range (0..{})", paths.len())))
}

fn cmd_radar(r: &mut Report, c: &ConfigInput, opts: &Opts) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    let paths = monotone_paths(&fan).map_err(engine)?;
    let (k, path) = path_required(&paths, opts)?;
    r.kv("path", k);
    r.kv("path.vertices", list(&path.vertices));
    let screen = radar_screen(&fan, path).map_err(engine)?;
    r.kv("annuli", screen.annuli.len());
    for (j, a) in screen.annuli.iter().enumerate() {
        let p = format!("annulus.{j}");
        r.kv(&format!("{p}.edge"), a.edge);
        r.kv(&format!("{p}.multiplicity"), &a.multiplicity);
        r.kv(&format!("{p}.regions"), &a.regions);
        r.kv(&format!("{p}.critical-values-per-region"), &a.critical_values_per_region);
        r.kv(&format!("{p}.degenerate"), a.degenerate);
    }
    Ok(())
}

fn cmd_match(r: &mut Report, c: &ConfigInput, opts: &Opts) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    let paths = monotone_paths(&fan).map_err(engine)?;
    let (k, path) = path_required(&paths, opts)?;
    r.kv("path", k);
    r.kv("path.vertices", list(&path.vertices));
    r.kv("path.multiplicities", list(&path.multiplicities));
    let top = chi_max_chamber(&fan)?;
    let runs = candidate_runs(&fan, top);
    r.kv("runs", runs.len());
    let mut matched: Option<usize> = None;
    for (j, run) in runs.iter().enumerate() {
        let rep = match_path_to_run(&fan, path, run);
        let p = format!("run.{j}");
        r.kv(&format!("{p}.walls"), list(run.walls.iter().map(|w| w.data.wall_id)));
        r.kv(&format!("{p}.matches"), rep.matches);
        if rep.matches && matched.is_none() {
            matched = Some(j);
            for it in &rep.items {
                let q = format!("{p}.edge.{}", it.index);
                r.kv(&format!("{q}.a"), &it.a);
                r.kv(&format!("{q}.content"), &it.g);
                r.kv(&format!("{q}.mu-rank"), &it.mu_rank);
                r.kv(&format!("{q}.circuit-ok"), it.circuit_ok);
            }
        }
    }
    match matched {
        Some(j) => r.kv("matched-run", j),
        None => r.kv("matched-run", "none"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// quiver-side commands
// ---------------------------------------------------------------------------

fn quiver_err(e: QuiverError) -> CmdError {
    validation(e.to_string())
}

fn build_algebra(q: &QuiverInput) -> Result<DGQuiverAlgebra, CmdError> {
    let quiver = q.quiver().map_err(quiver_err)?;
    // reborrow the owned differential into the engine's slice shape
    let terms: Vec<Vec<(i64, Vec<&str>)>> = q
        .differential
        .iter()
        .map(|(_, t)| {
            t.iter()
                .map(|(c, ls)| (*c, ls.iter().map(String::as_str).collect()))
                .collect()
        })
        .collect();
    let slices: Vec<Vec<(i64, &[&str])>> = terms
        .iter()
        .map(|t| t.iter().map(|(c, ls)| (*c, ls.as_slice())).collect())
        .collect();
    let diff: Vec<(&str, &[(i64, &[&str])])> = q
        .differential
        .iter()
        .zip(&slices)
        .map(|((l, _), s)| (l.as_str(), s.as_slice()))
        .collect();
    DGQuiverAlgebra::new(quiver, &diff, MAX_QUIVER_STEPS).map_err(quiver_err)
}

fn term_element(
    alg: &DGQuiverAlgebra,
    terms: &[(i64, Vec<String>)],
) -> Result<secfan::quiver::Lin, CmdError> {
    use num_traits::Zero as _;
    let mut acc = secfan::quiver::Lin::new();
    for (coef, labels) in terms {
        let names: Vec<&str> = labels.iter().map(String::as_str).collect();
        let e = alg.element_named(&names).map_err(quiver_err)?;
        secfan::quiver::lin_add_scaled(&mut acc, &e, &Rat::from_integer(Int::from(*coef)));
    }
    acc.retain(|_, c| !c.is_zero());
    Ok(acc)
}

/// Build transfer data: from the fixture's cohomology section when present,
/// otherwise by exact elimination on the algebra itself.
fn build_transfer(
    alg: &DGQuiverAlgebra,
    q: &QuiverInput,
) -> Result<TransferData, CmdError> {
    let Some(section) = &q.cohomology else {
        return auto_transfer(alg).map_err(|e| engine(e));
    };
    let coh_quiver = q.cohomology_quiver().map_err(quiver_err)?.expect("section present");
    let coh = DGQuiverAlgebra::new(coh_quiver, &[], MAX_QUIVER_STEPS).map_err(quiver_err)?;
    let classes: Vec<CohClass> = coh
        .basis
        .iter()
        .map(|p| CohClass {
            label: coh.quiver.path_label(p),
            source: p.source,
            target: coh.quiver.path_target(p),
            degree: coh.quiver.path_degree(p),
        })
        .collect();
    // embed each cohomology basis path by arrow-label substitution
    let mut i = Vec::new();
    for p in &coh.basis {
        if p.arrows.is_empty() {
            i.push(alg.element(&Path::idempotent(p.source)));
            continue;
        }
        let mut arrows = Vec::new();
        for &idx in &p.arrows {
            let label = &coh.quiver.arrows[idx].label;
            let name = section.embed.get(label).unwrap_or(label);
            let j = alg
                .quiver
                .arrow_index(name)
                .ok_or_else(|| validation(format!("embed target `{name}` is not an arrow")))?;
            arrows.push(j);
        }
        i.push(alg.element(&Path { source: p.source, arrows }));
    }
    // homotopy entries, keyed by the normal form of the given path
    let mut h = std::collections::BTreeMap::new();
    for (key_labels, val_terms) in &section.homotopy {
        let names: Vec<&str> = key_labels.iter().map(String::as_str).collect();
        let key = alg.element_named(&names).map_err(quiver_err)?;
        let Some((p, c)) = key.iter().next_back() else {
            return Err(validation(format!(
                "homotopy key `{}` is zero in the algebra",
                key_labels.join(" ")
            )));
        };
        let mut val = term_element(alg, val_terms)?;
        let inv = Rat::new(Int::from(1), Int::from(1)) / c.clone();
        for v in val.values_mut() {
            *v *= &inv;
        }
        h.insert(p.clone(), val);
    }
    TransferData::from_ih(alg, classes, i, h).map_err(|e| engine(e))
}

fn format_value(t: &TransferData, value: &[(usize, Rat)]) -> String {
    if value.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> = value
        .iter()
        .map(|(k, c)| format!("{c}*({})", t.classes[*k].label))
        .collect();
    parts.join(" + ")
}

fn report_products(r: &mut Report, t: &TransferData, a: &AInftyAlgebra, nmax: usize) {
    for n in 2..=nmax {
        r.kv(&format!("m{n}.count"), a.nonzero_count(n));
        if let Some(table) = a.tables.get(&n) {
            for (tuple, value) in table {
                let args: Vec<String> =
                    tuple.iter().map(|&k| t.classes[k].label.clone()).collect();
                r.kv(
                    &format!("m{n}.({})", args.join(" | ")),
                    format_value(t, value),
                );
            }
        }
    }
    let formal = (3..=nmax).all(|n| a.nonzero_count(n) == 0);
    r.kv("formal", formal);
}

fn cmd_ainfty(r: &mut Report, q: &QuiverInput, opts: &Opts) -> Result<(), CmdError> {
    let nmax = if opts.nmax == 0 { 4 } else { opts.nmax };
    let alg = build_algebra(q)?;
    r.kv("dimension", alg.dimension());
    let (dg_ok, witness) = validate_dg(&alg);
    r.kv("dg-valid", dg_ok);
    if let Some(w) = witness {
        r.kv("dg-witness", &w);
        return Err(validation(format!("inconsistent dg data: {w}")));
    }
    let t = build_transfer(&alg, q)?;
    r.kv("classes", t.classes.len());
    let (ok, witness) = validate_transfer(&alg, &t);
    r.kv("transfer-valid", ok);
    if let Some(w) = witness {
        r.kv("transfer-witness", &w);
    }
    if !ok {
        return Err(CmdError::Mismatch("transfer data fails the side conditions".into()));
    }
    let a = transfer_mn(&alg, &t, nmax).map_err(|e| engine(e))?;
    report_products(r, &t, &a, nmax);
    Ok(())
}

// ---------------------------------------------------------------------------
// the worked-example verifier
// ---------------------------------------------------------------------------

fn check(r: &mut Report, name: &str, ok: bool) -> Result<(), CmdError> {
    r.kv(&format!("check.{name}"), if ok { "ok" } else { "FAIL" });
    if ok {
        Ok(())
    } else {
        Err(CmdError::Mismatch(format!("check `{name}` failed")))
    }
}

fn cmd_verify_example(r: &mut Report, c: &ConfigInput) -> Result<(), CmdError> {
    let fan = fan_of(c)?;
    let names = c.ray_names();
    check(r, "chambers-30", fan.chambers.len() == 30)?;
    let fan_type = fan.chambers.iter().filter(|ch| ch.fan_type.is_some()).count();
    check(r, "fan-type-20", fan_type == 20)?;
    check(r, "walls-61", fan.walls.len() == 61)?;

    // the two distinguished chambers: the chi-maximal one, and its smooth
    // neighbor one step down
    let top = chi_max_chamber(&fan)?;
    let chi = |id: usize| fan.chambers[id].phi[fan.origin].clone();
    check(r, "top-rank-7", chi(top) == Int::from(7))?;
    let smooth: Vec<usize> = fan
        .chambers
        .iter()
        .filter(|ch| {
            chi(ch.id) == Int::from(6)
                && ch
                    .fan_type
                    .as_ref()
                    .map(|f| f.multiplicities.iter().all(|m| *m == Int::from(1)))
                    .unwrap_or(false)
                && fan.wall_between(top, ch.id).is_some()
        })
        .map(|ch| ch.id)
        .collect();
    check(r, "smooth-neighbor-unique", smooth.len() == 1)?;
    let x = smooth[0];
    r.kv("chamber.top", top);
    r.kv("chamber.x", x);

    // the five-wall run from the top chamber through x to the outside
    let runs = candidate_runs(&fan, top);
    let expected_mu: Vec<Int> = [-1i64, -1, -1, -1, -3].iter().map(|&v| Int::from(v)).collect();
    let five: Vec<&MoriRun> = runs
        .iter()
        .filter(|run| {
            run.walls.len() == 5
                && run.walls.iter().map(|w| w.data.mu.clone()).collect::<Vec<_>>()
                    == expected_mu
                && run.walls.iter().all(|w| w.data.w_rank_k0 == Int::from(1))
                && run.chambers.contains(&x)
        })
        .collect();
    check(r, "five-wall-run", !five.is_empty())?;
    let run = five[0];
    report_run(r, "run", run);

    // monotone path counts and the matched multiplicity vector
    let paths = monotone_paths(&fan).map_err(engine)?;
    check(r, "paths-24", paths.len() == 24)?;
    let through = paths.iter().filter(|p| p.vertices.contains(&x)).count();
    check(r, "through-x-10", through == 10)?;
    let want: Vec<Int> = [3i64, 1, 1, 1, 1].iter().map(|&v| Int::from(v)).collect();
    let flagged: Vec<&MonotonePath> =
        paths.iter().filter(|p| p.multiplicities == want).collect();
    check(r, "multiplicity-31111", flagged.len() == 2)?;
    let matched = flagged
        .iter()
        .find(|p| match_path_to_run(&fan, p, run).matches);
    check(r, "path-matches-run", matched.is_some())?;
    let matched = matched.expect("checked above");

    // exhaustive conservation over every path and every run out of both
    // distinguished chambers
    let conserved = |start: usize, rs: &[MoriRun]| {
        rs.iter().all(|run| {
            let total: Int = run
                .walls
                .iter()
                .map(|w| -w.data.mu.clone() * &w.data.w_rank_k0)
                .sum();
            total == chi(start)
        })
    };
    check(r, "k0-conservation-top", conserved(top, &runs))?;
    let runs_x = candidate_runs(&fan, x);
    check(r, "k0-conservation-x", conserved(x, &runs_x))?;
    let telescoping = paths.iter().all(|p| {
        let total: Int = p
            .vertices
            .windows(2)
            .zip(&p.multiplicities)
            .map(|(w, a)| {
                let g = {
                    // content of the volume-vector difference
                    use num_integer::Integer as _;
                    let mut acc = Int::from(0);
                    for (u, v) in fan.chambers[w[1]].phi.iter().zip(&fan.chambers[w[0]].phi) {
                        acc = acc.gcd(&(u - v));
                    }
                    acc
                };
                g * a
            })
            .sum();
        let d = chi(*p.vertices.last().expect("nonempty"))
            - chi(*p.vertices.first().expect("nonempty"));
        total == d
    });
    check(r, "k0-conservation-paths", telescoping)?;

    // decomposition labels of the four-wall run out of x, with twist -1
    let expected_labels = [
        "O(-2D0)",
        "O(-D0)",
        "O",
        "O_{D3+D4+D5}",
        "O_{D4}",
        "O_{D5}",
    ];
    let sod_found = runs_x.iter().any(|rx| {
        run_sod(&fan, rx, &vec![-1; rx.walls.len()], Some(&names))
            .map(|sod| {
                let labels: Vec<&str> =
                    sod.components.iter().map(|x| x.label.as_str()).collect();
                labels == expected_labels && k0_check(&fan, rx, &sod)
            })
            .unwrap_or(false)
    });
    check(r, "sod-labels", sod_found)?;

    // tropical shadow: the stable complexes of the two edges inserting the
    // last two exceptional rays persist and are disjoint after push-forward
    // to the final triangulation
    let config = configuration(c)?;
    let fam = path_stable_complexes(&config, &fan, matched).map_err(engine)?;
    let ray_index = |name: &str| -> Option<usize> {
        names.iter().position(|n| n == name).map(|pos| fan.ray_points[pos])
    };
    // rays dropped from the star of the origin at the k-th crossing
    let contracted = |k: usize| -> BTreeSet<usize> {
        let w = &run.walls[k].data;
        let rays = |id: usize| -> BTreeSet<usize> {
            fan.chambers[id]
                .fan_type
                .as_ref()
                .map(|f| f.rays.iter().copied().collect())
                .unwrap_or_default()
        };
        rays(w.from).difference(&rays(w.to)).copied().collect()
    };
    let crossing_dropping = |point: usize| -> Option<usize> {
        (0..run.walls.len()).find(|&k| contracted(k).contains(&point))
    };
    let (k4, k5) = match (
        ray_index("D4").and_then(crossing_dropping),
        ray_index("D5").and_then(crossing_dropping),
    ) {
        (Some(a), Some(b)) if a != b => (a, b),
        _ => return check(r, "stable-edges-found", false),
    };
    check(r, "sod-wall-supports-disjoint", contracted(k4).is_disjoint(&contracted(k5)))?;
    // matched path edges run opposite to the crossing order
    let e4 = run.walls.len() - 1 - k4;
    let e5 = run.walls.len() - 1 - k5;
    check(r, "stable-edges-found", e4 != e5)?;
    check(r, "stable-nonempty", !fam.pushed[e4].is_empty() && !fam.pushed[e5].is_empty())?;
    check(r, "stable-disjoint", fam.disjoint[e4][e5])?;
    r.kv("verified", true);
    Ok(())
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

pub const SUBCOMMANDS: &[&str] = &[
    "circuits",
    "triangulations",
    "secondary",
    "walls",
    "run",
    "nef-fano",
    "sod",
    "collection",
    "paths",
    "radar",
    "match",
    "ainfty",
    "verify-example",
];

/// Parse the input text and run one subcommand, returning the rendered
/// report.
pub fn run_command(cmd: &str, input_text: &str, opts: &Opts) -> Result<Report, CmdError> {
    let input = parse_input(input_text).map_err(|e| validation(e.to_string()))?;
    let mut r = Report::new(cmd, input_text);
    match cmd {
        "circuits" => cmd_circuits(&mut r, need_config(&input)?)?,
        "triangulations" => cmd_triangulations(&mut r, need_config(&input)?)?,
        "secondary" => cmd_secondary(&mut r, need_config(&input)?)?,
        "walls" => cmd_walls(&mut r, need_config(&input)?)?,
        "run" => cmd_run(&mut r, need_config(&input)?, opts)?,
        "nef-fano" => cmd_nef_fano(&mut r, need_config(&input)?, opts)?,
        "sod" => cmd_sod(&mut r, need_config(&input)?, opts)?,
        "collection" => cmd_collection(&mut r, need_config(&input)?, opts)?,
        "paths" => cmd_paths(&mut r, need_config(&input)?)?,
        "radar" => cmd_radar(&mut r, need_config(&input)?, opts)?,
        "match" => cmd_match(&mut r, need_config(&input)?, opts)?,
        "ainfty" => cmd_ainfty(&mut r, need_quiver(&input)?, opts)?,
        "verify-example" => cmd_verify_example(&mut r, need_config(&input)?)?,
        other => return Err(validation(format!("unknown subcommand `{other}`"))),
    }
    Ok(r)
}

/// Ordered set of chamber ids — re-exported for integration tests.
pub fn chamber_ids(fan: &SecondaryFan) -> BTreeSet<usize> {
    fan.chambers.iter().map(|c| c.id).collect()
}
