//! Monotone edge paths on the secondary polytope, multiplicities, radar
//! screens, and matching against straight-line runs.

use crate::config::PointConfiguration;
use crate::lp::strict_feasible;
use crate::mori::{wall_data, MoriError, MoriRun};
use crate::prelude::*;
use crate::secondary::SecondaryFan;
use crate::triang::TriangError;
use crate::tropical::{dual_complex, stable_complex, DualCell};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathError {
    Triang(TriangError),
    Mori(MoriError),
    NoMaximum,
}

impl core::fmt::Display for PathError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PathError::Triang(e) => write!(f, "{e}"),
            PathError::Mori(e) => write!(f, "{e}"),
            PathError::NoMaximum => write!(f, "no chi-maximizing vertex"),
        }
    }
}

/// A coherent chi-monotone edge path on the secondary polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonePath {
    /// Chamber ids of the visited vertices, chi strictly increasing.
    pub vertices: Vec<usize>,
    /// Wall ids of the edges taken.
    pub edges: Vec<usize>,
    /// A functional certifying coherence via the selection rule.
    pub coherence_certificate: Vec<Rat>,
    /// The annulus multiplicity of each edge.
    pub multiplicities: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annulus {
    /// Index of the path edge the annulus belongs to.
    pub edge: usize,
    pub multiplicity: Int,
    /// Number of radial regions, equal to the multiplicity.
    pub regions: Int,
    /// Critical values per region: 1 unless the circuit is degenerate.
    pub critical_values_per_region: Int,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadarScreen {
    pub annuli: Vec<Annulus>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchItem {
    pub index: usize,
    /// Annulus multiplicity of the path edge.
    pub a: Int,
    /// Content of the volume-vector difference along the edge.
    pub g: Int,
    /// (-mu) times the wall rank on the run side; matches g * a.
    pub mu_rank: Int,
    pub circuit_ok: bool,
}

/// Edge-by-edge comparison of a path against a reversed run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchReport {
    pub length_ok: bool,
    pub items: Vec<MatchItem>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableFamily {
    /// One stable complex per path edge.
    pub complexes: Vec<Vec<DualCell>>,
    /// Whether each complex's faces persist to the final triangulation.
    pub persistent: Vec<bool>,
    /// Faces surviving the push-forward to the final dual complex.
    pub pushed: Vec<BTreeSet<Vec<usize>>>,
    /// Pairwise disjointness of the pushed-forward complexes.
    pub disjoint: Vec<Vec<bool>>,
}

/// The monomial exponents of the Hori-Vafa potential: one per marked point,
/// the origin giving the constant term.
pub fn hori_vafa_monomials(config: &PointConfiguration) -> Vec<Vec<Int>> {
    config.points.clone()
}

fn chi(fan: &SecondaryFan, chamber: usize) -> &Int {
    &fan.chambers[chamber].phi[fan.origin]
}

/// Neighbors of a chamber through walls, as (chamber, wall id).
fn neighbors(fan: &SecondaryFan, chamber: usize) -> Vec<(usize, usize)> {
    fan.walls
        .iter()
        .filter_map(|w| {
            if w.chambers.0 == chamber {
                Some((w.chambers.1, w.id))
            } else if w.chambers.1 == chamber {
                Some((w.chambers.0, w.id))
            } else {
                None
            }
        })
        .collect()
}

fn phi_diff(fan: &SecondaryFan, from: usize, to: usize) -> Vec<Rat> {
    fan.chambers[to]
        .phi
        .iter()
        .zip(&fan.chambers[from].phi)
        .map(|(a, b)| rat_int(&(a - b)))
        .collect()
}

/// Coherence certificate for a candidate path: a functional that, at every
/// vertex, makes the chosen edge the unique steepest chi-improving one
/// (cross-multiplied slope comparison, checked by exact LP).
fn coherence_certificate(fan: &SecondaryFan, vertices: &[usize]) -> Option<Vec<Rat>> {
    let n = fan.chambers[0].phi.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in 0..vertices.len() - 1 {
        let c = vertices[i];
        let nx = vertices[i + 1];
        let u = phi_diff(fan, c, nx);
        let du = rat_int(&(chi(fan, nx) - chi(fan, c)));
        for (w, _) in neighbors(fan, c) {
            if w == nx || chi(fan, w) <= chi(fan, c) {
                continue;
            }
            let v = phi_diff(fan, c, w);
            let dv = rat_int(&(chi(fan, w) - chi(fan, c)));
            rows.push((0..n).map(|q| &u[q] * &dv - &v[q] * &du).collect());
        }
    }
    if rows.is_empty() {
        return Some(vec![Rat::zero(); n]);
    }
    strict_feasible(&rows, n)
}

/// Multiplicity of one path edge: the origin coordinate of the primitive
/// volume-vector difference.
fn edge_multiplicity(fan: &SecondaryFan, from: usize, to: usize) -> Int {
    let diff: Vec<Int> = fan.chambers[to]
        .phi
        .iter()
        .zip(&fan.chambers[from].phi)
        .map(|(a, b)| a - b)
        .collect();
    let mut g = Int::zero();
    for x in &diff {
        g = num_integer::Integer::gcd(&g, x);
    }
    let d0 = &diff[fan.origin];
    if g.is_zero() {
        Int::zero()
    } else {
        d0 / &g
    }
}

/// All coherent chi-monotone edge paths from the chi-minimizing vertices to
/// the unique chi-maximizing vertex, sorted by vertex sequence.
pub fn monotone_paths(fan: &SecondaryFan) -> Result<Vec<MonotonePath>, PathError> {
    let chis: Vec<&Int> = (0..fan.chambers.len()).map(|c| chi(fan, c)).collect();
    let max_chi = (*chis.iter().max().ok_or(PathError::NoMaximum)?).clone();
    let min_chi = (*chis.iter().min().expect("nonempty")).clone();
    let starts: Vec<usize> =
        (0..fan.chambers.len()).filter(|&c| *chi(fan, c) == min_chi).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> =
        starts.into_iter().map(|s| (vec![s], Vec::new())).collect();
    stack.sort();
    stack.reverse();
    while let Some((verts, edges)) = stack.pop() {
        let c = *verts.last().expect("nonempty");
        if *chi(fan, c) == max_chi {
            if let Some(cert) = coherence_certificate(fan, &verts) {
                let mults: Vec<Int> = verts
                    .windows(2)
                    .map(|w| edge_multiplicity(fan, w[0], w[1]))
                    .collect();
            out.push(MonotonePath {
                    vertices: verts,
                    edges,
                    coherence_certificate: cert,
                    multiplicities: mults,
                });
            }
            continue;
        }
        let mut next: Vec<(usize, usize)> = neighbors(fan, c)
            .into_iter()
            .filter(|&(w, _)| chi(fan, w) > chi(fan, c))
            .collect();
        next.sort();
        next.reverse();
        for (w, wall) in next {
            let mut v = verts.clone();
            v.push(w);
            let mut e = edges.clone();
            e.push(wall);
            stack.push((v, e));
        }
    }
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(out)
}

/// Content (gcd of entries) of the volume-vector difference along an edge.
fn edge_content(fan: &SecondaryFan, from: usize, to: usize) -> Int {
    let mut g = Int::zero();
    for (a, b) in fan.chambers[to].phi.iter().zip(&fan.chambers[from].phi) {
        g = num_integer::Integer::gcd(&g, &(a - b));
    }
    g
}

/// Per-edge multiplicities (recomputed from the fan).
pub fn multiplicities(fan: &SecondaryFan, path: &MonotonePath) -> Vec<Int> {
    path.vertices.windows(2).map(|w| edge_multiplicity(fan, w[0], w[1])).collect()
}

/// Radar screen of a path: one annulus per edge with positive multiplicity.
pub fn radar_screen(fan: &SecondaryFan, path: &MonotonePath) -> Result<RadarScreen, PathError> {
    let mut annuli = Vec::new();
    for (i, (pair, wall)) in path.vertices.windows(2).zip(&path.edges).enumerate() {
        let a = edge_multiplicity(fan, pair[0], pair[1]);
        if a.is_zero() {
            continue;
        }
        let data = wall_data(fan, *wall, pair[0]).map_err(PathError::Mori)?;
        let degenerate = data.w_rank_k0 != Int::one();
        annuli.push(Annulus {
            edge: i,
            multiplicity: a.clone(),
            regions: a,
            critical_values_per_region: data.w_rank_k0,
            degenerate,
        });
    }
    Ok(RadarScreen { annuli })
}

/// Verify a path against the reversed walls of a run: multiplicities match
/// (-mu) times the wall rank, and circuit supports coincide.
pub fn match_path_to_run(
    fan: &SecondaryFan,
    path: &MonotonePath,
    run: &MoriRun,
) -> MatchReport {
    let length_ok = path.edges.len() == run.walls.len();
    let mut items = Vec::new();
    let k = path.edges.len().min(run.walls.len());
    for i in 0..k {
        let a = edge_multiplicity(fan, path.vertices[i], path.vertices[i + 1]);
        let g = edge_content(fan, path.vertices[i], path.vertices[i + 1]);
        let w = &run.walls[run.walls.len() - 1 - i];
        let mu_rank = -w.data.mu.clone() * &w.data.w_rank_k0;
        let path_circuit = &fan.walls[path.edges[i]].circuit.support;
        let run_circuit = &fan.walls[w.data.wall_id].circuit.support;
        items.push(MatchItem {
            index: i,
            circuit_ok: path_circuit == run_circuit,
            a,
            g,
            mu_rank,
        });
    }
    let matches = length_ok
        && items.iter().all(|it| &it.a * &it.g == it.mu_rank && it.circuit_ok);
    MatchReport { length_ok, items, matches }
}

/// Stable complexes of every path edge, pushed forward to the final
/// triangulation, with the pairwise disjointness table.
pub fn path_stable_complexes(
    config: &PointConfiguration,
    fan: &SecondaryFan,
    path: &MonotonePath,
) -> Result<StableFamily, PathError> {
    let last = *path.vertices.last().expect("nonempty path");
    let t_final = &fan.chambers[last].triangulation;
    let final_faces = t_final.faces();
    let mut complexes = Vec::new();
    let mut persistent = Vec::new();
    for pair in path.vertices.windows(2) {
        let t_from = &fan.chambers[pair[0]].triangulation;
        let t_to = &fan.chambers[pair[1]].triangulation;
        let sc = stable_complex(config, t_from, t_to).map_err(PathError::Triang)?;
        persistent.push(sc.iter().all(|c| final_faces.contains(&c.face)));
        complexes.push(sc);
    }
    // push-forward: intersect with the final triangulation's dual complex
    let final_cells: BTreeSet<Vec<usize>> =
        dual_complex(config, t_final).cells.into_iter().map(|c| c.face).collect();
    let pushed: Vec<BTreeSet<Vec<usize>>> = complexes
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|c| c.face.clone())
                .filter(|f| final_cells.contains(f))
                .collect()
        })
        .collect();
    let m = complexes.len();
    let mut disjoint = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            disjoint[i][j] = i != j && pushed[i].is_disjoint(&pushed[j]);
        }
    }
    Ok(StableFamily { complexes, persistent, pushed, disjoint })
}
