//! Straight-line runs, wall data, rank-K0 accounting and trees.

use crate::circuit::combinations;
use crate::matrix::{dot, dot_rat, IntMatrix};
use crate::prelude::*;
use crate::secondary::{SecError, SecondaryFan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoriError {
    NotIncident,
    NotFanType,
    NonGenericPath,
    StartNotInterior,
    ZeroDirection,
    Sec(SecError),
}

impl core::fmt::Display for MoriError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MoriError::NotIncident => write!(f, "wall is not incident to that chamber"),
            MoriError::NotFanType => write!(f, "chamber is not fan-type"),
            MoriError::NonGenericPath => {
                write!(f, "segment meets a cone of codimension at least 2")
            }
            MoriError::StartNotInterior => {
                write!(f, "start character is not strictly inside a chamber")
            }
            MoriError::ZeroDirection => write!(f, "direction is zero"),
            MoriError::Sec(e) => write!(f, "{e}"),
        }
    }
}

/// The data attached to an oriented wall crossing.
#[derive(Clone, Debug)]
pub struct WallData {
    pub wall_id: usize,
    /// Source and destination chamber ids.
    pub from: usize,
    pub to: usize,
    /// Primitive one-parameter subgroup, oriented so the destination chamber
    /// pairs positively.
    pub lambda: Vec<Int>,
    /// Weights of the coordinates: `<lambda, beta_j>` per ray point (in
    /// `ray_points` order).
    pub weights: Vec<Int>,
    /// `mu = -<lambda, K> = <lambda, sum beta_j>`.
    pub mu: Int,
    /// Ray point indices of weight zero (the sub-problem coordinates).
    pub zero_points: Vec<usize>,
    /// A character in the wall's relative interior.
    pub wall_character: Vec<Rat>,
    /// Rank of K0 of the fixed-locus quotient W.
    pub w_rank_k0: Int,
}

#[derive(Clone, Debug)]
pub struct CrossedWall {
    /// Crossing parameter along the segment.
    pub t: Rat,
    pub data: WallData,
}

#[derive(Clone, Debug)]
pub struct MoriRun {
    pub start: Vec<Rat>,
    pub direction: Vec<Rat>,
    /// Visited chamber ids in order (a terminal outside chamber included).
    pub chambers: Vec<usize>,
    pub walls: Vec<CrossedWall>,
    /// All crossed walls have `mu <= 0`.
    pub valid: bool,
    /// The outside chamber the run exits into, when it does.
    pub exit: Option<usize>,
}

/// Rank of K0 of a fan-type chamber: the normalized volume of the star of
/// the origin, i.e. the origin coordinate of the volume vector.
pub fn rank_k0(fan: &SecondaryFan, chamber: usize) -> Result<Int, MoriError> {
    let c = &fan.chambers[chamber];
    if c.fan_type.is_none() {
        return Err(MoriError::NotFanType);
    }
    Ok(c.phi[fan.origin].clone())
}

/// Wall data oriented away from `from_chamber`.
pub fn wall_data(
    fan: &SecondaryFan,
    wall_id: usize,
    from_chamber: usize,
) -> Result<WallData, MoriError> {
    let wall = &fan.walls[wall_id];
    let to = if wall.chambers.0 == from_chamber {
        wall.chambers.1
    } else if wall.chambers.1 == from_chamber {
        wall.chambers.0
    } else {
        return Err(MoriError::NotIncident);
    };
    // stored normal points toward chambers.1
    let mut lambda = wall.normal.clone();
    if to == wall.chambers.0 {
        for x in lambda.iter_mut() {
            let v = -x.clone();
            *x = v;
        }
    }
    let weights: Vec<Int> = fan.seq.beta.iter().map(|b| dot(&lambda, b)).collect();
    let mu: Int = weights.iter().cloned().sum();
    let zero_points: Vec<usize> = fan
        .ray_points
        .iter()
        .zip(&weights)
        .filter(|(_, w)| w.is_zero())
        .map(|(&p, _)| p)
        .collect();
    let w_rank_k0 = sub_problem_rank_k0(fan, &lambda, &wall.interior)?;
    Ok(WallData {
        wall_id,
        from: from_chamber,
        to,
        lambda,
        weights,
        mu,
        zero_points,
        wall_character: wall.interior.clone(),
        w_rank_k0,
    })
}

/// Solve the square rational system `a x = b` by Gaussian elimination.
fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for k in 0..n + 1 {
                    let sub = &f * &m[col][k];
                    m[i][k] = &m[i][k] - &sub;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Coordinates of `v` in the (saturated) column basis `cols`.
fn in_basis(cols: &[Vec<Int>], v: &[Rat]) -> Option<Vec<Rat>> {
    // solve sum x_j cols_j = v via left-solve on the transposed matrix
    let t = IntMatrix::from_rows(&cols.to_vec());
    t.solve_left_rational(v).ok()
}

/// Rank of K0 of the wall's fixed-locus GIT quotient `W`.
///
/// The quotient is a complete toric stack whose torus-fixed points are
/// indexed by bases of the zero-weight classes whose positive span strictly
/// contains the wall character; each contributes the index of the sublattice
/// it spans. The sum is the rank (a zero-dimensional `W` has a single basis
/// and the rank is that one index).
pub fn sub_problem_rank_k0(
    fan: &SecondaryFan,
    lambda: &[Int],
    alpha: &[Rat],
) -> Result<Int, MoriError> {
    let k = fan.rank;
    let zero: Vec<usize> = (0..fan.seq.beta.len())
        .filter(|&j| dot(lambda, &fan.seq.beta[j]).is_zero())
        .collect();
    if k == 1 {
        // the hyperplane lattice is trivial: W is a point
        return Ok(Int::one());
    }
    // saturated basis of lambda-perp
    let lm = IntMatrix::from_rows(&[lambda.to_vec()]);
    let perp = lm.kernel_basis(); // k-1 vectors of length k
    debug_assert_eq!(perp.len(), k - 1);
    // zero-weight classes and the wall character in hyperplane coordinates
    let mut beta_l: Vec<Vec<Int>> = Vec::new();
    for &j in &zero {
        let b: Vec<Rat> = fan.seq.beta[j].iter().map(rat_int).collect();
        let coords = in_basis(&perp, &b).expect("zero-weight class lies in the hyperplane");
        let ints: Vec<Int> = coords
            .iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect();
        beta_l.push(ints);
    }
    let alpha_l = in_basis(&perp, alpha).expect("wall character lies in the hyperplane");
    let mut rank = Int::zero();
    for subset in combinations(zero.len(), k - 1) {
        let rows: Vec<Vec<Int>> = subset.iter().map(|&i| beta_l[i].clone()).collect();
        let m = IntMatrix::from_rows(&rows);
        let det = m.det().expect("square").abs();
        if det.is_zero() {
            continue;
        }
        // alpha strictly inside the simplicial cone of this basis
        let cols: Vec<Vec<Rat>> = (0..k - 1)
            .map(|i| rows.iter().map(|r| rat_int(&r[i])).collect())
            .collect();
        let coords = solve_square(&cols, &alpha_l).expect("basis is invertible");
        if coords.iter().all(|c| c.is_positive()) {
            rank += det;
        }
    }
    if rank.is_zero() {
        return Err(MoriError::NotFanType);
    }
    Ok(rank)
}

/// Follow `start + t * direction` for `t >= 0` across the fan, recording
/// every wall crossing, until the segment enters an outside chamber (or
/// stays inside one chamber forever).
pub fn straight_line_run(
    fan: &SecondaryFan,
    start: &[Rat],
    direction: &[Rat],
) -> Result<MoriRun, MoriError> {
    if direction.iter().all(|x| x.is_zero()) {
        return Err(MoriError::ZeroDirection);
    }
    let loc = fan.locate(start);
    if loc.codim != 0 {
        return Err(MoriError::StartNotInterior);
    }
    let mut current = loc.chambers[0];
    let mut chambers = vec![current];
    let mut walls = Vec::new();
    let mut t_cur = Rat::zero();
    let mut exit = None;
    for _ in 0..fan.chambers.len() {
        if fan.chambers[current].fan_type.is_none() {
            exit = Some(current);
            break;
        }
        // earliest facet of the current chamber crossed moving forward
        let mut t_best: Option<Rat> = None;
        for g in &fan.chambers[current].facets {
            let gd = dot_rat(g, direction);
            if !gd.is_negative() {
                continue;
            }
            let gs = dot_rat(g, start);
            let t = -(&gs / &gd);
            if t < t_cur {
                continue;
            }
            if t_best.as_ref().map(|b| &t < b).unwrap_or(true) {
                t_best = Some(t);
            }
        }
        let Some(t_star) = t_best else { break };
        let x: Vec<Rat> = start
            .iter()
            .zip(direction)
            .map(|(s, d)| s + &(&t_star * d))
            .collect();
        let xloc = fan.locate(&x);
        if xloc.codim != 1 || xloc.chambers.len() != 2 {
            return Err(MoriError::NonGenericPath);
        }
        let wall_id = xloc.wall.ok_or(MoriError::NonGenericPath)?;
        let data = wall_data(fan, wall_id, current)?;
        let next = data.to;
        walls.push(CrossedWall { t: t_star.clone(), data });
        chambers.push(next);
        current = next;
        t_cur = t_star;
    }
    let valid = walls.iter().all(|w| !w.data.mu.is_positive());
    Ok(MoriRun { start: start.to_vec(), direction: direction.to_vec(), chambers, walls, valid, exit })
}

/// Find a chamber whose closure contains the anticanonical character and a
/// valid straight-line run from its interior through the target chamber to
/// the outside of the GIT region.
///
/// Existence is guaranteed; failure aborts loudly.
pub fn find_nef_fano_start(fan: &SecondaryFan, target: usize) -> (usize, MoriRun) {
    assert!(fan.chambers[target].fan_type.is_some(), "target must be fan-type");
    let minus_k: Vec<Rat> = fan.seq.anticanonical.iter().map(rat_int).collect();
    let loc = fan.locate(&minus_k);
    let mut candidates = loc.chambers.clone();
    candidates.sort_unstable();
    for &cand in &candidates {
        if fan.chambers[cand].fan_type.is_none() {
            continue;
        }
        let a = fan.chambers[cand].interior.clone();
        // aim through the target, then at outside chambers, with
        // deterministic rational nudges on non-generic hits
        let mut aims: Vec<Vec<Rat>> = Vec::new();
        if cand != target {
            aims.push(fan.chambers[target].interior.clone());
        }
        for c in &fan.chambers {
            if c.fan_type.is_none() {
                aims.push(c.interior.clone());
            }
        }
        for aim in &aims {
            for nudge in perturbations(fan.rank) {
                let b: Vec<Rat> = aim.iter().zip(&nudge).map(|(x, e)| x + e).collect();
                let dir: Vec<Rat> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
                if dir.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let Ok(run) = straight_line_run(fan, &a, &dir) else { continue };
                if run.valid && run.exit.is_some() && run.chambers.contains(&target) {
                    return (cand, run);
                }
            }
        }
    }
    panic!("no nef-Fano start found: engine bug");
}

/// Enumerate distinct valid runs out of a chamber by aiming segments from
/// its interior at the interiors of all other chambers (with deterministic
/// rational nudges for genericity), deduplicated by wall sequence.
pub fn candidate_runs(fan: &SecondaryFan, start_chamber: usize) -> Vec<MoriRun> {
    let a = fan.chambers[start_chamber].interior.clone();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for c in &fan.chambers {
        if c.id == start_chamber {
            continue;
        }
        for nudge in perturbations(fan.rank) {
            let b: Vec<Rat> = c.interior.iter().zip(&nudge).map(|(x, e)| x + e).collect();
            let dir: Vec<Rat> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
            if dir.iter().all(|x| x.is_zero()) {
                continue;
            }
            let Ok(run) = straight_line_run(fan, &a, &dir) else { continue };
            if !run.valid || run.exit.is_none() {
                continue;
            }
            let key: Vec<usize> = run.walls.iter().map(|w| w.data.wall_id).collect();
            if seen.insert(key) {
                out.push(run);
            }
        }
    }
    out
}

/// Small deterministic rational perturbation vectors, the zero vector first.
fn perturbations(rank: usize) -> Vec<Vec<Rat>> {
    let mut out = vec![vec![Rat::zero(); rank]];
    for denom in [997i64, 9973] {
        let mut v = Vec::with_capacity(rank);
        let mut d = Int::from(denom);
        for _ in 0..rank {
            v.push(Rat::new(Int::one(), d.clone()));
            d *= Int::from(denom);
        }
        out.push(v);
    }
    out
}

/// A tree of straight-line runs descending through wall sub-problems.
#[derive(Clone, Debug)]
pub struct MoriTree {
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<TreeEdge>,
    pub root: usize,
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    /// Position of the vertex in character space.
    pub position: Vec<Rat>,
    /// The dimension bookkeeping value m at this vertex.
    pub m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSign {
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub struct TreeEdge {
    pub from: usize,
    pub to: usize,
    pub sign: EdgeSign,
}

/// Check the structural rules of a marked tree against the fan geometry.
///
/// Rules: a rooted tree with out-degree at most 2 (two children must carry
/// opposite marks; a single child is a plus edge); a plus edge from a vertex
/// with value m keeps m and runs inside a cell of dimension m+1; a minus
/// edge drops m by one and runs inside a cell of dimension m.
pub fn validate_mori_tree(tree: &MoriTree, fan: &SecondaryFan) -> (bool, Option<String>) {
    let n = tree.nodes.len();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in tree.edges.iter().enumerate() {
        if e.from >= n || e.to >= n {
            return (false, Some(format!("edge {i} out of range")));
        }
        indeg[e.to] += 1;
        out[e.from].push(i);
    }
    if indeg[tree.root] != 0 {
        return (false, Some("root has a parent".to_string()));
    }
    for v in 0..n {
        if v != tree.root && indeg[v] != 1 {
            return (false, Some(format!("vertex {v} has in-degree {}", indeg[v])));
        }
        match out[v].len() {
            0 | 1 | 2 => {}
            d => return (false, Some(format!("vertex {v} has out-degree {d}"))),
        }
        if out[v].len() == 1 && tree.edges[out[v][0]].sign != EdgeSign::Plus {
            return (false, Some(format!("single child of vertex {v} is not a plus edge")));
        }
        if out[v].len() == 2 {
            let s0 = tree.edges[out[v][0]].sign;
            let s1 = tree.edges[out[v][1]].sign;
            if s0 == s1 {
                return (false, Some(format!("vertex {v} has two equally marked edges")));
            }
        }
    }
    for (i, e) in tree.edges.iter().enumerate() {
        let mu = tree.nodes[e.from].m;
        let mv = tree.nodes[e.to].m;
        let expect_cell_dim = match e.sign {
            EdgeSign::Plus => {
                if mv != mu {
                    return (false, Some(format!("plus edge {i} changes m ({mu} -> {mv})")));
                }
                mu + 1
            }
            EdgeSign::Minus => {
                if mv + 1 != mu {
                    return (
                        false,
                        Some(format!("minus edge {i} does not drop m by one ({mu} -> {mv})")),
                    );
                }
                mu
            }
        };
        // the open edge must lie in a single cell: test the midpoint
        let mid: Vec<Rat> = tree.nodes[e.from]
            .position
            .iter()
            .zip(&tree.nodes[e.to].position)
            .map(|(a, b)| (a + b) / rat(2, 1))
            .collect();
        let loc = fan.locate(&mid);
        let dim = fan.rank - loc.codim;
        if dim != expect_cell_dim {
            return (
                false,
                Some(format!(
                    "edge {i} lies in a cell of dimension {dim}, expected {expect_cell_dim}"
                )),
            );
        }
    }
    (true, None)
}

/// Build the spine tree of a run: one vertex per wall crossing joined by
/// plus edges through the chambers.
pub fn run_spine_tree(fan: &SecondaryFan, run: &MoriRun) -> MoriTree {
    let m = fan.rank - 1;
    let nodes: Vec<TreeNode> = run
        .walls
        .iter()
        .map(|w| TreeNode { position: w.data.wall_character.clone(), m })
        .collect();
    let edges: Vec<TreeEdge> = (1..nodes.len())
        .map(|i| TreeEdge { from: i - 1, to: i, sign: EdgeSign::Plus })
        .collect();
    MoriTree { nodes, edges, root: 0 }
}
