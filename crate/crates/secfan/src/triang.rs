//! Regular subdivisions, regular triangulations, volume vectors and
//! bistellar flips.
//!
//! Enumeration runs twice by design: a flip-graph breadth-first search seeded
//! by a lifted (paraboloid) triangulation, and an independent brute-force
//! enumeration of all simplicial covers filtered by an exact-LP regularity
//! certificate. The two must agree on every configuration at desk scale.

use crate::circuit::{circuits, combinations, Circuit};
use crate::config::{ConfigError, PointConfiguration};
use crate::lp::strict_feasible;
use crate::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TriangError {
    TooLarge,
    NotFlippable,
    NotAdjacent,
    Config(ConfigError),
}

impl core::fmt::Display for TriangError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TriangError::TooLarge => write!(f, "configuration exceeds the enumeration guard"),
            TriangError::NotFlippable => write!(f, "circuit is not flippable here"),
            TriangError::NotAdjacent => write!(f, "triangulations are not one flip apart"),
            TriangError::Config(e) => write!(f, "{e}"),
        }
    }
}

/// A polyhedral subdivision given by its maximal cells (sorted index lists).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub cells: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn is_triangulation(&self, dim: usize) -> bool {
        self.cells.iter().all(|c| c.len() == dim + 1)
    }
}

/// A triangulation: sorted list of sorted (dim+1)-element simplices, with a
/// rational weight certificate when regularity has been established.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triangulation {
    pub simplices: Vec<Vec<usize>>,
    pub weight_certificate: Option<Vec<Rat>>,
}

impl Triangulation {
    pub fn new(mut simplices: Vec<Vec<usize>>) -> Self {
        for s in simplices.iter_mut() {
            s.sort_unstable();
        }
        simplices.sort();
        simplices.dedup();
        Triangulation { simplices, weight_certificate: None }
    }

    pub fn used_points(&self) -> BTreeSet<usize> {
        self.simplices.iter().flatten().copied().collect()
    }

    /// The volume vector: per point, the total normalized volume of the
    /// incident simplices.
    pub fn volume_vector(&self, config: &PointConfiguration) -> Vec<Int> {
        let mut phi = vec![Int::zero(); config.points.len()];
        for s in &self.simplices {
            let v = config.simplex_volume(s);
            for &i in s {
                phi[i] += &v;
            }
        }
        phi
    }

    /// All faces (sorted index lists) of every dimension, simplices included.
    pub fn faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for s in &self.simplices {
            for size in 1..=s.len() {
                for c in combinations(s.len(), size) {
                    out.insert(c.iter().map(|&k| s[k]).collect());
                }
            }
        }
        out
    }
}

/// The regular subdivision induced by lifting point `i` to height `w[i]` and
/// projecting the lower hull.
pub fn regular_subdivision(config: &PointConfiguration, w: &[Rat]) -> Subdivision {
    assert_eq!(w.len(), config.points.len());
    let n = config.points.len();
    let d = config.dim;
    let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
    for subset in combinations(n, d + 1) {
        if config.simplex_volume(&subset).is_zero() {
            continue;
        }
        // affine function matching w on the subset
        let mut lower = true;
        let mut cell = Vec::new();
        for p in 0..n {
            let coords = config
                .affine_coords(&subset, &config.points[p])
                .expect("nondegenerate simplex");
            let lifted: Rat = coords.iter().zip(&subset).map(|(c, &i)| c * &w[i]).sum();
            if lifted > w[p] {
                lower = false;
                break;
            }
            if lifted == w[p] {
                cell.push(p);
            }
        }
        if lower {
            cells.insert(cell);
        }
    }
    Subdivision { cells: cells.into_iter().collect() }
}

/// Exact-LP regularity certificate: a weight vector whose regular subdivision
/// is exactly the given simplex set, or `None` when the triangulation is not
/// regular.
pub fn regularity_certificate(
    config: &PointConfiguration,
    simplices: &[Vec<usize>],
) -> Option<Vec<Rat>> {
    let n = config.points.len();
    let mut rows = Vec::new();
    for s in simplices {
        for p in 0..n {
            if s.contains(&p) {
                continue;
            }
            let coords = config.affine_coords(s, &config.points[p])?;
            let mut row = vec![Rat::zero(); n];
            row[p] += Rat::one();
            for (c, &i) in coords.iter().zip(s) {
                row[i] = &row[i] - c;
            }
            rows.push(row);
        }
    }
    strict_feasible(&rows, n)
}

/// Deterministic generic lift: paraboloid heights plus geometrically shrinking
/// tie-breakers, refined until the subdivision is simplicial.
pub fn seed_triangulation(config: &PointConfiguration) -> Triangulation {
    let n = config.points.len();
    let base: Vec<Rat> = config
        .points
        .iter()
        .map(|p| {
            let sq: Int = p.iter().map(|x| x * x).sum();
            rat_int(&sq)
        })
        .collect();
    let mut m = rat(1, 64);
    loop {
        let mut w = base.clone();
        let mut eps = m.clone();
        for wi in w.iter_mut().take(n) {
            *wi = &*wi + &eps;
            eps = &eps * &m;
        }
        let sub = regular_subdivision(config, &w);
        if sub.is_triangulation(config.dim) {
            let mut t = Triangulation::new(sub.cells);
            t.weight_certificate = Some(w);
            return t;
        }
        m = &m * &m;
    }
}

/// Which side of the circuit the triangulation realizes: the simplices
/// `support \ {a}` for `a` on that side must all occur, joined to one common
/// (possibly empty) link.
fn realized_side(t: &Triangulation, c: &Circuit, side: &[usize]) -> Option<BTreeSet<Vec<usize>>> {
    let support: BTreeSet<usize> = c.support.iter().copied().collect();
    let mut common: Option<BTreeSet<Vec<usize>>> = None;
    for &a in side {
        let cell: BTreeSet<usize> = support.iter().copied().filter(|&x| x != a).collect();
        let mut links = BTreeSet::new();
        for s in &t.simplices {
            let sset: BTreeSet<usize> = s.iter().copied().collect();
            if cell.is_subset(&sset) {
                let link: Vec<usize> = s.iter().copied().filter(|x| !cell.contains(x)).collect();
                links.insert(link);
            }
        }
        if links.is_empty() {
            return None;
        }
        match &common {
            None => common = Some(links),
            Some(prev) => {
                if prev != &links {
                    return None;
                }
            }
        }
    }
    common
}

/// Replace the circuit's realized side by the opposite one. Involutive.
pub fn flip(
    config: &PointConfiguration,
    t: &Triangulation,
    c: &Circuit,
) -> Result<Triangulation, TriangError> {
    let pos = c.positive_part();
    let neg = c.negative_part();
    let (from, to, link) = if let Some(l) = realized_side(t, c, &pos) {
        (pos, neg, l)
    } else if let Some(l) = realized_side(t, c, &neg) {
        (neg, pos, l)
    } else {
        return Err(TriangError::NotFlippable);
    };
    let support: BTreeSet<usize> = c.support.iter().copied().collect();
    let mut simplices: BTreeSet<Vec<usize>> = t.simplices.iter().cloned().collect();
    for &a in &from {
        for l in &link {
            let mut s: Vec<usize> =
                support.iter().copied().filter(|&x| x != a).chain(l.iter().copied()).collect();
            s.sort_unstable();
            if !simplices.remove(&s) {
                return Err(TriangError::NotFlippable);
            }
        }
    }
    for &b in &to {
        for l in &link {
            let mut s: Vec<usize> =
                support.iter().copied().filter(|&x| x != b).chain(l.iter().copied()).collect();
            s.sort_unstable();
            if config.simplex_volume(&s).is_zero() {
                return Err(TriangError::NotFlippable);
            }
            simplices.insert(s);
        }
    }
    Ok(Triangulation { simplices: simplices.into_iter().collect(), weight_certificate: None })
}

/// Guard limits for exhaustive operations.
pub const MAX_ENUM_POINTS: usize = 12;
pub const MAX_ENUM_DIM: usize = 4;

/// Every regular triangulation exactly once (flip-graph BFS, each node
/// carrying an exact regularity certificate), sorted deterministically.
pub fn regular_triangulations(
    config: &PointConfiguration,
) -> Result<Vec<Triangulation>, TriangError> {
    if config.points.len() > MAX_ENUM_POINTS || config.dim > MAX_ENUM_DIM {
        return Err(TriangError::TooLarge);
    }
    let circs = circuits(config).map_err(TriangError::Config)?;
    let mut seed = seed_triangulation(config);
    if seed.weight_certificate.is_none() {
        seed.weight_certificate = regularity_certificate(config, &seed.simplices);
    }
    let mut visited: BTreeMap<Vec<Vec<usize>>, Triangulation> = BTreeMap::new();
    let mut queue = vec![seed.clone()];
    visited.insert(seed.simplices.clone(), seed);
    while let Some(t) = queue.pop() {
        for c in &circs {
            let Ok(mut t2) = flip(config, &t, c) else { continue };
            if visited.contains_key(&t2.simplices) {
                continue;
            }
            let Some(cert) = regularity_certificate(config, &t2.simplices) else { continue };
            t2.weight_certificate = Some(cert);
            visited.insert(t2.simplices.clone(), t2.clone());
            queue.push(t2);
        }
    }
    Ok(visited.into_values().collect())
}

/// Brute-force enumeration (dimension at most 2): all simplicial covers of
/// the hull by frontier expansion, filtered by the regularity certificate.
pub fn brute_force_regular(
    config: &PointConfiguration,
) -> Result<Vec<Triangulation>, TriangError> {
    if config.points.len() > MAX_ENUM_POINTS || config.dim > 2 {
        return Err(TriangError::TooLarge);
    }
    let covers = match config.dim {
        1 => covers_1d(config),
        2 => covers_2d(config),
        _ => return Err(TriangError::TooLarge),
    };
    let mut out = Vec::new();
    for c in covers {
        if let Some(cert) = regularity_certificate(config, &c) {
            let mut t = Triangulation::new(c);
            t.weight_certificate = Some(cert);
            out.push(t);
        }
    }
    out.sort();
    Ok(out)
}

fn covers_1d(config: &PointConfiguration) -> Vec<Vec<Vec<usize>>> {
    // order points along the line; every subset of interior points gives one
    // subdivision into segments
    let mut order: Vec<usize> = (0..config.points.len()).collect();
    order.sort_by(|&a, &b| config.points[a][0].cmp(&config.points[b][0]));
    let interior: Vec<usize> = order[1..order.len() - 1].to_vec();
    let mut out = Vec::new();
    for mask in 0..(1u64 << interior.len()) {
        let mut chain = vec![order[0]];
        for (k, &p) in interior.iter().enumerate() {
            if mask & (1 << k) != 0 {
                chain.push(p);
            }
        }
        chain.push(order[order.len() - 1]);
        let cells: Vec<Vec<usize>> = chain
            .windows(2)
            .map(|w| {
                let mut s = vec![w[0], w[1]];
                s.sort_unstable();
                s
            })
            .collect();
        out.push(cells);
    }
    out
}

fn covers_2d(config: &PointConfiguration) -> Vec<Vec<Vec<usize>>> {
    let n = config.points.len();
    let hv = &config.hull_vertices;
    let mut start: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for k in 0..hv.len() {
        let e = (hv[k], hv[(k + 1) % hv.len()]);
        *start.entry(e).or_insert(0) += 1;
    }
    let mut results: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut tris: Vec<Vec<usize>> = Vec::new();
    rec_covers(config, n, &start, &mut tris, &mut results);
    results.into_iter().collect()
}

fn push_edge(
    config: &PointConfiguration,
    frontier: &mut BTreeMap<(usize, usize), usize>,
    u: usize,
    v: usize,
) {
    if u == v {
        return;
    }
    // a new directed edge cancels against its reverse if present
    if let Some(cnt) = frontier.get_mut(&(v, u)) {
        *cnt -= 1;
        if *cnt == 0 {
            frontier.remove(&(v, u));
        }
        return;
    }
    // chain reduction: an oppositely directed collinear edge whose segment
    // overlaps this one cancels along the overlap, leaving the remainders
    let param = |p: usize| -> Int {
        (0..config.dim)
            .map(|k| {
                (&config.points[p][k] - &config.points[u][k])
                    * (&config.points[v][k] - &config.points[u][k])
            })
            .sum()
    };
    let len = param(v);
    let overlap = frontier.keys().copied().find(|&(x, y)| {
        config.orient(u, v, x).is_zero()
            && config.orient(u, v, y).is_zero()
            && param(x) > param(y)
            && param(x).is_positive()
            && param(y) < len
    });
    if let Some((x, y)) = overlap {
        let cnt = frontier.get_mut(&(x, y)).unwrap();
        *cnt -= 1;
        if *cnt == 0 {
            frontier.remove(&(x, y));
        }
        let (tx, ty) = (param(x), param(y));
        // overlap interval endpoints, measured along u -> v
        let (lo, plo) = if ty.is_positive() { (ty, y) } else { (Int::zero(), u) };
        let (hi, phi) = if tx < len { (tx.clone(), x) } else { (len.clone(), v) };
        // remainders of the new edge
        if lo.is_positive() {
            push_edge(config, frontier, u, plo);
        }
        if hi < len {
            push_edge(config, frontier, phi, v);
        }
        // remainders of the old edge
        if tx > hi {
            push_edge(config, frontier, x, phi);
        }
        if param(y) < lo {
            push_edge(config, frontier, plo, y);
        }
        return;
    }
    *frontier.entry((u, v)).or_insert(0) += 1;
}

fn rec_covers(
    config: &PointConfiguration,
    n: usize,
    frontier: &BTreeMap<(usize, usize), usize>,
    tris: &mut Vec<Vec<usize>>,
    results: &mut BTreeSet<Vec<Vec<usize>>>,
) {
    let Some((&(a, b), _)) = frontier.iter().next() else {
        let mut sorted = tris.clone();
        sorted.sort();
        results.insert(sorted);
        return;
    };
    for c in 0..n {
        if c == a || c == b {
            continue;
        }
        let o = config.orient(a, b, c);
        if o.is_zero() {
            // split the frontier edge if c lies strictly between a and b
            let d: Int = (0..config.dim)
                .map(|k| {
                    (&config.points[b][k] - &config.points[a][k])
                        * (&config.points[c][k] - &config.points[a][k])
                })
                .sum();
            let len: Int = (0..config.dim)
                .map(|k| {
                    let e = &config.points[b][k] - &config.points[a][k];
                    &e * &e
                })
                .sum();
            if d.is_positive() && d < len {
                let mut f2 = frontier.clone();
                let cnt = f2.get_mut(&(a, b)).unwrap();
                *cnt -= 1;
                if *cnt == 0 {
                    f2.remove(&(a, b));
                }
                push_edge(config, &mut f2, a, c);
                push_edge(config, &mut f2, c, b);
                rec_covers(config, n, &f2, tris, results);
            }
            continue;
        }
        if o.is_negative() {
            continue;
        }
        let mut tri = vec![a, b, c];
        tri.sort_unstable();
        if tris.contains(&tri) {
            continue;
        }
        if tris.iter().any(|t| triangles_overlap(config, &tri, t)) {
            continue;
        }
        let mut f2 = frontier.clone();
        let cnt = f2.get_mut(&(a, b)).unwrap();
        *cnt -= 1;
        if *cnt == 0 {
            f2.remove(&(a, b));
        }
        push_edge(config, &mut f2, a, c);
        push_edge(config, &mut f2, c, b);
        tris.push(tri);
        rec_covers(config, n, &f2, tris, results);
        tris.pop();
    }
}

/// Exact separating-axis test for proper interior overlap of two triangles.
fn triangles_overlap(config: &PointConfiguration, t1: &[usize], t2: &[usize]) -> bool {
    let ccw = |t: &[usize]| -> Vec<usize> {
        if config.orient(t[0], t[1], t[2]).is_negative() {
            vec![t[0], t[2], t[1]]
        } else {
            t.to_vec()
        }
    };
    let p = ccw(t1);
    let q = ccw(t2);
    let sep = |p: &[usize], q: &[usize]| -> bool {
        for i in 0..3 {
            let a = p[i];
            let b = p[(i + 1) % 3];
            if q.iter().all(|&x| !config.orient(a, b, x).is_positive()) {
                return true;
            }
        }
        false
    };
    !(sep(&p, &q) || sep(&q, &p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(ps: &[&[i64]], origin: Option<usize>) -> PointConfiguration {
        let pts: Vec<Vec<Int>> =
            ps.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect();
        PointConfiguration::new(pts, origin).unwrap()
    }

    fn blowup() -> PointConfiguration {
        cfg(
            &[&[0, 0], &[-1, -1], &[1, 0], &[0, 1], &[1, 1], &[2, 1], &[1, 2]],
            Some(0),
        )
    }

    #[test]
    fn square_two_triangulations() {
        let c = cfg(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], None);
        let ts = regular_triangulations(&c).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(brute_force_regular(&c).unwrap().len(), 2);
        // flat lift gives the trivial subdivision
        let flat = regular_subdivision(&c, &vec![rat(0, 1); 4]);
        assert_eq!(flat.cells, vec![vec![0, 1, 2, 3]]);
        // symmetric lift cuts along the (1,0)-(0,1) diagonal
        let sub = regular_subdivision(&c, &[rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(sub.cells, vec![vec![0, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn triangle_unique() {
        let c = cfg(&[&[0, 0], &[1, 0], &[0, 1]], None);
        let ts = regular_triangulations(&c).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].volume_vector(&c), vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn blowup_counts() {
        let c = blowup();
        let ts = regular_triangulations(&c).unwrap();
        assert_eq!(ts.len(), 30);
        let brute = brute_force_regular(&c).unwrap();
        assert_eq!(brute.len(), 30);
        let a: Vec<_> = ts.iter().map(|t| t.simplices.clone()).collect();
        let b: Vec<_> = brute.iter().map(|t| t.simplices.clone()).collect();
        assert_eq!(a, b);
        // phi is injective and phi^0 spans the expected histogram
        let mut phis = BTreeSet::new();
        let mut hist: BTreeMap<Int, usize> = BTreeMap::new();
        for t in &ts {
            let phi = t.volume_vector(&c);
            *hist.entry(phi[0].clone()).or_insert(0) += 1;
            assert!(phis.insert(phi));
        }
        let expect: BTreeMap<Int, usize> =
            [(0, 10), (3, 3), (4, 6), (5, 7), (6, 3), (7, 1)]
                .into_iter()
                .map(|(k, v)| (int(k), v))
                .collect();
        assert_eq!(hist, expect);
    }

    #[test]
    fn certificates_recover() {
        let c = blowup();
        for t in regular_triangulations(&c).unwrap() {
            let w = t.weight_certificate.clone().unwrap();
            let sub = regular_subdivision(&c, &w);
            assert_eq!(sub.cells, t.simplices);
            // volume conservation
            let total: Int = t.simplices.iter().map(|s| c.simplex_volume(s)).sum();
            assert_eq!(total, c.volume);
        }
    }

    #[test]
    fn flips_are_involutive() {
        let c = blowup();
        let circs = circuits(&c).unwrap();
        let ts = regular_triangulations(&c).unwrap();
        let mut flips = 0;
        for t in &ts {
            for circ in &circs {
                if let Ok(t2) = flip(&c, t, circ) {
                    flips += 1;
                    let back = flip(&c, &t2, circ).unwrap();
                    assert_eq!(back.simplices, t.simplices);
                }
            }
        }
        assert!(flips > 0);
    }

    #[test]
    fn hirzebruch_counts() {
        for n in 2..=6 {
            let c = cfg(&[&[0, 0], &[1, 0], &[0, 1], &[-1, 0], &[-n, -1]], Some(0));
            let ts = regular_triangulations(&c).unwrap();
            assert_eq!(ts.len(), 4, "n = {n}");
            assert_eq!(brute_force_regular(&c).unwrap().len(), 4);
        }
    }

    #[test]
    fn one_dimensional() {
        let c = cfg(&[&[0], &[1], &[2]], None);
        let ts = regular_triangulations(&c).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(brute_force_regular(&c).unwrap().len(), 2);
    }

    #[test]
    fn too_large() {
        let pts: Vec<Vec<Int>> = (0..13).map(|i| vec![int(i), int(i * i)]).collect();
        let c = PointConfiguration::new(pts, None).unwrap();
        assert_eq!(regular_triangulations(&c), Err(TriangError::TooLarge));
    }
}
