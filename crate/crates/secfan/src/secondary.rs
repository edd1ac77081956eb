//! The secondary (GKZ) fan of a marked configuration: chambers in the
//! character space, walls, fan-type classification and cell location.
//!
//! Coordinates: weight vectors live in `R^A`; they are projected to the
//! character space via `pi(w) = gamma . (w_rays - w_origin * 1)`, which kills
//! exactly the lifted affine functions. Characters built from the rays alone
//! (via the divisor sequence) land in the same space, so A-side and B-side
//! data are directly comparable.

use crate::circuit::{circuits, Circuit};
use crate::config::{ConfigError, PointConfiguration};
use crate::divisor::{build_divisor_sequence, DivisorError, DivisorSequence};
use crate::lp::strict_feasible_eq;
use crate::matrix::{dot_rat, primitive_from_rational, IntMatrix};
use crate::prelude::*;
use crate::triang::{flip, regular_triangulations, TriangError, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecError {
    NoOrigin,
    Triang(TriangError),
    Divisor(DivisorError),
    Config(ConfigError),
}

impl core::fmt::Display for SecError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SecError::NoOrigin => write!(f, "configuration has no marked origin"),
            SecError::Triang(e) => write!(f, "{e}"),
            SecError::Divisor(e) => write!(f, "{e}"),
            SecError::Config(e) => write!(f, "{e}"),
        }
    }
}

/// The star of the origin as a simplicial stacky fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    /// Point indices of the ray generators (the link of the origin).
    pub rays: Vec<usize>,
    /// Maximal cones as sorted lists of point indices.
    pub cones: Vec<Vec<usize>>,
    /// Lattice index (normalized volume) per maximal cone.
    pub multiplicities: Vec<Int>,
}

#[derive(Clone, Debug)]
pub struct Chamber {
    pub id: usize,
    pub triangulation: Triangulation,
    /// Primitive inward facet normals in character coordinates: the closed
    /// chamber is exactly where all of them pair nonnegatively.
    pub facets: Vec<Vec<Int>>,
    /// A strictly interior character (projected regularity certificate).
    pub interior: Vec<Rat>,
    pub fan_type: Option<StackyFan>,
    /// The volume vector of the triangulation.
    pub phi: Vec<Int>,
}

#[derive(Clone, Debug)]
pub struct Wall {
    pub id: usize,
    /// The two incident chamber ids, smaller first.
    pub chambers: (usize, usize),
    pub circuit: Circuit,
    /// Primitive hyperplane normal in character coordinates, oriented so the
    /// pairing with `chambers.1` is positive.
    pub normal: Vec<Int>,
    /// A character in the relative interior of the wall.
    pub interior: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct SecondaryFan {
    pub config: PointConfiguration,
    pub seq: DivisorSequence,
    /// Rank of the character space.
    pub rank: usize,
    pub chambers: Vec<Chamber>,
    pub walls: Vec<Wall>,
    /// Point index of the origin.
    pub origin: usize,
    /// Ray order: point indices of the non-origin points, in configuration
    /// order; column `j` of the projection corresponds to `ray_points[j]`.
    pub ray_points: Vec<usize>,
    /// The projection matrix from weight space `R^A` to character space.
    pub projection: IntMatrix,
}

/// Where a character sits in the fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocatedCell {
    /// Ids of all chambers whose closure contains the character.
    pub chambers: Vec<usize>,
    /// Codimension of the cell whose relative interior contains it.
    pub codim: usize,
    /// Wall id when the cell is a wall.
    pub wall: Option<usize>,
    /// True when every incident chamber's triangulation avoids the origin
    /// (the character is outside the GIT region).
    pub outside: bool,
}

impl SecondaryFan {
    pub fn build(config: &PointConfiguration) -> Result<Self, SecError> {
        let origin = config.origin_index.ok_or(SecError::NoOrigin)?;
        let ray_points: Vec<usize> =
            (0..config.points.len()).filter(|&i| i != origin).collect();
        let rays: Vec<Vec<Int>> =
            ray_points.iter().map(|&i| config.points[i].clone()).collect();
        let seq = build_divisor_sequence(&rays).map_err(SecError::Divisor)?;
        let rank = seq.rank_ghat;
        // projection R^A -> character space: gamma . (w_rays - w_origin * 1)
        let mut projection = IntMatrix::zero(rank, config.points.len());
        for r in 0..rank {
            let mut origin_coef = Int::zero();
            for (j, &p) in ray_points.iter().enumerate() {
                let g = seq.gamma.at(r, j).clone();
                origin_coef -= &g;
                *projection.at_mut(r, p) = g;
            }
            *projection.at_mut(r, origin) = origin_coef;
        }
        let triangulations = regular_triangulations(config).map_err(SecError::Triang)?;
        let circs = circuits(config).map_err(SecError::Config)?;
        let mut chambers = Vec::new();
        for (id, t) in triangulations.iter().enumerate() {
            let cert = t.weight_certificate.clone().expect("enumerated with certificate");
            let interior = project(&projection, &cert);
            let facets = chamber_facets(config, &projection, t);
            let fan_type = fan_type_of(config, t, origin);
            let phi = t.volume_vector(config);
            chambers.push(Chamber {
                id,
                triangulation: t.clone(),
                facets,
                interior,
                fan_type,
                phi,
            });
        }
        // walls: flip-adjacent chamber pairs
        let index: BTreeMap<Vec<Vec<usize>>, usize> = chambers
            .iter()
            .map(|c| (c.triangulation.simplices.clone(), c.id))
            .collect();
        let mut walls = Vec::new();
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for c in &chambers {
            for circ in &circs {
                let Ok(t2) = flip(config, &c.triangulation, circ) else { continue };
                let Some(&other) = index.get(&t2.simplices) else { continue };
                let pair = (c.id.min(other), c.id.max(other));
                if !seen.insert(pair) {
                    continue;
                }
                let id = walls.len();
                let normal = wall_normal(&projection, &chambers, circ, pair, config)?;
                let interior =
                    wall_interior(config, &projection, &chambers[pair.0].triangulation, circ)?;
                walls.push(Wall { id, chambers: pair, circuit: circ.clone(), normal, interior });
            }
        }
        Ok(SecondaryFan {
            config: config.clone(),
            seq,
            rank,
            chambers,
            walls,
            origin,
            ray_points,
            projection,
        })
    }

    /// Project a weight vector over `A` to character coordinates.
    pub fn project_weight(&self, w: &[Rat]) -> Vec<Rat> {
        project(&self.projection, w)
    }

    /// The character class of a single ray point (the class of its divisor).
    pub fn beta_of_point(&self, point: usize) -> Option<&Vec<Int>> {
        let j = self.ray_points.iter().position(|&p| p == point)?;
        Some(&self.seq.beta[j])
    }

    /// Locate the cell whose relative interior contains the character.
    pub fn locate(&self, chi: &[Rat]) -> LocatedCell {
        assert_eq!(chi.len(), self.rank);
        let mut containing = Vec::new();
        let mut tight: Vec<Vec<Int>> = Vec::new();
        for c in &self.chambers {
            let mut inside = true;
            let mut my_tight = Vec::new();
            for f in &c.facets {
                let v = dot_rat(f, chi);
                if v.is_negative() {
                    inside = false;
                    break;
                }
                if v.is_zero() {
                    my_tight.push(f.clone());
                }
            }
            if inside {
                containing.push(c.id);
                tight.extend(my_tight);
            }
        }
        let codim = if tight.is_empty() {
            0
        } else {
            IntMatrix::from_rows(&tight).rank()
        };
        let wall = if codim == 1 && containing.len() == 2 {
            self.walls
                .iter()
                .find(|w| {
                    (w.chambers.0 == containing[0] && w.chambers.1 == containing[1])
                        || (w.chambers.0 == containing[1] && w.chambers.1 == containing[0])
                })
                .map(|w| w.id)
        } else {
            None
        };
        let outside = !containing.is_empty()
            && containing
                .iter()
                .all(|&id| self.chambers[id].fan_type.is_none());
        LocatedCell { chambers: containing, codim, wall, outside }
    }

    /// The wall between two chamber ids, if any.
    pub fn wall_between(&self, a: usize, b: usize) -> Option<&Wall> {
        let pair = (a.min(b), a.max(b));
        self.walls.iter().find(|w| w.chambers == pair)
    }
}

fn project(projection: &IntMatrix, w: &[Rat]) -> Vec<Rat> {
    (0..projection.rows).map(|r| dot_rat(&projection.row(r), w)).collect()
}

/// Solve `g . projection = row` for the descended functional `g` (exists
/// exactly when `row` kills the lifted affine functions) and primitivize.
fn descend(projection: &IntMatrix, row: &[Rat]) -> Vec<Rat> {
    projection
        .solve_left_rational(row)
        .expect("functional does not descend to character space")
}

fn chamber_facets(
    config: &PointConfiguration,
    projection: &IntMatrix,
    t: &Triangulation,
) -> Vec<Vec<Int>> {
    let n = config.points.len();
    let mut out: BTreeSet<Vec<Int>> = BTreeSet::new();
    for s in &t.simplices {
        for p in 0..n {
            if s.contains(&p) {
                continue;
            }
            let coords = config.affine_coords(s, &config.points[p]).expect("simplex");
            let mut row = vec![Rat::zero(); n];
            row[p] += Rat::one();
            for (c, &i) in coords.iter().zip(s) {
                row[i] = &row[i] - c;
            }
            let g = descend(projection, &row);
            if g.iter().all(|x| x.is_zero()) {
                continue;
            }
            out.insert(primitive_from_rational(&g).expect("nonzero"));
        }
    }
    out.into_iter().collect()
}

fn fan_type_of(
    config: &PointConfiguration,
    t: &Triangulation,
    origin: usize,
) -> Option<StackyFan> {
    if !t.used_points().contains(&origin) {
        return None;
    }
    let mut rays = BTreeSet::new();
    let mut cones = Vec::new();
    let mut multiplicities = Vec::new();
    for s in &t.simplices {
        if !s.contains(&origin) {
            continue;
        }
        let cone: Vec<usize> = s.iter().copied().filter(|&p| p != origin).collect();
        rays.extend(cone.iter().copied());
        multiplicities.push(config.simplex_volume(s));
        cones.push(cone);
    }
    Some(StackyFan { rays: rays.into_iter().collect(), cones, multiplicities })
}

/// Primitive descended circuit relation, oriented toward the second chamber.
fn wall_normal(
    projection: &IntMatrix,
    chambers: &[Chamber],
    circ: &Circuit,
    pair: (usize, usize),
    config: &PointConfiguration,
) -> Result<Vec<Int>, SecError> {
    let n = config.points.len();
    let mut row = vec![Rat::zero(); n];
    for (&p, c) in circ.support.iter().zip(&circ.relation) {
        row[p] = rat_int(c);
    }
    let g = descend(projection, &row);
    let mut normal = primitive_from_rational(&g).expect("circuit relation is nonzero");
    let v = dot_rat(&normal, &chambers[pair.1].interior);
    assert!(!v.is_zero(), "interior point on wall hyperplane");
    if v.is_negative() {
        for x in normal.iter_mut() {
            let nx = -x.clone();
            *x = nx;
        }
    }
    Ok(normal)
}

/// Character in the wall's relative interior: the projected weight of a lift
/// inducing exactly the coarse subdivision at the flip (circuit region merged,
/// everything else unchanged).
fn wall_interior(
    config: &PointConfiguration,
    projection: &IntMatrix,
    t_from: &Triangulation,
    circ: &Circuit,
) -> Result<Vec<Rat>, SecError> {
    let n = config.points.len();
    // merged cells: simplices not meeting the flip region stay; the flip
    // region cells are support(circuit) union link elements
    let support: BTreeSet<usize> = circ.support.iter().copied().collect();
    let pos = circ.positive_part();
    let neg = circ.negative_part();
    let mut region: Vec<Vec<usize>> = Vec::new();
    let mut keep: Vec<Vec<usize>> = Vec::new();
    // find which side t_from realizes by membership of its cells
    let side_cells = |side: &[usize]| -> BTreeSet<Vec<usize>> {
        side.iter()
            .map(|&a| {
                let c: Vec<usize> = support.iter().copied().filter(|&x| x != a).collect();
                c
            })
            .collect()
    };
    let pcells = side_cells(&pos);
    let ncells = side_cells(&neg);
    let mut links: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in &t_from.simplices {
        let sset: BTreeSet<usize> = s.iter().copied().collect();
        let from_cell = pcells
            .iter()
            .chain(ncells.iter())
            .find(|c| c.iter().all(|x| sset.contains(x)));
        if let Some(c) = from_cell {
            let link: Vec<usize> = s.iter().copied().filter(|x| !c.contains(x)).collect();
            links.insert(link);
        } else {
            keep.push(s.clone());
        }
    }
    for l in &links {
        let mut cell: Vec<usize> = support.iter().copied().chain(l.iter().copied()).collect();
        cell.sort_unstable();
        cell.dedup();
        region.push(cell);
    }
    // strict rows: every cell against outside points; equality rows: extra
    // cell points against a base simplex of the cell
    let mut strict = Vec::new();
    let mut eqs = Vec::new();
    let all_cells: Vec<&Vec<usize>> = keep.iter().chain(region.iter()).collect();
    for cell in all_cells {
        // base simplex: first (dim+1)-subset with nonzero volume
        let base = find_base_simplex(config, cell);
        for p in 0..n {
            let coords = config.affine_coords(&base, &config.points[p]).expect("base");
            let mut row = vec![Rat::zero(); n];
            row[p] += Rat::one();
            for (c, &i) in coords.iter().zip(&base) {
                row[i] = &row[i] - c;
            }
            if cell.contains(&p) {
                if !base.contains(&p) {
                    eqs.push(row);
                }
            } else {
                strict.push(row);
            }
        }
    }
    let w = strict_feasible_eq(&strict, &eqs, n)
        .expect("wall subdivision must admit a strictly compatible lift");
    Ok(project(projection, &w))
}

fn find_base_simplex(config: &PointConfiguration, cell: &[usize]) -> Vec<usize> {
    let d = config.dim;
    for subset in crate::circuit::combinations(cell.len(), d + 1) {
        let s: Vec<usize> = subset.iter().map(|&k| cell[k]).collect();
        if !config.simplex_volume(&s).is_zero() {
            return s;
        }
    }
    panic!("cell has no full-dimensional simplex");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan_of(ps: &[&[i64]]) -> SecondaryFan {
        let pts: Vec<Vec<Int>> =
            ps.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect();
        let c = PointConfiguration::new(pts, Some(0)).unwrap();
        SecondaryFan::build(&c).unwrap()
    }

    fn blowup_fan() -> SecondaryFan {
        fan_of(&[&[0, 0], &[-1, -1], &[1, 0], &[0, 1], &[1, 1], &[2, 1], &[1, 2]])
    }

    #[test]
    fn p2_chambers() {
        let f = fan_of(&[&[0, 0], &[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(f.rank, 1);
        assert_eq!(f.chambers.len(), 2);
        assert_eq!(f.chambers.iter().filter(|c| c.fan_type.is_some()).count(), 1);
        assert_eq!(f.walls.len(), 1);
        // wall at the origin of the rank-1 character space
        assert!(f.walls[0].interior.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn blowup_chambers_and_walls() {
        let f = blowup_fan();
        assert_eq!(f.rank, 4);
        assert_eq!(f.chambers.len(), 30);
        assert_eq!(f.chambers.iter().filter(|c| c.fan_type.is_some()).count(), 20);
        // interior points locate back to their own chamber
        for c in &f.chambers {
            let loc = f.locate(&c.interior);
            assert_eq!(loc.chambers, vec![c.id]);
            assert_eq!(loc.codim, 0);
        }
        // wall interiors locate to the wall, with opposite-sign pairings
        for w in &f.walls {
            let loc = f.locate(&w.interior);
            assert_eq!(loc.codim, 1, "wall {}", w.id);
            assert_eq!(loc.wall, Some(w.id));
            let a = dot_rat(&w.normal, &f.chambers[w.chambers.0].interior);
            let b = dot_rat(&w.normal, &f.chambers[w.chambers.1].interior);
            assert!(a.is_negative() && b.is_positive());
        }
        // the zero character is the origin cell
        let zero = vec![rat(0, 1); 4];
        let loc = f.locate(&zero);
        assert_eq!(loc.codim, 4);
        assert_eq!(loc.chambers.len(), 30);
    }

    #[test]
    fn hirzebruch_fan_type() {
        for n in 2..=6i64 {
            let f = fan_of(&[&[0, 0], &[1, 0], &[0, 1], &[-1, 0], &[-n, -1]]);
            assert_eq!(f.chambers.len(), 4, "n = {n}");
            assert_eq!(
                f.chambers.iter().filter(|c| c.fan_type.is_some()).count(),
                2,
                "n = {n}"
            );
        }
    }

    #[test]
    fn stacky_fan_contents() {
        let f = blowup_fan();
        // the X' chamber: unique fan-type chamber with phi at origin = 7
        let xp: Vec<&Chamber> = f
            .chambers
            .iter()
            .filter(|c| c.phi[0] == int(7))
            .collect();
        assert_eq!(xp.len(), 1);
        let sf = xp[0].fan_type.as_ref().unwrap();
        assert_eq!(sf.rays.len(), 5);
        // one cone has multiplicity 3 (spanned by (2,1) and (1,2))
        let mut mults = sf.multiplicities.clone();
        mults.sort();
        assert_eq!(mults.last().unwrap(), &int(3));
        let total: Int = sf.multiplicities.iter().cloned().sum();
        assert_eq!(total, int(7));
        // the X chamber has origin star volume 6
        let x: Vec<&Chamber> = f
            .chambers
            .iter()
            .filter(|c| c.phi[0] == int(6))
            .collect();
        assert_eq!(x.len(), 3);
        assert!(x.iter().any(|c| {
            c.fan_type
                .as_ref()
                .map(|s| s.multiplicities.iter().all(|m| m == &Int::one()))
                .unwrap_or(false)
        }));
    }
}
