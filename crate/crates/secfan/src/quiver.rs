//! Graded quivers with relations, finite-dimensional path algebras in
//! normal form, and dg structures on them.
//!
//! Relations are linear combinations of parallel paths. Instead of string
//! rewriting, the quotient is computed exactly: the two-sided ideal spanned
//! by all path extensions of the relations is put in reduced echelon form
//! over the (finite) set of paths, ordered by length then lexicographically.
//! This sidesteps confluence failures of naive rewriting while giving the
//! same length-lex normal forms.

use crate::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuiverError {
    /// An arrow endpoint is out of range.
    BadArrow(usize),
    /// A relation mixes paths with different endpoints or degrees.
    Inhomogeneous(usize),
    /// The path algebra is infinite-dimensional (or too large): no finite
    /// normal-form basis within the step budget.
    NonConfluent,
    /// A differential value is attached to an unknown arrow label.
    UnknownArrow(String),
}

impl core::fmt::Display for QuiverError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuiverError::BadArrow(i) => write!(f, "arrow {i} has an endpoint out of range"),
            QuiverError::Inhomogeneous(i) => {
                write!(f, "relation {i} is not homogeneous in (source, target, degree)")
            }
            QuiverError::NonConfluent => {
                write!(f, "no finite normal-form basis within the step budget")
            }
            QuiverError::UnknownArrow(l) => write!(f, "unknown arrow label {l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub degree: i64,
    pub label: String,
}

/// A composable sequence of arrows; `arrows` lists indices in application
/// order (first applied first). An empty sequence is the idempotent at
/// `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn idempotent(v: usize) -> Self {
        Path { source: v, arrows: Vec::new() }
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.arrows.len(), &self.arrows, self.source).cmp(&(
            other.arrows.len(),
            &other.arrows,
            other.source,
        ))
    }
}

/// A linear combination of paths with rational coefficients.
pub type Lin = BTreeMap<Path, Rat>;

pub fn lin_add_scaled(acc: &mut Lin, other: &Lin, scale: &Rat) {
    if scale.is_zero() {
        return;
    }
    for (p, c) in other {
        let entry = acc.entry(p.clone()).or_insert_with(Rat::zero);
        *entry += c * scale;
        if entry.is_zero() {
            acc.remove(p);
        }
    }
}

fn lin_leading(lin: &Lin) -> Option<(&Path, &Rat)> {
    lin.iter().next_back()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedQuiver {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Lin>,
}

impl GradedQuiver {
    pub fn new(vertices: usize, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= vertices || a.target >= vertices {
                return Err(QuiverError::BadArrow(i));
            }
        }
        Ok(GradedQuiver { vertices, arrows, relations: Vec::new() })
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn path_target(&self, p: &Path) -> usize {
        p.arrows.last().map(|&i| self.arrows[i].target).unwrap_or(p.source)
    }

    pub fn path_degree(&self, p: &Path) -> i64 {
        p.arrows.iter().map(|&i| self.arrows[i].degree).sum()
    }

    /// Compose `later` after `earlier`; `None` when the endpoints mismatch.
    pub fn compose(&self, later: &Path, earlier: &Path) -> Option<Path> {
        if later.source != self.path_target(earlier) {
            return None;
        }
        let mut arrows = earlier.arrows.clone();
        arrows.extend_from_slice(&later.arrows);
        Some(Path { source: earlier.source, arrows })
    }

    /// Build a path from arrow labels written in composition order: the
    /// first label is applied last, matching the usual left-to-right
    /// notation for a composite like "c4 s b0".
    pub fn path_named(&self, names: &[&str]) -> Result<Path, QuiverError> {
        let mut arrows = Vec::new();
        for name in names.iter().rev() {
            let i = self
                .arrow_index(name)
                .ok_or_else(|| QuiverError::UnknownArrow((*name).to_owned()))?;
            arrows.push(i);
        }
        let source = arrows
            .first()
            .map(|&i| self.arrows[i].source)
            .unwrap_or(0);
        Ok(Path { source, arrows })
    }

    /// Add a relation given as (coefficient, labels-in-composition-order)
    /// pairs, asserting endpoint and degree homogeneity later at build time.
    pub fn relate(&mut self, terms: &[(i64, &[&str])]) -> Result<(), QuiverError> {
        let mut lin = Lin::new();
        for (c, names) in terms {
            let p = self.path_named(names)?;
            let entry = lin.entry(p).or_insert_with(Rat::zero);
            *entry += Rat::from_integer(int(*c));
        }
        lin.retain(|_, c| !c.is_zero());
        self.relations.push(lin);
        Ok(())
    }

    pub fn path_label(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e{}", p.source);
        }
        let parts: Vec<&str> =
            p.arrows.iter().rev().map(|&i| self.arrows[i].label.as_str()).collect();
        parts.join(" ")
    }
}

/// A reduced linear echelon basis of a subspace of the path algebra, keyed
/// by leading (largest) path; every row is monic in its leading term.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    rows: BTreeMap<Path, Lin>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub(crate) fn reduce(&self, lin: &Lin) -> Lin {
        let mut out = lin.clone();
        loop {
            let Some(hit) = out
                .iter()
                .rev()
                .find(|(p, _)| self.rows.contains_key(*p))
                .map(|(p, c)| (p.clone(), c.clone()))
            else {
                break;
            };
            let row = self.rows[&hit.0].clone();
            lin_add_scaled(&mut out, &row, &-hit.1);
        }
        out
    }

    /// Insert a vector; returns false when it was already in the span.
    pub(crate) fn insert(&mut self, lin: &Lin) -> bool {
        let mut r = self.reduce(lin);
        let Some((lead, coeff)) = lin_leading(&r).map(|(p, c)| (p.clone(), c.clone())) else {
            return false;
        };
        let inv = Rat::one() / coeff;
        for c in r.values_mut() {
            *c *= &inv;
        }
        self.rows.insert(lead, r);
        true
    }

    pub(crate) fn contains_leading(&self, p: &Path) -> bool {
        self.rows.contains_key(p)
    }

    /// Reduce and report the coefficients used against each row, keyed by
    /// the row's leading path.
    pub(crate) fn reduce_tracked(&self, lin: &Lin) -> (Lin, Vec<(Path, Rat)>) {
        let mut out = lin.clone();
        let mut used = Vec::new();
        loop {
            let Some(hit) = out
                .iter()
                .rev()
                .find(|(p, _)| self.rows.contains_key(*p))
                .map(|(p, c)| (p.clone(), c.clone()))
            else {
                break;
            };
            let row = self.rows[&hit.0].clone();
            lin_add_scaled(&mut out, &row, &-hit.1.clone());
            used.push(hit);
        }
        (out, used)
    }
}

/// Enumerate every path of the quiver, shortest first; errors out once more
/// than `max_steps` paths exist (infinite path algebra).
fn all_paths(q: &GradedQuiver, max_steps: usize) -> Result<Vec<Path>, QuiverError> {
    let mut paths: Vec<Path> = (0..q.vertices).map(Path::idempotent).collect();
    let mut frontier = paths.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            let end = q.path_target(p);
            for (i, a) in q.arrows.iter().enumerate() {
                if a.source == end {
                    let mut arrows = p.arrows.clone();
                    arrows.push(i);
                    next.push(Path { source: p.source, arrows });
                }
            }
        }
        paths.extend(next.iter().cloned());
        if paths.len() > max_steps {
            return Err(QuiverError::NonConfluent);
        }
        frontier = next;
    }
    paths.sort();
    Ok(paths)
}

/// Normal-form basis of the path algebra modulo the relation ideal.
pub fn normalize_paths(q: &GradedQuiver, max_steps: usize) -> Result<Vec<Path>, QuiverError> {
    let alg = DGQuiverAlgebra::new(q.clone(), &[], max_steps)?;
    Ok(alg.basis)
}

/// A finite-dimensional path algebra with relations and a differential,
/// everything expressed over the normal-form basis.
#[derive(Clone, Debug)]
pub struct DGQuiverAlgebra {
    pub quiver: GradedQuiver,
    /// Normal-form paths, sorted by length then lexicographically.
    pub basis: Vec<Path>,
    /// Differential values on arrows, already reduced.
    pub differential: BTreeMap<usize, Lin>,
    ideal: Echelon,
}

impl DGQuiverAlgebra {
    /// Build the algebra; `differential` pairs arrow labels with their
    /// values (composition-order label lists with coefficients).
    pub fn new(
        quiver: GradedQuiver,
        differential: &[(&str, &[(i64, &[&str])])],
        max_steps: usize,
    ) -> Result<Self, QuiverError> {
        for (i, a) in quiver.arrows.iter().enumerate() {
            if a.source >= quiver.vertices || a.target >= quiver.vertices {
                return Err(QuiverError::BadArrow(i));
            }
        }
        for (i, r) in quiver.relations.iter().enumerate() {
            let mut sig: Option<(usize, usize, i64)> = None;
            for p in r.keys() {
                let s = (p.source, quiver.path_target(p), quiver.path_degree(p));
                match &sig {
                    None => sig = Some(s),
                    Some(prev) if *prev != s => return Err(QuiverError::Inhomogeneous(i)),
                    _ => {}
                }
            }
        }
        let paths = all_paths(&quiver, max_steps)?;
        let mut ideal = Echelon::new();
        for r in &quiver.relations {
            let Some((any, _)) = r.iter().next() else { continue };
            let (src, tgt) = (any.source, quiver.path_target(any));
            for left in paths.iter().filter(|p| p.source == tgt) {
                for right in paths.iter().filter(|p| quiver.path_target(p) == src) {
                    let mut ext = Lin::new();
                    for (p, c) in r {
                        let with_right = quiver.compose(p, right).expect("endpoints agree");
                        let full =
                            quiver.compose(left, &with_right).expect("endpoints agree");
                        ext.insert(full, c.clone());
                    }
                    ideal.insert(&ext);
                }
            }
        }
        let basis: Vec<Path> =
            paths.into_iter().filter(|p| !ideal.contains_leading(p)).collect();
        let mut diff = BTreeMap::new();
        for (label, terms) in differential {
            let idx = quiver
                .arrow_index(label)
                .ok_or_else(|| QuiverError::UnknownArrow((*label).to_owned()))?;
            let mut lin = Lin::new();
            for (c, names) in *terms {
                let p = quiver.path_named(names)?;
                let entry = lin.entry(p).or_insert_with(Rat::zero);
                *entry += Rat::from_integer(int(*c));
            }
            diff.insert(idx, ideal.reduce(&lin));
        }
        Ok(DGQuiverAlgebra { quiver, basis, differential: diff, ideal })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn reduce(&self, lin: &Lin) -> Lin {
        self.ideal.reduce(lin)
    }

    /// Reduced single-path element.
    pub fn element(&self, p: &Path) -> Lin {
        let mut lin = Lin::new();
        lin.insert(p.clone(), Rat::one());
        self.reduce(&lin)
    }

    /// Reduced element from labels in composition order.
    pub fn element_named(&self, names: &[&str]) -> Result<Lin, QuiverError> {
        Ok(self.element(&self.quiver.path_named(names)?))
    }

    /// Product x * y (x applied after y), reduced to the basis.
    pub fn mul(&self, x: &Lin, y: &Lin) -> Lin {
        let mut out = Lin::new();
        for (p, c) in x {
            for (q, d) in y {
                if let Some(pq) = self.quiver.compose(p, q) {
                    let entry = out.entry(pq).or_insert_with(Rat::zero);
                    *entry += c * d;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        self.reduce(&out)
    }

    fn d_path(&self, p: &Path) -> Lin {
        let mut out = Lin::new();
        let mut sign_parity = 0i64;
        // Leibniz: differentiate each arrow slot; the sign collects the
        // degrees of the arrows applied after it.
        for pos in (0..p.arrows.len()).rev() {
            let idx = p.arrows[pos];
            if let Some(dv) = self.differential.get(&idx) {
                let before = Path { source: p.source, arrows: p.arrows[..pos].to_vec() };
                let after_src = self.quiver.arrows[idx].target;
                let after = Path { source: after_src, arrows: p.arrows[pos + 1..].to_vec() };
                let sign = if sign_parity % 2 == 0 { Rat::one() } else { -Rat::one() };
                for (mid, c) in dv {
                    let with_before =
                        self.quiver.compose(mid, &before).expect("endpoints agree");
                    let full = self
                        .quiver
                        .compose(&after, &with_before)
                        .expect("endpoints agree");
                    let entry = out.entry(full).or_insert_with(Rat::zero);
                    *entry += c * &sign;
                }
            }
            sign_parity += self.quiver.arrows[idx].degree;
        }
        out.retain(|_, c| !c.is_zero());
        self.reduce(&out)
    }

    /// Differential of a reduced element.
    pub fn d(&self, lin: &Lin) -> Lin {
        let mut out = Lin::new();
        for (p, c) in lin {
            lin_add_scaled(&mut out, &self.d_path(p), c);
        }
        self.reduce(&out)
    }

    /// Degree of a homogeneous element; `None` for 0 or mixed degrees.
    pub fn degree(&self, lin: &Lin) -> Option<i64> {
        let mut deg = None;
        for p in lin.keys() {
            let d = self.quiver.path_degree(p);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn label(&self, lin: &Lin) -> String {
        if lin.is_empty() {
            return "0".to_owned();
        }
        let parts: Vec<String> = lin
            .iter()
            .map(|(p, c)| {
                if c == &Rat::one() {
                    self.quiver.path_label(p)
                } else {
                    format!("{c}*{}", self.quiver.path_label(p))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Check that the differential squares to zero, raises degree by exactly
/// one, respects the ideal, and satisfies the Leibniz rule on all products
/// of basis paths. Returns the verdict and the first violation found.
pub fn validate_dg(a: &DGQuiverAlgebra) -> (bool, Option<String>) {
    for (idx, dv) in &a.differential {
        let want = a.quiver.arrows[*idx].degree + 1;
        for p in dv.keys() {
            if a.quiver.path_degree(p) != want
                || p.source != a.quiver.arrows[*idx].source
                || a.quiver.path_target(p) != a.quiver.arrows[*idx].target
            {
                return (
                    false,
                    Some(format!(
                        "d({}) is not parallel of degree +1",
                        a.quiver.arrows[*idx].label
                    )),
                );
            }
        }
    }
    for r in &a.quiver.relations {
        let mut lin = Lin::new();
        for (p, c) in r {
            lin_add_scaled(&mut lin, &a.d_path(p), c);
        }
        if !a.reduce(&lin).is_empty() {
            return (false, Some("differential does not preserve the relation ideal".into()));
        }
    }
    for p in &a.basis {
        let e = a.element(p);
        if !a.d(&a.d(&e)).is_empty() {
            return (false, Some(format!("d^2 != 0 on {}", a.quiver.path_label(p))));
        }
    }
    for p in &a.basis {
        for q in &a.basis {
            if p.source != a.quiver.path_target(q) {
                continue;
            }
            let ep = a.element(p);
            let eq = a.element(q);
            let lhs = a.d(&a.mul(&ep, &eq));
            let mut rhs = a.mul(&a.d(&ep), &eq);
            let sign = if a.quiver.path_degree(p) % 2 == 0 { Rat::one() } else { -Rat::one() };
            lin_add_scaled(&mut rhs, &a.mul(&ep, &a.d(&eq)), &sign);
            if lhs != rhs {
                return (
                    false,
                    Some(format!(
                        "Leibniz fails on {} * {}",
                        a.quiver.path_label(p),
                        a.quiver.path_label(q)
                    )),
                );
            }
        }
    }
    (true, None)
}

fn arrow(source: usize, target: usize, degree: i64, label: &str) -> Arrow {
    Arrow { source, target, degree, label: label.to_owned() }
}

/// The three-vertex quiver with two commuting triples of parallel arrows;
/// its path algebra has dimension 15.
pub fn beilinson_quiver() -> GradedQuiver {
    let arrows = vec![
        arrow(0, 1, 0, "a0"),
        arrow(0, 1, 0, "a1"),
        arrow(0, 1, 0, "a2"),
        arrow(1, 2, 0, "b0"),
        arrow(1, 2, 0, "b1"),
        arrow(1, 2, 0, "b2"),
    ];
    let mut q = GradedQuiver::new(3, arrows).expect("valid quiver");
    let names = ["a0", "a1", "a2"];
    let bnames = ["b0", "b1", "b2"];
    for i in 0..3 {
        for j in (i + 1)..3 {
            q.relate(&[(1, &[bnames[j], names[i]]), (-1, &[bnames[i], names[j]])])
                .expect("valid relation");
        }
    }
    q
}

/// Six-vertex quiver: three commuting parallel arrows twice, a bridge t,
/// and two terminal pairs (c, d) with d of degree one.
pub fn scissors_quiver() -> GradedQuiver {
    let arrows = vec![
        arrow(0, 1, 0, "a0"),
        arrow(0, 1, 0, "a1"),
        arrow(0, 1, 0, "a2"),
        arrow(1, 2, 0, "b0"),
        arrow(1, 2, 0, "b1"),
        arrow(1, 2, 0, "b2"),
        arrow(2, 3, 0, "t"),
        arrow(3, 4, 0, "c4"),
        arrow(3, 4, 1, "d4"),
        arrow(3, 5, 0, "c5"),
        arrow(3, 5, 1, "d5"),
    ];
    let mut q = GradedQuiver::new(6, arrows).expect("valid quiver");
    let a = ["a0", "a1", "a2"];
    let b = ["b0", "b1", "b2"];
    for i in 0..3 {
        for j in (i + 1)..3 {
            q.relate(&[(1, &[b[j], a[i]]), (-1, &[b[i], a[j]])]).expect("valid relation");
        }
    }
    q.relate(&[(1, &["t", "b1"])]).expect("valid relation");
    q.relate(&[(1, &["t", "b2"])]).expect("valid relation");
    q.relate(&[(1, &["d4", "t"])]).expect("valid relation");
    q.relate(&[(1, &["d5", "t"])]).expect("valid relation");
    q
}

/// The dg enlargement of [`scissors_quiver`]: the bridge becomes s, and two
/// shortcut arrows of degree minus one are added whose differential is the
/// corresponding s-composite.
pub fn resolved_scissors_quiver() -> GradedQuiver {
    let arrows = vec![
        arrow(0, 1, 0, "a0"),
        arrow(0, 1, 0, "a1"),
        arrow(0, 1, 0, "a2"),
        arrow(1, 2, 0, "b0"),
        arrow(1, 2, 0, "b1"),
        arrow(1, 2, 0, "b2"),
        arrow(2, 3, 0, "s"),
        arrow(1, 3, -1, "B1"),
        arrow(1, 3, -1, "B2"),
        arrow(3, 4, 0, "c4"),
        arrow(3, 4, 1, "d4"),
        arrow(3, 5, 0, "c5"),
        arrow(3, 5, 1, "d5"),
    ];
    let mut q = GradedQuiver::new(6, arrows).expect("valid quiver");
    let a = ["a0", "a1", "a2"];
    let b = ["b0", "b1", "b2"];
    for i in 0..3 {
        for j in (i + 1)..3 {
            q.relate(&[(1, &[b[j], a[i]]), (-1, &[b[i], a[j]])]).expect("valid relation");
        }
    }
    q.relate(&[(1, &["B1", "a2"]), (-1, &["B2", "a1"])]).expect("valid relation");
    for c in ["c4", "c5"] {
        for bt in ["B1", "B2"] {
            q.relate(&[(1, &[c, bt])]).expect("valid relation");
        }
        for bi in ["b1", "b2"] {
            q.relate(&[(1, &[c, "s", bi])]).expect("valid relation");
        }
    }
    q.relate(&[(1, &["d4", "s"])]).expect("valid relation");
    q.relate(&[(1, &["d5", "s"])]).expect("valid relation");
    q.relate(&[(1, &["d4", "B1"])]).expect("valid relation");
    q.relate(&[(1, &["d5", "B2"])]).expect("valid relation");
    q.relate(&[(1, &["d4", "B2"]), (-1, &["c4", "s", "b0"])]).expect("valid relation");
    q.relate(&[(1, &["d5", "B1"]), (-1, &["c5", "s", "b0"])]).expect("valid relation");
    q
}

/// Differential of the resolved quiver: the shortcuts map to s-composites.
pub const RESOLVED_DIFFERENTIAL: &[(&str, &[(i64, &[&str])])] = &[
    ("B1", &[(1, &["s", "b1"])]),
    ("B2", &[(1, &["s", "b2"])]),
];

/// Degree-zero variant of the scissors shape (all arrows in degree zero,
/// no differential); its endomorphism algebra is formal for degree reasons.
pub fn mutated_quiver() -> GradedQuiver {
    let mut q = scissors_quiver();
    for a in &mut q.arrows {
        a.degree = 0;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_without_relations() {
        let arrows = vec![arrow(0, 1, 0, "a"), arrow(1, 2, 0, "b")];
        let q = GradedQuiver::new(3, arrows).unwrap();
        let basis = normalize_paths(&q, 100).unwrap();
        let labels: Vec<String> = basis.iter().map(|p| q.path_label(p)).collect();
        assert_eq!(labels, vec!["e0", "e1", "e2", "a", "b", "b a"]);
    }

    #[test]
    fn beilinson_dimension() {
        let q = beilinson_quiver();
        let basis = normalize_paths(&q, 1000).unwrap();
        assert_eq!(basis.len(), 15);
    }

    #[test]
    fn scissors_basis() {
        let q = scissors_quiver();
        let basis = normalize_paths(&q, 10_000).unwrap();
        assert_eq!(basis.len(), 31);
        let alg = DGQuiverAlgebra::new(q, &[], 10_000).unwrap();
        // the bridge kills two of the three middle composites
        assert!(alg.element_named(&["t", "b1"]).unwrap().is_empty());
        assert!(alg.element_named(&["t", "b2"]).unwrap().is_empty());
        assert!(!alg.element_named(&["t", "b0"]).unwrap().is_empty());
        assert!(alg.element_named(&["d4", "t"]).unwrap().is_empty());
        // commuting composites collapse to one class
        assert_eq!(
            alg.element_named(&["b1", "a0"]).unwrap(),
            alg.element_named(&["b0", "a1"]).unwrap()
        );
    }

    #[test]
    fn resolved_scissors_valid_dg() {
        let q = resolved_scissors_quiver();
        let alg = DGQuiverAlgebra::new(q, RESOLVED_DIFFERENTIAL, 10_000).unwrap();
        assert_eq!(alg.dimension(), 45);
        let (ok, why) = validate_dg(&alg);
        assert!(ok, "{why:?}");
        // spot-check the identified pair of degree-zero composites
        assert_eq!(
            alg.element_named(&["d4", "B2"]).unwrap(),
            alg.element_named(&["c4", "s", "b0"]).unwrap()
        );
        assert!(!alg.element_named(&["c4", "s", "b0"]).unwrap().is_empty());
    }

    #[test]
    fn zero_differential_valid() {
        let alg = DGQuiverAlgebra::new(beilinson_quiver(), &[], 1000).unwrap();
        let (ok, why) = validate_dg(&alg);
        assert!(ok, "{why:?}");
    }

    #[test]
    fn degree_violation_detected() {
        // d(x) = y with deg y = deg x is not a degree +1 map
        let arrows = vec![arrow(0, 1, 0, "x"), arrow(0, 1, 0, "y")];
        let q = GradedQuiver::new(2, arrows).unwrap();
        let alg = DGQuiverAlgebra::new(q, &[("x", &[(1, &["y"])])], 100).unwrap();
        let (ok, why) = validate_dg(&alg);
        assert!(!ok);
        assert!(why.unwrap().contains("degree"));
    }

    #[test]
    fn infinite_algebra_rejected() {
        let arrows = vec![arrow(0, 0, 0, "loop")];
        let q = GradedQuiver::new(1, arrows).unwrap();
        assert_eq!(normalize_paths(&q, 100), Err(QuiverError::NonConfluent));
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let arrows = vec![arrow(0, 1, 0, "x"), arrow(0, 1, 1, "y")];
        let mut q = GradedQuiver::new(2, arrows).unwrap();
        q.relate(&[(1, &["x"]), (-1, &["y"])]).unwrap();
        assert_eq!(
            DGQuiverAlgebra::new(q, &[], 100).err(),
            Some(QuiverError::Inhomogeneous(0))
        );
    }
}
