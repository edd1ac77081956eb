//! Homotopy transfer: splitting data for a dg quiver algebra, minimal
//! higher products via the binary-tree recursion, and formality checks.

use crate::prelude::*;
use crate::quiver::{lin_add_scaled, DGQuiverAlgebra, Echelon, Lin, Path, QuiverError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AinftyError {
    Quiver(QuiverError),
    /// The (i, h) pair does not split the algebra: some projection image
    /// falls outside the span of the embedded classes.
    BadSplitting(String),
    /// The higher-product sign rule failed an identity check; the failing
    /// arity and class tuple are reported.
    SignConvention(usize, Vec<usize>),
}

impl core::fmt::Display for AinftyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AinftyError::Quiver(e) => write!(f, "{e}"),
            AinftyError::BadSplitting(s) => write!(f, "bad splitting: {s}"),
            AinftyError::SignConvention(n, t) => {
                write!(f, "sign rule fails the arity-{n} identity on tuple {t:?}")
            }
        }
    }
}

impl From<QuiverError> for AinftyError {
    fn from(e: QuiverError) -> Self {
        AinftyError::Quiver(e)
    }
}

/// A cohomology class of the algebra: a label plus endpoint and degree data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
}

/// Splitting data: an embedding of the cohomology classes, the projection
/// back, and a degree minus-one homotopy.
#[derive(Clone, Debug)]
pub struct TransferData {
    pub classes: Vec<CohClass>,
    /// Representative in the algebra, per class.
    pub i: Vec<Lin>,
    /// Projection of each basis path, as sparse class coefficients.
    pub pi: BTreeMap<Path, Vec<(usize, Rat)>>,
    /// Homotopy on basis paths; absent entries are zero.
    pub h: BTreeMap<Path, Lin>,
}

impl TransferData {
    pub fn apply_h(&self, alg: &DGQuiverAlgebra, x: &Lin) -> Lin {
        let mut out = Lin::new();
        for (p, c) in x {
            if let Some(v) = self.h.get(p) {
                lin_add_scaled(&mut out, v, c);
            }
        }
        alg.reduce(&out)
    }

    pub fn apply_pi(&self, x: &Lin) -> Vec<(usize, Rat)> {
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (p, c) in x {
            if let Some(coeffs) = self.pi.get(p) {
                for (k, v) in coeffs {
                    let entry = acc.entry(*k).or_insert_with(Rat::zero);
                    *entry += v * c;
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn apply_i(&self, classes: &[(usize, Rat)]) -> Lin {
        let mut out = Lin::new();
        for (k, c) in classes {
            lin_add_scaled(&mut out, &self.i[*k], c);
        }
        out
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    /// Derive the projection from an embedding and a homotopy: for each
    /// basis path x, express x - dh(x) - hd(x) over the embedded classes.
    pub fn from_ih(
        alg: &DGQuiverAlgebra,
        classes: Vec<CohClass>,
        i: Vec<Lin>,
        h: BTreeMap<Path, Lin>,
    ) -> Result<TransferData, AinftyError> {
        // echelon rows over the representatives, each tracked as an exact
        // combination of the original classes
        let mut rows: Vec<(Lin, Vec<(usize, Rat)>)> = Vec::new();
        let reduce_tracked = |rows: &[(Lin, Vec<(usize, Rat)>)],
                              lin: &Lin|
         -> (Lin, BTreeMap<usize, Rat>) {
            let mut v = lin.clone();
            let mut combo: BTreeMap<usize, Rat> = BTreeMap::new();
            loop {
                let Some((ri, c)) = rows.iter().enumerate().find_map(|(ri, (row, _))| {
                    let lead = row.iter().next_back().expect("nonempty row").0;
                    v.get(lead).cloned().map(|c| (ri, c))
                }) else {
                    break;
                };
                lin_add_scaled(&mut v, &rows[ri].0, &-c.clone());
                for (k, rc) in &rows[ri].1 {
                    let entry = combo.entry(*k).or_insert_with(Rat::zero);
                    *entry += rc * &c;
                }
            }
            combo.retain(|_, c| !c.is_zero());
            (v, combo)
        };
        for (k, rep) in i.iter().enumerate() {
            let r = alg.reduce(rep);
            let (mut v, combo) = reduce_tracked(&rows, &r);
            if v.is_empty() {
                return Err(AinftyError::BadSplitting(
                    "class representatives are linearly dependent".into(),
                ));
            }
            let inv = Rat::one() / v.iter().next_back().expect("nonempty").1.clone();
            for c in v.values_mut() {
                *c *= &inv;
            }
            let mut tracked: Vec<(usize, Rat)> =
                combo.into_iter().map(|(j, c)| (j, -c * &inv)).collect();
            tracked.push((k, inv));
            rows.push((v, tracked));
        }
        let mut partial = TransferData { classes, i, pi: BTreeMap::new(), h };
        let mut pi = BTreeMap::new();
        for p in &alg.basis {
            let x = alg.element(p);
            let mut proj = x.clone();
            let hx = partial.apply_h(alg, &x);
            lin_add_scaled(&mut proj, &alg.d(&hx), &-Rat::one());
            let hdx = partial.apply_h(alg, &alg.d(&x));
            lin_add_scaled(&mut proj, &hdx, &-Rat::one());
            let (rem, combo) = reduce_tracked(&rows, &alg.reduce(&proj));
            if !rem.is_empty() {
                return Err(AinftyError::BadSplitting(format!(
                    "projection of {} leaves the class span",
                    alg.quiver.path_label(p)
                )));
            }
            let coeffs: Vec<(usize, Rat)> = combo.into_iter().collect();
            if !coeffs.is_empty() {
                pi.insert(p.clone(), coeffs);
            }
        }
        partial.pi = pi;
        Ok(partial)
    }
}

/// Verify the three side conditions exactly on every basis path:
/// pi i = 1, i pi = 1 - dh - hd, and h h = 0.
pub fn validate_transfer(alg: &DGQuiverAlgebra, t: &TransferData) -> (bool, Option<String>) {
    for (k, rep) in t.i.iter().enumerate() {
        let back = t.apply_pi(&alg.reduce(rep));
        if back != vec![(k, Rat::one())] {
            return (false, Some(format!("pi i != 1 on class {}", t.classes[k].label)));
        }
    }
    for p in &alg.basis {
        let hx = t.apply_h(alg, &alg.element(p));
        if !t.apply_h(alg, &hx).is_empty() {
            return (false, Some(format!("h h != 0 on {}", alg.quiver.path_label(p))));
        }
    }
    for p in &alg.basis {
        let x = alg.element(p);
        let lhs = t.apply_i(&t.apply_pi(&x));
        let mut rhs = x.clone();
        let hx = t.apply_h(alg, &x);
        lin_add_scaled(&mut rhs, &alg.d(&hx), &-Rat::one());
        let hdx = t.apply_h(alg, &alg.d(&x));
        lin_add_scaled(&mut rhs, &hdx, &-Rat::one());
        if alg.reduce(&lhs) != alg.reduce(&rhs) {
            return (
                false,
                Some(format!("i pi != 1 - dh - hd on {}", alg.quiver.path_label(p))),
            );
        }
    }
    (true, None)
}

/// Deterministic splitting by exact elimination in basis order: pair each
/// basis path with the leading term of its differential, split the algebra
/// into harmonic, exact and coexact parts, and read off i, pi, h.
pub fn auto_transfer(alg: &DGQuiverAlgebra) -> Result<TransferData, AinftyError> {
    // image echelon with tracked preimages
    let mut image: Vec<(Lin, Lin)> = Vec::new(); // (d(u) echelon row, u)
    let mut kernel: Vec<Lin> = Vec::new();
    for p in &alg.basis {
        let mut u = alg.element(p);
        let mut v = alg.d(&u);
        loop {
            let Some((row, pre, c)) = image.iter().find_map(|(row, pre)| {
                let lead = row.iter().next_back().expect("nonempty row").0;
                v.get(lead).cloned().map(|c| (row.clone(), pre.clone(), c))
            }) else {
                break;
            };
            lin_add_scaled(&mut v, &row, &-c.clone());
            lin_add_scaled(&mut u, &pre, &-c);
        }
        if v.is_empty() {
            kernel.push(u);
        } else {
            let inv = Rat::one() / v.iter().next_back().expect("nonempty").1.clone();
            for c in v.values_mut() {
                *c *= &inv;
            }
            for c in u.values_mut() {
                *c *= &inv;
            }
            image.push((v, u));
        }
    }
    let mut exact = Echelon::new();
    let mut exact_rows: Vec<(Path, Lin)> = Vec::new(); // leading of d(u) -> u
    for (v, u) in &image {
        let lead = v.iter().next_back().expect("nonempty").0.clone();
        exact.insert(v);
        exact_rows.push((lead, u.clone()));
    }
    // harmonic representatives: kernel vectors modulo the exact subspace
    let mut reps: Vec<Lin> = Vec::new();
    let mut rep_span = Echelon::new();
    for u in &kernel {
        let w = exact.reduce(u);
        if rep_span.insert(&w) {
            reps.push(w);
        }
    }
    let classes: Vec<CohClass> = reps
        .iter()
        .enumerate()
        .map(|(k, rep)| {
            let (p, _) = rep.iter().next_back().expect("nonzero representative");
            CohClass {
                label: format!("[{}]#{k}", alg.quiver.path_label(p)),
                source: p.source,
                target: alg.quiver.path_target(p),
                degree: alg.quiver.path_degree(p),
            }
        })
        .collect();
    // homotopy: on each basis path, decompose into exact rows and send the
    // exact components back through the tracked preimages
    let mut h = BTreeMap::new();
    for p in &alg.basis {
        let x = alg.element(p);
        let (_, used) = exact.reduce_tracked(&x);
        let mut hx = Lin::new();
        for (lead, c) in used {
            let u = exact_rows
                .iter()
                .find(|(l, _)| *l == lead)
                .map(|(_, u)| u.clone())
                .expect("row came from a preimage");
            lin_add_scaled(&mut hx, &u, &c);
        }
        if !hx.is_empty() {
            h.insert(p.clone(), alg.reduce(&hx));
        }
    }
    TransferData::from_ih(alg, classes, reps, h)
}

/// A minimal structure: class data plus the nonzero entries of each higher
/// product, keyed by class-index tuples.
#[derive(Clone, Debug)]
pub struct AInftyAlgebra {
    pub classes: Vec<CohClass>,
    /// tables[n] holds m_n; keys are class tuples, values class coefficients.
    pub tables: BTreeMap<usize, BTreeMap<Vec<usize>, Vec<(usize, Rat)>>>,
}

impl AInftyAlgebra {
    pub fn m(&self, n: usize, tuple: &[usize]) -> Vec<(usize, Rat)> {
        self.tables
            .get(&n)
            .and_then(|t| t.get(tuple))
            .cloned()
            .unwrap_or_default()
    }

    pub fn nonzero_count(&self, n: usize) -> usize {
        self.tables.get(&n).map(|t| t.len()).unwrap_or(0)
    }
}

struct TreeSum<'a> {
    alg: &'a DGQuiverAlgebra,
    t: &'a TransferData,
}

impl TreeSum<'_> {
    /// h composed with the tree sum; the singleton case is minus the
    /// identity, which reproduces the usual two-term expression at arity 3.
    fn h_lambda(&self, args: &[Lin], degrees: &[i64]) -> Lin {
        if args.len() == 1 {
            let mut out = args[0].clone();
            for c in out.values_mut() {
                *c = -c.clone();
            }
            return out;
        }
        self.t.apply_h(self.alg, &self.lambda(args, degrees))
    }

    fn lambda(&self, args: &[Lin], degrees: &[i64]) -> Lin {
        let n = args.len();
        if n == 2 {
            return self.alg.mul(&args[0], &args[1]);
        }
        let mut out = Lin::new();
        for k in 1..n {
            let left = self.h_lambda(&args[..k], &degrees[..k]);
            let right = self.h_lambda(&args[k..], &degrees[k..]);
            if left.is_empty() || right.is_empty() {
                continue;
            }
            // the right factor has operator degree 1 - (n - k); moving it
            // past the first block contributes the Koszul sign
            let block: i64 = degrees[..k].iter().sum();
            let koszul = (1 - (n - k) as i64) * block;
            let mut sign = if (k + 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
            if koszul.rem_euclid(2) == 1 {
                sign = -sign;
            }
            let prod = self.alg.mul(&left, &right);
            lin_add_scaled(&mut out, &prod, &sign);
        }
        self.alg.reduce(&out)
    }
}

fn composable_tuples(classes: &[CohClass], n: usize) -> Vec<Vec<usize>> {
    // tuples (x_1 .. x_n) composing like x_1 after x_2 after ... x_n
    let mut tuples: Vec<Vec<usize>> = (0..classes.len()).map(|k| vec![k]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for t in &tuples {
            let last = &classes[*t.last().expect("nonempty")];
            for (k, c) in classes.iter().enumerate() {
                if c.target == last.source {
                    let mut v = t.clone();
                    v.push(k);
                    next.push(v);
                }
            }
        }
        tuples = next;
    }
    tuples
}

/// Transferred minimal products m_2 .. m_{n_max}, with the A-infinity
/// identities verified exactly on every composable class tuple.
pub fn transfer_mn(
    alg: &DGQuiverAlgebra,
    t: &TransferData,
    n_max: usize,
) -> Result<AInftyAlgebra, AinftyError> {
    let sum = TreeSum { alg, t };
    let mut tables: BTreeMap<usize, BTreeMap<Vec<usize>, Vec<(usize, Rat)>>> = BTreeMap::new();
    for n in 2..=n_max {
        let mut table = BTreeMap::new();
        for tuple in composable_tuples(&t.classes, n) {
            let args: Vec<Lin> = tuple.iter().map(|&k| alg.reduce(&t.i[k])).collect();
            let degrees: Vec<i64> = tuple.iter().map(|&k| t.classes[k].degree).collect();
            let value = t.apply_pi(&sum.lambda(&args, &degrees));
            if !value.is_empty() {
                table.insert(tuple, value);
            }
        }
        tables.insert(n, table);
    }
    let out = AInftyAlgebra { classes: t.classes.clone(), tables };
    // identity check: for every arity up to n_max, the signed sum of all
    // ways of nesting one product inside another vanishes (m_1 = 0)
    for n in 3..=n_max {
        for tuple in composable_tuples(&t.classes, n) {
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for s in 2..n {
                let outer = n - s + 1;
                if outer < 2 || outer > n_max || s > n_max {
                    continue;
                }
                for r in 0..=(n - s) {
                    let tt = n - s - r;
                    let inner = out.m(s, &tuple[r..r + s]);
                    for (cls, coeff) in &inner {
                        let mut outer_tuple: Vec<usize> = tuple[..r].to_vec();
                        outer_tuple.push(*cls);
                        outer_tuple.extend_from_slice(&tuple[r + s..]);
                        let outer_val = out.m(outer, &outer_tuple);
                        let block: i64 =
                            tuple[..r].iter().map(|&k| t.classes[k].degree).sum();
                        let parity = (r + s * tt) as i64 + (s as i64) * block;
                        let sign = if parity.rem_euclid(2) == 0 {
                            Rat::one()
                        } else {
                            -Rat::one()
                        };
                        for (c2, v2) in outer_val {
                            let entry = acc.entry(c2).or_insert_with(Rat::zero);
                            *entry += v2 * coeff * &sign;
                        }
                    }
                }
            }
            acc.retain(|_, c| !c.is_zero());
            if !acc.is_empty() {
                return Err(AinftyError::SignConvention(n, tuple));
            }
        }
    }
    Ok(out)
}

/// True when every product of arity three and higher vanishes.
pub fn check_formality(
    alg: &DGQuiverAlgebra,
    t: &TransferData,
    n_max: usize,
) -> Result<bool, AinftyError> {
    let a = transfer_mn(alg, t, n_max)?;
    Ok((3..=n_max).all(|n| a.nonzero_count(n) == 0))
}

/// The hand-specified splitting for the resolved scissors algebra: classes
/// are the basis paths of the degree-zero scissors algebra, embedded by
/// renaming the bridge, with the homotopy lifting s-composites to the
/// shortcut arrows.
pub fn scissors_transfer(
    ahat: &DGQuiverAlgebra,
    a: &DGQuiverAlgebra,
) -> Result<TransferData, AinftyError> {
    let classes: Vec<CohClass> = a
        .basis
        .iter()
        .map(|p| CohClass {
            label: a.quiver.path_label(p),
            source: p.source,
            target: a.quiver.path_target(p),
            degree: a.quiver.path_degree(p),
        })
        .collect();
    let mut i = Vec::new();
    for p in &a.basis {
        if p.arrows.is_empty() {
            i.push(ahat.element(&Path::idempotent(p.source)));
            continue;
        }
        let mut arrows = Vec::new();
        for &idx in &p.arrows {
            let label = &a.quiver.arrows[idx].label;
            let name = if label == "t" { "s" } else { label.as_str() };
            arrows.push(
                ahat.quiver
                    .arrow_index(name)
                    .ok_or_else(|| QuiverError::UnknownArrow(name.to_owned()))?,
            );
        }
        i.push(ahat.element(&Path { source: p.source, arrows }));
    }
    let mut h: BTreeMap<Path, Lin> = BTreeMap::new();
    let anames = ["a0", "a1", "a2"];
    for (bi, bt) in [("b1", "B1"), ("b2", "B2")] {
        let key = ahat.element_named(&["s", bi])?;
        let val = ahat.element_named(&[bt])?;
        let (p, c) = key.iter().next_back().expect("nonzero");
        let mut scaled = val.clone();
        let inv = Rat::one() / c.clone();
        for v in scaled.values_mut() {
            *v *= &inv;
        }
        h.insert(p.clone(), scaled);
        for aj in anames {
            let key = ahat.element_named(&["s", bi, aj])?;
            let val = ahat.element_named(&[bt, aj])?;
            let (p, c) = key.iter().next_back().expect("nonzero");
            let mut scaled = val;
            let inv = Rat::one() / c.clone();
            for v in scaled.values_mut() {
                *v *= &inv;
            }
            h.insert(p.clone(), scaled);
        }
    }
    TransferData::from_ih(ahat, classes, i, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{
        beilinson_quiver, mutated_quiver, resolved_scissors_quiver, scissors_quiver,
        validate_dg, RESOLVED_DIFFERENTIAL,
    };

    fn resolved() -> DGQuiverAlgebra {
        DGQuiverAlgebra::new(resolved_scissors_quiver(), RESOLVED_DIFFERENTIAL, 10_000)
            .unwrap()
    }

    fn scissors() -> DGQuiverAlgebra {
        DGQuiverAlgebra::new(scissors_quiver(), &[], 10_000).unwrap()
    }

    #[test]
    fn beilinson_is_formal() {
        let alg = DGQuiverAlgebra::new(beilinson_quiver(), &[], 1_000).unwrap();
        let t = auto_transfer(&alg).unwrap();
        let (ok, why) = validate_transfer(&alg, &t);
        assert!(ok, "{why:?}");
        // zero differential: identity-style transfer, one class per path
        assert_eq!(t.classes.len(), alg.dimension());
        let a = transfer_mn(&alg, &t, 4).unwrap();
        assert_eq!(a.nonzero_count(3), 0);
        assert_eq!(a.nonzero_count(4), 0);
        assert!(check_formality(&alg, &t, 4).unwrap());
    }

    #[test]
    fn paper_transfer_is_valid() {
        let ahat = resolved();
        let (ok, why) = validate_dg(&ahat);
        assert!(ok, "{why:?}");
        let a = scissors();
        let t = scissors_transfer(&ahat, &a).unwrap();
        assert_eq!(t.classes.len(), 31);
        let (ok, why) = validate_transfer(&ahat, &t);
        assert!(ok, "{why:?}");
    }

    #[test]
    fn six_triple_products() {
        let ahat = resolved();
        let a = scissors();
        let t = scissors_transfer(&ahat, &a).unwrap();
        let m = transfer_mn(&ahat, &t, 4).unwrap();
        let idx = |l: &str| t.class_index(l).unwrap_or_else(|| panic!("class {l}"));
        let one = |l: &str| vec![(idx(l), Rat::one())];
        let expected = [
            (vec![idx("d4"), idx("t"), idx("b2")], one("c4 t b0")),
            (vec![idx("d5"), idx("t"), idx("b1")], one("c5 t b0")),
            (vec![idx("d4"), idx("t"), idx("b2 a0")], one("c4 t b0 a0")),
            (vec![idx("d5"), idx("t"), idx("b1 a0")], one("c5 t b0 a0")),
            (vec![idx("d4"), idx("t b0"), idx("a2")], one("c4 t b0 a0")),
            (vec![idx("d5"), idx("t b0"), idx("a1")], one("c5 t b0 a0")),
        ];
        assert_eq!(m.nonzero_count(3), 6);
        for (tuple, want) in &expected {
            assert_eq!(&m.m(3, tuple), want, "tuple {tuple:?}");
        }
        // everything of arity four vanishes
        assert_eq!(m.nonzero_count(4), 0);
        assert!(!check_formality(&ahat, &t, 4).unwrap());
        // degree bookkeeping on every stored entry
        for (n, table) in &m.tables {
            for (tuple, value) in table {
                let din: i64 = tuple.iter().map(|&k| t.classes[k].degree).sum();
                for (cls, _) in value {
                    assert_eq!(t.classes[*cls].degree, din + 2 - *n as i64);
                }
            }
        }
    }

    #[test]
    fn auto_transfer_matches_gauge() {
        let ahat = resolved();
        let t = auto_transfer(&ahat).unwrap();
        let (ok, why) = validate_transfer(&ahat, &t);
        assert!(ok, "{why:?}");
        assert_eq!(t.classes.len(), 31);
        let m = transfer_mn(&ahat, &t, 4).unwrap();
        assert!(!check_formality(&ahat, &t, 4).unwrap());
        assert_eq!(m.nonzero_count(4), 0);
        // gauge comparison with the hand splitting: the same (endpoints,
        // degrees) patterns carry the nonzero triple products
        let a = scissors();
        let tp = scissors_transfer(&ahat, &a).unwrap();
        let mp = transfer_mn(&ahat, &tp, 3).unwrap();
        let pattern = |t: &TransferData, tuple: &[usize]| -> Vec<(usize, usize, i64)> {
            tuple
                .iter()
                .map(|&k| (t.classes[k].source, t.classes[k].target, t.classes[k].degree))
                .collect()
        };
        let got: BTreeSet<_> =
            m.tables[&3].keys().map(|tu| pattern(&t, tu)).collect();
        let want: BTreeSet<_> =
            mp.tables[&3].keys().map(|tu| pattern(&tp, tu)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn mutated_fixture_is_formal() {
        let alg = DGQuiverAlgebra::new(mutated_quiver(), &[], 10_000).unwrap();
        let t = auto_transfer(&alg).unwrap();
        let (ok, why) = validate_transfer(&alg, &t);
        assert!(ok, "{why:?}");
        assert!(check_formality(&alg, &t, 4).unwrap());
    }

    #[test]
    fn broken_homotopy_detected() {
        let ahat = resolved();
        let a = scissors();
        let mut t = scissors_transfer(&ahat, &a).unwrap();
        // make h hit its own support: h(s b1) := B1 + (something h acts on)
        let key = ahat.quiver.path_named(&["s", "b1"]).unwrap();
        let extra = ahat.quiver.path_named(&["s", "b2"]).unwrap();
        let entry = t.h.get_mut(&key).unwrap();
        entry.insert(extra, Rat::one());
        let (ok, why) = validate_transfer(&ahat, &t);
        assert!(!ok);
        assert!(why.unwrap().contains("h h"));
    }

    #[test]
    fn two_term_complex_pairing() {
        // x -> y with d(x-arrow) = y-arrow: cohomology keeps the endpoints
        use crate::quiver::{Arrow, GradedQuiver};
        let arrows = vec![
            Arrow { source: 0, target: 1, degree: 0, label: "x".into() },
            Arrow { source: 0, target: 1, degree: 1, label: "y".into() },
        ];
        let q = GradedQuiver::new(2, arrows).unwrap();
        let alg = DGQuiverAlgebra::new(q, &[("x", &[(1, &["y"])])], 100).unwrap();
        let (ok, why) = validate_dg(&alg);
        assert!(ok, "{why:?}");
        let t = auto_transfer(&alg).unwrap();
        let (ok, why) = validate_transfer(&alg, &t);
        assert!(ok, "{why:?}");
        // the arrow pair cancels; only the two idempotents survive
        assert_eq!(t.classes.len(), 2);
        let key = alg.quiver.path_named(&["y"]).unwrap();
        let x = alg.element_named(&["x"]).unwrap();
        assert_eq!(t.h.get(&key).cloned().unwrap_or_default(), x);
    }
}
