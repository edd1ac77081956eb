//! Exact rational linear programming.
//!
//! A small two-phase simplex over `BigRational` with Bland's rule (so it
//! terminates without any perturbation). Strict inequality systems are
//! handled by the shared-slack trick: introduce one extra variable `s`,
//! require every inequality with slack `s`, bound `s <= 1` and maximize it;
//! the system is strictly feasible iff the optimum is positive.

use crate::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Rat,
    pub x: Vec<Rat>,
}

struct Tableau {
    // columns: structural+slack variables, then rhs
    rows: Vec<Vec<Rat>>,
    cost: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, leave: usize, enter: usize) {
        let p = self.rows[leave][enter].clone();
        for v in self.rows[leave].iter_mut() {
            *v = &*v / &p;
        }
        for i in 0..self.rows.len() {
            if i != leave && !self.rows[i][enter].is_zero() {
                let f = self.rows[i][enter].clone();
                for j in 0..self.ncols + 1 {
                    let sub = &f * &self.rows[leave][j];
                    self.rows[i][j] = &self.rows[i][j] - &sub;
                }
            }
        }
        if !self.cost[enter].is_zero() {
            let f = self.cost[enter].clone();
            for j in 0..self.ncols + 1 {
                let sub = &f * &self.rows[leave][j];
                self.cost[j] = &self.cost[j] - &sub;
            }
        }
        self.basis[leave] = enter;
    }

    /// Run simplex to optimality (Bland's rule). Returns false on unbounded.
    fn solve(&mut self, allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let mut enter = None;
            for j in 0..self.ncols {
                if allowed(j) && self.cost[j].is_negative() {
                    enter = Some(j);
                    break;
                }
            }
            let Some(e) = enter else { return true };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][e].is_positive() {
                    let ratio = &self.rows[i][self.ncols] / &self.rows[i][e];
                    let take = match (&best, &leave) {
                        (None, _) => true,
                        (Some(b), Some(l)) => {
                            ratio < *b || (ratio == *b && self.basis[i] < self.basis[*l])
                        }
                        _ => unreachable!(),
                    };
                    if take {
                        best = Some(ratio);
                        leave = Some(i);
                    }
                }
            }
            let Some(l) = leave else { return false };
            self.pivot(l, e);
        }
    }
}

/// Maximize `c . x` over `{ x >= 0 : a x <= b }` (two-phase; `b` may have
/// negative entries).
pub fn simplex_max(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> LpSolution {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    // variables: n structural + m slack + (phase-1 artificials appended)
    let mut neg_rows: Vec<usize> = Vec::new();
    for (i, bi) in b.iter().enumerate() {
        if bi.is_negative() {
            neg_rows.push(i);
        }
    }
    let nart = neg_rows.len();
    let ncols = n + m + nart;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_of_row: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, &i) in neg_rows.iter().enumerate() {
        art_of_row.insert(i, n + m + k);
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); ncols + 1];
        let flip = art_of_row.contains_key(&i);
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = if flip { -Rat::one() } else { Rat::one() };
        row[ncols] = if flip { -b[i].clone() } else { b[i].clone() };
        if let Some(&aj) = art_of_row.get(&i) {
            row[aj] = Rat::one();
            basis.push(aj);
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, cost: vec![Rat::zero(); ncols + 1], basis, ncols };
    if nart > 0 {
        // phase 1: minimize sum of artificials == maximize -sum
        let mut cost = vec![Rat::zero(); ncols + 1];
        for k in 0..nart {
            cost[n + m + k] = Rat::one();
        }
        t.cost = cost;
        // price out the artificial basis
        for i in 0..m {
            if t.basis[i] >= n + m {
                let f = t.cost[t.basis[i]].clone();
                if !f.is_zero() {
                    for j in 0..ncols + 1 {
                        let sub = &f * &t.rows[i][j];
                        t.cost[j] = &t.cost[j] - &sub;
                    }
                }
            }
        }
        let ok = t.solve(&|_| true);
        debug_assert!(ok, "phase 1 cannot be unbounded");
        // objective value of phase 1 is -cost[rhs]
        if !t.cost[ncols].is_zero() {
            return LpSolution { status: LpStatus::Infeasible, value: Rat::zero(), x: vec![] };
        }
        // drive any artificial still in the basis out (degenerate)
        for i in 0..m {
            if t.basis[i] >= n + m {
                let e = (0..n + m).find(|&j| !t.rows[i][j].is_zero());
                if let Some(e) = e {
                    t.pivot(i, e);
                }
            }
        }
    }
    // phase 2
    let mut cost = vec![Rat::zero(); ncols + 1];
    for j in 0..n {
        cost[j] = -c[j].clone();
    }
    t.cost = cost;
    for i in 0..m {
        let bi = t.basis[i];
        let f = t.cost[bi].clone();
        if !f.is_zero() {
            for j in 0..ncols + 1 {
                let sub = &f * &t.rows[i][j];
                t.cost[j] = &t.cost[j] - &sub;
            }
        }
    }
    let nm = n + m;
    if !t.solve(&|j| j < nm) {
        return LpSolution { status: LpStatus::Unbounded, value: Rat::zero(), x: vec![] };
    }
    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rows[i][t.ncols].clone();
        }
    }
    LpSolution { status: LpStatus::Optimal, value: t.cost[t.ncols].clone(), x }
}

/// Is there a free vector `x` with `row . x >= s` for all rows and some
/// `s > 0`? Returns a strictly feasible witness if so.
///
/// Free variables are split into differences of nonnegative ones; the shared
/// slack is capped at 1 to keep the program bounded.
pub fn strict_feasible(rows: &[Vec<Rat>], nvars: usize) -> Option<Vec<Rat>> {
    for r in rows {
        assert_eq!(r.len(), nvars);
    }
    let n2 = 2 * nvars + 1; // u, v, s
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(rows.len() + 1);
    let mut b = Vec::with_capacity(rows.len() + 1);
    for r in rows {
        // -(r.(u - v)) + s <= 0
        let mut row = Vec::with_capacity(n2);
        for q in r {
            row.push(-q.clone());
        }
        for q in r {
            row.push(q.clone());
        }
        row.push(Rat::one());
        a.push(row);
        b.push(Rat::zero());
    }
    let mut cap = vec![Rat::zero(); n2];
    cap[n2 - 1] = Rat::one();
    a.push(cap);
    b.push(Rat::one());
    let mut c = vec![Rat::zero(); n2];
    c[n2 - 1] = Rat::one();
    let sol = simplex_max(&c, &a, &b);
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    if sol.value.is_positive() {
        Some((0..nvars).map(|i| &sol.x[i] - &sol.x[nvars + i]).collect())
    } else {
        None
    }
}

/// Like [`strict_feasible`], but additionally requiring `row . x = 0` for
/// every equality row.
pub fn strict_feasible_eq(
    strict: &[Vec<Rat>],
    eqs: &[Vec<Rat>],
    nvars: usize,
) -> Option<Vec<Rat>> {
    let n2 = 2 * nvars + 1; // u, v, s
    let mut a: Vec<Vec<Rat>> = Vec::new();
    let mut b: Vec<Rat> = Vec::new();
    for r in strict {
        assert_eq!(r.len(), nvars);
        let mut row = Vec::with_capacity(n2);
        for q in r {
            row.push(-q.clone());
        }
        for q in r {
            row.push(q.clone());
        }
        row.push(Rat::one());
        a.push(row);
        b.push(Rat::zero());
    }
    for r in eqs {
        assert_eq!(r.len(), nvars);
        for sign in [1i64, -1] {
            let sg = rat(sign, 1);
            let mut row = Vec::with_capacity(n2);
            for q in r {
                row.push(&sg * q);
            }
            for q in r {
                row.push(-(&sg * q));
            }
            row.push(Rat::zero());
            a.push(row);
            b.push(Rat::zero());
        }
    }
    let mut cap = vec![Rat::zero(); n2];
    cap[n2 - 1] = Rat::one();
    a.push(cap);
    b.push(Rat::one());
    let mut c = vec![Rat::zero(); n2];
    c[n2 - 1] = Rat::one();
    let sol = simplex_max(&c, &a, &b);
    if sol.status == LpStatus::Optimal && sol.value.is_positive() {
        Some((0..nvars).map(|i| &sol.x[i] - &sol.x[nvars + i]).collect())
    } else {
        None
    }
}

/// Does `a x = b` admit a solution with `x >= 0`? (Exact feasibility via
/// phase-1 on the split inequalities.)
pub fn feasible_eq_nonneg(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    // a x <= b and -a x <= -b
    let n = if a.is_empty() { 0 } else { a[0].len() };
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for (r, bi) in a.iter().zip(b) {
        rows.push(r.clone());
        rhs.push(bi.clone());
        rows.push(r.iter().map(|q| -q.clone()).collect());
        rhs.push(-bi.clone());
    }
    let c = vec![Rat::zero(); n];
    simplex_max(&c, &rows, &rhs).status == LpStatus::Optimal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        rat(n, 1)
    }

    #[test]
    fn simple_max() {
        // max x st x <= 2
        let sol = simplex_max(&[r(1)], &[vec![r(1)]], &[r(2)]);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, r(2));
    }

    #[test]
    fn phase1_needed() {
        // x >= 1, x <= 3, max -x => x = 1
        let sol = simplex_max(&[r(-1)], &[vec![r(-1)], vec![r(1)]], &[r(-1), r(3)]);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, r(-1));
    }

    #[test]
    fn infeasible() {
        // x >= 2 and x <= 1
        let sol = simplex_max(&[r(0)], &[vec![r(-1)], vec![r(1)]], &[r(-2), r(1)]);
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded() {
        let sol = simplex_max(&[r(1)], &[vec![r(-1)]], &[r(0)]);
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn strict() {
        assert!(strict_feasible(&[vec![r(1)]], 1).is_some());
        assert!(strict_feasible(&[vec![r(1)], vec![r(-1)]], 1).is_none());
        let w = strict_feasible(&[vec![r(1), r(-1)], vec![r(0), r(1)]], 2).unwrap();
        assert!((&w[0] - &w[1]).is_positive() && w[1].is_positive());
    }

    #[test]
    fn eq_nonneg() {
        // x + y = 1 with x,y >= 0 feasible; x + y = -1 not
        assert!(feasible_eq_nonneg(&[vec![r(1), r(1)]], &[r(1)]));
        assert!(!feasible_eq_nonneg(&[vec![r(1), r(1)]], &[r(-1)]));
    }
}
