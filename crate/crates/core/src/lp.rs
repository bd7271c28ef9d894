//! Exact rational linear programming.
//!
//! A dense two-phase primal simplex over `Q` with Bland's pivoting rule, so
//! every run terminates and identical inputs always visit identical bases.
//! Every outcome carries a certificate that can be re-checked with the
//! `verify_*` functions in exact arithmetic:
//!
//! * `Optimal`: dual multipliers `y` over [`LinearProgram::rows`] with
//!   `sum y_r a_r = c`, `y_r >= 0` on `<=` rows, `y_r <= 0` on `>=` rows and
//!   `y . b` equal to the optimal value.
//! * `Infeasible`: Farkas multipliers with the same sign pattern,
//!   `sum y_r a_r = 0` and `y . b < 0`.
//! * `Unbounded`: a ray `d` satisfying every row homogeneously with `c . d > 0`.
#![allow(clippy::needless_range_loop)]

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::rational::{dot, Point, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Point,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Point, relation: Relation, rhs: Rational) -> Self {
        Self { coeffs, relation, rhs }
    }

    fn holds(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("{what} has length {found}, expected {expected}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
}

/// `maximize objective . x` subject to the constraint rows and variable bounds.
/// Variables without bounds are free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Point,
    constraints: Vec<Constraint>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![None; num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn maximize(mut self, objective: Point) -> Self {
        self.objective = objective;
        self
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraint(mut self, coeffs: Point, relation: Relation, rhs: Rational) -> Self {
        self.add_constraint(coeffs, relation, rhs);
        self
    }

    pub fn add_constraint(&mut self, coeffs: Point, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn lower_bound(mut self, var: usize, value: Rational) -> Self {
        self.lower[var] = Some(value);
        self
    }

    pub fn upper_bound(mut self, var: usize, value: Rational) -> Self {
        self.upper[var] = Some(value);
        self
    }

    /// Marks every variable as nonnegative.
    pub fn nonnegative(mut self) -> Self {
        for l in &mut self.lower {
            *l = Some(Rational::zero());
        }
        self
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// The explicit constraints followed by one row per finite bound, in
    /// variable order (lower before upper). Certificates index these rows.
    pub fn rows(&self) -> Vec<Constraint> {
        let mut rows = self.constraints.clone();
        for j in 0..self.num_vars {
            let e = unit_vec(self.num_vars, j);
            if let Some(l) = &self.lower[j] {
                rows.push(Constraint::new(e.clone(), Relation::Ge, l.clone()));
            }
            if let Some(u) = &self.upper[j] {
                rows.push(Constraint::new(e, Relation::Le, u.clone()));
            }
        }
        rows
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars {
            return Err(LpError::DimensionMismatch {
                what: "objective",
                expected: self.num_vars,
                found: self.objective.len(),
            });
        }
        for c in &self.constraints {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::DimensionMismatch {
                    what: "constraint row",
                    expected: self.num_vars,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }
}

fn unit_vec(n: usize, j: usize) -> Point {
    let mut e = vec![Rational::zero(); n];
    e[j] = Rational::one();
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Optimal vertex, or the last feasible basic solution when unbounded.
    pub point: Option<Point>,
    pub value: Option<Rational>,
    /// Dual multipliers (optimal), Farkas multipliers (infeasible), or a ray (unbounded).
    pub certificate: Point,
    /// Reduced costs `c_N - c_B A_B^-1 A_N` of the final basis, over the
    /// internal standard-form columns. All `<= 0` at an optimum.
    pub reduced_costs: Point,
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Point),
    Infeasible(Point),
}

/// Phase-one wrapper: a point satisfying the rows (all variables free), or a
/// Farkas certificate over the rows.
pub fn feasible(num_vars: usize, constraints: &[Constraint]) -> Result<Feasibility, LpError> {
    let mut lp = LinearProgram::new(num_vars);
    for c in constraints {
        lp.add_constraint(c.coeffs.clone(), c.relation, c.rhs.clone());
    }
    let out = solve(&lp)?;
    Ok(match out.status {
        LpStatus::Infeasible => Feasibility::Infeasible(out.certificate),
        _ => Feasibility::Feasible(out.point.expect("feasible outcome carries a point")),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowOrigin {
    Constraint(usize),
    Upper(usize),
}

/// How an original variable is expressed through nonnegative internal columns.
#[derive(Debug, Clone)]
struct VarMap {
    shift: Rational,
    cols: Vec<(usize, i8)>,
}

struct Tableau {
    rows: Vec<Point>,
    rhs: Point,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, reduced: &mut Point) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (j, p) in pivot_row.iter().enumerate() {
                if !p.is_zero() {
                    let delta = &factor * p;
                    self.rows[i][j] -= delta;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !reduced[c].is_zero() {
            let factor = reduced[c].clone();
            for (j, p) in pivot_row.iter().enumerate() {
                if !p.is_zero() {
                    reduced[j] -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, costs: &[Rational]) -> Point {
        let mut d: Point = costs.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if costs[b].is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                if !self.rows[i][j].is_zero() {
                    d[j] -= &costs[b] * &self.rows[i][j];
                }
            }
        }
        d
    }

    /// Bland's rule. Returns the column that proved unboundedness, if any.
    fn optimize(&mut self, reduced: &mut Point, allowed: &[bool]) -> Option<usize> {
        loop {
            let c = (0..self.ncols).find(|&j| allowed[j] && reduced[j].is_positive())?;
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Some(c),
                Some((r, _)) => self.pivot(r, c, reduced),
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let n = lp.num_vars;

    // Original variables -> nonnegative structural columns.
    let mut maps = Vec::with_capacity(n);
    let mut nstruct = 0;
    let mut upper_rows = Vec::new();
    for j in 0..n {
        let map = match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), u) => {
                if u.is_some() {
                    upper_rows.push(j);
                }
                nstruct += 1;
                VarMap { shift: l.clone(), cols: vec![(nstruct - 1, 1)] }
            }
            (None, Some(u)) => {
                nstruct += 1;
                VarMap { shift: u.clone(), cols: vec![(nstruct - 1, -1)] }
            }
            (None, None) => {
                nstruct += 2;
                VarMap { shift: Rational::zero(), cols: vec![(nstruct - 2, 1), (nstruct - 1, -1)] }
            }
        };
        maps.push(map);
    }

    // Internal rows before slacks: (coefficients over structural columns, relation, rhs, origin).
    let mut internal: Vec<(Point, Relation, Rational, RowOrigin)> = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); nstruct];
        let mut rhs = c.rhs.clone();
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            rhs -= a * &maps[j].shift;
            for &(col, s) in &maps[j].cols {
                if s > 0 {
                    row[col] += a;
                } else {
                    row[col] -= a;
                }
            }
        }
        internal.push((row, c.relation, rhs, RowOrigin::Constraint(i)));
    }
    for &j in &upper_rows {
        let mut row = vec![Rational::zero(); nstruct];
        row[maps[j].cols[0].0] = Rational::one();
        let ub = lp.upper[j].as_ref().unwrap() - lp.lower[j].as_ref().unwrap();
        internal.push((row, Relation::Le, ub, RowOrigin::Upper(j)));
    }

    let m = internal.len();
    let nslack = internal.iter().filter(|r| r.1 != Relation::Eq).count();
    // Column layout: structural | slacks | artificials.
    let mut rows: Vec<Point> = Vec::with_capacity(m);
    let mut rhs: Point = Vec::with_capacity(m);
    let mut flips = Vec::with_capacity(m);
    let mut identity_col = vec![0usize; m];
    let mut needs_art = Vec::new();
    let mut slack_idx = nstruct;
    for (i, (coeffs, rel, b, _)) in internal.iter().enumerate() {
        let mut row = coeffs.clone();
        row.resize(nstruct + nslack, Rational::zero());
        let slack_col = match rel {
            Relation::Le => {
                row[slack_idx] = Rational::one();
                slack_idx += 1;
                Some(slack_idx - 1)
            }
            Relation::Ge => {
                row[slack_idx] = -Rational::one();
                slack_idx += 1;
                Some(slack_idx - 1)
            }
            Relation::Eq => None,
        };
        let mut b = b.clone();
        let flip = b.is_negative();
        if flip {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        match slack_col {
            Some(s) if row[s].is_one() => identity_col[i] = s,
            _ => needs_art.push(i),
        }
        flips.push(if flip { -1i8 } else { 1 });
        rows.push(row);
        rhs.push(b);
    }
    let nart = needs_art.len();
    let ncols = nstruct + nslack + nart;
    for row in rows.iter_mut() {
        row.resize(ncols, Rational::zero());
    }
    for (a, &i) in needs_art.iter().enumerate() {
        let col = nstruct + nslack + a;
        rows[i][col] = Rational::one();
        identity_col[i] = col;
    }
    let is_art = |j: usize| j >= nstruct + nslack;

    let mut tab = Tableau { rows, rhs, basis: identity_col.clone(), ncols };

    // Phase I: maximize -(sum of artificials).
    let phase1_costs: Point = (0..ncols).map(|j| if is_art(j) { -Rational::one() } else { Rational::zero() }).collect();
    let all_allowed = vec![true; ncols];
    if nart > 0 {
        let mut d = tab.reduced_costs(&phase1_costs);
        tab.optimize(&mut d, &all_allowed);
        let infeasibility: Rational =
            tab.basis.iter().zip(&tab.rhs).filter(|(b, _)| is_art(**b)).map(|(_, v)| v.clone()).sum();
        if infeasibility.is_positive() {
            let y: Point = (0..m).map(|i| &phase1_costs[identity_col[i]] - &d[identity_col[i]]).collect();
            let zero_target = vec![Rational::zero(); n];
            let certificate = lift_multipliers(lp, &internal, &flips, &y, &zero_target);
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                point: None,
                value: None,
                certificate,
                reduced_costs: d,
                basis: tab.basis.clone(),
            });
        }
        // Drive zero-valued artificials out of the basis where possible.
        for i in 0..m {
            if !is_art(tab.basis[i]) {
                continue;
            }
            if let Some(c) = (0..nstruct + nslack).find(|&j| !tab.rows[i][j].is_zero()) {
                tab.pivot(i, c, &mut d);
            }
        }
    }

    // Phase II.
    let mut costs = vec![Rational::zero(); ncols];
    for (j, cj) in lp.objective.iter().enumerate() {
        for &(col, s) in &maps[j].cols {
            if s > 0 {
                costs[col] += cj;
            } else {
                costs[col] -= cj;
            }
        }
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| !is_art(j)).collect();
    let mut d = tab.reduced_costs(&costs);
    let unbounded_col = tab.optimize(&mut d, &allowed);

    let mut xs = vec![Rational::zero(); ncols];
    for (i, &b) in tab.basis.iter().enumerate() {
        xs[b] = tab.rhs[i].clone();
    }
    let to_original = |internal_x: &[Rational], with_shift: bool| -> Point {
        maps.iter()
            .map(|map| {
                let mut v = if with_shift { map.shift.clone() } else { Rational::zero() };
                for &(col, s) in &map.cols {
                    if s > 0 {
                        v += &internal_x[col];
                    } else {
                        v -= &internal_x[col];
                    }
                }
                v
            })
            .collect()
    };
    let point = to_original(&xs, true);
    let value = dot(&lp.objective, &point);

    if let Some(c) = unbounded_col {
        let mut ray = vec![Rational::zero(); ncols];
        ray[c] = Rational::one();
        for (i, &b) in tab.basis.iter().enumerate() {
            ray[b] = -tab.rows[i][c].clone();
        }
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            point: Some(point),
            value: None,
            certificate: to_original(&ray, false),
            reduced_costs: d[..nstruct + nslack].to_vec(),
            basis: tab.basis.clone(),
        });
    }

    let y: Point = (0..m).map(|i| &costs[identity_col[i]] - &d[identity_col[i]]).collect();
    let certificate = lift_multipliers(lp, &internal, &flips, &y, &lp.objective);
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        point: Some(point),
        value: Some(value),
        certificate,
        reduced_costs: d[..nstruct + nslack].to_vec(),
        basis: tab.basis,
    })
}

/// Maps internal-row duals back onto [`LinearProgram::rows`]; bound-row
/// multipliers absorb the residual `target - sum y_r a_r`.
fn lift_multipliers(
    lp: &LinearProgram,
    internal: &[(Point, Relation, Rational, RowOrigin)],
    flips: &[i8],
    y: &[Rational],
    target: &[Rational],
) -> Point {
    let n = lp.num_vars;
    let mut constraint_y = vec![Rational::zero(); lp.constraints.len()];
    let mut upper_y = vec![None; n];
    for (i, (_, _, _, origin)) in internal.iter().enumerate() {
        let v = if flips[i] < 0 { -y[i].clone() } else { y[i].clone() };
        match *origin {
            RowOrigin::Constraint(c) => constraint_y[c] = v,
            RowOrigin::Upper(j) => upper_y[j] = Some(v),
        }
    }
    let mut residual: Point = target.to_vec();
    for (c, yc) in lp.constraints.iter().zip(&constraint_y) {
        if yc.is_zero() {
            continue;
        }
        for (j, a) in c.coeffs.iter().enumerate() {
            residual[j] -= yc * a;
        }
    }
    for (j, u) in upper_y.iter().enumerate() {
        if let Some(u) = u {
            residual[j] -= u;
        }
    }
    let mut cert = constraint_y;
    for j in 0..n {
        let has_lower = lp.lower[j].is_some();
        if has_lower {
            cert.push(residual[j].clone());
        }
        if lp.upper[j].is_some() {
            match &upper_y[j] {
                Some(u) => cert.push(u.clone()),
                None => cert.push(if has_lower { Rational::zero() } else { residual[j].clone() }),
            }
        }
    }
    cert
}

fn sign_ok(rel: Relation, y: &Rational) -> bool {
    match rel {
        Relation::Le => !y.is_negative(),
        Relation::Ge => !y.is_positive(),
        Relation::Eq => true,
    }
}

fn combination(rows: &[Constraint], y: &[Rational], n: usize) -> Option<(Point, Rational)> {
    if rows.len() != y.len() {
        return None;
    }
    let mut lhs = vec![Rational::zero(); n];
    let mut rhs = Rational::zero();
    for (r, yr) in rows.iter().zip(y) {
        if !sign_ok(r.relation, yr) {
            return None;
        }
        if yr.is_zero() {
            continue;
        }
        for (l, a) in lhs.iter_mut().zip(&r.coeffs) {
            *l += yr * a;
        }
        rhs += yr * &r.rhs;
    }
    Some((lhs, rhs))
}

/// Every row and bound holds exactly at `x`.
pub fn verify_feasible_point(lp: &LinearProgram, x: &[Rational]) -> bool {
    x.len() == lp.num_vars && lp.rows().iter().all(|r| r.holds(x))
}

/// Checks an `Optimal` outcome: primal feasibility plus a dual certificate
/// whose bound equals the attained value.
pub fn verify_optimality(lp: &LinearProgram, out: &LpOutcome) -> bool {
    let (Some(x), Some(value)) = (&out.point, &out.value) else {
        return false;
    };
    if !verify_feasible_point(lp, x) || dot(&lp.objective, x) != *value {
        return false;
    }
    match combination(&lp.rows(), &out.certificate, lp.num_vars) {
        Some((lhs, rhs)) => lhs == lp.objective && rhs == *value,
        None => false,
    }
}

/// Checks a Farkas certificate: the multiplied rows sum to `0 <= negative`.
pub fn verify_infeasibility(lp: &LinearProgram, y: &[Rational]) -> bool {
    match combination(&lp.rows(), y, lp.num_vars) {
        Some((lhs, rhs)) => lhs.iter().all(Zero::is_zero) && rhs.is_negative(),
        None => false,
    }
}

/// Checks an improving recession direction.
pub fn verify_unbounded(lp: &LinearProgram, ray: &[Rational]) -> bool {
    if ray.len() != lp.num_vars || !dot(&lp.objective, ray).is_positive() {
        return false;
    }
    lp.rows().iter().all(|r| {
        let v = dot(&r.coeffs, ray);
        match r.relation {
            Relation::Le => !v.is_positive(),
            Relation::Ge => !v.is_negative(),
            Relation::Eq => v.is_zero(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, point, rat};

    #[test]
    fn margin_pinned_to_zero() {
        let lp = LinearProgram::new(1).maximize(point(&[1])).constraint(point(&[1]), Relation::Le, int(0)).constraint(
            point(&[1]),
            Relation::Ge,
            int(0),
        );
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(int(0)));
        assert!(verify_optimality(&lp, &out));
    }

    #[test]
    fn single_upper_constraint() {
        let lp = LinearProgram::new(1).maximize(point(&[1])).constraint(point(&[1]), Relation::Le, int(5));
        let out = solve(&lp).unwrap();
        assert_eq!(out.point, Some(point(&[5])));
        assert!(verify_optimality(&lp, &out));
        assert!(out.reduced_costs.iter().all(|d| !d.is_positive()));
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let lp = LinearProgram::new(1).constraint(point(&[1]), Relation::Le, int(0)).constraint(
            point(&[1]),
            Relation::Ge,
            int(1),
        );
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(verify_infeasibility(&lp, &out.certificate));
    }

    #[test]
    fn unbounded_ray() {
        let lp = LinearProgram::new(2)
            .maximize(point(&[1, 1]))
            .constraint(point(&[1, -1]), Relation::Le, int(2))
            .nonnegative();
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Unbounded);
        assert!(verify_unbounded(&lp, &out.certificate));
    }

    #[test]
    fn feasibility_wrapper() {
        assert_eq!(feasible(2, &[]).unwrap(), Feasibility::Feasible(point(&[0, 0])));
        let simplex = [
            Constraint::new(point(&[1, 1]), Relation::Eq, int(1)),
            Constraint::new(point(&[1, 0]), Relation::Ge, int(0)),
            Constraint::new(point(&[0, 1]), Relation::Ge, int(0)),
        ];
        let Feasibility::Feasible(x) = feasible(2, &simplex).unwrap() else {
            panic!("expected a feasible point");
        };
        assert!(simplex.iter().all(|c| c.holds(&x)));
        let bad =
            [Constraint::new(point(&[1]), Relation::Ge, int(1)), Constraint::new(point(&[1]), Relation::Le, int(0))];
        assert!(matches!(feasible(1, &bad).unwrap(), Feasibility::Infeasible(_)));
    }

    #[test]
    fn bounded_variables_and_certificates() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, 0 <= x <= 3, y >= 0.
        let lp = LinearProgram::new(2)
            .maximize(point(&[3, 2]))
            .constraint(point(&[1, 1]), Relation::Le, int(4))
            .constraint(point(&[1, 3]), Relation::Le, int(6))
            .lower_bound(0, int(0))
            .upper_bound(0, int(3))
            .lower_bound(1, int(0));
        let out = solve(&lp).unwrap();
        assert_eq!(out.value, Some(int(11)));
        assert_eq!(out.point, Some(point(&[3, 1])));
        assert!(verify_optimality(&lp, &out));
    }

    #[test]
    fn upper_bound_only_and_shifted_lower() {
        let lp = LinearProgram::new(2)
            .maximize(vec![int(-1), int(1)])
            .constraint(point(&[1, 1]), Relation::Eq, rat(7, 2))
            .upper_bound(1, int(2))
            .lower_bound(0, rat(1, 3));
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.point, Some(vec![rat(3, 2), int(2)]));
        assert!(verify_optimality(&lp, &out));
    }

    #[test]
    fn rejects_ragged_rows() {
        let lp = LinearProgram::new(2).constraint(point(&[1]), Relation::Le, int(1));
        assert!(matches!(solve(&lp), Err(LpError::DimensionMismatch { .. })));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance (cycles under the textbook largest-coefficient rule).
        let lp = LinearProgram::new(4)
            .maximize(vec![rat(3, 4), int(-150), rat(1, 50), int(-6)])
            .constraint(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], Relation::Le, int(0))
            .constraint(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], Relation::Le, int(0))
            .constraint(point(&[0, 0, 1, 0]), Relation::Le, int(1))
            .nonnegative();
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(rat(1, 20)));
        assert!(verify_optimality(&lp, &out));
    }
}
