//! Exact linear programming over rationals.
//!
//! Dense two-phase simplex with Bland's anti-cycling rule. All variables are
//! non-negative; the objective is minimized. Intended for desk-scale systems
//! (tens of variables, hundreds of rows), where exactness matters more than
//! speed.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        LinearProgram { vars, objective: vec![Rational::zero(); vars], constraints: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Sets the objective to minimize.
    pub fn minimize(&mut self, objective: Vec<Rational>) -> &mut Self {
        assert_eq!(objective.len(), self.vars);
        self.objective = objective;
        self
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.vars);
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
        self
    }

    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.iter().all(|x| !x.is_negative()) && self.constraints.iter().all(|c| c.is_satisfied(point))
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    /// Each row: coefficients over all columns followed by the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    originals: usize,
    artificial_start: usize,
    columns: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.vars;
        let slacks = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let artificials = lp
            .constraints
            .iter()
            .filter(|c| {
                let flipped = c.rhs.is_negative();
                matches!((c.relation, flipped), (Relation::Ge, false) | (Relation::Le, true) | (Relation::Eq, _))
            })
            .count();
        let artificial_start = n + slacks;
        let columns = artificial_start + artificials;

        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut basis = Vec::with_capacity(lp.constraints.len());
        let (mut next_slack, mut next_art) = (n, artificial_start);
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let sign = if flip { -Rational::one() } else { Rational::one() };
            let relation = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            let mut row = vec![Rational::zero(); columns + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = a * &sign;
            }
            row[columns] = &c.rhs * &sign;
            match relation {
                Relation::Le => {
                    row[next_slack] = Rational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Tableau { rows, basis, originals: n, artificial_start, columns }
    }

    fn solve(mut self, objective: &[Rational]) -> LpOutcome {
        if self.columns > self.artificial_start {
            let mut phase1 = vec![Rational::zero(); self.columns];
            for c in phase1.iter_mut().skip(self.artificial_start) {
                *c = Rational::one();
            }
            let usable = self.columns;
            if !self.optimize(&phase1, usable) {
                unreachable!("phase one is bounded below by zero");
            }
            if self.objective_value(&phase1).is_positive() {
                return LpOutcome::Infeasible;
            }
            self.evict_artificials();
        }
        let mut costs = vec![Rational::zero(); self.columns];
        costs[..self.originals].clone_from_slice(objective);
        let usable = self.artificial_start;
        if !self.optimize(&costs, usable) {
            return LpOutcome::Unbounded;
        }
        let mut point = vec![Rational::zero(); self.originals];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.originals {
                point[b] = self.rows[r][self.columns].clone();
            }
        }
        let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
        LpOutcome::Optimal { point, value }
    }

    fn objective_value(&self, costs: &[Rational]) -> Rational {
        self.basis.iter().enumerate().map(|(r, &b)| &costs[b] * &self.rows[r][self.columns]).sum()
    }

    /// Runs simplex iterations over columns `< usable`. Returns false when
    /// the problem is unbounded.
    fn optimize(&mut self, costs: &[Rational], usable: usize) -> bool {
        loop {
            // Bland: first column with negative reduced cost enters.
            let entering = (0..usable).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced: Rational = &costs[j]
                    - self.basis.iter().enumerate().map(|(r, &b)| &costs[b] * &self.rows[r][j]).sum::<Rational>();
                reduced.is_negative()
            });
            let Some(j) = entering else { return true };

            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[self.columns] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let pivot = self.rows[r][j].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        self.basis[r] = j;
    }

    /// After a zero-cost phase one, pivots remaining (zero-valued)
    /// artificial variables out of the basis, dropping redundant rows.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }
}
