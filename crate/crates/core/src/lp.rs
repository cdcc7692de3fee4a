//! A small exact two-phase simplex, used to find witnesses for degenerate
//! supports. Sizes here are a handful of variables, so a dense tableau and
//! Bland's rule are plenty.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// `maximize c.x  s.t.  eq rows: a.x = b,  le rows: a.x <= b,  x >= 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub eq: Vec<(Vec<Rational>, Rational)>,
    pub le: Vec<(Vec<Rational>, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations for `cost` over the allowed columns.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            // Bland: lowest-index column with positive reduced cost.
            let entering = (0..self.width).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: Rational = self
                    .rows
                    .iter()
                    .zip(&self.basis)
                    .map(|(row, &b)| &cost[b] * &row[j])
                    .sum();
                (&cost[j] - z).is_positive()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = self.rhs(i) / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

pub fn maximize(lp: &LinearProgram) -> LpOutcome {
    let n = lp.objective.len();
    let m_le = lp.le.len();
    // Normalize every row to a non-negative right-hand side.
    // Column layout: originals | slack/surplus per le row | artificial per row needing one.
    let mut rows: Vec<(Vec<Rational>, Rational, Option<Rational>)> = Vec::new();
    for (a, b) in &lp.le {
        debug_assert_eq!(a.len(), n);
        if b.is_negative() {
            rows.push((a.iter().map(|v| -v).collect(), -b, Some(-Rational::one())));
        } else {
            rows.push((a.clone(), b.clone(), Some(Rational::one())));
        }
    }
    for (a, b) in &lp.eq {
        debug_assert_eq!(a.len(), n);
        if b.is_negative() {
            rows.push((a.iter().map(|v| -v).collect(), -b, None));
        } else {
            rows.push((a.clone(), b.clone(), None));
        }
    }

    let needs_artificial: Vec<bool> = rows
        .iter()
        .map(|(_, _, slack)| !matches!(slack, Some(s) if s.is_positive()))
        .collect();
    let n_art = needs_artificial.iter().filter(|&&x| x).count();
    let width = n + m_le + n_art;
    let first_art = n + m_le;

    let mut t = Tableau {
        rows: Vec::with_capacity(rows.len()),
        basis: Vec::with_capacity(rows.len()),
        width,
    };
    let mut next_art = first_art;
    for (i, (a, b, slack)) in rows.into_iter().enumerate() {
        let mut row = vec![Rational::zero(); width + 1];
        row[..n].clone_from_slice(&a);
        if let Some(s) = slack {
            row[n + i] = s;
        }
        row[width] = b;
        if needs_artificial[i] {
            row[next_art] = Rational::one();
            t.basis.push(next_art);
            next_art += 1;
        } else {
            t.basis.push(n + i);
        }
        t.rows.push(row);
    }

    if n_art > 0 {
        let mut phase1 = vec![Rational::zero(); width];
        for c in phase1.iter_mut().skip(first_art) {
            *c = -Rational::one();
        }
        t.optimize(&phase1, &|_| true);
        let infeasibility: Rational = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= first_art)
            .map(|(i, _)| t.rhs(i).clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_art {
                match (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut cost = vec![Rational::zero(); width];
    cost[..n].clone_from_slice(&lp.objective);
    if !t.optimize(&cost, &|j| j < first_art) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i).clone();
        }
    }
    let value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { x, value }
}
