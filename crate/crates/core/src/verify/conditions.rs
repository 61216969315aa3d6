//! Grid audits of the condition lists.
//!
//! The model is tabulated once on the `(K+1)×(K+1)` grid `(i/K, j/K)`;
//! every condition then reads from the table, with extra evaluations only
//! for `b = 1/2` and for the involution probe `J(a, J(a,b))`.

use rayon::prelude::*;

use super::report::{ConditionList, ConditionReport, Violation};
use crate::domain::Prob;
use crate::error::{Error, Result};
use crate::model::JamesianModel;

/// Fewest grid cells an audit accepts.
pub const MIN_CELLS: usize = 10;

#[derive(Debug, Clone)]
enum Cell {
    Value(f64),
    Undefined,
    Failed(Error),
}

impl Cell {
    fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            _ => None,
        }
    }
}

fn eval_cell(model: &JamesianModel, a: f64, b: f64) -> Cell {
    match Prob::new(a).and_then(|a| Prob::new(b).map(|b| (a, b))) {
        Ok((pa, pb)) => match model.evaluate(pa, pb) {
            Ok(v) => Cell::Value(v.value()),
            Err(Error::UndefinedMatchup { .. }) => Cell::Undefined,
            Err(e) => Cell::Failed(e),
        },
        Err(e) => Cell::Failed(e),
    }
}

struct Audit<'a> {
    model: &'a JamesianModel,
    k: usize,
    tol: f64,
    grid: Vec<f64>,
    table: Vec<Vec<Cell>>,
    violations: Vec<Violation>,
}

impl<'a> Audit<'a> {
    fn new(model: &'a JamesianModel, k: usize, tol: f64) -> Self {
        let grid: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
        let table = grid
            .par_iter()
            .map(|&a| grid.iter().map(|&b| eval_cell(model, a, b)).collect())
            .collect();
        Audit {
            model,
            k,
            tol,
            grid,
            table,
            violations: Vec::new(),
        }
    }

    fn push(&mut self, id: &str, i: usize, j: usize, magnitude: f64) {
        self.violations.push(Violation::new(
            id,
            self.grid[i],
            Some(self.grid[j]),
            magnitude,
        ));
    }

    /// Records evaluation failures once, under the id `evaluation`.
    fn failures(&mut self) {
        for i in 0..=self.k {
            for j in 0..=self.k {
                if let Cell::Failed(e) = &self.table[i][j] {
                    let v = Violation::failed("evaluation", self.grid[i], Some(self.grid[j]), e);
                    self.violations.push(v);
                }
            }
        }
    }

    fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.table[i][j].value()
    }

    /// `P(a, 1/2) = a` for every grid `a`.
    fn half_column(&mut self, id: &str) {
        let model = self.model;
        let half: Vec<Cell> = self
            .grid
            .par_iter()
            .map(|&a| eval_cell(model, a, 0.5))
            .collect();
        for (i, cell) in half.into_iter().enumerate() {
            let a = self.grid[i];
            match cell {
                Cell::Value(v) => {
                    let r = (v - a).abs();
                    if r > self.tol {
                        self.violations.push(Violation::new(id, a, Some(0.5), r));
                    }
                }
                Cell::Failed(e) => self
                    .violations
                    .push(Violation::failed(id, a, Some(0.5), &e)),
                Cell::Undefined => {}
            }
        }
    }

    /// `P(b, a) = 1 − P(a, b)`.
    fn complement(&mut self, id: &str) {
        for i in 0..=self.k {
            for j in i..=self.k {
                if let (Some(p), Some(q)) = (self.get(i, j), self.get(j, i)) {
                    let r = (q - (1.0 - p)).abs();
                    if r > self.tol {
                        self.push(id, i, j, r);
                    }
                }
            }
        }
    }

    /// `P(1 − b, 1 − a) = P(a, b)`.
    fn loss_side(&mut self, id: &str) {
        let k = self.k;
        for i in 0..=k {
            for j in 0..=k {
                if let (Some(p), Some(q)) = (self.get(i, j), self.get(k - j, k - i)) {
                    let r = (q - p).abs();
                    if r > self.tol {
                        self.push(id, i, j, r);
                    }
                }
            }
        }
    }

    /// Non-decreasing in `a` on the edges `b ∈ {0, 1}`, strictly increasing
    /// for `0 < b < 1`, compared between neighbouring grid points.
    fn monotone(&mut self, id: &str) {
        let k = self.k;
        for j in 0..=k {
            let strict = j > 0 && j < k;
            for i in 0..k {
                if let (Some(lo), Some(hi)) = (self.get(i, j), self.get(i + 1, j)) {
                    let bad = if strict { hi <= lo } else { hi < lo };
                    if bad {
                        self.push(id, i, j, lo - hi);
                    }
                }
            }
        }
    }

    /// `P(a, 0) = 1` for `0 < a <= 1`.
    fn zero_column(&mut self, id: &str) {
        for i in 1..=self.k {
            if let Some(v) = self.get(i, 0) {
                let r = (v - 1.0).abs();
                if r > self.tol {
                    self.push(id, i, 0, r);
                }
            }
        }
    }

    fn proto(&mut self) {
        let k = self.k;
        // (1) P(a,a) = 1/2
        for i in 1..k {
            if let Some(v) = self.get(i, i) {
                let r = (v - 0.5).abs();
                if r > self.tol {
                    self.push("1", i, i, r);
                }
            }
        }
        // (2) P(a,1/2) = a
        self.half_column("2");
        for i in 0..=k {
            for j in 0..=k {
                let Some(v) = self.get(i, j) else { continue };
                let (a, b) = (self.grid[i], self.grid[j]);
                // (3) a > b ⇒ P > 1/2, a < b ⇒ P < 1/2
                if a > b && v <= 0.5 {
                    self.push("3", i, j, 0.5 - v);
                } else if a < b && v >= 0.5 {
                    self.push("3", i, j, v - 0.5);
                }
                // (4) for 0 < a < 1: b < 1/2 ⇒ P > a, b > 1/2 ⇒ P < a
                if i > 0 && i < k {
                    if b < 0.5 && v <= a {
                        self.push("4", i, j, a - v);
                    } else if b > 0.5 && v >= a {
                        self.push("4", i, j, v - a);
                    }
                }
                // (5) 0 <= P <= 1
                if !(0.0..=1.0).contains(&v) {
                    self.push("5", i, j, if v < 0.0 { -v } else { v - 1.0 });
                }
            }
        }
        // (5) P(a,0) = 1 and P(a,1) = 0 for 0 < a < 1
        for i in 1..k {
            if let Some(v) = self.get(i, 0) {
                if (v - 1.0).abs() > self.tol {
                    self.push("5", i, 0, (v - 1.0).abs());
                }
            }
            if let Some(v) = self.get(i, k) {
                if v.abs() > self.tol {
                    self.push("5", i, k, v.abs());
                }
            }
        }
        // (6) P(a,b) + P(b,a) = 1
        self.complement("6");
    }

    fn james(&mut self) {
        self.half_column("a");
        self.zero_column("b");
        self.complement("c");
        self.loss_side("d");
        self.monotone("e");
    }

    fn involutive(&mut self) {
        let k = self.k;
        // (i) J(a, J(a,b)) = b for 0 < a < 1
        let (grid, table, model) = (&self.grid, &self.table, self.model);
        let probes: Vec<(usize, usize, Cell)> = (1..k)
            .into_par_iter()
            .flat_map_iter(|i| {
                let a = grid[i];
                (0..=k).filter_map(move |j| {
                    table[i][j].value().map(|c| (i, j, eval_cell(model, a, c)))
                })
            })
            .collect();
        for (i, j, cell) in probes {
            match cell {
                Cell::Value(back) => {
                    let r = (back - self.grid[j]).abs();
                    if r > self.tol {
                        self.push("i", i, j, r);
                    }
                }
                Cell::Failed(e) => {
                    let v = Violation::failed("i", self.grid[i], Some(self.grid[j]), &e);
                    self.violations.push(v);
                }
                Cell::Undefined => self.push("i", i, j, 1.0),
            }
        }
        self.complement("ii");
        self.monotone("iii");
    }
}

/// Audits `model` against a condition list on the grid with mesh `1/cells`.
///
/// Equalities are checked as absolute residuals against `tol`; strict
/// inequalities use a zero margin.
pub fn check_conditions(
    model: &JamesianModel,
    list: ConditionList,
    cells: usize,
    tol: f64,
) -> Result<ConditionReport> {
    if cells < MIN_CELLS {
        return Err(Error::Param(format!(
            "audit grid needs at least {MIN_CELLS} cells, got {cells}"
        )));
    }
    if !(tol >= 0.0) {
        return Err(Error::Param(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let mut audit = Audit::new(model, cells, tol);
    audit.failures();
    match list {
        ConditionList::James => audit.james(),
        ConditionList::Proto => audit.proto(),
        ConditionList::Involutive => audit.involutive(),
        ConditionList::GeneratorSelfcheck => {
            return Err(Error::Param(
                "generator self-check runs on a generator, not a model".into(),
            ))
        }
    }
    Ok(ConditionReport {
        model_name: model.name().to_string(),
        condition_list: list,
        grid_mesh: 1.0 / cells as f64,
        tolerance: tol,
        violations: audit.violations,
    })
}
