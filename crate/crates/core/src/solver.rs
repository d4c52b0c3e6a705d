//! Incremental solving of product equations with push/pop.
//!
//! `e = 1` decomposes into unit assignments at add time. `e = 0` becomes the
//! clause of negated literals and is watched on two of them. Search on top
//! of the store is plain DPLL over a cloned copy, which is enough for the
//! instance sizes that proof search produces.

use crate::boolexpr::{Assignment, BoolExpr, Constraint, Literal, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Consistent,
    Inconsistent,
}

#[derive(Clone, Debug)]
struct Level {
    constraints: usize,
    clauses: usize,
    trail: usize,
    head: usize,
    inconsistent: bool,
    seen: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ConstraintStore {
    constraints: Vec<Constraint>,
    values: Vec<Option<bool>>,
    trail: Vec<Var>,
    head: usize,
    clauses: Vec<Vec<Literal>>,
    watches: Vec<Vec<usize>>,
    levels: Vec<Level>,
    inconsistent: bool,
    // variables mentioned by some constraint, in first-seen order
    seen_order: Vec<Var>,
    seen: Vec<bool>,
}

impl ConstraintStore {
    pub fn new() -> ConstraintStore {
        ConstraintStore::default()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.values.get(v.0 as usize).copied().flatten()
    }

    /// Value of `e` under the propagated partial assignment, if determined.
    pub fn eval(&self, e: &BoolExpr) -> Option<bool> {
        e.eval_partial(|v| self.value(v))
    }

    /// True when `e = 1` would conflict with the store after one round of
    /// reasoning: either `e` already evaluates to 0, or some `= 0` clause
    /// has every literal false once the literals of `e` are assumed.
    pub fn refutes(&self, e: &BoolExpr) -> bool {
        let lits = match e {
            BoolExpr::Zero => return true,
            BoolExpr::Prod(l) => l,
        };
        if self.eval(e) == Some(false) {
            return true;
        }
        if self.inconsistent || lits.is_empty() {
            return false;
        }
        self.clauses.iter().any(|c| {
            c.iter()
                .all(|k| self.lit_value(*k) == Some(false) || lits.contains(&k.negate()))
        })
    }

    /// The propagated partial assignment.
    pub fn current(&self) -> Assignment {
        self.trail.iter().map(|v| (*v, self.value(*v).unwrap())).collect()
    }

    /// Variables mentioned by any constraint, sorted.
    pub fn variables(&self) -> Vec<Var> {
        let mut v = self.seen_order.clone();
        v.sort();
        v
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    fn grow(&mut self, v: Var) {
        let i = v.0 as usize;
        if self.values.len() <= i {
            self.values.resize(i + 1, None);
            self.seen.resize(i + 1, false);
            self.watches.resize(2 * (i + 1), Vec::new());
        }
        if !self.seen[i] {
            self.seen[i] = true;
            self.seen_order.push(v);
        }
    }

    fn lit_value(&self, l: Literal) -> Option<bool> {
        self.value(l.var).map(|b| l.eval(b))
    }

    fn assign(&mut self, l: Literal) -> bool {
        match self.lit_value(l) {
            Some(b) => b,
            None => {
                self.values[l.var.0 as usize] = Some(l.positive);
                self.trail.push(l.var);
                true
            }
        }
    }

    /// Records `c`, propagates, and reports whether the store is still
    /// consistent. Conflicts are detected immediately.
    pub fn add(&mut self, c: Constraint) -> Status {
        for v in c.expr.vars() {
            self.grow(v);
        }
        self.constraints.push(c.clone());
        if self.inconsistent {
            return Status::Inconsistent;
        }
        let ok = match (&c.expr, c.target) {
            (BoolExpr::Zero, false) => true,
            (BoolExpr::Zero, true) => false,
            (BoolExpr::Prod(lits), true) => lits.iter().all(|l| self.assign(*l)),
            (BoolExpr::Prod(lits), false) => {
                let clause: Vec<Literal> = lits.iter().map(|l| l.negate()).collect();
                self.add_clause(clause)
            }
        };
        if !ok || !self.propagate() {
            self.inconsistent = true;
            return Status::Inconsistent;
        }
        Status::Consistent
    }

    pub fn add_all<'a>(&mut self, cs: impl IntoIterator<Item = &'a Constraint>) -> Status {
        let mut st = Status::Consistent;
        for c in cs {
            st = self.add(c.clone());
        }
        st
    }

    fn add_clause(&mut self, mut clause: Vec<Literal>) -> bool {
        match clause.len() {
            0 => return false,
            1 => return self.assign(clause[0]),
            _ => {}
        }
        // true literals first, then unassigned, then false
        clause.sort_by_key(|l| match self.lit_value(*l) {
            Some(true) => 0,
            None => 1,
            Some(false) => 2,
        });
        match (self.lit_value(clause[0]), self.lit_value(clause[1])) {
            (Some(false), _) => return false,
            (None, Some(false)) => {
                if !self.assign(clause[0]) {
                    return false;
                }
            }
            _ => {}
        }
        let idx = self.clauses.len();
        self.watches[clause[0].code()].push(idx);
        self.watches[clause[1].code()].push(idx);
        self.clauses.push(clause);
        true
    }

    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let v = self.trail[self.head];
            self.head += 1;
            let falsified = Literal {
                var: v,
                positive: !self.values[v.0 as usize].unwrap(),
            };
            let watching = std::mem::take(&mut self.watches[falsified.code()]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for ci in watching {
                if conflict {
                    keep.push(ci);
                    continue;
                }
                if self.clauses[ci][0] == falsified {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.lit_value(first) == Some(true) {
                    keep.push(ci);
                    continue;
                }
                let replacement = (2..self.clauses[ci].len())
                    .find(|&k| self.lit_value(self.clauses[ci][k]) != Some(false));
                if let Some(k) = replacement {
                    self.clauses[ci].swap(1, k);
                    let w = self.clauses[ci][1].code();
                    self.watches[w].push(ci);
                    continue;
                }
                keep.push(ci);
                match self.lit_value(first) {
                    None => {
                        self.assign(first);
                    }
                    _ => conflict = true,
                }
            }
            self.watches[falsified.code()].extend(keep);
            if conflict {
                return false;
            }
        }
        true
    }

    pub fn push(&mut self) {
        self.levels.push(Level {
            constraints: self.constraints.len(),
            clauses: self.clauses.len(),
            trail: self.trail.len(),
            head: self.head,
            inconsistent: self.inconsistent,
            seen: self.seen_order.len(),
        });
    }

    pub fn pop(&mut self) -> Result<()> {
        let lvl = self.levels.pop().ok_or(Error::PopEmpty)?;
        self.constraints.truncate(lvl.constraints);
        for ci in lvl.clauses..self.clauses.len() {
            let (a, b) = (self.clauses[ci][0].code(), self.clauses[ci][1].code());
            self.watches[a].retain(|&i| i != ci);
            self.watches[b].retain(|&i| i != ci);
        }
        self.clauses.truncate(lvl.clauses);
        for v in self.trail.drain(lvl.trail..) {
            self.values[v.0 as usize] = None;
        }
        self.head = lvl.head;
        self.inconsistent = lvl.inconsistent;
        for v in self.seen_order.drain(lvl.seen..) {
            self.seen[v.0 as usize] = false;
        }
        Ok(())
    }

    /// True iff the constraints have a solution. The store is unchanged.
    pub fn check_sat(&self) -> bool {
        !self.inconsistent && self.clone().dpll(false)
    }

    /// A total assignment over the store's variables, or `None` when the
    /// constraints are unsatisfiable. Decisions try `default` first, in
    /// increasing variable order; unconstrained variables get `default`.
    pub fn solve(&self, default: bool) -> Option<Assignment> {
        if self.inconsistent {
            return None;
        }
        let mut s = self.clone();
        if !s.dpll(default) {
            return None;
        }
        Some(
            s.variables()
                .into_iter()
                .map(|v| (v, s.value(v).unwrap_or(default)))
                .collect(),
        )
    }

    fn open_var(&self) -> Option<Var> {
        // lowest unassigned variable of an unsatisfied clause
        self.clauses
            .iter()
            .filter(|c| !c.iter().any(|l| self.lit_value(*l) == Some(true)))
            .flat_map(|c| c.iter())
            .filter(|l| self.lit_value(**l).is_none())
            .map(|l| l.var)
            .min()
    }

    fn dpll(&mut self, default: bool) -> bool {
        let Some(v) = self.open_var() else {
            return true;
        };
        for bit in [default, !default] {
            let mut s = self.clone();
            s.assign(Literal { var: v, positive: bit });
            if s.propagate() && s.dpll(default) {
                *self = s;
                return true;
            }
        }
        false
    }
}

/// Exhaustive satisfiability by truth table; exponential, test use only.
pub fn truth_table_sat(constraints: &[Constraint]) -> Option<Assignment> {
    let mut vars: Vec<Var> = constraints.iter().flat_map(|c| c.expr.vars()).collect();
    vars.sort();
    vars.dedup();
    assert!(vars.len() <= 20, "truth table over {} variables", vars.len());
    (0u32..1 << vars.len()).find_map(|bits| {
        let a: Assignment = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, bits >> i & 1 == 1))
            .collect();
        constraints.iter().all(|c| c.holds(&a).unwrap()).then_some(a)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolexpr::parse_constraints;

    fn store(text: &str) -> ConstraintStore {
        let mut s = ConstraintStore::new();
        for c in parse_constraints(text).unwrap() {
            s.add(c);
        }
        s
    }

    #[test]
    fn one_constraint_assigns_units() {
        let s = store("x1.x2 = 1");
        assert_eq!(s.value(Var(1)), Some(true));
        assert_eq!(s.value(Var(2)), Some(true));
    }

    #[test]
    fn contradiction_is_eager() {
        let mut s = ConstraintStore::new();
        assert_eq!(s.add("x1 = 1".parse().unwrap()), Status::Consistent);
        assert_eq!(s.add("x1 = 0".parse().unwrap()), Status::Inconsistent);
        assert!(!s.check_sat());
    }

    #[test]
    fn zero_pair_forces_by_search() {
        // x4.y4 = 0 and x4.~y4 = 0 leave x4 = 0 as the only option
        let s = store("x4.x5 = 0\nx4.~x5 = 0\nx4 = 1");
        assert!(!s.check_sat());
        let s = store("x4.x5 = 0\nx4.~x5 = 0");
        let a = s.solve(true).unwrap();
        assert_eq!(a.get(Var(4)), Some(false));
    }

    #[test]
    fn clause_propagation_chain() {
        let s = store("x1.x2 = 0\nx1 = 1");
        assert_eq!(s.value(Var(2)), Some(false));
        let s = store("x1.x2.x3 = 0\nx3 = 1\nx2 = 1");
        assert_eq!(s.value(Var(1)), Some(false));
    }

    #[test]
    fn push_pop_restores_state() {
        let mut s = ConstraintStore::new();
        s.push();
        s.add("x1 = 1".parse().unwrap());
        assert_eq!(s.value(Var(1)), Some(true));
        s.pop().unwrap();
        assert_eq!(s.value(Var(1)), None);
        assert!(s.constraints().is_empty());

        s.push();
        s.add("x1 = 1".parse().unwrap());
        s.add("x1 = 0".parse().unwrap());
        assert!(!s.is_consistent());
        s.pop().unwrap();
        assert_eq!(s.add("x1 = 1".parse().unwrap()), Status::Consistent);
        assert!(s.pop().is_err());
    }

    #[test]
    fn nested_levels_are_lifo() {
        let mut s = store("x1.x2 = 0");
        s.push();
        s.add("x1 = 1".parse().unwrap());
        s.push();
        s.add("x3.x2 = 1".parse().unwrap());
        assert!(!s.is_consistent());
        s.pop().unwrap();
        assert!(s.is_consistent());
        assert_eq!(s.value(Var(2)), Some(false));
        s.pop().unwrap();
        assert_eq!(s.value(Var(2)), None);
        s.add("x2 = 1".parse().unwrap());
        assert_eq!(s.value(Var(1)), Some(false));
    }

    #[test]
    fn empty_store() {
        let s = ConstraintStore::new();
        assert!(s.check_sat());
        assert!(s.solve(false).unwrap().is_empty());
    }

    #[test]
    fn constants() {
        let s = store("0 = 0\n1 = 1");
        assert!(s.is_consistent());
        assert!(!store("0 = 1").is_consistent());
        assert!(!store("1 = 0").is_consistent());
    }
}
