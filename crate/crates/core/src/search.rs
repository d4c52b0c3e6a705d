//! Backtracking proof search over the resource calculi.
//!
//! The search keeps one global constraint store. Every rule application
//! runs under a store level, so backtracking pops the constraints it
//! added. Strategies differ only in which open goal is expanded next and
//! in how often the store is checked for satisfiability.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boolexpr::{Assignment, BoolExpr, Constraint, Var, VarAllocator};
use crate::bunch::{Bunch, BunchNode};
use crate::calculus::{self, applicable, modal_guard, CalculusOptions, Principal, RuleId, RuleInstance};
use crate::context::tag_ll;
use crate::error::{Error, Result};
use crate::formula::Logic;
use crate::sequent::{BiSequent, LlSequent, PlainSequent, Sequent};
use crate::solver::{ConstraintStore, Status};

/// Order in which an intermediate strategy visits branches between checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BatchOrder {
    /// Left to right, as the lazy strategy does.
    DepthFirst,
    /// Corresponding positions of sibling subtrees first, e.g. P1, P3, P2, P4.
    Interleaved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    Lazy,
    Eager,
    Intermediate { n: usize, order: BatchOrder },
    FactFirst,
}

impl Strategy {
    /// Closed branches between satisfiability checks; `None` means only
    /// at the end.
    pub fn batch(&self) -> Option<usize> {
        match self {
            Strategy::Lazy | Strategy::FactFirst => Some(1),
            Strategy::Eager => None,
            Strategy::Intermediate { n, .. } => Some(*n),
        }
    }

    pub fn intermediate(n: usize) -> Strategy {
        Strategy::Intermediate { n, order: BatchOrder::DepthFirst }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Lazy => f.write_str("lazy"),
            Strategy::Eager => f.write_str("eager"),
            Strategy::FactFirst => f.write_str("fact-first"),
            Strategy::Intermediate { n, order: BatchOrder::DepthFirst } => write!(f, "n={n}"),
            Strategy::Intermediate { n, order: BatchOrder::Interleaved } => write!(f, "n={n}:interleaved"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Malformed(format!("strategy '{s}': {why}"));
        match s.trim() {
            "lazy" => Ok(Strategy::Lazy),
            "eager" => Ok(Strategy::Eager),
            "fact-first" | "fact_first" => Ok(Strategy::FactFirst),
            t => {
                let rest = t.strip_prefix("n=").ok_or_else(|| bad("expected lazy, eager, fact-first or n=<k>"))?;
                let (num, order) = match rest.split_once(':') {
                    None => (rest, BatchOrder::DepthFirst),
                    Some((num, "interleaved")) => (num, BatchOrder::Interleaved),
                    Some((num, "depth-first")) => (num, BatchOrder::DepthFirst),
                    Some(_) => return Err(bad("unknown batch order")),
                };
                let n: usize = num.parse().map_err(|_| bad("n is not a number"))?;
                if n < 2 {
                    return Err(bad("n must be at least 2; use lazy for 1"));
                }
                Ok(Strategy::Intermediate { n, order })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Longest root-to-leaf path.
    pub max_depth: usize,
    /// Contraction steps allowed along one branch.
    pub contraction_bound: usize,
    /// Rule applications tried before the search gives up.
    pub node_budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_depth: 64,
            contraction_bound: 2,
            node_budget: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub limits: SearchLimits,
    pub calculus: CalculusOptions,
    /// Value given to variables the constraints leave free.
    pub default_bit: bool,
    pub trace: bool,
    /// Forces the first rule applied to the endsequent.
    pub root_rule: Option<RuleInstance>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::Lazy,
            limits: SearchLimits::default(),
            calculus: CalculusOptions::default(),
            default_bit: false,
            trace: false,
            root_rule: None,
        }
    }
}

impl SearchConfig {
    pub fn with_strategy(strategy: Strategy) -> SearchConfig {
        SearchConfig {
            strategy,
            ..SearchConfig::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailReason {
    /// Every alternative within the limits was refuted.
    Exhausted,
    /// A limit cut some alternative off, so the answer is not definitive.
    Budget,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailReason::Exhausted => "exhausted",
            FailReason::Budget => "budget",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Rule applications tried, including ones later undone.
    pub nodes: usize,
    /// Satisfiability checks, including the final one.
    pub solver_calls: usize,
    /// Complete derivations whose store was checked at the end.
    pub final_checks: usize,
    /// Of those, how many had an unsatisfiable store.
    pub final_unsat: usize,
}

/// A node of a resource derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceTree {
    pub sequent: Sequent,
    pub rule: RuleInstance,
    pub emitted: Vec<Constraint>,
    pub fresh: Vec<Var>,
    pub children: Vec<ResourceTree>,
}

impl ResourceTree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ResourceTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(ResourceTree::height).max().unwrap_or(0)
    }

    /// Every constraint emitted anywhere in the tree, root first.
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        self.walk(&mut |t| out.extend(t.emitted.iter().cloned()));
        out
    }

    /// The node at preorder index `at`.
    pub fn node(&self, at: usize) -> Option<&ResourceTree> {
        let mut seen = 0;
        let mut found = None;
        self.walk(&mut |t| {
            if seen == at {
                found = Some(t);
            }
            seen += 1;
        });
        found
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ResourceTree)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    /// Expression of the principal formula, when the rule has one.
    pub fn principal_expr(&self) -> Option<BoolExpr> {
        principal_expr(&self.sequent, &self.rule.principal)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = Vec::new();
        self.walk(&mut |t| {
            v.extend(t.sequent.vars());
            v.extend(t.fresh.iter().copied());
        });
        v.sort();
        v.dedup();
        v
    }
}

/// The expression (or effective expression) of the formulas `p` names.
pub fn principal_expr(seq: &Sequent, p: &Principal) -> Option<BoolExpr> {
    match (seq, p) {
        (Sequent::Ll(s), Principal::Ante(i)) => s.ante.get(*i).map(|a| a.expr.clone()),
        (Sequent::Ll(s), Principal::Succ(j)) => s.succ.get(*j).map(|a| a.expr.clone()),
        (Sequent::Ll(s), Principal::Pair { ante, succ }) => {
            let a = s.ante.get(*ante)?;
            let b = s.succ.get(*succ)?;
            Some(a.expr.mul(&b.expr))
        }
        (Sequent::Bi(s), Principal::At(a)) => s.ante.effective_expr(a).ok(),
        (Sequent::Bi(s), Principal::Keep { at, keep }) => {
            let mut a = at.clone();
            a.push(*keep);
            s.ante.effective_expr(&a).ok()
        }
        _ => None,
    }
}

/// A closed resource derivation with a total assignment that satisfies
/// its constraints and sets every endsequent variable to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceProof {
    pub logic: Logic,
    /// The plain endsequent as it was written.
    pub goal: PlainSequent,
    pub tree: ResourceTree,
    pub endsequent_vars: Vec<Var>,
    pub assignment: Assignment,
}

impl ResourceProof {
    /// Constraints of the derivation plus `v = 1` for endsequent variables.
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out: Vec<Constraint> = self
            .endsequent_vars
            .iter()
            .map(|v| Constraint::one(BoolExpr::var(*v)))
            .collect();
        out.extend(self.tree.constraints());
        out
    }

    pub fn endsequent(&self) -> &Sequent {
        &self.tree.sequent
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Proved(Box<ResourceProof>),
    NotProved(FailReason),
}

impl Outcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, Outcome::Proved(_))
    }

    pub fn proof(&self) -> Option<&ResourceProof> {
        match self {
            Outcome::Proved(p) => Some(p),
            Outcome::NotProved(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub stats: SearchStats,
    /// One line per rule application when tracing is on.
    pub trace: Vec<String>,
}

/// Tags every endsequent formula (LL) or leaf (BI) with its own fresh
/// variable. Returns the resource sequent and the variables.
pub fn tag_endsequent(seq: &PlainSequent, alloc: &mut VarAllocator) -> (Sequent, Vec<Var>) {
    match seq.to_resource() {
        Sequent::Ll(s) => {
            let (ante, mut vars) = tag_ll(&s.ante, alloc);
            let (succ, w) = tag_ll(&s.succ, alloc);
            vars.extend(w);
            (Sequent::Ll(LlSequent { ante, succ }), vars)
        }
        Sequent::Bi(s) => {
            let mut vars = Vec::new();
            let ante = tag_leaves(&s.ante, alloc, &mut vars);
            (Sequent::Bi(BiSequent { ante, succ: s.succ }), vars)
        }
    }
}

fn tag_leaves(b: &Bunch, alloc: &mut VarAllocator, vars: &mut Vec<Var>) -> Bunch {
    use crate::boolexpr::Fresh;
    match &b.node {
        BunchNode::Comma(c) | BunchNode::Semi(c) => {
            let kids = c.iter().map(|k| tag_leaves(k, alloc, vars)).collect();
            let node = if b.is_comma() { BunchNode::Comma(kids) } else { BunchNode::Semi(kids) };
            Bunch::new(node).with_expr(b.expr.clone())
        }
        BunchNode::Leaf(_) => {
            let v = alloc.fresh();
            vars.push(v);
            b.clone().times(&BoolExpr::var(v))
        }
        _ => b.clone(),
    }
}

/// Searches for a resource proof of `seq` in `logic`.
pub fn prove(seq: &PlainSequent, logic: Logic, config: &SearchConfig) -> Result<SearchResult> {
    if !seq.fits(logic) {
        let bad = seq.formulas().into_iter().find(|f| !f.in_logic(logic));
        return Err(match bad.and_then(|f| f.foreign_connective(logic)) {
            Some(c) => Error::NotInLogic {
                connective: c.to_string(),
                logic,
                pos: 0,
            },
            None => Error::Malformed(format!("sequent shape does not match {logic}")),
        });
    }
    let mut alloc = VarAllocator::new();
    let (root, vars) = tag_endsequent(seq, &mut alloc);
    spawn_search(root, seq.clone(), vars, alloc, logic, config)
}

/// Searches from an already tagged endsequent. Variables in `vars` are
/// asserted to be 1.
pub fn prove_tagged(
    root: Sequent,
    vars: Vec<Var>,
    alloc: VarAllocator,
    logic: Logic,
    config: &SearchConfig,
) -> Result<SearchResult> {
    let ones: Assignment = root.vars().into_iter().map(|v| (v, true)).collect();
    let goal = root.restrict(&ones)?;
    spawn_search(root, goal, vars, alloc, logic, config)
}

fn spawn_search(
    root: Sequent,
    goal: PlainSequent,
    vars: Vec<Var>,
    alloc: VarAllocator,
    logic: Logic,
    config: &SearchConfig,
) -> Result<SearchResult> {
    // deep derivations recurse once per rule application
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(scope, || run_search(root, goal, vars, alloc, logic, config))
            .map_err(|e| Error::Malformed(format!("cannot start search thread: {e}")))?
            .join()
            .map_err(|_| Error::Malformed("search thread panicked".into()))?
    })
}

fn run_search(
    root: Sequent,
    goal: PlainSequent,
    vars: Vec<Var>,
    alloc: VarAllocator,
    logic: Logic,
    config: &SearchConfig,
) -> Result<SearchResult> {
    let mut store = ConstraintStore::new();
    for v in &vars {
        store.add(Constraint::one(BoolExpr::var(*v)));
    }
    let mut s = Searcher {
        cfg: config,
        nodes: vec![Node::new(root, 0, Vec::new(), 0)],
        goals: vec![0],
        store,
        alloc,
        stats: SearchStats::default(),
        trace: Vec::new(),
        since_check: 0,
        cut: false,
        solution: None,
    };
    let proved = match s.run_root() {
        Ok(b) => b,
        Err(Abort) => {
            return Ok(SearchResult {
                outcome: Outcome::NotProved(FailReason::Budget),
                stats: s.stats,
                trace: s.trace,
            })
        }
    };
    let outcome = if proved {
        let tree = s.build(0);
        let mut assignment = s.solution.take().unwrap_or_default();
        for v in tree.vars().into_iter().chain(vars.iter().copied()) {
            if assignment.get(v).is_none() {
                assignment.set(v, config.default_bit);
            }
        }
        Outcome::Proved(Box::new(ResourceProof {
            logic,
            goal,
            tree,
            endsequent_vars: vars,
            assignment,
        }))
    } else if s.cut {
        Outcome::NotProved(FailReason::Budget)
    } else {
        Outcome::NotProved(FailReason::Exhausted)
    };
    Ok(SearchResult {
        outcome,
        stats: s.stats,
        trace: s.trace,
    })
}

#[derive(Debug)]
struct Abort;

#[derive(Clone, Debug)]
struct Node {
    seq: Sequent,
    depth: usize,
    /// Premise indices of the branching rules above this node.
    path: Vec<u16>,
    contractions: usize,
    inst: Option<RuleInstance>,
    emitted: Vec<Constraint>,
    fresh: Vec<Var>,
    children: Vec<usize>,
    /// Principal expressions assumed 0 here. Eager search ignores an
    /// inconsistent store, so the store alone cannot hide these items.
    absent: Vec<BoolExpr>,
}

impl Node {
    fn new(seq: Sequent, depth: usize, path: Vec<u16>, contractions: usize) -> Node {
        Node {
            seq,
            depth,
            path,
            contractions,
            inst: None,
            emitted: Vec::new(),
            fresh: Vec::new(),
            children: Vec::new(),
            absent: Vec::new(),
        }
    }
}

enum Alt {
    Apply(RuleInstance),
    /// Decide that the item with this expression is not present.
    Absent(BoolExpr),
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    nodes: Vec<Node>,
    goals: Vec<usize>,
    store: ConstraintStore,
    alloc: VarAllocator,
    stats: SearchStats,
    trace: Vec<String>,
    since_check: usize,
    cut: bool,
    solution: Option<Assignment>,
}

fn invertible(r: RuleId) -> bool {
    use RuleId::*;
    matches!(
        r,
        TensorL | ParR | LolliR | BotR | OneL | NegL | NegR | WithR | PlusL | StarL | AndL | IL | TrueL | OrL | WandR | ImpR | AndR
    )
}

/// Rank among non-invertible alternatives: leaves, then one-premise
/// rules, then splits (antecedent principal first), then weakening, then
/// contraction.
fn rank(seq: &Sequent, inst: &RuleInstance) -> u8 {
    use RuleId::*;
    // weakening down to the succedent itself closes next step, so try it like a leaf
    if let (W, Principal::Keep { at, keep }, Sequent::Bi(s)) = (inst.rule, &inst.principal, seq) {
        let kept = s.ante.get(at).and_then(|b| b.children().get(*keep));
        if kept.and_then(Bunch::formula) == Some(&s.succ) {
            return 0;
        }
    }
    match inst.rule {
        r if r.is_leaf() => 0,
        r if r.is_contraction() => 6,
        W | WeakBangL | WeakQuestR => 5,
        StarR => 4,
        TensorR => 4,
        WandL | ParL | LolliL => 3,
        _ => 1,
    }
}

impl Searcher<'_> {
    fn eager(&self) -> bool {
        self.cfg.strategy.batch().is_none()
    }

    fn dead(&self, e: &BoolExpr) -> bool {
        self.store.refutes(e)
    }

    fn run_root(&mut self) -> std::result::Result<bool, Abort> {
        match self.cfg.root_rule.clone() {
            None => self.run(),
            Some(inst) => {
                self.goals.clear();
                self.try_alt(0, Alt::Apply(inst))
            }
        }
    }

    fn run(&mut self) -> std::result::Result<bool, Abort> {
        if self.goals.is_empty() {
            return Ok(self.finish());
        }
        let gi = self.select_goal();
        let g = self.goals.remove(gi);
        let r = self.expand(g);
        if !matches!(r, Ok(true)) {
            self.goals.insert(gi, g);
        }
        r
    }

    fn finish(&mut self) -> bool {
        self.stats.final_checks += 1;
        self.stats.solver_calls += 1;
        match self.store.solve(self.cfg.default_bit) {
            Some(a) => {
                self.solution = Some(a);
                true
            }
            None => {
                self.stats.final_unsat += 1;
                false
            }
        }
    }

    fn select_goal(&self) -> usize {
        let key = |i: usize| {
            let n = &self.nodes[self.goals[i]];
            (n.path.clone(), self.goals[i])
        };
        let best_by = |f: &dyn Fn(usize) -> (Vec<u16>, usize, usize)| {
            (0..self.goals.len()).min_by_key(|&i| f(i)).unwrap_or(0)
        };
        match self.cfg.strategy {
            Strategy::Lazy | Strategy::Intermediate { order: BatchOrder::DepthFirst, .. } => {
                best_by(&|i| {
                    let (p, id) = key(i);
                    (p, 0, id)
                })
            }
            Strategy::Intermediate { order: BatchOrder::Interleaved, .. } => best_by(&|i| {
                let (mut p, id) = key(i);
                p.reverse();
                (p, 0, id)
            }),
            Strategy::Eager => best_by(&|i| {
                let (p, id) = key(i);
                (p.clone(), self.nodes[self.goals[i]].depth, id)
            }),
            Strategy::FactFirst => self.fact_first_pick(),
        }
    }

    // first goal (by path) holding a putative axiom, else the leftmost goal
    fn fact_first_pick(&self) -> usize {
        let mut order: Vec<usize> = (0..self.goals.len()).collect();
        order.sort_by_key(|&i| (self.nodes[self.goals[i]].path.clone(), self.goals[i]));
        order
            .iter()
            .copied()
            .find(|&i| self.putative_axiom(&self.nodes[self.goals[i]].seq))
            .or_else(|| order.first().copied())
            .unwrap_or(0)
    }

    fn putative_axiom(&self, seq: &Sequent) -> bool {
        match seq {
            Sequent::Ll(s) => s.succ.iter().any(|b| {
                b.formula.is_atom()
                    && !self.dead(&b.expr)
                    && s.ante.iter().any(|a| a.formula == b.formula && !self.dead(&a.expr))
            }),
            Sequent::Bi(s) => {
                s.succ.is_atom()
                    && s.ante
                        .leaves()
                        .iter()
                        .any(|(a, f)| **f == s.succ && s.ante.effective_expr(a).map_or(false, |e| !self.dead(&e)))
            }
        }
    }

    fn expand(&mut self, g: usize) -> std::result::Result<bool, Abort> {
        if self.nodes[g].depth > self.cfg.limits.max_depth {
            self.cut = true;
            return Ok(false);
        }
        for alt in self.alternatives(g) {
            if self.try_alt(g, alt)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn live(&self, seq: &Sequent, inst: &RuleInstance) -> bool {
        match (&inst.principal, seq) {
            (Principal::Pair { ante, succ }, Sequent::Ll(s)) => !self.dead(&s.ante[*ante].expr) && !self.dead(&s.succ[*succ].expr),
            (p, _) => principal_expr(seq, p).map_or(true, |e| !self.dead(&e)),
        }
    }

    fn alternatives(&mut self, g: usize) -> Vec<Alt> {
        let seq = self.nodes[g].seq.clone();
        let insts: Vec<RuleInstance> = applicable(&seq, self.cfg.calculus)
            .into_iter()
            .filter(|i| self.live(&seq, i))
            .filter(|i| principal_expr(&seq, &i.principal).map_or(true, |e| !self.nodes[g].absent.contains(&e)))
            .collect();
        let known_one = |e: &Option<BoolExpr>| e.as_ref().map_or(true, |e| self.store.eval(e) == Some(true));

        // 0 on the left and ⊤ on the right close the branch whatever else is there
        if let Some(i) = insts
            .iter()
            .find(|i| matches!(i.rule, RuleId::ZeroL | RuleId::TopR) && known_one(&principal_expr(&seq, &i.principal)))
        {
            return vec![Alt::Apply(i.clone())];
        }
        if let Some(i) = insts.iter().find(|i| invertible(i.rule)) {
            let e = principal_expr(&seq, &i.principal);
            if known_one(&e) {
                return vec![Alt::Apply(i.clone())];
            }
            return vec![Alt::Apply(i.clone()), Alt::Absent(e.unwrap())];
        }

        let contractions = self.nodes[g].contractions;
        let mut rest: Vec<RuleInstance> = Vec::new();
        for i in insts {
            if i.rule.is_contraction() && contractions >= self.cfg.limits.contraction_bound {
                self.cut = true;
                continue;
            }
            if let (RuleId::BangR | RuleId::QuestL, Sequent::Ll(s)) = (i.rule, &seq) {
                // undecided side items are fine: the rule itself asserts them absent
                if !modal_guard(s, &i.principal, |e| Some(self.store.eval(e) == Some(true))) {
                    continue;
                }
            }
            rest.push(i);
        }
        rest.sort_by_key(|i| rank(&seq, i));
        rest.into_iter().map(Alt::Apply).collect()
    }

    fn try_alt(&mut self, g: usize, alt: Alt) -> std::result::Result<bool, Abort> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.cfg.limits.node_budget {
            return Err(Abort);
        }
        let saved_alloc = self.alloc.peek();
        let saved_goals = self.goals.len();
        let saved_nodes = self.nodes.len();
        let saved_since = self.since_check;
        self.store.push();

        let saved_absent = self.nodes[g].absent.len();
        let ok = match alt {
            Alt::Absent(e) => {
                let st = self.store.add(Constraint::zero(e.clone()));
                if st == Status::Inconsistent && !self.eager() {
                    Ok(false)
                } else {
                    self.nodes[g].absent.push(e);
                    self.expand(g)
                }
            }
            Alt::Apply(inst) => self.apply(g, inst),
        };
        match ok {
            Ok(true) => Ok(true),
            other => {
                self.store.pop().expect("search levels are balanced");
                self.alloc.rewind(saved_alloc);
                self.goals.truncate(saved_goals);
                self.nodes.truncate(saved_nodes);
                let n = &mut self.nodes[g];
                n.inst = None;
                n.emitted.clear();
                n.fresh.clear();
                n.children.clear();
                n.absent.truncate(saved_absent);
                self.since_check = saved_since;
                other
            }
        }
    }

    fn apply(&mut self, g: usize, inst: RuleInstance) -> std::result::Result<bool, Abort> {
        let seq = self.nodes[g].seq.clone();
        let app = match calculus::apply(&seq, &inst, &mut self.alloc) {
            Ok(a) => a,
            Err(_) => return Ok(false),
        };
        let st = self.store.add_all(&app.emitted);
        if self.cfg.trace {
            let cs: Vec<String> = app.emitted.iter().map(|c| c.to_string()).collect();
            self.trace.push(format!(
                "{}{} {} ⟹ {}",
                "  ".repeat(self.nodes[g].depth),
                inst.rule.symbol(),
                seq.format(true),
                cs.join("; ")
            ));
        }
        if st == Status::Inconsistent && !self.eager() {
            return Ok(false);
        }
        let (depth, path, contr) = {
            let n = &self.nodes[g];
            (n.depth, n.path.clone(), n.contractions + usize::from(inst.rule.is_contraction()))
        };
        let branching = app.premises.len() > 1;
        let mut kids = Vec::new();
        for (k, p) in app.premises.into_iter().enumerate() {
            let mut path = path.clone();
            if branching {
                path.push(k as u16);
            }
            kids.push(self.nodes.len());
            self.nodes.push(Node::new(p, depth + 1, path, contr));
        }
        let n = &mut self.nodes[g];
        n.inst = Some(inst);
        n.emitted = app.emitted;
        n.fresh = app.fresh;
        n.children = kids.clone();
        if kids.is_empty() {
            self.since_check += 1;
            if let Some(b) = self.cfg.strategy.batch() {
                if self.since_check >= b {
                    self.since_check = 0;
                    self.stats.solver_calls += 1;
                    if !self.store.check_sat() {
                        return Ok(false);
                    }
                }
            }
        }
        self.goals.extend(kids);
        self.run()
    }

    fn build(&self, id: usize) -> ResourceTree {
        let n = &self.nodes[id];
        ResourceTree {
            sequent: n.seq.clone(),
            rule: n.inst.clone().expect("closed derivation"),
            emitted: n.emitted.clone(),
            fresh: n.fresh.clone(),
            children: n.children.iter().map(|c| self.build(*c)).collect(),
        }
    }
}

/// [`prove`] with default limits.
pub fn prove_with(seq: &PlainSequent, logic: Logic, strategy: Strategy) -> Result<SearchResult> {
    prove(seq, logic, &SearchConfig::with_strategy(strategy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;

    fn run(s: &str, logic: Logic, strat: Strategy) -> SearchResult {
        prove(&parse_sequent(s, logic).unwrap(), logic, &SearchConfig::with_strategy(strat)).unwrap()
    }

    const ALL: [Strategy; 5] = [
        Strategy::Lazy,
        Strategy::Eager,
        Strategy::FactFirst,
        Strategy::Intermediate { n: 2, order: BatchOrder::DepthFirst },
        Strategy::Intermediate { n: 2, order: BatchOrder::Interleaved },
    ];

    #[test]
    fn small_mll() {
        for st in ALL {
            assert!(run("p |- p", Logic::Mll, st).outcome.is_proved());
            assert!(run("p, q |- p * q", Logic::Mll, st).outcome.is_proved());
            assert!(run("p, p, q, q |- (p * q) * (p * q)", Logic::Mll, st).outcome.is_proved());
            assert!(!run("p * q, r |- p * q", Logic::Mll, st).outcome.is_proved());
            assert!(!run("p |- q", Logic::Mll, st).outcome.is_proved());
            assert!(run("p |- p # bot", Logic::Mll, st).outcome.is_proved());
            assert!(run("p -o q, p |- q", Logic::Mll, st).outcome.is_proved());
        }
    }

    #[test]
    fn small_pll_and_bi() {
        assert!(run("p, q, q |- (p * q) + (p * q * q)", Logic::Pll, Strategy::Lazy).outcome.is_proved());
        assert!(run("!p |- p * p", Logic::Pll, Strategy::Lazy).outcome.is_proved());
        assert!(!run("p |- p * p", Logic::Pll, Strategy::Lazy).outcome.is_proved());
        assert!(run("(r, (p; t), p -* q); s |- q * r", Logic::Bi, Strategy::Lazy).outcome.is_proved());
        assert!(run("r, (s; t) |- r * s", Logic::Bi, Strategy::Eager).outcome.is_proved());
        assert!(run("p; q |- p /\\ q", Logic::Bi, Strategy::Lazy).outcome.is_proved());
        assert!(!run("p; q |- p * q", Logic::Bi, Strategy::Lazy).outcome.is_proved());
    }

    #[test]
    fn strategy_text() {
        for st in ALL {
            assert_eq!(st.to_string().parse::<Strategy>().unwrap(), st);
        }
        assert!("n=1".parse::<Strategy>().is_err());
    }
}
