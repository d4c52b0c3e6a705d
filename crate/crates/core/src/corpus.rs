//! Sequent corpora for sweeps and property tests: exhaustive small MLL
//! sequents, random sequents, and random provable sequents obtained by
//! building proofs forwards from axioms.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bunch::{comma_join, Bunch, BunchNode};
use crate::formula::{BinOp, Constant, Formula, Logic, UnOp};
use crate::sequent::PlainSequent;

/// Bounds for the exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusBounds {
    pub atoms: usize,
    /// Connectives over the whole sequent; units count as connectives.
    pub max_connectives: usize,
    /// Leaf occurrences (atoms and units) over the whole sequent.
    pub max_leaves: usize,
    /// Formulas over both sides.
    pub max_formulas: usize,
    /// Only negate atoms.
    pub atomic_negation: bool,
}

impl Default for CorpusBounds {
    fn default() -> Self {
        CorpusBounds {
            atoms: 2,
            max_connectives: 6,
            max_leaves: 3,
            max_formulas: 3,
            atomic_negation: true,
        }
    }
}

pub fn atom_names(n: usize) -> Vec<String> {
    const BASE: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
    (0..n)
        .map(|i| BASE.get(i).map_or_else(|| format!("a{i}"), |s| s.to_string()))
        .collect()
}

fn leaf_count(f: &Formula) -> usize {
    match f {
        Formula::Atom(_) | Formula::Const(_) => 1,
        Formula::Unary(_, g) => leaf_count(g),
        Formula::Binary(_, a, b) => leaf_count(a) + leaf_count(b),
    }
}

/// All MLL formulas within the bounds, grouped by connective count.
fn mll_formulas(b: &CorpusBounds) -> Vec<Vec<Formula>> {
    let mut by: Vec<Vec<Formula>> = vec![Vec::new(); b.max_connectives + 1];
    by[0] = atom_names(b.atoms).iter().map(|a| Formula::atom(a)).collect();
    for k in 1..=b.max_connectives {
        let mut out = Vec::new();
        if k == 1 {
            out.push(Formula::Const(Constant::One));
            out.push(Formula::Const(Constant::Bottom));
        }
        for f in by[k - 1].iter().filter(|f| !b.atomic_negation || f.is_atom()) {
            out.push(Formula::unary(UnOp::Neg, f.clone()));
        }
        for i in 0..k {
            for l in &by[i] {
                for r in &by[k - 1 - i] {
                    if leaf_count(l) + leaf_count(r) > b.max_leaves {
                        continue;
                    }
                    for op in [BinOp::Tensor, BinOp::Par, BinOp::Lolli] {
                        out.push(Formula::binary(op, l.clone(), r.clone()));
                    }
                }
            }
        }
        by[k] = out;
    }
    by
}

fn rename(f: &Formula, map: &dyn Fn(&str) -> String) -> Formula {
    match f {
        Formula::Atom(a) => Formula::atom(&map(a)),
        Formula::Const(_) => f.clone(),
        Formula::Unary(op, g) => Formula::unary(*op, rename(g, map)),
        Formula::Binary(op, a, b) => Formula::binary(*op, rename(a, map), rename(b, map)),
    }
}

/// Sorted sides, minimized over swaps of `p` and `q`.
fn canonical_ll(ante: &[Formula], succ: &[Formula]) -> (Vec<Formula>, Vec<Formula>) {
    let sorted = |v: &[Formula]| {
        let mut v = v.to_vec();
        v.sort();
        v
    };
    let plain = (sorted(ante), sorted(succ));
    let swap = |a: &str| match a {
        "p" => "q".to_string(),
        "q" => "p".to_string(),
        o => o.to_string(),
    };
    let sa: Vec<Formula> = ante.iter().map(|f| rename(f, &swap)).collect();
    let ss: Vec<Formula> = succ.iter().map(|f| rename(f, &swap)).collect();
    let swapped = (sorted(&sa), sorted(&ss));
    plain.min(swapped)
}

/// Every MLL sequent within `b`, up to order and renaming of atoms, in a
/// fixed order.
pub fn exhaustive_mll(b: &CorpusBounds) -> Vec<PlainSequent> {
    let by = mll_formulas(b);
    let mut pool: Vec<(Formula, usize, usize)> = Vec::new();
    for (k, fs) in by.iter().enumerate() {
        for f in fs {
            let a = leaf_count(f);
            if a <= b.max_leaves {
                pool.push((f.clone(), k, a));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    pick(&pool, b, 0, 0, 0, &mut chosen, &mut |sel| {
        // every split of the chosen multiset into the two sides
        let n = sel.len();
        for mask in 0u32..1 << n {
            let mut ante = Vec::new();
            let mut succ = Vec::new();
            for (i, ix) in sel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ante.push(pool[*ix].0.clone());
                } else {
                    succ.push(pool[*ix].0.clone());
                }
            }
            seen.insert(canonical_ll(&ante, &succ));
        }
    });
    seen.into_iter()
        .map(|(ante, succ)| PlainSequent::Ll { ante, succ })
        .collect()
}

fn pick(
    pool: &[(Formula, usize, usize)],
    b: &CorpusBounds,
    from: usize,
    conn: usize,
    atoms: usize,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if !chosen.is_empty() {
        emit(chosen);
    }
    if chosen.len() == b.max_formulas {
        return;
    }
    for i in from..pool.len() {
        let (_, k, a) = &pool[i];
        if conn + k <= b.max_connectives && atoms + a <= b.max_leaves {
            chosen.push(i);
            pick(pool, b, i, conn + k, atoms + a, chosen, emit);
            chosen.pop();
        }
    }
}

/// A random formula of `logic` with at most `conn` connectives.
pub fn random_formula<R: Rng>(rng: &mut R, logic: Logic, atoms: usize, conn: usize) -> Formula {
    let names = atom_names(atoms.max(1));
    let atom = |rng: &mut R| Formula::atom(names.choose(rng).unwrap());
    if conn == 0 {
        return atom(rng);
    }
    let (bins, uns, units): (&[BinOp], &[UnOp], &[Constant]) = match logic {
        Logic::Mll => (&[BinOp::Tensor, BinOp::Par, BinOp::Lolli], &[UnOp::Neg], &[Constant::One, Constant::Bottom]),
        Logic::Pll => (
            &[BinOp::Tensor, BinOp::Par, BinOp::Lolli, BinOp::With, BinOp::Plus],
            &[UnOp::Neg, UnOp::Bang, UnOp::Quest],
            &[Constant::One, Constant::Bottom, Constant::Zero, Constant::Top],
        ),
        Logic::Bi => (
            &[BinOp::Star, BinOp::Wand, BinOp::And, BinOp::Or, BinOp::Imp],
            &[],
            &[Constant::I, Constant::True, Constant::False],
        ),
    };
    let roll = rng.gen_range(0..10);
    if roll == 0 {
        return Formula::Const(*units.choose(rng).unwrap());
    }
    if roll <= 2 && !uns.is_empty() {
        let op = *uns.choose(rng).unwrap();
        return Formula::unary(op, random_formula(rng, logic, atoms, conn - 1));
    }
    let left = rng.gen_range(0..conn);
    let op = *bins.choose(rng).unwrap();
    Formula::binary(
        op,
        random_formula(rng, logic, atoms, left),
        random_formula(rng, logic, atoms, conn - 1 - left),
    )
}

/// A random MLL sequent with at most `max_conn` connectives and `max_size`
/// symbols in total.
pub fn random_mll_sequent<R: Rng>(rng: &mut R, atoms: usize, max_conn: usize, max_size: usize) -> PlainSequent {
    loop {
        let n = rng.gen_range(1..=4);
        let mut budget = rng.gen_range(0..=max_conn);
        let mut ante = Vec::new();
        let mut succ = Vec::new();
        for i in 0..n {
            let c = if i + 1 == n { budget } else { rng.gen_range(0..=budget) };
            budget -= c;
            let f = random_formula(rng, Logic::Mll, atoms, c);
            if rng.gen_bool(0.5) {
                ante.push(f);
            } else {
                succ.push(f);
            }
        }
        let s = PlainSequent::Ll { ante, succ };
        if s.size() <= max_size && s.connectives() <= max_conn {
            return s;
        }
    }
}

/// A proved linear sequent under construction.
#[derive(Clone, Debug)]
struct LlFact {
    ante: Vec<Formula>,
    succ: Vec<Formula>,
}

fn take<R: Rng>(rng: &mut R, v: &mut Vec<Formula>) -> Option<Formula> {
    if v.is_empty() {
        return None;
    }
    let i = rng.gen_range(0..v.len());
    Some(v.remove(i))
}

fn ll_leaf<R: Rng>(rng: &mut R, logic: Logic, atoms: usize) -> LlFact {
    let names = atom_names(atoms);
    let p = Formula::atom(names.choose(rng).unwrap());
    match rng.gen_range(0..8) {
        0 => LlFact {
            ante: vec![],
            succ: vec![Formula::Const(Constant::One)],
        },
        1 => LlFact {
            ante: vec![Formula::Const(Constant::Bottom)],
            succ: vec![],
        },
        2 if logic == Logic::Pll => {
            let side = random_formula(rng, logic, atoms, 1);
            if rng.gen_bool(0.5) {
                LlFact {
                    ante: vec![Formula::Const(Constant::Zero), side],
                    succ: vec![],
                }
            } else {
                LlFact {
                    ante: vec![side],
                    succ: vec![Formula::Const(Constant::Top)],
                }
            }
        }
        _ => LlFact {
            ante: vec![p.clone()],
            succ: vec![p],
        },
    }
}

fn ll_grow<R: Rng>(rng: &mut R, logic: Logic, atoms: usize, depth: usize) -> LlFact {
    if depth == 0 {
        return ll_leaf(rng, logic, atoms);
    }
    let mut f = ll_grow(rng, logic, atoms, depth - 1);
    let pll = logic == Logic::Pll;
    let rules = if pll { 19 } else { 11 };
    for _ in 0..8 {
        let before = f.clone();
        let ok = match rng.gen_range(0..rules) {
            0 | 1 => {
                // ⊗R
                let mut g = ll_grow(rng, logic, atoms, depth - 1);
                match (take(rng, &mut f.succ), take(rng, &mut g.succ)) {
                    (Some(a), Some(b)) => {
                        f.ante.extend(g.ante);
                        f.succ.extend(g.succ);
                        f.succ.push(Formula::binary(BinOp::Tensor, a, b));
                        true
                    }
                    _ => false,
                }
            }
            2 => {
                // ⅋L
                let mut g = ll_grow(rng, logic, atoms, depth - 1);
                match (take(rng, &mut f.ante), take(rng, &mut g.ante)) {
                    (Some(a), Some(b)) => {
                        f.ante.extend(g.ante);
                        f.succ.extend(g.succ);
                        f.ante.push(Formula::binary(BinOp::Par, a, b));
                        true
                    }
                    _ => false,
                }
            }
            3 => {
                // ⊸L
                let mut g = ll_grow(rng, logic, atoms, depth - 1);
                match (take(rng, &mut f.succ), take(rng, &mut g.ante)) {
                    (Some(a), Some(b)) => {
                        f.ante.extend(g.ante);
                        f.succ.extend(g.succ);
                        f.ante.push(Formula::binary(BinOp::Lolli, a, b));
                        true
                    }
                    _ => false,
                }
            }
            4 => match (take(rng, &mut f.ante), take(rng, &mut f.ante)) {
                (Some(a), Some(b)) => {
                    f.ante.push(Formula::binary(BinOp::Tensor, a, b));
                    true
                }
                _ => false,
            },
            5 => match (take(rng, &mut f.succ), take(rng, &mut f.succ)) {
                (Some(a), Some(b)) => {
                    f.succ.push(Formula::binary(BinOp::Par, a, b));
                    true
                }
                _ => false,
            },
            6 => match (take(rng, &mut f.ante), take(rng, &mut f.succ)) {
                (Some(a), Some(b)) => {
                    f.succ.push(Formula::binary(BinOp::Lolli, a, b));
                    true
                }
                _ => false,
            },
            7 => match take(rng, &mut f.succ) {
                Some(a) => {
                    f.ante.push(Formula::unary(UnOp::Neg, a));
                    true
                }
                None => false,
            },
            8 => match take(rng, &mut f.ante) {
                Some(a) => {
                    f.succ.push(Formula::unary(UnOp::Neg, a));
                    true
                }
                None => false,
            },
            9 => {
                f.ante.push(Formula::Const(Constant::One));
                true
            }
            10 => {
                f.succ.push(Formula::Const(Constant::Bottom));
                true
            }
            11 => match take(rng, &mut f.succ) {
                // ⊕R with a random other disjunct
                Some(a) => {
                    let c = random_formula(rng, logic, atoms, 1);
                    f.succ.push(if rng.gen_bool(0.5) {
                        Formula::binary(BinOp::Plus, a, c)
                    } else {
                        Formula::binary(BinOp::Plus, c, a)
                    });
                    true
                }
                None => false,
            },
            12 => match take(rng, &mut f.ante) {
                // &L
                Some(a) => {
                    let c = random_formula(rng, logic, atoms, 1);
                    f.ante.push(Formula::binary(BinOp::With, a, c));
                    true
                }
                None => false,
            },
            13 => match take(rng, &mut f.succ) {
                // &R over A and A ⊕ C, both provable from the same context
                Some(a) => {
                    let c = random_formula(rng, logic, atoms, 0);
                    f.succ.push(Formula::binary(BinOp::With, a.clone(), Formula::binary(BinOp::Plus, a, c)));
                    true
                }
                None => false,
            },
            14 => match take(rng, &mut f.ante) {
                // ⊕L over A and A & C
                Some(a) => {
                    let c = random_formula(rng, logic, atoms, 0);
                    f.ante.push(Formula::binary(BinOp::Plus, a.clone(), Formula::binary(BinOp::With, a, c)));
                    true
                }
                None => false,
            },
            15 => match take(rng, &mut f.ante) {
                // dereliction
                Some(a) => {
                    f.ante.push(Formula::unary(UnOp::Bang, a));
                    true
                }
                None => false,
            },
            16 => match take(rng, &mut f.succ) {
                Some(a) => {
                    f.succ.push(Formula::unary(UnOp::Quest, a));
                    true
                }
                None => false,
            },
            17 => {
                // weakening
                let c = random_formula(rng, logic, atoms, 0);
                if rng.gen_bool(0.5) {
                    f.ante.push(Formula::unary(UnOp::Bang, c));
                } else {
                    f.succ.push(Formula::unary(UnOp::Quest, c));
                }
                true
            }
            _ => {
                // promotion, when the context allows it
                let bangs = f.ante.iter().all(|x| matches!(x, Formula::Unary(UnOp::Bang, _)));
                let quests = f.succ.iter().filter(|x| !matches!(x, Formula::Unary(UnOp::Quest, _))).count();
                if bangs && quests == 1 {
                    let i = f.succ.iter().position(|x| !matches!(x, Formula::Unary(UnOp::Quest, _))).unwrap();
                    let a = f.succ.remove(i);
                    f.succ.push(Formula::unary(UnOp::Bang, a));
                    true
                } else {
                    false
                }
            }
        };
        if ok {
            return f;
        }
        f = before;
    }
    f
}

/// A random sequent provable in `logic`, built from a random proof.
/// Retries until the sequent has at most `max_conn` connectives.
pub fn random_provable<R: Rng>(rng: &mut R, logic: Logic, atoms: usize, depth: usize, max_conn: usize) -> PlainSequent {
    loop {
        let s = match logic {
            Logic::Mll | Logic::Pll => {
                let d = rng.gen_range(1..=depth);
                let f = ll_grow(rng, logic, atoms, d);
                PlainSequent::Ll { ante: f.ante, succ: f.succ }
            }
            Logic::Bi => {
                let d = rng.gen_range(1..=depth);
                let (ante, succ) = bi_grow(rng, atoms, d);
                PlainSequent::Bi { ante: ante.canonical(), succ }
            }
        };
        if s.connectives() <= max_conn && s.fits(logic) {
            return s;
        }
    }
}

fn bi_leaf<R: Rng>(rng: &mut R, atoms: usize) -> (Bunch, Formula) {
    let names = atom_names(atoms);
    let p = Formula::atom(names.choose(rng).unwrap());
    match rng.gen_range(0..10) {
        0 => (Bunch::emp_m(), Formula::Const(Constant::I)),
        1 => (Bunch::emp_a(), Formula::Const(Constant::True)),
        2 => (Bunch::leaf(Formula::Const(Constant::False)), p),
        _ => (Bunch::leaf(p.clone()), p),
    }
}

/// Addresses of formula leaves.
fn leaf_addrs(b: &Bunch) -> Vec<Vec<usize>> {
    b.leaves().into_iter().map(|(a, _)| a).collect()
}

fn bi_grow<R: Rng>(rng: &mut R, atoms: usize, depth: usize) -> (Bunch, Formula) {
    if depth == 0 {
        return bi_leaf(rng, atoms);
    }
    let (mut g, mut c) = bi_grow(rng, atoms, depth - 1);
    for _ in 0..8 {
        let ok = match rng.gen_range(0..11) {
            0 | 1 => {
                // ∗R
                let (h, d) = bi_grow(rng, atoms, depth - 1);
                g = comma_pair(g, h);
                c = Formula::binary(BinOp::Star, c, d);
                true
            }
            2 => {
                // ∧R after weakening both premises to Γ;Δ
                let (h, d) = bi_grow(rng, atoms, depth - 1);
                g = Bunch::semi(vec![g, h]);
                c = Formula::binary(BinOp::And, c, d);
                true
            }
            3 => {
                let d = random_formula(rng, Logic::Bi, atoms, 0);
                c = if rng.gen_bool(0.5) {
                    Formula::binary(BinOp::Or, c, d)
                } else {
                    Formula::binary(BinOp::Or, d, c)
                };
                true
            }
            4 => {
                // −∗R on a leaf directly under the root comma
                match top_comma_leaf(rng, &g) {
                    Some((i, a)) => {
                        let mut kids = comma_items(&g);
                        kids.remove(i);
                        g = comma_join(kids);
                        c = Formula::binary(BinOp::Wand, a, c);
                        true
                    }
                    None => false,
                }
            }
            5 => {
                // →R on a leaf directly under the root semicolon
                match &g.node {
                    BunchNode::Semi(kids) => {
                        let leaves: Vec<usize> = (0..kids.len()).filter(|i| kids[*i].formula().is_some()).collect();
                        match leaves.choose(rng) {
                            Some(&i) => {
                                let a = kids[i].formula().unwrap().clone();
                                let mut rest = kids.clone();
                                rest.remove(i);
                                g = crate::bunch::semi_join(rest);
                                c = Formula::binary(BinOp::Imp, a, c);
                                true
                            }
                            None => false,
                        }
                    }
                    BunchNode::Leaf(a) => {
                        let a = a.clone();
                        g = Bunch::emp_a();
                        c = Formula::binary(BinOp::Imp, a, c);
                        true
                    }
                    _ => false,
                }
            }
            6 => {
                // −∗L: Δ(B) ⊢ C and Γ ⊢ A give Δ(Γ, A −∗ B) ⊢ C
                let (h, a) = bi_grow(rng, atoms, depth - 1);
                match leaf_addrs(&g).choose(rng) {
                    Some(at) => {
                        let b = g.get(at).unwrap().formula().unwrap().clone();
                        let wand = Bunch::leaf(Formula::binary(BinOp::Wand, a, b));
                        g = g.replace_raw(at, comma_pair(h, wand)).unwrap();
                        true
                    }
                    None => false,
                }
            }
            7 => {
                // →L after weakening: Δ(Γ; A → B) ⊢ C
                let (h, a) = bi_grow(rng, atoms, depth - 1);
                match leaf_addrs(&g).choose(rng) {
                    Some(at) => {
                        let b = g.get(at).unwrap().formula().unwrap().clone();
                        let arrow = Bunch::leaf(Formula::binary(BinOp::Imp, a, b));
                        g = g.replace_raw(at, Bunch::semi(vec![h, arrow])).unwrap();
                        true
                    }
                    None => false,
                }
            }
            8 => {
                // ∗L or ∧L on two leaf children of one node
                let mut done = false;
                for a in g.addresses() {
                    let node = g.get(&a).unwrap();
                    let kids = node.children();
                    let leaves: Vec<usize> = (0..kids.len()).filter(|i| kids[*i].formula().is_some()).collect();
                    if leaves.len() >= 2 {
                        let (i, j) = (leaves[0], leaves[1]);
                        let op = if node.is_comma() { BinOp::Star } else { BinOp::And };
                        let f = Formula::binary(op, kids[i].formula().unwrap().clone(), kids[j].formula().unwrap().clone());
                        let mut rest = kids.to_vec();
                        rest.remove(j);
                        rest[i] = Bunch::leaf(f);
                        let rebuilt = if node.is_comma() { comma_join(rest) } else { crate::bunch::semi_join(rest) };
                        g = g.replace_raw(&a, rebuilt).unwrap();
                        done = true;
                        break;
                    }
                }
                done
            }
            9 => {
                // weakening with a random formula somewhere
                let d = Bunch::leaf(random_formula(rng, Logic::Bi, atoms, 0));
                let addrs = g.addresses();
                let at = addrs.choose(rng).unwrap().clone();
                let sub = g.get(&at).unwrap().clone();
                g = g.replace_raw(&at, Bunch::semi(vec![sub, d])).unwrap();
                true
            }
            _ => {
                // a unit formula absorbed by its unit
                if rng.gen_bool(0.5) {
                    g = comma_pair(g, Bunch::leaf(Formula::Const(Constant::I)));
                } else {
                    g = Bunch::semi(vec![g, Bunch::leaf(Formula::Const(Constant::True))]);
                }
                true
            }
        };
        if ok {
            break;
        }
    }
    (g, c)
}

fn comma_items(b: &Bunch) -> Vec<Bunch> {
    match &b.node {
        BunchNode::EmpM => vec![],
        BunchNode::Comma(c) => c.clone(),
        _ => vec![b.clone()],
    }
}

fn comma_pair(a: Bunch, b: Bunch) -> Bunch {
    let mut items = comma_items(&a);
    items.extend(comma_items(&b));
    comma_join(items)
}

fn top_comma_leaf<R: Rng>(rng: &mut R, g: &Bunch) -> Option<(usize, Formula)> {
    let items = comma_items(g);
    let leaves: Vec<usize> = (0..items.len()).filter(|i| items[*i].formula().is_some()).collect();
    let i = *leaves.choose(rng)?;
    Some((i, items[i].formula().unwrap().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tiny_corpus_is_deduplicated() {
        let b = CorpusBounds {
            atoms: 2,
            max_connectives: 0,
            max_leaves: 2,
            max_formulas: 2,
            atomic_negation: true,
        };
        let all = exhaustive_mll(&b);
        let text: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        // p |-, |- p, then pairs up to swapping p and q
        assert!(text.contains(&"p |- p".to_string()));
        assert!(text.contains(&"p |- q".to_string()));
        assert!(!text.contains(&"q |- q".to_string()));
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn generated_sequents_fit_their_logic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for logic in [Logic::Mll, Logic::Pll, Logic::Bi] {
            for _ in 0..50 {
                let s = random_provable(&mut rng, logic, 3, 4, 12);
                assert!(s.fits(logic), "{s}");
            }
        }
        for _ in 0..50 {
            let s = random_mll_sequent(&mut rng, 2, 10, 14);
            assert!(s.connectives() <= 10 && s.size() <= 14);
        }
    }
}
