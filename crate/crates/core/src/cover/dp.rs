use std::collections::{BTreeSet, HashMap, HashSet};

use super::state::{state_admissible, DpConfig, PartialPath, Slot, State};
use crate::decomposition::{NiceTreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, Mode, Path};

/// How an entry was produced, with the copy correspondence needed to
/// trace solution paths back down the decomposition.
#[derive(Clone, Debug)]
pub(crate) enum Prov {
    Leaf,
    /// `from[i]` is the child copy that became parent copy `i`, if any.
    Introduce {
        child: usize,
        from: Vec<Option<usize>>,
    },
    /// `to[j]` is the parent copy that child copy `j` became; `None` for
    /// paths finished by forgetting their last bag vertex.
    Forget {
        child: usize,
        to: Vec<Option<usize>>,
    },
    Join {
        left: usize,
        right: usize,
        pairs: Vec<(usize, usize)>,
    },
}

#[derive(Clone, Debug)]
pub(crate) struct Entry {
    pub state: State,
    pub opt: usize,
    pub prov: Prov,
}

/// Sparse table for one node: a missing state is infinite.
#[derive(Debug, Default)]
pub(crate) struct Table {
    pub entries: Vec<Entry>,
    index: HashMap<State, usize>,
}

impl Table {
    fn offer(&mut self, state: State, opt: usize, prov: Prov) {
        match self.index.get(&state) {
            Some(&i) => {
                if opt < self.entries[i].opt {
                    self.entries[i].opt = opt;
                    self.entries[i].prov = prov;
                }
            }
            None => {
                self.index.insert(state.clone(), self.entries.len());
                self.entries.push(Entry { state, opt, prov });
            }
        }
    }

    pub fn get(&self, state: &State) -> Option<&Entry> {
        self.index.get(state).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Sorts labelled copies into a canonical state, returning the state and
/// the labels in their new order.
fn sort_copies<T: Copy>(mut copies: Vec<(PartialPath, T)>) -> (State, Vec<T>) {
    copies.sort_by(|a, b| a.0.cmp(&b.0));
    copies.into_iter().unzip()
}

/// The part of the graph not introduced yet at a node, split into
/// connected components; `comp[y]` is `usize::MAX` for introduced vertices.
pub(crate) struct Outlook {
    comp: Vec<usize>,
}

impl Outlook {
    fn new(g: &Graph, below: &[u64]) -> Self {
        let n = g.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut label = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if below[s / 64] >> (s % 64) & 1 == 1 || comp[s] != usize::MAX {
                continue;
            }
            comp[s] = label;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &u in g.neighbors(v) {
                    if below[u / 64] >> (u % 64) & 1 == 0 && comp[u] == usize::MAX {
                        comp[u] = label;
                        stack.push(u);
                    }
                }
            }
            label += 1;
        }
        Outlook { comp }
    }
}

pub(crate) struct Engine<'a> {
    pub g: &'a Graph,
    pub cfg: DpConfig,
    pub kappa: usize,
}

impl Engine<'_> {
    pub fn run(&self, ntd: &NiceTreeDecomposition) -> Vec<Table> {
        let n = self.g.vertex_count();
        let words = n.div_ceil(64).max(1);
        let mut seen: Vec<Vec<u64>> = Vec::with_capacity(ntd.len());
        let mut tables: Vec<Table> = Vec::with_capacity(ntd.len());
        for (id, node) in ntd.nodes().iter().enumerate() {
            let mut below = vec![0u64; words];
            for &c in &node.children {
                for (w, cw) in below.iter_mut().zip(&seen[c]) {
                    *w |= cw;
                }
            }
            for &v in &node.bag {
                below[v / 64] |= 1 << (v % 64);
            }
            let outlook = Outlook::new(self.g, &below);
            seen.push(below);
            let below = &outlook;
            let table = match node.kind {
                NodeKind::Leaf => {
                    let mut t = Table::default();
                    t.offer(Vec::new(), 0, Prov::Leaf);
                    t
                }
                NodeKind::Introduce(x) => {
                    self.introduce(&tables[node.children[0]], &node.bag, x, below)
                }
                NodeKind::Forget(x) => self.forget(&tables[node.children[0]], x),
                NodeKind::Join => {
                    self.join(&tables[node.children[0]], &tables[node.children[1]], below)
                }
                NodeKind::IntroduceEdge(..) => unreachable!("plain nice decompositions only"),
            };
            debug_assert_eq!(tables.len(), id);
            tables.push(table);
        }
        tables
    }

    /// Every way to place `x` into one `Up` slot of `p`.
    fn insertions(&self, p: &PartialPath, x: usize) -> Vec<PartialPath> {
        let k = p.len();
        let mut out = Vec::new();
        let joins = |a: usize| -> Vec<Slot> {
            if self.g.has_edge(a, x) {
                vec![Slot::Dash, Slot::Up]
            } else {
                vec![Slot::Up]
            }
        };
        for i in 0..=k {
            if p.slots[i] != Slot::Up {
                continue;
            }
            let mut verts = p.verts.clone();
            verts.insert(i, x);
            // the slot at i splits into (before x, after x)
            let before: Vec<Slot> = if i == 0 {
                vec![Slot::End, Slot::Up]
            } else {
                joins(p.verts[i - 1])
            };
            let after: Vec<Slot> = if i == k {
                vec![Slot::End, Slot::Up]
            } else {
                joins(p.verts[i])
            };
            for &b in &before {
                for &a in &after {
                    let mut slots = Vec::with_capacity(k + 2);
                    slots.extend_from_slice(&p.slots[..i]);
                    slots.push(b);
                    slots.push(a);
                    slots.extend_from_slice(&p.slots[i + 1..]);
                    out.push(PartialPath::new(verts.clone(), slots));
                }
            }
        }
        out
    }

    /// Every `Up` slot must eventually be filled from vertices not
    /// introduced yet: a tail needs such a neighbour, a link needs one on
    /// each side inside a common component of the not-yet-introduced part.
    /// For induced paths these neighbours must also avoid the rest of the
    /// path.
    ///
    /// In cover mode only solutions whose path ends are covered once are
    /// kept: trimming a shared end never increases the size.
    fn can_finish(&self, state: &State, out: &Outlook) -> bool {
        if self.cfg.mode == Mode::Cover && state.len() > 1 {
            for p in state {
                let k = p.len();
                for (i, slot) in [(0, p.slots[0]), (k - 1, p.slots[k])] {
                    if slot == Slot::End {
                        let v = p.verts[i];
                        if state.iter().filter(|q| q.verts.contains(&v)).count() > 1 {
                            return false;
                        }
                    }
                }
            }
        }
        let mut demand: Vec<(usize, usize)> = Vec::new();
        for p in state {
            let k = p.len();
            // future neighbours usable at position i towards position `other`
            let candidates = |i: usize, other: Option<usize>| -> Vec<usize> {
                let v = p.verts[i];
                self.g
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&y| out.comp[y] != usize::MAX)
                    .filter(|&y| {
                        !self.cfg.variant.induced
                            || p.verts
                                .iter()
                                .enumerate()
                                .all(|(j, &w)| j == i || Some(j) == other || !self.g.has_edge(y, w))
                    })
                    .collect()
            };
            let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); k];
            let mut ups = vec![0usize; k];
            for s in 0..=k {
                if p.slots[s] != Slot::Up {
                    continue;
                }
                let left = s.checked_sub(1);
                let right = (s < k).then_some(s);
                let cl = left.map(|i| candidates(i, right));
                let cr = right.map(|i| candidates(i, left));
                for (side, c) in [(left, &cl), (right, &cr)] {
                    if let (Some(i), Some(c)) = (side, c) {
                        if c.is_empty() {
                            return false;
                        }
                        ups[i] += 1;
                        per_vertex[i].extend(c);
                    }
                }
                if let (Some(cl), Some(cr)) = (&cl, &cr) {
                    let shared = cl
                        .iter()
                        .any(|&a| cr.iter().any(|&b| out.comp[a] == out.comp[b]));
                    if !shared {
                        return false;
                    }
                }
            }
            for i in 0..k {
                if ups[i] == 2 {
                    per_vertex[i].sort_unstable();
                    per_vertex[i].dedup();
                    if per_vertex[i].len() < 2 {
                        return false;
                    }
                }
                if ups[i] > 0 && self.cfg.variant.edge_disjoint {
                    demand.push((p.verts[i], ups[i]));
                }
            }
        }
        if !demand.is_empty() {
            demand.sort_unstable();
            let mut i = 0;
            while i < demand.len() {
                let v = demand[i].0;
                let mut total = 0;
                while i < demand.len() && demand[i].0 == v {
                    total += demand[i].1;
                    i += 1;
                }
                let available = self
                    .g
                    .neighbors(v)
                    .iter()
                    .filter(|&&y| out.comp[y] != usize::MAX)
                    .count();
                if total > available {
                    return false;
                }
            }
        }
        true
    }

    fn introduce(&self, child: &Table, bag: &[usize], x: usize, below: &Outlook) -> Table {
        let mut out = Table::default();
        let fresh = [
            PartialPath::new(vec![x], vec![Slot::End, Slot::End]),
            PartialPath::new(vec![x], vec![Slot::End, Slot::Up]),
            PartialPath::new(vec![x], vec![Slot::Up, Slot::Up]),
        ];
        for (cid, entry) in child.entries.iter().enumerate() {
            if entry.opt > self.kappa {
                continue;
            }
            // options per copy: index 0 keeps it, the rest insert x
            let options: Vec<Vec<PartialPath>> = entry
                .state
                .iter()
                .map(|p| {
                    let mut o = vec![p.clone()];
                    o.extend(self.insertions(p, x));
                    o
                })
                .collect();
            let mut choice = Vec::with_capacity(options.len());
            self.choose(
                &entry.state,
                &options,
                &mut choice,
                0,
                &mut |choice, inserted| {
                    let base: Vec<(PartialPath, Option<usize>)> = choice
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| (options[j][c].clone(), Some(j)))
                        .collect();
                    self.add_fresh(&mut out, base, inserted, entry.opt, cid, bag, &fresh, below);
                },
            );
        }
        out
    }

    /// Walks the per-copy options; identical copies take non-decreasing
    /// choices so each multiset is produced once.
    fn choose(
        &self,
        state: &State,
        options: &[Vec<PartialPath>],
        choice: &mut Vec<usize>,
        inserted: usize,
        emit: &mut impl FnMut(&[usize], usize),
    ) {
        let j = choice.len();
        if j == options.len() {
            emit(choice, inserted);
            return;
        }
        let start = if j > 0 && state[j] == state[j - 1] {
            choice[j - 1]
        } else {
            0
        };
        for c in start..options[j].len() {
            let ins = inserted + (c > 0) as usize;
            if self.cfg.mode == Mode::Partition && ins > 1 {
                break;
            }
            choice.push(c);
            self.choose(state, options, choice, ins, emit);
            choice.pop();
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn add_fresh(
        &self,
        out: &mut Table,
        base: Vec<(PartialPath, Option<usize>)>,
        inserted: usize,
        opt: usize,
        child: usize,
        bag: &[usize],
        fresh: &[PartialPath; 3],
        below: &Outlook,
    ) {
        let room = self.kappa - opt;
        let max_new = if self.cfg.mode == Mode::Partition {
            1 - inserted.min(1)
        } else {
            room
        };
        // counts of the three x-only classes; a lone singleton is pointless
        // once x is covered by something else
        for singles in 0..=1usize {
            for ends in 0..=max_new {
                for ups in 0..=max_new {
                    let added = singles + ends + ups;
                    if added > max_new || added > room {
                        continue;
                    }
                    if inserted + added == 0 {
                        continue;
                    }
                    if singles == 1 && inserted + added > 1 {
                        continue;
                    }
                    let mut copies = base.clone();
                    for (class, count) in fresh.iter().zip([singles, ends, ups]) {
                        for _ in 0..count {
                            copies.push((class.clone(), None));
                        }
                    }
                    let (state, from) = sort_copies(copies);
                    if state_admissible(&state, bag, self.g, self.cfg)
                        && self.can_finish(&state, below)
                    {
                        out.offer(state, opt + added, Prov::Introduce { child, from });
                    }
                }
            }
        }
    }

    fn forget(&self, child: &Table, x: usize) -> Table {
        let mut out = Table::default();
        'entries: for (cid, entry) in child.entries.iter().enumerate() {
            let mut copies = Vec::with_capacity(entry.state.len());
            let mut finished = Vec::new();
            for (j, p) in entry.state.iter().enumerate() {
                let Some(i) = p.position(x) else {
                    copies.push((p.clone(), j));
                    continue;
                };
                if p.slots[i] == Slot::Up || p.slots[i + 1] == Slot::Up {
                    continue 'entries;
                }
                if p.len() == 1 {
                    finished.push(j);
                    continue;
                }
                let mut verts = p.verts.clone();
                verts.remove(i);
                let mut slots = Vec::with_capacity(p.len());
                slots.extend_from_slice(&p.slots[..i]);
                slots.push(Slot::Down);
                slots.extend_from_slice(&p.slots[i + 2..]);
                copies.push((PartialPath::new(verts, slots), j));
            }
            let (state, origin) = sort_copies(copies);
            let mut to = vec![None; entry.state.len()];
            for (i, &j) in origin.iter().enumerate() {
                to[j] = Some(i);
            }
            out.offer(state, entry.opt, Prov::Forget { child: cid, to });
        }
        out
    }

    fn join(&self, left: &Table, right: &Table, below: &Outlook) -> Table {
        let mut out = Table::default();
        let mut by_shape: HashMap<Vec<PartialPath>, Vec<usize>> = HashMap::new();
        for (id, e) in right.entries.iter().enumerate() {
            by_shape.entry(shape(&e.state)).or_default().push(id);
        }
        for (lid, le) in left.entries.iter().enumerate() {
            let Some(rights) = by_shape.get(&shape(&le.state)) else {
                continue;
            };
            for &rid in rights {
                let re = &right.entries[rid];
                let copies = le.state.len();
                let opt = le.opt + re.opt - copies;
                if opt > self.kappa {
                    continue;
                }
                let mut seen = HashSet::new();
                let mut used = vec![false; copies];
                let mut acc = Vec::with_capacity(copies);
                match_copies(&le.state, &re.state, 0, &mut used, &mut acc, &mut |acc| {
                    let (state, pairs) = sort_copies(acc.to_vec());
                    if self.can_finish(&state, below) && seen.insert(state.clone()) {
                        out.offer(
                            state,
                            opt,
                            Prov::Join {
                                left: lid,
                                right: rid,
                                pairs,
                            },
                        );
                    }
                });
            }
        }
        out
    }
}

/// A copy with `Down` read as `Up`: what must agree between the two sides
/// of a join.
fn project(p: &PartialPath) -> PartialPath {
    let slots = p
        .slots
        .iter()
        .map(|&s| if s == Slot::Down { Slot::Up } else { s })
        .collect();
    PartialPath::new(p.verts.clone(), slots)
}

fn shape(state: &State) -> Vec<PartialPath> {
    let mut s: Vec<PartialPath> = state.iter().map(project).collect();
    s.sort();
    s
}

fn merge_slot(a: Slot, b: Slot) -> Option<Slot> {
    match (a, b) {
        (Slot::End, Slot::End) => Some(Slot::End),
        (Slot::Dash, Slot::Dash) => Some(Slot::Dash),
        (Slot::Up, Slot::Up) => Some(Slot::Up),
        (Slot::Up, Slot::Down) | (Slot::Down, Slot::Up) => Some(Slot::Down),
        _ => None,
    }
}

/// Combinations of two traces of the same path seen from both children.
/// A single vertex can be matched in either orientation.
fn merge_paths(a: &PartialPath, b: &PartialPath) -> Vec<PartialPath> {
    if a.verts != b.verts {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut orientations = vec![b.slots.clone()];
    if a.len() == 1 && b.slots[0] != b.slots[1] {
        orientations.push(vec![b.slots[1], b.slots[0]]);
    }
    for bs in orientations {
        let merged: Option<Vec<Slot>> = a
            .slots
            .iter()
            .zip(&bs)
            .map(|(&x, &y)| merge_slot(x, y))
            .collect();
        if let Some(slots) = merged {
            out.push(PartialPath::new(a.verts.clone(), slots));
        }
    }
    out
}

fn match_copies(
    left: &State,
    right: &State,
    i: usize,
    used: &mut [bool],
    acc: &mut Vec<(PartialPath, (usize, usize))>,
    emit: &mut impl FnMut(&[(PartialPath, (usize, usize))]),
) {
    if i == left.len() {
        emit(acc);
        return;
    }
    for j in 0..right.len() {
        if used[j] {
            continue;
        }
        // identical unused right copies are interchangeable
        if (0..j).any(|jj| !used[jj] && right[jj] == right[j]) {
            continue;
        }
        for merged in merge_paths(&left[i], &right[j]) {
            used[j] = true;
            acc.push((merged, (i, j)));
            match_copies(left, right, i + 1, used, acc, emit);
            acc.pop();
            used[j] = false;
        }
    }
}

/// Follows the provenance records from the root entry down, assigning a
/// label to every solution path, then rebuilds each path from the vertices
/// and direct edges recorded under its label.
pub(crate) fn reconstruct(
    ntd: &NiceTreeDecomposition,
    tables: &[Table],
    root_entry: usize,
) -> Result<Vec<Path>> {
    let mut verts: Vec<BTreeSet<usize>> = Vec::new();
    let mut edges: Vec<BTreeSet<(usize, usize)>> = Vec::new();
    let mut stack = vec![(ntd.root(), root_entry, Vec::<usize>::new())];
    while let Some((node, eid, labels)) = stack.pop() {
        let entry = &tables[node].entries[eid];
        for (p, &l) in entry.state.iter().zip(&labels) {
            verts[l].extend(p.verts.iter().copied());
            edges[l].extend(p.dash_edges());
        }
        let children = &ntd.node(node).children;
        match &entry.prov {
            Prov::Leaf => {}
            Prov::Introduce { child, from } => {
                let child_len = tables[children[0]].entries[*child].state.len();
                let mut child_labels = vec![usize::MAX; child_len];
                for (i, f) in from.iter().enumerate() {
                    if let Some(j) = f {
                        child_labels[*j] = labels[i];
                    }
                }
                stack.push((children[0], *child, child_labels));
            }
            Prov::Forget { child, to } => {
                let child_labels = to
                    .iter()
                    .map(|t| match t {
                        Some(i) => labels[*i],
                        None => {
                            verts.push(BTreeSet::new());
                            edges.push(BTreeSet::new());
                            verts.len() - 1
                        }
                    })
                    .collect();
                stack.push((children[0], *child, child_labels));
            }
            Prov::Join { left, right, pairs } => {
                let ll = tables[children[0]].entries[*left].state.len();
                let mut left_labels = vec![usize::MAX; ll];
                let mut right_labels = vec![usize::MAX; ll];
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    left_labels[a] = labels[i];
                    right_labels[b] = labels[i];
                }
                stack.push((children[0], *left, left_labels));
                stack.push((children[1], *right, right_labels));
            }
        }
    }
    verts
        .iter()
        .zip(&edges)
        .map(|(vs, es)| order_path(vs, es))
        .collect()
}

fn order_path(verts: &BTreeSet<usize>, edges: &BTreeSet<(usize, usize)>) -> Result<Path> {
    let broken = || {
        Error::Internal(format!(
            "reconstructed edges {edges:?} do not form a path on {verts:?}"
        ))
    };
    if edges.len() + 1 != verts.len() {
        return Err(broken());
    }
    let mut adj: HashMap<usize, Vec<usize>> = verts.iter().map(|&v| (v, Vec::new())).collect();
    for &(u, v) in edges {
        adj.get_mut(&u).ok_or_else(broken)?.push(v);
        adj.get_mut(&v).ok_or_else(broken)?.push(u);
    }
    let start = *verts
        .iter()
        .find(|v| adj[v].len() <= 1)
        .ok_or_else(broken)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[&cur].iter().find(|&&w| w != prev) {
        if order.len() > verts.len() {
            return Err(broken());
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    if order.len() != verts.len() {
        return Err(broken());
    }
    Ok(Path(order))
}
