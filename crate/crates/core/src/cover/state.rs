use std::fmt;

use crate::graph::{Graph, Mode, Variant};

/// What lies between two consecutive bag vertices of a solution path, or
/// beyond its first or last bag vertex.
///
/// `Up` means the path continues through vertices not introduced yet, `Down`
/// through vertices already forgotten. `Dash` is a direct edge and only
/// appears between two bag vertices; `End` only at either extremity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    End,
    Dash,
    Up,
    Down,
}

/// The neighbour type of a vertex on a partial path: a multiset of at most
/// two symbols among `-`, `↑`, `↓`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NeighborType {
    Empty,
    Dash,
    DashDash,
    Up,
    Down,
    UpUp,
    DownDown,
    DownUp,
    UpDash,
    DownDash,
}

impl NeighborType {
    pub const ALL: [NeighborType; 10] = [
        NeighborType::Empty,
        NeighborType::Dash,
        NeighborType::DashDash,
        NeighborType::Up,
        NeighborType::Down,
        NeighborType::UpUp,
        NeighborType::DownDown,
        NeighborType::DownUp,
        NeighborType::UpDash,
        NeighborType::DownDash,
    ];

    /// Type of a vertex given the slots on either side of it.
    pub fn from_slots(a: Slot, b: Slot) -> NeighborType {
        let (mut dash, mut up, mut down) = (0, 0, 0);
        for s in [a, b] {
            match s {
                Slot::End => {}
                Slot::Dash => dash += 1,
                Slot::Up => up += 1,
                Slot::Down => down += 1,
            }
        }
        match (dash, up, down) {
            (0, 0, 0) => NeighborType::Empty,
            (1, 0, 0) => NeighborType::Dash,
            (2, 0, 0) => NeighborType::DashDash,
            (0, 1, 0) => NeighborType::Up,
            (0, 0, 1) => NeighborType::Down,
            (0, 2, 0) => NeighborType::UpUp,
            (0, 0, 2) => NeighborType::DownDown,
            (0, 1, 1) => NeighborType::DownUp,
            (1, 1, 0) => NeighborType::UpDash,
            (1, 0, 1) => NeighborType::DownDash,
            _ => unreachable!("two slots give at most two symbols"),
        }
    }

    pub fn has_up(self) -> bool {
        matches!(
            self,
            NeighborType::Up | NeighborType::UpUp | NeighborType::DownUp | NeighborType::UpDash
        )
    }

    pub fn has_down(self) -> bool {
        matches!(
            self,
            NeighborType::Down
                | NeighborType::DownDown
                | NeighborType::DownUp
                | NeighborType::DownDash
        )
    }
}

impl fmt::Display for NeighborType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NeighborType::Empty => "{}",
            NeighborType::Dash => "{-}",
            NeighborType::DashDash => "{-,-}",
            NeighborType::Up => "{↑}",
            NeighborType::Down => "{↓}",
            NeighborType::UpUp => "{↑,↑}",
            NeighborType::DownDown => "{↓,↓}",
            NeighborType::DownUp => "{↓,↑}",
            NeighborType::UpDash => "{↑,-}",
            NeighborType::DownDash => "{↓,-}",
        };
        f.write_str(s)
    }
}

/// The trace of one solution path on a bag.
///
/// `slots` has one more entry than `verts`: `slots[i]` sits before
/// `verts[i]` and the last one after the last vertex. Stored in canonical
/// orientation, see [`PartialPath::canonical`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialPath {
    pub verts: Vec<usize>,
    pub slots: Vec<Slot>,
}

impl PartialPath {
    pub fn new(verts: Vec<usize>, slots: Vec<Slot>) -> Self {
        assert_eq!(slots.len(), verts.len() + 1, "one slot per gap");
        PartialPath { verts, slots }.canonical()
    }

    /// A path and its reversal describe the same object; keep the one whose
    /// first vertex is smaller, or whose slots are smaller for a single vertex.
    pub fn canonical(mut self) -> Self {
        let flip = match self.verts.len() {
            1 => self.slots[0] > self.slots[1],
            _ => self.verts[0] > self.verts[self.verts.len() - 1],
        };
        if flip {
            self.verts.reverse();
            self.slots.reverse();
        }
        self
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&w| w == v)
    }

    pub fn neighbor_type(&self, i: usize) -> NeighborType {
        NeighborType::from_slots(self.slots[i], self.slots[i + 1])
    }

    pub fn types(&self) -> Vec<NeighborType> {
        (0..self.verts.len())
            .map(|i| self.neighbor_type(i))
            .collect()
    }

    /// Edges used directly inside the bag, as `(min, max)` pairs.
    pub fn dash_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.verts
            .windows(2)
            .enumerate()
            .filter(|&(i, _)| self.slots[i + 1] == Slot::Dash)
            .map(|(_, w)| (w[0].min(w[1]), w[0].max(w[1])))
    }

    /// Tails are `End`/`Up`/`Down`, links are `Dash`/`Up`/`Down`, every
    /// `Dash` is a graph edge and the vertices are distinct.
    pub fn is_locally_consistent(&self, g: &Graph) -> bool {
        let k = self.verts.len();
        if k == 0 || self.slots.len() != k + 1 {
            return false;
        }
        if self.slots[0] == Slot::Dash || self.slots[k] == Slot::Dash {
            return false;
        }
        for i in 1..k {
            match self.slots[i] {
                Slot::End => return false,
                Slot::Dash if !g.has_edge(self.verts[i - 1], self.verts[i]) => return false,
                _ => {}
            }
        }
        let mut sorted = self.verts.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Graph-adjacent vertices of the path must be consecutive and joined
    /// by a `Dash`, otherwise the edge is a chord.
    pub fn is_chordless(&self, g: &Graph) -> bool {
        let k = self.verts.len();
        for i in 0..k {
            for j in i + 1..k {
                if g.has_edge(self.verts[i], self.verts[j])
                    && !(j == i + 1 && self.slots[j] == Slot::Dash)
                {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for PartialPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.verts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}:{}", self.neighbor_type(i))?;
        }
        write!(f, ")")
    }
}

/// A DP key: the multiset of partial paths on the bag, one entry per copy,
/// kept sorted so that equal multisets compare equal.
pub type State = Vec<PartialPath>;

/// Which problem the DP solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpConfig {
    pub mode: Mode,
    pub variant: Variant,
}

impl DpConfig {
    pub fn cover(variant: Variant) -> Self {
        DpConfig {
            mode: Mode::Cover,
            variant,
        }
    }

    pub fn partition(variant: Variant) -> Self {
        DpConfig {
            mode: Mode::Partition,
            variant,
        }
    }
}

/// State-level constraints: coverage (exact in partition mode) and the
/// induced / edge-disjoint restrictions.
pub fn state_admissible(state: &State, bag: &[usize], g: &Graph, cfg: DpConfig) -> bool {
    for &v in bag {
        let hits = state.iter().filter(|p| p.verts.contains(&v)).count();
        let ok = match cfg.mode {
            Mode::Cover => hits >= 1,
            Mode::Partition => hits == 1,
        };
        if !ok {
            return false;
        }
    }
    if cfg.variant.induced && !state.iter().all(|p| p.is_chordless(g)) {
        return false;
    }
    if cfg.variant.edge_disjoint {
        let mut used: Vec<(usize, usize)> = state.iter().flat_map(|p| p.dash_edges()).collect();
        let total = used.len();
        used.sort_unstable();
        used.dedup();
        if used.len() != total {
            return false;
        }
    }
    true
}

/// Every locally consistent partial path on `bag`, canonical and sorted.
pub fn partial_paths(bag: &[usize], g: &Graph) -> Vec<PartialPath> {
    let mut out = Vec::new();
    let mut order = Vec::new();
    let mut used = vec![false; bag.len()];
    grow(bag, g, &mut order, &mut used, &mut out);
    out.sort();
    out.dedup();
    out
}

fn grow(
    bag: &[usize],
    g: &Graph,
    order: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<PartialPath>,
) {
    if !order.is_empty() {
        let k = order.len();
        let tails = [Slot::End, Slot::Up, Slot::Down];
        let links = [Slot::Dash, Slot::Up, Slot::Down];
        let mut slots = vec![Slot::End; k + 1];
        let mut choice = vec![0usize; k + 1];
        loop {
            for i in 0..=k {
                slots[i] = if i == 0 || i == k {
                    tails[choice[i]]
                } else {
                    links[choice[i]]
                };
            }
            let p = PartialPath::new(order.clone(), slots.clone());
            if p.is_locally_consistent(g) {
                out.push(p);
            }
            let mut i = 0;
            while i <= k {
                choice[i] += 1;
                if choice[i] < 3 {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i > k {
                break;
            }
        }
    }
    for i in 0..bag.len() {
        if !used[i] {
            used[i] = true;
            order.push(bag[i]);
            grow(bag, g, order, used, out);
            order.pop();
            used[i] = false;
        }
    }
}

/// Every admissible state on `bag` with at most `kappa` copies in total.
///
/// Exponential; intended for inspection and tests on bags of size ≤ 3.
pub fn enumerate_states(bag: &[usize], g: &Graph, kappa: usize, cfg: DpConfig) -> Vec<State> {
    let classes = partial_paths(bag, g);
    let mut out = Vec::new();
    let mut current = Vec::new();
    multisets(&classes, 0, kappa, &mut current, &mut |s: &State| {
        if state_admissible(s, bag, g, cfg) {
            out.push(s.clone());
        }
    });
    out
}

fn multisets(
    classes: &[PartialPath],
    from: usize,
    room: usize,
    current: &mut State,
    visit: &mut impl FnMut(&State),
) {
    visit(current);
    if room == 0 {
        return;
    }
    for i in from..classes.len() {
        current.push(classes[i].clone());
        multisets(classes, i, room - 1, current, visit);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_neighbor_types() {
        let slots = [Slot::End, Slot::Dash, Slot::Up, Slot::Down];
        let mut seen: Vec<NeighborType> = slots
            .iter()
            .flat_map(|&a| slots.iter().map(move |&b| NeighborType::from_slots(a, b)))
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen, NeighborType::ALL.to_vec());
    }

    #[test]
    fn canonical_orientation() {
        let a = PartialPath::new(vec![3, 1], vec![Slot::Up, Slot::Dash, Slot::End]);
        assert_eq!(a.verts, vec![1, 3]);
        assert_eq!(a.slots, vec![Slot::End, Slot::Dash, Slot::Up]);
        let b = PartialPath::new(vec![2], vec![Slot::Down, Slot::Up]);
        assert_eq!(b.slots, vec![Slot::Up, Slot::Down]);
        assert_eq!(b.types(), vec![NeighborType::DownUp]);
    }

    #[test]
    fn empty_bag_has_one_state() {
        let g = Graph::empty(1);
        let states = enumerate_states(&[], &g, 3, DpConfig::cover(Variant::PLAIN));
        assert_eq!(states, vec![Vec::new()]);
    }

    #[test]
    fn single_vertex_bag() {
        // x alone can carry ∅, ↑, ↓, ↑↑, ↓↓, ↓↑; dash types need a bag neighbour
        let g = Graph::empty(1);
        let one = enumerate_states(&[0], &g, 1, DpConfig::cover(Variant::PLAIN));
        assert_eq!(one.len(), 6);
        let two = enumerate_states(&[0], &g, 2, DpConfig::cover(Variant::PLAIN));
        assert_eq!(two.len(), 6 + 21);
        let part = enumerate_states(&[0], &g, 2, DpConfig::partition(Variant::PLAIN));
        assert_eq!(part.len(), 6);
    }

    /// Builds partial paths from per-vertex neighbour types rather than
    /// slots: an ordering plus a type per vertex, kept when some slot
    /// sequence realises exactly those types.
    fn by_types(bag: &[usize], g: &Graph) -> Vec<PartialPath> {
        let mut out = Vec::new();
        let orders: Vec<Vec<usize>> = match bag.len() {
            2 => vec![
                vec![bag[0]],
                vec![bag[1]],
                vec![bag[0], bag[1]],
                vec![bag[1], bag[0]],
            ],
            _ => unimplemented!(),
        };
        for order in orders {
            let k = order.len();
            let count = 10usize.pow(k as u32);
            for code in 0..count {
                let types: Vec<NeighborType> = (0..k)
                    .map(|i| NeighborType::ALL[(code / 10usize.pow(i as u32)) % 10])
                    .collect();
                let all = [Slot::End, Slot::Dash, Slot::Up, Slot::Down];
                for mask in 0..4usize.pow(k as u32 + 1) {
                    let slots: Vec<Slot> = (0..=k).map(|i| all[(mask >> (2 * i)) & 3]).collect();
                    let p = PartialPath {
                        verts: order.clone(),
                        slots,
                    };
                    if p.is_locally_consistent(g) && p.types() == types {
                        out.push(p.canonical());
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn adjacent_pair_matches_type_enumeration() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let direct = partial_paths(&[0, 1], &g);
        assert_eq!(direct, by_types(&[0, 1], &g));
        // 6 + 6 single-vertex classes; two-vertex orders: 3 tails x 3 links x 3 tails
        assert_eq!(direct.len(), 12 + 27);

        let cfg = DpConfig::cover(Variant::PLAIN);
        let states = enumerate_states(&[0, 1], &g, 2, cfg);
        let mut expect = 0;
        for (i, a) in direct.iter().enumerate() {
            if a.len() == 2 {
                expect += 1;
            }
            for b in &direct[i..] {
                let covered = [0, 1]
                    .iter()
                    .all(|v| a.verts.contains(v) || b.verts.contains(v));
                if covered {
                    expect += 1;
                }
            }
        }
        assert_eq!(states.len(), expect);
    }

    #[test]
    fn variant_filters() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let up = PartialPath::new(vec![0, 1], vec![Slot::End, Slot::Up, Slot::End]);
        let dash = PartialPath::new(vec![0, 1], vec![Slot::End, Slot::Dash, Slot::End]);
        let induced = DpConfig::cover(Variant::INDUCED);
        assert!(!state_admissible(&vec![up], &[0, 1], &g, induced));
        assert!(state_admissible(&vec![dash.clone()], &[0, 1], &g, induced));
        let disjoint = DpConfig::cover(Variant::EDGE_DISJOINT);
        assert!(!state_admissible(
            &vec![dash.clone(), dash],
            &[0, 1],
            &g,
            disjoint
        ));
    }
}
