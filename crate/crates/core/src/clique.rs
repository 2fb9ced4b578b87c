//! Bitset branch-and-bound maximum clique with greedy colouring bounds.
//!
//! Used for exact set packing (a sunflower with a fixed kernel is a clique in
//! the "remainders are disjoint" graph).

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bits::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Clears every index up to and including `i`.
    pub fn clear_through(&mut self, i: usize) {
        let w = i / 64;
        for word in &mut self.words[..w] {
            *word = 0;
        }
        let bit = i % 64;
        self.words[w] &= if bit == 63 { 0 } else { !0u64 << (bit + 1) };
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Adjacency of an undirected graph as one bitset per vertex.
pub fn adjacency(len: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Vec<Bits> {
    let mut adj = vec![Bits::new(len); len];
    for j in 1..len {
        for i in 0..j {
            if adjacent(i, j) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    adj
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueOutcome {
    /// Vertices of the best clique found, ascending.
    pub clique: Vec<usize>,
    /// The search tree was exhausted without reaching the target early, so
    /// the clique is a maximum one.
    pub proved_maximum: bool,
    pub nodes: u64,
}

/// Greedy colouring bound: returns the vertices of `p` ordered by colour
/// class together with each one's colour number (1-based, nondecreasing).
fn colour_order(p: &Bits, adj: &[Bits]) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = p.clone();
    let mut order = Vec::with_capacity(p.count());
    let mut colours = Vec::with_capacity(order.capacity());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.and_not_assign(&adj[v]);
            uncoloured.remove(v);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

struct Search<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    target: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut p: Bits) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let (order, colours) = colour_order(&p, self.adj);
        for i in (0..order.len()).rev() {
            if self.aborted || self.best.len() >= self.target {
                return;
            }
            if current.len() + colours[i] <= self.best.len() {
                return;
            }
            let v = order[i];
            current.push(v);
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            p.remove(v);
        }
    }
}

/// Maximum clique search. Stops early once a clique of size `target` is
/// known (pass `usize::MAX` for a true maximum) or after `node_budget`
/// expansions. `warm` must be a clique; it seeds the incumbent.
pub fn max_clique(adj: &[Bits], warm: Vec<usize>, target: usize, node_budget: u64) -> CliqueOutcome {
    let mut search = Search {
        adj,
        best: warm,
        target,
        nodes: 0,
        budget: node_budget,
        aborted: false,
    };
    if !adj.is_empty() && search.best.len() < target {
        search.expand(&mut Vec::new(), Bits::full(adj.len()));
    }
    let mut clique = search.best;
    clique.sort_unstable();
    // stopping at the target leaves the rest of the tree unexplored
    let stopped_early = clique.len() >= target && !meets_colouring_bound(&clique, adj);
    CliqueOutcome {
        proved_maximum: !search.aborted && !stopped_early,
        clique,
        nodes: search.nodes,
    }
}

/// Number of colours a greedy colouring of `p` uses, an upper bound on the
/// largest clique inside `p`.
pub fn colour_bound(p: &Bits, adj: &[Bits]) -> usize {
    colour_order(p, adj).1.last().copied().unwrap_or(0)
}

fn meets_colouring_bound(clique: &[usize], adj: &[Bits]) -> bool {
    colour_bound(&Bits::full(adj.len()), adj) <= clique.len()
}

/// First-fit clique in index order.
pub fn greedy_clique(adj: &[Bits]) -> Vec<usize> {
    let mut clique: Vec<usize> = Vec::new();
    for v in 0..adj.len() {
        if clique.iter().all(|&u| adj[u].contains(v)) {
            clique.push(v);
        }
    }
    clique
}
