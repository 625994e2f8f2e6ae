//! Stratum-preserving automorphisms of an orbit poset.
//!
//! `Aut₀` is computed as a stabilizer chain: the orbits of the poset are
//! taken as base points, smallest strata first, and for each level a
//! backtracking search finds one automorphism per new image of the base
//! point. Subgroups given by generators (hidden symmetries, stabilizers,
//! restricted actions) go through a plain Schreier–Sims.

use serde_json::{json, Value};
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::orbitposet::{Projection, StratifiedPoset};
use crate::permgroup::{Permutation, PermutationGroup};

/// Largest orbit count the search accepts without an override.
pub const MAX_ORBITS: usize = 64;
/// Groups up to this order are listed element by element.
pub const ELEMENT_CAP: usize = 1_000_000;
/// Abelian invariants are only computed for groups up to this order.
pub const ABELIANIZATION_MAX_ORDER: u128 = 100_000;
const HARD_MAX_ORBITS: usize = u8::MAX as usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutOptions {
    pub max_orbits: usize,
    pub element_cap: usize,
    /// lifts `max_orbits`
    pub limit_override: bool,
}

impl Default for AutOptions {
    fn default() -> Self {
        Self {
            max_orbits: MAX_ORBITS,
            element_cap: ELEMENT_CAP,
            limit_override: false,
        }
    }
}

/// A bijection of the orbit set of a poset, by orbit index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetAutomorphism(Permutation);

impl PosetAutomorphism {
    pub fn identity(n: usize) -> Self {
        Self(Permutation::identity(n))
    }

    /// From 0-based orbit images.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        if images.len() > HARD_MAX_ORBITS {
            return Err(Error::LimitExceeded {
                what: "orbit count",
                limit: HARD_MAX_ORBITS,
                found: images.len(),
            });
        }
        let one_based: Vec<usize> = images.iter().map(|&i| i + 1).collect();
        Ok(Self(Permutation::from_images(&one_based)?))
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0.map(i)
    }

    pub fn images(&self) -> Vec<usize> {
        (0..self.degree()).map(|i| self.0.map(i)).collect()
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.0
    }

    /// `self ∘ rhs`: `rhs` applies first.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self(self.0.compose(&rhs.0))
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    /// Nontrivial cycles on 0-based orbit indices.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.0.cycles()
    }

    /// Sorted lengths of the nontrivial cycles restricted to `points`.
    pub fn cycle_type_on(&self, points: &[usize]) -> Vec<usize> {
        let mut t: Vec<usize> = self
            .cycles()
            .into_iter()
            .filter(|c| points.contains(&c[0]))
            .map(|c| c.len())
            .collect();
        t.sort_unstable();
        t
    }

    /// Cycle notation on orbit ids, e.g. `((2,2)#1 (2,2)#2)`.
    pub fn cycle_string(&self, poset: &StratifiedPoset) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| {
                let ids: Vec<String> = c.iter().map(|&i| poset.id(i).to_string()).collect();
                format!("({})", ids.join(" "))
            })
            .collect()
    }

    /// Stratum preserving, order preserving and order reflecting.
    pub fn is_automorphism_of(&self, poset: &StratifiedPoset) -> bool {
        let n = poset.len();
        if self.degree() != n {
            return false;
        }
        (0..n).all(|i| poset.stratum_of(i) == poset.stratum_of(self.image(i)))
            && (0..n)
                .all(|i| (0..n).all(|j| poset.leq(i, j) == poset.leq(self.image(i), self.image(j))))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.compose(other) == other.compose(self)
    }
}

impl fmt::Debug for PosetAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    own: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[c]` maps `point` to `c`
    transversal: HashMap<usize, Permutation>,
}

impl Level {
    fn new(n: usize, point: usize) -> Self {
        Self {
            point,
            own: Vec::new(),
            orbit: vec![point],
            transversal: HashMap::from([(point, Permutation::identity(n))]),
        }
    }

    fn rebuild(&mut self, n: usize, gens: &[Permutation]) {
        let (orbit, transversal) = orbit_transversal(n, self.point, gens);
        self.orbit = orbit;
        self.transversal = transversal;
    }
}

fn orbit_transversal(
    n: usize,
    point: usize,
    gens: &[Permutation],
) -> (Vec<usize>, HashMap<usize, Permutation>) {
    let mut transversal = HashMap::new();
    transversal.insert(point, Permutation::identity(n));
    let mut orbit = vec![point];
    let mut k = 0;
    while k < orbit.len() {
        let q = orbit[k];
        k += 1;
        for s in gens {
            let r = s.map(q);
            if !transversal.contains_key(&r) {
                let u = s.compose(&transversal[&q]);
                transversal.insert(r, u);
                orbit.push(r);
            }
        }
    }
    (orbit, transversal)
}

fn orbit_points(n: usize, point: usize, gens: &[Permutation]) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[point] = true;
    let mut queue = vec![point];
    while let Some(q) = queue.pop() {
        for s in gens {
            let r = s.map(q);
            if !seen[r] {
                seen[r] = true;
                queue.push(r);
            }
        }
    }
    seen
}

fn first_moved(p: &Permutation) -> usize {
    (0..p.degree())
        .find(|&i| p.map(i) != i)
        .expect("non-identity")
}

/// A base and strong generating set.
#[derive(Clone, Debug)]
struct Chain {
    n: usize,
    levels: Vec<Level>,
}

impl Chain {
    fn gens_from(&self, k: usize) -> Vec<Permutation> {
        self.levels[k..]
            .iter()
            .flat_map(|l| l.own.iter().cloned())
            .collect()
    }

    fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut g = g.clone();
        for (k, level) in self.levels.iter().enumerate().skip(from) {
            match level.transversal.get(&g.map(level.point)) {
                Some(u) => g = u.inverse().compose(&g),
                None => return (g, k),
            }
        }
        (g, self.levels.len())
    }

    fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && self.sift(g, 0).0.is_identity()
    }

    fn order(&self) -> Result<u128> {
        self.order_from(0)
    }

    fn order_from(&self, k: usize) -> Result<u128> {
        self.levels[k..].iter().try_fold(1u128, |acc, l| {
            acc.checked_mul(l.orbit.len() as u128)
                .ok_or(Error::LimitExceeded {
                    what: "automorphism group order",
                    limit: usize::MAX,
                    found: usize::MAX,
                })
        })
    }

    fn elements(&self) -> Vec<Permutation> {
        let mut current = vec![Permutation::identity(self.n)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(current.len() * level.orbit.len());
            for c in &level.orbit {
                let u = &level.transversal[c];
                next.extend(current.iter().map(|e| u.compose(e)));
            }
            current = next;
        }
        current.sort();
        current
    }

    /// Schreier–Sims with the given points forced to the front of the base.
    fn schreier_sims(n: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let mut chain = Chain {
            n,
            levels: prefix.iter().map(|&p| Level::new(n, p)).collect(),
        };
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return chain;
        }
        if chain.levels.is_empty() {
            chain.levels.push(Level::new(n, first_moved(&gens[0])));
        }
        chain.levels[0].own = gens;
        'outer: loop {
            for i in (0..chain.levels.len()).rev() {
                let gens_i = chain.gens_from(i);
                chain.levels[i].rebuild(n, &gens_i);
                let level = &chain.levels[i];
                for p in &level.orbit {
                    for s in &gens_i {
                        let sp = s.map(*p);
                        let h = level.transversal[&sp]
                            .inverse()
                            .compose(&s.compose(&level.transversal[p]));
                        if h.is_identity() {
                            continue;
                        }
                        let (res, j) = chain.sift(&h, i + 1);
                        if !res.is_identity() {
                            if j == chain.levels.len() {
                                chain.levels.push(Level::new(n, first_moved(&res)));
                            }
                            chain.levels[j].own.push(res);
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        chain
    }
}

/// A group of poset automorphisms.
#[derive(Clone, Debug)]
pub struct PosetAutGroup {
    degree: usize,
    generators: Vec<PosetAutomorphism>,
    chain: Chain,
    order: u128,
    elements: Option<Vec<PosetAutomorphism>>,
    element_cap: usize,
}

impl PosetAutGroup {
    fn from_chain(chain: Chain, element_cap: usize) -> Result<Self> {
        let order = chain.order()?;
        let mut generators: Vec<PosetAutomorphism> = chain
            .gens_from(0)
            .into_iter()
            .map(PosetAutomorphism)
            .collect();
        generators.sort();
        generators.dedup();
        let elements = (order <= element_cap as u128).then(|| {
            chain
                .elements()
                .into_iter()
                .map(PosetAutomorphism)
                .collect()
        });
        Ok(Self {
            degree: chain.n,
            generators,
            chain,
            order,
            elements,
            element_cap,
        })
    }

    /// The group generated by `gens` on `n` orbits.
    pub fn generated_by(n: usize, gens: &[PosetAutomorphism], element_cap: usize) -> Result<Self> {
        for g in gens {
            if g.degree() != n {
                return Err(Error::DegreeMismatch {
                    expected: n,
                    found: g.degree(),
                });
            }
        }
        let perms: Vec<Permutation> = gens.iter().map(|g| g.0.clone()).collect();
        Self::from_chain(Chain::schreier_sims(n, &perms, &[]), element_cap)
    }

    /// Number of orbits acted on.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn generators(&self) -> &[PosetAutomorphism] {
        &self.generators
    }

    /// All elements in sorted order, unless the order exceeds the cap.
    pub fn elements(&self) -> Option<&[PosetAutomorphism]> {
        self.elements.as_deref()
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn contains(&self, alpha: &PosetAutomorphism) -> bool {
        self.chain.contains(&alpha.0)
    }

    pub fn is_subgroup_of(&self, other: &PosetAutGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// Orbits of the group on the orbit set, each sorted, ordered by least element.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let gens: Vec<Permutation> = self.generators.iter().map(|g| g.0.clone()).collect();
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let orb = orbit_points(self.degree, p, &gens);
            let members: Vec<usize> = (0..self.degree).filter(|&i| orb[i]).collect();
            for &m in &members {
                seen[m] = true;
            }
            out.push(members);
        }
        out
    }

    /// Some element mapping `a` to `b`, if one exists.
    pub fn element_mapping(&self, a: usize, b: usize) -> Option<PosetAutomorphism> {
        let mut word: HashMap<usize, Permutation> = HashMap::new();
        word.insert(a, Permutation::identity(self.degree));
        let mut queue = VecDeque::from([a]);
        while let Some(q) = queue.pop_front() {
            if q == b {
                return Some(PosetAutomorphism(word[&q].clone()));
            }
            for g in &self.generators {
                let r = g.image(q);
                if !word.contains_key(&r) {
                    let u = g.0.compose(&word[&q]);
                    word.insert(r, u);
                    queue.push_back(r);
                }
            }
        }
        None
    }

    /// Elements fixing every orbit in `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PosetAutGroup> {
        let perms: Vec<Permutation> = self.generators.iter().map(|g| g.0.clone()).collect();
        let full = Chain::schreier_sims(self.degree, &perms, points);
        let k = points.len().min(full.levels.len());
        let chain = Chain {
            n: self.degree,
            levels: full.levels[k..].to_vec(),
        };
        Self::from_chain(chain, self.element_cap)
    }

    /// Order of the permutation group induced on an invariant set of orbits.
    pub fn action_order(&self, points: &[usize]) -> Result<u128> {
        let pos: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut restricted = Vec::new();
        for g in &self.generators {
            let images: Option<Vec<u8>> = points
                .iter()
                .map(|&p| pos.get(&g.image(p)).map(|&i| i as u8))
                .collect();
            let images = images.ok_or_else(|| {
                Error::Invalid("orbit set is not invariant under the group".into())
            })?;
            restricted.push(Permutation::from_zero_based(images));
        }
        Chain::schreier_sims(points.len(), &restricted, &[]).order()
    }

    pub fn is_invariant(&self, points: &[usize]) -> bool {
        self.generators
            .iter()
            .all(|g| points.iter().all(|&p| points.contains(&g.image(p))))
    }

    /// Checks `G = H × K` with `K` the pointwise stabilizer of the complement
    /// of `right` and `H` the pointwise stabilizer of `right`.
    pub fn direct_product_witness(&self, right: &[usize]) -> Result<DirectProductWitness> {
        let mut right: Vec<usize> = right.to_vec();
        right.sort_unstable();
        right.dedup();
        let left: Vec<usize> = (0..self.degree).filter(|p| !right.contains(p)).collect();
        let invariant = self.is_invariant(&right);
        let h = self.pointwise_stabilizer(&right)?;
        let k = self.pointwise_stabilizer(&left)?;
        let right_action_order = if invariant {
            k.action_order(&right)?
        } else {
            0
        };
        let left_action_order = if invariant { h.action_order(&left)? } else { 0 };
        Ok(DirectProductWitness {
            holds: invariant && h.order().checked_mul(k.order()) == Some(self.order),
            left,
            right,
            left_factor_order: h.order(),
            right_factor_order: k.order(),
            left_action_order,
            right_action_order,
        })
    }

    pub fn structure(&self, poset: &StratifiedPoset) -> Result<AutStructure> {
        let abelian_invariants = match &self.elements {
            Some(els) if self.order <= ABELIANIZATION_MAX_ORDER => {
                let g =
                    PermutationGroup::from_closed_set(self.degree, els.iter().map(|e| e.0.clone()));
                Some(g.abelian_invariants())
            }
            _ => None,
        };
        let orbits = self.point_orbits();
        let mut strata = Vec::new();
        for (lambda, range) in poset.domain().iter().zip(poset.strata()) {
            let points: Vec<usize> = range.clone().collect();
            strata.push(StratumAction {
                shape: lambda.to_string(),
                orbits: orbits
                    .iter()
                    .filter(|o| range.contains(&o[0]))
                    .cloned()
                    .collect(),
                order: self.action_order(&points)?,
            });
        }
        Ok(AutStructure {
            order: self.order,
            abelian_invariants,
            strata,
        })
    }

    pub fn to_json(&self, poset: &StratifiedPoset) -> Result<Value> {
        let s = self.structure(poset)?;
        let strata: Vec<Value> = s
            .strata
            .iter()
            .map(|a| {
                json!({
                    "shape": a.shape,
                    "orbits": a.orbits.iter()
                        .map(|o| o.iter().map(|&i| poset.id(i).to_string()).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "action_order": order_value(a.order),
                })
            })
            .collect();
        Ok(json!({
            "order": order_value(self.order),
            "generators": self.generators.iter().map(|g| g.cycle_string(poset)).collect::<Vec<_>>(),
            "abelian_invariants": s.abelian_invariants,
            "stratum_actions": strata,
        }))
    }
}

/// A group order as a JSON number, or as a decimal string past `u64`.
pub fn order_value(order: u128) -> Value {
    match u64::try_from(order) {
        Ok(n) => Value::from(n),
        Err(_) => Value::String(order.to_string()),
    }
}

/// Order, abelianization and per-stratum action of an automorphism group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutStructure {
    pub order: u128,
    /// `None` when the group is too large to enumerate
    pub abelian_invariants: Option<Vec<usize>>,
    pub strata: Vec<StratumAction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumAction {
    pub shape: String,
    /// orbits of the group inside the stratum
    pub orbits: Vec<Vec<usize>>,
    /// order of the induced permutation group on the stratum
    pub order: u128,
}

/// Evidence that a group splits as `H × K` along an invariant set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectProductWitness {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `|H|`, `H` fixing `right` pointwise
    pub left_factor_order: u128,
    /// `|K|`, `K` fixing `left` pointwise
    pub right_factor_order: u128,
    /// order of `H` acting on `left`
    pub left_action_order: u128,
    /// order of `K` acting on `right`
    pub right_action_order: u128,
    pub holds: bool,
}

const NONE: usize = usize::MAX;

struct Searcher<'a> {
    poset: &'a StratifiedPoset,
    n: usize,
    class: Vec<usize>,
    t: Option<Vec<usize>>,
    order: Vec<usize>,
}

struct SearchState {
    map: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
}

impl<'a> Searcher<'a> {
    fn new(poset: &'a StratifiedPoset, t: Option<&PosetAutomorphism>) -> Self {
        let n = poset.len();
        let strata = poset.strata().len();
        let t = t.map(|t| t.images());
        let mut prints: Vec<Vec<usize>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut fp = vec![poset.stratum_of(i)];
            let mut counts = vec![0usize; 2 * strata];
            for j in 0..n {
                if poset.lt(j, i) {
                    counts[2 * poset.stratum_of(j)] += 1;
                }
                if poset.lt(i, j) {
                    counts[2 * poset.stratum_of(j) + 1] += 1;
                }
            }
            fp.extend(counts);
            if let Some(t) = &t {
                fp.push(usize::from(t[i] == i));
            }
            prints.push(fp);
        }
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let class = prints
            .into_iter()
            .map(|fp| {
                let next = ids.len();
                *ids.entry(fp).or_insert(next)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        let sizes = poset.stratum_sizes();
        order.sort_by_key(|&i| (sizes[poset.stratum_of(i)], poset.stratum_of(i), i));
        Self {
            poset,
            n,
            class,
            t,
            order,
        }
    }

    fn assign(&self, st: &mut SearchState, x: usize, y: usize) -> bool {
        if st.map[x] != NONE {
            return st.map[x] == y;
        }
        if st.used[y] || self.class[x] != self.class[y] {
            return false;
        }
        let p = self.poset;
        for &u in &st.trail {
            let v = st.map[u];
            if p.leq(x, u) != p.leq(y, v) || p.leq(u, x) != p.leq(v, y) {
                return false;
            }
        }
        st.map[x] = y;
        st.used[y] = true;
        st.trail.push(x);
        match &self.t {
            Some(t) => self.assign(st, t[x], t[y]),
            None => true,
        }
    }

    fn undo(st: &mut SearchState, mark: usize) {
        while st.trail.len() > mark {
            let x = st.trail.pop().expect("nonempty");
            st.used[st.map[x]] = false;
            st.map[x] = NONE;
        }
    }

    fn dfs(&self, st: &mut SearchState, mut k: usize) -> bool {
        while k < self.n && st.map[self.order[k]] != NONE {
            k += 1;
        }
        if k == self.n {
            return true;
        }
        let x = self.order[k];
        for y in 0..self.n {
            if st.used[y] || self.class[y] != self.class[x] {
                continue;
            }
            let mark = st.trail.len();
            if self.assign(st, x, y) && self.dfs(st, k + 1) {
                return true;
            }
            Self::undo(st, mark);
        }
        false
    }

    /// An automorphism fixing `order[..i]` and sending `order[i]` to `c`.
    fn find(&self, i: usize, c: usize) -> Option<Permutation> {
        let mut st = SearchState {
            map: vec![NONE; self.n],
            used: vec![false; self.n],
            trail: Vec::new(),
        };
        for &p in &self.order[..i] {
            if !self.assign(&mut st, p, p) {
                return None;
            }
        }
        if !self.assign(&mut st, self.order[i], c) || !self.dfs(&mut st, 0) {
            return None;
        }
        Some(Permutation::from_zero_based(
            st.map.iter().map(|&y| y as u8).collect(),
        ))
    }

    fn run(&self) -> Chain {
        let n = self.n;
        let mut level_gens: Vec<Vec<Permutation>> = vec![Vec::new(); n];
        for i in (0..n).rev() {
            let p = self.order[i];
            let mut gens_i: Vec<Permutation> = level_gens[i..].iter().flatten().cloned().collect();
            let deeper = gens_i.clone();
            let mut reached = orbit_points(n, p, &gens_i);
            let mut excluded = vec![false; n];
            for &q in &self.order[..i] {
                excluded[q] = true;
            }
            for c in 0..n {
                if reached[c] || excluded[c] || self.class[c] != self.class[p] {
                    continue;
                }
                match self.find(i, c) {
                    Some(g) => {
                        gens_i.push(g.clone());
                        level_gens[i].push(g);
                        reached = orbit_points(n, p, &gens_i);
                    }
                    None => {
                        let lost = orbit_points(n, c, &deeper);
                        for (q, e) in excluded.iter_mut().enumerate() {
                            *e |= lost[q];
                        }
                    }
                }
            }
        }
        let mut levels = Vec::new();
        for i in 0..n {
            if level_gens[i].is_empty() {
                continue;
            }
            let gens_i: Vec<Permutation> = level_gens[i..].iter().flatten().cloned().collect();
            let mut level = Level::new(n, self.order[i]);
            level.own = level_gens[i].clone();
            level.rebuild(n, &gens_i);
            levels.push(level);
        }
        Chain { n, levels }
    }
}

fn check_size(poset: &StratifiedPoset, opts: &AutOptions) -> Result<()> {
    let n = poset.len();
    let limit = if opts.limit_override {
        HARD_MAX_ORBITS
    } else {
        opts.max_orbits
    };
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "orbit count",
            limit,
            found: n,
        });
    }
    Ok(())
}

fn search(
    poset: &StratifiedPoset,
    t: Option<&PosetAutomorphism>,
    opts: &AutOptions,
) -> Result<PosetAutGroup> {
    check_size(poset, opts)?;
    let chain = Searcher::new(poset, t).run();
    let group = PosetAutGroup::from_chain(chain, opts.element_cap)?;
    debug_assert!(group.generators.iter().all(|g| g.is_automorphism_of(poset)));
    Ok(group)
}

/// `Aut₀` of the poset.
pub fn aut0(poset: &StratifiedPoset, opts: &AutOptions) -> Result<PosetAutGroup> {
    search(poset, None, opts)
}

/// Elements of `Aut₀` commuting with the involution `t`.
pub fn aut0_equivariant(
    poset: &StratifiedPoset,
    t: &PosetAutomorphism,
    opts: &AutOptions,
) -> Result<PosetAutGroup> {
    if t.degree() != poset.len() || !t.is_automorphism_of(poset) {
        return Err(Error::InvalidInvolution(
            "not an automorphism of the poset".into(),
        ));
    }
    if !t.compose(t).is_identity() {
        return Err(Error::InvalidInvolution(format!(
            "order {} is not 1 or 2",
            t.order()
        )));
    }
    if t.is_identity() {
        return search(poset, None, opts);
    }
    search(poset, Some(t), opts)
}

/// `τ̂` for the projection when the groups differ, identity otherwise.
pub fn chiral_involution_or_identity(proj: &Projection) -> Result<PosetAutomorphism> {
    match proj.tau() {
        Some(tau) => chiral_involution(proj, &tau),
        None => Ok(PosetAutomorphism::identity(proj.source().len())),
    }
}

/// `Aut₀′` of the source of the projection.
pub fn aut0_prime(proj: &Projection, opts: &AutOptions) -> Result<PosetAutGroup> {
    let t = chiral_involution_or_identity(proj)?;
    aut0_equivariant(proj.source(), &t, opts)
}

/// `ν̂`: the map `O_W(A) ↦ O_W(νA)` for `ν` normalizing `W`.
pub fn induced_automorphism(
    nu: &Permutation,
    poset: &StratifiedPoset,
) -> Result<PosetAutomorphism> {
    let w = poset.group();
    if nu.degree() != w.degree() {
        return Err(Error::DegreeMismatch {
            expected: w.degree(),
            found: nu.degree(),
        });
    }
    if !w.is_normalized_by(nu) {
        return Err(Error::NotAMember {
            perm: nu.to_string(),
            group: "the normalizer",
        });
    }
    let images: Vec<usize> = poset
        .orbits()
        .iter()
        .map(|o| {
            poset
                .orbit_of(&o.representative.act(nu))
                .expect("normalizer permutes orbits")
        })
        .collect();
    PosetAutomorphism::from_images(&images)
}

/// The image of `N′` in `Aut₀`, with one table row per coset of `W` in `N′`.
#[derive(Clone, Debug)]
pub struct HiddenSymmetries {
    pub group: PosetAutGroup,
    pub table: Vec<(Permutation, PosetAutomorphism)>,
}

impl HiddenSymmetries {
    pub fn to_json(&self, poset: &StratifiedPoset) -> Result<Value> {
        let rows: Vec<Value> = self
            .table
            .iter()
            .map(|(nu, hat)| json!({ "nu": nu.to_string(), "automorphism": hat.cycle_string(poset) }))
            .collect();
        Ok(json!({ "group": self.group.to_json(poset)?, "table": rows }))
    }
}

pub fn hidden_subgroup(
    poset: &StratifiedPoset,
    np: &PermutationGroup,
    w: &PermutationGroup,
    opts: &AutOptions,
) -> Result<HiddenSymmetries> {
    if **poset.group() != *w {
        return Err(Error::Invalid(
            "poset was built for a different group".into(),
        ));
    }
    w.require_subgroup_of(np)?;
    if let Some(nu) = np.generators().iter().find(|nu| !w.is_normalized_by(nu)) {
        return Err(Error::NotAMember {
            perm: nu.to_string(),
            group: "the normalizer",
        });
    }
    check_size(poset, opts)?;
    let mut table = Vec::new();
    for nu in np.coset_representatives(w)? {
        let hat = induced_automorphism(&nu, poset)?;
        table.push((nu, hat));
    }
    let gens: Vec<PosetAutomorphism> = table.iter().map(|(_, h)| h.clone()).collect();
    let group = PosetAutGroup::generated_by(poset.len(), &gens, opts.element_cap)?;
    Ok(HiddenSymmetries { group, table })
}

/// `τ̂`, the action of `τ ∈ W′ ∖ W` on the source orbits.
pub fn chiral_involution(proj: &Projection, tau: &Permutation) -> Result<PosetAutomorphism> {
    if proj.source().group().contains(tau) {
        return Err(Error::Invalid(format!("{tau} lies in the smaller group")));
    }
    let images = proj.coset_action(tau)?;
    let t = PosetAutomorphism::from_images(&images)?;
    if !t.compose(&t).is_identity() || !t.is_automorphism_of(proj.source()) {
        return Err(Error::InvalidInvolution(format!("action of {tau}")));
    }
    Ok(t)
}

/// The automorphism `α′` of the target with `α′∘ψ = ψ∘α`.
pub fn descend(alpha: &PosetAutomorphism, proj: &Projection) -> Result<PosetAutomorphism> {
    let source = proj.source();
    if alpha.degree() != source.len() {
        return Err(Error::DegreeMismatch {
            expected: source.len(),
            found: alpha.degree(),
        });
    }
    let target = proj.target();
    let mut images = vec![NONE; target.len()];
    for a in 0..source.len() {
        let (x, y) = (proj.image(a), proj.image(alpha.image(a)));
        if images[x] != NONE && images[x] != y {
            return Err(Error::NotEquivariant(format!(
                "fiber over {} is split",
                target.id(x)
            )));
        }
        images[x] = y;
    }
    PosetAutomorphism::from_images(&images)
        .map_err(|_| Error::NotEquivariant("descended map is not a bijection".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbitposet::{build_poset, project};
    use crate::tabloid::{partitions_of, Partition};
    use std::sync::Arc;

    fn grp(d: usize, gens: &[&str]) -> Arc<PermutationGroup> {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|s| Permutation::parse_cycles(s, d).unwrap())
            .collect();
        Arc::new(PermutationGroup::generate(d, &gens).unwrap())
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn ethene() -> StratifiedPoset {
        build_poset(
            grp(4, &["(12)(34)", "(13)(24)"]),
            &partitions_of(4).unwrap(),
        )
        .unwrap()
    }

    fn cyclo_proj() -> Projection {
        let g = grp(6, &["(123)(456)", "(14)(26)(35)"]);
        let gp = grp(6, &["(123)(456)", "(14)(26)(35)", "(14)(25)(36)"]);
        let d: Vec<Partition> = ["6", "5,1", "4,2", "4,1,1", "3,3"]
            .iter()
            .map(|s| part(s))
            .collect();
        project(g, gp, &d).unwrap()
    }

    /// Every stratum-preserving bijection, checked directly.
    fn brute_force_aut(p: &StratifiedPoset) -> Vec<PosetAutomorphism> {
        let mut maps: Vec<Vec<usize>> = vec![(0..p.len()).collect()];
        for range in p.strata() {
            let pts: Vec<usize> = range.clone().collect();
            let perms = crate::permgroup::all_permutations(pts.len());
            let perms: Vec<Permutation> = perms.collect();
            let mut next = Vec::new();
            for m in &maps {
                for s in &perms {
                    let mut m2 = m.clone();
                    for (k, &x) in pts.iter().enumerate() {
                        m2[x] = pts[s.map(k)];
                    }
                    next.push(m2);
                }
            }
            maps = next;
        }
        let mut out: Vec<PosetAutomorphism> = maps
            .into_iter()
            .map(|m| PosetAutomorphism::from_images(&m).unwrap())
            .filter(|a| a.is_automorphism_of(p))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn ethene_aut0_order_and_closure() {
        let p = ethene();
        let g = aut0(&p, &AutOptions::default()).unwrap();
        assert_eq!(g.order(), 4320);
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 4320);
        assert!(els.iter().all(|a| a.is_automorphism_of(&p)));
        assert!(els.windows(2).all(|w| w[0] < w[1]));
        assert!(els[0].is_identity() || els.iter().any(PosetAutomorphism::is_identity));
        for a in els.iter().step_by(97) {
            for b in els.iter().step_by(89) {
                assert!(g.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn ethene_direct_product_witness() {
        let p = ethene();
        let g = aut0(&p, &AutOptions::default()).unwrap();
        let bottom: Vec<usize> = p.stratum(&Partition::singletons(4)).unwrap().collect();
        let w = g.direct_product_witness(&bottom).unwrap();
        assert!(w.holds);
        assert_eq!(w.right_factor_order, 720);
        assert_eq!(w.right_action_order, 720);
        assert_eq!(w.left_factor_order, 6);
        let s = g.structure(&p).unwrap();
        let orders: Vec<u128> = s.strata.iter().map(|a| a.order).collect();
        assert_eq!(orders, vec![1, 1, 6, 6, 720]);
        // S_3 × S_6 has abelianization C_2 × C_2
        assert_eq!(s.abelian_invariants, Some(vec![2, 2]));
    }

    #[test]
    fn search_matches_brute_force() {
        let (c, _) = (cyclo_proj(), ());
        let p = c.source();
        let g = aut0(p, &AutOptions::default()).unwrap();
        assert_eq!(g.elements().unwrap(), brute_force_aut(p).as_slice());
        assert_eq!(g.order(), 12);
        let ex = build_poset(
            grp(4, &["(12)(34)", "(13)(24)"]),
            &[part("3,1"), part("2,2"), part("2,1,1")],
        )
        .unwrap();
        let g = aut0(&ex, &AutOptions::default()).unwrap();
        assert_eq!(g.elements().unwrap(), brute_force_aut(&ex).as_slice());
    }

    #[test]
    fn antichain_gives_symmetric_group() {
        let p = build_poset(
            grp(4, &["(12)(34)", "(13)(24)"]),
            &[Partition::singletons(4)],
        )
        .unwrap();
        assert_eq!(aut0(&p, &AutOptions::default()).unwrap().order(), 720);
        let trivial = Arc::new(PermutationGroup::trivial(4));
        let p = build_poset(trivial, &[part("2,2")]).unwrap();
        assert_eq!(aut0(&p, &AutOptions::default()).unwrap().order(), 720);
    }

    #[test]
    fn cyclopropane_aut_groups() {
        let proj = cyclo_proj();
        let p = proj.source();
        let opts = AutOptions::default();
        let full = aut0(p, &opts).unwrap();
        let prime = aut0_prime(&proj, &opts).unwrap();
        assert_eq!(full.order(), 12);
        assert_eq!(prime.order(), 4);
        assert!(prime.is_subgroup_of(&full));
        let t = chiral_involution_or_identity(&proj).unwrap();
        for a in prime.elements().unwrap() {
            assert!(a.commutes_with(&t));
            for (x, y) in proj.chiral_pairs() {
                let (u, v) = (a.image(x), a.image(y));
                assert!(proj.chiral_pairs().contains(&(u.min(v), u.max(v))));
            }
        }
        assert_eq!(t.cycles().len(), 4);
        assert!(prime.contains(&t));
        let brute: Vec<PosetAutomorphism> = brute_force_aut(p)
            .into_iter()
            .filter(|a| a.commutes_with(&t))
            .collect();
        assert_eq!(prime.elements().unwrap(), brute.as_slice());
    }

    #[test]
    fn equivariant_rejects_non_involution() {
        let p = ethene();
        let g = aut0(&p, &AutOptions::default()).unwrap();
        let three = g
            .elements()
            .unwrap()
            .iter()
            .find(|a| a.order() == 3)
            .unwrap();
        assert!(matches!(
            aut0_equivariant(&p, three, &AutOptions::default()),
            Err(Error::InvalidInvolution(_))
        ));
        let id = PosetAutomorphism::identity(p.len());
        assert_eq!(
            aut0_equivariant(&p, &id, &AutOptions::default())
                .unwrap()
                .order(),
            4320
        );
    }

    #[test]
    fn orbit_limit_is_enforced() {
        let p = ethene();
        let opts = AutOptions {
            max_orbits: 10,
            ..AutOptions::default()
        };
        assert!(aut0(&p, &opts).unwrap_err().is_limit());
        let opts = AutOptions {
            limit_override: true,
            ..opts
        };
        assert_eq!(aut0(&p, &opts).unwrap().order(), 4320);
    }

    #[test]
    fn induced_automorphisms_and_kernel() {
        let p = ethene();
        let w = p.group().clone();
        let n = w.normalizer(false).unwrap();
        assert_eq!(n.order(), 24);
        let hats: Vec<PosetAutomorphism> = n
            .elements()
            .iter()
            .map(|nu| induced_automorphism(nu, &p).unwrap())
            .collect();
        for (nu, hat) in n.elements().iter().zip(&hats) {
            assert!(hat.is_automorphism_of(&p));
            assert_eq!(hat.is_identity(), w.contains(nu));
        }
        for (i, a) in n.elements().iter().enumerate().step_by(5) {
            for (j, b) in n.elements().iter().enumerate() {
                let ab = induced_automorphism(&a.compose(b), &p).unwrap();
                assert_eq!(ab, hats[i].compose(&hats[j]));
            }
        }
        let outside = Permutation::parse_cycles("(12)", 4).unwrap();
        assert!(induced_automorphism(&outside, &ethene()).is_ok());
        let c = cyclo_proj();
        assert!(
            induced_automorphism(&Permutation::parse_cycles("(12)", 6).unwrap(), c.source())
                .is_err()
        );
    }

    #[test]
    fn hidden_subgroup_of_ethene() {
        let p = ethene();
        let w = p.group().clone();
        let n = w.normalizer(false).unwrap();
        let opts = AutOptions::default();
        let h = hidden_subgroup(&p, &n, &w, &opts).unwrap();
        assert_eq!(h.group.order(), 6);
        assert_eq!(h.table.len(), 6);
        let full = aut0(&p, &opts).unwrap();
        assert!(h.group.is_subgroup_of(&full));
        let trivial = hidden_subgroup(&p, &w, &w, &opts).unwrap();
        assert_eq!(trivial.group.order(), 1);
    }

    #[test]
    fn hidden_subgroup_of_cyclopropane() {
        let proj = cyclo_proj();
        let p = proj.source();
        let w = p.group().clone();
        let np = w
            .intersect_normalizers(proj.target().group(), false)
            .unwrap();
        let opts = AutOptions::default();
        let h = hidden_subgroup(p, &np, &w, &opts).unwrap();
        // oracle: distinct induced maps over all of N′
        let mut maps: Vec<PosetAutomorphism> = np
            .elements()
            .iter()
            .map(|nu| induced_automorphism(nu, p).unwrap())
            .collect();
        maps.sort();
        maps.dedup();
        assert_eq!(h.group.order(), maps.len() as u128);
        assert!(h.group.is_subgroup_of(&aut0_prime(&proj, &opts).unwrap()));
        assert_eq!((np.order() / w.order()) as u128 % h.group.order(), 0);
    }

    #[test]
    fn chiral_involution_behaviour() {
        let proj = cyclo_proj();
        let tau = proj.tau().unwrap();
        let t = chiral_involution(&proj, &tau).unwrap();
        for a in 0..proj.source().len() {
            if proj.fiber_of(a).len() == 1 {
                assert_eq!(t.image(a), a);
            } else {
                assert_ne!(t.image(a), a);
            }
        }
        let w = proj.source().group().elements()[1].clone();
        assert!(chiral_involution(&proj, &w).is_err());
        let e = ethene();
        let same = project(e.group().clone(), e.group().clone(), e.domain()).unwrap();
        assert!(same.tau().is_none());
        assert!(chiral_involution_or_identity(&same).unwrap().is_identity());
    }

    #[test]
    fn descent_is_a_homomorphism() {
        let proj = cyclo_proj();
        let opts = AutOptions::default();
        let prime = aut0_prime(&proj, &opts).unwrap();
        let els = prime.elements().unwrap();
        for a in els {
            for b in els {
                let ab = descend(&a.compose(b), &proj).unwrap();
                assert_eq!(
                    ab,
                    descend(a, &proj)
                        .unwrap()
                        .compose(&descend(b, &proj).unwrap())
                );
            }
            assert!(descend(a, &proj).unwrap().is_automorphism_of(proj.target()));
        }
        let t = chiral_involution_or_identity(&proj).unwrap();
        assert!(descend(&t, &proj).unwrap().is_identity());
        let full = aut0(proj.source(), &opts).unwrap();
        let bad = full
            .elements()
            .unwrap()
            .iter()
            .find(|a| !a.commutes_with(&t))
            .unwrap();
        assert!(matches!(descend(bad, &proj), Err(Error::NotEquivariant(_))));
    }

    #[test]
    fn schreier_sims_orders() {
        let gens = [
            Permutation::parse_cycles("(123456)", 6).unwrap(),
            Permutation::parse_cycles("(12)", 6).unwrap(),
        ];
        assert_eq!(Chain::schreier_sims(6, &gens, &[]).order().unwrap(), 720);
        let chain = Chain::schreier_sims(6, &gens, &[0, 1]);
        assert_eq!(chain.order_from(2).unwrap(), 24);
        let g = crate::permgroup::PermutationGroup::generate(6, &[gens[0].clone()]).unwrap();
        let c = Chain::schreier_sims(6, g.generators(), &[]);
        assert_eq!(c.order().unwrap(), 6);
        assert_eq!(c.elements(), g.elements());
    }

    #[test]
    fn cycle_strings() {
        let p = ethene();
        let r = p.stratum(&part("2,2")).unwrap();
        let mut images: Vec<usize> = (0..p.len()).collect();
        images.swap(r.start, r.start + 1);
        let a = PosetAutomorphism::from_images(&images).unwrap();
        assert_eq!(a.cycle_string(&p), "((2,2)#1 (2,2)#2)");
        assert_eq!(PosetAutomorphism::identity(p.len()).cycle_string(&p), "()");
    }
}
