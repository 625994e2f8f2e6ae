//! Orbits of tabloids under a permutation group `W`, the stratified orbit
//! poset `T_{D;W}`, and the projection onto the orbit poset of an
//! overgroup `W′`.
//!
//! Orbit `a` lies below orbit `b` when some `σ ∈ W` moves the
//! representative of `a` below the representative of `b`. Orbits are
//! grouped into strata by shape; strata are kept coarsest first.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::permgroup::{Permutation, PermutationGroup};
use crate::tabloid::{dominance_leq, enumerate_tabloids, partitions_of, Partition, Tabloid};

/// `"<shape>#<k>"` with `k` the 1-based position inside the stratum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitId {
    pub shape: Partition,
    pub index: usize,
}

impl fmt::Display for OrbitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})#{}", self.shape, self.index)
    }
}

impl fmt::Debug for OrbitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for OrbitId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (shape, index) = s
            .trim()
            .rsplit_once('#')
            .ok_or_else(|| Error::Parse(format!("orbit id {s:?} lacks '#'")))?;
        let index = index
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad orbit index in {s:?}")))?;
        Ok(OrbitId {
            shape: shape.parse()?,
            index,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub id: OrbitId,
    /// least member in enumeration order
    pub representative: Tabloid,
    /// sorted
    pub members: Vec<Tabloid>,
}

impl Orbit {
    pub fn shape(&self) -> &Partition {
        &self.id.shape
    }
}

/// The `W`-orbits of tabloids of shape `lambda`, ordered by representative.
pub fn orbits(group: &PermutationGroup, lambda: &Partition) -> Result<Vec<Orbit>> {
    if lambda.degree() != group.degree() {
        return Err(Error::DegreeMismatch {
            expected: group.degree(),
            found: lambda.degree(),
        });
    }
    let all = enumerate_tabloids(lambda)?;
    let position: HashMap<&Tabloid, usize> = all.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut taken = vec![false; all.len()];
    let mut out = Vec::new();
    for (i, t) in all.iter().enumerate() {
        if taken[i] {
            continue;
        }
        let mut members: Vec<Tabloid> = group.elements().iter().map(|s| t.act(s)).collect();
        members.sort();
        members.dedup();
        for m in &members {
            taken[position[m]] = true;
        }
        out.push(Orbit {
            id: OrbitId {
                shape: lambda.clone(),
                index: out.len() + 1,
            },
            representative: t.clone(),
            members,
        });
    }
    Ok(out)
}

/// Dense bit rows; `rows[i]` bit `j` set iff `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Relation {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl Relation {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            words,
            rows: vec![vec![0; words]; n],
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        self.rows[i][j / 64] |= 1 << (j % 64);
    }

    /// `i ≤ j` implies `up(j) ⊆ up(i)`.
    fn is_transitive(&self) -> bool {
        (0..self.rows.len()).all(|i| {
            (0..self.rows.len())
                .filter(|&j| self.get(i, j))
                .all(|j| (0..self.words).all(|w| self.rows[j][w] & !self.rows[i][w] == 0))
        })
    }
}

/// A covering pair: `upper` covers `lower`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverEdge {
    pub upper: usize,
    pub lower: usize,
}

/// The orbit set `T_{D;W}` with its induced order, stratified by shape.
#[derive(Clone)]
pub struct StratifiedPoset {
    group: Arc<PermutationGroup>,
    domain: Vec<Partition>,
    orbits: Vec<Orbit>,
    /// orbit index range of each stratum, aligned with `domain`
    strata: Vec<std::ops::Range<usize>>,
    stratum_of: Vec<usize>,
    relation: Relation,
    lookup: HashMap<Tabloid, usize>,
}

/// Builds `T_{D;W}`. The domain is deduplicated and sorted coarsest first.
pub fn build_poset(group: Arc<PermutationGroup>, domain: &[Partition]) -> Result<StratifiedPoset> {
    if domain.is_empty() {
        return Err(Error::Invalid("the set of shapes must not be empty".into()));
    }
    for lambda in domain {
        if lambda.degree() != group.degree() {
            return Err(Error::DegreeMismatch {
                expected: group.degree(),
                found: lambda.degree(),
            });
        }
    }
    let mut domain: Vec<Partition> = domain.to_vec();
    domain.sort_by(|a, b| b.cmp(a));
    domain.dedup();

    let mut all_orbits = Vec::new();
    let mut strata = Vec::new();
    let mut stratum_of = Vec::new();
    for (s, lambda) in domain.iter().enumerate() {
        let start = all_orbits.len();
        let orbs = orbits(&group, lambda)?;
        stratum_of.extend(std::iter::repeat_n(s, orbs.len()));
        all_orbits.extend(orbs);
        strata.push(start..all_orbits.len());
    }
    let lookup = all_orbits
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.members.iter().map(move |t| (t.clone(), i)))
        .collect();

    let n = all_orbits.len();
    let mut relation = Relation::new(n);
    for i in 0..n {
        relation.set(i, i);
    }
    for (si, a_range) in strata.iter().enumerate() {
        for (sj, b_range) in strata.iter().enumerate() {
            if si == sj || !dominance_leq(&domain[si], &domain[sj]) {
                continue;
            }
            for i in a_range.clone() {
                let a = &all_orbits[i].representative;
                for j in b_range.clone() {
                    let b = &all_orbits[j].representative;
                    if group.elements().iter().any(|s| a.act(s).leq(b)) {
                        relation.set(i, j);
                    }
                }
            }
        }
    }
    let poset = StratifiedPoset {
        group,
        domain,
        orbits: all_orbits,
        strata,
        stratum_of,
        relation,
        lookup,
    };
    poset.check_partial_order()?;
    Ok(poset)
}

impl StratifiedPoset {
    fn check_partial_order(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.leq(i, j) && self.leq(j, i) {
                    return Err(Error::Invalid(format!(
                        "orbit order is not antisymmetric at {} and {}",
                        self.orbits[i].id, self.orbits[j].id
                    )));
                }
            }
        }
        if !self.relation.is_transitive() {
            return Err(Error::Invalid("orbit order is not transitive".into()));
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<PermutationGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    /// Shapes, coarsest first.
    pub fn domain(&self) -> &[Partition] {
        &self.domain
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn orbit(&self, i: usize) -> &Orbit {
        &self.orbits[i]
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn strata(&self) -> &[std::ops::Range<usize>] {
        &self.strata
    }

    /// Orbit indices of the stratum of shape `lambda`.
    pub fn stratum(&self, lambda: &Partition) -> Option<std::ops::Range<usize>> {
        self.domain
            .iter()
            .position(|l| l == lambda)
            .map(|s| self.strata[s].clone())
    }

    /// Position in [`domain`](Self::domain) of the stratum holding orbit `i`.
    pub fn stratum_of(&self, i: usize) -> usize {
        self.stratum_of[i]
    }

    pub fn stratum_sizes(&self) -> Vec<usize> {
        self.strata.iter().map(|r| r.len()).collect()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.relation.get(i, j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// Orbit containing tabloid `t`, if its shape is in the domain.
    pub fn orbit_of(&self, t: &Tabloid) -> Option<usize> {
        self.lookup.get(t).copied()
    }

    pub fn find(&self, id: &OrbitId) -> Result<usize> {
        self.stratum(&id.shape)
            .and_then(|r| (id.index >= 1 && id.index <= r.len()).then(|| r.start + id.index - 1))
            .ok_or_else(|| Error::UnknownOrbit(id.to_string()))
    }

    pub fn find_str(&self, id: &str) -> Result<usize> {
        self.find(&id.parse()?)
    }

    pub fn id(&self, i: usize) -> &OrbitId {
        &self.orbits[i].id
    }

    /// All comparable pairs `(a, b)` with `a < b`.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| i != j).map(move |j| (i, j)))
            .filter(|&(i, j)| self.leq(i, j))
            .collect()
    }

    /// Covering pairs of the order, sorted by `(upper, lower)`.
    pub fn hasse_edges(&self) -> Vec<CoverEdge> {
        let n = self.len();
        let mut out = Vec::new();
        for upper in 0..n {
            for lower in 0..n {
                if !self.lt(lower, upper) {
                    continue;
                }
                let covered = (0..n).any(|k| self.lt(lower, k) && self.lt(k, upper));
                if !covered {
                    out.push(CoverEdge { upper, lower });
                }
            }
        }
        out
    }

    /// DOT graph: one rank per stratum, edges from the covering orbit down
    /// to the covered one.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=TB;\n  node [shape=plaintext];\n");
        for (k, range) in self.strata.iter().enumerate() {
            s.push_str(&format!("  subgraph \"stratum_{k}\" {{\n    rank=same;\n"));
            for i in range.clone() {
                s.push_str(&format!(
                    "    \"{}\" [tooltip=\"{}\"];\n",
                    self.orbits[i].id, self.orbits[i].representative
                ));
            }
            s.push_str("  }\n");
        }
        for e in self.hasse_edges() {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.orbits[e.upper].id, self.orbits[e.lower].id
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let strata: Vec<Value> = self
            .domain
            .iter()
            .zip(&self.strata)
            .map(|(lambda, range)| {
                let orbs: Vec<Value> = range
                    .clone()
                    .map(|i| {
                        let o = &self.orbits[i];
                        json!({
                            "id": o.id.to_string(),
                            "representative": o.representative.to_string(),
                            "size": o.members.len(),
                        })
                    })
                    .collect();
                json!({ "shape": lambda.to_string(), "orbits": orbs })
            })
            .collect();
        let relation: Vec<Value> = self
            .relation_pairs()
            .into_iter()
            .map(|(a, b)| json!([self.orbits[a].id.to_string(), self.orbits[b].id.to_string()]))
            .collect();
        let hasse: Vec<Value> = self
            .hasse_edges()
            .into_iter()
            .map(|e| {
                json!({
                    "upper": self.orbits[e.upper].id.to_string(),
                    "lower": self.orbits[e.lower].id.to_string(),
                })
            })
            .collect();
        json!({
            "degree": self.degree(),
            "group_order": self.group.order(),
            "strata": strata,
            "relation": relation,
            "hasse_edges": hasse,
        })
    }
}

impl fmt::Debug for StratifiedPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StratifiedPoset")
            .field("group_order", &self.group.order())
            .field("domain", &self.domain)
            .field("stratum_sizes", &self.stratum_sizes())
            .finish()
    }
}

/// The map `T_{D;W} → T_{D;W′}` sending each `W`-orbit to the `W′`-orbit
/// containing it, for an overgroup `W′ ⊇ W`.
#[derive(Clone, Debug)]
pub struct Projection {
    source: StratifiedPoset,
    target: StratifiedPoset,
    image: Vec<usize>,
    fibers: Vec<Vec<usize>>,
}

/// Projection onto the orbits of an overgroup of index 1 or 2.
pub fn project(
    w: Arc<PermutationGroup>,
    wp: Arc<PermutationGroup>,
    domain: &[Partition],
) -> Result<Projection> {
    let idx = wp.index_of(&w)?;
    if idx > 2 {
        return Err(Error::IndexViolation {
            expected: "1 or 2".into(),
            found: idx,
        });
    }
    fuse(w, wp, domain)
}

/// Projection onto the orbits of an arbitrary overgroup.
pub fn fuse(
    w: Arc<PermutationGroup>,
    over: Arc<PermutationGroup>,
    domain: &[Partition],
) -> Result<Projection> {
    w.require_subgroup_of(&over)?;
    let source = build_poset(w, domain)?;
    let target = build_poset(over, domain)?;
    Projection::between(source, target)
}

impl Projection {
    /// Projection between two already built posets over the same domain.
    pub fn between(source: StratifiedPoset, target: StratifiedPoset) -> Result<Self> {
        source.group.require_subgroup_of(&target.group)?;
        if source.domain != target.domain {
            return Err(Error::Invalid("posets have different domains".into()));
        }
        let image: Vec<usize> = source
            .orbits
            .iter()
            .map(|o| target.orbit_of(&o.representative).expect("same domain"))
            .collect();
        let mut fibers = vec![Vec::new(); target.len()];
        for (i, &t) in image.iter().enumerate() {
            fibers[t].push(i);
        }
        Ok(Self {
            source,
            target,
            image,
            fibers,
        })
    }

    pub fn source(&self) -> &StratifiedPoset {
        &self.source
    }

    pub fn target(&self) -> &StratifiedPoset {
        &self.target
    }

    /// `ψ(a)` for source orbit `a`.
    pub fn image(&self, a: usize) -> usize {
        self.image[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    /// Source orbits over target orbit `t`, sorted.
    pub fn fiber(&self, t: usize) -> &[usize] {
        &self.fibers[t]
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    /// Source orbits sharing a fiber with `a` (including `a`).
    pub fn fiber_of(&self, a: usize) -> &[usize] {
        &self.fibers[self.image[a]]
    }

    /// All two-element fibers, in target order.
    pub fn chiral_pairs(&self) -> Vec<(usize, usize)> {
        self.fibers
            .iter()
            .filter(|f| f.len() == 2)
            .map(|f| (f[0], f[1]))
            .collect()
    }

    /// Shapes carrying at least one two-element fiber. Requires the domain
    /// to be all of `P_d`.
    pub fn chiral_support_ideal(&self) -> Result<Vec<Partition>> {
        let d = self.source.degree();
        let mut full = partitions_of(d)?;
        full.sort_by(|a, b| b.cmp(a));
        if self.source.domain != full {
            return Err(Error::DomainNotFull(d));
        }
        let mut out: Vec<Partition> = self
            .chiral_pairs()
            .into_iter()
            .map(|(a, _)| self.source.orbits[a].shape().clone())
            .collect();
        out.dedup();
        Ok(out)
    }

    /// The action of `η ∈ W′` on source orbits: `a ↦ O_W(ηA)`.
    pub fn coset_action(&self, eta: &Permutation) -> Result<Vec<usize>> {
        if !self.target.group.contains(eta) {
            return Err(Error::NotAMember {
                perm: eta.to_string(),
                group: "the overgroup",
            });
        }
        Ok(self
            .source
            .orbits
            .iter()
            .map(|o| {
                self.source
                    .orbit_of(&o.representative.act(eta))
                    .expect("W′ normalizes W")
            })
            .collect())
    }

    /// Least element of `W′ ∖ W`, if any.
    pub fn tau(&self) -> Option<Permutation> {
        let w = &self.source.group;
        self.target
            .group
            .elements()
            .iter()
            .find(|p| !w.contains(p))
            .cloned()
    }

    pub fn to_json(&self) -> Value {
        let fibers: Vec<Value> = self
            .fibers
            .iter()
            .enumerate()
            .map(|(t, f)| {
                json!({
                    "target": self.target.id(t).to_string(),
                    "members": f.iter().map(|&a| self.source.id(a).to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let pairs: Vec<Value> = self
            .chiral_pairs()
            .into_iter()
            .map(|(a, b)| json!([self.source.id(a).to_string(), self.source.id(b).to_string()]))
            .collect();
        json!({
            "source_group_order": self.source.group.order(),
            "target_group_order": self.target.group.order(),
            "fibers": fibers,
            "chiral_pairs": pairs,
        })
    }
}
