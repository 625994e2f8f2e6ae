//! Exact arithmetic on permutations of `{1..d}` and on finite permutation
//! groups given by generators.
//!
//! Points are 1-based in every textual form (`"(12)(34)"`) and 0-based
//! internally. Composition follows the functional convention:
//! `p.compose(&q)` applies `q` first, then `p`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest degree for which the normalizer is computed by scanning `S_d`
/// unless the caller explicitly overrides the limit.
pub const NORMALIZER_MAX_DEGREE: usize = 8;

/// Largest group order for which one-dimensional characters are enumerated.
pub const CHARACTER_MAX_ORDER: usize = 10_000;

/// A bijection of `{1..d}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based images: `images[i - 1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        if d > u8::MAX as usize {
            return Err(Error::NotAPermutation(format!("degree {d} is too large")));
        }
        let mut seen = vec![false; d];
        let mut out = Vec::with_capacity(d);
        for &img in images {
            if img == 0 || img > d || seen[img - 1] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[img - 1] = true;
            out.push((img - 1) as u8);
        }
        Ok(Self { images: out })
    }

    /// Caller guarantees `images` is a bijection of `0..len`.
    pub(crate) fn from_zero_based(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x as usize)
        });
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn map(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// Image of a 1-based point.
    pub fn image(&self, point: usize) -> usize {
        self.map(point - 1) + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Permutation) -> Permutation {
        assert_eq!(
            self.degree(),
            rhs.degree(),
            "composing permutations of different degree"
        );
        Permutation {
            images: rhs
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `nu ∘ self ∘ nu⁻¹`.
    pub fn conjugate_by(&self, nu: &Permutation) -> Permutation {
        let mut out = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            out[nu.map(i)] = nu.images[x as usize];
        }
        Permutation { images: out }
    }

    /// `self⁻¹ rhs⁻¹ self rhs`.
    pub fn commutator(&self, rhs: &Permutation) -> Permutation {
        self.inverse()
            .compose(&rhs.inverse())
            .compose(self)
            .compose(rhs)
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| acc.lcm(&c.len()))
    }

    /// Non-trivial cycles as 0-based point lists, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.map(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.map(p);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted lengths of all cycles, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.degree() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Parses disjoint-cycle notation such as `"(12)(34)"`, `"(1 2)(3 4)"`,
    /// `"(10,11)"` or `"()"`.
    ///
    /// Inside one cycle, points are comma separated if a comma is present;
    /// otherwise every digit is a point when `degree <= 9`, and points are
    /// whitespace separated for larger degrees.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut seen = vec![false; degree];
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        while !rest.is_empty() {
            let body_end = rest
                .strip_prefix('(')
                .and_then(|r| r.find(')'))
                .ok_or_else(|| Error::Parse(format!("malformed cycle notation {text:?}")))?;
            let body = &rest[1..=body_end];
            rest = rest[body_end + 2..].trim_start();
            let points = parse_cycle_body(body, degree)
                .map_err(|e| Error::Parse(format!("{e} in {text:?}")))?;
            for &p in &points {
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!(
                        "point {p} out of range 1..={degree} in {text:?}"
                    )));
                }
                if seen[p - 1] {
                    return Err(Error::Parse(format!("point {p} repeated in {text:?}")));
                }
                seen[p - 1] = true;
            }
            for (i, &p) in points.iter().enumerate() {
                images[p - 1] = points[(i + 1) % points.len()];
            }
        }
        Permutation::from_images(&images)
    }
}

fn parse_cycle_body(body: &str, degree: usize) -> std::result::Result<Vec<usize>, String> {
    let tokens: Vec<&str> = if body.contains(',') {
        body.split(',').map(str::trim).collect()
    } else if degree <= 9 {
        return body
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| format!("unexpected character {c:?}"))
            })
            .collect();
    } else {
        body.split_whitespace().collect()
    };
    tokens
        .into_iter()
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad point {t:?}")))
        .collect()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        let sep = if self.degree() <= 9 { "" } else { "," };
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

/// All permutations of degree `d` in lexicographic order of image sequences.
pub fn all_permutations(degree: usize) -> impl Iterator<Item = Permutation> {
    let mut next: Option<Vec<u8>> = Some((0..degree as u8).collect());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut a = current.clone();
        // next lexicographic permutation
        if let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) {
            let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
            a.swap(i - 1, j);
            a[i..].reverse();
            next = Some(a);
        }
        Some(Permutation::from_zero_based(current))
    })
}

/// A finite subgroup of `S_d`, stored with its full, lexicographically
/// sorted element list.
#[derive(Clone)]
pub struct PermutationGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
    position: HashMap<Permutation, usize>,
}

impl PermutationGroup {
    /// The smallest subgroup of `S_d` containing `generators`.
    pub fn generate(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::generate_bounded(degree, generators, usize::MAX)
    }

    /// Like [`generate`](Self::generate) but gives up once the closure
    /// exceeds `max_order` elements.
    pub fn generate_bounded(
        degree: usize,
        generators: &[Permutation],
        max_order: usize,
    ) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if seen.len() > max_order {
                        return Err(Error::LimitExceeded {
                            what: "group order",
                            limit: max_order,
                            found: seen.len(),
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::from_sorted(degree, elements, gens))
    }

    fn from_sorted(
        degree: usize,
        elements: Vec<Permutation>,
        generators: Vec<Permutation>,
    ) -> Self {
        let position = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Self {
            degree,
            elements,
            generators,
            position,
        }
    }

    /// Builds a group from an element set already known to be closed.
    pub(crate) fn from_closed_set(
        degree: usize,
        set: impl IntoIterator<Item = Permutation>,
    ) -> Self {
        let mut elements: Vec<Permutation> = set.into_iter().collect();
        elements.sort();
        elements.dedup();
        let generators = small_generating_set(degree, &elements);
        Self::from_sorted(degree, elements, generators)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_sorted(degree, vec![Permutation::identity(degree)], Vec::new())
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            let mut t: Vec<usize> = (1..=degree).collect();
            t.swap(0, 1);
            gens.push(Permutation::from_images(&t).unwrap());
        }
        if degree >= 3 {
            let c: Vec<usize> = (1..=degree).map(|i| i % degree + 1).collect();
            gens.push(Permutation::from_images(&c).unwrap());
        }
        Self::generate(degree, &gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.position.contains_key(p)
    }

    /// Index of `p` in the sorted element list.
    pub fn position(&self, p: &Permutation) -> Option<usize> {
        self.position.get(p).copied()
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|p| other.contains(p))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn is_normal_in(&self, other: &PermutationGroup) -> bool {
        self.is_subgroup_of(other)
            && other.generators.iter().all(|nu| {
                self.generators
                    .iter()
                    .all(|g| self.contains(&g.conjugate_by(nu)))
            })
    }

    /// Whether `nu` (of the same degree) maps the group onto itself by conjugation.
    pub fn is_normalized_by(&self, nu: &Permutation) -> bool {
        self.generators
            .iter()
            .all(|g| self.contains(&g.conjugate_by(nu)))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements.iter().fold(1, |acc, p| acc.lcm(&p.order()))
    }

    /// Orbits of the natural action on 0-based points.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let mut orbit: Vec<usize> = self.elements.iter().map(|g| g.map(p)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &q in &orbit {
                seen[q] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// The normalizer of this group in `S_d`, found by scanning all of `S_d`.
    ///
    /// Degrees above [`NORMALIZER_MAX_DEGREE`] are rejected unless
    /// `allow_large` is set.
    pub fn normalizer(&self, allow_large: bool) -> Result<PermutationGroup> {
        if self.degree > NORMALIZER_MAX_DEGREE && !allow_large {
            return Err(Error::LimitExceeded {
                what: "normalizer degree",
                limit: NORMALIZER_MAX_DEGREE,
                found: self.degree,
            });
        }
        let members = all_permutations(self.degree).filter(|nu| self.is_normalized_by(nu));
        Ok(Self::from_closed_set(self.degree, members))
    }

    /// `N(W) ∩ N(W′)` for `self = W ≤ W′ = over`.
    pub fn intersect_normalizers(
        &self,
        over: &PermutationGroup,
        allow_large: bool,
    ) -> Result<PermutationGroup> {
        self.require_subgroup_of(over)?;
        let n = self.normalizer(allow_large)?;
        let members = n
            .elements
            .iter()
            .filter(|nu| over.is_normalized_by(nu))
            .cloned();
        Ok(Self::from_closed_set(self.degree, members))
    }

    pub(crate) fn require_subgroup_of(&self, over: &PermutationGroup) -> Result<()> {
        if self.degree != over.degree {
            return Err(Error::DegreeMismatch {
                expected: over.degree,
                found: self.degree,
            });
        }
        if !self.is_subgroup_of(over) {
            return Err(Error::NotSubgroup(format!(
                "group of order {} is not contained in group of order {}",
                self.order(),
                over.order()
            )));
        }
        Ok(())
    }

    /// `|self : sub|`.
    pub fn index_of(&self, sub: &PermutationGroup) -> Result<usize> {
        sub.require_subgroup_of(self)?;
        Ok(self.order() / sub.order())
    }

    /// One representative per left coset `σ·sub`, each the least element of
    /// its coset; the identity comes first.
    pub fn coset_representatives(&self, sub: &PermutationGroup) -> Result<Vec<Permutation>> {
        sub.require_subgroup_of(self)?;
        let mut covered: HashSet<Permutation> = HashSet::new();
        let mut reps = Vec::new();
        for sigma in &self.elements {
            if covered.contains(sigma) {
                continue;
            }
            reps.push(sigma.clone());
            for w in &sub.elements {
                covered.insert(sigma.compose(w));
            }
        }
        Ok(reps)
    }

    /// Subgroup generated by `gens` inside this group.
    pub fn subgroup(&self, gens: &[Permutation]) -> Result<PermutationGroup> {
        for g in gens {
            if !self.contains(g) {
                return Err(Error::NotAMember {
                    perm: g.to_string(),
                    group: "the ambient group",
                });
            }
        }
        PermutationGroup::generate(self.degree, gens)
    }

    /// The derived subgroup, computed as the normal closure of the
    /// commutators of the generators.
    pub fn commutator_subgroup(&self) -> PermutationGroup {
        let mut gens: Vec<Permutation> = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let c = a.commutator(b);
                if !c.is_identity() && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        let mut k = PermutationGroup::generate(self.degree, &gens).unwrap();
        loop {
            let extra: Vec<Permutation> = self
                .generators
                .iter()
                .flat_map(|nu| k.generators.iter().map(move |g| g.conjugate_by(nu)))
                .filter(|c| !k.contains(c))
                .collect();
            if extra.is_empty() {
                return k;
            }
            gens.extend(extra);
            k = PermutationGroup::generate(self.degree, &gens).unwrap();
        }
    }

    /// Invariant factors `[n1, n2, …]` with `n1 | n2 | …` of `W/[W,W]`.
    pub fn abelian_invariants(&self) -> Vec<usize> {
        let quotient = AbelianQuotient::new(self);
        quotient.invariant_factors()
    }

    /// All homomorphisms from this group to the roots of unity.
    pub fn one_dim_characters(self: &Arc<Self>) -> Result<Vec<OneDimCharacter>> {
        if self.order() > CHARACTER_MAX_ORDER {
            return Err(Error::LimitExceeded {
                what: "group order for character enumeration",
                limit: CHARACTER_MAX_ORDER,
                found: self.order(),
            });
        }
        let quotient = AbelianQuotient::new(self);
        let q = quotient.order();
        // a generating set of the quotient, chosen greedily from the group generators
        let mut qgens: Vec<usize> = Vec::new();
        let mut span: HashSet<usize> = HashSet::from([quotient.identity]);
        for g in &self.generators {
            let c = quotient.class_of[self.position[g]];
            if span.contains(&c) {
                continue;
            }
            qgens.push(c);
            span = quotient.closure(&qgens);
            if span.len() == q {
                break;
            }
        }
        let orders: Vec<usize> = qgens.iter().map(|&c| quotient.element_order(c)).collect();

        let mut chars: Vec<Vec<RootOfUnity>> = Vec::new();
        let mut assignment = vec![0usize; qgens.len()];
        loop {
            let gen_values: Vec<RootOfUnity> = assignment
                .iter()
                .zip(&orders)
                .map(|(&k, &o)| RootOfUnity::new(k as i64, o as i64))
                .collect();
            if let Some(on_classes) = quotient.extend(&qgens, &gen_values) {
                chars.push(quotient.class_of.iter().map(|&c| on_classes[c]).collect());
            }
            // odometer over assignments
            let mut i = 0;
            while i < assignment.len() {
                assignment[i] += 1;
                if assignment[i] < orders[i] {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
            if i == assignment.len() {
                break;
            }
        }
        chars.sort();
        chars.dedup();
        debug_assert_eq!(chars.len(), q);
        Ok(chars
            .into_iter()
            .map(|values| OneDimCharacter {
                group: Arc::clone(self),
                values,
            })
            .collect())
    }
}

impl fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(
            f,
            "PermutationGroup(degree={}, order={}, generators=[{}])",
            self.degree,
            self.order(),
            gens.join(", ")
        )
    }
}

impl PartialEq for PermutationGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermutationGroup {}

fn small_generating_set(degree: usize, elements: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    // larger orders first keeps the set short
    let mut candidates: Vec<&Permutation> = elements.iter().collect();
    candidates.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.cmp(b)));
    for p in candidates {
        if span.len() == elements.len() {
            break;
        }
        if span.contains(p) {
            continue;
        }
        gens.push(p.clone());
        span = PermutationGroup::generate(degree, &gens)
            .unwrap()
            .elements
            .into_iter()
            .collect();
    }
    gens
}

/// `W/[W,W]` realised on explicit cosets of the derived subgroup.
struct AbelianQuotient {
    /// coset index of every element of `W`, aligned with `W.elements`
    class_of: Vec<usize>,
    /// one representative element index per coset
    reps: Vec<usize>,
    identity: usize,
    /// multiplication table on cosets
    table: Vec<Vec<usize>>,
}

impl AbelianQuotient {
    fn new(w: &PermutationGroup) -> Self {
        let k = w.commutator_subgroup();
        let mut class_of = vec![usize::MAX; w.order()];
        let mut reps = Vec::new();
        for (i, sigma) in w.elements.iter().enumerate() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(i);
            for kappa in &k.elements {
                class_of[w.position[&sigma.compose(kappa)]] = c;
            }
        }
        let table = reps
            .iter()
            .map(|&a| {
                reps.iter()
                    .map(|&b| class_of[w.position[&w.elements[a].compose(&w.elements[b])]])
                    .collect()
            })
            .collect();
        let identity = class_of[0];
        Self {
            class_of,
            reps,
            identity,
            table,
        }
    }

    fn order(&self) -> usize {
        self.reps.len()
    }

    fn element_order(&self, c: usize) -> usize {
        let mut x = c;
        let mut n = 1;
        while x != self.identity {
            x = self.table[c][x];
            n += 1;
        }
        n
    }

    fn closure(&self, gens: &[usize]) -> HashSet<usize> {
        let mut seen = HashSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.table[g][x];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Extends generator values to a homomorphism on the quotient, or
    /// `None` when the assignment is inconsistent.
    fn extend(&self, gens: &[usize], values: &[RootOfUnity]) -> Option<Vec<RootOfUnity>> {
        let mut out: Vec<Option<RootOfUnity>> = vec![None; self.order()];
        out[self.identity] = Some(RootOfUnity::one());
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let vx = out[x].unwrap();
            for (&g, &vg) in gens.iter().zip(values) {
                let y = self.table[g][x];
                let vy = vg * vx;
                match out[y] {
                    Some(existing) if existing != vy => return None,
                    Some(_) => {}
                    None => {
                        out[y] = Some(vy);
                        queue.push_back(y);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    fn invariant_factors(&self) -> Vec<usize> {
        let n = self.order();
        if n == 1 {
            return Vec::new();
        }
        let orders: Vec<usize> = (0..n).map(|c| self.element_order(c)).collect();
        // per prime p: the number of cyclic factors of order >= p^k equals
        // log_p(|{x : p^k x = 0}| / |{x : p^(k-1) x = 0}|)
        let mut prime_parts: Vec<Vec<usize>> = Vec::new();
        for p in prime_factors(n) {
            let mut exps = Vec::new();
            let mut prev = 1usize;
            let mut pk = p;
            loop {
                let count = orders.iter().filter(|&&o| pk % o == 0).count();
                if count == prev {
                    break;
                }
                let mut ratio = count / prev;
                let mut factors = 0;
                while ratio > 1 {
                    ratio /= p;
                    factors += 1;
                }
                exps.push(factors);
                prev = count;
                pk *= p;
            }
            // exps[k] = number of cyclic p-factors of order >= p^(k+1)
            let mut sizes = Vec::new();
            for k in 0..exps.len() {
                let next = exps.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(exps[k] - next) {
                    sizes.push(p.pow(k as u32 + 1));
                }
            }
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            prime_parts.push(sizes);
        }
        let len = prime_parts.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<usize> = (0..len)
            .map(|i| {
                prime_parts
                    .iter()
                    .map(|sizes| sizes.get(i).copied().unwrap_or(1))
                    .product()
            })
            .collect();
        factors.sort_unstable();
        factors
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `e^{2πi q}` for an exact rational `0 ≤ q < 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity(Ratio<i64>);

impl RootOfUnity {
    pub fn new(numer: i64, denom: i64) -> Self {
        let r = Ratio::new(numer.rem_euclid(denom), denom);
        RootOfUnity(r)
    }

    pub fn one() -> Self {
        RootOfUnity(Ratio::from_integer(0))
    }

    /// The exponent `q` in `e^{2πi q}`.
    pub fn fraction(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_one(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn inverse(&self) -> Self {
        RootOfUnity::new(-*self.0.numer(), *self.0.denom())
    }

    /// Multiplicative order.
    pub fn order(&self) -> usize {
        *self.0.denom() as usize
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;
    // exponents add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let s = self.0 + rhs.0;
        RootOfUnity::new(*s.numer(), *s.denom())
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (*self.0.numer(), *self.0.denom()) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (1, 4) => write!(f, "i"),
            (3, 4) => write!(f, "-i"),
            (n, d) => write!(f, "e({n}/{d})"),
        }
    }
}

impl fmt::Debug for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A homomorphism from a permutation group to the roots of unity.
#[derive(Clone)]
pub struct OneDimCharacter {
    group: Arc<PermutationGroup>,
    /// aligned with `group.elements()`
    values: Vec<RootOfUnity>,
}

impl OneDimCharacter {
    pub fn trivial(group: Arc<PermutationGroup>) -> Self {
        let values = vec![RootOfUnity::one(); group.order()];
        Self { group, values }
    }

    /// Builds a character from a value function, checking the homomorphism law.
    pub fn from_fn(
        group: Arc<PermutationGroup>,
        f: impl Fn(&Permutation) -> RootOfUnity,
    ) -> Result<Self> {
        let values: Vec<RootOfUnity> = group.elements().iter().map(f).collect();
        let chi = Self { group, values };
        if !chi.is_homomorphism() {
            return Err(Error::Invalid("values do not define a homomorphism".into()));
        }
        Ok(chi)
    }

    pub fn group(&self) -> &Arc<PermutationGroup> {
        &self.group
    }

    pub fn values(&self) -> &[RootOfUnity] {
        &self.values
    }

    pub fn value(&self, sigma: &Permutation) -> Result<RootOfUnity> {
        self.group
            .position(sigma)
            .map(|i| self.values[i])
            .ok_or_else(|| Error::NotAMember {
                perm: sigma.to_string(),
                group: "the character's group",
            })
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(RootOfUnity::is_one)
    }

    pub fn kernel(&self) -> Vec<Permutation> {
        self.group
            .elements()
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.is_one())
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Exhaustive check of `χ(στ) = χ(σ)χ(τ)`.
    pub fn is_homomorphism(&self) -> bool {
        let els = self.group.elements();
        els.iter().enumerate().all(|(i, s)| {
            els.iter().enumerate().all(|(j, t)| {
                let st = self.group.position(&s.compose(t)).unwrap();
                self.values[st] == self.values[i] * self.values[j]
            })
        })
    }
}

impl PartialEq for OneDimCharacter {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.values == other.values
    }
}

impl Eq for OneDimCharacter {}

impl fmt::Debug for OneDimCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .group
            .generators()
            .iter()
            .map(|g| format!("{g}↦{}", self.value(g).unwrap()))
            .collect();
        write!(f, "OneDimCharacter[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: usize) -> Permutation {
        Permutation::parse_cycles(s, d).unwrap()
    }

    fn grp(d: usize, gens: &[&str]) -> PermutationGroup {
        let gens: Vec<Permutation> = gens.iter().map(|s| p(s, d)).collect();
        PermutationGroup::generate(d, &gens).unwrap()
    }

    #[test]
    fn cycle_notation_round_trip() {
        let x = p("(12)(34)", 4);
        assert_eq!(x.images(), vec![2, 1, 4, 3]);
        assert_eq!(x.to_string(), "(12)(34)");
        assert_eq!(p("( 1 2 ) ( 3 4 )", 4), x);
        assert_eq!(p("()", 4).to_string(), "()");
        assert_eq!(p("(1,10)(2 , 3)", 10).to_string(), "(1,10)(2,3)");
        assert_eq!(p("(10 11)", 12).image(10), 11);
    }

    #[test]
    fn cycle_notation_rejects_garbage() {
        assert!(Permutation::parse_cycles("(15)", 4).is_err());
        assert!(Permutation::parse_cycles("(12)(23)", 4).is_err());
        assert!(Permutation::parse_cycles("12", 4).is_err());
        assert!(Permutation::parse_cycles("(1a)", 4).is_err());
        assert!(Permutation::parse_cycles("", 4).is_err());
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = p("(12)", 3);
        let b = p("(23)", 3);
        // (12)(23): 3 -> 2 -> 1
        assert_eq!(a.compose(&b).image(3), 1);
        assert_eq!(a.compose(&b), p("(123)", 3));
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let s = p("(12)(34)", 4);
        let nu = p("(23)", 4);
        assert_eq!(s.conjugate_by(&nu), p("(13)(24)", 4));
        assert_eq!(s.conjugate_by(&nu), nu.compose(&s).compose(&nu.inverse()));
    }

    #[test]
    fn generate_examples() {
        assert_eq!(PermutationGroup::generate(4, &[]).unwrap().order(), 1);
        let klein = grp(4, &["(12)(34)", "(13)(24)"]);
        let listed: Vec<String> = klein.elements().iter().map(|x| x.to_string()).collect();
        assert_eq!(listed, ["()", "(12)(34)", "(13)(24)", "(14)(23)"]);
        let dihedral = grp(6, &["(123)(456)", "(14)(26)(35)"]);
        assert_eq!(dihedral.order(), 6);
        assert!(!dihedral.is_abelian());
    }

    #[test]
    fn generate_rejects_degree_mismatch() {
        let err = PermutationGroup::generate(4, &[p("(12)", 3)]).unwrap_err();
        assert_eq!(
            err,
            Error::DegreeMismatch {
                expected: 4,
                found: 3
            }
        );
    }

    #[test]
    fn all_permutations_is_sorted_and_complete() {
        let all: Vec<Permutation> = all_permutations(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all, PermutationGroup::symmetric(4).elements());
    }

    #[test]
    fn normalizer_examples() {
        let klein = grp(4, &["(12)(34)", "(13)(24)"]);
        assert_eq!(klein.normalizer(false).unwrap().order(), 24);
        assert_eq!(
            PermutationGroup::trivial(4)
                .normalizer(false)
                .unwrap()
                .order(),
            24
        );
        let c3 = grp(3, &["(123)"]);
        assert_eq!(c3.normalizer(false).unwrap().order(), 6);
    }

    #[test]
    fn normalizer_limit() {
        let big = PermutationGroup::trivial(9);
        assert!(big.normalizer(false).unwrap_err().is_limit());
    }

    #[test]
    fn intersect_normalizers_examples() {
        let klein = grp(4, &["(12)(34)", "(13)(24)"]);
        assert_eq!(
            klein.intersect_normalizers(&klein, false).unwrap().order(),
            24
        );
        let g = grp(6, &["(123)(456)", "(14)(26)(35)"]);
        let gp = grp(6, &["(123)(456)", "(14)(26)(35)", "(14)(25)(36)"]);
        let np = g.intersect_normalizers(&gp, false).unwrap();
        assert!(gp.is_subgroup_of(&np));
        // brute-force oracle over S_6
        let oracle = all_permutations(6)
            .filter(|nu| {
                g.elements().iter().all(|s| g.contains(&s.conjugate_by(nu)))
                    && gp
                        .elements()
                        .iter()
                        .all(|s| gp.contains(&s.conjugate_by(nu)))
            })
            .count();
        assert_eq!(np.order(), oracle);
        assert!(klein.intersect_normalizers(&g, false).is_err());
    }

    #[test]
    fn index_and_cosets() {
        let s4 = PermutationGroup::symmetric(4);
        let klein = grp(4, &["(12)(34)", "(13)(24)"]);
        assert_eq!(s4.index_of(&klein).unwrap(), 6);
        assert_eq!(klein.index_of(&klein).unwrap(), 1);
        let reps = s4.coset_representatives(&klein).unwrap();
        assert_eq!(reps.len(), 6);
        assert!(reps[0].is_identity());
        assert_eq!(
            klein.coset_representatives(&klein).unwrap(),
            vec![klein.identity()]
        );
        assert!(klein.index_of(&s4).is_err());
    }

    #[test]
    fn commutator_examples() {
        let klein = grp(4, &["(12)(34)", "(13)(24)"]);
        assert_eq!(klein.commutator_subgroup().order(), 1);
        let s3 = PermutationGroup::symmetric(3);
        let a3 = s3.commutator_subgroup();
        assert_eq!(a3, grp(3, &["(123)"]));
        // oracle: closure of all 36 commutators
        let all: Vec<Permutation> = s3
            .elements()
            .iter()
            .flat_map(|a| s3.elements().iter().map(move |b| a.commutator(b)))
            .collect();
        assert_eq!(a3, PermutationGroup::generate(3, &all).unwrap());
        let dihedral = grp(6, &["(123)(456)", "(14)(26)(35)"]);
        assert_eq!(dihedral.commutator_subgroup(), grp(6, &["(123)(456)"]));
    }

    #[test]
    fn abelian_invariants_examples() {
        assert_eq!(
            grp(4, &["(12)(34)", "(13)(24)"]).abelian_invariants(),
            vec![2, 2]
        );
        assert_eq!(PermutationGroup::symmetric(4).abelian_invariants(), vec![2]);
        assert_eq!(grp(6, &["(123456)"]).abelian_invariants(), vec![6]);
        assert_eq!(grp(6, &["(12)", "(3456)"]).abelian_invariants(), vec![2, 4]);
        assert_eq!(grp(5, &["(12)", "(34)"]).abelian_invariants(), vec![2, 2]);
        assert!(PermutationGroup::trivial(3).abelian_invariants().is_empty());
    }

    #[test]
    fn characters_of_klein_group() {
        let klein = Arc::new(grp(4, &["(12)(34)", "(13)(24)"]));
        let chars = klein.one_dim_characters().unwrap();
        assert_eq!(chars.len(), 4);
        assert!(chars[0].is_trivial());
        let minus = RootOfUnity::new(1, 2);
        for chi in &chars {
            assert!(chi.is_homomorphism());
            assert!(chi.values().iter().all(|v| v.is_one() || *v == minus));
        }
    }

    #[test]
    fn characters_of_young_subgroup() {
        let s22 = Arc::new(grp(4, &["(12)", "(34)"]));
        let chars = s22.one_dim_characters().unwrap();
        assert_eq!(chars.len(), 4);
        let minus = RootOfUnity::new(1, 2);
        let t12 = p("(12)", 4);
        let t34 = p("(34)", 4);
        let theta1 = chars
            .iter()
            .find(|c| c.value(&t12).unwrap().is_one() && c.value(&t34).unwrap() == minus);
        assert!(theta1.is_some());
    }

    #[test]
    fn characters_of_trivial_and_cyclic() {
        let triv = Arc::new(PermutationGroup::trivial(3));
        let chars = triv.one_dim_characters().unwrap();
        assert_eq!(chars.len(), 1);
        assert!(chars[0].is_trivial());
        let c6 = Arc::new(grp(6, &["(123456)"]));
        let chars = c6.one_dim_characters().unwrap();
        assert_eq!(chars.len(), 6);
        let orders: Vec<usize> = chars
            .iter()
            .map(|c| c.values().iter().map(|v| v.order()).max().unwrap())
            .collect();
        let mut sorted = orders.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3, 3, 6, 6]);
    }

    #[test]
    fn characters_are_constant_on_derived_cosets() {
        let s4 = Arc::new(PermutationGroup::symmetric(4));
        let chars = s4.one_dim_characters().unwrap();
        assert_eq!(chars.len(), 2);
        let a4 = s4.commutator_subgroup();
        for chi in &chars {
            for k in a4.elements() {
                assert!(chi.value(k).unwrap().is_one());
            }
        }
    }

    #[test]
    fn root_of_unity_arithmetic() {
        let a = RootOfUnity::new(1, 3);
        let b = RootOfUnity::new(2, 3);
        assert!((a * b).is_one());
        assert_eq!(a.inverse(), b);
        assert_eq!(RootOfUnity::new(-1, 2), RootOfUnity::new(1, 2));
        assert_eq!(RootOfUnity::new(1, 2).to_string(), "-1");
        assert_eq!(a.order(), 3);
    }
}
