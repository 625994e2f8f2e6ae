//! Partitions of `d`, tabloids of a given shape, the `S_d` action on
//! tabloids and the partial order on them.
//!
//! A tabloid is an ordered sequence of disjoint blocks covering `{1..d}`;
//! row order matters, order inside a row does not. The order used
//! throughout is partial-union containment: `A ≤ B` iff
//! `A₁ ∪ … ∪ A_k ⊆ B₁ ∪ … ∪ B_k` for every `k`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::permgroup::Permutation;

pub const PARTITION_MAX_DEGREE: usize = 12;
pub const TABLOID_MAX_DEGREE: usize = 10;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Parse(format!("not a partition: {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        parts.shrink_to_fit();
        Ok(Self(parts))
    }

    /// `(1^d)`
    pub fn singletons(d: usize) -> Self {
        Self(vec![1; d])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn prefix_sums(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().scan(0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
    }

    /// Number of tabloids of this shape, `d! / ∏ λ_i!`.
    pub fn tabloid_count(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        self.0
            .iter()
            .fold(fact(self.degree()), |acc, &p| acc / fact(p))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"2,2"` (surrounding parentheses are tolerated).
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Parses a semicolon-separated partition list such as `"4,2;3,3"`.
pub fn parse_partition_list(s: &str) -> Result<Vec<Partition>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(Partition::from_str)
        .collect()
}

/// All partitions of `d` in reverse-lexicographic order, `(d)` first.
pub fn partitions_of(d: usize) -> Result<Vec<Partition>> {
    if d == 0 || d > PARTITION_MAX_DEGREE {
        return Err(Error::LimitExceeded {
            what: "partition degree",
            limit: PARTITION_MAX_DEGREE,
            found: d,
        });
    }
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            rec(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Dominance: `Σ_{i≤k} λ_i ≤ Σ_{i≤k} μ_i` for every `k`.
pub fn dominance_leq(lambda: &Partition, mu: &Partition) -> bool {
    let mut mu_sums = mu.prefix_sums();
    let mu_total = mu.degree();
    lambda
        .prefix_sums()
        .all(|l| l <= mu_sums.next().unwrap_or(mu_total))
}

/// An ordered set partition of `{1..d}` whose block sizes form `shape`.
///
/// Blocks are stored as sorted 0-based point lists.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tabloid {
    blocks: Vec<Vec<u8>>,
}

impl Tabloid {
    /// Builds a tabloid from 1-based blocks and checks it against `shape`.
    pub fn new(shape: &Partition, blocks: &[Vec<usize>]) -> Result<Self> {
        let d = shape.degree();
        if d > 32 {
            return Err(Error::LimitExceeded {
                what: "tabloid degree",
                limit: 32,
                found: d,
            });
        }
        if blocks.len() != shape.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for shape ({shape})",
                blocks.len()
            )));
        }
        let mut seen = vec![false; d];
        let mut out = Vec::with_capacity(blocks.len());
        for (block, &size) in blocks.iter().zip(shape.parts()) {
            if block.len() != size {
                return Err(Error::ShapeMismatch(format!(
                    "block {block:?} does not have size {size}"
                )));
            }
            let mut b = Vec::with_capacity(size);
            for &x in block {
                if x == 0 || x > d || seen[x - 1] {
                    return Err(Error::Parse(format!("invalid or repeated point {x}")));
                }
                seen[x - 1] = true;
                b.push((x - 1) as u8);
            }
            b.sort_unstable();
            out.push(b);
        }
        Ok(Self { blocks: out })
    }

    /// Parses `"1,2|3,4"`.
    pub fn parse(s: &str) -> Result<Self> {
        let blocks: Vec<Vec<usize>> = s
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad tabloid {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
        let in_order = sizes.windows(2).all(|w| w[0] >= w[1]);
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        if !in_order {
            return Err(Error::ShapeMismatch(format!(
                "block sizes of {s:?} are not weakly decreasing"
            )));
        }
        Tabloid::new(&Partition::new(sizes)?, &blocks)
    }

    pub fn degree(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> Partition {
        Partition(self.blocks.iter().map(Vec::len).collect())
    }

    /// 1-based blocks.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&x| x as usize + 1).collect())
            .collect()
    }

    fn masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u32, |m, &x| m | (1 << x)))
    }

    /// `(σ(A₁), σ(A₂), …)`.
    pub fn apply(&self, sigma: &Permutation) -> Result<Tabloid> {
        if sigma.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: sigma.degree(),
            });
        }
        Ok(self.act(sigma))
    }

    /// Unchecked action; degrees must agree.
    pub(crate) fn act(&self, sigma: &Permutation) -> Tabloid {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<u8> = b.iter().map(|&x| sigma.map(x as usize) as u8).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Tabloid { blocks }
    }

    /// Partial-union containment order.
    pub fn leq(&self, other: &Tabloid) -> bool {
        let k = self.blocks.len().max(other.blocks.len());
        let mut a_masks = self.masks();
        let mut b_masks = other.masks();
        let (mut ua, mut ub) = (0u32, 0u32);
        for _ in 0..k {
            ua |= a_masks.next().unwrap_or(0);
            ub |= b_masks.next().unwrap_or(0);
            if ua & !ub != 0 {
                return false;
            }
        }
        true
    }

    /// The permutation `υ` with `υ·I_λ = self`, matching the i-th smallest
    /// point of each canonical block to the i-th smallest point of the
    /// corresponding block here.
    pub fn coset_rep(&self) -> Permutation {
        let mut images = vec![0u8; self.degree()];
        let mut next = 0usize;
        for b in &self.blocks {
            for &x in b {
                images[next] = x;
                next += 1;
            }
        }
        Permutation::from_zero_based(images)
    }
}

impl fmt::Display for Tabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| (x + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", blocks.join("|"))
    }
}

impl fmt::Debug for Tabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tabloid({self})")
    }
}

/// `I_λ`: consecutive filling of the rows.
pub fn canonical_tabloid(shape: &Partition) -> Tabloid {
    let mut next = 0u8;
    let blocks = shape
        .parts()
        .iter()
        .map(|&size| {
            let b: Vec<u8> = (next..next + size as u8).collect();
            next += size as u8;
            b
        })
        .collect();
    Tabloid { blocks }
}

/// All tabloids of `shape`, ordered lexicographically by their block sequence.
pub fn enumerate_tabloids(shape: &Partition) -> Result<Vec<Tabloid>> {
    let d = shape.degree();
    if d > TABLOID_MAX_DEGREE {
        return Err(Error::LimitExceeded {
            what: "tabloid degree",
            limit: TABLOID_MAX_DEGREE,
            found: d,
        });
    }
    fn combinations(
        pool: &[u8],
        k: usize,
        start: usize,
        cur: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            combinations(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    fn rec(pool: Vec<u8>, parts: &[usize], prefix: &mut Vec<Vec<u8>>, out: &mut Vec<Tabloid>) {
        let Some((&size, rest)) = parts.split_first() else {
            out.push(Tabloid {
                blocks: prefix.clone(),
            });
            return;
        };
        let mut choices = Vec::new();
        combinations(&pool, size, 0, &mut Vec::new(), &mut choices);
        for c in choices {
            let remaining: Vec<u8> = pool.iter().copied().filter(|x| !c.contains(x)).collect();
            prefix.push(c);
            rec(remaining, rest, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(
        (0..d as u8).collect(),
        shape.parts(),
        &mut Vec::new(),
        &mut out,
    );
    Ok(out)
}
