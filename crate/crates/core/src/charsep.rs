//! One-dimensional characters and the orbits they single out.
//!
//! For `χ ∈ X_W` and `θ ∈ X_{S_λ}` an orbit `a` of shape `λ` is a
//! `(χ,θ)`-orbit when `β(σ) = χ(σ)·θ(υ⁻¹συ)` is identically 1 on the
//! stabilizer `W_A` of a representative `A = υI_λ`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::orbitposet::{Projection, StratifiedPoset};
use crate::permgroup::{OneDimCharacter, Permutation, PermutationGroup};
use crate::tabloid::{canonical_tabloid, Partition, Tabloid};

/// `S_λ`, the stabilizer of the canonical tabloid `I_λ`.
#[derive(Clone, Debug)]
pub struct YoungSubgroup {
    pub shape: Partition,
    pub group: Arc<PermutationGroup>,
}

pub fn young_subgroup(lambda: &Partition) -> Result<YoungSubgroup> {
    let d = lambda.degree();
    let mut gens = Vec::new();
    let mut start = 0;
    for &part in lambda.parts() {
        for i in start..start + part - 1 {
            let mut images: Vec<usize> = (1..=d).collect();
            images.swap(i, i + 1);
            gens.push(Permutation::from_images(&images)?);
        }
        start += part;
    }
    Ok(YoungSubgroup {
        shape: lambda.clone(),
        group: Arc::new(PermutationGroup::generate(d, &gens)?),
    })
}

/// `W_A`.
pub fn stabilizer(w: &PermutationGroup, a: &Tabloid) -> Result<PermutationGroup> {
    if a.degree() != w.degree() {
        return Err(Error::DegreeMismatch {
            expected: w.degree(),
            found: a.degree(),
        });
    }
    let members = w.elements().iter().filter(|s| &a.act(s) == a).cloned();
    Ok(PermutationGroup::from_closed_set(w.degree(), members))
}

/// Whether `A` is a `(χ,θ)`-tabloid.
pub fn beta_holds(chi: &OneDimCharacter, theta: &OneDimCharacter, a: &Tabloid) -> Result<bool> {
    let w = chi.group();
    let s_lambda = theta.group();
    if a.degree() != w.degree() || a.degree() != s_lambda.degree() {
        return Err(Error::DegreeMismatch {
            expected: w.degree(),
            found: a.degree(),
        });
    }
    let shape = a.shape();
    let frame = canonical_tabloid(&shape);
    if s_lambda.order() as u128 != young_order(&shape)
        || s_lambda.generators().iter().any(|s| frame.act(s) != frame)
    {
        return Err(Error::ShapeMismatch(format!(
            "character is not defined on the Young subgroup of ({shape})"
        )));
    }
    let upsilon = a.coset_rep();
    let upsilon_inv = upsilon.inverse();
    for sigma in stabilizer(w, a)?.elements() {
        let inner = upsilon_inv.compose(sigma).compose(&upsilon);
        assert!(
            s_lambda.contains(&inner),
            "coset representative of {a} conjugates {sigma} outside the Young subgroup"
        );
        if !(chi.value(sigma)? * theta.value(&inner)?).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn young_order(lambda: &Partition) -> u128 {
    lambda
        .parts()
        .iter()
        .map(|&p| (1..=p as u128).product::<u128>())
        .product()
}

fn check_character_group(poset: &StratifiedPoset, chi: &OneDimCharacter) -> Result<()> {
    if **chi.group() != **poset.group() {
        return Err(Error::Invalid(
            "character is not defined on the poset's group".into(),
        ));
    }
    Ok(())
}

/// `T_{λ;χ,θ}` as orbit indices of `poset`.
pub fn chi_theta_set(
    poset: &StratifiedPoset,
    lambda: &Partition,
    chi: &OneDimCharacter,
    theta: &OneDimCharacter,
) -> Result<Vec<usize>> {
    check_character_group(poset, chi)?;
    let range = poset
        .stratum(lambda)
        .ok_or_else(|| Error::ShapeMismatch(format!("({lambda}) is not in the domain")))?;
    let mut out = Vec::new();
    for i in range {
        let orbit = poset.orbit(i);
        let inside = beta_holds(chi, theta, &orbit.representative)?;
        if let Some(other) = orbit.members.iter().find(|m| **m != orbit.representative) {
            if beta_holds(chi, theta, other)? != inside {
                return Err(Error::Invalid(format!(
                    "membership of {} depends on the representative",
                    orbit.id
                )));
            }
        }
        if inside {
            out.push(i);
        }
    }
    Ok(out)
}

/// `n_{λ;χ,θ}`.
pub fn orbit_counts(
    poset: &StratifiedPoset,
    lambda: &Partition,
    chi: &OneDimCharacter,
    theta: &OneDimCharacter,
) -> Result<usize> {
    Ok(chi_theta_set(poset, lambda, chi, theta)?.len())
}

/// Whether `(χ,θ)` separates orbit `a` from orbit `b`.
pub fn separates(
    poset: &StratifiedPoset,
    chi: &OneDimCharacter,
    theta: &OneDimCharacter,
    a: usize,
    b: usize,
) -> Result<bool> {
    let lambda = poset.orbit(a).shape().clone();
    if poset.orbit(b).shape() != &lambda {
        return Err(Error::ShapeMismatch(format!(
            "{} and {} have different shapes",
            poset.id(a),
            poset.id(b)
        )));
    }
    let set = chi_theta_set(poset, &lambda, chi, theta)?;
    Ok(set.contains(&a) && !set.contains(&b))
}

/// `νχ: σ ↦ χ(ν⁻¹σν)`.
pub fn act_on_character(nu: &Permutation, chi: &OneDimCharacter) -> Result<OneDimCharacter> {
    let w = chi.group();
    if nu.degree() != w.degree() || !w.is_normalized_by(nu) {
        return Err(Error::NotAMember {
            perm: nu.to_string(),
            group: "the normalizer",
        });
    }
    let nu_inv = nu.inverse();
    let values: Vec<_> = w
        .elements()
        .iter()
        .map(|s| chi.value(&s.conjugate_by(&nu_inv)))
        .collect::<Result<_>>()?;
    OneDimCharacter::from_fn(w.clone(), |s| values[w.position(s).expect("member")])
}

/// Membership of every orbit of one stratum in every `T_{λ;χ,θ}`.
#[derive(Clone, Debug)]
pub struct StratumCharacters {
    pub shape: Partition,
    /// orbit indices of the stratum
    pub orbits: Vec<usize>,
    /// `X_W`, trivial character first
    pub chi: Vec<OneDimCharacter>,
    /// `X_{S_λ}`, trivial character first
    pub theta: Vec<OneDimCharacter>,
    /// `inside[i][j][k]`: orbit `orbits[k]` lies in `T_{λ;χ_i,θ_j}`
    inside: Vec<Vec<Vec<bool>>>,
}

impl StratumCharacters {
    pub fn new(poset: &StratifiedPoset, lambda: &Partition) -> Result<Self> {
        let orbits: Vec<usize> = poset
            .stratum(lambda)
            .ok_or_else(|| Error::ShapeMismatch(format!("({lambda}) is not in the domain")))?
            .collect();
        let chi = poset.group().one_dim_characters()?;
        let theta = young_subgroup(lambda)?.group.one_dim_characters()?;
        let mut inside = Vec::with_capacity(chi.len());
        for c in &chi {
            let mut row = Vec::with_capacity(theta.len());
            for t in &theta {
                let set = chi_theta_set(poset, lambda, c, t)?;
                row.push(orbits.iter().map(|o| set.contains(o)).collect());
            }
            inside.push(row);
        }
        Ok(Self {
            shape: lambda.clone(),
            orbits,
            chi,
            theta,
            inside,
        })
    }

    fn slot(&self, orbit: usize) -> Result<usize> {
        self.orbits.iter().position(|&o| o == orbit).ok_or_else(|| {
            Error::ShapeMismatch(format!("orbit {orbit} is not of shape ({})", self.shape))
        })
    }

    pub fn contains(&self, chi: usize, theta: usize, orbit: usize) -> Result<bool> {
        Ok(self.inside[chi][theta][self.slot(orbit)?])
    }

    pub fn count(&self, chi: usize, theta: usize) -> usize {
        self.inside[chi][theta].iter().filter(|&&b| b).count()
    }

    /// Whether `(χ_i, θ_j)` separates `a` from `b`.
    pub fn separates(&self, chi: usize, theta: usize, a: usize, b: usize) -> Result<bool> {
        Ok(self.contains(chi, theta, a)? && !self.contains(chi, theta, b)?)
    }

    /// Index of `νχ_i` in `chi`.
    pub fn act(&self, nu: &Permutation, chi: usize) -> Result<usize> {
        let moved = act_on_character(nu, &self.chi[chi])?;
        Ok(self
            .chi
            .iter()
            .position(|c| *c == moved)
            .expect("X_W is closed under N"))
    }

    pub fn to_json(&self, poset: &StratifiedPoset) -> Value {
        let describe = |c: &OneDimCharacter| -> Value {
            let g = c.group();
            let gens: Vec<Value> = g
                .generators()
                .iter()
                .map(|s| json!([s.to_string(), c.value(s).expect("member").to_string()]))
                .collect();
            Value::Array(gens)
        };
        let rows: Vec<Value> = self
            .orbits
            .iter()
            .enumerate()
            .map(|(k, &o)| {
                let cells: Vec<Value> = (0..self.chi.len())
                    .flat_map(|i| (0..self.theta.len()).map(move |j| (i, j)))
                    .map(|(i, j)| json!({ "chi": i, "theta": j, "inside": self.inside[i][j][k] }))
                    .collect();
                json!({ "orbit": poset.id(o).to_string(), "cells": cells })
            })
            .collect();
        json!({
            "shape": self.shape.to_string(),
            "chi": self.chi.iter().map(describe).collect::<Vec<_>>(),
            "theta": self.theta.iter().map(describe).collect::<Vec<_>>(),
            "membership": rows,
        })
    }
}

/// A separating `(χ,θ)` pair and, when found, the `ν` that reverses it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub chi: usize,
    pub theta: usize,
    pub witness: Option<Permutation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationRecord {
    pub orbit_a: String,
    pub orbit_b: String,
    /// whether `θ` ranged over all of `X_{S_λ}` or was fixed to the trivial character
    pub pairs: bool,
    pub same_structural_orbit: bool,
    /// pairs separating `a` from `b`
    pub a_from_b: Vec<Separation>,
    /// pairs separating `b` from `a`
    pub b_from_a: Vec<Separation>,
    pub indistinguishable: bool,
}

impl SeparationRecord {
    pub fn to_json(&self) -> Value {
        let list = |v: &[Separation]| -> Vec<Value> {
            v.iter()
                .map(|s| {
                    json!({
                        "chi": s.chi,
                        "theta": s.theta,
                        "witness": s.witness.as_ref().map(Permutation::to_string),
                    })
                })
                .collect()
        };
        json!({
            "orbit_a": self.orbit_a,
            "orbit_b": self.orbit_b,
            "mode": if self.pairs { "pairs" } else { "characters" },
            "same_structural_orbit": self.same_structural_orbit,
            "separating_a_from_b": list(&self.a_from_b),
            "separating_b_from_a": list(&self.b_from_a),
            "indistinguishable": self.indistinguishable,
        })
    }
}

/// Pairs separating `x` from `y`, each with a `ν` (one per coset of `W`)
/// such that `(νχ,θ)` separates `y` from `x`.
fn separations(
    table: &StratumCharacters,
    reps: &[Permutation],
    thetas: &[usize],
    x: usize,
    y: usize,
) -> Result<Vec<Separation>> {
    let mut out = Vec::new();
    for chi in 0..table.chi.len() {
        for &theta in thetas {
            if !table.separates(chi, theta, x, y)? {
                continue;
            }
            let mut witness = None;
            for nu in reps {
                if table.separates(table.act(nu, chi)?, theta, y, x)? {
                    witness = Some(nu.clone());
                    break;
                }
            }
            out.push(Separation {
                chi,
                theta,
                witness,
            });
        }
    }
    Ok(out)
}

/// Everything needed to decide separation questions inside one stratum.
#[derive(Clone, Debug)]
pub struct SeparationContext<'a> {
    structural: &'a Projection,
    table: StratumCharacters,
    /// one `ν` per coset of `W` in `N′`
    reps: Vec<Permutation>,
}

impl<'a> SeparationContext<'a> {
    /// `structural` projects the poset onto the orbits of the structural
    /// isomerism group; `np` is `N′`.
    pub fn new(
        structural: &'a Projection,
        np: &PermutationGroup,
        lambda: &Partition,
    ) -> Result<Self> {
        let poset = structural.source();
        let w = poset.group();
        w.require_subgroup_of(np)?;
        if let Some(nu) = np.generators().iter().find(|nu| !w.is_normalized_by(nu)) {
            return Err(Error::NotAMember {
                perm: nu.to_string(),
                group: "the normalizer",
            });
        }
        Ok(Self {
            structural,
            table: StratumCharacters::new(poset, lambda)?,
            reps: np.coset_representatives(w)?,
        })
    }

    pub fn table(&self) -> &StratumCharacters {
        &self.table
    }

    /// With `pairs` unset, `θ` is fixed to the trivial character.
    pub fn record(&self, a: usize, b: usize, pairs: bool) -> Result<SeparationRecord> {
        let poset = self.structural.source();
        if a >= poset.len() || b >= poset.len() {
            return Err(Error::UnknownOrbit(format!("index {}", a.max(b))));
        }
        let table = &self.table;
        let thetas: Vec<usize> = if pairs {
            (0..table.theta.len()).collect()
        } else {
            vec![0]
        };
        let a_from_b = separations(table, &self.reps, &thetas, a, b)?;
        let b_from_a = separations(table, &self.reps, &thetas, b, a)?;
        let same = self.structural.image(a) == self.structural.image(b);
        let reversible = a_from_b
            .iter()
            .chain(&b_from_a)
            .all(|s| s.witness.is_some());
        Ok(SeparationRecord {
            orbit_a: poset.id(a).to_string(),
            orbit_b: poset.id(b).to_string(),
            pairs,
            same_structural_orbit: same,
            a_from_b,
            b_from_a,
            indistinguishable: same && reversible,
        })
    }
}

fn decide(
    structural: &Projection,
    np: &PermutationGroup,
    a: usize,
    b: usize,
    pairs: bool,
) -> Result<SeparationRecord> {
    let poset = structural.source();
    if a >= poset.len() || b >= poset.len() {
        return Err(Error::UnknownOrbit(format!("index {}", a.max(b))));
    }
    let lambda = poset.orbit(a).shape().clone();
    if poset.orbit(b).shape() != &lambda {
        return Err(Error::ShapeMismatch(format!(
            "{} and {} have different shapes",
            poset.id(a),
            poset.id(b)
        )));
    }
    SeparationContext::new(structural, np, &lambda)?.record(a, b, pairs)
}

/// Indistinguishability via pairs of characters. `structural` projects the
/// poset onto the orbits of the structural isomerism group; `np` is `N′`.
pub fn indistinguishable_via_pairs(
    structural: &Projection,
    np: &PermutationGroup,
    a: usize,
    b: usize,
) -> Result<SeparationRecord> {
    decide(structural, np, a, b, true)
}

/// As [`indistinguishable_via_pairs`] with `θ` trivial.
pub fn indistinguishable_via_characters(
    structural: &Projection,
    np: &PermutationGroup,
    a: usize,
    b: usize,
) -> Result<SeparationRecord> {
    decide(structural, np, a, b, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::induced_automorphism;
    use crate::orbitposet::{build_poset, fuse, project};
    use crate::permgroup::RootOfUnity;
    use crate::tabloid::{enumerate_tabloids, partitions_of};

    fn perm(s: &str, d: usize) -> Permutation {
        Permutation::parse_cycles(s, d).unwrap()
    }

    fn grp(d: usize, gens: &[&str]) -> Arc<PermutationGroup> {
        let gens: Vec<Permutation> = gens.iter().map(|s| perm(s, d)).collect();
        Arc::new(PermutationGroup::generate(d, &gens).unwrap())
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn klein() -> Arc<PermutationGroup> {
        grp(4, &["(12)(34)", "(13)(24)"])
    }

    fn ethene() -> StratifiedPoset {
        build_poset(klein(), &partitions_of(4).unwrap()).unwrap()
    }

    #[test]
    fn young_subgroups() {
        let y = young_subgroup(&part("2,2")).unwrap();
        assert_eq!(y.group.order(), 4);
        assert!(y.group.contains(&perm("(12)", 4)) && y.group.contains(&perm("(34)", 4)));
        assert_eq!(
            young_subgroup(&Partition::singletons(5))
                .unwrap()
                .group
                .order(),
            1
        );
        let y = young_subgroup(&part("3,1")).unwrap();
        let oracle: Vec<Permutation> = PermutationGroup::symmetric(4)
            .elements()
            .iter()
            .filter(|s| canonical_tabloid(&part("3,1")).act(s) == canonical_tabloid(&part("3,1")))
            .cloned()
            .collect();
        assert_eq!(y.group.elements(), oracle.as_slice());
        assert_eq!(y.group.order(), 6);
    }

    #[test]
    fn young_characters_are_signs_per_block() {
        let y = young_subgroup(&part("3,2,1")).unwrap();
        let xs = y.group.one_dim_characters().unwrap();
        // one sign per block of size at least two
        assert_eq!(xs.len(), 4);
        for x in &xs {
            for s in y.group.elements() {
                let v = x.value(s).unwrap();
                assert!(v.is_one() || v == RootOfUnity::new(1, 2));
            }
        }
    }

    #[test]
    fn stabilizers() {
        let w = klein();
        let a = Tabloid::parse("1,2|3,4").unwrap();
        let s = stabilizer(&w, &a).unwrap();
        assert_eq!(
            s.elements(),
            &[Permutation::identity(4), perm("(12)(34)", 4)]
        );
        for t in enumerate_tabloids(&Partition::singletons(4)).unwrap() {
            assert_eq!(stabilizer(&w, &t).unwrap().order(), 1);
        }
        let trivial = PermutationGroup::trivial(4);
        assert_eq!(stabilizer(&trivial, &a).unwrap().order(), 1);
        for lambda in partitions_of(4).unwrap() {
            for t in enumerate_tabloids(&lambda).unwrap() {
                let orbit: std::collections::BTreeSet<Tabloid> =
                    w.elements().iter().map(|s| t.act(s)).collect();
                assert_eq!(stabilizer(&w, &t).unwrap().order() * orbit.len(), 4);
            }
        }
    }

    #[test]
    fn beta_examples() {
        let w = klein();
        let a = Tabloid::parse("1,2|3,4").unwrap();
        let chis = w.one_dim_characters().unwrap();
        let y = young_subgroup(&part("2,2")).unwrap();
        let thetas = y.group.one_dim_characters().unwrap();
        assert!(beta_holds(&chis[0], &thetas[0], &a).unwrap());
        let flip = chis
            .iter()
            .find(|c| !c.value(&perm("(12)(34)", 4)).unwrap().is_one())
            .unwrap();
        assert!(!beta_holds(flip, &thetas[0], &a).unwrap());
        let free = Tabloid::parse("1|2|3|4").unwrap();
        let y1 = young_subgroup(&Partition::singletons(4)).unwrap();
        let theta1 = &y1.group.one_dim_characters().unwrap()[0];
        for c in &chis {
            assert!(beta_holds(c, theta1, &free).unwrap());
        }
        assert!(beta_holds(&chis[0], theta1, &a).is_err());
    }

    #[test]
    fn beta_is_representative_independent() {
        let w = klein();
        let chis = w.one_dim_characters().unwrap();
        for lambda in partitions_of(4).unwrap() {
            let thetas = young_subgroup(&lambda)
                .unwrap()
                .group
                .one_dim_characters()
                .unwrap();
            for t in enumerate_tabloids(&lambda).unwrap() {
                for c in &chis {
                    for th in &thetas {
                        let v = beta_holds(c, th, &t).unwrap();
                        for s in w.elements() {
                            assert_eq!(beta_holds(c, th, &t.act(s)).unwrap(), v);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ethene_chi_theta_sets() {
        let p = ethene();
        let chis = p.group().one_dim_characters().unwrap();
        let l22 = part("2,2");
        let thetas = young_subgroup(&l22)
            .unwrap()
            .group
            .one_dim_characters()
            .unwrap();
        assert_eq!(
            chi_theta_set(&p, &l22, &chis[0], &thetas[0]).unwrap().len(),
            3
        );
        for c in &chis[1..] {
            assert_eq!(orbit_counts(&p, &l22, c, &thetas[0]).unwrap(), 1);
        }
        let l1 = Partition::singletons(4);
        let th1 = young_subgroup(&l1)
            .unwrap()
            .group
            .one_dim_characters()
            .unwrap();
        for c in &chis {
            assert_eq!(orbit_counts(&p, &l1, c, &th1[0]).unwrap(), 6);
        }
        assert!(chi_theta_set(
            &build_poset(klein(), std::slice::from_ref(&l22)).unwrap(),
            &l1,
            &chis[0],
            &th1[0]
        )
        .is_err());
    }

    #[test]
    fn character_action() {
        let w = klein();
        let chis = w.one_dim_characters().unwrap();
        let r = perm("(123)", 4);
        let moved: Vec<usize> = chis
            .iter()
            .map(|c| {
                let m = act_on_character(&r, c).unwrap();
                chis.iter().position(|x| *x == m).unwrap()
            })
            .collect();
        assert_eq!(moved[0], 0);
        let mut nontrivial = moved[1..].to_vec();
        nontrivial.sort_unstable();
        assert_eq!(nontrivial, vec![1, 2, 3]);
        assert!(moved[1..].iter().enumerate().all(|(i, &m)| m != i + 1));
        for s in w.elements() {
            for c in &chis {
                assert_eq!(&act_on_character(s, c).unwrap(), c);
            }
        }
        let n = PermutationGroup::symmetric(4);
        for a in n.elements().iter().step_by(3) {
            for b in n.elements().iter().step_by(5) {
                for c in &chis {
                    let lhs = act_on_character(&a.compose(b), c).unwrap();
                    let rhs = act_on_character(a, &act_on_character(b, c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        let c3 = grp(4, &["(123)"]);
        let x = &c3.one_dim_characters().unwrap()[1];
        assert!(act_on_character(&perm("(14)", 4), x).is_err());
    }

    #[test]
    fn equivariance_and_count_invariance_for_ethene() {
        let p = ethene();
        let w = p.group().clone();
        let chis = w.one_dim_characters().unwrap();
        let n = PermutationGroup::symmetric(4);
        for nu in n.elements() {
            let hat = induced_automorphism(nu, &p).unwrap();
            for lambda in partitions_of(4).unwrap() {
                let thetas = young_subgroup(&lambda)
                    .unwrap()
                    .group
                    .one_dim_characters()
                    .unwrap();
                for c in &chis {
                    let nc = act_on_character(nu, c).unwrap();
                    for th in &thetas {
                        let mut mapped: Vec<usize> = chi_theta_set(&p, &lambda, c, th)
                            .unwrap()
                            .into_iter()
                            .map(|a| hat.image(a))
                            .collect();
                        mapped.sort_unstable();
                        assert_eq!(mapped, chi_theta_set(&p, &lambda, &nc, th).unwrap());
                        assert_eq!(
                            orbit_counts(&p, &lambda, c, th).unwrap(),
                            orbit_counts(&p, &lambda, &nc, th).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn separation_basics() {
        let p = ethene();
        let l22 = part("2,2");
        let table = StratumCharacters::new(&p, &l22).unwrap();
        let r: Vec<usize> = p.stratum(&l22).unwrap().collect();
        for i in 0..table.chi.len() {
            for j in 0..table.theta.len() {
                for &a in &r {
                    assert!(!table.separates(i, j, a, a).unwrap());
                    for &b in &r {
                        assert!(
                            !(table.separates(i, j, a, b).unwrap()
                                && table.separates(i, j, b, a).unwrap())
                        );
                    }
                }
            }
        }
        assert!(!table.separates(0, 0, r[0], r[1]).unwrap());
        let chis = p.group().one_dim_characters().unwrap();
        let th = &table.theta[0];
        for (i, c) in chis.iter().enumerate() {
            assert_eq!(
                separates(&p, c, th, r[0], r[1]).unwrap(),
                table.separates(i, 0, r[0], r[1]).unwrap()
            );
        }
        assert!(separates(&p, &chis[0], th, r[0], 0).is_err());
        let some = (1..4).any(|i| table.separates(i, 0, r[0], r[1]).unwrap());
        assert!(some);
        assert!(table.contains(0, 0, 0).is_err());
    }

    #[test]
    fn ethene_pairs_with_structural_fusion() {
        let p = ethene();
        let w = p.group().clone();
        let over = grp(4, &["(12)(34)", "(13)(24)", "(13)"]);
        let structural = fuse(w.clone(), over, p.domain()).unwrap();
        let n = PermutationGroup::symmetric(4);
        for f in structural.fibers() {
            if f.len() == 2 {
                let r = indistinguishable_via_pairs(&structural, &n, f[0], f[1]).unwrap();
                assert!(r.indistinguishable, "{r:?}");
                assert!(
                    indistinguishable_via_characters(&structural, &n, f[0], f[1])
                        .unwrap()
                        .indistinguishable
                );
            }
        }
        let l22 = p.stratum(&part("2,2")).unwrap();
        let lone = l22
            .clone()
            .find(|&i| structural.fiber_of(i).len() == 1)
            .unwrap();
        let other = l22.clone().find(|&i| i != lone).unwrap();
        let r = indistinguishable_via_pairs(&structural, &n, lone, other).unwrap();
        assert!(!r.same_structural_orbit && !r.indistinguishable);
        let js = r.to_json();
        assert_eq!(js["mode"], "pairs");
    }

    #[test]
    fn chiral_pairs_are_indistinguishable() {
        let g = grp(6, &["(123)(456)", "(14)(26)(35)"]);
        let gp = grp(6, &["(123)(456)", "(14)(26)(35)", "(14)(25)(36)"]);
        let d: Vec<Partition> = ["4,2", "4,1,1", "3,3"].iter().map(|s| part(s)).collect();
        let proj = project(g.clone(), gp.clone(), &d).unwrap();
        let np = g.intersect_normalizers(&gp, false).unwrap();
        for (a, b) in proj.chiral_pairs() {
            assert!(
                indistinguishable_via_pairs(&proj, &np, a, b)
                    .unwrap()
                    .indistinguishable
            );
            assert!(
                indistinguishable_via_characters(&proj, &np, a, b)
                    .unwrap()
                    .indistinguishable
            );
        }
        let wrong = PermutationGroup::symmetric(6);
        assert!(indistinguishable_via_pairs(&proj, &wrong, 0, 1).is_err());
    }
}
