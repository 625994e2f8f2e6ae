//! Molecule specifications (`G ≤ G′ ≤ G″` with a default set of shapes),
//! the built-in molecules, and the aggregate analysis run on a spec.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use serde_json::Value;

use crate::autgroup::{
    aut0, aut0_equivariant, chiral_involution_or_identity, hidden_subgroup, order_value,
    AutOptions, HiddenSymmetries, PosetAutGroup, PosetAutomorphism,
};
use crate::charsep::SeparationContext;
use crate::error::{Error, Result};
use crate::orbitposet::{build_poset, Projection, StratifiedPoset};
use crate::permgroup::{Permutation, PermutationGroup};
use crate::tabloid::{parse_partition_list, partitions_of, Partition};

pub const BUILTINS: [&str; 3] = ["ethene", "benzene", "cyclopropane"];

#[derive(Clone)]
pub struct MoleculeSpec {
    pub name: String,
    pub degree: usize,
    /// substitution isomerism
    pub g: Arc<PermutationGroup>,
    /// stereoisomerism
    pub gp: Arc<PermutationGroup>,
    /// structural isomerism
    pub gpp: Arc<PermutationGroup>,
    pub default_domain: Option<Vec<Partition>>,
    /// caveats carried into every report
    pub notes: Vec<String>,
}

impl fmt::Debug for MoleculeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MoleculeSpec")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field(
                "orders",
                &[self.g.order(), self.gp.order(), self.gpp.order()],
            )
            .finish()
    }
}

fn group(d: usize, gens: &[&str]) -> Result<Arc<PermutationGroup>> {
    let gens = gens
        .iter()
        .map(|s| Permutation::parse_cycles(s, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(PermutationGroup::generate(d, &gens)?))
}

fn shapes(list: &str) -> Vec<Partition> {
    parse_partition_list(list).expect("valid built-in shapes")
}

/// A built-in molecule by name.
pub fn builtin(name: &str) -> Result<MoleculeSpec> {
    let spec = match name.trim().to_ascii_lowercase().as_str() {
        "ethene" => {
            let g = group(4, &["(12)(34)", "(13)(24)"])?;
            MoleculeSpec {
                name: "ethene".into(),
                degree: 4,
                gp: g.clone(),
                gpp: group(4, &["(12)(34)", "(13)(24)", "(13)"])?,
                g,
                default_domain: None,
                notes: Vec::new(),
            }
        }
        "benzene" => {
            let g = group(6, &["(123456)", "(16)(25)(34)"])?;
            MoleculeSpec {
                name: "benzene".into(),
                degree: 6,
                gp: g.clone(),
                gpp: g.clone(),
                g,
                default_domain: Some(shapes("4,2;3,3")),
                notes: vec![
                    "structural isomerism group taken equal to the stereoisomerism group; structural verdicts depend on this"
                        .into(),
                ],
            }
        }
        "cyclopropane" => MoleculeSpec {
            name: "cyclopropane".into(),
            degree: 6,
            g: group(6, &["(123)(456)", "(14)(26)(35)"])?,
            gp: group(6, &["(123)(456)", "(14)(26)(35)", "(14)(25)(36)"])?,
            gpp: group(6, &["(123)(456)", "(14)(26)(35)", "(14)(25)(36)", "(14)"])?,
            default_domain: Some(shapes("6;5,1;4,2;4,1,1;3,3")),
            notes: Vec::new(),
        },
        _ => return Err(Error::UnknownMolecule(name.to_string())),
    };
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// `|G|`, `|G′|`, `|G″|`
    pub orders: [usize; 3],
    pub failures: Vec<String>,
}

pub fn validate(spec: &MoleculeSpec) -> ValidationReport {
    let mut failures = Vec::new();
    for (label, g) in [("G", &spec.g), ("Gp", &spec.gp), ("Gpp", &spec.gpp)] {
        if g.degree() != spec.degree {
            failures.push(format!(
                "{label} has degree {} instead of {}",
                g.degree(),
                spec.degree
            ));
        }
    }
    if failures.is_empty() {
        if !spec.g.is_subgroup_of(&spec.gp) {
            failures.push("G is not contained in Gp".into());
        } else {
            let index = spec.gp.order() / spec.g.order();
            if index > 2 {
                failures.push(format!("index of G in Gp is {index}, expected 1 or 2"));
            }
        }
        if !spec.gp.is_subgroup_of(&spec.gpp) {
            failures.push("Gp is not contained in Gpp".into());
        }
    }
    if let Some(d) = &spec.default_domain {
        if let Some(bad) = d.iter().find(|l| l.degree() != spec.degree) {
            failures.push(format!(
                "shape ({bad}) is not a partition of {}",
                spec.degree
            ));
        }
    }
    ValidationReport {
        valid: failures.is_empty(),
        orders: [spec.g.order(), spec.gp.order(), spec.gpp.order()],
        failures,
    }
}

/// Parses the line-oriented `key=value` molecule format.
pub fn parse_config(text: &str) -> Result<MoleculeSpec> {
    let mut name = None;
    let mut degree = None;
    let mut gens: [Option<String>; 3] = [None, None, None];
    let mut domain = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
        let value = value.trim().to_string();
        match key.trim() {
            "name" => name = Some(value),
            "degree" => {
                degree = Some(value.parse::<usize>().map_err(|_| {
                    Error::Parse(format!("line {}: bad degree {value:?}", lineno + 1))
                })?)
            }
            "G" => gens[0] = Some(value),
            "Gp" => gens[1] = Some(value),
            "Gpp" => gens[2] = Some(value),
            "D" => domain = Some(value),
            other => {
                return Err(Error::Parse(format!(
                    "line {}: unknown key {other:?}",
                    lineno + 1
                )))
            }
        }
    }
    let name = name.ok_or_else(|| Error::Parse("missing name".into()))?;
    let d = degree.ok_or_else(|| Error::Parse("missing degree".into()))?;
    if d == 0 || d > u8::MAX as usize {
        return Err(Error::Parse(format!("degree {d} out of range")));
    }
    let build = |list: &str| -> Result<Arc<PermutationGroup>> {
        let perms = list
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| Permutation::parse_cycles(s, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(PermutationGroup::generate(d, &perms)?))
    };
    let g_text = gens[0]
        .clone()
        .ok_or_else(|| Error::Parse("missing G".into()))?;
    let g = build(&g_text)?;
    // generators of the smaller groups are implied
    let gp = match &gens[1] {
        Some(t) => build(&format!("{g_text};{t}"))?,
        None => g.clone(),
    };
    let gpp = match &gens[2] {
        Some(t) => build(&format!(
            "{g_text};{};{t}",
            gens[1].clone().unwrap_or_default()
        ))?,
        None => gp.clone(),
    };
    let default_domain = domain.map(|s| parse_partition_list(&s)).transpose()?;
    Ok(MoleculeSpec {
        name,
        degree: d,
        g,
        gp,
        gpp,
        default_domain,
        notes: Vec::new(),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub aut: AutOptions,
    /// lifts the degree bound on normalizer searches
    pub allow_large: bool,
}

impl AnalysisOptions {
    pub fn with_override(limit_override: bool) -> Self {
        Self {
            aut: AutOptions {
                limit_override,
                ..AutOptions::default()
            },
            allow_large: limit_override,
        }
    }
}

/// A molecule with a fixed set of shapes and everything derived from it.
pub struct Analysis {
    pub spec: MoleculeSpec,
    pub opts: AnalysisOptions,
    chiral: Projection,
    structural: Projection,
    t: PosetAutomorphism,
    normalizer: OnceLock<PermutationGroup>,
    np: OnceLock<PermutationGroup>,
    aut0: OnceLock<PosetAutGroup>,
    aut0_prime: OnceLock<PosetAutGroup>,
    hidden: OnceLock<HiddenSymmetries>,
}

fn cached<T>(cell: &OnceLock<T>, f: impl FnOnce() -> Result<T>) -> Result<&T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = f()?;
    Ok(cell.get_or_init(|| v))
}

/// `T_{D;G}` and its projections for `spec`; `domain` defaults to the
/// spec's own shapes, else all partitions of the degree.
impl Analysis {
    pub fn new(
        spec: MoleculeSpec,
        domain: Option<&[Partition]>,
        opts: AnalysisOptions,
    ) -> Result<Self> {
        let report = validate(&spec);
        if !report.valid {
            return Err(Error::Invalid(report.failures.join("; ")));
        }
        let domain: Vec<Partition> = match (domain, &spec.default_domain) {
            (Some(d), _) => d.to_vec(),
            (None, Some(d)) => d.clone(),
            (None, None) => partitions_of(spec.degree)?,
        };
        let source = build_poset(spec.g.clone(), &domain)?;
        let chiral_target = if spec.gp == spec.g {
            source.clone()
        } else {
            build_poset(spec.gp.clone(), &domain)?
        };
        let structural_target = if spec.gpp == spec.g {
            source.clone()
        } else if spec.gpp == spec.gp {
            chiral_target.clone()
        } else {
            build_poset(spec.gpp.clone(), &domain)?
        };
        let chiral = Projection::between(source.clone(), chiral_target)?;
        let structural = Projection::between(source, structural_target)?;
        let t = chiral_involution_or_identity(&chiral)?;
        Ok(Self {
            spec,
            opts,
            chiral,
            structural,
            t,
            normalizer: OnceLock::new(),
            np: OnceLock::new(),
            aut0: OnceLock::new(),
            aut0_prime: OnceLock::new(),
            hidden: OnceLock::new(),
        })
    }

    pub fn for_builtin(name: &str) -> Result<Self> {
        Self::new(builtin(name)?, None, AnalysisOptions::default())
    }

    pub fn poset(&self) -> &StratifiedPoset {
        self.chiral.source()
    }

    /// `T_{D;G} → T_{D;G′}`.
    pub fn chiral(&self) -> &Projection {
        &self.chiral
    }

    /// `T_{D;G} → T_{D;G″}`.
    pub fn structural(&self) -> &Projection {
        &self.structural
    }

    /// `τ̂`, or the identity when `G = G′`.
    pub fn chiral_involution(&self) -> &PosetAutomorphism {
        &self.t
    }

    /// `N`, the normalizer of `G` in `S_d`.
    pub fn normalizer(&self) -> Result<&PermutationGroup> {
        cached(&self.normalizer, || {
            self.spec.g.normalizer(self.opts.allow_large)
        })
    }

    /// `N′ = N(G) ∩ N(G′)`.
    pub fn normalizer_prime(&self) -> Result<&PermutationGroup> {
        cached(&self.np, || {
            let n = self.normalizer()?;
            let members = n
                .elements()
                .iter()
                .filter(|nu| self.spec.gp.is_normalized_by(nu))
                .cloned();
            Ok(PermutationGroup::from_closed_set(self.spec.degree, members))
        })
    }

    pub fn aut0(&self) -> Result<&PosetAutGroup> {
        cached(&self.aut0, || aut0(self.poset(), &self.opts.aut))
    }

    pub fn aut0_prime(&self) -> Result<&PosetAutGroup> {
        cached(&self.aut0_prime, || {
            if self.t.is_identity() {
                return self.aut0().cloned();
            }
            aut0_equivariant(self.poset(), &self.t, &self.opts.aut)
        })
    }

    pub fn hidden(&self) -> Result<&HiddenSymmetries> {
        cached(&self.hidden, || {
            hidden_subgroup(
                self.poset(),
                self.normalizer_prime()?,
                &self.spec.g,
                &self.opts.aut,
            )
        })
    }

    /// Resolves an orbit id such as `(4,2)#1`.
    pub fn orbit(&self, id: &str) -> Result<usize> {
        self.poset().find_str(id)
    }

    /// Identical as structural isomers and related by an element of `Aut₀′`.
    pub fn substitution_verdict(&self, a: usize, b: usize) -> Result<SubstitutionVerdict> {
        let p = self.poset();
        if a >= p.len() || b >= p.len() {
            return Err(Error::UnknownOrbit(format!("index {}", a.max(b))));
        }
        if p.stratum_of(a) != p.stratum_of(b) {
            return Err(Error::ShapeMismatch(format!(
                "{} and {} have different shapes",
                p.id(a),
                p.id(b)
            )));
        }
        let same = self.structural.image(a) == self.structural.image(b);
        let witness = if same {
            self.aut0_prime()?.element_mapping(a, b)
        } else {
            None
        };
        Ok(SubstitutionVerdict {
            indistinguishable: witness.is_some(),
            same_structural_orbit: same,
            witness,
        })
    }

    /// Classes of the substitution verdict inside the stratum of `lambda`.
    pub fn substitution_classes(&self, lambda: &Partition) -> Result<Vec<Vec<usize>>> {
        let range = self
            .poset()
            .stratum(lambda)
            .ok_or_else(|| Error::ShapeMismatch(format!("({lambda}) is not in the domain")))?;
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in range {
            match classes.iter_mut().find(|c| {
                self.substitution_verdict(c[0], a)
                    .map(|v| v.indistinguishable)
                    .unwrap_or(false)
            }) {
                Some(c) => c.push(a),
                None => classes.push(vec![a]),
            }
        }
        Ok(classes)
    }

    /// All three verdicts for every pair inside the stratum of `lambda`.
    pub fn stratum_verdicts(&self, lambda: &Partition) -> Result<Vec<PairVerdict>> {
        let range: Vec<usize> = self
            .poset()
            .stratum(lambda)
            .ok_or_else(|| Error::ShapeMismatch(format!("({lambda}) is not in the domain")))?
            .collect();
        let ctx = SeparationContext::new(&self.structural, self.normalizer_prime()?, lambda)?;
        let mut out = Vec::new();
        for (i, &a) in range.iter().enumerate() {
            for &b in &range[i + 1..] {
                out.push(self.pair_verdict_with(&ctx, a, b)?);
            }
        }
        Ok(out)
    }

    pub fn pair_verdict(&self, a: usize, b: usize) -> Result<PairVerdict> {
        let p = self.poset();
        if a >= p.len() || b >= p.len() {
            return Err(Error::UnknownOrbit(format!("index {}", a.max(b))));
        }
        let lambda = p.orbit(a).shape().clone();
        if p.orbit(b).shape() != &lambda {
            return Err(Error::ShapeMismatch(format!(
                "{} and {} have different shapes",
                p.id(a),
                p.id(b)
            )));
        }
        let ctx = SeparationContext::new(&self.structural, self.normalizer_prime()?, &lambda)?;
        self.pair_verdict_with(&ctx, a, b)
    }

    fn pair_verdict_with(
        &self,
        ctx: &SeparationContext<'_>,
        a: usize,
        b: usize,
    ) -> Result<PairVerdict> {
        let p = self.poset();
        Ok(PairVerdict {
            a: p.id(a).to_string(),
            b: p.id(b).to_string(),
            substitution: self.substitution_verdict(a, b)?.indistinguishable,
            pairs_of_characters: ctx.record(a, b, true)?.indistinguishable,
            characters: ctx.record(a, b, false)?.indistinguishable,
        })
    }

    pub fn report(&self) -> Result<AnalysisReport> {
        let p = self.poset();
        let ids = |v: &[usize]| -> Vec<String> { v.iter().map(|&i| p.id(i).to_string()).collect() };
        let aut0 = self.aut0()?;
        let aut0p = self.aut0_prime()?;
        let np = self.normalizer_prime()?;
        let full_layer = p
            .domain()
            .contains(&Partition::singletons(self.spec.degree));
        let mut strata = Vec::new();
        for (lambda, range) in p.domain().iter().zip(p.strata()) {
            let fusion: Vec<Vec<String>> = self
                .structural
                .fibers()
                .iter()
                .filter(|f| !f.is_empty() && range.contains(&f[0]))
                .map(|f| ids(f))
                .collect();
            strata.push(StratumReport {
                shape: lambda.to_string(),
                orbits: ids(&range.clone().collect::<Vec<_>>()),
                structural_fusion: fusion,
                substitution_classes: self
                    .substitution_classes(lambda)?
                    .iter()
                    .map(|c| ids(c))
                    .collect(),
                verdicts: self.stratum_verdicts(lambda)?,
            });
        }
        let chiral_shapes: Vec<String> = {
            let mut v: Vec<String> = self
                .chiral
                .chiral_pairs()
                .iter()
                .map(|&(a, _)| p.orbit(a).shape().to_string())
                .collect();
            v.dedup();
            v
        };
        Ok(AnalysisReport {
            molecule: self.spec.name.clone(),
            degree: self.spec.degree,
            group_orders: [
                self.spec.g.order(),
                self.spec.gp.order(),
                self.spec.gpp.order(),
            ],
            domain: p.domain().iter().map(ToString::to_string).collect(),
            stratum_sizes: p.stratum_sizes(),
            hasse_edge_count: p.hasse_edges().len(),
            aut0: GroupSummary::of(aut0, p)?,
            aut0_prime: GroupSummary::of(aut0p, p)?,
            hidden_order: self.hidden()?.group.order(),
            normalizer_quotient_order: np.order() / self.spec.g.order(),
            hidden_kernel_is_g: full_layer,
            chiral_pairs: self
                .chiral
                .chiral_pairs()
                .iter()
                .map(|&(a, b)| [p.id(a).to_string(), p.id(b).to_string()])
                .collect(),
            chiral_involution: self.t.cycle_string(p),
            chiral_shapes,
            strata,
            notes: self.spec.notes.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionVerdict {
    pub indistinguishable: bool,
    pub same_structural_orbit: bool,
    /// an element of `Aut₀′` carrying the first orbit to the second
    pub witness: Option<PosetAutomorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub a: String,
    pub b: String,
    /// indistinguishable via substitution reactions
    pub substitution: bool,
    pub pairs_of_characters: bool,
    pub characters: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    #[serde(serialize_with = "ser_order")]
    pub order: u128,
    pub generators: Vec<String>,
    pub abelian_invariants: Option<Vec<usize>>,
    /// order of the induced action on each stratum
    #[serde(serialize_with = "ser_orders")]
    pub stratum_action_orders: Vec<u128>,
}

fn ser_order<S: serde::Serializer>(order: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    order_value(*order).serialize(s)
}

fn ser_orders<S: serde::Serializer>(orders: &[u128], s: S) -> std::result::Result<S::Ok, S::Error> {
    orders
        .iter()
        .map(|&o| order_value(o))
        .collect::<Vec<_>>()
        .serialize(s)
}

impl GroupSummary {
    pub fn of(g: &PosetAutGroup, poset: &StratifiedPoset) -> Result<Self> {
        let s = g.structure(poset)?;
        Ok(Self {
            order: g.order(),
            generators: g
                .generators()
                .iter()
                .map(|a| a.cycle_string(poset))
                .collect(),
            abelian_invariants: s.abelian_invariants,
            stratum_action_orders: s.strata.iter().map(|a| a.order).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub shape: String,
    pub orbits: Vec<String>,
    pub structural_fusion: Vec<Vec<String>>,
    pub substitution_classes: Vec<Vec<String>>,
    pub verdicts: Vec<PairVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub molecule: String,
    pub degree: usize,
    pub group_orders: [usize; 3],
    pub domain: Vec<String>,
    pub stratum_sizes: Vec<usize>,
    pub hasse_edge_count: usize,
    pub aut0: GroupSummary,
    pub aut0_prime: GroupSummary,
    #[serde(serialize_with = "ser_order")]
    pub hidden_order: u128,
    /// `|N′ : G|`
    pub normalizer_quotient_order: usize,
    /// whether the hidden order is guaranteed to equal `|N′ : G|`
    pub hidden_kernel_is_g: bool,
    pub chiral_pairs: Vec<[String; 2]>,
    pub chiral_involution: String,
    pub chiral_shapes: Vec<String>,
    pub strata: Vec<StratumReport>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    /// JSON with keys in sorted order.
    pub fn to_json(&self) -> Result<Value> {
        serde_json::to_value(self).map_err(|e| Error::Invalid(e.to_string()))
    }
}

pub fn substitution_verdict(
    spec: &MoleculeSpec,
    domain: &[Partition],
    a: &str,
    b: &str,
) -> Result<SubstitutionVerdict> {
    let analysis = Analysis::new(spec.clone(), Some(domain), AnalysisOptions::default())?;
    analysis.substitution_verdict(analysis.orbit(a)?, analysis.orbit(b)?)
}

pub fn full_report(spec: &MoleculeSpec, domain: Option<&[Partition]>) -> Result<AnalysisReport> {
    Analysis::new(spec.clone(), domain, AnalysisOptions::default())?.report()
}
