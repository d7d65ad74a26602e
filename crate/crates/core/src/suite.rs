//! Report builders shared by the command-line driver and the acceptance runs.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::catalog;
use crate::division;
use crate::error::Result;
use crate::extension::{self, AxiomViolation, ExtensionGroup, GeneratedCoreFinding, HomCheck};
use crate::perm::{self, PermGroup};
use crate::quasigroup::{self, RightQuasigroup};
use crate::report::ReportLine;
use crate::sphere::{self, SphereTolerances};
use crate::transversal::{self, CosetSpace, Subgroup, Transversal};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1;
/// Transversals drawn per (group, subgroup) pair when enumeration is capped.
pub const DEFAULT_TRANSVERSAL_SAMPLES: usize = 200;
pub const DEFAULT_SUITE_SAMPLES: usize = 10_000;

/// Every transversal of `space` if there are at most `cap`, otherwise
/// `samples` seeded draws with duplicates removed. The flag is `true` when sampled.
pub fn transversals_of(
    space: &CosetSpace,
    cap: u128,
    samples: usize,
    seed: u64,
) -> (Vec<Transversal<'_>>, bool) {
    match space.enumerate_transversals(false, cap) {
        Ok(iter) => (iter.collect(), false),
        Err(_) => {
            let mut seen = BTreeSet::new();
            let picked = space
                .sample_transversals(samples, seed)
                .into_iter()
                .filter(|t| seen.insert(t.reps().to_vec()))
                .collect();
            (picked, true)
        }
    }
}

/// Per-transversal checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransversalChecks {
    /// The induced table passes validation.
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub torsion_order: usize,
    /// `φ(H_S)` and the torsion of the induced table agree as sets.
    pub torsion_independent: bool,
    pub is_group: bool,
    /// Trivial torsion exactly when the table is a group.
    pub torsion_trivial_iff_group: bool,
    pub hom: Option<HomCheck>,
    /// Report-only.
    pub generated_core: Option<GeneratedCoreFinding>,
}

impl TransversalChecks {
    fn invalid(error: String) -> Self {
        TransversalChecks {
            valid: false,
            error: Some(error),
            torsion_order: 0,
            torsion_independent: false,
            is_group: false,
            torsion_trivial_iff_group: false,
            hom: None,
            generated_core: None,
        }
    }

    pub fn pass(&self) -> bool {
        self.valid
            && self.torsion_independent
            && self.torsion_trivial_iff_group
            && self.hom.as_ref().is_some_and(HomCheck::all)
    }
}

pub fn check_transversal(t: &Transversal<'_>, closure_cap: usize) -> Result<(Option<RightQuasigroup>, TransversalChecks)> {
    let q = match RightQuasigroup::with_labels(t.rep_labels(), &t.induced_table(), 0) {
        Ok(q) => q,
        Err(e) => return Ok((None, TransversalChecks::invalid(e.to_string()))),
    };
    let torsion = extension::torsion_group_with_cap(&q, closure_cap)?;
    let via_phi = t.torsion_via_phi()?;
    let is_group = q.is_group();
    let checks = TransversalChecks {
        valid: true,
        error: None,
        torsion_order: torsion.order(),
        torsion_independent: perm::equal_groups(&torsion, &via_phi),
        is_group,
        torsion_trivial_iff_group: torsion.is_trivial() == is_group,
        hom: Some(extension::check_universal_hom(t)),
        generated_core: Some(extension::generated_core_finding(t)?),
    };
    Ok((Some(q), checks))
}

/// Isomorphism classes in order of first appearance.
#[derive(Default)]
pub struct Classifier {
    buckets: BTreeMap<Vec<quasigroup::ElementSignature>, Vec<(usize, RightQuasigroup)>>,
    pub sizes: Vec<usize>,
}

impl Classifier {
    /// Index of the class of `q`, opening a new one if needed.
    pub fn classify(&mut self, q: &RightQuasigroup) -> usize {
        let bucket = self.buckets.entry(quasigroup::invariant(q)).or_default();
        if let Some((i, _)) = bucket.iter().find(|(_, c)| quasigroup::isomorphic(c, q).is_some()) {
            self.sizes[*i] += 1;
            return *i;
        }
        let i = self.sizes.len();
        bucket.push((i, q.clone()));
        self.sizes.push(1);
        i
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TransversalOptions {
    pub seed: u64,
    pub closure_cap: usize,
    pub enumeration_cap: u128,
    pub samples: usize,
}

impl Default for TransversalOptions {
    fn default() -> Self {
        TransversalOptions {
            seed: DEFAULT_SEED,
            closure_cap: perm::DEFAULT_CLOSURE_CAP,
            enumeration_cap: transversal::DEFAULT_ENUMERATION_CAP,
            samples: DEFAULT_TRANSVERSAL_SAMPLES,
        }
    }
}

/// One line per transversal of `H` in `G`, then a line with the isomorphism classes.
pub fn transversal_report(space: &CosetSpace, opts: &TransversalOptions) -> Result<Vec<ReportLine>> {
    let index = space.index();
    let group = space.group();
    let subgroup_labels: Vec<&str> = space
        .subgroup()
        .members()
        .iter()
        .map(|&h| group.labels()[h].as_str())
        .collect();
    let (transversals, sampled) = transversals_of(space, opts.enumeration_cap, opts.samples, opts.seed);
    let mut classes = Classifier::default();
    let mut lines = Vec::new();
    for t in &transversals {
        let (q, checks) = check_transversal(t, opts.closure_cap)?;
        let class = q.as_ref().map(|q| classes.classify(q));
        lines.push(
            ReportLine::flag("transversal", index, opts.seed, checks.pass())
                .with("subgroup", &subgroup_labels)
                .with("reps", t.rep_labels())
                .with("table", q.as_ref().map(RightQuasigroup::rows))
                .with("torsion_order", checks.torsion_order)
                .with("is_group", checks.is_group)
                .with("class", class)
                .with("checks", &checks),
        );
    }
    lines.push(
        ReportLine::flag("isomorphism_classes", index, opts.seed, true)
            .with("subgroup", &subgroup_labels)
            .with("mode", if sampled { "sampled" } else { "exhaustive" })
            .with("transversal_count", u64::try_from(space.transversal_count()).unwrap_or(u64::MAX))
            .with("transversals", transversals.len())
            .with("classes", classes.sizes.len())
            .with("class_sizes", &classes.sizes),
    );
    Ok(lines)
}

#[derive(Clone, Copy, Debug)]
pub struct ExtensionOptions {
    pub seed: u64,
    pub closure_cap: usize,
    pub table_cap: usize,
    pub degree_cap: usize,
    pub sampled_triples: usize,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        ExtensionOptions {
            seed: DEFAULT_SEED,
            closure_cap: perm::DEFAULT_CLOSURE_CAP,
            table_cap: extension::DEFAULT_TABLE_CAP,
            degree_cap: perm::DEFAULT_STABILIZER_CAP,
            sampled_triples: extension::SAMPLED_TRIPLES,
        }
    }
}

/// Outcome of the checks on one extension group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionChecks {
    pub order: usize,
    pub expected_order: usize,
    pub violation: Option<AxiomViolation>,
    /// The base table comes back unchanged from the extension's Cayley table.
    pub roundtrip: bool,
}

impl ExtensionChecks {
    pub fn pass(&self) -> bool {
        self.order == self.expected_order && self.violation.is_none() && self.roundtrip
    }
}

pub fn check_extension(e: &ExtensionGroup, expected_order: usize, opts: &ExtensionOptions) -> Result<ExtensionChecks> {
    let violation = e.check_axioms(opts.sampled_triples, opts.seed, opts.table_cap)?;
    let roundtrip = match violation {
        None => {
            let back = extension::transversal_roundtrip(e, opts.table_cap)?;
            back.same_table(e.base()) && back.labels() == e.base().labels()
        }
        Some(_) => false,
    };
    Ok(ExtensionChecks {
        order: e.order(),
        expected_order,
        violation,
        roundtrip,
    })
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The torsion extension and universal extension of `q`, with their report lines.
pub struct ExtensionRun {
    pub lines: Vec<ReportLine>,
    pub torsion: ExtensionGroup,
    pub universal: ExtensionGroup,
}

pub fn extension_report(q: &RightQuasigroup, opts: &ExtensionOptions) -> Result<ExtensionRun> {
    let n = q.len();
    let seed = opts.seed;
    let gs: PermGroup = extension::torsion_group_with_cap(q, opts.closure_cap)?;
    let is_group = q.is_group();
    let torsion = ExtensionGroup::new(q.clone(), gs.clone())?;
    let universal = extension::build_universal_extension_with_cap(q, opts.degree_cap)?;

    let t_checks = check_extension(&torsion, gs.order() * n, opts)?;
    let generated = torsion.generated_by_base();
    let generated_ok = generated.len() == torsion.order() && generated.iter().all(|a| torsion.contains(a));
    let u_checks = check_extension(&universal, factorial(n), opts)?;

    let lines = vec![
        ReportLine::flag("torsion_group", n, seed, gs.is_trivial() == is_group)
            .with("order", gs.order())
            .with("is_group", is_group)
            .with("generators", gs.generators()),
        ReportLine::flag("torsion_extension", n, seed, t_checks.pass()).with("checks", &t_checks),
        ReportLine::flag("torsion_extension_generated_by_base", n, seed, generated_ok)
            .with("generated", generated.len()),
        ReportLine::flag("universal_extension", n, seed, u_checks.pass()).with("checks", &u_checks),
    ];
    Ok(ExtensionRun {
        lines,
        torsion,
        universal,
    })
}

/// `tol` replaces every residual tolerance except the discontinuity jump.
pub fn sphere_tolerances(tol: Option<f64>) -> SphereTolerances {
    let d = SphereTolerances::default();
    match tol {
        Some(t) => SphereTolerances {
            tight: t,
            loose: t,
            jump: d.jump,
        },
        None => d,
    }
}

pub fn sphere_report(n: usize, samples: usize, seed: u64, tol: Option<f64>) -> Result<Vec<ReportLine>> {
    sphere::sphere_suite::<f64>(n, samples, seed, sphere_tolerances(tol))
}

pub fn cayley_report(dim: usize, samples: usize, seed: u64, tol: Option<f64>) -> Result<Vec<ReportLine>> {
    let report = division::quasigroup_laws_report::<f64>(dim, samples, seed)?;
    Ok(report.lines(tol.unwrap_or(division::LAW_TOLERANCE)))
}

/// The discontinuity sequence as CSV.
pub fn discontinuity_csv(n: usize) -> Result<String> {
    let points = sphere::discontinuity_witness::<f64>(n, &sphere::DISCONTINUITY_EPSILONS)?;
    let mut out = String::from("epsilon,distance,base_point_distance,branch\n");
    for p in points {
        let branch = serde_json::to_value(p.branch).expect("branch serializes");
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.epsilon,
            p.distance,
            p.base_point_distance,
            branch.as_str().unwrap_or_default()
        ));
    }
    Ok(out)
}

/// `count` seeded right quasigroups with sizes cycling through `2..=6`.
pub fn random_quasigroups(count: usize, seed: u64) -> Vec<RightQuasigroup> {
    (0..count)
        .map(|i| RightQuasigroup::random(2 + i % 5, seed.wrapping_add(i as u64)))
        .collect()
}

/// Visits every (group, subgroup, transversal) for the named catalog groups.
/// Pairs with more than `cap` transversals are sampled.
pub fn sweep(
    names: &[&str],
    cap: u128,
    samples: usize,
    seed: u64,
    mut visit: impl FnMut(&str, &Transversal<'_>) -> Result<()>,
) -> Result<usize> {
    let mut visited = 0;
    for name in names {
        let group = catalog::group(name)?;
        for h in group.all_subgroups() {
            let space = CosetSpace::new(group.clone(), h);
            let (ts, _) = transversals_of(&space, cap, samples, seed);
            for t in &ts {
                visit(name, t)?;
                visited += 1;
            }
        }
    }
    Ok(visited)
}

/// Two transversals of the same proper subgroup with non-isomorphic induced tables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonIsomorphicPair {
    pub group: String,
    pub subgroup: Vec<String>,
    pub first: Vec<String>,
    pub second: Vec<String>,
    pub first_table: Vec<Vec<usize>>,
    pub second_table: Vec<Vec<usize>>,
}

pub fn find_non_isomorphic_pair(names: &[&str], cap: u128) -> Result<Option<NonIsomorphicPair>> {
    for name in names {
        let group = catalog::group(name)?;
        for h in group.all_subgroups() {
            if h.order() == 1 || h.order() == group.order() {
                continue;
            }
            let subgroup: Vec<String> = h.members().iter().map(|&m| group.labels()[m].clone()).collect();
            let space = CosetSpace::new(group.clone(), h);
            let Ok(mut iter) = space.enumerate_transversals(false, cap) else {
                continue;
            };
            let Some(first) = iter.next() else { continue };
            let q1 = first.induced_quasigroup();
            for t in iter {
                let q2 = t.induced_quasigroup();
                if quasigroup::isomorphic(&q1, &q2).is_none() {
                    return Ok(Some(NonIsomorphicPair {
                        group: name.to_string(),
                        subgroup,
                        first: first.rep_labels(),
                        second: t.rep_labels(),
                        first_table: q1.rows(),
                        second_table: q2.rows(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Resolves `{a,b,...}` against the group's labels and closes it to a subgroup.
/// Commas inside parentheses belong to the label.
pub fn parse_subgroup_spec(group: &transversal::FiniteGroup, spec: &str) -> Result<Subgroup> {
    let inner = spec
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| crate::Error::Parse(format!("subgroup must look like {{a,b,...}}, got `{spec}`")))?;
    let mut tokens = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            tokens.push(std::mem::take(&mut current));
        } else {
            current.push(c);
        }
    }
    tokens.push(current);
    let mut gens = Vec::new();
    for tok in tokens.iter().map(|t| t.trim()).filter(|t| !t.is_empty()) {
        let g = group
            .label_index(tok)
            .ok_or_else(|| crate::Error::InvalidSubgroup(format!("no element labelled `{tok}`")))?;
        gens.push(g);
    }
    Ok(group.generated(gens))
}
