//! Finite groups given by Cayley tables, their subgroups, right cosets and
//! right transversals.
//!
//! A transversal `S` of `H` in `G` always contains the identity and is
//! stored in coset order: `reps[i]` is the representative of the `i`-th
//! right coset, cosets being ordered by their smallest element. Coset 0 is
//! `H` itself and `reps[0]` is the identity, so index `i` of the induced
//! quasigroup is exactly coset `i`.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{self, Perm, PermGroup};
use crate::quasigroup::{check_square, normalize_identity, RightQuasigroup, TableFile};

/// Default cap on the number of transversals an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    n: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table (closure, identity, inverses, associativity)
    /// and moves the identity to index 0.
    pub fn from_table(labels: Vec<String>, table: &[Vec<usize>], identity: usize) -> Result<Self> {
        let n = check_square(table)?;
        if labels.len() != n {
            return Err(Error::InvalidTable(format!(
                "{} labels for {n} elements",
                labels.len()
            )));
        }
        if identity >= n {
            return Err(Error::OutOfRange {
                index: identity,
                size: n,
            });
        }
        for x in 0..n {
            if table[identity][x] != x || table[x][identity] != x {
                return Err(Error::InvalidTable(format!(
                    "element {identity} is not a two-sided identity (fails at {x})"
                )));
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == identity) {
                return Err(Error::InvalidTable(format!("element {a} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let (labels, table) = normalize_identity(labels, table, identity);
        Ok(Self::from_normalized(labels, &table))
    }

    /// Accepts a table already known to be associative, with identity at index 0
    /// and every row and column a bijection; only shape and identity are rechecked.
    pub fn from_trusted_table(labels: Vec<String>, table: &[Vec<usize>]) -> Result<Self> {
        let n = check_square(table)?;
        if labels.len() != n {
            return Err(Error::InvalidTable(format!(
                "{} labels for {n} elements",
                labels.len()
            )));
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return Err(Error::InvalidTable(format!(
                    "element 0 is not a two-sided identity (fails at {x})"
                )));
            }
            if !table[x].contains(&0) {
                return Err(Error::InvalidTable(format!("element {x} has no inverse")));
            }
        }
        Ok(Self::from_normalized(labels, table))
    }

    fn from_normalized(labels: Vec<String>, table: &[Vec<usize>]) -> Self {
        let n = table.len();
        let flat: Vec<usize> = table.iter().flatten().copied().collect();
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| flat[a * n + b] == 0).expect("inverse exists"))
            .collect();
        FiniteGroup {
            labels,
            n,
            table: flat,
            inverses,
        }
    }

    /// The group of all elements of `group`, multiplied left to right.
    pub fn from_perm_group(group: &PermGroup, label: impl Fn(&Perm) -> String) -> Self {
        let elements = group.elements();
        let n = elements.len();
        let mut table = vec![vec![0; n]; n];
        for (i, p) in elements.iter().enumerate() {
            for (j, q) in elements.iter().enumerate() {
                let pq = p.then_unchecked(q);
                table[i][j] = group.index_of(&pq).expect("group is closed");
            }
        }
        let labels = elements.iter().map(label).collect();
        // Sorted element order puts the identity first.
        Self::from_normalized(labels, &table)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let n = a.n * b.n;
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            let (i1, i2) = (i / b.n, i % b.n);
            for j in 0..n {
                let (j1, j2) = (j / b.n, j % b.n);
                table[i][j] = a.mul(i1, j1) * b.n + b.mul(i2, j2);
            }
        }
        let labels = (0..n)
            .map(|i| format!("({},{})", a.labels[i / b.n], b.labels[i % b.n]))
            .collect();
        Self::from_normalized(labels, &table)
    }

    pub fn from_file(file: &TableFile) -> Result<Self> {
        Self::from_table(file.labels.clone(), &file.table, file.identity)
    }

    pub fn to_file(&self) -> TableFile {
        TableFile {
            labels: self.labels.clone(),
            identity: 0,
            table: self.table.chunks(self.n).map(|r| r.to_vec()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// The table viewed as a right quasigroup (it is one, being a group).
    pub fn as_quasigroup(&self) -> RightQuasigroup {
        RightQuasigroup::with_labels(self.labels.clone(), &self.to_file().table, 0)
            .expect("group tables are right quasigroups")
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        let gens: Vec<usize> = gens.into_iter().filter(|&g| g != 0).collect();
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(a) = queue.pop_front() {
            for &g in &gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        Subgroup {
            members: (0..self.n).filter(|&i| seen[i]).collect(),
        }
    }

    /// Every subgroup, sorted by order and then by member list.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
        found.insert(vec![0]);
        while let Some(members) = frontier.pop() {
            for g in 0..self.n {
                if members.binary_search(&g).is_ok() {
                    continue;
                }
                let joined = self
                    .generated(members.iter().copied().chain(std::iter::once(g)))
                    .members;
                if found.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().map(|members| Subgroup { members }).collect();
        out.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then(a.members.cmp(&b.members)));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Checks that `members` is a subgroup of `group`.
    pub fn new(group: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&m) = members.iter().find(|&&m| m >= group.order()) {
            return Err(Error::OutOfRange {
                index: m,
                size: group.order(),
            });
        }
        if members.first() != Some(&0) {
            return Err(Error::InvalidSubgroup("does not contain the identity".into()));
        }
        for &a in &members {
            if members.binary_search(&group.inv(a)).is_err() {
                return Err(Error::InvalidSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &members {
                if members.binary_search(&group.mul(a, b)).is_err() {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed under product at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Subgroup { members })
    }

    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup {
            members: (0..group.order()).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn is_normal_in(&self, group: &FiniteGroup) -> bool {
        (0..group.order()).all(|g| {
            self.members
                .iter()
                .all(|&h| self.contains(group.mul(group.mul(group.inv(g), h), g)))
        })
    }
}

/// Right cosets `Hg`, each sorted, ordered by smallest element; the first is `H`.
pub fn right_cosets(group: &FiniteGroup, subgroup: &Subgroup) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; group.order()];
    let mut cosets = Vec::new();
    for g in 0..group.order() {
        if assigned[g] {
            continue;
        }
        let mut coset: Vec<usize> = subgroup.members.iter().map(|&h| group.mul(h, g)).collect();
        coset.sort_unstable();
        for &c in &coset {
            assigned[c] = true;
        }
        cosets.push(coset);
    }
    cosets
}

/// Intersection of all conjugates `g⁻¹Hg` is `{e}`.
pub fn core_is_trivial(group: &FiniteGroup, subgroup: &Subgroup) -> bool {
    let mut core: Vec<usize> = subgroup.members.clone();
    for g in 0..group.order() {
        let gi = group.inv(g);
        core.retain(|&k| {
            // k ∈ g⁻¹Hg  ⇔  g k g⁻¹ ∈ H
            subgroup.contains(group.mul(group.mul(g, k), gi))
        });
    }
    core == [0]
}

/// A group, a subgroup, and its right cosets.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    group: FiniteGroup,
    subgroup: Subgroup,
    cosets: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
}

impl CosetSpace {
    pub fn new(group: FiniteGroup, subgroup: Subgroup) -> Self {
        let cosets = right_cosets(&group, &subgroup);
        let mut coset_of = vec![0; group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &g in c {
                coset_of[g] = i;
            }
        }
        CosetSpace {
            group,
            subgroup,
            cosets,
            coset_of,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn index(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Number of transversals containing the identity.
    pub fn transversal_count(&self) -> u128 {
        self.cosets[1..]
            .iter()
            .map(|c| c.len() as u128)
            .try_fold(1u128, |acc, k| acc.checked_mul(k))
            .unwrap_or(u128::MAX)
    }

    /// Builds a transversal from any set of representatives, one per coset.
    pub fn transversal(&self, reps: impl IntoIterator<Item = usize>) -> Result<Transversal<'_>> {
        let mut by_coset: Vec<Option<usize>> = vec![None; self.index()];
        for r in reps {
            if r >= self.group.order() {
                return Err(Error::OutOfRange {
                    index: r,
                    size: self.group.order(),
                });
            }
            let c = self.coset_of[r];
            if let Some(prev) = by_coset[c] {
                if prev != r {
                    return Err(Error::InvalidTransversal(format!(
                        "{prev} and {r} lie in the same coset"
                    )));
                }
            }
            by_coset[c] = Some(r);
        }
        let reps: Vec<usize> = by_coset
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::InvalidTransversal(format!("coset {i} has no representative"))))
            .collect::<Result<_>>()?;
        if reps[0] != 0 {
            return Err(Error::InvalidTransversal("identity is not a representative".into()));
        }
        Ok(Transversal { space: self, reps })
    }

    /// All transversals containing the identity, lexicographic in the
    /// representative list (the last coset varies fastest).
    pub fn enumerate_transversals(
        &self,
        generating_only: bool,
        cap: u128,
    ) -> Result<TransversalIter<'_>> {
        let count = self.transversal_count();
        if count > cap {
            return Err(Error::CapExceeded {
                what: "transversal count",
                value: usize::try_from(count).unwrap_or(usize::MAX),
                cap: usize::try_from(cap).unwrap_or(usize::MAX),
            });
        }
        Ok(TransversalIter {
            space: self,
            choice: vec![0; self.index()],
            done: false,
            generating_only,
        })
    }

    /// `count` seeded random transversals (with replacement).
    pub fn sample_transversals(&self, count: usize, seed: u64) -> Vec<Transversal<'_>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let reps = std::iter::once(0)
                    .chain(self.cosets[1..].iter().map(|c| c[rng.random_range(0..c.len())]))
                    .collect();
                Transversal { space: self, reps }
            })
            .collect()
    }
}

pub struct TransversalIter<'a> {
    space: &'a CosetSpace,
    choice: Vec<usize>,
    done: bool,
    generating_only: bool,
}

impl<'a> Iterator for TransversalIter<'a> {
    type Item = Transversal<'a>;

    fn next(&mut self) -> Option<Self::Item> {
        let cosets = &self.space.cosets;
        loop {
            if self.done {
                return None;
            }
            let reps: Vec<usize> = std::iter::once(0)
                .chain((1..cosets.len()).map(|i| cosets[i][self.choice[i]]))
                .collect();
            // advance the odometer
            let mut i = cosets.len();
            loop {
                if i <= 1 {
                    self.done = true;
                    break;
                }
                i -= 1;
                self.choice[i] += 1;
                if self.choice[i] < cosets[i].len() {
                    break;
                }
                self.choice[i] = 0;
            }
            let t = Transversal {
                space: self.space,
                reps,
            };
            if !self.generating_only || t.generates_group() {
                return Some(t);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Transversal<'a> {
    space: &'a CosetSpace,
    reps: Vec<usize>,
}

/// On-disk form of a transversal: `{"reps": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalFile {
    pub reps: Vec<usize>,
}

/// On-disk form of a subgroup: `{"members": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupFile {
    pub members: Vec<usize>,
}

impl<'a> Transversal<'a> {
    pub fn space(&self) -> &'a CosetSpace {
        self.space
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index in `S` of the representative of the coset `Hg`.
    pub fn rep_index(&self, g: usize) -> usize {
        self.space.coset_of[g]
    }

    /// Unique factorization `g = a·x` with `a ∈ H` and `x = reps[index]`.
    pub fn factor(&self, g: usize) -> (usize, usize) {
        let grp = &self.space.group;
        let i = self.rep_index(g);
        (grp.mul(g, grp.inv(self.reps[i])), i)
    }

    pub fn generates_group(&self) -> bool {
        self.space.group.generated(self.reps.iter().copied()).order() == self.space.group.order()
    }

    /// `table[i][j]` is the index of the representative of `H·reps[i]·reps[j]`.
    pub fn induced_table(&self) -> Vec<Vec<usize>> {
        let grp = &self.space.group;
        let n = self.reps.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.rep_index(grp.mul(self.reps[i], self.reps[j])))
                    .collect()
            })
            .collect()
    }

    /// `x ∘ y` is the representative of `Hxy`.
    pub fn induced_quasigroup(&self) -> RightQuasigroup {
        let labels = self.rep_labels();
        RightQuasigroup::with_labels(labels, &self.induced_table(), 0)
            .expect("a transversal induces a right quasigroup with identity")
    }

    pub fn rep_labels(&self) -> Vec<String> {
        self.reps
            .iter()
            .map(|&r| self.space.group.labels[r].clone())
            .collect()
    }

    /// `φ(g)`: the permutation of `S` sending `x` to the representative of `Hxg`.
    pub fn phi(&self, g: usize) -> Perm {
        let grp = &self.space.group;
        Perm::from_images(
            self.reps
                .iter()
                .map(|&x| self.rep_index(grp.mul(x, g)))
                .collect(),
        )
        .expect("right multiplication permutes cosets")
    }

    /// `H_S`, generated by `xy(x∘y)⁻¹` over all `x, y ∈ S`.
    pub fn h_sub_s(&self) -> Subgroup {
        self.space.group.generated(self.h_sub_s_generators())
    }

    pub fn h_sub_s_generators(&self) -> Vec<usize> {
        let grp = &self.space.group;
        let mut gens = BTreeSet::new();
        for &x in &self.reps {
            for &y in &self.reps {
                let xy = grp.mul(x, y);
                let x_circ_y = self.reps[self.rep_index(xy)];
                gens.insert(grp.mul(xy, grp.inv(x_circ_y)));
            }
        }
        gens.into_iter().collect()
    }

    /// `G_S = φ(H_S)` as a permutation group on `S`.
    pub fn torsion_via_phi(&self) -> Result<PermGroup> {
        let gens: Vec<Perm> = self
            .h_sub_s()
            .members
            .iter()
            .map(|&h| self.phi(h))
            .collect();
        perm::generate(self.reps.len(), &gens)
    }

    pub fn to_file(&self) -> TransversalFile {
        TransversalFile {
            reps: self.reps.clone(),
        }
    }
}
