//! Group torsion of a right quasigroup with identity and the extension
//! groups built from it.
//!
//! For a finite right quasigroup `(S, ∘)` with identity `e` and left
//! division `χ`, permutations of `S` fixing `e` act on the right
//! (`x θ h = h(x)`) and multiply left to right, as in [`crate::perm`]. The
//! two structure maps are
//!
//! ```text
//! f(x, y)(z)  = χ(x∘y, (z∘x)∘y)
//! σ_x(h)(y)   = χ(h(x), h(y∘x))
//! ```
//!
//! and pairs `(h, x)`, read as the formal product `h·x`, multiply by
//!
//! ```text
//! (h, x)·(k, y) = (h · σ_x(k) · f(k(x), y),  k(x) ∘ y)
//! (h, x)⁻¹      = (f(x', x)⁻¹ · σ_{x'}(h⁻¹),  h⁻¹(x'))      where x'∘x = e.
//! ```
//!
//! With `h` ranging over the group generated by all `f(x, y)` (the group
//! torsion) this is the group generated by `S`; with `h` ranging over every
//! permutation fixing `e` it is the universal extension, which receives a
//! homomorphism from every group containing `(S, ∘)` as a right transversal.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{self, Perm, PermGroup};
use crate::quasigroup::{RightQuasigroup, TableFile};
use crate::transversal::{CosetSpace, FiniteGroup, Subgroup, Transversal};

/// Largest extension group whose Cayley table is materialized.
pub const DEFAULT_TABLE_CAP: usize = 5040;
/// Groups up to this order get an exhaustive associativity scan.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 500;
/// Triples sampled above the exhaustive limit.
pub const SAMPLED_TRIPLES: usize = 10_000;

/// `z ↦ χ(x∘y, (z∘x)∘y)`; always fixes the identity.
pub fn f_s(q: &RightQuasigroup, x: usize, y: usize) -> Perm {
    let xy = q.op(x, y);
    Perm::from_images((0..q.len()).map(|z| q.ldiv(xy, q.op(q.op(z, x), y))).collect())
        .expect("a composite of bijections")
}

/// `y ↦ χ(h(x), h(y∘x))` for `h` fixing the identity.
pub fn sigma(q: &RightQuasigroup, x: usize, h: &Perm) -> Result<Perm> {
    if h.degree() != q.len() {
        return Err(Error::DegreeMismatch {
            left: q.len(),
            right: h.degree(),
        });
    }
    if !h.fixes(0) {
        return Err(Error::DoesNotFixIdentity { point: 0 });
    }
    Ok(sigma_unchecked(q, x, h))
}

fn sigma_unchecked(q: &RightQuasigroup, x: usize, h: &Perm) -> Perm {
    let hx = h.apply(x);
    Perm::from_images((0..q.len()).map(|y| q.ldiv(hx, h.apply(q.op(y, x)))).collect())
        .expect("a composite of bijections")
}

/// The group torsion: generated by every `f(x, y)`.
pub fn torsion_group(q: &RightQuasigroup) -> Result<PermGroup> {
    torsion_group_with_cap(q, perm::DEFAULT_CLOSURE_CAP)
}

pub fn torsion_group_with_cap(q: &RightQuasigroup, cap: usize) -> Result<PermGroup> {
    let n = q.len();
    let gens: BTreeSet<Perm> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| f_s(q, x, y))
        .filter(|p| !p.is_identity())
        .collect();
    let gens: Vec<Perm> = gens.into_iter().collect();
    perm::generate_with_cap(n, &gens, cap)
}

/// The formal product `h·x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExtensionElement {
    pub h: Perm,
    pub x: usize,
}

impl ExtensionElement {
    pub fn identity(n: usize) -> Self {
        ExtensionElement {
            h: Perm::identity(n),
            x: 0,
        }
    }

    /// `x ∈ S` as the element `(id, x)`.
    pub fn of_base(n: usize, x: usize) -> Self {
        ExtensionElement {
            h: Perm::identity(n),
            x,
        }
    }
}

/// `(h, x)·(k, y)`, with no membership checks.
pub fn product(q: &RightQuasigroup, a: &ExtensionElement, b: &ExtensionElement) -> ExtensionElement {
    let kx = b.h.apply(a.x);
    let h = a
        .h
        .then_unchecked(&sigma_unchecked(q, a.x, &b.h))
        .then_unchecked(&f_s(q, kx, b.x));
    ExtensionElement {
        h,
        x: q.op(kx, b.x),
    }
}

/// `(h, x)⁻¹`, with no membership checks.
pub fn inverse(q: &RightQuasigroup, a: &ExtensionElement) -> ExtensionElement {
    let x_left = q.left_inverse(a.x);
    let h_inv = a.h.inverse();
    let h = f_s(q, x_left, a.x)
        .inverse()
        .then_unchecked(&sigma_unchecked(q, x_left, &h_inv));
    ExtensionElement {
        h,
        x: h_inv.apply(x_left),
    }
}

/// Pairs `(h, x)` with `h` in a group of permutations fixing the identity.
#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    base: RightQuasigroup,
    hpart: PermGroup,
}

/// A failed group-axiom check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomViolation {
    NotClosed { a: usize, b: usize },
    NotAssociative { a: usize, b: usize, c: usize },
    BadIdentity { a: usize },
    BadInverse { a: usize },
}

impl ExtensionGroup {
    pub fn new(base: RightQuasigroup, hpart: PermGroup) -> Result<Self> {
        if hpart.degree() != base.len() {
            return Err(Error::DegreeMismatch {
                left: base.len(),
                right: hpart.degree(),
            });
        }
        if hpart.elements().iter().any(|h| !h.fixes(0)) {
            return Err(Error::DoesNotFixIdentity { point: 0 });
        }
        Ok(ExtensionGroup { base, hpart })
    }

    pub fn base(&self) -> &RightQuasigroup {
        &self.base
    }

    pub fn hpart(&self) -> &PermGroup {
        &self.hpart
    }

    pub fn order(&self) -> usize {
        self.hpart.order() * self.base.len()
    }

    pub fn identity(&self) -> ExtensionElement {
        ExtensionElement::identity(self.base.len())
    }

    /// Element `i` is `(hpart[i / n], i % n)`; index `x < n` is `(id, x)`.
    pub fn element(&self, i: usize) -> ExtensionElement {
        let n = self.base.len();
        ExtensionElement {
            h: self.hpart.elements()[i / n].clone(),
            x: i % n,
        }
    }

    pub fn index_of(&self, a: &ExtensionElement) -> Option<usize> {
        if a.x >= self.base.len() {
            return None;
        }
        self.hpart
            .index_of(&a.h)
            .map(|hi| hi * self.base.len() + a.x)
    }

    pub fn contains(&self, a: &ExtensionElement) -> bool {
        self.index_of(a).is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtensionElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    fn require(&self, a: &ExtensionElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::NotInGroup(format!("({}, {})", a.h, a.x)))
        }
    }

    pub fn product(&self, a: &ExtensionElement, b: &ExtensionElement) -> Result<ExtensionElement> {
        self.require(a)?;
        self.require(b)?;
        let c = product(&self.base, a, b);
        if !self.contains(&c) {
            return Err(Error::Invariant(format!(
                "product ({}, {}) leaves the group",
                c.h, c.x
            )));
        }
        Ok(c)
    }

    pub fn inverse(&self, a: &ExtensionElement) -> Result<ExtensionElement> {
        self.require(a)?;
        Ok(inverse(&self.base, a))
    }

    /// Cayley table by element index, up to `cap` elements.
    pub fn cayley_table(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let order = self.order();
        if order > cap {
            return Err(Error::CapExceeded {
                what: "extension group order",
                value: order,
                cap,
            });
        }
        let elements: Vec<ExtensionElement> = self.elements().collect();
        let mut table = vec![vec![0; order]; order];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let c = product(&self.base, a, b);
                table[i][j] = self.index_of(&c).ok_or_else(|| {
                    Error::Invariant(format!("product of elements {i} and {j} leaves the group"))
                })?;
            }
        }
        Ok(table)
    }

    /// Labels `h|x`, with `h` in cycle notation.
    pub fn labels(&self) -> Vec<String> {
        self.elements()
            .map(|a| format!("{}|{}", a.h, self.base.labels()[a.x]))
            .collect()
    }

    /// Group file with synthesized labels.
    pub fn to_file(&self, cap: usize) -> Result<TableFile> {
        Ok(TableFile {
            labels: self.labels(),
            identity: 0,
            table: self.cayley_table(cap)?,
        })
    }

    /// Closure, identity, two-sided inverses, and associativity (exhaustive up to
    /// [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`] elements, otherwise `sampled` seeded triples).
    pub fn check_axioms(&self, sampled: usize, seed: u64, cap: usize) -> Result<Option<AxiomViolation>> {
        let table = match self.cayley_table(cap) {
            Ok(t) => t,
            Err(Error::Invariant(_)) => {
                return Ok(self.find_non_closed());
            }
            Err(e) => return Err(e),
        };
        Ok(check_table_axioms(self, &table, sampled, seed))
    }

    fn find_non_closed(&self) -> Option<AxiomViolation> {
        let elements: Vec<ExtensionElement> = self.elements().collect();
        for (a, x) in elements.iter().enumerate() {
            for (b, y) in elements.iter().enumerate() {
                if !self.contains(&product(&self.base, x, y)) {
                    return Some(AxiomViolation::NotClosed { a, b });
                }
            }
        }
        None
    }

    /// The subgroup generated by `{(id, x)}`, by closure under the product.
    pub fn generated_by_base(&self) -> BTreeSet<ExtensionElement> {
        let n = self.base.len();
        let gens: Vec<ExtensionElement> = (0..n).map(|x| ExtensionElement::of_base(n, x)).collect();
        let mut seen = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(a) = queue.pop_front() {
            for g in &gens {
                let b = product(&self.base, &a, g);
                if seen.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    /// The Cayley table as a group, trusting closure and associativity checked elsewhere.
    pub fn to_group(&self, cap: usize) -> Result<FiniteGroup> {
        let table = self.cayley_table(cap)?;
        FiniteGroup::from_trusted_table(self.labels(), &table)
    }
}

fn check_table_axioms(
    e: &ExtensionGroup,
    table: &[Vec<usize>],
    sampled: usize,
    seed: u64,
) -> Option<AxiomViolation> {
    let order = table.len();
    for a in 0..order {
        if table[0][a] != a || table[a][0] != a {
            return Some(AxiomViolation::BadIdentity { a });
        }
    }
    for a in 0..order {
        let inv = e.index_of(&inverse(&e.base, &e.element(a)));
        match inv {
            Some(b) if table[a][b] == 0 && table[b][a] == 0 => {}
            _ => return Some(AxiomViolation::BadInverse { a }),
        }
    }
    if order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Some(AxiomViolation::NotAssociative { a, b, c });
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sampled {
            let (a, b, c) = (
                rng.random_range(0..order),
                rng.random_range(0..order),
                rng.random_range(0..order),
            );
            if table[table[a][b]][c] != table[a][table[b][c]] {
                return Some(AxiomViolation::NotAssociative { a, b, c });
            }
        }
    }
    None
}

/// `G_S·S`: pairs over the group torsion.
pub fn build_torsion_extension(q: &RightQuasigroup) -> Result<ExtensionGroup> {
    build_torsion_extension_with_cap(q, perm::DEFAULT_CLOSURE_CAP)
}

pub fn build_torsion_extension_with_cap(q: &RightQuasigroup, cap: usize) -> Result<ExtensionGroup> {
    ExtensionGroup::new(q.clone(), torsion_group_with_cap(q, cap)?)
}

/// `G^S`: pairs over every permutation fixing the identity; order `n!`.
pub fn build_universal_extension(q: &RightQuasigroup) -> Result<ExtensionGroup> {
    build_universal_extension_with_cap(q, perm::DEFAULT_STABILIZER_CAP)
}

pub fn build_universal_extension_with_cap(q: &RightQuasigroup, cap: usize) -> Result<ExtensionGroup> {
    ExtensionGroup::new(q.clone(), perm::stabilizer_of_point_with_cap(q.len(), 0, cap)?)
}

/// Recovers the base quasigroup as the transversal `{(id, x)}` of `{(h, e)}`
/// inside the extension's Cayley table.
pub fn transversal_roundtrip(e: &ExtensionGroup, cap: usize) -> Result<RightQuasigroup> {
    let n = e.base().len();
    let group = e.to_group(cap)?;
    let hpart_copy: Vec<usize> = (0..e.hpart().order()).map(|hi| hi * n).collect();
    let subgroup = Subgroup::new(&group, hpart_copy)?;
    let space = CosetSpace::new(group, subgroup);
    let t = space.transversal(0..n)?;
    if t.reps() != (0..n).collect::<Vec<_>>() {
        return Err(Error::Invariant("base elements out of coset order".into()));
    }
    let induced = t.induced_quasigroup();
    RightQuasigroup::with_labels(e.base().labels().to_vec(), &induced.rows(), 0)
}

/// `φ(a·x) = (q(a), x)`: the homomorphism from the ambient group into the
/// universal extension of the induced quasigroup, indexed by group element.
pub fn universal_hom(t: &Transversal<'_>) -> Vec<ExtensionElement> {
    let group = t.space().group();
    (0..group.order())
        .map(|g| {
            let (a, x) = t.factor(g);
            ExtensionElement { h: t.phi(a), x }
        })
        .collect()
}

/// First pair `(g1, g2)` with `hom(g1·g2) ≠ hom(g1)·hom(g2)`.
pub fn hom_violation(
    group: &FiniteGroup,
    q: &RightQuasigroup,
    hom: &[ExtensionElement],
) -> Option<(usize, usize)> {
    for g1 in 0..group.order() {
        for g2 in 0..group.order() {
            if hom[group.mul(g1, g2)] != product(q, &hom[g1], &hom[g2]) {
                return Some((g1, g2));
            }
        }
    }
    None
}

/// Checks of the universal homomorphism for one transversal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCheck {
    pub homomorphism: bool,
    pub identity_on_base: bool,
    pub subgroup_fixes_identity: bool,
    /// Any homomorphism fixing `S` pointwise is forced on `⟨S⟩`; this compares those forced values.
    pub forced_on_generated: bool,
}

impl HomCheck {
    pub fn all(&self) -> bool {
        self.homomorphism && self.identity_on_base && self.subgroup_fixes_identity && self.forced_on_generated
    }
}

pub fn check_universal_hom(t: &Transversal<'_>) -> HomCheck {
    let space = t.space();
    let group = space.group();
    let q = t.induced_quasigroup();
    let n = q.len();
    let hom = universal_hom(t);
    let identity_on_base = t
        .reps()
        .iter()
        .enumerate()
        .all(|(i, &x)| hom[x] == ExtensionElement::of_base(n, i));
    let subgroup_fixes_identity = space
        .subgroup()
        .members()
        .iter()
        .all(|&a| hom[a].x == 0 && hom[a].h.fixes(0));
    HomCheck {
        homomorphism: hom_violation(group, &q, &hom).is_none(),
        identity_on_base,
        subgroup_fixes_identity,
        forced_on_generated: forced_images_agree(t, &q, &hom),
    }
}

fn forced_images_agree(t: &Transversal<'_>, q: &RightQuasigroup, hom: &[ExtensionElement]) -> bool {
    let group = t.space().group();
    let n = q.len();
    let mut forced: HashMap<usize, ExtensionElement> = HashMap::from([(0, ExtensionElement::identity(n))]);
    let mut queue = VecDeque::from([0]);
    while let Some(g) = queue.pop_front() {
        let image = forced[&g].clone();
        for (i, &s) in t.reps().iter().enumerate() {
            let gs = group.mul(g, s);
            let value = product(q, &image, &ExtensionElement::of_base(n, i));
            match forced.get(&gs) {
                Some(v) if *v != value => return false,
                Some(_) => {}
                None => {
                    forced.insert(gs, value);
                    queue.push_back(gs);
                }
            }
        }
    }
    forced.iter().all(|(g, v)| hom[*g] == *v)
}

/// When `S` generates `G` and `H` is core-free: is the universal homomorphism
/// injective, and is its image exactly `G_S·S`?
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedCoreFinding {
    pub applicable: bool,
    pub injective: bool,
    pub image_is_torsion_extension: bool,
}

pub fn generated_core_finding(t: &Transversal<'_>) -> Result<GeneratedCoreFinding> {
    let space = t.space();
    let applicable =
        t.generates_group() && crate::transversal::core_is_trivial(space.group(), space.subgroup());
    let hom = universal_hom(t);
    let image: BTreeSet<ExtensionElement> = hom.iter().cloned().collect();
    let torsion = build_torsion_extension(&t.induced_quasigroup())?;
    let torsion_elements: BTreeSet<ExtensionElement> = torsion.elements().collect();
    Ok(GeneratedCoreFinding {
        applicable,
        injective: image.len() == hom.len(),
        image_is_torsion_extension: image == torsion_elements,
    })
}
