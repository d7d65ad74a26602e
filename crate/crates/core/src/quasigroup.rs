//! Finite right quasigroups with a two-sided identity.
//!
//! Tables are stored row-major with `table[z][x] = z ∘ x`: the row is the
//! left operand. Right translations `z ↦ z ∘ x` are the columns, and the
//! right-quasigroup axiom says every column is a bijection. The identity is
//! always index 0 once a table has been validated.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightQuasigroup {
    labels: Vec<String>,
    n: usize,
    table: Vec<usize>,
    /// `ldiv[x * n + y]` is the unique z with z ∘ x = y.
    ldiv: Vec<usize>,
}

/// On-disk form: `{"labels": [...], "identity": 0, "table": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub labels: Vec<String>,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
}

impl TableFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("table file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub(crate) fn check_square(table: &[Vec<usize>]) -> Result<usize> {
    let n = table.len();
    if n == 0 {
        return Err(Error::InvalidTable("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidTable(format!(
                "row {i} has length {}, expected {n}",
                row.len()
            )));
        }
        if let Some((j, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::InvalidTable(format!(
                "cell ({i}, {j}) = {v} is out of range 0..{n}"
            )));
        }
    }
    Ok(n)
}

/// Relabels so that `identity` becomes index 0, by swapping it with 0.
pub(crate) fn normalize_identity(
    labels: Vec<String>,
    table: &[Vec<usize>],
    identity: usize,
) -> (Vec<String>, Vec<Vec<usize>>) {
    let n = table.len();
    if identity == 0 {
        return (labels, table.to_vec());
    }
    let swap = |i: usize| {
        if i == 0 {
            identity
        } else if i == identity {
            0
        } else {
            i
        }
    };
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[swap(i)][swap(j)] = swap(table[i][j]);
        }
    }
    let mut labels = labels;
    labels.swap(0, identity);
    (labels, out)
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl RightQuasigroup {
    /// Checks the two axioms and normalizes the identity to index 0.
    ///
    /// Errors name the first violated cell, scanning the identity row and
    /// column first and then each column for a repeated value.
    pub fn validate(table: &[Vec<usize>], identity: usize) -> Result<Self> {
        let n = check_square(table)?;
        Self::with_labels(default_labels(n), table, identity)
    }

    pub fn with_labels(labels: Vec<String>, table: &[Vec<usize>], identity: usize) -> Result<Self> {
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
            if table[identity][x] != x {
                return Err(Error::InvalidTable(format!(
                    "identity row: e ∘ {x} = {}, expected {x}",
                    table[identity][x]
                )));
            }
            if table[x][identity] != x {
                return Err(Error::InvalidTable(format!(
                    "identity column: {x} ∘ e = {}, expected {x}",
                    table[x][identity]
                )));
            }
        }
        for x in 0..n {
            let mut seen = vec![None; n];
            for z in 0..n {
                let v = table[z][x];
                if let Some(prev) = seen[v] {
                    return Err(Error::InvalidTable(format!(
                        "column {x} is not a bijection: {prev} ∘ {x} = {z} ∘ {x} = {v}"
                    )));
                }
                seen[v] = Some(z);
            }
        }
        let (labels, table) = normalize_identity(labels, table, identity);
        Ok(Self::from_normalized(labels, &table))
    }

    fn from_normalized(labels: Vec<String>, table: &[Vec<usize>]) -> Self {
        let n = table.len();
        let flat: Vec<usize> = table.iter().flatten().copied().collect();
        let mut ldiv = vec![0; n * n];
        for z in 0..n {
            for x in 0..n {
                ldiv[x * n + flat[z * n + x]] = z;
            }
        }
        RightQuasigroup {
            labels,
            n,
            table: flat,
            ldiv,
        }
    }

    pub fn trivial() -> Self {
        Self::from_normalized(vec!["e".into()], &[vec![0]])
    }

    pub fn from_file(file: &TableFile) -> Result<Self> {
        Self::with_labels(file.labels.clone(), &file.table, file.identity)
    }

    pub fn to_file(&self) -> TableFile {
        TableFile {
            labels: self.labels.clone(),
            identity: 0,
            table: self.rows(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `x ∘ y`.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    /// The unique z with `z ∘ x = y`.
    #[inline]
    pub fn ldiv(&self, x: usize, y: usize) -> usize {
        self.ldiv[x * self.n + y]
    }

    /// The unique x' with `x' ∘ x = e`.
    pub fn left_inverse(&self, x: usize) -> usize {
        self.ldiv(x, 0)
    }

    /// Right translation `z ↦ z ∘ x` as a permutation.
    pub fn right_translation(&self, x: usize) -> Perm {
        Perm::from_images((0..self.n).map(|z| self.op(z, x)).collect())
            .expect("validated columns are bijections")
    }

    /// First triple with `(x∘y)∘z ≠ x∘(y∘z)`, scanning lexicographically.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let xy = self.op(x, y);
                for z in 0..n {
                    if self.op(xy, z) != self.op(x, self.op(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Associativity, which together with the identity and right division makes a group.
    pub fn is_group(&self) -> bool {
        self.associativity_witness().is_none()
    }

    /// Seeded random right quasigroup of order `n` with identity 0.
    ///
    /// Column 0 is the identity map. Every other column x is a uniform
    /// bijection conditioned on `0 ↦ x`.
    pub fn random(n: usize, seed: u64) -> Self {
        assert!(n >= 1, "a right quasigroup with identity has at least one element");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut table = vec![vec![0; n]; n];
        for (z, row) in table.iter_mut().enumerate() {
            row[0] = z;
        }
        for x in 1..n {
            table[0][x] = x;
            let mut targets: Vec<usize> = (0..n).filter(|&v| v != x).collect();
            targets.shuffle(&mut rng);
            for (z, v) in (1..n).zip(targets) {
                table[z][x] = v;
            }
        }
        Self::from_normalized(default_labels(n), &table)
    }

    /// Applies an identity-preserving relabeling `β`, producing the table with
    /// `β(x) ∘' β(y) = β(x ∘ y)`.
    pub fn relabel(&self, beta: &Perm) -> Result<Self> {
        if beta.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: beta.degree(),
            });
        }
        if !beta.fixes(0) {
            return Err(Error::DoesNotFixIdentity { point: 0 });
        }
        let n = self.n;
        let mut table = vec![vec![0; n]; n];
        let mut labels = vec![String::new(); n];
        for x in 0..n {
            labels[beta.apply(x)] = self.labels[x].clone();
            for y in 0..n {
                table[beta.apply(x)][beta.apply(y)] = beta.apply(self.op(x, y));
            }
        }
        Ok(Self::from_normalized(labels, &table))
    }

    pub fn same_table(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table
    }
}

/// Per-element signature preserved by isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementSignature {
    pub right_cycle_type: Vec<usize>,
    /// Sorted fibre sizes of `z ↦ x∘z`.
    pub left_fibres: Vec<usize>,
    pub idempotent: bool,
    /// Order of `x` under repeated right multiplication `e, x, x∘x, (x∘x)∘x, …` until it returns to `e`, if it does.
    pub power_period: Option<usize>,
}

/// The sorted multiset of element signatures; equal for isomorphic tables.
pub fn invariant(q: &RightQuasigroup) -> Vec<ElementSignature> {
    let n = q.len();
    let mut sigs: Vec<ElementSignature> = (0..n)
        .map(|x| {
            let mut fibres = vec![0usize; n];
            for z in 0..n {
                fibres[q.op(x, z)] += 1;
            }
            fibres.retain(|&c| c > 0);
            fibres.sort_unstable();
            let mut p = x;
            let mut power_period = None;
            for k in 1..=n {
                if p == 0 {
                    power_period = Some(k);
                    break;
                }
                p = q.op(p, x);
            }
            ElementSignature {
                right_cycle_type: q.right_translation(x).cycle_type(),
                left_fibres: fibres,
                idempotent: q.op(x, x) == x,
                power_period,
            }
        })
        .collect();
    sigs.sort();
    sigs
}

/// Searches for an isomorphism `β` with `β(e) = e` and `β(x∘y) = β(x)∘β(y)`.
///
/// Returns the images `β(0), …, β(n-1)` if one exists.
pub fn isomorphic(a: &RightQuasigroup, b: &RightQuasigroup) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let types_a: Vec<Vec<usize>> = (0..n).map(|x| a.right_translation(x).cycle_type()).collect();
    let types_b: Vec<Vec<usize>> = (0..n).map(|x| b.right_translation(x).cycle_type()).collect();
    let mut sorted_a = types_a.clone();
    let mut sorted_b = types_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b || a.is_group() != b.is_group() {
        return None;
    }
    let search = IsoSearch {
        a,
        b,
        types_a: &types_a,
        types_b: &types_b,
    };
    let mut state = IsoState {
        map: vec![None; n],
        inv: vec![None; n],
    };
    if !search.assign(&mut state, 0, 0) {
        return None;
    }
    search
        .extend(state)
        .map(|s| s.map.into_iter().map(|v| v.expect("complete map")).collect())
}

#[derive(Clone)]
struct IsoState {
    map: Vec<Option<usize>>,
    inv: Vec<Option<usize>>,
}

struct IsoSearch<'a> {
    a: &'a RightQuasigroup,
    b: &'a RightQuasigroup,
    types_a: &'a [Vec<usize>],
    types_b: &'a [Vec<usize>],
}

impl IsoSearch<'_> {
    fn extend(&self, state: IsoState) -> Option<IsoState> {
        let Some(x) = state.map.iter().position(Option::is_none) else {
            return Some(state);
        };
        for v in 0..self.b.len() {
            if state.inv[v].is_some() || self.types_a[x] != self.types_b[v] {
                continue;
            }
            let mut next = state.clone();
            if self.assign(&mut next, x, v) {
                if let Some(done) = self.extend(next) {
                    return Some(done);
                }
            }
        }
        None
    }

    /// Assigns `x ↦ v` and propagates every image forced by the homomorphism condition.
    fn assign(&self, state: &mut IsoState, x: usize, v: usize) -> bool {
        let mut pending = vec![(x, v)];
        while let Some((x, v)) = pending.pop() {
            match (state.map[x], state.inv[v]) {
                (Some(w), _) if w == v => continue,
                (Some(_), _) | (None, Some(_)) => return false,
                (None, None) => {}
            }
            if self.types_a[x] != self.types_b[v] {
                return false;
            }
            state.map[x] = Some(v);
            state.inv[v] = Some(x);
            let assigned: Vec<(usize, usize)> = state
                .map
                .iter()
                .enumerate()
                .filter_map(|(i, m)| m.map(|w| (i, w)))
                .collect();
            for &(y, w) in &assigned {
                pending.push((self.a.op(x, y), self.b.op(v, w)));
                pending.push((self.a.op(y, x), self.b.op(w, v)));
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // e = 0, a = 1, b = 2
    fn q3() -> RightQuasigroup {
        RightQuasigroup::validate(&[vec![0, 1, 2], vec![1, 2, 1], vec![2, 0, 0]], 0).unwrap()
    }

    fn z(n: usize) -> RightQuasigroup {
        let t: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        RightQuasigroup::validate(&t, 0).unwrap()
    }

    #[test]
    fn trivial_and_cyclic_are_valid() {
        let t = RightQuasigroup::validate(&[vec![0]], 0).unwrap();
        assert!(t.same_table(&RightQuasigroup::trivial()));
        assert!(t.is_group());
        assert!(z(3).is_group());
    }

    #[test]
    fn q3_axioms_by_direct_check() {
        let q = q3();
        assert_eq!(q.op(1, 1), 2);
        assert_eq!(q.op(0, 2), 2);
        assert_eq!(q.op(2, 0), 2);
        assert_eq!(q.ldiv(2, 0), 2);
        assert_eq!(q.left_inverse(1), 2);
        assert_eq!(q.left_inverse(0), 0);
        // (a∘a)∘a = b∘a = e, a∘(a∘a) = a∘b = a
        assert_eq!(q.op(q.op(1, 1), 1), 0);
        assert_eq!(q.op(1, q.op(1, 1)), 1);
        assert!(!q.is_group());
        assert!(q.associativity_witness().is_some());
    }

    #[test]
    fn validate_reports_violations() {
        let e = RightQuasigroup::validate(&[vec![0, 1], vec![1, 1]], 0).unwrap_err();
        assert!(matches!(e, Error::InvalidTable(ref m) if m.contains("column 1")), "{e}");
        let e = RightQuasigroup::validate(&[vec![0, 1], vec![0, 0]], 0).unwrap_err();
        assert!(matches!(e, Error::InvalidTable(ref m) if m.contains("identity column")), "{e}");
        let e = RightQuasigroup::validate(&[vec![1, 0], vec![0, 1]], 0).unwrap_err();
        assert!(matches!(e, Error::InvalidTable(ref m) if m.contains("identity row")), "{e}");
        assert!(RightQuasigroup::validate(&[vec![0, 1], vec![1]], 0).is_err());
        assert!(RightQuasigroup::validate(&[vec![0, 2], vec![1, 0]], 0).is_err());
        assert!(RightQuasigroup::validate(&[], 0).is_err());
    }

    #[test]
    fn identity_is_normalized_to_zero() {
        // Z3 written with identity at index 2.
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let q = RightQuasigroup::validate(&t, 2).unwrap();
        assert_eq!(q.labels()[0], "2");
        assert!(q.is_group());
        for x in 0..3 {
            assert_eq!(q.op(0, x), x);
            assert_eq!(q.op(x, 0), x);
        }
    }

    #[test]
    fn ldiv_round_trip_exhaustive() {
        for q in [q3(), z(5), RightQuasigroup::random(7, 3)] {
            let n = q.len();
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(q.op(q.ldiv(x, y), x), y);
                    assert_eq!(q.ldiv(x, q.op(y, x)), y);
                }
                assert_eq!(q.ldiv(0, x), x);
            }
        }
    }

    #[test]
    fn group_left_inverse_is_group_inverse() {
        let q = z(6);
        for x in 0..6 {
            assert_eq!(q.left_inverse(x), (6 - x) % 6);
        }
    }

    #[test]
    fn random_small_cases() {
        for seed in 0..5 {
            assert!(RightQuasigroup::random(1, seed).same_table(&RightQuasigroup::trivial()));
            assert!(RightQuasigroup::random(2, seed).same_table(&z(2)));
        }
        let a = RightQuasigroup::random(4, 42);
        let b = RightQuasigroup::random(4, 42);
        assert_eq!(a, b);
        assert!(RightQuasigroup::validate(&a.rows(), 0).is_ok());
    }

    #[test]
    fn isomorphism_cases() {
        let q = q3();
        assert_eq!(isomorphic(&q, &q), Some(vec![0, 1, 2]));
        assert_eq!(isomorphic(&z(3), &q), None);
        assert_eq!(isomorphic(&q, &z(3)), None);

        let r = RightQuasigroup::random(6, 11);
        let beta = Perm::from_images(vec![0, 4, 1, 5, 2, 3]).unwrap();
        let s = r.relabel(&beta).unwrap();
        let found = isomorphic(&r, &s).expect("relabeling is an isomorphism");
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(found[r.op(x, y)], s.op(found[x], found[y]));
            }
        }
    }

    #[test]
    fn relabel_rejects_moving_identity() {
        let beta = Perm::transposition(3, 0, 1).unwrap();
        assert!(q3().relabel(&beta).is_err());
    }

    #[test]
    fn file_round_trip_is_byte_exact() {
        let q = q3();
        let text = q.to_file().to_json();
        let back = RightQuasigroup::from_file(&TableFile::from_json(&text).unwrap()).unwrap();
        assert_eq!(back, q);
        assert_eq!(back.to_file().to_json(), text);
        assert_eq!(text, "{\"labels\":[\"0\",\"1\",\"2\"],\"identity\":0,\"table\":[[0,1,2],[1,2,1],[2,0,0]]}\n");
    }
}
