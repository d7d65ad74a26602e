//! Permutations of `{0, …, n-1}` and the finite groups they generate.
//!
//! Products are read left to right: `p.then(&q)` (or [`compose`]) is the
//! permutation `x ↦ q(p(x))`. Every formula in the extension module is
//! written against this convention, so nothing else in the crate composes
//! permutations by hand.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the size of a generated group (10!).
pub const DEFAULT_CLOSURE_CAP: usize = 3_628_800;

/// Default cap on the degree of a full point stabilizer, which has `(n-1)!` elements.
pub const DEFAULT_STABILIZER_CAP: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image sequence, rejecting anything that is not a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &y) in images.iter().enumerate() {
            if y >= n {
                return Err(Error::NotAPermutation(format!(
                    "image of {i} is {y}, outside 0..{n}"
                )));
            }
            if seen[y] {
                return Err(Error::NotAPermutation(format!("{y} appears twice")));
            }
            seen[y] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1], &[2, 3]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree {
                    return Err(Error::OutOfRange {
                        index: a,
                        size: degree,
                    });
                }
                if touched[a] {
                    return Err(Error::NotAPermutation(format!(
                        "point {a} appears in more than one cycle position"
                    )));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Ok(Perm::identity(degree));
        }
        Perm::from_cycles(degree, &[&[a, b]])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.images[x] == x
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &y) in self.images.iter().enumerate() {
            images[y] = i;
        }
        Perm { images }
    }

    /// Sorted cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        lengths
    }

    /// Disjoint cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// The product `p.q`: apply `p`, then `q`.
pub fn compose(p: &Perm, q: &Perm) -> Result<Perm> {
    p.then(q)
}

pub fn inverse(p: &Perm) -> Perm {
    p.inverse()
}

/// A finitely generated permutation group with its full element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    /// Sorted lexicographically by image sequence; the identity is always first.
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Perm::identity(degree)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.degree && self.elements.binary_search(p).is_ok()
    }

    /// Position of `p` in the canonical element order.
    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|p| other.contains(p))
    }
}

/// Closes `gens` under composition, with the default cap.
pub fn generate(degree: usize, gens: &[Perm]) -> Result<PermGroup> {
    generate_with_cap(degree, gens, DEFAULT_CLOSURE_CAP)
}

pub fn generate_with_cap(degree: usize, gens: &[Perm], cap: usize) -> Result<PermGroup> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    let mut distinct: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    distinct.sort();
    distinct.dedup();

    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    // A finite set closed under right multiplication by the generators is the generated group.
    while let Some(p) = queue.pop_front() {
        for g in &distinct {
            let next = p.then_unchecked(g);
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort();
    Ok(PermGroup {
        degree,
        generators: gens.to_vec(),
        elements,
    })
}

/// All permutations of `{0, …, n-1}` fixing `point`, with the default degree cap.
pub fn stabilizer_of_point(degree: usize, point: usize) -> Result<PermGroup> {
    stabilizer_of_point_with_cap(degree, point, DEFAULT_STABILIZER_CAP)
}

pub fn stabilizer_of_point_with_cap(degree: usize, point: usize, cap: usize) -> Result<PermGroup> {
    if point >= degree {
        return Err(Error::OutOfRange {
            index: point,
            size: degree,
        });
    }
    if degree > cap {
        return Err(Error::CapExceeded {
            what: "stabilizer degree",
            value: degree,
            cap,
        });
    }
    let others: Vec<usize> = (0..degree).filter(|&x| x != point).collect();
    let generators: Vec<Perm> = others
        .windows(2)
        .map(|w| Perm::transposition(degree, w[0], w[1]))
        .collect::<Result<_>>()?;

    // Lexicographic enumeration of arrangements of `others` yields sorted image sequences.
    let mut arrangement = others.clone();
    let mut elements = Vec::new();
    loop {
        let mut images = vec![point; degree];
        for (slot, &y) in others.iter().zip(&arrangement) {
            images[*slot] = y;
        }
        elements.push(Perm { images });
        if !next_permutation(&mut arrangement) {
            break;
        }
    }
    Ok(PermGroup {
        degree,
        generators,
        elements,
    })
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn equal_groups(a: &PermGroup, b: &PermGroup) -> bool {
    a.degree == b.degree && a.elements == b.elements
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[usize]) -> Perm {
        Perm::from_images(images.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
        assert!(Perm::from_cycles(3, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn compose_is_left_to_right() {
        let a = Perm::transposition(3, 0, 1).unwrap();
        let b = Perm::transposition(3, 1, 2).unwrap();
        let r = compose(&a, &b).unwrap();
        for x in 0..3 {
            assert_eq!(r.apply(x), b.apply(a.apply(x)));
        }
        // 0 -a-> 1 -b-> 2, 1 -a-> 0 -b-> 0, 2 -a-> 2 -b-> 1
        assert_eq!(r, p(&[2, 0, 1]));
    }

    #[test]
    fn compose_identity_and_inverse() {
        let q = p(&[3, 0, 4, 1, 2]);
        let id = Perm::identity(5);
        assert_eq!(compose(&id, &q).unwrap(), q);
        assert_eq!(compose(&q, &inverse(&q)).unwrap(), id);
        assert_eq!(compose(&inverse(&q), &q).unwrap(), id);
    }

    #[test]
    fn compose_degree_mismatch() {
        let err = compose(&Perm::identity(3), &Perm::identity(4)).unwrap_err();
        assert_eq!(err, Error::DegreeMismatch { left: 3, right: 4 });
    }

    #[test]
    fn inverse_of_identity_and_involution() {
        assert_eq!(Perm::identity(4).inverse(), Perm::identity(4));
        let t = Perm::transposition(6, 1, 4).unwrap();
        assert_eq!(t.inverse(), t);
    }

    #[test]
    fn generate_small_groups() {
        assert_eq!(generate(3, &[]).unwrap().order(), 1);
        let s3 = generate(
            3,
            &[
                Perm::transposition(3, 0, 1).unwrap(),
                Perm::transposition(3, 1, 2).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        let v = generate(4, &[Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()]).unwrap();
        assert_eq!(v.order(), 2);
    }

    #[test]
    fn generate_respects_cap() {
        let gens = [
            Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
            Perm::transposition(5, 0, 1).unwrap(),
        ];
        assert_eq!(
            generate_with_cap(5, &gens, 100).unwrap_err(),
            Error::GroupTooLarge { cap: 100 }
        );
        assert_eq!(generate_with_cap(5, &gens, 120).unwrap().order(), 120);
    }

    #[test]
    fn elements_sorted_identity_first() {
        let g = generate(4, &[Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()]).unwrap();
        assert!(g.elements()[0].is_identity());
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stabilizer_orders() {
        assert_eq!(stabilizer_of_point(1, 0).unwrap().order(), 1);
        assert_eq!(stabilizer_of_point(3, 0).unwrap().order(), 2);
        assert_eq!(stabilizer_of_point(5, 0).unwrap().order(), 24);
        let st = stabilizer_of_point(5, 2).unwrap();
        assert!(st.elements().iter().all(|p| p.fixes(2)));
        assert!(st.elements().windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(
            stabilizer_of_point(9, 0),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn stabilizer_matches_closure_of_its_generators() {
        let st = stabilizer_of_point(5, 3).unwrap();
        let closed = generate(5, st.generators()).unwrap();
        assert!(equal_groups(&st, &closed));
    }

    #[test]
    fn equal_groups_cases() {
        let t = PermGroup::trivial(3);
        let two = generate(3, &[Perm::transposition(3, 0, 1).unwrap()]).unwrap();
        assert!(equal_groups(&t, &t));
        assert!(!equal_groups(&t, &two));
        let a = generate(
            3,
            &[
                Perm::transposition(3, 0, 1).unwrap(),
                Perm::transposition(3, 1, 2).unwrap(),
            ],
        )
        .unwrap();
        let b = generate(
            3,
            &[
                Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
                Perm::transposition(3, 0, 2).unwrap(),
            ],
        )
        .unwrap();
        assert!(equal_groups(&a, &b));
    }

    #[test]
    fn display_cycles() {
        assert_eq!(Perm::identity(3).to_string(), "()");
        assert_eq!(p(&[1, 2, 0, 4, 3]).to_string(), "(0 1 2)(3 4)");
        assert_eq!(p(&[1, 2, 0, 4, 3]).cycle_type(), vec![2, 3]);
    }
}
