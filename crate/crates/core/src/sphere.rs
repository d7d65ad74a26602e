//! The reflection transversal of the point stabilizer `O(V)` in `O(n)` and
//! the right quasigroup it induces on the unit sphere `S^{n-1}`.
//!
//! Operators are applied to vectors on the left, and products of operators
//! are read left to right: `R_x = J · (2P_u − I)` means "apply `J`, then
//! `2P_u − I`", with `u = (e0 + x)/‖e0 + x‖`. So
//!
//! ```text
//! R_x(z) = (2P_u − I)(J(z)),        R_x(e0) = 2⟨e0,u⟩u − e0 = x,
//! ```
//!
//! and `R_{−e0} = −I`. The quasigroup is `x ∘ y = R_y(x)`, and its left
//! division undoes the two involutions in reverse order:
//! `χ(x, y) = J((2P_u − I)(y))`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::ReportLine;
use crate::scalar::{self, dot, Scalar};

/// `‖e0 + x‖` at or below this selects the `x = −e0` branch.
pub const BRANCH_TOLERANCE: f64 = 1e-9;
/// Inputs with `‖e0 + x‖` below this (but above the branch tolerance) are flagged ill-conditioned.
pub const ILL_CONDITIONED_BELOW: f64 = 1e-6;
/// Admissible `|‖v‖ − 1|` when constructing a [`UnitVector`].
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector<T> {
    coords: Vec<T>,
}

impl<T: Scalar> UnitVector<T> {
    /// Accepts coordinates within [`UNIT_TOLERANCE`] of unit norm and renormalizes them.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        let len = scalar::norm(&coords);
        if (len - T::one()).abs() > T::lit(UNIT_TOLERANCE) {
            return Err(Error::InvalidTable(format!(
                "vector norm {} is not 1",
                len.to_f64_lossy()
            )));
        }
        Ok(Self::renormalized(coords, len))
    }

    /// Scales any non-zero vector to unit norm.
    pub fn normalize(coords: Vec<T>) -> Result<Self> {
        let len = scalar::norm(&coords);
        if len <= T::lit(1e-12) {
            return Err(Error::NearZero {
                norm: len.to_f64_lossy(),
            });
        }
        Ok(Self::renormalized(coords, len))
    }

    fn renormalized(coords: Vec<T>, len: T) -> Self {
        UnitVector {
            coords: coords.into_iter().map(|c| c / len).collect(),
        }
    }

    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::OutOfRange { index: k, size: n });
        }
        let mut coords = vec![T::zero(); n];
        coords[k] = T::one();
        Ok(UnitVector { coords })
    }

    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Self {
        UnitVector {
            coords: scalar::sample_unit(rng, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn neg(&self) -> Self {
        UnitVector {
            coords: self.coords.iter().map(|&c| -c).collect(),
        }
    }

    pub fn distance(&self, other: &[T]) -> T {
        scalar::distance(&self.coords, other)
    }
}

/// An `n × n` orthogonal matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry<T> {
    n: usize,
    /// Row-major.
    matrix: Vec<T>,
}

impl<T: Scalar> Isometry<T> {
    pub fn identity(n: usize) -> Self {
        Self::scalar_multiple(n, T::one())
    }

    pub fn negative_identity(n: usize) -> Self {
        Self::scalar_multiple(n, -T::one())
    }

    fn scalar_multiple(n: usize, s: T) -> Self {
        let mut matrix = vec![T::zero(); n * n];
        for i in 0..n {
            matrix[i * n + i] = s;
        }
        Isometry { n, matrix }
    }

    /// The matrix of a linear map, read off from the images of the standard basis.
    pub fn from_linear_map(n: usize, f: impl Fn(&[T]) -> Vec<T>) -> Self {
        let mut matrix = vec![T::zero(); n * n];
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            for (i, v) in f(&e).into_iter().enumerate() {
                matrix[i * n + j] = v;
            }
        }
        Isometry { n, matrix }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.matrix[i * self.n + j]
    }

    pub fn apply(&self, z: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| dot(&self.matrix[i * self.n..(i + 1) * self.n], z))
            .collect()
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Isometry<T>) -> Isometry<T> {
        let n = self.n;
        let mut matrix = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                matrix[i * n + j] = (0..n).fold(T::zero(), |acc, k| acc + other.entry(i, k) * self.entry(k, j));
            }
        }
        Isometry { n, matrix }
    }

    /// `max |MᵀM − I|`.
    pub fn orthogonality_residual(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let mut s = (0..n).fold(T::zero(), |acc, k| acc + self.entry(k, i) * self.entry(k, j));
                if i == j {
                    s = s - T::one();
                }
                worst = worst.max(s.abs());
            }
        }
        worst
    }
}

/// `P_a(x) = ⟨x, â⟩ â`, the orthogonal projection onto the line through `a`.
pub fn proj<T: Scalar>(a: &[T], x: &[T]) -> Result<Vec<T>> {
    let len = scalar::norm(a);
    if len <= T::lit(1e-12) {
        return Err(Error::NearZero {
            norm: len.to_f64_lossy(),
        });
    }
    let c = dot(x, a) / (len * len);
    Ok(a.iter().map(|&ai| c * ai).collect())
}

/// `J(x) = 2⟨x, e0⟩e0 − x`.
pub fn j_map<T: Scalar>(x: &[T], e0: &UnitVector<T>) -> Vec<T> {
    reflect_through(e0.coords(), x)
}

/// `(2P_u − I)(z) = 2⟨z, u⟩u − z` for a unit vector `u`.
pub fn reflect_through<T: Scalar>(u: &[T], z: &[T]) -> Vec<T> {
    let c = T::lit(2.0) * dot(z, u);
    u.iter().zip(z).map(|(&ui, &zi)| c * ui - zi).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Regular,
    /// Close enough to `−e0` that `u` loses precision.
    IllConditioned,
    /// Treated as `x = −e0`.
    Antipode,
}

/// The sphere quasigroup for a fixed base point `e0`.
#[derive(Clone, Debug)]
pub struct SphereTransversal<T> {
    e0: UnitVector<T>,
    branch_tolerance: T,
}

impl<T: Scalar> SphereTransversal<T> {
    /// Base point `e0` = first standard basis vector of `R^n`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { n, min: 1 });
        }
        Ok(Self::with_base_point(UnitVector::basis(n, 0)?))
    }

    pub fn with_base_point(e0: UnitVector<T>) -> Self {
        SphereTransversal {
            e0,
            branch_tolerance: T::lit(BRANCH_TOLERANCE),
        }
    }

    pub fn with_branch_tolerance(mut self, tol: T) -> Self {
        self.branch_tolerance = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.e0.dim()
    }

    pub fn e0(&self) -> &UnitVector<T> {
        &self.e0
    }

    pub fn classify(&self, x: &UnitVector<T>) -> Branch {
        let gap = self.gap(x);
        if gap <= self.branch_tolerance {
            Branch::Antipode
        } else if gap < T::lit(ILL_CONDITIONED_BELOW) {
            Branch::IllConditioned
        } else {
            Branch::Regular
        }
    }

    /// `e0 + x`. Where `⟨x, e0⟩ < −1/2` the `e0` component `1 + ⟨x, e0⟩` is
    /// rebuilt from the tangential part `x⊥` as `p / (1 + √(1 − p))`, `p = ‖x⊥‖²`.
    fn shifted(&self, x: &UnitVector<T>) -> Vec<T> {
        let e0 = self.e0.coords();
        let c = dot(e0, x.coords());
        if c >= T::lit(-0.5) {
            return e0.iter().zip(x.coords()).map(|(&a, &b)| a + b).collect();
        }
        let perp: Vec<T> = e0.iter().zip(x.coords()).map(|(&a, &b)| b - c * a).collect();
        let p = dot(&perp, &perp).min(T::one());
        let along = p / (T::one() + (T::one() - p).sqrt());
        e0.iter().zip(&perp).map(|(&a, &b)| b + along * a).collect()
    }

    /// `‖e0 + x‖`.
    fn gap(&self, x: &UnitVector<T>) -> T {
        scalar::norm(&self.shifted(x))
    }

    /// `u = (e0 + x)/‖e0 + x‖`, or `None` on the antipodal branch.
    pub(crate) fn axis(&self, x: &UnitVector<T>) -> Option<Vec<T>> {
        let s = self.shifted(x);
        let len = scalar::norm(&s);
        (len > self.branch_tolerance).then(|| s.into_iter().map(|c| c / len).collect())
    }

    pub fn j_map(&self, x: &[T]) -> Vec<T> {
        j_map(x, &self.e0)
    }

    /// `R_x(z)` without materializing the matrix.
    pub fn apply_section(&self, x: &UnitVector<T>, z: &[T]) -> Vec<T> {
        match self.axis(x) {
            Some(u) => reflect_through(&u, &self.j_map(z)),
            None => z.iter().map(|&c| -c).collect(),
        }
    }

    /// The section `R_x` as a matrix; exactly `−I` on the antipodal branch.
    pub fn r_map(&self, x: &UnitVector<T>) -> Isometry<T> {
        let n = self.dim();
        match self.axis(x) {
            Some(u) => Isometry::from_linear_map(n, |z| reflect_through(&u, &self.j_map(z))),
            None => Isometry::negative_identity(n),
        }
    }

    /// `x ∘ y` before the final renormalization.
    pub fn circ_raw(&self, x: &UnitVector<T>, y: &UnitVector<T>) -> Vec<T> {
        self.apply_section(y, x.coords())
    }

    pub fn circ(&self, x: &UnitVector<T>, y: &UnitVector<T>) -> UnitVector<T> {
        UnitVector::normalize(self.circ_raw(x, y)).expect("isometries preserve unit norm")
    }

    /// The unique `z` with `z ∘ x = y`.
    pub fn chi(&self, x: &UnitVector<T>, y: &UnitVector<T>) -> UnitVector<T> {
        let raw = match self.axis(x) {
            Some(u) => self.j_map(&reflect_through(&u, y.coords())),
            None => y.neg().coords,
        };
        UnitVector::normalize(raw).expect("isometries preserve unit norm")
    }

    /// `‖R_y(R_x(e0)) − x∘y‖`, with the left side computed through the matrices.
    pub fn coset_consistency(&self, x: &UnitVector<T>, y: &UnitVector<T>) -> T {
        let through_matrices = self.r_map(y).apply(&self.r_map(x).apply(self.e0.coords()));
        self.circ(x, y).distance(&through_matrices)
    }
}

/// One row of the discontinuity certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscontinuityPoint {
    pub epsilon: f64,
    /// `‖R_{x_ε}(e2) − R_{−e0}(e2)‖`.
    pub distance: f64,
    /// `‖R_{x_ε}(e0) − R_{−e0}(e0)‖`, which tends to 0.
    pub base_point_distance: f64,
    pub branch: Branch,
}

/// Evaluates the section along `x_ε = −cos(ε)e0 + sin(ε)e1` against `R_{−e0}`, probing with `e2`.
pub fn discontinuity_witness<T: Scalar>(n: usize, epsilons: &[f64]) -> Result<Vec<DiscontinuityPoint>> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { n, min: 3 });
    }
    let sphere = SphereTransversal::<T>::standard(n)?;
    let e0 = UnitVector::<T>::basis(n, 0)?;
    let e2 = UnitVector::<T>::basis(n, 2)?;
    let antipode = Isometry::<T>::negative_identity(n);
    epsilons
        .iter()
        .map(|&eps| {
            let mut coords = vec![T::zero(); n];
            coords[0] = -T::lit(eps.cos());
            coords[1] = T::lit(eps.sin());
            let x = UnitVector::normalize(coords)?;
            let r = sphere.r_map(&x);
            Ok(DiscontinuityPoint {
                epsilon: eps,
                distance: scalar::distance(&r.apply(e2.coords()), &antipode.apply(e2.coords()))
                    .to_f64_lossy(),
                base_point_distance: scalar::distance(
                    &r.apply(e0.coords()),
                    &antipode.apply(e0.coords()),
                )
                .to_f64_lossy(),
                branch: sphere.classify(&x),
            })
        })
        .collect()
}

/// Empirical local modulus of `∘` at sampled pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub delta: f64,
    pub margin: f64,
    /// Pairs measured (right argument at least `margin` from `−e0`).
    pub measured: usize,
    /// Pairs skipped because the right argument is within `margin` of `−e0`.
    pub excluded: usize,
    /// Largest `‖Δ(x∘y)‖ / ‖(Δx, Δy)‖` over measured pairs; `None` if nothing was measured.
    pub max_modulus: Option<f64>,
    /// Largest `‖x ∘ y_δ − x ∘ (−e0)‖` with `y_δ` a `δ`-perturbation of `−e0`.
    pub antipode_jump: Option<f64>,
}

pub fn continuity_probe<T: Scalar>(
    n: usize,
    samples: usize,
    delta: f64,
    margin: f64,
    seed: u64,
) -> Result<ContinuityReport> {
    if delta <= 0.0 {
        return Err(Error::Parse(format!("perturbation must be positive, got {delta}")));
    }
    let sphere = SphereTransversal::<T>::standard(n)?;
    let minus_e0 = sphere.e0().neg();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ContinuityReport {
        n,
        samples,
        seed,
        delta,
        margin,
        measured: 0,
        excluded: 0,
        max_modulus: None,
        antipode_jump: None,
    };
    let perturb = |v: &UnitVector<T>, rng: &mut ChaCha8Rng| {
        let d: Vec<T> = scalar::sample_direction(rng, n, delta);
        UnitVector::normalize(v.coords().iter().zip(&d).map(|(&a, &b)| a + b).collect())
    };
    for _ in 0..samples {
        let x = UnitVector::<T>::random(n, &mut rng);
        let y = UnitVector::<T>::random(n, &mut rng);
        let x2 = perturb(&x, &mut rng)?;
        let y2 = perturb(&y, &mut rng)?;
        if y.distance(minus_e0.coords()) < T::lit(margin) {
            report.excluded += 1;
            let jump = sphere
                .circ(&x, &y2)
                .distance(sphere.circ(&x, &minus_e0).coords())
                .to_f64_lossy();
            report.antipode_jump = Some(report.antipode_jump.map_or(jump, |j: f64| j.max(jump)));
            continue;
        }
        report.measured += 1;
        let moved = sphere.circ(&x2, &y2).distance(sphere.circ(&x, &y).coords());
        let dx = x2.distance(x.coords());
        let dy = y2.distance(y.coords());
        let step = (dx * dx + dy * dy).sqrt();
        if step > T::zero() {
            let m = (moved / step).to_f64_lossy();
            report.max_modulus = Some(report.max_modulus.map_or(m, |w: f64| w.max(m)));
        }
    }
    Ok(report)
}

/// A sampled triple whose associator exceeds the threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct AssociatorWitness<T> {
    pub x: UnitVector<T>,
    pub y: UnitVector<T>,
    pub z: UnitVector<T>,
    /// `‖(x∘y)∘z − x∘(y∘z)‖`.
    pub residual: f64,
}

pub const ASSOCIATOR_THRESHOLD: f64 = 0.1;

/// Searches for `‖(x∘y)∘z − x∘(y∘z)‖ > 0.1`: exhaustively on `S⁰`, by sampling otherwise.
pub fn nonassociativity_witness<T: Scalar>(
    n: usize,
    seed: u64,
    budget: usize,
) -> Result<Option<AssociatorWitness<T>>> {
    let sphere = SphereTransversal::<T>::standard(n)?;
    let associator = |x: &UnitVector<T>, y: &UnitVector<T>, z: &UnitVector<T>| {
        let left = sphere.circ(&sphere.circ(x, y), z);
        let right = sphere.circ(x, &sphere.circ(y, z));
        left.distance(right.coords()).to_f64_lossy()
    };
    let check = |x: UnitVector<T>, y: UnitVector<T>, z: UnitVector<T>| {
        let residual = associator(&x, &y, &z);
        (residual > ASSOCIATOR_THRESHOLD).then_some(AssociatorWitness { x, y, z, residual })
    };
    if n == 1 {
        let points = [sphere.e0().clone(), sphere.e0().neg()];
        for x in &points {
            for y in &points {
                for z in &points {
                    if let Some(w) = check(x.clone(), y.clone(), z.clone()) {
                        return Ok(Some(w));
                    }
                }
            }
        }
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let x = UnitVector::random(n, &mut rng);
        let y = UnitVector::random(n, &mut rng);
        let z = UnitVector::random(n, &mut rng);
        if let Some(w) = check(x, y, z) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Tolerances of the sphere suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereTolerances {
    /// Unit norm, identities, section property, involutions.
    pub tight: f64,
    /// Left-division round trips, coset consistency, orthogonality.
    pub loose: f64,
    /// Discontinuity distance from 2.
    pub jump: f64,
}

impl Default for SphereTolerances {
    fn default() -> Self {
        SphereTolerances {
            tight: 1e-12,
            loose: 1e-10,
            jump: 1e-3,
        }
    }
}

pub const DISCONTINUITY_EPSILONS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// Every sampled check on `S^{n-1}`, one report line each.
pub fn sphere_suite<T: Scalar>(
    n: usize,
    samples: usize,
    seed: u64,
    tol: SphereTolerances,
) -> Result<Vec<ReportLine>> {
    let sphere = SphereTransversal::<T>::standard(n)?;
    let e0 = sphere.e0().clone();
    let minus_e0 = e0.neg();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = |v: T| v.to_f64_lossy();

    let mut unit = 0f64;
    let mut right_id = 0f64;
    let mut left_id = 0f64;
    let mut chi = 0f64;
    let mut section = f(minus_e0.distance(&sphere.apply_section(&minus_e0, e0.coords())));
    let mut coset = 0f64;
    let mut ortho = 0f64;
    let mut involution = 0f64;
    let mut at_branch = 0f64;
    let mut ill = 0usize;
    for _ in 0..samples {
        let x = UnitVector::<T>::random(n, &mut rng);
        let y = UnitVector::<T>::random(n, &mut rng);
        let z = UnitVector::<T>::random(n, &mut rng);
        if sphere.classify(&y) != Branch::Regular {
            ill += 1;
        }
        unit = unit.max(f((scalar::norm(&sphere.circ_raw(&x, &y)) - T::one()).abs()));
        right_id = right_id.max(f(sphere.circ(&x, &e0).distance(x.coords())));
        left_id = left_id.max(f(sphere.circ(&e0, &y).distance(y.coords())));
        chi = chi
            .max(f(sphere.circ(&sphere.chi(&x, &y), &x).distance(y.coords())))
            .max(f(sphere.chi(&x, &sphere.circ(&z, &x)).distance(z.coords())));
        let r = sphere.r_map(&x);
        section = section.max(f(x.distance(&r.apply(e0.coords()))));
        ortho = ortho.max(f(r.orthogonality_residual()));
        coset = coset.max(f(sphere.coset_consistency(&x, &y)));
        let jj = sphere.j_map(&sphere.j_map(z.coords()));
        involution = involution.max(f(z.distance(&jj)));
        if let Some(u) = sphere.axis(&y) {
            let rr = reflect_through(&u, &reflect_through(&u, z.coords()));
            involution = involution.max(f(z.distance(&rr)));
        }
        at_branch = at_branch
            .max(f(sphere.circ(&x, &minus_e0).distance(x.neg().coords())))
            .max(f(sphere.coset_consistency(&x, &minus_e0)));
    }

    let branch_exact = sphere.r_map(&minus_e0) == Isometry::negative_identity(n);
    let mut lines = vec![
        ReportLine::residual("circ_unit_norm", n, seed, samples, unit, tol.tight),
        ReportLine::residual("right_identity", n, seed, samples, right_id, tol.tight),
        ReportLine::residual("left_identity", n, seed, samples, left_id, tol.tight),
        ReportLine::residual("chi_roundtrip", n, seed, samples, chi, tol.loose),
        ReportLine::residual("section_property", n, seed, samples, section, tol.tight),
        ReportLine::residual("coset_consistency", n, seed, samples, coset, tol.loose),
        ReportLine::residual("r_map_orthogonality", n, seed, samples, ortho, tol.loose),
        ReportLine::residual("involutions", n, seed, samples, involution, tol.tight),
        ReportLine::residual("antipode_branch", n, seed, samples, at_branch, tol.loose),
        ReportLine::flag("antipode_section_is_negative_identity", n, seed, branch_exact),
        ReportLine::flag("ill_conditioned_inputs", n, seed, true).with("count", ill),
    ];

    if n >= 3 {
        let points = discontinuity_witness::<T>(n, &DISCONTINUITY_EPSILONS)?;
        let worst = points
            .iter()
            .filter(|p| p.epsilon <= 1e-4)
            .map(|p| (p.distance - 2.0).abs())
            .fold(0.0, f64::max);
        lines.push(
            ReportLine::residual("discontinuity_certificate", n, seed, points.len(), worst, tol.jump)
                .with("points", &points),
        );
        let witness = nonassociativity_witness::<T>(n, seed, 100)?;
        lines.push(
            ReportLine::flag("nonassociativity_witness", n, seed, witness.is_some())
                .with("residual", witness.map(|w| w.residual)),
        );
    } else {
        lines.push(
            ReportLine::flag("discontinuity_certificate", n, seed, true)
                .with("skipped", "needs n >= 3"),
        );
    }

    let probe = continuity_probe::<T>(n, samples.min(1000), 1e-6, 0.1, seed)?;
    lines.push(
        ReportLine::flag(
            "continuity_probe",
            n,
            seed,
            probe.max_modulus.is_none_or(f64::is_finite),
        )
        .with("probe", &probe),
    );
    Ok(lines)
}
