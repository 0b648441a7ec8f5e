//! Numerical exposedness tests for positive maps.
//!
//! A block-positive W spans an exposed ray when the only block-positive
//! operators vanishing on every product state of its dual face are the
//! positive multiples of W. The pipeline is:
//!
//! 1. sample product pairs (x, y) with ⟨y|φ(P_x)|y⟩ = 0 ([`dual_face_samples`]);
//! 2. write the vanishing conditions as linear rows over Hermitian coordinates
//!    ([`face_constraint_matrix`]), optionally with first-order rows
//!    ([`stationarity_constraint_matrix`]): a block-positive operator that
//!    vanishes at x̄⊗y has that vector as a minimizer, so W(x̄⊗y) is orthogonal
//!    to every product-vector tangent direction;
//! 3. take the null space ([`double_dual_nullspace`]);
//! 4. if the null space is larger than the ray, search it for a
//!    block-positive element off the ray ([`cone_search_off_ray`]).

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{AntisymmetricUnitary, MapDescriptor};
use crate::config::{ExposednessConfig, SeeSawConfig, Tolerances};
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    basis_vector, conj_vec, eigh, frobenius, kron_vec, pairing_row, projector, random_unit_vector,
    sesquilinear_rows, svd_nullspace, CMatrix, CVector, HermitianParamVector, NullSpace, RMatrix,
};
use crate::maps::{same_ray, LinearMatrixMap};
use crate::par;
use crate::positivity::{
    block_positivity_min, block_positivity_min_with_starts, classify, seesaw_from, task_rng,
    BlockPositivityReport, BlockPositivityVerdict, ProductPair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    Analytic,
    Numeric,
}

/// Product pairs on the dual face of a map.
#[derive(Debug, Clone, PartialEq)]
pub struct DualFaceSample {
    pub pairs: Vec<ProductPair>,
    pub source: SampleSource,
    pub dim_in: usize,
    pub dim_out: usize,
}

impl DualFaceSample {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Draws `count` product pairs with |⟨y|φ(P_x)|y⟩| ≤ zero_tol.
///
/// Known families use their analytic zero sets:
/// transposition y ⊥ x̄, reduction y = x, Breuer-Hall and Robertson
/// y ∈ span{x, U x̄} (x and U x̄ are orthogonal), Ad{V} y ⊥ Vx, CoAd{V} y ⊥ V x̄.
/// Other maps use zeros harvested from see-saw runs.
pub fn dual_face_samples<R: Rng + ?Sized>(
    descriptor: &MapDescriptor,
    count: usize,
    config: &ExposednessConfig,
    rng: &mut R,
) -> Result<DualFaceSample> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let map = descriptor.build()?;
    let (n, m) = (map.dim_in(), map.dim_out());
    let generator: Option<PairGenerator<'_>> = match descriptor {
        MapDescriptor::Transposition { n } if *n >= 2 => Some(Box::new(move |_, r| {
            let x = random_unit_vector(*n, r);
            let y = random_orthogonal_to(&conj_vec(&x), r);
            ProductPair { x, y }
        })),
        MapDescriptor::Reduction { n } => Some(Box::new(move |_, r| {
            let x = random_unit_vector(*n, r);
            ProductPair { x: x.clone(), y: x }
        })),
        MapDescriptor::BreuerHall { u } => Some(breuer_hall_generator(u.clone())),
        MapDescriptor::Robertson => Some(breuer_hall_generator(
            AntisymmetricUnitary::canonical(4).expect("even dimension"),
        )),
        MapDescriptor::Ad { v } if v.nrows() >= 2 => {
            let v = v.clone();
            Some(Box::new(move |_, r| {
                let x = random_unit_vector(v.ncols(), r);
                let y = random_orthogonal_to(&(&v * &x), r);
                ProductPair { x, y }
            }))
        }
        MapDescriptor::CoAd { v } if v.nrows() >= 2 => {
            let v = v.clone();
            Some(Box::new(move |_, r| {
                let x = random_unit_vector(v.ncols(), r);
                let y = random_orthogonal_to(&(&v * conj_vec(&x)), r);
                ProductPair { x, y }
            }))
        }
        _ => None,
    };
    let base: u64 = rng.random();
    let tol = &config.tolerances;
    let Some(generator) = generator else {
        return harvest_zeros(&map, count, config, base);
    };
    let candidates = par::map_indexed(count, config.seesaw.execution, |k| {
        generator(k, &mut task_rng(base, k))
    });
    let mut pairs = Vec::with_capacity(count);
    for pair in candidates {
        if pair.pairing(map.choi(), tol)?.abs() <= config.zero_tol {
            pairs.push(pair);
        }
    }
    if pairs.len() < count {
        return Err(Error::InsufficientZeros {
            found: pairs.len(),
            requested: count,
        });
    }
    Ok(DualFaceSample {
        pairs,
        source: SampleSource::Analytic,
        dim_in: n,
        dim_out: m,
    })
}

type PairGenerator<'a> =
    Box<dyn Fn(usize, &mut rand_chacha::ChaCha8Rng) -> ProductPair + Sync + 'a>;

fn breuer_hall_generator(u: AntisymmetricUnitary) -> PairGenerator<'static> {
    Box::new(move |k, r| {
        let x = random_unit_vector(u.dim(), r);
        let ux = (u.matrix() * conj_vec(&x)).normalize();
        let y = match k % 3 {
            0 => x.clone(),
            1 => ux,
            _ => {
                let c = random_unit_vector(2, r);
                &x * c[0] + ux * c[1]
            }
        };
        ProductPair { x, y }
    })
}

/// Random unit vector orthogonal to `v` (any unit vector when v = 0).
fn random_orthogonal_to<R: Rng + ?Sized>(v: &CVector, rng: &mut R) -> CVector {
    let norm = v.norm();
    loop {
        let mut y = random_unit_vector(v.len(), rng);
        if norm > 0.0 {
            let unit = v / Complex64::from(norm);
            y -= &unit * unit.dotc(&y);
        }
        let ny = y.norm();
        if ny > 1e-6 {
            return y / Complex64::from(ny);
        }
    }
}

/// Zeros of the pairing found by see-saw runs that end at |value| ≤ zero_tol,
/// polished with extra sweeps at a tighter stationarity threshold.
fn harvest_zeros(
    map: &LinearMatrixMap,
    count: usize,
    config: &ExposednessConfig,
    base: u64,
) -> Result<DualFaceSample> {
    let (n, m) = (map.dim_in(), map.dim_out());
    let w = map.choi();
    let attempts = (4 * count).max(64);
    let polish = SeeSawConfig {
        max_iters: 50,
        stationarity: 0.0,
        ..config.seesaw
    };
    let tol = &config.tolerances;
    let mut pairs = Vec::with_capacity(count);
    let batch = count.max(16);
    let mut start = 0;
    while start < attempts && pairs.len() < count {
        let end = (start + batch).min(attempts);
        let found = par::map_indexed(end - start, config.seesaw.execution, |k| {
            let mut r = task_rng(base, start + k);
            let x0 = random_unit_vector(n, &mut r);
            let run = seesaw_from(w, n, m, x0, &config.seesaw, false)?;
            if run.value.abs() > 1e3 * config.zero_tol {
                return Ok(None);
            }
            let run = seesaw_from(w, n, m, run.x, &polish, false)?;
            let pair = ProductPair {
                x: conj_vec(&run.x).normalize(),
                y: run.z.normalize(),
            };
            let value = pair.pairing(w, tol)?;
            Ok((value.abs() <= config.zero_tol).then_some(pair))
        });
        for pair in found {
            if let Some(pair) = pair? {
                if pairs.len() < count {
                    pairs.push(pair);
                }
            }
        }
        start = end;
    }
    if pairs.len() < count {
        return Err(Error::InsufficientZeros {
            found: pairs.len(),
            requested: count,
        });
    }
    Ok(DualFaceSample {
        pairs,
        source: SampleSource::Numeric,
        dim_in: n,
        dim_out: m,
    })
}

/// One row per pair: row · coords(W) = ⟨x̄⊗y|W|x̄⊗y⟩ = ⟨y|φ_W(P_x)|y⟩.
pub fn face_constraint_matrix(samples: &DualFaceSample) -> Result<RMatrix> {
    let d = samples.dim_in * samples.dim_out;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let mut out = RMatrix::zeros(samples.len(), d * d);
    for (r, pair) in samples.pairs.iter().enumerate() {
        check_pair_dims(pair, samples)?;
        let row = pairing_row(&pair.witness_vector());
        out.row_mut(r).copy_from_slice(&row);
    }
    Ok(out)
}

fn check_pair_dims(pair: &ProductPair, samples: &DualFaceSample) -> Result<()> {
    if pair.x.len() != samples.dim_in || pair.y.len() != samples.dim_out {
        return Err(dim_mismatch(
            format!("({}, {})", samples.dim_in, samples.dim_out),
            format!("({}, {})", pair.x.len(), pair.y.len()),
        ));
    }
    Ok(())
}

/// First-order rows: for v = x̄⊗y, the real and imaginary parts of
/// ⟨x̄⊗e_b|W|v⟩ for every b and ⟨e_a⊗y|W|v⟩ for every a.
///
/// Every block-positive W vanishing at v satisfies them, because v then
/// minimizes the pairing over product vectors.
pub fn stationarity_constraint_matrix(samples: &DualFaceSample) -> Result<RMatrix> {
    let (n, m) = (samples.dim_in, samples.dim_out);
    let d = n * m;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let per_pair = 2 * (n + m);
    let mut out = RMatrix::zeros(samples.len() * per_pair, d * d);
    let mut r = 0;
    for pair in &samples.pairs {
        check_pair_dims(pair, samples)?;
        let u = conj_vec(&pair.x);
        let v = pair.witness_vector();
        let directions = (0..m)
            .map(|b| kron_vec(&u, &basis_vector(m, b)))
            .chain((0..n).map(|a| kron_vec(&basis_vector(n, a), &pair.y)));
        for t in directions {
            let (re, im) = sesquilinear_rows(&t, &v);
            out.row_mut(r).copy_from_slice(&re);
            out.row_mut(r + 1).copy_from_slice(&im);
            r += 2;
        }
    }
    Ok(out)
}

fn constraint_system(samples: &DualFaceSample, first_order: bool) -> Result<RMatrix> {
    let face = face_constraint_matrix(samples)?;
    if !first_order {
        return Ok(face);
    }
    let stat = stationarity_constraint_matrix(samples)?;
    let mut out = RMatrix::zeros(face.nrows() + stat.nrows(), face.ncols());
    out.rows_mut(0, face.nrows()).copy_from(&face);
    out.rows_mut(face.nrows(), stat.nrows()).copy_from(&stat);
    Ok(out)
}

/// Linear span of the operators vanishing on the sampled dual face.
#[derive(Debug, Clone)]
pub struct DoubleDual {
    pub dim: usize,
    /// Orthonormal basis in Hermitian coordinates (columns).
    pub basis: RMatrix,
    pub samples_used: usize,
    pub rank: usize,
    pub sigma_max: f64,
    /// Smallest singular value counted in the rank, relative to σ_max.
    pub smallest_kept: f64,
    /// Largest discarded singular value, relative to σ_max.
    pub largest_dropped: f64,
    /// ‖M ŵ‖ for the map's own normalized coordinates ŵ.
    pub self_residual: f64,
    pub source: SampleSource,
    /// The pairs behind the final system.
    pub samples: DualFaceSample,
}

impl DoubleDual {
    pub fn hermitian_basis(&self) -> Vec<CMatrix> {
        let d = (self.basis.nrows() as f64).sqrt().round() as usize;
        self.basis
            .column_iter()
            .map(|c| {
                HermitianParamVector {
                    dim: d,
                    coords: c.iter().copied().collect(),
                }
                .to_hermitian()
            })
            .collect()
    }
}

/// Oversampling rule: 2·(nm)² pairs.
pub fn default_sample_count(n: usize, m: usize) -> usize {
    2 * (n * m).pow(2)
}

/// Null space of the constraint system at `sample_count` pairs, re-checked
/// at 2·`sample_count` pairs. Different dimensions raise `UnstableDimension`.
pub fn double_dual_nullspace<R: Rng + ?Sized>(
    descriptor: &MapDescriptor,
    sample_count: usize,
    config: &ExposednessConfig,
    rng: &mut R,
) -> Result<DoubleDual> {
    let map = descriptor.build()?;
    let (n, m) = (map.dim_in(), map.dim_out());
    let minimum = default_sample_count(n, m);
    if sample_count < minimum {
        return Err(Error::InvalidArgument(format!(
            "sample_count {sample_count} is below the oversampling minimum {minimum}"
        )));
    }
    let samples = dual_face_samples(descriptor, 2 * sample_count, config, rng)?;
    let first_half = DualFaceSample {
        pairs: samples.pairs[..sample_count].to_vec(),
        ..samples.clone()
    };
    let system_half = constraint_system(&first_half, config.first_order)?;
    let coarse = svd_nullspace(&system_half, config.rel_tol)?;
    drop(system_half);
    let system = constraint_system(&samples, config.first_order)?;
    let fine = svd_nullspace(&system, config.rel_tol)?;
    if coarse.dim() != fine.dim() {
        return Err(Error::UnstableDimension {
            first: coarse.dim(),
            first_samples: sample_count,
            second: fine.dim(),
            second_samples: 2 * sample_count,
        });
    }
    let own = HermitianParamVector::from_hermitian_unchecked(map.choi());
    let own_norm = own.norm().max(f64::MIN_POSITIVE);
    let own_vec =
        nalgebra::DVector::from_iterator(own.coords.len(), own.coords.iter().map(|c| c / own_norm));
    let self_residual = (&system * own_vec).norm();
    if self_residual > 10.0 * config.rel_tol * fine.sigma_max() {
        return Err(Error::ConvergenceFailure(format!(
            "sampled zeros too inaccurate: the map's own Choi matrix leaves residual {self_residual:e} \
             against σ_max {:e}",
            fine.sigma_max()
        )));
    }
    Ok(summarize(fine, self_residual, samples))
}

fn summarize(ns: NullSpace, self_residual: f64, samples: DualFaceSample) -> DoubleDual {
    let sigma_max = ns.sigma_max();
    let rel = |s: f64| if sigma_max > 0.0 { s / sigma_max } else { 0.0 };
    let smallest_kept = ns
        .rank
        .checked_sub(1)
        .map(|k| rel(ns.singular_values[k]))
        .unwrap_or(0.0);
    let largest_dropped = ns
        .singular_values
        .get(ns.rank)
        .map(|&s| rel(s))
        .unwrap_or(0.0);
    DoubleDual {
        dim: ns.dim(),
        rank: ns.rank,
        basis: ns.basis,
        samples_used: samples.len(),
        sigma_max,
        smallest_kept,
        largest_dropped,
        self_residual,
        source: samples.source,
        samples,
    }
}

/// A block-positive operator in the double dual that is not on the map's ray.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// Unit Frobenius norm.
    pub choi: CMatrix,
    pub evidence: BlockPositivityReport,
    /// Distance between the normalized counterexample and the normalized map.
    pub ray_distance: f64,
    /// max |row · coords| over the constraint system.
    pub constraint_residual: f64,
    pub candidate_index: usize,
}

/// Searches the null space for a block-positive element off the ray of `map`.
///
/// Candidates are W = s·Φ + D with Φ the map's normalized direction and D a
/// unit vector of the null space orthogonal to Φ. Each candidate starts from a
/// random D and climbs the minimal product pairing by supergradient steps
/// (Polyak step size towards the target value 0), the see-saw argmin serving
/// as the cutting direction. The lowest-index success is returned.
pub fn cone_search_off_ray<R: Rng + ?Sized>(
    map: &LinearMatrixMap,
    double_dual: &DoubleDual,
    config: &ExposednessConfig,
    rng: &mut R,
) -> Result<Option<Counterexample>> {
    let base: u64 = rng.random();
    if double_dual.dim < 2 {
        return Ok(None);
    }
    let (n, m) = (map.dim_in(), map.dim_out());
    let d = n * m;
    let own = HermitianParamVector::from_hermitian_unchecked(map.choi());
    let own = nalgebra::DVector::from_vec(own.coords);
    let own_dir = own.normalize();
    let basis = &double_dual.basis;
    // Φ: the map's direction projected into the null space
    let phi = basis * (basis.transpose() * &own_dir);
    if phi.norm() < 0.5 {
        return Err(Error::InvalidArgument(
            "map does not lie in the computed null space".into(),
        ));
    }
    let phi = phi.normalize();
    let deflated = basis - &phi * (phi.transpose() * basis);
    let complement = orthonormal_columns(&deflated)?;
    if complement.ncols() == 0 {
        return Ok(None);
    }
    let to_matrix = |c: nalgebra::DVectorView<f64>| {
        HermitianParamVector {
            dim: d,
            coords: c.iter().copied().collect(),
        }
        .to_hermitian()
    };
    let phi_h = to_matrix(phi.column(0));
    let dirs: Vec<CMatrix> = complement.column_iter().map(to_matrix).collect();
    let system = constraint_system(&double_dual.samples, config.first_order)?;

    let light = SeeSawConfig {
        restarts: 4,
        max_iters: 200,
        execution: crate::config::Execution::Sequential,
        ..config.seesaw
    };
    let search = |index: usize| -> Option<Counterexample> {
        let mut r = task_rng(base, index);
        let k = dirs.len();
        let mut coef =
            nalgebra::DVector::from_fn(k, |_, _| r.sample::<f64, _>(rand_distr::StandardNormal));
        coef /= coef.norm();
        let mut weight = 1.0_f64;
        let mut starts: Vec<CVector> = Vec::new();
        let mut best = f64::NEG_INFINITY;
        let mut stalled = 0;
        for _ in 0..config.ascent_steps {
            let scale = (1.0 + weight * weight).sqrt();
            let mut w = &phi_h * Complex64::from(weight);
            for (c, h) in coef.iter().zip(&dirs) {
                w += h * Complex64::from(*c);
            }
            w /= Complex64::from(scale);
            let report =
                block_positivity_min_with_starts(&w, n, m, &light, &starts, &mut r).ok()?;
            if report.min_value >= -config.seesaw.tol {
                if let Some(found) = validate(&w, map, &system, config, &mut r, index) {
                    return Some(found);
                }
            }
            let value = report.min_value;
            if value > best + 1e-3 * best.abs() {
                best = value;
                stalled = 0;
            } else {
                stalled += 1;
                if stalled >= 15 {
                    return None;
                }
            }
            let v = report.argmin.witness_vector();
            starts.push(conj_vec(&report.argmin.x));
            if starts.len() > 4 {
                starts.remove(0);
            }
            // supergradient of the pairing at v in (weight, coef) coordinates
            let g_weight = crate::linalg::expectation(&phi_h, &v).re;
            let g_coef = nalgebra::DVector::from_iterator(
                k,
                dirs.iter().map(|h| crate::linalg::expectation(h, &v).re),
            );
            let g_norm_sq = g_weight * g_weight + g_coef.norm_squared();
            if g_norm_sq == 0.0 {
                return None;
            }
            // Polyak step on the unit-normalized point (weight, coef)/scale
            let step = (-value).max(0.0) / g_norm_sq;
            let mut new_weight = weight / scale + step * g_weight;
            let new_coef = &coef / scale + &g_coef * step;
            new_weight = new_weight.max(0.0);
            let c_norm = new_coef.norm();
            if c_norm == 0.0 {
                return None;
            }
            coef = new_coef / c_norm;
            weight = (new_weight / c_norm).min(config.max_ray_weight);
        }
        None
    };
    Ok(par::find_first(config.budget, config.seesaw.execution, search).map(|(_, c)| c))
}

fn validate<R: Rng + ?Sized>(
    w: &CMatrix,
    map: &LinearMatrixMap,
    system: &RMatrix,
    config: &ExposednessConfig,
    rng: &mut R,
    index: usize,
) -> Option<Counterexample> {
    let (n, m) = (map.dim_in(), map.dim_out());
    let full = SeeSawConfig {
        execution: crate::config::Execution::Sequential,
        ..config.seesaw
    };
    let report = block_positivity_min(w, n, m, &full, rng).ok()?;
    let check = classify(report, config.seesaw.tol);
    if check.verdict != BlockPositivityVerdict::EvidenceBp {
        return None;
    }
    let w = w / Complex64::from(frobenius(w));
    let ray_distance = ray_distance(&w, map.choi());
    if same_ray(&w, map.choi(), config.tolerances.proportionality) {
        return None;
    }
    let coords = HermitianParamVector::from_hermitian_unchecked(&w).coords;
    let residual = (system * nalgebra::DVector::from_vec(coords)).amax();
    if residual > 1e-8 {
        return None;
    }
    Some(Counterexample {
        choi: w,
        evidence: check.report,
        ray_distance,
        constraint_residual: residual,
        candidate_index: index,
    })
}

fn ray_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let (na, nb) = (frobenius(a), frobenius(b));
    frobenius(&(a / Complex64::from(na) - b / Complex64::from(nb)))
}

/// Orthonormal basis of the column space (singular values above 1e-8·σ_max).
fn orthonormal_columns(a: &RMatrix) -> Result<RMatrix> {
    if a.ncols() == 0 {
        return Ok(a.clone());
    }
    let svd = nalgebra::SVD::try_new(a.clone(), true, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::ConvergenceFailure("SVD".into()))?;
    let u = svd.u.expect("requested left vectors");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 1e-8 * smax)
        .collect();
    let mut out = RMatrix::zeros(a.nrows(), keep.len());
    for (c, &k) in keep.iter().enumerate() {
        out.set_column(c, &u.column(k));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExposednessVerdict {
    /// The linear span of the double dual is the ray itself.
    CertifiedExposed,
    /// Larger span, but no block-positive element off the ray was found.
    ConsistentWithExposed,
    /// A block-positive element off the ray vanishes on the whole dual face.
    NotExposed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExposednessReport {
    pub verdict: ExposednessVerdict,
    pub nullspace_dim: usize,
    pub counterexample: Option<Counterexample>,
    pub samples_used: usize,
    pub diagnostics: ExposednessDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExposednessDiagnostics {
    pub source: SampleSource,
    pub first_order: bool,
    pub rank: usize,
    pub sigma_max: f64,
    pub smallest_kept: f64,
    pub largest_dropped: f64,
    pub self_residual: f64,
    /// Minimum of the see-saw run that admitted the map.
    pub positivity_min: f64,
    pub cone_search_run: bool,
}

/// Full exposedness pipeline for a block-positive map.
///
/// Fails with `NotPositiveMap` when the see-saw certifier finds a product
/// vector with negative pairing.
pub fn exposedness_report<R: Rng + ?Sized>(
    descriptor: &MapDescriptor,
    config: &ExposednessConfig,
    rng: &mut R,
) -> Result<ExposednessReport> {
    let map = descriptor.build()?;
    let (n, m) = (map.dim_in(), map.dim_out());
    let positivity = block_positivity_min(map.choi(), n, m, &config.seesaw, rng)?;
    if positivity.min_value < -config.seesaw.tol {
        return Err(Error::NotPositiveMap);
    }
    let samples = config.samples.unwrap_or_else(|| default_sample_count(n, m));
    let dd = double_dual_nullspace(descriptor, samples, config, rng)?;
    let (verdict, counterexample, searched) = if dd.dim <= 1 {
        (ExposednessVerdict::CertifiedExposed, None, false)
    } else {
        match cone_search_off_ray(&map, &dd, config, rng)? {
            Some(c) => (ExposednessVerdict::NotExposed, Some(c), true),
            None => (ExposednessVerdict::ConsistentWithExposed, None, true),
        }
    };
    Ok(ExposednessReport {
        verdict,
        nullspace_dim: dd.dim,
        counterexample,
        samples_used: dd.samples_used,
        diagnostics: ExposednessDiagnostics {
            source: dd.source,
            first_order: config.first_order,
            rank: dd.rank,
            sigma_max: dd.sigma_max,
            smallest_kept: dd.smallest_kept,
            largest_dropped: dd.largest_dropped,
            self_residual: dd.self_residual,
            positivity_min: positivity.min_value,
            cone_search_run: searched,
        },
    })
}

/// Independent re-verification of a counterexample against a map's dual face.
pub fn verify_counterexample<R: Rng + ?Sized>(
    counterexample: &CMatrix,
    map: &LinearMatrixMap,
    samples: &DualFaceSample,
    config: &ExposednessConfig,
    rng: &mut R,
) -> Result<bool> {
    let (n, m) = (map.dim_in(), map.dim_out());
    let check = classify(
        block_positivity_min(counterexample, n, m, &config.seesaw, rng)?,
        config.seesaw.tol,
    );
    let off_ray = !same_ray(
        counterexample,
        map.choi(),
        config.tolerances.proportionality,
    );
    let scale = frobenius(counterexample);
    let mut face_ok = true;
    for pair in &samples.pairs {
        if pair.pairing(counterexample, &config.tolerances)?.abs() > 1e-8 * scale.max(1.0) {
            face_ok = false;
        }
    }
    Ok(check.verdict == BlockPositivityVerdict::EvidenceBp && off_ray && face_ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanningReport {
    pub spans: bool,
    pub span_dim: usize,
    pub target_dim: usize,
    pub samples_used: usize,
}

/// Complex span of the dual-face vectors x̄⊗y. Spanning the whole space
/// implies no positive multiple of a completely positive map can be
/// subtracted from the witness.
pub fn optimality_spanning_check<R: Rng + ?Sized>(
    descriptor: &MapDescriptor,
    sample_count: usize,
    config: &ExposednessConfig,
    rng: &mut R,
) -> Result<SpanningReport> {
    let samples = dual_face_samples(descriptor, sample_count, config, rng)?;
    let d = samples.dim_in * samples.dim_out;
    let stacked = CMatrix::from_fn(samples.len(), d, |r, c| {
        samples.pairs[r].witness_vector()[c]
    });
    let svd = nalgebra::SVD::try_new(stacked, false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::ConvergenceFailure("SVD".into()))?;
    let smax = svd.singular_values.max();
    let span_dim = svd
        .singular_values
        .iter()
        .filter(|&&s| s > config.rel_tol * smax)
        .count();
    Ok(SpanningReport {
        spans: span_dim == d,
        span_dim,
        target_dim: d,
        samples_used: samples.len(),
    })
}

/// ‖Σ_{i<j} D_ij|x̄⟩⟨x̄|D_ij* − (I − |x⟩⟨x|)‖_F for the antisymmetric basis built from V.
pub fn verify_lemma1(v: &CMatrix, x: &CVector, tol: &Tolerances) -> Result<f64> {
    let n2 = v.nrows();
    if n2 % 2 == 1 {
        return Err(Error::OddDimension(n2));
    }
    if x.len() != n2 {
        return Err(dim_mismatch(n2, x.len()));
    }
    if (x.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "x must be a unit vector, has norm {}",
            x.norm()
        )));
    }
    let basis = crate::catalog::antisym_basis(v, n2, tol)?;
    let pxb = projector(&conj_vec(x));
    let lhs = basis.iter().fold(CMatrix::zeros(n2, n2), |acc, d| {
        acc + d * &pxb * d.adjoint()
    });
    let rhs = CMatrix::identity(n2, n2) - projector(x);
    Ok(frobenius(&(lhs - rhs)))
}

/// Residuals of the structural facts behind the Breuer-Hall face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BhStructureReport {
    /// ‖φ_BH(P_x) − [(I − P_x) − U P_x̄ U*]‖_F
    pub action_residual: f64,
    /// ‖W(φ_BH) + W(φ^U) − W(R_2n)‖_F
    pub reduction_residual: f64,
    /// |⟨x|U x̄⟩|
    pub orthogonality: f64,
    /// Smallest eigenvalue of U P_x̄ U* − (I − P_x); negative means the
    /// sign-flipped candidate is not a positive map.
    pub flipped_min_eigenvalue: f64,
    pub passed: bool,
}

pub const BH_ACTION_TOL: f64 = 1e-11;
pub const BH_REDUCTION_TOL: f64 = 1e-12;
pub const BH_ORTHOGONALITY_TOL: f64 = 1e-12;

pub fn verify_bh_structure(
    u: &AntisymmetricUnitary,
    x: &CVector,
    tol: &Tolerances,
) -> Result<BhStructureReport> {
    let n2 = u.dim();
    if x.len() != n2 {
        return Err(dim_mismatch(n2, x.len()));
    }
    if (x.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument("x must be a unit vector".into()));
    }
    let bh = crate::catalog::breuer_hall(u);
    let px = projector(x);
    let ux = u.matrix() * conj_vec(x);
    let id = CMatrix::identity(n2, n2);
    let complement = &id - &px;
    let expected = &complement - projector(&ux);
    let action_residual = frobenius(&(bh.apply(&px)? - &expected));
    let sum = bh.add(&crate::catalog::co_ad_map(u.matrix()))?;
    let reduction_residual = frobenius(&(sum.choi() - crate::catalog::reduction(n2)?.choi()));
    let orthogonality = x.dotc(&ux).norm();
    let flipped = projector(&ux) - complement;
    let (values, _) = eigh(&flipped, tol.hermitian)?;
    let flipped_min_eigenvalue = values[0];
    let passed = action_residual <= BH_ACTION_TOL
        && reduction_residual <= BH_REDUCTION_TOL
        && orthogonality <= BH_ORTHOGONALITY_TOL
        && flipped_min_eigenvalue < -0.5;
    Ok(BhStructureReport {
        action_residual,
        reduction_residual,
        orthogonality,
        flipped_min_eigenvalue,
        passed,
    })
}
