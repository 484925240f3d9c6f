//! The spectral bundle of an action: for a generating set `W` the fiber
//! over a character `x` is the span of the Fourier coefficients
//! `F(a, x)` of the spectrally invariant hull of `W`. The fibers
//! multiply like a graded algebra (`B_x B_y` inside `B_{xy}`, adjoints
//! flip the grading), the fiberwise-average map `kappa` reconstructs
//! algebra elements, and conjugating by the vector-level Fourier
//! transform intertwines `pi` with the fiber translation operator.

use num_complex::Complex64;

use crate::blockop::BigOp;
use crate::dynsys::DynSystem;
use crate::error::{CoreError, Result};
use crate::linalg::{c, hs_norm, op_norm, span_of, zeros, Mat, Subspace};

/// Graded fiber family over the dual group plus the generating data.
#[derive(Debug, Clone)]
pub struct FellBundle {
    /// Fiber `B_x` for each dual index.
    fibers: Vec<Subspace>,
    /// Orthonormal basis of the span of the spectrally invariant hull.
    hull: Subspace,
    /// Span of all fibers; coincides with the invariant algebra
    /// generated by `W` (the hull span may be strictly smaller).
    algebra: Subspace,
}

impl FellBundle {
    pub fn fibers(&self) -> &[Subspace] {
        &self.fibers
    }

    pub fn fiber(&self, x: usize) -> &Subspace {
        &self.fibers[x]
    }

    pub fn fiber_dims(&self) -> Vec<usize> {
        self.fibers.iter().map(|f| f.dim()).collect()
    }

    pub fn total_fiber_dim(&self) -> usize {
        self.fibers.iter().map(|f| f.dim()).sum()
    }

    /// Span of the spectrally invariant hull of the generating set.
    pub fn hull(&self) -> &Subspace {
        &self.hull
    }

    /// Span of all fibers = the invariant algebra generated by `W`.
    pub fn algebra(&self) -> &Subspace {
        &self.algebra
    }
}

/// Section of the bundle: one matrix per dual index, each inside its
/// fiber (checked where it matters, e.g. by [`kappa`]).
#[derive(Debug, Clone)]
pub struct Section {
    values: Vec<Mat>,
}

impl Section {
    pub fn new(values: Vec<Mat>) -> Result<Self> {
        if values.is_empty() {
            return Err(CoreError::Structural("section needs values".into()));
        }
        Ok(Section { values })
    }

    /// The tautological section `x -> F(a, x)` of an element.
    pub fn of_element(sys: &DynSystem, a: &Mat) -> Result<Self> {
        sys.check_dim(a)?;
        Section::new((0..sys.order()).map(|x| sys.fourier_coeff_idx(a, x)).collect())
    }

    pub fn values(&self) -> &[Mat] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Mat {
        &self.values[x]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

const HULL_SPAN_TOL: f64 = 1e-9;

/// Close `seed` under products until the span stops growing. Each round
/// also absorbs adjoints, so the result is a *-algebra span.
fn close_under_products(sys: &DynSystem, seed: &[Mat], extra_maps: bool) -> Result<Subspace> {
    let d = sys.dim();
    let mut seeds: Vec<Mat> = seed.to_vec();
    seeds.extend(seed.iter().map(|m| m.adjoint()));
    let mut span = span_of(&seeds, HULL_SPAN_TOL)?;
    let max_rounds = d * d + 1;
    for _ in 0..max_rounds {
        let dim_before = span.dim();
        let basis: Vec<Mat> = span.basis().to_vec();
        let mut candidates: Vec<Mat> = Vec::new();
        for b in &basis {
            candidates.push(b.adjoint());
            for b2 in &basis {
                candidates.push(b * b2);
            }
            if extra_maps {
                for t in 0..sys.order() {
                    candidates.push(sys.alpha_idx(t, b));
                }
            }
        }
        let scale = candidates.iter().map(hs_norm).fold(1.0f64, f64::max);
        for m in &candidates {
            span.absorb(m, scale)?;
        }
        if span.dim() == dim_before {
            return Ok(span);
        }
    }
    Err(CoreError::Numeric("algebra closure failed to stabilize".into()))
}

/// The smallest action-invariant *-algebra span containing `w`,
/// computed by closure iteration (products, adjoints, the action).
pub fn alg_closure(sys: &DynSystem, w: &[Mat]) -> Result<Subspace> {
    close_under_products(sys, w, true)
}

/// Build the spectral bundle of `W`: compute the spectrally invariant
/// hull of `W` and its adjoints by absorbing `F(b, x) a` and
/// `a F(b, x)` until the span stabilizes (at most `d^2` rounds), then
/// span the Fourier coefficients fiber by fiber.
pub fn build_bundle(sys: &DynSystem, w: &[Mat]) -> Result<FellBundle> {
    if w.is_empty() {
        return Err(CoreError::Structural("bundle needs a nonempty generating set".into()));
    }
    for m in w {
        sys.check_dim(m)?;
    }
    let d = sys.dim();
    let n = sys.order();

    let mut seeds: Vec<Mat> = w.to_vec();
    seeds.extend(w.iter().map(|m| m.adjoint()));
    let mut hull = span_of(&seeds, HULL_SPAN_TOL)?;

    let max_rounds = d * d + 1;
    let mut stabilized = false;
    for _ in 0..max_rounds {
        let dim_before = hull.dim();
        let basis: Vec<Mat> = hull.basis().to_vec();
        // Fourier coefficients of the current span members.
        let coeffs: Vec<Vec<Mat>> = basis
            .iter()
            .map(|b| (0..n).map(|x| sys.fourier_coeff_idx(b, x)).collect())
            .collect();
        let mut candidates: Vec<Mat> = Vec::new();
        for a in &basis {
            candidates.push(a.adjoint());
            for fb in &coeffs {
                for f in fb {
                    candidates.push(f * a);
                    candidates.push(a * f);
                }
            }
        }
        let scale = candidates.iter().map(hs_norm).fold(1.0f64, f64::max);
        for m in &candidates {
            hull.absorb(m, scale)?;
        }
        if hull.dim() == dim_before {
            stabilized = true;
            break;
        }
    }
    if !stabilized {
        return Err(CoreError::Numeric("hull iteration failed to stabilize".into()));
    }

    let hull_basis: Vec<Mat> = hull.basis().to_vec();
    if hull_basis.is_empty() {
        let fibers = vec![Subspace::empty(d, d, HULL_SPAN_TOL); n];
        return Ok(FellBundle {
            fibers,
            hull,
            algebra: Subspace::empty(d, d, HULL_SPAN_TOL),
        });
    }
    // One global scale for all fiber spans. Per-fiber scaling would
    // promote the numerical zeros of an empty fiber to basis vectors.
    let all_coeffs: Vec<Vec<Mat>> = (0..n)
        .map(|x| hull_basis.iter().map(|a| sys.fourier_coeff_idx(a, x)).collect())
        .collect();
    let global_scale = all_coeffs
        .iter()
        .flatten()
        .map(hs_norm)
        .fold(1e-300f64, f64::max);
    let fibers: Vec<Subspace> = all_coeffs
        .iter()
        .map(|coeffs| crate::linalg::span_of_scaled(coeffs, HULL_SPAN_TOL, global_scale))
        .collect::<Result<_>>()?;

    let mut all_fiber_basis: Vec<Mat> = Vec::new();
    for f in &fibers {
        all_fiber_basis.extend(f.basis().iter().cloned());
    }
    let algebra = if all_fiber_basis.is_empty() {
        Subspace::empty(d, d, HULL_SPAN_TOL)
    } else {
        span_of(&all_fiber_basis, HULL_SPAN_TOL)?
    };

    Ok(FellBundle { fibers, hull, algebra })
}

/// Worst residuals of the grading axioms over all fiber basis pairs.
#[derive(Debug, Clone)]
pub struct BundleAxiomsReport {
    /// `max residual(u v, B_{xy})`.
    pub product_defect: f64,
    /// `max residual(u*, B_{x^{-1}})`.
    pub adjoint_defect: f64,
}

impl BundleAxiomsReport {
    pub fn max(&self) -> f64 {
        self.product_defect.max(self.adjoint_defect)
    }
}

pub fn bundle_axioms(sys: &DynSystem, bundle: &FellBundle) -> Result<BundleAxiomsReport> {
    let n = sys.order();
    let mut product_defect = 0.0f64;
    let mut adjoint_defect = 0.0f64;
    for x in 0..n {
        let xinv = sys.group().neg_idx(x);
        for u in bundle.fiber(x).basis() {
            let r = if bundle.fiber(xinv).dim() == 0 {
                hs_norm(&u.adjoint())
            } else {
                bundle.fiber(xinv).residual(&u.adjoint())?
            };
            adjoint_defect = adjoint_defect.max(r);
            for y in 0..n {
                let xy = sys.group().add_idx(x, y);
                for v in bundle.fiber(y).basis() {
                    let prod = u * v;
                    let r = if bundle.fiber(xy).dim() == 0 {
                        hs_norm(&prod)
                    } else {
                        bundle.fiber(xy).residual(&prod)?
                    };
                    product_defect = product_defect.max(r);
                }
            }
        }
    }
    Ok(BundleAxiomsReport { product_defect, adjoint_defect })
}

/// Fiberwise average `kappa(s) = (1/|G|) sum_x s(x)`, the integrated
/// form of the inclusion representation. Fiber membership of the
/// section is enforced.
pub fn kappa(sys: &DynSystem, bundle: &FellBundle, s: &Section) -> Result<Mat> {
    if s.len() != sys.order() {
        return Err(CoreError::Structural("section length must be |G|".into()));
    }
    let mut acc = zeros(sys.dim(), sys.dim());
    for (x, v) in s.values().iter().enumerate() {
        sys.check_dim(v)?;
        let r = if bundle.fiber(x).dim() == 0 {
            hs_norm(v)
        } else {
            bundle.fiber(x).residual(v)?
        };
        if r > sys.tol() * hs_norm(v).max(1.0) {
            return Err(CoreError::Structural(format!(
                "section value at dual index {x} is outside its fiber: residual {r:.3e}"
            )));
        }
        acc += v;
    }
    Ok(acc.map(|z| z / sys.order() as f64))
}

/// Bundle convolution `(s1 * s2)(x) = (1/|G|) sum_y s1(y) s2(y^{-1} x)`.
pub fn section_convolve(sys: &DynSystem, s1: &Section, s2: &Section) -> Result<Section> {
    if s1.len() != sys.order() || s2.len() != sys.order() {
        return Err(CoreError::Structural("section length must be |G|".into()));
    }
    let n = sys.order();
    let values = (0..n)
        .map(|x| {
            let mut acc = zeros(sys.dim(), sys.dim());
            for y in 0..n {
                let rest = sys.group().sub_idx(x, y);
                acc += s1.value(y) * s2.value(rest);
            }
            acc.map(|z| z / n as f64)
        })
        .collect();
    Section::new(values)
}

/// Section adjoint `s*(x) = s(x^{-1})*`.
pub fn section_adjoint(sys: &DynSystem, s: &Section) -> Result<Section> {
    let n = sys.order();
    Section::new((0..n).map(|x| s.value(sys.group().neg_idx(x)).adjoint()).collect())
}

/// Report of the covariance check for `kappa`.
#[derive(Debug, Clone)]
pub struct CovarianceReport {
    /// `||alpha_t(kappa(s)) - kappa(beta_t s)||` with
    /// `beta_t(s)(x) = conj(<x,t>) s(x)`.
    pub residual: f64,
    /// Dimension of the span of all fibers (= range of `kappa` over all
    /// sections).
    pub fiber_span_dim: usize,
    /// Dimension of the independently-closed invariant algebra of the
    /// generating set.
    pub algebra_dim: usize,
}

pub fn covariance_check(
    sys: &DynSystem,
    bundle: &FellBundle,
    generators: &[Mat],
    s: &Section,
    t: &crate::group::GroupElement,
) -> Result<CovarianceReport> {
    let ti = sys.group().index_of(t)?;
    let lhs = sys.alpha_idx(ti, &kappa(sys, bundle, s)?);
    let twisted = Section::new(
        (0..sys.order())
            .map(|x| {
                let w = sys.group().pairing_conj_idx(x, ti);
                s.value(x).map(|z| z * w)
            })
            .collect(),
    )?;
    let rhs = kappa(sys, bundle, &twisted)?;
    let residual = op_norm(&(lhs - rhs))?;

    let fiber_span_dim = bundle.algebra().dim();
    let algebra_dim = alg_closure(sys, generators)?.dim();

    Ok(CovarianceReport { residual, fiber_span_dim, algebra_dim })
}

/// The vector-level Fourier transform `l2(G,H) -> l2(Ĝ,H)` as a block
/// unitary with blocks `(x, t) -> |G|^{-1/2} conj(<x,t>) I`.
pub fn fourier_unitary(sys: &DynSystem) -> BigOp {
    let n = sys.order();
    let d = sys.dim();
    let w = 1.0 / (n as f64).sqrt();
    BigOp::from_block_fn(n, d, |x, t| {
        let ph = sys.group().pairing_conj_idx(x, t) * w;
        Mat::from_fn(d, d, |i, j| if i == j { ph } else { c(0.0, 0.0) })
    })
}

/// The integrated fiber-translation operator
/// `(1/|G|) sum_x s(x) (x) lambda_x` on `l2(Ĝ, H)`, with blocks
/// `(w, v) -> (1/|G|) s(w v^{-1})`.
pub fn fiber_translation_op(sys: &DynSystem, s: &Section) -> Result<BigOp> {
    if s.len() != sys.order() {
        return Err(CoreError::Structural("section length must be |G|".into()));
    }
    let n = sys.order();
    let d = sys.dim();
    let scale = 1.0 / n as f64;
    Ok(BigOp::from_block_fn(n, d, |wv, v| {
        s.value(sys.group().sub_idx(wv, v)).map(|z| z * scale)
    }))
}

/// Residual of the intertwining diagram: conjugating `pi(a')` by the
/// Fourier unitary must equal the fiber-translation operator of the
/// section `x -> F(a', x)`, where `a' = smooth(a, g)`.
pub fn diagram_check(
    sys: &DynSystem,
    bundle: &FellBundle,
    a: &Mat,
    g: &[Complex64],
) -> Result<f64> {
    sys.check_dim(a)?;
    let r = bundle.algebra().residual(a)?;
    if r > sys.tol() * hs_norm(a).max(1.0) {
        return Err(CoreError::Structural(format!(
            "element is outside the bundle algebra: residual {r:.3e}"
        )));
    }
    let a_smooth = sys.smooth(a, g)?;
    let eta = Section::of_element(sys, &a_smooth)?;
    let f_op = fourier_unitary(sys);
    let lhs = f_op
        .mul(&crate::crossed::pi(sys, &a_smooth)?)?
        .mul(&f_op.adjoint())?;
    let rhs = fiber_translation_op(sys, &eta)?;
    lhs.sub(&rhs)?.op_norm()
}
