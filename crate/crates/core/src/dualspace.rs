//! Local dual spaces of derivative operators at variety points, computed by
//! the Macaulay construction, and the dual-basis constants expressing
//! normal-set coefficients of any reduction as linear combinations of
//! operator evaluations at the points.

use crate::eigen::{nullspace_numeric_scaled, CMatrix};
use crate::error::{Error, Result};
use crate::matring::{MatrixRing, VarietyPoint};
use crate::matrix::Matrix;
use crate::poly::{DerivOperator, Monomial, Poly};
use crate::scalar::ComplexF;
use num_traits::{ToPrimitive, Zero};

pub type CPoly = Poly<ComplexF>;

/// Basis of the down-closed operator space at one variety point; its
/// dimension is the local multiplicity.
#[derive(Debug, Clone)]
pub struct DualSpaceAtPoint {
    pub point: VarietyPoint,
    pub basis: Vec<DerivOperator<ComplexF>>,
    pub local_dim: usize,
}

/// Dual basis for the whole ring: `gamma` has one row per normal-set
/// monomial and one column per (point, operator) pair; applying it to the
/// vector of operator evaluations of g yields the normal-set coefficients
/// of g mod J.
#[derive(Debug, Clone)]
pub struct DualBasis {
    pub ring: MatrixRing,
    pub spaces: Vec<DualSpaceAtPoint>,
    pub gamma: CMatrix,
    pub condition: f64,
}

/// Monomials of total degree <= cap in `vars` variables, ascending
/// graded-lex.
pub fn monomials_up_to(vars: usize, cap: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; vars];
    fn rec(i: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == current.len() {
            out.push(Monomial(current.clone()));
            return;
        }
        for e in 0..=left {
            current[i] = e;
            rec(i + 1, left - e, current, out);
            current[i] = 0;
        }
    }
    rec(0, cap, &mut current, &mut out);
    out.sort();
    out
}

/// Evaluates the derivative of `q` by the exponent `a` at the complex
/// point, without forming the derivative polynomial.
fn derivative_eval(q: &CPoly, a: &Monomial, point: &[ComplexF]) -> ComplexF {
    let mut acc = ComplexF::zero();
    for (e, c) in q.terms() {
        let ff = e.falling_factorial(a);
        if ff.is_zero() {
            continue;
        }
        let mut term = *c * ComplexF::new(ff.to_f64().unwrap_or(f64::INFINITY), 0.0);
        for (i, (&ei, &ai)) in e.0.iter().zip(&a.0).enumerate() {
            for _ in 0..(ei - ai) {
                term *= point[i];
            }
        }
        acc += term;
    }
    acc
}

/// Natural magnitude of the constraint row for q at the point: the sum of
/// term magnitudes with every cancellation ignored, including the worst
/// factorial scaling. Rows whose entries all collapse far below this scale
/// are numerically zero.
fn row_scale(q: &CPoly, point: &[ComplexF]) -> f64 {
    let mut s = 0.0f64;
    for (e, c) in q.terms() {
        let mut mag = c.norm() * e.factorial().to_f64().unwrap_or(f64::INFINITY);
        for (i, &ei) in e.0.iter().enumerate() {
            mag *= point[i].norm().max(1.0).powi(ei as i32);
        }
        s += mag;
    }
    s.max(1.0)
}

/// Macaulay construction of the dual space at a variety point: for
/// increasing operator order, an operator of order <= k must kill every
/// border generator multiplied by every monomial of degree <= k, evaluated
/// at the point. The kernel of that system is the candidate space; the
/// order grows until the dimension stabilizes across one increment, with
/// the normal-set size as the order cap.
pub fn dual_space_at(ring: &MatrixRing, p: &VarietyPoint, tol: f64) -> Result<DualSpaceAtPoint> {
    let r = ring.num_generators();
    if p.coords.len() != r {
        return Err(Error::DimensionMismatch("point arity differs from generator count".into()));
    }
    let m = ring.dimension();
    let borders: Vec<CPoly> = ring.border_basis.iter().map(|g| g.to_complex()).collect();
    let cap = m as u32;

    let mut prev_dim: Option<usize> = None;
    for k in 0..=cap {
        let cols = monomials_up_to(r, k);
        let multipliers = monomials_up_to(r, k);
        let mut rows = Vec::new();
        let mut scale_floor = 1.0f64;
        for g in &borders {
            for b in &multipliers {
                let q = g.mul_monomial(b, &ComplexF::new(1.0, 0.0));
                scale_floor = scale_floor.max(row_scale(&q, &p.coords));
                let row: Vec<ComplexF> =
                    cols.iter().map(|a| derivative_eval(&q, a, &p.coords)).collect();
                rows.push(row);
            }
        }
        let system = Matrix::from_rows(rows);
        let kernel = nullspace_numeric_scaled(&system, tol, scale_floor);
        let dim = kernel.len();
        if prev_dim == Some(dim) {
            let basis = kernel
                .into_iter()
                .map(|v| {
                    DerivOperator::new(Poly::from_terms(
                        r,
                        cols.iter().cloned().zip(v).filter(|(_, c)| c.norm() > 0.0),
                    ))
                })
                .collect();
            return Ok(DualSpaceAtPoint { point: p.clone(), basis, local_dim: dim });
        }
        prev_dim = Some(dim);
    }
    Err(Error::DualSpaceUnstable(cap as usize))
}

/// Assembles the full dual basis: variety, per-point dual spaces, the
/// multiplicity check sum(m_u) = |NS|, and the inverse of the evaluation
/// matrix Psi[(u,v), a] = (D_{u,v}(t^a))(alpha_u).
///
/// A defective point of multiplicity k smears into up to k nearby
/// eigenvalue reads, each of which sits on the variety to far better than
/// working precision, so border verification alone cannot collapse them.
/// The multiplicity identity sum(m_u) = |NS| can: while the sum
/// overshoots, the two closest points merge into their midpoint and the
/// dual spaces are recomputed.
pub fn build_dual_basis(ring: &MatrixRing, tol: f64, seed: u64) -> Result<DualBasis> {
    let mut points = ring.variety(tol, seed)?;
    let m = ring.dimension();
    let spaces = loop {
        let mut spaces = Vec::new();
        for p in &points {
            spaces.push(dual_space_at(ring, p, tol)?);
        }
        let got: usize = spaces.iter().map(|s| s.local_dim).sum();
        if got == m {
            break spaces;
        }
        if got > m && points.len() > 1 {
            let (i, j) = closest_pair(&points);
            let merged = VarietyPoint {
                coords: points[i]
                    .coords
                    .iter()
                    .zip(&points[j].coords)
                    .map(|(a, b)| (a + b) * 0.5)
                    .collect(),
            };
            points.remove(j);
            points[i] = merged;
            continue;
        }
        return Err(Error::MultiplicityMismatch { got, expected: m });
    };
    let mut psi_rows = Vec::with_capacity(m);
    for space in &spaces {
        for op in &space.basis {
            let row: Vec<ComplexF> = ring
                .normal_set
                .iter()
                .map(|a| {
                    let mono = CPoly::monomial(a.clone(), ComplexF::new(1.0, 0.0));
                    let mut acc = ComplexF::zero();
                    for (b, c) in op.op_poly.terms() {
                        acc += *c * derivative_eval(&mono, b, &space.point.coords);
                    }
                    acc
                })
                .collect();
            psi_rows.push(row);
        }
    }
    let psi = Matrix::from_rows(psi_rows);
    let gamma = psi.inverse().map_err(|_| Error::SingularDualBasis(f64::INFINITY))?;
    let condition = psi.norm_one() * gamma.norm_one();
    if condition > 1.0 / tol {
        return Err(Error::SingularDualBasis(condition));
    }
    Ok(DualBasis { ring: ring.clone(), spaces, gamma, condition })
}

fn closest_pair(points: &[VarietyPoint]) -> (usize, usize) {
    let mut best = (0, 1);
    let mut best_dist = f64::INFINITY;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d: f64 = points[i]
                .coords
                .iter()
                .zip(&points[j].coords)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            if d < best_dist {
                best_dist = d;
                best = (i, j);
            }
        }
    }
    best
}

impl DualBasis {
    /// Ordered (point index, operator index) pairs matching gamma columns.
    pub fn operator_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (u, space) in self.spaces.iter().enumerate() {
            for v in 0..space.basis.len() {
                pairs.push((u, v));
            }
        }
        pairs
    }

    /// All operator evaluations (D_{u,v}(g))(alpha_u), in gamma's column
    /// order.
    pub fn operator_evaluations(&self, g: &CPoly) -> Result<Vec<ComplexF>> {
        let mut out = Vec::new();
        for space in &self.spaces {
            for op in &space.basis {
                let applied = op.apply(g);
                out.push(applied.eval(&space.point.coords)?);
            }
        }
        Ok(out)
    }

    /// g mod J through the dual basis: coefficients on the normal set are
    /// gamma times the operator evaluations.
    pub fn reduce_mod_j(&self, g: &CPoly) -> Result<CPoly> {
        let evals = self.operator_evaluations(g)?;
        let coeffs = self.gamma.mul_vec(&evals);
        Ok(Poly::from_terms(
            self.ring.num_generators(),
            self.ring.normal_set.iter().cloned().zip(coeffs),
        ))
    }
}
