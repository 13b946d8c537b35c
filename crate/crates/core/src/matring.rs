//! Analysis of the commutative ring generated by commuting rational
//! matrices: the ideal of dependencies (as a border basis), its normal set,
//! quotient-ring representations, multiplication matrices, minimal
//! polynomials, and the variety computed by the eigenvalue method.

use crate::eigen::{conj_transpose, frobenius, schur, CMatrix};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SpanOutcome, SpanTracker};
use crate::poly::{Monomial, Poly};
use crate::scalar::{ComplexF, Rational, Scalar};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::{BTreeMap, BTreeSet};

pub type QMatrix = Matrix<Rational>;
pub type QPoly = Poly<Rational>;

/// The ring generated by commuting matrices, together with its computed
/// normal set and border basis. The normal set is stored in ascending
/// graded-lex order and is closed under division; each border polynomial
/// rewrites one minimal monomial outside the normal set as a combination
/// of normal-set monomials and vanishes on the generators.
#[derive(Debug, Clone)]
pub struct MatrixRing {
    pub w: usize,
    pub generators: Vec<QMatrix>,
    pub normal_set: Vec<Monomial>,
    pub border_monomials: Vec<Monomial>,
    pub border_basis: Vec<QPoly>,
    /// Matrix value of each normal-set monomial, aligned with `normal_set`.
    pub ns_matrices: Vec<QMatrix>,
}

/// A point of the variety: common zero of the border basis.
#[derive(Debug, Clone)]
pub struct VarietyPoint {
    pub coords: Vec<ComplexF>,
}

/// Exact pairwise commutativity of equally sized square matrices.
pub fn check_commuting(mats: &[QMatrix]) -> Result<bool> {
    if let Some(first) = mats.first() {
        if !first.is_square() || mats.iter().any(|m| m.rows() != first.rows() || !m.is_square()) {
            return Err(Error::DimensionMismatch(
                "commutativity check needs equally sized square matrices".into(),
            ));
        }
    }
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            if !a.commutes_with(b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Builds the ring data by the closure procedure: candidate monomials are
/// enumerated in ascending graded-lex order, each vectorized matrix value
/// is tested against the span of the accepted ones, and every rejection
/// yields one border polynomial from the exact linear dependency.
pub fn build_ring(generators: Vec<QMatrix>) -> Result<MatrixRing> {
    if generators.is_empty() {
        return Err(Error::InvalidParameter("ring needs at least one generator".into()));
    }
    if !check_commuting(&generators)? {
        return Err(Error::NonCommuting);
    }
    let w = generators[0].rows();
    let r = generators.len();
    let degree_cap = (w * w + 1) as u32;

    let mut tracker: SpanTracker<Rational> = SpanTracker::new(w * w);
    let mut worklist: BTreeSet<Monomial> = BTreeSet::new();
    worklist.insert(Monomial::unit(r));
    let mut normal_set: Vec<Monomial> = Vec::new();
    let mut ns_matrices: Vec<QMatrix> = Vec::new();
    let mut mat_of: BTreeMap<Monomial, QMatrix> = BTreeMap::new();
    let mut border_monomials: Vec<Monomial> = Vec::new();
    let mut border_basis: Vec<QPoly> = Vec::new();

    while let Some(cand) = worklist.pop_first() {
        if border_monomials.iter().any(|b| b.divides(&cand)) {
            continue;
        }
        if cand.total_degree() > degree_cap {
            return Err(Error::Internal("closure exceeded its degree cap".into()));
        }
        let value = if cand.is_unit() {
            Matrix::identity(w)
        } else {
            let i = cand.0.iter().position(|&e| e > 0).expect("non-unit monomial");
            let mut parent = cand.clone();
            parent.0[i] -= 1;
            let parent_mat = mat_of
                .get(&parent)
                .ok_or_else(|| Error::Internal("closure parent missing from normal set".into()))?;
            parent_mat.mul(&generators[i])
        };
        match tracker.insert(&value.vectorize()) {
            SpanOutcome::Independent => {
                for i in 0..r {
                    let mut ext = cand.clone();
                    ext.0[i] += 1;
                    worklist.insert(ext);
                }
                normal_set.push(cand.clone());
                ns_matrices.push(value.clone());
                mat_of.insert(cand, value);
            }
            SpanOutcome::Dependent(coeffs) => {
                let mut rel = QPoly::monomial(cand.clone(), Rational::one());
                for (k, c) in coeffs.iter().enumerate() {
                    rel.add_term(normal_set[k].clone(), Rational::zero() - c.clone());
                }
                border_monomials.push(cand);
                border_basis.push(rel);
            }
        }
    }

    Ok(MatrixRing { w, generators, normal_set, border_monomials, border_basis, ns_matrices })
}

impl MatrixRing {
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Dimension of the quotient ring (= |normal set|).
    pub fn dimension(&self) -> usize {
        self.normal_set.len()
    }

    fn ns_index(&self, m: &Monomial) -> Option<usize> {
        self.normal_set.iter().position(|x| x == m)
    }

    /// Evaluates a polynomial supported on the normal set at the generator
    /// matrices.
    pub fn eval_poly_at_generators(&self, p: &QPoly) -> Result<QMatrix> {
        let mut acc: QMatrix = Matrix::zero(self.w, self.w);
        for (m, c) in p.terms() {
            let idx = self
                .ns_index(m)
                .ok_or_else(|| Error::InvalidParameter("monomial outside normal set".into()))?;
            acc = acc.add(&self.ns_matrices[idx].scale(c));
        }
        Ok(acc)
    }

    /// The unique polynomial supported on the normal set whose value at the
    /// generators equals `b`; errors with `NotInRing` outside the span.
    pub fn represent_in_quotient(&self, b: &QMatrix) -> Result<QPoly> {
        if b.rows() != self.w || b.cols() != self.w {
            return Err(Error::DimensionMismatch("representation needs a w x w matrix".into()));
        }
        let m = self.dimension();
        let system = Matrix::from_fn(self.w * self.w, m, |row, col| {
            self.ns_matrices[col].entries()[row].clone()
        });
        let coeffs = system.solve(&b.vectorize()).map_err(|_| Error::NotInRing)?;
        Ok(QPoly::from_terms(
            self.generators.len(),
            self.normal_set.iter().cloned().zip(coeffs),
        ))
    }

    /// Exact normal form modulo the border basis: repeatedly rewrites the
    /// graded-lex largest monomial outside the normal set until the result
    /// is supported on the normal set.
    pub fn reduce_by_border(&self, f: &QPoly) -> QPoly {
        let ns: BTreeSet<&Monomial> = self.normal_set.iter().collect();
        let mut work = f.clone();
        loop {
            let offending = work
                .support()
                .filter(|m| !ns.contains(*m))
                .max_by(|a, b| a.cmp(b))
                .cloned();
            let Some(mono) = offending else { return work };
            let coeff = work.coeff(&mono);
            let b_idx = self
                .border_monomials
                .iter()
                .position(|b| b.divides(&mono))
                .expect("monomial outside the normal set has a border divisor");
            let border = &self.border_basis[b_idx];
            let shift = self.border_monomials[b_idx].quotient(&mono);
            // work -= coeff * t^shift * border  (cancels the offending term)
            work = work.sub(&border.mul_monomial(&shift, &coeff));
        }
    }

    /// Multiplication-by-t_i operators on the normal-set basis; entry
    /// (row, col) is the coefficient of normal_set[row] in the reduction
    /// of t_i * normal_set[col].
    pub fn multiplication_matrices(&self) -> Vec<QMatrix> {
        let m = self.dimension();
        let r = self.generators.len();
        (0..r)
            .map(|i| {
                let mut out: QMatrix = Matrix::zero(m, m);
                for (col, a) in self.normal_set.iter().enumerate() {
                    let mut shifted = a.clone();
                    shifted.0[i] += 1;
                    let reduced =
                        self.reduce_by_border(&QPoly::monomial(shifted, Rational::one()));
                    for (mono, c) in reduced.terms() {
                        let row = self.ns_index(mono).expect("reduction stays in normal set");
                        out[(row, col)] = c.clone();
                    }
                }
                out
            })
            .collect()
    }

    /// Distinct common zeros of the border basis by the eigenvalue method:
    /// Schur-triangularize a random combination of the transposed
    /// multiplication matrices, group the diagonal into clusters, reorder
    /// each cluster into a contiguous invariant subspace, and read each
    /// coordinate as the trace of the restricted multiplication operator.
    /// Every candidate must kill every border polynomial within tolerance;
    /// otherwise the combination is retried with fresh randomness.
    pub fn variety(&self, tol: f64, seed: u64) -> Result<Vec<VarietyPoint>> {
        let m = self.dimension();
        let r = self.generators.len();
        let mult: Vec<CMatrix> = self
            .multiplication_matrices()
            .iter()
            .map(|mm| mm.map(|c| c.to_complex()).transpose())
            .collect();
        let mut rng = StdRng::seed_from_u64(seed);
        let attempts = 5;
        let mut last_err = Error::VarietyVerification(attempts);
        for _ in 0..attempts {
            let coeffs: Vec<f64> =
                (0..r).map(|_| rng.gen_range(-1_000_000i64..=1_000_000) as f64).collect();
            let mut combo: CMatrix = Matrix::zero(m, m);
            for (c, mm) in coeffs.iter().zip(&mult) {
                combo = combo.add(&mm.scale(&ComplexF::new(*c, 0.0)));
            }
            match self.variety_from_combination(&combo, &mult, tol) {
                Ok(points) => return Ok(points),
                Err(e) => last_err = e,
            }
        }
        Err(last_err)
    }

    fn variety_from_combination(
        &self,
        combo: &CMatrix,
        mult: &[CMatrix],
        tol: f64,
    ) -> Result<Vec<VarietyPoint>> {
        let m = self.dimension();
        let (q, t) = schur(combo)?;
        let scale = frobenius(combo).max(1.0);
        // Defective eigenvalues smear like eps^(1/k); try tighter cluster
        // tolerances first and fall back to looser ones.
        for cluster_rel in [1e-12, 1e-9, 1e-6, 1e-3] {
            let cluster_tol = cluster_rel * scale;
            if let Ok(points) = self.try_clustering(&q, &t, mult, m, cluster_tol, tol) {
                return Ok(points);
            }
        }
        Err(Error::VarietyVerification(1))
    }

    fn try_clustering(
        &self,
        q: &CMatrix,
        t: &CMatrix,
        mult: &[CMatrix],
        m: usize,
        cluster_tol: f64,
        tol: f64,
    ) -> Result<Vec<VarietyPoint>> {
        let mut q = q.clone();
        let mut t = t.clone();
        // Assign cluster labels by diagonal proximity.
        let mut labels: Vec<usize> = vec![usize::MAX; m];
        let mut reps: Vec<ComplexF> = Vec::new();
        for k in 0..m {
            let v = t[(k, k)];
            match reps.iter().position(|rep| (*rep - v).norm() <= cluster_tol) {
                Some(idx) => labels[k] = idx,
                None => {
                    reps.push(v);
                    labels[k] = reps.len() - 1;
                }
            }
        }
        // Reorder so equal labels are contiguous (selection sort with
        // adjacent Schur swaps keeps T triangular and Q unitary).
        let mut order: Vec<usize> = labels.clone();
        let mut target: Vec<usize> = Vec::new();
        {
            let mut seen = Vec::new();
            for &l in &order {
                if !seen.contains(&l) {
                    seen.push(l);
                }
            }
            for l in seen {
                for _ in order.iter().filter(|&&x| x == l) {
                    target.push(l);
                }
            }
        }
        let mut pos = 0;
        while pos < m {
            if order[pos] == target[pos] {
                pos += 1;
                continue;
            }
            // find the next occurrence of target[pos] and bubble it up
            let mut src = pos + 1;
            while src < m && order[src] != target[pos] {
                src += 1;
            }
            if src == m {
                return Err(Error::Internal("cluster reordering lost a label".into()));
            }
            while src > pos {
                swap_adjacent_schur(&mut q, &mut t, src - 1);
                order.swap(src - 1, src);
                src -= 1;
            }
        }
        // Contiguous cluster ranges.
        let mut points = Vec::new();
        let mut lo = 0;
        while lo < m {
            let mut hi = lo;
            while hi + 1 < m && order[hi + 1] == order[lo] {
                hi += 1;
            }
            let size = hi - lo + 1;
            // coordinate = trace of the operator on the invariant subspace
            let coords: Vec<ComplexF> = mult
                .iter()
                .map(|mm| {
                    let mut tr = ComplexF::zero();
                    for k in lo..=hi {
                        // (Q^H M Q)[k,k]
                        let mut col = vec![ComplexF::zero(); m];
                        for i in 0..m {
                            for j in 0..m {
                                col[i] += mm[(i, j)] * q[(j, k)];
                            }
                        }
                        let mut diag = ComplexF::zero();
                        for i in 0..m {
                            diag += q[(i, k)].conj() * col[i];
                        }
                        tr += diag;
                    }
                    tr / size as f64
                })
                .collect();
            points.push(VarietyPoint { coords });
            lo = hi + 1;
        }
        // Deduplicate near-identical points.
        let max_mag = points
            .iter()
            .flat_map(|p| p.coords.iter().map(|c| c.norm()))
            .fold(0.0, f64::max);
        let dedup_tol = tol * (1.0 + max_mag);
        let mut kept: Vec<VarietyPoint> = Vec::new();
        for p in points {
            let dup = kept.iter().any(|k| {
                k.coords
                    .iter()
                    .zip(&p.coords)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
                    <= dedup_tol
            });
            if !dup {
                kept.push(p);
            }
        }
        // Verify every border polynomial vanishes at every point.
        for p in &kept {
            if !self.point_satisfies_border(&p.coords, tol) {
                return Err(Error::VarietyVerification(1));
            }
        }
        kept.sort_by(|a, b| {
            for (x, y) in a.coords.iter().zip(&b.coords) {
                match x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()) {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            std::cmp::Ordering::Equal
        });
        Ok(kept)
    }

    /// |g(p)| <= tol * (1 + sum of term magnitudes), for every border g.
    pub fn point_satisfies_border(&self, coords: &[ComplexF], tol: f64) -> bool {
        for g in &self.border_basis {
            let gc = g.to_complex();
            let mut value = ComplexF::zero();
            let mut scale = 1.0f64;
            for (mono, c) in gc.terms() {
                let mut term = *c;
                for (i, &e) in mono.0.iter().enumerate() {
                    for _ in 0..e {
                        term *= coords[i];
                    }
                }
                value += term;
                scale += term.norm();
            }
            if value.norm() > tol * scale {
                return false;
            }
        }
        true
    }
}

/// Swaps the adjacent diagonal entries k, k+1 of a Schur form (updating Q)
/// with a Givens rotation built from the eigenvector of the trailing value.
fn swap_adjacent_schur(q: &mut CMatrix, t: &mut CMatrix, k: usize) {
    let n = t.rows();
    let l1 = t[(k, k)];
    let l2 = t[(k + 1, k + 1)];
    let tk = t[(k, k + 1)];
    // eigenvector of [[l1, tk],[0, l2]] for l2 is (tk, l2 - l1)
    let vx = tk;
    let vy = l2 - l1;
    let norm = (vx.norm_sqr() + vy.norm_sqr()).sqrt();
    if norm <= 1e-300 {
        return;
    }
    let c0 = vx / norm;
    let s0 = vy / norm;
    // G = [[c0, -conj(s0)], [s0, conj(c0)]]; columns orthonormal, first = v/|v|.
    // rows k,k+1 of T: T <- G^H T (on those rows)
    for j in 0..n {
        let a = t[(k, j)];
        let b = t[(k + 1, j)];
        t[(k, j)] = c0.conj() * a + s0.conj() * b;
        t[(k + 1, j)] = -s0 * a + c0 * b;
    }
    // cols k,k+1 of T: T <- T G
    for i in 0..n {
        let a = t[(i, k)];
        let b = t[(i, k + 1)];
        t[(i, k)] = a * c0 + b * s0;
        t[(i, k + 1)] = -a * s0.conj() + b * c0.conj();
    }
    // Q <- Q G
    for i in 0..n {
        let a = q[(i, k)];
        let b = q[(i, k + 1)];
        q[(i, k)] = a * c0 + b * s0;
        q[(i, k + 1)] = -a * s0.conj() + b * c0.conj();
    }
    t[(k + 1, k)] = ComplexF::zero();
}

/// Monic least-degree polynomial with p(A) = 0, from the first linear
/// dependency among the powers of A.
pub fn minimal_polynomial(a: &QMatrix) -> Result<QPoly> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("minimal polynomial needs a square matrix".into()));
    }
    let w = a.rows();
    let mut tracker: SpanTracker<Rational> = SpanTracker::new(w * w);
    let mut power: QMatrix = Matrix::identity(w);
    for k in 0..=w {
        match tracker.insert(&power.vectorize()) {
            SpanOutcome::Independent => {}
            SpanOutcome::Dependent(coeffs) => {
                let mut p = QPoly::monomial(Monomial(vec![k as u32]), Rational::one());
                for (j, c) in coeffs.iter().enumerate() {
                    p.add_term(Monomial(vec![j as u32]), Rational::zero() - c.clone());
                }
                return Ok(p);
            }
        }
        power = power.mul(a);
    }
    Err(Error::Internal("powers of A exceeded the Cayley-Hamilton bound".into()))
}

/// The complex conjugate-transpose check lives in eigen; re-exported here
/// for variety users needing residual diagnostics.
pub fn unitary_residual(q: &CMatrix) -> f64 {
    let n = q.rows();
    let qhq = conj_transpose(q).mul(q);
    let ident: CMatrix = Matrix::identity(n);
    frobenius(&qhq.sub(&ident))
}
