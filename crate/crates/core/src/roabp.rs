//! ROABP representations and the explicit constructions: the general
//! per-layer form, the coefficient-matrix (commutative) form, the diagonal
//! form as a weighted sum of products of univariates, Nisan width/size
//! profiles, and the Lagrange curve form of a diagonal ROABP.

use crate::error::{Error, Result};
use crate::matrix::{rank_exact, Matrix};
use crate::poly::{default_nodes, interpolate_univariate, interpolation_weights, Monomial, Poly};
use crate::scalar::{factorial, Rational, Scalar};
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Guard for full expansions: (d+1)^n enumerable monomials.
const EXPAND_GUARD: u64 = 1_000_000;

fn expand_guard(n: usize, d: u32) -> Result<()> {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(d as u64 + 1);
        if total > EXPAND_GUARD {
            return Err(Error::SizeGuard(format!("(d+1)^n > {}", EXPAND_GUARD)));
        }
    }
    Ok(())
}

/// Matrix with univariate polynomial entries; one ROABP layer.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMat<S> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<S>>,
}

impl<S: Scalar> PolyMat<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly<S>>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        assert!(entries.iter().all(|p| p.vars() == 1));
        PolyMat { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn eval(&self, x: &S) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.entry(i, j).eval(std::slice::from_ref(x)).expect("univariate eval")
        })
    }

    pub fn max_entry_degree(&self) -> u32 {
        self.entries.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }
}

/// General read-once oblivious ABP: boundary vectors around a product of
/// per-variable layers; layer i reads variable `order[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Roabp<S> {
    pub n: usize,
    pub d: u32,
    pub order: Vec<usize>,
    pub layers: Vec<PolyMat<S>>,
    pub u: Vec<S>,
    pub c: Vec<S>,
}

impl<S: Scalar> Roabp<S> {
    pub fn new(
        n: usize,
        d: u32,
        order: Vec<usize>,
        layers: Vec<PolyMat<S>>,
        u: Vec<S>,
        c: Vec<S>,
    ) -> Result<Self> {
        if order.len() != n || layers.len() != n {
            return Err(Error::DimensionMismatch("order/layer count must equal n".into()));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(Error::InvalidParameter("order is not a permutation".into()));
            }
            seen[v] = true;
        }
        for w in layers.windows(2) {
            if w[0].cols() != w[1].rows() {
                return Err(Error::DimensionMismatch("adjacent layer dimensions".into()));
            }
        }
        if let Some(first) = layers.first() {
            if u.len() != first.rows() {
                return Err(Error::DimensionMismatch("u length vs first layer rows".into()));
            }
        }
        if let Some(last) = layers.last() {
            if c.len() != last.cols() {
                return Err(Error::DimensionMismatch("c length vs last layer cols".into()));
            }
        }
        if layers.iter().any(|l| l.max_entry_degree() > d) {
            return Err(Error::InvalidParameter("layer entry degree exceeds d".into()));
        }
        Ok(Roabp { n, d, order, layers, u, c })
    }

    pub fn width(&self) -> usize {
        self.layers
            .iter()
            .flat_map(|l| [l.rows(), l.cols()])
            .chain([self.u.len(), self.c.len()])
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &[S]) -> Result<S> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch("eval point length".into()));
        }
        let mut v = self.u.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            let m = layer.eval(&point[self.order[i]]);
            v = row_times_matrix(&v, &m);
        }
        Ok(dot(&v, &self.c))
    }

    /// Full sparse expansion of the computed polynomial.
    pub fn expand(&self) -> Result<Poly<S>> {
        expand_guard(self.n, self.d)?;
        let mut row: Vec<Poly<S>> =
            self.u.iter().map(|s| Poly::constant(self.n, s.clone())).collect();
        for (i, layer) in self.layers.iter().enumerate() {
            let var = self.order[i];
            let lifted: Vec<Poly<S>> = (0..layer.rows() * layer.cols())
                .map(|idx| {
                    let p = &layer.entries[idx];
                    p.embed(self.n, &[var])
                })
                .collect();
            let mut next = vec![Poly::zero(self.n); layer.cols()];
            for (j, slot) in next.iter_mut().enumerate() {
                for k in 0..layer.rows() {
                    if row[k].is_zero() {
                        continue;
                    }
                    *slot = slot.add(&row[k].mul(&lifted[k * layer.cols() + j]));
                }
            }
            row = next;
        }
        let mut out = Poly::zero(self.n);
        for (p, cv) in row.iter().zip(&self.c) {
            out = out.add(&p.scale(cv));
        }
        Ok(out)
    }

    /// Reinterprets the layers as coefficient matrices; requires square
    /// equal-width layers whose coefficient matrices pairwise commute.
    pub fn to_comm(&self) -> Result<CommRoabp<S>> {
        let w = self.u.len();
        if self.layers.iter().any(|l| l.rows() != w || l.cols() != w) || self.c.len() != w {
            return Err(Error::DimensionMismatch(
                "coefficient form needs uniform square layers".into(),
            ));
        }
        if self.order != (0..self.n).collect::<Vec<_>>() {
            return Err(Error::InvalidParameter(
                "coefficient form is defined for the identity order".into(),
            ));
        }
        let coeff = (0..self.n)
            .map(|i| {
                (0..=self.d)
                    .map(|j| {
                        Matrix::from_fn(w, w, |k, l| {
                            self.layers[i].entry(k, l).coeff(&Monomial(vec![j]))
                        })
                    })
                    .collect()
            })
            .collect();
        CommRoabp::new(self.n, self.d, w, coeff, self.u.clone(), self.c.clone())
    }
}

/// Commutative ROABP in coefficient-matrix form: each layer is the
/// univariate sum_j A[i][j] x_i^j, and all coefficient matrices across all
/// layers pairwise commute (checked at construction).
#[derive(Debug, Clone, PartialEq)]
pub struct CommRoabp<S> {
    pub n: usize,
    pub d: u32,
    pub w: usize,
    /// coeff[i][j] is the w x w matrix of x_i^j.
    pub coeff: Vec<Vec<Matrix<S>>>,
    pub b: Vec<S>,
    pub c: Vec<S>,
}

impl<S: Scalar> CommRoabp<S> {
    pub fn new(
        n: usize,
        d: u32,
        w: usize,
        coeff: Vec<Vec<Matrix<S>>>,
        b: Vec<S>,
        c: Vec<S>,
    ) -> Result<Self> {
        if coeff.len() != n || coeff.iter().any(|row| row.len() != d as usize + 1) {
            return Err(Error::DimensionMismatch("coefficient matrix grid must be n x (d+1)".into()));
        }
        let all: Vec<&Matrix<S>> = coeff.iter().flatten().collect();
        if all.iter().any(|m| m.rows() != w || m.cols() != w) {
            return Err(Error::DimensionMismatch("coefficient matrices must be w x w".into()));
        }
        if b.len() != w || c.len() != w {
            return Err(Error::DimensionMismatch("boundary vectors must have length w".into()));
        }
        for (idx, a) in all.iter().enumerate() {
            for bm in &all[idx + 1..] {
                if !a.commutes_with(bm) {
                    return Err(Error::NonCommuting);
                }
            }
        }
        Ok(CommRoabp { n, d, w, coeff, b, c })
    }

    /// All n(d+1) coefficient matrices, row by row.
    pub fn coefficient_matrices(&self) -> impl Iterator<Item = &Matrix<S>> {
        self.coeff.iter().flatten()
    }

    pub fn layer_matrix(&self, i: usize, x: &S) -> Matrix<S> {
        let mut acc = Matrix::zero(self.w, self.w);
        let mut power = S::one();
        for j in 0..=self.d as usize {
            acc = acc.add(&self.coeff[i][j].scale(&power));
            power = power * x.clone();
        }
        acc
    }

    pub fn eval(&self, point: &[S]) -> Result<S> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch("eval point length".into()));
        }
        let mut v = self.b.clone();
        for (i, x) in point.iter().enumerate() {
            let m = self.layer_matrix(i, x);
            v = row_times_matrix(&v, &m);
        }
        Ok(dot(&v, &self.c))
    }

    pub fn expand(&self) -> Result<Poly<S>> {
        self.to_roabp().expand()
    }

    pub fn to_roabp(&self) -> Roabp<S> {
        let layers = (0..self.n)
            .map(|i| {
                let entries = (0..self.w * self.w)
                    .map(|idx| {
                        let (k, l) = (idx / self.w, idx % self.w);
                        Poly::from_terms(
                            1,
                            (0..=self.d).map(|j| {
                                (Monomial(vec![j]), self.coeff[i][j as usize][(k, l)].clone())
                            }),
                        )
                    })
                    .collect();
                PolyMat::new(self.w, self.w, entries)
            })
            .collect();
        Roabp {
            n: self.n,
            d: self.d,
            order: (0..self.n).collect(),
            layers,
            u: self.b.clone(),
            c: self.c.clone(),
        }
    }
}

/// Diagonal ROABP: weighted sum of products of univariates.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagRoabp<S> {
    pub n: usize,
    pub d: u32,
    /// rows[k][i] is the univariate factor of x_i in product k.
    pub rows: Vec<Vec<Poly<S>>>,
    pub weights: Vec<S>,
}

impl<S: Scalar> DiagRoabp<S> {
    pub fn new(n: usize, d: u32, rows: Vec<Vec<Poly<S>>>, weights: Vec<S>) -> Result<Self> {
        if rows.len() != weights.len() {
            return Err(Error::DimensionMismatch("one weight per product row".into()));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch("each row needs n univariate factors".into()));
            }
            if row.iter().any(|p| p.vars() != 1 || p.total_degree() > d) {
                return Err(Error::InvalidParameter("row factor degree exceeds d".into()));
            }
        }
        Ok(DiagRoabp { n, d, rows, weights })
    }

    pub fn width(&self) -> usize {
        self.rows.len()
    }

    pub fn eval(&self, point: &[S]) -> Result<S> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch("eval point length".into()));
        }
        let mut acc = S::zero();
        for (row, wt) in self.rows.iter().zip(&self.weights) {
            let mut prod = wt.clone();
            for (i, p) in row.iter().enumerate() {
                prod = prod * p.eval(std::slice::from_ref(&point[i]))?;
            }
            acc = acc + prod;
        }
        Ok(acc)
    }

    pub fn expand(&self) -> Result<Poly<S>> {
        expand_guard(self.n, self.d)?;
        let mut out = Poly::zero(self.n);
        for (row, wt) in self.rows.iter().zip(&self.weights) {
            let mut prod = Poly::constant(self.n, wt.clone());
            for (i, p) in row.iter().enumerate() {
                prod = prod.mul(&p.embed(self.n, &[i]));
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// Equivalent CommRoabp with diagonal coefficient matrices.
    pub fn to_comm(&self) -> Result<CommRoabp<S>> {
        let w = self.width();
        let coeff = (0..self.n)
            .map(|i| {
                (0..=self.d)
                    .map(|j| {
                        Matrix::from_fn(w, w, |k, l| {
                            if k == l {
                                self.rows[k][i].coeff(&Monomial(vec![j]))
                            } else {
                                S::zero()
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        CommRoabp::new(self.n, self.d, w, coeff, vec![S::one(); w], self.weights.clone())
    }
}

/// Nisan rank profile of a polynomial in a fixed order: the exact rank of
/// each prefix-split coefficient matrix, their sum, and their max.
#[derive(Debug, Clone, PartialEq)]
pub struct NisanProfile {
    pub order: Vec<usize>,
    pub ranks: Vec<usize>,
    pub size: usize,
    pub width: usize,
}

/// Builds the prefix-split coefficient matrices of `f` and returns their
/// exact ranks. Row/column monomials are enumerated from the support of
/// `f` in graded-lex order; all-zero rows and columns of the full matrix
/// are omitted, which leaves every rank unchanged.
pub fn nisan_profile(f: &Poly<Rational>, order: &[usize]) -> Result<NisanProfile> {
    let n = f.vars();
    if order.len() != n {
        return Err(Error::DimensionMismatch("order length must equal variable count".into()));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return Err(Error::InvalidParameter("order is not a permutation".into()));
        }
        seen[v] = true;
    }
    let mut ranks = Vec::new();
    for i in 1..n {
        let prefix_vars: BTreeSet<usize> = order[..i].iter().copied().collect();
        let mut row_monos: BTreeSet<Monomial> = BTreeSet::new();
        let mut col_monos: BTreeSet<Monomial> = BTreeSet::new();
        for m in f.support() {
            let mut pre = vec![0u32; n];
            let mut suf = vec![0u32; n];
            for (v, &e) in m.0.iter().enumerate() {
                if prefix_vars.contains(&v) {
                    pre[v] = e;
                } else {
                    suf[v] = e;
                }
            }
            row_monos.insert(Monomial(pre));
            col_monos.insert(Monomial(suf));
        }
        let rows: Vec<&Monomial> = row_monos.iter().collect();
        let cols: Vec<&Monomial> = col_monos.iter().collect();
        let mat = Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            f.coeff(&rows[r].mul(cols[c]))
        });
        ranks.push(rank_exact(&mat));
    }
    let size = ranks.iter().sum();
    let width = ranks.iter().copied().max().unwrap_or(0);
    Ok(NisanProfile { order: order.to_vec(), ranks, size, width })
}

/// Width-(d+1) commutative ROABP for the elementary symmetric polynomial:
/// every layer is I + A x_i with A the superdiagonal shift.
pub fn construct_esym_comm(n: usize, d: u32) -> Result<CommRoabp<Rational>> {
    if d as usize > n {
        return Err(Error::InvalidParameter(format!("esym requires d <= n, got d={} n={}", d, n)));
    }
    let w = d as usize + 1;
    let ident: Matrix<Rational> = Matrix::identity(w);
    let shift = Matrix::from_fn(w, w, |k, l| {
        if l == k + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let per_layer: Vec<Matrix<Rational>> = (0..=d)
        .map(|j| match j {
            0 => ident.clone(),
            1 => shift.clone(),
            _ => Matrix::zero(w, w),
        })
        .collect();
    let coeff: Vec<Vec<Matrix<Rational>>> = vec![per_layer; n];
    let mut b = vec![Rational::zero(); w];
    b[0] = Rational::one();
    let mut c = vec![Rational::zero(); w];
    c[w - 1] = Rational::one();
    CommRoabp::new(n, d, w, coeff, b, c)
}

/// Ben-Or form: width-(n+1) diagonal ROABP for the elementary symmetric
/// polynomial, from coefficient-of-t^d interpolation on prod_i (1 + t x_i).
pub fn construct_esym_diag(
    n: usize,
    d: u32,
    nodes: &[Rational],
) -> Result<DiagRoabp<Rational>> {
    if nodes.len() != n + 1 {
        return Err(Error::InvalidParameter(format!("need n+1 = {} nodes", n + 1)));
    }
    let weights_mat = interpolation_weights(nodes)?;
    let betas: Vec<Rational> = (0..=n).map(|k| weights_mat[(d as usize, k)].clone()).collect();
    let rows: Vec<Vec<Poly<Rational>>> = nodes
        .iter()
        .map(|a| {
            (0..n)
                .map(|_| {
                    Poly::from_terms(
                        1,
                        [
                            (Monomial(vec![0]), Rational::one()),
                            (Monomial(vec![1]), a.clone()),
                        ],
                    )
                })
                .collect()
        })
        .collect();
    DiagRoabp::new(n, d.max(1), rows, betas)
}

/// Width-(d+1) commutative ROABP for (x_1 + ... + x_n)^d: layers are
/// I + A x + A^2 x^2/2! + ... for the weighted shift A[k,k+1] = d-k.
pub fn construct_power_comm(n: usize, d: u32) -> Result<CommRoabp<Rational>> {
    let w = d as usize + 1;
    let shift = Matrix::from_fn(w, w, |k, l| {
        if l == k + 1 {
            Rational::from_i64(d as i64 - k as i64)
        } else {
            Rational::zero()
        }
    });
    let mut coeff_row: Vec<Matrix<Rational>> = Vec::with_capacity(w);
    let mut power: Matrix<Rational> = Matrix::identity(w);
    for j in 0..=d {
        let fact = Rational::from_bigint(&factorial(j));
        coeff_row.push(power.scale(&(Rational::one() / fact)));
        power = power.mul(&shift);
    }
    let coeff = vec![coeff_row; n];
    let mut b = vec![Rational::zero(); w];
    b[0] = Rational::one();
    let mut c = vec![Rational::zero(); w];
    c[w - 1] = Rational::one();
    CommRoabp::new(n, d, w, coeff, b, c)
}

/// Duality-trick form: width-(nd+1) diagonal ROABP for (x_1+...+x_n)^d,
/// with truncated-exponential factors 1 + a x + a^2 x^2/2! + ...
pub fn construct_power_diag(
    n: usize,
    d: u32,
    nodes: &[Rational],
) -> Result<DiagRoabp<Rational>> {
    let needed = n * d as usize + 1;
    if nodes.len() != needed {
        return Err(Error::InvalidParameter(format!("need nd+1 = {} nodes", needed)));
    }
    let weights_mat = interpolation_weights(nodes)?;
    let d_fact = Rational::from_bigint(&factorial(d));
    let betas: Vec<Rational> = (0..needed)
        .map(|k| weights_mat[(d as usize, k)].clone() * d_fact.clone())
        .collect();
    let rows: Vec<Vec<Poly<Rational>>> = nodes
        .iter()
        .map(|a| {
            let factor = Poly::from_terms(
                1,
                (0..=d).map(|l| {
                    let mut coef = Rational::one() / Rational::from_bigint(&factorial(l));
                    for _ in 0..l {
                        coef *= a.clone();
                    }
                    (Monomial(vec![l]), coef)
                }),
            );
            vec![factor; n]
        })
        .collect();
    DiagRoabp::new(n, d, rows, betas)
}

/// Lagrange curve form of a diagonal ROABP: bivariate factors
/// G_i(t, x_i) = sum_j L_j(t) rows[j][i](x_i) with the weights folded into
/// the first factor, plus the interpolation nodes. Summing the product of
/// factors over the nodes reproduces the polynomial; each factor has
/// t-degree <= w-1. Variable 0 is t, variable 1 the layer's own x_i.
pub struct CurveFactors<S> {
    pub factors: Vec<Poly<S>>,
    pub nodes: Vec<S>,
}

impl<S: Scalar> CurveFactors<S> {
    pub fn eval(&self, point: &[S]) -> Result<S> {
        let mut acc = S::zero();
        for node in &self.nodes {
            let mut prod = S::one();
            for (i, g) in self.factors.iter().enumerate() {
                prod = prod * g.eval(&[node.clone(), point[i].clone()])?;
            }
            acc = acc + prod;
        }
        Ok(acc)
    }
}

pub fn to_curve_form<S: Scalar>(r: &DiagRoabp<S>) -> Result<CurveFactors<S>> {
    let w = r.width();
    if w == 0 {
        return Ok(CurveFactors { factors: vec![Poly::zero(2); r.n], nodes: vec![] });
    }
    let nodes: Vec<S> = default_nodes(w);
    // Lagrange basis L_j with L_j(node_k) = delta_jk.
    let lagrange: Vec<Poly<S>> = (0..w)
        .map(|j| {
            let values: Vec<(S, S)> = nodes
                .iter()
                .enumerate()
                .map(|(k, node)| (node.clone(), if k == j { S::one() } else { S::zero() }))
                .collect();
            interpolate_univariate(&values)
        })
        .collect::<Result<_>>()?;
    let factors: Vec<Poly<S>> = (0..r.n)
        .map(|i| {
            let mut g = Poly::zero(2);
            for (j, basis) in lagrange.iter().enumerate() {
                let mut row_factor = r.rows[j][i].clone();
                if i == 0 {
                    row_factor = row_factor.scale(&r.weights[j]);
                }
                // t is variable 0, x_i is variable 1
                g = g.add(&basis.embed(2, &[0]).mul(&row_factor.embed(2, &[1])));
            }
            g
        })
        .collect();
    Ok(CurveFactors { factors, nodes })
}

fn row_times_matrix<S: Scalar>(v: &[S], m: &Matrix<S>) -> Vec<S> {
    assert_eq!(v.len(), m.rows());
    (0..m.cols())
        .map(|j| {
            let mut acc = S::zero();
            for (i, vi) in v.iter().enumerate() {
                acc = acc + vi.clone() * m[(i, j)].clone();
            }
            acc
        })
        .collect()
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rational};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q(v: i64) -> Rational {
        rat_int(v)
    }

    /// Independent oracle: sum over size-d subsets of variable products.
    pub fn brute_esym(n: usize, d: u32) -> Poly<Rational> {
        let mut out = Poly::zero(n);
        let mut subset = Vec::new();
        fn rec(
            start: usize,
            remaining: u32,
            n: usize,
            subset: &mut Vec<usize>,
            out: &mut Poly<Rational>,
        ) {
            if remaining == 0 {
                let mut e = vec![0u32; n];
                for &i in subset.iter() {
                    e[i] = 1;
                }
                out.add_term(Monomial(e), Rational::one());
                return;
            }
            for i in start..n {
                subset.push(i);
                rec(i + 1, remaining - 1, n, subset, out);
                subset.pop();
            }
        }
        rec(0, d, n, &mut subset, &mut out);
        out
    }

    /// Independent oracle: multinomial expansion of (x_1+...+x_n)^d.
    pub fn brute_power(n: usize, d: u32) -> Poly<Rational> {
        let mut out = Poly::zero(n);
        let mut expo = vec![0u32; n];
        fn rec(i: usize, left: u32, expo: &mut Vec<u32>, out: &mut Poly<Rational>, d: u32) {
            let n = expo.len();
            if i == n - 1 {
                expo[i] = left;
                let denom: num_bigint::BigInt =
                    expo.iter().map(|&e| factorial(e)).product();
                let coef = Rational::from_bigint(&factorial(d)) / Rational::from_bigint(&denom);
                out.add_term(Monomial(expo.clone()), coef);
                expo[i] = 0;
                return;
            }
            for e in 0..=left {
                expo[i] = e;
                rec(i + 1, left - e, expo, out, d);
            }
            expo[i] = 0;
        }
        if n == 0 {
            return out;
        }
        rec(0, d, &mut expo, &mut out, d);
        out
    }

    #[test]
    fn esym_comm_eval_at_ones() {
        // ESym^3_5(1,...,1) = C(5,3) = 10
        let r = construct_esym_comm(5, 3).unwrap();
        assert_eq!(r.eval(&vec![q(1); 5]).unwrap(), q(10));
        // d = 0 gives the constant 1
        let r = construct_esym_comm(4, 0).unwrap();
        assert_eq!(r.eval(&vec![q(9); 4]).unwrap(), q(1));
        // d > n rejected
        assert!(construct_esym_comm(3, 5).is_err());
    }

    #[test]
    fn esym_comm_expands_to_brute_force() {
        let r = construct_esym_comm(3, 2).unwrap();
        let expanded = r.expand().unwrap();
        assert_eq!(expanded, brute_esym(3, 2));
        // explicit shape: x1x2 + x1x3 + x2x3
        assert_eq!(expanded.num_terms(), 3);
        assert_eq!(expanded.coeff(&Monomial(vec![1, 1, 0])), q(1));
    }

    #[test]
    fn power_comm_matches_multinomial() {
        let r = construct_power_comm(4, 3).unwrap();
        assert_eq!(r.eval(&vec![q(1); 4]).unwrap(), q(64));
        let r = construct_power_comm(5, 0).unwrap();
        assert_eq!(r.eval(&vec![q(3); 5]).unwrap(), q(1));
        let r = construct_power_comm(2, 2).unwrap();
        assert_eq!(r.expand().unwrap(), brute_power(2, 2));
    }

    #[test]
    fn diag_constructions_agree_with_comm() {
        let nodes: Vec<Rational> = (0..4).map(q).collect();
        let diag = construct_esym_diag(3, 2, &nodes).unwrap();
        assert_eq!(diag.expand().unwrap(), construct_esym_comm(3, 2).unwrap().expand().unwrap());
        // d = 0 constant
        let diag0 = construct_esym_diag(3, 0, &nodes).unwrap();
        assert_eq!(diag0.expand().unwrap(), Poly::constant(3, q(1)));

        let nodes: Vec<Rational> = (0..5).map(q).collect();
        let diag = construct_power_diag(2, 2, &nodes).unwrap();
        assert_eq!(diag.expand().unwrap(), brute_power(2, 2));
        let diag0 = construct_power_diag(3, 0, &[q(0)]).unwrap();
        assert_eq!(diag0.expand().unwrap(), Poly::constant(3, q(1)));
        let nodes: Vec<Rational> = (0..10).map(q).collect();
        let diag = construct_power_diag(3, 3, &nodes).unwrap();
        let comm = construct_power_comm(3, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let pt: Vec<Rational> = (0..3).map(|_| q(rng.gen_range(-50..50))).collect();
            assert_eq!(diag.eval(&pt).unwrap(), comm.eval(&pt).unwrap());
        }
    }

    #[test]
    fn esym_diag_agreement_at_random_points() {
        let nodes: Vec<Rational> = (0..6).map(q).collect();
        let diag = construct_esym_diag(5, 3, &nodes).unwrap();
        let comm = construct_esym_comm(5, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let pt: Vec<Rational> = (0..5).map(|_| q(rng.gen_range(-9..10))).collect();
            assert_eq!(diag.eval(&pt).unwrap(), comm.eval(&pt).unwrap());
        }
    }

    #[test]
    fn zero_layer_and_zero_boundary() {
        let r = construct_esym_comm(3, 2).unwrap();
        // point where one layer evaluates to zero matrix never happens for
        // esym (I + A x is unipotent); instead zero the boundary:
        let mut z = r.clone();
        z.b = vec![q(0); z.w];
        assert_eq!(z.expand().unwrap(), Poly::zero(3));
        assert_eq!(z.eval(&[q(2), q(3), q(4)]).unwrap(), q(0));
    }

    #[test]
    fn width_one_diag_expand() {
        let one_plus_x = Poly::from_terms(1, [(Monomial(vec![0]), q(1)), (Monomial(vec![1]), q(1))]);
        let diag =
            DiagRoabp::new(2, 1, vec![vec![one_plus_x.clone(), one_plus_x]], vec![q(1)]).unwrap();
        let f = diag.expand().unwrap();
        // (1+x1)(1+x2)
        assert_eq!(f.coeff(&Monomial(vec![0, 0])), q(1));
        assert_eq!(f.coeff(&Monomial(vec![1, 1])), q(1));
        assert_eq!(f.num_terms(), 4);
    }

    #[test]
    fn nisan_profile_interleaved_vs_separated() {
        // f = (x1+y1)(x2+y2) with variables (x1,x2,y1,y2) = (0,1,2,3)
        let x1 = Poly::<Rational>::variable(4, 0);
        let x2 = Poly::<Rational>::variable(4, 1);
        let y1 = Poly::<Rational>::variable(4, 2);
        let y2 = Poly::<Rational>::variable(4, 3);
        let f = x1.add(&y1).mul(&x2.add(&y2));

        // interleaved order (x1, y1, x2, y2)
        let p = nisan_profile(&f, &[0, 2, 1, 3]).unwrap();
        assert_eq!(p.ranks, vec![2, 1, 2]);
        assert_eq!(p.width, 2);
        assert_eq!(p.size, 5);

        // separated order (x1, x2, y1, y2): middle cut has rank 4
        let p = nisan_profile(&f, &[0, 1, 2, 3]).unwrap();
        assert_eq!(p.ranks[1], 4);
        assert_eq!(p.width, 4);
    }

    #[test]
    fn nisan_rank_one_for_full_product() {
        let n = 5;
        let mut f = Poly::<Rational>::one(n);
        for i in 0..n {
            f = f.mul(&Poly::variable(n, i));
        }
        let p = nisan_profile(&f, &[0, 1, 2, 3, 4]).unwrap();
        assert!(p.ranks.iter().all(|&r| r == 1));
        assert_eq!(p.width, 1);
    }

    #[test]
    fn nisan_prefix_split_of_two_var_product() {
        // M_2 of (x1+y1)(x2+y2) under order (x1,x2,y1,y2) has rank 4,
        // which equals the count of independent monomial coefficients.
        let x1 = Poly::<Rational>::variable(4, 0);
        let x2 = Poly::<Rational>::variable(4, 1);
        let y1 = Poly::<Rational>::variable(4, 2);
        let y2 = Poly::<Rational>::variable(4, 3);
        let f = x1.add(&y1).mul(&x2.add(&y2));
        let p = nisan_profile(&f, &[0, 1, 2, 3]).unwrap();
        assert_eq!(p.ranks[1], 4);
    }

    #[test]
    fn curve_form_matches_diag() {
        let nodes: Vec<Rational> = (0..4).map(q).collect();
        let diag = construct_esym_diag(3, 2, &nodes).unwrap();
        let curve = to_curve_form(&diag).unwrap();
        assert_eq!(curve.nodes.len(), diag.width());
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let pt: Vec<Rational> = (0..3).map(|_| q(rng.gen_range(-9..10))).collect();
            assert_eq!(curve.eval(&pt).unwrap(), diag.eval(&pt).unwrap());
        }
        // t-degree <= w-1 per factor
        for g in &curve.factors {
            let max_t = g.support().map(|m| m.0[0]).max().unwrap_or(0);
            assert!((max_t as usize) < diag.width());
        }

        // width-1 input: single node, factors equal the row
        let one_plus_x =
            Poly::from_terms(1, [(Monomial(vec![0]), q(1)), (Monomial(vec![1]), q(1))]);
        let d1 = DiagRoabp::new(1, 1, vec![vec![one_plus_x]], vec![q(1)]).unwrap();
        let c1 = to_curve_form(&d1).unwrap();
        assert_eq!(c1.nodes.len(), 1);
        assert_eq!(c1.eval(&[q(7)]).unwrap(), q(8));

        // empty diag: zero polynomial
        let d0: DiagRoabp<Rational> = DiagRoabp::new(2, 1, vec![], vec![]).unwrap();
        let c0 = to_curve_form(&d0).unwrap();
        assert_eq!(c0.eval(&[q(1), q(2)]).unwrap(), q(0));
    }

    #[test]
    fn comm_roabp_rejects_non_commuting() {
        let a = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let b = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let ident: Matrix<Rational> = Matrix::identity(2);
        let res = CommRoabp::new(
            2,
            1,
            2,
            vec![vec![ident.clone(), a], vec![ident, b]],
            vec![q(1), q(0)],
            vec![q(0), q(1)],
        );
        assert!(matches!(res, Err(Error::NonCommuting)));
    }

    #[test]
    fn diag_to_comm_is_faithful() {
        let nodes: Vec<Rational> = (0..4).map(q).collect();
        let diag = construct_esym_diag(3, 2, &nodes).unwrap();
        let comm = diag.to_comm().unwrap();
        assert_eq!(comm.w, diag.width());
        assert_eq!(comm.expand().unwrap(), diag.expand().unwrap());
    }

    #[test]
    fn roabp_comm_roundtrip() {
        let comm = construct_power_comm(3, 2).unwrap();
        let general = comm.to_roabp();
        assert_eq!(general.width(), comm.w);
        let back = general.to_comm().unwrap();
        assert_eq!(back.expand().unwrap(), comm.expand().unwrap());
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..10 {
            let pt: Vec<Rational> = (0..3).map(|_| q(rng.gen_range(-9..10))).collect();
            assert_eq!(general.eval(&pt).unwrap(), comm.eval(&pt).unwrap());
        }
    }

    #[test]
    fn expansion_guard_triggers() {
        let r = construct_power_comm(25, 2).unwrap();
        assert!(matches!(r.expand(), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn zero_layer_evaluates_to_zero() {
        // single layer [[x]]: evaluating at 0 zeroes the whole product
        let entry = Poly::monomial(Monomial(vec![1]), q(1));
        let layer = PolyMat::new(1, 1, vec![entry]);
        let r = Roabp::new(1, 1, vec![0], vec![layer], vec![q(5)], vec![q(7)]).unwrap();
        assert_eq!(r.eval(&[q(0)]).unwrap(), q(0));
        assert_eq!(r.eval(&[q(2)]).unwrap(), q(70));
    }

    #[test]
    fn nisan_size_invariant_under_relabeling() {
        // relabel variables of f and permute the order consistently: the
        // rank profile sum cannot change
        let x1 = Poly::<Rational>::variable(4, 0);
        let x2 = Poly::<Rational>::variable(4, 1);
        let y1 = Poly::<Rational>::variable(4, 2);
        let y2 = Poly::<Rational>::variable(4, 3);
        let f = x1.add(&y1).mul(&x2.add(&y2)).add(&x1.mul(&x2).mul(&y2));
        // relabeling pi: variable v of f becomes pi[v] of g
        let pi = [2usize, 0, 3, 1];
        let g = f.embed(4, &pi);
        let order = [0usize, 2, 1, 3];
        let permuted_order: Vec<usize> = order.iter().map(|&v| pi[v]).collect();
        let pf = nisan_profile(&f, &order).unwrap();
        let pg = nisan_profile(&g, &permuted_order).unwrap();
        assert_eq!(pf.ranks, pg.ranks);
        assert_eq!(pf.size, pg.size);
        assert_eq!(pf.width, pg.width);
    }

    #[test]
    fn nisan_width_of_esym_is_at_most_d_plus_one() {
        for n in 2..=5usize {
            for d in 1..=3u32.min(n as u32) {
                let f = construct_esym_comm(n, d).unwrap().expand().unwrap();
                let order: Vec<usize> = (0..n).collect();
                let p = nisan_profile(&f, &order).unwrap();
                assert!(p.width <= d as usize + 1, "n={} d={} width={}", n, d, p.width);
            }
        }
    }
}
