//! Dimension of partial derivatives, constructive Waring decompositions of
//! monomials and polynomials via roots-of-unity coefficient extraction,
//! the catalecticant lower bound, and the conversion of derivative
//! functionals into plain evaluation plans.

use crate::eigen::svd_right;
use crate::error::{Error, Result};
use crate::matrix::{rank_exact, Matrix};
use crate::poly::{interpolation_weights, Monomial, Poly};
use crate::scalar::{binomial, factorial, ComplexF, Rational};

use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::f64::consts::TAU;

pub type QPoly = Poly<Rational>;
pub type CPoly = Poly<ComplexF>;

const DPD_ROW_GUARD: u64 = 100_000;
const EXPANSION_REL_TOL: f64 = 1e-10;

/// One powered linear form: weight * (<form, t> + constant)^power.
#[derive(Debug, Clone)]
pub struct WaringTerm {
    pub weight: ComplexF,
    pub form: Vec<ComplexF>,
    pub constant: ComplexF,
    pub power: u32,
}

/// Sum of powered linear forms equal to a target polynomial.
#[derive(Debug, Clone)]
pub struct WaringDecomposition {
    pub vars: usize,
    pub terms: Vec<WaringTerm>,
}

impl WaringDecomposition {
    pub fn size(&self) -> usize {
        self.terms.len()
    }

    /// Symbolic re-expansion of the decomposition.
    pub fn expand(&self) -> CPoly {
        let mut out = Poly::zero(self.vars);
        for term in &self.terms {
            let mut linear = Poly::constant(self.vars, term.constant);
            for (i, c) in term.form.iter().enumerate() {
                if c.norm() > 0.0 {
                    linear.add_term(Monomial::var(self.vars, i), *c);
                }
            }
            out = out.add(&linear.pow(term.power).scale(&term.weight));
        }
        out
    }

    /// Largest relative coefficient error against the target.
    pub fn expansion_residual(&self, target: &CPoly) -> f64 {
        let expanded = self.expand();
        let scale = target.max_coeff_magnitude().max(1.0);
        let mut worst = 0.0f64;
        let mut monos: BTreeSet<Monomial> = expanded.support().cloned().collect();
        monos.extend(target.support().cloned());
        for m in monos {
            worst = worst.max((expanded.coeff(&m) - target.coeff(&m)).norm() / scale);
        }
        worst
    }

    pub fn check_against(&self, target: &CPoly) -> Result<()> {
        let resid = self.expansion_residual(target);
        if resid > EXPANSION_REL_TOL {
            return Err(Error::DecompositionCheck(resid));
        }
        Ok(())
    }
}

/// Evaluation points and weights realizing a derivative functional:
/// sum_q weights[q] * g(points[q]) = (D_h(g))(alpha) for every g of degree
/// at most `degree_bound`.
#[derive(Debug, Clone)]
pub struct FunctionalEvalPlan {
    pub points: Vec<Vec<ComplexF>>,
    pub weights: Vec<ComplexF>,
    pub degree_bound: u32,
}

impl FunctionalEvalPlan {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn apply(&self, g: &CPoly) -> Result<ComplexF> {
        let mut acc = ComplexF::zero();
        for (y, w) in self.points.iter().zip(&self.weights) {
            acc += *w * g.eval(y)?;
        }
        Ok(acc)
    }
}

/// Exact dimension of the span of all partial derivatives of f.
pub fn dpd(f: &QPoly) -> Result<usize> {
    if f.is_zero() {
        return Ok(0);
    }
    let degs = f.individual_degrees();
    let mut rows: u64 = 1;
    for &d in &degs {
        rows = rows.saturating_mul(d as u64 + 1);
        if rows > DPD_ROW_GUARD {
            return Err(Error::SizeGuard(format!("derivative rows exceed {}", DPD_ROW_GUARD)));
        }
    }
    let derivatives = enumerate_sub_exponents(&degs)
        .into_iter()
        .map(|e| f.derivative(&e))
        .collect::<Vec<_>>();
    let mut columns: BTreeSet<Monomial> = BTreeSet::new();
    for d in &derivatives {
        columns.extend(d.support().cloned());
    }
    let cols: Vec<&Monomial> = columns.iter().collect();
    let mat = Matrix::from_fn(derivatives.len(), cols.len(), |i, j| derivatives[i].coeff(cols[j]));
    Ok(rank_exact(&mat))
}

/// Numeric DPD at a tolerance, for complex-coefficient polynomials.
pub fn dpd_numeric(f: &CPoly, tol: f64) -> Result<usize> {
    if f.is_zero() {
        return Ok(0);
    }
    let degs = f.individual_degrees();
    let mut rows: u64 = 1;
    for &d in &degs {
        rows = rows.saturating_mul(d as u64 + 1);
        if rows > DPD_ROW_GUARD {
            return Err(Error::SizeGuard(format!("derivative rows exceed {}", DPD_ROW_GUARD)));
        }
    }
    let derivatives = enumerate_sub_exponents(&degs)
        .into_iter()
        .map(|e| f.derivative(&e))
        .collect::<Vec<_>>();
    let mut columns: BTreeSet<Monomial> = BTreeSet::new();
    for d in &derivatives {
        columns.extend(d.support().cloned());
    }
    let cols: Vec<&Monomial> = columns.iter().collect();
    let mat = Matrix::from_fn(derivatives.len(), cols.len(), |i, j| derivatives[i].coeff(cols[j]));
    let (sigma, _) = svd_right(&mat)?;
    let smax = sigma.first().copied().unwrap_or(0.0);
    Ok(sigma.iter().filter(|&&s| s > tol * smax).count())
}

fn enumerate_sub_exponents(degs: &[u32]) -> Vec<Monomial> {
    let mut out = vec![Monomial::unit(degs.len())];
    for (i, &d) in degs.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
        for m in &out {
            for e in 0..=d {
                let mut v = m.clone();
                v.0[i] = e;
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// ceil(DPD(f) / (deg f + 1)): a valid lower bound on the Waring rank.
pub fn catalecticant_lower_bound(f: &QPoly) -> Result<usize> {
    let d = dpd(f)?;
    let deg = f.total_degree() as usize;
    Ok(d.div_ceil(deg + 1))
}

fn root_of_unity(order: u32, k: u32) -> ComplexF {
    let angle = TAU * (k % order) as f64 / order as f64;
    ComplexF::new(angle.cos(), angle.sin())
}

/// Waring decomposition of a single monomial x^a into |a|-th powers of
/// homogeneous linear forms, by roots-of-unity coefficient extraction.
/// The term count is at most prod_i (a_i + 1); multilinear monomials use
/// sign vectors with the first variable's coefficient fixed, giving
/// 2^(s-1) exactly real terms.
pub fn monomial_waring(a: &Monomial) -> Result<WaringDecomposition> {
    if a.is_unit() {
        return Err(Error::InvalidParameter("cannot decompose the zero monomial".into()));
    }
    let vars = a.vars();
    let total = a.total_degree();
    let support: Vec<usize> = (0..vars).filter(|&i| a.0[i] > 0).collect();

    // already a pure power
    if support.len() == 1 {
        let mut form = vec![ComplexF::zero(); vars];
        form[support[0]] = ComplexF::new(1.0, 0.0);
        return Ok(WaringDecomposition {
            vars,
            terms: vec![WaringTerm {
                weight: ComplexF::new(1.0, 0.0),
                form,
                constant: ComplexF::zero(),
                power: total,
            }],
        });
    }

    let a_fact = a.factorial().to_f64().unwrap_or(f64::INFINITY);
    let d_fact = factorial(total).to_f64().unwrap_or(f64::INFINITY);
    let lead = a_fact / d_fact;

    let multilinear = support.iter().all(|&i| a.0[i] == 1);
    let mut terms = Vec::new();
    if multilinear {
        // signs over all but the first support variable; collision-free
        let s = support.len();
        let count = 1usize << (s - 1);
        let norm = lead / count as f64;
        for mask in 0..count {
            let mut form = vec![ComplexF::zero(); vars];
            form[support[0]] = ComplexF::new(1.0, 0.0);
            let mut sign_product = 1.0;
            for (bit, &idx) in support[1..].iter().enumerate() {
                let sign = if mask >> bit & 1 == 1 { -1.0 } else { 1.0 };
                sign_product *= sign;
                form[idx] = ComplexF::new(sign, 0.0);
            }
            terms.push(WaringTerm {
                weight: ComplexF::new(norm * sign_product, 0.0),
                form,
                constant: ComplexF::zero(),
                power: total,
            });
        }
    } else {
        // full product of (a_i + 1)-st roots of unity over the support
        let orders: Vec<u32> = support.iter().map(|&i| a.0[i] + 1).collect();
        let count: u64 = orders.iter().map(|&o| o as u64).product();
        let norm = lead / count as f64;
        let mut index = vec![0u32; support.len()];
        loop {
            let mut form = vec![ComplexF::zero(); vars];
            let mut phase = ComplexF::new(1.0, 0.0);
            for (pos, &vi) in support.iter().enumerate() {
                form[vi] = root_of_unity(orders[pos], index[pos]);
                // conjugate weight factor omega^(-j * a_i)
                phase *= root_of_unity(orders[pos], (orders[pos] - index[pos] % orders[pos]) % orders[pos])
                    .powu(a.0[vi]);
            }
            terms.push(WaringTerm {
                weight: phase * norm,
                form,
                constant: ComplexF::zero(),
                power: total,
            });
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == index.len() {
                    break;
                }
                index[pos] += 1;
                if index[pos] < orders[pos] {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
            if pos == index.len() {
                break;
            }
        }
    }

    let dec = WaringDecomposition { vars, terms };
    let target = CPoly::monomial(a.clone(), ComplexF::new(1.0, 0.0));
    dec.check_against(&target)?;
    Ok(dec)
}

/// Decomposition of an arbitrary polynomial: per-monomial decompositions
/// with the coefficients folded into the weights, plus one degree-0 term
/// for the constant part.
pub fn poly_waring(h: &CPoly) -> Result<WaringDecomposition> {
    let vars = h.vars();
    let mut terms = Vec::new();
    for (mono, coeff) in h.terms() {
        if mono.is_unit() {
            terms.push(WaringTerm {
                weight: *coeff,
                form: vec![ComplexF::zero(); vars],
                constant: ComplexF::new(1.0, 0.0),
                power: 0,
            });
            continue;
        }
        let dec = monomial_waring(mono)?;
        for mut t in dec.terms {
            t.weight *= *coeff;
            terms.push(t);
        }
    }
    let dec = WaringDecomposition { vars, terms };
    dec.check_against(h)?;
    Ok(dec)
}

/// Interpolation scalars for the homogeneous-component extraction inside
/// evaluation plans: a centered rational grid normalized into [-1, 1].
/// Rational nodes keep rational decompositions exactly rational (so
/// converted outputs re-rationalize); centering and the unit magnitude
/// bound keep the extraction's dynamic range, and with it the cancellation
/// in the final sum, under control even at t-degrees near twenty.
/// Coincident scaled points are safe: the plan merges them, adding the
/// weights.
fn plan_nodes(count: usize) -> Vec<ComplexF> {
    let low = -((count as i64 - 1) / 2);
    let half = (count as i64 / 2).max(1) as f64;
    (0..count as i64)
        .map(|l| ComplexF::new((low + l) as f64 / half, 0.0))
        .collect()
}

/// Builds the evaluation plan realizing g -> (D_h(g))(alpha) for every g
/// of degree <= d_prime, from a Waring decomposition of h: the degree-j
/// component of each powered form contributes gamma_{j,k} = C(d_k, j) *
/// b_k^(d_k - j) * j! evaluations of g at scaled copies of the form's
/// coefficient vector, recombined by interpolation and translated to
/// alpha. Nearly identical points merge with their weights summed.
pub fn functional_eval_plan(
    h: &CPoly,
    dec: &WaringDecomposition,
    d_prime: u32,
    alpha: &[ComplexF],
) -> Result<FunctionalEvalPlan> {
    if alpha.len() != h.vars() {
        return Err(Error::DimensionMismatch("alpha length must match variable count".into()));
    }
    if d_prime < h.total_degree() {
        return Err(Error::InvalidParameter("d_prime must be at least deg(h)".into()));
    }
    dec.check_against(h)?;

    let nodes = plan_nodes(d_prime as usize + 1);
    let beta = interpolation_weights(&nodes)?;

    let mut points: Vec<Vec<ComplexF>> = Vec::new();
    let mut weights: Vec<ComplexF> = Vec::new();
    for term in &dec.terms {
        for (l, mu) in nodes.iter().enumerate() {
            let point: Vec<ComplexF> =
                term.form.iter().zip(alpha).map(|(c, a)| *mu * *c + *a).collect();
            let mut delta = ComplexF::zero();
            for j in 0..=term.power.min(d_prime) {
                let mut coef = ComplexF::new(
                    binomial(term.power, j).to_f64().unwrap_or(f64::INFINITY)
                        * factorial(j).to_f64().unwrap_or(f64::INFINITY),
                    0.0,
                );
                // b^0 = 1 even for b = 0
                let b_pow = term.power - j;
                if b_pow > 0 {
                    coef *= term.constant.powu(b_pow);
                }
                delta += coef * beta[(j as usize, l)];
            }
            delta *= term.weight;

            // merge with an existing point when essentially identical
            let scale: f64 =
                point.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
            let found = points.iter().position(|p| {
                p.iter().zip(&point).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
                    <= 1e-12 * scale
            });
            match found {
                Some(idx) => weights[idx] += delta,
                None => {
                    points.push(point);
                    weights.push(delta);
                }
            }
        }
    }
    Ok(FunctionalEvalPlan { points, weights, degree_bound: d_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::DerivOperator;
    use crate::scalar::rat_int;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q(v: i64) -> Rational {
        rat_int(v)
    }

    fn c(re: f64) -> ComplexF {
        ComplexF::new(re, 0.0)
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn dpd_examples() {
        // x1 x2: span {x1x2, x1, x2, 1}
        let f: QPoly = Poly::monomial(mono(&[1, 1]), q(1));
        assert_eq!(dpd(&f).unwrap(), 4);
        // (x+y)^2: span {(x+y)^2, x+y, 1}
        let xy: QPoly = Poly::from_terms(2, [(mono(&[1, 0]), q(1)), (mono(&[0, 1]), q(1))]);
        assert_eq!(dpd(&xy.pow(2)).unwrap(), 3);
        // x1x2x3x4: all 16 sub-monomials independent
        let f: QPoly = Poly::monomial(mono(&[1, 1, 1, 1]), q(1));
        assert_eq!(dpd(&f).unwrap(), 16);
        assert_eq!(dpd(&Poly::zero(2)).unwrap(), 0);
    }

    #[test]
    fn dpd_scaling_invariance() {
        let f: QPoly = Poly::from_terms(
            2,
            [(mono(&[2, 1]), q(3)), (mono(&[1, 0]), q(-1)), (mono(&[0, 0]), q(2))],
        );
        let base = dpd(&f).unwrap();
        // scale x1 by 5, x2 by -1/3
        let scaled = Poly::from_terms(
            2,
            f.terms().map(|(m, cf)| {
                let mut factor = cf.clone();
                for _ in 0..m.0[0] {
                    factor *= q(5);
                }
                for _ in 0..m.0[1] {
                    factor *= crate::scalar::rat(-1, 3);
                }
                (m.clone(), factor)
            }),
        );
        assert_eq!(dpd(&scaled).unwrap(), base);
    }

    #[test]
    fn monomial_waring_multilinear_pair() {
        // x1 x2 = ((x1+x2)^2 - (x1-x2)^2) / 4
        let dec = monomial_waring(&mono(&[1, 1])).unwrap();
        assert_eq!(dec.size(), 2);
        assert!(dec.expansion_residual(&CPoly::monomial(mono(&[1, 1]), c(1.0))) < 1e-12);
        // weights are exactly real
        for t in &dec.terms {
            assert!(t.weight.im.abs() < 1e-15);
        }
    }

    #[test]
    fn monomial_waring_pure_power_and_triple() {
        let dec = monomial_waring(&mono(&[3])).unwrap();
        assert_eq!(dec.size(), 1);
        let dec = monomial_waring(&mono(&[1, 1, 1])).unwrap();
        assert!(dec.size() <= 4);
        assert!(dec.expansion_residual(&CPoly::monomial(mono(&[1, 1, 1]), c(1.0))) < 1e-12);
        // zero monomial rejected
        assert!(monomial_waring(&mono(&[0, 0])).is_err());
    }

    #[test]
    fn monomial_waring_general_exponents() {
        for e in [vec![2, 1], vec![3, 2], vec![2, 2, 1]] {
            let m = mono(&e);
            let dec = monomial_waring(&m).unwrap();
            let bound: usize = e.iter().map(|&x| x as usize + 1).product();
            assert!(dec.size() <= bound, "size {} over bound {}", dec.size(), bound);
            assert!(
                dec.expansion_residual(&CPoly::monomial(m.clone(), c(1.0))) < 1e-10,
                "bad expansion for {:?}",
                e
            );
        }
    }

    #[test]
    fn poly_waring_cases() {
        // t^2 + t: both terms already powers
        let h = CPoly::from_terms(1, [(mono(&[2]), c(1.0)), (mono(&[1]), c(1.0))]);
        let dec = poly_waring(&h).unwrap();
        assert_eq!(dec.size(), 2);
        // t1 t2 + 1 -> 2 + 1 terms
        let h = CPoly::from_terms(2, [(mono(&[1, 1]), c(1.0)), (mono(&[0, 0]), c(1.0))]);
        let dec = poly_waring(&h).unwrap();
        assert_eq!(dec.size(), 3);
        // (t1+t2)^3 expanded, decomposed, re-verified
        let t12: CPoly = Poly::from_terms(2, [(mono(&[1, 0]), c(1.0)), (mono(&[0, 1]), c(1.0))]);
        let h = t12.pow(3);
        let dec = poly_waring(&h).unwrap();
        assert!(dec.expansion_residual(&h) < 1e-10);
    }

    #[test]
    fn catalecticant_bounds() {
        let f: QPoly = Poly::monomial(mono(&[1, 1, 1, 1]), q(1));
        assert_eq!(catalecticant_lower_bound(&f).unwrap(), 4);
        let linear: QPoly = Poly::variable(2, 0);
        assert_eq!(catalecticant_lower_bound(&linear).unwrap(), 1);
        let xy: QPoly = Poly::from_terms(2, [(mono(&[1, 0]), q(1)), (mono(&[0, 1]), q(1))]);
        assert_eq!(catalecticant_lower_bound(&xy.pow(2)).unwrap(), 1);
    }

    #[test]
    fn full_span_rank_dominates_each_order() {
        // the rank of the derivatives of any single order k never exceeds
        // the full partial-derivative dimension
        let f: QPoly = Poly::from_terms(
            2,
            [(mono(&[2, 2]), q(1)), (mono(&[1, 0]), q(3)), (mono(&[0, 1]), q(-2))],
        );
        let full = dpd(&f).unwrap();
        let degs = f.individual_degrees();
        for k in 0..=f.total_degree() {
            let rows: Vec<QPoly> = enumerate_sub_exponents(&degs)
                .into_iter()
                .filter(|e| e.total_degree() == k)
                .map(|e| f.derivative(&e))
                .collect();
            let mut columns: BTreeSet<Monomial> = BTreeSet::new();
            for d in &rows {
                columns.extend(d.support().cloned());
            }
            let cols: Vec<&Monomial> = columns.iter().collect();
            let mat = Matrix::from_fn(rows.len(), cols.len(), |i, j| rows[i].coeff(cols[j]));
            assert!(rank_exact(&mat) <= full, "order-{k} rank exceeds the full span");
        }
    }

    #[test]
    fn nw_inequality_on_produced_decompositions() {
        // DPD(target) <= |dec| * (deg + 1) for every decomposition built
        for e in [vec![1u32, 1], vec![2, 1], vec![1, 1, 1], vec![3]] {
            let m = mono(&e);
            let dec = monomial_waring(&m).unwrap();
            let f = QPoly::monomial(m.clone(), q(1));
            let d = dpd(&f).unwrap();
            assert!(
                d <= dec.size() * (m.total_degree() as usize + 1),
                "NW violated for {:?}: dpd {} dec {} deg {}",
                e,
                d,
                dec.size(),
                m.total_degree()
            );
        }
    }

    #[test]
    fn plan_for_single_derivative() {
        // h = t: plan computes g'(0)
        let h = CPoly::monomial(mono(&[1]), c(1.0));
        let dec = poly_waring(&h).unwrap();
        let plan = functional_eval_plan(&h, &dec, 2, &[c(0.0)]).unwrap();
        assert!(plan.size() <= dec.size() * 3);
        for (g, expect) in [
            (CPoly::one(1), 0.0),
            (CPoly::monomial(mono(&[1]), c(1.0)), 1.0),
            (CPoly::monomial(mono(&[2]), c(1.0)), 0.0),
        ] {
            let got = plan.apply(&g).unwrap();
            assert!((got - c(expect)).norm() < 1e-9, "got {} want {}", got, expect);
        }
    }

    #[test]
    fn plan_for_identity_operator() {
        let h = CPoly::one(2);
        let dec = poly_waring(&h).unwrap();
        let alpha = [c(3.0), c(-1.0)];
        let plan = functional_eval_plan(&h, &dec, 3, &alpha).unwrap();
        // identical scaled points all merge into the single point alpha
        assert_eq!(plan.size(), 1);
        assert!((plan.weights[0] - c(1.0)).norm() < 1e-10);
        for (p, a) in plan.points[0].iter().zip(&alpha) {
            assert!((p - a).norm() < 1e-12);
        }
    }

    #[test]
    fn plan_matches_symbolic_operator() {
        let mut rng = StdRng::seed_from_u64(77);
        // h = t1 t2, dPrime = 3, alpha = (1,1)
        let h = CPoly::monomial(mono(&[1, 1]), c(1.0));
        let dec = poly_waring(&h).unwrap();
        let alpha = [c(1.0), c(1.0)];
        let plan = functional_eval_plan(&h, &dec, 3, &alpha).unwrap();
        let op = DerivOperator::new(h.clone());
        for _ in 0..10 {
            let g = random_cpoly(&mut rng, 2, 3);
            let direct = op.apply(&g).eval(&alpha).unwrap();
            let via_plan = plan.apply(&g).unwrap();
            let scale = direct.norm().max(1.0);
            assert!(
                (direct - via_plan).norm() <= 1e-8 * scale,
                "plan mismatch: {} vs {}",
                direct,
                via_plan
            );
        }
    }

    #[test]
    fn plan_spans_all_monomials() {
        // correctness on every monomial of degree <= dPrime spans all g
        let h = CPoly::from_terms(2, [(mono(&[2, 0]), c(2.0)), (mono(&[0, 1]), c(-1.0))]);
        let dec = poly_waring(&h).unwrap();
        let alpha = [c(0.5), c(-2.0)];
        let d_prime = 4;
        let plan = functional_eval_plan(&h, &dec, d_prime, &alpha).unwrap();
        assert!(plan.size() <= dec.size() * (d_prime as usize + 1));
        let op = DerivOperator::new(h.clone());
        for e in crate::dualspace::monomials_up_to(2, d_prime) {
            let g = CPoly::monomial(e.clone(), c(1.0));
            let direct = op.apply(&g).eval(&alpha).unwrap();
            let via_plan = plan.apply(&g).unwrap();
            let scale = direct.norm().max(1.0);
            assert!(
                (direct - via_plan).norm() <= 1e-8 * scale,
                "monomial {:?}: {} vs {}",
                e,
                direct,
                via_plan
            );
        }
    }

    fn random_cpoly(rng: &mut StdRng, vars: usize, max_deg: u32) -> CPoly {
        let monos = crate::dualspace::monomials_up_to(vars, max_deg);
        Poly::from_terms(
            vars,
            monos.into_iter().filter_map(|m| {
                if rng.gen_bool(0.5) {
                    Some((m, c(rng.gen_range(-9..10) as f64)))
                } else {
                    None
                }
            }),
        )
    }
}
