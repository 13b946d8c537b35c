//! JSON file formats: rationals as "p/q" strings, complex numbers as
//! {"re", "im"} objects, polynomials as exponent/coefficient term lists,
//! and the ROABP container formats used by the command-line tools.

use crate::convert::Computation;
use crate::dualspace::DualBasis;
use crate::error::{Error, Result};
use crate::matring::MatrixRing;
use crate::matrix::Matrix;
use crate::poly::{Monomial, Poly};
use crate::roabp::{CommRoabp, DiagRoabp, PolyMat, Roabp};
use crate::scalar::{format_rational, parse_rational, ComplexF, Rational, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Rational(String),
    Complex { re: f64, im: f64 },
}

impl CoeffJson {
    pub fn from_rational(r: &Rational) -> Self {
        CoeffJson::Rational(format_rational(r))
    }

    pub fn from_complex(c: &ComplexF) -> Self {
        CoeffJson::Complex { re: c.re, im: c.im }
    }

    pub fn as_rational(&self) -> Result<Rational> {
        match self {
            CoeffJson::Rational(s) => {
                parse_rational(s).ok_or_else(|| Error::InvalidParameter(format!("bad rational {s:?}")))
            }
            CoeffJson::Complex { .. } => {
                Err(Error::InvalidParameter("expected a rational, found a complex value".into()))
            }
        }
    }

    pub fn as_complex(&self) -> Result<ComplexF> {
        match self {
            CoeffJson::Rational(s) => Ok(parse_rational(s)
                .ok_or_else(|| Error::InvalidParameter(format!("bad rational {s:?}")))?
                .to_complex()),
            CoeffJson::Complex { re, im } => Ok(ComplexF::new(*re, *im)),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, CoeffJson::Rational(_))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: CoeffJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_q(p: &Poly<Rational>) -> Self {
        PolyJson {
            vars: p.vars(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson { exp: m.0.clone(), coeff: CoeffJson::from_rational(c) })
                .collect(),
        }
    }

    pub fn from_c(p: &Poly<ComplexF>) -> Self {
        PolyJson {
            vars: p.vars(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson { exp: m.0.clone(), coeff: CoeffJson::from_complex(c) })
                .collect(),
        }
    }

    pub fn to_q(&self) -> Result<Poly<Rational>> {
        let mut out = Poly::zero(self.vars);
        for t in &self.terms {
            if t.exp.len() != self.vars {
                return Err(Error::InvalidParameter("term exponent arity mismatch".into()));
            }
            out.add_term(Monomial(t.exp.clone()), t.coeff.as_rational()?);
        }
        Ok(out)
    }

    pub fn to_c(&self) -> Result<Poly<ComplexF>> {
        let mut out = Poly::zero(self.vars);
        for t in &self.terms {
            if t.exp.len() != self.vars {
                return Err(Error::InvalidParameter("term exponent arity mismatch".into()));
            }
            out.add_term(Monomial(t.exp.clone()), t.coeff.as_complex()?);
        }
        Ok(out)
    }

    pub fn all_rational(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_rational())
    }
}

fn matrix_to_json(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format_rational(&m[(i, j)])).collect())
        .collect()
}

fn matrix_from_json(rows: &[Vec<String>]) -> Result<Matrix<Rational>> {
    let data: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    parse_rational(s)
                        .ok_or_else(|| Error::InvalidParameter(format!("bad rational {s:?}")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if data.is_empty() || data.iter().any(|r| r.len() != data[0].len()) {
        return Err(Error::InvalidParameter("matrix rows must be nonempty and uniform".into()));
    }
    Ok(Matrix::from_rows(data))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoabpJson {
    pub n: usize,
    pub d: u32,
    pub order: Vec<usize>,
    /// layers[i][row][col] is a univariate polynomial
    pub layers: Vec<Vec<Vec<PolyJson>>>,
    pub u: Vec<String>,
    pub c: Vec<String>,
}

impl RoabpJson {
    pub fn from_roabp(r: &Roabp<Rational>) -> Self {
        RoabpJson {
            n: r.n,
            d: r.d,
            order: r.order.clone(),
            layers: r
                .layers
                .iter()
                .map(|l| {
                    (0..l.rows())
                        .map(|i| (0..l.cols()).map(|j| PolyJson::from_q(l.entry(i, j))).collect())
                        .collect()
                })
                .collect(),
            u: r.u.iter().map(format_rational).collect(),
            c: r.c.iter().map(format_rational).collect(),
        }
    }

    pub fn to_roabp(&self) -> Result<Roabp<Rational>> {
        let layers = self
            .layers
            .iter()
            .map(|l| {
                let rows = l.len();
                let cols = l.first().map_or(0, |r| r.len());
                if l.iter().any(|r| r.len() != cols) {
                    return Err(Error::InvalidParameter("ragged layer".into()));
                }
                let entries = l
                    .iter()
                    .flatten()
                    .map(|p| p.to_q())
                    .collect::<Result<Vec<_>>>()?;
                Ok(PolyMat::new(rows, cols, entries))
            })
            .collect::<Result<Vec<_>>>()?;
        let parse_vec = |v: &[String]| -> Result<Vec<Rational>> {
            v.iter()
                .map(|s| {
                    parse_rational(s)
                        .ok_or_else(|| Error::InvalidParameter(format!("bad rational {s:?}")))
                })
                .collect()
        };
        Roabp::new(self.n, self.d, self.order.clone(), layers, parse_vec(&self.u)?, parse_vec(&self.c)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommRoabpJson {
    pub n: usize,
    pub d: u32,
    pub w: usize,
    /// a[i][j] is the w x w coefficient matrix of x_i^j
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<Vec<String>>>>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

impl CommRoabpJson {
    pub fn from_comm(r: &CommRoabp<Rational>) -> Self {
        CommRoabpJson {
            n: r.n,
            d: r.d,
            w: r.w,
            a: r.coeff.iter().map(|row| row.iter().map(matrix_to_json).collect()).collect(),
            b: r.b.iter().map(format_rational).collect(),
            c: r.c.iter().map(format_rational).collect(),
        }
    }

    pub fn to_comm(&self) -> Result<CommRoabp<Rational>> {
        let coeff = self
            .a
            .iter()
            .map(|row| row.iter().map(|m| matrix_from_json(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let parse_vec = |v: &[String]| -> Result<Vec<Rational>> {
            v.iter()
                .map(|s| {
                    parse_rational(s)
                        .ok_or_else(|| Error::InvalidParameter(format!("bad rational {s:?}")))
                })
                .collect()
        };
        CommRoabp::new(self.n, self.d, self.w, coeff, parse_vec(&self.b)?, parse_vec(&self.c)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagRoabpJson {
    pub n: usize,
    pub d: u32,
    pub w: usize,
    /// rows[k][i] is the univariate factor of x_i in product k
    pub rows: Vec<Vec<PolyJson>>,
    pub weights: Vec<CoeffJson>,
}

impl DiagRoabpJson {
    pub fn from_diag_q(r: &DiagRoabp<Rational>) -> Self {
        DiagRoabpJson {
            n: r.n,
            d: r.d,
            w: r.width(),
            rows: r.rows.iter().map(|row| row.iter().map(PolyJson::from_q).collect()).collect(),
            weights: r.weights.iter().map(CoeffJson::from_rational).collect(),
        }
    }

    pub fn from_diag_c(r: &DiagRoabp<ComplexF>) -> Self {
        DiagRoabpJson {
            n: r.n,
            d: r.d,
            w: r.width(),
            rows: r.rows.iter().map(|row| row.iter().map(PolyJson::from_c).collect()).collect(),
            weights: r.weights.iter().map(CoeffJson::from_complex).collect(),
        }
    }

    pub fn all_rational(&self) -> bool {
        self.weights.iter().all(|w| w.is_rational())
            && self.rows.iter().flatten().all(|p| p.all_rational())
    }

    pub fn to_diag_q(&self) -> Result<DiagRoabp<Rational>> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|p| p.to_q()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let weights = self.weights.iter().map(|w| w.as_rational()).collect::<Result<Vec<_>>>()?;
        DiagRoabp::new(self.n, self.d, rows, weights)
    }

    pub fn to_diag_c(&self) -> Result<DiagRoabp<ComplexF>> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|p| p.to_c()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let weights = self.weights.iter().map(|w| w.as_complex()).collect::<Result<Vec<_>>>()?;
        DiagRoabp::new(self.n, self.d, rows, weights)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

/// Ring analysis report: normal set, border basis, variety, and the dual
/// structure when requested.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RingReportJson {
    pub w: usize,
    pub r: usize,
    pub normal_set: Vec<Vec<u32>>,
    pub border: Vec<PolyJson>,
    pub variety: Vec<Vec<ComplexJson>>,
    pub local_dims: Vec<usize>,
    pub operators: Vec<Vec<PolyJson>>,
    pub psi_condition: f64,
}

pub fn ring_report(ring: &MatrixRing, db: &DualBasis) -> RingReportJson {
    RingReportJson {
        w: ring.w,
        r: ring.num_generators(),
        normal_set: ring.normal_set.iter().map(|m| m.0.clone()).collect(),
        border: ring.border_basis.iter().map(PolyJson::from_q).collect(),
        variety: db
            .spaces
            .iter()
            .map(|s| s.point.coords.iter().map(|c| ComplexJson { re: c.re, im: c.im }).collect())
            .collect(),
        local_dims: db.spaces.iter().map(|s| s.local_dim).collect(),
        operators: db
            .spaces
            .iter()
            .map(|s| s.basis.iter().map(|op| PolyJson::from_c(&op.op_poly)).collect())
            .collect(),
        psi_condition: db.condition,
    }
}

/// Waring decomposition serialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WaringTermJson {
    pub weight: ComplexJson,
    pub form: Vec<ComplexJson>,
    pub constant: ComplexJson,
    pub power: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WaringJson {
    pub terms: Vec<WaringTermJson>,
}

pub fn waring_to_json(dec: &crate::waring::WaringDecomposition) -> WaringJson {
    WaringJson {
        terms: dec
            .terms
            .iter()
            .map(|t| WaringTermJson {
                weight: ComplexJson { re: t.weight.re, im: t.weight.im },
                form: t.form.iter().map(|c| ComplexJson { re: c.re, im: c.im }).collect(),
                constant: ComplexJson { re: t.constant.re, im: t.constant.im },
                power: t.power,
            })
            .collect(),
    }
}

/// Loads any computation file: a polynomial, a general ROABP, a
/// commutative ROABP, or a diagonal ROABP, distinguished by their fields.
pub fn computation_from_value(v: &Value) -> Result<Computation> {
    let obj = v.as_object().ok_or_else(|| Error::InvalidParameter("expected a JSON object".into()))?;
    if obj.contains_key("layers") {
        let parsed: RoabpJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidParameter(format!("bad ROABP file: {e}")))?;
        return Ok(Computation::Roabp(parsed.to_roabp()?));
    }
    if obj.contains_key("A") {
        let parsed: CommRoabpJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidParameter(format!("bad commutative ROABP file: {e}")))?;
        return Ok(Computation::Comm(parsed.to_comm()?));
    }
    if obj.contains_key("rows") && obj.contains_key("weights") {
        let parsed: DiagRoabpJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidParameter(format!("bad diagonal ROABP file: {e}")))?;
        if parsed.all_rational() {
            return Ok(Computation::DiagQ(parsed.to_diag_q()?));
        }
        return Ok(Computation::DiagC(parsed.to_diag_c()?));
    }
    if obj.contains_key("terms") && obj.contains_key("vars") {
        let parsed: PolyJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidParameter(format!("bad polynomial file: {e}")))?;
        if parsed.all_rational() {
            return Ok(Computation::PolyQ(parsed.to_q()?));
        }
        return Ok(Computation::PolyC(parsed.to_c()?));
    }
    Err(Error::InvalidParameter(
        "unrecognized file: expected a polynomial or an ROABP in one of the JSON formats".into(),
    ))
}
