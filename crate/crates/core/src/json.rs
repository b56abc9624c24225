//! JSON wire formats. Rationals always travel as strings; numeric-mode
//! values are plain decimals and carry `"numeric": true`.

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::certify::{CertificateStep, ReductionCertificate};
use crate::error::{Error, Result};
use crate::fock::{FockVector, ModeIndex, Monomial, Sector};
use crate::heisenberg::{LambdaSequence, QuadraticElement};
use crate::scalar::{ExactScalar, HalfInt};
use crate::vertex::CmnTable;
use crate::whittaker::{FiberPoint, WhittakerReport, WhittakerType};

/// A scalar either as `"a+bi"` text or as a `["re", "im"]` pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarWire {
    Text(String),
    Pair([String; 2]),
}

impl ScalarWire {
    pub fn pair(s: &ExactScalar) -> Self {
        ScalarWire::Pair([s.re.to_string(), s.im.to_string()])
    }

    pub fn parse(&self) -> Result<ExactScalar> {
        match self {
            ScalarWire::Text(t) => t.parse(),
            ScalarWire::Pair([re, im]) => Ok(ExactScalar::new(rational(re)?, rational(im)?)),
        }
    }
}

fn rational(s: &str) -> Result<BigRational> {
    let v: ExactScalar = s.parse()?;
    if !v.is_real() {
        return Err(Error::Parse(format!("`{s}` is not a rational")));
    }
    Ok(v.re)
}

fn text(s: &ExactScalar) -> String {
    s.to_string()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaWire {
    pub sector: Sector,
    pub rank: usize,
    pub entries: Vec<Vec<ScalarWire>>,
}

impl From<&LambdaSequence> for LambdaWire {
    fn from(l: &LambdaSequence) -> Self {
        LambdaWire {
            sector: l.sector(),
            rank: l.rank(),
            entries: l.entries().iter().map(|e| e.iter().map(ScalarWire::pair).collect()).collect(),
        }
    }
}

impl LambdaWire {
    pub fn to_lambda(&self) -> Result<LambdaSequence> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.iter().map(ScalarWire::parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        LambdaSequence::new(self.sector, self.rank, entries)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockWire {
    pub sector: Sector,
    pub rank: usize,
    /// `[coefficient, monomial]`, monomials in canonical text form.
    pub terms: Vec<(String, String)>,
}

impl From<&FockVector> for FockWire {
    fn from(v: &FockVector) -> Self {
        FockWire {
            sector: v.sector(),
            rank: v.rank(),
            terms: v.terms().map(|(m, c)| (text(c), m.to_string())).collect(),
        }
    }
}

impl FockWire {
    pub fn to_vector(&self) -> Result<FockVector> {
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| Ok((m.parse::<Monomial>()?, c.parse::<ExactScalar>()?)))
            .collect::<Result<Vec<_>>>()?;
        FockVector::from_terms(self.sector, self.rank, terms)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeWire {
    pub sector: Sector,
    pub r: usize,
    pub zeta: Vec<ScalarWire>,
}

impl From<&WhittakerType> for TypeWire {
    fn from(t: &WhittakerType) -> Self {
        TypeWire { sector: t.sector, r: t.r, zeta: t.zeta.iter().map(|z| ScalarWire::Text(text(z))).collect() }
    }
}

impl TypeWire {
    pub fn to_type(&self) -> Result<WhittakerType> {
        let zeta = self.zeta.iter().map(ScalarWire::parse).collect::<Result<Vec<_>>>()?;
        WhittakerType::new(self.sector, self.r, zeta)
    }

    pub fn to_numeric(&self) -> Result<WhittakerType<Complex64>> {
        let zeta = self.zeta.iter().map(|z| z.parse().map(|s| s.to_complex64())).collect::<Result<Vec<_>>>()?;
        WhittakerType::new(self.sector, self.r, zeta)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactFiberWire {
    pub numeric: bool,
    pub sphere_point: Option<Vec<String>>,
    pub free_params: Vec<Vec<String>>,
    pub lambda: LambdaWire,
}

impl ExactFiberWire {
    pub fn new(p: &FiberPoint, rank: usize) -> Result<Self> {
        let strings = |v: &[ExactScalar]| v.iter().map(text).collect::<Vec<_>>();
        Ok(ExactFiberWire {
            numeric: false,
            sphere_point: p.sphere_point.as_deref().map(strings),
            free_params: p.free_params.iter().map(|v| strings(v)).collect(),
            lambda: LambdaWire::from(&LambdaSequence::new(p.sector, rank, p.lambda.clone())?),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericFiberWire {
    pub numeric: bool,
    pub sector: Sector,
    pub rank: usize,
    pub residual: f64,
    pub sphere_point: Option<Vec<[f64; 2]>>,
    pub free_params: Vec<Vec<[f64; 2]>>,
    /// `entries[p][i] = [re, im]`.
    pub lambda: Vec<Vec<[f64; 2]>>,
}

fn c2(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl NumericFiberWire {
    pub fn new(p: &FiberPoint<Complex64>, rank: usize, residual: f64) -> Self {
        let conv = |v: &[Complex64]| v.iter().map(c2).collect::<Vec<_>>();
        NumericFiberWire {
            numeric: true,
            sector: p.sector,
            rank,
            residual,
            sphere_point: p.sphere_point.as_deref().map(conv),
            free_params: p.free_params.iter().map(|v| conv(v)).collect(),
            lambda: p.lambda.iter().map(|v| conv(v)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportWire {
    pub sector: Sector,
    pub r: usize,
    pub zeta: Option<Vec<String>>,
    pub pass: bool,
    pub checks: Vec<crate::whittaker::EigenCheck>,
}

impl From<&WhittakerReport> for ReportWire {
    fn from(r: &WhittakerReport) -> Self {
        ReportWire {
            sector: r.sector,
            r: r.r,
            zeta: r.zeta.as_ref().map(|z| z.iter().map(text).collect()),
            pass: r.pass(),
            checks: r.checks.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepWire {
    pub i: usize,
    pub j: usize,
    pub m: String,
    pub n: String,
    pub shift: String,
    pub case: String,
    pub deg_before: String,
    pub deg_after: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateWire {
    pub initial: FockWire,
    pub steps: Vec<StepWire>,
    pub terminal: String,
    #[serde(default)]
    pub retries: usize,
}

impl From<&ReductionCertificate> for CertificateWire {
    fn from(c: &ReductionCertificate) -> Self {
        CertificateWire {
            initial: FockWire::from(&c.initial),
            steps: c
                .steps
                .iter()
                .map(|s| StepWire {
                    i: s.q.i,
                    j: s.q.j,
                    m: s.q.m.value().to_string(),
                    n: s.q.n.value().to_string(),
                    shift: text(&s.q.constant_shift),
                    case: s.case.to_string(),
                    deg_before: s.deg_before.to_string(),
                    deg_after: s.deg_after.to_string(),
                })
                .collect(),
            terminal: text(&c.terminal),
            retries: c.retries,
        }
    }
}

impl CertificateWire {
    pub fn to_certificate(&self) -> Result<ReductionCertificate> {
        let initial = self.initial.to_vector()?;
        let sector = initial.sector();
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let mode = |t: &str| -> Result<ModeIndex> { ModeIndex::from_half(sector, t.parse::<HalfInt>()?) };
                Ok(CertificateStep {
                    q: QuadraticElement {
                        i: s.i,
                        j: s.j,
                        m: mode(&s.m)?,
                        n: mode(&s.n)?,
                        constant_shift: s.shift.parse()?,
                    },
                    case: s.case.parse()?,
                    deg_before: s.deg_before.parse()?,
                    deg_after: s.deg_after.parse()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReductionCertificate { initial, steps, terminal: self.terminal.parse()?, retries: self.retries })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CmnWire {
    pub order: usize,
    /// `values[m][n] = c_{mn}`.
    pub values: Vec<Vec<String>>,
}

impl From<&CmnTable> for CmnWire {
    fn from(t: &CmnTable) -> Self {
        CmnWire {
            order: t.order(),
            values: t.values().iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
        }
    }
}

/// Parses JSON into a wire type, reporting shape problems as schema errors.
pub fn from_str<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))
}

pub fn read_file<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    from_str(&std::fs::read_to_string(path)?)
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("wire types serialize")
}
