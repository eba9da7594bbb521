//! JSON encoding of ideals and filtrations.
//!
//! ```json
//! {"type":"adic","ideal":{"n":2,"gens":[[2,0],[0,3]]}}
//! {"type":"dv","pairs":[{"w":[1,2],"a":"1"},{"w":[2,1],"a":"1"}]}
//! {"type":"twist","alpha":"(0+1*sqrt(2))/1","base":{...}}
//! {"type":"stair1","alpha":"1","c":1}
//! {"type":"table","horizon":2,"levels":[[1,{"n":1,"gens":[[1]]}],[2,{"n":1,"gens":[[2]]}]]}
//! ```
//!
//! Numbers are exact-real strings; plain JSON integers are accepted as well.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::ExactReal;
use crate::filtration::Filtration;
use crate::monalg::{Exponent, MonomialIdeal};
use crate::valuation::MonomialValuation;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealWire {
    pub n: usize,
    pub gens: Vec<Exponent>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberWire {
    Text(String),
    Int(i64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairWire {
    pub w: Vec<u64>,
    pub a: NumberWire,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FiltrationWire {
    Adic {
        ideal: IdealWire,
    },
    Dv {
        pairs: Vec<PairWire>,
    },
    Twist {
        alpha: NumberWire,
        base: Box<FiltrationWire>,
    },
    Stair1 {
        alpha: NumberWire,
        c: u64,
    },
    Table {
        horizon: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        levels: Vec<(u64, IdealWire)>,
    },
}

impl NumberWire {
    pub fn to_real(&self) -> Result<ExactReal> {
        match self {
            NumberWire::Text(s) => s.parse(),
            NumberWire::Int(k) => Ok(ExactReal::integer(*k)),
        }
    }
}

impl From<&ExactReal> for NumberWire {
    fn from(x: &ExactReal) -> Self {
        NumberWire::Text(x.to_string())
    }
}

impl IdealWire {
    pub fn to_ideal(&self) -> Result<MonomialIdeal> {
        MonomialIdeal::new(self.n, self.gens.clone())
    }
}

impl From<&MonomialIdeal> for IdealWire {
    fn from(i: &MonomialIdeal) -> Self {
        IdealWire { n: i.n(), gens: i.gens().to_vec() }
    }
}

impl FiltrationWire {
    pub fn to_filtration(&self) -> Result<Filtration> {
        match self {
            FiltrationWire::Adic { ideal } => Ok(Filtration::adic(ideal.to_ideal()?)),
            FiltrationWire::Dv { pairs } => Filtration::discrete_valued(
                pairs
                    .iter()
                    .map(|p| Ok((MonomialValuation::new(p.w.clone())?, p.a.to_real()?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            FiltrationWire::Twist { alpha, base } => base.to_filtration()?.twist(alpha.to_real()?),
            FiltrationWire::Stair1 { alpha, c } => Filtration::stair_one_var(alpha.to_real()?, *c),
            FiltrationWire::Table { horizon, n, levels } => {
                let n = match (n, levels.first()) {
                    (Some(n), _) => *n,
                    (None, Some((_, i))) => i.n,
                    (None, None) => return Err(Error::Empty("table has no levels".into())),
                };
                let levels = levels
                    .iter()
                    .map(|(m, i)| Ok((*m, i.to_ideal()?)))
                    .collect::<Result<Vec<_>>>()?;
                Filtration::table(n, *horizon, levels)
            }
        }
    }
}

impl From<&Filtration> for FiltrationWire {
    fn from(f: &Filtration) -> Self {
        match f {
            Filtration::Adic(a) => FiltrationWire::Adic { ideal: a.ideal().into() },
            Filtration::DiscreteValued(pairs) => FiltrationWire::Dv {
                pairs: pairs.iter().map(|(v, a)| PairWire { w: v.weights().to_vec(), a: a.into() }).collect(),
            },
            Filtration::Twist { base, alpha } => {
                FiltrationWire::Twist { alpha: alpha.into(), base: Box::new(base.as_ref().into()) }
            }
            Filtration::StairOneVar { alpha, c } => FiltrationWire::Stair1 { alpha: alpha.into(), c: *c },
            Filtration::Table(t) => FiltrationWire::Table {
                horizon: t.horizon(),
                n: Some(t.n()),
                levels: t.levels().iter().enumerate().skip(1).map(|(m, i)| (m as u64, i.into())).collect(),
            },
        }
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e))
}

/// Parses a filtration. Malformed JSON is a parse error; well-formed input
/// violating the filtration rules is reported with its own error.
pub fn parse_filtration(text: &str) -> Result<Filtration> {
    let wire: FiltrationWire = serde_json::from_str(text).map_err(parse_error)?;
    wire.to_filtration()
}

pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    let wire: IdealWire = serde_json::from_str(text).map_err(parse_error)?;
    wire.to_ideal()
}

pub fn filtration_to_json(f: &Filtration) -> serde_json::Value {
    serde_json::to_value(FiltrationWire::from(f)).expect("wire types serialize")
}
