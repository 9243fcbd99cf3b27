use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::linalg::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inapplicable => "inapplicable",
        })
    }
}

/// A rational in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactRational {
    pub num: i64,
    pub den: i64,
}

impl ExactRational {
    pub fn integer(n: i64) -> Self {
        ExactRational { num: n, den: 1 }
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.num.into(), self.den.into())
    }
}

impl From<&Rational> for ExactRational {
    fn from(r: &Rational) -> Self {
        let num = r.numer().to_i64().expect("numerator fits in i64");
        let den = r.denom().to_i64().expect("denominator fits in i64");
        ExactRational { num, den }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessValue {
    Bool(bool),
    Integer(i64),
    Rational(ExactRational),
    Float(f64),
    Text(String),
    IntegerVector(Vec<i64>),
    RationalVector(Vec<ExactRational>),
    FloatVector(Vec<f64>),
    IntegerMatrix(Vec<Vec<i64>>),
    RationalMatrix(Vec<Vec<ExactRational>>),
    VertexSet(Vec<usize>),
    Labels(Vec<String>),
}

impl WitnessValue {
    pub fn rational(r: &Rational) -> Self {
        WitnessValue::Rational(r.into())
    }

    pub fn rational_vector(v: &[Rational]) -> Self {
        WitnessValue::RationalVector(v.iter().map(Into::into).collect())
    }

    pub fn rational_matrix(m: &[Vec<Rational>]) -> Self {
        WitnessValue::RationalMatrix(m.iter().map(|r| r.iter().map(Into::into).collect()).collect())
    }

    pub fn usize_matrix(m: &[Vec<usize>]) -> Self {
        WitnessValue::IntegerMatrix(m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect())
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            WitnessValue::Integer(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            WitnessValue::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessValue::Bool(b) => write!(f, "{b}"),
            WitnessValue::Integer(n) => write!(f, "{n}"),
            WitnessValue::Rational(r) => write!(f, "{r}"),
            WitnessValue::Float(x) => write!(f, "{x:.10}"),
            WitnessValue::Text(s) => f.write_str(s),
            WitnessValue::IntegerVector(v) => write!(f, "({})", join(v)),
            WitnessValue::RationalVector(v) => write!(f, "({})", join(v)),
            WitnessValue::FloatVector(v) => {
                write!(f, "({})", v.iter().map(|x| format!("{x:.10}")).collect::<Vec<_>>().join(", "))
            }
            WitnessValue::IntegerMatrix(m) => {
                write!(f, "[{}]", m.iter().map(|r| format!("[{}]", join(r))).collect::<Vec<_>>().join(", "))
            }
            WitnessValue::RationalMatrix(m) => {
                write!(f, "[{}]", m.iter().map(|r| format!("[{}]", join(r))).collect::<Vec<_>>().join(", "))
            }
            WitnessValue::VertexSet(v) => write!(f, "{{{}}}", join(v)),
            WitnessValue::Labels(v) => write!(f, "{{{}}}", v.join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: WitnessValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition_id: String,
    pub verdict: Verdict,
    pub narrative: String,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unmet_precondition: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ConditionReport>,
}

impl ConditionReport {
    fn new(id: &str, verdict: Verdict, narrative: impl Into<String>) -> Self {
        ConditionReport {
            condition_id: id.to_string(),
            verdict,
            narrative: narrative.into(),
            witnesses: Vec::new(),
            unmet_precondition: None,
            children: Vec::new(),
        }
    }

    pub fn holds(id: &str, narrative: impl Into<String>) -> Self {
        Self::new(id, Verdict::Holds, narrative)
    }

    /// Callers must attach at least one witness.
    pub fn fails(id: &str, narrative: impl Into<String>) -> Self {
        Self::new(id, Verdict::Fails, narrative)
    }

    pub fn inapplicable(id: &str, precondition: impl Into<String>) -> Self {
        let p = precondition.into();
        let mut r = Self::new(id, Verdict::Inapplicable, format!("not applicable: {p}"));
        r.unmet_precondition = Some(p);
        r
    }

    /// `Holds` if `ok`, else `Fails`.
    pub fn check(id: &str, ok: bool, narrative: impl Into<String>) -> Self {
        Self::new(id, if ok { Verdict::Holds } else { Verdict::Fails }, narrative)
    }

    pub fn with(mut self, name: &str, value: WitnessValue) -> Self {
        self.witnesses.push(Witness { name: name.to_string(), value });
        self
    }

    pub fn push(&mut self, name: &str, value: WitnessValue) {
        self.witnesses.push(Witness { name: name.to_string(), value });
    }

    pub fn with_child(mut self, child: ConditionReport) -> Self {
        self.children.push(child);
        self
    }

    /// Parent whose verdict is `Fails` if any child fails, `Holds` if some
    /// child holds, and `Inapplicable` when every child is.
    pub fn combine(id: &str, narrative: impl Into<String>, children: Vec<ConditionReport>) -> Self {
        let verdict = if children.iter().any(|c| c.verdict == Verdict::Fails) {
            Verdict::Fails
        } else if children.iter().any(|c| c.verdict == Verdict::Holds) {
            Verdict::Holds
        } else {
            Verdict::Inapplicable
        };
        let mut r = Self::new(id, verdict, narrative);
        match verdict {
            Verdict::Fails => {
                let failing: Vec<String> = children
                    .iter()
                    .filter(|c| c.verdict == Verdict::Fails)
                    .map(|c| c.condition_id.clone())
                    .collect();
                r.push("failing_parts", WitnessValue::Labels(failing));
            }
            Verdict::Inapplicable => {
                r.unmet_precondition = Some("no part of the check applies".into());
            }
            Verdict::Holds => {}
        }
        r.children = children;
        r
    }

    pub fn witness(&self, name: &str) -> Option<&WitnessValue> {
        self.witnesses.iter().find(|w| w.name == name).map(|w| &w.value)
    }

    pub fn child(&self, id: &str) -> Option<&ConditionReport> {
        self.children.iter().find(|c| c.condition_id == id)
    }

    /// Depth-first search for a descendant (or self) with this id.
    pub fn find(&self, id: &str) -> Option<&ConditionReport> {
        if self.condition_id == id {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(id))
    }

    /// A failing report carries a witness and an inapplicable one its unmet
    /// precondition, recursively.
    pub fn is_well_formed(&self) -> bool {
        let own = match self.verdict {
            Verdict::Fails => !self.witnesses.is_empty(),
            Verdict::Inapplicable => self.unmet_precondition.is_some(),
            Verdict::Holds => true,
        };
        own && self.children.iter().all(ConditionReport::is_well_formed)
    }
}
