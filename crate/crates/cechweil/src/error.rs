use alloc::string::String;
use core::fmt;

/// Errors raised by the engine. Checks that *report* violations (gluing,
/// Maurer–Cartan, Green structure, admissibility) do not use this type;
/// they return a [`crate::CheckReport`] instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    ZeroDenominator,
    /// A denominator (or a matrix to be inverted) has a factor that is not
    /// declared invertible on the chart in question.
    NotInvertibleOnChart(String),
    ChartMismatch(String),
    DegreeMismatch(String),
    IndexOutOfRange(String),
    TupleNotInNerve(String),
    MissingTransition(String),
    MissingRestriction(String),
    MissingComponent(String),
    MissingGreenStructure(String),
    ShapeMismatch(String),
    WitnessShapeMismatch(String),
    GluingViolation(String),
    DimensionTooLarge(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::NotInvertibleOnChart(m) => write!(f, "not invertible on chart: {m}"),
            Error::ChartMismatch(m) => write!(f, "chart mismatch: {m}"),
            Error::DegreeMismatch(m) => write!(f, "degree mismatch: {m}"),
            Error::IndexOutOfRange(m) => write!(f, "index out of range: {m}"),
            Error::TupleNotInNerve(m) => write!(f, "tuple not in nerve: {m}"),
            Error::MissingTransition(m) => write!(f, "missing transition: {m}"),
            Error::MissingRestriction(m) => write!(f, "missing restriction: {m}"),
            Error::MissingComponent(m) => write!(f, "missing component: {m}"),
            Error::MissingGreenStructure(m) => write!(f, "missing green structure: {m}"),
            Error::ShapeMismatch(m) => write!(f, "shape mismatch: {m}"),
            Error::WitnessShapeMismatch(m) => write!(f, "witness shape mismatch: {m}"),
            Error::GluingViolation(m) => write!(f, "gluing violation: {m}"),
            Error::DimensionTooLarge(m) => write!(f, "dimension too large: {m}"),
        }
    }
}
