use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::scene::Violation;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the simulation kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A segment was built from two identical points.
    DegenerateSegment,
    /// A ray direction had zero (or non-finite) length.
    DegenerateDirection,
    /// A coordinate or parameter was NaN or infinite.
    NonFinite(&'static str),
    /// A parameter was outside its documented range.
    InvalidParameter(&'static str),
    UnknownSetting {
        index: usize,
        count: usize,
    },
    UnknownAngle(f64),
    DegeneratePath,
    CollocatedReceiver,
    HorizonShorterThanProbe {
        intervals: usize,
        settings: usize,
    },
    ScheduleUnknownSetting {
        index: usize,
        count: usize,
    },
    EmptyEvaluationWindow {
        skip: usize,
        steps: usize,
    },
    NoSamples,
    UnknownReceiver(String),
    InvalidScene(Vec<Violation>),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateSegment => f.write_str("degenerate segment: endpoints coincide"),
            Error::DegenerateDirection => f.write_str("degenerate direction vector"),
            Error::NonFinite(what) => write!(f, "non-finite value for {what}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::UnknownSetting { index, count } => {
                write!(f, "unknown RIS setting {index} (panel has {count})")
            }
            Error::UnknownAngle(deg) => write!(f, "unknown RIS setting: angle {deg} deg"),
            Error::DegeneratePath => f.write_str("degenerate path"),
            Error::CollocatedReceiver => f.write_str("receiver collocated with transmitter"),
            Error::HorizonShorterThanProbe {
                intervals,
                settings,
            } => write!(
                f,
                "horizon shorter than probe phase ({intervals} intervals < {settings} settings)"
            ),
            Error::ScheduleUnknownSetting { index, count } => write!(
                f,
                "schedule references unknown setting {index} (panel has {count})"
            ),
            Error::EmptyEvaluationWindow { skip, steps } => {
                write!(f, "empty evaluation window (skip {skip} of {steps} steps)")
            }
            Error::NoSamples => f.write_str("no samples"),
            Error::UnknownReceiver(id) => write!(f, "unknown receiver id {id:?}"),
            Error::InvalidScene(violations) => {
                f.write_str("invalid scene: ")?;
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for Error {}
