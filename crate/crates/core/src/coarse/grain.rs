use std::cmp::Ordering;
use std::fmt;

use crate::rational::{to_literal, Rational};

use super::CoarseError;

/// One side of an interval grain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// `-inf` on the low side, `+inf` on the high side. Always open.
    Unbounded,
    Open(Rational),
    Closed(Rational),
}

impl Endpoint {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Open(v) | Endpoint::Closed(v) => Some(v),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Endpoint::Closed(_))
    }
}

/// A cell of a partition of the real line: a single point or an interval.
///
/// Interval grains are plain data; [`Grain::check`] (and therefore every
/// [`Partition`](super::Partition) constructor) enforces that they are
/// non-empty and non-degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Grain {
    Singleton(Rational),
    Interval { lo: Endpoint, hi: Endpoint },
}

/// Lower boundary of a grain. Ordered so that sorting grains by it sorts a
/// disjoint family ascending.
#[derive(Debug, PartialEq, Eq)]
enum Lower<'a> {
    NegInf,
    At { value: &'a Rational, closed: bool },
}

impl PartialOrd for Lower<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lower<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Lower::NegInf, Lower::NegInf) => Ordering::Equal,
            (Lower::NegInf, _) => Ordering::Less,
            (_, Lower::NegInf) => Ordering::Greater,
            (Lower::At { value: a, closed: ca }, Lower::At { value: b, closed: cb }) => {
                // `[a` starts before `(a`.
                a.cmp(b).then_with(|| cb.cmp(ca))
            }
        }
    }
}

impl Grain {
    pub fn point(x: Rational) -> Grain {
        Grain::Singleton(x)
    }

    /// Checked interval constructor.
    pub fn interval(lo: Endpoint, hi: Endpoint) -> Result<Grain, CoarseError> {
        let g = Grain::Interval { lo, hi };
        g.check().map_err(|reason| CoarseError::InvalidGrain {
            grain: g.to_string(),
            reason,
        })?;
        Ok(g)
    }

    /// `[a, b)`
    pub fn closed_open(a: Rational, b: Rational) -> Result<Grain, CoarseError> {
        Grain::interval(Endpoint::Closed(a), Endpoint::Open(b))
    }

    /// `(a, b]`
    pub fn open_closed(a: Rational, b: Rational) -> Result<Grain, CoarseError> {
        Grain::interval(Endpoint::Open(a), Endpoint::Closed(b))
    }

    /// `[a, b]`
    pub fn closed(a: Rational, b: Rational) -> Result<Grain, CoarseError> {
        Grain::interval(Endpoint::Closed(a), Endpoint::Closed(b))
    }

    /// `(a, b)`
    pub fn open(a: Rational, b: Rational) -> Result<Grain, CoarseError> {
        Grain::interval(Endpoint::Open(a), Endpoint::Open(b))
    }

    /// `(-inf, +inf)`
    pub fn whole_line() -> Grain {
        Grain::Interval {
            lo: Endpoint::Unbounded,
            hi: Endpoint::Unbounded,
        }
    }

    /// Validates the grain invariants, returning a short reason on failure.
    pub fn check(&self) -> Result<(), &'static str> {
        match self {
            Grain::Singleton(_) => Ok(()),
            Grain::Interval { lo, hi } => match (lo.value(), hi.value()) {
                (Some(a), Some(b)) if a > b => Err("lower endpoint exceeds upper endpoint"),
                (Some(a), Some(b)) if a == b => {
                    if lo.is_closed() && hi.is_closed() {
                        Err("degenerate closed interval must be written as a point")
                    } else {
                        Err("empty interval")
                    }
                }
                _ => Ok(()),
            },
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Grain::Singleton(_) => true,
            Grain::Interval { lo, hi } => lo.value().is_some() && hi.value().is_some(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Grain::Singleton(p) => p == x,
            Grain::Interval { lo, hi } => {
                let above = match lo {
                    Endpoint::Unbounded => true,
                    Endpoint::Open(a) => x > a,
                    Endpoint::Closed(a) => x >= a,
                };
                let below = match hi {
                    Endpoint::Unbounded => true,
                    Endpoint::Open(b) => x < b,
                    Endpoint::Closed(b) => x <= b,
                };
                above && below
            }
        }
    }

    fn lower(&self) -> Lower<'_> {
        match self {
            Grain::Singleton(p) => Lower::At {
                value: p,
                closed: true,
            },
            Grain::Interval { lo, .. } => match lo {
                Endpoint::Unbounded => Lower::NegInf,
                Endpoint::Open(a) => Lower::At {
                    value: a,
                    closed: false,
                },
                Endpoint::Closed(a) => Lower::At {
                    value: a,
                    closed: true,
                },
            },
        }
    }

    /// `(value, closed)` of the upper boundary, `None` for `+inf`.
    fn upper(&self) -> Option<(&Rational, bool)> {
        match self {
            Grain::Singleton(p) => Some((p, true)),
            Grain::Interval { hi, .. } => match hi {
                Endpoint::Unbounded => None,
                Endpoint::Open(b) => Some((b, false)),
                Endpoint::Closed(b) => Some((b, true)),
            },
        }
    }

    /// Ordering of lower boundaries; sorts any disjoint family ascending.
    pub(crate) fn cmp_start(&self, other: &Grain) -> Ordering {
        self.lower().cmp(&other.lower())
    }

    /// True when the grain starts at or before `x` (ignores the upper side).
    pub(crate) fn starts_at_or_before(&self, x: &Rational) -> bool {
        match self.lower() {
            Lower::NegInf => true,
            Lower::At { value, closed } => value < x || (value == x && closed),
        }
    }

    /// Every element of `self` is strictly below every element of `other`.
    pub fn lies_below(&self, other: &Grain) -> bool {
        let Some((hi, hi_closed)) = self.upper() else {
            return false;
        };
        match other.lower() {
            Lower::NegInf => false,
            Lower::At { value, closed } => hi < value || (hi == value && !(hi_closed && closed)),
        }
    }

    /// True when the two grains share at least one real number.
    pub fn overlaps(&self, other: &Grain) -> bool {
        !(self.lies_below(other) || other.lies_below(self))
    }

    /// Entropy-maximizing preprocessing: the point itself, or the midpoint
    /// of a bounded interval regardless of endpoint kinds.
    pub fn emp(&self) -> Result<Rational, CoarseError> {
        match self {
            Grain::Singleton(x) => Ok(x.clone()),
            Grain::Interval { lo, hi } => match (lo.value(), hi.value()) {
                (Some(a), Some(b)) => Ok((a + b) / Rational::from_integer(2.into())),
                _ => Err(CoarseError::UnboundedGrain(self.to_string())),
            },
        }
    }
}

/// Element-wise ordering of two grains.
///
/// `Less` when every element of `a` is below every element of `b`; `Equal`
/// only for identical grains. Overlapping distinct grains are incomparable,
/// which cannot happen for two grains of one valid partition.
pub fn grain_compare(a: &Grain, b: &Grain) -> Result<Ordering, CoarseError> {
    if a == b {
        Ok(Ordering::Equal)
    } else if a.lies_below(b) {
        Ok(Ordering::Less)
    } else if b.lies_below(a) {
        Ok(Ordering::Greater)
    } else {
        Err(CoarseError::Incomparable(a.to_string(), b.to_string()))
    }
}

impl fmt::Display for Grain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grain::Singleton(x) => write!(f, "{{{}}}", to_literal(x)),
            Grain::Interval { lo, hi } => {
                match lo {
                    Endpoint::Unbounded => write!(f, "(-inf")?,
                    Endpoint::Open(a) => write!(f, "({}", to_literal(a))?,
                    Endpoint::Closed(a) => write!(f, "[{}", to_literal(a))?,
                }
                match hi {
                    Endpoint::Unbounded => write!(f, ",+inf)"),
                    Endpoint::Open(b) => write!(f, ",{})", to_literal(b)),
                    Endpoint::Closed(b) => write!(f, ",{}]", to_literal(b)),
                }
            }
        }
    }
}
