//! Kleene three-valued logic for predicates over truncated data.

/// Truth value of a predicate evaluated at finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trilean {
    True,
    False,
    /// The stored precision does not decide the predicate.
    Unknown,
}

impl Trilean {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Trilean::True
        } else {
            Trilean::False
        }
    }

    pub fn and(self, other: Trilean) -> Trilean {
        use Trilean::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }

    pub fn or(self, other: Trilean) -> Trilean {
        use Trilean::*;
        match (self, other) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            _ => Unknown,
        }
    }

    pub fn not(self) -> Trilean {
        match self {
            Trilean::True => Trilean::False,
            Trilean::False => Trilean::True,
            Trilean::Unknown => Trilean::Unknown,
        }
    }

    pub fn is_true(self) -> bool {
        self == Trilean::True
    }

    pub fn is_unknown(self) -> bool {
        self == Trilean::Unknown
    }

    /// Decided value, if any.
    pub fn decided(self) -> Option<bool> {
        match self {
            Trilean::True => Some(true),
            Trilean::False => Some(false),
            Trilean::Unknown => None,
        }
    }
}
