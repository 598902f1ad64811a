use std::fmt;
use std::ops::Mul;

/// An element of the three-element ternary semigroup `{+1, 0, -1}`.
///
/// The derived order is `Minus < Zero < Plus`; character enumeration uses it
/// for lexicographic output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign3 {
    Minus,
    Zero,
    Plus,
}

impl Sign3 {
    pub const ALL: [Sign3; 3] = [Sign3::Minus, Sign3::Zero, Sign3::Plus];

    pub fn to_i8(self) -> i8 {
        match self {
            Sign3::Minus => -1,
            Sign3::Zero => 0,
            Sign3::Plus => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Sign3> {
        match v {
            -1 => Some(Sign3::Minus),
            0 => Some(Sign3::Zero),
            1 => Some(Sign3::Plus),
            _ => None,
        }
    }

    /// `(-1)^bit`.
    pub fn from_parity(odd: bool) -> Sign3 {
        if odd {
            Sign3::Minus
        } else {
            Sign3::Plus
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign3::Zero
    }

    pub fn square(self) -> Sign3 {
        self * self
    }

    pub fn symbol(self) -> char {
        match self {
            Sign3::Minus => '-',
            Sign3::Zero => '0',
            Sign3::Plus => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign3> {
        match c {
            '-' => Some(Sign3::Minus),
            '0' => Some(Sign3::Zero),
            '+' => Some(Sign3::Plus),
            _ => None,
        }
    }
}

impl Mul for Sign3 {
    type Output = Sign3;

    fn mul(self, rhs: Sign3) -> Sign3 {
        match (self, rhs) {
            (Sign3::Zero, _) | (_, Sign3::Zero) => Sign3::Zero,
            (a, b) if a == b => Sign3::Plus,
            _ => Sign3::Minus,
        }
    }
}

impl fmt::Display for Sign3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_integers() {
        for a in Sign3::ALL {
            for b in Sign3::ALL {
                assert_eq!((a * b).to_i8(), a.to_i8() * b.to_i8());
            }
            assert_eq!(a * a * a, a);
            assert_eq!(Sign3::from_i8(a.to_i8()), Some(a));
            assert_eq!(Sign3::from_symbol(a.symbol()), Some(a));
        }
    }
}
