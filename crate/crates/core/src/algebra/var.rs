use std::fmt;

/// Family of complex coordinates: `z` for the source space, `w` for the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Z,
    W,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::Z => 'z',
            Family::W => 'w',
        }
    }
}

/// Real coordinate families. Index 0 prints without a suffix (`u`, `t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RealFamily {
    U,
    V,
    S,
    T,
    X,
    Y,
}

impl RealFamily {
    pub fn letter(self) -> char {
        match self {
            RealFamily::U => 'u',
            RealFamily::V => 'v',
            RealFamily::S => 's',
            RealFamily::T => 't',
            RealFamily::X => 'x',
            RealFamily::Y => 'y',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'u' => RealFamily::U,
            'v' => RealFamily::V,
            's' => RealFamily::S,
            't' => RealFamily::T,
            'x' => RealFamily::X,
            'y' => RealFamily::Y,
            _ => return None,
        })
    }
}

/// A polynomial indeterminate. Holomorphic and antiholomorphic coordinates
/// are formally independent; `conj` swaps them and fixes real variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Holo(Family, u16),
    Anti(Family, u16),
    Real(RealFamily, u16),
}

impl Var {
    pub fn z(i: u16) -> Self {
        Var::Holo(Family::Z, i)
    }
    pub fn zbar(i: u16) -> Self {
        Var::Anti(Family::Z, i)
    }
    pub fn w(i: u16) -> Self {
        Var::Holo(Family::W, i)
    }
    pub fn wbar(i: u16) -> Self {
        Var::Anti(Family::W, i)
    }
    pub fn real(f: RealFamily, i: u16) -> Self {
        Var::Real(f, i)
    }

    pub fn conj(self) -> Self {
        match self {
            Var::Holo(f, i) => Var::Anti(f, i),
            Var::Anti(f, i) => Var::Holo(f, i),
            r @ Var::Real(..) => r,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Var::Real(..))
    }

    pub fn family(self) -> Option<Family> {
        match self {
            Var::Holo(f, _) | Var::Anti(f, _) => Some(f),
            Var::Real(..) => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::Holo(fam, i) => write!(f, "{}{}", fam.letter(), i),
            Var::Anti(fam, i) => write!(f, "conj({}{})", fam.letter(), i),
            Var::Real(fam, 0) => write!(f, "{}", fam.letter()),
            Var::Real(fam, i) => write!(f, "{}{}", fam.letter(), i),
        }
    }
}
