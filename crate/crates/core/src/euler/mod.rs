//! Euler configurations: collinear central configurations of three particles.
//!
//! With the normalization `x₁ = 0, x₂ = 1, x₃ = 1 + s` a configuration of the
//! second cell (particle 2 in the middle) is a root `s > 0` of
//! `g(s) = m₁A + m₂B + m₃C`. The other two cells are reduced to the same
//! half-line by permuting the masses ([`cell_mass_view`]).
//!
//! Counting in a cell goes through the second derivative: `g″` is, up to a
//! positive factor, the four-term signomial `H(y)` with `s = y/(1−y)`, so its
//! roots are certified by the signomial engine; `g′` and then `g` are
//! monotone between consecutive breakpoints and their roots are bracketed
//! from the endpoint signs given by exact asymptotic expansions.

mod asymptotics;
mod count;
mod formulas;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use asymptotics::{endpoint_sign_g, endpoint_sign_g_prime};
pub use count::{
    cell_mass_view, celli_identity_residual, count_all, count_cell, degenerate_family, solve,
    CellSolutions, Census,
};
pub use formulas::{
    abc_terms, eval_g, eval_g_expanded, eval_g_line, eval_g_prime, eval_h, h_signomial,
};

/// Masses (or vorticities) of the three particles. Any real values are
/// allowed, including all zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassTriple {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

impl MassTriple {
    pub fn new(m1: f64, m2: f64, m3: f64) -> Self {
        MassTriple { m1, m2, m3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }

    /// The triple with exterior masses exchanged (mirror image).
    pub fn reflected(&self) -> Self {
        MassTriple::new(self.m3, self.m2, self.m1)
    }
}

impl From<[f64; 3]> for MassTriple {
    fn from(m: [f64; 3]) -> Self {
        MassTriple::new(m[0], m[1], m[2])
    }
}

/// A cell is the pair of mutually reversed orderings named after the
/// particle in the middle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    One,
    Two,
    Three,
}

impl Cell {
    pub const ALL: [Cell; 3] = [Cell::One, Cell::Two, Cell::Three];

    pub fn middle_particle(self) -> u8 {
        match self {
            Cell::One => 1,
            Cell::Two => 2,
            Cell::Three => 3,
        }
    }

    pub fn from_middle(particle: u8) -> Option<Cell> {
        match particle {
            1 => Some(Cell::One),
            2 => Some(Cell::Two),
            3 => Some(Cell::Three),
            _ => None,
        }
    }

    /// Particle indices (1-based) placed at the left, middle and right of the
    /// normalized configuration `(0, 1, 1 + s)`.
    pub fn layout(self) -> [usize; 3] {
        match self {
            Cell::One => [2, 1, 3],
            Cell::Two => [1, 2, 3],
            Cell::Three => [1, 3, 2],
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.middle_particle())
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let k = u8::deserialize(d)?;
        Cell::from_middle(k).ok_or_else(|| serde::de::Error::custom(format!("no cell {k}")))
    }
}

/// A number of configurations, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Count {
    Finite(usize),
    Infinite,
}

impl Count {
    pub fn finite(self) -> Option<usize> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Count::Infinite
    }
}

impl std::ops::Add for Count {
    type Output = Count;

    fn add(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a + b),
            _ => Count::Infinite,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => s.serialize_u64(*n as u64),
            Count::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|n| Count::Finite(n as usize))
                .ok_or_else(|| serde::de::Error::custom("count must be a non-negative integer")),
            serde_json::Value::String(s) if s == "inf" => Ok(Count::Infinite),
            other => Err(serde::de::Error::custom(format!("invalid count {other}"))),
        }
    }
}

/// Counts per cell and their total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCount {
    pub e1: Count,
    pub e2: Count,
    pub e3: Count,
    pub total: Count,
}

impl CellCount {
    pub fn new(e1: Count, e2: Count, e3: Count) -> Self {
        CellCount {
            e1,
            e2,
            e3,
            total: e1 + e2 + e3,
        }
    }

    pub fn get(&self, cell: Cell) -> Count {
        match cell {
            Cell::One => self.e1,
            Cell::Two => self.e2,
            Cell::Three => self.e3,
        }
    }
}

/// The five parameter families on which `g` vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegenerateFamily {
    /// All masses zero.
    I,
    /// `b = 0` and `m₁ = −m₂ = m₃`.
    Ii,
    /// `b = 1`.
    Iii,
    /// `b = 2`, `m₂ = 0` and `m₁ = m₃`.
    Iv,
    /// `b = 3` and `m₁ = m₂ = m₃`.
    V,
}

impl fmt::Display for DegenerateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegenerateFamily::I => "i",
            DegenerateFamily::Ii => "ii",
            DegenerateFamily::Iii => "iii",
            DegenerateFamily::Iv => "iv",
            DegenerateFamily::V => "v",
        })
    }
}

/// One Euler configuration, normalized so that the cell's left, middle and
/// right particles sit at `0`, `1` and `1 + s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationSolution {
    pub cell: Cell,
    pub s: f64,
    /// Abscissae `(x₁, x₂, x₃)` indexed by particle.
    pub positions: [f64; 3],
    pub degenerate: bool,
}

impl ConfigurationSolution {
    pub fn new(cell: Cell, s: f64, degenerate: bool) -> Self {
        let mut positions = [0.0; 3];
        for (slot, particle) in cell.layout().into_iter().enumerate() {
            positions[particle - 1] = [0.0, 1.0, 1.0 + s][slot];
        }
        ConfigurationSolution {
            cell,
            s,
            positions,
            degenerate,
        }
    }
}
