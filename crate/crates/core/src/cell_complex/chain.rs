use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use super::cell::{Cell, OrientedCell, Sign};
use crate::error::{Error, Result};

/// Formal integer combination of cells. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain {
    terms: BTreeMap<Cell, i64>,
}

impl Chain {
    pub fn new() -> Self {
        Chain::default()
    }

    pub fn add_cell(&mut self, cell: &Cell, coef: i64) {
        if coef == 0 {
            return;
        }
        match self.terms.entry(cell.clone()) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_oriented(&mut self, cell: &OrientedCell, coef: i64) {
        self.add_cell(cell.cell(), coef * cell.sign().as_i64());
    }

    pub fn add_chain(&mut self, other: &Chain, coef: i64) {
        for (c, k) in other.iter() {
            self.add_cell(c, k * coef);
        }
    }

    pub fn coefficient(&self, cell: &Cell) -> i64 {
        self.terms.get(cell).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cell, i64)> + '_ {
        self.terms.iter().map(|(c, &k)| (c, k))
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.terms.keys()
    }

    /// Terms as oriented cells with unit multiplicity folded into the sign,
    /// plus the remaining absolute multiplicity.
    pub fn oriented_terms(&self) -> impl Iterator<Item = (OrientedCell, i64)> + '_ {
        self.terms.iter().map(|(c, &k)| {
            let sign = if k > 0 { Sign::Plus } else { Sign::Minus };
            (OrientedCell::from_cell(c.clone(), sign), k.abs())
        })
    }

    pub fn scaled(&self, coef: i64) -> Chain {
        let mut out = Chain::new();
        out.add_chain(self, coef);
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&Cell) -> bool) -> Chain {
        Chain {
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| keep(c))
                .map(|(c, &k)| (c.clone(), k))
                .collect(),
        }
    }

    /// Linear extension of [`OrientedCell::facets`].
    pub fn boundary(&self) -> Result<Chain> {
        let mut out = Chain::new();
        for (c, k) in self.iter() {
            out.add_chain(&OrientedCell::from(c.clone()).facets()?, k);
        }
        Ok(out)
    }

    /// Appends `extra` zero coordinates to every base point.
    pub fn padded(&self, extra: usize) -> Chain {
        Chain { terms: self.terms.iter().map(|(c, &k)| (c.padded(extra), k)).collect() }
    }

    /// Largest dimension of any base point, or `None` for the empty chain.
    pub fn ambient_dim(&self) -> Option<usize> {
        self.terms.keys().map(|c| c.base().dim()).max()
    }

    /// Chain-file text: one `<coef> <cell>` line per term.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (c, k) in self.iter() {
            s.push_str(&format!("{k} {c}\n"));
        }
        s
    }
}

impl FromIterator<(Cell, i64)> for Chain {
    fn from_iter<T: IntoIterator<Item = (Cell, i64)>>(iter: T) -> Self {
        let mut out = Chain::new();
        for (c, k) in iter {
            out.add_cell(&c, k);
        }
        out
    }
}

impl FromIterator<OrientedCell> for Chain {
    fn from_iter<T: IntoIterator<Item = OrientedCell>>(iter: T) -> Self {
        let mut out = Chain::new();
        for c in iter {
            out.add_oriented(&c, 1);
        }
        out
    }
}

impl From<OrientedCell> for Chain {
    fn from(cell: OrientedCell) -> Self {
        std::iter::once(cell).collect()
    }
}

impl AddAssign<&Chain> for Chain {
    fn add_assign(&mut self, rhs: &Chain) {
        self.add_chain(rhs, 1);
    }
}

impl SubAssign<&Chain> for Chain {
    fn sub_assign(&mut self, rhs: &Chain) {
        self.add_chain(rhs, -1);
    }
}

impl Add for Chain {
    type Output = Chain;
    fn add(mut self, rhs: Chain) -> Chain {
        self += &rhs;
        self
    }
}

impl Sub for Chain {
    type Output = Chain;
    fn sub(mut self, rhs: Chain) -> Chain {
        self -= &rhs;
        self
    }
}

impl Neg for Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scaled(-1)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (n, (c, k)) in self.iter().enumerate() {
            let sign = if k < 0 { "-" } else if n > 0 { "+" } else { "" };
            let sep = if n > 0 { " " } else { "" };
            if k.abs() == 1 {
                write!(f, "{sep}{sign}{c}")?;
            } else {
                write!(f, "{sep}{sign}{}*{c}", k.abs())?;
            }
        }
        Ok(())
    }
}

impl FromStr for Chain {
    type Err = Error;

    /// Parses chain-file text. Blank lines and `#` comments are ignored; each
    /// remaining line is `<coef> <cell>` or just `<cell>` (coefficient 1).
    fn from_str(text: &str) -> Result<Self> {
        let mut out = Chain::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = |e: Error| Error::Parse(format!("line {}: {e}", lineno + 1));
            let (coef, rest) = match line.split_once(char::is_whitespace) {
                Some((head, tail)) if head.parse::<i64>().is_ok() => {
                    (head.parse::<i64>().unwrap(), tail)
                }
                _ => (1, line),
            };
            let cell: OrientedCell = rest.parse().map_err(ctx)?;
            out.add_oriented(&cell, coef);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_complex::{CellKind, Point};

    fn oct(base: &[i64], idx: &[usize]) -> OrientedCell {
        OrientedCell::new(CellKind::Octahedron, Point::new(base.to_vec()), idx).unwrap()
    }

    #[test]
    fn opposite_orientations_cancel() {
        let a = oct(&[0; 5], &[0, 1, 2, 3]);
        let mut ch = Chain::from(a.clone());
        ch.add_oriented(&-a, 1);
        assert!(ch.is_empty());
    }

    #[test]
    fn addition_is_commutative() {
        let a = Chain::from(oct(&[0; 5], &[0, 1, 2, 3]));
        let b = Chain::from(oct(&[0; 5], &[1, 2, 3, 4]));
        assert_eq!(a.clone() + b.clone(), b + a);
    }

    #[test]
    fn text_roundtrip() {
        let text = "# a flower piece\n2 oct[0 1 2 3]@(0,0,0,0,0)\n-oct[1 2 3 4]@(0,0,0,0,0)\n\n";
        let ch: Chain = text.parse().unwrap();
        assert_eq!(ch.len(), 2);
        let again: Chain = ch.to_text().parse().unwrap();
        assert_eq!(again, ch);
        assert!("3 oct[0 1]@(0,0)".parse::<Chain>().is_err());
    }
}
