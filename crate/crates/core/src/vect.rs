use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use smallvec::SmallVec;

use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: {0} vs {1}")]
pub struct DimMismatch(pub usize, pub usize);

/// A vector of exact rationals in a fixed ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vect(SmallVec<[Rat; 8]>);

impl Vect {
    pub fn zero(dim: usize) -> Vect {
        Vect(SmallVec::from_elem(Rat::ZERO, dim))
    }

    pub fn new(coords: Vec<Rat>) -> Vect {
        Vect(SmallVec::from_vec(coords))
    }

    pub fn from_ints(xs: &[i64]) -> Vect {
        Vect(xs.iter().map(|&x| Rat::int(x)).collect())
    }

    /// Entries given as `(numerator, denominator)` pairs.
    pub fn from_fracs(xs: &[(i64, i64)]) -> Vect {
        Vect(xs.iter().map(|&(n, d)| Rat::new(n, d)).collect())
    }

    pub fn unit(dim: usize, i: usize) -> Vect {
        let mut v = Vect::zero(dim);
        v.0[i] = Rat::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn try_add(&self, o: &Vect) -> Result<Vect, DimMismatch> {
        self.check(o)?;
        Ok(Vect(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect()))
    }

    pub fn try_sub(&self, o: &Vect) -> Result<Vect, DimMismatch> {
        self.check(o)?;
        Ok(Vect(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect()))
    }

    pub fn try_dot(&self, o: &Vect) -> Result<Rat, DimMismatch> {
        self.check(o)?;
        Ok(self.dot_unchecked(o))
    }

    fn check(&self, o: &Vect) -> Result<(), DimMismatch> {
        if self.dim() == o.dim() {
            Ok(())
        } else {
            Err(DimMismatch(self.dim(), o.dim()))
        }
    }

    fn dot_unchecked(&self, o: &Vect) -> Rat {
        let mut s = Rat::ZERO;
        for (a, b) in self.0.iter().zip(&o.0) {
            if !a.is_zero() && !b.is_zero() {
                s += a * b;
            }
        }
        s
    }

    /// Euclidean pairing; panics on mismatched dimensions.
    pub fn dot(&self, o: &Vect) -> Rat {
        self.try_dot(o).expect("mixed-dimension dot product")
    }

    pub fn norm_sq(&self) -> Rat {
        self.dot_unchecked(self)
    }

    pub fn scale(&self, c: &Rat) -> Vect {
        Vect(self.0.iter().map(|a| a * c).collect())
    }

    /// `self + c * o`
    pub fn axpy(&self, c: &Rat, o: &Vect) -> Vect {
        self.check(o).expect("mixed-dimension arithmetic");
        if c.is_zero() {
            return self.clone();
        }
        Vect(self.0.iter().zip(&o.0).map(|(a, b)| if b.is_zero() { a.clone() } else { a + &(c * b) }).collect())
    }

    /// Reflection in the hyperplane orthogonal to `a`.
    pub fn reflect(&self, a: &Vect) -> Vect {
        let k = self.dot(a) * Rat::int(2) / a.norm_sq();
        self.axpy(&-k, a)
    }

    /// `⟨self, a∨⟩` with `a∨ = 2a/⟨a,a⟩`.
    pub fn pair_coroot(&self, a: &Vect) -> Rat {
        self.dot(a) * Rat::int(2) / a.norm_sq()
    }

    pub fn lincomb(coeffs: &[Rat], basis: &[Vect]) -> Vect {
        assert_eq!(coeffs.len(), basis.len());
        let dim = basis.first().map(Vect::dim).unwrap_or(0);
        let mut v = Vect::zero(dim);
        for (c, b) in coeffs.iter().zip(basis) {
            v = v.axpy(c, b);
        }
        v
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(Rat::to_i64).collect()
    }
}

impl Index<usize> for Vect {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vect {
    fn index_mut(&mut self, i: usize) -> &mut Rat {
        &mut self.0[i]
    }
}

impl Add for &Vect {
    type Output = Vect;
    fn add(self, o: &Vect) -> Vect {
        self.try_add(o).expect("mixed-dimension arithmetic")
    }
}

impl Add for Vect {
    type Output = Vect;
    fn add(self, o: Vect) -> Vect {
        &self + &o
    }
}

impl Sub for &Vect {
    type Output = Vect;
    fn sub(self, o: &Vect) -> Vect {
        self.try_sub(o).expect("mixed-dimension arithmetic")
    }
}

impl Sub for Vect {
    type Output = Vect;
    fn sub(self, o: Vect) -> Vect {
        &self - &o
    }
}

impl Neg for &Vect {
    type Output = Vect;
    fn neg(self) -> Vect {
        Vect(self.0.iter().map(|a| -a).collect())
    }
}

impl Neg for Vect {
    type Output = Vect;
    fn neg(self) -> Vect {
        -&self
    }
}

impl fmt::Display for Vect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Vect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<Rat> for Vect {
    fn from_iter<I: IntoIterator<Item = Rat>>(it: I) -> Self {
        Vect(it.into_iter().collect())
    }
}

/// Formats a slice of rationals like a `Vect`.
pub fn fmt_rats(xs: &[Rat]) -> String {
    Vect::new(xs.to_vec()).to_string()
}

/// Parses `"[1,2,3/2]"`, `"1,2,3/2"` or whitespace separated entries.
pub fn parse_rats(s: &str) -> Result<Vec<Rat>, crate::rat::ParseRatError> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_dimensions_rejected() {
        let a = Vect::from_ints(&[1, 2, 3]);
        let b = Vect::from_ints(&[1, 2]);
        assert_eq!(a.try_add(&b), Err(DimMismatch(3, 2)));
        assert!(a.try_dot(&b).is_err());
    }

    #[test]
    fn reflection_is_involutive() {
        let a = Vect::from_fracs(&[(1, 2), (-1, 2), (-1, 2), (-1, 2)]);
        let v = Vect::from_ints(&[3, 1, -4, 2]);
        let w = v.reflect(&a);
        assert_eq!(w.reflect(&a), v);
        assert_eq!(a.reflect(&a), -&a);
    }

    #[test]
    fn parse_formats() {
        let v = parse_rats("[1, 5/2,-3]").unwrap();
        assert_eq!(fmt_rats(&v), "[1,5/2,-3]");
        assert_eq!(parse_rats("1 0 1/2 1/2").unwrap().len(), 4);
        assert!(parse_rats("[]").unwrap().is_empty());
    }
}
