//! Sequences of fixed-dimension Boolean vectors.

use std::fmt;

use rand::Rng;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("vector dimension must be at least 1")]
    ZeroDim,
    #[error("vector {index} has dimension {found}, expected {expected}")]
    Ragged {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid bit `{0}` (expected 0 or 1)")]
    BadBit(char),
    #[error("empty vector in sequence")]
    EmptyVector,
}

/// An ordered list of Boolean vectors sharing one dimension, stored
/// earliest-first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanSequence {
    dim: usize,
    bits: Vec<bool>,
}

impl BooleanSequence {
    pub fn new(dim: usize) -> Result<Self, SeqError> {
        if dim == 0 {
            return Err(SeqError::ZeroDim);
        }
        Ok(BooleanSequence {
            dim,
            bits: Vec::new(),
        })
    }

    pub fn with_capacity(dim: usize, len: usize) -> Result<Self, SeqError> {
        let mut s = Self::new(dim)?;
        s.bits.reserve(dim * len);
        Ok(s)
    }

    pub fn from_vectors<V: AsRef<[bool]>>(dim: usize, vectors: &[V]) -> Result<Self, SeqError> {
        let mut s = Self::with_capacity(dim, vectors.len())?;
        for (index, v) in vectors.iter().enumerate() {
            let v = v.as_ref();
            if v.len() != dim {
                return Err(SeqError::Ragged {
                    index,
                    expected: dim,
                    found: v.len(),
                });
            }
            s.bits.extend_from_slice(v);
        }
        Ok(s)
    }

    /// `len` copies of one vector.
    pub fn repeated(x: &[bool], len: usize) -> Result<Self, SeqError> {
        let mut s = Self::with_capacity(x.len(), len)?;
        for _ in 0..len {
            s.bits.extend_from_slice(x);
        }
        Ok(s)
    }

    /// Uniformly random bits.
    pub fn random<R: Rng + ?Sized>(dim: usize, len: usize, rng: &mut R) -> Result<Self, SeqError> {
        let mut s = Self::with_capacity(dim, len)?;
        s.bits.extend((0..dim * len).map(|_| rng.random::<bool>()));
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bits.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Vector at moment `t` (earliest = 0).
    pub fn get(&self, t: usize) -> &[bool] {
        &self.bits[t * self.dim..(t + 1) * self.dim]
    }

    pub fn last(&self) -> Option<&[bool]> {
        (!self.is_empty()).then(|| self.get(self.len() - 1))
    }

    pub fn push(&mut self, v: &[bool]) -> Result<(), SeqError> {
        if v.len() != self.dim {
            return Err(SeqError::Ragged {
                index: self.len(),
                expected: self.dim,
                found: v.len(),
            });
        }
        self.bits.extend_from_slice(v);
        Ok(())
    }

    pub fn iter(&self) -> std::slice::Chunks<'_, bool> {
        self.bits.chunks(self.dim)
    }

    /// All bits, vector after vector.
    pub fn as_bits(&self) -> &[bool] {
        &self.bits
    }

    /// Same vectors in the opposite temporal order.
    pub fn reversed(&self) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len());
        for v in self.bits.chunks(self.dim).rev() {
            bits.extend_from_slice(v);
        }
        BooleanSequence { dim: self.dim, bits }
    }

    /// Parses `11;01;10` (vectors as bit strings, `;`-separated, leftmost
    /// first). An empty string needs `dim` to be given.
    pub fn parse(text: &str, dim: Option<usize>) -> Result<Self, SeqError> {
        let text = text.trim();
        if text.is_empty() {
            return Self::new(dim.unwrap_or(0));
        }
        let mut vectors = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                return Err(SeqError::EmptyVector);
            }
            let v = part
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(SeqError::BadBit(other)),
                })
                .collect::<Result<Vec<bool>, _>>()?;
            vectors.push(v);
        }
        let d = dim.unwrap_or(vectors[0].len());
        Self::from_vectors(d, &vectors)
    }
}

/// Renders a vector as a bit string, component 0 first.
pub fn bit_string(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for BooleanSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            f.write_str(&bit_string(v))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BooleanSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanSequence[{}]({})", self.dim, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let s = BooleanSequence::parse("11;01;10", None).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.len(), 3);
        assert_eq!(s.get(1), &[false, true]);
        assert_eq!(s.to_string(), "11;01;10");
        assert_eq!(s.reversed().to_string(), "10;01;11");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            BooleanSequence::parse("11;0", None),
            Err(SeqError::Ragged {
                index: 1,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(BooleanSequence::parse("12", None), Err(SeqError::BadBit('2')));
        assert_eq!(BooleanSequence::parse("1;;1", None), Err(SeqError::EmptyVector));
        assert_eq!(BooleanSequence::parse("", None), Err(SeqError::ZeroDim));
        assert!(BooleanSequence::parse("", Some(3)).unwrap().is_empty());
    }

    #[test]
    fn repeated_vectors() {
        let s = BooleanSequence::repeated(&[false, true], 3).unwrap();
        assert_eq!(s.to_string(), "01;01;01");
        assert_eq!(s.last(), Some(&[false, true][..]));
    }
}
