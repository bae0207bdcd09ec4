//! Vectors over GF(2) and an incrementally maintained basis of edge vectors.
//!
//! Coordinates are 1-based to match vertex labels: the edge vector of the
//! pair `(i, j)` has exactly bits `i` and `j` set. Addition is XOR.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("invalid edge ({i},{j}) in dimension {n}: need 1 <= i < j <= n")]
    InvalidEdge { i: usize, j: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A fixed-length vector in GF(2)^n stored as packed 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    /// The all-ones vector.
    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = !0;
        }
        v.mask_tail();
        v
    }

    /// Indicator vector of a set of 1-based coordinates.
    pub fn indicator(len: usize, coords: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &c in coords {
            v.set(c);
        }
        v
    }

    /// Dimension of the ambient space.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Reads 1-based coordinate `i`.
    ///
    /// # Panics
    /// Panics if `i` is outside `1..=len`.
    pub fn get(&self, i: usize) -> bool {
        let k = self.index(i);
        (self.words[k / WORD] >> (k % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        let k = self.index(i);
        self.words[k / WORD] |= 1 << (k % WORD);
    }

    pub fn flip(&mut self, i: usize) {
        let k = self.index(i);
        self.words[k / WORD] ^= 1 << (k % WORD);
    }

    /// In-place addition.
    pub fn xor_assign(&mut self, other: &Self) -> Result<(), Gf2Error> {
        self.check_dim(other.len)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Iterates the 1-based coordinates that are set, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k * WORD + b + 1)
            })
        })
    }

    /// Lowest set coordinate (1-based), if any.
    pub fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD + w.trailing_zeros() as usize + 1)
    }

    fn check_dim(&self, found: usize) -> Result<(), Gf2Error> {
        if found == self.len {
            Ok(())
        } else {
            Err(Gf2Error::DimensionMismatch {
                expected: self.len,
                found,
            })
        }
    }

    fn index(&self, i: usize) -> usize {
        assert!(
            (1..=self.len).contains(&i),
            "coordinate {i} out of range 1..={}",
            self.len
        );
        i - 1
    }

    fn mask_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

/// Renders coordinates 1..n left to right, e.g. `1100`.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// The vector with exactly coordinates `i` and `j` set.
pub fn edge_vector(i: usize, j: usize, n: usize) -> Result<BitVector, Gf2Error> {
    if i == 0 || i >= j || j > n {
        return Err(Gf2Error::InvalidEdge { i, j, n });
    }
    let mut v = BitVector::zeros(n);
    v.set(i);
    v.set(j);
    Ok(v)
}

/// Sum of `vs` in GF(2)^n. The empty sum is the zero vector.
pub fn xor_sum<'a, I>(n: usize, vs: I) -> Result<BitVector, Gf2Error>
where
    I: IntoIterator<Item = &'a BitVector>,
{
    let mut acc = BitVector::zeros(n);
    for v in vs {
        acc.xor_assign(v)?;
    }
    Ok(acc)
}

/// Rank of a family of vectors by plain Gaussian elimination.
///
/// Kept separate from [`EdgeBasis`] so that it can re-check the basis.
pub fn rank(vs: &[BitVector]) -> usize {
    let mut rows: Vec<BitVector> = vs.to_vec();
    let mut rank = 0;
    let Some(n) = rows.first().map(BitVector::len) else {
        return 0;
    };
    for col in 1..=n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot).expect("uniform dimension");
            }
        }
        rank += 1;
    }
    rank
}

/// Outcome of [`EdgeBasis::try_insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insertion<K> {
    Inserted,
    /// The vector already lies in the span; carries the unique set of
    /// members (in member order) whose sum equals it.
    Dependent(Vec<K>),
}

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    reduced: BitVector,
    /// Members whose sum equals `reduced`, as a bitset over member positions.
    combination: Vec<u64>,
}

/// A linearly independent family of keyed vectors in echelon form.
///
/// Each echelon row remembers which original members it is a combination
/// of, so a dependent query returns its representation directly.
#[derive(Clone, Debug)]
pub struct EdgeBasis<K> {
    dimension: usize,
    members: Vec<(K, BitVector)>,
    rows: Vec<Row>,
}

impl<K: Clone> EdgeBasis<K> {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            members: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[(K, BitVector)] {
        &self.members
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.members.iter().map(|(k, _)| k)
    }

    /// Appends `v` if it is independent of the current members.
    pub fn try_insert(&mut self, key: K, v: BitVector) -> Result<Insertion<K>, Gf2Error> {
        let (residual, combination) = self.reduce(&v)?;
        match residual.lowest_one() {
            None => Ok(Insertion::Dependent(self.keys_of(&combination))),
            Some(pivot) => {
                let mut combination = combination;
                let pos = self.members.len();
                combination[pos / WORD] |= 1 << (pos % WORD);
                self.rows.push(Row {
                    pivot,
                    reduced: residual,
                    combination,
                });
                self.members.push((key, v));
                Ok(Insertion::Inserted)
            }
        }
    }

    /// The unique member subset summing to `v`, or `None` if `v` is outside
    /// the span.
    pub fn represent(&self, v: &BitVector) -> Result<Option<Vec<K>>, Gf2Error> {
        let (residual, combination) = self.reduce(v)?;
        Ok(residual.is_zero().then(|| self.keys_of(&combination)))
    }

    pub fn contains(&self, v: &BitVector) -> Result<bool, Gf2Error> {
        Ok(self.reduce(v)?.0.is_zero())
    }

    fn reduce(&self, v: &BitVector) -> Result<(BitVector, Vec<u64>), Gf2Error> {
        if v.len() != self.dimension {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.dimension,
                found: v.len(),
            });
        }
        let mut residual = v.clone();
        let mut combination = vec![0u64; (self.members.len() + 1).div_ceil(WORD)];
        // Rows are in insertion order and each row is zero on the pivots of
        // the rows before it, so a single forward pass clears every pivot.
        for row in &self.rows {
            if residual.get(row.pivot) {
                residual.xor_assign(&row.reduced)?;
                for (c, r) in combination.iter_mut().zip(&row.combination) {
                    *c ^= r;
                }
            }
        }
        Ok((residual, combination))
    }

    fn keys_of(&self, combination: &[u64]) -> Vec<K> {
        self.members
            .iter()
            .enumerate()
            .filter(|(p, _)| (combination[p / WORD] >> (p % WORD)) & 1 == 1)
            .map(|(_, (k, _))| k.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(i: usize, j: usize, n: usize) -> BitVector {
        edge_vector(i, j, n).unwrap()
    }

    #[test]
    fn edge_vectors() {
        assert_eq!(ev(1, 2, 4).to_string(), "1100");
        assert_eq!(ev(3, 4, 4).to_string(), "0011");
        assert_eq!(ev(1, 4, 4).to_string(), "1001");
        assert!(edge_vector(2, 2, 4).is_err());
        assert!(edge_vector(3, 2, 4).is_err());
        assert!(edge_vector(0, 2, 4).is_err());
        assert!(edge_vector(1, 5, 4).is_err());
    }

    #[test]
    fn sums() {
        let tri = [ev(1, 2, 3), ev(2, 3, 3), ev(1, 3, 3)];
        assert_eq!(xor_sum(3, &tri).unwrap().to_string(), "000");
        let m = [ev(1, 2, 4), ev(3, 4, 4)];
        assert_eq!(xor_sum(4, &m).unwrap().to_string(), "1111");
        assert_eq!(xor_sum(4, &[]).unwrap().to_string(), "0000");
        let mixed = [ev(1, 2, 4), ev(1, 2, 3)];
        assert_eq!(
            xor_sum(4, &mixed),
            Err(Gf2Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn ones_and_tail() {
        for n in [1, 63, 64, 65, 130] {
            let v = BitVector::ones(n);
            assert_eq!(v.weight(), n);
            assert_eq!(v.ones_iter().collect::<Vec<_>>(), (1..=n).collect::<Vec<_>>());
        }
        assert_eq!(BitVector::indicator(70, &[3, 66]).lowest_one(), Some(3));
        assert_eq!(BitVector::zeros(70).lowest_one(), None);
    }

    #[test]
    fn insert_examples() {
        let mut b = EdgeBasis::new(4);
        assert_eq!(b.try_insert("12", ev(1, 2, 4)).unwrap(), Insertion::Inserted);
        assert_eq!(b.try_insert("23", ev(2, 3, 4)).unwrap(), Insertion::Inserted);
        assert_eq!(
            b.try_insert("13", ev(1, 3, 4)).unwrap(),
            Insertion::Dependent(vec!["12", "23"])
        );
        assert_eq!(b.len(), 2);

        let mut b = EdgeBasis::new(4);
        b.try_insert("12", ev(1, 2, 4)).unwrap();
        assert_eq!(
            b.try_insert("0", BitVector::zeros(4)).unwrap(),
            Insertion::Dependent(vec![])
        );
        assert!(b.try_insert("x", ev(1, 2, 3)).is_err());
    }

    /// Exhaustive search over member subsets.
    fn brute_represent(members: &[BitVector], target: &BitVector) -> Vec<Vec<usize>> {
        (0u32..1 << members.len())
            .filter(|mask| {
                let chosen = (0..members.len()).filter(|k| mask >> k & 1 == 1).map(|k| &members[k]);
                &xor_sum(target.len(), chosen).unwrap() == target
            })
            .map(|mask| (0..members.len()).filter(|k| mask >> k & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn represent_examples() {
        let path = [ev(1, 2, 4), ev(2, 3, 4), ev(3, 4, 4)];
        let ones = BitVector::ones(4);
        assert_eq!(brute_represent(&path, &ones), vec![vec![0, 2]]);
        let mut b = EdgeBasis::new(4);
        for (k, v) in path.iter().enumerate() {
            b.try_insert(k, v.clone()).unwrap();
        }
        assert_eq!(b.represent(&ones).unwrap(), Some(vec![0, 2]));

        let mut star = EdgeBasis::new(4);
        for (k, j) in [2, 3, 4].into_iter().enumerate() {
            star.try_insert(k, ev(1, j, 4)).unwrap();
        }
        assert_eq!(star.represent(&ones).unwrap(), Some(vec![0, 1, 2]));

        let mut single = EdgeBasis::new(4);
        single.try_insert(0, ev(1, 2, 4)).unwrap();
        assert_eq!(single.represent(&ev(3, 4, 4)).unwrap(), None);
    }

    #[test]
    fn rank_matches_independence() {
        assert_eq!(rank(&[ev(1, 2, 3), ev(2, 3, 3), ev(1, 3, 3)]), 2);
        assert_eq!(rank(&[ev(1, 2, 4), ev(3, 4, 4)]), 2);
        assert_eq!(rank(&[]), 0);
    }
}
