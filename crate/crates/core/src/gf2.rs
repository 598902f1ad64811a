//! Small dense linear algebra over GF(2).
//!
//! Vectors and matrix rows are packed into `u64` words, so every space handled
//! here has dimension at most 64. Bit `i` of a vector is its `i`-th coordinate;
//! the textual form is little-endian, coordinate 0 first.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A vector in GF(2)^len.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2Vec {
    bits: u64,
    len: u8,
}

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_DIM, "GF(2) dimension {len} exceeds {MAX_DIM}");
        Self { bits: 0, len: len as u8 }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        assert!(i < len);
        Self::from_bits(len, 1 << i)
    }

    pub fn from_bits(len: usize, bits: u64) -> Self {
        assert!(len <= MAX_DIM, "GF(2) dimension {len} exceeds {MAX_DIM}");
        Self {
            bits: bits & mask(len),
            len: len as u8,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len());
        self.bits >> i & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len());
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Bilinear pairing `sum_i a_i b_i`.
    pub fn dot(&self, other: &Gf2Vec) -> bool {
        debug_assert_eq!(self.len, other.len);
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// Every vector of GF(2)^len, in increasing lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Gf2Vec> {
        assert!(len < 64, "cannot enumerate GF(2)^{len}");
        let mut all: Vec<Gf2Vec> = (0..1u64 << len).map(|b| Gf2Vec::from_bits(len, b)).collect();
        all.sort();
        all.into_iter()
    }
}

impl std::ops::Add for Gf2Vec {
    type Output = Gf2Vec;

    fn add(self, rhs: Gf2Vec) -> Gf2Vec {
        debug_assert_eq!(self.len, rhs.len);
        Gf2Vec {
            bits: self.bits ^ rhs.bits,
            len: self.len,
        }
    }
}

impl std::ops::AddAssign for Gf2Vec {
    fn add_assign(&mut self, rhs: Gf2Vec) {
        debug_assert_eq!(self.len, rhs.len);
        self.bits ^= rhs.bits;
    }
}

/// Lexicographic order of the little-endian bitstrings.
impl Ord for Gf2Vec {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.bits ^ other.bits;
        let common = self.len.min(other.len) as u32;
        if diff & mask(common as usize) != 0 {
            let i = diff.trailing_zeros();
            return if self.bits >> i & 1 == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Gf2Vec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vec({self})")
    }
}

impl FromStr for Gf2Vec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.len() > MAX_DIM {
            return Err(Error::Parse(format!("bitstring longer than {MAX_DIM}: {s:?}")));
        }
        let mut v = Gf2Vec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Error::Parse(format!("not a bitstring: {s:?}"))),
            }
        }
        Ok(v)
    }
}

/// A `rows x cols` matrix acting on column vectors: `(M v)_i = <row_i, v>`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: Vec<Gf2Vec>,
    cols: usize,
}

impl Gf2Matrix {
    pub fn from_rows(cols: usize, rows: Vec<Gf2Vec>) -> Result<Self, Error> {
        if cols > MAX_DIM || rows.len() > MAX_DIM {
            return Err(Error::Structural(format!(
                "matrix {}x{cols} exceeds dimension limit {MAX_DIM}",
                rows.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Structural(format!(
                "matrix row {r} has length {}, expected {cols}",
                r.len()
            )));
        }
        Ok(Self { rows, cols })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![Gf2Vec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| Gf2Vec::unit(n, i)).collect(),
            cols: n,
        }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Gf2Vec]) -> Self {
        let cols = columns.len();
        let mut m = Self::zero(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for i in 0..rows {
                if c.get(i) {
                    m.rows[i].set(j, true);
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Gf2Vec] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Gf2Vec {
        let mut c = Gf2Vec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            c.set(i, r.get(j));
        }
        c
    }

    pub fn apply(&self, v: &Gf2Vec) -> Gf2Vec {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        let mut out = Gf2Vec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Row vector times matrix, i.e. the functional `lambda o M`.
    pub fn pull_back(&self, lambda: &Gf2Vec) -> Gf2Vec {
        assert_eq!(lambda.len(), self.nrows(), "functional length does not match matrix");
        let mut out = Gf2Vec::zeros(self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            if lambda.get(i) {
                out += *r;
            }
        }
        out
    }

    /// `self o other`.
    pub fn compose(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.nrows(), "incompatible matrix shapes");
        Gf2Matrix {
            rows: self.rows.iter().map(|r| other.pull_back(r)).collect(),
            cols: other.cols,
        }
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        self.rows.iter().filter(|r| basis.insert(**r)).count()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "Gf2Matrix[{}]", rows.join(";"))
    }
}

/// Incremental Gaussian elimination that remembers how each reduced row was
/// obtained from the inserted vectors.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    // (reduced vector, pivot bit, combination of inserted vectors)
    rows: Vec<(u64, u32, u64)>,
    inserted: usize,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: u64) -> (u64, u64) {
        let mut v = v;
        let mut combo = 0u64;
        for &(r, p, c) in &self.rows {
            if v >> p & 1 == 1 {
                v ^= r;
                combo ^= c;
            }
        }
        (v, combo)
    }

    /// Adds `v` if it is independent of the vectors accepted so far.
    pub fn insert(&mut self, v: Gf2Vec) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let (r, combo) = self.reduce(v.bits());
        if r == 0 {
            return false;
        }
        assert!(self.inserted < 64, "echelon basis holds at most 64 vectors");
        let pivot = r.trailing_zeros();
        let combo = combo ^ (1 << self.inserted);
        self.inserted += 1;
        // keep the rows fully reduced against the new pivot
        for row in &mut self.rows {
            if row.0 >> pivot & 1 == 1 {
                row.0 ^= r;
                row.2 ^= combo;
            }
        }
        self.rows.push((r, pivot, combo));
        true
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        self.reduce(v.bits()).0 == 0
    }

    /// Writes `v` as a sum of accepted vectors; bit `i` of the result selects
    /// the `i`-th accepted vector.
    pub fn decompose(&self, v: &Gf2Vec) -> Option<u64> {
        let (r, combo) = self.reduce(v.bits());
        (r == 0).then_some(combo)
    }
}

/// Rank of a family of vectors of common length `dim`.
pub fn rank_of<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a Gf2Vec>) -> usize {
    let mut basis = EchelonBasis::new(dim);
    vectors.into_iter().filter(|v| basis.insert(**v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Gf2Vec {
        s.parse().unwrap()
    }

    #[test]
    fn bitstrings_are_little_endian() {
        let x = v("100");
        assert!(x.get(0));
        assert_eq!(x.bits(), 1);
        assert_eq!(x.to_string(), "100");
        assert!("10a".parse::<Gf2Vec>().is_err());
    }

    #[test]
    fn order_is_lexicographic_on_strings() {
        let mut all: Vec<String> = Gf2Vec::all(3).map(|x| x.to_string()).collect();
        let sorted = {
            let mut s = all.clone();
            s.sort();
            s
        };
        assert_eq!(all, sorted);
        all.dedup();
        assert_eq!(all.len(), 8);
        assert!(v("01") < v("10"));
    }

    #[test]
    fn matrix_apply_and_pull_back_agree() {
        let m = Gf2Matrix::from_rows(3, vec![v("110"), v("011")]).unwrap();
        for x in Gf2Vec::all(3) {
            for l in Gf2Vec::all(2) {
                assert_eq!(l.dot(&m.apply(&x)), m.pull_back(&l).dot(&x));
            }
        }
    }

    #[test]
    fn compose_matches_sequential_application() {
        let a = Gf2Matrix::from_rows(2, vec![v("10"), v("11"), v("01")]).unwrap();
        let b = Gf2Matrix::from_rows(3, vec![v("101"), v("011")]).unwrap();
        let ba = b.compose(&a);
        for x in Gf2Vec::all(2) {
            assert_eq!(ba.apply(&x), b.apply(&a.apply(&x)));
        }
    }

    #[test]
    fn rank_and_decomposition() {
        let vs = [v("110"), v("011"), v("101"), v("001")];
        let mut basis = EchelonBasis::new(3);
        let accepted: Vec<bool> = vs.iter().map(|x| basis.insert(*x)).collect();
        assert_eq!(accepted, vec![true, true, false, true]);
        assert_eq!(basis.rank(), 3);
        let combo = basis.decompose(&v("101")).unwrap();
        // 101 = 110 + 011
        assert_eq!(combo, 0b011);
        assert_eq!(Gf2Matrix::from_rows(3, vs.to_vec()).unwrap().rank(), 3);
    }

    #[test]
    fn column_round_trip() {
        let cols = [v("10"), v("00"), v("11")];
        let m = Gf2Matrix::from_columns(2, &cols);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(m.column(j), *c);
        }
    }
}
