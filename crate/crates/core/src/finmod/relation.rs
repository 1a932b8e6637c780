use std::fmt;

/// A binary relation on `{0, .., n-1}` stored as a row-major bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Relation {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            for j in 0..n {
                r.insert(i, j);
            }
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.n);
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "pair ({i},{j}) outside carrier of size {}", self.n);
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n);
        self.bits[i * self.words + j / 64] &= !(1 << (j % 64));
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).filter(move |&j| self.contains(i, j)).map(move |j| (i, j)))
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        Relation {
            n: self.n,
            words: self.words,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }

    /// Diagrammatic composition: `(i, j)` iff `(i, k) ∈ self` and `(k, j) ∈ other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        let mut out = Relation::empty(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.contains(i, k) {
                    let base = i * self.words;
                    for (w, b) in other.row(k).iter().enumerate() {
                        out.bits[base + w] |= b;
                    }
                }
            }
        }
        out
    }

    /// Reflexive-transitive closure, by squaring `Id ∪ R` until it is stable.
    pub fn star(&self) -> Relation {
        let mut r = self.union(&Relation::identity(self.n));
        loop {
            let sq = r.compose(&r);
            if sq == r {
                return r;
            }
            r = sq;
        }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        assert_eq!(self.n, other.n);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_of_empty_is_identity() {
        assert_eq!(Relation::empty(2).star(), Relation::identity(2));
    }

    #[test]
    fn compose_through_midpoint() {
        let a = Relation::from_pairs(3, [(0, 2)]);
        let b = Relation::from_pairs(3, [(2, 1)]);
        assert_eq!(a.compose(&b), Relation::from_pairs(3, [(0, 1)]));
    }

    #[test]
    fn star_of_single_edge() {
        let r = Relation::from_pairs(2, [(0, 1)]);
        assert_eq!(r.star(), Relation::from_pairs(2, [(0, 0), (1, 1), (0, 1)]));
    }

    #[test]
    fn wide_relations_use_several_words() {
        let mut r = Relation::empty(130);
        for i in 0..129 {
            r.insert(i, i + 1);
        }
        let s = r.star();
        assert!(s.contains(0, 129));
        assert!(!s.contains(129, 0));
        assert_eq!(s.len(), 130 * 131 / 2);
    }
}
