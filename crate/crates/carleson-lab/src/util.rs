//! Small fixed-universe bitset used for cube member sets, frequency sets,
//! and point subsets.

/// Set of indices in 0..n backed by 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    words: Vec<u64>,
    n: usize,
}

impl IndexSet {
    pub fn new(n: usize) -> Self {
        IndexSet {
            words: vec![0; n.div_ceil(64)],
            n,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = IndexSet::new(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = IndexSet::new(n);
        for i in it {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &IndexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &IndexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersect_with(&mut self, other: &IndexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersects(&self, other: &IndexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn complement(&self) -> IndexSet {
        let mut out = IndexSet::new(self.n);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o = !w;
        }
        // mask the tail beyond n
        if !self.n.is_multiple_of(64) {
            let last = out.words.len() - 1;
            out.words[last] &= (1u64 << (self.n % 64)) - 1;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    /// Weighted measure of the set.
    pub fn measure(&self, weights: &[f64]) -> f64 {
        self.iter().map(|i| weights[i]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let mut a = IndexSet::from_members(130, [0, 63, 64, 129]);
        let b = IndexSet::from_members(130, [63, 70]);
        assert!(a.intersects(&b));
        assert!(!b.is_subset(&a));
        a.union_with(&b);
        assert!(b.is_subset(&a));
        assert_eq!(a.len(), 5);
        a.subtract(&b);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        let c = a.complement();
        assert_eq!(c.len(), 127);
        assert!(!c.contains(64));
        assert!(c.contains(1));
    }
}
