//! Dense vertex subsets (bit sets over vertex ids).

/// A subset of the vertices of one graph, as a bit vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSubset {
    n: u64,
    words: Vec<u64>,
    size: u64,
}

impl VertexSubset {
    pub fn empty(n: u64) -> Self {
        VertexSubset {
            n,
            words: vec![0; n.div_ceil(64) as usize],
            size: 0,
        }
    }

    pub fn from_members(n: u64, members: &[u64]) -> Self {
        let mut s = Self::empty(n);
        for &v in members {
            s.insert(v);
        }
        s
    }

    /// Number of vertices of the underlying graph.
    pub fn universe(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        debug_assert!(v < self.n);
        (self.words[(v / 64) as usize] >> (v % 64)) & 1 == 1
    }

    pub fn insert(&mut self, v: u64) -> bool {
        assert!(v < self.n, "vertex {v} out of range {}", self.n);
        let w = &mut self.words[(v / 64) as usize];
        let bit = 1u64 << (v % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.size += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, v: u64) -> bool {
        assert!(v < self.n, "vertex {v} out of range {}", self.n);
        let w = &mut self.words[(v / 64) as usize];
        let bit = 1u64 << (v % 64);
        if *w & bit != 0 {
            *w &= !bit;
            self.size -= 1;
            true
        } else {
            false
        }
    }

    /// Members in ascending order.
    pub fn members(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.size as usize);
        for (wi, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                out.push(wi as u64 * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Complement within the universe.
    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.n % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        VertexSubset {
            n: self.n,
            words,
            size: self.n - self.size,
        }
    }
}
