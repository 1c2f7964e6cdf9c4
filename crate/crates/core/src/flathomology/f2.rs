//! Dense linear algebra over 𝔽₂ on packed bit rows.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Rank over 𝔽₂ of the matrix whose rows are given; `width` is the row length.
pub fn rank(rows: impl IntoIterator<Item = BitRow>, width: usize) -> usize {
    let mut pivots: Vec<Option<BitRow>> = vec![None; width];
    let mut rank = 0;
    for mut row in rows {
        while let Some(c) = row.first_one() {
            match &pivots[c] {
                Some(p) => row.xor_assign(p),
                None => {
                    pivots[c] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}
