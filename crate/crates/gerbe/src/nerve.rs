//! Abstract Čech nerve of a finite cover: increasing index tuples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverNerve {
    indices: Vec<usize>,
    /// Non-empty overlaps of every size ≥ 2, each strictly increasing.
    simplices: Vec<Vec<usize>>,
}

fn sub_tuples(s: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..s.len()).map(move |k| {
        let mut t = s.to_vec();
        t.remove(k);
        t
    })
}

impl CoverNerve {
    /// All overlaps up to quadruples among `n` opens.
    pub fn full(n: usize) -> CoverNerve {
        let indices: Vec<usize> = (0..n).collect();
        let mut simplices = Vec::new();
        for size in 2..=4 {
            combinations(&indices, size, &mut Vec::new(), 0, &mut simplices);
        }
        CoverNerve { indices, simplices }
    }

    pub fn empty() -> CoverNerve {
        CoverNerve {
            indices: Vec::new(),
            simplices: Vec::new(),
        }
    }

    pub fn new(indices: Vec<usize>, mut simplices: Vec<Vec<usize>>) -> Result<CoverNerve> {
        let mut idx = indices.clone();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != indices.len() {
            return Err(Error::Shape("repeated open index".into()));
        }
        for s in &simplices {
            if s.len() < 2 || s.len() > 4 || s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Shape(format!("overlap {s:?} must be increasing of size 2..4")));
            }
            if s.iter().any(|i| idx.binary_search(i).is_err()) {
                return Err(Error::Shape(format!("overlap {s:?} uses an unknown index")));
            }
        }
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        simplices.dedup();
        for s in simplices.iter().filter(|s| s.len() > 2) {
            for t in sub_tuples(s) {
                if simplices.binary_search_by(|u| u.len().cmp(&t.len()).then(u.as_slice().cmp(&t))).is_err() {
                    return Err(Error::Shape(format!("overlap {s:?} is missing its face {t:?}")));
                }
            }
        }
        Ok(CoverNerve { indices: idx, simplices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn of_size(&self, size: usize) -> impl Iterator<Item = &[usize]> {
        self.simplices.iter().filter(move |s| s.len() == size).map(|s| s.as_slice())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.of_size(2).map(|s| (s[0], s[1]))
    }

    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.of_size(3).map(|s| (s[0], s[1], s[2]))
    }

    pub fn quadruples(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        self.of_size(4).map(|s| (s[0], s[1], s[2], s[3]))
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

fn combinations(items: &[usize], size: usize, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        combinations(items, size, cur, i + 1, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_nerve_counts() {
        let n = CoverNerve::full(4);
        assert_eq!(n.pairs().count(), 6);
        assert_eq!(n.triples().count(), 4);
        assert_eq!(n.quadruples().count(), 1);
    }

    #[test]
    fn closure_is_enforced() {
        assert!(CoverNerve::new(vec![0, 1, 2], vec![vec![0, 1, 2], vec![0, 1]]).is_err());
        assert!(CoverNerve::new(vec![0, 1], vec![vec![1, 0]]).is_err());
        let ok = CoverNerve::new(vec![0, 1, 2], vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 1, 2]]).unwrap();
        assert_eq!(ok.triples().collect::<Vec<_>>(), vec![(0, 1, 2)]);
    }
}
