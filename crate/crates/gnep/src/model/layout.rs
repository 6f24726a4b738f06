use crate::error::{GnepError, Result};
use std::ops::Range;

/// Partition of the joint strategy vector into contiguous player blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    n: usize,
}

impl BlockLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(GnepError::InvalidLayout("no players".into()));
        }
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(GnepError::InvalidLayout(format!("block {i} is empty")));
        }
        let mut offsets = Vec::with_capacity(dims.len());
        let mut n = 0;
        for &d in &dims {
            offsets.push(n);
            n += d;
        }
        Ok(Self { dims, offsets, n })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn players(&self) -> usize {
        self.dims.len()
    }

    pub fn range(&self, nu: usize) -> Result<Range<usize>> {
        self.check(nu)?;
        Ok(self.offsets[nu]..self.offsets[nu] + self.dims[nu])
    }

    pub fn block<'a>(&self, x: &'a [f64], nu: usize) -> Result<&'a [f64]> {
        self.check_len(x.len())?;
        Ok(&x[self.range(nu)?])
    }

    pub fn block_set(&self, x: &mut [f64], nu: usize, v: &[f64]) -> Result<()> {
        self.check_len(x.len())?;
        let r = self.range(nu)?;
        if v.len() != r.len() {
            return Err(GnepError::DimensionMismatch {
                expected: r.len(),
                got: v.len(),
            });
        }
        x[r].copy_from_slice(v);
        Ok(())
    }

    fn check(&self, nu: usize) -> Result<()> {
        if nu >= self.dims.len() {
            return Err(GnepError::PlayerOutOfRange {
                index: nu,
                players: self.dims.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(GnepError::DimensionMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn offsets_are_prefix_sums() {
        let l = BlockLayout::new(vec![3, 3]).unwrap();
        assert_eq!(l.offsets(), &[0, 3]);
        assert_eq!(l.n(), 6);
    }

    #[test]
    fn get_second_block() {
        let l = BlockLayout::new(vec![2, 1]).unwrap();
        assert_eq!(l.block(&[1.0, 2.0, 3.0], 1).unwrap(), &[3.0]);
    }

    #[test]
    fn out_of_range_player() {
        let l = BlockLayout::new(vec![2, 1]).unwrap();
        assert!(matches!(
            l.block(&[1.0, 2.0, 3.0], 2),
            Err(GnepError::PlayerOutOfRange { .. })
        ));
    }

    #[test]
    fn empty_block_rejected() {
        assert!(BlockLayout::new(vec![2, 0]).is_err());
        assert!(BlockLayout::new(vec![]).is_err());
    }

    proptest! {
        #[test]
        fn set_then_get_round_trips(dims in prop::collection::vec(1usize..5, 1..5), seed in any::<u64>()) {
            let l = BlockLayout::new(dims.clone()).unwrap();
            let mut x = vec![0.0; l.n()];
            for nu in 0..dims.len() {
                let v: Vec<f64> = (0..dims[nu]).map(|i| (seed.wrapping_add(i as u64) % 97) as f64 - nu as f64).collect();
                l.block_set(&mut x, nu, &v).unwrap();
                prop_assert_eq!(l.block(&x, nu).unwrap(), &v[..]);
            }
        }
    }
}
