//! Streaming per-pixel mean and variance (Welford), with Chan's merge.

use super::Frame;
use crate::error::{bail, Result};

/// Master mean and sum-of-squares frames of an image stack.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterFrames {
    pub count: u64,
    pub mean: Frame,
    pub m2: Frame,
}

impl MasterFrames {
    pub fn new(rows: usize, cols: usize) -> Self {
        MasterFrames { count: 0, mean: Frame::filled(rows, cols, 0.0), m2: Frame::filled(rows, cols, 0.0) }
    }

    /// Rebuilds masters from a mean and a sample-variance frame of `count` frames.
    pub fn from_variance(count: u64, mean: Frame, variance: Frame) -> Result<Self> {
        if mean.rows != variance.rows || mean.cols != variance.cols {
            bail!(Shape, "mean is {}×{}, variance is {}×{}", mean.rows, mean.cols, variance.rows, variance.cols);
        }
        let d = count.saturating_sub(1) as f64;
        let m2 = Frame { data: variance.data.iter().map(|v| v * d).collect(), ..variance };
        Ok(MasterFrames { count, mean, m2 })
    }

    fn check_shape(&self, f: &Frame) -> Result<()> {
        if f.rows != self.mean.rows || f.cols != self.mean.cols {
            bail!(Shape, "frame is {}×{}, masters are {}×{}", f.rows, f.cols, self.mean.rows, self.mean.cols);
        }
        Ok(())
    }

    /// Adds one frame.
    pub fn update(&mut self, frame: &Frame) -> Result<()> {
        self.check_shape(frame)?;
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &x) in self.mean.data.iter_mut().zip(self.m2.data.iter_mut()).zip(&frame.data) {
            let d = x - *m;
            *m += d / n;
            *s += d * (x - *m);
        }
        Ok(())
    }

    /// Combines the statistics of a disjoint stack.
    pub fn merge(&mut self, other: &MasterFrames) -> Result<()> {
        self.check_shape(&other.mean)?;
        if other.count == 0 {
            return Ok(());
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for (i, (m, s)) in self.mean.data.iter_mut().zip(self.m2.data.iter_mut()).enumerate() {
            let d = other.mean.data[i] - *m;
            *m += d * nb / n;
            *s += other.m2.data[i] + d * d * na * nb / n;
        }
        self.count += other.count;
        Ok(())
    }

    /// False until two frames are in; the variance is then reported as zero.
    pub fn variance_defined(&self) -> bool {
        self.count >= 2
    }

    /// Sample variance m2/(n−1), zero while fewer than two frames are in.
    pub fn variance(&self) -> Frame {
        let mut v = self.m2.clone();
        if self.count < 2 {
            v.data.iter_mut().for_each(|x| *x = 0.0);
        } else {
            let d = (self.count - 1) as f64;
            v.data.iter_mut().for_each(|x| *x /= d);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_frames(n: usize, seed: u64) -> Vec<Frame> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Frame { rows: 2, cols: 3, data: (0..6).map(|_| 1e3 + rng.random::<f64>() * 50.0).collect() })
            .collect()
    }

    fn two_pass(frames: &[Frame]) -> (Vec<f64>, Vec<f64>) {
        let n = frames.len() as f64;
        let p = frames[0].data.len();
        let mean: Vec<f64> = (0..p).map(|i| frames.iter().map(|f| f.data[i]).sum::<f64>() / n).collect();
        let var = (0..p).map(|i| frames.iter().map(|f| (f.data[i] - mean[i]).powi(2)).sum::<f64>() / (n - 1.0)).collect();
        (mean, var)
    }

    #[test]
    fn small_stream() {
        let mut mf = MasterFrames::new(1, 1);
        for x in [1.0, 2.0, 3.0] {
            mf.update(&Frame { rows: 1, cols: 1, data: vec![x] }).unwrap();
        }
        assert_eq!(mf.mean.data[0], 2.0);
        assert_eq!(mf.variance().data[0], 1.0);
    }

    #[test]
    fn single_frame_has_no_variance() {
        let mut mf = MasterFrames::new(2, 2);
        mf.update(&Frame::filled(2, 2, 5.0)).unwrap();
        assert_eq!(mf.m2.data, vec![0.0; 4]);
        assert!(!mf.variance_defined());
        assert_eq!(mf.variance().data, vec![0.0; 4]);
    }

    #[test]
    fn matches_two_pass() {
        let frames = random_frames(500, 3);
        let mut mf = MasterFrames::new(2, 3);
        frames.iter().for_each(|f| mf.update(f).unwrap());
        let (m, v) = two_pass(&frames);
        for i in 0..6 {
            assert!((mf.mean.data[i] - m[i]).abs() <= 1e-10 * m[i].abs());
            assert!((mf.variance().data[i] - v[i]).abs() <= 1e-10 * v[i]);
        }
    }

    #[test]
    fn order_and_merge_invariance() {
        let frames = random_frames(200, 9);
        let mut fwd = MasterFrames::new(2, 3);
        frames.iter().for_each(|f| fwd.update(f).unwrap());
        let mut rev = MasterFrames::new(2, 3);
        frames.iter().rev().for_each(|f| rev.update(f).unwrap());
        let mut a = MasterFrames::new(2, 3);
        let mut b = MasterFrames::new(2, 3);
        frames[..77].iter().for_each(|f| a.update(f).unwrap());
        frames[77..].iter().for_each(|f| b.update(f).unwrap());
        a.merge(&b).unwrap();
        for other in [&rev, &a] {
            assert_eq!(other.count, fwd.count);
            for i in 0..6 {
                assert!((other.mean.data[i] - fwd.mean.data[i]).abs() <= 1e-10 * fwd.mean.data[i].abs());
                assert!((other.m2.data[i] - fwd.m2.data[i]).abs() <= 1e-10 * fwd.m2.data[i]);
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let mut mf = MasterFrames::new(2, 2);
        assert!(matches!(mf.update(&Frame::filled(2, 3, 0.0)), Err(crate::Error::Shape(_))));
    }

    #[test]
    fn rebuilt_from_variance() {
        let frames = random_frames(50, 4);
        let mut mf = MasterFrames::new(2, 3);
        frames.iter().for_each(|f| mf.update(f).unwrap());
        let back = MasterFrames::from_variance(mf.count, mf.mean.clone(), mf.variance()).unwrap();
        for i in 0..6 {
            assert!((back.variance().data[i] - mf.variance().data[i]).abs() <= 1e-12 * mf.variance().data[i]);
        }
        assert!(MasterFrames::from_variance(3, Frame::filled(1, 2, 0.0), Frame::filled(2, 1, 0.0)).is_err());
    }
}
