use crate::{Frame, FilterParams, MemadError, Result};

/// Pre-saturation filter response for one sample.
#[inline(always)]
pub fn response(current: f64, history_mean: f64, params: &FilterParams) -> f64 {
    params.beta * current + params.alpha * (current - history_mean)
}

/// Rounds to nearest (ties away from zero), then saturates to `0..=255`.
#[inline(always)]
pub fn quantize(value: f64) -> u8 {
    value.round().clamp(0.0, 255.0) as u8
}

/// Maps one intensity given the mean of its `m` predecessors.
pub fn map_pixel(current: u8, history_mean: f64, params: &FilterParams) -> u8 {
    quantize(response(current as f64, history_mean, params))
}

/// Per-stream filter memory: the last `m` frames and their running sums.
///
/// Single owner; `apply` mutates. All buffers are sized at construction so
/// [`FilterState::apply_into`] never allocates.
#[derive(Debug, Clone)]
pub struct FilterState {
    width: usize,
    height: usize,
    order: usize,
    // `order` slots of planar samples; `head` is the oldest slot.
    ring: Vec<u8>,
    head: usize,
    sums: Vec<u32>,
    // means[s] = s / order, for every reachable window sum s.
    means: Vec<f64>,
    frames_seen: u64,
}

impl FilterState {
    pub fn new(params: FilterParams, width: usize, height: usize) -> Result<Self> {
        params.validate()?;
        if width == 0 || height == 0 {
            return Err(MemadError::InvalidFrame(format!(
                "filter dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        let samples = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(3))
            .ok_or_else(|| MemadError::InvalidFrame("filter dimensions overflow".into()))?;
        let order = params.order;
        let means = (0..=255 * order)
            .map(|s| s as f64 / order as f64)
            .collect();
        Ok(Self {
            width,
            height,
            order,
            ring: vec![0; samples * order],
            head: 0,
            sums: vec![0; samples],
            means,
            frames_seen: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Ring capacity, i.e. the order `m` this state was built for.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn frames_seen(&self) -> u64 {
        self.frames_seen
    }

    /// True while the next output still averages over zero-initialised slots.
    pub fn is_warming_up(&self) -> bool {
        self.frames_seen < self.order as u64
    }

    /// Buffered frame `lag` steps back (1 = most recent), as planar samples.
    pub fn delayed(&self, lag: usize) -> Option<&[u8]> {
        if lag == 0 || lag > self.order {
            return None;
        }
        let len = self.sums.len();
        let slot = (self.head + self.order - lag) % self.order;
        Some(&self.ring[slot * len..(slot + 1) * len])
    }

    pub fn reset(&mut self) {
        self.ring.fill(0);
        self.sums.fill(0);
        self.head = 0;
        self.frames_seen = 0;
    }

    fn check(&self, frame: &Frame, params: &FilterParams) -> Result<()> {
        params.validate()?;
        if params.order != self.order {
            return Err(MemadError::OrderMismatch {
                capacity: self.order,
                order: params.order,
            });
        }
        if frame.width() != self.width || frame.height() != self.height {
            return Err(MemadError::DimensionMismatch {
                expected_width: self.width,
                expected_height: self.height,
                width: frame.width(),
                height: frame.height(),
            });
        }
        Ok(())
    }

    /// Filters `frame` and pushes it into the history.
    pub fn apply(&mut self, frame: &Frame, params: &FilterParams) -> Result<Frame> {
        self.check(frame, params)?;
        let mut out = Frame::from_planes(
            self.width,
            self.height,
            vec![0; self.sums.len()],
            frame.index(),
            frame.timestamp_us(),
        )?;
        self.run(frame, params, out.planes_mut());
        Ok(out)
    }

    /// Like [`apply`](Self::apply) but writes into an existing frame of the
    /// same dimensions, so a steady-state stream does no allocation.
    pub fn apply_into(&mut self, frame: &Frame, params: &FilterParams, out: &mut Frame) -> Result<()> {
        self.check(frame, params)?;
        if out.width() != self.width || out.height() != self.height {
            return Err(MemadError::DimensionMismatch {
                expected_width: self.width,
                expected_height: self.height,
                width: out.width(),
                height: out.height(),
            });
        }
        self.run(frame, params, out.planes_mut());
        out.set_timing(frame.index(), frame.timestamp_us());
        Ok(())
    }

    /// Unsaturated, unrounded variant of [`apply`](Self::apply). Advances the
    /// state exactly like `apply` does.
    pub fn apply_real(&mut self, frame: &Frame, params: &FilterParams) -> Result<Vec<f64>> {
        self.check(frame, params)?;
        let len = self.sums.len();
        let input = frame.planes();
        let out = (0..len)
            .map(|i| response(input[i] as f64, self.means[self.sums[i] as usize], params))
            .collect();
        self.push(input);
        Ok(out)
    }

    fn run(&mut self, frame: &Frame, params: &FilterParams, out: &mut [u8]) {
        let len = self.sums.len();
        let input = frame.planes();
        let slot = &mut self.ring[self.head * len..(self.head + 1) * len];
        let means = &self.means;
        for (((&cur, oldest), sum), dst) in input
            .iter()
            .zip(slot.iter_mut())
            .zip(self.sums.iter_mut())
            .zip(out.iter_mut())
        {
            *dst = quantize(response(cur as f64, means[*sum as usize], params));
            *sum = *sum - *oldest as u32 + cur as u32;
            *oldest = cur;
        }
        self.advance();
    }

    fn push(&mut self, input: &[u8]) {
        let len = self.sums.len();
        let slot = &mut self.ring[self.head * len..(self.head + 1) * len];
        for ((&cur, oldest), sum) in input.iter().zip(slot.iter_mut()).zip(self.sums.iter_mut()) {
            *sum = *sum - *oldest as u32 + cur as u32;
            *oldest = cur;
        }
        self.advance();
    }

    fn advance(&mut self) {
        self.head = (self.head + 1) % self.order;
        self.frames_seen += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Channel;

    fn params(alpha: f64, beta: f64, order: usize) -> FilterParams {
        FilterParams::new(alpha, beta, order).unwrap()
    }

    #[test]
    fn new_state_is_zeroed() {
        let s = FilterState::new(FilterParams::default(), 240, 320).unwrap();
        assert_eq!(s.order(), 5);
        assert_eq!(s.frames_seen(), 0);
        for lag in 1..=5 {
            assert!(s.delayed(lag).unwrap().iter().all(|&v| v == 0));
        }
        assert!(s.delayed(6).is_none());

        let s = FilterState::new(params(16.0, 1.0, 1), 1, 1).unwrap();
        assert_eq!(s.delayed(1).unwrap(), &[0, 0, 0]);
    }

    #[test]
    fn new_state_rejects_invalid_params() {
        let bad = FilterParams {
            alpha: -1.0,
            ..FilterParams::default()
        };
        assert!(matches!(
            FilterState::new(bad, 4, 4),
            Err(MemadError::InvalidParams(_))
        ));
        assert!(FilterState::new(FilterParams::default(), 0, 4).is_err());
    }

    #[test]
    fn map_pixel_examples() {
        assert_eq!(map_pixel(100, 100.0, &params(32.0, 1.0, 5)), 100);
        assert_eq!(map_pixel(10, 0.0, &params(16.0, 1.0, 5)), 170);
        // 100 + 32 * 10 = 420
        assert_eq!(map_pixel(100, 90.0, &params(32.0, 1.0, 5)), 255);
        // 50 - 320 = -270
        assert_eq!(map_pixel(100, 110.0, &params(32.0, 0.5, 5)), 0);
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(quantize(2.5), 3);
        assert_eq!(quantize(2.4999), 2);
        assert_eq!(quantize(-0.5), 0);
        assert_eq!(quantize(254.5), 255);
        assert_eq!(quantize(1e9), 255);
        // beta = 0.5 on an odd intensity lands exactly on a tie
        assert_eq!(map_pixel(5, 5.0, &params(16.0, 0.5, 5)), 3);
    }

    #[test]
    fn first_frame_warms_up_against_zeros() {
        let p = FilterParams::default();
        let mut s = FilterState::new(p, 3, 2).unwrap();
        assert!(s.is_warming_up());
        let f = Frame::filled(3, 2, [10, 10, 10], 4, 1234).unwrap();
        let out = s.apply(&f, &p).unwrap();
        assert!(out.planes().iter().all(|&v| v == 170));
        assert_eq!((out.index(), out.timestamp_us()), (4, 1234));
        assert_eq!(s.frames_seen(), 1);
        assert_eq!(s.delayed(1).unwrap(), f.planes());
    }

    #[test]
    fn constant_input_settles_to_dimmed_passthrough() {
        let p = params(32.0, 0.5, 5);
        let mut s = FilterState::new(p, 2, 2).unwrap();
        let f = Frame::filled(2, 2, [77, 200, 3], 0, 0).unwrap();
        for _ in 0..5 {
            s.apply(&f, &p).unwrap();
        }
        assert!(!s.is_warming_up());
        let out = s.apply(&f, &p).unwrap();
        // round(0.5 * 77) = 39, round(0.5 * 200) = 100, round(1.5) = 2
        assert!(out.plane(Channel::Red).iter().all(|&v| v == 39));
        assert!(out.plane(Channel::Green).iter().all(|&v| v == 100));
        assert!(out.plane(Channel::Blue).iter().all(|&v| v == 2));
    }

    #[test]
    fn identity_params_pass_frames_through() {
        let p = FilterParams::identity(5);
        let mut s = FilterState::new(p, 2, 1).unwrap();
        for t in 0..8u8 {
            let f = Frame::from_planes(2, 1, vec![t, 255 - t, 9, t * 3, 0, 255], t as u64, 0).unwrap();
            assert_eq!(s.apply(&f, &p).unwrap(), f);
        }
    }

    #[test]
    fn rejects_mismatched_frames_and_orders() {
        let p = FilterParams::default();
        let mut s = FilterState::new(p, 2, 2).unwrap();
        let f = Frame::filled(2, 3, [0; 3], 0, 0).unwrap();
        assert!(matches!(
            s.apply(&f, &p),
            Err(MemadError::DimensionMismatch { width: 2, height: 3, .. })
        ));
        let f = Frame::filled(2, 2, [0; 3], 0, 0).unwrap();
        assert!(matches!(
            s.apply(&f, &params(16.0, 1.0, 3)),
            Err(MemadError::OrderMismatch { capacity: 5, order: 3 })
        ));
        assert_eq!(s.frames_seen(), 0);
    }

    #[test]
    fn alpha_beta_change_midstream_keeps_history() {
        let p1 = params(16.0, 1.0, 3);
        let p2 = params(32.0, 0.5, 3);
        let mut s = FilterState::new(p1, 1, 1).unwrap();
        let a = Frame::filled(1, 1, [30, 30, 30], 0, 0).unwrap();
        s.apply(&a, &p1).unwrap();
        s.apply(&a, &p1).unwrap();
        s.apply(&a, &p1).unwrap();
        let b = Frame::filled(1, 1, [33, 33, 33], 0, 0).unwrap();
        // 16.5 + 32 * 3 = 112.5
        assert_eq!(s.apply(&b, &p2).unwrap().planes(), &[113, 113, 113]);
    }

    #[test]
    fn reset_matches_fresh_state() {
        let p = FilterParams::default();
        let f = Frame::filled(2, 2, [50, 60, 70], 0, 0).unwrap();
        let g = Frame::filled(2, 2, [52, 59, 90], 1, 0).unwrap();
        let mut s = FilterState::new(p, 2, 2).unwrap();
        s.apply(&f, &p).unwrap();
        s.apply(&f, &p).unwrap();
        s.reset();
        assert_eq!(s.frames_seen(), 0);
        let mut fresh = FilterState::new(p, 2, 2).unwrap();
        assert_eq!(s.apply(&g, &p).unwrap(), fresh.apply(&g, &p).unwrap());

        s.reset();
        let once = s.clone();
        s.reset();
        assert_eq!(s.ring, once.ring);
        assert_eq!(s.sums, once.sums);
        assert_eq!((s.head, s.frames_seen), (once.head, once.frames_seen));
    }

    #[test]
    fn apply_into_reuses_output() {
        let p = FilterParams::default();
        let mut a = FilterState::new(p, 4, 3).unwrap();
        let mut b = a.clone();
        let mut out = Frame::filled(4, 3, [0; 3], 0, 0).unwrap();
        for t in 0..10u8 {
            let f = Frame::filled(4, 3, [t * 7, t * 11, 200 - t], t as u64, t as u64 * 10).unwrap();
            a.apply_into(&f, &p, &mut out).unwrap();
            assert_eq!(out, b.apply(&f, &p).unwrap());
        }
        let wrong = Frame::filled(4, 3, [0; 3], 0, 0).unwrap();
        let mut small = Frame::filled(1, 1, [0; 3], 0, 0).unwrap();
        assert!(a.apply_into(&wrong, &p, &mut small).is_err());
    }

    #[test]
    fn apply_real_matches_quantized_apply() {
        let p = params(16.0, 1.0, 5);
        let mut a = FilterState::new(p, 2, 2).unwrap();
        let mut b = a.clone();
        for t in 0..9u8 {
            let f = Frame::filled(2, 2, [120 + t, 128, 140 - t], 0, 0).unwrap();
            let real = a.apply_real(&f, &p).unwrap();
            let q = b.apply(&f, &p).unwrap();
            let requantized: Vec<u8> = real.iter().map(|&v| quantize(v)).collect();
            assert_eq!(requantized, q.planes());
        }
    }
}
