//! LFSR generation, periodic binary sequences, Berlekamp–Massey and the
//! trace form of m-sequences.
//!
//! Registers step in Fibonacci form. For a feedback polynomial
//! `f(x) = x^m + sum c_i x^i` the stream obeys `s_{t+m} = sum_{c_i=1} s_{t+i}`
//! and the state `(s_t, ..., s_{t+m-1})` is output from the left. The
//! canonical fill is the impulse `0...01`.

use std::fmt;

use crate::error::{Error, Result};
use crate::galois::{BinaryPoly, FieldElt};
use crate::ntheory;

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Invalid(format!("'{c}' is not a bit"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// A binary LFSR: feedback polynomial plus initial fill `s_0 .. s_{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LfsrConfig {
    feedback: BinaryPoly,
    init: Vec<bool>,
    taps: u64,
}

impl LfsrConfig {
    pub fn new(feedback: BinaryPoly, init: Vec<bool>) -> Result<Self> {
        let m = match feedback.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::InvalidLfsr("feedback polynomial must have degree >= 1".into())),
        };
        if m > 64 {
            return Err(Error::InvalidLfsr(format!("degree {m} exceeds 64")));
        }
        if !feedback.coeff(0) {
            return Err(Error::InvalidLfsr("feedback polynomial needs a non-zero constant term".into()));
        }
        if init.len() != m {
            return Err(Error::InvalidLfsr(format!("fill has {} bits, degree is {m}", init.len())));
        }
        if init.iter().all(|b| !b) {
            return Err(Error::InvalidLfsr("all-zero fill".into()));
        }
        let taps = (0..m).filter(|&i| feedback.coeff(i)).fold(0u64, |acc, i| acc | 1 << i);
        Ok(Self { feedback, init, taps })
    }

    /// Register seeded with the impulse fill `0...01`.
    pub fn impulse(feedback: BinaryPoly) -> Result<Self> {
        let m = feedback.degree().unwrap_or(0);
        let mut init = vec![false; m];
        if let Some(last) = init.last_mut() {
            *last = true;
        }
        Self::new(feedback, init)
    }

    pub fn feedback(&self) -> &BinaryPoly {
        &self.feedback
    }

    pub fn init(&self) -> &[bool] {
        &self.init
    }

    pub fn degree(&self) -> usize {
        self.init.len()
    }

    fn packed_init(&self) -> u64 {
        self.init.iter().enumerate().filter(|(_, b)| **b).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    fn step(&self, state: u64) -> u64 {
        let m = self.degree() as u32;
        let fresh = ((state & self.taps).count_ones() & 1) as u64;
        (state >> 1) | fresh << (m - 1)
    }

    fn unpack(&self, state: u64) -> Vec<bool> {
        (0..self.degree()).map(|i| (state >> i) & 1 == 1).collect()
    }

    /// The first `count` output bits.
    pub fn generate(&self, count: usize) -> Vec<bool> {
        let mut state = self.packed_init();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(state & 1 == 1);
            state = self.step(state);
        }
        out
    }

    /// The register advanced by `steps` clocks.
    pub fn advanced(&self, steps: u64) -> Self {
        let mut state = self.packed_init();
        for _ in 0..steps {
            state = self.step(state);
        }
        Self { feedback: self.feedback.clone(), init: self.unpack(state), taps: self.taps }
    }

    /// Least period of the output, searched up to `limit` steps.
    pub fn period(&self, limit: u64) -> Result<u64> {
        let start = self.packed_init();
        let mut state = self.step(start);
        let mut n = 1u64;
        while state != start {
            if n >= limit {
                return Err(Error::PeriodLimit(limit));
            }
            state = self.step(state);
            n += 1;
        }
        Ok(n)
    }
}

/// First `count` bits of an LFSR.
pub fn lfsr_generate(cfg: &LfsrConfig, count: usize) -> Vec<bool> {
    cfg.generate(count)
}

/// The fill whose stream is the canonical (impulse-seeded) stream of
/// `feedback` shifted left by `shift`.
pub fn state_at_shift(feedback: &BinaryPoly, shift: u64) -> Result<Vec<bool>> {
    Ok(LfsrConfig::impulse(feedback.clone())?.advanced(shift).init)
}

/// A binary sequence stored as exactly one period.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSequence {
    bits: Vec<bool>,
}

impl fmt::Debug for PeriodicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicSequence({})", bits_to_string(&self.bits))
    }
}

impl fmt::Display for PeriodicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.bits))
    }
}

impl PeriodicSequence {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![false; n])
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    /// Bit at `t mod n`.
    pub fn get(&self, t: i64) -> bool {
        self.bits[ntheory::normalize(t, self.bits.len() as u64) as usize]
    }

    /// `count` bits starting at offset `start`, wrapping around the period.
    pub fn window(&self, start: usize, count: usize) -> Vec<bool> {
        (0..count).map(|i| self.bits[(start + i) % self.bits.len()]).collect()
    }

    /// Left shift: `u_t = s_{t + shift}`.
    pub fn shift(&self, shift: i64) -> Self {
        let n = self.bits.len();
        let s = ntheory::normalize(shift, n as u64) as usize;
        let mut bits = Vec::with_capacity(n);
        bits.extend_from_slice(&self.bits[s..]);
        bits.extend_from_slice(&self.bits[..s]);
        Self { bits }
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Every offset `i` at which the cyclic stream matches `window`.
    pub fn locate(&self, window: &[bool]) -> Vec<usize> {
        if window.is_empty() {
            return Vec::new();
        }
        let n = self.bits.len();
        (0..n).filter(|&i| window.iter().enumerate().all(|(j, &b)| self.bits[(i + j) % n] == b)).collect()
    }

    /// Least period of the stored bits (a divisor of the stored length).
    pub fn least_period(&self) -> usize {
        let n = self.bits.len();
        let mut divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        divisors.into_iter().find(|&d| (0..n).all(|t| self.bits[t] == self.bits[(t + d) % n])).unwrap_or(n)
    }
}

pub fn cyclic_shift(seq: &PeriodicSequence, shift: i64) -> PeriodicSequence {
    seq.shift(shift)
}

pub fn locate_window(reference: &PeriodicSequence, window: &[bool]) -> Vec<usize> {
    reference.locate(window)
}

/// Result of Berlekamp–Massey.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPolynomial {
    /// Recurrence polynomial `m(x)` with `sum m_i s_{t+i} = 0`.
    pub poly: BinaryPoly,
    pub linear_complexity: usize,
}

/// Berlekamp–Massey over GF(2).
///
/// Internally tracks the connection polynomial `C(x)` (`c_0 = 1`) and returns
/// its reciprocal `x^L C(1/x)`, which is the polynomial that annihilates the
/// sequence in the forward direction.
pub fn min_poly_bm(bits: &[bool]) -> Result<MinimalPolynomial> {
    if bits.is_empty() {
        return Err(Error::EmptySequence);
    }
    let n = bits.len();
    let mut c = vec![false; n + 1];
    let mut b = vec![false; n + 1];
    c[0] = true;
    b[0] = true;
    let mut l = 0usize;
    let mut m = 1usize;
    for i in 0..n {
        let mut d = bits[i];
        for j in 1..=l {
            d ^= c[j] & bits[i - j];
        }
        if !d {
            m += 1;
            continue;
        }
        let prev = c.clone();
        for j in 0..=n - m {
            c[j + m] ^= b[j];
        }
        if 2 * l <= i {
            l = i + 1 - l;
            b = prev;
            m = 1;
        } else {
            m += 1;
        }
    }
    let connection = BinaryPoly::from_bits(&c[..=l]);
    Ok(MinimalPolynomial { poly: connection.reciprocal(l), linear_complexity: l })
}

/// `count` bits of `Tr(beta * alpha^t)`.
pub fn trace_sequence(beta: &FieldElt, alpha: &FieldElt, count: usize) -> Result<Vec<bool>> {
    let field = beta.field();
    if alpha.field() != field {
        return Err(Error::FieldMismatch);
    }
    let mut cur = beta.repr();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let t = field.trace_raw(cur);
        assert!(t <= 1, "trace value outside GF(2)");
        out.push(t == 1);
        cur = field.mul_raw(cur, alpha.repr());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn p(s: &str) -> BinaryPoly {
        s.parse().unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    fn lfsr(poly: &str, init: &str) -> LfsrConfig {
        LfsrConfig::new(p(poly), bits(init)).unwrap()
    }

    #[test]
    fn generate_examples() {
        assert_eq!(lfsr("2,1,0", "01").generate(3), bits("011"));
        assert_eq!(lfsr("3,1,0", "001").generate(7), bits("0010111"));
        assert_eq!(lfsr("5,2,0", "00001").generate(10), bits("0000100101"));
        assert_eq!(LfsrConfig::impulse(p("3,1,0")).unwrap().init(), &bits("001")[..]);
    }

    #[test]
    fn config_invariants() {
        assert!(LfsrConfig::new(p("3,1"), bits("001")).is_err());
        assert!(LfsrConfig::new(p("3,1,0"), bits("01")).is_err());
        assert!(LfsrConfig::new(p("3,1,0"), bits("000")).is_err());
        assert!(LfsrConfig::new(BinaryPoly::one(), vec![]).is_err());
    }

    #[test]
    fn bm_examples() {
        let a = lfsr("2,1,0", "01").generate(3);
        let b = lfsr("3,1,0", "001").generate(7);
        let s: Vec<bool> = (0..42).map(|t| a[t % 3] & b[t % 7]).collect();
        let mp = min_poly_bm(&s).unwrap();
        assert_eq!(mp.poly, p("6,4,2,1,0"));
        assert_eq!(mp.linear_complexity, 6);

        let mp = min_poly_bm(&bits("00101110010111")).unwrap();
        assert_eq!((mp.poly, mp.linear_complexity), (p("3,1,0"), 3));

        assert_eq!(min_poly_bm(&[]), Err(Error::EmptySequence));
        let zero = min_poly_bm(&[false; 8]).unwrap();
        assert_eq!((zero.poly, zero.linear_complexity), (BinaryPoly::one(), 0));
    }

    #[test]
    fn bm_recurrence_holds_on_generated_stream() {
        // impulse at the end: linear complexity equals the length
        let mut s = vec![false; 9];
        s.push(true);
        let mp = min_poly_bm(&s).unwrap();
        assert_eq!(mp.linear_complexity, 10);
        let l = mp.linear_complexity;
        for t in 0..s.len() - l {
            let v = (0..=l).filter(|&i| mp.poly.coeff(i)).fold(false, |acc, i| acc ^ s[t + i]);
            assert!(!v);
        }
    }

    #[test]
    fn shift_examples() {
        let b = PeriodicSequence::new(bits("0010111")).unwrap();
        assert_eq!(b.shift(0), b);
        assert_eq!(b.shift(1).bits(), &bits("0101110")[..]);
        assert_eq!(b.shift(-1), b.shift(6));

        let a = PeriodicSequence::new(bits("011")).unwrap();
        let prod = |a: &PeriodicSequence, b: &PeriodicSequence| {
            PeriodicSequence::new((0..21).map(|t| a.get(t) & b.get(t)).collect()).unwrap()
        };
        assert_eq!(prod(&a, &b).shift(7), prod(&a.shift(1), &b));
    }

    #[test]
    fn locate_examples() {
        let b = PeriodicSequence::new(bits("0010111")).unwrap();
        assert_eq!(b.locate(b.bits()), vec![0]);
        assert_eq!(b.locate(&bits("000")), Vec::<usize>::new());
        assert_eq!(b.locate(&bits("11")), vec![4, 5]);
        assert_eq!(b.locate(&[]), Vec::<usize>::new());
    }

    #[test]
    fn trace_examples() {
        let f3 = Field::new(p("3,1,0")).unwrap();
        let x = f3.x();
        let b = PeriodicSequence::new(bits("0010111")).unwrap();
        let rotations: HashSet<Vec<bool>> = (0..7).map(|i| b.shift(i).into_bits()).collect();
        let t = trace_sequence(&f3.one(), &x, 7).unwrap();
        assert!(rotations.contains(&t));

        let all: HashSet<Vec<bool>> = (1..8).map(|r| trace_sequence(&f3.elt(r).unwrap(), &x, 7).unwrap()).collect();
        assert_eq!(all, rotations);

        let f2 = Field::new(p("2,1,0")).unwrap();
        let a = PeriodicSequence::new(bits("011")).unwrap();
        let t2 = trace_sequence(&f2.one(), &f2.x(), 3).unwrap();
        assert!((0..3).any(|i| a.shift(i).bits() == &t2[..]));

        assert_eq!(trace_sequence(&f2.one(), &x, 3), Err(Error::FieldMismatch));
    }

    #[test]
    fn state_at_shift_examples() {
        assert_eq!(state_at_shift(&p("2,1,0"), 2).unwrap(), bits("10"));
        assert_eq!(state_at_shift(&p("3,1,0"), 0).unwrap(), bits("001"));
        assert_eq!(state_at_shift(&p("3,1,0"), 2).unwrap(), bits("101"));
        assert_eq!(state_at_shift(&p("5,2,0"), 12).unwrap(), bits("01111"));
        // cross-check against generation
        let canon = lfsr("5,2,0", "00001").generate(40);
        let st = state_at_shift(&p("5,2,0"), 12).unwrap();
        assert_eq!(LfsrConfig::new(p("5,2,0"), st).unwrap().generate(20), canon[12..32].to_vec());
    }

    #[test]
    fn maximal_periods() {
        for (poly, n) in [("2,1,0", 3), ("3,1,0", 7), ("5,2,0", 31), ("4,1,0", 15)] {
            assert_eq!(LfsrConfig::impulse(p(poly)).unwrap().period(1 << 20).unwrap(), n);
        }
        assert_eq!(LfsrConfig::impulse(p("5,2,0")).unwrap().period(10), Err(Error::PeriodLimit(10)));
        let s = PeriodicSequence::new(bits("011011")).unwrap();
        assert_eq!(s.least_period(), 3);
    }

    fn primitive() -> impl Strategy<Value = &'static str> {
        prop_oneof![Just("2,1,0"), Just("3,1,0"), Just("5,2,0"), Just("4,1,0")]
    }

    proptest! {
        #[test]
        fn any_nonzero_fill_has_full_period(poly in primitive(), fill in 1u64..32) {
            let f = p(poly);
            let m = f.degree().unwrap();
            let fill = fill & ((1 << m) - 1);
            prop_assume!(fill != 0);
            let init: Vec<bool> = (0..m).map(|i| (fill >> i) & 1 == 1).collect();
            let cfg = LfsrConfig::new(f.clone(), init).unwrap();
            prop_assert_eq!(cfg.period(1 << 20).unwrap(), (1u64 << m) - 1);
            let mp = min_poly_bm(&cfg.generate(2 * m)).unwrap();
            prop_assert_eq!(mp.poly, f);
        }

        #[test]
        fn shift_space_is_closed_under_xor(i in 0i64..31, j in 0i64..31) {
            let s = PeriodicSequence::new(LfsrConfig::impulse(p("5,2,0")).unwrap().generate(31)).unwrap();
            let sum: Vec<bool> = s.shift(i).bits().iter().zip(s.shift(j).bits()).map(|(a, b)| a ^ b).collect();
            if i == j {
                prop_assert!(sum.iter().all(|b| !b));
            } else {
                prop_assert!((0..31).any(|k| s.shift(k).bits() == &sum[..]));
            }
        }

        #[test]
        fn located_window_contains_origin(i in 0usize..31, len in 1usize..40) {
            let s = PeriodicSequence::new(LfsrConfig::impulse(p("5,2,0")).unwrap().generate(31)).unwrap();
            prop_assert!(s.locate(&s.window(i, len)).contains(&i));
        }

        #[test]
        fn shifts_compose(a in -50i64..50, b in -50i64..50) {
            let s = PeriodicSequence::new(bits("0010111")).unwrap();
            prop_assert_eq!(s.shift(a).shift(b), s.shift(a + b));
        }
    }
}
