//! Discrete Fourier transform of binary periodic sequences over GF(2^m).
//!
//! For a sequence of odd period `n` and a base `γ` of multiplicative order `n`,
//! the spectrum is `S_k = sum_t s_t γ^(tk)` and the inverse is
//! `s_t = sum_k S_k γ^(-tk)` (the usual `1/n` factor is 1 because `n` is odd).
//! Every value here is exact; there are no tolerances.

use std::fmt;

use crate::error::{Error, Result};
use crate::galois::{BinaryPoly, Field, FieldElt};
use crate::ntheory;
use crate::sequences::PeriodicSequence;

/// Spectrum of a binary sequence: `n` field values indexed by frequency.
#[derive(Clone, PartialEq, Eq)]
pub struct Spectrum {
    base: FieldElt,
    values: Vec<u64>,
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Spectrum")
            .field("n", &self.values.len())
            .field("modulus", &self.field().modulus().to_hex())
            .field("base", &self.base.repr())
            .field("support", &self.support())
            .finish()
    }
}

impl Spectrum {
    /// Wraps raw values, checking the length against the base order and the
    /// conjugacy relation `S_{2k} = S_k^2`.
    pub fn new(base: FieldElt, values: Vec<FieldElt>) -> Result<Self> {
        let field = base.field().clone();
        let raw = values
            .iter()
            .map(|v| if v.field() == &field { Ok(v.repr()) } else { Err(Error::FieldMismatch) })
            .collect::<Result<Vec<_>>>()?;
        Self::from_raw(base, raw)
    }

    pub(crate) fn from_raw(base: FieldElt, values: Vec<u64>) -> Result<Self> {
        let order = base.order()?;
        if values.len() as u64 != order {
            return Err(Error::SpectrumLength { len: values.len(), order });
        }
        let spec = Self { base, values };
        spec.check_conjugacy()?;
        Ok(spec)
    }

    fn check_conjugacy(&self) -> Result<()> {
        let n = self.values.len();
        let field = self.field();
        for k in 0..n {
            if self.values[(2 * k) % n] != field.mul_raw(self.values[k], self.values[k]) {
                return Err(Error::NotConjugate(k));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    pub fn base(&self) -> &FieldElt {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, k: usize) -> FieldElt {
        self.field().wrap(self.values[k])
    }

    pub fn values(&self) -> Vec<FieldElt> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }

    /// Indices of the non-zero components.
    pub fn support(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, v)| **v != 0).map(|(k, _)| k).collect()
    }

    /// `(k, d)` with `S_k = γ^d` for every non-zero component.
    pub fn exponents(&self) -> Result<Vec<(usize, u64)>> {
        self.support().into_iter().map(|k| Ok((k, self.field().dlog(&self.value(k), &self.base)?))).collect()
    }

    /// Exponent of `S_k` to the base, `None` for a zero component.
    pub fn exponent(&self, k: usize) -> Result<Option<u64>> {
        if self.values[k] == 0 {
            return Ok(None);
        }
        self.field().dlog(&self.value(k), &self.base).map(Some)
    }
}

fn check_base(seq: &PeriodicSequence, base: &FieldElt) -> Result<()> {
    let order = base.order()?;
    if order != seq.period() as u64 {
        return Err(Error::BaseOrderMismatch { order, period: seq.period() as u64 });
    }
    Ok(())
}

/// Horner evaluation of `s(x) = sum s_t x^t` at a raw field value.
fn eval_bits(field: &Field, bits: &[bool], at: u64) -> u64 {
    bits.iter().rev().fold(0u64, |acc, &b| field.mul_raw(acc, at) ^ b as u64)
}

/// One DFT component: `s(γ^k)`, which equals `dft(seq, γ)[k]`.
pub fn dft_point(seq: &PeriodicSequence, base: &FieldElt, k: usize) -> Result<FieldElt> {
    check_base(seq, base)?;
    let field = base.field();
    let at = field.pow_raw(base.repr(), (k % seq.period()) as u64);
    Ok(field.wrap(eval_bits(field, seq.bits(), at)))
}

/// Full DFT, computed as `n` independent polynomial evaluations.
pub fn dft(seq: &PeriodicSequence, base: &FieldElt) -> Result<Spectrum> {
    check_base(seq, base)?;
    let field = base.field();
    let n = seq.period();
    let mut values = Vec::with_capacity(n);
    let mut at = 1u64;
    for _ in 0..n {
        values.push(eval_bits(field, seq.bits(), at));
        at = field.mul_raw(at, base.repr());
    }
    Spectrum::from_raw(base.clone(), values)
}

/// Inverse DFT. Fails if any reconstructed value is not 0 or 1.
pub fn idft(spec: &Spectrum) -> Result<PeriodicSequence> {
    let field = spec.field();
    let n = spec.len();
    let inv = field.inv_raw(spec.base.repr()).expect("base is a unit");
    let mut at = 1u64;
    let mut bits = Vec::with_capacity(n);
    for t in 0..n {
        // S(γ^-t) by Horner over k
        let v = spec.values.iter().rev().fold(0u64, |acc, &s| field.mul_raw(acc, at) ^ s);
        if v > 1 {
            return Err(Error::NotBinaryConsistent(t));
        }
        bits.push(v == 1);
        at = field.mul_raw(at, inv);
    }
    PeriodicSequence::new(bits)
}

/// Time shift in the frequency domain: the spectrum of the left-shifted
/// sequence `s_{t+τ}` is `S'_k = γ^(-kτ) S_k`.
pub fn shift_spectrum(spec: &Spectrum, shift: i64) -> Spectrum {
    let field = spec.field();
    let n = spec.len() as u64;
    let tau = ntheory::normalize(shift, n);
    let step = field.pow_raw(spec.base.repr(), (n - tau) % n);
    let mut factor = 1u64;
    let mut values = Vec::with_capacity(spec.len());
    for &v in &spec.values {
        values.push(field.mul_raw(v, factor));
        factor = field.mul_raw(factor, step);
    }
    Spectrum { base: spec.base.clone(), values }
}

pub fn support(spec: &Spectrum) -> Vec<usize> {
    spec.support()
}

/// Partition of `0..n` into orbits under doubling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicCosets {
    n: usize,
    cosets: Vec<Vec<usize>>,
    owner: Vec<usize>,
}

impl CyclotomicCosets {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n.is_multiple_of(2) {
            return Err(Error::TwoNotInvertible(n as u64));
        }
        let mut owner = vec![usize::MAX; n];
        let mut cosets = Vec::new();
        for start in 0..n {
            if owner[start] != usize::MAX {
                continue;
            }
            let mut coset = Vec::new();
            let mut k = start;
            loop {
                owner[k] = cosets.len();
                coset.push(k);
                k = (2 * k) % n;
                if k == start {
                    break;
                }
            }
            coset.sort_unstable();
            cosets.push(coset);
        }
        Ok(Self { n, cosets, owner })
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    /// Cosets in order of their leaders.
    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    /// The coset leaders Γ(n), ascending.
    pub fn leaders(&self) -> Vec<usize> {
        self.cosets.iter().map(|c| c[0]).collect()
    }

    /// Sorted coset containing `k mod n`.
    pub fn coset_of(&self, k: usize) -> &[usize] {
        &self.cosets[self.owner[k % self.n]]
    }
}

pub fn cyclotomic_cosets(n: usize) -> Result<CyclotomicCosets> {
    CyclotomicCosets::new(n)
}

/// Rebuilds the sequence from coset leaders only:
/// `s_t = sum_{j ∈ Γ(n)} Tr_{m_j}(S_j γ^(-jt))` with `m_j` the coset size.
pub fn trace_reconstruct(spec: &Spectrum) -> Result<PeriodicSequence> {
    let field = spec.field();
    let n = spec.len();
    let cosets = CyclotomicCosets::new(n)?;
    let inv = field.inv_raw(spec.base.repr()).expect("base is a unit");
    let terms: Vec<(u64, u64, u32)> = cosets
        .cosets()
        .iter()
        .filter(|c| spec.values[c[0]] != 0)
        .map(|c| (spec.values[c[0]], field.pow_raw(inv, c[0] as u64), c.len() as u32))
        .collect();
    let mut powers: Vec<u64> = terms.iter().map(|t| t.0).collect();
    let mut bits = Vec::with_capacity(n);
    for t in 0..n {
        let mut v = 0u64;
        for (i, &(_, step, size)) in terms.iter().enumerate() {
            v ^= field.subtrace_raw(powers[i], size);
            powers[i] = field.mul_raw(powers[i], step);
        }
        if v > 1 {
            return Err(Error::NotBinaryConsistent(t));
        }
        bits.push(v == 1);
    }
    PeriodicSequence::new(bits)
}

/// Default DFT base for a sequence of period `n`.
///
/// When the sequence's minimal polynomial is irreducible and `x` has order
/// `n` modulo it, the base is `x` in that field; this is what gives the
/// familiar exponent labels. Otherwise the field is GF(2^m) with
/// `m = ord_n(2)` built on the smallest irreducible of that degree, and the
/// base comes from [`Field::order_n_element`].
pub fn default_base(n: usize, min_poly: Option<&BinaryPoly>) -> Result<FieldElt> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::TwoNotInvertible(n as u64));
    }
    if let Some(mp) = min_poly {
        if mp.degree().is_some_and(|d| (1..=64).contains(&d)) && mp.is_irreducible()? {
            let field = Field::new(mp.clone())?;
            let x = field.x();
            if x.order()? == n as u64 {
                return Ok(x);
            }
        }
    }
    let m = ntheory::order_of_two(n as u64).expect("n is odd") as usize;
    if m > 64 {
        return Err(Error::UnsupportedDegree(m));
    }
    let field = Field::new(crate::galois::find_irreducible(m)?)?;
    field.order_n_element(n as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{parse_bits, LfsrConfig};
    use proptest::prelude::*;

    fn p(s: &str) -> BinaryPoly {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> PeriodicSequence {
        PeriodicSequence::new(parse_bits(s).unwrap()).unwrap()
    }

    fn exps(spec: &Spectrum) -> Vec<Option<u64>> {
        (0..spec.len()).map(|k| spec.exponent(k).unwrap()).collect()
    }

    fn product21() -> PeriodicSequence {
        seq("001011000001010010011")
    }

    #[test]
    fn dft_examples() {
        let f2 = Field::new(p("2,1,0")).unwrap();
        let a = dft(&seq("011"), &f2.x()).unwrap();
        assert_eq!(a.values, vec![0, 1, 1]);

        let f3 = Field::new(p("3,1,0")).unwrap();
        let b = dft(&seq("0010111"), &f3.x()).unwrap();
        assert_eq!(exps(&b), vec![None, None, None, Some(4), None, Some(2), Some(1)]);

        let z = dft(&PeriodicSequence::zeros(7).unwrap(), &f3.x()).unwrap();
        assert!(z.support().is_empty());

        assert!(matches!(dft(&seq("011"), &f3.x()), Err(Error::BaseOrderMismatch { .. })));
    }

    #[test]
    fn idft_examples() {
        let f3 = Field::new(p("3,1,0")).unwrap();
        let b = dft(&seq("0010111"), &f3.x()).unwrap();
        assert_eq!(idft(&b).unwrap(), seq("0010111"));
        let zero = Spectrum::from_raw(f3.x(), vec![0; 7]).unwrap();
        assert_eq!(idft(&zero).unwrap(), PeriodicSequence::zeros(7).unwrap());
    }

    #[test]
    fn idft_rejects_non_binary_spectrum() {
        // S_0 = x is conjugate-consistent only if x^2 = x, so go through the
        // raw constructor to build a spectrum that is not binary.
        let f3 = Field::new(p("3,1,0")).unwrap();
        let bogus = Spectrum { base: f3.x(), values: vec![2, 0, 0, 0, 0, 0, 0] };
        assert_eq!(idft(&bogus), Err(Error::NotBinaryConsistent(0)));
        assert_eq!(Spectrum::from_raw(f3.x(), bogus.values.clone()), Err(Error::NotConjugate(0)));
        assert!(matches!(Spectrum::from_raw(f3.x(), vec![0; 3]), Err(Error::SpectrumLength { len: 3, order: 7 })));
    }

    #[test]
    fn dft_point_examples() {
        let f3 = Field::new(p("3,1,0")).unwrap();
        let b = seq("0010111");
        assert_eq!(dft_point(&b, &f3.x(), 3).unwrap(), f3.x().pow(4));
        assert_eq!(dft_point(&b, &f3.x(), 0).unwrap(), f3.zero());
        assert_eq!(dft_point(&seq("1010111"), &f3.x(), 0).unwrap(), f3.one());

        let f6 = Field::new(p("6,4,2,1,0")).unwrap();
        assert_eq!(dft_point(&product21(), &f6.x(), 5).unwrap(), f6.x().pow(9));
    }

    #[test]
    fn product_spectrum_example() {
        let f6 = Field::new(p("6,4,2,1,0")).unwrap();
        let s = dft(&product21(), &f6.x()).unwrap();
        assert_eq!(s.exponents().unwrap(), vec![(5, 9), (10, 18), (13, 15), (17, 18), (19, 9), (20, 15)]);
        assert_eq!(trace_reconstruct(&s).unwrap(), product21());
    }

    #[test]
    fn shift_spectrum_examples() {
        let f3 = Field::new(p("3,1,0")).unwrap();
        let b = dft(&seq("0010111"), &f3.x()).unwrap();
        assert_eq!(shift_spectrum(&b, 0), b);
        // u = 0101110 gives U_3 = β^3 + β^9 + β^12 + β^15 = β
        assert_eq!(shift_spectrum(&b, 1).value(3), f3.x());
        assert!(shift_spectrum(&b, -1).value(3).is_one());
        for tau in -7..14 {
            assert_eq!(shift_spectrum(&b, tau).support(), b.support());
        }
    }

    #[test]
    fn coset_examples() {
        let c = cyclotomic_cosets(21).unwrap();
        assert_eq!(c.coset_of(5), &[5, 10, 13, 17, 19, 20]);
        assert_eq!(c.coset_of(0), &[0]);
        assert_eq!(cyclotomic_cosets(7).unwrap().leaders(), vec![0, 1, 3]);
        assert_eq!(cyclotomic_cosets(1).unwrap().cosets(), &[vec![0]]);
        assert_eq!(cyclotomic_cosets(10), Err(Error::TwoNotInvertible(10)));
    }

    #[test]
    fn trace_reconstruct_examples() {
        let f3 = Field::new(p("3,1,0")).unwrap();
        let b = dft(&seq("0010111"), &f3.x()).unwrap();
        assert_eq!(trace_reconstruct(&b).unwrap(), seq("0010111"));
        let zero = Spectrum::from_raw(f3.x(), vec![0; 7]).unwrap();
        assert_eq!(trace_reconstruct(&zero).unwrap(), PeriodicSequence::zeros(7).unwrap());
    }

    #[test]
    fn support_examples() {
        let f3 = Field::new(p("3,1,0")).unwrap();
        assert_eq!(support(&dft(&seq("0010111"), &f3.x()).unwrap()), vec![3, 5, 6]);
    }

    #[test]
    fn zero_components_sit_on_root_coset() {
        // b has minimal polynomial x^3+x+1 with roots x, x^2, x^4: the DFT vanishes
        // exactly on the coset {1,2,4} and at k = 0 (zero parity)
        let f3 = Field::new(p("3,1,0")).unwrap();
        let b = dft(&seq("0010111"), &f3.x()).unwrap();
        let zeros: Vec<usize> = (0..7).filter(|k| b.value(*k).is_zero()).collect();
        assert_eq!(zeros, vec![0, 1, 2, 4]);
        let neg: Vec<usize> = {
            let mut v: Vec<usize> = [1usize, 2, 4].iter().map(|r| (7 - r) % 7).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(b.support(), neg);
    }

    #[test]
    fn default_base_selection() {
        let b = default_base(21, Some(&p("6,4,2,1,0"))).unwrap();
        assert_eq!(b.field().modulus(), &p("6,4,2,1,0"));
        assert_eq!(b, b.field().x());
        // all-zero sequence: minimal polynomial 1, falls back to GF(2^ord)
        let z = default_base(7, Some(&BinaryPoly::one())).unwrap();
        assert_eq!(z.order().unwrap(), 7);
        assert_eq!(z.field().degree(), 3);
        // reducible minimal polynomial
        let r = default_base(15, Some(&(&p("4,1,0") * &p("1,0")))).unwrap();
        assert_eq!(r.order().unwrap(), 15);
        assert!(default_base(6, None).is_err());
    }

    fn small_case() -> impl Strategy<Value = (&'static str, usize)> {
        prop_oneof![Just(("3,1,0", 7)), Just(("4,1,0", 15)), Just(("5,2,0", 31)), Just(("6,4,2,1,0", 21))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn round_trips_and_conjugacy((modulus, n) in small_case(), raw in any::<u64>()) {
            let field = Field::new(p(modulus)).unwrap();
            let base = field.order_n_element(n as u64).unwrap();
            let s = PeriodicSequence::new((0..n).map(|t| (raw >> (t % 64)) & 1 == 1).collect()).unwrap();
            let spec = dft(&s, &base).unwrap();
            for k in 0..n {
                prop_assert_eq!(spec.value((2 * k) % n), spec.value(k).square());
            }
            prop_assert_eq!(idft(&spec).unwrap(), s.clone());
            prop_assert_eq!(trace_reconstruct(&spec).unwrap(), s.clone());
            // support is a union of cosets
            let cosets = CyclotomicCosets::new(n).unwrap();
            for k in spec.support() {
                for &j in cosets.coset_of(k) {
                    prop_assert!(!spec.value(j).is_zero());
                }
            }
        }

        #[test]
        fn shift_theorem(tau in -40i64..40, fill in 1u64..31) {
            let init: Vec<bool> = (0..5).map(|i| (fill >> i) & 1 == 1).collect();
            let s = PeriodicSequence::new(LfsrConfig::new(p("5,2,0"), init).unwrap().generate(31)).unwrap();
            let base = Field::new(p("5,2,0")).unwrap().x();
            let spec = dft(&s, &base).unwrap();
            prop_assert_eq!(dft(&s.shift(tau), &base).unwrap(), shift_spectrum(&spec, tau));
            for k in [0usize, 1, 5, 17, 30] {
                prop_assert_eq!(dft_point(&s, &base, k).unwrap(), spec.value(k));
            }
        }
    }
}
