//! Combiner generators: several LFSRs whose outputs are merged by a Boolean
//! function in algebraic normal form.

use std::collections::BTreeSet;
use std::fmt;

use crate::crt::ResidueSystem;
use crate::error::{Error, Result};
use crate::sequences::{LfsrConfig, PeriodicSequence};

/// Default cap on full-period generation.
pub const DEFAULT_PERIOD_LIMIT: u64 = 1 << 20;

/// Boolean function as an XOR of AND-monomials. Each monomial is a bitmask
/// of variable indices; the empty mask is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnfFunction {
    arity: usize,
    monomials: BTreeSet<u64>,
}

impl AnfFunction {
    /// Builds a function from monomial masks. A mask listed twice cancels.
    pub fn new(arity: usize, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        if arity > 64 {
            return Err(Error::Invalid(format!("arity {arity} exceeds 64")));
        }
        let mut monomials = BTreeSet::new();
        for mask in masks {
            if arity < 64 && mask >> arity != 0 {
                return Err(Error::MonomialOutOfRange { mask, arity });
            }
            if !monomials.insert(mask) {
                monomials.remove(&mask);
            }
        }
        Ok(Self { arity, monomials })
    }

    /// `x_1 x_2 ... x_r`.
    pub fn product(arity: usize) -> Result<Self> {
        let mask = if arity == 64 { u64::MAX } else { (1u64 << arity) - 1 };
        Self::new(arity, [mask])
    }

    /// `x_1 x_2 + x_2 x_3 + x_3 x_1`.
    pub fn majority3() -> Self {
        Self::new(3, [0b011, 0b110, 0b101]).expect("valid masks")
    }

    /// Converts a truth table (entry `i` is `f` at the input whose bit `j` is
    /// variable `j`) with the binary Möbius transform.
    pub fn from_truth_table(arity: usize, table: &[bool]) -> Result<Self> {
        if arity > 20 || table.len() != 1 << arity {
            return Err(Error::Invalid(format!("truth table of {} entries for arity {arity}", table.len())));
        }
        let mut coeffs = table.to_vec();
        for j in 0..arity {
            for i in 0..coeffs.len() {
                if (i >> j) & 1 == 1 {
                    coeffs[i] ^= coeffs[i ^ (1 << j)];
                }
            }
        }
        let masks = coeffs.iter().enumerate().filter(|(_, c)| **c).map(|(i, _)| i as u64);
        Self::new(arity, masks)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn monomials(&self) -> impl Iterator<Item = u64> + '_ {
        self.monomials.iter().copied()
    }

    /// Whether the constant monomial is present (the output is complemented).
    pub fn has_constant(&self) -> bool {
        self.monomials.contains(&0)
    }

    pub fn eval(&self, inputs: &[bool]) -> Result<bool> {
        if inputs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: inputs.len() });
        }
        let packed = inputs.iter().enumerate().filter(|(_, b)| **b).fold(0u64, |acc, (i, _)| acc | 1 << i);
        Ok(self.eval_packed(packed))
    }

    fn eval_packed(&self, packed: u64) -> bool {
        self.monomials.iter().fold(false, |acc, &m| acc ^ (packed & m == m))
    }

    /// Comma-separated hex masks, e.g. `3,6,5` for the 3-input majority.
    pub fn to_mask_list(&self) -> String {
        self.monomials.iter().map(|m| format!("{m:X}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Debug for AnfFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnfFunction({self})")
    }
}

impl fmt::Display for AnfFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .monomials
            .iter()
            .map(|&m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    (0..self.arity).filter(|i| (m >> i) & 1 == 1).map(|i| format!("x{}", i + 1)).collect()
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

pub fn anf_eval(f: &AnfFunction, inputs: &[bool]) -> Result<bool> {
    f.eval(inputs)
}

/// Registers plus combining function. Constituent periods are pairwise
/// coprime, so the combined period is their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    lfsrs: Vec<LfsrConfig>,
    f: AnfFunction,
    system: ResidueSystem,
}

impl GeneratorSpec {
    pub fn new(lfsrs: Vec<LfsrConfig>, f: AnfFunction) -> Result<Self> {
        Self::with_period_limit(lfsrs, f, DEFAULT_PERIOD_LIMIT)
    }

    pub fn with_period_limit(lfsrs: Vec<LfsrConfig>, f: AnfFunction, limit: u64) -> Result<Self> {
        if lfsrs.is_empty() {
            return Err(Error::Invalid("generator needs at least one register".into()));
        }
        if f.arity() != lfsrs.len() {
            return Err(Error::ArityMismatch { expected: f.arity(), got: lfsrs.len() });
        }
        let periods = lfsrs.iter().map(|l| l.period(limit)).collect::<Result<Vec<_>>>()?;
        let system = ResidueSystem::new(periods)?;
        Ok(Self { lfsrs, f, system })
    }

    pub fn lfsrs(&self) -> &[LfsrConfig] {
        &self.lfsrs
    }

    pub fn function(&self) -> &AnfFunction {
        &self.f
    }

    pub fn periods(&self) -> &[u64] {
        self.system.moduli()
    }

    pub fn system(&self) -> &ResidueSystem {
        &self.system
    }

    /// Combined period `N = prod n_i`.
    pub fn period(&self) -> u64 {
        self.system.product()
    }

    /// Same registers and function, every fill replaced by the impulse.
    pub fn canonical(&self) -> Result<Self> {
        let lfsrs = self.lfsrs.iter().map(|l| LfsrConfig::impulse(l.feedback().clone())).collect::<Result<Vec<_>>>()?;
        Self::new(lfsrs, self.f.clone())
    }

    /// Replaces the fills.
    pub fn with_states(&self, states: &[Vec<bool>]) -> Result<Self> {
        if states.len() != self.lfsrs.len() {
            return Err(Error::ResidueCount { expected: self.lfsrs.len(), got: states.len() });
        }
        let lfsrs = self
            .lfsrs
            .iter()
            .zip(states)
            .map(|(l, s)| LfsrConfig::new(l.feedback().clone(), s.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lfsrs, self.f.clone())
    }

    /// Each register advanced by its own shift (taken modulo its period).
    pub fn shifted(&self, shifts: &[i64]) -> Result<Self> {
        if shifts.len() != self.lfsrs.len() {
            return Err(Error::ResidueCount { expected: self.lfsrs.len(), got: shifts.len() });
        }
        let lfsrs = self
            .lfsrs
            .iter()
            .zip(shifts)
            .zip(self.periods())
            .map(|((l, &s), &n)| l.advanced(crate::ntheory::normalize(s, n)))
            .collect();
        Ok(Self { lfsrs, f: self.f.clone(), system: self.system.clone() })
    }

    /// First `count` output bits.
    pub fn generate(&self, count: usize) -> Vec<bool> {
        let streams: Vec<Vec<bool>> =
            self.lfsrs.iter().zip(self.periods()).map(|(l, &n)| l.generate(n as usize)).collect();
        (0..count)
            .map(|t| {
                let packed =
                    streams.iter().enumerate().filter(|(_, s)| s[t % s.len()]).fold(0u64, |acc, (i, _)| acc | 1 << i);
                self.f.eval_packed(packed)
            })
            .collect()
    }

    /// One full combined period, refusing periods above `limit`.
    pub fn full_period(&self, limit: u64) -> Result<PeriodicSequence> {
        if self.period() > limit {
            return Err(Error::PeriodLimit(limit));
        }
        PeriodicSequence::new(self.generate(self.period() as usize))
    }

    /// One period of each constituent register.
    pub fn constituent_periods(&self) -> Vec<PeriodicSequence> {
        self.lfsrs
            .iter()
            .zip(self.periods())
            .map(|(l, &n)| PeriodicSequence::new(l.generate(n as usize)).expect("period >= 1"))
            .collect()
    }
}

/// Pointwise AND of the registers' streams.
pub fn product_sequence(lfsrs: &[LfsrConfig], count: usize) -> Vec<bool> {
    let streams: Vec<Vec<bool>> = lfsrs.iter().map(|l| l.generate(count)).collect();
    (0..count).map(|t| streams.iter().all(|s| s[t])).collect()
}

pub fn combiner_sequence(spec: &GeneratorSpec, count: usize) -> Vec<bool> {
    spec.generate(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::BinaryPoly;
    use crate::sequences::{bits_to_string, min_poly_bm};

    fn p(s: &str) -> BinaryPoly {
        s.parse().unwrap()
    }

    fn impulse(poly: &str) -> LfsrConfig {
        LfsrConfig::impulse(p(poly)).unwrap()
    }

    pub(crate) fn majority_spec() -> GeneratorSpec {
        GeneratorSpec::new(vec![impulse("2,1,0"), impulse("3,1,0"), impulse("5,2,0")], AnfFunction::majority3())
            .unwrap()
    }

    #[test]
    fn anf_eval_examples() {
        let f = AnfFunction::majority3();
        assert!(f.eval(&[true, true, false]).unwrap());
        assert!(!f.eval(&[false, false, false]).unwrap());
        assert!(f.eval(&[true, true, true]).unwrap());
        assert_eq!(f.eval(&[true]), Err(Error::ArityMismatch { expected: 3, got: 1 }));
        assert_eq!(f.to_mask_list(), "3,5,6");
        assert_eq!(f.to_string(), "x1x2 + x1x3 + x2x3");
    }

    #[test]
    fn anf_validation() {
        assert_eq!(AnfFunction::new(2, [4]), Err(Error::MonomialOutOfRange { mask: 4, arity: 2 }));
        let cancelled = AnfFunction::new(2, [3, 3]).unwrap();
        assert_eq!(cancelled.monomials().count(), 0);
        assert!(AnfFunction::new(2, [0, 1]).unwrap().has_constant());
    }

    #[test]
    fn truth_table_round_trip() {
        let f = AnfFunction::majority3();
        let table: Vec<bool> =
            (0..8u64).map(|i| f.eval(&(0..3).map(|j| (i >> j) & 1 == 1).collect::<Vec<_>>()).unwrap()).collect();
        assert_eq!(AnfFunction::from_truth_table(3, &table).unwrap(), f);
        let xor = AnfFunction::from_truth_table(2, &[false, true, true, false]).unwrap();
        assert_eq!(xor, AnfFunction::new(2, [1, 2]).unwrap());
    }

    #[test]
    fn product_examples() {
        let s = product_sequence(&[impulse("2,1,0"), impulse("3,1,0")], 21);
        assert_eq!(bits_to_string(&s), "001011000001010010011");
        let trio = GeneratorSpec::new(
            vec![impulse("2,1,0"), impulse("3,1,0"), impulse("5,2,0")],
            AnfFunction::product(3).unwrap(),
        )
        .unwrap();
        assert_eq!(trio.period(), 651);
        assert_eq!(trio.generate(651), product_sequence(trio.lfsrs(), 651));
    }

    #[test]
    fn majority_combiner_examples() {
        let spec = majority_spec();
        assert_eq!(bits_to_string(&spec.generate(16)), "0010110101110110");
        let z = spec.full_period(DEFAULT_PERIOD_LIMIT).unwrap();
        assert_eq!(z.least_period(), 651);
        let mut two = z.bits().to_vec();
        two.extend_from_slice(z.bits());
        let mp = min_poly_bm(&two).unwrap();
        assert_eq!(mp.linear_complexity, 31);
        assert_eq!(mp.poly, p("31,29,28,27,24,23,22,20,18,17,16,15,13,11,10,9,8,7,5,4,2,1,0"));
    }

    #[test]
    fn rejects_bad_generators() {
        let f = AnfFunction::product(2).unwrap();
        assert_eq!(
            GeneratorSpec::new(vec![impulse("2,1,0"), impulse("4,1,0")], f.clone()),
            Err(Error::ModuliNotCoprime(3, 15))
        );
        assert!(matches!(GeneratorSpec::new(vec![impulse("2,1,0")], f), Err(Error::ArityMismatch { .. })));
        assert_eq!(majority_spec().full_period(100), Err(Error::PeriodLimit(100)));
    }

    #[test]
    fn shifted_generators_follow_crt() {
        let spec = majority_spec();
        let reference = spec.full_period(DEFAULT_PERIOD_LIMIT).unwrap();
        let tau = spec.system().solve(&[1, 5, 19]).unwrap();
        let moved = spec.shifted(&[1, 5, 19]).unwrap().full_period(DEFAULT_PERIOD_LIMIT).unwrap();
        assert_eq!(moved, reference.shift(tau as i64));
    }
}
