//! Chinese-remainder machinery linking the constituent registers of a
//! generator to the combined stream, in both time and frequency.
//!
//! With pairwise-coprime constituent periods `n_1 .. n_r` and `N = prod n_i`:
//!
//! * shifting register `i` by `k_i` shifts the combined stream by
//!   `CRT(k_1, .., k_r)`;
//! * the product stream's spectrum is non-zero exactly at `CRT(k_1, .., k_r)`
//!   with every `k_i` in the support of register `i`'s spectrum;
//! * at such an index the value is `γ^d` with `d = CRT(d_1, .., d_r)`, where
//!   `d_i` is the exponent of the constituent component. This holds when each
//!   `γ^(e_i)` (with `e_i` the CRT idempotent of slot `i`) is a root of the
//!   minimal polynomial of the constituent base, which is checked.
//!
//! Elements of different fields are never multiplied together; every
//! cross-field relation is carried by exponents only.

use itertools::Itertools;

use crate::combiner::AnfFunction;
use crate::error::{Error, Result};
use crate::galois::{Field, FieldElt};
use crate::ntheory;
use crate::spectra::Spectrum;

/// Pairwise-coprime moduli and their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSystem {
    moduli: Vec<u64>,
    product: u64,
}

impl ResidueSystem {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidModuli("no moduli".into()));
        }
        if moduli.contains(&0) {
            return Err(Error::InvalidModuli("zero modulus".into()));
        }
        for (i, &a) in moduli.iter().enumerate() {
            for &b in &moduli[i + 1..] {
                if ntheory::gcd(a, b) != 1 {
                    return Err(Error::ModuliNotCoprime(a, b));
                }
            }
        }
        let product = moduli
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| Error::InvalidModuli("product overflows u64".into()))?;
        Ok(Self { moduli, product })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// `N = prod n_i` (equal to the lcm, the moduli being coprime).
    pub fn product(&self) -> u64 {
        self.product
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.moduli.len() {
            return Err(Error::ResidueCount { expected: self.moduli.len(), got });
        }
        Ok(())
    }

    /// The unique `x` in `[0, N)` with `x = r_i (mod n_i)`. Residues may be
    /// negative or out of range; they are normalized first.
    pub fn solve(&self, residues: &[i64]) -> Result<u64> {
        self.check_len(residues.len())?;
        let mut x = 0u64;
        let mut m = 1u64;
        for (&r, &n) in residues.iter().zip(&self.moduli) {
            let r = ntheory::normalize(r, n);
            // x + m*t = r (mod n)
            let inv = ntheory::mod_inverse(m % n, n).expect("coprime moduli");
            let diff = (r as i128 - x as i128).rem_euclid(n as i128) as u128;
            let t = (diff * inv as u128 % n as u128) as u64;
            x += m * t;
            m *= n;
        }
        Ok(x)
    }

    pub fn solve_unsigned(&self, residues: &[u64]) -> Result<u64> {
        self.check_len(residues.len())?;
        let mut x = 0u64;
        let mut m = 1u64;
        for (&r, &n) in residues.iter().zip(&self.moduli) {
            let r = r % n;
            let inv = ntheory::mod_inverse(m % n, n).expect("coprime moduli");
            let diff = (r as i128 - x as i128).rem_euclid(n as i128) as u128;
            x += m * (diff * inv as u128 % n as u128) as u64;
            m *= n;
        }
        Ok(x)
    }

    /// `(x mod n_1, .., x mod n_r)`.
    pub fn decompose(&self, x: u64) -> Vec<u64> {
        self.moduli.iter().map(|&n| x % n).collect()
    }

    /// The idempotent `e_i`: 1 modulo `n_i`, 0 modulo every other modulus.
    pub fn idempotent(&self, i: usize) -> u64 {
        let unit: Vec<u64> = (0..self.len()).map(|j| (j == i) as u64).collect();
        self.solve_unsigned(&unit).expect("matching length")
    }
}

pub fn crt_solve(residues: &[i64], sys: &ResidueSystem) -> Result<u64> {
    sys.solve(residues)
}

/// How many times each constituent period repeats inside one combined
/// period: `N / n_i`.
pub fn repetition_counts(sys: &ResidueSystem) -> Vec<u64> {
    sys.moduli.iter().map(|&n| sys.product / n).collect()
}

/// Combined left shift produced by shifting register `i` by `shifts[i]`.
pub fn compose_shift(shifts: &[i64], sys: &ResidueSystem) -> Result<u64> {
    sys.solve(shifts)
}

/// Predicted support of the product spectrum.
pub fn map_support(supports: &[Vec<usize>], sys: &ResidueSystem) -> Result<Vec<usize>> {
    sys.check_len(supports.len())?;
    let mut out: Vec<usize> = supports
        .iter()
        .multi_cartesian_product()
        .map(|ks| {
            let rs: Vec<u64> = ks.into_iter().map(|&k| k as u64).collect();
            sys.solve_unsigned(&rs).map(|x| x as usize)
        })
        .collect::<Result<_>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Exponent of the product component from the constituent exponents.
pub fn map_degree(degrees: &[u64], sys: &ResidueSystem) -> Result<u64> {
    sys.solve_unsigned(degrees)
}

/// Constituent exponents recovered from a product exponent.
pub fn decompose_degree(d: u64, sys: &ResidueSystem) -> Vec<u64> {
    sys.decompose(d)
}

fn system_of(constituents: &[Spectrum]) -> Result<ResidueSystem> {
    ResidueSystem::new(constituents.iter().map(|s| s.len() as u64).collect())
}

/// Checks that `target^(e_i)` is a root of the minimal polynomial of each
/// constituent base, so that exponents line up across fields.
pub(crate) fn check_target(constituents: &[Spectrum], sys: &ResidueSystem, target: &FieldElt) -> Result<()> {
    let order = target.order()?;
    if order != sys.product() {
        return Err(Error::BaseOrderMismatch { order, period: sys.product() });
    }
    for (i, spec) in constituents.iter().enumerate() {
        let rho = target.pow_u(sys.idempotent(i));
        let mp = spec.base().minimal_polynomial();
        if !target.field().eval(&mp, &rho)?.is_zero() {
            return Err(Error::IncompatibleBase(i));
        }
    }
    Ok(())
}

/// First power `g^j` (`j` coprime to `N`, ascending) of the field's
/// canonical order-`N` element that is a compatible target for the
/// constituents. `field` defaults to GF(2^ord_N(2)) on the smallest
/// irreducible of that degree.
pub fn compatible_target(constituents: &[Spectrum], field: Option<&Field>) -> Result<FieldElt> {
    let sys = system_of(constituents)?;
    let n = sys.product();
    let field = match field {
        Some(f) => f.clone(),
        None => {
            let m = ntheory::order_of_two(n).ok_or(Error::TwoNotInvertible(n))? as usize;
            Field::new(crate::galois::find_irreducible(m)?)?
        }
    };
    let g = field.order_n_element(n)?;
    let mut last = Error::IncompatibleBase(0);
    for j in (1..n.max(2)).filter(|&j| ntheory::gcd(j, n) == 1) {
        let candidate = g.pow_u(j);
        match check_target(constituents, &sys, &candidate) {
            Ok(()) => return Ok(candidate),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Spectrum of the product of the constituents' sequences, assembled from
/// the constituent spectra alone.
///
/// Equals `dft(product_sequence, target)` whenever the target base is
/// compatible with the constituent bases (see the module docs).
pub fn predict_spectrum(constituents: &[Spectrum], target: &FieldElt) -> Result<Spectrum> {
    let full = AnfFunction::product(constituents.len())?;
    predict_combiner_spectrum(constituents, &full, target)
}

/// Spectrum of `f(a^1_t, .., a^r_t)` for a combining function in ANF.
///
/// Each monomial `prod_{i ∈ M} a^i_t` contributes, at every index `k` with
/// `k mod n_j = 0` for the registers `j ∉ M`, the value
/// `γ^CRT(d_i for i ∈ M, 0 otherwise)`. Monomials are summed in the target
/// field; the constant monomial contributes 1 at `k = 0`.
pub fn predict_combiner_spectrum(constituents: &[Spectrum], f: &AnfFunction, target: &FieldElt) -> Result<Spectrum> {
    if f.arity() != constituents.len() {
        return Err(Error::ArityMismatch { expected: f.arity(), got: constituents.len() });
    }
    let sys = system_of(constituents)?;
    check_target(constituents, &sys, target)?;
    let field = target.field();
    let n = sys.product() as usize;

    // (index, exponent) pairs of every constituent's non-zero components
    let terms: Vec<Vec<(u64, u64)>> = constituents
        .iter()
        .map(|s| s.exponents().map(|v| v.into_iter().map(|(k, d)| (k as u64, d)).collect()))
        .collect::<Result<_>>()?;

    let mut values = vec![0u64; n];
    for mask in f.monomials() {
        let choices: Vec<Vec<(u64, u64)>> = (0..constituents.len())
            .map(|i| if (mask >> i) & 1 == 1 { terms[i].clone() } else { vec![(0, 0)] })
            .collect();
        for combo in choices.iter().multi_cartesian_product() {
            let ks: Vec<u64> = combo.iter().map(|t| t.0).collect();
            let ds: Vec<u64> = combo.iter().map(|t| t.1).collect();
            let k = sys.solve_unsigned(&ks)? as usize;
            let d = sys.solve_unsigned(&ds)?;
            values[k] ^= field.pow_raw(target.repr(), d);
        }
    }
    Spectrum::from_raw(target.clone(), values)
}
