//! Initial-state recovery for combiner generators.
//!
//! Two routes: locate a known keystream window inside the canonical
//! reference stream, or read register shifts off spectral components. Both
//! end by regenerating the generator from the recovered fills.

use std::fmt;

use crate::combiner::{GeneratorSpec, DEFAULT_PERIOD_LIMIT};
use crate::crt::check_target;
use crate::error::{Error, Result};
use crate::galois::{self, FieldElt};
use crate::ntheory;
use crate::sequences::{bits_to_string, state_at_shift, PeriodicSequence};
use crate::spectra::{default_base, dft, dft_point, Spectrum};

/// Extra bits beyond `ceil(log2 n)` below which a match is flagged as
/// possibly ambiguous.
pub const CONFIDENCE_MARGIN: usize = 4;

/// One recovered configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    /// Left shift of the observed stream relative to the canonical one.
    pub tau: u64,
    /// `tau mod n_i`.
    pub residues: Vec<u64>,
    /// Register fills that produce the observed stream.
    pub states: Vec<Vec<bool>>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryReport {
    pub tau: u64,
    pub residues: Vec<u64>,
    pub states: Vec<Vec<bool>>,
    pub verified: bool,
    /// Number of offsets consistent with the observation.
    pub ambiguity_count: usize,
    /// The window was shorter than `ceil(log2 n) + CONFIDENCE_MARGIN`.
    pub low_confidence: bool,
    /// Every consistent configuration, the reported one first.
    pub candidates: Vec<Recovery>,
}

impl RecoveryReport {
    fn from_candidates(candidates: Vec<Recovery>, low_confidence: bool) -> Self {
        let first = candidates[0].clone();
        Self {
            tau: first.tau,
            residues: first.residues,
            states: first.states,
            verified: first.verified,
            ambiguity_count: candidates.len(),
            low_confidence,
            candidates,
        }
    }
}

impl fmt::Display for RecoveryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        writeln!(f, "tau={}", self.tau)?;
        writeln!(f, "residues={}", join(self.residues.iter().map(u64::to_string).collect()))?;
        writeln!(f, "states={}", join(self.states.iter().map(|s| bits_to_string(s)).collect()))?;
        writeln!(f, "verified={}", self.verified)?;
        writeln!(f, "ambiguity_count={}", self.ambiguity_count)?;
        write!(f, "low_confidence={}", self.low_confidence)
    }
}

/// Smallest accepted window for period `n`: `ceil(log2 n)`.
pub fn min_window(n: u64) -> usize {
    (64 - n.saturating_sub(1).leading_zeros()) as usize
}

fn states_for(spec: &GeneratorSpec, residues: &[u64]) -> Result<Vec<Vec<bool>>> {
    spec.lfsrs().iter().zip(residues).map(|(l, &r)| state_at_shift(l.feedback(), r)).collect()
}

/// Locates `window` in one period of the canonical stream of `spec`, turns
/// each match into register fills and checks them by regeneration.
pub fn time_domain_recover(spec: &GeneratorSpec, window: &[bool], period_limit: u64) -> Result<RecoveryReport> {
    let canonical = spec.canonical()?;
    let n = canonical.period();
    let min = min_window(n);
    if window.len() < min {
        return Err(Error::WindowTooShort { len: window.len(), min, period: n });
    }
    let reference = canonical.full_period(period_limit)?;
    let offsets = reference.locate(window);
    if offsets.is_empty() {
        return Err(Error::WindowNotFound);
    }
    let candidates = offsets
        .into_iter()
        .map(|tau| {
            let residues = canonical.system().decompose(tau as u64);
            let states = states_for(&canonical, &residues)?;
            let regenerated = canonical.with_states(&states)?.generate(window.len());
            Ok(Recovery { tau: tau as u64, residues, states, verified: regenerated == window })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RecoveryReport::from_candidates(candidates, window.len() < min + CONFIDENCE_MARGIN))
}

/// Shift `τ` between two sequences from one pair of spectral components.
///
/// With `u_t = s_{t+τ}` the components satisfy `U_k = γ^(-kτ) S_k`, so
/// `τ = -log_γ(U_k / S_k) · k^(-1) mod n`.
pub fn shift_from_spectra(u: &FieldElt, s: &FieldElt, k: u64, base: &FieldElt, n: u64) -> Result<u64> {
    if s.is_zero() {
        return Err(Error::ReferenceComponentZero);
    }
    let k_inv = ntheory::mod_inverse(k % n, n).ok_or(Error::IndexNotInvertible { k, n })?;
    let ratio = u.try_mul(&s.inv()?)?;
    let d = galois::dlog(&ratio, base, n)?;
    Ok((((n - d % n) % n) as u128 * k_inv as u128 % n as u128) as u64)
}

/// Canonical constituent spectra of a generator, each over its default base.
pub fn constituent_spectra(spec: &GeneratorSpec) -> Result<Vec<Spectrum>> {
    let canonical = spec.canonical()?;
    canonical
        .constituent_periods()
        .iter()
        .zip(canonical.lfsrs())
        .map(|(seq, l)| dft(seq, &default_base(seq.period(), Some(l.feedback()))?))
        .collect()
}

/// Recovers register shifts from components `(k, Z_k)` of the observed
/// stream's spectrum over `target`.
///
/// A component at `k` whose non-zero residues `k mod n_i` pick out the
/// register set `M` is attributed to the monomial `M` of the combining
/// function, so `M` must be one of its monomials and every other register
/// must have a zero component at 0. Its exponent splits by CRT into one
/// exponent per register in `M`, and each is compared with the canonical
/// component to give `τ_i`. The result is verified by recomputing the
/// observed components from the regenerated stream.
pub fn spectral_recover(
    spec: &GeneratorSpec,
    observed: &[(usize, FieldElt)],
    target: &FieldElt,
) -> Result<RecoveryReport> {
    let canonical = spec.canonical()?;
    let sys = canonical.system();
    let moduli = sys.moduli();
    let n = sys.product();
    let reference = constituent_spectra(&canonical)?;
    check_target(&reference, sys, target)?;
    let monomials: Vec<u64> = canonical.function().monomials().collect();

    let mut shifts: Vec<Option<u64>> = vec![None; moduli.len()];
    let mut last_err = None;
    for (k, z) in observed {
        let k = *k as u64 % n;
        let ks = sys.decompose(k);
        let mask = ks.iter().enumerate().filter(|(_, &r)| r != 0).fold(0u64, |acc, (i, _)| acc | 1 << i);
        if !monomials.contains(&mask) {
            return Err(Error::Invalid(format!("component {k} does not come from a single monomial")));
        }
        if (0..moduli.len()).any(|i| (mask >> i) & 1 == 0 && !reference[i].value(0).is_zero()) {
            return Err(Error::Invalid(format!("component {k} mixes several monomials")));
        }
        if z.is_zero() {
            return Err(Error::Invalid(format!("observed component {k} is zero")));
        }
        let ds = sys.decompose(galois::dlog(z, target, n)?);
        for i in (0..moduli.len()).filter(|i| (mask >> i) & 1 == 1) {
            if shifts[i].is_some() {
                continue;
            }
            let beta = reference[i].base();
            let u = beta.pow_u(ds[i]);
            match shift_from_spectra(&u, &reference[i].value(ks[i] as usize), ks[i], beta, moduli[i]) {
                Ok(tau) => shifts[i] = Some(tau),
                Err(e) => last_err = Some(e),
            }
        }
    }
    let residues = match shifts.iter().copied().collect::<Option<Vec<u64>>>() {
        Some(r) => r,
        None => return Err(last_err.unwrap_or_else(|| Error::Invalid("some register has no usable component".into()))),
    };
    let tau = sys.solve_unsigned(&residues)?;
    let states = states_for(&canonical, &residues)?;
    let regenerated = canonical.with_states(&states)?.full_period(DEFAULT_PERIOD_LIMIT.max(n))?;
    let verified = observed
        .iter()
        .map(|(k, z)| dft_point(&regenerated, target, *k).map(|v| &v == z))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|ok| ok);
    Ok(RecoveryReport::from_candidates(vec![Recovery { tau, residues, states, verified }], false))
}

/// Components `(k, s(γ^k))` of a stream at the given indices.
pub fn observe(seq: &PeriodicSequence, target: &FieldElt, indices: &[usize]) -> Result<Vec<(usize, FieldElt)>> {
    indices.iter().map(|&k| Ok((k, dft_point(seq, target, k)?))).collect()
}
