//! Timing of the direct product-sequence DFT against the CRT route.

use std::fmt;
use std::time::{Duration, Instant};

use crate::combiner::{AnfFunction, GeneratorSpec};
use crate::crt::predict_spectrum;
use crate::error::{Error, Result};
use crate::galois::{find_primitive, BinaryPoly};
use crate::sequences::{min_poly_bm, LfsrConfig};
use crate::spectra::{default_base, dft, Spectrum};

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub degrees: Vec<usize>,
    pub feedback: Vec<BinaryPoly>,
    pub period: u64,
    pub target_modulus: BinaryPoly,
    pub trials: usize,
    /// Both routes produced the same spectrum.
    pub spectra_equal: bool,
    /// Best direct-DFT time over the trials.
    pub direct: Duration,
    /// Best time for constituent DFTs plus prediction.
    pub crt: Duration,
}

impl BenchReport {
    /// `direct / crt`; above 1 means the CRT route is faster.
    pub fn ratio(&self) -> f64 {
        self.direct.as_secs_f64() / self.crt.as_secs_f64().max(1e-12)
    }
}

/// Operation counts the timings are expected to follow, for `N = prod n_i`.
pub const ASYMPTOTICS: &str = "direct DFT: N evaluations of a degree-(N-1) polynomial, O(N^2) multiplications in GF(2^m)\n\
CRT route: O(sum n_i^2) multiplications in the small fields, plus one exponentiation in GF(2^m) per non-zero product component (prod of constituent supports)";

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let polys: Vec<String> = self.feedback.iter().map(|p| p.to_string()).collect();
        writeln!(f, "degrees      {:?}", self.degrees)?;
        writeln!(f, "feedback     {}", polys.join(" | "))?;
        writeln!(f, "period       {}", self.period)?;
        writeln!(f, "target field GF(2^{}) mod {}", self.target_modulus.degree().unwrap_or(0), self.target_modulus)?;
        writeln!(f, "gate         spectra equal: {}", self.spectra_equal)?;
        writeln!(f, "trials       {}", self.trials)?;
        writeln!(f, "direct dft   {:.3?}", self.direct)?;
        writeln!(f, "crt route    {:.3?}", self.crt)?;
        writeln!(f, "ratio        {:.2}", self.ratio())?;
        write!(f, "{ASYMPTOTICS}")
    }
}

fn best_of<T>(trials: usize, mut run: impl FnMut() -> Result<T>) -> Result<(Duration, T)> {
    let mut best = Duration::MAX;
    let mut last = None;
    for _ in 0..trials.max(1) {
        let start = Instant::now();
        let out = run()?;
        best = best.min(start.elapsed());
        last = Some(out);
    }
    Ok((best, last.expect("at least one trial")))
}

/// Runs the comparison for registers with the smallest primitive feedback
/// of each degree. Timings are only taken after both routes agree.
pub fn bench(degrees: &[usize], trials: usize, period_limit: u64) -> Result<BenchReport> {
    if degrees.len() < 2 {
        return Err(Error::Invalid("bench needs at least two degrees".into()));
    }
    let feedback = degrees.iter().map(|&m| find_primitive(m)).collect::<Result<Vec<_>>>()?;
    let lfsrs = feedback.iter().map(|p| LfsrConfig::impulse(p.clone())).collect::<Result<Vec<_>>>()?;
    let spec = GeneratorSpec::with_period_limit(lfsrs, AnfFunction::product(degrees.len())?, period_limit)?;
    let s = spec.full_period(period_limit)?;
    let mp = min_poly_bm(&[s.bits(), s.bits()].concat())?;
    let target = default_base(s.period(), Some(&mp.poly))?;
    let parts = spec.constituent_periods();

    let crt_route = || -> Result<Spectrum> {
        let spectra = parts
            .iter()
            .zip(spec.lfsrs())
            .map(|(seq, l)| dft(seq, &default_base(seq.period(), Some(l.feedback()))?))
            .collect::<Result<Vec<_>>>()?;
        predict_spectrum(&spectra, &target)
    };
    let direct_spec = dft(&s, &target)?;
    let spectra_equal = crt_route()? == direct_spec;
    if !spectra_equal {
        return Err(Error::Invalid("CRT prediction differs from the direct DFT; no timings taken".into()));
    }
    let (direct, _) = best_of(trials, || dft(&s, &target))?;
    let (crt, _) = best_of(trials, crt_route)?;
    Ok(BenchReport {
        degrees: degrees.to_vec(),
        feedback,
        period: spec.period(),
        target_modulus: target.field().modulus().clone(),
        trials,
        spectra_equal,
        direct,
        crt,
    })
}
