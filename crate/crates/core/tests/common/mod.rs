#![allow(dead_code)]

use lfsr_crt::combiner::{AnfFunction, GeneratorSpec};
use lfsr_crt::crt::{compatible_target, predict_combiner_spectrum, predict_spectrum};
use lfsr_crt::galois::{find_primitive, FieldElt};
use lfsr_crt::sequences::{min_poly_bm, LfsrConfig, PeriodicSequence};
use lfsr_crt::spectra::{default_base, dft, Spectrum};
use rand::Rng;

pub const LIMIT: u64 = 1 << 20;

/// Register of the given degree on the smallest primitive polynomial with a
/// random non-zero fill.
pub fn random_register<R: Rng>(rng: &mut R, degree: usize) -> LfsrConfig {
    let feedback = find_primitive(degree).unwrap();
    loop {
        let init: Vec<bool> = (0..degree).map(|_| rng.gen()).collect();
        if init.iter().any(|b| *b) {
            return LfsrConfig::new(feedback, init).unwrap();
        }
    }
}

pub fn random_anf<R: Rng>(rng: &mut R, arity: usize) -> AnfFunction {
    let masks: Vec<u64> = (0..1u64 << arity).filter(|_| rng.gen()).collect();
    AnfFunction::new(arity, masks).unwrap()
}

/// Spectra of the registers' actual streams, each over its default base.
pub fn register_spectra(spec: &GeneratorSpec) -> Vec<Spectrum> {
    spec.constituent_periods()
        .iter()
        .zip(spec.lfsrs())
        .map(|(seq, l)| dft(seq, &default_base(seq.period(), Some(l.feedback())).unwrap()).unwrap())
        .collect()
}

pub fn linear_complexity(s: &PeriodicSequence) -> usize {
    min_poly_bm(&[s.bits(), s.bits()].concat()).unwrap().linear_complexity
}

/// Target base: `x` modulo the product stream's minimal polynomial.
pub fn product_target(spec: &GeneratorSpec) -> FieldElt {
    let prod = GeneratorSpec::new(spec.lfsrs().to_vec(), AnfFunction::product(spec.lfsrs().len()).unwrap()).unwrap();
    let s = prod.full_period(LIMIT).unwrap();
    let mp = min_poly_bm(&[s.bits(), s.bits()].concat()).unwrap();
    default_base(s.period(), Some(&mp.poly)).unwrap()
}

/// Direct DFT and CRT prediction for one generator, over the given target.
pub fn both_routes(spec: &GeneratorSpec, target: &FieldElt) -> (Spectrum, Spectrum) {
    let z = spec.full_period(LIMIT).unwrap();
    let direct = dft(&z, target).unwrap();
    let parts = register_spectra(spec);
    let predicted = if spec.function() == &AnfFunction::product(spec.lfsrs().len()).unwrap() {
        predict_spectrum(&parts, target).unwrap()
    } else {
        predict_combiner_spectrum(&parts, spec.function(), target).unwrap()
    };
    (direct, predicted)
}

pub fn searched_target(spec: &GeneratorSpec) -> FieldElt {
    compatible_target(&register_spectra(spec), None).unwrap()
}

/// Degree sets with pairwise-coprime periods used by the oracle checks.
pub fn degree_sets() -> Vec<Vec<usize>> {
    vec![vec![2, 3], vec![2, 5], vec![3, 5], vec![2, 3, 5], vec![3, 4]]
}
