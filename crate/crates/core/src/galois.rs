//! Binary polynomials and the extension fields GF(2^m) they define.
//!
//! Field elements use the polynomial basis: an element is the residue of a
//! binary polynomial of degree below `m`, packed into a `u64` with bit `i`
//! holding the coefficient of `x^i`. Discrete logarithms are only ever taken
//! inside the order-`n` subgroup used as a DFT base, so the lookup tables stay
//! small even when the field itself is large.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ntheory;

/// Polynomial over GF(2), stored as a little-endian bitset of coefficients.
///
/// The word vector never carries trailing zero words, so equality is
/// structural and the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryPoly {
    words: Vec<u64>,
}

impl BinaryPoly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::from_u64(2)
    }

    pub fn monomial(exp: usize) -> Self {
        let mut p = Self::zero();
        p.set_coeff(exp, true);
        p
    }

    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn from_u128(bits: u128) -> Self {
        Self::from_words(vec![bits as u64, (bits >> 64) as u64])
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.trim();
        p
    }

    /// Builds `sum x^e` over the given exponents. Repeated exponents cancel.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.set_coeff(e, !p.coeff(e));
        }
        p
    }

    /// Polynomial whose coefficient of `x^i` is `bits[i]`.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
            words[i / 64] |= 1 << (i % 64);
        }
        Self::from_words(words)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, value: bool) {
        let w = i / 64;
        if value {
            if self.words.len() <= w {
                self.words.resize(w + 1, 0);
            }
            self.words[w] |= 1 << (i % 64);
        } else if w < self.words.len() {
            self.words[w] &= !(1 << (i % 64));
            self.trim();
        }
    }

    /// Exponents with a non-zero coefficient, highest first.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate().rev() {
            for b in (0..64).rev() {
                if (w >> b) & 1 == 1 {
                    out.push(wi * 64 + b);
                }
            }
        }
        out
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Packs the coefficients into a `u128`, if the degree allows it.
    pub fn to_u128(&self) -> Option<u128> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0] as u128),
            2 => Some(self.words[0] as u128 | (self.words[1] as u128) << 64),
            _ => None,
        }
    }

    fn xor_shifted(&mut self, other: &Self, shift: usize) {
        if other.is_zero() {
            return;
        }
        let (ws, bs) = (shift / 64, shift % 64);
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.trim();
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for e in self.exponents() {
            out.xor_shifted(other, e);
        }
        out
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Quotient and remainder of long division.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.degree().ok_or(Error::ZeroModulus)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r) = rem.degree() {
            if r < d {
                break;
            }
            quot.set_coeff(r - d, true);
            rem.xor_shifted(divisor, r - d);
        }
        Ok((quot, rem))
    }

    pub fn rem(&self, modulus: &Self) -> Result<Self> {
        Ok(self.div_rem(modulus)?.1)
    }

    /// Greatest common divisor (monic by construction over GF(2)).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("non-zero divisor");
            a = b;
            b = r;
        }
        a
    }

    /// Reverses the coefficient order over a fixed length of `len + 1` terms,
    /// i.e. returns `x^len * p(1/x)`.
    pub fn reciprocal(&self, len: usize) -> Self {
        let mut out = Self::zero();
        for e in self.exponents().into_iter().filter(|&e| e <= len) {
            out.set_coeff(len - e, true);
        }
        out
    }

    /// Irreducibility over GF(2) (Ben-Or: `gcd(x^(2^i) - x, p) = 1` for all
    /// `i <= deg/2`).
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = self.degree().ok_or(Error::DegenerateDegree)?;
        if d == 0 {
            return Err(Error::DegenerateDegree);
        }
        if d == 1 {
            return Ok(true);
        }
        if !self.coeff(0) {
            return Ok(false);
        }
        let x = Self::x();
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = h.square().rem(self)?;
            let g = (&h + &x).gcd(self);
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Hex rendering of the coefficient bitset, constant term in the lowest bit.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = format!("{:X}", self.words.last().unwrap());
        for w in self.words.iter().rev().skip(1) {
            s.push_str(&format!("{w:016X}"));
        }
        s
    }

    /// Exponent-list rendering, e.g. `3,1,0`.
    pub fn to_exponent_list(&self) -> String {
        let exps: Vec<String> = self.exponents().iter().map(|e| e.to_string()).collect();
        exps.join(",")
    }
}

impl Add for &BinaryPoly {
    type Output = BinaryPoly;

    fn add(self, rhs: &BinaryPoly) -> BinaryPoly {
        let len = self.words.len().max(rhs.words.len());
        let words = (0..len)
            .map(|i| self.words.get(i).copied().unwrap_or(0) ^ rhs.words.get(i).copied().unwrap_or(0))
            .collect();
        BinaryPoly::from_words(words)
    }
}

impl Mul for &BinaryPoly {
    type Output = BinaryPoly;

    fn mul(self, rhs: &BinaryPoly) -> BinaryPoly {
        BinaryPoly::mul(self, rhs)
    }
}

impl fmt::Display for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for BinaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPoly({self})")
    }
}

/// Parses either a hex bitset (`B`, `0x25`) or, when the text contains a
/// comma, an exponent list (`3,1,0`; a lone exponent needs a trailing comma).
impl FromStr for BinaryPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("cannot parse polynomial '{s}'"));
        if s.contains(',') {
            let exps = s
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            if exps.is_empty() {
                return Err(bad());
            }
            return Ok(Self::from_exponents(&exps));
        }
        let hex = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
        if hex.is_empty() || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(bad());
        }
        let digits: Vec<u8> = hex.bytes().rev().map(|c| (c as char).to_digit(16).unwrap() as u8).collect();
        let mut words = vec![0u64; digits.len().div_ceil(16)];
        for (i, d) in digits.iter().enumerate() {
            words[i / 16] |= (*d as u64) << (4 * (i % 16));
        }
        Ok(Self::from_words(words))
    }
}

/// Smallest irreducible polynomial of degree `m` (by bitset value, odd
/// constant term for `m > 1`).
pub fn find_irreducible(m: usize) -> Result<BinaryPoly> {
    find_poly(m, |_| true)
}

/// Smallest primitive polynomial of degree `m`: irreducible, with `x` of
/// order `2^m - 1` in the quotient field.
pub fn find_primitive(m: usize) -> Result<BinaryPoly> {
    find_poly(m, |field| field.x().order().ok() == Some(field.group_order()))
}

fn find_poly(m: usize, accept: impl Fn(&Field) -> bool) -> Result<BinaryPoly> {
    if m == 0 || m > 64 {
        return Err(Error::UnsupportedDegree(m));
    }
    let top = 1u128 << m;
    let mut low = 1u128;
    while low < top {
        let p = BinaryPoly::from_u128(top | low);
        if p.is_irreducible()? {
            let field = Field::new(p.clone())?;
            if accept(&field) {
                return Ok(p);
            }
        }
        low += 2;
    }
    Err(Error::Invalid(format!("no suitable polynomial of degree {m}")))
}

/// Lookup table for logarithms inside a cyclic subgroup.
#[derive(Debug)]
struct DlogTable {
    logs: HashMap<u64, u64>,
}

/// The field GF(2)[x]/(modulus) for an irreducible modulus of degree 1..=64.
#[derive(Debug)]
pub struct FieldCtx {
    modulus: BinaryPoly,
    modulus_bits: u128,
    degree: u32,
    group_order: u64,
    dlog_tables: Mutex<HashMap<u64, Arc<DlogTable>>>,
}

/// Shared handle to a [`FieldCtx`]. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldCtx>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus_bits == other.0.modulus_bits
    }
}

impl Eq for Field {}

impl Field {
    /// Builds the field defined by an irreducible modulus.
    pub fn new(modulus: BinaryPoly) -> Result<Self> {
        let degree = modulus.degree().ok_or(Error::ZeroModulus)?;
        if degree == 0 {
            return Err(Error::DegenerateDegree);
        }
        if degree > 64 {
            return Err(Error::UnsupportedDegree(degree));
        }
        if !modulus.is_irreducible()? {
            return Err(Error::ReducibleModulus(modulus.to_string()));
        }
        let modulus_bits = modulus.to_u128().expect("degree <= 64");
        let group_order = if degree == 64 { u64::MAX } else { (1u64 << degree) - 1 };
        Ok(Self(Arc::new(FieldCtx {
            modulus,
            modulus_bits,
            degree: degree as u32,
            group_order,
            dlog_tables: Mutex::new(HashMap::new()),
        })))
    }

    pub fn modulus(&self) -> &BinaryPoly {
        &self.0.modulus
    }

    /// Extension degree `m`.
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    /// `2^m - 1`.
    pub fn group_order(&self) -> u64 {
        self.0.group_order
    }

    pub fn size(&self) -> u128 {
        1u128 << self.0.degree
    }

    pub fn elt(&self, repr: u64) -> Result<FieldElt> {
        if self.0.degree < 64 && repr >> self.0.degree != 0 {
            return Err(Error::ElementOutOfRange { repr, degree: self.0.degree });
        }
        Ok(FieldElt { field: self.clone(), repr })
    }

    pub(crate) fn wrap(&self, repr: u64) -> FieldElt {
        debug_assert!(self.0.degree == 64 || repr >> self.0.degree == 0);
        FieldElt { field: self.clone(), repr }
    }

    pub fn zero(&self) -> FieldElt {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElt {
        self.wrap(1)
    }

    /// Residue class of the indeterminate.
    pub fn x(&self) -> FieldElt {
        self.from_poly(&BinaryPoly::x())
    }

    /// Reduces an arbitrary binary polynomial into the field.
    pub fn from_poly(&self, p: &BinaryPoly) -> FieldElt {
        let r = p.rem(&self.0.modulus).expect("modulus is non-zero");
        self.wrap(r.to_u128().expect("residue fits") as u64)
    }

    // Raw arithmetic on packed residues. Callers guarantee the inputs are
    // reduced residues of this field.

    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let m = self.0.degree;
        let modulus = self.0.modulus_bits;
        let mut a = a as u128;
        let mut b = b;
        let mut r = 0u128;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if (a >> m) & 1 == 1 {
                a ^= modulus;
            }
        }
        r as u64
    }

    pub(crate) fn pow_raw(&self, base: u64, mut e: u64) -> u64 {
        let mut result = 1u64;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_raw(result, b);
            }
            b = self.mul_raw(b, b);
            e >>= 1;
        }
        result
    }

    pub(crate) fn inv_raw(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow_raw(a, self.0.group_order - 1))
    }

    /// Absolute trace `sum_{k<m} a^(2^k)`.
    pub(crate) fn trace_raw(&self, a: u64) -> u64 {
        self.subtrace_raw(a, self.0.degree)
    }

    /// `sum_{k<terms} a^(2^k)`; the trace onto GF(2) when `a` lies in the
    /// subfield GF(2^terms).
    pub(crate) fn subtrace_raw(&self, a: u64, terms: u32) -> u64 {
        let mut acc = 0;
        let mut y = a;
        for _ in 0..terms {
            acc ^= y;
            y = self.mul_raw(y, y);
        }
        acc
    }

    /// Evaluates a binary polynomial at a field element (Horner).
    pub fn eval(&self, p: &BinaryPoly, at: &FieldElt) -> Result<FieldElt> {
        self.check(at)?;
        let mut acc = 0u64;
        if let Some(d) = p.degree() {
            for i in (0..=d).rev() {
                acc = self.mul_raw(acc, at.repr) ^ p.coeff(i) as u64;
            }
        }
        Ok(self.wrap(acc))
    }

    fn check(&self, e: &FieldElt) -> Result<()> {
        if &e.field == self {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// An element of exact multiplicative order `n`.
    ///
    /// Returns `x` when it already has order `n`; otherwise searches for a
    /// primitive element in ascending representation order and raises it to
    /// `(2^m - 1)/n`.
    pub fn order_n_element(&self, n: u64) -> Result<FieldElt> {
        let q = self.group_order();
        if n == 0 || !q.is_multiple_of(n) {
            return Err(Error::NoOrderNElement { n, group_order: q });
        }
        let x = self.x();
        if x.order()? == n {
            return Ok(x);
        }
        let g = (1..=q)
            .map(|r| self.wrap(r))
            .find(|g| g.order().ok() == Some(q))
            .expect("the multiplicative group is cyclic");
        Ok(self.wrap(self.pow_raw(g.repr, q / n)))
    }

    fn dlog_table(&self, base: &FieldElt) -> Result<Arc<DlogTable>> {
        let mut tables = self.0.dlog_tables.lock().expect("dlog table lock");
        if let Some(t) = tables.get(&base.repr) {
            return Ok(t.clone());
        }
        let order = base.order()?;
        let mut logs = HashMap::with_capacity(order as usize);
        let mut p = 1u64;
        for d in 0..order {
            logs.insert(p, d);
            p = self.mul_raw(p, base.repr);
        }
        let table = Arc::new(DlogTable { logs });
        tables.insert(base.repr, table.clone());
        Ok(table)
    }

    /// Logarithm of `a` to `base`, inside the subgroup `base` generates.
    ///
    /// The table for each base is built once per field and reused.
    pub fn dlog(&self, a: &FieldElt, base: &FieldElt) -> Result<u64> {
        self.check(a)?;
        self.check(base)?;
        if a.is_zero() {
            return Err(Error::ZeroLogarithm);
        }
        let table = self.dlog_table(base)?;
        table.logs.get(&a.repr).copied().ok_or(Error::NotInSubgroup)
    }
}

/// Element of a [`Field`].
#[derive(Clone)]
pub struct FieldElt {
    field: Field,
    repr: u64,
}

impl PartialEq for FieldElt {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field == other.field
    }
}

impl Eq for FieldElt {}

impl fmt::Debug for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElt({:#x} mod {})", self.repr, self.field.modulus().to_hex())
    }
}

impl FieldElt {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Packed polynomial-basis residue.
    pub fn repr(&self) -> u64 {
        self.repr
    }

    pub fn as_poly(&self) -> BinaryPoly {
        BinaryPoly::from_u64(self.repr)
    }

    pub fn is_zero(&self) -> bool {
        self.repr == 0
    }

    pub fn is_one(&self) -> bool {
        self.repr == 1
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.field.check(other)?;
        Ok(self.field.wrap(self.repr ^ other.repr))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.field.check(other)?;
        Ok(self.field.wrap(self.field.mul_raw(self.repr, other.repr)))
    }

    pub fn square(&self) -> Self {
        self.field.wrap(self.field.mul_raw(self.repr, self.repr))
    }

    pub fn inv(&self) -> Result<Self> {
        self.field.inv_raw(self.repr).map(|r| self.field.wrap(r)).ok_or(Error::ZeroInverse)
    }

    /// `self^e`; negative exponents are taken modulo the group order.
    pub fn pow(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.field.wrap((e == 0) as u64);
        }
        let e = ntheory::normalize(e, self.field.group_order());
        self.field.wrap(self.field.pow_raw(self.repr, e))
    }

    pub fn pow_u(&self, e: u64) -> Self {
        self.field.wrap(self.field.pow_raw(self.repr, e))
    }

    /// Multiplicative order, via the factorization of `2^m - 1`.
    pub fn order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroOrder);
        }
        let q = self.field.group_order();
        let mut t = q;
        for (p, _) in ntheory::factorize(q) {
            while t.is_multiple_of(p) && self.field.pow_raw(self.repr, t / p) == 1 {
                t /= p;
            }
        }
        Ok(t)
    }

    /// Absolute trace onto GF(2), returned as 0 or 1.
    pub fn trace(&self) -> u64 {
        let t = self.field.trace_raw(self.repr);
        debug_assert!(t <= 1, "trace left GF(2)");
        t
    }

    /// Minimal polynomial over GF(2): the product of `(X - c)` over the
    /// distinct Frobenius conjugates `c` of this element.
    pub fn minimal_polynomial(&self) -> BinaryPoly {
        let f = &self.field;
        let mut conjugates = vec![self.repr];
        let mut c = f.mul_raw(self.repr, self.repr);
        while c != self.repr {
            conjugates.push(c);
            c = f.mul_raw(c, c);
        }
        // coefficients over the field, lowest degree first
        let mut coeffs = vec![1u64];
        for c in conjugates {
            let mut next = vec![0u64; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] ^= a;
                next[i] ^= f.mul_raw(a, c);
            }
            coeffs = next;
        }
        let bits: Vec<bool> = coeffs
            .iter()
            .map(|&a| {
                debug_assert!(a <= 1, "minimal polynomial left GF(2)");
                a == 1
            })
            .collect();
        BinaryPoly::from_bits(&bits)
    }
}

impl Add for &FieldElt {
    type Output = FieldElt;

    /// Panics when the operands live in different fields; use
    /// [`FieldElt::try_add`] to get an error instead.
    fn add(self, rhs: &FieldElt) -> FieldElt {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElt {
    type Output = FieldElt;

    /// Panics when the operands live in different fields; use
    /// [`FieldElt::try_mul`] to get an error instead.
    fn mul(self, rhs: &FieldElt) -> FieldElt {
        self.try_mul(rhs).expect("field mismatch")
    }
}

/// Logarithm of `a` to `base`, where `base` must have order `n`.
pub fn dlog(a: &FieldElt, base: &FieldElt, n: u64) -> Result<u64> {
    let order = base.order()?;
    if order != n {
        return Err(Error::BaseOrderMismatch { order, period: n });
    }
    base.field().dlog(a, base)
}
