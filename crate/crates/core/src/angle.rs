//! Exact angles.
//!
//! An [`Angle`] is `2π(q₀ + Σ qᵢ·sᵢ)` where the `qᵢ` are rationals and the
//! `sᵢ` are symbols of a [`SymbolBasis`] that is declared rationally
//! independent (together with `1`). Under that declaration `e^{i·angle} = 1`
//! holds exactly when every symbol coefficient vanishes and `q₀` is an
//! integer, so all character equations are decidable without floating point.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::integer::{gcd, lcm};
use num::{One, Rational64, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{solve_integer, IntegerSolution};

/// A named irrational symbol with a numeric witness used only for oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub name: String,
    pub witness: f64,
}

/// Ordered list of symbols declared rationally independent over `Q` together
/// with the constant `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBasis {
    symbols: Vec<Symbol>,
}

impl SymbolBasis {
    pub fn new(symbols: Vec<Symbol>) -> Result<Arc<Self>> {
        for (i, s) in symbols.iter().enumerate() {
            if s.name.is_empty() {
                return Err(Error::InvalidBasis("empty symbol name".into()));
            }
            if !(s.witness > 0.0 && s.witness < 1.0) {
                return Err(Error::InvalidBasis(format!(
                    "witness of {} must lie in (0,1), got {}",
                    s.name, s.witness
                )));
            }
            for t in &symbols[..i] {
                if t.name == s.name {
                    return Err(Error::InvalidBasis(format!("duplicate symbol {}", s.name)));
                }
                if t.witness == s.witness {
                    return Err(Error::InvalidBasis(format!(
                        "symbols {} and {} share a witness",
                        t.name, s.name
                    )));
                }
            }
        }
        Ok(Arc::new(Self { symbols }))
    }

    /// `s1 = √2−1`, `s2 = √3−1`, `s3 = √5−2`.
    pub fn standard() -> Arc<Self> {
        Self::new(vec![
            Symbol { name: "s1".into(), witness: 2f64.sqrt() - 1.0 },
            Symbol { name: "s2".into(), witness: 3f64.sqrt() - 1.0 },
            Symbol { name: "s3".into(), witness: 5f64.sqrt() - 2.0 },
        ])
        .expect("standard basis is valid")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub(crate) fn compatible(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}

/// Exact angle over a [`SymbolBasis`].
///
/// Equality, ordering and hashing compare coefficients only; use
/// [`Angle::same_basis`] where mixing bases would be a caller bug.
#[derive(Clone)]
pub struct Angle {
    basis: Arc<SymbolBasis>,
    q0: Rational64,
    sym: Vec<Rational64>,
}

impl Angle {
    pub fn zero(basis: &Arc<SymbolBasis>) -> Self {
        Self { basis: basis.clone(), q0: Rational64::zero(), sym: vec![Rational64::zero(); basis.len()] }
    }

    /// `2π·q0`.
    pub fn turns(basis: &Arc<SymbolBasis>, q0: Rational64) -> Self {
        Self { q0, ..Self::zero(basis) }
    }

    /// `2π·coeff·s` for the named symbol.
    pub fn symbol(basis: &Arc<SymbolBasis>, name: &str, coeff: Rational64) -> Result<Self> {
        let i = basis
            .index_of(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown symbol {name}")))?;
        let mut a = Self::zero(basis);
        a.sym[i] = coeff;
        Ok(a)
    }

    pub fn from_parts(basis: &Arc<SymbolBasis>, q0: Rational64, sym: Vec<Rational64>) -> Result<Self> {
        if sym.len() != basis.len() {
            return Err(Error::BasisMismatch);
        }
        Ok(Self { basis: basis.clone(), q0, sym })
    }

    pub fn basis(&self) -> &Arc<SymbolBasis> {
        &self.basis
    }

    pub fn q0(&self) -> Rational64 {
        self.q0
    }

    pub fn symbol_coeffs(&self) -> &[Rational64] {
        &self.sym
    }

    pub fn same_basis(&self, other: &Angle) -> bool {
        SymbolBasis::compatible(&self.basis, &other.basis)
    }

    fn check_basis(&self, other: &Angle) -> Result<()> {
        if self.same_basis(other) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn has_symbols(&self) -> bool {
        self.sym.iter().any(|q| !q.is_zero())
    }

    /// Representative with `q₀ ∈ [0, 1)`.
    pub fn reduced(&self) -> Self {
        Self { q0: frac(self.q0), ..self.clone() }
    }

    /// `e^{i·self} = 1`.
    pub fn is_trivial_phase(&self) -> bool {
        !self.has_symbols() && self.q0.is_integer()
    }

    /// Equality of `e^{i·self}` and `e^{i·other}`.
    pub fn phase_eq(&self, other: &Angle) -> bool {
        self.sym == other.sym && frac(self.q0) == frac(other.q0)
    }

    /// Numeric value in radians, using the basis witnesses.
    pub fn to_radians(&self) -> f64 {
        let mut turns = self.q0.to_f64().unwrap_or(f64::NAN);
        for (q, s) in self.sym.iter().zip(self.basis.symbols()) {
            if !q.is_zero() {
                turns += q.to_f64().unwrap_or(f64::NAN) * s.witness;
            }
        }
        std::f64::consts::TAU * turns
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = Rational64::from_integer(k);
        Self {
            basis: self.basis.clone(),
            q0: self.q0 * k,
            sym: self.sym.iter().map(|q| q * k).collect(),
        }
    }

    /// Least `n ≥ 1` with `n·self` trivial, if any.
    pub fn order(&self) -> Option<i64> {
        if self.has_symbols() {
            None
        } else {
            Some(*frac(self.q0).denom())
        }
    }
}

/// `m·a + n·b`.
pub fn angle_combine(a: &Angle, b: &Angle, m: i64, n: i64) -> Result<Angle> {
    a.check_basis(b)?;
    Ok(a.scale(m) + b.scale(n))
}

/// Some integer `m` with `n·phi + m·theta` trivial.
///
/// When several `m` work (only possible if `theta` has no symbol part) the
/// one of least absolute value is returned, preferring the nonnegative one.
pub fn solve_character(theta: &Angle, phi: &Angle, n: i64) -> Result<Option<i64>> {
    theta.check_basis(phi)?;
    if n == 0 {
        return Ok(Some(0));
    }
    let n_r = Rational64::from_integer(n);
    let mut forced: Option<Rational64> = None;
    for (t, f) in theta.sym.iter().zip(&phi.sym) {
        let target = f * n_r;
        if t.is_zero() {
            if !target.is_zero() {
                return Ok(None);
            }
            continue;
        }
        let m = -target / t;
        match forced {
            None => forced = Some(m),
            Some(prev) if prev != m => return Ok(None),
            Some(_) => {}
        }
    }
    let c = phi.q0 * n_r;
    match forced {
        Some(m) => {
            if !m.is_integer() {
                return Ok(None);
            }
            let m = m.to_integer();
            Ok((c + theta.q0 * Rational64::from_integer(m)).is_integer().then_some(m))
        }
        None => Ok(solve_rational_congruence(frac(theta.q0), c)),
    }
}

/// Least `|m|` (nonnegative on ties) with `m·t + c ∈ Z`.
fn solve_rational_congruence(t: Rational64, c: Rational64) -> Option<i64> {
    if t.is_zero() {
        return c.is_integer().then_some(0);
    }
    let (a, b) = (*t.numer() as i128, *t.denom() as i128);
    let (e, f) = (*c.numer() as i128, *c.denom() as i128);
    let l = lcm(b, f);
    let big_a = (a * (l / b)).rem_euclid(l);
    let big_c = (e * (l / f)).rem_euclid(l);
    let g = gcd(big_a, l);
    if big_c % g != 0 {
        return None;
    }
    let period = l / g;
    let inv = mod_inverse(big_a / g, period)?;
    let m0 = ((-big_c / g) * inv).rem_euclid(period);
    let alt = m0 - period;
    let m = match m0.cmp(&alt.abs()) {
        Ordering::Greater => alt,
        _ => m0,
    };
    i64::try_from(m).ok()
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

/// Least `n ≥ 1` for which [`solve_character`] succeeds, with its witness.
///
/// Closed form: when `theta` carries symbols, the symbol coordinates pin
/// `m = r·n` for a single rational `r`, and the constant coordinate then
/// requires `n·(φ₀ + r·θ₀) ∈ Z`; both are divisibility conditions on `n`.
pub fn minimal_level(theta: &Angle, phi: &Angle) -> Result<Option<(i64, i64)>> {
    theta.check_basis(phi)?;
    if let Some(i) = theta.sym.iter().position(|q| !q.is_zero()) {
        let r = -phi.sym[i] / theta.sym[i];
        if theta.sym.iter().zip(&phi.sym).any(|(t, f)| !(f + r * t).is_zero()) {
            return Ok(None);
        }
        let c = frac(phi.q0 + r * theta.q0);
        let n0 = lcm(*r.denom(), *c.denom());
        let m = (r * Rational64::from_integer(n0)).to_integer();
        return Ok(Some((n0, m)));
    }
    if phi.has_symbols() {
        return Ok(None);
    }
    let b = *frac(theta.q0).denom();
    let n0 = *frac(phi.q0 * Rational64::from_integer(b)).denom();
    let m = solve_character(theta, phi, n0)?.expect("level n0 is solvable by construction");
    Ok(Some((n0, m)))
}

/// Integer vectors `t` with `base + Σ t_j·coeffs_j` trivial.
///
/// Each symbol coordinate gives one rational linear equation and the
/// constant coordinate one more with an auxiliary integer unknown; the
/// system is cleared of denominators and solved over `Z`. The returned
/// solution is projected onto `t` (the auxiliary unknown is dropped).
pub fn solve_phase_relation(base: &Angle, coeffs: &[Angle]) -> Result<Option<IntegerSolution>> {
    for c in coeffs {
        base.check_basis(c)?;
    }
    let r = coeffs.len();
    let mut rows: Vec<(Vec<Rational64>, Rational64)> = Vec::new();
    for i in 0..base.sym.len() {
        let mut row: Vec<Rational64> = coeffs.iter().map(|c| c.sym[i]).collect();
        row.push(Rational64::zero());
        rows.push((row, -base.sym[i]));
    }
    let mut row: Vec<Rational64> = coeffs.iter().map(|c| c.q0).collect();
    row.push(-Rational64::one());
    rows.push((row, -base.q0));

    let mut a = Vec::with_capacity(rows.len());
    let mut b = Vec::with_capacity(rows.len());
    for (row, rhs) in rows {
        let den = row.iter().chain(std::iter::once(&rhs)).fold(1i128, |acc, q| lcm(acc, *q.denom() as i128));
        a.push(row.iter().map(|q| *q.numer() as i128 * (den / *q.denom() as i128)).collect::<Vec<_>>());
        b.push(*rhs.numer() as i128 * (den / *rhs.denom() as i128));
    }
    Ok(solve_integer(&a, &b).map(|sol| IntegerSolution {
        particular: sol.particular[..r].to_vec(),
        kernel: sol
            .kernel
            .iter()
            .map(|k| k[..r].to_vec())
            .filter(|k| k.iter().any(|x| *x != 0))
            .collect(),
    }))
}

/// Fractional part in `[0, 1)`.
pub(crate) fn frac(q: Rational64) -> Rational64 {
    q - q.floor()
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        self.q0 == other.q0 && self.sym == other.sym
    }
}

impl Eq for Angle {}

impl Hash for Angle {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.q0.hash(state);
        self.sym.hash(state);
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sym.cmp(&other.sym).then(self.q0.cmp(&other.q0))
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        &self + &rhs
    }
}

impl Add<&Angle> for &Angle {
    type Output = Angle;
    fn add(self, rhs: &Angle) -> Angle {
        debug_assert!(self.same_basis(rhs), "adding angles over different bases");
        Angle {
            basis: self.basis.clone(),
            q0: self.q0 + rhs.q0,
            sym: self.sym.iter().zip(&rhs.sym).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Angle> for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        self + &(-rhs)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        &self - &rhs
    }
}

impl Neg for &Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle { basis: self.basis.clone(), q0: -self.q0, sym: self.sym.iter().map(|q| -q).collect() }
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        -&self
    }
}

impl Mul<i64> for &Angle {
    type Output = Angle;
    fn mul(self, k: i64) -> Angle {
        self.scale(k)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({self})")
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2π·({}", self.q0)?;
        for (q, s) in self.sym.iter().zip(self.basis.symbols()) {
            if !q.is_zero() {
                let sign = if q.is_negative() { '-' } else { '+' };
                let mag = q.abs();
                if mag.is_one() {
                    write!(f, " {sign} {}", s.name)?;
                } else {
                    write!(f, " {sign} {mag}·{}", s.name)?;
                }
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn basis() -> Arc<SymbolBasis> {
        SymbolBasis::standard()
    }

    fn s(b: &Arc<SymbolBasis>, name: &str) -> Angle {
        Angle::symbol(b, name, r(1, 1)).unwrap()
    }

    #[test]
    fn basis_rejects_duplicates_and_bad_witnesses() {
        let dup = SymbolBasis::new(vec![
            Symbol { name: "a".into(), witness: 0.3 },
            Symbol { name: "a".into(), witness: 0.4 },
        ]);
        assert!(matches!(dup, Err(Error::InvalidBasis(_))));
        let same_witness = SymbolBasis::new(vec![
            Symbol { name: "a".into(), witness: 0.3 },
            Symbol { name: "b".into(), witness: 0.3 },
        ]);
        assert!(same_witness.is_err());
        let out_of_range = SymbolBasis::new(vec![Symbol { name: "a".into(), witness: 1.5 }]);
        assert!(out_of_range.is_err());
    }

    #[test]
    fn combine_examples() {
        let b = basis();
        let theta = s(&b, "s1");
        assert!(angle_combine(&theta, &theta, 1, -1).unwrap().is_trivial_phase());
        assert_eq!(angle_combine(&theta, &theta, 1, -1).unwrap(), Angle::zero(&b));

        let third = Angle::turns(&b, r(1, 3));
        assert_eq!(angle_combine(&third, &third, 2, 0).unwrap(), Angle::turns(&b, r(2, 3)));

        let half_plus = &Angle::turns(&b, r(1, 2)) + &s(&b, "s1");
        assert_eq!(angle_combine(&s(&b, "s1"), &half_plus, 1, -1).unwrap(), Angle::turns(&b, r(-1, 2)));
    }

    #[test]
    fn combine_rejects_foreign_basis() {
        let other = SymbolBasis::new(vec![Symbol { name: "t".into(), witness: 0.1 }]).unwrap();
        let err = angle_combine(&Angle::zero(&basis()), &Angle::zero(&other), 1, 1).unwrap_err();
        assert_eq!(err, Error::BasisMismatch);
        assert_eq!(err.to_string(), "incompatible symbol bases");
    }

    #[test]
    fn trivial_phase_examples() {
        let b = basis();
        assert!(Angle::turns(&b, r(3, 3)).is_trivial_phase());
        assert!(!s(&b, "s1").is_trivial_phase());
        assert!(!Angle::turns(&b, r(1, 2)).is_trivial_phase());
    }

    #[test]
    fn solve_character_examples() {
        let b = basis();
        let theta = s(&b, "s1");
        assert_eq!(solve_character(&theta, &Angle::turns(&b, r(1, 3)), 3).unwrap(), Some(0));
        assert_eq!(solve_character(&theta, &-&theta, 1).unwrap(), Some(1));
        assert_eq!(solve_character(&theta, &s(&b, "s2"), 1).unwrap(), None);
        assert_eq!(solve_character(&theta, &s(&b, "s2"), 0).unwrap(), Some(0));
    }

    #[test]
    fn solve_character_tie_break_on_rational_theta() {
        let b = basis();
        // m/4 + 1/2 ∈ Z  ⇔  m ≡ 2 (mod 4): candidates 2 and -2, prefer 2.
        let theta = Angle::turns(&b, r(1, 4));
        let phi = Angle::turns(&b, r(1, 2));
        assert_eq!(solve_character(&theta, &phi, 1).unwrap(), Some(2));
        // m/5 + 3/5 ∈ Z ⇔ m ≡ 2 (mod 5): candidates 2 and -3.
        let theta = Angle::turns(&b, r(1, 5));
        let phi = Angle::turns(&b, r(3, 5));
        assert_eq!(solve_character(&theta, &phi, 1).unwrap(), Some(2));
        // m/5 + 2/5 ∈ Z ⇔ m ≡ 3 (mod 5): candidates 3 and -2.
        let phi = Angle::turns(&b, r(2, 5));
        assert_eq!(solve_character(&theta, &phi, 1).unwrap(), Some(-2));
        // unsolvable: m/2 + 1/3
        let theta = Angle::turns(&b, r(1, 2));
        assert_eq!(solve_character(&theta, &Angle::turns(&b, r(1, 3)), 1).unwrap(), None);
    }

    #[test]
    fn minimal_level_examples() {
        let b = basis();
        let theta = s(&b, "s1");
        assert_eq!(minimal_level(&theta, &Angle::turns(&b, r(1, 3))).unwrap(), Some((3, 0)));
        assert_eq!(minimal_level(&theta, &-&theta).unwrap(), Some((1, 1)));
        assert_eq!(minimal_level(&theta, &s(&b, "s2")).unwrap(), None);
    }

    #[test]
    fn minimal_level_mixed_ratio() {
        let b = basis();
        // φ = 1/2·s1 + 1/3: need m = -n/2 and n/3 - n/4·0 ... worked by brute force below.
        let theta = &s(&b, "s1") + &Angle::turns(&b, r(1, 4));
        let phi = &Angle::symbol(&b, "s1", r(1, 2)).unwrap() + &Angle::turns(&b, r(1, 3));
        let got = minimal_level(&theta, &phi).unwrap();
        let brute = (1..200).find_map(|n| solve_character(&theta, &phi, n).unwrap().map(|m| (n, m)));
        assert_eq!(got, brute);
    }

    #[test]
    fn to_radians_examples() {
        let b = basis();
        assert_eq!(Angle::zero(&b).to_radians(), 0.0);
        assert!((Angle::turns(&b, r(1, 2)).to_radians() - std::f64::consts::PI).abs() < 1e-15);
        let direct = std::f64::consts::TAU * (2f64.sqrt() - 1.0);
        assert!((s(&b, "s1").to_radians() - direct).abs() < 1e-12);
    }

    #[test]
    fn phase_eq_reduces_constant_term() {
        let b = basis();
        let a = &s(&b, "s2") + &Angle::turns(&b, r(7, 3));
        let c = &s(&b, "s2") + &Angle::turns(&b, r(-2, 3));
        assert!(a.phase_eq(&c));
        assert_ne!(a, c);
        assert_eq!(a.reduced(), c.reduced());
    }

    #[test]
    fn phase_relation_finds_integer_combinations() {
        let b = basis();
        let s1 = s(&b, "s1");
        let s2 = s(&b, "s2");
        // 1/2 + 2·s1 − 3·s2 + t1·s1 + t2·s2 + t3·(1/4) trivial ⇒ t1 = −2, t2 = 3, t3 ≡ 2 (mod 4)
        let base = &(&Angle::turns(&b, r(1, 2)) + &s1.scale(2)) - &s2.scale(3);
        let sol = solve_phase_relation(&base, &[s1.clone(), s2.clone(), Angle::turns(&b, r(1, 4))]).unwrap().unwrap();
        assert_eq!(&sol.particular[..2], &[-2, 3]);
        assert_eq!(sol.particular[2].rem_euclid(4), 2);
        assert_eq!(sol.kernel.len(), 1);
        assert_eq!(sol.kernel[0][..2], [0, 0]);
        assert_eq!(sol.kernel[0][2].abs(), 4);
        assert!(solve_phase_relation(&s(&b, "s3"), &[s1, s2]).unwrap().is_none());
    }

    #[test]
    fn order_of_roots_of_unity() {
        let b = basis();
        assert_eq!(Angle::turns(&b, r(5, 6)).order(), Some(6));
        assert_eq!(Angle::turns(&b, r(2, 1)).order(), Some(1));
        assert_eq!(s(&b, "s3").order(), None);
    }
}
