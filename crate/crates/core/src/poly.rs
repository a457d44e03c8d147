//! Sparse multivariate monomials and polynomials over `f64`, with the fixed
//! graded ordering used to index every coefficient matrix in the solver.
//!
//! The ordering is graded lexicographic: monomials compare first by total
//! degree, ties broken so that `x1` precedes `x2` precedes `x3` within a
//! degree block (1, x1, x2, x1^2, x1*x2, x2^2, ...). All column indexing is
//! derived from this order, so results are reproducible bit-for-bit.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative magnitude below which coefficients are dropped after numeric
/// polynomial arithmetic. Exact zeros are always dropped on construction.
pub const COEFF_DROP_TOL: f64 = 1e-12;

/// A monomial `x^alpha`, stored as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        Monomial { exponents, degree }
    }

    /// The constant monomial 1 in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial::new(vec![0; n])
    }

    /// The variable `x_{i+1}` (zero-based `i`) in `n` variables.
    pub fn variable(i: usize, n: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exponents.len(), other.exponents.len());
        let exps = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            exponents: exps,
            degree: self.degree + other.degree,
        }
    }

    /// Multiply by a single variable.
    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut e = self.exponents.clone();
        e[i] += 1;
        Monomial {
            exponents: e,
            degree: self.degree + 1,
        }
    }

    /// Divide by `x_i` if possible.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exponents[i] == 0 {
            return None;
        }
        let mut e = self.exponents.clone();
        e[i] -= 1;
        Some(Monomial {
            exponents: e,
            degree: self.degree - 1,
        })
    }

    /// True when `self` divides `other` coordinate-wise.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    /// Evaluate at a complex point.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (i, &e) in self.exponents.iter().enumerate() {
            acc *= point[i].powu(e);
        }
        acc
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        let mut acc = 1.0;
        for (i, &e) in self.exponents.iter().enumerate() {
            acc *= point[i].powi(e as i32);
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Graded: degree first. Within a degree block, a lexicographically
        // larger exponent vector comes earlier (x1 before x2).
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// All monomials in `n` variables of degree at most `t`, in graded order,
/// with a reverse index for constant-time position lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub n: usize,
    pub max_degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, t: usize) -> Self {
        let monomials = monomials_up_to(n, t);
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        MonomialBasis {
            n,
            max_degree: t,
            monomials,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn at(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Number of monomials of degree at most `s` (a prefix of the basis).
    pub fn count_up_to(&self, s: usize) -> usize {
        binomial(self.n + s, s)
    }
}

/// `C(n, k)` as usize; sizes here stay far below overflow.
pub fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All exponent vectors with `|alpha| <= t` in the fixed graded order.
/// The result has `C(n + t, t)` entries.
pub fn monomials_up_to(n: usize, t: usize) -> Vec<Monomial> {
    assert!(n >= 1, "need at least one variable");
    let mut out = Vec::with_capacity(binomial(n + t, t));
    let mut current = vec![0u32; n];
    for d in 0..=t as u32 {
        emit_degree(n, d, 0, d, &mut current, &mut out);
    }
    out
}

// Emit all exponent vectors of exact total degree `d`, largest leading
// exponents first, matching the graded order's intra-degree tie-break.
fn emit_degree(
    n: usize,
    d: u32,
    pos: usize,
    remaining: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        return;
    }
    let mut e = remaining;
    loop {
        current[pos] = e;
        emit_degree(n, d, pos + 1, remaining - e, current, out);
        if e == 0 {
            break;
        }
        e -= 1;
    }
}

/// A sparse polynomial with real coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Polynomial::zero(n);
        if c != 0.0 {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn monomial(m: Monomial, c: f64) -> Self {
        let mut p = Polynomial::zero(m.num_vars());
        if c != 0.0 {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut p = Polynomial::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.degree() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if *v == 0.0 {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out.drop_small();
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        if c == 0.0 {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, &v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, &v)| (k.mul(m), v))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out.drop_small();
        out
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn differentiate(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in self.terms() {
            if let Some(d) = m.div_var(i) {
                out.add_term(d, c * m.exponents()[i] as f64);
            }
        }
        out
    }

    /// Remove coefficients below `COEFF_DROP_TOL` relative to the largest.
    pub fn drop_small(&mut self) {
        let max = self
            .terms
            .values()
            .fold(0.0f64, |acc, &c| acc.max(c.abs()));
        if max == 0.0 {
            self.terms.clear();
            return;
        }
        let cut = COEFF_DROP_TOL * max;
        self.terms.retain(|_, c| c.abs() > cut);
    }

    /// Scale so the coefficient of largest magnitude is exactly 1.
    pub fn normalized_max_coeff(&self) -> Polynomial {
        let max = self
            .terms
            .values()
            .fold(0.0f64, |acc, &c| acc.max(c.abs()));
        if max == 0.0 {
            return self.clone();
        }
        let pivot = self
            .terms
            .iter()
            .find(|(_, &c)| c.abs() == max)
            .map(|(_, &c)| c)
            .unwrap_or(1.0);
        self.scale(1.0 / pivot)
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().fold(0.0f64, |acc, &c| acc.max(c.abs()))
    }

    /// Coefficient vector over the graded basis of degree at most `t`.
    /// Fails if the degree exceeds `t`.
    pub fn coefficient_vector(&self, basis: &MonomialBasis) -> Result<Vec<f64>> {
        let mut v = vec![0.0; basis.len()];
        for (m, c) in self.terms() {
            let idx = basis.index_of(m).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "monomial {} of degree {} outside basis of degree {}",
                    m,
                    m.degree(),
                    basis.max_degree
                ))
            })?;
            v[idx] = c;
        }
        Ok(v)
    }

    /// Rebuild a polynomial from a coefficient vector over `basis`.
    pub fn from_coefficient_vector(v: &[f64], basis: &MonomialBasis) -> Polynomial {
        let mut p = Polynomial::zero(basis.n);
        for (i, &c) in v.iter().enumerate() {
            if c != 0.0 {
                p.terms.insert(basis.at(i).clone(), c);
            }
        }
        p
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.terms()
            .map(|(m, c)| m.eval_complex(point) * c)
            .sum()
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms().map(|(m, c)| m.eval(point) * c).sum()
    }

    /// Terms sorted for printing: degree blocks descending, the fixed
    /// graded order inside each block (x1^2 before x1*x2).
    fn display_terms(&self) -> Vec<(&Monomial, f64)> {
        let mut v: Vec<(&Monomial, f64)> = self.terms().collect();
        v.sort_by(|(a, _), (b, _)| {
            b.degree()
                .cmp(&a.degree())
                .then_with(|| a.cmp(b))
        });
        v
    }

    /// Leading term: the grlex-largest monomial with nonzero coefficient.
    pub fn leading(&self) -> Option<(&Monomial, f64)> {
        self.display_terms().into_iter().next()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.display_terms() {
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_coeff(mag))?;
            } else if (mag - 1.0).abs() < 1e-12 {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", fmt_coeff(mag), m)?;
            }
        }
        Ok(())
    }
}

fn fmt_coeff(c: f64) -> String {
    if (c - c.round()).abs() < 1e-9 && c.abs() < 1e12 {
        format!("{}", c.round() as i64)
    } else {
        format!("{}", c)
    }
}

/// A system of polynomial generators.
#[derive(Clone, Debug)]
pub struct PolySystem {
    n: usize,
    generators: Vec<Polynomial>,
    max_degree: usize,
}

impl PolySystem {
    pub fn new(n: usize, generators: Vec<Polynomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("system has no generators".into()));
        }
        if let Some(p) = generators.iter().find(|p| p.is_zero()) {
            let _ = p;
            return Err(Error::InvalidInput("zero generator in system".into()));
        }
        if generators.iter().any(|p| p.num_vars() != n) {
            return Err(Error::InvalidInput(
                "generator variable count mismatch".into(),
            ));
        }
        let max_degree = generators.iter().map(|p| p.degree()).max().unwrap();
        Ok(PolySystem {
            n,
            generators,
            max_degree,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// `D`, the maximum generator degree.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
}

/// A generator prolongation `x^alpha * h_j`, keeping its provenance so
/// reports can trace each coefficient row back to its source.
#[derive(Clone, Debug)]
pub struct ProlongedGenerator {
    pub multiplier: Monomial,
    pub generator_index: usize,
    pub poly: Polynomial,
}

/// All prolongations `x^alpha h_j` with `|alpha| + deg(h_j) <= t`.
pub fn prolong_generators(sys: &PolySystem, t: usize) -> Result<Vec<ProlongedGenerator>> {
    if t < sys.max_degree() {
        return Err(Error::OrderBelowDegree {
            t,
            d: sys.max_degree(),
        });
    }
    let n = sys.num_vars();
    let mut out = Vec::new();
    for (j, h) in sys.generators().iter().enumerate() {
        let slack = t - h.degree();
        for alpha in monomials_up_to(n, slack) {
            out.push(ProlongedGenerator {
                poly: h.mul_monomial(&alpha),
                multiplier: alpha,
                generator_index: j,
            });
        }
    }
    Ok(out)
}

/// One-degree prolongation `S ∪ x1 S ∪ ... ∪ xn S` of a polynomial list,
/// input order first, then variable order; exact duplicates removed.
pub fn one_step_prolongation(s: &[Polynomial]) -> Vec<Polynomial> {
    assert!(!s.is_empty(), "prolongation of an empty set");
    let n = s[0].num_vars();
    let mut out: Vec<Polynomial> = Vec::with_capacity(s.len() * (n + 1));
    let push_unique = |p: Polynomial, out: &mut Vec<Polynomial>| {
        if !out.contains(&p) {
            out.push(p);
        }
    };
    for p in s {
        push_unique(p.clone(), &mut out);
    }
    for i in 0..n {
        let xi = Monomial::variable(i, n);
        for p in s {
            push_unique(p.mul_monomial(&xi), &mut out);
        }
    }
    out
}

/// One-degree prolongation of a monomial set.
pub fn prolong_monomials(b: &BTreeSet<Monomial>) -> BTreeSet<Monomial> {
    let mut out = b.clone();
    if let Some(first) = b.iter().next() {
        let n = first.num_vars();
        for m in b {
            for i in 0..n {
                out.insert(m.mul_var(i));
            }
        }
    }
    out
}

/// Border monomials `∂B = B⁺ \ B`.
pub fn border(b: &BTreeSet<Monomial>) -> BTreeSet<Monomial> {
    assert!(!b.is_empty(), "border of an empty set");
    prolong_monomials(b).difference(b).cloned().collect()
}

/// True when `B` is connected to 1: it contains 1 and every other member
/// has a one-variable divisor inside `B`. Following such divisors strictly
/// lowers degree, so the local test certifies a full chain down to 1.
pub fn is_connected_to_1(b: &BTreeSet<Monomial>) -> bool {
    let one = match b.iter().next() {
        Some(m) => Monomial::one(m.num_vars()),
        None => return false,
    };
    if !b.contains(&one) {
        return false;
    }
    b.iter().all(|m| {
        m.is_one()
            || (0..m.num_vars()).any(|i| m.div_var(i).map(|d| b.contains(&d)).unwrap_or(false))
    })
}

/// True when `B` is closed under division.
pub fn is_division_closed(b: &BTreeSet<Monomial>) -> bool {
    b.iter().all(|m| {
        (0..m.num_vars()).all(|i| match m.div_var(i) {
            Some(d) => b.contains(&d),
            None => true,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn graded_order_sequence() {
        let ms = monomials_up_to(2, 2);
        let expected = vec![
            m(&[0, 0]),
            m(&[1, 0]),
            m(&[0, 1]),
            m(&[2, 0]),
            m(&[1, 1]),
            m(&[0, 2]),
        ];
        assert_eq!(ms, expected);
    }

    #[test]
    fn univariate_count() {
        let ms = monomials_up_to(1, 2);
        assert_eq!(ms.len(), 3);
        assert_eq!(ms, vec![m(&[0]), m(&[1]), m(&[2])]);
    }

    #[test]
    fn bivariate_count_is_six() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
    }

    #[test]
    fn trivariate_degree_three_count() {
        // Independent oracle: brute-force enumeration of exponent triples.
        let mut count = 0;
        for a in 0..=3u32 {
            for b in 0..=3u32 {
                for c in 0..=3u32 {
                    if a + b + c <= 3 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 20);
        assert_eq!(monomials_up_to(3, 3).len(), 20);
    }

    #[test]
    fn count_formula_matches_binomial() {
        for n in 1..=5 {
            for t in 0..=8 {
                assert_eq!(
                    monomials_up_to(n, t).len(),
                    binomial(n + t, t),
                    "n={} t={}",
                    n,
                    t
                );
            }
        }
    }

    #[test]
    fn basis_index_roundtrip() {
        let basis = MonomialBasis::new(3, 4);
        for (i, mono) in basis.monomials().iter().enumerate() {
            assert_eq!(basis.index_of(mono), Some(i));
        }
        assert_eq!(basis.count_up_to(2), 10);
    }

    fn ex45_system() -> PolySystem {
        // x1^2, x2^2, x1*x2 in two variables
        PolySystem::new(
            2,
            vec![
                Polynomial::monomial(m(&[2, 0]), 1.0),
                Polynomial::monomial(m(&[0, 2]), 1.0),
                Polynomial::monomial(m(&[1, 1]), 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn prolong_at_base_degree_returns_generators() {
        let sys = ex45_system();
        let h2 = prolong_generators(&sys, 2).unwrap();
        assert_eq!(h2.len(), 3);
        for pg in &h2 {
            assert!(pg.multiplier.is_one());
        }
    }

    #[test]
    fn prolong_univariate_no_room() {
        let sys = PolySystem::new(
            1,
            vec![Polynomial::from_terms(
                1,
                [(m(&[1]), 1.0), (m(&[0]), -1.0)],
            )],
        )
        .unwrap();
        let h1 = prolong_generators(&sys, 1).unwrap();
        assert_eq!(h1.len(), 1);
    }

    #[test]
    fn prolong_circle_to_degree_three() {
        let sys = PolySystem::new(
            2,
            vec![Polynomial::from_terms(
                2,
                [(m(&[2, 0]), 1.0), (m(&[0, 2]), 1.0)],
            )],
        )
        .unwrap();
        let h3 = prolong_generators(&sys, 3).unwrap();
        assert_eq!(h3.len(), 3);
        let polys: Vec<_> = h3.iter().map(|p| &p.poly).collect();
        let expect = Polynomial::from_terms(2, [(m(&[3, 0]), 1.0), (m(&[1, 2]), 1.0)]);
        assert!(polys.contains(&&expect));
    }

    #[test]
    fn prolong_below_degree_errors() {
        let sys = ex45_system();
        assert!(prolong_generators(&sys, 1).is_err());
    }

    #[test]
    fn prolongations_nest_as_sets() {
        let sys = ex45_system();
        for t in 2..5 {
            let small: Vec<_> = prolong_generators(&sys, t)
                .unwrap()
                .into_iter()
                .map(|p| (p.multiplier, p.generator_index))
                .collect();
            let large: Vec<_> = prolong_generators(&sys, t + 1)
                .unwrap()
                .into_iter()
                .map(|p| (p.multiplier, p.generator_index))
                .collect();
            for key in &small {
                assert!(large.contains(key));
            }
        }
    }

    #[test]
    fn one_step_prolongation_of_constant() {
        let s = vec![Polynomial::constant(2, 1.0)];
        let sp = one_step_prolongation(&s);
        assert_eq!(sp.len(), 3);
        assert_eq!(sp[0], Polynomial::constant(2, 1.0));
        assert_eq!(sp[1], Polynomial::monomial(m(&[1, 0]), 1.0));
        assert_eq!(sp[2], Polynomial::monomial(m(&[0, 1]), 1.0));
    }

    #[test]
    fn one_step_prolongation_of_x1x2() {
        let s = vec![Polynomial::monomial(m(&[1, 1]), 1.0)];
        let sp = one_step_prolongation(&s);
        assert_eq!(sp.len(), 3);
        assert_eq!(sp[1], Polynomial::monomial(m(&[2, 1]), 1.0));
        assert_eq!(sp[2], Polynomial::monomial(m(&[1, 2]), 1.0));
    }

    #[test]
    fn border_of_one() {
        let b: BTreeSet<_> = [m(&[0, 0])].into_iter().collect();
        let db = border(&b);
        let expect: BTreeSet<_> = [m(&[1, 0]), m(&[0, 1])].into_iter().collect();
        assert_eq!(db, expect);
    }

    #[test]
    fn border_of_one_x1() {
        let b: BTreeSet<_> = [m(&[0, 0]), m(&[1, 0])].into_iter().collect();
        let db = border(&b);
        let expect: BTreeSet<_> = [m(&[0, 1]), m(&[2, 0]), m(&[1, 1])].into_iter().collect();
        assert_eq!(db, expect);
    }

    #[test]
    fn border_of_full_square() {
        // Direct set computation oracle.
        let b: BTreeSet<_> = [m(&[0, 0]), m(&[1, 0]), m(&[0, 1]), m(&[1, 1])]
            .into_iter()
            .collect();
        let db = border(&b);
        let expect: BTreeSet<_> = [m(&[2, 0]), m(&[0, 2]), m(&[2, 1]), m(&[1, 2])]
            .into_iter()
            .collect();
        assert_eq!(db, expect);
    }

    #[test]
    fn border_disjoint_and_covers_prolongation() {
        let b: BTreeSet<_> = [m(&[0, 0]), m(&[1, 0]), m(&[0, 1])].into_iter().collect();
        let db = border(&b);
        assert!(db.intersection(&b).next().is_none());
        let union: BTreeSet<_> = db.union(&b).cloned().collect();
        assert_eq!(union, prolong_monomials(&b));
    }

    #[test]
    fn connectivity_examples() {
        let yes: BTreeSet<_> = [m(&[0]), m(&[1]), m(&[2])].into_iter().collect();
        assert!(is_connected_to_1(&yes));

        let no_one: BTreeSet<_> = [m(&[1])].into_iter().collect();
        assert!(!is_connected_to_1(&no_one));

        let gap: BTreeSet<_> = [m(&[0, 0]), m(&[1, 1])].into_iter().collect();
        assert!(!is_connected_to_1(&gap));
    }

    #[test]
    fn division_closure_implies_connected() {
        let b: BTreeSet<_> = [m(&[0, 0]), m(&[1, 0]), m(&[0, 1]), m(&[1, 1])]
            .into_iter()
            .collect();
        assert!(is_division_closed(&b));
        assert!(is_connected_to_1(&b));
    }

    #[test]
    fn polynomial_vector_roundtrip() {
        let basis = MonomialBasis::new(2, 3);
        let p = Polynomial::from_terms(
            2,
            [(m(&[2, 1]), 2.5), (m(&[0, 0]), -1.0), (m(&[1, 0]), 4.0)],
        );
        let v = p.coefficient_vector(&basis).unwrap();
        assert_eq!(v.len(), basis.len());
        let q = Polynomial::from_coefficient_vector(&v, &basis);
        assert_eq!(p, q);
    }

    #[test]
    fn differentiation() {
        // d/dx1 (x1^2 x2 + 3 x1) = 2 x1 x2 + 3
        let p = Polynomial::from_terms(2, [(m(&[2, 1]), 1.0), (m(&[1, 0]), 3.0)]);
        let d = p.differentiate(0);
        assert_eq!(d.coefficient(&m(&[1, 1])), 2.0);
        assert_eq!(d.coefficient(&m(&[0, 0])), 3.0);
    }

    #[test]
    fn display_is_readable() {
        let p = Polynomial::from_terms(2, [(m(&[2, 0]), 1.0), (m(&[1, 1]), -2.0), (m(&[0, 0]), 5.0)]);
        assert_eq!(format!("{}", p), "x1^2 - 2*x1*x2 + 5");
    }
}
