//! Linear functionals on truncated polynomial spaces, moment matrices, and
//! the coefficient-matrix assembly for the prolongation systems.
//!
//! A functional is stored as its value vector over the graded monomial
//! basis. The kernel of the coefficient matrix of a polynomial set, read
//! row-wise in that basis, is exactly the space of functionals vanishing on
//! the set, which is what every dimension count in the solver is about.

use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, DenseMatrix, RankTolerance};

fn row_norm(row: &[f64]) -> f64 {
    row.iter().map(|v| v * v).sum::<f64>().sqrt()
}
use crate::poly::{
    monomials_up_to, MonomialBasis, PolySystem, Polynomial, ProlongedGenerator,
};

/// A linear functional on polynomials of degree at most `order`, stored as
/// `y_alpha = L(x^alpha)` over the graded basis.
#[derive(Clone, Debug)]
pub struct LinearFunctional {
    n: usize,
    order: usize,
    values: Vec<f64>,
}

impl LinearFunctional {
    pub fn new(n: usize, order: usize, values: Vec<f64>) -> Self {
        let expect = MonomialBasis::new(n, order).len();
        assert_eq!(values.len(), expect, "value vector length mismatch");
        LinearFunctional { n, order, values }
    }

    pub fn zero(n: usize, order: usize) -> Self {
        let len = MonomialBasis::new(n, order).len();
        LinearFunctional {
            n,
            order,
            values: vec![0.0; len],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Bilinear pairing `L(p)` for `deg p <= order`.
    pub fn apply(&self, p: &Polynomial, basis: &MonomialBasis) -> Result<f64> {
        let mut acc = 0.0;
        for (m, c) in p.terms() {
            let idx = basis.index_of(m).ok_or(Error::MomentOrder {
                s: m.degree() as usize,
                t: self.order,
            })?;
            acc += c * self.values[idx];
        }
        Ok(acc)
    }

    /// Truncation to the degree-`s` prefix of the basis.
    pub fn project(&self, s: usize) -> LinearFunctional {
        assert!(s <= self.order);
        let len = MonomialBasis::new(self.n, s).len();
        LinearFunctional {
            n: self.n,
            order: s,
            values: self.values[..len].to_vec(),
        }
    }
}

/// Moment matrix `M_s(L)`: symmetric, indexed by monomials of degree at
/// most `s`, with entry `(alpha, beta) = y_{alpha+beta}`.
pub fn moment_matrix(l: &LinearFunctional, s: usize) -> Result<DenseMatrix> {
    if 2 * s > l.order() {
        return Err(Error::MomentOrder { s, t: l.order() });
    }
    let basis_t = MonomialBasis::new(l.num_vars(), l.order());
    let rows = monomials_up_to(l.num_vars(), s);
    let dim = rows.len();
    let mut m = DenseMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let idx = basis_t
                .index_of(&rows[i].mul(&rows[j]))
                .expect("product stays within order");
            let v = l.values()[idx];
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    Ok(m)
}

/// Coefficient matrix of a polynomial list: one row per polynomial over the
/// graded basis columns.
pub fn coefficient_matrix(polys: &[Polynomial], basis: &MonomialBasis) -> Result<DenseMatrix> {
    let mut m = DenseMatrix::zeros(polys.len(), basis.len());
    for (i, p) in polys.iter().enumerate() {
        let v = p.coefficient_vector(basis)?;
        m.row_mut(i).copy_from_slice(&v);
    }
    Ok(m)
}

/// The prolongation set `H_t` together with its coefficient matrix.
pub struct HtSystem {
    pub t: usize,
    pub generators: Vec<ProlongedGenerator>,
    pub matrix: DenseMatrix,
}

pub fn h_system(sys: &PolySystem, t: usize) -> Result<HtSystem> {
    let basis = MonomialBasis::new(sys.num_vars(), t);
    let generators = crate::poly::prolong_generators(sys, t)?;
    let polys: Vec<Polynomial> = generators.iter().map(|g| g.poly.clone()).collect();
    let matrix = coefficient_matrix(&polys, &basis)?;
    Ok(HtSystem {
        t,
        generators,
        matrix,
    })
}

/// `S_t = { x^alpha g : |alpha| <= floor(t/2), g in kernel basis }`.
/// Every kernel polynomial must have degree at most `floor(t/2)`.
pub fn build_st(kernel_polys: &[Polynomial], t: usize) -> Result<Vec<Polynomial>> {
    if kernel_polys.is_empty() {
        return Ok(Vec::new());
    }
    let half = t / 2;
    for g in kernel_polys {
        if g.degree() > half {
            return Err(Error::KernelDegree {
                deg: g.degree(),
                max: half,
            });
        }
    }
    let n = kernel_polys[0].num_vars();
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for g in kernel_polys {
        for alpha in monomials_up_to(n, half) {
            let p = g.mul_monomial(&alpha);
            // cheap exact dedup; numeric span dedup happens at assembly
            let key: Vec<(Vec<u32>, u64)> = p
                .terms()
                .map(|(m, c)| (m.exponents().to_vec(), c.to_bits()))
                .collect();
            if seen.insert(key) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Which polynomial set represents the ideal side of the computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum VarietyMode {
    /// `G_t = H_t`: functionals vanishing on the ideal prolongations only.
    Complex,
    /// `G_t = H_t ∪ S_t`, adding real-radical kernel prolongations.
    Real,
}

/// The stacked coefficient system for one prolongation order.
pub struct GtSystem {
    pub t: usize,
    pub n: usize,
    /// Basis of degree `t` (columns of `h_rows`/`s_rows`).
    pub basis_t: MonomialBasis,
    /// Basis of degree `t + 1` (columns of `g_plus`).
    pub basis_t1: MonomialBasis,
    /// Coefficient rows of `H_t`.
    pub h_rows: DenseMatrix,
    /// Deduplicated coefficient rows of `S_t` (empty in complex mode).
    pub s_rows: DenseMatrix,
    /// Coefficient rows of `(H_t ∪ S_t)^+` over the degree `t+1` basis.
    pub g_plus: DenseMatrix,
}

impl GtSystem {
    /// The stacked `[H_t; S_t]` matrix.
    pub fn g_matrix(&self) -> DenseMatrix {
        self.h_rows.vstack(&self.s_rows)
    }
}

/// Assemble the coefficient system for order `t`.
///
/// In real mode the kernel polynomials are prolonged into `S_t`, whose rows
/// are deduplicated by a reduced row echelon pass before stacking (the span
/// is unchanged). `g_plus` holds the one-degree prolongation of every
/// stacked row: the row itself zero-padded, plus each variable shift.
pub fn assemble_g(
    sys: &PolySystem,
    t: usize,
    kernel_polys: &[Polynomial],
    mode: VarietyMode,
    tol: &RankTolerance,
) -> Result<GtSystem> {
    let n = sys.num_vars();
    let basis_t = MonomialBasis::new(n, t);
    let basis_t1 = MonomialBasis::new(n, t + 1);
    let ht = h_system(sys, t)?;
    let h_rows = ht.matrix;

    let s_rows = match mode {
        VarietyMode::Complex => DenseMatrix::zeros(0, basis_t.len()),
        VarietyMode::Real => {
            let st = build_st(kernel_polys, t)?;
            if st.is_empty() {
                DenseMatrix::zeros(0, basis_t.len())
            } else {
                // deduplicate by row compression: the triangular factor of
                // an orthogonal reduction keeps the span without the entry
                // growth a pivot-normalized elimination can suffer
                let raw = coefficient_matrix(&st, &basis_t)?;
                let r = crate::linalg::qr_row_compress(&raw);
                let scale = (0..r.rows)
                    .map(|i| row_norm(r.row(i)))
                    .fold(0.0f64, f64::max);
                let cut = tol.threshold(scale, raw.rows.max(raw.cols));
                let mut kept: Vec<Vec<f64>> = Vec::new();
                for i in 0..r.rows {
                    let norm = row_norm(r.row(i));
                    if norm > cut {
                        kept.push(r.row(i).iter().map(|v| v / norm).collect());
                    }
                }
                if kept.is_empty() {
                    DenseMatrix::zeros(0, basis_t.len())
                } else {
                    DenseMatrix::from_rows(kept)
                }
            }
        }
    };

    let stacked = h_rows.vstack(&s_rows);
    let g_plus = prolong_rows(&stacked, &basis_t, &basis_t1);

    Ok(GtSystem {
        t,
        n,
        basis_t,
        basis_t1,
        h_rows,
        s_rows,
        g_plus,
    })
}

// One-degree prolongation at the coefficient level: each row padded to the
// larger basis, followed by its n variable shifts.
fn prolong_rows(
    rows: &DenseMatrix,
    basis_t: &MonomialBasis,
    basis_t1: &MonomialBasis,
) -> DenseMatrix {
    let n = basis_t.n;
    let cols_t = basis_t.len();
    let cols_t1 = basis_t1.len();
    // column shift maps: shift[i][j] = index of x_i * m_j in the big basis
    let mut shifts = vec![vec![0usize; cols_t]; n];
    for j in 0..cols_t {
        let m = basis_t.at(j);
        for (i, shift) in shifts.iter_mut().enumerate() {
            shift[j] = basis_t1
                .index_of(&m.mul_var(i))
                .expect("shifted monomial inside degree t+1");
        }
    }
    let mut out = DenseMatrix::zeros(rows.rows * (n + 1), cols_t1);
    for r in 0..rows.rows {
        let src = rows.row(r);
        out.row_mut(r)[..cols_t].copy_from_slice(src);
        for i in 0..n {
            let dst_index = rows.rows * (i + 1) + r;
            let dst = out.row_mut(dst_index);
            for j in 0..cols_t {
                let v = src[j];
                if v != 0.0 {
                    dst[shifts[i][j]] = v;
                }
            }
        }
    }
    out
}

/// Flat-extension certificate: `rank M_s(L) == rank M_{s-1}(L)`.
/// The extension itself is never constructed; this is an invariant check.
pub fn flat_extension_check(l: &LinearFunctional, s: usize, tol: &RankTolerance) -> Result<bool> {
    if s == 0 {
        return Ok(false);
    }
    let ms = moment_matrix(l, s)?;
    let ms1 = moment_matrix(l, s - 1)?;
    let r = numeric_rank(&ms, tol)?.rank;
    let r1 = numeric_rank(&ms1, tol)?.rank;
    Ok(r == r1)
}
