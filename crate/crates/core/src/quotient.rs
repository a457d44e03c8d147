//! Quotient-ring basis selection, border bases, and formal multiplication
//! matrices.
//!
//! Given an evaluation matrix whose columns are indexed by monomials in
//! graded order (rows evaluate a basis of kernel functionals), a monomial
//! basis of the quotient ring is a maximum independent column set. The
//! greedy scan keeps the selected set closed under division; Gauss-Jordan
//! pivoting is the cross-check alternative. Border monomials are then
//! projected onto the basis span by least squares, which yields the border
//! basis and the multiplication matrices.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::{lstsq, numeric_rank, rref_partial_pivot, DenseMatrix, RankTolerance};
use crate::poly::{border, is_connected_to_1, is_division_closed, Monomial, Polynomial};

/// A monomial basis of the quotient ring together with the evaluation
/// matrix it was selected from.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    /// The basis monomials, in graded order.
    pub monomials: Vec<Monomial>,
    /// Column positions of the basis inside `column_monomials`.
    pub indices: Vec<usize>,
    /// Evaluation matrix: rows are kernel functionals, columns follow
    /// `column_monomials`.
    pub y: DenseMatrix,
    /// Labels of the columns of `y` (all monomials of degree <= s).
    pub column_monomials: Vec<Monomial>,
    /// Largest singular value of `y` (scale for residual gates).
    pub sigma_max: f64,
    /// Whether the selection is closed under division.
    pub division_closed: bool,
    /// Condition estimate of the restriction of `y` to the basis columns.
    pub basis_condition: f64,
}

impl QuotientBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial_set(&self) -> BTreeSet<Monomial> {
        self.monomials.iter().cloned().collect()
    }

    fn column(&self, idx: usize) -> Vec<f64> {
        (0..self.y.rows).map(|r| self.y.get(r, idx)).collect()
    }

    /// The `N x |B|` evaluation block of the basis columns.
    pub fn basis_block(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.y.rows, self.indices.len());
        for (c, &idx) in self.indices.iter().enumerate() {
            for r in 0..self.y.rows {
                out.set(r, c, self.y.get(r, idx));
            }
        }
        out
    }
}

fn finish_basis(
    y: &DenseMatrix,
    columns: &[Monomial],
    picked: Vec<usize>,
    sigma_max: f64,
    tol: &RankTolerance,
) -> Result<QuotientBasis> {
    let monomials: Vec<Monomial> = picked.iter().map(|&i| columns[i].clone()).collect();
    let set: BTreeSet<Monomial> = monomials.iter().cloned().collect();
    if !is_connected_to_1(&set) {
        return Err(Error::NotConnectedTo1(format!(
            "{{{}}}",
            monomials
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    let division_closed = is_division_closed(&set);
    let mut qb = QuotientBasis {
        monomials,
        indices: picked,
        y: y.clone(),
        column_monomials: columns.to_vec(),
        sigma_max,
        division_closed,
        basis_condition: 1.0,
    };
    let block = qb.basis_block();
    if !block.is_empty() {
        let d = numeric_rank(&block, tol)?;
        let smin = d
            .singular_values
            .iter()
            .cloned()
            .filter(|&v| v > 0.0)
            .fold(f64::INFINITY, f64::min);
        qb.basis_condition = if smin.is_finite() && smin > 0.0 {
            d.singular_values[0] / smin
        } else {
            f64::INFINITY
        };
    }
    Ok(qb)
}

/// Greedy basis selection: scan columns in graded order and admit a column
/// when it stays independent of the admitted ones at the rank tolerance.
/// Only the first `admissible` columns (degree <= s-1) are candidates.
pub fn select_basis_greedy(
    y: &DenseMatrix,
    columns: &[Monomial],
    admissible: usize,
    tol: &RankTolerance,
) -> Result<QuotientBasis> {
    assert_eq!(y.cols, columns.len());
    let decision = numeric_rank(y, tol)?;
    let sigma_max = decision.singular_values.first().cloned().unwrap_or(0.0);
    let tau = tol.threshold(sigma_max, y.rows.max(y.cols));

    // modified Gram-Schmidt with one reorthogonalization pass
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut picked = Vec::new();
    for idx in 0..admissible.min(y.cols) {
        let mut col: Vec<f64> = (0..y.rows).map(|r| y.get(r, idx)).collect();
        for _ in 0..2 {
            for q in &ortho {
                let dot: f64 = q.iter().zip(&col).map(|(a, b)| a * b).sum();
                for (c, qi) in col.iter_mut().zip(q) {
                    *c -= dot * qi;
                }
            }
        }
        let norm: f64 = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > tau {
            for c in col.iter_mut() {
                *c /= norm;
            }
            ortho.push(col);
            picked.push(idx);
        }
    }
    finish_basis(y, columns, picked, sigma_max, tol)
}

/// Pivot-based selection: Gauss-Jordan with partial pivoting on the full
/// matrix; the pivot columns form the basis. Pivots falling outside the
/// admissible (degree <= s-1) prefix mean the stopping conditions were
/// numerically false.
pub fn select_basis_pivots(
    y: &DenseMatrix,
    columns: &[Monomial],
    admissible: usize,
    tol: &RankTolerance,
) -> Result<QuotientBasis> {
    assert_eq!(y.cols, columns.len());
    let decision = numeric_rank(y, tol)?;
    let sigma_max = decision.singular_values.first().cloned().unwrap_or(0.0);
    let (_, pivots) = rref_partial_pivot(y, tol);
    if pivots.len() != decision.rank {
        // elimination and SVD disagree near the tolerance; SVD wins for
        // dimension counts, the pivot set is still used for the basis
        eprintln!(
            "warning: Gauss-Jordan found {} pivots but the SVD rank is {}",
            pivots.len(),
            decision.rank
        );
    }
    if let Some(&bad) = pivots.iter().find(|&&p| p >= admissible) {
        return Err(Error::Other(format!(
            "pivot column {} ({}) exceeds the degree bound for a quotient basis",
            bad, columns[bad]
        )));
    }
    finish_basis(y, columns, pivots, sigma_max, tol)
}

/// Border basis: rewriting rules `f_m = m - phi(m)` for all border
/// monomials of the basis.
#[derive(Clone, Debug)]
pub struct BorderBasis {
    /// `m -> f_m`, keyed by the border monomial.
    pub elements: BTreeMap<Monomial, Polynomial>,
    /// Worst least-squares residual over the border projections.
    pub max_residual: f64,
}

impl BorderBasis {
    pub fn polynomials(&self) -> impl Iterator<Item = &Polynomial> {
        self.elements.values()
    }

    /// `phi(m) = m - f_m`, the projection of a border monomial onto the
    /// basis span.
    pub fn projection(&self, m: &Monomial) -> Option<Polynomial> {
        self.elements
            .get(m)
            .map(|f| Polynomial::monomial(m.clone(), 1.0).sub(f))
    }
}

/// Project every border monomial of the basis onto the basis span by least
/// squares on the evaluation matrix. Residuals beyond `10 * tau * sigma_max`
/// mean the dimension conditions were numerically false.
pub fn border_basis(qb: &QuotientBasis, s: usize, tol: &RankTolerance) -> Result<BorderBasis> {
    let bset = qb.monomial_set();
    let border_set = border(&bset);
    let col_index: BTreeMap<&Monomial, usize> = qb
        .column_monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let tau = tol.threshold(qb.sigma_max, qb.y.rows.max(qb.y.cols));
    let bound = 10.0 * tau * qb.sigma_max.max(1.0);
    let block = qb.basis_block();

    let mut elements = BTreeMap::new();
    let mut max_residual: f64 = 0.0;
    for m in border_set {
        if m.degree() as usize > s {
            return Err(Error::Other(format!(
                "border monomial {} exceeds degree {}",
                m, s
            )));
        }
        let idx = *col_index.get(&m).expect("border monomial within columns");
        let target = qb.column(idx);
        let (coeffs, residual) = lstsq(&block, &target, tol);
        if residual > bound {
            return Err(Error::BorderResidual {
                monomial: m.to_string(),
                residual,
                bound,
            });
        }
        max_residual = max_residual.max(residual);
        let mut f = Polynomial::monomial(m.clone(), 1.0);
        for (b, &c) in qb.monomials.iter().zip(&coeffs) {
            f.add_term(b.clone(), -c);
        }
        f.drop_small();
        elements.insert(m, f);
    }
    Ok(BorderBasis {
        elements,
        max_residual,
    })
}

/// The formal multiplication matrices over the basis, with their pairwise
/// commutativity error.
#[derive(Clone, Debug)]
pub struct MultiplicationSystem {
    /// One `|B| x |B|` matrix per variable.
    pub matrices: Vec<DenseMatrix>,
    /// `max_{i,j} |X_i X_j - X_j X_i|_inf`.
    pub commutativity_error: f64,
}

impl MultiplicationSystem {
    pub fn max_norm(&self) -> f64 {
        self.matrices
            .iter()
            .map(|x| x.max_abs())
            .fold(0.0f64, f64::max)
    }
}

/// Build the multiplication matrices from the basis and its border basis.
/// The column of `X_i` at `b` holds the coordinates of `x_i * b`: a unit
/// vector when it stays in the basis, the border projection otherwise.
pub fn multiplication_matrices(
    qb: &QuotientBasis,
    bb: &BorderBasis,
) -> Result<MultiplicationSystem> {
    let nb = qb.len();
    if nb == 0 {
        return Ok(MultiplicationSystem {
            matrices: Vec::new(),
            commutativity_error: 0.0,
        });
    }
    let n = qb.monomials[0].num_vars();
    let pos: BTreeMap<&Monomial, usize> = qb
        .monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut matrices = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = DenseMatrix::zeros(nb, nb);
        for (col, b) in qb.monomials.iter().enumerate() {
            let shifted = b.mul_var(i);
            if let Some(&row) = pos.get(&shifted) {
                x.set(row, col, 1.0);
            } else {
                let phi = bb.projection(&shifted).ok_or_else(|| {
                    Error::Other(format!(
                        "monomial {} is neither in the basis nor its border",
                        shifted
                    ))
                })?;
                for (m, c) in phi.terms() {
                    let row = *pos.get(m).ok_or_else(|| {
                        Error::Other(format!("projection of {} leaves the basis span", shifted))
                    })?;
                    x.set(row, col, c);
                }
            }
        }
        matrices.push(x);
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let ab = matrices[i].matmul(&matrices[j]);
            let ba = matrices[j].matmul(&matrices[i]);
            worst = worst.max(ab.sub(&ba).max_abs());
        }
    }
    Ok(MultiplicationSystem {
        matrices,
        commutativity_error: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{monomials_up_to, MonomialBasis};

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn tol() -> RankTolerance {
        RankTolerance::default()
    }

    #[test]
    fn greedy_single_row_of_ones() {
        let columns = monomials_up_to(2, 1);
        let y = DenseMatrix::from_rows(vec![vec![1.0, 1.0, 1.0]]);
        let qb = select_basis_greedy(&y, &columns, 3, &tol()).unwrap();
        assert_eq!(qb.monomials, vec![m(&[0, 0])]);
        assert!(qb.division_closed);
    }

    #[test]
    fn pivots_identity() {
        let columns = monomials_up_to(2, 1);
        let y = DenseMatrix::identity(3);
        let qb = select_basis_pivots(&y, &columns, 3, &tol()).unwrap();
        assert_eq!(qb.monomials.len(), 3);
        assert_eq!(qb.indices, vec![0, 1, 2]);
    }

    #[test]
    fn pivots_rank_one_all_ones() {
        let columns = monomials_up_to(2, 1);
        let y = DenseMatrix::from_rows(vec![vec![1.0; 3], vec![1.0; 3]]);
        let qb = select_basis_pivots(&y, &columns, 3, &tol()).unwrap();
        assert_eq!(qb.monomials, vec![m(&[0, 0])]);
    }

    #[test]
    fn disconnected_selection_rejected() {
        // columns 1, x1, x2 with a kernel that skips the constant
        let columns = monomials_up_to(2, 1);
        let y = DenseMatrix::from_rows(vec![vec![0.0, 1.0, 0.0]]);
        // only x1 is independent; {x1} is not connected to 1
        assert!(select_basis_greedy(&y, &columns, 3, &tol()).is_err());
    }

    // two-point evaluation setup for the univariate ideal (x^2 - 1)
    fn univariate_two_point() -> (DenseMatrix, Vec<Monomial>) {
        let columns = monomials_up_to(1, 2);
        // rows: evaluation at +1 and at -1 on (1, x, x^2)
        let y = DenseMatrix::from_rows(vec![vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 1.0]]);
        (y, columns)
    }

    #[test]
    fn univariate_border_basis() {
        let (y, columns) = univariate_two_point();
        let qb = select_basis_greedy(&y, &columns, columns.len(), &tol()).unwrap();
        assert_eq!(qb.monomials, vec![m(&[0]), m(&[1])]);
        let bb = border_basis(&qb, 2, &tol()).unwrap();
        assert_eq!(bb.elements.len(), 1);
        let f = bb.elements.get(&m(&[2])).unwrap();
        // f = x^2 - 1, computed from the 2-point evaluation matrix
        assert!((f.coefficient(&m(&[2])) - 1.0).abs() < 1e-12);
        assert!((f.coefficient(&m(&[0])) + 1.0).abs() < 1e-10);
        assert!(f.coefficient(&m(&[1])).abs() < 1e-10);
    }

    #[test]
    fn univariate_multiplication_matrix() {
        let (y, columns) = univariate_two_point();
        let qb = select_basis_greedy(&y, &columns, columns.len(), &tol()).unwrap();
        let bb = border_basis(&qb, 2, &tol()).unwrap();
        let ms = multiplication_matrices(&qb, &bb).unwrap();
        assert_eq!(ms.matrices.len(), 1);
        let x = &ms.matrices[0];
        // in basis {1, x}: x*1 = x, x*x = 1
        assert_eq!(x.get(1, 0), 1.0);
        assert!((x.get(0, 1) - 1.0).abs() < 1e-10);
        assert!(x.get(0, 0).abs() < 1e-10);
        assert!(x.get(1, 1).abs() < 1e-10);
        assert!(ms.commutativity_error == 0.0);
    }

    #[test]
    fn single_point_multiplication() {
        // B = {1}, borders x1, x2 projecting to constants a, b
        let columns = monomials_up_to(2, 1);
        let y = DenseMatrix::from_rows(vec![vec![1.0, 0.5, -0.25]]);
        let qb = select_basis_greedy(&y, &columns, 1, &tol()).unwrap();
        assert_eq!(qb.monomials, vec![m(&[0, 0])]);
        let bb = border_basis(&qb, 1, &tol()).unwrap();
        let ms = multiplication_matrices(&qb, &bb).unwrap();
        assert_eq!(ms.matrices.len(), 2);
        assert!((ms.matrices[0].get(0, 0) - 0.5).abs() < 1e-12);
        assert!((ms.matrices[1].get(0, 0) + 0.25).abs() < 1e-12);
        assert_eq!(ms.commutativity_error, 0.0);
    }

    #[test]
    fn phi_is_identity_on_basis() {
        let (y, columns) = univariate_two_point();
        let qb = select_basis_greedy(&y, &columns, columns.len(), &tol()).unwrap();
        let bb = border_basis(&qb, 2, &tol()).unwrap();
        // border projections live in the basis span
        for f in bb.polynomials() {
            for (mono, _) in f.terms() {
                assert!(
                    qb.monomials.contains(mono) || bb.elements.contains_key(mono),
                    "{} outside basis+border",
                    mono
                );
            }
        }
    }

    #[test]
    fn greedy_cardinality_matches_rank() {
        let basis = MonomialBasis::new(2, 2);
        // random 3-row matrix of rank 3 over 6 columns
        let y = DenseMatrix::from_rows(vec![
            vec![1.0, 0.2, -0.4, 0.3, 0.1, 0.9],
            vec![0.0, 1.0, 0.7, -0.2, 0.5, 0.3],
            vec![0.5, -0.3, 1.0, 0.8, -0.6, 0.2],
        ]);
        let qb = select_basis_greedy(&y, basis.monomials(), 6, &tol()).unwrap();
        let rank = numeric_rank(&y, &tol()).unwrap().rank;
        assert_eq!(qb.len(), rank);
        let qp = select_basis_pivots(&y, basis.monomials(), 6, &tol()).unwrap();
        assert_eq!(qp.len(), rank);
    }
}
