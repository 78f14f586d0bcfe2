use crate::linalg::matrix::Matrix;

/// Smith form `P * M * Q = D` over `Z/p^n`, with `D` diagonal and its
/// diagonal entries `p^e` in non-decreasing order of `e`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Exponent `e` of each diagonal entry `p^e`; `e = n` stands for zero.
    pub exponents: Vec<u32>,
    pub p: Matrix,
    pub p_inv: Matrix,
    pub q: Matrix,
    pub d: Matrix,
}

/// Deterministic Smith reduction: the pivot is the entry of smallest
/// valuation in the remaining block, ties broken by lowest column index and
/// then lowest row index.
pub fn smith_form(m: &Matrix) -> SmithForm {
    let ring = m.ring();
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut p = Matrix::identity(ring, rows);
    let mut p_inv = Matrix::identity(ring, rows);
    let mut q = Matrix::identity(ring, cols);
    let mut exponents = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for j in t..cols {
            for i in t..rows {
                let x = d.get(i, j);
                if x == 0 {
                    continue;
                }
                let key = (ring.valuation(x), j, i);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((v, j, i)) = best else {
            exponents.extend(std::iter::repeat_n(ring.n(), rows.min(cols) - t));
            break;
        };
        if i != t {
            d.swap_rows(i, t);
            p.swap_rows(i, t);
            p_inv.swap_cols(i, t);
        }
        if j != t {
            d.swap_cols(j, t);
            q.swap_cols(j, t);
        }
        let (_, unit) = ring.unit_part(d.get(t, t));
        let inv = ring.inv(unit).expect("unit");
        d.scale_row(t, inv);
        p.scale_row(t, inv);
        p_inv.scale_col(t, unit);
        let pv = ring.p_power(v);
        for i in t + 1..rows {
            let e = d.get(i, t);
            if e == 0 {
                continue;
            }
            let c = ring.neg(e / pv);
            d.add_row_multiple(i, t, c);
            p.add_row_multiple(i, t, c);
            // Inverse of "row i += c row t" is "col t -= c col i" on P^-1.
            p_inv.add_col_multiple(t, i, ring.neg(c));
        }
        for j in t + 1..cols {
            let e = d.get(t, j);
            if e == 0 {
                continue;
            }
            let c = ring.neg(e / pv);
            d.add_col_multiple(j, t, c);
            q.add_col_multiple(j, t, c);
        }
        exponents.push(v);
    }
    SmithForm { exponents, p, p_inv, q, d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::Ring;

    #[test]
    fn diagonalizes_and_transforms_are_consistent() {
        let r = Ring::new(3, 3).unwrap();
        let m = Matrix::from_rows(r, &[vec![9, 3, 6], vec![18, 0, 3], vec![0, 27, 1]]);
        let s = smith_form(&m);
        let pmq = s.p.mul(&m).unwrap().mul(&s.q).unwrap();
        assert_eq!(pmq, s.d);
        assert_eq!(s.p.mul(&s.p_inv).unwrap(), Matrix::identity(r, 3));
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0);
                }
            }
        }
        let mut sorted = s.exponents.clone();
        sorted.sort();
        assert_eq!(sorted, s.exponents);
    }

    #[test]
    fn zero_matrix_has_full_exponents() {
        let r = Ring::new(5, 2).unwrap();
        let s = smith_form(&Matrix::zeros(r, 2, 3));
        assert_eq!(s.exponents, vec![2, 2]);
    }
}
