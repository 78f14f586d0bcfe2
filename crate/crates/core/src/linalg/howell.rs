use crate::linalg::matrix::Matrix;
use crate::zmod::Ring;

/// Howell normal form `H` of a matrix `M` together with a unimodular
/// transform `U` such that `U * M' = H`, where `M'` is `M` padded with zero
/// rows up to `U`'s size.
///
/// Pivots are `p^v`, entries above a pivot `p^v` lie in `[0, p^v)`, and for
/// every pivot of positive valuation the annihilated row `p^(n-v) * row`
/// lies in the span of the later rows. The nonzero rows therefore determine
/// the row span canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellForm {
    h: Matrix,
    transform: Matrix,
    pivots: Vec<(usize, u32)>,
}

impl HowellForm {
    /// Full form, one row per row of the transform; rows past `rank()` are zero.
    pub fn matrix(&self) -> &Matrix {
        &self.h
    }

    pub fn transform(&self) -> &Matrix {
        &self.transform
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `(column, valuation)` for each nonzero row.
    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// Only the nonzero rows; the canonical invariant of the row span.
    pub fn nonzero_rows(&self) -> Matrix {
        let ring = self.h.ring();
        let mut out = Matrix::zeros(ring, self.rank(), self.h.cols());
        for i in 0..self.rank() {
            for j in 0..self.h.cols() {
                out.set(i, j, self.h.get(i, j));
            }
        }
        out
    }

    /// Reduces `b` (a row vector) against the row span. Returns the canonical
    /// remainder and coefficients `y` with `b = remainder + y * H`.
    pub fn reduce(&self, b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let ring = self.h.ring();
        let mut residual = b.to_vec();
        let mut coeffs = vec![0; self.h.rows()];
        for (k, &(c, v)) in self.pivots.iter().enumerate() {
            let pv = ring.p_power(v);
            let q = residual[c] / pv;
            if q == 0 {
                continue;
            }
            let neg_q = ring.neg(ring.from_u64(q));
            for (j, slot) in residual.iter_mut().enumerate() {
                let h = self.h.get(k, j);
                if h != 0 {
                    *slot = ring.add(*slot, ring.mul(neg_q, h));
                }
            }
            coeffs[k] = ring.from_u64(q);
        }
        (residual, coeffs)
    }

    /// Whether `b` lies in the row span.
    pub fn contains(&self, b: &[u64]) -> bool {
        self.reduce(b).0.iter().all(|&x| x == 0)
    }
}

/// Computes the Howell form with deterministic pivoting: in each column the
/// row of smallest valuation wins, ties going to the lowest row index.
pub fn howell_form(m: &Matrix) -> HowellForm {
    let ring = m.ring();
    let cols = m.cols();
    let start_rows = m.rows().max(cols).max(1);
    let mut a = m.pad_rows(start_rows);
    let mut u = Matrix::identity(ring, start_rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= a.rows() {
            break;
        }
        let best = (r..a.rows())
            .filter(|&i| a.get(i, c) != 0)
            .min_by_key(|&i| (ring.valuation(a.get(i, c)), i));
        let Some(best) = best else { continue };
        a.swap_rows(r, best);
        u.swap_rows(r, best);
        let (v, unit) = ring.unit_part(a.get(r, c));
        let inv = ring.inv(unit).expect("unit part is a unit");
        a.scale_row(r, inv);
        u.scale_row(r, inv);
        let pv = ring.p_power(v);
        for i in 0..a.rows() {
            if i == r {
                continue;
            }
            let e = a.get(i, c);
            if e == 0 {
                continue;
            }
            // Below the pivot every entry is divisible by p^v, so this clears
            // it; above the pivot it leaves the remainder in [0, p^v).
            let q = e / pv;
            if q == 0 {
                continue;
            }
            let neg_q = ring.neg(q);
            a.add_row_multiple(i, r, neg_q);
            u.add_row_multiple(i, r, neg_q);
        }
        if v > 0 {
            let ann = ring.p_power(ring.n() - v);
            let nonzero = (c + 1..cols).any(|j| ring.mul(ann, a.get(r, j)) != 0);
            if nonzero {
                let slot = (r + 1..a.rows()).find(|&i| a.row(i).iter().all(|&x| x == 0));
                let slot = match slot {
                    Some(s) => s,
                    None => {
                        a.push_zero_row();
                        u = grow_identity(&u);
                        a.rows() - 1
                    }
                };
                a.add_row_multiple(slot, r, ann);
                u.add_row_multiple(slot, r, ann);
            }
        }
        pivots.push((c, v));
        r += 1;
    }
    HowellForm { h: a, transform: u, pivots }
}

fn grow_identity(u: &Matrix) -> Matrix {
    let n = u.rows();
    let ring: Ring = u.ring();
    let mut out = Matrix::identity(ring, n + 1);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, u.get(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, n: u32) -> Ring {
        Ring::new(p, n).unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let r = z(3, 2);
        let hf = howell_form(&Matrix::identity(r, 2));
        assert_eq!(hf.matrix(), &Matrix::identity(r, 2));
        assert_eq!(hf.transform(), &Matrix::identity(r, 2));
    }

    #[test]
    fn triangular_input_is_canonical_already() {
        let r = z(3, 2);
        let m = Matrix::from_rows(r, &[vec![3, 0], vec![0, 1]]);
        let hf = howell_form(&m);
        assert_eq!(hf.nonzero_rows(), m);
        assert_eq!(hf.pivots(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn annihilator_rows_are_added() {
        // Row (3, 1) over Z/9: 3 * (3, 1) = (0, 3) must appear in the span.
        let r = z(3, 2);
        let m = Matrix::from_rows(r, &[vec![3, 1]]);
        let hf = howell_form(&m);
        let h = hf.nonzero_rows();
        assert_eq!(h, Matrix::from_rows(r, &[vec![3, 1], vec![0, 3]]));
        assert!(hf.contains(&[0, 3]));
        assert!(!hf.contains(&[0, 1]));
    }

    #[test]
    fn transform_relates_input_and_form() {
        let r = z(5, 2);
        let m = Matrix::from_rows(r, &[vec![5, 10, 3], vec![10, 20, 6], vec![0, 5, 0]]);
        let hf = howell_form(&m);
        let padded = m.pad_rows(hf.transform().rows());
        assert_eq!(&hf.transform().mul(&padded).unwrap(), hf.matrix());
        assert_ne!(hf.transform().det_mod_p().unwrap(), 0);
    }
}
