//! Exact Gaussian elimination over a [`Field`].

use crate::field::{Elem, Field};

/// Dense matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Submatrix on the given row and column indices.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect())
                .collect(),
        )
    }

    pub fn rank(&self, field: &Field) -> usize {
        rank(field, self.clone())
    }
}

/// Rank by row reduction; consumes the matrix.
pub fn rank(field: &Field, mut m: Matrix) -> usize {
    let mut rank = 0;
    for col in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(pivot) = (rank..m.rows).find(|&r| !field.is_zero(m.get(r, col))) else {
            continue;
        };
        if pivot != rank {
            for c in 0..m.cols {
                m.data.swap(pivot * m.cols + c, rank * m.cols + c);
            }
        }
        let inv = field.inv(m.get(rank, col)).expect("pivot is nonzero");
        for r in rank + 1..m.rows {
            if field.is_zero(m.get(r, col)) {
                continue;
            }
            let factor = field.mul(m.get(r, col), &inv);
            for c in col..m.cols {
                let v = field.sub(m.get(r, c), &field.mul(&factor, m.get(rank, c)));
                m.set(r, c, v);
            }
        }
        rank += 1;
    }
    rank
}

/// Outcome of offering a vector to an [`IncrementalBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// The vector was independent and is now basis member `index`.
    Added { index: usize },
    /// The vector equals `Σ coeffs[b] · basis[b]`.
    Dependent { coeffs: Vec<Elem> },
}

/// Greedy left-to-right basis with recorded dependencies.
///
/// Each echelon row is kept together with its expression in terms of the
/// accepted input vectors, so a dependent vector comes back as an explicit
/// linear combination of earlier basis members.
pub struct IncrementalBasis {
    field: Field,
    dim: usize,
    // (pivot column, reduced row, combination over accepted vectors)
    echelon: Vec<(usize, Vec<Elem>, Vec<Elem>)>,
    size: usize,
}

impl IncrementalBasis {
    pub fn new(field: &Field, dim: usize) -> Self {
        IncrementalBasis {
            field: field.clone(),
            dim,
            echelon: Vec::new(),
            size: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn insert(&mut self, v: &[Elem]) -> Insert {
        assert_eq!(v.len(), self.dim);
        let f = &self.field;
        let mut row = v.to_vec();
        // combination expressing v - row over the basis
        let mut combo = vec![f.zero(); self.size];
        for (pivot, erow, ecombo) in &self.echelon {
            if f.is_zero(&row[*pivot]) {
                continue;
            }
            let factor = f.div(&row[*pivot], &erow[*pivot]).expect("pivot nonzero");
            for (x, y) in row.iter_mut().zip(erow) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
            for (x, y) in combo.iter_mut().zip(ecombo) {
                if !f.is_zero(y) {
                    *x = f.add(x, &f.mul(&factor, y));
                }
            }
        }
        match row.iter().position(|x| !f.is_zero(x)) {
            None => Insert::Dependent { coeffs: combo },
            Some(pivot) => {
                let index = self.size;
                self.size += 1;
                for (_, _, c) in self.echelon.iter_mut() {
                    c.push(f.zero());
                }
                // row = v - Σ combo_b basis_b
                let mut own: Vec<Elem> = combo.iter().map(|c| f.neg(c)).collect();
                own.push(f.one());
                self.echelon.push((pivot, row, own));
                Insert::Added { index }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn ranks() {
        let q = Field::rational();
        assert_eq!(m(&q, &[&[0, 1], &[1, 0]]).rank(&q), 2);
        assert_eq!(m(&q, &[&[1, 2], &[2, 4]]).rank(&q), 1);
        assert_eq!(m(&q, &[&[0, 0], &[0, 0]]).rank(&q), 0);
        assert_eq!(m(&q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(&q), 2);
        // singular mod 3 only
        let f3 = Field::prime(3).unwrap();
        assert_eq!(m(&q, &[&[1, 1], &[1, 4]]).rank(&q), 2);
        assert_eq!(m(&f3, &[&[1, 1], &[1, 4]]).rank(&f3), 1);
    }

    #[test]
    fn incremental_records_combination() {
        let q = Field::rational();
        let v = |xs: &[i64]| xs.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let mut b = IncrementalBasis::new(&q, 3);
        assert_eq!(b.insert(&v(&[1, 1, 0])), Insert::Added { index: 0 });
        assert_eq!(b.insert(&v(&[0, 1, 1])), Insert::Added { index: 1 });
        match b.insert(&v(&[2, 5, 3])) {
            Insert::Dependent { coeffs } => assert_eq!(coeffs, v(&[2, 3])),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            b.insert(&v(&[0, 0, 0])),
            Insert::Dependent { coeffs: v(&[0, 0]) }
        );
        assert_eq!(b.insert(&v(&[0, 0, 1])), Insert::Added { index: 2 });
        assert_eq!(b.len(), 3);
    }
}
