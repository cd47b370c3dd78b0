use std::collections::HashMap;

use super::coeff::{Coeff, Field};

/// Sparse matrix over a field, stored by rows. Labels are optional and only
/// used for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    cols: usize,
    rows: Vec<Vec<(usize, Coeff)>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            cols,
            rows: vec![Vec::new(); rows],
            row_labels: Vec::new(),
            col_labels: Vec::new(),
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_dense(field: Field, data: &[Vec<Coeff>]) -> Self {
        let cols = data.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, data.len(), cols);
        for (i, row) in data.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn from_i64(field: Field, data: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Coeff>> = data
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_dense(field, &dense)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Coeff)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Coeff {
        match self.rows[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, c: Coeff) {
        assert!(j < self.cols, "column out of range");
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |(col, _)| *col) {
            Ok(k) => {
                if c.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = c;
                }
            }
            Err(k) => {
                if !c.is_zero() {
                    row.insert(k, (j, c));
                }
            }
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, c: &Coeff) {
        let cur = self.get(i, j);
        self.set(i, j, cur.add(c));
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// `self * other`.
    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.nrows(), "dimension mismatch");
        let mut out = ExactMatrix::zeros(self.field, self.nrows(), other.ncols());
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc: HashMap<usize, Coeff> = HashMap::new();
            for (k, a) in row {
                for (j, b) in &other.rows[*k] {
                    let prod = a.mul(b);
                    match acc.get_mut(j) {
                        Some(x) => x.add_assign(&prod),
                        None => {
                            acc.insert(*j, prod);
                        }
                    }
                }
            }
            let mut r: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            r.sort_unstable_by_key(|(j, _)| *j);
            out.rows[i] = r;
        }
        out
    }

    /// Rank by exact sparse Gaussian elimination.
    pub fn rank(&self) -> usize {
        // Pivot rows are normalized to leading coefficient 1 and indexed by
        // their leading column.
        let mut pivots: HashMap<usize, Vec<(usize, Coeff)>> = HashMap::new();
        for row in &self.rows {
            let mut r = row.clone();
            while let Some((lead, c)) = r.first().cloned() {
                match pivots.get(&lead) {
                    Some(piv) => r = axpy(&r, &c.neg(), piv),
                    None => {
                        let inv = c.inv().expect("nonzero pivot");
                        let r: Vec<_> = r.into_iter().map(|(j, x)| (j, x.mul(&inv))).collect();
                        pivots.insert(lead, r);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

/// `x + a * y` for sorted sparse rows.
fn axpy(x: &[(usize, Coeff)], a: &Coeff, y: &[(usize, Coeff)]) -> Vec<(usize, Coeff)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            let v = a.mul(&y[j].1);
            if !v.is_zero() {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = x[i].1.add(&a.mul(&y[j].1));
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
