//! Small exact integer row reduction, used for gluing checks on free
//! abelian groups.

/// Integer row echelon form. Pivots are positive and sit in strictly
/// increasing columns; zero rows are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Reduce over the first `cols` columns; later columns ride along.
    pub fn new(mut rows: Vec<Vec<i128>>, cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            loop {
                // smallest nonzero entry in column c at or below row r
                let best = (r..rows.len())
                    .filter(|&i| rows[i][c] != 0)
                    .min_by_key(|&i| rows[i][c].abs());
                let Some(p) = best else { break };
                rows.swap(r, p);
                let mut done = true;
                for i in r + 1..rows.len() {
                    if rows[i][c] != 0 {
                        let q = rows[i][c].div_euclid(rows[r][c]);
                        let (head, tail) = rows.split_at_mut(i);
                        for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                            *x -= q * y;
                        }
                        if rows[i][c] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    if rows[r][c] < 0 {
                        for x in rows[r].iter_mut() {
                            *x = -*x;
                        }
                    }
                    pivots.push(c);
                    r += 1;
                    break;
                }
            }
            if r == rows.len() {
                break;
            }
        }
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Rows below the pivots; zero on the reduced columns.
    pub fn residual_rows(&self) -> &[Vec<i128>] {
        &self.rows[self.pivots.len()..]
    }

    /// Whether `v` lies in the row lattice.
    pub fn contains(&self, v: &[i128]) -> bool {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if v[c] % row[c] != 0 {
                return false;
            }
            let q = v[c] / row[c];
            if q != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Whether the rows generate all of `Z^cols`.
    pub fn is_unimodular_span(&self, cols: usize) -> bool {
        self.rank() == cols
            && self
                .rows
                .iter()
                .zip(&self.pivots)
                .all(|(row, &c)| row[c] == 1)
    }
}

pub fn rank(rows: &[Vec<i128>], cols: usize) -> usize {
    Echelon::new(rows.to_vec(), cols).rank()
}

/// A basis of `{ c | Σ c_i rows_i = 0 }`.
pub fn kernel(rows: &[Vec<i128>], cols: usize) -> Vec<Vec<i128>> {
    let m = rows.len();
    let augmented: Vec<Vec<i128>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.resize(cols, 0);
            v.extend((0..m).map(|j| i128::from(i == j)));
            v
        })
        .collect();
    Echelon::new(augmented, cols)
        .residual_rows()
        .iter()
        .map(|r| r[cols..].to_vec())
        .collect()
}
