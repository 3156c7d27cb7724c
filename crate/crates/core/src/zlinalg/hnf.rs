//! Incremental row-style Hermite normal form.
//!
//! Rows are fed one at a time into a basis indexed by pivot column. The basis
//! is kept fully reduced after every insertion: pivots are positive and every
//! entry sitting above a pivot lies in `[0, pivot)`. Reduced bases of the same
//! lattice are identical, so the result does not depend on insertion order.
//!
//! Arithmetic starts in `i64` with checked operations. The first overflow
//! promotes the whole state to `BigInt` and the insertion resumes there.

use num_bigint::BigInt;

use super::scalar::Scalar;
use super::SparseRow;

type Row<T> = Vec<(u32, T)>;

#[derive(Debug, Clone, Copy)]
struct Overflow;

#[derive(Debug, Clone)]
struct Basis<T> {
    n_cols: usize,
    rows: Vec<Option<Row<T>>>,
}

/// `a - f * b`, merged by column.
fn axpy<T: Scalar>(a: &[(u32, T)], f: &T, b: &[(u32, T)]) -> Result<Row<T>, Overflow> {
    lincomb(&T::one(), a, &f.checked_neg().ok_or(Overflow)?, b)
}

/// `s * a + t * b`, merged by column, zeros dropped.
fn lincomb<T: Scalar>(s: &T, a: &[(u32, T)], t: &T, b: &[(u32, T)]) -> Result<Row<T>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (col, val) = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                let l = s.checked_mul(&x.1).ok_or(Overflow)?;
                let r = t.checked_mul(&y.1).ok_or(Overflow)?;
                (x.0, l.checked_add(&r).ok_or(Overflow)?)
            }
            (Some(x), y) if y.is_none_or(|y| x.0 < y.0) => {
                i += 1;
                (x.0, s.checked_mul(&x.1).ok_or(Overflow)?)
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, t.checked_mul(&y.1).ok_or(Overflow)?)
            }
            _ => unreachable!(),
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    Ok(out)
}

fn entry<T: Scalar>(row: &[(u32, T)], col: u32) -> Option<&T> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

impl<T: Scalar> Basis<T> {
    fn new(n_cols: usize) -> Self {
        Basis {
            n_cols,
            rows: vec![None; n_cols],
        }
    }

    /// Reduces the entries of `row` at pivot columns `>= from` (and right of
    /// its own leading column) into `[0, pivot)`.
    fn reduce_row(&self, row: &mut Row<T>, from: u32) -> Result<(), Overflow> {
        let lead = row[0].0;
        let start = from.max(lead + 1);
        let mut k = row.partition_point(|e| e.0 < start);
        while k < row.len() {
            let j = row[k].0;
            if let Some(b) = &self.rows[j as usize] {
                let p = &b[0].1;
                let v = &row[k].1;
                if v.is_negative() || v >= p {
                    let f = v.div_floor(p);
                    *row = axpy(row, &f, b)?;
                }
            }
            k = row.partition_point(|e| e.0 <= j);
        }
        Ok(())
    }

    /// Re-reduces every row above pivot `c` that has an entry in column `c`.
    fn reduce_above(&mut self, c: u32) -> Result<(), Overflow> {
        for i in 0..c as usize {
            let touches = self.rows[i]
                .as_ref()
                .is_some_and(|r| entry(r, c).is_some());
            if !touches {
                continue;
            }
            let mut row = self.rows[i].take().unwrap();
            let res = self.reduce_row(&mut row, c);
            self.rows[i] = Some(row);
            res?;
        }
        Ok(())
    }

    fn store(&mut self, mut row: Row<T>) -> Result<(), Overflow> {
        let c = row[0].0;
        if row[0].1.is_negative() {
            for e in row.iter_mut() {
                e.1 = e.1.checked_neg().ok_or(Overflow)?;
            }
        }
        self.reduce_row(&mut row, c)?;
        self.rows[c as usize] = Some(row);
        self.reduce_above(c)
    }

    /// Inserts the dense row `v`. On overflow `v` holds a vector that, with
    /// the current basis, still generates the lattice seen so far.
    fn insert(&mut self, v: &mut [T]) -> Result<(), Overflow> {
        let mut c = 0usize;
        loop {
            while c < self.n_cols && v[c].is_zero() {
                c += 1;
            }
            if c == self.n_cols {
                return Ok(());
            }
            let sparse: Row<T> = (c..self.n_cols)
                .filter(|&j| !v[j].is_zero())
                .map(|j| (j as u32, v[j].clone()))
                .collect();
            let Some(b) = &self.rows[c] else {
                self.store(sparse)?;
                v.iter_mut().for_each(|x| *x = T::zero());
                return Ok(());
            };
            let a = &b[0].1;
            let x = &v[c];
            if a.divides(x) {
                let f = x.div_exact(a).ok_or(Overflow)?;
                let updated = axpy(&sparse, &f, b)?;
                write_back(v, &sparse, updated);
            } else {
                let (g, s, t) = T::ext_gcd(a, x).ok_or(Overflow)?;
                let ag = a.div_exact(&g).ok_or(Overflow)?;
                let xg = x.div_exact(&g).ok_or(Overflow)?;
                let new_b = lincomb(&s, b, &t, &sparse)?;
                let new_v = lincomb(&ag, &sparse, &xg.checked_neg().ok_or(Overflow)?, b)?;
                write_back(v, &sparse, new_v);
                self.store(new_b)?;
            }
        }
    }

    fn stored_rows(&self) -> impl Iterator<Item = &Row<T>> {
        self.rows.iter().flatten()
    }
}

fn write_back<T: Scalar>(v: &mut [T], old: &[(u32, T)], new: Row<T>) {
    for (j, _) in old {
        v[*j as usize] = T::zero();
    }
    for (j, x) in new {
        v[j as usize] = x;
    }
}

#[derive(Debug, Clone)]
enum Inner {
    Small(Basis<i64>),
    Big(Basis<BigInt>),
}

/// Streaming Hermite normal form of an integer row lattice.
#[derive(Debug, Clone)]
pub struct HnfAccumulator {
    n_cols: usize,
    inner: Inner,
}

impl HnfAccumulator {
    pub fn new(n_cols: usize) -> Self {
        HnfAccumulator {
            n_cols,
            inner: Inner::Small(Basis::new(n_cols)),
        }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Whether arithmetic has been promoted to big integers.
    pub fn is_promoted(&self) -> bool {
        matches!(self.inner, Inner::Big(_))
    }

    pub fn push(&mut self, row: &[(usize, BigInt)]) {
        assert!(row.iter().all(|e| e.0 < self.n_cols), "column out of range");
        if let Inner::Small(basis) = &mut self.inner {
            let mut dense = vec![0i64; self.n_cols];
            let fits = row.iter().all(|(j, x)| match i64::from_big(x) {
                Some(x) => {
                    dense[*j] = x;
                    true
                }
                None => false,
            });
            if fits {
                match basis.insert(&mut dense) {
                    Ok(()) => return,
                    Err(Overflow) => {
                        let pending: Vec<BigInt> = dense.iter().map(|x| x.to_big()).collect();
                        self.promote(Some(pending));
                        return;
                    }
                }
            }
            self.promote(None);
        }
        let Inner::Big(basis) = &mut self.inner else {
            unreachable!()
        };
        let mut dense = vec![BigInt::from(0); self.n_cols];
        for (j, x) in row {
            dense[*j] += x;
        }
        basis
            .insert(&mut dense)
            .expect("big-integer arithmetic does not overflow");
    }

    pub fn push_dense(&mut self, row: &[BigInt]) {
        let sparse: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !Scalar::is_zero(*x))
            .map(|(j, x)| (j, x.clone()))
            .collect();
        self.push(&sparse);
    }

    fn promote(&mut self, pending: Option<Vec<BigInt>>) {
        let Inner::Small(small) = &self.inner else {
            return;
        };
        let mut big = Basis::<BigInt>::new(self.n_cols);
        let mut feed: Vec<Vec<BigInt>> = small
            .stored_rows()
            .map(|r| {
                let mut d = vec![BigInt::from(0); self.n_cols];
                for (j, x) in r {
                    d[*j as usize] = x.to_big();
                }
                d
            })
            .collect();
        feed.extend(pending);
        for mut d in feed {
            big.insert(&mut d).expect("big-integer arithmetic does not overflow");
        }
        self.inner = Inner::Big(big);
    }

    /// Snapshot of the reduced basis, rows in ascending pivot order.
    pub fn basis(&self) -> HermiteBasis {
        let rows = match &self.inner {
            Inner::Small(b) => b
                .stored_rows()
                .map(|r| r.iter().map(|(j, x)| (*j as usize, x.to_big())).collect())
                .collect(),
            Inner::Big(b) => b
                .stored_rows()
                .map(|r| r.iter().map(|(j, x)| (*j as usize, x.clone())).collect())
                .collect(),
        };
        HermiteBasis {
            n_cols: self.n_cols,
            rows,
        }
    }
}

/// A reduced row-style Hermite basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteBasis {
    pub n_cols: usize,
    /// Sparse rows sorted by column; the first entry of each row is its pivot.
    pub rows: Vec<SparseRow>,
}

impl HermiteBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.rows.iter().map(|r| (r[0].0, &r[0].1))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::from(0); self.n_cols];
                for (j, x) in r {
                    d[*j] = x.clone();
                }
                d
            })
            .collect()
    }
}

/// Hermite basis of the lattice spanned by `rows`.
pub fn hnf_accumulate<'a, I>(n_cols: usize, rows: I) -> HermiteBasis
where
    I: IntoIterator<Item = &'a SparseRow>,
{
    let mut acc = HnfAccumulator::new(n_cols);
    for r in rows {
        acc.push(r);
    }
    acc.basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(d: &[&[i64]]) -> Vec<SparseRow> {
        d.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| (j, BigInt::from(x)))
                    .collect()
            })
            .collect()
    }

    fn dense(b: &HermiteBasis) -> Vec<Vec<i64>> {
        b.to_dense()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn already_reduced() {
        let b = hnf_accumulate(2, &rows(&[&[2, 0], &[0, 3]]));
        assert_eq!(dense(&b), vec![vec![2, 0], vec![0, 3]]);
    }

    #[test]
    fn redundant_row_is_absorbed() {
        let b = hnf_accumulate(2, &rows(&[&[1, 1], &[0, 2], &[1, 3]]));
        assert_eq!(dense(&b), vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn empty_stream() {
        let b = hnf_accumulate(3, &[]);
        assert_eq!(b.rank(), 0);
    }

    #[test]
    fn gcd_step_and_negative_rows() {
        let b = hnf_accumulate(3, &rows(&[&[4, 1, 0], &[-6, 0, 5], &[0, 0, 0]]));
        // lattice spanned by (4,1,0), (6,0,-5): gcd 2 in column 0
        let d = dense(&b);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0][0], 2);
        assert!(d.iter().all(|r| r.iter().take_while(|&&x| x == 0).count() < 3));
        let same = hnf_accumulate(3, &rows(&[&[-6, 0, 5], &[4, 1, 0]]));
        assert_eq!(b, same);
    }

    #[test]
    fn overflow_promotes() {
        let big = i64::MAX / 3;
        let mut acc = HnfAccumulator::new(3);
        acc.push(&rows(&[&[big, 1, 0]])[0]);
        acc.push(&rows(&[&[big - 1, 0, big]])[0]);
        acc.push(&rows(&[&[0, big, big]])[0]);
        let reference = {
            let mut a = HnfAccumulator::new(3);
            a.promote(None);
            for r in rows(&[&[big, 1, 0], &[big - 1, 0, big], &[0, big, big]]) {
                a.push(&r);
            }
            a.basis()
        };
        assert_eq!(acc.basis(), reference);
    }
}
