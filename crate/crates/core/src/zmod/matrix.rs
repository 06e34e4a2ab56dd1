use serde::{Deserialize, Serialize};

use super::LinalgError;

/// The ring Z/p^e, carried alongside every matrix and vector that lives in it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    pub p: u64,
    pub e: u32,
    pub value: u64,
}

impl Modulus {
    pub fn new(p: u64, e: u32) -> Result<Self, LinalgError> {
        if p < 2 || e == 0 {
            return Err(LinalgError::BadModulus { p, e });
        }
        let mut value: u64 = 1;
        for _ in 0..e {
            value = value
                .checked_mul(p)
                .filter(|v| *v <= 1 << 62)
                .ok_or(LinalgError::BadModulus { p, e })?;
        }
        Ok(Self { p, e, value })
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.value
    }

    #[inline]
    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.value as i128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.value {
            s - self.value
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.value - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.value - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.value as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.value;
        base %= self.value;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// p-adic valuation of a residue; `e` for zero.
    pub fn valuation(&self, mut a: u64) -> u32 {
        a %= self.value;
        if a == 0 {
            return self.e;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// p^k as a residue (zero once k >= e).
    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.e {
            0
        } else {
            self.pow(self.p, k as u64)
        }
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut old_r, mut r) = (a as i128 % self.value as i128, self.value as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return None;
        }
        Some(self.reduce_i128(old_s))
    }

    /// Writes a nonzero residue as `unit * p^v`, returning `(v, unit)`.
    pub fn split(&self, a: u64) -> (u32, u64) {
        let v = self.valuation(a);
        if v >= self.e {
            return (self.e, 0);
        }
        let mut u = a % self.value;
        for _ in 0..v {
            u /= self.p;
        }
        (v, u % self.value)
    }

    /// Exact division of `a` by p^k; `None` when p^k does not divide `a` in Z/p^e.
    pub fn div_p_pow(&self, a: u64, k: u32) -> Option<u64> {
        let a = a % self.value;
        if k == 0 {
            return Some(a);
        }
        if self.valuation(a) < k {
            return None;
        }
        Some(a / self.pow(self.p, k as u64))
    }
}

/// Dense matrix over Z/p^e, row-major, rows act on the left (`v · M`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZModMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZModMatrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        Self { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus.value;
        }
        m
    }

    pub fn from_rows(modulus: Modulus, cols: usize, rows: &[Vec<u64>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Shape { expected: cols, found: r.len() });
            }
            data.extend(r.iter().map(|x| modulus.reduce(*x)));
        }
        Ok(Self { modulus, rows: rows.len(), cols, data })
    }

    pub fn from_i64_rows(modulus: Modulus, cols: usize, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|x| modulus.reduce_i128(*x as i128)).collect())
            .collect();
        Self::from_rows(modulus, cols, &rows)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.modulus.reduce(v);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<u64> {
        self.row(r).to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn push_row(&mut self, row: &[u64]) -> Result<(), LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::Shape { expected: self.cols, found: row.len() });
        }
        let m = self.modulus;
        self.data.extend(row.iter().map(|x| m.reduce(*x)));
        self.rows += 1;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0)
    }

    pub fn mul(&self, other: &ZModMatrix) -> Result<ZModMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape { expected: self.cols, found: other.rows });
        }
        if self.modulus != other.modulus {
            return Err(LinalgError::ModulusMismatch);
        }
        let m = self.modulus;
        let mut out = ZModMatrix::zeros(m, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = m.add(out.data[idx], m.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::Shape { expected: self.rows, found: v.len() });
        }
        let m = self.modulus;
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if b != 0 {
                    *o = m.add(*o, m.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> ZModMatrix {
        let mut t = ZModMatrix::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &ZModMatrix) -> Result<ZModMatrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::Shape { expected: self.rows, found: other.rows });
        }
        let cols = self.cols + other.cols;
        let mut out = ZModMatrix::zeros(self.modulus, self.rows, cols);
        for i in 0..self.rows {
            out.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        Ok(out)
    }

    /// Same entries read in a smaller ring Z/p^f, f <= e.
    pub fn reduce_to(&self, f: u32) -> Result<ZModMatrix, LinalgError> {
        let m = Modulus::new(self.modulus.p, f)?;
        Ok(ZModMatrix {
            modulus: m,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| m.reduce(*x)).collect(),
        })
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, c: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = m.mul(self.data[idx], c);
        }
    }

    pub(crate) fn scale_col(&mut self, col: usize, c: u64) {
        let m = self.modulus;
        for i in 0..self.rows {
            let idx = i * self.cols + col;
            self.data[idx] = m.mul(self.data[idx], c);
        }
    }

    /// row[dst] += c * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let idx = dst * self.cols + j;
                self.data[idx] = m.add(self.data[idx], m.mul(c, s));
            }
        }
    }

    /// col[dst] += c * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            if s != 0 {
                let idx = i * self.cols + dst;
                self.data[idx] = m.add(self.data[idx], m.mul(c, s));
            }
        }
    }
}

/// Canonical JSON form: entries as decimal strings so large moduli survive any reader.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    p: String,
    e: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for ZModMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            p: self.modulus.p.to_string(),
            e: self.modulus.e,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x.to_string()).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZModMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = MatrixJson::deserialize(d)?;
        let p: u64 = j.p.parse().map_err(D::Error::custom)?;
        let modulus = Modulus::new(p, j.e).map_err(D::Error::custom)?;
        let mut rows = Vec::with_capacity(j.rows);
        for r in &j.entries {
            let mut row = Vec::with_capacity(j.cols);
            for x in r {
                let v: u64 = x.parse().map_err(D::Error::custom)?;
                if v >= modulus.value {
                    return Err(D::Error::custom("entry not reduced"));
                }
                row.push(v);
            }
            rows.push(row);
        }
        if rows.len() != j.rows {
            return Err(D::Error::custom("row count mismatch"));
        }
        ZModMatrix::from_rows(modulus, j.cols, &rows).map_err(D::Error::custom)
    }
}
