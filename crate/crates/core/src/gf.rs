//! Linear algebra over prime fields GF(p).

use crate::{Error, Result};

pub type Vector = Vec<u8>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u8,
}

impl Field {
    pub fn new(p: usize) -> Result<Field> {
        if !(2..=251).contains(&p) || !is_prime(p) {
            return Err(Error::Domain(format!("field order {p} is not a supported prime")));
        }
        Ok(Field { p: p as u8 })
    }

    pub fn order(self) -> usize {
        self.p as usize
    }

    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    pub fn neg(self, a: u8) -> u8 {
        self.sub(0, a)
    }

    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(!a.is_multiple_of(self.p));
        // a^(p-2)
        let mut r = 1u8;
        for _ in 0..self.p - 2 {
            r = self.mul(r, a);
        }
        r
    }

    /// `acc += c * v`, coordinatewise.
    pub fn axpy(self, acc: &mut [u8], c: u8, v: &[u8]) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            *a = self.add(*a, self.mul(c, x));
        }
    }

    pub fn scale(self, c: u8, v: &[u8]) -> Vector {
        v.iter().map(|&x| self.mul(c, x)).collect()
    }

    /// Linear combination `sum coeffs[i] * vectors[i]` in dimension `dim`.
    pub fn combine(self, dim: usize, coeffs: &[u8], vectors: &[&[u8]]) -> Vector {
        let mut acc = vec![0; dim];
        for (&c, v) in coeffs.iter().zip(vectors) {
            self.axpy(&mut acc, c, v);
        }
        acc
    }

    pub fn rank<V: AsRef<[u8]>>(self, vectors: &[V]) -> usize {
        let mut e = Echelon::new(self);
        vectors.iter().filter(|v| e.insert(v.as_ref())).count()
    }

    /// Basis of `{c : sum c_i * vectors[i] = 0}`.
    pub fn kernel<V: AsRef<[u8]>>(self, dim: usize, vectors: &[V]) -> Vec<Vector> {
        let m = vectors.len();
        // rows = coordinates, columns = vectors
        let mut rows: Vec<Vector> = (0..dim)
            .map(|r| vectors.iter().map(|v| v.as_ref()[r]).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, piv);
            let inv = self.inv(rows[r][c]);
            rows[r] = self.scale(inv, &rows[r]);
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = self.neg(rows[i][c]);
                    let pr = rows[r].clone();
                    self.axpy(&mut rows[i], f, &pr);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u8; m];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.neg(rows[i][f]);
                }
                v
            })
            .collect()
    }

    /// All vectors in the span of `gens`, sorted.
    pub fn span<V: AsRef<[u8]>>(self, dim: usize, gens: &[V]) -> Vec<Vector> {
        let mut e = Echelon::new(self);
        let basis: Vec<Vector> = gens.iter().filter(|g| e.insert(g.as_ref())).map(|g| g.as_ref().to_vec()).collect();
        let mut out = vec![vec![0u8; dim]];
        for b in &basis {
            let mut next = Vec::with_capacity(out.len() * self.order());
            for v in &out {
                for c in 0..self.p {
                    let mut w = v.clone();
                    self.axpy(&mut w, c, b);
                    next.push(w);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Coefficients expressing `target` over `vectors`, if it lies in their span.
    pub fn solve<V: AsRef<[u8]>>(self, dim: usize, vectors: &[V], target: &[u8]) -> Option<Vector> {
        let mut cols: Vec<Vector> = vectors.iter().map(|v| v.as_ref().to_vec()).collect();
        cols.push(target.to_vec());
        let ker = self.kernel(dim, &cols);
        let m = vectors.len();
        let k = ker.into_iter().find(|k| k[m] != 0)?;
        let s = self.neg(self.inv(k[m]));
        Some(k[..m].iter().map(|&x| self.mul(s, x)).collect())
    }
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Incrementally built row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon { field, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[u8]) -> Vector {
        let f = self.field;
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if v[*piv] != 0 {
                let c = f.neg(v[*piv]);
                f.axpy(&mut v, c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let f = self.field;
        let r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let r = f.scale(f.inv(r[piv]), &r);
        for (_, row) in self.rows.iter_mut() {
            if row[piv] != 0 {
                let c = f.neg(row[piv]);
                f.axpy(row, c, &r);
            }
        }
        self.rows.push((piv, r));
        true
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse() {
        for p in [2, 3, 5, 7] {
            let f = Field::new(p).unwrap();
            for a in 1..p as u8 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
    }

    #[test]
    fn triangle_rank_over_gf2() {
        let f = Field::new(2).unwrap();
        let v = [vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(f.rank(&v), 2);
        assert_eq!(f.kernel(3, &v), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn solve_finds_combination() {
        let f = Field::new(3).unwrap();
        let v = [vec![1, 0, 1], vec![0, 1, 2]];
        let c = f.solve(3, &v, &[2, 1, 1]).unwrap();
        assert_eq!(f.combine(3, &c, &[&v[0], &v[1]]), vec![2, 1, 1]);
        assert!(f.solve(3, &v, &[0, 0, 1]).is_none());
    }
}
