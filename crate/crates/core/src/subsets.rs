//! Subsets of a small ground set `0..n` packed into a `u64`.

use std::cmp::Ordering;

pub type Mask = u64;

/// Largest ground set that fits a mask.
pub const MAX_GROUND: usize = 63;

pub fn full(n: usize) -> Mask {
    debug_assert!(n <= MAX_GROUND);
    (1u64 << n) - 1
}

pub fn singleton(i: usize) -> Mask {
    1u64 << i
}

pub fn contains(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn size(m: Mask) -> usize {
    m.count_ones() as usize
}

pub fn from_elems<I: IntoIterator<Item = usize>>(it: I) -> Mask {
    it.into_iter().fold(0, |m, i| m | (1u64 << i))
}

pub fn elems(m: Mask) -> Vec<usize> {
    Elems(m).collect()
}

pub fn iter(m: Mask) -> Elems {
    Elems(m)
}

pub struct Elems(Mask);

impl Iterator for Elems {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// All submasks of `m`, starting with the empty set and ending with `m`.
pub fn submasks(m: Mask) -> Submasks {
    Submasks { full: m, cur: 0, done: false }
}

pub struct Submasks {
    full: Mask,
    cur: Mask,
    done: bool,
}

impl Iterator for Submasks {
    type Item = Mask;
    fn next(&mut self) -> Option<Mask> {
        if self.done {
            return None;
        }
        let out = self.cur;
        if self.cur == self.full {
            self.done = true;
        } else {
            self.cur = (self.cur.wrapping_sub(self.full)) & self.full;
        }
        Some(out)
    }
}

/// Compares two subsets as sorted element sequences.
pub fn lex_cmp(a: Mask, b: Mask) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x.cmp(&y);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// Spreads the bits of `local` over the positions of `support`.
pub fn deposit(local: Mask, support: Mask) -> Mask {
    let mut out = 0;
    for (k, i) in iter(support).enumerate() {
        if local >> k & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}

/// Inverse of [`deposit`]: packs the bits of `m` found on `support`.
pub fn extract(m: Mask, support: Mask) -> Mask {
    let mut out = 0;
    for (k, i) in iter(support).enumerate() {
        if m >> i & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// All `k`-element subsets of `0..n` in increasing numeric order.
pub fn iter_k_subsets(n: usize, k: usize) -> impl Iterator<Item = Mask> {
    (0..=full(n)).filter(move |&m| size(m) == k)
}
