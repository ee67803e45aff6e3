//! Table-driven kernels for the exhaustive searches over finite fields.
//!
//! Vectors of `Fⁿ` are addressed by index `Σ xᵢ qⁱ` (coordinate 0 is the
//! least significant digit, matching [`all_vectors`](crate::matrix::all_vectors)),
//! and square matrices are row-major byte strings of element indices, the
//! same bytes as [`Mat::encode`](crate::matrix::Mat::encode).

use crate::field::small;
use crate::quadform::QForm;

pub(crate) struct Space {
    pub q: u8,
    pub n: usize,
    pub size: usize,
    coords: Vec<u8>,
    add: Vec<u32>,
    smul: Vec<u32>,
}

impl Space {
    pub fn new(q: u8, n: usize) -> Self {
        let size = (q as usize).pow(n as u32);
        let mut coords = vec![0u8; size * n];
        for k in 0..size {
            let mut r = k;
            for i in 0..n {
                coords[k * n + i] = (r % q as usize) as u8;
                r /= q as usize;
            }
        }
        let mut space = Space { q, n, size, coords, add: Vec::new(), smul: Vec::new() };
        let mut add = vec![0u32; size * size];
        for u in 0..size {
            for v in 0..size {
                let w: Vec<u8> = (0..n).map(|i| small::add(q, space.coord(u, i), space.coord(v, i))).collect();
                add[u * size + v] = space.index_of(&w) as u32;
            }
        }
        let mut smul = vec![0u32; q as usize * size];
        for c in 0..q {
            for v in 0..size {
                let w: Vec<u8> = (0..n).map(|i| small::mul(q, c, space.coord(v, i))).collect();
                smul[c as usize * size + v] = space.index_of(&w) as u32;
            }
        }
        space.add = add;
        space.smul = smul;
        space
    }

    #[inline]
    pub fn coord(&self, v: usize, i: usize) -> u8 {
        self.coords[v * self.n + i]
    }

    pub fn index_of(&self, x: &[u8]) -> usize {
        x.iter().rev().fold(0usize, |acc, &d| acc * self.q as usize + d as usize)
    }

    #[inline]
    pub fn add(&self, u: usize, v: usize) -> usize {
        self.add[u * self.size + v] as usize
    }

    #[inline]
    pub fn smul(&self, c: u8, v: usize) -> usize {
        self.smul[c as usize * self.size + v] as usize
    }

    /// Image of vector `v` under the packed matrix `m`.
    pub fn apply(&self, m: &[u8], v: usize) -> usize {
        let n = self.n;
        let mut acc = 0usize;
        for j in 0..n {
            let c = self.coord(v, j);
            if c != 0 {
                let mut col = 0usize;
                let mut scale = 1usize;
                for i in 0..n {
                    col += m[i * n + j] as usize * scale;
                    scale *= self.q as usize;
                }
                acc = self.add(acc, self.smul(c, col));
            }
        }
        acc
    }
}

/// Value and polar tables of one quadratic form over a [`Space`].
pub(crate) struct FormTables {
    pub qval: Vec<u8>,
    pub bval: Vec<u8>,
    size: usize,
}

impl FormTables {
    pub fn new(space: &Space, form: &QForm) -> Self {
        let q = space.q;
        let n = space.n;
        let w = upper_indices(form);
        let qval: Vec<u8> = (0..space.size)
            .map(|v| {
                let mut acc = 0u8;
                for i in 0..n {
                    for j in i..n {
                        let c = w[i * n + j];
                        if c != 0 {
                            let t = small::mul(q, space.coord(v, i), space.coord(v, j));
                            acc = small::add(q, acc, small::mul(q, c, t));
                        }
                    }
                }
                acc
            })
            .collect();
        let mut bval = vec![0u8; space.size * space.size];
        for u in 0..space.size {
            for v in u..space.size {
                let s = qval[space.add(u, v)];
                let b = small::add(q, s, small::neg(q, small::add(q, qval[u], qval[v])));
                bval[u * space.size + v] = b;
                bval[v * space.size + u] = b;
            }
        }
        FormTables { qval, bval, size: space.size }
    }

    #[inline]
    pub fn b(&self, u: usize, v: usize) -> u8 {
        self.bval[u * self.size + v]
    }
}

/// Row-major `n×n` canonical coefficient indices of a finite-field form.
pub(crate) fn upper_indices(form: &QForm) -> Vec<u8> {
    form.matrix().entries().iter().map(|e| e.index().expect("finite field")).collect()
}

/// Searches ordered bases `(v₁, …, vₙ)` of `Fⁿ`.
///
/// With a constraint `(S, T)` only frames with `S(vᵢ) = tᵢᵢ` and
/// `B_S(vᵢ, vⱼ) = tᵢⱼ` (i < j) are kept, i.e. matrices `P = [v₁ … vₙ]` with
/// `S ∘ P = T`. Each frame is handed to `emit` as a packed matrix; returning
/// `false` from `emit` stops the search.
pub(crate) fn search_frames(
    space: &Space,
    constraint: Option<(&FormTables, &[u8])>,
    emit: &mut dyn FnMut(&[u8]) -> bool,
) {
    let n = space.n;
    let mut chosen = Vec::with_capacity(n);
    let mut span = vec![false; space.size];
    span[0] = true;
    let mut members = vec![0usize];
    let mut packed = vec![0u8; n * n];
    recurse(space, constraint, &mut chosen, &mut span, &mut members, &mut packed, emit);
}

fn recurse(
    space: &Space,
    constraint: Option<(&FormTables, &[u8])>,
    chosen: &mut Vec<usize>,
    span: &mut Vec<bool>,
    members: &mut Vec<usize>,
    packed: &mut Vec<u8>,
    emit: &mut dyn FnMut(&[u8]) -> bool,
) -> bool {
    let n = space.n;
    let level = chosen.len();
    if level == n {
        return emit(packed);
    }
    for v in 0..space.size {
        if span[v] {
            continue;
        }
        if let Some((tables, target)) = constraint {
            if tables.qval[v] != target[level * n + level] {
                continue;
            }
            if (0..level).any(|i| tables.b(chosen[i], v) != target[i * n + level]) {
                continue;
            }
        }
        let before = members.len();
        for c in 1..space.q {
            let cv = space.smul(c, v);
            for k in 0..before {
                let w = space.add(members[k], cv);
                if !span[w] {
                    span[w] = true;
                    members.push(w);
                }
            }
        }
        for i in 0..n {
            packed[i * n + level] = space.coord(v, i);
        }
        chosen.push(v);
        let go_on = recurse(space, constraint, chosen, span, members, packed, emit);
        chosen.pop();
        for &w in &members[before..] {
            span[w] = false;
        }
        members.truncate(before);
        if !go_on {
            return false;
        }
    }
    true
}

pub(crate) fn mat_mul(q: u8, n: usize, a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let t = small::mul(q, aik, b[k * n + j]);
                out[i * n + j] = small::add(q, out[i * n + j], t);
            }
        }
    }
    out
}

pub(crate) fn identity(n: usize) -> Vec<u8> {
    let mut m = vec![0u8; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}
