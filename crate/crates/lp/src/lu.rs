//! Sparse LU factorization of a simplex basis with product-form updates.
//!
//! The basis is factorized right-looking with Markowitz pivot selection and
//! threshold partial pivoting. Subsequent column replacements are kept as a
//! file of eta vectors until the caller refactorizes.

use std::collections::BTreeSet;

/// Relative threshold for accepting a pivot within its column.
const THRESHOLD: f64 = 0.01;
/// Entries below this magnitude are never accepted as pivots.
const ABS_PIVOT_TOL: f64 = 1e-11;
/// Candidate columns/rows inspected per count level.
const SEARCH_WIDTH: usize = 4;

/// Positions and rows left unpivoted by a failed factorization.
#[derive(Debug)]
pub(crate) struct Singular {
    pub positions: Vec<usize>,
    pub rows: Vec<usize>,
}

struct Eta {
    pos: usize,
    pivot: f64,
    idx: Vec<usize>,
    val: Vec<f64>,
}

pub(crate) struct Factor {
    m: usize,
    piv_row: Vec<usize>,
    piv_pos: Vec<usize>,
    piv_val: Vec<f64>,
    l_start: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<f64>,
    u_start: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<f64>,
    etas: Vec<Eta>,
}

impl Factor {
    /// Factorizes the `m x m` matrix whose column `p` is `cols[p]` (row, value) entries.
    pub fn new(m: usize, cols: Vec<Vec<(usize, f64)>>) -> Result<Self, Singular> {
        debug_assert_eq!(cols.len(), m);
        let mut col = cols;
        let mut row: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (j, c) in col.iter().enumerate() {
            for &(i, _) in c {
                row[i].push(j);
            }
        }
        let mut col_set: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut row_set: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut col_cnt: Vec<usize> = col.iter().map(Vec::len).collect();
        let mut row_cnt: Vec<usize> = row.iter().map(Vec::len).collect();
        for j in 0..m {
            col_set.insert((col_cnt[j], j));
            row_set.insert((row_cnt[j], j));
        }

        let mut f = Factor {
            m,
            piv_row: Vec::with_capacity(m),
            piv_pos: Vec::with_capacity(m),
            piv_val: Vec::with_capacity(m),
            l_start: vec![0],
            l_idx: Vec::new(),
            l_val: Vec::new(),
            u_start: vec![0],
            u_idx: Vec::new(),
            u_val: Vec::new(),
            etas: Vec::new(),
        };

        // scatter map row -> slot in the column being updated
        let mut slot = vec![usize::MAX; m];
        let mut lcol: Vec<(usize, f64)> = Vec::new();
        let mut urow: Vec<(usize, f64)> = Vec::new();
        let mut touched_cols: Vec<usize> = Vec::new();
        let mut touched_rows: Vec<usize> = Vec::new();

        for _ in 0..m {
            let Some((r, c, p)) = select_pivot(&col, &row, &col_set, &row_set) else {
                let positions: Vec<usize> = col_set.iter().map(|&(_, j)| j).collect();
                let rows: Vec<usize> = row_set.iter().map(|&(_, i)| i).collect();
                return Err(Singular { positions, rows });
            };

            col_set.remove(&(col_cnt[c], c));
            row_set.remove(&(row_cnt[r], r));

            lcol.clear();
            for &(i, a) in &col[c] {
                if i != r {
                    lcol.push((i, a / p));
                    let rs = &mut row[i];
                    if let Some(k) = rs.iter().position(|&j| j == c) {
                        rs.swap_remove(k);
                    }
                    touched_rows.push(i);
                }
            }
            col[c].clear();

            urow.clear();
            for &j in &row[r] {
                if j == c {
                    continue;
                }
                let cj = &mut col[j];
                if let Some(k) = cj.iter().position(|&(i, _)| i == r) {
                    urow.push((j, cj[k].1));
                    cj.swap_remove(k);
                }
                touched_cols.push(j);
            }
            row[r].clear();

            for &(j, u) in &urow {
                let cj = &mut col[j];
                for (k, &(i, _)) in cj.iter().enumerate() {
                    slot[i] = k;
                }
                for &(i, l) in &lcol {
                    let delta = -l * u;
                    if slot[i] != usize::MAX {
                        cj[slot[i]].1 += delta;
                    } else {
                        cj.push((i, delta));
                        row[i].push(j);
                    }
                }
                for &(i, _) in cj.iter() {
                    slot[i] = usize::MAX;
                }
            }

            for &j in &touched_cols {
                if col_cnt[j] != col[j].len() && col_set.remove(&(col_cnt[j], j)) {
                    col_cnt[j] = col[j].len();
                    col_set.insert((col_cnt[j], j));
                }
            }
            for &i in &touched_rows {
                if row_cnt[i] != row[i].len() && row_set.remove(&(row_cnt[i], i)) {
                    row_cnt[i] = row[i].len();
                    row_set.insert((row_cnt[i], i));
                }
            }
            // fill-in rows also changed counts
            for &(i, _) in &lcol {
                if row_cnt[i] != row[i].len() && row_set.remove(&(row_cnt[i], i)) {
                    row_cnt[i] = row[i].len();
                    row_set.insert((row_cnt[i], i));
                }
            }
            touched_cols.clear();
            touched_rows.clear();

            f.piv_row.push(r);
            f.piv_pos.push(c);
            f.piv_val.push(p);
            for &(i, l) in &lcol {
                f.l_idx.push(i);
                f.l_val.push(l);
            }
            f.l_start.push(f.l_idx.len());
            for &(j, u) in &urow {
                f.u_idx.push(j);
                f.u_val.push(u);
            }
            f.u_start.push(f.u_idx.len());
        }
        Ok(f)
    }

    pub fn num_etas(&self) -> usize {
        self.etas.len()
    }

    /// Records the replacement of basis position `pos` by a column whose
    /// FTRAN image (indexed by position) is `alpha`.
    pub fn push_eta(&mut self, pos: usize, alpha: &[f64]) {
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for (i, &a) in alpha.iter().enumerate() {
            if i != pos && a != 0.0 {
                idx.push(i);
                val.push(a);
            }
        }
        self.etas.push(Eta { pos, pivot: alpha[pos], idx, val });
    }

    /// Solves `B x = b`. `work` holds `b` indexed by row and is clobbered;
    /// `out` receives `x` indexed by basis position.
    pub fn ftran(&self, work: &mut [f64], out: &mut [f64]) {
        for k in 0..self.m {
            let v = work[self.piv_row[k]];
            if v != 0.0 {
                for e in self.l_start[k]..self.l_start[k + 1] {
                    work[self.l_idx[e]] -= self.l_val[e] * v;
                }
            }
        }
        for k in (0..self.m).rev() {
            let mut v = work[self.piv_row[k]];
            for e in self.u_start[k]..self.u_start[k + 1] {
                v -= self.u_val[e] * out[self.u_idx[e]];
            }
            out[self.piv_pos[k]] = v / self.piv_val[k];
        }
        for eta in &self.etas {
            let xp = out[eta.pos] / eta.pivot;
            if xp != 0.0 {
                for (&i, &a) in eta.idx.iter().zip(&eta.val) {
                    out[i] -= a * xp;
                }
            }
            out[eta.pos] = xp;
        }
    }

    /// Solves `B^T y = c`. `work` holds `c` indexed by basis position and is
    /// clobbered; `out` receives `y` indexed by row.
    pub fn btran(&self, work: &mut [f64], out: &mut [f64]) {
        for eta in self.etas.iter().rev() {
            let mut s = work[eta.pos];
            for (&i, &a) in eta.idx.iter().zip(&eta.val) {
                s -= a * work[i];
            }
            work[eta.pos] = s / eta.pivot;
        }
        for k in 0..self.m {
            let w = work[self.piv_pos[k]] / self.piv_val[k];
            out[self.piv_row[k]] = w;
            if w != 0.0 {
                for e in self.u_start[k]..self.u_start[k + 1] {
                    work[self.u_idx[e]] -= self.u_val[e] * w;
                }
            }
        }
        for k in (0..self.m).rev() {
            let mut s = 0.0;
            for e in self.l_start[k]..self.l_start[k + 1] {
                s += self.l_val[e] * out[self.l_idx[e]];
            }
            out[self.piv_row[k]] -= s;
        }
    }
}

fn col_max(c: &[(usize, f64)]) -> f64 {
    c.iter().fold(0.0f64, |m, &(_, a)| m.max(a.abs()))
}

fn select_pivot(
    col: &[Vec<(usize, f64)>],
    row: &[Vec<usize>],
    col_set: &BTreeSet<(usize, usize)>,
    row_set: &BTreeSet<(usize, usize)>,
) -> Option<(usize, usize, f64)> {
    let max_cnt = col_set.iter().next_back().map(|&(c, _)| c).unwrap_or(0).max(
        row_set.iter().next_back().map(|&(c, _)| c).unwrap_or(0),
    );
    let mut best: Option<(usize, usize, usize, f64)> = None;
    let consider = |cost: usize, r: usize, c: usize, a: f64, best: &mut Option<(usize, usize, usize, f64)>| {
        let better = match best {
            None => true,
            Some((bc, _, _, ba)) => cost < *bc || (cost == *bc && a.abs() > ba.abs()),
        };
        if better {
            *best = Some((cost, r, c, a));
        }
    };
    for cnt in 1..=max_cnt {
        for &(_, j) in col_set.range((cnt, 0)..(cnt + 1, 0)).take(SEARCH_WIDTH) {
            let cm = col_max(&col[j]);
            if cm < ABS_PIVOT_TOL {
                continue;
            }
            for &(i, a) in &col[j] {
                if a.abs() >= THRESHOLD * cm && a.abs() >= ABS_PIVOT_TOL {
                    let cost = (row[i].len() - 1) * (cnt - 1);
                    consider(cost, i, j, a, &mut best);
                }
            }
        }
        if matches!(best, Some((c, ..)) if c <= (cnt - 1) * cnt) {
            break;
        }
        for &(_, i) in row_set.range((cnt, 0)..(cnt + 1, 0)).take(SEARCH_WIDTH) {
            for &j in &row[i] {
                let cj = &col[j];
                let Some(&(_, a)) = cj.iter().find(|&&(ii, _)| ii == i) else { continue };
                let cm = col_max(cj);
                if a.abs() >= THRESHOLD * cm && a.abs() >= ABS_PIVOT_TOL {
                    let cost = (cnt - 1) * (cj.len() - 1);
                    consider(cost, i, j, a, &mut best);
                }
            }
        }
        if matches!(best, Some((c, ..)) if c <= cnt * cnt) {
            break;
        }
    }
    best.map(|(_, r, c, a)| (r, c, a))
}
