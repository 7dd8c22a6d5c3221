//! Independent small-degree validator: discrete minimax on a fixed dense
//! grid in plain doubles, followed by off-grid parabolic polishing of the
//! reference. Shares no arithmetic with the fixed-point oracle, which is
//! the point — agreement between the two certifies both.

use super::cheb::{clenshaw_f64, to_unit_f64};
use super::cos_points;
use crate::domain::TwoIntervalDomain;
use crate::error::{Error, Result};

/// Minimax error of the degree-n approximation to sgn, accurate to about
/// 1e-8 relative for the machine-range errors of n <= 10.
pub fn grid_reference(dom: &TwoIntervalDomain, n: u32, grid_size: usize) -> Result<f64> {
    if n > 10 {
        return Err(Error::InvalidParameter {
            what: format!("grid validator is limited to degree 10, got {n}"),
        });
    }
    let g = grid_size.max(2000);
    let nn = n as usize;
    let m = nn + 2;
    let (a, b) = (dom.a(), dom.b());
    let hull = (-a, b);

    let mut grid: Vec<f64> = cos_points(-a, -1.0, g);
    let left_len = grid.len();
    if dom.is_degenerate() {
        grid.push(1.0);
    } else {
        grid.extend(cos_points(1.0, b, g));
    }

    // Initial reference indices, split by interval length (the exchange
    // corrects any imbalance within a few iterations).
    let k_left = if dom.is_degenerate() {
        m - 1
    } else {
        let frac = (a - 1.0) / ((a - 1.0) + (b - 1.0));
        ((frac * m as f64).round() as usize).clamp(1, m - 1)
    };
    let mut refs: Vec<usize> = Vec::with_capacity(m);
    spread_indices(0, left_len, k_left, &mut refs);
    spread_indices(left_len, grid.len(), m - k_left, &mut refs);

    let mut coefs = vec![0.0f64; nn + 1];
    let mut level = 0.0f64;
    let mut converged = false;
    for _ in 0..400 {
        let positions: Vec<f64> = refs.iter().map(|&i| grid[i]).collect();
        let (c, h) = solve_levelled_f64(&positions, nn, hull)?;
        coefs = c;
        level = h.abs();
        let q: Vec<f64> = grid
            .iter()
            .map(|&x| clenshaw_f64(&coefs, to_unit_f64(hull.0, hull.1, x)) - sgn(x))
            .collect();
        let m_max = q.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if m_max <= level * (1.0 + 1e-11) {
            converged = true;
            break;
        }
        refs = next_reference(&grid, &q, level, m, dom.is_degenerate(), left_len)?;
    }
    if !converged {
        return Err(Error::RootNonConvergence {
            what: "discrete minimax exchange on the reference grid",
            residual: level,
            iterations: 400,
        });
    }

    // Off-grid polish: quadratic vertex through (x-d, x, x+d) kills the
    // O(grid spacing^2) bias of on-grid extrema.
    let ends = [-a, -1.0, 1.0, b];
    let mut positions: Vec<f64> = refs.iter().map(|&i| grid[i]).collect();
    let span = b + a;
    for pass in 0..3 {
        let (c, _) = solve_levelled_f64(&positions, nn, hull)?;
        coefs = c;
        let base = span / g as f64 / (4.0f64).powi(pass);
        for x in positions.iter_mut() {
            if ends.iter().any(|e| (*x - e).abs() < 1e-13 * span) {
                continue;
            }
            let (lo, hi) = if *x < 0.0 { (-a, -1.0) } else { (1.0, b) };
            let d = base.min(0.25 * (hi - lo));
            let ev = |t: f64| clenshaw_f64(&coefs, to_unit_f64(hull.0, hull.1, t)) - sgn(t);
            let (qm, q0, qp) = (ev(*x - d), ev(*x), ev(*x + d));
            let den = qm - 2.0 * q0 + qp;
            let mut shift = 0.5 * d * (qm - qp) / den;
            if !shift.is_finite() || shift.abs() > d {
                shift = 0.0;
            }
            *x = (*x + shift).clamp(lo, hi);
        }
        positions.sort_by(|p, q| p.partial_cmp(q).expect("finite positions"));
    }
    let (_, h) = solve_levelled_f64(&positions, nn, hull)?;
    Ok(h.abs())
}

fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `count` indices spread evenly over [lo, hi).
fn spread_indices(lo: usize, hi: usize, count: usize, out: &mut Vec<usize>) {
    let len = hi - lo;
    if count == 1 {
        out.push(lo + len / 2);
        return;
    }
    for j in 0..count {
        let idx = lo + (j * (len - 1)) / (count - 1);
        out.push(idx);
    }
}

fn solve_levelled_f64(positions: &[f64], n: usize, hull: (f64, f64)) -> Result<(Vec<f64>, f64)> {
    let m = positions.len();
    debug_assert_eq!(m, n + 2);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, &x) in positions.iter().enumerate() {
        let u = to_unit_f64(hull.0, hull.1, x);
        let mut row = Vec::with_capacity(m + 1);
        row.push(1.0);
        if n >= 1 {
            row.push(u);
        }
        for k in 2..=n {
            let t = 2.0 * u * row[k - 1] - row[k - 2];
            row.push(t);
        }
        row.push(if i % 2 == 0 { 1.0 } else { -1.0 });
        row.push(sgn(x));
        rows.push(row);
    }
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&r, &s| {
                rows[r][col]
                    .abs()
                    .partial_cmp(&rows[s][col].abs())
                    .expect("finite")
            })
            .expect("nonempty range");
        if rows[pivot][col] == 0.0 {
            return Err(Error::RootNonConvergence {
                what: "grid levelled system is singular",
                residual: 0.0,
                iterations: 0,
            });
        }
        rows.swap(col, pivot);
        for r in col + 1..m {
            let factor = rows[r][col] / rows[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..=m {
                rows[r][c] -= factor * rows[col][c];
            }
        }
    }
    let mut sol = vec![0.0f64; m];
    for row in (0..m).rev() {
        let mut acc = rows[row][m];
        for c in row + 1..m {
            acc -= rows[row][c] * sol[c];
        }
        sol[row] = acc / rows[row][row];
    }
    let h = sol.pop().expect("level unknown present");
    Ok((sol, h))
}

/// Discrete analogue of the exchange selection: same-sign runs of the grid
/// error collapse to their maximum, weak points are filtered at the current
/// level, and the alternating survivors are trimmed to m keeping the
/// global maximum.
fn next_reference(
    grid: &[f64],
    q: &[f64],
    level: f64,
    m: usize,
    degenerate: bool,
    left_len: usize,
) -> Result<Vec<usize>> {
    let floor = level * (1.0 - 1e-9);
    let stall = || Error::RootNonConvergence {
        what: "grid exchange lost alternation",
        residual: level,
        iterations: 0,
    };

    let collapse = |range: std::ops::Range<usize>| -> Vec<(usize, f64)> {
        let mut kept: Vec<(usize, f64)> = Vec::new();
        for i in range {
            if q[i].abs() < floor || q[i] == 0.0 {
                continue;
            }
            match kept.last_mut() {
                Some((j, qj)) if qj.signum() == q[i].signum() => {
                    if q[i].abs() > qj.abs() {
                        *j = i;
                        *qj = q[i];
                    }
                }
                _ => kept.push((i, q[i])),
            }
        }
        kept
    };

    if degenerate {
        let i_one = grid.len() - 1;
        let q1 = q[i_one];
        let mut pool = collapse(0..left_len);
        for _ in 0..4 {
            let mut kept = pool.clone();
            if kept.len() < m - 1 {
                return Err(stall());
            }
            trim_pts(&mut kept, m - 1);
            let last = *kept.last().expect("nonempty");
            if last.1.signum() != q1.signum() || q1 == 0.0 {
                if q1 == 0.0 {
                    return Err(stall());
                }
                let mut refs: Vec<usize> = kept.into_iter().map(|(i, _)| i).collect();
                refs.push(i_one);
                return Ok(refs);
            }
            pool.retain(|&(i, _)| i != last.0);
        }
        return Err(stall());
    }

    let mut kept = collapse(0..grid.len());
    if kept.len() < m {
        return Err(stall());
    }
    trim_pts(&mut kept, m);
    Ok(kept.into_iter().map(|(i, _)| i).collect())
}

fn trim_pts(kept: &mut Vec<(usize, f64)>, target: usize) {
    while kept.len() > target {
        let gmax = kept
            .iter()
            .enumerate()
            .max_by(|(_, (_, p)), (_, (_, q))| p.abs().partial_cmp(&q.abs()).expect("finite"))
            .map(|(i, _)| i)
            .expect("nonempty");
        if (kept.len() - target) % 2 == 1 {
            let drop_first = if gmax == 0 {
                false
            } else if gmax == kept.len() - 1 {
                true
            } else {
                kept[0].1.abs() <= kept[kept.len() - 1].1.abs()
            };
            if drop_first {
                kept.remove(0);
            } else {
                kept.pop();
            }
        } else {
            let mut best: Option<(usize, f64)> = None;
            for i in 0..kept.len() - 1 {
                if i == gmax || i + 1 == gmax {
                    continue;
                }
                let cost = kept[i].1.abs().max(kept[i + 1].1.abs());
                if best.map_or(true, |(_, c)| cost < c) {
                    best = Some((i, cost));
                }
            }
            let (i, _) = best.expect("a pair avoiding the maximum exists");
            kept.remove(i + 1);
            kept.remove(i);
        }
    }
}
