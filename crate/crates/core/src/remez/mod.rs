//! Exchange-based minimax oracle: the exact best uniform approximation of
//! sgn(x) on `[-A,-1] u [1,B]` by polynomials of degree <= n.
//!
//! The error of the optimum decays like e^{-n eta}, far below double
//! precision already for moderate n, so the levelled solves and point
//! refinements run in fixed-point arithmetic whose width scales with n.
//! Doubles are still used where they are safe: bracketing the critical
//! points of P (zeros of P', whose locations do not suffer the sgn
//! cancellation) before polishing them in fixed point.

mod cheb;
mod fixed;
mod grid;

pub use cheb::ChebPoly;
pub use fixed::{Fx, PrecisionContext};
pub use grid::grid_reference;

use crate::domain::{self, TwoIntervalDomain};
use crate::error::{Error, Result};

pub const MAX_EXCHANGE_ITERATIONS: usize = 200;

/// Alternation-pattern taxonomy for the two-interval sign problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    /// n+3 alternation points, all four interval endpoints among them.
    A,
    /// n+2 alternation points, three endpoints.
    B,
    /// n+2 alternation points, four endpoints (one critical point of P
    /// falls outside the hull).
    C,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::A => "a",
            CaseLabel::B => "b",
            CaseLabel::C => "c",
        }
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Output of [`best_approx`]: the minimax polynomial with its certificate
/// ingredients.
#[derive(Debug, Clone)]
pub struct BestApproxResult {
    pub poly: ChebPoly,
    /// Levelled minimax error L_n (the |h| of the converged reference).
    pub l: Fx,
    /// Alternation points with the sign of P - sgn there, increasing in x.
    pub alternation: Vec<(f64, i8)>,
    /// Number of alternation points (n+2 or n+3).
    pub m: usize,
    /// Alternation points that are critical points of P (interior extrema).
    pub critical_count: usize,
    /// Alternation points sitting at interval endpoints.
    pub endpoint_count: usize,
    /// a / b / c pattern; `None` for n < 2 where the taxonomy needs
    /// interior critical points.
    pub case_label: Option<CaseLabel>,
    /// Critical points of P inside `[-A,-1]`.
    pub n1: usize,
    /// Critical points of P inside `[1,B]`.
    pub n2: usize,
    pub iterations: usize,
    pub digits: u32,
    /// Full-precision alternation set, kept for verification.
    alt_fx: Vec<(Fx, i8)>,
}

#[derive(Clone)]
struct Cand {
    x: Fx,
    q: Fx, // P(x) - sgn(x)
}

/// Target value of the approximation problem at x (x must lie in E).
fn target_sign(x: &Fx) -> i64 {
    if x.is_negative() {
        -1
    } else {
        1
    }
}

fn err_at(poly: &ChebPoly, x: &Fx, ctx: &PrecisionContext) -> Fx {
    poly.eval(x).sub(&ctx.from_i64(target_sign(x)))
}

/// Chebyshev-clustered points on [lo, hi], ascending, endpoints included
/// (k = 1 gives the midpoint).
fn cos_points(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    assert!(k >= 1);
    if k == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let mid = 0.5 * (lo + hi);
    let hw = 0.5 * (hi - lo);
    (0..k)
        .map(|j| {
            let t = std::f64::consts::PI * j as f64 / (k - 1) as f64;
            (mid - hw * t.cos()).clamp(lo, hi)
        })
        .collect()
}

/// Starting reference: n+2 points split between the intervals in
/// proportion to the limiting distribution of alternation points, which
/// allocates the harmonic-measure fraction of the left interval.
fn initial_reference(dom: &TwoIntervalDomain, n: u32, ctx: &PrecisionContext) -> Result<Vec<Fx>> {
    let m = n as usize + 2;
    let (a, b) = (dom.a(), dom.b());
    let mut xs: Vec<f64> = Vec::with_capacity(m);
    if dom.is_degenerate() {
        xs.extend(cos_points(-a, -1.0, m - 1));
        xs.push(1.0);
    } else {
        let c0 = domain::c0_abs(dom, 1e-9)?;
        let alpha = domain::harmonic_measure(dom, c0, 1e15, 1e-9)?;
        let k_left = ((alpha * m as f64).round() as usize).clamp(1, m - 1);
        xs.extend(cos_points(-a, -1.0, k_left));
        xs.extend(cos_points(1.0, b, m - k_left));
    }
    xs.iter().map(|&x| ctx.from_f64(x)).collect()
}

/// Solve the levelled alternation system: degree-n Chebyshev coefficients
/// plus the signed level h from P(x_i) - sgn(x_i) = (-1)^i h.
fn solve_levelled(
    refs: &[Fx],
    n: usize,
    hull: (&Fx, &Fx),
    ctx: &PrecisionContext,
) -> Result<(Vec<Fx>, Fx)> {
    let m = refs.len();
    debug_assert_eq!(m, n + 2);
    let width = hull.1.sub(hull.0);
    let mut rows: Vec<Vec<Fx>> = Vec::with_capacity(m);
    for (i, x) in refs.iter().enumerate() {
        let u = x.mul2().sub(hull.0).sub(hull.1).div(&width)?;
        let u2 = u.mul2();
        let mut row = Vec::with_capacity(m + 1);
        row.push(ctx.from_i64(1)); // T_0
        if n >= 1 {
            row.push(u.clone());
        }
        for k in 2..=n {
            let t = u2.mul(&row[k - 1]).sub(&row[k - 2]);
            row.push(t);
        }
        row.push(ctx.from_i64(if i % 2 == 0 { 1 } else { -1 }));
        row.push(ctx.from_i64(target_sign(x)));
        rows.push(row);
    }
    let sol = eliminate(&mut rows, ctx)?;
    let mut coefs = sol;
    let h = coefs.pop().expect("system has the level unknown");
    Ok((coefs, h))
}

/// In-place Gaussian elimination with partial pivoting on the augmented
/// matrix; |T_k| <= 1 on the hull keeps growth mild.
fn eliminate(rows: &mut [Vec<Fx>], ctx: &PrecisionContext) -> Result<Vec<Fx>> {
    let m = rows.len();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&r, &s| rows[r][col].abs().cmp(&rows[s][col].abs()))
            .expect("nonempty pivot range");
        if rows[pivot][col].is_zero() {
            return Err(Error::InsufficientPrecision {
                digits: ctx.digits(),
                n: m.saturating_sub(2) as u32,
                what: "levelled alternation system is singular at this precision",
            });
        }
        rows.swap(col, pivot);
        for r in col + 1..m {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].div(&rows[col][col])?;
            for c in col..=m {
                let t = rows[r][c].sub(&factor.mul(&rows[col][c]));
                rows[r][c] = t;
            }
        }
    }
    let mut sol = vec![ctx.zero(); m];
    for row in (0..m).rev() {
        let mut acc = rows[row][m].clone();
        for c in row + 1..m {
            acc = acc.sub(&rows[row][c].mul(&sol[c]));
        }
        sol[row] = acc.div(&rows[row][row])?;
    }
    Ok(sol)
}

/// Polish a critical point of P inside a sign-change bracket of P':
/// safeguarded Newton on P' (quadratic near the simple zero, bisection
/// when a step escapes the bracket).
fn fx_newton(
    dpoly: &ChebPoly,
    ddpoly: &ChebPoly,
    lo_f: f64,
    hi_f: f64,
    sign_lo: i32,
    ctx: &PrecisionContext,
) -> Result<Fx> {
    let mut lo = ctx.from_f64(lo_f)?;
    let mut hi = ctx.from_f64(hi_f)?;
    let mut x = lo.add(&hi).half();
    let mut prev = lo.clone();
    let limit = ctx.bits() as usize + 48;
    for _ in 0..limit {
        let f = dpoly.eval(&x);
        if f.is_zero() {
            break;
        }
        if f.signum() == sign_lo {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let fp = ddpoly.eval(&x);
        let mut next = if fp.is_zero() {
            lo.add(&hi).half()
        } else {
            x.sub(&f.div(&fp)?)
        };
        if !(next > lo && next < hi) {
            next = lo.add(&hi).half();
        }
        if next == x || next == prev {
            break;
        }
        prev = x;
        x = next;
    }
    Ok(x)
}

/// All useful error-extremum candidates for the current approximant: the
/// polished critical points of P inside each interval, the interval
/// endpoints, and the current reference (whose error values are exactly
/// +-h and guarantee the exchange never regresses).
fn error_candidates(
    poly: &ChebPoly,
    dom: &TwoIntervalDomain,
    refs: &[Fx],
    ctx: &PrecisionContext,
) -> Result<Vec<Cand>> {
    let n = poly.degree();
    let mut cands: Vec<Cand> = Vec::new();
    let push_x = |x: Fx, cands: &mut Vec<Cand>| {
        let q = err_at(poly, &x, ctx);
        cands.push(Cand { x, q });
    };

    let mut intervals = vec![(-dom.a(), -1.0)];
    if !dom.is_degenerate() {
        intervals.push((1.0, dom.b()));
    }

    if n >= 1 {
        let dpoly = poly.derivative(ctx);
        let ddpoly = dpoly.derivative(ctx);
        let dcoefs = dpoly.coefs_f64();
        let (hlo, hhi) = poly.hull_f64();
        for &(lo, hi) in &intervals {
            let r = (20 * n).max(512);
            let xs = cos_points(lo, hi, r + 1);
            let dv: Vec<f64> = xs
                .iter()
                .map(|&x| cheb::clenshaw_f64(&dcoefs, cheb::to_unit_f64(hlo, hhi, x)))
                .collect();
            for j in 0..r {
                if dv[j] == 0.0 {
                    if (j == 0 || dv[j - 1] != 0.0) && dv[j + 1] != 0.0 {
                        push_x(ctx.from_f64(xs[j])?, &mut cands);
                    }
                    continue;
                }
                if dv[j] * dv[j + 1] < 0.0 {
                    let s = if dv[j] > 0.0 { 1 } else { -1 };
                    let x = fx_newton(&dpoly, &ddpoly, xs[j], xs[j + 1], s, ctx)?;
                    push_x(x, &mut cands);
                }
            }
        }
    }

    for &(lo, hi) in &intervals {
        push_x(ctx.from_f64(lo)?, &mut cands);
        push_x(ctx.from_f64(hi)?, &mut cands);
    }
    if dom.is_degenerate() {
        push_x(ctx.from_i64(1), &mut cands);
    }
    for x in refs {
        push_x(x.clone(), &mut cands);
    }
    cands.sort_by(|p, q| p.x.cmp(&q.x));
    Ok(cands)
}

/// Merge runs of candidates whose error has the same sign, keeping the
/// largest |q| per run; the survivors alternate by construction.
fn collapse_runs(cands: Vec<Cand>) -> Vec<Cand> {
    let mut kept: Vec<Cand> = Vec::with_capacity(cands.len());
    for c in cands {
        match kept.last_mut() {
            Some(last) if last.q.signum() == c.q.signum() => {
                if c.q.abs() > last.q.abs() {
                    *last = c;
                }
            }
            _ => kept.push(c),
        }
    }
    kept
}

/// Reduce an alternating candidate list to exactly `target` points while
/// keeping the global maximum: odd excess drops the weaker end point, even
/// excess drops the interior adjacent pair with the smallest larger-|q|.
fn trim_alternating(kept: &mut Vec<Cand>, target: usize) {
    while kept.len() > target {
        let gmax = kept
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.q.abs().cmp(&q.q.abs()))
            .map(|(i, _)| i)
            .expect("nonempty candidate list");
        if (kept.len() - target) % 2 == 1 {
            let drop_first = if gmax == 0 {
                false
            } else if gmax == kept.len() - 1 {
                true
            } else {
                kept[0].q.abs() <= kept[kept.len() - 1].q.abs()
            };
            if drop_first {
                kept.remove(0);
            } else {
                kept.pop();
            }
        } else {
            let mut best: Option<(usize, Fx)> = None;
            for i in 0..kept.len() - 1 {
                if i == gmax || i + 1 == gmax {
                    continue;
                }
                let cost = kept[i].q.abs().max(kept[i + 1].q.abs());
                if best.as_ref().map_or(true, |(_, c)| cost < *c) {
                    best = Some((i, cost));
                }
            }
            let (i, _) = best.expect("an adjacent pair avoiding the maximum exists");
            kept.remove(i + 1);
            kept.remove(i);
        }
    }
}

/// Next reference: alternating extrema of maximal |q| containing the
/// global maximum, every member at or above the current level.
fn select_reference(
    cands: Vec<Cand>,
    h_abs: &Fx,
    n: u32,
    dom: &TwoIntervalDomain,
    ctx: &PrecisionContext,
) -> Result<Vec<Fx>> {
    let target = n as usize + 2;
    let floor = h_abs.mul(&ctx.from_f64(1.0 - 1e-9).expect("finite"));
    let insufficient = || Error::InsufficientPrecision {
        digits: ctx.digits(),
        n,
        what: "alternation lost in the exchange step; raise the working precision",
    };

    if dom.is_degenerate() {
        let one = ctx.from_i64(1);
        let q1 = cands
            .iter()
            .filter(|c| c.x == one)
            .max_by(|p, q| p.q.abs().cmp(&q.q.abs()))
            .cloned()
            .ok_or_else(insufficient)?;
        let mut pool: Vec<Cand> = cands
            .into_iter()
            .filter(|c| c.x.is_negative() && c.q.abs() >= floor)
            .collect();
        for _ in 0..4 {
            let mut kept = collapse_runs(pool.clone());
            if kept.len() < target - 1 {
                return Err(insufficient());
            }
            trim_alternating(&mut kept, target - 1);
            let last = kept.last().expect("nonempty reference");
            if last.q.signum() != q1.q.signum() {
                let mut refs: Vec<Fx> = kept.into_iter().map(|c| c.x).collect();
                refs.push(q1.x);
                return Ok(refs);
            }
            let bad = last.x.clone();
            pool.retain(|c| c.x != bad);
        }
        return Err(insufficient());
    }

    let strong: Vec<Cand> = cands.into_iter().filter(|c| c.q.abs() >= floor).collect();
    let mut kept = collapse_runs(strong);
    if kept.len() < target {
        return Err(insufficient());
    }
    trim_alternating(&mut kept, target);
    Ok(kept.into_iter().map(|c| c.x).collect())
}

/// Best uniform approximation of sgn on `[-A,-1] u [1,B]` (B = 1 treated as
/// the singleton constraint at x = 1) by multi-point exchange.
///
/// `tol` bounds the relative width of the final two-sided bracket around
/// the true minimax error: the levelled |h| is a lower bound, the global
/// error maximum an upper bound, and iteration stops once the ratio is
/// below 1 + tol.
pub fn best_approx(
    dom: &TwoIntervalDomain,
    n: u32,
    prec: PrecisionContext,
    tol: f64,
) -> Result<BestApproxResult> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::InvalidParameter {
            what: format!("bracket tolerance must lie in (0, 0.1), got {tol}"),
        });
    }
    let ctx = prec;
    let hull_lo = ctx.from_f64(-dom.a())?;
    let hull_hi = ctx.from_f64(dom.b())?;
    let mut refs = initial_reference(dom, n, &ctx)?;
    // 1 + tol assembled in fixed point: below double epsilon the f64 sum
    // would collapse to 1 and the bracket test could never close.
    let tol_fx = ctx.from_f64(tol)?;
    let mut bracket: Option<(Fx, Fx)> = None;

    for iter in 1..=MAX_EXCHANGE_ITERATIONS {
        let (coefs, h) = solve_levelled(&refs, n as usize, (&hull_lo, &hull_hi), &ctx)?;
        let poly = ChebPoly::new(coefs, hull_lo.clone(), hull_hi.clone());
        if h.is_zero() {
            return Err(Error::InsufficientPrecision {
                digits: ctx.digits(),
                n,
                what: "levelled solve returned a zero level; raise the working precision",
            });
        }
        let h_abs = h.abs();
        let cands = error_candidates(&poly, dom, &refs, &ctx)?;
        let m_max = cands
            .iter()
            .map(|c| c.q.abs())
            .max()
            .expect("candidate set contains the endpoints");
        let bound = h_abs.add(&h_abs.mul(&tol_fx));
        if m_max <= bound {
            return finalize(dom, poly, h_abs, cands, iter, tol, &ctx);
        }
        refs = select_reference(cands, &h_abs, n, dom, &ctx)?;
        bracket = Some((h_abs, m_max));
    }

    let (lower, upper) = bracket.expect("at least one exchange iteration ran");
    Err(Error::ExchangeStagnation {
        iterations: MAX_EXCHANGE_ITERATIONS,
        lower: lower.to_decimal(ctx.digits()),
        upper: upper.to_decimal(ctx.digits()),
    })
}

fn interval_endpoints(dom: &TwoIntervalDomain) -> Vec<f64> {
    if dom.is_degenerate() {
        vec![-dom.a(), -1.0, 1.0]
    } else {
        vec![-dom.a(), -1.0, 1.0, dom.b()]
    }
}

fn classify_counts(n: u32, m: usize, n_end: usize, k_crit: usize) -> Result<Option<CaseLabel>> {
    if n < 2 {
        return Ok(None);
    }
    let n = n as usize;
    let label = match (m, n_end) {
        (m_, 4) if m_ == n + 3 && k_crit == n - 1 => CaseLabel::A,
        (m_, 3) if m_ == n + 2 && k_crit == n - 1 => CaseLabel::B,
        (m_, 4) if m_ == n + 2 && k_crit == n - 2 => CaseLabel::C,
        _ => {
            return Err(Error::AlternationLoss {
                what: format!(
                    "alternation counts (m={m}, endpoint={n_end}, critical={k_crit}) fit no pattern for degree {n}"
                ),
            })
        }
    };
    Ok(Some(label))
}

#[allow(clippy::too_many_arguments)]
fn finalize(
    dom: &TwoIntervalDomain,
    poly: ChebPoly,
    h_abs: Fx,
    cands: Vec<Cand>,
    iterations: usize,
    tol: f64,
    ctx: &PrecisionContext,
) -> Result<BestApproxResult> {
    let n = poly.degree() as u32;
    // Membership threshold for the final alternation set: far above the
    // fixed-point rounding floor of genuine level points, far below the
    // O(1) deficit of a non-alternant endpoint.
    let thr = (10.0 * tol).max(1e-8);
    let member = h_abs.mul(&ctx.from_f64(1.0 - thr)?);
    let strong: Vec<Cand> = cands.into_iter().filter(|c| c.q.abs() >= member).collect();
    let alt = collapse_runs(strong);
    let m = alt.len();
    let nn = n as usize;
    if m < nn + 2 || m > nn + 3 {
        return Err(Error::AlternationLoss {
            what: format!(
                "{m} near-level alternation points for degree {n}; expected {} or {}",
                nn + 2,
                nn + 3
            ),
        });
    }

    let ends = interval_endpoints(dom);
    let et = 1e-10 * (dom.b() + dom.a());
    let mut endpoint_count = 0usize;
    let mut alternation: Vec<(f64, i8)> = Vec::with_capacity(m);
    let mut alt_fx: Vec<(Fx, i8)> = Vec::with_capacity(m);
    for c in &alt {
        let xf = c.x.to_f64();
        if ends.iter().any(|e| (xf - e).abs() < et) {
            endpoint_count += 1;
        }
        let s = c.q.signum() as i8;
        alternation.push((xf, s));
        alt_fx.push((c.x.clone(), s));
    }
    let critical_count = m - endpoint_count;
    let case_label = classify_counts(n, m, endpoint_count, critical_count)?;

    let n1 = derivative_sign_changes(&poly, ctx, -dom.a(), -1.0)?;
    let n2 = if dom.is_degenerate() {
        0
    } else {
        derivative_sign_changes(&poly, ctx, 1.0, dom.b())?
    };

    Ok(BestApproxResult {
        poly,
        l: h_abs,
        alternation,
        m,
        critical_count,
        endpoint_count,
        case_label,
        n1,
        n2,
        iterations,
        digits: ctx.digits(),
        alt_fx,
    })
}

/// Equioscillation certificate: strict sign alternation, level equality at
/// every alternation point (relative `tol`), and the global bound
/// |P - sgn| <= L(1+tol) on a dense scan of both intervals. Returns the
/// scan margin (L(1+tol) - max|Q|) / L.
pub fn verify_alternation(
    result: &BestApproxResult,
    dom: &TwoIntervalDomain,
    tol: f64,
) -> Result<f64> {
    let ctx = PrecisionContext::new(result.digits)?;
    let n = result.poly.degree();
    if result.alt_fx.len() < n + 2 {
        return Err(Error::AlternationLoss {
            what: format!(
                "only {} alternation points for degree {n}",
                result.alt_fx.len()
            ),
        });
    }
    for w in result.alt_fx.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(Error::AlternationLoss {
                what: "alternation signs fail to alternate".into(),
            });
        }
    }
    let allowed = result.l.mul(&ctx.from_f64(tol)?);
    for (x, s) in &result.alt_fx {
        let q = err_at(&result.poly, x, &ctx);
        if q.signum() as i8 != *s {
            return Err(Error::AlternationLoss {
                what: format!("stored sign disagrees with the error at x={}", x.to_f64()),
            });
        }
        if q.abs().sub(&result.l).abs() > allowed {
            return Err(Error::AlternationLoss {
                what: format!("level equality violated at x={}", x.to_f64()),
            });
        }
    }

    let bound = result.l.add(&result.l.mul(&ctx.from_f64(tol)?));
    let mut max_scan = ctx.zero();
    for (lo, hi) in scan_intervals(dom) {
        let r = (20 * n).max(512);
        for x in cos_points(lo, hi, r + 1) {
            let q = err_at(&result.poly, &ctx.from_f64(x)?, &ctx).abs();
            if q > max_scan {
                max_scan = q;
            }
        }
    }
    if max_scan > bound {
        return Err(Error::AlternationLoss {
            what: format!(
                "global bound violated: max |P - sgn| = {} exceeds L(1+tol) = {}",
                max_scan.to_decimal(8),
                bound.to_decimal(8)
            ),
        });
    }
    bound.sub(&max_scan).div(&result.l).map(|m| m.to_f64())
}

fn scan_intervals(dom: &TwoIntervalDomain) -> Vec<(f64, f64)> {
    if dom.is_degenerate() {
        vec![(-dom.a(), -1.0)]
    } else {
        vec![(-dom.a(), -1.0), (1.0, dom.b())]
    }
}

/// Re-derive the a/b/c pattern from the alternation set and the domain's
/// endpoints (n < 2 has no pattern: the taxonomy needs interior critical
/// points).
pub fn classify_case(
    result: &BestApproxResult,
    dom: &TwoIntervalDomain,
) -> Result<Option<CaseLabel>> {
    let ends = interval_endpoints(dom);
    let et = 1e-10 * (dom.b() + dom.a());
    let n_end = result
        .alternation
        .iter()
        .filter(|(x, _)| ends.iter().any(|e| (x - e).abs() < et))
        .count();
    let k_crit = result.m - n_end;
    classify_counts(result.poly.degree() as u32, result.m, n_end, k_crit)
}

/// Critical points of the approximant inside [lo, hi]: sign changes of P'
/// on a fine scan, re-counted at higher resolution until stable. These are
/// the zero counts obeying the harmonic-measure law n1 ~ n*alpha.
pub fn count_zeros(result: &BestApproxResult, lo: f64, hi: f64) -> Result<usize> {
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter {
            what: format!("invalid interval [{lo}, {hi}]"),
        });
    }
    let ctx = PrecisionContext::new(result.digits)?;
    derivative_sign_changes(&result.poly, &ctx, lo, hi)
}

fn derivative_sign_changes(
    poly: &ChebPoly,
    ctx: &PrecisionContext,
    lo: f64,
    hi: f64,
) -> Result<usize> {
    if poly.degree() == 0 || lo == hi {
        return Ok(0);
    }
    let dpoly = poly.derivative(ctx);
    let dcoefs = dpoly.coefs_f64();
    let (hlo, hhi) = poly.hull_f64();
    let count_at = |resolution: usize| -> usize {
        let mut changes = 0usize;
        let mut last_sign = 0i8;
        for x in cos_points(lo, hi, resolution + 1) {
            let v = cheb::clenshaw_f64(&dcoefs, cheb::to_unit_f64(hlo, hhi, x));
            let s = if v > 0.0 {
                1i8
            } else if v < 0.0 {
                -1i8
            } else {
                0i8
            };
            if s != 0 {
                if last_sign != 0 && s != last_sign {
                    changes += 1;
                }
                last_sign = s;
            }
        }
        changes
    };
    let base = (40 * poly.degree()).max(1024);
    let c1 = count_at(base);
    let c2 = count_at(4 * base);
    if c1 == c2 {
        return Ok(c1);
    }
    let c3 = count_at(16 * base);
    if c3 == c2 {
        return Ok(c3);
    }
    Err(Error::ConsistencyCheck {
        what: "zero count unstable under scan refinement",
        diff: (c3 as f64 - c2 as f64).abs(),
        allowed: 0.0,
    })
}
