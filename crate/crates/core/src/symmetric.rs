//! Evaluation of the symmetric sum `Z(s)`, its derivative, the normalized
//! function `G(s)` whose zeros are the a-points, a brute-force multi-sum
//! oracle, and the two asymptotic models of `Z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{hoffman_expand, HoffmanTerm, Weights};
use crate::special::{ensure_finite, zeta, zeta_minus_one, ComplexPoint, EvalPrecision, ZetaEval};

/// Guard distance of `c s` from the zeta pole at 1.
pub const POLE_GUARD: f64 = 1e-10;
/// Below this |G(s)| the logarithmic derivative is refused.
pub const AT_APOINT: f64 = 1e-12;
/// Cancellation factor of the expansion beyond which the defining series
/// is summed directly.
const DIRECT_LOSS: f64 = 1e5;
/// Most tuples enumerated on the direct path.
const DIRECT_BUDGET: usize = 50_000;
/// Tail of the direct sum relative to `B M^sigma`.
const DIRECT_REL: f64 = 1e-17;

/// Target `a` of the equation `Z(s) = a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetValue {
    #[serde(with = "crate::special::re_im")]
    pub a: ComplexPoint,
}

impl TargetValue {
    pub fn new(a: ComplexPoint) -> Result<Self> {
        ensure_finite(a)?;
        Ok(TargetValue { a })
    }

    pub fn zero() -> Self {
        TargetValue {
            a: Complex64::new(0.0, 0.0),
        }
    }

    /// Exact test on both components: `G` is defined by a case split.
    pub fn is_zero(&self) -> bool {
        self.a.re == 0.0 && self.a.im == 0.0
    }
}

/// Value and derivative of `Z` at one point, with propagated error
/// estimates from the zeta factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEval {
    pub value: Complex64,
    pub deriv: Complex64,
    pub value_err: f64,
    pub deriv_err: f64,
}

/// The symmetric sum for a fixed weight vector.
#[derive(Debug, Clone)]
pub struct SymZeta {
    weights: Weights,
    expansion: Vec<HoffmanTerm>,
    prec: EvalPrecision,
    /// Distinct block sums across the expansion.
    factors: Vec<f64>,
    /// For each term, indices into `factors`.
    term_factors: Vec<Vec<usize>>,
    /// `-log M`, the smallest exponent `sum_j a_j log m_j` over tuples of
    /// distinct positive integers.
    log_inv_m: f64,
}

impl SymZeta {
    pub fn new(weights: Weights, prec: EvalPrecision) -> Result<Self> {
        prec.validate()?;
        let expansion = hoffman_expand(&weights)?;
        let mut factors: Vec<f64> = Vec::new();
        let mut term_factors = Vec::with_capacity(expansion.len());
        for term in &expansion {
            let idx = term
                .block_sums
                .iter()
                .map(|&c| match factors.iter().position(|&f| (f - c).abs() <= 1e-12 * c) {
                    Some(i) => i,
                    None => {
                        factors.push(c);
                        factors.len() - 1
                    }
                })
                .collect();
            term_factors.push(idx);
        }
        let log_inv_m = -weights.m().ln();
        Ok(SymZeta {
            weights,
            expansion,
            prec,
            factors,
            term_factors,
            log_inv_m,
        })
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn expansion(&self) -> &[HoffmanTerm] {
        &self.expansion
    }

    pub fn precision(&self) -> &EvalPrecision {
        &self.prec
    }

    /// Real points `1 / c_k` where some factor has its pole.
    pub fn poles(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.factors.iter().map(|c| 1.0 / c).collect();
        p.sort_by(f64::total_cmp);
        p
    }

    fn check_poles(&self, s: ComplexPoint) -> Result<()> {
        ensure_finite(s)?;
        for &c in &self.factors {
            if (s * c - 1.0).norm() < POLE_GUARD {
                return Err(Error::NearPole { pole: 1.0 / c });
            }
        }
        Ok(())
    }

    /// `Z(s)` and optionally `Z'(s)` from the expansion.
    ///
    /// The coefficients sum to zero, so each product is accumulated as
    /// `prod (1 + eta_k) - 1` with `eta = zeta - 1`; far to the right this
    /// keeps the relative accuracy of the tiny result.
    ///
    /// Where the terms of the expansion still cancel by many digits (rank
    /// three and up, far right) the defining series is summed directly.
    pub fn eval_full(&self, s: ComplexPoint, with_deriv: bool) -> Result<SymEval> {
        self.check_poles(s)?;
        if let Some(e) = self.eval_direct(s) {
            return Ok(e);
        }
        let etas: Vec<ZetaEval> = self
            .factors
            .iter()
            .map(|&c| zeta_minus_one(s * c, &self.prec, with_deriv))
            .collect::<Result<_>>()?;
        let zetas: Vec<Complex64> = etas.iter().map(|e| e.value + 1.0).collect();

        let mut value = KahanSum::default();
        let mut deriv = KahanSum::default();
        let mut value_err = 0.0;
        let mut deriv_err = 0.0;
        for (term, idx) in self.expansion.iter().zip(&self.term_factors) {
            let coef = term.coefficient as f64;
            let mut q = Complex64::new(0.0, 0.0);
            for &i in idx {
                q += etas[i].value + q * etas[i].value;
            }
            value.add(q * coef);
            // rounding of terms that cancel against each other
            value_err += 4.0 * f64::EPSILON * coef.abs() * q.norm();
            for (k, &i) in idx.iter().enumerate() {
                let others: f64 = idx
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, &m)| zetas[m].norm())
                    .product();
                value_err += coef.abs() * etas[i].value_err * others;
            }
            if with_deriv {
                for (k, &i) in idx.iter().enumerate() {
                    let c = self.factors[i];
                    let mut p = etas[i].deriv * c;
                    let mut p_err = etas[i].deriv_err * c;
                    for (j, &m) in idx.iter().enumerate() {
                        if j != k {
                            p_err = p_err * zetas[m].norm() + p.norm() * etas[m].value_err;
                            p *= zetas[m];
                        }
                    }
                    deriv.add(p * coef);
                    deriv_err += coef.abs() * p_err;
                }
            }
        }
        Ok(SymEval {
            value: value.total(),
            deriv: deriv.total(),
            value_err,
            deriv_err,
        })
    }

    /// `Z(s) = sum over distinct m_1, ..., m_r of prod_j m_j^(-a_j s)`,
    /// keeping the tuples with `L(m) = sum_j a_j log m_j <= L*`.
    ///
    /// For any `0 < theta < 1` with `a_r theta sigma > 1` the rest is at
    /// most `exp(-(1 - theta) sigma L*) prod_j zeta(a_j theta sigma)`; `L*`
    /// is chosen over a grid of `theta` to put that below
    /// `DIRECT_REL * M^sigma`. `None` where the expansion is accurate
    /// enough or the enumeration would exceed the budget.
    fn eval_direct(&self, s: ComplexPoint) -> Option<SymEval> {
        let w = self.weights.values();
        let sigma = s.re;
        let a_r = self.weights.smallest();
        let loss = sigma * (self.log_inv_m - a_r * std::f64::consts::LN_2);
        if !(loss > DIRECT_LOSS.ln()) {
            return None;
        }
        // zeta(x) <= x / (x - 1)
        let log_zeta_bound = |x: f64| (x / (x - 1.0)).ln();
        let (theta, l_star) = (1..20)
            .map(|k| 0.05 * k as f64)
            .filter(|th| a_r * th * sigma > 1.2)
            .map(|th| {
                let rankin: f64 = w.iter().map(|a| log_zeta_bound(a * th * sigma)).sum();
                let l = (sigma * self.log_inv_m - DIRECT_REL.ln() + rankin) / ((1.0 - th) * sigma);
                (th, l.max(1.0 / ((1.0 - th) * sigma)))
            })
            .min_by(|x, y| x.1.total_cmp(&y.1))?;

        let mut exps = Vec::new();
        let mut used = Vec::with_capacity(w.len());
        if !enumerate_tuples(w, l_star, 0.0, &mut used, &mut exps) {
            return None;
        }
        let mut value = KahanSum::default();
        let mut deriv = KahanSum::default();
        let mut largest = 0.0f64;
        for &l in &exps {
            let term = (-s * l).exp();
            largest = largest.max(term.norm());
            value.add(term);
            deriv.add(-term * l);
        }
        let rankin: f64 = w.iter().map(|a| log_zeta_bound(a * theta * sigma)).sum();
        let tail = (rankin - (1.0 - theta) * sigma * l_star).exp();
        let rounding = 4.0 * f64::EPSILON * exps.len() as f64 * largest;
        Some(SymEval {
            value: value.total(),
            deriv: deriv.total(),
            value_err: tail + rounding,
            deriv_err: l_star * tail + l_star * rounding,
        })
    }

    /// `Z(s) = sum_terms coefficient * prod_k zeta(c_k s)`.
    pub fn eval_sym(&self, s: ComplexPoint) -> Result<Complex64> {
        Ok(self.eval_full(s, false)?.value)
    }

    /// `Z'(s)` by the product rule applied term by term.
    pub fn eval_sym_deriv(&self, s: ComplexPoint) -> Result<Complex64> {
        Ok(self.eval_full(s, true)?.deriv)
    }

    /// `B M^s`, the normalization used for `a = 0`.
    pub fn leading_model(&self, s: ComplexPoint) -> Complex64 {
        (s * self.weights.m().ln()).exp() * self.weights.b() as f64
    }

    fn g_from(&self, a: &TargetValue, s: ComplexPoint, value: Complex64) -> Complex64 {
        if a.is_zero() {
            value / self.leading_model(s)
        } else {
            (value - a.a) / (-a.a)
        }
    }

    /// `G(s) = Z(s) / (B M^s)` for `a = 0`, `(Z(s) - a) / (-a)` otherwise.
    pub fn eval_g(&self, a: &TargetValue, s: ComplexPoint) -> Result<Complex64> {
        let v = self.eval_sym(s)?;
        Ok(self.g_from(a, s, v))
    }

    /// `G'(s) / G(s)`: `Z'/Z - log M` for `a = 0`, `Z'/(Z - a)` otherwise.
    pub fn eval_logderiv_g(&self, a: &TargetValue, s: ComplexPoint) -> Result<Complex64> {
        let (g, ld) = self.g_and_logderiv(a, s)?;
        ld.ok_or(Error::AtAPoint { magnitude: g.norm() })
    }

    /// `G(s)` together with `G'(s)/G(s)`, the latter `None` when
    /// `|G(s)| < AT_APOINT`.
    pub fn g_and_logderiv(&self, a: &TargetValue, s: ComplexPoint) -> Result<(Complex64, Option<Complex64>)> {
        let e = self.eval_full(s, true)?;
        let g = self.g_from(a, s, e.value);
        if g.norm() < AT_APOINT {
            return Ok((g, None));
        }
        let ld = if a.is_zero() {
            e.deriv / e.value - self.weights.m().ln()
        } else {
            e.deriv / (e.value - a.a)
        };
        Ok((g, Some(ld)))
    }

    /// Right half-plane model `B M^s`, valid for `a_r sigma > 2`.
    pub fn asymptotic_right(&self, s: ComplexPoint) -> Result<Complex64> {
        ensure_finite(s)?;
        if !(self.weights.smallest() * s.re > 2.0) {
            return Err(Error::OutsideRegime {
                model: "right half-plane",
            });
        }
        Ok(self.leading_model(s))
    }

    /// Left-strip model `prod_j zeta(a_j s)`, for `sigma < 0` and `t >= 10`.
    pub fn asymptotic_left_strip(&self, s: ComplexPoint) -> Result<Complex64> {
        ensure_finite(s)?;
        if !(s.re < 0.0 && s.im >= 10.0) {
            return Err(Error::OutsideRegime { model: "left strip" });
        }
        self.weights.values().iter().map(|&a| zeta(s * a, &self.prec)).product()
    }
}

/// Appends `L(m)` for every tuple of distinct positive integers extending
/// `used` with `L(m) <= l_star`; false once the budget is exceeded.
fn enumerate_tuples(w: &[f64], l_star: f64, partial: f64, used: &mut Vec<u64>, out: &mut Vec<f64>) -> bool {
    let j = used.len();
    if j == w.len() {
        out.push(partial);
        return out.len() <= DIRECT_BUDGET;
    }
    let mut m = 1u64;
    loop {
        let l = partial + w[j] * (m as f64).ln();
        if l > l_star {
            return true;
        }
        if !used.contains(&m) {
            used.push(m);
            let ok = enumerate_tuples(w, l_star, l, used, out);
            used.pop();
            if !ok {
                return false;
            }
        }
        m += 1;
    }
}

/// Compensated complex summation.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn total(&self) -> Complex64 {
        self.sum
    }
}

/// Truncated defining series with an estimate of the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSum {
    pub value: Complex64,
    pub truncation_estimate: f64,
}

/// Whether `s` lies in the absolute-convergence region of every ordering:
/// `Re((a_tau(l) + ... + a_tau(r)) s) > r - l + 1` for all `tau` and `l`.
pub fn in_convergence_region(w: &Weights, s: ComplexPoint) -> bool {
    // the binding orderings put the smallest weights last
    let r = w.rank();
    let vals = w.values();
    (1..=r).all(|k| {
        let tail: f64 = vals[r - k..].iter().sum();
        s.re * tail > k as f64
    })
}

/// Direct sum over `1 <= n_1 < ... < n_r <= cutoff` for all `r!`
/// orderings of the weights.
///
/// The truncation estimate is the rigorous bound
/// `prod_j C_j * N^{1 - sigma_r + E} / (sigma_r - 1 - E)` from bounding
/// each inner partial sum by `C_j n^{e_j}`, where it applies; otherwise it
/// falls back to `|S(N) - S(N/2)|`.
pub fn multisum_oracle(w: &Weights, s: ComplexPoint, cutoff: usize) -> Result<OracleSum> {
    ensure_finite(s)?;
    if !in_convergence_region(w, s) {
        return Err(Error::OutsideConvergenceRegion);
    }
    let r = w.rank();
    if cutoff < r {
        return Err(Error::InvalidWeights(format!("cutoff {cutoff} is below the rank {r}")));
    }
    let logs: Vec<f64> = (0..=cutoff)
        .map(|n| if n == 0 { 0.0 } else { (n as f64).ln() })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut half_total = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut bound_ok = true;
    for perm in permutations(r) {
        let exps: Vec<Complex64> = perm.iter().map(|&i| s * w.values()[i]).collect();
        let (full, half) = nested_sum(&exps, cutoff, &logs);
        total += full;
        half_total += half;
        match tail_bound(&exps, cutoff) {
            Some(b) => bound += b,
            None => bound_ok = false,
        }
    }
    let truncation_estimate = if bound_ok { bound } else { (total - half_total).norm() };
    Ok(OracleSum {
        value: total,
        truncation_estimate,
    })
}

/// Returns the truncated nested sum at `cutoff` and at `cutoff / 2`.
fn nested_sum(exps: &[Complex64], cutoff: usize, logs: &[f64]) -> (Complex64, Complex64) {
    let pow = |e: Complex64, n: usize| (-e * logs[n]).exp();
    let mut level: Vec<Complex64> = (0..=cutoff)
        .map(|n| {
            if n == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                pow(exps[0], n)
            }
        })
        .collect();
    for &e in &exps[1..] {
        let mut prefix = Complex64::new(0.0, 0.0);
        let mut next = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        for n in 1..=cutoff {
            next[n] = prefix * pow(e, n);
            prefix += level[n];
        }
        level = next;
    }
    let half = cutoff / 2;
    let mut full = Complex64::new(0.0, 0.0);
    let mut at_half = Complex64::new(0.0, 0.0);
    for (n, v) in level.iter().enumerate().rev() {
        full += v;
        if n <= half {
            at_half += v;
        }
    }
    (full, at_half)
}

fn tail_bound(exps: &[Complex64], cutoff: usize) -> Option<f64> {
    let (last, inner) = exps.split_last()?;
    let mut c_prod = 1.0;
    let mut growth = 0.0;
    for e in inner {
        let sigma = e.re;
        if (sigma - 1.0).abs() < 1e-9 {
            let d = 0.01;
            c_prod *= 1.0 + 1.0 / (d * std::f64::consts::E);
            growth += d;
        } else if sigma > 1.0 {
            c_prod *= sigma / (sigma - 1.0);
        } else {
            c_prod *= 1.0 + 1.0 / (1.0 - sigma);
            growth += 1.0 - sigma;
        }
    }
    let p = last.re - growth;
    if p <= 1.0 {
        return None;
    }
    let n = cutoff as f64;
    Some(c_prod * n.powf(1.0 - p) / (p - 1.0))
}

/// All permutations of `0..r` (Heap's algorithm).
fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..r).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; r];
    let mut i = 0;
    while i < r {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sym(w: &[f64]) -> SymZeta {
        SymZeta::new(Weights::new(w).unwrap(), EvalPrecision::default()).unwrap()
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
        let mut p = permutations(4);
        p.sort();
        p.dedup();
        assert_eq!(p.len(), 24);
    }

    #[test]
    fn factors_are_shared() {
        let z = sym(&[1.0, 1.0, 1.0]);
        assert_eq!(z.factors.len(), 3);
        assert_eq!(z.poles(), vec![1.0 / 3.0, 0.5, 1.0]);
    }

    #[test]
    fn pole_guard() {
        let z = sym(&[1.0, 1.0]);
        assert!(matches!(z.eval_sym(c(1.0, 0.0)), Err(Error::NearPole { pole }) if pole == 1.0));
        assert!(matches!(z.eval_sym(c(0.5, 0.0)), Err(Error::NearPole { pole }) if pole == 0.5));
        assert!(z.eval_sym(c(0.5, 1e-6)).is_ok());
    }

    #[test]
    fn target_zero_is_exact() {
        assert!(TargetValue::zero().is_zero());
        assert!(!TargetValue::new(c(0.0, 1e-300)).unwrap().is_zero());
        assert!(TargetValue::new(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn regimes_are_checked() {
        let z = sym(&[2.0, 1.0]);
        assert!(z.asymptotic_right(c(2.0, 0.0)).is_err());
        assert!(z.asymptotic_right(c(2.5, 3.0)).is_ok());
        assert!(z.asymptotic_left_strip(c(-1.0, 9.0)).is_err());
        assert!(z.asymptotic_left_strip(c(0.5, 20.0)).is_err());
        assert!(z.asymptotic_left_strip(c(-0.5, 20.0)).is_ok());
    }

    #[test]
    fn logderiv_refuses_apoints() {
        let z = sym(&[1.0, 1.0]);
        // s = -2 is a zero of zeta(s)^2 - zeta(2s) (both factors vanish)
        assert!(matches!(
            z.eval_logderiv_g(&TargetValue::zero(), c(-2.0, 0.0)),
            Err(Error::AtAPoint { .. })
        ));
    }

    #[test]
    fn convergence_region() {
        let w = Weights::new(&[1.0, 1.0]).unwrap();
        assert!(in_convergence_region(&w, c(1.01, 5.0)));
        assert!(!in_convergence_region(&w, c(1.0, 5.0)));
        let w = Weights::new(&[2.0, 1.0]).unwrap();
        // needs sigma > 1 (tail a_r) and 3 sigma > 2
        assert!(!in_convergence_region(&w, c(0.9, 0.0)));
        assert!(matches!(
            multisum_oracle(&w, c(0.9, 0.0), 10),
            Err(Error::OutsideConvergenceRegion)
        ));
    }
}
