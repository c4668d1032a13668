//! Associated Laguerre polynomials, integer-order Bessel functions of the
//! first kind and log-factorials.

/// ln(n!). Exact integer product for n ≤ 20, cumulative Σ ln k above.
pub fn log_factorial(n: u64) -> f64 {
    if n <= 20 {
        ((1..=n).product::<u64>() as f64).ln()
    } else {
        let exact = (1..=20u64).product::<u64>() as f64;
        exact.ln() + (21..=n).map(|k| (k as f64).ln()).sum::<f64>()
    }
}

/// L_n^k(x) by the three-term recurrence in n.
pub fn laguerre(n: u32, k: u32, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + k - x) * cur - (m + k) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// J_0(x) … J_qmax(x) at a single argument.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselSequence {
    pub x: f64,
    pub values: Vec<f64>,
}

impl BesselSequence {
    pub fn order(&self, q: usize) -> f64 {
        self.values.get(q).copied().unwrap_or(0.0)
    }

    /// J_0 + 2 Σ J_2k − 1 over the stored orders.
    pub fn normalization_residual(&self) -> f64 {
        let even: f64 = self.values.iter().skip(2).step_by(2).sum();
        self.values[0] + 2.0 * even - 1.0
    }
}

const RESCALE_ABOVE: f64 = 1e250;

/// Miller's downward recurrence, normalized with J_0 + 2 Σ J_2k = 1.
///
/// The recurrence starts at `N + max(20, ceil(10 sqrt N))` with
/// `N = max(qmax, ceil(x))`, well into the region where J_q decays.
pub fn bessel_j_sequence(qmax: usize, x: f64) -> BesselSequence {
    assert!(x >= 0.0 && x.is_finite(), "bessel argument must be finite and >= 0");
    let mut values = vec![0.0; qmax + 1];
    if x == 0.0 {
        values[0] = 1.0;
        return BesselSequence { x, values };
    }

    let base = qmax.max(x.ceil() as usize);
    let start = base + 20usize.max((10.0 * (base as f64).sqrt()).ceil() as usize);
    let mut seq = vec![0.0; start + 2];
    seq[start] = 1e-300;
    let two_over_x = 2.0 / x;
    for q in (1..=start).rev() {
        let next = q as f64 * two_over_x * seq[q] - seq[q + 1];
        seq[q - 1] = next;
        if next.abs() > RESCALE_ABOVE {
            seq[q - 1..].iter_mut().for_each(|v| *v /= RESCALE_ABOVE);
        }
    }
    let even: f64 = seq[2..=start].iter().step_by(2).sum();
    let norm = seq[0] + 2.0 * even;
    for (v, s) in values.iter_mut().zip(&seq) {
        *v = s / norm;
    }
    BesselSequence { x, values }
}
