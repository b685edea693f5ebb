use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use revsynth::bounds::{to_f64, BoundReport};
use revsynth::circuit::CircuitMetrics;
use serde_json::{json, Value};

fn rational64_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn approx(x: f64) -> String {
    if x.abs() >= 1e7 {
        format!("{x:.4e}")
    } else {
        let s = format!("{x:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Exact when the denominator is small, otherwise a decimal approximation.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else if x.denom() <= &BigInt::from(1_000_000) && x.numer().bits() <= 64 {
        format!("{}/{} (~{})", x.numer(), x.denom(), approx(to_f64(x)))
    } else {
        format!("~{}", approx(to_f64(x)))
    }
}

pub fn metrics_line(m: &CircuitMetrics) -> String {
    format!("L={} D={} L_C={} L_T={} W={}", m.l, m.d, m.lc, m.lt, m.w)
}

pub fn metrics_json(m: &CircuitMetrics) -> Value {
    json!({
        "l": m.l,
        "d": m.d,
        "lc": m.lc,
        "lt": m.lt,
        "w": rational64_f64(m.w),
    })
}

/// A JSON number when it fits in 64 bits, otherwise a decimal string.
pub(crate) fn big_json(x: &BigInt) -> Value {
    match u64::try_from(x) {
        Ok(v) => v.into(),
        Err(_) => x.to_string().into(),
    }
}

pub fn bounds_json(r: &BoundReport) -> Value {
    let upper = r.nominal_upper.as_ref();
    json!({
        "n": r.n,
        "q": r.q,
        "phi": rational64_f64(r.phi),
        "omega_size": r.omega_size,
        "lower_l": to_f64(&r.lower.l),
        "lower_d": to_f64(&r.lower.d),
        "lower_w": to_f64(&r.lower.w),
        "nominal_upper_l": upper.map(|u| to_f64(&u.l)),
        "nominal_upper_d": upper.map(|u| to_f64(&u.d)),
        "nominal_upper_w": upper.map(|u| to_f64(&u.w)),
        "budget_k": r.budget.as_ref().map(|(k, _)| *k),
        "budget_l": r.budget.as_ref().map(|(_, b)| big_json(b)),
        "n0_caveat": r.n0_caveat,
    })
}

pub fn bounds_text(r: &BoundReport) -> String {
    let mut s = format!(
        "n={} q={} phi={} |Omega|={} weights wc={} wt={}\n",
        r.n,
        r.q,
        r.phi,
        r.omega_size,
        r.weights.wc(),
        r.weights.wt()
    );
    s += &format!(
        "lower: L >= {}  D >= {}  W >= {}\n",
        format_rational(&r.lower.l),
        format_rational(&r.lower.d),
        format_rational(&r.lower.w)
    );
    if r.n0_caveat {
        s += "  (lower bounds hold for n beyond an unspecified threshold)\n";
    }
    match &r.nominal_upper {
        Some(u) => {
            s += &format!(
                "nominal upper (o(1) terms set to 0): L ~ {}  D ~ {}  W ~ {}\n",
                approx(to_f64(&u.l)),
                approx(to_f64(&u.d)),
                approx(to_f64(&u.w))
            );
        }
        None if r.q == 0 => s += "nominal upper: undefined, log2 n - log2 log2 n - log2 phi <= 0\n",
        None => {}
    }
    if let Some((k, b)) = &r.budget {
        s += &format!("budget: L <= {b} (k={k})\n");
    }
    s
}
