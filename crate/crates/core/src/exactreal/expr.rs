//! Expression trees for adaptively evaluated real values.

use std::sync::Arc;

use num_rational::BigRational;

use super::interval::{EvalError, EvalResult, Interval, Rat};

/// A real-valued expression over +, -, *, /, sqrt, rational powers, ln, exp.
///
/// Immutable and cheaply shareable; evaluation at working precision `w`
/// produces a rigorous enclosure whose endpoints live on the `2^-w` grid.
/// `PowRat` with a non-integer exponent evaluates through `exp((p/q) ln x)`,
/// deliberately a different route than the integer-root path used by `Sqrt`,
/// so the two can cross-check each other.
#[derive(Debug, Clone)]
pub enum Expr {
    Const(BigRational),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    Sqrt(Arc<Expr>),
    /// Base raised to p/q (q >= 1, gcd(|p|, q) = 1).
    PowRat(Arc<Expr>, i64, u32),
    Ln(Arc<Expr>),
    Exp(Arc<Expr>),
}

impl Expr {
    pub fn eval(&self, w: u32) -> EvalResult<Interval> {
        match self {
            Expr::Const(q) => Ok(Interval::point(q.clone())),
            Expr::Add(a, b) => Ok(a.eval(w)?.add(&b.eval(w)?, w)),
            Expr::Sub(a, b) => Ok(a.eval(w)?.sub(&b.eval(w)?, w)),
            Expr::Mul(a, b) => Ok(a.eval(w)?.mul(&b.eval(w)?, w)),
            Expr::Div(a, b) => a.eval(w)?.div(&b.eval(w)?, w),
            Expr::Neg(a) => Ok(a.eval(w)?.neg()),
            Expr::Sqrt(a) => a.eval(w)?.sqrt(w),
            Expr::PowRat(a, p, q) => {
                let base = a.eval(w)?;
                if *q == 1 {
                    base.powi(*p, w)
                } else if base.lo == base.hi && base.lo == Rat::from_integer(1.into()) {
                    Ok(Interval::point(Rat::from_integer(1.into())))
                } else {
                    // exp((p/q) ln x); requires x > 0 certainly.
                    let exponent = Rat::new((*p).into(), (*q).into());
                    base.ln(w + 16)?.scale(&exponent, w + 16).exp(w)
                }
            }
            Expr::Ln(a) => a.eval(w)?.ln(w),
            Expr::Exp(a) => a.eval(w)?.exp(w),
        }
    }

    /// Evaluate with escalating working precision until the enclosure width
    /// is at most `2^(1-bits)`, doubling from `start` up to `cap` bits.
    pub fn eval_to_width(&self, bits: u32, cap: u32) -> EvalResult<Interval> {
        let mut w = (bits + 16).max(64);
        loop {
            match self.eval(w) {
                Ok(iv) => {
                    if iv.width_within(bits) {
                        return Ok(iv);
                    }
                }
                Err(EvalError::NeedMorePrecision) => {}
                Err(e) => return Err(e),
            }
            if w >= cap {
                return Err(EvalError::NeedMorePrecision);
            }
            w = (w * 2).min(cap);
        }
    }
}
