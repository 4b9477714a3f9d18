//! Scalar abstraction shared by the plain and the op-counting kernels.

use std::cell::Cell;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

/// Arithmetic the WENO kernels are written against.
///
/// `f64` is the production instantiation. [`Counted`] tallies every
/// arithmetic operation it performs so the kernels can be audited against
/// closed-form operation counts; the kernel source is shared, so the
/// counts are those of the code that actually runs.
pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// Lift a precomputed constant (not an operation).
    fn constant(x: f64) -> Self;
    fn value(self) -> f64;
}

impl Real for f64 {
    #[inline(always)]
    fn constant(x: f64) -> Self {
        x
    }
    #[inline(always)]
    fn value(self) -> f64 {
        self
    }
}

/// `x^n` for `n ≥ 1` by repeated multiplication (`n - 1` products).
#[inline(always)]
pub fn pow_repeated<S: Real>(x: S, n: u32) -> S {
    debug_assert!(n >= 1);
    let mut acc = x;
    for _ in 1..n {
        acc = acc * x;
    }
    acc
}

/// Operation tallies; subtractions count as additions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpCounter {
    pub additions: u64,
    pub multiplications: u64,
    pub divisions: u64,
}

impl OpCounter {
    pub const fn new(additions: u64, multiplications: u64, divisions: u64) -> Self {
        OpCounter { additions, multiplications, divisions }
    }

    pub fn total(&self) -> u64 {
        self.additions + self.multiplications + self.divisions
    }

    /// Additions plus multiplications; divisions are tallied apart.
    pub fn arithmetic(&self) -> u64 {
        self.additions + self.multiplications
    }

    pub fn scaled(&self, n: u64) -> OpCounter {
        OpCounter {
            additions: self.additions * n,
            multiplications: self.multiplications * n,
            divisions: self.divisions * n,
        }
    }
}

impl Add for OpCounter {
    type Output = OpCounter;
    fn add(self, o: OpCounter) -> OpCounter {
        OpCounter {
            additions: self.additions + o.additions,
            multiplications: self.multiplications + o.multiplications,
            divisions: self.divisions + o.divisions,
        }
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, o: OpCounter) {
        *self = *self + o;
    }
}

thread_local! {
    static TALLY: Cell<OpCounter> = const { Cell::new(OpCounter::new(0, 0, 0)) };
}

fn bump(f: impl FnOnce(&mut OpCounter)) {
    TALLY.with(|t| {
        let mut c = t.get();
        f(&mut c);
        t.set(c);
    });
}

/// Run `f` with a fresh per-call tally and return what it counted.
///
/// Nested calls are isolated: the outer tally is restored afterwards.
pub fn count_ops<R>(f: impl FnOnce() -> R) -> (R, OpCounter) {
    let saved = TALLY.with(|t| t.replace(OpCounter::default()));
    let out = f();
    let counted = TALLY.with(|t| t.replace(saved));
    (out, counted)
}

/// An `f64` that records each arithmetic operation in the current
/// thread's tally (see [`count_ops`]).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Counted(pub f64);

impl Add for Counted {
    type Output = Counted;
    #[inline]
    fn add(self, o: Counted) -> Counted {
        bump(|c| c.additions += 1);
        Counted(self.0 + o.0)
    }
}

impl Sub for Counted {
    type Output = Counted;
    #[inline]
    fn sub(self, o: Counted) -> Counted {
        bump(|c| c.additions += 1);
        Counted(self.0 - o.0)
    }
}

impl Mul for Counted {
    type Output = Counted;
    #[inline]
    fn mul(self, o: Counted) -> Counted {
        bump(|c| c.multiplications += 1);
        Counted(self.0 * o.0)
    }
}

impl Div for Counted {
    type Output = Counted;
    #[inline]
    fn div(self, o: Counted) -> Counted {
        bump(|c| c.divisions += 1);
        Counted(self.0 / o.0)
    }
}

impl Real for Counted {
    fn constant(x: f64) -> Self {
        Counted(x)
    }
    fn value(self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_is_per_call_and_nests() {
        let (v, outer) = count_ops(|| {
            let a = Counted(2.0) * Counted(3.0) - Counted(1.0);
            let (_, inner) = count_ops(|| Counted(1.0) / Counted(4.0));
            assert_eq!(inner, OpCounter::new(0, 0, 1));
            a + Counted(1.0)
        });
        assert_eq!(v.0, 6.0);
        assert_eq!(outer, OpCounter::new(2, 1, 0));
    }

    #[test]
    fn repeated_power_cost() {
        let (p, c) = count_ops(|| pow_repeated(Counted(2.0), 4));
        assert_eq!(p.0, 16.0);
        assert_eq!(c.multiplications, 3);
        assert_eq!(pow_repeated(3.0_f64, 1), 3.0);
    }
}
