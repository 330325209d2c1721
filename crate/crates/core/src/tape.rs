//! Reverse-mode automatic differentiation on an explicit tape.
//!
//! Training differentiates the composite losses with respect to the network
//! parameters only; stencil data, base weights and reference fluxes enter as
//! plain `f64` constants. [`Var`] records every operation on a [`Tape`] with
//! precomputed local partials, and [`Tape::gradients`] runs the reverse sweep.
//! Inference never touches a tape: the same numeric kernels are written
//! against the [`Scalar`] trait and instantiated with `f64`.
//!
//! At the kinks of `relu` and `abs` the subgradient with derivative 0 is
//! used, i.e. both have derivative 0 at exactly 0.

use std::cell::RefCell;
use std::ops::{Add, Div, Mul, Neg, Sub};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Node {
    p0: u32,
    p1: u32,
    d0: f64,
    d1: f64,
}

/// Records operations for one reverse sweep. Cheap to create; the training
/// loop owns one tape per loss shard.
#[derive(Default)]
pub struct Tape {
    nodes: RefCell<Vec<Node>>,
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Tape {
            nodes: RefCell::new(Vec::with_capacity(n)),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Introduces a leaf variable (a parameter or constant).
    pub fn var(&self, val: f64) -> Var<'_> {
        let idx = self.push(Node {
            p0: NONE,
            p1: NONE,
            d0: 0.0,
            d1: 0.0,
        });
        Var {
            tape: self,
            idx,
            val,
        }
    }

    fn push(&self, node: Node) -> u32 {
        let mut nodes = self.nodes.borrow_mut();
        let idx = nodes.len();
        assert!(idx < NONE as usize, "tape overflow");
        nodes.push(node);
        idx as u32
    }

    fn unary(&self, a: Var<'_>, d: f64, val: f64) -> Var<'_> {
        let idx = self.push(Node {
            p0: a.idx,
            p1: NONE,
            d0: d,
            d1: 0.0,
        });
        Var {
            tape: self,
            idx,
            val,
        }
    }

    fn binary(&self, a: Var<'_>, b: Var<'_>, da: f64, db: f64, val: f64) -> Var<'_> {
        debug_assert!(std::ptr::eq(a.tape, b.tape), "vars from different tapes");
        let idx = self.push(Node {
            p0: a.idx,
            p1: b.idx,
            d0: da,
            d1: db,
        });
        Var {
            tape: self,
            idx,
            val,
        }
    }

    /// Derivative of `out` with respect to every node, indexed by creation
    /// order; leaves created first are found at the front.
    pub fn gradients(&self, out: Var<'_>) -> Vec<f64> {
        let nodes = self.nodes.borrow();
        let mut grads = vec![0.0; nodes.len()];
        grads[out.idx as usize] = 1.0;
        for i in (0..=out.idx as usize).rev() {
            let g = grads[i];
            if g == 0.0 {
                continue;
            }
            let n = nodes[i];
            if n.p0 != NONE {
                grads[n.p0 as usize] += n.d0 * g;
            }
            if n.p1 != NONE {
                grads[n.p1 as usize] += n.d1 * g;
            }
        }
        grads
    }
}

/// A value on a [`Tape`].
#[derive(Clone, Copy)]
pub struct Var<'t> {
    tape: &'t Tape,
    idx: u32,
    val: f64,
}

impl<'t> Var<'t> {
    pub fn value(self) -> f64 {
        self.val
    }

    pub fn index(self) -> usize {
        self.idx as usize
    }
}

impl<'t> Add for Var<'t> {
    type Output = Var<'t>;
    fn add(self, o: Var<'t>) -> Var<'t> {
        self.tape.binary(self, o, 1.0, 1.0, self.val + o.val)
    }
}

impl<'t> Sub for Var<'t> {
    type Output = Var<'t>;
    fn sub(self, o: Var<'t>) -> Var<'t> {
        self.tape.binary(self, o, 1.0, -1.0, self.val - o.val)
    }
}

impl<'t> Mul for Var<'t> {
    type Output = Var<'t>;
    fn mul(self, o: Var<'t>) -> Var<'t> {
        self.tape.binary(self, o, o.val, self.val, self.val * o.val)
    }
}

impl<'t> Div for Var<'t> {
    type Output = Var<'t>;
    fn div(self, o: Var<'t>) -> Var<'t> {
        let inv = 1.0 / o.val;
        self.tape
            .binary(self, o, inv, -self.val * inv * inv, self.val * inv)
    }
}

impl<'t> Neg for Var<'t> {
    type Output = Var<'t>;
    fn neg(self) -> Var<'t> {
        self.tape.unary(self, -1.0, -self.val)
    }
}

impl<'t> Add<f64> for Var<'t> {
    type Output = Var<'t>;
    fn add(self, c: f64) -> Var<'t> {
        self.tape.unary(self, 1.0, self.val + c)
    }
}

impl<'t> Sub<f64> for Var<'t> {
    type Output = Var<'t>;
    fn sub(self, c: f64) -> Var<'t> {
        self.tape.unary(self, 1.0, self.val - c)
    }
}

impl<'t> Mul<f64> for Var<'t> {
    type Output = Var<'t>;
    fn mul(self, c: f64) -> Var<'t> {
        self.tape.unary(self, c, self.val * c)
    }
}

impl<'t> Div<f64> for Var<'t> {
    type Output = Var<'t>;
    fn div(self, c: f64) -> Var<'t> {
        let inv = 1.0 / c;
        self.tape.unary(self, inv, self.val * inv)
    }
}

/// Scalar arithmetic shared by `f64` (inference) and [`Var`] (training).
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn value(self) -> f64;
    /// A constant in the same computation context as `self`.
    fn lift(self, value: f64) -> Self;
    fn relu(self) -> Self;
    fn abs(self) -> Self;
    fn powi(self, n: i32) -> Self;
}

impl Scalar for f64 {
    fn value(self) -> f64 {
        self
    }
    fn lift(self, value: f64) -> f64 {
        value
    }
    fn relu(self) -> f64 {
        if self > 0.0 {
            self
        } else {
            0.0
        }
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
}

impl<'t> Scalar for Var<'t> {
    fn value(self) -> f64 {
        self.val
    }
    fn lift(self, value: f64) -> Var<'t> {
        self.tape.var(value)
    }
    fn relu(self) -> Var<'t> {
        if self.val > 0.0 {
            self.tape.unary(self, 1.0, self.val)
        } else {
            self.tape.unary(self, 0.0, 0.0)
        }
    }
    fn abs(self) -> Var<'t> {
        if self.val > 0.0 {
            self.tape.unary(self, 1.0, self.val)
        } else if self.val < 0.0 {
            self.tape.unary(self, -1.0, -self.val)
        } else {
            self.tape.unary(self, 0.0, 0.0)
        }
    }
    fn powi(self, n: i32) -> Var<'t> {
        let d = n as f64 * self.val.powi(n - 1);
        self.tape.unary(self, d, self.val.powi(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fd<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], i: usize, h: f64) -> f64 {
        let mut lo = x.to_vec();
        let mut hi = x.to_vec();
        lo[i] -= h;
        hi[i] += h;
        (f(&hi) - f(&lo)) / (2.0 * h)
    }

    #[test]
    fn matches_finite_differences_on_a_composite() {
        // f(a, b, c) = relu(a*b - c) / (|b| + 2) + (a - b*c)^2
        let f = |x: &[f64]| -> f64 {
            let (a, b, c) = (x[0], x[1], x[2]);
            Scalar::relu(a * b - c) / (b.abs() + 2.0) + (a - b * c).powi(2)
        };
        let x = [0.8, -1.3, -2.1];
        let tape = Tape::new();
        let a = tape.var(x[0]);
        let b = tape.var(x[1]);
        let c = tape.var(x[2]);
        let expr = (a * b - c).relu() / (b.abs() + 2.0) + (a - b * c).powi(2);
        assert_relative_eq!(expr.value(), f(&x), max_relative = 1e-14);
        let grads = tape.gradients(expr);
        for i in 0..3 {
            let fdv = fd(&f, &x, i, 1e-6);
            assert_relative_eq!(grads[i], fdv, max_relative = 1e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn fan_out_accumulates() {
        let tape = Tape::new();
        let x = tape.var(3.0);
        let y = x * x + x * 2.0; // dy/dx = 2x + 2 = 8
        let grads = tape.gradients(y);
        assert_relative_eq!(grads[0], 8.0, max_relative = 1e-15);
    }

    #[test]
    fn kink_derivatives_are_zero_at_zero() {
        let tape = Tape::new();
        let x = tape.var(0.0);
        let r = x.relu();
        assert_eq!(r.value(), 0.0);
        assert_eq!(tape.gradients(r)[0], 0.0);
        let a = x.abs();
        assert_eq!(tape.gradients(a)[0], 0.0);
    }

    #[test]
    fn division_partials() {
        let tape = Tape::new();
        let a = tape.var(1.5);
        let b = tape.var(-4.0);
        let q = a / b;
        let g = tape.gradients(q);
        assert_relative_eq!(g[0], 1.0 / -4.0, max_relative = 1e-15);
        assert_relative_eq!(g[1], -1.5 / 16.0, max_relative = 1e-15);
    }

    #[test]
    fn f64_and_var_agree_bitwise_on_shared_kernels() {
        fn kernel<S: Scalar>(a: S, b: S) -> S {
            ((a * 3.5 - b).relu() + a.abs() * 0.25) / (b.powi(2) + 1.0)
        }
        let (a, b) = (0.3178, -0.912);
        let plain = kernel(a, b);
        let tape = Tape::new();
        let taped = kernel(tape.var(a), tape.var(b));
        assert_eq!(plain.to_bits(), taped.value().to_bits());
    }
}
