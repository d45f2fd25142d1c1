//! Quaternion scalar arithmetic.
//!
//! Conventions: `q = w + x i + y j + z k` with `i^2 = j^2 = k^2 = ijk = -1`,
//! so `ij = k`, `jk = i`, `ki = j`. Conjugation negates the imaginary part.

use crate::scalar::Real;
use num_complex::Complex;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// q = alpha + beta j with alpha, beta complex (the symplectic split).
    pub fn from_complex_pair(alpha: Complex<T>, beta: Complex<T>) -> Self {
        Self::new(alpha.re, alpha.im, beta.re, beta.im)
    }

    /// Complex part alpha of q = alpha + beta j.
    pub fn alpha(&self) -> Complex<T> {
        Complex::new(self.w, self.x)
    }

    /// Complex part beta of q = alpha + beta j.
    pub fn beta(&self) -> Complex<T> {
        Complex::new(self.y, self.z)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(&self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        let c = self.conj();
        Self::new(c.w / n, c.x / n, c.y / n, c.z / n)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn re(&self) -> T {
        self.w
    }

    /// Imaginary (vector) part as a quaternion.
    pub fn imag(&self) -> Self {
        Self::new(T::zero(), self.x, self.y, self.z)
    }

    pub fn is_zero_within(&self, tol: T) -> bool {
        self.norm() <= tol
    }

    /// Unit quaternion in the same direction; `1` for the zero quaternion.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == T::zero() {
            Self::one()
        } else {
            self.scale(T::one() / n)
        }
    }

    /// exp of a quaternion (scalar case of the symplectic exponential).
    pub fn exp(&self) -> Self {
        let v = self.imag();
        let theta = v.norm();
        let ew = self.w.exp();
        if theta == T::zero() {
            return Self::real(ew);
        }
        let s = ew * theta.sin() / theta;
        Self::new(ew * theta.cos(), v.x * s, v.y * s, v.z * s)
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl<T: Real> SubAssign for Quaternion<T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl<T: Real> MulAssign for Quaternion<T> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Real> Div for Quaternion<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)] // q / r = q * r^-1
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}
