//! Exact integer model of the rank-2 Grothendieck lattice, its Euler form,
//! and the matrix actions of spherical twists and shifts.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A class in the Grothendieck lattice, written in the basis `{[S], [T]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KClass {
    /// Coefficient of `[S]`.
    pub s: i64,
    /// Coefficient of `[T]`.
    pub t: i64,
}

impl KClass {
    pub const fn new(s: i64, t: i64) -> Self {
        KClass { s, t }
    }

    /// `[S] = (1, 0)`
    pub const S: KClass = KClass::new(1, 0);
    /// `[T] = (0, 1)`
    pub const T: KClass = KClass::new(0, 1);
    /// `[E] = [S] + [T]`, the extension of S by T.
    pub const E: KClass = KClass::new(1, 1);
    /// `[X] = [T] - [S]`, the extension of T by S[1].
    pub const X: KClass = KClass::new(-1, 1);

    pub const ZERO: KClass = KClass::new(0, 0);

    pub fn is_zero(self) -> bool {
        self.s == 0 && self.t == 0
    }
}

impl Add for KClass {
    type Output = KClass;
    fn add(self, rhs: KClass) -> KClass {
        KClass::new(self.s + rhs.s, self.t + rhs.t)
    }
}

impl Sub for KClass {
    type Output = KClass;
    fn sub(self, rhs: KClass) -> KClass {
        KClass::new(self.s - rhs.s, self.t - rhs.t)
    }
}

impl Neg for KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        KClass::new(-self.s, -self.t)
    }
}

impl Mul<KClass> for i64 {
    type Output = KClass;
    fn mul(self, rhs: KClass) -> KClass {
        KClass::new(self * rhs.s, self * rhs.t)
    }
}

/// A 2x2 integer matrix, row-major. Not necessarily invertible; the
/// unimodular automorphisms of the lattice are wrapped in [`LatticeAut`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMat2(pub [[i64; 2]; 2]);

impl IntMat2 {
    pub const IDENTITY: IntMat2 = IntMat2([[1, 0], [0, 1]]);

    pub fn det(self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn apply(self, v: KClass) -> KClass {
        KClass::new(
            self.0[0][0] * v.s + self.0[0][1] * v.t,
            self.0[1][0] * v.s + self.0[1][1] * v.t,
        )
    }

    pub fn transpose(self) -> IntMat2 {
        IntMat2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    /// Inverse, defined only for `det = ±1`.
    pub fn inverse(self) -> Option<IntMat2> {
        let d = self.det();
        if d != 1 && d != -1 {
            return None;
        }
        Some(IntMat2([
            [d * self.0[1][1], -d * self.0[0][1]],
            [-d * self.0[1][0], d * self.0[0][0]],
        ]))
    }

    pub fn pow(self, n: u32) -> IntMat2 {
        let mut acc = IntMat2::IDENTITY;
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Mul for IntMat2 {
    type Output = IntMat2;
    fn mul(self, rhs: IntMat2) -> IntMat2 {
        let a = self.0;
        let b = rhs.0;
        let mut c = [[0i64; 2]; 2];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        IntMat2(c)
    }
}

impl Neg for IntMat2 {
    type Output = IntMat2;
    fn neg(self) -> IntMat2 {
        IntMat2([
            [-self.0[0][0], -self.0[0][1]],
            [-self.0[1][0], -self.0[1][1]],
        ])
    }
}

/// A determinant-one automorphism of the lattice, acting on [`KClass`]
/// column vectors. Composition is matrix product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeAut(IntMat2);

impl LatticeAut {
    pub const IDENTITY: LatticeAut = LatticeAut(IntMat2::IDENTITY);

    /// Wraps a matrix, which must have determinant exactly 1.
    pub fn new(m: IntMat2) -> LatticeAut {
        assert_eq!(m.det(), 1, "lattice automorphism must have det 1");
        LatticeAut(m)
    }

    pub fn matrix(self) -> IntMat2 {
        self.0
    }

    pub fn apply(self, v: KClass) -> KClass {
        self.0.apply(v)
    }

    pub fn inverse(self) -> LatticeAut {
        LatticeAut(self.0.inverse().expect("det 1 matrix is invertible"))
    }
}

impl Mul for LatticeAut {
    type Output = LatticeAut;
    fn mul(self, rhs: LatticeAut) -> LatticeAut {
        LatticeAut(self.0 * rhs.0)
    }
}

impl Neg for LatticeAut {
    type Output = LatticeAut;
    fn neg(self) -> LatticeAut {
        LatticeAut(-self.0)
    }
}

/// The antisymmetric Euler pairing, fixed by `chi([S],[T]) = -1` so that the
/// twist matrices below come out as the standard parabolic generators.
pub fn euler_pairing(a: KClass, b: KClass) -> i64 {
    a.t * b.s - a.s * b.t
}

/// Action of the spherical twist at class `x` on the lattice:
/// `y -> y - chi(x, y) * x`.
pub fn twist_matrix(x: KClass) -> LatticeAut {
    let c1 = KClass::new(1, 0) - euler_pairing(x, KClass::new(1, 0)) * x;
    let c2 = KClass::new(0, 1) - euler_pairing(x, KClass::new(0, 1)) * x;
    LatticeAut::new(IntMat2([[c1.s, c2.s], [c1.t, c2.t]]))
}

/// The shift `[n]` acts on the lattice as `(-1)^n * identity`.
pub fn shift_matrix(n: i64) -> LatticeAut {
    if n.rem_euclid(2) == 0 {
        LatticeAut::IDENTITY
    } else {
        -LatticeAut::IDENTITY
    }
}
