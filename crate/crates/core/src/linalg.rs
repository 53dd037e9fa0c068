//! Fixed-size 3D vectors and matrices, plus the small dense routines the
//! rest of the crate needs: pivoted solves, condition estimates, and a
//! closed-form/iterative eigensolver for 3x3 matrices.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex64;

/// A point (or tangent vector) in three-dimensional phase space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct State3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl State3 {
    pub const ZERO: State3 = State3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn splat(v: f64) -> Self {
        Self::new(v, v, v)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: State3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: State3) -> State3 {
        State3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn dist(self, o: State3) -> f64 {
        (self - o).norm()
    }

    pub fn dist_inf(self, o: State3) -> f64 {
        (self - o).norm_inf()
    }

    /// Unit vector in the same direction; zero stays zero.
    pub fn normalized(self) -> State3 {
        let n = self.norm();
        if n > 0.0 {
            self * (1.0 / n)
        } else {
            self
        }
    }

    pub fn lerp(self, o: State3, t: f64) -> State3 {
        self + (o - self) * t
    }
}

impl fmt::Display for State3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for State3 {
    type Output = State3;
    fn add(self, o: State3) -> State3 {
        State3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for State3 {
    fn add_assign(&mut self, o: State3) {
        *self = *self + o;
    }
}

impl Sub for State3 {
    type Output = State3;
    fn sub(self, o: State3) -> State3 {
        State3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for State3 {
    type Output = State3;
    fn neg(self) -> State3 {
        State3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for State3 {
    type Output = State3;
    fn mul(self, s: f64) -> State3 {
        State3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Index<usize> for State3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("State3 index {i} out of range"),
        }
    }
}

/// Row-major 3x3 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix3(pub [[f64; 3]; 3]);

impl Matrix3 {
    pub const IDENTITY: Matrix3 = Matrix3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_rows(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> Self {
        Matrix3([r0, r1, r2])
    }

    pub fn row(&self, i: usize) -> State3 {
        State3::from_array(self.0[i])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Sum of the principal 2x2 minors (second coefficient of the
    /// characteristic polynomial).
    pub fn principal_minor_sum(&self) -> f64 {
        let m = &self.0;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
    }

    pub fn transpose(&self) -> Matrix3 {
        let m = &self.0;
        Matrix3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn sub_identity(&self, lambda: f64) -> Matrix3 {
        let mut out = *self;
        for i in 0..3 {
            out.0[i][i] -= lambda;
        }
        out
    }

    pub fn mul_vec(&self, v: State3) -> State3 {
        State3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_1(&self) -> f64 {
        (0..3)
            .map(|j| (0..3).map(|i| self.0[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Inverse via the adjugate, `None` when the matrix is exactly singular.
    pub fn inverse(&self) -> Option<Matrix3> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        let inv_det = 1.0 / det;
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = adj[i][j] * inv_det;
            }
        }
        Some(Matrix3(out))
    }

    /// 1-norm condition number; infinite for singular matrices.
    pub fn condition_1(&self) -> f64 {
        match self.inverse() {
            Some(inv) if inv.is_finite() => self.norm_1() * inv.norm_1(),
            _ => f64::INFINITY,
        }
    }

    /// Solves `self * x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: State3) -> Option<State3> {
        let mut a = self.0;
        let mut rhs = b.to_array();
        for col in 0..3 {
            let piv = (col..3)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap_or(col);
            if a[piv][col] == 0.0 {
                return None;
            }
            a.swap(col, piv);
            rhs.swap(col, piv);
            for row in col + 1..3 {
                let f = a[row][col] / a[col][col];
                for k in col..3 {
                    a[row][k] -= f * a[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
        let mut x = [0.0; 3];
        for row in (0..3).rev() {
            let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
            x[row] = (rhs[row] - s) / a[row][row];
        }
        let out = State3::from_array(x);
        out.is_finite().then_some(out)
    }
}

impl Mul for Matrix3 {
    type Output = Matrix3;
    fn mul(self, o: Matrix3) -> Matrix3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Matrix3(out)
    }
}

/// Characteristic polynomial `λ³ + a λ² + b λ + c` of a 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharPoly {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CharPoly {
    pub fn of(m: &Matrix3) -> Self {
        CharPoly { a: -m.trace(), b: m.principal_minor_sum(), c: -m.det() }
    }

    pub fn eval(&self, l: f64) -> f64 {
        ((l + self.a) * l + self.b) * l + self.c
    }

    fn eval_complex(&self, l: Complex64) -> Complex64 {
        ((l + self.a) * l + self.b) * l + self.c
    }

    fn deriv(&self, l: f64) -> f64 {
        (3.0 * l + 2.0 * self.a) * l + self.b
    }

    fn deriv_complex(&self, l: Complex64) -> Complex64 {
        (l * 3.0 + 2.0 * self.a) * l + self.b
    }

    /// Discriminant: positive for three distinct real roots, negative when
    /// a complex-conjugate pair is present.
    pub fn discriminant(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        18.0 * a * b * c - 4.0 * a.powi(3) * c + a * a * b * b - 4.0 * b.powi(3) - 27.0 * c * c
    }

    /// All three roots, unordered. One real root is found in closed form
    /// (Cardano or the trigonometric form) and Newton-polished, the cubic
    /// is deflated, and the remaining quadratic is solved stably.
    pub fn roots(&self) -> [Complex64; 3] {
        let (a, b, c) = (self.a, self.b, self.c);
        let shift = a / 3.0;
        let p = b - a * a / 3.0;
        let q = 2.0 * a.powi(3) / 27.0 - a * b / 3.0 + c;
        let d = (q / 2.0).powi(2) + (p / 3.0).powi(3);

        let r = if d > 0.0 {
            let sq = d.sqrt();
            let u = (-q / 2.0 - q.signum() * sq).cbrt();
            let t = if u != 0.0 { u - p / (3.0 * u) } else { 0.0 };
            t - shift
        } else if p == 0.0 {
            -shift
        } else {
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            (0..3)
                .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
                .max_by(|x, y| x.abs().total_cmp(&y.abs()))
                .unwrap_or(-shift)
        };
        let r = self.polish_real(r);

        // deflate: λ² + e1 λ + e2 with e2 taken from the constant term when
        // the extracted root is large enough to divide by safely
        let e1 = a + r;
        let e2 = if r.abs() > 1e-8 * (1.0 + a.abs()) { -c / r } else { b + r * e1 };
        let disc = e1 * e1 - 4.0 * e2;
        let (r2, r3) = if disc >= 0.0 {
            let s = disc.sqrt();
            let big = if e1 >= 0.0 { (-e1 - s) / 2.0 } else { (-e1 + s) / 2.0 };
            let small = if big != 0.0 { e2 / big } else { 0.0 };
            (
                Complex64::new(self.polish_real(big), 0.0),
                Complex64::new(self.polish_real(small), 0.0),
            )
        } else {
            let z = self.polish_complex(Complex64::new(-e1 / 2.0, (-disc).sqrt() / 2.0));
            (z, z.conj())
        };
        [Complex64::new(r, 0.0), r2, r3]
    }

    fn polish_real(&self, mut x: f64) -> f64 {
        let mut fx = self.eval(x);
        for _ in 0..4 {
            let d = self.deriv(x);
            if d == 0.0 || fx == 0.0 {
                break;
            }
            let cand = x - fx / d;
            let fc = self.eval(cand);
            if !(fc.abs() < fx.abs()) {
                break;
            }
            x = cand;
            fx = fc;
        }
        x
    }

    fn polish_complex(&self, mut z: Complex64) -> Complex64 {
        let mut fz = self.eval_complex(z);
        for _ in 0..4 {
            let d = self.deriv_complex(z);
            if d.norm() == 0.0 || fz.norm() == 0.0 {
                break;
            }
            let cand = z - fz / d;
            let fc = self.eval_complex(cand);
            if !(fc.norm() < fz.norm()) {
                break;
            }
            z = cand;
            fz = fc;
        }
        // keep the upper-half-plane representative of the pair
        Complex64::new(z.re, z.im.abs())
    }
}

/// Eigenvalues of `m`, sorted by descending modulus, ties broken by
/// descending real part and then descending imaginary part, so a
/// conjugate pair always sits in adjacent slots (positive imaginary first).
pub fn eigenvalues(m: &Matrix3) -> [Complex64; 3] {
    let mut ev = CharPoly::of(m).roots();
    sort_eigenvalues(&mut ev);
    ev
}

pub(crate) fn sort_eigenvalues(ev: &mut [Complex64; 3]) {
    ev.sort_by(|u, v| {
        v.norm()
            .total_cmp(&u.norm())
            .then(v.re.total_cmp(&u.re))
            .then(v.im.total_cmp(&u.im))
    });
}

/// Unit vector spanning the (numerical) null space of `m - λI` for a real
/// eigenvalue λ: the largest cross product of two rows.
pub fn real_eigenvector(m: &Matrix3, lambda: f64) -> State3 {
    let a = m.sub_identity(lambda);
    let rows = [a.row(0), a.row(1), a.row(2)];
    let candidates = [
        rows[0].cross(rows[1]),
        rows[0].cross(rows[2]),
        rows[1].cross(rows[2]),
    ];
    let best = candidates
        .into_iter()
        .max_by(|u, v| u.norm().total_cmp(&v.norm()))
        .unwrap_or(State3::ZERO);
    if best.norm() > 0.0 {
        return best.normalized();
    }
    // rank <= 1: any vector orthogonal to the nonzero row works
    let r = rows
        .into_iter()
        .max_by(|u, v| u.norm().total_cmp(&v.norm()))
        .unwrap_or(State3::ZERO);
    if r.norm() == 0.0 {
        return State3::new(1.0, 0.0, 0.0);
    }
    let helper = if r.x.abs() < 0.9 * r.norm() { State3::new(1.0, 0.0, 0.0) } else { State3::new(0.0, 1.0, 0.0) };
    r.cross(helper).normalized()
}

/// Real and imaginary parts of an eigenvector for a complex eigenvalue.
pub fn complex_eigenvector(m: &Matrix3, lambda: Complex64) -> (State3, State3) {
    let a: Vec<[Complex64; 3]> = (0..3)
        .map(|i| {
            let mut row = [Complex64::new(0.0, 0.0); 3];
            for j in 0..3 {
                row[j] = Complex64::new(m.0[i][j], 0.0);
            }
            row[i] -= lambda;
            row
        })
        .collect();
    let cross = |u: &[Complex64; 3], v: &[Complex64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let norm = |w: &[Complex64; 3]| w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let best = [cross(&a[0], &a[1]), cross(&a[0], &a[2]), cross(&a[1], &a[2])]
        .into_iter()
        .max_by(|u, v| norm(u).total_cmp(&norm(v)))
        .expect("three candidates");
    let re = State3::new(best[0].re, best[1].re, best[2].re);
    let im = State3::new(best[0].im, best[1].im, best[2].im);
    let scale = norm(&best);
    if scale > 0.0 {
        (re * (1.0 / scale), im * (1.0 / scale))
    } else {
        (State3::new(1.0, 0.0, 0.0), State3::new(0.0, 1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn companion(roots: [f64; 3]) -> Matrix3 {
        // λ³ - s1 λ² + s2 λ - s3
        let s1 = roots.iter().sum::<f64>();
        let s2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
        let s3 = roots.iter().product::<f64>();
        Matrix3::from_rows([s1, 1.0, 0.0], [-s2, 0.0, 1.0], [s3, 0.0, 0.0])
    }

    #[test]
    fn solve_matches_inverse() {
        let m = Matrix3::from_rows([2.0, 1.0, -1.0], [-3.0, -1.0, 2.0], [-2.0, 1.0, 2.0]);
        let b = State3::new(8.0, -11.0, -3.0);
        let x = m.solve(b).unwrap();
        assert!(x.dist(State3::new(2.0, 3.0, -1.0)) < 1e-12);
        let y = m.inverse().unwrap().mul_vec(b);
        assert!(x.dist(y) < 1e-12);
    }

    #[test]
    fn singular_solve_is_none() {
        let m = Matrix3::from_rows([1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]);
        assert!(m.inverse().is_none());
        assert!(m.condition_1().is_infinite());
    }

    #[test]
    fn companion_roots_recovered() {
        for roots in [[1.3963, -0.7878, 0.0597], [11.33, -1.463, -6.0e-6], [0.5, 0.5, 0.5], [0.0, 0.0, 2.0]] {
            let ev = eigenvalues(&companion(roots));
            let mut want = roots;
            want.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
            for (e, w) in ev.iter().zip(want) {
                assert!(e.im.abs() < 1e-6, "{ev:?}");
                assert!((e.re - w).abs() < 1e-6 * (1.0 + w.abs()), "{ev:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn rotation_gives_conjugate_pair() {
        let t: f64 = 0.7;
        let m = Matrix3::from_rows([0.9 * t.cos(), -0.9 * t.sin(), 0.0], [0.9 * t.sin(), 0.9 * t.cos(), 0.0], [0.0, 0.0, 0.5]);
        let ev = eigenvalues(&m);
        assert!((ev[0].norm() - 0.9).abs() < 1e-12);
        assert_eq!(ev[0], ev[1].conj());
        assert!(ev[0].im > 0.0);
        assert!((ev[2].re - 0.5).abs() < 1e-12);
        assert!(CharPoly::of(&m).discriminant() < 0.0);
    }

    #[test]
    fn eigenvectors_satisfy_definition() {
        let m = Matrix3::from_rows([0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-0.58, -2.1 - 0.4, -2.269]);
        for ev in eigenvalues(&m) {
            if ev.im.abs() < 1e-12 {
                let v = real_eigenvector(&m, ev.re);
                assert!((m.mul_vec(v) - v * ev.re).norm() < 1e-10);
            } else {
                let (re, im) = complex_eigenvector(&m, ev);
                // M (re + i im) = λ (re + i im)
                let lhs_re = m.mul_vec(re);
                let lhs_im = m.mul_vec(im);
                let rhs_re = re * ev.re - im * ev.im;
                let rhs_im = re * ev.im + im * ev.re;
                assert!((lhs_re - rhs_re).norm() < 1e-10 && (lhs_im - rhs_im).norm() < 1e-10);
            }
        }
    }
}
