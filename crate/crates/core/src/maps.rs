//! Registry of the three-dimensional maps studied by this crate.
//!
//! Every map ships a closed-form Jacobian. A [`MapDef`] is bound to a
//! [`ParamSet`] once (validating the schema) and the resulting
//! [`BoundMap`] is what the numerical code iterates.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix3, State3};

/// Ordered name -> value parameter bindings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamSet {
    entries: Vec<(String, f64)>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder-style insert; replaces an existing binding of the same name.
    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((name.to_string(), value)),
        }
    }

    /// Appends without de-duplicating, so schema validation can catch
    /// double bindings coming from user input.
    pub fn push(&mut self, name: &str, value: f64) {
        self.entries.push((name.to_string(), value));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(n, v)| format!("{n}={v}")).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl<S: AsRef<str>> FromIterator<(S, f64)> for ParamSet {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        let mut p = ParamSet::new();
        for (n, v) in iter {
            p.push(n.as_ref(), v);
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    /// Piecewise linear with switching function `s(X) = x`; the boundary
    /// `x = 0` belongs to the left branch.
    PiecewiseLinear,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpec {
    pub name: String,
    pub default: f64,
    pub doc: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Mira,
    GenHenon,
    LotkaVolterra,
    BorderCollision,
    CoupledQuartic,
    UserCubic,
}

/// A registered map: identity, parameter schema and smoothness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MapDef {
    kind: MapKind,
}

const ALL_KINDS: [MapKind; 6] = [
    MapKind::Mira,
    MapKind::GenHenon,
    MapKind::LotkaVolterra,
    MapKind::BorderCollision,
    MapKind::CoupledQuartic,
    MapKind::UserCubic,
];

/// Exponent triples (i, j, k) with i + j + k <= 3, in graded order.
pub(crate) fn cubic_monomials() -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(20);
    for deg in 0..=3u32 {
        for i in (0..=deg).rev() {
            for j in (0..=deg - i).rev() {
                out.push([i, j, deg - i - j]);
            }
        }
    }
    out
}

fn cubic_name(component: usize, e: [u32; 3]) -> String {
    let c = ['x', 'y', 'z'][component];
    format!("{c}_{}{}{}", e[0], e[1], e[2])
}

impl MapDef {
    pub const fn new(kind: MapKind) -> Self {
        Self { kind }
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn id(&self) -> &'static str {
        match self.kind {
            MapKind::Mira => "mira",
            MapKind::GenHenon => "henon3d",
            MapKind::LotkaVolterra => "lotka-volterra",
            MapKind::BorderCollision => "bcnf",
            MapKind::CoupledQuartic => "coupled",
            MapKind::UserCubic => "cubic",
        }
    }

    pub fn description(&self) -> &'static str {
        match self.kind {
            MapKind::Mira => "x'=y, y'=z, z'=Bx+Cy+Az-y^2",
            MapKind::GenHenon => "generalised Henon: x'=a-y^2-bz, y'=x, z'=y",
            MapKind::LotkaVolterra => "3D Lotka-Volterra: x'=x+Rx(1-x-alpha y-beta z) and cyclic",
            MapKind::BorderCollision => "3D border-collision normal form, companion-form A_L (x<=0) / A_R (x>0)",
            MapKind::CoupledQuartic => "globally coupled map with f(x)=x(1-x)(ax^2+(b^2-da)x+c), z'=x",
            MapKind::UserCubic => "general cubic polynomial map, coefficients <out>_<i><j><k> for x^i y^j z^k",
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match self.kind {
            MapKind::BorderCollision => Smoothness::PiecewiseLinear,
            _ => Smoothness::Smooth,
        }
    }

    /// Parameter names, documented defaults (the figure values), and a
    /// short description of each.
    pub fn schema(&self) -> Vec<ParamSpec> {
        let spec = |name: &str, default: f64, doc: &'static str| ParamSpec { name: name.to_string(), default, doc };
        match self.kind {
            MapKind::Mira => vec![
                spec("A", -2.269, "coefficient of z in z'"),
                spec("B", -0.58, "coefficient of x in z'; det J = B"),
                spec("C", -2.1, "coefficient of y in z'"),
            ],
            MapKind::GenHenon => vec![
                spec("a", 1.2, "additive constant in x'"),
                spec("b", 0.1, "coefficient of z in x'"),
            ],
            MapKind::LotkaVolterra => vec![
                spec("R", 1.0, "growth rate"),
                spec("alpha", 1.0, "competition coefficient (cyclic)"),
                spec("beta", -0.59, "competition coefficient (anti-cyclic)"),
            ],
            MapKind::BorderCollision => vec![
                spec("tau_L", 0.74, "trace of A_L"),
                spec("tau_R", -0.5, "trace of A_R"),
                spec("sigma_L", 0.5, "second invariant of A_L"),
                spec("sigma_R", 1.1, "second invariant of A_R"),
                spec("delta_L", 0.73, "determinant of A_L"),
                spec("delta_R", 1.4, "determinant of A_R"),
                spec("mu", 0.01, "border-collision parameter"),
            ],
            MapKind::CoupledQuartic => vec![
                spec("p", 0.5, "coupling asymmetry"),
                spec("epsilon", -1.4, "coupling strength"),
                spec("a", 27.3, "quartic coefficient of f"),
                spec("b", 1.688, "f coefficient (enters as b^2)"),
                spec("c", 3.5, "linear coefficient of the inner quadratic"),
                spec("d", 0.85, "f coefficient (enters as -d a)"),
            ],
            MapKind::UserCubic => {
                let mut out = Vec::with_capacity(60);
                for comp in 0..3 {
                    for e in cubic_monomials() {
                        out.push(ParamSpec { name: cubic_name(comp, e), default: 0.0, doc: "polynomial coefficient" });
                    }
                }
                out
            }
        }
    }

    pub fn defaults(&self) -> ParamSet {
        self.schema().into_iter().map(|s| (s.name, s.default)).collect()
    }

    /// Defaults with some entries overridden.
    pub fn params_with(&self, overrides: &[(&str, f64)]) -> ParamSet {
        let mut p = self.defaults();
        for (n, v) in overrides {
            p.set(n, *v);
        }
        p
    }

    /// Validates `params` against the schema and returns a fast evaluator.
    pub fn bind(&self, params: &ParamSet) -> Result<BoundMap> {
        let schema = self.schema();
        let schema_err = |detail: String| Error::Schema { map: self.id().to_string(), detail };
        for (i, (name, value)) in params.iter().enumerate() {
            if !schema.iter().any(|s| s.name == name) {
                return Err(schema_err(format!("unknown parameter `{name}`")));
            }
            if params.iter().skip(i + 1).any(|(n, _)| n == name) {
                return Err(schema_err(format!("parameter `{name}` bound more than once")));
            }
            if !value.is_finite() {
                return Err(schema_err(format!("parameter `{name}` is not finite")));
            }
        }
        let mut values = Vec::with_capacity(schema.len());
        for s in &schema {
            match params.get(&s.name) {
                Some(v) => values.push(v),
                None => return Err(schema_err(format!("missing parameter `{}`", s.name))),
            }
        }
        let rule = match self.kind {
            MapKind::Mira => Rule::Mira { a: values[0], b: values[1], c: values[2] },
            MapKind::GenHenon => Rule::Henon { a: values[0], b: values[1] },
            MapKind::LotkaVolterra => Rule::LotkaVolterra { r: values[0], alpha: values[1], beta: values[2] },
            MapKind::BorderCollision => Rule::Bcnf {
                left: Companion { tau: values[0], sigma: values[2], delta: values[4] },
                right: Companion { tau: values[1], sigma: values[3], delta: values[5] },
                mu: values[6],
            },
            MapKind::CoupledQuartic => Rule::Coupled(Quartic {
                p: values[0],
                eps: values[1],
                a: values[2],
                b: values[3],
                c: values[4],
                d: values[5],
            }),
            MapKind::UserCubic => {
                let mut coef = [[0.0; 20]; 3];
                for (k, v) in values.iter().enumerate() {
                    coef[k / 20][k % 20] = *v;
                }
                Rule::Cubic(Box::new(CubicCoefficients { coef, exps: cubic_monomials() }))
            }
        };
        Ok(BoundMap { def: *self, params: params.clone(), rule })
    }
}

impl fmt::Display for MapDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// All registered maps.
pub fn registry() -> Vec<MapDef> {
    ALL_KINDS.iter().map(|k| MapDef::new(*k)).collect()
}

pub fn lookup(id: &str) -> Result<MapDef> {
    registry()
        .into_iter()
        .find(|m| m.id() == id)
        .ok_or_else(|| Error::UnknownMap(id.to_string()))
}

/// Side of the switching surface for piecewise-linear maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    L,
    R,
}

impl Symbol {
    pub fn of(s: State3) -> Symbol {
        if s.x <= 0.0 {
            Symbol::L
        } else {
            Symbol::R
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::R => 'R',
        }
    }
}

/// Companion-form branch matrix `[[tau, 1, 0], [-sigma, 0, 1], [delta, 0, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Companion {
    pub tau: f64,
    pub sigma: f64,
    pub delta: f64,
}

impl Companion {
    pub fn matrix(&self) -> Matrix3 {
        Matrix3::from_rows([self.tau, 1.0, 0.0], [-self.sigma, 0.0, 1.0], [self.delta, 0.0, 0.0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Quartic {
    p: f64,
    eps: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Quartic {
    fn f(&self, x: f64) -> f64 {
        x * (1.0 - x) * (self.a * x * x + (self.b * self.b - self.d * self.a) * x + self.c)
    }

    fn df(&self, x: f64) -> f64 {
        let lin = self.b * self.b - self.d * self.a;
        let g = self.a * x * x + lin * x + self.c;
        let dg = 2.0 * self.a * x + lin;
        (1.0 - 2.0 * x) * g + x * (1.0 - x) * dg
    }
}

#[derive(Clone, Debug, PartialEq)]
struct CubicCoefficients {
    coef: [[f64; 20]; 3],
    exps: Vec<[u32; 3]>,
}

impl CubicCoefficients {
    fn eval(&self, s: State3) -> State3 {
        let mut out = [0.0; 3];
        for (k, e) in self.exps.iter().enumerate() {
            let m = s.x.powi(e[0] as i32) * s.y.powi(e[1] as i32) * s.z.powi(e[2] as i32);
            for (c, o) in out.iter_mut().enumerate() {
                *o += self.coef[c][k] * m;
            }
        }
        State3::from_array(out)
    }

    fn jacobian(&self, s: State3) -> Matrix3 {
        let v = s.to_array();
        let mut j = [[0.0; 3]; 3];
        for (k, e) in self.exps.iter().enumerate() {
            for var in 0..3 {
                if e[var] == 0 {
                    continue;
                }
                let mut d = e[var] as f64;
                for (w, &p) in e.iter().enumerate() {
                    let p = if w == var { p - 1 } else { p };
                    d *= v[w].powi(p as i32);
                }
                for (c, row) in j.iter_mut().enumerate() {
                    row[var] += self.coef[c][k] * d;
                }
            }
        }
        Matrix3(j)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Rule {
    Mira { a: f64, b: f64, c: f64 },
    Henon { a: f64, b: f64 },
    LotkaVolterra { r: f64, alpha: f64, beta: f64 },
    Bcnf { left: Companion, right: Companion, mu: f64 },
    Coupled(Quartic),
    Cubic(Box<CubicCoefficients>),
}

/// A map bound to a validated parameter set.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundMap {
    def: MapDef,
    params: ParamSet,
    rule: Rule,
}

impl BoundMap {
    pub fn def(&self) -> MapDef {
        self.def
    }

    pub fn id(&self) -> &'static str {
        self.def.id()
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name)
    }

    pub fn is_piecewise(&self) -> bool {
        self.def.smoothness() == Smoothness::PiecewiseLinear
    }

    /// Rebinds with one parameter changed.
    pub fn with_param(&self, name: &str, value: f64) -> Result<BoundMap> {
        let mut p = self.params.clone();
        if p.get(name).is_none() {
            return Err(Error::Schema { map: self.id().to_string(), detail: format!("unknown parameter `{name}`") });
        }
        p.set(name, value);
        self.def.bind(&p)
    }

    /// One application of the map, without a finiteness check.
    #[inline]
    pub fn apply(&self, s: State3) -> State3 {
        let State3 { x, y, z } = s;
        match &self.rule {
            Rule::Mira { a, b, c } => State3::new(y, z, b * x + c * y + a * z - y * y),
            Rule::Henon { a, b } => State3::new(a - y * y - b * z, x, y),
            Rule::LotkaVolterra { r, alpha, beta } => State3::new(
                x + r * x * (1.0 - x - alpha * y - beta * z),
                y + r * y * (1.0 - beta * x - y - alpha * z),
                z + r * z * (1.0 - alpha * x - beta * y - z),
            ),
            Rule::Bcnf { left, right, mu } => {
                let br = if x <= 0.0 { left } else { right };
                State3::new(br.tau * x + y + mu, -br.sigma * x + z, br.delta * x)
            }
            Rule::Coupled(q) => {
                let (fx, fy) = (q.f(x), q.f(y));
                State3::new(fx + q.p * q.eps * (fy - fx), fy + (1.0 - q.p) * q.eps * (fx - fy), x)
            }
            Rule::Cubic(c) => c.eval(s),
        }
    }

    /// One application of the map; non-finite results are an error.
    pub fn step(&self, s: State3) -> Result<State3> {
        let out = self.apply(s);
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::Overflow { state: s })
        }
    }

    /// Analytic Jacobian (of the selected branch for piecewise maps).
    #[inline]
    pub fn jacobian(&self, s: State3) -> Matrix3 {
        let State3 { x, y, z } = s;
        match &self.rule {
            Rule::Mira { a, b, c } => Matrix3::from_rows([0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [*b, c - 2.0 * y, *a]),
            Rule::Henon { b, .. } => Matrix3::from_rows([0.0, -2.0 * y, -b], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
            Rule::LotkaVolterra { r, alpha, beta } => Matrix3::from_rows(
                [1.0 + r * (1.0 - 2.0 * x - alpha * y - beta * z), -r * alpha * x, -r * beta * x],
                [-r * beta * y, 1.0 + r * (1.0 - beta * x - 2.0 * y - alpha * z), -r * alpha * y],
                [-r * alpha * z, -r * beta * z, 1.0 + r * (1.0 - alpha * x - beta * y - 2.0 * z)],
            ),
            Rule::Bcnf { left, right, .. } => {
                if x <= 0.0 {
                    left.matrix()
                } else {
                    right.matrix()
                }
            }
            Rule::Coupled(q) => {
                let (gx, gy) = (q.df(x), q.df(y));
                let pe = q.p * q.eps;
                let qe = (1.0 - q.p) * q.eps;
                Matrix3::from_rows([gx * (1.0 - pe), pe * gy, 0.0], [qe * gx, gy * (1.0 - qe), 0.0], [1.0, 0.0, 0.0])
            }
            Rule::Cubic(c) => c.jacobian(s),
        }
    }

    /// Closed-form `det J` where it does not depend on the state.
    pub fn constant_determinant(&self) -> Option<f64> {
        match &self.rule {
            Rule::Mira { b, .. } => Some(*b),
            Rule::Henon { b, .. } => Some(-*b),
            Rule::Coupled(_) => Some(0.0),
            _ => None,
        }
    }

    /// Branch matrices of the border-collision normal form.
    pub fn branch_matrices(&self) -> Option<(Matrix3, Matrix3)> {
        match &self.rule {
            Rule::Bcnf { left, right, .. } => Some((left.matrix(), right.matrix())),
            _ => None,
        }
    }

    pub fn symbol(&self, s: State3) -> Option<Symbol> {
        self.is_piecewise().then(|| Symbol::of(s))
    }
}

/// Applies `map` once to `s` after validating the parameters.
pub fn eval_map(map: &MapDef, params: &ParamSet, s: State3) -> Result<State3> {
    if !s.is_finite() {
        return Err(Error::Overflow { state: s });
    }
    map.bind(params)?.step(s)
}

pub fn eval_jacobian(map: &MapDef, params: &ParamSet, s: State3) -> Result<Matrix3> {
    if !s.is_finite() {
        return Err(Error::Overflow { state: s });
    }
    Ok(map.bind(params)?.jacobian(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
    /// Determinant sign varies with the state (or is identically zero).
    Mixed,
}

/// Orientation class from the sign of `det J`. Closed form where the
/// determinant is state independent (including per-branch for the
/// piecewise map); otherwise a deterministic grid over [-2, 2]^3 is
/// sampled, which is a heuristic.
pub fn orientation_class(map: &MapDef, params: &ParamSet) -> Result<Orientation> {
    let bound = map.bind(params)?;
    let from_signs = |signs: &[f64]| {
        if signs.iter().all(|d| *d > 0.0) {
            Orientation::Preserving
        } else if signs.iter().all(|d| *d < 0.0) {
            Orientation::Reversing
        } else {
            Orientation::Mixed
        }
    };
    if let Some(det) = bound.constant_determinant() {
        return Ok(from_signs(&[det]));
    }
    if let Some((l, r)) = bound.branch_matrices() {
        return Ok(from_signs(&[l.det(), r.det()]));
    }
    let grid: Vec<f64> = (0..9).map(|k| -2.0 + 0.5 * k as f64).collect();
    let mut dets = Vec::with_capacity(grid.len().pow(3));
    for &x in &grid {
        for &y in &grid {
            for &z in &grid {
                dets.push(bound.jacobian(State3::new(x, y, z)).det());
            }
        }
    }
    Ok(from_signs(&dets))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mira() -> MapDef {
        MapDef::new(MapKind::Mira)
    }

    #[test]
    fn lotka_volterra_origin_is_fixed() {
        let m = MapDef::new(MapKind::LotkaVolterra);
        for beta in [-1.0, -0.59, 0.3] {
            let p = m.params_with(&[("beta", beta), ("R", 1.7)]);
            assert_eq!(eval_map(&m, &p, State3::ZERO).unwrap(), State3::ZERO);
        }
    }

    #[test]
    fn henon_origin_image() {
        let m = MapDef::new(MapKind::GenHenon);
        let p = m.params_with(&[("a", 1.2), ("b", 0.1)]);
        assert_eq!(eval_map(&m, &p, State3::ZERO).unwrap(), State3::new(1.2, 0.0, 0.0));
    }

    #[test]
    fn mira_diagonal_fixed_point() {
        let (a, b, c) = (-2.269, -0.58, -2.1);
        let p = mira().params_with(&[("A", a), ("B", b), ("C", c)]);
        let xs = a + b + c - 1.0;
        let out = eval_map(&mira(), &p, State3::splat(xs)).unwrap();
        assert!(out.dist_inf(State3::splat(xs)) < 1e-12);
    }

    #[test]
    fn mira_jacobian_determinant_is_b() {
        let p = mira().defaults();
        let j = eval_jacobian(&mira(), &p, State3::new(0.3, -1.7, 0.2)).unwrap();
        assert!((j.det() + 0.58).abs() < 1e-12);
    }

    #[test]
    fn bcnf_branch_matrices_selected_by_sign() {
        let m = MapDef::new(MapKind::BorderCollision);
        let p = m.defaults();
        let b = m.bind(&p).unwrap();
        let (l, r) = b.branch_matrices().unwrap();
        assert_eq!(b.jacobian(State3::new(-0.5, 0.2, 0.1)), l);
        assert_eq!(b.jacobian(State3::new(0.5, 0.2, 0.1)), r);
        assert_eq!(b.jacobian(State3::new(0.0, 0.2, 0.1)), l);
        assert_eq!(l, Matrix3::from_rows([0.74, 1.0, 0.0], [-0.5, 0.0, 1.0], [0.73, 0.0, 0.0]));
        assert_eq!(r, Matrix3::from_rows([-0.5, 1.0, 0.0], [-1.1, 0.0, 1.0], [1.4, 0.0, 0.0]));
    }

    #[test]
    fn bcnf_continuous_across_switching_plane() {
        let m = MapDef::new(MapKind::BorderCollision);
        let b = m.bind(&m.defaults()).unwrap();
        let (y, z) = (0.37, -0.21);
        let at = b.apply(State3::new(0.0, y, z));
        let right = b.apply(State3::new(1e-300, y, z));
        let left = b.apply(State3::new(-1e-300, y, z));
        assert!(at.dist_inf(right) <= 1e-12 && at.dist_inf(left) <= 1e-12);
        assert_eq!(b.symbol(State3::new(0.0, y, z)), Some(Symbol::L));
    }

    #[test]
    fn schema_errors() {
        let m = mira();
        let missing: ParamSet = [("A", 1.0), ("B", 1.0)].into_iter().collect();
        assert!(matches!(m.bind(&missing), Err(Error::Schema { .. })));
        let extra = m.defaults().with("Q", 2.0);
        assert!(matches!(m.bind(&extra), Err(Error::Schema { .. })));
        let mut dup = m.defaults();
        dup.push("A", 3.0);
        assert!(matches!(m.bind(&dup), Err(Error::Schema { .. })));
        let nan = m.defaults().with("C", f64::NAN);
        assert!(matches!(m.bind(&nan), Err(Error::Schema { .. })));
        assert!(matches!(lookup("nope"), Err(Error::UnknownMap(_))));
    }

    #[test]
    fn overflow_carries_state() {
        let m = mira();
        let s = State3::new(0.0, 1e200, 0.0);
        match eval_map(&m, &m.defaults(), s) {
            Err(Error::Overflow { state }) => assert_eq!(state, s),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn orientation_examples() {
        let m = mira();
        assert_eq!(orientation_class(&m, &m.params_with(&[("B", -0.58)])).unwrap(), Orientation::Reversing);
        assert_eq!(orientation_class(&m, &m.params_with(&[("B", 0.5)])).unwrap(), Orientation::Preserving);
        let bc = MapDef::new(MapKind::BorderCollision);
        // det A_L = delta_L and det A_R = delta_R for the companion form
        let p = bc.params_with(&[("delta_L", 0.73), ("delta_R", 1.5)]);
        let (l, r) = bc.bind(&p).unwrap().branch_matrices().unwrap();
        assert!((l.det() - 0.73).abs() < 1e-15 && (r.det() - 1.5).abs() < 1e-15);
        assert_eq!(orientation_class(&bc, &p).unwrap(), Orientation::Preserving);
        let p = bc.params_with(&[("delta_L", -0.73), ("delta_R", 1.5)]);
        assert_eq!(orientation_class(&bc, &p).unwrap(), Orientation::Mixed);
        let lv = MapDef::new(MapKind::LotkaVolterra);
        assert_eq!(orientation_class(&lv, &lv.defaults()).unwrap(), Orientation::Mixed);
    }

    #[test]
    fn coupled_map_swap_covariance_at_half() {
        let m = MapDef::new(MapKind::CoupledQuartic);
        let b = m.bind(&m.params_with(&[("p", 0.5)])).unwrap();
        let (x, y) = (0.13, 0.171);
        let fwd = b.apply(State3::new(x, y, 0.0));
        let swapped = b.apply(State3::new(y, x, 0.0));
        assert!((fwd.x - swapped.y).abs() < 1e-15 && (fwd.y - swapped.x).abs() < 1e-15);
    }

    #[test]
    fn cubic_user_map_reproduces_henon() {
        let m = MapDef::new(MapKind::UserCubic);
        let p = m.defaults().with("x_000", 1.2).with("x_020", -1.0).with("x_001", -0.1).with("y_100", 1.0).with("z_010", 1.0);
        let cubic = m.bind(&p).unwrap();
        let h = MapDef::new(MapKind::GenHenon).bind(&MapDef::new(MapKind::GenHenon).defaults()).unwrap();
        let s = State3::new(0.3, -0.8, 0.5);
        assert!(cubic.apply(s).dist_inf(h.apply(s)) < 1e-15);
        assert!(cubic.jacobian(s).0 == h.jacobian(s).0);
    }

    #[test]
    fn registry_ids_unique() {
        let ids: Vec<_> = registry().iter().map(|m| m.id()).collect();
        for (i, id) in ids.iter().enumerate() {
            assert!(!ids[i + 1..].contains(id));
            assert_eq!(lookup(id).unwrap().id(), *id);
        }
        assert_eq!(MapDef::new(MapKind::UserCubic).schema().len(), 60);
    }
}
