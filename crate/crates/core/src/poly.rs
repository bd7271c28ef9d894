//! Sparse polynomial systems for counting framework embeddings.
//!
//! `SoE` is the raw edge-equation system over `(x1, y1, ..., xn, yn)`;
//! `SubSoE` adds `s_i = x_i^2 + y_i^2` and linearizes the edge equations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::graph::{edge, henneberg_decompose_from, orient_sequence, Edge, Framework, GraphError};
use crate::polytope::{hull_vertices, RationalPolytope};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("constant {0} must be nonzero")]
    ZeroConstant(&'static str),
    #[error("c1 = {0} coincides with the base edge length")]
    ConstantCollision(String),
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("expected {expected} coordinates, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// The pinning constants: `v1 = (c1, c2)`, `v2 = (l12 - c1, c3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constants {
    pub c1: Rational,
    pub c2: Rational,
    pub c3: Rational,
}

impl Constants {
    pub fn new(c1: Rational, c2: Rational, c3: Rational) -> Result<Self, PolyError> {
        for (name, c) in [("c1", &c1), ("c2", &c2), ("c3", &c3)] {
            if c.is_zero() {
                return Err(PolyError::ZeroConstant(name));
            }
        }
        Ok(Self { c1, c2, c3 })
    }

    fn check_against(&self, l12: &Rational) -> Result<(), PolyError> {
        if &self.c1 == l12 {
            return Err(PolyError::ConstantCollision(format_rational(l12)));
        }
        Ok(())
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self { c1: int(1), c2: int(2), c3: int(3) }
    }
}

/// Exact complex rational `re + i * im`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", format_rational(&self.im))
        } else {
            write!(f, "{}+{}i", format_rational(&self.re), format_rational(&self.im))
        }
    }
}

pub type Exponent = Vec<u32>;

/// Sparse polynomial over a fixed number of variables; no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Self::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c * s)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut term = GaussianRational::real(c.clone());
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = &term * &x.pow(k);
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { names[v].clone() } else { format!("{}^{}", names[v], k) })
                .collect();
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&format_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&format_rational(&mag));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self + &(-o)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)] // exponents add when monomials multiply
impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SystemForm {
    SoE,
    SubSoE,
    FaceSystem,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub variables: Vec<String>,
    pub polys: Vec<Polynomial>,
    pub form: SystemForm,
    /// `labels[i - 1]` is the input vertex playing the role of `v_i`.
    pub labels: Vec<usize>,
}

impl PolySystem {
    pub fn custom(variables: Vec<String>, polys: Vec<Polynomial>) -> Self {
        Self { variables, polys, form: SystemForm::Custom, labels: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }
}

/// The framework relabeled so `base` becomes `{v1, v2}`, plus for every
/// `v_i`, `i >= 3`, its two in-edges under the two-in orientation.
struct Layout {
    framework: Framework,
    labels: Vec<usize>,
    in_edges: Vec<[Edge; 2]>,
}

fn default_base(f: &Framework) -> Result<Edge, PolyError> {
    let g = f.graph();
    if g.has_edge(1, 2) {
        return Ok((1, 2));
    }
    g.edges().next().ok_or(PolyError::Graph(GraphError::NotLaman))
}

fn layout(f: &Framework, base: Edge) -> Result<Layout, PolyError> {
    let dec = henneberg_decompose_from(f.graph(), edge(base.0, base.1))?;
    let framework = f.relabeled(&dec.to_sequence_labels());
    let orientation = orient_sequence(&dec.sequence)?;
    let n = framework.graph().n();
    let in_edges = (3..=n)
        .map(|v| {
            let inc = orientation.incoming(v);
            [inc[0], inc[1]]
        })
        .collect();
    Ok(Layout { framework, labels: dec.labels, in_edges })
}

fn pinning(nvars: usize, consts: &Constants, l12: &Rational) -> Vec<Polynomial> {
    let c = |r: &Rational| Polynomial::constant(nvars, r.clone());
    vec![
        &Polynomial::var(nvars, 0) - &c(&consts.c1),
        &Polynomial::var(nvars, 1) - &c(&consts.c2),
        &Polynomial::var(nvars, 2) - &c(&(l12 - &consts.c1)),
        &Polynomial::var(nvars, 3) - &c(&consts.c3),
    ]
}

fn xy_names(n: usize) -> Vec<String> {
    (1..=n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect()
}

/// The default constants, with `c1` moved off the base length if they collide.
pub fn constants_for(f: &Framework) -> Result<Constants, PolyError> {
    let base = default_base(f)?;
    let l12 = f.length(base.0, base.1).expect("edges have lengths");
    let mut consts = Constants::default();
    if &consts.c1 == l12 {
        consts.c1 = l12 + int(1);
    }
    Ok(consts)
}

pub fn build_soe(f: &Framework, consts: &Constants) -> Result<PolySystem, PolyError> {
    build_soe_with_base(f, consts, default_base(f)?)
}

pub fn build_soe_with_base(f: &Framework, consts: &Constants, base: Edge) -> Result<PolySystem, PolyError> {
    let lay = layout(f, base)?;
    let n = lay.framework.graph().n();
    let nv = 2 * n;
    let l12 = lay.framework.length(1, 2).expect("base edge has a length").clone();
    consts.check_against(&l12)?;
    let mut polys = pinning(nv, consts, &l12);
    for pair in &lay.in_edges {
        for &(i, j) in pair {
            let dx = &Polynomial::var(nv, 2 * (i - 1)) - &Polynomial::var(nv, 2 * (j - 1));
            let dy = &Polynomial::var(nv, 2 * i - 1) - &Polynomial::var(nv, 2 * j - 1);
            let l = lay.framework.length(i, j).unwrap();
            let h = &(&dx.pow(2) + &dy.pow(2)) - &Polynomial::constant(nv, l * l);
            polys.push(h);
        }
    }
    Ok(PolySystem { variables: xy_names(n), polys, form: SystemForm::SoE, labels: lay.labels })
}

pub fn build_subsoe(f: &Framework, consts: &Constants) -> Result<PolySystem, PolyError> {
    build_subsoe_with_base(f, consts, default_base(f)?)
}

pub fn build_subsoe_with_base(f: &Framework, consts: &Constants, base: Edge) -> Result<PolySystem, PolyError> {
    let lay = layout(f, base)?;
    let n = lay.framework.graph().n();
    let nv = 3 * n;
    let l12 = lay.framework.length(1, 2).expect("base edge has a length").clone();
    consts.check_against(&l12)?;
    let x = |i: usize| Polynomial::var(nv, 2 * (i - 1));
    let y = |i: usize| Polynomial::var(nv, 2 * i - 1);
    let s = |i: usize| Polynomial::var(nv, 2 * n + i - 1);
    let two = int(2);
    let mut polys = pinning(nv, consts, &l12);
    for pair in &lay.in_edges {
        for &(i, j) in pair {
            let l = lay.framework.length(i, j).unwrap();
            let cross = &(&x(i) * &x(j)) + &(&y(i) * &y(j));
            let h = &(&(&s(i) + &s(j)) - &cross.scale(&two)) - &Polynomial::constant(nv, l * l);
            polys.push(h);
        }
    }
    for i in 1..=n {
        polys.push(&(&s(i) - &x(i).pow(2)) - &y(i).pow(2));
    }
    let mut variables = xy_names(n);
    variables.extend((1..=n).map(|i| format!("s{i}")));
    Ok(PolySystem { variables, polys, form: SystemForm::SubSoE, labels: lay.labels })
}

pub fn newton_polytopes(sys: &PolySystem) -> Vec<RationalPolytope> {
    sys.polys
        .iter()
        .map(|p| {
            let pts: Vec<_> = p.support().iter().map(|e| e.iter().map(|&k| int(k as i64)).collect()).collect();
            hull_vertices(&pts).expect("nonempty support of consistent dimension")
        })
        .collect()
}

/// Restricts every polynomial to the terms minimizing `<w, exponent>`.
pub fn face_system(sys: &PolySystem, w: &[Rational]) -> Result<PolySystem, PolyError> {
    if w.len() != sys.nvars() {
        return Err(PolyError::LengthMismatch { expected: sys.nvars(), found: w.len() });
    }
    if w.iter().all(Zero::is_zero) {
        return Err(PolyError::ZeroDirection);
    }
    let weight =
        |e: &Exponent| -> Rational { e.iter().zip(w).filter(|(&k, _)| k > 0).map(|(&k, wi)| wi * int(k as i64)).sum() };
    let polys = sys
        .polys
        .iter()
        .map(|p| {
            let Some(min) = p.terms.keys().map(weight).min() else {
                return p.clone();
            };
            Polynomial::from_terms(
                p.nvars,
                p.terms.iter().filter(|(e, _)| weight(e) == min).map(|(e, c)| (e.clone(), c.clone())),
            )
        })
        .collect();
    Ok(PolySystem { variables: sys.variables.clone(), polys, form: SystemForm::FaceSystem, labels: sys.labels.clone() })
}

pub fn evaluate(sys: &PolySystem, point: &[GaussianRational]) -> Result<Vec<GaussianRational>, PolyError> {
    if point.len() != sys.nvars() {
        return Err(PolyError::LengthMismatch { expected: sys.nvars(), found: point.len() });
    }
    Ok(sys.polys.iter().map(|p| p.evaluate(point)).collect())
}

/// `w = (0, 0, 0, 0, -1, ..., -1)` over the `2n` SoE variables.
pub fn degeneracy_direction(n: usize) -> Vec<Rational> {
    (0..2 * n).map(|i| if i < 4 { int(0) } else { int(-1) }).collect()
}

/// `(c1, c2, l12 - c1, c3, 1, i, 1, i, ...)`.
pub fn witness_point(n: usize, consts: &Constants, l12: &Rational) -> Vec<GaussianRational> {
    let mut pt = vec![
        GaussianRational::real(consts.c1.clone()),
        GaussianRational::real(consts.c2.clone()),
        GaussianRational::real(l12 - &consts.c1),
        GaussianRational::real(consts.c3.clone()),
    ];
    for _ in 2..n {
        pt.push(GaussianRational::one());
        pt.push(GaussianRational::i());
    }
    pt
}

/// True iff the SoE face system along the degeneracy direction vanishes at
/// the witness point, so the mixed volume of SoE strictly overcounts.
pub fn witness_check(f: &Framework, consts: &Constants) -> Result<bool, PolyError> {
    let sys = build_soe(f, consts)?;
    let n = f.graph().n();
    let base = default_base(f)?;
    let l12 = f.length(base.0, base.1).unwrap();
    let face = face_system(&sys, &degeneracy_direction(n))?;
    let values = evaluate(&face, &witness_point(n, consts, l12))?;
    Ok(values.iter().all(GaussianRational::is_zero))
}

pub fn bezout(sys: &PolySystem) -> BigUint {
    sys.polys.iter().map(|p| BigUint::from(p.total_degree())).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{desargues, k33, triangle, Graph};
    use crate::rational::{point, rat};

    fn triangle_345() -> Framework {
        let lengths = [((1, 2), 5), ((1, 3), 4), ((2, 3), 3)].into_iter().map(|(e, l)| (e, int(l))).collect();
        Framework::new(triangle(), lengths).unwrap()
    }

    fn exp(v: &[u32]) -> Exponent {
        v.to_vec()
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::real(int(-1)));
        let x2y2 = &GaussianRational::one().pow(2) + &i.pow(2);
        assert!(x2y2.is_zero());
    }

    #[test]
    fn soe_for_triangle() {
        let sys = build_soe(&triangle_345(), &Constants::default()).unwrap();
        assert_eq!(sys.polys.len(), 6);
        // h5 = (x1 - x3)^2 + (y1 - y3)^2 - 16
        let h5 = &sys.polys[4];
        assert_eq!(h5.coefficient(&exp(&[2, 0, 0, 0, 0, 0])), int(1));
        assert_eq!(h5.coefficient(&exp(&[1, 0, 0, 0, 1, 0])), int(-2));
        assert_eq!(h5.coefficient(&exp(&[0, 1, 0, 0, 0, 1])), int(-2));
        assert_eq!(h5.coefficient(&exp(&[0; 6])), int(-16));
        assert_eq!(h5.terms().len(), 7);
        assert_eq!(bezout(&sys), BigUint::from(4u32));
    }

    #[test]
    fn degrees_of_desargues_soe() {
        let f = Framework::uniform(desargues(), int(2)).unwrap();
        let sys = build_soe(&f, &Constants::default()).unwrap();
        let degrees: Vec<u32> = sys.polys.iter().map(Polynomial::total_degree).collect();
        assert_eq!(degrees, vec![1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(bezout(&sys), BigUint::from(256u32));
    }

    #[test]
    fn subsoe_shapes() {
        let sys = build_subsoe(&triangle_345(), &Constants::default()).unwrap();
        assert_eq!((sys.polys.len(), sys.nvars()), (9, 9));
        assert_eq!(bezout(&sys), BigUint::from(32u32));
        let circle = &sys.polys[8];
        assert_eq!(circle.terms().len(), 3);
        assert!(circle.coefficient(&exp(&[0; 9])).is_zero());
    }

    #[test]
    fn soe_edge_polytope_has_five_vertices() {
        let sys = build_soe(&triangle_345(), &Constants::default()).unwrap();
        let nps = newton_polytopes(&sys);
        assert_eq!(nps[0].vertices(), &[point(&[0; 6]), point(&[1, 0, 0, 0, 0, 0])]);
        assert_eq!(nps[4].vertices().len(), 5);
    }

    #[test]
    fn face_system_rejects_zero_and_keeps_minimizers() {
        let sys = build_soe(&triangle_345(), &Constants::default()).unwrap();
        assert_eq!(face_system(&sys, &vec![int(0); 6]), Err(PolyError::ZeroDirection));
        let mut w = vec![int(0); 6];
        w[0] = int(1);
        let face = face_system(&sys, &w).unwrap();
        assert_eq!(face.polys[0], Polynomial::constant(6, int(-1)));
    }

    #[test]
    fn witness_holds_for_face_but_not_original() {
        for g in [triangle(), k33(), desargues()] {
            let f = Framework::uniform(g, int(2)).unwrap();
            let consts = Constants::default();
            assert!(witness_check(&f, &consts).unwrap());
            let sys = build_soe(&f, &consts).unwrap();
            let n = f.graph().n();
            let vals = evaluate(&sys, &witness_point(n, &consts, &int(2))).unwrap();
            assert!(vals.iter().any(|v| !v.is_zero()));
        }
    }

    #[test]
    fn constants_are_validated() {
        assert_eq!(Constants::new(int(0), int(1), int(1)), Err(PolyError::ZeroConstant("c1")));
        let f = Framework::uniform(triangle(), int(1)).unwrap();
        assert!(matches!(build_soe(&f, &Constants::default()), Err(PolyError::ConstantCollision(_))));
        let consts = Constants::new(rat(1, 2), int(1), int(1)).unwrap();
        assert!(build_soe(&f, &consts).is_ok());
    }

    #[test]
    fn soe_requires_laman() {
        let path = Graph::new(3, [(1, 2), (2, 3)]).unwrap();
        let f = Framework::uniform(path, int(2)).unwrap();
        assert!(build_soe(&f, &Constants::default()).is_err());
    }

    #[test]
    fn render_is_readable() {
        let p = &Polynomial::var(2, 0) - &Polynomial::constant(2, int(3));
        assert_eq!(p.render(&["x".into(), "y".into()]), "x - 3");
    }
}
