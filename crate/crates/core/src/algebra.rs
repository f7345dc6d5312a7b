//! Finite-dimensional commutative local algebras `k[x_1..x_n]/I` with
//! `I ⊇ m^N` for a declared nilpotency degree `N`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::resolution::CoverCache;
use crate::scalar::Scalar;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

fn degree(m: &Monomial) -> u32 {
    m.iter().sum()
}

/// A polynomial with exact coefficients, as a list of terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<S> {
    pub terms: Vec<(S, Monomial)>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn variable(num_vars: usize, v: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[v] = 1;
        Polynomial { terms: vec![(S::one(), e)] }
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.iter().any(|(c, m)| !c.is_zero() && degree(m) == 0)
    }

    /// Parse expressions like `x^2 - 2*x*y + 1/2*y`.
    pub fn parse(src: &str, vars: &[String]) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("polynomial `{src}`: {msg}"));
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                chunks.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        chunks.push((neg, cur));
        for (neg, chunk) in chunks {
            if chunk.is_empty() {
                return Err(bad("dangling sign"));
            }
            let mut coeff = S::one();
            let mut exps = vec![0u32; vars.len()];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if factor.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    coeff = coeff * S::parse_str(factor)?;
                    continue;
                }
                let (name, pow) = match factor.split_once('^') {
                    Some((n, p)) => (n, p.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| bad(&format!("unknown variable `{name}`")))?;
                exps[idx] += pow;
            }
            if neg {
                coeff = -coeff;
            }
            terms.push((coeff, exps));
        }
        Ok(Polynomial { terms })
    }
}

/// Input description of an algebra.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation<S> {
    pub var_names: Vec<String>,
    pub nilpotency: u32,
    pub relations: Vec<Polynomial<S>>,
}

impl<S: Scalar> AlgebraPresentation<S> {
    /// `k[x_1..x_n]/m^N`, optionally with extra relations.
    pub fn new(var_names: &[&str], nilpotency: u32, relations: &[&str]) -> Result<Self> {
        let var_names: Vec<String> = var_names.iter().map(|s| s.to_string()).collect();
        let relations = relations
            .iter()
            .map(|r| Polynomial::parse(r, &var_names))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraPresentation { var_names, nilpotency, relations })
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }
}

/// A commutative local algebra with a monomial basis and multiplication table.
pub struct LocalAlgebra<S: Scalar> {
    var_names: Vec<String>,
    nilpotency: u32,
    basis: Vec<Monomial>,
    /// `mult[i]` is left multiplication by basis element `i`.
    mult: Vec<Matrix<S>>,
    variables: Vec<Vec<S>>,
    embedding_dim: usize,
    pub(crate) cache: CoverCache<S>,
}

impl<S: Scalar> fmt::Debug for LocalAlgebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalAlgebra")
            .field("basis", &self.basis_labels())
            .field("embedding_dim", &self.embedding_dim)
            .finish()
    }
}

/// Monomials of degree `< n` in `vars` variables, degree-then-lex ascending.
fn monomials_below(vars: usize, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..n {
        let mut level = Vec::new();
        compositions(vars, d, &mut vec![0; vars], 0, &mut level);
        // descending exponent vectors: x^2 before x*y before y^2
        level.sort_by(|a, b| b.cmp(a));
        out.extend(level);
    }
    out
}

fn compositions(vars: usize, d: u32, cur: &mut Monomial, idx: usize, out: &mut Vec<Monomial>) {
    if idx + 1 == vars {
        cur[idx] = d;
        out.push(cur.clone());
        cur[idx] = 0;
        return;
    }
    for k in 0..=d {
        cur[idx] = k;
        compositions(vars, d - k, cur, idx + 1, out);
    }
    cur[idx] = 0;
}

fn add_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<S: Scalar> LocalAlgebra<S> {
    pub fn build(p: &AlgebraPresentation<S>) -> Result<Arc<Self>> {
        let n = p.num_vars();
        if n == 0 {
            return Err(Error::Algebra("at least one variable is required".into()));
        }
        if p.nilpotency == 0 {
            return Err(Error::Algebra("nilpotency degree must be at least 1".into()));
        }
        for r in &p.relations {
            if r.terms.iter().any(|(_, m)| m.len() != n) {
                return Err(Error::Algebra("relation has the wrong number of variables".into()));
            }
            if r.has_constant_term() {
                return Err(Error::Algebra("relation has a nonzero constant term".into()));
            }
        }
        let monos = monomials_below(n, p.nilpotency);
        let index_of = |m: &Monomial| monos.iter().position(|x| x == m);
        // columns in descending order so pivots land on the largest monomials
        let dim = monos.len();
        let col = |i: usize| dim - 1 - i;
        let mut rows: Vec<Vec<S>> = Vec::new();
        for rel in &p.relations {
            for u in &monos {
                let mut v = vec![S::zero(); dim];
                for (c, m) in &rel.terms {
                    let prod = add_monomials(u, m);
                    if let Some(i) = index_of(&prod) {
                        v[col(i)] = v[col(i)].clone() + c.clone();
                    }
                }
                if v.iter().any(|x| !x.is_zero()) {
                    rows.push(v);
                }
            }
        }
        let ideal = Subspace::span(dim, &rows);
        if ideal.pivots().contains(&col(0)) {
            return Err(Error::Algebra("relations generate the unit ideal".into()));
        }
        let standard: Vec<usize> =
            (0..dim).filter(|&i| !ideal.pivots().contains(&col(i))).collect();
        let basis: Vec<Monomial> = standard.iter().map(|&i| monos[i].clone()).collect();
        let d = basis.len();
        if d == 0 {
            return Err(Error::Algebra("the algebra is zero".into()));
        }
        let ideal_rows = ideal.basis_vectors();
        let normal_form = |m: &Monomial| -> Vec<S> {
            let mut v = vec![S::zero(); dim];
            match index_of(m) {
                Some(i) => v[col(i)] = S::one(),
                None => return vec![S::zero(); d],
            }
            for (row, &piv) in ideal_rows.iter().zip(ideal.pivots()) {
                let f = v[piv].clone();
                if f.is_zero() {
                    continue;
                }
                for (j, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        v[j] = v[j].clone() - f.clone() * x.clone();
                    }
                }
            }
            standard.iter().map(|&i| v[col(i)].clone()).collect()
        };
        let mut mult = Vec::with_capacity(d);
        for a in &basis {
            let cols: Vec<Vec<S>> = basis.iter().map(|b| normal_form(&add_monomials(a, b))).collect();
            mult.push(Matrix::from_columns(d, &cols));
        }
        let variables: Vec<Vec<S>> = (0..n)
            .map(|v| {
                let mut e = vec![0; n];
                e[v] = 1;
                normal_form(&e)
            })
            .collect();
        let mut alg = LocalAlgebra {
            var_names: p.var_names.clone(),
            nilpotency: p.nilpotency,
            basis,
            mult,
            variables,
            embedding_dim: 0,
            cache: CoverCache::default(),
        };
        let m2: Vec<Vec<S>> = (1..d)
            .flat_map(|i| (1..d).map(move |j| (i, j)))
            .map(|(i, j)| alg.mult[i].column(j))
            .collect();
        alg.embedding_dim = (d - 1) - Subspace::span(d, &m2).dim();
        Ok(Arc::new(alg))
    }

    /// `k[vars]/(vars)^2`: the `m^2 = 0` algebra of embedding dimension `e`.
    pub fn square_zero(e: usize) -> Result<Arc<Self>> {
        let names: Vec<String> = (0..e).map(|i| var_name(i, e)).collect();
        Self::build(&AlgebraPresentation { var_names: names, nilpotency: 2, relations: vec![] })
    }

    /// `k[x]/(x^n)`.
    pub fn truncated_polynomial(n: u32) -> Result<Arc<Self>> {
        Self::build(&AlgebraPresentation {
            var_names: vec!["x".into()],
            nilpotency: n,
            relations: vec![],
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn nilpotency(&self) -> u32 {
        self.nilpotency
    }

    pub fn embedding_dim(&self) -> usize {
        self.embedding_dim
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.basis.iter().map(|m| monomial_label(m, &self.var_names)).collect()
    }

    /// Left multiplication by basis element `i`.
    pub fn mult_matrix(&self, i: usize) -> &Matrix<S> {
        &self.mult[i]
    }

    /// Coordinates of variable `v`.
    pub fn variable(&self, v: usize) -> &[S] {
        &self.variables[v]
    }

    /// Indices of the basis of the maximal ideal.
    pub fn max_ideal_indices(&self) -> std::ops::Range<usize> {
        1..self.dim()
    }

    pub fn one(&self) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim()];
        v[0] = S::one();
        v
    }

    pub fn zero(&self) -> Vec<S> {
        vec![S::zero(); self.dim()]
    }

    pub fn unit_vector(&self, i: usize) -> Vec<S> {
        let mut v = self.zero();
        v[i] = S::one();
        v
    }

    /// Left multiplication matrix of an arbitrary element.
    pub fn element_matrix(&self, a: &[S]) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (i, c) in a.iter().enumerate() {
            m.add_scaled(c, &self.mult[i]);
        }
        m
    }

    pub fn mul(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = x.clone() * y.clone();
                for (k, c) in self.mult[i].column(j).into_iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + prod.clone() * c;
                    }
                }
            }
        }
        out
    }

    pub fn is_unit(&self, a: &[S]) -> bool {
        !a[0].is_zero()
    }

    pub fn inverse(&self, a: &[S]) -> Option<Vec<S>> {
        self.element_matrix(a).solve(&self.one()).ok().flatten()
    }

    /// Evaluate a polynomial in the algebra.
    pub fn eval(&self, p: &Polynomial<S>) -> Vec<S> {
        let mut out = self.zero();
        for (c, m) in &p.terms {
            let mut term = self.one();
            for (v, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term = self.mul(&term, &self.variables[v]);
                }
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o = o.clone() + c.clone() * t;
            }
        }
        out
    }

    /// Basis of the annihilator of the maximal ideal.
    pub fn socle(&self) -> Subspace<S> {
        let d = self.dim();
        let mut stacked = Matrix::zeros(0, d);
        for v in 0..self.num_vars() {
            stacked = stacked.vstack(&self.element_matrix(&self.variables[v])).expect("square");
        }
        Subspace::column_space(&stacked.kernel_basis())
    }

    pub fn is_gorenstein(&self) -> bool {
        self.socle().dim() == 1
    }

    /// Whether every product of `N` maximal-ideal basis elements vanishes.
    pub fn max_ideal_power_vanishes(&self, n: u32) -> bool {
        let d = self.dim();
        let mut current: Vec<Vec<S>> = (1..d).map(|i| self.unit_vector(i)).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for a in &current {
                for i in 1..d {
                    next.push(self.mul(a, &self.unit_vector(i)));
                }
            }
            current = Subspace::span(d, &next).basis_vectors();
        }
        current.iter().all(|v| v.iter().all(Zero::is_zero))
    }

    /// Checks commutativity and associativity on basis pairs and triples.
    pub fn check_axioms(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if self.mult[i].column(j) != self.mult[j].column(i) {
                    return false;
                }
                for k in 0..d {
                    let ij = self.mul(&self.unit_vector(i), &self.unit_vector(j));
                    let jk = self.mul(&self.unit_vector(j), &self.unit_vector(k));
                    if self.mul(&ij, &self.unit_vector(k)) != self.mul(&self.unit_vector(i), &jk) {
                        return false;
                    }
                }
            }
        }
        self.mult[0] == Matrix::identity(d)
    }

    pub fn format_element(&self, a: &[S]) -> String {
        let labels = self.basis_labels();
        let parts: Vec<String> = a
            .iter()
            .zip(&labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| if c.is_one() { l.clone() } else { format!("{c}*{l}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn var_name(i: usize, total: usize) -> String {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    if total <= NAMES.len() {
        NAMES[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn monomial_label(m: &Monomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;

    type F2 = Fp<2>;
    type F3 = Fp<3>;

    #[test]
    fn square_zero_plane() {
        let a = LocalAlgebra::<F2>::square_zero(2).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.basis_labels(), vec!["1", "x", "y"]);
        assert_eq!(a.embedding_dim(), 2);
        assert_eq!(a.socle().dim(), 2);
        assert!(!a.is_gorenstein());
        assert!(a.check_axioms());
        assert!(a.max_ideal_power_vanishes(2));
    }

    #[test]
    fn truncated_polynomials() {
        let a = LocalAlgebra::<F2>::truncated_polynomial(3).unwrap();
        assert_eq!((a.dim(), a.embedding_dim()), (3, 1));
        let soc = a.socle();
        assert_eq!(soc.basis_vectors(), vec![a.unit_vector(2)]);
        assert!(a.is_gorenstein());
        let b = LocalAlgebra::<F2>::truncated_polynomial(2).unwrap();
        assert_eq!(b.socle().basis_vectors(), vec![b.unit_vector(1)]);
        assert!(b.is_gorenstein());
    }

    #[test]
    fn relations_reduce_the_basis() {
        // monomials of degree < 3 in x,y: 1,x,y,x^2,xy,y^2; x^2 and xy die.
        let p = AlgebraPresentation::<F3>::new(&["x", "y"], 3, &["x^2", "x*y"]).unwrap();
        let a = LocalAlgebra::build(&p).unwrap();
        assert_eq!(a.basis_labels(), vec!["1", "x", "y", "y^2"]);
        assert_eq!(a.embedding_dim(), 2);
        assert!(a.check_axioms());
        // socle is spanned by x and y^2
        assert_eq!(a.socle().dim(), 2);
    }

    #[test]
    fn nonmonomial_relation() {
        let p = AlgebraPresentation::<F3>::new(&["x", "y"], 3, &["x^2 - y^2", "x*y"]).unwrap();
        let a = LocalAlgebra::build(&p).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.is_gorenstein());
        assert!(a.check_axioms());
        let x2 = a.eval(&Polynomial::parse("x^2", a.var_names()).unwrap());
        let y2 = a.eval(&Polynomial::parse("y^2", a.var_names()).unwrap());
        assert_eq!(x2, y2);
    }

    #[test]
    fn rejects_bad_presentations() {
        let p = AlgebraPresentation::<F2>::new(&["x"], 2, &["1 + x"]).unwrap();
        assert!(LocalAlgebra::build(&p).is_err());
        let p = AlgebraPresentation::<F2>::new(&["x"], 0, &[]).unwrap();
        assert!(LocalAlgebra::build(&p).is_err());
        assert!(Polynomial::<F2>::parse("z", &["x".to_string()]).is_err());
    }

    #[test]
    fn units_are_invertible() {
        let a = LocalAlgebra::<F3>::truncated_polynomial(3).unwrap();
        let u = vec![F3::new(2), F3::new(1), F3::new(1)];
        assert!(a.is_unit(&u));
        let inv = a.inverse(&u).unwrap();
        assert_eq!(a.mul(&u, &inv), a.one());
        assert!(a.inverse(&a.unit_vector(1)).is_none());
    }
}
