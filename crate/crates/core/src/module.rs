//! Finitely generated modules as finite-dimensional representations.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::LocalAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{free_columns, kernel_from_rref, Matrix, Subspace};
use crate::homalg::hom_space;
use crate::resolution::{betti_numbers, minimal_free_cover};
use crate::scalar::Scalar;

#[derive(PartialEq, Eq, Hash)]
pub(crate) struct ModuleData<S> {
    pub dim: usize,
    /// One matrix per algebra basis element.
    pub actions: Vec<Matrix<S>>,
}

/// A module over a [`LocalAlgebra`], stored as the action of every algebra
/// basis element. Cloning is cheap.
#[derive(Clone)]
pub struct Module<S: Scalar> {
    algebra: Arc<LocalAlgebra<S>>,
    data: Arc<ModuleData<S>>,
}

impl<S: Scalar> fmt::Debug for Module<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module(dim {})", self.dim())
    }
}

impl<S: Scalar> PartialEq for Module<S> {
    /// Literal equality: same algebra and identical action matrices.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            && (Arc::ptr_eq(&self.data, &other.data) || self.data == other.data)
    }
}

impl<S: Scalar> Eq for Module<S> {}

impl<S: Scalar> Module<S> {
    pub(crate) fn from_data(algebra: Arc<LocalAlgebra<S>>, data: Arc<ModuleData<S>>) -> Self {
        Module { algebra, data }
    }

    pub(crate) fn data(&self) -> &Arc<ModuleData<S>> {
        &self.data
    }

    /// Build from the action of each variable, checking that it defines a
    /// module over the algebra.
    pub fn from_variable_actions(
        algebra: &Arc<LocalAlgebra<S>>,
        dim: usize,
        variable_actions: Vec<Matrix<S>>,
    ) -> Result<Self> {
        if variable_actions.len() != algebra.num_vars() {
            return Err(Error::Module(format!(
                "{} variable actions for {} variables",
                variable_actions.len(),
                algebra.num_vars()
            )));
        }
        for (v, m) in variable_actions.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Module(format!("action of variable {v} is not {dim}x{dim}")));
            }
        }
        let mut actions = Vec::with_capacity(algebra.dim());
        for mono in algebra.basis() {
            let mut acc = Matrix::identity(dim);
            for (v, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&variable_actions[v])?;
                }
            }
            actions.push(acc);
        }
        let module = Module::from_actions_unchecked(algebra.clone(), dim, actions);
        for (v, m) in variable_actions.iter().enumerate() {
            if module.element_action(algebra.variable(v)) != *m {
                return Err(Error::Module(format!(
                    "action of variable {} does not match its normal form",
                    algebra.var_names()[v]
                )));
            }
        }
        module.check_homomorphism()?;
        Ok(module)
    }

    pub(crate) fn from_actions_unchecked(
        algebra: Arc<LocalAlgebra<S>>,
        dim: usize,
        actions: Vec<Matrix<S>>,
    ) -> Self {
        Module { algebra, data: Arc::new(ModuleData { dim, actions }) }
    }

    /// Verify `action(r) action(s) = action(rs)` on basis pairs and `action(1) = I`.
    pub fn check_homomorphism(&self) -> Result<()> {
        let a = &self.algebra;
        if self.data.actions[0] != Matrix::identity(self.dim()) {
            return Err(Error::Module("unit does not act as the identity".into()));
        }
        for i in 1..a.dim() {
            for j in i..a.dim() {
                let lhs = self.action(i).mul(self.action(j))?;
                let rhs = self.element_action(&a.mult_matrix(i).column(j));
                if lhs != rhs {
                    return Err(Error::Module(format!(
                        "action is not multiplicative on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<LocalAlgebra<S>> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.data.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Action of algebra basis element `i`.
    pub fn action(&self, i: usize) -> &Matrix<S> {
        &self.data.actions[i]
    }

    pub fn actions(&self) -> &[Matrix<S>] {
        &self.data.actions
    }

    pub fn element_action(&self, r: &[S]) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (i, c) in r.iter().enumerate() {
            m.add_scaled(c, self.action(i));
        }
        m
    }

    pub fn variable_action(&self, v: usize) -> Matrix<S> {
        self.element_action(self.algebra.variable(v))
    }

    pub fn variable_actions(&self) -> Vec<Matrix<S>> {
        (0..self.algebra.num_vars()).map(|v| self.variable_action(v)).collect()
    }

    pub fn zero(algebra: &Arc<LocalAlgebra<S>>) -> Self {
        let actions = (0..algebra.dim()).map(|_| Matrix::zeros(0, 0)).collect();
        Module::from_actions_unchecked(algebra.clone(), 0, actions)
    }

    /// `R^rank`, basis ordered copy by copy.
    pub fn free(algebra: &Arc<LocalAlgebra<S>>, rank: usize) -> Self {
        let actions = (0..algebra.dim())
            .map(|i| {
                let blocks: Vec<&Matrix<S>> = (0..rank).map(|_| algebra.mult_matrix(i)).collect();
                Matrix::block_diag(&blocks)
            })
            .collect();
        Module::from_actions_unchecked(algebra.clone(), rank * algebra.dim(), actions)
    }

    /// The residue field `k`.
    pub fn simple(algebra: &Arc<LocalAlgebra<S>>) -> Self {
        let actions = (0..algebra.dim())
            .map(|i| if i == 0 { Matrix::identity(1) } else { Matrix::zeros(1, 1) })
            .collect();
        Module::from_actions_unchecked(algebra.clone(), 1, actions)
    }

    pub fn direct_sum(algebra: &Arc<LocalAlgebra<S>>, parts: &[Module<S>]) -> Self {
        if parts.len() == 1 {
            return parts[0].clone();
        }
        let dim = parts.iter().map(Module::dim).sum();
        let actions = (0..algebra.dim())
            .map(|i| {
                let blocks: Vec<&Matrix<S>> = parts.iter().map(|p| p.action(i)).collect();
                Matrix::block_diag(&blocks)
            })
            .collect();
        Module::from_actions_unchecked(algebra.clone(), dim, actions)
    }

    /// `self^{⊕ copies}`.
    pub fn power(&self, copies: usize) -> Self {
        let parts = vec![self.clone(); copies];
        if copies == 0 {
            return Module::zero(&self.algebra);
        }
        Module::direct_sum(&self.algebra, &parts)
    }

    /// `R/(f)`.
    pub fn cyclic_quotient(algebra: &Arc<LocalAlgebra<S>>, f: &[S]) -> Self {
        let free = Module::free(algebra, 1);
        let gens: Vec<Vec<S>> = (0..algebra.dim())
            .map(|i| algebra.mul(&algebra.unit_vector(i), f))
            .collect();
        free.quotient(&gens).0
    }

    /// Cokernel of `R^r -> R^g` given by a `g x r` matrix of algebra elements.
    pub fn from_presentation(
        algebra: &Arc<LocalAlgebra<S>>,
        generators: usize,
        relations: &[Vec<Vec<S>>],
    ) -> Result<Self> {
        let d = algebra.dim();
        let free = Module::free(algebra, generators);
        let mut span = Vec::new();
        for rel in relations {
            if rel.len() != generators || rel.iter().any(|e| e.len() != d) {
                return Err(Error::Shape("presentation column has the wrong shape".into()));
            }
            let mut col = Vec::with_capacity(generators * d);
            for e in rel {
                col.extend(e.iter().cloned());
            }
            for i in 0..d {
                span.push(free.action(i).mul_vec(&col)?);
            }
        }
        Ok(free.quotient(&span).0)
    }

    /// Quotient by the R-submodule spanned by `vectors` (assumed stable).
    ///
    /// Returns the quotient and the projection matrix.
    pub fn quotient(&self, vectors: &[Vec<S>]) -> (Module<S>, Matrix<S>) {
        let sub = Subspace::span(self.dim(), vectors);
        self.quotient_by(&sub)
    }

    pub fn quotient_by(&self, sub: &Subspace<S>) -> (Module<S>, Matrix<S>) {
        let keep = sub.complement_positions();
        let q = keep.len();
        let basis = sub.basis_vectors();
        let mut proj = Matrix::zeros(q, self.dim());
        for j in 0..self.dim() {
            let mut v = vec![S::zero(); self.dim()];
            v[j] = S::one();
            for (row, &p) in basis.iter().zip(sub.pivots()) {
                let f = v[p].clone();
                if f.is_zero() {
                    continue;
                }
                for (t, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        v[t] = v[t].clone() - f.clone() * x.clone();
                    }
                }
            }
            for (i, &k) in keep.iter().enumerate() {
                proj.set(i, j, v[k].clone());
            }
        }
        let lift = unit_columns::<S>(self.dim(), &keep);
        let actions = self
            .actions()
            .iter()
            .map(|a| proj.mul(&a.mul(&lift).expect("shape")).expect("shape"))
            .collect();
        (Module::from_actions_unchecked(self.algebra.clone(), q, actions), proj)
    }

    /// Submodule with the given basis (columns of `basis`, linearly independent
    /// and R-stable). Coordinates are solved against the basis.
    pub fn submodule(&self, basis: &Matrix<S>) -> Result<Module<S>> {
        let n = basis.cols();
        let mut actions = Vec::with_capacity(self.actions().len());
        for a in self.actions() {
            let image = a.mul(basis)?;
            let coords = basis
                .solve_matrix(&image)?
                .ok_or_else(|| Error::Module("subspace is not a submodule".into()))?;
            actions.push(coords);
        }
        Ok(Module::from_actions_unchecked(self.algebra.clone(), n, actions))
    }

    /// Submodule spanned by kernel-basis columns whose coordinates can be
    /// read off at `coord_rows`.
    pub(crate) fn submodule_with_coordinates(
        &self,
        basis: &Matrix<S>,
        coord_rows: &[usize],
    ) -> Module<S> {
        let actions = self
            .actions()
            .iter()
            .map(|a| a.mul(basis).expect("shape").select_rows(coord_rows))
            .collect();
        Module::from_actions_unchecked(self.algebra.clone(), basis.cols(), actions)
    }

    /// Restriction to a set of basis indices closed under the action.
    pub(crate) fn restrict(&self, indices: &[usize]) -> Module<S> {
        let actions = self
            .actions()
            .iter()
            .map(|a| a.select_rows(indices).select_columns(indices))
            .collect();
        Module::from_actions_unchecked(self.algebra.clone(), indices.len(), actions)
    }

    /// Partition of the basis into blocks that the action never mixes,
    /// ordered by smallest index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for i in self.algebra.max_ideal_indices() {
            let a = self.action(i);
            for r in 0..n {
                for c in 0..n {
                    if !a.get(r, c).is_zero() {
                        let (x, y) = (find(&mut parent, r), find(&mut parent, c));
                        if x != y {
                            parent[x.max(y)] = x.min(y);
                        }
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }
        groups
    }

    /// `mM`, the span of the images of the variables.
    pub fn radical(&self) -> Subspace<S> {
        let mut cols = Vec::new();
        for v in 0..self.algebra.num_vars() {
            let a = self.variable_action(v);
            for c in 0..self.dim() {
                let col = a.column(c);
                if col.iter().any(|x| !x.is_zero()) {
                    cols.push(col);
                }
            }
        }
        Subspace::span(self.dim(), &cols)
    }

    pub fn minimal_generator_count(&self) -> usize {
        self.dim() - self.radical().dim()
    }

    /// Elements killed by the maximal ideal.
    pub fn socle(&self) -> Subspace<S> {
        let mut stacked = Matrix::zeros(0, self.dim());
        for v in 0..self.algebra.num_vars() {
            stacked = stacked.vstack(&self.variable_action(v)).expect("square");
        }
        Subspace::column_space(&stacked.kernel_basis())
    }

    pub fn is_killed_by_max_ideal(&self) -> bool {
        self.radical().dim() == 0
    }
}

/// `n x k` matrix whose columns are the unit vectors at `positions`.
pub(crate) fn unit_columns<S: Scalar>(n: usize, positions: &[usize]) -> Matrix<S> {
    let mut m = Matrix::zeros(n, positions.len());
    for (j, &p) in positions.iter().enumerate() {
        m.set(p, j, S::one());
    }
    m
}

/// An R-linear map, `matrix` is `target.dim x source.dim`.
#[derive(Clone, Debug)]
pub struct ModuleMap<S: Scalar> {
    pub source: Module<S>,
    pub target: Module<S>,
    pub matrix: Matrix<S>,
}

impl<S: Scalar> ModuleMap<S> {
    /// Build and check R-linearity.
    pub fn new(source: Module<S>, target: Module<S>, matrix: Matrix<S>) -> Result<Self> {
        let map = ModuleMap::new_unchecked(source, target, matrix)?;
        if !map.is_homomorphism() {
            return Err(Error::Map("matrix does not commute with the action".into()));
        }
        Ok(map)
    }

    pub(crate) fn new_unchecked(
        source: Module<S>,
        target: Module<S>,
        matrix: Matrix<S>,
    ) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &Module<S>) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.dim()) }
    }

    pub fn zero(source: &Module<S>, target: &Module<S>) -> Self {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.dim(), source.dim()),
        }
    }

    pub fn is_homomorphism(&self) -> bool {
        let alg = self.source.algebra();
        (0..alg.num_vars()).all(|v| {
            let lhs = self.target.variable_action(v).mul(&self.matrix);
            let rhs = self.matrix.mul(&self.source.variable_action(v));
            matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
        })
    }

    pub fn compose(&self, first: &ModuleMap<S>) -> Result<ModuleMap<S>> {
        if first.target.dim() != self.source.dim() {
            return Err(Error::Shape("composition of incompatible maps".into()));
        }
        Ok(ModuleMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dim() == self.target.dim() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<ModuleMap<S>> {
        let inv = self.matrix.inverse()?;
        Some(ModuleMap { source: self.target.clone(), target: self.source.clone(), matrix: inv })
    }

    /// Direct sum of maps `⊕ f_i : ⊕ A_i -> ⊕ B_i`.
    pub fn direct_sum(maps: &[ModuleMap<S>]) -> ModuleMap<S> {
        let alg = maps[0].source.algebra().clone();
        let sources: Vec<_> = maps.iter().map(|m| m.source.clone()).collect();
        let targets: Vec<_> = maps.iter().map(|m| m.target.clone()).collect();
        let blocks: Vec<&Matrix<S>> = maps.iter().map(|m| &m.matrix).collect();
        ModuleMap {
            source: Module::direct_sum(&alg, &sources),
            target: Module::direct_sum(&alg, &targets),
            matrix: Matrix::block_diag(&blocks),
        }
    }

    pub fn power(&self, copies: usize) -> ModuleMap<S> {
        if copies == 0 {
            let alg = self.source.algebra();
            return ModuleMap::zero(&Module::zero(alg), &Module::zero(alg));
        }
        ModuleMap::direct_sum(&vec![self.clone(); copies])
    }
}

/// `0 -> left -> middle -> right -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence<S: Scalar> {
    pub inject: ModuleMap<S>,
    pub surject: ModuleMap<S>,
}

impl<S: Scalar> ShortExactSequence<S> {
    pub fn new(inject: ModuleMap<S>, surject: ModuleMap<S>) -> Result<Self> {
        let ses = ShortExactSequence { inject, surject };
        ses.check()?;
        Ok(ses)
    }

    pub fn left(&self) -> &Module<S> {
        &self.inject.source
    }

    pub fn middle(&self) -> &Module<S> {
        &self.inject.target
    }

    pub fn right(&self) -> &Module<S> {
        &self.surject.target
    }

    /// All exactness invariants; the error names the first failure.
    pub fn check(&self) -> Result<()> {
        if self.inject.target != self.surject.source {
            return Err(Error::Map("middle modules of the two maps differ".into()));
        }
        if !self.inject.is_homomorphism() || !self.surject.is_homomorphism() {
            return Err(Error::Map("a map is not R-linear".into()));
        }
        if !self.inject.is_injective() {
            return Err(Error::Map("left map is not injective".into()));
        }
        if !self.surject.is_surjective() {
            return Err(Error::Map("right map is not surjective".into()));
        }
        if !self.surject.matrix.mul(&self.inject.matrix)?.is_zero() {
            return Err(Error::Map("composite is not zero".into()));
        }
        if self.middle().dim() != self.left().dim() + self.right().dim() {
            return Err(Error::Map("image of the left map is not the kernel".into()));
        }
        Ok(())
    }

    /// `0 -> A -> A ⊕ C -> C -> 0`.
    pub fn split(left: &Module<S>, right: &Module<S>) -> Self {
        let alg = left.algebra().clone();
        let mid = Module::direct_sum(&alg, &[left.clone(), right.clone()]);
        let (a, c) = (left.dim(), right.dim());
        let mut inj = Matrix::zeros(a + c, a);
        let mut sur = Matrix::zeros(c, a + c);
        for i in 0..a {
            inj.set(i, i, S::one());
        }
        for i in 0..c {
            sur.set(i, a + i, S::one());
        }
        ShortExactSequence {
            inject: ModuleMap { source: left.clone(), target: mid.clone(), matrix: inj },
            surject: ModuleMap { source: mid, target: right.clone(), matrix: sur },
        }
    }
}

/// Result of splitting off free summands.
#[derive(Clone, Debug)]
pub struct FreeSplitting<S: Scalar> {
    pub free_rank: usize,
    pub remainder: Module<S>,
    /// Isomorphism `M -> R^free_rank ⊕ remainder`.
    pub iso: ModuleMap<S>,
}

/// `M ≅ R^α ⊕ M'` with `M'` free of free summands.
///
/// A free summand exists iff some basis homomorphism `M -> R` hits a unit.
pub fn split_free_summands<S: Scalar>(m: &Module<S>) -> Result<FreeSplitting<S>> {
    let alg = m.algebra().clone();
    let r = Module::free(&alg, 1);
    let dr = alg.dim();
    let mut alpha = 0;
    let mut current = m.clone();
    // iso from m to R^alpha ⊕ current
    let mut total = Matrix::identity(m.dim());
    loop {
        let hom = hom_space(&current, &r)?;
        let hit = hom.basis().iter().find_map(|phi| {
            (0..current.dim()).find(|&s| !phi.get(0, s).is_zero()).map(|s| (phi.clone(), s))
        });
        let Some((phi, s)) = hit else { break };
        let u = phi.column(s);
        let u_inv = alg.inverse(&u).expect("unit");
        // generator mapping to 1
        let gen = current.element_action(&u_inv).mul_vec(&unit_vec::<S>(current.dim(), s))?;
        let mut section = Matrix::zeros(current.dim(), dr);
        for b in 0..dr {
            let col = current.action(b).mul_vec(&gen)?;
            for (i, x) in col.into_iter().enumerate() {
                section.set(i, b, x);
            }
        }
        let (rr, pivots) = phi.rref();
        let kernel = kernel_from_rref(&rr, &pivots);
        let free_cols = free_columns(current.dim(), &pivots);
        let next = current.submodule_with_coordinates(&kernel, &free_cols);
        // x -> (phi(x), coords(x - section(phi(x))))
        let residual = Matrix::identity(current.dim()).sub(&section.mul(&phi)?)?;
        let coords = residual.select_rows(&free_cols);
        let step = phi.vstack(&coords)?;
        let done = alpha * dr;
        let lifted = Matrix::block_diag(&[&Matrix::identity(done), &step]);
        total = lifted.mul(&total)?;
        alpha += 1;
        current = next;
    }
    let parts = [Module::free(&alg, alpha), current.clone()];
    let target = Module::direct_sum(&alg, &parts);
    let iso = ModuleMap::new(m.clone(), target, total)?;
    Ok(FreeSplitting { free_rank: alpha, remainder: current, iso })
}

fn unit_vec<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum IsoVerdict<S: Scalar> {
    Yes(ModuleMap<S>),
    No(String),
    Unknown,
}

impl<S: Scalar> IsoVerdict<S> {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IsoVerdict::No(_))
    }

    pub fn witness(self) -> Option<ModuleMap<S>> {
        match self {
            IsoVerdict::Yes(w) => Some(w),
            _ => None,
        }
    }
}

/// Search limits for [`is_isomorphic`].
#[derive(Clone, Copy, Debug)]
pub struct IsoBudget {
    /// Random candidates tried when exhaustive enumeration is too large.
    pub samples: usize,
    /// Exhaustive enumeration is used when `|k|^d` is at most this.
    pub exhaustive_limit: u64,
    pub seed: u64,
}

impl Default for IsoBudget {
    fn default() -> Self {
        IsoBudget { samples: 2000, exhaustive_limit: 1 << 20, seed: 0 }
    }
}

/// Decide `M ≅ N` with an explicit witness, a distinguishing invariant, or
/// `Unknown` after the sampling budget runs out.
pub fn is_isomorphic<S: Scalar>(m: &Module<S>, n: &Module<S>, budget: IsoBudget) -> Result<IsoVerdict<S>> {
    if !Arc::ptr_eq(m.algebra(), n.algebra()) {
        return Err(Error::Precondition("modules live over different algebras".into()));
    }
    if m == n {
        return Ok(IsoVerdict::Yes(ModuleMap::identity(m)));
    }
    if m.dim() != n.dim() {
        return Ok(IsoVerdict::No(format!("dimensions differ ({} vs {})", m.dim(), n.dim())));
    }
    let (rm, rn) = (m.radical(), n.radical());
    if rm.dim() != rn.dim() {
        return Ok(IsoVerdict::No(format!("radical dimensions differ ({} vs {})", rm.dim(), rn.dim())));
    }
    let (sm, sn) = (m.socle().dim(), n.socle().dim());
    if sm != sn {
        return Ok(IsoVerdict::No(format!("socle dimensions differ ({sm} vs {sn})")));
    }
    let (bm, bn) = (betti_numbers(m, 2)?, betti_numbers(n, 2)?);
    if bm != bn {
        return Ok(IsoVerdict::No(format!("Betti prefixes differ ({bm:?} vs {bn:?})")));
    }
    let hom_mn = hom_space(m, n)?;
    let hom_nm = hom_space(n, m)?;
    if hom_mn.dim() != hom_nm.dim() {
        return Ok(IsoVerdict::No(format!(
            "Hom dimensions differ ({} vs {})",
            hom_mn.dim(),
            hom_nm.dim()
        )));
    }
    if m.dim() == 0 {
        return Ok(IsoVerdict::Yes(ModuleMap::zero(m, n)));
    }
    // A homomorphism is an isomorphism iff it is invertible on tops M/mM -> N/mN.
    let gens_m = rm.complement_positions();
    let keep_n = rn.complement_positions();
    let top_of = |phi: &Matrix<S>| -> Matrix<S> {
        let mut t = Matrix::zeros(keep_n.len(), gens_m.len());
        for (j, &g) in gens_m.iter().enumerate() {
            let img = phi.column(g);
            let reduced = reduce_mod(&rn, img);
            for (i, &k) in keep_n.iter().enumerate() {
                t.set(i, j, reduced[k].clone());
            }
        }
        t
    };
    let tops: Vec<Matrix<S>> = hom_mn.basis().iter().map(top_of).collect();
    // keep a maximal independent family of top maps
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<S>> = Vec::new();
    for (t, top) in tops.iter().enumerate() {
        let mut trial = rows.clone();
        trial.push(top.data().to_vec());
        if Subspace::span(top.data().len(), &trial).dim() > rows.len() {
            rows = trial;
            chosen.push(t);
        }
    }
    let mu = gens_m.len();
    let combine = |coeffs: &[S]| -> Matrix<S> {
        let mut acc = Matrix::zeros(mu, mu);
        for (c, &t) in coeffs.iter().zip(&chosen) {
            acc.add_scaled(c, &tops[t]);
        }
        acc
    };
    let finish = |coeffs: &[S]| -> Result<IsoVerdict<S>> {
        let mut phi = Matrix::zeros(n.dim(), m.dim());
        for (c, &t) in coeffs.iter().zip(&chosen) {
            phi.add_scaled(c, &hom_mn.basis()[t]);
        }
        let map = ModuleMap::new(m.clone(), n.clone(), phi)?;
        debug_assert!(map.is_isomorphism());
        Ok(IsoVerdict::Yes(map))
    };
    let d = chosen.len();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let warmup = budget.samples.min(64);
    for _ in 0..warmup {
        let coeffs: Vec<S> = (0..d).map(|_| S::random(&mut rng)).collect();
        if combine(&coeffs).rank() == mu {
            return finish(&coeffs);
        }
    }
    let exhaustive = S::order()
        .and_then(|q| q.checked_pow(d as u32))
        .filter(|&total| total <= budget.exhaustive_limit);
    if let Some(total) = exhaustive {
        let q = S::order().expect("finite");
        for idx in 0..total {
            let mut rest = idx;
            let coeffs: Vec<S> = (0..d)
                .map(|_| {
                    let c = S::nth_element(rest % q);
                    rest /= q;
                    c
                })
                .collect();
            if combine(&coeffs).rank() == mu {
                return finish(&coeffs);
            }
        }
        return Ok(IsoVerdict::No("no homomorphism is invertible".into()));
    }
    for _ in warmup..budget.samples {
        let coeffs: Vec<S> = (0..d).map(|_| S::random(&mut rng)).collect();
        if combine(&coeffs).rank() == mu {
            return finish(&coeffs);
        }
    }
    Ok(IsoVerdict::Unknown)
}

/// Reduce `v` modulo a subspace, leaving support on non-pivot positions.
pub(crate) fn reduce_mod<S: Scalar>(sub: &Subspace<S>, mut v: Vec<S>) -> Vec<S> {
    for (row, &p) in sub.basis_vectors().iter().zip(sub.pivots()) {
        let f = v[p].clone();
        if f.is_zero() {
            continue;
        }
        for (t, x) in row.iter().enumerate() {
            if !x.is_zero() {
                v[t] = v[t].clone() - f.clone() * x.clone();
            }
        }
    }
    v
}

/// Whether `M` has the shape `R^α ⊕ k^β`, returning `(α, β)`.
pub fn free_plus_residue_shape<S: Scalar>(m: &Module<S>) -> Result<Option<(usize, usize)>> {
    let split = split_free_summands(m)?;
    Ok(split
        .remainder
        .is_killed_by_max_ideal()
        .then(|| (split.free_rank, split.remainder.dim())))
}

/// Minimal syzygy module of `m`, iterated `n` times.
pub fn syzygy<S: Scalar>(m: &Module<S>, n: usize) -> Result<Module<S>> {
    let mut cur = m.clone();
    for _ in 0..n {
        cur = minimal_free_cover(&cur)?.kernel;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;

    type F2 = Fp<2>;

    fn plane() -> Arc<LocalAlgebra<F2>> {
        LocalAlgebra::square_zero(2).unwrap()
    }

    #[test]
    fn basic_constructors() {
        let a = plane();
        assert_eq!(Module::free(&a, 1).dim(), 3);
        let k = Module::simple(&a);
        assert_eq!(k.dim(), 1);
        assert!(k.variable_actions().iter().all(Matrix::is_zero));
        let rx = Module::cyclic_quotient(&a, a.variable(0));
        assert_eq!(rx.dim(), 2);
        for m in [&k, &rx, &Module::free(&a, 2)] {
            m.check_homomorphism().unwrap();
        }
    }

    #[test]
    fn presentations() {
        let a = plane();
        assert_eq!(Module::from_presentation(&a, 2, &[]).unwrap(), Module::free(&a, 2));
        let unit = Module::from_presentation(&a, 1, &[vec![a.one()]]).unwrap();
        assert_eq!(unit.dim(), 0);
        let rx = Module::from_presentation(&a, 1, &[vec![a.variable(0).to_vec()]]).unwrap();
        // quotient-space oracle: R/(x) has basis 1, y
        assert_eq!(rx.dim(), 2);
        assert_eq!(rx, Module::cyclic_quotient(&a, a.variable(0)));
    }

    #[test]
    fn radicals_and_generators() {
        let a = plane();
        let r = Module::free(&a, 1);
        assert_eq!((r.radical().dim(), r.minimal_generator_count()), (2, 1));
        let k = Module::simple(&a);
        assert_eq!((k.radical().dim(), k.minimal_generator_count()), (0, 1));
        let rx = Module::cyclic_quotient(&a, a.variable(0));
        assert_eq!((rx.radical().dim(), rx.minimal_generator_count()), (1, 1));
    }

    #[test]
    fn rejects_noncommuting_actions() {
        let a = plane();
        let x = Matrix::from_rows(vec![vec![F2::new(0), F2::new(0)], vec![F2::new(1), F2::new(0)]]).unwrap();
        let y = Matrix::from_rows(vec![vec![F2::new(0), F2::new(1)], vec![F2::new(0), F2::new(0)]]).unwrap();
        assert!(Module::from_variable_actions(&a, 2, vec![x, y]).is_err());
    }

    #[test]
    fn splitting_free_summands() {
        let a = plane();
        let k = Module::simple(&a);
        let rk = Module::direct_sum(&a, &[Module::free(&a, 1), k.clone()]);
        let s = split_free_summands(&rk).unwrap();
        assert_eq!(s.free_rank, 1);
        assert!(is_isomorphic(&s.remainder, &k, IsoBudget::default()).unwrap().is_yes());
        assert!(s.iso.is_isomorphism());
        let k5 = k.power(5);
        assert_eq!(split_free_summands(&k5).unwrap().free_rank, 0);
        let omega_k = syzygy(&k, 1).unwrap();
        let s = split_free_summands(&omega_k).unwrap();
        assert_eq!((s.free_rank, s.remainder.dim()), (0, 2));
        assert!(s.remainder.is_killed_by_max_ideal());
    }

    #[test]
    fn isomorphism_examples() {
        let a = plane();
        let k = Module::simple(&a);
        let r = Module::free(&a, 1);
        assert!(is_isomorphic(&k, &k, IsoBudget::default()).unwrap().is_yes());
        match is_isomorphic(&k, &r, IsoBudget::default()).unwrap() {
            IsoVerdict::No(reason) => assert!(reason.contains("dimension")),
            other => panic!("unexpected {other:?}"),
        }
        let omega2 = syzygy(&k, 2).unwrap();
        let w = is_isomorphic(&omega2, &k.power(4), IsoBudget::default()).unwrap().witness().unwrap();
        assert!(w.is_isomorphism() && w.is_homomorphism());
    }

    #[test]
    fn components_split_direct_sums() {
        let a = plane();
        let m = Module::direct_sum(&a, &[Module::free(&a, 1), Module::simple(&a)]);
        assert_eq!(m.components(), vec![vec![0, 1, 2], vec![3]]);
    }
}
