//! Minimal free covers, syzygies and minimal free resolutions.
//!
//! Covers are computed one indecomposable-looking block at a time (a block is
//! a set of basis vectors the action never mixes with the rest) and cached on
//! the algebra. As a result `Ω(X ⊕ Y)` is literally `ΩX ⊕ ΩY`, and repeated
//! blocks cost nothing after the first time.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::algebra::LocalAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{free_columns, kernel_from_rref, Matrix};
use crate::module::{is_isomorphic, IsoBudget, Module, ModuleData, ModuleMap};
use crate::scalar::Scalar;

pub(crate) struct BlockCover<S> {
    pub mu: usize,
    /// `dim B x mu·dim R`.
    pub cover: Matrix<S>,
    /// Kernel basis as columns of a `mu·dim R x dim Ω` matrix.
    pub kernel: Matrix<S>,
    /// Rows of the free module where kernel coordinates can be read.
    pub coord_rows: Vec<usize>,
    pub omega: Arc<ModuleData<S>>,
    /// A k-linear section of the cover, `mu·dim R x dim B`.
    pub section: Matrix<S>,
}

/// Per-algebra memo of block covers.
pub struct CoverCache<S> {
    map: Mutex<HashMap<Arc<ModuleData<S>>, Arc<BlockCover<S>>>>,
}

impl<S> Default for CoverCache<S> {
    fn default() -> Self {
        CoverCache { map: Mutex::new(HashMap::new()) }
    }
}

impl<S: Scalar> CoverCache<S> {
    pub(crate) fn get_or_compute(&self, block: &Module<S>) -> Result<Arc<BlockCover<S>>> {
        if let Some(hit) = self.map.lock().expect("cache lock").get(block.data()) {
            return Ok(hit.clone());
        }
        let fresh = Arc::new(compute_block_cover(block)?);
        self.map
            .lock()
            .expect("cache lock")
            .insert(block.data().clone(), fresh.clone());
        Ok(fresh)
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn compute_block_cover<S: Scalar>(b: &Module<S>) -> Result<BlockCover<S>> {
    let alg = b.algebra();
    let dr = alg.dim();
    let gens = b.radical().complement_positions();
    let mu = gens.len();
    let mut cover = Matrix::zeros(b.dim(), mu * dr);
    for (j, &g) in gens.iter().enumerate() {
        for s in 0..dr {
            let a = b.action(s);
            for r in 0..b.dim() {
                let v = a.get(r, g);
                if !v.is_zero() {
                    cover.set(r, j * dr + s, v.clone());
                }
            }
        }
    }
    let (rr, pivots) = cover.rref();
    let kernel = kernel_from_rref(&rr, &pivots);
    let coord_rows = free_columns(mu * dr, &pivots);
    let free = Module::free(alg, mu);
    let omega = free.submodule_with_coordinates(&kernel, &coord_rows);
    let section = cover
        .solve_matrix(&Matrix::identity(b.dim()))?
        .ok_or_else(|| Error::Construction("cover is not surjective".into()))?;
    Ok(BlockCover { mu, cover, kernel, coord_rows, omega: omega.data().clone(), section })
}

/// A minimal free cover `0 -> ΩM -> R^μ -> M -> 0`.
#[derive(Clone, Debug)]
pub struct MinimalCover<S: Scalar> {
    pub rank: usize,
    /// `R^μ -> M`.
    pub cover: ModuleMap<S>,
    /// `ΩM -> R^μ`.
    pub inclusion: ModuleMap<S>,
    pub kernel: Module<S>,
    /// Rows of `R^μ` holding coordinates of elements of `ΩM`.
    pub coord_rows: Vec<usize>,
    /// k-linear section `M -> R^μ` of the cover.
    pub section: Matrix<S>,
}

impl<S: Scalar> MinimalCover<S> {
    pub fn free(&self) -> &Module<S> {
        &self.cover.source
    }

    /// Coordinates in `ΩM` of a vector of `R^μ` lying in the kernel.
    pub fn kernel_coordinates(&self, v: &[S]) -> Vec<S> {
        self.coord_rows.iter().map(|&r| v[r].clone()).collect()
    }

    /// Images of the free generators in `M`.
    pub fn generators(&self) -> Vec<Vec<S>> {
        let dr = self.cover.source.algebra().dim();
        (0..self.rank).map(|j| self.cover.matrix.column(j * dr)).collect()
    }
}

/// Minimal free cover of `m`, assembled block by block.
pub fn minimal_free_cover<S: Scalar>(m: &Module<S>) -> Result<MinimalCover<S>> {
    let alg = m.algebra().clone();
    let dr = alg.dim();
    let blocks = m.components();
    let mut parts = Vec::with_capacity(blocks.len());
    for idx in &blocks {
        let block = m.restrict(idx);
        parts.push(alg.cache.get_or_compute(&block)?);
    }
    let mu: usize = parts.iter().map(|p| p.mu).sum();
    let kdim: usize = parts.iter().map(|p| p.kernel.cols()).sum();
    let mut cover = Matrix::zeros(m.dim(), mu * dr);
    let mut section = Matrix::zeros(mu * dr, m.dim());
    let mut inclusion = Matrix::zeros(mu * dr, kdim);
    let mut coord_rows = Vec::with_capacity(kdim);
    let mut omegas = Vec::with_capacity(parts.len());
    let (mut f0, mut k0) = (0, 0);
    for (idx, p) in blocks.iter().zip(&parts) {
        for (local, &global) in idx.iter().enumerate() {
            for c in 0..p.mu * dr {
                let v = p.cover.get(local, c);
                if !v.is_zero() {
                    cover.set(global, f0 + c, v.clone());
                }
                let w = p.section.get(c, local);
                if !w.is_zero() {
                    section.set(f0 + c, global, w.clone());
                }
            }
        }
        inclusion.set_block(f0, k0, &p.kernel);
        coord_rows.extend(p.coord_rows.iter().map(|r| f0 + r));
        omegas.push(Module::from_data(alg.clone(), p.omega.clone()));
        f0 += p.mu * dr;
        k0 += p.kernel.cols();
    }
    let free = Module::free(&alg, mu);
    let kernel = if omegas.is_empty() { Module::zero(&alg) } else { Module::direct_sum(&alg, &omegas) };
    Ok(MinimalCover {
        rank: mu,
        cover: ModuleMap::new_unchecked(free.clone(), m.clone(), cover)?,
        inclusion: ModuleMap::new_unchecked(kernel.clone(), free, inclusion)?,
        kernel,
        coord_rows,
        section,
    })
}

/// Distinct blocks of `m` with multiplicities.
pub(crate) fn block_multiset<S: Scalar>(m: &Module<S>) -> Vec<(Module<S>, usize)> {
    let mut out: Vec<(Module<S>, usize)> = Vec::new();
    let mut slot: HashMap<Arc<ModuleData<S>>, usize> = HashMap::new();
    for idx in m.components() {
        let b = m.restrict(&idx);
        match slot.get(b.data()) {
            Some(&i) => out[i].1 += 1,
            None => {
                slot.insert(b.data().clone(), out.len());
                out.push((b, 1));
            }
        }
    }
    out
}

/// Blocks of `Ω^i m` with multiplicities, for `i = 0..=depth`.
pub(crate) fn syzygy_levels<S: Scalar>(
    m: &Module<S>,
    depth: usize,
) -> Result<Vec<Vec<(Module<S>, usize)>>> {
    let alg = m.algebra().clone();
    let mut levels = vec![block_multiset(m)];
    for _ in 0..depth {
        let prev = levels.last().expect("nonempty");
        let mut next: Vec<(Module<S>, usize)> = Vec::new();
        let mut slot: HashMap<Arc<ModuleData<S>>, usize> = HashMap::new();
        for (b, count) in prev {
            let bc = alg.cache.get_or_compute(b)?;
            let omega = Module::from_data(alg.clone(), bc.omega.clone());
            for (c, k) in block_multiset(&omega) {
                match slot.get(c.data()) {
                    Some(&i) => next[i].1 += count * k,
                    None => {
                        slot.insert(c.data().clone(), next.len());
                        next.push((c, count * k));
                    }
                }
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

/// `β_0 .. β_w` without building the resolution maps.
pub fn betti_numbers<S: Scalar>(m: &Module<S>, w: usize) -> Result<Vec<usize>> {
    let alg = m.algebra().clone();
    syzygy_levels(m, w)?
        .iter()
        .map(|level| {
            level.iter().try_fold(0, |acc, (b, count)| {
                Ok(acc + count * alg.cache.get_or_compute(b)?.mu)
            })
        })
        .collect()
}

/// `dim Ω^0 m .. dim Ω^w m`.
pub fn syzygy_dims<S: Scalar>(m: &Module<S>, w: usize) -> Result<Vec<usize>> {
    Ok(syzygy_levels(m, w)?
        .iter()
        .map(|level| level.iter().map(|(b, c)| b.dim() * c).sum())
        .collect())
}

/// A matrix with entries in the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<S>>,
}

impl<S: Scalar> RMatrix<S> {
    pub fn zeros(alg: &LocalAlgebra<S>, rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, entries: vec![alg.zero(); rows * cols] }
    }

    /// Read off an R-linear map `R^cols -> R^rows` given as a k-matrix.
    pub fn from_linear(alg: &LocalAlgebra<S>, rows: usize, cols: usize, lin: &Matrix<S>) -> Self {
        let dr = alg.dim();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push((0..dr).map(|s| lin.get(i * dr + s, j * dr).clone()).collect());
            }
        }
        RMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &[S] {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Vec<S>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).to_vec());
            }
        }
        RMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// The k-matrix of the map `R^cols -> R^rows`.
    pub fn to_linear(&self, alg: &LocalAlgebra<S>) -> Matrix<S> {
        let dr = alg.dim();
        let mut m = Matrix::zeros(self.rows * dr, self.cols * dr);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.iter().all(Zero::is_zero) {
                    continue;
                }
                m.set_block(i * dr, j * dr, &alg.element_matrix(e));
            }
        }
        m
    }

    pub fn mul(&self, alg: &LocalAlgebra<S>, other: &RMatrix<S>) -> Result<RMatrix<S>> {
        if self.cols != other.rows {
            return Err(Error::Shape("R-matrix product shape mismatch".into()));
        }
        let mut out = RMatrix::zeros(alg, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = alg.zero();
                for t in 0..self.cols {
                    let p = alg.mul(self.get(i, t), other.get(t, j));
                    for (a, b) in acc.iter_mut().zip(p) {
                        *a = a.clone() + b;
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(Zero::is_zero))
    }

    /// Every entry lies in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.entries.iter().all(|e| e[0].is_zero())
    }
}

/// A minimal free resolution truncated at window `w`.
#[derive(Clone, Debug)]
pub struct FreeResolution<S: Scalar> {
    pub module: Module<S>,
    /// `covers[i]` covers `Ω^i M`, for `i = 0..=w`.
    pub covers: Vec<MinimalCover<S>>,
}

impl<S: Scalar> FreeResolution<S> {
    pub fn window(&self) -> usize {
        self.covers.len() - 1
    }

    pub fn betti(&self) -> Vec<usize> {
        self.covers.iter().map(|c| c.rank).collect()
    }

    /// `Ω^i M` for `i = 0..=w+1`.
    pub fn syzygy(&self, i: usize) -> &Module<S> {
        if i == 0 {
            &self.module
        } else {
            &self.covers[i - 1].kernel
        }
    }

    /// The k-matrix of `d_i : F_i -> F_{i-1}`, `1 <= i <= w`.
    pub fn differential(&self, i: usize) -> Matrix<S> {
        let inc = &self.covers[i - 1].inclusion.matrix;
        inc.mul(&self.covers[i].cover.matrix).expect("shape")
    }

    pub fn differential_r(&self, i: usize) -> RMatrix<S> {
        let alg = self.module.algebra();
        RMatrix::from_linear(alg, self.covers[i - 1].rank, self.covers[i].rank, &self.differential(i))
    }

    /// Smallest `(s, p)` with `Ω^{s+p} ≅ Ω^s` inside the window, ignoring
    /// zero syzygies.
    pub fn detect_periodicity(&self) -> Result<Option<(usize, usize)>> {
        let top = self.covers.len();
        for s in 0..top {
            if self.syzygy(s).is_zero() {
                return Ok(None);
            }
            for p in 1..=top - s {
                let (a, b) = (self.syzygy(s), self.syzygy(s + p));
                if a.dim() != b.dim() {
                    continue;
                }
                if is_isomorphic(a, b, IsoBudget::default())?.is_yes() {
                    return Ok(Some((s, p)));
                }
            }
        }
        Ok(None)
    }
}

pub fn resolve<S: Scalar>(m: &Module<S>, w: usize) -> Result<FreeResolution<S>> {
    let mut covers = Vec::with_capacity(w + 1);
    let mut cur = m.clone();
    for _ in 0..=w {
        let c = minimal_free_cover(&cur)?;
        cur = c.kernel.clone();
        covers.push(c);
    }
    Ok(FreeResolution { module: m.clone(), covers })
}

/// Lift `ψ : X -> Y` along minimal covers and restrict to `ΩX -> ΩY`.
pub fn lift_to_syzygy<S: Scalar>(psi: &ModuleMap<S>) -> Result<ModuleMap<S>> {
    let cx = minimal_free_cover(&psi.source)?;
    let cy = minimal_free_cover(&psi.target)?;
    let lift = lift_to_covers(psi, &cx, &cy)?;
    let restricted = lift.mul(&cx.inclusion.matrix)?;
    let coords = restricted.select_rows(&cy.coord_rows);
    ModuleMap::new_unchecked(cx.kernel.clone(), cy.kernel.clone(), coords)
}

/// A map `F_X -> F_Y` over `ψ`, as a k-matrix.
pub(crate) fn lift_to_covers<S: Scalar>(
    psi: &ModuleMap<S>,
    cx: &MinimalCover<S>,
    cy: &MinimalCover<S>,
) -> Result<Matrix<S>> {
    let alg = psi.source.algebra();
    let dr = alg.dim();
    let fy = cy.free();
    let mut lift = Matrix::zeros(fy.dim(), cx.rank * dr);
    for (j, g) in cx.generators().iter().enumerate() {
        let img = psi.matrix.mul_vec(g)?;
        let pre = cy.section.mul_vec(&img)?;
        for s in 0..dr {
            let col = fy.action(s).mul_vec(&pre)?;
            for (r, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    lift.set(r, j * dr + s, v);
                }
            }
        }
    }
    Ok(lift)
}

/// Whether `m` is free, i.e. its minimal syzygy vanishes.
pub fn is_free<S: Scalar>(m: &Module<S>) -> Result<bool> {
    Ok(minimal_free_cover(m)?.kernel.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::syzygy;
    use crate::scalar::Fp;

    type F2 = Fp<2>;

    #[test]
    fn plane_residue_field_betti() {
        let a = LocalAlgebra::<F2>::square_zero(2).unwrap();
        let k = Module::simple(&a);
        assert_eq!(betti_numbers(&k, 4).unwrap(), vec![1, 2, 4, 8, 16]);
        let r = resolve(&k, 4).unwrap();
        assert_eq!(r.betti(), vec![1, 2, 4, 8, 16]);
        for i in 1..=4 {
            assert!(r.differential_r(i).is_minimal());
            if i >= 2 {
                assert!(r.differential(i - 1).mul(&r.differential(i)).unwrap().is_zero());
            }
        }
        assert_eq!(r.syzygy(2), &k.power(4));
    }

    #[test]
    fn free_modules_have_zero_syzygy() {
        let a = LocalAlgebra::<F2>::square_zero(2).unwrap();
        let r2 = Module::free(&a, 2);
        assert!(is_free(&r2).unwrap());
        assert_eq!(betti_numbers(&r2, 3).unwrap(), vec![2, 0, 0, 0]);
        assert!(resolve(&r2, 3).unwrap().detect_periodicity().unwrap().is_none());
    }

    #[test]
    fn periodic_over_dual_numbers() {
        let a = LocalAlgebra::<F2>::truncated_polynomial(2).unwrap();
        let k = Module::simple(&a);
        let r = resolve(&k, 3).unwrap();
        assert_eq!(r.betti(), vec![1, 1, 1, 1]);
        assert_eq!(r.detect_periodicity().unwrap(), Some((0, 1)));
        let a = LocalAlgebra::<F2>::square_zero(2).unwrap();
        let k = Module::simple(&a);
        assert_eq!(resolve(&k, 3).unwrap().detect_periodicity().unwrap(), None);
    }

    #[test]
    fn syzygy_of_sums_is_sum_of_syzygies() {
        let a = LocalAlgebra::<F2>::truncated_polynomial(3).unwrap();
        let k = Module::simple(&a);
        let x2 = Module::cyclic_quotient(&a, a.variable(0));
        let sum = Module::direct_sum(&a, &[k.clone(), x2.clone(), Module::free(&a, 1)]);
        let lhs = syzygy(&sum, 1).unwrap();
        let rhs = Module::direct_sum(&a, &[syzygy(&k, 1).unwrap(), syzygy(&x2, 1).unwrap()]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lifted_isomorphism_is_isomorphism() {
        let a = LocalAlgebra::<F2>::square_zero(2).unwrap();
        let m = syzygy(&Module::simple(&a), 2).unwrap();
        let n = Module::simple(&a).power(4);
        let w = is_isomorphic(&m, &n, IsoBudget::default()).unwrap().witness().unwrap();
        let lifted = lift_to_syzygy(&w).unwrap();
        assert!(lifted.is_homomorphism() && lifted.is_isomorphism());
    }
}
