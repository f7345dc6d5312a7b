//! Reducing sequences: certificates, verification, bounded search, and the
//! transfers along syzygies and cosyzygies.
//!
//! A sequence starts at `K_0 = M` and each step is a short exact sequence
//! `0 -> K_{i-1}^a -> K_i -> Ω^n(K_{i-1}^b) -> 0`, recorded with an explicit
//! isomorphism from its right-hand term to the minimal syzygy. The last module
//! must be free (target `Pd`) or totally reflexive (target `Gdim`).

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Subspace};
use crate::homalg::{ext_dims, ext_syzygy_map, horseshoe_syzygy, is_torsionless, Ext1Space};
use crate::invariants::{is_totally_reflexive, TrVerdict};
use crate::module::{
    is_isomorphic, split_free_summands, syzygy, IsoBudget, Module, ModuleMap, ShortExactSequence,
};
use crate::resolution::{betti_numbers, is_free, lift_to_syzygy, minimal_free_cover, syzygy_dims};
use crate::scalar::Scalar;

/// Which finiteness the last module must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Pd,
    Gdim,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Pd => "pd",
            Target::Gdim => "gdim",
        })
    }
}

impl std::str::FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pd" | "PD" => Ok(Target::Pd),
            "gdim" | "GDIM" => Ok(Target::Gdim),
            other => Err(Error::Parse(format!("unknown target `{other}`"))),
        }
    }
}

/// One step `0 -> K_{i-1}^a -> K_i -> T -> 0` with `T ≅ Ω^n(K_{i-1}^b)`.
#[derive(Clone, Debug)]
pub struct ReducingStep<S: Scalar> {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub module: Module<S>,
    /// `K_{i-1}^a -> K_i`.
    pub alpha: Matrix<S>,
    pub quotient: Module<S>,
    /// `K_i -> T`.
    pub beta: Matrix<S>,
    /// `T -> Ω^n(K_{i-1}^b)`.
    pub iso: Matrix<S>,
}

#[derive(Clone, Debug)]
pub struct ReducingSequence<S: Scalar> {
    pub base: Module<S>,
    pub target: Target,
    pub steps: Vec<ReducingStep<S>>,
}

impl<S: Scalar> ReducingSequence<S> {
    pub fn trivial(base: &Module<S>, target: Target) -> Self {
        ReducingSequence { base: base.clone(), target, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `K_i`, with `K_0` the base.
    pub fn module(&self, i: usize) -> &Module<S> {
        if i == 0 {
            &self.base
        } else {
            &self.steps[i - 1].module
        }
    }

    pub fn last(&self) -> &Module<S> {
        self.module(self.len())
    }

    /// `(a, b, n)` for every step.
    pub fn parameters(&self) -> Vec<(usize, usize, usize)> {
        self.steps.iter().map(|s| (s.a, s.b, s.n)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyReport {
    Accept,
    /// `step` is 1-based; failures of the terminal condition report the last step.
    Reject { step: usize, reason: String },
}

impl VerifyReport {
    pub fn accepted(&self) -> bool {
        matches!(self, VerifyReport::Accept)
    }
}

/// Whether `k` satisfies the terminal condition; the error string says why not.
pub fn terminal_condition<S: Scalar>(k: &Module<S>, target: Target, w: usize) -> Result<std::result::Result<(), String>> {
    match target {
        Target::Pd => Ok(if is_free(k)? { Ok(()) } else { Err("last module is not free".into()) }),
        Target::Gdim => Ok(match is_totally_reflexive(k, w)? {
            TrVerdict::Certified | TrVerdict::WindowPass => Ok(()),
            TrVerdict::Fail(stage) => Err(format!("last module is not totally reflexive: {stage}")),
        }),
    }
}

/// Check every step against freshly computed minimal syzygies and the terminal condition.
pub fn verify<S: Scalar>(seq: &ReducingSequence<S>, w: usize) -> Result<VerifyReport> {
    let alg = seq.base.algebra();
    for (idx, step) in seq.steps.iter().enumerate() {
        let i = idx + 1;
        let reject = |reason: String| Ok(VerifyReport::Reject { step: i, reason });
        if step.a == 0 || step.b == 0 || step.n == 0 {
            return reject("a, b and n must be at least 1".into());
        }
        if !std::sync::Arc::ptr_eq(step.module.algebra(), alg)
            || !std::sync::Arc::ptr_eq(step.quotient.algebra(), alg)
        {
            return reject("module over a different algebra".into());
        }
        let prev = seq.module(idx);
        let src = prev.power(step.a);
        let alpha = match ModuleMap::new(src, step.module.clone(), step.alpha.clone()) {
            Ok(m) => m,
            Err(e) => return reject(format!("alpha: {e}")),
        };
        let beta = match ModuleMap::new(step.module.clone(), step.quotient.clone(), step.beta.clone()) {
            Ok(m) => m,
            Err(e) => return reject(format!("beta: {e}")),
        };
        if let Err(e) = ShortExactSequence::new(alpha, beta) {
            return reject(format!("sequence is not short exact: {e}"));
        }
        let c = syzygy(&prev.power(step.b), step.n)?;
        let iso = match ModuleMap::new(step.quotient.clone(), c, step.iso.clone()) {
            Ok(m) => m,
            Err(e) => return reject(format!("syzygy mismatch: {e}")),
        };
        if !iso.is_isomorphism() {
            return reject("syzygy mismatch: witness is not invertible".into());
        }
    }
    Ok(match terminal_condition(seq.last(), seq.target, w)? {
        Ok(()) => VerifyReport::Accept,
        Err(reason) => VerifyReport::Reject { step: seq.len(), reason },
    })
}

/// Bounds for [`search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_r: usize,
    pub max_a: usize,
    pub max_b: usize,
    pub max_n: usize,
    /// Extension classes tried per step, the split class included.
    pub budget: usize,
    /// Window for total-reflexivity checks.
    pub window: usize,
    pub seed: u64,
    /// Candidates of larger k-dimension are skipped.
    pub max_module_dim: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_r: 2,
            max_a: 8,
            max_b: 8,
            max_n: 2,
            budget: 200,
            window: 10,
            seed: 0,
            max_module_dim: 512,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if [self.max_r, self.max_a, self.max_b, self.max_n, self.window].contains(&0) {
            return Err(Error::Precondition("search bounds must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult<S: Scalar> {
    pub sequence: Option<ReducingSequence<S>>,
    /// Candidate middle modules examined.
    pub candidates: usize,
}

/// Bounded search for a reducing sequence. `None` means nothing was found
/// within the bounds.
pub fn search<S: Scalar>(m: &Module<S>, cfg: &SearchConfig, target: Target) -> Result<SearchResult<S>> {
    cfg.validate()?;
    let mut s = Searcher { cfg, target, candidates: 0, spent: 0 };
    if terminal_condition(m, target, cfg.window)?.is_ok() {
        return Ok(SearchResult { sequence: Some(ReducingSequence::trivial(m, target)), candidates: 0 });
    }
    let steps = s.extend(m, cfg.max_r)?;
    let sequence = steps.map(|steps| ReducingSequence { base: m.clone(), target, steps });
    if let Some(seq) = &sequence {
        debug_assert!(verify(seq, cfg.window)?.accepted());
    }
    Ok(SearchResult { sequence, candidates: s.candidates })
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    target: Target,
    candidates: usize,
    /// Extension classes tried so far, split ones included, across the whole tree.
    spent: usize,
}

const BETTI_CHECKS: usize = 2;

impl Searcher<'_> {
    /// Steps leading from a non-terminal `k` to a terminal module.
    fn extend<S: Scalar>(&mut self, k: &Module<S>, depth: usize) -> Result<Option<Vec<ReducingStep<S>>>> {
        // every K_i embeds in the terminal module, which is torsionless
        if depth == 0 || !is_torsionless(k)? {
            return Ok(None);
        }
        let cfg = self.cfg;
        let depth_needed = cfg.max_n + 1 + BETTI_CHECKS;
        let betti = betti_numbers(k, depth_needed)?;
        let dims = syzygy_dims(k, cfg.max_n + 1)?;
        for n in 1..=cfg.max_n {
            for b in 1..=cfg.max_b {
                for a in 1..=cfg.max_a {
                    if !betti_match(k, &betti, &dims, a, b, n) {
                        continue;
                    }
                    self.candidates += 1;
                    if let Some(step) = self_similar_step(k, a, b, n, cfg.seed)? {
                        return Ok(Some(vec![step]));
                    }
                }
            }
        }
        for n in 1..=cfg.max_n {
            for b in 1..=cfg.max_b {
                for a in 1..=cfg.max_a {
                    if self.spent >= cfg.budget {
                        return Ok(None);
                    }
                    let c = syzygy(&k.power(b), n)?;
                    let left = k.power(a);
                    if left.dim() + c.dim() > cfg.max_module_dim {
                        continue;
                    }
                    self.spent += 1;
                    let ses = ShortExactSequence::split(&left, &c);
                    if let Some(steps) = self.try_candidate(ses, a, b, n, depth)? {
                        return Ok(Some(steps));
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for n in 1..=cfg.max_n {
            for b in 1..=cfg.max_b {
                for a in 1..=cfg.max_a {
                    if self.spent >= cfg.budget {
                        return Ok(None);
                    }
                    let c = syzygy(&k.power(b), n)?;
                    let left = k.power(a);
                    if left.dim() + c.dim() > cfg.max_module_dim {
                        continue;
                    }
                    let space = Ext1Space::new(&c, &left)?;
                    let d = space.dim();
                    if d == 0 {
                        continue;
                    }
                    let mut classes: Vec<Vec<S>> = (0..d)
                        .map(|t| (0..d).map(|u| if u == t { S::one() } else { S::zero() }).collect())
                        .collect();
                    let extra = cfg.budget.saturating_sub(self.spent + d).min(d * 4);
                    for _ in 0..extra {
                        classes.push((0..d).map(|_| S::random(&mut rng)).collect());
                    }
                    for cls in classes {
                        if self.spent >= cfg.budget {
                            return Ok(None);
                        }
                        if cls.iter().all(Zero::is_zero) {
                            continue;
                        }
                        self.spent += 1;
                        let ses = space.extension_middle_term(&space.representative(&cls))?;
                        if let Some(steps) = self.try_candidate(ses, a, b, n, depth)? {
                            return Ok(Some(steps));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn try_candidate<S: Scalar>(
        &mut self,
        ses: ShortExactSequence<S>,
        a: usize,
        b: usize,
        n: usize,
        depth: usize,
    ) -> Result<Option<Vec<ReducingStep<S>>>> {
        self.candidates += 1;
        let t = ses.right().clone();
        let step = ReducingStep {
            a,
            b,
            n,
            module: ses.middle().clone(),
            alpha: ses.inject.matrix,
            quotient: t.clone(),
            beta: ses.surject.matrix,
            iso: Matrix::identity(t.dim()),
        };
        if terminal_condition(&step.module, self.target, self.cfg.window)?.is_ok() {
            return Ok(Some(vec![step]));
        }
        if depth >= 2 {
            if let Some(rest) = self.extend(&step.module, depth - 1)? {
                let mut steps = vec![step];
                steps.extend(rest);
                return Ok(Some(steps));
            }
        }
        Ok(None)
    }
}

/// Betti and dimension arithmetic forced by `K^a ≅ Ω^{n+1}(K^b) ⊕ R^j`.
fn betti_match<S: Scalar>(k: &Module<S>, betti: &[usize], dims: &[usize], a: usize, b: usize, n: usize) -> bool {
    for i in 1..=BETTI_CHECKS {
        if i + n + 1 < betti.len() && a * betti[i] != b * betti[i + n + 1] {
            return false;
        }
    }
    let (lhs, rhs) = (a * betti[0], b * betti[n + 1]);
    if lhs < rhs {
        return false;
    }
    let j = lhs - rhs;
    a * k.dim() == b * dims[n + 1] + j * k.algebra().dim()
}

/// If `K^a ≅ Ω^{n+1}(K^b) ⊕ R^j`, the step `0 -> K^a -> F ⊕ R^j -> Ω^n(K^b) -> 0`
/// built from the minimal cover `F` of `Ω^n(K^b)`. Its middle term is free.
pub fn self_similar_step<S: Scalar>(
    k: &Module<S>,
    a: usize,
    b: usize,
    n: usize,
    seed: u64,
) -> Result<Option<ReducingStep<S>>> {
    let alg = k.algebra().clone();
    let dr = alg.dim();
    let x = k.power(a);
    let c = syzygy(&k.power(b), n)?;
    let cov = minimal_free_cover(&c)?;
    let y = cov.kernel.clone();
    let sx = split_free_summands(&x)?;
    let sy = split_free_summands(&y)?;
    if sx.free_rank < sy.free_rank {
        return Ok(None);
    }
    let j = sx.free_rank - sy.free_rank;
    let budget = IsoBudget { seed, ..IsoBudget::default() };
    let Some(psi) = is_isomorphic(&sx.remainder, &sy.remainder, budget)?.witness() else {
        return Ok(None);
    };
    let (a1, a2) = (sx.free_rank * dr, sy.free_rank * dr);
    let rem = sy.remainder.dim();
    let m1 = Matrix::block_diag(&[&Matrix::identity(a1), &psi.matrix]);
    let total = a1 + rem;
    let mut perm = Matrix::zeros(total, total);
    for s in 0..total {
        let dest = if s < a2 {
            s
        } else if s < a1 {
            a2 + rem + (s - a2)
        } else {
            a2 + (s - a1)
        };
        perm.set(dest, s, S::one());
    }
    let iso_y_inv = sy.iso.matrix.inverse().ok_or_else(|| Error::Construction("split map not invertible".into()))?;
    let m3 = Matrix::block_diag(&[&iso_y_inv, &Matrix::identity(j * dr)]);
    let phi = m3.mul(&perm)?.mul(&m1)?.mul(&sx.iso.matrix)?;
    let embed = Matrix::block_diag(&[&cov.inclusion.matrix, &Matrix::identity(j * dr)]);
    let alpha = embed.mul(&phi)?;
    let middle = Module::free(&alg, cov.rank + j);
    let beta = cov.cover.matrix.hstack(&Matrix::zeros(c.dim(), j * dr))?;
    let ses = ShortExactSequence::new(
        ModuleMap::new(x, middle.clone(), alpha)?,
        ModuleMap::new(middle.clone(), c.clone(), beta)?,
    )?;
    Ok(Some(ReducingStep {
        a,
        b,
        n,
        module: middle,
        alpha: ses.inject.matrix,
        quotient: c.clone(),
        beta: ses.surject.matrix,
        iso: Matrix::identity(c.dim()),
    }))
}

/// From a sequence for `N`, a sequence for `ΩN` with middle terms `ΩK_i ⊕ R^{f_i}`.
pub fn transform_syzygy<S: Scalar>(seq: &ReducingSequence<S>, w: usize) -> Result<ReducingSequence<S>> {
    if let VerifyReport::Reject { step, reason } = verify(seq, w)? {
        return Err(Error::Precondition(format!("input sequence rejected at step {step}: {reason}")));
    }
    let alg = seq.base.algebra().clone();
    let dr = alg.dim();
    let base = syzygy(&seq.base, 1)?;
    let mut steps = Vec::with_capacity(seq.len());
    let mut f = 0usize;
    for (idx, step) in seq.steps.iter().enumerate() {
        let prev = seq.module(idx);
        let omega_prev = syzygy(prev, 1)?;
        let z_prev = Module::direct_sum(&alg, &[omega_prev.clone(), Module::free(&alg, f)]);
        let theta = ShortExactSequence::new(
            ModuleMap::new(prev.power(step.a), step.module.clone(), step.alpha.clone())?,
            ModuleMap::new(step.module.clone(), step.quotient.clone(), step.beta.clone())?,
        )?;
        let hs = horseshoe_syzygy(&theta)?;
        let h = hs.ses.middle().clone();
        let af = step.a * f;
        let z = Module::direct_sum(&alg, &[h.clone(), Module::free(&alg, af)]);
        // Z_{i-1}^a -> Z_i, copy by copy
        let (dw, fr) = (omega_prev.dim(), f * dr);
        let mut alpha = Matrix::zeros(z.dim(), step.a * (dw + fr));
        for c in 0..step.a {
            let src0 = c * (dw + fr);
            let inj_cols: Vec<usize> = (c * dw..(c + 1) * dw).collect();
            alpha.set_block(0, src0, &hs.ses.inject.matrix.select_columns(&inj_cols));
            alpha.set_block(h.dim() + c * fr, src0 + dw, &Matrix::identity(fr));
        }
        let omega_t = hs.ses.right().clone();
        let beta = hs.ses.surject.matrix.hstack(&Matrix::zeros(omega_t.dim(), af * dr))?;
        let psi = ModuleMap::new(step.quotient.clone(), syzygy(&prev.power(step.b), step.n)?, step.iso.clone())?;
        let lifted = lift_to_syzygy(&psi)?;
        let expected = syzygy(&z_prev.power(step.b), step.n)?;
        if lifted.target != expected {
            return Err(Error::Construction("syzygy of the shifted sequence differs from the lifted witness target".into()));
        }
        steps.push(ReducingStep {
            a: step.a,
            b: step.b,
            n: step.n,
            module: z,
            alpha,
            quotient: omega_t,
            beta,
            iso: lifted.matrix,
        });
        f = hs.free_rank + af;
    }
    Ok(ReducingSequence { base, target: seq.target, steps })
}

/// From a sequence for `M` and an isomorphism `ΩN -> M`, a sequence for `N`.
///
/// Requires `Ext^i(M, R) = 0` for `1 <= i <= w`.
pub fn transform_cosyzygy<S: Scalar>(
    seq: &ReducingSequence<S>,
    n_mod: &Module<S>,
    witness: &Matrix<S>,
    w: usize,
) -> Result<ReducingSequence<S>> {
    let alg = seq.base.algebra().clone();
    let dr = alg.dim();
    let r = Module::free(&alg, 1);
    let ext = ext_dims(&seq.base, &r, w)?;
    if let Some(i) = (1..=w).find(|&i| ext[i] != 0) {
        return Err(Error::Precondition(format!("Ext^{i}(M, R) does not vanish")));
    }
    if let VerifyReport::Reject { step, reason } = verify(seq, w)? {
        return Err(Error::Precondition(format!("input sequence rejected at step {step}: {reason}")));
    }
    let omega_n = syzygy(n_mod, 1)?;
    let wit = ModuleMap::new(omega_n, seq.base.clone(), witness.clone())?;
    let kappa0 = wit
        .inverse()
        .filter(|_| wit.is_isomorphism())
        .ok_or_else(|| Error::Precondition("witness is not an isomorphism".into()))?;
    let mut w_prev = n_mod.clone();
    let mut f = 0usize;
    // κ : K_{i-1} -> ΩW_{i-1} ⊕ R^f
    let mut kappa = kappa0.matrix;
    let mut steps = Vec::with_capacity(seq.len());
    for (idx, step) in seq.steps.iter().enumerate() {
        let (a, b, n) = (step.a, step.b, step.n);
        let k_prev = seq.module(idx);
        let omega_w = syzygy(&w_prev, 1)?;
        let dw = omega_w.dim();
        let fr = f * dr;
        let kappa_inv = kappa.inverse().ok_or_else(|| Error::Construction("κ not invertible".into()))?;
        let s_one = kappa_inv.select_columns(&(0..dw).collect::<Vec<_>>());
        let s_free = kappa_inv.select_columns(&(dw..dw + fr).collect::<Vec<_>>());
        let s_a = Matrix::block_diag(&vec![&s_one; a]);
        let s_free_a = Matrix::block_diag(&vec![&s_free; a]);
        // L = K_i / α((R^f)^a)
        let kernel_in_ki = step.alpha.mul(&s_free_a)?;
        let kcols: Vec<Vec<S>> = (0..kernel_in_ki.cols()).map(|c| kernel_in_ki.column(c)).collect();
        let sub = Subspace::span(step.module.dim(), &kcols);
        let (l, q_l) = step.module.quotient_by(&sub);
        let lift_l = crate::module::unit_columns::<S>(step.module.dim(), &sub.complement_positions());
        let c_i = syzygy(&k_prev.power(b), n)?;
        let to_c = step.iso.mul(&step.beta)?.mul(&lift_l)?;
        let a_mod = w_prev.power(a);
        let omega_a = omega_w.power(a);
        let inj_l = q_l.mul(&step.alpha)?.mul(&s_a)?;
        let l_ses = ShortExactSequence::new(
            ModuleMap::new(omega_a.clone(), l.clone(), inj_l)?,
            ModuleMap::new(l, c_i.clone(), to_c)?,
        )?;
        // the free part splits off K_i
        split_retraction(&step.module, &kernel_in_ki, a * f)?;
        let d = syzygy(&k_prev.power(b), n - 1)?;
        let shift = ext_syzygy_map(&d, &a_mod)?;
        if shift.target.c != c_i || shift.target.a != omega_a {
            return Err(Error::Construction("shifted Ext space has unexpected end terms".into()));
        }
        let y = shift.target.class_of(&l_ses)?;
        let x = shift
            .matrix
            .solve(&y)?
            .ok_or_else(|| Error::Construction("class is not in the image of the syzygy map".into()))?;
        let p = shift.source.extension_middle_term(&shift.source.representative(&x))?;
        let w_i = if n == 1 {
            // pull back along (ΩW)^b -> K^b
            let s_b = Matrix::block_diag(&vec![&s_one; b]);
            let img: Vec<Vec<S>> = (0..s_b.cols()).map(|c| s_b.column(c)).collect();
            let v = Subspace::span(d.dim(), &img);
            let (_, q_v) = d.quotient_by(&v);
            let cond = q_v.mul(&p.surject.matrix)?;
            let basis = cond.kernel_basis();
            let w_i = p.middle().submodule(&basis)?;
            let pushed = p.surject.matrix.mul(&basis)?;
            let beta = s_b
                .solve_matrix(&pushed)?
                .ok_or_else(|| Error::Construction("pullback does not land in the syzygy".into()))?;
            let t = omega_w.power(b);
            let id = Matrix::identity(t.dim());
            let inj = basis
                .solve_matrix(&p.inject.matrix)?
                .ok_or_else(|| Error::Construction("A does not lie in the pullback".into()))?;
            ShortExactSequence::new(
                ModuleMap::new(a_mod.clone(), w_i.clone(), inj.clone())?,
                ModuleMap::new(w_i.clone(), t.clone(), beta.clone())?,
            )?;
            steps.push(ReducingStep {
                a,
                b,
                n,
                module: w_i.clone(),
                alpha: inj,
                quotient: t,
                beta,
                iso: id,
            });
            w_i
        } else {
            // D = Ω^{n-1}(K^b) -> Ω^{n-1}((ΩW ⊕ R^f)^b) = Ω^n(W^b)
            let kb = ModuleMap::new(
                k_prev.power(b),
                Module::direct_sum(&alg, &[omega_w.clone(), Module::free(&alg, f)]).power(b),
                Matrix::block_diag(&vec![&kappa; b]),
            )?;
            let mut lifted = kb;
            for _ in 0..n - 1 {
                lifted = lift_to_syzygy(&lifted)?;
            }
            let expected = syzygy(&w_prev.power(b), n)?;
            if lifted.target != expected {
                return Err(Error::Construction("lifted witness has an unexpected target".into()));
            }
            let w_i = p.middle().clone();
            steps.push(ReducingStep {
                a,
                b,
                n,
                module: w_i.clone(),
                alpha: p.inject.matrix.clone(),
                quotient: d.clone(),
                beta: p.surject.matrix.clone(),
                iso: lifted.matrix,
            });
            w_i
        };
        // κ_i : K_i -> ΩW_i ⊕ R^{f_i}
        let omega_wi = syzygy(&w_i, 1)?;
        let ki = &step.module;
        if ki.dim() < omega_wi.dim() || (ki.dim() - omega_wi.dim()) % dr != 0 {
            return Err(Error::Construction("K_i is not a syzygy plus a free module".into()));
        }
        let fi = (ki.dim() - omega_wi.dim()) / dr;
        let target = Module::direct_sum(&alg, &[omega_wi, Module::free(&alg, fi)]);
        let budget = IsoBudget { seed: idx as u64, ..IsoBudget::default() };
        let iso = is_isomorphic(ki, &target, budget)?
            .witness()
            .ok_or_else(|| Error::Construction("K_i ≇ ΩW_i ⊕ free".into()))?;
        kappa = iso.matrix;
        f = fi;
        w_prev = w_i;
    }
    let out = ReducingSequence { base: n_mod.clone(), target: seq.target, steps };
    if let VerifyReport::Reject { step, reason } = verify(&out, w)? {
        return Err(Error::Construction(format!("transferred sequence rejected at step {step}: {reason}")));
    }
    Ok(out)
}

/// A retraction of `j : R^{rank} -> K` (columns of `inc`), found in `Hom(K, R^rank)`.
pub fn split_retraction<S: Scalar>(k: &Module<S>, inc: &Matrix<S>, rank: usize) -> Result<Matrix<S>> {
    let alg = k.algebra().clone();
    let free = Module::free(&alg, rank);
    solve_retraction(k, &free, inc)
}

/// Some `ρ : K -> M` with `ρ ∘ ι = id_M`, where `ι` has matrix `inc`.
pub fn solve_retraction<S: Scalar>(k: &Module<S>, m: &Module<S>, inc: &Matrix<S>) -> Result<Matrix<S>> {
    if m.dim() == 0 {
        return Ok(Matrix::zeros(0, k.dim()));
    }
    let hom = crate::homalg::hom_space(k, m)?;
    let target = Matrix::identity(m.dim());
    let cols: Vec<Vec<S>> = hom
        .basis()
        .iter()
        .map(|rho| rho.mul(inc).map(|c| c.data().to_vec()))
        .collect::<Result<_>>()?;
    let system = Matrix::from_columns(m.dim() * m.dim(), &cols);
    let x = system
        .solve(target.data())?
        .ok_or_else(|| Error::Construction("no retraction exists".into()))?;
    Ok(hom.combine(&x))
}
