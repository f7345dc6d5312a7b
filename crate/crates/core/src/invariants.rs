//! Verdicts (free, totally reflexive, G-dimension) and executable checks of
//! the structural theorems about reducing sequences.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::LocalAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::homalg::{biduality_map, dual, ext_dims, hom_dim, is_torsionless, p_invariant, pushforward, PValue};
use crate::module::{free_plus_residue_shape, is_isomorphic, IsoBudget, Module, ModuleMap};
use crate::reducing::{search, solve_retraction, verify, ReducingSequence, SearchConfig, Target, VerifyReport};
use crate::resolution::{minimal_free_cover, resolve, RMatrix};
use crate::scalar::Scalar;

/// Rank of `m` when it is free.
pub fn pd_is_finite<S: Scalar>(m: &Module<S>) -> Result<Option<usize>> {
    let c = minimal_free_cover(m)?;
    Ok(c.kernel.is_zero().then_some(c.rank))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TrVerdict {
    /// All checks pass and the ring is Gorenstein or the module free.
    Certified,
    /// All checks pass on the window over a non-Gorenstein ring.
    WindowPass,
    Fail(String),
}

impl TrVerdict {
    pub fn passes(&self) -> bool {
        !matches!(self, TrVerdict::Fail(_))
    }
}

/// `Ext^i(M, R) = 0 = Ext^i(M*, R)` for `1 <= i <= w` and `M` reflexive.
pub fn is_totally_reflexive<S: Scalar>(m: &Module<S>, w: usize) -> Result<TrVerdict> {
    let alg = m.algebra().clone();
    let r = Module::free(&alg, 1);
    let e = ext_dims(m, &r, w)?;
    if let Some(i) = (1..=w).find(|&i| e[i] != 0) {
        return Ok(TrVerdict::Fail(format!("Ext^{i}(M,R) ≠ 0")));
    }
    let d = dual(m)?;
    let e = ext_dims(&d.module, &r, w)?;
    if let Some(i) = (1..=w).find(|&i| e[i] != 0) {
        return Ok(TrVerdict::Fail(format!("Ext^{i}(M*,R) ≠ 0")));
    }
    if !biduality_map(m)?.is_isomorphism() {
        return Ok(TrVerdict::Fail("not reflexive".into()));
    }
    Ok(if alg.is_gorenstein() || pd_is_finite(m)?.is_some() {
        TrVerdict::Certified
    } else {
        TrVerdict::WindowPass
    })
}

/// What makes the G-dimension of a module finite.
pub enum GdimHypothesis<'a, S: Scalar> {
    GorensteinRing,
    Certificate(&'a ReducingSequence<S>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GdimReport {
    pub window: usize,
    /// `sup { i <= w : Ext^i(M, R) ≠ 0 }`.
    pub value: PValue,
    pub ext_dims: Vec<usize>,
    pub note: String,
}

const SUP_NOTE: &str = "uses sup{i : Ext^i(M,R) ≠ 0}; the reading with `= 0` in place of `≠ 0` \
    contradicts the Auslander–Bridger formula and is not used";

/// G-dimension read off the Ext window, only under a finiteness hypothesis.
pub fn gdim<S: Scalar>(m: &Module<S>, w: usize, hyp: GdimHypothesis<'_, S>) -> Result<GdimReport> {
    match hyp {
        GdimHypothesis::GorensteinRing => {
            if !m.algebra().is_gorenstein() {
                return Err(Error::Precondition("ring is not Gorenstein".into()));
            }
        }
        GdimHypothesis::Certificate(seq) => {
            if seq.target != Target::Gdim || seq.base != *m {
                return Err(Error::Precondition("certificate is not a GDIM sequence for this module".into()));
            }
            if let VerifyReport::Reject { step, reason } = verify(seq, w)? {
                return Err(Error::Precondition(format!("certificate rejected at step {step}: {reason}")));
            }
        }
    }
    let r = Module::free(m.algebra(), 1);
    Ok(GdimReport {
        window: w,
        value: p_invariant(m, &r, w)?,
        ext_dims: ext_dims(m, &r, w)?,
        note: SUP_NOTE.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// A matrix carried in a report, entries as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub name: String,
    pub rows: Vec<Vec<String>>,
}

impl Witness {
    fn new<S: Scalar>(name: impl Into<String>, m: &Matrix<S>) -> Self {
        let rows = (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect();
        Witness { name: name.into(), rows }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub window: usize,
    pub hypotheses: Vec<Check>,
    pub conclusions: Vec<Check>,
    pub witnesses: Vec<Witness>,
    pub counterexample: Option<String>,
}

impl TheoremReport {
    fn new(theorem: &str, window: usize) -> Self {
        TheoremReport {
            theorem: theorem.into(),
            window,
            hypotheses: Vec::new(),
            conclusions: Vec::new(),
            witnesses: Vec::new(),
            counterexample: None,
        }
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|c| c.passed)
    }

    pub fn passed(&self) -> bool {
        self.hypotheses_hold() && self.conclusions.iter().all(|c| c.passed)
    }

    fn hyp(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.hypotheses.push(Check::new(name, passed, detail));
        passed
    }

    fn conclude(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        let name = name.into();
        if !passed && self.counterexample.is_none() {
            self.counterexample = Some(name.clone());
        }
        self.conclusions.push(Check::new(name, passed, detail));
    }
}

fn vanishing_window<S: Scalar>(m: &Module<S>, n: &Module<S>, lo: usize, hi: usize) -> Result<Option<usize>> {
    if hi < lo {
        return Ok(None);
    }
    let e = ext_dims(m, n, hi)?;
    Ok((lo..=hi).find(|&i| e[i] != 0))
}

fn verify_check<S: Scalar>(report: &mut TheoremReport, seq: &ReducingSequence<S>, w: usize) -> Result<bool> {
    Ok(match verify(seq, w)? {
        VerifyReport::Accept => report.hyp("certificate verifies", true, format!("r = {}", seq.len())),
        VerifyReport::Reject { step, reason } => {
            report.hyp("certificate verifies", false, format!("step {step}: {reason}"))
        }
    })
}

/// A window of a complete resolution: `F_w -> ... -> F_0 -> G_0 -> ... -> G_{w-1}`.
#[derive(Clone, Debug)]
pub struct CompleteResolution<S> {
    /// Ranks from left to right.
    pub ranks: Vec<usize>,
    /// `maps[t] : rank t -> rank t+1`, as `ranks[t+1] x ranks[t]` R-matrices.
    pub maps: Vec<RMatrix<S>>,
    pub exact: bool,
    pub dual_exact: bool,
}

fn exact_at_interior<S: Scalar>(alg: &LocalAlgebra<S>, ranks: &[usize], maps: &[Matrix<S>]) -> bool {
    let dr = alg.dim();
    (1..ranks.len() - 1).all(|t| {
        let (inn, out) = (&maps[t - 1], &maps[t]);
        out.mul(inn).map(|p| p.is_zero()).unwrap_or(false) && inn.rank() + out.rank() == ranks[t] * dr
    })
}

/// Splice the minimal resolution with the pushforward chain and check both
/// the complex and its dual.
pub fn complete_resolution<S: Scalar>(m: &Module<S>, w: usize) -> Result<CompleteResolution<S>> {
    let alg = m.algebra().clone();
    let res = resolve(m, w)?;
    let mut ranks: Vec<usize> = res.betti().into_iter().rev().collect();
    let mut lin: Vec<Matrix<S>> = (1..=w).rev().map(|i| res.differential(i)).collect();
    let mut cur = m.clone();
    let mut into_cur = res.covers[0].cover.matrix.clone();
    for _ in 0..w {
        let pf = pushforward(&cur)?;
        let g_rank = pf.ses.middle().dim() / alg.dim();
        lin.push(pf.ses.inject.matrix.mul(&into_cur)?);
        ranks.push(g_rank);
        into_cur = pf.ses.surject.matrix.clone();
        cur = pf.ses.right().clone();
    }
    let maps: Vec<RMatrix<S>> = lin
        .iter()
        .enumerate()
        .map(|(t, l)| RMatrix::from_linear(&alg, ranks[t + 1], ranks[t], l))
        .collect();
    let exact = exact_at_interior(&alg, &ranks, &lin);
    let dual_lin: Vec<Matrix<S>> = maps.iter().rev().map(|d| d.transpose().to_linear(&alg)).collect();
    let dual_ranks: Vec<usize> = ranks.iter().rev().copied().collect();
    let dual_exact = exact_at_interior(&alg, &dual_ranks, &dual_lin);
    Ok(CompleteResolution { ranks, maps, exact, dual_exact })
}

/// Run the proof pipeline for finite reducing G-dimension with vanishing Ext.
pub fn check_main_theorem<S: Scalar>(m: &Module<S>, seq: &ReducingSequence<S>, w: usize) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("main", w);
    let r = Module::free(m.algebra(), 1);
    let ok = verify_check(&mut rep, seq, w)?
        & rep.hyp("certificate starts at M", seq.base == *m, "")
        & {
            let bad = vanishing_window(m, &r, 1, w)?;
            rep.hyp("Ext^i(M,R) = 0 on window", bad.is_none(), bad.map(|i| format!("i = {i}")).unwrap_or_default())
        };
    if !ok {
        return Ok(rep);
    }
    let lam = biduality_map(m)?;
    let torsionless = lam.is_injective();
    rep.conclude("M torsionless", torsionless && is_torsionless(m)?, format!("rank λ = {}", lam.rank()));
    let mut cur = m.clone();
    let mut chain_ok = true;
    let mut dual_ok = true;
    let mut detail = String::new();
    for i in 0..w {
        let pf = pushforward(&cur)?;
        let next = pf.ses.right().clone();
        let tl = is_torsionless(&next)?;
        let bad = vanishing_window(&next, &r, 1, w - i - 1)?;
        if !(pf.ext1_vanishes && tl && bad.is_none()) {
            chain_ok = false;
            detail = format!("fails at M_{}", i + 1);
        }
        let (dm, dn, df) = (hom_dim(&cur, &r)?, hom_dim(&next, &r)?, hom_dim(pf.ses.middle(), &r)?);
        if df != dm + dn {
            dual_ok = false;
        }
        cur = next;
    }
    rep.conclude("pushforward chain", chain_ok, detail);
    rep.conclude("dual pushforward sequences exact", dual_ok, "");
    let cr = complete_resolution(m, w)?;
    rep.conclude("complete resolution exact", cr.exact, format!("ranks {:?}", cr.ranks));
    rep.conclude("complete resolution dual exact", cr.dual_exact, "");
    Ok(rep)
}

/// `M` is a direct summand of every `K_i` and `Ext^j(K_i, M)` vanishes.
pub fn check_t2<S: Scalar>(m: &Module<S>, seq: &ReducingSequence<S>, w: usize) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("t2", w);
    let bad = vanishing_window(m, m, 1, w)?;
    let ok = rep.hyp("Ext^i(M,M) = 0 on window", bad.is_none(), bad.map(|i| format!("i = {i}")).unwrap_or_default())
        & verify_check(&mut rep, seq, w)?;
    if !ok {
        return Ok(rep);
    }
    let base_iso = if seq.base == *m {
        Some(Matrix::identity(m.dim()))
    } else {
        is_isomorphic(m, &seq.base, IsoBudget::default())?.witness().map(|w| w.matrix)
    };
    let Some(mut iota) = base_iso else {
        rep.hyp("certificate starts at M", false, "");
        return Ok(rep);
    };
    let mut offset = 0;
    for i in 0..=seq.len() {
        if i > 0 {
            let step = &seq.steps[i - 1];
            let prev = seq.module(i - 1).dim();
            let first_copy = crate::module::unit_columns::<S>(prev * step.a, &(0..prev).collect::<Vec<_>>());
            iota = step.alpha.mul(&first_copy)?.mul(&iota)?;
            offset += step.n;
        }
        let k = seq.module(i);
        let inj = ModuleMap::new(m.clone(), k.clone(), iota.clone())?;
        let retraction = solve_retraction(k, m, &iota);
        let split = inj.is_injective() && retraction.is_ok();
        rep.conclude(format!("M is a summand of K_{i}"), split, "");
        if let Ok(rho) = retraction {
            rep.witnesses.push(Witness::new(format!("injection M -> K_{i}"), &iota));
            rep.witnesses.push(Witness::new(format!("retraction K_{i} -> M"), &rho));
        }
        let top = w.saturating_sub(offset);
        let bad = vanishing_window(k, m, 1, top)?;
        rep.conclude(
            format!("Ext^j(K_{i},M) = 0 for 1 <= j <= {top}"),
            bad.is_none(),
            bad.map(|j| format!("j = {j}")).unwrap_or_default(),
        );
    }
    Ok(rep)
}

/// `Hom_k(R, k)` with `(r·f)(s) = f(rs)`.
pub fn canonical_module<S: Scalar>(a: &Arc<LocalAlgebra<S>>) -> Module<S> {
    let actions = (0..a.dim()).map(|i| a.mult_matrix(i).transpose()).collect();
    Module::from_actions_unchecked(a.clone(), a.dim(), actions)
}

/// Homothety `R -> Hom(C, C)` bijective and `Ext^i(C, C) = 0` on `1..=w`.
pub fn is_semidualizing<S: Scalar>(c: &Module<S>, w: usize) -> Result<bool> {
    let alg = c.algebra();
    let stacked: Vec<Vec<S>> = c.actions().iter().map(|a| a.data().to_vec()).collect();
    let injective = crate::exactlin::Subspace::span(c.dim() * c.dim(), &stacked).dim() == alg.dim();
    let bijective = injective && hom_dim(c, c)? == alg.dim();
    Ok(bijective && vanishing_window(c, c, 1, w)?.is_none())
}

/// Canonical module against the Gorenstein property and bounded search.
pub fn check_cor33<S: Scalar>(a: &Arc<LocalAlgebra<S>>, w: usize, cfg: &SearchConfig) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("cor33", w);
    let omega = canonical_module(a);
    let r = Module::free(a, 1);
    let gor = a.is_gorenstein();
    rep.hyp("ring Gorenstein", true, gor.to_string());
    let iso = is_isomorphic(&omega, &r, IsoBudget::default())?;
    let found = search(&omega, cfg, Target::Gdim)?.sequence;
    if gor {
        rep.conclude("ω ≅ R", iso.is_yes(), "");
        let r0 = found.as_ref().map(|s| s.len()) == Some(0);
        rep.conclude("search finds r = 0", r0, "");
    } else {
        rep.conclude("ω ≇ R", iso.is_no(), format!("{iso:?}").chars().take(80).collect::<String>());
        rep.conclude("ω semidualizing", is_semidualizing(&omega, w)?, "");
        rep.conclude("search absent", found.is_none(), "");
    }
    Ok(rep)
}

/// Over a non-Gorenstein ring with `m² = 0`: `M ≅ R^α ⊕ k^β` exactly when
/// short certificates exist.
pub fn check_prop27<S: Scalar>(
    a: &Arc<LocalAlgebra<S>>,
    m: &Module<S>,
    cfg: &SearchConfig,
    submitted: Option<&ReducingSequence<S>>,
) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("prop27", cfg.window);
    let ok = rep.hyp("m^2 = 0", a.max_ideal_power_vanishes(2), "")
        & rep.hyp("ring not Gorenstein", !a.is_gorenstein(), "");
    if !ok {
        return Ok(rep);
    }
    let shape = free_plus_residue_shape(m)?;
    let s = shape.is_some();
    rep.conclude(
        "structure test",
        true,
        shape.map(|(al, be)| format!("R^{al} ⊕ k^{be}")).unwrap_or_else(|| "not of the form R^α ⊕ k^β".into()),
    );
    for target in [Target::Pd, Target::Gdim] {
        let found = search(m, cfg, target)?.sequence;
        if s {
            let short = found.as_ref().is_some_and(|q| q.len() <= 1);
            rep.conclude(format!("{target}: certificate with r <= 1"), short, "");
        } else {
            rep.conclude(format!("{target}: search absent"), found.is_none(), "");
        }
    }
    if let (false, Some(seq)) = (s, submitted) {
        let rejected = seq.base != *m || !verify(seq, cfg.window)?.accepted();
        rep.conclude("submitted certificate rejected", rejected, "");
    }
    Ok(rep)
}

/// `P(K_i, N) = P(M, N)` along a certificate.
pub fn check_p_transfer<S: Scalar>(seq: &ReducingSequence<S>, n: &Module<S>, w: usize) -> Result<TheoremReport> {
    let mut rep = TheoremReport::new("ptransfer", w);
    let p = p_invariant(&seq.base, n, w)?;
    let ok = verify_check(&mut rep, seq, w)?
        & rep.hyp("P(M,N) finite on window", matches!(p, PValue::Finite(_)), format!("{p:?}"));
    if !ok {
        return Ok(rep);
    }
    for i in 1..=seq.len() {
        let pi = p_invariant(seq.module(i), n, w)?;
        rep.conclude(format!("P(K_{i},N) = P(M,N)"), pi == p, format!("{pi:?}"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;

    type F2 = Fp<2>;

    #[test]
    fn total_reflexivity_verdicts() {
        let g = LocalAlgebra::<F2>::truncated_polynomial(3).unwrap();
        assert_eq!(is_totally_reflexive(&Module::simple(&g), 4).unwrap(), TrVerdict::Certified);
        let p = LocalAlgebra::<F2>::square_zero(2).unwrap();
        assert_eq!(
            is_totally_reflexive(&Module::simple(&p), 4).unwrap(),
            TrVerdict::Fail("Ext^1(M,R) ≠ 0".into())
        );
        assert_eq!(is_totally_reflexive(&Module::free(&p, 2), 4).unwrap(), TrVerdict::Certified);
    }

    #[test]
    fn canonical_modules() {
        let p = LocalAlgebra::<F2>::square_zero(2).unwrap();
        let w = canonical_module(&p);
        w.check_homomorphism().unwrap();
        assert_eq!((w.dim(), w.minimal_generator_count()), (3, 2));
        assert!(is_semidualizing(&w, 4).unwrap());
        assert!(is_semidualizing(&Module::free(&p, 1), 4).unwrap());
        let g = LocalAlgebra::<F2>::truncated_polynomial(2).unwrap();
        let wg = canonical_module(&g);
        assert!(is_isomorphic(&wg, &Module::free(&g, 1), IsoBudget::default()).unwrap().is_yes());
    }

    #[test]
    fn gdim_needs_hypothesis() {
        let p = LocalAlgebra::<F2>::square_zero(2).unwrap();
        let k = Module::simple(&p);
        assert!(gdim(&k, 4, GdimHypothesis::GorensteinRing).is_err());
        let g = LocalAlgebra::<F2>::truncated_polynomial(2).unwrap();
        let rep = gdim(&Module::simple(&g), 6, GdimHypothesis::GorensteinRing).unwrap();
        assert_eq!(rep.value, PValue::Finite(0));
    }

    #[test]
    fn complete_resolution_over_dual_numbers() {
        let g = LocalAlgebra::<F2>::truncated_polynomial(2).unwrap();
        let cr = complete_resolution(&Module::simple(&g), 3).unwrap();
        assert_eq!(cr.ranks, vec![1; 7]);
        assert!(cr.exact && cr.dual_exact);
        let x = g.variable(0).to_vec();
        assert!(cr.maps.iter().all(|d| d.get(0, 0) == x.as_slice()));
    }
}
