//! Fixtures, random modules, and the acceptance suite driver.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::LocalAlgebra;
use crate::error::Result;
use crate::exactlin::Matrix;
use crate::homalg::{ext_dims, horseshoe_syzygy, p_invariant, Ext1Space, PValue};
use crate::invariants::{
    canonical_module, check_cor33, check_p_transfer, check_prop27, check_t2, complete_resolution, gdim,
    is_totally_reflexive, Check, GdimHypothesis, TrVerdict,
};
use crate::module::{free_plus_residue_shape, is_isomorphic, syzygy, IsoBudget, Module};
use crate::reducing::{
    search, transform_cosyzygy, transform_syzygy, verify, ReducingSequence, ReducingStep, SearchConfig, Target,
};
use crate::resolution::{betti_numbers, minimal_free_cover, resolve};
use crate::scalar::{Fp, Scalar};
use crate::Error;

type F2 = Fp<2>;
type F3 = Fp<3>;

/// Cokernel of a seeded random `g x r` matrix with entries in the maximal ideal.
pub fn random_module<S: Scalar>(a: &Arc<LocalAlgebra<S>>, max_gens: usize, max_rels: usize, seed: u64) -> Module<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = rng.gen_range(1..=max_gens.max(1));
    let r = rng.gen_range(0..=max_rels);
    let d = a.dim();
    let rels: Vec<Vec<Vec<S>>> = (0..r)
        .map(|_| {
            (0..g)
                .map(|_| {
                    let mut e = vec![S::zero(); d];
                    if d > 1 {
                        match rng.gen_range(0..10) {
                            0..=3 => {}
                            4..=7 => {
                                let i = rng.gen_range(1..d);
                                e[i] = nonzero(&mut rng);
                            }
                            _ => {
                                for x in e.iter_mut().skip(1) {
                                    *x = S::random(&mut rng);
                                }
                            }
                        }
                    }
                    e
                })
                .collect()
        })
        .collect();
    Module::from_presentation(a, g, &rels).expect("well-formed presentation")
}

fn nonzero<S: Scalar, R: Rng>(rng: &mut R) -> S {
    loop {
        let x = S::random(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Bounds used for the structure-versus-search comparisons.
pub fn standard_bounds() -> SearchConfig {
    SearchConfig { max_r: 2, max_a: 8, max_b: 8, max_n: 2, budget: 200, window: 10, seed: 0, max_module_dim: 512 }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    run: fn() -> Result<Vec<Check>>,
}

impl Fixture {
    pub fn run(&self) -> FixtureReport {
        let start = Instant::now();
        let checks = match (self.run)() {
            Ok(c) => c,
            Err(e) => vec![check("fixture ran", false, e.to_string())],
        };
        FixtureReport {
            name: self.name.into(),
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

/// The acceptance criteria, in order.
pub fn acceptance_criteria() -> Vec<Fixture> {
    vec![
        Fixture { name: "acceptance_01_plane_residue_field", description: "Betti numbers, Ω²k ≅ k⁴, the {k, R²} certificate and its search over k[x,y]/(x,y)²", run: plane_residue_field },
        Fixture { name: "acceptance_02_square_zero_family", description: "r = 1 certificates with (e², 1, 1) for k over m² = 0 rings, e = 2, 3, over F2 and F3", run: square_zero_family },
        Fixture { name: "acceptance_03_structure_vs_search", description: "R^α ⊕ k^β shape agrees with bounded search on 100 random modules and fixtures", run: structure_vs_search },
        Fixture { name: "acceptance_04_negative_controls", description: "Ext^i(k, R) ≠ 0 on the window and the cosyzygy transfer refuses R/(x)", run: negative_controls },
        Fixture { name: "acceptance_05_gorenstein_world", description: "total reflexivity, G-dimension 0 and complete resolutions over k[x]/(x³), k[x]/(x²)", run: gorenstein_world },
        Fixture { name: "acceptance_06_horseshoe", description: "horseshoe sequences of 50 random extensions", run: horseshoe_suite },
        Fixture { name: "acceptance_07_p_transfer", description: "P(K_i, N) = P(M, N) along found certificates", run: p_transfer },
        Fixture { name: "acceptance_08_transfer_round_trip", description: "syzygy and cosyzygy transfers on 20 random modules over k[x]/(x³)", run: transfer_round_trip },
        Fixture { name: "acceptance_09_canonical_module", description: "canonical module against Gorenstein rings and bounded search", run: canonical_consistency },
        Fixture { name: "acceptance_10_summands", description: "M is a split summand of every K_i for M = R and M = ω over Gorenstein rings", run: summands },
    ]
}

/// Smaller named examples, each tied to one operation.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = acceptance_criteria();
    out.push(Fixture { name: "example_dual_numbers_periodic", description: "k over k[x]/(x²) has period 1", run: dual_numbers_periodic });
    out.push(Fixture { name: "example_cyclic_not_reducible", description: "R/(x) over k[x,y]/(x,y)² has no certificate within bounds", run: cyclic_not_reducible });
    out.push(Fixture { name: "example_random_module_shapes", description: "random modules hit shapes outside R^α ⊕ k^β", run: random_shapes });
    out.sort_by_key(|f| f.name);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub passed: bool,
    pub fixtures: Vec<FixtureReport>,
}

/// Run fixtures whose name contains `filter`, concurrently, reporting by name.
pub fn run_fixtures(filter: Option<&str>) -> CorpusReport {
    let selected: Vec<Fixture> = fixtures()
        .into_iter()
        .filter(|f| filter.is_none_or(|s| f.name.contains(s)))
        .collect();
    let mut reports: Vec<FixtureReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected.iter().map(|f| scope.spawn(move || f.run())).collect();
        handles.into_iter().map(|h| h.join().expect("fixture thread")).collect()
    });
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    CorpusReport { passed: reports.iter().all(|r| r.passed), fixtures: reports }
}

/// The certificate `{k, R²}` over `k[x,y]/(x,y)²` with `(a, b, n) = (4, 1, 1)`,
/// written out by hand.
pub fn plane_certificate() -> Result<ReducingSequence<F2>> {
    let a = LocalAlgebra::<F2>::square_zero(2)?;
    let k = Module::simple(&a);
    let r2 = Module::free(&a, 2);
    // basis of R² is (1, x, y) per copy; k⁴ goes onto x e1, y e1, x e2, y e2
    let mut alpha = Matrix::zeros(6, 4);
    for (col, row) in [1, 2, 4, 5].into_iter().enumerate() {
        alpha.set(row, col, F2::new(1));
    }
    let t = syzygy(&k, 1)?;
    let mut beta = Matrix::zeros(2, 6);
    beta.set(0, 0, F2::new(1));
    beta.set(1, 3, F2::new(1));
    Ok(ReducingSequence {
        base: k,
        target: Target::Pd,
        steps: vec![ReducingStep { a: 4, b: 1, n: 1, module: r2, alpha, quotient: t, beta, iso: Matrix::identity(2) }],
    })
}

fn plane_residue_field() -> Result<Vec<Check>> {
    let a = LocalAlgebra::<F2>::square_zero(2)?;
    let k = Module::simple(&a);
    let mut out = Vec::new();
    let fast = betti_numbers(&k, 4)?;
    let slow = resolve(&k, 4)?.betti();
    out.push(check("betti(k, 4) = [1,2,4,8,16]", fast == [1, 2, 4, 8, 16] && slow == fast, format!("{fast:?} / {slow:?}")));
    let o2 = syzygy(&k, 2)?;
    let iso = is_isomorphic(&o2, &k.power(4), IsoBudget::default())?;
    let valid = iso.clone().witness().is_some_and(|w| w.is_homomorphism() && w.is_isomorphism());
    out.push(check("Ω²k ≅ k⁴", valid, ""));
    let cert = plane_certificate()?;
    let cert = ReducingSequence { base: Module::simple(cert.base.algebra()), ..cert };
    let v = verify(&cert, 10)?;
    out.push(check("hand-written {k, R²} certificate verifies", v.accepted(), format!("{v:?}")));
    let cfg = SearchConfig { max_r: 1, max_a: 4, max_b: 1, max_n: 2, ..standard_bounds() };
    let start = Instant::now();
    let found = search(&k, &cfg, Target::Pd)?.sequence;
    let secs = start.elapsed().as_secs_f64();
    let ok = found.as_ref().is_some_and(|s| s.parameters() == [(4, 1, 1)] && s.last().dim() == 6);
    out.push(check("search (1,4,1,2) finds {k, R²} in < 5 s", ok && secs < 5.0, format!("{secs:.3} s")));
    if let Some(s) = found {
        out.push(check("found certificate verifies", verify(&s, 10)?.accepted(), ""));
    }
    Ok(out)
}

fn square_zero_family_for<S: Scalar>(out: &mut Vec<Check>, field: &str) -> Result<()> {
    for e in [2usize, 3] {
        let a = LocalAlgebra::<S>::square_zero(e)?;
        let k = Module::simple(&a);
        let cfg = SearchConfig { max_r: 2, max_a: 9, max_b: 2, max_n: 2, ..standard_bounds() };
        let found = search(&k, &cfg, Target::Pd)?.sequence;
        let params = found.as_ref().map(|s| s.parameters());
        let accepted = match &found {
            Some(s) => verify(s, 10)?.accepted(),
            None => false,
        };
        out.push(check(
            format!("{field}, e = {e}: r = 1 with ({}, 1, 1)", e * e),
            params == Some(vec![(e * e, 1, 1)]) && accepted,
            format!("{params:?}"),
        ));
    }
    Ok(())
}

fn square_zero_family() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    square_zero_family_for::<F2>(&mut out, "F2")?;
    square_zero_family_for::<F3>(&mut out, "F3")?;
    Ok(out)
}

/// The modules compared against the structure test.
pub fn structure_sample(a: &Arc<LocalAlgebra<F2>>) -> Result<Vec<(String, Module<F2>)>> {
    let k = Module::simple(a);
    let r = Module::free(a, 1);
    let mut out = vec![
        ("R".to_string(), r.clone()),
        ("k".to_string(), k.clone()),
        ("R ⊕ k".to_string(), Module::direct_sum(a, &[r.clone(), k.clone()])),
        ("k³".to_string(), k.power(3)),
        ("R/(x)".to_string(), Module::cyclic_quotient(a, a.variable(0))),
        ("Ωk".to_string(), syzygy(&k, 1)?),
    ];
    for seed in 0..100 {
        out.push((format!("random #{seed}"), random_module(a, 3, 3, seed)));
    }
    Ok(out)
}

fn structure_vs_search() -> Result<Vec<Check>> {
    let a = LocalAlgebra::<F2>::square_zero(2)?;
    let cfg = standard_bounds();
    let mut out = Vec::new();
    let (mut agree, mut s_true, mut s_false) = (0, 0, 0);
    let mut failures = Vec::new();
    let sample = structure_sample(&a)?;
    for (name, m) in &sample {
        let s = free_plus_residue_shape(m)?.is_some();
        let found = search(m, &cfg, Target::Pd)?.sequence;
        let ok = match (&found, s) {
            (Some(seq), true) => seq.len() <= 1 && verify(seq, cfg.window)?.accepted(),
            (None, false) => true,
            _ => false,
        };
        if s {
            s_true += 1;
        } else {
            s_false += 1;
        }
        if ok {
            agree += 1;
        } else {
            failures.push(name.clone());
        }
    }
    out.push(check(
        "structure test agrees with search",
        failures.is_empty(),
        format!("{agree}/{} agree ({s_true} of shape R^α ⊕ k^β, {s_false} not); disagreements: {failures:?}", sample.len()),
    ));
    out.push(check("sample exercises both branches", s_true > 0 && s_false > 0, ""));
    for (name, m) in sample.iter().take(6) {
        let rep = check_prop27(&a, m, &cfg, None)?;
        out.push(check(format!("both targets for {name}"), rep.passed(), format!("{:?}", rep.counterexample)));
    }
    Ok(out)
}

fn negative_controls() -> Result<Vec<Check>> {
    let a = LocalAlgebra::<F2>::square_zero(2)?;
    let k = Module::simple(&a);
    let r = Module::free(&a, 1);
    let dims = ext_dims(&k, &r, 10)?;
    let mut out = vec![check("dim Ext^i(k, R) >= 1 for i <= 10", dims.iter().all(|&d| d >= 1), format!("{dims:?}"))];
    let n = Module::cyclic_quotient(&a, a.variable(0));
    let seq = plane_certificate()?;
    // rebuild over this algebra instance
    let seq = rebase_certificate(&seq, &a)?;
    let on = syzygy(&n, 1)?;
    let wit = is_isomorphic(&on, &seq.base, IsoBudget::default())?
        .witness()
        .ok_or_else(|| Error::Construction("Ω(R/(x)) ≇ k".into()))?;
    let res = transform_cosyzygy(&seq, &n, &wit.matrix, 10);
    let rejected = matches!(&res, Err(Error::Precondition(msg)) if msg.contains("Ext^1"));
    out.push(check("cosyzygy transfer for N = R/(x) rejected up front", rejected, format!("{:?}", res.err())));
    Ok(out)
}

/// Copy a certificate onto another instance of the same algebra.
pub fn rebase_certificate<S: Scalar>(seq: &ReducingSequence<S>, a: &Arc<LocalAlgebra<S>>) -> Result<ReducingSequence<S>> {
    let move_module = |m: &Module<S>| Module::from_actions_unchecked(a.clone(), m.dim(), m.actions().to_vec());
    Ok(ReducingSequence {
        base: move_module(&seq.base),
        target: seq.target,
        steps: seq
            .steps
            .iter()
            .map(|s| ReducingStep { module: move_module(&s.module), quotient: move_module(&s.quotient), ..s.clone() })
            .collect(),
    })
}

fn gorenstein_ring<S: Scalar>(out: &mut Vec<Check>, name: &str, a: &Arc<LocalAlgebra<S>>, seed0: u64) -> Result<()> {
    out.push(check(format!("{name} is Gorenstein"), a.is_gorenstein(), ""));
    let (mut certified, mut gd0, mut complete) = (0, 0, 0);
    for seed in seed0..seed0 + 50 {
        let m = random_module(a, 3, 3, seed);
        if is_totally_reflexive(&m, 10)? == TrVerdict::Certified {
            certified += 1;
        }
        if gdim(&m, 10, GdimHypothesis::GorensteinRing)?.value == PValue::Finite(0) {
            gd0 += 1;
        }
        let cr = complete_resolution(&m, 10)?;
        if cr.exact && cr.dual_exact {
            complete += 1;
        }
    }
    out.push(check(format!("{name}: 50 modules certified totally reflexive"), certified == 50, format!("{certified}/50")));
    out.push(check(format!("{name}: G-dimension 0 for all 50"), gd0 == 50, format!("{gd0}/50")));
    out.push(check(format!("{name}: complete resolutions exact and dual exact"), complete == 50, format!("{complete}/50")));
    Ok(())
}

fn gorenstein_world() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    gorenstein_ring(&mut out, "F2[x]/(x³)", &LocalAlgebra::<F2>::truncated_polynomial(3)?, 1000)?;
    gorenstein_ring(&mut out, "F3[x]/(x²)", &LocalAlgebra::<F3>::truncated_polynomial(2)?, 2000)?;
    Ok(out)
}

fn horseshoe_on<S: Scalar>(a: &Arc<LocalAlgebra<S>>, seeds: std::ops::Range<u64>) -> Result<(usize, usize, Vec<String>)> {
    let (mut tried, mut passed) = (0, 0);
    let mut bad = Vec::new();
    let dr = a.dim();
    for seed in seeds {
        let c = random_module(a, 2, 2, seed);
        let left = random_module(a, 2, 2, seed + 10_000);
        let space = Ext1Space::new(&c, &left)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cls: Vec<S> = (0..space.dim()).map(|_| S::random(&mut rng)).collect();
        let ses = space.extension_middle_term(&space.representative(&cls))?;
        tried += 1;
        let hs = horseshoe_syzygy(&ses)?;
        let ob = minimal_free_cover(ses.middle())?.kernel;
        let ok = hs.ses.check().is_ok()
            && hs.ses.middle().dim() == ob.dim() + hs.free_rank * dr
            && hs.ses.middle().dim() == hs.ses.left().dim() + hs.ses.right().dim()
            && hs.ses.left() == &syzygy(&left, 1)?
            && hs.ses.right() == &syzygy(&c, 1)?;
        if ok {
            passed += 1;
        } else {
            bad.push(format!("seed {seed}"));
        }
    }
    Ok((tried, passed, bad))
}

fn horseshoe_suite() -> Result<Vec<Check>> {
    let (t1, p1, b1) = horseshoe_on(&LocalAlgebra::<F2>::square_zero(2)?, 0..25)?;
    let (t2, p2, b2) = horseshoe_on(&LocalAlgebra::<F2>::truncated_polynomial(3)?, 100..125)?;
    Ok(vec![check(
        "50 horseshoe sequences exact with H = ΩB ⊕ R^g bookkeeping",
        t1 + t2 == 50 && p1 + p2 == 50,
        format!("{}/{} pass; failures {:?}", p1 + p2, t1 + t2, [b1, b2].concat()),
    )])
}

fn transfer_checks<S: Scalar>(
    out: &mut Vec<Check>,
    label: &str,
    certs: &[ReducingSequence<S>],
    with_ring: bool,
) -> Result<usize> {
    let mut applicable = 0;
    let mut failures = Vec::new();
    for (i, seq) in certs.iter().enumerate() {
        let m = &seq.base;
        let mut targets = vec![m.clone()];
        if with_ring {
            targets.push(Module::free(m.algebra(), 1));
        }
        for n in &targets {
            if !matches!(p_invariant(m, n, 10)?, PValue::Finite(_)) {
                continue;
            }
            applicable += 1;
            let rep = check_p_transfer(seq, n, 10)?;
            if !rep.passed() {
                failures.push(format!("certificate {i}"));
            }
        }
    }
    out.push(check(
        format!("{label}: P preserved along certificates"),
        failures.is_empty(),
        format!("{applicable} applicable pairs; failures {failures:?}"),
    ));
    Ok(applicable)
}

fn p_transfer() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let a = LocalAlgebra::<F2>::square_zero(2)?;
    let mut certs = vec![rebase_certificate(&plane_certificate()?, &a)?];
    for (_, m) in structure_sample(&a)? {
        if let Some(s) = search(&m, &standard_bounds(), Target::Pd)?.sequence {
            certs.push(s);
        }
    }
    for e in [2, 3] {
        let b = LocalAlgebra::<F2>::square_zero(e)?;
        let cfg = SearchConfig { max_a: 9, ..standard_bounds() };
        if let Some(s) = search(&Module::simple(&b), &cfg, Target::Pd)?.sequence {
            transfer_checks(&mut out, &format!("F2, e = {e}, k"), &[s], false)?;
        }
    }
    let n1 = transfer_checks(&mut out, "k[x,y]/(x,y)² certificates", &certs, false)?;
    let g = LocalAlgebra::<F2>::truncated_polynomial(3)?;
    let mut gcerts = Vec::new();
    for seed in 0..20 {
        let m = random_module(&g, 3, 3, 5000 + seed);
        if let Some(s) = search(&m, &standard_bounds(), Target::Pd)?.sequence {
            gcerts.push(s);
        }
    }
    let n2 = transfer_checks(&mut out, "k[x]/(x³) certificates", &gcerts, true)?;
    out.push(check("some pairs satisfy the hypothesis", n1 + n2 > 0, format!("{n1} + {n2}")));
    Ok(out)
}

fn transfer_round_trip() -> Result<Vec<Check>> {
    let g = LocalAlgebra::<F2>::truncated_polynomial(3)?;
    let (mut forward, mut back, mut nontrivial) = (0, 0, 0);
    let mut failures = Vec::new();
    for seed in 0..20 {
        let n = random_module(&g, 3, 3, 7000 + seed);
        let Some(seq) = search(&n, &standard_bounds(), Target::Pd)?.sequence else {
            failures.push(format!("seed {seed}: no certificate"));
            continue;
        };
        if !seq.is_empty() {
            nontrivial += 1;
        }
        let shifted = match transform_syzygy(&seq, 10) {
            Ok(s) if verify(&s, 10)?.accepted() => s,
            other => {
                failures.push(format!("seed {seed}: syzygy transfer {:?}", other.err()));
                continue;
            }
        };
        forward += 1;
        let id = Matrix::identity(shifted.base.dim());
        match transform_cosyzygy(&shifted, &n, &id, 10) {
            Ok(s) if verify(&s, 10)?.accepted() && s.base == n => back += 1,
            other => failures.push(format!("seed {seed}: cosyzygy transfer {:?}", other.err())),
        }
    }
    Ok(vec![
        check("syzygy transfer verifies for 20 modules", forward == 20, format!("{forward}/20")),
        check("cosyzygy transfer returns verifying sequences", back == 20, format!("{back}/20; {failures:?}")),
        check("some certificates have r >= 1", nontrivial > 0, format!("{nontrivial}")),
    ])
}

fn canonical_consistency() -> Result<Vec<Check>> {
    let cfg = standard_bounds();
    let g = LocalAlgebra::<F2>::truncated_polynomial(3)?;
    let p = LocalAlgebra::<F2>::square_zero(2)?;
    let mut out = Vec::new();
    for (name, a) in [("F2[x]/(x³)", g), ("F2[x,y]/(x,y)²", p)] {
        let rep = check_cor33(&a, 10, &cfg)?;
        for c in rep.conclusions {
            out.push(check(format!("{name}: {}", c.name), c.passed, c.detail));
        }
    }
    Ok(out)
}

fn t2_for<S: Scalar>(out: &mut Vec<Check>, name: &str, a: &Arc<LocalAlgebra<S>>) -> Result<()> {
    let r = Module::free(a, 1);
    let cfg = standard_bounds();
    // an r = 1 certificate for R: 0 -> R² -> R² -> Ω R = 0 -> 0
    let step = ReducingStep {
        a: 2,
        b: 1,
        n: 1,
        module: Module::free(a, 2),
        alpha: Matrix::identity(2 * a.dim()),
        quotient: Module::zero(a),
        beta: Matrix::zeros(0, 2 * a.dim()),
        iso: Matrix::zeros(0, 0),
    };
    let mut certs = vec![
        ReducingSequence::trivial(&r, Target::Pd),
        ReducingSequence { base: r.clone(), target: Target::Pd, steps: vec![step] },
    ];
    if a.is_gorenstein() {
        let w = canonical_module(a);
        for target in [Target::Pd, Target::Gdim] {
            if let Some(s) = search(&w, &cfg, target)?.sequence {
                certs.push(s);
            } else {
                out.push(check(format!("{name}: certificate for ω ({target})"), false, "search absent"));
            }
        }
    }
    for seq in certs {
        let m = seq.base.clone();
        let label = if m == r { "R" } else { "ω" };
        let rep = check_t2(&m, &seq, 10)?;
        let exhibited = rep.witnesses.len() == 2 * (seq.len() + 1);
        out.push(check(
            format!("{name}: M = {label}, r = {}, target {}", seq.len(), seq.target),
            rep.passed() && exhibited,
            format!("{:?}", rep.counterexample),
        ));
    }
    Ok(())
}

fn summands() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    t2_for(&mut out, "F2[x,y]/(x,y)²", &LocalAlgebra::<F2>::square_zero(2)?)?;
    t2_for(&mut out, "F2[x]/(x³)", &LocalAlgebra::<F2>::truncated_polynomial(3)?)?;
    t2_for(&mut out, "F3[x]/(x²)", &LocalAlgebra::<F3>::truncated_polynomial(2)?)?;
    Ok(out)
}

fn dual_numbers_periodic() -> Result<Vec<Check>> {
    let a = LocalAlgebra::<F2>::truncated_polynomial(2)?;
    let k = Module::simple(&a);
    let per = resolve(&k, 4)?.detect_periodicity()?;
    Ok(vec![check("k has period (0, 1)", per == Some((0, 1)), format!("{per:?}"))])
}

fn cyclic_not_reducible() -> Result<Vec<Check>> {
    let a = LocalAlgebra::<F2>::square_zero(2)?;
    let m = Module::cyclic_quotient(&a, a.variable(0));
    let pd = search(&m, &standard_bounds(), Target::Pd)?.sequence.is_none();
    let gd = search(&m, &standard_bounds(), Target::Gdim)?.sequence.is_none();
    Ok(vec![check("no PD or GDIM certificate within bounds", pd && gd, "")])
}

fn random_shapes() -> Result<Vec<Check>> {
    let a = LocalAlgebra::<F2>::square_zero(2)?;
    let same = random_module(&a, 3, 3, 42) == random_module(&a, 3, 3, 42);
    let free = random_module(&a, 3, 0, 9);
    let mut outside = 0;
    for seed in 0..30 {
        if free_plus_residue_shape(&random_module(&a, 3, 3, seed))?.is_none() {
            outside += 1;
        }
    }
    Ok(vec![
        check("deterministic per seed", same, ""),
        check("no relations gives a free module", free == Module::free(&a, free.dim() / a.dim()), ""),
        check("some samples are not R^α ⊕ k^β", outside > 0, format!("{outside}/30")),
    ])
}

/// One row of the exploration table.
#[derive(Clone, Debug, Serialize)]
pub struct ExplorationRow {
    pub ring: String,
    pub sampled: usize,
    pub certified: usize,
    pub fraction: f64,
}

/// For each ring, the share of sampled modules with a PD certificate within `cfg`.
pub fn explore_q22<S: Scalar>(
    family: &[(String, Arc<LocalAlgebra<S>>)],
    samples: usize,
    cfg: &SearchConfig,
) -> Result<Vec<ExplorationRow>> {
    family
        .iter()
        .map(|(name, a)| {
            let mut certified = 0;
            for seed in 0..samples as u64 {
                let m = random_module(a, 3, 3, seed);
                if search(&m, cfg, Target::Pd)?.sequence.is_some() {
                    certified += 1;
                }
            }
            Ok(ExplorationRow {
                ring: name.clone(),
                sampled: samples,
                certified,
                fraction: if samples == 0 { 0.0 } else { certified as f64 / samples as f64 },
            })
        })
        .collect()
}
