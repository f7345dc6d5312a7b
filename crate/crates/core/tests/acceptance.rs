//! The acceptance criteria at exact tolerance, one line each.

use rhdim::corpus::acceptance_criteria;

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for fixture in acceptance_criteria() {
        let report = fixture.run();
        let verdict = if report.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {} ({:.2} s): {}", report.name, report.seconds, fixture.description);
        for c in &report.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            println!("    [{mark}] {} {}", c.name, c.detail);
        }
        if !report.passed {
            failed.push(report.name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

mod exploration {
    use rhdim::algebra::LocalAlgebra;
    use rhdim::corpus::{explore_q22, random_module, standard_bounds};
    use rhdim::module::free_plus_residue_shape;
    use rhdim::F2;

    #[test]
    fn dual_numbers_are_fully_certified() {
        let a = LocalAlgebra::<F2>::truncated_polynomial(2).unwrap();
        let rows = explore_q22(&[("k[x]/(x²)".to_string(), a)], 30, &standard_bounds()).unwrap();
        assert_eq!(rows[0].certified, 30);
        assert_eq!(rows[0].fraction, 1.0);
    }

    #[test]
    fn plane_fraction_matches_structure_test() {
        let a = LocalAlgebra::<F2>::square_zero(2).unwrap();
        let shaped = (0..40u64)
            .filter(|&s| free_plus_residue_shape(&random_module(&a, 3, 3, s)).unwrap().is_some())
            .count();
        let rows = explore_q22(&[("k[x,y]/(x,y)²".to_string(), a)], 40, &standard_bounds()).unwrap();
        assert_eq!(rows[0].certified, shaped);
    }

    #[test]
    fn empty_family() {
        assert!(explore_q22::<F2>(&[], 10, &standard_bounds()).unwrap().is_empty());
    }
}
