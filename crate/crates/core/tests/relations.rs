use berezin_core::berezin::{check_berezin_relations, gen_d, gen_f};
use berezin_core::conformal::{stray_bands, witt_defect, witt_defect_operator};
use berezin_core::quantize::{product_defect_operator, Symbol};
use berezin_core::{BandOperator, Weight};

fn w(p: i64, q: i64) -> Weight {
    Weight::from_frac(p, q).unwrap()
}

#[test]
fn berezin_relations_at_sampled_weights() {
    for h in [w(3, 4), w(1, 1), w(3, 2), w(5, 1), w(101, 200)] {
        let c = check_berezin_relations(&h);
        assert!(c.passed(), "h = {h}");
        let (d, f) = (gen_d(&h), gen_f(&h));
        for p in [d.mul(&f).unwrap(), f.mul(&d).unwrap()] {
            assert_eq!(p.bands().keys().collect::<Vec<_>>(), vec![&0], "h = {h}");
        }
        assert_eq!(d.adjoint(), f);
        assert_eq!(f.adjoint(), d);
    }
}

#[test]
fn classical_direction_shrinks_the_commutator() {
    let norms: Vec<f64> = [1, 2, 4, 8, 16]
        .iter()
        .map(|&h| {
            let h = w(h, 1);
            gen_d(&h).commutator(&gen_f(&h)).unwrap().hs_report(4096).unwrap().hs_norm()
        })
        .collect();
    assert!(norms.windows(2).all(|p| p[1] < p[0]), "{norms:?}");
}

#[test]
fn witt_defects_are_hilbert_schmidt() {
    for h in [w(3, 4), w(1, 1)] {
        for m in -3..=3 {
            for n in -3..=3 {
                let d = witt_defect(m, n, &h, 64).unwrap();
                assert!(d.report.hs_verdict, "h = {h}, ({m},{n}): {:?}", d.defect);
                assert!(d.report.bands.iter().all(|b| b.decay.at_least(2)));
                assert!(stray_bands(&d).is_empty());
            }
        }
    }
}

#[test]
fn witt_defects_are_finite_rank_at_half() {
    let h = Weight::half();
    for m in -3..=3 {
        for n in -3..=3 {
            let d = witt_defect_operator(m, n, &h).unwrap();
            assert!(d.is_finite_rank(), "({m},{n}): {d:?}");
        }
    }
}

/// Reports over a spread of operators must satisfy `partial(2N) ≤ partial(N) + tail(N)`.
#[test]
fn hs_bracketing() {
    let mut ops: Vec<BandOperator> = Vec::new();
    for h in [w(1, 2), w(9, 16), w(3, 4), w(1, 1), w(3, 1)] {
        ops.push(gen_d(&h).commutator(&gen_f(&h)).unwrap());
        ops.push(product_defect_operator(&Symbol::monomial(-1), &Symbol::monomial(1), &h));
        ops.push(product_defect_operator(&Symbol::monomial(2), &Symbol::monomial(-1), &h));
        for (m, n) in [(2, -2), (3, -1), (-3, 2), (1, 3)] {
            ops.push(witt_defect_operator(m, n, &h).unwrap());
        }
    }
    for op in &ops {
        for n in [8, 64, 500] {
            let a = op.hs_report(n).unwrap();
            if !a.hs_verdict {
                continue;
            }
            let b = op.hs_report(2 * n).unwrap();
            let bound = a.hs_norm_sq.partial_sum + a.hs_norm_sq.tail_bound;
            assert!(b.hs_norm_sq.partial_sum <= bound, "N = {n}: {} > {bound} for {op:?}", b.hs_norm_sq.partial_sum);
            assert!(b.hs_norm_sq.partial_sum >= a.hs_norm_sq.partial_sum);
        }
    }
}
