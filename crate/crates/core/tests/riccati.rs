use evanslab::evans_closed_form::{evans_example1, evans_example4};
use evanslab::linearization::*;
use evanslab::model::*;
use evanslab::numerics::{polynomial_roots, winding_number, Contour};
use evanslab::riccati_evans::*;
use evanslab::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn problem(id: u8, p: CatalogParams) -> SpectralProblem {
    let (g, w) = catalog(id, &p).unwrap();
    SpectralProblem::build(&g, &w, SpectralCase::for_parameters(w.d, w.c)).unwrap()
}

fn with_default_chart(sp: SpectralProblem) -> SpectralProblem {
    let chart = default_chart(&sp);
    sp.with_chart(chart).unwrap()
}

fn same_roots(a: Vec<C>, b: Vec<C>, tol: f64) -> bool {
    // greedy matching is enough for simple, well-separated roots
    let mut b = b;
    a.iter().all(|x| match b.iter().position(|y| (x - y).norm() < tol * (1.0 + x.norm())) {
        Some(i) => {
            b.swap_remove(i);
            true
        }
        None => false,
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn conjugate_symmetry(pick in 0usize..3, d in 0.3..2.5f64, re in 0.5..6.0f64, im in 0.1..6.0f64) {
        let (id, params) = match pick {
            0 => (7u8, CatalogParams::default().with_d(d)),
            1 => (8, CatalogParams::default().with_d(d)),
            _ => (9, CatalogParams::default().with_d(if (d - 1.0).abs() < 0.05 { 0.5 } else { d }).with_c(0.3 + d)),
        };
        let sp = problem(id, params);
        let opts = EvansOptions::default();
        let l = C::new(re, im);
        let (up, down) = match (evaluate(&sp, l, &opts), evaluate(&sp, l.conj(), &opts)) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            (Err(Error::Pole { .. }), _) | (_, Err(Error::Pole { .. })) => return Ok(()),
            (a, b) => panic!("{a:?} {b:?}"),
        };
        prop_assert!((down - up.conj()).norm() <= 1e-6 * up.norm(), "example {} at {}: {} vs {}", id, l, up, down);
    }

    #[test]
    fn roots_do_not_depend_on_the_chart(seed in any::<u64>()) {
        // equal-diffusivity standing pulse: simple eigenvalue at 5
        let sp = problem(7, CatalogParams::default().with_d(1.0));
        let chart = Chart::random_unitary(4, seed);
        let sp = sp.with_chart(chart).unwrap();
        let opts = EvansOptions::default();
        let at = |x: f64| evaluate(&sp, C::new(x, 0.0), &opts).map(|v| v.value);
        let (Ok(a), Ok(m), Ok(b)) = (at(4.9), at(5.0), at(5.1)) else { return Ok(()) };
        prop_assert!(m.norm() < 1e-5 * a.norm().max(b.norm()), "seed {}: {} {} {}", seed, a, m, b);
    }

    #[test]
    fn reflection_symmetry_of_the_quartic(
        d in 0.0..3.0f64, c in -3.0..3.0f64, gu in -10.0..10.0f64, gv in -10.0..10.0f64, re in -10.0..10.0f64, im in -10.0..10.0f64,
    ) {
        let far = FarFieldData::uniform(gu, gv);
        let l = C::new(re, im);
        let q = characteristic_quartic(&far, d, c, l, Side::Plus);
        let r = characteristic_quartic(&far, d, -c, l, Side::Plus);
        for k in 0..8 {
            let nu = C::from_polar(0.3 + 0.5 * k as f64, 0.7 * k as f64);
            let scale = q.max_coefficient() * (1.0 + nu.norm()).powi(4);
            prop_assert!((r.eval(-nu) - q.eval(nu)).norm() <= 1e-12 * scale);
        }
        if d > 0.1 {
            let (a, b) = (polynomial_roots(&q).unwrap(), polynomial_roots(&r).unwrap());
            prop_assert!(same_roots(a.iter().map(|z| -z).collect(), b, 1e-6));
        }
    }

    #[test]
    fn scaling_symmetry_of_the_quartic(
        d in 0.05..1.0f64, c in -3.0..3.0f64, gu in -10.0..10.0f64, gv in -10.0..10.0f64, re in -10.0..10.0f64, im in -10.0..10.0f64,
    ) {
        let l = C::new(re, im);
        let q = characteristic_quartic(&FarFieldData::uniform(gu, gv), d, c, l, Side::Plus);
        let s = characteristic_quartic(&FarFieldData::uniform(-gv, -gu), 1.0 / d, c / d.sqrt(), l, Side::Plus);
        for k in 0..8 {
            let nu = C::from_polar(0.3 + 0.5 * k as f64, 0.7 * k as f64);
            let scale = q.max_coefficient() * (1.0 + nu.norm()).powi(4) / d;
            prop_assert!((s.eval(nu * d.sqrt()) - q.eval(nu)).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn winding_is_additive(
        x0 in 0.05..3.0f64, w in 1.0..8.0f64, y0 in -4.0..-0.3f64, h in 0.6..8.0f64, split in 0.2..0.8f64, gamma in 0.05..0.95f64,
    ) {
        let xm = x0 + split * w;
        let samples = |f: &dyn Fn(C) -> C, c: &Contour| -> Vec<C> {
            c.vertices(4000).iter().map(|v| f(v.point)).collect()
        };
        let f1 = |l: C| evans_example1(l).unwrap();
        let f4 = |l: C| evans_example4(l, gamma).unwrap();
        // a meromorphic test function with known zeros and poles in the right half-plane
        let f5 = |l: C| (l - C::new(2.0, 0.5)) * (l - C::new(1.0, -1.0)) / (l - C::new(3.0, 1.0));
        for f in [&f1 as &dyn Fn(C) -> C, &f4, &f5] {
            let whole = Contour::rectangle(x0, x0 + w, y0, y0 + h).unwrap();
            let left = Contour::rectangle(x0, xm, y0, y0 + h).unwrap();
            let right = Contour::rectangle(xm, x0 + w, y0, y0 + h).unwrap();
            let wind = |c: &Contour| winding_number(&samples(f, c)).map(|r| r.0);
            match (wind(&whole), wind(&left), wind(&right)) {
                (Ok(a), Ok(b), Ok(c)) => prop_assert_eq!(a, b + c),
                _ => {} // a zero or pole sits on a contour
            }
        }
    }
}

#[test]
fn riccati_winding_is_additive() {
    // Travelling front of the D = 0 family: one contour split into two halves.
    let sp = with_default_chart(problem(6, CatalogParams::default().with_delta(1.0).with_gamma(0.75)));
    let opts = EvansOptions::default();
    let rect = |a: f64, b: f64| Contour::rectangle(a, b, -3.0, 3.0).unwrap();
    let w = |c: &Contour| winding(&sp, c, 96, &opts).unwrap().winding.unwrap().winding;
    assert_eq!(w(&rect(0.2, 4.0)), w(&rect(0.2, 1.7)) + w(&rect(1.7, 4.0)));
}

#[test]
fn roots_are_the_same_in_every_chart() {
    let sp = problem(8, CatalogParams::default().with_d(0.6));
    let opts = EvansOptions::default();
    let mut found = Vec::new();
    for chart in [Chart::identity(4), Chart::pulse4(), Chart::front4(), Chart::random_unitary(4, 11)] {
        let sp = sp.with_chart(chart).unwrap();
        let report = scan_real(&sp, (0.05, 2.0), 60, &opts).unwrap();
        let roots: Vec<C> = report.roots.iter().map(|r| r.lambda).collect();
        assert_eq!(roots.len(), 1, "{roots:?}");
        found.push(roots[0]);
    }
    for r in &found {
        assert!((r - found[0]).norm() < 1e-6, "{found:?}");
    }
}
