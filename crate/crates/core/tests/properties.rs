//! Cross-module property tests: invariances the theory guarantees, checked
//! on randomized inputs with independent oracles where one exists.

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

use gabor_onb::gram::{
    inner_product, inner_product_closed_form, inner_product_quadrature, TimeFreqPoint,
};
use gabor_onb::lattice::{
    density, normalize_lower_triangular, project_first, ExactMatrix, Lattice2D, ProjectionResult,
};
use gabor_onb::scalar::{ratio, FieldScalar, Rational};
use gabor_onb::signal::SampledSignal;
use gabor_onb::tiling::{fold_mod, tiles_by, IntervalSet};
use gabor_onb::window::{
    apply_chirp, characterize_window, decide_onb, PiecewiseWindow, QuadPhase, Window, WindowPiece,
};
use gabor_onb::zak::{autocorrelation, compute_d, SpectralSamples, SpectralSource, Summation};

fn unimodular_strategy() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    // products of elementary shears stay unimodular with controlled entries
    (any::<[i8; 4]>(), any::<bool>()).prop_map(|(ks, start_lower)| {
        let (mut a, mut b, mut c, mut d) = (1i64, 0i64, 0i64, 1i64);
        let mut lower = start_lower;
        for k in ks {
            let k = (k % 4) as i64;
            if lower {
                // right-multiply by [[1,0],[k,1]]
                let (na, nb) = (a + b * k, b);
                let (nc, nd) = (c + d * k, d);
                (a, b, c, d) = (na, nb, nc, nd);
            } else {
                // right-multiply by [[1,k],[0,1]]
                let (na, nb) = (a, b + a * k);
                let (nc, nd) = (c, d + c * k);
                (a, b, c, d) = (na, nb, nc, nd);
            }
            lower = !lower;
        }
        (a, b, c, d)
    })
}

fn rational_matrix_strategy() -> impl Strategy<Value = ExactMatrix> {
    let entry = (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d));
    (entry.clone(), entry.clone(), entry.clone(), entry)
        .prop_map(|(a, b, c, d)| ExactMatrix::from_rationals(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// π₁ structure and density are lattice invariants: right-multiplying
    /// the basis by a unimodular integer matrix must not change them.
    #[test]
    fn projection_and_density_invariant_under_basis_change(
        m in rational_matrix_strategy(),
        u in unimodular_strategy(),
    ) {
        let det = m.det().unwrap();
        prop_assume!(!det.is_zero());
        let lattice = Lattice2D::exact(m.clone()).unwrap();
        let u_mat = ExactMatrix::from_integers(u.0, u.1, u.2, u.3);
        let changed = Lattice2D::exact(m.mul(&u_mat).unwrap()).unwrap();

        let p1 = project_first(&lattice).unwrap();
        let p2 = project_first(&changed).unwrap();
        prop_assert_eq!(p1, p2);

        let d1 = density(&lattice).unwrap();
        let d2 = density(&changed).unwrap();
        prop_assert_eq!(d1, d2);
    }

    /// For rational lattices the discrete generator equals the gcd of the
    /// two first-row rationals, computed by the independent integer-gcd
    /// oracle gcd(p1·q2, p2·q1)/(q1·q2).
    #[test]
    fn projection_generator_matches_gcd_oracle(
        p1 in -20i64..=20, q1 in 1i64..=16,
        p2 in -20i64..=20, q2 in 1i64..=16,
        c in -5i64..=5, d in -5i64..=5,
    ) {
        prop_assume!(p1 != 0 || p2 != 0);
        let a = ratio(p1, q1);
        let b = ratio(p2, q2);
        // make the matrix nonsingular
        let m = ExactMatrix::from_rationals(
            a, b,
            ratio(c, 1), ratio(d, 1),
        );
        let det = m.det().unwrap();
        prop_assume!(!det.is_zero());
        let lattice = Lattice2D::exact(m).unwrap();

        let gcd_int = num_integer::Integer::gcd(&(p1 * q2), &(p2 * q1));
        let oracle = ratio(gcd_int.abs(), q1 * q2);
        match project_first(&lattice).unwrap() {
            ProjectionResult::Discrete(g) => {
                prop_assert_eq!(g.as_rational().unwrap(), &oracle);
            }
            other => prop_assert!(false, "expected Discrete, got {:?}", other),
        }
    }

    /// Full normalization postcondition on random unimodular bases.
    #[test]
    fn normalization_postconditions(u in unimodular_strategy()) {
        let m = ExactMatrix::from_integers(u.0, u.1, u.2, u.3);
        prop_assume!(m.det().unwrap() == FieldScalar::one());
        let lattice = Lattice2D::exact(m.clone()).unwrap();
        let norm = normalize_lower_triangular(&lattice).unwrap();

        prop_assert!(norm.l.is_lower_triangular());
        prop_assert_eq!(norm.l.det().unwrap(), FieldScalar::one());
        prop_assert_eq!(norm.u.det().unwrap(), FieldScalar::one());
        for entry in [&norm.u.a, &norm.u.b, &norm.u.c, &norm.u.d] {
            prop_assert!(entry.is_integer());
        }
        prop_assert_eq!(m.mul(&norm.u).unwrap(), norm.l.clone());
        match project_first(&lattice).unwrap() {
            ProjectionResult::Discrete(g) => prop_assert_eq!(norm.l.a.clone(), g),
            other => prop_assert!(false, "unexpected projection {:?}", other),
        }
        // L₁₁ · L₂₂ = det = 1
        prop_assert_eq!(
            norm.l.a.try_mul(&norm.l.d).unwrap(),
            FieldScalar::one()
        );
    }
}

fn interval_set_strategy() -> impl Strategy<Value = IntervalSet<Rational>> {
    // up to 5 disjoint intervals with endpoints on the 1/64 grid
    proptest::collection::vec((-128i64..=128, 1i64..=64), 1..=5).prop_map(|raw| {
        let mut intervals = Vec::new();
        let mut cursor = ratio(-3, 1);
        for (num, len_den) in raw {
            let gap = ratio((num.rem_euclid(32)) + 1, 64);
            let len = ratio(len_den, 64);
            let lo = cursor + gap;
            let hi = &lo + &len;
            intervals.push((lo.clone(), hi.clone()));
            cursor = hi;
        }
        IntervalSet::new(intervals).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// fold_mod conserves measure exactly.
    #[test]
    fn fold_conserves_measure(
        omega in interval_set_strategy(),
        a_num in 1i64..=128,
    ) {
        let a = ratio(a_num, 64);
        let profile = fold_mod(&omega, &a).unwrap();
        prop_assert_eq!(profile.weighted_measure(), omega.measure());
    }

    /// tiles_by(Ω, a) forces measure(Ω) = a, and is invariant under rational
    /// translation of Ω.
    #[test]
    fn tiling_necessary_condition_and_translation_invariance(
        omega in interval_set_strategy(),
        a_num in 1i64..=128,
        t_num in -64i64..=64,
    ) {
        let a = ratio(a_num, 64);
        let (tiles, _) = tiles_by(&omega, &a).unwrap();
        if tiles {
            prop_assert_eq!(omega.measure(), a.clone());
        }
        let t = ratio(t_num, 64);
        let shifted = omega.translate(&t);
        let (tiles_shifted, _) = tiles_by(&shifted, &a).unwrap();
        prop_assert_eq!(tiles, tiles_shifted);
    }

    /// Constructed tilings (a partition of [0,a) with pieces thrown to
    /// random translates) are recognized, and the classifier of constructed
    /// row-shifted cube tilings recovers the shifts.
    #[test]
    fn constructed_tiling_recognized(
        cuts in proptest::collection::btree_set(1i64..=63, 0..=4),
        shifts_raw in proptest::collection::vec(-3i64..=3, 5),
    ) {
        // partition [0,1) at cuts/64 and translate piece i by shifts[i]
        let mut boundaries = vec![ratio(0, 1)];
        for c in cuts {
            boundaries.push(ratio(c, 64));
        }
        boundaries.push(ratio(1, 1));
        let mut intervals = Vec::new();
        for (i, w) in boundaries.windows(2).enumerate() {
            let k = ratio(shifts_raw[i % shifts_raw.len()], 1);
            intervals.push((&w[0] + &k, &w[1] + &k));
        }
        let omega = IntervalSet::new(intervals).unwrap();
        let (tiles, profile) = tiles_by(&omega, &ratio(1, 1)).unwrap();
        prop_assert!(tiles, "profile {:?}", profile);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// A verdict of OK forces measure(support) = a and ‖g‖₂ = 1, exactly.
    #[test]
    fn characterize_ok_implies_normalized(
        a_num in 1i64..=8,
        a_den in 1i64..=8,
        quad in -2.0f64..2.0,
        lin in -2.0f64..2.0,
    ) {
        let a = ratio(a_num, a_den);
        let g = PiecewiseWindow::new(vec![WindowPiece {
            lo: ratio(0, 1),
            hi: a.clone(),
            modulus_sq: a.recip(),
            phase: QuadPhase { quad, lin, constant: 0.0 },
        }]).unwrap();
        let verdict = characterize_window(&Window::Piecewise(g.clone()), &a).unwrap();
        prop_assert!(verdict.is_onb_window);
        prop_assert_eq!(g.support().measure(), a);
        prop_assert_eq!(g.norm_sq(), ratio(1, 1));
    }

    /// The characterization never looks at phases: scrambling them leaves
    /// the verdict unchanged.
    #[test]
    fn characterize_is_phase_insensitive(
        phases in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 2),
        wrong_modulus in any::<bool>(),
    ) {
        let m2 = if wrong_modulus { ratio(2, 1) } else { ratio(1, 1) };
        let base: Vec<WindowPiece> = [(0i64, 1i64), (3i64, 4i64)]
            .iter()
            .zip(&phases)
            .map(|(&(lo2, hi2), &(quad, lin, constant))| WindowPiece {
                lo: ratio(lo2, 2),
                hi: ratio(hi2, 2),
                modulus_sq: m2.clone(),
                phase: QuadPhase { quad, lin, constant },
            })
            .collect();
        let zeroed: Vec<WindowPiece> = base
            .iter()
            .map(|p| WindowPiece { phase: QuadPhase::ZERO, ..p.clone() })
            .collect();
        let a = ratio(1, 1);
        let v1 = characterize_window(
            &Window::Piecewise(PiecewiseWindow::new(base).unwrap()), &a).unwrap();
        let v2 = characterize_window(
            &Window::Piecewise(PiecewiseWindow::new(zeroed).unwrap()), &a).unwrap();
        prop_assert_eq!(v1.reason, v2.reason);
    }

    /// U_S is unitary: exact norm preservation for piecewise windows, 1e-10
    /// for sampled ones; and composition follows the matrix product.
    #[test]
    fn chirp_unitarity_and_composition(
        mu1 in 0.5f64..2.0, nu1 in -2.0f64..2.0,
        mu2 in 0.5f64..2.0, nu2 in -2.0f64..2.0,
        negate in any::<bool>(),
    ) {
        let mu1 = if negate { -mu1 } else { mu1 };
        let g = PiecewiseWindow::new(vec![WindowPiece {
            lo: ratio(-1, 2),
            hi: ratio(1, 1),
            modulus_sq: ratio(2, 3),
            phase: QuadPhase { quad: 0.5, lin: -0.25, constant: 0.1 },
        }]).unwrap();
        let win = Window::Piecewise(g);

        let once = apply_chirp(&win, mu1, nu1).unwrap();
        match &once {
            Window::Piecewise(w) => prop_assert_eq!(w.norm_sq(), ratio(1, 1)),
            _ => unreachable!(),
        }

        // sampled route: norm preserved within 1e-10
        let sampled = match &win {
            Window::Piecewise(w) => Window::Sampled(w.to_signal(4.0, 4096)),
            _ => unreachable!(),
        };
        let chirped = apply_chirp(&sampled, mu1, nu1).unwrap();
        match (&sampled, &chirped) {
            (Window::Sampled(a), Window::Sampled(b)) => {
                prop_assert!((a.norm_l2() - b.norm_l2()).abs() < 1e-10);
            }
            _ => unreachable!(),
        }

        // composition = matrix product S₂S₁ parameters, on sampled values
        let two_step = apply_chirp(&apply_chirp(&sampled, mu1, nu1).unwrap(), mu2, nu2).unwrap();
        let combined = apply_chirp(&sampled, mu1 * mu2, nu2 * mu1 + nu1 / mu2).unwrap();
        match (&two_step, &combined) {
            (Window::Sampled(a), Window::Sampled(b)) => {
                prop_assert!(a.same_grid(b));
                for (x, y) in a.values.iter().zip(&b.values) {
                    prop_assert!((x - y).norm() < 1e-10, "{} vs {}", x, y);
                }
            }
            _ => unreachable!(),
        }
    }

    /// decide_onb sees the lattice, not the basis: unimodular basis changes
    /// leave the verdict unchanged.
    #[test]
    fn decide_onb_invariant_under_basis_change(u in unimodular_strategy()) {
        let m = ExactMatrix::from_integers(2, 1, 1, 1);
        let u_mat = ExactMatrix::from_integers(u.0, u.1, u.2, u.3);
        let l1 = Lattice2D::exact(m.clone()).unwrap();
        let l2 = Lattice2D::exact(m.mul(&u_mat).unwrap()).unwrap();
        let g = Window::indicator_unit();
        let v1 = decide_onb(&g, &l1).unwrap();
        let v2 = decide_onb(&g, &l2).unwrap();
        prop_assert_eq!(v1.reason, v2.reason);
        prop_assert_eq!(v1.generator, v2.generator);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// |⟨π(p)g, π(q)g⟩| depends only on the time-frequency difference.
    #[test]
    fn gram_covariance_in_modulus(
        t1 in -1.0f64..1.0, s1 in -2.0f64..2.0,
        t2 in -1.0f64..1.0, s2 in -2.0f64..2.0,
        dt in -1.0f64..1.0, ds in -2.0f64..2.0,
    ) {
        let g = Window::indicator_unit();
        let p = TimeFreqPoint::new(t1, s1);
        let q = TimeFreqPoint::new(t2, s2);
        let p_shift = TimeFreqPoint::new(t1 + dt, s1 + ds);
        let q_shift = TimeFreqPoint::new(t2 + dt, s2 + ds);
        let a = inner_product(&g, p, q).unwrap().norm();
        let b = inner_product(&g, p_shift, q_shift).unwrap().norm();
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    /// Closed form and quadrature agree at h = 1/1024.
    #[test]
    fn closed_form_matches_quadrature(
        quad in -1.5f64..1.5,
        lin in -1.0f64..1.0,
        t in -0.75f64..0.75,
        s in -3.0f64..3.0,
    ) {
        let w = PiecewiseWindow::new(vec![WindowPiece {
            lo: ratio(-1, 2),
            hi: ratio(5, 8),
            modulus_sq: ratio(1, 1),
            phase: QuadPhase { quad, lin, constant: 0.2 },
        }]).unwrap();
        let win = Window::Piecewise(w.clone());
        let p = TimeFreqPoint::new(0.0, 0.0);
        let q = TimeFreqPoint::new(t, s);
        let cf = inner_product_closed_form(&w, p, q).unwrap();
        let qd = inner_product_quadrature(&win, p, q, 1.0 / 1024.0).unwrap();
        prop_assert!((cf - qd).norm() < 1e-8, "{} vs {}", cf, qd);
    }

    /// Chirp invariance of the Gram moduli:
    /// |⟨π(p)g, π(q)g⟩| = |⟨π(Sp)U_Sg, π(Sq)U_Sg⟩|.
    #[test]
    fn gram_chirp_invariance(
        mu in 0.5f64..2.0,
        nu in -2.0f64..2.0,
        t1 in -1.0f64..1.0, s1 in -2.0f64..2.0,
        t2 in -1.0f64..1.0, s2 in -2.0f64..2.0,
    ) {
        let g = Window::indicator_unit();
        let ug = apply_chirp(&g, mu, nu).unwrap();
        let p = TimeFreqPoint::new(t1, s1);
        let q = TimeFreqPoint::new(t2, s2);
        let sp = TimeFreqPoint::new(mu * t1, nu * t1 + s1 / mu);
        let sq = TimeFreqPoint::new(mu * t2, nu * t2 + s2 / mu);
        let lhs = inner_product_quadrature(&g, p, q, 1.0 / 1024.0).unwrap().norm();
        let rhs = inner_product_quadrature(&ug, sp, sq, 1.0 / 1024.0).unwrap().norm();
        prop_assert!((lhs - rhs).abs() < 1e-6, "{} vs {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Discrete Parseval for the raw truncated series: the θ-grid mean of
    /// |D|² equals Σ_k |h_k|² when the grid outruns the truncation.
    #[test]
    fn zak_parseval_raw(seed_re in -1.0f64..1.0, seed_im in -1.0f64..1.0) {
        let k = 100i64;
        let m = 256usize;
        let spec = SpectralSamples::from_fourier_fn(k, 8, SpectralSource::Synthetic, |xi| {
            // smooth decaying synthetic spectrum
            let r = 1.0 / (1.0 + xi * xi);
            Complex64::new(seed_re * r, seed_im * r * (xi * 0.7).sin())
        }).unwrap();
        let zak = compute_d(&spec, 0.3, m, Summation::Raw).unwrap();
        for (i, _) in zak.omega.iter().enumerate().take(4) {
            let grid_mean: f64 = zak.sheets[0][i]
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>() / m as f64;
            let coeff_sum: f64 = (-k..=k)
                .map(|kk| spec.value(kk, i).norm_sqr())
                .sum();
            prop_assert!(
                (grid_mean - coeff_sum).abs() < 1e-10,
                "omega row {}: {} vs {}", i, grid_mean, coeff_sum
            );
        }
    }

    /// r_n computed directly and as the n-th Fourier coefficient of
    /// |D(ω,·)|² agree (the θ-grid outruns twice the truncation).
    #[test]
    fn autocorrelation_two_routes(alpha in -1.0f64..1.0) {
        let k = 60i64;
        let m = 256usize;
        let spec = SpectralSamples::from_fourier_fn(k, 8, SpectralSource::Synthetic, |xi| {
            let r = 1.0 / (1.0 + 0.5 * xi * xi);
            Complex64::new(r, 0.3 * r * (xi).cos())
        }).unwrap();
        let zak = compute_d(&spec, alpha, m, Summation::Raw).unwrap();
        for n in 0..=4i64 {
            let direct = autocorrelation(&spec, alpha, n, 3).unwrap();
            // (1/M) Σ_m |D|² e^{2πinm/M}
            let mut fourier = Complex64::new(0.0, 0.0);
            for (j, v) in zak.sheets[0][3].iter().enumerate() {
                let phase = 2.0 * PI * n as f64 * j as f64 / m as f64;
                fourier += v.norm_sqr() * Complex64::from_polar(1.0, phase);
            }
            fourier /= m as f64;
            prop_assert!(
                (direct - fourier).norm() < 1e-8,
                "n {}: {} vs {}", n, direct, fourier
            );
        }
    }

    /// Coefficient chains c_{m+1} = κ̄e^{2πimα}c_m keep |c_m| constant, so
    /// their partial square-sums grow linearly: never square-summable unless
    /// the seed is zero.
    #[test]
    fn coefficient_chain_obstruction(
        phase in 0.0f64..(2.0 * PI),
        kappa_phase in 0.0f64..(2.0 * PI),
        len in 16usize..128,
    ) {
        let c0 = Complex64::from_polar(1.0, phase);
        let kappa = Complex64::from_polar(1.0, kappa_phase);
        let alpha = std::f64::consts::SQRT_2 / 2.0;
        let chain = gabor_onb::zak::coefficient_chain(c0, kappa, alpha, len);
        for c in &chain {
            prop_assert!((c.norm() - c0.norm()).abs() < 1e-12);
        }
        let partial: f64 = chain.iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((partial - len as f64 * c0.norm_sqr()).abs() < 1e-9 * len as f64);

        let zero_chain = gabor_onb::zak::coefficient_chain(
            Complex64::new(0.0, 0.0), kappa, alpha, len);
        prop_assert!(zero_chain.iter().all(|c| c.norm() == 0.0));
    }
}

/// FrFT properties on random band-limited Gaussian-windowed signals.
fn smooth_signal(coeffs: &[(f64, f64, f64)], t_half: f64, n: usize) -> SampledSignal<f64> {
    SampledSignal::from_fn_symmetric(t_half, n, |t| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(re, im, freq) in coeffs {
            acc += Complex64::new(re, im) * Complex64::from_polar(1.0, 2.0 * PI * freq * t);
        }
        acc * (-PI * t * t).exp()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Unitarity and inversion of the kernel branch.
    #[test]
    fn frft_unitary_and_invertible(
        coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -2.0f64..2.0), 1..=4),
        theta in 0.2f64..1.3,
    ) {
        let n = 1024;
        let f = smooth_signal(&coeffs, 8.0, n);
        prop_assume!(f.norm_l2() > 1e-3);
        let plan = gabor_onb::frft::FrftPlan::<f64>::new(theta, 8.0, n).unwrap();
        let out = plan.transform(&f).unwrap();
        let rel = (out.signal.norm_l2() - f.norm_l2()).abs() / f.norm_l2();
        prop_assert!(rel < 1e-8, "relative norm error {}", rel);

        let back_plan = gabor_onb::frft::FrftPlan::<f64>::new(-theta, 8.0, n).unwrap();
        let back = back_plan.transform(&out.signal).unwrap();
        let mut worst = 0.0f64;
        for (x, y) in back.signal.values.iter().zip(&f.values) {
            worst = worst.max((x - y).norm());
        }
        prop_assert!(worst < 1e-6, "inversion error {}", worst);
    }

    /// Rotation bridge: Gram moduli are preserved when the window moves by
    /// F_θ and the points rotate by R_{-θ}. Checked on the Gaussian h₀ (an
    /// eigenfunction, so F_θ h₀ is computable exactly). The tolerance is the
    /// sampled-path quadrature bound: linear interpolation of the shifted
    /// grid values costs O(h²·g″) ≈ 1e-4 at h = 1/128.
    #[test]
    fn gram_rotation_invariance(
        theta in 0.3f64..1.2,
        t1 in -1.0f64..1.0, s1 in -1.0f64..1.0,
        t2 in -1.0f64..1.0, s2 in -1.0f64..1.0,
    ) {
        let n = 2048;
        let h0: SampledSignal<f64> = gabor_onb::frft::hermite(0, 8.0, n).unwrap();
        let g = Window::Sampled(h0.clone());
        let plan = gabor_onb::frft::FrftPlan::<f64>::new(theta, 8.0, n).unwrap();
        let fg = Window::Sampled(plan.transform(&h0).unwrap().signal);

        let p = TimeFreqPoint::new(t1, s1);
        let q = TimeFreqPoint::new(t2, s2);
        let (sin, cos) = theta.sin_cos();
        // R_{-θ} (t, s)
        let rp = TimeFreqPoint::new(cos * t1 + sin * s1, -sin * t1 + cos * s1);
        let rq = TimeFreqPoint::new(cos * t2 + sin * s2, -sin * t2 + cos * s2);

        let lhs = inner_product(&g, p, q).unwrap().norm();
        let rhs = inner_product(&fg, rp, rq).unwrap().norm();
        prop_assert!((lhs - rhs).abs() < 1e-3, "{} vs {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Product sets of arithmetic progressions have density at most
    /// 1/(d_A·d_B); the estimator must stay within 0.1 of that.
    #[test]
    fn product_progression_density_bound(
        da_num in 2i64..=4,
        db_num in 2i64..=4,
        phi_a in 0.0f64..1.0,
        phi_b in 0.0f64..1.0,
    ) {
        use gabor_onb::density::{upper_beurling_density, PointSet2D};
        use gabor_onb::tiling::Rect;
        let da = da_num as f64 / 2.0;
        let db = db_num as f64 / 2.0;
        let window = Rect::centered_square(20.0);
        let mut points = Vec::new();
        let mut a = phi_a - 25.0;
        while a <= 25.0 {
            if a.abs() <= 20.0 {
                let mut b = phi_b - 25.0;
                while b <= 25.0 {
                    if b.abs() <= 20.0 {
                        points.push([a, b]);
                    }
                    b += db;
                }
            }
            a += da;
        }
        let set = PointSet2D::new(points, window).unwrap();
        let report = upper_beurling_density(&set, &[4.0, 8.0]).unwrap();
        let bound = 1.0 / (da * db);
        prop_assert!(
            report.estimate <= bound + 0.1,
            "estimate {} exceeds {} + 0.1", report.estimate, bound
        );
    }

    /// Classifier round trip: building Λ₁ from a shift sequence and
    /// classifying it recovers the shifts up to the z-normalization.
    #[test]
    fn classify_recovers_constructed_shifts(
        shifts in proptest::collection::vec(0.0f64..1.0, 7),
    ) {
        use gabor_onb::tiling::{classify_cube_tiling, CubeTilingClass};
        let mut points = Vec::new();
        for (row, &s) in shifts.iter().enumerate() {
            let k = row as i64 - 3;
            let s = if k == 0 { 0.0 } else { s };
            for m in -5i64..=5 {
                points.push([m as f64 + s, k as f64]);
            }
        }
        match classify_cube_tiling(&points, 1e-9).unwrap() {
            CubeTilingClass::Lambda1 { shifts: got, .. } => {
                for (row, &want) in shifts.iter().enumerate() {
                    let k = row as i64 - 3;
                    let want = if k == 0 { 0.0 } else { want };
                    let s = got[&k];
                    let d = (s - want).abs();
                    let circ = d.min(1.0 - d);
                    prop_assert!(circ < 1e-9, "row {}: got {}, want {}", k, s, want);
                }
            }
            other => prop_assert!(false, "expected Lambda1, got {:?}", other),
        }
    }
}

/// The spec'd Bezout example: the canonical pair must agree with an
/// exhaustive search over small Bezout pairs.
#[test]
fn bezout_canonical_choice_is_a_valid_small_pair() {
    let m = 2i64;
    let n = 1i64;
    let mut found = Vec::new();
    for r in -3i64..=3 {
        for s in -3i64..=3 {
            if m * r + n * s == 1 {
                found.push((r, s));
            }
        }
    }
    assert!(!found.is_empty());
    // the canonical output (from the [[2,1],[1,1]] normalization) is (0, 1)
    assert!(found.contains(&(0, 1)));
    let lattice = Lattice2D::exact(ExactMatrix::from_integers(2, 1, 1, 1)).unwrap();
    let norm = normalize_lower_triangular(&lattice).unwrap();
    assert_eq!(norm.u, ExactMatrix::from_integers(0, -1, 1, 2));
    assert_eq!(norm.l, ExactMatrix::from_integers(1, 0, 1, 1));
}

/// Oracle for the inversion chirp example: U_S with μ=2 on 1_{[0,1)}, from
/// the explicit adjugate inverse of L = [[1/2,0],[0,2]].
#[test]
fn chirp_params_match_adjugate_inverse() {
    use gabor_onb::lattice::chirp_params;
    let l = ExactMatrix::from_rationals(ratio(2, 1), ratio(0, 1), ratio(0, 1), ratio(1, 2));
    let (mu, nu) = chirp_params(&l).unwrap();
    // adjugate inverse of [[2,0],[0,1/2]] is [[1/2,0],[0,2]]
    let inv = l.inverse().unwrap();
    assert_eq!(inv.a, mu);
    assert_eq!(inv.c, nu.neg());
}
