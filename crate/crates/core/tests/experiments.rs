use keygraph::analytic::{self, MatchMode};
use keygraph::experiments::{
    estimate_beta_mc, moment_check, zero_one_sweep, Estimate, McConfig, ScalingFamily,
};
use keygraph::graphgen::{sample_er, sample_rkg, Seed};
use keygraph::metrics::count_triangles;
use keygraph::Theta;

#[test]
fn beta_mc_at_table_scale() {
    let t = Theta::new(4, 1000).unwrap();
    let est = estimate_beta_mc(t, &McConfig::new(1_000_000, Seed::new(11))).unwrap();
    let beta = analytic::triangle_probability(t).value();
    assert!(est.within(beta, 3.0), "{est:?} vs {beta}");
}

#[test]
fn expected_triangle_counts_at_table_scale() {
    let t = Theta::new(4, 1000).unwrap();
    let n = 1000;
    let rkg: Vec<f64> = (0..100)
        .map(|i| {
            count_triangles(&sample_rkg(n, t, &mut Seed::new(12).rng(i))).total_triangles as f64
        })
        .collect();
    let want = analytic::expected_triangles_rkg(n as u64, t).unwrap();
    let est = Estimate::from_samples(&rkg);
    assert!(est.within(want, 3.0), "{est:?} vs {want}");

    let p = analytic::matched_edge_probability(t, MatchMode::Exact);
    let er: Vec<f64> = (0..100)
        .map(|i| {
            count_triangles(&sample_er(n, p, &mut Seed::new(13).rng(i))).total_triangles as f64
        })
        .collect();
    let want_er = analytic::expected_triangles_er(n as u64, p).unwrap();
    let est = Estimate::from_samples(&er);
    assert!(est.within(want_er, 3.0), "{est:?} vs {want_er}");
    assert!(want > want_er);
}

#[test]
fn zero_one_monotone_trends() {
    let ns = [200u64, 400, 800];
    let cfg = McConfig::new(300, Seed::new(14));
    let zero = ScalingFamily::Explicit {
        table: ns.iter().map(|&n| (n, 1, n * n)).collect(),
    };
    let one = ScalingFamily::Explicit {
        table: ns.iter().map(|&n| (n, 1, n)).collect(),
    };
    let z = zero_one_sweep(&zero, &ns, &cfg).unwrap();
    let o = zero_one_sweep(&one, &ns, &cfg).unwrap();
    for w in z.windows(2) {
        let band = 4.0 * (w[0].triangle_prob_se + w[1].triangle_prob_se).max(1.0 / 300.0);
        assert!(w[1].empirical_triangle_prob <= w[0].empirical_triangle_prob + band);
        assert!(w[1].n3_tau < w[0].n3_tau);
    }
    for w in o.windows(2) {
        let band = 4.0 * (w[0].triangle_prob_se + w[1].triangle_prob_se).max(1.0 / 300.0);
        assert!(w[1].empirical_triangle_prob + band >= w[0].empirical_triangle_prob);
        assert!(w[1].n3_tau > w[0].n3_tau);
    }
    for r in z.iter().chain(&o) {
        let mean = Estimate {
            value: r.mean_triangles,
            std_error: r.mean_triangles_se,
        };
        assert!(
            mean.within(r.expected_triangles, 4.0) || r.mean_triangles_se == 0.0,
            "{r:?}"
        );
    }
}

#[test]
fn moment_check_reports_are_consistent() {
    let r = moment_check(
        20,
        Theta::new(3, 40).unwrap(),
        &McConfig::new(20_000, Seed::new(15)),
    )
    .unwrap();
    assert!(r.all_ok(), "{r:?}");
    let r = moment_check(
        4,
        Theta::new(1, 3).unwrap(),
        &McConfig::new(100, Seed::new(16)),
    )
    .unwrap();
    assert!(r
        .exact
        .as_ref()
        .is_some_and(|e| e.mean_matches && e.second_moment_matches));
}
