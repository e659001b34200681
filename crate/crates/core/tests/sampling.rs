use jpc_weibull::data::fiber_jpc;
use jpc_weibull::gof::ks_statistic;
use jpc_weibull::jpc::{simulate_jpc, u_stat, v_stat, CensoringScheme, JointParams};
use jpc_weibull::logconcave::{sample_log_concave, FnTarget, LogConcaveSampler};
use jpc_weibull::rng::*;

// 1% critical value of the Kolmogorov distribution
const KS_CRIT_1PCT: f64 = 1.6276;

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

#[test]
fn weibull_draws_pass_ks_within_budget() {
    let mut rejections = 0;
    let settings = 20;
    for i in 0..settings {
        let alpha = 0.3 + 0.4 * i as f64;
        let lambda = 0.2 + 0.25 * (i % 7) as f64;
        let mut rng = RngStream::new(900 + i);
        let mut xs: Vec<f64> = (0..10_000).map(|_| sample_weibull(alpha, lambda, &mut rng).unwrap()).collect();
        xs.sort_by(f64::total_cmp);
        let d = ks_statistic(&xs, |t| 1.0 - (-lambda * t.powf(alpha)).exp());
        if d * (xs.len() as f64).sqrt() > KS_CRIT_1PCT {
            rejections += 1;
        }
    }
    // expected 0.2 false positives at the 1% level
    assert!(rejections <= 2, "{rejections} rejections");
}

#[test]
fn beta_gamma_moments_match_closed_form() {
    let n = 100_000;
    let settings = [
        (3.0, 1.0, 2.0, 4.0),
        (1.5, 1.0, 2.0, 4.0),
        (6.0, 2.0, 3.0, 3.0),
        (0.7, 0.5, 0.8, 1.6),
        (20.0, 5.0, 10.0, 1.0),
    ];
    for (si, &(a0, b0, a1, a2)) in settings.iter().enumerate() {
        let hyper = BetaGammaHyper::new(a0, b0, a1, a2);
        let mut rng = RngStream::new(40 + si as u64);
        let draws: Vec<(f64, f64)> = (0..n).map(|_| sample_beta_gamma(&hyper, &mut rng).unwrap()).collect();
        let s = a1 + a2;
        for (ai, xs) in [(a1, draws.iter().map(|d| d.0).collect::<Vec<_>>()), (a2, draws.iter().map(|d| d.1).collect())] {
            // E = a0 ai / (b0 s);  E[X^2] = a0 (a0+1) ai (ai+1) / (b0^2 s (s+1))
            let mean = a0 * ai / (b0 * s);
            let second = a0 * (a0 + 1.0) * ai * (ai + 1.0) / (b0 * b0 * s * (s + 1.0));
            let var = second - mean * mean;
            let (m, v) = mean_var(&xs);
            let se_mean = (var / n as f64).sqrt();
            assert!((m - mean).abs() < 4.0 * se_mean, "setting {si}: mean {m} vs {mean}");
            // standard error of the sample variance from the fourth central moment
            let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n as f64;
            let se_var = ((m4 - v * v) / n as f64).sqrt();
            assert!((v - var).abs() < 4.0 * se_var, "setting {si}: var {v} vs {var}");
        }
    }
}

#[test]
fn ordered_minimum_matches_sorted_reference_draws() {
    // symmetric shares: compare the ordered sampler's minimum with the
    // minimum of pairs built from independent gamma and beta draws
    use rand_distr::{Beta, Distribution, Gamma};
    let hyper = BetaGammaHyper::new(4.0, 2.0, 2.5, 2.5);
    let n = 50_000;
    let mut rng = RngStream::new(3);
    let ordered: Vec<f64> = (0..n).map(|_| sample_ordered_beta_gamma(&hyper, &mut rng).unwrap().0).collect();
    let gamma = Gamma::new(4.0, 0.5).unwrap();
    let beta = Beta::new(2.5, 2.5).unwrap();
    let mut other = RngStream::new(99);
    let reference: Vec<f64> = (0..n)
        .map(|_| {
            let l = gamma.sample(&mut other);
            let p: f64 = beta.sample(&mut other);
            (p * l).min((1.0 - p) * l)
        })
        .collect();
    let edges = [0.0, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8, 1.0, 1.3, f64::INFINITY];
    let count = |xs: &[f64]| {
        let mut c = vec![0.0f64; edges.len() - 1];
        for &x in xs {
            let b = edges.windows(2).position(|w| x >= w[0] && x < w[1]).unwrap();
            c[b] += 1.0;
        }
        c
    };
    let (a, b) = (count(&ordered), count(&reference));
    // two-sample chi-square with equal sizes: sum (a-b)^2/(a+b), 8 df
    let chi2: f64 = a.iter().zip(&b).filter(|(x, y)| **x + **y > 0.0).map(|(x, y)| (x - y).powi(2) / (x + y)).sum();
    // 99th percentile of chi-square(8)
    assert!(chi2 < 20.09, "chi2 {chi2}, {a:?} vs {b:?}");
}

#[test]
fn ordered_sum_is_the_total_rate() {
    let hyper = BetaGammaHyper::new(3.0, 1.0, 2.0, 4.0);
    let mut rng = RngStream::new(6);
    let sums: Vec<f64> = (0..100_000)
        .map(|_| {
            let (x, y) = sample_ordered_beta_gamma(&hyper, &mut rng).unwrap();
            assert!(x < y);
            x + y
        })
        .collect();
    let (m, v) = mean_var(&sums);
    assert!((m - 3.0).abs() < 3.0 * (v / sums.len() as f64).sqrt());
}

#[test]
fn log_concave_sampler_is_exact() {
    let mut rng = RngStream::new(21);
    let n = 100_000;

    let g = FnTarget::new(|x: f64| 2.0 * x.ln() - 2.0 * x, |x: f64| 2.0 / x - 2.0);
    let mut s = LogConcaveSampler::new(&g, 0.0).unwrap();
    let xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng).unwrap()).collect();
    let (m, v) = mean_var(&xs);
    assert!((m - 1.5).abs() < 3.0 * (0.75 / n as f64).sqrt(), "mean {m}");
    assert!((v / 0.75 - 1.0).abs() < 0.01, "var {v}");

    // exponential median; the sample median has s.e. 1/(2 f(med) sqrt(n)) = 1/sqrt(n)
    let e = FnTarget::new(|x: f64| -x, |_| -1.0);
    let mut s = LogConcaveSampler::new(&e, 0.0).unwrap();
    let mut xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng).unwrap()).collect();
    xs.sort_by(f64::total_cmp);
    let med = xs[n / 2];
    assert!((med - std::f64::consts::LN_2).abs() < 3.0 / (n as f64).sqrt(), "median {med}");

    // a single draw through the convenience wrapper
    assert!(sample_log_concave(&g, 0.0, &mut rng).unwrap() > 0.0);
}

#[test]
fn non_integrable_target_is_rejected() {
    let flat = FnTarget::new(|x: f64| 0.5 * x.ln(), |x: f64| 0.5 / x);
    assert!(LogConcaveSampler::new(&flat, 0.0).is_err());
}

#[test]
fn first_failure_is_weibull_with_summed_rate() {
    let scheme = CensoringScheme::new(4, 6, vec![1, 2, 4]).unwrap();
    let p = JointParams::new(1.7, 0.4, 1.1).unwrap();
    let rate = 4.0 * 0.4 + 6.0 * 1.1;
    let n = 100_000;
    let mut t1 = Vec::with_capacity(n);
    let mut rng = RngStream::new(77);
    for _ in 0..n {
        t1.push(simulate_jpc(&scheme, &p, &mut rng).unwrap().observations()[0].t);
    }
    t1.sort_by(f64::total_cmp);
    let d = ks_statistic(&t1, |t| 1.0 - (-rate * t.powf(1.7)).exp());
    assert!(d * (n as f64).sqrt() < KS_CRIT_1PCT, "{d}");
}

#[test]
fn equal_rates_make_group_one_first_in_proportion() {
    let (m, n) = (3usize, 5usize);
    let scheme = CensoringScheme::new(m, n, vec![2, 1, 2]).unwrap();
    let p = JointParams::new(0.8, 0.6, 0.6).unwrap();
    let reps = 100_000;
    let mut rng = RngStream::new(8);
    let hits = (0..reps)
        .filter(|_| simulate_jpc(&scheme, &p, &mut rng).unwrap().observations()[0].from_group1)
        .count();
    let q = m as f64 / (m + n) as f64;
    let se = (q * (1.0 - q) / reps as f64).sqrt();
    assert!((hits as f64 / reps as f64 - q).abs() < 3.0 * se);
}

#[test]
fn power_sums_match_compensated_oracle() {
    // term-by-term powers summed with Neumaier compensation
    let s = fiber_jpc().unwrap();
    let alpha = 4.495;
    let neumaier = |terms: &mut dyn Iterator<Item = f64>| {
        let (mut sum, mut c) = (0.0f64, 0.0f64);
        for x in terms {
            let t = sum + x;
            c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
            sum = t;
        }
        sum + c
    };
    let r = s.scheme().removals();
    let obs = s.observations();
    let u = neumaier(&mut obs.iter().map(|o| (o.withdrawn_group1 as f64 + o.from_group1 as u8 as f64) * o.t.powf(alpha)));
    let v = neumaier(
        &mut obs
            .iter()
            .zip(r)
            .map(|(o, &rj)| ((rj - o.withdrawn_group1) as f64 + (!o.from_group1) as u8 as f64) * o.t.powf(alpha)),
    );
    assert!((u_stat(&s, alpha) / u - 1.0).abs() < 1e-10, "{} vs {u}", u_stat(&s, alpha));
    assert!((v_stat(&s, alpha) / v - 1.0).abs() < 1e-10);
}

#[test]
fn hypergeometric_counts_are_bounded() {
    let mut rng = RngStream::new(5);
    for _ in 0..10_000 {
        let s = sample_hypergeometric(7, 4, 5, &mut rng).unwrap();
        assert!((1..=5).contains(&s));
    }
    assert!(sample_hypergeometric(2, 2, 5, &mut rng).is_err());
}
