//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use gibbsnum::baser::{self, BaseRParams};
use gibbsnum::exactfield::rational::{self, int, rat};
use gibbsnum::gibbs::{self, FirstSymbolPotential, PhiValue};
use gibbsnum::golden::{self, GoldenParams, Target};
use gibbsnum::matmeasure::{self, Builtin, MatrixMeasureSpec};
use gibbsnum::numeration::{self, AdmissibleBinaryWord, PeriodicWord, TernaryCode};
use gibbsnum::stochlimit::{self, LawClass, RowStochasticFamily};
use gibbsnum::{Matrix, QuadraticNumber as Q, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|k| rat(k, total)).collect()
}

fn all_words(alphabet: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u8>| {
                (0..alphabet).map(move |d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

fn c1_exact_identities() -> Outcome {
    let markov = Builtin::Markov {
        transition: Matrix::from_ratios(&[[(1, 3), (2, 3)], [(1, 2), (1, 2)]]),
        stationary: vec![rat(3, 7), rat(4, 7)],
    };
    let mut specs: Vec<(String, MatrixMeasureSpec)> = vec![
        ("mu3(2)".into(), matmeasure::builtin(&Builtin::Mu3(2)).unwrap()),
        ("mu3(3)".into(), matmeasure::builtin(&Builtin::Mu3(3)).unwrap()),
        ("mu4".into(), matmeasure::builtin(&Builtin::Mu4).unwrap()),
        ("bernoulli".into(), matmeasure::builtin(&Builtin::Bernoulli(vec![rat(1, 5), rat(3, 10), rat(1, 2)])).unwrap()),
        ("markov".into(), matmeasure::builtin(&markov).unwrap()),
    ];
    let p2 = BaseRParams::new(2, vec![rat(1, 4), rat(1, 2), rat(1, 4)]).unwrap();
    let p3 = BaseRParams::new(3, vec![rat(1, 10), rat(2, 10), rat(3, 10), rat(1, 10), rat(3, 10)]).unwrap();
    specs.push(("baser r=2".into(), baser::matrices_from_p(&p2).unwrap()));
    specs.push(("baser r=3".into(), baser::matrices_from_p(&p3).unwrap()));
    let mut failures = Vec::new();
    for (name, spec) in &specs {
        let a = spec.alphabet_size() as u8;
        for n in 0..=10 {
            let words = all_words(a, n);
            let mut total = Rational::zero();
            for w in &words {
                let m = spec.cylinder_measure(w).unwrap();
                total += &m;
                if n < 10 {
                    let children: Rational = (0..a)
                        .map(|d| {
                            let mut c = w.clone();
                            c.push(d);
                            spec.cylinder_measure(&c).unwrap()
                        })
                        .sum();
                    if children != m {
                        failures.push(format!("{name}: additivity at {w:?}"));
                    }
                }
            }
            if !total.is_one() {
                failures.push(format!("{name}: total mass at n={n} is {total}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} specs, n <= 10, failures: {:?}", specs.len(), failures.iter().take(3).collect::<Vec<_>>()),
    )
}

fn c2_mu4_counterexample() -> Outcome {
    let spec = matmeasure::mu4();
    let ratio = |n: usize| {
        let mut w = vec![1u8; n];
        w.extend(std::iter::repeat_n(0, n));
        gibbs::quasi_bernoulli_ratio_with_root(&spec, &w, n, n).unwrap()
    };
    let (r20, r40) = (ratio(20), ratio(40));
    // oracle: M0^n = 4^{-n}·N with N = [[0,0],[1,1]], N² = N
    let m1 = Matrix::from_ratios(&[[(1, 1), (0, 1)], [(1, 4), (1, 4)]]);
    let half = vec![rat(1, 2), rat(1, 2)];
    let ones = vec![int(1), int(1)];
    let oracle = |n: usize| {
        let m1n = m1.pow(n as u32);
        let nv = Matrix::from_ratios(&[[(0, 1), (0, 1)], [(1, 1), (1, 1)]]).mul_vec(&ones);
        let whole = gibbsnum::exactfield::dot(&half, &m1n.mul_vec(&nv)) * rational::pow_i(&int(4), -(n as i64));
        let left = gibbsnum::exactfield::dot(&half, &m1n.mul_vec(&ones));
        let right = gibbsnum::exactfield::dot(&half, &nv) * rational::pow_i(&int(4), -(n as i64));
        (rational::ln_rational(&(whole / (left * right))) / n as f64).exp()
    };
    let mu1n = spec.cylinder_measure(&[1; 40]).unwrap();
    let ok = (r20 - 0.25).abs() <= 0.02
        && (r40 - 0.25).abs() <= 0.005
        && (r20 - oracle(20)).abs() < 1e-12
        && (r40 - oracle(40)).abs() < 1e-12
        && (rational::to_f64(&mu1n) - 2.0 / 3.0).abs() < 1e-6;
    outcome(ok, format!("ratio(20) = {r20:.6}, ratio(40) = {r40:.6}, mu4[1^40] = {:.8}", rational::to_f64(&mu1n)))
}

fn c3_mu3_potential() -> Outcome {
    let spec = matmeasure::mu3(2).unwrap();
    let phi = |w: &[u8]| gibbs::phi_n(&spec, w).unwrap().to_f64();
    let ones = phi(&[1; 30]);
    let e1 = (ones - 0.75f64.ln()).abs();
    let s_infinite = [
        ("0^inf", PeriodicWord::new(vec![], vec![0]).unwrap()),
        ("10^inf", PeriodicWord::new(vec![1], vec![0]).unwrap()),
        ("1110^inf", PeriodicWord::new(vec![1, 1, 1], vec![0]).unwrap()),
    ];
    let mut limits = Vec::new();
    let mut ok = e1 <= 1e-6;
    for (name, w) in &s_infinite {
        // the error decays like 1/n: require it to shrink by more than 3.5
        // from n = 1000 to n = 4000 and to end below 0.01
        let err = |n: usize| (phi(&w.take(n)) - 0.25f64.ln()).abs();
        let (e1000, e4000) = (err(1000), err(4000));
        ok &= e4000 < e1000 / 3.5 && e4000 < 0.01;
        limits.push(format!("{name}: error {e1000:.1e} at n=1000, {e4000:.1e} at n=4000"));
    }
    let potential = FirstSymbolPotential::mu3(2);
    let list = gibbs::probes(&gibbs::ProbeStrategy::Default { random: 4, seed: 0 }, 2, 50);
    let mut worst = (String::new(), 1.0f64);
    for p in &list {
        let r = gibbs::weak_gibbs_ratio(&spec, |w| potential.eval(w), &p.digits[..50]).unwrap();
        if (r - 1.0).abs() > (worst.1 - 1.0).abs() {
            worst = (p.name.clone(), r);
        }
    }
    ok &= (0.99..=1.01).contains(&worst.1);
    outcome(
        ok,
        format!(
            "|phi_30(1^inf) - log(3/4)| = {e1:.2e}; {}; worst weak Gibbs ratio at n=50: {} = {:.5}",
            limits.join(", "),
            worst.0,
            worst.1
        ),
    )
}

fn mul2(a: &[[Q; 2]; 2], b: &[[Q; 2]; 2]) -> [[Q; 2]; 2] {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn c4_backward_products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0usize;
    let mut bad = 0usize;
    for f in 0..20 {
        let size = if f < 10 { 2 } else { 3 };
        let rows: Vec<(Q, Q)> = (0..size)
            .map(|_| {
                let d = rng.random_range(2..=12);
                (Q::ratio(rng.random_range(0..=d), d), Q::ratio(rng.random_range(1..d), d))
            })
            .collect();
        let weights = random_weights(&mut rng, size);
        let family = RowStochasticFamily::new(rows.clone(), weights).unwrap();
        let words: Vec<Vec<u8>> = if size == 2 {
            (0..=12).flat_map(|n| all_words(2, n)).collect()
        } else {
            (0..3000).map(|_| (0..rng.random_range(0..=12)).map(|_| rng.random_range(0..3u8)).collect()).collect()
        };
        let one = Q::from_int(1);
        for w in &words {
            let bp = stochlimit::backward_product(&family, w).unwrap();
            let mut p = [[one.clone(), Q::default()], [Q::default(), one.clone()]];
            for &d in w {
                let (x, y) = &rows[d as usize];
                let m = [[x.clone(), &one - x], [y.clone(), &one - y]];
                p = mul2(&m, &p);
            }
            let det_prod = w.iter().fold(one.clone(), |acc, &d| &acc * &family.det(d).abs());
            let matches = bp.x == p[0][0] && bp.y == p[1][0] && (&bp.x - &bp.y).abs() == det_prod;
            bad += usize::from(!matches);
            checked += 1;
        }
    }
    outcome(bad == 0, format!("{checked} words over 20 families, {bad} mismatches"))
}

fn c5_classifier() -> Outcome {
    let discrete =
        RowStochasticFamily::uniform(vec![(Q::ratio(1, 3), Q::ratio(1, 3)), (Q::ratio(1, 2), Q::ratio(1, 4))]).unwrap();
    let c_disc = stochlimit::classify(&discrete);
    let b4 = RowStochasticFamily::uniform(stochlimit::convolution_family(&Q::from_int(4), 2).unwrap()).unwrap();
    let c4 = stochlimit::classify(&b4);
    let b2 = RowStochasticFamily::uniform(stochlimit::convolution_family(&Q::from_int(2), 2).unwrap()).unwrap();
    let c2 = stochlimit::classify(&b2);
    let ok = c_disc.class == LawClass::Discrete
        && c4.class == LawClass::SingularContinuous
        && c4.product_exact.as_deref() == Some("1/2")
        && c2.class == LawClass::Unknown;
    outcome(
        ok,
        format!(
            "x=y: {:?}; beta=4: {:?} product {:?}; beta=2: {:?}",
            c_disc.class, c4.class, c4.product_exact, c2.class
        ),
    )
}

fn c6_self_similarity() -> Outcome {
    let n = 1_000_000;
    let mut parts = Vec::new();
    let mut ok = true;
    for beta in [2, 4] {
        let family =
            RowStochasticFamily::uniform(stochlimit::convolution_family(&Q::from_int(beta), 2).unwrap()).unwrap();
        let s = stochlimit::sample_lambda(&family, n, 64, 6).unwrap();
        let r = stochlimit::selfsim_residual(&family, &s.values, 16).unwrap();
        ok &= r.residual <= 0.02;
        parts.push(format!("lambda beta={beta}: {:.5}", r.residual));
    }
    let params = BaseRParams::new(2, vec![rat(1, 3), rat(1, 3), rat(1, 3)]).unwrap();
    let sample = baser::sample_x(&params, n, 60, 6).unwrap();
    let r = baser::selfsim_residual_mu(&params, &sample.sorted_values(), 16).unwrap();
    ok &= r.residual <= 0.02;
    parts.push(format!("mu_p r=2: {:.5}", r.residual));
    outcome(ok, format!("{} (bound 0.02, 1/sqrt(n) = {:.4})", parts.join(", "), 1.0 / (n as f64).sqrt()))
}

fn c7_base_r_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tests, mut violations, mut expected) = (0usize, 0usize, 0.0f64);
    let mut worst = 0.0f64;
    for r in [2u32, 3] {
        for i in 0..5 {
            let params = BaseRParams::new(r, random_weights(&mut rng, 2 * r as usize - 1)).unwrap();
            let spec = baser::matrices_from_p(&params).unwrap();
            let sample = baser::sample_x(&params, 1_000_000, 60, 700 + 10 * r as u64 + i).unwrap();
            for len in 0..=6 {
                let table = sample.frac_cylinders(len as u32).unwrap();
                for (w, mc) in all_words(r as u8, len).iter().zip(table) {
                    let exact = rational::to_f64(&spec.cylinder_measure(w).unwrap());
                    tests += 1;
                    if mc.sigma > 0.0 {
                        expected += 0.0027;
                        worst = worst.max(mc.deviation(exact) / mc.sigma);
                    }
                    violations += usize::from(!mc.agrees_with(exact, 3.0));
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("{tests} words, {violations} outside 3 sigma + band (about {expected:.0} expected by chance), worst {worst:.2} sigma"),
    )
}

fn c8_golden_oracles() -> Outcome {
    let h = GoldenParams::new(rat(1, 2), rat(1, 2)).unwrap();
    let empty = AdmissibleBinaryWord::default();
    let init_ok = golden::mu_cylinder_vector(&h, &empty).unwrap() == vec![rat(2, 3), rat(1, 3), rat(2, 3)]
        && golden::mustar_cylinder_vector(&h, &empty).unwrap() == vec![int(1), rat(1, 3), rat(2, 3)];
    let words: Vec<AdmissibleBinaryWord> =
        (0..=6).flat_map(AdmissibleBinaryWord::all_of_length).filter(|w| w.digits().last() != Some(&1)).collect();
    let (mut tests, mut violations, mut expected) = (0usize, 0usize, 0.0f64);
    let mut worst = 0.0f64;
    for (k, p) in [rat(1, 2), rat(2, 3)].into_iter().enumerate() {
        let params = GoldenParams::from_p(p).unwrap();
        for (t, target) in [Target::Mu, Target::Mustar].into_iter().enumerate() {
            let sample = golden::sample_golden(&params, target, 1_000_000, 60, 800 + 10 * k as u64 + t as u64).unwrap();
            for w in &words {
                let v = golden::cylinder_vector(&params, target, w);
                for (c, exact) in v.values.iter().enumerate() {
                    let exact = rational::to_f64(exact);
                    let mc = sample.estimate_set(w, c);
                    tests += 1;
                    if mc.sigma > 0.0 {
                        expected += 0.0027;
                        worst = worst.max(mc.deviation(exact) / mc.sigma);
                    }
                    violations += usize::from(!mc.agrees_with(exact, 3.0));
                }
            }
        }
    }
    outcome(
        init_ok && violations == 0,
        format!(
            "initial vectors {}; {tests} set masses, {violations} outside 3 sigma + band (about {expected:.0} expected by chance), worst {worst:.2} sigma",
            if init_ok { "exact" } else { "WRONG" }
        ),
    )
}

fn brute_product(a: &[u32], params: &GoldenParams) -> Matrix {
    let [a0, _, a2] = golden::astar(params);
    a.iter().enumerate().fold(Matrix::identity(3), |acc, (i, &k)| {
        let m = if i % 2 == 0 { &a0 } else { &a2 };
        &acc * &m.pow(k)
    })
}

fn c9_continued_fractions() -> Outcome {
    let mut failures = Vec::new();
    let mut identities = 0usize;
    for p in [rat(2, 3), rat(3, 5), rat(4, 5)] {
        let params = GoldenParams::from_p(p).unwrap();
        for n in [1usize, 3, 5] {
            for idx in 0..5usize.pow(n as u32 + 1) {
                let a: Vec<u32> = (0..=n).map(|j| (idx / 5usize.pow(j as u32) % 5) as u32).collect();
                if a[1..].contains(&0) {
                    continue;
                }
                identities += 1;
                if golden::convergent_product(&a, &params).unwrap() != brute_product(&a, &params) {
                    failures.push(format!("product identity {a:?}"));
                }
            }
        }
        for i in [0u8, 2] {
            let m = &golden::astar(&params)[i as usize];
            for n in 0..=12 {
                if golden::astar_power(i, n, &params).unwrap() != m.pow(n) {
                    failures.push(format!("power A*_{i}^{n}"));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lemma_failures = 0;
    for _ in 0..1000 {
        let den = rng.random_range(1..=20i64);
        let alpha = rat(rng.random_range(den + 1..=4 * den), den);
        let k = rng.random_range(1..=12usize);
        let mut a = vec![rng.random_range(0..=6u32)];
        a.extend((0..k).map(|_| rng.random_range(1..=6u32)));
        let report = golden::delta_bounds_check(&a, &alpha).unwrap();
        lemma_failures += usize::from(!report.all_hold);
    }
    outcome(
        failures.is_empty() && lemma_failures == 0,
        format!("{identities} product identities and 78 powers checked, failures {:?}; lemma failures {lemma_failures}/1000", failures.iter().take(3).collect::<Vec<_>>()),
    )
}

fn c10_golden_potential() -> Outcome {
    let params = GoldenParams::from_p(rat(3, 5)).unwrap();
    let len = 81;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let periodic = |cycle: Vec<u8>| PeriodicWord::new(vec![], cycle).unwrap().take(len);
    let mut codes: Vec<Vec<u8>> =
        vec![periodic(vec![0]), periodic(vec![2]), periodic(vec![0, 2]), periodic(vec![2, 0])];
    let mut blocks = Vec::new();
    let mut k = 1;
    while blocks.len() < len {
        blocks.extend(std::iter::repeat_n(0, k));
        blocks.extend(std::iter::repeat_n(2, k));
        k += 1;
    }
    blocks.truncate(len);
    codes.push(blocks);
    codes.push(periodic(vec![0, 0, 1, 0, 0, 0]));
    codes.push(periodic(vec![2, 1, 0, 0, 0, 0, 0]));
    for _ in 0..4 {
        codes.push((0..len).map(|_| [0u8, 2][rng.random_range(0..2)]).collect());
        codes.push((0..len).map(|_| rng.random_range(0..3u8)).collect());
    }
    let spec = golden::code_spec(&params);
    let seqs: Vec<Vec<PhiValue>> = codes.iter().map(|c| gibbs::phi_sequence(&spec, c).unwrap()).collect();
    // s_n = sup over probes |φ_{n+1} − φ_n|, n = 1..80
    let s: Vec<f64> = (0..len - 1).map(|i| seqs.iter().map(|v| v[i + 1].distance(v[i])).fold(0.0, f64::max)).collect();
    let s_at = |n: usize| s[n - 1];
    let decades: Vec<f64> = (1..=7).map(|j| (10 * j..10 * j + 10).map(s_at).fold(0.0, f64::max)).collect();
    let decreasing = decades.windows(2).all(|d| d[1] < d[0] || (d[0] < 1e-15 && d[1] < 1e-15));
    let tail = (60..=80).map(s_at).fold(0.0, f64::max);
    let other = vec![int(1), int(2), int(3)];
    let mut rank_ok = true;
    let mut rank_cases = 0;
    for c in &codes {
        if golden::find_case3_from(c, 1).is_some() {
            let r = golden::rank_one_tail_check(&params, &c[..40], &params.mustar_initial(), &other);
            if let Ok(r) = r {
                rank_ok &= r.tail_independent;
                rank_cases += 1;
            }
        }
    }
    rank_ok &= rank_cases > 0;
    outcome(
        decreasing && tail < 1e-4 && rank_ok,
        format!(
            "decade maxima {:?}; sup_(60..80) = {tail:.2e}; rank-one tail check on {rank_cases} probes: {}",
            decades.iter().map(|d| format!("{d:.1e}")).collect::<Vec<_>>(),
            if rank_ok { "exact" } else { "FAILED" }
        ),
    )
}

fn random_unit_quadratic(rng: &mut ChaCha8Rng) -> Q {
    loop {
        let d = rng.random_range(1..=50i64);
        let x = Q::new(rat(rng.random_range(-60..=60), d), rat(rng.random_range(-30..=30), d));
        if x.sign() >= 0 && x < Q::from_int(1) {
            return x;
        }
    }
}

fn c11_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = 0;
    for _ in 0..1000 {
        let x = random_unit_quadratic(&mut rng);
        for system in [numeration::ExpansionSystem::Parry, numeration::ExpansionSystem::NegBeta] {
            let e = numeration::expand(&x, system, 40).unwrap();
            let err = (&x - &e.partial_value).abs();
            bad += usize::from(err > e.reconstruction_error_bound || !e.admissible);
        }
    }
    let mut coding_bad = 0;
    let mut coded = 0;
    for n in 0..=14 {
        for w in AdmissibleBinaryWord::all_of_length(n) {
            let (code, rest) = numeration::encode3(w.digits()).unwrap();
            let mut back = numeration::decode3(&code).into_inner();
            back.extend(&rest);
            coding_bad += usize::from(back != w.digits() || rest.len() > 2);
            coded += 1;
        }
    }
    for n in 0..=7 {
        for c in TernaryCode::all_of_length(n) {
            let (again, rest) = numeration::encode3(numeration::decode3(&c).digits()).unwrap();
            coding_bad += usize::from(again != c || !rest.is_empty());
            coded += 1;
        }
    }
    let zero = numeration::neg_beta_expand(&Q::default(), 8).unwrap();
    let inv = numeration::neg_beta_expand(&Q::inv_beta(), 8).unwrap();
    let half = numeration::parry_expand(&Q::ratio(1, 2), 9).unwrap();
    let examples = zero.digits() == [1, 0, 1, 0, 1, 0, 1, 0]
        && inv.digits() == [0; 8]
        && half.digits() == [0, 1, 0, 0, 1, 0, 0, 1, 0];
    outcome(
        bad == 0 && coding_bad == 0 && examples,
        format!(
            "{bad} bound violations in 2000 expansions; {coding_bad}/{coded} coding mismatches; examples {}",
            if examples { "match" } else { "DIFFER" }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact engine identities", c1_exact_identities),
        ("mu4 quasi-Bernoulli counterexample", c2_mu4_counterexample),
        ("mu3 potential", c3_mu3_potential),
        ("backward products", c4_backward_products),
        ("law classifier", c5_classifier),
        ("self-similarity residuals", c6_self_similarity),
        ("base-r matrix/Monte Carlo equivalence", c7_base_r_equivalence),
        ("golden cylinder vectors vs Monte Carlo", c8_golden_oracles),
        ("continued-fraction layer", c9_continued_fractions),
        ("golden potential diagnostics", c10_golden_potential),
        ("numeration round trips", c11_round_trips),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {:>2} ({name}) [{:.1}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
