use std::collections::BTreeSet;
use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::*;

type Outcome = std::result::Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(c)
}

fn dv(c: &[i64]) -> DualVector {
    DualVector::from_i64(c)
}

fn q(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn p2() -> Fan {
    Fan::new(2, vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
}

fn p1xp1() -> Fan {
    Fan::new(
        2,
        vec![lv(&[1, 0]), lv(&[-1, 0]), lv(&[0, 1]), lv(&[0, -1])],
        vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
    )
    .unwrap()
}

fn hirzebruch1() -> Fan {
    Fan::new(
        2,
        vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 1]), lv(&[0, -1])],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
    .unwrap()
}

fn p3() -> Fan {
    LatticePolytope::unit_simplex(3).normal_fan().unwrap().0
}

fn p1_cubed() -> Fan {
    LatticePolytope::unit_cube(3).normal_fan().unwrap().0
}

fn random_polytope(rng: &mut ChaCha8Rng, d: usize) -> LatticePolytope {
    let n = rng.random_range(1..=5);
    let pts = (0..n).map(|_| DualVector::new((0..d).map(|_| Int::from(rng.random_range(0..=3))).collect())).collect();
    LatticePolytope::from_points(d, pts).unwrap()
}

fn criterion_1() -> Outcome {
    let (fan, e) = LatticePolytope::unit_simplex(2).normal_fan().map_err(err)?;
    let rays: BTreeSet<_> = fan.rays().iter().cloned().collect();
    let expected: BTreeSet<_> = [lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])].into_iter().collect();
    ensure(rays == expected, || format!("rays {:?}", fan.rays()))?;
    ensure(fan.maximal_cones().len() == 3 && fan.is_smooth() && fan.is_complete().map_err(err)?, || {
        "fan shape".into()
    })?;
    let forms: BTreeSet<_> = e.cartier_data(&fan).map_err(err)?.forms().iter().cloned().collect();
    let expected: BTreeSet<_> = [dv(&[0, 0]), dv(&[1, 0]), dv(&[0, 1])].into_iter().collect();
    ensure(forms == expected, || format!("Cartier data {forms:?}"))?;
    let deg = degree(&fan, &[e.clone(), e]).map_err(err)?;
    ensure(deg == Int::one(), || format!("degree {deg}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    while checked < 200 {
        let d = if checked % 2 == 0 { 2 } else { 3 };
        let polys: Vec<LatticePolytope> = (0..d).map(|_| random_polytope(&mut rng, d)).collect();
        let sum = polys[1..].iter().fold(polys[0].clone(), |a, p| a.minkowski_sum(p).unwrap());
        let oracle = mixed_volume_oracle(&polys).map_err(err)?;
        if !sum.is_full_dimensional() {
            ensure(oracle.is_zero(), || format!("oracle {oracle} on a degenerate sum"))?;
            continue;
        }
        let v = mixed_volume(&polys).map_err(err)?;
        ensure(v == oracle, || format!("{polys:?}: weights {v}, oracle {oracle}"))?;
        checked += 1;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut fans = vec![p2(), p1xp1(), hirzebruch1(), p3(), p1_cubed()];
    for _ in 0..3 {
        let k = loop {
            let k = random_polytope(&mut rng, 2);
            if k.is_full_dimensional() {
                break k;
            }
        };
        fans.push(k.normal_fan().unwrap().0.regularize().unwrap());
    }
    for fan in &fans {
        let r = fan.rays().len();
        for _ in 0..4 {
            let mut w = MinkowskiWeight::fundamental(fan).map_err(err)?;
            for _ in 0..fan.dim() {
                let dvs =
                    TDivisor::new(fan, (0..r).map(|_| Int::from(rng.random_range(-3..=3))).collect()).map_err(err)?;
                let next = intersect_divisor(fan, &w, &dvs).map_err(err)?;
                ensure(check_balanced(fan, &next), || format!("unbalanced output {next}"))?;
                for seed in 0..100 {
                    let again = intersect_divisor_randomized(fan, &w, &dvs, seed).map_err(err)?;
                    ensure(again == next, || format!("seed {seed} changed the weight"))?;
                }
                w = next;
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let fan = p1xp1();
    let (e1, minus_e1) = (fan.ray_index(&lv(&[1, 0])).unwrap(), fan.ray_index(&lv(&[-1, 0])).unwrap());
    let mut w = MinkowskiWeight::fundamental(&fan).map_err(err)?;
    for i in [e1, minus_e1] {
        w = intersect_divisor(&fan, &w, &TDivisor::elementary(&fan, i)).map_err(err)?;
    }
    ensure(w.is_zero(), || format!("D(e1) D(-e1) = {w}"))?;
    for fan in [p3(), p1_cubed()] {
        let r = fan.rays().len();
        let mut nonfaces = 0;
        for mask in 1u32..(1 << r) {
            let set: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
            if set.len() > fan.dim() {
                continue;
            }
            let vanishes = nonface_product_vanishes(&fan, &set).map_err(err)?;
            ensure(vanishes == !fan.is_cone(&set), || format!("{set:?}"))?;
            nonfaces += vanishes as usize;
        }
        let jd = jd_presentation(&fan).map_err(err)?;
        for s in &jd.nonfaces {
            ensure(!fan.is_cone(s), || format!("listed non-face {s:?} is a cone"))?;
        }
        if r == 6 {
            ensure(nonfaces > 0, || "no non-faces exercised".into())?;
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let p = LaurentPolynomial::from_i64(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
    let e = mahler_numeric(&p, &MahlerOptions::default()).map_err(err)?;
    let exact = bloch_wigner(Complex64::from_polar(1.0, PI / 3.0)).map_err(err)? / PI;
    ensure((e.value - exact).abs() < 1e-3, || format!("M(1+x+y) = {} vs {exact}", e.value))?;
    let catalan = 0.915_965_594_177_219;
    let di = bloch_wigner(Complex64::i()).map_err(err)?;
    ensure((di - catalan).abs() < 1e-9, || format!("D(i) = {di}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 50 {
        let deg = rng.random_range(1..=6);
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-9..=9)).collect();
        let terms: Vec<(Vec<i64>, i64)> = coeffs.iter().enumerate().map(|(k, &c)| (vec![k as i64], c)).collect();
        let refs: Vec<(&[i64], i64)> = terms.iter().map(|(m, c)| (m.as_slice(), *c)).collect();
        let p = LaurentPolynomial::from_i64(1, &refs);
        if p.is_zero() {
            continue;
        }
        let numeric = mahler_numeric(&p, &MahlerOptions { tol: 1e-7, ..Default::default() }).map_err(err)?;
        let jensen = mahler_univariate_exact(&p).map_err(err)?;
        ensure((numeric.value - jensen).abs() < 1e-4, || format!("{p}: {} vs {jensen}", numeric.value))?;
        done += 1;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let segment = LatticePolytope::from_points(1, vec![dv(&[0]), dv(&[1])]).unwrap();
    let h = canonical_height_point(&segment, &[q(2, 1)]).map_err(err)?;
    ensure((h - LN_2).abs() < 1e-12, || format!("h = {h}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let d = rng.random_range(1..=3);
        let a = random_polytope(&mut rng, d);
        let b = random_polytope(&mut rng, d);
        let x: Vec<Rat> = (0..d)
            .map(|_| {
                let n = rng.random_range(1..=60) * if rng.random_bool(0.5) { 1 } else { -1 };
                q(n, rng.random_range(1..=60))
            })
            .collect();
        let sum = a.minkowski_sum(&b).unwrap();
        let lhs = place_heights(&sum, &x).map_err(err)?;
        let rhs = place_heights(&a, &x).map_err(err)?.combine(&place_heights(&b, &x).map_err(err)?);
        ensure(lhs == rhs, || format!("{a:?} + {b:?} at {x:?}"))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
    for trial in 0..1000 {
        let fan = if trial % 2 == 0 { p2() } else { p1xp1() };
        let r = fan.rays().len();
        let mut divisor = || TDivisor::new(&fan, (0..r).map(|_| Int::from(rng.random_range(0..=2))).collect()).unwrap();
        let (d1, d2) = (divisor(), divisor());
        let mut section = |d: &TDivisor| {
            let pts = d.polytope(&fan).unwrap().lattice_points();
            let terms = pts.into_iter().map(|m| (m, q(rng.random_range(1..=5), 1)));
            LaurentPolynomial::from_terms(2, terms).unwrap()
        };
        let (s1, s2) = (section(&d1), section(&d2));
        let x: Vec<Complex64> = (0..2)
            .map(|_| Complex64::from_polar(rng.random_range(-2.0f64..2.0).exp(), rng.random_range(-PI..PI)))
            .collect();
        let lhs = d1.add(&d2).canonical_metric_norm(&fan, &(&s1 * &s2), &x).map_err(err)?;
        let rhs = d1.canonical_metric_norm(&fan, &s1, &x).map_err(err)?
            * d2.canonical_metric_norm(&fan, &s2, &x).map_err(err)?;
        ensure(close(lhs, rhs), || format!("multiplicativity {lhs} vs {rhs}"))?;
        let p = rng.random_range(2..=4);
        let pd = d1.scale(&Int::from(p));
        let pulled =
            LaurentPolynomial::from_terms(2, s1.terms().map(|(m, c)| (m.scale(&Int::from(p)), c.clone()))).unwrap();
        let xp: Vec<Complex64> = x.iter().map(|z| z.powi(p)).collect();
        let lhs = pd.canonical_metric_norm(&fan, &pulled, &x).map_err(err)?;
        let rhs = d1.canonical_metric_norm(&fan, &s1, &xp).map_err(err)?;
        ensure(close(lhs, rhs), || format!("fixed point {lhs} vs {rhs}"))?;
        let logs: Vec<f64> = x.iter().map(|z| z.norm().ln()).collect();
        let base = vertex_max_log(&d1.polytope(&fan).unwrap(), &logs);
        let scaled = vertex_max_log(&pd.polytope(&fan).unwrap(), &logs);
        ensure((scaled - p as f64 * base).abs() <= 1e-9 * base.abs().max(1e-300), || {
            format!("{scaled} vs {p} * {base}")
        })?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let c1 = lelong_constants(1).map_err(err)?;
    let c2 = lelong_constants(2).map_err(err)?;
    ensure((c1.c_prime - LN_2).abs() < 1e-12, || format!("C1' = {}", c1.c_prime))?;
    ensure((c2.c_prime - (1.5 + LN_2 - 0.625)).abs() < 1e-12, || format!("C2' = {}", c2.c_prime))?;
    let segment = LatticePolytope::from_points(1, vec![dv(&[0]), dv(&[1])]).unwrap();
    let l = bound_l(&segment).map_err(err)?;
    ensure(l == LN_2, || format!("bound_L([0,1]) = {l}"))
}

type System = (Vec<LaurentPolynomial>, Vec<(Vec<Rat>, Int)>);

fn system(d: usize, polys: &[&[(&[i64], i64)]], roots: &[&[(i64, i64)]]) -> System {
    (
        polys.iter().map(|t| LaurentPolynomial::from_i64(d, t)).collect(),
        roots.iter().map(|r| (r.iter().map(|&(n, m)| q(n, m)).collect(), Int::one())).collect(),
    )
}

fn bk_corpus() -> Vec<System> {
    vec![
        system(2, &[&[(&[1, 0], 1), (&[0, 0], -2)], &[(&[0, 1], 1), (&[0, 0], -3)]], &[&[(2, 1), (3, 1)]]),
        system(2, &[&[(&[1, 0], 1), (&[0, 0], -1)], &[(&[0, 1], 1), (&[0, 0], -1)]], &[&[(1, 1), (1, 1)]]),
        system(2, &[&[(&[1, 0], 2), (&[0, 0], -1)], &[(&[0, 1], 3), (&[0, 0], -2)]], &[&[(1, 2), (2, 3)]]),
        system(
            2,
            &[&[(&[1, 0], 1), (&[0, 1], -1)], &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], -4)]],
            &[&[(2, 1), (2, 1)]],
        ),
        system(2, &[&[(&[1, 1], 1), (&[0, 0], -6)], &[(&[1, 0], 1), (&[0, 0], -2)]], &[&[(2, 1), (3, 1)]]),
        system(
            2,
            &[&[(&[2, 0], 1), (&[0, 0], -4)], &[(&[0, 1], 1), (&[1, 0], -1)]],
            &[&[(2, 1), (2, 1)], &[(-2, 1), (-2, 1)]],
        ),
        system(1, &[&[(&[1], 1), (&[0], -3)]], &[&[(3, 1)]]),
        system(2, &[&[(&[1, 1], 1), (&[0, 0], -1)], &[(&[1, 0], 1), (&[0, 0], -5)]], &[&[(5, 1), (1, 5)]]),
        system(
            3,
            &[
                &[(&[1, 0, 0], 1), (&[0, 0, 0], -2)],
                &[(&[0, 1, 0], 2), (&[0, 0, 0], -1)],
                &[(&[0, 0, 1], 1), (&[0, 0, 0], -3)],
            ],
            &[&[(2, 1), (1, 2), (3, 1)]],
        ),
        system(
            2,
            &[&[(&[2, 0], 1), (&[1, 0], -5), (&[0, 0], 6)], &[(&[0, 1], 1), (&[0, 0], -7)]],
            &[&[(2, 1), (7, 1)], &[(3, 1), (7, 1)]],
        ),
    ]
}

fn criterion_9() -> Outcome {
    let opts = MahlerOptions::default();
    for (k, (polys, roots)) in bk_corpus().iter().enumerate() {
        let v = bk_verify(polys, roots, &opts).map_err(|e| format!("system {k}: {e}"))?;
        ensure(v.holds && v.slack >= 0.0, || format!("system {k}: lhs {} > rhs {}", v.lhs, v.report.rhs))?;
        if k == 0 {
            let expected = 0.5 * (2f64.ln() + 3f64.ln());
            ensure((v.lhs - expected).abs() < 1e-12, || format!("lhs {} vs {expected}", v.lhs))?;
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    while done < 20 {
        let d = if done % 2 == 0 { 1 } else { 2 };
        let k = random_polytope(&mut rng, d);
        if !k.is_full_dimensional() || !k.is_absolutely_simple() {
            continue;
        }
        let lower = estimate_l_lower(&k, 8, 16, done as u64).map_err(err)?;
        let upper = bound_l(&k).map_err(err)?;
        ensure(lower <= upper + 1e-6, || format!("{k:?}: estimate {lower} > bound {upper}"))?;
        done += 1;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("P2 pipeline: normal fan, Cartier data, degree", 1, criterion_1),
        ("mixed volumes: weight recursion equals inclusion-exclusion on 200 samples", 60, criterion_2),
        ("balancing and choice independence", 30, criterion_3),
        ("vanishing on non-faces", 30, criterion_4),
        ("Mahler measures and the Bloch-Wigner dilogarithm", 120, criterion_5),
        ("heights: log 2 and placewise Minkowski additivity", 30, criterion_6),
        ("canonical metric: multiplicativity and fixed point", 60, criterion_7),
        ("Lelong constants and bound_L([0,1])", 1, criterion_8),
        ("arithmetic Bernstein-Kushnirenko corpus", 120, criterion_9),
        ("estimate_L_lower <= bound_L on 20 polytopes", 120, criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(*limit), || {
                format!("took {:.2} s, limit {limit} s", elapsed.as_secs_f64())
            })
        });
        match outcome {
            Ok(()) => println!("[PASS] {} {name} ({:.2} s)", i + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failures += 1;
                println!("[FAIL] {} {name} ({:.2} s): {msg}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
