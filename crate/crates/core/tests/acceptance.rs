//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Dense references are built independently of the
//! covariance path.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use dgsim::dense::{self, born_probability, moments, real_extended_covariance, DenseOp};
use dgsim::embedding::{self, Verdict};
use dgsim::linalg::block_diagonalize;
use dgsim::linalg::AntisymMat;
use dgsim::sim::{self, MeasurementOp};
use dgsim::state::{from_diagonal, from_thermal, wick_dense, DiagonalSpec};
use dgsim::unitary::{compile, compile_residual, conjugate_state, Axis, DGUnitary, Gate, GateSequence};
use num_complex::Complex64;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1usize..1 << n).map(move |m| (1..=n).filter(|q| m >> (q - 1) & 1 == 1).collect())
}

fn outcomes(k: usize) -> impl Iterator<Item = Vec<bool>> {
    (0usize..1 << k).map(move |v| (0..k).map(|b| v >> (k - 1 - b) & 1 == 1).collect())
}

/// Moments from restricted Pfaffians against dense moments.
fn c1_wick() -> Outcome {
    let mut rng = common::rng(101);
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..50 {
        let n = 1 + i % 3;
        let (s, rho) = common::state_pair(&mut rng, n, false);
        for (idx, v) in moments(&rho).iter() {
            worst = worst.max((s.wick_moment(&idx).unwrap() - v).norm());
            count += 1;
        }
    }
    check(worst < 1e-8, format!("50 states, {count} moments, max |Δ| = {worst:.2e} (< 1e-8)"))
}

/// `Σ̃ → RΣ̃Rᵀ` against dense conjugation.
fn c2_conjugation() -> Outcome {
    let mut rng = common::rng(102);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = 1 + i % 3;
        let (s, rho) = common::state_pair(&mut rng, n, false);
        let u = common::unitary(&mut rng, n);
        let out = conjugate_state(&u, &s).unwrap();
        let rho = rho.conjugated_by(&u.dense().unwrap());
        worst = worst.max(common::max_abs(out.extended(), &real_extended_covariance(&rho)));
    }
    check(worst < 1e-8, format!("50 pairs, max |Δ| = {worst:.2e} (< 1e-8)"))
}

/// Determinant formula against Born values, normalization at n = 12, and
/// sampled distributions against the oracle.
fn c3_measurement() -> Outcome {
    let mut rng = common::rng(103);
    let mut born = 0.0f64;
    for n in 1..=3 {
        for _ in 0..4 {
            let (s, rho) = common::state_pair(&mut rng, n, false);
            for lines in subsets(n) {
                for x in outcomes(lines.len()) {
                    let p = sim::expectation(&s, &MeasurementOp::new(lines.clone(), x.clone()).unwrap()).unwrap();
                    born = born.max((p - born_probability(&rho, &lines, &x).unwrap()).abs());
                }
            }
        }
    }
    let mut norm = 0.0f64;
    for n in [4, 8, 12] {
        let s = common::state(&mut rng, n);
        let lines: Vec<usize> = (1..=n).collect();
        let total: f64 = outcomes(n)
            .map(|x| sim::expectation(&s, &MeasurementOp::new(lines.clone(), x).unwrap()).unwrap())
            .sum();
        norm = norm.max((total - 1.0).abs());
    }
    let (s, rho) = common::state_pair(&mut rng, 3, false);
    let lines = vec![1, 2, 3];
    let shots = 100_000;
    let draws = sim::sample_par(&s, &lines, shots, 2024).unwrap();
    let mut counts = [0usize; 8];
    for d in &draws {
        counts[d.iter().fold(0, |a, &b| 2 * a + usize::from(b))] += 1;
    }
    let tv = 0.5
        * outcomes(3)
            .enumerate()
            .map(|(v, x)| (counts[v] as f64 / shots as f64 - born_probability(&rho, &lines, &x).unwrap()).abs())
            .sum::<f64>();
    check(
        born < 1e-8 && norm < 1e-9 && tv < 0.01,
        format!("Born max |Δ| = {born:.2e} (< 1e-8), |Σp − 1| up to n=12 = {norm:.2e} (< 1e-9), TV(1e5 shots) = {tv:.4} (< 0.01)"),
    )
}

/// Compiler residual, gate-count constant, and dense equality.
fn c4_compiler() -> Outcome {
    let mut rng = common::rng(104);
    let mut residual = 0.0f64;
    let mut c = 0.0f64;
    let mut dist = 0.0f64;
    for n in 2..=8 {
        for _ in 0..3 {
            let r = common::rotation(&mut rng, 2 * n + 1);
            let seq = compile(&r).unwrap();
            residual = residual.max(compile_residual(&seq, &r).unwrap());
            c = c.max(seq.gates.len() as f64 / (n as f64).powi(3));
            if n <= 3 {
                let target = DGUnitary::from_rotation(r).unwrap().dense().unwrap();
                dist = dist.max(seq.dense().unwrap().projective_distance(&target));
            }
        }
    }
    // Path routing needs at most (2n+1)² plane rotations, i.e. C ≤ 25/8 at n = 2.
    check(
        residual < 1e-7 && dist < 1e-7 && c <= 25.0 / 8.0,
        format!("n=2..8 residual = {residual:.2e} (< 1e-7), C = max count/n³ = {c:.4}, dense distance (n≤3) = {dist:.2e} (< 1e-7)"),
    )
}

/// Thermal, circuit and dense descriptions of the same state.
fn c5_characterization() -> Outcome {
    let mut rng = common::rng(105);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = 1 + i % 3;
        let h = common::antisym(&mut rng, 2 * n, 1.5);
        let d = common::vector(&mut rng, 2 * n, 1.0);
        let thermal = from_thermal(&h, &d).unwrap();
        let thermal_dense = dense::thermal_state(n, &h, &d).unwrap();

        // Canonical form R Σ̃ Rᵀ has +λ at [2j−1, 2j]; the diagonal state with
        // canonical value −λ carries the same block.
        let (r, lambdas) = block_diagonalize(&AntisymMat::new(thermal.extended().clone()).unwrap());
        let canon: Vec<f64> = lambdas.iter().map(|l| -l).collect();
        let seq = compile(&r.transpose()).unwrap();
        let mut circuit = from_diagonal(&DiagonalSpec::new(canon.clone()).unwrap());
        sim::apply_gates(&mut circuit, &seq.gates).unwrap();
        let blochs: Vec<[f64; 3]> = canon.iter().map(|&l| [0.0, 0.0, l]).collect();
        let circuit_dense = dense::product_state(&blochs).unwrap().conjugated_by(&seq.dense().unwrap());

        let covs = [
            thermal.extended().clone(),
            circuit.extended().clone(),
            real_extended_covariance(&thermal_dense),
            real_extended_covariance(&circuit_dense),
        ];
        for a in &covs {
            for b in &covs {
                worst = worst.max(common::max_abs(a, b));
            }
        }
        let denses = [thermal_dense, circuit_dense, wick_dense(thermal.extended())];
        for a in &denses {
            for b in &denses {
                worst = worst.max(a.max_abs_diff(b));
            }
        }
    }
    check(worst < 1e-8, format!("20 instances, max pairwise |Δ| = {worst:.2e} (< 1e-8)"))
}

/// Embedding formula, purity, compatibility and the Clifford decomposition.
fn c6_embedding() -> Outcome {
    let mut rng = common::rng(106);
    let (mut formula, mut purity, mut compat, mut lifted) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..15 {
        let n = 1 + i % 3;
        let (s, rho) = common::state_pair(&mut rng, n, true);
        let e = embedding::embed_state(&s).unwrap();
        let e_dense = embedding::embed_dense(&rho).unwrap();
        formula = formula.max(common::max_abs(e.state.extended(), &real_extended_covariance(&e_dense)));
        purity = purity.max((e.state.purity() - s.purity()).abs()).max((e_dense.purity() - rho.purity()).abs());

        let u = common::unitary(&mut rng, n);
        let ut = embedding::embed_unitary(&u).unwrap();
        let lhs = embedding::embed_state(&conjugate_state(&u, &s).unwrap()).unwrap().state;
        let rhs = conjugate_state(&ut, &e.state).unwrap();
        compat = compat.max(common::max_abs(lhs.extended(), rhs.extended()));
        let lhs = embedding::embed_dense(&rho.conjugated_by(&u.dense().unwrap())).unwrap();
        let rhs = e_dense.conjugated_by(&embedding::embed_unitary_dense(&u.dense().unwrap()).unwrap());
        compat = compat.max(lhs.max_abs_diff(&rhs));
        lifted = lifted.max(ut.dense().unwrap().projective_distance(&embedding::embed_unitary_dense(&u.dense().unwrap()).unwrap()));
    }
    let mut clifford = 0.0f64;
    for n in 1..=3 {
        let p = embedding::clifford_product(&embedding::embed_v_gates(n), n + 1).unwrap();
        clifford = clifford.max(p.projective_distance(&dense::embed_v(n).unwrap()));
    }
    check(
        formula < 1e-8 && purity < 1e-8 && compat < 1e-8 && lifted < 1e-8 && clifford < 1e-10,
        format!(
            "15 pure states: formula {formula:.2e}, purity {purity:.2e}, compatibility {compat:.2e}, \
             Ũ vs V(U⊗I)V† {lifted:.2e} (all < 1e-8); V decomposition {clifford:.2e} (< 1e-10)"
        ),
    )
}

fn ket(n: usize, terms: &[(usize, Complex64)]) -> DenseOp {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for &(s, a) in terms {
        amps[s] = a;
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    DenseOp::from_state_vector(n, &amps).unwrap()
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Pure Gaussian state prepared by a compiled gate sequence acting on a
/// basis state.
fn compiled_state(rng: &mut impl Rng, n: usize, even: bool) -> DenseOp {
    let u = if even { common::even_unitary(rng, n) } else { common::unitary(rng, n) };
    let seq = compile(u.rotation()).unwrap();
    DenseOp::basis_state(n, rng.gen_range(0..1 << n)).conjugated_by(&seq.dense().unwrap())
}

fn compiled_unitary(rng: &mut impl Rng, n: usize, even: bool) -> DenseOp {
    let u = if even { common::even_unitary(rng, n) } else { common::unitary(rng, n) };
    compile(u.rotation()).unwrap().dense().unwrap()
}

fn quartic(angle: f64) -> DenseOp {
    let g = dense::majorana_monomial(2, &[1, 2, 3, 4]).unwrap();
    dense::exp_anti_hermitian(&g.scale(Complex64::new(0.0, angle)))
}

enum Case {
    EvenState(DenseOp),
    DisplacedState(DenseOp),
    EvenUnitary(DenseOp),
    DisplacedUnitary(DenseOp),
}

/// Labeled verdicts on states and unitaries.
fn c7_tests() -> Outcome {
    let mut rng = common::rng(107);
    let mut cases: Vec<(String, Case, Verdict)> = Vec::new();
    use Case::*;
    use Verdict::*;
    for n in 2..=4 {
        for k in 0..2 {
            cases.push((format!("compiled even state n={n} #{k}"), EvenState(compiled_state(&mut rng, n, true)), Gaussian));
        }
    }
    for n in 1..=3 {
        for k in 0..2 {
            cases.push((format!("compiled displaced state n={n} #{k}"), DisplacedState(compiled_state(&mut rng, n, false)), Gaussian));
        }
    }
    cases.push(("even 3-qubit superposition".into(), EvenState(ket(3, &[(0, re(1.0)), (3, re(1.0)), (5, re(1.0)), (6, re(1.0))])), Gaussian));
    for t in [PI / 4.0, PI / 6.0, PI / 3.0] {
        let psi = ket(4, &[(0, re(t.cos())), (15, re(t.sin()))]);
        cases.push((format!("GHZ4-type t={t:.3}"), EvenState(psi), NonGaussian));
    }
    let ghz4 = ket(4, &[(0, re(1.0)), (15, Complex64::new(0.0, 1.0))]);
    let rotated = ghz4.conjugated_by(&common::even_unitary(&mut rng, 4).dense().unwrap());
    cases.push(("GHZ4 after an even Gaussian unitary".into(), EvenState(rotated), NonGaussian));
    let ghz3 = ket(3, &[(0, re(1.0)), (7, re(1.0))]);
    cases.push(("GHZ3".into(), DisplacedState(ghz3.clone()), NonGaussian));
    let rotated = ghz3.conjugated_by(&common::unitary(&mut rng, 3).dense().unwrap());
    cases.push(("GHZ3 after a displaced Gaussian unitary".into(), DisplacedState(rotated), NonGaussian));
    for n in 2..=4 {
        cases.push((format!("compiled even unitary n={n}"), EvenUnitary(compiled_unitary(&mut rng, n, true)), Gaussian));
    }
    for n in 1..=3 {
        cases.push((format!("compiled displaced unitary n={n}"), DisplacedUnitary(compiled_unitary(&mut rng, n, false)), Gaussian));
    }
    for angle in [PI / 4.0, PI / 8.0, 0.3] {
        cases.push((format!("quartic generator θ={angle:.3}"), EvenUnitary(quartic(angle)), NonGaussian));
    }
    let dressed = quartic(PI / 4.0).conjugated_by(&common::even_unitary(&mut rng, 2).dense().unwrap());
    cases.push(("quartic after an even Gaussian unitary".into(), EvenUnitary(dressed), NonGaussian));
    cases.push(("CZ(1,3)".into(), DisplacedUnitary(dense::cz(3, 1, 3).unwrap()), NonGaussian));
    cases.push(("CZ(1,2) on 2 lines".into(), EvenUnitary(dense::cz(2, 1, 2).unwrap()), NonGaussian));

    let mut wrong = Vec::new();
    let mut overlap_err = 0.0f64;
    for (name, case, label) in &cases {
        let verdict = match case {
            EvenState(p) | DisplacedState(p) => {
                let t = match case {
                    EvenState(_) => embedding::gaussian_state_test(p),
                    _ => embedding::displaced_state_test(p),
                }
                .unwrap();
                if *label == Gaussian {
                    overlap_err = overlap_err.max((t.overlap - 1.0).abs());
                }
                t.verdict
            }
            EvenUnitary(u) => embedding::gaussian_unitary_test(u).unwrap().verdict,
            DisplacedUnitary(u) => embedding::displaced_unitary_test(u).unwrap().verdict,
        };
        if verdict != *label {
            wrong.push(name.clone());
        }
    }
    let total = cases.len();
    check(
        total >= 25 && wrong.is_empty() && overlap_err < 1e-8,
        format!(
            "{}/{total} verdicts correct, Gaussian overlap |1 − o| = {overlap_err:.2e} (< 1e-8){}",
            total - wrong.len(),
            if wrong.is_empty() { String::new() } else { format!(", wrong: {wrong:?}") }
        ),
    )
}

fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let angle = rng.gen_range(-PI..PI);
    match rng.gen_range(0..10) {
        0 => Gate::Line1 { axis: [Axis::X, Axis::Y, Axis::Z][rng.gen_range(0..3)], angle },
        1 => Gate::Fswap { line: rng.gen_range(1..n) },
        _ => {
            let line = rng.gen_range(1..n);
            let a = 2 * line - 1 + rng.gen_range(0..2);
            let b = 2 * line + 1 + rng.gen_range(0..2);
            Gate::Matchgate { axes: [a, b], angle }
        }
    }
}

/// 10 000 gates at n = 500 with a 10-line measurement.
fn c8_performance() -> Outcome {
    let mut rng = common::rng(108);
    let n = 500;
    let start = Instant::now();
    let lambdas = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let gates = (0..10_000).map(|_| random_gate(&mut rng, n)).collect();
    let seq = GateSequence { n, gates };
    let mut s = from_diagonal(&DiagonalSpec::new(lambdas).unwrap());
    sim::apply_gates(&mut s, &seq.gates).unwrap();
    let lines: Vec<usize> = (0..10).map(|k| 1 + 50 * k).collect();
    let total: f64 = outcomes(10)
        .map(|x| sim::expectation(&s, &MeasurementOp::new(lines.clone(), x).unwrap()).unwrap())
        .sum();
    let shots = sim::sample_par(&s, &lines, 1000, 1).unwrap();
    let elapsed = start.elapsed();
    let bytes = s.extended().len() * std::mem::size_of::<f64>();
    check(
        elapsed < Duration::from_secs(60) && (total - 1.0).abs() < 1e-9 && shots.len() == 1000,
        format!(
            "{:.2} s (< 60 s), state {:.1} MiB for (2n+1)² entries, all 1024 outcomes sum to 1 within {:.1e}",
            elapsed.as_secs_f64(),
            bytes as f64 / (1 << 20) as f64,
            (total - 1.0).abs()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 Wick moments vs dense oracle", c1_wick, 60),
        ("2 covariance conjugation", c2_conjugation, 60),
        ("3 measurement and sampling", c3_measurement, 180),
        ("4 compiler", c4_compiler, 120),
        ("5 thermal / circuit / dense agreement", c5_characterization, 60),
        ("6 embedding", c6_embedding, 60),
        ("7 Gaussianity tests", c7_tests, 120),
        ("8 performance at n = 500", c8_performance, 60),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = out.pass && secs < budget as f64;
        failed += usize::from(!pass);
        println!(
            "criterion {name}: {} [{secs:.2} s / {budget} s] {}",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
