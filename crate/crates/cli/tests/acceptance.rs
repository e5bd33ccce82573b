//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any failed.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use ncpit::algebra::FieldSpec;
use ncpit::automata::{
    bits, encode_monomial, run_circuit_on_automaton, Dfa, LayeredWeightAutomaton,
};
use ncpit::circuit::{random_bool_circuit, random_circuit, ArithCircuit, CircuitBuilder, Gate};
use ncpit::isolation::{
    estimate_isolation_probability, estimate_linear_form_isolation, random_bitset,
    random_distinct_forms, unique_min, vv_experiment, SetFamily, Subset, Universe,
    WeightAssignment,
};
use ncpit::ncpoly::Word;
use ncpit::pit::{
    construct_fooling_polynomial, extract_coefficient, ks_commutative_pit, ks_parameters,
    ks_substitute, nc_pit, pit_statistics, verify_nc_witness, PitLimits, WitnessLocation,
};
use ncpit::trials::TrialPlan;
use ncpit::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const Q: FieldSpec = FieldSpec::Rational;
const F101: FieldSpec = FieldSpec::Prime(101);

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit_s: u64, detail: String) -> Outcome {
    let secs = elapsed.as_secs_f64();
    check(
        secs < limit_s as f64,
        format!("{detail}; {secs:.1} s (limit {limit_s} s)"),
    )
}

/// `(p + q)^2 - p^2 - pq - qp - q^2` for random words `p`, `q` of length <= 2.
fn square_identity(n: usize, field: FieldSpec, rng: &mut ChaCha8Rng) -> ArithCircuit {
    let mut b = CircuitBuilder::new(field, n);
    let word = |b: &mut CircuitBuilder, rng: &mut ChaCha8Rng| {
        let mut acc = b.var(rng.gen_range(1..=n));
        for _ in 1..rng.gen_range(1..=2) {
            let v = b.var(rng.gen_range(1..=n));
            acc = b.mul(acc, v);
        }
        acc
    };
    let p = word(&mut b, rng);
    let q = word(&mut b, rng);
    let s = b.add(p, q);
    let mut out = b.mul(s, s);
    for (x, y) in [(p, p), (p, q), (q, p), (q, q)] {
        let m = b.mul(x, y);
        out = b.sub(out, m);
    }
    b.finish(out).unwrap()
}

/// 120 circuits over Q and F_101 with n <= 3, formal degree <= 4 and at most
/// 30 gates; roughly a third are identities by construction.
fn corpus() -> Vec<ArithCircuit> {
    (0..120u64)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let field = if seed % 2 == 0 { Q } else { F101 };
            let n = 1 + (seed as usize / 2) % 3;
            let bound = 1 + (seed / 6) % 4;
            match seed % 6 {
                0 | 3 => {
                    let c = random_circuit(n, 13, bound, field, &mut rng);
                    c.sub(&c.with_swapped_additions()).unwrap()
                }
                1 => square_identity(n, field, &mut rng),
                _ => random_circuit(n, 20 + (seed as usize % 11), bound, field, &mut rng),
            }
        })
        .collect()
}

fn is_zero(c: &ArithCircuit) -> bool {
    c.expand_bruteforce(1_000_000).unwrap().is_zero()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let corpus = corpus();
    let mut agree = 0;
    let mut zero = 0;
    let mut fields = (0, 0);
    let mut shape_ok = true;
    for (k, c) in corpus.iter().enumerate() {
        shape_ok &= c.num_vars() <= 3 && c.formal_degree().unwrap() <= 4 && c.size() <= 30;
        if c.field() == Q {
            fields.0 += 1;
        } else {
            fields.1 += 1;
        }
        let oracle = is_zero(c);
        zero += oracle as usize;
        let v = nc_pit(c, None, TrialPlan::new(20, k as u64), PitLimits::default()).unwrap();
        let witness_ok = v
            .witness
            .as_ref()
            .is_none_or(|w| verify_nc_witness(c, w).unwrap());
        if v.is_zero() == oracle && witness_ok {
            agree += 1;
        }
    }
    let detail = format!(
        "{agree}/{} agree with expansion ({zero} zero, {} nonzero; {} over Q, {} over F_101)",
        corpus.len(),
        corpus.len() - zero,
        fields.0,
        fields.1
    );
    check(
        shape_ok && agree == corpus.len() && fields.0 > 0 && fields.1 > 0,
        detail.clone(),
    )
    .and_then(|d| within(start.elapsed(), 60, d))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    // The ten nonzero corpus circuits with the fewest monomials.
    let mut nonzero: Vec<(usize, ArithCircuit)> = corpus()
        .into_iter()
        .map(|c| (c.expand_bruteforce(1_000_000).unwrap().num_terms(), c))
        .filter(|(terms, _)| *terms > 0)
        .collect();
    nonzero.sort_by_key(|(terms, _)| *terms);
    let nonzero: Vec<ArithCircuit> = nonzero.into_iter().take(10).map(|(_, c)| c).collect();
    let mut worst = 1.0f64;
    let mut all = nonzero.len() == 10;
    for (k, c) in nonzero.iter().enumerate() {
        let e = pit_statistics(
            c,
            None,
            TrialPlan::new(400, 50 + k as u64),
            PitLimits::default(),
        )
        .unwrap();
        worst = worst.min(e.p_hat);
        all &= e.p_hat >= 0.5 - 3.0 * (0.25f64 / 400.0).sqrt();
    }
    within(
        start.elapsed(),
        60,
        format!("lowest single-trial rate {worst:.3} over 10 circuits (threshold 0.425)"),
    )
    .and_then(|d| check(all, d))
}

fn random_binary_dfa(rng: &mut ChaCha8Rng) -> Dfa {
    let states = rng.gen_range(2..=6);
    let delta = (0..2 * states).map(|_| rng.gen_range(0..states)).collect();
    let finals = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(states, 2, delta, 0, finals).unwrap()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut exact = 0;
    let mut entries = 0;
    for k in 0..50 {
        let field = if k % 2 == 0 { Q } else { F101 };
        let n = rng.gen_range(1..=3);
        let c = random_circuit(n, 16, 3, field, &mut rng);
        let f = c.expand_bruteforce(1_000_000).unwrap();
        let dfa = random_binary_dfa(&mut rng);
        let out = run_circuit_on_automaton(&c, &dfa).unwrap();
        let mut ok = true;
        for qf in 0..dfa.num_states() {
            let mut sum = field.zero();
            for (w, coeff) in f.terms() {
                if dfa
                    .run_from(dfa.start(), &bits(&encode_monomial(w)))
                    .unwrap()
                    == qf
                {
                    sum = sum.add(coeff).unwrap();
                }
            }
            ok &= out.entry(dfa.start(), qf).unwrap() == sum;
            entries += 1;
        }
        exact += ok as usize;
    }
    within(
        start.elapsed(),
        30,
        format!("{exact}/50 pairs exact ({entries} entries checked)"),
    )
    .and_then(|d| check(exact == 50, d))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let circuits: Vec<ArithCircuit> = corpus().into_iter().skip(2).step_by(3).take(20).collect();
    let mut words = 0;
    let mut mismatches = 0;
    for c in &circuits {
        let f = c.expand_bruteforce(1_000_000).unwrap();
        let d = c.formal_degree().unwrap() as usize;
        for len in 0..=d {
            for w in Word::all_of_length(c.num_vars(), len) {
                words += 1;
                if extract_coefficient(c, &w).unwrap() != f.coeff_of(&w) {
                    mismatches += 1;
                }
            }
        }
    }
    within(
        start.elapsed(),
        30,
        format!("{words} words over 20 circuits, {mismatches} mismatches"),
    )
    .and_then(|d| check(mismatches == 0 && circuits.len() == 20, d))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let n = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut families = vec![
        SetFamily::all_nonempty(n).unwrap(),
        SetFamily::explicit(n, (0..n).map(|i| Subset(1 << i))).unwrap(),
        SetFamily::explicit(
            n,
            (0..1u64 << n).filter(|s| s.count_ones() == 5).map(Subset),
        )
        .unwrap(),
        SetFamily::explicit(n, (0..40).map(|_| Subset(rng.gen_range(0..1u64 << n)))).unwrap(),
        SetFamily::explicit(n, (0..200).map(|_| Subset(rng.gen_range(0..1u64 << n)))).unwrap(),
    ];
    while families.len() < 10 {
        let f = SetFamily::CircuitDefined(random_bool_circuit(n, 25, &mut rng));
        if f.members().unwrap().len() >= 2 {
            families.push(f);
        }
    }
    let mut worst = 1.0f64;
    let mut ok = true;
    for (k, f) in families.iter().enumerate() {
        let e =
            estimate_isolation_probability(f, 2 * n as u64, TrialPlan::new(2000, 500 + k as u64))
                .unwrap();
        worst = worst.min(e.p_hat);
        ok &= e.at_least(0.5);
    }
    // Exhaustive oracle: all nonempty subsets of [2], weights in [4]^2.
    let small = SetFamily::all_nonempty(2).unwrap();
    let mut unique = 0;
    for a in 1..=4 {
        for b in 1..=4 {
            unique += unique_min(&small, &WeightAssignment::flat(vec![a, b], 4).unwrap())
                .unwrap()
                .is_unique() as u32;
        }
    }
    let exact = unique as f64 / 16.0;
    let e = estimate_isolation_probability(&small, 4, TrialPlan::new(2000, 555)).unwrap();
    ok &= exact == 0.75 && e.consistent_with(exact);
    within(
        start.elapsed(),
        30,
        format!(
            "lowest estimate {worst:.3} over 10 families on n = 10; n = 2 exact {exact}, estimate {:.3} +/- {:.3}",
            e.p_hat, e.half_width
        ),
    )
    .and_then(|d| check(ok, d))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 1.0f64;
    let mut ok = true;
    for k in 0..10 {
        let family = random_distinct_forms(4, 3, 20, &mut rng).unwrap();
        let e = estimate_linear_form_isolation(&family, TrialPlan::new(2000, 600 + k)).unwrap();
        worst = worst.min(e.p_hat);
        ok &= e.at_least(0.5);
    }
    within(
        start.elapsed(),
        30,
        format!("lowest unique-min frequency {worst:.3} over 10 families"),
    )
    .and_then(|d| check(ok, d))
}

/// Same polynomial up to commutation: every product has its factors swapped.
fn with_swapped_products(c: &ArithCircuit) -> ArithCircuit {
    let gates = c
        .gates()
        .iter()
        .map(|g| match g {
            Gate::Mul(a, b) => Gate::Mul(*b, *a),
            other => other.clone(),
        })
        .collect();
    ArithCircuit::new(c.field(), c.num_vars(), gates, c.output()).unwrap()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut agree = 0;
    let mut nonzero = 0;
    let mut witnesses_ok = 0;
    let mut commutative_only_zero = 0;
    for k in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + k);
        let field = if k % 2 == 0 { Q } else { F101 };
        let n = 1 + (k as usize / 2) % 3;
        let c = random_circuit(n, 12, 1 + k % 4, field, &mut rng);
        let c = if k % 3 == 0 {
            c.sub(&with_swapped_products(&c)).unwrap()
        } else {
            c
        };
        let f = c.expand_bruteforce(1_000_000).unwrap();
        let oracle = f.commutative_project().is_zero();
        if oracle && !f.is_zero() {
            commutative_only_zero += 1;
        }
        let v = ks_commutative_pit(&c, None, TrialPlan::new(20, k), PitLimits::default()).unwrap();
        agree += (v.is_zero() == oracle) as usize;
        if let Some(w) = &v.witness {
            nonzero += 1;
            let (_, cap) = ks_parameters(n, c.formal_degree().unwrap());
            let poly = ks_substitute(&c, &w.weights, cap).unwrap();
            let WitnessLocation::UnivariateCoefficient { exponent } = w.location else {
                continue;
            };
            let entry = poly
                .get(exponent as usize)
                .cloned()
                .unwrap_or_else(|| field.zero());
            if poly.iter().any(|x| !x.is_zero()) && entry == w.value {
                witnesses_ok += 1;
            }
        }
    }
    within(
        start.elapsed(),
        60,
        format!(
            "{agree}/100 agree with the commutative oracle ({commutative_only_zero} commutatively zero but not \
             noncommutatively); {witnesses_ok}/{nonzero} witnesses reproduce a nonzero substitution"
        ),
    )
    .and_then(|d| check(agree == 100 && witnesses_ok == nonzero, d))
}

fn verify_fooling(n: usize, collection: &[WeightAssignment]) -> Result<(usize, usize), String> {
    let r = construct_fooling_polynomial(n, collection, Q).map_err(|e| e.to_string())?;
    let f = &r.polynomial;
    if f.is_zero() || f.terms().any(|(w, _)| w.len() != n) {
        return Err("result is zero or not homogeneous".into());
    }
    // Independent re-check: evaluate a sum-of-monomials circuit for f.
    let circuit = ArithCircuit::from_poly(f).map_err(|e| e.to_string())?;
    for w in collection {
        let a = LayeredWeightAutomaton::build(n, n, w).map_err(|e| e.to_string())?;
        let image = circuit
            .eval_on_matrices(&a.transition_matrices(Q))
            .map_err(|e| e.to_string())?;
        if !image.is_zero() {
            return Err("matrix image is not zero".into());
        }
    }
    Ok((r.constraint_rank, r.constraints_count))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [2usize, 3] {
        let universe = Universe::Grid { d: n, n };
        let range = (2 * n * n) as u64;
        for size in 1..=3 {
            // Draw collections until one leaves the system rank-deficient.
            let mut found = None;
            for seed in 0..500u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed * 31 + n as u64);
                let collection: Vec<WeightAssignment> = (0..size)
                    .map(|_| WeightAssignment::sample(universe, range, &mut rng))
                    .collect();
                match verify_fooling(n, &collection) {
                    Ok((rank, count)) => {
                        found = Some((seed, rank, count));
                        break;
                    }
                    Err(e) if e.contains("no nontrivial solution") => continue,
                    Err(e) => {
                        lines.push(format!("n={n} k={size}: {e}"));
                        ok = false;
                        break;
                    }
                }
            }
            match found {
                Some((seed, rank, count)) => {
                    ok &= rank < n.pow(n as u32);
                    lines.push(format!(
                        "n={n} k={size}: rank {rank} < {} ({count} constraints, seed {seed})",
                        n.pow(n as u32)
                    ));
                }
                None => {
                    ok = false;
                    lines.push(format!(
                        "n={n} k={size}: no rank-deficient collection found"
                    ));
                }
            }
        }
    }
    let w = WeightAssignment::new(Universe::Grid { d: 1, n: 1 }, vec![1], 2).unwrap();
    let n1 = construct_fooling_polynomial(1, &[w], Q);
    let n1_ok = matches!(
        n1,
        Err(Error::NoNontrivialSolution {
            rank: 1,
            unknowns: 1
        })
    );
    ok &= n1_ok;
    lines.push(format!(
        "n=1: {}",
        if n1_ok {
            "NoNontrivialSolution"
        } else {
            "unexpected result"
        }
    ));
    within(start.elapsed(), 120, lines.join("; ")).and_then(|d| check(ok, d))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 1.0f64;
    let mut bound_ok = true;
    for k in 0..10 {
        let size = rng.gen_range(1..=16);
        let s = random_bitset(5, size, &mut rng).unwrap();
        let e = vv_experiment(&s, 5, TrialPlan::new(10_000, 900 + k)).unwrap();
        worst = worst.min(e.p_hat);
        bound_ok &= e.at_least(0.25);
    }
    // t = 2, S = {(1,0)}: enumerate every (w_1, w_2) for the exact value.
    let v = 0b01u32;
    let mut hits = 0;
    for w1 in 0..4u32 {
        for w2 in 0..4u32 {
            let s1 = (v & w1).count_ones().is_multiple_of(2);
            let s2 = s1 && (v & w2).count_ones().is_multiple_of(2);
            hits += (s1 || s2) as u32;
        }
    }
    let enumerated = hits as f64 / 16.0;
    let e = vv_experiment(&[v], 2, TrialPlan::new(10_000, 999)).unwrap();
    let stated = 0.75;
    let exact_ok = e.consistent_with(stated);
    within(
        start.elapsed(),
        30,
        format!(
            "lowest p_hat {worst:.3} over 10 sets (t = 5, bound 0.25); t = 2 single vector: estimate {:.3} +/- {:.3}, \
             stated exact {stated}, enumerated exact {enumerated}",
            e.p_hat, e.half_width
        ),
    )
    .and_then(|d| check(bound_ok && exact_ok, d))
}

fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn cli_result(args: &[&str], jobs: &str) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ncpit"))
        .args(args)
        .args(["--jobs", jobs])
        .current_dir(repo_root())
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok(report["result"].clone())
}

fn criterion_10() -> Outcome {
    let runs: &[&[&str]] = &[
        &["pit-nc", "--circuit", "data/commutator.nc", "--seed", "11"],
        &[
            "pit-nc",
            "--circuit",
            "data/square_identity.nc",
            "--seed",
            "11",
        ],
        &["pit-comm", "--circuit", "data/square.nc", "--seed", "11"],
        &[
            "iso-estimate",
            "--family",
            "data/nonempty3.fam",
            "--seed",
            "11",
        ],
        &["iso-estimate", "--family", "data/and2.fam", "--seed", "11"],
        &[
            "iso-cover",
            "--family",
            "data/pair.fam",
            "--family",
            "data/nonempty3.fam",
            "--n",
            "3",
            "--seed",
            "11",
        ],
        &["iso-defeat", "--n", "3", "--count", "2", "--seed", "11"],
        &["ks-iso", "--seed", "11"],
        &["vv", "--t", "5", "--set-size", "8", "--seed", "11"],
        &["fool", "--n", "2", "--count", "1", "--seed", "11"],
        &[
            "stats",
            "--circuit",
            "data/commutator.nc",
            "--samples",
            "200",
            "--seed",
            "11",
        ],
        &["bench", "--circuit", "data/commutator.nc", "--seed", "11"],
    ];
    let mut identical = 0;
    let mut problems = Vec::new();
    for args in runs {
        match (cli_result(args, "1"), cli_result(args, "4")) {
            (Ok(a), Ok(b)) if a == b => identical += 1,
            (Ok(_), Ok(_)) => problems.push(format!("{} differs", args[0])),
            (Err(e), _) | (_, Err(e)) => problems.push(e),
        }
    }
    let mut detail = format!(
        "{identical}/{} runs identical under --jobs 1 and --jobs 4",
        runs.len()
    );
    if !problems.is_empty() {
        detail.push_str(&format!(" ({})", problems.join("; ")));
    }
    check(identical == runs.len(), detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", criterion_1),
        ("per-trial detection bound", criterion_2),
        (
            "automaton entry equals accepted coefficient sum",
            criterion_3,
        ),
        ("coefficient extraction", criterion_4),
        ("set-family isolation bound", criterion_5),
        ("linear-form isolation bound", criterion_6),
        ("commutative substitution test", criterion_7),
        ("fooling polynomial", criterion_8),
        ("hyperplane isolation bound", criterion_9),
        ("determinism across --jobs", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
