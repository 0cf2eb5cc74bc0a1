//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `APS_SEED` overrides the RNG seed. The process fails only when the set of
//! failing criteria differs from `KNOWN_FAILING`.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arith_series::annihilator::{search_annihilator, verify_relation};
use arith_series::arith_sieve::{sieve_cm, sieve_liouville, sieve_mobius, ArithSequence, PrimeAssignment, Sign};
use arith_series::cli::{cache, run};
use arith_series::error::Error;
use arith_series::linalg::modular;
use arith_series::periodicity::{detect_eventual_period, refute_period_cm, verify_witness, PeriodClaim};
use arith_series::poly::IntPolynomial;
use arith_series::primes::{is_prime, primes_up_to};
use arith_series::rationality::{classify_prefix, hankel_matrix, hankel_rank, hankel_rank_profile, Classification};
use arith_series::root_bounds::{cauchy_radius, count_roots_in_disk_adaptive};
use arith_series::series_eval::{digits_in_base, partial_sum_exact};
use arith_series::zero_runs::{crt_zero_run, verify_zero_run};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEFAULT_SEED: u64 = 0x5eed_a75;

/// Hankel determinants of orders 4 and 7 of λ are exactly zero.
const KNOWN_FAILING: &[u32] = &[5];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

/// (−1)^Ω(n) and μ(n) by plain trial division.
fn trial_division(mut n: u64) -> (i8, i8) {
    let (mut omega, mut squarefree, mut distinct) = (0u32, true, 0u32);
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        omega += e;
        distinct += (e > 0) as u32;
        squarefree &= e < 2;
        d += 1;
    }
    if n > 1 {
        omega += 1;
        distinct += 1;
    }
    let lam = if omega % 2 == 0 { 1 } else { -1 };
    let mu = if !squarefree { 0 } else if distinct % 2 == 0 { 1 } else { -1 };
    (lam, mu)
}

fn c1_sieve_oracle(_: &mut ChaCha8Rng) -> Outcome {
    const N: usize = 100_000;
    let lam = sieve_liouville(N).map_err(e2s)?;
    let mu = sieve_mobius(N).map_err(e2s)?;
    for n in 1..=N {
        let (l, m) = trial_division(n as u64);
        ensure(lam.get(n) == l && mu.get(n) == m, || format!("mismatch at n = {n}"))?;
    }
    Ok(format!("lambda and mu agree with trial division for n <= {N}"))
}

fn random_assignment(rng: &mut ChaCha8Rng) -> PrimeAssignment {
    let sign = |b: bool| if b { Sign::Plus } else { Sign::Minus };
    let primes = primes_up_to(200);
    loop {
        let default = sign(rng.gen());
        let mut ex = Vec::new();
        for &p in &primes {
            if rng.gen_bool(0.3) {
                ex.push((p as u64, sign(rng.gen())));
            }
        }
        let a = PrimeAssignment::new(default, ex).unwrap();
        if a.smallest_negative_prime().is_some() {
            return a;
        }
    }
}

fn c2_complete_multiplicativity(rng: &mut ChaCha8Rng) -> Outcome {
    const N: usize = 10_000;
    let mut seqs = vec![sieve_liouville(N).map_err(e2s)?];
    for _ in 0..5 {
        seqs.push(sieve_cm(&random_assignment(rng), N).map_err(e2s)?);
    }
    let mut pairs = 0u64;
    for s in &seqs {
        for m in 1..=N {
            for n in 1..=N / m {
                ensure(s.get(m * n) == s.get(m) * s.get(n), || format!("f({m}*{n}) fails for {}", s.source().name()))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("f(mn) = f(m)f(n) on {pairs} pairs across 6 functions"))
}

fn c3_lambda_not_periodic(rng: &mut ChaCha8Rng) -> Outcome {
    let lam = sieve_liouville(1_000_000).map_err(e2s)?;
    let found = detect_eventual_period(&lam, 1000, 1000).map_err(e2s)?;
    ensure(found.is_none(), || format!("period {found:?} reported"))?;
    let liouville = PrimeAssignment::liouville();
    for _ in 0..100 {
        let claim = PeriodClaim::new(rng.gen_range(0..=1000), rng.gen_range(1..=1000)).map_err(e2s)?;
        let w = refute_period_cm(&liouville, claim).map_err(e2s)?;
        let (m, k) = (claim.preperiod, claim.period);
        ensure(w.a > m && w.b > m && (w.b - w.a) % k == 0, || format!("bad witness shape {w}"))?;
        let (fa, fb) = (lam.get(w.a as usize), lam.get(w.b as usize));
        ensure(fb == -fa && fa != 0, || format!("no sign flip for {w}"))?;
        ensure(verify_witness(&lam, &w).map_err(e2s)?, || format!("verify_witness rejected {w}"))?;
    }
    Ok("no period with M, k <= 1000 on N = 10^6; 100 random claims refuted".into())
}

fn c4_rational_round_trip(rng: &mut ChaCha8Rng) -> Outcome {
    const N: usize = 500;
    let mut worst_rank = 0;
    for trial in 0..200 {
        let m = rng.gen_range(0..=20usize);
        let k = rng.gen_range(1..=20usize);
        let pm = |r: &mut ChaCha8Rng| if r.gen() { 1i8 } else { -1 };
        let head: Vec<i8> = (0..m).map(|_| pm(rng)).collect();
        let body: Vec<i8> = (0..k).map(|_| pm(rng)).collect();
        let v: Vec<i8> = (0..N).map(|i| if i < m { head[i] } else { body[(i - m) % k] }).collect();
        let seq = ArithSequence::from_values(&v).map_err(e2s)?;
        let Classification::RationalCandidate { form, .. } = classify_prefix(&seq, 20, 20).map_err(e2s)? else {
            return Err(format!("trial {trial}: planted (M={m}, k={k}) not classified rational"));
        };
        ensure(form.reproduces(&seq), || format!("trial {trial}: P/Q does not re-expand"))?;
        let bound = m + k;
        let rank = hankel_rank(&seq, N / 2).map_err(e2s)?;
        ensure(rank <= bound, || format!("trial {trial}: rank H_250 = {rank} > M + k = {bound}"))?;
        worst_rank = worst_rank.max(rank);
        let dets = hankel_rank_profile(&seq, bound + 3).map_err(e2s)?;
        ensure(dets[bound..].iter().all(Zero::is_zero), || format!("trial {trial}: nonzero det beyond M + k"))?;
    }
    Ok(format!("200 planted sequences re-expanded to N = {N}; Hankel rank <= M + k (max {worst_rank})"))
}

fn random_prime_62(rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let c = rng.gen_range(1u64 << 61..1u64 << 62) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

fn c5_lambda_hankel_nonzero(rng: &mut ChaCha8Rng) -> Outcome {
    let lam = sieve_liouville(15).map_err(e2s)?;
    let dets = hankel_rank_profile(&lam, 8).map_err(e2s)?;
    let primes = [random_prime_62(rng), random_prime_62(rng)];
    for p in primes {
        for (i, d) in dets.iter().enumerate() {
            let m = modular::det_mod(&hankel_matrix(&lam, i + 1), p);
            ensure(m == modular::residue(d, p), || format!("order {} disagrees mod {p}", i + 1))?;
        }
    }
    let shown: Vec<String> = dets.iter().map(|d| d.to_string()).collect();
    let zero: Vec<usize> = (1..=8).filter(|&i| dets[i - 1].is_zero()).collect();
    ensure(zero.is_empty(), || {
        format!("det H_1..H_8 = [{}] agree mod {primes:?}, but orders {zero:?} vanish", shown.join(", "))
    })?;
    Ok(format!("det H_1..H_8 = [{}], all nonzero", shown.join(", ")))
}

fn c6_annihilator(rng: &mut ChaCha8Rng) -> Outcome {
    const T: usize = 32;
    const D: usize = 12;
    for trial in 0..50 {
        let m = rng.gen_range(0..=8usize);
        let k = rng.gen_range(1..=4usize);
        let vals = [-1i8, 0, 1];
        let head: Vec<i8> = (0..m).map(|_| vals[rng.gen_range(0..3)]).collect();
        let body: Vec<i8> = (0..k).map(|_| vals[rng.gen_range(0..3)]).collect();
        let v: Vec<i8> = (0..2 * T).map(|i| if i < m { head[i] } else { body[(i - m) % k] }).collect();
        let seq = ArithSequence::from_values(&v).map_err(e2s)?;
        let cand = search_annihilator(&seq, T, 1, D)
            .map_err(e2s)?
            .ok_or_else(|| format!("trial {trial}: nothing found for (M={m}, k={k})"))?;
        ensure(verify_relation(&seq, &cand, 2 * T).map_err(e2s)?, || format!("trial {trial}: relation fails at 2T"))?;
    }
    let lam = sieve_liouville(96).map_err(e2s)?;
    let found = search_annihilator(&lam, 48, 2, 3).map_err(e2s)?;
    ensure(found.is_none(), || format!("lambda relation reported:\n{}", found.unwrap()))?;
    Ok("50 planted order-1 relations recovered and verified at 2T; lambda empty at T=48, n=2, d=3".into())
}

fn c7_root_containment(rng: &mut ChaCha8Rng) -> Outcome {
    let mut max_bits = 0;
    for trial in 0..1000 {
        let deg = rng.gen_range(1..=10usize);
        let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-100..=100)).collect();
        while c[deg] == 0 {
            c[deg] = rng.gen_range(-100..=100);
        }
        let p = IntPolynomial::from_i64(&c);
        let r = cauchy_radius(&p).map_err(e2s)?;
        let (n, bits) = count_roots_in_disk_adaptive(&p, &r).map_err(|e| format!("trial {trial} {c:?}: {e}"))?;
        ensure(n == deg, || format!("trial {trial} {c:?}: {n} roots counted, degree {deg}"))?;
        max_bits = max_bits.max(bits);
    }
    Ok(format!("1000 polynomials, every root inside r; max precision used {max_bits} bits"))
}

fn c8_zero_runs(_: &mut ChaCha8Rng) -> Outcome {
    for l in 1..=8 {
        let c = crt_zero_run(l).map_err(e2s)?;
        ensure(verify_zero_run(&c), || format!("L = {l} fails verification"))?;
    }
    let first_primes = [2u64, 3, 5];
    for (l, want) in [(1usize, 3u64), (2, 7), (3, 547)] {
        let brute = (0u64..)
            .find(|&y| (0..l).all(|i| (y + i as u64 + 1) % (first_primes[i] * first_primes[i]) == 0))
            .unwrap();
        let got = crt_zero_run(l).map_err(e2s)?.start.to_u64();
        ensure(brute == want && got == Some(want), || format!("L = {l}: crt {got:?}, brute force {brute}"))?;
    }
    Ok("L <= 8 verified; x = 3, 7, 547 match brute force".into())
}

fn c9_digits(_: &mut ChaCha8Rng) -> Outcome {
    let lam = sieve_liouville(64).map_err(e2s)?;
    let mu = sieve_mobius(64).map_err(e2s)?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let d2 = digits_in_base(&lam, 2, 64).map_err(e2s)?;
    ensure(d2.reconstruct() == partial_sum_exact(&lam, 64, &half).map_err(e2s)?, || "lambda base 2".into())?;
    ensure(d2.identity_verified == Some(true), || "affine identity".into())?;
    let d3 = digits_in_base(&mu, 3, 64).map_err(e2s)?;
    ensure(d3.reconstruct() == partial_sum_exact(&mu, 64, &third).map_err(e2s)?, || "mu base 3".into())?;
    ensure(d3.digits == mu.to_vec(), || "mu digits differ from coefficients".into())?;
    Ok("digit reconstructions equal F_64(1/2) and F_64(1/3); mu digits verbatim".into())
}

fn aps(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("aps").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned())
}

fn c10_cli_and_cache(_: &mut ChaCha8Rng) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let golden = |n: &str| {
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(n)).unwrap_or_default()
    };
    fs::write(p("flip3.txt"), "default: +1\n3: -1\n").map_err(|e| e.to_string())?;
    let ones = p("ones.aps");
    let lam = p("lam.aps");
    aps(&["sieve", "--func", "literal", "--values", "1,1,1,1,1,1,1,1,1,1,1,1", "--cache", &ones]);
    aps(&["sieve", "--func", "liouville", "--n", "100", "--cache", &lam]);
    let flip = p("flip3.txt");
    let transcripts: [(&str, Vec<&str>); 5] = [
        ("zerorun_3.txt", vec!["zerorun", "--length", "3", "--verify"]),
        ("rootbound_z2m1.txt", vec!["rootbound", "--poly", "-1,0,1"]),
        ("classify_ones.txt", vec!["classify", "--cache", &ones, "--mmax", "3", "--kmax", "3"]),
        ("refute_flip3.txt", vec!["refute", "--assignment", &flip, "--preperiod", "4", "--period", "6"]),
        ("annihilate_lambda.txt", vec!["annihilate", "--cache", &lam, "--trunc", "48", "--order", "2", "--deg", "3"]),
    ];
    for (name, args) in &transcripts {
        let first = aps(args);
        ensure(first == (0, golden(name)) && aps(args) == first, || format!("transcript {name} differs"))?;
    }

    let cm = PrimeAssignment::new(Sign::Plus, [(3, Sign::Minus), (11, Sign::Minus)]).unwrap();
    for n in [1usize, 2, 3, 4, 5, 1_000, 1_000_000] {
        for s in [sieve_liouville(n), sieve_mobius(n), sieve_cm(&cm, n)] {
            let s = s.map_err(e2s)?;
            let path = dir.path().join("rt.aps");
            cache::cache_write(&s, &path).map_err(e2s)?;
            let back = cache::cache_read(&path).map_err(e2s)?;
            ensure(back == s, || format!("round trip N = {n} ({})", s.source().name()))?;
        }
    }
    let bytes = cache::encode(&sieve_liouville(1000).map_err(e2s)?);
    fs::write(p("cut.aps"), &bytes[..bytes.len() - 3]).map_err(|e| e.to_string())?;
    let (code, _) = aps(&["classify", "--cache", &p("cut.aps"), "--mmax", "1", "--kmax", "1"]);
    ensure(code == 2, || format!("truncated cache exit {code}"))?;
    // one 0b10 code with a recomputed checksum
    let mut bad = bytes[..bytes.len() - 8].to_vec();
    bad[18] = (bad[18] & !0b11) | 0b10;
    let crc = crc::Crc::<u64>::new(&crc::CRC_64_XZ).checksum(&bad);
    bad.extend_from_slice(&crc.to_le_bytes());
    ensure(matches!(cache::decode(&bad), Err(Error::CorruptCache(_))), || "0b10 code accepted".into())?;
    fs::write(p("bad.aps"), &bad).map_err(|e| e.to_string())?;
    let (code, _) = aps(&["classify", "--cache", &p("bad.aps"), "--mmax", "1", "--kmax", "1"]);
    ensure(code == 2, || format!("bad-code cache exit {code}"))?;
    Ok("5 golden transcripts stable; round trips for N up to 10^6; truncation and 0b10 rejected".into())
}

type Criterion = (u32, &'static str, u64, fn(&mut ChaCha8Rng) -> Outcome);

fn main() -> ExitCode {
    let seed = std::env::var("APS_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    println!("acceptance seed = {seed}");
    let criteria: [Criterion; 10] = [
        (1, "sieve-oracle equivalence", 5, c1_sieve_oracle),
        (2, "complete multiplicativity", 5, c2_complete_multiplicativity),
        (3, "lambda not eventually periodic", 60, c3_lambda_not_periodic),
        (4, "rational round trip", 30, c4_rational_round_trip),
        (5, "lambda Hankel nonvanishing", 10, c5_lambda_hankel_nonzero),
        (6, "annihilator plant and recover", 60, c6_annihilator),
        (7, "root containment", 60, c7_root_containment),
        (8, "CRT zero runs", 5, c8_zero_runs),
        (9, "digit/value consistency", 1, c9_digits),
        (10, "CLI determinism and cache integrity", 10, c10_cli_and_cache),
    ];
    let mut failing = Vec::new();
    for (id, name, limit, check) in criteria {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(id as u64));
        let start = Instant::now();
        let outcome = check(&mut rng);
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; over the {limit} s limit")),
            o => o,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("[{tag}] {id}: {name} ({:.2} s, limit {limit} s): {msg}", took.as_secs_f64());
        if outcome.is_err() {
            failing.push(id);
        }
    }
    if failing == KNOWN_FAILING {
        println!("failing criteria {failing:?} match the expected set");
        ExitCode::SUCCESS
    } else {
        println!("failing criteria {failing:?}, expected {KNOWN_FAILING:?}");
        ExitCode::FAILURE
    }
}
