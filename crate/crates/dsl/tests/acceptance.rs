//! Acceptance suite. Each criterion runs under its time limit and prints one
//! PASS or FAIL line; the process exits nonzero if any criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use handlecalc::algebra::{congruence_search, determinant, parity, signature, FormInvariants, IntMatrix, Parity};
use handlecalc::heegaard::{h1, HeegaardDiagram};
use handlecalc::kirby::{boundary_h1, closed_invariants, handle_slide, KirbyDiagram};
use handlecalc::legendrian::{
    classical_invariants, stabilize, stabilize_component, to_kirby, validate_front, FrontDiagram, FrontEvent,
};
use handlecalc::openbook::{five_invariants, identify_known, OpenBook};
use handlecalc::surface::{
    applicable_moves, apply_move, boundary_components, canonical_word, classify, normalize, verify_trace, ArrowToken,
    Sign, SurfaceClass, SurfaceMove, SurfaceWord,
};
use handlecalc_dsl::trace::{TraceBody, TraceRecord};
use handlecalc_dsl::{check_trace, CheckOutcome};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn three_crosscaps() -> Outcome {
    let w: SurfaceWord = "1+ 2+ 1- 2- 3+ 3+".parse().map_err(err)?;
    let (out, trace) = normalize(&w).map_err(err)?;
    let n3 = SurfaceClass::crosscaps(3);
    ensure!(
        classify(&w).map_err(err)? == n3,
        "start word class is {}",
        classify(&w).map_err(err)?
    );
    ensure!(
        classify(&out).map_err(err)? == n3,
        "end word class is {}",
        classify(&out).map_err(err)?
    );
    ensure!(
        out.relabeled() == canonical_word(n3),
        "end word {out} is not the model word"
    );
    let text = TraceRecord {
        line: 1,
        name: "w".into(),
        body: TraceBody::Surface(trace),
    }
    .to_string();
    let outcomes = check_trace(&text, Some(&w.to_string()), Some(&out.to_string())).map_err(err)?;
    ensure!(
        matches!(outcomes.as_slice(), [CheckOutcome::Accepted { .. }]),
        "checker says {outcomes:?}"
    );
    Ok(())
}

/// All words with at most three labels, up to renaming, with every sign pattern.
fn small_words() -> Vec<SurfaceWord> {
    fn orders(n: usize, cur: &mut Vec<usize>, counts: &mut [usize], out: &mut Vec<Vec<usize>>) {
        if cur.len() == 2 * n {
            out.push(cur.clone());
            return;
        }
        let opened = counts.iter().filter(|&&c| c > 0).count();
        for l in 0..n.min(opened + 1) {
            if counts[l] < 2 {
                counts[l] += 1;
                cur.push(l);
                orders(n, cur, counts, out);
                cur.pop();
                counts[l] -= 1;
            }
        }
    }
    let mut words = Vec::new();
    for n in 0..=3 {
        let mut out = Vec::new();
        orders(n, &mut Vec::new(), &mut vec![0; n], &mut out);
        for order in out {
            for mask in 0..(1u32 << (2 * n)) {
                let tokens = order
                    .iter()
                    .enumerate()
                    .map(|(k, &l)| {
                        let sign = if mask >> k & 1 == 1 { Sign::Minus } else { Sign::Plus };
                        ArrowToken::new(["a", "b", "c"][l], sign)
                    })
                    .collect();
                words.push(SurfaceWord::new(tokens));
            }
        }
    }
    words
}

fn surface_brute_force() -> Outcome {
    let words = small_words();
    ensure!(words.len() == 1013, "enumerated {} words", words.len());
    let mut normalized = 0;
    for w in &words {
        let class = classify(w).map_err(err)?;
        let nb = (w.handle_count(), boundary_components(w).map_err(err)?);
        for m in applicable_moves(w) {
            let v = apply_move(w, &m).map_err(err)?;
            ensure!(
                classify(&v).map_err(err)? == class,
                "{w} --{m}--> {v} changes the class"
            );
            if matches!(m, SurfaceMove::Slide { .. }) {
                let nb2 = (v.handle_count(), boundary_components(&v).map_err(err)?);
                ensure!(nb2 == nb, "{w} --{m}--> {v} changes (n, b)");
            }
        }
        if nb.1 == 1 {
            let (out, trace) = normalize(w).map_err(|e| format!("{w}: {e}"))?;
            ensure!(verify_trace(&trace), "trace for {w} does not replay");
            ensure!(out.relabeled() == canonical_word(class), "{w} normalizes to {out}");
            normalized += 1;
        }
    }
    ensure!(normalized > 0, "no b = 1 words");
    Ok(())
}

fn matrix(rows: &[&[i64]]) -> IntMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    IntMatrix::new(
        n,
        m,
        rows.iter().flat_map(|r| r.iter().map(|&x| BigInt::from(x))).collect(),
    )
    .unwrap()
}

fn blown_up_forms() -> Outcome {
    let a = matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
    let b = matrix(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
    for m in [&a, &b] {
        let inv = FormInvariants::of(m).map_err(err)?;
        ensure!(
            inv.rank == 3 && inv.signature == -1 && inv.parity == Parity::Odd,
            "invariants of {m}: {inv:?}"
        );
    }
    let cert = congruence_search(&a, &b, 100_000)
        .map_err(err)?
        .ok_or("no certificate found")?;
    ensure!(cert.source == a && cert.target == b, "certificate endpoints differ");
    let end = cert.replay().map_err(|e| format!("{e:?}"))?;
    ensure!(end == b, "replay ends at {end}");
    Ok(())
}

fn random_diagram(rng: &mut StdRng) -> KirbyDiagram {
    let k = rng.gen_range(1..=4);
    let g = rng.gen_range(0..=2);
    let mut linking = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let x = BigInt::from(rng.gen_range(-3i64..=3));
            linking.set(i, j, x.clone());
            linking.set(j, i, x);
        }
    }
    let incidence = IntMatrix::new(
        g,
        k,
        (0..g * k).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect(),
    )
    .unwrap();
    KirbyDiagram::new(g, linking, incidence).unwrap()
}

fn kirby_invariance() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x4b49_5242);
    for _ in 0..500 {
        let d = random_diagram(&mut rng);
        let k = d.two_handle_count();
        let before = (
            boundary_h1(&d),
            signature(d.linking()).map_err(err)?,
            determinant(d.linking()).map_err(err)?,
            parity(d.linking()).map_err(err)?,
        );
        let mut cur = d.clone();
        for _ in 0..rng.gen_range(0..=10) {
            let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
            if i == j {
                continue;
            }
            let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
            cur = handle_slide(&cur, i, j, eps).map_err(err)?;
        }
        let after = (
            boundary_h1(&cur),
            signature(cur.linking()).map_err(err)?,
            determinant(cur.linking()).map_err(err)?,
            parity(cur.linking()).map_err(err)?,
        );
        ensure!(before == after, "{d} became {cur}");
    }
    Ok(())
}

fn heegaard_examples() -> Outcome {
    let cases: [(usize, &[&str], &str); 4] = [(0, &[], "0"), (1, &["x"], "0"), (1, &["1"], "Z"), (1, &["x x"], "Z/2")];
    for (genus, relators, expected) in cases {
        let d = HeegaardDiagram::parse(genus, relators).map_err(err)?;
        let got = h1(&d).to_string();
        ensure!(got == expected, "genus {genus} {relators:?}: h1 = {got}");
    }
    Ok(())
}

fn bookkeeping() -> Outcome {
    for m in (-10i64..=10).filter(|&m| m != 0) {
        let order = boundary_h1(&KirbyDiagram::unknot(m)).order();
        ensure!(order == Some(BigInt::from(m.abs())), "unknot {m}: order {order:?}");
    }
    let chi = |d: &KirbyDiagram| closed_invariants(d).map(|c| c.euler_characteristic).map_err(err);
    ensure!(chi(&KirbyDiagram::empty())? == 2, "empty diagram");
    ensure!(chi(&KirbyDiagram::one_handles_only(1))? == 0, "one 1-handle");
    let hopf = closed_invariants(&KirbyDiagram::hopf(0, 0)).map_err(err)?;
    ensure!(
        hopf.euler_characteristic == 4 && hopf.signature == 0 && hopf.parity == Some(Parity::Even),
        "Hopf link: {hopf:?}"
    );
    Ok(())
}

fn open_books() -> Outcome {
    let tuple = |d: KirbyDiagram| -> Result<Vec<String>, String> {
        let inv = five_invariants(&OpenBook::new(d)).map_err(err)?;
        Ok(inv.homology.iter().map(|g| g.to_string()).collect())
    };
    ensure!(tuple(KirbyDiagram::empty())? == ["Z", "0", "0", "0", "0", "Z"], "S5");
    ensure!(
        tuple(KirbyDiagram::one_handles_only(1))? == ["Z", "Z", "0", "0", "Z", "Z"],
        "S1xS4"
    );
    ensure!(
        tuple(KirbyDiagram::unknot(0))? == ["Z", "0", "Z", "Z", "0", "Z"],
        "S2xS3"
    );
    for m in -5i64..=5 {
        let name = identify_known(&OpenBook::new(KirbyDiagram::unknot(m)));
        let want = if m % 2 == 0 { "S2xS3" } else { "S2x~S3" };
        ensure!(name == Some(want), "framing {m}: {name:?}");
        let a = five_invariants(&OpenBook::new(KirbyDiagram::unknot(m))).map_err(err)?;
        let b = five_invariants(&OpenBook::new(KirbyDiagram::unknot(m + 1))).map_err(err)?;
        ensure!(a.homology == b.homology, "homology differs for {m} and {}", m + 1);
        ensure!(a.w2_parity != b.w2_parity, "parity agrees for {m} and {}", m + 1);
    }
    Ok(())
}

fn random_front(rng: &mut StdRng) -> FrontDiagram {
    let mut events = vec![FrontEvent::LeftCusp(0)];
    let mut n = 2usize;
    for _ in 0..rng.gen_range(1..16) {
        let s = rng.gen_range(0..8usize);
        match rng.gen_range(0..3) {
            0 if n < 8 => {
                events.push(FrontEvent::LeftCusp(s % (n + 1)));
                n += 2;
            }
            1 => events.push(FrontEvent::Crossing(s % (n - 1))),
            2 if n >= 4 => {
                events.push(FrontEvent::RightCusp(s % (n - 1)));
                n -= 2;
            }
            _ => {}
        }
    }
    while n > 0 {
        events.push(FrontEvent::RightCusp(0));
        n -= 2;
    }
    FrontDiagram::new(events)
}

fn legendrian() -> Outcome {
    let u = FrontDiagram::standard_unknot();
    let tb = classical_invariants(&u).map_err(err)?[0].tb;
    ensure!(tb == -1, "unknot tb = {tb}");
    let framing = to_kirby(std::slice::from_ref(&u))
        .map_err(err)?
        .linking()
        .get(0, 0)
        .clone();
    ensure!(framing == BigInt::from(-2), "unknot framing = {framing}");

    let mut rng = StdRng::seed_from_u64(0x46_524f_4e54);
    for _ in 0..200 {
        let f = random_front(&mut rng);
        validate_front(&f).map_err(err)?;
        let before = classical_invariants(&f).map_err(err)?;
        let comp = rng.gen_range(0..before.len());
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let after = classical_invariants(&stabilize_component(&f, comp, sign).map_err(err)?).map_err(err)?;
        ensure!(
            after[comp].tb == before[comp].tb - 1,
            "stabilizing {f} gives tb {}",
            after[comp].tb
        );
    }

    let t = FrontDiagram::right_handed_trefoil();
    let fixtures = [
        u.clone(),
        t.clone(),
        stabilize(&u, 1).map_err(err)?,
        stabilize(&u, -1).map_err(err)?,
        stabilize(&t, 1).map_err(err)?,
        stabilize(&t, -1).map_err(err)?,
    ];
    for f in &fixtures {
        for c in classical_invariants(f).map_err(err)? {
            ensure!(
                (c.tb + c.rotation).rem_euclid(2) == 1,
                "{f}: tb {} rot {}",
                c.tb,
                c.rotation
            );
        }
    }
    Ok(())
}

fn cli(args: &[&str]) -> Result<Output, String> {
    Command::new(env!("CARGO_BIN_EXE_handlecalc"))
        .args(args)
        .output()
        .map_err(err)
}

fn run_script(script: &Path, trace: &Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let out = cli(&["run", script.to_str().unwrap(), "--trace-out", trace.to_str().unwrap()])?;
    ensure!(
        out.status.success(),
        "{} failed: {}",
        script.display(),
        String::from_utf8_lossy(&out.stderr)
    );
    Ok((out.stdout, fs::read(trace).map_err(err)?))
}

/// Replaces the `index`-th MOVE line (1-based) of a trace file.
fn corrupt(trace: &str, index: usize, replacement: &str) -> String {
    let mut seen = 0;
    let lines: Vec<String> = trace
        .lines()
        .map(|l| {
            if l.starts_with("MOVE ") {
                seen += 1;
                if seen == index {
                    return replacement.to_string();
                }
            }
            l.to_string()
        })
        .collect();
    lines.join("\n") + "\n"
}

fn cli_determinism() -> Outcome {
    let scripts = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scripts");
    let dir = tempfile::tempdir().map_err(err)?;
    let mut traces = Vec::new();
    for name in ["three_crosscaps.hc", "s2xs2_blowup.hc"] {
        let script = scripts.join(name);
        let first = run_script(&script, &dir.path().join(format!("{name}.1")))?;
        let second = run_script(&script, &dir.path().join(format!("{name}.2")))?;
        ensure!(first == second, "{name}: reports or traces differ between runs");
        traces.push(String::from_utf8(first.1).map_err(err)?);
    }

    let cases = [
        (&traces[0], "MOVE slide at=99 side=right over=3 kind=twisted"),
        (&traces[1], "MOVE add i=1 j=1 eps=1"),
    ];
    for (k, (trace, bad)) in cases.into_iter().enumerate() {
        let path = dir.path().join(format!("corrupt{k}.trace"));
        // the second move of the last trace in the file
        let last = trace.rfind("TRACE ").unwrap_or(0);
        let moves_before = trace[..last].matches("\nMOVE ").count();
        fs::write(&path, corrupt(trace, moves_before + 2, bad)).map_err(err)?;
        let out = cli(&["check", path.to_str().unwrap()])?;
        let stdout = String::from_utf8_lossy(&out.stdout);
        ensure!(
            out.status.code() == Some(1),
            "corrupted trace exits {:?}",
            out.status.code()
        );
        ensure!(stdout.contains("rejected at step 2"), "checker output: {stdout}");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "three-crosscap word normalizes with a checked trace",
            three_crosscaps,
            1,
        ),
        (
            "surface brute force over words with at most 3 labels",
            surface_brute_force,
            60,
        ),
        ("blown-up hyperbolic form congruent to diag(1,-1,-1)", blown_up_forms, 5),
        ("Kirby slides preserve invariants on 500 diagrams", kirby_invariance, 30),
        ("Heegaard first homology examples", heegaard_examples, 1),
        ("boundary and Euler characteristic bookkeeping", bookkeeping, 1),
        ("open book homology and identification", open_books, 1),
        ("Legendrian fronts and stabilization", legendrian, 5),
        (
            "CLI runs are deterministic and corrupted traces are rejected",
            cli_determinism,
            5,
        ),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit} s"))
            }
        });
        match result {
            Ok(()) => println!("PASS {} {name} ({elapsed:.2?}, limit {limit} s)", k + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
