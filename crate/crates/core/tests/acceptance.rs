//! One line per acceptance criterion. Set `LAXGRAY_BLESS=1` to rewrite the
//! golden files from the current binary.

mod common;

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use laxgray::dac::{check_basis, interval, lambda, lambda_globe, tensor};
use laxgray::gray::{
    gray_cylinder, hyperface_cylinder, lax_shuffle_diagram, verify_globular_preservation,
    verify_gluing,
};
use laxgray::nu::{enumerate_cells, table_search, DEFAULT_CEILING};
use laxgray::pr::pr_counts;
use laxgray::span::verify_span;
use laxgray::theta::{corpus, hyperfaces, parse_cell, ThetaCell};
use laxgray::Result;

const SIX: [&str; 6] = ["[1]", "[2]", "[3]", "[1]([1])", "[1]([2])", "[2]([1],[0])"];

fn cells(names: &[&str]) -> Vec<ThetaCell> {
    names
        .iter()
        .map(|s| parse_cell(s).expect("literal cell"))
        .collect()
}

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn globe_counts() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=5 {
        let k = Arc::new(lambda_globe(n));
        let got = enumerate_cells(&k, n, DEFAULT_CEILING)?.nondegenerate_counts();
        let mut want = vec![2; n];
        want.push(1);
        if got != want {
            bad.push(format!("{n}: {got:?}"));
        }
    }
    Ok((bad.is_empty(), format!("n=0..5 {}", bad.join("; "))))
}

fn strong_steiner() -> Outcome {
    let all = corpus(7);
    let mut failures = Vec::new();
    let mut implication = true;
    for t in &all {
        let r = check_basis(&lambda(t))?;
        implication &= !r.strongly_loop_free || r.loop_free;
        if !r.all() {
            failures.push(t.to_string());
        }
    }
    Ok((
        failures.is_empty() && implication,
        format!("{} cells, failures [{}]", all.len(), failures.join(", ")),
    ))
}

fn gluing_on_globes() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=4 {
        if !verify_gluing(&ThetaCell::globe(n))?.pass() {
            bad.push(n.to_string());
        }
    }
    Ok((
        bad.is_empty(),
        format!("n=0..4 failures [{}]", bad.join(", ")),
    ))
}

fn cylinder_comparison() -> Outcome {
    let mut bad = Vec::new();
    for t in cells(&SIX) {
        let glob = verify_globular_preservation(&t)?.pass();
        let glue = verify_gluing(&t)?.pass();
        if !(glob && glue) {
            bad.push(format!("{t} globular={glob} gluing={glue}"));
        }
    }
    Ok((
        bad.is_empty(),
        format!("six cells, failures [{}]", bad.join(", ")),
    ))
}

fn pr_oracle() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for t in cells(&SIX) {
        let nu = gray_cylinder(&t, 4, DEFAULT_CEILING)?.counts();
        let pr = pr_counts(std::slice::from_ref(&t), 4)?;
        let nu: Vec<u64> = nu.iter().map(|&c| c as u64).collect();
        ok &= nu == pr;
        rows.push(format!("{t} {nu:?}/{pr:?}"));
    }
    Ok((ok, rows.join(" ")))
}

fn hyperface_formulas() -> Outcome {
    let mut total = 0;
    let mut bad = Vec::new();
    for t in cells(&["[2]", "[3]", "[1]([1])", "[2]([1],[0])"]) {
        for face in hyperfaces(&t) {
            total += 1;
            let h = hyperface_cylinder(&face)?;
            if !h.agree {
                bad.push(format!("{t} {}", h.label));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{total} faces, failures [{}]", bad.join(", ")),
    ))
}

fn spans() -> Outcome {
    let mut bad = Vec::new();
    let mut squares = 0;
    for t in cells(&[
        "[0]",
        "[1]",
        "[2]",
        "[3]",
        "[4]",
        "[1]([1])",
        "[2]([1],[0])",
        "[1]([2])",
    ]) {
        let r = verify_span(&t, DEFAULT_CEILING)?;
        squares += r.squares.len();
        if !(r.pass() && r.diamonds.iter().all(|&d| d)) {
            bad.push(format!("{t} at {:?}", r.first_failure()));
        }
    }
    Ok((
        bad.is_empty(),
        format!("{squares} squares, failures [{}]", bad.join(", ")),
    ))
}

fn algebraic_invariants() -> Outcome {
    let mut complexes = 0;
    let mut dd = true;
    for t in corpus(7) {
        complexes += 1;
        dd &= common::is_chain_complex(&lambda(&t))?;
    }
    for t in corpus(5) {
        complexes += 1;
        dd &= common::is_chain_complex(&tensor(&interval(), &lambda(&t)))?;
        for piece in lax_shuffle_diagram(&t)?.pieces {
            complexes += 1;
            dd &= common::is_chain_complex(&piece.complex)?;
        }
    }
    let mut assoc = true;
    for p in 0..=2 {
        for q in 0..=2 {
            for r in 0..=2 {
                assoc &= common::associator_is_iso(
                    &lambda_globe(p),
                    &lambda_globe(q),
                    &lambda_globe(r),
                )?;
            }
        }
    }
    let k = Arc::new(tensor(&interval(), &lambda_globe(2)));
    let (instances, failures) = common::exchange_law(&enumerate_cells(&k, 3, DEFAULT_CEILING)?);
    Ok((
        dd && assoc && instances > 0 && failures == 0,
        format!(
            "d∘d,e∘d on {complexes} complexes {dd}; associator on 27 triples {assoc}; exchange {instances} instances {failures} failures"
        ),
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, k) in [
        ("λ1⊗λ1", tensor(&interval(), &interval())),
        ("λ1⊗λ2", tensor(&interval(), &lambda_globe(2))),
    ] {
        let top = k.top_degree();
        let k = Arc::new(k);
        let closure = enumerate_cells(&k, top, DEFAULT_CEILING)?;
        let search = table_search(&k, top, 3)?;
        let same = (0..=top).all(|d| closure.cells(d) == search[d].as_slice());
        ok &= same;
        notes.push(format!("{name} {:?} {same}", closure.counts()));
    }
    Ok((ok, notes.join(", ")))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_laxgray"))
        .args(args)
        .output()
        .expect("binary runs");
    let mut bytes = format!(
        "$ laxgray {} [exit {}]\n",
        args.join(" "),
        out.status.code().unwrap_or(-1)
    )
    .into_bytes();
    bytes.extend(out.stdout);
    bytes
}

fn golden() -> Outcome {
    let corpus = corpus(5);
    let bless = std::env::var_os("LAXGRAY_BLESS").is_some();
    let mut notes = Vec::new();
    let mut ok = true;
    for (file, cmd) in [
        ("counts.txt", vec!["counts"]),
        ("verify_gray.txt", vec!["verify", "gray"]),
        ("emit.txt", vec!["emit"]),
    ] {
        let runs: Vec<Vec<u8>> = (0..3)
            .map(|_| {
                corpus
                    .iter()
                    .flat_map(|t| {
                        let s = t.to_string();
                        let mut args = cmd.clone();
                        args.push(&s);
                        run_cli(&args)
                    })
                    .collect()
            })
            .collect();
        let stable = runs.windows(2).all(|w| w[0] == w[1]);
        let path = golden_dir().join(file);
        if bless {
            std::fs::create_dir_all(golden_dir()).expect("golden dir");
            std::fs::write(&path, &runs[0]).expect("write golden");
        }
        let matches = std::fs::read(&path).is_ok_and(|g| g == runs[0]);
        ok &= stable && matches;
        notes.push(format!("{file} stable={stable} golden={matches}"));
    }
    Ok((ok, format!("{} cells: {}", corpus.len(), notes.join(", "))))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("globe fidelity", Duration::from_secs(1), globe_counts),
        (
            "strong Steiner corpus",
            Duration::from_secs(10),
            strong_steiner,
        ),
        (
            "gluing on globes",
            Duration::from_secs(10),
            gluing_on_globes,
        ),
        ("cylinder comparison", Duration::from_secs(60), cylinder_comparison),
        ("product rule counts", Duration::from_secs(60), pr_oracle),
        (
            "hyperface cylinders",
            Duration::from_secs(60),
            hyperface_formulas,
        ),
        ("span", Duration::from_secs(60), spans),
        ("algebraic invariants", Duration::MAX, algebraic_invariants),
        ("table search oracle", Duration::MAX, oracle_equivalence),
        ("CLI determinism", Duration::MAX, golden),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass && elapsed < budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} ({} ms) {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_millis()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
