//! One line per acceptance criterion. Criteria recorded as unattainable
//! print FAIL without failing the run, provided they fail exactly as
//! recorded; any other failure makes the run fail.

use std::process::Command;
use std::time::Instant;

use mmforge::criteria::{c_nu, matches_printed, pcb_decompositions};
use mmforge::selftest::{
    check_character_sum_bound, check_characteristic_functions, check_classifier, check_construction_theorem,
    check_count_identity, construction_sweep, fields_up_to,
};

const LARGE_Q: [(u64, u64); 99] = [
    (17, 3723), (19, 1314), (23, 622), (25, 506), (27, 432), (29, 380), (31, 342), (32, 326), (37, 270),
    (41, 240), (43, 229), (47, 210), (49, 202), (53, 189), (59, 173), (61, 169), (64, 163), (67, 158),
    (71, 152), (73, 149), (79, 142), (81, 140), (83, 138), (89, 132), (97, 126), (101, 123), (103, 122),
    (107, 119), (109, 118), (113, 116), (121, 112), (125, 110), (127, 109), (128, 109), (131, 108),
    (137, 106), (139, 105), (149, 102), (151, 101), (157, 99), (163, 98), (167, 97), (169, 96), (173, 95),
    (179, 94), (181, 94), (191, 92), (193, 91), (197, 90), (199, 90), (211, 88), (223, 86), (227, 86),
    (229, 85), (233, 85), (239, 84), (241, 84), (243, 83), (251, 82), (256, 82), (257, 82), (263, 81),
    (269, 80), (271, 80), (277, 80), (281, 79), (283, 79), (289, 78), (293, 78), (307, 77), (311, 77),
    (313, 76), (317, 76), (331, 75), (337, 75), (343, 74), (347, 74), (349, 74), (353, 73), (359, 73),
    (361, 73), (367, 73), (373, 72), (379, 72), (383, 72), (389, 71), (397, 71), (401, 71), (409, 70),
    (419, 70), (421, 70), (431, 69), (433, 69), (439, 69), (443, 68), (449, 68), (457, 68), (461, 68),
    (463, 68),
];

const SMALL_Q: [(u64, u64, &str); 10] = [
    (2, 1666, "5.6009e23"), (3, 585, "5.7938e23"), (4, 507, "5.6009e23"), (5, 351, "6.0454e23"),
    (7, 415, "6.2173e23"), (8, 336, "5.6009e23"), (9, 289, "5.7934e23"), (11, 235, "6.4559e23"),
    (13, 204, "6.5464e23"), (16, 176, "5.6009e23"),
];

const N1_TWO: [(u64, u64, &str); 12] = [
    (2, 302, "2461.6176"), (3, 119, "2589.5959"), (4, 98, "2461.6176"), (5, 75, "2760.3433"),
    (7, 77, "2878.9167"), (8, 64, "2461.6176"), (9, 56, "2589.5959"), (11, 49, "3046.2527"),
    (13, 44, "3110.5326"), (16, 40, "2461.6176"), (17, 40, "3216.6066"), (19, 39, "3261.6401"),
];

/// The published constant for q = 3 disagrees with the one for q = 9,
/// although both remove the same prime.
const KNOWN_CONSTANT_MISMATCH: &[(u64, &str, &str)] = &[(3, "5.7938e23", "5.7934e23")];

/// `q = 2`, `n` odd: `ab + 1` has trace `Tr(a)Tr(b) + 1 = 0` for all normal `a, b`.
const KNOWN_TRACE_OBSTRUCTED: &[(u64, usize)] = &[(2, 15)];

/// Pairs in the exception lists where the bound inequality fails.
const KNOWN_BOUND_FAILURES: &[(u64, u64)] =
    &[(13, 24), (23, 22), (25, 24), (27, 26), (29, 28), (31, 30), (37, 18), (41, 20), (49, 16)];

fn mm_forge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mm-forge"))
        .args(args)
        .env_remove("MMFORGE_CACHE")
        .output()
        .expect("run mm-forge");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn table_rows(n1: &str, lo: &str, hi: &str) -> Vec<(u64, u64, String)> {
    let (code, out, err) = mm_forge(&["table", "--n1", n1, "--q-min", lo, "--q-max", hi]);
    assert_eq!(code, 0, "{err}");
    out.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].to_string())
        })
        .collect()
}

enum Verdict {
    Pass,
    /// Fails exactly as recorded in the decisions ledger.
    KnownFail,
    Fail,
}

fn criterion_1() -> (Verdict, String) {
    let rows = table_rows("3", "17", "463");
    let got: Vec<(u64, u64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    let diffs: Vec<_> = LARGE_Q.iter().zip(&got).filter(|(a, b)| a != b).collect();
    let ok = got.len() == 99 && diffs.is_empty();
    (if ok { Verdict::Pass } else { Verdict::Fail }, format!("{} rows, {} differences {diffs:?}", got.len(), diffs.len()))
}

fn criterion_2() -> (Verdict, String) {
    let mut n2_diffs = Vec::new();
    let mut c_diffs = Vec::new();
    for (n1, hi, expected) in [("3", "16", &SMALL_Q[..]), ("2", "19", &N1_TWO[..])] {
        let rows = table_rows(n1, "2", hi);
        if rows.len() != expected.len() {
            n2_diffs.push((0, 0, 0));
        }
        for (row, &(q, n2, c)) in rows.iter().zip(expected) {
            if (row.0, row.1) != (q, n2) {
                n2_diffs.push((q, n2, row.1));
            }
            if row.2 != c {
                c_diffs.push((q, c.to_string(), row.2.clone()));
            }
        }
    }
    let detail = format!("n2 differences {n2_diffs:?}; constant differences (q, printed, computed) {c_diffs:?}");
    let known: Vec<(u64, String, String)> =
        KNOWN_CONSTANT_MISMATCH.iter().map(|&(q, a, b)| (q, a.to_string(), b.to_string())).collect();
    let v = if n2_diffs.is_empty() && c_diffs.is_empty() {
        Verdict::Pass
    } else if n2_diffs.is_empty() && c_diffs == known {
        Verdict::KnownFail
    } else {
        Verdict::Fail
    };
    (v, detail)
}

fn criterion_3() -> (Verdict, String) {
    let (c8, c12) = (c_nu(8).unwrap(), c_nu(12).unwrap());
    let ok = c8.display() == "4514.6266" && matches_printed(&c12, "1.0573e24");
    let detail = format!(
        "C_8 = {} ({:.6}), C_12 = {:.8e} (printed 1.0573e24, rounded up {})",
        c8.display(),
        c8.value(),
        c12.value(),
        c12.display()
    );
    (if ok { Verdict::Pass } else { Verdict::Fail }, detail)
}

fn criterion_4() -> (Verdict, String) {
    let campaigns = [("3", "17", "463", 8246usize), ("3", "2", "16", 2207), ("2", "2", "19", 195)];
    let mut counts_ok = true;
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (n1, lo, hi, want) in campaigns {
        let (code, out, err) =
            mm_forge(&["exceptions", "--n1", n1, "--q-min", lo, "--q-max", hi, "--filter-variant", "plain"]);
        let count = out.lines().count().saturating_sub(1);
        counts_ok &= code == 0 && count == want;
        let (vcode, vout, verr) =
            mm_forge(&["verify", "--n1", n1, "--q-min", lo, "--q-max", hi, "--filter-variant", "plain"]);
        let summary = vout.lines().nth(1).unwrap_or("").to_string();
        for l in verr.lines().filter_map(|l| l.strip_prefix("fails: ")) {
            let (q, n2) = l.split_once(' ').unwrap();
            failures.push((q[2..].parse::<u64>().unwrap(), n2[3..].parse::<u64>().unwrap()));
        }
        parts.push(format!("n1={n1} q={lo}..{hi}: {count}/{want} pairs {}, verify exit {vcode} [{summary}]", err.trim()));
    }
    failures.sort();
    let detail = format!("{}; failing pairs {failures:?}", parts.join("; "));
    let v = if counts_ok && failures.is_empty() {
        Verdict::Pass
    } else if counts_ok && failures == KNOWN_BOUND_FAILURES {
        Verdict::KnownFail
    } else {
        Verdict::Fail
    };
    (v, detail)
}

fn from_outcome(o: mmforge::selftest::Outcome) -> (Verdict, String) {
    (if o.passed { Verdict::Pass } else { Verdict::Fail }, o.detail)
}

/// When the characteristic is prime to `n`, `Tr(θ + c) = Tr(θ) + nc`
/// vanishes for exactly one `c`, so one translate per product is not normal.
fn criterion_5() -> (Verdict, String) {
    let cases = [(2, 6), (2, 12), (3, 6), (4, 6), (5, 6), (2, 10)];
    let outcome = check_construction_theorem(&cases).unwrap();
    let sweep = construction_sweep(&cases).unwrap();
    let as_recorded = sweep.iter().all(|c| {
        if c.characteristic_divides_n {
            c.failures == 0
        } else {
            c.failures == c.thetas && c.trace_zero_failures == c.failures
        }
    });
    let v = match (outcome.passed, as_recorded) {
        (true, _) => Verdict::Pass,
        (false, true) => Verdict::KnownFail,
        (false, false) => Verdict::Fail,
    };
    (v, outcome.detail)
}

fn criterion_6() -> (Verdict, String) {
    from_outcome(check_characteristic_functions(&[4, 8, 9, 16, 25, 27, 64]).unwrap())
}

fn criterion_7() -> (Verdict, String) {
    from_outcome(check_character_sum_bound(&[(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)]).unwrap())
}

fn criterion_8() -> (Verdict, String) {
    from_outcome(check_count_identity(&[(2, 2, 3), (3, 2, 3)]).unwrap())
}

fn criterion_9() -> (Verdict, String) {
    let mut done = Vec::new();
    let mut bad = Vec::new();
    let mut obstructed = Vec::new();
    for (q, n) in fields_up_to(1 << 20) {
        if pcb_decompositions(q, n as u64).unwrap().is_empty() {
            continue;
        }
        let (code, out, err) = mm_forge(&["witness", "--q", &q.to_string(), "--n", &n.to_string()]);
        let verified = code == 0 && out.contains("\"primitive\": true") && out.contains("\"completely_normal\": true");
        if verified {
            done.push((q, n));
        } else {
            if err.contains("trace zero for every normal b: true") {
                obstructed.push((q, n));
            }
            bad.push(format!("q={q} n={n}: exit {code} {}", err.trim()));
        }
    }
    let v = if bad.is_empty() && !done.is_empty() {
        Verdict::Pass
    } else if obstructed == KNOWN_TRACE_OBSTRUCTED && bad.len() == obstructed.len() {
        Verdict::KnownFail
    } else {
        Verdict::Fail
    };
    (v, format!("{} fields verified {done:?}; failures {bad:?}", done.len()))
}

fn criterion_10() -> (Verdict, String) {
    from_outcome(check_classifier(1 << 12).unwrap())
}

fn main() {
    let criteria: [(&str, fn() -> (Verdict, String)); 10] = [
        ("large-q threshold table", criterion_1),
        ("small-q threshold tables and constants", criterion_2),
        ("prime-product constants", criterion_3),
        ("exception counts and bound verification", criterion_4),
        ("product-translate construction", criterion_5),
        ("characteristic functions", criterion_6),
        ("incomplete character sum bound", criterion_7),
        ("count identity", criterion_8),
        ("primitive completely normal witnesses", criterion_9),
        ("completely basic classifier", criterion_10),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (v, detail) = run();
        let secs = t.elapsed().as_secs_f64();
        let tag = match v {
            Verdict::Pass => "PASS",
            Verdict::KnownFail => "FAIL (recorded)",
            Verdict::Fail => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {:>2} {tag}: {name} [{secs:.1}s] {detail}", i + 1);
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
