//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if
//! any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use qalt::bracket::{
    bracket_gap_check, bracket_state_sum, determinant, jones, kauffman_bracket, loop_value, skein_check,
};
use qalt::corpus::{corpus, entry, CorpusEntry};
use qalt::diagram::Smoothing;
use qalt::laurent::{HalfInt, HalfLaurent};
use qalt::qa::{
    certify, kanenobu_jones, kanenobu_obstruction, replay, Budget, CertifyOutcome, Status,
};
use qalt::tait::SignedPlanarGraph;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn a_step() -> HalfInt {
    HalfInt::from_int(4)
}

fn criterion_1(corpus: &[CorpusEntry]) -> Outcome {
    let start = Instant::now();
    let delta = loop_value();
    let a = HalfLaurent::mono(1, 1);
    let a_inv = HalfLaurent::mono(1, -1);
    let mut checked = 0;
    check(kauffman_bracket(&qalt::Diagram::unknot()) == HalfLaurent::one(), || "<unknot> != 1".into())?;
    for e in corpus {
        let d = &e.diagram;
        let b = kauffman_bracket(d);
        check(b == bracket_state_sum(d), || format!("{}: memoized and state-sum brackets differ", e.name))?;
        check(kauffman_bracket(&d.add_loops(1)) == &b * &delta, || {
            format!("{}: extra circle does not multiply by delta", e.name)
        })?;
        for c in 0..d.crossing_count() {
            let l0 = kauffman_bracket(&d.smooth(c, Smoothing::A).unwrap());
            let l1 = kauffman_bracket(&d.smooth(c, Smoothing::B).unwrap());
            check(b == &(&a * &l0) + &(&a_inv * &l1), || format!("{}: skein fails at crossing {c}", e.name))?;
            checked += 1;
        }
    }
    within(start, Duration::from_secs(10), "bracket axioms")?;
    Ok(format!("{} diagrams, {checked} crossings, {:?}", corpus.len(), start.elapsed()))
}

fn criterion_2(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus {
        let from_jones = determinant(&e.diagram);
        let (g, _) = SignedPlanarGraph::checkerboard(&e.diagram).map_err(|err| format!("{}: {err}", e.name))?;
        let from_gamma = g
            .gamma()
            .abs_at_root_of_unity(1)
            .ok_or_else(|| format!("{}: |Gamma(e^(i pi/4))| is not an integer", e.name))?;
        let from_goeritz = g.goeritz_det();
        check(from_jones == from_gamma && from_gamma == from_goeritz, || {
            format!("{}: |V(-1)| = {from_jones}, |Gamma| = {from_gamma}, Goeritz = {from_goeritz}", e.name)
        })?;
    }
    Ok(format!("{} entries agree", corpus.len()))
}

fn gamma_structure(name: &str, g: &SignedPlanarGraph, rng: &mut impl rand::Rng) -> Result<(), String> {
    let gamma = g.gamma();
    let report = gamma
        .analyze(a_step())
        .map_err(|err| format!("{name}: exponents not congruent mod 4 ({err}) in {}", gamma.display_in("A")))?;
    check(report.alternating, || {
        format!(
            "{name}: signs do not alternate across mod-8 classes: Gamma = {} (same sign within each class: {})",
            gamma.display_in("A"),
            same_sign_within_mod8(&gamma)
        )
    })?;
    if let Some(last) = g.edges().len().checked_sub(1) {
        if !g.is_loop(last).unwrap() && !g.is_isthmus(last).unwrap() {
            check(g.gamma_skein_check(last).unwrap(), || format!("{name}: skein identity fails"))?;
        }
    }
    check(common::permuted(g, rng).gamma() == gamma, || format!("{name}: Gamma depends on edge order"))?;
    check(g.gamma_recursive() == gamma, || format!("{name}: recursive Gamma differs"))
}

/// Coefficients at exponents congruent mod 8 share a sign.
fn same_sign_within_mod8(f: &HalfLaurent) -> bool {
    let mut sign_of_class = std::collections::HashMap::new();
    f.terms().all(|(e, c)| {
        let positive = c > &BigInt::from(0);
        *sign_of_class.entry(e.to_int().unwrap().rem_euclid(8)).or_insert(positive) == positive
    })
}

fn criterion_3(corpus: &[CorpusEntry]) -> Outcome {
    let mut rng = common::rng();
    let mut failures = Vec::new();
    for e in corpus {
        let (g, gd) = SignedPlanarGraph::checkerboard(&e.diagram).unwrap();
        for (side, h) in [("G", &g), ("G*", &gd)] {
            if let Err(m) = gamma_structure(&format!("{}/{side}", e.name), h, &mut rng) {
                failures.push(m);
            }
        }
    }
    for i in 0..20 {
        let g = common::random_planar(&mut rng, 10);
        if let Err(m) = gamma_structure(&format!("random #{i} [{}]", g.to_string().replace('\n', "; ")), &g, &mut rng) {
            failures.push(m);
        }
    }
    if failures.is_empty() {
        Ok(format!("{} corpus graphs and 20 random graphs (seed {:#x})", 2 * corpus.len(), common::SEED))
    } else {
        Err(failures.join("\n    "))
    }
}

fn criterion_4(corpus: &[CorpusEntry]) -> Outcome {
    let mut seen = std::collections::BTreeSet::new();
    for e in corpus {
        let (g, _) = SignedPlanarGraph::checkerboard(&e.diagram).unwrap();
        let b = kauffman_bracket(&e.diagram);
        let (sign, k) = g
            .gamma()
            .monomial_quotient(&b)
            .ok_or_else(|| format!("{}: Gamma is not a monomial multiple of the bracket", e.name))?;
        seen.insert(format!("{}A^{k}", if sign > 0 { "+" } else { "-" }));
    }
    Ok(format!("Gamma / bracket observed: {}", seen.into_iter().collect::<Vec<_>>().join(", ")))
}

fn gap_lengths(v: &HalfLaurent) -> Vec<u64> {
    v.analyze(HalfInt::ONE).unwrap().gaps.iter().map(|g| g.length).collect()
}

fn criterion_5(corpus: &[CorpusEntry]) -> Outcome {
    for e in corpus {
        let gaps = gap_lengths(&jones(&e.diagram));
        let expected: Option<Vec<u64>> = if e.prime && !e.torus_2n {
            Some(vec![])
        } else if e.torus_2n {
            Some(vec![1])
        } else if e.hopf_sum {
            Some(vec![1, 1])
        } else {
            None
        };
        if let Some(want) = expected {
            check(gaps == want, || format!("{}: gap lengths {gaps:?}, expected {want:?}", e.name))?;
        }
    }
    Ok("prime non-torus: no gap; trefoil and T(2,n): one gap of length 1; Hopf#Hopf: two gaps".into())
}

fn criterion_6(corpus: &[CorpusEntry]) -> Outcome {
    let mut equal = Vec::new();
    for e in corpus {
        let breadth = BigInt::from(jones(&e.diagram).breadth().unwrap().0 / 2);
        let det = determinant(&e.diagram);
        check(breadth <= det, || format!("{}: breadth {breadth} > det {det}", e.name))?;
        let expect_eq = e.torus_2n || e.hopf_sum;
        check((breadth == det) == expect_eq, || {
            format!("{}: breadth {breadth}, det {det}, equality expected: {expect_eq}", e.name)
        })?;
        if breadth == det {
            equal.push(e.name.clone());
        }
    }
    Ok(format!("equality exactly on {}", equal.join(", ")))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut names = vec!["unknot", "hopf", "trefoil", "figure8"].into_iter().map(String::from).collect::<Vec<_>>();
    names.extend((2..=7).map(|n| format!("T2_{n}")));
    let mut nodes = 0;
    for name in &names {
        let e = entry(name).unwrap();
        match certify(&e.diagram, Budget::default()).map_err(|err| format!("{name}: {err}"))? {
            CertifyOutcome::Certified { certificate, .. } => {
                replay(&certificate, Budget::default().simplify_passes).map_err(|err| format!("{name}: {err}"))?;
                check(BigInt::from(certificate.tree.det()) == determinant(&e.diagram), || {
                    format!("{name}: certificate det differs from |V(-1)|")
                })?;
                nodes += certificate.tree.node_count();
            }
            CertifyOutcome::Unknown { nodes } => return Err(format!("{name}: Unknown after {nodes} nodes")),
        }
    }
    within(start, Duration::from_secs(30), "certification")?;
    Ok(format!("{} diagrams certified and replayed ({nodes} tree nodes, {:?})", names.len(), start.elapsed()))
}

fn criterion_8(corpus: &[CorpusEntry]) -> Outcome {
    let mut checked = 0;
    for e in corpus {
        for c in 0..e.diagram.crossing_count() {
            let r = skein_check(&e.diagram, c).map_err(|err| format!("{} crossing {c}: {err}", e.name))?;
            check(r.holds, || format!("{} crossing {c}: relation fails ({r:?})", e.name))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} crossings"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    for p in -10..=10 {
        for q in -10..=10 {
            let det = kanenobu_jones(p, q).abs_at_root_of_unity(4);
            check(det == Some(BigInt::from(25)), || format!("K({p},{q}): det {det:?}"))?;
        }
    }
    for (p, q, want) in [(10, 9, Status::NotQA), (4, 3, Status::NotQA), (0, 0, Status::Inconclusive)] {
        let r = kanenobu_obstruction(p, q);
        check(r.status == want, || format!("K({p},{q}): {:?}, expected {want:?}", r.status))?;
    }
    let mut disagree = Vec::new();
    for p in -10i64..=10 {
        for q in -10i64..=10 {
            if kanenobu_obstruction(p, q).gap_clause_disagrees {
                disagree.push(p + q);
            }
        }
    }
    within(start, Duration::from_secs(1), "Kanenobu grid")?;
    disagree.sort();
    disagree.dedup();
    check(disagree == [-6, 6], || format!("unexpected gap/|p+q| > 6 disagreement set {disagree:?}"))?;
    Ok(format!(
        "det 25 on the grid; a gap exists iff |p+q| >= 6, so the stated |p+q| > 6 clause misses p+q in {disagree:?}"
    ))
}

fn criterion_10(corpus: &[CorpusEntry]) -> Outcome {
    let mut seen = Vec::new();
    for e in corpus.iter().filter(|e| e.diagram.component_count() == 2) {
        let d = &e.diagram;
        let breadth = jones(d).breadth().unwrap();
        for c in 0..d.crossing_count() {
            let (p, q) = d.crossing_components(c).unwrap();
            if p == q {
                continue;
            }
            let gap = bracket_gap_check(d, c).unwrap().map(|g| g.to_int().unwrap());
            check(matches!(gap, None | Some(3) | Some(7)), || format!("{} crossing {c}: gap {gap:?}", e.name))?;
            if gap == Some(7) {
                check(breadth == HalfInt::from_int(2), || {
                    format!("{} crossing {c}: gap 7 with Jones breadth {breadth}", e.name)
                })?;
            }
            seen.push(format!("{}#{c}={}", e.name, gap.map_or("none".into(), |g| g.to_string())));
        }
    }
    Ok(seen.join(" "))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

/// Criteria that fail as stated. Criterion 3 asks for mod-8 sign alternation
/// of Gamma on arbitrary mixed-sign graphs; the (+,-) 2-cycle already breaks
/// it. A known failure that starts passing is reported as unexpected.
const KNOWN_FAILURES: &[usize] = &[3];

fn main() {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("bracket axioms", Box::new(|| criterion_1(&corpus))),
        ("determinant triple agreement", Box::new(|| criterion_2(&corpus))),
        ("Gamma structure", Box::new(|| criterion_3(&corpus))),
        ("Gamma-bracket correspondence", Box::new(|| criterion_4(&corpus))),
        ("gap counts", Box::new(|| criterion_5(&corpus))),
        ("breadth <= det", Box::new(|| criterion_6(&corpus))),
        ("certification", Box::new(criterion_7)),
        ("Jones skein", Box::new(|| criterion_8(&corpus))),
        ("Kanenobu family", Box::new(criterion_9)),
        ("inter-component bracket gaps", Box::new(|| criterion_10(&corpus))),
    ];
    let (mut failed, mut unexpected) = (0, 0);
    for (i, (name, run)) in criteria.iter().enumerate() {
        let known = KNOWN_FAILURES.contains(&(i + 1));
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => {
                unexpected += usize::from(known);
                let tag = if known { " (expected to fail)" } else { "" };
                println!("criterion {:>2} PASS{tag}  {name}: {detail}", i + 1);
            }
            Err(why) => {
                failed += 1;
                unexpected += usize::from(!known);
                let tag = if known { " (known)" } else { "" };
                println!("criterion {:>2} FAIL{tag}  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
