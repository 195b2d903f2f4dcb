use crate::functions::StepFunction;
use crate::report::{Case, Report};
use crate::space::{AdmissibleSet, ClosurePolicy, EdgeId, PointAddr, ScaffoldTree};

use super::oracle::finite_model_oracle;
use super::sample::Sampler;
use super::{run_cases, SuiteConfig, VerifyError};

/// Countable members, nested compatibility on every comparable pair, and
/// every test function fixed by some member of the up-closure.
pub fn check_skeleton_axioms(
    tree: &ScaffoldTree,
    family: &[AdmissibleSet],
    test_fns: &[StepFunction],
) -> Report {
    let mut report = Report::new("skeleton", 0)
        .config("family", family.len())
        .config("functions", test_fns.len());
    for a in family {
        let w = tree.set_weight(a);
        let actual = if w.is_countable() {
            "countable".to_string()
        } else {
            format!("weight {w}")
        };
        report.push(Case::new(
            [("axiom", "i".into()), ("set", tree.format_set(a))],
            "countable",
            actual,
        ));
    }
    let mut nested = Vec::new();
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate() {
            if i != j && a != b && a.is_subset(b) {
                nested.push((a, b));
            }
        }
    }
    run_cases(&mut report, &nested, |(a, b)| {
        let mut bad = None;
        for f in test_fns {
            let pa = tree.project(a, f)?;
            let pab = tree.project(a, &tree.project(b, f)?)?;
            let pba = tree.project(b, &pa)?;
            if pab != pa || pba != pa {
                bad = Some(tree.format_function(f));
                break;
            }
        }
        let case = Case::new(
            [
                ("axiom", "ii".into()),
                ("a", tree.format_set(a)),
                ("b", tree.format_set(b)),
            ],
            "P_A P_B = P_B P_A = P_A",
            if bad.is_some() { "differs" } else { "P_A P_B = P_B P_A = P_A" },
        );
        Ok(match bad {
            Some(f) => case.with_witness(f),
            None => case,
        })
    });
    let union = family
        .iter()
        .skip(1)
        .fold(family.first().cloned(), |acc, s| acc.map(|u| tree.union_admissible(&u, s)));
    let candidates: Vec<&AdmissibleSet> = family.iter().chain(union.as_ref()).collect();
    run_cases(&mut report, test_fns, |f| {
        let mut fixed_by = None;
        for a in &candidates {
            if tree.project(a, f)? == *f {
                fixed_by = Some(tree.format_set(a));
                break;
            }
        }
        Ok(Case::new(
            [("axiom", "iv".into()), ("f", tree.format_function(f))],
            "fixed",
            if fixed_by.is_some() { "fixed" } else { "not fixed" },
        ))
    });
    report.note("axiom iii is checked on fundamental-sequence chains by the chain suite");
    report
}

/// Samples a family with nested members and test functions built from
/// its points, then checks the skeleton axioms.
pub fn skeleton_suite(tree: &ScaffoldTree, space: &str, cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    tree.require_r_tree()?;
    let reordered = !tree.classify().is_r1_tree;
    let owned;
    let tree = if reordered {
        owned = tree.reorder_to_r1()?;
        &owned
    } else {
        tree
    };
    let mut s = Sampler::new(tree, cfg.seed);
    let mut family = Vec::new();
    while family.len() < 24 {
        let a = s.countable_set(cfg.max_atoms.min(2));
        let b = tree.union_admissible(&a, &s.countable_set(cfg.max_atoms.min(2)));
        family.push(a);
        family.push(b);
    }
    let union = family
        .iter()
        .fold(AdmissibleSet::root_only(), |u, a| tree.union_admissible(&u, a));
    let fns: Vec<StepFunction> = (0..32)
        .map(|i| {
            let src = if i % 2 == 0 { &family[i % family.len()] } else { &union };
            s.function_in(src, cfg.max_terms)
        })
        .collect();
    let mut report = check_skeleton_axioms(tree, &family, &fns);
    report.seed = cfg.seed;
    report.config.insert("space".into(), space.into());
    if reordered {
        report.config.insert("reordered".into(), true.into());
        report.note("the space is an r-tree but not r1; the family lives on its r1 reordering");
    }
    Ok(report)
}

/// Checks `r_A r_B = r_B r_A = r_A` on points and `P_A P_B = P_B P_A = P_A`
/// on functions for `A ⊆ B`.
pub fn check_nested_commutation(
    tree: &ScaffoldTree,
    a: &AdmissibleSet,
    b: &AdmissibleSet,
    points: &[PointAddr],
    fns: &[StepFunction],
) -> Result<Report, VerifyError> {
    if !a.is_subset(b) {
        return Err(VerifyError::Precondition(format!(
            "{} is not a subset of {}",
            tree.format_set(a),
            tree.format_set(b)
        )));
    }
    let mut report = Report::new("nested-commutation", 0);
    let inputs = |k: &'static str, v: String| {
        [
            ("a", tree.format_set(a)),
            ("b", tree.format_set(b)),
            (k, v),
        ]
    };
    for x in points {
        let ra = tree.retract(a, x)?;
        let rab = tree.retract(a, &tree.retract(b, x)?)?;
        let rba = tree.retract(b, &ra)?;
        let show = |p: &PointAddr, q: &PointAddr| format!("{} {}", tree.format_point(p), tree.format_point(q));
        report.push(Case::new(inputs("x", tree.format_point(x)), show(&ra, &ra), show(&rab, &rba)));
    }
    for f in fns {
        let pa = tree.project(a, f)?;
        let pab = tree.project(a, &tree.project(b, f)?)?;
        let pba = tree.project(b, &pa)?;
        let show = |p: &StepFunction, q: &StepFunction| {
            format!("{} | {}", tree.format_function(p), tree.format_function(q))
        };
        report.push(Case::new(inputs("f", tree.format_function(f)), show(&pa, &pa), show(&pab, &pba)));
    }
    Ok(report)
}

/// Admissible sets whose retractions do not commute at `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCommuting {
    pub a: AdmissibleSet,
    pub b: AdmissibleSet,
    pub x: PointAddr,
    /// `r_A(r_B(x))`.
    pub ab: PointAddr,
    /// `r_B(r_A(x))`.
    pub ba: PointAddr,
}

/// `(r_A(r_B(x)), r_B(r_A(x)))` computed by the oracle.
fn oracle_compositions(
    tree: &ScaffoldTree,
    a: &AdmissibleSet,
    b: &AdmissibleSet,
    x: &PointAddr,
) -> (PointAddr, PointAddr) {
    let rb = finite_model_oracle(tree, b, std::slice::from_ref(x)).retract(x);
    let ra = finite_model_oracle(tree, a, std::slice::from_ref(x)).retract(x);
    let ab = finite_model_oracle(tree, a, std::slice::from_ref(&rb)).retract(&rb);
    let ba = finite_model_oracle(tree, b, std::slice::from_ref(&ra)).retract(&ra);
    (ab, ba)
}

/// Searches sets `{root, s}` over isolated pool points for a
/// non-commuting pair, examining at most `budget` triples. A witness is
/// returned only after the oracle confirms it.
pub fn find_noncommuting_pair(tree: &ScaffoldTree, budget: usize) -> Option<NonCommuting> {
    let s = Sampler::new(tree, 0);
    let mut cands = Vec::new();
    for id in (0..tree.edges().len()).map(EdgeId) {
        for copies in tree.copy_paths(id) {
            cands.extend(
                s.pool(id)
                    .iter()
                    .filter(|o| o.is_successor())
                    .take(8)
                    .map(|o| PointAddr::on(id, copies.clone(), o.clone())),
            );
        }
    }
    let singletons: Vec<AdmissibleSet> = cands
        .iter()
        .filter_map(|p| {
            tree.make_admissible(&[(p.clone(), p.clone())], ClosurePolicy::Require)
                .ok()
        })
        .collect();
    let mut examined = 0;
    for a in &singletons {
        for b in &singletons {
            if a.is_subset(b) || b.is_subset(a) {
                continue;
            }
            for x in &cands {
                examined += 1;
                if examined > budget {
                    return None;
                }
                let (Ok(rb), Ok(ra)) = (tree.retract(b, x), tree.retract(a, x)) else {
                    continue;
                };
                let (Ok(ab), Ok(ba)) = (tree.retract(a, &rb), tree.retract(b, &ra)) else {
                    continue;
                };
                if ab != ba && oracle_compositions(tree, a, b, x) == (ab.clone(), ba.clone()) {
                    return Some(NonCommuting {
                        a: a.clone(),
                        b: b.clone(),
                        x: x.clone(),
                        ab,
                        ba,
                    });
                }
            }
        }
    }
    None
}

/// Nested pairs `A ⊆ A ∪ C` on sampled points and functions, plus the
/// search for a non-commuting pair.
pub fn commutation_suite(tree: &ScaffoldTree, space: &str, cfg: &SuiteConfig) -> Report {
    let mut s = Sampler::new(tree, cfg.seed);
    let pairs = (cfg.budget / 10).max(1);
    let instances: Vec<_> = (0..pairs)
        .map(|_| {
            let a = s.set(cfg.max_atoms);
            let b = tree.union_admissible(&a, &s.set(cfg.max_atoms));
            let pts: Vec<PointAddr> = (0..8).map(|_| s.point()).collect();
            let fns: Vec<StepFunction> = (0..3).map(|_| s.function(cfg.max_terms)).collect();
            (a, b, pts, fns)
        })
        .collect();
    let mut report = cfg.report("commutation", space);
    let nested: Vec<Report> = {
        use rayon::prelude::*;
        instances
            .par_iter()
            .map(|(a, b, pts, fns)| {
                check_nested_commutation(tree, a, b, pts, fns).unwrap_or_else(|e| {
                    let mut r = Report::new("nested-commutation", 0);
                    r.push(super::error_case(e));
                    r
                })
            })
            .collect()
    };
    for r in nested {
        report.absorb(r);
    }
    let isolated = s.distinct_isolated(3).len();
    let expected = if isolated >= 3 { "witness" } else { "none" };
    let case = match find_noncommuting_pair(tree, cfg.budget * 20) {
        Some(w) => Case::new(
            [("search", "non-commuting pair".into())],
            expected,
            "witness",
        )
        .with_witness(format!(
            "A={} B={} x={}: r_A r_B(x)={} r_B r_A(x)={}",
            tree.format_set(&w.a),
            tree.format_set(&w.b),
            tree.format_point(&w.x),
            tree.format_point(&w.ab),
            tree.format_point(&w.ba)
        )),
        None => Case::new([("search", "non-commuting pair".into())], expected, "none"),
    };
    report.push(case);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Ordinal;
    use crate::space::builtin_space;

    fn seg(eta: &str) -> ScaffoldTree {
        ScaffoldTree::segment(&Ordinal::parse(eta).unwrap()).unwrap()
    }

    #[test]
    fn textbook_noncommuting_pair() {
        let t = seg("10");
        let a = t.parse_set("{root, 5}", ClosurePolicy::Require).unwrap();
        let b = t.parse_set("{root, 3}", ClosurePolicy::Require).unwrap();
        let x = t.parse_point("7").unwrap();
        let (ab, ba) = oracle_compositions(&t, &a, &b, &x);
        assert_eq!(ab, PointAddr::Root);
        assert_eq!(ba, t.parse_point("3").unwrap());
    }

    #[test]
    fn search_results() {
        assert!(find_noncommuting_pair(&seg("1"), 1000).is_none());
        let w = find_noncommuting_pair(&seg("w2"), 1000).unwrap();
        assert_ne!(w.ab, w.ba);
    }

    #[test]
    fn nested_precondition() {
        let t = seg("w2");
        let a = t.parse_set("{root, [1, w]}", ClosurePolicy::Require).unwrap();
        let b = t.parse_set("{root, [1, w*2]}", ClosurePolicy::Require).unwrap();
        let pts: Vec<PointAddr> = ["3", "w", "w + 1", "w*2 + 7"]
            .iter()
            .map(|p| t.parse_point(p).unwrap())
            .collect();
        let f = t.parse_function("g(5) - 2*g(w + 3)").unwrap();
        assert!(check_nested_commutation(&t, &a, &b, &pts, &[f]).unwrap().passed());
        assert!(check_nested_commutation(&t, &b, &a, &pts, &[]).is_err());
        let root = AdmissibleSet::root_only();
        assert!(check_nested_commutation(&t, &root, &b, &pts, &[]).unwrap().passed());
    }

    #[test]
    fn skeleton_failures() {
        let t = seg("w2");
        let g = t.parse_function("g(5)").unwrap();
        let r = check_skeleton_axioms(&t, &[], std::slice::from_ref(&g));
        assert!(!r.passed());
        let big = t.parse_set("{root, [1, w1]}", ClosurePolicy::Require).unwrap();
        let r = check_skeleton_axioms(&t, &[big], &[g]);
        assert_eq!(r.first_failure().unwrap().inputs["axiom"], "i");
        let fam: Vec<AdmissibleSet> = (1..=5)
            .map(|n| t.parse_set(&format!("{{root, [1, {n}]}}"), ClosurePolicy::Require).unwrap())
            .collect();
        let fns = vec![t.parse_function("g(root) + g(3)").unwrap(), t.parse_function("g(5)").unwrap()];
        assert!(check_skeleton_axioms(&t, &fam, &fns).passed());
    }

    #[test]
    fn commutation_suite_passes() {
        let t = seg("w1*2 + 5");
        let cfg = SuiteConfig {
            budget: 60,
            ..SuiteConfig::default()
        };
        let r = commutation_suite(&t, "seg", &cfg);
        assert!(r.passed(), "{:?}", r.first_failure());
        assert!(skeleton_suite(&t, "seg", &cfg).unwrap().passed());
    }

    #[test]
    fn skeleton_suite_gates_on_classification() {
        let cfg = SuiteConfig {
            budget: 20,
            ..SuiteConfig::default()
        };
        let r = skeleton_suite(&builtin_space("r").unwrap(), "r", &cfg).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.config["reordered"], true);
        assert!(skeleton_suite(&builtin_space("non-r").unwrap(), "non-r", &cfg).is_err());
    }
}
