use std::collections::BTreeSet;

use num_traits::Zero;

use crate::functions::{AtomicMeasure, StepFunction};
use crate::mbasis::XiRule;
use crate::report::{Case, Report};
use crate::space::{AdmissibleSet, PointAddr, ScaffoldTree};

use super::oracle::finite_model_oracle;
use super::sample::Sampler;
use super::{run_cases, SuiteConfig, VerifyError};

/// retract, wedge, order and evaluate against the finite-model oracle.
pub fn oracle_suite(tree: &ScaffoldTree, space: &str, cfg: &SuiteConfig) -> Report {
    let mut s = Sampler::new(tree, cfg.seed);
    let instances: Vec<(AdmissibleSet, PointAddr, PointAddr, StepFunction)> = (0..cfg.budget)
        .map(|_| (s.set(cfg.max_atoms), s.point(), s.point(), s.function(cfg.max_terms)))
        .collect();
    let mut report = cfg.report("oracle", space);
    run_cases(&mut report, &instances, |(a, p, q, f)| {
        let m = finite_model_oracle(tree, a, &[p.clone(), q.clone()]);
        let show = |r: &PointAddr, w: &PointAddr, c, v| {
            format!(
                "retract={} wedge={} order={c:?} f(p)={v}",
                tree.format_point(r),
                tree.format_point(w)
            )
        };
        let expected = show(&m.retract(p), &m.wedge(p, q), m.compare(p, q), m.evaluate(tree, f, p));
        let actual = show(
            &tree.retract(a, p)?,
            &tree.wedge(p, q)?,
            tree.compare(p, q),
            tree.evaluate(f, p)?,
        );
        Ok(Case::new(
            [
                ("set", tree.format_set(a)),
                ("p", tree.format_point(p)),
                ("q", tree.format_point(q)),
                ("f", tree.format_function(f)),
            ],
            expected,
            actual,
        ))
    });
    report
}

/// `⟨P_A f, μ⟩ = ⟨f, P_A* μ⟩` with both maps norm-contracting.
pub fn duality_suite(tree: &ScaffoldTree, space: &str, cfg: &SuiteConfig) -> Report {
    let mut s = Sampler::new(tree, cfg.seed);
    let instances: Vec<(AdmissibleSet, StepFunction, AtomicMeasure)> = (0..cfg.budget)
        .map(|_| (s.set(cfg.max_atoms), s.function(cfg.max_terms), s.measure(cfg.max_atoms, false)))
        .collect();
    let mut report = cfg.report("duality", space);
    run_cases(&mut report, &instances, |(a, f, mu)| {
        let pf = tree.project(a, f)?;
        let amu = tree.adjoint(a, mu)?;
        let lhs = tree.pair(&pf, mu)?;
        let rhs = tree.pair(f, &amu)?;
        let tv_ok = amu.total_variation() <= mu.total_variation();
        let sup_ok = tree.sup_norm(&pf) <= tree.sup_norm(f);
        let mut problems = Vec::new();
        if lhs != rhs {
            problems.push(format!("<P f, mu> = {lhs} but <f, P* mu> = {rhs}"));
        }
        if !tv_ok {
            problems.push("total variation grew".to_string());
        }
        if !sup_ok {
            problems.push("sup norm grew".to_string());
        }
        let pass = problems.is_empty();
        let actual = if pass { "holds".to_string() } else { problems.join("; ") };
        Ok(Case::judged(
            [
                ("set", tree.format_set(a)),
                ("f", tree.format_function(f)),
                ("mu", tree.format_measure(mu)),
            ],
            "holds",
            actual,
            pass,
        ))
    });
    report
}

/// σ-continuity of `A` against stability of the induced subspace under
/// the adjoint, with an escaping atom in every negative case.
pub fn sigma_suite(tree: &ScaffoldTree, space: &str, cfg: &SuiteConfig) -> Report {
    let mut s = Sampler::new(tree, cfg.seed);
    let instances: Vec<(AdmissibleSet, Vec<PointAddr>)> = (0..cfg.budget)
        .map(|_| {
            let a = s.set(cfg.max_atoms);
            let probes = (0..8).map(|_| s.named_point(false)).collect();
            (a, probes)
        })
        .collect();
    let mut report = cfg.report("sigma-continuity", space);
    run_cases(&mut report, &instances, |(a, probes)| {
        let sigma = tree.sigma_continuity_ok(a);
        let mut atoms: BTreeSet<PointAddr> = probes.iter().cloned().collect();
        for e in a.endpoints() {
            atoms.extend(tree.immediate_successors(&e)?);
        }
        let mut escape = None;
        for x in atoms {
            if x.uses_anonymous() || tree.point_cofinality(&x)?.is_uncountable() {
                continue;
            }
            let image = tree.adjoint(a, &AtomicMeasure::delta(tree, &x)?)?;
            if let Some(w) = tree.in_induced_d(&image)?.witness {
                escape = Some(format!("d({}) -> d({})", tree.format_point(&x), tree.format_point(&w)));
                break;
            }
        }
        if let (Some(w), Some(y)) = (&sigma.witness, &sigma.escape) {
            // an anonymous copy carries no measure, so its image is read off
            // the retraction
            let image = tree.retract(a, y)?;
            if image == *w && tree.point_cofinality(w)?.is_uncountable() {
                escape = Some(format!("d({}) -> d({})", tree.format_point(y), tree.format_point(w)));
            }
        }
        let show = |ok: bool| if ok { "stable" } else { "escapes" };
        let stable = escape.is_none();
        let case = Case::new(
            [("set", tree.format_set(a))],
            show(sigma.ok),
            show(stable),
        );
        Ok(match escape {
            Some(e) => case.with_witness(e),
            None => case,
        })
    });
    report
}

/// Biorthogonality of tail pairs, strong reconstruction, and agreement of
/// the identity-rule basis with the tail basis on segments.
pub fn basis_suite(tree: &ScaffoldTree, space: &str, cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    let pairs_n = cfg.budget.min(120);
    let recon_n = cfg.budget.min(60);
    let mut s = Sampler::new(tree, cfg.seed);
    let points = s.distinct_isolated(pairs_n);
    let fns: Vec<StepFunction> = (0..recon_n).map(|_| s.function(cfg.max_terms + 2)).collect();
    let mut report = cfg
        .report("basis", space)
        .config("tail_pairs", points.len())
        .config("functions", fns.len());
    let pairs = points
        .iter()
        .map(|x| tree.tail_basis(x))
        .collect::<Result<Vec<_>, _>>()?;
    report.absorb(tree.biorthogonality_check(&pairs)?);
    run_cases(&mut report, &fns, |f| {
        let inputs = [("f", tree.format_function(f))];
        let r = match tree.strong_reconstruct(f) {
            Ok(r) => r,
            Err(e) => return Ok(Case::judged(inputs, "exact", e.to_string(), false)),
        };
        let terms: Vec<String> = r
            .terms
            .iter()
            .map(|(x, c)| format!("{c}*g({})", tree.format_point(x)))
            .collect();
        let strong = r.terms.iter().all(|(_, c)| !c.is_zero());
        Ok(Case::judged(inputs, "exact", terms.join(" + "), r.function == *f && strong))
    });
    if let Some((_, eta)) = tree.as_segment() {
        let eta = eta.clone();
        let id = XiRule::identity();
        let idx: Vec<PointAddr> = points.iter().take(recon_n).cloned().collect();
        run_cases(&mut report, &idx, |x| {
            let alpha = tree.segment_ordinal(x);
            let p = tree.pri_basis(&id, &alpha)?;
            let q = tree.tail_basis(x)?;
            let show = |b: &crate::mbasis::BasisPair| {
                format!("{} / {}", tree.format_function(&b.vector), tree.format_measure(&b.functional))
            };
            Ok(Case::new(
                [("alpha", alpha.to_string()), ("eta", eta.to_string())],
                show(&q),
                show(&p),
            ))
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Ordinal;
    use crate::space::builtin_space;

    fn small() -> SuiteConfig {
        SuiteConfig {
            budget: 40,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn suites_pass_on_segment() {
        let t = ScaffoldTree::segment(&Ordinal::parse("w1*2 + 5").unwrap()).unwrap();
        for r in [
            oracle_suite(&t, "seg", &small()),
            duality_suite(&t, "seg", &small()),
            sigma_suite(&t, "seg", &small()),
            basis_suite(&t, "seg", &small()).unwrap(),
        ] {
            assert!(r.passed(), "{}: {:?}", r.suite, r.first_failure());
        }
    }

    #[test]
    fn suites_pass_on_tree() {
        let t = builtin_space("r1").unwrap();
        for r in [
            oracle_suite(&t, "r1", &small()),
            duality_suite(&t, "r1", &small()),
            sigma_suite(&t, "r1", &small()),
            basis_suite(&t, "r1", &small()).unwrap(),
        ] {
            assert!(r.passed(), "{}: {:?}", r.suite, r.first_failure());
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let t = builtin_space("r").unwrap();
        let a = oracle_suite(&t, "r", &small());
        let b = oracle_suite(&t, "r", &small());
        assert_eq!(a.to_json(), b.to_json());
    }
}
