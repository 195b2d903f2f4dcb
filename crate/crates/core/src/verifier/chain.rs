use crate::ordinal::{CofClass, Ordinal};
use crate::report::{Case, Report};
use crate::space::{AdmissibleSet, ClosurePolicy, CopySel, EdgeId, PointAddr, ScaffoldTree};

use super::sample::offset_pool;
use super::VerifyError;

/// `A_n = base ∪ [a, λ[n]]` on one edge copy, with limit `base ∪ [a, λ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFamily {
    pub base: AdmissibleSet,
    pub edge: EdgeId,
    pub copies: Vec<CopySel>,
    pub a: Ordinal,
    pub lambda: Ordinal,
}

/// Minimum number of chain members examined.
const TERMS: u64 = 8;

impl ChainFamily {
    fn point(&self, off: &Ordinal) -> PointAddr {
        PointAddr::on(self.edge, self.copies.clone(), off.clone())
    }

    fn with_interval(&self, tree: &ScaffoldTree, hi: &Ordinal) -> Result<AdmissibleSet, VerifyError> {
        let mut ivs: Vec<(PointAddr, PointAddr)> = self
            .base
            .atoms()
            .iter()
            .map(|a| (a.lo_point(), a.hi_point()))
            .collect();
        ivs.push((self.point(&self.a), self.point(hi)));
        Ok(tree.make_admissible(&ivs, ClosurePolicy::Require)?)
    }

    /// The first `n` with `λ[n] ≥ a`.
    fn start(&self) -> Result<u64, VerifyError> {
        for n in 0..256 {
            if self.lambda.fundamental_sequence(n)? >= self.a {
                return Ok(n);
            }
        }
        Err(VerifyError::Chain(format!("{}[n] stays below {}", self.lambda, self.a)))
    }

    fn validate(&self, tree: &ScaffoldTree) -> Result<(), VerifyError> {
        let bad = |m: String| Err(VerifyError::Chain(m));
        if !self.a.is_successor() {
            return bad(format!("left endpoint {} is not isolated", self.a));
        }
        if self.lambda.cofinality() != CofClass::Omega {
            return bad(format!("{} has no fundamental sequence", self.lambda));
        }
        if self.a > self.lambda {
            return bad(format!("{} lies above {}", self.a, self.lambda));
        }
        tree.check_point(&self.point(&self.lambda))?;
        Ok(())
    }

    pub fn member(&self, tree: &ScaffoldTree, n: u64) -> Result<AdmissibleSet, VerifyError> {
        self.with_interval(tree, &self.lambda.fundamental_sequence(n)?)
    }

    pub fn limit(&self, tree: &ScaffoldTree) -> Result<AdmissibleSet, VerifyError> {
        self.with_interval(tree, &self.lambda)
    }

    pub fn describe(&self, tree: &ScaffoldTree) -> String {
        format!(
            "{} + [{}, {}[n]]",
            tree.format_set(&self.base),
            tree.format_point(&self.point(&self.a)),
            self.lambda
        )
    }
}

/// Monotonicity of `r_{A_n}(x)` along the chain and agreement of its
/// symbolic supremum with `r_B(x)` for the limit set `B`.
pub fn chain_limit_check(
    tree: &ScaffoldTree,
    chain: &ChainFamily,
    queries: &[PointAddr],
) -> Result<Report, VerifyError> {
    chain.validate(tree)?;
    let n0 = chain.start()?;
    // a query below λ on the chain stabilizes once λ[n] passes it
    let mut n_end = n0 + TERMS;
    for x in queries {
        if let PointAddr::On { edge, copies, offset } = x {
            if *edge == chain.edge && *copies == chain.copies && *offset < chain.lambda {
                let n = (n0..n0 + 256)
                    .find(|&n| chain.lambda.fundamental_sequence(n).is_ok_and(|v| v >= *offset))
                    .ok_or_else(|| VerifyError::Chain(format!("{}[n] stays below {offset}", chain.lambda)))?;
                n_end = n_end.max(n + 3);
            }
        }
    }
    let ns: Vec<u64> = (n0..n_end).collect();
    let members = ns
        .iter()
        .map(|&n| chain.member(tree, n))
        .collect::<Result<Vec<_>, _>>()?;
    let limit = chain.limit(tree)?;
    let mut report = Report::new("chain-limit", 0)
        .config("chain", chain.describe(tree))
        .config("terms", ns.len());
    let increasing = members.windows(2).all(|w| w[0].is_subset(&w[1]))
        && members.last().is_some_and(|m| m.is_subset(&limit));
    report.push(Case::new(
        [("chain", chain.describe(tree))],
        "increasing",
        if increasing { "increasing" } else { "not increasing" },
    ));
    let fs_points = ns
        .iter()
        .map(|&n| Ok(chain.point(&chain.lambda.fundamental_sequence(n)?)))
        .collect::<Result<Vec<_>, VerifyError>>()?;
    for x in queries {
        let values = members
            .iter()
            .map(|m| tree.retract(m, x))
            .collect::<Result<Vec<_>, _>>()?;
        let monotone = values.windows(2).all(|w| tree.leq(&w[0], &w[1]));
        let tail = values.len() - 3;
        let sup = if values[tail..].iter().all(|v| *v == values[tail]) {
            Some(values[tail].clone())
        } else if values[tail..] == fs_points[tail..] {
            Some(chain.point(&chain.lambda))
        } else {
            None
        };
        let target = tree.retract(&limit, x)?;
        let expected = tree.format_point(&target);
        let actual = match (&sup, monotone) {
            (Some(s), true) => tree.format_point(s),
            (Some(_), false) => "not monotone".to_string(),
            (None, _) => "no symbolic supremum".to_string(),
        };
        let shown: Vec<String> = values.iter().map(|v| tree.format_point(v)).collect();
        report.push(
            Case::new(
                [("chain", chain.describe(tree)), ("x", tree.format_point(x))],
                expected,
                actual,
            )
            .with_witness(shown.join(", ")),
        );
    }
    Ok(report)
}

/// Chains `[1, λ[n]]` and `{[1, 1]} ∪ [λ[2] + 1, λ[n]]` for every limit
/// `λ` of countable cofinality in each edge's pool, with queries drawn from
/// the pool and the branch points of the tree.
pub fn standard_chains(tree: &ScaffoldTree) -> Result<Vec<(ChainFamily, Vec<PointAddr>)>, VerifyError> {
    let mut out = Vec::new();
    for id in (0..tree.edges().len()).map(EdgeId) {
        let Some(copies) = tree.copy_paths(id).into_iter().next() else {
            continue;
        };
        let pool = offset_pool(&tree.edge(id).length);
        let mut queries: Vec<PointAddr> = pool
            .iter()
            .map(|o| PointAddr::on(id, copies.clone(), o.clone()))
            .collect();
        queries.extend(tree.node_points());
        queries.push(PointAddr::Root);
        queries.sort();
        queries.dedup();
        for lambda in pool.iter().filter(|o| o.cofinality() == CofClass::Omega) {
            let one = Ordinal::one();
            out.push((
                ChainFamily {
                    base: AdmissibleSet::root_only(),
                    edge: id,
                    copies: copies.clone(),
                    a: one.clone(),
                    lambda: lambda.clone(),
                },
                queries.clone(),
            ));
            let base_point = PointAddr::on(id, copies.clone(), one);
            let base = tree.make_admissible(&[(base_point.clone(), base_point)], ClosurePolicy::Require)?;
            out.push((
                ChainFamily {
                    base,
                    edge: id,
                    copies: copies.clone(),
                    a: lambda.fundamental_sequence(2)?.successor(),
                    lambda: lambda.clone(),
                },
                queries.clone(),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(eta: &str) -> ScaffoldTree {
        ScaffoldTree::segment(&Ordinal::parse(eta).unwrap()).unwrap()
    }

    #[test]
    fn omega_chain_reaches_omega() {
        let t = seg("w2");
        let (edge, _) = t.as_segment().unwrap();
        let chain = ChainFamily {
            base: AdmissibleSet::root_only(),
            edge,
            copies: Vec::new(),
            a: Ordinal::one(),
            lambda: Ordinal::omega(),
        };
        let x = t.parse_point("w + 3").unwrap();
        let r = chain_limit_check(&t, &chain, &[x, t.parse_point("2").unwrap()]).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.cases[1].actual, "w");
        assert_eq!(r.cases[2].actual, "2");
    }

    #[test]
    fn malformed_chains() {
        let t = seg("w2");
        let (edge, _) = t.as_segment().unwrap();
        let mut chain = ChainFamily {
            base: AdmissibleSet::root_only(),
            edge,
            copies: Vec::new(),
            a: Ordinal::omega(),
            lambda: Ordinal::omega() + Ordinal::omega(),
        };
        assert!(chain_limit_check(&t, &chain, &[]).is_err());
        chain.a = Ordinal::one();
        chain.lambda = Ordinal::omega1();
        assert!(chain_limit_check(&t, &chain, &[]).is_err());
    }

    #[test]
    fn standard_chains_pass() {
        for t in [seg("w1*2 + 5"), crate::space::builtin_space("r1").unwrap()] {
            let chains = standard_chains(&t).unwrap();
            assert!(chains.len() >= 10);
            for (c, q) in chains {
                let r = chain_limit_check(&t, &c, &q).unwrap();
                assert!(r.passed(), "{:?}", r.first_failure());
            }
        }
    }
}
