//! Suites that recompute extremal values and compare them with closed forms.
//!
//! Every row runs a fresh search; nothing is cached between rows.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rturan_core::constructions::{claimed_value, construct, ConstructionError, ConstructionId, FormulaId, Params};
use rturan_core::detect::is_rainbow_free;
use rturan_core::family::PatternFamily;
use rturan_core::pattern::{matching, parse_pattern};
use rturan_core::search::{extremal, ExtremalQuery, Executor, Mode, SearchError};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteId {
    Meshulam,
    MinTheorem,
    SumK3,
    ProdMatching,
    SumBipartite,
    Constructions,
    SumUpper,
}

impl SuiteId {
    pub const ALL: [SuiteId; 7] = [
        SuiteId::Meshulam,
        SuiteId::MinTheorem,
        SuiteId::SumK3,
        SuiteId::ProdMatching,
        SuiteId::SumBipartite,
        SuiteId::Constructions,
        SuiteId::SumUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Meshulam => "meshulam",
            SuiteId::MinTheorem => "min-theorem",
            SuiteId::SumK3 => "sum-k3",
            SuiteId::ProdMatching => "prod-matching",
            SuiteId::SumBipartite => "sum-bipartite",
            SuiteId::Constructions => "constructions",
            SuiteId::SumUpper => "sum-upper",
        }
    }
}

impl FromStr for SuiteId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// equality claim confirmed
    Match,
    /// equality claim refuted where it is asserted
    Mismatch,
    /// the formula does not apply because the forbidden matching cannot
    /// embed or a complete graph on `2s+1` vertices beats it
    Boundary,
    /// differs at a size below an unspecified "n large" threshold
    SmallN,
    /// inequality claim confirmed
    Holds,
    /// inequality claim refuted
    Violated,
    /// the node budget ran out
    Budget,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::Boundary => "boundary",
            Status::SmallN => "small-n",
            Status::Holds => "holds",
            Status::Violated => "violated",
            Status::Budget => "budget",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Mismatch | Status::Violated)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub suite: SuiteId,
    pub params: String,
    pub claimed: String,
    pub computed: String,
    pub status: Status,
    pub nodes: u64,
    pub millis: u128,
}

impl Row {
    pub const TSV_HEADER: &'static str = "suite\tparams\tclaimed\tcomputed\tmatch\tnodes\tmillis";

    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.suite,
            self.params,
            self.claimed,
            self.computed,
            self.status.name(),
            self.nodes,
            self.millis
        )
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{params}: {cause}")]
    Search { params: String, cause: SearchError },
    #[error("{params}: {cause}")]
    Construction { params: String, cause: ConstructionError },
}

/// Search settings shared by all rows.
pub struct Runner<'a> {
    pub executor: &'a dyn Executor,
    pub budget: u64,
}

/// A computed extremal value, or `None` when the budget ran out.
struct Computed {
    value: Option<u64>,
    nodes: u64,
}

impl Runner<'_> {
    fn search(&self, mode: Mode, n: usize, t: usize, fam: &PatternFamily, params: &str) -> Result<Computed, VerifyError> {
        let q = ExtremalQuery::new(mode, n, t, fam.clone()).with_budget(self.budget);
        match extremal(&q, self.executor) {
            Ok(r) => Ok(Computed {
                value: r.exact.then_some(r.value),
                nodes: r.nodes,
            }),
            Err(SearchError::BudgetExceeded { nodes }) => Ok(Computed { value: None, nodes }),
            Err(cause) => Err(VerifyError::Search {
                params: params.to_string(),
                cause,
            }),
        }
    }

    fn claimed(&self, id: FormulaId, p: Params, params: &str) -> Result<u64, VerifyError> {
        let p = Params {
            budget: Some(self.budget),
            ..p
        };
        claimed_value(id, &p).map_err(|cause| VerifyError::Construction {
            params: params.to_string(),
            cause,
        })
    }
}

/// Builds a row comparing `claimed` with a fresh search; `judge` decides
/// the status once both values are known.
fn row(
    suite: SuiteId,
    params: String,
    claimed: u64,
    computed: Computed,
    started: Instant,
    judge: impl FnOnce(u64) -> Status,
) -> Row {
    let (computed_text, status) = match computed.value {
        Some(v) => (v.to_string(), judge(v)),
        None => ("?".to_string(), Status::Budget),
    };
    Row {
        suite,
        params,
        claimed: claimed.to_string(),
        computed: computed_text,
        status,
        nodes: computed.nodes,
        millis: started.elapsed().as_millis(),
    }
}

fn family(spec: &str) -> PatternFamily {
    PatternFamily::parse(spec).expect("suite families are well formed")
}

fn with_matching(f: &str, s: usize) -> PatternFamily {
    let mut members = vec![parse_pattern(f).expect("suite patterns are well formed")];
    members.push(matching(s + 1).expect("small matching"));
    PatternFamily::new(members).expect("nonempty")
}

fn binom2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Equality where the formula applies, boundary where the matching cannot
/// embed or `K_{2s+1}` in every colour does better.
fn meshulam_status(n: usize, s: usize, claimed: u64, v: u64) -> Status {
    if v == claimed {
        Status::Match
    } else if n < 2 * s + 2 || binom2(2 * s as u64 + 1) > claimed {
        Status::Boundary
    } else {
        Status::Mismatch
    }
}

fn equality_small_n(claimed: u64) -> impl FnOnce(u64) -> Status {
    move |v| if v == claimed { Status::Match } else { Status::SmallN }
}

pub const MESHULAM_GRID: [(usize, usize, usize); 8] =
    [(3, 1, 2), (4, 1, 2), (4, 1, 3), (5, 1, 2), (5, 2, 3), (6, 1, 2), (6, 1, 3), (6, 2, 3)];

fn meshulam(r: &Runner) -> Result<Vec<Row>, VerifyError> {
    let mut rows = Vec::new();
    for (n, s, t) in MESHULAM_GRID {
        let started = Instant::now();
        let params = format!("n={n},s={s},t={t}");
        let claimed = r.claimed(FormulaId::Meshulam, Params::new().n(n).s(s), &params)?;
        let computed = r.search(Mode::Min, n, t, &family(&format!("{{M{}}}", s + 1)), &params)?;
        rows.push(row(SuiteId::Meshulam, params, claimed, computed, started, |v| {
            meshulam_status(n, s, claimed, v)
        }));
    }
    Ok(rows)
}

fn min_theorem(r: &Runner) -> Result<Vec<Row>, VerifyError> {
    let grid: [(FormulaId, &str, usize, usize, usize); 10] = [
        (FormulaId::MinI, "K3", 4, 3, 1),
        (FormulaId::MinI, "K3", 5, 3, 1),
        (FormulaId::MinI, "K3", 5, 3, 2),
        (FormulaId::MinI, "K3", 6, 3, 2),
        (FormulaId::MinI, "K4", 6, 3, 2),
        (FormulaId::MinII, "K2,2", 4, 2, 1),
        (FormulaId::MinII, "K2,2", 6, 2, 1),
        (FormulaId::MinII, "K3,3", 6, 3, 2),
        (FormulaId::MinIV, "P4", 5, 3, 2),
        (FormulaId::MinIV, "P4", 6, 3, 2),
    ];
    let mut rows = Vec::new();
    for (id, f, n, t, s) in grid {
        let started = Instant::now();
        let params = format!("{id},F={f},n={n},t={t},s={s}");
        let g = parse_pattern(f).expect("suite pattern");
        let claimed = r.claimed(id, Params::new().n(n).t(t).s(s).f(g), &params)?;
        let computed = r.search(Mode::Min, n, t, &with_matching(f, s), &params)?;
        rows.push(row(SuiteId::MinTheorem, params, claimed, computed, started, equality_small_n(claimed)));
    }
    Ok(rows)
}

fn sum_k3(r: &Runner) -> Result<Vec<Row>, VerifyError> {
    let mut rows = Vec::new();
    for n in 3..=5 {
        for t in 1..=4 {
            let started = Instant::now();
            let params = format!("n={n},t={t}");
            let claimed = r.claimed(FormulaId::SumK3, Params::new().n(n).s(t), &params)?;
            let computed = r.search(Mode::Sum, n, t, &family("{K3}"), &params)?;
            rows.push(row(SuiteId::SumK3, params, claimed, computed, started, equality_small_n(claimed)));
        }
    }
    Ok(rows)
}

fn prod_matching(r: &Runner) -> Result<Vec<Row>, VerifyError> {
    let grid = [(3, 2, 1), (4, 2, 1), (4, 3, 1), (5, 2, 1), (5, 3, 1), (5, 3, 2), (6, 3, 2)];
    let mut rows = Vec::new();
    for (n, t, s) in grid {
        let started = Instant::now();
        let params = format!("n={n},t={t},s={s}");
        let claimed = r.claimed(FormulaId::ProdMatching, Params::new().n(n).t(t).s(s), &params)?;
        let computed = r.search(Mode::Prod, n, t, &family(&format!("{{M{}}}", s + 1)), &params)?;
        rows.push(row(SuiteId::ProdMatching, params, claimed, computed, started, |v| {
            if v == claimed {
                Status::Match
            } else if n < 2 * s + 2 {
                Status::Boundary
            } else {
                Status::SmallN
            }
        }));
    }
    Ok(rows)
}

fn sum_bipartite(r: &Runner) -> Result<Vec<Row>, VerifyError> {
    let grid = [("P3", 4, 2), ("P3", 5, 2), ("P3", 6, 2), ("P3", 4, 3), ("M2", 5, 2), ("S3", 5, 3), ("P4", 4, 3)];
    let mut rows = Vec::new();
    for (f, n, t) in grid {
        let started = Instant::now();
        let params = format!("F={f},n={n},t={t}");
        let g = parse_pattern(f).expect("suite pattern");
        let claimed = r.claimed(FormulaId::SumBipartite, Params::new().n(n).f(g), &params)?;
        let computed = r.search(Mode::Sum, n, t, &PatternFamily::single(g), &params)?;
        rows.push(row(SuiteId::SumBipartite, params, claimed, computed, started, equality_small_n(claimed)));
    }
    Ok(rows)
}

fn sum_upper(r: &Runner) -> Result<Vec<Row>, VerifyError> {
    let grid = [("{K3,M2}", 4, 3), ("{K3,M2}", 5, 3), ("{K3,M2}", 4, 4), ("{K3}", 4, 3), ("{K3,P3}", 5, 3)];
    let mut rows = Vec::new();
    for (spec, n, t) in grid {
        let started = Instant::now();
        let params = format!("family={spec},n={n},t={t}");
        let fam = family(spec);
        let claimed = r.claimed(FormulaId::SumGeneralUpper, Params::new().n(n).t(t).family(fam.clone()), &params)?;
        let computed = r.search(Mode::Sum, n, t, &fam, &params)?;
        rows.push(row(SuiteId::SumUpper, params, claimed, computed, started, |v| {
            if v <= claimed {
                Status::Holds
            } else {
                Status::Violated
            }
        }));
    }
    Ok(rows)
}

/// Representative parameters per construction; `search` marks points small
/// enough to compare against the exact extremal value.
fn construction_points() -> Vec<(ConstructionId, &'static str, bool)> {
    use ConstructionId::*;
    vec![
        (MinI, "n=6,t=3,s=2,F=K3", true),
        (MinII, "n=6,t=2,s=1,F=K2,2", true),
        (MinIII, "n=8,t=3,s=2,p=2", false),
        (MinIII, "n=6,t=3,s=2,p=2", true),
        (MinIV, "n=6,t=3,s=2,F=P4", true),
        (MinKppRemark, "n=10,t=4,s=3,p=2", false),
        (MinKppRemark, "n=6,t=3,s=2,p=2", true),
        (SumCliques, "n=5,t=3,F=P3", true),
        (SumMonochromeExtremal, "n=5,t=3,F=K3", true),
        (ProdMatching, "n=5,t=3,s=1", true),
        (ProdMatching, "n=6,t=4,s=2", false),
        (ProdCliqueStar, "n=6,t=3,s=2,F=K3", false),
        (ProdCliqueStar, "n=12,t=3,s=2,F=K3", false),
        (ProdStarGt, "n=24,t=4,s=1,r=3", false),
        (ProdStarEq, "n=24,t=4,s=2,r=3", false),
        (ProdStarLt, "n=24,t=3,s=2,r=3", false),
        (ProdStar2, "n=24,t=3,s=2", false),
        (ProdSmStarClique, "n=24,t=4,s=2,r=3,m=1", false),
        (ProdSmMixed, "n=30,t=5,s=3,r=3,m=1", false),
        (ProdSmBigstar, "n=6,t=3,s=2,r=3,m=1", true),
    ]
}

fn objective(mode: Mode, counts: &[usize]) -> u64 {
    let counts = counts.iter().map(|&k| k as u64);
    match mode {
        Mode::Min => counts.min().unwrap_or(0),
        Mode::Sum => counts.sum(),
        Mode::Prod => counts.product(),
    }
}

fn mode_of(id: ConstructionId) -> Mode {
    let name = id.name();
    if name.starts_with("min.") {
        Mode::Min
    } else if name.starts_with("sum.") {
        Mode::Sum
    } else {
        Mode::Prod
    }
}

fn constructions(r: &Runner) -> Result<Vec<Row>, VerifyError> {
    let mut rows = Vec::new();
    for (id, text, search) in construction_points() {
        let started = Instant::now();
        let params = format!("{id},{text}");
        let mut p = crate::params::parse_params(text).expect("suite parameters are well formed");
        p.budget = Some(r.budget);
        let built = construct(id, &p).map_err(|cause| VerifyError::Construction {
            params: params.clone(),
            cause,
        })?;
        let mode = mode_of(id);
        let claimed = objective(mode, &built.expected_edges);
        let actual = objective(mode, &built.collection.edge_counts());
        let certified =
            built.collection.edge_counts() == built.expected_edges && is_rainbow_free(&built.collection, &built.forbidden);
        rows.push(Row {
            suite: SuiteId::Constructions,
            params: params.clone(),
            claimed: claimed.to_string(),
            computed: actual.to_string(),
            status: if certified { Status::Match } else { Status::Mismatch },
            nodes: 0,
            millis: started.elapsed().as_millis(),
        });
        if search {
            // the construction is a lower bound for the exact value
            let started = Instant::now();
            let c = &built.collection;
            let computed = r.search(mode, c.n(), c.t(), &built.forbidden, &params)?;
            rows.push(row(
                SuiteId::Constructions,
                format!("{params},lower-bound"),
                claimed,
                computed,
                started,
                |v| if v >= claimed { Status::Holds } else { Status::Violated },
            ));
        }
    }
    Ok(rows)
}

pub fn run_suite(id: SuiteId, runner: &Runner) -> Result<Vec<Row>, VerifyError> {
    match id {
        SuiteId::Meshulam => meshulam(runner),
        SuiteId::MinTheorem => min_theorem(runner),
        SuiteId::SumK3 => sum_k3(runner),
        SuiteId::ProdMatching => prod_matching(runner),
        SuiteId::SumBipartite => sum_bipartite(runner),
        SuiteId::Constructions => constructions(runner),
        SuiteId::SumUpper => sum_upper(runner),
    }
}

/// Every suite in order.
pub fn run_all(runner: &Runner) -> Result<Vec<Row>, VerifyError> {
    let mut rows = Vec::new();
    for id in SuiteId::ALL {
        rows.extend(run_suite(id, runner)?);
    }
    Ok(rows)
}
