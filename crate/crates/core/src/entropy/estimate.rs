use num::rational::Ratio;
use num::{BigUint, ToPrimitive};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::entropy::{count_separated, perturbation_radius, CountMode, EntropyParams, MicrostateSpace};
use crate::error::{Error, Result};
use crate::shift::{enumerate_box, periodic_points, BoxWindow, Configuration, LineGraph, Subshift, DEFAULT_MARGIN};
use crate::sofic::torus_approximation_with_radius;

/// Natural log of a big integer (`-inf` for zero).
pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `(1/n^r) log |patterns on [0, n)^r|`; for `Z` an upper bound on the entropy for every `n`.
pub fn pattern_complexity_bound(x: &Subshift, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("window size must be positive".into()));
    }
    if x.rank() == 1 {
        let count = LineGraph::new(x)?.count_words(n);
        return Ok(ln_biguint(&count) / n as f64);
    }
    let window = BoxWindow::cube(x.rank(), n);
    let count = enumerate_box(x, &window, DEFAULT_MARGIN)?.len();
    Ok((count as f64).ln() / window.len() as f64)
}

/// Collatz-Wielandt bracket on `log` of the spectral radius of the transfer
/// graph, or `None` for an empty subshift.
pub fn transfer_matrix_bracket(x: &Subshift) -> Result<Option<(f64, f64)>> {
    let g = LineGraph::new(x)?;
    let n = g.vertex_count();
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for e in g.edges() {
        graph.add_edge(nodes[e.from], nodes[e.to], ());
    }
    let mut best: Option<(f64, f64)> = None;
    for scc in tarjan_scc(&graph) {
        let ids: Vec<usize> = scc.iter().map(|v| v.index()).collect();
        let local = |v: usize| ids.iter().position(|&w| w == v);
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ids.len()];
        for e in g.edges() {
            if let (Some(a), Some(b)) = (local(e.from), local(e.to)) {
                rows[a].push((b, 1.0));
            }
        }
        if rows.iter().all(|r| r.is_empty()) {
            continue;
        }
        let (lo, hi) = perron_bracket(&rows);
        best = Some(match best {
            None => (lo, hi),
            Some((a, b)) => (a.max(lo), b.max(hi)),
        });
    }
    Ok(best.map(|(lo, hi)| (lo.ln(), hi.ln())))
}

/// Power iteration on `A + I` (primitive for irreducible `A`), bracketing the
/// Perron root of `A` by the min and max of `(A v)_i / v_i`.
fn perron_bracket(rows: &[Vec<(usize, f64)>]) -> (f64, f64) {
    let n = rows.len();
    let mut v = vec![1.0f64; n];
    let mut bracket = (0.0, f64::INFINITY);
    for _ in 0..1_000_000 {
        let w: Vec<f64> = (0..n).map(|i| v[i] + rows[i].iter().map(|&(j, a)| a * v[j]).sum::<f64>()).collect();
        let ratios = w.iter().zip(&v).map(|(a, b)| a / b);
        let lo = ratios.clone().fold(f64::INFINITY, f64::min) - 1.0;
        let hi = ratios.fold(0.0, f64::max) - 1.0;
        bracket = (lo.max(bracket.0), hi.min(bracket.1));
        let norm = w.iter().cloned().fold(0.0, f64::max);
        v = w.into_iter().map(|a| a / norm).collect();
        if bracket.1 - bracket.0 <= 1e-13 * bracket.1.max(1.0) {
            break;
        }
    }
    bracket
}

/// Topological entropy of a `Z`-SFT; `-inf` when empty.
pub fn transfer_matrix_entropy(x: &Subshift) -> Result<f64> {
    if x.rank() != 1 {
        return Err(Error::UnsupportedGroup("transfer matrices need Z".into()));
    }
    Ok(match transfer_matrix_bracket(x)? {
        None => f64::NEG_INFINITY,
        Some((lo, hi)) => 0.5 * (lo + hi),
    })
}

#[derive(Clone, Debug)]
pub struct EstimateOptions {
    /// Edits per lift and their radius (`None` picks [`perturbation_radius`]).
    pub perturbation: Option<(usize, Option<u32>)>,
    /// Window size of the pattern bound. `None` uses the side where the lower
    /// value is attained; `d`-periodic points are determined by a `d`-box, so
    /// that keeps `lower <= upper`.
    pub upper_n: Option<usize>,
    pub mode: CountMode,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            perturbation: None,
            upper_n: None,
            mode: CountMode::Greedy,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    /// Torus side; the approximation acts on `side^r` points.
    pub side: usize,
    pub points: usize,
    pub delta: Ratio<u64>,
    pub lifts: usize,
    pub perturbed: usize,
    pub n_eps: usize,
    /// `(1/points) log N_eps`, `-inf` for an empty space.
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub eps: Ratio<u64>,
    /// Largest rate over the schedule.
    pub lower: f64,
    pub upper: f64,
    pub upper_n: usize,
    pub exact_oracle: Option<f64>,
    pub trace: Vec<TraceRow>,
}

pub fn estimate_entropy(x: &Subshift, schedule: &[(usize, Ratio<u64>)], eps: Ratio<u64>) -> Result<EntropyEstimate> {
    estimate_entropy_with(x, schedule, eps, &EstimateOptions::default())
}

/// Counts separated periodic lifts over cyclic (or torus) approximations, with
/// `F` the generator ball `Omega_2`.
pub fn estimate_entropy_with(
    x: &Subshift,
    schedule: &[(usize, Ratio<u64>)],
    eps: Ratio<u64>,
    opts: &EstimateOptions,
) -> Result<EntropyEstimate> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty schedule".into()));
    }
    let rank = x.group().lattice_rank().ok_or_else(|| Error::UnsupportedGroup(x.group().to_string()))?;
    let f = x.group().ball(2);
    let mut trace = Vec::new();
    for &(side, delta) in schedule {
        let approx = torus_approximation_with_radius(side, rank, 1)?;
        let points = approx.d();
        let params = EntropyParams::new(f.clone(), delta, eps, approx)?;
        let mut space = MicrostateSpace::from_periodic_lifts(x, params)?;
        let lifts = space.len();
        let perturbed = match opts.perturbation {
            Some((per_lift, radius)) => {
                let r = radius.unwrap_or_else(|| perturbation_radius(points, delta, 1));
                space.perturb(x, r, per_lift)?
            }
            None => 0,
        };
        let n_eps = count_separated(&space, eps, opts.mode)?;
        let rate = if n_eps == 0 { f64::NEG_INFINITY } else { (n_eps as f64).ln() / points as f64 };
        trace.push(TraceRow { side, points, delta, lifts, perturbed, n_eps, rate });
    }
    let lower = trace.iter().map(|r| r.rate).fold(f64::NEG_INFINITY, f64::max);
    let best = trace.iter().fold(&trace[0], |b, r| if r.rate > b.rate { r } else { b });
    let upper_n = opts.upper_n.unwrap_or(best.side);
    let upper = pattern_complexity_bound(x, upper_n)?;
    let exact_oracle = if rank == 1 { Some(transfer_matrix_entropy(x)?) } else { None };
    Ok(EntropyEstimate { eps, lower, upper, upper_n, exact_oracle, trace })
}

#[derive(Clone, Debug)]
pub struct GapReport {
    pub x: EntropyEstimate,
    pub y: EntropyEstimate,
    /// A periodic point of `X` outside `Y`.
    pub witness: Configuration,
    pub margin: f64,
}

impl GapReport {
    pub fn gap(&self) -> f64 {
        self.x.lower - self.y.upper
    }

    /// `lower(X) > upper(Y) + margin`.
    pub fn strict(&self) -> bool {
        self.x.lower > self.y.upper + self.margin
    }
}

/// Sound check that every point of `y` lies in `x`.
fn contained(y: &Subshift, x: &Subshift) -> Result<bool> {
    if y.rank() == 1 {
        let (_, width) = x.line_span();
        let block = LineGraph::min_block(y).max(width);
        let g = LineGraph::with_block(y, block)?;
        let (min, _) = x.line_span();
        return Ok(g.edges().iter().all(|e| {
            (0..=(e.word.len() - width) as i64).all(|t| x.window_ok(&[t - min], |p| e.word[p[0] as usize]))
        }));
    }
    // margin-admissible patterns of y contain the true ones
    let b = x.memory_box();
    let pats = enumerate_box(y, &b, DEFAULT_MARGIN)?;
    let cells: Vec<usize> = x.offsets().iter().map(|o| b.index(o).unwrap()).collect();
    Ok(pats.words.iter().all(|w| {
        let p: Vec<u8> = cells.iter().map(|&i| w[i]).collect();
        x.allows(&p)
    }))
}

/// Periods searched for a point of `X` outside `Y`.
const WITNESS_PERIODS: usize = 8;

/// Entropy estimates of `Y ⊊ X` under the same schedule.
pub fn entropy_gap_experiment(
    x: &Subshift,
    y: &Subshift,
    schedule: &[(usize, Ratio<u64>)],
    eps: Ratio<u64>,
    margin: f64,
) -> Result<GapReport> {
    if x.group() != y.group() || x.symbols() != y.symbols() {
        return Err(Error::Containment("the subshifts live on different groups or alphabets".into()));
    }
    if !contained(y, x)? {
        return Err(Error::Containment("Y has a pattern X forbids".into()));
    }
    let witness = (1..=WITNESS_PERIODS)
        .find_map(|d| {
            periodic_points(x, d)
                .map(|ps| ps.into_iter().find(|p| !y.contains(p)))
                .transpose()
        })
        .transpose()?
        .ok_or_else(|| {
            Error::Containment(format!("no point of X with period <= {WITNESS_PERIODS} outside Y; is Y proper?"))
        })?;
    let ex = estimate_entropy(x, schedule, eps)?;
    let ey = estimate_entropy(y, schedule, eps)?;
    Ok(GapReport { x: ex, y: ey, witness, margin })
}
