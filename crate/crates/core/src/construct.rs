//! Building secure sum codes: a random multicast code on the reversed
//! network is transposed into a sum code, whose inputs are then mixed by a
//! key matrix B chosen greedily.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds;
use crate::code::{secure_from_parts, SecureNetworkCode, SumNetworkCode};
use crate::cuts;
use crate::error::{Error, Result};
use crate::gf::{Field, Matrix, MAX_ORDER};
use crate::network::{EdgeSet, Network};

/// Draws per multicast attempt before giving up on a field.
pub const MULTICAST_ATTEMPTS: usize = 64;

/// Prefix visits allowed to `choose_B` in a field below the size that
/// guarantees success.
pub const SMALL_FIELD_BUDGET: u64 = 1 << 16;

/// A rate-R multicast code on the reversed network, from ρ to every σᵢ.
#[derive(Debug, Clone)]
pub struct ReversedMulticastCode {
    pub field: Field,
    pub rate: usize,
    /// K_ρ: R × |In(ρ)|, columns follow In(ρ) in ≺ order.
    pub k_sink: Matrix,
    /// For each non-source, non-sink node v: K_v with rows Out(v) and
    /// columns In(v) of the original network, both in ≺ order.
    pub kernels: Vec<Option<Matrix>>,
    /// f_e for every edge (length R).
    pub f: Vec<Vec<u32>>,
    /// F_{σᵢ} = [f_e : e ∈ Out(σᵢ)].
    pub decode: Vec<Matrix>,
    /// K_{σᵢ} with F_{σᵢ}·K_{σᵢ} = I_R; rows follow Out(σᵢ).
    pub right_inverse: Vec<Matrix>,
}

fn random_matrix(field: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.random_range(0..field.order()));
        }
    }
    m
}

/// Global kernels on the reversed network: f_e for e ∈ In(ρ) is the column
/// of K_ρ, otherwise f_e = Σ_{d ∈ Out(head e)} K_{head e}[d][e]·f_d.
fn global_kernels(net: &Network, field: &Field, k_sink: &Matrix, kernels: &[Option<Matrix>]) -> Vec<Vec<u32>> {
    let rate = k_sink.rows();
    let mut f = vec![vec![0u32; rate]; net.edge_count()];
    let into_sink = net.in_edges(net.sink());
    for &e in net.order().iter().rev() {
        let v = net.edge(e).head;
        if v == net.sink() {
            let col = into_sink.iter().position(|&d| d == e).unwrap();
            f[e] = k_sink.col(col);
            continue;
        }
        let k = kernels[v].as_ref().expect("relay node has a kernel");
        let col = net.in_edges(v).iter().position(|&d| d == e).unwrap();
        let mut acc = vec![0u32; rate];
        for (row, &d) in net.out_edges(v).iter().enumerate() {
            let c = k.get(row, col);
            if c == 0 {
                continue;
            }
            for (o, &x) in acc.iter_mut().zip(&f[d]) {
                *o = field.add(*o, field.mul(c, x));
            }
        }
        f[e] = acc;
    }
    f
}

/// Seeded random multicast code on reverse(N), retried until every source
/// can decode.
pub fn multicast_code_reversed(net: &Network, rate: usize, field: &Field, seed: u64) -> Result<ReversedMulticastCode> {
    let c_min = cuts::c_min(net);
    if rate > c_min {
        return Err(Error::RateExceedsMinCut { rate, c_min });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let relay = |v: usize| v != net.sink() && !net.sources().contains(&v);
    for _ in 0..MULTICAST_ATTEMPTS {
        let k_sink = random_matrix(field, rate, net.in_edges(net.sink()).len(), &mut rng);
        let kernels: Vec<Option<Matrix>> = (0..net.node_count())
            .map(|v| {
                relay(v).then(|| random_matrix(field, net.out_edges(v).len(), net.in_edges(v).len(), &mut rng))
            })
            .collect();
        let f = global_kernels(net, field, &k_sink, &kernels);
        let decode: Vec<Matrix> = net
            .sources()
            .iter()
            .map(|&s| {
                let cols: Vec<Vec<u32>> = net.out_edges(s).iter().map(|&e| f[e].clone()).collect();
                Matrix::from_cols(field, &cols, rate).expect("vectors have length R")
            })
            .collect();
        if decode.iter().any(|m| m.rank() < rate) {
            continue;
        }
        let identity = Matrix::identity(field, rate);
        let right_inverse = decode
            .iter()
            .map(|m| m.solve_right(&identity).map(|x| x.expect("full row rank")))
            .collect::<Result<Vec<_>>>()?;
        return Ok(ReversedMulticastCode {
            field: field.clone(),
            rate,
            k_sink,
            kernels,
            f,
            decode,
            right_inverse,
        });
    }
    Err(Error::FieldTooSmallForMulticast {
        q: field.order(),
        attempts: MULTICAST_ATTEMPTS,
    })
}

/// Transposes a decodable reversed multicast code into a sum code.
pub fn reverse_to_sum_code(rc: &ReversedMulticastCode, net: &Network) -> Result<SumNetworkCode> {
    let field = &rc.field;
    let rate = rc.rate;
    let m = net.edge_count();
    let s = net.source_count();

    let mut source_coeffs = vec![vec![None; m]; s];
    for (i, &src) in net.sources().iter().enumerate() {
        for (row, &e) in net.out_edges(src).iter().enumerate() {
            source_coeffs[i][e] = Some(rc.right_inverse[i].row(row).to_vec());
        }
    }
    let mut local = Matrix::zeros(field, m, m);
    for (v, k) in rc.kernels.iter().enumerate() {
        let Some(k) = k else { continue };
        for (row, &e) in net.out_edges(v).iter().enumerate() {
            for (col, &d) in net.in_edges(v).iter().enumerate() {
                local.set(d, e, k.get(row, col));
            }
        }
    }
    let decoder = rc.k_sink.transpose();

    // g_e^{(σᵢ)} = A_{σᵢ}·(I − A)⁻¹·1_e, with A indexed by edge
    let transfer = Matrix::identity(field, m).sub(&local)?.inverse()?;
    let mut global = vec![vec![0u32; rate * s]; m];
    for i in 0..s {
        let mut a_sigma = Matrix::zeros(field, rate, m);
        for (e, col) in source_coeffs[i].iter().enumerate() {
            if let Some(col) = col {
                for (k, &v) in col.iter().enumerate() {
                    a_sigma.set(k, e, v);
                }
            }
        }
        let g_i = a_sigma.mul(&transfer)?;
        for (e, g) in global.iter_mut().enumerate() {
            g[i * rate..(i + 1) * rate].copy_from_slice(&g_i.col(e));
        }
    }
    let code = SumNetworkCode {
        field: field.clone(),
        rate,
        source_coeffs,
        local,
        global,
        decoder,
    };
    debug_assert_eq!(code.compute_global(net), code.global);

    let stacked = stacked_identity(field, rate, s);
    if code.sink_matrix(net).mul(&code.decoder)? != stacked {
        return Err(Error::ReversalInconsistent);
    }
    Ok(code)
}

/// [I_R; I_R; …] with `s` blocks.
pub fn stacked_identity(field: &Field, rate: usize, s: usize) -> Matrix {
    let mut m = Matrix::zeros(field, rate * s, rate);
    for i in 0..s {
        for k in 0..rate {
            m.set(i * rate + k, k, 1);
        }
    }
    m
}

/// First vector of `F^dim` in lexicographic order (first coordinate most
/// significant) that lies in none of `avoid`. Walks prefixes depth first;
/// a block of vectors sharing a prefix is skipped at once when a single
/// span contains all of it.
fn first_outside(field: &Field, dim: usize, avoid: &[Span], budget: &mut Option<u64>) -> Search {
    // T_k = span(e_k, ..., e_{dim-1}) ⊆ V for every k ≥ tails[i]
    let tails: Vec<usize> = avoid
        .iter()
        .map(|sp| {
            let mut k = dim;
            let mut unit = vec![0u32; dim];
            let mut scratch = Vec::with_capacity(dim);
            while k > 0 {
                unit.iter_mut().for_each(|x| *x = 0);
                unit[k - 1] = 1;
                if !sp.contains(field, &unit, &mut scratch) {
                    break;
                }
                k -= 1;
            }
            k
        })
        .collect();
    let mut v = vec![0u32; dim];
    let mut scratch = Vec::with_capacity(dim);
    match descend(field, avoid, &tails, &mut v, 0, &mut scratch, budget) {
        Some(true) => Search::Found(v),
        Some(false) => Search::Exhausted,
        None => Search::OutOfBudget,
    }
}

enum Search {
    Found(Vec<u32>),
    Exhausted,
    OutOfBudget,
}

/// `None` once the budget of visited prefixes runs out.
fn descend(
    field: &Field,
    avoid: &[Span],
    tails: &[usize],
    v: &mut [u32],
    k: usize,
    scratch: &mut Vec<u32>,
    budget: &mut Option<u64>,
) -> Option<bool> {
    if k == v.len() {
        return Some(true);
    }
    for c in 0..field.order() {
        if let Some(b) = budget {
            *b = b.checked_sub(1)?;
        }
        v[k] = c;
        let covered = avoid
            .iter()
            .zip(tails)
            .any(|(sp, &t)| t <= k + 1 && sp.contains(field, v, scratch));
        if !covered && descend(field, avoid, tails, v, k + 1, scratch, budget)? {
            return Some(true);
        }
    }
    v[k] = 0;
    Some(false)
}

/// A subspace of `F^R` kept as reduced echelon rows (pivot entries 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Span {
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Span {
    fn of(field: &Field, vectors: &[Vec<u32>], dim: usize) -> Span {
        if vectors.is_empty() {
            return Span {
                rows: Vec::new(),
                pivots: Vec::new(),
            };
        }
        let m = Matrix::from_rows_with_cols(field, vectors, dim).expect("vectors have length dim");
        let (red, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| red.row(i).to_vec()).collect();
        Span { rows, pivots }
    }

    fn contains(&self, field: &Field, v: &[u32], scratch: &mut Vec<u32>) -> bool {
        scratch.clear();
        scratch.extend_from_slice(v);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = scratch[p];
            if c != 0 {
                for (x, &y) in scratch.iter_mut().zip(row) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        scratch.iter().all(|&x| x == 0)
    }
}

/// Greedy choice of the columns of B. The first R − r columns must each
/// stay outside every span of wiretap-visible blocks plus the previously
/// chosen columns; the rest only need to complete a basis.
pub fn choose_b(code: &SumNetworkCode, r: usize, family: &[EdgeSet]) -> Result<Matrix> {
    Ok(choose_b_within(code, r, family, None)?.expect("unbounded search always concludes"))
}

/// [`choose_b`] giving up (`Ok(None)`) after `budget` prefix visits.
fn choose_b_within(code: &SumNetworkCode, r: usize, family: &[EdgeSet], mut budget: Option<u64>) -> Result<Option<Matrix>> {
    let field = &code.field;
    let rate = code.rate;
    if r > rate {
        return Err(Error::RateInfeasible(format!("security level {r} exceeds rate {rate}")));
    }
    // one spanning set per (W, source) pair; empty spans impose nothing new
    let mut views: Vec<Vec<Vec<u32>>> = Vec::new();
    for w in family {
        for i in 0..code.sources() {
            let cols: Vec<Vec<u32>> = w
                .iter()
                .map(|e| code.block(e, i).to_vec())
                .filter(|v| v.iter().any(|&x| x != 0))
                .collect();
            if !cols.is_empty() {
                views.push(cols);
            }
        }
    }
    let mut chosen: Vec<Vec<u32>> = Vec::new();
    for j in 0..rate {
        let prev = Span::of(field, &chosen, rate);
        let mut spans: Vec<Span> = Vec::new();
        if j < rate - r {
            let mut seen = HashSet::new();
            for view in &views {
                let mut vectors = view.clone();
                vectors.extend(chosen.iter().cloned());
                let span = Span::of(field, &vectors, rate);
                if seen.insert(span.clone()) {
                    spans.push(span);
                }
            }
            // larger spans reject more candidates; test them first
            spans.sort_by_key(|sp| std::cmp::Reverse(sp.rows.len()));
        }
        spans.push(prev);
        match first_outside(field, rate, &spans, &mut budget) {
            Search::Found(b) => chosen.push(b),
            Search::Exhausted => {
                return Err(Error::FieldTooSmall {
                    q: field.order(),
                    column: j + 1,
                })
            }
            Search::OutOfBudget => return Ok(None),
        }
    }
    Matrix::from_cols(field, &chosen, rate).map(Some)
}

/// Mixes a sum code with B: sources send x·B⁻¹·A_{i,e}, the decoder
/// multiplies by B and keeps the first R − r coordinates.
pub fn secure_code(code: SumNetworkCode, b: Matrix, r: usize, net: &Network) -> Result<SecureNetworkCode> {
    if b.shape() != (code.rate, code.rate) {
        return Err(Error::DimensionMismatch(format!(
            "B is {:?}, expected {}x{}",
            b.shape(),
            code.rate,
            code.rate
        )));
    }
    if r > code.rate {
        return Err(Error::RateInfeasible(format!("security level {r} exceeds rate {}", code.rate)));
    }
    secure_from_parts(code, b, r, net)
}

/// Which wiretap family B must be secure against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Family {
    /// Primary sets of size exactly r.
    #[default]
    PrimaryExact,
    /// Every edge set of size ≤ r.
    All,
}

#[derive(Debug, Clone)]
pub struct ConstructOptions {
    pub rate: Option<usize>,
    pub field: Option<Field>,
    pub base_prime: u32,
    pub seed: u64,
    pub family: Family,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            rate: None,
            field: None,
            base_prime: 2,
            seed: 0,
            family: Family::PrimaryExact,
        }
    }
}

fn build_in(net: &Network, r: usize, rate: usize, field: &Field, seed: u64, family: &[EdgeSet]) -> Result<SecureNetworkCode> {
    let rc = multicast_code_reversed(net, rate, field, seed)?;
    let sum = reverse_to_sum_code(&rc, net)?;
    // Below q > s·|family| success is not guaranteed and a full search can
    // blow up, so small-field attempts get a budget.
    let guaranteed = (field.order() as usize) > sum.sources() * family.len();
    let budget = (!guaranteed).then_some(SMALL_FIELD_BUDGET);
    match choose_b_within(&sum, r, family, budget)? {
        Some(b) => secure_code(sum, b, r, net),
        None => Err(Error::FieldTooSmall {
            q: field.order(),
            column: 0,
        }),
    }
}

/// End to end: picks R (default C_min), then tries GF(p), GF(p²), … until
/// both the multicast code and B exist.
pub fn construct(net: &Network, r: usize, opts: &ConstructOptions) -> Result<SecureNetworkCode> {
    let c_min = cuts::c_min(net);
    let rate = opts.rate.unwrap_or(c_min);
    if rate > c_min {
        return Err(Error::RateInfeasible(format!("rate {rate} exceeds C_min = {c_min}")));
    }
    if rate <= r {
        return Err(Error::RateInfeasible(format!(
            "rate {rate} leaves no message symbols at security level {r}"
        )));
    }
    let family = match opts.family {
        Family::PrimaryExact => bounds::primary_wiretap_sets(net, r, true),
        Family::All => bounds::wiretap_sets(net, r, false),
    };
    if let Some(field) = &opts.field {
        return build_in(net, r, rate, field, opts.seed, &family);
    }
    let p = opts.base_prime;
    let mut degree = 1;
    while (p as u64).pow(degree) <= MAX_ORDER {
        let field = Field::new(p, degree)?;
        match build_in(net, r, rate, &field, opts.seed, &family) {
            Err(Error::FieldTooSmall { .. } | Error::FieldTooSmallForMulticast { .. }) => degree += 1,
            other => return other,
        }
    }
    Err(Error::ConstructionFailed)
}

/// A GF(p^L) code viewed as a code over GF(p) carrying L symbols per use.
#[derive(Debug, Clone)]
pub struct LiftedCode {
    pub base: Field,
    pub ell: usize,
    pub n: usize,
    /// Per source, per out-edge: (edge, RL × L matrix).
    pub source_matrices: Vec<Vec<(usize, Matrix)>>,
    /// (d, e, L × L block) for each nonzero local coefficient.
    pub local: Vec<(usize, usize, Matrix)>,
    /// |In(ρ)|L × (R − r)L.
    pub decoder: Matrix,
}

pub fn lift_extension(code: &SecureNetworkCode, net: &Network) -> Result<LiftedCode> {
    let field = code.field();
    if field.is_prime_field() {
        return Err(Error::PrimeFieldInput);
    }
    let l = field.degree() as usize;
    let rate = code.rate();
    let mut source_matrices = Vec::new();
    for (i, per) in code.secure_source_coeffs().into_iter().enumerate() {
        let mut out = Vec::new();
        for &e in net.out_edges(net.sources()[i]) {
            let a = per[e].clone().expect("source out-edge has coefficients");
            out.push((e, Matrix::from_cols(field, &[a], rate)?.companion_expand()?));
        }
        source_matrices.push(out);
    }
    let mut local = Vec::new();
    for &e in net.order() {
        for &d in net.in_edges(net.edge(e).tail) {
            let c = code.base.local.get(d, e);
            if c != 0 {
                local.push((d, e, Matrix::from_rows(field, &[vec![c]])?.companion_expand()?));
            }
        }
    }
    Ok(LiftedCode {
        base: Field::new(field.characteristic(), 1)?,
        ell: code.message_dim() * l,
        n: l,
        source_matrices,
        local,
        decoder: code.message_decoder().companion_expand()?,
    })
}
