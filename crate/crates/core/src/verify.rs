//! Checking computability and security of secure sum codes, by rank
//! criteria and by exhaustive enumeration.

use std::collections::HashMap;

use serde::Serialize;

use crate::bounds;
use crate::code::SecureNetworkCode;
use crate::construct::stacked_identity;
use crate::error::{Error, Result};
use crate::gf::Matrix;
use crate::network::{EdgeSet, Network};

/// Default bound on enumerated input states.
pub const DEFAULT_MAX_EXHAUSTIVE: u64 = 1 << 24;

/// Environment variable overriding [`DEFAULT_MAX_EXHAUSTIVE`].
pub const MAX_EXHAUSTIVE_ENV: &str = "SNFC_MAX_EXHAUSTIVE";

pub fn exhaustive_cap_from(value: Option<&str>) -> u64 {
    value
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_EXHAUSTIVE)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub computable: bool,
    pub secure_rank: bool,
    pub secure_exhaustive: Option<bool>,
    pub failing_w: Option<EdgeSet>,
    pub ell: usize,
    pub n: usize,
    pub upper: usize,
    pub bound_consistent: bool,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.computable && self.secure_rank && self.secure_exhaustive != Some(false) && self.bound_consistent
    }

    pub fn to_json(&self, net: &Network) -> VerifyReportJson {
        VerifyReportJson {
            computable: self.computable,
            secure_rank: self.secure_rank,
            secure_exhaustive: self.secure_exhaustive,
            failing_w: self.failing_w.as_ref().map(|w| net.edge_names(w)),
            rate: RateJson {
                ell: self.ell,
                n: self.n,
            },
            upper: self.upper,
            bound_consistent: self.bound_consistent,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RateJson {
    pub ell: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReportJson {
    pub computable: bool,
    pub secure_rank: bool,
    pub secure_exhaustive: Option<bool>,
    #[serde(rename = "failing_W")]
    pub failing_w: Option<Vec<String>>,
    pub rate: RateJson,
    pub upper: usize,
    pub bound_consistent: bool,
}

fn check_shape(code: &SecureNetworkCode, net: &Network) -> Result<()> {
    let rs = code.rate() * code.sources();
    if code.sources() != net.source_count() || code.h.len() != net.edge_count() || code.h.iter().any(|h| h.len() != rs) {
        return Err(Error::ShapeMismatch("code does not fit the network".into()));
    }
    if code.base.decoder.rows() != net.in_edges(net.sink()).len() {
        return Err(Error::ShapeMismatch("decoder rows differ from In(rho)".into()));
    }
    Ok(())
}

/// The sink recovers Σ mᵢ for every input: H_ρ·(D·B)[:, ..R−r] must be
/// the stacked identity restricted to its first R − r columns.
pub fn check_computability(code: &SecureNetworkCode, net: &Network) -> Result<bool> {
    check_shape(code, net)?;
    let ell = code.message_dim();
    let target = stacked_identity(code.field(), code.rate(), code.sources()).select_cols(&(0..ell).collect::<Vec<_>>());
    Ok(code.sink_matrix(net).mul(&code.message_decoder())? == target)
}

/// Message-selector Γ: picks the R − r message coordinates of every source.
pub fn message_selector(code: &SecureNetworkCode) -> Matrix {
    let (rate, ell, s) = (code.rate(), code.message_dim(), code.sources());
    let mut g = Matrix::zeros(code.field(), rate * s, ell * s);
    for i in 0..s {
        for k in 0..ell {
            g.set(i * rate + k, i * ell + k, 1);
        }
    }
    g
}

/// First W ⊆ E with |W| ≤ r for which rank [H_W Γ] < rank H_W + (R−r)s.
pub fn security_rank_failure(code: &SecureNetworkCode, net: &Network, r: usize) -> Result<Option<EdgeSet>> {
    check_shape(code, net)?;
    let gamma = message_selector(code);
    let full = gamma.cols();
    for w in bounds::wiretap_sets(net, r, false) {
        let hw = code.wiretap_matrix(&w);
        if hw.hstack(&gamma)?.rank() != hw.rank() + full {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn check_security_rank(code: &SecureNetworkCode, net: &Network, r: usize) -> Result<bool> {
    Ok(security_rank_failure(code, net, r)?.is_none())
}

/// Number of input states, q^{Rs}, or `None` on overflow.
pub fn state_count(code: &SecureNetworkCode) -> Option<u64> {
    (code.field().order() as u64).checked_pow((code.rate() * code.sources()) as u32)
}

/// Outcome of one pass over all inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveOutcome {
    pub computable: bool,
    pub failing_w: Option<EdgeSet>,
}

struct Tally {
    w: EdgeSet,
    y_states: u64,
    dense: Option<Vec<u32>>,
    sparse: HashMap<(u64, u64), u32>,
}

/// Enumerates every (m_S, k_S), simulating edges in ≺ order. Decoding is
/// compared to Σ mᵢ, and for each W in `family` the joint counts of
/// (m_S, y_W) must be flat in m_S for every observed y_W.
pub fn exhaustive(code: &SecureNetworkCode, net: &Network, family: &[EdgeSet], cap: u64) -> Result<ExhaustiveOutcome> {
    check_shape(code, net)?;
    let f = code.field();
    let q = f.order() as u64;
    let (rate, ell, s) = (code.rate(), code.message_dim(), code.sources());
    let dims = rate * s;
    let states = match state_count(code) {
        Some(n) if n <= cap => n,
        other => {
            return Err(Error::TooLarge {
                what: "input states",
                size: other.unwrap_or(u64::MAX),
                limit: cap,
            })
        }
    };
    let m_states = q.pow((ell * s) as u32);
    let mut tallies: Vec<Tally> = family
        .iter()
        .map(|w| {
            let y_states = q.saturating_pow(w.len() as u32);
            let size = m_states.saturating_mul(y_states);
            Tally {
                w: w.clone(),
                y_states,
                dense: (size <= 1 << 22).then(|| vec![0u32; size as usize]),
                sparse: HashMap::new(),
            }
        })
        .collect();

    let coeffs = code.secure_source_coeffs();
    let mut digits = vec![0u32; dims];
    let mut computable = true;
    for step in 0..states {
        if step > 0 {
            for d in digits.iter_mut() {
                *d += 1;
                if (*d as u64) < q {
                    break;
                }
                *d = 0;
            }
        }
        let x: Vec<Vec<u32>> = digits.chunks(rate).map(<[u32]>::to_vec).collect();
        let y = code.simulate(net, &x, &coeffs);
        if computable {
            let mut want = vec![0u32; ell];
            for xi in &x {
                for (w, &v) in want.iter_mut().zip(xi) {
                    *w = f.add(*w, v);
                }
            }
            if code.decode(net, &y) != want {
                computable = false;
            }
        }
        let m_idx = x.iter().flat_map(|xi| xi[..ell].iter()).fold(0u64, |acc, &v| acc * q + v as u64);
        for t in tallies.iter_mut() {
            let y_idx = t.w.iter().fold(0u64, |acc, e| acc * q + y[e] as u64);
            match t.dense.as_mut() {
                Some(table) => table[(m_idx * t.y_states + y_idx) as usize] += 1,
                None => *t.sparse.entry((m_idx, y_idx)).or_insert(0) += 1,
            }
        }
    }

    let failing_w = tallies.iter().find(|t| !flat(t, m_states)).map(|t| t.w.clone());
    Ok(ExhaustiveOutcome { computable, failing_w })
}

/// Every observed y_W occurs equally often with every message.
fn flat(t: &Tally, m_states: u64) -> bool {
    match &t.dense {
        Some(table) => (0..t.y_states).all(|y| {
            let first = table[y as usize];
            (1..m_states).all(|m| table[(m * t.y_states + y) as usize] == first)
        }),
        None => {
            let mut per_y: HashMap<u64, (u64, u32, bool)> = HashMap::new();
            for (&(_, y), &c) in &t.sparse {
                let entry = per_y.entry(y).or_insert((0, c, true));
                entry.0 += 1;
                entry.2 &= entry.1 == c;
            }
            per_y.values().all(|&(seen, _, same)| same && seen == m_states)
        }
    }
}

pub fn check_security_exhaustive(code: &SecureNetworkCode, net: &Network, r: usize, cap: u64) -> Result<bool> {
    let family = bounds::wiretap_sets(net, r, false);
    Ok(exhaustive(code, net, &family, cap)?.failing_w.is_none())
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub exhaustive: bool,
    /// Restrict the exhaustive security pass to primary wiretap sets.
    pub fast: bool,
    pub cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive: true,
            fast: false,
            cap: DEFAULT_MAX_EXHAUSTIVE,
        }
    }
}

pub fn verify(code: &SecureNetworkCode, net: &Network, r: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut computable = check_computability(code, net)?;
    let rank_failure = security_rank_failure(code, net, r)?;
    let mut failing_w = rank_failure.clone();
    let mut secure_exhaustive = None;
    let within_cap = state_count(code).is_some_and(|n| n <= opts.cap);
    if opts.exhaustive && within_cap {
        let family = if opts.fast {
            bounds::primary_wiretap_sets(net, r, false)
        } else {
            bounds::wiretap_sets(net, r, false)
        };
        let outcome = exhaustive(code, net, &family, opts.cap)?;
        computable &= outcome.computable;
        secure_exhaustive = Some(outcome.failing_w.is_none());
        if failing_w.is_none() {
            failing_w = outcome.failing_w;
        }
    }
    let ell = code.message_dim();
    let upper = bounds::upper_bound(net, r).upper;
    Ok(VerifyReport {
        computable,
        secure_rank: rank_failure.is_none(),
        secure_exhaustive,
        failing_w,
        ell,
        n: 1,
        upper,
        bound_consistent: ell <= upper,
    })
}
