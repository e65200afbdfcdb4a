//! Linear network codes for the sum: plain (R,1) codes, their key-mixed
//! secure versions, and the JSON code file.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, Matrix};
use crate::network::{EdgeSet, Network};

/// An (R,1) linear code computing the sum of the source vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumNetworkCode {
    pub field: Field,
    pub rate: usize,
    /// `source_coeffs[i][e]` is A_{i,e} for e ∈ Out(σᵢ), `None` elsewhere.
    pub source_coeffs: Vec<Vec<Option<Vec<u32>>>>,
    /// `local.get(d, e)` is a_{d,e}; zero unless head(d) = tail(e).
    pub local: Matrix,
    /// Per edge, the concatenation of the blocks g_e^{(σᵢ)} (length R·s).
    pub global: Vec<Vec<u32>>,
    /// |In(ρ)| × R, rows in ≺ order of In(ρ).
    pub decoder: Matrix,
}

/// A sum code whose source inputs are premixed by B⁻¹; the first R − r
/// coordinates of each source input are message, the rest key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecureNetworkCode {
    pub base: SumNetworkCode,
    pub r: usize,
    pub b: Matrix,
    pub b_inv: Matrix,
    /// h_e, same layout as [`SumNetworkCode::global`].
    pub h: Vec<Vec<u32>>,
}

impl SumNetworkCode {
    pub fn sources(&self) -> usize {
        self.source_coeffs.len()
    }

    /// g_e^{(σᵢ)}.
    pub fn block(&self, e: usize, i: usize) -> &[u32] {
        &self.global[e][i * self.rate..(i + 1) * self.rate]
    }

    /// Global vectors by the edge recursion in ≺ order.
    pub fn compute_global(&self, net: &Network) -> Vec<Vec<u32>> {
        propagate_vectors(net, &self.field, self.rate, &self.source_coeffs, &self.local)
    }

    /// G_ρ = [g_e : e ∈ In(ρ)] as an Rs × |In(ρ)| matrix.
    pub fn sink_matrix(&self, net: &Network) -> Matrix {
        columns(&self.field, &self.global, net.in_edges(net.sink()), self.rate * self.sources())
    }
}

impl SecureNetworkCode {
    pub fn field(&self) -> &Field {
        &self.base.field
    }

    pub fn rate(&self) -> usize {
        self.base.rate
    }

    pub fn sources(&self) -> usize {
        self.base.sources()
    }

    /// Message symbols per source, R − r.
    pub fn message_dim(&self) -> usize {
        self.base.rate - self.r
    }

    /// B⁻¹·A_{i,e} for every source out-edge.
    pub fn secure_source_coeffs(&self) -> Vec<Vec<Option<Vec<u32>>>> {
        self.base
            .source_coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        v.as_ref().map(|a| {
                            self.b_inv
                                .mul(&Matrix::from_cols(self.field(), std::slice::from_ref(a), a.len()).unwrap())
                                .unwrap()
                                .col(0)
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// h_e recomputed by simulating the secure source rule.
    pub fn compute_h(&self, net: &Network) -> Vec<Vec<u32>> {
        propagate_vectors(net, self.field(), self.rate(), &self.secure_source_coeffs(), &self.base.local)
    }

    /// h_e^{(σᵢ)}.
    pub fn h_block(&self, e: usize, i: usize) -> &[u32] {
        let r = self.rate();
        &self.h[e][i * r..(i + 1) * r]
    }

    /// H_ρ = [h_e : e ∈ In(ρ)].
    pub fn sink_matrix(&self, net: &Network) -> Matrix {
        columns(self.field(), &self.h, net.in_edges(net.sink()), self.rate() * self.sources())
    }

    /// H_W = [h_e : e ∈ W].
    pub fn wiretap_matrix(&self, w: &EdgeSet) -> Matrix {
        columns(self.field(), &self.h, w.as_slice(), self.rate() * self.sources())
    }

    /// The full decoder D·B restricted to its first R − r columns.
    pub fn message_decoder(&self) -> Matrix {
        let db = self.base.decoder.mul(&self.b).expect("decoder shapes agree");
        let cols: Vec<usize> = (0..self.message_dim()).collect();
        db.select_cols(&cols)
    }

    /// Symbols on every edge when source i inputs `x[i]` (length R, message
    /// coordinates first), simulated edge by edge in ≺ order.
    pub fn simulate(&self, net: &Network, x: &[Vec<u32>], secure_coeffs: &[Vec<Option<Vec<u32>>>]) -> Vec<u32> {
        let f = self.field();
        let mut y = vec![0u32; net.edge_count()];
        let source_pos: Vec<Option<usize>> = (0..net.node_count())
            .map(|v| net.sources().iter().position(|&s| s == v))
            .collect();
        for &e in net.order() {
            let tail = net.edge(e).tail;
            y[e] = match source_pos[tail] {
                Some(i) => {
                    let a = secure_coeffs[i][e].as_ref().expect("source out-edge has coefficients");
                    dot(f, &x[i], a)
                }
                None => net
                    .in_edges(tail)
                    .iter()
                    .fold(0, |acc, &d| f.add(acc, f.mul(self.base.local.get(d, e), y[d]))),
            };
        }
        y
    }

    /// Decoder output (first R − r coordinates) from the sink's in-edge symbols.
    pub fn decode(&self, net: &Network, y: &[u32]) -> Vec<u32> {
        let incoming: Vec<u32> = net.in_edges(net.sink()).iter().map(|&e| y[e]).collect();
        self.message_decoder().vec_mul(&incoming).expect("decoder rows match In(rho)")
    }
}

fn dot(f: &Field, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

fn columns(field: &Field, vectors: &[Vec<u32>], edges: &[usize], dim: usize) -> Matrix {
    let cols: Vec<Vec<u32>> = edges.iter().map(|&e| vectors[e].clone()).collect();
    Matrix::from_cols(field, &cols, dim).expect("vectors share a length")
}

/// Runs the local rules on vector-valued symbols: each source out-edge
/// starts from its coefficient vector placed in the source's block.
fn propagate_vectors(
    net: &Network,
    field: &Field,
    rate: usize,
    source_coeffs: &[Vec<Option<Vec<u32>>>],
    local: &Matrix,
) -> Vec<Vec<u32>> {
    let s = net.source_count();
    let mut g = vec![vec![0u32; rate * s]; net.edge_count()];
    for &e in net.order() {
        let tail = net.edge(e).tail;
        if let Some(i) = net.sources().iter().position(|&v| v == tail) {
            let a = source_coeffs[i][e].as_ref().expect("source out-edge has coefficients");
            g[e][i * rate..(i + 1) * rate].copy_from_slice(a);
        } else {
            let mut acc = vec![0u32; rate * s];
            for &d in net.in_edges(tail) {
                let c = local.get(d, e);
                if c == 0 {
                    continue;
                }
                for (o, &v) in acc.iter_mut().zip(&g[d]) {
                    *o = field.add(*o, field.mul(c, v));
                }
            }
            g[e] = acc;
        }
    }
    g
}

/// Serialized form of a [`SecureNetworkCode`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub field: String,
    pub modulus: Vec<u32>,
    pub rate: usize,
    pub r: usize,
    pub sources: Vec<String>,
    pub source_matrices: BTreeMap<String, BTreeMap<String, Vec<u32>>>,
    #[serde(default)]
    pub local_coeffs: BTreeMap<String, BTreeMap<String, u32>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global_vectors: Option<BTreeMap<String, Vec<u32>>>,
    #[serde(rename = "decoder_D")]
    pub decoder_d: Vec<Vec<u32>>,
}

fn shape(msg: impl Into<String>) -> Error {
    Error::ShapeMismatch(msg.into())
}

impl CodeFile {
    pub fn from_json(text: &str) -> Result<CodeFile> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code file serializes")
    }

    pub fn from_code(code: &SecureNetworkCode, net: &Network) -> CodeFile {
        let base = &code.base;
        let mut source_matrices = BTreeMap::new();
        for (i, &s) in net.sources().iter().enumerate() {
            let per: BTreeMap<String, Vec<u32>> = net
                .out_edges(s)
                .iter()
                .map(|&e| (net.edge_name(e).to_string(), base.source_coeffs[i][e].clone().unwrap_or_default()))
                .collect();
            source_matrices.insert(net.node_name(s).to_string(), per);
        }
        let mut local_coeffs = BTreeMap::new();
        for &e in net.order() {
            let tail = net.edge(e).tail;
            if net.sources().contains(&tail) {
                continue;
            }
            let per: BTreeMap<String, u32> = net
                .in_edges(tail)
                .iter()
                .map(|&d| (net.edge_name(d).to_string(), base.local.get(d, e)))
                .collect();
            local_coeffs.insert(net.edge_name(e).to_string(), per);
        }
        let global_vectors = (0..net.edge_count())
            .map(|e| (net.edge_name(e).to_string(), code.h[e].clone()))
            .collect();
        CodeFile {
            field: base.field.to_string(),
            modulus: base.field.modulus().to_vec(),
            rate: base.rate,
            r: code.r,
            sources: net.source_names(),
            source_matrices,
            local_coeffs,
            b: code.b.to_rows(),
            global_vectors: Some(global_vectors),
            decoder_d: base.decoder.to_rows(),
        }
    }

    /// Validates against `net`, recomputes every global vector and checks
    /// any stored ones.
    pub fn to_code(&self, net: &Network) -> Result<SecureNetworkCode> {
        let field = Field::parse(&self.field)?;
        if field.modulus() != self.modulus.as_slice() {
            return Err(shape(format!(
                "modulus {:?} differs from the canonical {:?} for GF({})",
                self.modulus,
                field.modulus(),
                self.field
            )));
        }
        let rate = self.rate;
        if rate == 0 {
            return Err(shape("rate must be positive"));
        }
        if self.r > rate {
            return Err(shape(format!("r = {} exceeds rate {rate}", self.r)));
        }
        if self.sources != net.source_names() {
            return Err(shape(format!(
                "sources {:?} differ from the network's {:?}",
                self.sources,
                net.source_names()
            )));
        }
        let check_elem = |v: u32| {
            if field.contains(v) {
                Ok(v)
            } else {
                Err(Error::MalformedInput(format!("element {v} out of range for GF({})", field.order())))
            }
        };

        let m = net.edge_count();
        let mut source_coeffs = vec![vec![None; m]; net.source_count()];
        for (name, per) in &self.source_matrices {
            let v = net.node(name).map_err(|_| shape(format!("unknown source {name:?}")))?;
            let i = net
                .sources()
                .iter()
                .position(|&s| s == v)
                .ok_or_else(|| shape(format!("{name:?} is not a source")))?;
            for (eid, vec) in per {
                let e = net.edge_by_id(eid)?;
                if net.edge(e).tail != v {
                    return Err(shape(format!("edge {eid:?} does not leave source {name:?}")));
                }
                if vec.len() != rate {
                    return Err(shape(format!("vector for {eid:?} has length {}, expected {rate}", vec.len())));
                }
                for &x in vec {
                    check_elem(x)?;
                }
                source_coeffs[i][e] = Some(vec.clone());
            }
        }
        for (i, &s) in net.sources().iter().enumerate() {
            if let Some(&e) = net.out_edges(s).iter().find(|&&e| source_coeffs[i][e].is_none()) {
                return Err(shape(format!("missing coefficients for source edge {:?}", net.edge_name(e))));
            }
        }

        let mut local = Matrix::zeros(&field, m, m);
        for (eid, per) in &self.local_coeffs {
            let e = net.edge_by_id(eid)?;
            let tail = net.edge(e).tail;
            if net.sources().contains(&tail) {
                return Err(shape(format!("edge {eid:?} leaves a source; use source_matrices")));
            }
            for (did, &c) in per {
                let d = net.edge_by_id(did)?;
                if net.edge(d).head != tail {
                    return Err(shape(format!("edge {did:?} does not enter the tail of {eid:?}")));
                }
                local.set(d, e, check_elem(c)?);
            }
        }

        let b = Matrix::from_rows(&field, &self.b)?;
        if b.shape() != (rate, rate) {
            return Err(shape(format!("B is {:?}, expected {rate}x{rate}", b.shape())));
        }
        let n_in = net.in_edges(net.sink()).len();
        let decoder = Matrix::from_rows_with_cols(&field, &self.decoder_d, rate)
            .map_err(|_| shape(format!("decoder_D rows must have {rate} entries")))?;
        if decoder.rows() != n_in {
            return Err(shape(format!("decoder_D has {} rows, sink has {n_in} in-edges", decoder.rows())));
        }

        let mut base = SumNetworkCode {
            field,
            rate,
            source_coeffs,
            local,
            global: Vec::new(),
            decoder,
        };
        base.global = base.compute_global(net);
        let code = secure_from_parts(base, b, self.r, net)?;
        if let Some(stored) = &self.global_vectors {
            for (eid, v) in stored {
                let e = net.edge_by_id(eid)?;
                if *v != code.h[e] {
                    return Err(Error::GlobalVectorMismatch(eid.clone()));
                }
            }
        }
        Ok(code)
    }
}

/// Attaches B to a sum code and derives h_e = B⁻¹·g_e blockwise.
pub(crate) fn secure_from_parts(base: SumNetworkCode, b: Matrix, r: usize, net: &Network) -> Result<SecureNetworkCode> {
    let b_inv = b.inverse().map_err(|_| Error::SingularB)?;
    let rate = base.rate;
    let s = base.sources();
    let mut h = vec![vec![0u32; rate * s]; net.edge_count()];
    for (e, he) in h.iter_mut().enumerate() {
        for i in 0..s {
            let g = base.block(e, i).to_vec();
            let col = b_inv.mul(&Matrix::from_cols(&base.field, &[g], rate)?)?.col(0);
            he[i * rate..(i + 1) * rate].copy_from_slice(&col);
        }
    }
    Ok(SecureNetworkCode { base, r, b, b_inv, h })
}
