//! Message-passing Q-network: forward evaluation and hand-derived
//! backpropagation.
//!
//! Embeddings start at zero and run `T` rounds of
//!
//! ```text
//! μ_v ← relu(θ1·x_v + θ2·Σ_{u∈N(v)} μ_u + θ3·Σ_{u∈N(v)} relu(θ4·w(v,u)))
//! ```
//!
//! with `x_v ∈ {0, 1}` marking flipped nodes. The value of flipping `v` is
//!
//! ```text
//! Q(s, v) = θ5 · relu([θ6·Σ_u μ_u ; θ7·μ_v])
//! ```
//!
//! Already-flipped nodes are masked out of argmax and bootstrap maxima.
//! Training minimizes the squared n-step TD error with the target treated
//! as a constant; gradients flow through the readout and all `T` rounds.

use crate::agent::params::{AgentGrads, AgentParams};
use crate::agent::replay::ReplayTransition;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

fn matvec_add(m: &[f64], x: &[f64], y: &mut [f64], p: usize) {
    for i in 0..p {
        let row = &m[i * p..(i + 1) * p];
        let mut acc = 0.0;
        for j in 0..p {
            acc += row[j] * x[j];
        }
        y[i] += acc;
    }
}

fn matvec_t_add(m: &[f64], x: &[f64], y: &mut [f64], p: usize) {
    for i in 0..p {
        let xi = x[i];
        if xi == 0.0 {
            continue;
        }
        let row = &m[i * p..(i + 1) * p];
        for j in 0..p {
            y[j] += row[j] * xi;
        }
    }
}

fn outer_add(g: &mut [f64], a: &[f64], b: &[f64], p: usize) {
    for i in 0..p {
        let ai = a[i];
        if ai == 0.0 {
            continue;
        }
        let row = &mut g[i * p..(i + 1) * p];
        for j in 0..p {
            row[j] += ai * b[j];
        }
    }
}

/// Cached forward pass over one `(graph, flipped-set)` state.
pub(crate) struct ForwardCache<'g> {
    graph: &'g WeightedGraph,
    flipped: Vec<bool>,
    /// `Σ_{u∈N(v)} relu(θ4·w(v,u))`, n×p.
    lift: Vec<f64>,
    /// Embedding levels μ⁰..μᵀ, each n×p.
    mu: Vec<Vec<f64>>,
    /// `Σ_v μᵀ_v`.
    pooled: Vec<f64>,
    /// `θ6·pooled`.
    g6: Vec<f64>,
}

pub(crate) fn forward<'g>(
    g: &'g WeightedGraph,
    flipped: &[bool],
    params: &AgentParams,
) -> Result<ForwardCache<'g>> {
    let n = g.node_count();
    if flipped.len() != n {
        return Err(Error::InvalidInput(format!(
            "state length {} does not match node count {n}",
            flipped.len()
        )));
    }
    let p = params.width();
    let rounds = params.rounds();
    let theta1 = params.theta1();
    let theta2 = params.theta2();
    let theta3 = params.theta3();
    let theta4 = params.theta4();

    let mut lift = vec![0.0; n * p];
    for v in 0..n {
        let row = &mut lift[v * p..(v + 1) * p];
        for &(_, w) in g.neighbors(v) {
            for k in 0..p {
                let z = theta4[k] * w;
                if z > 0.0 {
                    row[k] += z;
                }
            }
        }
    }

    let mut base = vec![0.0; n * p];
    for v in 0..n {
        let row = &mut base[v * p..(v + 1) * p];
        if flipped[v] {
            for k in 0..p {
                row[k] += theta1[k];
            }
        }
        matvec_add(theta3, &lift[v * p..(v + 1) * p], row, p);
    }

    let mut mu = Vec::with_capacity(rounds + 1);
    mu.push(vec![0.0; n * p]);
    let mut neighbor_sum = vec![0.0; n * p];
    for t in 0..rounds {
        neighbor_sum.iter_mut().for_each(|x| *x = 0.0);
        for v in 0..n {
            let sum = &mut neighbor_sum[v * p..(v + 1) * p];
            for &(u, _) in g.neighbors(v) {
                let mu_u = &mu[t][u * p..(u + 1) * p];
                for k in 0..p {
                    sum[k] += mu_u[k];
                }
            }
        }
        let mut next = vec![0.0; n * p];
        for v in 0..n {
            let out = &mut next[v * p..(v + 1) * p];
            out.copy_from_slice(&base[v * p..(v + 1) * p]);
            matvec_add(theta2, &neighbor_sum[v * p..(v + 1) * p], out, p);
            for x in out.iter_mut() {
                if *x < 0.0 {
                    *x = 0.0;
                }
            }
        }
        mu.push(next);
    }

    let mut pooled = vec![0.0; p];
    let top = &mu[rounds];
    for v in 0..n {
        for k in 0..p {
            pooled[k] += top[v * p + k];
        }
    }
    let mut g6 = vec![0.0; p];
    matvec_add(params.theta6(), &pooled, &mut g6, p);

    Ok(ForwardCache {
        graph: g,
        flipped: flipped.to_vec(),
        lift,
        mu,
        pooled,
        g6,
    })
}

impl ForwardCache<'_> {
    fn top_embedding(&self, v: usize, p: usize) -> &[f64] {
        let top = self.mu.last().expect("at least μ⁰");
        &top[v * p..(v + 1) * p]
    }

    pub(crate) fn q_for(&self, params: &AgentParams, v: usize) -> f64 {
        let p = params.width();
        let theta5 = params.theta5();
        let mut g7 = vec![0.0; p];
        matvec_add(params.theta7(), self.top_embedding(v, p), &mut g7, p);
        let mut q = 0.0;
        for k in 0..p {
            if self.g6[k] > 0.0 {
                q += theta5[k] * self.g6[k];
            }
            if g7[k] > 0.0 {
                q += theta5[p + k] * g7[k];
            }
        }
        q
    }

    pub(crate) fn max_q(&self, params: &AgentParams) -> Option<f64> {
        let mut best: Option<f64> = None;
        for v in 0..self.graph.node_count() {
            if self.flipped[v] {
                continue;
            }
            let q = self.q_for(params, v);
            best = Some(match best {
                Some(b) if b >= q => b,
                _ => q,
            });
        }
        best
    }

    /// Unflipped node with the highest Q; lowest index wins ties.
    pub(crate) fn argmax_q(&self, params: &AgentParams) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for v in 0..self.graph.node_count() {
            if self.flipped[v] {
                continue;
            }
            let q = self.q_for(params, v);
            match best {
                Some((_, bq)) if q <= bq => {}
                _ => best = Some((v, q)),
            }
        }
        best.map(|(v, _)| v)
    }

    /// Accumulates `d_q · ∂Q(state, action)/∂θ` into `grads`.
    pub(crate) fn backward(
        &self,
        params: &AgentParams,
        action: usize,
        d_q: f64,
        grads: &mut AgentGrads,
    ) {
        let p = params.width();
        let n = self.graph.node_count();
        let rounds = params.rounds();
        let theta5 = params.theta5();

        // Readout.
        let mu_a = self.top_embedding(action, p).to_vec();
        let mut g7 = vec![0.0; p];
        matvec_add(params.theta7(), &mu_a, &mut g7, p);

        let (o5, o6, o7) = (grads.o5(), grads.o6(), grads.o7());
        let mut dg6 = vec![0.0; p];
        let mut dg7 = vec![0.0; p];
        for k in 0..p {
            if self.g6[k] > 0.0 {
                grads.data[o5 + k] += d_q * self.g6[k];
                dg6[k] = d_q * theta5[k];
            }
            if g7[k] > 0.0 {
                grads.data[o5 + p + k] += d_q * g7[k];
                dg7[k] = d_q * theta5[p + k];
            }
        }
        outer_add(&mut grads.data[o6..o7], &dg6, &self.pooled, p);
        outer_add(&mut grads.data[o7..], &dg7, &mu_a, p);

        // Upstream gradient on the top embeddings: every node receives the
        // pooled term, the action additionally the node-head term.
        let mut dpooled = vec![0.0; p];
        matvec_t_add(params.theta6(), &dg6, &mut dpooled, p);
        let mut dmu = vec![0.0; n * p];
        for v in 0..n {
            dmu[v * p..(v + 1) * p].copy_from_slice(&dpooled);
        }
        matvec_t_add(
            params.theta7(),
            &dg7,
            &mut dmu[action * p..(action + 1) * p],
            p,
        );

        // Through the message-passing rounds. θ1/θ3/θ4 feed every round
        // through the same per-node preactivation term, so their
        // contributions are collected once from the summed dz.
        let theta2 = params.theta2();
        let (o2, o3) = (grads.o2(), grads.o3());
        let mut dz_sum = vec![0.0; n * p];
        let mut dz = vec![0.0; n * p];
        let mut neighbor_sum = vec![0.0; n * p];
        let mut ds = vec![0.0; n * p];
        for t in (1..=rounds).rev() {
            let mu_t = &self.mu[t];
            for i in 0..n * p {
                dz[i] = if mu_t[i] > 0.0 { dmu[i] } else { 0.0 };
                dz_sum[i] += dz[i];
            }

            // θ2 ← Σ_v dz_v · (Σ_{u∈N(v)} μ_u^{t−1})ᵀ
            let mu_prev = &self.mu[t - 1];
            neighbor_sum.iter_mut().for_each(|x| *x = 0.0);
            for v in 0..n {
                let sum = &mut neighbor_sum[v * p..(v + 1) * p];
                for &(u, _) in self.graph.neighbors(v) {
                    let mu_u = &mu_prev[u * p..(u + 1) * p];
                    for k in 0..p {
                        sum[k] += mu_u[k];
                    }
                }
            }
            for v in 0..n {
                outer_add(
                    &mut grads.data[o2..o3],
                    &dz[v * p..(v + 1) * p],
                    &neighbor_sum[v * p..(v + 1) * p],
                    p,
                );
            }

            // Propagate to μ^{t−1}: dμ_u = Σ_{v∈N(u)} θ2ᵀ dz_v.
            ds.iter_mut().for_each(|x| *x = 0.0);
            for v in 0..n {
                matvec_t_add(theta2, &dz[v * p..(v + 1) * p], &mut ds[v * p..(v + 1) * p], p);
            }
            dmu.iter_mut().for_each(|x| *x = 0.0);
            for u in 0..n {
                let out = &mut dmu[u * p..(u + 1) * p];
                for &(v, _) in self.graph.neighbors(u) {
                    let ds_v = &ds[v * p..(v + 1) * p];
                    for k in 0..p {
                        out[k] += ds_v[k];
                    }
                }
            }
        }

        // θ1: x_v is 1 exactly on flipped nodes.
        let o1 = grads.o1();
        for v in 0..n {
            if self.flipped[v] {
                for k in 0..p {
                    grads.data[o1 + k] += dz_sum[v * p + k];
                }
            }
        }
        // θ3 and, through it, θ4.
        let theta3 = params.theta3();
        let theta4 = params.theta4();
        let o4 = grads.o4();
        let mut de = vec![0.0; p];
        for v in 0..n {
            let dz_v = &dz_sum[v * p..(v + 1) * p];
            outer_add(
                &mut grads.data[o3..o4],
                dz_v,
                &self.lift[v * p..(v + 1) * p],
                p,
            );
            de.iter_mut().for_each(|x| *x = 0.0);
            matvec_t_add(theta3, dz_v, &mut de, p);
            for &(_, w) in self.graph.neighbors(v) {
                for k in 0..p {
                    if theta4[k] * w > 0.0 {
                        grads.data[o4 + k] += de[k] * w;
                    }
                }
            }
        }
    }
}

/// Per-node embeddings after `T` rounds.
pub fn embed(
    g: &WeightedGraph,
    flipped: &[bool],
    params: &AgentParams,
) -> Result<Vec<Vec<f64>>> {
    let cache = forward(g, flipped, params)?;
    let p = params.width();
    Ok((0..g.node_count())
        .map(|v| cache.top_embedding(v, p).to_vec())
        .collect())
}

/// Q per node; `None` marks flipped (unavailable) nodes.
pub fn q_values(
    g: &WeightedGraph,
    flipped: &[bool],
    params: &AgentParams,
) -> Result<Vec<Option<f64>>> {
    let cache = forward(g, flipped, params)?;
    Ok((0..g.node_count())
        .map(|v| {
            if flipped[v] {
                None
            } else {
                Some(cache.q_for(params, v))
            }
        })
        .collect())
}

/// n-step TD targets `y = R + γ^pow · max_a Q(s', a)`, with the bootstrap
/// term dropped for terminal successors.
pub fn td_targets(
    params: &AgentParams,
    batch: &[&ReplayTransition],
    gamma: f64,
) -> Result<Vec<f64>> {
    batch
        .iter()
        .map(|tr| {
            let bootstrap = match &tr.next_flipped {
                None => 0.0,
                Some(next) => {
                    let cache = forward(&tr.graph, next, params)?;
                    match cache.max_q(params) {
                        Some(q) => gamma.powi(tr.discount_power as i32) * q,
                        None => 0.0,
                    }
                }
            };
            Ok(tr.n_step_return + bootstrap)
        })
        .collect()
}

/// Mean squared TD error against fixed targets, with its gradient.
pub fn loss_and_grad_with_targets(
    params: &AgentParams,
    batch: &[&ReplayTransition],
    targets: &[f64],
) -> Result<(f64, AgentGrads)> {
    if batch.is_empty() {
        return Err(Error::InvalidInput("empty training batch".into()));
    }
    if batch.len() != targets.len() {
        return Err(Error::InvalidInput(
            "batch and target lengths differ".into(),
        ));
    }
    let b = batch.len() as f64;
    let mut grads = AgentGrads::zeros(params.width());
    let mut loss = 0.0;
    for (tr, &y) in batch.iter().zip(targets) {
        let cache = forward(&tr.graph, &tr.state_flipped, params)?;
        let q = cache.q_for(params, tr.action);
        let resid = q - y;
        loss += resid * resid / b;
        cache.backward(params, tr.action, 2.0 * resid / b, &mut grads);
    }
    Ok((loss, grads))
}

/// Squared n-step TD loss and gradient; the target is a constant (no
/// gradient flows through the bootstrap term).
pub fn loss_and_grad(
    params: &AgentParams,
    batch: &[&ReplayTransition],
    gamma: f64,
) -> Result<(f64, AgentGrads)> {
    if batch.is_empty() {
        return Err(Error::InvalidInput("empty training batch".into()));
    }
    let targets = td_targets(params, batch, gamma)?;
    loss_and_grad_with_targets(params, batch, &targets)
}
