//! Directed trees of FN neurons with heterogeneous inputs and couplings.
//!
//! Every node has at most one parent, the edge set is acyclic, and the
//! underlying graph is connected: a rooted tree (chains are the special
//! case of out-degree one). Nodes are stored in a canonical root-first
//! order (breadth first, siblings sorted by id), so node index order is
//! always a valid processing order.
//!
//! The equilibrium recursion feeds each node the constant drive
//! `gamma * y_parent + I - a` and reuses the shared cubic kernel, and the
//! 2k x 2k Jacobian is block lower triangular, so per-node 2x2 blocks carry
//! the whole spectrum.

use crate::cubic::monotone_root;
use crate::model::{block_eigenvalues, ModelError, ModelParams, NeuronState};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("network JSON: {0}")]
    Parse(String),
    #[error("network has no nodes")]
    Empty,
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),
    #[error("edge references unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` has more than one parent")]
    MultipleParents(String),
    #[error("cycle detected in the edge set")]
    CycleDetected,
    #[error("network is not connected")]
    Disconnected,
    #[error("coupling on edge `{from}` -> `{to}` is negative")]
    NegativeCoupling { from: String, to: String },
    #[error("negative external input on node `{0}`")]
    NegativeInput(String),
    #[error("node `{0}` not found")]
    NoSuchNode(String),
    #[error("node `{0}` has no parent; its Hopf inputs are the single-neuron ones")]
    NoParent(String),
    #[error("no Hopf pair for node `{id}`: gamma = {gamma} >= 1 - b*eps = {threshold}")]
    NoHopf {
        id: String,
        gamma: f64,
        threshold: f64,
    },
}

/// One neuron of the network: label and external input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    #[serde(rename = "I", default)]
    pub input: f64,
}

/// A directed coupling `from -> to` with strength `gamma >= 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub gamma: f64,
}

#[derive(Deserialize)]
struct NetworkFile {
    params: ModelParams,
    nodes: Vec<NodeSpec>,
    edges: Vec<EdgeSpec>,
    #[serde(default)]
    initial: HashMap<String, NeuronState>,
}

/// A validated directed tree. Nodes are held in canonical root-first order.
#[derive(Clone, Debug)]
pub struct TreeNetwork {
    params: ModelParams,
    nodes: Vec<NodeSpec>,
    /// `parent[k] = (parent index, coupling)` with parent index `< k`.
    parent: Vec<Option<(usize, f64)>>,
    initial: HashMap<String, NeuronState>,
    digest: String,
}

/// Per-node equilibrium of the whole network, node-index order.
#[derive(Clone, Debug)]
pub struct ChainEquilibrium {
    pub states: Vec<NeuronState>,
}

impl TreeNetwork {
    pub fn new(
        params: ModelParams,
        nodes: Vec<NodeSpec>,
        edges: Vec<EdgeSpec>,
        initial: HashMap<String, NeuronState>,
    ) -> Result<Self, TreeError> {
        if nodes.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (k, n) in nodes.iter().enumerate() {
            if index.insert(n.id.as_str(), k).is_some() {
                return Err(TreeError::DuplicateId(n.id.clone()));
            }
            if n.input < 0.0 || !n.input.is_finite() {
                return Err(TreeError::NegativeInput(n.id.clone()));
            }
        }
        for id in initial.keys() {
            if !index.contains_key(id.as_str()) {
                return Err(TreeError::UnknownNode(id.clone()));
            }
        }

        let mut parent_of: Vec<Option<(usize, f64)>> = vec![None; nodes.len()];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for e in &edges {
            let &from = index
                .get(e.from.as_str())
                .ok_or_else(|| TreeError::UnknownNode(e.from.clone()))?;
            let &to = index
                .get(e.to.as_str())
                .ok_or_else(|| TreeError::UnknownNode(e.to.clone()))?;
            if !(e.gamma >= 0.0 && e.gamma.is_finite()) {
                return Err(TreeError::NegativeCoupling {
                    from: e.from.clone(),
                    to: e.to.clone(),
                });
            }
            if parent_of[to].is_some() || from == to {
                if from == to {
                    return Err(TreeError::CycleDetected);
                }
                return Err(TreeError::MultipleParents(nodes[to].id.clone()));
            }
            parent_of[to] = Some((from, e.gamma));
            children[from].push(to);
        }

        let roots: Vec<usize> = (0..nodes.len())
            .filter(|&k| parent_of[k].is_none())
            .collect();
        if roots.is_empty() {
            return Err(TreeError::CycleDetected);
        }
        if roots.len() > 1 {
            // several roots: either a forest (disconnected) or nothing wrong
            // with in-degrees but still unreachable parts
            return Err(TreeError::Disconnected);
        }

        // canonical BFS order, siblings by id
        let root = roots[0];
        let mut order = Vec::with_capacity(nodes.len());
        let mut queue = std::collections::VecDeque::from([root]);
        let mut seen = vec![false; nodes.len()];
        seen[root] = true;
        while let Some(k) = queue.pop_front() {
            order.push(k);
            let mut kids = children[k].clone();
            kids.sort_by(|&x, &y| nodes[x].id.cmp(&nodes[y].id));
            for c in kids {
                if seen[c] {
                    return Err(TreeError::CycleDetected);
                }
                seen[c] = true;
                queue.push_back(c);
            }
        }
        if order.len() != nodes.len() {
            // unreachable nodes with parents form a separate cycle or island
            let unreachable_has_parent = (0..nodes.len())
                .filter(|k| !seen[*k])
                .all(|k| parent_of[k].is_some());
            return Err(if unreachable_has_parent {
                TreeError::CycleDetected
            } else {
                TreeError::Disconnected
            });
        }

        let mut new_pos = vec![0usize; nodes.len()];
        for (pos, &old) in order.iter().enumerate() {
            new_pos[old] = pos;
        }
        let reordered: Vec<NodeSpec> = order.iter().map(|&k| nodes[k].clone()).collect();
        let parent: Vec<Option<(usize, f64)>> = order
            .iter()
            .map(|&k| parent_of[k].map(|(p, g)| (new_pos[p], g)))
            .collect();

        let digest = {
            let mut text = String::new();
            use std::fmt::Write;
            write!(
                text,
                "params:{:?},{:?},{:?};",
                params.a(),
                params.b(),
                params.epsilon()
            )
            .unwrap();
            for (k, n) in reordered.iter().enumerate() {
                write!(text, "node:{}={:?};", n.id, n.input).unwrap();
                if let Some((p, g)) = parent[k] {
                    write!(text, "edge:{}->{}={:?};", reordered[p].id, n.id, g).unwrap();
                }
                if let Some(s) = initial.get(&n.id) {
                    write!(text, "init:{}={:?},{:?};", n.id, s.y, s.z).unwrap();
                }
            }
            format!("{:016x}", fnv1a64(text.as_bytes()))
        };

        Ok(TreeNetwork {
            params,
            nodes: reordered,
            parent,
            initial,
            digest,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        let f: NetworkFile =
            serde_json::from_str(text).map_err(|e| TreeError::Parse(e.to_string()))?;
        TreeNetwork::new(f.params, f.nodes, f.edges, f.initial)
    }

    /// Two coupled neurons, the configuration studied throughout: `A`
    /// receives `i`, drives `B` with strength `gamma`.
    pub fn two_neuron(params: ModelParams, i: f64, gamma: f64) -> Result<Self, TreeError> {
        TreeNetwork::new(
            params,
            vec![
                NodeSpec {
                    id: "A".into(),
                    input: i,
                },
                NodeSpec {
                    id: "B".into(),
                    input: 0.0,
                },
            ],
            vec![EdgeSpec {
                from: "A".into(),
                to: "B".into(),
                gamma,
            }],
            HashMap::new(),
        )
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, k: usize) -> &NodeSpec {
        &self.nodes[k]
    }

    /// Node ids in canonical (root-first) order.
    pub fn ids(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.id.clone()).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn parent(&self, k: usize) -> Option<(usize, f64)> {
        self.parent[k]
    }

    pub fn initial_override(&self, id: &str) -> Option<NeuronState> {
        self.initial.get(id).copied()
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    /// Copy with the root input replaced.
    pub fn with_root_input(&self, i: f64) -> Result<Self, TreeError> {
        let mut nodes = self.nodes.clone();
        nodes[0].input = i;
        TreeNetwork::new(self.params, nodes, self.edges(), self.initial.clone())
    }

    /// Copy with every coupling replaced.
    pub fn with_uniform_coupling(&self, gamma: f64) -> Result<Self, TreeError> {
        let mut edges = self.edges();
        for e in &mut edges {
            e.gamma = gamma;
        }
        TreeNetwork::new(self.params, self.nodes.clone(), edges, self.initial.clone())
    }

    fn edges(&self) -> Vec<EdgeSpec> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(k, p)| {
                p.map(|(pk, g)| EdgeSpec {
                    from: self.nodes[pk].id.clone(),
                    to: self.nodes[k].id.clone(),
                    gamma: g,
                })
            })
            .collect()
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Equilibrium of the whole network, root first. The root solves the
/// single-neuron cubic; each child solves
/// `y^3/3 + (b_tilde + gamma) y - (gamma y_parent + I - a) = 0`.
pub fn tree_equilibrium(net: &TreeNetwork) -> Result<ChainEquilibrium, TreeError> {
    let params = net.params();
    let bt = params.b_tilde();
    let mut states: Vec<NeuronState> = Vec::with_capacity(net.len());
    for k in 0..net.len() {
        let y = match net.parent(k) {
            None => monotone_root(bt, params.a() - net.node(k).input),
            Some((p, gamma)) => {
                let drive = gamma * states[p].y + net.node(k).input;
                monotone_root(bt + gamma, params.a() - drive)
            }
        };
        states.push(NeuronState {
            y,
            z: y / params.b(),
        });
    }
    Ok(ChainEquilibrium { states })
}

/// Per-node eigenvalue pairs of the block-triangular Jacobian.
pub fn tree_eigenvalues(net: &TreeNetwork, eq: &ChainEquilibrium) -> Vec<(Complex64, Complex64)> {
    let (b, eps) = (net.params().b(), net.params().epsilon());
    (0..net.len())
        .map(|k| {
            let y2 = eq.states[k].y * eq.states[k].y;
            let gamma = net.parent(k).map_or(0.0, |(_, g)| g);
            // grouped exactly like the pair computation so the k = 2
            // reduction is bit-identical
            let trace = 1.0 - b * eps - gamma - y2;
            let det = eps * (1.0 - b + b * y2 + b * gamma);
            block_eigenvalues(trace, det)
        })
        .collect()
}

/// Dense row-major `2k x 2k` Jacobian of the network at an equilibrium.
pub fn tree_jacobian(net: &TreeNetwork, eq: &ChainEquilibrium) -> (usize, Vec<f64>) {
    let (b, eps) = (net.params().b(), net.params().epsilon());
    let dim = 2 * net.len();
    let mut j = vec![0.0; dim * dim];
    let mut set = |r: usize, c: usize, v: f64| j[r * dim + c] = v;
    for k in 0..net.len() {
        let y = eq.states[k].y;
        let gamma = net.parent(k).map_or(0.0, |(_, g)| g);
        set(2 * k, 2 * k, 1.0 - y * y - gamma);
        set(2 * k, 2 * k + 1, -1.0);
        set(2 * k + 1, 2 * k, eps);
        set(2 * k + 1, 2 * k + 1, -b * eps);
        if let Some((p, g)) = net.parent(k) {
            set(2 * k, 2 * p, g);
        }
    }
    (dim, j)
}

/// Inputs at which the given (non-root) node crosses its Hopf pair, with
/// the upstream equilibrium held fixed: the node's block trace vanishes at
/// `y^2 = 1 - gamma - b eps`, which maps back through the equilibrium
/// recursion to
/// `I = +-((1-gamma-b eps)^{3/2}/3 + (b_tilde+gamma) sqrt(1-gamma-b eps)) - gamma y_parent + a`.
pub fn node_hopf_inputs(net: &TreeNetwork, id: &str) -> Result<(f64, f64), TreeError> {
    let k = net
        .index_of(id)
        .ok_or_else(|| TreeError::NoSuchNode(id.to_string()))?;
    let Some((p, gamma)) = net.parent(k) else {
        return Err(TreeError::NoParent(id.to_string()));
    };
    let params = net.params();
    let threshold = 1.0 - params.b() * params.epsilon();
    if gamma >= threshold {
        return Err(TreeError::NoHopf {
            id: id.to_string(),
            gamma,
            threshold,
        });
    }
    let eq = tree_equilibrium(net)?;
    let ys = (threshold - gamma).sqrt();
    let target = ys * ys * ys / 3.0 + (params.b_tilde() + gamma) * ys;
    let base = gamma * eq.states[p].y - params.a();
    Ok((-target - base, target - base))
}
