//! Channel, state and rotation specifications: the JSON document model and
//! the compact command-line forms (named channels, composition chains, state
//! labels).
//!
//! Complex numbers are strictly two-element arrays [re, im]; matrices are row
//! lists.

use opq_core::channels::{
    self, gates, unitary_channel, Einselection,
};
use opq_core::scalar::cx;
use opq_core::states::classical_state;
use opq_core::{Channel64, Density64, Error, Matrix64, Pure64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

pub fn matrix_from_spec(spec: &MatrixSpec) -> Result<Matrix64, Error> {
    let rows = spec.len();
    if rows == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let cols = spec[0].len();
    if cols == 0 || spec.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidParameter("ragged matrix rows".into()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in spec {
        for &[re, im] in row {
            data.push(cx(re, im));
        }
    }
    Matrix64::from_entries(rows, cols, data)
}

pub fn matrix_to_spec(m: &Matrix64) -> MatrixSpec {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let v = m.get(i, j);
                    [v.re, v.im]
                })
                .collect()
        })
        .collect()
}

/// A channel specification document: named, explicit Kraus, composition chain
/// or tensor combination.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ChannelSpec {
    Explicit {
        dims: Vec<usize>,
        kraus: Vec<MatrixSpec>,
    },
    Named {
        name: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        dims: Option<Vec<usize>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        mu: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        gamma: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        probs: Option<Vec<f64>>,
        /// Column-stochastic matrix for the classical channel.
        #[serde(skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
    },
    Chain { chain: Vec<ChannelSpec> },
    Tensor { tensor: Vec<ChannelSpec> },
}

impl ChannelSpec {
    /// Dimensions this spec pins down on its own, if any.
    fn fixed_dims(&self) -> Option<Vec<usize>> {
        match self {
            ChannelSpec::Explicit { dims, .. } => Some(dims.clone()),
            ChannelSpec::Named { name, dims, .. } => {
                dims.clone().or_else(|| named_fixed_dims(name))
            }
            ChannelSpec::Chain { chain } => chain.iter().find_map(|c| c.fixed_dims()),
            ChannelSpec::Tensor { tensor } => {
                let parts: Option<Vec<Vec<usize>>> =
                    tensor.iter().map(|c| c.fixed_dims()).collect();
                parts.map(|p| p.concat())
            }
        }
    }

    pub fn resolve(&self, dims_hint: Option<&[usize]>) -> Result<Channel64, Error> {
        let dims = self
            .fixed_dims()
            .or_else(|| dims_hint.map(|d| d.to_vec()))
            .unwrap_or_else(|| vec![2]);
        self.resolve_with(&dims)
    }

    fn resolve_with(&self, dims: &[usize]) -> Result<Channel64, Error> {
        match self {
            ChannelSpec::Explicit { dims, kraus } => {
                let ops: Result<Vec<Matrix64>, Error> =
                    kraus.iter().map(matrix_from_spec).collect();
                Channel64::new(ops?, dims.clone())
            }
            ChannelSpec::Named {
                name,
                dims: own_dims,
                mu,
                gamma,
                p,
                probs,
                matrix,
            } => {
                let dims = own_dims.as_deref().unwrap_or(dims);
                let scalar = mu.or(*gamma).or(*p);
                resolve_named(name, scalar, probs.as_deref(), matrix.as_deref(), dims)
            }
            ChannelSpec::Chain { chain } => {
                if chain.is_empty() {
                    return Err(Error::InvalidParameter("empty chain".into()));
                }
                let mut acc: Option<Channel64> = None;
                for item in chain {
                    let ch = item.resolve_with(dims)?.with_dims(dims.to_vec())?;
                    acc = Some(match acc {
                        None => ch,
                        Some(outer) => outer.compose(&ch)?,
                    });
                }
                Ok(acc.expect("non-empty chain"))
            }
            ChannelSpec::Tensor { tensor } => {
                if tensor.is_empty() {
                    return Err(Error::InvalidParameter("empty tensor combination".into()));
                }
                let mut acc: Option<Channel64> = None;
                for item in tensor {
                    let part_dims = item
                        .fixed_dims()
                        .ok_or_else(|| {
                            Error::InvalidParameter(
                                "tensor parts must pin their own dimensions".into(),
                            )
                        })?;
                    let ch = item.resolve_with(&part_dims)?;
                    acc = Some(match acc {
                        None => ch,
                        Some(left) => left.tensor(&ch),
                    });
                }
                Ok(acc.expect("non-empty tensor"))
            }
        }
    }

    /// Explicit-Kraus export of a resolved channel; reloading gives a channel
    /// with identical action.
    pub fn explicit_from(ch: &Channel64) -> ChannelSpec {
        ChannelSpec::Explicit {
            dims: ch.dims().to_vec(),
            kraus: ch.kraus().iter().map(matrix_to_spec).collect(),
        }
    }
}

/// Dimensions a named channel fixes by itself.
fn named_fixed_dims(name: &str) -> Option<Vec<usize>> {
    match normalize(name).as_str() {
        "hadamard" | "h" | "x" | "pauli_x" | "y" | "pauli_y" | "z" | "pauli_z" | "s" | "t"
        | "amplitude_damping" | "bit_flip" | "phase_flip" | "phase_damping" | "pauli" => {
            Some(vec![2])
        }
        "cnot" | "rotated_cnot" | "discord_map" => Some(vec![2, 2]),
        _ => None,
    }
}

fn normalize(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace('-', "_")
}

fn need_scalar(name: &str, scalar: Option<f64>) -> Result<f64, Error> {
    scalar.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "channel '{name}' needs a parameter (--mu/--gamma/--p or an argument)"
        ))
    })
}

pub fn resolve_named(
    name: &str,
    scalar: Option<f64>,
    probs: Option<&[f64]>,
    stochastic: Option<&[Vec<f64>]>,
    dims: &[usize],
) -> Result<Channel64, Error> {
    let canonical = normalize(name);
    match canonical.as_str() {
        "identity" | "id" | "1" => Ok(channels::identity_channel(dims)),
        "hadamard" | "h" => Ok(channels::hadamard_channel()),
        "x" | "pauli_x" => unitary_channel(gates::pauli_x(), &[2]),
        "y" | "pauli_y" => unitary_channel(gates::pauli_y(), &[2]),
        "z" | "pauli_z" => unitary_channel(gates::pauli_z(), &[2]),
        "s" => unitary_channel(gates::s_gate(), &[2]),
        "t" => unitary_channel(gates::t_gate(), &[2]),
        "cnot" => Ok(channels::cnot_channel()),
        "rotated_cnot" => Ok(channels::rotated_cnot_channel()),
        "discord_map" => Ok(channels::discord_map()),
        "dephasing" => Ok(channels::dephasing(&Einselection::full(dims))),
        "dephasing_a" => Ok(channels::dephasing(&Einselection::one_sided(dims, 0)?)),
        "dephasing_b" => {
            if dims.len() < 2 {
                return Err(Error::InvalidParameter(
                    "dephasing_b needs at least two factors".into(),
                ));
            }
            Ok(channels::dephasing(&Einselection::one_sided(dims, 1)?))
        }
        "depolarizing" => channels::depolarizing(dims, need_scalar(&canonical, scalar)?),
        "amplitude_damping" => channels::amplitude_damping(need_scalar(&canonical, scalar)?),
        "bit_flip" => channels::bit_flip(need_scalar(&canonical, scalar)?),
        "phase_flip" => channels::phase_flip(need_scalar(&canonical, scalar)?),
        "phase_damping" => channels::phase_damping(need_scalar(&canonical, scalar)?),
        "pauli" => {
            let p = probs.ok_or_else(|| {
                Error::InvalidParameter("pauli channel needs --probs p0,p1,p2,p3".into())
            })?;
            channels::pauli_channel(p)
        }
        "classical" => {
            let t = stochastic.ok_or_else(|| {
                Error::InvalidParameter(
                    "classical channel needs a column-stochastic 'matrix'".into(),
                )
            })?;
            let d: usize = dims.iter().product();
            if t.len() != d || t.iter().any(|r| r.len() != d) {
                return Err(Error::DimensionMismatch(format!(
                    "stochastic matrix must be {d}x{d}"
                )));
            }
            let flat: Vec<f64> = t.iter().flatten().copied().collect();
            channels::classical_channel(&flat, dims)
        }
        other => Err(Error::InvalidParameter(format!("unknown channel '{other}'"))),
    }
}

/// One item of a composition chain: a channel name with optional arguments,
/// one of which may be the sweep placeholder `mu`.
#[derive(Debug, Clone)]
pub struct ChainItem {
    pub name: String,
    pub args: Vec<ChainArg>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainArg {
    Value(f64),
    Placeholder,
}

/// Parse `H,amplitude_damping(0.75),H` into chain items; composition applies
/// right to left (the leftmost item acts last), matching operator notation.
pub fn parse_chain(text: &str) -> Result<Vec<ChainItem>, Error> {
    let mut items = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::InvalidParameter("unbalanced ')' in chain".into()))?;
                current.push(c);
            }
            ',' if depth == 0 => {
                items.push(parse_chain_item(&current)?);
                current.clear();
            }
            _ => current.push(c),
        }
    }
    if depth != 0 {
        return Err(Error::InvalidParameter("unbalanced '(' in chain".into()));
    }
    if !current.trim().is_empty() {
        items.push(parse_chain_item(&current)?);
    }
    if items.is_empty() {
        return Err(Error::InvalidParameter("empty chain".into()));
    }
    Ok(items)
}

fn parse_chain_item(text: &str) -> Result<ChainItem, Error> {
    let text = text.trim();
    if let Some(open) = text.find('(') {
        if !text.ends_with(')') {
            return Err(Error::InvalidParameter(format!(
                "malformed chain item '{text}'"
            )));
        }
        let name = text[..open].trim().to_string();
        let inner = &text[open + 1..text.len() - 1];
        let args: Result<Vec<ChainArg>, Error> = inner
            .split(',')
            .map(|a| {
                let a = a.trim();
                if a == "mu" || a == "@" {
                    Ok(ChainArg::Placeholder)
                } else {
                    a.parse::<f64>()
                        .map(ChainArg::Value)
                        .map_err(|_| Error::InvalidParameter(format!("bad argument '{a}'")))
                }
            })
            .collect();
        Ok(ChainItem { name, args: args? })
    } else {
        Ok(ChainItem {
            name: text.to_string(),
            args: Vec::new(),
        })
    }
}

pub fn chain_has_placeholder(items: &[ChainItem]) -> bool {
    items
        .iter()
        .any(|i| i.args.contains(&ChainArg::Placeholder))
}

/// Turn parsed chain items into a spec document, substituting the placeholder.
pub fn chain_to_spec(items: &[ChainItem], placeholder: Option<f64>) -> Result<ChannelSpec, Error> {
    let parts: Result<Vec<ChannelSpec>, Error> = items
        .iter()
        .map(|item| {
            let mut scalar = None;
            let mut probs = None;
            let args: Result<Vec<f64>, Error> = item
                .args
                .iter()
                .map(|a| match a {
                    ChainArg::Value(v) => Ok(*v),
                    ChainArg::Placeholder => placeholder.ok_or_else(|| {
                        Error::InvalidParameter(
                            "chain contains the placeholder 'mu' but no sweep value".into(),
                        )
                    }),
                })
                .collect();
            let args = args?;
            match args.len() {
                0 => {}
                1 => scalar = Some(args[0]),
                _ => probs = Some(args),
            }
            Ok(ChannelSpec::Named {
                name: item.name.clone(),
                dims: None,
                mu: scalar,
                gamma: None,
                p: None,
                probs,
                matrix: None,
            })
        })
        .collect();
    Ok(ChannelSpec::Chain { chain: parts? })
}

/// A state document: amplitudes, a density matrix, or a classical probability
/// table keyed by basis labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum StateSpec {
    Amplitudes {
        dims: Vec<usize>,
        amplitudes: Vec<[f64; 2]>,
    },
    Matrix {
        dims: Vec<usize>,
        matrix: MatrixSpec,
    },
    Classical {
        dims: Vec<usize>,
        classical: BTreeMap<String, f64>,
    },
}

impl StateSpec {
    pub fn resolve(&self) -> Result<Density64, Error> {
        match self {
            StateSpec::Amplitudes { dims, amplitudes } => {
                let amps = amplitudes.iter().map(|&[re, im]| cx(re, im)).collect();
                Ok(Pure64::new(amps, dims.clone())?.to_density())
            }
            StateSpec::Matrix { dims, matrix } => {
                Density64::new(matrix_from_spec(matrix)?, dims.clone())
            }
            StateSpec::Classical { dims, classical } => {
                let total: usize = dims.iter().product();
                let mut probs = vec![0.0f64; total];
                for (label, &p) in classical {
                    probs[label_to_index(label, dims)?] += p;
                }
                classical_state(&probs, dims)
            }
        }
    }
}

/// Composite basis label: one character per factor, digits for basis states.
pub fn label_to_index(label: &str, dims: &[usize]) -> Result<usize, Error> {
    let chars: Vec<char> = label.chars().collect();
    if chars.len() != dims.len() {
        return Err(Error::InvalidParameter(format!(
            "label '{label}' has {} characters for {} factors",
            chars.len(),
            dims.len()
        )));
    }
    let mut index = 0usize;
    for (c, &d) in chars.iter().zip(dims) {
        let k = c
            .to_digit(10)
            .ok_or_else(|| Error::InvalidParameter(format!("bad basis label '{label}'")))?
            as usize;
        if k >= d {
            return Err(Error::InvalidParameter(format!(
                "label '{label}' exceeds factor dimension {d}"
            )));
        }
        index = index * d + k;
    }
    Ok(index)
}

/// Command-line state token: one character per factor out of digits (basis
/// labels) and +/- (qubit plus/minus), or `@file.json` for a state document.
pub fn parse_state(token: &str, dims: &[usize]) -> Result<Density64, Error> {
    if let Some(path) = token.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read '{path}': {e}")))?;
        let spec: StateSpec = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("bad state document '{path}': {e}")))?;
        let state = spec.resolve()?;
        if state.dims() != dims {
            return Err(Error::DimensionMismatch(format!(
                "state dims {:?} do not match channel dims {:?}",
                state.dims(),
                dims
            )));
        }
        return Ok(state);
    }
    let chars: Vec<char> = token.chars().collect();
    if chars.len() != dims.len() {
        return Err(Error::InvalidParameter(format!(
            "state '{token}' has {} characters for {} factors",
            chars.len(),
            dims.len()
        )));
    }
    let mut state: Option<Pure64> = None;
    for (c, &d) in chars.iter().zip(dims) {
        let factor = match c {
            '+' | '-' => {
                if d != 2 {
                    return Err(Error::InvalidParameter(
                        "+/- labels apply to qubit factors only".into(),
                    ));
                }
                Pure64::qubit_plus_minus(*c == '+')
            }
            _ => {
                let k = c.to_digit(10).ok_or_else(|| {
                    Error::InvalidParameter(format!("bad state token '{token}'"))
                })? as usize;
                if k >= d {
                    return Err(Error::InvalidParameter(format!(
                        "state '{token}' exceeds factor dimension {d}"
                    )));
                }
                Pure64::basis(&[d], k)
            }
        };
        state = Some(match state {
            None => factor,
            Some(acc) => acc.tensor(&factor),
        });
    }
    Ok(state.expect("non-empty dims").to_density())
}

/// Basis-rotation file: per-factor unitaries for the einselection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotationEntry {
    pub factor: usize,
    pub matrix: MatrixSpec,
}

pub fn apply_rotations(
    mut gamma: Einselection<f64>,
    entries: &[RotationEntry],
) -> Result<Einselection<f64>, Error> {
    for entry in entries {
        gamma = gamma.with_rotation(entry.factor, matrix_from_spec(&entry.matrix)?)?;
    }
    Ok(gamma)
}
