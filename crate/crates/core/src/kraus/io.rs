//! JSON dumps of synthesized and extracted Kraus sets.
//!
//! Matrices are nested row-major arrays of `[re, im]` pairs, as in model files.
//! Channel and node indices are zero-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{from_json_with_path, matrix_from_raw, matrix_to_raw, RawMatrix};
use crate::numerics::ComplexMatrix;

use super::choi::WeightedKraus;
use super::quadrature::QuadratureScheme;
use super::synth::KrausSet;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKrausSet {
    dim: usize,
    k0: RawMatrix,
    corrections: Vec<RawCorrection>,
    epsilons: Vec<f64>,
    quadrature: RawQuadrature,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorrection {
    channel: usize,
    node: usize,
    matrix: RawMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    channels: Vec<QuadratureScheme>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtraction {
    dim: usize,
    cutoff: f64,
    terms: Vec<RawTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    weight: f64,
    matrix: RawMatrix,
}

fn square(raw: &RawMatrix, dim: usize, path: &str) -> Result<ComplexMatrix> {
    let m = matrix_from_raw(raw, path)?;
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::parse(
            path,
            format!("expected {dim}x{dim}, got {}x{}", m.rows(), m.cols()),
        ));
    }
    Ok(m)
}

pub fn kraus_to_json(ks: &KrausSet) -> String {
    let corrections = ks
        .corrections
        .iter()
        .enumerate()
        .flat_map(|(channel, list)| {
            list.iter().enumerate().map(move |(node, m)| RawCorrection {
                channel,
                node,
                matrix: matrix_to_raw(m),
            })
        })
        .collect();
    let raw = RawKrausSet {
        dim: ks.dim,
        k0: matrix_to_raw(&ks.k0),
        corrections,
        epsilons: ks.epsilons.clone(),
        quadrature: RawQuadrature {
            channels: ks.quadratures.clone(),
        },
    };
    serde_json::to_string_pretty(&raw).expect("Kraus set serializes")
}

/// Parses a Kraus dump, checking shapes and that every `(channel, node)` slot
/// named by the quadrature table is present exactly once.
pub fn kraus_from_json(text: &str) -> Result<KrausSet> {
    let raw: RawKrausSet = from_json_with_path(text)?;
    let dim = raw.dim;
    if dim == 0 {
        return Err(Error::parse("dim", "dimension must be positive"));
    }
    let k0 = square(&raw.k0, dim, "k0")?;
    let schemes = raw.quadrature.channels;
    if schemes.len() != raw.epsilons.len() {
        return Err(Error::parse(
            "quadrature.channels",
            format!(
                "{} schemes for {} epsilons",
                schemes.len(),
                raw.epsilons.len()
            ),
        ));
    }
    for (k, q) in schemes.iter().enumerate() {
        q.validate()
            .map_err(|e| Error::parse(format!("quadrature.channels[{k}]"), e.to_string()))?;
    }
    if let Some(k) = raw
        .epsilons
        .iter()
        .position(|e| !(e.is_finite() && *e >= 0.0))
    {
        return Err(Error::parse(
            format!("epsilons[{k}]"),
            "must be finite and nonnegative",
        ));
    }

    let mut slots: Vec<Vec<Option<ComplexMatrix>>> =
        schemes.iter().map(|q| vec![None; q.len()]).collect();
    for (idx, c) in raw.corrections.iter().enumerate() {
        let path = format!("corrections[{idx}]");
        let slot = slots
            .get_mut(c.channel)
            .and_then(|s| s.get_mut(c.node))
            .ok_or_else(|| {
                Error::parse(
                    &path,
                    format!(
                        "no quadrature slot for channel {} node {}",
                        c.channel, c.node
                    ),
                )
            })?;
        if slot.is_some() {
            return Err(Error::parse(&path, "duplicate correction"));
        }
        *slot = Some(square(&c.matrix, dim, &format!("{path}.matrix"))?);
    }
    let corrections = slots
        .into_iter()
        .enumerate()
        .map(|(ch, list)| {
            list.into_iter()
                .enumerate()
                .map(|(node, m)| {
                    m.ok_or_else(|| {
                        Error::parse("corrections", format!("missing channel {ch} node {node}"))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(KrausSet {
        dim,
        k0,
        corrections,
        epsilons: raw.epsilons,
        quadratures: schemes,
    })
}

pub fn extraction_to_json(terms: &[WeightedKraus], dim: usize, cutoff: f64) -> String {
    let raw = RawExtraction {
        dim,
        cutoff,
        terms: terms
            .iter()
            .map(|t| RawTerm {
                weight: t.weight,
                matrix: matrix_to_raw(&t.operator),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("extraction serializes")
}

/// Parses an extraction dump into `(dim, cutoff, terms)`.
pub fn extraction_from_json(text: &str) -> Result<(usize, f64, Vec<WeightedKraus>)> {
    let raw: RawExtraction = from_json_with_path(text)?;
    if raw.dim == 0 {
        return Err(Error::parse("dim", "dimension must be positive"));
    }
    let terms = raw
        .terms
        .iter()
        .enumerate()
        .map(|(k, t)| {
            Ok(WeightedKraus {
                weight: t.weight,
                operator: square(&t.matrix, raw.dim, &format!("terms[{k}].matrix"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((raw.dim, raw.cutoff, terms))
}
