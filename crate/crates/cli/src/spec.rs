//! Flag-spec parsing: groups, lattices, windows, weights, compatible
//! functions, rationals, and small helpers shared by the subcommands.

use ncgabor::algebra::TwistedElement;
use ncgabor::lca::{discretize_window, FiniteGroup, WindowKind};
use ncgabor::phase::Lattice;
use ncgabor::weights::{CompatibleFunction, Weight};
use ncgabor::{CVec, Error, Result, C64};
use num_rational::Rational64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// `Z12`, `12`, `Z4xZ6`, or `4,6`.
pub fn group(text: &str) -> Result<FiniteGroup> {
    let cleaned = text.trim().to_ascii_lowercase().replace('z', "");
    let moduli: std::result::Result<Vec<u64>, _> = cleaned
        .split(['x', ','])
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<u64>())
        .collect();
    match moduli {
        Ok(m) if !m.is_empty() => FiniteGroup::new(&m),
        _ => Err(Error::Format(format!("bad group spec: {text}"))),
    }
}

pub fn group_and_lattice(group_spec: &str, lattice_spec: &str) -> Result<(FiniteGroup, Lattice)> {
    let g = group(group_spec)?;
    let lat = Lattice::parse(&g, lattice_spec)?;
    Ok((g, lat))
}

/// `gaussian`, `bspline:N`.
pub fn window_kind(text: &str) -> Result<WindowKind> {
    let t = text.trim().to_ascii_lowercase();
    if t == "gaussian" {
        return Ok(WindowKind::Gaussian);
    }
    if let Some(rest) = t.strip_prefix("bspline:") {
        let n: u32 = rest
            .parse()
            .map_err(|_| Error::Format(format!("bad bspline order: {text}")))?;
        return Ok(WindowKind::BSpline(n));
    }
    Err(Error::Format(format!("unknown window name: {text}")))
}

/// A named window sampled onto the group, or a CSV sample file.
pub fn window(text: &str, group: &FiniteGroup, scale: Option<f64>) -> Result<CVec> {
    if text.ends_with(".csv") {
        let w = ncgabor::io::read_window_file(text)?;
        if w.len() != group.order() {
            return Err(Error::Format(format!(
                "window file has {} rows, group has {} points",
                w.len(),
                group.order()
            )));
        }
        return Ok(w);
    }
    let kind = window_kind(text)?;
    let scale = scale.unwrap_or_else(|| (group.order() as f64).sqrt());
    discretize_window(kind, group, scale)
}

/// `poly:s` or `const:c`.
pub fn weight(text: &str, group: &FiniteGroup) -> Result<Weight> {
    let t = text.trim().to_ascii_lowercase();
    if let Some(rest) = t.strip_prefix("poly:") {
        let s: f64 = rest
            .parse()
            .map_err(|_| Error::Format(format!("bad weight spec: {text}")))?;
        return Weight::polynomial(group, s);
    }
    if let Some(rest) = t.strip_prefix("const:") {
        let c: f64 = rest
            .parse()
            .map_err(|_| Error::Format(format!("bad weight spec: {text}")))?;
        return Weight::constant(group, c);
    }
    Err(Error::Format(format!("unknown weight spec: {text}")))
}

/// `identity`, `const:c`, `torus-sqrt`.
pub fn compatible_function(text: &str) -> Result<CompatibleFunction> {
    let t = text.trim().to_ascii_lowercase();
    match t.as_str() {
        "identity" => Ok(CompatibleFunction::Identity),
        "torus-sqrt" => Ok(CompatibleFunction::TorusSqrt),
        _ => {
            if let Some(rest) = t.strip_prefix("const:") {
                let c: f64 = rest
                    .parse()
                    .map_err(|_| Error::Format(format!("bad function spec: {text}")))?;
                if c < 0.0 {
                    return Err(Error::Format("constant function must be >= 0".into()));
                }
                return Ok(CompatibleFunction::Constant(c));
            }
            Err(Error::Format(format!("unknown function spec: {text}")))
        }
    }
}

/// `1`, `-3`, `1/2`.
pub fn rational(text: &str) -> Result<Rational64> {
    text.trim()
        .parse::<Rational64>()
        .map_err(|_| Error::Format(format!("bad rational: {text}")))
}

/// Comma-separated ladder sizes, e.g. `4,8,16`.
pub fn ladder(text: &str) -> Result<Vec<u64>> {
    let ls: std::result::Result<Vec<u64>, _> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<u64>())
        .collect();
    match ls {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(Error::Format(format!("bad ladder spec: {text}"))),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(n: usize, rng: &mut impl Rng) -> CVec {
    CVec::from_fn(n, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

pub fn random_element(lattice: &Arc<Lattice>, seed: u64) -> TwistedElement {
    let mut r = rng(seed);
    TwistedElement::from_coeffs(
        lattice.clone(),
        (0..lattice.len())
            .map(|_| C64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
            .collect(),
    )
    .expect("length matches")
}

/// Echo of the given flags as a sorted JSON object.
pub fn echo(pairs: &[(&str, &str)]) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.to_string())))
        .collect();
    serde_json::Value::Object(map)
}

/// Complex vector as `[[re, im], …]`.
pub fn vec_to_json(v: &CVec) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|z| serde_json::json!([z.re, z.im])).collect())
}
