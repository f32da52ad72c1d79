//! Shipped example objects and `name:arg` specifications for inputs that
//! the tool can generate on demand.

use anyhow::{bail, Context, Result};
use uniformity_core::constructions::{bose_oa, even_weight_oa};
use uniformity_core::formats::{self, SchemeForm};
use uniformity_core::schemes::{ghm_from_prime, hadamard, DifferenceScheme};
use uniformity_core::MixedArray;

pub struct BuiltinFile {
    pub name: &'static str,
    pub contents: &'static str,
    pub kind: crate::catalog::Kind,
}

/// The reference objects seeded into a fresh catalog.
pub const BUILTIN_FILES: &[BuiltinFile] = &[
    BuiltinFile {
        name: "moa_8_4_2222.moa",
        contents: include_str!("../../../data/moa_8_4_2222.moa"),
        kind: crate::catalog::Kind::Array,
    },
    BuiltinFile {
        name: "moa_12_3_2222.moa",
        contents: include_str!("../../../data/moa_12_3_2222.moa"),
        kind: crate::catalog::Kind::Array,
    },
    BuiltinFile {
        name: "moa_18_3333333_2.moa",
        contents: include_str!("../../../data/moa_18_3333333_2.moa"),
        kind: crate::catalog::Kind::Array,
    },
    BuiltinFile {
        name: "h4.ds",
        contents: include_str!("../../../data/h4.ds"),
        kind: crate::catalog::Kind::Scheme,
    },
    BuiltinFile {
        name: "eq2.qst",
        contents: include_str!("../../../data/eq2.qst"),
        kind: crate::catalog::Kind::State,
    },
];

/// Resolve an array argument: either a path or a generator spec
/// (`trivial:D`, `bose:P:N`, `evenweight:N`).
pub fn resolve_array(spec: &str) -> Result<(MixedArray, String)> {
    if let Some(rest) = spec.strip_prefix("trivial:") {
        let d: u32 = rest.parse().context("trivial:D needs an integer level")?;
        return Ok((MixedArray::trivial(d)?, format!("trivial:{d}")));
    }
    if let Some(rest) = spec.strip_prefix("bose:") {
        let (p, n) = rest
            .split_once(':')
            .context("bose:P:N needs two integers")?;
        let p: u32 = p.parse()?;
        let n: usize = n.parse()?;
        return Ok((bose_oa(p, n)?, format!("bose:{p}:{n}")));
    }
    if let Some(rest) = spec.strip_prefix("evenweight:") {
        let n: usize = rest.parse().context("evenweight:N needs an integer")?;
        return Ok((even_weight_oa(n)?, format!("evenweight:{n}")));
    }
    if spec.contains(':') && !std::path::Path::new(spec).exists() {
        bail!("unknown array spec {spec:?} (expected a file or trivial:/bose:/evenweight:)");
    }
    let array = formats::read_moa_file(spec)
        .with_context(|| format!("reading array file {spec}"))?;
    Ok((array, spec.to_string()))
}

/// Resolve a scheme argument: a path (with optional ±1 form) or
/// `hadamard:M` / `prime:P`.
pub fn resolve_scheme(spec: &str, pm_one: bool) -> Result<(DifferenceScheme, String)> {
    if let Some(rest) = spec.strip_prefix("hadamard:") {
        let m: usize = rest.parse().context("hadamard:M needs an integer")?;
        return Ok((hadamard(m)?, format!("hadamard:{m}")));
    }
    if let Some(rest) = spec.strip_prefix("prime:") {
        let p: u32 = rest.parse().context("prime:P needs an integer")?;
        return Ok((ghm_from_prime(p)?, format!("prime:{p}")));
    }
    if spec.contains(':') && !std::path::Path::new(spec).exists() {
        bail!("unknown scheme spec {spec:?} (expected a file or hadamard:/prime:)");
    }
    let form = if pm_one {
        SchemeForm::PlusMinusOne
    } else {
        SchemeForm::Symbols
    };
    let scheme = formats::read_scheme_file(spec, form)
        .with_context(|| format!("reading scheme file {spec}"))?;
    Ok((scheme, spec.to_string()))
}
