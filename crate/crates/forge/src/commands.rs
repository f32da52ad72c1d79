//! Command implementations. Every command reports through `Outcome`:
//! `Pass` exits 0, `Fail` exits 1 (witness on stderr), and any `Err` from
//! argument or file handling exits 2.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_rational::BigRational;
use serde_json::json;

use uniformity_core::constructions::{expansive_replace, kron_extend, strength3_extend};
use uniformity_core::formats::{self, write_moa, write_state};
use uniformity_core::locc::is_locally_irreducible_certificate;
use uniformity_core::shadow::{ame_excluded, scan_nonexistence, DimVector};
use uniformity_core::states::{
    completeness_deviation, max_pairwise_overlap, state_from_irmoa, uniform_superposition,
    PureState,
};
use uniformity_core::{DifferenceScheme, Error as CoreError, MixedArray, StrengthCheck};

use crate::builtin::{self, BUILTIN_FILES};
use crate::catalog::{
    catalog_dir, content_id, timestamp, Catalog, CatalogEntry, Kind, Provenance, Verification,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

pub fn rational_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------- verify

pub enum VerifyMode {
    Strength(u32),
    Uniform(u32),
    Scheme,
}

pub fn cmd_verify(path: &Path, mode: VerifyMode, json: bool) -> Result<Outcome> {
    match mode {
        VerifyMode::Strength(k) => {
            let array = formats::read_moa_file(path)?;
            match array.verify_strength(k)? {
                StrengthCheck::Pass { lambdas } => {
                    let md = array.min_hamming_distance().ok();
                    if json {
                        println!(
                            "{}",
                            json!({
                                "command": "verify", "mode": "strength", "k": k,
                                "pass": true,
                                "signature": array.signature().to_string(),
                                "rows": array.row_count(),
                                "min_hamming_distance": md,
                                "subsets_checked": lambdas.len(),
                            })
                        );
                    } else {
                        println!(
                            "PASS: MOA({}, {}, {k}) over {} column subsets{}",
                            array.row_count(),
                            array.signature(),
                            lambdas.len(),
                            md.map(|m| format!(", md {m}")).unwrap_or_default()
                        );
                    }
                    Ok(Outcome::Pass)
                }
                StrengthCheck::Fail { witness, counts } => {
                    eprintln!(
                        "FAIL: columns {witness:?} are unbalanced ({} distinct tuples)",
                        counts.len()
                    );
                    if json {
                        println!(
                            "{}",
                            json!({
                                "command": "verify", "mode": "strength", "k": k,
                                "pass": false, "witness": witness,
                            })
                        );
                    }
                    Ok(Outcome::Fail)
                }
            }
        }
        VerifyMode::Uniform(k) => {
            let state = if path.extension().is_some_and(|e| e == "qst") {
                formats::read_state_file(path)?
            } else {
                uniform_superposition(&formats::read_moa_file(path)?)?
            };
            let check = state.verify_k_uniform(k)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "command": "verify", "mode": "uniform", "k": k,
                        "pass": check.pass,
                        "max_deviation": check.max_deviation,
                        "worst_subset": check.worst_subset,
                        "witness": check.first_failing,
                        "subsets_checked": check.subsets_checked,
                    })
                );
            }
            if check.pass {
                if !json {
                    println!(
                        "PASS: {k}-uniform over {} subsets, max deviation {:.3e}",
                        check.subsets_checked, check.max_deviation
                    );
                }
                Ok(Outcome::Pass)
            } else {
                eprintln!(
                    "FAIL: subset {:?} deviates (max deviation {:.3e} at {:?})",
                    check.first_failing.as_deref().unwrap_or(&[]),
                    check.max_deviation,
                    check.worst_subset
                );
                Ok(Outcome::Fail)
            }
        }
        VerifyMode::Scheme => {
            let scheme = formats::read_scheme_file(path, formats::SchemeForm::Symbols)?;
            match scheme.verify() {
                uniformity_core::schemes::SchemeCheck::Pass => {
                    if json {
                        println!(
                            "{}",
                            json!({
                                "command": "verify", "mode": "scheme",
                                "pass": true, "strength": scheme.strength(),
                                "rows": scheme.rows(), "cols": scheme.cols(),
                                "modulus": scheme.modulus(),
                            })
                        );
                    } else {
                        println!(
                            "PASS: D{}({}, {}, {})",
                            scheme.strength(),
                            scheme.rows(),
                            scheme.cols(),
                            scheme.modulus()
                        );
                    }
                    Ok(Outcome::Pass)
                }
                uniformity_core::schemes::SchemeCheck::Fail { witness, detail } => {
                    eprintln!("FAIL: {detail}");
                    if json {
                        println!(
                            "{}",
                            json!({
                                "command": "verify", "mode": "scheme",
                                "pass": false, "witness": witness, "detail": detail,
                            })
                        );
                    }
                    Ok(Outcome::Fail)
                }
            }
        }
    }
}

// ------------------------------------------------------------- catalog IO

fn open_catalog() -> Result<Catalog> {
    let dir = catalog_dir();
    let mut catalog = Catalog::open(&dir)?;
    seed_builtins(&mut catalog)?;
    Ok(catalog)
}

fn seed_builtins(catalog: &mut Catalog) -> Result<()> {
    if !catalog.is_empty() {
        return Ok(());
    }
    let objects = catalog.objects_dir();
    std::fs::create_dir_all(&objects)?;
    for file in BUILTIN_FILES {
        let path = objects.join(file.name);
        std::fs::write(&path, file.contents)?;
        let id = content_id(file.contents.as_bytes());
        let entry = match file.kind {
            Kind::Array => {
                let mut array = formats::parse_moa(file.contents)?;
                let k = array.claimed_strength();
                array.confirm_strength(k)?;
                let md = array.min_hamming_distance()?;
                CatalogEntry {
                    id,
                    kind: Kind::Array,
                    signature: format!(
                        "MOA({}, {}, {k})",
                        array.row_count(),
                        array.signature()
                    ),
                    k,
                    metric: Some(md as u64),
                    provenance: Provenance::Builtin {
                        name: file.name.to_string(),
                    },
                    verification: Verification {
                        status: "verified".into(),
                        detail: format!("strength {k} exhaustive, md {md}"),
                        timestamp: timestamp(),
                    },
                    path: path.display().to_string(),
                }
            }
            Kind::Scheme => {
                let mut scheme =
                    formats::parse_scheme(file.contents, formats::SchemeForm::Symbols)?;
                scheme.confirm().map_err(|e| anyhow!(e))?;
                CatalogEntry {
                    id,
                    kind: Kind::Scheme,
                    signature: format!(
                        "D{}({}, {}, {})",
                        scheme.strength(),
                        scheme.rows(),
                        scheme.cols(),
                        scheme.modulus()
                    ),
                    k: scheme.strength(),
                    metric: None,
                    provenance: Provenance::Builtin {
                        name: file.name.to_string(),
                    },
                    verification: Verification {
                        status: "verified".into(),
                        detail: format!("strength {} coset check", scheme.strength()),
                        timestamp: timestamp(),
                    },
                    path: path.display().to_string(),
                }
            }
            Kind::State => {
                let state = formats::parse_state(file.contents)?;
                let k = 2; // the shipped state is the 2-uniform reference
                let check = state.verify_k_uniform(k)?;
                CatalogEntry {
                    id,
                    kind: Kind::State,
                    signature: format!("state on dims {:?}", state.dims()),
                    k,
                    metric: Some(state.support() as u64),
                    provenance: Provenance::Builtin {
                        name: file.name.to_string(),
                    },
                    verification: Verification {
                        status: if check.pass { "verified" } else { "failed" }.into(),
                        detail: format!(
                            "{k}-uniform check, max deviation {:.3e}",
                            check.max_deviation
                        ),
                        timestamp: timestamp(),
                    },
                    path: path.display().to_string(),
                }
            }
        };
        catalog.insert(entry)?;
    }
    Ok(())
}

/// Make sure a user-supplied input file is cataloged; returns its id.
fn catalog_import(
    catalog: &mut Catalog,
    path_or_spec: &str,
    kind: Kind,
    signature: String,
    k: u32,
    metric: Option<u64>,
    verification: Verification,
) -> Result<String> {
    let (contents, provenance, path) = if Path::new(path_or_spec).exists() {
        let contents = std::fs::read(path_or_spec)?;
        let id = content_id(&contents);
        (
            contents,
            Provenance::Imported { file_hash: id },
            path_or_spec.to_string(),
        )
    } else {
        // generated builtin spec such as hadamard:4 — materialize it
        let contents = match kind {
            Kind::Array => write_moa(&builtin::resolve_array(path_or_spec)?.0).into_bytes(),
            Kind::Scheme => formats::write_scheme(&builtin::resolve_scheme(path_or_spec, false)?.0)
                .into_bytes(),
            Kind::State => bail!("state inputs must be files"),
        };
        let id = content_id(&contents);
        let path = catalog
            .objects_dir()
            .join(format!("{}-{}", path_or_spec.replace(':', "_"), &id[..8]));
        let path = match kind {
            Kind::Array => path.with_extension("moa"),
            Kind::Scheme => path.with_extension("ds"),
            Kind::State => unreachable!(),
        };
        std::fs::create_dir_all(catalog.objects_dir())?;
        std::fs::write(&path, &contents)?;
        (
            contents,
            Provenance::Builtin {
                name: path_or_spec.to_string(),
            },
            path.display().to_string(),
        )
    };
    let id = content_id(&contents);
    catalog.insert(CatalogEntry {
        id: id.clone(),
        kind,
        signature,
        k,
        metric,
        provenance,
        verification,
        path,
    })?;
    Ok(id)
}

fn verified_now(detail: String) -> Verification {
    Verification {
        status: "verified".into(),
        detail,
        timestamp: timestamp(),
    }
}

fn import_array(catalog: &mut Catalog, spec: &str) -> Result<(MixedArray, String)> {
    let (mut array, label) = builtin::resolve_array(spec)?;
    let k = array.claimed_strength();
    if array.verified_strength().is_none() {
        array
            .confirm_strength(k)
            .with_context(|| format!("{label}: claimed strength {k} does not verify"))?;
    }
    let md = array.min_hamming_distance().ok();
    let id = catalog_import(
        catalog,
        spec,
        Kind::Array,
        format!("MOA({}, {}, {k})", array.row_count(), array.signature()),
        k,
        md.map(|m| m as u64),
        verified_now(format!(
            "strength {k} exhaustive{}",
            md.map(|m| format!(", md {m}")).unwrap_or_default()
        )),
    )?;
    Ok((array, id))
}

fn import_scheme(catalog: &mut Catalog, spec: &str, pm_one: bool) -> Result<(DifferenceScheme, String)> {
    let (mut scheme, label) = builtin::resolve_scheme(spec, pm_one)?;
    if !scheme.is_verified() {
        scheme
            .confirm()
            .with_context(|| format!("{label}: scheme does not verify"))?;
    }
    let id = catalog_import(
        catalog,
        spec,
        Kind::Scheme,
        format!(
            "D{}({}, {}, {})",
            scheme.strength(),
            scheme.rows(),
            scheme.cols(),
            scheme.modulus()
        ),
        scheme.strength(),
        None,
        verified_now(format!("strength {} coset check", scheme.strength())),
    )?;
    Ok((scheme, id))
}

fn import_state(catalog: &mut Catalog, path: &str, k: u32) -> Result<(PureState, String)> {
    let state = formats::read_state_file(path)?;
    let id = catalog_import(
        catalog,
        path,
        Kind::State,
        format!("state on dims {:?}", state.dims()),
        k,
        Some(state.support() as u64),
        Verification {
            status: "unverified".into(),
            detail: "imported, norm validated".into(),
            timestamp: timestamp(),
        },
    )?;
    Ok((state, id))
}

// ------------------------------------------------------------- construct

pub struct ConstructCtx {
    pub out: Option<PathBuf>,
    pub no_verify: bool,
    pub json: bool,
}

fn write_output(
    catalog: &mut Catalog,
    ctx: &ConstructCtx,
    contents: String,
    default_name: String,
    entry_seed: CatalogEntry,
) -> Result<()> {
    let id = content_id(contents.as_bytes());
    let path = ctx.out.clone().unwrap_or_else(|| PathBuf::from(default_name));
    std::fs::write(&path, &contents)
        .with_context(|| format!("writing {}", path.display()))?;
    let mut entry = entry_seed;
    entry.id = id.clone();
    entry.path = path.display().to_string();
    // identical content to an ancestor means nothing new to record
    let parents: Vec<String> = match &entry.provenance {
        Provenance::Constructed { parents, .. } => parents.clone(),
        _ => Vec::new(),
    };
    if parents.iter().any(|p| p == &id) {
        println!("{id}  {} (already cataloged; output equals an input)", path.display());
        return Ok(());
    }
    catalog.insert(entry)?;
    if ctx.json {
        println!(
            "{}",
            json!({"command": "construct", "id": id, "path": path.display().to_string()})
        );
    } else {
        println!("{id}  {}", path.display());
    }
    Ok(())
}

fn array_entry(
    array: &MixedArray,
    operation: &str,
    parents: Vec<String>,
    verified_detail: String,
) -> CatalogEntry {
    CatalogEntry {
        id: String::new(),
        kind: Kind::Array,
        signature: format!(
            "MOA({}, {}, {})",
            array.row_count(),
            array.signature(),
            array.claimed_strength()
        ),
        k: array.claimed_strength(),
        metric: array.min_hamming_distance().ok().map(|m| m as u64),
        provenance: Provenance::Constructed {
            operation: operation.to_string(),
            parents,
        },
        verification: Verification {
            status: if verified_detail.is_empty() {
                "unverified"
            } else {
                "verified"
            }
            .into(),
            detail: if verified_detail.is_empty() {
                "skipped (--no-verify)".into()
            } else {
                verified_detail
            },
            timestamp: timestamp(),
        },
        path: String::new(),
    }
}

fn state_entry(
    state: &PureState,
    k: u32,
    operation: &str,
    parents: Vec<String>,
    verified_detail: String,
) -> CatalogEntry {
    CatalogEntry {
        id: String::new(),
        kind: Kind::State,
        signature: format!("state on dims {:?}", state.dims()),
        k,
        metric: Some(state.support() as u64),
        provenance: Provenance::Constructed {
            operation: operation.to_string(),
            parents,
        },
        verification: Verification {
            status: if verified_detail.is_empty() {
                "unverified"
            } else {
                "verified"
            }
            .into(),
            detail: if verified_detail.is_empty() {
                "skipped (--no-verify)".into()
            } else {
                verified_detail
            },
            timestamp: timestamp(),
        },
        path: String::new(),
    }
}

fn verify_array_output(array: &mut MixedArray, ctx: &ConstructCtx) -> Result<String> {
    if ctx.no_verify {
        return Ok(String::new());
    }
    let k = array.claimed_strength();
    array.confirm_strength(k)?;
    let md = array.min_hamming_distance()?;
    Ok(format!("strength {k} exhaustive, md {md}"))
}

fn verify_state_output(state: &PureState, k: Option<u32>, ctx: &ConstructCtx) -> Result<String> {
    if ctx.no_verify {
        return Ok(String::new());
    }
    match k {
        Some(k) if k >= 1 && (k as usize) <= state.party_count() / 2 => {
            let check = state.verify_k_uniform(k)?;
            if !check.pass {
                bail!(
                    "constructed state fails the {k}-uniformity check (max deviation {:.3e} on {:?})",
                    check.max_deviation,
                    check.worst_subset
                );
            }
            Ok(format!(
                "{k}-uniform, max deviation {:.3e}",
                check.max_deviation
            ))
        }
        _ => Ok("norm validated".into()),
    }
}

pub fn construct_replace(ctx: &ConstructCtx, a1: &str, col: usize, a2: &str) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (base, id1) = import_array(&mut catalog, a1)?;
    let (repl, id2) = import_array(&mut catalog, a2)?;
    let out = expansive_replace(&base, col, &repl)?;
    let mut array = out.array;
    let detail = verify_array_output(&mut array, ctx)?;
    let entry = array_entry(&array, "replace", vec![id1, id2], detail);
    write_output(
        &mut catalog,
        ctx,
        write_moa(&array),
        format!("replace-{}r.moa", array.row_count()),
        entry,
    )?;
    println!("md {}", out.measured_md);
    Ok(Outcome::Pass)
}

pub fn construct_kron(ctx: &ConstructCtx, a1: &str, ghm: &str, pm_one: bool) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (base, id1) = import_array(&mut catalog, a1)?;
    let (scheme, id2) = import_scheme(&mut catalog, ghm, pm_one)?;
    let out = kron_extend(&base, &scheme)?;
    let mut array = out.array;
    let detail = verify_array_output(&mut array, ctx)?;
    let entry = array_entry(&array, "kron", vec![id1, id2], detail);
    write_output(
        &mut catalog,
        ctx,
        write_moa(&array),
        format!("kron-{}r.moa", array.row_count()),
        entry,
    )?;
    match out.predicted_md {
        Some(p) => println!("md {} (formula value {p})", out.measured_md),
        None => println!("md {} (no formula for rectangular schemes)", out.measured_md),
    }
    Ok(Outcome::Pass)
}

#[allow(clippy::too_many_arguments)]
pub fn construct_strength3(
    ctx: &ConstructCtx,
    a1: Option<&str>,
    a2: &str,
    d_scheme: Option<&str>,
    h: &str,
    pm_one: bool,
) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let mut parents = Vec::new();
    let qudit = match a1 {
        Some(spec) => {
            let (a, id) = import_array(&mut catalog, spec)?;
            parents.push(id);
            Some(a)
        }
        None => None,
    };
    let (qubit, id2) = import_array(&mut catalog, a2)?;
    parents.push(id2);
    let ds = match d_scheme {
        Some(spec) => {
            let (s, id) = import_scheme(&mut catalog, spec, false)?;
            parents.push(id);
            Some(s)
        }
        None => None,
    };
    let (hm, idh) = import_scheme(&mut catalog, h, pm_one)?;
    parents.push(idh);
    let out = strength3_extend(qudit.as_ref(), &qubit, ds.as_ref(), &hm)?;
    let mut array = out.array;
    let detail = verify_array_output(&mut array, ctx)?;
    let entry = array_entry(&array, "strength3", parents, detail);
    write_output(
        &mut catalog,
        ctx,
        write_moa(&array),
        format!("strength3-{}r.moa", array.row_count()),
        entry,
    )?;
    println!(
        "binary-block md {} (formula value {})",
        out.qubit_block_md, out.predicted_md
    );
    Ok(Outcome::Pass)
}

pub fn construct_split(
    ctx: &ConstructCtx,
    input: &str,
    col: usize,
    d1: u32,
    d2: u32,
) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (base, id) = import_array(&mut catalog, input)?;
    let mut array = base.split_column(col, d1, d2)?;
    let detail = verify_array_output(&mut array, ctx)?;
    let entry = array_entry(&array, "split", vec![id], detail);
    write_output(
        &mut catalog,
        ctx,
        write_moa(&array),
        format!("split-{}r.moa", array.row_count()),
        entry,
    )?;
    Ok(Outcome::Pass)
}

pub fn construct_delete(ctx: &ConstructCtx, input: &str, cols: &[usize]) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (base, id) = import_array(&mut catalog, input)?;
    let mut array = base.delete_columns(cols)?;
    let detail = verify_array_output(&mut array, ctx)?;
    let entry = array_entry(&array, "delete", vec![id], detail);
    write_output(
        &mut catalog,
        ctx,
        write_moa(&array),
        format!("delete-{}c.moa", array.column_count()),
        entry,
    )?;
    Ok(Outcome::Pass)
}

pub fn construct_state(ctx: &ConstructCtx, input: &str, k: u32) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (array, id) = import_array(&mut catalog, input)?;
    let state = state_from_irmoa(&array, k)?;
    let detail = verify_state_output(&state, Some(k), ctx)?;
    let entry = state_entry(&state, k, "state", vec![id], detail);
    write_output(
        &mut catalog,
        ctx,
        write_state(&state),
        format!("state-{}p-k{k}.qst", state.party_count()),
        entry,
    )?;
    Ok(Outcome::Pass)
}

pub fn construct_basis(ctx: &ConstructCtx, input: &str, k: u32) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (state, id) = import_state(&mut catalog, input, k)?;
    let basis = state.generate_basis(k)?;
    let overlap = max_pairwise_overlap(&basis);
    let completeness = completeness_deviation(&basis)?;
    let dir = ctx
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("basis-{}", &id[..8])));
    std::fs::create_dir_all(&dir)?;
    let mut checked = 0usize;
    for (i, member) in basis.iter().enumerate() {
        if !ctx.no_verify {
            let check = member.verify_k_uniform(k)?;
            if !check.pass {
                bail!("orbit member {i} fails the {k}-uniformity check");
            }
            checked += 1;
        }
        let contents = write_state(member);
        let member_id = content_id(contents.as_bytes());
        let path = dir.join(format!("basis-{i:04}.qst"));
        std::fs::write(&path, &contents)?;
        catalog.insert(CatalogEntry {
            id: member_id,
            kind: Kind::State,
            signature: format!("state on dims {:?}", member.dims()),
            k,
            metric: Some(member.support() as u64),
            provenance: Provenance::Constructed {
                operation: format!("basis[{i}]"),
                parents: vec![id.clone()],
            },
            verification: Verification {
                status: if ctx.no_verify { "unverified" } else { "verified" }.into(),
                detail: format!("member of a {k}-uniform orbit"),
                timestamp: timestamp(),
            },
            path: path.display().to_string(),
        })?;
    }
    if ctx.json {
        println!(
            "{}",
            json!({
                "command": "construct", "operation": "basis",
                "states": basis.len(),
                "max_pairwise_overlap": overlap,
                "completeness_deviation": completeness,
                "uniformity_checked": checked,
                "directory": dir.display().to_string(),
            })
        );
    } else {
        println!(
            "{} states in {}; max pairwise overlap {overlap:.3e}; completeness deviation {completeness:.3e}",
            basis.len(),
            dir.display()
        );
    }
    if overlap > uniformity_core::states::ORTHOGONALITY_TOL {
        bail!("orbit is not orthogonal (max overlap {overlap:.3e})");
    }
    Ok(Outcome::Pass)
}

pub fn construct_reduce(
    ctx: &ConstructCtx,
    input: &str,
    party: usize,
    outcome: u32,
    check_k: Option<u32>,
) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (state, id) = import_state(&mut catalog, input, check_k.map_or(0, |k| k + 1))?;
    let (reduced, prob) = state.project_reduce(party, outcome)?;
    let detail = verify_state_output(&reduced, check_k, ctx)?;
    let entry = state_entry(
        &reduced,
        check_k.unwrap_or(0),
        "reduce",
        vec![id],
        detail,
    );
    write_output(
        &mut catalog,
        ctx,
        write_state(&reduced),
        format!("reduce-p{party}-o{outcome}.qst"),
        entry,
    )?;
    println!("outcome probability {prob:.6}");
    Ok(Outcome::Pass)
}

pub fn construct_merge(
    ctx: &ConstructCtx,
    input: &str,
    i: usize,
    j: usize,
    check_k: Option<u32>,
) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (state, id) = import_state(&mut catalog, input, check_k.map_or(0, |k| k + 1))?;
    let merged = state.coarse_grain(i, j)?;
    let detail = verify_state_output(&merged, check_k, ctx)?;
    let entry = state_entry(&merged, check_k.unwrap_or(0), "merge", vec![id], detail);
    write_output(
        &mut catalog,
        ctx,
        write_state(&merged),
        format!("merge-{i}-{j}.qst"),
        entry,
    )?;
    Ok(Outcome::Pass)
}

pub fn construct_tensor(
    ctx: &ConstructCtx,
    a: &str,
    b: &str,
    check_k: Option<u32>,
) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let (sa, ida) = import_state(&mut catalog, a, check_k.unwrap_or(0))?;
    let (sb, idb) = import_state(&mut catalog, b, check_k.unwrap_or(0))?;
    let out = sa.tensor_parties(&sb)?;
    let detail = verify_state_output(&out, check_k, ctx)?;
    let entry = state_entry(&out, check_k.unwrap_or(0), "tensor", vec![ida, idb], detail);
    write_output(
        &mut catalog,
        ctx,
        write_state(&out),
        format!("tensor-{}p.qst", out.party_count()),
        entry,
    )?;
    Ok(Outcome::Pass)
}

/// Local-irreducibility certificate over the `.qst` files in a directory.
pub fn cmd_certify(dir: &Path, json: bool) -> Result<Outcome> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "qst"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no .qst files in {}", dir.display());
    }
    let states: Vec<PureState> = paths
        .iter()
        .map(formats::read_state_file)
        .collect::<std::result::Result<_, CoreError>>()?;
    let cert = is_locally_irreducible_certificate(&states)?;
    if json {
        println!(
            "{}",
            json!({
                "command": "certify",
                "states": states.len(),
                "per_party_dimension": cert.per_party_dimension,
                "locally_irreducible": cert.passed(),
            })
        );
    } else {
        println!(
            "per-party solution dimensions: {:?}",
            cert.per_party_dimension
        );
        println!(
            "{}",
            if cert.passed() {
                "locally irreducible (every measurement is trivial)"
            } else {
                "NOT certified: some party admits a nontrivial measurement"
            }
        );
    }
    Ok(if cert.passed() { Outcome::Pass } else { Outcome::Fail })
}

// ---------------------------------------------------------------- shadow

pub fn cmd_shadow(dims: &[u32], json: bool) -> Result<Outcome> {
    let dv = DimVector::new(dims.to_vec()).map_err(|e| anyhow!(e))?;
    let verdict = ame_excluded(&dv).map_err(|e| anyhow!(e))?;
    if json {
        let values: Vec<String> = verdict.values.iter().map(rational_str).collect();
        println!(
            "{}",
            json!({
                "command": "shadow", "dims": dv.dims(),
                "values": values,
                "excluded": verdict.excluded,
                "first_violated": verdict.first_violated,
            })
        );
    } else {
        for (j, s) in verdict.values.iter().enumerate() {
            println!("S_{j} = {}", rational_str(s));
        }
        match verdict.first_violated {
            Some(j) => println!("verdict: EXCLUDED (S_{j} < 0)"),
            None => println!("verdict: NOT-EXCLUDED"),
        }
    }
    Ok(Outcome::Pass)
}

pub fn cmd_shadow_scan(n: usize, max_dim: u32, json: bool) -> Result<Outcome> {
    let report = scan_nonexistence(n, max_dim).map_err(|e| anyhow!(e))?;
    if json {
        let rows: Vec<serde_json::Value> = report
            .excluded
            .iter()
            .map(|(dv, j)| json!({"dims": dv.dims(), "first_violated": j}))
            .collect();
        println!(
            "{}",
            json!({
                "command": "shadow-scan", "parties": n, "max_dim": max_dim,
                "vectors_checked": report.vectors_checked,
                "excluded": rows,
            })
        );
    } else {
        println!(
            "{} vectors checked for {n} parties with dimensions up to {max_dim}",
            report.vectors_checked
        );
        println!("excluded ({}):", report.excluded.len());
        for (dv, j) in &report.excluded {
            println!("  {:24} first violated j = {j}", dv.label());
        }
    }
    Ok(Outcome::Pass)
}

// --------------------------------------------------------------- catalog

pub fn cmd_catalog_list(json: bool) -> Result<Outcome> {
    let catalog = open_catalog()?;
    if json {
        println!("{}", serde_json::to_string_pretty(catalog.entries())?);
    } else {
        for e in catalog.entries() {
            println!(
                "{}  {:6}  {:32}  {}  [{}]",
                &e.id[..12],
                format!("{:?}", e.kind).to_lowercase(),
                e.signature,
                e.verification.status,
                match &e.provenance {
                    Provenance::Builtin { name } => format!("builtin {name}"),
                    Provenance::Constructed { operation, parents } => format!(
                        "{operation} of {}",
                        parents
                            .iter()
                            .map(|p| &p[..8.min(p.len())])
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    Provenance::Imported { .. } => "imported".to_string(),
                }
            );
        }
    }
    Ok(Outcome::Pass)
}

pub fn cmd_catalog_show(id: &str, json: bool) -> Result<Outcome> {
    let catalog = open_catalog()?;
    let entry = catalog.resolve(id)?;
    if json {
        println!("{}", serde_json::to_string_pretty(entry)?);
    } else {
        println!("id:           {}", entry.id);
        println!("kind:         {:?}", entry.kind);
        println!("signature:    {}", entry.signature);
        println!("k:            {}", entry.k);
        if let Some(m) = entry.metric {
            println!("metric:       {m}");
        }
        println!("provenance:   {:?}", entry.provenance);
        println!(
            "verification: {} ({}, {})",
            entry.verification.status, entry.verification.detail, entry.verification.timestamp
        );
        println!("path:         {}", entry.path);
    }
    Ok(Outcome::Pass)
}

pub fn cmd_catalog_gc(json: bool) -> Result<Outcome> {
    let mut catalog = open_catalog()?;
    let removed = catalog.gc()?;
    if json {
        println!("{}", json!({"command": "gc", "removed": removed}));
    } else {
        println!("removed {} stale entries", removed.len());
    }
    Ok(Outcome::Pass)
}
