//! Instance files, the built-in catalog and the cyclotomic instance generator.
//!
//! Format: UTF-8, line oriented, `#` starts a comment. Sections in brackets;
//! `key = value` lines inside them.
//!
//! ```text
//! [group]
//! degree = 4
//! generators = (1 2)(3 4); (1 3)(2 4)
//! [cm]
//! H.generators = (1 3)(2 4)
//! c.perm = (1 4)(2 3)
//! F.generators = (1 2)(3 4); (1 3)(2 4)    # optional, must equal H ∪ cH
//! cmtype.cosets = 1                         # 1-based least coset elements
//! [weil]
//! mode = galois                             # or explicit
//! [nested]
//! H.generators = ()
//! ```
//!
//! An explicit `[weil]` block carries `degree`, `generators`, `A.generators`,
//! `c.lift` and `WF.generators` for the group `W`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::cm::{validate_cm, validate_totally_real, CmInstance, CmType, TotallyRealInstance};
use crate::group::{parse_perm_list, FiniteGroup, Subgroup};
use crate::perm::Perm;
use crate::weil::WeilDatum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("unknown catalog instance `{0}`")]
    UnknownCatalog(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Parse {
        line,
        message: message.into(),
    }
}

/// The `[weil]` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeilSpec {
    Galois,
    Explicit {
        degree: usize,
        generators: Vec<Perm>,
        a_generators: Vec<Perm>,
        c_lift: Perm,
        wf_generators: Vec<Perm>,
    },
}

/// A Weil datum with, when Galois-realized, the map `G → W` on element indices.
pub type RealizedDatum = (WeilDatum, Option<Vec<usize>>);

/// A parsed and validated instance file.
#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub group: FiniteGroup,
    pub cm: Option<CmInstance>,
    pub totally_real: Option<TotallyRealInstance>,
    pub cm_type: Option<CmType>,
    pub weil: Option<WeilSpec>,
    pub nested: Option<Subgroup>,
}

#[derive(Default)]
struct RawSection {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawSection {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.get(key).map(|(l, v)| (*l, v.as_str()))
    }
}

fn split_sections(text: &str) -> Result<BTreeMap<String, (usize, RawSection)>, InstanceError> {
    let mut sections: BTreeMap<String, (usize, RawSection)> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line_no, "unterminated section header"))?
                .trim()
                .to_string();
            if !matches!(name.as_str(), "group" | "cm" | "weil" | "nested") {
                return Err(parse_err(line_no, format!("unknown section [{name}]")));
            }
            if sections.contains_key(&name) {
                return Err(parse_err(line_no, format!("duplicate section [{name}]")));
            }
            sections.insert(name.clone(), (line_no, RawSection::default()));
            current = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, "expected `key = value`"))?;
        let section = current
            .as_ref()
            .ok_or_else(|| parse_err(line_no, "key outside of any section"))?;
        let entries = &mut sections.get_mut(section).expect("section exists").1.entries;
        let key = key.trim().to_string();
        if entries.contains_key(&key) {
            return Err(parse_err(line_no, format!("duplicate key `{key}`")));
        }
        entries.insert(key, (line_no, value.trim().to_string()));
    }
    Ok(sections)
}

fn perms(line: usize, degree: usize, text: &str) -> Result<Vec<Perm>, InstanceError> {
    parse_perm_list(degree, text).map_err(|e| parse_err(line, e.to_string()))
}

fn elements(line: usize, group: &FiniteGroup, text: &str) -> Result<Vec<usize>, InstanceError> {
    perms(line, group.degree(), text)?
        .iter()
        .map(|p| {
            group
                .index_of(p)
                .ok_or_else(|| parse_err(line, format!("{p} is not in the group")))
        })
        .collect()
}

fn require<'a>(
    sec: &'a RawSection,
    name: &str,
    key: &str,
    header: usize,
) -> Result<(usize, &'a str), InstanceError> {
    sec.get(key)
        .ok_or_else(|| parse_err(header, format!("[{name}] needs `{key}`")))
}

fn degree_of(line: usize, text: &str) -> Result<usize, InstanceError> {
    text.parse()
        .map_err(|_| parse_err(line, format!("bad degree `{text}`")))
}

fn nested_subgroup(
    group: &FiniteGroup,
    cm: Option<&CmInstance>,
    header: usize,
    sec: &RawSection,
) -> Result<Subgroup, InstanceError> {
    let (hl, htext) = require(sec, "nested", "H.generators", header)?;
    let hp = Subgroup::generated(group, &elements(hl, group, htext)?);
    if let Some(k) = cm {
        k.finer(&hp)
            .map_err(|e| InstanceError::Invalid(format!("[nested]: {e}")))?;
    }
    Ok(hp)
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile, InstanceError> {
        let sections = split_sections(text)?;
        let (gl, gsec) = sections
            .get("group")
            .ok_or_else(|| parse_err(1, "missing [group] section"))?;
        let (dl, dtext) = require(gsec, "group", "degree", *gl)?;
        let degree = degree_of(dl, dtext)?;
        let (genl, gentext) = require(gsec, "group", "generators", *gl)?;
        let gens = perms(genl, degree, gentext)?;
        let group = FiniteGroup::from_generators(degree, gens)
            .map_err(|e| parse_err(genl, e.to_string()))?;

        let mut cm = None;
        let mut totally_real = None;
        let mut cm_type = None;
        if let Some((cl, csec)) = sections.get("cm") {
            let (pl, ptext) = require(csec, "cm", "c.perm", *cl)?;
            let c = *elements(pl, &group, ptext)?
                .first()
                .ok_or_else(|| parse_err(pl, "c.perm is empty"))?;
            let f = match csec.get("F.generators") {
                Some((fl, ftext)) => Some((
                    fl,
                    Subgroup::generated(&group, &elements(fl, &group, ftext)?),
                )),
                None => None,
            };
            match csec.get("H.generators") {
                Some((hl, htext)) => {
                    let h = Subgroup::generated(&group, &elements(hl, &group, htext)?);
                    let k = validate_cm(&group, &h, c)
                        .map_err(|e| InstanceError::Invalid(e.to_string()))?;
                    if let Some((fl, f)) = f {
                        if f != k.f {
                            return Err(parse_err(fl, "F.generators do not generate H ∪ cH"));
                        }
                    }
                    if let Some((tl, ttext)) = csec.get("cmtype.cosets") {
                        let ids: Vec<usize> = ttext
                            .split_whitespace()
                            .map(|t| {
                                t.parse()
                                    .map_err(|_| parse_err(tl, format!("bad coset id `{t}`")))
                            })
                            .collect::<Result<_, _>>()?;
                        cm_type = Some(
                            k.cm_type_from_ids(&ids)
                                .map_err(|e| parse_err(tl, e.to_string()))?,
                        );
                    }
                    totally_real = Some(
                        k.totally_real()
                            .map_err(|e| InstanceError::Invalid(e.to_string()))?,
                    );
                    cm = Some(k);
                }
                None => {
                    let (fl, f) =
                        f.ok_or_else(|| parse_err(*cl, "[cm] needs H.generators or F.generators"))?;
                    let _ = fl;
                    totally_real = Some(
                        validate_totally_real(&group, &f, c)
                            .map_err(|e| InstanceError::Invalid(e.to_string()))?,
                    );
                }
            }
        }

        let weil = match sections.get("weil") {
            None => None,
            Some((wl, wsec)) => {
                let (ml, mode) = require(wsec, "weil", "mode", *wl)?;
                match mode {
                    "galois" => Some(WeilSpec::Galois),
                    "explicit" => {
                        let (dl, dtext) = require(wsec, "weil", "degree", *wl)?;
                        let degree = degree_of(dl, dtext)?;
                        let get = |key: &str| -> Result<Vec<Perm>, InstanceError> {
                            let (l, t) = require(wsec, "weil", key, *wl)?;
                            perms(l, degree, t)
                        };
                        let c_lift = get("c.lift")?
                            .into_iter()
                            .next()
                            .ok_or_else(|| parse_err(*wl, "c.lift is empty"))?;
                        Some(WeilSpec::Explicit {
                            degree,
                            generators: get("generators")?,
                            a_generators: get("A.generators")?,
                            c_lift,
                            wf_generators: get("WF.generators")?,
                        })
                    }
                    other => return Err(parse_err(ml, format!("unknown weil mode `{other}`"))),
                }
            }
        };

        let nested = match sections.get("nested") {
            None => None,
            Some((nl, nsec)) => Some(nested_subgroup(&group, cm.as_ref(), *nl, nsec)?),
        };

        Ok(InstanceFile {
            group,
            cm,
            totally_real,
            cm_type,
            weil,
            nested,
        })
    }

    pub fn load(path: &Path) -> Result<InstanceFile, InstanceError> {
        let text = std::fs::read_to_string(path).map_err(|e| InstanceError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Loads a catalog name or a file path.
    pub fn load_named(name_or_path: &str) -> Result<InstanceFile, InstanceError> {
        match catalog_text(name_or_path) {
            Some(text) => Self::parse(text),
            None => Self::load(Path::new(name_or_path)),
        }
    }

    /// The Weil datum of the `[weil]` block, with the projection `G → W` when
    /// Galois-realized.
    /// Reads the `[nested]` block of a separate file against this instance.
    pub fn parse_nested(&self, text: &str) -> Result<Subgroup, InstanceError> {
        let sections = split_sections(text)?;
        let (nl, nsec) = sections
            .get("nested")
            .ok_or_else(|| parse_err(1, "no [nested] section"))?;
        nested_subgroup(&self.group, self.cm.as_ref(), *nl, nsec)
    }

    pub fn weil_datum(&self) -> Result<Option<RealizedDatum>, InstanceError> {
        let invalid = |e: crate::weil::WeilError| InstanceError::Invalid(format!("[weil]: {e}"));
        match &self.weil {
            None => Ok(None),
            Some(WeilSpec::Galois) => {
                let k = self.cm.as_ref().ok_or_else(|| {
                    InstanceError::Invalid("[weil] mode = galois needs [cm] with H".into())
                })?;
                let (d, to_w) = WeilDatum::galois_realized(k).map_err(invalid)?;
                Ok(Some((d, Some(to_w))))
            }
            Some(WeilSpec::Explicit {
                degree,
                generators,
                a_generators,
                c_lift,
                wf_generators,
            }) => {
                let w = FiniteGroup::from_generators(*degree, generators.clone())
                    .map_err(|e| InstanceError::Invalid(format!("[weil]: {e}")))?;
                let idx = |p: &Perm| {
                    w.index_of(p)
                        .ok_or_else(|| InstanceError::Invalid(format!("[weil]: {p} is not in W")))
                };
                let a_idx: Vec<usize> = a_generators.iter().map(idx).collect::<Result<_, _>>()?;
                let f_idx: Vec<usize> = wf_generators.iter().map(idx).collect::<Result<_, _>>()?;
                let a = Subgroup::generated(&w, &a_idx);
                let d = WeilDatum::new(&w, &a, idx(c_lift)?, &f_idx).map_err(invalid)?;
                Ok(Some((d, None)))
            }
        }
    }

    /// Serializes back to the file format. Subgroups are written with all
    /// of their non-identity members, so the text is canonical.
    pub fn to_text(&self) -> String {
        let g = &self.group;
        let list = |xs: &[usize]| -> String {
            let parts: Vec<String> = xs
                .iter()
                .filter(|&&x| x != 0)
                .map(|&x| g.format(x))
                .collect();
            if parts.is_empty() {
                "()".into()
            } else {
                parts.join("; ")
            }
        };
        let mut out = String::new();
        let gens: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(
            out,
            "[group]\ndegree = {}\ngenerators = {}",
            g.degree(),
            gens.join("; ")
        );
        if let Some(k) = &self.cm {
            let _ = writeln!(out, "[cm]\nH.generators = {}", list(k.h.members()));
            let _ = writeln!(out, "c.perm = {}", g.format(k.c));
            let _ = writeln!(out, "F.generators = {}", list(k.f.members()));
            if let Some(phi) = &self.cm_type {
                let ids: Vec<String> = k.cm_type_ids(phi).iter().map(|i| i.to_string()).collect();
                let _ = writeln!(out, "cmtype.cosets = {}", ids.join(" "));
            }
        } else if let Some(t) = &self.totally_real {
            let _ = writeln!(
                out,
                "[cm]\nc.perm = {}\nF.generators = {}",
                g.format(t.c),
                list(t.f.members())
            );
        }
        match &self.weil {
            None => {}
            Some(WeilSpec::Galois) => out.push_str("[weil]\nmode = galois\n"),
            Some(WeilSpec::Explicit {
                degree,
                generators,
                a_generators,
                c_lift,
                wf_generators,
            }) => {
                let join = |ps: &[Perm]| {
                    ps.iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join("; ")
                };
                let _ = writeln!(
                    out,
                    "[weil]\nmode = explicit\ndegree = {degree}\ngenerators = {}\nA.generators = {}\nc.lift = {c_lift}\nWF.generators = {}",
                    join(generators),
                    join(a_generators),
                    join(wf_generators)
                );
            }
        }
        if let Some(hp) = &self.nested {
            let _ = writeln!(out, "[nested]\nH.generators = {}", list(hp.members()));
        }
        out
    }
}

const CATALOG: &[(&str, &str)] = &[
    ("zeta5", include_str!("../catalog/zeta5.inst")),
    ("zeta8", include_str!("../catalog/zeta8.inst")),
    ("zeta15", include_str!("../catalog/zeta15.inst")),
    (
        "zeta5-in-zeta15",
        include_str!("../catalog/zeta5-in-zeta15.inst"),
    ),
    ("dihedral8", include_str!("../catalog/dihedral8.inst")),
];

pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(n, _)| *n).collect()
}

pub fn catalog_text(name: &str) -> Option<&'static str> {
    CATALOG.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load_catalog(name: &str) -> Result<InstanceFile, InstanceError> {
    let text = catalog_text(name).ok_or_else(|| InstanceError::UnknownCatalog(name.to_string()))?;
    InstanceFile::parse(text)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Units modulo `n` in increasing order; point `i` stands for `units[i]`.
pub fn units_mod(n: u64) -> Vec<u64> {
    (1..n.max(2)).filter(|&a| gcd(a, n) == 1).collect()
}

/// Multiplication by `a` on the units modulo `n`.
pub fn mult_perm(n: u64, a: u64) -> Result<Perm, InstanceError> {
    let units = units_mod(n);
    if gcd(a % n, n) != 1 {
        return Err(InstanceError::Invalid(format!(
            "{a} is not a unit modulo {n}"
        )));
    }
    let images = units
        .iter()
        .map(|&u| units.binary_search(&(u * a % n)).expect("units are closed"))
        .collect();
    Ok(Perm::from_images(images).expect("multiplication permutes units"))
}

/// Parameters for an instance modelling a subfield of `Q(ζ_n)`.
#[derive(Clone, Debug, Default)]
pub struct CyclotomicSpec {
    pub modulus: u64,
    /// Residues generating `(Z/n)^×`; chosen greedily when empty.
    pub generators: Vec<u64>,
    pub h_residues: Vec<u64>,
    pub c_residue: u64,
    /// CM type as residues, one from each conjugate pair; first type when empty.
    pub cm_type_residues: Vec<u64>,
    pub nested_h_residues: Option<Vec<u64>>,
    pub galois_weil: bool,
    pub title: Option<String>,
}

fn greedy_generators(n: u64) -> Vec<u64> {
    let mut span = vec![1u64];
    let mut gens = Vec::new();
    for a in units_mod(n) {
        if span.contains(&a) {
            continue;
        }
        gens.push(a);
        let mut i = 0;
        while i < span.len() {
            for &g in &gens {
                let y = span[i] * g % n;
                if !span.contains(&y) {
                    span.push(y);
                }
            }
            i += 1;
        }
    }
    gens
}

/// Writes an instance file for a cyclotomic model and checks that it parses.
pub fn cyclotomic_instance(spec: &CyclotomicSpec) -> Result<String, InstanceError> {
    let n = spec.modulus;
    if n < 3 {
        return Err(InstanceError::Invalid("modulus must be at least 3".into()));
    }
    let units = units_mod(n);
    let gens = if spec.generators.is_empty() {
        greedy_generators(n)
    } else {
        spec.generators.clone()
    };
    let cycles = |rs: &[u64]| -> Result<String, InstanceError> {
        let ps: Vec<String> = rs
            .iter()
            .map(|&r| mult_perm(n, r).map(|p| p.to_string()))
            .collect::<Result<_, _>>()?;
        Ok(if ps.is_empty() {
            "()".into()
        } else {
            ps.join("; ")
        })
    };
    let mut out = String::new();
    if let Some(t) = &spec.title {
        let _ = writeln!(out, "# {t}");
    }
    let pts: Vec<String> = units.iter().map(|u| u.to_string()).collect();
    let _ = writeln!(out, "# points are the units mod {n}: {}", pts.join(" "));
    let _ = writeln!(out, "[group]\ndegree = {}", units.len());
    let _ = writeln!(
        out,
        "generators = {}  # multiplication by {:?}",
        cycles(&gens)?,
        gens
    );
    let _ = writeln!(out, "[cm]");
    let _ = writeln!(
        out,
        "H.generators = {}  # {:?}",
        cycles(&spec.h_residues)?,
        spec.h_residues
    );
    let _ = writeln!(out, "c.perm = {}", cycles(&[spec.c_residue])?);

    // Resolve the CM type through a parse of what has been written so far.
    let draft = InstanceFile::parse(&out)?;
    let k = draft
        .cm
        .as_ref()
        .ok_or_else(|| InstanceError::Invalid("no CM structure".into()))?;
    let mut f_res = spec.h_residues.clone();
    f_res.push(spec.c_residue);
    let _ = writeln!(out, "F.generators = {}", cycles(&f_res)?);
    let phi = if spec.cm_type_residues.is_empty() {
        k.enumerate_cm_types().swap_remove(0)
    } else {
        let mut members = Vec::new();
        for &r in &spec.cm_type_residues {
            let e = draft
                .group
                .index_of(&mult_perm(n, r)?)
                .ok_or_else(|| InstanceError::Invalid(format!("{r} is not in the group")))?;
            members.push(k.sigma_k.pos(e));
        }
        members.sort_unstable();
        members.dedup();
        let phi = CmType { members };
        k.check_cm_type(&phi)
            .map_err(|e| InstanceError::Invalid(e.to_string()))?;
        phi
    };
    let ids: Vec<String> = k.cm_type_ids(&phi).iter().map(|i| i.to_string()).collect();
    let _ = writeln!(out, "cmtype.cosets = {}", ids.join(" "));
    if spec.galois_weil {
        let _ = writeln!(out, "[weil]\nmode = galois");
    }
    if let Some(hp) = &spec.nested_h_residues {
        let _ = writeln!(out, "[nested]\nH.generators = {}  # {:?}", cycles(hp)?, hp);
    }
    InstanceFile::parse(&out)?;
    Ok(out)
}

/// Generator parameters of the shipped cyclotomic catalog files.
pub fn catalog_spec(name: &str) -> Option<CyclotomicSpec> {
    let spec = match name {
        "zeta5" => CyclotomicSpec {
            modulus: 5,
            generators: vec![2],
            h_residues: vec![],
            c_residue: 4,
            cm_type_residues: vec![1, 2],
            nested_h_residues: None,
            galois_weil: true,
            title: Some("Q(zeta_5) with K = E = Q(zeta_5) and F = Q(sqrt 5)".into()),
        },
        "zeta8" => CyclotomicSpec {
            modulus: 8,
            generators: vec![3, 5],
            h_residues: vec![5],
            c_residue: 7,
            cm_type_residues: vec![1],
            nested_h_residues: None,
            galois_weil: true,
            title: Some("Q(zeta_8) with K = Q(i) and F = Q".into()),
        },
        "zeta15" => CyclotomicSpec {
            modulus: 15,
            generators: vec![2, 14],
            h_residues: vec![11],
            c_residue: 14,
            cm_type_residues: vec![1, 2],
            nested_h_residues: Some(vec![]),
            galois_weil: true,
            title: Some(
                "Q(zeta_15) with K = Q(zeta_5), F = Q(sqrt 5); nested K' = Q(zeta_15)".into(),
            ),
        },
        "zeta5-in-zeta15" => CyclotomicSpec {
            modulus: 45,
            generators: vec![],
            h_residues: vec![11],
            c_residue: 44,
            cm_type_residues: vec![],
            nested_h_residues: Some(vec![16]),
            galois_weil: true,
            title: Some("Q(zeta_45) with E = K = Q(zeta_5) inside E' = K' = Q(zeta_15)".into()),
        },
        _ => return None,
    };
    Some(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_fails_on_line_one() {
        assert_eq!(
            InstanceFile::parse("").unwrap_err(),
            InstanceError::Parse {
                line: 1,
                message: "missing [group] section".into()
            }
        );
    }

    #[test]
    fn units_mod_fifteen() {
        assert_eq!(units_mod(15), vec![1, 2, 4, 7, 8, 11, 13, 14]);
        assert_eq!(mult_perm(8, 3).unwrap().to_string(), "(1 2)(3 4)");
    }
}
