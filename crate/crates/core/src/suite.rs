//! Named checks over an instance, grouped into suites, with a deterministic
//! text or JSON report.

use std::cell::OnceCell;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cm::{CmInstance, TotallyRealInstance};
use crate::extension::{
    perturb, two_cocycle_from_lift, verify_coboundary_change, verify_cocycle, verify_invariance,
    verify_lift_change, verify_two_cocycle, CocycleMap, GammaModule, M0Choice, ModuleMap, Report,
    TwistedExtension,
};
use crate::group::{
    abelianization, cap_from_env, commutator_subgroup, CosetSection, FiniteGroup, LeftCosets,
    Subgroup, Transfer,
};
use crate::half_transfer::HalfTransfer;
use crate::instance::{InstanceFile, RealizedDatum};
use crate::lattice::{CharacterVector, SerreLattice};
use crate::linalg;
use crate::plectic::{plectic_order, PlecticElement, PlecticGroup};
use crate::weil::{reflex_comparison, Diagonal, NormPush, WeilDatum, WeilSection};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Plectic,
    HalfTransfer,
    Lattice,
    Taniyama,
    Extension,
    All,
}

impl std::str::FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "plectic" => SuiteName::Plectic,
            "halftransfer" => SuiteName::HalfTransfer,
            "lattice" => SuiteName::Lattice,
            "taniyama" => SuiteName::Taniyama,
            "extension" => SuiteName::Extension,
            "all" => SuiteName::All,
            other => return Err(format!("unknown suite `{other}`")),
        })
    }
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Plectic => "plectic",
            SuiteName::HalfTransfer => "halftransfer",
            SuiteName::Lattice => "lattice",
            SuiteName::Taniyama => "taniyama",
            SuiteName::Extension => "extension",
            SuiteName::All => "all",
        }
    }
}

/// Parts of the Taniyama suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaniyamaPart {
    Independence,
    Galois,
    Cocycle,
    Norm,
    Reflex,
    All,
}

impl std::str::FromStr for TaniyamaPart {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "independence" => TaniyamaPart::Independence,
            "galois" => TaniyamaPart::Galois,
            "cocycle" => TaniyamaPart::Cocycle,
            "norm" => TaniyamaPart::Norm,
            "reflex" => TaniyamaPart::Reflex,
            "all" => TaniyamaPart::All,
            other => return Err(format!("unknown taniyama suite `{other}`")),
        })
    }
}

impl TaniyamaPart {
    fn includes(self, part: TaniyamaPart) -> bool {
        self == TaniyamaPart::All || self == part
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Sample this many elements in the main loops instead of all of them.
    pub sample: Option<usize>,
    pub seed: u64,
    /// Record wall time per check.
    pub timing: bool,
    pub m0: M0Choice,
    pub taniyama: TaniyamaPart,
    /// Overrides the `[nested]` subgroup of the instance.
    pub nested: Option<Subgroup>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            sample: None,
            seed: 0,
            timing: false,
            m0: M0Choice::Trivial,
            taniyama: TaniyamaPart::All,
            nested: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub property: String,
    pub status: Status,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub instance: String,
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance {} / suite {}", self.instance, self.suite);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(out, "{status} {:<34} {:>9} cases", c.name, c.cases);
            if let Some(ms) = c.wall_ms {
                let _ = write!(out, "  {ms} ms");
            }
            out.push('\n');
            if verbose {
                let _ = writeln!(out, "     {}", c.property);
            }
            if let Some(d) = &c.detail {
                if verbose || c.status != Status::Pass {
                    let _ = writeln!(out, "     {d}");
                }
            }
        }
        let _ = writeln!(
            out,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

enum Outcome {
    Done(Report),
    /// Passed, with a note (e.g. that a sample was used).
    Noted(Report, String),
    Skipped(String),
}

type CheckResult = Result<Outcome, String>;

/// Checks needing more cases than this are skipped unless `--sample` is given.
pub const DEFAULT_CHECK_CAP: usize = 20_000_000;

struct Runner<'a> {
    inst: &'a InstanceFile,
    opts: &'a Options,
    checks: Vec<Check>,
    tr: Option<TotallyRealInstance>,
    nested: Option<Subgroup>,
    plectic: OnceCell<Result<PlecticGroup, String>>,
    weil: OnceCell<Result<Option<RealizedDatum>, String>>,
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

impl<'a> Runner<'a> {
    fn new(inst: &'a InstanceFile, opts: &'a Options) -> Self {
        let tr = match (&inst.cm, &inst.totally_real) {
            (_, Some(t)) => Some(t.clone()),
            (Some(k), None) => k.totally_real().ok(),
            _ => None,
        };
        Runner {
            inst,
            opts,
            checks: Vec::new(),
            tr,
            nested: opts.nested.clone().or_else(|| inst.nested.clone()),
            plectic: OnceCell::new(),
            weil: OnceCell::new(),
        }
    }

    fn run(&mut self, name: &str, property: &str, f: impl FnOnce(&Self) -> CheckResult) {
        let start = Instant::now();
        let result = f(self);
        let wall_ms = self.opts.timing.then(|| start.elapsed().as_millis() as u64);
        let (status, cases, detail) = match result {
            Ok(Outcome::Done(r)) | Ok(Outcome::Noted(r, _)) if r.witness.is_some() => {
                (Status::Fail, r.cases, r.witness)
            }
            Ok(Outcome::Done(r)) => (Status::Pass, r.cases, None),
            Ok(Outcome::Noted(r, note)) => (Status::Pass, r.cases, Some(note)),
            Ok(Outcome::Skipped(why)) => (Status::Skipped, 0, Some(why)),
            Err(e) => (Status::Fail, 0, Some(e)),
        };
        self.checks.push(Check {
            name: name.into(),
            property: property.into(),
            status,
            cases,
            detail,
            wall_ms,
        });
    }

    fn cm(&self) -> Result<&CmInstance, String> {
        self.inst
            .cm
            .as_ref()
            .ok_or_else(|| "instance has no [cm] block".to_string())
    }

    fn tr(&self) -> Result<&TotallyRealInstance, String> {
        self.tr
            .as_ref()
            .ok_or_else(|| "instance has no totally real field".to_string())
    }

    fn plectic(&self) -> Result<&PlecticGroup, String> {
        self.plectic
            .get_or_init(|| {
                let tr = self.tr()?;
                PlecticGroup::enumerate(&tr.f).map_err(err)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn weil(&self) -> Result<&RealizedDatum, String> {
        self.weil
            .get_or_init(|| self.inst.weil_datum().map_err(err))
            .as_ref()
            .map_err(Clone::clone)?
            .as_ref()
            .ok_or_else(|| "instance has no [weil] block".to_string())
    }

    /// Indices `0..n`, or a sorted sample of `--sample N` of them.
    fn pick(&self, n: usize) -> Vec<usize> {
        match self.opts.sample {
            Some(k) if k < n => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
                let mut v = sample(&mut rng, n, k).into_vec();
                v.sort_unstable();
                v
            }
            _ => (0..n).collect(),
        }
    }

    /// All of `0..n` when `n · per_item` fits the cap, or the `--sample`
    /// subset with a note; otherwise the reason to skip.
    fn budget(&self, n: usize, per_item: usize) -> Result<(Vec<usize>, Option<String>), String> {
        if let Some(k) = self.opts.sample.filter(|&k| k < n) {
            let note = format!("sampled {k} of {n} items with seed {}", self.opts.seed);
            return Ok((self.pick(n), Some(note)));
        }
        let cap = cap_from_env(DEFAULT_CHECK_CAP);
        let work = n.saturating_mul(per_item.max(1));
        if work > cap {
            return Err(format!("{work} cases exceed the cap {cap}"));
        }
        Ok(((0..n).collect(), None))
    }
}

/// Skips a check when a precondition is unavailable.
macro_rules! need {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(why) => return Ok(Outcome::Skipped(why)),
        }
    };
}

pub fn run_suite(
    inst: &InstanceFile,
    label: &str,
    suite: SuiteName,
    opts: &Options,
) -> SuiteReport {
    let mut r = Runner::new(inst, opts);
    let all = suite == SuiteName::All;
    if all || suite == SuiteName::Plectic {
        group_checks(&mut r);
        plectic_checks(&mut r);
    }
    if all || suite == SuiteName::HalfTransfer {
        halftransfer_checks(&mut r);
    }
    if all || suite == SuiteName::Lattice {
        lattice_checks(&mut r);
    }
    if all || suite == SuiteName::Taniyama {
        taniyama_checks(&mut r);
    }
    if all || suite == SuiteName::Extension {
        extension_checks(&mut r);
    }
    SuiteReport {
        instance: label.into(),
        suite: suite.as_str().into(),
        checks: r.checks,
    }
}

fn group_checks(r: &mut Runner) {
    r.run(
        "group.axioms",
        "multiplication table agrees with composition; identity, inverses, associativity",
        |r| {
            let mut groups: Vec<(&str, FiniteGroup)> = vec![("G", r.inst.group.clone())];
            if let Ok((d, _)) = r.weil() {
                groups.push(("W", d.w.clone()));
                groups.push(("Γ", d.gamma.clone()));
            }
            let mut rep = Report::new();
            let mut note = None;
            for (label, g) in groups {
                let n = g.order();
                for x in 0..n {
                    rep.case(g.mul(0, x) == x && g.mul(x, 0) == x, || {
                        format!("{label}: identity law at {}", g.format(x))
                    });
                    rep.case(g.mul(x, g.inv(x)) == 0, || {
                        format!("{label}: inverse law at {}", g.format(x))
                    });
                }
                // the table agrees with composition everywhere, and composition is
                // associative; triples are checked in full while they fit the cap
                for a in 0..n {
                    for b in 0..n {
                        let p = g.element(a).compose(g.element(b));
                        rep.case(g.index_of(&p) == Some(g.mul(a, b)), || {
                            format!("{label}: table disagrees with composition at ({a}, {b})")
                        });
                    }
                }
                if n.pow(3) <= cap_from_env(DEFAULT_CHECK_CAP) {
                    for a in 0..n {
                        for b in 0..n {
                            let ab = g.mul(a, b);
                            for c in 0..n {
                                rep.case(g.mul(ab, c) == g.mul(a, g.mul(b, c)), || {
                                    format!("{label}: associativity at ({a}, {b}, {c})")
                                });
                            }
                        }
                    }
                } else {
                    note = Some(format!(
                        "{label}: associativity follows from agreement with composition"
                    ));
                }
            }
            Ok(match note {
                Some(n) => Outcome::Noted(rep, n),
                None => Outcome::Done(rep),
            })
        },
    );
    r.run(
        "group.transfer-sections",
        "the transfer to the abelianized subgroup does not depend on the coset section",
        |r| {
            let mut pairs: Vec<(Subgroup, Subgroup)> = Vec::new();
            if let Ok(k) = r.cm() {
                pairs.push((k.f.clone(), k.h.clone()));
                if let Some(n) = &r.nested {
                    pairs.push((k.h.clone(), n.clone()));
                }
            }
            pairs.retain(|(big, small)| {
                small.is_subgroup_of(big) && big.order() / small.order() <= 4 && small.order() <= 8
            });
            if pairs.is_empty() {
                return Ok(Outcome::Skipped(
                    "no nested pair of index ≤ 4 with |H'| ≤ 8".into(),
                ));
            }
            let mut rep = Report::new();
            for (big, small) in pairs {
                let t = Transfer::new(&big, &small).map_err(err)?;
                let sections = CosetSection::all(t.cosets());
                for &h in big.members() {
                    let v0 = t.apply(h, &sections[0]).map_err(err)?;
                    for s in &sections[1..] {
                        rep.case(t.apply(h, s).map_err(err)? == v0, || {
                            format!(
                                "transfer of {} depends on the section",
                                big.group().format(h)
                            )
                        });
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "group.abelianization",
        "abelianization is an abelian quotient by a homomorphism whose kernel is the commutator subgroup",
        |r| {
            let mut subs = vec![("G", Subgroup::whole(&r.inst.group))];
            if let Ok(k) = r.cm() {
                subs.push(("H", k.h.clone()));
                subs.push(("Γ_F", k.f.clone()));
            }
            if let Some(n) = &r.nested {
                subs.push(("H'", n.clone()));
            }
            let mut rep = Report::new();
            for (label, s) in subs {
                let q = abelianization(&s);
                let g = s.group();
                rep.case(q.is_abelian(), || format!("{label}^ab is not abelian"));
                for &a in s.members() {
                    for &b in s.members() {
                        let lhs = q.project(g.mul(a, b));
                        let rhs = q.mul(q.project(a).unwrap(), q.project(b).unwrap());
                        rep.case(lhs == Some(rhs), || format!("{label}: projection not multiplicative"));
                    }
                }
                // independent closure of all commutators
                let comms: Vec<usize> = s
                    .members()
                    .iter()
                    .flat_map(|&a| s.members().iter().map(move |&b| g.commutator(a, b)))
                    .collect();
                let oracle = Subgroup::generated(g, &comms);
                let kernel: Vec<usize> = s.members().iter().copied().filter(|&x| q.project(x) == Some(q.identity())).collect();
                rep.case(oracle.members() == kernel.as_slice(), || format!("{label}: kernel differs from the commutator closure"));
                rep.case(commutator_subgroup(&s) == oracle, || format!("{label}: commutator subgroup differs from the closure"));
            }
            Ok(Outcome::Done(rep))
        },
    );
}

fn plectic_checks(r: &mut Runner) {
    r.run(
        "plectic.wreath-isomorphism",
        "wreath coordinates are a bijective homomorphism onto S_X ⋉ H^X for every section",
        |r| {
            let pg = need!(r.plectic());
            let g = pg.subgroup().group();
            let cos = pg.cosets();
            let mut rep = Report::new();
            rep.case(plectic_order(pg.subgroup()) == Some(pg.order()), || {
                "enumerated order differs from |X|!·|H|^|X|".into()
            });
            let sections = CosetSection::all(cos);
            let elems = r.pick(pg.order());
            for s in &sections {
                let wr: Vec<_> = pg
                    .elements()
                    .iter()
                    .map(|a| a.to_wreath(cos, s))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                let distinct: HashSet<_> = wr.iter().collect();
                rep.case(distinct.len() == pg.order(), || {
                    "wreath coordinates are not injective".into()
                });
                for &a in &elems {
                    let back =
                        PlecticElement::from_wreath(pg.subgroup(), cos, s, &wr[a]).map_err(err)?;
                    rep.case(back.mapping() == pg.element(a).mapping(), || {
                        format!("round trip fails for element #{a}")
                    });
                    for b in 0..pg.order() {
                        rep.case(wr[pg.mul(a, b)] == wr[a].compose(&wr[b], g), || {
                            format!("not multiplicative at (#{a}, #{b})")
                        });
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "plectic.section-change",
        "changing the section s to st conjugates wreath coordinates by (1, t)",
        |r| {
            let pg = need!(r.plectic());
            let g = pg.subgroup().group();
            let cos = pg.cosets();
            let sections = CosetSection::all(cos);
            let elems = r.pick(pg.order());
            let wreaths: Vec<Vec<_>> = sections
                .iter()
                .map(|s| {
                    elems
                        .iter()
                        .map(|&a| pg.element(a).to_wreath(cos, s))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let mut rep = Report::new();
            for (i, s) in sections.iter().enumerate() {
                for (k, s2) in sections.iter().enumerate() {
                    let t: Vec<usize> = s
                        .reps
                        .iter()
                        .zip(&s2.reps)
                        .map(|(&a, &b)| g.mul(g.inv(a), b))
                        .collect();
                    for (e, w) in wreaths[i].iter().enumerate() {
                        rep.case(wreaths[k][e] == w.conjugate_by(&t, g), || {
                            format!("section change fails for element #{}", elems[e])
                        });
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "plectic.left-translation",
        "left translation is an injective homomorphism G → G#H; G#G is G itself",
        |r| {
            let pg = need!(r.plectic());
            let sub = pg.subgroup();
            let g = sub.group();
            let mut rep = Report::new();
            let ls: Vec<PlecticElement> = (0..g.order())
                .map(|x| PlecticElement::left_translate(sub, x))
                .collect();
            let distinct: HashSet<&[usize]> = ls.iter().map(|l| l.mapping()).collect();
            rep.case(distinct.len() == g.order(), || {
                "left translation is not injective".into()
            });
            for a in 0..g.order() {
                rep.case(pg.index_of(&ls[a]).is_some(), || {
                    format!("L_{} is not in G#H", g.format(a))
                });
                for b in 0..g.order() {
                    let c = ls[a].compose(&ls[b]).map_err(err)?;
                    rep.case(c.mapping() == ls[g.mul(a, b)].mapping(), || {
                        format!(
                            "L is not multiplicative at ({}, {})",
                            g.format(a),
                            g.format(b)
                        )
                    });
                }
            }
            rep.case(pg.order() % g.order() == 0, || {
                "|G| does not divide |G#H|".into()
            });
            rep.case(
                plectic_order(&Subgroup::whole(g)) == Some(g.order()),
                || "|G#G| ≠ |G|".into(),
            );
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "plectic.finer-coordinates",
        "wreath coordinates over H' ≤ H follow from those over H and nested sections s_x t_y",
        |r| {
            let pg = need!(r.plectic());
            let k = need!(r.cm());
            let g = &k.group;
            let f = pg.subgroup();
            let coarse = pg.cosets();
            let fine = &k.sigma_k;
            let inner = LeftCosets::within(f, &k.h).map_err(err)?;
            let s_all = CosetSection::all(coarse);
            let t_all = CosetSection::all(&inner);
            let (elems, note) = need!(r.budget(pg.order(), s_all.len() * t_all.len()));
            let mut rep = Report::new();
            for &a in &elems {
                let alpha = pg.element(a);
                let finer = alpha.include_into_finer(&k.h).map_err(err)?;
                for s in &s_all {
                    let wr = alpha.to_wreath(coarse, s).map_err(err)?;
                    for t in &t_all {
                        let mut reps = vec![0; fine.len()];
                        for x in 0..coarse.len() {
                            for y in 0..inner.len() {
                                let e = g.mul(s.reps[x], t.reps[y]);
                                reps[fine.pos(e)] = e;
                            }
                        }
                        let st = CosetSection { reps };
                        let wf = finer.to_wreath(fine, &st).map_err(err)?;
                        for x in 0..coarse.len() {
                            let hx = wr.h[x];
                            for y in 0..inner.len() {
                                let p = fine.pos(g.mul(s.reps[x], t.reps[y]));
                                let hy = inner.act(hx, y);
                                let pi = fine.pos(g.mul(s.reps[wr.pi[x]], t.reps[hy]));
                                let h = g.product([g.inv(t.reps[hy]), hx, t.reps[y]]);
                                rep.case(wf.pi[p] == pi && wf.h[p] == h, || {
                                    format!("finer coordinates fail for element #{a} at coset ({x}, {y})")
                                });
                            }
                        }
                    }
                }
            }
            Ok(match note {
                Some(n) => Outcome::Noted(rep, n),
                None => Outcome::Done(rep),
            })
        },
    );
    r.run(
        "plectic.transport",
        "[u]α has coordinates π'(xu⁻¹) = π(x)u⁻¹ and h' = u h u⁻¹; it depends only on uH",
        |r| {
            let pg = need!(r.plectic());
            let f = pg.subgroup();
            let g = f.group();
            let cos = pg.cosets();
            let sections = CosetSection::all(cos);
            let (elems, note) = need!(r.budget(pg.order(), g.order() * sections.len()));
            let mut rep = Report::new();
            for u in 0..g.order() {
                let ui = g.inv(u);
                let cos2 = LeftCosets::of(&f.conjugate(u));
                let moved: Vec<CosetSection> = sections
                    .iter()
                    .map(|s| {
                        let mut reps = vec![0; cos2.len()];
                        for &x in &s.reps {
                            let e = g.mul(x, ui);
                            reps[cos2.pos(e)] = e;
                        }
                        CosetSection { reps }
                    })
                    .collect();
                for &a in &elems {
                    let alpha = pg.element(a);
                    let beta = alpha.conjugate_transport(u);
                    if f.contains(u) {
                        rep.case(beta.mapping() == alpha.mapping(), || {
                            format!("[u]α ≠ α for u = {} in H", g.format(u))
                        });
                    }
                    for (s, s2) in sections.iter().zip(&moved) {
                        let w = alpha.to_wreath(cos, s).map_err(err)?;
                        let w2 = beta.to_wreath(&cos2, s2).map_err(err)?;
                        for x in 0..cos.len() {
                            let p = cos2.pos(g.mul(s.reps[x], ui));
                            let pi = cos2.pos(g.mul(s.reps[w.pi[x]], ui));
                            rep.case(w2.pi[p] == pi && w2.h[p] == g.conj(u, w.h[x]), || {
                                format!(
                                    "transport coordinates fail for element #{a}, u = {}",
                                    g.format(u)
                                )
                            });
                        }
                    }
                }
            }
            Ok(match note {
                Some(n) => Outcome::Noted(rep, n),
                None => Outcome::Done(rep),
            })
        },
    );
    r.run(
        "plectic.cm-type-action",
        "every element of G#Γ_F carries CM types to CM types",
        |r| {
            let pg = need!(r.plectic());
            let k = need!(r.cm());
            let mut rep = Report::new();
            for &a in &r.pick(pg.order()) {
                for phi in k.enumerate_cm_types() {
                    let moved = k.act_on_cm_type(pg.element(a), &phi);
                    rep.case(k.check_cm_type(&moved).is_ok(), || {
                        format!("element #{a} breaks CM type {:?}", k.cm_type_ids(&phi))
                    });
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
}

fn halftransfer_checks(r: &mut Runner) {
    r.run(
        "cm.structure",
        "c has no fixed points on Σ_K; Γ_F is totally real; type and section counts; types transport under conjugation",
        |r| {
            let k = need!(r.cm());
            let g = &k.group;
            let n = k.sigma_k.len();
            let mut rep = Report::new();
            for rho in 0..n {
                rep.case(k.conj_pos(rho) != rho, || format!("c fixes coset {}", k.sigma_k.id(rho) + 1));
            }
            rep.case(k.totally_real().is_ok(), || "H ∪ cH is not totally real".into());
            let types = k.enumerate_cm_types();
            let distinct: HashSet<_> = types.iter().collect();
            rep.case(types.len() == 1 << (n / 2) && distinct.len() == types.len(), || "wrong number of CM types".into());
            for phi in &types {
                rep.case(k.check_cm_type(phi).is_ok(), || "enumerated CM type is invalid".into());
            }
            let sections = k.enumerate_sections();
            rep.case(sections.len() == k.h.order().pow((n / 2) as u32), || "section count differs from |H|^{n/2}".into());
            for w in &sections {
                rep.case(k.check_section(w).is_ok(), || "enumerated section is invalid".into());
            }
            for u in 0..g.order() {
                let conj = k.conjugate(u).map_err(err)?;
                for phi in &types {
                    let moved = k.transported_cm_type(phi, u, &conj);
                    rep.case(conj.check_cm_type(&moved).is_ok(), || format!("Φu⁻¹ is not a CM type for u = {}", g.format(u)));
                }
            }
            if let Some(h2) = &r.nested {
                let fine = k.finer(h2).map_err(err)?;
                for phi in &types {
                    let induced = k.induced_cm_type(phi, &fine).map_err(err)?;
                    rep.case(
                        fine.check_cm_type(&induced).is_ok()
                            && induced.members.len() == phi.members.len() * (k.h.order() / h2.order()),
                        || "induced CM type is invalid".into(),
                    );
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "halftransfer.section-independence",
        "F_Φ(α) is the same for every conjugation-compatible section",
        |r| {
            let k = need!(r.cm());
            let pg = need!(r.plectic());
            let ht = HalfTransfer::new(k);
            let sections = k.enumerate_sections();
            let mut rep = Report::new();
            for &a in &r.pick(pg.order()) {
                for phi in k.enumerate_cm_types() {
                    let v0 = ht.plectic(&phi, pg.element(a), &sections[0]).map_err(err)?;
                    for w in &sections[1..] {
                        rep.case(
                            ht.plectic(&phi, pg.element(a), w).map_err(err)? == v0,
                            || {
                                format!(
                                    "element #{a}, Φ = {:?}: value depends on the section",
                                    k.cm_type_ids(&phi)
                                )
                            },
                        );
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "halftransfer.wreath-formula",
        "the wreath-coordinate product formula equals F_Φ(α) for every section of G/Γ_F",
        |r| {
            let k = need!(r.cm());
            let pg = need!(r.plectic());
            let ht = HalfTransfer::new(k);
            let w = k.canonical_section();
            let sections = CosetSection::all(&k.sigma_f);
            let mut rep = Report::new();
            for &a in &r.pick(pg.order()) {
                let alpha = pg.element(a);
                for phi in k.enumerate_cm_types() {
                    let v = ht.plectic(&phi, alpha, &w).map_err(err)?;
                    for s in &sections {
                        let wr = alpha.to_wreath(&k.sigma_f, s).map_err(err)?;
                        let n = ht.nekovar(&k.bits_of(&phi, s), &wr, s).map_err(err)?;
                        rep.case(n == v, || {
                            format!(
                                "element #{a}, Φ = {:?}: formula disagrees",
                                k.cm_type_ids(&phi)
                            )
                        });
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "halftransfer.wreath-formula-sections",
        "the wreath-coordinate formula does not depend on the section of G/Γ_F",
        |r| {
            let k = need!(r.cm());
            let pg = need!(r.plectic());
            let ht = HalfTransfer::new(k);
            let sections = CosetSection::all(&k.sigma_f);
            let mut rep = Report::new();
            for &a in &r.pick(pg.order()) {
                let alpha = pg.element(a);
                for phi in k.enumerate_cm_types() {
                    let mut first = None;
                    for s in &sections {
                        let wr = alpha.to_wreath(&k.sigma_f, s).map_err(err)?;
                        let n = ht.nekovar(&k.bits_of(&phi, s), &wr, s).map_err(err)?;
                        let v0 = *first.get_or_insert(n);
                        rep.case(n == v0, || {
                            format!("element #{a}: formula depends on the section")
                        });
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "halftransfer.translations",
        "on left translations F_Φ(L_g) is Tate's half-transfer of g",
        |r| {
            let k = need!(r.cm());
            let ht = HalfTransfer::new(k);
            let g = &k.group;
            let mut rep = Report::new();
            for x in 0..g.order() {
                let l = PlecticElement::left_translate(&k.f, x);
                for phi in k.enumerate_cm_types() {
                    for w in k.enumerate_sections() {
                        let a = ht.plectic(&phi, &l, &w).map_err(err)?;
                        let b = ht.tate(&phi, x, &w).map_err(err)?;
                        rep.case(a == b, || {
                            format!("g = {}: plectic and Tate values differ", g.format(x))
                        });
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "halftransfer.transfer-diagram",
        "Ver(F_Φ(α)) = F_Φ'(α) for K ⊂ K' given by H' ≤ H, with Φ' induced from Φ",
        |r| {
            let k = need!(r.cm());
            let h2 = need!(r
                .nested
                .clone()
                .ok_or_else(|| "instance has no [nested] subgroup".to_string()));
            let fine = k.finer(&h2).map_err(err)?;
            let ht = HalfTransfer::new(k);
            let ht2 = HalfTransfer::new(&fine);
            let ver = Transfer::new(&k.h, &h2).map_err(err)?;
            let pg = PlecticGroup::enumerate(&k.f).map_err(err)?;
            let (w, w2) = (k.canonical_section(), fine.canonical_section());
            let mut rep = Report::new();
            for &a in &r.pick(pg.order()) {
                let alpha = pg.element(a);
                let alpha2 = alpha.include_into_finer(&fine.f).map_err(err)?;
                for phi in k.enumerate_cm_types() {
                    let phi2 = k.induced_cm_type(&phi, &fine).map_err(err)?;
                    let v = ht.hab.lift(ht.plectic(&phi, alpha, &w).map_err(err)?);
                    let left = ver.target().lift(ver.apply_canonical(v).map_err(err)?);
                    let right = ht2.hab.lift(ht2.plectic(&phi2, &alpha2, &w2).map_err(err)?);
                    rep.case(ht2.hab.project(left) == ht2.hab.project(right), || {
                        format!(
                            "element #{a}, Φ = {:?}: transfer square fails",
                            k.cm_type_ids(&phi)
                        )
                    });
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "halftransfer.conjugation-diagram",
        "u F_Φ(α) u⁻¹ = F_{Φu⁻¹}([u]α) for every u ∈ G",
        |r| {
            let k = need!(r.cm());
            let pg = need!(r.plectic());
            let g = &k.group;
            let ht = HalfTransfer::new(k);
            let w = k.canonical_section();
            let (elems, note) = need!(r.budget(pg.order(), g.order() * k.cm_type_count()));
            let mut rep = Report::new();
            for u in 0..g.order() {
                let conj = k.conjugate(u).map_err(err)?;
                let ht2 = HalfTransfer::new(&conj);
                let w2 = conj.canonical_section();
                for &a in &elems {
                    let alpha = pg.element(a);
                    let beta = alpha.conjugate_transport(u);
                    for phi in k.enumerate_cm_types() {
                        let phi2 = k.transported_cm_type(&phi, u, &conj);
                        let left =
                            g.conj(u, ht.hab.lift(ht.plectic(&phi, alpha, &w).map_err(err)?));
                        let right = ht2.plectic(&phi2, &beta, &w2).map_err(err)?;
                        rep.case(ht2.hab.project(left) == Some(right), || {
                            format!(
                                "u = {}, element #{a}: conjugation square fails",
                                g.format(u)
                            )
                        });
                    }
                }
            }
            Ok(match note {
                Some(n) => Outcome::Noted(rep, n),
                None => Outcome::Done(rep),
            })
        },
    );
}

/// The lattice levels of an instance: `(label, Γ, Γ_F, c)`.
fn lattice_levels(r: &Runner) -> Vec<(String, SerreLattice)> {
    let mut out = Vec::new();
    let mut push = |label: &str, g: &FiniteGroup, f: &Subgroup, c: usize| {
        if let Ok(l) = SerreLattice::new(g, f, c) {
            out.push((label.to_string(), l));
        }
    };
    if let Some(tr) = &r.tr {
        push("G/Γ_F", &tr.group, &tr.f, tr.c);
        if tr.f.order() != tr.group.order() {
            push("G/G", &tr.group, &Subgroup::whole(&tr.group), tr.c);
        }
    }
    if let Ok((d, _)) = r.weil() {
        push("Γ/Γ_F", &d.gamma, &d.gamma_f, d.c);
        if d.gamma_f.order() != d.gamma.order() {
            push("Γ/Γ", &d.gamma, &Subgroup::whole(&d.gamma), d.c);
        }
    }
    out
}

/// The Serre conditions in projection coordinates:
/// `a_{j,σ} + a_{j,cσ} - a_{j,1} - a_{j,c} = 0`.
fn serre_constraints(l: &SerreLattice) -> Vec<Vec<i64>> {
    let g = l.gamma();
    let mut rows = Vec::new();
    for j in 0..l.sigma_f().len() {
        for s in 0..g.order() {
            let mut row = vec![0i64; l.len()];
            row[l.index(j, s)] += 1;
            row[l.index(j, g.mul(l.c(), s))] += 1;
            row[l.index(j, 0)] -= 1;
            row[l.index(j, l.c())] -= 1;
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Every CM type of `(Γ, 1, c)` as a membership vector, bits over pair representatives.
fn cm_types_of_e(l: &SerreLattice, bits: usize) -> Vec<bool> {
    let g = l.gamma();
    let mut phi = vec![false; g.order()];
    for (k, &s) in l.pair_reps().iter().enumerate() {
        let pick = if bits >> k & 1 == 1 {
            g.mul(l.c(), s)
        } else {
            s
        };
        phi[pick] = true;
    }
    phi
}

fn lattice_checks(r: &mut Runner) {
    let levels = lattice_levels(r);
    let levels = &levels;
    r.run(
        "lattice.rank",
        "the Serre sublattice has rank |Σ_F|(|Γ|/2 + 1) and the basis spans it",
        |_| {
            if levels.is_empty() {
                return Ok(Outcome::Skipped("no lattice level".into()));
            }
            let mut rep = Report::new();
            for (label, l) in levels {
                let expected = l.sigma_f().len() * (l.gamma().order() / 2 + 1);
                let cons = serre_constraints(l);
                let oracle = l.len() - linalg::rank(&cons);
                rep.case(l.rank() == expected && oracle == expected, || {
                    format!(
                        "{label}: rank {} / oracle {oracle} / formula {expected}",
                        l.rank()
                    )
                });
                let basis: Vec<Vec<i64>> = l.basis().iter().map(|b| b.coeffs.clone()).collect();
                rep.case(linalg::rank(&basis) == expected, || {
                    format!("{label}: basis is dependent")
                });
                for b in l.basis() {
                    rep.case(l.is_serre(b), || {
                        format!("{label}: basis vector outside the lattice")
                    });
                }
                for v in linalg::kernel(&cons, l.len()) {
                    let chi = l.from_projection(&v);
                    let ok =
                        l.coordinates(&chi).map(|c| l.from_coordinates(&c)) == Some(chi.clone());
                    rep.case(ok, || {
                        format!("{label}: kernel vector not spanned by the basis")
                    });
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "lattice.arithmetic-action",
        "the arithmetic action is a left action preserving the Serre sublattice",
        |_| {
            if levels.is_empty() {
                return Ok(Outcome::Skipped("no lattice level".into()));
            }
            let mut rep = Report::new();
            for (label, l) in levels {
                let g = l.gamma();
                for b in l.basis() {
                    rep.case(&l.arithmetic_action(0, b) == b, || {
                        format!("{label}: identity moves a vector")
                    });
                    let images: Vec<CharacterVector> =
                        (0..g.order()).map(|t| l.arithmetic_action(t, b)).collect();
                    for (t1, img) in images.iter().enumerate() {
                        rep.case(l.is_serre(img), || {
                            format!("{label}: image leaves the lattice")
                        });
                        for t2 in 0..g.order() {
                            rep.case(
                                l.arithmetic_action(t2, img) == images[g.mul(t2, t1)],
                                || {
                                    format!(
                                        "{label}: action law fails at ({}, {})",
                                        g.format(t2),
                                        g.format(t1)
                                    )
                                },
                            );
                        }
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "lattice.algebraic-action",
        "the algebraic action is a right action of Γ#Γ_F preserving the Serre sublattice",
        |_| {
            if levels.is_empty() {
                return Ok(Outcome::Skipped("no lattice level".into()));
            }
            let mut rep = Report::new();
            let mut skipped = Vec::new();
            for (label, l) in levels {
                let pg = match PlecticGroup::enumerate(l.f()) {
                    Ok(p) => p,
                    Err(e) => {
                        skipped.push(format!("{label}: {e}"));
                        continue;
                    }
                };
                let gens = pg.generators();
                for b in l.basis() {
                    let images: Vec<CharacterVector> = pg
                        .elements()
                        .iter()
                        .map(|a| l.algebraic_action(a, b))
                        .collect::<Result<_, _>>()
                        .map_err(err)?;
                    rep.case(&images[0] == b, || {
                        format!("{label}: identity moves a vector")
                    });
                    for (a, img) in images.iter().enumerate() {
                        rep.case(l.is_serre(img), || {
                            format!("{label}: element #{a} leaves the lattice")
                        });
                        for &s in &gens {
                            let twice = l.algebraic_action(pg.element(s), img).map_err(err)?;
                            rep.case(twice == images[pg.mul(a, s)], || {
                                format!("{label}: (αs)* ≠ s*∘α* at α = #{a}, s = #{s}")
                            });
                        }
                    }
                }
            }
            Ok(if skipped.is_empty() {
                Outcome::Done(rep)
            } else {
                Outcome::Noted(rep, skipped.join("; "))
            })
        },
    );
    r.run(
        "lattice.cm-pullback",
        "the algebraic action carries CM-type characters at j to CM-type characters at the moved j",
        |r| {
            let mut rep = Report::new();
            let mut notes = Vec::new();
            for (label, l) in levels {
                let Ok(pg) = PlecticGroup::enumerate(l.f()) else { continue };
                let types = 1usize << l.pair_reps().len();
                let per = pg.order() * l.sigma_f().len();
                let picked = match r.budget(types, per) {
                    Ok((picked, note)) => {
                        notes.extend(note.map(|n| format!("{label}: {n}")));
                        picked
                    }
                    Err(why) => {
                        notes.push(format!("{label} skipped: {why}"));
                        continue;
                    }
                };
                for a in pg.elements() {
                    let perm = a.coset_action(l.sigma_f());
                    for j0 in 0..l.sigma_f().len() {
                        for &bits in &picked {
                            let phi = cm_types_of_e(l, bits);
                            let chi = l.cm_pullback(j0, &phi).map_err(err)?;
                            let moved = l.algebraic_action(a, &chi).map_err(err)?;
                            let ok = matches!(l.classify_cm_pullback(&moved), Some((j1, _)) if j1 == perm[j0]);
                            rep.case(ok, || format!("{label}: image of the CM character at j = {j0} has the wrong shape"));
                        }
                    }
                }
            }
            if rep.cases == 0 {
                return Ok(Outcome::Skipped("no enumerable lattice level".into()));
            }
            Ok(if notes.is_empty() { Outcome::Done(rep) } else { Outcome::Noted(rep, notes.join("; ")) })
        },
    );
    r.run(
        "lattice.pullback-round-trip",
        "CM-type characters are recognized with their (j, Φ) and nothing else is",
        |r| {
            if levels.is_empty() {
                return Ok(Outcome::Skipped("no lattice level".into()));
            }
            let mut rep = Report::new();
            for (label, l) in levels {
                let types = 1usize << l.pair_reps().len();
                let Ok((picked, _)) = r.budget(types, l.sigma_f().len()) else {
                    continue;
                };
                rep.case(
                    l.classify_cm_pullback(&CharacterVector::zero(l.len()))
                        .is_none(),
                    || format!("{label}: zero classified"),
                );
                for &bits in &picked {
                    let phi = cm_types_of_e(l, bits);
                    for j0 in 0..l.sigma_f().len() {
                        let chi = l.cm_pullback(j0, &phi).map_err(err)?;
                        rep.case(l.is_serre(&chi), || {
                            format!("{label}: CM character outside the lattice")
                        });
                        rep.case(
                            l.classify_cm_pullback(&chi) == Some((j0, phi.clone())),
                            || format!("{label}: round trip fails at j = {j0}"),
                        );
                        if l.sigma_f().len() > 1 {
                            let other = l
                                .cm_pullback((j0 + 1) % l.sigma_f().len(), &phi)
                                .map_err(err)?;
                            rep.case(l.classify_cm_pullback(&chi.add(&other)).is_none(), || {
                                format!("{label}: sum over two j classified")
                            });
                        }
                    }
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "lattice.equivariance",
        "for j' = τj: j'(g)(σ) = j(g)(στ)τ⁻¹",
        |r| {
            let mut rep = Report::new();
            for (label, l) in levels {
                let Ok(pg) = PlecticGroup::enumerate(l.f()) else {
                    continue;
                };
                let g = l.gamma();
                let sf = l.sigma_f();
                for &a in &r.pick(pg.order()) {
                    let alpha = pg.element(a);
                    let js: Vec<Vec<usize>> = (0..sf.len()).map(|j| l.j_of(alpha, j)).collect();
                    for j in 0..sf.len() {
                        for tau in 0..g.order() {
                            let j2 = sf.pos(g.mul(tau, sf.id(j)));
                            let ti = g.inv(tau);
                            for s in 0..g.order() {
                                rep.case(js[j2][s] == g.mul(js[j][g.mul(s, tau)], ti), || {
                                    format!(
                                        "{label}: fails at element #{a}, j = {j}, τ = {}",
                                        g.format(tau)
                                    )
                                });
                            }
                        }
                    }
                }
            }
            if rep.cases == 0 {
                return Ok(Outcome::Skipped("no enumerable lattice level".into()));
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "lattice.reflex-forms",
        "both forms of the reflex character agree and restrict on the diagonal to the classical reflex norm",
        |r| {
            let (d, to_w) = need!(r.weil());
            let to_w = need!(to_w.as_ref().ok_or_else(|| "datum is not Galois-realized".to_string()));
            let k = need!(r.cm());
            let l = &d.lattice;
            let g = &d.gamma;
            let (n, nj) = (g.order(), l.sigma_f().len());
            let mut rep = Report::new();
            for phi in k.enumerate_cm_types() {
                let data = d.reflex_data(k, &phi, to_w);
                for i in 0..k.sigma_k.len() {
                    let a = l.reflex_norm_character(&data, i);
                    let b = l.reflex_norm_character_tensor(&data, i);
                    rep.case(a == b, || format!("forms differ for Φ = {:?}, i = {i}", k.cm_type_ids(&phi)));
                    let proj = l.projection(&a);
                    let support = proj.iter().filter(|&&x| x != 0).count();
                    rep.case(support * k.sigma_k.len() == nj * n, || format!("support of size {support} for i = {i}"));
                    // restricted to the diagonal: the classical Σ [σ⁻¹i ∈ Φ][σ], of weight 1
                    let diag: Vec<i64> = (0..n).map(|s| (0..nj).map(|j| proj[l.index(j, s)]).sum()).collect();
                    let classical: Vec<i64> =
                        (0..n).map(|s| i64::from(data.phi.contains(&data.act[g.inv(s)][i]))).collect();
                    rep.case(diag == classical, || format!("diagonal restriction is not the classical reflex norm, i = {i}"));
                    rep.case((0..n).all(|s| diag[s] + diag[g.mul(d.c, s)] == 1), || {
                        format!("classical reflex norm of i = {i} does not have weight 1")
                    });
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
    r.run(
        "lattice.text-round-trip",
        "characters survive formatting and parsing",
        |_| {
            if levels.is_empty() {
                return Ok(Outcome::Skipped("no lattice level".into()));
            }
            let mut rep = Report::new();
            for (label, l) in levels {
                for b in l.basis() {
                    rep.case(l.parse(&l.format(b)).ok().as_ref() == Some(b), || {
                        format!("{label}: round trip fails")
                    });
                }
            }
            Ok(Outcome::Done(rep))
        },
    );
}

fn weil_plectic(d: &WeilDatum) -> Result<PlecticGroup, String> {
    PlecticGroup::enumerate(&d.w_f).map_err(err)
}

fn taniyama_checks(r: &mut Runner) {
    let part = r.opts.taniyama;
    if part.includes(TaniyamaPart::Independence) {
        r.run(
            "taniyama.section-independence",
            "Taniyama values do not depend on the Weil section",
            |r| {
                let (d, _) = need!(r.weil());
                let pg = weil_plectic(d)?;
                let sections = d.enumerate_sections();
                let mut rep = Report::new();
                for &a in &r.pick(pg.order()) {
                    let v0 = d.taniyama_value(pg.element(a), &sections[0]).map_err(err)?;
                    for s in &sections[1..] {
                        rep.case(
                            d.taniyama_value(pg.element(a), s).map_err(err)? == v0,
                            || format!("element #{a}: value depends on the section"),
                        );
                    }
                }
                Ok(Outcome::Done(rep))
            },
        );
        r.run(
            "taniyama.embedding-independence",
            "j(α̃) does not depend on the lift of j",
            |r| {
                let (d, _) = need!(r.weil());
                let pg = weil_plectic(d)?;
                let mut rep = Report::new();
                for &a in &r.pick(pg.order()) {
                    for j in 0..d.sigma_f_len() {
                        let base = d.embed_j(pg.element(a), j);
                        for u in d.coset_lifts(j) {
                            rep.case(
                                d.embed_j_with(pg.element(a), u).mapping() == base.mapping(),
                                || format!("element #{a}, j = {j}: embedding depends on the lift"),
                            );
                        }
                    }
                }
                Ok(Outcome::Done(rep))
            },
        );
        r.run(
            "taniyama.kernel-conjugation",
            "replacing c̃, w_σ, α̃ by their conjugates under u ∈ A leaves values unchanged",
            |r| {
                let (d, _) = need!(r.weil());
                let pg = weil_plectic(d)?;
                let w = &d.w;
                let sec = d.canonical_section();
                let elems = r.pick(pg.order());
                let base: Vec<_> = elems
                    .iter()
                    .map(|&a| d.taniyama_value(pg.element(a), &sec))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                let mut rep = Report::new();
                for &u in d.a.members() {
                    let ui = w.inv(u);
                    let d2 = d.with_c_lift(w.conj(u, d.c_lift)).map_err(err)?;
                    let sec2 = WeilSection {
                        w: sec.w.iter().map(|&x| w.mul(u, x)).collect(),
                    };
                    d2.check_section(&sec2).map_err(err)?;
                    for (e, &a) in elems.iter().enumerate() {
                        let alpha = pg.element(a);
                        let map = (0..w.order())
                            .map(|x| w.mul(u, alpha.apply(w.mul(ui, x))))
                            .collect();
                        let alpha2 = PlecticElement::new(&d2.w_f, map).map_err(err)?;
                        rep.case(
                            d2.taniyama_value(&alpha2, &sec2).map_err(err)? == base[e],
                            || format!("element #{a}, u = {}: value changes", w.format(u)),
                        );
                    }
                }
                Ok(Outcome::Done(rep))
            },
        );
        r.run(
            "taniyama.diagonal",
            "for F ⊂ F', the value at F' of an included element is the diagonal image of the value at F",
            |r| {
                let (d, _) = need!(r.weil());
                if d.w_f.order() == d.w.order() {
                    return Ok(Outcome::Skipped("F = Q: no proper subfield to compare".into()));
                }
                let all: Vec<usize> = (0..d.w.order()).collect();
                let coarse = d.with_f(&all).map_err(err)?;
                let diag = Diagonal::new(&coarse, d).map_err(err)?;
                let pg = weil_plectic(&coarse)?;
                let (sc, sf) = (coarse.canonical_section(), d.canonical_section());
                let mut rep = Report::new();
                for &a in &r.pick(pg.order()) {
                    let alpha = pg.element(a);
                    let fc = coarse.taniyama_value(alpha, &sc).map_err(err)?;
                    let ff = d.taniyama_value(&diag.include(alpha).map_err(err)?, &sf).map_err(err)?;
                    rep.case(ff == diag.push_value(&fc), || format!("element #{a}: diagonal square fails"));
                }
                Ok(Outcome::Done(rep))
            },
        );
        r.run(
            "taniyama.transport",
            "f_{uF}([u]α̃) is f_F(α̃) reindexed along j' ↦ j'∘u",
            |r| {
                let (d, _) = need!(r.weil());
                let pg = weil_plectic(d)?;
                let w = &d.w;
                let sec = d.canonical_section();
                let elems = r.pick(pg.order());
                let base: Vec<_> = elems
                    .iter()
                    .map(|&a| d.taniyama_value(pg.element(a), &sec))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                let mut rep = Report::new();
                for u in 0..w.order() {
                    let conj_f = d.w_f.conjugate(u);
                    let d2 = d.with_f(conj_f.members()).map_err(err)?;
                    let (sf, sf2) = (d.lattice.sigma_f(), d2.lattice.sigma_f());
                    let ubar = d.proj[u];
                    let to_f: Vec<usize> = (0..sf2.len())
                        .map(|j2| sf.pos(d.gamma.mul(sf2.id(j2), ubar)))
                        .collect();
                    let pushed: Vec<CharacterVector> = d2
                        .lattice
                        .basis()
                        .iter()
                        .map(|b| {
                            let mut out = CharacterVector::zero(d.lattice.len());
                            for (j2, &j) in to_f.iter().enumerate() {
                                for s in 0..d.gamma.order() {
                                    out.coeffs[d.lattice.index(j, s)] =
                                        b.coeffs[d2.lattice.index(j2, s)];
                                }
                            }
                            out
                        })
                        .collect();
                    let sec2 = d2.canonical_section();
                    for (e, &a) in elems.iter().enumerate() {
                        let beta = pg.element(a).conjugate_transport(u);
                        let f2 = d2.taniyama_value(&beta, &sec2).map_err(err)?;
                        for (k, chi) in pushed.iter().enumerate() {
                            let expected = d.eval(&base[e], chi).map_err(err)?;
                            rep.case(f2.values[k] == expected, || {
                                format!("element #{a}, u = {}: transport square fails", w.format(u))
                            });
                        }
                    }
                }
                Ok(Outcome::Done(rep))
            },
        );
        r.run(
            "taniyama.classical",
            "for F = Q and α̃ = L_g the h-vector is (w_{gσ⁻¹}⁻¹ g w_{σ⁻¹})_σ",
            |r| {
                let (d, _) = need!(r.weil());
                let all: Vec<usize> = (0..d.w.order()).collect();
                let q = d.with_f(&all).map_err(err)?;
                let w = &q.w;
                let n = q.gamma.order();
                let mut rep = Report::new();
                for sec in q.enumerate_sections() {
                    for &x in &r.pick(w.order()) {
                        let l = PlecticElement::left_translate(&q.w_f, x);
                        let h = q.h_vector(&l, &sec).map_err(err)?;
                        for s in 0..n {
                            let si = q.gamma.inv(s);
                            let e =
                                w.product([w.inv(sec.w[q.gamma.mul(q.proj[x], si)]), x, sec.w[si]]);
                            rep.case(h.entries[s] == e, || {
                                format!(
                                    "g = {}: entry at σ = {} differs",
                                    w.format(x),
                                    q.gamma.format(s)
                                )
                            });
                        }
                    }
                }
                Ok(Outcome::Done(rep))
            },
        );
    }
    if part.includes(TaniyamaPart::Galois) {
        r.run(
            "taniyama.galois-invariance",
            "every Taniyama value is fixed by the Galois action of Γ",
            |r| {
                let (d, _) = need!(r.weil());
                let pg = weil_plectic(d)?;
                let sec = d.canonical_section();
                let mut rep = Report::new();
                for &a in &r.pick(pg.order()) {
                    let f = d.taniyama_value(pg.element(a), &sec).map_err(err)?;
                    for tau in 0..d.gamma.order() {
                        rep.case(d.galois_action(tau, &f).map_err(err)? == f, || {
                            format!("element #{a} moved by τ = {}", d.gamma.format(tau))
                        });
                    }
                }
                Ok(Outcome::Done(rep))
            },
        );
    }
    if part.includes(TaniyamaPart::Cocycle) {
        r.run(
            "taniyama.cocycle",
            "f(α̃1α̃2) = α̃2⁻¹⋆f(α̃1) · f(α̃2)",
            |r| {
                let (d, _) = need!(r.weil());
                let pg = weil_plectic(d)?;
                let sec = d.canonical_section();
                let values: Vec<_> = pg
                    .elements()
                    .iter()
                    .map(|a| d.taniyama_value(a, &sec))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                let mats: Vec<_> = pg
                    .elements()
                    .iter()
                    .map(|a| d.descend(a))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                let (elems, note) = need!(r.budget(pg.order(), pg.order()));
                let mut rep = Report::new();
                for &a in &elems {
                    for b in 0..pg.order() {
                        let moved = d.star_action(&mats[pg.inv(b)], &values[a]).map_err(err)?;
                        rep.case(
                            d.mul_values(&moved, &values[b]) == values[pg.mul(a, b)],
                            || format!("cocycle identity fails at (#{a}, #{b})"),
                        );
                    }
                }
                Ok(match note {
                    Some(n) => Outcome::Noted(rep, n),
                    None => Outcome::Done(rep),
                })
            },
        );
    }
    if part.includes(TaniyamaPart::Norm) {
        r.run(
            "taniyama.norm",
            "on componentwise translations by A the value is the norm pairing",
            |r| {
                let (d, _) = need!(r.weil());
                let a_members = d.a.members();
                let nj = d.sigma_f_len();
                let choices: Vec<&[usize]> = (0..nj).map(|_| a_members).collect();
                let tuples = crate::group::cartesian(&choices);
                let sec = d.canonical_section();
                let mut rep = Report::new();
                for &t in &r.pick(tuples.len()) {
                    let g = &tuples[t];
                    let alpha = d.diagonal_translation(g);
                    let f = d.taniyama_value(&alpha, &sec).map_err(err)?;
                    for (k, b) in d.lattice.basis().iter().enumerate() {
                        rep.case(f.values[k] == d.norm_pairing(g, b), || {
                            format!("tuple #{t}: basis vector {k} differs")
                        });
                    }
                }
                Ok(Outcome::Done(rep))
            },
        );
        r.run(
            "taniyama.norm-push",
            "Ver(f^E(ᾱ)(χ)) = f^{E'}(α̃)(N*χ) between the levels E ⊂ E'",
            |r| {
                let k = need!(r.cm());
                let h2 = need!(r
                    .nested
                    .clone()
                    .ok_or_else(|| "instance has no [nested] subgroup".to_string()));
                let (d, _) = need!(r.weil());
                let fine_cm = k.finer(&h2).map_err(err)?;
                let (fine, to_w) =
                    crate::weil::WeilDatum::galois_realized_with_f(&fine_cm, &k.f).map_err(err)?;
                let hbar = k.h.image(&fine.w, &to_w);
                let push = NormPush::new(&fine, &hbar).map_err(err)?;
                let pg = weil_plectic(&fine)?;
                let (sf, sc) = (fine.canonical_section(), push.coarse.canonical_section());
                let mut rep = Report::new();
                rep.case(
                    push.coarse.w.order() == d.w.order()
                        && push.coarse.lattice.rank() == d.lattice.rank(),
                    || "coarse level does not match the instance's datum".into(),
                );
                for &a in &r.pick(pg.order()) {
                    for (left, right) in push.compare(pg.element(a), &sf, &sc).map_err(err)? {
                        rep.case(left == right, || format!("element #{a}: norm square fails"));
                    }
                }
                Ok(Outcome::Done(rep))
            },
        );
    }
    if part.includes(TaniyamaPart::Reflex) {
        r.run(
            "taniyama.reflex",
            "pairing h with the reflex character of i gives i F_Φ(α) i⁻¹",
            |r| {
                let k = need!(r.cm());
                let (d, to_w) = need!(r.weil());
                let to_w = need!(to_w
                    .as_ref()
                    .ok_or_else(|| "datum is not Galois-realized".to_string()));
                let pg = need!(r.plectic());
                let ht = HalfTransfer::new(k);
                let w_cm = k.canonical_section();
                let sections = d.enumerate_sections();
                let (elems, note) = need!(r.budget(
                    pg.order(),
                    k.cm_type_count() * sections.len() * k.sigma_k.len()
                ));
                let mut rep = Report::new();
                for &a in &elems {
                    for phi in k.enumerate_cm_types() {
                        for sec in &sections {
                            for (left, right) in
                                reflex_comparison(d, to_w, &ht, &phi, pg.element(a), &w_cm, sec)
                                    .map_err(err)?
                            {
                                rep.case(left == right, || {
                                    format!(
                                        "element #{a}, Φ = {:?}: reflex comparison fails",
                                        k.cm_type_ids(&phi)
                                    )
                                });
                            }
                        }
                    }
                }
                Ok(match note {
                    Some(n) => Outcome::Noted(rep, n),
                    None => Outcome::Done(rep),
                })
            },
        );
    }
}

struct ExtensionSetup {
    module: GammaModule,
    b: CocycleMap,
    z: Vec<usize>,
}

fn extension_setup(r: &Runner) -> Result<ExtensionSetup, String> {
    let (d, _) = r.weil()?;
    let module = GammaModule::new(d, r.opts.m0).map_err(err)?;
    let b = CocycleMap::taniyama(&module, &d.canonical_section()).map_err(err)?;
    let z = CocycleMap::random_m0_function(&module, r.opts.seed);
    Ok(ExtensionSetup { module, b, z })
}

fn extension_checks(r: &mut Runner) {
    let setup = extension_setup(r);
    let setup = &setup;
    let get = || setup.as_ref().map_err(Clone::clone);
    r.run(
        "extension.module",
        "each ⋆γ is an automorphism of M fixing M0, and ⋆ is a left action",
        |_| {
            let s = need!(get());
            Ok(Outcome::Done(s.module.verify_action()))
        },
    );
    r.run(
        "extension.cocycle",
        "b(γ) = f(γ⁻¹)⁻¹ satisfies b(γ1γ2) = b(γ1)·γ1⋆b(γ2) modulo M0",
        |_| {
            let s = need!(get());
            Ok(Outcome::Done(verify_cocycle(&s.module, &s.b)))
        },
    );
    r.run(
        "extension.invariance",
        "every b(γ) is Galois-invariant modulo M0",
        |_| {
            let s = need!(get());
            Ok(Outcome::Done(verify_invariance(&s.module, &s.b)))
        },
    );
    r.run(
        "extension.negative-control",
        "changing one value of b by a non-M0 element breaks the cocycle identity",
        |_| {
            let s = need!(get());
            match perturb(&s.module, &s.b) {
                None => Ok(Outcome::Skipped("M = M0: no perturbation possible".into())),
                Some(p) => {
                    let rep = verify_cocycle(&s.module, &p);
                    let mut out = Report::new();
                    out.case(!rep.passed(), || "perturbed cocycle was accepted".into());
                    Ok(Outcome::Noted(
                        out,
                        format!("rejected: {}", rep.witness.unwrap_or_default()),
                    ))
                }
            }
        },
    );
    r.run(
        "extension.two-cocycle",
        "d(γ1,γ2) lies in M0 and satisfies the 2-cocycle identity",
        |_| {
            let s = need!(get());
            let lift = s.b.twisted_by(&s.module, &s.z);
            let d = two_cocycle_from_lift(&s.module, &lift).map_err(err)?;
            Ok(Outcome::Done(verify_two_cocycle(&s.module, &d)))
        },
    );
    r.run(
        "extension.coboundary",
        "changing the lift by an M0-valued z changes d by the coboundary of z",
        |_| {
            let s = need!(get());
            Ok(Outcome::Done(
                verify_coboundary_change(&s.module, &s.b, &s.z).map_err(err)?,
            ))
        },
    );
    let ext_checks: [(&str, &str); 4] = [
        (
            "extension.group-axioms",
            "the twisted product on M × Γ is a group law",
        ),
        ("extension.projection", "projection to Γ is a homomorphism"),
        ("extension.splitting", "γ ↦ (b(γ), γ) is a homomorphism"),
        (
            "extension.kernel-action",
            "conjugation by the splitting on the kernel is the ⋆ action",
        ),
    ];
    for (i, (name, prop)) in ext_checks.iter().enumerate() {
        r.run(name, prop, |_| {
            let s = need!(get());
            let lift = s.b.twisted_by(&s.module, &s.z);
            let e = TwistedExtension::build(
                &s.module,
                two_cocycle_from_lift(&s.module, &lift).map_err(err)?,
            );
            Ok(Outcome::Done(match i {
                0 => e.verify_group_axioms(),
                1 => e.verify_projection(),
                2 => e.verify_splitting(&lift),
                _ => e.verify_kernel_conjugation(&lift),
            }))
        });
    }
    r.run(
        "extension.lift-change",
        "two lifts of one b̄ give extensions isomorphic by (m, γ) ↦ (m·z(γ), γ)",
        |_| {
            let s = need!(get());
            Ok(Outcome::Done(
                verify_lift_change(&s.module, &s.b, &s.z).map_err(err)?,
            ))
        },
    );
    r.run(
        "extension.functoriality",
        "the diagonal map M_F → M_F' and inclusion of plectic groups carry one extension to the other",
        |r| {
            let s = need!(get());
            let d = &s.module.datum;
            if d.w_f.order() == d.w.order() {
                return Ok(Outcome::Skipped("F = Q: no proper subfield to compare".into()));
            }
            let all: Vec<usize> = (0..d.w.order()).collect();
            let coarse = d.with_f(&all).map_err(err)?;
            let cm = GammaModule::new(&coarse, r.opts.m0).map_err(err)?;
            let bc = CocycleMap::taniyama(&cm, &coarse.canonical_section()).map_err(err)?;
            let map = ModuleMap::new(&cm, &s.module).map_err(err)?;
            Ok(Outcome::Done(map.verify(&bc, &s.b).map_err(err)?))
        },
    );
}
