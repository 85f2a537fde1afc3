//! Cocycles with values in `M = Hom(Serre lattice, A)` and the twisted
//! extension `M ×_d Γ` they define.
//!
//! The acting group is the plectic group `W#W_F`, acting on `M` through its
//! image in `Γ#Γ_F` by `⋆`. Elements of `M` are encoded in mixed radix over
//! the positions of `A`; extension elements `(m, γ)` as `γ·|M| + m`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::cap_from_env;
use crate::plectic::{PlecticError, PlecticGroup};
use crate::weil::{Diagonal, TaniyamaValue, WeilDatum, WeilError, WeilSection};

pub const DEFAULT_EXTENSION_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Plectic(#[from] PlecticError),
    #[error("|M|·|Γ| = {size} exceeds the cap {cap}")]
    TooLarge { size: String, cap: usize },
    #[error("d({0}, {1}) does not lie in M0")]
    NotInM0(usize, usize),
    #[error("map has {got} values, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error("the two modules are not related by a diagonal map: {0}")]
    Functoriality(String),
}

/// Which subgroup of `M` plays the role of the rational points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum M0Choice {
    Trivial,
    /// Values `χ ↦ a^{Σ b_{j⊗σ}}` of constant h-vectors.
    Constants,
}

impl std::str::FromStr for M0Choice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(M0Choice::Trivial),
            "constants" => Ok(M0Choice::Constants),
            other => Err(format!(
                "unknown M0 choice `{other}` (expected trivial or constants)"
            )),
        }
    }
}

/// Result of an exhaustive check: number of cases and the first violation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub cases: u64,
    pub witness: Option<String>,
}

impl Report {
    pub fn new() -> Self {
        Report {
            cases: 0,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    pub fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.cases += other.cases;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }
}

/// `M` with the `⋆` action of `W#W_F` and the Galois action of `Γ`.
#[derive(Clone, Debug)]
pub struct GammaModule {
    pub datum: WeilDatum,
    pub plectic: PlecticGroup,
    pub m0_choice: M0Choice,
    a_members: Vec<usize>,
    a_pos: Vec<usize>,
    rank: usize,
    order: usize,
    /// `star[γ][m] = γ⋆m`.
    star: Vec<Vec<usize>>,
    /// `galois[τ][m]`.
    galois: Vec<Vec<usize>>,
    m0: Vec<usize>,
    in_m0: Vec<bool>,
}

impl GammaModule {
    pub fn new(datum: &WeilDatum, m0: M0Choice) -> Result<Self, ExtensionError> {
        Self::with_cap(datum, m0, cap_from_env(DEFAULT_EXTENSION_CAP))
    }

    pub fn with_cap(
        datum: &WeilDatum,
        m0_choice: M0Choice,
        cap: usize,
    ) -> Result<Self, ExtensionError> {
        let plectic = PlecticGroup::enumerate(&datum.w_f)?;
        let rank = datum.lattice.rank();
        let a_order = datum.a.order();
        let order = (a_order as u128).checked_pow(rank as u32);
        let size = order.map(|o| o * plectic.order() as u128);
        match size {
            Some(s) if s <= cap as u128 => {}
            _ => {
                return Err(ExtensionError::TooLarge {
                    size: size.map_or_else(|| "overflow".into(), |s| s.to_string()),
                    cap,
                })
            }
        }
        let order = order.unwrap() as usize;
        let mut a_members = datum.a.members().to_vec();
        a_members.sort_unstable();
        let mut a_pos = vec![usize::MAX; datum.w.order()];
        for (i, &x) in a_members.iter().enumerate() {
            a_pos[x] = i;
        }
        let mut module = GammaModule {
            datum: datum.clone(),
            plectic,
            m0_choice,
            a_members,
            a_pos,
            rank,
            order,
            star: Vec::new(),
            galois: Vec::new(),
            m0: Vec::new(),
            in_m0: vec![false; order],
        };
        let values: Vec<TaniyamaValue> = (0..order).map(|m| module.decode(m)).collect();
        let mut star = Vec::with_capacity(module.plectic.order());
        for g in module.plectic.elements() {
            let bar = datum.descend(g)?;
            let mut row = Vec::with_capacity(order);
            for v in &values {
                row.push(module.encode(&datum.star_action(&bar, v)?));
            }
            star.push(row);
        }
        let mut galois = Vec::with_capacity(datum.gamma.order());
        for tau in 0..datum.gamma.order() {
            let mut row = Vec::with_capacity(order);
            for v in &values {
                row.push(module.encode(&datum.galois_action(tau, v)?));
            }
            galois.push(row);
        }
        module.star = star;
        module.galois = galois;
        let m0: Vec<usize> = match m0_choice {
            M0Choice::Trivial => vec![0],
            M0Choice::Constants => {
                let mut out: Vec<usize> = module
                    .a_members
                    .iter()
                    .map(|&a| {
                        let values = datum
                            .lattice
                            .basis()
                            .iter()
                            .map(|b| datum.w.pow(a, b.coeffs.iter().sum()))
                            .collect();
                        module.encode(&TaniyamaValue { values })
                    })
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        };
        for &m in &m0 {
            module.in_m0[m] = true;
        }
        module.m0 = m0;
        Ok(module)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gamma_order(&self) -> usize {
        self.plectic.order()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn m0(&self) -> &[usize] {
        &self.m0
    }

    pub fn in_m0(&self, m: usize) -> bool {
        self.in_m0[m]
    }

    pub fn encode(&self, v: &TaniyamaValue) -> usize {
        let n = self.a_members.len();
        v.values
            .iter()
            .rev()
            .fold(0, |acc, &x| acc * n + self.a_pos[x])
    }

    pub fn decode(&self, mut m: usize) -> TaniyamaValue {
        let n = self.a_members.len();
        let values = (0..self.rank)
            .map(|_| {
                let x = self.a_members[m % n];
                m /= n;
                x
            })
            .collect();
        TaniyamaValue { values }
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, m1: usize, m2: usize) -> usize {
        let n = self.a_members.len();
        let (mut x, mut y, mut out, mut place) = (m1, m2, 0, 1);
        for _ in 0..self.rank {
            let p = self
                .datum
                .w
                .mul(self.a_members[x % n], self.a_members[y % n]);
            out += self.a_pos[p] * place;
            place *= n;
            x /= n;
            y /= n;
        }
        out
    }

    pub fn inv(&self, m: usize) -> usize {
        let n = self.a_members.len();
        let (mut x, mut out, mut place) = (m, 0, 1);
        for _ in 0..self.rank {
            out += self.a_pos[self.datum.w.inv(self.a_members[x % n])] * place;
            place *= n;
            x /= n;
        }
        out
    }

    /// `γ⋆m` for `γ` a position in the plectic group.
    pub fn act(&self, gamma: usize, m: usize) -> usize {
        self.star[gamma][m]
    }

    pub fn galois(&self, tau: usize, m: usize) -> usize {
        self.galois[tau][m]
    }

    /// Each `γ⋆` is an automorphism stabilizing `M0`, and `⋆` is a left action.
    pub fn verify_action(&self) -> Report {
        let mut r = Report::new();
        let gens = self.generators();
        for g in 0..self.gamma_order() {
            let row = &self.star[g];
            let mut seen = vec![false; self.order];
            for &x in row {
                seen[x] = true;
            }
            r.case(!seen.contains(&false), || {
                format!("γ = #{g} does not act bijectively")
            });
            for a in 0..self.order {
                for &b in &gens {
                    r.case(row[self.mul(a, b)] == self.mul(row[a], row[b]), || {
                        format!("γ = #{g} is not multiplicative on generators {a}, {b}")
                    });
                }
            }
            for &m in &self.m0 {
                r.case(self.in_m0[row[m]], || {
                    format!("γ = #{g} moves {m} out of M0")
                });
            }
        }
        for g1 in 0..self.gamma_order() {
            for g2 in 0..self.gamma_order() {
                let g12 = self.plectic.mul(g1, g2);
                for &m in &gens {
                    r.case(self.act(g12, m) == self.act(g1, self.act(g2, m)), || {
                        format!("(γ1γ2)⋆m ≠ γ1⋆(γ2⋆m) at γ1 = #{g1}, γ2 = #{g2}, m = {m}")
                    });
                }
            }
        }
        r
    }

    /// Unit vectors: one generator of `A` placed in one coordinate.
    pub fn generators(&self) -> Vec<usize> {
        let n = self.a_members.len();
        let mut out = Vec::new();
        let mut place = 1;
        for _ in 0..self.rank {
            for i in 1..n {
                out.push(i * place);
            }
            place *= n;
        }
        out
    }
}

/// A set-theoretic map `b : W#W_F → M`, read modulo `M0` as `b̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleMap {
    pub values: Vec<usize>,
}

impl CocycleMap {
    pub fn identity(module: &GammaModule) -> Self {
        CocycleMap {
            values: vec![0; module.gamma_order()],
        }
    }

    /// `b(γ) = f(γ⁻¹)⁻¹` for the Taniyama element `f`.
    pub fn taniyama(module: &GammaModule, sec: &WeilSection) -> Result<Self, ExtensionError> {
        let d = &module.datum;
        let p = &module.plectic;
        let values = (0..p.order())
            .map(|g| {
                let f = d.taniyama_value(p.element(p.inv(g)), sec)?;
                Ok(module.encode(&d.inv_value(&f)))
            })
            .collect::<Result<_, WeilError>>()?;
        Ok(CocycleMap { values })
    }

    /// `b(γ)·z(γ)`.
    pub fn twisted_by(&self, module: &GammaModule, z: &[usize]) -> Self {
        CocycleMap {
            values: self
                .values
                .iter()
                .zip(z)
                .map(|(&b, &x)| module.mul(b, x))
                .collect(),
        }
    }

    /// A pseudo-random `M0`-valued function with `z(1) = 1`.
    pub fn random_m0_function(module: &GammaModule, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m0 = module.m0();
        (0..module.gamma_order())
            .map(|g| {
                if g == 0 {
                    0
                } else {
                    m0[rng.gen_range(0..m0.len())]
                }
            })
            .collect()
    }

    fn check_shape(&self, module: &GammaModule) -> Result<(), ExtensionError> {
        if self.values.len() != module.gamma_order() {
            return Err(ExtensionError::Shape {
                got: self.values.len(),
                expected: module.gamma_order(),
            });
        }
        Ok(())
    }
}

/// `b̄(γ1γ2) = b̄(γ1) · γ1⋆b̄(γ2)` in `M/M0` for every pair.
pub fn verify_cocycle(module: &GammaModule, b: &CocycleMap) -> Report {
    let mut r = Report::new();
    if b.check_shape(module).is_err() {
        r.case(false, || "cocycle has the wrong number of values".into());
        return r;
    }
    let p = &module.plectic;
    for g1 in 0..p.order() {
        for g2 in 0..p.order() {
            let lhs = b.values[p.mul(g1, g2)];
            let rhs = module.mul(b.values[g1], module.act(g1, b.values[g2]));
            r.case(module.in_m0(module.mul(lhs, module.inv(rhs))), || {
                format!("b(γ1γ2) ≢ b(γ1)·γ1⋆b(γ2) mod M0 at γ1 = #{g1}, γ2 = #{g2}")
            });
        }
    }
    r
}

/// Every `b̄(γ)` is fixed by the Galois action of `Γ` modulo `M0`.
pub fn verify_invariance(module: &GammaModule, b: &CocycleMap) -> Report {
    let mut r = Report::new();
    for (g, &v) in b.values.iter().enumerate() {
        for tau in 0..module.datum.gamma.order() {
            let moved = module.galois(tau, v);
            r.case(module.in_m0(module.mul(moved, module.inv(v))), || {
                format!(
                    "τ = {} moves b(#{g}) modulo M0",
                    module.datum.gamma.format(tau)
                )
            });
        }
    }
    r
}

/// `d(γ1,γ2) = b(γ1)·γ1⋆b(γ2)·b(γ1γ2)⁻¹`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCocycle {
    pub n: usize,
    pub d: Vec<usize>,
}

impl TwoCocycle {
    pub fn get(&self, g1: usize, g2: usize) -> usize {
        self.d[g1 * self.n + g2]
    }
}

pub fn two_cocycle_from_lift(
    module: &GammaModule,
    b: &CocycleMap,
) -> Result<TwoCocycle, ExtensionError> {
    b.check_shape(module)?;
    let p = &module.plectic;
    let n = p.order();
    let mut d = Vec::with_capacity(n * n);
    for g1 in 0..n {
        for g2 in 0..n {
            let x = module.mul(
                module.mul(b.values[g1], module.act(g1, b.values[g2])),
                module.inv(b.values[p.mul(g1, g2)]),
            );
            if !module.in_m0(x) {
                return Err(ExtensionError::NotInM0(g1, g2));
            }
            d.push(x);
        }
    }
    Ok(TwoCocycle { n, d })
}

/// `γ1⋆d(γ2,γ3)·d(γ1,γ2γ3) = d(γ1γ2,γ3)·d(γ1,γ2)` for every triple.
pub fn verify_two_cocycle(module: &GammaModule, d: &TwoCocycle) -> Report {
    let mut r = Report::new();
    let p = &module.plectic;
    for g1 in 0..d.n {
        for g2 in 0..d.n {
            let g12 = p.mul(g1, g2);
            for g3 in 0..d.n {
                let lhs = module.mul(module.act(g1, d.get(g2, g3)), d.get(g1, p.mul(g2, g3)));
                let rhs = module.mul(d.get(g12, g3), d.get(g1, g2));
                r.case(lhs == rhs, || {
                    format!("2-cocycle identity fails at (#{g1}, #{g2}, #{g3})")
                });
            }
        }
    }
    r
}

/// `d_{b·z} = d_b · ∂z` with `∂z(γ1,γ2) = z(γ1)·γ1⋆z(γ2)·z(γ1γ2)⁻¹`.
pub fn verify_coboundary_change(
    module: &GammaModule,
    b: &CocycleMap,
    z: &[usize],
) -> Result<Report, ExtensionError> {
    let d = two_cocycle_from_lift(module, b)?;
    let d2 = two_cocycle_from_lift(module, &b.twisted_by(module, z))?;
    let p = &module.plectic;
    let mut r = Report::new();
    for g1 in 0..d.n {
        for g2 in 0..d.n {
            let dz = module.mul(
                module.mul(z[g1], module.act(g1, z[g2])),
                module.inv(z[p.mul(g1, g2)]),
            );
            r.case(d2.get(g1, g2) == module.mul(d.get(g1, g2), dz), || {
                format!("lift change is not a coboundary at (#{g1}, #{g2})")
            });
        }
    }
    Ok(r)
}

/// `M ×_d W#W_F` with `(m1,γ1)(m2,γ2) = (m1·γ1⋆m2·d(γ1,γ2)⁻¹, γ1γ2)`, so
/// that `γ ↦ (b(γ), γ)` is a homomorphism.
#[derive(Clone, Debug)]
pub struct TwistedExtension<'a> {
    pub module: &'a GammaModule,
    pub d: TwoCocycle,
    d_inv: Vec<usize>,
    table: Option<Vec<u32>>,
}

/// Full multiplication tables are kept up to this many entries.
const TABLE_LIMIT: usize = 1 << 23;

/// Full associativity is checked up to this order; above it, Light's test.
const FULL_ASSOCIATIVITY: usize = 256;

impl<'a> TwistedExtension<'a> {
    pub fn build(module: &'a GammaModule, d: TwoCocycle) -> Self {
        let d_inv = d.d.iter().map(|&x| module.inv(x)).collect();
        let mut ext = TwistedExtension {
            module,
            d,
            d_inv,
            table: None,
        };
        let n = ext.order();
        if n * n <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    table.push(ext.mul_direct(x, y) as u32);
                }
            }
            ext.table = Some(table);
        }
        ext
    }

    pub fn order(&self) -> usize {
        self.module.order() * self.module.gamma_order()
    }

    pub fn encode(&self, m: usize, gamma: usize) -> usize {
        gamma * self.module.order() + m
    }

    pub fn decode(&self, x: usize) -> (usize, usize) {
        (x % self.module.order(), x / self.module.order())
    }

    pub fn identity(&self) -> usize {
        0
    }

    fn mul_direct(&self, x: usize, y: usize) -> usize {
        let md = self.module;
        let (m1, g1) = self.decode(x);
        let (m2, g2) = self.decode(y);
        let m = md.mul(md.mul(m1, md.act(g1, m2)), self.d_inv[g1 * self.d.n + g2]);
        self.encode(m, md.plectic.mul(g1, g2))
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t[x * self.order() + y] as usize,
            None => self.mul_direct(x, y),
        }
    }

    /// `(m,γ)⁻¹ = (γ⁻¹⋆(m⁻¹·d(γ,γ⁻¹)), γ⁻¹)`.
    pub fn inv(&self, x: usize) -> usize {
        let md = self.module;
        let (m, g) = self.decode(x);
        let gi = md.plectic.inv(g);
        let inner = md.mul(md.inv(m), self.d.get(g, gi));
        self.encode(md.act(gi, inner), gi)
    }

    pub fn section(&self, b: &CocycleMap, gamma: usize) -> usize {
        self.encode(b.values[gamma], gamma)
    }

    /// Kernel generators and the images of plectic generators under `s_0 : γ ↦ (1, γ)`.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = self.module.generators();
        out.extend(
            self.module
                .plectic
                .generators()
                .into_iter()
                .map(|g| self.encode(0, g)),
        );
        out
    }

    /// Identity, inverses and associativity. Associativity is exhaustive up
    /// to order 256; above that it uses Light's test on the generators
    /// together with a check that they generate.
    pub fn verify_group_axioms(&self) -> Report {
        let n = self.order();
        let mut r = Report::new();
        for x in 0..n {
            r.case(self.mul(0, x) == x && self.mul(x, 0) == x, || {
                format!("identity fails at {x}")
            });
            let xi = self.inv(x);
            r.case(self.mul(x, xi) == 0 && self.mul(xi, x) == 0, || {
                format!("inverse fails at {x}")
            });
        }
        if n <= FULL_ASSOCIATIVITY {
            for x in 0..n {
                for y in 0..n {
                    let xy = self.mul(x, y);
                    for z in 0..n {
                        r.case(self.mul(xy, z) == self.mul(x, self.mul(y, z)), || {
                            format!("associativity fails at ({x}, {y}, {z})")
                        });
                    }
                }
            }
            return r;
        }
        let gens = self.generators();
        for &g in &gens {
            for x in 0..n {
                let xg = self.mul(x, g);
                for y in 0..n {
                    r.case(self.mul(xg, y) == self.mul(x, self.mul(g, y)), || {
                        format!("Light's test fails at generator {g}, ({x}, {y})")
                    });
                }
            }
        }
        let mut reached = vec![false; n];
        reached[0] = true;
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !reached[y] {
                    reached[y] = true;
                    queue.push(y);
                }
            }
        }
        r.case(!reached.contains(&false), || {
            "generators do not generate the carrier".into()
        });
        r
    }

    /// The projection to `W#W_F` is a homomorphism.
    pub fn verify_projection(&self) -> Report {
        let n = self.order();
        let p = &self.module.plectic;
        let mut r = Report::new();
        for x in 0..n {
            for y in 0..n {
                let g = self.decode(self.mul(x, y)).1;
                r.case(g == p.mul(self.decode(x).1, self.decode(y).1), || {
                    format!("projection is not multiplicative at ({x}, {y})")
                });
            }
        }
        r
    }

    /// `s(γ1)s(γ2) = s(γ1γ2)` for `s(γ) = (b(γ), γ)`.
    pub fn verify_splitting(&self, b: &CocycleMap) -> Report {
        let p = &self.module.plectic;
        let mut r = Report::new();
        for g1 in 0..p.order() {
            for g2 in 0..p.order() {
                let lhs = self.mul(self.section(b, g1), self.section(b, g2));
                r.case(lhs == self.section(b, p.mul(g1, g2)), || {
                    format!("splitting fails at (#{g1}, #{g2})")
                });
            }
        }
        r
    }

    /// Conjugation by `s(γ)` on the kernel `{(m,1)}` is `m ↦ γ⋆m`.
    pub fn verify_kernel_conjugation(&self, b: &CocycleMap) -> Report {
        let md = self.module;
        let mut r = Report::new();
        for g in 0..md.gamma_order() {
            let s = self.section(b, g);
            let si = self.inv(s);
            for m in 0..md.order() {
                let c = self.mul(self.mul(s, self.encode(m, 0)), si);
                r.case(c == self.encode(md.act(g, m), 0), || {
                    format!("conjugation by s(#{g}) on ({m}, 1) is not ⋆")
                });
            }
        }
        r
    }

    /// Text table: a header line with the orders, then `i j -> k`.
    pub fn write_table<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        let n = self.order();
        writeln!(
            out,
            "# twisted extension: order {} = |M| {} x |Gamma| {}; element i = gamma*|M| + m",
            n,
            self.module.order(),
            self.module.gamma_order()
        )?;
        for x in 0..n {
            for y in 0..n {
                writeln!(out, "{x} {y} -> {}", self.mul(x, y))?;
            }
        }
        Ok(())
    }
}

/// Two lifts `b` and `b·z` of one `b̄`: the map `(m,γ) ↦ (m·z(γ), γ)` is an
/// isomorphism `E_b → E_{b·z}` carrying one splitting to the other.
pub fn verify_lift_change(
    module: &GammaModule,
    b: &CocycleMap,
    z: &[usize],
) -> Result<Report, ExtensionError> {
    let b2 = b.twisted_by(module, z);
    let e1 = TwistedExtension::build(module, two_cocycle_from_lift(module, b)?);
    let e2 = TwistedExtension::build(module, two_cocycle_from_lift(module, &b2)?);
    let phi = |x: usize| {
        let (m, g) = e1.decode(x);
        e2.encode(module.mul(m, z[g]), g)
    };
    let n = e1.order();
    let mut r = Report::new();
    let mut seen = vec![false; n];
    for x in 0..n {
        seen[phi(x)] = true;
    }
    r.case(!seen.contains(&false), || {
        "lift-change map is not bijective".into()
    });
    for x in 0..n {
        for y in 0..n {
            r.case(phi(e1.mul(x, y)) == e2.mul(phi(x), phi(y)), || {
                format!("lift-change map is not multiplicative at ({x}, {y})")
            });
        }
    }
    for g in 0..module.gamma_order() {
        r.case(phi(e1.section(b, g)) == e2.section(&b2, g), || {
            format!("lift-change map does not carry s(#{g}) to s'(#{g})")
        });
    }
    Ok(r)
}

/// Multiplies one value of `b` by an element outside `M0` that breaks the
/// cocycle identity. Returns `None` if no single-value change does.
pub fn perturb(module: &GammaModule, b: &CocycleMap) -> Option<CocycleMap> {
    for g in 1..module.gamma_order() {
        for m in module.generators() {
            if module.in_m0(m) {
                continue;
            }
            let mut values = b.values.clone();
            values[g] = module.mul(values[g], m);
            let candidate = CocycleMap { values };
            if !verify_cocycle(module, &candidate).passed() {
                return Some(candidate);
            }
        }
    }
    None
}

/// The diagonal map `M_F → M_{F'}` and inclusion `W#W_F ⊂ W#W_{F'}`
/// between the modules of two fields `F ⊂ F'`.
#[derive(Clone, Debug)]
pub struct ModuleMap<'a> {
    pub coarse: &'a GammaModule,
    pub fine: &'a GammaModule,
    /// Coarse plectic positions to fine ones.
    pub include: Vec<usize>,
    /// Coarse `M` to fine `M`.
    pub diag: Vec<usize>,
}

impl<'a> ModuleMap<'a> {
    pub fn new(coarse: &'a GammaModule, fine: &'a GammaModule) -> Result<Self, ExtensionError> {
        let dm = Diagonal::new(&coarse.datum, &fine.datum)?;
        let include = coarse
            .plectic
            .elements()
            .iter()
            .map(|g| {
                let inc = dm.include(g)?;
                fine.plectic.index_of(&inc).ok_or_else(|| {
                    ExtensionError::Functoriality("included element not found".into())
                })
            })
            .collect::<Result<_, _>>()?;
        let diag = (0..coarse.order())
            .map(|m| fine.encode(&dm.push_value(&coarse.decode(m))))
            .collect();
        Ok(ModuleMap {
            coarse,
            fine,
            include,
            diag,
        })
    }

    /// `diag` is an equivariant homomorphism, carries `b_F` to `b_{F'}` on
    /// the included elements, and `(m,γ) ↦ (diag m, γ)` is a homomorphism
    /// of the twisted extensions.
    pub fn verify(
        &self,
        b_coarse: &CocycleMap,
        b_fine: &CocycleMap,
    ) -> Result<Report, ExtensionError> {
        let (c, f) = (self.coarse, self.fine);
        let mut r = Report::new();
        for m1 in 0..c.order() {
            for m2 in 0..c.order() {
                r.case(
                    self.diag[c.mul(m1, m2)] == f.mul(self.diag[m1], self.diag[m2]),
                    || format!("diag is not multiplicative at ({m1}, {m2})"),
                );
            }
        }
        for g in 0..c.gamma_order() {
            for m in 0..c.order() {
                r.case(
                    self.diag[c.act(g, m)] == f.act(self.include[g], self.diag[m]),
                    || format!("diag is not equivariant at γ = #{g}, m = {m}"),
                );
            }
            r.case(
                self.diag[b_coarse.values[g]] == b_fine.values[self.include[g]],
                || format!("diag b_F(#{g}) ≠ b_F'(γ)"),
            );
        }
        let e1 = TwistedExtension::build(c, two_cocycle_from_lift(c, b_coarse)?);
        let e2 = TwistedExtension::build(f, two_cocycle_from_lift(f, b_fine)?);
        let map = |x: usize| {
            let (m, g) = e1.decode(x);
            e2.encode(self.diag[m], self.include[g])
        };
        let mut sub = Report::new();
        for x in 0..e1.order() {
            for y in 0..e1.order() {
                sub.case(map(e1.mul(x, y)) == e2.mul(map(x), map(y)), || {
                    format!("extension map is not multiplicative at ({x}, {y})")
                });
            }
        }
        r.merge(sub);
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::load_catalog;

    fn zeta8() -> WeilDatum {
        let inst = load_catalog("zeta8").unwrap();
        inst.weil_datum().unwrap().unwrap().0
    }

    #[test]
    fn zeta8_sizes() {
        let m = GammaModule::new(&zeta8(), M0Choice::Trivial).unwrap();
        assert_eq!((m.order(), m.gamma_order()), (4, 4));
        assert!(m.verify_action().passed());
    }

    #[test]
    fn identity_cocycle_gives_semidirect_product() {
        let m = GammaModule::new(&zeta8(), M0Choice::Trivial).unwrap();
        let b = CocycleMap::identity(&m);
        assert!(verify_cocycle(&m, &b).passed());
        assert!(verify_invariance(&m, &b).passed());
        let d = two_cocycle_from_lift(&m, &b).unwrap();
        assert!(d.d.iter().all(|&x| x == 0));
        let e = TwistedExtension::build(&m, d);
        assert!(e.verify_group_axioms().passed());
    }

    #[test]
    fn encode_round_trip() {
        let m = GammaModule::new(&zeta8(), M0Choice::Constants).unwrap();
        for x in 0..m.order() {
            assert_eq!(m.encode(&m.decode(x)), x);
            assert_eq!(m.mul(x, m.inv(x)), 0);
        }
    }
}
