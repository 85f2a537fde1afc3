//! Finite Weil data `1 → A → W → Γ → 1` and the plectic Taniyama element.
//!
//! For `α̃ ∈ W#W_F` the h-vector has entries
//! `h_{j⊗σ} = w_{j(α̃)σ⁻¹}⁻¹ · j(α̃)(w_{σ⁻¹})` in `A`, and the Taniyama value
//! is its pairing with Serre characters, `χ ↦ ∏ h_{j⊗σ}^{b_{j⊗σ}}`.

use thiserror::Error;

use crate::cm::{CmInstance, CmType};
use crate::group::{
    commutator_subgroup, FiniteGroup, GroupError, QuotientGroup, Subgroup, Transfer,
};
use crate::half_transfer::HalfTransfer;
use crate::lattice::{CharacterVector, LatticeError, ReflexData, SerreLattice};
use crate::plectic::{PlecticElement, PlecticError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeilError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Plectic(#[from] PlecticError),
    #[error("A is not abelian")]
    NotAbelian,
    #[error("A is not normal in W")]
    NotNormal,
    #[error("the lift of c is not an involution")]
    LiftNotInvolution,
    #[error("the lift of c projects to the identity of Γ")]
    TrivialConjugation,
    #[error("the lift of c does not project to the given conjugation")]
    WrongProjection,
    #[error("W_F does not contain A")]
    WfMissesA,
    #[error("(Γ, Γ_F, c) is not totally real")]
    NotTotallyReal,
    #[error("c is not central in Γ, so (Γ, 1, c) is not CM")]
    NotCentral,
    #[error("H is not normal in G; the Galois-realized datum needs a Galois CM field")]
    NotGalois,
    #[error("h-vector entry at (j, σ) = ({0}, {1}) lies outside A")]
    EntryOutsideA(usize, usize),
    #[error("Weil section is invalid: {0}")]
    BadSection(String),
    #[error("character is not in the Serre sublattice")]
    NotSerre,
    #[error("nesting of Weil data is invalid: {0}")]
    Nesting(String),
}

/// A validated finite Weil datum with its Serre lattice.
#[derive(Clone, Debug)]
pub struct WeilDatum {
    pub w: FiniteGroup,
    pub a: Subgroup,
    pub w_f: Subgroup,
    pub c_lift: usize,
    pub gamma: FiniteGroup,
    /// `W → Γ` on element indices.
    pub proj: Vec<usize>,
    pub c: usize,
    pub gamma_f: Subgroup,
    pub lattice: SerreLattice,
    /// `fibers[σ]` lists the elements of `W` over `σ ∈ Γ`, ascending.
    pub fibers: Vec<Vec<usize>>,
}

/// `w_σ ∈ W` over each `σ ∈ Γ`, with `w_{cσ} = c̃ w_σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilSection {
    pub w: Vec<usize>,
}

/// Entries `h_{j⊗σ} ∈ A`, flattened as `j·|Γ| + σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HVector {
    pub entries: Vec<usize>,
}

/// Values in `A` of a homomorphism on the Serre sublattice, one per basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TaniyamaValue {
    pub values: Vec<usize>,
}

impl WeilDatum {
    /// Validates `(W, A, c̃, W_F)` where `W_F` is generated by `A` and `f_gens`.
    pub fn new(
        w: &FiniteGroup,
        a: &Subgroup,
        c_lift: usize,
        f_gens: &[usize],
    ) -> Result<Self, WeilError> {
        if !a.is_abelian() {
            return Err(WeilError::NotAbelian);
        }
        if !a.is_normal_in(&Subgroup::whole(w)) {
            return Err(WeilError::NotNormal);
        }
        if w.mul(c_lift, c_lift) != 0 {
            return Err(WeilError::LiftNotInvolution);
        }
        let mut gens = f_gens.to_vec();
        gens.extend_from_slice(a.members());
        let w_f = Subgroup::generated(w, &gens);
        let q = QuotientGroup::new(&Subgroup::whole(w), a)?;
        let (gamma, qmap) = q.permutation_group();
        let proj: Vec<usize> = (0..w.order())
            .map(|x| qmap[q.project(x).expect("every element projects")])
            .collect();
        let c = proj[c_lift];
        if c == 0 {
            return Err(WeilError::TrivialConjugation);
        }
        let gamma_f = w_f.image(&gamma, &proj);
        if (0..gamma.order()).any(|s| !gamma_f.contains(gamma.conj(gamma.inv(s), c))) {
            return Err(WeilError::NotTotallyReal);
        }
        if (0..gamma.order()).any(|s| gamma.mul(s, c) != gamma.mul(c, s)) {
            return Err(WeilError::NotCentral);
        }
        let lattice = SerreLattice::new(&gamma, &gamma_f, c)?;
        let mut fibers = vec![Vec::new(); gamma.order()];
        for (x, &s) in proj.iter().enumerate() {
            fibers[s].push(x);
        }
        Ok(WeilDatum {
            w: w.clone(),
            a: a.clone(),
            w_f,
            c_lift,
            gamma,
            proj,
            c,
            gamma_f,
            lattice,
            fibers,
        })
    }

    /// The same datum with another totally real field, `W_F = ⟨A, f_gens⟩`.
    pub fn with_f(&self, f_gens: &[usize]) -> Result<Self, WeilError> {
        Self::new(&self.w, &self.a, self.c_lift, f_gens)
    }

    /// The same datum with another lift of conjugation.
    pub fn with_c_lift(&self, c_lift: usize) -> Result<Self, WeilError> {
        let d = Self::new(&self.w, &self.a, c_lift, self.w_f.members())?;
        if d.c != self.c {
            return Err(WeilError::WrongProjection);
        }
        Ok(d)
    }

    /// `W = G/[H,H]`, `A = H/[H,H]` for a CM instance with `H` normal, so
    /// that `Γ = G/H` and the reciprocity map is the identity. Returns the
    /// datum and the projection `G → W`.
    pub fn galois_realized(cm: &CmInstance) -> Result<(Self, Vec<usize>), WeilError> {
        Self::galois_realized_with_f(cm, &cm.f)
    }

    /// As [`galois_realized`](Self::galois_realized) with an arbitrary
    /// `Γ_F ⊇ H` in `G`.
    pub fn galois_realized_with_f(
        cm: &CmInstance,
        f: &Subgroup,
    ) -> Result<(Self, Vec<usize>), WeilError> {
        let g = &cm.group;
        if !cm.h.is_normal_in(&Subgroup::whole(g)) {
            return Err(WeilError::NotGalois);
        }
        let n = commutator_subgroup(&cm.h);
        let q = QuotientGroup::new(&Subgroup::whole(g), &n)?;
        let (w, qmap) = q.permutation_group();
        let to_w: Vec<usize> = (0..g.order())
            .map(|x| qmap[q.project(x).expect("every element projects")])
            .collect();
        let a = cm.h.image(&w, &to_w);
        let f_gens: Vec<usize> = f.members().iter().map(|&x| to_w[x]).collect();
        Ok((Self::new(&w, &a, to_w[cm.c], &f_gens)?, to_w))
    }

    /// `W/[H̄,H̄]` with `A = H̄/[H̄,H̄]` for `A ≤ H̄ ⊴ W`: the datum one level
    /// down. Returns the datum and the projection from this `W`.
    pub fn coarsen(&self, hbar: &Subgroup) -> Result<(Self, Vec<usize>), WeilError> {
        let whole = Subgroup::whole(&self.w);
        if !self.a.is_subgroup_of(hbar) || !hbar.is_normal_in(&whole) {
            return Err(WeilError::Nesting("need A ≤ H̄ normal in W".into()));
        }
        let n = commutator_subgroup(hbar);
        if !n.is_normal_in(&whole) {
            return Err(WeilError::Nesting("[H̄,H̄] is not normal in W".into()));
        }
        let q = QuotientGroup::new(&whole, &n)?;
        let (w, qmap) = q.permutation_group();
        let psi: Vec<usize> = (0..self.w.order())
            .map(|x| qmap[q.project(x).expect("every element projects")])
            .collect();
        let a = hbar.image(&w, &psi);
        let f_gens: Vec<usize> = self.w_f.members().iter().map(|&x| psi[x]).collect();
        Ok((Self::new(&w, &a, psi[self.c_lift], &f_gens)?, psi))
    }

    pub fn sigma_f_len(&self) -> usize {
        self.lattice.sigma_f().len()
    }

    /// Every Weil section; there are `|A|^{|Γ|/2}` of them.
    pub fn enumerate_sections(&self) -> Vec<WeilSection> {
        let reps = self.lattice.pair_reps();
        let choices: Vec<&[usize]> = reps.iter().map(|&s| self.fibers[s].as_slice()).collect();
        crate::group::cartesian(&choices)
            .into_iter()
            .map(|pick| {
                let mut w = vec![0; self.gamma.order()];
                for (&s, &x) in reps.iter().zip(&pick) {
                    w[s] = x;
                    w[self.gamma.mul(self.c, s)] = self.w.mul(self.c_lift, x);
                }
                WeilSection { w }
            })
            .collect()
    }

    pub fn section_count(&self) -> usize {
        self.a.order().pow((self.gamma.order() / 2) as u32)
    }

    pub fn canonical_section(&self) -> WeilSection {
        let reps = self.lattice.pair_reps();
        let mut w = vec![0; self.gamma.order()];
        for &s in reps {
            let x = self.fibers[s][0];
            w[s] = x;
            w[self.gamma.mul(self.c, s)] = self.w.mul(self.c_lift, x);
        }
        WeilSection { w }
    }

    pub fn check_section(&self, sec: &WeilSection) -> Result<(), WeilError> {
        if sec.w.len() != self.gamma.order() {
            return Err(WeilError::BadSection("wrong length".into()));
        }
        for (s, &x) in sec.w.iter().enumerate() {
            if self.proj[x] != s {
                return Err(WeilError::BadSection(format!(
                    "w over {} projects wrongly",
                    self.gamma.format(s)
                )));
            }
            if sec.w[self.gamma.mul(self.c, s)] != self.w.mul(self.c_lift, x) {
                return Err(WeilError::BadSection("w_{cσ} ≠ c̃ w_σ".into()));
            }
        }
        Ok(())
    }

    /// The least element of `W` lying over the coset `j ∈ Σ_F`.
    pub fn coset_lift(&self, j: usize) -> usize {
        self.fibers[self.lattice.sigma_f().id(j)][0]
    }

    /// All elements of `W` over the coset `j`.
    pub fn coset_lifts(&self, j: usize) -> Vec<usize> {
        let sf = self.lattice.sigma_f();
        let mut out: Vec<usize> = sf
            .members(j)
            .iter()
            .flat_map(|&s| self.fibers[s].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// `j(α̃) : x ↦ α̃(x ũ) ũ⁻¹` in `W#A`, using the given lift `ũ` of `j`.
    pub fn embed_j_with(&self, alpha: &PlecticElement, u: usize) -> PlecticElement {
        let w = &self.w;
        let ui = w.inv(u);
        let map = (0..w.order())
            .map(|x| w.mul(alpha.apply(w.mul(x, u)), ui))
            .collect();
        PlecticElement::new_unchecked(&self.a, map)
    }

    pub fn embed_j(&self, alpha: &PlecticElement, j: usize) -> PlecticElement {
        self.embed_j_with(alpha, self.coset_lift(j))
    }

    pub fn h_vector(
        &self,
        alpha: &PlecticElement,
        sec: &WeilSection,
    ) -> Result<HVector, WeilError> {
        if alpha.subgroup() != &self.w_f {
            return Err(PlecticError::Mismatch.into());
        }
        let w = &self.w;
        let n = self.gamma.order();
        let mut entries = vec![0; self.sigma_f_len() * n];
        for j in 0..self.sigma_f_len() {
            let je = self.embed_j(alpha, j);
            for s in 0..n {
                let y = je.apply(sec.w[self.gamma.inv(s)]);
                let e = w.mul(w.inv(sec.w[self.proj[y]]), y);
                if !self.a.contains(e) {
                    return Err(WeilError::EntryOutsideA(j, s));
                }
                entries[j * n + s] = e;
            }
        }
        Ok(HVector { entries })
    }

    /// `∏ h_{j⊗σ}^{b_{j⊗σ}}`, for any character.
    pub fn pair(&self, h: &HVector, chi: &CharacterVector) -> usize {
        h.entries
            .iter()
            .zip(&chi.coeffs)
            .fold(0, |acc, (&e, &b)| self.w.mul(acc, self.w.pow(e, b)))
    }

    pub fn taniyama_value(
        &self,
        alpha: &PlecticElement,
        sec: &WeilSection,
    ) -> Result<TaniyamaValue, WeilError> {
        let h = self.h_vector(alpha, sec)?;
        Ok(self.value_from_h(&h))
    }

    pub fn value_from_h(&self, h: &HVector) -> TaniyamaValue {
        TaniyamaValue {
            values: self
                .lattice
                .basis()
                .iter()
                .map(|b| self.pair(h, b))
                .collect(),
        }
    }

    /// Value of `f` on a Serre character, through basis coordinates.
    pub fn eval(&self, f: &TaniyamaValue, chi: &CharacterVector) -> Result<usize, WeilError> {
        let coords = self.lattice.coordinates(chi).ok_or(WeilError::NotSerre)?;
        Ok(self.eval_coords(f, &coords))
    }

    fn eval_coords(&self, f: &TaniyamaValue, coords: &[i64]) -> usize {
        f.values
            .iter()
            .zip(coords)
            .fold(0, |acc, (&v, &k)| self.w.mul(acc, self.w.pow(v, k)))
    }

    pub fn identity_value(&self) -> TaniyamaValue {
        TaniyamaValue {
            values: vec![0; self.lattice.rank()],
        }
    }

    /// Pointwise product.
    pub fn mul_values(&self, f: &TaniyamaValue, g: &TaniyamaValue) -> TaniyamaValue {
        TaniyamaValue {
            values: f
                .values
                .iter()
                .zip(&g.values)
                .map(|(&a, &b)| self.w.mul(a, b))
                .collect(),
        }
    }

    pub fn inv_value(&self, f: &TaniyamaValue) -> TaniyamaValue {
        TaniyamaValue {
            values: f.values.iter().map(|&a| self.w.inv(a)).collect(),
        }
    }

    /// Image of `α̃ ∈ W#W_F` in `Γ#Γ_F`.
    pub fn descend(&self, alpha: &PlecticElement) -> Result<PlecticElement, WeilError> {
        Ok(alpha.descend(&self.proj, &self.gamma_f)?)
    }

    /// Basis coordinates of `ᾱ*` applied to each basis vector: row `k` is
    /// the image of basis vector `k`.
    pub fn star_matrix(&self, alpha_bar: &PlecticElement) -> Result<Vec<Vec<i64>>, WeilError> {
        self.lattice
            .basis()
            .iter()
            .map(|b| {
                let moved = self.lattice.algebraic_action(alpha_bar, b)?;
                self.lattice.coordinates(&moved).ok_or(WeilError::NotSerre)
            })
            .collect()
    }

    /// `(ᾱ⋆f)(χ) = f(ᾱ*χ)`.
    pub fn star_action(
        &self,
        alpha_bar: &PlecticElement,
        f: &TaniyamaValue,
    ) -> Result<TaniyamaValue, WeilError> {
        let m = self.star_matrix(alpha_bar)?;
        Ok(TaniyamaValue {
            values: m.iter().map(|row| self.eval_coords(f, row)).collect(),
        })
    }

    /// `(τf)(χ) = τ̃ f(τ⁻¹ χ) τ̃⁻¹` with `τ⁻¹` acting arithmetically.
    pub fn galois_action(&self, tau: usize, f: &TaniyamaValue) -> Result<TaniyamaValue, WeilError> {
        let lift = self.fibers[tau][0];
        let tau_inv = self.gamma.inv(tau);
        let mut values = Vec::with_capacity(f.values.len());
        for b in self.lattice.basis() {
            let moved = self.lattice.arithmetic_action(tau_inv, b);
            values.push(self.w.conj(lift, self.eval(f, &moved)?));
        }
        Ok(TaniyamaValue { values })
    }

    /// `α(x) = g_{[x]} x` for `g ∈ A^{Σ_F}`, `[x]` the class of `x` in `Σ_F`.
    pub fn diagonal_translation(&self, g: &[usize]) -> PlecticElement {
        let sf = self.lattice.sigma_f();
        let map = (0..self.w.order())
            .map(|x| self.w.mul(g[sf.pos(self.proj[x])], x))
            .collect();
        PlecticElement::new_unchecked(&self.w_f, map)
    }

    /// `∏_{j,σ} (σ̃ g_j σ̃⁻¹)^{a_{j,σ}}` in projection labels.
    pub fn norm_pairing(&self, g: &[usize], chi: &CharacterVector) -> usize {
        let a = self.lattice.projection(chi);
        let mut acc = 0;
        for (j, &gj) in g.iter().enumerate() {
            for s in 0..self.gamma.order() {
                let k = a[self.lattice.index(j, s)];
                if k != 0 {
                    let v = self.w.conj(self.fibers[s][0], gj);
                    acc = self.w.mul(acc, self.w.pow(v, k));
                }
            }
        }
        acc
    }

    /// Reflex data for a Galois CM instance whose Galois-realized datum is
    /// `self`, with `to_w : G → W`.
    pub fn reflex_data(&self, cm: &CmInstance, phi: &CmType, to_w: &[usize]) -> ReflexData {
        let g = &cm.group;
        let mut lift = vec![usize::MAX; self.gamma.order()];
        for x in 0..g.order() {
            let s = self.proj[to_w[x]];
            if lift[s] == usize::MAX {
                lift[s] = x;
            }
        }
        let act = lift.iter().map(|&x| cm.sigma_k.action(x)).collect();
        let sf = self.lattice.sigma_f();
        let mut phi_j = vec![usize::MAX; sf.len()];
        for &p in &phi.members {
            let j = sf.pos(self.proj[to_w[cm.sigma_k.id(p)]]);
            phi_j[j] = p;
        }
        ReflexData { act, phi: phi_j }
    }
}

/// Reflex comparison for a Galois CM instance: for each `i ∈ Σ_K`, the
/// pairing of the h-vector with the reflex character of `i` against
/// `ĩ F_Φ(α) ĩ⁻¹`. Returns `(left, right)` per `i`, as elements of `W`.
pub fn reflex_comparison(
    datum: &WeilDatum,
    to_w: &[usize],
    ht: &HalfTransfer,
    phi: &CmType,
    alpha: &PlecticElement,
    w_cm: &crate::cm::ConjSection,
    sec: &WeilSection,
) -> Result<Vec<(usize, usize)>, WeilError> {
    let cm = &ht.instance;
    let alpha_w = alpha.descend(to_w, &datum.w_f)?;
    let h = datum.h_vector(&alpha_w, sec)?;
    let data = datum.reflex_data(cm, phi, to_w);
    let value = ht
        .plectic(phi, alpha, w_cm)
        .map_err(|e| WeilError::Nesting(e.to_string()))?;
    let f_phi = to_w[ht.hab.lift(value)];
    Ok((0..cm.sigma_k.len())
        .map(|i| {
            let chi = datum.lattice.reflex_norm_character(&data, i);
            let left = datum.pair(&h, &chi);
            let right = datum.w.conj(to_w[cm.sigma_k.id(i)], f_phi);
            (left, right)
        })
        .collect())
}

/// Data for comparing two levels `E ⊂ E'`: the fine datum, the coarse one
/// obtained by [`WeilDatum::coarsen`], and the transfer `A → A'`.
#[derive(Clone, Debug)]
pub struct NormPush {
    pub fine: WeilDatum,
    pub coarse: WeilDatum,
    /// `W' → W`.
    pub psi: Vec<usize>,
    /// `Γ' → Γ`.
    pub gamma_map: Vec<usize>,
    /// `Σ_F` positions at level `E'` to level `E`.
    pub sigma_f_map: Vec<usize>,
    ver: Transfer,
}

impl NormPush {
    /// `hbar` is the preimage in `W'` of `Gal(E'/E)`.
    pub fn new(fine: &WeilDatum, hbar: &Subgroup) -> Result<Self, WeilError> {
        let (coarse, psi) = fine.coarsen(hbar)?;
        let mut gamma_map = vec![usize::MAX; fine.gamma.order()];
        for x in 0..fine.w.order() {
            gamma_map[fine.proj[x]] = coarse.proj[psi[x]];
        }
        let sf_fine = fine.lattice.sigma_f();
        let sf_coarse = coarse.lattice.sigma_f();
        let sigma_f_map: Vec<usize> = (0..sf_fine.len())
            .map(|j| sf_coarse.pos(gamma_map[sf_fine.id(j)]))
            .collect();
        let mut seen = vec![false; sf_coarse.len()];
        for &j in &sigma_f_map {
            seen[j] = true;
        }
        if sigma_f_map.len() != sf_coarse.len() || seen.contains(&false) {
            return Err(WeilError::Nesting("Σ_F differs between levels".into()));
        }
        let ver = Transfer::new(hbar, &fine.a)?;
        Ok(NormPush {
            fine: fine.clone(),
            coarse,
            psi,
            gamma_map,
            sigma_f_map,
            ver,
        })
    }

    /// `b'_{j⊗σ'} = b_{j⊗σ'|_E}`.
    pub fn pull_character(&self, chi: &CharacterVector) -> CharacterVector {
        let lf = &self.fine.lattice;
        let lc = &self.coarse.lattice;
        let mut out = CharacterVector::zero(lf.len());
        for j in 0..lf.sigma_f().len() {
            for s in 0..self.fine.gamma.order() {
                out.coeffs[lf.index(j, s)] =
                    chi.coeffs[lc.index(self.sigma_f_map[j], self.gamma_map[s])];
            }
        }
        out
    }

    /// Transfer `A → A'` of an element of the coarse `A`, as an element of the fine `W`.
    pub fn ver(&self, a: usize) -> usize {
        let lift = (0..self.fine.w.order())
            .find(|&x| self.psi[x] == a && self.ver.source().contains(x))
            .expect("A is the image of H̄");
        let q = self.ver.apply_canonical(lift).expect("lift lies in H̄");
        self.ver.target().lift(q)
    }

    /// Both sides of `Ver(f^E(ᾱ)(χ)) = f^{E'}(α̃)(N*χ)` on every basis
    /// character of the coarse lattice.
    pub fn compare(
        &self,
        alpha: &PlecticElement,
        sec_fine: &WeilSection,
        sec_coarse: &WeilSection,
    ) -> Result<Vec<(usize, usize)>, WeilError> {
        let alpha_bar = alpha.descend(&self.psi, &self.coarse.w_f)?;
        let f_coarse = self.coarse.taniyama_value(&alpha_bar, sec_coarse)?;
        let f_fine = self.fine.taniyama_value(alpha, sec_fine)?;
        let mut out = Vec::new();
        for b in self.coarse.lattice.basis() {
            let left = self.ver(self.coarse.eval(&f_coarse, b)?);
            let right = self.fine.eval(&f_fine, &self.pull_character(b))?;
            out.push((left, right));
        }
        Ok(out)
    }
}

/// The diagonal map between two totally real fields `F ⊂ F'` over the same
/// Weil datum: `Σ_{F'} ↠ Σ_F` by restriction, pushing characters by
/// `b_{j⊗σ} = Σ_{j'|_F = j} b'_{j'⊗σ}`.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub coarse: WeilDatum,
    pub fine: WeilDatum,
    /// `Σ_{F'}` positions to `Σ_F` positions.
    pub restrict: Vec<usize>,
    /// Basis coordinates (in the coarse lattice) of each pushed fine basis vector.
    push_coords: Vec<Vec<i64>>,
}

impl Diagonal {
    /// `coarse` has field `F`, `fine` has `F' ⊇ F`, i.e. `W_{F'} ≤ W_F`.
    pub fn new(coarse: &WeilDatum, fine: &WeilDatum) -> Result<Self, WeilError> {
        if !coarse.w.same(&fine.w) || coarse.a != fine.a || coarse.c_lift != fine.c_lift {
            return Err(WeilError::Nesting(
                "the two fields must share one Weil datum".into(),
            ));
        }
        if !fine.w_f.is_subgroup_of(&coarse.w_f) {
            return Err(WeilError::Nesting("W_F' is not contained in W_F".into()));
        }
        // Γ is the same quotient in both, built identically.
        let sf_fine = fine.lattice.sigma_f();
        let sf_coarse = coarse.lattice.sigma_f();
        let restrict: Vec<usize> = (0..sf_fine.len())
            .map(|j| sf_coarse.pos(sf_fine.id(j)))
            .collect();
        let mut d = Diagonal {
            coarse: coarse.clone(),
            fine: fine.clone(),
            restrict,
            push_coords: Vec::new(),
        };
        d.push_coords = fine
            .lattice
            .basis()
            .iter()
            .map(|b| {
                let pushed = d.push_character(b);
                coarse
                    .lattice
                    .coordinates(&pushed)
                    .ok_or(WeilError::NotSerre)
            })
            .collect::<Result<_, _>>()?;
        Ok(d)
    }

    pub fn push_character(&self, chi: &CharacterVector) -> CharacterVector {
        let lf = &self.fine.lattice;
        let lc = &self.coarse.lattice;
        let mut out = CharacterVector::zero(lc.len());
        for (j, &jc) in self.restrict.iter().enumerate() {
            for s in 0..self.fine.gamma.order() {
                out.coeffs[lc.index(jc, s)] += chi.coeffs[lf.index(j, s)];
            }
        }
        out
    }

    /// `diag(f)(χ') = f(push χ')`.
    pub fn push_value(&self, f: &TaniyamaValue) -> TaniyamaValue {
        TaniyamaValue {
            values: self
                .push_coords
                .iter()
                .map(|row| self.coarse.eval_coords(f, row))
                .collect(),
        }
    }

    /// Inclusion `W#W_F ⊂ W#W_{F'}`.
    pub fn include(&self, alpha: &PlecticElement) -> Result<PlecticElement, WeilError> {
        Ok(alpha.include_into_finer(&self.fine.w_f)?)
    }
}
