//! Finite models of CM fields, totally real fields, CM types and
//! conjugation-compatible sections.
//!
//! A CM field `K` with Galois closure `L` is modelled by `(G, H, c)`: `G` for
//! `Gal(L/Q)`, `H` for `Gal(L/K)` and `c` for complex conjugation. Embeddings
//! `Σ_K` are the left cosets `G/H`.

use thiserror::Error;

use crate::group::{CosetSection, FiniteGroup, GroupError, LeftCosets, Subgroup};
use crate::plectic::PlecticElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("c is not an involution (c² ≠ 1 or c = 1)")]
    NotInvolution,
    #[error("c lies in H")]
    ConjugationInH,
    #[error("CM condition fails: s⁻¹cs ∉ cH for s = {witness}")]
    NotCm { witness: String },
    #[error("H ∪ cH is not a subgroup")]
    NotSubgroupUnion,
    #[error("totally real condition fails: s⁻¹cs ∉ Γ_F for s = {witness}")]
    NotTotallyReal { witness: String },
    #[error("not a CM type: {0}")]
    BadCmType(String),
    #[error("section is not conjugation compatible: {0}")]
    BadSection(String),
    #[error("subgroups are not nested")]
    NotNested,
    #[error("instances have different ambient data")]
    Mismatch,
}

/// Validated `(G, Γ_F, c)` with `s⁻¹cs ∈ Γ_F` for every `s`.
#[derive(Clone, Debug)]
pub struct TotallyRealInstance {
    pub group: FiniteGroup,
    pub f: Subgroup,
    pub c: usize,
    pub sigma_f: LeftCosets,
}

pub fn validate_totally_real(
    group: &FiniteGroup,
    f: &Subgroup,
    c: usize,
) -> Result<TotallyRealInstance, CmError> {
    if c == 0 || group.mul(c, c) != 0 {
        return Err(CmError::NotInvolution);
    }
    for s in 0..group.order() {
        if !f.contains(group.conj(group.inv(s), c)) {
            return Err(CmError::NotTotallyReal {
                witness: group.format(s),
            });
        }
    }
    Ok(TotallyRealInstance {
        group: group.clone(),
        f: f.clone(),
        c,
        sigma_f: LeftCosets::of(f),
    })
}

/// Validated `(G, H, c)` with `Γ_F = H ∪ cH`.
#[derive(Clone, Debug)]
pub struct CmInstance {
    pub group: FiniteGroup,
    pub h: Subgroup,
    pub c: usize,
    pub f: Subgroup,
    pub sigma_k: LeftCosets,
    pub sigma_f: LeftCosets,
}

pub fn validate_cm(group: &FiniteGroup, h: &Subgroup, c: usize) -> Result<CmInstance, CmError> {
    if c == 0 || group.mul(c, c) != 0 {
        return Err(CmError::NotInvolution);
    }
    if h.contains(c) {
        return Err(CmError::ConjugationInH);
    }
    for s in 0..group.order() {
        let t = group.conj(group.inv(s), c);
        if !h.contains(group.mul(c, t)) {
            return Err(CmError::NotCm {
                witness: group.format(s),
            });
        }
    }
    let mut union: Vec<usize> = h.members().to_vec();
    union.extend(h.members().iter().map(|&x| group.mul(c, x)));
    let f = Subgroup::from_members(group, &union).map_err(|_| CmError::NotSubgroupUnion)?;
    Ok(CmInstance {
        group: group.clone(),
        h: h.clone(),
        c,
        sigma_k: LeftCosets::of(h),
        sigma_f: LeftCosets::of(&f),
        f,
    })
}

impl CmInstance {
    pub fn totally_real(&self) -> Result<TotallyRealInstance, CmError> {
        validate_totally_real(&self.group, &self.f, self.c)
    }

    /// Position of `cρ` in `Σ_K`.
    pub fn conj_pos(&self, rho: usize) -> usize {
        self.sigma_k.act(self.c, rho)
    }

    /// Restriction `Σ_K → Σ_F`.
    pub fn restrict(&self, rho: usize) -> usize {
        self.sigma_f.pos(self.sigma_k.id(rho))
    }

    /// Pairs `{ρ, cρ}` with the lower position first.
    pub fn conj_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.sigma_k.len())
            .filter_map(|r| {
                let cr = self.conj_pos(r);
                (r < cr).then_some((r, cr))
            })
            .collect()
    }

    /// The instance `(G, uHu⁻¹, c)`.
    pub fn conjugate(&self, u: usize) -> Result<CmInstance, CmError> {
        validate_cm(&self.group, &self.h.conjugate(u), self.c)
    }

    /// The instance for a subgroup `H' ≤ H` with the same `c`.
    pub fn finer(&self, h_prime: &Subgroup) -> Result<CmInstance, CmError> {
        if !h_prime.is_subgroup_of(&self.h) {
            return Err(CmError::NotNested);
        }
        validate_cm(&self.group, h_prime, self.c)
    }

    pub fn cm_type_count(&self) -> usize {
        1 << (self.sigma_k.len() / 2)
    }

    /// Every CM type, indexed by bit vectors over the conjugate pairs: bit
    /// `k` set picks the upper member of pair `k`.
    pub fn enumerate_cm_types(&self) -> Vec<CmType> {
        let pairs = self.conj_pairs();
        (0..1usize << pairs.len())
            .map(|bits| {
                let mut members: Vec<usize> = pairs
                    .iter()
                    .enumerate()
                    .map(|(k, &(lo, hi))| if bits >> k & 1 == 1 { hi } else { lo })
                    .collect();
                members.sort_unstable();
                CmType { members }
            })
            .collect()
    }

    /// Every section with `w_{cρ} = c w_ρ`.
    pub fn enumerate_sections(&self) -> Vec<ConjSection> {
        let pairs = self.conj_pairs();
        let choices: Vec<&[usize]> = pairs
            .iter()
            .map(|&(lo, _)| self.sigma_k.members(lo))
            .collect();
        crate::group::cartesian(&choices)
            .into_iter()
            .map(|pick| {
                let mut w = vec![0; self.sigma_k.len()];
                for (&(lo, hi), &x) in pairs.iter().zip(&pick) {
                    w[lo] = x;
                    w[hi] = self.group.mul(self.c, x);
                }
                ConjSection { w }
            })
            .collect()
    }

    /// `w_{c^b s_x H} = c^b s_x` for a section `s` of `G/Γ_F`.
    pub fn section_from_f_section(&self, s: &CosetSection) -> ConjSection {
        let mut w = vec![0; self.sigma_k.len()];
        for &sx in &s.reps {
            let lo = self.sigma_k.pos(sx);
            w[lo] = sx;
            let cx = self.group.mul(self.c, sx);
            w[self.sigma_k.pos(cx)] = cx;
        }
        ConjSection { w }
    }

    /// Canonical section: least element in the lower member of each pair.
    pub fn canonical_section(&self) -> ConjSection {
        self.enumerate_sections().swap_remove(0)
    }

    /// Validates an explicit conjugation-compatible section.
    pub fn check_section(&self, w: &ConjSection) -> Result<(), CmError> {
        if w.w.len() != self.sigma_k.len() {
            return Err(CmError::BadSection("wrong length".into()));
        }
        for (rho, &x) in w.w.iter().enumerate() {
            if self.sigma_k.pos(x) != rho {
                return Err(CmError::BadSection(format!("w_{rho} outside its coset")));
            }
            if w.w[self.conj_pos(rho)] != self.group.mul(self.c, x) {
                return Err(CmError::BadSection(format!("w_c{rho} ≠ c w_{rho}")));
            }
        }
        Ok(())
    }

    pub fn check_cm_type(&self, phi: &CmType) -> Result<(), CmError> {
        let n = self.sigma_k.len();
        let mut mark = vec![false; n];
        for &m in &phi.members {
            if m >= n {
                return Err(CmError::BadCmType(format!("position {m} out of range")));
            }
            mark[m] = true;
        }
        for r in 0..n {
            if mark[r] == mark[self.conj_pos(r)] {
                return Err(CmError::BadCmType(format!(
                    "coset {} and its conjugate are both {}",
                    self.sigma_k.id(r) + 1,
                    if mark[r] { "in" } else { "out" }
                )));
            }
        }
        Ok(())
    }

    /// CM type from 1-based coset ids.
    pub fn cm_type_from_ids(&self, ids: &[usize]) -> Result<CmType, CmError> {
        let mut members = Vec::new();
        for &id in ids {
            let pos = id
                .checked_sub(1)
                .and_then(|i| self.sigma_k.position_of_id(i))
                .ok_or_else(|| CmError::BadCmType(format!("{id} is not a coset id")))?;
            members.push(pos);
        }
        members.sort_unstable();
        members.dedup();
        let phi = CmType { members };
        self.check_cm_type(&phi)?;
        Ok(phi)
    }

    pub fn cm_type_ids(&self, phi: &CmType) -> Vec<usize> {
        phi.members
            .iter()
            .map(|&p| self.sigma_k.id(p) + 1)
            .collect()
    }

    /// `φ_x = c^{a_x} s_x H` for a section `s` of `G/Γ_F`.
    pub fn cm_type_from_bits(&self, s: &CosetSection, a: &[u8]) -> CmType {
        let mut members: Vec<usize> = s
            .reps
            .iter()
            .zip(a)
            .map(|(&sx, &ax)| {
                let x = if ax & 1 == 1 {
                    self.group.mul(self.c, sx)
                } else {
                    sx
                };
                self.sigma_k.pos(x)
            })
            .collect();
        members.sort_unstable();
        CmType { members }
    }

    /// Inverse of [`cm_type_from_bits`](Self::cm_type_from_bits).
    pub fn bits_of(&self, phi: &CmType, s: &CosetSection) -> Vec<u8> {
        s.reps
            .iter()
            .map(|&sx| u8::from(!phi.contains(self.sigma_k.pos(sx))))
            .collect()
    }

    /// `Φ' = {ρ' ∈ Σ_{K'} : ρ'|_K ∈ Φ}` for the finer instance `(G, H', c)`.
    pub fn induced_cm_type(&self, phi: &CmType, finer: &CmInstance) -> Result<CmType, CmError> {
        if !finer.h.is_subgroup_of(&self.h) || finer.c != self.c {
            return Err(CmError::NotNested);
        }
        let members = (0..finer.sigma_k.len())
            .filter(|&r| phi.contains(self.sigma_k.pos(finer.sigma_k.id(r))))
            .collect();
        Ok(CmType { members })
    }

    /// `Φu⁻¹` as a CM type of `conjugated = (G, uHu⁻¹, c)`.
    pub fn transported_cm_type(&self, phi: &CmType, u: usize, conjugated: &CmInstance) -> CmType {
        let ui = self.group.inv(u);
        let mut members: Vec<usize> = phi
            .members
            .iter()
            .map(|&r| {
                conjugated
                    .sigma_k
                    .pos(self.group.mul(self.sigma_k.id(r), ui))
            })
            .collect();
        members.sort_unstable();
        CmType { members }
    }

    /// `αΦ` for `α ∈ G#Γ_F`.
    pub fn act_on_cm_type(&self, alpha: &PlecticElement, phi: &CmType) -> CmType {
        let perm = alpha.coset_action(&self.sigma_k);
        let mut members: Vec<usize> = phi.members.iter().map(|&r| perm[r]).collect();
        members.sort_unstable();
        CmType { members }
    }
}

/// A CM type, as sorted positions in `Σ_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CmType {
    pub members: Vec<usize>,
}

impl CmType {
    pub fn contains(&self, rho: usize) -> bool {
        self.members.binary_search(&rho).is_ok()
    }
}

/// `w_ρ` for each `ρ ∈ Σ_K`, indexed by position, with `w_{cρ} = c w_ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjSection {
    pub w: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta8() -> CmInstance {
        // points 1,3,5,7 mod 8; mult-by-3 = (1 2)(3 4), mult-by-5 = (1 3)(2 4)
        let g = FiniteGroup::from_cycle_text(4, "(1 2)(3 4); (1 3)(2 4)").unwrap();
        let h = Subgroup::from_cycle_text(&g, "(1 3)(2 4)").unwrap();
        let c = g.parse_element("(1 4)(2 3)").unwrap();
        validate_cm(&g, &h, c).unwrap()
    }

    #[test]
    fn zeta8_counts() {
        let k = zeta8();
        assert_eq!(k.f.order(), 4);
        assert_eq!(k.enumerate_cm_types().len(), 2);
        assert_eq!(k.enumerate_sections().len(), 2);
        for w in k.enumerate_sections() {
            k.check_section(&w).unwrap();
        }
    }

    #[test]
    fn c_in_h_rejected() {
        let g = FiniteGroup::from_cycle_text(4, "(1 2)(3 4); (1 3)(2 4)").unwrap();
        let h = Subgroup::from_cycle_text(&g, "(1 4)(2 3)").unwrap();
        let c = g.parse_element("(1 4)(2 3)").unwrap();
        assert_eq!(validate_cm(&g, &h, c).unwrap_err(), CmError::ConjugationInH);
    }

    #[test]
    fn conjugating_by_c_swaps_zeta8_types() {
        let k = zeta8();
        let types = k.enumerate_cm_types();
        let moved = k.transported_cm_type(&types[0], k.c, &k.conjugate(k.c).unwrap());
        assert_eq!(moved, types[1]);
    }
}
