//! Character lattice of `T_{F⊗E} ≅ T_E^{Σ_F}` and its Serre sublattice.
//!
//! Characters are dense integer vectors indexed by pairs `(j, σ)` with `j` a
//! position in `Σ_F = Γ/Γ_F` and `σ` an element index of `Γ`. Storage uses
//! the tensor labels `[j⊗σ]`; the projection labels `[j,σ] = [σj⊗σ]` are
//! reached through [`SerreLattice::projection`] and
//! [`SerreLattice::from_projection`], so that `b_{j⊗σ} = a_{σ⁻¹j,σ}`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, LeftCosets, Subgroup};
use crate::plectic::PlecticElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("c must be an involution different from 1")]
    BadConjugation,
    #[error("c does not fix every embedding of F")]
    NotTotallyReal,
    #[error("character has length {found}, expected {expected}")]
    Length { found: usize, expected: usize },
    #[error("not a CM type of E: {0}")]
    BadCmType(String),
    #[error("plectic element is not over (Γ, Γ_F)")]
    WrongDomain,
    #[error("character text: {0}")]
    Syntax(String),
}

/// An integer character in tensor labels `b_{j⊗σ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterVector {
    pub coeffs: Vec<i64>,
}

impl CharacterVector {
    pub fn zero(len: usize) -> Self {
        CharacterVector {
            coeffs: vec![0; len],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CharacterVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        CharacterVector {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }
}

/// Action of `Γ` on `Σ_K` together with a CM type, as needed for the
/// reflex-norm character map.
#[derive(Clone, Debug)]
pub struct ReflexData {
    /// `act[σ][ρ]` is the position of `σρ` in `Σ_K`.
    pub act: Vec<Vec<usize>>,
    /// `phi[j]` is the position of the unique `φ_j ∈ Φ` above `j ∈ Σ_F`.
    pub phi: Vec<usize>,
}

/// `X*(T_{F⊗E})` with its Serre sublattice for `(Γ, Γ_F, c)`.
#[derive(Clone, Debug)]
pub struct SerreLattice {
    gamma: FiniteGroup,
    f: Subgroup,
    c: usize,
    sigma_f: LeftCosets,
    reps: Vec<usize>,
    basis: Vec<CharacterVector>,
}

impl SerreLattice {
    pub fn new(gamma: &FiniteGroup, f: &Subgroup, c: usize) -> Result<Self, LatticeError> {
        if c == 0 || gamma.mul(c, c) != 0 {
            return Err(LatticeError::BadConjugation);
        }
        if (0..gamma.order()).any(|s| !f.contains(gamma.conj(gamma.inv(s), c))) {
            return Err(LatticeError::NotTotallyReal);
        }
        let reps: Vec<usize> = (0..gamma.order())
            .filter(|&s| s < gamma.mul(c, s))
            .collect();
        let mut lattice = SerreLattice {
            gamma: gamma.clone(),
            f: f.clone(),
            c,
            sigma_f: LeftCosets::of(f),
            reps,
            basis: Vec::new(),
        };
        let mut basis = Vec::new();
        for j in 0..lattice.sigma_f.len() {
            let mut a = vec![0; lattice.len()];
            for &s in &lattice.reps {
                a[lattice.index(j, s)] = 1;
            }
            basis.push(lattice.from_projection(&a));
            for &s in &lattice.reps {
                let mut a = vec![0; lattice.len()];
                a[lattice.index(j, s)] = 1;
                a[lattice.index(j, gamma.mul(c, s))] = -1;
                basis.push(lattice.from_projection(&a));
            }
        }
        lattice.basis = basis;
        Ok(lattice)
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    pub fn f(&self) -> &Subgroup {
        &self.f
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn sigma_f(&self) -> &LeftCosets {
        &self.sigma_f
    }

    /// Lower member of each pair `{σ, cσ}`.
    pub fn pair_reps(&self) -> &[usize] {
        &self.reps
    }

    /// Dimension of the ambient lattice, `|Σ_F|·|Γ|`.
    pub fn len(&self) -> usize {
        self.sigma_f.len() * self.gamma.order()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, j: usize, sigma: usize) -> usize {
        j * self.gamma.order() + sigma
    }

    /// Inverse of [`index`](Self::index).
    pub fn pair(&self, idx: usize) -> (usize, usize) {
        (idx / self.gamma.order(), idx % self.gamma.order())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CharacterVector] {
        &self.basis
    }

    /// `σj` for `j ∈ Σ_F`.
    pub fn act_on_sigma_f(&self, sigma: usize, j: usize) -> usize {
        self.sigma_f.act(sigma, j)
    }

    fn check_len(&self, chi: &CharacterVector) -> Result<(), LatticeError> {
        if chi.coeffs.len() != self.len() {
            return Err(LatticeError::Length {
                found: chi.coeffs.len(),
                expected: self.len(),
            });
        }
        Ok(())
    }

    /// Projection labels `a_{j,σ} = b_{σj⊗σ}`.
    pub fn projection(&self, chi: &CharacterVector) -> Vec<i64> {
        let mut a = vec![0; self.len()];
        for j in 0..self.sigma_f.len() {
            for s in 0..self.gamma.order() {
                a[self.index(j, s)] = chi.coeffs[self.index(self.act_on_sigma_f(s, j), s)];
            }
        }
        a
    }

    /// Character from projection labels, `b_{j⊗σ} = a_{σ⁻¹j,σ}`.
    pub fn from_projection(&self, a: &[i64]) -> CharacterVector {
        let mut b = vec![0; self.len()];
        for j in 0..self.sigma_f.len() {
            for s in 0..self.gamma.order() {
                let sj = self.act_on_sigma_f(self.gamma.inv(s), j);
                b[self.index(j, s)] = a[self.index(sj, s)];
            }
        }
        CharacterVector { coeffs: b }
    }

    /// The weights `w_j` if `a_{j,σ} + a_{j,cσ} = w_j` for all `σ`.
    pub fn weights(&self, chi: &CharacterVector) -> Option<Vec<i64>> {
        if chi.coeffs.len() != self.len() {
            return None;
        }
        let a = self.projection(chi);
        let mut w = Vec::with_capacity(self.sigma_f.len());
        for j in 0..self.sigma_f.len() {
            let sum = |s: usize| a[self.index(j, s)] + a[self.index(j, self.gamma.mul(self.c, s))];
            let wj = sum(0);
            if (0..self.gamma.order()).any(|s| sum(s) != wj) {
                return None;
            }
            w.push(wj);
        }
        Some(w)
    }

    pub fn is_serre(&self, chi: &CharacterVector) -> bool {
        self.weights(chi).is_some()
    }

    /// Coordinates in [`basis`](Self::basis): per `j`, the weight `w_j`
    /// followed by `-a_{j,cσ}` for each pair representative `σ`.
    pub fn coordinates(&self, chi: &CharacterVector) -> Option<Vec<i64>> {
        let w = self.weights(chi)?;
        let a = self.projection(chi);
        let mut out = Vec::with_capacity(self.rank());
        for (j, &wj) in w.iter().enumerate() {
            out.push(wj);
            for &s in &self.reps {
                out.push(-a[self.index(j, self.gamma.mul(self.c, s))]);
            }
        }
        Some(out)
    }

    pub fn from_coordinates(&self, coords: &[i64]) -> CharacterVector {
        let mut acc = CharacterVector::zero(self.len());
        for (k, &x) in coords.iter().enumerate() {
            if x != 0 {
                acc = acc.add(&self.basis[k].scale(x));
            }
        }
        acc
    }

    /// Arithmetic action `[j⊗σ] ↦ [τj⊗τσ]`.
    pub fn arithmetic_action(&self, tau: usize, chi: &CharacterVector) -> CharacterVector {
        let mut out = vec![0; self.len()];
        for j in 0..self.sigma_f.len() {
            for s in 0..self.gamma.order() {
                let target = self.index(self.act_on_sigma_f(tau, j), self.gamma.mul(tau, s));
                out[target] = chi.coeffs[self.index(j, s)];
            }
        }
        CharacterVector { coeffs: out }
    }

    /// `j(g) : x ↦ g(x u) u⁻¹` for `u` any element of the coset `j`.
    pub fn j_of(&self, g: &PlecticElement, j: usize) -> Vec<usize> {
        let grp = &self.gamma;
        let u = self.sigma_f.id(j);
        let ui = grp.inv(u);
        (0..grp.order())
            .map(|x| grp.mul(g.apply(grp.mul(x, u)), ui))
            .collect()
    }

    /// Algebraic action `[j⊗σ] ↦ [j⊗σ_j(g)]` with
    /// `σ_j(g) = (j(g)⁻¹(σ⁻¹))⁻¹`.
    pub fn algebraic_action(
        &self,
        g: &PlecticElement,
        chi: &CharacterVector,
    ) -> Result<CharacterVector, LatticeError> {
        if g.subgroup() != &self.f {
            return Err(LatticeError::WrongDomain);
        }
        self.check_len(chi)?;
        let grp = &self.gamma;
        let mut out = vec![0; self.len()];
        for j in 0..self.sigma_f.len() {
            let jg = self.j_of(g, j);
            let mut jg_inv = vec![0; jg.len()];
            for (x, &y) in jg.iter().enumerate() {
                jg_inv[y] = x;
            }
            for s in 0..grp.order() {
                let moved = grp.inv(jg_inv[grp.inv(s)]);
                out[self.index(j, moved)] = chi.coeffs[self.index(j, s)];
            }
        }
        Ok(CharacterVector { coeffs: out })
    }

    /// Whether `phi` (indexed by element of `Γ`) holds exactly one of each `{σ, cσ}`.
    pub fn check_cm_type_of_e(&self, phi: &[bool]) -> Result<(), LatticeError> {
        if phi.len() != self.gamma.order() {
            return Err(LatticeError::BadCmType("wrong length".into()));
        }
        for s in 0..phi.len() {
            if phi[s] == phi[self.gamma.mul(self.c, s)] {
                return Err(LatticeError::BadCmType(format!(
                    "{} and its conjugate agree",
                    self.gamma.format(s)
                )));
            }
        }
        Ok(())
    }

    /// `a_{j,σ} = 1` iff `j = j0` and `σ ∈ Φ_E`.
    pub fn cm_pullback(&self, j0: usize, phi: &[bool]) -> Result<CharacterVector, LatticeError> {
        self.check_cm_type_of_e(phi)?;
        let mut a = vec![0; self.len()];
        for (s, &m) in phi.iter().enumerate() {
            if m {
                a[self.index(j0, s)] = 1;
            }
        }
        Ok(self.from_projection(&a))
    }

    /// Recovers `(j0, Φ_E)` from a character of CM-pullback shape.
    pub fn classify_cm_pullback(&self, chi: &CharacterVector) -> Option<(usize, Vec<bool>)> {
        if chi.coeffs.len() != self.len() {
            return None;
        }
        let a = self.projection(chi);
        if a.iter().any(|&x| x != 0 && x != 1) {
            return None;
        }
        let rows: Vec<usize> = (0..self.sigma_f.len())
            .filter(|&j| (0..self.gamma.order()).any(|s| a[self.index(j, s)] != 0))
            .collect();
        let [j0] = rows[..] else { return None };
        let phi: Vec<bool> = (0..self.gamma.order())
            .map(|s| a[self.index(j0, s)] == 1)
            .collect();
        self.check_cm_type_of_e(&phi).ok()?;
        Some((j0, phi))
    }

    /// `[i] ↦ Σ_{j,σ} [σ⁻¹i = φ_j] [j,σ]`.
    pub fn reflex_norm_character(&self, data: &ReflexData, i: usize) -> CharacterVector {
        let mut a = vec![0; self.len()];
        for j in 0..self.sigma_f.len() {
            for s in 0..self.gamma.order() {
                if data.act[self.gamma.inv(s)][i] == data.phi[j] {
                    a[self.index(j, s)] = 1;
                }
            }
        }
        self.from_projection(&a)
    }

    /// The same map written in tensor labels:
    /// `[i] ↦ Σ_{j,σ} [σ⁻¹i = φ_{σ⁻¹j}] [j⊗σ]`.
    pub fn reflex_norm_character_tensor(&self, data: &ReflexData, i: usize) -> CharacterVector {
        let mut b = vec![0; self.len()];
        for j in 0..self.sigma_f.len() {
            for s in 0..self.gamma.order() {
                let si = self.gamma.inv(s);
                if data.act[si][i] == data.phi[self.act_on_sigma_f(si, j)] {
                    b[self.index(j, s)] = 1;
                }
            }
        }
        CharacterVector { coeffs: b }
    }

    /// One `j:σ=coeff` line per nonzero tensor coefficient, `j` as a
    /// 1-based coset id and `σ` in cycle notation.
    pub fn format(&self, chi: &CharacterVector) -> String {
        let mut out = String::new();
        for (idx, &x) in chi.coeffs.iter().enumerate() {
            if x != 0 {
                let (j, s) = self.pair(idx);
                let _ = writeln!(
                    out,
                    "{}:{}={}",
                    self.sigma_f.id(j) + 1,
                    self.gamma.format(s),
                    x
                );
            }
        }
        out
    }

    pub fn parse(&self, text: &str) -> Result<CharacterVector, LatticeError> {
        let mut chi = CharacterVector::zero(self.len());
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let err = || LatticeError::Syntax(format!("bad line `{line}`"));
            let (j, rest) = line.split_once(':').ok_or_else(err)?;
            let (s, x) = rest.rsplit_once('=').ok_or_else(err)?;
            let j: usize = j.trim().parse().map_err(|_| err())?;
            let j = j
                .checked_sub(1)
                .and_then(|id| self.sigma_f.position_of_id(id))
                .ok_or_else(err)?;
            let s = self.gamma.parse_element(s.trim())?;
            let x: i64 = x.trim().parse().map_err(|_| err())?;
            chi.coeffs[self.index(j, s)] += x;
        }
        Ok(chi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_level_is_full_rank() {
        let g = FiniteGroup::from_cycle_text(2, "(1 2)").unwrap();
        let l = SerreLattice::new(&g, &Subgroup::whole(&g), 1).unwrap();
        assert_eq!(l.rank(), 2);
        for x in -2..=2 {
            for y in -2..=2 {
                assert!(l.is_serre(&CharacterVector { coeffs: vec![x, y] }));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let g = FiniteGroup::from_cycle_text(4, "(1 2 3 4)").unwrap();
        let f = Subgroup::generated(&g, &[2]);
        let l = SerreLattice::new(&g, &f, 2).unwrap();
        for b in l.basis() {
            assert_eq!(&l.parse(&l.format(b)).unwrap(), b);
        }
    }
}
