//! Tate's half-transfer `Γ_Q → Γ_K^ab`, its extension to `G#Γ_F`, and
//! Nekovář's formula in wreath coordinates.
//!
//! Values are positions in the abelianization `H^ab`.

use thiserror::Error;

use crate::cm::{CmError, CmInstance, CmType, ConjSection};
use crate::group::{abelianization, CosetSection, GroupError, QuotientGroup};
use crate::plectic::{PlecticElement, WreathDatum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HalfTransferError {
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("plectic element is not over (G, Γ_F)")]
    WrongDomain,
    #[error("wreath entry at coset {0} lies outside Γ_F")]
    EntryOutsideF(usize),
}

/// Half-transfer maps for one CM instance, with `H^ab` cached.
#[derive(Clone, Debug)]
pub struct HalfTransfer {
    pub instance: CmInstance,
    pub hab: QuotientGroup,
}

/// One factor `h_φ(α) = w_{αφ}⁻¹ α(w_φ)`, before abelianizing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub phi: usize,
    pub element: usize,
}

impl HalfTransfer {
    pub fn new(instance: &CmInstance) -> Self {
        HalfTransfer {
            instance: instance.clone(),
            hab: abelianization(&instance.h),
        }
    }

    /// `F_Φ(g) = ∏_{ρ∈Φ} w_{gρ}⁻¹ g w_ρ` in `H^ab`.
    pub fn tate(
        &self,
        phi: &CmType,
        g: usize,
        w: &ConjSection,
    ) -> Result<usize, HalfTransferError> {
        let k = &self.instance;
        k.check_cm_type(phi)?;
        k.check_section(w)?;
        let grp = &k.group;
        Ok(self.abelianize(phi.members.iter().map(|&rho| {
            let target = k.sigma_k.act(g, rho);
            grp.product([grp.inv(w.w[target]), g, w.w[rho]])
        })))
    }

    /// `F_Φ(α) = ∏_{φ∈Φ} w_{αφ}⁻¹ α(w_φ)` in `H^ab`.
    pub fn plectic(
        &self,
        phi: &CmType,
        alpha: &PlecticElement,
        w: &ConjSection,
    ) -> Result<usize, HalfTransferError> {
        let factors = self.factors(phi, alpha, w)?;
        Ok(self.abelianize(factors.iter().map(|f| f.element)))
    }

    /// The factors `h_φ(α)` in coset-id order.
    pub fn factors(
        &self,
        phi: &CmType,
        alpha: &PlecticElement,
        w: &ConjSection,
    ) -> Result<Vec<Factor>, HalfTransferError> {
        let k = &self.instance;
        if alpha.subgroup() != &k.f {
            return Err(HalfTransferError::WrongDomain);
        }
        k.check_cm_type(phi)?;
        k.check_section(w)?;
        let g = &k.group;
        Ok(phi
            .members
            .iter()
            .map(|&p| {
                let image = alpha.apply(w.w[p]);
                let target = k.sigma_k.pos(image);
                Factor {
                    phi: p,
                    element: g.mul(g.inv(w.w[target]), image),
                }
            })
            .collect())
    }

    /// Nekovář's formula
    /// `∏_x s_{πx}⁻¹ c^{a_x + h̄_x} s_{πx} h_x s_x⁻¹ c^{a_x} s_x`
    /// for wreath data relative to a section `s` of `G/Γ_F`.
    pub fn nekovar(
        &self,
        a: &[u8],
        wreath: &WreathDatum,
        s: &CosetSection,
    ) -> Result<usize, HalfTransferError> {
        let k = &self.instance;
        s.validate(&k.sigma_f)?;
        let g = &k.group;
        let c_pow = |e: u8| if e & 1 == 1 { k.c } else { 0 };
        let mut items = Vec::with_capacity(a.len());
        for x in 0..a.len() {
            let hx = wreath.h[x];
            if !k.f.contains(hx) {
                return Err(HalfTransferError::EntryOutsideF(x));
            }
            let hbar = u8::from(!k.h.contains(hx));
            let sp = s.reps[wreath.pi[x]];
            let sx = s.reps[x];
            items.push(g.product([
                g.inv(sp),
                c_pow(a[x] + hbar),
                sp,
                hx,
                g.inv(sx),
                c_pow(a[x]),
                sx,
            ]));
        }
        Ok(self.abelianize(items))
    }

    /// Product of elements of `H` in `H^ab`.
    pub fn abelianize<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.hab.identity(), |acc, x| {
            self.hab.mul(
                acc,
                self.hab.project(x).expect("half-transfer factor lies in H"),
            )
        })
    }

    pub fn format(&self, value: usize) -> String {
        self.instance.group.format(self.hab.lift(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::validate_cm;
    use crate::group::{FiniteGroup, Subgroup};

    #[test]
    fn zeta8_spot_value_under_every_section() {
        // points are the residues 1,3,5,7 mod 8
        let g = FiniteGroup::from_cycle_text(4, "(1 2)(3 4); (1 3)(2 4)").unwrap();
        let h = Subgroup::from_cycle_text(&g, "(1 3)(2 4)").unwrap();
        let c = g.parse_element("(1 4)(2 3)").unwrap();
        let k = validate_cm(&g, &h, c).unwrap();
        let ht = HalfTransfer::new(&k);
        let phi = k.cm_type_from_ids(&[1]).unwrap();
        let sigma3 = g.parse_element("(1 2)(3 4)").unwrap();
        for w in k.enumerate_sections() {
            assert_eq!(ht.format(ht.tate(&phi, sigma3, &w).unwrap()), "(1 3)(2 4)");
            assert_eq!(ht.tate(&phi, c, &w).unwrap(), 0);
        }
    }
}
