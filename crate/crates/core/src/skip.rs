//! The k-skip map Ψ_k: sample η at the sites s_k.

use crate::config::BallConfig;
use crate::error::{BbsError, Result};
use crate::measures::Excursion;
use crate::seat::{Capacity, SeatProfile, Slots};

/// Ψ_k(η)(x) = η(s_k(η, x + ξ_k(η, 0))).
///
/// On the half line ξ_k(η, 0) = 0, so this is η(s_k(η, x)).
pub fn skip(cfg: &BallConfig, k: u32) -> Result<BallConfig> {
    if k == 0 {
        return Err(BbsError::Domain("skip level k must be at least 1".into()));
    }
    let prof = SeatProfile::new(cfg);
    Ok(skip_profile(&prof, k).0)
}

/// Ψ_k from an existing profile, also returning the slots used.
pub fn skip_profile(prof: &SeatProfile, k: u32) -> (BallConfig, Slots) {
    let slots = prof.slots(Capacity::Finite(k));
    let xi0 = slots.xi(0);
    let bits: Vec<u8> = slots.markers().iter().map(|&x| prof.eta(x)).collect();
    let origin = slots.first_index() - xi0;
    (BallConfig::from_parts(origin, bits, prof.boundary()), slots)
}

/// Ψ̃_k(ε) = ι⁻¹ ∘ Ψ_k ∘ ι.
pub fn skip_excursion(eps: &Excursion, k: u32) -> Result<Excursion> {
    let out = skip(&eps.embed(), k)?;
    Excursion::from_config(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, Boundary};
    use crate::seat::zeta_of;

    fn fig() -> BallConfig {
        parse_config("011001110101100010", Boundary::HalfLine).unwrap()
    }

    #[test]
    fn reference_rows() {
        let rows: Vec<String> = (1..=4)
            .map(|k| skip(&fig(), k).unwrap().bit_string())
            .collect();
        assert_eq!(rows, vec!["010111000", "01100", "010", "0"]);
        assert_eq!(skip(&fig(), 1).unwrap().origin(), 0);
    }

    #[test]
    fn semigroup_on_reference() {
        let once = skip(&fig(), 1).unwrap();
        assert_eq!(skip(&once, 1).unwrap(), skip(&fig(), 2).unwrap());
        assert_eq!(skip(&once, 2).unwrap(), skip(&fig(), 3).unwrap());
    }

    #[test]
    fn vacuum_and_zero_level() {
        let v = BallConfig::vacuum(Boundary::WholeLine);
        assert_eq!(skip(&v, 3).unwrap(), v);
        assert!(matches!(skip(&v, 0), Err(BbsError::Domain(_))));
    }

    #[test]
    fn zeta_rows_shift_down() {
        let z = zeta_of(&fig());
        for l in 1..=3 {
            assert_eq!(zeta_of(&skip(&fig(), l).unwrap()), z.drop_levels(l));
        }
    }

    #[test]
    fn excursion_skip_length() {
        let e = Excursion::parse("0110011101011000100").unwrap();
        // Every soliton loses one 1 and one 0: 1 + 2(ζ_2 + 3ζ_4) = 9.
        assert_eq!(skip_excursion(&e, 1).unwrap().len(), 9);
        let trivial = Excursion::parse("0").unwrap();
        assert_eq!(skip_excursion(&trivial, 2).unwrap(), trivial);
    }
}
