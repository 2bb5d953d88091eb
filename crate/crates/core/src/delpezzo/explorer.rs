//! (-1)-classes on the blow-up in nine points, each with a certificate that
//! it spans an extreme ray of the cone generated by the classes found so far
//! together with `-K`.

use serde::Serialize;

use super::{minus_one_classes, pairing_row};
use crate::error::{invalid, Result};
use crate::lattice_pic::PicClass;
use crate::linalg::{cone_contains, dot};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplorerEntry {
    pub class: PicClass,
    /// The functional `D -> D . I` is nonnegative on every other generator
    /// and equals -1 on `I`: a Farkas certificate that `I` is not in the cone
    /// of the others.
    pub certified: bool,
    /// Independent exact-LP confirmation, when requested.
    pub lp_confirmed: Option<bool>,
}

/// All (-1)-classes on `P_9` with `d <= d_max`.
///
/// `I` primitive and outside the cone of the other generators means no
/// splitting `I = D_1 + D_2` into nonzero lattice points of the whole cone.
/// The cone is pointed: `10H - 3 sum E_i` is positive on every generator.
pub fn minus_one_explorer_r9(d_max: i64, exact_lp: bool) -> Result<Vec<ExplorerEntry>> {
    if !(0..=50).contains(&d_max) {
        return invalid("d_max must lie in 0..=50");
    }
    let classes = minus_one_classes(9, Some(d_max))?;
    let mut gens: Vec<Vec<i64>> = classes.iter().map(|c| c.coeffs().to_vec()).collect();
    gens.push(PicClass::anticanonical(9).into_coeffs());
    let entries = classes
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let y = pairing_row(c);
            let certified =
                dot(&y, c.coeffs()) == -1 && gens.iter().enumerate().all(|(j, g)| j == k || dot(&y, g) >= 0);
            let lp_confirmed = exact_lp.then(|| {
                let others: Vec<Vec<i64>> =
                    gens.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, g)| g.clone()).collect();
                !cone_contains(&others, c.coeffs())
            });
            ExplorerEntry { class: c.clone(), certified, lp_confirmed }
        })
        .collect();
    Ok(entries)
}
