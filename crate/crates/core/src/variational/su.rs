use crate::error::{QspError, Result};
use crate::qcore::UnitaryMatrix;
use crate::real::{cis, wrap_angle, Real};

/// The `d` special-unitary rescalings `U·e^{−i(arg det U + 2πj)/d}` of a
/// diagonal unitary of dimension `d`.
pub fn su_candidates<T: Real>(u: &UnitaryMatrix<T>) -> Result<Vec<UnitaryMatrix<T>>> {
    if u.max_off_diagonal() > T::lit(1e-12) {
        return Err(QspError::Config("su_candidates expects a diagonal unitary".into()));
    }
    let d = u.dim();
    let det_arg = u.diagonal().iter().map(|z| z.arg()).fold(T::zero(), |a, b| a + b);
    let two_pi = T::PI() + T::PI();
    let df = T::from_usize_lossy(d);
    Ok((0..d)
        .map(|j| u.scale(cis(-(det_arg + two_pi * T::from_usize_lossy(j)) / df)))
        .collect())
}

/// Index and phase vector of the candidate whose wrapped phases have the
/// smallest largest magnitude (lowest index on ties).
pub fn select_su_representative<T: Real>(candidates: &[UnitaryMatrix<T>]) -> Option<(usize, Vec<T>)> {
    candidates
        .iter()
        .map(|c| c.diagonal().iter().map(|z| wrap_angle(z.arg())).collect::<Vec<T>>())
        .enumerate()
        .min_by(|(ia, a), (ib, b)| {
            let ma = a.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            let mb = b.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            ma.partial_cmp(&mb).unwrap().then(ia.cmp(ib))
        })
}
