use std::cmp::Ordering;

use super::MixtureWeights;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Euclidean projection of `v` onto the probability simplex.
///
/// Sort-and-threshold: with `u` the values sorted descending, `rho` is the
/// largest index for which `u_rho + (1 - sum_{r<=rho} u_r) / rho > 0`; the
/// shift `theta = (1 - sum_{r<=rho} u_r) / rho` is added to every component
/// and the result clipped at zero.
pub fn project_to_simplex<T: Scalar>(v: &[T]) -> Result<MixtureWeights<T>> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }

    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));

    let mut prefix = T::zero();
    let mut theta = T::zero();
    for (idx, &u) in sorted.iter().enumerate() {
        prefix = prefix + u;
        let rho = T::from_usize(idx + 1).unwrap();
        let candidate = (T::one() - prefix) / rho;
        if u + candidate > T::zero() {
            theta = candidate;
        }
    }

    let projected: Vec<T> = v.iter().map(|&x| (x + theta).max(T::zero())).collect();
    // the clipped sum is 1 up to rounding; renormalizing makes it exact enough
    // for the simplex tolerance even when |v| is large
    Ok(MixtureWeights::normalized(projected))
}
