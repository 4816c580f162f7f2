use super::{AlgebraError, FormalSum, MorSymbol};

/// Given `u` over `Hom(X, Y)` and `v` over `Hom(Y, X)` with `v · u = id_X`,
/// returns the first pair `(σ, τ)` from the supports with `τ ∘ σ = id_X`,
/// exhibiting `X` as a retract of `Y`.
pub fn retract_witness(u: &FormalSum, v: &FormalSum) -> Result<(MorSymbol, MorSymbol), AlgebraError> {
    let Some(first) = u.support().first().copied() else {
        return Err(AlgebraError::InvalidInversePair);
    };
    let (Some(x), Some(y)) = (first.dom(), first.cod()) else {
        return Err(AlgebraError::InvalidInversePair);
    };
    let spans = |f: &FormalSum, d, c| f.support().iter().all(|s| s.dom() == Some(d) && s.cod() == Some(c));
    if !spans(u, x, y) || !spans(v, y, x) {
        return Err(AlgebraError::InvalidInversePair);
    }
    let id_x = MorSymbol::identity(x);
    if v.mul(u) != FormalSum::symbol(id_x.clone()) {
        return Err(AlgebraError::InvalidInversePair);
    }
    for sigma in u.support() {
        for tau in v.support() {
            if tau.times(sigma).as_ref() == Some(&id_x) {
                return Ok((sigma.clone(), tau.clone()));
            }
        }
    }
    unreachable!("the identity coefficient of v·u comes from some composable pair")
}
