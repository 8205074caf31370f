//! Sign conventions, collected in one place.
//!
//! The coordinate formulas only fix their signs through the mutual
//! consistency of `i(Σ)ω = −θ`, `L_Y = d i(Y) − (−1)^r i(Y) d`, the map
//! `J`, and the two expressions of the bracket. The choices below are the
//! ones under which every anchor identity holds simultaneously; the
//! `gauntlet` tests in this crate and the acceptance suite re-check them.
//!
//! * **Koszul normalization.** A basis monomial `e_{i1} ∧ … ∧ e_{ik}` is
//!   stored with strictly increasing indices; sorting multiplies the
//!   coefficient by the sign of the sorting permutation and a repeated index
//!   gives zero. Covectors and vectors use the same rule.
//! * **Single-vector contraction.** `i(v)(α₁∧…∧α_k) = Σ_j (−1)^{j−1} α_j(v)
//!   α₁∧…α̂_j…∧α_k`: the vector enters the first slot.
//! * **Nesting.** `i(v₁∧…∧v_r) = i(v_r)∘…∘i(v₁)`: the first factor is
//!   contracted first. Consequently `i(X)∘i(Y) = i(Y∧X)`.
//! * **Schouten base cases.** On two vector fields the bracket is the Lie
//!   bracket; `[v, g] = v(g)`; `[X, g] = (−1)^{r−1} i(dg)X` for an `r`-vector
//!   `X`, where `i(dg)` removes factors from the left with alternating sign.
//!   Everything else follows from the derivation rule
//!   `[X, Y∧Z] = [X,Y]∧Z + (−1)^{(r−1)s} Y∧[X,Z]` and graded antisymmetry.
//! * **Momentum map.** `J(X) = (−1)^{r−1} i(X)θ`. This is the sign for which
//!   `(X, J(X))` satisfies `i(X)ω = dJ(X)` whenever `L_X θ = 0`, and for which
//!   `J(X) = i(X∧Σ)ω` holds identically.
//! * **Kanatchikov bracket.** `(−1)^r i(X̃_f) i(X̃_g) ω^V`, the same prefactor
//!   as the contraction bracket, so that its pullback coincides with the
//!   corrected bracket.
//! * **Leading term of the second bracket formula.** `(−1)^r i(X_f) i(X_g) ω`,
//!   i.e. the contraction bracket; the two bracket formulas then agree for
//!   every pair of degrees.
//! * **Wedge obstruction.** `L_{X_f∧X_g} ω = σ d{f,g}` with
//!   `σ = (−1)^{r(s+1)}` ([`wedge_obstruction_sign`]).
//! * **Equivariance defect.** `{J(X),J(Y)}′ − J([Y,X]) =
//!   −(−1)^{(r−1)s} d(i(Y) i(X) θ)` ([`equivariance_sign`]).
//! * **Jacobi anomaly.** The cyclic sum of the contraction bracket equals
//!   `(−1)^{(t−1)(r−1)+s} d(i(X_f) i(X_g) i(X_h) ω)`
//!   ([`jacobi_anomaly_sign`]).

/// Order in which the factors of a decomposable multi-vector are contracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nesting {
    /// `i(v₁∧…∧v_r) = i(v_r)∘…∘i(v₁)`.
    FirstFactorFirst,
    /// `i(v₁∧…∧v_r) = i(v₁)∘…∘i(v_r)`.
    LastFactorFirst,
}

pub const NESTING: Nesting = Nesting::FirstFactorFirst;

/// `(−1)^k` as `±1`.
pub fn parity(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of `J(X) = sign · i(X)θ` for an `r`-vector `X`.
pub fn momentum_map_sign(r: usize) -> i64 {
    -parity(r)
}

/// `σ` in `L_{X_f∧X_g} ω = σ d{f,g}`.
pub fn wedge_obstruction_sign(r: usize, s: usize) -> i64 {
    parity(r * (s + 1))
}

/// Coefficient `c` in `{J(X),J(Y)}′ − J([Y,X]) = c · d(i(Y) i(X) θ)`.
pub fn equivariance_sign(r: usize, s: usize) -> i64 {
    -parity((r + 1) * s)
}

/// Coefficient `c` in `Σ_cyc (−1)^{(r−1)(t−1)} {f,{g,h}′}′ = c · d(i(X_f) i(X_g) i(X_h) ω)`.
pub fn jacobi_anomaly_sign(r: usize, s: usize, t: usize) -> i64 {
    parity((t + 1) * (r + 1) + s)
}

/// `(−1)^{(a−1)(b−1)}` for non-negative degrees (computed as
/// `(a+1)(b+1)` to stay in `usize`).
pub fn shifted(a: usize, b: usize) -> i64 {
    parity((a + 1) * (b + 1))
}
