#pragma once

#include "dgw/frobmod.hpp"
#include "dgw/groupcert.hpp"
#include "dgw/semilinear.hpp"

namespace dgw {

/// Solution of the constant-layer equation D0 · Y0^(q) = Y0 over the smallest
/// field F_{q^M} carrying an invertible solution.
struct LangSolution {
    unsigned M;               // splitting degree over F_q
    FqMat y0;                 // invertible, over F_{q^M}
    std::size_t homogeneous_dim; // F_p-dimension of the solution space
};

/// Searches M in multiples of the input's field degree up to m_max. An
/// invertible solution exists over F_{q^M} exactly when the twisted product
/// D0 · D0^(q) · ... · D0^(q^(M-1)) is the identity, which is checked in the
/// small field before any linear solve. Among the solution space, Y0 is the
/// first invertible element in enumeration order (seeded random fallback
/// past a fixed scan cap). Errc::splitting_degree_exceeded past m_max.
LangSolution lang_solve(const FqMat& d0, unsigned m_max, uint64_t seed = 0);

/// Minimal m with the twisted product equal to I, or 0 if none up to m_max.
unsigned twisted_order(const FqMat& d0, unsigned m_max);

struct TruncatedSolution {
    unsigned M;
    TruncSeriesMatrix ybar; // over F_{q^M}, prec N
    std::size_t homogeneous_dim;
};

/// Layered solve of Dbar · phi_q(Y) = Y mod t^N: the constant layer is the
/// Lang equation, each higher layer the affine system
/// D_0·Y_l^(q) + (D_1·Y_{l-1}^(q) + ... + D_l·Y_0^(q)) = Y_l, all sharing one
/// factored F_p operator. If a layer is inconsistent over F_{q^M}, M is
/// raised and the recursion restarts from the constant layer.
TruncatedSolution solve_truncated(const ReducedModule& r, unsigned m_max, uint64_t seed = 0);

/// Right-multiplies by diag(det^-1, 1, ..., 1), a phi-fixed matrix when
/// det(Dbar) = 1; Errc::determinant_not_phi_fixed otherwise.
TruncSeriesMatrix normalize_to_sl(const TruncSeriesMatrix& ybar);

/// Galois-group witness extracted at one place.
struct Witness {
    PlaceFin place;
    unsigned M;
    unsigned prec;
    TruncSeriesMatrix ybar;      // fundamental matrix over F_{q^M}
    TruncSeriesMatrix h;         // Ybar^-1 · Dhat · Ybar, phi-fixed entries
    FqMat h0;                    // constant term, decoded into F_q
    Poly charpoly_h0;            // over F_q
    uint64_t h0_order;
    bool phi_fixed;              // asserted true
    bool det_one;                // det h = 1 (SL modules)
    bool charpoly_matches_product; // charpoly(h0) vs constant term of Dhat
    std::size_t homogeneous_dim;
};

/// Full per-place pipeline: reduce, solve, normalize, conjugate the Frobenius
/// product. Throws Errc::phi_fixedness_violated if the computed h is not
/// phi-fixed (impossible for correct inputs; indicates a bug).
Witness extract_witness(const FrobModule& m, const PlaceFin& place, unsigned N, unsigned m_max,
                        uint64_t seed = 0);

/// Witness extraction fanned out across places on a bounded worker pool.
/// Results keep place order; failures are captured per place.
struct PlaceResult {
    PlaceFin place;
    std::optional<Witness> witness;
    std::string error; // empty on success
};

std::vector<PlaceResult> extract_witnesses(const FrobModule& m,
                                           const std::vector<PlaceFin>& places, unsigned N,
                                           unsigned m_max, uint64_t seed = 0,
                                           unsigned threads = 0);

/// Conjugator descent: given diagonal-torus g, h, and A over F_{q^M} with
/// g^A = h (conjugation x^y = y^-1 x y), returns A' = y^-1 A with phi-fixed
/// constant term, still conjugating g to h. The diagonal y solves the
/// entrywise Lang equations y_i^(q-1) = (phi(A_0) A_0^-1)_ii.
TruncSeriesMatrix descend_conjugator(const TruncSeriesMatrix& g, const TruncSeriesMatrix& h,
                                     const TruncSeriesMatrix& a);

} // namespace dgw
