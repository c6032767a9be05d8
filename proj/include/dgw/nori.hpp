#pragma once

#include "dgw/solver.hpp"

namespace dgw {

/// Assembled special-linear instance: the regular torus element g0, the
/// companion-shaped constant part D0 interpolating its characteristic
/// polynomial, the conjugator x with g0^x = D0bar, and the twisted torus
/// factor making up D = D0 · gtilde^x.
struct SlInstance {
    const FieldCtx* ctx;          // base F_q
    std::size_t n;
    FieldElem zeta;               // primitive (q-1)-th root
    FieldElem alpha;              // in F_q \ {0,1}; place_p = (s - alpha)
    std::vector<FieldElem> alphas, betas;
    FqMat g0;                     // diag(zeta, ..., zeta^{-n(n-1)/2})
    FqMat d0bar;                  // reduction of D0 at place_p
    FqMat x;                      // det 1, g0^x = d0bar
    PlaceFin place_p;             // (s - alpha)
    PlaceFin place_q;             // (s)
    std::vector<Poly> torus_polys; // p_j = 1 + zeta^j t
};

/// diag(zeta, zeta^2, ..., zeta^(n-1), zeta^(-n(n-1)/2)); requires
/// ord(zeta) = q-1 and q > n(n+1)/2, rejects colliding eigenvalues.
FqMat build_g0(const FieldCtx& ctx, std::size_t n, const FieldElem& zeta);

/// Companion-shaped matrix over F_q[s] whose reduction at s = alpha carries
/// the characteristic polynomial of g0: row one holds the interpolation
/// polynomials f_i with f_i(alpha) = gamma_i, f_i(1) = alpha_i,
/// f_i(0) = beta_i.
std::vector<BivarEntry> build_D0(const FieldCtx& ctx, std::size_t n, const FieldElem& alpha,
                                 const std::vector<FieldElem>& alphas,
                                 const std::vector<FieldElem>& betas, const FqMat& g0);

/// Conjugator x in SL_n(F_q) with x^-1 g0 x = d0bar, built from left
/// eigenvector rows of the companion matrix and rescaled to determinant one.
/// The defining identity is asserted. Errc::conjugation_failed on miss.
FqMat build_conjugator(const FqMat& g0, const FqMat& d0bar);

/// Full instance assembly with validation of the standing assumptions.
SlInstance build_instance(const FieldCtx& ctx, std::size_t n, const FieldElem& zeta,
                          const FieldElem& alpha, const std::vector<FieldElem>& alphas,
                          const std::vector<FieldElem>& betas);

/// D = D0 · diag(ptilde_1, ..., ptilde_{n-1}, prod^-1)^x with
/// ptilde_j = 1 + zeta^j (s/alpha) t. Asserts D = D0 mod t, the reduction
/// identity at place_p, and the contraction hypothesis at place_q.
FrobModule build_module(const SlInstance& inst, unsigned check_prec = 8);

/// Generation evidence from a witness sweep.
struct GenerationReport {
    std::size_t witnesses_used = 0;
    std::size_t closure_size = 0;
    uint64_t target_size = 0;
    std::vector<Poly> charpolys_seen;      // sorted, deduplicated
    Verdict verdict = Verdict::inconclusive; // full iff closure == target
    Verdict charpoly_oracle = Verdict::inconclusive;
    std::vector<PlaceFin> places_used;
    std::vector<std::string> place_errors; // aligned with attempted places
};

/// Closes the collected constant terms and evaluates both certificate
/// channels. `verdict` is the exact element-level check; the char-poly
/// oracle verdict is reported alongside.
GenerationReport certify_generation(const FieldCtx& ctx, const std::vector<Witness>& witnesses,
                                    std::size_t n);

struct SearchConfig {
    unsigned d_max = 3;
    unsigned prec = 8;
    unsigned m_max = 150;
    uint64_t seed = 0;
    unsigned threads = 0;
    std::size_t budget = 32; // candidate tuples to try
    bool early_stop = true;  // stop a tuple's sweep once the closure is full
};

struct SearchResult {
    SlInstance instance;
    GenerationReport report;
    std::size_t tuples_tried = 0;
};

/// Deterministic scan over (alpha_i, beta_i) tuples; returns the first whose
/// generation report verdict is full. Errc::budget_exhausted otherwise; never
/// downgrades a non-certified run.
SearchResult search_nori_parameters(const FieldCtx& ctx, std::size_t n, const FieldElem& zeta,
                                    const FieldElem& alpha, const SearchConfig& cfg);

} // namespace dgw
