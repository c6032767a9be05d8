#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgw/errors.hpp"
#include "dgw/fp_linalg.hpp"

namespace dgw {

class FieldCtx;

/// Element of F_{q^M} = F_p[x]/(modulus), stored as the little-endian
/// coefficient vector of its residue, entries reduced mod p.
struct FieldElem {
    const FieldCtx* ctx = nullptr;
    std::vector<uint8_t> c;

    bool is_zero() const;
    bool is_one() const;
    /// Canonical enumeration index sum c_i * p^i; doubles as the total order
    /// used whenever a deterministic "smallest" element is required.
    uint64_t index() const;

    bool operator==(const FieldElem& rhs) const = default;
};

bool lex_less(const FieldElem& a, const FieldElem& b);

FieldElem operator+(const FieldElem& a, const FieldElem& b);
FieldElem operator-(const FieldElem& a, const FieldElem& b);
FieldElem operator*(const FieldElem& a, const FieldElem& b);
FieldElem operator/(const FieldElem& a, const FieldElem& b);
FieldElem operator-(const FieldElem& a);

/// Field tower F_p <= F_q = F_{p^e} <= F_{q^M}, realized as the single
/// extension F_p[x]/(modulus) with deg(modulus) = e*M. Immutable after
/// construction and shared through a process-wide registry, so contexts
/// compare by pointer and are safe to use from many threads.
class FieldCtx {
  public:
    /// Registry accessor; the modulus is the monic irreducible of degree e*M
    /// over F_p with the smallest canonical index, so results are identical
    /// across runs and machines.
    static const FieldCtx& get(unsigned p, unsigned e, unsigned M);

    unsigned p() const { return p_; }
    unsigned e() const { return e_; }
    unsigned M() const { return M_; }
    unsigned deg() const { return deg_; }          // e*M
    uint64_t q() const { return q_; }              // p^e
    /// q^M - 1; Errc::degree_overflow when it does not fit in 64 bits. Big
    /// towers use the limb form below instead.
    uint64_t order() const;
    /// q^M - 1 as little-endian 64-bit limbs (exponent arithmetic only).
    const std::vector<uint64_t>& order_limbs() const { return order_limbs_; }
    const std::vector<uint8_t>& modulus() const { return modulus_; }

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem gen() const;                          // class of x
    FieldElem from_pint(uint64_t v) const;          // image of an integer in F_p
    FieldElem from_coeffs(std::vector<uint8_t> c) const;
    FieldElem from_index(uint64_t idx) const;       // inverse of FieldElem::index

    FieldElem add(const FieldElem& a, const FieldElem& b) const;
    FieldElem sub(const FieldElem& a, const FieldElem& b) const;
    FieldElem neg(const FieldElem& a) const;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const;
    FieldElem inv(const FieldElem& a) const;
    FieldElem pow(const FieldElem& a, uint64_t k) const;

    /// x -> x^(q^k); k = 1 is the Frobenius of the tower, k = M the identity.
    FieldElem frobenius(const FieldElem& a, unsigned k) const;

    const FpMat& frob_q_matrix() const { return frob_q_; }
    const FpMat& frob_p_matrix() const { return frob_p_; }

    /// Multiplicative order of a nonzero element.
    uint64_t elem_order(const FieldElem& a) const;

    /// Canonical generator of the F_q subfield (meaningful when e > 1).
    const FieldElem& fq_generator() const { return fq_gen_; }

  private:
    FieldCtx(unsigned p, unsigned e, unsigned M);
    friend struct FieldCtxRegistry;

    std::vector<uint8_t> reduce_mod(std::vector<uint8_t> poly) const;

    unsigned p_, e_, M_, deg_;
    uint64_t q_;
    std::vector<uint64_t> order_limbs_;
    bool order_fits_u64_;
    std::vector<uint8_t> modulus_;
    std::vector<uint8_t> inv_table_; // inverses mod p
    FpMat frob_p_;                   // x -> x^p as F_p-linear map
    FpMat frob_q_;                   // x -> x^q
    FieldElem fq_gen_;
};

/// Spec-facing constructor name.
inline const FieldCtx& build_extension(unsigned p, unsigned e, unsigned M) {
    return FieldCtx::get(p, e, M);
}

/// Tower degree guard e*M (default 64). The solver raises it to match an
/// explicit splitting-degree budget.
unsigned tower_degree_bound();
void set_tower_degree_bound(unsigned bound);

inline FieldElem frobenius(const FieldElem& a, unsigned k) { return a.ctx->frobenius(a, k); }

/// Canonical embedding F_{q^a} -> F_{q^b} for a | b (same p, e). Fixes the
/// canonical F_q generator, and among the embeddings doing so picks the one
/// sending the source generator to the root with the smallest index.
FieldElem embed(const FieldElem& x, const FieldCtx& dst);

/// Preimage under embed(., dst from x.ctx); Errc::not_in_subfield if x is not
/// in the embedded image.
FieldElem to_subfield(const FieldElem& x, const FieldCtx& dst);

/// Dense univariate polynomial with FieldElem coefficients. Used both for
/// F_q[s] (places, rational functions) and for scratch arithmetic over larger
/// contexts during root finding.
class Poly {
  public:
    Poly() = default;
    explicit Poly(const FieldCtx& ctx) : ctx_(&ctx) {}
    Poly(const FieldCtx& ctx, std::vector<FieldElem> coeffs);

    static Poly constant(const FieldElem& c);
    static Poly monomial(const FieldCtx& ctx, unsigned degree, const FieldElem& c);

    const FieldCtx& ctx() const { return *ctx_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    FieldElem coeff(std::size_t i) const;
    const std::vector<FieldElem>& coeffs() const { return coeffs_; }
    const FieldElem& leading() const;
    bool is_monic() const;

    Poly make_monic() const;
    FieldElem eval(const FieldElem& at) const;
    /// Substitutes the variable by its k-th power (coefficient stride).
    Poly substitute_power(unsigned k) const;
    /// Applies x -> x^(q^k) to every coefficient.
    Poly frobenius_coeffs(unsigned k) const;

    bool operator==(const Poly& rhs) const = default;

  private:
    void trim();
    const FieldCtx* ctx_ = nullptr;
    std::vector<FieldElem> coeffs_; // little-endian, trimmed
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const FieldElem& c, const Poly& a);
Poly operator-(const Poly& a);

struct PolyDivMod {
    Poly quot, rem;
};
PolyDivMod poly_divmod(const Poly& a, const Poly& b);
Poly poly_gcd(const Poly& a, const Poly& b); // monic
Poly poly_powmod(const Poly& base, uint64_t exp, const Poly& mod);
/// Exponent given as little-endian 64-bit limbs (for exponents past 64 bits).
Poly poly_powmod_limbs(const Poly& base, const std::vector<uint64_t>& exp, const Poly& mod);

/// All roots of f inside its own coefficient context, ascending index order.
/// Deterministic: splitting multipliers are scanned in enumeration order.
std::vector<FieldElem> poly_roots(const Poly& f);

/// Frobenius-based irreducibility test over the coefficient context.
bool poly_is_irreducible(const Poly& f);

/// Dense matrix over one field context.
class FqMat {
  public:
    FqMat() = default;
    FqMat(const FieldCtx& ctx, std::size_t n);

    static FqMat identity(const FieldCtx& ctx, std::size_t n);

    const FieldCtx& ctx() const { return *ctx_; }
    std::size_t n() const { return n_; }
    FieldElem& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const FieldElem& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    FqMat mul(const FqMat& rhs) const;
    FqMat add(const FqMat& rhs) const;
    FqMat sub(const FqMat& rhs) const;
    FieldElem det() const;
    FqMat inverse() const; // Errc::singular_constant_term if singular
    FqMat frobenius(unsigned k) const;
    FqMat embed_into(const FieldCtx& dst) const;
    FqMat to_subfield_mat(const FieldCtx& dst) const;
    bool is_identity() const;

    /// Monic characteristic polynomial (Leibniz expansion; fine for n <= 4).
    Poly charpoly() const;

    /// Byte key for ordered containers; total order, deterministic.
    std::string key() const;

    bool operator==(const FqMat& rhs) const = default;

  private:
    const FieldCtx* ctx_ = nullptr;
    std::size_t n_ = 0;
    std::vector<FieldElem> a_;
};

bool is_prime_u64(uint64_t n);

} // namespace dgw
