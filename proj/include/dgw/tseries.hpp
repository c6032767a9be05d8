#pragma once

#include "dgw/function_field.hpp"

namespace dgw {

/// Power series in t over a coefficient field, truncated at a fixed precision
/// N; all arithmetic stays at that precision.
class TruncSeries {
  public:
    TruncSeries() = default;
    TruncSeries(const FieldCtx& ctx, unsigned prec);
    TruncSeries(const FieldCtx& ctx, unsigned prec, std::vector<FieldElem> coeffs);

    static TruncSeries constant(const FieldCtx& ctx, unsigned prec, const FieldElem& c);

    const FieldCtx& ctx() const { return *ctx_; }
    unsigned prec() const { return prec_; }
    const FieldElem& coeff(unsigned i) const { return coeffs_[i]; }
    FieldElem& coeff(unsigned i) { return coeffs_[i]; }
    bool is_zero() const;

    TruncSeries add(const TruncSeries& rhs) const;
    TruncSeries sub(const TruncSeries& rhs) const;
    TruncSeries mul(const TruncSeries& rhs) const;
    TruncSeries neg() const;
    /// Multiplicative inverse; requires a nonzero constant term.
    TruncSeries inv() const;
    /// Coefficient-wise x -> x^(q^k); fixes t.
    TruncSeries apply_phi(unsigned k) const;
    TruncSeries truncate(unsigned new_prec) const;
    TruncSeries embed_into(const FieldCtx& dst) const;

    bool operator==(const TruncSeries& rhs) const = default;

  private:
    const FieldCtx* ctx_ = nullptr;
    unsigned prec_ = 0;
    std::vector<FieldElem> coeffs_; // exactly prec_ entries
};

/// Square matrix of truncated series sharing one context and precision.
class TruncSeriesMatrix {
  public:
    TruncSeriesMatrix() = default;
    TruncSeriesMatrix(const FieldCtx& ctx, std::size_t n, unsigned prec);

    static TruncSeriesMatrix identity(const FieldCtx& ctx, std::size_t n, unsigned prec);
    /// Constant series matrix from a field matrix.
    static TruncSeriesMatrix from_constant(const FqMat& m, unsigned prec);

    const FieldCtx& ctx() const { return *ctx_; }
    std::size_t n() const { return n_; }
    unsigned prec() const { return prec_; }
    TruncSeries& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const TruncSeries& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    TruncSeriesMatrix mul(const TruncSeriesMatrix& rhs) const;
    TruncSeriesMatrix add(const TruncSeriesMatrix& rhs) const;
    TruncSeriesMatrix sub(const TruncSeriesMatrix& rhs) const;

    /// Coefficient matrix of t^l.
    FqMat coeff_matrix(unsigned l) const;
    FqMat constant_term() const { return coeff_matrix(0); }
    void set_coeff_matrix(unsigned l, const FqMat& m);

    /// Series inverse, solved order by order; Errc::singular_constant_term if
    /// the constant term is not invertible.
    TruncSeriesMatrix inverse() const;
    TruncSeriesMatrix apply_phi(unsigned k) const;
    TruncSeriesMatrix embed_into(const FieldCtx& dst) const;
    TruncSeriesMatrix truncate(unsigned new_prec) const;

    TruncSeries det() const;
    bool is_identity() const;
    /// Monic characteristic polynomial in X with TruncSeries coefficients,
    /// index i = coefficient of X^i, Leibniz expansion (n <= 4).
    std::vector<TruncSeries> charpoly() const;

    bool operator==(const TruncSeriesMatrix& rhs) const = default;

  private:
    const FieldCtx* ctx_ = nullptr;
    std::size_t n_ = 0;
    unsigned prec_ = 0;
    std::vector<TruncSeries> a_;
};

/// Entry of a representing matrix: a fraction of polynomials in s and t over
/// F_q whose denominator is a unit at t = 0 (den(s, 0) != 0). Stored as exact
/// fractions, never pre-expanded, so integrality checks stay exact.
class BivarEntry {
  public:
    BivarEntry() = default;
    /// num, den as polynomials in t with Poly-in-s coefficients.
    BivarEntry(std::vector<Poly> num, std::vector<Poly> den);

    static BivarEntry zero(const FieldCtx& ctx);
    static BivarEntry one(const FieldCtx& ctx);
    static BivarEntry from_spoly(Poly p);
    static BivarEntry from_tpoly(std::vector<Poly> tcoeffs);

    const FieldCtx& ctx() const;
    const std::vector<Poly>& num() const { return num_; }
    const std::vector<Poly>& den() const { return den_; }
    bool is_zero() const { return num_.empty(); }

    BivarEntry add(const BivarEntry& rhs) const;
    BivarEntry sub(const BivarEntry& rhs) const;
    BivarEntry mul(const BivarEntry& rhs) const;
    BivarEntry neg() const;
    BivarEntry inv() const; // Errc::non_unit_denominator if num(s,0) = 0
    /// phi_q^k on s-coefficients: substitutes s -> s^(q^k), fixes t.
    BivarEntry frobenius_s(unsigned k) const;

    /// Fraction equality (num*rhs.den == rhs.num*den).
    bool equals(const BivarEntry& rhs) const;

    /// Value at t = 0 as a rational function in s.
    RatFunc at_t0() const;

    /// Canonical t-expansion c_0..c_{N-1} with rational-function coefficients.
    TPoly expand_tpoly(unsigned N) const;

  private:
    void normalize();
    std::vector<Poly> num_, den_; // t-coefficients; den nonempty, den[0] != 0
};

/// Substitutes s -> alpha and expands as a power series in t over the residue
/// field of the place. Errors: Errc::not_integral when a coefficient of the
/// canonical expansion has negative valuation, Errc::non_unit_denominator
/// when the denominator vanishes at (alpha, t=0).
TruncSeries expand_at_place(const BivarEntry& e, const PlaceFin& place, unsigned N);

/// Spec-facing aliases.
inline TruncSeriesMatrix apply_phi(const TruncSeriesMatrix& m, unsigned k) {
    return m.apply_phi(k);
}
inline TruncSeriesMatrix invert(const TruncSeriesMatrix& m) { return m.inverse(); }

} // namespace dgw
