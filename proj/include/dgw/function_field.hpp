#pragma once

#include <cstdint>
#include <vector>

#include "dgw/field.hpp"

namespace dgw {

constexpr int64_t kInfValuation = INT64_MAX;

/// Rational function over F_q in the variable s, kept canonical: denominator
/// monic, gcd(num, den) = 1, zero stored as 0/1. Equality is structural.
class RatFunc {
  public:
    RatFunc() = default;
    explicit RatFunc(const FieldCtx& ctx); // zero
    RatFunc(Poly num, Poly den);
    static RatFunc from_poly(Poly p);
    static RatFunc constant(const FieldElem& c);

    const FieldCtx& ctx() const { return num_.ctx(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.degree() == 0; }

    RatFunc inv() const;
    /// Action of the tower Frobenius: coefficients are in F_q, so this is the
    /// substitution s -> s^(q^k).
    RatFunc frobenius(unsigned k) const;

    bool operator==(const RatFunc& rhs) const = default;

  private:
    void normalize();
    Poly num_, den_;
};

RatFunc operator+(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a, const RatFunc& b);
RatFunc operator*(const RatFunc& a, const RatFunc& b);
RatFunc operator/(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a);

/// Finite place of F_q(s): a monic irreducible pi of degree d, together with
/// the canonical residue field F_{q^d} and the smallest-index root alpha of pi
/// in it. reduce_at is evaluation at alpha.
class PlaceFin {
  public:
    /// Validates irreducibility and fixes the deterministic root.
    explicit PlaceFin(Poly pi);

    const Poly& pi() const { return pi_; }
    unsigned degree() const { return d_; }
    const FieldCtx& residue_ctx() const { return *residue_; }
    const FieldElem& root() const { return root_; }

    bool operator==(const PlaceFin& rhs) const { return pi_ == rhs.pi_; }

  private:
    Poly pi_;
    unsigned d_;
    const FieldCtx* residue_;
    FieldElem root_;
};

/// All monic irreducible polynomials of degree d over the given F_q context,
/// ascending canonical order. The count satisfies the necklace formula.
std::vector<PlaceFin> enumerate_places(const FieldCtx& base, unsigned d);

/// pi-adic valuation v(num) - v(den); kInfValuation for the zero function.
int64_t valuation_at(const PlaceFin& place, const RatFunc& f);

/// Reduction at the place: the image of f in F_{q^d}. Requires
/// valuation_at(place, f) >= 0, else Errc::not_integral.
FieldElem reduce_at(const PlaceFin& place, const RatFunc& f);

/// Polynomial in t with RatFunc coefficients; the shape on which the Gauss
/// extension of a place valuation acts.
struct TPoly {
    std::vector<RatFunc> coeffs; // c_0 .. c_r

    bool is_zero() const;
};

/// Gauss valuation: min over t-coefficients of the place valuation.
/// Errc::zero_input for the zero polynomial.
int64_t gauss_valuation(const PlaceFin& place, const TPoly& g);

} // namespace dgw
