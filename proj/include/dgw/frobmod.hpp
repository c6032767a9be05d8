#pragma once

#include "dgw/tseries.hpp"

namespace dgw {

/// Difference module over F_q(s, t) given by its representing matrix D: the
/// fundamental-matrix convention D·phi_q(Y) = Y is used throughout. `level`
/// records the twist: the acting endomorphism is phi_{q^level}.
class FrobModule {
  public:
    /// Validates det(D) != 0 and invertibility of D at t = 0.
    FrobModule(const FieldCtx& base, std::size_t n, std::vector<BivarEntry> entries,
               unsigned level = 1);

    const FieldCtx& base() const { return *base_; }
    std::size_t n() const { return n_; }
    unsigned level() const { return level_; }
    const BivarEntry& at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

    BivarEntry det() const;

  private:
    const FieldCtx* base_;
    std::size_t n_;
    unsigned level_;
    std::vector<BivarEntry> d_;
};

/// Reduction of a module at a finite place: the representing matrix as a
/// truncated series over F_{q^d} with invertible constant term.
struct ReducedModule {
    PlaceFin place;
    TruncSeriesMatrix dbar;
    unsigned prec;
};

/// Entrywise expansion at the place; Errc::not_integral if an entry fails,
/// Errc::singular_reduction if the reduced constant term is singular.
ReducedModule reduce_module_at(const FrobModule& m, const PlaceFin& place, unsigned N);

/// Dhat = Dbar · phi_q(Dbar) · ... · phi_q^(d-1)(Dbar), d the place degree.
TruncSeriesMatrix frobenius_product(const ReducedModule& r);

/// Level raising: D_i = D · phi_q(D) · ... · phi_q^(i-1)(D) with phi_q acting
/// on s only; a fundamental matrix of the input stays one of the output.
FrobModule raise_level(const FrobModule& m, unsigned i);

/// Exact form of the contraction hypothesis at a place: every t^l coefficient
/// of D must have valuation >= l for l < N.
struct ExistenceReport {
    bool ok;
    int first_failure; // -1 when ok
    std::vector<int64_t> min_valuations; // per l, the min over entries
};

ExistenceReport check_existence_hypothesis(const FrobModule& m, const PlaceFin& q_place,
                                           unsigned N);

/// Convention translation to the inverse-endomorphism presentation: the
/// substitution s -> theta^{-1} + alpha at a degree-1 place, with descriptor
/// fields recording how a fundamental matrix transforms.
struct PreTMotive {
    FrobModule motive;           // matrix over F_q(theta, t)
    FieldElem alpha;             // the degree-1 place root used
    std::string sigma;           // inverse Frobenius, applied coefficient-wise
    std::string trivialization;  // how Psi arises from Y
    std::string relation;        // the defining identity in the new convention
};

PreTMotive export_pre_t_motive(const FrobModule& m, const PlaceFin& place);

/// Inverse substitution theta -> 1/(s - alpha); recovers the original module.
FrobModule import_pre_t_motive(const PreTMotive& p);

} // namespace dgw
