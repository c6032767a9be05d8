#pragma once

#include <memory>
#include <optional>

#include "dgw/field.hpp"

namespace dgw {

/// Solution set of  A·Z^(q) + B = Z  over F_{q^M}, as a particular solution
/// plus an F_p-basis of the homogeneous space  A·Z^(q) = Z.
struct AffineSemilinearSolution {
    FqMat particular;
    std::vector<FqMat> homogeneous;
};

/// Flattens the entrywise q-Frobenius system into one F_p-linear system and
/// solves it exactly. The map x -> x^q is F_q-linear on F_{q^M}, so with
/// n^2·e·M unknown F_p-coordinates the equation is affine linear.
/// Throws Errc::inconsistent when no solution exists over this field
/// (callers typically respond by enlarging M).
AffineSemilinearSolution solve_affine_semilinear(const FqMat& a, const FqMat& b);

/// F_p-matrix of the twisted multiplication z -> A·z^(q) on one flattened
/// column of Z (n blocks of deg coordinates). The full matrix system
/// decouples into n independent copies of this operator, one per column.
FpMat column_twist_matrix(const FqMat& a);

std::vector<uint8_t> flatten_column(const FqMat& m, std::size_t col);
void set_column(FqMat& m, std::size_t col, const std::vector<uint8_t>& v);

/// The factored homogeneous column operator z - A·z^(q), reusable across many
/// right hand sides with the same A (one elimination, many solves, n columns).
class SemilinearOperator {
  public:
    SemilinearOperator(const FqMat& a);

    /// Solves A·Z^(q) + B = Z; nullopt when inconsistent.
    std::optional<FqMat> solve(const FqMat& b) const;

    /// F_p-basis of the homogeneous solution space (per-column kernels
    /// assembled into matrices, column-major order).
    std::vector<FqMat> kernel() const;

    std::size_t n() const { return n_; }
    const FieldCtx& ctx() const { return *ctx_; }
    /// Factorization of the column operator for vector-level access.
    const FpSolver& factor() const { return *solver_; }

  private:
    const FieldCtx* ctx_;
    std::size_t n_;
    std::unique_ptr<FpSolver> solver_;
};

} // namespace dgw
