#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dgw/errors.hpp"

namespace dgw {

/// Dense matrix over the prime field F_p, p < 256. Entries are kept reduced.
class FpMat {
  public:
    FpMat() = default;
    FpMat(unsigned p, std::size_t rows, std::size_t cols)
        : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static FpMat identity(unsigned p, std::size_t n);

    unsigned p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    uint8_t& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    uint8_t at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    FpMat mul(const FpMat& rhs) const;
    std::vector<uint8_t> apply(const std::vector<uint8_t>& v) const;

    bool operator==(const FpMat& rhs) const = default;

  private:
    unsigned p_ = 0;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<uint8_t> a_;
};

/// Row-reduced view of a square-or-rectangular F_p system, factored once and
/// reusable for many right-hand sides.
class FpSolver {
  public:
    explicit FpSolver(FpMat m);

    std::size_t rank() const { return rank_; }

    /// Particular solution with all free variables set to zero, or nullopt if
    /// the system m·x = rhs is inconsistent.
    std::optional<std::vector<uint8_t>> solve(const std::vector<uint8_t>& rhs) const;

    /// T·rhs for the recorded row transform T with T·m in reduced form; the
    /// entries at rows >= rank() are the obstructions to solvability.
    std::vector<uint8_t> reduce_rhs(const std::vector<uint8_t>& rhs) const;

    /// Basis of the nullspace, one vector per free column, deterministic order.
    const std::vector<std::vector<uint8_t>>& nullspace() const { return null_; }

  private:
    FpMat r_;                       // RREF of the input
    FpMat t_;                       // transform with t_ * input = r_
    std::vector<std::size_t> pivot_cols_;
    std::vector<int> col_pivot_row_; // -1 for free columns
    std::size_t rank_ = 0;
    std::vector<std::vector<uint8_t>> null_;
};

/// Affine system  A·x = b  over F_p, the flattened form every semilinear
/// equation in this library reduces to.
struct LinSystem {
    FpMat a;
    std::vector<uint8_t> b;

    LinSystem(FpMat a_, std::vector<uint8_t> b_) : a(std::move(a_)), b(std::move(b_)) {
        require(a.rows() == b.size(), Errc::invariant_violation, "LinSystem dimension mismatch");
    }
};

struct LinSolution {
    std::vector<uint8_t> particular;
    std::vector<std::vector<uint8_t>> homogeneous; // F_p-basis
};

/// Solves the system, returning all solutions as particular + nullspace basis.
/// Throws Errc::inconsistent when empty.
LinSolution solve_lin_system(const LinSystem& sys);

uint8_t fp_inv(unsigned p, uint8_t x);

} // namespace dgw
