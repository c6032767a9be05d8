#include "dgw/fp_linalg.hpp"

namespace dgw {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::not_prime: return "NotPrime";
        case Errc::degree_overflow: return "DegreeOverflow";
        case Errc::inconsistent: return "Inconsistent";
        case Errc::not_integral: return "NotIntegral";
        case Errc::zero_input: return "ZeroInput";
        case Errc::non_unit_denominator: return "NonUnitDenominator";
        case Errc::singular_constant_term: return "SingularConstantTerm";
        case Errc::singular_reduction: return "SingularReduction";
        case Errc::splitting_degree_exceeded: return "SplittingDegreeExceeded";
        case Errc::determinant_not_phi_fixed: return "DeterminantNotPhiFixed";
        case Errc::phi_fixedness_violated: return "PhiFixednessViolated";
        case Errc::centralizer_not_torus: return "CentralizerNotTorus";
        case Errc::no_rational_descent: return "NoRationalDescent";
        case Errc::not_irreducible: return "NotIrreducible";
        case Errc::not_distinct: return "NotDistinct";
        case Errc::constant_term_not_one: return "ConstantTermNotOne";
        case Errc::not_primitive_root: return "NotPrimitiveRoot";
        case Errc::eigenvalue_collision: return "EigenvalueCollision";
        case Errc::bad_alpha: return "BadAlpha";
        case Errc::conjugation_failed: return "ConjugationFailed";
        case Errc::cap_exceeded: return "CapExceeded";
        case Errc::budget_exhausted: return "BudgetExhausted";
        case Errc::degree_not_one: return "DegreeNotOne";
        case Errc::not_in_subfield: return "NotInSubfield";
        case Errc::parse_error: return "ParseError";
        case Errc::invariant_violation: return "InvariantViolation";
    }
    return "UnknownError";
}

uint8_t fp_inv(unsigned p, uint8_t x) {
    require(x % p != 0, Errc::invariant_violation, "inverse of zero mod p");
    // extended Euclid on small ints
    int a = static_cast<int>(x % p), b = static_cast<int>(p);
    int u = 1, v = 0;
    while (b != 0) {
        int qt = a / b;
        a -= qt * b;
        std::swap(a, b);
        u -= qt * v;
        std::swap(u, v);
    }
    int r = u % static_cast<int>(p);
    if (r < 0) r += static_cast<int>(p);
    return static_cast<uint8_t>(r);
}

FpMat FpMat::identity(unsigned p, std::size_t n) {
    FpMat m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMat FpMat::mul(const FpMat& rhs) const {
    require(cols_ == rhs.rows_ && p_ == rhs.p_, Errc::invariant_violation, "FpMat::mul shape");
    FpMat out(p_, rows_, rhs.cols_);
    // accumulate in 32 bits; entries are < 256 so ~66k terms fit untouched
    std::vector<uint32_t> acc(rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        std::size_t since_reduce = 0;
        for (std::size_t k = 0; k < cols_; ++k) {
            const unsigned c = at(i, k);
            if (c != 0) {
                const uint8_t* src = &rhs.a_[k * rhs.cols_];
                for (std::size_t j = 0; j < rhs.cols_; ++j) acc[j] += c * src[j];
            }
            if (++since_reduce == 65000) {
                for (auto& v : acc) v %= p_;
                since_reduce = 0;
            }
        }
        uint8_t* dst = &out.a_[i * rhs.cols_];
        for (std::size_t j = 0; j < rhs.cols_; ++j)
            dst[j] = static_cast<uint8_t>(acc[j] % p_);
    }
    return out;
}

std::vector<uint8_t> FpMat::apply(const std::vector<uint8_t>& v) const {
    require(v.size() == cols_, Errc::invariant_violation, "FpMat::apply shape");
    std::vector<uint8_t> out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        unsigned acc = 0;
        const uint8_t* row = &a_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) acc += static_cast<unsigned>(row[j]) * v[j];
        out[i] = static_cast<uint8_t>(acc % p_);
    }
    return out;
}

FpSolver::FpSolver(FpMat m) : r_(std::move(m)) {
    const unsigned p = r_.p();
    const std::size_t rows = r_.rows(), cols = r_.cols();
    t_ = FpMat::identity(p, rows);
    col_pivot_row_.assign(cols, -1);

    // byte-sum reduction table: operands stay below p, products below p^2
    uint8_t red[65536];
    for (unsigned v = 0; v < 65536; ++v) red[v] = static_cast<uint8_t>(v % p);
    auto axpy = [&](uint8_t* dst, const uint8_t* src, unsigned c, std::size_t len) {
        for (std::size_t j = 0; j < len; ++j)
            dst[j] = red[dst[j] + c * src[j]];
    };

    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && r_.at(piv, col) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != row) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(r_.at(piv, j), r_.at(row, j));
            for (std::size_t j = 0; j < rows; ++j) std::swap(t_.at(piv, j), t_.at(row, j));
        }
        const unsigned inv = fp_inv(p, r_.at(row, col));
        if (inv != 1) {
            for (std::size_t j = 0; j < cols; ++j)
                r_.at(row, j) = red[r_.at(row, j) * inv];
            for (std::size_t j = 0; j < rows; ++j)
                t_.at(row, j) = red[t_.at(row, j) * inv];
        }
        uint8_t* rrow = &r_.at(row, 0);
        uint8_t* trow = &t_.at(row, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row) continue;
            const unsigned c = r_.at(i, col);
            if (c == 0) continue;
            const unsigned neg = p - c;
            axpy(&r_.at(i, 0), rrow, neg, cols);
            axpy(&t_.at(i, 0), trow, neg, rows);
        }
        pivot_cols_.push_back(col);
        col_pivot_row_[col] = static_cast<int>(row);
        ++row;
    }
    rank_ = row;

    // nullspace: one basis vector per free column
    for (std::size_t col = 0; col < cols; ++col) {
        if (col_pivot_row_[col] >= 0) continue;
        std::vector<uint8_t> v(cols, 0);
        v[col] = 1;
        for (std::size_t k = 0; k < pivot_cols_.size(); ++k) {
            const uint8_t c = r_.at(k, col);
            if (c != 0) v[pivot_cols_[k]] = static_cast<uint8_t>((p - c) % p);
        }
        null_.push_back(std::move(v));
    }
}

std::optional<std::vector<uint8_t>> FpSolver::solve(const std::vector<uint8_t>& rhs) const {
    const unsigned p = r_.p();
    require(rhs.size() == r_.rows(), Errc::invariant_violation, "FpSolver::solve shape");
    std::vector<uint8_t> y = t_.apply(rhs);
    for (std::size_t i = rank_; i < r_.rows(); ++i)
        if (y[i] != 0) return std::nullopt;
    std::vector<uint8_t> x(r_.cols(), 0);
    for (std::size_t k = 0; k < pivot_cols_.size(); ++k) x[pivot_cols_[k]] = y[k] % p;
    return x;
}

std::vector<uint8_t> FpSolver::reduce_rhs(const std::vector<uint8_t>& rhs) const {
    require(rhs.size() == r_.rows(), Errc::invariant_violation, "FpSolver::reduce_rhs shape");
    return t_.apply(rhs);
}

LinSolution solve_lin_system(const LinSystem& sys) {
    FpSolver f(sys.a);
    auto part = f.solve(sys.b);
    if (!part) fail(Errc::inconsistent, "affine F_p system has no solution");
    return LinSolution{*part, f.nullspace()};
}

} // namespace dgw
