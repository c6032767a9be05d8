#include "dgw/semilinear.hpp"

namespace dgw {

namespace {

// F_p-matrix of multiplication by a fixed field element: column j is a*x^j,
// built by repeated shift-and-reduce against the (monic) modulus
FpMat mul_matrix(const FieldElem& a) {
    const FieldCtx& ctx = *a.ctx;
    const unsigned deg = ctx.deg();
    const unsigned p = ctx.p();
    const auto& mod = ctx.modulus();
    FpMat m(p, deg, deg);
    std::vector<uint8_t> col = a.c;
    for (unsigned j = 0; j < deg; ++j) {
        for (unsigned i = 0; i < deg; ++i) m.at(i, j) = col[i];
        if (j + 1 == deg) break;
        const unsigned top = col[deg - 1];
        for (unsigned i = deg - 1; i > 0; --i) col[i] = col[i - 1];
        col[0] = 0;
        if (top != 0) {
            for (unsigned i = 0; i < deg; ++i) {
                const unsigned sub = top * mod[i] % p;
                col[i] = static_cast<uint8_t>((col[i] + p - sub) % p);
            }
        }
    }
    return m;
}

} // namespace

FpMat column_twist_matrix(const FqMat& a) {
    const FieldCtx& ctx = a.ctx();
    const std::size_t n = a.n();
    const unsigned deg = ctx.deg();
    const FpMat& phi = ctx.frob_q_matrix();
    FpMat sys(ctx.p(), n * deg, n * deg);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < n; ++m) {
            if (a.at(i, m).is_zero()) continue;
            const FpMat block = mul_matrix(a.at(i, m)).mul(phi);
            const std::size_t r0 = i * deg, c0 = m * deg;
            for (unsigned r = 0; r < deg; ++r)
                for (unsigned c = 0; c < deg; ++c) sys.at(r0 + r, c0 + c) = block.at(r, c);
        }
    }
    return sys;
}

std::vector<uint8_t> flatten_column(const FqMat& m, std::size_t col) {
    const unsigned deg = m.ctx().deg();
    const std::size_t n = m.n();
    std::vector<uint8_t> v(n * deg, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& el = m.at(i, col);
        std::copy(el.c.begin(), el.c.end(), v.begin() + i * deg);
    }
    return v;
}

void set_column(FqMat& m, std::size_t col, const std::vector<uint8_t>& v) {
    const FieldCtx& ctx = m.ctx();
    const unsigned deg = ctx.deg();
    require(v.size() == m.n() * deg, Errc::invariant_violation, "column shape");
    for (std::size_t i = 0; i < m.n(); ++i) {
        std::vector<uint8_t> c(v.begin() + i * deg, v.begin() + (i + 1) * deg);
        m.at(i, col) = ctx.from_coeffs(std::move(c));
    }
}

SemilinearOperator::SemilinearOperator(const FqMat& a) : ctx_(&a.ctx()), n_(a.n()) {
    FpMat sys = column_twist_matrix(a);
    const unsigned p = ctx_->p();
    for (std::size_t d = 0; d < sys.rows(); ++d)
        sys.at(d, d) = static_cast<uint8_t>((sys.at(d, d) + p - 1) % p);
    solver_ = std::make_unique<FpSolver>(std::move(sys));
}

std::optional<FqMat> SemilinearOperator::solve(const FqMat& b) const {
    // (L - I)·z_col = -b_col, one decoupled system per column
    const unsigned p = ctx_->p();
    FqMat out(*ctx_, n_);
    for (std::size_t col = 0; col < n_; ++col) {
        std::vector<uint8_t> rhs = flatten_column(b, col);
        for (auto& v : rhs) v = static_cast<uint8_t>((p - v) % p);
        auto sol = solver_->solve(rhs);
        if (!sol) return std::nullopt;
        set_column(out, col, *sol);
    }
    return out;
}

std::vector<FqMat> SemilinearOperator::kernel() const {
    std::vector<FqMat> out;
    out.reserve(n_ * solver_->nullspace().size());
    for (std::size_t col = 0; col < n_; ++col)
        for (const auto& v : solver_->nullspace()) {
            FqMat m(*ctx_, n_);
            set_column(m, col, v);
            out.push_back(std::move(m));
        }
    return out;
}

AffineSemilinearSolution solve_affine_semilinear(const FqMat& a, const FqMat& b) {
    require(a.n() == b.n() && &a.ctx() == &b.ctx(), Errc::invariant_violation,
            "semilinear system shape mismatch");
    require(!a.det().is_zero(), Errc::invariant_violation, "twist matrix must be invertible");
    SemilinearOperator op(a);
    auto part = op.solve(b);
    if (!part) fail(Errc::inconsistent, "no solution over the current field; raise M");
    return AffineSemilinearSolution{*part, op.kernel()};
}

} // namespace dgw
