#include "dgw/tseries.hpp"

#include <algorithm>

namespace dgw {

// -------------------------------------------------------------- TruncSeries

TruncSeries::TruncSeries(const FieldCtx& ctx, unsigned prec)
    : ctx_(&ctx), prec_(prec), coeffs_(prec, ctx.zero()) {
    require(prec >= 1, Errc::invariant_violation, "precision must be positive");
}

TruncSeries::TruncSeries(const FieldCtx& ctx, unsigned prec, std::vector<FieldElem> coeffs)
    : ctx_(&ctx), prec_(prec), coeffs_(std::move(coeffs)) {
    require(prec >= 1, Errc::invariant_violation, "precision must be positive");
    require(coeffs_.size() <= prec, Errc::invariant_violation, "coefficient list too long");
    coeffs_.resize(prec, ctx.zero());
    for (const auto& c : coeffs_)
        require(c.ctx == ctx_, Errc::invariant_violation, "series coefficient context mismatch");
}

TruncSeries TruncSeries::constant(const FieldCtx& ctx, unsigned prec, const FieldElem& c) {
    TruncSeries out(ctx, prec);
    out.coeffs_[0] = c;
    return out;
}

bool TruncSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const FieldElem& c) { return c.is_zero(); });
}

TruncSeries TruncSeries::add(const TruncSeries& rhs) const {
    require(prec_ == rhs.prec_ && ctx_ == rhs.ctx_, Errc::invariant_violation, "series shape");
    TruncSeries out(*ctx_, prec_);
    for (unsigned i = 0; i < prec_; ++i) out.coeffs_[i] = coeffs_[i] + rhs.coeffs_[i];
    return out;
}

TruncSeries TruncSeries::sub(const TruncSeries& rhs) const {
    require(prec_ == rhs.prec_ && ctx_ == rhs.ctx_, Errc::invariant_violation, "series shape");
    TruncSeries out(*ctx_, prec_);
    for (unsigned i = 0; i < prec_; ++i) out.coeffs_[i] = coeffs_[i] - rhs.coeffs_[i];
    return out;
}

TruncSeries TruncSeries::mul(const TruncSeries& rhs) const {
    require(prec_ == rhs.prec_ && ctx_ == rhs.ctx_, Errc::invariant_violation, "series shape");
    TruncSeries out(*ctx_, prec_);
    for (unsigned i = 0; i < prec_; ++i) {
        if (coeffs_[i].is_zero()) continue;
        for (unsigned j = 0; j + i < prec_; ++j)
            out.coeffs_[i + j] = out.coeffs_[i + j] + coeffs_[i] * rhs.coeffs_[j];
    }
    return out;
}

TruncSeries TruncSeries::neg() const {
    TruncSeries out(*ctx_, prec_);
    for (unsigned i = 0; i < prec_; ++i) out.coeffs_[i] = -coeffs_[i];
    return out;
}

TruncSeries TruncSeries::inv() const {
    require(!coeffs_[0].is_zero(), Errc::singular_constant_term,
            "series inverse needs a unit constant term");
    TruncSeries out(*ctx_, prec_);
    const FieldElem c0inv = ctx_->inv(coeffs_[0]);
    out.coeffs_[0] = c0inv;
    for (unsigned l = 1; l < prec_; ++l) {
        FieldElem acc = ctx_->zero();
        for (unsigned j = 1; j <= l; ++j) acc = acc + coeffs_[j] * out.coeffs_[l - j];
        out.coeffs_[l] = -(c0inv * acc);
    }
    return out;
}

TruncSeries TruncSeries::apply_phi(unsigned k) const {
    TruncSeries out(*ctx_, prec_);
    for (unsigned i = 0; i < prec_; ++i) out.coeffs_[i] = ctx_->frobenius(coeffs_[i], k);
    return out;
}

TruncSeries TruncSeries::truncate(unsigned new_prec) const {
    require(new_prec <= prec_, Errc::invariant_violation, "cannot extend precision");
    return TruncSeries(*ctx_, new_prec,
                       std::vector<FieldElem>(coeffs_.begin(), coeffs_.begin() + new_prec));
}

TruncSeries TruncSeries::embed_into(const FieldCtx& dst) const {
    TruncSeries out(dst, prec_);
    for (unsigned i = 0; i < prec_; ++i) out.coeffs_[i] = embed(coeffs_[i], dst);
    return out;
}

// -------------------------------------------------------- TruncSeriesMatrix

TruncSeriesMatrix::TruncSeriesMatrix(const FieldCtx& ctx, std::size_t n, unsigned prec)
    : ctx_(&ctx), n_(n), prec_(prec), a_(n * n, TruncSeries(ctx, prec)) {}

TruncSeriesMatrix TruncSeriesMatrix::identity(const FieldCtx& ctx, std::size_t n, unsigned prec) {
    TruncSeriesMatrix m(ctx, n, prec);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = TruncSeries::constant(ctx, prec, ctx.one());
    return m;
}

TruncSeriesMatrix TruncSeriesMatrix::from_constant(const FqMat& c, unsigned prec) {
    TruncSeriesMatrix m(c.ctx(), c.n(), prec);
    for (std::size_t i = 0; i < c.n(); ++i)
        for (std::size_t j = 0; j < c.n(); ++j)
            m.at(i, j) = TruncSeries::constant(c.ctx(), prec, c.at(i, j));
    return m;
}

TruncSeriesMatrix TruncSeriesMatrix::mul(const TruncSeriesMatrix& rhs) const {
    require(n_ == rhs.n_ && ctx_ == rhs.ctx_ && prec_ == rhs.prec_, Errc::invariant_violation,
            "series matrix shape mismatch");
    TruncSeriesMatrix out(*ctx_, n_, prec_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const TruncSeries& c = at(i, k);
            if (c.is_zero()) continue;
            for (std::size_t j = 0; j < n_; ++j)
                out.at(i, j) = out.at(i, j).add(c.mul(rhs.at(k, j)));
        }
    return out;
}

TruncSeriesMatrix TruncSeriesMatrix::add(const TruncSeriesMatrix& rhs) const {
    TruncSeriesMatrix out(*ctx_, n_, prec_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i].add(rhs.a_[i]);
    return out;
}

TruncSeriesMatrix TruncSeriesMatrix::sub(const TruncSeriesMatrix& rhs) const {
    TruncSeriesMatrix out(*ctx_, n_, prec_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i].sub(rhs.a_[i]);
    return out;
}

FqMat TruncSeriesMatrix::coeff_matrix(unsigned l) const {
    FqMat m(*ctx_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m.at(i, j) = at(i, j).coeff(l);
    return m;
}

void TruncSeriesMatrix::set_coeff_matrix(unsigned l, const FqMat& m) {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) at(i, j).coeff(l) = m.at(i, j);
}

TruncSeriesMatrix TruncSeriesMatrix::inverse() const {
    // X_0 = C_0^{-1}; X_l = -C_0^{-1} * sum_{j=1..l} C_j X_{l-j}
    const FqMat c0 = constant_term();
    if (c0.det().is_zero())
        fail(Errc::singular_constant_term, "series matrix inverse needs invertible constant term");
    const FqMat c0inv = c0.inverse();
    TruncSeriesMatrix out(*ctx_, n_, prec_);
    out.set_coeff_matrix(0, c0inv);
    for (unsigned l = 1; l < prec_; ++l) {
        FqMat acc(*ctx_, n_);
        for (unsigned j = 1; j <= l; ++j)
            acc = acc.add(coeff_matrix(j).mul(out.coeff_matrix(l - j)));
        FqMat xl = c0inv.mul(acc);
        // negate
        FqMat neg(*ctx_, n_);
        xl = neg.sub(xl);
        out.set_coeff_matrix(l, xl);
    }
    return out;
}

TruncSeriesMatrix TruncSeriesMatrix::apply_phi(unsigned k) const {
    TruncSeriesMatrix out(*ctx_, n_, prec_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i].apply_phi(k);
    return out;
}

TruncSeriesMatrix TruncSeriesMatrix::embed_into(const FieldCtx& dst) const {
    TruncSeriesMatrix out(dst, n_, prec_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i].embed_into(dst);
    return out;
}

TruncSeriesMatrix TruncSeriesMatrix::truncate(unsigned new_prec) const {
    TruncSeriesMatrix out(*ctx_, n_, new_prec);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i].truncate(new_prec);
    return out;
}

TruncSeries TruncSeriesMatrix::det() const {
    std::vector<std::size_t> perm(n_);
    for (std::size_t i = 0; i < n_; ++i) perm[i] = i;
    TruncSeries acc(*ctx_, prec_);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (perm[i] > perm[j]) ++inversions;
        TruncSeries term = TruncSeries::constant(*ctx_, prec_, ctx_->one());
        for (std::size_t i = 0; i < n_; ++i) term = term.mul(at(i, perm[i]));
        acc = (inversions % 2 == 0) ? acc.add(term) : acc.sub(term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

bool TruncSeriesMatrix::is_identity() const {
    return *this == identity(*ctx_, n_, prec_);
}

std::vector<TruncSeries> TruncSeriesMatrix::charpoly() const {
    // coefficients of det(X*I - A) over the truncated series ring
    std::vector<std::size_t> perm(n_);
    for (std::size_t i = 0; i < n_; ++i) perm[i] = i;
    std::vector<TruncSeries> acc(n_ + 1, TruncSeries(*ctx_, prec_));
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (perm[i] > perm[j]) ++inversions;
        // product over i of (delta_{i,perm(i)} X - a_{i,perm(i)}), a polynomial
        // in X with series coefficients
        std::vector<TruncSeries> term{TruncSeries::constant(*ctx_, prec_, ctx_->one())};
        for (std::size_t i = 0; i < n_; ++i) {
            std::vector<TruncSeries> next(term.size() + 1, TruncSeries(*ctx_, prec_));
            for (std::size_t d = 0; d < term.size(); ++d) {
                next[d] = next[d].add(term[d].mul(at(i, perm[i]).neg()));
                if (i == perm[i]) next[d + 1] = next[d + 1].add(term[d]);
            }
            if (i != perm[i]) next.pop_back();
            term = std::move(next);
        }
        for (std::size_t d = 0; d < term.size(); ++d) {
            if (inversions % 2 == 0) acc[d] = acc[d].add(term[d]);
            else acc[d] = acc[d].sub(term[d]);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

// --------------------------------------------------------------- BivarEntry

BivarEntry::BivarEntry(std::vector<Poly> num, std::vector<Poly> den)
    : num_(std::move(num)), den_(std::move(den)) {
    require(!den_.empty(), Errc::zero_input, "bivariate entry with empty denominator");
    normalize();
    require(!den_.empty() && !den_[0].is_zero(), Errc::non_unit_denominator,
            "denominator vanishes at t = 0");
}

void BivarEntry::normalize() {
    auto trim = [](std::vector<Poly>& v) {
        while (!v.empty() && v.back().is_zero()) v.pop_back();
    };
    trim(num_);
    trim(den_);
}

const FieldCtx& BivarEntry::ctx() const {
    require(!den_.empty(), Errc::invariant_violation, "uninitialized bivariate entry");
    return den_[0].ctx();
}

BivarEntry BivarEntry::zero(const FieldCtx& ctx) {
    return BivarEntry({}, {Poly::constant(ctx.one())});
}

BivarEntry BivarEntry::one(const FieldCtx& ctx) {
    return BivarEntry({Poly::constant(ctx.one())}, {Poly::constant(ctx.one())});
}

BivarEntry BivarEntry::from_spoly(Poly p) {
    const FieldCtx& ctx = p.ctx();
    return BivarEntry({std::move(p)}, {Poly::constant(ctx.one())});
}

BivarEntry BivarEntry::from_tpoly(std::vector<Poly> tcoeffs) {
    require(!tcoeffs.empty(), Errc::zero_input, "empty t-coefficient list");
    const FieldCtx& ctx = tcoeffs[0].ctx();
    return BivarEntry(std::move(tcoeffs), {Poly::constant(ctx.one())});
}

namespace {

std::vector<Poly> tpoly_mul(const std::vector<Poly>& a, const std::vector<Poly>& b) {
    if (a.empty() || b.empty()) return {};
    const FieldCtx& ctx = (a.empty() ? b : a)[0].ctx();
    std::vector<Poly> out(a.size() + b.size() - 1, Poly(ctx));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    }
    return out;
}

std::vector<Poly> tpoly_add(const std::vector<Poly>& a, const std::vector<Poly>& b,
                            bool subtract) {
    const FieldCtx* ctx = nullptr;
    if (!a.empty()) ctx = &a[0].ctx();
    else if (!b.empty()) ctx = &b[0].ctx();
    else return {};
    std::vector<Poly> out(std::max(a.size(), b.size()), Poly(*ctx));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Poly ai = i < a.size() ? a[i] : Poly(*ctx);
        const Poly bi = i < b.size() ? b[i] : Poly(*ctx);
        out[i] = subtract ? ai - bi : ai + bi;
    }
    return out;
}

} // namespace

BivarEntry BivarEntry::add(const BivarEntry& rhs) const {
    return BivarEntry(tpoly_add(tpoly_mul(num_, rhs.den_), tpoly_mul(rhs.num_, den_), false),
                      tpoly_mul(den_, rhs.den_));
}

BivarEntry BivarEntry::sub(const BivarEntry& rhs) const {
    return BivarEntry(tpoly_add(tpoly_mul(num_, rhs.den_), tpoly_mul(rhs.num_, den_), true),
                      tpoly_mul(den_, rhs.den_));
}

BivarEntry BivarEntry::mul(const BivarEntry& rhs) const {
    return BivarEntry(tpoly_mul(num_, rhs.num_), tpoly_mul(den_, rhs.den_));
}

BivarEntry BivarEntry::neg() const {
    std::vector<Poly> out;
    out.reserve(num_.size());
    for (const auto& c : num_) out.push_back(-c);
    return BivarEntry(std::move(out), den_);
}

BivarEntry BivarEntry::inv() const {
    require(!is_zero(), Errc::zero_input, "inverse of zero entry");
    return BivarEntry(den_, num_);
}

BivarEntry BivarEntry::frobenius_s(unsigned k) const {
    uint64_t power = 1;
    const uint64_t q = ctx().q();
    for (unsigned i = 0; i < k; ++i) power *= q;
    auto map = [&](const std::vector<Poly>& v) {
        std::vector<Poly> out;
        out.reserve(v.size());
        for (const auto& c : v) out.push_back(c.substitute_power(static_cast<unsigned>(power)));
        return out;
    };
    return BivarEntry(map(num_), map(den_));
}

bool BivarEntry::equals(const BivarEntry& rhs) const {
    const auto diff = tpoly_add(tpoly_mul(num_, rhs.den_), tpoly_mul(rhs.num_, den_), true);
    return std::all_of(diff.begin(), diff.end(), [](const Poly& c) { return c.is_zero(); });
}

RatFunc BivarEntry::at_t0() const {
    const FieldCtx& c = ctx();
    const Poly num0 = num_.empty() ? Poly(c) : num_[0];
    return RatFunc(num0, den_[0]);
}

TPoly BivarEntry::expand_tpoly(unsigned N) const {
    // series division over F_q(s): c_l = (num_l - sum_{j>=1} den_j c_{l-j}) / den_0
    const FieldCtx& c = ctx();
    const RatFunc den0_inv = RatFunc::from_poly(den_[0]).inv();
    TPoly out;
    out.coeffs.reserve(N);
    for (unsigned l = 0; l < N; ++l) {
        RatFunc acc = l < num_.size() ? RatFunc::from_poly(num_[l]) : RatFunc(c);
        for (unsigned j = 1; j <= l && j < den_.size(); ++j)
            acc = acc - RatFunc::from_poly(den_[j]) * out.coeffs[l - j];
        out.coeffs.push_back(acc * den0_inv);
    }
    return out;
}

TruncSeries expand_at_place(const BivarEntry& e, const PlaceFin& place, unsigned N) {
    const FieldCtx& res = place.residue_ctx();

    // fast path: when den(alpha, 0) is a unit the whole fraction lies in the
    // valuation ring of the t-adic completion, so substituting s = alpha first
    // and dividing the residue series agrees with reducing the canonical
    // expansion coefficientwise
    auto eval_poly = [&](const Poly& p) {
        FieldElem acc = res.zero();
        for (std::size_t i = p.coeffs().size(); i-- > 0;)
            acc = acc * place.root() + embed(p.coeffs()[i], res);
        return acc;
    };
    const FieldElem den0 = eval_poly(e.den()[0]);
    if (!den0.is_zero()) {
        TruncSeries num(res, N), den(res, N);
        for (unsigned l = 0; l < N && l < e.num().size(); ++l)
            num.coeff(l) = eval_poly(e.num()[l]);
        for (unsigned l = 0; l < N && l < e.den().size(); ++l)
            den.coeff(l) = eval_poly(e.den()[l]);
        return num.mul(den.inv());
    }

    // exact route: rational-function coefficients with valuation checks
    const TPoly expansion = e.expand_tpoly(N);
    TruncSeries out(res, N);
    for (unsigned l = 0; l < N; ++l) {
        if (valuation_at(place, expansion.coeffs[l]) < 0)
            fail(Errc::not_integral,
                 "t^" + std::to_string(l) + " coefficient not integral at place");
        out.coeff(l) = reduce_at(place, expansion.coeffs[l]);
    }
    return out;
}

} // namespace dgw
