#include "dgw/frobmod.hpp"

#include <algorithm>

namespace dgw {

namespace {

BivarEntry matrix_det(const std::vector<BivarEntry>& a, std::size_t n, const FieldCtx& ctx) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    BivarEntry acc = BivarEntry::zero(ctx);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        BivarEntry term = BivarEntry::one(ctx);
        for (std::size_t i = 0; i < n; ++i) term = term.mul(a[i * n + perm[i]]);
        acc = (inversions % 2 == 0) ? acc.add(term) : acc.sub(term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

std::vector<BivarEntry> matrix_mul(const std::vector<BivarEntry>& a,
                                   const std::vector<BivarEntry>& b, std::size_t n,
                                   const FieldCtx& ctx) {
    std::vector<BivarEntry> out(n * n, BivarEntry::zero(ctx));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i * n + k].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                out[i * n + j] = out[i * n + j].add(a[i * n + k].mul(b[k * n + j]));
        }
    return out;
}

} // namespace

FrobModule::FrobModule(const FieldCtx& base, std::size_t n, std::vector<BivarEntry> entries,
                       unsigned level)
    : base_(&base), n_(n), level_(level), d_(std::move(entries)) {
    require(n_ >= 1 && d_.size() == n_ * n_, Errc::invariant_violation,
            "representing matrix shape mismatch");
    require(level_ >= 1, Errc::invariant_violation, "level must be positive");
    const BivarEntry dt = matrix_det(d_, n_, base);
    require(!dt.is_zero(), Errc::invariant_violation, "representing matrix must be invertible");
    require(!dt.at_t0().is_zero(), Errc::invariant_violation,
            "representing matrix must be invertible at t = 0");
}

BivarEntry FrobModule::det() const { return matrix_det(d_, n_, *base_); }

ReducedModule reduce_module_at(const FrobModule& m, const PlaceFin& place, unsigned N) {
    TruncSeriesMatrix dbar(place.residue_ctx(), m.n(), N);
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j)
            dbar.at(i, j) = expand_at_place(m.at(i, j), place, N);
    if (dbar.constant_term().det().is_zero())
        fail(Errc::singular_reduction, "reduced constant term is singular");
    return ReducedModule{place, std::move(dbar), N};
}

TruncSeriesMatrix frobenius_product(const ReducedModule& r) {
    TruncSeriesMatrix acc = r.dbar;
    for (unsigned k = 1; k < r.place.degree(); ++k) acc = acc.mul(r.dbar.apply_phi(k));
    return acc;
}

FrobModule raise_level(const FrobModule& m, unsigned i) {
    require(i >= 1, Errc::invariant_violation, "level raise requires i >= 1");
    const std::size_t n = m.n();
    std::vector<BivarEntry> base_entries;
    base_entries.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) base_entries.push_back(m.at(r, c));

    std::vector<BivarEntry> acc = base_entries;
    for (unsigned k = 1; k < i; ++k) {
        std::vector<BivarEntry> twisted;
        twisted.reserve(n * n);
        for (const auto& e : base_entries) twisted.push_back(e.frobenius_s(k * m.level()));
        acc = matrix_mul(acc, twisted, n, m.base());
    }
    return FrobModule(m.base(), n, std::move(acc), m.level() * i);
}

ExistenceReport check_existence_hypothesis(const FrobModule& m, const PlaceFin& q_place,
                                           unsigned N) {
    ExistenceReport rep{true, -1, std::vector<int64_t>(N, kInfValuation)};
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) {
            const TPoly expansion = m.at(i, j).expand_tpoly(N);
            for (unsigned l = 0; l < N; ++l) {
                const int64_t v = valuation_at(q_place, expansion.coeffs[l]);
                if (v < 0)
                    fail(Errc::not_integral, "entry (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") not integral at t^" +
                                                 std::to_string(l));
                rep.min_valuations[l] = std::min(rep.min_valuations[l], v);
            }
        }
    for (unsigned l = 0; l < N; ++l) {
        if (rep.min_valuations[l] < static_cast<int64_t>(l)) {
            rep.ok = false;
            rep.first_failure = static_cast<int>(l);
            break;
        }
    }
    return rep;
}

namespace {

// P(s) -> theta^scale * P(theta^{-1} + alpha), a polynomial when
// scale >= deg P
Poly substitute_inverse_shift(const Poly& p, const FieldElem& alpha, unsigned scale) {
    const FieldCtx& ctx = p.ctx();
    Poly out(ctx);
    if (p.is_zero()) return out;
    // (1 + alpha*theta)^i * theta^(scale - i), summed with coefficients
    const Poly base(ctx, {ctx.one(), alpha}); // 1 + alpha*theta
    Poly base_pow = Poly::constant(ctx.one());
    for (int i = 0; i <= p.degree(); ++i) {
        if (!p.coeff(i).is_zero()) {
            const Poly term = Poly::monomial(ctx, scale - static_cast<unsigned>(i), p.coeff(i));
            out = out + term * base_pow;
        }
        if (i < p.degree()) base_pow = base_pow * base;
    }
    return out;
}

// P(theta) -> (s - alpha)^scale * P(1/(s - alpha))
Poly substitute_inverse_back(const Poly& p, const FieldElem& alpha, unsigned scale) {
    const FieldCtx& ctx = p.ctx();
    Poly out(ctx);
    if (p.is_zero()) return out;
    const Poly shifted(ctx, {-alpha, ctx.one()}); // s - alpha
    for (int i = 0; i <= p.degree(); ++i) {
        if (p.coeff(i).is_zero()) continue;
        Poly pw = Poly::constant(p.coeff(i));
        for (unsigned k = 0; k < scale - static_cast<unsigned>(i); ++k) pw = pw * shifted;
        out = out + pw;
    }
    return out;
}

BivarEntry substitute_entry(const BivarEntry& e, const FieldElem& alpha, bool forward) {
    int max_deg = 0;
    for (const auto& c : e.num()) max_deg = std::max(max_deg, c.degree());
    for (const auto& c : e.den()) max_deg = std::max(max_deg, c.degree());
    const unsigned scale = static_cast<unsigned>(std::max(max_deg, 0));
    auto map = [&](const std::vector<Poly>& v) {
        std::vector<Poly> out;
        out.reserve(v.size());
        for (const auto& c : v)
            out.push_back(forward ? substitute_inverse_shift(c, alpha, scale)
                                  : substitute_inverse_back(c, alpha, scale));
        return out;
    };
    return BivarEntry(map(e.num()), map(e.den()));
}

} // namespace

PreTMotive export_pre_t_motive(const FrobModule& m, const PlaceFin& place) {
    require(place.degree() == 1, Errc::degree_not_one, "export requires a degree-1 place");
    const FieldCtx& base = m.base();
    // pi = s + c0 monic linear, so alpha = -c0 in F_q
    const FieldElem alpha = -place.pi().coeff(0);
    std::vector<BivarEntry> entries;
    entries.reserve(m.n() * m.n());
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j)
            entries.push_back(substitute_entry(m.at(i, j), alpha, true));
    return PreTMotive{
        FrobModule(base, m.n(), std::move(entries), m.level()),
        alpha,
        "inverse coefficient Frobenius, defined on finite coefficient fields",
        "Psi = phi_q(Y) for a fundamental matrix Y of the source module",
        "Phi * Psi = sigma(Psi)",
    };
}

FrobModule import_pre_t_motive(const PreTMotive& p) {
    const FrobModule& m = p.motive;
    std::vector<BivarEntry> entries;
    entries.reserve(m.n() * m.n());
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j)
            entries.push_back(substitute_entry(m.at(i, j), p.alpha, false));
    return FrobModule(m.base(), m.n(), std::move(entries), m.level());
}

} // namespace dgw
