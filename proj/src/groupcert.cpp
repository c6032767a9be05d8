#include "dgw/groupcert.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <unordered_set>

namespace dgw {

FqMatrixGroupGens::FqMatrixGroupGens(const FieldCtx& c, std::size_t n_, std::vector<FqMat> gens,
                                     bool sl)
    : ctx(&c), n(n_), generators(std::move(gens)), special_linear(sl) {
    for (const auto& g : generators) {
        require(g.n() == n && &g.ctx() == ctx, Errc::invariant_violation,
                "generator shape mismatch");
        const FieldElem d = g.det();
        require(!d.is_zero(), Errc::invariant_violation, "generator not invertible");
        if (special_linear)
            require(d.is_one(), Errc::invariant_violation, "generator is outside SL_n");
    }
}

std::vector<FqMat> group_closure(const FqMatrixGroupGens& gens, std::size_t cap) {
    const FieldCtx& ctx = *gens.ctx;
    std::vector<FqMat> elements;
    std::unordered_set<std::string> seen;
    std::deque<std::size_t> todo;

    const FqMat id = FqMat::identity(ctx, gens.n);
    elements.push_back(id);
    seen.insert(id.key());
    todo.push_back(0);

    while (!todo.empty()) {
        const std::size_t idx = todo.front();
        todo.pop_front();
        for (const auto& g : gens.generators) {
            const FqMat next = elements[idx].mul(g);
            if (seen.insert(next.key()).second) {
                if (elements.size() >= cap)
                    fail(Errc::cap_exceeded, "group closure exceeded cap");
                elements.push_back(next);
                todo.push_back(elements.size() - 1);
            }
        }
    }
    return elements;
}

std::vector<FqMat> centralizer(const FqMat& g, const std::vector<FqMat>& ambient) {
    std::vector<FqMat> out;
    for (const auto& x : ambient)
        if (x.mul(g) == g.mul(x)) out.push_back(x);
    return out;
}

uint64_t sl2_order(const FieldCtx& ctx) {
    const uint64_t q = ctx.q();
    return q * (q * q - 1);
}

const std::vector<FqMat>& enumerate_sl2(const FieldCtx& ctx) {
    static std::mutex mu;
    static std::map<const FieldCtx*, std::vector<FqMat>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(&ctx);
    if (it != cache.end()) return it->second;

    // transvections over an F_p-basis of F_q generate SL_2(F_q)
    std::vector<FqMat> gens;
    FieldElem basis = ctx.one();
    for (unsigned k = 0; k < ctx.e(); ++k) {
        FqMat upper = FqMat::identity(ctx, 2), lower = FqMat::identity(ctx, 2);
        upper.at(0, 1) = basis;
        lower.at(1, 0) = basis;
        gens.push_back(upper);
        gens.push_back(lower);
        basis = basis * ctx.gen();
    }
    auto all = group_closure(FqMatrixGroupGens(ctx, 2, std::move(gens), true),
                             2 * sl2_order(ctx) + 16);
    require(all.size() == sl2_order(ctx), Errc::invariant_violation,
            "SL_2 enumeration has unexpected size");
    return cache.emplace(&ctx, std::move(all)).first->second;
}

TorusElement torus_element(const FieldCtx& ctx, std::size_t n, const std::vector<Poly>& pj,
                           unsigned prec) {
    require(n >= 2, Errc::invariant_violation, "torus needs n >= 2");
    require(pj.size() == n - 1, Errc::invariant_violation,
            "expected n-1 torus polynomials");
    for (std::size_t a = 0; a < pj.size(); ++a) {
        const Poly& p = pj[a];
        require(!p.is_zero() && p.coeff(0).is_one(), Errc::constant_term_not_one,
                "torus polynomial must have constant term 1");
        if (p.degree() < 1 || !poly_is_irreducible(p))
            fail(Errc::not_irreducible, "torus polynomial " + std::to_string(a + 1) +
                                            " is not a nonconstant irreducible");
        for (std::size_t b = a + 1; b < pj.size(); ++b)
            if (p == pj[b]) fail(Errc::not_distinct, "torus polynomials must be distinct");
    }

    // convert each t-polynomial to a truncated series
    auto to_series = [&](const Poly& p) {
        TruncSeries s(ctx, prec);
        for (unsigned l = 0; l < prec; ++l) s.coeff(l) = p.coeff(l);
        return s;
    };
    TruncSeriesMatrix g(ctx, n, prec);
    TruncSeries prod = TruncSeries::constant(ctx, prec, ctx.one());
    for (std::size_t j = 0; j + 1 < n; ++j) {
        g.at(j, j) = to_series(pj[j]);
        prod = prod.mul(g.at(j, j));
    }
    g.at(n - 1, n - 1) = prod.inv();

    // density: distinct nonconstant irreducibles with unit constant terms make
    // every character product p_1^{k_1}...p_{n-1}^{k_{n-1}} nonconstant unless
    // all k_j vanish (unique factorization in F_q[t]), which is exactly the
    // trivial character of the SL_n diagonal torus
    return TorusElement{std::move(g), true};
}

std::vector<Poly> standard_torus_polys(const FieldCtx& ctx, const FieldElem& zeta, unsigned r) {
    std::vector<Poly> out;
    FieldElem zj = ctx.one();
    for (unsigned j = 1; j <= r; ++j) {
        zj = zj * zeta;
        out.push_back(Poly(ctx, {ctx.one(), zj})); // 1 + zeta^j t
    }
    return out;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::full: return "full";
        case Verdict::proper: return "proper";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// trace sets realized by proper subgroups of SL_2(F_q); every subgroup for
// q <= 9 is generated by at most two elements, so closing all 1- and
// 2-element subsets enumerates the full lattice
struct Sl2Lattice {
    std::vector<std::vector<uint64_t>> proper_trace_sets; // deduplicated
};

const Sl2Lattice& sl2_lattice(const FieldCtx& ctx) {
    static std::mutex mu;
    static std::map<const FieldCtx*, Sl2Lattice> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(&ctx);
    if (it != cache.end()) return it->second;

    require(ctx.q() <= 9, Errc::cap_exceeded, "subgroup enumeration budget is q <= 9");
    const auto& all = enumerate_sl2(ctx);
    const uint64_t full_size = all.size();

    std::set<std::string> subgroup_keys;
    std::set<std::vector<uint64_t>> trace_sets;

    auto process = [&](const std::vector<FqMat>& gens) {
        auto sub =
            group_closure(FqMatrixGroupGens(ctx, 2, gens, true), full_size + 1);
        if (sub.size() == full_size) return;
        std::vector<std::string> keys;
        keys.reserve(sub.size());
        for (const auto& m : sub) keys.push_back(m.key());
        std::sort(keys.begin(), keys.end());
        std::string joined;
        for (const auto& k : keys) joined += k;
        if (!subgroup_keys.insert(joined).second) return;
        std::set<uint64_t> traces;
        for (const auto& m : sub) traces.insert((m.at(0, 0) + m.at(1, 1)).index());
        trace_sets.emplace(traces.begin(), traces.end());
    };

    for (const auto& a : all) process({a});
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) process({all[i], all[j]});

    Sl2Lattice lat;
    lat.proper_trace_sets.assign(trace_sets.begin(), trace_sets.end());
    return cache.emplace(&ctx, std::move(lat)).first->second;
}

} // namespace

std::vector<std::vector<uint64_t>> proper_subgroup_trace_sets(const FieldCtx& ctx) {
    return sl2_lattice(ctx).proper_trace_sets;
}

Verdict charpoly_subgroup_oracle(const FieldCtx& ctx, const std::vector<Poly>& charpolys) {
    // n = 2 with det 1: a characteristic polynomial X^2 - a X + 1 is its trace
    std::set<uint64_t> need;
    for (const auto& cp : charpolys) {
        require(cp.degree() == 2 && cp.coeff(2).is_one(), Errc::invariant_violation,
                "expected monic degree-2 characteristic polynomials");
        require(cp.coeff(0).is_one(), Errc::invariant_violation,
                "expected constant term 1 (det 1)");
        need.insert((-cp.coeff(1)).index());
    }
    const auto& lat = sl2_lattice(ctx);
    for (const auto& traces : lat.proper_trace_sets) {
        if (std::includes(traces.begin(), traces.end(), need.begin(), need.end()))
            return Verdict::proper; // some proper subgroup realizes all of them
    }
    return Verdict::full;
}

uint64_t matrix_order(const FqMat& g, uint64_t cap) {
    FqMat acc = g;
    for (uint64_t k = 1; k <= cap; ++k) {
        if (acc.is_identity()) return k;
        acc = acc.mul(g);
    }
    fail(Errc::cap_exceeded, "matrix order exceeds cap");
}

} // namespace dgw
