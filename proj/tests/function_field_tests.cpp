#include <doctest.h>

#include <random>

#include "dgw/function_field.hpp"

using namespace dgw;

namespace {

Poly poly_from_ints(const FieldCtx& ctx, std::initializer_list<int> coeffs) {
    std::vector<FieldElem> c;
    for (int v : coeffs) c.push_back(ctx.from_pint(static_cast<uint64_t>(((v % 5) + 5) % 5)));
    return Poly(ctx, std::move(c));
}

RatFunc random_ratfunc(const FieldCtx& ctx, std::mt19937_64& rng) {
    auto rand_poly = [&](int maxdeg, bool nonzero) {
        while (true) {
            std::vector<FieldElem> c;
            const int d = static_cast<int>(rng() % (maxdeg + 1));
            for (int i = 0; i <= d; ++i) c.push_back(ctx.from_index(rng() % ctx.q()));
            Poly p(ctx, std::move(c));
            if (!nonzero || !p.is_zero()) return p;
        }
    };
    return RatFunc(rand_poly(3, false), rand_poly(3, true));
}

uint64_t necklace_count(uint64_t q, unsigned d) {
    // (1/d) sum_{m | d} mu(m) q^(d/m)
    auto mu = [](unsigned m) -> int64_t {
        int64_t out = 1;
        for (unsigned pr = 2; pr <= m; ++pr) {
            if (m % pr != 0) continue;
            unsigned cnt = 0;
            while (m % pr == 0) {
                m /= pr;
                ++cnt;
            }
            if (cnt > 1) return 0;
            out = -out;
        }
        return out;
    };
    int64_t total = 0;
    for (unsigned m = 1; m <= d; ++m) {
        if (d % m != 0) continue;
        uint64_t pw = 1;
        for (unsigned i = 0; i < d / m; ++i) pw *= q;
        total += mu(m) * static_cast<int64_t>(pw);
    }
    return static_cast<uint64_t>(total) / d;
}

} // namespace

TEST_CASE("enumerate_places: counts and frozen small cases") {
    const FieldCtx& f5 = build_extension(5, 1, 1);
    auto deg1 = enumerate_places(f5, 1);
    REQUIRE(deg1.size() == 5); // s, s+1, s+2, s+3, s+4
    for (uint64_t c = 0; c < 5; ++c) CHECK(deg1[c].pi().coeff(0) == f5.from_pint(c));

    CHECK(enumerate_places(f5, 2).size() == 10); // (25-5)/2

    const FieldCtx& f2 = build_extension(2, 1, 1);
    auto deg3 = enumerate_places(f2, 3);
    REQUIRE(deg3.size() == 2);
    CHECK(deg3[0].pi() == Poly(f2, {f2.one(), f2.one(), f2.zero(), f2.one()}));  // s^3+s+1
    CHECK(deg3[1].pi() == Poly(f2, {f2.one(), f2.zero(), f2.one(), f2.one()})); // s^3+s^2+1

    // necklace formula for d <= 4, cross-checked against the scan
    for (unsigned d = 1; d <= 4; ++d) {
        CHECK(enumerate_places(f5, d).size() == necklace_count(5, d));
        CHECK(enumerate_places(f2, d).size() == necklace_count(2, d));
    }
    const FieldCtx& f9 = build_extension(3, 2, 1);
    for (unsigned d = 1; d <= 2; ++d)
        CHECK(enumerate_places(f9, d).size() == necklace_count(9, d));
}

TEST_CASE("enumerate_places outputs pass an independent irreducibility check") {
    const FieldCtx& f5 = build_extension(5, 1, 1);
    for (unsigned d = 2; d <= 3; ++d) {
        for (const auto& pl : enumerate_places(f5, d)) {
            // no roots in any proper subfield, exactly d roots in F_{q^d}
            for (unsigned j = 1; j < d; ++j) {
                if (d % j != 0) continue;
                const FieldCtx& sub = build_extension(5, 1, j);
                for (uint64_t i = 0; i <= sub.order(); ++i) {
                    std::vector<FieldElem> cf;
                    for (const auto& c : pl.pi().coeffs()) cf.push_back(embed(c, sub));
                    CHECK_FALSE(Poly(sub, std::move(cf)).eval(sub.from_index(i)).is_zero());
                }
            }
            CHECK(pl.root().ctx == &pl.residue_ctx());
        }
    }
}

TEST_CASE("valuation_at basics") {
    const FieldCtx& f5 = build_extension(5, 1, 1);
    const PlaceFin at2(poly_from_ints(f5, {-2, 1})); // s - 2
    const PlaceFin at0(poly_from_ints(f5, {0, 1}));  // s

    // (s-2)^3 / (s+1)
    const Poly sm2 = poly_from_ints(f5, {-2, 1});
    const RatFunc f(sm2 * sm2 * sm2, poly_from_ints(f5, {1, 1}));
    CHECK(valuation_at(at2, f) == 3);

    const RatFunc one_over_s(Poly::constant(f5.one()), poly_from_ints(f5, {0, 1}));
    CHECK(valuation_at(at0, one_over_s) == -1);

    CHECK(valuation_at(at0, RatFunc(f5)) == kInfValuation);
}

TEST_CASE("valuation axioms on random pairs") {
    std::mt19937_64 rng(23);
    const FieldCtx& f5 = build_extension(5, 1, 1);
    const PlaceFin place(poly_from_ints(f5, {2, 0, 1})); // s^2 + 2, irreducible
    const PlaceFin lin(poly_from_ints(f5, {0, 1}));
    for (int rep = 0; rep < 500; ++rep) {
        const RatFunc a = random_ratfunc(f5, rng), b = random_ratfunc(f5, rng);
        for (const PlaceFin* pl : {&place, &lin}) {
            if (!a.is_zero() && !b.is_zero())
                CHECK(valuation_at(*pl, a * b) == valuation_at(*pl, a) + valuation_at(*pl, b));
            const int64_t va = valuation_at(*pl, a), vb = valuation_at(*pl, b);
            const int64_t vsum = valuation_at(*pl, a + b);
            CHECK(vsum >= std::min(va, vb));
            if (va != vb) CHECK(vsum == std::min(va, vb));
        }
    }
}

TEST_CASE("reduce_at evaluates at the canonical root") {
    const FieldCtx& f5 = build_extension(5, 1, 1);
    const PlaceFin at2(poly_from_ints(f5, {-2, 1}));
    const RatFunc s2 = RatFunc::from_poly(poly_from_ints(f5, {0, 0, 1}));
    CHECK(reduce_at(at2, s2) == at2.residue_ctx().from_pint(4)); // 2^2

    // degree-2 place s^2+2 over F_5: alpha^2 = -2 = 3 in F_25
    const PlaceFin quad(poly_from_ints(f5, {2, 0, 1}));
    const auto alpha = quad.root();
    CHECK(alpha * alpha == quad.residue_ctx().from_pint(3));
    CHECK(reduce_at(quad, s2) == quad.residue_ctx().from_pint(3));

    // 1/(s-1) at (s): (-1)^{-1} = 4
    const PlaceFin at0(poly_from_ints(f5, {0, 1}));
    const RatFunc g(Poly::constant(f5.one()), poly_from_ints(f5, {-1, 1}));
    CHECK(reduce_at(at0, g) == at0.residue_ctx().from_pint(4));

    // non-integral input
    const RatFunc h(Poly::constant(f5.one()), poly_from_ints(f5, {-2, 1}));
    CHECK_THROWS_AS(reduce_at(at2, h), Error);
}

TEST_CASE("reduce_at is a homomorphism commuting with frobenius") {
    std::mt19937_64 rng(29);
    const FieldCtx& f5 = build_extension(5, 1, 1);
    const PlaceFin place(poly_from_ints(f5, {2, 0, 1}));
    int used = 0;
    while (used < 500) {
        const RatFunc a = random_ratfunc(f5, rng), b = random_ratfunc(f5, rng);
        if (valuation_at(place, a) < 0 || valuation_at(place, b) < 0) continue;
        ++used;
        CHECK(reduce_at(place, a * b) == reduce_at(place, a) * reduce_at(place, b));
        CHECK(reduce_at(place, a + b) == reduce_at(place, a) + reduce_at(place, b));
        // kappa and phi_q commute
        CHECK(reduce_at(place, a.frobenius(1)) ==
              place.residue_ctx().frobenius(reduce_at(place, a), 1));
    }
}

TEST_CASE("gauss_valuation on t-polynomials") {
    const FieldCtx& f5 = build_extension(5, 1, 1);
    const PlaceFin at0(poly_from_ints(f5, {0, 1}));
    const RatFunc s = RatFunc::from_poly(poly_from_ints(f5, {0, 1}));
    const RatFunc s2 = s * s;
    const RatFunc one = RatFunc::constant(f5.one());

    CHECK(gauss_valuation(at0, TPoly{{RatFunc(f5), s, s2}}) == 1);     // s*t + s^2*t^2
    CHECK(gauss_valuation(at0, TPoly{{one, s}}) == 0);                 // 1 + s*t
    CHECK(gauss_valuation(at0, TPoly{{one / s, one}}) == -1);          // 1/s + t
    CHECK_THROWS_AS(gauss_valuation(at0, TPoly{{RatFunc(f5)}}), Error);
}
