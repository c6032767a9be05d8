#include <doctest.h>

#include "dgw/solver.hpp"

using namespace dgw;

namespace {

const FieldCtx& f5() { return build_extension(5, 1, 1); }

Poly sp(std::initializer_list<int> coeffs) {
    std::vector<FieldElem> c;
    for (int v : coeffs) c.push_back(f5().from_pint(static_cast<uint64_t>(((v % 5) + 5) % 5)));
    return Poly(f5(), std::move(c));
}

// [[0,-1],[1,0]] * diag(1 + s t, (1 + s t)^-1): unit determinant with genuine
// t-dependence, reducible at every finite place
FrobModule sl2_sample_module() {
    const BivarEntry u = BivarEntry::from_tpoly({sp({1}), sp({0, 1})});
    std::vector<BivarEntry> d;
    d.push_back(BivarEntry::zero(f5()));
    d.push_back(u.inv().neg());
    d.push_back(u);
    d.push_back(BivarEntry::zero(f5()));
    return FrobModule(f5(), 2, std::move(d));
}

} // namespace

TEST_CASE("lang_solve") {
    SUBCASE("identity splits immediately with the full F_q fixed space") {
        const auto sol = lang_solve(FqMat::identity(f5(), 2), 8);
        CHECK(sol.M == 1);
        CHECK(sol.homogeneous_dim == 4); // n^2 * e
        CHECK_FALSE(sol.y0.det().is_zero());
        CHECK(sol.y0.frobenius(1) == sol.y0); // over F_5 everything is fixed
    }

    SUBCASE("scalar twist by 2 over F_5 splits at M = 4") {
        FqMat d0(f5(), 1);
        d0.at(0, 0) = f5().from_pint(2);
        // brute oracle: no nonzero solution of 2 z^5 = z below F_{5^4}
        for (unsigned m = 1; m <= 3; ++m) {
            const FieldCtx& fm = build_extension(5, 1, m);
            const FieldElem two = embed(f5().from_pint(2), fm);
            bool found = false;
            for (uint64_t i = 1; i <= fm.order(); ++i) {
                const auto z = fm.from_index(i);
                if (two * fm.pow(z, 5) == z) found = true;
            }
            CHECK_FALSE(found);
        }
        const auto sol = lang_solve(d0, 8);
        CHECK(sol.M == 4);
        const FieldCtx& big = sol.y0.ctx();
        const FieldElem two = embed(f5().from_pint(2), big);
        CHECK(two * big.pow(sol.y0.at(0, 0), 5) == sol.y0.at(0, 0));
        // det D0 * det(Y0)^q = det(Y0) is forced by the defining equation
        const FieldElem dy = sol.y0.det();
        CHECK(two * big.pow(dy, 5) == dy);

        CHECK_THROWS_AS(lang_solve(d0, 3), Error); // cap below the splitting degree
    }

    SUBCASE("solution torsor: two solutions differ by a phi-fixed matrix") {
        FqMat d0(f5(), 2);
        d0.at(0, 1) = f5().from_pint(4);
        d0.at(1, 0) = f5().one();
        const auto a = lang_solve(d0, 24, 1);
        const auto b = lang_solve(d0, 24, 2);
        CHECK(a.M == b.M);
        const FqMat ratio = a.y0.inverse().mul(b.y0);
        CHECK(ratio.frobenius(1) == ratio);
        // verify both satisfy the defining equation
        const FieldCtx& big = a.y0.ctx();
        const FqMat d0b = d0.embed_into(big);
        CHECK(d0b.mul(a.y0.frobenius(1)) == a.y0);
        CHECK(d0b.mul(b.y0.frobenius(1)) == b.y0);
        // for a unimodular twist the determinant is phi-fixed
        const FieldElem dy = a.y0.det();
        CHECK(big.frobenius(dy, 1) == dy);
    }
}

TEST_CASE("solve_truncated") {
    SUBCASE("identity module solves over the base field") {
        const PlaceFin pl(sp({-1, 1}));
        TruncSeriesMatrix dbar = TruncSeriesMatrix::identity(f5(), 2, 4);
        const ReducedModule r{pl, dbar, 4};
        const auto sol = solve_truncated(r, 8);
        CHECK(sol.M == 1);
        CHECK(dbar.embed_into(sol.ybar.ctx()).mul(sol.ybar.apply_phi(1)) == sol.ybar);
        CHECK_FALSE(sol.ybar.constant_term().det().is_zero());
    }

    SUBCASE("diag(1+t, (1+t)^-1) needs the Artin-Schreier degree M = 5") {
        // oracle: c^5 - c = -1 first becomes solvable over F_{5^5}
        unsigned first_m = 0;
        for (unsigned m = 1; m <= 5 && first_m == 0; ++m) {
            const FieldCtx& fm = build_extension(5, 1, m);
            for (uint64_t i = 0; i <= fm.order(); ++i) {
                const auto c = fm.from_index(i);
                if (fm.pow(c, 5) - c == -fm.one()) {
                    first_m = m;
                    break;
                }
            }
        }
        REQUIRE(first_m == 5);

        const PlaceFin pl(sp({-1, 1}));
        TruncSeriesMatrix dbar = TruncSeriesMatrix::identity(f5(), 2, 3);
        dbar.at(0, 0).coeff(1) = f5().one(); // 1 + t
        TruncSeries inv = dbar.at(0, 0).inv();
        dbar.at(1, 1) = inv;
        const ReducedModule r{pl, dbar, 3};
        const auto sol = solve_truncated(r, 24);
        CHECK(sol.M == 5);
        CHECK(dbar.embed_into(sol.ybar.ctx()).mul(sol.ybar.apply_phi(1)) == sol.ybar);
    }

    SUBCASE("postcondition holds at every degree-1 place of the sample module") {
        set_tower_degree_bound(400);
        const FrobModule m = sl2_sample_module();
        for (const auto& pl : enumerate_places(f5(), 1)) {
            const ReducedModule r = reduce_module_at(m, pl, 6);
            const auto sol = solve_truncated(r, 200);
            CHECK(r.dbar.embed_into(sol.ybar.ctx()).mul(sol.ybar.apply_phi(1)) == sol.ybar);
        }
    }
}

TEST_CASE("normalize_to_sl") {
    SUBCASE("already unimodular stays put") {
        const auto id = TruncSeriesMatrix::identity(f5(), 2, 4);
        CHECK(normalize_to_sl(id) == id);
    }

    SUBCASE("diag(2,1) becomes the identity") {
        FqMat c(f5(), 2);
        c.at(0, 0) = f5().from_pint(2);
        c.at(1, 1) = f5().one();
        const auto fixed = normalize_to_sl(TruncSeriesMatrix::from_constant(c, 4));
        CHECK(fixed.is_identity());
    }

    SUBCASE("non-phi-fixed determinant is rejected") {
        const FieldCtx& f25 = build_extension(5, 1, 2);
        FqMat c(f25, 2);
        c.at(0, 0) = f25.gen();
        c.at(1, 1) = f25.one();
        CHECK_THROWS_AS(normalize_to_sl(TruncSeriesMatrix::from_constant(c, 4)), Error);
    }
}

TEST_CASE("extract_witness on a handcrafted SL_2 module") {
    const FrobModule m = sl2_sample_module();

    SUBCASE("identity module gives the identity witness") {
        std::vector<BivarEntry> d(4, BivarEntry::zero(f5()));
        d[0] = BivarEntry::one(f5());
        d[3] = BivarEntry::one(f5());
        const FrobModule id(f5(), 2, std::move(d));
        const Witness w = extract_witness(id, PlaceFin(sp({-2, 1})), 6, 8);
        CHECK(w.h.is_identity());
        CHECK(w.h0.is_identity());
    }

    SUBCASE("degree-1 and degree-2 places give sound witnesses") {
        set_tower_degree_bound(400);
        std::vector<PlaceFin> places = enumerate_places(f5(), 1);
        const auto deg2 = enumerate_places(f5(), 2);
        places.insert(places.end(), deg2.begin(), deg2.begin() + 3);
        for (const auto& pl : places) {
            const Witness w = extract_witness(m, pl, 6, 375);
            CHECK(w.phi_fixed);
            CHECK(w.det_one);
            CHECK(w.charpoly_matches_product);
            CHECK(w.h0.det().is_one());
            CHECK(w.charpoly_h0.degree() == 2);
            // h has entries in F_q[[t]]: phi fixes every coefficient
            CHECK(w.h.apply_phi(1) == w.h);
        }
    }

    SUBCASE("parallel extraction preserves order and matches serial") {
        const auto places = enumerate_places(f5(), 1);
        const auto serial = extract_witnesses(m, places, 5, 200, 0, 1);
        const auto parallel = extract_witnesses(m, places, 5, 200, 0, 4);
        REQUIRE(serial.size() == parallel.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            REQUIRE(serial[i].witness.has_value());
            REQUIRE(parallel[i].witness.has_value());
            CHECK(serial[i].witness->h0 == parallel[i].witness->h0);
            CHECK(serial[i].witness->M == parallel[i].witness->M);
        }
    }

    SUBCASE("non-integral place is reported, not thrown, by the fan-out") {
        std::vector<BivarEntry> d(4, BivarEntry::zero(f5()));
        d[0] = BivarEntry({sp({1})}, {sp({-2, 1})}); // 1/(s-2)
        d[3] = BivarEntry::one(f5());
        const FrobModule bad(f5(), 2, std::move(d));
        const auto res = extract_witnesses(bad, {PlaceFin(sp({-2, 1}))}, 4, 8);
        REQUIRE(res.size() == 1);
        CHECK_FALSE(res[0].witness.has_value());
        CHECK(res[0].error.find("NotIntegral") != std::string::npos);
    }
}

TEST_CASE("descend_conjugator") {
    const FieldCtx& f25 = build_extension(5, 1, 2);

    SUBCASE("already rational conjugator is returned unchanged up to torus") {
        // g = diag(2,3) + t-part, A = I
        FqMat g0(f25, 2);
        g0.at(0, 0) = embed(f5().from_pint(2), f25);
        g0.at(1, 1) = embed(f5().from_pint(3), f25);
        const auto g = TruncSeriesMatrix::from_constant(g0, 4);
        const auto a = TruncSeriesMatrix::identity(f25, 2, 4);
        const auto ap = descend_conjugator(g, g, a);
        const FqMat a0 = ap.constant_term();
        CHECK(a0.frobenius(1) == a0);
        CHECK(ap.inverse().mul(g).mul(ap) == g);
    }

    SUBCASE("genuinely irrational conjugator descends") {
        // g regular diagonal over F_5; conjugate by a diagonal alpha outside F_5
        FqMat g0(f25, 2);
        g0.at(0, 0) = embed(f5().from_pint(2), f25);
        g0.at(1, 1) = embed(f5().from_pint(3), f25);
        TruncSeriesMatrix g = TruncSeriesMatrix::from_constant(g0, 4);
        g.at(0, 0).coeff(1) = embed(f5().one(), f25); // make it non-constant in t

        FqMat a0(f25, 2);
        a0.at(0, 0) = f25.gen();
        a0.at(1, 1) = f25.inv(f25.gen());
        const auto a = TruncSeriesMatrix::from_constant(a0, 4);
        const auto h = a.inverse().mul(g).mul(a); // diagonal a commutes: h = g
        const auto ap = descend_conjugator(g, h, a);
        const FqMat a0p = ap.constant_term();
        CHECK(a0p.frobenius(1) == a0p);
        CHECK(ap.inverse().mul(g).mul(ap) == h);
        CHECK(a0p.det().is_one());
    }

    SUBCASE("non-torus constant term is rejected") {
        FqMat g0(f25, 2);
        g0.at(0, 0) = f25.one();
        g0.at(0, 1) = f25.one();
        g0.at(1, 1) = f25.one();
        const auto g = TruncSeriesMatrix::from_constant(g0, 3);
        const auto a = TruncSeriesMatrix::identity(f25, 2, 3);
        CHECK_THROWS_AS(descend_conjugator(g, g, a), Error);
    }

    SUBCASE("scalar case: alpha in F_25 descends to F_5 via a root of unity") {
        // 1x1: g = h = (1), A0 = alpha; y^4 = alpha^4 has a root, y^-1 alpha
        // lands phi-fixed
        FqMat one(f25, 1), a0(f25, 1);
        one.at(0, 0) = f25.one();
        a0.at(0, 0) = f25.gen();
        const auto g = TruncSeriesMatrix::from_constant(one, 3);
        const auto a = TruncSeriesMatrix::from_constant(a0, 3);
        const auto ap = descend_conjugator(g, g, a);
        const FqMat c = ap.constant_term();
        CHECK(c.frobenius(1) == c);
    }
}
