#include <doctest.h>

#include <random>
#include <set>

#include "dgw/groupcert.hpp"

using namespace dgw;

namespace {

const FieldCtx& f5() { return build_extension(5, 1, 1); }

FqMat mat2(std::initializer_list<int> vals) {
    FqMat m(f5(), 2);
    auto it = vals.begin();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            m.at(i, j) = f5().from_pint(static_cast<uint64_t>(((*it++ % 5) + 5) % 5));
    return m;
}

} // namespace

TEST_CASE("group_closure basics") {
    SUBCASE("identity alone") {
        const auto cl = group_closure(FqMatrixGroupGens(f5(), 2, {FqMat::identity(f5(), 2)}));
        CHECK(cl.size() == 1);
    }

    SUBCASE("transvections generate SL_2(F_5), order 120") {
        const auto cl = group_closure(
            FqMatrixGroupGens(f5(), 2, {mat2({1, 1, 0, 1}), mat2({1, 0, 1, 1})}, true));
        CHECK(cl.size() == 120);
        // closed under inverse and under every product
        std::set<std::string> keys;
        for (const auto& m : cl) keys.insert(m.key());
        bool closed = true;
        for (const auto& m : cl) {
            closed &= keys.count(m.inverse().key()) == 1;
            for (const auto& g : cl) closed &= keys.count(m.mul(g).key()) == 1;
        }
        CHECK(closed);
    }

    SUBCASE("diag(2,3) generates a cyclic group of order 4") {
        const auto cl = group_closure(FqMatrixGroupGens(f5(), 2, {mat2({2, 0, 0, 3})}));
        CHECK(cl.size() == 4);
        CHECK(matrix_order(mat2({2, 0, 0, 3})) == 4);
    }

    SUBCASE("cap exceeded") {
        CHECK_THROWS_AS(group_closure(FqMatrixGroupGens(
                            f5(), 2, {mat2({1, 1, 0, 1}), mat2({1, 0, 1, 1})}), 50),
                        Error);
    }
}

TEST_CASE("closure sizes divide the SL_2 and GL_2 orders (Lagrange)") {
    std::mt19937_64 rng(31);
    const auto& all = enumerate_sl2(f5());
    REQUIRE(all.size() == 120);
    const uint64_t gl_order = 480; // (q^2-1)(q^2-q) at q = 5
    for (int rep = 0; rep < 30; ++rep) {
        const auto& a = all[rng() % all.size()];
        const auto& b = all[rng() % all.size()];
        const auto cl = group_closure(FqMatrixGroupGens(f5(), 2, {a, b}, true));
        CHECK(120 % cl.size() == 0);
        CHECK(gl_order % cl.size() == 0);
    }
}

TEST_CASE("centralizer") {
    const auto& all = enumerate_sl2(f5());

    SUBCASE("identity centralizes everything") {
        CHECK(centralizer(FqMat::identity(f5(), 2), all).size() == all.size());
    }

    SUBCASE("regular diagonal element has the diagonal torus, size q-1") {
        const auto c = centralizer(mat2({2, 0, 0, 3}), all);
        CHECK(c.size() == 4);
        for (const auto& m : c) {
            CHECK(m.at(0, 1).is_zero());
            CHECK(m.at(1, 0).is_zero());
        }
    }

    SUBCASE("unipotent element has centralizer of size 2q = 10") {
        CHECK(centralizer(mat2({1, 1, 0, 1}), all).size() == 10);
    }
}

TEST_CASE("torus_element") {
    SUBCASE("1 + 2t yields a certified diagonal of size 2") {
        const auto te =
            torus_element(f5(), 2, standard_torus_polys(f5(), f5().from_pint(2), 1), 8);
        CHECK(te.density_certified);
        CHECK(te.g.at(0, 0).coeff(1) == f5().from_pint(2));
        CHECK(te.g.at(0, 1).is_zero());
        // bottom entry is the inverse
        CHECK(te.g.at(0, 0).mul(te.g.at(1, 1)) ==
              TruncSeries::constant(f5(), 8, f5().one()));
        // g = I mod t
        CHECK(te.g.constant_term().is_identity());
    }

    SUBCASE("1 + t^2 factors over F_5 and is rejected") {
        const Poly p(f5(), {f5().one(), f5().zero(), f5().one()});
        try {
            torus_element(f5(), 2, {p}, 4);
            FAIL("expected NotIrreducible");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::not_irreducible);
        }
    }

    SUBCASE("duplicate polynomials are rejected for n = 3") {
        const Poly p(f5(), {f5().one(), f5().one()});
        try {
            torus_element(f5(), 3, {p, p}, 4);
            FAIL("expected NotDistinct");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::not_distinct);
        }
    }

    SUBCASE("constant term must be 1") {
        const Poly p(f5(), {f5().from_pint(2), f5().one()});
        CHECK_THROWS_AS(torus_element(f5(), 2, {p}, 4), Error);
    }
}

TEST_CASE("charpoly_subgroup_oracle") {
    auto cp = [&](int trace) {
        // X^2 - trace X + 1
        return Poly(f5(), {f5().one(), -f5().from_pint(static_cast<uint64_t>(((trace % 5) + 5) % 5)),
                           f5().one()});
    };

    SUBCASE("single charpoly X^2+1 is realizable in a proper subgroup") {
        CHECK(charpoly_subgroup_oracle(f5(), {cp(0)}) == Verdict::proper);
    }

    SUBCASE("empty set is trivially proper") {
        CHECK(charpoly_subgroup_oracle(f5(), {}) == Verdict::proper);
    }

    SUBCASE("all five traces are still coverable by a proper subgroup") {
        // recorded oracle output: the order-12 dicyclic subgroup has elements
        // of orders 1, 2, 3, 4, 6 whose char polys hit every trace in F_5
        // (trace 2 via the identity, trace 3 via -I), so char-poly coverage
        // alone cannot certify generation at q = 5
        std::vector<Poly> all;
        for (int a = 0; a < 5; ++a) all.push_back(cp(a));
        CHECK(charpoly_subgroup_oracle(f5(), all) == Verdict::proper);
        bool some_proper_covers_everything = false;
        for (const auto& traces : proper_subgroup_trace_sets(f5()))
            if (traces.size() == 5) some_proper_covers_everything = true;
        CHECK(some_proper_covers_everything);
    }

    SUBCASE("three-generator closures add no subgroups at q = 5") {
        // spot check: random 3-subsets close to trace sets already enumerated
        std::mt19937_64 rng(37);
        const auto& all = enumerate_sl2(f5());
        const auto lattice = proper_subgroup_trace_sets(f5());
        std::set<std::vector<uint64_t>> known(lattice.begin(), lattice.end());
        for (int rep = 0; rep < 40; ++rep) {
            std::vector<FqMat> gens{all[rng() % 120], all[rng() % 120], all[rng() % 120]};
            const auto sub = group_closure(FqMatrixGroupGens(f5(), 2, gens, true));
            if (sub.size() == 120) continue;
            std::set<uint64_t> traces;
            for (const auto& m : sub) traces.insert((m.at(0, 0) + m.at(1, 1)).index());
            CHECK(known.count(std::vector<uint64_t>(traces.begin(), traces.end())) == 1);
        }
    }
}
