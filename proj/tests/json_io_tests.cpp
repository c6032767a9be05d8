#include <doctest.h>

#include "dgw/json_io.hpp"

using namespace dgw;

namespace {

const FieldCtx& f5() { return build_extension(5, 1, 1); }

Poly sp(std::initializer_list<int> coeffs) {
    std::vector<FieldElem> c;
    for (int v : coeffs) c.push_back(f5().from_pint(static_cast<uint64_t>(((v % 5) + 5) % 5)));
    return Poly(f5(), std::move(c));
}

} // namespace

TEST_CASE("element and polynomial JSON round trips") {
    const FieldCtx& f25 = build_extension(5, 1, 2);
    const FieldElem x = f25.from_coeffs({3, 4});
    CHECK(elem_from_json(f25, elem_to_json(x)) == x);
    CHECK(elem_from_json(f5(), Json(7)) == f5().from_pint(2));

    const Poly p = sp({3, 0, 2});
    CHECK(poly_from_json(f5(), poly_to_json(p)) == p);

    const PlaceFin pl(sp({2, 0, 1}));
    CHECK(place_from_json(f5(), place_to_json(pl)) == pl);

    const FieldCtx& same = ctx_from_json(ctx_to_json(f25));
    CHECK(&same == &f25);
}

TEST_CASE("bivariate grammar round trip") {
    // (1 + 2 s t + s^2 t^2) / (1 + s t)
    const BivarEntry e({sp({1}), sp({0, 2}), sp({0, 0, 1})}, {sp({1}), sp({0, 1})});
    const std::string text = bivar_to_string(e);
    CHECK(text.find("*s^") != std::string::npos);
    CHECK(text.find("*t^") != std::string::npos);
    const BivarEntry back = bivar_from_string(f5(), text);
    CHECK(back.equals(e));

    // zero numerator
    const BivarEntry z = BivarEntry::zero(f5());
    CHECK(bivar_from_string(f5(), bivar_to_string(z)).is_zero());

    CHECK_THROWS_AS(bivar_from_string(f5(), "nonsense"), Error);
}

TEST_CASE("module JSON round trip preserves entries exactly") {
    std::vector<BivarEntry> d;
    d.push_back(BivarEntry::from_tpoly({sp({1}), sp({0, 1})}));
    d.push_back(BivarEntry({sp({2})}, {sp({1}), sp({0, 3})}));
    d.push_back(BivarEntry::zero(f5()));
    d.push_back(BivarEntry::one(f5()));
    const FrobModule m(f5(), 2, d);
    const FrobModule back = module_from_json(module_to_json(m));
    CHECK(back.n() == 2);
    CHECK(back.level() == m.level());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(back.at(i, j).equals(m.at(i, j)));
}

TEST_CASE("series matrices round trip through JSON") {
    const FieldCtx& f25 = build_extension(5, 1, 2);
    TruncSeriesMatrix m = TruncSeriesMatrix::identity(f25, 2, 4);
    m.at(0, 1).coeff(2) = f25.gen();
    const TruncSeriesMatrix back = series_matrix_from_json(f25, series_matrix_to_json(m));
    CHECK(back == m);
}
