#include "dgw/json_io.hpp"

#include <fstream>

namespace dgw {

Json elem_to_json(const FieldElem& x) {
    Json arr = Json::array();
    for (uint8_t c : x.c) arr.push_back(static_cast<int>(c));
    return arr;
}

FieldElem elem_from_json(const FieldCtx& ctx, const Json& j) {
    if (j.is_number_integer()) {
        const int64_t v = j.get<int64_t>();
        return ctx.from_pint(static_cast<uint64_t>(((v % ctx.p()) + ctx.p()) % ctx.p()));
    }
    if (!j.is_array()) fail(Errc::parse_error, "element must be an int or coefficient array");
    std::vector<uint8_t> c;
    for (const auto& v : j) {
        if (!v.is_number_integer()) fail(Errc::parse_error, "element coefficients must be ints");
        const int64_t x = v.get<int64_t>();
        c.push_back(static_cast<uint8_t>(((x % ctx.p()) + ctx.p()) % ctx.p()));
    }
    return ctx.from_coeffs(std::move(c));
}

Json ctx_to_json(const FieldCtx& ctx) {
    Json j;
    j["p"] = ctx.p();
    j["e"] = ctx.e();
    j["M"] = ctx.M();
    Json mod = Json::array();
    for (uint8_t c : ctx.modulus()) mod.push_back(static_cast<int>(c));
    j["modulus"] = mod;
    return j;
}

const FieldCtx& ctx_from_json(const Json& j) {
    if (!j.contains("p") || !j.contains("e") || !j.contains("M"))
        fail(Errc::parse_error, "context needs p, e, M");
    const FieldCtx& ctx =
        build_extension(j["p"].get<unsigned>(), j["e"].get<unsigned>(), j["M"].get<unsigned>());
    if (j.contains("modulus")) {
        std::vector<uint8_t> mod;
        for (const auto& v : j["modulus"]) mod.push_back(v.get<uint8_t>());
        require(mod == ctx.modulus(), Errc::parse_error,
                "modulus does not match the canonical one for (p, e, M)");
    }
    return ctx;
}

Json poly_to_json(const Poly& p) {
    Json arr = Json::array();
    for (const auto& c : p.coeffs()) arr.push_back(elem_to_json(c));
    return arr;
}

Poly poly_from_json(const FieldCtx& ctx, const Json& j) {
    if (!j.is_array()) fail(Errc::parse_error, "polynomial must be a coefficient array");
    std::vector<FieldElem> coeffs;
    for (const auto& v : j) coeffs.push_back(elem_from_json(ctx, v));
    return Poly(ctx, std::move(coeffs));
}

Json place_to_json(const PlaceFin& place) {
    Json j;
    j["pi"] = poly_to_json(place.pi());
    j["d"] = place.degree();
    return j;
}

PlaceFin place_from_json(const FieldCtx& ctx, const Json& j) {
    if (!j.contains("pi")) fail(Errc::parse_error, "place needs pi");
    return PlaceFin(poly_from_json(ctx, j["pi"]));
}

namespace {

std::string elem_literal(const FieldElem& x) {
    std::string out = "[";
    for (std::size_t i = 0; i < x.c.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(static_cast<int>(x.c[i]));
    }
    return out + "]";
}

} // namespace

std::string bivar_to_string(const BivarEntry& e) {
    // terms c*s^a*t^b joined by +; zero is the empty product "0"
    auto side = [&](const std::vector<Poly>& tc) {
        std::string out;
        for (std::size_t b = 0; b < tc.size(); ++b) {
            for (int a = 0; a <= tc[b].degree(); ++a) {
                const FieldElem c = tc[b].coeff(static_cast<std::size_t>(a));
                if (c.is_zero()) continue;
                if (!out.empty()) out += "+";
                out += elem_literal(c) + "*s^" + std::to_string(a) + "*t^" + std::to_string(b);
            }
        }
        return out.empty() ? std::string("0") : out;
    };
    return side(e.num()) + " / " + side(e.den());
}

namespace {

std::vector<Poly> parse_bivar_side(const FieldCtx& ctx, const std::string& s) {
    std::vector<Poly> tcoeffs;
    if (s == "0") return tcoeffs;
    std::size_t pos = 0;
    auto expect = [&](char c) {
        if (pos >= s.size() || s[pos] != c)
            fail(Errc::parse_error, "bad bivariate term near position " + std::to_string(pos));
        ++pos;
    };
    while (pos < s.size()) {
        // element literal [c0,c1,...]
        expect('[');
        std::vector<uint8_t> coeffs;
        while (pos < s.size() && s[pos] != ']') {
            std::size_t used = 0;
            const int v = std::stoi(s.substr(pos), &used);
            coeffs.push_back(static_cast<uint8_t>(((v % static_cast<int>(ctx.p())) +
                                                   static_cast<int>(ctx.p())) %
                                                  static_cast<int>(ctx.p())));
            pos += used;
            if (pos < s.size() && s[pos] == ',') ++pos;
        }
        expect(']');
        expect('*');
        expect('s');
        expect('^');
        std::size_t used = 0;
        const unsigned a = static_cast<unsigned>(std::stoul(s.substr(pos), &used));
        pos += used;
        expect('*');
        expect('t');
        expect('^');
        const unsigned b = static_cast<unsigned>(std::stoul(s.substr(pos), &used));
        pos += used;
        if (tcoeffs.size() <= b) tcoeffs.resize(b + 1, Poly(ctx));
        tcoeffs[b] =
            tcoeffs[b] + Poly::monomial(ctx, a, ctx.from_coeffs(std::move(coeffs)));
        if (pos < s.size()) expect('+');
    }
    return tcoeffs;
}

} // namespace

BivarEntry bivar_from_string(const FieldCtx& ctx, const std::string& s) {
    const auto slash = s.find(" / ");
    if (slash == std::string::npos) fail(Errc::parse_error, "bivariate entry needs num / den");
    auto num = parse_bivar_side(ctx, s.substr(0, slash));
    auto den = parse_bivar_side(ctx, s.substr(slash + 3));
    if (den.empty()) fail(Errc::parse_error, "bivariate entry with zero denominator");
    return BivarEntry(std::move(num), std::move(den));
}

Json series_to_json(const TruncSeries& s) {
    Json j;
    j["prec"] = s.prec();
    Json coeffs = Json::array();
    for (unsigned i = 0; i < s.prec(); ++i) coeffs.push_back(elem_to_json(s.coeff(i)));
    j["coeffs"] = coeffs;
    return j;
}

TruncSeries series_from_json(const FieldCtx& ctx, const Json& j) {
    const unsigned prec = j.at("prec").get<unsigned>();
    std::vector<FieldElem> coeffs;
    for (const auto& v : j.at("coeffs")) coeffs.push_back(elem_from_json(ctx, v));
    return TruncSeries(ctx, prec, std::move(coeffs));
}

Json series_matrix_to_json(const TruncSeriesMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.n(); ++j) row.push_back(series_to_json(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

TruncSeriesMatrix series_matrix_from_json(const FieldCtx& ctx, const Json& j) {
    const std::size_t n = j.size();
    require(n > 0, Errc::parse_error, "empty series matrix");
    const unsigned prec = j.at(0).at(0).at("prec").get<unsigned>();
    TruncSeriesMatrix m(ctx, n, prec);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) m.at(i, k) = series_from_json(ctx, j.at(i).at(k));
    return m;
}

Json fqmat_to_json(const FqMat& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.n(); ++j) row.push_back(elem_to_json(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

FqMat fqmat_from_json(const FieldCtx& ctx, const Json& j) {
    const std::size_t n = j.size();
    FqMat m(ctx, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) m.at(i, k) = elem_from_json(ctx, j.at(i).at(k));
    return m;
}

Json module_to_json(const FrobModule& m) {
    Json j;
    j["schema"] = "dgw-module/1";
    j["p"] = m.base().p();
    j["e"] = m.base().e();
    j["q"] = m.base().q();
    j["n"] = m.n();
    j["level"] = m.level();
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.n(); ++k) {
            const std::string s = bivar_to_string(m.at(i, k));
            const auto slash = s.find(" / ");
            Json entry;
            entry["num"] = s.substr(0, slash);
            entry["den"] = s.substr(slash + 3);
            row.push_back(entry);
        }
        rows.push_back(row);
    }
    j["D"] = rows;
    return j;
}

FrobModule module_from_json(const Json& j) {
    const FieldCtx& ctx = build_extension(j.at("p").get<unsigned>(), j.at("e").get<unsigned>(), 1);
    const std::size_t n = j.at("n").get<std::size_t>();
    const unsigned level = j.contains("level") ? j.at("level").get<unsigned>() : 1;
    std::vector<BivarEntry> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const auto& cell = j.at("D").at(i).at(k);
            entries.push_back(bivar_from_string(ctx, cell.at("num").get<std::string>() + " / " +
                                                         cell.at("den").get<std::string>()));
        }
    return FrobModule(ctx, n, std::move(entries), level);
}

Json instance_to_json(const SlInstance& inst) {
    Json j;
    j["schema"] = "dgw-instance/1";
    j["q"] = inst.ctx->q();
    j["p"] = inst.ctx->p();
    j["e"] = inst.ctx->e();
    j["n"] = inst.n;
    j["zeta"] = elem_to_json(inst.zeta);
    j["alpha"] = elem_to_json(inst.alpha);
    Json alphas = Json::array(), betas = Json::array();
    for (const auto& a : inst.alphas) alphas.push_back(elem_to_json(a));
    for (const auto& b : inst.betas) betas.push_back(elem_to_json(b));
    j["alphas"] = alphas;
    j["betas"] = betas;
    j["g0"] = fqmat_to_json(inst.g0);
    j["d0bar"] = fqmat_to_json(inst.d0bar);
    j["x"] = fqmat_to_json(inst.x);
    j["place_p"] = place_to_json(inst.place_p);
    j["place_q"] = place_to_json(inst.place_q);
    return j;
}

SlInstance instance_from_json(const Json& j) {
    const FieldCtx& ctx = build_extension(j.at("p").get<unsigned>(), j.at("e").get<unsigned>(), 1);
    const std::size_t n = j.at("n").get<std::size_t>();
    std::vector<FieldElem> alphas, betas;
    for (const auto& v : j.at("alphas")) alphas.push_back(elem_from_json(ctx, v));
    for (const auto& v : j.at("betas")) betas.push_back(elem_from_json(ctx, v));
    return build_instance(ctx, n, elem_from_json(ctx, j.at("zeta")),
                          elem_from_json(ctx, j.at("alpha")), alphas, betas);
}

Json witness_to_json(const Witness& w) {
    Json j;
    j["place"] = place_to_json(w.place);
    j["M"] = w.M;
    j["N"] = w.prec;
    j["splitting_ctx"] = ctx_to_json(w.h.ctx());
    j["h"] = series_matrix_to_json(w.h);
    j["h0"] = fqmat_to_json(w.h0);
    j["charpoly_h0"] = poly_to_json(w.charpoly_h0);
    Json checks;
    checks["phi_fixed"] = w.phi_fixed;
    checks["det_one"] = w.det_one;
    checks["charpoly_matches_product"] = w.charpoly_matches_product;
    j["checks"] = checks;
    Json obs;
    obs["h0_order"] = w.h0_order;
    obs["homogeneous_dim"] = w.homogeneous_dim;
    j["observations"] = obs;
    return j;
}

Json place_results_to_json(const FrobModule& m, const std::vector<PlaceResult>& results,
                           unsigned prec, unsigned m_max, uint64_t seed) {
    Json j;
    j["schema"] = "dgw-witnesses/1";
    j["q"] = m.base().q();
    j["n"] = m.n();
    j["N"] = prec;
    j["m_max"] = m_max;
    j["seed"] = seed;
    Json arr = Json::array();
    std::size_t ok = 0;
    for (const auto& r : results) {
        Json item;
        item["place"] = place_to_json(r.place);
        if (r.witness) {
            item["status"] = "ok";
            item["witness"] = witness_to_json(*r.witness);
            ++ok;
        } else {
            item["status"] = "error";
            item["error"] = r.error;
        }
        arr.push_back(item);
    }
    j["succeeded"] = ok;
    j["attempted"] = results.size();
    j["places"] = arr;
    return j;
}

Json report_to_json(const GenerationReport& rep) {
    Json j;
    j["schema"] = "dgw-report/1";
    j["witnesses_used"] = rep.witnesses_used;
    j["closure_size"] = rep.closure_size;
    j["target_size"] = rep.target_size;
    Json cps = Json::array();
    for (const auto& cp : rep.charpolys_seen) cps.push_back(poly_to_json(cp));
    j["charpolys_seen"] = cps;
    j["verdict"] = verdict_name(rep.verdict);
    j["charpoly_oracle"] = verdict_name(rep.charpoly_oracle);
    Json places = Json::array();
    for (std::size_t i = 0; i < rep.places_used.size(); ++i) {
        Json item;
        item["place"] = place_to_json(rep.places_used[i]);
        if (i < rep.place_errors.size() && !rep.place_errors[i].empty())
            item["error"] = rep.place_errors[i];
        places.push_back(item);
    }
    j["places_used"] = places;
    return j;
}

Json motive_to_json(const PreTMotive& p) {
    Json j = module_to_json(p.motive);
    j["schema"] = "dgw-motive/1";
    j["variable"] = "theta";
    j["alpha"] = elem_to_json(p.alpha);
    Json conv;
    conv["sigma"] = p.sigma;
    conv["trivialization"] = p.trivialization;
    conv["relation"] = p.relation;
    j["convention"] = conv;
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::parse_error, "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(Errc::parse_error, std::string("malformed JSON: ") + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) fail(Errc::parse_error, "cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

} // namespace dgw
