// dgw - exact difference-module toolkit over F_q(s, t)
//
// Subcommands: build, check, solve, extract, certify, export-motive.
// Artifacts are JSON; identical configuration and seed give byte-identical
// output. DGW_THREADS bounds the extraction worker pool.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "dgw/json_io.hpp"

namespace {

using namespace dgw;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 2;
constexpr int kExitIntegrality = 3;
constexpr int kExitNoWitness = 4;
constexpr int kExitCertificate = 5;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::parse_error: return kExitParse;
        case Errc::not_integral: return kExitIntegrality;
        default: return kExitInvariant;
    }
}

struct CommonOpts {
    uint64_t q = 5;
    std::size_t n = 2;
    std::string zeta, alpha;
    std::vector<std::string> alphas, betas;
    unsigned prec = 8;
    unsigned d_max = 1;
    unsigned m_max = 360;
    uint64_t seed = 0;
    unsigned threads = 0;
    bool strict = false;
    std::string in_path, out_path, instance_path, pi_literal;
};

const FieldCtx& ctx_for_q(uint64_t q) {
    // factor q = p^e
    require(q >= 2, Errc::not_prime, "q must be a prime power >= 2");
    uint64_t p = q;
    for (uint64_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            p = d;
            break;
        }
    }
    unsigned e = 0;
    uint64_t rest = q;
    while (rest > 1) {
        require(rest % p == 0, Errc::not_prime, "q must be a prime power");
        rest /= p;
        ++e;
    }
    return build_extension(static_cast<unsigned>(p), e, 1);
}

FieldElem parse_elem(const FieldCtx& ctx, const std::string& s) {
    // accepts an integer, a JSON array "[c0,c1]", or a bare list "c0,c1"
    if (s.empty()) fail(Errc::parse_error, "empty element literal");
    if (s[0] == '[') return elem_from_json(ctx, Json::parse(s, nullptr, true));
    if (s.find(',') != std::string::npos)
        return elem_from_json(ctx, Json::parse("[" + s + "]", nullptr, true));
    return elem_from_json(ctx, Json(std::stoll(s)));
}

Poly parse_poly(const FieldCtx& ctx, const std::string& s) {
    return poly_from_json(ctx, Json::parse(s, nullptr, true));
}

void ensure_tower_bound(unsigned m_max, const FieldCtx& ctx) {
    const unsigned need = ctx.e() * m_max;
    if (need > tower_degree_bound()) set_tower_degree_bound(need);
}

int cmd_build(const CommonOpts& o) {
    const FieldCtx& ctx = ctx_for_q(o.q);
    std::vector<FieldElem> alphas, betas;
    for (const auto& s : o.alphas) alphas.push_back(parse_elem(ctx, s));
    for (const auto& s : o.betas) betas.push_back(parse_elem(ctx, s));
    const SlInstance inst = build_instance(ctx, o.n, parse_elem(ctx, o.zeta),
                                           parse_elem(ctx, o.alpha), alphas, betas);
    const FrobModule mod = build_module(inst, o.prec);
    std::printf("built: n=%zu q=%llu, D = D0 mod t: ok, reduction at place_p: ok, "
                "contraction at place_q: ok\n",
                o.n, static_cast<unsigned long long>(o.q));
    write_json_file(o.out_path, module_to_json(mod));
    if (!o.instance_path.empty()) write_json_file(o.instance_path, instance_to_json(inst));
    return kExitOk;
}

int cmd_check(const CommonOpts& o) {
    const FrobModule mod = module_from_json(load_json_file(o.in_path));
    const FieldCtx& ctx = mod.base();
    const PlaceFin q_place = o.pi_literal.empty()
                                 ? PlaceFin(Poly(ctx, {ctx.zero(), ctx.one()}))
                                 : PlaceFin(parse_poly(ctx, o.pi_literal));
    const auto rep = check_existence_hypothesis(mod, q_place, o.prec);
    std::printf("  l   min valuation   required\n");
    for (unsigned l = 0; l < o.prec; ++l)
        std::printf("%3u   %13lld   %8u\n", l,
                    static_cast<long long>(rep.min_valuations[l]), l);
    std::printf("existence_hypothesis: %s\n", rep.ok ? "ok" : "failed");
    if (!rep.ok) std::printf("first_failure: %d\n", rep.first_failure);
    return rep.ok ? kExitOk : kExitInvariant;
}

int cmd_solve(const CommonOpts& o) {
    const FrobModule mod = module_from_json(load_json_file(o.in_path));
    const FieldCtx& ctx = mod.base();
    ensure_tower_bound(o.m_max, ctx);
    const PlaceFin place(parse_poly(ctx, o.pi_literal));
    const ReducedModule red = reduce_module_at(mod, place, o.prec);
    const TruncatedSolution sol = solve_truncated(red, o.m_max, o.seed);
    Json j;
    j["schema"] = "dgw-solution/1";
    j["place"] = place_to_json(place);
    j["M"] = sol.M;
    j["homogeneous_dim"] = sol.homogeneous_dim;
    j["splitting_ctx"] = ctx_to_json(sol.ybar.ctx());
    j["ybar"] = series_matrix_to_json(sol.ybar);
    j["checks"]["fundamental_identity"] =
        red.dbar.embed_into(sol.ybar.ctx()).mul(sol.ybar.apply_phi(1)) == sol.ybar;
    std::printf("solved at M=%u (homogeneous dim %zu)\n", sol.M, sol.homogeneous_dim);
    if (!o.out_path.empty()) write_json_file(o.out_path, j);
    return kExitOk;
}

int cmd_extract(const CommonOpts& o) {
    const FrobModule mod = module_from_json(load_json_file(o.in_path));
    const FieldCtx& ctx = mod.base();
    ensure_tower_bound(o.m_max, ctx);
    std::vector<PlaceFin> places;
    for (unsigned d = 1; d <= o.d_max; ++d) {
        const auto batch = enumerate_places(ctx, d);
        places.insert(places.end(), batch.begin(), batch.end());
    }
    const auto results = extract_witnesses(mod, places, o.prec, o.m_max, o.seed, o.threads);
    std::size_t ok = 0;
    for (const auto& r : results)
        if (r.witness) ++ok;
    std::printf("witnesses: %zu of %zu places\n", ok, results.size());
    write_json_file(o.out_path, place_results_to_json(mod, results, o.prec, o.m_max, o.seed));
    return ok > 0 ? kExitOk : kExitNoWitness;
}

int cmd_certify(const CommonOpts& o) {
    const Json wj = load_json_file(o.in_path);
    const FieldCtx& ctx = ctx_for_q(wj.at("q").get<uint64_t>());
    const std::size_t n = wj.at("n").get<std::size_t>();
    // splitting fields recorded in the witness file may exceed the default
    // tower bound
    for (const auto& item : wj.at("places"))
        if (item.at("status") == "ok")
            ensure_tower_bound(item.at("witness").at("M").get<unsigned>(), ctx);

    std::vector<Witness> witnesses;
    std::vector<PlaceFin> used;
    std::vector<std::string> errors;
    for (const auto& item : wj.at("places")) {
        used.push_back(place_from_json(ctx, item.at("place")));
        errors.push_back(item.value("error", ""));
        if (item.at("status") != "ok") continue;
        const auto& w = item.at("witness");
        const FieldCtx& big = ctx_from_json(w.at("splitting_ctx"));
        Witness wit{place_from_json(ctx, w.at("place")),
                    w.at("M").get<unsigned>(),
                    w.at("N").get<unsigned>(),
                    TruncSeriesMatrix(),
                    series_matrix_from_json(big, w.at("h")),
                    fqmat_from_json(ctx, w.at("h0")),
                    poly_from_json(ctx, w.at("charpoly_h0")),
                    w.at("observations").at("h0_order").get<uint64_t>(),
                    w.at("checks").at("phi_fixed").get<bool>(),
                    w.at("checks").at("det_one").get<bool>(),
                    w.at("checks").at("charpoly_matches_product").get<bool>(),
                    w.at("observations").at("homogeneous_dim").get<std::size_t>()};
        witnesses.push_back(std::move(wit));
    }
    GenerationReport rep = certify_generation(ctx, witnesses, n);
    rep.places_used = used;
    rep.place_errors = errors;
    Json out = report_to_json(rep);

    // cross-check against the instance: at place_p the witness characteristic
    // polynomial must match that of g0*g coefficientwise in t
    if (!o.instance_path.empty()) {
        const SlInstance inst = instance_from_json(load_json_file(o.instance_path));
        bool torus_cp_ok = true;
        bool found_place_p = false;
        for (const auto& w : witnesses) {
            if (!(w.place == inst.place_p)) continue;
            found_place_p = true;
            const TorusElement te = torus_element(ctx, n, inst.torus_polys, w.prec);
            const TruncSeriesMatrix g0g =
                TruncSeriesMatrix::from_constant(inst.g0, w.prec).mul(te.g);
            const auto cp_ref = g0g.embed_into(w.h.ctx()).charpoly();
            const auto cp_wit = w.h.charpoly();
            if (cp_ref.size() != cp_wit.size()) torus_cp_ok = false;
            for (std::size_t i = 0; torus_cp_ok && i < cp_ref.size(); ++i)
                if (!(cp_ref[i] == cp_wit[i])) torus_cp_ok = false;
        }
        out["checks"]["torus_witness_charpoly"] =
            found_place_p ? (torus_cp_ok ? "ok" : "mismatch") : "place_p not among witnesses";
        if (found_place_p && !torus_cp_ok) {
            write_json_file(o.out_path, out);
            std::printf("torus witness characteristic polynomial mismatch\n");
            return kExitInvariant;
        }
    }

    write_json_file(o.out_path, out);
    std::printf("closure %zu of %llu, verdict %s, charpoly oracle %s\n", rep.closure_size,
                static_cast<unsigned long long>(rep.target_size), verdict_name(rep.verdict),
                verdict_name(rep.charpoly_oracle));
    if (o.strict && rep.verdict != Verdict::full) return kExitCertificate;
    return kExitOk;
}

int cmd_export_motive(const CommonOpts& o) {
    const FrobModule mod = module_from_json(load_json_file(o.in_path));
    const FieldCtx& ctx = mod.base();
    const PlaceFin place = o.pi_literal.empty()
                               ? PlaceFin(Poly(ctx, {ctx.zero(), ctx.one()}))
                               : PlaceFin(parse_poly(ctx, o.pi_literal));
    const PreTMotive motive = export_pre_t_motive(mod, place);
    // round trip before writing
    const FrobModule back = import_pre_t_motive(motive);
    for (std::size_t i = 0; i < mod.n(); ++i)
        for (std::size_t j = 0; j < mod.n(); ++j)
            require(back.at(i, j).equals(mod.at(i, j)), Errc::invariant_violation,
                    "substitution round trip failed");
    write_json_file(o.out_path, motive_to_json(motive));
    std::printf("exported with substitution round trip verified\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact difference-module toolkit over F_q(s, t)"};
    app.require_subcommand(1);
    CommonOpts o;
    o.out_path = "module.json";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--prec,-N", o.prec, "t-adic precision")->capture_default_str();
        sub->add_option("--seed", o.seed, "seed for solution selection")->capture_default_str();
        sub->add_option("--mmax", o.m_max, "splitting degree budget")->capture_default_str();
        sub->add_option("--threads", o.threads, "worker pool bound (0 = DGW_THREADS or auto)");
    };

    CLI::App* build = app.add_subcommand("build", "assemble the special-linear instance");
    build->add_option("--q", o.q, "field size (prime power)")->required();
    build->add_option("--n", o.n, "matrix dimension")->required();
    build->add_option("--zeta", o.zeta, "primitive (q-1)-th root")->required();
    build->add_option("--alpha", o.alpha, "element of F_q outside {0,1}")->required();
    build->add_option("--alphas", o.alphas, "interpolation values at s=1")->required();
    build->add_option("--betas", o.betas, "interpolation values at s=0")->required();
    build->add_option("--out", o.out_path, "module JSON path")->capture_default_str();
    build->add_option("--instance-out", o.instance_path, "instance JSON path");
    add_common(build);

    CLI::App* check = app.add_subcommand("check", "contraction hypothesis report");
    check->add_option("--module", o.in_path, "module JSON")->required();
    check->add_option("--pi", o.pi_literal, "place polynomial (default s)");
    add_common(check);

    CLI::App* solve = app.add_subcommand("solve", "truncated fundamental matrix at one place");
    solve->add_option("--module", o.in_path, "module JSON")->required();
    solve->add_option("--pi", o.pi_literal, "place polynomial")->required();
    solve->add_option("--out", o.out_path, "solution JSON path");
    add_common(solve);

    CLI::App* extract = app.add_subcommand("extract", "witnesses at all places up to a degree");
    extract->add_option("--module", o.in_path, "module JSON")->required();
    extract->add_option("--dmax", o.d_max, "max place degree")->capture_default_str();
    extract->add_option("--out", o.out_path, "witness JSON path")->required();
    add_common(extract);

    CLI::App* certify = app.add_subcommand("certify", "generation certificate from witnesses");
    certify->add_option("--witnesses", o.in_path, "witness JSON")->required();
    certify->add_option("--instance", o.instance_path, "instance JSON for the torus cross-check");
    certify->add_option("--out", o.out_path, "report JSON path")->required();
    certify->add_flag("--strict", o.strict, "exit 5 unless the verdict is full");
    add_common(certify);

    CLI::App* motive = app.add_subcommand("export-motive", "inverse-convention export");
    motive->add_option("--module", o.in_path, "module JSON")->required();
    motive->add_option("--pi", o.pi_literal, "degree-1 place (default s)");
    motive->add_option("--out", o.out_path, "motive JSON path")->required();
    add_common(motive);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(o);
        if (check->parsed()) return cmd_check(o);
        if (solve->parsed()) return cmd_solve(o);
        if (extract->parsed()) return cmd_extract(o);
        if (certify->parsed()) return cmd_certify(o);
        if (motive->parsed()) return cmd_export_motive(o);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvariant;
    }
    return kExitUsage;
}
