// Acceptance suite: one pass/fail line per criterion, exit status is the
// number of failures. Thresholds and tolerances are pinned in code; every
// numeric check is exact.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "dgw/json_io.hpp"

using namespace dgw;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool ok, const std::string& what, double secs) {
    std::printf("criterion %d: %s - %s (%.2f s)\n", criterion, ok ? "PASS" : "FAIL",
                what.c_str(), secs);
    if (!ok) ++failures;
}

const FieldCtx& f5() { return build_extension(5, 1, 1); }

SlInstance demo_instance() {
    return build_instance(f5(), 2, f5().from_pint(2), f5().from_pint(2), {f5().one()},
                          {f5().zero()});
}

std::vector<PlaceFin> places_up_to(const FieldCtx& ctx, unsigned d_max) {
    std::vector<PlaceFin> out;
    for (unsigned d = 1; d <= d_max; ++d) {
        const auto batch = enumerate_places(ctx, d);
        out.insert(out.end(), batch.begin(), batch.end());
    }
    return out;
}

constexpr unsigned kPrec = 8;
constexpr unsigned kMMax = 360;

} // namespace

int main() {
    set_tower_degree_bound(400);

    // ---- criterion 1: instance assembly with all identities, under 1 s ----
    {
        const auto t0 = Clock::now();
        bool ok = true;
        std::string what = "instance build with exact identities";
        try {
            const SlInstance inst = demo_instance();
            ok &= inst.g0.at(0, 0) == f5().from_pint(2) && inst.g0.at(1, 1) == f5().from_pint(3);
            ok &= inst.d0bar.at(0, 0).is_zero() && inst.d0bar.at(0, 1) == f5().from_pint(4) &&
                  inst.d0bar.at(1, 0).is_one() && inst.d0bar.at(1, 1).is_zero();
            ok &= inst.x.inverse().mul(inst.g0).mul(inst.x) == inst.d0bar &&
                  inst.x.det().is_one();
            // build_module asserts D = D0 mod t and the reduction identity at
            // place_p; re-verify the reduction equality here explicitly
            const FrobModule mod = build_module(inst, kPrec);
            const TorusElement te = torus_element(f5(), 2, inst.torus_polys, kPrec);
            const auto g0s = TruncSeriesMatrix::from_constant(inst.g0, kPrec);
            const auto xs = TruncSeriesMatrix::from_constant(inst.x, kPrec);
            ok &= reduce_module_at(mod, inst.place_p, kPrec).dbar ==
                  xs.inverse().mul(g0s.mul(te.g)).mul(xs);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j)
                    ok &= mod.at(i, j).at_t0() ==
                          build_D0(f5(), 2, inst.alpha, inst.alphas, inst.betas, inst.g0)[i * 2 + j]
                              .at_t0();
        } catch (const Error& e) {
            ok = false;
            what += std::string(" [") + e.what() + "]";
        }
        const double secs = seconds_since(t0);
        ok &= secs < 1.0;
        report(1, ok, what, secs);
    }

    const SlInstance inst = demo_instance();
    const FrobModule mod = build_module(inst, kPrec);

    // ---- criterion 2: contraction hypothesis at (s), exact integers ----
    {
        const auto t0 = Clock::now();
        bool ok = true;
        try {
            const auto rep = check_existence_hypothesis(mod, inst.place_q, kPrec);
            ok &= rep.ok && rep.first_failure == -1;
            for (unsigned l = 0; l < kPrec; ++l)
                ok &= rep.min_valuations[l] >= static_cast<int64_t>(l);
        } catch (const Error&) {
            ok = false;
        }
        report(2, ok, "t^l coefficient valuations at (s) are at least l, l < 8",
               seconds_since(t0));
    }

    // ---- criterion 3: solver contract at every degree <= 2 place ----
    std::vector<PlaceResult> deg2_results;
    {
        const auto t0 = Clock::now();
        bool ok = true;
        std::string what = "solver contract at all 15 places of degree <= 2";
        try {
            const auto places = places_up_to(f5(), 2);
            ok &= places.size() == 15;
            deg2_results = extract_witnesses(mod, places, kPrec, kMMax, 0, 0);
            const auto second = extract_witnesses(mod, places, kPrec, kMMax, 7, 0);
            bool seeds_differ_somewhere = false;
            for (std::size_t i = 0; i < places.size(); ++i) {
                if (!deg2_results[i].witness || !second[i].witness) {
                    ok = false;
                    what += " [" + deg2_results[i].error + second[i].error + "]";
                    continue;
                }
                const Witness& w = *deg2_results[i].witness;
                const FieldCtx& big = w.ybar.ctx();
                const auto red = reduce_module_at(mod, places[i], kPrec);
                // fundamental identity, exact at every coefficient
                ok &= red.dbar.embed_into(big).mul(w.ybar.apply_phi(1)) == w.ybar;
                ok &= !w.ybar.constant_term().det().is_zero();
                // after normalize_to_sl the determinant is exactly one
                ok &= w.ybar.det() == TruncSeries::constant(big, kPrec, big.one());
                // two seeds give a phi-fixed ratio of fundamental matrices
                const Witness& w2 = *second[i].witness;
                if (w2.M == w.M) {
                    if (!(w2.ybar == w.ybar)) seeds_differ_somewhere = true;
                    const auto ratio = w.ybar.inverse().mul(w2.ybar);
                    ok &= ratio.apply_phi(1) == ratio;
                }
            }
            ok &= seeds_differ_somewhere; // the torsor check must not be vacuous
        } catch (const Error& e) {
            ok = false;
            what += std::string(" [") + e.what() + "]";
        }
        const double secs = seconds_since(t0);
        ok &= secs < 10.0;
        report(3, ok, what, secs);
    }

    // ---- criterion 4: witness soundness, zero tolerance ----
    {
        const auto t0 = Clock::now();
        bool ok = true;
        std::size_t count = 0;
        for (const auto& r : deg2_results) {
            if (!r.witness) continue;
            ++count;
            const Witness& w = *r.witness;
            ok &= w.phi_fixed && w.h.apply_phi(1) == w.h;
            ok &= w.det_one &&
                  w.h.det() == TruncSeries::constant(w.h.ctx(), kPrec, w.h.ctx().one());
            ok &= w.charpoly_matches_product;
        }
        ok &= count > 0;
        report(4, ok, "phi-fixedness, unit determinant, conjugation-invariant charpoly on " +
                          std::to_string(count) + " witnesses",
               seconds_since(t0));
    }

    // ---- criterion 5: generation certificate via parameter search ----
    {
        const auto t0 = Clock::now();
        bool ok = true;
        std::string what;
        try {
            SearchConfig cfg;
            cfg.d_max = 3;
            cfg.prec = kPrec;
            cfg.m_max = 150;
            cfg.budget = 25;
            const SearchResult res =
                search_nori_parameters(f5(), 2, f5().from_pint(2), f5().from_pint(2), cfg);
            ok &= res.report.verdict == Verdict::full;
            ok &= res.report.closure_size == 120 && res.report.target_size == 120;
            ok &= res.report.places_used.size() == 55; // degrees 1..3 over F_5
            // The char-poly channel is reported honestly: at q = 5 a proper
            // order-12 subgroup realizes every admissible char poly, so the
            // oracle cannot return "full" for any input; the exact closure
            // above is the sound generation certificate.
            ok &= res.report.charpoly_oracle == Verdict::proper;
            bool coverable = false;
            for (const auto& tr : proper_subgroup_trace_sets(f5()))
                if (tr.size() == 5) coverable = true;
            ok &= coverable;
            what = "closure of h0 witnesses is exactly |SL_2(F_5)| = 120 for tuple (alpha1=" +
                   std::to_string(res.instance.alphas[0].index()) +
                   ", beta1=" + std::to_string(res.instance.betas[0].index()) +
                   "); charpoly oracle honestly 'proper'";
        } catch (const Error& e) {
            ok = false;
            what = std::string("search failed [") + e.what() + "]";
        }
        const double secs = seconds_since(t0);
        ok &= secs < 60.0;
        report(5, ok, what, secs);
    }

    // ---- criterion 6: centralizer of g0 is the diagonal torus ----
    {
        const auto t0 = Clock::now();
        bool ok = true;
        const auto& all = enumerate_sl2(f5());
        ok &= all.size() == 120;
        const auto cent = centralizer(inst.g0, all);
        ok &= cent.size() == 4;
        for (const auto& c : cent) ok &= c.at(0, 1).is_zero() && c.at(1, 0).is_zero();
        report(6, ok, "brute-force centralizer of diag(2,3) has size 4, all diagonal",
               seconds_since(t0));
    }

    // ---- criterion 7: level raising keeps the fundamental matrix ----
    {
        const auto t0 = Clock::now();
        bool ok = true;
        try {
            const FrobModule raised2 = raise_level(mod, 2);
            const FrobModule raised3 = raise_level(mod, 3);
            // reuse the level-1 fundamental matrices from the criterion-3 sweep
            // at place_q = (s) and place_p = (s - 2)
            int used = 0;
            for (const auto& r : deg2_results) {
                if (!(r.place == inst.place_q) && !(r.place == inst.place_p)) continue;
                if (!r.witness) {
                    ok = false;
                    continue;
                }
                ++used;
                const Witness& w = *r.witness;
                const FieldCtx& big = w.ybar.ctx();
                for (unsigned i : {2u, 3u}) {
                    const FrobModule& raised = i == 2 ? raised2 : raised3;
                    const auto red_i = reduce_module_at(raised, r.place, kPrec);
                    ok &= red_i.dbar.embed_into(big).mul(w.ybar.apply_phi(i)) == w.ybar;
                }
            }
            ok &= used == 2;
        } catch (const Error&) {
            ok = false;
        }
        report(7, ok, "raised representing matrices keep the level-1 fundamental matrix, i in {2,3}",
               seconds_since(t0));
    }

    // ---- criterion 8: inverse-convention export at residue level ----
    {
        const auto t0 = Clock::now();
        bool ok = true;
        try {
            const PreTMotive motive = export_pre_t_motive(mod, inst.place_q);
            // substitution round trip is exact
            const FrobModule back = import_pre_t_motive(motive);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) ok &= back.at(i, j).equals(mod.at(i, j));
            // theta = 1/s maps s = 2 to theta = 3; reductions agree there
            const PlaceFin theta_place(Poly(f5(), {-f5().from_pint(3), f5().one()}));
            const auto phi_red = reduce_module_at(motive.motive, theta_place, kPrec);
            const auto d_red = reduce_module_at(mod, inst.place_p, kPrec);
            ok &= phi_red.dbar == d_red.dbar;
            // Phi Psi = sigma(Psi) with Psi = phi_q(Ybar), sigma the inverse
            // Frobenius (frobenius to the power M-1 on finite coefficients)
            const auto sol = solve_truncated(d_red, kMMax);
            const FieldCtx& big = sol.ybar.ctx();
            const auto psi = sol.ybar.apply_phi(1);
            const auto sigma_psi = psi.apply_phi(big.M() - 1);
            ok &= phi_red.dbar.embed_into(big).mul(psi) == sigma_psi;
        } catch (const Error&) {
            ok = false;
        }
        report(8, ok, "theta-substitution round trip and the inverse-convention identity",
               seconds_since(t0));
    }

    // ---- criterion 9: property suites ----
    {
        const auto t0 = Clock::now();
        bool ok = true;
        std::mt19937_64 rng(41);
        const FieldCtx& f25 = build_extension(5, 1, 2);
        auto random_elem = [&](const FieldCtx& ctx) {
            std::vector<uint8_t> c(ctx.deg());
            for (auto& v : c) v = static_cast<uint8_t>(rng() % ctx.p());
            return ctx.from_coeffs(std::move(c));
        };
        for (int rep = 0; rep < 1000; ++rep) {
            const auto a = random_elem(f25), b = random_elem(f25), c = random_elem(f25);
            ok &= (a * b) * c == a * (b * c);
            ok &= a * (b + c) == a * b + a * c;
            if (!a.is_zero()) ok &= (a * f25.inv(a)).is_one();
            ok &= frobenius(a * b, 1) == frobenius(a, 1) * frobenius(b, 1);
        }

        auto random_ratfunc = [&]() {
            auto rand_poly = [&](int maxdeg, bool nonzero) {
                while (true) {
                    std::vector<FieldElem> cs;
                    const int d = static_cast<int>(rng() % (maxdeg + 1));
                    for (int i = 0; i <= d; ++i) cs.push_back(f5().from_index(rng() % 5));
                    Poly p(f5(), std::move(cs));
                    if (!nonzero || !p.is_zero()) return p;
                }
            };
            return RatFunc(rand_poly(3, false), rand_poly(3, true));
        };
        const PlaceFin quad(Poly(f5(), {f5().from_pint(2), f5().zero(), f5().one()}));
        for (int rep = 0; rep < 1000; ++rep) {
            const auto a = random_ratfunc(), b = random_ratfunc();
            if (!a.is_zero() && !b.is_zero())
                ok &= valuation_at(quad, a * b) == valuation_at(quad, a) + valuation_at(quad, b);
            const auto va = valuation_at(quad, a), vb = valuation_at(quad, b);
            const auto vs = valuation_at(quad, a + b);
            ok &= vs >= std::min(va, vb);
            if (va != vb) ok &= vs == std::min(va, vb);
        }

        int used = 0;
        while (used < 500) {
            const auto a = random_ratfunc();
            if (valuation_at(quad, a) < 0) continue;
            ++used;
            ok &= reduce_at(quad, a.frobenius(1)) ==
                  quad.residue_ctx().frobenius(reduce_at(quad, a), 1);
        }

        // necklace counts for d <= 4
        auto necklace = [](uint64_t q, unsigned d) {
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
        };
        for (unsigned d = 1; d <= 4; ++d)
            ok &= enumerate_places(f5(), d).size() == necklace(5, d);

        report(9, ok,
               "field/valuation axioms (1000 samples), reduction-Frobenius commutation "
               "(500 samples), necklace place counts d <= 4",
               seconds_since(t0));
    }

    std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "SUCCESS" : "FAILURE", failures);
    return failures;
}
