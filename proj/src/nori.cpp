#include "dgw/nori.hpp"

#include <algorithm>

namespace dgw {

namespace {

// nullspace of a square matrix over the field (small n)
std::vector<std::vector<FieldElem>> fq_nullspace(FqMat m) {
    const FieldCtx& ctx = m.ctx();
    const std::size_t n = m.n();
    std::vector<int> pivot_of_col(n, -1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t piv = row;
        while (piv < n && m.at(piv, col).is_zero()) ++piv;
        if (piv == n) continue;
        if (piv != row)
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(row, j));
        const FieldElem inv = ctx.inv(m.at(row, col));
        for (std::size_t j = 0; j < n; ++j) m.at(row, j) = m.at(row, j) * inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            const FieldElem f = m.at(i, col);
            for (std::size_t j = 0; j < n; ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivot_of_col[col] = static_cast<int>(row);
        ++row;
    }
    std::vector<std::vector<FieldElem>> basis;
    for (std::size_t col = 0; col < n; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<FieldElem> v(n, ctx.zero());
        v[col] = ctx.one();
        for (std::size_t c2 = 0; c2 < n; ++c2)
            if (pivot_of_col[c2] >= 0)
                v[c2] = -m.at(static_cast<std::size_t>(pivot_of_col[c2]), col);
        basis.push_back(std::move(v));
    }
    return basis;
}

uint64_t sl_order(const FieldCtx& ctx, std::size_t n) {
    const uint64_t q = ctx.q();
    uint64_t out = 1;
    for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) out *= q;
    for (std::size_t i = 2; i <= n; ++i) {
        uint64_t qi = 1;
        for (std::size_t j = 0; j < i; ++j) qi *= q;
        out *= qi - 1;
    }
    return out;
}

Poly s_poly(const FieldCtx& ctx, std::initializer_list<FieldElem> coeffs) {
    return Poly(ctx, std::vector<FieldElem>(coeffs));
}

} // namespace

FqMat build_g0(const FieldCtx& ctx, std::size_t n, const FieldElem& zeta) {
    require(n >= 2, Errc::invariant_violation, "need n >= 2");
    require(ctx.q() > n * (n + 1) / 2, Errc::invariant_violation,
            "q must exceed n(n+1)/2");
    require(!zeta.is_zero() && ctx.elem_order(zeta) == ctx.q() - 1, Errc::not_primitive_root,
            "zeta must have order q-1");
    FqMat g0(ctx, n);
    FieldElem acc = ctx.one();
    FieldElem prod = ctx.one();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        acc = acc * zeta;
        g0.at(i, i) = acc;
        prod = prod * acc;
    }
    g0.at(n - 1, n - 1) = ctx.inv(prod); // zeta^{-n(n-1)/2}
    require(g0.det().is_one(), Errc::invariant_violation, "g0 must have determinant 1");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (g0.at(i, i) == g0.at(j, j))
                fail(Errc::eigenvalue_collision, "g0 eigenvalues must be pairwise distinct");
    return g0;
}

std::vector<BivarEntry> build_D0(const FieldCtx& ctx, std::size_t n, const FieldElem& alpha,
                                 const std::vector<FieldElem>& alphas,
                                 const std::vector<FieldElem>& betas, const FqMat& g0) {
    require(!alpha.is_zero() && !alpha.is_one(), Errc::bad_alpha,
            "alpha must avoid 0 and 1");
    require(alphas.size() == n - 1 && betas.size() == n - 1, Errc::invariant_violation,
            "need n-1 interpolation parameters");

    // gamma_i = -(coefficient of X^{n-i}) of charpoly(g0); the companion shape
    // below has characteristic polynomial X^n - f_1 X^{n-1} - ... - f_{n-1} X
    // - (-1)^{n-1}, so f_i(alpha) = gamma_i reproduces g0's polynomial
    const Poly cp = g0.charpoly();
    std::vector<FieldElem> gamma;
    for (std::size_t i = 1; i < n; ++i) gamma.push_back(-cp.coeff(n - i));

    const FieldElem corr_scale = ctx.inv(alpha * (alpha - ctx.one()));
    std::vector<BivarEntry> d(n * n, BivarEntry::zero(ctx));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        // f_i = s*alpha_i + (1-s)*beta_i
        //       + s(s-1)/(alpha(alpha-1)) * (gamma_i - alpha*alpha_i - (1-alpha)*beta_i)
        const FieldElem lin1 = alphas[i] - betas[i];
        const FieldElem corr =
            corr_scale * (gamma[i] - alpha * alphas[i] - (ctx.one() - alpha) * betas[i]);
        // f_i = beta_i + (lin1 - corr) s + corr s^2
        const Poly fi = s_poly(ctx, {betas[i], lin1 - corr, corr});
        require(fi.eval(alpha) == gamma[i] && fi.eval(ctx.one()) == alphas[i] &&
                    fi.eval(ctx.zero()) == betas[i],
                Errc::invariant_violation, "interpolation identities failed");
        d[i] = BivarEntry::from_spoly(fi);
    }
    const FieldElem corner =
        (n % 2 == 1) ? ctx.one() : -ctx.one(); // (-1)^(n-1)
    d[n - 1] = BivarEntry::from_spoly(Poly::constant(corner));
    for (std::size_t i = 1; i < n; ++i)
        d[i * n + (i - 1)] = BivarEntry::one(ctx);
    return d;
}

FqMat build_conjugator(const FqMat& g0, const FqMat& d0bar) {
    const FieldCtx& ctx = g0.ctx();
    const std::size_t n = g0.n();
    // row i of x is a left eigenvector of d0bar for the eigenvalue g0[i][i]
    FqMat x(ctx, n);
    for (std::size_t i = 0; i < n; ++i) {
        FqMat shifted(ctx, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                shifted.at(r, c) = d0bar.at(c, r); // transpose
                if (r == c) shifted.at(r, c) = shifted.at(r, c) - g0.at(i, i);
            }
        const auto basis = fq_nullspace(std::move(shifted));
        if (basis.size() != 1)
            fail(Errc::conjugation_failed, "eigenvalue multiplicity is not one");
        // normalize: first nonzero coordinate = 1
        std::vector<FieldElem> row = basis[0];
        for (std::size_t j = 0; j < n; ++j) {
            if (!row[j].is_zero()) {
                const FieldElem inv = ctx.inv(row[j]);
                for (auto& v : row) v = v * inv;
                break;
            }
        }
        for (std::size_t j = 0; j < n; ++j) x.at(i, j) = row[j];
    }
    const FieldElem d = x.det();
    if (d.is_zero()) fail(Errc::conjugation_failed, "eigenvector rows are dependent");
    // scale row zero into SL_n; row scalings commute with the diagonal g0
    const FieldElem dinv = ctx.inv(d);
    for (std::size_t j = 0; j < n; ++j) x.at(0, j) = x.at(0, j) * dinv;
    if (!(x.inverse().mul(g0).mul(x) == d0bar))
        fail(Errc::conjugation_failed, "conjugation identity g0^x = D0bar failed");
    return x;
}

SlInstance build_instance(const FieldCtx& ctx, std::size_t n, const FieldElem& zeta,
                          const FieldElem& alpha, const std::vector<FieldElem>& alphas,
                          const std::vector<FieldElem>& betas) {
    FqMat g0 = build_g0(ctx, n, zeta);
    std::vector<BivarEntry> d0 = build_D0(ctx, n, alpha, alphas, betas, g0);

    PlaceFin place_p(s_poly(ctx, {-alpha, ctx.one()}));
    PlaceFin place_q(s_poly(ctx, {ctx.zero(), ctx.one()}));

    // reduction of D0 at place_p (degree 1, residue field is F_q itself)
    FqMat d0bar(ctx, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d0bar.at(i, j) = to_subfield(reduce_at(place_p, d0[i * n + j].at_t0()), ctx);
    require(d0bar.charpoly() == g0.charpoly(), Errc::invariant_violation,
            "companion reduction must carry g0's characteristic polynomial");

    FqMat x = build_conjugator(g0, d0bar);
    std::vector<Poly> pj = standard_torus_polys(ctx, zeta, static_cast<unsigned>(n - 1));

    return SlInstance{&ctx,   n,       zeta, alpha, alphas, betas, std::move(g0),
                      d0bar,  std::move(x), place_p, place_q, std::move(pj)};
}

FrobModule build_module(const SlInstance& inst, unsigned check_prec) {
    const FieldCtx& ctx = *inst.ctx;
    const std::size_t n = inst.n;

    // ptilde_j = 1 + zeta^j (s/alpha) t
    const FieldElem ainv = ctx.inv(inst.alpha);
    std::vector<BivarEntry> ptilde;
    FieldElem zj = ctx.one();
    for (std::size_t j = 1; j < n; ++j) {
        zj = zj * inst.zeta;
        ptilde.push_back(BivarEntry::from_tpoly(
            {Poly::constant(ctx.one()), s_poly(ctx, {ctx.zero(), zj * ainv})}));
    }
    BivarEntry prod = BivarEntry::one(ctx);
    for (const auto& p : ptilde) prod = prod.mul(p);

    // gtilde = diag(ptilde..., prod^-1), conjugated by x
    std::vector<BivarEntry> gt(n * n, BivarEntry::zero(ctx));
    for (std::size_t j = 0; j + 1 < n; ++j) gt[j * n + j] = ptilde[j];
    gt[(n - 1) * n + (n - 1)] = prod.inv();

    auto const_entry = [&](const FieldElem& c) {
        return BivarEntry::from_spoly(Poly::constant(c));
    };
    const FqMat xinv = inst.x.inverse();
    std::vector<BivarEntry> gtx(n * n, BivarEntry::zero(ctx));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            BivarEntry acc = BivarEntry::zero(ctx);
            for (std::size_t k = 0; k < n; ++k) {
                if (xinv.at(i, k).is_zero() || inst.x.at(k, j).is_zero()) continue;
                // gtilde is diagonal
                acc = acc.add(const_entry(xinv.at(i, k) * inst.x.at(k, j)).mul(gt[k * n + k]));
            }
            gtx[i * n + j] = acc;
        }

    std::vector<BivarEntry> d0 =
        build_D0(ctx, n, inst.alpha, inst.alphas, inst.betas, inst.g0);
    std::vector<BivarEntry> d(n * n, BivarEntry::zero(ctx));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            BivarEntry acc = BivarEntry::zero(ctx);
            for (std::size_t k = 0; k < n; ++k)
                acc = acc.add(d0[i * n + k].mul(gtx[k * n + j]));
            d[i * n + j] = acc;
        }

    // D = D0 mod t
    for (std::size_t i = 0; i < n * n; ++i)
        require(d[i].at_t0() == d0[i].at_t0(), Errc::invariant_violation,
                "module must agree with D0 at t = 0");

    FrobModule mod(ctx, n, d);

    // reduction at place_p equals (g0 g)^x to the checking precision
    {
        const TorusElement te = torus_element(ctx, n, inst.torus_polys, check_prec);
        const TruncSeriesMatrix g0s = TruncSeriesMatrix::from_constant(inst.g0, check_prec);
        const TruncSeriesMatrix xs = TruncSeriesMatrix::from_constant(inst.x, check_prec);
        const TruncSeriesMatrix expect = xs.inverse().mul(g0s.mul(te.g)).mul(xs);
        require(reduce_module_at(mod, inst.place_p, check_prec).dbar == expect,
                Errc::invariant_violation, "reduction at place_p must equal (g0 g)^x");
    }

    // contraction hypothesis at place_q
    require(check_existence_hypothesis(mod, inst.place_q, check_prec).ok,
            Errc::invariant_violation, "contraction hypothesis fails at place_q");
    return mod;
}

GenerationReport certify_generation(const FieldCtx& ctx, const std::vector<Witness>& witnesses,
                                    std::size_t n) {
    GenerationReport rep;
    rep.witnesses_used = witnesses.size();
    rep.target_size = sl_order(ctx, n);

    std::vector<FqMat> h0s;
    std::vector<std::string> cp_keys;
    for (const auto& w : witnesses) {
        h0s.push_back(w.h0);
        rep.charpolys_seen.push_back(w.charpoly_h0);
    }
    std::sort(rep.charpolys_seen.begin(), rep.charpolys_seen.end(),
              [](const Poly& a, const Poly& b) {
                  const auto ka = a.coeffs();
                  const auto kb = b.coeffs();
                  return std::lexicographical_compare(
                      ka.begin(), ka.end(), kb.begin(), kb.end(),
                      [](const FieldElem& x, const FieldElem& y) { return lex_less(x, y); });
              });
    rep.charpolys_seen.erase(std::unique(rep.charpolys_seen.begin(), rep.charpolys_seen.end()),
                             rep.charpolys_seen.end());

    if (h0s.empty()) {
        rep.closure_size = 1; // the trivial subgroup
        rep.verdict = Verdict::proper;
        rep.charpoly_oracle = Verdict::proper;
        return rep;
    }
    const auto closure =
        group_closure(FqMatrixGroupGens(ctx, n, h0s, true), 2 * rep.target_size + 16);
    rep.closure_size = closure.size();
    require(rep.target_size % rep.closure_size == 0, Errc::invariant_violation,
            "closure size must divide the group order");
    rep.verdict = rep.closure_size == rep.target_size ? Verdict::full : Verdict::proper;
    if (n == 2 && ctx.q() <= 9)
        rep.charpoly_oracle = charpoly_subgroup_oracle(ctx, rep.charpolys_seen);
    return rep;
}

SearchResult search_nori_parameters(const FieldCtx& ctx, std::size_t n, const FieldElem& zeta,
                                    const FieldElem& alpha, const SearchConfig& cfg) {
    require(n == 2, Errc::invariant_violation,
            "the certificate search is implemented for n = 2");
    require(ctx.q() <= 9, Errc::cap_exceeded, "search budget is q <= 9");

    std::size_t tried = 0;
    for (uint64_t a1 = 0; a1 < ctx.q() && tried < cfg.budget; ++a1) {
        for (uint64_t b1 = 0; b1 < ctx.q() && tried < cfg.budget; ++b1) {
            ++tried;
            SlInstance inst = build_instance(ctx, n, zeta, alpha, {ctx.from_index(a1)},
                                             {ctx.from_index(b1)});
            const FrobModule mod = build_module(inst, cfg.prec);

            std::vector<Witness> witnesses;
            GenerationReport rep;
            std::vector<PlaceFin> attempted;
            std::vector<std::string> errors;
            bool certified = false;
            for (unsigned d = 1; d <= cfg.d_max && !certified; ++d) {
                const auto places = enumerate_places(ctx, d);
                const auto results =
                    extract_witnesses(mod, places, cfg.prec, cfg.m_max, cfg.seed, cfg.threads);
                for (const auto& r : results) {
                    attempted.push_back(r.place);
                    errors.push_back(r.error);
                    if (r.witness) witnesses.push_back(*r.witness);
                }
                rep = certify_generation(ctx, witnesses, n);
                if (cfg.early_stop && rep.verdict == Verdict::full) certified = true;
            }
            rep.places_used = attempted;
            rep.place_errors = errors;
            if (rep.verdict == Verdict::full)
                return SearchResult{std::move(inst), std::move(rep), tried};
        }
    }
    fail(Errc::budget_exhausted,
         "no parameter tuple certified within budget " + std::to_string(cfg.budget));
}

} // namespace dgw
