#include "dgw/field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <atomic>
#include <tuple>

namespace dgw {

namespace {

std::atomic<unsigned> g_tower_degree_bound{64};

// little-endian 64-bit limb helpers for exponents past the uint64 range
std::vector<uint64_t> limbs_one() { return {1}; }

void limbs_mul_small(std::vector<uint64_t>& a, unsigned m) {
    unsigned __int128 carry = 0;
    for (auto& limb : a) {
        const unsigned __int128 v = static_cast<unsigned __int128>(limb) * m + carry;
        limb = static_cast<uint64_t>(v);
        carry = v >> 64;
    }
    if (carry) a.push_back(static_cast<uint64_t>(carry));
}

void limbs_sub_one(std::vector<uint64_t>& a) {
    for (auto& limb : a) {
        if (limb != 0) {
            --limb;
            break;
        }
        limb = UINT64_MAX;
    }
    while (a.size() > 1 && a.back() == 0) a.pop_back();
}

void limbs_shr1(std::vector<uint64_t>& a) {
    uint64_t carry = 0;
    for (std::size_t i = a.size(); i-- > 0;) {
        const uint64_t next = a[i] & 1;
        a[i] = (a[i] >> 1) | (carry << 63);
        carry = next;
    }
    while (a.size() > 1 && a.back() == 0) a.pop_back();
}

// --- bootstrap polynomial arithmetic over F_p (coefficient vectors) ---
// Only used while constructing a context, before FieldElem is available.

using PVec = std::vector<uint8_t>;

void pv_trim(PVec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PVec pv_mul(unsigned p, const PVec& a, const PVec& b) {
    if (a.empty() || b.empty()) return {};
    PVec out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = static_cast<uint8_t>((out[i + j] + a[i] * b[j]) % p);
    }
    pv_trim(out);
    return out;
}

PVec pv_mod(unsigned p, PVec a, const PVec& m) {
    pv_trim(a);
    const std::size_t dm = m.size() - 1;
    const uint8_t lead_inv = fp_inv(p, m.back());
    while (a.size() > dm) {
        const unsigned c = static_cast<unsigned>(a.back()) * lead_inv % p;
        const std::size_t shift = a.size() - 1 - dm;
        if (c != 0) {
            for (std::size_t j = 0; j < m.size(); ++j) {
                unsigned sub = c * m[j] % p;
                a[shift + j] = static_cast<uint8_t>((a[shift + j] + p - sub) % p);
            }
        }
        a.pop_back();
        pv_trim(a);
        if (a.size() <= dm) break;
    }
    return a;
}

PVec pv_powmod_x(unsigned p, uint64_t exp, const PVec& m) {
    // x^exp mod m by square and multiply
    PVec result{1};
    PVec base{0, 1};
    base = pv_mod(p, base, m);
    while (exp > 0) {
        if (exp & 1) result = pv_mod(p, pv_mul(p, result, base), m);
        base = pv_mod(p, pv_mul(p, base, base), m);
        exp >>= 1;
    }
    return result;
}

PVec pv_gcd(unsigned p, PVec a, PVec b) {
    pv_trim(a);
    pv_trim(b);
    while (!b.empty()) {
        PVec r = pv_mod(p, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const uint8_t inv = fp_inv(p, a.back());
        for (auto& c : a) c = static_cast<uint8_t>(c * inv % p);
    }
    return a;
}

bool pv_is_irreducible(unsigned p, const PVec& f) {
    // f monic of degree n: irreducible iff x^(p^n) = x mod f and
    // gcd(x^(p^(n/l)) - x, f) = 1 for every prime l | n.
    const std::size_t n = f.size() - 1;
    if (n == 0) return false;
    if (n == 1) return true;

    // early rejection before any table building: factors of degree <= 6 are
    // caught by a few cheap powmods
    {
        PVec h{0, 1};
        const std::size_t probe = std::min<std::size_t>(6, n - 1);
        for (std::size_t k = 1; k <= probe; ++k) {
            // h := h^p mod f
            PVec acc = h;
            uint64_t e = p;
            PVec result{1};
            while (e > 0) {
                if (e & 1) result = pv_mod(p, pv_mul(p, result, acc), f);
                acc = pv_mod(p, pv_mul(p, acc, acc), f);
                e >>= 1;
            }
            h = std::move(result);
            PVec diff = h;
            if (diff.size() < 2) diff.resize(2, 0);
            diff[1] = static_cast<uint8_t>((diff[1] + p - 1) % p);
            pv_trim(diff);
            if (pv_gcd(p, diff, f).size() != 1) return false;
        }
    }

    // table of x^(j*p) mod f so each p-power substitution is n vector adds
    const PVec xp = pv_powmod_x(p, p, f);
    std::vector<PVec> xp_pows(n);
    xp_pows[0] = PVec{1};
    for (std::size_t j = 1; j < n; ++j) xp_pows[j] = pv_mod(p, pv_mul(p, xp_pows[j - 1], xp), f);

    auto pth_power = [&](const PVec& h) {
        PVec acc(n, 0);
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (h[i] == 0) continue;
            const PVec& pw = xp_pows[i];
            for (std::size_t r = 0; r < pw.size(); ++r)
                acc[r] = static_cast<uint8_t>((acc[r] + h[i] * pw[r]) % p);
        }
        pv_trim(acc);
        return acc;
    };

    PVec h{0, 1};
    std::vector<PVec> frob_chain; // frob_chain[k] = x^(p^(k+1)) mod f
    frob_chain.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        h = pth_power(h);
        frob_chain.push_back(h);
    }
    PVec x{0, 1};
    if (frob_chain[n - 1] != x) return false;
    for (std::size_t l = 2; l <= n; ++l) {
        if (n % l != 0) continue;
        bool prime = true;
        for (std::size_t d = 2; d * d <= l; ++d)
            if (l % d == 0) { prime = false; break; }
        if (!prime) continue;
        PVec diff = frob_chain[n / l - 1];
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<uint8_t>((diff[1] + p - 1) % p);
        pv_trim(diff);
        PVec g = pv_gcd(p, diff, f);
        if (g.size() != 1) return false;
    }
    return true;
}

PVec smallest_irreducible(unsigned p, unsigned n) {
    // monic degree-n polynomials ordered by canonical index of the
    // non-leading coefficients; the smallest irreducible appears within a few
    // hundred candidates, so the scan is capped rather than sized at p^n
    const uint64_t scan_cap = uint64_t(1) << 24;
    for (uint64_t k = 0; k < scan_cap; ++k) {
        PVec f(n + 1, 0);
        uint64_t v = k;
        for (unsigned i = 0; i < n && v > 0; ++i) {
            f[i] = static_cast<uint8_t>(v % p);
            v /= p;
        }
        if (v > 0) break; // exhausted the search space for tiny p^n
        f[n] = 1;
        if (pv_is_irreducible(p, f)) return f;
    }
    fail(Errc::invariant_violation, "no irreducible polynomial found in scan range");
}

struct CtxKey {
    unsigned p, e, M;
    bool operator<(const CtxKey& o) const {
        return std::tie(p, e, M) < std::tie(o.p, o.e, o.M);
    }
};

} // namespace

unsigned tower_degree_bound() { return g_tower_degree_bound.load(); }

void set_tower_degree_bound(unsigned bound) {
    require(bound >= 1, Errc::invariant_violation, "tower bound must be positive");
    g_tower_degree_bound.store(bound);
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------- FieldElem

bool FieldElem::is_zero() const {
    return std::all_of(c.begin(), c.end(), [](uint8_t v) { return v == 0; });
}

bool FieldElem::is_one() const {
    if (c.empty() || c[0] != 1) return false;
    return std::all_of(c.begin() + 1, c.end(), [](uint8_t v) { return v == 0; });
}

uint64_t FieldElem::index() const {
    uint64_t idx = 0;
    for (std::size_t i = c.size(); i-- > 0;) idx = idx * ctx->p() + c[i];
    return idx;
}

bool lex_less(const FieldElem& a, const FieldElem& b) { return a.index() < b.index(); }

FieldElem operator+(const FieldElem& a, const FieldElem& b) { return a.ctx->add(a, b); }
FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a.ctx->sub(a, b); }
FieldElem operator*(const FieldElem& a, const FieldElem& b) { return a.ctx->mul(a, b); }
FieldElem operator/(const FieldElem& a, const FieldElem& b) {
    return a.ctx->mul(a, a.ctx->inv(b));
}
FieldElem operator-(const FieldElem& a) { return a.ctx->neg(a); }

// ----------------------------------------------------------------- FieldCtx

struct FieldCtxRegistry {
    std::mutex mu;
    std::map<CtxKey, std::unique_ptr<FieldCtx>> ctxs;

    static FieldCtxRegistry& instance() {
        static FieldCtxRegistry reg;
        return reg;
    }

    const FieldCtx& get(unsigned p, unsigned e, unsigned M) {
        std::lock_guard<std::mutex> lock(mu);
        CtxKey key{p, e, M};
        auto it = ctxs.find(key);
        if (it == ctxs.end())
            it = ctxs.emplace(key, std::unique_ptr<FieldCtx>(new FieldCtx(p, e, M))).first;
        return *it->second;
    }
};

const FieldCtx& FieldCtx::get(unsigned p, unsigned e, unsigned M) {
    require(p >= 2 && is_prime_u64(p), Errc::not_prime, "p = " + std::to_string(p));
    require(p < 256, Errc::degree_overflow, "p must be below 256");
    require(e >= 1 && M >= 1, Errc::invariant_violation, "e, M must be positive");
    const unsigned bound = g_tower_degree_bound.load();
    require(static_cast<uint64_t>(e) * M <= bound, Errc::degree_overflow,
            "e*M exceeds bound " + std::to_string(bound));
    return FieldCtxRegistry::instance().get(p, e, M);
}

FieldCtx::FieldCtx(unsigned p, unsigned e, unsigned M)
    : p_(p), e_(e), M_(M), deg_(e * M) {
    // q = p^e and order = q^M - 1 with overflow guard
    q_ = 1;
    for (unsigned i = 0; i < e_; ++i) {
        require(q_ <= UINT64_MAX / p_, Errc::degree_overflow, "q overflows");
        q_ *= p_;
    }
    order_limbs_ = limbs_one();
    for (unsigned i = 0; i < deg_; ++i) limbs_mul_small(order_limbs_, p_);
    limbs_sub_one(order_limbs_);
    order_fits_u64_ = order_limbs_.size() == 1;

    modulus_ = smallest_irreducible(p_, deg_);
    inv_table_.assign(p_, 0);
    for (unsigned v = 1; v < p_; ++v) inv_table_[v] = fp_inv(p_, static_cast<uint8_t>(v));

    // Frobenius maps as F_p-linear matrices: column j is (x^j)^p resp. (x^j)^q
    auto build_power_map = [&](uint64_t power) {
        FpMat m(p_, deg_, deg_);
        const PVec img = pv_powmod_x(p_, power, modulus_); // x^power
        PVec acc{1};                                       // (x^power)^j
        for (unsigned j = 0; j < deg_; ++j) {
            for (std::size_t i = 0; i < acc.size(); ++i) m.at(i, j) = acc[i];
            acc = pv_mod(p_, pv_mul(p_, acc, img), modulus_);
        }
        return m;
    };
    frob_p_ = build_power_map(p_);
    frob_q_ = build_power_map(q_);

    // fixed field of x -> x^q must be exactly F_q: kernel of (frob_q - id) has
    // F_p-dimension e
    FpMat diff = frob_q_;
    for (unsigned i = 0; i < deg_; ++i)
        diff.at(i, i) = static_cast<uint8_t>((diff.at(i, i) + p_ - 1) % p_);
    FpSolver solver(diff);
    require(solver.nullspace().size() == e_, Errc::invariant_violation,
            "Frobenius fixed field has wrong size");

    fq_gen_ = zero();
    if (e_ > 1) {
        // canonical F_q generator: smallest-index root of the canonical F_q
        // modulus inside this context
        const auto fq_mod = (M_ == 1) ? modulus_ : smallest_irreducible(p_, e_);
        std::vector<FieldElem> cf;
        for (uint8_t cv : fq_mod) cf.push_back(from_pint(cv));
        const auto roots = poly_roots(Poly(*this, std::move(cf)));
        require(!roots.empty(), Errc::invariant_violation, "F_q modulus has no root in tower");
        fq_gen_ = roots.front();
    }
}

std::vector<uint8_t> FieldCtx::reduce_mod(std::vector<uint8_t> poly) const {
    return pv_mod(p_, std::move(poly), modulus_);
}

FieldElem FieldCtx::zero() const { return FieldElem{this, std::vector<uint8_t>(deg_, 0)}; }

FieldElem FieldCtx::one() const {
    auto v = std::vector<uint8_t>(deg_, 0);
    v[0] = 1;
    return FieldElem{this, std::move(v)};
}

FieldElem FieldCtx::gen() const {
    auto v = std::vector<uint8_t>(deg_, 0);
    if (deg_ > 1) {
        v[1] = 1;
    } else {
        const PVec red = pv_mod(p_, {0, 1}, modulus_); // x mod linear modulus
        if (!red.empty()) v[0] = red[0];
    }
    return FieldElem{this, std::move(v)};
}

FieldElem FieldCtx::from_pint(uint64_t v) const {
    auto c = std::vector<uint8_t>(deg_, 0);
    c[0] = static_cast<uint8_t>(v % p_);
    return FieldElem{this, std::move(c)};
}

FieldElem FieldCtx::from_coeffs(std::vector<uint8_t> c) const {
    require(c.size() <= deg_, Errc::parse_error, "coefficient vector too long");
    c.resize(deg_, 0);
    for (auto& v : c) v = static_cast<uint8_t>(v % p_);
    return FieldElem{this, std::move(c)};
}

FieldElem FieldCtx::from_index(uint64_t idx) const {
    auto c = std::vector<uint8_t>(deg_, 0);
    for (unsigned i = 0; i < deg_ && idx > 0; ++i) {
        c[i] = static_cast<uint8_t>(idx % p_);
        idx /= p_;
    }
    return FieldElem{this, std::move(c)};
}

FieldElem FieldCtx::add(const FieldElem& a, const FieldElem& b) const {
    require(a.ctx == this && b.ctx == this, Errc::invariant_violation, "context mismatch");
    FieldElem out = a;
    for (unsigned i = 0; i < deg_; ++i) out.c[i] = static_cast<uint8_t>((a.c[i] + b.c[i]) % p_);
    return out;
}

FieldElem FieldCtx::sub(const FieldElem& a, const FieldElem& b) const {
    require(a.ctx == this && b.ctx == this, Errc::invariant_violation, "context mismatch");
    FieldElem out = a;
    for (unsigned i = 0; i < deg_; ++i)
        out.c[i] = static_cast<uint8_t>((a.c[i] + p_ - b.c[i]) % p_);
    return out;
}

FieldElem FieldCtx::neg(const FieldElem& a) const {
    FieldElem out = a;
    for (unsigned i = 0; i < deg_; ++i) out.c[i] = static_cast<uint8_t>((p_ - a.c[i]) % p_);
    return out;
}

FieldElem FieldCtx::mul(const FieldElem& a, const FieldElem& b) const {
    require(a.ctx == this && b.ctx == this, Errc::invariant_violation, "context mismatch");
    std::vector<uint8_t> prod(2 * deg_ - 1, 0);
    for (unsigned i = 0; i < deg_; ++i) {
        if (a.c[i] == 0) continue;
        for (unsigned j = 0; j < deg_; ++j)
            prod[i + j] = static_cast<uint8_t>((prod[i + j] + a.c[i] * b.c[j]) % p_);
    }
    auto red = reduce_mod(std::move(prod));
    red.resize(deg_, 0);
    return FieldElem{this, std::move(red)};
}

FieldElem FieldCtx::inv(const FieldElem& a) const {
    require(!a.is_zero(), Errc::invariant_violation, "field inverse of zero");
    // extended Euclid in F_p[x] against the modulus
    PVec r0 = modulus_, r1 = a.c;
    pv_trim(r1);
    PVec s0{}, s1{1};
    while (!r1.empty()) {
        // quotient of r0 by r1
        PVec q;
        PVec rem = r0;
        pv_trim(rem);
        const uint8_t lead_inv = inv_table_[r1.back()];
        if (rem.size() >= r1.size()) {
            q.assign(rem.size() - r1.size() + 1, 0);
            while (rem.size() >= r1.size() && !rem.empty()) {
                const unsigned c = static_cast<unsigned>(rem.back()) * lead_inv % p_;
                const std::size_t shift = rem.size() - r1.size();
                q[shift] = static_cast<uint8_t>(c);
                for (std::size_t j = 0; j < r1.size(); ++j) {
                    unsigned sub = c * r1[j] % p_;
                    rem[shift + j] = static_cast<uint8_t>((rem[shift + j] + p_ - sub) % p_);
                }
                pv_trim(rem);
                if (rem.size() < r1.size()) break;
            }
        }
        PVec s2 = s0; // s2 = s0 - q*s1
        PVec qs = pv_mul(p_, q, s1);
        if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
        for (std::size_t i = 0; i < qs.size(); ++i)
            s2[i] = static_cast<uint8_t>((s2[i] + p_ - qs[i]) % p_);
        pv_trim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r0 is gcd (a nonzero constant since the modulus is irreducible)
    require(r0.size() == 1, Errc::invariant_violation, "modulus not irreducible");
    const uint8_t scale = inv_table_[r0[0]];
    PVec out = s0;
    for (auto& v : out) v = static_cast<uint8_t>(v * scale % p_);
    out = reduce_mod(std::move(out));
    out.resize(deg_, 0);
    return FieldElem{this, std::move(out)};
}

FieldElem FieldCtx::pow(const FieldElem& a, uint64_t k) const {
    FieldElem result = one();
    FieldElem base = a;
    while (k > 0) {
        if (k & 1) result = mul(result, base);
        base = mul(base, base);
        k >>= 1;
    }
    return result;
}

FieldElem FieldCtx::frobenius(const FieldElem& a, unsigned k) const {
    require(a.ctx == this, Errc::invariant_violation, "context mismatch");
    FieldElem out = a; // q^M-power is the identity, so reduce k mod M
    for (unsigned rep = 0; rep < k % M_; ++rep) out.c = frob_q_.apply(out.c);
    return out;
}

uint64_t FieldCtx::order() const {
    require(order_fits_u64_, Errc::degree_overflow, "field order does not fit in 64 bits");
    return order_limbs_[0];
}

uint64_t FieldCtx::elem_order(const FieldElem& a) const {
    require(!a.is_zero(), Errc::invariant_violation, "order of zero");
    // order divides q^M - 1; factor and strip
    uint64_t ord = order();
    uint64_t rem = ord;
    std::vector<uint64_t> primes;
    for (uint64_t d = 2; d * d <= rem; ++d) {
        if (rem % d == 0) {
            primes.push_back(d);
            while (rem % d == 0) rem /= d;
        }
    }
    if (rem > 1) primes.push_back(rem);
    for (uint64_t pr : primes) {
        while (ord % pr == 0 && pow(a, ord / pr).is_one()) ord /= pr;
    }
    return ord;
}

// --------------------------------------------------------------------- Poly

Poly::Poly(const FieldCtx& ctx, std::vector<FieldElem> coeffs)
    : ctx_(&ctx), coeffs_(std::move(coeffs)) {
    for (const auto& c : coeffs_)
        require(c.ctx == ctx_, Errc::invariant_violation, "poly coefficient context mismatch");
    trim();
}

Poly Poly::constant(const FieldElem& c) {
    Poly out(*c.ctx);
    if (!c.is_zero()) out.coeffs_ = {c};
    return out;
}

Poly Poly::monomial(const FieldCtx& ctx, unsigned degree, const FieldElem& c) {
    Poly out(ctx);
    if (c.is_zero()) return out;
    out.coeffs_.assign(degree + 1, ctx.zero());
    out.coeffs_[degree] = c;
    return out;
}

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FieldElem Poly::coeff(std::size_t i) const {
    if (i < coeffs_.size()) return coeffs_[i];
    return ctx_->zero();
}

const FieldElem& Poly::leading() const {
    require(!coeffs_.empty(), Errc::zero_input, "leading coefficient of zero polynomial");
    return coeffs_.back();
}

bool Poly::is_monic() const { return !coeffs_.empty() && coeffs_.back().is_one(); }

Poly Poly::make_monic() const {
    if (is_zero() || is_monic()) return *this;
    const FieldElem inv = ctx_->inv(coeffs_.back());
    Poly out(*ctx_);
    out.coeffs_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.coeffs_.push_back(c * inv);
    return out;
}

FieldElem Poly::eval(const FieldElem& at) const {
    FieldElem acc = ctx_->zero();
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * at + coeffs_[i];
    return acc;
}

Poly Poly::substitute_power(unsigned k) const {
    Poly out(*ctx_);
    if (is_zero()) return out;
    out.coeffs_.assign(static_cast<std::size_t>(degree()) * k + 1, ctx_->zero());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i * k] = coeffs_[i];
    out.trim();
    return out;
}

Poly Poly::frobenius_coeffs(unsigned k) const {
    Poly out(*ctx_);
    out.coeffs_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.coeffs_.push_back(ctx_->frobenius(c, k));
    out.trim();
    return out;
}

Poly operator+(const Poly& a, const Poly& b) {
    const FieldCtx& ctx = a.ctx();
    std::vector<FieldElem> out;
    const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(a.coeff(i) + b.coeff(i));
    return Poly(ctx, std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) {
    const FieldCtx& ctx = a.ctx();
    std::vector<FieldElem> out;
    const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(a.coeff(i) - b.coeff(i));
    return Poly(ctx, std::move(out));
}

Poly operator*(const Poly& a, const Poly& b) {
    const FieldCtx& ctx = a.ctx();
    if (a.is_zero() || b.is_zero()) return Poly(ctx);
    const std::size_t na = a.coeffs().size(), nb = b.coeffs().size();
    if (ctx.deg() == 1) {
        // prime-field coefficients: one flat convolution
        const unsigned p = ctx.p();
        std::vector<uint32_t> acc(na + nb - 1, 0);
        for (std::size_t i = 0; i < na; ++i) {
            const unsigned ai = a.coeffs()[i].c[0];
            if (ai == 0) continue;
            for (std::size_t j = 0; j < nb; ++j) acc[i + j] += ai * b.coeffs()[j].c[0];
        }
        std::vector<FieldElem> out;
        out.reserve(acc.size());
        for (uint32_t v : acc) out.push_back(FieldElem{&ctx, {static_cast<uint8_t>(v % p)}});
        return Poly(ctx, std::move(out));
    }
    std::vector<FieldElem> out(na + nb - 1, ctx.zero());
    for (std::size_t i = 0; i < na; ++i) {
        if (a.coeffs()[i].is_zero()) continue;
        for (std::size_t j = 0; j < nb; ++j)
            out[i + j] = out[i + j] + a.coeffs()[i] * b.coeffs()[j];
    }
    return Poly(ctx, std::move(out));
}

Poly operator*(const FieldElem& c, const Poly& a) { return Poly::constant(c) * a; }

Poly operator-(const Poly& a) {
    std::vector<FieldElem> out;
    out.reserve(a.coeffs().size());
    for (const auto& c : a.coeffs()) out.push_back(-c);
    return Poly(a.ctx(), std::move(out));
}

PolyDivMod poly_divmod(const Poly& a, const Poly& b) {
    require(!b.is_zero(), Errc::zero_input, "division by zero polynomial");
    const FieldCtx& ctx = a.ctx();
    if (a.degree() < b.degree()) return {Poly(ctx), a};
    std::vector<FieldElem> rem(a.coeffs());
    const std::size_t db = b.coeffs().size() - 1;
    std::vector<FieldElem> quot(rem.size() - db, ctx.zero());
    const FieldElem lead_inv = ctx.inv(b.leading());
    for (std::size_t i = rem.size(); i-- > db;) {
        const FieldElem c = rem[i] * lead_inv;
        if (c.is_zero()) continue;
        const std::size_t shift = i - db;
        quot[shift] = c;
        for (std::size_t j = 0; j <= db; ++j)
            rem[shift + j] = rem[shift + j] - c * b.coeffs()[j];
    }
    return {Poly(ctx, std::move(quot)), Poly(ctx, std::move(rem))};
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = poly_divmod(x, y).rem;
        x = std::move(y);
        y = std::move(r);
    }
    return x.make_monic();
}

Poly poly_powmod(const Poly& base, uint64_t exp, const Poly& mod) {
    const FieldCtx& ctx = base.ctx();
    Poly result = Poly::constant(ctx.one());
    Poly b = poly_divmod(base, mod).rem;
    while (exp > 0) {
        if (exp & 1) result = poly_divmod(result * b, mod).rem;
        b = poly_divmod(b * b, mod).rem;
        exp >>= 1;
    }
    return result;
}

Poly poly_powmod_limbs(const Poly& base, const std::vector<uint64_t>& exp, const Poly& mod) {
    const FieldCtx& ctx = base.ctx();
    Poly result = Poly::constant(ctx.one());
    const Poly b = poly_divmod(base, mod).rem;
    bool started = false;
    for (std::size_t li = exp.size(); li-- > 0;) {
        for (int bit = 63; bit >= 0; --bit) {
            if (!started && ((exp[li] >> bit) & 1) == 0) continue;
            if (started) result = poly_divmod(result * result, mod).rem;
            if ((exp[li] >> bit) & 1) {
                if (started) result = poly_divmod(result * b, mod).rem;
                else result = b;
                started = true;
            }
        }
    }
    if (!started) return Poly::constant(ctx.one());
    return result;
}

namespace {

Poly poly_x(const FieldCtx& ctx) { return Poly::monomial(ctx, 1, ctx.one()); }

// h -> h^p mod f via coefficient p-powers and substitution of x^p
Poly poly_pth_power_mod(const Poly& h, const Poly& f) {
    const FieldCtx& ctx = h.ctx();
    const Poly xp = poly_powmod(poly_x(ctx), ctx.p(), f);
    Poly acc(ctx);
    for (std::size_t i = h.coeffs().size(); i-- > 0;) {
        acc = poly_divmod(acc * xp, f).rem;
        const FieldElem cp = ctx.pow(h.coeffs()[i], ctx.p());
        acc = acc + Poly::constant(cp);
    }
    return acc;
}

// splits a monic product of distinct linear factors into roots
void split_linear_product(const Poly& g, std::vector<FieldElem>& roots) {
    const FieldCtx& ctx = g.ctx();
    if (g.degree() <= 0) return;
    if (g.degree() == 1) {
        roots.push_back(-(g.coeff(0) / g.coeff(1)));
        return;
    }
    const unsigned p = ctx.p();
    for (uint64_t i = 0;; ++i) {
        const FieldElem a = ctx.from_index(i);
        Poly w(ctx);
        if (p == 2) {
            // additive trace of a*x splits F_2-towers
            Poly ax = Poly::monomial(ctx, 1, a);
            Poly term = poly_divmod(ax, g).rem;
            for (unsigned j = 0; j < ctx.deg(); ++j) {
                w = w + term;
                term = poly_pth_power_mod(term, g);
            }
        } else {
            const Poly shifted = poly_x(ctx) + Poly::constant(a);
            auto exp = ctx.order_limbs();
            limbs_shr1(exp);
            w = poly_powmod_limbs(shifted, exp, g) - Poly::constant(ctx.one());
        }
        const Poly u = poly_gcd(w, g);
        if (u.degree() > 0 && u.degree() < g.degree()) {
            split_linear_product(u, roots);
            split_linear_product(poly_divmod(g, u).quot.make_monic(), roots);
            return;
        }
    }
}

} // namespace

std::vector<FieldElem> poly_roots(const Poly& f) {
    require(!f.is_zero(), Errc::zero_input, "roots of the zero polynomial");
    const FieldCtx& ctx = f.ctx();
    std::vector<FieldElem> roots;
    Poly g = f.make_monic();
    // zero roots
    while (g.degree() > 0 && g.coeff(0).is_zero()) {
        roots.push_back(ctx.zero());
        std::vector<FieldElem> shifted(g.coeffs().begin() + 1, g.coeffs().end());
        g = Poly(ctx, std::move(shifted));
    }
    if (g.degree() > 0) {
        // gcd with x^|F| - x isolates the split part
        Poly xq = poly_x(ctx);
        for (unsigned j = 0; j < ctx.deg(); ++j) xq = poly_pth_power_mod(xq, g);
        Poly lin = poly_gcd(xq - poly_x(ctx), g);
        split_linear_product(lin, roots);
    }
    std::sort(roots.begin(), roots.end(),
              [](const FieldElem& a, const FieldElem& b) { return lex_less(a, b); });
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

bool poly_is_irreducible(const Poly& f) {
    require(!f.is_zero(), Errc::zero_input, "irreducibility of zero");
    const FieldCtx& ctx = f.ctx();
    const int n = f.degree();
    if (n == 0) return false;
    if (n == 1) return true;
    const Poly g = f.make_monic();
    // x^(q^k) mod g chain over the coefficient field, q = |ctx|
    std::vector<Poly> chain;
    Poly h = poly_x(ctx);
    for (int k = 0; k < n; ++k) {
        for (unsigned j = 0; j < ctx.deg(); ++j) h = poly_pth_power_mod(h, g);
        chain.push_back(h);
    }
    if (!(chain[n - 1] == poly_x(ctx))) return false;
    for (int l = 2; l <= n; ++l) {
        if (n % l != 0) continue;
        bool prime = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0) { prime = false; break; }
        if (!prime) continue;
        const Poly diff = chain[n / l - 1] - poly_x(ctx);
        if (poly_gcd(diff, g).degree() != 0) return false;
    }
    return true;
}

// --------------------------------------------------------------- embeddings

namespace {

struct EmbeddingData {
    FpMat fwd; // deg_dst x deg_src over F_p
    std::unique_ptr<FpSolver> preimage;
};

struct EmbeddingRegistry {
    std::mutex mu;
    std::map<std::pair<const FieldCtx*, const FieldCtx*>, EmbeddingData> table;

    static EmbeddingRegistry& instance() {
        static EmbeddingRegistry reg;
        return reg;
    }
};

const EmbeddingData& embedding_for(const FieldCtx& src, const FieldCtx& dst) {
    auto& reg = EmbeddingRegistry::instance();
    std::lock_guard<std::mutex> lock(reg.mu);
    auto key = std::make_pair(&src, &dst);
    auto it = reg.table.find(key);
    if (it != reg.table.end()) return it->second;

    require(src.p() == dst.p() && src.e() == dst.e(), Errc::invariant_violation,
            "embedding requires matching base field");
    require(dst.M() % src.M() == 0, Errc::invariant_violation,
            "embedding requires divisible extension degrees");

    // roots of the source modulus inside dst, smallest-index first
    std::vector<FieldElem> cf;
    for (uint8_t cv : src.modulus()) cf.push_back(dst.from_pint(cv));
    const Poly src_mod_in_dst(dst, std::move(cf));

    // all roots lie in the subfield of p^deg(src) elements; when that is small
    // enough, enumerating the fixed space of frob_p^deg(src) avoids generic
    // factorization inside the big field
    std::vector<FieldElem> roots;
    uint64_t subfield_size = 1;
    bool small_subfield = true;
    for (unsigned i = 0; i < src.deg() && small_subfield; ++i) {
        subfield_size *= src.p();
        if (subfield_size > 65536) small_subfield = false;
    }
    if (small_subfield) {
        FpMat fr = dst.frob_p_matrix();
        FpMat pow = fr;
        for (unsigned i = 1; i < src.deg(); ++i) pow = pow.mul(fr);
        for (unsigned i = 0; i < dst.deg(); ++i)
            pow.at(i, i) = static_cast<uint8_t>((pow.at(i, i) + dst.p() - 1) % dst.p());
        FpSolver fixed(std::move(pow));
        const auto& basis = fixed.nullspace();
        std::vector<uint8_t> digits(basis.size(), 0);
        for (uint64_t counter = 0; counter < subfield_size; ++counter) {
            uint64_t v = counter;
            std::vector<uint8_t> coords(dst.deg(), 0);
            for (std::size_t i = 0; i < basis.size(); ++i) {
                const unsigned d = static_cast<unsigned>(v % dst.p());
                v /= dst.p();
                if (d == 0) continue;
                for (unsigned r = 0; r < dst.deg(); ++r)
                    coords[r] = static_cast<uint8_t>((coords[r] + d * basis[i][r]) % dst.p());
            }
            FieldElem cand{&dst, std::move(coords)};
            if (src_mod_in_dst.eval(cand).is_zero()) roots.push_back(std::move(cand));
        }
        std::sort(roots.begin(), roots.end(),
                  [](const FieldElem& a, const FieldElem& b) { return lex_less(a, b); });
    } else {
        roots = poly_roots(src_mod_in_dst);
    }
    require(!roots.empty(), Errc::invariant_violation, "source modulus has no root in target");

    auto matrix_for_root = [&](const FieldElem& rho) {
        FpMat m(src.p(), dst.deg(), src.deg());
        FieldElem pw = dst.one();
        for (unsigned j = 0; j < src.deg(); ++j) {
            for (unsigned i = 0; i < dst.deg(); ++i) m.at(i, j) = pw.c[i];
            pw = pw * rho;
        }
        return m;
    };

    FpMat chosen;
    bool found = false;
    for (const auto& rho : roots) {
        FpMat m = matrix_for_root(rho);
        if (src.e() > 1) {
            // require compatibility with the canonical F_q generators
            const auto img = m.apply(src.fq_generator().c);
            if (img != dst.fq_generator().c) continue;
        }
        chosen = std::move(m);
        found = true;
        break;
    }
    require(found, Errc::invariant_violation, "no F_q-compatible embedding");

    EmbeddingData data{std::move(chosen), nullptr};
    data.preimage = std::make_unique<FpSolver>(data.fwd);
    return reg.table.emplace(key, std::move(data)).first->second;
}

} // namespace

FieldElem embed(const FieldElem& x, const FieldCtx& dst) {
    const FieldCtx& src = *x.ctx;
    if (&src == &dst) return x;
    const auto& emb = embedding_for(src, dst);
    return FieldElem{&dst, emb.fwd.apply(x.c)};
}

FieldElem to_subfield(const FieldElem& x, const FieldCtx& dst) {
    const FieldCtx& src = *x.ctx;
    if (&src == &dst) return x;
    const auto& emb = embedding_for(dst, src); // forward map dst -> src
    auto pre = emb.preimage->solve(x.c);
    if (!pre) fail(Errc::not_in_subfield, "element is not in the requested subfield");
    return FieldElem{&dst, *pre};
}

// -------------------------------------------------------------------- FqMat

FqMat::FqMat(const FieldCtx& ctx, std::size_t n)
    : ctx_(&ctx), n_(n), a_(n * n, ctx.zero()) {}

FqMat FqMat::identity(const FieldCtx& ctx, std::size_t n) {
    FqMat m(ctx, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ctx.one();
    return m;
}

FqMat FqMat::mul(const FqMat& rhs) const {
    require(n_ == rhs.n_ && ctx_ == rhs.ctx_, Errc::invariant_violation, "FqMat::mul shape");
    FqMat out(*ctx_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const FieldElem& c = at(i, k);
            if (c.is_zero()) continue;
            for (std::size_t j = 0; j < n_; ++j)
                out.at(i, j) = out.at(i, j) + c * rhs.at(k, j);
        }
    return out;
}

FqMat FqMat::add(const FqMat& rhs) const {
    FqMat out(*ctx_, n_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
    return out;
}

FqMat FqMat::sub(const FqMat& rhs) const {
    FqMat out(*ctx_, n_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
    return out;
}

FieldElem FqMat::det() const {
    // Gaussian elimination on a copy
    FqMat m = *this;
    FieldElem d = ctx_->one();
    for (std::size_t col = 0, row = 0; col < n_ && row < n_; ++col, ++row) {
        std::size_t piv = row;
        while (piv < n_ && m.at(piv, col).is_zero()) ++piv;
        if (piv == n_) return ctx_->zero();
        if (piv != row) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(m.at(piv, j), m.at(row, j));
            d = -d;
        }
        d = d * m.at(row, col);
        const FieldElem inv = ctx_->inv(m.at(row, col));
        for (std::size_t i = row + 1; i < n_; ++i) {
            const FieldElem f = m.at(i, col) * inv;
            if (f.is_zero()) continue;
            for (std::size_t j = col; j < n_; ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
    }
    return d;
}

FqMat FqMat::inverse() const {
    FqMat m = *this;
    FqMat inv = identity(*ctx_, n_);
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t piv = col;
        while (piv < n_ && m.at(piv, col).is_zero()) ++piv;
        if (piv == n_) fail(Errc::singular_constant_term, "matrix not invertible");
        if (piv != col)
            for (std::size_t j = 0; j < n_; ++j) {
                std::swap(m.at(piv, j), m.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        const FieldElem s = ctx_->inv(m.at(col, col));
        for (std::size_t j = 0; j < n_; ++j) {
            m.at(col, j) = m.at(col, j) * s;
            inv.at(col, j) = inv.at(col, j) * s;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == col) continue;
            const FieldElem f = m.at(i, col);
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                m.at(i, j) = m.at(i, j) - f * m.at(col, j);
                inv.at(i, j) = inv.at(i, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

FqMat FqMat::frobenius(unsigned k) const {
    FqMat out(*ctx_, n_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = ctx_->frobenius(a_[i], k);
    return out;
}

FqMat FqMat::embed_into(const FieldCtx& dst) const {
    FqMat out(dst, n_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = embed(a_[i], dst);
    return out;
}

FqMat FqMat::to_subfield_mat(const FieldCtx& dst) const {
    FqMat out(dst, n_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = to_subfield(a_[i], dst);
    return out;
}

bool FqMat::is_identity() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            if (i == j && !at(i, j).is_one()) return false;
            if (i != j && !at(i, j).is_zero()) return false;
        }
    return true;
}

Poly FqMat::charpoly() const {
    // det(X*I - A) by Leibniz expansion over F_q[X]; n <= 4 keeps this cheap
    const FieldCtx& ctx = *ctx_;
    std::vector<std::size_t> perm(n_);
    for (std::size_t i = 0; i < n_; ++i) perm[i] = i;
    Poly acc(ctx);
    const Poly x = Poly::monomial(ctx, 1, ctx.one());
    do {
        // sign of permutation
        int inversions = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Poly term = Poly::constant(ctx.one());
        for (std::size_t i = 0; i < n_; ++i) {
            Poly entry = Poly::constant(-at(i, perm[i]));
            if (i == perm[i]) entry = x + entry;
            term = term * entry;
        }
        if (inversions % 2 == 1) term = -term;
        acc = acc + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

std::string FqMat::key() const {
    std::string k;
    k.reserve(a_.size() * (ctx_->deg() + 1));
    for (const auto& el : a_) {
        for (uint8_t c : el.c) k.push_back(static_cast<char>(c));
        k.push_back('|');
    }
    return k;
}

} // namespace dgw
