#include "dgw/function_field.hpp"

#include <algorithm>

namespace dgw {

RatFunc::RatFunc(const FieldCtx& ctx) : num_(ctx), den_(Poly::constant(ctx.one())) {}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    require(!den_.is_zero(), Errc::zero_input, "rational function with zero denominator");
    normalize();
}

RatFunc RatFunc::from_poly(Poly p) {
    const FieldCtx& ctx = p.ctx();
    return RatFunc(std::move(p), Poly::constant(ctx.one()));
}

RatFunc RatFunc::constant(const FieldElem& c) { return from_poly(Poly::constant(c)); }

void RatFunc::normalize() {
    const FieldCtx& ctx = num_.ctx();
    if (num_.is_zero()) {
        den_ = Poly::constant(ctx.one());
        return;
    }
    const Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = poly_divmod(num_, g).quot;
        den_ = poly_divmod(den_, g).quot;
    }
    const FieldElem lead_inv = ctx.inv(den_.leading());
    if (!den_.leading().is_one()) {
        num_ = lead_inv * num_;
        den_ = lead_inv * den_;
    }
}

RatFunc RatFunc::inv() const {
    require(!is_zero(), Errc::zero_input, "inverse of the zero function");
    return RatFunc(den_, num_);
}

RatFunc RatFunc::frobenius(unsigned k) const {
    const uint64_t q = num_.ctx().q();
    uint64_t power = 1;
    for (unsigned i = 0; i < k; ++i) {
        require(power <= UINT64_MAX / q, Errc::degree_overflow, "frobenius power overflows");
        power *= q;
    }
    return RatFunc(num_.substitute_power(static_cast<unsigned>(power)),
                   den_.substitute_power(static_cast<unsigned>(power)));
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num() * b.den() - b.num() * a.den(), a.den() * b.den());
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num() * b.num(), a.den() * b.den());
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inv(); }

RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num(), a.den()); }

// ----------------------------------------------------------------- PlaceFin

PlaceFin::PlaceFin(Poly pi) : pi_(std::move(pi)) {
    require(pi_.degree() >= 1, Errc::invariant_violation, "place polynomial must be nonconstant");
    require(pi_.is_monic(), Errc::invariant_violation, "place polynomial must be monic");
    require(poly_is_irreducible(pi_), Errc::not_irreducible, "place polynomial is reducible");
    d_ = static_cast<unsigned>(pi_.degree());
    const FieldCtx& base = pi_.ctx();
    residue_ = &FieldCtx::get(base.p(), base.e(), base.M() * d_);
    // smallest-index root of pi in the residue field
    std::vector<FieldElem> cf;
    cf.reserve(pi_.coeffs().size());
    for (const auto& c : pi_.coeffs()) cf.push_back(embed(c, *residue_));
    const auto roots = poly_roots(Poly(*residue_, std::move(cf)));
    require(roots.size() == d_, Errc::invariant_violation, "place polynomial must split");
    root_ = roots.front();
}

std::vector<PlaceFin> enumerate_places(const FieldCtx& base, unsigned d) {
    require(d >= 1, Errc::invariant_violation, "place degree must be positive");
    std::vector<PlaceFin> out;
    uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) {
        require(count <= UINT64_MAX / base.q(), Errc::degree_overflow, "place scan too large");
        count *= base.q();
    }
    for (uint64_t k = 0; k < count; ++k) {
        std::vector<FieldElem> cf;
        cf.reserve(d + 1);
        uint64_t v = k;
        for (unsigned i = 0; i < d; ++i) {
            cf.push_back(base.from_index(v % base.q()));
            v /= base.q();
        }
        cf.push_back(base.one());
        Poly f(base, std::move(cf));
        if (poly_is_irreducible(f)) out.emplace_back(std::move(f));
    }
    return out;
}

namespace {

// multiplicity of pi in a nonzero polynomial
unsigned pi_multiplicity(const Poly& pi, Poly f) {
    unsigned mult = 0;
    while (true) {
        auto [quot, rem] = poly_divmod(f, pi);
        if (!rem.is_zero()) return mult;
        ++mult;
        f = std::move(quot);
        if (f.is_zero()) return mult; // unreachable for nonzero input
    }
}

} // namespace

int64_t valuation_at(const PlaceFin& place, const RatFunc& f) {
    if (f.is_zero()) return kInfValuation;
    const int64_t vn = pi_multiplicity(place.pi(), f.num());
    const int64_t vd = pi_multiplicity(place.pi(), f.den());
    return vn - vd;
}

FieldElem reduce_at(const PlaceFin& place, const RatFunc& f) {
    const FieldCtx& res = place.residue_ctx();
    if (f.is_zero()) return res.zero();
    // canonical form has coprime num/den, so v >= 0 iff pi does not divide den
    if (!poly_divmod(f.den(), place.pi()).rem.is_zero()) {
        auto eval_embedded = [&](const Poly& p) {
            FieldElem acc = res.zero();
            for (std::size_t i = p.coeffs().size(); i-- > 0;)
                acc = acc * place.root() + embed(p.coeffs()[i], res);
            return acc;
        };
        const FieldElem dv = eval_embedded(f.den());
        return eval_embedded(f.num()) / dv;
    }
    fail(Errc::not_integral, "negative valuation at place");
}

bool TPoly::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(),
                       [](const RatFunc& c) { return c.is_zero(); });
}

int64_t gauss_valuation(const PlaceFin& place, const TPoly& g) {
    require(!g.coeffs.empty() && !g.is_zero(), Errc::zero_input,
            "Gauss valuation of the zero polynomial");
    int64_t v = kInfValuation;
    for (const auto& c : g.coeffs) {
        if (c.is_zero()) continue;
        v = std::min(v, valuation_at(place, c));
    }
    return v;
}

} // namespace dgw
