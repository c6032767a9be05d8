#pragma once

#include <string>

#include "dgw/tseries.hpp"

namespace dgw {

/// Generating set for a finite matrix group over F_q.
struct FqMatrixGroupGens {
    const FieldCtx* ctx;
    std::size_t n;
    std::vector<FqMat> generators;
    bool special_linear = false; // when set, generators must have det 1

    FqMatrixGroupGens(const FieldCtx& c, std::size_t n_, std::vector<FqMat> gens,
                      bool sl = false);
};

/// Breadth-first closure under multiplication (a subgroup, by finiteness),
/// in deterministic discovery order. Errc::cap_exceeded past `cap` elements.
std::vector<FqMat> group_closure(const FqMatrixGroupGens& gens, std::size_t cap = 100000);

/// All elements of the ambient set commuting with g.
std::vector<FqMat> centralizer(const FqMat& g, const std::vector<FqMat>& ambient);

/// The full group SL_2(F_q) as an element list (cached per context).
const std::vector<FqMat>& enumerate_sl2(const FieldCtx& ctx);

uint64_t sl2_order(const FieldCtx& ctx); // q(q^2-1)

/// Diagonal torus series element diag(p_1, ..., p_{n-1}, (p_1...p_{n-1})^-1)
/// together with the unique-factorization density certificate: with the p_j
/// distinct nonconstant irreducibles of constant term 1, no nontrivial
/// diagonal-torus character evaluates to 1 on the element.
struct TorusElement {
    TruncSeriesMatrix g;
    bool density_certified;
};

TorusElement torus_element(const FieldCtx& ctx, std::size_t n, const std::vector<Poly>& pj,
                           unsigned prec);

/// The polynomials 1 + zeta^j t, j = 1..r.
std::vector<Poly> standard_torus_polys(const FieldCtx& ctx, const FieldElem& zeta, unsigned r);

enum class Verdict { full, proper, inconclusive };

const char* verdict_name(Verdict v);

/// Subgroup oracle for n = 2: "full" iff every subgroup of SL_2(F_q) that
/// realizes each listed characteristic polynomial is the whole group. The
/// subgroup lattice is enumerated once per context from all closures of
/// one- and two-element generating sets. Errc::cap_exceeded when q is past
/// the enumeration budget (q <= 9).
Verdict charpoly_subgroup_oracle(const FieldCtx& ctx, const std::vector<Poly>& charpolys);

/// Trace sets of all proper subgroups, exposed for cross-validation tests.
std::vector<std::vector<uint64_t>> proper_subgroup_trace_sets(const FieldCtx& ctx);

/// Multiplicative order of a group element, capped.
uint64_t matrix_order(const FqMat& g, uint64_t cap = 10000);

} // namespace dgw
