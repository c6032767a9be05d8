#pragma once

#include <stdexcept>
#include <string>

namespace dgw {

/// Error conditions surfaced by the library. Each value maps to one failure
/// mode of a public operation; the CLI translates them into exit codes.
enum class Errc {
    not_prime,
    degree_overflow,
    inconsistent,
    not_integral,
    zero_input,
    non_unit_denominator,
    singular_constant_term,
    singular_reduction,
    splitting_degree_exceeded,
    determinant_not_phi_fixed,
    phi_fixedness_violated,
    centralizer_not_torus,
    no_rational_descent,
    not_irreducible,
    not_distinct,
    constant_term_not_one,
    not_primitive_root,
    eigenvalue_collision,
    bad_alpha,
    conjugation_failed,
    cap_exceeded,
    budget_exhausted,
    degree_not_one,
    not_in_subfield,
    parse_error,
    invariant_violation,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace dgw
