#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace decisive {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);

// Always `num/den`, also for integers.
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

// Decimal rounded half away from zero to `places` digits.
std::string to_decimal(const Rational& r, int places = 6);

// Accepts `n`, `-n`, `n/d`.
Rational parse_rational(std::string_view text);

using Exponents = std::vector<std::uint32_t>;

// Multivariate polynomial with integer coefficients over a named variable list.
// Weights use only non-negative coefficients; signed ones are needed for the
// Hilbert construction.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<std::string> variables);

    static Polynomial constant(const Integer& c, std::vector<std::string> variables = {});
    static Polynomial variable(std::size_t index, std::vector<std::string> variables);

    const std::vector<std::string>& variables() const { return variables_; }
    std::size_t arity() const { return variables_.size(); }
    const std::map<Exponents, Integer>& terms() const { return terms_; }

    void add_term(const Exponents& e, const Integer& c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool has_nonnegative_coefficients() const;
    Integer constant_term() const;
    unsigned degree() const;

    // Univariate (or constant) polynomials only.
    Integer coefficient(unsigned i) const;

    Integer evaluate(std::span<const std::uint64_t> values) const;
    Integer evaluate_at(std::uint64_t x) const;

    // Same terms over another variable list of equal arity.
    Polynomial renamed(std::vector<std::string> variables) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial scaled(const Integer& c) const;
    Polynomial& operator+=(const Polynomial& other);

    bool operator==(const Polynomial& other) const;

    std::string to_string() const;

private:
    void check_compatible(const Polynomial& other) const;

    std::vector<std::string> variables_;
    std::map<Exponents, Integer> terms_;
};

// Grammar: sums and differences of products of naturals, variables,
// parenthesized subexpressions, each optionally raised to `^ NAT`.
// ParseError positions are 1-based within `text`.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables);

enum class LeadingSide { Equal, Dec, Inc };

struct LeadingComparison {
    unsigned d = 0;        // degree of dec
    unsigned d_prime = 0;  // degree of inc
    std::optional<unsigned> i0;
    LeadingSide larger = LeadingSide::Equal;
    std::optional<Rational> alpha;  // (a'_{d-1} - a_{d-1}) / a_d when d = d' and i0 = d-1
};

LeadingComparison compare_leading(const Polynomial& dec, const Polynomial& inc);

// p >= 1 on every point dominating `lower_bound`. Only meaningful for
// non-negative coefficients; otherwise false.
bool positivity_check(const Polynomial& p, std::span<const std::uint64_t> lower_bound);

}  // namespace decisive
