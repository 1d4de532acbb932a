#include "decisive/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "decisive/error.hpp"

namespace decisive {

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw InputError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_decimal(const Rational& r, int places) {
    Integer scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    Integer num = abs(r.get_num()) * scale * 2 + r.get_den();
    Integer den = r.get_den() * 2;
    Integer scaled = num / den;
    std::string digits = scaled.get_str();
    if (static_cast<int>(digits.size()) <= places) {
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    std::string out = digits.substr(0, digits.size() - static_cast<std::size_t>(places));
    if (places > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(places));
    if (sgn(r) < 0 && scaled != 0) out.insert(0, "-");
    return out;
}

Rational parse_rational(std::string_view text) {
    auto trimmed = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) {
        std::string str(s);
        if (str.empty()) throw InputError("malformed rational");
        std::size_t start = (str[0] == '-') ? 1 : 0;
        if (start == str.size()) throw InputError("malformed rational");
        for (std::size_t i = start; i < str.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(str[i]))) {
                throw InputError("malformed rational '" + str + "'");
            }
        }
        return Integer(str);
    };
    text = trimmed(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    Integer num = parse_int(trimmed(text.substr(0, slash)));
    std::string_view den_text = trimmed(text.substr(slash + 1));
    if (!den_text.empty() && den_text[0] == '-') throw InputError("negative denominator");
    return make_rational(num, parse_int(den_text));
}

Polynomial::Polynomial(std::vector<std::string> variables) : variables_(std::move(variables)) {}

Polynomial Polynomial::constant(const Integer& c, std::vector<std::string> variables) {
    Polynomial p(std::move(variables));
    p.add_term(Exponents(p.arity(), 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t index, std::vector<std::string> variables) {
    if (index >= variables.size()) throw InputError("variable index out of range");
    Polynomial p(std::move(variables));
    Exponents e(p.arity(), 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
}

void Polynomial::add_term(const Exponents& e, const Integer& c) {
    if (e.size() != arity()) throw InputError("exponent vector arity mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool Polynomial::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 &&
            std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                        [](std::uint32_t x) { return x == 0; }));
}

bool Polynomial::has_nonnegative_coefficients() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

Integer Polynomial::constant_term() const {
    auto it = terms_.find(Exponents(arity(), 0));
    return it == terms_.end() ? Integer(0) : it->second;
}

unsigned Polynomial::degree() const {
    unsigned best = 0;
    for (const auto& [e, c] : terms_) {
        best = std::max(best, std::accumulate(e.begin(), e.end(), 0u));
    }
    return best;
}

Integer Polynomial::coefficient(unsigned i) const {
    if (arity() > 1) throw InputError("coefficient extraction needs a univariate polynomial");
    if (arity() == 0) return i == 0 ? constant_term() : Integer(0);
    auto it = terms_.find(Exponents{i});
    return it == terms_.end() ? Integer(0) : it->second;
}

Integer Polynomial::evaluate(std::span<const std::uint64_t> values) const {
    if (values.size() != arity()) {
        throw InputError("valuation binds " + std::to_string(values.size()) + " of " +
                         std::to_string(arity()) + " variables");
    }
    Integer total = 0;
    Integer term;
    Integer power;
    for (const auto& [e, c] : terms_) {
        term = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(values[i]), e[i]);
            term *= power;
        }
        total += term;
    }
    return total;
}

Integer Polynomial::evaluate_at(std::uint64_t x) const {
    std::vector<std::uint64_t> v(arity(), x);
    return evaluate(v);
}

Polynomial Polynomial::renamed(std::vector<std::string> variables) const {
    if (variables.size() != arity()) throw InputError("renaming changes arity");
    Polynomial p(std::move(variables));
    p.terms_ = terms_;
    return p;
}

void Polynomial::check_compatible(const Polynomial& other) const {
    if (variables_ != other.variables_) {
        throw InputError("polynomials over different variable lists");
    }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    Polynomial out = *this;
    out += other;
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    check_compatible(other);
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    check_compatible(other);
    Polynomial out(variables_);
    for (const auto& [e1, c1] : terms_) {
        for (const auto& [e2, c2] : other.terms_) {
            Exponents e(e1.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
            out.add_term(e, c1 * c2);
        }
    }
    return out;
}

Polynomial Polynomial::scaled(const Integer& c) const {
    Polynomial out(variables_);
    if (c == 0) return out;
    for (const auto& [e, coef] : terms_) out.terms_.emplace(e, coef * c);
    return out;
}

bool Polynomial::operator==(const Polynomial& other) const {
    return variables_ == other.variables_ && terms_ == other.terms_;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exponents, Integer>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        unsigned da = std::accumulate(a.first.begin(), a.first.end(), 0u);
        unsigned db = std::accumulate(b.first.begin(), b.first.end(), 0u);
        if (da != db) return da > db;
        return a.first > b.first;
    });
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : ordered) {
        Integer magnitude = abs(c);
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        std::vector<std::string> factors;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            factors.push_back(e[i] == 1 ? variables_[i]
                                        : variables_[i] + "^" + std::to_string(e[i]));
        }
        if (magnitude != 1 || factors.empty()) factors.insert(factors.begin(), magnitude.get_str());
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i > 0) out << "*";
            out << factors[i];
        }
    }
    return out.str();
}

namespace {

class PolynomialParser {
public:
    PolynomialParser(std::string_view text, const std::vector<std::string>& variables)
        : text_(text), variables_(variables) {}

    Polynomial parse() {
        skip_space();
        if (at_end()) fail("empty polynomial");
        Polynomial p = expression();
        skip_space();
        if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return p;
    }

private:
    Polynomial expression() {
        skip_space();
        bool negate = false;
        if (peek() == '-') {
            ++pos_;
            negate = true;
        }
        Polynomial acc = term();
        if (negate) acc = acc.scaled(-1);
        for (;;) {
            skip_space();
            char c = peek();
            if (c != '+' && c != '-') return acc;
            ++pos_;
            Polynomial rhs = term();
            acc += (c == '-') ? rhs.scaled(-1) : rhs;
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        for (;;) {
            skip_space();
            if (peek() != '*') return acc;
            ++pos_;
            acc = acc * factor();
        }
    }

    Polynomial factor() {
        skip_space();
        Polynomial base(variables_);
        char c = peek();
        if (c == '(') {
            ++pos_;
            base = expression();
            skip_space();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            base = Polynomial::constant(Integer(natural()), variables_);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            std::string name = identifier();
            auto it = std::find(variables_.begin(), variables_.end(), name);
            if (it == variables_.end()) {
                pos_ = start;
                fail("unknown variable '" + name + "'");
            }
            base = Polynomial::variable(static_cast<std::size_t>(it - variables_.begin()), variables_);
        } else if (at_end()) {
            fail("unexpected end of polynomial");
        } else {
            fail(std::string("unexpected '") + c + "'");
        }
        skip_space();
        if (peek() == '^') {
            ++pos_;
            skip_space();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
            std::size_t start = pos_;
            std::string digits = natural();
            if (digits.size() > 4) {
                pos_ = start;
                fail("exponent too large");
            }
            unsigned n = static_cast<unsigned>(std::stoul(digits));
            Polynomial result = Polynomial::constant(1, variables_);
            for (unsigned i = 0; i < n; ++i) result = result * base;
            return result;
        }
        return base;
    }

    std::string natural() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    [[noreturn]] void fail(const std::string& message) const {
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(line, column, message);
    }

    std::string_view text_;
    const std::vector<std::string>& variables_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables) {
    return PolynomialParser(text, variables).parse();
}

LeadingComparison compare_leading(const Polynomial& dec, const Polynomial& inc) {
    if (dec.arity() > 1 || inc.arity() > 1) {
        throw InputError("leading-coefficient comparison needs univariate polynomials");
    }
    if (dec.arity() == 1 && inc.arity() == 1 && dec.variables() != inc.variables()) {
        throw InputError("polynomials use different variables");
    }
    LeadingComparison out;
    out.d = dec.degree();
    out.d_prime = inc.degree();
    for (unsigned i = std::max(out.d, out.d_prime) + 1; i-- > 0;) {
        Integer a = dec.coefficient(i);
        Integer b = inc.coefficient(i);
        if (a != b) {
            out.i0 = i;
            out.larger = a > b ? LeadingSide::Dec : LeadingSide::Inc;
            break;
        }
    }
    if (out.i0 && out.d == out.d_prime && out.d >= 1 && *out.i0 == out.d - 1) {
        out.alpha = make_rational(inc.coefficient(out.d - 1) - dec.coefficient(out.d - 1),
                                  dec.coefficient(out.d));
    }
    return out;
}

bool positivity_check(const Polynomial& p, std::span<const std::uint64_t> lower_bound) {
    if (!p.has_nonnegative_coefficients()) return false;
    return p.evaluate(lower_bound) >= 1;
}

}  // namespace decisive
