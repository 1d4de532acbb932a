#include "decisive/weights.hpp"

#include <sstream>

#include "decisive/error.hpp"

namespace decisive {

HilbertWeight::HilbertWeight(Polynomial p) : p_(std::move(p)) {
    if (p_.arity() == 0) throw InputError("Hilbert weight needs at least one variable");
}

Integer HilbertWeight::evaluate(const Marking& m) const {
    if (m.size() != 1) throw InputError("Hilbert weight expects one counter");
    return at(m[0]);
}

Integer HilbertWeight::at(std::uint64_t n) const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (n < memo_.size()) return memo_[n];
    // g is nonincreasing and bounded below by 1.
    if (!memo_.empty() && memo_.back() == 1) return 1;
    const std::size_t k = p_.arity();
    std::vector<std::uint64_t> tuple(k, 0);
    while (memo_.size() <= n) {
        const std::uint64_t level = memo_.size();
        if (level > enumeration_cap) {
            throw DomainError("Hilbert weight enumeration is capped at n <= " +
                              std::to_string(enumeration_cap));
        }
        Integer best;
        bool have = false;
        // All tuples with n_1 + ... + n_k = level.
        std::fill(tuple.begin(), tuple.end(), 0);
        tuple[k - 1] = level;
        for (;;) {
            Integer v = p_.evaluate(tuple);
            v = v * v + 1;
            if (!have || v < best) {
                best = v;
                have = true;
            }
            // Next composition of `level` into k parts.
            std::size_t i = k - 1;
            while (i > 0 && tuple[i] == 0) --i;
            if (i == 0) break;
            std::uint64_t moved = tuple[i];
            tuple[i] = 0;
            tuple[i - 1] += 1;
            tuple[k - 1] = moved - 1;
        }
        if (!memo_.empty() && memo_.back() < best) best = memo_.back();
        memo_.push_back(best);
        if (best == 1) break;
    }
    return n < memo_.size() ? memo_[n] : Integer(1);
}

std::string HilbertWeight::definition() const {
    std::ostringstream out;
    out << "hilbert[";
    for (std::size_t i = 0; i < p_.arity(); ++i) {
        if (i > 0) out << ", ";
        out << p_.variables()[i];
    }
    out << "](" << p_.to_string() << ")";
    return out.str();
}

TableWeight::TableWeight(std::vector<Integer> values) : values_(std::move(values)) {
    if (values_.empty()) throw InputError("table weight needs at least one value");
    for (const auto& v : values_) {
        if (v < 1) throw InputError("table weight values must be positive");
    }
}

Integer TableWeight::evaluate(const Marking& m) const {
    if (m.size() != 1) throw InputError("table weight expects one counter");
    return values_[std::min<std::uint64_t>(m[0], values_.size() - 1)];
}

std::string TableWeight::definition() const {
    std::ostringstream out;
    out << "table(";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i > 0) out << ", ";
        out << values_[i].get_str();
    }
    out << ")";
    return out.str();
}

}  // namespace decisive
