#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "decisive/model.hpp"

namespace decisive {

// g(n) = min { P(n_1..n_k)^2 + 1 : n_1 + ... + n_k <= n } on a one-counter machine.
class HilbertWeight : public WeightFunction {
public:
    static constexpr std::uint64_t enumeration_cap = 30;

    explicit HilbertWeight(Polynomial p);

    Integer evaluate(const Marking& m) const override;
    std::string definition() const override;
    std::size_t arity() const override { return 1; }

    Integer at(std::uint64_t n) const;
    const Polynomial& polynomial() const { return p_; }

private:
    Polynomial p_;
    mutable std::mutex mutex_;
    mutable std::vector<Integer> memo_;
};

// Piecewise weight on a one-counter machine; the last value repeats forever.
class TableWeight : public WeightFunction {
public:
    explicit TableWeight(std::vector<Integer> values);

    Integer evaluate(const Marking& m) const override;
    std::string definition() const override;
    std::size_t arity() const override { return 1; }

private:
    std::vector<Integer> values_;
};

}  // namespace decisive
