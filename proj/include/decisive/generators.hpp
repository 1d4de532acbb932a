#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "decisive/model.hpp"

namespace decisive {

struct Inc {
    std::size_t counter = 0;  // 0 for c1, 1 for c2
    std::size_t next = 0;
    bool operator==(const Inc&) const = default;
};

struct Test {
    std::size_t counter = 0;
    std::size_t then_next = 0;  // counter positive: decrement and jump
    std::size_t else_next = 0;  // counter zero
    bool operator==(const Test&) const = default;
};

struct Halt {
    bool operator==(const Halt&) const = default;
};

using Instruction = std::variant<Inc, Test, Halt>;

// Two-counter program; the last instruction, and only it, is Halt.
class CounterProgram {
public:
    CounterProgram() = default;
    explicit CounterProgram(std::vector<Instruction> instructions);

    const std::vector<Instruction>& instructions() const { return instructions_; }
    std::size_t halt_index() const { return instructions_.size() - 1; }
    std::size_t test_count() const;
    std::size_t inc_count() const;

    // One instruction per line: `inc c1 goto 3`, `test c2 goto 0 else 4`, `halt`,
    // optionally prefixed by `N:`; `//` comments.
    static CounterProgram parse(std::string_view text);
    std::string to_string() const;

    bool operator==(const CounterProgram&) const = default;

private:
    std::vector<Instruction> instructions_;
};

bool is_normalized(const CounterProgram& prog);
CounterProgram normalize(const CounterProgram& prog, std::uint64_t v1, std::uint64_t v2);

struct RunResult {
    bool halted = false;
    std::uint64_t steps = 0;
    std::vector<std::size_t> trace;  // executed instruction indices
};

RunResult interpret(const CounterProgram& prog, std::uint64_t v1, std::uint64_t v2, std::uint64_t step_cap,
                    bool record_trace = false);

Model program_to_static_pcm(const CounterProgram& prog);

enum class PpnTarget { Finite, Upward };
Model program_to_ppn(const CounterProgram& prog, PpnTarget target = PpnTarget::Finite);

// Transition names realizing one interpreter run inside the pPN, ending with `again`.
std::vector<std::string> ppn_gadget_replay(const CounterProgram& prog, std::uint64_t step_cap);

Model hilbert_pcm(const Polynomial& p, std::uint64_t start = 1);

// Single-state one-counter walk with polynomial weights.
Model walk_pcm(const Polynomial& dec, const Polynomial& inc, std::uint64_t start);

}  // namespace decisive
