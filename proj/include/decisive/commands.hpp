#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "decisive/dsl.hpp"
#include "decisive/numeric.hpp"

namespace decisive {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_parse = 2,
    exit_unsupported = 3,
    exit_budget = 4,
};

// Reports as printed by `--json`; the text output is rendered from the same object.
Json check_report(const ModelFile& file);
Json rq_report(const ModelFile& file);
Json decide_report(const ModelFile& file, std::optional<std::uint64_t> bound);

struct CrpRequest {
    Rational theta;
    std::optional<std::size_t> step_cap;
    std::string oracle = "auto";
    bool merge_frontier = true;
    std::optional<std::uint64_t> bound;
    std::string trace_path;
};
Json crp_report(const ModelFile& file, const CrpRequest& request);

struct SimulateRequest {
    std::uint64_t trials = 0;
    std::uint64_t horizon = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double confidence = 0.99;
};
Json simulate_report(const ModelFile& file, const SimulateRequest& request);

Json recast_report(const ModelFile& file, std::size_t budget, const std::string& oracle,
                   const std::string& export_path);

std::string render_text(const Json& report);

ModelFile load_model(const std::string& path);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace decisive
