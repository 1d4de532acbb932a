#include "decisive/commands.hpp"

#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "decisive/analysis.hpp"
#include "decisive/deciders.hpp"
#include "decisive/error.hpp"
#include "decisive/generators.hpp"
#include "decisive/reach.hpp"
#include "decisive/recast.hpp"
#include "decisive/sim.hpp"

namespace decisive {

namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string flag_text(Flag f) { return to_string(f); }

Json rational_json(const Rational& r) { return Json{{"exact", to_string(r)}, {"decimal", to_decimal(r)}}; }

std::string rational_text(const Json& j) {
    return j["exact"].get<std::string>() + " (" + j["decimal"].get<std::string>() + ")";
}

std::string target_text(const CounterMachine& c, const TargetSet& a) {
    if (a.kind() == TargetSet::Kind::ZeroCounter) return "zero";
    std::string out = a.kind() == TargetSet::Kind::Finite ? "finite " : "upward ";
    for (std::size_t i = 0; i < a.configurations().size(); ++i) {
        if (i > 0) out += ", ";
        out += format_configuration(c, a.configurations()[i]);
    }
    return out;
}

const Model& require_query(const ModelFile& file) {
    if (!file.model.initial || !file.model.target) throw InputError("model needs an init and a target block");
    return file.model;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

int exit_code_of(const Json& report) {
    const std::string cmd = report["command"];
    if (cmd == "decide" && report["answer"] == "Unsupported") return exit_unsupported;
    if (cmd == "crp" && report["status"] != "complete") return exit_budget;
    if (cmd == "recast" && !report["complete"].get<bool>()) return exit_budget;
    return exit_ok;
}

}  // namespace

ModelFile load_model(const std::string& path) { return parse_model(read_file(path)); }

Json check_report(const ModelFile& file) {
    const CounterMachine& c = file.model.machine;
    Classification k = classify(c);
    std::size_t zero_tests = 0;
    for (const auto& t : c.transitions()) zero_tests += t.kind == TransitionKind::ZeroTest;
    Json j;
    j["command"] = "check";
    j["kind"] = file.header;
    j["states"] = c.states();
    j["counters"] = c.counters();
    j["transitions"] = c.transitions().size();
    j["zero_tests"] = zero_tests;
    j["classification"] = Json{{"pPN", k.is_pPN},
                               {"safe_one_counter", k.is_safe_one_counter},
                               {"pHM", flag_text(k.is_pHM)},
                               {"single_state", k.is_single_state},
                               {"vass", k.is_vass},
                               {"polynomial", flag_text(k.is_polynomial)},
                               {"static", flag_text(k.is_static)}};
    if (k.phm_matrix) {
        Json m = Json::array();
        for (const auto& row : *k.phm_matrix) {
            Json r = Json::array();
            for (const auto& x : row) r.push_back(to_string(x));
            m.push_back(r);
        }
        j["phm_matrix"] = m;
    } else {
        j["phm_matrix"] = nullptr;
    }
    j["phm_reason"] = k.phm_reason;
    j["zero_constant_term"] = c.weights_without_constant_term();
    j["init"] = file.model.initial ? Json(format_configuration(c, *file.model.initial)) : Json(nullptr);
    j["target"] = file.model.target ? Json(target_text(c, *file.model.target)) : Json(nullptr);
    return j;
}

Json rq_report(const ModelFile& file) {
    const CounterMachine& c = file.model.machine;
    RqTable t = compute_rq(c);
    Json r;
    for (std::size_t q = 0; q < c.states().size(); ++q) {
        r[c.states()[q]] = t.r[q] ? Json(std::to_string(*t.r[q])) : Json("inf");
    }
    return Json{{"command", "rq"}, {"r", r}};
}

Json decide_report(const ModelFile& file, std::optional<std::uint64_t> bound) {
    DecideOutcome d = decide_model(require_query(file), bound);
    Json witness = Json::object();
    for (const auto& [key, value] : d.verdict.witness) witness[key] = value;
    Json j{{"command", "decide"},
           {"answer", to_string(d.verdict.answer)},
           {"case", d.verdict.case_label},
           {"witness", witness}};
    j["probability"] = d.probability ? rational_json(*d.probability) : Json(nullptr);
    return j;
}

Json crp_report(const ModelFile& file, const CrpRequest& request) {
    const Model& model = require_query(file);
    ModelCrpOptions options;
    options.oracle = request.oracle;
    options.step_cap = request.step_cap;
    options.merge_frontier = request.merge_frontier;
    options.bound = request.bound;
    std::ostringstream trace;
    if (!request.trace_path.empty()) {
        trace << "step pmin pmax frontier_size\n";
        options.trace = [&trace](const CrpStep& s) {
            trace << s.step << " " << to_decimal(*s.pmin, 9) << " " << to_decimal(*s.pmax, 9) << " "
                  << s.frontier_size << "\n";
        };
    }
    ModelCrpResult r = run_crp(model, request.theta, options);
    if (!request.trace_path.empty()) write_file(request.trace_path, trace.str());
    Json j{{"command", "crp"},
           {"theta", to_string(request.theta)},
           {"status", to_string(r.crp.status)},
           {"low", rational_json(r.crp.interval.low)},
           {"high", rational_json(r.crp.interval.up)},
           {"width", rational_json(r.crp.interval.width())},
           {"steps", r.crp.steps},
           {"oracle_queries", r.crp.oracle_queries},
           {"method", r.method},
           {"oracle", r.oracle}};
    j["step_cap"] = request.step_cap ? Json(*request.step_cap) : Json(nullptr);
    return j;
}

Json simulate_report(const ModelFile& file, const SimulateRequest& request) {
    const Model& model = require_query(file);
    SimOptions options;
    options.threads = request.threads;
    options.confidence = request.confidence;
    SampleReport s = estimate_reach(semantics(model.machine), *model.initial, target_predicate(model),
                                    request.horizon, request.trials, request.seed, options);
    return Json{{"command", "simulate"},
                {"seed", s.seed},
                {"generator", s.generator},
                {"trials", s.trials},
                {"hits", s.hits},
                {"censored", s.censored},
                {"horizon", s.horizon},
                {"confidence", s.confidence},
                {"estimate", rational_json(s.estimate)},
                {"low", to_decimal(s.low, 9)},
                {"high", to_decimal(s.high, 9)},
                {"csv", SampleReport::csv_header() + "\n" + s.csv_row() + "\n"}};
}

Json recast_report(const ModelFile& file, std::size_t budget, const std::string& oracle,
                   const std::string& export_path) {
    const Model& model = require_query(file);
    auto chain = recast_chain(semantics(model.machine), *model.initial, target_predicate(model),
                              select_oracle(model, oracle));
    Materialized<RecastState<Configuration>> m = materialize(chain, RecastState<Configuration>(*model.initial), budget);
    SccDecomposition scc = bsccs(m.chain);
    std::size_t bottoms = 0;
    for (bool b : scc.bottom) bottoms += b;
    if (!export_path.empty()) {
        std::ostringstream text;
        for (std::size_t i = 0; i < m.states.size(); ++i) {
            text << "# " << i << " = "
                 << (m.states[i] ? format_configuration(model.machine, *m.states[i]) : std::string("s_bot"))
                 << (m.truncated[i] ? " (truncated)" : "") << "\n";
        }
        text << m.chain.to_edge_list();
        write_file(export_path, text.str());
    }
    std::string recurrent = m.complete ? yes_no(finite_shadow_recurrent(m)) : "unknown";
    return Json{{"command", "recast"},
                {"states", m.states.size()},
                {"complete", m.complete},
                {"budget", budget},
                {"components", scc.components.size()},
                {"bottom_components", bottoms},
                {"recurrent", recurrent}};
}

std::string render_text(const Json& j) {
    std::ostringstream out;
    const std::string cmd = j["command"];
    if (cmd == "check") {
        const Json& k = j["classification"];
        out << "model: " << j["kind"].get<std::string>() << ", " << j["states"].size() << " state(s), "
            << j["counters"].size() << " counter(s), " << j["transitions"].get<std::size_t>() << " transition(s) ("
            << j["zero_tests"].get<std::size_t>() << " zero test(s))\n";
        out << "pPN: " << yes_no(k["pPN"]) << "; safe-1-counter: " << yes_no(k["safe_one_counter"])
            << "; pHM: " << k["pHM"].get<std::string>() << "\n";
        out << "single-state: " << yes_no(k["single_state"]) << "; vass: " << yes_no(k["vass"])
            << "; polynomial: " << k["polynomial"].get<std::string>() << "; static: " << k["static"].get<std::string>()
            << "\n";
        if (!j["zero_constant_term"].empty()) {
            out << "note: weights without constant term (positive where enabled):";
            for (const auto& n : j["zero_constant_term"]) out << " " << n.get<std::string>();
            out << "\n";
        }
        if (!j["phm_matrix"].is_null()) {
            out << "M_C:\n";
            for (std::size_t q = 0; q < j["phm_matrix"].size(); ++q) {
                out << "  " << j["states"][q].get<std::string>() << ":";
                for (std::size_t r = 0; r < j["phm_matrix"][q].size(); ++r) {
                    const std::string p = j["phm_matrix"][q][r];
                    if (p != "0/1") out << " " << j["states"][r].get<std::string>() << " " << p;
                }
                out << "\n";
            }
        } else if (!j["phm_reason"].get<std::string>().empty()) {
            out << "pHM reason: " << j["phm_reason"].get<std::string>() << "\n";
        }
        if (!j["init"].is_null()) out << "init: " << j["init"].get<std::string>() << "\n";
        if (!j["target"].is_null()) out << "target: " << j["target"].get<std::string>() << "\n";
    } else if (cmd == "rq") {
        for (const auto& [q, r] : j["r"].items()) out << q << ": " << r.get<std::string>() << "\n";
    } else if (cmd == "decide") {
        out << j["answer"].get<std::string>() << " (case: " << j["case"].get<std::string>() << ")\n";
        for (const auto& [key, value] : j["witness"].items()) out << "  " << key << ": " << value.get<std::string>() << "\n";
        if (!j["probability"].is_null()) out << "probability: " << rational_text(j["probability"]) << "\n";
    } else if (cmd == "crp") {
        out << "interval: [" << j["low"]["exact"].get<std::string>() << ", " << j["high"]["exact"].get<std::string>()
            << "] ([" << j["low"]["decimal"].get<std::string>() << ", " << j["high"]["decimal"].get<std::string>()
            << "])\n";
        out << "width: " << rational_text(j["width"]) << "\n";
        out << "status: " << j["status"].get<std::string>() << "\n";
        out << "steps: " << j["steps"].get<std::size_t>() << "; oracle queries: " << j["oracle_queries"].get<std::size_t>()
            << "\n";
        out << "method: " << j["method"].get<std::string>() << "\n";
        out << "oracle: " << j["oracle"].get<std::string>() << "\n";
    } else if (cmd == "simulate") {
        out << "hits: " << j["hits"].get<std::uint64_t>() << "/" << j["trials"].get<std::uint64_t>() << "\n";
        out << "censored: " << j["censored"].get<std::uint64_t>() << " (horizon " << j["horizon"].get<std::uint64_t>()
            << ")\n";
        out << "estimate: " << rational_text(j["estimate"]) << "\n";
        out << "wilson " << j["confidence"].get<double>() * 100 << "%: [" << j["low"].get<std::string>() << ", "
            << j["high"].get<std::string>() << "]\n";
        out << "seed: " << j["seed"].get<std::uint64_t>() << "; generator: " << j["generator"].get<std::string>()
            << "\n";
    } else if (cmd == "recast") {
        out << "states: " << j["states"].get<std::size_t>() << (j["complete"].get<bool>() ? "" : " (budget reached)")
            << "\n";
        out << "components: " << j["components"].get<std::size_t>() << "; bottom: "
            << j["bottom_components"].get<std::size_t>() << "\n";
        out << "finite-shadow recurrent: " << j["recurrent"].get<std::string>() << "\n";
    } else if (cmd == "generate") {
        out << j["text"].get<std::string>();
    }
    return out.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reachability intervals and decisiveness for probabilistic counter machines", "decisive"};
    app.require_subcommand(1);
    const CLI::Validator positive(
        [](std::string& s) -> std::string {
            if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos ||
                s.find_first_not_of('0') == std::string::npos) {
                return "must be a positive integer";
            }
            return "";
        },
        "POSITIVE");
    bool json = false;
    std::string model_path;

    auto add_model = [&](CLI::App* sub) {
        sub->add_option("file", model_path, "model file")->required();
        sub->add_flag("--json", json, "machine-readable report");
    };

    auto* check = app.add_subcommand("check", "validate and classify a model");
    add_model(check);

    auto* crp = app.add_subcommand("crp", "interval for the probability of reaching the target");
    add_model(crp);
    std::string theta_text;
    std::optional<std::size_t> step_cap;
    std::string oracle = "auto";
    bool no_merge = false;
    std::optional<std::uint64_t> crp_bound;
    std::string trace_path;
    crp->add_option("--theta", theta_text, "maximal interval width, e.g. 1/100")->required();
    crp->add_option("--step-cap", step_cap, "maximal number of frontier extractions");
    crp->add_option("--oracle", oracle, "auto or bounded:N");
    crp->add_flag("--no-merge", no_merge, "keep one frontier entry per path");
    crp->add_option("--bound", crp_bound, "place bound B for the regular pPN path");
    crp->add_option("--trace", trace_path, "write `step pmin pmax frontier_size` lines to a file");

    auto* decide = app.add_subcommand("decide", "decide decisiveness of the model w.r.t. its target");
    add_model(decide);
    std::optional<std::uint64_t> bound;
    decide->add_option("--bound", bound, "place bound B for the regular pPN decider");

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate of the reachability probability");
    add_model(simulate);
    SimulateRequest sim;
    bool csv = false;
    simulate->add_option("--trials", sim.trials, "number of sampled paths")->required()->check(positive);
    simulate->add_option("--horizon", sim.horizon, "maximal path length")->required()->check(positive);
    simulate->add_option("--seed", sim.seed, "PRNG seed")->required();
    simulate->add_option("--threads", sim.threads, "worker threads")->check(positive);
    simulate->add_option("--confidence", sim.confidence, "Wilson interval confidence")->check(CLI::Range(0.5, 0.999999));
    simulate->add_flag("--csv", csv, "print `seed,trials,hits,censored,low,high`");

    auto* rq = app.add_subcommand("rq", "print the r_q table of a safe one-counter machine");
    add_model(rq);

    auto* recast = app.add_subcommand("recast", "materialize the recast chain and test finite-shadow recurrence");
    add_model(recast);
    std::size_t budget = 10'000;
    std::string recast_oracle = "auto";
    std::string export_path;
    recast->add_option("--budget", budget, "maximal number of expanded states")->check(positive);
    recast->add_option("--oracle", recast_oracle, "auto or bounded:N");
    recast->add_option("--export", export_path, "write the materialized chain as an edge list");

    auto* generate = app.add_subcommand("generate", "emit generated models");
    generate->require_subcommand(1);
    std::string program_path;
    std::uint64_t v1 = 0;
    std::uint64_t v2 = 0;
    auto* g_norm = generate->add_subcommand("normalize", "normalize a two-counter program");
    g_norm->add_option("program", program_path, "program file")->required();
    g_norm->add_option("--v1", v1, "initial value of c1");
    g_norm->add_option("--v2", v2, "initial value of c2");
    auto* g_static = generate->add_subcommand("static-pcm", "static pCM simulating a normalized program");
    g_static->add_option("program", program_path, "program file")->required();
    auto* g_ppn = generate->add_subcommand("ppn", "polynomial pPN simulating a normalized program");
    g_ppn->add_option("program", program_path, "program file")->required();
    bool upward = false;
    g_ppn->add_flag("--upward", upward, "upward-closed target instead of a single marking");
    auto* g_hilbert = generate->add_subcommand("hilbert", "one-counter model with a Hilbert-minimum weight");
    std::string poly_text;
    std::vector<std::string> vars;
    std::uint64_t start = 1;
    g_hilbert->add_option("--poly", poly_text, "integer polynomial, e.g. \"x1^2 - 2\"")->required();
    g_hilbert->add_option("--vars", vars, "its variables")->required()->delimiter(',');
    g_hilbert->add_option("--start", start, "initial counter value");
    auto* g_walk = generate->add_subcommand("walk", "single-state one-counter walk");
    std::string dec_text;
    std::string inc_text;
    g_walk->add_option("--dec", dec_text, "decrement weight in c")->required();
    g_walk->add_option("--inc", inc_text, "increment weight in c")->required();
    g_walk->add_option("--start", start, "initial counter value");
    for (auto* g : {g_norm, g_static, g_ppn, g_hilbert, g_walk}) g->add_flag("--json", json, "machine-readable report");

    std::vector<std::string> argv_storage{"decisive"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());
    if (!args.empty() && !args[0].empty() && args[0][0] != '-' && !app.get_subcommand_no_throw(args[0])) {
        err << "error: unknown command '" << args[0] << "'\n";
        return exit_usage;
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    auto emit = [&](const Json& report) {
        if (json) {
            out << report.dump(2) << "\n";
        } else if (report["command"] == "simulate" && csv) {
            out << report["csv"].get<std::string>();
        } else {
            out << render_text(report);
        }
        return exit_code_of(report);
    };

    std::string subject;
    try {
        if (generate->parsed()) {
            subject = program_path;
            std::string kind;
            std::string text;
            auto load_program = [&] {
                CounterProgram p = CounterProgram::parse(read_file(program_path));
                if (!is_normalized(p)) throw InputError("program is not normalized; run `generate normalize` first");
                return p;
            };
            if (g_norm->parsed()) {
                kind = "normalize";
                text = normalize(CounterProgram::parse(read_file(program_path)), v1, v2).to_string();
            } else if (g_static->parsed()) {
                kind = "static-pcm";
                text = print_model(ModelFile{"pcm", program_to_static_pcm(load_program())});
            } else if (g_ppn->parsed()) {
                kind = "ppn";
                text = print_model(
                    ModelFile{"ppn", program_to_ppn(load_program(), upward ? PpnTarget::Upward : PpnTarget::Finite)});
            } else if (g_hilbert->parsed()) {
                kind = "hilbert";
                subject = "--poly";
                text = print_model(ModelFile{"pcm", hilbert_pcm(parse_polynomial(poly_text, vars), start)});
            } else {
                kind = "walk";
                subject = "--dec/--inc";
                const std::vector<std::string> c{"c"};
                text = print_model(ModelFile{"pcm", walk_pcm(parse_polynomial(dec_text, c),
                                                             parse_polynomial(inc_text, c), start)});
            }
            return emit(Json{{"command", "generate"}, {"kind", kind}, {"text", text}});
        }

        subject = model_path;
        ModelFile file = load_model(model_path);
        if (check->parsed()) return emit(check_report(file));
        if (rq->parsed()) return emit(rq_report(file));
        if (decide->parsed()) {
            Json report = decide_report(file, bound);
            int code = emit(report);
            if (code == exit_unsupported) {
                err << "decide: unsupported: " << report["case"].get<std::string>() << "\n";
            }
            return code;
        }
        if (crp->parsed()) {
            CrpRequest request;
            request.theta = parse_rational(theta_text);
            request.step_cap = step_cap;
            request.oracle = oracle;
            request.merge_frontier = !no_merge;
            request.bound = crp_bound;
            request.trace_path = trace_path;
            if (!step_cap && !certified_decisive(require_query(file), crp_bound)) {
                err << "error: crp: --step-cap is required unless `decide` certifies the model decisive\n";
                return exit_usage;
            }
            Json report = crp_report(file, request);
            int code = emit(report);
            if (code == exit_budget) err << "crp: incomplete: " << report["status"].get<std::string>() << "\n";
            return code;
        }
        if (simulate->parsed()) return emit(simulate_report(file, sim));
        if (recast->parsed()) {
            Json report = recast_report(file, budget, recast_oracle, export_path);
            int code = emit(report);
            if (code == exit_budget) err << "recast: budget of " << budget << " states reached\n";
            return code;
        }
    } catch (const ParseError& e) {
        err << "error: " << subject << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return exit_parse;
    } catch (const ModelError& e) {
        err << "error: " << subject << ": " << e.what() << "\n";
        return exit_parse;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return exit_unsupported;
    } catch (const DomainError& e) {
        err << "unsupported: " << e.what() << "\n";
        return exit_unsupported;
    } catch (const BudgetExhausted& e) {
        err << "budget exhausted: " << e.what() << "\n";
        return exit_budget;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace decisive
