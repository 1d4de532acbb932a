#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "decisive/commands.hpp"
#include "decisive/error.hpp"

namespace py = pybind11;
using namespace decisive;

namespace {

ModelFile from_text(const std::string& text) { return parse_model(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Decisiveness analysis for probabilistic counter machines";

    static py::exception<Error> error(m, "Error");
    static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
    static py::exception<UnsupportedError> unsupported(m, "UnsupportedError", error.ptr());
    static py::exception<BudgetExhausted> budget(m, "BudgetExhausted", error.ptr());
    static py::exception<DomainError> domain(m, "DomainError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            py::set_error(parse_error, e.what());
        } catch (const UnsupportedError& e) {
            py::set_error(unsupported, e.what());
        } catch (const BudgetExhausted& e) {
            py::set_error(budget, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain, e.what());
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def("normalize_text", [](const std::string& text) { return print_model(from_text(text)); },
          py::arg("text"));
    m.def("check", [](const std::string& text) { return check_report(from_text(text)).dump(); }, py::arg("text"));
    m.def("rq", [](const std::string& text) { return rq_report(from_text(text)).dump(); }, py::arg("text"));
    m.def(
        "decide",
        [](const std::string& text, std::optional<std::uint64_t> bound) {
            return decide_report(from_text(text), bound).dump();
        },
        py::arg("text"), py::arg("bound") = py::none());
    m.def(
        "crp",
        [](const std::string& text, const std::string& theta, std::optional<std::size_t> step_cap,
           const std::string& oracle) {
            CrpRequest request;
            request.theta = parse_rational(theta);
            request.step_cap = step_cap;
            request.oracle = oracle;
            return crp_report(from_text(text), request).dump();
        },
        py::arg("text"), py::arg("theta"), py::arg("step_cap") = py::none(), py::arg("oracle") = "auto");
    m.def(
        "simulate",
        [](const std::string& text, std::uint64_t trials, std::uint64_t horizon, std::uint64_t seed,
           unsigned threads) {
            SimulateRequest request;
            request.trials = trials;
            request.horizon = horizon;
            request.seed = seed;
            request.threads = threads;
            py::gil_scoped_release release;
            return simulate_report(from_text(text), request).dump();
        },
        py::arg("text"), py::arg("trials"), py::arg("horizon"), py::arg("seed") = 0, py::arg("threads") = 1);
    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
