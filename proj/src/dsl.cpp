#include "decisive/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <sstream>

#include "decisive/error.hpp"
#include "decisive/weights.hpp"

namespace decisive {

namespace {

struct Position {
    std::size_t line;
    std::size_t column;
};

class DslParser {
public:
    explicit DslParser(std::string_view text) : text_(strip_comments(text)) {}

    ModelFile parse() {
        skip();
        Position header_at = here();
        std::string header = identifier("model kind");
        if (header != "pcm" && header != "ppn" && header != "phm") {
            fail(header_at, "expected 'pcm', 'ppn' or 'phm'");
        }
        file_.header = header;
        expect("{");
        for (;;) {
            skip();
            if (peek() == '}') {
                ++pos_;
                break;
            }
            if (at_end()) fail(here(), "expected '}'");
            item();
        }
        skip();
        if (!at_end()) fail(here(), "unexpected input after '}'");
        return finish(header_at);
    }

private:
    static std::string strip_comments(std::string_view text) {
        std::string out(text);
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            if (out[i] == '/' && out[i + 1] == '/') {
                while (i < out.size() && out[i] != '\n') out[i++] = ' ';
            }
        }
        return out;
    }

    void item() {
        Position at = here();
        std::string word = identifier("declaration");
        skip();
        if (peek() == ':' ) {
            transition(word, at);
            return;
        }
        if (word == "states") {
            if (!states_.empty()) fail(at, "states declared twice");
            name_list(states_, "state");
        } else if (word == "counters") {
            if (counters_declared_) fail(at, "counters declared twice");
            counters_declared_ = true;
            name_list(counters_, "counter");
        } else if (word == "opaque") {
            opaque();
        } else if (word == "init") {
            if (init_) fail(at, "init declared twice");
            init_ = configuration();
            expect(";");
        } else if (word == "target") {
            if (target_) fail(at, "target declared twice");
            target();
        } else {
            fail(at, "unknown declaration '" + word + "'");
        }
    }

    void name_list(std::vector<std::string>& names, const char* what) {
        for (;;) {
            Position at = here();
            std::string n = identifier(what);
            if (std::find(names.begin(), names.end(), n) != names.end()) {
                fail(at, std::string("duplicate ") + what + " '" + n + "'");
            }
            names.push_back(n);
            skip();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(";");
            return;
        }
    }

    void opaque() {
        Position at = here();
        std::string name = identifier("weight name");
        if (opaque_.count(name)) fail(at, "opaque weight '" + name + "' bound twice");
        expect("=");
        skip();
        Position kind_at = here();
        std::string kind = identifier("built-in weight");
        std::shared_ptr<const WeightFunction> fn;
        if (kind == "hilbert") {
            expect("[");
            std::vector<std::string> vars;
            for (;;) {
                vars.push_back(identifier("variable"));
                skip();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
            expect("]");
            expect("(");
            std::size_t start = pos_;
            int depth = 1;
            while (!at_end() && depth > 0) {
                if (text_[pos_] == '(') ++depth;
                if (text_[pos_] == ')') --depth;
                if (depth > 0) ++pos_;
            }
            if (at_end()) fail(here(), "expected ')'");
            Polynomial p = polynomial(start, pos_, vars);
            ++pos_;
            fn = std::make_shared<HilbertWeight>(std::move(p));
        } else if (kind == "table") {
            expect("(");
            std::vector<Integer> values;
            for (;;) {
                Position v_at = here();
                Integer v = natural();
                if (v < 1) fail(v_at, "table values must be positive");
                values.push_back(v);
                skip();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
            expect(")");
            fn = std::make_shared<TableWeight>(std::move(values));
        } else {
            fail(kind_at, "unknown built-in weight '" + kind + "' (expected hilbert or table)");
        }
        expect(";");
        opaque_[name] = fn;
    }

    void transition(const std::string& name, Position at) {
        expect(":");
        Transition t;
        t.name = name;
        if (std::any_of(transitions_.begin(), transitions_.end(),
                        [&](const auto& x) { return x.first.name == name; })) {
            fail(at, "duplicate transition '" + name + "'");
        }
        t.source = state();
        expect("--[");
        skip();
        Position guard_at = here();
        std::string g = identifier("'pre' or 'zero'");
        if (g == "zero") {
            t.kind = TransitionKind::ZeroTest;
            expect("(");
            skip();
            Position c_at = here();
            std::string c = identifier("counter");
            auto it = std::find(counters_.begin(), counters_.end(), c);
            if (it == counters_.end()) fail(c_at, "unknown counter '" + c + "'");
            t.tested_counter = static_cast<std::size_t>(it - counters_.begin());
            expect(")");
        } else if (g == "pre") {
            expect("=");
            t.pre = vector();
        } else {
            fail(guard_at, "expected 'pre' or 'zero'");
        }
        expect(",");
        skip();
        Position post_at = here();
        if (identifier("'post'") != "post") fail(post_at, "expected 'post'");
        expect("=");
        t.post = vector();
        expect("]-->");
        t.target = state();
        skip();
        Position w_at = here();
        if (identifier("'weight'") != "weight") fail(w_at, "expected 'weight'");
        skip();
        Position expr_at = here();
        std::size_t start = pos_;
        while (!at_end() && text_[pos_] != ';') ++pos_;
        if (at_end()) fail(here(), "expected ';'");
        std::string raw = text_.substr(start, pos_ - start);
        if (!raw.empty() && raw[0] == '@') {
            std::string ref = raw.substr(1);
            while (!ref.empty() && std::isspace(static_cast<unsigned char>(ref.back()))) ref.pop_back();
            pending_opaque_.emplace_back(transitions_.size(), ref, expr_at);
            t.weight = OpaqueWeight{ref, nullptr};
        } else {
            t.weight = polynomial(start, pos_, counters_);
        }
        ++pos_;
        transitions_.emplace_back(std::move(t), at);
    }

    Polynomial polynomial(std::size_t begin, std::size_t end, const std::vector<std::string>& vars) {
        try {
            return parse_polynomial(std::string_view(text_).substr(begin, end - begin), vars);
        } catch (const ParseError& e) {
            Position base = position_of(begin);
            std::size_t line = base.line + e.line() - 1;
            std::size_t column = e.line() == 1 ? base.column + e.column() - 1 : e.column();
            throw ParseError(line, column, e.what());
        }
    }

    void target() {
        skip();
        Position at = here();
        target_at_ = at;
        std::string kind = identifier("target kind");
        if (kind == "zero") {
            target_ = TargetSet::zero_counter();
            expect(";");
            return;
        }
        if (kind != "finite" && kind != "upward") fail(at, "expected 'finite', 'upward' or 'zero'");
        std::vector<Configuration> confs;
        for (;;) {
            confs.push_back(configuration());
            skip();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            break;
        }
        expect(";");
        target_ = kind == "finite" ? TargetSet::finite(std::move(confs)) : TargetSet::upward(std::move(confs));
    }

    Configuration configuration() {
        Configuration c;
        c.state = state();
        c.marking = vector();
        return c;
    }

    std::size_t state() {
        skip();
        Position at = here();
        std::string name = identifier("state");
        auto it = std::find(states_.begin(), states_.end(), name);
        if (it == states_.end()) fail(at, "unknown state '" + name + "'");
        return static_cast<std::size_t>(it - states_.begin());
    }

    Marking vector() {
        skip();
        Position open = here();
        expect("(");
        Marking m;
        skip();
        if (peek() == ')' && counters_.empty()) {
            ++pos_;
            return m;
        }
        for (;;) {
            Integer v = natural();
            if (!v.fits_ulong_p()) fail(here(), "value too large");
            m.push_back(v.get_ui());
            skip();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            if (peek() == ')') {
                ++pos_;
                break;
            }
            fail(here(), "expected ',' or ')'");
        }
        if (m.size() != counters_.size()) {
            fail(open, "vector has " + std::to_string(m.size()) + " entries but " +
                           std::to_string(counters_.size()) + " counter(s) are declared");
        }
        return m;
    }

    ModelFile finish(Position header_at) {
        if (states_.empty()) fail(header_at, "no states declared");
        for (auto& [index, name, at] : pending_opaque_) {
            auto it = opaque_.find(name);
            if (it == opaque_.end()) fail(at, "unknown opaque weight '@" + name + "'");
            std::get<OpaqueWeight>(transitions_[index].first.weight).fn = it->second;
        }
        std::vector<Transition> ts;
        for (auto& [t, at] : transitions_) ts.push_back(t);
        try {
            file_.model.machine = CounterMachine(states_, counters_, std::move(ts));
        } catch (const ModelError& e) {
            Position at = header_at;
            std::string msg = e.what();
            for (const auto& [t, t_at] : transitions_) {
                if (msg.find("'" + t.name + "'") != std::string::npos) {
                    at = t_at;
                    break;
                }
            }
            fail(at, msg);
        }
        file_.model.initial = init_;
        file_.model.target = target_;
        if (target_ && target_->kind() == TargetSet::Kind::ZeroCounter && counters_.size() != 1) {
            fail(target_at_, "target zero needs exactly one counter");
        }
        Classification k = classify(file_.model.machine);
        if (file_.header == "ppn" && !k.is_pPN) fail(header_at, "model declared 'ppn' is not a pPN");
        if (file_.header == "phm" && k.is_pHM != Flag::Yes) {
            fail(header_at, "model declared 'phm' is not a pHM: " + k.phm_reason);
        }
        return std::move(file_);
    }

    std::string identifier(const std::string& what) {
        skip();
        Position at = here();
        std::size_t start = pos_;
        if (at_end() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            fail(at, "expected " + what);
        }
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    Integer natural() {
        skip();
        Position at = here();
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail(at, "expected a natural number");
        return Integer(text_.substr(start, pos_ - start));
    }

    void expect(const std::string& token) {
        skip();
        if (text_.compare(pos_, token.size(), token) != 0) fail(here(), "expected '" + token + "'");
        pos_ += token.size();
    }

    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    Position position_of(std::size_t offset) const {
        Position p{1, 1};
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++p.line;
                p.column = 1;
            } else {
                ++p.column;
            }
        }
        return p;
    }

    Position here() const { return position_of(pos_); }

    [[noreturn]] void fail(Position at, const std::string& message) const {
        throw ParseError(at.line, at.column, message);
    }

    std::string text_;
    std::size_t pos_ = 0;
    ModelFile file_;
    std::vector<std::string> states_;
    std::vector<std::string> counters_;
    bool counters_declared_ = false;
    std::map<std::string, std::shared_ptr<const WeightFunction>> opaque_;
    std::vector<std::pair<Transition, Position>> transitions_;
    std::vector<std::tuple<std::size_t, std::string, Position>> pending_opaque_;
    std::optional<Configuration> init_;
    std::optional<TargetSet> target_;
    Position target_at_{1, 1};
};

std::string vec(const Marking& m) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i > 0) out << ", ";
        out << m[i];
    }
    out << ")";
    return out.str();
}

std::string names(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ", ";
        out += xs[i];
    }
    return out;
}

}  // namespace

ModelFile parse_model(std::string_view text) { return DslParser(text).parse(); }

std::string print_model(const ModelFile& file) {
    const CounterMachine& c = file.model.machine;
    std::ostringstream out;
    out << file.header << " {\n";
    out << "  states " << names(c.states()) << ";\n";
    if (!c.counters().empty()) out << "  counters " << names(c.counters()) << ";\n";
    std::vector<std::string> bound;
    for (const auto& t : c.transitions()) {
        const auto* o = std::get_if<OpaqueWeight>(&t.weight);
        if (!o || std::find(bound.begin(), bound.end(), o->name) != bound.end()) continue;
        bound.push_back(o->name);
        out << "  opaque " << o->name << " = " << o->fn->definition() << ";\n";
    }
    for (const auto& t : c.transitions()) {
        out << "  " << t.name << ": " << c.states()[t.source] << " --[";
        if (t.kind == TransitionKind::ZeroTest) {
            out << "zero(" << c.counters()[t.tested_counter] << ")";
        } else {
            out << "pre=" << vec(t.pre);
        }
        out << ", post=" << vec(t.post) << "]--> " << c.states()[t.target] << " weight " << describe_weight(t.weight)
            << ";\n";
    }
    if (file.model.initial) {
        out << "  init " << c.states()[file.model.initial->state] << " " << vec(file.model.initial->marking) << ";\n";
    }
    if (file.model.target) {
        const TargetSet& a = *file.model.target;
        out << "  target ";
        if (a.kind() == TargetSet::Kind::ZeroCounter) {
            out << "zero";
        } else {
            out << (a.kind() == TargetSet::Kind::Finite ? "finite " : "upward ");
            for (std::size_t i = 0; i < a.configurations().size(); ++i) {
                if (i > 0) out << ", ";
                out << c.states()[a.configurations()[i].state] << " " << vec(a.configurations()[i].marking);
            }
        }
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace decisive
