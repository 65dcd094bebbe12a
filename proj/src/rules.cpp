#include "asthmon/rules.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <sstream>

#include "asthmon/error.hpp"
#include "asthmon/textfmt.hpp"

namespace asthmon {

const char* to_string(AlertLevel level) {
    switch (level) {
        case AlertLevel::None: return "None";
        case AlertLevel::Advisory: return "Advisory";
        case AlertLevel::Warning: return "Warning";
        case AlertLevel::Critical: return "Critical";
    }
    return "?";
}

AlertLevel alert_level_from_string(const std::string& name) {
    if (name == "None") return AlertLevel::None;
    if (name == "Advisory") return AlertLevel::Advisory;
    if (name == "Warning") return AlertLevel::Warning;
    if (name == "Critical") return AlertLevel::Critical;
    throw DataError("unknown alert level '" + name + "'");
}

const char* to_string(ValueType type) {
    switch (type) {
        case ValueType::Number: return "number";
        case ValueType::Symbol: return "symbol";
        case ValueType::Boolean: return "boolean";
    }
    return "?";
}

ValueType type_of(const FactValue& v) {
    if (std::holds_alternative<double>(v)) return ValueType::Number;
    if (std::holds_alternative<std::string>(v)) return ValueType::Symbol;
    return ValueType::Boolean;
}

std::string to_display(const FactValue& v) {
    if (const double* d = std::get_if<double>(&v)) return fmt_number(*d);
    if (const std::string* s = std::get_if<std::string>(&v)) return *s;
    return std::get<bool>(v) ? "true" : "false";
}

const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::IsA: return "IS_A";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Vocabulary and fact base

Vocabulary::Vocabulary(std::initializer_list<std::pair<std::string, ValueType>> entries) {
    for (const auto& [key, type] : entries) declare(key, type);
}

void Vocabulary::declare(const std::string& key, ValueType type) { types_[key] = type; }

bool Vocabulary::contains(const std::string& key) const { return types_.count(key) > 0; }

ValueType Vocabulary::type_of(const std::string& key) const {
    const auto it = types_.find(key);
    if (it == types_.end()) throw DataError("unknown fact key '" + key + "'");
    return it->second;
}

const Vocabulary& Vocabulary::standard() {
    static const Vocabulary vocab{
        {"activity.am", ValueType::Number},
        {"activity.level", ValueType::Symbol},
        {"ambient.cold_dry", ValueType::Boolean},
        {"ambient.humidity_pct", ValueType::Number},
        {"ambient.pressure_hpa", ValueType::Number},
        {"ambient.temp_c", ValueType::Number},
        {"posture.state", ValueType::Symbol},
        {"risk.ambient_trigger", ValueType::Boolean},
        {"risk.exertion_trigger", ValueType::Boolean},
        {"risk.level", ValueType::Symbol},
        {"symptom.wheeze", ValueType::Boolean},
        {"wheeze.event_count", ValueType::Number},
        {"wheeze.proportion", ValueType::Number},
        {"wheeze.total_s", ValueType::Number},
    };
    return vocab;
}

void FactBase::assert_fact(const Fact& f) {
    if (!vocab_.contains(f.key)) throw DataError("unknown fact key '" + f.key + "'");
    const ValueType declared = vocab_.type_of(f.key);
    if (type_of(f.value) != declared) {
        throw DataError("fact '" + f.key + "' must be a " + std::string(to_string(declared)));
    }
    auto it = facts_.find(f.key);
    if (it == facts_.end()) {
        facts_.emplace(f.key, f);
    } else if (f.t_ms >= it->second.t_ms) {  // newest wins
        it->second = f;
    }
}

const Fact* FactBase::find(const std::string& key) const {
    const auto it = facts_.find(key);
    return it == facts_.end() ? nullptr : &it->second;
}

std::int64_t FactBase::max_t_ms() const {
    std::int64_t t = 0;
    for (const auto& [key, f] : facts_) t = std::max(t, f.t_ms);
    return t;
}

// ---------------------------------------------------------------------------
// Ontology

void Ontology::add_edge(const std::string& child, const std::string& parent) {
    concepts_.insert(child);
    concepts_.insert(parent);
    auto& ps = parents_[child];
    if (std::find(ps.begin(), ps.end(), parent) == ps.end()) ps.push_back(parent);
}

bool Ontology::has_concept(const std::string& name) const { return concepts_.count(name) > 0; }

std::vector<std::string> Ontology::concepts() const {
    return {concepts_.begin(), concepts_.end()};
}

void Ontology::validate() const {
    if (concepts_.empty()) return;
    // Cycle check: iterative DFS over is_a edges, three colors.
    std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
    for (const auto& start : concepts_) {
        if (color[start] != 0) continue;
        std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            const auto it = parents_.find(node);
            const std::size_t degree = it == parents_.end() ? 0 : it->second.size();
            if (next < degree) {
                const std::string& parent = it->second[next++];
                if (color[parent] == 1) {
                    throw DataError("ontology cycle involving '" + parent + "'");
                }
                if (color[parent] == 0) {
                    color[parent] = 1;
                    stack.emplace_back(parent, 0);
                }
            } else {
                color[node] = 2;
                stack.pop_back();
            }
        }
    }
    std::vector<std::string> roots;
    for (const auto& c : concepts_) {
        const auto it = parents_.find(c);
        if (it == parents_.end() || it->second.empty()) roots.push_back(c);
    }
    if (roots.size() != 1) {
        std::string msg = "ontology must have exactly one root, found:";
        for (const auto& r : roots) msg += " " + r;
        throw DataError(msg);
    }
}

bool Ontology::is_a(const std::string& node, const std::string& ancestor) const {
    if (!has_concept(node)) throw DataError("unknown concept '" + node + "'");
    if (!has_concept(ancestor)) throw DataError("unknown concept '" + ancestor + "'");
    return subsumes(node, ancestor);
}

bool Ontology::subsumes(const std::string& node, const std::string& ancestor) const {
    if (!has_concept(node) || !has_concept(ancestor)) return false;
    if (node == ancestor) return true;  // reflexive
    std::set<std::string> seen{node};
    std::deque<std::string> queue{node};
    while (!queue.empty()) {
        const std::string node = queue.front();
        queue.pop_front();
        const auto it = parents_.find(node);
        if (it == parents_.end()) continue;
        for (const auto& parent : it->second) {
            if (parent == ancestor) return true;
            if (seen.insert(parent).second) queue.push_back(parent);
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Rule DSL parser

namespace {

struct Token {
    enum class Kind { Ident, Number, Op, LBracket, RBracket, Colon, End };
    Kind kind = Kind::End;
    std::string text;
    double number = 0.0;
    int column = 0;
};

class LineLexer {
public:
    LineLexer(const std::string& line, int line_no) : line_(line), line_no_(line_no) {
        tokenize();
    }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (t.kind != Token::Kind::End) ++pos_;
        return t;
    }
    int line_no() const { return line_no_; }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw ParseError(msg, line_no_, at.column);
    }

private:
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }

    void tokenize() {
        std::size_t i = 0;
        const std::size_t n = line_.size();
        while (i < n) {
            const char c = line_[i];
            if (c == '#') break;  // comment to end of line
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            Token t;
            t.column = static_cast<int>(i) + 1;
            if (ident_start(c)) {
                std::size_t j = i;
                while (j < n && ident_char(line_[j])) ++j;
                t.kind = Token::Kind::Ident;
                t.text = line_.substr(i, j - i);
                i = j;
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       ((c == '-' || c == '+' || c == '.') && i + 1 < n &&
                        std::isdigit(static_cast<unsigned char>(line_[i + 1])))) {
                std::size_t j = i + 1;
                while (j < n && (std::isdigit(static_cast<unsigned char>(line_[j])) ||
                                 line_[j] == '.' || line_[j] == 'e' || line_[j] == 'E' ||
                                 ((line_[j] == '+' || line_[j] == '-') &&
                                  (line_[j - 1] == 'e' || line_[j - 1] == 'E')))) {
                    ++j;
                }
                t.kind = Token::Kind::Number;
                t.text = line_.substr(i, j - i);
                const auto res =
                    std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
                if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
                    throw ParseError("malformed number '" + t.text + "'", line_no_, t.column);
                }
                i = j;
            } else if (c == '<' || c == '>' || c == '!' || c == '=') {
                t.kind = Token::Kind::Op;
                if ((c == '<' || c == '>' || c == '!') && i + 1 < n && line_[i + 1] == '=') {
                    t.text = line_.substr(i, 2);
                    i += 2;
                } else if (c == '!') {
                    throw ParseError("expected '!=' operator", line_no_, t.column);
                } else {
                    t.text = std::string(1, c);
                    ++i;
                }
            } else if (c == '[') {
                t.kind = Token::Kind::LBracket;
                ++i;
            } else if (c == ']') {
                t.kind = Token::Kind::RBracket;
                ++i;
            } else if (c == ':') {
                t.kind = Token::Kind::Colon;
                ++i;
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", line_no_,
                                 t.column);
            }
            tokens_.push_back(std::move(t));
        }
        Token end;
        end.kind = Token::Kind::End;
        end.column = static_cast<int>(line_.size()) + 1;
        tokens_.push_back(std::move(end));
    }

    std::string line_;
    int line_no_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

CmpOp op_from_text(const std::string& text) {
    if (text == "<") return CmpOp::Lt;
    if (text == "<=") return CmpOp::Le;
    if (text == ">") return CmpOp::Gt;
    if (text == ">=") return CmpOp::Ge;
    if (text == "=") return CmpOp::Eq;
    return CmpOp::Ne;  // "!=" is the only remaining lexable op
}

FactValue literal_from_token(const Token& t) {
    if (t.kind == Token::Kind::Number) return t.number;
    if (t.text == "true") return true;
    if (t.text == "false") return false;
    return t.text;  // bare symbol
}

const Token& expect_ident(LineLexer& lex, const std::string& keyword) {
    const Token& t = lex.next();
    if (t.kind != Token::Kind::Ident || t.text != keyword) {
        lex.fail("expected '" + keyword + "'", t);
    }
    return t;
}

Condition parse_condition(LineLexer& lex, const Vocabulary& vocab, const Ontology& ont) {
    const Token& key_tok = lex.next();
    if (key_tok.kind != Token::Kind::Ident) lex.fail("expected fact key", key_tok);
    Condition cond;
    cond.key = key_tok.text;
    if (!vocab.contains(cond.key)) lex.fail("unknown fact key '" + cond.key + "'", key_tok);
    const ValueType key_type = vocab.type_of(cond.key);

    const Token& op_tok = lex.next();
    if (op_tok.kind == Token::Kind::Ident && op_tok.text == "IS_A") {
        cond.op = CmpOp::IsA;
        if (key_type != ValueType::Symbol) {
            lex.fail("IS_A requires a symbol-valued key, '" + cond.key + "' is " +
                         to_string(key_type),
                     op_tok);
        }
        const Token& concept_tok = lex.next();
        if (concept_tok.kind != Token::Kind::Ident) lex.fail("expected concept name", concept_tok);
        if (!ont.has_concept(concept_tok.text)) {
            lex.fail("unknown ontology concept '" + concept_tok.text + "'", concept_tok);
        }
        cond.concept_name = concept_tok.text;
        return cond;
    }
    if (op_tok.kind != Token::Kind::Op) lex.fail("expected comparison operator or IS_A", op_tok);
    cond.op = op_from_text(op_tok.text);

    const Token& lit_tok = lex.next();
    if (lit_tok.kind != Token::Kind::Ident && lit_tok.kind != Token::Kind::Number) {
        lex.fail("expected literal", lit_tok);
    }
    cond.literal = literal_from_token(lit_tok);
    const ValueType lit_type = type_of(cond.literal);
    if (cond.op == CmpOp::Lt || cond.op == CmpOp::Le || cond.op == CmpOp::Gt ||
        cond.op == CmpOp::Ge) {
        if (key_type != ValueType::Number || lit_type != ValueType::Number) {
            lex.fail("ordering comparison requires a number key and literal", op_tok);
        }
    } else if (lit_type != key_type) {
        lex.fail("literal type " + std::string(to_string(lit_type)) + " does not match key '" +
                     cond.key + "' (" + to_string(key_type) + ")",
                 lit_tok);
    }
    return cond;
}

Rule parse_rule_line(LineLexer& lex, const Vocabulary& vocab, const Ontology& ont) {
    expect_ident(lex, "RULE");
    const Token& name_tok = lex.next();
    if (name_tok.kind != Token::Kind::Ident) lex.fail("expected rule name", name_tok);
    Rule rule;
    rule.name = name_tok.text;

    if (lex.peek().kind == Token::Kind::LBracket) {
        lex.next();
        const Token& sal = lex.next();
        if (sal.kind != Token::Kind::Number || sal.number != std::floor(sal.number)) {
            lex.fail("salience must be an integer", sal);
        }
        rule.salience = static_cast<int>(sal.number);
        const Token& rb = lex.next();
        if (rb.kind != Token::Kind::RBracket) lex.fail("expected ']'", rb);
    }

    const Token& colon = lex.next();
    if (colon.kind != Token::Kind::Colon) lex.fail("expected ':'", colon);
    expect_ident(lex, "IF");

    rule.conditions.push_back(parse_condition(lex, vocab, ont));
    while (lex.peek().kind == Token::Kind::Ident && lex.peek().text == "AND") {
        lex.next();
        rule.conditions.push_back(parse_condition(lex, vocab, ont));
    }

    expect_ident(lex, "THEN");
    const Token& act_tok = lex.next();
    if (act_tok.kind != Token::Kind::Ident || (act_tok.text != "ASSERT" && act_tok.text != "ALERT")) {
        lex.fail("expected ASSERT or ALERT", act_tok);
    }
    if (act_tok.text == "ASSERT") {
        rule.action.kind = RuleAction::Kind::Assert;
        const Token& key_tok = lex.next();
        if (key_tok.kind != Token::Kind::Ident) lex.fail("expected fact key", key_tok);
        rule.action.key = key_tok.text;
        if (!vocab.contains(rule.action.key)) {
            lex.fail("unknown fact key '" + rule.action.key + "'", key_tok);
        }
        const Token& eq = lex.next();
        if (eq.kind != Token::Kind::Op || eq.text != "=") lex.fail("expected '='", eq);
        const Token& lit_tok = lex.next();
        if (lit_tok.kind != Token::Kind::Ident && lit_tok.kind != Token::Kind::Number) {
            lex.fail("expected literal", lit_tok);
        }
        rule.action.value = literal_from_token(lit_tok);
        if (type_of(rule.action.value) != vocab.type_of(rule.action.key)) {
            lex.fail("asserted value type does not match key '" + rule.action.key + "'", lit_tok);
        }
        for (const auto& cond : rule.conditions) {
            if (cond.key == rule.action.key) {
                lex.fail("rule '" + rule.name + "' asserts a key it conditions on", key_tok);
            }
        }
    } else {
        rule.action.kind = RuleAction::Kind::Alert;
        const Token& level_tok = lex.next();
        if (level_tok.kind != Token::Kind::Ident ||
            (level_tok.text != "Advisory" && level_tok.text != "Warning" &&
             level_tok.text != "Critical")) {
            lex.fail("expected alert level Advisory|Warning|Critical", level_tok);
        }
        rule.action.level = alert_level_from_string(level_tok.text);
    }
    const Token& end = lex.next();
    if (end.kind != Token::Kind::End) lex.fail("unexpected trailing input", end);
    return rule;
}

void check_stratified(const RuleBase& rb) {
    // Key dependency graph: condition key -> asserted key, per ASSERT rule.
    std::map<std::string, std::set<std::string>> edges;
    for (const auto& rule : rb.rules()) {
        if (rule.action.kind != RuleAction::Kind::Assert) continue;
        for (const auto& cond : rule.conditions) edges[cond.key].insert(rule.action.key);
    }
    std::map<std::string, int> color;
    auto dfs = [&](auto&& self, const std::string& node) -> void {
        color[node] = 1;
        for (const auto& next : edges[node]) {
            if (color[next] == 1) {
                throw DataError("stratification violation: conclusion cycle through key '" +
                                next + "'");
            }
            if (color[next] == 0) self(self, next);
        }
        color[node] = 2;
    };
    for (const auto& [node, targets] : edges) {
        if (color[node] == 0) dfs(dfs, node);
    }
}

}  // namespace

void RuleBase::add(Rule rule) {
    if (!names_.insert(rule.name).second) {
        throw DataError("duplicate rule name '" + rule.name + "'");
    }
    rules_.push_back(std::move(rule));
}

RuleBase parse_rules(const std::string& text, const Vocabulary& vocab, const Ontology& ont) {
    RuleBase rb;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        LineLexer lex(line, line_no);
        if (lex.peek().kind == Token::Kind::End) continue;  // blank or comment
        try {
            rb.add(parse_rule_line(lex, vocab, ont));
        } catch (const ParseError&) {
            throw;
        } catch (const DataError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    check_stratified(rb);
    return rb;
}

Ontology Ontology::parse(const std::string& text) {
    Ontology ont;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        LineLexer lex(line, line_no);
        if (lex.peek().kind == Token::Kind::End) continue;
        const Token& child = lex.next();
        if (child.kind != Token::Kind::Ident) lex.fail("expected concept name", child);
        expect_ident(lex, "IS_A");
        const Token& parent = lex.next();
        if (parent.kind != Token::Kind::Ident) lex.fail("expected parent concept", parent);
        const Token& end = lex.next();
        if (end.kind != Token::Kind::End) lex.fail("unexpected trailing input", end);
        ont.add_edge(child.text, parent.text);
    }
    ont.validate();
    return ont;
}

// ---------------------------------------------------------------------------
// Shipped knowledge base; docs/rules/ carries the same bytes.

const std::string& default_rules_text() {
    static const std::string text =
        R"(# Exercise-induced asthma alerting rules.
# Thresholds here are illustrative configuration, not clinical guidance.

RULE exertion_trigger [5]: IF activity.level IS_A Ambulatory THEN ASSERT risk.exertion_trigger = true
RULE cold_dry_trigger [5]: IF ambient.cold_dry = true THEN ASSERT risk.ambient_trigger = true
RULE wheeze_symptom [5]: IF wheeze.proportion > 0.05 THEN ASSERT symptom.wheeze = true
RULE trigger_advisory [10]: IF risk.exertion_trigger = true AND risk.ambient_trigger = true THEN ALERT Advisory
RULE wheeze_warning [20]: IF wheeze.proportion > 0.2 THEN ALERT Warning
RULE wheeze_lean_critical [30]: IF wheeze.proportion > 0.2 AND posture.state = ForwardLean THEN ALERT Critical
)";
    return text;
}

const std::string& default_ontology_text() {
    static const std::string text =
        R"(# Concept graph for exercise-induced asthma monitoring.
# One edge per line: child IS_A parent.

Activity IS_A EiaDomain
Trigger IS_A EiaDomain
Symptom IS_A EiaDomain
Posture IS_A EiaDomain

Stationary IS_A Activity
Ambulatory IS_A Activity
Sitting IS_A Stationary
Standing IS_A Stationary
Lying IS_A Stationary
Lying IS_A Posture
Walking IS_A Ambulatory
Running IS_A Ambulatory
Jogging IS_A Ambulatory

ColdDryAir IS_A Trigger
Exercise IS_A Trigger

Wheeze IS_A Symptom
ShortnessOfBreath IS_A Symptom

Upright IS_A Posture
ForwardLean IS_A Posture
SideTilt IS_A Posture
)";
    return text;
}

const Ontology& Ontology::standard() {
    static const Ontology ont = Ontology::parse(default_ontology_text());
    return ont;
}

// ---------------------------------------------------------------------------
// Inference engine

namespace {

bool condition_holds(const Condition& cond, const FactBase& fb, const Ontology& ont) {
    const Fact* fact = fb.find(cond.key);
    if (fact == nullptr) return false;
    switch (cond.op) {
        case CmpOp::Lt:
        case CmpOp::Le:
        case CmpOp::Gt:
        case CmpOp::Ge: {
            const double* v = std::get_if<double>(&fact->value);
            const double* lit = std::get_if<double>(&cond.literal);
            if (v == nullptr || lit == nullptr) return false;
            switch (cond.op) {
                case CmpOp::Lt: return *v < *lit;
                case CmpOp::Le: return *v <= *lit;
                case CmpOp::Gt: return *v > *lit;
                default: return *v >= *lit;
            }
        }
        case CmpOp::Eq: return fact->value == cond.literal;
        case CmpOp::Ne: return fact->value != cond.literal;
        case CmpOp::IsA: {
            const std::string* sym = std::get_if<std::string>(&fact->value);
            return sym != nullptr && ont.subsumes(*sym, cond.concept_name);
        }
    }
    return false;
}

}  // namespace

InferResult infer(const RuleBase& rb, const FactBase& fb, const Ontology& ont) {
    InferResult result;
    result.facts = fb;
    const std::int64_t derived_t = fb.max_t_ms();
    std::vector<bool> fired(rb.size(), false);

    for (std::size_t round = 0; round < rb.size(); ++round) {
        int best = -1;
        for (std::size_t i = 0; i < rb.size(); ++i) {
            if (fired[i]) continue;
            const Rule& rule = rb.rules()[i];
            const bool eligible =
                std::all_of(rule.conditions.begin(), rule.conditions.end(),
                            [&](const Condition& c) { return condition_holds(c, result.facts, ont); });
            if (!eligible) continue;
            if (best < 0) {
                best = static_cast<int>(i);
                continue;
            }
            const Rule& incumbent = rb.rules()[static_cast<std::size_t>(best)];
            if (rule.salience > incumbent.salience ||
                (rule.salience == incumbent.salience && rule.name < incumbent.name)) {
                best = static_cast<int>(i);
            }
        }
        if (best < 0) break;
        const Rule& rule = rb.rules()[static_cast<std::size_t>(best)];
        fired[static_cast<std::size_t>(best)] = true;
        result.fired.push_back(rule.name);
        if (rule.action.kind == RuleAction::Kind::Assert) {
            Fact f{rule.action.key, rule.action.value, derived_t};
            result.facts.assert_fact(f);
            result.derived.push_back(f);
        } else {
            result.alert = std::max(result.alert, rule.action.level);
        }
    }
    return result;
}

void AmbientConfig::validate() const {
    if (dry_pct < 0.0 || dry_pct > 100.0) {
        throw DataError("ambient.dry_pct must lie in [0, 100]");
    }
}

FactBase build_session_facts(const WheezeMetrics& wheeze, const ActivityState& activity,
                             const Ambient& ambient, const AmbientConfig& cfg,
                             const Vocabulary& vocab) {
    cfg.validate();
    FactBase fb(vocab);
    fb.assert_fact({"wheeze.proportion", wheeze.proportion, 0});
    fb.assert_fact({"wheeze.total_s", wheeze.total_wheeze_s, 0});
    fb.assert_fact({"wheeze.event_count", static_cast<double>(wheeze.event_count), 0});
    fb.assert_fact({"activity.level", std::string(to_string(activity.level)), 0});
    fb.assert_fact({"activity.am", activity.am_value, 0});
    fb.assert_fact({"posture.state", std::string(to_string(activity.posture)), 0});
    fb.assert_fact({"ambient.temp_c", ambient.temp_c, 0});
    fb.assert_fact({"ambient.humidity_pct", ambient.humidity_pct, 0});
    fb.assert_fact({"ambient.pressure_hpa", ambient.pressure_hpa, 0});
    const bool cold_dry = ambient.temp_c < cfg.cold_c && ambient.humidity_pct < cfg.dry_pct;
    fb.assert_fact({"ambient.cold_dry", cold_dry, 0});
    return fb;
}

}  // namespace asthmon
