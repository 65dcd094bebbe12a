#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "asthmon/activity.hpp"
#include "asthmon/wheeze.hpp"

namespace asthmon {

/// Graded output of the decision layer, totally ordered.
enum class AlertLevel { None = 0, Advisory = 1, Warning = 2, Critical = 3 };

const char* to_string(AlertLevel level);
AlertLevel alert_level_from_string(const std::string& name);  // throws DataError

/// Fact values are numbers, symbols, or booleans.
using FactValue = std::variant<double, std::string, bool>;

enum class ValueType { Number, Symbol, Boolean };

const char* to_string(ValueType type);
ValueType type_of(const FactValue& v);
std::string to_display(const FactValue& v);

/// A single piece of session context, keyed by a dotted identifier.
struct Fact {
    std::string key;
    FactValue value;
    std::int64_t t_ms = 0;
};

/// Declared fact keys and their types. Facts and rule conditions referring to
/// keys outside the vocabulary are rejected at load.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::initializer_list<std::pair<std::string, ValueType>> entries);

    void declare(const std::string& key, ValueType type);
    bool contains(const std::string& key) const;
    ValueType type_of(const std::string& key) const;  // throws DataError

    /// The shipped key set: wheeze.*, activity.*, posture.*, ambient.*, plus
    /// the derived symptom.*/risk.* keys the default rules assert.
    static const Vocabulary& standard();

private:
    std::map<std::string, ValueType> types_;
};

/// Current session context. At most one value per key; an assertion with an
/// older timestamp than the stored fact is ignored (newest wins).
class FactBase {
public:
    FactBase() : vocab_(Vocabulary::standard()) {}
    explicit FactBase(Vocabulary vocab) : vocab_(std::move(vocab)) {}

    void assert_fact(const Fact& f);  // throws DataError on unknown key / type mismatch
    const Fact* find(const std::string& key) const;
    std::size_t size() const { return facts_.size(); }
    const std::map<std::string, Fact>& facts() const { return facts_; }
    std::int64_t max_t_ms() const;
    const Vocabulary& vocabulary() const { return vocab_; }

private:
    Vocabulary vocab_;
    std::map<std::string, Fact> facts_;
};

/// is_a concept graph: a DAG with one root, supporting subsumption queries.
class Ontology {
public:
    /// Parses `child IS_A parent` lines ('#' comments) and validates the
    /// result: edges acyclic, exactly one root, all concepts reach it.
    static Ontology parse(const std::string& text);

    /// The shipped exercise-induced-asthma ontology.
    static const Ontology& standard();

    void add_edge(const std::string& child, const std::string& parent);
    void validate() const;  // throws DataError on cycle or multiple roots

    bool has_concept(const std::string& name) const;
    std::vector<std::string> concepts() const;  // sorted

    /// True iff ancestor is reachable from concept (reflexive). Throws
    /// DataError when either name is unknown.
    bool is_a(const std::string& node, const std::string& ancestor) const;

    /// Non-throwing form used during inference: unknown names are simply
    /// not subsumed.
    bool subsumes(const std::string& node, const std::string& ancestor) const;

private:
    std::set<std::string> concepts_;
    std::map<std::string, std::vector<std::string>> parents_;
};

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne, IsA };

const char* to_string(CmpOp op);

struct Condition {
    std::string key;
    CmpOp op = CmpOp::Eq;
    FactValue literal;         // unused for IsA
    std::string concept_name;  // IsA only
};

struct RuleAction {
    enum class Kind { Assert, Alert };
    Kind kind = Kind::Alert;
    std::string key;  // Assert only
    FactValue value;  // Assert only
    AlertLevel level = AlertLevel::None;  // Alert only
};

/// IF <conjunction> THEN <action>, with salience for conflict resolution.
struct Rule {
    std::string name;
    int salience = 0;
    std::vector<Condition> conditions;
    RuleAction action;
};

class RuleBase {
public:
    const std::vector<Rule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    void add(Rule rule);  // throws DataError on duplicate name

private:
    std::vector<Rule> rules_;
    std::set<std::string> names_;
};

/// Parses the rule DSL. Grammar (line oriented, case-sensitive keywords):
///
///   rule     := "RULE" name salience? ":" "IF" cond ("AND" cond)* "THEN" action
///   salience := "[" integer "]"
///   cond     := key op literal | key "IS_A" concept
///   op       := "<" | "<=" | ">" | ">=" | "=" | "!="
///   action   := "ASSERT" key "=" literal | "ALERT" level
///   level    := "Advisory" | "Warning" | "Critical"
///
/// '#' starts a comment. Load-time checks: syntax (with line/column),
/// vocabulary membership and typing of every key and literal, ontology
/// membership of IS_A concepts, duplicate rule names, self-triggering rules,
/// and stratification (no cycles through ASSERT conclusions).
RuleBase parse_rules(const std::string& text, const Vocabulary& vocab, const Ontology& ont);

/// Text of the shipped rule set (docs/rules/eia.rules carries the same bytes).
const std::string& default_rules_text();
/// Text of the shipped ontology (docs/rules/eia.ontology).
const std::string& default_ontology_text();

struct InferResult {
    FactBase facts;                   // input facts plus derivations
    std::vector<Fact> derived;        // in firing order
    std::vector<std::string> fired;   // rule names in firing order
    AlertLevel alert = AlertLevel::None;
};

/// Forward chaining to fixpoint. Each pass fires the highest-salience
/// (then lexicographically first) eligible rule that has not fired yet;
/// stratification guarantees termination within |rules| firings.
InferResult infer(const RuleBase& rb, const FactBase& fb, const Ontology& ont);

/// Ambient context readings as passed on the command line.
struct Ambient {
    double temp_c = 20.0;
    double humidity_pct = 50.0;
    double pressure_hpa = 1013.25;
};

struct AmbientConfig {
    double cold_c = 15.0;   // below this is "cold"
    double dry_pct = 40.0;  // below this is "dry"

    void validate() const;
};

/// Deterministic mapping from the analysis outputs to the fact vocabulary,
/// including the derived ambient.cold_dry flag.
FactBase build_session_facts(const WheezeMetrics& wheeze, const ActivityState& activity,
                             const Ambient& ambient, const AmbientConfig& cfg,
                             const Vocabulary& vocab = Vocabulary::standard());

}  // namespace asthmon
