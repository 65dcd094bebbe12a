// Brute-force fixpoint oracle for the inference engine plus a generator of
// random stratified rule systems. The oracle explores every possible firing
// order one rule at a time and collects each distinct terminal outcome; on a
// stratified positive-form system the engine's agenda policy must land on the
// single outcome the enumeration finds.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "asthmon/rng.hpp"
#include "asthmon/rules.hpp"

namespace oracle {

struct Outcome {
    std::map<std::string, std::string> facts;  // key -> displayed value
    asthmon::AlertLevel alert = asthmon::AlertLevel::None;
    std::set<std::string> fired;

    bool operator==(const Outcome&) const = default;
    bool operator<(const Outcome& o) const {
        if (facts != o.facts) return facts < o.facts;
        if (alert != o.alert) return alert < o.alert;
        return fired < o.fired;
    }
};

namespace detail {

inline bool holds(const asthmon::Condition& cond, const asthmon::FactBase& fb,
                  const asthmon::Ontology& ont) {
    const asthmon::Fact* fact = fb.find(cond.key);
    if (fact == nullptr) return false;
    using asthmon::CmpOp;
    switch (cond.op) {
        case CmpOp::Lt:
        case CmpOp::Le:
        case CmpOp::Gt:
        case CmpOp::Ge: {
            const double v = std::get<double>(fact->value);
            const double lit = std::get<double>(cond.literal);
            if (cond.op == CmpOp::Lt) return v < lit;
            if (cond.op == CmpOp::Le) return v <= lit;
            if (cond.op == CmpOp::Gt) return v > lit;
            return v >= lit;
        }
        case CmpOp::Eq: return fact->value == cond.literal;
        case CmpOp::Ne: return fact->value != cond.literal;
        case CmpOp::IsA:
            return std::holds_alternative<std::string>(fact->value) &&
                   ont.subsumes(std::get<std::string>(fact->value), cond.concept_name);
    }
    return false;
}

inline Outcome snapshot(const asthmon::FactBase& fb, asthmon::AlertLevel alert,
                        const std::vector<bool>& fired, const asthmon::RuleBase& rb) {
    Outcome o;
    for (const auto& [key, fact] : fb.facts()) o.facts[key] = asthmon::to_display(fact.value);
    o.alert = alert;
    for (std::size_t i = 0; i < fired.size(); ++i) {
        if (fired[i]) o.fired.insert(rb.rules()[i].name);
    }
    return o;
}

inline void explore(const asthmon::RuleBase& rb, const asthmon::Ontology& ont,
                    asthmon::FactBase fb, asthmon::AlertLevel alert, std::vector<bool> fired,
                    std::set<std::string>& seen_states, std::set<Outcome>& terminals) {
    // Memo key: fired mask plus current fact values.
    std::string key;
    for (bool f : fired) key += f ? '1' : '0';
    for (const auto& [k, fact] : fb.facts()) key += "|" + k + "=" + asthmon::to_display(fact.value);
    if (!seen_states.insert(key).second) return;

    bool any = false;
    for (std::size_t i = 0; i < rb.size(); ++i) {
        if (fired[i]) continue;
        const auto& rule = rb.rules()[i];
        bool eligible = true;
        for (const auto& c : rule.conditions) {
            if (!holds(c, fb, ont)) {
                eligible = false;
                break;
            }
        }
        if (!eligible) continue;
        any = true;
        asthmon::FactBase next_fb = fb;
        asthmon::AlertLevel next_alert = alert;
        std::vector<bool> next_fired = fired;
        next_fired[i] = true;
        if (rule.action.kind == asthmon::RuleAction::Kind::Assert) {
            next_fb.assert_fact({rule.action.key, rule.action.value, next_fb.max_t_ms()});
        } else {
            next_alert = std::max(next_alert, rule.action.level);
        }
        explore(rb, ont, std::move(next_fb), next_alert, std::move(next_fired), seen_states,
                terminals);
    }
    if (!any) terminals.insert(snapshot(fb, alert, fired, rb));
}

}  // namespace detail

/// Every distinct terminal (facts, alert, fired-set) over all firing orders.
inline std::set<Outcome> all_order_fixpoints(const asthmon::RuleBase& rb,
                                             const asthmon::FactBase& fb,
                                             const asthmon::Ontology& ont) {
    std::set<Outcome> terminals;
    std::set<std::string> seen_states;
    detail::explore(rb, ont, fb, asthmon::AlertLevel::None,
                    std::vector<bool>(rb.size(), false), seen_states, terminals);
    return terminals;
}

inline Outcome outcome_of(const asthmon::InferResult& result) {
    Outcome o;
    for (const auto& [key, fact] : result.facts.facts()) {
        o.facts[key] = asthmon::to_display(fact.value);
    }
    o.alert = result.alert;
    o.fired.insert(result.fired.begin(), result.fired.end());
    return o;
}

/// One random stratified positive-form system: boolean keys k0..k5 ordered by
/// a random permutation, ASSERT rules only point "upward" in that order so
/// the conclusion graph is acyclic by construction, conditions and
/// conclusions are all `= true`, and some rules raise alerts instead.
struct RandomSystem {
    std::string dsl;
    asthmon::Vocabulary vocab;
    asthmon::FactBase facts;     // rebound to vocab once the keys exist
    asthmon::Ontology ontology;  // single trivial edge; IS_A unused here
};

inline RandomSystem generate_stratified_system(asthmon::Rng& rng, int max_rules = 6,
                                               int max_keys = 6) {
    RandomSystem sys;
    const int n_keys = rng.uniform_int(2, max_keys);
    std::vector<std::string> keys;
    for (int i = 0; i < n_keys; ++i) {
        keys.push_back("k" + std::to_string(i));
        sys.vocab.declare(keys.back(), asthmon::ValueType::Boolean);
    }
    // Random stratification order.
    std::vector<int> order(keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    }
    std::vector<int> rank(keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    sys.ontology.add_edge("Thing", "Root");

    const int n_rules = rng.uniform_int(1, max_rules);
    const char* levels[] = {"Advisory", "Warning", "Critical"};
    for (int r = 0; r < n_rules; ++r) {
        const bool alert_rule = rng.uniform() < 0.35;
        std::string line = "RULE r" + std::to_string(r);
        const int salience = rng.uniform_int(0, 3);
        line += " [" + std::to_string(salience) + "]: IF ";

        int conclusion = -1;
        std::vector<int> pool;  // keys usable as conditions
        if (alert_rule) {
            for (int k = 0; k < n_keys; ++k) pool.push_back(k);
        } else {
            // Conclusion cannot be the stratification-minimal key.
            std::vector<int> uppers;
            for (int k = 0; k < n_keys; ++k) {
                if (rank[static_cast<std::size_t>(k)] > 0) uppers.push_back(k);
            }
            conclusion = uppers[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(uppers.size()) - 1))];
            for (int k = 0; k < n_keys; ++k) {
                if (rank[static_cast<std::size_t>(k)] < rank[static_cast<std::size_t>(conclusion)]) {
                    pool.push_back(k);
                }
            }
        }
        const int n_conds = rng.uniform_int(1, std::min(3, static_cast<int>(pool.size())));
        std::set<int> conds;
        while (static_cast<int>(conds.size()) < n_conds) {
            conds.insert(pool[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(pool.size()) - 1))]);
        }
        bool first = true;
        for (int k : conds) {
            if (!first) line += " AND ";
            first = false;
            line += keys[static_cast<std::size_t>(k)] + " = true";
        }
        line += " THEN ";
        if (alert_rule) {
            line += std::string("ALERT ") + levels[rng.uniform_int(0, 2)];
        } else {
            line += "ASSERT " + keys[static_cast<std::size_t>(conclusion)] + " = true";
        }
        sys.dsl += line + "\n";
    }

    sys.facts = asthmon::FactBase(sys.vocab);
    for (int k = 0; k < n_keys; ++k) {
        if (rng.uniform() < 0.5) {
            sys.facts.assert_fact({keys[static_cast<std::size_t>(k)], true, 0});
        }
    }
    return sys;
}

}  // namespace oracle
