#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sublaw/distribution.hpp"
#include "sublaw/functional.hpp"
#include "sublaw/rng.hpp"

namespace sublaw {

enum class SelectorKind { constant, table, rule, rolling_hash };

/// History-dependent rule choosing the next scenario index. This is the
/// adversary: a strategy maps the realized driver prefix to the law of the
/// next coordinate. Rules must be pure; any randomness is frozen into the
/// selector at construction (same selector, same history, same choice).
class Selector {
  public:
    using Rule = std::function<int(std::span<const double> history)>;

    static Selector constant(int index, std::string id = {}) {
        Selector s;
        s.kind_ = SelectorKind::constant;
        s.constant_index_ = index;
        s.id_ = id.empty() ? "const" + std::to_string(index) : std::move(id);
        return s;
    }

    static Selector table(std::map<std::vector<double>, int> entries, std::string id = "table") {
        Selector s;
        s.kind_ = SelectorKind::table;
        s.table_ = std::move(entries);
        s.id_ = std::move(id);
        return s;
    }

    static Selector rule(Rule r, std::string id) {
        Selector s;
        s.kind_ = SelectorKind::rule;
        s.rule_ = std::move(r);
        s.id_ = std::move(id);
        return s;
    }

    // Frozen pseudo-random strategy keyed by (key, history). Simulation keeps
    // a rolling hash so long paths stay linear-time.
    static Selector rolling_hash(std::size_t n_scenarios, std::uint64_t key, std::string id) {
        Selector s;
        s.kind_ = SelectorKind::rolling_hash;
        s.hash_key_ = key;
        s.hash_modulus_ = n_scenarios;
        s.id_ = std::move(id);
        return s;
    }

    int choose(std::span<const double> history) const {
        switch (kind_) {
        case SelectorKind::constant: return constant_index_;
        case SelectorKind::table: {
            auto it = table_.find(std::vector<double>(history.begin(), history.end()));
            if (it == table_.end())
                throw std::out_of_range("Selector table has no entry for a reachable history (not total)");
            return it->second;
        }
        case SelectorKind::rule: return rule_(history);
        case SelectorKind::rolling_hash: {
            std::uint64_t h = hash_key_;
            for (double v : history) h = fold_value(h, v);
            return pick_from_hash(h);
        }
        }
        throw std::logic_error("unreachable");
    }

    SelectorKind kind() const { return kind_; }
    const std::string& id() const { return id_; }

    std::uint64_t hash_key() const { return hash_key_; }
    static std::uint64_t fold_value(std::uint64_t h, double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        return splitmix64(h ^ bits);
    }
    int pick_from_hash(std::uint64_t h) const {
        return static_cast<int>(h % hash_modulus_);
    }

    // Walks every reachable history prefix up to the horizon and checks the
    // table answers each one with a valid index. Only meaningful for table
    // kind; constant and rule selectors are total by construction.
    bool is_total(const ScenarioSet& driver, int horizon) const {
        if (kind_ != SelectorKind::table) return true;
        std::vector<double> history;
        return totality_walk(driver, horizon, history);
    }

  private:
    bool totality_walk(const ScenarioSet& driver, int horizon,
                       std::vector<double>& history) const {
        if (static_cast<int>(history.size()) >= horizon) return true;
        auto it = table_.find(history);
        if (it == table_.end()) return false;
        if (it->second < 0 || it->second >= static_cast<int>(driver.size())) return false;
        for (const Atom& a : driver[static_cast<std::size_t>(it->second)].atoms()) {
            history.push_back(a.value);
            bool ok = totality_walk(driver, horizon, history);
            history.pop_back();
            if (!ok) return false;
        }
        return true;
    }

    SelectorKind kind_ = SelectorKind::constant;
    int constant_index_ = 0;
    std::map<std::vector<double>, int> table_;
    Rule rule_;
    std::uint64_t hash_key_ = 0;
    std::size_t hash_modulus_ = 1;
    std::string id_ = "const0";
};

/// Pseudo-random but frozen strategy: the same (seed, history) pair always
/// selects the same index, across replications and runs.
inline Selector random_table_selector(std::size_t n_scenarios, std::uint64_t seed,
                                      std::string id) {
    return Selector::rolling_hash(n_scenarios, seed, std::move(id));
}

/// One-step-lookahead heuristic for pushing f upward: future coordinates
/// beyond the next one are filled with the first scenario's mean, then the
/// scenario maximizing the one-step expectation of that completion is chosen.
/// Ties go to the lowest index. A pool member, not an optimal strategy.
inline Selector greedy_lookahead_selector(const ScenarioSet& driver, const RandomFunctional& f,
                                          std::string id = "greedy") {
    const double fill = driver[0].mean();
    return Selector::rule(
        [driver, f, fill](std::span<const double> history) {
            const int t = static_cast<int>(history.size()) + 1;
            const Window w = f.window();
            if (t < w.first || t > w.last) return 0;
            std::vector<double> path(history.begin(), history.end());
            path.resize(static_cast<std::size_t>(w.last), fill);
            int best = 0;
            double best_score = 0.0;
            for (std::size_t theta = 0; theta < driver.size(); ++theta) {
                double score = 0.0;
                for (const Atom& a : driver[theta].atoms()) {
                    path[static_cast<std::size_t>(t - 1)] = a.value;
                    score += a.probability * f.eval_on_path(path);
                }
                if (theta == 0 || score > best_score) {
                    best = static_cast<int>(theta);
                    best_score = score;
                }
            }
            return best;
        },
        std::move(id));
}

/// Standard pool: one constant selector per scenario, a greedy lookahead
/// (when every step's lookahead evaluation is cheap), and pseudo-random
/// tables up to the requested size.
inline std::vector<Selector> make_selector_pool(const ScenarioSet& driver,
                                                const RandomFunctional& f, std::size_t size,
                                                std::uint64_t seed) {
    std::vector<Selector> pool;
    if (size == 0) throw std::invalid_argument("selector pool must be nonempty");
    for (std::size_t i = 0; i < driver.size() && pool.size() < size; ++i)
        pool.push_back(Selector::constant(static_cast<int>(i)));
    if (pool.size() < size && driver.size() > 1 && f.window().size() <= 16)
        pool.push_back(greedy_lookahead_selector(driver, f));
    std::size_t k = 0;
    while (pool.size() < size) {
        pool.push_back(random_table_selector(driver.size(), derive_key(seed, 0x5e1ec7, k),
                                             "rtab" + std::to_string(k)));
        ++k;
    }
    return pool;
}

} // namespace sublaw
