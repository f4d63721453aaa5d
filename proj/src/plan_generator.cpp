// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/plan_generator.hpp"

#include <algorithm>

#include "ctdplan/error.hpp"
#include "ctdplan/rng.hpp"

namespace ctd {

namespace {

constexpr int kCandidatesPerRow = 50;

// Bookkeeping independent of coverage_report: interactions are indexed, and
// a per-factor index lists the interactions touching each factor.
struct Tracker {
    std::vector<Interaction> interactions;
    std::vector<char> uncovered;                 // 1 while not covered
    std::size_t uncovered_count = 0;
    std::vector<std::vector<std::size_t>> by_factor;  // factor -> interaction ids

    explicit Tracker(const FactorModel& model, std::vector<Interaction> ts)
        : interactions(std::move(ts)),
          uncovered(interactions.size(), 1),
          uncovered_count(interactions.size()),
          by_factor(model.factor_count()) {
        for (std::size_t id = 0; id < interactions.size(); ++id) {
            for (const auto& [fi, vi] : interactions[id].entries) {
                by_factor[static_cast<std::size_t>(fi)].push_back(id);
            }
        }
    }

    static bool row_matches(const Combination& row, const Interaction& t) {
        for (const auto& [fi, vi] : t.entries) {
            if (row[static_cast<std::size_t>(fi)] != vi) return false;
        }
        return true;
    }

    std::size_t count_newly_covered(const Combination& row) const {
        std::size_t gain = 0;
        for (std::size_t id = 0; id < interactions.size(); ++id) {
            if (uncovered[id] && row_matches(row, interactions[id])) ++gain;
        }
        return gain;
    }

    void mark_covered(const Combination& row) {
        for (std::size_t id = 0; id < interactions.size(); ++id) {
            if (uncovered[id] && row_matches(row, interactions[id])) {
                uncovered[id] = 0;
                --uncovered_count;
            }
        }
    }

    std::size_t nth_uncovered(std::size_t n) const {
        for (std::size_t id = 0; id < interactions.size(); ++id) {
            if (uncovered[id] && n-- == 0) return id;
        }
        return interactions.size();
    }

    // Interactions that become covered the moment factor fi is set to vi:
    // those touching fi with value vi whose other entries are already matched.
    std::size_t gain_of_assignment(const Combination& partial, int fi, int vi) const {
        std::size_t gain = 0;
        for (std::size_t id : by_factor[static_cast<std::size_t>(fi)]) {
            if (!uncovered[id]) continue;
            bool match = true;
            for (const auto& [gf, gv] : interactions[id].entries) {
                if (gf == fi) {
                    if (gv != vi) {
                        match = false;
                        break;
                    }
                } else if (partial[static_cast<std::size_t>(gf)] != gv) {
                    match = false;
                    break;
                }
            }
            if (match) ++gain;
        }
        return gain;
    }
};

// Completion search reused for keeping candidate rows feasible.
bool partial_extendable(const FactorModel& model, Combination partial) {
    if (model.partial_forbidden(partial)) return false;
    struct Rec {
        const FactorModel& m;
        bool operator()(Combination& p, std::size_t from) const {
            const std::size_t n = p.size();
            std::size_t i = from;
            while (i < n && p[i] != kUnassigned) ++i;
            if (i == n) return true;
            const auto count = m.factors()[i].values.size();
            for (std::size_t v = 0; v < count; ++v) {
                p[i] = static_cast<int>(v);
                if (!m.partial_forbidden(p) && (*this)(p, i + 1)) return true;
            }
            p[i] = kUnassigned;
            return false;
        }
    };
    return Rec{model}(partial, 0);
}

Combination build_candidate(const FactorModel& model, const CoverageRequirement& req,
                            const Tracker& tracker, Rng& rng, bool constrained) {
    Combination row(model.factor_count(), kUnassigned);
    for (const auto& [fi, vi] : req.fixed) row[static_cast<std::size_t>(fi)] = vi;

    // seed with a random uncovered interaction
    const std::size_t pick = rng.below(tracker.uncovered_count);
    const Interaction& seed_t = tracker.interactions[tracker.nth_uncovered(pick)];
    for (const auto& [fi, vi] : seed_t.entries) row[static_cast<std::size_t>(fi)] = vi;

    // remaining factors in random order
    std::vector<int> order;
    for (std::size_t i = 0; i < model.factor_count(); ++i) {
        if (row[i] == kUnassigned) order.push_back(static_cast<int>(i));
    }
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    }

    for (int fi : order) {
        const auto m = model.factors()[static_cast<std::size_t>(fi)].values.size();
        std::size_t best_gain = 0;
        std::vector<int> best_values;
        for (std::size_t v = 0; v < m; ++v) {
            const int vi = static_cast<int>(v);
            if (constrained) {
                row[static_cast<std::size_t>(fi)] = vi;
                const bool ok = partial_extendable(model, row);
                row[static_cast<std::size_t>(fi)] = kUnassigned;
                if (!ok) continue;
            }
            const std::size_t gain = tracker.gain_of_assignment(row, fi, vi);
            if (best_values.empty() || gain > best_gain) {
                best_gain = gain;
                best_values.assign(1, vi);
            } else if (gain == best_gain) {
                best_values.push_back(vi);
            }
        }
        // The seed interaction is feasible with the fixed values, so some value
        // always keeps the partial row extendable.
        row[static_cast<std::size_t>(fi)] =
            best_values[static_cast<std::size_t>(rng.below(best_values.size()))];
    }
    return row;
}

}  // namespace

Plan generate_plan(const FactorModel& model, const CoverageRequirement& req, std::uint64_t seed) {
    auto required = required_interactions(model, req);
    if (required.empty()) throw ValidationError("nothing to cover");

    Tracker tracker(model, std::move(required));
    Rng rng = Rng::derive(seed, fnv1a_64("plan-generator"));
    const bool constrained = !model.constraints().empty();

    Plan plan;
    plan.seed = seed;
    plan.strength = req.strength;
    plan.scope_names = req.scope_labels(model);
    plan.fixed_labels = req.fixed_as_labels(model);

    while (tracker.uncovered_count > 0) {
        Combination best_row;
        std::size_t best_gain = 0;
        for (int c = 0; c < kCandidatesPerRow; ++c) {
            Combination candidate = build_candidate(model, req, tracker, rng, constrained);
            const std::size_t gain = tracker.count_newly_covered(candidate);
            if (gain > best_gain) {  // ties keep the lowest candidate index
                best_gain = gain;
                best_row = std::move(candidate);
            }
        }
        if (best_gain == 0) {
            // cannot happen: every candidate covers at least its seed interaction
            throw Error("internal: greedy step made no progress");
        }
        tracker.mark_covered(best_row);
        plan.rows.push_back(std::move(best_row));
    }
    return plan;
}

}  // namespace ctd
