// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ctd {

/// One design variable: a name and an ordered list of discrete value labels.
/// The first value is the reference level for regression dummy coding.
struct Factor {
    std::string name;
    std::vector<std::string> values;
};

/// A full assignment: one value index per factor, in model factor order.
/// Partial assignments use kUnassigned for factors not yet set.
using Combination = std::vector<int>;

inline constexpr int kUnassigned = -1;

/// Logical expression over (factor, value) atoms. A combination satisfying a
/// constraint expression is forbidden. `implies(lhs, rhs)` forbids the
/// combinations where lhs holds and rhs does not, i.e. it desugars to
/// and(lhs, not(rhs)).
struct Constraint {
    enum class Kind { Atom, Not, And, Or, Implies };

    Kind kind = Kind::Atom;
    int factor = -1;  // resolved indices, valid for Atom nodes
    int value = -1;
    std::vector<Constraint> children;

    static Constraint atom(int factor, int value);
    static Constraint negate(Constraint c);
    static Constraint conjunction(std::vector<Constraint> cs);
    static Constraint disjunction(std::vector<Constraint> cs);
    static Constraint implication(Constraint lhs, Constraint rhs);
};

/// Three-valued truth for evaluating constraints on partial assignments.
enum class Tri { False, True, Unknown };

Tri eval_constraint(const Constraint& c, const Combination& assignment);

struct SpaceSize {
    std::uint64_t full = 0;
    std::optional<std::uint64_t> valid;  // absent when full exceeds the enumeration cap
};

/// The declared design space: factors, their levels, and forbidding
/// constraints. Immutable after construction; concurrent reads are safe.
class FactorModel {
public:
    FactorModel(std::vector<Factor> factors, std::vector<Constraint> constraints);

    /// Parse and validate a JSON model document (see README for the format).
    static FactorModel parse(std::string_view text);
    static FactorModel load(const std::string& path);

    nlohmann::json to_json() const;
    std::string serialize() const;

    const std::vector<Factor>& factors() const { return factors_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    std::size_t factor_count() const { return factors_.size(); }

    /// Index of a factor by name, or -1.
    int factor_index(std::string_view name) const;
    /// Index of a value label within a factor, or -1.
    int value_index(int factor, std::string_view label) const;

    /// True iff the complete combination violates no constraint.
    bool is_valid(const Combination& c) const;

    /// True iff some constraint is already definitely violated by a partial
    /// assignment (used for search pruning).
    bool partial_forbidden(const Combination& partial) const;

    /// Full-factorial count, and the exact valid count when the full count is
    /// within the enumeration cap (10^6).
    SpaceSize space_size() const;

    /// Translate a complete combination to value labels, in factor order.
    std::vector<std::string> labels_of(const Combination& c) const;

    /// Translate labels (one per factor, in factor order) to a Combination.
    Combination combination_from_labels(const std::vector<std::string>& labels) const;

    static constexpr std::uint64_t kEnumerationCap = 1'000'000;

private:
    void validate() const;

    std::vector<Factor> factors_;
    std::vector<Constraint> constraints_;
};

}  // namespace ctd
