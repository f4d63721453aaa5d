// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/factor_model.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ctdplan/error.hpp"

namespace ctd {

using nlohmann::json;

Constraint Constraint::atom(int factor, int value) {
    Constraint c;
    c.kind = Kind::Atom;
    c.factor = factor;
    c.value = value;
    return c;
}

Constraint Constraint::negate(Constraint child) {
    Constraint c;
    c.kind = Kind::Not;
    c.children.push_back(std::move(child));
    return c;
}

Constraint Constraint::conjunction(std::vector<Constraint> cs) {
    Constraint c;
    c.kind = Kind::And;
    c.children = std::move(cs);
    return c;
}

Constraint Constraint::disjunction(std::vector<Constraint> cs) {
    Constraint c;
    c.kind = Kind::Or;
    c.children = std::move(cs);
    return c;
}

Constraint Constraint::implication(Constraint lhs, Constraint rhs) {
    Constraint c;
    c.kind = Kind::Implies;
    c.children.push_back(std::move(lhs));
    c.children.push_back(std::move(rhs));
    return c;
}

Tri eval_constraint(const Constraint& c, const Combination& assignment) {
    switch (c.kind) {
        case Constraint::Kind::Atom: {
            const int v = assignment[static_cast<std::size_t>(c.factor)];
            if (v == kUnassigned) return Tri::Unknown;
            return v == c.value ? Tri::True : Tri::False;
        }
        case Constraint::Kind::Not: {
            const Tri t = eval_constraint(c.children[0], assignment);
            if (t == Tri::Unknown) return Tri::Unknown;
            return t == Tri::True ? Tri::False : Tri::True;
        }
        case Constraint::Kind::And: {
            bool unknown = false;
            for (const auto& child : c.children) {
                const Tri t = eval_constraint(child, assignment);
                if (t == Tri::False) return Tri::False;
                if (t == Tri::Unknown) unknown = true;
            }
            return unknown ? Tri::Unknown : Tri::True;
        }
        case Constraint::Kind::Or: {
            bool unknown = false;
            for (const auto& child : c.children) {
                const Tri t = eval_constraint(child, assignment);
                if (t == Tri::True) return Tri::True;
                if (t == Tri::Unknown) unknown = true;
            }
            return unknown ? Tri::Unknown : Tri::False;
        }
        case Constraint::Kind::Implies: {
            // forbids lhs-and-not-rhs
            const Tri lhs = eval_constraint(c.children[0], assignment);
            if (lhs == Tri::False) return Tri::False;
            const Tri rhs = eval_constraint(c.children[1], assignment);
            if (rhs == Tri::True) return Tri::False;
            if (lhs == Tri::True && rhs == Tri::False) return Tri::True;
            return Tri::Unknown;
        }
    }
    return Tri::Unknown;
}

FactorModel::FactorModel(std::vector<Factor> factors, std::vector<Constraint> constraints)
    : factors_(std::move(factors)), constraints_(std::move(constraints)) {
    validate();
}

void FactorModel::validate() const {
    if (factors_.empty()) throw ValidationError("model must declare at least one factor");
    std::unordered_set<std::string> names;
    for (const auto& f : factors_) {
        if (f.name.empty()) throw ValidationError("factor name must be nonempty");
        if (!names.insert(f.name).second) {
            throw ValidationError("duplicate factor name: " + f.name);
        }
        if (f.values.size() < 2) {
            throw ValidationError("factor " + f.name + " must have at least 2 values");
        }
        std::unordered_set<std::string> vals;
        for (const auto& v : f.values) {
            if (!vals.insert(v).second) {
                throw ValidationError("factor " + f.name + " has duplicate value: " + v);
            }
        }
    }
    // Atoms must have been resolved by the parser/builder.
    auto check = [&](const Constraint& c, auto&& self) -> void {
        switch (c.kind) {
            case Constraint::Kind::Atom:
                if (c.factor < 0 || static_cast<std::size_t>(c.factor) >= factors_.size() ||
                    c.value < 0 ||
                    static_cast<std::size_t>(c.value) >= factors_[static_cast<std::size_t>(c.factor)].values.size()) {
                    throw ValidationError("constraint atom references an unresolved factor or value");
                }
                break;
            case Constraint::Kind::Not:
                if (c.children.size() != 1) throw ValidationError("'not' takes exactly one argument");
                break;
            case Constraint::Kind::Implies:
                if (c.children.size() != 2) throw ValidationError("'implies' takes exactly two arguments");
                break;
            case Constraint::Kind::And:
            case Constraint::Kind::Or:
                if (c.children.empty()) throw ValidationError("'and'/'or' take at least one argument");
                break;
        }
        for (const auto& child : c.children) self(child, self);
    };
    for (const auto& c : constraints_) check(c, check);
}

int FactorModel::factor_index(std::string_view name) const {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int FactorModel::value_index(int factor, std::string_view label) const {
    const auto& values = factors_[static_cast<std::size_t>(factor)].values;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == label) return static_cast<int>(i);
    }
    return -1;
}

bool FactorModel::is_valid(const Combination& c) const {
    if (c.size() != factors_.size()) {
        throw ValidationError("combination must assign every factor");
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] < 0 || static_cast<std::size_t>(c[i]) >= factors_[i].values.size()) {
            throw ValidationError("combination references unknown value for factor " + factors_[i].name);
        }
    }
    for (const auto& constraint : constraints_) {
        if (eval_constraint(constraint, c) == Tri::True) return false;
    }
    return true;
}

bool FactorModel::partial_forbidden(const Combination& partial) const {
    for (const auto& constraint : constraints_) {
        if (eval_constraint(constraint, partial) == Tri::True) return true;
    }
    return false;
}

SpaceSize FactorModel::space_size() const {
    SpaceSize out;
    std::uint64_t full = 1;
    bool overflow = false;
    for (const auto& f : factors_) {
        const std::uint64_t m = f.values.size();
        if (full > std::numeric_limits<std::uint64_t>::max() / m) {
            overflow = true;
            full = std::numeric_limits<std::uint64_t>::max();
            break;
        }
        full *= m;
    }
    out.full = full;
    if (overflow || full > kEnumerationCap) return out;

    if (constraints_.empty()) {
        out.valid = full;
        return out;
    }
    std::uint64_t valid = 0;
    Combination c(factors_.size(), 0);
    while (true) {
        if (is_valid(c)) ++valid;
        // odometer increment, last factor fastest
        std::size_t i = factors_.size();
        while (i > 0) {
            --i;
            if (static_cast<std::size_t>(++c[i]) < factors_[i].values.size()) break;
            c[i] = 0;
            if (i == 0) {
                out.valid = valid;
                return out;
            }
        }
    }
}

std::vector<std::string> FactorModel::labels_of(const Combination& c) const {
    std::vector<std::string> labels;
    labels.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        labels.push_back(factors_[i].values[static_cast<std::size_t>(c[i])]);
    }
    return labels;
}

Combination FactorModel::combination_from_labels(const std::vector<std::string>& labels) const {
    if (labels.size() != factors_.size()) {
        throw ValidationError("expected one value per factor");
    }
    Combination c(factors_.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int v = value_index(static_cast<int>(i), labels[i]);
        if (v < 0) {
            throw ValidationError("unknown value \"" + labels[i] + "\" for factor " + factors_[i].name);
        }
        c[i] = v;
    }
    return c;
}

namespace {

Constraint constraint_from_json(const json& node, const std::vector<Factor>& factors) {
    auto find_factor = [&](const std::string& name) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i].name == name) return static_cast<int>(i);
        }
        return -1;
    };
    if (!node.is_object()) throw ValidationError("constraint node must be an object");
    if (node.contains("factor")) {
        const std::string fname = node.at("factor").get<std::string>();
        const std::string vlabel = node.at("value").get<std::string>();
        const int fi = find_factor(fname);
        if (fi < 0) throw ValidationError("unknown factor in constraint: " + fname);
        const auto& values = factors[static_cast<std::size_t>(fi)].values;
        int vi = -1;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] == vlabel) vi = static_cast<int>(i);
        }
        if (vi < 0) {
            throw ValidationError("unknown value \"" + vlabel + "\" for factor " + fname +
                                  " in constraint");
        }
        return Constraint::atom(fi, vi);
    }
    const std::string op = node.at("op").get<std::string>();
    std::vector<Constraint> args;
    for (const auto& child : node.at("args")) {
        args.push_back(constraint_from_json(child, factors));
    }
    if (op == "not") {
        if (args.size() != 1) throw ValidationError("'not' takes exactly one argument");
        return Constraint::negate(std::move(args[0]));
    }
    if (op == "and") return Constraint::conjunction(std::move(args));
    if (op == "or") return Constraint::disjunction(std::move(args));
    if (op == "implies") {
        if (args.size() != 2) throw ValidationError("'implies' takes exactly two arguments");
        return Constraint::implication(std::move(args[0]), std::move(args[1]));
    }
    throw ValidationError("unknown constraint operator: " + op);
}

json constraint_to_json(const Constraint& c, const std::vector<Factor>& factors) {
    switch (c.kind) {
        case Constraint::Kind::Atom:
            return json{{"factor", factors[static_cast<std::size_t>(c.factor)].name},
                        {"value", factors[static_cast<std::size_t>(c.factor)]
                                      .values[static_cast<std::size_t>(c.value)]}};
        case Constraint::Kind::Not: {
            json args = json::array();
            args.push_back(constraint_to_json(c.children[0], factors));
            return json{{"op", "not"}, {"args", args}};
        }
        case Constraint::Kind::And:
        case Constraint::Kind::Or:
        case Constraint::Kind::Implies: {
            json args = json::array();
            for (const auto& child : c.children) args.push_back(constraint_to_json(child, factors));
            const char* op = c.kind == Constraint::Kind::And   ? "and"
                             : c.kind == Constraint::Kind::Or  ? "or"
                                                               : "implies";
            return json{{"op", op}, {"args", args}};
        }
    }
    return json();
}

}  // namespace

FactorModel FactorModel::parse(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model document: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("factors")) {
            throw ValidationError("model document must contain a \"factors\" array");
        }
        std::vector<Factor> factors;
        for (const auto& f : doc.at("factors")) {
            Factor factor;
            factor.name = f.at("name").get<std::string>();
            for (const auto& v : f.at("values")) factor.values.push_back(v.get<std::string>());
            factors.push_back(std::move(factor));
        }
        std::vector<Constraint> constraints;
        if (doc.contains("constraints")) {
            for (const auto& c : doc.at("constraints")) {
                constraints.push_back(constraint_from_json(c, factors));
            }
        }
        return FactorModel(std::move(factors), std::move(constraints));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model document: ") + e.what());
    }
}

FactorModel FactorModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

json FactorModel::to_json() const {
    json factors = json::array();
    for (const auto& f : factors_) {
        factors.push_back(json{{"name", f.name}, {"values", f.values}});
    }
    json constraints = json::array();
    for (const auto& c : constraints_) constraints.push_back(constraint_to_json(c, factors_));
    return json{{"factors", factors}, {"constraints", constraints}};
}

std::string FactorModel::serialize() const { return to_json().dump(2); }

}  // namespace ctd
