#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "boxverify/box.hpp"
#include "boxverify/rational.hpp"

namespace boxverify {

// A declared specification variable: network input X_<i> or output Y_<j>.
struct Variable {
    enum class Kind { Input = 0, Output = 1 };
    Kind kind = Kind::Input;
    int index = 0;

    // Inputs order before outputs; used as the canonical evaluation order.
    auto operator<=>(const Variable&) const = default;
    std::string name() const;
};

enum class Relation { LessEq, GreaterEq };

// Normal form: (sum of coefficient * variable) relation constant.
// The coefficient map is never empty and never holds a zero coefficient.
struct LinearAtom {
    std::map<Variable, Rational> coefficients;
    Rational constant;
    Relation relation = Relation::LessEq;

    bool operator==(const LinearAtom&) const = default;
};

// Boolean combination of linear atoms. The VNNLIB fragment has no negation;
// `not`, `ite`, `let` and `=` are rejected at parse time.
struct Formula {
    enum class Kind { Atom, And, Or };
    Kind kind = Kind::And;
    LinearAtom atom;                 // meaningful when kind == Atom
    std::vector<Formula> children;   // meaningful when kind == And / Or

    bool operator==(const Formula&) const = default;

    static Formula make_atom(LinearAtom a);
    static Formula make_and(std::vector<Formula> children);
    static Formula make_or(std::vector<Formula> children);
};

// Parsed VNNLIB file. `assertion` is always an And node over the file's
// (assert ...) forms, in file order; by VNNLIB convention it encodes the
// violation condition.
struct SpecFile {
    int input_count = 0;
    int output_count = 0;
    Formula assertion;
};

SpecFile parse_spec(std::string_view text);
SpecFile parse_spec_file(const std::string& path);

// Emits declarations plus one (assert ...) per top-level conjunct. Parsing
// the result reproduces the SpecFile structurally.
std::string print_spec(const SpecFile& spec);

// Tightest box implied by the top-level conjunct atoms that constrain a
// single input variable. Every input must end up with finite bounds.
Box extract_input_box(const SpecFile& spec);

// True iff some Or node has an atom referencing an input variable anywhere
// beneath it. Such specifications are out of scope for the box pipeline and
// force an `unknown` verdict.
bool has_complex_input_disjunction(const SpecFile& spec);

}  // namespace boxverify
