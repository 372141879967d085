#include <cctype>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "boxverify/errors.hpp"
#include "boxverify/vnnlib.hpp"

namespace boxverify {

std::string Variable::name() const {
    return (kind == Kind::Input ? "X_" : "Y_") + std::to_string(index);
}

Formula Formula::make_atom(LinearAtom a) {
    Formula f;
    f.kind = Kind::Atom;
    f.atom = std::move(a);
    return f;
}

Formula Formula::make_and(std::vector<Formula> children) {
    Formula f;
    f.kind = Kind::And;
    f.children = std::move(children);
    return f;
}

Formula Formula::make_or(std::vector<Formula> children) {
    Formula f;
    f.kind = Kind::Or;
    f.children = std::move(children);
    return f;
}

namespace {

struct Token {
    std::string text;
    std::size_t line;
};

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == ';') {
            while (i < n && text[i] != '\n')
                ++i;
        } else if (c == '(' || c == ')') {
            tokens.push_back({std::string(1, c), line});
            ++i;
        } else {
            std::size_t start = i;
            while (i < n && !std::isspace(static_cast<unsigned char>(text[i])) &&
                   text[i] != '(' && text[i] != ')' && text[i] != ';')
                ++i;
            tokens.push_back({std::string(text.substr(start, i - start)), line});
        }
    }
    return tokens;
}

struct Sexp {
    bool is_atom = false;
    std::string atom;
    std::vector<Sexp> list;
    std::size_t line = 0;
};

class SexpReader {
public:
    explicit SexpReader(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::vector<Sexp> read_all() {
        std::vector<Sexp> forms;
        while (pos_ < tokens_.size())
            forms.push_back(read());
        return forms;
    }

private:
    Sexp read() {
        const Token& t = peek();
        if (t.text == ")")
            throw SyntaxError("line " + std::to_string(t.line) + ": unexpected ')'");
        if (t.text == "(") {
            Sexp s;
            s.line = t.line;
            ++pos_;
            while (true) {
                if (pos_ >= tokens_.size())
                    throw SyntaxError("line " + std::to_string(t.line) + ": unbalanced '('");
                if (tokens_[pos_].text == ")") {
                    ++pos_;
                    return s;
                }
                s.list.push_back(read());
            }
        }
        Sexp s;
        s.is_atom = true;
        s.atom = t.text;
        s.line = t.line;
        ++pos_;
        return s;
    }

    const Token& peek() const { return tokens_[pos_]; }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

[[noreturn]] void fail(const Sexp& at, const std::string& msg) {
    throw SyntaxError("line " + std::to_string(at.line) + ": " + msg);
}

bool looks_like_numeral(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
        ++i;
    return i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.');
}

std::optional<Variable> variable_pattern(const std::string& s) {
    if (s.size() < 3 || (s[0] != 'X' && s[0] != 'Y') || s[1] != '_')
        return std::nullopt;
    for (std::size_t i = 2; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return std::nullopt;
    if (s.size() > 3 && s[2] == '0')
        return std::nullopt;  // leading zeros would alias X_01 with X_1
    if (s.size() - 2 > 9)
        throw SyntaxError("variable index too large in '" + s + "'");
    Variable v;
    v.kind = s[0] == 'X' ? Variable::Kind::Input : Variable::Kind::Output;
    v.index = std::stoi(s.substr(2));
    return v;
}

// linear polynomial over declared variables
struct LinTerm {
    std::map<Variable, Rational> coeffs;
    Rational constant = 0;
};

LinTerm term_add(LinTerm a, const LinTerm& b) {
    for (const auto& [v, c] : b.coeffs)
        a.coeffs[v] += c;
    a.constant += b.constant;
    return a;
}

LinTerm term_negate(LinTerm a) {
    for (auto& [v, c] : a.coeffs)
        c = -c;
    a.constant = -a.constant;
    return a;
}

LinTerm term_scale(LinTerm a, const Rational& k) {
    for (auto& [v, c] : a.coeffs)
        c *= k;
    a.constant *= k;
    return a;
}

void drop_zero_coeffs(LinTerm& t) {
    for (auto it = t.coeffs.begin(); it != t.coeffs.end();)
        it = it->second == 0 ? t.coeffs.erase(it) : std::next(it);
}

class SpecBuilder {
public:
    SpecFile build(const std::vector<Sexp>& forms) {
        for (const Sexp& form : forms)
            top_level(form);
        finalize_declarations();

        if (asserts_.empty())
            throw EmptySpec("specification contains no assertions");

        SpecFile spec;
        spec.input_count = input_count_;
        spec.output_count = output_count_;
        spec.assertion = Formula::make_and(std::move(asserts_));
        return spec;
    }

private:
    void top_level(const Sexp& form) {
        if (form.is_atom || form.list.empty() || !form.list[0].is_atom)
            fail(form, "expected (declare-const ...) or (assert ...)");
        const std::string& head = form.list[0].atom;
        if (head == "declare-const")
            declare(form);
        else if (head == "assert") {
            if (form.list.size() != 2)
                fail(form, "assert takes exactly one formula");
            asserts_.push_back(formula(form.list[1]));
        } else
            fail(form, "unsupported top-level form '" + head + "'");
    }

    void declare(const Sexp& form) {
        if (form.list.size() != 3 || !form.list[1].is_atom || !form.list[2].is_atom)
            fail(form, "malformed declare-const");
        if (form.list[2].atom != "Real")
            fail(form, "only sort Real is supported");
        const std::string& name = form.list[1].atom;
        auto v = variable_pattern(name);
        if (!v)
            fail(form, "variable names must be X_<i> or Y_<j>, got '" + name + "'");
        if (!declared_.insert(*v).second)
            fail(form, "duplicate declaration of '" + name + "'");
        if (v->kind == Variable::Kind::Input)
            ++input_count_;
        else
            ++output_count_;
    }

    void finalize_declarations() const {
        if (input_count_ == 0)
            throw SyntaxError("no input variables (X_i) declared");
        if (output_count_ == 0)
            throw SyntaxError("no output variables (Y_j) declared");
        for (const Variable& v : declared_) {
            const int count =
                v.kind == Variable::Kind::Input ? input_count_ : output_count_;
            if (v.index >= count)
                throw SyntaxError("variable indices must be contiguous from 0; '" + v.name() +
                                  "' is out of range for " + std::to_string(count) +
                                  " declarations");
        }
    }

    Formula formula(const Sexp& s) {
        if (s.is_atom)
            fail(s, "expected a formula, got '" + s.atom + "'");
        if (s.list.empty() || !s.list[0].is_atom)
            fail(s, "expected a formula");
        const std::string& head = s.list[0].atom;
        if (head == "and" || head == "or") {
            if (s.list.size() < 2)
                fail(s, "'" + head + "' needs at least one operand");
            std::vector<Formula> children;
            for (std::size_t i = 1; i < s.list.size(); ++i)
                children.push_back(formula(s.list[i]));
            return head == "and" ? Formula::make_and(std::move(children))
                                 : Formula::make_or(std::move(children));
        }
        if (head == "<=" || head == ">=") {
            if (s.list.size() != 3)
                fail(s, "'" + head + "' takes exactly two terms");
            LinTerm lhs = term(s.list[1]);
            LinTerm rhs = term(s.list[2]);
            // normalize to (lhs - rhs) relation 0, then move the constant right
            LinTerm moved = term_add(std::move(lhs), term_negate(rhs));
            drop_zero_coeffs(moved);
            if (moved.coeffs.empty())
                fail(s, "atom constrains no variables");
            LinearAtom atom;
            atom.coefficients = std::move(moved.coeffs);
            atom.constant = -moved.constant;
            atom.relation = head == "<=" ? Relation::LessEq : Relation::GreaterEq;
            return Formula::make_atom(std::move(atom));
        }
        if (head == "not" || head == "ite" || head == "let" || head == "=")
            fail(s, "'" + head + "' is outside the supported VNNLIB fragment");
        fail(s, "unknown operator '" + head + "'");
    }

    LinTerm term(const Sexp& s) {
        if (s.is_atom) {
            if (auto v = variable_pattern(s.atom)) {
                if (!declared_.count(*v))
                    throw UndeclaredVariable("line " + std::to_string(s.line) +
                                             ": variable '" + s.atom + "' was not declared");
                LinTerm t;
                t.coeffs[*v] = 1;
                return t;
            }
            if (looks_like_numeral(s.atom)) {
                LinTerm t;
                t.constant = rational_from_decimal(s.atom);
                return t;
            }
            fail(s, "unknown symbol '" + s.atom + "'");
        }
        if (s.list.empty() || !s.list[0].is_atom)
            fail(s, "expected a term");
        const std::string& head = s.list[0].atom;
        if (head == "+") {
            if (s.list.size() < 3)
                fail(s, "'+' needs at least two operands");
            LinTerm acc = term(s.list[1]);
            for (std::size_t i = 2; i < s.list.size(); ++i)
                acc = term_add(std::move(acc), term(s.list[i]));
            return acc;
        }
        if (head == "-") {
            if (s.list.size() == 2)
                return term_negate(term(s.list[1]));
            if (s.list.size() == 3)
                return term_add(term(s.list[1]), term_negate(term(s.list[2])));
            fail(s, "'-' is unary or binary");
        }
        if (head == "*") {
            if (s.list.size() < 3)
                fail(s, "'*' needs at least two operands");
            // at most one factor may mention variables, the rest fold into a scale
            std::optional<LinTerm> linear;
            Rational scale = 1;
            for (std::size_t i = 1; i < s.list.size(); ++i) {
                LinTerm f = term(s.list[i]);
                if (f.coeffs.empty()) {
                    scale *= f.constant;
                } else if (!linear) {
                    linear = std::move(f);
                } else {
                    fail(s, "non-linear term: product of two variable expressions");
                }
            }
            if (!linear) {
                LinTerm t;
                t.constant = scale;
                return t;
            }
            return term_scale(std::move(*linear), scale);
        }
        fail(s, "unknown term operator '" + head + "'");
    }

    std::set<Variable> declared_;
    int input_count_ = 0;
    int output_count_ = 0;
    std::vector<Formula> asserts_;
};

}  // namespace

SpecFile parse_spec(std::string_view text) {
    SexpReader reader(tokenize(text));
    return SpecBuilder().build(reader.read_all());
}

SpecFile parse_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileError("cannot open specification file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

namespace {

void collect_conjunct_atoms(const Formula& f, std::vector<const LinearAtom*>& atoms) {
    if (f.kind == Formula::Kind::Atom)
        atoms.push_back(&f.atom);
    else if (f.kind == Formula::Kind::And)
        for (const Formula& child : f.children)
            collect_conjunct_atoms(child, atoms);
    // Or nodes contribute no unconditional constraints
}

bool mentions_input(const Formula& f) {
    if (f.kind == Formula::Kind::Atom) {
        for (const auto& [v, c] : f.atom.coefficients)
            if (v.kind == Variable::Kind::Input)
                return true;
        return false;
    }
    for (const Formula& child : f.children)
        if (mentions_input(child))
            return true;
    return false;
}

bool contains_complex_or(const Formula& f) {
    if (f.kind == Formula::Kind::Atom)
        return false;
    if (f.kind == Formula::Kind::Or && mentions_input(f))
        return true;
    for (const Formula& child : f.children)
        if (contains_complex_or(child))
            return true;
    return false;
}

}  // namespace

Box extract_input_box(const SpecFile& spec) {
    std::vector<const LinearAtom*> atoms;
    collect_conjunct_atoms(spec.assertion, atoms);

    std::vector<std::optional<Rational>> lower(spec.input_count), upper(spec.input_count);
    for (const LinearAtom* atom : atoms) {
        if (atom->coefficients.size() != 1)
            continue;
        const auto& [v, coeff] = *atom->coefficients.begin();
        if (v.kind != Variable::Kind::Input)
            continue;
        // c*v rel k  =>  v rel' k/c, with rel' flipped when c < 0
        const Rational bound = atom->constant / coeff;
        const bool upper_bound = (atom->relation == Relation::LessEq) == (coeff > 0);
        auto& slot = upper_bound ? upper[v.index] : lower[v.index];
        if (!slot)
            slot = bound;
        else if (upper_bound)
            slot = bound < *slot ? bound : *slot;
        else
            slot = bound > *slot ? bound : *slot;
    }

    Box box;
    box.lo.resize(spec.input_count);
    box.hi.resize(spec.input_count);
    for (int i = 0; i < spec.input_count; ++i) {
        if (!lower[i])
            throw UnboundedInput("input X_" + std::to_string(i) + " has no lower bound");
        if (!upper[i])
            throw UnboundedInput("input X_" + std::to_string(i) + " has no upper bound");
        if (*lower[i] > *upper[i])
            throw InfeasibleBounds("input X_" + std::to_string(i) +
                                   " has lower bound above upper bound");
        box.lo[i] = rational_to_double(*lower[i]);
        box.hi[i] = rational_to_double(*upper[i]);
    }
    return box;
}

bool has_complex_input_disjunction(const SpecFile& spec) {
    return contains_complex_or(spec.assertion);
}

namespace {

void print_formula(std::ostream& os, const Formula& f) {
    switch (f.kind) {
    case Formula::Kind::Atom: {
        const LinearAtom& a = f.atom;
        os << (a.relation == Relation::LessEq ? "(<= " : "(>= ");
        if (a.coefficients.size() > 1)
            os << "(+ ";
        bool first = true;
        for (const auto& [v, c] : a.coefficients) {
            if (!first)
                os << " ";
            first = false;
            os << "(* " << rational_to_decimal(c) << " " << v.name() << ")";
        }
        if (a.coefficients.size() > 1)
            os << ")";
        os << " " << rational_to_decimal(a.constant) << ")";
        break;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
        os << (f.kind == Formula::Kind::And ? "(and" : "(or");
        for (const Formula& child : f.children) {
            os << " ";
            print_formula(os, child);
        }
        os << ")";
        break;
    }
}

}  // namespace

std::string print_spec(const SpecFile& spec) {
    std::ostringstream os;
    for (int i = 0; i < spec.input_count; ++i)
        os << "(declare-const X_" << i << " Real)\n";
    for (int j = 0; j < spec.output_count; ++j)
        os << "(declare-const Y_" << j << " Real)\n";
    for (const Formula& child : spec.assertion.children) {
        os << "(assert ";
        print_formula(os, child);
        os << ")\n";
    }
    return os.str();
}

}  // namespace boxverify
