#include "boxverify/ce.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "boxverify/errors.hpp"

namespace boxverify {

namespace {

std::string shortest_decimal(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string format_counterexample(const std::vector<double>& x, const std::vector<double>& y) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i)
        os << (i ? "\n " : "") << "(X_" << i << " " << shortest_decimal(x[i]) << ")";
    for (std::size_t j = 0; j < y.size(); ++j)
        os << "\n (Y_" << j << " " << shortest_decimal(y[j]) << ")";
    os << ")\n";
    return os.str();
}

void write_counterexample_file(const std::string& path, const std::vector<double>& x,
                               const std::vector<double>& y) {
    std::ofstream out(path);
    if (!out)
        throw FileError("cannot write counterexample file: " + path);
    out << format_counterexample(x, y);
    if (!out.good())
        throw FileError("write failed for counterexample file: " + path);
}

Counterexample parse_counterexample(const std::string& text) {
    // tiny scanner for the fixed ((name value) ...) shape
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < text.size();) {
        const char c = text[i];
        if (c == ';') {
            while (i < text.size() && text[i] != '\n')
                ++i;
        } else if (c == '(' || c == ')') {
            tokens.emplace_back(1, c);
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else {
            std::size_t start = i;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
                   text[i] != '(' && text[i] != ')')
                ++i;
            tokens.push_back(text.substr(start, i - start));
        }
    }

    std::map<int, double> xs;
    std::map<int, double> ys;
    std::size_t pos = 0;
    auto expect = [&](const char* what) {
        if (pos >= tokens.size())
            throw SyntaxError(std::string("counterexample: expected ") + what);
        return tokens[pos++];
    };

    if (expect("'('") != "(")
        throw SyntaxError("counterexample must start with '('");
    while (pos < tokens.size() && tokens[pos] != ")") {
        if (expect("'('") != "(")
            throw SyntaxError("counterexample: expected '(' before a binding");
        const std::string name = expect("variable name");
        const std::string value = expect("value");
        if (expect("')'") != ")")
            throw SyntaxError("counterexample: binding not closed");

        if (name.size() < 3 || (name[0] != 'X' && name[0] != 'Y') || name[1] != '_')
            throw SyntaxError("counterexample: bad variable name '" + name + "'");
        int idx = 0;
        auto idx_res = std::from_chars(name.data() + 2, name.data() + name.size(), idx);
        if (idx_res.ec != std::errc() || idx_res.ptr != name.data() + name.size() || idx < 0)
            throw SyntaxError("counterexample: bad variable name '" + name + "'");
        double v = 0.0;
        auto val_res = std::from_chars(value.data(), value.data() + value.size(), v);
        if (val_res.ec != std::errc() || val_res.ptr != value.data() + value.size())
            throw SyntaxError("counterexample: bad value '" + value + "'");
        auto& target = name[0] == 'X' ? xs : ys;
        if (!target.emplace(idx, v).second)
            throw SyntaxError("counterexample: duplicate binding for '" + name + "'");
    }
    if (pos >= tokens.size() || tokens[pos++] != ")")
        throw SyntaxError("counterexample: missing closing ')'");
    if (pos != tokens.size())
        throw SyntaxError("counterexample: trailing tokens");

    Counterexample ce;
    ce.x.resize(xs.size());
    for (const auto& [idx, v] : xs) {
        if (static_cast<std::size_t>(idx) >= ce.x.size())
            throw SyntaxError("counterexample: X indices are not contiguous");
        ce.x[static_cast<std::size_t>(idx)] = v;
    }
    if (ce.x.empty())
        throw SyntaxError("counterexample assigns no input variables");
    ce.y.resize(ys.size());
    for (const auto& [idx, v] : ys) {
        if (static_cast<std::size_t>(idx) >= ce.y.size())
            throw SyntaxError("counterexample: Y indices are not contiguous");
        ce.y[static_cast<std::size_t>(idx)] = v;
    }
    return ce;
}

Counterexample read_counterexample_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileError("cannot open counterexample file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_counterexample(ss.str());
}

}  // namespace boxverify
