// Element literals: "c * h(i,-n)^k * ... * e(c1,...,cd)" terms joined by " + ".
// Indices are 1-based; ^k is written only for k > 1; the zero vector is "0".

#include "voaforms/voa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace voaforms {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_top(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == sep && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

long long parse_int(std::string_view s, std::string_view what) {
    s = trim(s);
    long long v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty())
        throw VoaError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string TruncatedVOA::to_literal(const GradedVector& v) const {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : v.terms()) {
        if (!first) os << " + ";
        first = false;
        os << format_rational(c);
        for (std::size_t p = 0; p < m.modes.size();) {
            std::size_t q = p;
            while (q < m.modes.size() && m.modes[q] == m.modes[p]) ++q;
            os << " * h(" << m.modes[p].index + 1 << ",-" << m.modes[p].n << ")";
            if (q - p > 1) os << "^" << (q - p);
            p = q;
        }
        os << " * e(";
        for (std::size_t i = 0; i < m.tail.size(); ++i) os << (i ? "," : "") << m.tail[i];
        os << ")";
    }
    return os.str();
}

GradedVector TruncatedVOA::parse_literal(std::string_view text, TruncationMode mode) const {
    GradedVector v(cutoff_);
    text = trim(text);
    if (text == "0") return v;
    if (text.empty()) throw VoaError("empty element literal");
    for (std::string_view term : split_top(text, '+')) {
        if (term.empty()) throw VoaError("empty term in element literal");
        Rational coef = 1;
        FockMonomial m{{}, LatticeVector(rank(), 0)};
        bool have_tail = false;
        bool have_coef = false;
        for (std::string_view factor : split_top(term, '*')) {
            if (factor.rfind("h(", 0) == 0) {
                const auto close = factor.find(')');
                if (close == std::string_view::npos) throw VoaError("unclosed h( in literal");
                const auto args = split_top(factor.substr(2, close - 2), ',');
                if (args.size() != 2) throw VoaError("h(i,-n) needs two arguments");
                const long long i = parse_int(args[0], "mode index");
                const long long n = -parse_int(args[1], "mode degree");
                if (i < 1 || static_cast<std::size_t>(i) > rank()) throw VoaError("mode index out of range");
                if (n < 1) throw VoaError("mode degree must be negative");
                long long power = 1;
                std::string_view rest = trim(factor.substr(close + 1));
                if (!rest.empty()) {
                    if (rest.front() != '^') throw VoaError("unexpected text after h(...)");
                    power = parse_int(rest.substr(1), "exponent");
                    if (power < 1) throw VoaError("exponent must be positive");
                }
                for (long long p = 0; p < power; ++p)
                    m.modes.push_back(Mode{static_cast<int>(n), static_cast<int>(i - 1)});
            } else if (factor.rfind("e(", 0) == 0) {
                if (have_tail) throw VoaError("two e(...) factors in one term");
                if (factor.back() != ')') throw VoaError("unclosed e( in literal");
                const auto args = split_top(factor.substr(2, factor.size() - 3), ',');
                if (args.size() != rank()) throw VoaError("e(...) has wrong rank");
                for (std::size_t i = 0; i < rank(); ++i) m.tail[i] = parse_int(args[i], "lattice coordinate");
                have_tail = true;
            } else {
                if (have_coef) throw VoaError("two coefficients in one term");
                try {
                    coef *= parse_rational(std::string(factor));
                } catch (const std::exception&) {
                    throw VoaError("malformed coefficient '" + std::string(factor) + "'");
                }
                have_coef = true;
            }
        }
        std::sort(m.modes.begin(), m.modes.end());
        const int d = degree(m);
        if (d > cutoff_) {
            if (mode == TruncationMode::Drop) continue;
            throw TruncationError("literal term above cutoff");
        }
        v.add_term(m, coef);
    }
    return v;
}

}  // namespace voaforms
