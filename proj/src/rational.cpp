#include "psadf/rational.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace psadf {

std::optional<Rational> parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) return std::nullopt;

    auto parse_int = [](const std::string& t) -> std::optional<Integer> {
        if (t.empty()) return std::nullopt;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return std::nullopt;
        for (std::size_t j = i; j < t.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(t[j]))) return std::nullopt;
        return Integer(t);
    };

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        auto num = parse_int(s.substr(0, slash));
        auto den = parse_int(s.substr(slash + 1));
        if (!num || !den || *den == 0) return std::nullopt;
        return Rational(*num, *den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        if (head.empty() || head == "-" || head == "+") head += "0";
        auto ipart = parse_int(head);
        if (!ipart || tail.empty()) return std::nullopt;
        for (char c : tail)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        Integer den = 1;
        for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
        Integer frac(tail);
        bool neg = s[0] == '-';
        Rational r = Rational(*ipart) + (neg ? -Rational(frac, den) : Rational(frac, den));
        return r;
    }
    auto n = parse_int(s);
    if (!n) return std::nullopt;
    return Rational(*n);
}

std::string approx_decimal(const Rational& r, int significant) {
    if (r == 0) return "0";
    double v = static_cast<double>(numerator(r)) / static_cast<double>(denominator(r));
    std::ostringstream os;
    os.precision(significant);
    os << v;
    return os.str();
}

}  // namespace psadf
