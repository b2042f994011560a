#include "zlab/falgebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <sstream>

namespace zlab {

// ---------------------------------------------------------------------------
// rationals
// ---------------------------------------------------------------------------

Rat rat_from_decimal(const std::string& text) {
    if (text.empty()) throw validation_error("empty numeric literal");
    long long ip = 0, fp = 0, scale = 1;
    std::size_t i = 0;
    bool digits = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        ip = ip * 10 + (text[i] - '0');
        digits = true;
        if (ip > (1LL << 50)) throw validation_error("numeric literal too large");
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            fp = fp * 10 + (text[i] - '0');
            scale *= 10;
            digits = true;
            if (scale > (1LL << 50))
                throw validation_error("too many decimal digits");
        }
    }
    if (!digits || i != text.size())
        throw validation_error("malformed numeric literal: " + text);
    return Rat(ip) + Rat(fp, scale);
}

std::string rat_to_string(const Rat& r) {
    long long num = r.numerator(), den = r.denominator();
    // terminating decimal iff den = 2^a 5^b
    long long d = den;
    int a = 0, b = 0;
    while (d % 2 == 0) { d /= 2; ++a; }
    while (d % 5 == 0) { d /= 5; ++b; }
    if (d != 1) {
        std::ostringstream os;
        os << num << "/" << den;
        return os.str();
    }
    int k = std::max(a, b);
    long long p10 = 1;
    for (int i = 0; i < k; ++i) p10 *= 10;
    bool neg = num < 0;
    long long scaled = (neg ? -num : num) * (p10 / den);  // den divides 10^k
    std::ostringstream os;
    if (neg) os << "-";
    os << scaled / p10;
    long long frac = scaled % p10;
    if (frac != 0) {
        std::string fs = std::to_string(frac);
        fs.insert(fs.begin(), k - fs.size(), '0');
        while (!fs.empty() && fs.back() == '0') fs.pop_back();
        os << "." << fs;
    }
    return os.str();
}

double rat_to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// ---------------------------------------------------------------------------
// FunctionExpr
// ---------------------------------------------------------------------------

SegmentConvention FunctionExpr::convention() const {
    bool trig = false, power = false;
    for (const Term& t : terms)
        (t.kind == AtomKind::Pow ? power : trig) = true;
    if (trig && power)
        throw validation_error("mixed trig/power atoms have no single segment convention");
    return power ? SegmentConvention::Power : SegmentConvention::Trig;
}

bool FunctionExpr::is_constant() const {
    // only constant combination in the grammar: a*sin2 + a*cos2
    Rat s{0}, c{0};
    for (const Term& t : terms) {
        if (t.kind == AtomKind::Pow) return false;
        (t.kind == AtomKind::Sin2 ? s : c) += t.coeff;
    }
    return s == c;
}

namespace {

void validate_and_canonicalize(FunctionExpr& f) {
    // merge trig duplicates, keep pow atoms distinct
    Rat sin_c{0}, cos_c{0};
    bool has_sin = false, has_cos = false;
    std::vector<Term> pows;
    for (const Term& t : f.terms) {
        if (t.coeff < Rat(0)) throw validation_error("negative coefficient");
        switch (t.kind) {
            case AtomKind::Sin2: sin_c += t.coeff; has_sin = true; break;
            case AtomKind::Cos2: cos_c += t.coeff; has_cos = true; break;
            case AtomKind::Pow:
                if (t.delta <= Rat(0))
                    throw validation_error("pow exponent must be positive");
                for (const Term& q : pows)
                    if (q.delta == t.delta)
                        throw validation_error(
                            "duplicate exponent in sum of powers: pow(" +
                            rat_to_string(t.delta) + ")");
                pows.push_back(t);
                break;
        }
    }
    std::sort(pows.begin(), pows.end(),
              [](const Term& a, const Term& b) { return a.delta > b.delta; });
    std::vector<Term> out;
    if (has_sin && sin_c != Rat(0)) out.push_back({sin_c, AtomKind::Sin2, Rat(0)});
    if (has_cos && cos_c != Rat(0)) out.push_back({cos_c, AtomKind::Cos2, Rat(0)});
    for (Term& t : pows)
        if (t.coeff != Rat(0)) out.push_back(t);
    if (out.empty())
        throw validation_error("function is identically zero");
    f.terms = std::move(out);
    f.convention();  // throws on mixed atoms
}

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    bool lookahead_word(const char* w) {
        skip_ws();
        std::size_t n = std::strlen(w);
        return s.compare(pos, n, w) == 0;
    }
    std::string number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
            ++pos;
        if (pos == start) throw parse_error("expected number", start);
        return s.substr(start, pos - start);
    }

    Term term() {
        skip_ws();
        std::size_t start = pos;
        Term t;
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                               s[pos] == '.')) {
            t.coeff = rat_from_decimal(number());
            if (!eat('*')) throw parse_error("expected '*' after coefficient", pos);
        }
        if (lookahead_word("sin2")) { pos += 4; t.kind = AtomKind::Sin2; return t; }
        if (lookahead_word("cos2")) { pos += 4; t.kind = AtomKind::Cos2; return t; }
        if (lookahead_word("pow(")) {
            pos += 4;
            t.kind = AtomKind::Pow;
            t.delta = rat_from_decimal(number());
            if (!eat(')')) throw parse_error("expected ')'", pos);
            return t;
        }
        throw parse_error("expected atom sin2|cos2|pow(..)", start);
    }

    FunctionExpr expr() {
        FunctionExpr f;
        f.terms.push_back(term());
        while (eat('+')) f.terms.push_back(term());
        skip_ws();
        if (pos != s.size()) throw parse_error("trailing input", pos);
        return f;
    }
};

}  // namespace

FunctionExpr parse_function(const std::string& text) {
    Parser p{text};
    FunctionExpr f = p.expr();
    validate_and_canonicalize(f);
    return f;
}

std::string print_function(const FunctionExpr& f) {
    std::ostringstream os;
    bool first = true;
    for (const Term& t : f.terms) {
        if (!first) os << "+";
        first = false;
        if (t.coeff != Rat(1)) os << rat_to_string(t.coeff) << "*";
        switch (t.kind) {
            case AtomKind::Sin2: os << "sin2"; break;
            case AtomKind::Cos2: os << "cos2"; break;
            case AtomKind::Pow: os << "pow(" << rat_to_string(t.delta) << ")"; break;
        }
    }
    return os.str();
}

double eval_function(const FunctionExpr& f, double t, double L) {
    double v = 0.0;
    for (const Term& term : f.terms) {
        double c = rat_to_double(term.coeff);
        switch (term.kind) {
            case AtomKind::Sin2: {
                double s = std::sin(t);
                v += c * s * s;
                break;
            }
            case AtomKind::Cos2: {
                double s = std::cos(t);
                v += c * s * s;
                break;
            }
            case AtomKind::Pow: {
                double u = t - L;
                if (u < -1e-9 * std::max(1.0, std::abs(L)))
                    throw std::domain_error("eval_function: t < L under pow atom");
                if (u < 0.0) u = 0.0;
                v += c * std::pow(u, rat_to_double(term.delta));
                break;
            }
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// ExternalExpr
// ---------------------------------------------------------------------------

namespace {
int atom_rank(const ExtTerm& t) {
    switch (t.kind) {
        case ExtAtomKind::Const: return 0;
        case ExtAtomKind::Trig: return 1;
        case ExtAtomKind::Upow: return 2;
    }
    return 3;
}
}  // namespace

void ExternalExpr::canonicalize() {
    std::sort(terms.begin(), terms.end(), [](const ExtTerm& a, const ExtTerm& b) {
        if (atom_rank(a) != atom_rank(b)) return atom_rank(a) < atom_rank(b);
        return a.delta > b.delta;
    });
    std::vector<ExtTerm> out;
    for (const ExtTerm& t : terms) {
        if (!out.empty() && out.back().kind == t.kind && out.back().delta == t.delta)
            out.back().coeff += t.coeff;
        else
            out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const ExtTerm& t) { return t.coeff == Rat(0); }),
              out.end());
    terms = std::move(out);
}

bool ExternalExpr::operator==(const ExternalExpr& other) const {
    if (terms.size() != other.terms.size()) return false;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const ExtTerm& a = terms[i];
        const ExtTerm& b = other.terms[i];
        if (a.kind != b.kind || a.coeff != b.coeff || a.delta != b.delta)
            return false;
    }
    return true;
}

double eval_external(const ExternalExpr& e, double U) {
    double v = 0.0;
    for (const ExtTerm& t : e.terms) {
        double c = rat_to_double(t.coeff);
        switch (t.kind) {
            case ExtAtomKind::Const: v += c; break;
            case ExtAtomKind::Trig: v += c * (std::sin(U) / U) * std::cos(U); break;
            case ExtAtomKind::Upow: v += c * std::pow(U, rat_to_double(t.delta)); break;
        }
    }
    return v;
}

std::string print_external(const ExternalExpr& e) {
    if (e.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const ExtTerm& t : e.terms) {
        if (!first) os << " + ";
        first = false;
        os << rat_to_string(t.coeff);
        switch (t.kind) {
            case ExtAtomKind::Const: break;
            case ExtAtomKind::Trig: os << "*(sinU/U)cosU"; break;
            case ExtAtomKind::Upow: os << "*U^" << rat_to_string(t.delta); break;
        }
    }
    return os.str();
}

ExternalExpr mean_integral_symbolic(const FunctionExpr& f) {
    ExternalExpr e;
    const Rat half(1, 2);
    for (const Term& t : f.terms) {
        switch (t.kind) {
            case AtomKind::Sin2:
                // (1/U) int sin^2 over [pi L, pi L + U] = 1/2 - (1/2)(sinU/U)cosU
                e.terms.push_back({t.coeff * half, ExtAtomKind::Const, Rat(0)});
                e.terms.push_back({-t.coeff * half, ExtAtomKind::Trig, Rat(0)});
                break;
            case AtomKind::Cos2:
                // direct integration gives the "+" sign here
                e.terms.push_back({t.coeff * half, ExtAtomKind::Const, Rat(0)});
                e.terms.push_back({t.coeff * half, ExtAtomKind::Trig, Rat(0)});
                break;
            case AtomKind::Pow:
                // (1/U) int (t-L)^d over [L, L+U] = U^d / (1+d)
                e.terms.push_back(
                    {t.coeff / (Rat(1) + t.delta), ExtAtomKind::Upow, t.delta});
                break;
        }
    }
    e.canonicalize();
    return e;
}

StructuralFactor structural_factor(const FunctionExpr& f) {
    StructuralFactor sf;
    sf.display = "1/(" + print_function(f) + ")(alpha0)";
    FunctionExpr copy = f;
    sf.eval = [copy](double alpha0, double L) {
        double v = eval_function(copy, alpha0, L);
        if (v == 0.0)
            throw degenerate_error("structural factor: f(alpha0) = 0");
        return 1.0 / v;
    };
    return sf;
}

}  // namespace zlab
