#ifndef ZLAB_FALGEBRA_HPP
#define ZLAB_FALGEBRA_HPP

#include <boost/rational.hpp>
#include <functional>
#include <string>
#include <vector>

#include "zlab/errors.hpp"

namespace zlab {

using Rat = boost::rational<long long>;

// exact rational from a nonnegative decimal literal ("0.4" -> 2/5)
Rat rat_from_decimal(const std::string& text);
// terminating decimal for denominators of the form 2^a 5^b, else "p/q"
std::string rat_to_string(const Rat& r);
double rat_to_double(const Rat& r);

// ---------------------------------------------------------------------------
// function DSL
//
//   expr   := term { "+" term }
//   term   := [ coeff "*" ] atom
//   atom   := "sin2" | "cos2" | "pow(" number ")"
//
// Trig atoms live on [pi L, pi L + U], power atoms on [L, L + U]; mixing the
// two conventions in one function is rejected.
// ---------------------------------------------------------------------------

enum class AtomKind { Sin2, Cos2, Pow };
enum class SegmentConvention { Trig, Power };

struct Term {
    Rat coeff{1};
    AtomKind kind = AtomKind::Sin2;
    Rat delta{0};  // exponent, Pow only
};

struct FunctionExpr {
    std::vector<Term> terms;  // canonical: sin2, cos2, then pow by descending delta

    SegmentConvention convention() const;
    bool is_constant() const;  // true iff pointwise constant (e.g. sin2 + cos2)
};

FunctionExpr parse_function(const std::string& text);
std::string print_function(const FunctionExpr& f);

// pointwise value; L is the power-convention base (ignored by trig atoms)
double eval_function(const FunctionExpr& f, double t, double L);

// ---------------------------------------------------------------------------
// external functions E(U): exact linear combinations over the atoms
//   CONST = 1,  TRIG = (sin U / U) cos U,  UPOW(delta) = U^delta
// ---------------------------------------------------------------------------

enum class ExtAtomKind { Const, Trig, Upow };

struct ExtTerm {
    Rat coeff{0};
    ExtAtomKind kind = ExtAtomKind::Const;
    Rat delta{0};  // Upow only
};

struct ExternalExpr {
    std::vector<ExtTerm> terms;  // canonical order, no duplicates, no zeros

    void canonicalize();
    bool operator==(const ExternalExpr& other) const;
};

double eval_external(const ExternalExpr& e, double U);
std::string print_external(const ExternalExpr& e);

// closed form of H(U) = (1/U) * integral of f over one segment
ExternalExpr mean_integral_symbolic(const FunctionExpr& f);

// the factor F[f(alpha0)] = 1 / f(alpha0)
struct StructuralFactor {
    std::string display;
    std::function<double(double /*alpha0*/, double /*L*/)> eval;
};

StructuralFactor structural_factor(const FunctionExpr& f);

}  // namespace zlab

#endif
