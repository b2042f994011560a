#ifndef ZLAB_CROSSBREED_HPP
#define ZLAB_CROSSBREED_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zlab/falgebra.hpp"
#include "zlab/hop.hpp"

namespace zlab {

// One zeta-factorization formula viewed as an algebraic object: the product
// over r of the modulus ratios is kept symbolic (bound to numbers later).
struct FactorizationFormula {
    int id = 0;
    FunctionExpr f;
    ExternalExpr external;  // E(U), nonzero
};

FactorizationFormula make_formula(int id, const FunctionExpr& f);

// Relation AST; a hybrid formula always normalizes to "value ~ 1".
struct RelNode {
    enum class Kind {
        Const,          // exact rational constant
        ProductRef,     // P_m = prod_r |zeta ratio|^2 (or Ztilde ratio, exact mode)
        InvProductRef,  // 1 / P_m
        FuncValue,      // f_m(alpha_0^m)
        InvFuncValue,   // 1 / f_m(alpha_0^m)
        Sum,
        Product,
    };
    Kind kind = Kind::Const;
    Rat value{1};              // Const
    int formula_id = -1;       // refs
    std::vector<RelNode> children;
};

struct ExtAtomId {
    ExtAtomKind kind;
    Rat delta;
    bool operator==(const ExtAtomId& o) const {
        return kind == o.kind && delta == o.delta;
    }
};

struct HybridFormula {
    RelNode relation;                 // evaluates ~ 1
    std::vector<int> participants;    // formula ids
    std::vector<ExtAtomId> eliminated;
    bool complete = false;
    std::string shape;  // "additive-unit" | "additive-target" | "multiplicative" | "product"
};

// Find rational lambda with sum lambda_m E_m = 1 (no target) or
// E_target = sum lambda_l E_l (target set).  Exact linear algebra over the
// external atoms; unique nonnegative solutions only.
std::optional<HybridFormula> additive_eliminate(
    const std::vector<FactorizationFormula>& formulas,
    std::optional<int> target_id = {});

// Solve E_target = kappa * prod E_l over monomial externals
// (exact exponent addition); kappa = prod(1+Delta_l) / (1+Delta).
std::optional<HybridFormula> multiplicative_eliminate(
    const FactorizationFormula& target,
    const std::vector<FactorizationFormula>& parts);

// Product of two hybrids; never complete (no crossbreeding between the sets).
HybridFormula product_combine(const HybridFormula& a, const HybridFormula& b);

// Numeric substitution: |value - 1|.
double verify_hybrid(const HybridFormula& h,
                     const std::map<int, FactorizationData>& binding,
                     EvalMode mode, const Ladder& ladder);

struct Verdict {
    bool kindred = false;
    std::optional<HybridFormula> certificate;
    std::vector<std::string> stages;  // audit trail
    std::string reason;               // set when not kindred
};

// Symbolic phase only; numeric verification is attached by the caller.
Verdict kindred_verdict(const std::vector<FunctionExpr>& functions);

nlohmann::ordered_json to_json(const RelNode& n);
nlohmann::ordered_json to_json(const HybridFormula& h);

}  // namespace zlab

#endif
