#include "zlab/crossbreed.hpp"

#include "zlab/zcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zlab {

FactorizationFormula make_formula(int id, const FunctionExpr& f) {
    FactorizationFormula ff;
    ff.id = id;
    ff.f = f;
    ff.external = mean_integral_symbolic(f);
    if (ff.external.terms.empty())
        throw validation_error("factorization formula: external function is zero");
    return ff;
}

namespace {

std::vector<ExtAtomId> atom_basis(const std::vector<FactorizationFormula>& fs) {
    std::vector<ExtAtomId> atoms;
    for (const auto& f : fs)
        for (const ExtTerm& t : f.external.terms) {
            ExtAtomId id{t.kind, t.delta};
            if (std::find(atoms.begin(), atoms.end(), id) == atoms.end())
                atoms.push_back(id);
        }
    return atoms;
}

Rat coeff_of(const ExternalExpr& e, const ExtAtomId& atom) {
    for (const ExtTerm& t : e.terms)
        if (t.kind == atom.kind && t.delta == atom.delta) return t.coeff;
    return Rat(0);
}

// Exact Gauss elimination; returns the unique solution of A x = b or nothing
// (inconsistent or underdetermined).
std::optional<std::vector<Rat>> solve_unique(std::vector<std::vector<Rat>> A,
                                             std::vector<Rat> b) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && A[p][c] == Rat(0)) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        std::swap(b[p], b[r]);
        Rat inv = A[r][c];
        for (std::size_t j = c; j < cols; ++j) A[r][j] /= inv;
        b[r] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == Rat(0)) continue;
            Rat m = A[i][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] -= m * A[r][j];
            b[i] -= m * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != Rat(0)) return std::nullopt;  // inconsistent
    if (pivot_col.size() != cols) return std::nullopt;  // underdetermined
    std::vector<Rat> x(cols, Rat(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i];
    return x;
}

RelNode constant(Rat v) {
    RelNode n;
    n.kind = RelNode::Kind::Const;
    n.value = v;
    return n;
}

RelNode ref(RelNode::Kind kind, int id) {
    RelNode n;
    n.kind = kind;
    n.formula_id = id;
    return n;
}

RelNode scaled_term(Rat lambda, int id) {
    RelNode prod;
    prod.kind = RelNode::Kind::Product;
    if (lambda != Rat(1)) prod.children.push_back(constant(lambda));
    prod.children.push_back(ref(RelNode::Kind::FuncValue, id));
    prod.children.push_back(ref(RelNode::Kind::ProductRef, id));
    return prod;
}

}  // namespace

std::optional<HybridFormula> additive_eliminate(
    const std::vector<FactorizationFormula>& formulas, std::optional<int> target_id) {
    std::vector<const FactorizationFormula*> parts;
    const FactorizationFormula* target = nullptr;
    for (const auto& f : formulas) {
        if (target_id && f.id == *target_id)
            target = &f;
        else
            parts.push_back(&f);
    }
    if (target_id && !target) return std::nullopt;
    if (parts.empty()) return std::nullopt;

    std::vector<ExtAtomId> atoms = atom_basis(formulas);
    std::vector<std::vector<Rat>> A(atoms.size(), std::vector<Rat>(parts.size()));
    std::vector<Rat> b(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = 0; j < parts.size(); ++j)
            A[i][j] = coeff_of(parts[j]->external, atoms[i]);
        if (target)
            b[i] = coeff_of(target->external, atoms[i]);
        else
            b[i] = (atoms[i].kind == ExtAtomKind::Const) ? Rat(1) : Rat(0);
    }
    auto sol = solve_unique(std::move(A), std::move(b));
    if (!sol) return std::nullopt;
    for (const Rat& l : *sol)
        if (l < Rat(0)) return std::nullopt;

    bool all_participate = true;
    for (const Rat& l : *sol)
        if (l == Rat(0)) all_participate = false;

    HybridFormula h;
    h.eliminated = atoms;
    RelNode sum;
    sum.kind = RelNode::Kind::Sum;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        if ((*sol)[j] == Rat(0)) continue;
        sum.children.push_back(scaled_term((*sol)[j], parts[j]->id));
        h.participants.push_back(parts[j]->id);
    }
    if (sum.children.empty()) return std::nullopt;

    if (target) {
        h.shape = "additive-target";
        RelNode rel;
        rel.kind = RelNode::Kind::Product;
        rel.children.push_back(ref(RelNode::Kind::InvFuncValue, target->id));
        rel.children.push_back(ref(RelNode::Kind::InvProductRef, target->id));
        rel.children.push_back(sum);
        h.relation = rel;
        h.participants.insert(h.participants.begin(), target->id);
    } else {
        h.shape = "additive-unit";
        h.relation = sum;
    }
    std::sort(h.participants.begin(), h.participants.end());
    h.complete = all_participate;
    return h;
}

std::optional<HybridFormula> multiplicative_eliminate(
    const FactorizationFormula& target, const std::vector<FactorizationFormula>& parts) {
    auto monomial = [](const ExternalExpr& e) -> std::optional<ExtTerm> {
        if (e.terms.size() != 1 || e.terms[0].kind != ExtAtomKind::Upow)
            return std::nullopt;
        if (e.terms[0].coeff <= Rat(0)) return std::nullopt;
        return e.terms[0];
    };
    auto tm = monomial(target.external);
    if (!tm || parts.empty()) return std::nullopt;
    Rat delta_sum(0), kappa = tm->coeff;
    for (const auto& p : parts) {
        auto pm = monomial(p.external);
        if (!pm) return std::nullopt;
        delta_sum += pm->delta;
        kappa /= pm->coeff;
    }
    if (delta_sum != tm->delta) return std::nullopt;

    HybridFormula h;
    h.shape = "multiplicative";
    h.eliminated.push_back({ExtAtomKind::Upow, tm->delta});
    for (const auto& p : parts)
        h.eliminated.push_back({ExtAtomKind::Upow, p.external.terms[0].delta});
    RelNode rel;
    rel.kind = RelNode::Kind::Product;
    rel.children.push_back(constant(kappa));
    rel.children.push_back(ref(RelNode::Kind::InvFuncValue, target.id));
    rel.children.push_back(ref(RelNode::Kind::InvProductRef, target.id));
    for (const auto& p : parts) {
        rel.children.push_back(ref(RelNode::Kind::FuncValue, p.id));
        rel.children.push_back(ref(RelNode::Kind::ProductRef, p.id));
    }
    h.relation = rel;
    h.participants.push_back(target.id);
    for (const auto& p : parts) h.participants.push_back(p.id);
    std::sort(h.participants.begin(), h.participants.end());
    h.complete = true;
    return h;
}

HybridFormula product_combine(const HybridFormula& a, const HybridFormula& b) {
    HybridFormula h;
    h.shape = "product";
    h.relation.kind = RelNode::Kind::Product;
    h.relation.children = {a.relation, b.relation};
    h.participants = a.participants;
    h.participants.insert(h.participants.end(), b.participants.begin(),
                          b.participants.end());
    std::sort(h.participants.begin(), h.participants.end());
    h.participants.erase(std::unique(h.participants.begin(), h.participants.end()),
                         h.participants.end());
    h.eliminated = a.eliminated;
    for (const auto& e : b.eliminated)
        if (std::find(h.eliminated.begin(), h.eliminated.end(), e) == h.eliminated.end())
            h.eliminated.push_back(e);
    // no crossbreeding happened between the two input sets
    h.complete = false;
    return h;
}

namespace {

double product_value(const FactorizationData& d, EvalMode mode, const Ladder& ladder) {
    double lhs = 1.0;
    for (int r = 1; r <= d.k; ++r) {
        double a = d.alpha[r], b = d.beta[r - 1];
        if (mode == EvalMode::Exact) {
            double den = ladder.z_tilde_sq(b);
            if (den < 1e-12) throw degenerate_error("verify_hybrid: Ztilde^2(beta) ~ 0");
            lhs *= ladder.z_tilde_sq(a) / den;
        } else {
            double den = zeta_mod_sq_half(b);
            if (den < 1e-12)
                throw degenerate_error("verify_hybrid: |zeta|^2(beta) below 1e-12");
            lhs *= zeta_mod_sq_half(a) / den;
        }
    }
    return lhs;
}

struct Evaluator {
    const std::map<int, FactorizationData>& binding;
    EvalMode mode;
    const Ladder& ladder;

    const FactorizationData& get(int id) const {
        auto it = binding.find(id);
        if (it == binding.end())
            throw binding_error("verify_hybrid: missing binding for formula " +
                                std::to_string(id));
        return it->second;
    }

    double func_value(int id) const {
        const FactorizationData& d = get(id);
        return eval_function(d.f, d.alpha[0], d.base_L());
    }

    double eval(const RelNode& n) const {
        switch (n.kind) {
            case RelNode::Kind::Const: return rat_to_double(n.value);
            case RelNode::Kind::ProductRef:
                return product_value(get(n.formula_id), mode, ladder);
            case RelNode::Kind::InvProductRef:
                return 1.0 / product_value(get(n.formula_id), mode, ladder);
            case RelNode::Kind::FuncValue: return func_value(n.formula_id);
            case RelNode::Kind::InvFuncValue: {
                double v = func_value(n.formula_id);
                if (v == 0.0) throw degenerate_error("verify_hybrid: f(alpha0) = 0");
                return 1.0 / v;
            }
            case RelNode::Kind::Sum: {
                double s = 0.0;
                for (const RelNode& c : n.children) s += eval(c);
                return s;
            }
            case RelNode::Kind::Product: {
                double p = 1.0;
                for (const RelNode& c : n.children) p *= eval(c);
                return p;
            }
        }
        throw std::logic_error("verify_hybrid: bad node");
    }
};

std::string atom_name(const ExtAtomId& a) {
    switch (a.kind) {
        case ExtAtomKind::Const: return "CONST";
        case ExtAtomKind::Trig: return "TRIG";
        case ExtAtomKind::Upow: return "U^" + rat_to_string(a.delta);
    }
    return "?";
}

}  // namespace

double verify_hybrid(const HybridFormula& h,
                     const std::map<int, FactorizationData>& binding, EvalMode mode,
                     const Ladder& ladder) {
    Evaluator ev{binding, mode, ladder};
    return std::abs(ev.eval(h.relation) - 1.0);
}

Verdict kindred_verdict(const std::vector<FunctionExpr>& functions) {
    Verdict v;
    if (functions.empty()) {
        v.reason = "empty family";
        return v;
    }
    // all functions must share one segment convention
    SegmentConvention conv = functions[0].convention();
    for (const auto& f : functions) {
        if (f.convention() != conv) {
            v.reason = "mixed segment conventions (trig vs power); no crossbreeding set";
            v.stages.push_back("rejected: " + v.reason);
            return v;
        }
    }

    std::vector<FactorizationFormula> formulas;
    for (std::size_t i = 0; i < functions.size(); ++i)
        formulas.push_back(make_formula(static_cast<int>(i + 1), functions[i]));

    // stage 1: additive elimination to the constant 1
    if (auto h = additive_eliminate(formulas)) {
        if (h->complete) {
            std::ostringstream os;
            os << "stage 1: additive elimination of {";
            for (std::size_t i = 0; i < h->eliminated.size(); ++i)
                os << (i ? ", " : "") << atom_name(h->eliminated[i]);
            os << "} to the constant 1";
            v.stages.push_back(os.str());
            v.kindred = true;
            v.certificate = *h;
            return v;
        }
    }
    v.stages.push_back("stage 1: no additive relation sum lambda_m E_m = 1");

    // stage 2: additive elimination against a designated target formula
    for (const auto& target : formulas) {
        if (auto h = additive_eliminate(formulas, target.id)) {
            if (h->complete) {
                v.stages.push_back("stage 2: additive elimination with target formula " +
                                   std::to_string(target.id));
                v.kindred = true;
                v.certificate = *h;
                return v;
            }
        }
    }
    v.stages.push_back("stage 2: no additive target relation");

    // stage 3: multiplicative elimination over monomial externals
    for (const auto& target : formulas) {
        std::vector<FactorizationFormula> parts;
        for (const auto& f : formulas)
            if (f.id != target.id) parts.push_back(f);
        if (parts.empty()) continue;
        if (auto h = multiplicative_eliminate(target, parts)) {
            v.stages.push_back("stage 3: multiplicative elimination with target formula " +
                               std::to_string(target.id));
            v.kindred = true;
            v.certificate = *h;
            return v;
        }
    }
    v.stages.push_back("stage 3: no multiplicative relation");
    v.reason = "no complete hybrid formula exists for this family";
    return v;
}

nlohmann::ordered_json to_json(const RelNode& n) {
    nlohmann::ordered_json j;
    switch (n.kind) {
        case RelNode::Kind::Const:
            j["op"] = "const";
            j["value"] = rat_to_string(n.value);
            break;
        case RelNode::Kind::ProductRef:
            j["op"] = "product_ref";
            j["formula"] = n.formula_id;
            break;
        case RelNode::Kind::InvProductRef:
            j["op"] = "inv_product_ref";
            j["formula"] = n.formula_id;
            break;
        case RelNode::Kind::FuncValue:
            j["op"] = "f_at_alpha0";
            j["formula"] = n.formula_id;
            break;
        case RelNode::Kind::InvFuncValue:
            j["op"] = "inv_f_at_alpha0";
            j["formula"] = n.formula_id;
            break;
        case RelNode::Kind::Sum:
            j["op"] = "sum";
            break;
        case RelNode::Kind::Product:
            j["op"] = "product";
            break;
    }
    if (!n.children.empty()) {
        nlohmann::ordered_json kids = nlohmann::ordered_json::array();
        for (const RelNode& c : n.children) kids.push_back(to_json(c));
        j["args"] = kids;
    }
    return j;
}

nlohmann::ordered_json to_json(const HybridFormula& h) {
    nlohmann::ordered_json j;
    j["relation"] = to_json(h.relation);
    j["participants"] = h.participants;
    nlohmann::ordered_json elim = nlohmann::ordered_json::array();
    for (const auto& a : h.eliminated) elim.push_back(atom_name(a));
    j["eliminated"] = elim;
    j["complete"] = h.complete;
    j["shape"] = h.shape;
    return j;
}

}  // namespace zlab
