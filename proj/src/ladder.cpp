#include "zlab/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zlab/quadrature.hpp"
#include "zlab/zcore.hpp"

namespace zlab {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;

double z_sq(double t) {
    double z = detail::hardy_z_any(t);
    return z * z;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

double Ladder::V(double x) const {
    return x * std::log(x) + (p_.c - kLogTwoPi) * x + p_.c0;
}

double Ladder::Vprime(double x) const {
    return std::log(x) + 1.0 + p_.c - kLogTwoPi;
}

const Ladder::Cell& Ladder::cell_locked(long i) const {
    auto it = cells_.find(i);
    if (it != cells_.end()) return it->second;

    double a = cell_width() * i, b = cell_width() * (i + 1);
    Cell cell;
    cell.edges = quad::oscillation_panels(a, b);
    cell.cum.resize(cell.edges.size());
    cell.cum[0] = 0.0;
    quad::Options opt;
    opt.abs_tol = std::max(p_.quadrature_tol * cell_width(), 1e-12);
    const double span = b - a;
    std::vector<double> part(cell.edges.size() - 1);
    bool failed = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (p_.parallel)
#endif
    for (long j = 0; j < static_cast<long>(part.size()); ++j) {
        if (failed) continue;
        double w = cell.edges[j + 1] - cell.edges[j];
        try {
            part[j] = quad::panel_adaptive(z_sq, cell.edges[j], cell.edges[j + 1],
                                           opt.abs_tol * (w / span), opt.max_depth);
        } catch (...) {
            failed = true;
        }
    }
    if (failed)
        throw convergence_error("hl_integral: cell refinement exceeded depth cap");
    for (std::size_t j = 0; j + 1 < cell.edges.size(); ++j)
        cell.cum[j + 1] = cell.cum[j] + part[j];
    return cells_.emplace(i, std::move(cell)).first->second;
}

void Ladder::ensure_checkpoints_locked(long i) const {
    while (static_cast<long>(checkpoints_.size()) <= i) {
        long k = static_cast<long>(checkpoints_.size()) - 1;
        const Cell& c = cell_locked(k);
        checkpoints_.push_back(checkpoints_.back() + c.cum.back());
    }
}

double Ladder::hl_integral(double T) const {
    if (!(T >= 0.0)) throw std::domain_error("hl_integral: requires T >= 0");
    if (T == 0.0) return 0.0;
    long i = static_cast<long>(T / cell_width());
    double cell_start = cell_width() * i;
    double before = 0.0, panel_lo = 0.0;
    {
        std::lock_guard<std::mutex> lock(mu_);
        ensure_checkpoints_locked(i);
        if (T == cell_start) return checkpoints_[i];
        const Cell& c = cell_locked(i);
        // panel containing T
        auto it = std::upper_bound(c.edges.begin(), c.edges.end(), T);
        std::size_t j = (it - c.edges.begin()) - 1;
        if (j >= c.cum.size()) j = c.cum.size() - 1;
        before = checkpoints_[i] + c.cum[j];
        panel_lo = c.edges[j];
    }
    // The trailing partial panel is at most a quarter of the local zero
    // spacing wide, so a single Gauss-Legendre pass is already far below
    // the cell tolerance; it also runs outside the lock so callers
    // evaluating many heights in parallel do not serialize here.
    double partial = 0.0;
    if (T > panel_lo) partial = quad::gauss16(z_sq, panel_lo, T);
    return before + partial;
}

double Ladder::phi1(double T) const {
    if (!(T >= p_.t_min))
        throw std::domain_error("phi1: requires T >= t_min = " +
                                std::to_string(p_.t_min));
    double j = hl_integral(T);
    // Newton on V with a safeguarding bracket; V is increasing for x > 2.
    double lo = 2.0, hi = T;
    double x = std::max(lo, j / std::log(std::max(j, 3.0)));
    if (x >= hi) x = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
        double v = V(x) - j;
        if (std::abs(v) <= 1e-13 * std::max(1.0, std::abs(j))) break;
        if (v > 0.0) hi = x; else lo = x;
        double step = v / Vprime(x);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
    }
    return x;
}

double Ladder::phi1_inverse(double x) const {
    if (!(x >= p_.t_min))
        throw std::domain_error("phi1_inverse: requires x >= t_min");
    const double target = V(x);
    double lo = x, hi = 1.05 * x;
    double flo = hl_integral(lo) - target;
    if (flo >= 0.0)
        throw bracket_error("phi1_inverse: J(x) >= V(x), no root above x");
    // grow the bracket geometrically instead of jumping straight to 2x,
    // the root usually sits a few percent above x and J(2x) is expensive
    double fhi = hl_integral(hi) - target;
    while (fhi <= 0.0 && hi < 2.0 * x) {
        lo = hi;
        flo = fhi;
        hi = std::min(1.2 * hi, 2.0 * x);
        fhi = hl_integral(hi) - target;
    }
    if (fhi <= 0.0)
        throw bracket_error("phi1_inverse: root not within (x, 2x)");
    const double tol = 1e-12 * std::max(1.0, std::abs(target));
    double T = 0.5 * (lo + hi), f = hl_integral(T) - target;
    for (int it = 0; it < 200 && std::abs(f) > tol; ++it) {
        if (f > 0.0) hi = T; else lo = T;
        double deriv = z_sq(T);  // J' = Z^2
        double Tn = (deriv > 1e-8) ? T - f / deriv : 0.5 * (lo + hi);
        if (!(Tn > lo && Tn < hi)) Tn = 0.5 * (lo + hi);
        T = Tn;
        f = hl_integral(T) - target;
        if (hi - lo < 1e-13 * x) break;
    }
    return T;
}

double Ladder::z_tilde_sq(double t) const {
    if (!(t >= p_.t_min))
        throw std::domain_error("z_tilde_sq: requires t >= t_min");
    return z_sq(t) / Vprime(phi1(t));
}

Interval Ladder::reverse_segment(Interval s) const {
    if (!(s.lo >= p_.t_min))
        throw std::domain_error("reverse_segment: lower end below t_min");
    if (!(s.hi > s.lo)) throw std::domain_error("reverse_segment: empty segment");
    return {phi1_inverse(s.lo), phi1_inverse(s.hi)};
}

std::vector<std::pair<double, double>> Ladder::checkpoint_grid() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<std::pair<double, double>> grid;
    grid.reserve(checkpoints_.size());
    for (std::size_t i = 0; i < checkpoints_.size(); ++i)
        grid.emplace_back(cell_width() * i, checkpoints_[i]);
    return grid;
}

void Ladder::save_cache(const std::string& path) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::ofstream out(path);
    if (!out) throw cache_error("save_cache: cannot open " + path);
    out << "format_version,1\n";
    out << "quadrature_tol," << fmt17(p_.quadrature_tol) << "\n";
    out << "c," << fmt17(p_.c) << "\n";
    out << "c0," << fmt17(p_.c0) << "\n";
    for (std::size_t i = 0; i < checkpoints_.size(); ++i)
        out << fmt17(cell_width() * i) << "," << fmt17(checkpoints_[i]) << "\n";
}

void Ladder::load_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cache_error("load_cache: cannot open " + path);
    std::string line;
    auto expect_kv = [&](const std::string& key) -> std::string {
        if (!std::getline(in, line))
            throw cache_error("load_cache: truncated header");
        auto pos = line.find(',');
        if (pos == std::string::npos || line.substr(0, pos) != key)
            throw cache_error("load_cache: expected header field '" + key + "'");
        return line.substr(pos + 1);
    };
    if (expect_kv("format_version") != "1")
        throw cache_error("load_cache: unsupported format_version");
    double tol = std::stod(expect_kv("quadrature_tol"));
    double c = std::stod(expect_kv("c"));
    double c0 = std::stod(expect_kv("c0"));
    if (tol != p_.quadrature_tol)
        throw cache_error("load_cache: quadrature_tol mismatch");
    if (c != p_.c || c0 != p_.c0)
        throw cache_error("load_cache: ladder constants mismatch");

    std::vector<double> cps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto pos = line.find(',');
        if (pos == std::string::npos)
            throw cache_error("load_cache: malformed pair line");
        double t = std::stod(line.substr(0, pos));
        double j = std::stod(line.substr(pos + 1));
        double expected_t = cell_width() * cps.size();
        if (t != expected_t)
            throw cache_error("load_cache: checkpoint grid not ascending/aligned");
        if (!cps.empty() && j < cps.back())
            throw cache_error("load_cache: J values not nondecreasing");
        cps.push_back(j);
    }
    if (cps.empty() || cps[0] != 0.0)
        throw cache_error("load_cache: grid must start at (0, 0)");
    std::lock_guard<std::mutex> lock(mu_);
    checkpoints_ = std::move(cps);
}

}  // namespace zlab
