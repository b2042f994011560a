#ifndef ZLAB_LADDER_HPP
#define ZLAB_LADDER_HPP

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "zlab/errors.hpp"

namespace zlab {

struct Interval {
    double lo = 0.0, hi = 0.0;
    double length() const { return hi - lo; }
};

// Hardy-Littlewood integral J(T) = int_0^T Z^2, the operational ladder
// phi1 = V^{-1} o J with V(x) = x ln x + (c - ln 2pi) x + c0, its inverse,
// and the normalized square Ztilde^2 = dphi1/dt = Z^2 / V'(phi1).
//
// J is cached on a checkpoint grid (spacing 100) plus a finer per-cell
// panel table so repeated evaluations are incremental.  The cache is
// guarded by a mutex (single writer, results independent of interleaving:
// the partition policy depends only on the inputs).
class Ladder {
  public:
    struct Params {
        double quadrature_tol = 1e-8;          // relative, for J
        double c = 0.57721566490153286;        // Euler's constant
        double c0 = 0.0;
        double t_min = 100.0;
        bool parallel = true;                  // OpenMP panel kernels
    };

    Ladder() = default;
    explicit Ladder(const Params& p) : p_(p) {}

    const Params& params() const { return p_; }

    double V(double x) const;
    double Vprime(double x) const;

    // J(T), T >= 0.
    double hl_integral(double T) const;

    // phi1(T) = V^{-1}(J(T)), T >= t_min; guaranteed < T there.
    double phi1(double T) const;

    // T with phi1(T) = x, searched in (x, 2x); T > x.
    double phi1_inverse(double x) const;

    // Z^2(t) / V'(phi1(t)) = dphi1/dt.
    double z_tilde_sq(double t) const;

    // [A,B] -> [phi1^{-1}(A), phi1^{-1}(B)], lies strictly above the input.
    Interval reverse_segment(Interval s) const;

    // checkpoint cache persistence (text CSV with a versioned header)
    void save_cache(const std::string& path) const;
    void load_cache(const std::string& path);

    // ascending (t, J) checkpoint pairs currently known
    std::vector<std::pair<double, double>> checkpoint_grid() const;

  private:
    struct Cell {
        std::vector<double> edges;  // panel boundaries across [100i, 100(i+1)]
        std::vector<double> cum;    // cumulative integral from cell start
    };

    double cell_width() const { return 100.0; }
    const Cell& cell_locked(long i) const;       // mu_ must be held
    void ensure_checkpoints_locked(long i) const;

    Params p_;
    mutable std::mutex mu_;
    mutable std::vector<double> checkpoints_{0.0};  // J at 0, 100, 200, ...
    mutable std::map<long, Cell> cells_;
};

}  // namespace zlab

#endif
