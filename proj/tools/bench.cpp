// Benchmark: serial reference kernel vs the OpenMP kernel on oscillatory
// Z^2 integrals.  The two must agree bit for bit; timings show the speedup.

#include <chrono>
#include <cstdio>
#include <vector>

#include "zlab/quadrature.hpp"
#include "zlab/zcore.hpp"

namespace {

double time_ms(double& result, bool parallel, double a, double b) {
    auto f = [](double t) {
        double z = zlab::detail::hardy_z_any(t);
        return z * z;
    };
    zlab::quad::Options opt;
    opt.abs_tol = 1e-9;
    opt.parallel = parallel;
    auto t0 = std::chrono::steady_clock::now();
    result = zlab::quad::integrate_oscillatory(f, a, b, opt);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
    struct Range {
        double a, b;
    };
    std::vector<Range> ranges = {{100, 600}, {1000, 2000}, {10000, 11000}};
    std::printf("%-18s %12s %12s %8s %s\n", "range", "serial(ms)", "omp(ms)",
                "speedup", "bitwise");
    for (const Range& r : ranges) {
        double vs = 0.0, vp = 0.0;
        double ts = time_ms(vs, false, r.a, r.b);
        double tp = time_ms(vp, true, r.a, r.b);
        std::printf("[%6.0f,%6.0f]   %12.2f %12.2f %8.2f %s\n", r.a, r.b, ts, tp,
                    ts / tp, vs == vp ? "yes" : "NO");
        if (vs != vp) return 1;
    }
    return 0;
}
