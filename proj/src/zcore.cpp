#include "zlab/zcore.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace zlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kLogTwoPi = 1.8378770664093454836;

// ---------------------------------------------------------------------------
// complex log-gamma (Stirling with argument shift), enough for Im parts to
// ~1e-14 relative on the strip we use.
// ---------------------------------------------------------------------------

std::complex<double> log_gamma(std::complex<double> z) {
    // B_{2n} / (2n (2n-1))
    static const double stir[] = {
        1.0 / 12.0,     -1.0 / 360.0,    1.0 / 1260.0,   -1.0 / 1680.0,
        1.0 / 1188.0,   -691.0 / 360360.0, 7.0 / 1156.0,  -3617.0 / 244188.0,
    };
    std::complex<double> shift = 0.0;
    while (std::abs(z) < 14.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    std::complex<double> lg =
        (z - 0.5) * std::log(z) - z + 0.5 * kLogTwoPi;
    std::complex<double> zi = 1.0 / z;
    std::complex<double> zpow = zi;
    std::complex<double> z2 = zi * zi;
    for (double c : stir) {
        lg += c * zpow;
        zpow *= z2;
    }
    return lg + shift;
}

// ---------------------------------------------------------------------------
// truncated power series in one variable, used for the Riemann-Siegel
// correction terms C_0..C_4 (they need derivatives of Psi up to order 12).
// ---------------------------------------------------------------------------

constexpr int kSeriesLen = 34;  // degree 33

using Series = std::array<double, kSeriesLen>;

Series series_mul(const Series& a, const Series& b) {
    Series r{};
    for (int i = 0; i < kSeriesLen; ++i) {
        if (a[i] == 0.0) continue;
        for (int j = 0; i + j < kSeriesLen; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

Series series_div(const Series& a, const Series& b) {
    Series q{};
    for (int k = 0; k < kSeriesLen; ++k) {
        double s = a[k];
        for (int j = 0; j < k; ++j) s -= q[j] * b[k - j];
        q[k] = s / b[0];
    }
    return q;
}

// cos(u) and sin(u) for u = g1*x + g2*x^2 (no constant term).
void series_cos_sin(double g1, double g2, Series& cs, Series& sn) {
    Series u{};
    u[1] = g1;
    u[2] = g2;
    cs = Series{};
    sn = Series{};
    cs[0] = 1.0;
    Series upow = u;
    double fact = 1.0;
    for (int k = 1; k < kSeriesLen / 2 + 2; ++k) {
        fact *= k;
        double c = 1.0 / fact;
        int rem = k % 4;
        for (int i = 0; i < kSeriesLen; ++i) {
            double v = upow[i] * c;
            if (v == 0.0) continue;
            switch (rem) {
                case 0: cs[i] += v; break;   // +cos contribution
                case 1: sn[i] += v; break;   // +sin
                case 2: cs[i] -= v; break;
                case 3: sn[i] -= v; break;
            }
        }
        upow = series_mul(upow, u);
        bool dead = true;
        for (double v : upow)
            if (v != 0.0) { dead = false; break; }
        if (dead) break;
    }
}

// Psi(p) = cos(2pi(p^2 - p - 1/16)) / cos(2pi p); derivatives 0..12 at p.
// Always expand about the nearest removable singularity p0 in {1/4, 3/4}:
// there both numerator and denominator vanish to first order, the reduced
// quotient is analytic with radius 1/2 (next denominator zero), and the
// series division is well conditioned (constant term -+2pi).  Dividing
// directly by cos(2pi p) amplifies rounding like |2pi tan(2pi p)|^k at
// order k, which destroys the order-12 derivative for most p.
void psi_derivatives(double p, double out[13]) {
    double p0 = (p < 0.5) ? 0.25 : 0.75;
    double x0 = p - p0;
    // num = sin(g1*x + 2pi*x^2), den = -+sin(2pi*x); both vanish at x = 0.
    double g1 = kTwoPi * (2.0 * p0 - 1.0);  // -pi at 1/4, +pi at 3/4
    double den_sign = (p0 == 0.25) ? -1.0 : 1.0;
    Series cu, su;
    series_cos_sin(g1, kTwoPi, cu, su);
    Series cv, sv;
    series_cos_sin(kTwoPi, 0.0, cv, sv);
    Series num{}, den{};
    // shift down by one power of x (exact: constant terms are zero)
    for (int i = 0; i + 1 < kSeriesLen; ++i) {
        num[i] = su[i + 1];
        den[i] = den_sign * sv[i + 1];
    }
    Series q = series_div(num, den);
    // derivatives at p via Taylor shift from p0
    for (int k = 0; k <= 12; ++k) {
        double s = 0.0;
        // sum_{j >= k} q_j * j!/(j-k)! * x0^(j-k), highest terms first
        for (int j = kSeriesLen - 1; j >= k; --j) {
            double ff = 1.0;
            for (int m = 0; m < k; ++m) ff *= (j - m);
            s += q[j] * ff * std::pow(x0, j - k);
        }
        out[k] = s;
    }
}

void rs_coefficients(double p, double c[5]) {
    static const double pi2 = kPi * kPi;
    double d[13];
    psi_derivatives(p, d);
    c[0] = d[0];
    c[1] = -d[3] / (96.0 * pi2);
    c[2] = d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi2 * pi2);
    c[3] = -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi2 * pi2) -
           d[9] / (5308416.0 * pi2 * pi2 * pi2);
    c[4] = d[0] / (128.0 * pi2) + 19.0 * d[4] / (24576.0 * pi2 * pi2) +
           11.0 * d[8] / (5898240.0 * pi2 * pi2 * pi2) +
           d[12] / (2038431744.0 * pi2 * pi2 * pi2 * pi2);
}

// The series arithmetic behind rs_coefficients costs tens of kiloflops per
// call, which dominates Z evaluations at moderate t.  The coefficients are
// entire functions of p, so a uniform table with 6-point Lagrange
// interpolation reproduces them far below the formula's own accuracy.
struct RsTable {
    static constexpr int kGrid = 4096;  // nodes at i / kGrid, i = 0..kGrid+5
    std::vector<std::array<double, 5>> c;

    RsTable() : c(kGrid + 6) {
        for (int i = 0; i < kGrid + 6; ++i)
            rs_coefficients(static_cast<double>(i) / kGrid, c[i].data());
    }

    void eval(double p, double out[5]) const {
        double u = p * kGrid;
        int i0 = static_cast<int>(u) - 2;
        if (i0 < 0) i0 = 0;
        if (i0 > kGrid) i0 = kGrid;
        double w[6];
        for (int a = 0; a < 6; ++a) {
            double num = 1.0;
            double den = 1.0;
            for (int b = 0; b < 6; ++b) {
                if (b == a) continue;
                num *= u - (i0 + b);
                den *= static_cast<double>(a - b);
            }
            w[a] = num / den;
        }
        for (int j = 0; j < 5; ++j) {
            double s = 0.0;
            for (int a = 0; a < 6; ++a) s += w[a] * c[i0 + a][j];
            out[j] = s;
        }
    }
};

double rs_correction(double p, double ainv, int nterms) {
    static const RsTable table;
    double c[5];
    table.eval(p, c);
    double s = 0.0, ap = 1.0;
    for (int j = 0; j < nterms; ++j) {
        s += c[j] * ap;
        ap *= ainv;
    }
    return s;
}

// Euler-Maclaurin zeta(1/2 + it).
std::complex<double> zeta_half_em(double t) {
    const std::complex<double> s(0.5, t);
    const int N = std::max(24, static_cast<int>(std::ceil(1.2 * t)) + 8);
    std::complex<double> sum = 0.0;
    for (int n = 1; n < N; ++n)
        sum += std::exp(-s * std::log(static_cast<double>(n)));
    const double logN = std::log(static_cast<double>(N));
    const std::complex<double> Nms = std::exp(-s * logN);
    sum += 0.5 * Nms;
    sum += Nms * static_cast<double>(N) / (s - 1.0);
    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{1-s-2k}
    static const double bern[] = {1.0 / 6.0,       -1.0 / 30.0,     1.0 / 42.0,
                                  -1.0 / 30.0,     5.0 / 66.0,      -691.0 / 2730.0,
                                  7.0 / 6.0,       -3617.0 / 510.0, 43867.0 / 798.0,
                                  -174611.0 / 330.0, 854513.0 / 138.0,
                                  -236364091.0 / 2730.0};
    std::complex<double> rising = s;       // s(s+1)...(s+2k-2)
    std::complex<double> npow = Nms / static_cast<double>(N);  // N^{-s-2k+1}
    double fact = 2.0;                     // (2k)!
    for (int k = 1; k <= 12; ++k) {
        std::complex<double> term = bern[k - 1] / fact * rising * npow;
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
        rising *= (s + static_cast<double>(2 * k - 1)) *
                  (s + static_cast<double>(2 * k));
        npow /= static_cast<double>(N) * static_cast<double>(N);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return sum;
}

}  // namespace

double theta_exact(double t) {
    std::complex<double> z(0.25, 0.5 * t);
    return std::imag(log_gamma(z)) - 0.5 * t * std::log(kPi);
}

double riemann_siegel_theta(double t, const EvalAccuracy& acc) {
    acc.validate();
    if (!(t >= 1.0))
        throw std::domain_error("riemann_siegel_theta: requires t >= 1");
    // coefficients of t^{-(2k-1)}
    static const double coef[] = {1.0 / 48.0, 7.0 / 5760.0, 31.0 / 80640.0,
                                  127.0 / 430080.0, 511.0 / 1216512.0};
    double theta = 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0;
    double tp = t;
    int used = 0;
    for (double c : coef) {
        double term = c / tp;
        double next_bound = std::abs(term);  // magnitude of first omitted term
        if (next_bound <= acc.target_abs_error || used >= acc.max_terms)
            return theta;  // omitted tail within tolerance
        theta += term;
        ++used;
        tp *= t * t;
    }
    // series exhausted: estimate the tail by the next (unknown) term scale
    double tail = 2048.0 / 7709.0 / tp;  // ~ next coefficient magnitude
    if (tail > acc.target_abs_error)
        throw accuracy_error(
            "riemann_siegel_theta: asymptotic series cannot reach "
            "target_abs_error at t=" + std::to_string(t));
    return theta;
}

namespace detail {

double hardy_z_riemann_siegel(double t) {
    const double a = std::sqrt(t / kTwoPi);
    const int N = static_cast<int>(a);
    const double p = a - N;
    const double th = theta_exact(t);
    double sum = 0.0;
    for (int n = 1; n <= N; ++n)
        sum += std::cos(th - t * std::log(static_cast<double>(n))) /
               std::sqrt(static_cast<double>(n));
    sum *= 2.0;
    const double ainv = 1.0 / a;
    double corr = rs_correction(p, ainv, 5);
    double sign = (N % 2 == 1) ? 1.0 : -1.0;  // (-1)^(N-1)
    return sum + sign * std::sqrt(ainv) * corr;
}

double hardy_z_euler_maclaurin(double t) {
    std::complex<double> zeta = zeta_half_em(t);
    double th = theta_exact(t);
    std::complex<double> z = std::exp(std::complex<double>(0.0, th)) * zeta;
    return std::real(z);
}

double hardy_z_any(double t) {
    return (t < 50.0) ? hardy_z_euler_maclaurin(t) : hardy_z_riemann_siegel(t);
}

}  // namespace detail

double hardy_z(double t, const EvalAccuracy& acc) {
    acc.validate();
    if (!(t >= 1.0)) throw std::domain_error("hardy_z: requires t >= 1");
    // fixed switchover: Euler-Maclaurin below 50, Riemann-Siegel above
    if (t < 50.0) return detail::hardy_z_euler_maclaurin(t);
    return detail::hardy_z_riemann_siegel(t);
}

double zeta_mod_sq_half(double t, const EvalAccuracy& acc) {
    double z = hardy_z(t, acc);
    return z * z;
}

}  // namespace zlab
