#ifndef ZLAB_HARNESS_HPP
#define ZLAB_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zlab/crossbreed.hpp"
#include "zlab/hop.hpp"
#include "zlab/ladder.hpp"

namespace zlab {

using ojson = nlohmann::ordered_json;

struct RunConfig {
    std::vector<std::string> family;  // DSL texts
    std::vector<double> grid;         // bases (L values for modes L/PiL)
    double U = 1.0;
    std::vector<int> orders;          // k_m per family member (empty -> all 1)
    int k0 = 3;
    OffsetMode offset = OffsetMode::PiL;
    std::string mode = "both";        // exact | zeta | both
    double tol = 1e-5;                // verification tolerance (exact mode)
    double quadrature_tol = 1e-8;
    std::optional<double> a_cap;
    std::string cache_path;
    std::string report_path;

    void validate() const;
};

RunConfig config_from_json(const ojson& j);
OffsetMode offset_from_string(const std::string& s);
std::string offset_to_string(OffsetMode m);

// shared report plumbing
ojson factorization_to_json(const FactorizationData& d);
ojson report_preamble(const RunConfig& cfg, const Ladder& ladder);

// subcommand drivers; all return the JSON report they also write to
// cfg.report_path (when set)
ojson run_factorize(const RunConfig& cfg, const Ladder& ladder);
ojson run_crossbreed(const RunConfig& cfg, const Ladder& ladder);
ojson run_verify(const RunConfig& cfg, const Ladder& ladder, bool& ok);
ojson run_scan(const RunConfig& cfg, const Ladder& ladder, bool& ok);

// zeta-mode acceptance band at height T: 5 lnln T / ln T
double zeta_residual_band(double T);

void write_report(const ojson& report, const std::string& path);

}  // namespace zlab

#endif
