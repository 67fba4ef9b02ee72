#pragma once

// Report serialization: CSV sweep table for plotting plus a JSON summary
// with the entropy fields. Kept out of evaluation.hpp so the math does not
// drag the JSON dependency into every translation unit.

#include <string>

#include "json.hpp"
#include "nfe/evaluation.hpp"

namespace nfe {

inline std::string eval_csv(const EvalReport& report) {
    std::string out = "multiplier,frr,far\n";
    for (const auto& p : report.points) {
        out += detail::format_double(p.multiplier);
        out += ',';
        out += detail::format_double(p.frr);
        out += ',';
        out += detail::format_double(p.far);
        out += '\n';
    }
    return out;
}

inline std::string eval_json(const EvalReport& report) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : report.points) {
        points.push_back({{"multiplier", p.multiplier},
                          {"frr", p.frr},
                          {"far", p.far},
                          {"genuine_trials", p.genuine_trials},
                          {"genuine_rejects", p.genuine_rejects},
                          {"impostor_trials", p.impostor_trials},
                          {"impostor_accepts", p.impostor_accepts}});
    }
    nlohmann::json doc{{"scheme", scheme_name(report.scheme)},
                       {"seed", report.seed},
                       {"entropy_upper_bits", report.security.entropy_upper_bits},
                       {"entropy_lower_bits", report.security.entropy_lower_bits},
                       {"support_radius", report.security.support_radius},
                       {"median_radius", report.security.median_radius},
                       {"user_radii", report.user_radii},
                       {"points", points}};
    return doc.dump(2) + "\n";
}

inline std::string security_json(const SecuritySummary& summary, std::size_t dim,
                                 std::size_t num_users) {
    nlohmann::json doc{{"dim", dim},
                       {"num_users", num_users},
                       {"entropy_upper_bits", summary.entropy_upper_bits},
                       {"entropy_lower_bits", summary.entropy_lower_bits},
                       {"support_radius", summary.support_radius},
                       {"median_radius", summary.median_radius}};
    return doc.dump(2) + "\n";
}

}  // namespace nfe
