#pragma once

// Experiment configuration shared by the command line and JSON config files.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tzl::cli {

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"spectrum", "sample-zeros", "histogram", "clt",  "variance",
                                                "expectation", "hole", "mass", "kernel-check", "selftest"};
    return names;
}

struct RunConfig {
    std::string command;
    std::string symbol = "const:1";
    std::vector<int> p;
    /// Trials per degree (RN).
    std::optional<std::uint64_t> trials;
    /// Total-zero target; RN = zeros / p.
    std::optional<std::uint64_t> zeros;
    /// Decimal uint64 or "random".
    std::string seed = "0";
    int bins = 50;
    std::string phi = "bump:1";
    std::string g = "const:1";
    /// hole: chart radius of the FS disc centred at 0.
    double radius = 0.3;
    /// mass: largest degree in the running average.
    int n_max = 200;
    std::vector<double> offsets{0.5, 1.0};
    std::vector<double> directions{0.0};
    /// kernel-check base point: "re,im" or "inf".
    std::string base = "0";
    std::string out = ".";
    std::string format = "csv";
    /// 0 means TZL_THREADS or the hardware concurrency.
    int threads = 0;
    /// sample-zeros: also export the coefficients.
    bool samples = false;
    /// selftest: criteria to run, empty for all.
    std::vector<int> criteria;

    bool operator==(const RunConfig&) const = default;
};

nlohmann::ordered_json to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Checks command name, ranges and the RN / zeros consistency.
void validate(const RunConfig& c);

/// Resolved master seed (draws entropy for "random").
std::uint64_t resolve_seed(const std::string& text);

/// RN for degree p: trials if given, else zeros / p (which must divide
/// exactly when zeros was set), else `fallback_zeros / p` rounded down.
std::uint64_t trials_for(const RunConfig& c, int p, std::uint64_t fallback_trials,
                         std::optional<std::uint64_t> fallback_zeros = std::nullopt);

} // namespace tzl::cli
