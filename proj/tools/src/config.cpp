#include "tzl_cli/config.hpp"

#include "tzl/error.hpp"
#include "tzl/bergman_basis.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

namespace tzl::cli {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    j["command"] = c.command;
    j["symbol"] = c.symbol;
    j["p"] = c.p;
    j["trials"] = c.trials ? json(*c.trials) : json(nullptr);
    j["zeros"] = c.zeros ? json(*c.zeros) : json(nullptr);
    j["seed"] = c.seed;
    j["bins"] = c.bins;
    j["phi"] = c.phi;
    j["g"] = c.g;
    j["radius"] = c.radius;
    j["n_max"] = c.n_max;
    j["offsets"] = c.offsets;
    j["directions"] = c.directions;
    j["base"] = c.base;
    j["out"] = c.out;
    j["format"] = c.format;
    j["threads"] = c.threads;
    j["samples"] = c.samples;
    j["criteria"] = c.criteria;
    return j;
}

namespace {

template <class T>
void read(const json& j, const char* key, T& dst) {
    if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& dst) {
    if (j.contains(key)) dst = j.at(key).is_null() ? std::nullopt : std::optional<T>(j.at(key).get<T>());
}

} // namespace

RunConfig config_from_json(const json& j) {
    require(j.is_object(), "config: top level must be a JSON object");
    static const std::set<std::string> known{"command", "symbol", "p", "trials", "zeros", "seed", "bins",
                                             "phi", "g", "radius", "n_max", "offsets", "directions", "base",
                                             "out", "format", "threads", "samples", "criteria", "rn"};
    for (const auto& [k, v] : j.items()) require(known.count(k) > 0, "config: unknown key '" + k + "'");
    RunConfig c;
    try {
        read(j, "command", c.command);
        read(j, "symbol", c.symbol);
        if (j.contains("p")) {
            if (j.at("p").is_array()) c.p = j.at("p").get<std::vector<int>>();
            else c.p = {j.at("p").get<int>()};
        }
        read_opt(j, "trials", c.trials);
        if (j.contains("rn")) read_opt(j, "rn", c.trials);
        read_opt(j, "zeros", c.zeros);
        if (j.contains("seed")) c.seed = j.at("seed").is_string() ? j.at("seed").get<std::string>()
                                                                  : std::to_string(j.at("seed").get<std::uint64_t>());
        read(j, "bins", c.bins);
        read(j, "phi", c.phi);
        read(j, "g", c.g);
        read(j, "radius", c.radius);
        read(j, "n_max", c.n_max);
        read(j, "offsets", c.offsets);
        read(j, "directions", c.directions);
        read(j, "base", c.base);
        read(j, "out", c.out);
        read(j, "format", c.format);
        read(j, "threads", c.threads);
        read(j, "samples", c.samples);
        read(j, "criteria", c.criteria);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("config: malformed value: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw PreconditionError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

std::uint64_t resolve_seed(const std::string& text) {
    if (text == "random") {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    require(!text.empty() && std::all_of(text.begin(), text.end(), [](char ch) { return ch >= '0' && ch <= '9'; }),
            "seed must be a nonnegative integer or 'random', got '" + text + "'");
    try {
        return std::stoull(text);
    } catch (const std::out_of_range&) {
        throw PreconditionError("seed does not fit in 64 bits: '" + text + "'");
    }
}

void validate(const RunConfig& c) {
    const auto& names = command_names();
    require(std::find(names.begin(), names.end(), c.command) != names.end(),
            "unknown command '" + c.command + "'");
    for (int p : c.p) require(p >= 0 && p <= kMaxDegree, "p must lie in [0, 500], got " + std::to_string(p));
    require(c.bins >= 1, "bins must be >= 1");
    require(c.format == "csv" || c.format == "json", "format must be csv or json");
    require(c.threads >= 0, "threads must be >= 0");
    require(c.n_max >= 1 && c.n_max <= kMaxDegree, "n_max must lie in [1, 500]");
    require(c.radius > 0.0, "radius must be positive");
    if (c.trials && c.zeros)
        for (int p : c.p)
            require(*c.trials * static_cast<std::uint64_t>(p) == *c.zeros,
                    "RN * p must equal the zero target (" + std::to_string(*c.trials) + " * " + std::to_string(p) +
                        " != " + std::to_string(*c.zeros) + ")");
    if (c.zeros && !c.trials)
        for (int p : c.p)
            require(p > 0 && *c.zeros % static_cast<std::uint64_t>(p) == 0,
                    "zero target " + std::to_string(*c.zeros) + " is not a multiple of p = " + std::to_string(p));
    for (int k : c.criteria) require(k >= 1 && k <= 14, "criteria are numbered 1..14");
    resolve_seed(c.seed == "random" ? "0" : c.seed);
}

std::uint64_t trials_for(const RunConfig& c, int p, std::uint64_t fallback_trials,
                         std::optional<std::uint64_t> fallback_zeros) {
    if (c.trials) return *c.trials;
    if (c.zeros) return *c.zeros / static_cast<std::uint64_t>(p);
    if (fallback_zeros && p > 0) return std::max<std::uint64_t>(1, *fallback_zeros / static_cast<std::uint64_t>(p));
    return fallback_trials;
}

} // namespace tzl::cli
