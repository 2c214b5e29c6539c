#pragma once

#include "halfline/error.hpp"
#include "halfline/kernels.hpp"
#include "halfline/nemytsky.hpp"
#include "halfline/nonlinearity.hpp"
#include "halfline/quadrature.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace halfline::cli {

using Json = nlohmann::ordered_json;

struct GridConfig {
    double x_max = 40.0;
    int n_panels = 400;
    RuleSpec rule{};
};

struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 10000;
};

struct CertificateConfig {
    bool lemma2 = true;
    bool lemma3 = true;
    bool asymptote = true;
    bool jensen = true;
    bool uniqueness = true;
    int probe_trials = 5;
    double perturbation_scale = 0.1;
    std::uint64_t seed = 0;
};

/// One run: kernel, nonlinearity, grid, solver, optional Nemytsky block and
/// certificate switches. Thread count is a command-line concern and is not
/// part of the config (results do not depend on it).
struct RunConfig {
    KernelSpec kernel{};
    NonlinearitySpec nonlinearity{};
    GridConfig grid{};
    SolverConfig solver{};
    std::optional<NemytskySpec> nemytsky;
    CertificateConfig certificates{};
};

/// Parse failure; path() names the offending key, e.g. "nonlinearity.alpha".
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(ErrorKind::spec_invalid, path.empty() ? message : path + ": " + message),
          path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Missing keys take catalog defaults; unknown keys and out-of-range values
/// throw ConfigError.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Full normalized tree; parse_config(to_json(c)) reproduces c.
Json to_json(const RunConfig& config);

} // namespace halfline::cli
