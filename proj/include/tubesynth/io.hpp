#pragma once

// JSON ingestion and result files. Matrices are objects
//   {"rows": r, "cols": c, "data": [row-major values]}
// and vectors are plain arrays.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "tubesynth/sim.hpp"
#include "tubesynth/synth.hpp"

namespace tubesynth::io {

using json = nlohmann::json;

// Malformed or dimensionally inconsistent input; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json matrix_to_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what);
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j, const std::string& what);

json polyset_to_json(const PolyhedralSet& P);
// {"M": matrix, "m": vector}, or {"box": {"lo": [...], "hi": [...]}}
PolyhedralSet polyset_from_json(const json& j, const std::string& what);

PolytopicModel model_from_json(const json& j);

struct ProblemConfig {
    SynthesisProblem problem;
    double membership_tol = kMembershipTol;
    std::uint64_t seed = 1;
    std::size_t runs = 100;
    RealizationPolicy policy = RealizationPolicy::random_vertex();
};

ProblemConfig config_from_json(const json& j);
// Writes the tube in explicit form; config_from_json reads it back unchanged.
json config_to_json(const ProblemConfig& cfg);
ProblemConfig load_config(const std::filesystem::path& path);

json load_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

json gains_to_json(const std::vector<Eigen::MatrixXd>& gains);
// Checks count K and shape m x r.
std::vector<Eigen::MatrixXd> gains_from_json(const json& j, std::size_t horizon, Eigen::Index m, Eigen::Index r);

json sets_to_json(const SynthesisProblem& problem, const SynthesisResult& result);
// psi(k), k = 0..K, from a sets.json document.
std::vector<Eigen::VectorXd> psi_from_sets_json(const json& j, const TargetTube& tube);

json report_to_json(const ContainmentReport& report);
json certificates_to_json(const SynthesisResult& result);

}  // namespace tubesynth::io
