#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tubesynth/lp.hpp"
#include "tubesynth/polytope.hpp"
#include "tubesynth/reach.hpp"
#include "tubesynth/tube.hpp"

namespace tubesynth {

inline constexpr double kZeroThreshold = 1e-7;

// V(k) = P(W(k), gamma(k)) for k = 0..K-1. The map D lives in the model.
struct DisturbanceTube {
    std::vector<PolyhedralSet> sets;
};

// u(k) in P(U(k), theta(k)) for k = 0..K-1.
struct ControlConstraints {
    std::vector<PolyhedralSet> sets;
};

struct SynthesisOptions {
    double zero_threshold = kZeroThreshold;
    double containment_tol = kContainmentTol;
    // Validate A1 (bounded tube) before synthesis.
    bool require_bounded = true;
};

struct SynthesisProblem {
    PolytopicModel model;
    TargetTube tube;
    std::optional<DisturbanceTube> disturbance;
    std::optional<ControlConstraints> control_constraints;
    bool a3_nonneg_psi = false;
    bool a5_dv_in_x = false;
    SynthesisOptions options;

    // Throws std::invalid_argument on dimension or flag inconsistencies.
    void validate() const;
};

enum class Provenance { TubeExact, Shrunk };
const char* to_string(Provenance p);

// Variable layout of LP1: the s blocks G_i (row-major, q(k+1) x cols each),
// then F (row-major, m x r, free), then epsilon (q(k+1)).
struct Lp1Layout {
    std::size_t s = 0;
    Eigen::Index g_rows = 0;   // q(k+1)
    Eigen::Index g_cols = 0;   // q(k), plus q_v(k) with disturbance
    Eigen::Index f_rows = 0;   // m
    Eigen::Index f_cols = 0;   // r
    Eigen::Index g_offset(std::size_t i) const { return static_cast<Eigen::Index>(i) * g_rows * g_cols; }
    Eigen::Index f_offset() const { return static_cast<Eigen::Index>(s) * g_rows * g_cols; }
    Eigen::Index eps_offset() const { return f_offset() + f_rows * f_cols; }
    Eigen::Index num_variables() const { return eps_offset() + g_rows; }
};

struct Lp1 {
    lp::LpProblem problem;
    Lp1Layout layout;
};

struct Lp1Solution {
    std::vector<Eigen::MatrixXd> G;
    Eigen::MatrixXd F;
    Eigen::VectorXd epsilon;
};

Lp1 build_lp1(std::size_t k, const SynthesisProblem& problem, const Eigen::VectorXd& psi_next);
Lp1Solution decode_lp1(const Lp1Layout& layout, const Eigen::VectorXd& x);

// LP2 over psi(k) only, using the G_i from LP1 at the same k.
lp::LpProblem build_lp2(std::size_t k, const SynthesisProblem& problem, const std::vector<Eigen::MatrixXd>& G,
                        const Eigen::VectorXd& psi_next);

struct StepCertificate {
    std::size_t k = 0;
    // Containment of X(k) (or H(k) for `from_tube`) into X(k+1).
    ContainmentReport report;
    bool from_tube = false;
    bool source_empty = false;
};

struct SynthesisResult {
    std::vector<Eigen::MatrixXd> gains;        // F(k), k = 0..K-1
    std::vector<Eigen::VectorXd> epsilon;      // epsilon-bar(k), k = 0..K-1
    std::vector<Provenance> provenance;        // k = 0..K-1
    std::vector<Eigen::VectorXd> psi;          // k = 0..K
    std::vector<StepCertificate> certificates; // post-hoc checks

    std::size_t horizon() const { return psi.size() - 1; }
    bool certified() const;
    // X(k) = P(Q(k), psi(k))
    PolyhedralSet shrunk_set(const TargetTube& tube, std::size_t k) const;
};

class SynthesisError : public std::runtime_error {
public:
    SynthesisError(std::size_t k, std::string stage, const std::string& what)
        : std::runtime_error(what), k_(k), stage_(std::move(stage)) {}
    std::size_t step() const { return k_; }
    const std::string& stage() const { return stage_; }

private:
    std::size_t k_;
    std::string stage_;
};

SynthesisResult synthesize(const SynthesisProblem& problem);

// Re-runs the containment chain for a finished result.
std::vector<StepCertificate> certify(const SynthesisProblem& problem, const SynthesisResult& result);

}  // namespace tubesynth
