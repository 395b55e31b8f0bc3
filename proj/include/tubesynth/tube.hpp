#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tubesynth/polytope.hpp"

namespace tubesynth {

// H(k) = P(Q(k), phi(k)) for k = 0..K; H(K) is the target set.
class TargetTube {
public:
    explicit TargetTube(std::vector<PolyhedralSet> sets);

    std::size_t horizon() const { return sets_.size() - 1; }
    Eigen::Index dim() const { return sets_.front().dim(); }

    const PolyhedralSet& at(std::size_t k) const { return sets_.at(k); }
    const Eigen::MatrixXd& Q(std::size_t k) const { return at(k).M(); }
    const Eigen::VectorXd& phi(std::size_t k) const { return at(k).m(); }
    const std::vector<PolyhedralSet>& sets() const { return sets_; }

private:
    std::vector<PolyhedralSet> sets_;
};

PolyhedralSet target_set(const TargetTube& tube);

struct TubeRequirements {
    bool bounded = false;           // A1
    bool origin_interior = false;   // A2
    double interior_slack = 1e-9;
};

// Throws std::invalid_argument naming the first offending step. Nonemptiness
// is always checked.
void validate_tube(const TargetTube& tube, const TubeRequirements& req);

// Step-response specification for one output, in deviation from y_sp.
struct StepSpec {
    double y_sp = 0.0;
    double rise_time = 0.0;         // t_r
    double rise_tol = 0.0;          // lambda_r
    double settling_time = 0.0;     // t_s
    double steady_tol = 0.0;        // lambda_s
    double peak = 0.0;              // y_p, upper bound on the deviation before t_s
    double initial_lower = 0.0;     // lower envelope at t = 0
    double sample_time = 1.0;       // Ts
};

// Upper envelope: peak before t_s, steady_tol afterwards.
double step_upper_envelope(const StepSpec& spec, double t);
// Lower envelope: piecewise linear through (0, initial_lower), (t_r, -rise_tol),
// (t_s, -steady_tol), constant afterwards.
double step_lower_envelope(const StepSpec& spec, double t);

void validate_step_spec(const StepSpec& spec, std::size_t horizon);

// Rows 2i and 2i+1 of every Q(k) are +C_i and -C_i.
TargetTube tube_from_step_specs(const std::vector<StepSpec>& specs, const Eigen::MatrixXd& C, std::size_t horizon);

// upper[i][k], lower[i][k] bound C_i x at step k; each sequence has K+1 samples.
TargetTube tube_from_envelopes(const std::vector<std::vector<double>>& upper,
                               const std::vector<std::vector<double>>& lower, const Eigen::MatrixXd& C,
                               std::size_t horizon);

}  // namespace tubesynth
