#pragma once

// Two coupled water tanks: tank 1 is filled by a pump, tank 2 drains through
// a controlled outlet, and water flows between them through a pipe.
//
//   x1' = -L1 sqrt(x1 - x2) + u1,   x2' = L2 sqrt(x1 - x2) + u2,
//   L_i = sqrt(2 g) / R_i,          u1 = f_i / R1,  u2 = f_e / R2.
//
// Error coordinates e = x - xbar with shifted controls
// u~1 = u1 - L1 sqrt(xbar1 - xbar2), u~2 = u2 + L2 sqrt(xbar1 - xbar2).

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tubesynth/synth.hpp"
#include "tubesynth/tube.hpp"

namespace tubesynth::tanks {

inline constexpr double kGravity = 10.0;

struct ContinuousModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

struct DiscreteModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

// Jacobian of the tank dynamics at (xbar1, xbar2). Requires xbar1 > xbar2.
ContinuousModel tanks_linearize(double R1, double R2, double xbar1, double xbar2, double g = kGravity);

// Exact zero-order-hold sampling via a scaled-and-squared Taylor series of
// exp([A B; 0 0] Ts).
DiscreteModel discretize_zoh(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Bc, double Ts);

struct Plant {
    double R1 = 5.0;
    double R2 = 5.0;
    double xbar1 = 2.0;
    double xbar2 = 1.6;
    double g = kGravity;
    double height = 3.0;

    double L1() const;
    double L2() const;
    // L1 sqrt(xbar1 - xbar2) and L2 sqrt(xbar1 - xbar2)
    double equilibrium_inflow() const;
    double equilibrium_outflow() const;
};

struct NonlinearTrajectory {
    std::vector<Eigen::Vector2d> errors;          // e(k), k = 0..N
    std::vector<Eigen::VectorXd> shifted_controls;  // u~(k) = F(k) y(k), before clipping
    std::vector<Eigen::Vector2d> physical_controls; // (u1, u2) after clipping
    bool clipped = false;
    bool overflow = false;
};

class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, Eigen::Vector2d levels, double t)
        : std::runtime_error(what), levels_(std::move(levels)), t_(t) {}
    const Eigen::Vector2d& levels() const { return levels_; }
    double time() const { return t_; }

private:
    Eigen::Vector2d levels_;
    double t_;
};

struct NonlinearOptions {
    double rk4_step = 0.01;
    // Output map from error coordinates to the measured signal.
    Eigen::MatrixXd C = (Eigen::MatrixXd(1, 2) << 0.0, 1.0).finished();
};

// Integrates the nonlinear plant with classical RK4 between samples, holding
// u~(k) = F(k) C e(k) over each interval. Physical controls are clipped to
// f_i >= 0 and f_e <= 0. Runs for round(T_end / Ts) samples, which must not
// exceed the number of gains.
NonlinearTrajectory tanks_nonlinear_simulate(const Plant& plant, const Eigen::Vector2d& x0_levels,
                                             const std::vector<Eigen::MatrixXd>& gains, double Ts, double T_end,
                                             const NonlinearOptions& options = {});

// Settings for the coupled-tanks case study.
struct DemoSettings {
    std::size_t horizon = 15;
    double Ts = 1.0;
    std::vector<double> R1_values{3.0, 4.0, 5.0};
    double R2 = 5.0;
    double xbar1 = 2.0;
    double xbar2 = 1.6;
    StepSpec tank1{0.0, 5.0, 0.1, 10.0, 0.01, 0.01, -0.3, 1.0};
    StepSpec tank2{0.0, 5.0, 0.05, 10.0, 0.01, 0.01, -0.3, 1.0};
    bool control_constraints = true;
};

std::vector<Plant> demo_plants(const DemoSettings& settings);

// Three ZOH-discretized vertices, output e2 only, step-spec tube on (e1, e2),
// and u~1 >= -min_R1 L1 sqrt(.), u~2 <= L2 sqrt(.) for every step.
SynthesisProblem demo_problem(const DemoSettings& settings);

}  // namespace tubesynth::tanks
