#include "tubesynth/tanks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tubesynth::tanks {

ContinuousModel tanks_linearize(double R1, double R2, double xbar1, double xbar2, double g) {
    if (!(xbar1 > xbar2)) throw std::invalid_argument("tanks_linearize: requires xbar1 > xbar2");
    if (!(R1 > 0.0) || !(R2 > 0.0)) throw std::invalid_argument("tanks_linearize: areas must be positive");
    const double L1 = std::sqrt(2.0 * g) / R1;
    const double L2 = std::sqrt(2.0 * g) / R2;
    const double factor = 0.5 / std::sqrt(xbar1 - xbar2);
    ContinuousModel out;
    out.A.resize(2, 2);
    out.A << -L1, L1, L2, -L2;
    out.A *= factor;
    out.B = Eigen::MatrixXd::Identity(2, 2);
    return out;
}

DiscreteModel discretize_zoh(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Bc, double Ts) {
    if (!(Ts > 0.0)) throw std::invalid_argument("discretize_zoh: Ts must be positive");
    const Eigen::Index n = Ac.rows();
    const Eigen::Index m = Bc.cols();
    if (Ac.cols() != n || Bc.rows() != n) throw std::invalid_argument("discretize_zoh: shape mismatch");

    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n + m, n + m);
    Z.topLeftCorner(n, n) = Ac * Ts;
    Z.topRightCorner(n, m) = Bc * Ts;

    const double norm = Z.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    Z /= std::ldexp(1.0, squarings);

    constexpr int kMaxTerms = 40;
    const Eigen::Index N = n + m;
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(N, N);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(N, N);
    bool converged = false;
    for (int k = 1; k <= kMaxTerms; ++k) {
        term = term * Z / static_cast<double>(k);
        E += term;
        if (term.cwiseAbs().maxCoeff() <= 1e-17) {
            converged = true;
            break;
        }
    }
    if (!converged) throw std::runtime_error("discretize_zoh: Taylor series did not converge");
    for (int i = 0; i < squarings; ++i) E = E * E;

    return DiscreteModel{E.topLeftCorner(n, n), E.topRightCorner(n, m)};
}

double Plant::L1() const { return std::sqrt(2.0 * g) / R1; }
double Plant::L2() const { return std::sqrt(2.0 * g) / R2; }
double Plant::equilibrium_inflow() const { return L1() * std::sqrt(xbar1 - xbar2); }
double Plant::equilibrium_outflow() const { return L2() * std::sqrt(xbar1 - xbar2); }

namespace {

Eigen::Vector2d tank_rhs(const Plant& plant, const Eigen::Vector2d& x, const Eigen::Vector2d& u, double t) {
    const double head = x(0) - x(1);
    if (head < 0.0) {
        throw DomainError("tanks: level in tank 1 fell below tank 2 (x1 - x2 = " + std::to_string(head) + ")", x, t);
    }
    const double flow = std::sqrt(head);
    return {-plant.L1() * flow + u(0), plant.L2() * flow + u(1)};
}

}  // namespace

NonlinearTrajectory tanks_nonlinear_simulate(const Plant& plant, const Eigen::Vector2d& x0_levels,
                                             const std::vector<Eigen::MatrixXd>& gains, double Ts, double T_end,
                                             const NonlinearOptions& options) {
    if (!(Ts > 0.0) || !(T_end >= 0.0)) throw std::invalid_argument("tanks_nonlinear_simulate: bad time settings");
    const auto samples = static_cast<std::size_t>(std::llround(T_end / Ts));
    if (samples > gains.size()) {
        throw std::invalid_argument("tanks_nonlinear_simulate: " + std::to_string(samples) + " samples need as many gains, got " +
                                    std::to_string(gains.size()));
    }
    const int substeps = std::max(1, static_cast<int>(std::llround(Ts / options.rk4_step)));
    const double h = Ts / substeps;
    const Eigen::Vector2d xbar(plant.xbar1, plant.xbar2);

    NonlinearTrajectory out;
    Eigen::Vector2d x = x0_levels;
    out.errors.push_back(x - xbar);
    out.overflow = (x.array() > plant.height).any();
    double t = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const Eigen::VectorXd e = x - xbar;
        const Eigen::VectorXd ut = gains[k] * (options.C * e);
        Eigen::Vector2d u(ut(0) + plant.equilibrium_inflow(), ut(1) - plant.equilibrium_outflow());
        if (u(0) < 0.0) {
            u(0) = 0.0;
            out.clipped = true;
        }
        if (u(1) > 0.0) {
            u(1) = 0.0;
            out.clipped = true;
        }
        out.shifted_controls.push_back(ut);
        out.physical_controls.push_back(u);
        for (int i = 0; i < substeps; ++i) {
            const Eigen::Vector2d k1 = tank_rhs(plant, x, u, t);
            const Eigen::Vector2d k2 = tank_rhs(plant, x + 0.5 * h * k1, u, t + 0.5 * h);
            const Eigen::Vector2d k3 = tank_rhs(plant, x + 0.5 * h * k2, u, t + 0.5 * h);
            const Eigen::Vector2d k4 = tank_rhs(plant, x + h * k3, u, t + h);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
            if ((x.array() > plant.height).any()) out.overflow = true;
        }
        out.errors.push_back(x - xbar);
    }
    return out;
}

std::vector<Plant> demo_plants(const DemoSettings& settings) {
    std::vector<Plant> plants;
    for (double R1 : settings.R1_values) {
        Plant p;
        p.R1 = R1;
        p.R2 = settings.R2;
        p.xbar1 = settings.xbar1;
        p.xbar2 = settings.xbar2;
        plants.push_back(p);
    }
    return plants;
}

SynthesisProblem demo_problem(const DemoSettings& settings) {
    if (settings.R1_values.empty()) throw std::invalid_argument("tanks demo: no R1 values");
    std::vector<Eigen::MatrixXd> A, B;
    for (const auto& plant : demo_plants(settings)) {
        const auto ct = tanks_linearize(plant.R1, plant.R2, plant.xbar1, plant.xbar2, plant.g);
        const auto dt = discretize_zoh(ct.A, ct.B, settings.Ts);
        A.push_back(dt.A);
        B.push_back(dt.B);
    }
    const Eigen::MatrixXd C = (Eigen::MatrixXd(1, 2) << 0.0, 1.0).finished();
    PolytopicModel model(std::move(A), std::move(B), C);

    StepSpec s1 = settings.tank1;
    StepSpec s2 = settings.tank2;
    s1.sample_time = s2.sample_time = settings.Ts;
    TargetTube tube = tube_from_step_specs({s1, s2}, Eigen::MatrixXd::Identity(2, 2), settings.horizon);

    SynthesisProblem problem{std::move(model), std::move(tube), std::nullopt, std::nullopt, true, false, {}};
    if (settings.control_constraints) {
        // The true R1 is unknown at design time, so bound u~1 by the smallest
        // equilibrium inflow over the candidate areas.
        double inflow = std::numeric_limits<double>::infinity();
        for (const auto& plant : demo_plants(settings)) inflow = std::min(inflow, plant.equilibrium_inflow());
        const double outflow = demo_plants(settings).front().equilibrium_outflow();
        const Eigen::MatrixXd U = (Eigen::MatrixXd(2, 2) << -1.0, 0.0, 0.0, 1.0).finished();
        const Eigen::Vector2d theta(inflow, outflow);
        problem.control_constraints = ControlConstraints{
            std::vector<PolyhedralSet>(settings.horizon, PolyhedralSet(U, theta))};
    }
    return problem;
}

}  // namespace tubesynth::tanks
