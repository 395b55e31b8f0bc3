#include "tubesynth/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "tubesynth/io.hpp"
#include "tubesynth/sim.hpp"
#include "tubesynth/synth.hpp"
#include "tubesynth/tanks.hpp"

namespace tubesynth::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

// Envelope violations below this are tolerated for the nonlinear runs, which
// are not covered by the linear guarantee.
constexpr double kNonlinearEnvelopeTol = 1e-3;

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const io::ConfigError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const SynthesisError& e) {
        err << "synthesis failed at k=" << e.step() << " (" << e.stage() << "): " << e.what() << '\n';
        return kSynthesisFailure;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const PolytopeError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << std::setprecision(15);
    return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Violation {
    std::size_t run = 0;
    std::size_t k = 0;
    Eigen::Index row = 0;
    double magnitude = 0.0;
};

struct AuditSummary {
    std::size_t runs = 0;
    std::size_t passed = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::optional<Violation> first_violation;
    // Against X(k), when available.
    std::size_t passed_shrunk = 0;
    double worst_slack_shrunk = std::numeric_limits<double>::infinity();

    bool pass() const { return passed == runs; }
};

json summary_to_json(const AuditSummary& s, bool with_shrunk, double tol) {
    json j{{"runs", s.runs},
           {"passed", s.passed},
           {"failed", s.runs - s.passed},
           {"tolerance", tol},
           {"worst_slack", finite_or_null(s.worst_slack)}};
    if (s.first_violation) {
        j["first_violation"] = json{{"run", s.first_violation->run},
                                    {"k", s.first_violation->k},
                                    {"row", s.first_violation->row},
                                    {"magnitude", s.first_violation->magnitude}};
    } else {
        j["first_violation"] = nullptr;
    }
    if (with_shrunk) {
        j["shrunk_tube"] = json{{"passed", s.passed_shrunk},
                                {"failed", s.runs - s.passed_shrunk},
                                {"worst_slack", finite_or_null(s.worst_slack_shrunk)}};
    }
    return j;
}

std::string realization_field(const Eigen::VectorXd& beta) {
    Eigen::Index idx = 0;
    if (beta.maxCoeff(&idx) == 1.0) return std::to_string(idx);
    std::ostringstream os;
    os << std::setprecision(6);
    for (Eigen::Index i = 0; i < beta.size(); ++i) os << (i ? ";" : "") << beta(i);
    return os.str();
}

// Closed-loop Monte Carlo audit against `audit_sets` (and `shrunk` if given).
// Run j draws x0 from `initial` and everything else from seed_seq{seed, j}.
AuditSummary audit_runs(const SynthesisProblem& problem, const std::vector<Eigen::MatrixXd>& gains,
                        const PolyhedralSet& initial, const std::vector<PolyhedralSet>& audit_sets,
                        const std::vector<PolyhedralSet>* shrunk, std::size_t runs, std::uint64_t seed,
                        const RealizationPolicy& policy, double tol, std::ostream* csv) {
    const auto& model = problem.model;
    DisturbanceSampler sampler;
    if (problem.disturbance) sampler = vertex_disturbance_sampler(problem.disturbance->sets);

    if (csv) {
        *csv << "run_id,k";
        for (Eigen::Index i = 0; i < model.n(); ++i) *csv << ",x_" << i + 1;
        for (Eigen::Index i = 0; i < model.m(); ++i) *csv << ",u_" << i + 1;
        *csv << ",realization,membership_ok\n";
    }

    AuditSummary summary;
    summary.runs = runs;
    for (std::size_t run = 0; run < runs; ++run) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(run)};
        Rng rng(seq);
        const Eigen::VectorXd x0 = sample_point(initial, rng);
        const Trajectory traj = simulate_closed_loop(model, gains, x0, policy, rng(), sampler);

        const MembershipReport rep = verify_membership(traj, audit_sets, tol);
        summary.worst_slack = std::min(summary.worst_slack, rep.worst_slack);
        if (rep.pass) {
            ++summary.passed;
        } else if (!summary.first_violation) {
            summary.first_violation =
                Violation{run, rep.first_violation->k, rep.first_violation->row, rep.first_violation->magnitude};
        }
        if (shrunk) {
            const MembershipReport rx = verify_membership(traj, *shrunk, tol);
            summary.worst_slack_shrunk = std::min(summary.worst_slack_shrunk, rx.worst_slack);
            if (rx.pass) ++summary.passed_shrunk;
        }

        if (!csv) continue;
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            *csv << run << ',' << k;
            for (Eigen::Index i = 0; i < model.n(); ++i) *csv << ',' << traj.states[k](i);
            for (Eigen::Index i = 0; i < model.m(); ++i) {
                *csv << ',';
                if (k < traj.controls.size()) *csv << traj.controls[k](i);
            }
            *csv << ',';
            if (k < traj.betas.size()) *csv << realization_field(traj.betas[k]);
            *csv << ',' << (contains_point(audit_sets[k], traj.states[k], tol) ? 1 : 0) << '\n';
        }
    }
    return summary;
}

std::vector<PolyhedralSet> shrunk_sets(const TargetTube& tube, const std::vector<Eigen::VectorXd>& psi) {
    std::vector<PolyhedralSet> out;
    for (std::size_t k = 0; k < psi.size(); ++k) out.push_back(tube.at(k).with_bounds(psi[k]));
    return out;
}

Eigen::MatrixXd gain_or_zero(const json& j, const PolytopicModel& model) {
    if (!j.contains("F")) return Eigen::MatrixXd::Zero(model.m(), model.r());
    Eigen::MatrixXd F = io::matrix_from_json(j.at("F"), "F");
    if (F.rows() != model.m() || F.cols() != model.r()) {
        throw io::ConfigError("F is " + std::to_string(F.rows()) + "x" + std::to_string(F.cols()) + ", expected " +
                              std::to_string(model.m()) + "x" + std::to_string(model.r()));
    }
    return F;
}

int emit_report(const ContainmentReport& report, const std::optional<fs::path>& out, std::ostream& log) {
    const json j = io::report_to_json(report);
    if (out) io::write_json(*out, j);
    log << j.dump(2) << '\n';
    return report.contained ? kOk : kAuditFailure;
}

// Vertices ordered by angle about their centroid, for drawing 2-D polygons.
std::vector<Eigen::VectorXd> polygon(const PolyhedralSet& P) {
    auto verts = vertices(P);
    if (verts.empty() || P.dim() != 2) return verts;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
    for (const auto& v : verts) c += v;
    c /= static_cast<double>(verts.size());
    std::sort(verts.begin(), verts.end(), [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
    });
    return verts;
}

// max over k and h in vert(H(k)) of U(k) F(k) C h - theta(k)
double control_residual(const SynthesisProblem& problem, const std::vector<Eigen::MatrixXd>& gains) {
    double worst = -std::numeric_limits<double>::infinity();
    if (!problem.control_constraints) return worst;
    for (std::size_t k = 0; k < gains.size(); ++k) {
        const auto& U = problem.control_constraints->sets[k];
        for (const auto& h : vertices(problem.tube.at(k))) {
            const Eigen::VectorXd r = U.M() * (gains[k] * (problem.model.C() * h)) - U.m();
            worst = std::max(worst, r.maxCoeff());
        }
    }
    return worst;
}

}  // namespace

int run_synth(const SynthArgs& args, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const io::ProblemConfig cfg = io::load_config(args.config);
        cfg.problem.validate();
        const SynthesisResult result = synthesize(cfg.problem);

        fs::create_directories(args.out);
        io::write_json(args.out / "gains.json", io::gains_to_json(result.gains));
        io::write_json(args.out / "sets.json", io::sets_to_json(cfg.problem, result));
        io::write_json(args.out / "certificates.json", io::certificates_to_json(result));

        std::size_t shrunk = 0;
        for (auto p : result.provenance) shrunk += p == Provenance::Shrunk;
        log << "synthesized K=" << result.horizon() << " gains (" << shrunk << " shrunk steps), certified="
            << (result.certified() ? "yes" : "no") << '\n';
        if (!result.certified()) {
            err << "post-hoc containment check failed\n";
            return static_cast<int>(kAuditFailure);
        }
        return static_cast<int>(kOk);
    });
}

int run_simulate(const SimulateArgs& args, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const io::ProblemConfig cfg = io::load_config(args.config);
        const auto& problem = cfg.problem;
        const std::size_t K = problem.tube.horizon();
        const auto gains = io::gains_from_json(io::load_json(args.gains), K, problem.model.m(), problem.model.r());

        std::optional<std::vector<PolyhedralSet>> shrunk;
        if (args.sets) shrunk = shrunk_sets(problem.tube, io::psi_from_sets_json(io::load_json(*args.sets), problem.tube));
        const PolyhedralSet& initial = shrunk ? shrunk->front() : problem.tube.at(0);
        if (is_empty(initial)) throw io::ConfigError("initial set is empty; nothing to simulate");

        const std::size_t runs = args.runs.value_or(cfg.runs);
        const std::uint64_t seed = args.seed.value_or(cfg.seed);
        const double tol = args.tol.value_or(cfg.membership_tol);

        fs::create_directories(args.out);
        std::ofstream csv = open_out(args.out / "trajectories.csv");
        const AuditSummary s = audit_runs(problem, gains, initial, problem.tube.sets(), shrunk ? &*shrunk : nullptr,
                                          runs, seed, cfg.policy, tol, &csv);
        json audit = summary_to_json(s, shrunk.has_value(), tol);
        audit["seed"] = seed;
        audit["initial_set"] = shrunk ? "X(0)" : "H(0)";
        io::write_json(args.out / "audit.json", audit);

        log << s.passed << '/' << s.runs << " runs inside the target tube (worst slack " << s.worst_slack << ")\n";
        if (s.first_violation) {
            log << "first violation: run " << s.first_violation->run << ", k=" << s.first_violation->k << ", row "
                << s.first_violation->row << ", by " << s.first_violation->magnitude << '\n';
        }
        return static_cast<int>(s.pass() ? kOk : kAuditFailure);
    });
}

int run_check_contain(const CheckArgs& args, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const json j = io::load_json(args.config);
        if (!j.contains("model") || !j.contains("source") || !j.contains("target")) {
            throw io::ConfigError("check-contain: expected fields 'model', 'source', 'target'");
        }
        const PolytopicModel model = io::model_from_json(j.at("model"));
        const Eigen::MatrixXd F = gain_or_zero(j, model);
        const PolyhedralSet P1 = io::polyset_from_json(j.at("source"), "source");
        const PolyhedralSet P2 = io::polyset_from_json(j.at("target"), "target");
        const double tol = j.value("tol", kContainmentTol);
        if (j.contains("disturbance")) {
            if (!model.has_disturbance()) throw io::ConfigError("check-contain: disturbance given but model has no D");
            const PolyhedralSet V = io::polyset_from_json(j.at("disturbance"), "disturbance");
            return emit_report(check_containment_disturbance(model, F, P1, V, P2, tol), args.out, log);
        }
        return emit_report(check_containment(model, F, P1, P2, tol), args.out, log);
    });
}

int run_check_invariant(const CheckArgs& args, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const json j = io::load_json(args.config);
        if (!j.contains("model") || !j.contains("S") || !j.contains("V")) {
            throw io::ConfigError("check-invariant: expected fields 'model', 'S', 'V'");
        }
        const PolytopicModel model = io::model_from_json(j.at("model"));
        if (!model.has_disturbance()) throw io::ConfigError("check-invariant: model.D is required");
        const Eigen::MatrixXd F = gain_or_zero(j, model);
        const PolyhedralSet S = io::polyset_from_json(j.at("S"), "S");
        const PolyhedralSet V = io::polyset_from_json(j.at("V"), "V");
        return emit_report(check_robust_invariant(model, F, S, V, j.value("tol", kContainmentTol)), args.out, log);
    });
}

int run_demo_tanks(const DemoArgs& args, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        tanks::DemoSettings settings;
        if (args.horizon) settings.horizon = *args.horizon;
        if (args.r1 && !(*args.r1 > 0.0)) throw io::ConfigError("--r1 must be positive");

        SynthesisProblem problem = tanks::demo_problem(settings);
        problem.validate();
        const std::size_t K = problem.tube.horizon();
        log << "[synthesis] K=" << K << ", " << problem.model.s() << " vertex models\n";
        const SynthesisResult result = synthesize(problem);

        fs::create_directories(args.out);
        io::write_json(args.out / "gains.json", io::gains_to_json(result.gains));
        io::write_json(args.out / "sets.json", io::sets_to_json(problem, result));
        io::write_json(args.out / "certificates.json", io::certificates_to_json(result));
        io::write_json(args.out / "config.json", io::config_to_json(io::ProblemConfig{problem, args.tol, args.seed, args.runs}));

        const auto X = shrunk_sets(problem.tube, result.psi);
        if (is_empty(X.front())) throw SynthesisError(0, "initial set", "X(0) is empty");

        // Linear audit: random vertex realizations, x0 in X(0), membership in X(k).
        log << "[linear audit] " << args.runs << " runs\n";
        std::ofstream traj_csv = open_out(args.out / "trajectories.csv");
        const AuditSummary lin = audit_runs(problem, result.gains, X.front(), X, nullptr, args.runs, args.seed,
                                            RealizationPolicy::random_vertex(), args.tol, &traj_csv);

        // Envelopes and projections of X(k) for plotting.
        std::ofstream env = open_out(args.out / "envelopes.csv");
        env << "k,t,h_upper_1,h_lower_1,h_upper_2,h_lower_2,x_lower_1,x_upper_1,x_lower_2,x_upper_2\n";
        for (std::size_t k = 0; k <= K; ++k) {
            const double t = static_cast<double>(k) * settings.Ts;
            const auto [lo, hi] = bounding_box(X[k]);
            env << k << ',' << t << ',' << step_upper_envelope(settings.tank1, t) << ','
                << step_lower_envelope(settings.tank1, t) << ',' << step_upper_envelope(settings.tank2, t)
                << ',' << step_lower_envelope(settings.tank2, t) << ',' << lo(0) << ',' << hi(0) << ','
                << lo(1) << ',' << hi(1) << '\n';
        }

        std::ofstream verts = open_out(args.out / "set_vertices.csv");
        verts << "set,k,vertex,e_1,e_2\n";
        for (std::size_t k = 0; k <= K; ++k) {
            const auto hv = polygon(problem.tube.at(k));
            for (std::size_t v = 0; v < hv.size(); ++v) verts << "H," << k << ',' << v << ',' << hv[v](0) << ',' << hv[v](1) << '\n';
            const auto xv = polygon(X[k]);
            for (std::size_t v = 0; v < xv.size(); ++v) verts << "X," << k << ',' << v << ',' << xv[v](0) << ',' << xv[v](1) << '\n';
        }

        // Nonlinear runs, one per area, each from its own point of X(0).
        std::vector<tanks::Plant> plants = tanks::demo_plants(settings);
        if (args.r1) {
            tanks::Plant p = plants.front();
            p.R1 = *args.r1;
            plants = {p};
        }
        log << "[nonlinear] " << plants.size() << " run(s)\n";
        std::ofstream nl = open_out(args.out / "nonlinear_runs.csv");
        nl << "run_id,R1,k,t,e_1,e_2,u_tilde_1,u_tilde_2,f_1,f_2,slack_H\n";
        Rng rng(args.seed);
        json nl_runs = json::array();
        bool nonlinear_ok = true;
        for (std::size_t run = 0; run < plants.size(); ++run) {
            const Eigen::VectorXd e0 = sample_point(X.front(), rng);
            const Eigen::Vector2d levels(plants[run].xbar1 + e0(0), plants[run].xbar2 + e0(1));
            const auto traj = tanks::tanks_nonlinear_simulate(plants[run], levels, result.gains, settings.Ts,
                                                              static_cast<double>(K) * settings.Ts);
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k <= K; ++k) {
                const auto& Hk = problem.tube.at(k);
                const double slack = (Hk.m() - Hk.M() * Eigen::VectorXd(traj.errors[k])).minCoeff();
                worst = std::min(worst, slack);
                nl << run << ',' << plants[run].R1 << ',' << k << ',' << static_cast<double>(k) * settings.Ts << ','
                   << traj.errors[k](0) << ',' << traj.errors[k](1) << ',';
                if (k < K) {
                    nl << traj.shifted_controls[k](0) << ',' << traj.shifted_controls[k](1) << ','
                       << traj.physical_controls[k](0) * plants[run].R1 << ','
                       << traj.physical_controls[k](1) * plants[run].R2;
                } else {
                    nl << ",,,";
                }
                nl << ',' << slack << '\n';
            }
            const bool ok = worst >= -kNonlinearEnvelopeTol;
            nonlinear_ok = nonlinear_ok && ok;
            nl_runs.push_back(json{{"run", run},
                                   {"R1", plants[run].R1},
                                   {"e0", io::vector_to_json(e0)},
                                   {"worst_slack", worst},
                                   {"terminal_error", io::vector_to_json(traj.errors.back())},
                                   {"clipped", traj.clipped},
                                   {"overflow", traj.overflow},
                                   {"pass", ok}});
            log << "  R1=" << plants[run].R1 << ": worst envelope slack " << worst << (ok ? "" : " (VIOLATION)") << '\n';
        }

        const double ctrl = control_residual(problem, result.gains);
        const bool ctrl_ok = ctrl <= 1e-8;
        std::size_t n_shrunk = 0;
        for (auto p : result.provenance) n_shrunk += p == Provenance::Shrunk;

        json summary{{"horizon", K},
                     {"seed", args.seed},
                     {"certified", result.certified()},
                     {"shrunk_steps", n_shrunk},
                     {"linear_audit", summary_to_json(lin, false, args.tol)},
                     {"nonlinear_runs", nl_runs},
                     {"nonlinear_envelope_tol", kNonlinearEnvelopeTol},
                     {"control_constraint_residual", finite_or_null(ctrl)}};
        io::write_json(args.out / "summary.json", summary);
        io::write_json(args.out / "audit.json", summary_to_json(lin, false, args.tol));

        log << "[summary] certified=" << (result.certified() ? "yes" : "no") << ", linear " << lin.passed << '/'
            << lin.runs << ", control residual " << ctrl << '\n';
        const bool ok = result.certified() && lin.pass() && nonlinear_ok && ctrl_ok;
        return static_cast<int>(ok ? kOk : kAuditFailure);
    });
}

}  // namespace tubesynth::cli
