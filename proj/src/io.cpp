#include "tubesynth/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tubesynth::io {

namespace {

json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

const json& require(const json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(what + ": missing field '" + key + "'");
    return j.at(key);
}

std::vector<PolyhedralSet> set_sequence(const json& j, std::size_t count, const std::string& what) {
    std::vector<PolyhedralSet> out;
    if (j.contains("set")) {
        const PolyhedralSet P = polyset_from_json(j.at("set"), what + ".set");
        out.assign(count, P);
        return out;
    }
    const json& arr = require(j, "sets", what);
    if (!arr.is_array() || arr.size() != count) {
        throw ConfigError(what + ".sets: expected " + std::to_string(count) + " entries");
    }
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(polyset_from_json(arr[k], what + ".sets[" + std::to_string(k) + "]"));
    }
    return out;
}

StepSpec step_spec_from_json(const json& j, const std::string& what) {
    StepSpec s;
    s.y_sp = j.value("y_sp", 0.0);
    s.rise_time = require(j, "rise_time", what).get<double>();
    s.rise_tol = require(j, "rise_tol", what).get<double>();
    s.settling_time = require(j, "settling_time", what).get<double>();
    s.steady_tol = require(j, "steady_tol", what).get<double>();
    s.peak = require(j, "peak", what).get<double>();
    s.initial_lower = require(j, "initial_lower", what).get<double>();
    s.sample_time = j.value("sample_time", 1.0);
    return s;
}

TargetTube tube_from_json(const json& j, std::optional<std::size_t> horizon) {
    if (j.contains("explicit")) {
        const json& arr = j.at("explicit");
        if (!arr.is_array() || arr.empty()) throw ConfigError("tube.explicit: expected a nonempty array");
        if (horizon && arr.size() != *horizon + 1) {
            throw ConfigError("tube.explicit: horizon " + std::to_string(*horizon) + " needs " +
                              std::to_string(*horizon + 1) + " sets, got " + std::to_string(arr.size()));
        }
        std::vector<PolyhedralSet> sets;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const json& e = arr[k];
            const std::string what = "tube.explicit[" + std::to_string(k) + "]";
            if (e.contains("Q")) {
                sets.emplace_back(matrix_from_json(e.at("Q"), what + ".Q"), vector_from_json(require(e, "phi", what), what + ".phi"));
            } else {
                sets.push_back(polyset_from_json(e, what));
            }
        }
        return TargetTube(std::move(sets));
    }
    if (!horizon) throw ConfigError("config: 'horizon' is required for step-spec and envelope tubes");
    if (j.contains("step_specs")) {
        const json& s = j.at("step_specs");
        const Eigen::MatrixXd C = matrix_from_json(require(s, "C", "tube.step_specs"), "tube.step_specs.C");
        std::vector<StepSpec> specs;
        for (const auto& e : require(s, "specs", "tube.step_specs")) specs.push_back(step_spec_from_json(e, "tube.step_specs.specs"));
        return tube_from_step_specs(specs, C, *horizon);
    }
    if (j.contains("envelopes")) {
        const json& e = j.at("envelopes");
        const Eigen::MatrixXd C = matrix_from_json(require(e, "C", "tube.envelopes"), "tube.envelopes.C");
        const auto upper = require(e, "upper", "tube.envelopes").get<std::vector<std::vector<double>>>();
        const auto lower = require(e, "lower", "tube.envelopes").get<std::vector<std::vector<double>>>();
        return tube_from_envelopes(upper, lower, C, *horizon);
    }
    throw ConfigError("tube: expected one of 'explicit', 'step_specs', 'envelopes'");
}

RealizationPolicy policy_from_string(const std::string& s) {
    if (s == "random_vertex") return RealizationPolicy::random_vertex();
    if (s == "random_convex") return RealizationPolicy::random_convex();
    if (s.rfind("vertex:", 0) == 0) return RealizationPolicy::fixed(std::stoul(s.substr(7)));
    throw ConfigError("simulation.policy: unknown policy '" + s + "'");
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& M) {
    json data = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) data.push_back(M(i, j));
    }
    return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + ": expected {rows, cols, data}");
    const auto rows = require(j, "rows", what).get<long>();
    const auto cols = require(j, "cols", what).get<long>();
    const json& data = require(j, "data", what);
    if (rows < 0 || cols < 0) throw ConfigError(what + ": negative dimensions");
    if (!data.is_array() || static_cast<long>(data.size()) != rows * cols) {
        throw ConfigError(what + ": data has " + std::to_string(data.is_array() ? data.size() : 0) +
                          " entries, expected rows*cols = " + std::to_string(rows * cols));
    }
    Eigen::MatrixXd M(rows, cols);
    for (long i = 0; i < rows; ++i) {
        for (long c = 0; c < cols; ++c) M(i, c) = data[static_cast<std::size_t>(i * cols + c)].get<double>();
    }
    return M;
}

json vector_to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + ": expected an array");
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json polyset_to_json(const PolyhedralSet& P) { return json{{"M", matrix_to_json(P.M())}, {"m", vector_to_json(P.m())}}; }

PolyhedralSet polyset_from_json(const json& j, const std::string& what) {
    try {
        if (j.contains("box")) {
            const json& b = j.at("box");
            return box(vector_from_json(require(b, "lo", what + ".box"), what + ".box.lo"),
                       vector_from_json(require(b, "hi", what + ".box"), what + ".box.hi"));
        }
        return PolyhedralSet(matrix_from_json(require(j, "M", what), what + ".M"),
                             vector_from_json(require(j, "m", what), what + ".m"));
    } catch (const std::invalid_argument& err) {
        throw ConfigError(what + ": " + err.what());
    }
}

PolytopicModel model_from_json(const json& j) {
    const json& A = require(j, "A", "model");
    const json& B = require(j, "B", "model");
    if (!A.is_array() || !B.is_array()) throw ConfigError("model: A and B must be arrays of matrices");
    std::vector<Eigen::MatrixXd> As, Bs;
    for (std::size_t i = 0; i < A.size(); ++i) As.push_back(matrix_from_json(A[i], "model.A[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < B.size(); ++i) Bs.push_back(matrix_from_json(B[i], "model.B[" + std::to_string(i) + "]"));
    const Eigen::MatrixXd C = matrix_from_json(require(j, "C", "model"), "model.C");
    std::optional<Eigen::MatrixXd> D;
    if (j.contains("D") && !j.at("D").is_null()) D = matrix_from_json(j.at("D"), "model.D");
    try {
        return PolytopicModel(std::move(As), std::move(Bs), C, std::move(D));
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
}

ProblemConfig config_from_json(const json& j) {
    try {
        std::optional<std::size_t> horizon;
        if (j.contains("horizon")) horizon = j.at("horizon").get<std::size_t>();
        PolytopicModel model = model_from_json(require(j, "model", "config"));
        TargetTube tube = tube_from_json(require(j, "tube", "config"), horizon);
        const std::size_t K = tube.horizon();

        SynthesisProblem problem{std::move(model), std::move(tube), std::nullopt, std::nullopt, false, false, {}};
        if (j.contains("disturbance")) {
            problem.disturbance = DisturbanceTube{set_sequence(j.at("disturbance"), K, "disturbance")};
        }
        if (j.contains("control_constraints")) {
            problem.control_constraints = ControlConstraints{set_sequence(j.at("control_constraints"), K, "control_constraints")};
        }
        const json assumptions = j.value("assumptions", json::object());
        problem.options.require_bounded = assumptions.value("a1", true);
        problem.a3_nonneg_psi = assumptions.value("a3", false);
        problem.a5_dv_in_x = assumptions.value("a5", false);

        ProblemConfig cfg{std::move(problem)};
        const json tol = j.value("tolerances", json::object());
        cfg.problem.options.zero_threshold = tol.value("zero_threshold", kZeroThreshold);
        cfg.problem.options.containment_tol = tol.value("containment", kContainmentTol);
        cfg.membership_tol = tol.value("membership", kMembershipTol);

        const json sim = j.value("simulation", json::object());
        cfg.seed = sim.value("seed", std::uint64_t{1});
        cfg.runs = sim.value("runs", std::size_t{100});
        cfg.policy = policy_from_string(sim.value("policy", std::string("random_vertex")));

        // Dimension checks that synthesis would otherwise hit later.
        const auto& pr = cfg.problem;
        if (pr.tube.dim() != pr.model.n()) {
            throw ConfigError("tube: sets have dimension " + std::to_string(pr.tube.dim()) + ", model state has " +
                              std::to_string(pr.model.n()));
        }
        if (pr.disturbance && !pr.model.has_disturbance()) throw ConfigError("disturbance: model.D is required");
        if (pr.disturbance) {
            for (const auto& V : pr.disturbance->sets) {
                if (V.dim() != pr.model.p()) throw ConfigError("disturbance: set dimension does not match D columns");
            }
        }
        if (pr.control_constraints) {
            for (const auto& U : pr.control_constraints->sets) {
                if (U.dim() != pr.model.m()) throw ConfigError("control_constraints: set dimension does not match B columns");
            }
        }
        if (pr.a5_dv_in_x && !pr.disturbance) throw ConfigError("assumptions.a5 requires a disturbance tube");
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& err) {
        throw ConfigError(std::string("config: ") + err.what());
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
}

json config_to_json(const ProblemConfig& cfg) {
    const auto& pr = cfg.problem;
    json model;
    model["A"] = json::array();
    model["B"] = json::array();
    for (std::size_t i = 0; i < pr.model.s(); ++i) {
        model["A"].push_back(matrix_to_json(pr.model.A(i)));
        model["B"].push_back(matrix_to_json(pr.model.B(i)));
    }
    model["C"] = matrix_to_json(pr.model.C());
    if (pr.model.has_disturbance()) model["D"] = matrix_to_json(*pr.model.D());

    json tube = json::array();
    for (const auto& H : pr.tube.sets()) tube.push_back(json{{"Q", matrix_to_json(H.M())}, {"phi", vector_to_json(H.m())}});

    json j{{"horizon", pr.tube.horizon()}, {"model", model}, {"tube", {{"explicit", tube}}}};
    auto sets_json = [](const std::vector<PolyhedralSet>& sets) {
        json arr = json::array();
        for (const auto& P : sets) arr.push_back(polyset_to_json(P));
        return json{{"sets", arr}};
    };
    if (pr.disturbance) j["disturbance"] = sets_json(pr.disturbance->sets);
    if (pr.control_constraints) j["control_constraints"] = sets_json(pr.control_constraints->sets);
    j["assumptions"] = json{{"a1", pr.options.require_bounded}, {"a3", pr.a3_nonneg_psi}, {"a5", pr.a5_dv_in_x}};
    j["tolerances"] = json{{"zero_threshold", pr.options.zero_threshold},
                           {"containment", pr.options.containment_tol},
                           {"membership", cfg.membership_tol}};
    std::string policy = "random_vertex";
    if (cfg.policy.mode == RealizationPolicy::Mode::RandomConvex) policy = "random_convex";
    if (cfg.policy.mode == RealizationPolicy::Mode::FixedVertex) policy = "vertex:" + std::to_string(cfg.policy.vertex);
    j["simulation"] = json{{"seed", cfg.seed}, {"runs", cfg.runs}, {"policy", policy}};
    return j;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError(path.string() + ": " + err.what());
    }
}

ProblemConfig load_config(const std::filesystem::path& path) { return config_from_json(load_json(path)); }

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

json gains_to_json(const std::vector<Eigen::MatrixXd>& gains) {
    json j;
    j["horizon"] = gains.size();
    j["m"] = gains.empty() ? 0 : gains.front().rows();
    j["r"] = gains.empty() ? 0 : gains.front().cols();
    j["gains"] = json::array();
    for (std::size_t k = 0; k < gains.size(); ++k) j["gains"].push_back(json{{"k", k}, {"F", matrix_to_json(gains[k])}});
    return j;
}

std::vector<Eigen::MatrixXd> gains_from_json(const json& j, std::size_t horizon, Eigen::Index m, Eigen::Index r) {
    try {
        const json& arr = require(j, "gains", "gains.json");
        if (!arr.is_array() || arr.size() != horizon) {
            throw ConfigError("gains.json: expected " + std::to_string(horizon) + " gains, got " +
                              std::to_string(arr.is_array() ? arr.size() : 0));
        }
        std::vector<Eigen::MatrixXd> out;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            Eigen::MatrixXd F = matrix_from_json(require(arr[k], "F", "gains.json"), "gains[" + std::to_string(k) + "].F");
            if (F.rows() != m || F.cols() != r) {
                throw ConfigError("gains[" + std::to_string(k) + "].F is " + std::to_string(F.rows()) + "x" +
                                  std::to_string(F.cols()) + ", model expects " + std::to_string(m) + "x" + std::to_string(r));
            }
            out.push_back(std::move(F));
        }
        return out;
    } catch (const json::exception& err) {
        throw ConfigError(std::string("gains.json: ") + err.what());
    }
}

json sets_to_json(const SynthesisProblem& problem, const SynthesisResult& result) {
    json j;
    const std::size_t K = result.horizon();
    j["horizon"] = K;
    j["steps"] = json::array();
    for (std::size_t k = 0; k <= K; ++k) {
        json s{{"k", k},
               {"Q", matrix_to_json(problem.tube.Q(k))},
               {"phi", vector_to_json(problem.tube.phi(k))},
               {"psi", vector_to_json(result.psi[k])}};
        if (k < K) {
            s["epsilon"] = vector_to_json(result.epsilon[k]);
            s["provenance"] = to_string(result.provenance[k]);
        } else {
            s["epsilon"] = nullptr;
            s["provenance"] = nullptr;
        }
        j["steps"].push_back(std::move(s));
    }
    return j;
}

std::vector<Eigen::VectorXd> psi_from_sets_json(const json& j, const TargetTube& tube) {
    try {
        const json& steps = require(j, "steps", "sets.json");
        if (!steps.is_array() || steps.size() != tube.horizon() + 1) {
            throw ConfigError("sets.json: expected " + std::to_string(tube.horizon() + 1) + " steps");
        }
        std::vector<Eigen::VectorXd> out;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            Eigen::VectorXd psi = vector_from_json(require(steps[k], "psi", "sets.json"), "sets.json psi");
            if (psi.size() != tube.Q(k).rows()) throw ConfigError("sets.json: psi(" + std::to_string(k) + ") has wrong length");
            out.push_back(std::move(psi));
        }
        return out;
    } catch (const json::exception& err) {
        throw ConfigError(std::string("sets.json: ") + err.what());
    }
}

json report_to_json(const ContainmentReport& report) {
    json certs = json::array();
    for (const auto& G : report.certificates) certs.push_back(matrix_to_json(G));
    return json{{"contained", report.contained},
                {"worst_violation", finite_or_string(report.worst_violation)},
                {"certificates", certs}};
}

json certificates_to_json(const SynthesisResult& result) {
    json j;
    j["horizon"] = result.horizon();
    j["certified"] = result.certified();
    j["steps"] = json::array();
    for (const auto& c : result.certificates) {
        json s = report_to_json(c.report);
        s["k"] = c.k;
        s["source"] = c.from_tube ? "H" : "X";
        s["source_empty"] = c.source_empty;
        j["steps"].push_back(std::move(s));
    }
    return j;
}

}  // namespace tubesynth::io
