#include "gradctl/config.hpp"

#include "gradctl/csv.hpp"
#include "gradctl/version.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gradctl {

void apply_preset(RunConfig& cfg, const std::string& name) {
    if (name == "ak2005_ex52") {
        cfg.problem = "oscillator_5_1";
        cfg.basis = "monomial";
        cfg.monomial_order = 8;
        cfg.training_box = 1.0;
        cfg.rounds = 5;
    } else if (name == "ak2004_ex53") {
        cfg.problem = "integrator_5_2";
        cfg.basis = "logcosh";
        cfg.feature_count = 50;
        cfg.feature_scale = 5.0;
        cfg.loss_q = 100.0;
        cfg.loss_r = 1.0;
        cfg.training_box = 0.5;
        cfg.rounds = 19;
        cfg.ridge = 1e-3;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "preset")
        apply_preset(cfg, value);
    else if (key == "problem")
        cfg.problem = value;
    else if (key == "method")
        cfg.method = value;
    else if (key == "basis")
        cfg.basis = value;
    else if (key == "monomial_order")
        cfg.monomial_order = std::stoi(value);
    else if (key == "feature_count")
        cfg.feature_count = std::stoi(value);
    else if (key == "feature_scale")
        cfg.feature_scale = std::stod(value);
    else if (key == "loss_q")
        cfg.loss_q = std::stod(value);
    else if (key == "loss_r")
        cfg.loss_r = std::stod(value);
    else if (key == "step")
        cfg.step = std::stod(value);
    else if (key == "horizon")
        cfg.horizon = std::stod(value);
    else if (key == "loss_floor")
        cfg.loss_floor = std::stod(value);
    else if (key == "scheme")
        cfg.scheme = value;
    else if (key == "rounds")
        cfg.rounds = std::stoi(value);
    else if (key == "sweeps_per_round")
        cfg.sweeps_per_round = std::stoi(value);
    else if (key == "ghjb_samples")
        cfg.ghjb_samples = std::stol(value);
    else if (key == "training_box")
        cfg.training_box = std::stod(value);
    else if (key == "sample_warp")
        cfg.sample_warp = value;
    else if (key == "ghjb_sample_warp")
        cfg.ghjb_sample_warp = value;
    else if (key == "ridge")
        cfg.ridge = std::stod(value);
    else if (key == "seed")
        cfg.seed = std::stoull(value);
    else if (key == "out")
        cfg.out = value;
    else
        throw std::invalid_argument("unknown config key: " + key);
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;

    // Presets first so later keys override their defaults regardless of order.
    std::vector<std::pair<std::string, std::string>> pairs;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: " + t);
        pairs.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    for (const auto& [k, v] : pairs)
        if (k == "preset")
            set_key(cfg, k, v);
    for (const auto& [k, v] : pairs)
        if (k != "preset")
            set_key(cfg, k, v);
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot read config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "problem=" << cfg.problem << '\n';
    out << "method=" << cfg.method << '\n';
    out << "basis=" << cfg.basis << '\n';
    out << "monomial_order=" << cfg.monomial_order << '\n';
    out << "feature_count=" << cfg.feature_count << '\n';
    out << "feature_scale=" << csv::format_double(cfg.feature_scale) << '\n';
    out << "loss_q=" << csv::format_double(cfg.loss_q) << '\n';
    out << "loss_r=" << csv::format_double(cfg.loss_r) << '\n';
    out << "step=" << csv::format_double(cfg.step) << '\n';
    out << "horizon=" << csv::format_double(cfg.horizon) << '\n';
    out << "loss_floor=" << csv::format_double(cfg.loss_floor) << '\n';
    out << "scheme=" << cfg.scheme << '\n';
    out << "rounds=" << cfg.rounds << '\n';
    out << "sweeps_per_round=" << cfg.sweeps_per_round << '\n';
    out << "ghjb_samples=" << cfg.ghjb_samples << '\n';
    out << "training_box=" << csv::format_double(cfg.training_box) << '\n';
    out << "sample_warp=" << cfg.sample_warp << '\n';
    out << "ghjb_sample_warp=" << cfg.ghjb_sample_warp << '\n';
    out << "ridge=" << csv::format_double(cfg.ridge) << '\n';
    out << "seed=" << cfg.seed << '\n';
    out << "out=" << cfg.out << '\n';
    return out.str();
}

Problem problem_from_config(const RunConfig& cfg) {
    Problem p;
    if (cfg.problem == "oscillator_5_1")
        p = make_oscillator_problem();
    else if (cfg.problem == "integrator_5_2")
        p = make_integrator_problem(cfg.loss_q, cfg.loss_r);
    else
        throw std::invalid_argument("unknown problem: " + cfg.problem);

    p.integration.step = cfg.step;
    p.integration.horizon = cfg.horizon;
    p.integration.loss_floor = cfg.loss_floor;
    if (cfg.scheme == "three_stage")
        p.integration.scheme = IntegrationScheme::three_stage;
    else if (cfg.scheme == "rk4")
        p.integration.scheme = IntegrationScheme::rk4;
    else
        throw std::invalid_argument("unknown scheme: " + cfg.scheme);
    return p;
}

TrainingConfig training_from_config(const RunConfig& cfg) {
    TrainingConfig t;
    t.method = method_from_name(cfg.method);
    t.rounds = cfg.rounds;
    t.sweeps_per_round = cfg.sweeps_per_round;
    t.training_box_halfwidth = cfg.training_box;
    auto parse_warp = [](const std::string& w) {
        if (w == "sine")
            return SampleWarp::sine;
        if (w == "uniform")
            return SampleWarp::uniform;
        throw std::invalid_argument("unknown sample warp: " + w);
    };
    t.sample_warp = parse_warp(cfg.sample_warp);
    t.ghjb_sample_warp = parse_warp(cfg.ghjb_sample_warp);
    t.seed = cfg.seed;
    t.ridge = cfg.ridge;
    t.ghjb_samples = cfg.ghjb_samples;
    return t;
}

int run_from_config(const RunConfig& cfg) {
    const Problem problem = problem_from_config(cfg);
    const TrainingConfig train = training_from_config(cfg);
    const std::filesystem::path out_dir(cfg.out);
    std::filesystem::create_directories(out_dir);

    FeatureBasis basis;
    if (cfg.basis == "monomial") {
        basis = monomial_basis(cfg.monomial_order);
    } else if (cfg.basis == "logcosh") {
        SeededRng rng(derive_seed(cfg.seed, {0xfea7u}));
        const Matrix w_theta =
            sample_feature_matrix(cfg.feature_count, problem.plant.nx, cfg.feature_scale, rng);
        csv::write_matrix(out_dir / "features.csv", w_theta);
        basis = logcosh_basis(w_theta);
    } else {
        throw std::invalid_argument("unknown basis: " + cfg.basis);
    }

    const auto reports = run_policy_iteration(problem, basis, problem.initial, train);

    // rounds.csv + one weight file per learned controller
    {
        std::ofstream out(out_dir / "rounds.csv", std::ios::binary);
        out << "round,test_cost,diverged,weight_file,samples_used\n";
        for (const RoundReport& r : reports) {
            std::string wfile;
            if (r.weights.size() > 0) {
                wfile = "weights_r" + std::to_string(r.round) + ".csv";
                csv::write_weights(out_dir / wfile, r.weights);
            }
            out << r.round << ',' << csv::format_double(r.test_cost) << ',' << (r.diverged ? 1 : 0)
                << ',' << wfile << ',' << r.samples_used << '\n';
        }
    }

    // initial / best / final test trajectories
    {
        int best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < reports.size(); ++i)
            if (!reports[i].diverged && reports[i].test_cost < best_cost) {
                best_cost = reports[i].test_cost;
                best = static_cast<int>(i);
            }
        auto controller_for = [&](const RoundReport& r) {
            if (r.round == 1)
                return problem.initial;
            return improved_controller(r.weights, basis, problem.plant, problem.loss);
        };
        auto replay = [&](const Controller& c, const std::string& name) {
            const ClosedLoopSystem sys{problem.plant, problem.loss, c};
            try {
                const Trajectory traj =
                    integrate_closed_loop(sys, problem.test_states.front(), problem.integration);
                csv::write_trajectory(out_dir / name, traj);
            } catch (const DivergedError&) {
                std::ofstream mark(out_dir / name, std::ios::binary);
                mark << "# rollout diverged\n";
            }
        };
        replay(problem.initial, "trajectory_initial.csv");
        replay(controller_for(reports[static_cast<std::size_t>(best)]), "trajectory_best.csv");
        replay(controller_for(reports.back()), "trajectory_final.csv");
    }

    // config echo (re-parsable) + manifest
    {
        std::ofstream echo(out_dir / "config_echo.cfg", std::ios::binary);
        echo << serialize_config(cfg);
        std::ofstream manifest(out_dir / "manifest.txt", std::ios::binary);
        manifest << "tool_version=" << GRADCTL_VERSION << '\n';
        manifest << "config_echo=config_echo.cfg\n";
        manifest << "seed=" << cfg.seed << '\n';
        manifest << "rounds_written=" << reports.size() << '\n';
    }
    return 0;
}

} // namespace gradctl
