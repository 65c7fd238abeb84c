#include "wgbiot/study.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "wgbiot/error.hpp"
#include "wgbiot/scenarios.hpp"
#include "wgbiot/stepper.hpp"

namespace wgbiot {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d)) throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

void ensure_dir(const std::string& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

}  // namespace

int RunConfig::steps() const {
    if (final_time) return static_cast<int>(std::lround(*final_time / dt));
    return n_steps.value_or(5);
}

void RunConfig::validate() const {
    if (scenario != "manufactured" && scenario != "heterogeneous")
        throw ConfigError("unknown scenario '" + scenario + "' (expected manufactured or heterogeneous)");
    if (k < 1 || k > 3) throw ConfigError("k must be 1, 2 or 3");
    if (levels.empty()) throw ConfigError("at least one level is required");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 1 || levels[i] > 8) throw ConfigError("levels must lie in [1, 8]");
        if (i > 0 && levels[i] <= levels[i - 1]) throw ConfigError("levels must be strictly ascending");
    }
    if (!(nu > 0.0 && nu < 0.5)) throw ConfigError("nu must lie in (0, 1/2)");
    if (!(k0 > 0.0)) throw ConfigError("k0 must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (final_time && !(*final_time > 0.0)) throw ConfigError("final_time must be positive");
    if (n_steps && *n_steps < 1) throw ConfigError("steps must be >= 1");
    if (steps() < 1) throw ConfigError("final_time / dt rounds to zero steps");
    if (samples < 2) throw ConfigError("samples must be >= 2");
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    try {
        if (key == "scenario") c.scenario = value;
        else if (key == "nu") c.nu = to_double(key, value);
        else if (key == "k0") c.k0 = to_double(key, value);
        else if (key == "k") c.k = to_int(key, value);
        else if (key == "r_policy") c.r_policy = r_policy_from_string(value);
        else if (key == "cut_style") c.cut_style = cut_style_from_string(value);
        else if (key == "dt") c.dt = to_double(key, value);
        else if (key == "steps") c.n_steps = to_int(key, value);
        else if (key == "final_time") c.final_time = to_double(key, value);
        else if (key == "out") c.out_dir = value;
        else if (key == "seed") c.seed = static_cast<unsigned>(to_int(key, value));
        else if (key == "samples") c.samples = to_int(key, value);
        else if (key == "levels") {
            std::string s = value;
            for (char& ch : s)
                if (ch == ',') ch = ' ';
            std::istringstream is(s);
            std::vector<int> levels;
            std::string tok;
            while (is >> tok) levels.push_back(to_int(key, tok));
            c.levels = levels;
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const ArgumentError& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

RunConfig read_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

ConvergenceResult run_convergence(const RunConfig& config, std::ostream* log) {
    config.validate();
    if (config.scenario != "manufactured") throw ConfigError("convergence studies need the manufactured scenario");
    const Scenario scenario = manufactured_biot(config.nu);
    ensure_dir(config.out_dir);
    ConvergenceResult result;
    for (int level : config.levels) {
        try {
            const Mesh mesh = build_nonconvex_grid(level, config.cut_style);
            auto disc = std::make_shared<const Discretization>(scenario, mesh, config.k, config.r_policy);
            TimeStepper stepper(disc);
            auto state = stepper.run(stepper.initialize(), config.dt, config.steps());
            result.records.push_back(errors_vs_exact(state, *disc));
            compute_orders(result.records);
            if (log)
                *log << "level " << level << ": " << disc->map().n_u + disc->map().n_p << " dofs, residual "
                     << stepper.last_report().residual_norm << std::endl;
        } catch (const Error& e) {
            throw SingularSystemError("level " + std::to_string(level) + ": " + e.what());
        }
        if (!config.out_dir.empty()) {
            std::ofstream csv(join(config.out_dir, "convergence.csv"));
            write_convergence_csv(csv, result.records);
        }
    }
    std::ostringstream table;
    table << "scenario manufactured, nu = " << config.nu << ", k = " << config.k
          << ", r policy " << to_string(config.r_policy) << ", " << to_string(config.cut_style) << " grids, "
          << config.steps() << " steps of dt = " << config.dt << "\n";
    write_convergence_table(table, result.records);
    result.table = table.str();
    if (!config.out_dir.empty()) {
        std::ofstream txt(join(config.out_dir, "convergence.txt"));
        txt << result.table;
    }
    return result;
}

std::vector<FieldSample> sample_fields(const Mesh& mesh, const GlobalDofMap& map, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& p, int samples) {
    if (samples < 2) throw ArgumentError("field sampling needs at least 2 points per direction");
    std::vector<FieldSample> out;
    out.reserve(static_cast<std::size_t>(samples * samples));
    const int nk = map.dim_interior();
    for (int j = 0; j < samples; ++j) {
        for (int i = 0; i < samples; ++i) {
            const Point2 x(static_cast<double>(i) / (samples - 1), static_cast<double>(j) / (samples - 1));
            const int t = locate_point(mesh, x);
            if (t < 0) {
                std::ostringstream os;
                os << "sample point (" << x.x() << ", " << x.y() << ") is outside the mesh";
                throw GeometryError(os.str());
            }
            const Eigen::VectorXd phi = ElementBasis(mesh, t, map.k).eval(x);
            const int off = map.interior_offset(t);
            out.push_back({x.x(), x.y(), phi.dot(u.segment(off, nk)), phi.dot(u.segment(map.n_p + off, nk)),
                           phi.dot(p.segment(off, nk))});
        }
    }
    return out;
}

void write_field_dump(std::ostream& out, const std::vector<FieldSample>& samples) {
    const auto old = out.precision(17);
    for (const auto& s : samples) out << s.x << ' ' << s.y << ' ' << s.u1 << ' ' << s.u2 << ' ' << s.p << '\n';
    out.precision(old);
}

SteadyResult run_steady(const RunConfig& config, std::ostream* log) {
    config.validate();
    if (config.scenario != "heterogeneous") throw ConfigError("steady runs need the heterogeneous scenario");
    const Scenario scenario = heterogeneous_steady(config.k0, config.nu);
    ensure_dir(config.out_dir);
    SteadyResult result;
    result.level = config.levels.back();
    try {
        const Mesh mesh = build_nonconvex_grid(result.level, config.cut_style);
        auto disc = std::make_shared<const Discretization>(scenario, mesh, config.k, config.r_policy);
        TimeStepper stepper(disc);
        double first_rate = -1.0;
        double last_rate = 0.0;
        Eigen::VectorXd prev_u;
        auto state = stepper.initialize();
        prev_u = state.u;
        const auto rate_observer = [&](const TransientState& s) {
            const double rate = l2_interior_norm(Eigen::VectorXd(s.u - prev_u), disc->mesh(), disc->map()) / config.dt;
            if (first_rate < 0.0) first_rate = rate;
            last_rate = rate;
            prev_u = s.u;
        };
        state = stepper.run(state, config.dt, config.steps(), {rate_observer});
        result.final_time = state.t;
        result.steadiness = first_rate > 0.0 ? last_rate / first_rate : 0.0;
        result.samples = sample_fields(disc->mesh(), disc->map(), state.u, state.p, config.samples);
        if (log) *log << "steady run: t = " << state.t << ", steadiness " << result.steadiness << std::endl;
    } catch (const GeometryError&) {
        throw;
    } catch (const Error& e) {
        throw SingularSystemError(std::string("steady run: ") + e.what());
    }
    if (!config.out_dir.empty()) {
        std::ofstream dump(join(config.out_dir, "steady_fields.txt"));
        write_field_dump(dump, result.samples);
        std::ofstream summary(join(config.out_dir, "steady_summary.txt"));
        summary << std::setprecision(17) << "level " << result.level << "\nfinal_time " << result.final_time
                << "\nsteadiness " << result.steadiness << "\n";
    }
    return result;
}

}  // namespace wgbiot
