#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crowdcast/context.hpp"
#include "crowdcast/dataset.hpp"
#include "crowdcast/io.hpp"
#include "crowdcast/metrics.hpp"
#include "crowdcast/optimizer.hpp"
#include "crowdcast/pipeline.hpp"
#include "crowdcast/synthetic.hpp"

namespace fs = std::filesystem;
using namespace crowdcast;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct DataArgs {
    std::string path;
    std::string format = "tsv";
    std::string obstacles;
    int frame_stride = 1;
};

void add_data_flags(CLI::App& cmd, DataArgs& d, bool required = true) {
    auto* opt = cmd.add_option("--data", d.path, "trajectory file");
    if (required) opt->required();
    cmd.add_option("--format", d.format, "tsv or obsmat")
        ->check(CLI::IsMember({"tsv", "obsmat"}))
        ->capture_default_str();
    cmd.add_option("--frame-stride", d.frame_stride, "raw frames per resampled frame")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_config_flags(CLI::App& cmd, PredictorConfig& c) {
    cmd.add_option("--obs-len", c.obs_len)->capture_default_str();
    cmd.add_option("--pred-len", c.pred_len)->capture_default_str();
    cmd.add_option("--dt", c.dt)->capture_default_str();
    cmd.add_option("--min-obs", c.min_obs)->capture_default_str();
    cmd.add_option("--frechet-threshold", c.frechet_threshold)->capture_default_str();
    cmd.add_option("--n-salps", c.n_salps)->capture_default_str();
    cmd.add_option("--n-iters", c.n_iters)->capture_default_str();
    cmd.add_option("--n-v-salps", c.n_v_salps)->capture_default_str();
    cmd.add_option("--n-v-iters", c.n_v_iters)->capture_default_str();
    cmd.add_option("--n-headings", c.n_headings)->capture_default_str();
    cmd.add_option("--heading-step", c.heading_step, "radians")->capture_default_str();
    cmd.add_option("--eta", c.eta)->capture_default_str();
    cmd.add_option("--v-bound", c.v_bound)->capture_default_str();
    cmd.add_option("--speed-weights", c.speed_weights, "one weight per observed step");
    cmd.add_option("--stride", c.stride, "frames between issued predictions")->capture_default_str();
    cmd.add_option("--threads", c.threads)->capture_default_str();
}

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t value) {
    if (flag->count() > 0) return value;
    if (const char* env = std::getenv("CROWDCAST_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidConfig, std::string("bad CROWDCAST_SEED: ") + env);
        }
    }
    return 0;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TrajectoryTable load_table(const DataArgs& d, double dt) {
    if (!fs::exists(d.path)) throw Error(ErrorCode::Io, "no such file: " + d.path);
    return d.format == "obsmat" ? load_obsmat(d.path, d.frame_stride, dt)
                                : load_tsv(d.path, d.frame_stride, dt);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    return out;
}

// predict

struct PredictArgs {
    DataArgs data;
    PredictorConfig cfg;
    std::string out_dir;
    std::uint64_t seed = 0;
    CLI::Option* seed_flag = nullptr;
    int max_frames = 0;
    bool dump_headings = false;
    bool dump_energy_grid = false;
    double grid_step = 0.1;
};

void write_energy_grid(std::ostream& out, const IssueBatch& batch,
                       const std::vector<PredictionRecord>& records, const PredictorConfig& cfg) {
    const SceneFrame* now = batch.history.at(batch.issue_frame);
    std::vector<std::pair<int, AgentKinematics>> others;
    if (now) others = now->agents;
    std::vector<ObservationWindow> active;
    for (const auto& r : records) active.push_back(r.observed);
    const GroupTable groups = group_information(active, cfg);
    const LegacyParamSet legacy;
    const int n = static_cast<int>(std::floor(cfg.v_bound / 0.1 + 1e-9));
    const double step = cfg.v_bound / std::max(n, 1);
    for (const auto& r : records) {
        const auto& w = r.observed;
        const EnergyContext ctx = make_context(
            r.agent_id, w.frames.back().pos, finite_velocity(w, w.size() - 1),
            desired_speed(w, weights_for(cfg, w.size() - 1)), Heading{r.theta_star}, others,
            batch.history.obstacles, groups.group_of(r.agent_id), r.params);
        for (int i = -n; i <= n; ++i)
            for (int j = -n; j <= n; ++j) {
                const Velocity v{i * step, j * step};
                const auto e = total_energy(v, ctx);
                const auto o = total_energy(v, ctx, legacy);
                out << batch.issue_frame << ',' << r.agent_id << ',' << v.x << ',' << v.y << ','
                    << e.damp << ',' << e.speed << ',' << e.direction << ',' << e.attraction << ','
                    << e.group << ',' << e.collision << ',' << e.total << ',' << o.collision << ','
                    << o.total << '\n';
            }
    }
}

int run_predict(PredictArgs& a) {
    const auto t_start = Clock::now();
    a.cfg.rng_seed = resolve_seed(a.seed_flag, a.seed);
    a.cfg.validate();

    auto t0 = Clock::now();
    TrajectoryTable table = load_table(a.data, a.cfg.dt);
    if (a.max_frames > 0) table = head_frames(table, a.max_frames);
    ObstacleMap obstacles;
    if (!a.data.obstacles.empty()) obstacles = load_obstacles(a.data.obstacles);
    const double t_load = seconds_since(t0);

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    auto records_out = open_out(dir / "records.jsonl");
    std::ofstream headings_out, grid_out;
    if (a.dump_headings) {
        headings_out = open_out(dir / "headings.csv");
        headings_out << "t,agent_id,theta_deg,frechet,distance_sum,cost,selected\n";
        headings_out << std::setprecision(17);
    }
    if (a.dump_energy_grid) {
        grid_out = open_out(dir / "energy_grid.csv");
        grid_out << "t,agent_id,vx,vy,damp,speed,direction,attraction,group,collision,total,"
                    "collision_original,total_original\n";
        grid_out << std::setprecision(17);
    }

    PredictOptions options;
    options.keep_headings = a.dump_headings;
    double t_predict = 0.0;
    std::size_t n_records = 0;
    WindowStream stream(table, a.cfg, obstacles);
    while (auto batch = stream.next()) {
        t0 = Clock::now();
        const auto records = predict_scene(batch->windows, batch->history, a.cfg, options);
        t_predict += seconds_since(t0);
        std::vector<RecordLine> lines;
        for (const auto& r : records) lines.push_back(to_line(r));
        write_records(records_out, lines);
        n_records += records.size();
        if (a.dump_headings)
            for (const auto& r : records)
                for (const auto& h : r.headings)
                    headings_out << r.issue_frame << ',' << r.agent_id << ','
                                 << h.theta * 180.0 / kPi << ',' << h.frechet << ','
                                 << h.distance_sum << ',' << h.cost << ','
                                 << (h.theta == r.theta_star ? 1 : 0) << '\n';
        if (a.dump_energy_grid) write_energy_grid(grid_out, *batch, records, a.cfg);
    }
    records_out.close();
    if (!records_out) throw Error(ErrorCode::Io, "failed writing records");

    RunManifest m;
    m.config = a.cfg;
    m.data_path = a.data.path;
    m.data_hash = fnv1a_hex(read_file(a.data.path));
    m.format = a.data.format;
    m.frame_stride = a.data.frame_stride;
    m.seed = a.cfg.rng_seed;
    m.timings = {{"load", t_load}, {"predict", t_predict}, {"total", seconds_since(t_start)}};
    auto manifest_out = open_out(dir / "manifest.json");
    manifest_out << to_json(m).dump(2) << '\n';
    std::cerr << "wrote " << n_records << " records to " << (dir / "records.jsonl").string() << '\n';
    return 0;
}

// evaluate

struct EvaluateArgs {
    DataArgs data;
    PredictorConfig cfg;
    std::string records;
    std::string baseline;
    std::string out;
    std::string per_record_csv;
};

int run_evaluate(const EvaluateArgs& a) {
    const TrajectoryTable table = load_table(a.data, a.cfg.dt);
    std::ifstream in(a.records);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + a.records);
    const auto lines = read_records(in);

    std::vector<ScoredPrediction> scored;
    for (const auto& l : lines) {
        if (static_cast<int>(l.pred.size()) != a.cfg.pred_len)
            throw Error(ErrorCode::HorizonMismatch,
                        "record (t=" + std::to_string(l.t) + ", agent " +
                            std::to_string(l.agent_id) + ") has " +
                            std::to_string(l.pred.size()) + " predicted points, expected " +
                            std::to_string(a.cfg.pred_len));
        ScoredPrediction s;
        s.agent_id = l.agent_id;
        s.issue_frame = l.t;
        s.n_observed = static_cast<int>(l.obs.size());
        s.predicted = l.pred;
        if (a.baseline == "linear") {
            ObservationWindow w;
            w.agent_id = l.agent_id;
            w.dt = a.cfg.dt;
            const int first = l.t - static_cast<int>(l.obs.size()) + 1;
            for (std::size_t k = 0; k < l.obs.size(); ++k)
                w.frames.push_back({first + static_cast<int>(k), l.obs[k]});
            s.predicted = linear_baseline(w, a.cfg.pred_len);
        }
        s.truth = ground_truth(table, l.agent_id, l.t, a.cfg.pred_len);
        scored.push_back(std::move(s));
    }

    const EvalReport report = evaluate(scored, a.cfg.pred_len, a.cfg.min_obs);
    json j = to_json(report);
    j["model"] = a.baseline.empty() ? "proposed" : a.baseline;
    j["pred_len"] = a.cfg.pred_len;
    j["min_obs"] = a.cfg.min_obs;
    std::cout << std::fixed << std::setprecision(4) << "model " << j["model"].get<std::string>()
              << "  ADE2 " << report.ade2 << "  FDE2 " << report.fde2 << "  ADE " << report.ade
              << "  FDE " << report.fde << "  agents " << report.n_eval << "  full-horizon records "
              << report.n_full << '\n';
    if (!a.out.empty()) {
        if (auto parent = fs::path(a.out).parent_path(); !parent.empty())
            fs::create_directories(parent);
        auto out = open_out(a.out);
        out << j.dump(2) << '\n';
    }
    if (!a.per_record_csv.empty()) {
        auto out = open_out(a.per_record_csv);
        out << "t,agent_id,n_actual,n_l,ade,fde\n" << std::setprecision(17);
        for (const auto& r : report.per_record)
            out << r.issue_frame << ',' << r.agent_id << ',' << r.n_observed << ',' << r.compared
                << ',' << r.ade << ',' << r.fde << '\n';
    }
    return 0;
}

// groups

int run_groups(const DataArgs& d, PredictorConfig cfg, std::optional<int> frame) {
    const TrajectoryTable table = load_table(d, cfg.dt);
    json out = json::array();
    if (table.empty()) {
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    int t = 0;
    if (frame) {
        t = *frame;
    } else {
        const auto frames = issue_frames(table, cfg.stride);
        t = frames.empty() ? table.last_frame() : frames.front();
    }
    std::vector<ObservationWindow> windows;
    for (int id : table.agents_at(t)) {
        auto w = window_at(table, id, t, cfg.obs_len);
        if (w.size() >= 2) windows.push_back(std::move(w));
    }
    for (const auto& g : group_information(windows, cfg).groups)
        out.push_back({{"group_id", g.group_id}, {"members", g.members}, {"avg_speed", g.avg_speed}});
    std::cout << out.dump(2) << '\n';
    return 0;
}

// bench

struct BenchArgs {
    PredictorConfig cfg;
    int max_agents = 20;
    int repeats = 3;
    std::uint64_t seed = 0;
    CLI::Option* seed_flag = nullptr;
    std::string objective;
    std::string out;
};

double sphere(const Point<8>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < 8; ++i) s += (x[i] - 0.5 * static_cast<double>(i % 3)) *
                                             (x[i] - 0.5 * static_cast<double>(i % 3));
    return s;
}

double rosenbrock(const Point<8>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < 8; ++i)
        s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
    return s;
}

void bench_objective(std::ostream& out, const BenchArgs& a) {
    const auto f = a.objective == "sphere" ? sphere : rosenbrock;
    Bounds<8> b;
    b.lo.fill(-5.0);
    b.hi.fill(5.0);
    out << "method,repeat,iteration,best_cost\n" << std::setprecision(17);
    for (int r = 0; r < a.repeats; ++r) {
        for (const bool hybrid : {false, true}) {
            Rng rng(derive_seed(a.cfg.rng_seed, {r}));
            const auto res = minimize_swarm<8>(f, b, {a.cfg.n_salps, a.cfg.n_iters}, rng,
                                               std::nullopt,
                                               hybrid ? std::optional<GdSettings>(GdSettings{})
                                                      : std::nullopt);
            for (std::size_t k = 0; k < res.history.size(); ++k)
                out << (hybrid ? "ssa+gd" : "ssa") << ',' << r << ',' << k + 1 << ','
                    << res.history[k] << '\n';
        }
    }
}

void bench_runtime(std::ostream& out, const BenchArgs& a) {
    out << "n_agents,seconds,min_s,max_s,stddev_s\n" << std::setprecision(6);
    const int frames = a.cfg.obs_len + a.cfg.pred_len;
    const int t = a.cfg.obs_len - 1;
    for (int n = 1; n <= a.max_agents; ++n) {
        const auto tracks = synthetic::crowd(n, derive_seed(a.cfg.rng_seed, {n}), frames, a.cfg.dt);
        const auto table = synthetic::to_table(tracks, a.cfg.dt);
        const auto batch = make_issue(table, t, a.cfg, {});
        std::vector<double> times;
        for (int r = 0; r < a.repeats; ++r) {
            const auto t0 = Clock::now();
            const auto recs = predict_scene(batch.windows, batch.history, a.cfg);
            times.push_back(seconds_since(t0));
            if (static_cast<int>(recs.size()) != n)
                throw Error(ErrorCode::InvalidConfig, "bench scene lost agents");
        }
        double mean = 0.0, lo = times.front(), hi = times.front();
        for (double s : times) {
            mean += s;
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        mean /= static_cast<double>(times.size());
        double var = 0.0;
        for (double s : times) var += (s - mean) * (s - mean);
        var /= static_cast<double>(times.size());
        out << n << ',' << mean << ',' << lo << ',' << hi << ',' << std::sqrt(var) << '\n';
        out.flush();
    }
}

int run_bench(BenchArgs& a) {
    a.cfg.rng_seed = resolve_seed(a.seed_flag, a.seed);
    a.cfg.validate();
    if (a.repeats < 1) throw Error(ErrorCode::InvalidConfig, "repeats must be >= 1");
    std::ofstream file;
    if (!a.out.empty()) file = open_out(a.out);
    std::ostream& out = a.out.empty() ? std::cout : file;
    if (a.objective.empty())
        bench_runtime(out, a);
    else
        bench_objective(out, a);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowdcast: energy-based crowd trajectory prediction"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    PredictArgs pa;
    auto* predict = app.add_subcommand("predict", "predict trajectories at every issue frame");
    add_data_flags(*predict, pa.data);
    predict->add_option("--obstacles", pa.data.obstacles, "obstacle file, one \"x y\" per line");
    add_config_flags(*predict, pa.cfg);
    predict->add_option("--out", pa.out_dir, "output directory")->required();
    pa.seed_flag = predict->add_option("--seed", pa.seed, "random seed (default: $CROWDCAST_SEED or 0)");
    predict->add_option("--max-frames", pa.max_frames, "only use the first n resampled frames");
    predict->add_flag("--dump-headings", pa.dump_headings, "write headings.csv");
    predict->add_flag("--dump-energy-grid", pa.dump_energy_grid, "write energy_grid.csv");

    EvaluateArgs ea;
    auto* eval = app.add_subcommand("evaluate", "score records against ground truth");
    add_data_flags(*eval, ea.data);
    eval->add_option("--records", ea.records, "records.jsonl from predict")->required();
    eval->add_option("--pred-len", ea.cfg.pred_len)->capture_default_str();
    eval->add_option("--min-obs", ea.cfg.min_obs)->capture_default_str();
    eval->add_option("--dt", ea.cfg.dt)->capture_default_str();
    eval->add_option("--baseline", ea.baseline, "score a baseline on the same windows")
        ->check(CLI::IsMember({"linear"}));
    eval->add_option("--out", ea.out, "report JSON path");
    eval->add_option("--per-record-csv", ea.per_record_csv, "per-record error CSV path");

    DataArgs ga;
    PredictorConfig gcfg;
    std::optional<int> gframe;
    auto* groups = app.add_subcommand("groups", "print the groups found at one frame");
    add_data_flags(*groups, ga);
    groups->add_option("--frame", gframe, "resampled frame (default: first issue frame)");
    groups->add_option("--obs-len", gcfg.obs_len)->capture_default_str();
    groups->add_option("--frechet-threshold", gcfg.frechet_threshold)->capture_default_str();
    groups->add_option("--stride", gcfg.stride)->capture_default_str();
    groups->add_option("--dt", gcfg.dt)->capture_default_str();

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "runtime or optimizer convergence CSV");
    add_config_flags(*bench, ba.cfg);
    bench->add_option("--max-agents", ba.max_agents)->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--repeats", ba.repeats)->capture_default_str();
    ba.seed_flag = bench->add_option("--seed", ba.seed);
    bench->add_option("--objective", ba.objective, "sphere or rosenbrock")
        ->check(CLI::IsMember({"sphere", "rosenbrock"}));
    bench->add_option("--out", ba.out, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*predict) return run_predict(pa);
        if (*eval) return run_evaluate(ea);
        if (*groups) return run_groups(ga, gcfg, gframe);
        if (*bench) return run_bench(ba);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return e.code() == ErrorCode::InvalidConfig ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
