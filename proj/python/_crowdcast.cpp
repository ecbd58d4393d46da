#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <vector>

#include "crowdcast/dataset.hpp"
#include "crowdcast/energy.hpp"
#include "crowdcast/error.hpp"
#include "crowdcast/grouping.hpp"
#include "crowdcast/io.hpp"
#include "crowdcast/metrics.hpp"
#include "crowdcast/pipeline.hpp"

namespace py = pybind11;
using namespace crowdcast;

namespace {

using XY = std::array<double, 2>;

std::vector<Position> to_positions(const std::vector<XY>& pts) {
    std::vector<Position> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back({p[0], p[1]});
    return out;
}

std::vector<XY> from_positions(const std::vector<Position>& pts) {
    std::vector<XY> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back({p.x, p.y});
    return out;
}

ObservationWindow to_window(const std::vector<XY>& pts, double dt) {
    ObservationWindow w;
    w.dt = dt;
    for (std::size_t k = 0; k < pts.size(); ++k) w.frames.push_back({static_cast<int>(k), {pts[k][0], pts[k][1]}});
    return w;
}

TrajectoryTable to_table(const std::vector<std::tuple<int, int, double, double>>& rows, double dt) {
    TrajectoryTable table;
    table.dt = dt;
    for (const auto& [f, id, x, y] : rows) table.rows.push_back({f, id, x, y});
    normalise(table);
    return table;
}

py::list predict_rows(const std::vector<std::tuple<int, int, double, double>>& rows, const PredictorConfig& cfg) {
    cfg.validate();
    const auto table = to_table(rows, cfg.dt);
    py::list out;
    std::vector<PredictionRecord> records;
    {
        py::gil_scoped_release release;
        WindowStream stream(table, cfg, {});
        while (auto batch = stream.next())
            for (auto& r : predict_scene(batch->windows, batch->history, cfg)) records.push_back(std::move(r));
    }
    for (const auto& r : records) {
        py::dict d;
        d["t"] = r.issue_frame;
        d["agent_id"] = r.agent_id;
        d["obs"] = from_positions(r.observed.positions());
        d["pred"] = from_positions(r.predicted);
        d["theta"] = r.theta_star;
        d["params"] = r.params.to_array();
        if (r.group_id) d["group"] = *r.group_id;
        else d["group"] = py::none();
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_crowdcast, m) {
    m.doc() = "Crowd trajectory prediction by energy minimisation";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "CrowdcastError", PyExc_ValueError);

    py::class_<PredictorConfig>(m, "PredictorConfig")
        .def(py::init<>())
        .def_readwrite("obs_len", &PredictorConfig::obs_len)
        .def_readwrite("pred_len", &PredictorConfig::pred_len)
        .def_readwrite("dt", &PredictorConfig::dt)
        .def_readwrite("min_obs", &PredictorConfig::min_obs)
        .def_readwrite("frechet_threshold", &PredictorConfig::frechet_threshold)
        .def_readwrite("n_salps", &PredictorConfig::n_salps)
        .def_readwrite("n_iters", &PredictorConfig::n_iters)
        .def_readwrite("n_v_salps", &PredictorConfig::n_v_salps)
        .def_readwrite("n_v_iters", &PredictorConfig::n_v_iters)
        .def_readwrite("n_headings", &PredictorConfig::n_headings)
        .def_readwrite("heading_step", &PredictorConfig::heading_step)
        .def_readwrite("eta", &PredictorConfig::eta)
        .def_readwrite("v_bound", &PredictorConfig::v_bound)
        .def_readwrite("speed_weights", &PredictorConfig::speed_weights)
        .def_readwrite("stride", &PredictorConfig::stride)
        .def_readwrite("rng_seed", &PredictorConfig::rng_seed)
        .def_readwrite("threads", &PredictorConfig::threads)
        .def("validate", &PredictorConfig::validate);

    m.def(
        "discrete_frechet",
        [](const std::vector<XY>& a, const std::vector<XY>& b) {
            const auto pa = to_positions(a), pb = to_positions(b);
            return discrete_frechet(pa, pb);
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "divide_groups",
        [](const std::vector<std::vector<int>>& adjacency) {
            BinaryMatrix b(adjacency.size(), 0);
            for (std::size_t i = 0; i < adjacency.size(); ++i) {
                if (adjacency[i].size() != adjacency.size())
                    throw Error(ErrorCode::InvalidConfig, "adjacency matrix must be square");
                for (std::size_t j = 0; j < adjacency.size(); ++j) b(i, j) = adjacency[i][j] ? 1 : 0;
            }
            return divide_groups(b);
        },
        py::arg("adjacency"), "Connected components of size >= 2, as 0-based index lists in discovery order.");

    m.def(
        "interaction_gain",
        [](double dx, double dy, double w, double d, double alpha) {
            ParamSet p;
            p.w = w;
            p.d = d;
            p.alpha = alpha;
            return interaction_gain({dx, dy}, p.clamped());
        },
        py::arg("dx"), py::arg("dy"), py::arg("w") = 1.0, py::arg("d") = 1.0, py::arg("alpha") = 0.0);

    m.def(
        "linear_baseline",
        [](const std::vector<XY>& observed, int pred_len, double dt) {
            return from_positions(linear_baseline(to_window(observed, dt), pred_len));
        },
        py::arg("observed"), py::arg("pred_len"), py::arg("dt") = 0.4);

    m.def("predict", &predict_rows, py::arg("rows"), py::arg("config") = PredictorConfig{},
          "Runs the predictor over (frame, agent_id, x, y) rows at every issue frame.");

    m.def(
        "ade2_fde2",
        [](const std::vector<std::tuple<int, int, std::vector<XY>, std::vector<XY>>>& records, int min_obs) {
            std::vector<ScoredPrediction> scored;
            for (const auto& [agent, n_obs, pred, truth] : records)
                scored.push_back({agent, 0, n_obs, to_positions(pred), to_positions(truth)});
            return ade2_fde2(scored, min_obs);
        },
        py::arg("records"), py::arg("min_obs") = 7,
        "records: (agent_id, n_observed, predicted, truth) tuples.");
}
