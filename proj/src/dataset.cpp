#include "crowdcast/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace crowdcast {

namespace {

bool parse_number(const std::string& token, double& out) {
    if (token.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(token.c_str(), &end);
    return errno == 0 && end == token.c_str() + token.size() && std::isfinite(out);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
            if (!cur.empty()) tokens.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

int resample_frame(double raw, int stride, int line_no) {
    const double scaled = raw / stride;
    if (std::abs(scaled) > 1e9)
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": frame out of range");
    return static_cast<int>(std::llround(scaled));
}

// Reads numeric rows of exactly `columns` fields and maps them to table rows
// through `pick` (frame, id, x, y column indices).
TrajectoryTable parse_columns(std::istream& in, std::size_t columns, std::array<std::size_t, 4> pick,
                              int frame_stride, double dt) {
    if (frame_stride < 1) throw Error(ErrorCode::InvalidConfig, "frame stride must be >= 1");
    TrajectoryTable table;
    table.frame_stride = frame_stride;
    table.dt = dt;
    std::string line;
    int line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto tokens = split(line);
        if (tokens.empty()) continue;

        std::vector<double> values(tokens.size());
        bool numeric = true;
        for (std::size_t i = 0; i < tokens.size(); ++i) numeric &= parse_number(tokens[i], values[i]);
        if (!numeric && !seen_data) {
            seen_data = true;  // header
            continue;
        }
        seen_data = true;
        if (!numeric)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": non-numeric field");
        if (tokens.size() != columns)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(columns) + " columns, got " +
                                                   std::to_string(tokens.size()));
        const double id = values[pick[1]];
        if (id != std::floor(id))
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": non-integer agent id");
        table.rows.push_back({resample_frame(values[pick[0]], frame_stride, line_no),
                              static_cast<int>(id), values[pick[2]], values[pick[3]]});
    }
    normalise(table);
    return table;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return in;
}

auto row_key(const TrajectoryRow& r) { return std::pair{r.agent_id, r.frame}; }

}  // namespace

int TrajectoryTable::first_frame() const {
    int f = rows.empty() ? 0 : rows.front().frame;
    for (const auto& r : rows) f = std::min(f, r.frame);
    return f;
}

int TrajectoryTable::last_frame() const {
    int f = rows.empty() ? 0 : rows.front().frame;
    for (const auto& r : rows) f = std::max(f, r.frame);
    return f;
}

std::vector<TimedPosition> TrajectoryTable::track(int agent_id, int first, int last) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), std::pair{agent_id, first},
                               [](const TrajectoryRow& r, const std::pair<int, int>& key) {
                                   return row_key(r) < key;
                               });
    std::vector<TimedPosition> out;
    for (; it != rows.end() && it->agent_id == agent_id && it->frame <= last; ++it)
        out.push_back({it->frame, {it->x, it->y}});
    return out;
}

std::vector<int> TrajectoryTable::agents_at(int frame) const {
    std::vector<int> ids;
    for (const auto& r : rows)
        if (r.frame == frame) ids.push_back(r.agent_id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::optional<Position> TrajectoryTable::position(int agent_id, int frame) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), std::pair{agent_id, frame},
                               [](const TrajectoryRow& r, const std::pair<int, int>& key) {
                                   return row_key(r) < key;
                               });
    if (it == rows.end() || it->agent_id != agent_id || it->frame != frame) return std::nullopt;
    return Position{it->x, it->y};
}

void normalise(TrajectoryTable& table) {
    std::sort(table.rows.begin(), table.rows.end(),
              [](const auto& a, const auto& b) { return row_key(a) < row_key(b); });
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (row_key(table.rows[i]) == row_key(table.rows[i - 1]))
            throw Error(ErrorCode::DuplicateRecord,
                        "frame " + std::to_string(table.rows[i].frame) + ", agent " +
                            std::to_string(table.rows[i].agent_id));
    }
}

TrajectoryTable parse_tsv(std::istream& in, int frame_stride, double dt) {
    return parse_columns(in, 4, {0, 1, 2, 3}, frame_stride, dt);
}

TrajectoryTable load_tsv(const std::filesystem::path& path, int frame_stride, double dt) {
    auto in = open_or_throw(path);
    return parse_tsv(in, frame_stride, dt);
}

TrajectoryTable parse_obsmat(std::istream& in, int frame_stride, double dt) {
    return parse_columns(in, 8, {0, 1, 2, 4}, frame_stride, dt);
}

TrajectoryTable load_obsmat(const std::filesystem::path& path, int frame_stride, double dt) {
    auto in = open_or_throw(path);
    return parse_obsmat(in, frame_stride, dt);
}

void write_tsv(std::ostream& out, const TrajectoryTable& table) {
    out << std::setprecision(17);
    for (const auto& r : table.rows)
        out << r.frame * table.frame_stride << '\t' << r.agent_id << '\t' << r.x << '\t' << r.y << '\n';
}

void write_obsmat(std::ostream& out, const TrajectoryTable& table) {
    out << std::setprecision(17);
    for (const auto& r : table.rows)
        out << r.frame * table.frame_stride << ' ' << r.agent_id << ' ' << r.x << " 0 " << r.y
            << " 0 0 0\n";
}

ObstacleMap parse_obstacles(std::istream& in) {
    ObstacleMap map;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto tokens = split(line);
        if (tokens.empty()) continue;
        double x = 0.0, y = 0.0;
        if (tokens.size() != 2 || !parse_number(tokens[0], x) || !parse_number(tokens[1], y))
            throw Error(ErrorCode::ParseError, "obstacle line " + std::to_string(line_no) +
                                                   ": expected two numbers");
        map.push_back({x, y});
    }
    return map;
}

ObstacleMap load_obstacles(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_obstacles(in);
}

std::vector<int> issue_frames(const TrajectoryTable& table, int stride) {
    std::vector<int> out;
    if (table.empty()) return out;
    const int first = table.first_frame();
    const int last = table.last_frame();
    for (int t = first + stride - 1; t <= last; t += stride) out.push_back(t);
    return out;
}

ObservationWindow window_at(const TrajectoryTable& table, int agent_id, int t, int obs_len) {
    ObservationWindow w;
    w.agent_id = agent_id;
    w.dt = table.dt;
    const auto track = table.track(agent_id, t - obs_len + 1, t);
    if (track.empty() || track.back().frame != t) return w;
    std::size_t start = track.size() - 1;
    while (start > 0 && track[start - 1].frame == track[start].frame - 1) --start;
    w.frames.assign(track.begin() + static_cast<std::ptrdiff_t>(start), track.end());
    return w;
}

SceneHistory scene_history(const TrajectoryTable& table, int first, int t,
                           const ObstacleMap& obstacles) {
    SceneHistory h;
    h.dt = table.dt;
    h.obstacles = obstacles;
    for (int f = first; f <= t; ++f) {
        SceneFrame frame;
        frame.frame_index = f;
        for (int id : table.agents_at(f)) {
            const Position p = *table.position(id, f);
            Velocity v{};
            if (auto prev = table.position(id, f - 1))
                v = (p - *prev) / table.dt;
            else if (f + 1 <= t)
                if (auto nxt = table.position(id, f + 1)) v = (*nxt - p) / table.dt;
            frame.agents.push_back({id, {p, v}});
        }
        h.frames.push_back(std::move(frame));
    }
    return h;
}

IssueBatch make_issue(const TrajectoryTable& table, int t, const PredictorConfig& cfg,
                      const ObstacleMap& obstacles) {
    IssueBatch batch;
    batch.issue_frame = t;
    for (int id : table.agents_at(t)) batch.windows.push_back(window_at(table, id, t, cfg.obs_len));
    batch.history = scene_history(table, t - cfg.obs_len + 1, t, obstacles);
    return batch;
}

WindowStream::WindowStream(const TrajectoryTable& table, const PredictorConfig& cfg,
                           ObstacleMap obstacles)
    : table_(table), cfg_(cfg), obstacles_(std::move(obstacles)),
      frames_(issue_frames(table, cfg.stride)) {}

std::optional<IssueBatch> WindowStream::next() {
    if (cursor_ >= frames_.size()) return std::nullopt;
    return make_issue(table_, frames_[cursor_++], cfg_, obstacles_);
}

std::vector<Position> ground_truth(const TrajectoryTable& table, int agent_id, int t,
                                   int pred_len) {
    std::vector<Position> out;
    for (const auto& tp : table.track(agent_id, t + 1, t + pred_len)) {
        if (tp.frame != t + 1 + static_cast<int>(out.size())) break;
        out.push_back(tp.pos);
    }
    return out;
}

TrajectoryTable head_frames(const TrajectoryTable& table, int n_frames) {
    TrajectoryTable out;
    out.frame_stride = table.frame_stride;
    out.dt = table.dt;
    const int first = table.first_frame();
    for (const auto& r : table.rows)
        if (r.frame < first + n_frames) out.rows.push_back(r);
    return out;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace crowdcast
