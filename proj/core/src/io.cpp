#include "pmbm/io.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pmbm {

using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
    if (!a.is_array()) throw std::invalid_argument("expected a JSON array for a vector");
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        a.push_back(std::move(row));
    }
    return a;
}

Eigen::MatrixXd mat_from_json(const json& a) {
    if (!a.is_array()) throw std::invalid_argument("expected a JSON array for a matrix");
    if (a.empty()) return Eigen::MatrixXd(0, 0);
    const auto rows = static_cast<Eigen::Index>(a.size());
    const auto cols = static_cast<Eigen::Index>(a[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(a[static_cast<std::size_t>(r)].size()) != cols) {
            throw std::invalid_argument("ragged matrix in JSON");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

// Covariance given either as a diagonal (flat array) or as a full matrix.
Eigen::MatrixXd cov_from_json(const json& a) {
    if (a.is_array() && !a.empty() && a[0].is_number()) return vec_from_json(a).asDiagonal();
    return mat_from_json(a);
}

json blocks_to_json(const std::vector<Eigen::MatrixXd>& b) {
    json a = json::array();
    for (const auto& m : b) a.push_back(mat_to_json(m));
    return a;
}

std::vector<Eigen::MatrixXd> blocks_from_json(const json& a) {
    std::vector<Eigen::MatrixXd> out;
    for (const auto& m : a) out.push_back(mat_from_json(m));
    return out;
}

const char* backend_name(SeqBackend b) {
    switch (b) {
        case SeqBackend::moment: return "moment";
        case SeqBackend::info: return "info";
        case SeqBackend::lscan: return "lscan";
    }
    return "moment";
}

json seq_to_json(const SeqDensity& s) {
    json j;
    j["backend"] = backend_name(s.backend());
    j["first"] = s.first();
    j["last"] = s.last();
    if (const auto* m = s.get_if<MomentSeq>()) {
        j["mean"] = vec_to_json(m->mean);
        j["cov"] = mat_to_json(m->cov);
    } else if (const auto* i = s.get_if<InfoSeq>()) {
        j["ivec"] = vec_to_json(i->ivec);
        j["diag"] = blocks_to_json(i->diag);
        j["upper"] = blocks_to_json(i->upper);
        j["last_mean"] = vec_to_json(i->last_mean);
        j["last_cov"] = mat_to_json(i->last_cov);
    } else if (const auto* l = s.get_if<LScanSeq>()) {
        j["L"] = l->L;
        j["mean"] = vec_to_json(l->mean);
        j["old_blocks"] = blocks_to_json(l->old_blocks);
        j["tail_cov"] = mat_to_json(l->tail_cov);
    }
    return j;
}

SeqDensity seq_from_json(const json& j) {
    const std::string b = j.at("backend").get<std::string>();
    const TimeStep first = j.at("first").get<TimeStep>();
    const TimeStep last = j.at("last").get<TimeStep>();
    const auto steps = last - first + 1;
    if (steps < 1) throw std::invalid_argument("sequence density with empty window");
    if (b == "moment") {
        MomentSeq m;
        m.begin = first;
        m.end = last;
        m.mean = vec_from_json(j.at("mean"));
        m.cov = mat_from_json(j.at("cov"));
        m.nx = static_cast<int>(m.mean.size() / steps);
        return SeqDensity(std::move(m));
    }
    if (b == "info") {
        InfoSeq i;
        i.begin = first;
        i.end = last;
        i.ivec = vec_from_json(j.at("ivec"));
        i.diag = blocks_from_json(j.at("diag"));
        i.upper = blocks_from_json(j.at("upper"));
        i.last_mean = vec_from_json(j.at("last_mean"));
        i.last_cov = mat_from_json(j.at("last_cov"));
        i.nx = static_cast<int>(i.last_mean.size());
        return SeqDensity(std::move(i));
    }
    if (b == "lscan") {
        LScanSeq l;
        l.begin = first;
        l.end = last;
        l.L = j.at("L").get<int>();
        l.mean = vec_from_json(j.at("mean"));
        l.old_blocks = blocks_from_json(j.at("old_blocks"));
        l.tail_cov = mat_from_json(j.at("tail_cov"));
        l.nx = static_cast<int>(l.mean.size() / steps);
        return SeqDensity(std::move(l));
    }
    throw std::invalid_argument("unknown sequence backend '" + b + "'");
}

json mixture_to_json(const TrajectoryMixture& mix) {
    json a = json::array();
    for (const auto& c : mix.components) {
        json j;
        j["weight"] = c.weight;
        j["birth"] = c.birth();
        j["end_first"] = c.ends.first;
        j["end_mass"] = c.ends.mass;
        j["seq"] = seq_to_json(c.seq);
        a.push_back(std::move(j));
    }
    return a;
}

TrajectoryMixture mixture_from_json(const json& a, MixtureKind kind) {
    TrajectoryMixture mix(kind);
    for (const auto& j : a) {
        MixtureComponent c;
        c.weight = j.at("weight").get<double>();
        c.seq = seq_from_json(j.at("seq"));
        c.ends.first = j.at("end_first").get<TimeStep>();
        c.ends.mass = j.at("end_mass").get<std::vector<double>>();
        mix.components.push_back(std::move(c));
    }
    return mix;
}

json history_to_json(const std::vector<MeasurementRef>& h) {
    json a = json::array();
    for (const auto& r : h) a.push_back(json::array({r.k, r.index}));
    return a;
}

std::vector<MeasurementRef> history_from_json(const json& a) {
    std::vector<MeasurementRef> h;
    for (const auto& r : a) h.push_back({r.at(0).get<TimeStep>(), r.at(1).get<std::int64_t>()});
    return h;
}

json trajectory_to_json(const Trajectory& t) {
    json j;
    j["beta"] = t.beta;
    j["epsilon"] = t.epsilon;
    json s = json::array();
    for (const auto& x : t.states) s.push_back(vec_to_json(x));
    j["states"] = std::move(s);
    return j;
}

Trajectory trajectory_from_json(const json& j) {
    std::vector<Eigen::VectorXd> states;
    for (const auto& x : j.at("states")) states.push_back(vec_from_json(x));
    return Trajectory(j.at("beta").get<TimeStep>(), j.at("epsilon").get<TimeStep>(), std::move(states));
}

template <class T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& text) {
    const json j = json::parse(text);
    ScenarioConfig c;
    if (j.contains("preset")) c = preset_scenario(j.at("preset").get<int>());
    maybe(j, "K", c.K);
    maybe(j, "T", c.T);
    maybe(j, "sigma_v", c.sigma_v);
    maybe(j, "sigma_r", c.sigma_r);
    maybe(j, "ps", c.ps);
    maybe(j, "pd", c.pd);
    maybe(j, "mu_fa", c.mu_fa);
    maybe(j, "seed", c.seed);
    maybe(j, "gate_prob", c.gate_prob);
    if (j.contains("region")) {
        const auto& r = j.at("region");
        c.region = {r.at("xmin").get<double>(), r.at("xmax").get<double>(), r.at("ymin").get<double>(),
                    r.at("ymax").get<double>()};
    }
    if (j.contains("birth")) {
        c.birth.components.clear();
        for (const auto& b : j.at("birth")) {
            c.birth.components.push_back(
                {b.at("weight").get<double>(), vec_from_json(b.at("mean")), cov_from_json(b.at("cov"))});
        }
    }
    if (j.contains("truth_mode")) {
        const auto m = j.at("truth_mode").get<std::string>();
        if (m == "simulated") c.truth_mode = TruthMode::simulated;
        else if (m == "scripted") c.truth_mode = TruthMode::scripted;
        else throw std::invalid_argument("truth_mode must be 'simulated' or 'scripted'");
    }
    if (j.contains("script")) {
        c.script.clear();
        for (const auto& s : j.at("script")) {
            ScriptedTarget t{s.at("birth").get<TimeStep>(), s.at("death").get<TimeStep>(), std::nullopt};
            if (s.contains("init") && !s.at("init").is_null()) t.init = vec_from_json(s.at("init"));
            c.script.push_back(std::move(t));
        }
    }
    c.validate();
    return c;
}

ScenarioConfig read_scenario_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open scenario config '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return scenario_from_json(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["K"] = c.K;
    j["T"] = c.T;
    j["sigma_v"] = c.sigma_v;
    j["sigma_r"] = c.sigma_r;
    j["ps"] = c.ps;
    j["pd"] = c.pd;
    j["mu_fa"] = c.mu_fa;
    j["region"] = {{"xmin", c.region.xmin}, {"xmax", c.region.xmax}, {"ymin", c.region.ymin}, {"ymax", c.region.ymax}};
    json birth = json::array();
    for (const auto& b : c.birth.components) {
        birth.push_back({{"weight", b.weight}, {"mean", vec_to_json(b.mean)}, {"cov", mat_to_json(b.cov)}});
    }
    j["birth"] = std::move(birth);
    j["seed"] = c.seed;
    j["gate_prob"] = c.gate_prob;
    j["truth_mode"] = c.truth_mode == TruthMode::simulated ? "simulated" : "scripted";
    json script = json::array();
    for (const auto& s : c.script) {
        json t = {{"birth", s.birth}, {"death", s.death}};
        if (s.init) t["init"] = vec_to_json(*s.init);
        script.push_back(std::move(t));
    }
    j["script"] = std::move(script);
    return j.dump(2);
}

void write_measurements_jsonl(std::ostream& os, const MeasurementLog& log) {
    for (std::size_t k = 0; k < log.scans.size(); ++k) {
        json j;
        j["k"] = k;
        if (!log.scans[k]) {
            j["scan"] = nullptr;
        } else {
            json a = json::array();
            for (const auto& z : *log.scans[k]) a.push_back(vec_to_json(z));
            j["scan"] = std::move(a);
        }
        os << j.dump() << '\n';
    }
}

MeasurementLog read_measurements_jsonl(std::istream& is) {
    MeasurementLog log;
    std::string line;
    std::size_t expect = 0;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const json j = json::parse(line);
        const auto k = j.at("k").get<std::size_t>();
        if (k != expect) throw std::invalid_argument("measurement log steps must be contiguous from 0");
        ++expect;
        const auto& s = j.at("scan");
        if (s.is_null()) {
            log.scans.emplace_back(std::nullopt);
            continue;
        }
        MeasurementSet scan;
        for (const auto& z : s) scan.push_back(vec_from_json(z));
        log.scans.emplace_back(std::move(scan));
    }
    return log;
}

void write_estimates_record(std::ostream& os, TimeStep k, const std::vector<Trajectory>& set) {
    json j;
    j["k"] = k;
    json a = json::array();
    for (const auto& t : set) a.push_back(trajectory_to_json(t));
    j["trajectories"] = std::move(a);
    os << j.dump() << '\n';
}

std::vector<std::pair<TimeStep, std::vector<Trajectory>>> read_estimates_jsonl(std::istream& is) {
    std::vector<std::pair<TimeStep, std::vector<Trajectory>>> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const json j = json::parse(line);
        std::vector<Trajectory> set;
        for (const auto& t : j.at("trajectories")) set.push_back(trajectory_from_json(t));
        out.emplace_back(j.at("k").get<TimeStep>(), std::move(set));
    }
    return out;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricRow>& rows) {
    os << "k,loc,miss,false,card,total\n";
    os << std::setprecision(10);
    for (const auto& r : rows) {
        os << r.k << ',' << r.loc << ',' << r.miss << ',' << r.fa << ',' << r.card << ',' << r.total << '\n';
    }
}

std::string posterior_to_json(const PmbmDensity& p, int indent) {
    json j;
    j["mode"] = p.mode == TrajectoryMode::all ? "all" : "current";
    j["window"] = {p.window.alpha, p.window.gamma};
    j["next_track_id"] = p.next_track_id;
    json sizes = json::array();
    for (const auto& [k, n] : p.scan_sizes) sizes.push_back(json::array({k, n}));
    j["scan_sizes"] = std::move(sizes);
    j["ppp"] = mixture_to_json(p.ppp);
    json tracks = json::array();
    for (const auto& t : p.tracks) {
        json hyps = json::array();
        for (const auto& h : t.hypotheses) {
            hyps.push_back({{"log_weight", h.log_weight},
                            {"existence", h.existence},
                            {"history", history_to_json(h.history)},
                            {"density", mixture_to_json(h.density)}});
        }
        tracks.push_back({{"id", t.id}, {"hypotheses", std::move(hyps)}});
    }
    j["tracks"] = std::move(tracks);
    json globals = json::array();
    for (const auto& g : p.globals) {
        globals.push_back({{"log_weight", g.log_weight}, {"choice", g.choice}, {"retired", history_to_json(g.retired)}});
    }
    j["globals"] = std::move(globals);
    return j.dump(indent);
}

PmbmDensity posterior_from_json(const std::string& text) {
    const json j = json::parse(text);
    PmbmDensity p;
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "all" && mode != "current") throw std::invalid_argument("posterior mode must be 'all' or 'current'");
    p.mode = mode == "all" ? TrajectoryMode::all : TrajectoryMode::current;
    p.window = TimeWindow(j.at("window").at(0).get<TimeStep>(), j.at("window").at(1).get<TimeStep>());
    p.next_track_id = j.at("next_track_id").get<std::uint64_t>();
    for (const auto& s : j.at("scan_sizes")) p.scan_sizes[s.at(0).get<TimeStep>()] = s.at(1).get<std::int64_t>();
    p.ppp = mixture_from_json(j.at("ppp"), MixtureKind::intensity);
    for (const auto& t : j.at("tracks")) {
        Track tr;
        tr.id = t.at("id").get<std::uint64_t>();
        for (const auto& h : t.at("hypotheses")) {
            LocalHypothesis lh;
            lh.log_weight = h.at("log_weight").get<double>();
            lh.existence = h.at("existence").get<double>();
            lh.history = history_from_json(h.at("history"));
            lh.density = mixture_from_json(h.at("density"), MixtureKind::density);
            tr.hypotheses.push_back(std::move(lh));
        }
        p.tracks.push_back(std::move(tr));
    }
    p.globals.clear();
    for (const auto& g : j.at("globals")) {
        GlobalHypothesis gh;
        gh.log_weight = g.at("log_weight").get<double>();
        gh.choice = g.at("choice").get<std::vector<std::size_t>>();
        gh.retired = history_from_json(g.at("retired"));
        p.globals.push_back(std::move(gh));
    }
    return p;
}

}  // namespace pmbm
