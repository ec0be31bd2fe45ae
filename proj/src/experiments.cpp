#include "gzk/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gzk/audit.hpp"
#include "gzk/blowup.hpp"
#include "gzk/grid.hpp"
#include "gzk/multipliers.hpp"
#include "gzk/norms.hpp"
#include "gzk/solver.hpp"

namespace gzk {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "gzk3d 1.0.0";
constexpr int kSchema = 1;
const double kGolden = 0.5 * (1.0 + std::sqrt(5.0));

// every physical default in one place; echoed into each manifest
json defaults_table() {
    return json{
        {"grid", {{"n_axis", 64}, {"box_len", 30.0}}},
        {"solver",
         {{"k", 1},
          {"dt", 0.0},
          {"T", 1.0},
          {"dealias_fraction", 2.0 / 3.0},
          {"snapshot_stride", 1},
          {"linear_only", false},
          {"cfl_c", 1.0},
          {"dt_cap", 0.01}}},
        {"data",
         {{"kind", "blowup"},
          {"j_max", 3},
          {"k_max", 2},
          {"b", 2.0},
          {"rule", "double_exp"},
          {"custom_base", 2.0},
          {"amplitude", 1.0}}},
        {"probe",
         {{"delta_factor", 4.0},
          {"times", {1.0, 2.5 * kGolden, kGolden * kGolden * kGolden}},
          {"source", "linear"},
          {"eps", 0.05},
          {"estimate", "kato_forward"},
          {"gamma", 0.4},
          {"beta", 0.6},
          {"s", 1.25},
          {"r", 0.5},
          {"axis", 0},
          {"T", 1.0},
          {"time_samples", 65},
          {"refine", true},
          {"growth_bound", 2.0},
          {"weight_rate", 1.0},
          {"alphas", {json::array({1, 0, 0}), json::array({2, 0, 0})}},
          {"decay_grid", {{"n_axis", 128}, {"box_len", 20.0}}},
          {"smoothing_grid", {{"n_axis", 64}, {"box_len", 20.0}}},
          {"s_probe", 3.0},
          {"t_eval", 0.5},
          {"grids", {64, 128}},
          {"lin_growth_min", 1.25},
          {"duh_growth_max", 1.15},
          {"picard_T", 0.25},
          {"n_iters", 5},
          {"quad_points", 17},
          {"ensemble",
           {{"count", 20}, {"generator", "band_limited"}, {"band", 0}, {"envelope_width", 6.0}}}}},
        {"seed", 1234},
        {"output_dir", "gzk-out"},
    };
}

void merge_defaults(json& cfg, const json& defaults) {
    for (auto it = defaults.begin(); it != defaults.end(); ++it) {
        if (!cfg.contains(it.key())) {
            cfg[it.key()] = it.value();
        } else if (it.value().is_object() && cfg[it.key()].is_object()) {
            merge_defaults(cfg[it.key()], it.value());
        }
    }
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename T>
T field(const json& j, const std::string& path) {
    const json* cur = &j;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (!cur->is_object() || !cur->contains(part))
            throw ConfigError("config field missing or invalid: " + path);
        cur = &(*cur)[part];
    }
    try {
        return cur->get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field has the wrong type: " + path);
    }
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct OutputSink {
    fs::path dir;
    json files = json::array();

    explicit OutputSink(const fs::path& d) : dir(d) { fs::create_directories(d); }

    void write(const std::string& name, const std::string& bytes) {
        std::ofstream out(dir / name, std::ios::binary);
        out.write(bytes.data(), std::streamsize(bytes.size()));
        out.close();
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)fnv1a(bytes));
        files.push_back(json{{"name", name}, {"bytes", bytes.size()}, {"fnv1a", hex}});
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Grid3 grid_from(const json& g) {
    if (g.contains("nx"))
        return make_grid(field<int>(g, "nx"), field<int>(g, "ny1"), field<int>(g, "ny2"),
                         field<double>(g, "box_len"));
    return make_grid(field<int>(g, "n_axis"), field<double>(g, "box_len"));
}

SolverConfig solver_from(const json& s) {
    SolverConfig cfg;
    cfg.k = field<int>(s, "k");
    cfg.dt = field<double>(s, "dt");
    cfg.T = field<double>(s, "T");
    cfg.dealias_fraction = field<double>(s, "dealias_fraction");
    cfg.snapshot_stride = field<int>(s, "snapshot_stride");
    cfg.linear_only = field<bool>(s, "linear_only");
    cfg.cfl_c = field<double>(s, "cfl_c");
    cfg.dt_cap = field<double>(s, "dt_cap");
    return cfg;
}

BlowupSpec blowup_from(const json& d) {
    BlowupSpec spec;
    spec.j_max = field<int>(d, "j_max");
    spec.k_max = field<int>(d, "k_max");
    spec.profile.b = field<double>(d, "b");
    const std::string rule = field<std::string>(d, "rule");
    if (rule == "double_exp") spec.rule = CoefficientRule::double_exp;
    else if (rule == "custom") spec.rule = CoefficientRule::custom;
    else throw ConfigError("config field invalid: data.rule (double_exp|custom)");
    spec.custom_base = field<double>(d, "custom_base");
    return spec;
}

RealField data_field(const json& d, const Grid3& g) {
    const std::string kind = field<std::string>(d, "kind");
    const double amp = field<double>(d, "amplitude");
    RealField f(g);
    if (kind == "zero") return f;
    if (kind == "profile") {
        f = sample_profile(ProfileSpec{field<double>(d, "b")}, g).field;
    } else if (kind == "blowup") {
        f = build_u0(blowup_from(d), g).u0;
    } else {
        throw ConfigError("config field invalid: data.kind (zero|profile|blowup)");
    }
    for (double& v : f.v) v *= amp;
    return f;
}

EstimateId estimate_from(const json& p) {
    EstimateId id;
    const std::string name = field<std::string>(p, "estimate");
    if (name == "kato_forward") id.kind = EstimateId::Kind::kato_forward;
    else if (name == "kato_dual") id.kind = EstimateId::Kind::kato_dual;
    else if (name == "maximal") id.kind = EstimateId::Kind::maximal;
    else if (name == "strichartz") id.kind = EstimateId::Kind::strichartz;
    else if (name == "weighted_commutator") id.kind = EstimateId::Kind::weighted_commutator;
    else if (name == "weighted_decay") id.kind = EstimateId::Kind::weighted_decay;
    else if (name == "genericity") id.kind = EstimateId::Kind::genericity;
    else throw ConfigError("config field invalid: probe.estimate");
    id.gamma = field<double>(p, "gamma");
    id.beta = field<double>(p, "beta");
    id.s = field<double>(p, "s");
    id.r = field<double>(p, "r");
    id.axis = field<int>(p, "axis");
    return id;
}

Ensemble ensemble_from(const json& e, std::uint64_t seed) {
    Ensemble ens;
    ens.count = field<int>(e, "count");
    const std::string gen = field<std::string>(e, "generator");
    if (gen == "band_limited") ens.generator = Ensemble::Generator::band_limited;
    else if (gen == "decaying_envelope") ens.generator = Ensemble::Generator::decaying_envelope;
    else if (gen == "probe_set") ens.generator = Ensemble::Generator::probe_set;
    else throw ConfigError("config field invalid: probe.ensemble.generator");
    ens.band = field<int>(e, "band");
    ens.envelope_width = field<double>(e, "envelope_width");
    ens.seed = seed;
    return ens;
}

// ---------------------------------------------------------------------------
// experiment runners: return (exit code, report)

int run_simulate(const json& cfg, OutputSink& sink, json& report) {
    Grid3 g = grid_from(cfg.at("grid"));
    SolverConfig scfg = solver_from(cfg.at("solver"));
    RealField u0 = data_field(cfg.at("data"), g);
    Trajectory traj = integrate(u0, scfg);

    // raw little-endian float64 dump with a JSON sidecar
    std::string bytes;
    bytes.reserve(traj.count() * g.size() * sizeof(double));
    for (const auto& snap : traj.snapshots)
        bytes.append(reinterpret_cast<const char*>(snap.v.data()), g.size() * sizeof(double));
    sink.write("trajectory.f64", bytes);
    json sidecar{{"dims", {traj.count(), g.nx, g.ny1, g.ny2}},
                 {"box_len", g.box_len},
                 {"times", traj.times},
                 {"layout", "snapshot-major, x slow, y2 fast, little-endian float64"},
                 {"file", "trajectory.f64"}};
    sink.write("trajectory.json", sidecar.dump(2) + "\n");

    std::string csv = "t,mass,mean,hamiltonian\n";
    for (std::size_t i = 0; i < traj.count(); ++i) {
        Invariants inv = invariants(traj.snapshots[i], scfg.k);
        csv += fmt(traj.times[i]) + "," + fmt(inv.mass) + "," + fmt(inv.mean) + "," +
               fmt(inv.hamiltonian) + "\n";
    }
    sink.write("invariants.csv", csv);

    Invariants a = invariants(traj.snapshots.front(), scfg.k);
    Invariants b = invariants(traj.snapshots.back(), scfg.k);
    report["snapshots"] = traj.count();
    report["mass_drift"] = (a.mass > 0.0) ? (b.mass - a.mass) / a.mass : 0.0;
    report["verdict"] = "PASS";
    return 0;
}

int run_blowup_sweep(const json& cfg, OutputSink& sink, json& report) {
    Grid3 g = grid_from(cfg.at("grid"));
    const json& probe = cfg.at("probe");
    BlowupSpec spec = blowup_from(cfg.at("data"));
    const double delta = field<double>(probe, "delta_factor") * g.spacing_x();
    const std::vector<double> times = field<std::vector<double>>(probe, "times");
    const std::string source_name = field<std::string>(probe, "source");
    SweepSource source;
    source.eps = field<double>(probe, "eps");
    if (source_name == "linear") source.kind = SweepSource::Kind::linear;
    else if (source_name == "nonlinear") source.kind = SweepSource::Kind::nonlinear;
    else if (source_name == "duhamel") source.kind = SweepSource::Kind::duhamel;
    else throw ConfigError("config field invalid: probe.source");

    SweepTable table = blowup_sweep(spec, g, times, delta, source, solver_from(cfg.at("solver")));

    std::string csv = "t,score,is_armed_rational,coefficient\n";
    double baseline = 0.0, spike_min = std::numeric_limits<double>::infinity();
    bool any_armed = false, any_irr = false;
    for (const auto& row : table.rows) {
        csv += fmt(row.t) + "," + fmt(row.score) + "," + (row.is_armed_rational ? "1" : "0") +
               "," + fmt(row.coefficient) + "\n";
        if (row.is_armed_rational) {
            any_armed = true;
            spike_min = std::min(spike_min, row.score);
        } else {
            any_irr = true;
            baseline = std::max(baseline, row.score);
        }
    }
    sink.write("sweep.csv", csv);

    // Diophantine evidence for the irrational probe times
    json margins = json::array();
    for (const auto& row : table.rows) {
        if (row.is_armed_rational) continue;
        margins.push_back(json{{"t", row.t},
                               {"margin", genericity_margin(GenericityProbe{row.t, 10000})}});
    }

    // spike set at 5x the irrational baseline must be exactly the armed set
    bool spike_set_ok = true;
    for (const auto& row : table.rows) {
        const bool spikes = any_irr && row.score >= 5.0 * baseline;
        if (spikes != row.is_armed_rational) spike_set_ok = false;
    }
    report["delta"] = delta;
    report["baseline"] = baseline;
    report["min_armed_score"] = any_armed ? spike_min : 0.0;
    report["contrast"] = (any_armed && baseline > 0.0) ? spike_min / baseline : 0.0;
    report["spike_set_matches_armed"] = spike_set_ok;
    report["genericity_margins"] = margins;
    json armed = json::array();
    for (const auto& st : table.armed)
        armed.push_back(json{{"j", st.j}, {"k", st.k}, {"coefficient", st.coefficient}});
    report["armed"] = armed;
    report["verdict"] = spike_set_ok ? "PASS" : "FAIL";
    return spike_set_ok ? 0 : 1;
}

int run_weighted_decay(const json& cfg, OutputSink& sink, json& report) {
    const json& probe = cfg.at("probe");
    Grid3 g = grid_from(probe.at("decay_grid"));
    const double a = field<double>(probe, "weight_rate");
    std::vector<double> ts;
    for (int i = 0; i < 9; ++i) ts.push_back(0.1 * std::pow(10.0, double(i) / 8.0));

    std::string csv = "alpha0,alpha1,alpha2,t,value\n";
    json slopes = json::array();
    bool pass = true;
    for (const auto& aj : probe.at("alphas")) {
        std::array<int, 3> alpha{aj.at(0).get<int>(), aj.at(1).get<int>(), aj.at(2).get<int>()};
        DecayScaling sc = weighted_decay_scaling(a, alpha, ts, g);
        const int order = alpha[0] + alpha[1] + alpha[2];
        const double bound = -0.5 * order - 0.15;
        const bool ok = sc.slope >= bound;
        pass = pass && ok;
        slopes.push_back(json{{"alpha", {alpha[0], alpha[1], alpha[2]}},
                              {"slope", sc.slope},
                              {"bound", bound},
                              {"pass", ok}});
        for (std::size_t i = 0; i < ts.size(); ++i)
            csv += std::to_string(alpha[0]) + "," + std::to_string(alpha[1]) + "," +
                   std::to_string(alpha[2]) + "," + fmt(ts[i]) + "," + fmt(sc.values[i]) + "\n";
    }
    sink.write("decay.csv", csv);
    report["weight_rate"] = a;
    report["slopes"] = slopes;
    report["verdict"] = pass ? "PASS" : "FAIL";
    return pass ? 0 : 1;
}

int run_estimate_audit(const json& cfg, OutputSink& sink, json& report) {
    Grid3 g = grid_from(cfg.at("grid"));
    const json& probe = cfg.at("probe");
    EstimateId id = estimate_from(probe);
    Ensemble ens = ensemble_from(probe.at("ensemble"), field<std::uint64_t>(cfg, "seed"));
    AuditOptions opts;
    opts.time_samples = field<int>(probe, "time_samples");
    opts.refine = field<bool>(probe, "refine");
    opts.growth_bound = field<double>(probe, "growth_bound");
    AuditReport rep = run_audit(id, ens, g, field<double>(probe, "T"), opts);

    std::string csv = "member,ratio\n";
    for (std::size_t i = 0; i < rep.ratios.size(); ++i)
        csv += std::to_string(i) + "," + fmt(rep.ratios[i]) + "\n";
    sink.write("audit.csv", csv);

    report["estimate"] = rep.estimate;
    report["sup_ratio"] = rep.sup_ratio;
    report["refined_sup"] = rep.refined_sup;
    report["growth"] = rep.growth;
    report["growth_bound"] = rep.growth_bound;
    report["notes"] = rep.notes;
    report["verdict"] = rep.pass ? "PASS" : "FAIL";
    return rep.pass ? 0 : 1;
}

int run_smoothing(const json& cfg, OutputSink& sink, json& report) {
    const json& probe = cfg.at("probe");
    SolverConfig scfg = solver_from(cfg.at("solver"));
    const json& sg = probe.at("smoothing_grid");
    const double box = field<double>(sg, "box_len");
    std::vector<Grid3> grids;
    for (int n : field<std::vector<int>>(probe, "grids")) grids.push_back(make_grid(n, box));
    SmoothingReport rep =
        smoothing_report(ProfileSpec{field<double>(cfg, "data.b")}, scfg,
                         field<double>(probe, "s_probe"), grids, field<double>(probe, "t_eval"));
    rep.lin_growth_min = field<double>(probe, "lin_growth_min");
    rep.duh_growth_max = field<double>(probe, "duh_growth_max");

    std::string csv = "n,g_lin,g_duh\n";
    for (const auto& r : rep.grids)
        csv += std::to_string(r.n) + "," + fmt(r.g_lin) + "," + fmt(r.g_duh) + "\n";
    sink.write("smoothing.csv", csv);

    bool pass = true;
    for (std::size_t i = 0; i < rep.lin_growth.size(); ++i) {
        if (rep.comparative) pass = pass && rep.duh_growth[i] <= rep.lin_growth[i];
        else
            pass = pass && rep.lin_growth[i] >= rep.lin_growth_min &&
                   rep.duh_growth[i] <= rep.duh_growth_max;
    }
    report["comparative"] = rep.comparative;
    report["lin_growth"] = rep.lin_growth;
    report["duh_growth"] = rep.duh_growth;
    report["s_probe"] = rep.s_probe;
    report["t_eval"] = rep.t_eval;
    report["verdict"] = pass ? "PASS" : "FAIL";
    return pass ? 0 : 1;
}

int run_contraction(const json& cfg, OutputSink& sink, json& report) {
    Grid3 g = grid_from(cfg.at("grid"));
    const json& probe = cfg.at("probe");
    RealField u0 = data_field(cfg.at("data"), g);
    PicardResult res = picard_iterate(u0, field<double>(probe, "picard_T"),
                                      field<int>(probe, "n_iters"),
                                      field<int>(probe, "quad_points"));

    std::string csv = "iteration,distance,ratio\n";
    for (std::size_t i = 0; i < res.distances.size(); ++i)
        csv += std::to_string(i + 1) + "," + fmt(res.distances[i]) + "," +
               (i > 0 ? fmt(res.ratios[i - 1]) : std::string("")) + "\n";
    sink.write("contraction.csv", csv);

    bool pass = !res.diverged && !res.ratios.empty();
    for (std::size_t i = 1; i < res.ratios.size(); ++i) pass = pass && res.ratios[i] <= 0.5;
    report["distances"] = res.distances;
    report["ratios"] = res.ratios;
    report["diverged"] = res.diverged;
    report["verdict"] = pass ? "PASS" : "FAIL";
    return pass ? 0 : 1;
}

}  // namespace

int run_experiment_file(const std::string& config_path, const std::string& out_root) {
    const auto t_start = std::chrono::steady_clock::now();
    json cfg;
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "error: cannot open config '%s'\n", config_path.c_str());
            return 2;
        }
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        std::fprintf(stderr, "error: config parse failure: %s\n", e.what());
        return 2;
    }

    try {
        if (!cfg.contains("experiment"))
            throw ConfigError("config field missing or invalid: experiment");
        if (cfg.contains("schema") && field<int>(cfg, "schema") != kSchema)
            throw ConfigError("config schema version unsupported");
        // a user-supplied grid must name its size; only a fully absent
        // section falls back to the defaults table
        if (cfg.contains("grid") && !cfg["grid"].contains("n_axis") && !cfg["grid"].contains("nx"))
            throw ConfigError("config field missing or invalid: grid.n_axis");
        merge_defaults(cfg, defaults_table());
        cfg["schema"] = kSchema;

        fs::path root;
        if (!out_root.empty()) root = out_root;
        else if (const char* env = std::getenv("GZK_OUTPUT_ROOT")) root = env;
        else root = ".";
        OutputSink sink(root / field<std::string>(cfg, "output_dir"));

        const std::string name = field<std::string>(cfg, "experiment");
        json report{{"experiment", name}, {"version", kVersion}};
        int code = 2;
        if (name == "simulate") code = run_simulate(cfg, sink, report);
        else if (name == "blowup-sweep") code = run_blowup_sweep(cfg, sink, report);
        else if (name == "weighted-decay") code = run_weighted_decay(cfg, sink, report);
        else if (name == "estimate-audit") code = run_estimate_audit(cfg, sink, report);
        else if (name == "smoothing") code = run_smoothing(cfg, sink, report);
        else if (name == "contraction") code = run_contraction(cfg, sink, report);
        else throw ConfigError("config field invalid: experiment '" + name + "'");

        sink.write("report.json", report.dump(2) + "\n");

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        json manifest{{"version", kVersion},
                      {"schema", kSchema},
                      {"config", cfg},
                      {"wall_seconds", wall},
                      {"outputs", sink.files},
                      {"verdict", report.value("verdict", "ERROR")}};
        std::ofstream mf(sink.dir / "manifest.json");
        mf << manifest.dump(2) << "\n";
        return code;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const SolverAbort& e) {
        std::fprintf(stderr, "error: solver aborted, last valid time %.6f\n", e.last_valid_time);
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

std::string list_experiments_text() {
    std::ostringstream out;
    out << kVersion << " experiments (schema " << kSchema << ")\n\n";
    out << "simulate        grid, solver, data\n"
        << "                integrates u_t + u_xxx + u_xy1y1 + u_xy2y2 + u^k u_x = 0 and dumps\n"
        << "                the trajectory with conserved-quantity tables\n"
        << "                claim: the dealiased integrating-factor flow conserves mass, mean\n"
        << "                and the gradient/potential energy functional\n\n"
        << "blowup-sweep    data (truncated double-sum datum), probe.times, probe.source,\n"
        << "                probe.delta_factor, probe.eps\n"
        << "                claim: the gradient-oscillation score of W(t)u0 (and of the full\n"
        << "                nonlinear flow) spikes exactly at the armed rational times, while\n"
        << "                the Duhamel remainder u - W(t)u0 stays smooth at those times\n\n"
        << "weighted-decay  probe.decay_grid, probe.weight_rate, probe.alphas\n"
        << "                claim: derivatives of the e^{a(x+y1+y2)}-conjugated free flow obey\n"
        << "                ||d^alpha w(t)|| <= C t^{-|alpha|/2} e^{3a^3 t} on t in (0,1]\n\n"
        << "estimate-audit  grid, probe.estimate (kato_forward | kato_dual | maximal |\n"
        << "                strichartz | weighted_commutator | weighted_decay | genericity),\n"
        << "                probe.ensemble, probe.T\n"
        << "                claim: the named linear inequality for the free propagator holds\n"
        << "                with a resolution-stable constant (sup ratio under grid doubling)\n\n"
        << "smoothing       probe.grids, probe.s_probe, probe.t_eval, solver.k\n"
        << "                claim: the Duhamel term of the nonlinear flow carries a smaller\n"
        << "                spectral-tail growth under grid refinement than the linear flow\n"
        << "                (one full derivative gained for k >= 2, comparative for k = 1)\n\n"
        << "contraction     grid, data, probe.picard_T, probe.n_iters, probe.quad_points\n"
        << "                claim: the mild-solution map is a contraction for small data and\n"
        << "                short horizons; successive Picard distances decay geometrically\n";
    return out.str();
}

}  // namespace gzk
