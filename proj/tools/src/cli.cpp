// Copyright 2026 The emudistill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emudistill_cli/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "emudistill/asymptotics.hpp"
#include "emudistill/covariance.hpp"
#include "emudistill/distillation.hpp"
#include "emudistill/errors.hpp"
#include "emudistill/keyrate.hpp"
#include "emudistill/record_io.hpp"
#include "emudistill/report_json.hpp"
#include "emudistill/sampling.hpp"
#include "emudistill_cli/sweep.hpp"
#include "json.hpp"

namespace emudistill::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Globals {
    std::uint64_t seed = 1;
    bool deterministic = false;
    unsigned threads = 1;
    std::string out_dir = ".";
};

struct StateOptions {
    std::string preset;
    std::string state_file;
    double tmsv_a = 1.0;
    double tmsv_b = 0.0;
    double tmsv_r = 0.0;
    CLI::Option *preset_opt = nullptr;
    CLI::Option *file_opt = nullptr;
    CLI::Option *a_opt = nullptr;
    CLI::Option *b_opt = nullptr;
    CLI::Option *r_opt = nullptr;

    void attach(CLI::App *app) {
        preset_opt = app->add_option("--preset", preset, "Built-in state: experimental or symmetric")
                         ->check(CLI::IsMember({"experimental", "symmetric"}));
        file_opt = app->add_option("--state-file", state_file, "Covariance JSON file");
        a_opt = app->add_option("--tmsv-a", tmsv_a, "Symmetric two-mode state parameter a");
        b_opt = app->add_option("--tmsv-b", tmsv_b, "Symmetric two-mode state parameter b");
        r_opt = app->add_option("--tmsv-r", tmsv_r, "Pure two-mode squeezed vacuum with squeezing r");
        a_opt->needs(b_opt);
        b_opt->needs(a_opt);
        for (CLI::Option *o : {file_opt, a_opt, r_opt}) {
            preset_opt->excludes(o);
        }
        file_opt->excludes(a_opt)->excludes(r_opt);
        r_opt->excludes(a_opt)->excludes(b_opt);
    }

    CovarianceMatrix4 resolve() const {
        if (file_opt->count() > 0) {
            std::ifstream in(state_file);
            if (!in) {
                throw IoError("cannot open state file " + state_file);
            }
            std::stringstream text;
            text << in.rdbuf();
            CovarianceMatrix4 gamma = covariance_from_json(text.str());
            gamma.require_physical("state file " + state_file);
            return gamma;
        }
        if (a_opt->count() > 0) {
            return tmsv_covariance({tmsv_a, tmsv_b});
        }
        if (r_opt->count() > 0) {
            if (!(tmsv_r > 0.0)) {
                throw ConfigError("--tmsv-r must be positive");
            }
            return tmsv_covariance(SymmetricTmsvParams::from_squeezing(tmsv_r));
        }
        if (preset == "symmetric") {
            return tmsv_covariance({3.583, 3.417});
        }
        return experimental_preset();
    }

    std::string describe() const {
        if (file_opt->count() > 0) {
            return "file:" + state_file;
        }
        if (a_opt->count() > 0) {
            return "tmsv(a=" + format_number(tmsv_a) + ",b=" + format_number(tmsv_b) + ")";
        }
        if (r_opt->count() > 0) {
            return "tmsv(r=" + format_number(tmsv_r) + ")";
        }
        return preset.empty() ? std::string("experimental") : preset;
    }
};

struct NoiseOptions {
    double sigma = 0.0;
    double q = 1.0;
    std::vector<double> loss_eta;
    CLI::Option *sigma_opt = nullptr;
    CLI::Option *q_opt = nullptr;

    void attach(CLI::App *app, bool with_loss) {
        sigma_opt = app->add_option("--noise-sigma", sigma, "Gaussian phase-noise width per mode (radians)");
        q_opt = app->add_option("--noise-q", q, "Gaussian phase noise chosen to give this q in (0, 1]");
        sigma_opt->excludes(q_opt);
        if (with_loss) {
            app->add_option("--loss-eta", loss_eta, "Detection efficiency: one value or one per mode")
                ->expected(1, 2);
        }
    }

    bool given() const {
        return sigma_opt->count() > 0 || q_opt->count() > 0;
    }

    PhaseNoiseModel resolve() const {
        if (sigma_opt->count() > 0) {
            if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
                throw ConfigError("--noise-sigma must be finite and >= 0");
            }
            return sigma == 0.0 ? PhaseNoiseModel::none() : PhaseNoiseModel::gaussian(sigma);
        }
        if (q_opt->count() > 0) {
            return PhaseNoiseModel::gaussian_for_q(q);
        }
        return PhaseNoiseModel::none();
    }

    std::optional<std::pair<double, double>> loss() const {
        if (loss_eta.empty()) {
            return std::nullopt;
        }
        return std::pair{loss_eta.front(), loss_eta.back()};
    }
};

struct SamplerOptions {
    std::uint64_t count = 0;
    std::uint64_t chunk_size = 65536;
    CLI::Option *count_opt = nullptr;

    void attach(CLI::App *app) {
        count_opt = app->add_option("--count", count, "Number of records to sample");
        app->add_option("--chunk-size", chunk_size, "Records per generated chunk")->capture_default_str();
    }
};

fs::path output_path(const Globals &g, const std::string &name) {
    fs::path p(name);
    if (p.is_absolute()) {
        return p;
    }
    return fs::path(g.out_dir) / p;
}

void write_text(const fs::path &path, const std::string &text) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

SamplerConfig make_sampler(const Globals &g, const StateOptions &state, const NoiseOptions &noise,
                           const SamplerOptions &sampling) {
    SamplerConfig config;
    config.seed = g.seed;
    config.count = sampling.count;
    config.state = state.resolve();
    config.noise = noise.resolve();
    config.loss = noise.loss();
    config.chunk_size = sampling.chunk_size;
    config.threads = g.threads;
    config.validate();
    return config;
}

std::string sampler_provenance(const Globals &g, const StateOptions &state, const SamplerConfig &config) {
    std::ostringstream out;
    out << "sampler(seed=" << g.seed << ", count=" << config.count << ", state=" << state.describe()
        << ", noise=" << config.noise.describe();
    if (config.loss) {
        out << ", loss_eta=" << config.loss->first << "/" << config.loss->second;
    }
    out << ")";
    return out.str();
}

/// Record source shared by distill and sweep: a file or an inline sampler.
struct Source {
    std::unique_ptr<RecordReader> reader;
    std::unique_ptr<RecordStream> stream;
    std::string provenance;
    std::optional<SamplerConfig> config;

    ChunkSource chunks() {
        if (reader) {
            return [this](std::vector<HeterodyneRecord> &out) { return reader->next_chunk(out); };
        }
        return [this](std::vector<HeterodyneRecord> &out) { return stream->next_chunk(out); };
    }
};

Source open_source(const Globals &g, const std::string &in_path, const StateOptions &state,
                   const NoiseOptions &noise, const SamplerOptions &sampling) {
    Source src;
    if (!in_path.empty()) {
        if (sampling.count_opt->count() > 0 || noise.given()) {
            throw ConfigError("--in cannot be combined with sampler options (--count, --noise-*)");
        }
        src.reader = std::make_unique<RecordReader>(in_path);
        src.provenance = "file:" + in_path + (src.reader->format() == RecordFormat::csv ? " (csv)" : " (binary)");
        return src;
    }
    if (sampling.count_opt->count() == 0) {
        throw ConfigError("either --in or --count is required");
    }
    src.config = make_sampler(g, state, noise, sampling);
    src.stream = std::make_unique<RecordStream>(*src.config);
    src.provenance = sampler_provenance(g, state, *src.config);
    return src;
}

std::vector<double> parse_grid(const std::string &text, const char *what) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
            grid.push_back(v);
        } catch (const std::logic_error &) {
            throw ConfigError(std::string("invalid value '") + item + "' in " + what);
        }
    }
    if (grid.empty()) {
        throw ConfigError(std::string(what) + " is empty");
    }
    return grid;
}

// generate ------------------------------------------------------------------

struct GenerateCmd {
    StateOptions state;
    NoiseOptions noise;
    SamplerOptions sampling;
    std::string out;
    std::string format = "auto";

    void attach(CLI::App *app) {
        state.attach(app);
        noise.attach(app, true);
        sampling.attach(app);
        sampling.count_opt->required();
        app->add_option("--out", out, "Output record file")->required();
        app->add_option("--format", format, "auto, binary or csv")
            ->check(CLI::IsMember({"auto", "binary", "csv"}))
            ->capture_default_str();
    }

    int run(const Globals &g, std::ostream &os) {
        SamplerConfig config = make_sampler(g, state, noise, sampling);
        fs::path path = output_path(g, out);
        RecordFormat fmt = format == "auto" ? format_for_path(path)
                                            : (format == "csv" ? RecordFormat::csv : RecordFormat::binary);
        std::error_code ec;
        if (path.has_parent_path()) {
            fs::create_directories(path.parent_path(), ec);
        }
        RecordWriter writer(path, fmt);
        RecordStream stream(config);
        std::vector<HeterodyneRecord> chunk;
        while (stream.next_chunk(chunk)) {
            writer.write(chunk);
        }
        writer.close();
        os << "wrote " << writer.written() << " records to " << path.string() << "\n";
        return kExitOk;
    }
};

// distill -------------------------------------------------------------------

struct DistillCmd {
    StateOptions state;
    NoiseOptions noise;
    SamplerOptions sampling;
    std::string in;
    int iterations = 3;
    double t_acc = 1.5;
    double n_bar = 0.0;
    int bootstrap = kDefaultBootstrapResamples;
    std::string bootstrap_mode = "exact";
    std::string report;
    CLI::Option *n_bar_opt = nullptr;

    void attach(CLI::App *app) {
        state.attach(app);
        noise.attach(app, true);
        sampling.attach(app);
        app->add_option("--in", in, "Record file (binary or CSV)");
        app->add_option("--iterations", iterations, "Cascade depth")
            ->check(CLI::Range(1, 10))
            ->capture_default_str();
        auto *t_opt = app->add_option("--t-acc", t_acc, "Hard threshold on |alpha_-| and |beta_-|")
                          ->capture_default_str();
        n_bar_opt = app->add_option("--n-bar", n_bar, "Gaussian acceptance with this thermal photon number");
        t_opt->excludes(n_bar_opt);
        app->add_option("--bootstrap", bootstrap, "Bootstrap resamples per iteration (0 disables)")
            ->check(CLI::Range(0, 100000))
            ->capture_default_str();
        app->add_option("--bootstrap-mode", bootstrap_mode, "exact (keeps survivors) or poisson (streaming)")
            ->check(CLI::IsMember({"exact", "poisson"}))
            ->capture_default_str();
        app->add_option("--report", report, "Report JSON path (stdout if omitted)");
    }

    ConditioningRule rule(const Globals &g) const {
        return n_bar_opt->count() > 0 ? ConditioningRule::gaussian_acceptance(n_bar, g.seed)
                                      : ConditioningRule::hard_threshold(t_acc);
    }

    CascadeOptions options(const Globals &g, const std::string &provenance) const {
        CascadeOptions o;
        o.iterations = iterations;
        o.bootstrap_resamples = bootstrap;
        o.bootstrap_seed = g.seed;
        o.bootstrap_mode = bootstrap_mode == "poisson" ? BootstrapMode::poisson : BootstrapMode::exact;
        o.input_provenance = provenance;
        return o;
    }

    int run(const Globals &g, std::ostream &os) {
        ConditioningRule r = rule(g);
        Source src = open_source(g, in, state, noise, sampling);
        DistillationReport result = run_cascade(src.chunks(), r, options(g, src.provenance));
        std::string json = report_to_json(result, g.deterministic);
        if (report.empty()) {
            os << json;
        } else {
            fs::path path = output_path(g, report);
            write_text(path, json);
            os << "wrote report to " << path.string() << "\n";
        }
        return kExitOk;
    }
};

// sweep ---------------------------------------------------------------------

struct SweepCmd {
    StateOptions state;
    NoiseOptions noise;
    SamplerOptions sampling;
    std::string in;
    int iterations = 3;
    std::string grid = "1.0,1.25,1.5,1.75,2.0";
    std::string n_bar_list = "0";
    int bootstrap = kDefaultBootstrapResamples;
    std::string bootstrap_mode = "exact";
    double beta_rec = 1.0;
    std::string prefix = "sweep";

    void attach(CLI::App *app) {
        state.attach(app);
        noise.attach(app, true);
        sampling.attach(app);
        app->add_option("--in", in, "Record file (binary or CSV); the state options then describe the undiffused input");
        app->add_option("--iterations", iterations, "Cascade depth")->check(CLI::Range(1, 10))->capture_default_str();
        app->add_option("--t-acc-grid", grid, "Comma-separated, strictly increasing thresholds")->capture_default_str();
        app->add_option("--n-bar", n_bar_list, "Comma-separated n_bar values for the asymptote rows")
            ->capture_default_str();
        app->add_option("--bootstrap", bootstrap, "Bootstrap resamples per point (0 disables)")
            ->check(CLI::Range(0, 100000))
            ->capture_default_str();
        app->add_option("--bootstrap-mode", bootstrap_mode, "exact or poisson")
            ->check(CLI::IsMember({"exact", "poisson"}))
            ->capture_default_str();
        app->add_option("--beta-rec", beta_rec, "Reconciliation efficiency for the K columns")->capture_default_str();
        app->add_option("--prefix", prefix, "Output file prefix inside --out-dir")->capture_default_str();
    }

    int run(const Globals &g, std::ostream &os) {
        std::vector<double> t_grid = parse_grid(grid, "--t-acc-grid");
        std::vector<double> n_bars = parse_grid(n_bar_list, "--n-bar");
        if (!(beta_rec > 0.0 && beta_rec <= 1.0)) {
            throw ConfigError("--beta-rec must lie in (0, 1]");
        }
        CovarianceMatrix4 initial = state.resolve();
        Source src = open_source(g, in, state, noise, sampling);
        CascadeOptions options;
        options.iterations = iterations;
        options.bootstrap_resamples = bootstrap;
        options.bootstrap_seed = g.seed;
        options.bootstrap_mode = bootstrap_mode == "poisson" ? BootstrapMode::poisson : BootstrapMode::exact;
        options.input_provenance = src.provenance;
        ThresholdSweep sweep = run_threshold_sweep(src.chunks(), t_grid, options, g.threads);

        // q of the stream: configured, or estimated against the undiffused state.
        double q = 1.0;
        std::string q_source;
        CovarianceMatrix4 reference = initial;
        if (src.config) {
            q = src.config->noise.q();
            q_source = "configured";
            if (src.config->loss) {
                reference = loss_channel(initial, src.config->loss->first, src.config->loss->second);
            }
        } else {
            if (sweep.raw.count() < 2) {
                throw ConfigError("sweep input needs at least two records");
            }
            CovarianceMatrix4 measured = reconstruct_gamma(sweep.raw.covariance());
            q = estimate_q_from_covariances(initial, measured);
            q_source = "estimated from the record covariance against " + state.describe();
        }
        std::vector<SweepRow> asym;
        if (q > 0.0 && q <= 1.0) {
            const double qs[] = {q};
            asym = sweep_asymptote(reference, qs, n_bars, beta_rec, 1);
        }

        const fs::path csv_path = output_path(g, prefix + ".csv");
        const fs::path asym_path = output_path(g, prefix + "_asymptote.csv");
        const fs::path meta_path = output_path(g, prefix + "_meta.json");
        write_text(csv_path, threshold_sweep_csv(sweep, beta_rec));
        write_text(asym_path, sweep_to_csv(asym));

        ordered_json meta;
        meta["schema"] = "emudistill-sweep";
        meta["version"] = 1;
        meta["input_provenance"] = src.provenance;
        meta["records"] = sweep.records;
        meta["seed"] = g.seed;
        meta["iterations"] = iterations;
        meta["t_acc_grid"] = t_grid;
        meta["stream_reuse"] = "every threshold conditions the same record stream";
        meta["q"] = q;
        meta["q_source"] = q_source;
        meta["n_bar"] = n_bars;
        meta["beta_rec"] = beta_rec;
        meta["bootstrap"] = {{"resamples", bootstrap}, {"mode", bootstrap_mode}};
        std::optional<double> cross = crossover_t_acc(sweep);
        meta["crossover_t_acc"] = cross ? ordered_json(*cross) : ordered_json(nullptr);
        ordered_json starved = ordered_json::array();
        for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
            if (sweep.reports[i].starved_at) {
                starved.push_back({{"t_acc", t_grid[i]}, {"starved_at", *sweep.reports[i].starved_at}});
            }
        }
        meta["starved"] = starved;
        meta["files"] = {{"points", csv_path.filename().string()}, {"asymptote", asym_path.filename().string()}};
        if (!g.deterministic && !sweep.reports.empty()) {
            meta["timing"] = {{"wall_seconds", sweep.reports.front().wall_seconds},
                              {"records_per_second", sweep.reports.front().records_per_second}};
        }
        write_text(meta_path, meta.dump(2) + "\n");
        os << "wrote " << csv_path.string() << ", " << asym_path.string() << ", " << meta_path.string() << "\n";
        return kExitOk;
    }
};

// asymptote -----------------------------------------------------------------

struct AsymptoteCmd {
    StateOptions state;
    std::string q_grid;
    int q_points = 200;
    std::string n_bar_list = "0";
    double beta_rec = 1.0;
    std::string out;

    void attach(CLI::App *app) {
        state.attach(app);
        auto *grid_opt = app->add_option("--q-grid", q_grid, "Comma-separated q values in (0, 1]");
        auto *points_opt = app->add_option("--q-points", q_points, "Uniform grid q = i / n, i = 1..n")
                               ->check(CLI::Range(1, 1000000))
                               ->capture_default_str();
        grid_opt->excludes(points_opt);
        app->add_option("--n-bar", n_bar_list, "Comma-separated n_bar values")->capture_default_str();
        app->add_option("--beta-rec", beta_rec, "Reconciliation efficiency")->capture_default_str();
        app->add_option("--out", out, "CSV path (stdout if omitted)");
    }

    int run(const Globals &g, std::ostream &os) {
        std::vector<double> qs;
        if (!q_grid.empty()) {
            qs = parse_grid(q_grid, "--q-grid");
        } else {
            for (int i = 1; i <= q_points; ++i) {
                qs.push_back(static_cast<double>(i) / q_points);
            }
        }
        std::vector<double> n_bars = parse_grid(n_bar_list, "--n-bar");
        if (!(beta_rec > 0.0 && beta_rec <= 1.0)) {
            throw ConfigError("--beta-rec must lie in (0, 1]");
        }
        std::string csv = sweep_to_csv(sweep_asymptote(state.resolve(), qs, n_bars, beta_rec, g.threads));
        if (out.empty()) {
            os << csv;
        } else {
            fs::path path = output_path(g, out);
            write_text(path, csv);
            os << "wrote " << path.string() << "\n";
        }
        return kExitOk;
    }
};

// keyrate -------------------------------------------------------------------

struct KeyrateCmd {
    StateOptions state;
    NoiseOptions noise;
    double n_bar = 0.0;
    double beta_rec = 1.0;
    CLI::Option *n_bar_opt = nullptr;

    void attach(CLI::App *app) {
        state.attach(app);
        noise.attach(app, false);
        n_bar_opt = app->add_option("--n-bar", n_bar, "Evaluate on the distillation asymptote with this n_bar");
        app->add_option("--beta-rec", beta_rec, "Reconciliation efficiency")->capture_default_str();
    }

    int run(const Globals &, std::ostream &os) {
        CovarianceMatrix4 gamma = state.resolve();
        PhaseNoiseModel model = noise.resolve();
        std::string evaluated = "input";
        if (n_bar_opt->count() > 0) {
            gamma = asymptotic_covariance(gamma, model, n_bar);
            evaluated = "asymptote";
        } else if (!model.is_trivial()) {
            gamma = dephase_covariance(gamma, model);
            evaluated = "dephased";
        }
        KeyRateResult k = key_rate(gamma, beta_rec);
        ordered_json j;
        j["state"] = state.describe();
        j["evaluated_on"] = evaluated;
        j["q"] = model.q();
        if (n_bar_opt->count() > 0) {
            j["n_bar"] = n_bar;
        }
        j["beta_rec"] = k.beta_rec;
        j["i_ab"] = k.i_ab;
        j["chi_ae"] = k.chi_ae;
        j["k"] = k.k;
        os << j.dump(2) << "\n";
        return kExitOk;
    }
};

// resources -----------------------------------------------------------------

struct ResourcesCmd {
    int iterations = 3;
    double p = 0.5;

    void attach(CLI::App *app) {
        app->add_option("--iterations", iterations, "Number of distillation steps N")
            ->check(CLI::Range(1, 62))
            ->capture_default_str();
        app->add_option("--p", p, "Per-step success probability P in (0, 1]")->capture_default_str();
    }

    int run(const Globals &, std::ostream &os) {
        const double memoryless = success_probability_model(iterations, p, false);
        const double memory = success_probability_model(iterations, p, true);
        os << "iterations,step_probability,memoryless,with_memory,ratio\n"
           << iterations << ',' << format_number(p) << ',' << format_number(memoryless) << ','
           << format_number(memory) << ',' << format_number(memoryless / memory) << "\n";
        return kExitOk;
    }
};

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Emulated Gaussian entanglement distillation from heterodyne records"};
    app.name(args.empty() ? "emudistill" : fs::path(args.front()).filename().string());
    app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Master seed for sampling, acceptance and bootstrap")->capture_default_str();
    app.add_flag("--deterministic", g.deterministic, "Omit timing fields so reruns are byte-identical");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "Directory for relative output paths")->capture_default_str();

    GenerateCmd generate;
    DistillCmd distill;
    SweepCmd sweep;
    AsymptoteCmd asymptote;
    KeyrateCmd keyrate;
    ResourcesCmd resources;
    auto *gen_app = app.add_subcommand("generate", "Sample heterodyne records to a file");
    auto *distill_app = app.add_subcommand("distill", "Run the distillation cascade and write a JSON report");
    auto *sweep_app = app.add_subcommand("sweep", "Condition one stream at several thresholds");
    auto *asym_app = app.add_subcommand("asymptote", "Tabulate the asymptotic state over q and n_bar");
    auto *key_app = app.add_subcommand("keyrate", "Key rate of a covariance matrix");
    auto *res_app = app.add_subcommand("resources", "Input copies per distilled copy with and without memory");
    generate.attach(gen_app);
    distill.attach(distill_app);
    sweep.attach(sweep_app);
    asymptote.attach(asym_app);
    keyrate.attach(key_app);
    resources.attach(res_app);
    for (CLI::App *sub : {gen_app, distill_app, sweep_app, asym_app, key_app, res_app}) {
        sub->configurable();
    }

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    if (argv.empty()) {
        argv.push_back("emudistill");
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (gen_app->parsed()) {
            return generate.run(g, out);
        }
        if (distill_app->parsed()) {
            return distill.run(g, out);
        }
        if (sweep_app->parsed()) {
            return sweep.run(g, out);
        }
        if (asym_app->parsed()) {
            return asymptote.run(g, out);
        }
        if (key_app->parsed()) {
            return keyrate.run(g, out);
        }
        if (res_app->parsed()) {
            return resources.run(g, out);
        }
    } catch (const emudistill::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PhysicalityError &e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitConfig;
}

}  // namespace emudistill::cli
