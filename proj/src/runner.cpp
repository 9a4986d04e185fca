// Copyright 2026 The qnnmi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qnnmi/runner.hpp"

#include "qnnmi/csv.hpp"
#include "qnnmi/errors.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>
#include <toml.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qnnmi {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

namespace {

void reject_unknown_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    if (!obj.is_object()) {
        throw ConfigError(where + " must be a table");
    }
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read_if(const json &obj, const char *key, T &dst, const std::string &where) {
    if (!obj.contains(key)) {
        return;
    }
    try {
        dst = obj.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

}  // namespace

void RunConfig::validate() const {
    try {
        dataset.validate();
    } catch (const std::logic_error &e) {
        throw ConfigError(std::string("dataset: ") + e.what());
    }
    if (dataset.n != ansatz.n) {
        throw ConfigError("dataset.n and ansatz.n differ");
    }
    try {
        ansatz.validate();
    } catch (const std::logic_error &e) {
        throw ConfigError(std::string("ansatz: ") + e.what());
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("dataset.train_fraction must be in (0, 1)");
    }
    if (training.epochs < 1) {
        throw ConfigError("training.epochs must be >= 1");
    }
    if (!(training.learning_rate > 0.0) || !std::isfinite(training.learning_rate)) {
        throw ConfigError("training.learning_rate must be positive");
    }
    if (!(training.dtheta > 0.0) || !std::isfinite(training.dtheta)) {
        throw ConfigError("training.dtheta must be positive");
    }
    if (runs < 1) {
        throw ConfigError("runs must be >= 1");
    }
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
    if (out_dir.empty()) {
        throw ConfigError("out must not be empty");
    }
}

json RunConfig::to_json() const {
    return {{"runs", runs},
            {"base_seed", base_seed},
            {"out", out_dir},
            {"workers", workers},
            {"dataset",
             {{"name", dataset_name(dataset.name)},
              {"path", dataset.path},
              {"encoding", encoding_name(dataset.encoding)},
              {"train_fraction", train_fraction}}},
            {"ansatz", {{"n", ansatz.n}, {"l", ansatz.l}, {"measured_qubit", ansatz.measured_qubit}}},
            {"training",
             {{"epochs", training.epochs},
              {"learning_rate", training.learning_rate},
              {"gradient", gradient_name(training.gradient)},
              {"dtheta", training.dtheta},
              {"backend", kernels::backend_name(training.backend)}}}};
}

RunConfig RunConfig::from_json(const json &j, const fs::path &base_dir) {
    reject_unknown_keys(j, {"runs", "base_seed", "out", "workers", "dataset", "ansatz", "training"}, "config");
    RunConfig c;
    read_if(j, "runs", c.runs, "config");
    read_if(j, "base_seed", c.base_seed, "config");
    read_if(j, "out", c.out_dir, "config");
    read_if(j, "workers", c.workers, "config");

    if (!j.contains("dataset")) {
        throw ConfigError("missing [dataset] section");
    }
    const auto &d = j.at("dataset");
    reject_unknown_keys(d, {"name", "path", "encoding", "train_fraction"}, "dataset");
    std::string name;
    std::string path;
    read_if(d, "name", name, "dataset");
    read_if(d, "path", path, "dataset");
    if (name.empty() || path.empty()) {
        throw ConfigError("dataset.name and dataset.path are required");
    }
    try {
        c.dataset = DatasetSpec::standard(parse_dataset(name), path);
        if (d.contains("encoding")) {
            std::string enc;
            read_if(d, "encoding", enc, "dataset");
            c.dataset.encoding = parse_encoding(enc);
        }
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("dataset: ") + e.what());
    }
    if (fs::path(c.dataset.path).is_relative() && !base_dir.empty()) {
        c.dataset.path = (base_dir / c.dataset.path).lexically_normal().string();
    }
    read_if(d, "train_fraction", c.train_fraction, "dataset");

    if (j.contains("ansatz")) {
        const auto &a = j.at("ansatz");
        reject_unknown_keys(a, {"n", "l", "measured_qubit"}, "ansatz");
        read_if(a, "n", c.ansatz.n, "ansatz");
        read_if(a, "l", c.ansatz.l, "ansatz");
        read_if(a, "measured_qubit", c.ansatz.measured_qubit, "ansatz");
    }
    c.dataset.n = c.ansatz.n;

    if (j.contains("training")) {
        const auto &t = j.at("training");
        reject_unknown_keys(t, {"epochs", "learning_rate", "gradient", "dtheta", "backend"}, "training");
        read_if(t, "epochs", c.training.epochs, "training");
        read_if(t, "learning_rate", c.training.learning_rate, "training");
        read_if(t, "dtheta", c.training.dtheta, "training");
        try {
            if (t.contains("gradient")) {
                std::string g;
                read_if(t, "gradient", g, "training");
                c.training.gradient = parse_gradient(g);
            }
            if (t.contains("backend")) {
                std::string b;
                read_if(t, "backend", b, "training");
                c.training.backend = kernels::parse_backend(b);
            }
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("training: ") + e.what());
        }
    }
    c.validate();
    return c;
}

RunConfig load_config(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    const auto base_dir = path.parent_path();
    const auto ext = path.extension().string();
    if (ext == ".json") {
        json j;
        try {
            in >> j;
        } catch (const json::parse_error &e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
        return RunConfig::from_json(j, base_dir);
    }
    if (ext == ".toml") {
        toml::table table;
        try {
            table = toml::parse(in, path.string());
        } catch (const toml::parse_error &e) {
            std::ostringstream msg;
            msg << path.string() << ":" << e.source().begin.line << ": " << e.description();
            throw ConfigError(msg.str());
        }
        std::ostringstream as_json;
        as_json << toml::json_formatter{table};
        return RunConfig::from_json(json::parse(as_json.str()), base_dir);
    }
    throw ConfigError("config must be .toml or .json: '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Runs

RunResult run_single(const RunConfig &config, const Dataset &data, std::uint64_t seed) {
    const auto parts = split(data.samples, config.train_fraction, seed);
    const auto prepared = prepare(parts, EncodingSpec{config.dataset.encoding, config.dataset.n});
    const auto circuit = build_brickwall(config.ansatz);

    auto tc = config.training;
    tc.seed = seed;
    RunResult out;
    out.seed = seed;
    out.trace = train(prepared.train, circuit, config.ansatz.measured_qubit, tc);

    std::vector<std::vector<double>> snapshots;
    snapshots.reserve(out.trace.epochs.size());
    for (const auto &rec : out.trace.epochs) {
        snapshots.push_back(rec.theta_snapshot);
    }
    const SubsystemPartition partition(config.ansatz.n, {config.ansatz.measured_qubit});
    out.mi = mi_trace(snapshots, circuit, partition);
    for (std::size_t k = 0; k < out.mi.size(); ++k) {
        out.mi[k].epoch = out.trace.epochs[k].epoch;
    }
    out.eval_final = score(prepared.eval, circuit, config.ansatz.measured_qubit, snapshots.back(), tc.backend);
    return out;
}

std::vector<std::string> trace_columns(const AnsatzSpec &ansatz) {
    std::vector<std::string> cols{"loss", "accuracy", "I_Di_Mo", "I_Mi_Mo"};
    const auto per = per_qubit_columns(SubsystemPartition(ansatz.n, {ansatz.measured_qubit}));
    cols.insert(cols.end(), per.begin(), per.end());
    return cols;
}

std::vector<std::vector<double>> trace_rows(const RunResult &run) {
    std::vector<std::vector<double>> rows;
    rows.reserve(run.trace.epochs.size());
    for (std::size_t k = 0; k < run.trace.epochs.size(); ++k) {
        const auto &e = run.trace.epochs[k];
        const auto &m = run.mi.at(k);
        std::vector<double> row{e.mean_loss, e.train_accuracy, clamp_mi(m.i_di_mo), clamp_mi(m.i_mi_mo)};
        for (const double v : m.per_qubit) {
            row.push_back(clamp_mi(v));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::size_t AggregateTrace::column(const std::string &name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw std::out_of_range("no column '" + name + "'");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> AggregateTrace::mean_series(const std::string &name) const {
    const auto c = column(name);
    std::vector<double> out;
    out.reserve(mean.size());
    for (const auto &row : mean) {
        out.push_back(row.at(c));
    }
    return out;
}

AggregateTrace aggregate(std::span<const RunResult> runs) {
    if (runs.empty()) {
        throw std::invalid_argument("aggregate: no runs");
    }
    AggregateTrace agg;
    const std::size_t n_epochs = runs.front().trace.epochs.size();
    for (const auto &r : runs) {
        if (r.trace.epochs.size() != n_epochs || r.mi.size() != n_epochs) {
            throw std::invalid_argument("aggregate: runs have different lengths");
        }
    }
    const std::size_t per_qubit = runs.front().mi.empty() ? 0 : runs.front().mi.front().per_qubit.size();
    agg.columns = {"loss", "accuracy", "I_Di_Mo", "I_Mi_Mo"};
    for (std::size_t k = 0; k < per_qubit; ++k) {
        agg.columns.push_back("I_Di" + std::to_string(k + 1) + "_Mo");
    }
    const std::size_t n_cols = agg.columns.size();
    agg.runs = runs.size();
    agg.mean.assign(n_epochs, std::vector<double>(n_cols, 0.0));
    std::vector<std::vector<double>> m2(n_epochs, std::vector<double>(n_cols, 0.0));
    for (const auto &rec : runs.front().trace.epochs) {
        agg.epochs.push_back(rec.epoch);
    }

    std::size_t count = 0;
    for (const auto &run : runs) {
        ++count;
        const auto rows = trace_rows(run);
        for (std::size_t e = 0; e < n_epochs; ++e) {
            if (rows[e].size() != n_cols) {
                throw std::invalid_argument("aggregate: runs have different column counts");
            }
            for (std::size_t c = 0; c < n_cols; ++c) {
                const double x = rows[e][c];
                const double delta = x - agg.mean[e][c];
                agg.mean[e][c] += delta / static_cast<double>(count);
                m2[e][c] += delta * (x - agg.mean[e][c]);
            }
        }
    }
    agg.std.assign(n_epochs, std::vector<double>(n_cols, 0.0));
    for (std::size_t e = 0; e < n_epochs; ++e) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            agg.std[e][c] = std::sqrt(std::max(m2[e][c], 0.0) / static_cast<double>(count));
        }
    }
    return agg;
}

// ---------------------------------------------------------------------------
// Files

std::string run_csv(const RunResult &run, const AnsatzSpec &ansatz) {
    std::vector<std::string> header{"epoch"};
    const auto cols = trace_columns(ansatz);
    header.insert(header.end(), cols.begin(), cols.end());
    std::string out = csv::join(header) + "\n";
    const auto rows = trace_rows(run);
    for (std::size_t e = 0; e < rows.size(); ++e) {
        std::vector<std::string> fields{std::to_string(run.trace.epochs[e].epoch)};
        for (const double v : rows[e]) {
            fields.push_back(csv::format_double(v));
        }
        out += csv::join(fields) + "\n";
    }
    return out;
}

std::string theta_csv(const RunResult &run) {
    const std::size_t p = run.trace.epochs.empty() ? 0 : run.trace.epochs.front().theta_snapshot.size();
    std::vector<std::string> header{"epoch"};
    for (std::size_t j = 0; j < p; ++j) {
        header.push_back("t" + std::to_string(j));
    }
    std::string out = csv::join(header) + "\n";
    for (const auto &e : run.trace.epochs) {
        std::vector<std::string> fields{std::to_string(e.epoch)};
        for (const double v : e.theta_snapshot) {
            fields.push_back(csv::format_double(v));
        }
        out += csv::join(fields) + "\n";
    }
    return out;
}

std::string aggregate_csv(const AggregateTrace &agg) {
    std::vector<std::string> header{"epoch"};
    for (const auto &c : agg.columns) {
        header.push_back(c + "_mean");
        header.push_back(c + "_std");
    }
    std::string out = csv::join(header) + "\n";
    for (std::size_t e = 0; e < agg.epochs.size(); ++e) {
        std::vector<std::string> fields{std::to_string(agg.epochs[e])};
        for (std::size_t c = 0; c < agg.columns.size(); ++c) {
            fields.push_back(csv::format_double(agg.mean[e][c]));
            fields.push_back(csv::format_double(agg.std[e][c]));
        }
        out += csv::join(fields) + "\n";
    }
    return out;
}

namespace {

std::vector<std::vector<double>> parse_numeric_rows(const std::vector<std::string> &lines, std::size_t width,
                                                    const std::string &origin) {
    std::vector<std::vector<double>> rows;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const auto text = csv::trim(lines[ln]);
        if (text.empty()) {
            continue;
        }
        const auto fields = csv::split_line(text);
        if (fields.size() != width) {
            throw DataError(origin + ":" + std::to_string(ln + 1) + ": expected " + std::to_string(width) +
                            " fields");
        }
        std::vector<double> row;
        for (const auto f : fields) {
            const auto v = csv::parse_double(f);
            if (!v) {
                throw DataError(origin + ":" + std::to_string(ln + 1) + ": malformed value '" + std::string(f) +
                                "'");
            }
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> split_text_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    return lines;
}

AggregateTrace parse_aggregate_lines(const std::vector<std::string> &lines, const std::string &origin) {
    if (lines.empty()) {
        throw DataError(origin + ": empty aggregate file");
    }
    const auto header = csv::split_line(lines.front());
    if (header.empty() || header.front() != "epoch" || header.size() % 2 != 1) {
        throw DataError(origin + ":1: not an aggregate header");
    }
    AggregateTrace agg;
    for (std::size_t i = 1; i < header.size(); i += 2) {
        const std::string m(header[i]);
        const std::string s(header[i + 1]);
        if (m.size() < 6 || m.substr(m.size() - 5) != "_mean" || s != m.substr(0, m.size() - 5) + "_std") {
            throw DataError(origin + ":1: unexpected columns '" + m + "', '" + s + "'");
        }
        agg.columns.push_back(m.substr(0, m.size() - 5));
    }
    for (const auto &row : parse_numeric_rows(lines, header.size(), origin)) {
        agg.epochs.push_back(static_cast<int>(row[0]));
        std::vector<double> mean;
        std::vector<double> sd;
        for (std::size_t i = 1; i < row.size(); i += 2) {
            mean.push_back(row[i]);
            sd.push_back(row[i + 1]);
        }
        agg.mean.push_back(std::move(mean));
        agg.std.push_back(std::move(sd));
    }
    return agg;
}

}  // namespace

AggregateTrace parse_aggregate_csv(const std::string &text) {
    return parse_aggregate_lines(split_text_lines(text), "<aggregate>");
}

AggregateTrace read_aggregate_csv(const fs::path &path) {
    return parse_aggregate_lines(csv::read_lines(path.string()), path.string());
}

std::vector<double> read_theta_snapshot(const fs::path &path, int epoch) {
    const auto lines = csv::read_lines(path.string());
    if (lines.empty()) {
        throw DataError(path.string() + ": empty theta file");
    }
    const auto width = csv::split_line(lines.front()).size();
    const auto rows = parse_numeric_rows(lines, width, path.string());
    if (rows.empty()) {
        throw DataError(path.string() + ": no snapshots");
    }
    if (epoch < 0) {
        return {rows.back().begin() + 1, rows.back().end()};
    }
    for (const auto &row : rows) {
        if (static_cast<int>(row[0]) == epoch) {
            return {row.begin() + 1, row.end()};
        }
    }
    throw DataError(path.string() + ": no snapshot for epoch " + std::to_string(epoch));
}

namespace {

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw DataError("write failed for '" + path.string() + "'");
    }
}

std::string sha256_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 15> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md.data(), &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return hex.str();
}

std::string git_describe(const fs::path &dir) {
    const std::string cmd = "git -C '" + dir.string() + "' describe --always --dirty 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return "";
    }
    std::string out;
    std::array<char, 256> buf{};
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) {
        out += buf.data();
    }
    pclose(pipe);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) {
        out.pop_back();
    }
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

[[noreturn]] void rethrow_with_seed(const std::exception_ptr &err, std::uint64_t seed) {
    const std::string prefix = "run with seed " + std::to_string(seed) + " failed: ";
    try {
        std::rethrow_exception(err);
    } catch (const NumericalError &e) {
        throw NumericalError(prefix + e.what());
    } catch (const DataError &e) {
        throw DataError(prefix + e.what());
    } catch (const ConfigError &e) {
        throw ConfigError(prefix + e.what());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(prefix + e.what());
    } catch (const std::exception &e) {
        throw NumericalError(prefix + e.what());
    }
}

}  // namespace

std::vector<RunResult> run_seeds(const RunConfig &config, const Dataset &data,
                                 std::span<const std::uint64_t> seeds) {
    const auto n = static_cast<std::ptrdiff_t>(seeds.size());
    std::vector<RunResult> results(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers) if (config.workers > 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = run_single(config, data, seeds[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (errors[i]) {
            rethrow_with_seed(errors[i], seeds[i]);
        }
    }
    return results;
}

ExperimentResult run_experiment(const RunConfig &config) {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(config.runs));
    std::iota(seeds.begin(), seeds.end(), config.base_seed);
    return run_experiment(config, seeds);
}

ExperimentResult run_experiment(const RunConfig &config, std::span<const std::uint64_t> seeds) {
    config.validate();
    if (seeds.empty()) {
        throw ConfigError("no seeds to run");
    }
    const auto started = std::chrono::steady_clock::now();
    const auto started_at = utc_timestamp();
    const auto data = load_dataset(config.dataset);
    const fs::path out_dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw DataError("cannot create '" + out_dir.string() + "': " + ec.message());
    }
    const auto marker = out_dir / ".partial";
    write_text(marker, "started " + started_at + "\n");

    ExperimentResult result;
    result.load_report = data.report;
    result.runs = run_seeds(config, data, seeds);
    for (const auto &run : result.runs) {
        write_text(out_dir / ("run_" + std::to_string(run.seed) + ".csv"), run_csv(run, config.ansatz));
        write_text(out_dir / ("theta_" + std::to_string(run.seed) + ".csv"), theta_csv(run));
    }
    result.aggregate = aggregate(result.runs);
    write_text(out_dir / "aggregate.csv", aggregate_csv(result.aggregate));
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const fs::path data_path(config.dataset.path);
    json eval_scores = json::array();
    for (const auto &run : result.runs) {
        eval_scores.push_back(
            {{"seed", run.seed}, {"eval_loss", run.eval_final.mean_loss}, {"eval_accuracy", run.eval_final.accuracy}});
    }
    const json manifest = {
        {"config", config.to_json()},
        {"seeds", std::vector<std::uint64_t>(seeds.begin(), seeds.end())},
        {"dataset", data.report.to_json()},
        {"fixture_sha256", sha256_file(data_path)},
        {"fixture_git_describe", git_describe(data_path.parent_path().empty() ? fs::path(".") : data_path.parent_path())},
        {"circuit", to_json(build_brickwall(config.ansatz))},
        {"started_at", started_at},
        {"wall_seconds", result.wall_seconds},
        {"threads", kernels::max_threads()},
        {"eval", eval_scores}};
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
    fs::remove(marker, ec);
    return result;
}

// ---------------------------------------------------------------------------
// Trends

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window == 0 || series.size() < window) {
        return {};
    }
    std::vector<double> out;
    out.reserve(series.size() - window + 1);
    for (std::size_t i = 0; i + window <= series.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < window; ++k) {
            s += series[i + k];
        }
        out.push_back(s / static_cast<double>(window));
    }
    return out;
}

bool non_increasing(std::span<const double> series) {
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] > series[i - 1]) {
            return false;
        }
    }
    return true;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_with_index(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) {
        throw std::invalid_argument("spearman: need at least two points");
    }
    const auto rx = average_ranks(series);
    const double mean = 0.5 * static_cast<double>(n + 1);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = rx[i] - mean;
        const double b = static_cast<double>(i + 1) - mean;
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if (sxx == 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

TrendReport summarize(const AggregateTrace &agg, double two_phase_threshold) {
    if (agg.mean.size() < 3) {
        throw std::invalid_argument("summarize: need at least 3 epochs");
    }
    const auto di = agg.mean_series("I_Di_Mo");
    const auto mi = agg.mean_series("I_Mi_Mo");
    const auto loss = agg.mean_series("loss");
    const std::size_t last = di.size() - 1;

    TrendReport r;
    r.epochs = di.size();
    r.initial_i_di_mo = di.front();
    r.final_i_di_mo = di.back();
    r.delta_i_di_mo = di.back() - di.front();
    r.spearman_i_di_mo = spearman_with_index(di);

    const auto peak = static_cast<std::size_t>(std::max_element(mi.begin(), mi.end()) - mi.begin());
    r.peak_epoch_i_mi_mo = agg.epochs.at(peak);
    r.peak_i_mi_mo = mi[peak];
    r.final_i_mi_mo = mi.back();
    r.drop_i_mi_mo = mi[peak] - mi.back();
    r.two_phase = peak > 0 && peak < last && r.drop_i_mi_mo > two_phase_threshold;

    r.initial_loss = loss.front();
    r.final_loss = loss.back();
    r.delta_loss = loss.back() - loss.front();
    const auto smooth = moving_average(loss, kLossSmoothingWindow);
    r.loss_monotone_smoothed = !smooth.empty() && non_increasing(smooth);

    const auto acc = std::find(agg.columns.begin(), agg.columns.end(), "accuracy");
    if (acc != agg.columns.end()) {
        r.final_accuracy = agg.mean.back()[static_cast<std::size_t>(acc - agg.columns.begin())];
    }
    for (std::size_t c = 0; c < agg.columns.size(); ++c) {
        const auto &name = agg.columns[c];
        if (name.starts_with("I_Di") && name != "I_Di_Mo") {
            r.per_qubit_sum_final += agg.mean.back()[c];
        }
    }
    return r;
}

json TrendReport::to_json() const {
    return {{"epochs", epochs},
            {"initial_I_Di_Mo", initial_i_di_mo},
            {"final_I_Di_Mo", final_i_di_mo},
            {"delta_I_Di_Mo", delta_i_di_mo},
            {"spearman_I_Di_Mo", spearman_i_di_mo},
            {"peak_epoch_I_Mi_Mo", peak_epoch_i_mi_mo},
            {"peak_I_Mi_Mo", peak_i_mi_mo},
            {"final_I_Mi_Mo", final_i_mi_mo},
            {"drop_I_Mi_Mo", drop_i_mi_mo},
            {"two_phase", two_phase},
            {"initial_loss", initial_loss},
            {"final_loss", final_loss},
            {"delta_loss", delta_loss},
            {"loss_monotone_smoothed", loss_monotone_smoothed},
            {"final_accuracy", final_accuracy},
            {"per_qubit_sum_final", per_qubit_sum_final}};
}

std::string TrendReport::to_text() const {
    std::ostringstream s;
    s << std::setprecision(6);
    s << "epochs                 " << epochs << "\n"
      << "I(Di:Mo)               " << initial_i_di_mo << " -> " << final_i_di_mo << " (delta " << delta_i_di_mo
      << ", spearman " << spearman_i_di_mo << ")\n"
      << "I(Mi:Mo) peak          " << peak_i_mi_mo << " at epoch " << peak_epoch_i_mi_mo << ", final "
      << final_i_mi_mo << " (drop " << drop_i_mi_mo << ")\n"
      << "two-phase              " << (two_phase ? "yes" : "no") << "\n"
      << "loss                   " << initial_loss << " -> " << final_loss << " (smoothed monotone "
      << (loss_monotone_smoothed ? "yes" : "no") << ")\n"
      << "train accuracy         " << final_accuracy << "\n"
      << "sum_k I(Di_k:Mo)       " << per_qubit_sum_final << "\n";
    return s.str();
}

}  // namespace qnnmi
