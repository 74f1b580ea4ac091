// Copyright 2026 The quditpea Authors
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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quditpea/cli.hpp"
#include "quditpea/gates.hpp"
#include "quditpea/pea.hpp"

namespace quditpea::cli {
namespace {

using nlohmann::ordered_json;

// JSON numbers carry the same 12 significant digits as the CSV output.
ordered_json num(double v) { return std::stod(format_float(v)); }

ordered_json num_array(const std::vector<double>& values) {
    ordered_json arr = ordered_json::array();
    for (double v : values) arr.push_back(num(v));
    return arr;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Emitter {
  public:
    Emitter(const RunConfig& config, std::string hash) : config_(config), hash_(std::move(hash)) {}

    std::string csv_preamble(const std::vector<std::pair<std::string, std::string>>& extra = {}) const {
        std::string out = "# quditpea " + std::string(mode_name(config_.mode)) + "\n";
        out += "# seed=" + std::to_string(config_.seed) + "\n";
        out += "# config_hash=" + hash_ + "\n";
        for (const auto& [k, v] : extra) out += "# " + k + "=" + v + "\n";
        return out;
    }

    ordered_json json_preamble() const {
        ordered_json j;
        j["mode"] = std::string(mode_name(config_.mode));
        j["seed"] = config_.seed;
        j["config_hash"] = hash_;
        return j;
    }

  private:
    const RunConfig& config_;
    std::string hash_;
};

EomDrive resolved_drive(const RunConfig& config) {
    EomDrive drive = config.drive;
    if (config.drive_auto) {
        drive.modulation_index = equalizing_modulation_index(config.d, config.geometry.sideband_step());
    }
    return drive;
}

std::string header_columns(const std::string& prefix, std::size_t d) {
    std::string out;
    for (std::size_t n = 0; n < d; ++n) out += "," + prefix + std::to_string(n);
    return out;
}

RunResult run_ideal(const RunConfig& config, const Emitter& emit) {
    const UnitaryOp u = diagonal_unitary(config.phases).to_op();
    std::ostringstream csv;
    csv << emit.csv_preamble() << "eigenstate,phase_over_pi" << header_columns("prob", config.d)
        << ",readout,tie\n";
    ordered_json doc = emit.json_preamble();
    doc["rows"] = ordered_json::array();
    std::ostringstream summary;
    for (std::size_t tau = 0; tau < config.d; ++tau) {
        const PeaOutcome out = run_pea(u, QuditState::basis(config.d, tau), config.d);
        const double phase = wrap_phase(config.phases[tau]);
        csv << tau << "," << format_float(phase / kPi);
        for (double p : out.distribution.probs()) csv << "," << format_float(p);
        csv << "," << out.readout_digit << "," << (out.tie ? 1 : 0) << "\n";
        doc["rows"].push_back({{"eigenstate", tau},
                               {"phase_over_pi", num(phase / kPi)},
                               {"distribution", num_array(out.distribution.probs())},
                               {"readout", out.readout_digit},
                               {"tie", out.tie}});
        summary << "eigenstate " << tau << ": readout " << out.readout_digit
                << (out.tie ? " (tie)" : "") << "\n";
    }
    RunResult r;
    r.summary = summary.str();
    if (config.format == OutputFormat::Csv) {
        r.artifacts.push_back({"ideal.csv", csv.str()});
    } else {
        r.artifacts.push_back({"ideal.json", doc.dump(2) + "\n"});
    }
    return r;
}

RunResult run_photonic(const RunConfig& config, const Emitter& emit) {
    const EomDrive drive = resolved_drive(config);
    const CountTable table =
        simulate_counts(config.phases, config.geometry, drive, config.detector, config.seed);

    std::vector<std::optional<NormalizedCounts>> rows;
    std::uint64_t total = 0;
    for (const auto& row : table.counts) {
        std::uint64_t row_total = 0;
        for (auto c : row) row_total += c;
        total += row_total;
        rows.push_back(row_total ? std::optional(normalize(row)) : std::nullopt);
    }
    // A table with no counts at all (flux 0, no dark counts) has no fidelity.
    const bool has_fid = total != 0;
    const double fid = has_fid ? fidelity(table) : 0.0;
    const std::string fid_text = has_fid ? format_float(fid) : "undefined";
    const std::vector<std::pair<std::string, std::string>> meta = {
        {"modulation_index", format_float(drive.modulation_index)},
        {"fidelity", fid_text},
    };

    std::ostringstream counts_csv;
    counts_csv << emit.csv_preamble(meta) << "eigenstate" << header_columns("proj", config.d) << "\n";
    std::ostringstream norm_csv;
    norm_csv << emit.csv_preamble(meta) << "eigenstate" << header_columns("e", config.d)
             << header_columns("se", config.d) << "\n";
    ordered_json doc = emit.json_preamble();
    doc["modulation_index"] = num(drive.modulation_index);
    doc["counts"] = ordered_json::array();
    doc["normalized"] = ordered_json::array();
    for (std::size_t tau = 0; tau < table.counts.size(); ++tau) {
        counts_csv << tau;
        for (auto c : table.counts[tau]) counts_csv << "," << c;
        counts_csv << "\n";
        doc["counts"].push_back(table.counts[tau]);

        norm_csv << tau;
        if (rows[tau]) {
            for (double e : rows[tau]->e) norm_csv << "," << format_float(e);
            for (double s : rows[tau]->std_error) norm_csv << "," << format_float(s);
            doc["normalized"].push_back({{"e", num_array(rows[tau]->e)},
                                         {"std_error", num_array(rows[tau]->std_error)}});
        } else {
            for (std::size_t i = 0; i < 2 * config.d; ++i) norm_csv << ",";
            doc["normalized"].push_back(nullptr);
        }
        norm_csv << "\n";
    }
    doc["fidelity"] = has_fid ? num(fid) : ordered_json(nullptr);

    RunResult r;
    r.summary = "modulation index " + format_float(drive.modulation_index) + " rad, fidelity " +
                fid_text + "\n";
    if (config.format == OutputFormat::Csv) {
        r.artifacts.push_back({"photonic_counts.csv", counts_csv.str()});
        r.artifacts.push_back({"photonic_normalized.csv", norm_csv.str()});
    } else {
        r.artifacts.push_back({"photonic.json", doc.dump(2) + "\n"});
    }
    return r;
}

RunResult run_fit(const RunConfig& config, const Emitter& emit) {
    if (!config.input_path) throw std::invalid_argument("fit: no input file (use --input)");
    const CsvTable table = parse_count_csv(read_file(*config.input_path));
    const std::size_t d = table.header.size() - 1;
    if (config.has_d && d != config.d) {
        throw std::invalid_argument("fit: input has " + std::to_string(d) + " projection columns but d = " +
                                    std::to_string(config.d));
    }

    std::vector<std::optional<double>> truth(table.rows.size());
    const std::vector<double>* source = nullptr;
    if (config.true_phases) {
        source = &*config.true_phases;
    } else if (!config.phases.empty()) {
        source = &config.phases;
    }
    if (source) {
        if (source->size() == 1) {
            std::fill(truth.begin(), truth.end(), source->front());
        } else if (source->size() == table.rows.size()) {
            for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = (*source)[i];
        } else {
            throw std::invalid_argument("fit: " + std::to_string(source->size()) +
                                        " true phases for " + std::to_string(table.rows.size()) + " rows");
        }
    }

    std::ostringstream csv;
    csv << emit.csv_preamble() << "eigenstate,phi_hat,phi_hat_over_pi,residual,true_phase_over_pi,"
                                  "circular_error\n";
    ordered_json doc = emit.json_preamble();
    doc["rows"] = ordered_json::array();
    std::ostringstream summary;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        NormalizedCounts nc;
        if (table.integral) {
            std::vector<std::uint64_t> counts(table.rows[i].begin(), table.rows[i].end());
            nc = normalize(counts);
        } else {
            nc = normalize_weights(table.rows[i]);
        }
        const FitResult fit = mse_fit(nc, truth[i]);
        csv << i << "," << format_float(fit.phi_hat) << "," << format_float(fit.phi_hat / kPi) << ","
            << format_float(fit.residual) << ",";
        ordered_json row = {{"eigenstate", i},
                            {"phi_hat", num(fit.phi_hat)},
                            {"phi_hat_over_pi", num(fit.phi_hat / kPi)},
                            {"residual", num(fit.residual)}};
        if (truth[i]) {
            csv << format_float(wrap_phase(*truth[i]) / kPi) << "," << format_float(*fit.circular_error_fraction);
            row["true_phase_over_pi"] = num(wrap_phase(*truth[i]) / kPi);
            row["circular_error"] = num(*fit.circular_error_fraction);
        } else {
            csv << ",";
        }
        csv << "\n";
        doc["rows"].push_back(row);
        summary << "row " << i << ": phi_hat = " << format_float(fit.phi_hat / kPi) << " pi";
        if (truth[i]) summary << ", error " << format_float(100.0 * *fit.circular_error_fraction) << "%";
        summary << "\n";
    }
    RunResult r;
    r.summary = summary.str();
    if (config.format == OutputFormat::Csv) {
        r.artifacts.push_back({"fit.csv", csv.str()});
    } else {
        r.artifacts.push_back({"fit.json", doc.dump(2) + "\n"});
    }
    return r;
}

RunResult run_iterate(const RunConfig& config, const Emitter& emit) {
    IterativeRequest req;
    req.u_phases = config.phases;
    req.eigenstate = config.eigenstate;
    req.n_digits = config.n_digits;
    req.d = config.d;
    req.backend = config.backend;
    req.seed = config.seed;
    if (config.backend == Backend::Photonic) {
        req.photonic = {config.geometry, resolved_drive(config), config.detector};
    }
    const IterativeResult res = iterative_pea(req);

    std::string digits;
    for (auto a : res.digits) digits += (digits.empty() ? "" : " ") + std::to_string(a);
    const std::vector<std::pair<std::string, std::string>> meta = {
        {"digits", digits},
        {"phase", format_float(res.phase)},
        {"phase_over_pi", format_float(res.phase / kPi)},
        {"tie", res.tie ? "1" : "0"},
    };
    std::ostringstream csv;
    csv << emit.csv_preamble(meta) << "k,x,theta,measured_digit,running_phase,tie\n";
    ordered_json doc = emit.json_preamble();
    doc["records"] = ordered_json::array();
    for (const auto& rec : res.records) {
        csv << rec.k << "," << rec.x << "," << format_float(rec.theta) << "," << rec.measured_digit
            << "," << format_float(rec.running_phase) << "," << (rec.tie ? 1 : 0) << "\n";
        doc["records"].push_back({{"k", rec.k},
                                  {"x", rec.x},
                                  {"theta", num(rec.theta)},
                                  {"measured_digit", rec.measured_digit},
                                  {"running_phase", num(rec.running_phase)},
                                  {"tie", rec.tie}});
    }
    doc["digits"] = res.digits;
    doc["phase"] = num(res.phase);
    doc["tie"] = res.tie;

    RunResult r;
    r.summary = "digits (most significant first): " + digits + "\nphase = " +
                format_float(res.phase / kPi) + " pi" + (res.tie ? " (tie encountered)" : "") + "\n";
    if (config.format == OutputFormat::Csv) {
        r.artifacts.push_back({"iterate.csv", csv.str()});
    } else {
        r.artifacts.push_back({"iterate.json", doc.dump(2) + "\n"});
    }
    return r;
}

RunResult run_curves(const RunConfig& config, const Emitter& emit) {
    const auto rows = curve_table(config.d, config.resolution);
    std::ostringstream csv;
    csv << emit.csv_preamble() << "phi" << header_columns("c", config.d) << "\n";
    ordered_json doc = emit.json_preamble();
    doc["rows"] = ordered_json::array();
    for (const auto& row : rows) {
        csv << format_float(row.phi);
        for (double p : row.probs) csv << "," << format_float(p);
        csv << "\n";
        doc["rows"].push_back({{"phi", num(row.phi)}, {"probs", num_array(row.probs)}});
    }
    RunResult r;
    r.summary = std::to_string(rows.size()) + " curve samples for d = " + std::to_string(config.d) + "\n";
    if (config.format == OutputFormat::Csv) {
        r.artifacts.push_back({"curves.csv", csv.str()});
    } else {
        r.artifacts.push_back({"curves.json", doc.dump(2) + "\n"});
    }
    return r;
}

}  // namespace

RunResult execute(const RunConfig& config) {
    const Emitter emit(config, config_hash(config));
    switch (config.mode) {
        case Mode::Ideal:
            return run_ideal(config, emit);
        case Mode::Photonic:
            return run_photonic(config, emit);
        case Mode::Fit:
            return run_fit(config, emit);
        case Mode::Iterate:
            return run_iterate(config, emit);
        case Mode::Curves:
            return run_curves(config, emit);
    }
    throw std::logic_error("unknown mode");
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<fs::path> staged;
    try {
        for (const auto& a : artifacts) {
            fs::path tmp = dir / (a.filename + ".partial");
            staged.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << a.content;
            out.close();
            if (!out) throw std::runtime_error("failed writing " + tmp.string());
        }
        for (std::size_t i = 0; i < artifacts.size(); ++i) {
            fs::rename(staged[i], dir / artifacts[i].filename);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : staged) fs::remove(p, ec);
        throw;
    }
}

std::filesystem::path resolve_output_dir(const RunConfig& config,
                                         const std::optional<std::string>& cli_output) {
    if (cli_output) return *cli_output;
    if (config.output_dir) return *config.output_dir;
    if (const char* env = std::getenv("QUDITPEA_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

}  // namespace quditpea::cli
