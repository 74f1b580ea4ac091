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

#pragma once

/// \file cli.hpp
/// \brief Run configuration, file formats and the mode runner behind the
/// `quditpea` command.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quditpea/estimate.hpp"
#include "quditpea/photonic.hpp"

namespace quditpea::cli {

enum class Mode { Ideal, Photonic, Fit, Iterate, Curves };
enum class OutputFormat { Csv, Json };

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

/// Validation failure that points at a config location.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string source, int line, std::string key, const std::string& message);

    const std::string& source() const noexcept { return source_; }
    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

  private:
    std::string source_;
    int line_;
    std::string key_;
};

/// Malformed CSV input; carries the 1-based line.
class CsvError : public std::runtime_error {
  public:
    CsvError(int line, const std::string& message);
    int line() const noexcept { return line_; }

  private:
    int line_;
};

struct RunConfig {
    Mode mode = Mode::Ideal;
    std::size_t d = 3;
    bool has_d = false;
    std::string unitary_name;
    std::vector<double> phases;  // rad

    PhotonicGeometry geometry;
    EomDrive drive;
    /// Drive at the equalization root instead of drive.modulation_index.
    bool drive_auto = true;
    DetectorModel detector;

    std::size_t n_digits = 1;
    std::size_t eigenstate = 0;
    Backend backend = Backend::Ideal;

    std::size_t resolution = 361;

    std::optional<std::string> input_path;
    std::optional<std::vector<double>> true_phases;

    std::uint64_t seed = 0;
    std::optional<std::string> output_dir;
    OutputFormat format = OutputFormat::Csv;
};

/// Parses "0.351 pi", "2/3 pi", "-pi", "1.5" (radians) and friends.
double parse_phase_literal(std::string_view text);
/// Comma-separated list of phase literals.
std::vector<double> parse_phase_list(std::string_view text);

/// Validates JSON config text for `mode`. Unknown keys, missing blocks and
/// bad values raise ConfigError naming the key and its line.
RunConfig parse_config_text(std::string_view text, Mode mode, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& file, Mode mode);

/// FNV-1a over a canonical serialization of the semantic fields (everything
/// except seed, output directory and format).
std::string config_hash(const RunConfig& config);

/// Numeric table read from CSV: optional '#' comment lines, a header whose
/// first column is "eigenstate", then one row per eigenstate.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;  // without the eigenstate column
    bool integral = true;
};

CsvTable parse_count_csv(std::string_view text);

/// "%.12g"
std::string format_float(double value);

struct Artifact {
    std::string filename;
    std::string content;
};

struct RunResult {
    std::vector<Artifact> artifacts;
    std::string summary;  // human-readable, printed to stdout
};

/// Runs one mode fully in memory.
RunResult execute(const RunConfig& config);

/// Writes every artifact to a temporary sibling first and renames once all
/// writes succeeded; on failure no partial files remain.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

/// --output, then config output.dir, then $QUDITPEA_OUTPUT_DIR, then ".".
std::filesystem::path resolve_output_dir(const RunConfig& config,
                                         const std::optional<std::string>& cli_output);

}  // namespace quditpea::cli
