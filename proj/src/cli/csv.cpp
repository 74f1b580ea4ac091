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

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "quditpea/cli.hpp"

namespace quditpea::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

CsvError::CsvError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_float(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

CsvTable parse_count_csv(std::string_view text) {
    CsvTable table;
    bool have_header = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        const auto cells = split(line);
        if (!have_header) {
            if (cells.front() != "eigenstate") {
                throw CsvError(line_no, "expected header starting with 'eigenstate'");
            }
            if (cells.size() < 3) throw CsvError(line_no, "need at least two projection columns");
            for (auto c : cells) table.header.emplace_back(c);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw CsvError(line_no, "expected " + std::to_string(table.header.size()) +
                                        " columns, got " + std::to_string(cells.size()));
        }
        std::size_t eigenstate = 0;
        {
            auto [p, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), eigenstate);
            if (ec != std::errc() || p != cells[0].data() + cells[0].size()) {
                throw CsvError(line_no, "eigenstate must be a non-negative integer");
            }
        }
        if (eigenstate != table.rows.size()) {
            throw CsvError(line_no, "eigenstate rows must be 0, 1, 2, ... in order");
        }
        std::vector<double> row;
        for (std::size_t i = 1; i < cells.size(); ++i) {
            double value = 0.0;
            auto [p, ec] = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), value);
            if (cells[i].empty() || ec != std::errc() || p != cells[i].data() + cells[i].size() ||
                !std::isfinite(value) || value < 0.0) {
                throw CsvError(line_no, "column '" + table.header[i] +
                                            "' is not a non-negative number: '" + std::string(cells[i]) + "'");
            }
            if (value != std::floor(value) || cells[i].find_first_of(".eE") != std::string_view::npos) {
                table.integral = false;
            }
            row.push_back(value);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw CsvError(line_no, "missing header row");
    if (table.rows.empty()) throw CsvError(line_no, "no data rows");
    return table;
}

}  // namespace quditpea::cli
