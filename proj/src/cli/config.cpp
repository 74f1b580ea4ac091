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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "quditpea/cli.hpp"

namespace quditpea::cli {
namespace {

using nlohmann::json;

// Line of every key in a JSON document, addressed by JSON pointer
// ("" is the root object, "/geometry/dispersion" a nested key). The text
// must already have parsed cleanly.
class KeyLocator {
  public:
    explicit KeyLocator(std::string_view text) { scan(text); }

    int line_of(const std::string& pointer) const {
        auto it = lines_.find(pointer);
        return it == lines_.end() ? 1 : it->second;
    }

  private:
    struct Frame {
        bool is_object;
        std::string pointer;
        std::size_t index = 0;
        bool expect_key = true;
    };

    void scan(std::string_view text) {
        int line = 1;
        std::vector<Frame> stack;
        std::string pending;  // pointer of the value about to start
        bool have_pending = false;
        lines_[""] = 1;

        auto value_pointer = [&]() -> std::string {
            if (have_pending) return pending;
            if (!stack.empty() && !stack.back().is_object) {
                return stack.back().pointer + "/" + std::to_string(stack.back().index);
            }
            return "";
        };

        for (std::size_t i = 0; i < text.size(); ++i) {
            const char ch = text[i];
            if (ch == '\n') {
                ++line;
                continue;
            }
            if (ch == '"') {
                std::string s;
                for (++i; i < text.size() && text[i] != '"'; ++i) {
                    if (text[i] == '\\' && i + 1 < text.size()) {
                        ++i;
                        s += text[i];
                    } else {
                        s += text[i];
                    }
                }
                if (!stack.empty() && stack.back().is_object && stack.back().expect_key) {
                    pending = stack.back().pointer + "/" + escape(s);
                    have_pending = true;
                    lines_[pending] = line;
                    stack.back().expect_key = false;
                } else {
                    have_pending = false;
                }
                continue;
            }
            if (ch == '{' || ch == '[') {
                std::string ptr = value_pointer();
                if (!lines_.count(ptr)) lines_[ptr] = line;
                stack.push_back({ch == '{', ptr});
                have_pending = false;
                continue;
            }
            if (ch == '}' || ch == ']') {
                if (!stack.empty()) stack.pop_back();
                have_pending = false;
                continue;
            }
            if (ch == ',') {
                if (!stack.empty()) {
                    if (stack.back().is_object) {
                        stack.back().expect_key = true;
                    } else {
                        ++stack.back().index;
                    }
                }
                have_pending = false;
            }
        }
    }

    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') {
                out += "~0";
            } else if (c == '/') {
                out += "~1";
            } else {
                out += c;
            }
        }
        return out;
    }

    std::map<std::string, int> lines_;
};

std::string display_key(const std::string& pointer) {
    if (pointer.empty()) return "<root>";
    std::string out = pointer.substr(1);
    std::replace(out.begin(), out.end(), '/', '.');
    return out;
}

class Validator {
  public:
    Validator(std::string_view text, std::string source) : locator_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        throw ConfigError(source_, locator_.line_of(pointer), display_key(pointer), message);
    }

    void allow_keys(const json& obj, const std::string& pointer, std::set<std::string> allowed) const {
        if (!obj.is_object()) fail(pointer, "expected an object");
        for (const auto& [key, value] : obj.items()) {
            if (!allowed.count(key)) fail(pointer + "/" + key, "unknown key '" + key + "'");
        }
    }

    const json& require(const json& obj, const std::string& pointer, const std::string& key) const {
        if (!obj.contains(key)) fail(pointer, "missing required key '" + key + "'");
        return obj.at(key);
    }

    double number(const json& v, const std::string& pointer) const {
        if (!v.is_number()) fail(pointer, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(pointer, "expected a finite number");
        return x;
    }

    double nonnegative(const json& v, const std::string& pointer) const {
        const double x = number(v, pointer);
        if (x < 0.0) fail(pointer, "must be >= 0");
        return x;
    }

    std::uint64_t unsigned_integer(const json& v, const std::string& pointer) const {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<std::int64_t>() < 0)) {
            fail(pointer, "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(const json& v, const std::string& pointer) const {
        if (!v.is_string()) fail(pointer, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> phases(const json& v, const std::string& pointer) const {
        try {
            if (v.is_string()) return parse_phase_list(v.get<std::string>());
            if (v.is_array()) {
                std::vector<double> out;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const std::string ptr = pointer + "/" + std::to_string(i);
                    if (v[i].is_number()) {
                        out.push_back(number(v[i], ptr));
                    } else if (v[i].is_string()) {
                        try {
                            out.push_back(parse_phase_literal(v[i].get<std::string>()));
                        } catch (const std::invalid_argument& e) {
                            fail(ptr, e.what());
                        }
                    } else {
                        fail(ptr, "expected a number or a phase string");
                    }
                }
                return out;
            }
        } catch (const std::invalid_argument& e) {
            fail(pointer, e.what());
        }
        fail(pointer, "expected a phase list (string or array)");
    }

  private:
    KeyLocator locator_;
    std::string source_;
};

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_plain_number(std::string_view s, std::string_view whole) {
    s = trim(s);
    double value = 0.0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    if (!s.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (s.empty() || ec != std::errc() || ptr != end) {
        throw std::invalid_argument("cannot parse phase '" + std::string(whole) + "'");
    }
    return value;
}

void append(std::string& out, const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.17g;", key, v);
    out += buf;
}

void append(std::string& out, const char* key, std::uint64_t v) {
    out += key;
    out += "=" + std::to_string(v) + ";";
}

}  // namespace

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::Ideal:
            return "ideal";
        case Mode::Photonic:
            return "photonic";
        case Mode::Fit:
            return "fit";
        case Mode::Iterate:
            return "iterate";
        case Mode::Curves:
            return "curves";
    }
    return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) {
    for (Mode m : {Mode::Ideal, Mode::Photonic, Mode::Fit, Mode::Iterate, Mode::Curves}) {
        if (mode_name(m) == name) return m;
    }
    return std::nullopt;
}

ConfigError::ConfigError(std::string source, int line, std::string key, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": key '" + key + "': " + message),
      source_(std::move(source)),
      line_(line),
      key_(std::move(key)) {}

double parse_phase_literal(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty phase literal");

    bool has_pi = false;
    std::string lowered(s);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string_view body = lowered;
    for (std::string_view suffix : {"*pi", "pi", "\xcf\x80"}) {
        if (body.size() >= suffix.size() && body.substr(body.size() - suffix.size()) == suffix) {
            body.remove_suffix(suffix.size());
            has_pi = true;
            break;
        }
    }
    body = trim(body);
    if (!body.empty() && body.back() == '*') body = trim(body.substr(0, body.size() - 1));

    double value = 1.0;
    if (body.empty() || body == "+" || body == "-") {
        if (!has_pi) throw std::invalid_argument("cannot parse phase '" + std::string(text) + "'");
        value = body == "-" ? -1.0 : 1.0;
    } else if (auto slash = body.find('/'); slash != std::string_view::npos) {
        std::string_view num = trim(body.substr(0, slash));
        const double den = parse_plain_number(body.substr(slash + 1), text);
        if (den == 0.0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        double numerator = 1.0;
        if (num == "-") {
            numerator = -1.0;
        } else if (!num.empty() && num != "+") {
            numerator = parse_plain_number(num, text);
        }
        value = numerator / den;
    } else {
        value = parse_plain_number(body, text);
    }
    return has_pi ? value * kPi : value;
}

std::vector<double> parse_phase_list(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
        out.push_back(parse_phase_literal(text.substr(start, end - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

RunConfig parse_config_text(std::string_view text, Mode mode, const std::string& source) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(source, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "<root>",
                          std::string("JSON syntax error: ") + e.what());
    }
    const Validator v(text, source);
    v.allow_keys(root, "", {"mode", "d", "unitary", "geometry", "drive", "detector", "iterate",
                            "curves", "fit", "seed", "output"});

    RunConfig cfg;
    cfg.mode = mode;

    if (root.contains("mode")) {
        const std::string name = v.string(root["mode"], "/mode");
        const auto parsed = parse_mode(name);
        if (!parsed) v.fail("/mode", "unknown mode '" + name + "'");
        if (*parsed != mode) {
            v.fail("/mode", "config is for mode '" + name + "' but was run as '" +
                                std::string(mode_name(mode)) + "'");
        }
    }

    if (root.contains("d")) {
        const std::uint64_t d = v.unsigned_integer(root["d"], "/d");
        if (d < 2 || d > 64) v.fail("/d", "d must be in [2, 64]");
        cfg.d = static_cast<std::size_t>(d);
        cfg.has_d = true;
    } else if (mode != Mode::Fit) {
        v.fail("", "missing required key 'd'");
    }
    cfg.geometry.d = cfg.d;

    if (root.contains("unitary")) {
        const json& u = root["unitary"];
        v.allow_keys(u, "/unitary", {"name", "phases"});
        if (u.contains("name")) cfg.unitary_name = v.string(u["name"], "/unitary/name");
        cfg.phases = v.phases(v.require(u, "/unitary", "phases"), "/unitary/phases");
        if (cfg.has_d && cfg.phases.size() != cfg.d) {
            v.fail("/unitary/phases", "expected " + std::to_string(cfg.d) + " phases, got " +
                                          std::to_string(cfg.phases.size()));
        }
    } else if (mode == Mode::Ideal || mode == Mode::Photonic || mode == Mode::Iterate) {
        v.fail("", "missing required block 'unitary'");
    }

    if (root.contains("geometry")) {
        const json& g = root["geometry"];
        v.allow_keys(g, "/geometry",
                     {"bin_spacing_freq", "comb_drive_freq", "mix_drive_freq", "daughter_spacing",
                      "time_bin_spacing", "repetition_period", "time_bin_fwhm", "dispersion"});
        const std::pair<const char*, double*> fields[] = {
            {"bin_spacing_freq", &cfg.geometry.bin_spacing_freq},
            {"comb_drive_freq", &cfg.geometry.comb_drive_freq},
            {"mix_drive_freq", &cfg.geometry.mix_drive_freq},
            {"daughter_spacing", &cfg.geometry.daughter_spacing},
            {"time_bin_spacing", &cfg.geometry.time_bin_spacing},
            {"repetition_period", &cfg.geometry.repetition_period},
            {"time_bin_fwhm", &cfg.geometry.time_bin_fwhm},
            {"dispersion", &cfg.geometry.dispersion},
        };
        for (const auto& [key, field] : fields) {
            if (g.contains(key)) *field = v.number(g[key], std::string("/geometry/") + key);
        }
    }
    if (mode == Mode::Photonic || root.contains("geometry")) {
        if (auto violations = validate_geometry(cfg.geometry); !violations.empty()) {
            std::string msg = "invalid geometry:";
            for (const auto& viol : violations) msg += " [" + viol.invariant + ": " + viol.detail + "]";
            v.fail(root.contains("geometry") ? "/geometry" : "/d", msg);
        }
    }

    if (root.contains("drive")) {
        const json& dr = root["drive"];
        v.allow_keys(dr, "/drive", {"modulation_index", "drive_freq", "delay_phase"});
        if (dr.contains("modulation_index")) {
            const json& m = dr["modulation_index"];
            if (m.is_string()) {
                if (m.get<std::string>() != "auto") {
                    v.fail("/drive/modulation_index", "expected a number or \"auto\"");
                }
                cfg.drive_auto = true;
            } else {
                cfg.drive.modulation_index = v.nonnegative(m, "/drive/modulation_index");
                cfg.drive_auto = false;
            }
        }
        if (dr.contains("drive_freq")) cfg.drive.drive_freq = v.nonnegative(dr["drive_freq"], "/drive/drive_freq");
        if (dr.contains("delay_phase")) {
            try {
                cfg.drive.delay_phase = dr["delay_phase"].is_string()
                                            ? parse_phase_literal(dr["delay_phase"].get<std::string>())
                                            : v.number(dr["delay_phase"], "/drive/delay_phase");
            } catch (const std::invalid_argument& e) {
                v.fail("/drive/delay_phase", e.what());
            }
        }
    }
    if (!root.contains("drive") || !root["drive"].contains("drive_freq")) {
        cfg.drive.drive_freq = cfg.geometry.mix_drive_freq;
    }
    if (cfg.drive_auto && (mode == Mode::Photonic || mode == Mode::Iterate) && cfg.d != 3) {
        v.fail(root.contains("drive") ? "/drive/modulation_index" : "/d",
               "automatic modulation index needs d = 3; set drive.modulation_index explicitly");
    }

    if (root.contains("detector")) {
        const json& det = root["detector"];
        v.allow_keys(det, "/detector", {"flux", "integration_time", "dark_rate"});
        if (det.contains("flux")) cfg.detector.flux = v.nonnegative(det["flux"], "/detector/flux");
        if (det.contains("integration_time")) {
            cfg.detector.integration_time = v.nonnegative(det["integration_time"], "/detector/integration_time");
        }
        if (det.contains("dark_rate")) cfg.detector.dark_rate = v.nonnegative(det["dark_rate"], "/detector/dark_rate");
    }

    if (root.contains("iterate")) {
        const json& it = root["iterate"];
        v.allow_keys(it, "/iterate", {"n_digits", "eigenstate", "backend"});
        const std::uint64_t n = v.unsigned_integer(v.require(it, "/iterate", "n_digits"), "/iterate/n_digits");
        if (n < 1 || n > 30) v.fail("/iterate/n_digits", "n_digits must be in [1, 30]");
        cfg.n_digits = static_cast<std::size_t>(n);
        if (it.contains("eigenstate")) {
            cfg.eigenstate = static_cast<std::size_t>(v.unsigned_integer(it["eigenstate"], "/iterate/eigenstate"));
            if (cfg.eigenstate >= cfg.d) v.fail("/iterate/eigenstate", "eigenstate must be < d");
        }
        if (it.contains("backend")) {
            const std::string b = v.string(it["backend"], "/iterate/backend");
            if (b == "ideal") {
                cfg.backend = Backend::Ideal;
            } else if (b == "photonic") {
                cfg.backend = Backend::Photonic;
            } else {
                v.fail("/iterate/backend", "backend must be \"ideal\" or \"photonic\"");
            }
        }
    } else if (mode == Mode::Iterate) {
        v.fail("", "missing required block 'iterate'");
    }

    if (root.contains("curves")) {
        const json& c = root["curves"];
        v.allow_keys(c, "/curves", {"resolution"});
        if (c.contains("resolution")) {
            const std::uint64_t r = v.unsigned_integer(c["resolution"], "/curves/resolution");
            if (r < 2 || r > 10'000'000) v.fail("/curves/resolution", "resolution must be in [2, 1e7]");
            cfg.resolution = static_cast<std::size_t>(r);
        }
    }

    if (root.contains("fit")) {
        const json& f = root["fit"];
        v.allow_keys(f, "/fit", {"input", "true_phases"});
        if (f.contains("input")) cfg.input_path = v.string(f["input"], "/fit/input");
        if (f.contains("true_phases")) cfg.true_phases = v.phases(f["true_phases"], "/fit/true_phases");
    }

    if (root.contains("seed")) cfg.seed = v.unsigned_integer(root["seed"], "/seed");

    if (root.contains("output")) {
        const json& o = root["output"];
        v.allow_keys(o, "/output", {"dir", "format"});
        if (o.contains("dir")) cfg.output_dir = v.string(o["dir"], "/output/dir");
        if (o.contains("format")) {
            const std::string f = v.string(o["format"], "/output/format");
            if (f == "csv") {
                cfg.format = OutputFormat::Csv;
            } else if (f == "json") {
                cfg.format = OutputFormat::Json;
            } else {
                v.fail("/output/format", "format must be \"csv\" or \"json\"");
            }
        }
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& file, Mode mode) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError(file.string(), 0, "<file>", "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    RunConfig cfg = parse_config_text(ss.str(), mode, file.string());
    // Relative input paths are resolved against the config's directory.
    if (cfg.input_path && std::filesystem::path(*cfg.input_path).is_relative()) {
        cfg.input_path = (file.parent_path() / *cfg.input_path).string();
    }
    return cfg;
}

std::string config_hash(const RunConfig& c) {
    std::string canon;
    canon += "mode=" + std::string(mode_name(c.mode)) + ";";
    append(canon, "d", static_cast<std::uint64_t>(c.d));
    canon += "has_d=" + std::to_string(c.has_d) + ";";
    canon += "unitary=" + c.unitary_name + ";";
    for (double p : c.phases) append(canon, "phase", p);
    const auto& g = c.geometry;
    append(canon, "bin_spacing_freq", g.bin_spacing_freq);
    append(canon, "comb_drive_freq", g.comb_drive_freq);
    append(canon, "mix_drive_freq", g.mix_drive_freq);
    append(canon, "daughter_spacing", g.daughter_spacing);
    append(canon, "time_bin_spacing", g.time_bin_spacing);
    append(canon, "repetition_period", g.repetition_period);
    append(canon, "time_bin_fwhm", g.time_bin_fwhm);
    append(canon, "dispersion", g.dispersion);
    canon += "drive_auto=" + std::to_string(c.drive_auto) + ";";
    if (!c.drive_auto) append(canon, "modulation_index", c.drive.modulation_index);
    append(canon, "drive_freq", c.drive.drive_freq);
    append(canon, "delay_phase", c.drive.delay_phase);
    append(canon, "flux", c.detector.flux);
    append(canon, "integration_time", c.detector.integration_time);
    append(canon, "dark_rate", c.detector.dark_rate);
    append(canon, "n_digits", static_cast<std::uint64_t>(c.n_digits));
    append(canon, "eigenstate", static_cast<std::uint64_t>(c.eigenstate));
    canon += std::string("backend=") + (c.backend == Backend::Ideal ? "ideal" : "photonic") + ";";
    append(canon, "resolution", static_cast<std::uint64_t>(c.resolution));
    canon += "input=" + c.input_path.value_or("") + ";";
    if (c.true_phases) {
        for (double p : *c.true_phases) append(canon, "true_phase", p);
    }

    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace quditpea::cli
