#include "cdgarch/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cdgarch/csv.hpp"
#include "cdgarch/stability.hpp"

namespace cdgarch {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + section + "." + key + ": '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& section, const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError("config: bad integer value for " + section + "." + key + ": '" + v + "'");
    return out;
}

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

Sections parse_sections(const std::string& text) {
    Sections out;
    std::string current;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(lineno));
            current = trim(line.substr(1, line.size() - 2));
            out[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || current.empty())
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: empty key or value at line " + std::to_string(lineno));
        if (!out[current].insert({key, value}).second)
            throw ConfigError("config: duplicate key " + current + "." + key);
    }
    return out;
}

const std::set<std::string> kSections = {"noise", "model", "kernel.mu", "kernel.nu", "run"};
const std::map<std::string, std::set<std::string>> kKeys = {
    {"noise", {"sigma_l", "lambda_l", "mu_j", "sigma_j"}},
    {"model", {"eta", "c_mu", "c_nu"}},
    {"kernel.mu", {"kind", "w", "lambda", "support", "csv"}},
    {"kernel.nu", {"kind", "w", "lambda", "support", "csv"}},
    {"run",
     {"seed", "delta", "horizon", "h", "step", "y0", "report_delta", "paths", "scheme",
      "solver", "phi", "suite"}},
};

void check_known(const Sections& sections) {
    for (const auto& [name, body] : sections) {
        if (!kSections.count(name)) throw ConfigError("config: unknown section [" + name + "]");
        for (const auto& [key, value] : body) {
            (void)value;
            if (!kKeys.at(name).count(key))
                throw ConfigError("config: unknown key " + name + "." + key);
        }
    }
}

std::optional<DelayKernel> parse_kernel(const Sections& sections, const std::string& name) {
    const auto it = sections.find(name);
    if (it == sections.end()) return std::nullopt;
    const Section& body = it->second;
    const auto get = [&](const char* key) -> const std::string* {
        const auto k = body.find(key);
        return k == body.end() ? nullptr : &k->second;
    };
    const std::string* kind = get("kind");
    if (!kind || *kind == "none") {
        if (body.size() > (kind ? 1u : 0u))
            throw ConfigError("config: [" + name + "] kind=none takes no other keys");
        return std::nullopt;
    }
    if (*kind == "exponential") {
        const std::string* w = get("w");
        const std::string* lambda = get("lambda");
        const std::string* support = get("support");
        if (!w || !lambda || !support)
            throw ConfigError("config: [" + name + "] exponential needs w, lambda, support");
        if (get("csv")) throw ConfigError("config: [" + name + "] csv not valid for exponential");
        return DelayKernel::exponential(to_double(name, "w", *w),
                                        to_double(name, "lambda", *lambda),
                                        to_double(name, "support", *support));
    }
    if (*kind == "tabulated") {
        const std::string* csv = get("csv");
        if (!csv) throw ConfigError("config: [" + name + "] tabulated needs csv = path");
        std::ifstream in(*csv);
        if (!in) throw ConfigError("config: cannot open kernel csv '" + *csv + "'");
        std::string header;
        std::getline(in, header);
        if (trim(header) != "u,f")
            throw ConfigError("config: kernel csv '" + *csv + "' must start with header u,f");
        std::vector<double> us, fs;
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw ConfigError("config: kernel csv '" + *csv + "': malformed row");
            us.push_back(to_double(name, "csv.u", trim(line.substr(0, comma))));
            fs.push_back(to_double(name, "csv.f", trim(line.substr(comma + 1))));
        }
        if (us.size() < 2) throw ConfigError("config: kernel csv '" + *csv + "': too few rows");
        const double support = -us.front();
        const double du = us.size() > 1 ? us[1] - us[0] : 0.0;
        for (std::size_t i = 0; i < us.size(); ++i) {
            const double expected = -support + du * static_cast<double>(i);
            if (std::abs(us[i] - expected) > 1e-9 * std::max(1.0, support))
                throw ConfigError("config: kernel csv '" + *csv + "': grid must be uniform");
        }
        if (std::abs(us.back()) > 1e-9)
            throw ConfigError("config: kernel csv '" + *csv + "': grid must end at u = 0");
        return DelayKernel::tabulated(std::move(fs), support);
    }
    throw ConfigError("config: [" + name + "] unknown kind '" + *kind + "'");
}

} // namespace

HistorySegment RunConfig::resolve_phi() const {
    if (phi == "stationary")
        return HistorySegment::constant(model.r(), stationary_mean(model));
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(phi, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != phi.size())
        throw ConfigError("config: run.phi must be 'stationary' or a number, got '" + phi + "'");
    return HistorySegment::constant(model.r(), value);
}

std::string RunConfig::resolved_text() const {
    std::ostringstream out;
    out << "[noise]\n";
    out << "sigma_l = " << format_double(model.noise.sigma_l) << '\n';
    out << "lambda_l = " << format_double(model.noise.lambda_l) << '\n';
    out << "mu_j = " << format_double(model.noise.mu_j) << '\n';
    out << "sigma_j = " << format_double(model.noise.sigma_j) << '\n';
    out << "\n[model]\n";
    out << "eta = " << format_double(model.eta) << '\n';
    out << "c_mu = " << format_double(model.c_mu) << '\n';
    out << "c_nu = " << format_double(model.c_nu) << '\n';
    const auto emit_kernel = [&](const char* name, const std::optional<DelayKernel>& k) {
        out << "\n[" << name << "]\n";
        if (!k) {
            out << "kind = none\n";
            return;
        }
        if (k->is_exponential()) {
            out << "kind = exponential\n";
            out << "w = " << format_double(k->exp_w()) << '\n';
            out << "lambda = " << format_double(k->exp_lambda()) << '\n';
            out << "support = " << format_double(k->support()) << '\n';
        } else {
            out << "kind = tabulated\n";
            out << "support = " << format_double(k->support()) << '\n';
        }
    };
    emit_kernel("kernel.mu", model.f_mu);
    emit_kernel("kernel.nu", model.f_nu);
    out << "\n[run]\n";
    out << "seed = " << seed << '\n';
    out << "delta = " << format_double(delta) << '\n';
    out << "horizon = " << format_double(horizon) << '\n';
    out << "h = " << format_double(h) << '\n';
    out << "step = " << format_double(step) << '\n';
    out << "y0 = " << format_double(y0) << '\n';
    out << "report_delta = " << format_double(report_delta) << '\n';
    out << "paths = " << paths << '\n';
    out << "scheme = " << scheme << '\n';
    out << "solver = " << solver << '\n';
    out << "phi = " << phi << '\n';
    out << "suite = " << suite << '\n';
    return out.str();
}

namespace {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

} // namespace

std::string RunConfig::digest() const { return hex64(fnv1a(resolved_text())); }

std::string model_digest(const DelayModel& model) {
    std::ostringstream out;
    out << format_double(model.eta) << '|' << format_double(model.c_mu) << '|'
        << format_double(model.c_nu) << '|' << format_double(model.noise.sigma_l) << '|'
        << format_double(model.noise.lambda_l) << '|' << format_double(model.noise.mu_j) << '|'
        << format_double(model.noise.sigma_j);
    const auto emit = [&](const std::optional<DelayKernel>& k) {
        out << '|';
        if (!k) {
            out << "none";
        } else if (k->is_exponential()) {
            out << "exp:" << format_double(k->exp_w()) << ':' << format_double(k->exp_lambda())
                << ':' << format_double(k->support());
        } else {
            out << "tab:" << format_double(k->support());
        }
    };
    emit(model.f_mu);
    emit(model.f_nu);
    return hex64(fnv1a(out.str()));
}

RunConfig parse_config_text(const std::string& text) {
    Sections sections = parse_sections(text);
    check_known(sections);
    RunConfig cfg;

    const auto get = [&](const std::string& section, const char* key) -> const std::string* {
        const auto s = sections.find(section);
        if (s == sections.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    const auto get_d = [&](const std::string& section, const char* key, double& into) {
        if (const std::string* v = get(section, key)) into = to_double(section, key, *v);
    };

    get_d("noise", "sigma_l", cfg.model.noise.sigma_l);
    get_d("noise", "lambda_l", cfg.model.noise.lambda_l);
    get_d("noise", "mu_j", cfg.model.noise.mu_j);
    get_d("noise", "sigma_j", cfg.model.noise.sigma_j);
    get_d("model", "eta", cfg.model.eta);
    get_d("model", "c_mu", cfg.model.c_mu);
    get_d("model", "c_nu", cfg.model.c_nu);
    cfg.model.f_mu = parse_kernel(sections, "kernel.mu");
    cfg.model.f_nu = parse_kernel(sections, "kernel.nu");

    if (const std::string* v = get("run", "seed")) cfg.seed = to_u64("run", "seed", *v);
    get_d("run", "delta", cfg.delta);
    get_d("run", "horizon", cfg.horizon);
    get_d("run", "h", cfg.h);
    get_d("run", "step", cfg.step);
    get_d("run", "y0", cfg.y0);
    get_d("run", "report_delta", cfg.report_delta);
    if (const std::string* v = get("run", "paths"))
        cfg.paths = static_cast<std::size_t>(to_u64("run", "paths", *v));
    if (const std::string* v = get("run", "scheme")) cfg.scheme = *v;
    if (const std::string* v = get("run", "solver")) cfg.solver = *v;
    if (const std::string* v = get("run", "phi")) cfg.phi = *v;
    if (const std::string* v = get("run", "suite")) cfg.suite = *v;

    if (cfg.scheme != "euler" && cfg.scheme != "events")
        throw ConfigError("config: run.scheme must be euler or events");
    if (cfg.solver != "dde" && cfg.solver != "renewal")
        throw ConfigError("config: run.solver must be dde or renewal");
    if (cfg.suite != "full" && cfg.suite != "smoke")
        throw ConfigError("config: run.suite must be full or smoke");
    if (cfg.paths < 1) throw ConfigError("config: run.paths must be >= 1");

    cfg.model.noise.seed = cfg.seed;
    try {
        validate(cfg.model);
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace cdgarch
