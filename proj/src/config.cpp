#include "thermel/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace thermel {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Parser {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
    std::vector<std::string> diags;

    void fail(int line, const std::string& msg) {
        diags.push_back("line " + std::to_string(line) + ": " + msg);
    }

    void scan(const std::string& text) {
        std::istringstream in(text);
        std::string raw, current;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            std::size_t hash = raw.find_first_of("#;");
            std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') {
                    fail(line, "malformed section header \"" + s + "\"");
                    continue;
                }
                current = trim(s.substr(1, s.size() - 2));
                if (sections.count(current))
                    fail(line, "duplicate section [" + current + "]");
                sections[current];
                section_lines[current] = line;
                continue;
            }
            std::size_t eq = s.find('=');
            if (eq == std::string::npos) {
                fail(line, "expected key = value, got \"" + s + "\"");
                continue;
            }
            if (current.empty()) {
                fail(line, "key outside any section");
                continue;
            }
            std::string key = trim(s.substr(0, eq));
            std::string val = trim(s.substr(eq + 1));
            if (key.empty()) {
                fail(line, "empty key");
                continue;
            }
            auto [it, fresh] = sections[current].emplace(key, Entry{val, line, false});
            if (!fresh)
                fail(line, "duplicate key [" + current + "]." + key + " (first at line " +
                               std::to_string(it->second.line) + ")");
        }
    }

    Section* section(const std::string& name) {
        auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    }

    Entry* find(Section* sec, const std::string& key) {
        if (!sec) return nullptr;
        auto it = sec->find(key);
        if (it == sec->end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    double number(const std::string& sec_name, Section* sec, const std::string& key,
                  double fallback, bool* present = nullptr) {
        Entry* e = find(sec, key);
        if (present) *present = e != nullptr;
        if (!e) return fallback;
        try {
            std::size_t pos = 0;
            double v = std::stod(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            fail(e->line, "[" + sec_name + "]." + key + ": not a number: \"" + e->value + "\"");
            return fallback;
        }
    }

    int integer(const std::string& sec_name, Section* sec, const std::string& key, int fallback) {
        Entry* e = find(sec, key);
        if (!e) return fallback;
        try {
            std::size_t pos = 0;
            long v = std::stol(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("trailing");
            return int(v);
        } catch (const std::exception&) {
            fail(e->line, "[" + sec_name + "]." + key + ": not an integer: \"" + e->value + "\"");
            return fallback;
        }
    }

    std::string word(Section* sec, const std::string& key, const std::string& fallback) {
        Entry* e = find(sec, key);
        return e ? e->value : fallback;
    }

    bool boolean(const std::string& sec_name, Section* sec, const std::string& key,
                 bool fallback) {
        Entry* e = find(sec, key);
        if (!e) return fallback;
        if (e->value == "true") return true;
        if (e->value == "false") return false;
        fail(e->line, "[" + sec_name + "]." + key + ": expected true or false, got \"" + e->value +
                          "\"");
        return fallback;
    }

    void finish_section(const std::string& name) {
        Section* sec = section(name);
        if (!sec) return;
        for (const auto& [key, entry] : *sec)
            if (!entry.used) fail(entry.line, "unknown key [" + name + "]." + key);
    }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
    Parser p;
    p.scan(text);
    RunConfig cfg;

    static const std::vector<std::string> known = {"grid", "sigma", "boundary", "picard",
                                                   "output"};
    for (const auto& [name, sec] : p.sections) {
        (void)sec;
        if (std::find(known.begin(), known.end(), name) == known.end())
            p.fail(p.section_lines[name], "unknown section [" + name + "]");
    }
    for (const char* required : {"grid", "sigma", "boundary"})
        if (!p.section(required))
            p.diags.push_back(std::string("missing required section [") + required + "]");

    // [grid]
    if (Section* sec = p.section("grid")) {
        for (int d = 0; d < 3; ++d) {
            std::string nk = "n" + std::to_string(d + 1);
            std::string lk = "L" + std::to_string(d + 1);
            cfg.cells[d] = p.integer("grid", sec, nk, cfg.cells[d]);
            cfg.extent[d] = p.number("grid", sec, lk, 1.0);
            if (cfg.cells[d] < 2) p.fail(p.section_lines["grid"], "[grid]." + nk + ": need at least 2 cells");
            if (!(cfg.extent[d] > 0.0))
                p.fail(p.section_lines["grid"], "[grid]." + lk + ": extent must be positive");
        }
        p.finish_section("grid");
    }

    // [sigma]
    if (Section* sec = p.section("sigma")) {
        int line = p.section_lines["sigma"];
        std::string kind = p.word(sec, "kind", "constant");
        try {
            if (kind == "constant") {
                double s0 = p.number("sigma", sec, "sigma0", 1.0);
                if (!(s0 > 0.0))
                    p.fail(line, "[sigma].sigma0: conductivity must be positive");
                else
                    cfg.sigma = ConductivityModel::constant(s0);
            } else if (kind == "sigmoid") {
                double s1 = p.number("sigma", sec, "sigma1", 1.0);
                double s2 = p.number("sigma", sec, "sigma2", 2.0);
                double s0 = p.number("sigma", sec, "s0", 0.0);
                double w = p.number("sigma", sec, "w", 1.0);
                if (!(s1 > 0.0))
                    p.fail(line, "[sigma].sigma1: lower conductivity bound must be positive");
                else
                    cfg.sigma = ConductivityModel::bounded_sigmoid(s1, s2, s0, w);
            } else if (kind == "table") {
                Entry* e = p.find(sec, "points");
                if (!e) {
                    p.fail(line, "[sigma].points required for kind = table");
                } else {
                    std::vector<std::pair<double, double>> pts;
                    std::istringstream in(e->value);
                    std::string tok;
                    while (std::getline(in, tok, ',')) {
                        std::size_t colon = tok.find(':');
                        if (colon == std::string::npos)
                            throw std::invalid_argument("expected s:sigma pairs");
                        pts.emplace_back(std::stod(trim(tok.substr(0, colon))),
                                         std::stod(trim(tok.substr(colon + 1))));
                    }
                    cfg.sigma = ConductivityModel::table(std::move(pts));
                }
            } else {
                p.fail(line, "[sigma].kind: unknown kind \"" + kind + "\"");
            }
        } catch (const std::exception& ex) {
            p.fail(line, std::string("[sigma]: ") + ex.what());
        }
        p.finish_section("sigma");
    }

    // [boundary]
    if (Section* sec = p.section("boundary")) {
        int line = p.section_lines["boundary"];
        std::string mode = p.word(sec, "mode", "electric");
        if (mode == "electric")
            cfg.mode = BoundaryMode::Electric;
        else if (mode == "tangential")
            cfg.mode = BoundaryMode::Tangential;
        else
            p.fail(line, "[boundary].mode: expected electric or tangential, got \"" + mode + "\"");
        std::string joule = p.word(sec, "joule", "pointwise");
        if (joule == "pointwise")
            cfg.joule = JouleMode::Pointwise;
        else if (joule == "divergence")
            cfg.joule = JouleMode::DivergenceForm;
        else
            p.fail(line, "[boundary].joule: expected pointwise or divergence, got \"" + joule +
                             "\"");
        cfg.u0_const = p.number("boundary", sec, "u0", 0.0);
        for (int d = 0; d < 3; ++d) {
            bool present = false;
            std::string key = "e" + std::to_string(d + 1);
            cfg.e_const[d] = p.number("boundary", sec, key, 0.0, &present);
            if (present && cfg.mode == BoundaryMode::Tangential)
                p.fail(line, "[boundary]." + key + ": applied field is an electric-mode key");
        }
        std::string h0 = p.word(sec, "h0", "zero");
        if (h0 == "zero")
            cfg.flux_preset = FluxPreset::Zero;
        else if (h0 == "chi")
            cfg.flux_preset = FluxPreset::Chi;
        else if (h0 == "uniform")
            cfg.flux_preset = FluxPreset::Uniform;
        else
            p.fail(line, "[boundary].h0: unknown flux preset \"" + h0 + "\"");
        cfg.flux_amplitude = p.number("boundary", sec, "h0_amplitude", 1.0);
        p.finish_section("boundary");
    }

    // [picard]
    if (Section* sec = p.section("picard")) {
        int line = p.section_lines["picard"];
        cfg.picard.tol = p.number("picard", sec, "tol", cfg.picard.tol);
        cfg.picard.max_iterations = p.integer("picard", sec, "max_iterations",
                                              cfg.picard.max_iterations);
        cfg.picard.theta = p.number("picard", sec, "theta", cfg.picard.theta);
        cfg.linear.tol = p.number("picard", sec, "linear_tol", cfg.linear.tol);
        cfg.linear.maxiter = p.integer("picard", sec, "linear_maxiter", cfg.linear.maxiter);
        if (!(cfg.picard.theta > 0.0) || cfg.picard.theta > 1.0)
            p.fail(line, "[picard].theta: damping must lie in (0,1]");
        if (!(cfg.picard.tol > 0.0)) p.fail(line, "[picard].tol: must be positive");
        if (cfg.picard.max_iterations < 1)
            p.fail(line, "[picard].max_iterations: must be at least 1");
        p.finish_section("picard");
    }

    // [output]
    if (Section* sec = p.section("output")) {
        cfg.write_fields = p.boolean("output", sec, "fields", true);
        p.finish_section("output");
    }

    if (!p.diags.empty()) {
        std::string msg = "config error";
        for (const auto& d : p.diags) msg += "\n  " + d;
        throw ConfigError(msg, p.diags);
    }

    // post-parse validation that needs the assembled problem: tangential flux
    // compatibility, reported with the computed boundary sum
    if (cfg.mode == BoundaryMode::Tangential) {
        ProblemSpec spec = cfg.make_problem();
        BoundaryFlux f(spec.grid);
        f.g = *spec.flux_g;
        double total = f.total_flux();
        double nrm = f.norm();
        if (nrm > 0.0 && std::abs(total) > 1e-10 * nrm) {
            std::ostringstream os;
            os << "config error\n  [boundary]: incompatible tangential flux, boundary integral = "
               << total << " (must vanish)";
            throw ConfigError(os.str(), {os.str()});
        }
    }
    return cfg;
}

ProblemSpec RunConfig::make_problem() const {
    Grid g = make_grid();
    ProblemSpec spec;
    spec.grid = g;
    spec.sigma = sigma;
    spec.mode = mode;
    spec.joule = joule;
    spec.picard = picard;
    spec.linear = linear;

    NodeField u0(g);
    for (double& v : u0.data()) v = u0_const;
    spec.u0 = u0;

    if (mode == BoundaryMode::Electric) {
        spec.e_const = e_const;
        return spec;
    }

    // tangential presets: g = nu . curl(H0) at boundary face centers
    FaceField flux(g);
    auto chi_curl3 = [&](double x, double y) {
        // H0 = A (d2 chi, -d1 chi, 0) with chi = sin(pi x/L1) sin(pi y/L2):
        // curl H0 = (0, 0, A (pi^2/L1^2 + pi^2/L2^2) chi), nu.H0 = 0
        double k1 = kPi / g.extent[0], k2 = kPi / g.extent[1];
        return flux_amplitude * (k1 * k1 + k2 * k2) * std::sin(k1 * x) * std::sin(k2 * y);
    };
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3;
        const int d = (c + 2) % 3;
        for (int side = 0; side < 2; ++side) {
            std::array<int, 3> p{0, 0, 0};
            p[c] = side == 0 ? 0 : g.cells[c];
            double nu = side == 0 ? -1.0 : 1.0;
            for (int ia = 0; ia < g.cells[a]; ++ia)
                for (int id = 0; id < g.cells[d]; ++id) {
                    p[a] = ia;
                    p[d] = id;
                    auto x = g.face_pos(c, p[0], p[1], p[2]);
                    double v = 0.0;
                    switch (flux_preset) {
                        case FluxPreset::Zero: v = 0.0; break;
                        case FluxPreset::Uniform: v = flux_amplitude; break;
                        case FluxPreset::Chi: v = c == 2 ? nu * chi_curl3(x[0], x[1]) : 0.0; break;
                    }
                    flux.at(c, p[0], p[1], p[2]) = v;
                }
        }
    }
    spec.flux_g = flux;

    if (flux_preset == FluxPreset::Chi) {
        EdgeField curl(g);
        const Box3& b = curl.box(2);
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i) {
                    auto x = g.edge_pos(2, i, j, k);
                    curl.at(2, i, j, k) = chi_curl3(x[0], x[1]);
                }
        spec.curl_h0 = curl;
    }
    return spec;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

}  // namespace thermel
