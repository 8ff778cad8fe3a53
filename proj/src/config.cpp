#include "nclab/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nclab {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) return out;
        start = p + 1;
    }
}

double to_double(const std::string& v, std::size_t line, const std::string& key) {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty())
        throw ConfigError(line, "key '" + key + "' expects a number, got '" + v + "'");
    return out;
}

std::int64_t to_int(const std::string& v, std::size_t line, const std::string& key) {
    std::int64_t out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty())
        throw ConfigError(line, "key '" + key + "' expects an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& v, std::size_t line, const std::string& key) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError(line, "key '" + key + "' expects true/false, got '" + v + "'");
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"symbol", {"n", "expr", "expr_im", "order", "rho", "delta", "cutoff", "term", "side"}},
        {"lattice", {"M"}},
        {"quadrature", {"Q", "sphere_order", "torus_Q"}},
        {"fit", {"f0", "f1", "discard", "symmetrize"}},
        {"check", {"window", "pairs", "torus_points"}},
        {"output", {"matrix", "formats"}},
    };
    return s;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& msg)
    : UsageError(line ? "config line " + std::to_string(line) + ": " + msg : "config: " + msg), line_(line) {}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::string section;
    std::set<std::string> seen;
    bool order_given = false;
    std::size_t term_line = 0;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().contains(section)) throw ConfigError(lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(lineno, "key '" + key + "' appears before any [section]");
        if (!schema().at(section).contains(key))
            throw ConfigError(lineno, "unknown key '" + key + "' in section [" + section + "]");
        const std::string full = section + "." + key;
        if (full != "symbol.term" && !seen.insert(full).second)
            throw ConfigError(lineno, "duplicate key '" + key + "' in section [" + section + "]");
        seen.insert(full);

        if (section == "symbol") {
            auto& s = cfg.symbol;
            if (key == "n") {
                const auto n = to_int(value, lineno, key);
                if (n < 1 || n > 3) throw ConfigError(lineno, "dimension n must be 1, 2 or 3");
                s.n = static_cast<int>(n);
            } else if (key == "expr") {
                s.re = value;
            } else if (key == "expr_im") {
                s.im = value;
            } else if (key == "order") {
                s.order = to_double(value, lineno, key);
                order_given = true;
            } else if (key == "rho") {
                s.rho = to_double(value, lineno, key);
            } else if (key == "delta") {
                s.delta = to_double(value, lineno, key);
            } else if (key == "cutoff") {
                s.cutoff_radius = to_double(value, lineno, key);
            } else if (key == "side") {
                if (value == "discrete")
                    s.side = Side::Discrete;
                else if (value == "toroidal")
                    s.side = Side::Toroidal;
                else
                    throw ConfigError(lineno, "side must be 'discrete' or 'toroidal'");
            } else if (key == "term") {
                const auto parts = split(value, ';');
                if (parts.size() < 2 || parts.size() > 3)
                    throw ConfigError(lineno, "term expects 'degree ; angular_re [; angular_im]'");
                dsl::ClassicalTermText t;
                t.degree = to_double(parts[0], lineno, key);
                t.angular_re = parts[1];
                if (parts.size() == 3) t.angular_im = parts[2];
                s.terms.push_back(std::move(t));
                if (!term_line) term_line = lineno;
            }
        } else if (section == "lattice") {
            cfg.M = to_int(value, lineno, key);
            if (cfg.M < 0) throw ConfigError(lineno, "M must be >= 0");
        } else if (section == "quadrature") {
            const auto v = to_int(value, lineno, key);
            if (v < 0) throw ConfigError(lineno, key + " must be >= 0");
            if (key == "Q") cfg.Q = static_cast<int>(v);
            if (key == "sphere_order") cfg.sphere_order = static_cast<int>(v);
            if (key == "torus_Q") cfg.torus_Q = static_cast<int>(v);
        } else if (section == "fit") {
            if (key == "f0") cfg.fit.f0 = to_double(value, lineno, key);
            if (key == "f1") cfg.fit.f1 = to_double(value, lineno, key);
            if (key == "discard") {
                if (value == "auto") {
                    cfg.discard_auto = true;
                } else {
                    cfg.fit.discard = to_double(value, lineno, key);
                    cfg.discard_auto = false;
                }
            }
            if (key == "symmetrize") {
                if (value == "auto")
                    cfg.symmetrize.reset();
                else
                    cfg.symmetrize = to_bool(value, lineno, key);
            }
        } else if (section == "check") {
            if (key == "window") {
                const auto parts = split(value, ',');
                if (parts.size() != 2) throw ConfigError(lineno, "window expects 'r_min, r_max'");
                cfg.window = {to_double(parts[0], lineno, key), to_double(parts[1], lineno, key)};
            } else if (key == "pairs") {
                cfg.pairs.clear();
                for (const auto& p : split(value, ',')) {
                    const auto ab = split(p, ':');
                    if (ab.size() != 2) throw ConfigError(lineno, "pairs expects 'a:b, a:b, ...'");
                    const auto a = to_int(ab[0], lineno, key), b = to_int(ab[1], lineno, key);
                    if (a < 0 || b < 0) throw ConfigError(lineno, "pair orders must be >= 0");
                    cfg.pairs.emplace_back(static_cast<unsigned>(a), static_cast<unsigned>(b));
                }
            } else if (key == "torus_points") {
                cfg.torus_points = static_cast<int>(to_int(value, lineno, key));
            }
        } else if (section == "output") {
            if (key == "matrix") {
                if (value != "discrete" && value != "toroidal")
                    throw ConfigError(lineno, "matrix must be 'discrete' or 'toroidal'");
                cfg.matrix = value;
            } else if (key == "formats") {
                cfg.write_csv = cfg.write_binary = false;
                for (const auto& f : split(value, ',')) {
                    if (f == "csv")
                        cfg.write_csv = true;
                    else if (f == "bin")
                        cfg.write_binary = true;
                    else
                        throw ConfigError(lineno, "unknown output format '" + f + "'");
                }
            }
        }
    }

    for (const char* required : {"symbol.n", "symbol.expr", "lattice.M"})
        if (!seen.contains(required)) throw ConfigError(0, std::string("missing mandatory key ") + required);

    if (!order_given)
        cfg.symbol.order = cfg.symbol.terms.empty() ? -static_cast<double>(cfg.symbol.n) : cfg.symbol.terms.front().degree;

    // All expressions must parse and the degree ladder must hold.
    try {
        (void)dsl::to_symbol(cfg.symbol);
    } catch (const dsl::ParseError&) {
        throw;
    } catch (const UsageError& e) {
        throw ConfigError(term_line, e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Symbol build_symbol(const RunConfig& cfg) { return regularize_origin(dsl::to_symbol(cfg.symbol)); }

const char* config_grammar() {
    return R"(Config file: '[section]' headers, 'key = value' lines, '#' comments. Unknown keys are errors.
  [symbol]     n (1..3, required), expr (required), expr_im, order (default: first term degree or -n),
               rho (1), delta (0), cutoff (1), side (discrete|toroidal),
               term = degree ; angular_re [; angular_im]   (repeatable, degrees m, m-1, ...)
  [lattice]    M (required): truncation box [-M,M]^n
  [quadrature] Q (0 = auto), sphere_order (0 = auto), torus_Q (128)
  [fit]        f0 (0.2), f1 (1.0), discard (auto|fraction), symmetrize (auto|true|false)
  [check]      window = r_min, r_max   pairs = |alpha|:|beta|, ...   torus_points (16)
  [output]     matrix (discrete|toroidal), formats (csv,bin)

Expressions: + - * / ^ (right-associative, binds tighter than unary minus: -x^2 = -(x^2)),
  numbers, pi, x1..xn (torus), xi1..xin (frequency), |xi|, <xi> = (1+|xi|^2)^(1/2),
  cos sin exp abs. No implicit multiplication. Angular terms use theta1..thetan and x1..xn.
)";
}

}  // namespace nclab
