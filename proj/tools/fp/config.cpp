#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <fpade/error.hpp>
#include <fpade/linear_fp.hpp>

#include "json.hpp"

namespace fp {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxGridSize = 1500;
constexpr int kMaxOrthopolyDegree = 200;

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Collects schema problems as "path: message".
class Checker {
public:
    void add(const std::string& path, const std::string& msg) { problems_.push_back((path.empty() ? "/" : path) + ": " + msg); }
    [[nodiscard]] bool ok() const noexcept { return problems_.empty(); }
    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

    /// Flags keys of `obj` outside `allowed`.
    void keys(const json& obj, const std::string& path, const std::set<std::string>& allowed)
    {
        for (const auto& [k, v] : obj.items())
            if (!allowed.contains(k)) add(path + "/" + k, "unknown key");
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path, bool required)
    {
        if (!obj.contains(key)) {
            if (required) add(path + "/" + key, "missing required number");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            add(path + "/" + key, "expected a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            add(path + "/" + key, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<long long> integer(const json& obj, const std::string& key, const std::string& path,
                                     bool required)
    {
        if (!obj.contains(key)) {
            if (required) add(path + "/" + key, "missing required integer");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            add(path + "/" + key, "expected an integer");
            return std::nullopt;
        }
        return v.get<long long>();
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path,
                                      bool required)
    {
        if (!obj.contains(key)) {
            if (required) add(path + "/" + key, "missing required string");
            return std::nullopt;
        }
        if (!obj.at(key).is_string()) {
            add(path + "/" + key, "expected a string");
            return std::nullopt;
        }
        return obj.at(key).get<std::string>();
    }

    std::optional<std::vector<double>> numbers(const json& v, const std::string& path)
    {
        if (!v.is_array()) {
            add(path, "expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        bool good = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                add(path + "/" + std::to_string(i), "expected a finite number");
                good = false;
                continue;
            }
            out.push_back(v[i].get<double>());
        }
        if (!good) return std::nullopt;
        return out;
    }

    std::optional<std::vector<int>> integers(const json& v, const std::string& path)
    {
        if (!v.is_array()) {
            add(path, "expected an array of integers");
            return std::nullopt;
        }
        std::vector<int> out;
        bool good = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_integer() || std::abs(v[i].get<long long>()) > 1000000) {
                add(path + "/" + std::to_string(i), "expected an integer");
                good = false;
                continue;
            }
            out.push_back(static_cast<int>(v[i].get<long long>()));
        }
        if (!good) return std::nullopt;
        return out;
    }

    /// Runs `f`; an fpade::Error becomes a problem at `path` (with its details).
    template <class F>
    bool guard(const std::string& path, F&& f)
    {
        try {
            f();
            return true;
        } catch (const fpade::Error& e) {
            const std::string what = e.what();
            const bool repeated = e.details().size() == 1 && what.find(e.details().front()) != std::string::npos;
            if (e.details().empty() || repeated) {
                add(path, what);
            } else {
                for (const auto& d : e.details()) add(path, what + " (" + d + ")");
            }
            return false;
        }
    }

private:
    std::vector<std::string> problems_;
};

std::optional<fpade::MeasureSpec> parse_measure(Checker& ck, const json& v, const std::string& path,
                                                const std::string& default_name)
{
    if (!v.is_object()) {
        ck.add(path, "expected a measure object");
        return std::nullopt;
    }
    ck.keys(v, path, {"interval", "weight", "name"});
    std::optional<std::vector<double>> iv;
    if (!v.contains("interval")) {
        ck.add(path + "/interval", "missing required [lo, hi]");
    } else {
        iv = ck.numbers(v.at("interval"), path + "/interval");
        if (iv && iv->size() != 2) {
            ck.add(path + "/interval", "expected exactly two numbers");
            iv.reset();
        }
    }
    const std::string name = ck.string(v, "name", path, false).value_or(default_name);

    std::optional<fpade::Weight> weight;
    const std::string wpath = path + "/weight";
    if (!v.contains("weight")) {
        ck.add(wpath, "missing required weight");
    } else if (const json& w = v.at("weight"); w.is_string()) {
        const auto s = w.get<std::string>();
        if (s == "chebyshev") weight = fpade::JacobiWeight{-0.5, -0.5};
        else if (s == "lebesgue") weight = fpade::JacobiWeight{0.0, 0.0};
        else ck.add(wpath, "unknown weight '" + s + "' (expected chebyshev, lebesgue, or an object)");
    } else if (w.is_object()) {
        ck.keys(w, wpath, {"jacobi", "tabulated"});
        if (w.size() != 1) {
            ck.add(wpath, "expected exactly one of jacobi or tabulated");
        } else if (w.contains("jacobi")) {
            const json& j = w.at("jacobi");
            if (!j.is_object()) {
                ck.add(wpath + "/jacobi", "expected {alpha, beta}");
            } else {
                ck.keys(j, wpath + "/jacobi", {"alpha", "beta"});
                const auto a = ck.number(j, "alpha", wpath + "/jacobi", true);
                const auto b = ck.number(j, "beta", wpath + "/jacobi", true);
                if (a && b) weight = fpade::JacobiWeight{*a, *b};
            }
        } else if (w.contains("tabulated")) {
            if (auto s = ck.numbers(w.at("tabulated"), wpath + "/tabulated")) weight = fpade::TabulatedDensity{*s};
        }
    } else {
        ck.add(wpath, "expected a string or an object");
    }

    if (!iv || !weight) return std::nullopt;
    std::optional<fpade::MeasureSpec> out;
    ck.guard(path, [&] { out.emplace(fpade::Interval((*iv)[0], (*iv)[1]), *weight, name); });
    return out;
}

std::optional<fpade::AngelescoSystem> parse_system(Checker& ck, const json& v)
{
    const std::string path = "/system";
    if (v.is_string()) {
        if (v.get<std::string>() == "reference") return fpade::reference_system();
        ck.add(path, "unknown named system '" + v.get<std::string>() + "' (expected reference)");
        return std::nullopt;
    }
    if (!v.is_object()) {
        ck.add(path, "expected \"reference\" or an object with sigma0 and sigmas");
        return std::nullopt;
    }
    ck.keys(v, path, {"sigma0", "sigmas"});
    std::optional<fpade::MeasureSpec> s0;
    if (!v.contains("sigma0")) ck.add(path + "/sigma0", "missing required measure");
    else s0 = parse_measure(ck, v.at("sigma0"), path + "/sigma0", "sigma0");
    std::vector<fpade::MeasureSpec> sigmas;
    bool all = true;
    if (!v.contains("sigmas")) {
        ck.add(path + "/sigmas", "missing required list of measures");
        all = false;
    } else if (!v.at("sigmas").is_array() || v.at("sigmas").empty()) {
        ck.add(path + "/sigmas", "expected a non-empty array of measures");
        all = false;
    } else {
        const json& arr = v.at("sigmas");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto s = parse_measure(ck, arr[i], path + "/sigmas/" + std::to_string(i), "sigma" + std::to_string(i + 1));
            if (s) sigmas.push_back(*s);
            else all = false;
        }
    }
    if (!s0 || !all) return std::nullopt;
    std::optional<fpade::AngelescoSystem> out;
    ck.guard(path, [&] { out.emplace(*s0, sigmas); });
    return out;
}

std::optional<std::vector<double>> parse_ray(Checker& ck, const json& v, const std::string& path,
                                             std::optional<std::size_t> m)
{
    auto p = ck.numbers(v, path);
    if (!p) return std::nullopt;
    bool good = ck.guard(path, [&] { (void)fpade::RayVector(*p); });
    if (m && p->size() != *m) {
        ck.add(path, "ray has " + std::to_string(p->size()) + " entries but the system has " + std::to_string(*m) +
                         " measures");
        good = false;
    }
    return good ? p : std::nullopt;
}

std::optional<fpade::InteractionKind> parse_interaction(Checker& ck, const json& obj, const std::string& path)
{
    const auto s = ck.string(obj, "kind", path, false);
    if (!s) return std::nullopt;
    if (*s == "C1" || *s == "linear") return fpade::InteractionKind::C1;
    if (*s == "C2" || *s == "nonlinear") return fpade::InteractionKind::C2;
    ck.add(path + "/kind", "unknown kind '" + *s + "' (expected C1 or C2)");
    return std::nullopt;
}

void check_grid_size(Checker& ck, long long g, const std::string& path)
{
    if (g < 2 || g > static_cast<long long>(kMaxGridSize))
        ck.add(path, "grid size " + std::to_string(g) + " outside 2.." + std::to_string(kMaxGridSize));
}

} // namespace

const char* to_string(Command c) noexcept
{
    switch (c) {
    case Command::orthopoly: return "orthopoly";
    case Command::linear: return "linear";
    case Command::nonlinear: return "nonlinear";
    case Command::equilibrium: return "equilibrium";
    case Command::zeros: return "zeros";
    case Command::rates: return "rates";
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept
{
    for (Command c : {Command::orthopoly, Command::linear, Command::nonlinear, Command::equilibrium, Command::zeros,
                      Command::rates})
        if (name == to_string(c)) return c;
    return std::nullopt;
}

ExperimentConfig parse_config(std::string_view text, Command command)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fpade::fail(fpade::ErrorKind::validation,
                    "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col),
                    {std::string(e.what())});
    }

    Checker ck;
    ExperimentConfig cfg;
    cfg.command = command;
    if (!doc.is_object()) {
        fpade::fail(fpade::ErrorKind::validation, "config must be a JSON object", {"/: expected an object"});
    }
    ck.keys(doc, "", {"command", "system", "multi_index", "orthopoly", "solver", "equilibrium", "schedule",
                      "test_points"});
    if (auto c = ck.string(doc, "command", "", false)) {
        const auto parsed = parse_command(*c);
        if (!parsed) ck.add("/command", "unknown command '" + *c + "'");
        else if (*parsed != command)
            ck.add("/command", "config is for '" + *c + "' but '" + to_string(command) + "' was requested");
    }

    // system first: later blocks are checked against its size
    if (!doc.contains("system")) ck.add("/system", "missing required system");
    else cfg.system = parse_system(ck, doc.at("system"));
    const std::optional<std::size_t> m = cfg.system ? std::optional<std::size_t>(cfg.system->m()) : std::nullopt;

    const bool wants_n = command == Command::linear || command == Command::nonlinear;
    if (doc.contains("multi_index")) {
        if (auto v = ck.integers(doc.at("multi_index"), "/multi_index")) {
            bool good = ck.guard("/multi_index", [&] { cfg.multi_index.emplace(*v); });
            if (good && m && v->size() != *m) {
                ck.add("/multi_index", "multi-index has " + std::to_string(v->size()) +
                                           " entries but the system has " + std::to_string(*m) + " measures");
                good = false;
            }
            if (good && cfg.multi_index->total() < 1) {
                ck.add("/multi_index", "|n| must be at least 1");
                good = false;
            }
            if (good && cfg.multi_index->total() > fpade::kMaxTotalDegree) {
                ck.add("/multi_index", "|n| = " + std::to_string(cfg.multi_index->total()) +
                                           " exceeds the degree ceiling of " +
                                           std::to_string(fpade::kMaxTotalDegree));
                good = false;
            }
            if (!good) cfg.multi_index.reset();
        }
    } else if (wants_n) {
        ck.add("/multi_index", "missing required multi-index");
    }

    if (doc.contains("orthopoly")) {
        const json& o = doc.at("orthopoly");
        if (!o.is_object()) {
            ck.add("/orthopoly", "expected an object");
        } else {
            ck.keys(o, "/orthopoly", {"measure", "degree"});
            OrthopolyBlock b;
            const auto meas = ck.integer(o, "measure", "/orthopoly", false);
            const auto deg = ck.integer(o, "degree", "/orthopoly", true);
            bool good = deg.has_value();
            if (meas) {
                if (*meas < 0 || (m && *meas > static_cast<long long>(*m))) {
                    ck.add("/orthopoly/measure", "measure index " + std::to_string(*meas) + " outside 0.." +
                                                     (m ? std::to_string(*m) : std::string("m")));
                    good = false;
                } else {
                    b.measure = static_cast<std::size_t>(*meas);
                }
            }
            if (deg && (*deg < 1 || *deg > kMaxOrthopolyDegree)) {
                ck.add("/orthopoly/degree", "degree " + std::to_string(*deg) + " outside 1.." +
                                                std::to_string(kMaxOrthopolyDegree));
                good = false;
            }
            if (good) {
                b.degree = static_cast<int>(*deg);
                cfg.orthopoly = b;
            }
        }
    } else if (command == Command::orthopoly) {
        ck.add("/orthopoly", "missing required block {measure, degree}");
    }

    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        if (!s.is_object()) {
            ck.add("/solver", "expected an object");
        } else {
            ck.keys(s, "/solver", {"tol", "damping", "max_iter"});
            if (auto t = ck.number(s, "tol", "/solver", false)) {
                if (*t > 0.0) cfg.solver.tol = *t;
                else ck.add("/solver/tol", "must be positive");
            }
            if (auto d = ck.number(s, "damping", "/solver", false)) {
                if (*d > 0.0 && *d <= 1.0) cfg.solver.damping = *d;
                else ck.add("/solver/damping", "must lie in (0, 1]");
            }
            if (auto it = ck.integer(s, "max_iter", "/solver", false)) {
                if (*it >= 1 && *it <= 100000) cfg.solver.max_iter = static_cast<int>(*it);
                else ck.add("/solver/max_iter", "must lie in 1..100000");
            }
        }
    }

    const bool eq_full = command == Command::equilibrium;
    if (doc.contains("equilibrium")) {
        const json& e = doc.at("equilibrium");
        if (!e.is_object()) {
            ck.add("/equilibrium", "expected an object");
        } else {
            EquilibriumBlock b;
            bool good = true;
            if (eq_full) {
                ck.keys(e, "/equilibrium", {"kind", "ray", "grid_size", "tol"});
                if (auto k = parse_interaction(ck, e, "/equilibrium")) b.kind = *k;
                else if (!e.contains("kind")) ck.add("/equilibrium/kind", "missing required kind (C1 or C2)");
                if (!e.contains("ray")) {
                    ck.add("/equilibrium/ray", "missing required ray");
                    good = false;
                } else if (auto p = parse_ray(ck, e.at("ray"), "/equilibrium/ray", m)) {
                    b.ray = *p;
                } else {
                    good = false;
                }
            } else {
                // kind and ray follow the schedule for zeros and rates
                ck.keys(e, "/equilibrium", {"grid_size", "tol"});
            }
            if (auto g = ck.integer(e, "grid_size", "/equilibrium", false)) {
                check_grid_size(ck, *g, "/equilibrium/grid_size");
                b.grid_size = static_cast<std::size_t>(std::max(*g, 2LL));
            }
            if (auto t = ck.number(e, "tol", "/equilibrium", false)) {
                if (*t > 0.0) b.tol = *t;
                else ck.add("/equilibrium/tol", "must be positive");
            }
            if (good) cfg.equilibrium = b;
        }
    } else if (eq_full) {
        ck.add("/equilibrium", "missing required block {kind, ray, grid_size, tol}");
    }

    const bool wants_schedule = command == Command::zeros || command == Command::rates;
    if (doc.contains("schedule")) {
        const json& s = doc.at("schedule");
        if (!s.is_object()) {
            ck.add("/schedule", "expected an object");
        } else {
            ck.keys(s, "/schedule", {"ray", "sizes", "kind"});
            ScheduleBlock b;
            bool good = true;
            if (!s.contains("ray")) {
                ck.add("/schedule/ray", "missing required ray");
                good = false;
            } else if (auto p = parse_ray(ck, s.at("ray"), "/schedule/ray", m)) {
                b.ray = *p;
            } else {
                good = false;
            }
            if (!s.contains("sizes")) {
                ck.add("/schedule/sizes", "missing required sizes");
                good = false;
            } else if (auto z = ck.integers(s.at("sizes"), "/schedule/sizes")) {
                if (z->empty()) {
                    ck.add("/schedule/sizes", "expected at least one size");
                    good = false;
                }
                for (std::size_t i = 0; i < z->size(); ++i) {
                    const int v = (*z)[i];
                    const std::string p = "/schedule/sizes/" + std::to_string(i);
                    if (v < 1) {
                        ck.add(p, "size must be positive");
                        good = false;
                    } else if (v > fpade::kMaxTotalDegree) {
                        ck.add(p, "|n| = " + std::to_string(v) + " exceeds the degree ceiling of " +
                                      std::to_string(fpade::kMaxTotalDegree));
                        good = false;
                    }
                    if (i > 0 && v <= (*z)[i - 1]) {
                        ck.add(p, "sizes must be strictly increasing");
                        good = false;
                    }
                }
                b.sizes = *z;
            } else {
                good = false;
            }
            if (auto k = ck.string(s, "kind", "/schedule", false)) {
                if (*k == "linear") b.kind = fpade::ApproximantKind::linear;
                else if (*k == "nonlinear") b.kind = fpade::ApproximantKind::nonlinear;
                else {
                    ck.add("/schedule/kind", "unknown kind '" + *k + "' (expected linear or nonlinear)");
                    good = false;
                }
            }
            if (good) cfg.schedule = b;
        }
    } else if (wants_schedule) {
        ck.add("/schedule", "missing required block {ray, sizes, kind}");
    }
    if (wants_schedule && !cfg.equilibrium && !doc.contains("equilibrium")) cfg.equilibrium = EquilibriumBlock{};
    if (wants_schedule && cfg.equilibrium && cfg.schedule) {
        // the schedule decides which coupling and ray the equilibrium uses
        cfg.equilibrium->kind = cfg.schedule->kind == fpade::ApproximantKind::linear ? fpade::InteractionKind::C1
                                                                                     : fpade::InteractionKind::C2;
        cfg.equilibrium->ray = cfg.schedule->ray;
    }

    if (doc.contains("test_points")) {
        const json& t = doc.at("test_points");
        if (!t.is_array() || t.empty()) {
            ck.add("/test_points", "expected a non-empty array of numbers or [re, im] pairs");
        } else {
            for (std::size_t i = 0; i < t.size(); ++i) {
                const std::string p = "/test_points/" + std::to_string(i);
                if (t[i].is_number()) {
                    cfg.test_points.emplace_back(t[i].get<double>(), 0.0);
                    continue;
                }
                auto v = ck.numbers(t[i], p);
                if (!v) continue;
                if (v->size() != 2) {
                    ck.add(p, "expected [re, im]");
                    continue;
                }
                const fpade::Complex z((*v)[0], (*v)[1]);
                if (cfg.system) {
                    bool near = cfg.system->sigma0().interval().distance(z) <= 0.1;
                    for (const auto& s : cfg.system->sigmas()) near = near || s.interval().distance(z) <= 0.1;
                    if (near) ck.add(p, "test point within 0.1 of an interval of the system");
                }
                cfg.test_points.push_back(z);
            }
        }
    } else if (command == Command::rates) {
        ck.add("/test_points", "missing required test points");
    }

    if (!ck.ok()) {
        std::string msg = std::to_string(ck.problems().size()) + " config problem" +
                          (ck.problems().size() == 1 ? "" : "s") + ": " + ck.problems().front();
        fpade::fail(fpade::ErrorKind::validation, msg, ck.problems());
    }
    return cfg;
}

void apply_overrides(ExperimentConfig& config, const Overrides& o)
{
    std::vector<std::string> bad;
    if (o.tol && !(*o.tol > 0.0)) bad.push_back("--tol: must be positive, got " + num(*o.tol));
    if (o.damping && !(*o.damping > 0.0 && *o.damping <= 1.0))
        bad.push_back("--damping: must lie in (0, 1], got " + num(*o.damping));
    if (o.max_iter && (*o.max_iter < 1 || *o.max_iter > 100000))
        bad.push_back("--max-iter: must lie in 1..100000, got " + std::to_string(*o.max_iter));
    if (o.grid_size && (*o.grid_size < 2 || *o.grid_size > kMaxGridSize))
        bad.push_back("--grid-size: must lie in 2.." + std::to_string(kMaxGridSize) + ", got " +
                      std::to_string(*o.grid_size));
    if (!bad.empty()) fpade::fail(fpade::ErrorKind::validation, bad.front(), bad);

    if (o.tol) {
        if (config.command == Command::equilibrium && config.equilibrium) config.equilibrium->tol = *o.tol;
        else config.solver.tol = *o.tol;
    }
    if (o.damping) config.solver.damping = *o.damping;
    if (o.max_iter) config.solver.max_iter = *o.max_iter;
    if (o.grid_size) {
        if (!config.equilibrium) config.equilibrium = EquilibriumBlock{};
        config.equilibrium->grid_size = *o.grid_size;
    }
}

fpade::FixedPointOptions solver_options(const ExperimentConfig& config, fpade::ApproximantKind kind)
{
    fpade::FixedPointOptions opt =
        kind == fpade::ApproximantKind::linear ? fpade::linear_default_options() : fpade::FixedPointOptions{};
    if (config.solver.tol) opt.tol = *config.solver.tol;
    opt.damping = config.solver.damping;
    opt.max_iter = config.solver.max_iter;
    return opt;
}

} // namespace fp
