#include "halfline/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace halfline::cli {

namespace {

/// Cursor into one object of the config tree that remembers its dotted path.
class Node {
public:
    Node(const Json& json, std::string path) : json_(json), path_(std::move(path)) {
        if (!json_.is_object()) {
            throw ConfigError(path_, "expected an object");
        }
    }

    std::string at(const std::string& key) const {
        if (key.empty() || path_.empty()) {
            return key.empty() ? path_ : key;
        }
        return path_ + "." + key;
    }

    bool has(const std::string& key) const { return json_.contains(key); }

    void allow_only(std::initializer_list<const char*> keys) const {
        for (const auto& item : json_.items()) {
            bool known = false;
            for (const char* k : keys) {
                known = known || item.key() == k;
            }
            if (!known) {
                throw ConfigError(at(item.key()), "unknown key");
            }
        }
    }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = json_.at(key);
        if (!v.is_number()) {
            throw ConfigError(at(key), "expected a number");
        }
        return v.get<double>();
    }

    long long integer(const std::string& key, long long fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = json_.at(key);
        if (!v.is_number_integer()) {
            throw ConfigError(at(key), "expected an integer");
        }
        return v.get<long long>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = json_.at(key);
        if (!v.is_number_unsigned()) {
            throw ConfigError(at(key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = json_.at(key);
        if (!v.is_boolean()) {
            throw ConfigError(at(key), "expected true or false");
        }
        return v.get<bool>();
    }

    std::string choice(const std::string& key, const std::string& fallback,
                       std::initializer_list<const char*> options) const {
        if (!has(key)) {
            return fallback;
        }
        const auto& v = json_.at(key);
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            for (const char* o : options) {
                if (s == o) {
                    return s;
                }
            }
        }
        std::string list;
        for (const char* o : options) {
            list += list.empty() ? "" : ", ";
            list += o;
        }
        throw ConfigError(at(key), "expected one of: " + list);
    }

    Node child(const std::string& key) const {
        static const Json empty = Json::object();
        return Node(has(key) ? json_.at(key) : empty, at(key));
    }

    const Json& raw(const std::string& key) const { return json_.at(key); }

private:
    const Json& json_;
    std::string path_;
};

void require(bool ok, const std::string& path, const std::string& message) {
    if (!ok) {
        throw ConfigError(path, message);
    }
}

bool open_unit(double v) {
    return v > 0.0 && v < 1.0;
}

constexpr const char* unit_interval = "must lie in (0, 1)";

BaseKernel parse_base(const Node& n) {
    n.allow_only({"kind", "atoms"});
    const auto kind = n.choice("kind", "gaussian", {"gaussian", "exp_mixture"});
    if (kind == "gaussian") {
        require(!n.has("atoms"), n.at("atoms"), "only valid for kind exp_mixture");
        return BaseKernel::gaussian();
    }
    require(n.has("atoms") && n.raw("atoms").is_array(), n.at("atoms"), "expected an array");
    std::vector<ExpAtom> atoms;
    const auto& list = n.raw("atoms");
    for (std::size_t k = 0; k < list.size(); ++k) {
        Node a(list[k], n.at("atoms") + "[" + std::to_string(k) + "]");
        a.allow_only({"c", "s"});
        require(a.has("c") && a.has("s"), a.at(""), "atom needs c and s");
        atoms.push_back({a.number("c", 0.0), a.number("s", 0.0)});
        require(atoms.back().c > 0.0, a.at("c"), "must be > 0");
        require(atoms.back().s > 0.0, a.at("s"), "must be > 0");
    }
    try {
        return BaseKernel::exp_mixture(std::move(atoms));
    } catch (const Error& e) {
        throw ConfigError(n.at("atoms"), e.what());
    }
}

KernelSpec parse_kernel(const Node& n) {
    n.allow_only({"family", "base", "lambda", "d_star", "l", "delta", "epsilon"});
    KernelSpec k;
    const auto family = n.choice("family", "C", {"A", "B", "C"});
    k.family = family == "A" ? KernelFamily::A : family == "B" ? KernelFamily::B : KernelFamily::C;
    k.base = parse_base(n.child("base"));
    const auto form = n.choice("lambda", "exp_gap", {"exp_gap", "rational_gap"});
    k.modulation.form = form == "exp_gap" ? LambdaForm::exp_gap : LambdaForm::rational_gap;
    k.modulation.d_star = n.number("d_star", 0.5);
    require(k.modulation.d_star > 0.0 && k.modulation.d_star <= 1.0, n.at("d_star"),
            "must lie in (0, 1]");
    k.modulation.l = n.number("l", 0.5);
    require(open_unit(k.modulation.l), n.at("l"), unit_interval);
    k.delta = n.number("delta", 0.5);
    require(open_unit(k.delta), n.at("delta"), unit_interval);
    k.epsilon = n.number("epsilon", 0.5);
    require(open_unit(k.epsilon), n.at("epsilon"), unit_interval);
    return k;
}

NonlinearitySpec parse_nonlinearity(const Node& n) {
    n.allow_only({"family", "alpha", "alpha_star", "alpha_tilde"});
    const auto family = n.choice("family", "I", {"I", "II", "III"});
    const GFamily f = family == "I" ? GFamily::I : family == "II" ? GFamily::II : GFamily::III;
    const double alpha = n.number("alpha", 0.5);
    const double alpha_star = n.number("alpha_star", f == GFamily::III ? 0.75 : 0.5);
    const double alpha_tilde = n.number("alpha_tilde", 0.25);
    require(open_unit(alpha), n.at("alpha"), unit_interval);
    require(open_unit(alpha_star), n.at("alpha_star"), unit_interval);
    require(open_unit(alpha_tilde), n.at("alpha_tilde"), unit_interval);
    if (f == GFamily::III) {
        require(alpha_tilde < alpha_star, n.at("alpha_tilde"), "must be < alpha_star");
    }
    try {
        return make_nonlinearity(f, alpha, alpha_star, alpha_tilde);
    } catch (const Error& e) {
        throw ConfigError(n.at(""), e.what());
    }
}

GridConfig parse_grid(const Node& n) {
    n.allow_only({"x_max", "n_panels", "rule", "points_per_panel"});
    GridConfig g;
    g.x_max = n.number("x_max", g.x_max);
    require(g.x_max > 0.0 && std::isfinite(g.x_max), n.at("x_max"), "must be > 0");
    const auto panels = n.integer("n_panels", g.n_panels);
    require(panels >= 1 && panels <= 1'000'000, n.at("n_panels"), "must lie in [1, 1000000]");
    g.n_panels = static_cast<int>(panels);
    const auto rule = n.choice("rule", "gauss_legendre", {"gauss_legendre", "trapezoid"});
    g.rule.rule = rule == "gauss_legendre" ? QuadratureRule::gauss_legendre : QuadratureRule::trapezoid;
    const auto points = n.integer("points_per_panel", g.rule.points_per_panel);
    require(points >= 1 && points <= 64, n.at("points_per_panel"), "must lie in [1, 64]");
    g.rule.points_per_panel = static_cast<int>(points);
    return g;
}

SolverConfig parse_solver(const Node& n) {
    n.allow_only({"tol", "max_iter"});
    SolverConfig s;
    s.tol = n.number("tol", s.tol);
    require(s.tol > 0.0, n.at("tol"), "must be > 0");
    const auto iters = n.integer("max_iter", s.max_iter);
    require(iters >= 1 && iters <= std::numeric_limits<int>::max(), n.at("max_iter"), "must be >= 1");
    s.max_iter = static_cast<int>(iters);
    return s;
}

NemytskySpec parse_nemytsky(const Node& n, const NonlinearitySpec& g) {
    n.allow_only({"g0", "g1", "xi", "eps_star_fraction", "L"});
    NemytskySpec s;
    s.base_g = g;
    s.g0 = n.choice("g0", "g1", {"g1", "g2"}) == "g1" ? G0Family::g1 : G0Family::g2;
    s.g1 = n.choice("g1", "g3", {"g3", "g4"}) == "g3" ? G1Family::g3 : G1Family::g4;
    s.xi = n.number("xi", s.xi);
    require(s.xi > 0.0 && s.xi < 0.5 * g.eta, n.at("xi"), "must lie in (0, eta/2)");
    s.eps_star_fraction = n.number("eps_star_fraction", s.eps_star_fraction);
    require(s.eps_star_fraction >= 0.0 && s.eps_star_fraction <= 1.0, n.at("eps_star_fraction"),
            "must lie in [0, 1]");
    const auto l = n.child("L");
    l.allow_only({"kind", "value"});
    s.l_profile.kind = l.choice("kind", "constant", {"constant", "exp_rise"}) == "constant"
                           ? LProfile::Kind::constant
                           : LProfile::Kind::exp_rise;
    s.l_profile.value = l.number("value", 1.0);
    require(s.l_profile.value >= 0.0 && s.l_profile.value <= 1.0, l.at("value"),
            "must lie in [0, 1]");
    return s;
}

CertificateConfig parse_certificates(const Node& n) {
    n.allow_only({"lemma2", "lemma3", "asymptote", "jensen", "uniqueness", "probe_trials",
                  "perturbation_scale", "seed"});
    CertificateConfig c;
    c.lemma2 = n.boolean("lemma2", c.lemma2);
    c.lemma3 = n.boolean("lemma3", c.lemma3);
    c.asymptote = n.boolean("asymptote", c.asymptote);
    c.jensen = n.boolean("jensen", c.jensen);
    c.uniqueness = n.boolean("uniqueness", c.uniqueness);
    const auto trials = n.integer("probe_trials", c.probe_trials);
    require(trials >= 1 && trials <= 1000, n.at("probe_trials"), "must lie in [1, 1000]");
    c.probe_trials = static_cast<int>(trials);
    c.perturbation_scale = n.number("perturbation_scale", c.perturbation_scale);
    require(c.perturbation_scale > 0.0 && c.perturbation_scale <= 1.0, n.at("perturbation_scale"),
            "must lie in (0, 1]");
    c.seed = n.unsigned_integer("seed", c.seed);
    return c;
}

const char* name(KernelFamily f) {
    return f == KernelFamily::A ? "A" : f == KernelFamily::B ? "B" : "C";
}

const char* name(GFamily f) {
    return f == GFamily::I ? "I" : f == GFamily::II ? "II" : "III";
}

} // namespace

RunConfig parse_config(const Json& doc) {
    const Node root(doc, "");
    root.allow_only({"kernel", "nonlinearity", "grid", "solver", "nemytsky", "certificates"});
    RunConfig c;
    c.kernel = parse_kernel(root.child("kernel"));
    c.nonlinearity = parse_nonlinearity(root.child("nonlinearity"));
    c.grid = parse_grid(root.child("grid"));
    c.solver = parse_solver(root.child("solver"));
    if (root.has("nemytsky")) {
        c.nemytsky = parse_nemytsky(root.child("nemytsky"), c.nonlinearity);
    }
    c.certificates = parse_certificates(root.child("certificates"));
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot read config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    Json doc;
    try {
        doc = Json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("malformed config: ") + e.what());
    }
    return parse_config(doc);
}

Json to_json(const RunConfig& c) {
    Json j;
    auto& k = j["kernel"];
    k["family"] = name(c.kernel.family);
    if (c.kernel.base.kind() == BaseKind::gaussian) {
        k["base"]["kind"] = "gaussian";
    } else {
        k["base"]["kind"] = "exp_mixture";
        auto& atoms = k["base"]["atoms"];
        atoms = Json::array();
        for (const auto& a : c.kernel.base.atoms()) {
            atoms.push_back({{"c", a.c}, {"s", a.s}});
        }
    }
    k["lambda"] = c.kernel.modulation.form == LambdaForm::exp_gap ? "exp_gap" : "rational_gap";
    k["d_star"] = c.kernel.modulation.d_star;
    k["l"] = c.kernel.modulation.l;
    k["delta"] = c.kernel.delta;
    k["epsilon"] = c.kernel.epsilon;

    auto& g = j["nonlinearity"];
    g["family"] = name(c.nonlinearity.family);
    g["alpha"] = c.nonlinearity.alpha;
    g["alpha_star"] = c.nonlinearity.alpha_star;
    g["alpha_tilde"] = c.nonlinearity.alpha_tilde;

    auto& grid = j["grid"];
    grid["x_max"] = c.grid.x_max;
    grid["n_panels"] = c.grid.n_panels;
    grid["rule"] = c.grid.rule.rule == QuadratureRule::gauss_legendre ? "gauss_legendre" : "trapezoid";
    grid["points_per_panel"] = c.grid.rule.points_per_panel;

    j["solver"] = {{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter}};

    if (c.nemytsky) {
        const auto& n = *c.nemytsky;
        auto& nj = j["nemytsky"];
        nj["g0"] = n.g0 == G0Family::g1 ? "g1" : "g2";
        nj["g1"] = n.g1 == G1Family::g3 ? "g3" : "g4";
        nj["xi"] = n.xi;
        nj["eps_star_fraction"] = n.eps_star_fraction;
        nj["L"] = {{"kind", n.l_profile.kind == LProfile::Kind::constant ? "constant" : "exp_rise"},
                   {"value", n.l_profile.value}};
    }

    const auto& cert = c.certificates;
    j["certificates"] = {{"lemma2", cert.lemma2},
                         {"lemma3", cert.lemma3},
                         {"asymptote", cert.asymptote},
                         {"jensen", cert.jensen},
                         {"uniqueness", cert.uniqueness},
                         {"probe_trials", cert.probe_trials},
                         {"perturbation_scale", cert.perturbation_scale},
                         {"seed", cert.seed}};
    return j;
}

} // namespace halfline::cli
