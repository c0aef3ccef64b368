#include "hawkes/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace hawkes {

namespace {

using nlohmann::json;

json node_to_json(const toml::node& node, const std::string& where) {
    if (const auto* t = node.as_table()) {
        json out = json::object();
        for (auto&& [k, v] : *t) out[std::string(k.str())] = node_to_json(v, where + "." + std::string(k.str()));
        return out;
    }
    if (const auto* a = node.as_array()) {
        json out = json::array();
        for (const auto& v : *a) out.push_back(node_to_json(v, where + "[]"));
        return out;
    }
    if (const auto* v = node.as_integer()) return v->get();
    if (const auto* v = node.as_floating_point()) return v->get();
    if (const auto* v = node.as_boolean()) return v->get();
    if (const auto* v = node.as_string()) return v->get();
    throw SchemaError(where, "dates and times are not supported");
}

// Typed, path-aware view of one JSON object.
class Block {
public:
    Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_, "expected a table");
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }
    [[nodiscard]] std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    Block block(const std::string& key) const {
        if (!has(key)) throw SchemaError(field(key), "required block is missing");
        return Block(j_.at(key), field(key));
    }

    double number(const std::string& key) const {
        if (!has(key)) throw SchemaError(field(key), "required field is missing");
        const auto& v = j_.at(key);
        if (!v.is_number()) throw SchemaError(field(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw SchemaError(field(key), "expected a finite number");
        return x;
    }
    double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::size_t count(const std::string& key, std::size_t fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw SchemaError(field(key), "expected a non-negative integer");
        return v.get<std::size_t>();
    }

    std::string text(const std::string& key) const {
        if (!has(key)) throw SchemaError(field(key), "required field is missing");
        const auto& v = j_.at(key);
        if (!v.is_string()) throw SchemaError(field(key), "expected a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? text(key) : fallback;
    }

    bool flag(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw SchemaError(field(key), "expected a boolean");
        return v.get<bool>();
    }

    const json& raw(const std::string& key) const { return j_.at(key); }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!ok.count(it.key())) throw SchemaError(field(it.key()), "unknown field");
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
};

template <class F>
auto guarded(const std::string& field, F&& fn) {
    try {
        return fn();
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(field, e.what());
    }
}

Kernel parse_kernel(const Block& b, double horizon) {
    const std::string family = b.text("family");
    return guarded(b.path(), [&]() -> Kernel {
        if (family == "exponential") {
            b.allow({"family", "alpha", "beta"});
            return Kernel::exponential(b.number("alpha"), b.number("beta"));
        }
        if (family == "constant") {
            b.allow({"family", "c", "support"});
            return Kernel::constant(b.number("c"), b.number("support", horizon));
        }
        if (family == "zero") {
            b.allow({"family"});
            return Kernel::zero();
        }
        if (family == "table") {
            b.allow({"family", "knots", "non_increasing"});
            if (!b.has("knots") || !b.raw("knots").is_array())
                throw SchemaError(b.field("knots"), "expected an array of [time, rate] pairs");
            TableKernel t;
            const auto& arr = b.raw("knots");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const auto& k = arr[i];
                if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
                    throw SchemaError(b.field("knots") + "[" + std::to_string(i) + "]", "expected [time, rate]");
                t.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
            }
            return Kernel(std::move(t), b.flag("non_increasing", false));
        }
        throw SchemaError(b.field("family"), "unknown kernel family '" + family + "'");
    });
}

MarkArg parse_arg(const Block& b) {
    const std::string a = b.text("arg", "eta");
    if (a == "eta") return MarkArg::eta;
    if (a == "theta") return MarkArg::theta;
    throw SchemaError(b.field("arg"), "expected 'eta' or 'theta'");
}

ClaimMap parse_map(const Block& b) {
    const std::string type = b.text("type");
    ClaimMap m;
    if (type == "constant") {
        b.allow({"type", "value"});
        m = ClaimMap::constant(b.number("value"));
    } else if (type == "identity_capped") {
        b.allow({"type", "cap", "arg"});
        m = ClaimMap::identity_capped(b.number("cap"), parse_arg(b));
    } else if (type == "indicator_above") {
        b.allow({"type", "threshold", "unit", "arg"});
        m = ClaimMap::indicator_above(b.number("threshold"), b.number("unit", 1.0), parse_arg(b));
    } else if (type == "affine_capped") {
        b.allow({"type", "a", "b", "cap", "arg"});
        m = ClaimMap::affine_capped(b.number("a", 0.0), b.number("b", 1.0), b.number("cap"), parse_arg(b));
    } else {
        throw SchemaError(b.field("type"), "unknown map type '" + type + "'");
    }
    guarded(b.path(), [&] {
        m.validate(b.path());
        return 0;
    });
    return m;
}

MarkDistribution parse_marks(const Block& b) {
    const std::string type = b.text("type");
    if (type == "deterministic") {
        b.allow({"type", "eta", "theta"});
        return DeterministicMarks{b.number("eta", 1.0), b.number("theta", 1.0)};
    }
    if (type == "exponential") {
        b.allow({"type", "rate_eta", "rate_theta"});
        return IndependentExponential{b.number("rate_eta", 1.0), b.number("rate_theta", 1.0)};
    }
    if (type == "lognormal") {
        b.allow({"type", "mu_eta", "sigma_eta", "mu_theta", "sigma_theta", "rho"});
        return LognormalPair{b.number("mu_eta", 0.0), b.number("sigma_eta", 1.0), b.number("mu_theta", 0.0),
                             b.number("sigma_theta", 1.0), b.number("rho", 0.0)};
    }
    throw SchemaError(b.field("type"), "unknown mark distribution '" + type + "'");
}

ClaimModel parse_claims(const Block& b) {
    b.allow({"kappa", "marks", "f", "g"});
    ClaimModel m;
    m.kappa = b.number("kappa", 0.0);
    if (b.has("marks")) m.marks = parse_marks(b.block("marks"));
    if (b.has("f")) m.f = parse_map(b.block("f"));
    if (b.has("g")) m.g = parse_map(b.block("g"));
    guarded(b.path(), [&] {
        m.validate();
        return 0;
    });
    return m;
}

Contract parse_contract(const Block& b) {
    b.allow({"h", "attachment", "upper", "value", "retention", "cap"});
    const std::string h = b.text("h");
    Contract c;
    guarded(b.field("h"), [&] {
        if (h == "stoploss")
            c.h = Payoff::stoploss(b.number("attachment"));
        else if (h == "identity")
            c.h = Payoff::identity();
        else if (h == "cdf_band")
            c.h = Payoff::cdf_band(b.number("attachment"), b.number("upper"));
        else if (h == "constant")
            c.h = Payoff::constant(b.number("value"));
        else
            throw SchemaError(b.field("h"), "unknown payoff '" + h + "'");
        return 0;
    });
    c.retention = b.number("retention", c.h.kind == Payoff::Kind::identity ? 0.0 : c.h.lower);
    if (b.has("cap")) c.cap = b.number("cap");
    guarded(b.path(), [&] {
        c.validate();
        return 0;
    });
    return c;
}

Numerics parse_numerics(const Block& b) {
    b.allow({"seed", "paths", "order", "max_order", "samples_per_term", "inner_draws", "n_terms", "p_max",
             "bound_samples", "volterra_step", "mphi_order", "mphi_samples", "mphi_method", "simulate_paths",
             "validate_paths", "validate_sigma", "severity_floor"});
    Numerics n;
    n.seed = b.count("seed", n.seed);
    n.paths = b.count("paths", n.paths);
    n.order = b.count("order", n.order);
    n.max_order = b.count("max_order", n.max_order);
    n.samples_per_term = b.count("samples_per_term", n.samples_per_term);
    n.inner_draws = b.count("inner_draws", n.inner_draws);
    n.n_terms = b.count("n_terms", n.n_terms);
    n.p_max = b.count("p_max", n.p_max);
    n.bound_samples = b.count("bound_samples", n.bound_samples);
    n.volterra_step = b.number("volterra_step", n.volterra_step);
    n.mphi_order = b.count("mphi_order", n.mphi_order);
    n.mphi_samples = b.count("mphi_samples", n.mphi_samples);
    n.simulate_paths = b.count("simulate_paths", n.simulate_paths);
    n.validate_paths = b.count("validate_paths", n.validate_paths);
    n.validate_sigma = b.number("validate_sigma", n.validate_sigma);
    if (b.has("severity_floor")) n.severity_floor = b.number("severity_floor");
    const std::string method = b.text("mphi_method", "automatic");
    if (method == "automatic")
        n.mphi_method = MPhiMethod::automatic;
    else if (method == "quadrature")
        n.mphi_method = MPhiMethod::quadrature;
    else if (method == "monte_carlo")
        n.mphi_method = MPhiMethod::monte_carlo;
    else if (method == "closed_form")
        n.mphi_method = MPhiMethod::closed_form;
    else
        throw SchemaError(b.field("mphi_method"), "unknown method '" + method + "'");
    auto positive = [&](std::size_t v, const char* key) {
        if (v == 0) throw SchemaError(b.field(key), "must be >= 1");
    };
    positive(n.paths, "paths");
    positive(n.samples_per_term, "samples_per_term");
    positive(n.inner_draws, "inner_draws");
    positive(n.p_max, "p_max");
    positive(n.bound_samples, "bound_samples");
    positive(n.max_order, "max_order");
    positive(n.mphi_order, "mphi_order");
    if (n.volterra_step < 0.0) throw SchemaError(b.field("volterra_step"), "must be >= 0");
    if (!(n.validate_sigma > 0.0)) throw SchemaError(b.field("validate_sigma"), "must be > 0");
    return n;
}

}  // namespace

json toml_to_json(const std::string& text, const std::string& source) {
    try {
        const toml::table tbl = toml::parse(text, source);
        return node_to_json(tbl, "");
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << e.description() << " (line " << e.source().begin.line << ")";
        throw SchemaError(source, os.str());
    }
}

RunConfig parse_config(const json& doc) {
    const Block root(doc, "");
    root.allow({"kernel", "hawkes", "claims", "contract", "numerics"});
    const Block hw = root.block("hawkes");
    hw.allow({"mu", "horizon"});
    const double mu = hw.number("mu");
    const double horizon = hw.number("horizon");
    if (!(mu > 0.0)) throw SchemaError("hawkes.mu", "must be > 0");
    if (!(horizon > 0.0)) throw SchemaError("hawkes.horizon", "must be > 0");
    Kernel kernel = parse_kernel(root.block("kernel"), horizon);
    HawkesParams params = guarded("kernel", [&] { return HawkesParams(mu, kernel, horizon); });
    ClaimModel model = root.has("claims") ? parse_claims(root.block("claims")) : ClaimModel{};
    std::optional<Contract> contract;
    if (root.has("contract")) contract = parse_contract(root.block("contract"));
    Numerics numerics = root.has("numerics") ? parse_numerics(root.block("numerics")) : Numerics{};
    return RunConfig{std::move(params), std::move(model), std::move(contract), numerics, doc};
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = file.extension() == ".json" || (first != std::string::npos && text[first] == '{');
    json doc;
    if (is_json) {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw SchemaError(file.string(), std::string("invalid JSON: ") + e.what());
        }
    } else {
        doc = toml_to_json(text, file.string());
    }
    return parse_config(doc);
}

}  // namespace hawkes
