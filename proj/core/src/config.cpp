#include "lrce/config.hpp"

#include "lrce/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace lrce {

using nlohmann::json;

namespace {

/// Typed access to one JSON object whose keys must come from a fixed set.
class ObjectReader {
public:
    ObjectReader(const json& node, std::string pointer, std::initializer_list<const char*> allowed)
        : node_(node), pointer_(std::move(pointer)) {
        if (!node_.is_object()) throw ConfigError(pointer_.empty() ? "/" : pointer_, "expected an object");
        const std::set<std::string> known(allowed.begin(), allowed.end());
        for (const auto& [key, value] : node_.items())
            if (!known.count(key)) throw ConfigError(path(key), "unknown field \"" + key + "\"");
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    const json& raw(const std::string& key) {
        if (!node_.contains(key)) throw ConfigError(path(key), "required field is missing");
        return node_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(path(key), "expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(path(key), "expected a string");
        return v.get<std::string>();
    }

    ObjectReader child(const std::string& key, std::initializer_list<const char*> allowed) {
        return ObjectReader(raw(key), path(key), allowed);
    }

    /// Family tag of a sub-object, read before its field set is known.
    std::string family_of(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_object()) throw ConfigError(path(key), "expected an object");
        if (!v.contains("family")) throw ConfigError(path(key) + "/family", "required field is missing");
        if (!v.at("family").is_string()) throw ConfigError(path(key) + "/family", "expected a string");
        return v.at("family").get<std::string>();
    }

    std::string path(const std::string& key) const { return pointer_ + "/" + key; }

private:
    const json& node_;
    std::string pointer_;
};

FixedCost read_fixed(ObjectReader& r) {
    return FixedCost{r.number("fixed_intercept", 0.0), r.number("fixed_slope", 1.0)};
}

CostSpec read_cost(ObjectReader& parent) {
    const std::string family = parent.family_of("cost");
    if (family == "quadratic") {
        ObjectReader r = parent.child("cost", {"family", "curvature", "curvature_slope", "fixed_intercept", "fixed_slope"});
        QuadraticCost q{r.number("curvature", 1.0), r.number("curvature_slope", 0.0)};
        return CostSpec(q, read_fixed(r));
    }
    if (family == "power") {
        ObjectReader r = parent.child("cost", {"family", "scale", "exponent", "fixed_intercept", "fixed_slope"});
        PowerCost p{r.number("scale", 1.0), r.number("exponent", 2.0)};
        return CostSpec(p, read_fixed(r));
    }
    throw ConfigError("/model/cost/family", "unknown cost family \"" + family + "\" (quadratic, power)");
}

DemandSpec read_demand(ObjectReader& parent) {
    const std::string family = parent.family_of("demand");
    if (family == "linear") {
        ObjectReader r = parent.child("demand", {"family", "intercept", "slope"});
        return DemandSpec(LinearDemand{r.number("intercept"), r.number("slope")});
    }
    if (family == "power") {
        ObjectReader r = parent.child("demand", {"family", "scale", "choke", "exponent"});
        return DemandSpec(PowerDemand{r.number("scale"), r.number("choke"), r.number("exponent")});
    }
    throw ConfigError("/model/demand/family", "unknown demand family \"" + family + "\" (linear, power)");
}

Matrix read_matrix(const json& node, const std::string& pointer) {
    if (!node.is_array() || node.empty()) throw ConfigError(pointer, "expected a non-empty array of rows");
    const auto n = static_cast<Index>(node.size());
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        const json& row = node[static_cast<std::size_t>(i)];
        const std::string rp = pointer + "/" + std::to_string(i);
        if (!row.is_array() || static_cast<Index>(row.size()) != n)
            throw ConfigError(rp, "expected a row of " + std::to_string(n) + " numbers");
        for (Index j = 0; j < n; ++j) {
            const json& v = row[static_cast<std::size_t>(j)];
            if (!v.is_number()) throw ConfigError(rp + "/" + std::to_string(j), "expected a number");
            m(i, j) = v.get<double>();
        }
    }
    return m;
}

Vector read_vector(const json& node, const std::string& pointer) {
    if (!node.is_array() || node.empty()) throw ConfigError(pointer, "expected a non-empty array");
    Vector v(static_cast<Index>(node.size()));
    for (std::size_t j = 0; j < node.size(); ++j) {
        if (!node[j].is_number()) throw ConfigError(pointer + "/" + std::to_string(j), "expected a number");
        v[static_cast<Index>(j)] = node[j].get<double>();
    }
    return v;
}

ModelPrimitives read_model(ObjectReader r) {
    ModelPrimitives m;
    {
        ObjectReader types = r.child("types", {"low", "high"});
        m.type_low = types.number("low");
        m.type_high = types.number("high");
    }
    m.discount = r.number("discount");
    m.exit_probability = r.number("exit_probability");
    m.entry_cost = r.number("entry_cost", 0.0);
    m.cost = read_cost(r);
    m.demand = read_demand(r);

    const std::string transition = r.family_of("transition");
    if (transition == "truncated_normal") {
        ObjectReader t = r.child("transition", {"family", "persistence", "center", "sigma"});
        m.kernel.transition = TruncatedNormalKernel{t.number("persistence"), t.number("center"), t.number("sigma")};
    } else if (transition == "matrix") {
        ObjectReader t = r.child("transition", {"family", "rows"});
        m.kernel.transition = MatrixKernel{read_matrix(t.raw("rows"), t.path("rows"))};
    } else {
        throw ConfigError("/model/transition/family",
                          "unknown transition family \"" + transition + "\" (truncated_normal, matrix)");
    }

    if (r.has("entrants")) {
        const std::string family = r.family_of("entrants");
        if (family == "uniform") {
            r.child("entrants", {"family"});
            m.kernel.entrants = UniformEntrants{};
        } else if (family == "weights") {
            ObjectReader e = r.child("entrants", {"family", "weights"});
            m.kernel.entrants = WeightedEntrants{read_vector(e.raw("weights"), e.path("weights"))};
        } else {
            throw ConfigError("/model/entrants/family", "unknown entrant family \"" + family + "\" (uniform, weights)");
        }
    }
    return m;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

RunConfig parse_config(const json& doc) {
    ObjectReader root(doc, "", {"model", "grid", "tolerance", "bypass_validation", "simulation"});
    RunConfig cfg;
    cfg.model = read_model(root.child("model", {"types", "discount", "exit_probability", "entry_cost", "cost",
                                                "demand", "transition", "entrants"}));

    const auto* matrix = std::get_if<MatrixKernel>(&cfg.model.kernel.transition);
    Index default_cells = matrix ? matrix->rows.rows() : 201;
    if (root.has("grid")) {
        ObjectReader grid = root.child("grid", {"cells"});
        cfg.cells = grid.integer("cells", default_cells);
    } else {
        cfg.cells = default_cells;
    }
    if (cfg.cells < 2) throw ConfigError("/grid/cells", "need at least 2 cells");
    if (matrix && matrix->rows.rows() != cfg.cells)
        throw ConfigError("/grid/cells", "must equal the transition matrix dimension");
    if (const auto* w = std::get_if<WeightedEntrants>(&cfg.model.kernel.entrants); w && w->weights.size() != cfg.cells)
        throw ConfigError("/model/entrants/weights", "needs one weight per grid cell");

    cfg.tolerance = root.number("tolerance", 1e-10);
    if (!(cfg.tolerance > 0.0)) throw ConfigError("/tolerance", "must be positive");
    cfg.bypass_validation = root.boolean("bypass_validation", false);

    if (root.has("simulation")) {
        ObjectReader s = root.child("simulation", {"entrants", "periods", "burn_in", "seed", "batches"});
        cfg.simulation.entrants = s.integer("entrants", cfg.simulation.entrants);
        cfg.simulation.periods = static_cast<int>(s.integer("periods", cfg.simulation.periods));
        cfg.simulation.burn_in = static_cast<int>(s.integer("burn_in", cfg.simulation.burn_in));
        cfg.simulation.seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<std::int64_t>(cfg.simulation.seed)));
        cfg.simulation.batches = static_cast<int>(s.integer("batches", cfg.simulation.batches));
    }
    return cfg;
}

RunConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line/column for the message.
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError("", "JSON syntax error at line " + std::to_string(line) + ", column " +
                                  std::to_string(column) + ": " + e.what());
    }
    return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

json canonical_json(const RunConfig& cfg) {
    const ModelPrimitives& m = cfg.model;
    json model;
    model["types"] = {{"low", m.type_low}, {"high", m.type_high}};
    model["discount"] = m.discount;
    model["exit_probability"] = m.exit_probability;
    model["entry_cost"] = m.entry_cost;

    json cost;
    std::visit(overloaded{
                   [&](const QuadraticCost& q) {
                       cost = {{"family", "quadratic"}, {"curvature", q.curvature}, {"curvature_slope", q.curvature_slope}};
                   },
                   [&](const PowerCost& p) {
                       cost = {{"family", "power"}, {"scale", p.scale}, {"exponent", p.exponent}};
                   },
               },
               m.cost.variable());
    cost["fixed_intercept"] = m.cost.fixed().intercept;
    cost["fixed_slope"] = m.cost.fixed().slope;
    model["cost"] = cost;

    std::visit(overloaded{
                   [&](const LinearDemand& d) {
                       model["demand"] = {{"family", "linear"}, {"intercept", d.intercept}, {"slope", d.slope}};
                   },
                   [&](const PowerDemand& d) {
                       model["demand"] = {{"family", "power"}, {"scale", d.scale}, {"choke", d.choke}, {"exponent", d.exponent}};
                   },
               },
               m.demand.form());

    std::visit(overloaded{
                   [&](const TruncatedNormalKernel& k) {
                       model["transition"] = {{"family", "truncated_normal"}, {"persistence", k.persistence},
                                              {"center", k.center}, {"sigma", k.sigma}};
                   },
                   [&](const MatrixKernel& k) {
                       json rows = json::array();
                       for (Index i = 0; i < k.rows.rows(); ++i) {
                           json row = json::array();
                           for (Index j = 0; j < k.rows.cols(); ++j) row.push_back(k.rows(i, j));
                           rows.push_back(row);
                       }
                       model["transition"] = {{"family", "matrix"}, {"rows", rows}};
                   },
               },
               m.kernel.transition);

    std::visit(overloaded{
                   [&](const UniformEntrants&) { model["entrants"] = {{"family", "uniform"}}; },
                   [&](const WeightedEntrants& w) {
                       model["entrants"] = {{"family", "weights"},
                                            {"weights", std::vector<double>(w.weights.data(), w.weights.data() + w.weights.size())}};
                   },
               },
               m.kernel.entrants);

    json doc;
    doc["model"] = model;
    doc["grid"] = {{"cells", cfg.cells}};
    doc["tolerance"] = cfg.tolerance;
    doc["bypass_validation"] = cfg.bypass_validation;
    doc["simulation"] = {{"entrants", cfg.simulation.entrants},
                         {"periods", cfg.simulation.periods},
                         {"burn_in", cfg.simulation.burn_in},
                         {"seed", cfg.simulation.seed},
                         {"batches", cfg.simulation.batches}};
    return doc;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string bytes = canonical_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

} // namespace lrce
