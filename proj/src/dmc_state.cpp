#include "csitlab/dmc_state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

#include "csitlab/errors.hpp"

namespace csitlab {

DiscreteChannelSpec::DiscreteChannelSpec(
    std::vector<std::string> states, std::vector<std::string> inputs,
    std::vector<std::string> outputs, Distribution state_dist,
    std::vector<Distribution> kernel, std::vector<double> cost,
    std::int32_t zero_input)
    : states_(std::move(states)), inputs_(std::move(inputs)),
      outputs_(std::move(outputs)), p_s_(std::move(state_dist)),
      kernel_(std::move(kernel)), cost_(std::move(cost)),
      zero_input_(zero_input) {
    if (states_.empty() || inputs_.empty() || outputs_.empty())
        throw ShapeError("channel alphabets must be nonempty");
    if (p_s_.size() != states_.size())
        throw ShapeError("state distribution size mismatch");
    if (kernel_.size() != inputs_.size() * states_.size())
        throw ShapeError("kernel must have |X|*|S| rows");
    for (const auto& r : kernel_)
        if (r.size() != outputs_.size())
            throw ShapeError("kernel row length must be |Y|");
    if (cost_.size() != inputs_.size())
        throw ShapeError("cost vector must have |X| entries");
    for (double c : cost_)
        if (!(c >= 0.0)) throw DomainError("costs must be >= 0");
    if (zero_input_ < 0 || static_cast<std::size_t>(zero_input_) >= inputs_.size())
        throw ShapeError("zero_input index out of range");
    if (cost_[static_cast<std::size_t>(zero_input_)] != 0.0)
        throw DomainError("designated zero-cost input has nonzero cost");
}

const Distribution& DiscreteChannelSpec::row(std::size_t input,
                                             std::size_t state) const {
    if (input >= input_count() || state >= state_count())
        throw ShapeError("kernel index out of range");
    return kernel_[input * state_count() + state];
}

std::uint64_t DiscreteChannelSpec::mapping_count() const {
    std::uint64_t n = 1;
    for (std::size_t s = 0; s < state_count(); ++s) {
        if (n > std::numeric_limits<std::int64_t>::max() / input_count())
            return std::numeric_limits<std::int64_t>::max();
        n *= input_count();
    }
    return n;
}

StrategyMapping DiscreteChannelSpec::mapping_from_index(std::uint64_t index) const {
    StrategyMapping u;
    u.map.resize(state_count());
    for (std::size_t s = 0; s < state_count(); ++s) {
        u.map[s] = static_cast<std::int32_t>(index % input_count());
        index /= input_count();
    }
    return u;
}

StrategyMapping DiscreteChannelSpec::all_zero_mapping() const {
    StrategyMapping u;
    u.map.assign(state_count(), zero_input_);
    return u;
}

std::string DiscreteChannelSpec::format_mapping(const StrategyMapping& u) const {
    check_mapping(u);
    std::string out = "(";
    for (std::size_t s = 0; s < state_count(); ++s) {
        if (s > 0) out += ", ";
        out += states_[s] + "→" +
               inputs_[static_cast<std::size_t>(u.map[s])];
    }
    out += ")";
    return out;
}

void DiscreteChannelSpec::check_mapping(const StrategyMapping& u) const {
    if (u.map.size() != state_count())
        throw ShapeError("mapping must assign an input to every state");
    for (std::int32_t x : u.map)
        if (x < 0 || static_cast<std::size_t>(x) >= input_count())
            throw ShapeError("mapping entry out of input range");
}

namespace {

std::vector<double> json_doubles(const nlohmann::json& v, const char* field) {
    if (!v.is_array()) throw ConfigError(std::string(field) + ": expected an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(std::string(field) + ": expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::string> json_names(const nlohmann::json& v, const char* field) {
    if (!v.is_array()) throw ConfigError(std::string(field) + ": expected an array");
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_string()) throw ConfigError(std::string(field) + ": expected strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

const nlohmann::json& require(const nlohmann::json& doc, const char* field) {
    auto it = doc.find(field);
    if (it == doc.end())
        throw ConfigError(std::string("channel spec: missing field '") + field + "'");
    return *it;
}

} // namespace

DiscreteChannelSpec DiscreteChannelSpec::from_json(const nlohmann::json& doc) {
    auto states = json_names(require(doc, "states"), "states");
    auto inputs = json_names(require(doc, "inputs"), "inputs");
    auto outputs = json_names(require(doc, "outputs"), "outputs");
    Distribution p_s{json_doubles(require(doc, "p_s"), "p_s")};

    const auto& kj = require(doc, "kernel");
    if (!kj.is_array()) throw ConfigError("kernel: expected an array of rows");
    std::vector<Distribution> kernel;
    kernel.reserve(kj.size());
    for (const auto& rowj : kj)
        kernel.emplace_back(json_doubles(rowj, "kernel row"));

    auto cost = json_doubles(require(doc, "cost"), "cost");

    const auto& zj = require(doc, "zero_input");
    if (!zj.is_string()) throw ConfigError("zero_input: expected an input name");
    const auto zname = zj.get<std::string>();
    const auto it = std::find(inputs.begin(), inputs.end(), zname);
    if (it == inputs.end())
        throw ConfigError("zero_input '" + zname + "' is not an input name");
    const auto zero = static_cast<std::int32_t>(it - inputs.begin());

    try {
        return DiscreteChannelSpec(std::move(states), std::move(inputs),
                                   std::move(outputs), std::move(p_s),
                                   std::move(kernel), std::move(cost), zero);
    } catch (const Error& e) {
        throw ConfigError(std::string("channel spec: ") + e.what());
    }
}

DiscreteChannelSpec DiscreteChannelSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open channel spec: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json DiscreteChannelSpec::to_json() const {
    nlohmann::json doc;
    doc["states"] = states_;
    doc["inputs"] = inputs_;
    doc["outputs"] = outputs_;
    doc["p_s"] = p_s_.probs();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : kernel_) rows.push_back(r.probs());
    doc["kernel"] = rows;
    doc["cost"] = cost_;
    doc["zero_input"] = inputs_[static_cast<std::size_t>(zero_input_)];
    return doc;
}

Distribution induced_output_dist(const DiscreteChannelSpec& chan,
                                 const StrategyMapping& u) {
    chan.check_mapping(u);
    std::vector<double> out(chan.output_count(), 0.0);
    for (std::size_t s = 0; s < chan.state_count(); ++s) {
        const double ps = chan.state_dist()[s];
        const Distribution& row =
            chan.row(static_cast<std::size_t>(u.map[s]), s);
        for (std::size_t y = 0; y < out.size(); ++y) out[y] += ps * row[y];
    }
    // Mixture of distributions; renormalization is never needed, but rounding
    // can leave the sum a few ulps off 1, which the constructor tolerates.
    return Distribution(std::move(out));
}

double expected_cost(const DiscreteChannelSpec& chan, const StrategyMapping& u) {
    chan.check_mapping(u);
    double c = 0.0;
    for (std::size_t s = 0; s < chan.state_count(); ++s)
        c += chan.state_dist()[s] * chan.cost(static_cast<std::size_t>(u.map[s]));
    return c;
}

double mutual_information(const DiscreteChannelSpec& chan,
                          const std::vector<StrategyMapping>& mappings,
                          const std::vector<double>& pu) {
    if (mappings.size() != pu.size())
        throw ShapeError("mapping list and weight vector differ in length");
    Distribution weights{pu}; // validates nonnegativity and normalization

    std::vector<Distribution> induced;
    induced.reserve(mappings.size());
    for (const auto& u : mappings) induced.push_back(induced_output_dist(chan, u));

    std::vector<double> marginal(chan.output_count(), 0.0);
    for (std::size_t i = 0; i < induced.size(); ++i)
        for (std::size_t y = 0; y < marginal.size(); ++y)
            marginal[y] += weights[i] * induced[i][y];
    const Distribution p_y{std::move(marginal)};

    double info = 0.0;
    for (std::size_t i = 0; i < induced.size(); ++i)
        if (weights[i] > 0.0)
            info += weights[i] * relative_entropy(induced[i], p_y);
    return info;
}

bool CapacityPerUnitCost::is_infinite() const {
    return std::isinf(value);
}

CapacityPerUnitCost capacity_per_unit_cost(const DiscreteChannelSpec& chan,
                                           std::uint64_t enumeration_cap) {
    const std::uint64_t total = chan.mapping_count();
    if (total > enumeration_cap)
        throw CapExceededError("mapping space " + std::to_string(total) +
                               " exceeds enumeration cap " +
                               std::to_string(enumeration_cap));

    const Distribution base = induced_output_dist(chan, chan.all_zero_mapping());

    CapacityPerUnitCost best;
    best.value = -1.0;
    bool found = false;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const StrategyMapping u = chan.mapping_from_index(idx);
        const double cost = expected_cost(chan, u);
        const double div = relative_entropy(induced_output_dist(chan, u), base);
        if (cost == 0.0 && div == 0.0) continue; // carries nothing, costs nothing
        double ratio;
        if (cost == 0.0 || std::isinf(div))
            ratio = std::numeric_limits<double>::infinity();
        else
            ratio = div / cost;
        if (!found || ratio > best.value) {
            best.value = ratio;
            best.argmax = u;
            found = true;
        }
    }
    if (!found) {
        // Every mapping is equivalent to staying silent.
        best.value = 0.0;
        best.argmax = chan.all_zero_mapping();
    }
    return best;
}

} // namespace csitlab
