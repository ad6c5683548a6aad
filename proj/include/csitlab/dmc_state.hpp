#ifndef CSITLAB_DMC_STATE_HPP
#define CSITLAB_DMC_STATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "csitlab/distribution.hpp"

#include "json.hpp"

namespace csitlab {

// State-to-input mapping (a Shannon strategy): entry s holds the input
// transmitted when the current state is s.
struct StrategyMapping {
    std::vector<std::int32_t> map;

    bool operator==(const StrategyMapping&) const = default;
};

// Finite channel with i.i.d. states: P(y | x, s) plus a state distribution,
// per-input costs, and a designated zero-cost input.
class DiscreteChannelSpec {
public:
    DiscreteChannelSpec(std::vector<std::string> states,
                        std::vector<std::string> inputs,
                        std::vector<std::string> outputs, Distribution state_dist,
                        std::vector<Distribution> kernel, // row x*|S|+s over Y
                        std::vector<double> cost, std::int32_t zero_input);

    std::size_t state_count() const { return states_.size(); }
    std::size_t input_count() const { return inputs_.size(); }
    std::size_t output_count() const { return outputs_.size(); }

    const std::vector<std::string>& state_names() const { return states_; }
    const std::vector<std::string>& input_names() const { return inputs_; }
    const std::vector<std::string>& output_names() const { return outputs_; }

    const Distribution& state_dist() const { return p_s_; }
    const Distribution& row(std::size_t input, std::size_t state) const;
    const std::vector<double>& costs() const { return cost_; }
    double cost(std::size_t input) const { return cost_.at(input); }
    std::int32_t zero_input() const { return zero_input_; }

    // |X|^|S|, saturating at 2^63-1.
    std::uint64_t mapping_count() const;
    StrategyMapping mapping_from_index(std::uint64_t index) const;
    StrategyMapping all_zero_mapping() const;
    std::string format_mapping(const StrategyMapping& u) const;

    void check_mapping(const StrategyMapping& u) const;

    static DiscreteChannelSpec from_json(const nlohmann::json& doc);
    static DiscreteChannelSpec load(const std::string& path);
    nlohmann::json to_json() const;

private:
    std::vector<std::string> states_, inputs_, outputs_;
    Distribution p_s_;
    std::vector<Distribution> kernel_;
    std::vector<double> cost_;
    std::int32_t zero_input_;
};

// P(y | U = u) = sum_s P_S(s) P(y | u(s), s).
Distribution induced_output_dist(const DiscreteChannelSpec& chan,
                                 const StrategyMapping& u);

// sum_s P_S(s) b(u(s)).
double expected_cost(const DiscreteChannelSpec& chan, const StrategyMapping& u);

// I(U;Y) for an explicit distribution over mappings.
double mutual_information(const DiscreteChannelSpec& chan,
                          const std::vector<StrategyMapping>& mappings,
                          const std::vector<double>& pu);

struct CapacityPerUnitCost {
    double value = 0.0; // +infinity is a first-class outcome
    StrategyMapping argmax;

    bool is_infinite() const;
};

// sup over mappings of D(P_{Y|U=u} || P_{Y|U=0}) / E[b | U=u] by exhaustive
// enumeration. Mappings with zero cost and zero divergence carry nothing and
// are skipped; a zero-cost mapping with positive divergence (or an infinite
// divergence at finite cost) makes the value +infinity.
CapacityPerUnitCost capacity_per_unit_cost(const DiscreteChannelSpec& chan,
                                           std::uint64_t enumeration_cap = 1000000);

} // namespace csitlab

#endif
