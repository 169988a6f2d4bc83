#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "permreg/counting.hpp"
#include "permreg/patterns.hpp"
#include "permreg/quasirand.hpp"
#include "permreg/regularity.hpp"
#include "permreg/uniformity.hpp"

namespace permreg {

using json = nlohmann::ordered_json;

json to_json(Interval iv);
// [[position, value], ...] with right-limit values
json to_json(const Cdf& f);
json to_json(const EquitablePartition& p);
json to_json(const RegularityReport& r, const std::vector<TraceEntry>& iterations = {});
json to_json(const RegularRun& run);
json to_json(const UniformPartition& u, const std::optional<UniformCheck>& check = std::nullopt);
json to_json(const Estimate& e);
json to_json(const DestroyResult& d, const std::optional<DestroyCheck>& check = std::nullopt);
json to_json(const QuasirandomReport& r);

}  // namespace permreg
