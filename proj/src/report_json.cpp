#include "permreg/report_json.hpp"

namespace permreg {

json to_json(Interval iv) { return json::array({iv.lo, iv.hi}); }

json to_json(const Cdf& f) {
  json out = json::array();
  for (const auto& [x, v] : f.breakpoints()) out.push_back(json::array({x, v}));
  return out;
}

json to_json(const EquitablePartition& p) {
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back(to_json(b));
  return json{{"n", p.n},
              {"k", p.k()},
              {"block_length", p.block_length()},
              {"blocks", blocks},
              {"exceptional", p.exceptional.members()}};
}

json to_json(const RegularityReport& r, const std::vector<TraceEntry>& iterations) {
  json pairs = json::array();
  for (const auto& p : r.irregular_pairs)
    pairs.push_back({{"s", p.s}, {"t", p.t}, {"I", to_json(p.I)}, {"J", to_json(p.J)}, {"gap", p.gap}});
  json trace = json::array();
  for (const auto& t : iterations)
    trace.push_back({{"q", t.q}, {"k", t.k}, {"exceptional_size", t.exceptional_size}});
  return json{{"epsilon", r.epsilon},
              {"k", r.k},
              {"block_length", r.block_length},
              {"exceptional_size", r.exceptional_size},
              {"q", r.q},
              {"regular", r.regular},
              {"irregular_pairs", pairs},
              {"iterations", trace}};
}

json to_json(const RegularRun& run) {
  json out = to_json(run.report, run.trace);
  out["status"] = run.status == RunStatus::success ? "success" : "exhausted";
  if (!run.reason.empty()) out["reason"] = run.reason;
  out["partition"] = to_json(run.partition);
  return out;
}

json to_json(const UniformPartition& u, const std::optional<UniformCheck>& check) {
  json cdfs = json::array();
  for (const auto& f : u.family) cdfs.push_back(to_json(f));
  json out{{"epsilon", u.epsilon},
           {"k", u.partition.k()},
           {"block_length", u.partition.block_length()},
           {"exceptional_size", u.partition.exceptional.size()},
           {"starting_k", u.starting_k},
           {"attempts", u.attempts},
           {"discarded", u.discarded},
           {"partition", to_json(u.partition)},
           {"cdfs", cdfs}};
  if (check) {
    json v{{"uniform", check->uniform}, {"exceptional_ok", check->exceptional_ok}};
    if (check->block >= 0) {
      v["block"] = check->block;
      v["I"] = to_json(check->I);
      v["alpha"] = check->alpha;
      v["gap"] = check->gap;
    }
    out["verification"] = v;
  }
  return out;
}

json to_json(const Estimate& e) {
  json out{{"estimate", e.estimate}, {"bound", e.bound}};
  if (e.exact) {
    out["exact"] = *e.exact;
    const double diff = e.estimate - static_cast<double>(*e.exact);
    out["difference"] = diff < 0 ? -diff : diff;
    out["within_bound"] = (diff < 0 ? -diff : diff) <= e.bound;
  }
  out["epsilon"] = e.epsilon;
  out["k"] = e.k;
  out["m"] = e.m;
  if (e.smoothed_estimate) out["smoothed_estimate"] = *e.smoothed_estimate;
  if (e.delta) out["delta"] = *e.delta;
  return out;
}

json to_json(const DestroyResult& d, const std::optional<DestroyCheck>& check) {
  json pairs = json::array();
  for (const auto& [i, j] : d.deleted.pairs) pairs.push_back(json::array({i, j}));
  json out{{"pairs", pairs},
           {"audit",
            {{"total", d.deleted.pairs.size()},
             {"rule_a", d.rule_a},
             {"rule_b", d.rule_b},
             {"rule_c", d.rule_c},
             {"k", d.k},
             {"block_length", d.block_length},
             {"exceptional_size", d.exceptional_size},
             {"epsilon", d.epsilon}}}};
  if (check) {
    out["verified"] = check->destroyed;
    if (!check->destroyed) out["witness"] = check->witness;
  }
  return out;
}

json to_json(const QuasirandomReport& r) {
  json out{{"n", r.n},
              {"D_star", r.D_star},
              {"D", {{"lower", r.D_lower}, {"upper", r.D_upper}, {"exact", r.D_exact}}},
              {"SP", {{"grid", r.sp_grid}, {"stat", r.sp_stat}}},
              {"two_subseq", {{"size", r.two_s_size}, {"difference", r.two_s_stat}}},
              {"m_subseq", {{"pattern", r.m_s_pattern}, {"deviation", r.m_s_stat}}},
              {"translation", r.translation_stat},
              {"eigenvalue_profile", r.eigenvalue_profile},
              {"near_identity",
               {{"epsilon", r.epsilon},
                {"near", r.near_id.near},
                {"k", r.near_id.k},
                {"exceptional_size", r.near_id.exceptional_size},
                {"worst_block", r.near_id.worst_block},
                {"worst_gap", r.near_id.worst_gap}}}};
  if (!r.near_id.failure.empty()) out["near_identity"]["failure"] = r.near_id.failure;
  return out;
}

}  // namespace permreg
