// Copyright 2026 The Facetalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "facetalk/belief.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "facetalk/error.h"

namespace facetalk {
namespace {

void CheckConfidence(double conf) {
  if (!(conf >= 0.0 && conf <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "confidence must lie in [0, 1], got " + FormatNumber(conf));
  }
}

// Renormalizes only when rounding has actually drifted, so exact inputs stay
// exact.
void Normalize(std::vector<double>& probs) {
  double sum = 0;
  for (double p : probs) sum += p;
  if (sum > 0 && std::fabs(sum - 1.0) > 1e-12) {
    for (double& p : probs) p /= sum;
  }
}

SlotBelief& MutableSlot(BeliefState& b, std::string_view slot) {
  auto it = b.slots.find(std::string(slot));
  if (it == b.slots.end()) {
    throw Error(ErrorCode::kNotFound, "no belief for slot '" + std::string(slot) + "'");
  }
  return it->second;
}

// Posterior of a single-valued slot after one constraint; empty when the mask
// is empty.
std::vector<double> Blend(const SlotBelief& prior, const std::vector<bool>& mask,
                          double conf) {
  size_t size = std::count(mask.begin(), mask.end(), true);
  if (size == 0) return {};
  std::vector<double> out(prior.probs.size(), 0.0);
  const double share = 1.0 / static_cast<double>(size);
  if (conf == 1.0) {
    for (size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? share : 0.0;
    return out;
  }
  for (size_t i = 0; i < out.size(); ++i) {
    bool in = i < mask.size() && mask[i];
    out[i] = (1.0 - conf) * prior.probs[i] + (in ? conf * share : 0.0);
  }
  Normalize(out);
  return out;
}

}  // namespace

double SlotBelief::Prob(std::string_view label) const {
  if (label == "none" && !multivalued) return probs.back();
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] == label) return probs[i];
  }
  return 0.0;
}

const SlotBelief& BeliefState::at(std::string_view slot) const {
  auto it = slots.find(std::string(slot));
  if (it == slots.end()) {
    throw Error(ErrorCode::kNotFound, "no belief for slot '" + std::string(slot) + "'");
  }
  return it->second;
}

BeliefState InitBelief(const KnowledgeBase& kb) {
  BeliefState b;
  for (const auto& slot : kb.slots()) {
    SlotBelief sb;
    sb.values = kb.Domain(slot.name);
    sb.multivalued = slot.kind == SlotKind::kMultivalued;
    if (sb.multivalued) {
      sb.probs.assign(sb.values.size(), 0.0);
    } else {
      sb.probs.assign(sb.values.size() + 1,
                      1.0 / static_cast<double>(sb.values.size() + 1));
    }
    b.slots.emplace(slot.name, std::move(sb));
  }
  return b;
}

std::vector<bool> ConsistencyMask(const Constraint& c, const KnowledgeBase& kb) {
  const auto& domain = kb.Domain(c.slot);
  std::vector<bool> mask(domain.size(), false);
  for (size_t i = 0; i < domain.size(); ++i) {
    mask[i] = LabelSatisfies(c, kb, domain[i]);
  }
  return mask;
}

BeliefUpdate UpdateRegular(const BeliefState& b, const Constraint& c, double conf,
                           const KnowledgeBase& kb, int turn) {
  CheckConfidence(conf);
  BeliefUpdate out{b, false};
  SlotBelief& sb = MutableSlot(out.belief, c.slot);
  if (sb.multivalued) {
    throw Error(ErrorCode::kInvalidArgument,
                "slot '" + c.slot + "' is multivalued; use UpdateMultivalued");
  }
  auto posterior = Blend(sb, ConsistencyMask(c, kb), conf);
  if (posterior.empty()) {
    out.unsatisfiable = true;
    return out;
  }
  if (conf == 0.0) return out;
  sb.probs = std::move(posterior);
  if (turn >= 0) sb.last_turn = turn;
  return out;
}

BeliefUpdate UpdateHierarchical(const BeliefState& b,
                                std::span<const Constraint> cs, double conf,
                                const KnowledgeBase& kb, int turn) {
  CheckConfidence(conf);
  BeliefUpdate out{b, false};
  if (cs.empty()) return out;
  for (const auto& c : cs) {
    if (c.slot != cs.front().slot) {
      throw Error(ErrorCode::kInvalidArgument,
                  "hierarchical update mixes slots '" + cs.front().slot +
                      "' and '" + c.slot + "'");
    }
  }
  SlotBelief& sb = MutableSlot(out.belief, cs.front().slot);
  const SlotBelief prior = sb;
  std::vector<std::vector<double>> posteriors;
  for (const auto& c : cs) {
    auto p = Blend(prior, ConsistencyMask(c, kb), conf);
    if (p.empty()) {
      out.unsatisfiable = true;
    } else {
      posteriors.push_back(std::move(p));
    }
  }
  if (posteriors.empty() || conf == 0.0) return out;
  // Sum sorted contributions so the mean does not depend on constraint order.
  std::vector<double> mean(prior.probs.size(), 0.0);
  std::vector<double> column(posteriors.size());
  for (size_t i = 0; i < mean.size(); ++i) {
    for (size_t k = 0; k < posteriors.size(); ++k) column[k] = posteriors[k][i];
    std::sort(column.begin(), column.end());
    double sum = 0;
    for (double x : column) sum += x;
    mean[i] = sum / static_cast<double>(posteriors.size());
  }
  Normalize(mean);
  sb.probs = std::move(mean);
  if (turn >= 0) sb.last_turn = turn;
  return out;
}

BeliefState UpdateMultivalued(const BeliefState& b, std::string_view slot,
                              std::span<const std::string> mentioned,
                              std::span<const std::string> negated, double conf,
                              int turn) {
  CheckConfidence(conf);
  BeliefState out = b;
  SlotBelief& sb = MutableSlot(out, slot);
  if (!sb.multivalued) {
    throw Error(ErrorCode::kInvalidArgument,
                "slot '" + std::string(slot) + "' is not multivalued");
  }
  if (conf == 0.0 || (mentioned.empty() && negated.empty())) return out;
  auto position = [&](const std::string& v) -> size_t {
    auto it = std::find(sb.values.begin(), sb.values.end(), v);
    if (it == sb.values.end()) {
      throw Error(ErrorCode::kNotFound, "unknown value '" + v + "' for slot '" +
                                            std::string(slot) + "'");
    }
    return static_cast<size_t>(it - sb.values.begin());
  };
  const double share = mentioned.empty() ? 0.0 : conf / static_cast<double>(mentioned.size());
  for (const auto& v : mentioned) {
    double& p = sb.probs[position(v)];
    p = 1.0 - (1.0 - p) * (1.0 - share);
  }
  for (const auto& v : negated) {
    double& p = sb.probs[position(v)];
    p = p * (1.0 - conf);
  }
  for (double& p : sb.probs) p = std::clamp(p, 0.0, 1.0);
  if (turn >= 0) sb.last_turn = turn;
  return out;
}

BeliefUpdate ApplyConstraints(const BeliefState& b, std::span<const Constraint> cs,
                              double conf, const KnowledgeBase& kb, int turn) {
  BeliefUpdate out{b, false};
  std::vector<std::string> order;
  for (const auto& c : cs) {
    if (std::find(order.begin(), order.end(), c.slot) == order.end()) {
      order.push_back(c.slot);
    }
  }
  for (const auto& slot_name : order) {
    std::vector<Constraint> group;
    for (const auto& c : cs) {
      if (c.slot == slot_name) group.push_back(c);
    }
    const SlotSchema& slot = kb.slot(slot_name);
    switch (slot.kind) {
      case SlotKind::kHierarchical: {
        auto r = UpdateHierarchical(out.belief, group, conf, kb, turn);
        out.belief = std::move(r.belief);
        out.unsatisfiable |= r.unsatisfiable;
        break;
      }
      case SlotKind::kMultivalued: {
        std::vector<std::string> mentioned;
        std::vector<std::string> negated;
        for (const auto& c : group) {
          auto label = ScalarLabel(c.value);
          (c.op == Op::kNeq ? negated : mentioned).push_back(label);
        }
        out.belief = UpdateMultivalued(out.belief, slot_name, mentioned, negated,
                                       conf, turn);
        break;
      }
      default:
        for (const auto& c : group) {
          auto r = UpdateRegular(out.belief, c, conf, kb, turn);
          out.belief = std::move(r.belief);
          out.unsatisfiable |= r.unsatisfiable;
        }
        break;
    }
  }
  return out;
}

BeliefUpdate ApplyNBest(
    const BeliefState& b,
    std::span<const std::pair<std::vector<Constraint>, double>> hypotheses,
    const KnowledgeBase& kb, int turn) {
  BeliefUpdate out{b, false};
  for (const auto& [cs, score] : hypotheses) {
    auto r = ApplyConstraints(out.belief, cs, score, kb, turn);
    out.belief = std::move(r.belief);
    out.unsatisfiable |= r.unsatisfiable;
  }
  return out;
}

double ConstraintSupport(const BeliefState& prior, const Constraint& c,
                         double conf, const KnowledgeBase& kb) {
  const SlotBelief& sb = prior.at(c.slot);
  if (sb.multivalued) {
    double p = sb.Prob(ScalarLabel(c.value));
    if (c.op == Op::kNeq) return conf + (1.0 - conf) * (1.0 - p);
    return 1.0 - (1.0 - p) * (1.0 - conf);
  }
  auto mask = ConsistencyMask(c, kb);
  auto posterior = Blend(sb, mask, conf);
  if (posterior.empty()) return 0.0;
  double mass = 0;
  for (size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) mass += posterior[i];
  }
  return mass;
}

std::map<std::string, Hypothesis> TopHypothesis(const BeliefState& b,
                                                double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1]");
  }
  std::map<std::string, Hypothesis> out;
  for (const auto& [name, sb] : b.slots) {
    Hypothesis h;
    if (sb.multivalued) {
      for (size_t i = 0; i < sb.values.size(); ++i) {
        if (sb.probs[i] >= threshold) h.set.push_back(sb.values[i]);
      }
      if (!h.set.empty()) h.kind = Hypothesis::Kind::kSet;
    } else {
      size_t best = 0;
      for (size_t i = 1; i < sb.probs.size(); ++i) {
        if (sb.probs[i] > sb.probs[best]) best = i;
      }
      if (best < sb.values.size() && sb.probs[best] >= threshold) {
        h.kind = Hypothesis::Kind::kValue;
        h.value = sb.values[best];
      }
    }
    out.emplace(name, std::move(h));
  }
  return out;
}

double RoundTo9(double p) { return std::round(p * 1e9) / 1e9; }

nlohmann::json BeliefJson(const BeliefState& b) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, sb] : b.slots) {
    nlohmann::json values = nlohmann::json::object();
    for (size_t i = 0; i < sb.values.size(); ++i) {
      values[sb.values[i]] = RoundTo9(sb.probs[i]);
    }
    if (!sb.multivalued) values["none"] = RoundTo9(sb.probs.back());
    out[name] = {{"kind", sb.multivalued ? "marginals" : "distribution"},
                 {"values", values},
                 {"last_turn", sb.last_turn}};
  }
  return out;
}

}  // namespace facetalk
