// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bellsim/model.hpp"

#include <cmath>
#include <vector>

#include "bellsim/quantum_oracle.hpp"

namespace bellsim {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::ontic ? "ontic" : "epistemic";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "ontic") return ModelKind::ontic;
  if (name == "epistemic") return ModelKind::epistemic;
  return std::nullopt;
}

ChshEstimate estimate_chsh(const OnticSampler& model, const ChshSettings& s, std::uint64_t total,
                           std::uint64_t seed, unsigned workers) {
  const std::array<std::pair<Setting, Setting>, 4> pairs{
      {{s.a, s.b}, {s.a, s.b_prime}, {s.a_prime, s.b}, {s.a_prime, s.b_prime}}};
  ChshEstimate est;
  est.samples_per_term = total / 4;
  const double n = static_cast<double>(est.samples_per_term);
  double variance = 0.0;
  for (std::size_t t = 0; t < 4; ++t) {
    const JointEigenbasis basis = joint_eigenbasis(pairs[t].first, pairs[t].second, model.reference());
    std::vector<std::int64_t> sums(chunk_count(est.samples_per_term), 0);
    for_each_chunk(est.samples_per_term, stream_seed(seed, t), workers,
                   [&](Rng& rng, std::uint64_t, std::uint64_t count, std::uint64_t c) {
                     std::int64_t acc = 0;
                     for (std::uint64_t i = 0; i < count; ++i) {
                       const OutcomePair o = outcomes(model(rng), basis);
                       acc += o.x * o.y;
                     }
                     sums[c] = acc;
                   });
    std::int64_t sum = 0;
    for (auto v : sums) sum += v;
    const double e = n > 0 ? static_cast<double>(sum) / n : 0.0;
    est.correlations[t] = e;
    variance += (1.0 - e * e) / n;
  }
  est.value = est.correlations[0] + est.correlations[1] + est.correlations[2] - est.correlations[3];
  est.sigma = std::sqrt(variance);
  return est;
}

}  // namespace bellsim
