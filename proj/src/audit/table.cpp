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

#include "bellsim/audit/table.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace bellsim::audit {

std::optional<std::size_t> VariableSpec::index_of(std::int64_t v) const {
  const auto it = std::find(values.begin(), values.end(), v);
  if (it == values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

Indexer::Indexer(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  strides_.assign(sizes_.size(), 1);
  cells_ = 1;
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    strides_[i] = cells_;
    cells_ *= sizes_[i];
  }
}

std::size_t Indexer::flatten(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) flat += idx[i] * strides_[i];
  return flat;
}

void Indexer::unflatten(std::size_t flat, std::span<std::size_t> idx) const {
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    idx[i] = flat / strides_[i];
    flat %= strides_[i];
  }
}

namespace {

Indexer indexer_for(const std::vector<VariableSpec>& vars) {
  std::vector<std::size_t> sizes;
  sizes.reserve(vars.size());
  for (const auto& v : vars) sizes.push_back(v.size());
  return Indexer(std::move(sizes));
}

std::vector<VariableSpec> select(const std::vector<VariableSpec>& vars,
                                 std::span<const std::size_t> axes) {
  std::vector<VariableSpec> out;
  out.reserve(axes.size());
  for (auto a : axes) out.push_back(vars[a]);
  return out;
}

bool is_zero(const double& v) { return v == 0.0; }
bool is_zero(const Rational& v) { return v == 0; }

}  // namespace

double to_double(const double& v) { return v; }
double to_double(const Rational& v) { return v.convert_to<double>(); }

std::vector<std::size_t> project_indices(const std::vector<VariableSpec>& vars,
                                         std::span<const std::size_t> axes) {
  const Indexer full = indexer_for(vars);
  std::vector<std::size_t> sub_sizes;
  for (auto a : axes) sub_sizes.push_back(vars[a].size());
  const Indexer sub(sub_sizes);
  std::vector<std::size_t> out(full.cells());
  std::vector<std::size_t> idx(full.rank());
  std::vector<std::size_t> sub_idx(axes.size());
  for (std::size_t f = 0; f < full.cells(); ++f) {
    full.unflatten(f, idx);
    for (std::size_t k = 0; k < axes.size(); ++k) sub_idx[k] = idx[axes[k]];
    out[f] = sub.flatten(sub_idx);
  }
  return out;
}

std::string describe_tuple(const std::vector<VariableSpec>& vars, const Indexer& idx,
                           std::size_t flat) {
  std::vector<std::size_t> v(idx.rank());
  idx.unflatten(flat, v);
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i > 0) out += ',';
    out += fmt::format("{}={}", vars[i].name, vars[i].values[v[i]]);
  }
  return out;
}

template <class S>
void ProbabilityTable<S>::validate_variables(const std::vector<VariableSpec>& vars) {
  std::set<std::string> names;
  for (const auto& v : vars) {
    if (v.name.empty()) throw std::invalid_argument("variable name is empty");
    if (v.values.empty()) throw std::invalid_argument("variable " + v.name + " has an empty domain");
    if (!names.insert(v.name).second) throw std::invalid_argument("duplicate variable " + v.name);
    const std::set<std::int64_t> distinct(v.values.begin(), v.values.end());
    if (distinct.size() != v.values.size()) {
      throw std::invalid_argument("variable " + v.name + " has repeated values");
    }
  }
}

template <class S>
ProbabilityTable<S> ProbabilityTable<S>::from_counts(std::vector<VariableSpec> vars,
                                                     std::vector<std::uint64_t> counts) {
  validate_variables(vars);
  ProbabilityTable t;
  t.indexer_ = indexer_for(vars);
  t.vars_ = std::move(vars);
  if (counts.size() != t.indexer_.cells()) {
    throw std::invalid_argument("count vector does not match the table shape");
  }
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("table has no samples");
  t.p_.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if constexpr (std::is_same_v<S, Rational>) {
      t.p_[i] = Rational(counts[i], total);
    } else {
      t.p_[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
  }
  t.counts_ = std::move(counts);
  t.total_ = total;
  return t;
}

template <class S>
ProbabilityTable<S> ProbabilityTable<S>::from_probabilities(std::vector<VariableSpec> vars,
                                                            std::vector<S> p) {
  validate_variables(vars);
  ProbabilityTable t;
  t.indexer_ = indexer_for(vars);
  t.vars_ = std::move(vars);
  if (p.size() != t.indexer_.cells()) {
    throw std::invalid_argument("probability vector does not match the table shape");
  }
  S sum = 0;
  for (const auto& v : p) {
    if constexpr (std::is_same_v<S, double>) {
      if (!std::isfinite(v)) throw std::invalid_argument("probability is not finite");
    }
    if (v < 0) throw std::invalid_argument("negative probability");
    sum += v;
  }
  if constexpr (std::is_same_v<S, Rational>) {
    if (sum != 1) throw std::invalid_argument("probabilities do not sum to one");
  } else {
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("probabilities do not sum to one");
  }
  t.p_ = std::move(p);
  return t;
}

template <class S>
std::optional<std::size_t> ProbabilityTable<S>::position(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  return std::nullopt;
}

template <class S>
std::vector<std::size_t> ProbabilityTable<S>::positions(std::span<const std::string> names) const {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    const auto pos = position(n);
    if (!pos) throw std::invalid_argument("table has no variable " + n);
    out.push_back(*pos);
  }
  return out;
}

template <class S>
std::size_t ConditionalTable<S>::excluded() const {
  return static_cast<std::size_t>(std::count(defined.begin(), defined.end(), false));
}

template <class S>
ProbabilityTable<S> marginalize(const ProbabilityTable<S>& table,
                                std::span<const std::string> keep) {
  const auto axes = table.positions(keep);
  const auto proj = project_indices(table.variables(), axes);
  auto vars = select(table.variables(), axes);
  const Indexer sub = indexer_for(vars);
  if (table.has_counts()) {
    std::vector<std::uint64_t> counts(sub.cells(), 0);
    for (std::size_t f = 0; f < proj.size(); ++f) counts[proj[f]] += table.count(f);
    return ProbabilityTable<S>::from_counts(std::move(vars), std::move(counts));
  }
  std::vector<S> p(sub.cells(), S(0));
  for (std::size_t f = 0; f < proj.size(); ++f) p[proj[f]] += table.p(f);
  if constexpr (std::is_same_v<S, double>) {
    // Re-summing can drift by a few ulps; restore exact normalization.
    double s = 0.0;
    for (double v : p) s += v;
    for (double& v : p) v /= s;
  }
  return ProbabilityTable<S>::from_probabilities(std::move(vars), std::move(p));
}

template <class S>
ConditionalTable<S> condition(const ProbabilityTable<S>& table,
                              std::span<const std::string> targets,
                              std::span<const std::string> givens) {
  const auto t_axes = table.positions(targets);
  const auto g_axes = table.positions(givens);
  const auto t_proj = project_indices(table.variables(), t_axes);
  const auto g_proj = project_indices(table.variables(), g_axes);

  ConditionalTable<S> ct;
  ct.givens = select(table.variables(), g_axes);
  ct.targets = select(table.variables(), t_axes);
  ct.given_index = indexer_for(ct.givens);
  ct.target_index = indexer_for(ct.targets);
  const std::size_t gc = ct.given_index.cells();
  const std::size_t tc = ct.target_index.cells();
  ct.p.assign(gc * tc, S(0));
  ct.given_mass.assign(gc, S(0));
  ct.defined.assign(gc, false);

  if (table.has_counts()) {
    std::vector<std::uint64_t> joint(gc * tc, 0);
    ct.given_count.assign(gc, 0);
    for (std::size_t f = 0; f < t_proj.size(); ++f) {
      joint[g_proj[f] * tc + t_proj[f]] += table.count(f);
      ct.given_count[g_proj[f]] += table.count(f);
    }
    for (std::size_t g = 0; g < gc; ++g) {
      const std::uint64_t n = ct.given_count[g];
      if (n == 0) continue;
      ct.defined[g] = true;
      if constexpr (std::is_same_v<S, Rational>) {
        ct.given_mass[g] = Rational(n, table.total());
        for (std::size_t t = 0; t < tc; ++t) ct.p[g * tc + t] = Rational(joint[g * tc + t], n);
      } else {
        ct.given_mass[g] = static_cast<double>(n) / static_cast<double>(table.total());
        for (std::size_t t = 0; t < tc; ++t) {
          ct.p[g * tc + t] = static_cast<double>(joint[g * tc + t]) / static_cast<double>(n);
        }
      }
    }
  } else {
    for (std::size_t f = 0; f < t_proj.size(); ++f) {
      ct.p[g_proj[f] * tc + t_proj[f]] += table.p(f);
      ct.given_mass[g_proj[f]] += table.p(f);
    }
    for (std::size_t g = 0; g < gc; ++g) {
      if (is_zero(ct.given_mass[g])) continue;
      ct.defined[g] = true;
      for (std::size_t t = 0; t < tc; ++t) ct.p[g * tc + t] /= ct.given_mass[g];
    }
  }
  if (std::none_of(ct.defined.begin(), ct.defined.end(), [](bool d) { return d; })) {
    throw EmptyConditional("every conditioning tuple has zero probability");
  }
  return ct;
}

template class ProbabilityTable<double>;
template class ProbabilityTable<Rational>;
template struct ConditionalTable<double>;
template struct ConditionalTable<Rational>;
template ProbabilityTable<double> marginalize(const ProbabilityTable<double>&,
                                              std::span<const std::string>);
template ProbabilityTable<Rational> marginalize(const ProbabilityTable<Rational>&,
                                                std::span<const std::string>);
template ConditionalTable<double> condition(const ProbabilityTable<double>&,
                                            std::span<const std::string>,
                                            std::span<const std::string>);
template ConditionalTable<Rational> condition(const ProbabilityTable<Rational>&,
                                              std::span<const std::string>,
                                              std::span<const std::string>);

}  // namespace bellsim::audit
