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

// Joint probability tables over named discrete variables, with the
// marginalization and conditioning needed by the condition checkers.
//
// Tables are dense and row-major over the variables in declaration order.
// Scalar is `double` for sampled or floating-point tables and `Rational` for
// exact fixtures. Tables built from tallies keep their integer counts; for
// such tables, conditionals are computed from counts so that equal empirical
// frequencies compare exactly equal.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bellsim::audit {

using Rational = boost::multiprecision::cpp_rational;

struct VariableSpec {
  std::string name;
  std::vector<std::int64_t> values;

  std::size_t size() const { return values.size(); }
  std::optional<std::size_t> index_of(std::int64_t v) const;
};

/// Raised when conditioning finds no given tuple of positive probability.
class EmptyConditional : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major index arithmetic over a list of domain sizes.
class Indexer {
 public:
  Indexer() = default;
  explicit Indexer(std::vector<std::size_t> sizes);

  std::size_t cells() const { return cells_; }
  std::size_t rank() const { return sizes_.size(); }
  std::size_t size(std::size_t axis) const { return sizes_[axis]; }

  std::size_t flatten(std::span<const std::size_t> idx) const;
  void unflatten(std::size_t flat, std::span<std::size_t> idx) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t cells_ = 1;
};

template <class S>
class ProbabilityTable {
 public:
  ProbabilityTable() = default;

  /// Table from raw tallies; probabilities are count / total.
  static ProbabilityTable from_counts(std::vector<VariableSpec> vars,
                                      std::vector<std::uint64_t> counts);

  /// Table from probabilities: entries >= 0 and summing to one (exactly for
  /// Rational, within 1e-12 for double).
  static ProbabilityTable from_probabilities(std::vector<VariableSpec> vars, std::vector<S> p);

  const std::vector<VariableSpec>& variables() const { return vars_; }
  const Indexer& indexer() const { return indexer_; }
  std::size_t cell_count() const { return indexer_.cells(); }

  std::optional<std::size_t> position(std::string_view name) const;
  bool has(std::string_view name) const { return position(name).has_value(); }
  /// Position of each name; throws std::invalid_argument for unknown names.
  std::vector<std::size_t> positions(std::span<const std::string> names) const;

  const S& p(std::size_t flat) const { return p_[flat]; }
  std::span<const S> probabilities() const { return p_; }

  bool has_counts() const { return !counts_.empty(); }
  std::uint64_t count(std::size_t flat) const { return counts_[flat]; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  /// Number of samples behind a counted table; zero otherwise.
  std::uint64_t total() const { return total_; }

 private:
  static void validate_variables(const std::vector<VariableSpec>& vars);

  std::vector<VariableSpec> vars_;
  Indexer indexer_;
  std::vector<S> p_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// P(targets | givens), one row of target probabilities per given tuple.
template <class S>
struct ConditionalTable {
  std::vector<VariableSpec> givens;
  std::vector<VariableSpec> targets;
  Indexer given_index;
  Indexer target_index;
  std::vector<S> p;  // [g * target_cells + t]
  std::vector<S> given_mass;
  std::vector<std::uint64_t> given_count;  // empty unless the table is counted
  std::vector<bool> defined;               // given tuple has positive mass

  const S& prob(std::size_t g, std::size_t t) const { return p[g * target_index.cells() + t]; }
  std::size_t excluded() const;
};

/// For every cell of `vars`, its flat index in the sub-space of `axes`.
std::vector<std::size_t> project_indices(const std::vector<VariableSpec>& vars,
                                         std::span<const std::size_t> axes);

template <class S>
ProbabilityTable<S> marginalize(const ProbabilityTable<S>& table,
                                std::span<const std::string> keep);

/// Conditioning on an empty `givens` yields the single row P(targets).
/// Targets and givens may share variables; inconsistent pairs get zero.
/// Given tuples of zero mass are marked undefined and excluded.
template <class S>
ConditionalTable<S> condition(const ProbabilityTable<S>& table,
                              std::span<const std::string> targets,
                              std::span<const std::string> givens);

/// Renders a value tuple as "A=0,B=1".
std::string describe_tuple(const std::vector<VariableSpec>& vars, const Indexer& idx,
                           std::size_t flat);

double to_double(const double& v);
double to_double(const Rational& v);

extern template class ProbabilityTable<double>;
extern template class ProbabilityTable<Rational>;

}  // namespace bellsim::audit
