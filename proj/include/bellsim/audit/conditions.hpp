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

// Checkers for the free-choice, non-signalling, staticity and
// parameter-independence conditions on joint tables over the variables
//
//   A, B  measurement settings of the two wings
//   C     setting of the disclosure measurement
//   X, Y  outcomes of the two wings
//   Z     outcome of the disclosure measurement
//   L     binned ontic state
//
// Every condition is a set of clauses, each an equality between two
// conditional (or product) distributions. A verdict reports the worst cell
// over all clauses.
//
// Absolute mode compares every cell against a fixed tolerance (zero for exact
// Rational fixtures). Statistical mode needs a counted table: a cell compares
// an estimate from n_cell samples against its reference value p and passes
// when the deviation is within nsigma * sqrt(p(1-p)/n_cell). When two disjoint
// cells are compared, p is the pooled estimate and 1/n_cell becomes
// 1/n_1 + 1/n_2. Cells with fewer than min_cell_count samples are skipped and
// counted as inconclusive.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bellsim/audit/table.hpp"

namespace bellsim::audit {

enum class Condition { FR, FW, NS, ST, PI, NS2 };

std::string_view to_string(Condition c);
std::optional<Condition> parse_condition(std::string_view name);

struct TolerancePolicy {
  enum class Mode { absolute, statistical };

  Mode mode = Mode::statistical;
  double absolute = 0.0;
  double nsigma = 4.0;
  double witness_sigma = 5.0;
  std::uint64_t min_cell_count = 100;

  static TolerancePolicy exact(double tol = 0.0) {
    TolerancePolicy p;
    p.mode = Mode::absolute;
    p.absolute = tol;
    return p;
  }
  static TolerancePolicy statistical(double nsigma = 4.0, double witness_sigma = 5.0,
                                     std::uint64_t min_cell_count = 100) {
    return TolerancePolicy{Mode::statistical, 0.0, nsigma, witness_sigma, min_cell_count};
  }
  /// Same policy with the tolerance multiplied by `factor`.
  TolerancePolicy scaled(double factor) const;
};

struct ConditionVerdict {
  std::string name;
  /// Clause containing the worst cell, e.g. "P(A|B,C,Y,Z)=P(A)".
  std::string clause;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  /// Statistical mode: deviation of the worst cell in units of its sigma.
  double sigma = 0.0;
  bool pass = true;
  /// No cell had enough samples to be tested.
  bool inconclusive = false;
  /// Statistical mode: worst cell at or beyond witness_sigma. Absolute mode: !pass.
  bool significant_violation = false;
  /// Worst-case tuple.
  std::string detail;
  std::uint64_t cells_tested = 0;
  std::uint64_t cells_skipped = 0;
};

/// P(A|B,C,Y,Z)=P(A), P(B|A,C,X,Z)=P(B), P(C|A,B,X,Y)=P(C).
template <class S>
ConditionVerdict check_FR(const ProbabilityTable<S>& t, const TolerancePolicy& pol);

/// P(Y,Z|A,B,C)=P(Y,Z|B,C), P(X,Z|A,B,C)=P(X,Z|A,C), P(X,Y|A,B,C)=P(X,Y|A,B).
template <class S>
ConditionVerdict check_NS(const ProbabilityTable<S>& t, const TolerancePolicy& pol);

/// P(X|A=a,B=b)=P(X|A=a,B=b') and P(Y|A=a,B=b)=P(Y|A=a',B=b).
template <class S>
ConditionVerdict check_NS2(const ProbabilityTable<S>& t, const TolerancePolicy& pol);

/// With L: P(A|B,L)=P(A), P(B|A,L)=P(B), P(A,B,L)=P(A)P(B)P(L).
/// Without L the lambda-free reduction P(A|B)=P(A), P(B|A)=P(B) is checked.
template <class S>
ConditionVerdict check_FW(const ProbabilityTable<S>& t, const TolerancePolicy& pol);

/// P(X|A,B=b,L)=P(X|A,B=b',L) and the Y counterpart. Requires L.
template <class S>
ConditionVerdict check_PI(const ProbabilityTable<S>& t, const TolerancePolicy& pol);

/// P(C,Z|A,B,X,Y)=P(C,Z).
template <class S>
ConditionVerdict check_ST(const ProbabilityTable<S>& t, const TolerancePolicy& pol);

template <class S>
ConditionVerdict check(Condition c, const ProbabilityTable<S>& t, const TolerancePolicy& pol);

/// Conclusion checked against premises FW, NS2 and ST.
struct ImplicationReport {
  ConditionVerdict fw;
  ConditionVerdict ns;
  ConditionVerdict st;
  ConditionVerdict fr;  // at the derived tolerance
  TolerancePolicy derived;
  bool premises_hold = false;
  bool implication_holds = true;
  /// Z determines L for every disclosure setting.
  bool converse_applicable = false;
  ConditionVerdict fr_base;  // at the premise tolerance
  bool converse_holds = true;
};

/// Premise tolerances carry over to the conclusion multiplied by the number of
/// premises (three).
inline constexpr double kImplicationToleranceFactor = 3.0;

template <class S>
ImplicationReport verify_implication_fr(const ProbabilityTable<S>& t, const TolerancePolicy& pol);

struct FreeChoiceReport {
  /// P(A,B,X)=P(X|A,B)P(A)P(B) and P(A,B,Y)=P(Y|A,B)P(A)P(B).
  ConditionVerdict joint_factorization;
  /// P(A,B,X)=P(X|A)P(A)P(B) and P(A,B,Y)=P(Y|B)P(A)P(B).
  ConditionVerdict local_factorization;
  /// P(X|A,B)=P(X|A) and P(Y|A,B)=P(Y|B) at the derived tolerance.
  ConditionVerdict derived_ns;
  TolerancePolicy derived;
  bool premises_hold = false;
  bool derivation_holds = true;
};

/// Absolute mode: derived tolerance 2 tol / min P(a)P(b). Statistical mode:
/// nsigma doubled.
template <class S>
FreeChoiceReport derive_ns_from_free_choice(const ProbabilityTable<S>& t,
                                            const TolerancePolicy& pol);

/// Table has a variable named L.
template <class S>
bool has_lambda(const ProbabilityTable<S>& t) {
  return t.has("L");
}

}  // namespace bellsim::audit
