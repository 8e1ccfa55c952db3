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

#include "bellsim/audit/conditions.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace bellsim::audit {

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::FR: return "FR";
    case Condition::FW: return "FW";
    case Condition::NS: return "NS";
    case Condition::ST: return "ST";
    case Condition::PI: return "PI";
    case Condition::NS2: return "NS2";
  }
  return "?";
}

std::optional<Condition> parse_condition(std::string_view name) {
  for (Condition c : {Condition::FR, Condition::FW, Condition::NS, Condition::ST, Condition::PI,
                      Condition::NS2}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

TolerancePolicy TolerancePolicy::scaled(double factor) const {
  TolerancePolicy p = *this;
  p.absolute *= factor;
  p.nsigma *= factor;
  return p;
}

namespace {

using Names = std::vector<std::string>;
using Detail = std::function<std::string()>;

template <class S>
S abs_value(const S& v) {
  return v < 0 ? S(-v) : v;
}

template <class S>
class VerdictBuilder {
 public:
  VerdictBuilder(std::string name, const TolerancePolicy& pol) : pol_(pol) {
    v_.name = std::move(name);
    tol_ = S(pol.absolute);
  }

  bool statistical() const { return pol_.mode == TolerancePolicy::Mode::statistical; }
  const TolerancePolicy& policy() const { return pol_; }

  void add_exact(const std::string& clause, const S& dev, const Detail& detail) {
    ++v_.cells_tested;
    const S key = dev - tol_;
    if (!have_worst_ || key > worst_key_) {
      have_worst_ = true;
      worst_key_ = key;
      v_.clause = clause;
      v_.max_deviation = to_double(dev);
      v_.tolerance = to_double(tol_);
      v_.pass = !(dev > tol_);
      v_.detail = detail();
    }
  }

  void add_stat(const std::string& clause, double dev, double sigma, const Detail& detail) {
    ++v_.cells_tested;
    const double z = sigma > 0.0 ? dev / sigma
                                 : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (!have_worst_ || z > worst_z_) {
      have_worst_ = true;
      worst_z_ = z;
      v_.clause = clause;
      v_.max_deviation = dev;
      v_.tolerance = pol_.nsigma * sigma;
      v_.sigma = z;
      v_.pass = !(dev > v_.tolerance);
      v_.detail = detail();
    }
  }

  void skip() { ++v_.cells_skipped; }

  /// Estimate `p` from `n` samples against reference `q`.
  void nested_cell(const std::string& clause, const S& p, const S& q, std::uint64_t n,
                   const Detail& detail) {
    if (!statistical()) {
      add_exact(clause, abs_value<S>(p - q), detail);
      return;
    }
    if (n < pol_.min_cell_count) {
      skip();
      return;
    }
    const double qd = to_double(q);
    const double sigma = std::sqrt(std::max(0.0, qd * (1.0 - qd)) / static_cast<double>(n));
    add_stat(clause, std::abs(to_double(p) - qd), sigma, detail);
  }

  /// Two estimates from disjoint cells of sizes n1 and n2.
  void pairwise_cell(const std::string& clause, const S& p1, std::uint64_t n1, const S& p2,
                     std::uint64_t n2, const Detail& detail) {
    if (!statistical()) {
      add_exact(clause, abs_value<S>(p1 - p2), detail);
      return;
    }
    if (n1 < pol_.min_cell_count || n2 < pol_.min_cell_count) {
      skip();
      return;
    }
    const double a = to_double(p1), b = to_double(p2);
    const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2);
    const double pooled = (a * d1 + b * d2) / (d1 + d2);
    const double sigma =
        std::sqrt(std::max(0.0, pooled * (1.0 - pooled)) * (1.0 / d1 + 1.0 / d2));
    add_stat(clause, std::abs(a - b), sigma, detail);
  }

  ConditionVerdict finish() {
    v_.inconclusive = v_.cells_tested == 0;
    if (v_.cells_tested == 0) v_.pass = true;
    v_.significant_violation = statistical() ? (!v_.pass && v_.sigma >= pol_.witness_sigma)
                                             : !v_.pass;
    return v_;
  }

 private:
  TolerancePolicy pol_;
  ConditionVerdict v_;
  S tol_;
  bool have_worst_ = false;
  S worst_key_{};
  double worst_z_ = 0.0;
};

template <class S>
void require_counts(const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  if (pol.mode == TolerancePolicy::Mode::statistical && !t.has_counts()) {
    throw std::invalid_argument("statistical tolerance needs a table built from counts");
  }
}

std::string join(const Names& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ',';
    out += names[i];
  }
  return out;
}

std::string cond_label(const Names& targets, const Names& givens) {
  return givens.empty() ? fmt::format("P({})", join(targets))
                        : fmt::format("P({}|{})", join(targets), join(givens));
}

template <class S>
std::string cell_detail(const ConditionalTable<S>& ct, std::size_t g, std::size_t t,
                        const S& est, const S& ref) {
  const std::string given = ct.givens.empty() ? std::string("-")
                                              : describe_tuple(ct.givens, ct.given_index, g);
  return fmt::format("given {} target {}: estimate={:.17g} reference={:.17g}", given,
                     describe_tuple(ct.targets, ct.target_index, t), to_double(est),
                     to_double(ref));
}

/// P(T|G) = P(T|R) with R a subset of G.
template <class S>
void nested_clause(VerdictBuilder<S>& vb, const ProbabilityTable<S>& t, const Names& targets,
                   const Names& givens, const Names& reduced) {
  const std::string clause =
      fmt::format("{}={}", cond_label(targets, givens), cond_label(targets, reduced));
  const auto full = condition<S>(t, targets, givens);
  const auto red = condition<S>(t, targets, reduced);
  std::vector<std::size_t> r_in_g;
  for (const auto& r : reduced) {
    const auto it = std::find(givens.begin(), givens.end(), r);
    if (it == givens.end()) throw std::logic_error("reduced givens must be a subset");
    r_in_g.push_back(static_cast<std::size_t>(it - givens.begin()));
  }
  std::vector<std::size_t> gi(givens.size()), ri(reduced.size());
  const std::size_t tc = full.target_index.cells();
  for (std::size_t g = 0; g < full.given_index.cells(); ++g) {
    if (!full.defined[g]) continue;
    full.given_index.unflatten(g, gi);
    for (std::size_t k = 0; k < ri.size(); ++k) ri[k] = gi[r_in_g[k]];
    const std::size_t r = red.given_index.flatten(ri);
    const std::uint64_t n = full.given_count.empty() ? 0 : full.given_count[g];
    for (std::size_t c = 0; c < tc; ++c) {
      const S& p = full.prob(g, c);
      const S& q = red.prob(r, c);
      vb.nested_cell(clause, p, q, n, [&] { return cell_detail(full, g, c, p, q); });
    }
  }
}

/// P(T|G) unchanged when variable `vary` in G takes any other value.
template <class S>
void pairwise_clause(VerdictBuilder<S>& vb, const ProbabilityTable<S>& t, const Names& targets,
                     const Names& givens, const std::string& vary) {
  Names others;
  for (const auto& g : givens) {
    if (g != vary) others.push_back(g);
  }
  const std::string clause =
      fmt::format("{} independent of {}", cond_label(targets, givens), vary);
  const auto ct = condition<S>(t, targets, givens);
  const auto vpos = static_cast<std::size_t>(
      std::find(givens.begin(), givens.end(), vary) - givens.begin());
  std::vector<std::size_t> gi(givens.size());
  const std::size_t tc = ct.target_index.cells();
  for (std::size_t g = 0; g < ct.given_index.cells(); ++g) {
    if (!ct.defined[g]) continue;
    ct.given_index.unflatten(g, gi);
    const std::size_t base = gi[vpos];
    for (std::size_t alt = base + 1; alt < ct.given_index.size(vpos); ++alt) {
      gi[vpos] = alt;
      const std::size_t g2 = ct.given_index.flatten(gi);
      gi[vpos] = base;
      if (!ct.defined[g2]) continue;
      const std::uint64_t n1 = ct.given_count.empty() ? 0 : ct.given_count[g];
      const std::uint64_t n2 = ct.given_count.empty() ? 0 : ct.given_count[g2];
      for (std::size_t c = 0; c < tc; ++c) {
        const S& p1 = ct.prob(g, c);
        const S& p2 = ct.prob(g2, c);
        vb.pairwise_cell(clause, p1, n1, p2, n2, [&] {
          return fmt::format("{} vs {}={}", cell_detail(ct, g, c, p1, p2), vary,
                             ct.givens[vpos].values[alt]);
        });
      }
    }
  }
}

/// P(vars) against an expected product, cell by cell.
template <class S>
void product_clause(VerdictBuilder<S>& vb, const ProbabilityTable<S>& t, const Names& vars,
                    const std::string& clause,
                    const std::function<S(std::span<const std::size_t>)>& expected) {
  const auto joint = marginalize<S>(t, vars);
  std::vector<std::size_t> idx(vars.size());
  for (std::size_t f = 0; f < joint.cell_count(); ++f) {
    joint.indexer().unflatten(f, idx);
    const S q = expected(idx);
    const S& p = joint.p(f);
    vb.nested_cell(clause, p, q, t.total(), [&] {
      return fmt::format("cell {}: joint={:.17g} product={:.17g}",
                         describe_tuple(joint.variables(), joint.indexer(), f), to_double(p),
                         to_double(q));
    });
  }
}

template <class S>
std::vector<S> marginal_of(const ProbabilityTable<S>& t, const std::string& name) {
  const Names keep{name};
  const auto m = marginalize<S>(t, keep);
  return {m.probabilities().begin(), m.probabilities().end()};
}

}  // namespace

template <class S>
ConditionVerdict check_FR(const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  require_counts(t, pol);
  VerdictBuilder<S> vb("FR", pol);
  nested_clause(vb, t, {"A"}, {"B", "C", "Y", "Z"}, {});
  nested_clause(vb, t, {"B"}, {"A", "C", "X", "Z"}, {});
  nested_clause(vb, t, {"C"}, {"A", "B", "X", "Y"}, {});
  return vb.finish();
}

template <class S>
ConditionVerdict check_NS(const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  require_counts(t, pol);
  VerdictBuilder<S> vb("NS", pol);
  nested_clause(vb, t, {"Y", "Z"}, {"A", "B", "C"}, {"B", "C"});
  nested_clause(vb, t, {"X", "Z"}, {"A", "B", "C"}, {"A", "C"});
  nested_clause(vb, t, {"X", "Y"}, {"A", "B", "C"}, {"A", "B"});
  return vb.finish();
}

template <class S>
ConditionVerdict check_NS2(const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  require_counts(t, pol);
  VerdictBuilder<S> vb("NS2", pol);
  pairwise_clause(vb, t, {"X"}, {"A", "B"}, "B");
  pairwise_clause(vb, t, {"Y"}, {"A", "B"}, "A");
  return vb.finish();
}

template <class S>
ConditionVerdict check_FW(const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  require_counts(t, pol);
  VerdictBuilder<S> vb("FW", pol);
  if (has_lambda(t)) {
    nested_clause(vb, t, {"A"}, {"B", "L"}, {});
    nested_clause(vb, t, {"B"}, {"A", "L"}, {});
    const auto pa = marginal_of(t, "A");
    const auto pb = marginal_of(t, "B");
    const auto pl = marginal_of(t, "L");
    product_clause<S>(vb, t, {"A", "B", "L"}, "P(A,B,L)=P(A)P(B)P(L)",
                      [&](std::span<const std::size_t> i) { return S(pa[i[0]] * pb[i[1]] * pl[i[2]]); });
  } else {
    nested_clause(vb, t, {"A"}, {"B"}, {});
    nested_clause(vb, t, {"B"}, {"A"}, {});
  }
  return vb.finish();
}

template <class S>
ConditionVerdict check_PI(const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  if (!has_lambda(t)) throw std::invalid_argument("parameter independence needs an L variable");
  require_counts(t, pol);
  VerdictBuilder<S> vb("PI", pol);
  pairwise_clause(vb, t, {"X"}, {"A", "B", "L"}, "B");
  pairwise_clause(vb, t, {"Y"}, {"A", "B", "L"}, "A");
  return vb.finish();
}

template <class S>
ConditionVerdict check_ST(const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  require_counts(t, pol);
  VerdictBuilder<S> vb("ST", pol);
  nested_clause(vb, t, {"C", "Z"}, {"A", "B", "X", "Y"}, {});
  return vb.finish();
}

template <class S>
ConditionVerdict check(Condition c, const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  switch (c) {
    case Condition::FR: return check_FR(t, pol);
    case Condition::FW: return check_FW(t, pol);
    case Condition::NS: return check_NS(t, pol);
    case Condition::ST: return check_ST(t, pol);
    case Condition::PI: return check_PI(t, pol);
    case Condition::NS2: return check_NS2(t, pol);
  }
  throw std::logic_error("unknown condition");
}

namespace {

/// Z (jointly with C) pins down L for every tuple of positive probability.
template <class S>
bool z_discloses_lambda(const ProbabilityTable<S>& t) {
  if (!has_lambda(t) || !t.has("C") || !t.has("Z")) return false;
  const auto ct = condition<S>(t, Names{"L"}, Names{"C", "Z"});
  for (std::size_t g = 0; g < ct.given_index.cells(); ++g) {
    if (!ct.defined[g]) continue;
    std::size_t support = 0;
    for (std::size_t l = 0; l < ct.target_index.cells(); ++l) {
      if (ct.prob(g, l) > 0) ++support;
    }
    if (support != 1) return false;
  }
  return true;
}

}  // namespace

template <class S>
ImplicationReport verify_implication_fr(const ProbabilityTable<S>& t, const TolerancePolicy& pol) {
  ImplicationReport r;
  r.fw = check_FW(t, pol);
  r.ns = check_NS2(t, pol);
  r.st = check_ST(t, pol);
  r.derived = pol.scaled(kImplicationToleranceFactor);
  r.fr = check_FR(t, r.derived);
  r.premises_hold = r.fw.pass && r.ns.pass && r.st.pass;
  r.implication_holds = !r.premises_hold || r.fr.pass;

  r.converse_applicable = z_discloses_lambda(t);
  r.fr_base = check_FR(t, pol);
  if (r.converse_applicable && r.fr_base.pass) {
    r.converse_holds = check_FW(t, r.derived).pass && check_NS2(t, r.derived).pass &&
                       check_ST(t, r.derived).pass;
  }
  return r;
}

template <class S>
FreeChoiceReport derive_ns_from_free_choice(const ProbabilityTable<S>& t,
                                            const TolerancePolicy& pol) {
  require_counts(t, pol);
  const auto pa = marginal_of(t, "A");
  const auto pb = marginal_of(t, "B");
  const bool with_y = t.has("Y");

  FreeChoiceReport r;
  {
    VerdictBuilder<S> vb("P(AB.)=P(.|AB)P(A)P(B)", pol);
    for (const std::string out : {"X", "Y"}) {
      if (out == "Y" && !with_y) continue;
      const auto ct = condition<S>(t, Names{out}, Names{"A", "B"});
      const std::size_t nb = ct.given_index.size(1);
      const std::size_t nout = ct.target_index.cells();
      product_clause<S>(vb, t, {"A", "B", out}, fmt::format("P(A,B,{0})=P({0}|A,B)P(A)P(B)", out),
                        [&](std::span<const std::size_t> i) {
                          const std::size_t g = i[0] * nb + i[1];
                          const S w = pa[i[0]] * pb[i[1]];
                          return ct.defined[g] ? S(ct.prob(g, i[2]) * w)
                                               : S(w / static_cast<long>(nout));
                        });
    }
    r.joint_factorization = vb.finish();
  }
  {
    VerdictBuilder<S> vb("P(AB.)=P(.|local)P(A)P(B)", pol);
    for (const std::string out : {"X", "Y"}) {
      if (out == "Y" && !with_y) continue;
      const std::string local = out == "X" ? "A" : "B";
      const auto ct = condition<S>(t, Names{out}, Names{local});
      product_clause<S>(vb, t, {"A", "B", out},
                        fmt::format("P(A,B,{0})=P({0}|{1})P(A)P(B)", out, local),
                        [&](std::span<const std::size_t> i) {
                          const std::size_t g = out == "X" ? i[0] : i[1];
                          return S(ct.prob(g, i[2]) * pa[i[0]] * pb[i[1]]);
                        });
    }
    r.local_factorization = vb.finish();
  }

  if (pol.mode == TolerancePolicy::Mode::absolute) {
    S min_w = S(1);
    for (const auto& a : pa) {
      for (const auto& b : pb) {
        const S w = a * b;
        if (w > 0 && w < min_w) min_w = w;
      }
    }
    r.derived = pol;
    r.derived.absolute = 2.0 * pol.absolute / to_double(min_w);
  } else {
    r.derived = pol.scaled(2.0);
  }
  VerdictBuilder<S> vb("NS2", r.derived);
  nested_clause(vb, t, {"X"}, {"A", "B"}, {"A"});
  if (with_y) nested_clause(vb, t, {"Y"}, {"A", "B"}, {"B"});
  r.derived_ns = vb.finish();
  r.premises_hold = r.joint_factorization.pass && r.local_factorization.pass;
  r.derivation_holds = !r.premises_hold || r.derived_ns.pass;
  return r;
}

#define BELLSIM_INSTANTIATE(S)                                                                  \
  template ConditionVerdict check_FR(const ProbabilityTable<S>&, const TolerancePolicy&);       \
  template ConditionVerdict check_NS(const ProbabilityTable<S>&, const TolerancePolicy&);       \
  template ConditionVerdict check_NS2(const ProbabilityTable<S>&, const TolerancePolicy&);      \
  template ConditionVerdict check_FW(const ProbabilityTable<S>&, const TolerancePolicy&);       \
  template ConditionVerdict check_PI(const ProbabilityTable<S>&, const TolerancePolicy&);       \
  template ConditionVerdict check_ST(const ProbabilityTable<S>&, const TolerancePolicy&);       \
  template ConditionVerdict check(Condition, const ProbabilityTable<S>&, const TolerancePolicy&); \
  template ImplicationReport verify_implication_fr(const ProbabilityTable<S>&,                  \
                                                   const TolerancePolicy&);                     \
  template FreeChoiceReport derive_ns_from_free_choice(const ProbabilityTable<S>&,              \
                                                       const TolerancePolicy&);

BELLSIM_INSTANTIATE(double)
BELLSIM_INSTANTIATE(Rational)

#undef BELLSIM_INSTANTIATE

}  // namespace bellsim::audit
