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

// Exact local and non-local joint tables for the condition checkers.

#pragma once

#include <array>
#include <functional>
#include <random>

#include "bellsim/audit/table.hpp"

namespace bellsim::audit::testing {

// Exact fixture over (A, B, C, X, Y, Z, L): P(a, b, x, y, l) is supplied by
// `weight`, C is single-valued and Z is either constant or a copy of L.
using Weight = std::function<Rational(int a, int b, int x, int y, int l)>;

inline ProbabilityTable<Rational> fixture(int nl, bool z_is_l, const Weight& weight) {
  std::vector<std::int64_t> lv(nl);
  for (int l = 0; l < nl; ++l) lv[l] = l;
  std::vector<VariableSpec> vars{{"A", {0, 1}}, {"B", {0, 1}}, {"C", {0}}, {"X", {-1, 1}},
                                 {"Y", {-1, 1}}, {"Z", z_is_l ? lv : std::vector<std::int64_t>{0}},
                                 {"L", lv}};
  std::vector<std::size_t> sizes;
  for (const auto& v : vars) sizes.push_back(v.size());
  const Indexer idx(sizes);
  std::vector<Rational> p(idx.cells(), Rational(0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int xi = 0; xi < 2; ++xi)
        for (int yi = 0; yi < 2; ++yi)
          for (int l = 0; l < nl; ++l) {
            const std::size_t cell[] = {std::size_t(a), std::size_t(b), 0, std::size_t(xi),
                                        std::size_t(yi), z_is_l ? std::size_t(l) : 0,
                                        std::size_t(l)};
            p[idx.flatten(cell)] = weight(a, b, xi == 1 ? 1 : -1, yi == 1 ? 1 : -1, l);
          }
  return ProbabilityTable<Rational>::from_probabilities(std::move(vars), std::move(p));
}

// Random local model: independent settings, P(x|a,l) and P(y|b,l) with small
// denominators.
inline ProbabilityTable<Rational> random_local_fixture(std::mt19937_64& eng, bool z_is_l) {
  std::uniform_int_distribution<int> d(0, 6), w(1, 5);
  const int nl = 3;
  std::array<Rational, 2> pa{Rational(w(eng)), Rational(w(eng))}, pb{Rational(w(eng)), Rational(w(eng))};
  std::array<Rational, nl> pl;
  for (auto& v : pl) v = w(eng);
  auto normalize = [](auto& arr) {
    Rational s = 0;
    for (auto& v : arr) s += v;
    for (auto& v : arr) v /= s;
  };
  normalize(pa);
  normalize(pb);
  normalize(pl);
  Rational px[2][nl], py[2][nl];
  for (int s = 0; s < 2; ++s)
    for (int l = 0; l < nl; ++l) {
      px[s][l] = Rational(d(eng), 6);
      py[s][l] = Rational(d(eng), 6);
    }
  return fixture(nl, z_is_l, [&](int a, int b, int x, int y, int l) {
    const Rational fx = x == 1 ? px[a][l] : 1 - px[a][l];
    const Rational fy = y == 1 ? py[b][l] : 1 - py[b][l];
    return pa[a] * pb[b] * pl[l] * fx * fy;
  });
}

}  // namespace bellsim::audit::testing
