// Copyright 2026 The congame authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONGAME_VEC_HPP
#define CONGAME_VEC_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace congame {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

// a + t*b
inline Vec axpy(const Vec& a, double t, const Vec& b) {
  Vec r(a);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] += t * b[k];
  return r;
}

}  // namespace congame

#endif  // CONGAME_VEC_HPP
