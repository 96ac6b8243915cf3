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

#ifndef CONGAME_SVG_HPP
#define CONGAME_SVG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "congame/vec.hpp"

namespace congame {

struct LineSeries {
  std::string label;
  Vec xs, ys;
};

// Minimal polyline line chart. Non-finite samples are skipped; with log_y,
// nonpositive samples are skipped too.
void write_line_chart(std::ostream& os, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<LineSeries>& series, bool log_y = false);

}  // namespace congame

#endif  // CONGAME_SVG_HPP
