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

#include "congame/region.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace congame {

namespace {

constexpr long kCellBudget = 10000000;

std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> strides(dims.size());
  long s = 1;
  for (std::size_t a = dims.size(); a-- > 0;) {
    strides[a] = s;
    s *= dims[a];
  }
  return strides;
}

std::vector<int> decode(long idx, const std::vector<int>& dims,
                        const std::vector<long>& strides) {
  std::vector<int> out(dims.size());
  for (std::size_t a = 0; a < dims.size(); ++a) {
    out[a] = static_cast<int>(idx / strides[a]);
    idx %= strides[a];
  }
  return out;
}

bool cell_feasible(const std::vector<Constraint>& constraints, const StrategyProfile& p) {
  for (const auto& c : constraints)
    if (!(c.margin(p) >= 0.0)) return false;
  return true;
}

GridRegion make_empty(const Vec& lower, const Vec& upper,
                      const std::vector<int>& resolution) {
  if (lower.size() != upper.size() || lower.size() != resolution.size())
    throw std::invalid_argument("rasterize: dimension mismatch");
  long total = 1;
  for (int r : resolution) {
    if (r < 2) throw std::invalid_argument("rasterize: resolution >= 2 per axis");
    total *= r;
    if (total > kCellBudget) throw std::invalid_argument("rasterize: cell budget exceeded");
  }
  GridRegion region;
  region.dims = resolution;
  region.lower = lower;
  region.upper = upper;
  region.mask.assign(total, 0);
  region.component.assign(total, -1);
  return region;
}

void label_components(GridRegion& region) {
  const auto strides = strides_of(region.dims);
  const long total = region.cells();
  const int naxes = static_cast<int>(region.dims.size());
  int next = 0;
  std::deque<long> queue;
  for (long start = 0; start < total; ++start) {
    if (!region.mask[start] || region.component[start] >= 0) continue;
    region.component[start] = next;
    queue.push_back(start);
    while (!queue.empty()) {
      const long cur = queue.front();
      queue.pop_front();
      const std::vector<int> idx = decode(cur, region.dims, strides);
      for (int a = 0; a < naxes; ++a) {
        for (int dir = -1; dir <= 1; dir += 2) {
          const int ni = idx[a] + dir;
          if (ni < 0 || ni >= region.dims[a]) continue;
          const long nb = cur + dir * strides[a];
          if (region.mask[nb] && region.component[nb] < 0) {
            region.component[nb] = next;
            queue.push_back(nb);
          }
        }
      }
    }
    ++next;
  }
  region.component_count = next;
}

void fill_row(GridRegion& region, const std::vector<Constraint>& constraints,
              const std::vector<long>& strides, long row, long row_cells) {
  StrategyProfile p;
  p.blocks.assign(region.dims.size(), Vec(1));
  for (long off = 0; off < row_cells; ++off) {
    const long idx = row * row_cells + off;
    const std::vector<int> cell = decode(idx, region.dims, strides);
    for (std::size_t a = 0; a < region.dims.size(); ++a)
      p.blocks[a][0] = region.lower[a] +
                       (cell[a] + 0.5) * (region.upper[a] - region.lower[a]) / region.dims[a];
    region.mask[idx] = cell_feasible(constraints, p) ? 1 : 0;
  }
}

}  // namespace

long GridRegion::cells() const {
  long total = 1;
  for (int r : dims) total *= r;
  return total;
}

long GridRegion::index(const std::vector<int>& idx) const {
  long out = 0;
  for (std::size_t a = 0; a < dims.size(); ++a) out = out * dims[a] + idx[a];
  return out;
}

Vec GridRegion::cell_center(const std::vector<int>& idx) const {
  Vec c(dims.size());
  for (std::size_t a = 0; a < dims.size(); ++a)
    c[a] = lower[a] + (idx[a] + 0.5) * (upper[a] - lower[a]) / dims[a];
  return c;
}

GridRegion rasterize(const std::vector<Constraint>& constraints, const Vec& lower,
                     const Vec& upper, const std::vector<int>& resolution) {
  GridRegion region = make_empty(lower, upper, resolution);
  const auto strides = strides_of(region.dims);
  const long rows = region.dims[0];
  const long row_cells = region.cells() / rows;
#pragma omp parallel for schedule(static)
  for (long row = 0; row < rows; ++row)
    fill_row(region, constraints, strides, row, row_cells);
  label_components(region);
  return region;
}

GridRegion rasterize_serial(const std::vector<Constraint>& constraints, const Vec& lower,
                            const Vec& upper, const std::vector<int>& resolution) {
  GridRegion region = make_empty(lower, upper, resolution);
  const auto strides = strides_of(region.dims);
  const long rows = region.dims[0];
  const long row_cells = region.cells() / rows;
  for (long row = 0; row < rows; ++row)
    fill_row(region, constraints, strides, row, row_cells);
  label_components(region);
  return region;
}

std::vector<SliceViolation> slice_convexity_check(const GridRegion& region) {
  std::vector<SliceViolation> violations;
  const auto strides = strides_of(region.dims);
  const int naxes = static_cast<int>(region.dims.size());
  const long total = region.cells();
  for (int axis = 0; axis < naxes; ++axis) {
    const long lines = total / region.dims[axis];
    for (long li = 0; li < lines; ++li) {
      // Base cell of the line: distribute li over the other axes.
      std::vector<int> base(naxes, 0);
      long rem = li;
      for (int a = naxes - 1; a >= 0; --a) {
        if (a == axis) continue;
        base[a] = static_cast<int>(rem % region.dims[a]);
        rem /= region.dims[a];
      }
      const long origin = region.index(base);
      // Per component: any infeasible gap between two feasible cells of the
      // same component breaks slice convexity.
      std::vector<int> last_seen(region.component_count, -1);
      for (int k = 0; k < region.dims[axis]; ++k) {
        const long idx = origin + k * strides[axis];
        if (!region.mask[idx]) continue;
        const int comp = region.component[idx];
        if (last_seen[comp] >= 0 && last_seen[comp] < k - 1) {
          SliceViolation v;
          v.axis = axis;
          v.line = base;
          v.component = comp;
          v.gap_start = last_seen[comp] + 1;
          v.gap_end = k;
          violations.push_back(std::move(v));
        }
        last_seen[comp] = k;
      }
    }
  }
  return violations;
}

std::vector<std::vector<std::uint8_t>> component_slice_support(const GridRegion& region,
                                                               int player_axis) {
  const auto strides = strides_of(region.dims);
  const int naxes = static_cast<int>(region.dims.size());
  const long total = region.cells();
  const long lines = total / region.dims[player_axis];
  std::vector<std::vector<std::uint8_t>> support(
      region.component_count, std::vector<std::uint8_t>(lines, 0));
  for (long idx = 0; idx < total; ++idx) {
    if (!region.mask[idx]) continue;
    const std::vector<int> cell = decode(idx, region.dims, strides);
    long li = 0;
    for (int a = 0; a < naxes; ++a)
      if (a != player_axis) li = li * region.dims[a] + cell[a];
    support[region.component[idx]][li] = 1;
  }
  return support;
}

void write_pgm(std::ostream& os, const GridRegion& region) {
  if (region.dims.size() != 2)
    throw std::invalid_argument("write_pgm: 2-D regions only");
  const int h = region.dims[1], w = region.dims[0];
  os << "P2\n" << w << " " << h << "\n255\n";
  // Row 0 is the top of the image: highest second coordinate first.
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x) {
      if (x > 0) os << " ";
      os << (region.mask[region.index({x, y})] ? 255 : 0);
    }
    os << "\n";
  }
}

void write_component_csv(std::ostream& os, const GridRegion& region) {
  const int naxes = static_cast<int>(region.dims.size());
  os << "component,cells";
  for (int a = 0; a < naxes; ++a) os << ",min_" << a << ",max_" << a;
  os << "\n";
  std::vector<long> count(region.component_count, 0);
  std::vector<std::vector<int>> lo(region.component_count, std::vector<int>(naxes, 1 << 30));
  std::vector<std::vector<int>> hi(region.component_count, std::vector<int>(naxes, -1));
  const auto strides = strides_of(region.dims);
  for (long idx = 0; idx < region.cells(); ++idx) {
    if (!region.mask[idx]) continue;
    const int comp = region.component[idx];
    ++count[comp];
    const std::vector<int> cell = decode(idx, region.dims, strides);
    for (int a = 0; a < naxes; ++a) {
      lo[comp][a] = std::min(lo[comp][a], cell[a]);
      hi[comp][a] = std::max(hi[comp][a], cell[a]);
    }
  }
  for (int c = 0; c < region.component_count; ++c) {
    os << c << "," << count[c];
    for (int a = 0; a < naxes; ++a) os << "," << lo[c][a] << "," << hi[c][a];
    os << "\n";
  }
}

std::string slice_convexity_report(const GridRegion& region) {
  const auto violations = slice_convexity_check(region);
  std::ostringstream os;
  os << "component_count=" << region.component_count << "\n";
  os << "slice_convexity_violations=" << violations.size() << "\n";
  for (const auto& v : violations) {
    os << "violation axis=" << v.axis << " component=" << v.component << " line=";
    for (std::size_t a = 0; a < v.line.size(); ++a) {
      if (a) os << ":";
      os << v.line[a];
    }
    os << " gap=[" << v.gap_start << "," << v.gap_end << ")\n";
  }
  return os.str();
}

}  // namespace congame
