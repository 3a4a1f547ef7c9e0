#include "mrplan/grid_search.hpp"

#include <algorithm>
#include <cmath>

#include "mrplan/errors.hpp"

namespace mrplan {

namespace {
constexpr std::uint32_t kNoParent = 0xffffffffu;
}

bool GridSearch::HeapCmp::operator()(const HeapEntry& a, const HeapEntry& b) const {
  // std::push_heap keeps the largest on top, so "less" means "worse":
  // larger f, then larger h, then larger lexicographic cell index.
  if (a.f != b.f) return a.f > b.f;
  if (a.h != b.h) return a.h > b.h;
  const Vec3i ca = s->grid_->delinear(a.idx);
  const Vec3i cb = s->grid_->delinear(b.idx);
  return std::tie(ca.x(), ca.y(), ca.z()) > std::tie(cb.x(), cb.y(), cb.z());
}

GridSearch::GridSearch(const VoxelGrid& grid, const Vec3& start, const Vec3& goal)
    : grid_(&grid) {
  start_cell_ = grid.cell_of(start);
  goal_cell_ = grid.cell_of(goal);
  if (!grid.in_bounds(start_cell_) || !grid.in_bounds(goal_cell_)) {
    throw PreconditionError("search endpoints must be inside the grid bounds");
  }
  if (grid.occupied_in_bounds(start_cell_) || grid.occupied_in_bounds(goal_cell_)) {
    throw PreconditionError("search endpoints must be in free cells");
  }
  const double res = grid.resolution();
  w1_ = res;
  w2_ = res * std::sqrt(2.0);
  w3_ = res * std::sqrt(3.0);

  const std::size_t n = grid.cell_count();
  g_.assign(n, std::numeric_limits<double>::infinity());
  parent_.assign(n, kNoParent);
  closed_.assign(n, 0);
  n1_.assign(n, 0);
  n2_.assign(n, 0);
  n3_.assign(n, 0);

  const std::uint32_t si = static_cast<std::uint32_t>(grid.linear(start_cell_));
  g_[si] = 0.0;
  heap_.push_back(HeapEntry{heuristic(start_cell_), heuristic(start_cell_), si, 0.0});
}

double GridSearch::heuristic(const Vec3i& c) const {
  const Vec3i d = c - goal_cell_;
  return grid_->resolution() *
         std::sqrt(static_cast<double>(d.x()) * d.x() + static_cast<double>(d.y()) * d.y() +
                   static_cast<double>(d.z()) * d.z());
}

SearchStatus GridSearch::step(std::uint64_t max_expansions) {
  if (status_ != SearchStatus::Running) return status_;
  const HeapCmp cmp{this};

  std::uint64_t done = 0;
  while (done < max_expansions) {
    // Drop stale heap entries.
    while (!heap_.empty()) {
      const HeapEntry& top = heap_.front();
      if (closed_[top.idx] || top.g > g_[top.idx]) {
        std::pop_heap(heap_.begin(), heap_.end(), cmp);
        heap_.pop_back();
      } else {
        break;
      }
    }
    if (heap_.empty()) {
      status_ = SearchStatus::Unreachable;
      return status_;
    }

    const HeapEntry cur = heap_.front();
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    heap_.pop_back();
    closed_[cur.idx] = 1;
    ++expansions_;
    ++done;

    const Vec3i c = grid_->delinear(cur.idx);
    if (c == goal_cell_) {
      status_ = SearchStatus::Found;
      return status_;
    }

    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const Vec3i nb = c + Vec3i(dx, dy, dz);
          if (!grid_->in_bounds(nb) || grid_->occupied_in_bounds(nb)) continue;
          const std::uint32_t ni = static_cast<std::uint32_t>(grid_->linear(nb));
          if (closed_[ni]) continue;
          const int kind = std::abs(dx) + std::abs(dy) + std::abs(dz);
          std::uint16_t m1 = n1_[cur.idx], m2 = n2_[cur.idx], m3 = n3_[cur.idx];
          if (kind == 1) ++m1;
          if (kind == 2) ++m2;
          if (kind == 3) ++m3;
          const double ng = canonical_cost(m1, m2, m3);
          if (ng < g_[ni]) {
            g_[ni] = ng;
            parent_[ni] = cur.idx;
            n1_[ni] = m1;
            n2_[ni] = m2;
            n3_[ni] = m3;
            const double h = heuristic(nb);
            heap_.push_back(HeapEntry{ng + h, h, ni, ng});
            std::push_heap(heap_.begin(), heap_.end(), cmp);
          }
        }
      }
    }
  }
  return SearchStatus::Running;
}

GridPath GridSearch::path() const {
  if (status_ != SearchStatus::Found) throw StateError("path requested before goal found");
  GridPath p;
  std::uint32_t idx = static_cast<std::uint32_t>(grid_->linear(goal_cell_));
  while (idx != kNoParent) {
    p.cells.push_back(grid_->delinear(idx));
    idx = parent_[idx];
  }
  std::reverse(p.cells.begin(), p.cells.end());
  p.waypoints.reserve(p.cells.size());
  for (const auto& c : p.cells) p.waypoints.push_back(grid_->cell_center(c));
  const std::uint32_t gi = static_cast<std::uint32_t>(grid_->linear(goal_cell_));
  p.cost = g_[gi];
  return p;
}

AstarResult astar_grid(const VoxelGrid& grid, const Vec3& start, const Vec3& goal,
                       std::uint64_t budget) {
  if (budget == 0) throw ConfigError("search budget must be > 0");
  GridSearch s(grid, start, goal);
  const SearchStatus st = s.step(budget);
  AstarResult res;
  res.status = st;
  if (st == SearchStatus::Found) res.path = s.path();
  return res;
}

}  // namespace mrplan
