#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mrplan/geometry.hpp"
#include "mrplan/voxel_grid.hpp"

namespace mrplan {

enum class SearchStatus { Running, Found, Unreachable };

// 26-connected grid path; waypoints are cell centers.
struct GridPath {
  std::vector<Vec3> waypoints;
  std::vector<Vec3i> cells;
  double cost{0.0};
};

// A* over the free cells of a voxel grid with Euclidean edge costs and the
// Euclidean heuristic. The search is stepwise so it can be raced against a
// second search and suspended/resumed with its open and closed sets intact.
//
// Costs are accumulated canonically from per-node step-type counts
// (axis / face-diagonal / cube-diagonal), so two paths of mathematically
// equal length always produce bit-identical cost values.
class GridSearch {
 public:
  GridSearch(const VoxelGrid& grid, const Vec3& start, const Vec3& goal);

  // Run up to max_expansions more expansions.
  SearchStatus step(std::uint64_t max_expansions);
  SearchStatus status() const { return status_; }
  std::uint64_t expansions() const { return expansions_; }

  // Valid once status() == Found.
  GridPath path() const;

 private:
  struct HeapEntry {
    double f;
    double h;
    std::uint32_t idx;
    double g;
  };
  struct HeapCmp {
    const GridSearch* s;
    bool operator()(const HeapEntry& a, const HeapEntry& b) const;
  };

  double heuristic(const Vec3i& c) const;
  double canonical_cost(std::uint16_t n1, std::uint16_t n2, std::uint16_t n3) const {
    return n1 * w1_ + n2 * w2_ + n3 * w3_;
  }

  const VoxelGrid* grid_;
  Vec3i start_cell_, goal_cell_;
  double w1_, w2_, w3_;
  SearchStatus status_{SearchStatus::Running};
  std::uint64_t expansions_{0};

  std::vector<double> g_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> closed_;
  std::vector<std::uint16_t> n1_, n2_, n3_;
  std::vector<HeapEntry> heap_;
};

// One-shot search. Returns Found with the optimal path, Unreachable when the
// open set empties, or Running ("exhausted") when the expansion budget is hit.
struct AstarResult {
  SearchStatus status;
  GridPath path;  // valid iff status == Found
};
AstarResult astar_grid(const VoxelGrid& grid, const Vec3& start, const Vec3& goal,
                       std::uint64_t budget);

}  // namespace mrplan
