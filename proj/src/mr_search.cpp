#include "mrplan/mr_search.hpp"

#include <algorithm>
#include <cmath>

#include "mrplan/errors.hpp"

namespace mrplan {

namespace {

struct SampleTrack {
  std::vector<double> t;
  std::vector<Vec3> p;
  std::vector<bool> hit;
};

// Arclength along the sample polyline between sample indices [a, b].
double arc_between(const SampleTrack& s, std::size_t a, std::size_t b) {
  double len = 0.0;
  for (std::size_t i = a; i < b; ++i) len += (s.p[i + 1] - s.p[i]).norm();
  return len;
}

}  // namespace

std::vector<CollidingSegment> extract_colliding_segments(const PiecewiseTrajectory& traj,
                                                         const VoxelGrid& lrm, double dt,
                                                         int margin_cells) {
  if (!(dt > 0.0)) throw PreconditionError("extraction step must be > 0");
  const double total = traj.total_duration();

  SampleTrack s;
  const std::size_t n = static_cast<std::size_t>(std::ceil(total / dt));
  s.t.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = std::min(k * dt, total);
    s.t.push_back(t);
    s.p.push_back(traj.eval(t, 0));
    s.hit.push_back(lrm.query_occupied(s.p.back()));
  }
  if (s.hit.front() || s.hit.back()) {
    throw InvalidInputError("global start or goal lies in LRM-occupied space");
  }

  // Maximal colliding runs as sample index intervals [first_hit, last_hit].
  struct Run {
    std::size_t lo, hi;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < s.hit.size(); ++i) {
    if (!s.hit[i]) continue;
    if (!runs.empty() && runs.back().hi + 1 == i) {
      runs.back().hi = i;
    } else {
      runs.push_back(Run{i, i});
    }
  }
  if (runs.empty()) return {};

  const double margin = margin_cells * lrm.resolution();

  // Push run ends outward to the adjacent free samples, then merge runs whose
  // free gap is shorter than 2*margin.
  std::vector<Run> merged;
  for (const auto& r : runs) {
    Run rr{r.lo > 0 ? r.lo - 1 : 0, std::min(r.hi + 1, s.t.size() - 1)};
    if (!merged.empty() && arc_between(s, merged.back().hi, rr.lo) < 2.0 * margin) {
      merged.back().hi = rr.hi;
    } else {
      merged.push_back(rr);
    }
  }

  // Extend each end by `margin` of arclength through free samples.
  std::vector<CollidingSegment> out;
  for (const auto& r : merged) {
    std::size_t lo = r.lo, hi = r.hi;
    double acc = 0.0;
    while (lo > 0 && acc < margin && !s.hit[lo - 1]) {
      acc += (s.p[lo] - s.p[lo - 1]).norm();
      --lo;
    }
    acc = 0.0;
    while (hi + 1 < s.t.size() && acc < margin && !s.hit[hi + 1]) {
      acc += (s.p[hi + 1] - s.p[hi]).norm();
      ++hi;
    }
    CollidingSegment seg;
    seg.t_entry = s.t[lo];
    seg.t_exit = s.t[hi];
    seg.entry = s.p[lo];
    seg.exit = s.p[hi];
    out.push_back(seg);
  }
  return out;
}

MrResult mr_search(const CollidingSegment& seg, const DualResMap& map, int ratio,
                   std::uint64_t budget) {
  if (budget == 0 || ratio < 1) throw ConfigError("mr_search needs budget > 0, ratio >= 1");

  auto lrs = std::make_unique<GridSearch>(map.lrm, seg.entry, seg.exit);
  GridSearch hrs(map.hrm, seg.entry, seg.exit);

  MrResult res;
  std::uint64_t used = 0;
  bool lrs_done = false, hrs_done = false;

  while (used < budget && !(lrs_done && hrs_done)) {
    if (!lrs_done) {
      const std::uint64_t quota = std::min<std::uint64_t>(ratio, budget - used);
      if (quota == 0) break;
      const std::uint64_t before = lrs->expansions();
      const SearchStatus st = lrs->step(quota);
      used += lrs->expansions() - before;
      if (st == SearchStatus::Found) {
        res.cls = MrClass::R3;
        res.path = lrs->path();
        res.lrs_expansions = lrs->expansions();
        res.hrs_expansions = hrs.expansions();
        return res;
      }
      if (st == SearchStatus::Unreachable) lrs_done = true;
    }
    if (!hrs_done && used < budget) {
      const std::uint64_t before = hrs.expansions();
      const SearchStatus st = hrs.step(1);
      used += hrs.expansions() - before;
      if (st == SearchStatus::Found) {
        res.cls = MrClass::SE3Candidate;
        res.path = hrs.path();
        res.lrs = std::make_shared<LrsHandle>();
        res.lrs->search = std::move(lrs);
        res.lrs_expansions = res.lrs->search->expansions();
        res.hrs_expansions = hrs.expansions();
        return res;
      }
      if (st == SearchStatus::Unreachable) hrs_done = true;
    }
    // The high-resolution free space is a superset of the low-resolution one,
    // so an unreachable HRS implies an unreachable segment.
    if (hrs_done && !lrs_done) {
      const SearchStatus st = lrs->step(budget > used ? budget - used : 0);
      if (st == SearchStatus::Found) {
        res.cls = MrClass::R3;
        res.path = lrs->path();
      }
      break;
    }
  }
  res.lrs_expansions = lrs->expansions();
  res.hrs_expansions = hrs.expansions();
  return res;  // Unreachable (both exhausted or budget hit)
}

AstarResult resume_lrs(LrsHandle& handle, std::uint64_t extra_budget) {
  if (!handle.search || handle.consumed) {
    throw StateError("resume_lrs: handle already consumed or invalid");
  }
  handle.consumed = true;
  AstarResult res;
  res.status = extra_budget > 0 ? handle.search->step(extra_budget)
                                : handle.search->status();
  if (res.status == SearchStatus::Found) res.path = handle.search->path();
  return res;
}

}  // namespace mrplan
