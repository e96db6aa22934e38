#ifndef CDARP_MEASURES_HPP
#define CDARP_MEASURES_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "cdarp/model.hpp"
#include "cdarp/schedule.hpp"

namespace cdarp {

// The six ways to interleave the four nodes of requests a and r.
// Order matters for the argmin index reported in table dumps.
inline constexpr int kClosenessOrders = 6;

// Spatial + temporal similarity of two requests, inverted; nullopt when both
// terms vanish (identical endpoints and windows) -- callers substitute a cap.
std::optional<double> relatedness(const Instance& inst, int request_a, int request_r);

// Lower bound (seconds) on the extra time of serving a alongside r, minimized
// over the six interleavings of their four nodes; nullopt when all six are
// time-infeasible. argmin_order, when given, receives the winning order index
// (lowest index among ties) or -1.
std::optional<Seconds> closeness(const Instance& inst, int request_a, int request_r, int* argmin_order = nullptr);

// Precomputed relatedness/closeness for every ordered request pair. Degenerate
// and infinite entries are replaced by a cap of 10x the largest finite value
// so squared-weight sampling stays defined. Immutable once built.
class MeasureTable {
 public:
  static MeasureTable build(const Instance& inst);

  double rel(int a, int r) const { return rel_[idx(a, r)]; }
  Seconds close(int a, int r) const { return close_[idx(a, r)]; }
  bool close_finite(int a, int r) const { return close_finite_[idx(a, r)]; }
  int close_order(int a, int r) const { return close_order_[idx(a, r)]; }
  double rel_cap() const { return rel_cap_; }
  Seconds close_cap() const { return close_cap_; }
  int size() const { return n_; }

  void dump_csv(std::ostream& os) const;

 private:
  std::size_t idx(int a, int r) const { return static_cast<std::size_t>(a) * n_ + r; }
  int n_ = 0;
  std::vector<double> rel_;
  std::vector<Seconds> close_;
  std::vector<char> close_finite_;
  std::vector<signed char> close_order_;
  double rel_cap_ = 1;
  Seconds close_cap_ = 1;
};

// route_of[i]: vehicle index serving request i, -1 when unserved.
std::vector<int> route_assignment(const Instance& inst, const Solution& sol);

// Minimum relatedness between a and any request on a different route; the
// table cap when no such request exists.
double proximity(const Instance& inst, const MeasureTable& table, const std::vector<int>& route_of, int request_a);

// Same with the closeness measure.
Seconds interchangeability(const Instance& inst, const MeasureTable& table, const std::vector<int>& route_of,
                           int request_a);

}  // namespace cdarp

#endif
