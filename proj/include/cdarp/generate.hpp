#ifndef CDARP_GENERATE_HPP
#define CDARP_GENERATE_HPP

#include <cstdint>
#include <vector>

#include "cdarp/model.hpp"

namespace cdarp {

// Map-like synthetic instances: depots and request endpoints drawn uniformly
// in a planar region whose diameter corresponds to max_trip_time seconds;
// travel times are rounded-up Euclidean distances (triangle inequality is
// preserved) and costs equal times.
struct GenParams {
  int companies = 2;
  int requests_per_company = 4;
  int vehicles_per_company = 1;
  int capacity = 3;                    // Q_k
  Seconds max_route_duration = 20000;  // T_k
  Seconds max_ride = 3000;             // T_c
  Seconds service = 120;               // s' = s''
  int passengers = 1;                  // p_c
  Seconds window_width = 2000;
  Seconds horizon = 20000;
  Seconds max_trip_time = 2400;
};

// Paper size groups; one vehicle per company.
GenParams group_params(char group);

// Deterministic: the same seed yields a byte-identical instance file. Each
// request gets a window of window_width on one endpoint (fair coin) placed so
// the request stays individually serviceable by its owner's vehicle; the
// other endpoint keeps [0, horizon].
Instance generate(const GenParams& params, std::uint64_t seed);

// Consecutive-day scenario: the same companies and depots every day, fresh
// requests per day (derived sub-seeds).
std::vector<Instance> generate_days(const GenParams& params, std::uint64_t seed, int days);

}  // namespace cdarp

#endif
