#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cdarp/measures.hpp"
#include "support/oracles.hpp"

using namespace cdarp;
using namespace cdarp::testing;

namespace {

Instance six_requests(std::uint64_t shift = 0) {
  std::vector<MicroRequest> reqs;
  const int pts[6][4] = {{2, 3, 30, 7}, {5, 28, 14, 2}, {22, 9, 4, 25}, {17, 20, 26, 3}, {9, 4, 12, 29}, {28, 16, 6, 11}};
  for (int i = 0; i < 6; ++i) {
    MicroRequest r;
    r.owner = i < 3 ? 1 : 2;
    r.ox = pts[i][0] + static_cast<int>(shift);
    r.oy = pts[i][1];
    r.dx = pts[i][2];
    r.dy = pts[i][3];
    r.pickup = TimeWindow{static_cast<Seconds>(10 * i), static_cast<Seconds>(10 * i + 40 + 3 * i)};
    r.drop = TimeWindow{0, 200};
    r.service = 2;
    r.max_ride = 80;
    reqs.push_back(r);
  }
  return micro_instance(200, {{0, 0}, {30, 30}}, reqs, 3, 10000);
}

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("identical endpoints and windows degenerate to the cap") {
    // two clones of the same trip
    std::vector<MicroRequest> reqs(2, MicroRequest{1, 3, 4, 20, 18, {0, 150}, {0, 150}, 2, 100, 1});
    // a third distinct request keeps the table from being fully degenerate
    reqs.push_back(MicroRequest{1, 12, 1, 4, 22, {5, 60}, {0, 150}, 2, 100, 1});
    const Instance inst = micro_instance(150, {{0, 0}}, reqs, 3, 10000);
    CHECK_FALSE(relatedness(inst, 0, 1).has_value());
    const auto table = MeasureTable::build(inst);
    CHECK(table.rel(0, 1) == table.rel_cap());
    CHECK(table.rel(0, 2) < table.rel_cap());
    CHECK(table.rel_cap() == doctest::Approx(10.0 * std::max(table.rel(0, 2), std::max(table.rel(2, 0), std::max(table.rel(1, 2), table.rel(2, 1))))));
  }

  TEST_CASE("hand metric with half-max distances and identical windows gives rel = 1") {
    // nodes: h'(0) h''(1) o1(2) o2(3) d1(4) d2(5)
    std::vector<Seconds> t(36, 0);
    auto at = [&](int i, int j, Seconds v) {
      t[i * 6 + j] = v;
      t[j * 6 + i] = v;
    };
    at(2, 3, 50);  // t(o_a, o_r)
    at(4, 5, 50);  // t(d_a, d_r)
    at(0, 1, 100);  // the max entry
    at(2, 4, 10);
    at(3, 5, 10);
    const Instance inst = hand_instance(1000, {1}, {{1, 1, 3, 100000}},
                                        {
                                            {1, 1, 1, 0, 0, {0, 1000}, {0, 1000}, 1000, {}},
                                            {2, 1, 1, 0, 0, {0, 1000}, {0, 1000}, 1000, {}},
                                        },
                                        t);
    const auto rel = relatedness(inst, 0, 1);
    REQUIRE(rel.has_value());
    CHECK(*rel == doctest::Approx(1.0));
  }

  TEST_CASE("full 6-request table equals the independent recomputation") {
    const Instance inst = six_requests();
    const auto table = MeasureTable::build(inst);
    for (int a = 0; a < 6; ++a)
      for (int r = 0; r < 6; ++r) {
        if (a == r) continue;
        const auto expect = recompute_relatedness(inst, a, r);
        REQUIRE(expect.has_value());
        CHECK(table.rel(a, r) == doctest::Approx(*expect));
      }
  }

  TEST_CASE("closeness of a zero-distance clone is its two service times") {
    std::vector<MicroRequest> reqs(2, MicroRequest{1, 3, 4, 20, 18, {0, 500}, {0, 500}, 7, 400, 1});
    const Instance inst = micro_instance(500, {{0, 0}}, reqs, 3, 10000);
    const auto close = closeness(inst, 0, 1);
    REQUIRE(close.has_value());
    CHECK(*close == inst.requests[0].service_pickup + inst.requests[0].service_drop);
    CHECK(*close == *brute_force_closeness(inst, 0, 1));
  }

  TEST_CASE("far-apart tight pickups make all six orders infeasible") {
    std::vector<MicroRequest> reqs;
    reqs.push_back(MicroRequest{1, 0, 0, 5, 0, {0, 5}, {0, 300}, 0, 300, 1});
    reqs.push_back(MicroRequest{1, 200, 0, 205, 0, {0, 5}, {0, 300}, 0, 300, 1});
    const Instance inst = micro_instance(300, {{0, 0}}, reqs, 3, 10000);
    CHECK_FALSE(closeness(inst, 0, 1).has_value());
    CHECK_FALSE(brute_force_closeness(inst, 0, 1).has_value());
    const auto table = MeasureTable::build(inst);
    CHECK(table.close(0, 1) == table.close_cap());
    CHECK_FALSE(table.close_finite(0, 1));
  }

  TEST_CASE("single feasible order: closeness equals that order's makespan minus t_r") {
    // r first then a is the only order the windows allow
    std::vector<MicroRequest> reqs;
    reqs.push_back(MicroRequest{1, 0, 0, 2, 0, {0, 5}, {8, 12}, 1, 50, 1});    // r = request 0
    reqs.push_back(MicroRequest{1, 3, 0, 5, 0, {14, 18}, {20, 30}, 1, 50, 1}); // a = request 1
    const Instance inst = micro_instance(40, {{0, 0}}, reqs, 3, 10000);
    int order = -1;
    const auto close = closeness(inst, 1, 0, &order);
    REQUIRE(close.has_value());
    CHECK(order == 0);  // Or Dr Oa Da
    const int seq[4] = {inst.requests[0].origin, inst.requests[0].destination, inst.requests[1].origin,
                        inst.requests[1].destination};
    const auto time = brute_force_sequence_time(inst, seq);
    REQUIRE(time.has_value());
    CHECK(*close == *time - inst.requests[0].direct_time);
    CHECK(*close == *brute_force_closeness(inst, 1, 0));
  }

  TEST_CASE("closeness equals six-order brute force across a random table") {
    const Instance inst = six_requests();
    for (int a = 0; a < 6; ++a)
      for (int r = 0; r < 6; ++r) {
        if (a == r) continue;
        const auto fast = closeness(inst, a, r);
        const auto brute = brute_force_closeness(inst, a, r);
        REQUIRE(fast.has_value() == brute.has_value());
        if (fast) CHECK(*fast == *brute);
      }
  }

  TEST_CASE("property: finite closeness is nonnegative and below each order") {
    const Instance inst = six_requests();
    for (int a = 0; a < 6; ++a)
      for (int r = 0; r < 6; ++r) {
        if (a == r) continue;
        const auto close = closeness(inst, a, r);
        if (close) CHECK(*close >= 0);
      }
  }

  TEST_CASE("property: time scaling scales finite closeness and keeps the argmin") {
    const Instance base = six_requests();
    const int lambda = 3;
    Instance scaled = base;
    for (auto& t : scaled.travel) t *= lambda;
    scaled.cost = scaled.travel;
    scaled.horizon *= lambda;
    for (auto& n : scaled.nodes) {
      n.window.earliest *= lambda;
      n.window.latest *= lambda;
      n.service *= lambda;
    }
    for (auto& r : scaled.requests) {
      r.direct_time *= lambda;
      r.service_pickup *= lambda;
      r.service_drop *= lambda;
      r.pickup_window.earliest *= lambda;
      r.pickup_window.latest *= lambda;
      r.drop_window.earliest *= lambda;
      r.drop_window.latest *= lambda;
      r.max_ride *= lambda;
    }
    for (int a = 0; a < 6; ++a)
      for (int r = 0; r < 6; ++r) {
        if (a == r) continue;
        int order_base = -1, order_scaled = -1;
        const auto c0 = closeness(base, a, r, &order_base);
        const auto c1 = closeness(scaled, a, r, &order_scaled);
        REQUIRE(c0.has_value() == c1.has_value());
        if (c0) {
          CHECK(*c1 == lambda * *c0);
          CHECK(order_base == order_scaled);
        }
      }
  }

  TEST_CASE("proximity and interchangeability") {
    const Instance inst = six_requests();
    const auto table = MeasureTable::build(inst);
    Solution sol = empty_solution(inst);
    // three per route
    for (int i = 0; i < 6; ++i) {
      auto& visits = sol.routes[i < 3 ? 0 : 1].visits;
      visits.push_back(inst.requests[i].origin);
      visits.push_back(inst.requests[i].destination);
    }
    const auto route_of = route_assignment(inst, sol);

    for (int a = 0; a < 6; ++a) {
      double expect_rel = table.rel_cap();
      Seconds expect_close = table.close_cap();
      for (int c = 0; c < 6; ++c) {
        if (route_of[c] == route_of[a]) continue;
        expect_rel = std::min(expect_rel, table.rel(a, c));
        expect_close = std::min(expect_close, table.close(a, c));
      }
      CHECK(proximity(inst, table, route_of, a) == doctest::Approx(expect_rel));
      CHECK(interchangeability(inst, table, route_of, a) == expect_close);
    }
  }

  TEST_CASE("two single-request routes: proximity is the relatedness to the other") {
    const Instance inst = six_requests();
    const auto table = MeasureTable::build(inst);
    Solution sol = empty_solution(inst);
    sol.routes[0].visits = {inst.requests[0].origin, inst.requests[0].destination};
    sol.routes[1].visits = {inst.requests[3].origin, inst.requests[3].destination};
    const auto route_of = route_assignment(inst, sol);
    CHECK(proximity(inst, table, route_of, 0) == doctest::Approx(table.rel(0, 3)));
    CHECK(proximity(inst, table, route_of, 3) == doctest::Approx(table.rel(3, 0)));
  }

  TEST_CASE("single-vehicle solutions fall back to the cap") {
    std::vector<MicroRequest> reqs(2, MicroRequest{1, 3, 4, 20, 18, {0, 150}, {0, 150}, 2, 100, 1});
    reqs[1].ox = 9;
    const Instance inst = micro_instance(150, {{0, 0}}, reqs, 3, 10000);
    const auto table = MeasureTable::build(inst);
    Solution sol = empty_solution(inst);
    for (int i = 0; i < 2; ++i) {
      sol.routes[0].visits.push_back(inst.requests[i].origin);
      sol.routes[0].visits.push_back(inst.requests[i].destination);
    }
    const auto route_of = route_assignment(inst, sol);
    CHECK(proximity(inst, table, route_of, 0) == table.rel_cap());
    CHECK(interchangeability(inst, table, route_of, 0) == table.close_cap());
  }

  TEST_CASE("table depends only on the instance and rebuilds identically") {
    const Instance inst = six_requests();
    const auto a = MeasureTable::build(inst);
    const auto b = MeasureTable::build(inst);
    std::ostringstream dump_a, dump_b;
    a.dump_csv(dump_a);
    b.dump_csv(dump_b);
    CHECK(dump_a.str() == dump_b.str());
    CHECK(dump_a.str().find("a,r,rel,close") == 0);
  }
}
