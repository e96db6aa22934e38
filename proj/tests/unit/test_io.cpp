#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include "cdarp/generate.hpp"
#include "cdarp/io.hpp"

using namespace cdarp;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("cdarp_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

// the documented hand-written minimal instance (kept in sync with README.md)
const char* kMinimalInstance = R"({
  "horizon": 1000,
  "seed": 0,
  "companies": [{"id": 1, "start_depot": 0, "end_depot": 1}],
  "vehicles": [{"id": 1, "owner": 1, "capacity": 3, "max_duration": 1000, "start_depot": 0, "end_depot": 1}],
  "requests": [{
    "id": 1, "owner": 1, "origin": 2, "destination": 3, "passengers": 1,
    "direct_time": 30, "service_pickup": 5, "service_drop": 5,
    "pickup_window": [0, 500], "drop_window": [0, 1000], "max_ride": 200,
    "lock": "free"
  }],
  "matrix": [0, 0, 10, 40,
             0, 0, 10, 40,
             10, 10, 0, 30,
             40, 40, 30, 0]
})";

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("write-then-read round trip is byte identical") {
    TempDir tmp;
    const Instance inst = generate(group_params('A'), 99);
    const std::string path = tmp.file("a.json");
    write_instance(inst, path);
    const Instance back = read_instance(path);
    CHECK(instance_to_json_text(back) == instance_to_json_text(inst));
    write_instance(back, tmp.file("b.json"));
    CHECK(read_text_file(tmp.file("a.json")) == read_text_file(tmp.file("b.json")));
  }

  TEST_CASE("missing matrix key names the key") {
    CHECK_THROWS_WITH_AS(instance_from_json_text(R"({"companies":[],"vehicles":[],"requests":[]})", "doc"),
                         doctest::Contains("matrix"), IoError);
  }

  TEST_CASE("documented minimal instance loads and validates") {
    const Instance inst = instance_from_json_text(kMinimalInstance, "doc");
    CHECK(validate_instance(inst).empty());
    CHECK(inst.requests[0].direct_time == 30);
    CHECK(inst.horizon == 1000);
  }

  TEST_CASE("non-canonical node references are rejected with the field name") {
    std::string bad = kMinimalInstance;
    const auto pos = bad.find("\"origin\": 2");
    bad.replace(pos, 11, "\"origin\": 3");
    CHECK_THROWS_WITH_AS(instance_from_json_text(bad, "doc"), doctest::Contains("origin"), IoError);
  }

  TEST_CASE("declared direct_time must match the matrix") {
    std::string bad = kMinimalInstance;
    const auto pos = bad.find("\"direct_time\": 30");
    bad.replace(pos, 17, "\"direct_time\": 31");
    CHECK_THROWS_WITH_AS(instance_from_json_text(bad, "doc"), doctest::Contains("direct_time"), IoError);
  }

  TEST_CASE("locks survive the round trip") {
    TempDir tmp;
    Instance inst = generate(group_params('A'), 5);
    inst.requests[0].lock = Lock{LockKind::MustStayWithOwner, {}};
    inst.requests[1].lock = Lock{LockKind::Denylist, {2}};
    write_instance(inst, tmp.file("locks.json"));
    const Instance back = read_instance(tmp.file("locks.json"));
    CHECK(back.requests[0].lock.kind == LockKind::MustStayWithOwner);
    CHECK(back.requests[1].lock.kind == LockKind::Denylist);
    CHECK(back.requests[1].lock.denied == std::vector<int>{2});
  }

  TEST_CASE("solution files: round trip keeps the routes and the feasibility verdict") {
    TempDir tmp;
    const Instance inst = generate(group_params('A'), 17);
    SolutionFile file;
    file.solution = empty_solution(inst);
    // serve every request with its owner: a feasible NC solution by construction
    for (std::size_t ri = 0; ri < inst.requests.size(); ++ri) {
      const Request& r = inst.requests[ri];
      for (std::size_t k = 0; k < inst.vehicles.size(); ++k)
        if (inst.vehicles[k].owner == r.owner) {
          file.solution.routes[k].visits.push_back(r.origin);
          file.solution.routes[k].visits.push_back(r.destination);
          break;
        }
    }
    file.spec.mode = BalanceMode::T;
    file.spec.alpha_t = Rat::from_double(0.1);
    file.spec.offsets.push_back(CompanyOffset{1, -50, 0});
    file.cost = solution_cost(inst, file.solution);
    file.backend = "oracle";

    const auto pre = check_solution(inst, file.solution, file.spec);
    write_solution(inst, file, tmp.file("sol.json"));
    const SolutionFile back = read_solution(inst, tmp.file("sol.json"));
    const auto post = check_solution(inst, back.solution, back.spec);
    CHECK(pre.size() == post.size());
    CHECK(back.cost == file.cost);
    CHECK(back.spec.mode == BalanceMode::T);
    CHECK(back.spec.offset_for(1).s_prime == -50);
    for (std::size_t k = 0; k < back.solution.routes.size(); ++k)
      CHECK(back.solution.routes[k].visits == file.solution.routes[k].visits);
  }

  TEST_CASE("params files override field by field") {
    const AlnsParams p = params_from_json_text(R"({"t_max": 50.0, "q_min": 3, "seed": 9})");
    CHECK(p.t_max == 50.0);
    CHECK(p.q_min == 3);
    CHECK(p.seed == 9);
    CHECK(p.gamma == 0.999);  // untouched default
  }

  TEST_CASE("offsets files") {
    TempDir tmp;
    write_offsets({{1, -120, 1}, {2, 120, -1}}, tmp.file("off.json"));
    const auto offs = read_offsets(tmp.file("off.json"));
    REQUIRE(offs.size() == 2);
    CHECK(offs[0].company == 1);
    CHECK(offs[0].s_prime == -120);
    CHECK(offs[1].u_prime == -1);
  }

  TEST_CASE("generator params accept a group key plus overrides") {
    const GenParams p = gen_params_from_json_text(R"({"group": "C", "capacity": 4})");
    CHECK(p.companies == 4);
    CHECK(p.requests_per_company == 12);
    CHECK(p.capacity == 4);
  }
}
