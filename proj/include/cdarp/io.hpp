#ifndef CDARP_IO_HPP
#define CDARP_IO_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "cdarp/alns.hpp"
#include "cdarp/exact.hpp"
#include "cdarp/generate.hpp"
#include "cdarp/model.hpp"
#include "cdarp/schedule.hpp"

namespace cdarp {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance files: JSON with top-level keys companies, vehicles, requests,
// matrix, horizon, seed (cost_matrix optional when costs differ from times).
// The matrix is row-major over canonical node ids. Serialization is canonical
// (sorted keys, 2-space indent), so write∘read is the identity byte-wise.
Instance read_instance(const std::string& path);
Instance instance_from_json_text(const std::string& text, const std::string& origin = "<string>");
std::string instance_to_json_text(const Instance& inst);
void write_instance(const Instance& inst, const std::string& path);

struct SolutionFile {
  Solution solution;
  BalanceSpec spec;
  Cost cost = 0;
  std::string backend;
  std::optional<AlnsStats> stats;
  std::uint64_t rng_seed = 0;
};

std::string solution_to_json_text(const Instance& inst, const SolutionFile& file);
void write_solution(const Instance& inst, const SolutionFile& file, const std::string& path);
SolutionFile read_solution(const Instance& inst, const std::string& path);

// Partial JSON documents override the defaults field by field.
AlnsParams params_from_json_text(const std::string& text);
AlnsParams read_params(const std::string& path);
GenParams gen_params_from_json_text(const std::string& text);
GenParams read_gen_params(const std::string& path);
EnumerationBudget budget_from_json_text(const std::string& text);

// Offsets files: {"offsets": [{"company":1, "s_prime":0, "u_prime":0}, ...]}
std::vector<CompanyOffset> read_offsets(const std::string& path);
void write_offsets(const std::vector<CompanyOffset>& offsets, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace cdarp

#endif
