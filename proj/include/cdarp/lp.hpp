#ifndef CDARP_LP_HPP
#define CDARP_LP_HPP

#include <stdexcept>
#include <string>

#include "cdarp/model.hpp"
#include "cdarp/schedule.hpp"

namespace cdarp {

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LpExportOptions {
  int max_variables = 200000;
};

// Emits the full mixed-integer model in CPLEX LP text format. Variables are
// named y_<c>_<k>, x_<i>_<j>_<k>, w_<i>_<k>, u_<i>_<k>, r_<c>_<k>, S_<m>,
// U_<m> over request/vehicle/company ids and canonical node ids. The mode
// selects which balance blocks appear; NC adds zero bounds on cross-company
// assignments instead. Big-M constants: U_ij = max(0, l_i + s_i + t_ij - e_j),
// W_ij = min(Q_k, Q_k + q_i). Throws LpError past the variable cap.
std::string export_lp(const Instance& inst, const BalanceSpec& spec, const LpExportOptions& opts = {});

// Reads a flat `name value` listing of an external solver's solution (only
// nonzeros need to be present) and reconstructs the routes by following the
// x arcs from each start depot. Fractional binaries, branching or
// disconnected arcs raise LpError.
Solution import_lp_solution(const Instance& inst, const std::string& solution_text);

}  // namespace cdarp

#endif
