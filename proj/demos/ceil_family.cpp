// A family built from the pairing construction: k -> alpha(k, ceil(c*k)) for
// ratios 3/2 and 5/4. The two maps agree at k = 1, 2 and nowhere else, so the
// disjointness threshold is 3; certification and the identity sweeps both run
// on top of that exact threshold.
#include <iostream>

#include "rolewicz/json_io.hpp"
#include "rolewicz/prop_oracles.hpp"

using namespace rolewicz;

int main() {
  auto fam = make_family({IncreasingMap::ceil_pair(Rat(3, 2)), IncreasingMap::ceil_pair(Rat(5, 4))});
  std::cout << family_report_to_json(fam).dump(2) << "\n\n";

  std::vector<Rat> coeffs{Rat(2), Rat(2)};
  auto cert = certify(make_operator(fam, coeffs, Rat(17), 1));
  std::cout << certificate_to_json(cert).dump(2) << "\n\n";

  SweepConfig cfg;
  cfg.r_max = 4;
  cfg.k_max = 8;
  cfg.i_max = 8;
  auto sweeps = run_all_sweeps(fam, coeffs, cfg);
  bool clean = true;
  for (const auto& s : sweeps) clean = clean && s.clean();
  std::cout << sweep_results_to_json(sweeps).dump(2) << "\n";
  return clean ? 0 : 1;
}
