// The backward shift, scaled by 2: the classical chaotic operator. Certifies on
// the single-map path and rebuilds the closed-form periodic point 2^{-2l} e_{1+2l}.
#include <iostream>

#include "rolewicz/json_io.hpp"
#include "rolewicz/witness_engine.hpp"

using namespace rolewicz;

int main() {
  auto fam = make_family({IncreasingMap::shift(1)});
  auto op = make_operator(fam, {Rat(1)}, Rat(2), 2);

  auto cert = certify(op);
  std::cout << certificate_to_json(cert).dump(2) << "\n\n";

  SparseSeq<Rat> e1;
  e1.set(1, Rat(1));
  auto pb = build_periodic(op, e1, Rat(1, 10), 3);
  std::cout << witness_to_json(pb.w).dump(2) << "\n\n";
  std::cout << verify_report_to_json(pb.report, true).dump(2) << "\n";
  return 0;
}
