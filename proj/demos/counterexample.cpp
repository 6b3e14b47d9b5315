// Two maps that agree at a single point (both send 1 to 2). With coefficients
// (2,2) the operator certifies; flipping one sign to (2,-2) makes every class
// sum over the agreement cancel, and the first output coordinate is identically
// zero -- the non-zero condition is not decoration.
#include <iostream>

#include "rolewicz/frontend.hpp"

using namespace rolewicz;

int main() {
  auto fam = counterexample_family();

  auto good = certify(make_operator(fam, {Rat(2), Rat(2)}, Rat(17), 1));
  std::cout << certificate_to_json(good).dump(2) << "\n\n";

  auto bad = certify(make_operator(fam, {Rat(2), Rat(-2)}, Rat(17), 1));
  std::cout << certificate_to_json(bad).dump(2) << "\n\n";

  // The collapse itself, on a concrete input.
  auto op = make_operator(fam, {Rat(2), Rat(-2)}, Rat(17), 1);
  SparseSeq<Rat> x;
  x.set(2, Rat(5, 3));
  x.set(4, Rat(-7));
  auto tx = apply_operator(op, x);
  std::cout << "(Tx)(1) = " << rat_str(tx.at(1)) << ", (Tx)(2) = " << rat_str(tx.at(2))
            << "\n";
  return tx.at(1) == Rat(0) ? 0 : 1;
}
