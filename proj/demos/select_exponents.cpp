// Prints the epsilon windows and selected mixed-norm exponent triples for a
// few (N, s, p) choices, plus a small enumeration of admissible triples.

#include <iostream>

#include "displab/exponents.hpp"

using namespace displab;

int main() {
  struct Case {
    int N;
    Rational s, p;
  };

  std::cout << "Schroedinger selection (k = 2):\n";
  for (const Case& c : {Case{3, Rational(1), Rational(3)},
                        Case{4, Rational(1), Rational(2)},
                        Case{3, Rational(1, 2), Rational(2)}}) {
    const auto sel = select_schrodinger_exponents(c.N, c.s, c.p);
    std::cout << "  N=" << c.N << " s=" << c.s << " p=" << c.p << ": eps in ("
              << sel.window_lo << ", " << sel.window_hi << "), eps="
              << sel.epsilon << ", (q,r,r~)=(" << sel.triple.q << ","
              << sel.triple.r << "," << sel.triple.r_tilde
              << "), beta=" << sel.beta << "\n";
  }

  std::cout << "Wave selection (k = 1):\n";
  for (const Case& c : {Case{2, Rational(1, 2), Rational(4)},
                        Case{3, Rational(1, 2), Rational(3)}}) {
    const auto sel = select_wave_exponents(c.N, c.s, c.p);
    std::cout << "  N=" << c.N << " s=" << c.s << " p=" << c.p << ": eps in ("
              << sel.window_lo << ", " << sel.window_hi << "), eps="
              << sel.epsilon << ", (q,r,r~)=(" << sel.triple.q << ","
              << sel.triple.r << "," << sel.triple.r_tilde
              << "), beta=" << sel.beta << "\n";
  }

  std::cout << "Admissible triples for N=3, k=2 (reciprocal denominators <= 4):\n";
  for (const auto& t : admissible_enumerate(3, 2, AdmissibleFlavor::S, 4))
    std::cout << "  (" << t.q << ", " << t.r << ", " << t.r_tilde << ")\n";
  return 0;
}
