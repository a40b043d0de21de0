// Influence and winning probabilities on the three-node example, with and
// without memory. Build target: three_node_sample.
#include <iostream>

#include "memcon/memcon.hpp"

using memcon::Rational;

int main() {
  const memcon::ExactDigraph g(3, {{0, 1, 1},
                                   {1, 0, Rational(1, 4)},
                                   {1, 2, Rational(3, 4)},
                                   {2, 1, Rational(1, 3)},
                                   {2, 2, Rational(2, 3)}});
  const auto mu = memcon::stationary_distribution(g);
  std::cout << "influence:";
  for (const auto& x : mu) std::cout << ' ' << x;
  std::cout << '\n';

  enum : memcon::Colour { red, blue, green };
  const memcon::Configuration present{blue, blue, red};
  auto w = memcon::winprob_memoryless(g, mu, present);
  std::cout << "memoryless: red " << w[red] << ", blue " << w[blue] << '\n';

  const memcon::BasicMemoryParams<Rational> p({Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  const memcon::HistoryStack history{{green, red, blue}, {red, blue, blue}, present};
  w = memcon::winprob_memory(g, mu, p, history);
  std::cout << "two-step memory: red " << w[red] << ", blue " << w[blue] << ", green " << w[green] << '\n';

  // cross-check by simulation
  const auto gd = g.to_double();
  const auto pd = p.to_double();
  const memcon::CopyRule rule(gd, pd);
  std::size_t wins[3] = {};
  const std::size_t runs = 20000;
  for (std::size_t i = 0; i < runs; ++i) {
    memcon::Engine rng(memcon::splitmix64(i));
    memcon::MemoryProcessState state(history, 2);
    while (state.stable_consensus() == memcon::kNoColour) state.step(rule, rng);
    ++wins[state.stable_consensus()];
  }
  std::cout << "simulated:       red " << double(wins[red]) / runs << ", blue " << double(wins[blue]) / runs
            << ", green " << double(wins[green]) / runs << '\n';
}
