// Writes random-model LP files plus the bundled solver's verdict for each,
// as fixtures for the external-solver agreement check (cross_solver.py).

#include <cstdio>
#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "iab/json_io.hpp"
#include "iab/milp.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: lp_fixture_gen <output-dir>\n");
    return 1;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);

  iab::Rng rng(2024);
  for (int i = 0; i < 20; ++i) {
    const iab::MilpModel model = iab::testing::random_model(rng, 14);
    const iab::Solution sol = iab::solve_exact(model);
    char name[32];
    std::snprintf(name, sizeof(name), "model_%02d.lp", i);
    iab::write_text_file((dir / name).string(), iab::export_lp(model));
    std::snprintf(name, sizeof(name), "model_%02d.expected", i);
    char verdict[64];
    if (sol.status == iab::SolveStatus::Optimal) {
      std::snprintf(verdict, sizeof(verdict), "optimal %.9f\n",
                    sol.objective_value);
    } else {
      std::snprintf(verdict, sizeof(verdict), "infeasible\n");
    }
    iab::write_text_file((dir / name).string(), verdict);
  }
  std::printf("wrote 20 LP fixtures to %s\n", dir.string().c_str());
  return 0;
}
