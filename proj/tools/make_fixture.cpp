// Writes a harness-generated scene as a solve-input document.
//
//   make_fixture --seed 42 --points 10 --sigma 0 --out scene.json

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "planar_pnp/cli_io.hpp"
#include "planar_pnp/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic solve-input document"};
  std::uint64_t seed = 42;
  int points = 10;
  double sigma = 0.0;
  std::string out_path;
  app.add_option("--seed", seed, "Scene seed");
  app.add_option("--points", points, "Number of correspondences");
  app.add_option("--sigma", sigma, "Pixel noise standard deviation");
  app.add_option("--out", out_path, "Output path (default: stdout)");
  CLI11_PARSE(app, argc, argv);

  planar_pnp::ScenarioConfig cfg;
  cfg.n_points = points;
  cfg.noise_sigma_px = sigma;
  const std::string doc =
      planar_pnp::SceneToJson(planar_pnp::GenerateScene(cfg, seed));
  if (out_path.empty()) {
    std::cout << doc;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out << doc;
  return out ? 0 : 1;
}
