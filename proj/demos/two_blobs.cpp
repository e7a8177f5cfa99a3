// Splits two Gaussian blobs in the plane with the Fiedler vector.
#include <cstdio>
#include <random>
#include <vector>

#include "ddjacobi/ddjacobi.hpp"

namespace dj = ddjacobi;

int main(int argc, char** argv) {
  const std::size_t per_blob = 50;
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 42;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<double> xy;
  for (std::size_t i = 0; i < 2 * per_blob; ++i) {
    const double cx = i < per_blob ? 0.0 : 10.0;
    xy.push_back(cx + noise(rng));
    xy.push_back(noise(rng));
  }
  const dj::PointCloud pc(2 * per_blob, 2, std::move(xy));
  const dj::SymMatrix l = dj::normalized_laplacian(dj::gaussian_similarity(pc, 1.0));
  const dj::ClusterResult c = dj::fiedler_partition(l);

  std::size_t agree = 0;
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    agree += (c.labels[i] == c.labels[0]) == (i < per_blob);
  std::printf("lambda2 = %.6g after %zu sweeps (%s)\n", c.lambda2, c.sweeps,
              std::string(dj::to_string(c.solve_status)).c_str());
  std::printf("%zu of %zu points match their blob\n", agree, c.labels.size());
}
