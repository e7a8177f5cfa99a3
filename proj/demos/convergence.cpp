// Row-off history of the targeted iteration on the 6x6 example matrix,
// next to the first-order prediction of the per-sweep reduction.
#include <cstdio>

#include "ddjacobi/ddjacobi.hpp"

namespace dj = ddjacobi;

int main() {
  const dj::SymMatrix a = dj::io::gen_example1();
  const std::size_t m = a.size() - 1;

  dj::SolveOptions opts;
  opts.m = m;
  opts.stop_rel = 0.0;
  opts.max_sweeps = 6;
  const dj::EigenpairResult r = dj::solve(a, opts);

  std::printf("sweep  off(H(m,:))    a_mm\n");
  for (const dj::SweepRecord& rec : r.history)
    std::printf("%5zu  %.6e  %.15g\n", rec.sweep, rec.off_row_scaled.value_or(0.0), rec.a_mm);

  const dj::SymMatrix sorted = dj::sort_by_diagonal(a).first;
  std::printf("\nfirst-order factor %.4g, status %s\n", dj::foa_factor(sorted, m),
              std::string(dj::to_string(r.status)).c_str());
}
