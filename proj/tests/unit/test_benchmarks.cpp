#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pfb/benchmark_runner.hpp"
#include "pfb/errors.hpp"

using namespace pfb;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("benchmarks") {
  TEST_CASE("builtin names") {
    const auto names = builtin_benchmark_names();
    CHECK(names == std::vector<std::string>{"multilayer", "cylinder_inclusion", "leaky_well"});
    for (const auto& n : names) CHECK(builtin_benchmark(n).name == n);
    CHECK_THROWS_AS(builtin_benchmark("nope"), InvalidArgument);
  }

  TEST_CASE("multilayer: both formulations carry the same total concentration") {
    BenchmarkSpec s = multilayer();
    s.transport.t_end = 2.0;
    s.transport.steady_tolerance = 0.0;
    const BenchmarkRun a = run_benchmark(s, Formulation::rt0);
    const BenchmarkRun b = run_benchmark(s, Formulation::vms);
    REQUIRE(a.transport);
    REQUIRE(b.transport);
    const auto& ra = a.transport->series.rows;
    const auto& rb = b.transport->series.rows;
    REQUIRE(ra.size() == rb.size());
    double worst = 0.0, when = 0.0;
    for (std::size_t i = 1; i < ra.size(); ++i) {
      const double d = std::abs(ra[i][1] - rb[i][1]) / std::abs(ra[i][1]);
      if (d > worst) worst = d, when = ra[i][0];
    }
    CAPTURE(when);
    CHECK(worst <= 0.03);
    CHECK(a.passed());
    CHECK(b.passed());
  }

  TEST_CASE("unknown ratio of the two formulations") {
    const BenchmarkSpec s = multilayer();
    const Mesh m = build_mesh(s);
    const double ratio = static_cast<double>(dof_counts(m, Formulation::vms)) /
                         static_cast<double>(dof_counts(m, Formulation::rt0));
    CHECK(std::abs(ratio - 0.65) <= 0.05);
  }

  TEST_CASE("repeated runs write byte-identical files") {
    BenchmarkSpec s = multilayer();
    s.transport.t_end = 0.5;
    s.outputs.snapshot_every = 10;
    const fs::path root = fs::temp_directory_path() / "pfb_determinism";
    fs::remove_all(root);
    for (const char* d : {"a", "b"}) {
      RunOptions o;
      o.output_dir = (root / d).string();
      fs::create_directories(o.output_dir);
      run_benchmark(s, Formulation::vms, o);
    }
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(root / "a")) {
      const fs::path other = root / "b" / e.path().filename();
      CAPTURE(e.path().filename().string());
      REQUIRE(fs::exists(other));
      CHECK(slurp(e.path()) == slurp(other));
      ++files;
    }
    CHECK(files >= 8);
    fs::remove_all(root);
  }

  TEST_CASE("mass discrepancy of a run with itself is zero") {
    BenchmarkSpec s = multilayer();
    s.transport.t_end = 0.3;
    const BenchmarkRun a = run_benchmark(s, Formulation::rt0);
    CHECK(mass_discrepancy(*a.transport, *a.transport) == 0.0);
  }
}
