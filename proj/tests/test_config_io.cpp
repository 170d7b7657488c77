#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlad/config.hpp"
#include "nlad/io.hpp"

using namespace nlad;

TEST_SUITE("config_io") {
  TEST_CASE("parsing key = value files") {
    std::istringstream in(
        "# comment\n"
        "L = 4\n"
        "u1_bar = 10\n"
        "\n"
        "u2_bar=10   \n"
        "gamma = 0.16\n"
        "n = 64\n"
        "dealias = false\n"
        "seed_mode = wnl_profile\n"
        "initial = checkpoint:foo.ckpt\n");
    RunConfig c = parse_config(in);
    CHECK(c.model.L == 4);
    CHECK(c.model.u2_bar == 10);
    CHECK(c.solver.n == 64);
    CHECK_FALSE(c.solver.dealias);
    CHECK(c.seed_mode == SeedMode::wnl_profile);
    CHECK(c.initial == InitialCondition::checkpoint);
    CHECK(c.checkpoint_in == "foo.ckpt");
    c.set("n", "128");  // flags win
    c.finalize();
    CHECK(c.solver.n == 128);
  }

  TEST_CASE("bad configurations are rejected") {
    auto parse = [](const std::string& s) {
      std::istringstream in(s);
      return parse_config(in);
    };
    CHECK_THROWS_AS(parse("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse("L = four\n"), ConfigError);
    CHECK_THROWS_AS(parse("n = 64.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("L 4\n"), ConfigError);
    CHECK_THROWS_AS(parse("dealias = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse("direction = sideways\n"), ConfigError);
    auto c = parse("L = 1.5\n");
    CHECK_THROWS_AS(c.finalize(), ConfigError);
    c = parse("n = 100\n");
    CHECK_THROWS_AS(c.finalize(), ConfigError);
    c = parse("gamma_min = 1\n");
    CHECK_THROWS_AS(c.finalize(), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
  }

  TEST_CASE("resolved entries round-trip through the parser") {
    RunConfig c;
    c.set("L", "7.25");
    c.set("gamma", "0.1");
    c.set("dt", "0.005");
    c.finalize();
    std::ostringstream os;
    for (const auto& [k, v] : c.entries())
      if (v != "auto") os << k << " = " << v << '\n';
    std::istringstream in(os.str());
    RunConfig d = parse_config(in);
    d.finalize();
    CHECK(d.entries() == c.entries());
  }

  TEST_CASE("tabulated kernel files") {
    const std::string path = "kernel_tophat.txt";
    {
      std::ofstream f(path);
      f << "# top hat\n";
      for (int i = 0; i < 1025; ++i) f << "0.5\n";
    }
    RunConfig c;
    c.set("kernel", "tabulated:" + path);
    c.set("L", "4");
    c.finalize();
    CHECK(std::holds_alternative<Tabulated<double>>(c.model.kernel));
    CHECK(fourier_coefficient(c.model.kernel, 1.3) == doctest::Approx(std::sin(1.3) / 1.3).epsilon(1e-8));
    std::filesystem::remove(path);
  }

  TEST_CASE("17 significant digits round-trip doubles") {
    for (double v : {0.1, 1.0 / 3.0, 3.19933e-17, -2.5e300, 1.0000000000000002}) CHECK(std::stod(fmt17(v)) == v);
    CHECK(fmt6(3.1993312345) == "3.19933");
  }

  TEST_CASE("checkpoint layout and round trip") {
    Checkpoint c;
    c.state = StateGrid(32, 4.5);
    for (int k = 0; k < 32; ++k) {
      c.state.u1[k] = 1.0 / (k + 1);
      c.state.u2[k] = std::sqrt(k + 0.5);
    }
    c.gamma = 0.7;
    c.u1_bar = 0.1;
    c.u2_bar = 10;
    c.t = 12.5;
    const std::string path = "roundtrip.ckpt";
    write_checkpoint(path, c);
    CHECK(std::filesystem::file_size(path) == 8 + 5 * 8 + 2 * 32 * 8);
    {
      std::ifstream f(path, std::ios::binary);
      unsigned char b[16];
      f.read(reinterpret_cast<char*>(b), 16);
      CHECK(b[0] == 32);
      for (int i = 1; i < 8; ++i) CHECK(b[i] == 0);
      double L;
      std::memcpy(&L, b + 8, 8);  // little-endian host
      CHECK(L == 4.5);
    }
    const Checkpoint r = read_checkpoint(path);
    CHECK(r.state.n == 32);
    CHECK(r.state.L == 4.5);
    CHECK(r.gamma == 0.7);
    CHECK(r.t == 12.5);
    CHECK((r.state.u1.array() == c.state.u1.array()).all());
    CHECK((r.state.u2.array() == c.state.u2.array()).all());
    std::filesystem::resize_file(path, 100);
    CHECK_THROWS(read_checkpoint(path));
    std::filesystem::remove(path);
  }

  TEST_CASE("CSV writers") {
    std::ostringstream os;
    write_header(os, {{"L", "4"}});
    write_state_csv(os, StateGrid::homogeneous(32, 4, 1, 2));
    const std::string s = os.str();
    CHECK(s.rfind("# L = 4\n# version = ", 0) == 0);
    CHECK(s.find("x,u1,u2\n-2,1,2\n") != std::string::npos);
    std::ostringstream d;
    BranchPoint b;
    b.gamma = 1.5;
    b.amplitude = 0.25;
    b.total_amplitude = 0.5;
    b.converged = true;
    write_diagram_csv(d, {b}, Direction::downward);
    CHECK(d.str() ==
          "gamma,amplitude,total_amplitude,mode1_energy_fraction,direction,converged,modulation_class\n"
          "1.5,0.25,0.5,1,down,1,SmallAmplitude\n");
    std::ostringstream t;
    CHECK_THROWS_AS(write_series_csv(t, {1, 2}, {1}), std::invalid_argument);
  }

  TEST_CASE("shipped example configs load and validate") {
    int count = 0;
    for (const auto& e : std::filesystem::directory_iterator(NLAD_CONFIG_DIR)) {
      if (e.path().extension() != ".cfg") continue;
      CAPTURE(e.path().string());
      CHECK_NOTHROW(load_config(e.path().string()));
      ++count;
    }
    CHECK(count >= 5);
  }
}
