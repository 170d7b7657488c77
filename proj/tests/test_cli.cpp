#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NLAD_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  int n = 0;
  bool columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!columns) {
      columns = true;
      continue;
    }
    ++n;
  }
  return n;
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("dispersion table") {
    const auto r = run("dispersion --L 4 --u1 10 --u2 10 --gamma 0.15708 --mmax 8");
    CHECK(r.code == 0);
    CHECK(data_rows(r.out) == 9);
    CHECK(r.out.find("# version = ") != std::string::npos);
    // row m = 1: destabilized eigenvalue near zero
    const auto pos = r.out.find("\n1,");
    REQUIRE(pos != std::string::npos);
    std::istringstream row(r.out.substr(pos + 1));
    std::string m, q, lp, lm;
    std::getline(row, m, ',');
    std::getline(row, q, ',');
    std::getline(row, lp, ',');
    std::getline(row, lm, '\n');
    CHECK(std::abs(std::stod(lm)) < 1e-4);
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(run("dispersion --L 1").code == 2);
    CHECK(run("dispersion").code == 2);
    CHECK(run("dispersion --L abc").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("wnl --L 4 --side sideways").code == 2);
    CHECK(run("thresholds --scan-L 3:2:0.1").code == 2);
    CHECK(run("--help").code == 0);
  }

  TEST_CASE("thresholds") {
    auto r = run("thresholds --L 2.7 --u1 0.1 --u2 10");
    CHECK(r.code == 0);
    CHECK(r.out.find("gamma_c_plus = 3.19933") != std::string::npos);
    r = run("thresholds --L 20 --u1 1 --u2 1");
    CHECK(r.out.find("gamma_c_plus = 1.01664") != std::string::npos);
    r = run("thresholds --scan-L 3:4:0.5 --u1 1 --u2 1");
    CHECK(r.code == 0);
    CHECK(data_rows(r.out) == 3);
  }

  TEST_CASE("wnl classes and scan") {
    auto r = run("wnl --L 4 --u1 10 --u2 10 --side plus");
    CHECK(r.code == 0);
    CHECK(r.out.find("class = SupercriticalStable") != std::string::npos);
    r = run("wnl --L 3.1 --u1 10 --u2 10 --side plus");
    CHECK(r.out.find("class = SupercriticalUnstable") != std::string::npos);
    r = run("wnl --scan-L 2.1:8:0.01 --side plus --u1 1 --u2 1");
    REQUIRE(r.code == 0);
    // Lambda changes sign inside (2.99, 3.01)
    std::istringstream in(r.out);
    std::string line;
    double prev_L = 0, prev_Lambda = 0, crossing = -1;
    bool header = true;
    while (std::getline(in, line)) {
      if (line[0] == '#') continue;
      if (header) {
        header = false;
        continue;
      }
      std::istringstream row(line);
      std::string L, g, q, Lam;
      std::getline(row, L, ',');
      std::getline(row, g, ',');
      std::getline(row, q, ',');
      std::getline(row, Lam, ',');
      const double l = std::stod(L), lam = std::stod(Lam);
      if (prev_L > 0 && prev_Lambda < 0 && lam >= 0 && crossing < 0) crossing = l;
      prev_L = l;
      prev_Lambda = lam;
    }
    CHECK(crossing > 2.99);
    CHECK(crossing < 3.01 + 1e-9);
  }

  TEST_CASE("analytic branch table") {
    const auto r = run("branch --L 4 --u1 10 --u2 10 --side plus --points 11");
    CHECK(r.code == 0);
    CHECK(r.out.find("# class = SupercriticalStable") != std::string::npos);
    CHECK(data_rows(r.out) >= 8);
  }

  TEST_CASE("simulate writes deterministic outputs") {
    write("sim.cfg",
          "# small run near onset\nL = 4\nu1_bar = 10\nu2_bar = 10\ngamma = 0.16\nn = 32\ndt = 0.01\n"
          "t_max = 200\noutput = sim_a\n");
    auto r = run("simulate sim.cfg");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("phase_correlation = -") != std::string::npos);
    CHECK(std::filesystem::exists("sim_a_state.csv"));
    CHECK(std::filesystem::exists("sim_a_series.csv"));
    CHECK(std::filesystem::file_size("sim_a.ckpt") == 48 + 2 * 32 * 8);
    const std::string state = slurp("sim_a_state.csv");
    CHECK(state.find("# gamma = 0.16") != std::string::npos);
    CHECK(data_rows(state) == 32);
    r = run("simulate sim.cfg --output sim_b");
    REQUIRE(r.code == 0);
    CHECK(slurp("sim_b_state.csv").substr(state.find("x,u1")) == state.substr(state.find("x,u1")));
    CHECK(slurp("sim_b.ckpt") == slurp("sim_a.ckpt"));
    // restart from the checkpoint
    r = run("simulate sim.cfg --initial checkpoint:sim_a.ckpt --t_max 1 --output sim_c");
    CHECK(r.code == 0);
  }

  TEST_CASE("simulate rejects bad configs and reports failures") {
    write("bad.cfg", "L = 4\ncolour = red\n");
    CHECK(run("simulate bad.cfg").code == 2);
    write("bad2.cfg", "L = 4\nn = 48\n");
    CHECK(run("simulate bad2.cfg").code == 2);
    CHECK(run("simulate missing.cfg").code == 2);
    write("wild.cfg", "L = 4\nu1_bar = 10\nu2_bar = 10\ngamma = 50\nn = 32\ndt = 1\nmax_halvings = 1\n"
                      "perturbation = 0.5\nnoise = 0.2\noutput = wild\n");
    CHECK(run("simulate wild.cfg").code == 3);
  }

  TEST_CASE("continuation writes sweeps, diagram and analytic branch") {
    write("cont.cfg",
          "L = 4\nu1_bar = 10\nu2_bar = 10\ngamma_min = 0.155\ngamma_max = 0.165\nn_points = 4\nn = 32\n"
          "dt = 0.01\nt_max = 3000\noutput = cont\n");
    const auto r = run("continuation cont.cfg");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("hysteresis_interval = none") != std::string::npos);
    const std::string diagram = slurp("cont_diagram.csv");
    CHECK(diagram.find("gamma,amplitude,total_amplitude,mode1_energy_fraction,direction,converged,modulation_class") !=
          std::string::npos);
    CHECK(data_rows(diagram) == 8);
    CHECK(data_rows(slurp("cont_up.csv")) == 4);
    CHECK(data_rows(slurp("cont_down.csv")) == 4);
    CHECK(std::filesystem::exists("cont_analytic.csv"));
  }
}
