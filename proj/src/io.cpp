#include "nlad/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace nlad {

namespace {

std::string fmt(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw std::runtime_error("truncated checkpoint");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::string fmt17(double v) { return fmt(v, 17); }
std::string fmt6(double v) { return fmt(v, 6); }

void write_header(std::ostream& os, const Header& h) {
  for (const auto& [k, v] : h) os << "# " << k << " = " << v << '\n';
  os << "# version = " << kVersion << '\n';
}

void write_state_csv(std::ostream& os, const StateGrid& s) {
  os << "x,u1,u2\n";
  for (int k = 0; k < s.n; ++k) os << fmt17(s.x(k)) << ',' << fmt17(s.u1[k]) << ',' << fmt17(s.u2[k]) << '\n';
}

void write_series_csv(std::ostream& os, const std::vector<double>& t, const std::vector<double>& amplitude) {
  if (t.size() != amplitude.size()) throw std::invalid_argument("time and amplitude series differ in length");
  os << "t,amplitude\n";
  for (std::size_t i = 0; i < t.size(); ++i) os << fmt17(t[i]) << ',' << fmt17(amplitude[i]) << '\n';
}

void write_diagram_csv(std::ostream& os, const std::vector<BranchPoint>& points, Direction d, bool write_columns) {
  if (write_columns)
    os << "gamma,amplitude,total_amplitude,mode1_energy_fraction,direction,converged,modulation_class\n";
  for (const auto& p : points) {
    os << fmt17(p.gamma) << ',' << fmt17(p.amplitude) << ',' << fmt17(p.total_amplitude) << ','
       << fmt17(p.mode1_energy_fraction) << ',' << to_string(d) << ',' << (p.converged ? 1 : 0) << ','
       << to_string(classify_modulation(p)) << '\n';
  }
}

void write_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
  put_le<std::int64_t>(f, c.state.n);
  put_le<double>(f, c.state.L);
  put_le<double>(f, c.gamma);
  put_le<double>(f, c.u1_bar);
  put_le<double>(f, c.u2_bar);
  put_le<double>(f, c.t);
  for (int k = 0; k < c.state.n; ++k) put_le<double>(f, c.state.u1[k]);
  for (int k = 0; k < c.state.n; ++k) put_le<double>(f, c.state.u2[k]);
  if (!f) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
  const auto n = get_le<std::int64_t>(f);
  if (n < 1 || n > (1 << 24)) throw std::runtime_error("bad grid size in checkpoint");
  Checkpoint c;
  const double L = get_le<double>(f);
  c.gamma = get_le<double>(f);
  c.u1_bar = get_le<double>(f);
  c.u2_bar = get_le<double>(f);
  c.t = get_le<double>(f);
  c.state = StateGrid(static_cast<int>(n), L);
  for (int k = 0; k < n; ++k) c.state.u1[k] = get_le<double>(f);
  for (int k = 0; k < n; ++k) c.state.u2[k] = get_le<double>(f);
  return c;
}

}  // namespace nlad
