#include <charconv>
#include <cmath>
#include <sstream>

#include "chernlab/error.hpp"
#include "chernlab/schwarz.hpp"

namespace chernlab {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double number(const std::string& s, const std::string& where) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::SchemaError, "grid: bad number '" + t + "' in " + where);
  }
  return v;
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  const std::string prefix = "box:";
  if (text.rfind(prefix, 0) != 0) throw Error(ErrorKind::SchemaError, "grid spec must start with 'box:'");
  GridSpec g;
  bool have_center = false, have_half = false, have_n = false;
  std::stringstream ss(text.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::SchemaError, "grid: expected key=value, got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string val = item.substr(eq + 1);
    if (key == "center") {
      std::stringstream cs(val);
      std::string c;
      while (std::getline(cs, c, ',')) g.center.push_back(number(c, "center"));
      have_center = true;
    } else if (key == "half") {
      g.half = number(val, "half");
      have_half = true;
    } else if (key == "per-axis") {
      const double k = number(val, "per-axis");
      if (k < 1 || k != std::floor(k) || k > 1000) throw Error(ErrorKind::SchemaError, "grid: per-axis must be a positive integer");
      g.per_axis = static_cast<int>(k);
      have_n = true;
    } else {
      throw Error(ErrorKind::SchemaError, "grid: unknown key '" + key + "'");
    }
  }
  if (!have_center || !have_half || !have_n) {
    throw Error(ErrorKind::SchemaError, "grid needs center, half and per-axis");
  }
  if (g.center.empty()) throw Error(ErrorKind::SchemaError, "grid: empty center");
  if (g.half < 0) throw Error(ErrorKind::SchemaError, "grid: half must be nonnegative");
  return g;
}

std::string GridSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "box:center=";
  for (std::size_t i = 0; i < center.size(); ++i) os << (i ? "," : "") << center[i];
  os << ";half=" << half << ";per-axis=" << per_axis;
  return os.str();
}

std::vector<ComplexVector> GridSpec::points(int n) const {
  const int d = 2 * n;
  std::vector<double> c;
  if (center.size() == 1) {
    c.assign(d, center[0]);
  } else if (static_cast<int>(center.size()) == d) {
    c = center;
  } else {
    throw Error(ErrorKind::DimensionMismatch, "grid center needs 1 or " + std::to_string(d) + " reals");
  }
  std::vector<double> ticks(per_axis);
  for (int k = 0; k < per_axis; ++k) {
    ticks[k] = per_axis == 1 ? 0.0 : -half + 2.0 * half * k / (per_axis - 1);
  }
  long total = 1;
  for (int a = 0; a < d; ++a) {
    total *= per_axis;
    if (total > 10'000'000) throw Error(ErrorKind::SchemaError, "grid has too many points");
  }
  std::vector<ComplexVector> pts;
  pts.reserve(static_cast<std::size_t>(total));
  std::vector<int> idx(d, 0);
  for (long p = 0; p < total; ++p) {
    ComplexVector z(n);
    for (int i = 0; i < n; ++i) {
      z(i) = Complex(c[2 * i] + ticks[idx[2 * i]], c[2 * i + 1] + ticks[idx[2 * i + 1]]);
    }
    pts.push_back(z);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < per_axis) break;
      idx[a] = 0;
    }
  }
  return pts;
}

}  // namespace chernlab
