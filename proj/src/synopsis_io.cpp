#include "dpgrid/synopsis_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpgrid {

std::string format_double(double v) {
  char buf[40];
  if (!std::isfinite(v)) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

constexpr const char* kMagic = "dpgrid-synopsis v1";

void write_header(std::ostream& out, const char* method, const Rect& domain,
                  double epsilon, uint64_t seed) {
  out << kMagic << '\n';
  out << "method=" << method << '\n';
  out << "domain=" << format_double(domain.x0) << ','
      << format_double(domain.y0) << ',' << format_double(domain.x1) << ','
      << format_double(domain.y1) << '\n';
  out << "epsilon=" << format_double(epsilon) << '\n';
  out << "seed=" << seed << '\n';
}

}  // namespace

void serialize_synopsis(const GridSynopsis& s, std::ostream& out) {
  write_header(out, "ug", s.domain, s.epsilon_used, s.seed);
  out << "m=" << s.m << '\n';
  for (int i = 0; i < s.m; ++i) {
    for (int j = 0; j < s.m; ++j) {
      out << i << ',' << j << ',' << format_double(s.count_at(i, j)) << ','
          << format_double(s.variance_per_cell) << '\n';
    }
  }
}

void serialize_synopsis(const AdaptiveSynopsis& s, std::ostream& out) {
  write_header(out, "ag", s.domain, s.epsilon_used, s.seed);
  out << "alpha=" << format_double(s.alpha) << '\n';
  out << "m1=" << s.m1 << '\n';
  if (!s.cells.empty()) {
    out << "vvar=" << format_double(s.cells.front().v_variance) << '\n';
    out << "uvar=" << format_double(s.cells.front().u_variance) << '\n';
  }
  for (int i = 0; i < s.m1; ++i) {
    for (int j = 0; j < s.m1; ++j) {
      const AdaptiveCell& c = s.cell(i, j);
      out << "cell " << i << ',' << j << " m2=" << c.m2
          << " v=" << format_double(c.v)
          << " vprime=" << format_double(c.v_prime) << '\n';
      for (int a = 0; a < c.m2; ++a) {
        for (int b = 0; b < c.m2; ++b) {
          const std::size_t k = static_cast<std::size_t>(a) * c.m2 + b;
          out << a << ',' << b << ',' << format_double(c.u[k]) << ','
              << format_double(c.u_prime[k]) << '\n';
        }
      }
    }
  }
}

void serialize_synopsis(const HierSynopsis& s, std::ostream& out) {
  write_header(out, "hier", s.domain, s.epsilon_used, s.seed);
  out << "b=" << s.b << '\n';
  out << "d=" << s.d << '\n';
  out << "leafm=" << s.leaf_m << '\n';
  for (int k = 0; k < s.d; ++k) {
    const HierLevel& lvl = s.levels[k];
    out << "level " << (k + 1) << " m=" << lvl.m << '\n';
    for (int i = 0; i < lvl.m; ++i) {
      for (int j = 0; j < lvl.m; ++j) {
        out << i << ',' << j << ','
            << format_double(lvl.counts[static_cast<std::size_t>(i) * lvl.m + j])
            << ',' << format_double(lvl.variance) << '\n';
      }
    }
  }
  out << "leaves\n";
  const auto& leaves = s.leaves();
  for (int i = 0; i < s.leaf_m; ++i) {
    for (int j = 0; j < s.leaf_m; ++j) {
      out << i << ',' << j << ','
          << format_double(leaves[static_cast<std::size_t>(i) * s.leaf_m + j])
          << '\n';
    }
  }
}

void serialize_synopsis(const AnySynopsis& s, std::ostream& out) {
  std::visit([&](const auto& syn) { serialize_synopsis(syn, out); }, s);
}

std::string synopsis_to_string(const AnySynopsis& s) {
  std::ostringstream out;
  serialize_synopsis(s, out);
  return out.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("synopsis parse error at line " +
                             std::to_string(lineno_) + ": " + what);
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) fail(std::string("unexpected end of file, expected ") + what);
    return line;
  }

 private:
  std::istream& in_;
  std::size_t lineno_ = 0;
};

// "key=value" with an exact key match.
std::string expect_kv(LineReader& r, const std::string& key) {
  std::string line = r.require(key.c_str());
  if (line.rfind(key + "=", 0) != 0) r.fail("expected " + key + "=...");
  return line.substr(key.size() + 1);
}

double to_double(LineReader& r, const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) r.fail("bad number '" + s + "'");
  return v;
}

long to_long(LineReader& r, const std::string& s) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty()) r.fail("bad integer '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

// "i,j,<doubles...>" row; checks the expected cell coordinates.
std::vector<double> expect_row(LineReader& r, int i, int j, int n_values) {
  const std::string line = r.require("cell row");
  const auto fields = split(line, ',');
  if (static_cast<int>(fields.size()) != 2 + n_values) r.fail("bad row arity");
  if (to_long(r, fields[0]) != i || to_long(r, fields[1]) != j) {
    r.fail("row out of order");
  }
  std::vector<double> vals(n_values);
  for (int k = 0; k < n_values; ++k) vals[k] = to_double(r, fields[2 + k]);
  return vals;
}

GridSynopsis parse_ug(LineReader& r, const Rect& domain, double epsilon,
                      uint64_t seed) {
  GridSynopsis s;
  s.domain = domain;
  s.epsilon_used = epsilon;
  s.seed = seed;
  s.budget.epsilon_total = epsilon;
  s.m = static_cast<int>(to_long(r, expect_kv(r, "m")));
  if (s.m < 1) r.fail("m must be >= 1");
  s.counts.assign(static_cast<std::size_t>(s.m) * s.m, 0.0);
  for (int i = 0; i < s.m; ++i) {
    for (int j = 0; j < s.m; ++j) {
      const auto vals = expect_row(r, i, j, 2);
      s.counts[static_cast<std::size_t>(i) * s.m + j] = vals[0];
      s.variance_per_cell = vals[1];
    }
  }
  return s;
}

AdaptiveSynopsis parse_ag(LineReader& r, const Rect& domain, double epsilon,
                          uint64_t seed) {
  AdaptiveSynopsis s;
  s.domain = domain;
  s.epsilon_used = epsilon;
  s.seed = seed;
  s.budget.epsilon_total = epsilon;
  s.alpha = to_double(r, expect_kv(r, "alpha"));
  s.m1 = static_cast<int>(to_long(r, expect_kv(r, "m1")));
  if (s.m1 < 1) r.fail("m1 must be >= 1");
  const double vvar = to_double(r, expect_kv(r, "vvar"));
  const double uvar = to_double(r, expect_kv(r, "uvar"));
  s.cells.resize(static_cast<std::size_t>(s.m1) * s.m1);
  for (int i = 0; i < s.m1; ++i) {
    for (int j = 0; j < s.m1; ++j) {
      std::string line = r.require("cell header");
      int ci, cj, m2;
      double v, vprime;
      if (std::sscanf(line.c_str(), "cell %d,%d m2=%d v=%lf vprime=%lf", &ci,
                      &cj, &m2, &v, &vprime) != 5 ||
          ci != i || cj != j || m2 < 1) {
        r.fail("bad cell header '" + line + "'");
      }
      // sscanf %lf rounds like strtod, but re-read the exact fields to stay
      // bit-faithful on platforms where they differ.
      const auto vpos = line.find(" v=");
      const auto vppos = line.find(" vprime=");
      v = to_double(r, line.substr(vpos + 3, vppos - (vpos + 3)));
      vprime = to_double(r, line.substr(vppos + 8));
      AdaptiveCell& c = s.cell(i, j);
      c.m2 = m2;
      c.v = v;
      c.v_prime = vprime;
      c.v_variance = vvar;
      c.u_variance = uvar;
      const std::size_t leaves = static_cast<std::size_t>(m2) * m2;
      c.u.resize(leaves);
      c.u_prime.resize(leaves);
      for (int a = 0; a < m2; ++a) {
        for (int b = 0; b < m2; ++b) {
          const auto vals = expect_row(r, a, b, 2);
          c.u[static_cast<std::size_t>(a) * m2 + b] = vals[0];
          c.u_prime[static_cast<std::size_t>(a) * m2 + b] = vals[1];
        }
      }
    }
  }
  return s;
}

HierSynopsis parse_hier(LineReader& r, const Rect& domain, double epsilon,
                        uint64_t seed) {
  HierSynopsis s;
  s.domain = domain;
  s.epsilon_used = epsilon;
  s.seed = seed;
  s.budget.epsilon_total = epsilon;
  s.b = static_cast<int>(to_long(r, expect_kv(r, "b")));
  s.d = static_cast<int>(to_long(r, expect_kv(r, "d")));
  s.leaf_m = static_cast<int>(to_long(r, expect_kv(r, "leafm")));
  if (s.b < 2 || s.d < 2 || s.leaf_m < 1) r.fail("bad hierarchy shape");
  s.levels.resize(s.d);
  for (int k = 0; k < s.d; ++k) {
    std::string line = r.require("level header");
    int level_no, m;
    if (std::sscanf(line.c_str(), "level %d m=%d", &level_no, &m) != 2 ||
        level_no != k + 1 || m < 1) {
      r.fail("bad level header '" + line + "'");
    }
    HierLevel& lvl = s.levels[k];
    lvl.m = m;
    lvl.counts.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const auto vals = expect_row(r, i, j, 2);
        lvl.counts[static_cast<std::size_t>(i) * m + j] = vals[0];
        lvl.variance = vals[1];
      }
    }
  }
  if (s.levels.back().m != s.leaf_m) r.fail("leaf level size mismatch");
  if (r.require("leaves block") != "leaves") r.fail("expected 'leaves'");
  s.refined.assign(s.d, {});
  auto& leaves = s.refined.back();
  leaves.assign(static_cast<std::size_t>(s.leaf_m) * s.leaf_m, 0.0);
  for (int i = 0; i < s.leaf_m; ++i) {
    for (int j = 0; j < s.leaf_m; ++j) {
      leaves[static_cast<std::size_t>(i) * s.leaf_m + j] =
          expect_row(r, i, j, 1)[0];
    }
  }
  return s;
}

}  // namespace

AnySynopsis parse_synopsis(std::istream& in) {
  LineReader r(in);
  if (r.require("magic") != kMagic) r.fail("not a dpgrid synopsis file");
  const std::string method = expect_kv(r, "method");
  const auto dom = split(expect_kv(r, "domain"), ',');
  if (dom.size() != 4) r.fail("bad domain");
  Rect domain{to_double(r, dom[0]), to_double(r, dom[1]), to_double(r, dom[2]),
              to_double(r, dom[3])};
  if (!domain.valid()) r.fail("invalid domain rectangle");
  const double epsilon = to_double(r, expect_kv(r, "epsilon"));
  const uint64_t seed =
      std::strtoull(expect_kv(r, "seed").c_str(), nullptr, 10);
  if (method == "ug") return parse_ug(r, domain, epsilon, seed);
  if (method == "ag") return parse_ag(r, domain, epsilon, seed);
  if (method == "hier") return parse_hier(r, domain, epsilon, seed);
  r.fail("unknown method '" + method + "'");
}

AnySynopsis parse_synopsis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open synopsis file " + path);
  return parse_synopsis(in);
}

void write_synopsis_file(const AnySynopsis& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write synopsis file " + path);
  serialize_synopsis(s, out);
  if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

}  // namespace dpgrid
