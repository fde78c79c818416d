#include "revsurf/runconfig.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "revsurf/expr.hpp"

namespace revsurf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double constant_value(const std::string& text, const std::string& key,
                      int line) {
  Expr e;
  try {
    e = parse_expression(text);
  } catch (const ParseError& pe) {
    throw ConfigError(key + ": " + pe.what(), line);
  }
  double v = 0.0;
  if (!e.is_constant(&v))
    throw ConfigError(key + " must be a constant expression, got \"" + text +
                          "\"",
                      line);
  return v;
}

int integer_value(const std::string& text, const std::string& key, int line) {
  const double v = constant_value(text, key, line);
  if (v != std::floor(v) || std::fabs(v) > 1e9)
    throw ConfigError(key + " must be an integer, got \"" + text + "\"", line);
  return static_cast<int>(v);
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value, got \"" + body + "\"", line_no);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (value.empty())
      throw ConfigError("missing value for " + key, line_no);
    if (!seen.insert(key).second)
      throw ConfigError("duplicate key " + key, line_no);

    if (key == "l") {
      cfg.l = value;
    } else if (key == "m") {
      cfg.m = value;
    } else if (key == "H") {
      cfg.H = value;
    } else if (key == "c1") {
      cfg.c1 = constant_value(value, key, line_no);
    } else if (key == "c2") {
      cfg.c2 = constant_value(value, key, line_no);
    } else if (key == "t_min") {
      cfg.t_min = constant_value(value, key, line_no);
    } else if (key == "t_max") {
      cfg.t_max = constant_value(value, key, line_no);
    } else if (key == "samples") {
      cfg.samples = integer_value(value, key, line_no);
      if (cfg.samples < 2)
        throw ConfigError("samples must be at least 2", line_no);
    } else if (key == "L") {
      cfg.L = constant_value(value, key, line_no);
      if (!(*cfg.L > 0.0)) throw ConfigError("L must be positive", line_no);
    } else if (key == "n_theta") {
      cfg.n_theta = integer_value(value, key, line_no);
      if (cfg.n_theta < 3)
        throw ConfigError("n_theta must be at least 3", line_no);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "tol") {
      cfg.tol = constant_value(value, key, line_no);
      if (!(cfg.tol > 0.0))
        throw ConfigError("tol must be positive", line_no);
    } else {
      throw ConfigError("unknown key " + key, line_no);
    }
  }
  for (const char* req : {"l", "m", "t_min", "t_max"})
    if (!seen.count(req))
      throw ConfigError(std::string("missing required key ") + req);
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse(buf.str());
}

ProblemSpec RunConfig::to_spec() const {
  ProblemSpec s;
  try {
    s.l = parse_expression(l);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("l: ") + e.what());
  }
  try {
    s.m = parse_expression(m);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("m: ") + e.what());
  }
  if (H) {
    try {
      s.H_display = parse_expression(*H);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("H: ") + e.what());
    }
  }
  s.c1 = c1;
  s.c2 = c2;
  s.t_min = t_min;
  s.t_max = t_max;
  s.L = L;
  s.tol = tol;
  s.validate();
  return s;
}

void write_csv(std::ostream& out, const std::vector<CurveSample>& samples) {
  out << "t,x,y,phi,eta,F,G,l\n";
  for (const auto& s : samples)
    out << format_double(s.t) << ',' << format_double(s.x) << ','
        << format_double(s.y) << ',' << format_double(s.phi) << ','
        << format_double(s.eta) << ',' << format_double(s.F) << ','
        << format_double(s.G) << ',' << format_double(s.l_val) << '\n';
}

void write_svg(std::ostream& out, const std::vector<CurveSample>& samples,
               const std::vector<SingularPointReport>& marks) {
  if (samples.size() < 2) throw Error("plot needs at least 2 samples");

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = 0.0, y_hi = 0.0;
  for (const auto& s : samples) {
    x_lo = std::min(x_lo, s.x);
    x_hi = std::max(x_hi, s.x);
    y_lo = std::min(y_lo, s.y);
    y_hi = std::max(y_hi, s.y);
  }
  if (x_hi - x_lo < 1e-9) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi - y_lo < 1e-9) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }

  // One uniform scale for both axes keeps the curve's proportions; the
  // longer extent fills the frame and the canvas shrinks to fit the
  // shorter one.
  const double margin = 40.0, frame = 800.0;
  const double scale = std::min((frame - 2.0 * margin) / (x_hi - x_lo),
                                (frame - 2.0 * margin) / (y_hi - y_lo));
  const double width = 2.0 * margin + (x_hi - x_lo) * scale;
  const double height = 2.0 * margin + (y_hi - y_lo) * scale;
  const auto px = [&](double x) { return margin + (x - x_lo) * scale; };
  const auto py = [&](double y) { return margin + (y_hi - y) * scale; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << format_double(width) << "\" height=\"" << format_double(height)
      << "\" viewBox=\"0 0 " << format_double(width) << " "
      << format_double(height) << "\">\n";
  out << "<line x1=\"" << format_double(px(x_lo)) << "\" y1=\""
      << format_double(py(0.0)) << "\" x2=\"" << format_double(px(x_hi))
      << "\" y2=\"" << format_double(py(0.0))
      << "\" stroke=\"#666666\" stroke-width=\"1\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#0b61a4\" stroke-width=\"2\" "
         "points=\"";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i) out << ' ';
    out << format_double(px(samples[i].x)) << ','
        << format_double(py(samples[i].y));
  }
  out << "\"/>\n";
  for (const auto& mk : marks) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (std::fabs(samples[i].t - mk.p) < std::fabs(samples[best].t - mk.p))
        best = i;
    out << "<circle cx=\"" << format_double(px(samples[best].x)) << "\" cy=\""
        << format_double(py(samples[best].y))
        << "\" r=\"4\" fill=\"#c0392b\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace revsurf
