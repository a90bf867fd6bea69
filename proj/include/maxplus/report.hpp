#pragma once

// Text renderings of analysis results.
//
// Two formats share one field list:
//   text     "key: value" lines, lists as {a,b}, arcs as (i,j)
//   machine  "key=value" lines, lists comma separated, groups ';' separated,
//            arcs written i>j
//
// SpectralSummary fields, in order: eps, rho, gamma, sigma, critical_nodes,
// critical_arcs, critical_classes, recurrence_classes, marginal_nodes.

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "maxplus/io.hpp"
#include "maxplus/spectral.hpp"

namespace maxplus::report {

enum class Format { text, machine };

class Writer {
 public:
  Writer(std::ostream& out, Format fmt) : out_(out), fmt_(fmt) {}

  Format format() const noexcept { return fmt_; }

  void field(const std::string& key, const std::string& value) {
    out_ << key << (fmt_ == Format::text ? ": " : "=") << value << '\n';
  }
  void field(const std::string& key, Scalar value) { field(key, io::format_scalar(value)); }
  void field(const std::string& key, std::size_t value) { field(key, std::to_string(value)); }
  void field(const std::string& key, bool value) { field(key, std::string(value ? "true" : "false")); }

  std::string nodes(const NodeSet& s) const {
    std::ostringstream ss;
    if (fmt_ == Format::text) ss << '{';
    for (std::size_t k = 0; k < s.size(); ++k) ss << (k ? "," : "") << s[k];
    if (fmt_ == Format::text) ss << '}';
    return ss.str();
  }

  std::string groups(const std::vector<NodeSet>& g) const {
    std::string out;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (k) out += fmt_ == Format::text ? " " : ";";
      out += nodes(g[k]);
    }
    return out;
  }

  std::string arcs(const ArcSet& a) const {
    std::ostringstream ss;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (fmt_ == Format::text)
        ss << (k ? " " : "") << '(' << a[k].first << ',' << a[k].second << ')';
      else
        ss << (k ? ";" : "") << a[k].first << '>' << a[k].second;
    }
    return ss.str();
  }

  std::string vector(const Vector& v) const {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? (fmt_ == Format::text ? " " : ",") : "") + io::format_scalar(v[k]);
    return out;
  }

 private:
  std::ostream& out_;
  Format fmt_;
};

inline void write_summary(Writer& w, const SpectralSummary& s) {
  w.field("eps", s.eps);
  w.field("rho", s.rho);
  w.field("gamma", s.gamma);
  w.field("sigma", s.sigma);
  w.field("critical_nodes", w.nodes(s.critical_nodes));
  w.field("critical_arcs", w.arcs(s.critical_arcs));
  w.field("critical_classes", w.groups(s.critical_classes));
  w.field("recurrence_classes", w.groups(s.recurrence_classes));
  w.field("marginal_nodes", w.nodes(s.marginal_nodes));
}

}  // namespace maxplus::report
