#include "fraglab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fraglab {

std::string format17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

json to_json(const dioph::RationalityVerdict& v, double x) {
  json j{{"x", x}, {"evidence_depth", v.evidence_depth}};
  if (v.kind == dioph::RationalityVerdict::Kind::rational) {
    j["kind"] = "rational";
    j["p"] = v.p;
    j["q"] = v.q;
  } else {
    j["kind"] = "irrational_like";
    if (v.kappa_estimate) j["kappa_estimate"] = *v.kappa_estimate;
  }
  return j;
}

json to_json(const order::Evaluation& e) {
  return json{{"value", e.value},
              {"achieved_tol", e.achieved_tol},
              {"scheme", order::scheme_name(e.scheme)},
              {"tail_cost", e.tail_cost}};
}

json to_json(const stick::TruncatedResult& r) {
  return json{{"value", r.value},
              {"dropped_mass_bound", r.dropped_mass_bound},
              {"block_error_bound", r.block_error_bound},
              {"blocks_used", r.blocks_used},
              {"prop_cut_bound", r.prop_cut_bound},
              {"chebyshev_bound", r.chebyshev_bound},
              {"gap_mass", r.gap_mass},
              {"block_size", r.block_size},
              {"inner_ell_radius", r.inner_ell_radius},
              {"outer_ell_radius", r.outer_ell_radius}};
}

}  // namespace fraglab
