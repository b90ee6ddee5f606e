#pragma once

#include <json.hpp>
#include <string>

#include "fraglab/diophantine.hpp"
#include "fraglab/order_analytic.hpp"
#include "fraglab/truncation.hpp"

namespace fraglab {

using json = nlohmann::json;

/// Shortest text that round-trips, capped at 17 significant digits.
std::string format17(double v);

json to_json(const dioph::RationalityVerdict& v, double x);
json to_json(const order::Evaluation& e);
json to_json(const stick::TruncatedResult& r);

}  // namespace fraglab
