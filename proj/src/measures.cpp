#include "ahprank/measures.hpp"

#include <algorithm>
#include <cmath>

#include "ahprank/errors.hpp"

namespace ahprank {

std::string_view measure_name(MeasureId id) {
  switch (id) {
    case MeasureId::YulesY: return "YulesY";
    case MeasureId::Cosine: return "Cosine";
    case MeasureId::Laplace: return "Laplace";
    case MeasureId::Leverage: return "Leverage";
    case MeasureId::GoodmanKruskalLambda: return "Lambda";
    case MeasureId::InterestFactor: return "InterestFactor";
    case MeasureId::CertaintyFactor: return "Certainty";
  }
  return "?";
}

std::optional<MeasureId> measure_from_name(std::string_view name) {
  for (MeasureId id : kAllMeasures)
    if (measure_name(id) == name) return id;
  return std::nullopt;
}

namespace {

double yules_y(double f11, double f10, double f01, double f00) {
  const double a = std::sqrt(f11 * f00);
  const double b = std::sqrt(f10 * f01);
  return a + b == 0.0 ? 0.0 : (a - b) / (a + b);
}

double goodman_kruskal_lambda(double f11, double f10, double f01, double f00, double n) {
  const double rows_max = std::max(f11, f10) + std::max(f01, f00);
  const double cols_max = std::max(f11, f01) + std::max(f10, f00);
  const double row_marg = std::max(f11 + f10, f01 + f00);
  const double col_marg = std::max(f11 + f01, f10 + f00);
  const double denom = 2.0 * n - row_marg - col_marg;
  return denom == 0.0 ? 0.0 : (rows_max + cols_max - row_marg - col_marg) / denom;
}

double certainty_factor(double f11, double fx, double fy, double n) {
  if (fx == 0.0) return 0.0;
  const double py = fy / n;
  if (py == 0.0 || py == 1.0) return 0.0;
  const double conf = f11 / fx;
  return conf >= py ? (conf - py) / (1.0 - py) : (conf - py) / py;
}

}  // namespace

double measure_value(MeasureId id, const ContingencyTable& t) {
  if (!t.consistent() || t.n == 0)
    throw ArgumentError("contingency table is inconsistent or empty");

  const double f11 = static_cast<double>(t.f11);
  const double f10 = static_cast<double>(t.f10);
  const double f01 = static_cast<double>(t.f01);
  const double f00 = static_cast<double>(t.f00);
  const double n = static_cast<double>(t.n);
  const double fx = f11 + f10;
  const double fy = f11 + f01;

  switch (id) {
    case MeasureId::YulesY:
      return yules_y(f11, f10, f01, f00);
    case MeasureId::Cosine:
      return fx == 0.0 || fy == 0.0 ? 0.0 : f11 / std::sqrt(fx * fy);
    case MeasureId::Laplace:
      return (f11 + 1.0) / (fx + 2.0);
    case MeasureId::Leverage:
      // Integer numerator keeps exact independence at exactly zero.
      return static_cast<double>(static_cast<long double>(t.f11) * t.n -
                                 static_cast<long double>(t.fx()) * t.fy()) /
             (n * n);
    case MeasureId::GoodmanKruskalLambda:
      return goodman_kruskal_lambda(f11, f10, f01, f00, n);
    case MeasureId::InterestFactor:
      return fx == 0.0 || fy == 0.0 ? 0.0 : n * f11 / (fx * fy);
    case MeasureId::CertaintyFactor:
      return certainty_factor(f11, fx, fy, n);
  }
  return 0.0;
}

std::vector<double> measure_vector(std::span<const MeasureId> ids, const ContingencyTable& t) {
  std::vector<double> out;
  out.reserve(ids.size());
  for (MeasureId id : ids) out.push_back(measure_value(id, t));
  return out;
}

std::vector<double> minmax_scale(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("minmax_scale needs at least one value");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<double> out(values.size(), 0.5);
  if (range > 0.0)
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / range;
  return out;
}

}  // namespace ahprank
