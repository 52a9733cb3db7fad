#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ahprank/mining.hpp"

namespace ahprank {

/// One representative per group of mutually consistent rule measures.
enum class MeasureId {
  YulesY,
  Cosine,
  Laplace,
  Leverage,
  GoodmanKruskalLambda,
  InterestFactor,
  CertaintyFactor,
};

inline constexpr std::size_t kMeasureCount = 7;

inline constexpr std::array<MeasureId, kMeasureCount> kAllMeasures = {
    MeasureId::YulesY,   MeasureId::Cosine,         MeasureId::Laplace,
    MeasureId::Leverage, MeasureId::GoodmanKruskalLambda, MeasureId::InterestFactor,
    MeasureId::CertaintyFactor,
};

std::string_view measure_name(MeasureId id);
std::optional<MeasureId> measure_from_name(std::string_view name);

/// Value of one measure on a rule's contingency table. Degenerate
/// denominators yield 0 so every output is finite.
double measure_value(MeasureId id, const ContingencyTable& t);

/// All measures of `ids`, in order.
std::vector<double> measure_vector(std::span<const MeasureId> ids, const ContingencyTable& t);

/// (v - min) / (max - min); a constant input maps to 0.5 everywhere.
std::vector<double> minmax_scale(std::span<const double> values);

}  // namespace ahprank
