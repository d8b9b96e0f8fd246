#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "flatphase/asymptotics.hpp"
#include "flatphase/newton.hpp"

namespace flatphase {

enum class OutputFormat { text, csv, json };

OutputFormat parse_format(std::string_view name);

inline constexpr const char* kCsvHeader = "piece,X,re,im,abs_err,scaled_re,scaled_im";

/// Header plus one row per sample, 17 significant digits.
void write_csv(std::ostream& os, const std::vector<GridSample>& samples);

// JSON with a fixed field order; numbers carry 17 significant digits.
std::string to_json(const VerificationReport& r);
std::string to_json(const BoundReport& r);
std::string to_json(const FalsificationReport& r);
std::string to_json(const NewtonData& d, const ScalingLaw& law);
std::string samples_json(const std::vector<GridSample>& samples);

// Short human-readable summaries.
std::string to_text(const VerificationReport& r);
std::string to_text(const BoundReport& r);
std::string to_text(const FalsificationReport& r);
std::string to_text(const NewtonData& d, const ScalingLaw& law);

}  // namespace flatphase
