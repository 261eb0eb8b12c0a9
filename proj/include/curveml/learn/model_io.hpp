#pragma once

// Flat text serialization of trained models.
//
//   curveml-model v1
//   kind <nb|nb-gaussian|logistic|forest>
//   classes <K> <name_0> ... <name_{K-1}>
//   <kind-specific records, one per line: a keyword then space-separated fields>
//   end
//
// Reals are written in shortest round-trip form, so write then read is exact.

#include "curveml/learn/classifier.hpp"

#include <iosfwd>
#include <string>

namespace curveml::learn {

void write_model(std::ostream& out, const TrainedModel& model);
std::string model_to_string(const TrainedModel& model);

/// Throws InputError naming the line on any malformed or missing record.
TrainedModel read_model(std::istream& in);
TrainedModel model_from_string(const std::string& text);

} // namespace curveml::learn
