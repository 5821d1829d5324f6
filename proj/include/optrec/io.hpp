#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "optrec/envelopes.hpp"

namespace optrec {

/// Locale-independent decimal with 17 significant digits ("inf", "-inf", "nan"
/// for non-finite values).
std::string format_number(double v);

/// Parses a decimal number (also "inf"/"-inf"); throws ArgumentError.
double parse_number(std::string_view text);

/// One CSV line from fields, joined with ',' and terminated by '\n'.
std::string csv_line(const std::vector<std::string>& fields);

/// Sample set from CSV with header x_1,...,x_d,y,eps.
SampleSet<> read_samples_csv(std::istream& in, double alpha, Metric metric);
SampleSet<> read_samples_csv_file(const std::string& path, double alpha, Metric metric);

void write_samples_csv(std::ostream& out, const SampleSet<>& s);

}  // namespace optrec
