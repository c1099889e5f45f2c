#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qasurv/feature_row.hpp"

namespace qasurv {

inline constexpr const char* kFeatureCsvHeader =
    "question_id,site,tanswer,solved,bodylength,titlelength,hasexample,"
    "tagscount,sumpeople,zscore";

// Writes the fixed-schema feature table: booleans as 0/1, tanswer with
// four decimals, zscore in shortest round-trip form, LF line endings.
void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows);
void write_feature_csv_file(const std::string& path,
                            const std::vector<FeatureRow>& rows);

// Reads a table produced by write_feature_csv. The header must match
// exactly; malformed lines raise InvalidInputError with a line number.
std::vector<FeatureRow> read_feature_csv(std::istream& in,
                                         const std::string& source_name);
std::vector<FeatureRow> read_feature_csv_file(const std::string& path);

}  // namespace qasurv
