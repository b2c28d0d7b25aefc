#pragma once

// Internal CSV helpers shared by the ingest and report writers. Quoting
// follows the usual convention: fields may be wrapped in double quotes,
// with embedded quotes doubled.

#include <string>
#include <vector>

#include "pmatch/errors.hpp"

namespace pmatch::csv {

std::string trim(const std::string& s);

// Splits one record; `source`/`line` feed ParseError diagnostics.
std::vector<std::string> split(const std::string& source, int line,
                               const std::string& record);

// Quotes a field only when it needs it.
std::string quote(const std::string& field);

}  // namespace pmatch::csv
