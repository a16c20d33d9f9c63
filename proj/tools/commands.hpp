#pragma once

#include <ostream>

namespace elastica::cli {

// Exit codes: 0 success (any verdict), 1 unexpected failure, 2 schema or
// usage errors, 3 numerical-domain errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elastica::cli
