#pragma once
#include <string>

namespace vcell {

// shortest decimal form that parses back to exactly the same double
std::string format_double(double v);

} // namespace vcell
