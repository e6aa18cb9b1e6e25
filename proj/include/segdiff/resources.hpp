#pragma once

#include <string>
#include <string_view>

namespace segdiff::resources {

// Contents of a file from data/, compiled into the library.
std::string_view get(const std::string& name);

}  // namespace segdiff::resources
